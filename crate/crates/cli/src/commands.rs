use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use serde_json::{json, Value};

use polytile::homsearch::{self, DEFAULT_HOM_BUDGET};
use polytile::io::{parse_tile, parse_tiling, write_tiling};
use polytile::lattice::DEFAULT_ENUMERATION_BUDGET;
use polytile::laurent::{common_root_search, default_moduli, RootSearch, DEFAULT_ROOT_BUDGET};
use polytile::scalar::{gcd_i64, is_prime};
use polytile::semicross_stats::{self as stats, TypeSpec};
use polytile::tiles::NormalizedTile;
use polytile::torus_search::{self, Dedup, SearchOptions, DEFAULT_NODE_BUDGET};
use polytile::{IntVec, Lattice, PeriodicTiling, Tile};

use crate::report::{basis, vector, vectors, CliError, RunReport};
use crate::{Command, Common};

type CliResult<T> = Result<T, CliError>;

const MAX_LISTED_WITNESSES: usize = 20;
const DEFAULT_PATCH_BUDGET: u64 = 1 << 32;

pub fn run(cmd: &Command, common: &Common) -> CliResult<ExitCode> {
    let start = Instant::now();
    let (mut report, passed) = match cmd {
        Command::Analyze { tile, moduli } => analyze(tile, moduli.as_deref(), common)?,
        Command::Enumerate { tile } => enumerate(tile, common)?,
        Command::Verify {
            tiling,
            checks,
            multipliers,
        } => verify(tiling, checks, multipliers.as_deref(), common)?,
        Command::NonlatticeSearch { tile } => nonlattice_search(tile, common)?,
        Command::PatchProve { tile, radius } => patch_prove(tile, *radius, common)?,
        Command::Census {
            tiling,
            type_spec,
            center,
            samples,
        } => census(tiling, type_spec.as_deref(), center.as_deref(), *samples, common)?,
        Command::CyclicConstruct { q } => cyclic_construct(*q, common)?,
    };
    if common.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis());
    }
    let json = report.to_json();
    if let Some(path) = &common.report {
        fs::write(path, &json).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    print!("{json}");
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn load_tile(path: &Path) -> CliResult<NormalizedTile> {
    Ok(parse_tile(&read(path)?)?)
}

fn load_tiling(path: &Path) -> CliResult<PeriodicTiling> {
    Ok(parse_tiling(&read(path)?)?)
}

fn parse_ints(text: &str) -> CliResult<Vec<i64>> {
    text.split(',')
        .map(|w| {
            w.trim()
                .parse()
                .map_err(|_| CliError::Input(format!("bad integer {w:?} in {text:?}")))
        })
        .collect()
}

fn parse_torus(spec: &str, dim: usize) -> CliResult<Lattice> {
    let rows: Vec<Vec<i64>> = spec.split(';').map(parse_ints).collect::<CliResult<_>>()?;
    let lattice = match rows.as_slice() {
        [single] if single.len() == 1 => Lattice::scaled_identity(dim, single[0])?,
        [diag] => {
            if diag.len() != dim {
                return Err(CliError::Input(format!(
                    "torus diagonal has {} entries, tile dimension is {dim}",
                    diag.len()
                )));
            }
            Lattice::diagonal(diag)?
        }
        _ => {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(CliError::Input(format!(
                    "torus basis must be {dim} rows of {dim} entries"
                )));
            }
            let gens: Vec<IntVec> = rows.into_iter().map(IntVec::from).collect();
            Lattice::from_generators(dim, &gens)?
        }
    };
    Ok(lattice)
}

/// The `--torus` lattice, defaulting to `qZ^n` for tiles of prime size `q`.
fn torus_for(tile: &Tile, common: &Common) -> CliResult<Lattice> {
    match &common.torus {
        Some(spec) => parse_torus(spec, tile.dim()),
        None if is_prime(tile.len() as i64) => Ok(Lattice::scaled_identity(tile.dim(), tile.len() as i64)?),
        None => Err(CliError::Input(
            "--torus is required for tiles of non-prime size".into(),
        )),
    }
}

fn search_options(common: &Common) -> SearchOptions {
    let dedup = Dedup::from(common.dedup);
    SearchOptions {
        dedup,
        limit: common.limit,
        workers: common.workers,
        node_budget: common.budget.unwrap_or(DEFAULT_NODE_BUDGET),
        cell_budget: DEFAULT_ENUMERATION_BUDGET,
        // every translation class has a member with a tile at the origin
        fix_origin: dedup != Dedup::None,
    }
}

/// Writes tilings to `--out-dir` and returns their paths, or inlines them.
fn emit(common: &Common, prefix: &str, tilings: &[PeriodicTiling]) -> CliResult<Vec<Value>> {
    let Some(dir) = &common.out_dir else {
        return Ok(tilings.iter().map(|t| Value::from(write_tiling(t))).collect());
    };
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    tilings
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let path = dir.join(format!("{prefix}-{:04}.txt", i + 1));
            fs::write(&path, write_tiling(t))
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(Value::from(path.display().to_string()))
        })
        .collect()
}

fn describe_tile(report: &mut RunReport, tile: &NormalizedTile) {
    report.instance.insert("dim".into(), json!(tile.tile.dim()));
    report.instance.insert("size".into(), json!(tile.tile.len()));
    report.instance.insert("points".into(), vectors(tile.tile.points()));
    if !tile.offset.is_zero() {
        report.instance.insert("translated_by".into(), vector(&tile.offset));
    }
}

fn describe_torus(report: &mut RunReport, lattice: &Lattice) {
    report.instance.insert("torus".into(), basis(lattice));
    report.instance.insert("cells".into(), json!(lattice.det()));
}

fn analyze(path: &Path, moduli: Option<&str>, common: &Common) -> CliResult<(RunReport, bool)> {
    let nt = load_tile(path)?;
    let tile = &nt.tile;
    let mut report = RunReport::new("analyze");
    describe_tile(&mut report, &nt);
    report
        .verdicts
        .insert("generates_zn".into(), json!(tile.generates_zn()));

    let moduli = match moduli {
        Some(m) => parse_ints(m)?
            .into_iter()
            .map(|x| {
                u64::try_from(x)
                    .ok()
                    .filter(|&x| x > 0)
                    .ok_or(CliError::Input(format!("bad modulus {x}")))
            })
            .collect::<CliResult<Vec<u64>>>()?,
        None => default_moduli(tile),
    };
    let roots = common_root_search(tile, &moduli, common.budget.unwrap_or(DEFAULT_ROOT_BUDGET))?;
    let root_verdict = match &roots {
        RootSearch::Found(pt) => json!({
            "status": "found",
            "modulus": pt.modulus(),
            "exponents": vector(pt.exponents()),
        }),
        RootSearch::NotFoundOnGrid => json!({ "status": "not_found_on_grid", "moduli": moduli }),
        RootSearch::CertifiedAbsent => json!({ "status": "certified_absent", "moduli": moduli }),
    };
    report.verdicts.insert("common_root".into(), root_verdict);

    let hom = homsearch::find_bijective_hom(tile, common.budget.unwrap_or(DEFAULT_HOM_BUDGET))?;
    let (hom_verdict, conclusion) = match &hom {
        Some((h, kernel)) => (
            json!({
                "group": h.group().factors(),
                "images": h.images(),
                "kernel": basis(kernel),
            }),
            "lattice tiling exists",
        ),
        None => (Value::Null, "no lattice tiling"),
    };
    report.verdicts.insert("bijective_hom".into(), hom_verdict);
    report.verdicts.insert("conclusion".into(), json!(conclusion));
    Ok((report, true))
}

fn enumerate(path: &Path, common: &Common) -> CliResult<(RunReport, bool)> {
    let nt = load_tile(path)?;
    let lattice = torus_for(&nt.tile, common)?;
    let opts = search_options(common);
    let mut report = RunReport::new("enumerate");
    describe_tile(&mut report, &nt);
    describe_torus(&mut report, &lattice);
    report.instance.insert("dedup".into(), json!(opts.dedup));
    let found = torus_search::enumerate_tilings(&nt.tile, &lattice, &opts)?;
    let mut lattice_count = 0;
    for t in &found.tilings {
        if t.is_lattice_tiling(u64::MAX)? {
            lattice_count += 1;
        }
    }
    let total = found.tilings.len();
    report.counts.insert("tilings".into(), json!(total));
    report.counts.insert("lattice".into(), json!(lattice_count));
    report.counts.insert("nonlattice".into(), json!(total - lattice_count));
    if opts.dedup == Dedup::Congruence && opts.limit.is_none() {
        report
            .verdicts
            .insert("unique_up_to_congruence".into(), json!(total == 1));
    }
    report.nodes = found.nodes;
    report.witnesses = emit(common, "tiling", &found.tilings)?;
    Ok((report, true))
}

fn nonlattice_search(path: &Path, common: &Common) -> CliResult<(RunReport, bool)> {
    let nt = load_tile(path)?;
    let lattice = torus_for(&nt.tile, common)?;
    let mut report = RunReport::new("nonlattice-search");
    describe_tile(&mut report, &nt);
    describe_torus(&mut report, &lattice);
    let found = torus_search::find_nonlattice(&nt.tile, &lattice, &search_options(common))?;
    report
        .verdicts
        .insert("nonlattice_found".into(), json!(found.is_some()));
    report.witnesses = emit(common, "nonlattice", found.as_slice())?;
    Ok((report, true))
}

fn patch_prove(path: &Path, radius: u32, common: &Common) -> CliResult<(RunReport, bool)> {
    let nt = load_tile(path)?;
    let mut report = RunReport::new("patch-prove");
    describe_tile(&mut report, &nt);
    report.instance.insert("max_radius".into(), json!(radius));
    let res = torus_search::patch_prove(&nt.tile, radius, common.budget.unwrap_or(DEFAULT_PATCH_BUDGET))?;
    report.verdicts.insert("verdict".into(), json!(res.verdict));
    report.verdicts.insert("radius".into(), json!(res.radius));
    report.nodes = res.nodes;
    Ok((report, true))
}

const ALL_CHECKS: [&str; 6] = ["cover", "period", "product", "exclusion", "blowup", "census"];

fn verify(path: &Path, checks: &str, multipliers: Option<&str>, common: &Common) -> CliResult<(RunReport, bool)> {
    let t = load_tiling(path)?;
    let size = t.tile().len() as i64;
    let budget = common.budget.unwrap_or(DEFAULT_ENUMERATION_BUDGET);
    let wanted: Vec<&str> = if checks.trim() == "all" {
        ALL_CHECKS.to_vec()
    } else {
        let list: Vec<&str> = checks.split(',').map(str::trim).collect();
        if let Some(bad) = list.iter().find(|c| !ALL_CHECKS.contains(c)) {
            return Err(CliError::Input(format!(
                "unknown check {bad:?}; expected one of {ALL_CHECKS:?} or all"
            )));
        }
        list
    };
    let multipliers = match multipliers {
        Some(m) => parse_ints(m)?,
        None => std::iter::once(-1)
            .chain((2..=2 * size).filter(|&a| gcd_i64(a, size) == 1))
            .collect(),
    };

    let mut report = RunReport::new("verify");
    report.instance.insert("dim".into(), json!(t.dim()));
    report.instance.insert("size".into(), json!(size));
    report.instance.insert("period".into(), basis(t.period()));
    report.instance.insert("centers".into(), json!(t.centers().len()));
    report.instance.insert("checks".into(), json!(wanted));

    let cover = t.verify(budget)?;
    let mut passed = true;
    if wanted.contains(&"cover") || !cover.valid {
        passed &= cover.valid;
        report.verdicts.insert("cover".into(), json!(cover.valid));
        report.counts.insert("uncovered".into(), json!(cover.uncovered.len()));
        report
            .counts
            .insert("doubly_covered".into(), json!(cover.doubly_covered.len()));
        for (kind, cells) in [
            ("uncovered", &cover.uncovered),
            ("doubly_covered", &cover.doubly_covered),
        ] {
            for c in cells.iter().take(MAX_LISTED_WITNESSES) {
                report.witnesses.push(json!({ "kind": kind, "cell": vector(c) }));
            }
        }
    }
    if !cover.valid {
        // the remaining checks presuppose an exact cover
        return Ok((report, false));
    }
    report
        .verdicts
        .insert("lattice".into(), json!(t.is_lattice_tiling(budget)?));
    report.verdicts.insert("cyclic".into(), json!(t.is_cyclic()));

    if wanted.contains(&"period") {
        let period = t.period_lattice(budget)?;
        report.instance.insert("period_lattice".into(), basis(&period));
        if is_prime(size) {
            let mut ok = true;
            for d in t.tile().difference_set() {
                ok &= period.contains(&d.scale(size))?;
            }
            passed &= ok;
            report.verdicts.insert("period".into(), json!(ok));
        } else {
            report
                .verdicts
                .insert("period".into(), json!("skipped: tile size is not prime"));
        }
    }
    for (name, check) in [("product", 0), ("exclusion", 1), ("blowup", 2)] {
        if !wanted.contains(&name) {
            continue;
        }
        let mut results = serde_json::Map::new();
        for &a in &multipliers {
            let ok = match check {
                0 => t.check_product_identity(a, budget)?,
                1 => t.check_difference_exclusion(a, budget)?,
                _ => t.blow_up(a)?.is_valid(budget)?,
            };
            passed &= ok;
            results.insert(a.to_string(), json!(ok));
        }
        report.verdicts.insert(name.into(), Value::Object(results));
    }
    if wanted.contains(&"census") {
        let semicross = is_prime(size) && size > 2 && *t.tile() == Tile::semicross(t.dim());
        if semicross {
            let mut ok = true;
            let mut per_k = serde_json::Map::new();
            for k in 1..size as u32 {
                let k_ok = stats::check_type_census(&t, k)?;
                ok &= k_ok;
                per_k.insert(k.to_string(), json!(k_ok));
            }
            let pairs = stats::check_pair_sums(&t, &t.centers()[0])?;
            let ones = stats::check_all_ones_shift(&t);
            let short = stats::check_no_short_types(&t)?;
            ok &= pairs && ones && short;
            passed &= ok;
            report.verdicts.insert(
                "census".into(),
                json!({ "type_1k": per_k, "pair_sums": pairs, "all_ones_shift": ones, "no_short_types": short }),
            );
        } else {
            report
                .verdicts
                .insert("census".into(), json!("skipped: tile is not a prime-size semi-cross"));
        }
    }
    Ok((report, passed))
}

fn census(
    path: &Path,
    type_spec: Option<&str>,
    center: Option<&str>,
    samples: usize,
    common: &Common,
) -> CliResult<(RunReport, bool)> {
    let t = load_tiling(path)?;
    let mut report = RunReport::new("census");
    report.instance.insert("dim".into(), json!(t.dim()));
    report.instance.insert("period".into(), basis(t.period()));
    if let Some(spec) = type_spec {
        let spec: TypeSpec = spec.parse()?;
        let w = match center {
            Some(c) => IntVec::from(parse_ints(c)?),
            None => t.centers()[0].clone(),
        };
        if w.dim() != t.dim() {
            return Err(CliError::Input(format!(
                "reference word has {} coordinates, expected {}",
                w.dim(),
                t.dim()
            )));
        }
        report.instance.insert("type".into(), json!(spec.to_string()));
        report.instance.insert("reference".into(), vector(&w));
        report
            .verdicts
            .insert("reference_is_center".into(), json!(t.is_center(&w)));
        report
            .counts
            .insert("observed".into(), json!(stats::census_at(&t, &w, &spec)?));
        return Ok((report, true));
    }
    let table = stats::census_report(&t, samples)?;
    let passed = table.passed();
    report.verdicts.insert("census".into(), json!(passed));
    report.counts.insert("rows".into(), json!(table.rows.len()));
    report.counts.insert(
        "mismatches".into(),
        json!(table.rows.iter().filter(|r| !r.passed()).count()),
    );
    if let Some(dir) = &common.out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
        let file = dir.join("census.tsv");
        fs::write(&file, table.to_string())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", file.display())))?;
        report.witnesses.push(json!(file.display().to_string()));
    } else {
        report.witnesses = table.rows.iter().map(|r| json!(r)).collect();
    }
    Ok((report, passed))
}

fn cyclic_construct(q: i64, common: &Common) -> CliResult<(RunReport, bool)> {
    let hom = homsearch::cyclic_semicross_hom(q)?;
    let t = homsearch::cyclic_semicross_tiling(q)?;
    let mut report = RunReport::new("cyclic-construct");
    report.instance.insert("q".into(), json!(q));
    report
        .instance
        .insert("primitive_root".into(), json!(homsearch::primitive_root(q)?));
    report.instance.insert(
        "images".into(),
        json!(hom.images().iter().map(|g| g[0]).collect::<Vec<_>>()),
    );
    report.instance.insert("kernel".into(), basis(t.period()));
    let budget = common.budget.unwrap_or(DEFAULT_ENUMERATION_BUDGET);
    let valid = t.is_valid(budget)?;
    let lattice = valid && t.is_lattice_tiling(budget)?;
    let cyclic = t.is_cyclic();
    report.verdicts.insert("valid".into(), json!(valid));
    report.verdicts.insert("lattice".into(), json!(lattice));
    report.verdicts.insert("cyclic".into(), json!(cyclic));
    report.witnesses = emit(common, &format!("cyclic-q{q}"), std::slice::from_ref(&t))?;
    Ok((report, valid && lattice && cyclic))
}
