//! Exact-cover enumeration of the tilings of a torus `Z^n/Λ` by translates of
//! a tile, plus a patch search that certifies non-existence of tilings of Z^n.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, Torus, DEFAULT_ENUMERATION_BUDGET};
use crate::tiles::{Tile, DEFAULT_SYMMETRY_BUDGET};
use crate::tiling::PeriodicTiling;
use crate::vector::IntVec;

/// Default cap on search nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dedup {
    #[default]
    None,
    Translation,
    Congruence,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub dedup: Dedup,
    pub limit: Option<usize>,
    pub workers: usize,
    pub node_budget: u64,
    pub cell_budget: u64,
    /// Only search covers with a tile centered at the origin.
    pub fix_origin: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            dedup: Dedup::None,
            limit: None,
            workers: 1,
            node_budget: DEFAULT_NODE_BUDGET,
            cell_budget: DEFAULT_ENUMERATION_BUDGET,
            fix_origin: false,
        }
    }
}

impl SearchOptions {
    pub fn with_dedup(dedup: Dedup) -> Self {
        SearchOptions {
            dedup,
            ..Default::default()
        }
    }
}

/// The torus cover problem: row `c` covers the cells `c + v mod Λ`.
pub struct CoverInstance {
    tile: Tile,
    torus: Torus,
    width: usize,
    rows: Vec<u32>,
    cell_rows: Vec<u32>,
    degenerate: bool,
}

impl CoverInstance {
    pub fn new(tile: &Tile, period: &Lattice, cell_budget: u64) -> Result<Self> {
        if tile.dim() != period.dim() {
            return Err(Error::DimensionMismatch {
                expected: period.dim(),
                got: tile.dim(),
            });
        }
        let det = period.det();
        if !det.is_multiple_of(tile.len() as u64) {
            return Err(Error::DensityImpossible { tile: tile.len(), det });
        }
        let torus = Torus::new(period.clone(), cell_budget)?;
        let width = tile.len();
        let plus = torus.translation_table(tile.points());
        let minus: Vec<IntVec> = tile.points().iter().map(|v| -v).collect();
        let minus = torus.translation_table(&minus);
        let n = torus.len();
        let mut rows = Vec::with_capacity(n * width);
        let mut cell_rows = Vec::with_capacity(n * width);
        for c in 0..n {
            rows.extend(plus.iter().map(|t| t[c]));
            let mut covering: Vec<u32> = minus.iter().map(|t| t[c]).collect();
            covering.sort_unstable();
            cell_rows.extend(covering);
        }
        // two tile points congruent mod Λ: every translate overlaps itself
        let first: BTreeSet<u32> = rows[..width].iter().copied().collect();
        let degenerate = first.len() < width;
        Ok(CoverInstance {
            tile: tile.clone(),
            torus,
            width,
            rows,
            cell_rows,
            degenerate,
        })
    }

    pub fn num_cells(&self) -> usize {
        self.torus.len()
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn row(&self, center: usize) -> &[u32] {
        &self.rows[center * self.width..(center + 1) * self.width]
    }

    fn rows_covering(&self, cell: usize) -> &[u32] {
        &self.cell_rows[cell * self.width..(cell + 1) * self.width]
    }

    pub fn to_tiling(&self, centers: &[u32]) -> Result<PeriodicTiling> {
        let reps = centers.iter().map(|&c| self.torus.rep(c as usize));
        PeriodicTiling::new(self.tile.clone(), self.torus.lattice().clone(), reps)
    }
}

#[derive(Clone)]
struct State<'a> {
    inst: &'a CoverInstance,
    covered: Vec<bool>,
    avail: Vec<bool>,
    count: Vec<u32>,
    trail: Vec<u32>,
    chosen: Vec<u32>,
}

enum Pick {
    Solved,
    Dead,
    Branch(usize),
}

impl<'a> State<'a> {
    fn new(inst: &'a CoverInstance) -> Self {
        let n = inst.num_cells();
        let w = inst.width as u32;
        State {
            inst,
            covered: vec![false; n],
            avail: vec![!inst.degenerate; n],
            count: vec![if inst.degenerate { 0 } else { w }; n],
            trail: Vec::new(),
            chosen: Vec::new(),
        }
    }

    fn select(&mut self, row: u32) {
        let inst = self.inst;
        self.chosen.push(row);
        for &x in inst.row(row as usize) {
            self.covered[x as usize] = true;
            for &r in inst.rows_covering(x as usize) {
                if self.avail[r as usize] {
                    self.avail[r as usize] = false;
                    self.trail.push(r);
                    for &y in inst.row(r as usize) {
                        self.count[y as usize] -= 1;
                    }
                }
            }
        }
    }

    fn undo(&mut self, mark: usize) {
        let inst = self.inst;
        while self.trail.len() > mark {
            let r = self.trail.pop().expect("trail above mark");
            self.avail[r as usize] = true;
            for &y in inst.row(r as usize) {
                self.count[y as usize] += 1;
            }
        }
        let row = self.chosen.pop().expect("undo after select");
        for &x in inst.row(row as usize) {
            self.covered[x as usize] = false;
        }
    }

    fn pick(&self) -> Pick {
        let mut best: Option<(u32, usize)> = None;
        for (x, &c) in self.count.iter().enumerate() {
            if self.covered[x] {
                continue;
            }
            if c == 0 {
                return Pick::Dead;
            }
            if best.is_none_or(|(bc, _)| c < bc) {
                best = Some((c, x));
            }
        }
        match best {
            None => Pick::Solved,
            Some((_, x)) => Pick::Branch(x),
        }
    }

    fn options(&self, cell: usize) -> Vec<u32> {
        self.inst
            .rows_covering(cell)
            .iter()
            .copied()
            .filter(|&r| self.avail[r as usize])
            .collect()
    }
}

/// Receives covers (sorted center indices) in search order.
trait Sink {
    /// Returns false to stop the branch.
    fn accept(&mut self, centers: &[u32]) -> Result<bool>;
}

struct Budget<'a> {
    used: &'a AtomicU64,
    limit: u64,
}

impl Budget<'_> {
    fn tick(&self) -> Result<()> {
        let n = self.used.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.limit {
            return Err(Error::BudgetExceeded {
                what: "search nodes",
                needed: n as u128,
                limit: self.limit as u128,
            });
        }
        Ok(())
    }
}

struct Frame {
    options: Vec<u32>,
    next: usize,
    active: Option<usize>,
}

fn run_branch<S: Sink>(mut state: State<'_>, budget: &Budget<'_>, sink: &mut S) -> Result<()> {
    let mut solution = Vec::new();
    let mut report = |state: &State<'_>, sink: &mut S| -> Result<bool> {
        solution.clear();
        solution.extend_from_slice(&state.chosen);
        solution.sort_unstable();
        sink.accept(&solution)
    };
    let first = match state.pick() {
        Pick::Solved => {
            report(&state, sink)?;
            return Ok(());
        }
        Pick::Dead => return Ok(()),
        Pick::Branch(x) => state.options(x),
    };
    let mut stack = vec![Frame {
        options: first,
        next: 0,
        active: None,
    }];
    while let Some(frame) = stack.last_mut() {
        if let Some(mark) = frame.active.take() {
            state.undo(mark);
        }
        if frame.next == frame.options.len() {
            stack.pop();
            continue;
        }
        let row = frame.options[frame.next];
        frame.next += 1;
        frame.active = Some(state.trail.len());
        budget.tick()?;
        state.select(row);
        match state.pick() {
            Pick::Solved => {
                if !report(&state, sink)? {
                    return Ok(());
                }
            }
            Pick::Dead => {}
            Pick::Branch(x) => {
                let options = state.options(x);
                stack.push(Frame {
                    options,
                    next: 0,
                    active: None,
                });
            }
        }
    }
    Ok(())
}

/// Splits the search at the first branching cell and runs the branches on
/// `workers` threads. Each branch gets its own sink; sinks come back in
/// branch order, so the merged output does not depend on `workers`.
fn run_search<S, F>(inst: &CoverInstance, opts: &SearchOptions, make_sink: F) -> Result<(Vec<S>, u64)>
where
    S: Sink + Send,
    F: Fn() -> S + Sync,
{
    let used = AtomicU64::new(0);
    let budget = Budget {
        used: &used,
        limit: opts.node_budget,
    };
    let mut root = State::new(inst);
    if opts.fix_origin {
        if !root.avail[0] {
            return Ok((Vec::new(), 0));
        }
        budget.tick()?;
        root.select(0);
    }
    let mut sinks = Vec::new();
    let options = match root.pick() {
        Pick::Dead => return Ok((sinks, used.into_inner())),
        Pick::Solved => {
            let mut sink = make_sink();
            let mut centers = root.chosen.clone();
            centers.sort_unstable();
            sink.accept(&centers)?;
            sinks.push(sink);
            return Ok((sinks, used.into_inner()));
        }
        Pick::Branch(x) => root.options(x),
    };
    let start = |row: u32| -> Result<S> {
        let mut state = root.clone();
        let mut sink = make_sink();
        budget.tick()?;
        state.select(row);
        run_branch(state, &budget, &mut sink)?;
        Ok(sink)
    };
    let workers = opts.workers.max(1).min(options.len());
    let results: Vec<Result<S>> = if workers <= 1 {
        options.iter().map(|&r| start(r)).collect()
    } else {
        let mut slots: Vec<Option<Result<S>>> = (0..options.len()).map(|_| None).collect();
        thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let options = &options;
                    let start = &start;
                    scope.spawn(move || {
                        (w..options.len())
                            .step_by(workers)
                            .map(|i| (i, start(options[i])))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (i, r) in h.join().expect("search worker panicked") {
                    slots[i] = Some(r);
                }
            }
        });
        slots.into_iter().map(|s| s.expect("every branch ran")).collect()
    };
    for r in results {
        sinks.push(r?);
    }
    Ok((sinks, used.into_inner()))
}

struct CountSink(u64);

impl Sink for CountSink {
    fn accept(&mut self, _: &[u32]) -> Result<bool> {
        self.0 += 1;
        Ok(true)
    }
}

type Filter<'a> = dyn Fn(&PeriodicTiling) -> Result<bool> + Sync + 'a;

struct CollectSink<'a> {
    inst: &'a CoverInstance,
    dedup: Dedup,
    limit: Option<usize>,
    filter: Option<&'a Filter<'a>>,
    seen: BTreeSet<PeriodicTilingKey>,
    out: Vec<(Option<PeriodicTilingKey>, PeriodicTiling)>,
}

type PeriodicTilingKey = (Lattice, Vec<IntVec>);

fn class_key(t: &PeriodicTiling, dedup: Dedup) -> Result<Option<PeriodicTilingKey>> {
    let canon = match dedup {
        Dedup::None => return Ok(None),
        Dedup::Translation => t.canonical_translation_form(u64::MAX)?,
        Dedup::Congruence => t.canonical_form(DEFAULT_SYMMETRY_BUDGET, u64::MAX)?,
    };
    Ok(Some((canon.period().clone(), canon.centers().to_vec())))
}

impl Sink for CollectSink<'_> {
    fn accept(&mut self, centers: &[u32]) -> Result<bool> {
        let t = self.inst.to_tiling(centers)?;
        if let Some(f) = self.filter {
            if !f(&t)? {
                return Ok(true);
            }
        }
        let key = class_key(&t, self.dedup)?;
        if let Some(k) = &key {
            if !self.seen.insert(k.clone()) {
                return Ok(true);
            }
        }
        self.out.push((key, t));
        Ok(self.limit.is_none_or(|l| self.out.len() < l))
    }
}

/// Tilings found by [`enumerate_tilings`] with the search effort spent.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub tilings: Vec<PeriodicTiling>,
    pub nodes: u64,
}

fn collect(tile: &Tile, period: &Lattice, opts: &SearchOptions, filter: Option<&Filter<'_>>) -> Result<Enumeration> {
    let inst = CoverInstance::new(tile, period, opts.cell_budget)?;
    if opts.limit == Some(0) {
        return Ok(Enumeration {
            tilings: Vec::new(),
            nodes: 0,
        });
    }
    let (sinks, nodes) = run_search(&inst, opts, || CollectSink {
        inst: &inst,
        dedup: opts.dedup,
        limit: opts.limit,
        filter,
        seen: BTreeSet::new(),
        out: Vec::new(),
    })?;
    let mut seen = BTreeSet::new();
    let mut tilings = Vec::new();
    for (key, t) in sinks.into_iter().flat_map(|s| s.out) {
        if key.is_none_or(|k| seen.insert(k)) {
            tilings.push(t);
        }
    }
    if let Some(l) = opts.limit {
        tilings.truncate(l);
    }
    Ok(Enumeration { tilings, nodes })
}

/// All exact covers of `Z^n/Λ` by translates of the tile, in search order,
/// optionally keeping only the first cover of each translation or congruence
/// class.
pub fn enumerate_tilings(tile: &Tile, period: &Lattice, opts: &SearchOptions) -> Result<Enumeration> {
    collect(tile, period, opts, None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingCounts {
    /// Covers of the torus; with `fix_origin` this is |V| times the number of
    /// covers through the origin.
    pub raw: u64,
    pub translation_classes: u64,
    pub congruence_classes: u64,
    pub density_impossible: bool,
    pub nodes: u64,
}

struct ClassSink<'a> {
    inst: &'a CoverInstance,
    raw: u64,
    translation: BTreeSet<PeriodicTilingKey>,
    congruence: BTreeSet<PeriodicTilingKey>,
}

impl Sink for ClassSink<'_> {
    fn accept(&mut self, centers: &[u32]) -> Result<bool> {
        self.raw += 1;
        let t = self.inst.to_tiling(centers)?;
        self.translation.extend(class_key(&t, Dedup::Translation)?);
        self.congruence.extend(class_key(&t, Dedup::Congruence)?);
        Ok(true)
    }
}

/// Counts covers and their classes without keeping the tilings.
pub fn count_tilings(tile: &Tile, period: &Lattice, opts: &SearchOptions) -> Result<TilingCounts> {
    let inst = match CoverInstance::new(tile, period, opts.cell_budget) {
        Err(Error::DensityImpossible { .. }) => {
            return Ok(TilingCounts {
                raw: 0,
                translation_classes: 0,
                congruence_classes: 0,
                density_impossible: true,
                nodes: 0,
            })
        }
        other => other?,
    };
    let (sinks, nodes) = run_search(&inst, opts, || ClassSink {
        inst: &inst,
        raw: 0,
        translation: BTreeSet::new(),
        congruence: BTreeSet::new(),
    })?;
    let mut raw = 0;
    let mut translation = BTreeSet::new();
    let mut congruence = BTreeSet::new();
    for s in sinks {
        raw += s.raw;
        translation.extend(s.translation);
        congruence.extend(s.congruence);
    }
    if opts.fix_origin {
        raw *= tile.len() as u64;
    }
    Ok(TilingCounts {
        raw,
        translation_classes: translation.len() as u64,
        congruence_classes: congruence.len() as u64,
        density_impossible: false,
        nodes,
    })
}

/// Number of covers only; the cheapest query.
pub fn count_raw(tile: &Tile, period: &Lattice, opts: &SearchOptions) -> Result<u64> {
    let inst = CoverInstance::new(tile, period, opts.cell_budget)?;
    let (sinks, _) = run_search(&inst, opts, || CountSink(0))?;
    let raw: u64 = sinks.iter().map(|s| s.0).sum();
    Ok(if opts.fix_origin { raw * tile.len() as u64 } else { raw })
}

/// The first cover in search order whose center set is not a lattice.
pub fn find_nonlattice(tile: &Tile, period: &Lattice, opts: &SearchOptions) -> Result<Option<PeriodicTiling>> {
    let opts = SearchOptions {
        dedup: Dedup::None,
        limit: Some(1),
        ..opts.clone()
    };
    let filter = |t: &PeriodicTiling| -> Result<bool> { Ok(!t.is_lattice_tiling(u64::MAX)?) };
    Ok(collect(tile, period, &opts, Some(&filter))?.tilings.into_iter().next())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Uniqueness {
    pub is_unique: bool,
    pub class_count: usize,
}

pub fn unique_up_to_congruence(tile: &Tile, period: &Lattice, opts: &SearchOptions) -> Result<Uniqueness> {
    // every class has a member through the origin
    let opts = SearchOptions {
        dedup: Dedup::Congruence,
        limit: None,
        fix_origin: true,
        ..opts.clone()
    };
    let classes = enumerate_tilings(tile, period, &opts)?.tilings.len();
    Ok(Uniqueness {
        is_unique: classes == 1,
        class_count: classes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatchVerdict {
    /// No arrangement of translates covers the ball exactly once, so the
    /// tile does not tile Z^n.
    Certified,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchResult {
    pub verdict: PatchVerdict,
    pub radius: u32,
    pub nodes: u64,
}

struct Patch<'a> {
    tile: &'a Tile,
    lo: Vec<i64>,
    extent: Vec<i64>,
    radius: i64,
    occupied: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl Patch<'_> {
    fn index(&self, x: &[i64]) -> usize {
        x.iter()
            .zip(&self.lo)
            .zip(&self.extent)
            .fold(0, |acc, ((&c, &l), &e)| acc * e as usize + (c - l) as usize)
    }

    /// Next uncovered ball cell after `from` in lexicographic order.
    fn next_hole(&self, from: &mut [i64]) -> bool {
        loop {
            if !self.occupied[self.index(from)] {
                return true;
            }
            if !crate::vector::advance_odometer_range(from, -self.radius, self.radius) {
                return false;
            }
        }
    }

    fn fits(&self, c: &IntVec) -> bool {
        self.tile.points().iter().all(|v| !self.occupied[self.index(&(c + v))])
    }

    fn set(&mut self, c: &IntVec, value: bool) {
        for v in self.tile.points() {
            let i = self.index(&(c + v));
            self.occupied[i] = value;
        }
    }

    /// True if some placement covers every ball cell from `hole` onwards.
    fn extend(&mut self, hole: Vec<i64>) -> Result<bool> {
        let mut hole = hole;
        if !self.next_hole(&mut hole) {
            return Ok(true);
        }
        let tile = self.tile;
        for v in tile.points() {
            let c = &IntVec::from(hole.as_slice()) - v;
            if !self.fits(&c) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded {
                    what: "patch search nodes",
                    needed: self.nodes as u128,
                    limit: self.budget as u128,
                });
            }
            self.set(&c, true);
            let done = self.extend(hole.clone())?;
            self.set(&c, false);
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Tries to cover the L∞ ball of the given radius exactly once by translates
/// of the tile (translates may stick out of the ball but not overlap).
pub fn patch_no_tiling(tile: &Tile, radius: u32, budget: u64) -> Result<PatchResult> {
    let n = tile.dim();
    let r = radius as i64;
    // translates through a ball cell reach at most the tile's width beyond it
    let width: Vec<i64> = (0..n)
        .map(|i| {
            let coords = tile.points().iter().map(|v| v[i]);
            coords.clone().max().unwrap_or(0) - coords.min().unwrap_or(0)
        })
        .collect();
    let lo: Vec<i64> = width.iter().map(|w| -r - w).collect();
    let hi: Vec<i64> = width.iter().map(|w| r + w).collect();
    let extent: Vec<i64> = lo.iter().zip(&hi).map(|(l, h)| h - l + 1).collect();
    let cells = extent
        .iter()
        .try_fold(1u64, |acc, &e| acc.checked_mul(e as u64))
        .unwrap_or(u64::MAX);
    if cells > DEFAULT_ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "patch cells",
            needed: cells as u128,
            limit: DEFAULT_ENUMERATION_BUDGET as u128,
        });
    }
    let mut patch = Patch {
        tile,
        lo,
        extent,
        radius: r,
        occupied: vec![false; cells as usize],
        nodes: 0,
        budget,
    };
    let covered = patch.extend(vec![-r; n])?;
    Ok(PatchResult {
        verdict: if covered {
            PatchVerdict::Inconclusive
        } else {
            PatchVerdict::Certified
        },
        radius,
        nodes: patch.nodes,
    })
}

/// Iterative deepening over radii `1..=max_radius`; stops at the first
/// certified radius. The node budget is shared by all radii.
pub fn patch_prove(tile: &Tile, max_radius: u32, budget: u64) -> Result<PatchResult> {
    let mut spent = 0;
    let mut last = PatchResult {
        verdict: PatchVerdict::Inconclusive,
        radius: 0,
        nodes: 0,
    };
    for r in 1..=max_radius {
        let res = patch_no_tiling(tile, r, budget - spent)?;
        spent += res.nodes;
        last = PatchResult { nodes: spent, ..res };
        if res.verdict == PatchVerdict::Certified {
            break;
        }
    }
    Ok(last)
}
