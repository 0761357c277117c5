//! Plain-text formats for tiles and periodic tilings.
//!
//! Both formats are line based. `#` starts a comment running to the end of
//! the line; blank lines are ignored. Coordinates are separated by
//! whitespace and/or commas.
//!
//! Tile file:
//!
//! ```text
//! <dim>
//! <point>        one line per point
//! ```
//!
//! Tiling file:
//!
//! ```text
//! dim <n>
//! tile <k>
//! <point>        k lines
//! period
//! <vector>       n lines, generators of the period lattice
//! centers <m>
//! <point>        m lines
//! ```
//!
//! [`write_tiling`] emits the canonical form: tile points sorted, period in
//! Hermite normal form, centers reduced modulo the period and sorted.
//! Reading a canonical file and writing it back reproduces it byte for byte.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::tiles::{NormalizedTile, Tile};
use crate::tiling::PeriodicTiling;
use crate::vector::IntVec;

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines {
            inner: it.peekable(),
            last: 0,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(Error::Parse {
                line: self.last + 1,
                msg: format!("unexpected end of input, expected {what}"),
            }),
        }
    }

    fn is_done(&mut self) -> bool {
        self.inner.peek().is_none()
    }

    fn keyword(&mut self, key: &str) -> Result<Option<usize>> {
        let (n, l) = self.next(key)?;
        let mut words = l.split_whitespace();
        if words.next() != Some(key) {
            return Err(Error::Parse {
                line: n,
                msg: format!("expected `{key}`"),
            });
        }
        let arg = words.next().map(|w| parse_count(n, w)).transpose()?;
        if words.next().is_some() {
            return Err(Error::Parse {
                line: n,
                msg: format!("trailing text after `{key}`"),
            });
        }
        Ok(arg)
    }

    fn counted(&mut self, key: &str) -> Result<usize> {
        let line = self.last + 1;
        self.keyword(key)?.ok_or(Error::Parse {
            line,
            msg: format!("`{key}` needs a count"),
        })
    }

    fn vector(&mut self, dim: usize) -> Result<IntVec> {
        let (n, l) = self.next("a point")?;
        parse_vector(n, l, dim)
    }
}

fn parse_count(line: usize, word: &str) -> Result<usize> {
    word.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a non-negative integer, got {word:?}"),
    })
}

fn parse_vector(line: usize, text: &str, dim: usize) -> Result<IntVec> {
    let coords = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .map(|w| {
            w.parse::<i64>().map_err(|_| Error::Parse {
                line,
                msg: format!("bad coordinate {w:?}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != dim {
        return Err(Error::Parse {
            line,
            msg: format!("expected {dim} coordinates, got {}", coords.len()),
        });
    }
    Ok(IntVec::from(coords))
}

fn located(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::Parse {
            line,
            msg: other.to_string(),
        },
    }
}

/// Reads a tile file; a tile without the origin is translated (see
/// [`Tile::from_points`]).
pub fn parse_tile(text: &str) -> Result<NormalizedTile> {
    let mut lines = Lines::new(text);
    let (n, l) = lines.next("the dimension")?;
    let dim = parse_count(n, l)?;
    if dim == 0 {
        return Err(Error::Parse {
            line: n,
            msg: "dimension must be positive".into(),
        });
    }
    let mut points = Vec::new();
    while !lines.is_done() {
        points.push(lines.vector(dim)?);
    }
    Tile::from_points(dim, &points).map_err(|e| located(lines.last, e))
}

pub fn write_tile(tile: &Tile) -> String {
    let mut out = format!("{}\n", tile.dim());
    for p in tile.points() {
        push_vector(&mut out, p);
    }
    out
}

fn push_vector(out: &mut String, v: &[i64]) {
    let words: Vec<String> = v.iter().map(i64::to_string).collect();
    writeln!(out, "{}", words.join(" ")).expect("writing to a String");
}

/// Reads a tiling file. If the tile misses the origin it is translated and
/// the centers are moved so that the tiles stay in place.
pub fn parse_tiling(text: &str) -> Result<PeriodicTiling> {
    let mut lines = Lines::new(text);
    let dim = lines.counted("dim")?;
    if dim == 0 {
        return Err(Error::Parse {
            line: lines.last,
            msg: "dimension must be positive".into(),
        });
    }
    let k = lines.counted("tile")?;
    let tile_line = lines.last;
    let points = (0..k).map(|_| lines.vector(dim)).collect::<Result<Vec<_>>>()?;
    let normalized = Tile::from_points(dim, &points).map_err(|e| located(tile_line, e))?;
    lines.keyword("period")?;
    let period_line = lines.last;
    let gens = (0..dim).map(|_| lines.vector(dim)).collect::<Result<Vec<_>>>()?;
    let period = Lattice::from_generators(dim, &gens).map_err(|e| located(period_line, e))?;
    let m = lines.counted("centers")?;
    let centers_line = lines.last;
    let centers = (0..m)
        .map(|_| Ok(&lines.vector(dim)? - &normalized.offset))
        .collect::<Result<Vec<_>>>()?;
    if let Some((n, _)) = lines.inner.next() {
        return Err(Error::Parse {
            line: n,
            msg: "unexpected text after the center list".into(),
        });
    }
    PeriodicTiling::new(normalized.tile, period, centers).map_err(|e| located(centers_line, e))
}

pub fn write_tiling(t: &PeriodicTiling) -> String {
    let mut out = format!("dim {}\ntile {}\n", t.dim(), t.tile().len());
    for p in t.tile().points() {
        push_vector(&mut out, p);
    }
    out.push_str("period\n");
    for b in t.period().basis() {
        push_vector(&mut out, b);
    }
    writeln!(out, "centers {}", t.centers().len()).expect("writing to a String");
    for c in t.centers() {
        push_vector(&mut out, c);
    }
    out
}
