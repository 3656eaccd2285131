//! Graded-window homology: the complex of graded pieces `⊕ S_{a+e}` in each
//! internal degree `e`, with homology computed by exact linear algebra over
//! `F_p`.
//!
//! An acyclic complex of twisted free sheaves has finite-length homology
//! modules, so its graded pieces are exact in all high internal degrees.
//! More precisely, if every twist is at least `a_min`, the pieces are exact
//! for `e >= -a_min - r` (no higher cohomology enters). Homology in high
//! degrees therefore flags non-acyclicity; a clean table certifies nothing.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::{AcyclicityVerdict, Evidence, Method, Verdict};
use crate::complex::TwistedFreeComplex;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::GradedMatrix;
use crate::modp::{add_mod, sparse_rank};
use crate::poly::Monomial;

/// Per internal degree `e` and cohomological degree `i`, the dimension of the
/// homology of the graded pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowTable {
    pub window: (i64, i64),
    /// Internal degrees at or above this value are inspected for homology.
    pub threshold: i64,
    /// Flags at or above this internal degree are sound: an acyclic complex
    /// has no homology there.
    pub sound_from: i64,
    pub prime: u64,
    /// `dims[e][i]`, listed for every `e` in the window and every degree `i`
    /// of the complex.
    pub dims: BTreeMap<i64, BTreeMap<i64, usize>>,
}

impl WindowTable {
    /// True iff every entry in the window is zero.
    pub fn is_zero(&self) -> bool {
        self.dims.values().all(|row| row.values().all(|&v| v == 0))
    }

    /// Nonzero entries `(e, i, dim)` at internal degree `e >= threshold`.
    pub fn flagged(&self) -> Vec<(i64, i64, usize)> {
        self.nonzero().into_iter().filter(|&(e, _, _)| e >= self.threshold).collect()
    }

    /// True iff nothing is flagged at or above the threshold.
    pub fn detector_clean(&self) -> bool {
        self.flagged().is_empty()
    }

    /// All nonzero entries `(e, i, dim)`.
    pub fn nonzero(&self) -> Vec<(i64, i64, usize)> {
        self.dims
            .iter()
            .flat_map(|(&e, row)| row.iter().filter(|(_, &v)| v > 0).map(move |(&i, &v)| (e, i, v)))
            .collect()
    }
}

/// The default window `[-(r+2), r+2]`.
pub fn default_window(a: &TwistedFreeComplex) -> (i64, i64) {
    let r = a.r() as i64;
    (-(r + 2), r + 2)
}

/// A monomial basis of one graded piece with its exponent-vector lookup.
type Basis = (Vec<Monomial>, BTreeMap<Vec<u16>, usize>);

/// Sparse polynomial entries keyed by exponent vector.
type SparseEntry = Vec<(Vec<u16>, u64)>;

/// Monomial bases of `S_d` with lookup, cached per degree.
struct Bases {
    nvars: usize,
    cache: BTreeMap<i64, Basis>,
}

impl Bases {
    fn get(&mut self, d: i64) -> &(Vec<Monomial>, BTreeMap<Vec<u16>, usize>) {
        let nvars = self.nvars;
        self.cache.entry(d).or_insert_with(|| {
            let monos = if d < 0 {
                Vec::new()
            } else {
                Monomial::all_of_degree(nvars, d as u32)
            };
            let index = monos.iter().enumerate().map(|(k, m)| (m.0.clone(), k)).collect();
            (monos, index)
        })
    }

    fn dim(&mut self, d: i64) -> usize {
        self.get(d).0.len()
    }
}

/// Offsets of each summand's block in the graded piece of degree `e`.
fn offsets(twists: &[i64], e: i64, bases: &mut Bases) -> (Vec<usize>, usize) {
    let mut offs = Vec::with_capacity(twists.len());
    let mut total = 0;
    for &a in twists {
        offs.push(total);
        total += bases.dim(a + e);
    }
    (offs, total)
}

/// Rank over `F_p` of `d` restricted to internal degree `e`, built with one
/// sparse row per source basis vector (the transpose has the same rank).
fn piece_rank(d: &GradedMatrix, e: i64, p: u64, bases: &mut Bases) -> Result<usize> {
    let (tgt_off, _) = offsets(d.tgt(), e, bases);
    // Per source summand, the (target row, reduced entry) pairs.
    let mut by_col: BTreeMap<usize, Vec<(usize, SparseEntry)>> = BTreeMap::new();
    for (row, col, v) in d.entries() {
        let reduced = v
            .reduce_mod(p)
            .ok_or_else(|| Error::Unsupported(format!("a coefficient denominator vanishes mod {p}")))?;
        by_col.entry(col).or_default().push((row, reduced));
    }
    let mut rows = Vec::new();
    for (col, entries) in by_col {
        let src_deg = d.src()[col] + e;
        let src_monos = bases.get(src_deg).0.clone();
        for m in &src_monos {
            let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
            for (row, terms) in &entries {
                let tgt_deg = d.tgt()[*row] + e;
                let base = tgt_off[*row];
                let index = &bases.get(tgt_deg).1;
                for (mono, c) in terms {
                    let prod: Vec<u16> = mono.iter().zip(&m.0).map(|(a, b)| a + b).collect();
                    let k = base + index[&prod];
                    let slot = acc.entry(k).or_insert(0);
                    *slot = add_mod(*slot, *c, p);
                }
            }
            rows.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
        }
    }
    Ok(sparse_rank(rows, p))
}

/// Homology dimensions of the graded pieces for `e` in `[d0, d1]`.
///
/// Complexes over `Q` are reduced mod `prime`; over `F_q` the field's own
/// characteristic is used and `prime` is ignored.
pub fn graded_window_homology(a: &TwistedFreeComplex, d0: i64, d1: i64, prime: u64) -> Result<WindowTable> {
    if d0 > d1 {
        return Err(Error::OutOfRange(format!("empty window [{d0}, {d1}]")));
    }
    let p = match a.ring().field() {
        FieldSpec::Prime(q) => q,
        FieldSpec::Rationals => prime,
    };
    let r = a.r() as i64;
    let twists = a.twist_support();
    let max_twist = twists.iter().next_back().copied().unwrap_or(0);
    let min_twist = twists.iter().next().copied().unwrap_or(0);
    let mut bases = Bases {
        nvars: a.ring().nvars(),
        cache: BTreeMap::new(),
    };
    let mut dims = BTreeMap::new();
    for e in d0..=d1 {
        let mut ranks = BTreeMap::new();
        for (&i, d) in a.diffs() {
            ranks.insert(i, piece_rank(d, e, p, &mut bases)?);
        }
        let mut row = BTreeMap::new();
        for i in a.degrees().collect::<Vec<_>>() {
            let (_, dim) = offsets(a.term(i), e, &mut bases);
            let out = ranks.get(&i).copied().unwrap_or(0);
            let inc = ranks.get(&(i - 1)).copied().unwrap_or(0);
            row.insert(i, dim - out - inc);
        }
        dims.insert(e, row);
    }
    Ok(WindowTable {
        window: (d0, d1),
        threshold: max_twist + r + 1,
        sound_from: -min_twist - r,
        prime: p,
        dims,
    })
}

/// Reads a window table as a verdict: `not-acyclic` when a flagged entry is
/// also in the sound range, otherwise `inconclusive` (the window never
/// certifies acyclicity on its own).
pub fn graded_window_verdict(table: &WindowTable) -> AcyclicityVerdict {
    let sound = table.flagged().into_iter().any(|(e, _, _)| e >= table.sound_from);
    let mut params = BTreeMap::new();
    params.insert("window".into(), format!("[{}, {}]", table.window.0, table.window.1));
    params.insert("threshold".into(), format!("{}", table.threshold));
    params.insert("prime".into(), format!("{}", table.prime));
    AcyclicityVerdict {
        method: Method::GradedWindow,
        verdict: if sound { Verdict::NotAcyclic } else { Verdict::Inconclusive },
        evidence: Evidence::Window(table.clone()),
        params,
        bound: None,
    }
}
