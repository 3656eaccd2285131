//! Bounded cohomological complexes of twisted free sheaves on `P^r` and
//! graded maps between them.
//!
//! Conventions: `d_i` maps the term in degree `i` to degree `i + 1`; a graded
//! map of degree `j` has components `f_i: A_i -> B_{i+j}` and is a chain map
//! when `d f = (-1)^j f d`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::GradedMatrix;
use crate::poly::PolyRing;

/// `O(a_1) ⊕ ... ⊕ O(a_m)` with optional summand labels.
#[derive(Clone, Debug, Default, Eq)]
pub struct TwistedFreeModule {
    pub twists: Vec<i64>,
    pub labels: Option<Vec<String>>,
}

impl PartialEq for TwistedFreeModule {
    /// Labels are presentation only; equality compares the twists.
    fn eq(&self, other: &Self) -> bool {
        self.twists == other.twists
    }
}

impl TwistedFreeModule {
    pub fn new(twists: Vec<i64>) -> Self {
        TwistedFreeModule { twists, labels: None }
    }

    pub fn labelled(twists: Vec<i64>, labels: Vec<String>) -> Self {
        debug_assert_eq!(twists.len(), labels.len());
        TwistedFreeModule {
            twists,
            labels: Some(labels),
        }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }
}

/// A problem found by [`TwistedFreeComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `d_{i+1} ∘ d_i` has a nonzero entry.
    NonzeroSquare {
        degree: i64,
        row: usize,
        col: usize,
        entry: String,
    },
    /// An entry of `d_i` has the wrong polynomial degree.
    Typing { degree: i64, row: usize, col: usize },
    /// `d_i` does not run between the terms in degrees `i` and `i + 1`.
    Shape { degree: i64 },
}

/// Bounded complex. Only nonzero terms and nonzero differentials are stored,
/// so structural equality is equality of complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedFreeComplex {
    ring: PolyRing,
    terms: BTreeMap<i64, TwistedFreeModule>,
    diffs: BTreeMap<i64, GradedMatrix>,
}

impl TwistedFreeComplex {
    /// Assembles a complex, checking that every differential runs between
    /// the right terms. `d² = 0` is not checked here; see [`Self::validate`].
    pub fn new(
        ring: PolyRing,
        terms: BTreeMap<i64, TwistedFreeModule>,
        diffs: BTreeMap<i64, GradedMatrix>,
    ) -> Result<Self> {
        let terms: BTreeMap<i64, TwistedFreeModule> =
            terms.into_iter().filter(|(_, m)| m.rank() > 0).collect();
        let empty: &[i64] = &[];
        let mut kept = BTreeMap::new();
        for (i, d) in diffs {
            if d.ring() != ring {
                return Err(Error::FieldMismatch);
            }
            let src = terms.get(&i).map_or(empty, |m| &m.twists);
            let tgt = terms.get(&(i + 1)).map_or(empty, |m| &m.twists);
            if d.src() != src || d.tgt() != tgt {
                return Err(Error::Shape(format!(
                    "differential in degree {i} does not match the terms"
                )));
            }
            if !d.is_zero() {
                kept.insert(i, d);
            }
        }
        Ok(TwistedFreeComplex {
            ring,
            terms,
            diffs: kept,
        })
    }

    pub fn zero(ring: PolyRing) -> Self {
        TwistedFreeComplex {
            ring,
            terms: BTreeMap::new(),
            diffs: BTreeMap::new(),
        }
    }

    /// A single term in one degree.
    pub fn single(ring: PolyRing, degree: i64, twists: Vec<i64>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(degree, TwistedFreeModule::new(twists));
        TwistedFreeComplex::new(ring, terms, BTreeMap::new()).expect("no differentials")
    }

    pub fn ring(&self) -> PolyRing {
        self.ring
    }

    /// Projective dimension of the ambient space.
    pub fn r(&self) -> usize {
        self.ring.r()
    }

    /// Lowest and highest degree with a nonzero term.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    /// Degrees with a nonzero term, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    pub fn terms(&self) -> &BTreeMap<i64, TwistedFreeModule> {
        &self.terms
    }

    pub fn diffs(&self) -> &BTreeMap<i64, GradedMatrix> {
        &self.diffs
    }

    pub fn module(&self, i: i64) -> Option<&TwistedFreeModule> {
        self.terms.get(&i)
    }

    /// Twists of the term in degree `i` (empty outside the support).
    pub fn term(&self, i: i64) -> &[i64] {
        self.terms.get(&i).map_or(&[], |m| &m.twists)
    }

    pub fn rank(&self, i: i64) -> usize {
        self.term(i).len()
    }

    pub fn total_rank(&self) -> usize {
        self.terms.values().map(TwistedFreeModule::rank).sum()
    }

    pub fn diff_ref(&self, i: i64) -> Option<&GradedMatrix> {
        self.diffs.get(&i)
    }

    /// `d_i`, materialized as a zero matrix where none is stored.
    pub fn diff(&self, i: i64) -> GradedMatrix {
        match self.diffs.get(&i) {
            Some(d) => d.clone(),
            None => GradedMatrix::zero(self.ring, self.term(i).to_vec(), self.term(i + 1).to_vec()),
        }
    }

    /// Lists every violated invariant; empty iff the complex is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (&i, d) in &self.diffs {
            if d.src() != self.term(i) || d.tgt() != self.term(i + 1) {
                out.push(Violation::Shape { degree: i });
                continue;
            }
            for (row, col) in d.typing_violations() {
                out.push(Violation::Typing { degree: i, row, col });
            }
        }
        for (&i, d) in &self.diffs {
            let Some(next) = self.diffs.get(&(i + 1)) else {
                continue;
            };
            match next.compose(d) {
                Ok(sq) => {
                    for (row, col, v) in sq.entries() {
                        out.push(Violation::NonzeroSquare {
                            degree: i,
                            row,
                            col,
                            entry: format!("{v}"),
                        });
                    }
                }
                Err(_) => out.push(Violation::Shape { degree: i }),
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// The set of twists occurring in any term.
    pub fn twist_support(&self) -> BTreeSet<i64> {
        self.terms.values().flat_map(|m| m.twists.iter().copied()).collect()
    }

    /// Per degree, the sorted list of twists.
    pub fn term_multiset(&self) -> BTreeMap<i64, Vec<i64>> {
        self.terms
            .iter()
            .map(|(&i, m)| {
                let mut t = m.twists.clone();
                t.sort_unstable();
                (i, t)
            })
            .collect()
    }

    /// `A[n]`: terms `A_{i+n}` with differentials `(-1)^n d_{i+n}`.
    pub fn shift(&self, n: i64) -> TwistedFreeComplex {
        TwistedFreeComplex {
            ring: self.ring,
            terms: self.terms.iter().map(|(&i, m)| (i - n, m.clone())).collect(),
            diffs: self.diffs.iter().map(|(&i, d)| (i - n, d.signed(n))).collect(),
        }
    }

    /// Twists every summand by `k`: `A ⊗ O(k)`.
    pub fn twist(&self, k: i64) -> TwistedFreeComplex {
        let tw = |v: &[i64]| v.iter().map(|a| a + k).collect::<Vec<_>>();
        TwistedFreeComplex {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(&i, m)| {
                    (
                        i,
                        TwistedFreeModule {
                            twists: tw(&m.twists),
                            labels: m.labels.clone(),
                        },
                    )
                })
                .collect(),
            diffs: self
                .diffs
                .iter()
                .map(|(&i, d)| (i, d.retwist(tw(d.src()), tw(d.tgt())).expect("uniform twist")))
                .collect(),
        }
    }

    /// Naive truncation `A_{≤ℓ}`: terms in degrees `≤ ℓ`, differential
    /// out of degree `ℓ` set to zero.
    pub fn truncate_le(&self, ell: i64) -> TwistedFreeComplex {
        TwistedFreeComplex {
            ring: self.ring,
            terms: self.terms.range(..=ell).map(|(&i, m)| (i, m.clone())).collect(),
            diffs: self.diffs.range(..ell).map(|(&i, d)| (i, d.clone())).collect(),
        }
    }

    /// `A ⊕ B`, with the summands of `A` first in each degree.
    pub fn direct_sum(&self, other: &TwistedFreeComplex) -> Result<TwistedFreeComplex> {
        if self.ring != other.ring {
            return Err(Error::FieldMismatch);
        }
        let degs: BTreeSet<i64> = self.degrees().chain(other.degrees()).collect();
        let mut terms = BTreeMap::new();
        for &i in &degs {
            terms.insert(i, sum_modules(self.module(i), other.module(i)));
        }
        let mut diffs = BTreeMap::new();
        for &i in &degs {
            let (a, b) = (self.diff(i), other.diff(i));
            let d = GradedMatrix::block(
                self.ring,
                &[self.term(i).to_vec(), other.term(i).to_vec()],
                &[self.term(i + 1).to_vec(), other.term(i + 1).to_vec()],
                &[alloc::vec![Some(&a), None], alloc::vec![None, Some(&b)]],
            )?;
            diffs.insert(i, d);
        }
        TwistedFreeComplex::new(self.ring, terms, diffs)
    }
}

fn sum_modules(a: Option<&TwistedFreeModule>, b: Option<&TwistedFreeModule>) -> TwistedFreeModule {
    let empty = TwistedFreeModule::default();
    let (a, b) = (a.unwrap_or(&empty), b.unwrap_or(&empty));
    let twists = [a.twists.clone(), b.twists.clone()].concat();
    let labels = match (&a.labels, &b.labels) {
        (None, None) => None,
        _ => {
            let fill = |m: &TwistedFreeModule| {
                m.labels
                    .clone()
                    .unwrap_or_else(|| (0..m.rank()).map(|k| format!("#{k}")).collect())
            };
            Some([fill(a), fill(b)].concat())
        }
    };
    TwistedFreeModule { twists, labels }
}

/// A graded map of some degree `j` between complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: TwistedFreeComplex,
    target: TwistedFreeComplex,
    degree: i64,
    comps: BTreeMap<i64, GradedMatrix>,
}

/// Degree-0 graded maps; [`GradedMap::is_chain_map`] certifies the chain condition.
pub type ChainMap = GradedMap;

impl GradedMap {
    /// Assembles a graded map, checking component shapes. Zero components
    /// are dropped.
    pub fn new(
        source: TwistedFreeComplex,
        target: TwistedFreeComplex,
        degree: i64,
        comps: BTreeMap<i64, GradedMatrix>,
    ) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::FieldMismatch);
        }
        let mut kept = BTreeMap::new();
        for (i, f) in comps {
            if f.src() != source.term(i) || f.tgt() != target.term(i + degree) {
                return Err(Error::Shape(format!(
                    "component in degree {i} does not match source/target terms"
                )));
            }
            if !f.is_zero() {
                kept.insert(i, f);
            }
        }
        Ok(GradedMap {
            source,
            target,
            degree,
            comps: kept,
        })
    }

    pub fn zero(source: TwistedFreeComplex, target: TwistedFreeComplex, degree: i64) -> Self {
        GradedMap {
            source,
            target,
            degree,
            comps: BTreeMap::new(),
        }
    }

    pub fn identity(a: &TwistedFreeComplex) -> Self {
        let comps = a
            .terms
            .iter()
            .map(|(&i, m)| (i, GradedMatrix::identity(a.ring, m.twists.clone())))
            .collect();
        GradedMap {
            source: a.clone(),
            target: a.clone(),
            degree: 0,
            comps,
        }
    }

    pub fn source(&self) -> &TwistedFreeComplex {
        &self.source
    }

    pub fn target(&self) -> &TwistedFreeComplex {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn ring(&self) -> PolyRing {
        self.source.ring
    }

    pub fn components(&self) -> &BTreeMap<i64, GradedMatrix> {
        &self.comps
    }

    pub fn component_ref(&self, i: i64) -> Option<&GradedMatrix> {
        self.comps.get(&i)
    }

    /// `f_i`, materialized as a zero matrix where none is stored.
    pub fn component(&self, i: i64) -> GradedMatrix {
        match self.comps.get(&i) {
            Some(f) => f.clone(),
            None => GradedMatrix::zero(
                self.ring(),
                self.source.term(i).to_vec(),
                self.target.term(i + self.degree).to_vec(),
            ),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Degrees `i` at which `d_B f_i ≠ (-1)^j f_{i+1} d_A`.
    pub fn chain_defects(&self) -> Vec<i64> {
        let j = self.degree;
        let mut degs: BTreeSet<i64> = BTreeSet::new();
        for &i in self.comps.keys() {
            degs.insert(i);
            degs.insert(i - 1);
        }
        for &i in self.source.diffs.keys() {
            degs.insert(i);
        }
        degs.into_iter()
            .filter(|&i| {
                let lhs = self.target.diff(i + j).compose(&self.component(i));
                let rhs = self.component(i + 1).compose(&self.source.diff(i));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => l != r.signed(j),
                    _ => true,
                }
            })
            .collect()
    }

    pub fn is_chain_map(&self) -> bool {
        self.chain_defects().is_empty()
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &GradedMap) -> Result<GradedMap> {
        if f.target != self.source {
            return Err(Error::Shape("composition of maps with mismatched complexes".into()));
        }
        let mut comps = BTreeMap::new();
        for (&i, fi) in &f.comps {
            if let Some(g) = self.comps.get(&(i + f.degree)) {
                comps.insert(i, g.compose(fi)?);
            }
        }
        GradedMap::new(f.source.clone(), self.target.clone(), f.degree + self.degree, comps)
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree
        {
            return Err(Error::Shape("sum of maps between different complexes".into()));
        }
        let keys: BTreeSet<i64> = self.comps.keys().chain(other.comps.keys()).copied().collect();
        let mut comps = BTreeMap::new();
        for i in keys {
            comps.insert(i, self.component(i).add(&other.component(i))?);
        }
        GradedMap::new(self.source.clone(), self.target.clone(), self.degree, comps)
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .map(|(&i, f)| (i, f.scale(c)))
                .filter(|(_, f)| !f.is_zero())
                .collect(),
        }
    }

    pub fn neg(&self) -> GradedMap {
        self.scale(&-self.ring().field().one())
    }

    /// Replaces the target by an equal complex (used after recomputing a
    /// target through a different route).
    pub fn with_target(&self, target: TwistedFreeComplex) -> Result<GradedMap> {
        GradedMap::new(self.source.clone(), target, self.degree, self.comps.clone())
    }

    /// `f[n]: A[n] -> B[n]`, with components `(-1)^{jn} f_{i+n}`.
    pub fn shift(&self, n: i64) -> GradedMap {
        GradedMap {
            source: self.source.shift(n),
            target: self.target.shift(n),
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .map(|(&i, f)| (i - n, f.signed(self.degree * n)))
                .collect(),
        }
    }

    /// `d_B h - (-1)^j h d_A`: the boundary of a graded map of degree `j`,
    /// a chain map of degree `j + 1`.
    pub fn boundary(&self) -> Result<GradedMap> {
        let j = self.degree;
        let mut degs: BTreeSet<i64> = BTreeSet::new();
        for &i in self.comps.keys() {
            degs.insert(i);
            degs.insert(i - 1);
        }
        let mut comps = BTreeMap::new();
        for i in degs {
            let a = self.target.diff(i + j).compose(&self.component(i))?;
            let b = self.component(i + 1).compose(&self.source.diff(i))?;
            comps.insert(i, a.sub(&b.signed(j))?);
        }
        GradedMap::new(self.source.clone(), self.target.clone(), j + 1, comps)
    }
}

/// Mapping cone `C(f)_i = B_i ⊕ A_{i+1}` of a degree-0 chain map `f: A -> B`,
/// with differential `[[d_B, f_{i+1}], [0, -d_A]]`.
pub fn cone(f: &ChainMap) -> Result<TwistedFreeComplex> {
    if f.degree != 0 {
        return Err(Error::NotAChainMap(format!("cone of a map of degree {}", f.degree)));
    }
    let defects = f.chain_defects();
    if !defects.is_empty() {
        return Err(Error::NotAChainMap(format!("chain condition fails in degrees {defects:?}")));
    }
    let (a, b) = (&f.source, &f.target);
    let ring = a.ring;
    let degs: BTreeSet<i64> = b.degrees().chain(a.degrees().map(|i| i - 1)).collect();
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for &i in &degs {
        terms.insert(i, sum_modules(b.module(i), a.module(i + 1)));
        let db = b.diff(i);
        let fi = f.component(i + 1);
        let da = a.diff(i + 1).neg();
        let d = GradedMatrix::block(
            ring,
            &[b.term(i).to_vec(), a.term(i + 1).to_vec()],
            &[b.term(i + 1).to_vec(), a.term(i + 2).to_vec()],
            &[alloc::vec![Some(&db), Some(&fi)], alloc::vec![None, Some(&da)]],
        )?;
        diffs.insert(i, d);
    }
    TwistedFreeComplex::new(ring, terms, diffs)
}

/// Position of the summand `A_p ⊗ B_{i-p}` inside `(A ⊗ B)_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorBlock {
    pub p: i64,
    pub offset: usize,
    pub rank_a: usize,
    pub rank_b: usize,
}

/// Summands of `(A ⊗ B)_i`, ordered by ascending `p`; inside a block the
/// basis vector `a ⊗ b` sits at `offset + a * rank_b + b`.
pub fn tensor_layout(a: &TwistedFreeComplex, b: &TwistedFreeComplex, i: i64) -> Vec<TensorBlock> {
    let mut out = Vec::new();
    let mut offset = 0;
    for (&p, ma) in &a.terms {
        let rb = b.rank(i - p);
        if rb == 0 {
            continue;
        }
        out.push(TensorBlock {
            p,
            offset,
            rank_a: ma.rank(),
            rank_b: rb,
        });
        offset += ma.rank() * rb;
    }
    out
}

/// Degrees in which `A ⊗ B` can be nonzero.
fn tensor_degrees(a: &TwistedFreeComplex, b: &TwistedFreeComplex) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    for p in a.degrees() {
        for q in b.degrees() {
            out.insert(p + q);
        }
    }
    out
}

/// Index of `e_a ⊗ e_b` (with `e_a ∈ A_p`) in `(A ⊗ B)_i`.
pub fn tensor_index(layout: &[TensorBlock], p: i64, a: usize, b: usize) -> Option<usize> {
    layout
        .iter()
        .find(|blk| blk.p == p)
        .map(|blk| blk.offset + a * blk.rank_b + b)
}

fn tensor_term(a: &TwistedFreeComplex, b: &TwistedFreeComplex, i: i64) -> TwistedFreeModule {
    let mut twists = Vec::new();
    let mut labels = Vec::new();
    let any_labels = a.terms.values().any(|m| m.labels.is_some())
        || b.terms.values().any(|m| m.labels.is_some());
    for blk in tensor_layout(a, b, i) {
        let ta = a.module(blk.p).expect("layout term");
        let tb = b.module(i - blk.p).expect("layout term");
        for (x, &s) in ta.twists.iter().enumerate() {
            for (y, &t) in tb.twists.iter().enumerate() {
                twists.push(s + t);
                if any_labels {
                    let la = ta.labels.as_ref().map_or_else(|| format!("#{x}"), |l| l[x].clone());
                    let lb = tb.labels.as_ref().map_or_else(|| format!("#{y}"), |l| l[y].clone());
                    labels.push(format!("{la}⊗{lb}"));
                }
            }
        }
    }
    TwistedFreeModule {
        twists,
        labels: any_labels.then_some(labels),
    }
}

/// `A ⊗ B` with `d(a ⊗ b) = da ⊗ b + (-1)^{|a|} a ⊗ db`.
pub fn tensor_complexes(a: &TwistedFreeComplex, b: &TwistedFreeComplex) -> Result<TwistedFreeComplex> {
    if a.ring != b.ring {
        return Err(Error::FieldMismatch);
    }
    let ring = a.ring;
    let degs = tensor_degrees(a, b);
    let mut terms = BTreeMap::new();
    for &i in &degs {
        terms.insert(i, tensor_term(a, b, i));
    }
    let mut diffs = BTreeMap::new();
    for &i in &degs {
        let src = terms.get(&i).map_or(Vec::new(), |m: &TwistedFreeModule| m.twists.clone());
        let tgt = terms.get(&(i + 1)).map_or(Vec::new(), |m| m.twists.clone());
        let mut d = GradedMatrix::zero(ring, src, tgt);
        let out_layout = tensor_layout(a, b, i + 1);
        for blk in tensor_layout(a, b, i) {
            let p = blk.p;
            let q = i - p;
            // da ⊗ b
            if let Some(da) = a.diff_ref(p) {
                for (x2, x, v) in da.entries() {
                    for y in 0..blk.rank_b {
                        let col = blk.offset + x * blk.rank_b + y;
                        let row = tensor_index(&out_layout, p + 1, x2, y).expect("target block");
                        d.add_to(row, col, v)?;
                    }
                }
            }
            // (-1)^p a ⊗ db
            if let Some(db) = b.diff_ref(q) {
                let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
                for (y2, y, v) in db.entries() {
                    let v = if sign == 1 { v.clone() } else { v.neg() };
                    for x in 0..blk.rank_a {
                        let col = blk.offset + x * blk.rank_b + y;
                        let row = tensor_index(&out_layout, p, x, y2).expect("target block");
                        d.add_to(row, col, &v)?;
                    }
                }
            }
        }
        diffs.insert(i, d);
    }
    TwistedFreeComplex::new(ring, terms, diffs)
}

/// `f ⊗ g` for graded maps of degrees `j` and `k`:
/// `(f ⊗ g)(a ⊗ b) = (-1)^{k|a|} f(a) ⊗ g(b)`; the result has degree `j + k`.
pub fn tensor_maps(f: &GradedMap, g: &GradedMap) -> Result<GradedMap> {
    let (j, k) = (f.degree, g.degree);
    let src = tensor_complexes(&f.source, &g.source)?;
    let tgt = tensor_complexes(&f.target, &g.target)?;
    let ring = src.ring;
    let mut comps = BTreeMap::new();
    for i in src.degrees() {
        let mut m = GradedMatrix::zero(ring, src.term(i).to_vec(), tgt.term(i + j + k).to_vec());
        let out_layout = tensor_layout(&f.target, &g.target, i + j + k);
        for blk in tensor_layout(&f.source, &g.source, i) {
            let p = blk.p;
            let q = i - p;
            let (Some(fp), Some(gq)) = (f.comps.get(&p), g.comps.get(&q)) else {
                continue;
            };
            let negate = (k * p).rem_euclid(2) == 1;
            for (x2, x, u) in fp.entries() {
                for (y2, y, v) in gq.entries() {
                    let mut prod = u.mul(v)?;
                    if negate {
                        prod = prod.neg();
                    }
                    let col = blk.offset + x * blk.rank_b + y;
                    let row = tensor_index(&out_layout, p + j, x2, y2).expect("target block");
                    m.add_to(row, col, &prod)?;
                }
            }
        }
        comps.insert(i, m);
    }
    GradedMap::new(src, tgt, j + k, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use alloc::vec;

    fn ring() -> PolyRing {
        PolyRing::projective(1, FieldSpec::Rationals)
    }

    /// `O(-1) --x0--> O` in degrees 0, 1.
    fn x0_complex() -> TwistedFreeComplex {
        let r = ring();
        let mut d = GradedMatrix::zero(r, vec![-1], vec![0]);
        d.set(0, 0, r.var(0)).unwrap();
        let mut terms = BTreeMap::new();
        terms.insert(0, TwistedFreeModule::new(vec![-1]));
        terms.insert(1, TwistedFreeModule::new(vec![0]));
        TwistedFreeComplex::new(r, terms, [(0, d)].into_iter().collect()).unwrap()
    }

    #[test]
    fn shift_negates_differential() {
        let a = x0_complex();
        let s = a.shift(1);
        assert_eq!(s.support(), Some((-1, 0)));
        assert_eq!(s.diff(-1).get(0, 0).unwrap(), &ring().var(0).neg());
        assert_eq!(a.shift(0), a);
        assert_eq!(a.shift(1).shift(-1), a);
    }

    #[test]
    fn nonzero_square_is_reported() {
        let r = ring();
        let mut d0 = GradedMatrix::zero(r, vec![-2], vec![-1]);
        d0.set(0, 0, r.var(0)).unwrap();
        let mut d1 = GradedMatrix::zero(r, vec![-1], vec![0]);
        d1.set(0, 0, r.var(0)).unwrap();
        let terms = [(0, vec![-2]), (1, vec![-1]), (2, vec![0])]
            .into_iter()
            .map(|(i, t)| (i, TwistedFreeModule::new(t)))
            .collect();
        let c = TwistedFreeComplex::new(r, terms, [(0, d0), (1, d1)].into_iter().collect()).unwrap();
        let v = c.validate();
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], Violation::NonzeroSquare { entry, .. } if entry == "x0^2"));
        assert!(TwistedFreeComplex::single(r, 3, vec![0, 1]).validate().is_empty());
    }

    #[test]
    fn cone_of_identity_and_zero_map() {
        let r = ring();
        let o = TwistedFreeComplex::single(r, 0, vec![0]);
        let c = cone(&GradedMap::identity(&o)).unwrap();
        assert_eq!(c.support(), Some((-1, 0)));
        assert!(c.diff(-1).get(0, 0).unwrap().constant_value().unwrap().is_one());
        let a = x0_complex();
        let z = GradedMap::zero(a.clone(), TwistedFreeComplex::zero(r), 0);
        assert_eq!(cone(&z).unwrap(), a.shift(1));
    }

    #[test]
    fn tensor_of_units_and_leibniz_sign() {
        let r = ring();
        let a = TwistedFreeComplex::single(r, 0, vec![2]);
        let b = TwistedFreeComplex::single(r, 0, vec![-5]);
        assert_eq!(tensor_complexes(&a, &b).unwrap(), TwistedFreeComplex::single(r, 0, vec![-3]));
        // O[1] ⊗ A negates the differential of A
        let x = x0_complex();
        let o1 = TwistedFreeComplex::single(r, -1, vec![0]);
        assert_eq!(tensor_complexes(&o1, &x).unwrap(), x.shift(1));
        assert_eq!(tensor_complexes(&x, &o1).unwrap().diff(-1), x.diff(0));
    }
}
