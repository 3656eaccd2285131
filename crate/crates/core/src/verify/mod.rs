//! Independent oracles: acyclicity and homology checkers, the duality
//! identity battery, quasi-isomorphism certification and twist bookkeeping
//! for the semi-orthogonal decomposition by twists.
//!
//! A complex of twisted free sheaves on `P^r` is *acyclic* when it is exact
//! on each of the `r + 1` standard charts `x_i = 1`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::complex::{cone, TwistedFreeComplex};
use crate::duality::SymmetricFormData;
use crate::error::Result;

pub mod battery;
pub mod probabilistic;
pub mod semiorth;
pub mod unipoly;
pub mod window;

pub use battery::{
    battery_duality_identities, default_grid, BatteryReport, IdentityResult, DEFAULT_GRID_RANGE, IDENTITIES,
};
pub use probabilistic::{
    acyclic_probabilistic, witness_refails, ProbabilisticParams, DEFAULT_PRIME, DEFAULT_TRIALS,
    MIN_PRIME,
};
pub use semiorth::{
    quotient_vanishing, quotient_vanishing_all, quotient_vanishing_complex, semiorth_dual_class,
    semiorth_dual_class_on, QuotientReport,
};
pub use unipoly::{acyclic_snf, homology_univariate, ChartHomology, DegreeHomology, UniPoly};
pub use window::{default_window, graded_window_homology, graded_window_verdict, WindowTable};

/// Which oracle produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    SnfExact,
    PointProbabilistic,
    GradedWindow,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::SnfExact => "snf-exact",
            Method::PointProbabilistic => "point-probabilistic",
            Method::GradedWindow => "graded-window",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Acyclic,
    NotAcyclic,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Acyclic => "acyclic",
            Verdict::NotAcyclic => "not-acyclic",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A sampled point at which rank additivity fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointWitness {
    /// Index `c` of the chart `x_c = 1`.
    pub chart: usize,
    /// Homogeneous coordinates as residues mod `prime` (`point[chart] = 1`).
    pub point: Vec<u64>,
    pub prime: u64,
    /// Cohomological degree `i` where `rank d_i + rank d_{i-1} != dim C_i`.
    pub degree: i64,
    pub rank_out: usize,
    pub rank_in: usize,
    pub dim: usize,
}

/// What a verdict rests on.
#[derive(Clone, Debug, PartialEq)]
pub enum Evidence {
    /// Exact homology on every chart.
    Homology(Vec<ChartHomology>),
    /// All sampled points gave exact sequences.
    Points { charts: usize, trials: usize },
    /// A failing point.
    Witness(PointWitness),
    /// A graded-window homology table.
    Window(WindowTable),
    /// Several verdicts that were combined.
    Combined(Vec<AcyclicityVerdict>),
    /// Free-form explanation, used for inconclusive outcomes.
    Note(String),
}

/// Outcome of an acyclicity check with its evidence and confidence data.
#[derive(Clone, Debug, PartialEq)]
pub struct AcyclicityVerdict {
    /// Method of the deciding check; for combined verdicts, the primary one.
    pub method: Method,
    pub verdict: Verdict,
    pub evidence: Evidence,
    /// Parameters that make the verdict reproducible, e.g. seed and prime.
    pub params: BTreeMap<String, String>,
    /// Bound on the probability that an acyclic verdict is wrong at a
    /// single sampled point, summed over charts; `None` for exact methods.
    pub bound: Option<f64>,
}

impl AcyclicityVerdict {
    pub fn is_acyclic(&self) -> bool {
        self.verdict == Verdict::Acyclic
    }

    /// The failing point, if any (searching combined evidence too).
    pub fn witness(&self) -> Option<&PointWitness> {
        match &self.evidence {
            Evidence::Witness(w) => Some(w),
            Evidence::Combined(vs) => vs.iter().find_map(AcyclicityVerdict::witness),
            _ => None,
        }
    }
}

/// Probabilistic plus window check for `r > 1`; the window check alone
/// never certifies, so `acyclic` requires both to agree.
pub fn acyclic_combined(a: &TwistedFreeComplex, params: &ProbabilisticParams) -> Result<AcyclicityVerdict> {
    let prob = acyclic_probabilistic(a, params)?;
    if prob.verdict == Verdict::NotAcyclic {
        return Ok(prob);
    }
    let (d0, d1) = default_window(a);
    let prime = match a.ring().field() {
        crate::field::FieldSpec::Prime(q) => q,
        crate::field::FieldSpec::Rationals => params.prime,
    };
    let table = graded_window_homology(a, d0, d1, prime)?;
    let win = graded_window_verdict(&table);
    let verdict = match (prob.verdict, win.verdict) {
        (Verdict::Acyclic, Verdict::NotAcyclic) => Verdict::Inconclusive,
        (Verdict::Acyclic, _) => Verdict::Acyclic,
        (v, _) => v,
    };
    let mut p = prob.params.clone();
    p.insert("window".into(), alloc::format!("[{d0}, {d1}]"));
    Ok(AcyclicityVerdict {
        method: Method::PointProbabilistic,
        verdict,
        bound: prob.bound,
        params: p,
        evidence: Evidence::Combined(alloc::vec![prob, win]),
    })
}

/// Acyclicity of `cone(φ.form)`: exact Smith-normal-form homology for `r = 1`,
/// point sampling plus the graded-window detector otherwise.
pub fn quasi_iso_check(phi: &SymmetricFormData, params: &ProbabilisticParams) -> Result<AcyclicityVerdict> {
    let c = cone(&phi.form)?;
    acyclicity(&c, params)
}

/// Dispatches like [`quasi_iso_check`] on an arbitrary complex.
pub fn acyclicity(a: &TwistedFreeComplex, params: &ProbabilisticParams) -> Result<AcyclicityVerdict> {
    if a.r() == 1 {
        acyclic_snf(a)
    } else {
        acyclic_combined(a, params)
    }
}
