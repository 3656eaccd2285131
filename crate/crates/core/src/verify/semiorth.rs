//! Twist bookkeeping for the semi-orthogonal decomposition of `P^r` by the
//! classes `𝒜(-k)` of complexes whose terms all have twist `k`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::complex::{cone, TwistedFreeComplex};
use crate::duality::{dualize_complex, DualityDatum, SymmetricFormData};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::koszul::{build_koszul, build_phi};
use crate::poly::PolyRing;

/// Shifts composed with the datum `(m, 0)` in the dual-class check.
const SHIFTS: [i64; 5] = [-2, -1, 0, 1, 2];

/// The dual of a twist-`k` class under `(m, n)` is the twist-`(m-k)` class,
/// checked on `O(k)[0]` over `ring` for `n` in a range of shifts.
pub fn semiorth_dual_class_on(ring: PolyRing, k: i64, m: i64) -> Result<i64> {
    let a = TwistedFreeComplex::single(ring, 0, alloc::vec![k]);
    let expected: BTreeSet<i64> = [m - k].into_iter().collect();
    for n in SHIFTS {
        let dual = dualize_complex(&a, DualityDatum::new(m, n));
        if dual.twist_support() != expected {
            return Err(Error::Shape(format!(
                "dual of O({k}) under ({m}, {n}) has twists {:?}",
                dual.twist_support()
            )));
        }
    }
    Ok(m - k)
}

/// [`semiorth_dual_class_on`] over `P^1` with rational coefficients.
pub fn semiorth_dual_class(k: i64, m: i64) -> Result<i64> {
    semiorth_dual_class_on(PolyRing::projective(1, FieldSpec::Rationals), k, m)
}

/// Twist data of a cone relevant to the quotient by `𝒜_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientReport {
    /// Lowest-degree term as `(degree, twists)`.
    pub low: Option<(i64, Vec<i64>)>,
    /// Highest-degree term as `(degree, twists)`.
    pub high: Option<(i64, Vec<i64>)>,
    /// `(degree, twist)` of middle terms with twist outside `[-r, -1]`.
    pub middle_violations: Vec<(i64, i64)>,
    pub holds: bool,
}

/// Checks that the middle terms of `c` have twists in `[-r, -1]` (so they
/// vanish in the quotient) and the endpoints are `O(-r-1)` and `O(0)`.
pub fn quotient_vanishing_complex(c: &TwistedFreeComplex, r: usize) -> QuotientReport {
    let r = r as i64;
    let Some((lo, hi)) = c.support() else {
        return QuotientReport {
            low: None,
            high: None,
            middle_violations: Vec::new(),
            holds: false,
        };
    };
    let mut middle_violations = Vec::new();
    for i in c.degrees().filter(|&i| lo < i && i < hi) {
        for &t in c.term(i) {
            if !(-r..=-1).contains(&t) {
                middle_violations.push((i, t));
            }
        }
    }
    let low = (lo, c.term(lo).to_vec());
    let high = (hi, c.term(hi).to_vec());
    let holds = lo < hi && middle_violations.is_empty() && low.1 == [-r - 1] && high.1 == [0];
    QuotientReport {
        low: Some(low),
        high: Some(high),
        middle_violations,
        holds,
    }
}

/// [`quotient_vanishing_complex`] on the cone of the form `φ` built at level `ell`.
pub fn quotient_vanishing(phi: &SymmetricFormData, r: usize, ell: i64) -> Result<QuotientReport> {
    crate::koszul::check_ell(r, ell)?;
    Ok(quotient_vanishing_complex(&cone(&phi.form)?, r))
}

/// Runs [`quotient_vanishing`] for every level `ell ∈ [-r-1, -1]`; the flag is
/// true iff every run holds and all surviving endpoints agree.
pub fn quotient_vanishing_all(r: usize, field: FieldSpec) -> Result<(bool, Vec<(i64, QuotientReport)>)> {
    let k = build_koszul(r, field)?;
    let mut reports = Vec::new();
    for ell in -(r as i64) - 1..=-1 {
        let phi = build_phi(&k, ell)?;
        reports.push((ell, quotient_vanishing(&phi, r, ell)?));
    }
    let first = reports.first().map(|(_, q)| (q.low.clone(), q.high.clone()));
    let ok = reports
        .iter()
        .all(|(_, q)| q.holds && Some((q.low.clone(), q.high.clone())) == first);
    Ok((ok, reports))
}
