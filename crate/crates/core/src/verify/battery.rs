//! Randomized battery for the duality sign identities: validity of duals,
//! the canonical map to the double dual, its naturality, the triangle
//! identity, and contravariance of dualizing maps.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::complex::{GradedMap, TwistedFreeComplex};
use crate::duality::{canonical_id, dualize_complex, dualize_map, DualityDatum};
use crate::error::Result;
use crate::field::{FieldSpec, Sign};
use crate::matrix::GradedMatrix;
use crate::poly::PolyRing;
use crate::random::RandomGen;

/// `t` and `n` range over `[-3, 3]` in the default grid.
pub const DEFAULT_GRID_RANGE: i64 = 3;

/// Names of the identities, in report order.
pub const IDENTITIES: [&str; 5] = [
    "dual-is-valid-complex",
    "can-is-signed-identity-chain-iso",
    "double-dual-naturality",
    "can-triangle",
    "dual-contravariance",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityResult {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    /// Full data of the first failure.
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatteryReport {
    pub count: usize,
    pub seed: u64,
    pub grid: Vec<DualityDatum>,
    pub identities: Vec<IdentityResult>,
}

impl BatteryReport {
    pub fn total_failures(&self) -> usize {
        self.identities.iter().map(|r| r.failed).sum()
    }

    pub fn total_checks(&self) -> usize {
        self.identities.iter().map(|r| r.passed + r.failed).sum()
    }
}

/// All `(t, n)` with `|t|, |n| <= range`.
pub fn default_grid(range: i64) -> Vec<DualityDatum> {
    let mut g = Vec::new();
    for t in -range..=range {
        for n in -range..=range {
            g.push(DualityDatum::new(t, n));
        }
    }
    g
}

fn record(res: &mut IdentityResult, ok: bool, detail: impl FnOnce() -> String) {
    if ok {
        res.passed += 1;
    } else {
        res.failed += 1;
        if res.counterexample.is_none() {
            res.counterexample = Some(detail());
        }
    }
}

/// `can` has components `(-1)^{i(n+1)} · id` and is a chain map; since the
/// components are invertible it is then an isomorphism of complexes.
fn can_is_signed_identity(a: &TwistedFreeComplex, l: DualityDatum, can: &GradedMap) -> bool {
    let field = a.ring().field();
    let shape_ok = can.target().terms() == a.terms();
    let comps_ok = a.terms().iter().all(|(&i, m)| {
        let c = Sign::from_parity(i * (l.n + 1)).scalar(field);
        can.component(i) == GradedMatrix::scalar_identity(a.ring(), m.twists.clone(), c)
    });
    shape_ok && comps_ok && can.is_chain_map()
}

/// Runs the battery on `count` random complexes over `P^r` (`r ∈ {1, 2}`),
/// each against every datum of `grid`.
pub fn battery_duality_identities(
    count: usize,
    seed: u64,
    grid: &[DualityDatum],
    field: FieldSpec,
) -> Result<BatteryReport> {
    let mut g = RandomGen::new(seed);
    let mut results: Vec<IdentityResult> = IDENTITIES
        .iter()
        .map(|n| IdentityResult {
            name: (*n).into(),
            passed: 0,
            failed: 0,
            counterexample: None,
        })
        .collect();
    for _ in 0..count {
        let r = g.range(1, 2) as usize;
        let ring = PolyRing::projective(r, field);
        let a = g.complex(ring)?;
        let b = g.complex(ring)?;
        let c = g.complex(ring)?;
        let f = g.chain_map(&a, &b)?;
        let j1 = g.range(0, 2);
        let j2 = g.range(0, 2);
        let u = g.graded_map(&a, &b, j1)?;
        let v = g.graded_map(&b, &c, j2)?;
        for &l in grid {
            let dual = dualize_complex(&a, l);
            record(&mut results[0], dual.is_valid(), || {
                format!("datum {l}\ncomplex {a:?}\ndual {dual:?}\nviolations {:?}", dual.validate())
            });

            let can_a = canonical_id(&a, l);
            record(&mut results[1], can_is_signed_identity(&a, l, &can_a), || {
                format!("datum {l}\ncomplex {a:?}\ncan {can_a:?}")
            });

            let can_b = canonical_id(&b, l);
            let lhs = dualize_map(&dualize_map(&f, l), l).compose(&can_a);
            let rhs = can_b.compose(&f);
            let natural = matches!((&lhs, &rhs), (Ok(x), Ok(y)) if x == y);
            record(&mut results[2], natural, || {
                format!("datum {l}\nsource {a:?}\ntarget {b:?}\nmap {f:?}\nf^vv∘can {lhs:?}\ncan∘f {rhs:?}")
            });

            let can_dual = canonical_id(&dual, l);
            let tri = dualize_map(&can_a, l).compose(&can_dual);
            let tri_ok = matches!(&tri, Ok(m) if *m == GradedMap::identity(&dual));
            record(&mut results[3], tri_ok, || {
                format!("datum {l}\ncomplex {a:?}\ncan^v∘can {tri:?}")
            });

            let lhs = v.compose(&u).map(|vu| dualize_map(&vu, l));
            let sign = Sign::from_parity(j1 * j2).scalar(field);
            let rhs = dualize_map(&u, l).compose(&dualize_map(&v, l)).map(|m| m.scale(&sign));
            let contra = matches!((&lhs, &rhs), (Ok(x), Ok(y)) if x == y);
            record(&mut results[4], contra, || {
                format!(
                    "datum {l}\ndegrees {j1}, {j2}\nf {u:?}\ng {v:?}\n(g∘f)^v {lhs:?}\n±f^v∘g^v {rhs:?}"
                )
            });
        }
    }
    Ok(BatteryReport {
        count,
        seed,
        grid: grid.to_vec(),
        identities: results,
    })
}
