//! Point-sampling acyclicity check for any `r`.
//!
//! On each chart `x_c = 1` the remaining coordinates are drawn uniformly from
//! `F_p`; the specialized complex of vector spaces must be exact, i.e.
//! `rank d_i + rank d_{i-1} = dim C_i` in every degree.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{AcyclicityVerdict, Evidence, Method, PointWitness, Verdict};
use crate::complex::TwistedFreeComplex;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::modp::{is_prime, sparse_rank};

pub const DEFAULT_PRIME: u64 = 1_000_003;
pub const DEFAULT_TRIALS: usize = 100;
/// Smallest sampling prime accepted without an explicit override. The
/// intended size is about `2^20`; the floor is `10^6` so that the default
/// prime `1_000_003` qualifies.
pub const MIN_PRIME: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbabilisticParams {
    /// Points sampled per chart.
    pub trials: usize,
    pub prime: u64,
    pub seed: u64,
    /// Permits primes below [`MIN_PRIME`].
    pub allow_small_prime: bool,
}

impl Default for ProbabilisticParams {
    fn default() -> Self {
        ProbabilisticParams {
            trials: DEFAULT_TRIALS,
            prime: DEFAULT_PRIME,
            seed: 0,
            allow_small_prime: false,
        }
    }
}

impl ProbabilisticParams {
    pub fn new(trials: usize, prime: u64, seed: u64) -> Self {
        ProbabilisticParams {
            trials,
            prime,
            seed,
            allow_small_prime: false,
        }
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::OutOfRange("at least one trial is required".into()));
        }
        if self.prime == 2 || !is_prime(self.prime) || self.prime >= crate::field::MAX_MODULUS {
            return Err(Error::InvalidField(format!("{} is not an odd prime below 2^62", self.prime)));
        }
        if self.prime < MIN_PRIME && !self.allow_small_prime {
            return Err(Error::OutOfRange(format!(
                "sampling prime {} is below {MIN_PRIME}; override to allow small primes",
                self.prime
            )));
        }
        Ok(())
    }
}

/// Uniform residue in `[0, p)` by rejection sampling.
fn uniform(rng: &mut ChaCha8Rng, p: u64) -> u64 {
    let zone = u64::MAX - (u64::MAX % p);
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % p;
        }
    }
}

/// Outcome of evaluating all differentials at one point.
enum PointRanks {
    Ranks(BTreeMap<i64, usize>),
    /// A rational coefficient has a denominator divisible by `p`.
    BadReduction,
}

fn ranks_at(a: &TwistedFreeComplex, p: u64, point: &[u64]) -> PointRanks {
    let mut ranks = BTreeMap::new();
    for (&i, d) in a.diffs() {
        let Some(rows) = d.eval_mod(p, point) else {
            return PointRanks::BadReduction;
        };
        ranks.insert(i, sparse_rank(rows, p));
    }
    PointRanks::Ranks(ranks)
}

/// First degree where rank additivity fails, as `(degree, out, in, dim)`.
fn additivity_failure(a: &TwistedFreeComplex, ranks: &BTreeMap<i64, usize>) -> Option<(i64, usize, usize, usize)> {
    a.degrees().find_map(|i| {
        let out = ranks.get(&i).copied().unwrap_or(0);
        let inc = ranks.get(&(i - 1)).copied().unwrap_or(0);
        let dim = a.rank(i);
        (out + inc != dim).then_some((i, out, inc, dim))
    })
}

fn sampling_prime(a: &TwistedFreeComplex, prime: u64) -> Result<()> {
    match a.ring().field() {
        FieldSpec::Rationals => Ok(()),
        FieldSpec::Prime(q) if q == prime => Ok(()),
        FieldSpec::Prime(q) => Err(Error::InvalidField(format!(
            "complex over F_{q} must be sampled with prime {q}, not {prime}"
        ))),
    }
}

/// Samples `trials` points on each chart. Complexes over `Q` are reduced mod
/// the sampling prime; complexes over `F_q` need `q` equal to it.
///
/// The reported bound is `Σ_charts Σ_i rank(d_i) · maxdeg(d_i) / p`: the
/// degree of the product of the maximal nonvanishing minors over `p`, per
/// sampled point.
pub fn acyclic_probabilistic(a: &TwistedFreeComplex, params: &ProbabilisticParams) -> Result<AcyclicityVerdict> {
    params.check()?;
    sampling_prime(a, params.prime)?;
    let p = params.prime;
    let nvars = a.ring().nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut out_params = BTreeMap::new();
    out_params.insert("trials".into(), format!("{}", params.trials));
    out_params.insert("prime".into(), format!("{p}"));
    out_params.insert("seed".into(), format!("{}", params.seed));
    out_params.insert("charts".into(), format!("{nvars}"));
    let max_deg: BTreeMap<i64, u32> = a.diffs().iter().map(|(&i, d)| (i, d.max_degree())).collect();
    let mut degree_sum: u64 = 0;
    for chart in 0..nvars {
        let mut generic: BTreeMap<i64, usize> = BTreeMap::new();
        for _ in 0..params.trials {
            let point: Vec<u64> = (0..nvars)
                .map(|v| if v == chart { 1 } else { uniform(&mut rng, p) })
                .collect();
            let ranks = match ranks_at(a, p, &point) {
                PointRanks::Ranks(r) => r,
                PointRanks::BadReduction => {
                    return Ok(AcyclicityVerdict {
                        method: Method::PointProbabilistic,
                        verdict: Verdict::Inconclusive,
                        evidence: Evidence::Note(format!("a coefficient denominator vanishes mod {p}")),
                        params: out_params,
                        bound: None,
                    });
                }
            };
            if let Some((degree, rank_out, rank_in, dim)) = additivity_failure(a, &ranks) {
                return Ok(AcyclicityVerdict {
                    method: Method::PointProbabilistic,
                    verdict: Verdict::NotAcyclic,
                    evidence: Evidence::Witness(PointWitness {
                        chart,
                        point,
                        prime: p,
                        degree,
                        rank_out,
                        rank_in,
                        dim,
                    }),
                    params: out_params,
                    bound: None,
                });
            }
            for (i, r) in ranks {
                let e = generic.entry(i).or_insert(0);
                *e = (*e).max(r);
            }
        }
        degree_sum += generic
            .iter()
            .map(|(i, &r)| r as u64 * u64::from(max_deg.get(i).copied().unwrap_or(0)))
            .sum::<u64>();
    }
    Ok(AcyclicityVerdict {
        method: Method::PointProbabilistic,
        verdict: Verdict::Acyclic,
        evidence: Evidence::Points {
            charts: nvars,
            trials: params.trials,
        },
        params: out_params,
        bound: Some(degree_sum as f64 / p as f64),
    })
}

/// Re-evaluates a witness: true iff rank additivity still fails there.
pub fn witness_refails(a: &TwistedFreeComplex, w: &PointWitness) -> bool {
    match ranks_at(a, w.prime, &w.point) {
        PointRanks::Ranks(ranks) => {
            let out = ranks.get(&w.degree).copied().unwrap_or(0);
            let inc = ranks.get(&(w.degree - 1)).copied().unwrap_or(0);
            out + inc != a.rank(w.degree)
        }
        PointRanks::BadReduction => false,
    }
}
