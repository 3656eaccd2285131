//! Seeded generators of random complexes, graded maps, chain maps and
//! symmetric forms, for property checks and batteries.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::complex::{tensor_complexes, GradedMap, TwistedFreeComplex, TwistedFreeModule};
use crate::duality::{
    canonical_id, dualize_complex, dualize_map, rank_one_form, square_twist, transmute, DualityDatum,
    SymmetricFormData,
};
use crate::error::Result;
use crate::field::{Scalar, Sign};
use crate::koszul::{build_koszul, build_mu};
use crate::matrix::{GradedMatrix, Mat};
use crate::poly::{HomogPoly, Monomial, PolyRing};

/// Deterministic random source (ChaCha8 seeded from a `u64`).
pub struct RandomGen {
    rng: ChaCha8Rng,
}

impl RandomGen {
    pub fn new(seed: u64) -> Self {
        RandomGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo + 1) as u64;
        let zone = u64::MAX - (u64::MAX % span);
        loop {
            let v = self.rng.next_u64();
            if v < zone {
                return lo + (v % span) as i64;
            }
        }
    }

    pub fn coin(&mut self) -> bool {
        self.rng.next_u32() & 1 == 1
    }

    fn sign(&mut self) -> Sign {
        if self.coin() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Random homogeneous polynomial of degree `deg` with small integer
    /// coefficients; about half the monomials occur.
    pub fn poly(&mut self, ring: PolyRing, deg: u32) -> HomogPoly {
        let terms: Vec<(Monomial, Scalar)> = Monomial::all_of_degree(ring.nvars(), deg)
            .into_iter()
            .filter_map(|m| {
                let c = self.range(-3, 3);
                (c != 0 && self.coin()).then(|| (m, ring.field().from_i64(c)))
            })
            .collect();
        let mut p = HomogPoly::zero(ring, deg);
        for (m, c) in terms {
            p = p.add(&HomogPoly::monomial(ring, m, c)).expect("same degree");
        }
        p
    }

    /// Random matrix of homogeneous entries respecting the twists; entries of
    /// degree above 2 are left zero to keep sizes small.
    pub fn graded_matrix(&mut self, ring: PolyRing, src: &[i64], tgt: &[i64]) -> GradedMatrix {
        let mut m = GradedMatrix::zero(ring, src.to_vec(), tgt.to_vec());
        for (p, &b) in tgt.iter().enumerate() {
            for (q, &a) in src.iter().enumerate() {
                let deg = b - a;
                if (0..=2).contains(&deg) && self.coin() {
                    let v = self.poly(ring, deg as u32);
                    m.set(p, q, v).expect("degree matches twists");
                }
            }
        }
        m
    }

    fn twists(&mut self, len: usize, lo: i64, hi: i64) -> Vec<i64> {
        (0..len).map(|_| self.range(lo, hi)).collect()
    }

    /// `A_i -> A_{i+1}` with random twists and a random differential.
    pub fn two_term(&mut self, ring: PolyRing) -> TwistedFreeComplex {
        let i = self.range(-2, 2);
        let n0 = self.range(1, 2) as usize;
        let n1 = self.range(1, 2) as usize;
        let src = self.twists(n0, -2, 1);
        let tgt = self.twists(n1, -1, 2);
        let d = self.graded_matrix(ring, &src, &tgt);
        let mut terms = BTreeMap::new();
        terms.insert(i, TwistedFreeModule::new(src));
        terms.insert(i + 1, TwistedFreeModule::new(tgt));
        let mut diffs = BTreeMap::new();
        diffs.insert(i, d);
        TwistedFreeComplex::new(ring, terms, diffs).expect("two-term shapes")
    }

    /// Invertible constant matrix: product of random unitriangular factors.
    pub fn invertible(&mut self, ring: PolyRing, n: usize) -> Mat {
        let field = ring.field();
        let mut lower = Mat::identity(field, n);
        let mut upper = Mat::identity(field, n);
        for i in 0..n {
            for j in 0..i {
                lower.set(i, j, field.from_i64(self.range(-2, 2)));
                upper.set(j, i, field.from_i64(self.range(-2, 2)));
            }
        }
        lower.mul(&upper).expect("square factors")
    }

    /// The Koszul complex of the ring's `P^r` after random constant changes
    /// of basis in every degree, then twisted and shifted.
    pub fn koszul_variant(&mut self, ring: PolyRing) -> Result<TwistedFreeComplex> {
        let k = build_koszul(ring.r(), ring.field())?;
        let c = &k.complex;
        let mut change = BTreeMap::new();
        for (&i, m) in c.terms() {
            let g = self.invertible(ring, m.rank());
            let inv = g.inverse().expect("unitriangular product");
            let t = m.twists.clone();
            change.insert(
                i,
                (
                    GradedMatrix::from_constant(ring, t.clone(), t.clone(), &g)?,
                    GradedMatrix::from_constant(ring, t.clone(), t, &inv)?,
                ),
            );
        }
        let mut diffs = BTreeMap::new();
        for (&i, d) in c.diffs() {
            let nd = change[&(i + 1)].0.compose(&d.compose(&change[&i].1)?)?;
            diffs.insert(i, nd);
        }
        let terms = c
            .terms()
            .iter()
            .map(|(&i, m)| (i, TwistedFreeModule::new(m.twists.clone())))
            .collect();
        let conj = TwistedFreeComplex::new(ring, terms, diffs)?;
        let tw = self.range(-1, 1);
        let sh = self.range(-1, 2);
        Ok(conj.twist(tw).shift(sh))
    }

    /// A random valid complex: a two-term complex, a tensor product of two,
    /// a Koszul variant, or a direct sum, possibly shifted.
    pub fn complex(&mut self, ring: PolyRing) -> Result<TwistedFreeComplex> {
        let c = match self.range(0, 3) {
            0 => self.two_term(ring),
            1 => {
                let a = self.two_term(ring);
                let b = self.two_term(ring);
                tensor_complexes(&a, &b)?
            }
            2 => self.koszul_variant(ring)?,
            _ => {
                let a = self.two_term(ring);
                let b = self.two_term(ring);
                a.direct_sum(&b)?
            }
        };
        let sh = self.range(-1, 1);
        Ok(c.shift(sh))
    }

    /// Random graded map `A -> B` of the given degree (not a chain map).
    pub fn graded_map(&mut self, a: &TwistedFreeComplex, b: &TwistedFreeComplex, degree: i64) -> Result<GradedMap> {
        let mut comps = BTreeMap::new();
        for i in a.degrees().collect::<Vec<_>>() {
            let tgt = b.term(i + degree).to_vec();
            if tgt.is_empty() {
                continue;
            }
            let m = self.graded_matrix(a.ring(), a.term(i), &tgt);
            comps.insert(i, m);
        }
        GradedMap::new(a.clone(), b.clone(), degree, comps)
    }

    /// Random degree-0 chain map `A -> B`: the boundary of a random map of
    /// degree `-1`, plus a random multiple of the identity when `A = B`.
    pub fn chain_map(&mut self, a: &TwistedFreeComplex, b: &TwistedFreeComplex) -> Result<GradedMap> {
        let h = self.graded_map(a, b, -1)?;
        let mut f = h.boundary()?;
        if a == b {
            let c = a.ring().field().from_i64(self.range(-2, 2));
            f = f.add(&GradedMap::identity(a).scale(&c))?;
        }
        Ok(f)
    }

    /// Random duality datum with `t, n` in `[-3, 3]`.
    pub fn datum(&mut self) -> DualityDatum {
        DualityDatum::new(self.range(-3, 3), self.range(-3, 3))
    }

    /// A random `ε`-symmetric form, drawn from several families: symmetrized
    /// random chain maps `f + ε f^∨ can`, hyperbolic forms on `A ⊕ A^∨`,
    /// rank-one forms, and twisted or transmuted wedge forms.
    pub fn symmetric_form(&mut self, ring: PolyRing) -> Result<SymmetricFormData> {
        match self.range(0, 3) {
            0 => {
                let a = self.complex(ring)?;
                let l = self.datum();
                let eps = self.sign();
                symmetrized(&a, l, eps, self)
            }
            1 => {
                let a = self.complex(ring)?;
                let l = self.datum();
                let eps = self.sign();
                hyperbolic_form(&a, l, eps)
            }
            2 => {
                let a = self.range(-2, 2);
                let c = self.range(1, 3) * if self.coin() { 1 } else { -1 };
                rank_one_form(ring, a, ring.field().from_i64(c))
            }
            _ => {
                let k = build_koszul(ring.r(), ring.field())?;
                let mu = build_mu(&k)?;
                if self.coin() {
                    let i = self.range(-2, 2);
                    transmute(&mu, i)
                } else {
                    let l = self.datum();
                    square_twist(&mu, l)
                }
            }
        }
    }
}

/// `f + ε f^∨ can` for the boundary `f` of a random map `A -> A^∨` of degree `-1`.
fn symmetrized(a: &TwistedFreeComplex, l: DualityDatum, eps: Sign, g: &mut RandomGen) -> Result<SymmetricFormData> {
    let dual = dualize_complex(a, l);
    let h = g.graded_map(a, &dual, -1)?;
    let f = h.boundary()?;
    let adj = dualize_map(&f, l).compose(&canonical_id(a, l))?.with_target(dual)?;
    let form = f.add(&adj.scale(&eps.scalar(a.ring().field())))?;
    SymmetricFormData::new(form, l, eps)
}

/// The hyperbolic form `[[0, id], [ε can, 0]]` on `A ⊕ A^∨`.
pub fn hyperbolic_form(a: &TwistedFreeComplex, l: DualityDatum, eps: Sign) -> Result<SymmetricFormData> {
    let ring = a.ring();
    let dual = dualize_complex(a, l);
    let sum = a.direct_sum(&dual)?;
    let target = dualize_complex(&sum, l);
    let can = canonical_id(a, l);
    let e = eps.scalar(ring.field());
    let mut comps = BTreeMap::new();
    for i in sum.degrees().collect::<Vec<_>>() {
        let id = GradedMatrix::identity(ring, dual.term(i).to_vec());
        let c = can.component(i).scale(&e);
        let ddual_term = target.term(i)[dual.rank(i)..].to_vec();
        let m = GradedMatrix::block(
            ring,
            &[a.term(i).to_vec(), dual.term(i).to_vec()],
            &[dual.term(i).to_vec(), ddual_term],
            &[alloc::vec![None, Some(&id)], alloc::vec![Some(&c), None]],
        )?;
        comps.insert(i, m);
    }
    let form = GradedMap::new(sum, target, 0, comps)?;
    SymmetricFormData::new(form, l, eps)
}
