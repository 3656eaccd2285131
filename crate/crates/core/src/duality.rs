//! The duality `A ↦ [A, L]` for an invertible complex `L = O(t)[n]`, the
//! canonical double-dual identification, symmetric forms and the form
//! calculus built on tensor products.
//!
//! Dual bases are ordered like the primal bases, so dualizing a matrix is
//! literal transposition (with twists `a ↦ t - a`).

use alloc::collections::BTreeMap;
use alloc::format;
use core::fmt;

use crate::complex::{tensor_complexes, tensor_layout, tensor_maps, GradedMap, TwistedFreeComplex};
use crate::error::{Error, Result};
use crate::field::{Scalar, Sign};
use crate::matrix::GradedMatrix;
use crate::poly::{HomogPoly, PolyRing};

/// The invertible object `L = O(t)[n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualityDatum {
    pub t: i64,
    pub n: i64,
}

impl DualityDatum {
    pub const fn new(t: i64, n: i64) -> Self {
        DualityDatum { t, n }
    }

    /// `Δ[k] = O(-(r+1))[k]` on `P^r`.
    pub const fn delta(r: usize, k: i64) -> Self {
        DualityDatum {
            t: -(r as i64) - 1,
            n: k,
        }
    }

    /// `L1 ⊗ L2`.
    pub const fn compose(self, other: DualityDatum) -> DualityDatum {
        DualityDatum {
            t: self.t + other.t,
            n: self.n + other.n,
        }
    }

    /// `L` itself as a complex: `O(t)` in degree `-n`.
    pub fn unit_complex(self, ring: PolyRing) -> TwistedFreeComplex {
        TwistedFreeComplex::single(ring, -self.n, alloc::vec![self.t])
    }
}

impl fmt::Display for DualityDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({})[{}]", self.t, self.n)
    }
}

/// `(-1)^e` as a sign.
fn parity(e: i64) -> Sign {
    Sign::from_parity(e)
}

/// Composes two data: `(t1 + t2, n1 + n2)`.
pub fn compose_duality(l1: DualityDatum, l2: DualityDatum) -> DualityDatum {
    l1.compose(l2)
}

/// `A^∨`: `(A^∨)_i` has twists `t - a` for `a` in `A_{-i-n}`, and
/// `(d^∨)_i = (-1)^{i+1} d_{-i-1-n}^T`.
pub fn dualize_complex(a: &TwistedFreeComplex, l: DualityDatum) -> TwistedFreeComplex {
    let ring = a.ring();
    let mut terms = BTreeMap::new();
    for (&j, m) in a.terms() {
        let mut dm = m.clone();
        dm.twists = m.twists.iter().map(|x| l.t - x).collect();
        terms.insert(-j - l.n, dm);
    }
    let mut diffs = BTreeMap::new();
    for (&k, d) in a.diffs() {
        let i = -k - 1 - l.n;
        diffs.insert(i, d.transpose_dual(l.t).signed(i + 1));
    }
    TwistedFreeComplex::new(ring, terms, diffs).expect("dual terms match dual differentials")
}

/// `f^∨: B^∨ -> A^∨` for `f: A -> B` of degree `j`, with
/// `(f^∨)_i = (-1)^{ij} f_{-i-j-n}^T`.
pub fn dualize_map(f: &GradedMap, l: DualityDatum) -> GradedMap {
    let j = f.degree();
    let mut comps = BTreeMap::new();
    for (&k, fk) in f.components() {
        let i = -k - j - l.n;
        comps.insert(i, fk.transpose_dual(l.t).signed(i * j));
    }
    GradedMap::new(
        dualize_complex(f.target(), l),
        dualize_complex(f.source(), l),
        j,
        comps,
    )
    .expect("dual components match dual terms")
}

/// `can: A -> A^∨∨`, with component `(-1)^{i(n+1)}` times the identity in degree `i`.
pub fn canonical_id(a: &TwistedFreeComplex, l: DualityDatum) -> GradedMap {
    let ring = a.ring();
    let field = ring.field();
    let target = dualize_complex(&dualize_complex(a, l), l);
    let comps = a
        .terms()
        .iter()
        .map(|(&i, m)| {
            let c = parity(i * (l.n + 1)).scalar(field);
            (i, GradedMatrix::scalar_identity(ring, m.twists.clone(), c))
        })
        .collect();
    GradedMap::new(a.clone(), target, 0, comps).expect("double dual has the original terms")
}

/// A chain map `φ: A -> A^∨` declared `ε`-symmetric for the datum `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricFormData {
    pub form: GradedMap,
    pub datum: DualityDatum,
    pub epsilon: Sign,
}

impl SymmetricFormData {
    /// Wraps a form after checking that it is a degree-0 chain map into the
    /// dual of its source. Symmetry is *not* assumed; see [`check_symmetric`].
    pub fn new(form: GradedMap, datum: DualityDatum, epsilon: Sign) -> Result<Self> {
        if form.degree() != 0 {
            return Err(Error::NotAChainMap(format!(
                "a form must have degree 0, found {}",
                form.degree()
            )));
        }
        if *form.target() != dualize_complex(form.source(), datum) {
            return Err(Error::Shape("form target is not the dual of its source".into()));
        }
        let defects = form.chain_defects();
        if !defects.is_empty() {
            return Err(Error::NotAChainMap(format!(
                "form fails the chain condition in degrees {defects:?}"
            )));
        }
        Ok(SymmetricFormData {
            form,
            datum,
            epsilon,
        })
    }

    /// The zero form on `A`.
    pub fn zero(a: &TwistedFreeComplex, datum: DualityDatum, epsilon: Sign) -> Self {
        SymmetricFormData {
            form: GradedMap::zero(a.clone(), dualize_complex(a, datum), 0),
            datum,
            epsilon,
        }
    }

    pub fn complex(&self) -> &TwistedFreeComplex {
        self.form.source()
    }

    pub fn ring(&self) -> PolyRing {
        self.form.ring()
    }

    /// The same form with the opposite declared sign.
    pub fn with_epsilon(&self, epsilon: Sign) -> Self {
        SymmetricFormData {
            epsilon,
            ..self.clone()
        }
    }

    /// Bilinear value `β(e_x ⊗ e_y)` for `e_x ∈ A_p` and `e_y ∈ A_{-p-n}`.
    pub fn pairing(&self, p: i64, x: usize, y: usize) -> Option<HomogPoly> {
        self.form.component_ref(p).and_then(|m| m.get(y, x).cloned())
    }
}

/// `φ = ε · φ^∨ ∘ can`, compared exactly.
pub fn check_symmetric(phi: &SymmetricFormData) -> Result<bool> {
    let a = phi.complex();
    if *phi.form.target() != dualize_complex(a, phi.datum) {
        return Err(Error::Shape("form target is not the dual of its source".into()));
    }
    let rhs = dualize_map(&phi.form, phi.datum).compose(&canonical_id(a, phi.datum))?;
    let rhs = rhs.scale(&phi.epsilon.scalar(phi.ring().field()));
    Ok(rhs == phi.form)
}

/// Builds the adjoint form `x ↦ (y ↦ β(x ⊗ y))` from pairing values on basis
/// vectors: `value(p, x, y)` is `β(e_x ⊗ e_y)` for `e_x ∈ A_p`,
/// `e_y ∈ A_{-p-n}`.
pub fn form_from_pairing(
    a: &TwistedFreeComplex,
    l: DualityDatum,
    epsilon: Sign,
    mut value: impl FnMut(i64, usize, usize) -> Result<Option<HomogPoly>>,
) -> Result<SymmetricFormData> {
    let ring = a.ring();
    let target = dualize_complex(a, l);
    let mut comps = BTreeMap::new();
    for (&p, m) in a.terms() {
        let q = -p - l.n;
        let other = a.term(q);
        if other.is_empty() {
            continue;
        }
        let mut c = GradedMatrix::zero(ring, m.twists.clone(), target.term(p).to_vec());
        for x in 0..m.rank() {
            for y in 0..other.len() {
                if let Some(v) = value(p, x, y)? {
                    c.set(y, x, v)?;
                }
            }
        }
        comps.insert(p, c);
    }
    SymmetricFormData::new(GradedMap::new(a.clone(), target, 0, comps)?, l, epsilon)
}

/// The form adjoint to a bilinear chain map `β: A ⊗ A -> L`.
pub fn bilinear_to_form(
    beta: &GradedMap,
    a: &TwistedFreeComplex,
    l: DualityDatum,
    epsilon: Sign,
) -> Result<SymmetricFormData> {
    let ring = a.ring();
    let aa = tensor_complexes(a, a)?;
    if *beta.source() != aa || *beta.target() != l.unit_complex(ring) || beta.degree() != 0 {
        return Err(Error::Shape("β must be a degree-0 map A ⊗ A -> L".into()));
    }
    let layout = tensor_layout(a, a, -l.n);
    let row = beta.component(-l.n);
    form_from_pairing(a, l, epsilon, |p, x, y| {
        let blk = layout.iter().find(|b| b.p == p).expect("pairing block");
        Ok(row.get(0, blk.offset + x * blk.rank_b + y).cloned())
    })
}

/// Inverse of [`bilinear_to_form`]: `β(x ⊗ y) = φ(x)(y)`.
pub fn form_to_bilinear(phi: &SymmetricFormData) -> Result<GradedMap> {
    let a = phi.complex();
    let ring = a.ring();
    let l = phi.datum;
    let aa = tensor_complexes(a, a)?;
    let unit = l.unit_complex(ring);
    let mut row = GradedMatrix::zero(ring, aa.term(-l.n).to_vec(), alloc::vec![l.t]);
    for blk in tensor_layout(a, a, -l.n) {
        for x in 0..blk.rank_a {
            for y in 0..blk.rank_b {
                if let Some(v) = phi.pairing(blk.p, x, y) {
                    row.set(0, blk.offset + x * blk.rank_b + y, v)?;
                }
            }
        }
    }
    GradedMap::new(aa, unit, 0, [(-l.n, row)].into_iter().collect())
}

/// `M^∨ ⊗ N^∨ -> (M ⊗ N)^∨`, sending `f ⊗ g` to `x ⊗ y ↦ (-1)^{|x||g|} f(x) g(y)`.
pub fn pairing_iso(
    m: &TwistedFreeComplex,
    n: &TwistedFreeComplex,
    l1: DualityDatum,
    l2: DualityDatum,
) -> Result<GradedMap> {
    let ring = m.ring();
    let field = ring.field();
    let (dm, dn) = (dualize_complex(m, l1), dualize_complex(n, l2));
    let src = tensor_complexes(&dm, &dn)?;
    let l = l1.compose(l2);
    let mn = tensor_complexes(m, n)?;
    let tgt = dualize_complex(&mn, l);
    let mut comps = BTreeMap::new();
    for i in src.degrees() {
        let mut c = GradedMatrix::zero(ring, src.term(i).to_vec(), tgt.term(i).to_vec());
        let out_layout = tensor_layout(m, n, -i - l.n);
        for blk in tensor_layout(&dm, &dn, i) {
            let p = blk.p; // f ∈ (M^∨)_p evaluates on M_{-p-n1}
            let u = -p - l1.n;
            let g_deg = i - p;
            let sign = parity(u * g_deg).scalar(field);
            for x in 0..blk.rank_a {
                for y in 0..blk.rank_b {
                    let col = blk.offset + x * blk.rank_b + y;
                    let row = crate::complex::tensor_index(&out_layout, u, x, y)
                        .ok_or_else(|| Error::Shape("pairing target block missing".into()))?;
                    c.set(row, col, ring.constant(sign.clone()))?;
                }
            }
        }
        comps.insert(i, c);
    }
    GradedMap::new(src, tgt, 0, comps)
}

/// Two-sided inverse of [`pairing_iso`] (its components are signed
/// permutations, so the inverse is the transpose).
pub fn pairing_iso_inverse(iso: &GradedMap) -> Result<GradedMap> {
    let mut comps = BTreeMap::new();
    for (&i, c) in iso.components() {
        let mut inv = GradedMatrix::zero(iso.ring(), c.tgt().to_vec(), c.src().to_vec());
        for (p, q, v) in c.entries() {
            inv.set(q, p, v.clone())?;
        }
        comps.insert(i, inv);
    }
    GradedMap::new(iso.target().clone(), iso.source().clone(), 0, comps)
}

/// The form on `M ⊗ N` induced by forms on `M` and `N`: the pairing
/// isomorphism composed with `φ ⊗ ψ`. Its sign is `ε_φ ε_ψ`.
pub fn tensor_form(phi: &SymmetricFormData, psi: &SymmetricFormData) -> Result<SymmetricFormData> {
    let f = tensor_maps(&phi.form, &psi.form)?;
    let iso = pairing_iso(phi.complex(), psi.complex(), phi.datum, psi.datum)?;
    let form = iso.compose(&f)?;
    SymmetricFormData::new(form, phi.datum.compose(psi.datum), phi.epsilon * psi.epsilon)
}

/// `(O[i], multiplication)`: `O` in degree `-i` over the datum `(0, 2i)`,
/// with sign `(-1)^i`.
pub fn unit_form(ring: PolyRing, i: i64) -> SymmetricFormData {
    line_form(ring, DualityDatum::new(0, i))
}

/// The trivial form on `L = O(t)[n]` over `L ⊗ L`, with sign `(-1)^n`.
pub fn line_form(ring: PolyRing, l: DualityDatum) -> SymmetricFormData {
    let a = l.unit_complex(ring);
    let datum = DualityDatum::new(2 * l.t, 2 * l.n);
    let target = dualize_complex(&a, datum);
    let comp = GradedMatrix::identity(ring, alloc::vec![l.t]);
    let form = GradedMap::new(a, target, 0, [(-l.n, comp)].into_iter().collect())
        .expect("line form shape");
    SymmetricFormData {
        form,
        datum,
        epsilon: parity(l.n),
    }
}

/// Tensoring with `(O[i], multiplication)`: turns an `ε`-symmetric form on
/// `A` into an `ε(-1)^i`-symmetric form on `A[i]` over the datum shifted by `2i`.
pub fn transmute(phi: &SymmetricFormData, i: i64) -> Result<SymmetricFormData> {
    tensor_form(&unit_form(phi.ring(), i), phi)
}

/// `L ⊗ A`.
pub fn square_twist_complex(a: &TwistedFreeComplex, l: DualityDatum) -> Result<TwistedFreeComplex> {
    tensor_complexes(&l.unit_complex(a.ring()), a)
}

/// Tensoring a form with the trivial form on `L`: the datum becomes
/// `datum ⊗ L ⊗ L`; the sign is multiplied by `(-1)^n`.
pub fn square_twist(phi: &SymmetricFormData, l: DualityDatum) -> Result<SymmetricFormData> {
    tensor_form(&line_form(phi.ring(), l), phi)
}

/// The rank-one form `c` on `O(a)` in degree 0 over `(2a, 0)`.
pub fn rank_one_form(ring: PolyRing, a: i64, c: Scalar) -> Result<SymmetricFormData> {
    let cx = TwistedFreeComplex::single(ring, 0, alloc::vec![a]);
    let datum = DualityDatum::new(2 * a, 0);
    form_from_pairing(&cx, datum, Sign::Plus, |_, _, _| Ok(Some(ring.constant(c.clone()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use alloc::vec;

    fn ring() -> PolyRing {
        PolyRing::projective(1, FieldSpec::Rationals)
    }

    fn x0_complex() -> TwistedFreeComplex {
        let r = ring();
        let mut d = GradedMatrix::zero(r, vec![-1], vec![0]);
        d.set(0, 0, r.var(0)).unwrap();
        let terms = [(0, vec![-1]), (1, vec![0])]
            .into_iter()
            .map(|(i, t)| (i, crate::complex::TwistedFreeModule::new(t)))
            .collect();
        TwistedFreeComplex::new(r, terms, [(0, d)].into_iter().collect()).unwrap()
    }

    #[test]
    fn datum_arithmetic() {
        let l = DualityDatum::new(-3, 2);
        assert_eq!(compose_duality(DualityDatum::new(0, 0), l), l);
        assert_eq!(compose_duality(l, l), DualityDatum::new(-6, 4));
        assert_eq!(
            compose_duality(DualityDatum::delta(2, 2), DualityDatum::new(0, 1)),
            DualityDatum::new(-3, 3)
        );
    }

    #[test]
    fn dual_of_single_term_and_two_term_complex() {
        let r = ring();
        let a = TwistedFreeComplex::single(r, 0, vec![2]);
        let d = dualize_complex(&a, DualityDatum::new(5, 3));
        assert_eq!(d, TwistedFreeComplex::single(r, -3, vec![3]));

        let x = x0_complex();
        let dx = dualize_complex(&x, DualityDatum::new(0, 0));
        assert_eq!(dx.term(-1), &[0]);
        assert_eq!(dx.term(0), &[1]);
        assert_eq!(dx.diff(-1).get(0, 0).unwrap(), &r.var(0));
    }

    #[test]
    fn canonical_identity_signs() {
        let x = x0_complex();
        for n in -3..=3 {
            let can = canonical_id(&x, DualityDatum::new(1, n));
            assert!(can.is_chain_map());
            for (&i, c) in can.components() {
                let v = c.get(0, 0).unwrap().constant_value().unwrap();
                let expected = if (i * (n + 1)).rem_euclid(2) == 0 { 1 } else { -1 };
                assert_eq!(v.as_unit_sign(), Some(expected));
            }
        }
    }

    #[test]
    fn unit_and_zero_forms_are_symmetric() {
        let r = ring();
        for i in -2..=2 {
            let u = unit_form(r, i);
            assert!(check_symmetric(&u).unwrap(), "unit form O[{i}]");
        }
        let x = x0_complex();
        let z = SymmetricFormData::zero(&x, DualityDatum::new(-1, 1), Sign::Plus);
        assert!(check_symmetric(&z).unwrap());
        assert!(check_symmetric(&z.with_epsilon(Sign::Minus)).unwrap());
    }

    #[test]
    fn rank_one_forms_multiply() {
        let r = ring();
        let f = FieldSpec::Rationals;
        let a = rank_one_form(r, 1, f.from_i64(3)).unwrap();
        let b = rank_one_form(r, -2, f.from_i64(5)).unwrap();
        let ab = tensor_form(&a, &b).unwrap();
        assert!(check_symmetric(&ab).unwrap());
        assert_eq!(ab.datum, DualityDatum::new(-2, 0));
        assert_eq!(ab.pairing(0, 0, 0).unwrap().constant_value().unwrap(), f.from_i64(15));
    }
}
