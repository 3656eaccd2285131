//! Ring axioms, evaluation and the text format of homogeneous polynomials,
//! checked on random inputs over the rationals and two prime fields.

use proptest::prelude::*;

use hermkos_core::{FieldSpec, HomogPoly, Monomial, PolyRing, Scalar};

const CASES: u32 = 500;
const NVARS: usize = 3;

fn fields() -> [FieldSpec; 3] {
    [FieldSpec::Rationals, FieldSpec::Prime(7), FieldSpec::Prime(1_000_003)]
}

/// A polynomial of degree `deg` with coefficients taken cyclically from `coeffs`.
fn poly(ring: PolyRing, deg: u32, coeffs: &[i64]) -> HomogPoly {
    let monos = Monomial::all_of_degree(ring.nvars(), deg);
    let terms = monos
        .into_iter()
        .zip(coeffs.iter().cycle())
        .map(|(m, &c)| (m, ring.field().from_i64(c)));
    HomogPoly::from_terms(ring, deg, terms).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, 1..12)
}

fn point(field: FieldSpec, xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| field.from_i64(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn addition_is_an_abelian_group(a in coeffs(), b in coeffs(), c in coeffs(), d in 0u32..4) {
        for field in fields() {
            let ring = PolyRing::new(NVARS, field);
            let (f, g, h) = (poly(ring, d, &a), poly(ring, d, &b), poly(ring, d, &c));
            prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
            prop_assert_eq!(f.add(&g).unwrap().add(&h).unwrap(), f.add(&g.add(&h).unwrap()).unwrap());
            prop_assert!(f.add(&f.neg()).unwrap().is_zero());
            prop_assert_eq!(f.add(&ring.zero(d)).unwrap(), f.clone());
            prop_assert_eq!(f.sub(&g).unwrap(), f.add(&g.neg()).unwrap());
        }
    }

    #[test]
    fn multiplication_is_associative_commutative_and_distributive(
        a in coeffs(), b in coeffs(), c in coeffs(), da in 0u32..3, db in 0u32..3, dc in 0u32..3,
    ) {
        for field in fields() {
            let ring = PolyRing::new(NVARS, field);
            let (f, g, h) = (poly(ring, da, &a), poly(ring, db, &b), poly(ring, dc, &c));
            let fg = f.mul(&g).unwrap();
            prop_assert_eq!(fg.degree(), da + db);
            prop_assert_eq!(&fg, &g.mul(&f).unwrap());
            prop_assert_eq!(fg.mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
            let h2 = poly(ring, db, &c);
            prop_assert_eq!(
                f.mul(&g.add(&h2).unwrap()).unwrap(),
                fg.add(&f.mul(&h2).unwrap()).unwrap()
            );
            prop_assert_eq!(f.mul(&ring.one()).unwrap(), f.clone());
        }
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        a in coeffs(), b in coeffs(), da in 0u32..3, db in 0u32..3,
        xs in prop::collection::vec(-20i64..=20, NVARS),
    ) {
        for field in fields() {
            let ring = PolyRing::new(NVARS, field);
            let pt = point(field, &xs);
            let (f, g) = (poly(ring, da, &a), poly(ring, db, &b));
            let (vf, vg) = (f.eval(&pt).unwrap(), g.eval(&pt).unwrap());
            prop_assert_eq!(f.mul(&g).unwrap().eval(&pt).unwrap(), &vf * &vg);
            let g2 = poly(ring, da, &b);
            prop_assert_eq!(f.add(&g2).unwrap().eval(&pt).unwrap(), &vf + &g2.eval(&pt).unwrap());
            let c = field.from_i64(xs[0]);
            prop_assert_eq!(f.scale(&c).eval(&pt).unwrap(), &c * &vf);
        }
    }

    #[test]
    fn scaling_matches_constant_multiplication(a in coeffs(), d in 0u32..4, c in -9i64..=9) {
        for field in fields() {
            let ring = PolyRing::new(NVARS, field);
            let f = poly(ring, d, &a);
            let s = field.from_i64(c);
            prop_assert_eq!(f.scale(&s), f.mul(&ring.constant(s.clone())).unwrap());
            prop_assert_eq!(f.scale(&s).degree(), d);
        }
    }

    #[test]
    fn text_format_round_trips(a in coeffs(), d in 0u32..4) {
        for field in fields() {
            let ring = PolyRing::new(NVARS, field);
            let f = poly(ring, d, &a);
            let back = HomogPoly::parse(&f.to_string(), ring, Some(d)).unwrap();
            prop_assert_eq!(back, f);
        }
    }

    #[test]
    fn nonzero_scalars_are_invertible(n in -1000i64..=1000, m in 1i64..=1000) {
        for field in fields() {
            let a = field.from_i64(n);
            let b = field.from_i64(m);
            if let (false, Some(inv)) = (a.is_zero(), a.inv()) {
                prop_assert!((&a * &inv).is_one());
            } else {
                prop_assert!(a.is_zero());
            }
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }
    }
}

#[test]
fn worked_examples() {
    let q = FieldSpec::Rationals;
    let ring = PolyRing::projective(1, q);
    let (x0, x1) = (ring.var(0), ring.var(1));
    assert_eq!(x0.add(&x1).unwrap().to_string(), "x0 + x1");
    let prod = x0.mul(&x1).unwrap();
    assert_eq!(prod.degree(), 2);
    assert_eq!(prod.to_string(), "x0*x1");
    let z = x0.add(&x1).unwrap().scale(&q.zero());
    assert!(z.is_zero());
    assert_eq!(z.degree(), 1);
    assert_eq!(prod.eval(&point(q, &[2, 3])).unwrap(), q.from_i64(6));
    assert!(ring.zero(3).eval(&point(q, &[4, 5])).unwrap().is_zero());
    let f5 = FieldSpec::prime(5).unwrap();
    let r5 = PolyRing::projective(1, f5);
    let s = r5.var(0).mul(&r5.var(0)).unwrap().add(&r5.var(1).mul(&r5.var(1)).unwrap()).unwrap();
    assert!(s.eval(&point(f5, &[1, 2])).unwrap().is_zero());
}

#[test]
fn mismatched_inputs_are_rejected() {
    let ring = PolyRing::projective(2, FieldSpec::Rationals);
    assert!(ring.var(0).add(&ring.one()).is_err());
    let other = PolyRing::projective(3, FieldSpec::Rationals);
    assert!(ring.var(0).add(&other.var(0)).is_err());
    assert!(ring.var(0).eval(&point(FieldSpec::Rationals, &[1, 2])).is_err());
    let f7 = PolyRing::projective(2, FieldSpec::Prime(7));
    assert!(ring.var(0).mul(&f7.var(0)).is_err());
    assert!(HomogPoly::parse("x0 + x1^2", ring, None).is_err());
}
