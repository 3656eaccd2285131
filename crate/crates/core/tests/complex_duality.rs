//! Complexes of twisted free modules, their maps, and the duality calculus.

use std::collections::BTreeMap;

use hermkos_core::complex::{cone, tensor_complexes, tensor_maps, GradedMap, TwistedFreeComplex, TwistedFreeModule};
use hermkos_core::duality::{
    bilinear_to_form, canonical_id, check_symmetric, dualize_complex, dualize_map, form_to_bilinear, pairing_iso,
    pairing_iso_inverse, rank_one_form, square_twist, tensor_form, transmute, unit_form, DualityDatum,
    SymmetricFormData,
};
use hermkos_core::koszul::{build_koszul, build_mu, build_phi, build_phi_skew, delta};
use hermkos_core::random::RandomGen;
use hermkos_core::{FieldSpec, GradedMatrix, PolyRing, Sign};

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn ring(r: usize) -> PolyRing {
    PolyRing::projective(r, q())
}

/// `O(-1) -x0-> O` in degrees 0, 1.
fn x0_complex() -> TwistedFreeComplex {
    let r = ring(1);
    let mut d = GradedMatrix::zero(r, vec![-1], vec![0]);
    d.set(0, 0, r.var(0)).unwrap();
    let terms = [(0, TwistedFreeModule::new(vec![-1])), (1, TwistedFreeModule::new(vec![0]))];
    TwistedFreeComplex::new(r, terms.into_iter().collect(), [(0, d)].into_iter().collect()).unwrap()
}

fn ranks(c: &TwistedFreeComplex) -> BTreeMap<i64, usize> {
    c.terms().iter().map(|(&i, m)| (i, m.rank())).collect()
}

#[test]
fn validate_reports_nonzero_squares() {
    assert!(build_koszul(1, q()).unwrap().complex.validate().is_empty());
    assert!(TwistedFreeComplex::single(ring(2), 3, vec![0, 1]).validate().is_empty());
    let r = ring(1);
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
    assert!(format!("{:?}", v[0]).contains("x0^2"));
}

#[test]
fn shift_examples() {
    let a = x0_complex();
    assert_eq!(a.shift(0), a);
    assert_eq!(a.shift(1).shift(-1), a);
    let s = a.shift(1);
    assert_eq!(s.support(), Some((-1, 0)));
    assert_eq!(s.diff(-1).get(0, 0).unwrap(), &ring(1).var(0).neg());
}

#[test]
fn cone_examples() {
    let o = TwistedFreeComplex::single(ring(2), 0, vec![0]);
    let c = cone(&GradedMap::identity(&o)).unwrap();
    assert_eq!(ranks(&c), [(-1, 1), (0, 1)].into_iter().collect());
    assert!(c.diff(-1).get(0, 0).unwrap().constant_value().unwrap().is_one());
    let a = x0_complex();
    let z = GradedMap::zero(a.clone(), TwistedFreeComplex::zero(a.ring()), 0);
    assert_eq!(cone(&z).unwrap(), a.shift(1));
}

#[test]
fn tensor_examples() {
    let r = ring(1);
    let t = tensor_complexes(
        &TwistedFreeComplex::single(r, 0, vec![2]),
        &TwistedFreeComplex::single(r, 0, vec![-5]),
    )
    .unwrap();
    assert_eq!(t, TwistedFreeComplex::single(r, 0, vec![-3]));
    let k = build_koszul(1, q()).unwrap().complex;
    let kk = tensor_complexes(&k, &k).unwrap();
    assert!(kk.is_valid());
    // convolution of (1, 2, 1) with itself
    assert_eq!(ranks(&kk), [(-4, 1), (-3, 4), (-2, 6), (-1, 4), (0, 1)].into_iter().collect());
    // O[1] ⊗ K: the Leibniz sign (-1)^{|o|} = -1 negates d, which is K[1];
    // K ⊗ O[1] keeps d itself
    let o1 = TwistedFreeComplex::single(r, -1, vec![0]);
    let ok = tensor_complexes(&o1, &k).unwrap();
    assert_eq!(ok, k.shift(1));
    let ko = tensor_complexes(&k, &o1).unwrap();
    assert_eq!(ko.term_multiset(), k.shift(1).term_multiset());
    for (i, d) in ko.diffs() {
        assert_eq!(d, &k.diff(i + 1));
    }
}

#[test]
fn tensor_of_chain_maps_is_a_chain_map() {
    let mut g = RandomGen::new(31);
    let r = ring(1);
    for _ in 0..10 {
        let (a, b, c, d) = (g.complex(r).unwrap(), g.complex(r).unwrap(), g.complex(r).unwrap(), g.complex(r).unwrap());
        let f = g.chain_map(&a, &b).unwrap();
        let h = g.chain_map(&c, &d).unwrap();
        assert!(tensor_maps(&f, &h).unwrap().is_chain_map());
    }
}

#[test]
fn twist_support_examples() {
    let k = build_koszul(2, q()).unwrap();
    assert_eq!(k.complex.twist_support().into_iter().collect::<Vec<_>>(), vec![-3, -2, -1, 0]);
    let o = TwistedFreeComplex::single(ring(2), 5, vec![-1]);
    assert_eq!(o.twist_support().into_iter().collect::<Vec<_>>(), vec![-1]);
}

#[test]
fn dual_of_koszul_p1_has_the_same_terms() {
    let k = build_koszul(1, q()).unwrap().complex;
    let d = dualize_complex(&k, DualityDatum::delta(1, 2));
    assert!(d.is_valid());
    assert_eq!(d.term_multiset(), k.term_multiset());
}

#[test]
fn dualize_map_is_a_contravariant_functor() {
    let mut g = RandomGen::new(3);
    let r = ring(2);
    let l = DualityDatum::new(-1, 2);
    for _ in 0..15 {
        let a = g.complex(r).unwrap();
        let id = dualize_map(&GradedMap::identity(&a), l);
        assert_eq!(id, GradedMap::identity(&dualize_complex(&a, l)));
        let b = g.complex(r).unwrap();
        let c = g.complex(r).unwrap();
        let f = g.graded_map(&a, &b, 1).unwrap();
        let h = g.graded_map(&b, &c, 1).unwrap();
        let lhs = dualize_map(&h.compose(&f).unwrap(), l);
        // (-1)^{|f||h|} = -1 for two degree-1 maps
        let rhs = dualize_map(&f, l).compose(&dualize_map(&h, l)).unwrap().neg();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn double_dual_naturality_on_degree_zero_maps() {
    let mut g = RandomGen::new(12);
    let r = ring(1);
    for n in -3..=3 {
        let l = DualityDatum::new(1, n);
        let a = g.complex(r).unwrap();
        let b = g.complex(r).unwrap();
        let f = g.chain_map(&a, &b).unwrap();
        let lhs = dualize_map(&dualize_map(&f, l), l).compose(&canonical_id(&a, l)).unwrap();
        let rhs = canonical_id(&b, l).compose(&f).unwrap();
        assert_eq!(lhs, rhs, "n = {n}");
    }
}

#[test]
fn canonical_identity_on_koszul() {
    for r in 1..=4 {
        let k = build_koszul(r, q()).unwrap().complex;
        for n in [0, 1, r as i64 + 1] {
            let can = canonical_id(&k, DualityDatum::delta(r, n));
            assert!(can.is_chain_map(), "r = {r}, n = {n}");
            for (&i, c) in can.components() {
                let expected = if (i * (n + 1)).rem_euclid(2) == 0 { Sign::Plus } else { Sign::Minus };
                assert_eq!(c, &GradedMatrix::scalar_identity(k.ring(), c.src().to_vec(), expected.scalar(q())));
            }
        }
    }
}

#[test]
fn koszul_forms_are_symmetric() {
    let k1 = build_koszul(1, q()).unwrap();
    let mu = build_mu(&k1).unwrap();
    assert_eq!(mu.datum, delta(1, 2));
    assert_eq!(mu.epsilon, Sign::Plus);
    assert!(check_symmetric(&mu).unwrap());
    assert!(!check_symmetric(&mu.with_epsilon(Sign::Minus)).unwrap());
    let k2 = build_koszul(2, q()).unwrap();
    let phi = build_phi(&k2, -2).unwrap();
    assert_eq!(phi.epsilon, Sign::Plus);
    assert!(check_symmetric(&phi).unwrap());
    let zero = SymmetricFormData::zero(&k2.complex, delta(2, 3), Sign::Plus);
    assert!(check_symmetric(&zero).unwrap());
    assert!(check_symmetric(&zero.with_epsilon(Sign::Minus)).unwrap());
}

#[test]
fn bilinear_form_correspondence() {
    let r = ring(1);
    // multiplication O ⊗ O -> O is the unit form
    let unit = unit_form(r, 0);
    let beta = form_to_bilinear(&unit).unwrap();
    assert!(beta.is_chain_map());
    let back = bilinear_to_form(&beta, unit.complex(), unit.datum, unit.epsilon).unwrap();
    assert_eq!(back, unit);
    assert_eq!(back.pairing(0, 0, 0).unwrap(), r.one());
    let k = build_koszul(1, q()).unwrap();
    let mu = build_mu(&k).unwrap();
    let b = form_to_bilinear(&mu).unwrap();
    assert!(b.is_chain_map());
    assert_eq!(bilinear_to_form(&b, &k.complex, mu.datum, mu.epsilon).unwrap(), mu);
    let z = GradedMap::zero(b.source().clone(), b.target().clone(), 0);
    assert!(bilinear_to_form(&z, &k.complex, mu.datum, mu.epsilon).unwrap().form.is_zero());
}

#[test]
fn pairing_isomorphism() {
    let r = ring(1);
    let o = TwistedFreeComplex::single(r, 0, vec![0]);
    let l0 = DualityDatum::new(0, 0);
    let iso = pairing_iso(&o, &o, l0, l0).unwrap();
    assert_eq!(iso, GradedMap::identity(iso.source()));
    // M in degree 1, N in degree 0: the sign (-1)^{|x||g|} with |x| = 1, |g| = 0 is +1,
    // and with N in degree 1 as well it becomes -1
    let m = TwistedFreeComplex::single(r, 1, vec![0]);
    let iso = pairing_iso(&m, &o, l0, l0).unwrap();
    assert!(iso.components().values().all(|c| c.get(0, 0).unwrap().constant_value().unwrap().is_one()));
    let iso = pairing_iso(&m, &m, l0, l0).unwrap();
    let v = iso.components().values().next().unwrap().get(0, 0).unwrap().constant_value().unwrap();
    assert_eq!(v.as_unit_sign(), Some(-1));
    // chain isomorphism with inverse, natural in the first factor
    let mut g = RandomGen::new(50);
    for _ in 0..50 {
        let a = g.complex(r).unwrap();
        let a2 = g.complex(r).unwrap();
        let b = g.complex(r).unwrap();
        let (l1, l2) = (g.datum(), g.datum());
        let iso = pairing_iso(&a, &b, l1, l2).unwrap();
        assert!(iso.is_chain_map());
        let inv = pairing_iso_inverse(&iso).unwrap();
        assert_eq!(inv.compose(&iso).unwrap(), GradedMap::identity(iso.source()));
        let f = g.chain_map(&a, &a2).unwrap();
        let iso2 = pairing_iso(&a2, &b, l1, l2).unwrap();
        let idb = GradedMap::identity(&dualize_complex(&b, l2));
        let lhs = iso.compose(&tensor_maps(&dualize_map(&f, l1), &idb).unwrap()).unwrap();
        let f_id = tensor_maps(&f, &GradedMap::identity(&b)).unwrap();
        let rhs = dualize_map(&f_id, l1.compose(l2)).compose(&iso2).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn tensor_form_examples() {
    let r = ring(1);
    let k = build_koszul(1, q()).unwrap();
    let mu = build_mu(&k).unwrap();
    let u = unit_form(r, 0);
    let mu_u = tensor_form(&mu, &u).unwrap();
    assert_eq!(mu_u.form.components(), mu.form.components());
    assert_eq!(mu_u.datum, mu.datum);
    let u_mu = tensor_form(&u, &mu).unwrap();
    assert_eq!(u_mu, mu_u);
    let a = rank_one_form(r, 2, q().from_i64(-3)).unwrap();
    let b = rank_one_form(r, -1, q().from_i64(7)).unwrap();
    let ab = tensor_form(&a, &b).unwrap();
    assert_eq!(ab.complex(), &TwistedFreeComplex::single(r, 0, vec![1]));
    assert_eq!(ab.pairing(0, 0, 0).unwrap().constant_value().unwrap(), q().from_i64(-21));
}

#[test]
fn transmutation_and_square_twist() {
    let r = ring(2);
    let k = build_koszul(2, q()).unwrap();
    let skew = build_phi_skew(&k, -2).unwrap();
    assert_eq!(skew.epsilon, Sign::Minus);
    assert_eq!(transmute(&skew, 0).unwrap(), skew);
    let sym = transmute(&skew, -1).unwrap();
    assert_eq!(sym.epsilon, Sign::Plus);
    assert!(check_symmetric(&sym).unwrap());
    // the unit form on O[1] is skew
    let u1 = unit_form(r, 1);
    assert_eq!(u1.epsilon, Sign::Minus);
    assert!(check_symmetric(&u1).unwrap());
    let mu = build_mu(&build_koszul(1, q()).unwrap()).unwrap();
    assert_eq!(square_twist(&mu, DualityDatum::new(0, 0)).unwrap(), mu);
    let st = square_twist(&mu, DualityDatum::new(1, 0)).unwrap();
    assert_eq!(mu.datum, DualityDatum::new(-2, 2));
    assert_eq!(st.datum, DualityDatum::new(0, 2));
    assert!(check_symmetric(&st).unwrap());
    // odd twist data move by even amounts, keeping the parity of t
    let odd = rank_one_form(ring(1), 0, q().from_i64(1)).unwrap();
    let odd = square_twist(&odd, DualityDatum::new(0, 0)).unwrap();
    for i in -2..=2 {
        let moved = square_twist(&odd, DualityDatum::new(i, 0)).unwrap();
        assert_eq!(moved.datum.t, odd.datum.t + 2 * i);
        assert!(check_symmetric(&moved).unwrap());
    }
    // a shift by n multiplies the sign by (-1)^n
    let shifted = square_twist(&mu, DualityDatum::new(0, 1)).unwrap();
    assert_eq!(shifted.epsilon, mu.epsilon * Sign::Minus);
    assert!(check_symmetric(&shifted).unwrap());
}
