//! Koszul complexes, the wedge forms, the half-Koszul pairs and the Witt
//! toolkit over finite fields.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hermkos_core::complex::cone;
use hermkos_core::duality::check_symmetric;
use hermkos_core::koszul::{
    binomial, build_even_pair, build_koszul, build_mu, build_odd_pair, build_phi, build_phi_skew, check_ell,
    middle_split_injected, middle_split_trivial, odd_pair_parts, subsets, wedge_gram_nu, wedge_multiply,
};
use hermkos_core::witt::{
    diagonal, diagonalize, find_lagrangian_fp, is_lagrangian, off_diagonal_nnz, split_sequence, symplectic_basis,
    verify_split, witt_index_fp, EpsForm, Subspace,
};
use hermkos_core::{Error, FieldSpec, Mat, Scalar, Sign};

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn unit(v: &Scalar) -> i8 {
    v.as_unit_sign().expect("a unit sign")
}

#[test]
fn koszul_shapes() {
    for r in 1..=6 {
        let k = build_koszul(r, q()).unwrap();
        assert!(k.complex.validate().is_empty(), "r = {r}");
        for i in 0..=r + 1 {
            let deg = -(i as i64);
            assert_eq!(k.complex.rank(deg), binomial(r + 1, i));
            assert!(k.complex.term(deg).iter().all(|&t| t == deg));
        }
    }
    let k1 = build_koszul(1, q()).unwrap();
    let ring = k1.ring();
    // d(e_01) = x0 e_1 - x1 e_0 and d(e_i) = x_i
    let d = k1.complex.diff(-2);
    let (i0, i1) = (k1.index_of(&[0]).unwrap(), k1.index_of(&[1]).unwrap());
    assert_eq!(d.get(i1, 0).unwrap(), &ring.var(0));
    assert_eq!(d.get(i0, 0).unwrap(), &ring.var(1).neg());
    assert_eq!(k1.complex.diff(-1).get(0, i0).unwrap(), &ring.var(0));
    assert_eq!(k1.complex.diff(-1).get(0, i1).unwrap(), &ring.var(1));
    // d^2 on e_012 expands to zero
    let k2 = build_koszul(2, q()).unwrap();
    assert!(k2.complex.diff(-2).compose(&k2.complex.diff(-3)).unwrap().is_zero());
}

#[test]
fn wedge_multiplication_signs() {
    assert_eq!(wedge_multiply(&[0], &[1]), Some((Sign::Plus, vec![0, 1])));
    assert_eq!(wedge_multiply(&[1], &[0]), Some((Sign::Minus, vec![0, 1])));
    assert_eq!(wedge_multiply(&[0, 2], &[1, 3]), Some((Sign::Minus, vec![0, 1, 2, 3])));
    assert_eq!(wedge_multiply(&[0, 2], &[2]), None);
}

#[test]
fn wedge_pairing_examples() {
    let k1 = build_koszul(1, q()).unwrap();
    let mu = build_mu(&k1).unwrap();
    let (i0, i1) = (k1.index_of(&[0]).unwrap(), k1.index_of(&[1]).unwrap());
    assert_eq!(unit(&mu.pairing(-1, i0, i1).unwrap().constant_value().unwrap()), 1);
    assert_eq!(unit(&mu.pairing(-1, i1, i0).unwrap().constant_value().unwrap()), -1);
    assert!(mu.pairing(-1, i0, i0).is_none());
    // r = 2: the block pairing Λ^1 with Λ^2 matches I with its complement
    let k2 = build_koszul(2, q()).unwrap();
    let mu2 = build_mu(&k2).unwrap();
    for (x, i) in k2.basis(-1).iter().enumerate() {
        for (y, j) in k2.basis(-2).iter().enumerate() {
            let v = mu2.pairing(-1, x, y);
            match wedge_multiply(i, j) {
                Some((s, _)) => assert_eq!(unit(&v.unwrap().constant_value().unwrap()) as i64, s.as_i64()),
                None => assert!(v.is_none()),
            }
        }
    }
    // nothing pairs outside total degree -r-1
    let phi = build_phi_skew(&k2, -1).unwrap();
    assert_eq!(phi.datum.n, k2.r as i64 + 2);
    for (&p, c) in phi.form.components() {
        // the component at p lands in the dual of the term in degree -p-(r+2)
        assert_eq!(c.nrows(), phi.complex().rank(-p - phi.datum.n));
    }
}

#[test]
fn truncated_pairing_on_p1() {
    // M = K_{≤-1}: pairs K_{-2} with K_{-1} by d(x) ∧ y
    let k = build_koszul(1, q()).unwrap();
    let skew = build_phi_skew(&k, -1).unwrap();
    let ring = k.ring();
    let (i0, i1) = (k.index_of(&[0]).unwrap(), k.index_of(&[1]).unwrap());
    // d(e_01) ∧ e_0 = x0 e_1 ∧ e_0 = -x0 e_01; d(e_01) ∧ e_1 = -x1 e_0 ∧ e_1 = -x1 e_01
    assert_eq!(skew.pairing(-2, 0, i0).unwrap(), ring.var(0).neg());
    assert_eq!(skew.pairing(-2, 0, i1).unwrap(), ring.var(1).neg());
    assert!(check_ell(1, 0).is_err());
    assert!(check_ell(1, -3).is_err());
    assert!(matches!(build_phi(&k, -3), Err(Error::OutOfRange(_))));
}

#[test]
fn even_pair_r2_terms() {
    let k = build_koszul(2, q()).unwrap();
    let pair = build_even_pair(&k).unwrap();
    let h = &pair.h;
    let mut twists: Vec<i64> = h.terms().values().flat_map(|m| m.twists.clone()).collect();
    twists.sort();
    assert_eq!(twists, vec![-3, -2, -2, -2]);
    let mut dual: Vec<i64> = pair.psi.form.target().terms().values().flat_map(|m| m.twists.clone()).collect();
    dual.sort();
    assert_eq!(dual, vec![-1, -1, -1, 0]);
    assert_eq!(pair.cone().unwrap().term_multiset(), k.complex.term_multiset());
    assert!(check_symmetric(&pair.psi).unwrap());
}

#[test]
fn even_pair_r4_junction_is_nondegenerate_after_d() {
    let k = build_koszul(4, q()).unwrap();
    let pair = build_even_pair(&k).unwrap();
    let c = pair.cone().unwrap();
    assert_eq!(c.term_multiset(), k.complex.term_multiset());
    // the cone differential between the two halves has full rank at a random point
    let s = 2i64;
    let pt: Vec<Scalar> = [3, -7, 11, 5, 2].iter().map(|&v| q().from_i64(v)).collect();
    let junction = c.diff(-s - 1).eval(&pt).unwrap();
    let target_rank = c.rank(-s);
    let source_rank = c.rank(-s - 1);
    let next = c.diff(-s).eval(&pt).unwrap();
    let prev = c.diff(-s - 2).eval(&pt).unwrap();
    // exactness at the junction: rank(d_{-s-1}) + rank(d_{-s-2}) = dim C_{-s-1}
    assert_eq!(junction.rank() + prev.rank(), source_rank);
    assert_eq!(junction.rank() + next.rank(), target_rank);
}

#[test]
fn wedge_form_examples() {
    let nu = wedge_gram_nu(1, q()).unwrap();
    assert_eq!(nu.epsilon(), Sign::Minus);
    assert_eq!(nu.gram(), &Mat::from_i64_rows(q(), &[vec![0, 1], vec![-1, 0]]).unwrap());
    let nu3 = wedge_gram_nu(3, q()).unwrap();
    assert_eq!(nu3.dim(), 6);
    assert_eq!(nu3.epsilon(), Sign::Plus);
    for s in 1..=4usize {
        let nu = wedge_gram_nu(2 * s - 1, q()).unwrap();
        let eps = nu.epsilon().scalar(q());
        assert_eq!(nu.gram().transpose(), nu.gram().scale(&eps));
        assert!(nu.is_nondegenerate());
        // a signed permutation pairing I with its complement
        let basis = subsets(2 * s, s);
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                let disjoint = basis[a].iter().all(|i| !basis[b].contains(i));
                assert_eq!(!nu.gram().get(a, b).is_zero(), disjoint);
            }
        }
    }
    assert!(matches!(wedge_gram_nu(2, q()), Err(Error::WrongParity(_))));
}

#[test]
fn trivial_splits_are_lagrangian() {
    for (r, rank) in [(1, 1), (3, 3), (5, 10)] {
        let split = middle_split_trivial(r, q()).unwrap();
        assert_eq!(split.p_rank(), rank);
        assert_eq!(split.n_rank(), 0);
        let g = split.nu.gram();
        let basis = subsets(r + 1, split.s);
        let idx: Vec<usize> = (0..basis.len()).filter(|&a| basis[a].contains(&0)).collect();
        assert_eq!(idx.len(), rank);
        for &a in &idx {
            for &b in &idx {
                assert!(g.get(a, b).is_zero());
            }
        }
    }
    for s in 1..=5 {
        assert_eq!(binomial(2 * s - 1, s - 1), binomial(2 * s, s) / 2);
    }
    assert!(middle_split_trivial(2, q()).is_err());
}

#[test]
fn odd_pairs_satisfy_their_identities() {
    for r in [1usize, 3, 5] {
        let k = build_koszul(r, q()).unwrap();
        let split = middle_split_trivial(r, q()).unwrap();
        let parts = odd_pair_parts(&k, &split).unwrap();
        assert!(parts.path_sum.is_zero(), "r = {r}");
        assert!(parts.d_nu_d.is_zero(), "r = {r}");
        assert!(parts.h.is_valid());
        let s = split.s as i64;
        assert_eq!(parts.h.support(), Some((-(r as i64), -s + 1)));
        let pair = build_odd_pair(&k, &split).unwrap();
        assert!(check_symmetric(&pair.psi).unwrap());
        assert_eq!(pair.cone().unwrap().term_multiset(), k.complex.term_multiset());
    }
    // r = 1: H = O(-2) -> O(-1)
    let k = build_koszul(1, q()).unwrap();
    let pair = build_odd_pair(&k, &middle_split_trivial(1, q()).unwrap()).unwrap();
    assert_eq!(pair.h.twist_support().into_iter().collect::<Vec<_>>(), vec![-2, -1]);
    assert_eq!(pair.h.total_rank(), 2);
    let d = pair.h.diff(-1);
    assert_eq!(d.nnz(), 1);
    assert_eq!(d.get(0, 0).unwrap().degree(), 1);
}

#[test]
fn injected_splits() {
    let sigma = Mat::from_i64_rows(q(), &[vec![0, 1], vec![-1, 0]]).unwrap();
    let alpha = Mat::from_i64_rows(q(), &[vec![1], vec![0]]).unwrap();
    let split = middle_split_injected(1, q(), sigma.clone(), alpha, None).unwrap();
    assert_eq!((split.n_rank(), split.s_rank, split.p_rank()), (2, 1, 2));
    let k = build_koszul(1, q()).unwrap();
    let parts = odd_pair_parts(&k, &split).unwrap();
    assert!(parts.path_sum.is_zero());
    let pair = build_odd_pair(&k, &split).unwrap();
    assert!(check_symmetric(&pair.psi).unwrap());
    assert!(cone(&pair.psi.form).unwrap().is_valid());
    // a non-isotropic image of α is rejected
    let bad_alpha = Mat::from_i64_rows(q(), &[vec![1, 0], vec![0, 1]]).unwrap();
    assert!(matches!(
        middle_split_injected(1, q(), sigma.clone(), bad_alpha, None),
        Err(Error::InvalidSplit(_))
    ));
    // σ must carry the sign of ν
    let sym = Mat::from_i64_rows(q(), &[vec![0, 1], vec![1, 0]]).unwrap();
    let a = Mat::from_i64_rows(q(), &[vec![1], vec![0]]).unwrap();
    assert!(middle_split_injected(1, q(), sym, a, None).is_err());
}

#[test]
fn lagrangian_examples() {
    let h = EpsForm::hyperbolic(q(), 1, Sign::Plus);
    assert!(is_lagrangian(&h, &Subspace::coordinate(q(), 2, &[0]).unwrap()).unwrap());
    let f3 = fp(3);
    let d = EpsForm::new(diagonal(f3, &[1, 1]), Sign::Plus).unwrap();
    let mut lines = 0;
    for (a, b) in [(1, 0), (0, 1), (1, 1), (1, 2)] {
        let w = Subspace::new(Mat::from_i64_rows(f3, &[vec![a], vec![b]]).unwrap()).unwrap();
        assert!(!is_lagrangian(&d, &w).unwrap());
        lines += 1;
    }
    assert_eq!(lines, 4);
    let split = middle_split_trivial(3, q()).unwrap();
    let w = Subspace::new(split.iota.clone()).unwrap();
    assert!(is_lagrangian(&split.nu, &w).unwrap());
    let sd = split_sequence(&split.nu, &w).unwrap();
    verify_split(&split.nu, &sd).unwrap();
    assert_eq!(sd.pr.mul(&sd.iota).unwrap(), Mat::identity(q(), 3));
}

fn random_skew(rng: &mut ChaCha8Rng, f: FieldSpec, n: usize) -> Mat {
    let p = f.characteristic();
    let mut m = Mat::zeros(f, n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = (rng.next_u64() % p) as i64;
            m.set(i, j, f.from_i64(v));
            m.set(j, i, f.from_i64(-v));
        }
    }
    m
}

#[test]
fn symplectic_bases() {
    let b = symplectic_basis(&EpsForm::new(Mat::from_i64_rows(q(), &[vec![0, 1], vec![-1, 0]]).unwrap(), Sign::Minus).unwrap()).unwrap();
    let std = EpsForm::hyperbolic(q(), 1, Sign::Minus);
    assert_eq!(b.transpose().mul(std.gram()).unwrap().mul(&b).unwrap(), *std.gram());
    let two = EpsForm::new(Mat::from_i64_rows(q(), &[vec![0, 2], vec![-2, 0]]).unwrap(), Sign::Minus).unwrap();
    let b = symplectic_basis(&two).unwrap();
    assert_eq!(two.restrict(&b), *std.gram());
    let f7 = fp(7);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut done = 0;
    while done < 20 {
        let g = random_skew(&mut rng, f7, 4);
        let form = EpsForm::new(g, Sign::Minus).unwrap();
        if !form.is_nondegenerate() {
            assert!(matches!(symplectic_basis(&form), Err(Error::Degenerate)));
            continue;
        }
        let b = symplectic_basis(&form).unwrap();
        assert_eq!(b.transpose().mul(form.gram()).unwrap().mul(&b).unwrap(), *EpsForm::hyperbolic(f7, 2, Sign::Minus).gram());
        done += 1;
    }
}

#[test]
fn diagonalization() {
    let h = EpsForm::hyperbolic(q(), 1, Sign::Plus);
    let b = diagonalize(&h).unwrap();
    let d = h.restrict(&b);
    assert_eq!(off_diagonal_nnz(&d), 0);
    // det(B^T G B) = det(G) det(B)^2, so the diagonal entries multiply to -det(B)^2
    let det = d.get(0, 0) * d.get(1, 1);
    let db = b.det();
    assert_eq!(det, &h.gram().det() * &(&db * &db));
    assert_eq!(det, -(&db * &db));
    let diag = diagonal(q(), &[2, -3, 5]);
    let e = EpsForm::new(diag.clone(), Sign::Plus).unwrap();
    assert_eq!(e.restrict(&diagonalize(&e).unwrap()), diag);
    let deg = EpsForm::new(Mat::from_i64_rows(q(), &[vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 0]]).unwrap(), Sign::Plus).unwrap();
    let dd = deg.restrict(&diagonalize(&deg).unwrap());
    assert_eq!(off_diagonal_nnz(&dd), 0);
    assert_eq!((0..3).filter(|&i| dd.get(i, i).is_zero()).count(), 2);
}

#[test]
fn witt_index_examples() {
    assert_eq!(witt_index_fp(&EpsForm::hyperbolic(fp(3), 1, Sign::Plus), 0).unwrap(), 1);
    assert_eq!(witt_index_fp(&EpsForm::new(diagonal(fp(3), &[1, 1]), Sign::Plus).unwrap(), 0).unwrap(), 0);
    assert_eq!(witt_index_fp(&EpsForm::new(diagonal(fp(5), &[1, 1]), Sign::Plus).unwrap(), 0).unwrap(), 1);
    assert!(matches!(witt_index_fp(&EpsForm::new(diagonal(fp(5), &[1, 0]), Sign::Plus).unwrap(), 0), Err(Error::Degenerate)));
}

#[test]
fn split_found_lagrangians_over_f7() {
    let f7 = fp(7);
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let mut found = 0;
    for trial in 0..60 {
        let mut g = Mat::zeros(f7, 4, 4);
        for i in 0..4 {
            for j in i..4 {
                let v = f7.from_i64((rng.next_u64() % 7) as i64);
                g.set(i, j, v.clone());
                g.set(j, i, v);
            }
        }
        let form = EpsForm::new(g, Sign::Plus).unwrap();
        if !form.is_nondegenerate() {
            continue;
        }
        if let Some(w) = find_lagrangian_fp(&form, trial).unwrap() {
            assert!(is_lagrangian(&form, &w).unwrap());
            let sd = split_sequence(&form, &w).unwrap();
            verify_split(&form, &sd).unwrap();
            found += 1;
        }
    }
    assert!(found > 5, "{found}");
}
