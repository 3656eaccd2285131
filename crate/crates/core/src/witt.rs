//! `ε`-symmetric bilinear forms over the base field: nondegeneracy,
//! Lagrangians and their split sequences, symplectic bases, diagonalization,
//! and the Witt index over prime fields.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar, Sign};
use crate::matrix::Mat;
use crate::modp;

/// Default dimension bound for [`witt_index_fp`].
pub const WITT_DIM_BOUND: usize = 12;

/// A Gram matrix `G` with `G^T = εG`; `B(u, v) = u^T G v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsForm {
    gram: Mat,
    epsilon: Sign,
}

impl EpsForm {
    pub fn new(gram: Mat, epsilon: Sign) -> Result<Self> {
        if gram.rows() != gram.cols() {
            return Err(Error::Shape("Gram matrix must be square".into()));
        }
        let field = gram.field();
        if gram.transpose() != gram.scale(&epsilon.scalar(field)) {
            return Err(Error::Shape("Gram matrix is not ε-symmetric".into()));
        }
        Ok(EpsForm { gram, epsilon })
    }

    /// The standard hyperbolic form of sign `ε` on `2k` coordinates:
    /// blocks `[[0, 1], [ε, 0]]`.
    pub fn hyperbolic(field: FieldSpec, k: usize, epsilon: Sign) -> Self {
        let mut g = Mat::zeros(field, 2 * k, 2 * k);
        for b in 0..k {
            g.set(2 * b, 2 * b + 1, field.one());
            g.set(2 * b + 1, 2 * b, epsilon.scalar(field));
        }
        EpsForm { gram: g, epsilon }
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.gram.field()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.dim() == 0 || !self.gram.det().is_zero()
    }

    /// `B(u, v)` for column vectors `u`, `v`.
    pub fn eval(&self, u: &Mat, v: &Mat) -> Scalar {
        u.transpose()
            .mul(&self.gram)
            .and_then(|x| x.mul(v))
            .expect("vector shapes")
            .get(0, 0)
            .clone()
    }

    /// `B^T G B`: the form restricted to the span of the columns of `b`.
    pub fn restrict(&self, b: &Mat) -> Mat {
        b.transpose()
            .mul(&self.gram)
            .and_then(|x| x.mul(b))
            .expect("basis shape")
    }

    /// Orthogonal sum.
    pub fn direct_sum(&self, other: &EpsForm) -> Result<EpsForm> {
        if self.epsilon != other.epsilon {
            return Err(Error::Shape("orthogonal sum of forms with different signs".into()));
        }
        Ok(EpsForm {
            gram: self.gram.block_diag(&other.gram),
            epsilon: self.epsilon,
        })
    }
}

/// The column span of a full-rank basis matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: Mat,
}

impl Subspace {
    pub fn new(basis: Mat) -> Result<Self> {
        if basis.rank() != basis.cols() {
            return Err(Error::Shape("subspace basis columns are dependent".into()));
        }
        Ok(Subspace { basis })
    }

    /// Span of the given standard basis vectors of a `dim`-dimensional space.
    pub fn coordinate(field: FieldSpec, dim: usize, coords: &[usize]) -> Result<Self> {
        let mut b = Mat::zeros(field, dim, coords.len());
        for (k, &c) in coords.iter().enumerate() {
            b.set(c, k, field.one());
        }
        Subspace::new(b)
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

/// True iff `W` is isotropic and half-dimensional.
pub fn is_lagrangian(f: &EpsForm, w: &Subspace) -> Result<bool> {
    if f.dim() % 2 == 1 {
        return Err(Error::WrongParity(alloc::format!(
            "a {}-dimensional space has no Lagrangian",
            f.dim()
        )));
    }
    if !f.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    if w.basis.rows() != f.dim() {
        return Err(Error::Shape("subspace lives in a different space".into()));
    }
    Ok(2 * w.dim() == f.dim() && f.restrict(&w.basis).is_zero())
}

fn column(m: &Mat, j: usize) -> Mat {
    m.select_cols(&[j])
}

fn axpy(x: &Mat, a: &Scalar, y: &Mat) -> Mat {
    x.add(&y.scale(a)).expect("same shape")
}

fn hcat(cols: &[Mat], field: FieldSpec, rows: usize) -> Mat {
    let mut out = Mat::zeros(field, rows, 0);
    for c in cols {
        out = out.hstack(c).expect("same height");
    }
    out
}

/// A basis in which a nondegenerate alternating form becomes block diagonal
/// with blocks `[[0, 1], [-1, 0]]`. Columns come in pairs `(v_k, w_k)`.
pub fn symplectic_basis(f: &EpsForm) -> Result<Mat> {
    if f.epsilon != Sign::Minus {
        return Err(Error::Unsupported("symplectic basis needs ε = -1".into()));
    }
    if !f.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let field = f.field();
    let n = f.dim();
    let mut rest: Vec<Mat> = (0..n).map(|j| column(&Mat::identity(field, n), j)).collect();
    let mut out = Vec::new();
    while let Some(v) = rest.pop() {
        if v.is_zero() {
            continue;
        }
        let Some(pos) = rest.iter().position(|u| !f.eval(&v, u).is_zero()) else {
            return Err(Error::Degenerate);
        };
        let u = rest.remove(pos);
        let c = f.eval(&v, &u).inv().expect("nonzero pairing");
        let w = u.scale(&c);
        rest = rest
            .into_iter()
            .map(|u| {
                let a = f.eval(&w, &u);
                let b = -f.eval(&v, &u);
                axpy(&axpy(&u, &a, &v), &b, &w)
            })
            .collect();
        out.push(v);
        out.push(w);
    }
    let b = hcat(&out, field, n);
    if f.restrict(&b) != *EpsForm::hyperbolic(field, n / 2, Sign::Minus).gram() || b.rank() != n {
        return Err(Error::Shape("symplectic basis failed re-verification".into()));
    }
    Ok(b)
}

/// A basis `B` with `B^T G B` diagonal, for symmetric `G` (degenerate allowed).
pub fn diagonalize(f: &EpsForm) -> Result<Mat> {
    if f.epsilon != Sign::Plus {
        return Err(Error::Unsupported("diagonalization needs ε = +1".into()));
    }
    let field = f.field();
    let n = f.dim();
    let mut rest: Vec<Mat> = (0..n).map(|j| column(&Mat::identity(field, n), j)).collect();
    let mut out = Vec::new();
    while !rest.is_empty() {
        let pick = match rest.iter().position(|u| !f.eval(u, u).is_zero()) {
            Some(i) => Some(rest.remove(i)),
            None => {
                // all remaining diagonal values vanish; e_i + e_j works when B(e_i, e_j) ≠ 0
                let mut found = None;
                'outer: for i in 0..rest.len() {
                    for j in i + 1..rest.len() {
                        if !f.eval(&rest[i], &rest[j]).is_zero() {
                            found = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                found.map(|(i, j)| rest[i].add(&rest[j]).expect("same shape"))
            }
        };
        let Some(v) = pick else {
            // the form vanishes on what is left
            out.append(&mut rest);
            break;
        };
        let q = f.eval(&v, &v).inv().expect("anisotropic pick");
        rest = rest
            .into_iter()
            .map(|u| {
                let c = -(&f.eval(&v, &u) * &q);
                axpy(&u, &c, &v)
            })
            .collect();
        // drop vectors that became dependent on the chosen ones
        let mut kept: Vec<Mat> = Vec::new();
        for u in rest {
            let mut cand = out.clone();
            cand.push(v.clone());
            cand.extend(kept.iter().cloned());
            cand.push(u.clone());
            if hcat(&cand, field, n).rank() == cand.len() {
                kept.push(u);
            }
        }
        rest = kept;
        out.push(v);
    }
    let b = hcat(&out, field, n);
    if b.rank() != n || off_diagonal_nnz(&f.restrict(&b)) != 0 {
        return Err(Error::Shape("diagonalizing basis failed re-verification".into()));
    }
    Ok(b)
}

/// Maps returned by [`split_sequence`]: `ι: W -> V`, `pr: V -> W`, and the
/// basis of an isotropic complement `U` dual to `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitData {
    pub iota: Mat,
    pub pr: Mat,
    pub complement: Mat,
}

/// Completes a Lagrangian `W` to a split sequence `W -> V -> W^*`.
///
/// Picks an isotropic complement `U` with `B(w_i, u_j) = δ_ij`, sets `pr` to
/// the `W`-coordinates in the basis `[W U]`, and verifies exactly that
/// `pr ι = id` and `ι pr + (G^T)^{-1} pr^T ι^T G^T = id`.
pub fn split_sequence(f: &EpsForm, w: &Subspace) -> Result<SplitData> {
    if !is_lagrangian(f, w)? {
        return Err(Error::NotLagrangian("subspace is not Lagrangian".into()));
    }
    let field = f.field();
    let n = f.dim();
    let k = w.dim();
    let wb = w.basis.clone();
    // a complement spanned by standard basis vectors
    let mut chosen: Vec<usize> = Vec::new();
    let mut cur = wb.clone();
    for j in 0..n {
        if chosen.len() == k {
            break;
        }
        let e = column(&Mat::identity(field, n), j);
        let cand = cur.hstack(&e).expect("same height");
        if cand.rank() == cand.cols() {
            cur = cand;
            chosen.push(j);
        }
    }
    let c = Mat::identity(field, n).select_cols(&chosen);
    let pairing = wb.transpose().mul(&f.gram)?.mul(&c)?;
    let u = c.mul(&pairing.inverse().ok_or(Error::Degenerate)?)?;
    // make the complement isotropic: u'_j = u_j - Σ_i (ε A_ij / 2) w_i
    let a = f.restrict(&u);
    let half = field.from_i64(2).inv().expect("2 is invertible");
    let coeff = a.scale(&(&f.epsilon.scalar(field) * &half));
    let u = u.sub(&wb.mul(&coeff)?)?;
    let full = wb.hstack(&u)?;
    let inv = full.inverse().ok_or(Error::Degenerate)?;
    let rows: Vec<usize> = (0..k).collect();
    let pr = inv.select_rows(&rows);
    let data = SplitData {
        iota: wb,
        pr,
        complement: u,
    };
    verify_split(f, &data)?;
    Ok(data)
}

/// Re-verifies the split identities of [`split_sequence`] exactly.
pub fn verify_split(f: &EpsForm, s: &SplitData) -> Result<()> {
    let field = f.field();
    let k = s.iota.cols();
    if s.pr.mul(&s.iota)? != Mat::identity(field, k) {
        return Err(Error::InvalidSplit("pr ∘ ι is not the identity".into()));
    }
    if !f.restrict(&s.iota).is_zero() {
        return Err(Error::InvalidSplit("image of ι is not isotropic".into()));
    }
    let gt = f.gram.transpose();
    let gt_inv = gt.inverse().ok_or(Error::Degenerate)?;
    let other = gt_inv
        .mul(&s.pr.transpose())?
        .mul(&s.iota.transpose())?
        .mul(&gt)?;
    let sum = s.iota.mul(&s.pr)?.add(&other)?;
    if sum != Mat::identity(field, f.dim()) {
        return Err(Error::InvalidSplit("the two idempotents do not sum to the identity".into()));
    }
    Ok(())
}

fn prime_of(f: &EpsForm) -> Result<u64> {
    match f.field() {
        FieldSpec::Prime(p) => Ok(p),
        FieldSpec::Rationals => Err(Error::Unsupported(
            "Witt index over the rationals is not computed".into(),
        )),
    }
}

/// Searches for a nonzero isotropic vector of a nondegenerate symmetric form
/// over `F_p`, returned in the coordinates of `f`.
fn isotropic_vector(f: &EpsForm, p: u64, rng: &mut ChaCha8Rng) -> Result<Option<Mat>> {
    let field = f.field();
    let n = f.dim();
    if n == 0 {
        return Ok(None);
    }
    if f.epsilon == Sign::Minus {
        return Ok(Some(column(&Mat::identity(field, n), 0)));
    }
    let b = diagonalize(f)?;
    let diag: Vec<u64> = (0..n)
        .map(|i| f.eval(&column(&b, i), &column(&b, i)).reduce_mod(p).expect("F_p entry"))
        .collect();
    let mk = |coords: &[u64]| {
        let mut v = Mat::zeros(field, n, 1);
        for (i, &c) in coords.iter().enumerate() {
            if c != 0 {
                v = axpy(&v, &field.from_u64(c), &column(&b, i));
            }
        }
        v
    };
    match n {
        1 => Ok(None),
        2 => {
            // a x^2 + c = 0 has a root iff -c/a is a square
            let (a, c) = (diag[0], diag[1]);
            let t = modp::mul_mod(modp::sub_mod(0, c, p), modp::inv_mod(a, p).expect("nonzero"), p);
            Ok(modp::sqrt_mod(t, p).map(|x| mk(&[x, 1])))
        }
        _ => {
            let (a, bb, c) = (diag[0], diag[1], diag[2]);
            let binv = modp::inv_mod(bb, p).expect("nonzero");
            for _ in 0..64 {
                let x = rng.next_u64() % p;
                let ax2 = modp::mul_mod(a, modp::mul_mod(x, x, p), p);
                let rhs = modp::mul_mod(modp::sub_mod(modp::sub_mod(0, c, p), ax2, p), binv, p);
                if let Some(y) = modp::sqrt_mod(rhs, p) {
                    return Ok(Some(mk(&[x, y, 1])));
                }
            }
            // deterministic fallback: enumerate (x, y, 1)
            if p.saturating_mul(p) <= 1 << 24 {
                for x in 0..p {
                    for y in 0..p {
                        let q = modp::add_mod(
                            modp::add_mod(
                                modp::mul_mod(a, modp::mul_mod(x, x, p), p),
                                modp::mul_mod(bb, modp::mul_mod(y, y, p), p),
                                p,
                            ),
                            c,
                            p,
                        );
                        if q == 0 {
                            return Ok(Some(mk(&[x, y, 1])));
                        }
                    }
                }
            }
            Err(Error::Unsupported("isotropic vector search exhausted".into()))
        }
    }
}

/// Result of splitting hyperbolic planes off a form: the number of planes and
/// the span of their isotropic first vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittDecomposition {
    pub index: usize,
    pub isotropic: Mat,
}

/// Splits off hyperbolic planes one at a time until the rest is anisotropic.
pub fn witt_decompose_fp(f: &EpsForm, seed: u64, bound: usize) -> Result<WittDecomposition> {
    let p = prime_of(f)?;
    if f.dim() > bound {
        return Err(Error::OutOfRange(alloc::format!(
            "dimension {} exceeds the bound {bound}",
            f.dim()
        )));
    }
    if !f.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let field = f.field();
    let n = f.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // current subspace, as columns in the ambient coordinates
    let mut cur = Mat::identity(field, n);
    let mut iso: Vec<Mat> = Vec::new();
    loop {
        let sub = EpsForm {
            gram: f.restrict(&cur),
            epsilon: f.epsilon,
        };
        let Some(vc) = isotropic_vector(&sub, p, &mut rng)? else {
            break;
        };
        let v = cur.mul(&vc)?;
        // partner w with B(v, w) = 1 and B(w, w) = 0
        let k = cur.cols();
        let Some(j) = (0..k).find(|&j| !f.eval(&v, &column(&cur, j)).is_zero()) else {
            return Err(Error::Degenerate);
        };
        let u = column(&cur, j);
        let mut w = u.scale(&f.eval(&v, &u).inv().expect("nonzero"));
        if f.epsilon == Sign::Plus {
            let half = field.from_i64(2).inv().expect("2 invertible");
            let c = -(&f.eval(&w, &w) * &half);
            w = axpy(&w, &c, &v);
        }
        // orthogonal complement of span(v, w) inside cur
        let eps = f.epsilon.scalar(field);
        let mut comp: Vec<Mat> = Vec::new();
        for j in 0..k {
            let u = column(&cur, j);
            // with B(v, w) = 1 and B(w, v) = ε, u' = u - ε B(w, u) v - B(v, u) w
            // satisfies B(v, u') = B(w, u') = 0
            let a = -(&f.eval(&w, &u) * &eps);
            let b = -(&f.eval(&v, &u));
            let up = axpy(&axpy(&u, &a, &v), &b, &w);
            let mut cand = comp.clone();
            cand.push(up.clone());
            if hcat(&cand, field, n).rank() == cand.len() {
                comp.push(up);
            }
        }
        comp.truncate(k - 2);
        iso.push(v);
        cur = hcat(&comp, field, n);
        if comp.is_empty() {
            break;
        }
    }
    Ok(WittDecomposition {
        index: iso.len(),
        isotropic: hcat(&iso, field, n),
    })
}

/// Witt index of a nondegenerate `ε`-symmetric form over `F_p`.
pub fn witt_index_fp(f: &EpsForm, seed: u64) -> Result<usize> {
    prime_of(f)?;
    if !f.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    if f.epsilon == Sign::Minus {
        return Ok(f.dim() / 2);
    }
    Ok(witt_decompose_fp(f, seed, WITT_DIM_BOUND)?.index)
}

/// A Lagrangian of a hyperbolic form over `F_p`, if the form is hyperbolic.
pub fn find_lagrangian_fp(f: &EpsForm, seed: u64) -> Result<Option<Subspace>> {
    let d = witt_decompose_fp(f, seed, WITT_DIM_BOUND)?;
    if 2 * d.index != f.dim() {
        return Ok(None);
    }
    Subspace::new(d.isotropic).map(Some)
}

/// Random invertible matrix over `F_p`.
pub fn random_invertible_fp(field: FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Mat {
    let p = field.characteristic();
    loop {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, field.from_u64(rng.next_u64() % p));
            }
        }
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// `diag(d_1, ..., d_n)`.
pub fn diagonal(field: FieldSpec, d: &[i64]) -> Mat {
    let mut m = Mat::zeros(field, d.len(), d.len());
    for (i, &v) in d.iter().enumerate() {
        m.set(i, i, field.from_i64(v));
    }
    m
}

/// Number of off-diagonal nonzero entries (0 for a diagonal matrix).
pub fn off_diagonal_nnz(m: &Mat) -> usize {
    let mut c = 0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j && !m.get(i, j).is_zero() {
                c += 1;
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn hyperbolic_plane_lagrangian_and_split() {
        let f = EpsForm::hyperbolic(fp(3), 1, Sign::Plus);
        let w = Subspace::coordinate(fp(3), 2, &[0]).unwrap();
        assert!(is_lagrangian(&f, &w).unwrap());
        split_sequence(&f, &w).unwrap();
        assert_eq!(witt_index_fp(&f, 1).unwrap(), 1);
    }

    #[test]
    fn sums_of_squares_over_small_fields() {
        let f3 = EpsForm::new(diagonal(fp(3), &[1, 1]), Sign::Plus).unwrap();
        assert_eq!(witt_index_fp(&f3, 0).unwrap(), 0);
        for j in 0..2 {
            let line = Subspace::coordinate(fp(3), 2, &[j]).unwrap();
            assert!(!is_lagrangian(&f3, &line).unwrap());
        }
        let f5 = EpsForm::new(diagonal(fp(5), &[1, 1]), Sign::Plus).unwrap();
        assert_eq!(witt_index_fp(&f5, 0).unwrap(), 1);
    }

    #[test]
    fn odd_dimension_has_no_lagrangian() {
        let f = EpsForm::new(diagonal(fp(7), &[1, 2, 3]), Sign::Plus).unwrap();
        let w = Subspace::coordinate(fp(7), 3, &[0]).unwrap();
        assert!(matches!(is_lagrangian(&f, &w), Err(Error::WrongParity(_))));
    }

    #[test]
    fn symplectic_rescaling_over_rationals() {
        let q = FieldSpec::Rationals;
        let f = EpsForm::new(Mat::from_i64_rows(q, &[vec![0, 2], vec![-2, 0]]).unwrap(), Sign::Minus)
            .unwrap();
        let b = symplectic_basis(&f).unwrap();
        assert_eq!(f.restrict(&b), EpsForm::hyperbolic(q, 1, Sign::Minus).gram().clone());
    }

    #[test]
    fn diagonalize_hyperbolic_and_degenerate() {
        let q = FieldSpec::Rationals;
        let f = EpsForm::new(Mat::from_i64_rows(q, &[vec![0, 1], vec![1, 0]]).unwrap(), Sign::Plus)
            .unwrap();
        let b = diagonalize(&f).unwrap();
        let d = f.restrict(&b);
        assert_eq!(off_diagonal_nnz(&d), 0);
        assert_eq!(d.rank(), 2);
        let g = EpsForm::new(diagonal(q, &[3, 0, 0]), Sign::Plus).unwrap();
        let d = g.restrict(&diagonalize(&g).unwrap());
        assert_eq!(off_diagonal_nnz(&d), 0);
        assert_eq!(d.rank(), 1);
        assert_eq!(d.rows(), 3);
    }

    #[test]
    fn rationals_are_unsupported_for_the_index() {
        let f = EpsForm::hyperbolic(FieldSpec::Rationals, 1, Sign::Plus);
        assert!(matches!(witt_index_fp(&f, 0), Err(Error::Unsupported(_))));
    }

}
