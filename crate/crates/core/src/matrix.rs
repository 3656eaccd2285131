//! Dense matrices over the base field and sparse degree-typed matrices of
//! homogeneous polynomials between sums of twists.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::{HomogPoly, PolyRing};

/// Dense row-major matrix over a [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Mat {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from integer rows.
    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Mat::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape("ragged matrix rows".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(v));
            }
        }
        Ok(m)
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self> {
        let mut m = Mat::zeros(field, rows.len(), cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape("ragged matrix rows".into()));
            }
            for (j, v) in row.into_iter().enumerate() {
                if v.field() != field {
                    return Err(Error::FieldMismatch);
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape("matrix sizes differ".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Mat { data, ..*self })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat {
            data: self.data.iter().map(|a| a * c).collect(),
            ..*self
        }
    }

    /// Columns `cols` as a new matrix.
    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                m.set(i, k, self.get(i, j).clone());
            }
        }
        m
    }

    /// Rows `rows` as a new matrix.
    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.field, rows.len(), self.cols);
        for (k, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                m.set(k, j, self.get(i, j).clone());
            }
        }
        m
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Result<Mat> {
        if self.rows != other.rows {
            return Err(Error::Shape("hstack row counts differ".into()));
        }
        let mut m = Mat::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut m = Mat::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(piv) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            if piv != row {
                for j in 0..a.cols {
                    a.data.swap(piv * a.cols + j, row * a.cols + j);
                }
            }
            let inv = a.get(row, col).inv().expect("nonzero pivot");
            for j in 0..a.cols {
                let v = a.get(row, j) * &inv;
                a.set(row, j, v);
            }
            for r in 0..a.rows {
                if r == row {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..a.cols {
                    let v = a.get(r, j) - &(&f * a.get(row, j));
                    a.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(self.field, n)).ok()?;
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(red.select_cols(&cols))
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut a = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return self.field.zero();
            };
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a.get(col, col).clone();
            det = &det * &p;
            let inv = p.inv().expect("nonzero pivot");
            for r in col + 1..n {
                let f = a.get(r, col) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a.get(r, j) - &(&f * a.get(col, j));
                    a.set(r, j, v);
                }
            }
        }
        det
    }

    /// Basis of the right kernel, as the columns of the returned matrix.
    pub fn nullspace(&self) -> Mat {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zeros(self.field, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, self.field.one());
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, -red.get(r, f));
            }
        }
        out
    }

    /// Solves `self * X = rhs`; `None` if inconsistent.
    pub fn solve(&self, rhs: &Mat) -> Option<Mat> {
        let aug = self.hstack(rhs).ok()?;
        let (red, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.field, self.cols, rhs.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, red.get(r, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// Row-major rendering of the entries as strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| format!("{}", self.get(i, j))).collect())
            .collect()
    }
}

/// Sparse matrix of homogeneous polynomials from `O(src_0) ⊕ ...` to
/// `O(tgt_0) ⊕ ...`. Rows index the target basis, columns the source basis.
///
/// Entry `(p, q)` must be homogeneous of degree `tgt[p] - src[q]`; a negative
/// difference forces the entry to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    ring: PolyRing,
    src: Vec<i64>,
    tgt: Vec<i64>,
    /// Per target row, nonzero entries sorted by column.
    rows: Vec<Vec<(usize, HomogPoly)>>,
}

impl GradedMatrix {
    pub fn zero(ring: PolyRing, src: Vec<i64>, tgt: Vec<i64>) -> Self {
        let rows = vec![Vec::new(); tgt.len()];
        GradedMatrix { ring, src, tgt, rows }
    }

    /// Identity on equal twist lists.
    pub fn identity(ring: PolyRing, twists: Vec<i64>) -> Self {
        GradedMatrix::scalar_identity(ring, twists, ring.field().one())
    }

    /// `c` times the identity.
    pub fn scalar_identity(ring: PolyRing, twists: Vec<i64>, c: Scalar) -> Self {
        let mut m = GradedMatrix::zero(ring, twists.clone(), twists);
        if !c.is_zero() {
            for i in 0..m.tgt.len() {
                m.rows[i].push((i, ring.constant(c.clone())));
            }
        }
        m
    }

    /// A constant matrix between sums of a single common twist pattern:
    /// entry `(p, q)` must be zero unless `tgt[p] == src[q]`.
    pub fn from_constant(ring: PolyRing, src: Vec<i64>, tgt: Vec<i64>, m: &Mat) -> Result<Self> {
        if m.rows() != tgt.len() || m.cols() != src.len() {
            return Err(Error::Shape("constant matrix does not fit the twists".into()));
        }
        let mut g = GradedMatrix::zero(ring, src, tgt);
        for p in 0..m.rows() {
            for q in 0..m.cols() {
                let v = m.get(p, q);
                if !v.is_zero() {
                    g.set(p, q, ring.constant(v.clone()))?;
                }
            }
        }
        Ok(g)
    }

    pub fn ring(&self) -> PolyRing {
        self.ring
    }

    pub fn src(&self) -> &[i64] {
        &self.src
    }

    pub fn tgt(&self) -> &[i64] {
        &self.tgt
    }

    pub fn nrows(&self) -> usize {
        self.tgt.len()
    }

    pub fn ncols(&self) -> usize {
        self.src.len()
    }

    /// Required degree of entry `(p, q)`, or `None` when it must vanish.
    pub fn entry_degree(&self, p: usize, q: usize) -> Option<u32> {
        let d = self.tgt[p] - self.src[q];
        (d >= 0).then_some(d as u32)
    }

    /// Sets entry `(p, q)`, checking its degree. Zero polynomials clear the entry.
    pub fn set(&mut self, p: usize, q: usize, v: HomogPoly) -> Result<()> {
        if p >= self.tgt.len() || q >= self.src.len() {
            return Err(Error::Shape(format!("entry ({p},{q}) outside matrix")));
        }
        if v.ring() != self.ring {
            return Err(Error::FieldMismatch);
        }
        let row = &mut self.rows[p];
        let pos = row.binary_search_by_key(&q, |e| e.0);
        if v.is_zero() {
            if let Ok(i) = pos {
                row.remove(i);
            }
            return Ok(());
        }
        let expected = self.tgt[p] - self.src[q];
        if v.degree() as i64 != expected {
            return Err(Error::DegreeMismatch {
                expected,
                found: v.degree() as i64,
            });
        }
        match pos {
            Ok(i) => row[i].1 = v,
            Err(i) => row.insert(i, (q, v)),
        }
        Ok(())
    }

    /// Adds `v` to entry `(p, q)`.
    pub fn add_to(&mut self, p: usize, q: usize, v: &HomogPoly) -> Result<()> {
        if v.is_zero() {
            return Ok(());
        }
        let sum = match self.get(p, q) {
            Some(old) => old.add(v)?,
            None => v.clone(),
        };
        self.set(p, q, sum)
    }

    pub fn get(&self, p: usize, q: usize) -> Option<&HomogPoly> {
        let row = &self.rows[p];
        row.binary_search_by_key(&q, |e| e.0).ok().map(|i| &row[i].1)
    }

    /// Entry `(p, q)` with zeros materialized at the correct degree.
    /// Entries forced to vanish by a negative twist difference return `None`.
    pub fn entry(&self, p: usize, q: usize) -> Option<HomogPoly> {
        match self.get(p, q) {
            Some(v) => Some(v.clone()),
            None => self.entry_degree(p, q).map(|d| self.ring.zero(d)),
        }
    }

    pub fn row_entries(&self, p: usize) -> &[(usize, HomogPoly)] {
        &self.rows[p]
    }

    /// All nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &HomogPoly)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(p, row)| row.iter().map(move |(q, v)| (p, *q, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// Entries whose degree disagrees with the twist difference.
    pub fn typing_violations(&self) -> Vec<(usize, usize)> {
        self.entries()
            .filter(|(p, q, v)| v.degree() as i64 != self.tgt[*p] - self.src[*q])
            .map(|(p, q, _)| (p, q))
            .collect()
    }

    /// `self ∘ other`, where `other` maps into the source of `self`.
    pub fn compose(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.src != other.tgt {
            return Err(Error::Shape(format!(
                "composition: source twists {:?} differ from target twists {:?}",
                self.src, other.tgt
            )));
        }
        if self.ring != other.ring {
            return Err(Error::FieldMismatch);
        }
        let mut out = GradedMatrix::zero(self.ring, other.src.clone(), self.tgt.clone());
        for (p, row) in self.rows.iter().enumerate() {
            let mut acc: alloc::collections::BTreeMap<usize, HomogPoly> = Default::default();
            for (k, a) in row {
                for (q, b) in &other.rows[*k] {
                    let prod = a.mul(b)?;
                    match acc.get_mut(q) {
                        Some(s) => s.add_assign_unchecked(&prod),
                        None => {
                            acc.insert(*q, prod);
                        }
                    }
                }
            }
            out.rows[p] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        Ok(out)
    }

    pub fn add(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(Error::Shape("sum of matrices with different twists".into()));
        }
        let mut out = self.clone();
        for (p, q, v) in other.entries() {
            out.add_to(p, q, v)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedMatrix {
        self.scale(&-self.ring.field().one())
    }

    pub fn scale(&self, c: &Scalar) -> GradedMatrix {
        if c.is_zero() {
            return GradedMatrix::zero(self.ring, self.src.clone(), self.tgt.clone());
        }
        GradedMatrix {
            ring: self.ring,
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|(q, v)| (*q, v.scale(c))).collect())
                .collect(),
        }
    }

    /// Multiplies by `(-1)^e`.
    pub fn signed(&self, e: i64) -> GradedMatrix {
        if e.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Transpose as a map between duals twisted by `t`: a summand `O(a)`
    /// becomes `O(t - a)`, so entry degrees are preserved.
    pub fn transpose_dual(&self, t: i64) -> GradedMatrix {
        let src: Vec<i64> = self.tgt.iter().map(|a| t - a).collect();
        let tgt: Vec<i64> = self.src.iter().map(|a| t - a).collect();
        let mut rows: Vec<Vec<(usize, HomogPoly)>> = vec![Vec::new(); tgt.len()];
        for (p, q, v) in self.entries() {
            rows[q].push((p, v.clone()));
        }
        // rows were filled in increasing p, so they are already sorted
        GradedMatrix {
            ring: self.ring,
            src,
            tgt,
            rows,
        }
    }

    /// Replaces the twist labels without touching entries; the twist
    /// differences must be unchanged entrywise.
    pub fn retwist(&self, src: Vec<i64>, tgt: Vec<i64>) -> Result<GradedMatrix> {
        if src.len() != self.src.len() || tgt.len() != self.tgt.len() {
            return Err(Error::Shape("retwist changes the shape".into()));
        }
        let m = GradedMatrix {
            ring: self.ring,
            src,
            tgt,
            rows: self.rows.clone(),
        };
        if let Some(&(p, q)) = m.typing_violations().first() {
            return Err(Error::DegreeMismatch {
                expected: m.tgt[p] - m.src[q],
                found: m.get(p, q).map_or(0, |v| v.degree() as i64),
            });
        }
        Ok(m)
    }

    /// Assembles a block matrix. `blocks[i][j]` maps source block `j` to
    /// target block `i`; `None` is a zero block.
    pub fn block(
        ring: PolyRing,
        src_blocks: &[Vec<i64>],
        tgt_blocks: &[Vec<i64>],
        blocks: &[Vec<Option<&GradedMatrix>>],
    ) -> Result<GradedMatrix> {
        let src: Vec<i64> = src_blocks.concat();
        let tgt: Vec<i64> = tgt_blocks.concat();
        let mut out = GradedMatrix::zero(ring, src, tgt);
        let mut row_off = 0;
        for (i, tb) in tgt_blocks.iter().enumerate() {
            let mut col_off = 0;
            for (j, sb) in src_blocks.iter().enumerate() {
                if let Some(b) = blocks[i][j] {
                    if b.tgt != *tb || b.src != *sb {
                        return Err(Error::Shape(format!("block ({i},{j}) has the wrong twists")));
                    }
                    for (p, q, v) in b.entries() {
                        out.rows[row_off + p].push((col_off + q, v.clone()));
                    }
                }
                col_off += sb.len();
            }
            row_off += tb.len();
        }
        for row in &mut out.rows {
            row.sort_by_key(|e| e.0);
        }
        Ok(out)
    }

    /// Constant part, for matrices whose entries all have degree 0.
    pub fn to_constant(&self) -> Result<Mat> {
        let field = self.ring.field();
        let mut m = Mat::zeros(field, self.nrows(), self.ncols());
        for (p, q, v) in self.entries() {
            let c = v.constant_value().ok_or(Error::DegreeMismatch {
                expected: 0,
                found: v.degree() as i64,
            })?;
            m.set(p, q, c);
        }
        Ok(m)
    }

    /// Exact evaluation at a point.
    pub fn eval(&self, point: &[Scalar]) -> Result<Mat> {
        let mut m = Mat::zeros(self.ring.field(), self.nrows(), self.ncols());
        for (p, q, v) in self.entries() {
            m.set(p, q, v.eval(point)?);
        }
        Ok(m)
    }

    /// Evaluation modulo `p` at a point given by residues. `None` when a
    /// coefficient has a denominator divisible by `p`.
    pub fn eval_mod(&self, p: u64, point: &[u64]) -> Option<Vec<Vec<(usize, u64)>>> {
        use crate::modp::{add_mod, mul_mod, pow_mod};
        let mut out = Vec::with_capacity(self.nrows());
        for row in &self.rows {
            let mut r = Vec::with_capacity(row.len());
            for (q, v) in row {
                let mut acc = 0;
                for (mono, c) in v.terms() {
                    let mut t = c.reduce_mod(p)?;
                    for (x, &e) in point.iter().zip(&mono.0) {
                        if e > 0 {
                            t = mul_mod(t, pow_mod(*x, e as u64, p), p);
                        }
                    }
                    acc = add_mod(acc, t, p);
                }
                if acc != 0 {
                    r.push((*q, acc));
                }
            }
            out.push(r);
        }
        Some(out)
    }

    /// Largest entry degree (0 for the zero matrix).
    pub fn max_degree(&self) -> u32 {
        self.entries().map(|(_, _, v)| v.degree()).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn dense_inverse_and_nullspace() {
        let m = Mat::from_i64_rows(q(), &[vec![2, 1], vec![1, 1]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Mat::identity(q(), 2));
        assert_eq!(m.det(), q().from_i64(1));
        let s = Mat::from_i64_rows(q(), &[vec![1, 2, 3], vec![2, 4, 6]]).unwrap();
        let ns = s.nullspace();
        assert_eq!(ns.cols(), 2);
        assert!(s.mul(&ns).unwrap().is_zero());
        assert!(s.select_cols(&[0, 1]).inverse().is_none());
    }

    #[test]
    fn graded_entries_are_degree_checked() {
        let ring = PolyRing::new(2, q());
        let mut m = GradedMatrix::zero(ring, vec![-1], vec![0]);
        assert!(m.set(0, 0, ring.var(0)).is_ok());
        assert!(matches!(
            m.set(0, 0, ring.one()),
            Err(Error::DegreeMismatch { .. })
        ));
        let mut n = GradedMatrix::zero(ring, vec![0], vec![-1]);
        assert!(n.set(0, 0, ring.var(0)).is_err());
        assert_eq!(n.entry(0, 0), None);
    }

    #[test]
    fn compose_and_transpose_dual() {
        let ring = PolyRing::new(2, q());
        let mut a = GradedMatrix::zero(ring, vec![-1], vec![0, 0]);
        a.set(0, 0, ring.var(0)).unwrap();
        a.set(1, 0, ring.var(1)).unwrap();
        let mut b = GradedMatrix::zero(ring, vec![0, 0], vec![1]);
        b.set(0, 0, ring.var(1)).unwrap();
        b.set(0, 1, ring.var(0).neg()).unwrap();
        assert!(b.compose(&a).unwrap().is_zero());
        let at = a.transpose_dual(0);
        assert_eq!(at.src(), &[0, 0]);
        assert_eq!(at.tgt(), &[1]);
        assert!(at.typing_violations().is_empty());
        assert_eq!(at.transpose_dual(0), a);
    }
}
