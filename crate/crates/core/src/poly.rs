//! Homogeneous polynomials in `x0..xr` with exact coefficients.
//!
//! Text format: a sum of terms `c*x0^e0*...*xr^er`, leading term first in
//! graded lexicographic order, coefficients as integers or `num/den`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Coordinate ring of `P^r`: the number of variables and the coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    nvars: usize,
    field: FieldSpec,
}

impl PolyRing {
    pub fn new(nvars: usize, field: FieldSpec) -> Self {
        PolyRing { nvars, field }
    }

    /// The ring `k[x0..xr]` of `P^r`.
    pub fn projective(r: usize, field: FieldSpec) -> Self {
        PolyRing::new(r + 1, field)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Projective dimension `r = nvars - 1`.
    pub fn r(&self) -> usize {
        self.nvars.saturating_sub(1)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn zero(&self, degree: u32) -> HomogPoly {
        HomogPoly::zero(*self, degree)
    }

    pub fn constant(&self, c: Scalar) -> HomogPoly {
        HomogPoly::monomial(*self, Monomial::one(self.nvars), c)
    }

    pub fn one(&self) -> HomogPoly {
        self.constant(self.field.one())
    }

    pub fn from_i64(&self, c: i64) -> HomogPoly {
        self.constant(self.field.from_i64(c))
    }

    /// The coordinate `x_i`.
    pub fn var(&self, i: usize) -> HomogPoly {
        let mut e = vec![0u16; self.nvars];
        e[i] = 1;
        HomogPoly::monomial(*self, Monomial(e), self.field.one())
    }
}

/// Exponent vector. Ordered graded-lexicographically with `x0 > x1 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All monomials of total degree `d` in `nvars` variables, ascending.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u16; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left as u16;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[i] = e as u16;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(0, d, &mut cur, &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A homogeneous polynomial with a declared degree. The zero polynomial keeps
/// its declared degree so that typed matrix entries stay typed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    ring: PolyRing,
    degree: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl HomogPoly {
    pub fn zero(ring: PolyRing, degree: u32) -> Self {
        HomogPoly {
            ring,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(ring: PolyRing, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.0.len(), ring.nvars, "monomial arity");
        let degree = m.degree();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        HomogPoly { ring, degree, terms }
    }

    /// Builds a polynomial from terms, all of which must have total degree `degree`.
    pub fn from_terms(
        ring: PolyRing,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self> {
        let mut p = HomogPoly::zero(ring, degree);
        for (m, c) in terms {
            if m.0.len() != ring.nvars {
                return Err(Error::VariableCountMismatch {
                    expected: ring.nvars,
                    found: m.0.len(),
                });
            }
            if m.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree as i64,
                    found: m.degree() as i64,
                });
            }
            if c.field() != ring.field {
                return Err(Error::FieldMismatch);
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn ring(&self) -> PolyRing {
        self.ring
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    /// The coefficient when the polynomial is a constant (degree 0).
    pub fn constant_value(&self) -> Option<Scalar> {
        if self.degree != 0 {
            return None;
        }
        Some(
            self.terms
                .values()
                .next()
                .cloned()
                .unwrap_or_else(|| self.ring.field.zero()),
        )
    }

    fn check_ring(&self, other: &HomogPoly) -> Result<()> {
        if self.ring.nvars != other.ring.nvars {
            return Err(Error::VariableCountMismatch {
                expected: self.ring.nvars,
                found: other.ring.nvars,
            });
        }
        if self.ring.field != other.ring.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.check_ring(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree as i64,
                found: other.degree as i64,
            });
        }
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn sub(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.add(&other.neg())
    }

    /// In-place addition for callers that already know the degrees agree.
    pub(crate) fn add_assign_unchecked(&mut self, other: &HomogPoly) {
        debug_assert_eq!(self.degree, other.degree);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> HomogPoly {
        HomogPoly {
            ring: self.ring,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> HomogPoly {
        if c.is_zero() {
            return HomogPoly::zero(self.ring, self.degree);
        }
        HomogPoly {
            ring: self.ring,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.check_ring(other)?;
        let mut out = HomogPoly::zero(self.ring, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Exact evaluation at a point with `nvars` coordinates.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.ring.nvars {
            return Err(Error::LengthMismatch {
                expected: self.ring.nvars,
                found: point.len(),
            });
        }
        if point.iter().any(|c| c.field() != self.ring.field) {
            return Err(Error::FieldMismatch);
        }
        let mut acc = self.ring.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(e as u32);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Reduction of the coefficients into `F_p`, as `(exponents, residue)` pairs.
    pub fn reduce_mod(&self, p: u64) -> Option<Vec<(Vec<u16>, u64)>> {
        self.terms
            .iter()
            .map(|(m, c)| c.reduce_mod(p).map(|v| (m.0.clone(), v)))
            .collect()
    }

    /// Parses the text format. `degree` is required for the zero polynomial
    /// and checked against the terms otherwise.
    pub fn parse(s: &str, ring: PolyRing, degree: Option<u32>) -> Result<HomogPoly> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut pieces: Vec<(bool, &str)> = Vec::new();
        let bytes = compact.as_bytes();
        let mut negative = false;
        let first = usize::from(bytes[0] == b'+' || bytes[0] == b'-');
        if first == 1 {
            negative = bytes[0] == b'-';
        }
        let mut start = first;
        for i in first..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && i > start {
                pieces.push((negative, &compact[start..i]));
                negative = bytes[i] == b'-';
                start = i + 1;
            }
        }
        pieces.push((negative, &compact[start..]));

        let field = ring.field;
        let mut terms = Vec::new();
        for (neg, body) in pieces {
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{s}`")));
            }
            let mut coeff = field.one();
            let mut exps = vec![0u16; ring.nvars];
            for factor in body.split('*') {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, e) = match var.split_once('^') {
                        Some((i, e)) => (i, e),
                        None => (var, "1"),
                    };
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable `{factor}`")))?;
                    let e: u16 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent `{factor}`")))?;
                    if idx >= ring.nvars {
                        return Err(Error::VariableCountMismatch {
                            expected: ring.nvars,
                            found: idx + 1,
                        });
                    }
                    exps[idx] += e;
                } else {
                    coeff = &coeff * &field.parse_element(factor)?;
                }
            }
            if neg {
                coeff = -coeff;
            }
            terms.push((Monomial(exps), coeff));
        }
        let inferred = terms
            .iter()
            .find(|(_, c)| !c.is_zero())
            .map(|(m, _)| m.degree());
        let degree = match (degree, inferred) {
            (Some(d), _) => d,
            (None, Some(d)) => d,
            (None, None) => 0,
        };
        // a literal zero term carries no degree information
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero());
        HomogPoly::from_terms(ring, degree, terms)
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let mut body = String::new();
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{i}")
                    } else {
                        format!("x{i}^{e}")
                    }
                })
                .collect();
            let cs = format!("{c}");
            let (negative, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, cs.as_str()),
            };
            if mono.is_empty() {
                body.push_str(mag);
            } else {
                if mag != "1" {
                    body.push_str(mag);
                    body.push('*');
                }
                body.push_str(&mono.join("*"));
            }
            match (k, negative) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn q2() -> PolyRing {
        PolyRing::new(2, FieldSpec::Rationals)
    }

    #[test]
    fn add_and_mul_of_coordinates() {
        let r = q2();
        let s = r.var(0).add(&r.var(1)).unwrap();
        assert_eq!(s.to_string(), "x0 + x1");
        let m = r.var(0).mul(&r.var(1)).unwrap();
        assert_eq!(m.degree(), 2);
        assert_eq!(m.to_string(), "x0*x1");
    }

    #[test]
    fn scaling_by_zero_keeps_degree() {
        let r = q2();
        let s = r.var(0).add(&r.var(1)).unwrap();
        let z = s.scale(&FieldSpec::Rationals.zero());
        assert!(z.is_zero());
        assert_eq!(z.degree(), 1);
    }

    #[test]
    fn add_rejects_degree_and_arity_mismatch() {
        let r = q2();
        assert!(matches!(
            r.var(0).add(&r.one()),
            Err(Error::DegreeMismatch { .. })
        ));
        let r3 = PolyRing::new(3, FieldSpec::Rationals);
        assert!(matches!(
            r.var(0).mul(&r3.var(0)),
            Err(Error::VariableCountMismatch { .. })
        ));
    }

    #[test]
    fn evaluation_examples() {
        let r = q2();
        let f = FieldSpec::Rationals;
        let xy = r.var(0).mul(&r.var(1)).unwrap();
        assert_eq!(xy.eval(&[f.from_i64(2), f.from_i64(3)]).unwrap(), f.from_i64(6));
        assert!(r.zero(3).eval(&[f.from_i64(5), f.from_i64(7)]).unwrap().is_zero());
        assert!(xy.eval(&[f.one()]).is_err());

        let f5 = FieldSpec::prime(5).unwrap();
        let r5 = PolyRing::new(2, f5);
        let sq = r5
            .var(0)
            .mul(&r5.var(0))
            .unwrap()
            .add(&r5.var(1).mul(&r5.var(1)).unwrap())
            .unwrap();
        // 1 + 4 = 5 = 0 in F_5
        assert!(sq.eval(&[f5.from_i64(1), f5.from_i64(2)]).unwrap().is_zero());
    }

    #[test]
    fn text_format_round_trips() {
        let r = PolyRing::new(3, FieldSpec::Rationals);
        for s in ["x0^2 - 3/2*x1*x2 + x2^2", "-x1", "7", "0", "x0*x1^3*x2"] {
            let p = HomogPoly::parse(s, r, None).unwrap();
            assert_eq!(p.to_string(), s);
        }
        let z = HomogPoly::parse("0", r, Some(4)).unwrap();
        assert_eq!(z.degree(), 4);
        assert!(HomogPoly::parse("x0 + x1^2", r, None).is_err());
        assert!(HomogPoly::parse("x3", r, None).is_err());
    }

    #[test]
    fn monomials_of_degree_are_counted_by_binomials() {
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(5, 4).len(), 70);
        assert_eq!(Monomial::all_of_degree(2, 0).len(), 1);
    }
}
