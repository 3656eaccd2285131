//! The Koszul complex of `P^r`, its wedge self-duality, naive truncations and
//! the symmetric half-Koszul pairs `(H, ψ)` for both parities of `r`.
//!
//! `K_{-i}` has basis `e_I` for the `i`-subsets `I ⊆ {0..r}` in lexicographic
//! order, every summand twisted by `O(-i)`, and
//! `d(e_I) = Σ_k (-1)^k x_{i_k} e_{I \ i_k}` (0-based position `k`).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{cone, GradedMap, TwistedFreeComplex, TwistedFreeModule};
use crate::duality::{
    check_symmetric, form_from_pairing, transmute, DualityDatum, SymmetricFormData,
};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Sign};
use crate::matrix::{GradedMatrix, Mat};
use crate::poly::{HomogPoly, PolyRing};
use crate::witt::{split_sequence, verify_split, EpsForm, SplitData, Subspace};

/// A sorted subset of `{0..r}`, indexing a basis vector of the exterior algebra.
pub type ExtIndex = Vec<usize>;

/// All `k`-subsets of `{0..n-1}` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<ExtIndex> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Binomial coefficient.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `e_I ∧ e_J`: zero when the subsets meet, otherwise the sign of the merge
/// permutation together with `I ∪ J`.
pub fn wedge_multiply(i: &[usize], j: &[usize]) -> Option<(Sign, ExtIndex)> {
    let mut inversions = 0usize;
    for &a in i {
        for &b in j {
            if a == b {
                return None;
            }
            if a > b {
                inversions += 1;
            }
        }
    }
    let mut merged: ExtIndex = i.iter().chain(j).copied().collect();
    merged.sort_unstable();
    Some((Sign::from_parity(inversions as i64), merged))
}

/// `{0..r} \ I`.
pub fn complement(i: &[usize], r: usize) -> ExtIndex {
    (0..=r).filter(|k| !i.contains(k)).collect()
}

/// Text label of a basis vector, e.g. `e{0,2}`.
pub fn ext_label(i: &[usize]) -> String {
    let parts: Vec<String> = i.iter().map(|k| format!("{k}")).collect();
    format!("e{{{}}}", parts.join(","))
}

/// The Koszul complex with its exterior bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulData {
    pub r: usize,
    pub complex: TwistedFreeComplex,
    /// Basis of `K_{-i}` for `i = 0..=r+1`.
    pub bases: Vec<Vec<ExtIndex>>,
}

impl KoszulData {
    pub fn ring(&self) -> PolyRing {
        self.complex.ring()
    }

    pub fn field(&self) -> FieldSpec {
        self.ring().field()
    }

    /// Basis of the term in cohomological degree `deg`.
    pub fn basis(&self, deg: i64) -> &[ExtIndex] {
        if deg > 0 || deg < -(self.r as i64) - 1 {
            return &[];
        }
        &self.bases[(-deg) as usize]
    }

    /// Position of `e_I` inside `K_{-|I|}`.
    pub fn index_of(&self, i: &[usize]) -> Option<usize> {
        self.bases
            .get(i.len())?
            .binary_search_by(|x| x.as_slice().cmp(i))
            .ok()
    }

    /// Coefficient of `x_{i_k}` pattern: `d(e_I)` as `(sign, variable, I \ i_k)`.
    pub fn contraction(i: &[usize]) -> Vec<(Sign, usize, ExtIndex)> {
        (0..i.len())
            .map(|k| {
                let mut rest = i.to_vec();
                let v = rest.remove(k);
                (Sign::from_parity(k as i64), v, rest)
            })
            .collect()
    }

    /// Top coefficient of `e_I ∧ e_J` as a scalar sign, if nonzero.
    pub fn top_pairing(&self, i: &[usize], j: &[usize]) -> Option<Sign> {
        if i.len() + j.len() != self.r + 1 {
            return None;
        }
        wedge_multiply(i, j).map(|(s, _)| s)
    }
}

/// `K` for `P^r` over `field`.
pub fn build_koszul(r: usize, field: FieldSpec) -> Result<KoszulData> {
    if r < 1 {
        return Err(Error::OutOfRange("the Koszul complex needs r ≥ 1".into()));
    }
    let ring = PolyRing::projective(r, field);
    let bases: Vec<Vec<ExtIndex>> = (0..=r + 1).map(|i| subsets(r + 1, i)).collect();
    let mut terms = BTreeMap::new();
    for (i, b) in bases.iter().enumerate() {
        let deg = -(i as i64);
        terms.insert(
            deg,
            TwistedFreeModule::labelled(vec![deg; b.len()], b.iter().map(|x| ext_label(x)).collect()),
        );
    }
    let mut diffs = BTreeMap::new();
    for i in 1..=r + 1 {
        let deg = -(i as i64);
        let mut d = GradedMatrix::zero(ring, vec![deg; bases[i].len()], vec![deg + 1; bases[i - 1].len()]);
        for (col, set) in bases[i].iter().enumerate() {
            for (sign, v, rest) in KoszulData::contraction(set) {
                let row = bases[i - 1]
                    .binary_search(&rest)
                    .expect("face of a subset");
                let x = ring.var(v);
                d.set(row, col, if sign == Sign::Plus { x } else { x.neg() })?;
            }
        }
        diffs.insert(deg, d);
    }
    let complex = TwistedFreeComplex::new(ring, terms, diffs)?;
    Ok(KoszulData { r, complex, bases })
}

/// `Δ[k]` for the Koszul complex of `P^r`.
pub fn delta(r: usize, k: i64) -> DualityDatum {
    DualityDatum::delta(r, k)
}

/// The wedge pairing `μ̃: K -> [K, Δ[r+1]]`, `μ(e_I ⊗ e_J)` = top coefficient
/// of `e_I ∧ e_J`, with the declared sign `epsilon` (not checked).
pub fn build_mu_with_epsilon(k: &KoszulData, epsilon: Sign) -> Result<SymmetricFormData> {
    let ring = k.ring();
    let field = ring.field();
    let l = delta(k.r, k.r as i64 + 1);
    form_from_pairing(&k.complex, l, epsilon, |p, x, y| {
        let q = -p - l.n;
        let (i, j) = (&k.basis(p)[x], &k.basis(q)[y]);
        Ok(k.top_pairing(i, j).map(|s| ring.constant(s.scalar(field))))
    })
}

/// Returns the sign for which a form is symmetric, trying `+1` first.
pub fn calibrate_epsilon(phi: &SymmetricFormData) -> Result<Option<Sign>> {
    for eps in [Sign::Plus, Sign::Minus] {
        if check_symmetric(&phi.with_epsilon(eps))? {
            return Ok(Some(eps));
        }
    }
    Ok(None)
}

/// `μ̃` with its sign calibrated by the symmetry checker.
pub fn build_mu(k: &KoszulData) -> Result<SymmetricFormData> {
    let mu = build_mu_with_epsilon(k, Sign::Plus)?;
    match calibrate_epsilon(&mu)? {
        Some(eps) => Ok(mu.with_epsilon(eps)),
        None => Err(Error::NotAChainMap("μ̃ is neither symmetric nor skew".into())),
    }
}

/// `μ` as an explicit chain map `K ⊗ K -> Δ[r+1]` (quadratic in the rank of
/// `K`; intended for small `r`).
pub fn build_mu_bilinear(k: &KoszulData) -> Result<GradedMap> {
    let ring = k.ring();
    let field = ring.field();
    let kk = crate::complex::tensor_complexes(&k.complex, &k.complex)?;
    let l = delta(k.r, k.r as i64 + 1);
    let top = -l.n;
    let mut row = GradedMatrix::zero(ring, kk.term(top).to_vec(), vec![l.t]);
    for blk in crate::complex::tensor_layout(&k.complex, &k.complex, top) {
        let q = top - blk.p;
        for (x, i) in k.basis(blk.p).iter().enumerate() {
            for (y, j) in k.basis(q).iter().enumerate() {
                if let Some(s) = k.top_pairing(i, j) {
                    row.set(0, blk.offset + x * blk.rank_b + y, ring.constant(s.scalar(field)))?;
                }
            }
        }
    }
    GradedMap::new(kk, l.unit_complex(ring), 0, [(top, row)].into_iter().collect())
}

/// Whether `−r−1 ≤ ℓ ≤ −1`.
pub fn check_ell(r: usize, ell: i64) -> Result<()> {
    if ell < -(r as i64) - 1 || ell > -1 {
        return Err(Error::OutOfRange(format!(
            "truncation level {ell} outside [{}, -1] for r = {r}",
            -(r as i64) - 1
        )));
    }
    Ok(())
}

/// The naive truncation `M = K_{≤ℓ}`.
pub fn truncation(k: &KoszulData, ell: i64) -> Result<TwistedFreeComplex> {
    check_ell(k.r, ell)?;
    Ok(k.complex.truncate_le(ell))
}

/// The skew form on `M = K_{≤ℓ}` over `Δ[r+2]`:
/// `β(x ⊗ y)` = top coefficient of `d(x) ∧ y`, declared with `ε = -1`.
pub fn build_phi_skew(k: &KoszulData, ell: i64) -> Result<SymmetricFormData> {
    let m = truncation(k, ell)?;
    let ring = k.ring();
    let field = ring.field();
    let l = delta(k.r, k.r as i64 + 2);
    form_from_pairing(&m, l, Sign::Minus, |p, x, y| {
        let q = -p - l.n;
        let (i, j) = (&k.basis(p)[x], &k.basis(q)[y]);
        Ok(d_wedge_top(k, ring, field, i, j))
    })
}

/// Top coefficient of `d(e_I) ∧ e_J`, a linear form.
fn d_wedge_top(
    k: &KoszulData,
    ring: PolyRing,
    field: FieldSpec,
    i: &[usize],
    j: &[usize],
) -> Option<HomogPoly> {
    let mut acc: Option<HomogPoly> = None;
    for (sign, v, rest) in KoszulData::contraction(i) {
        if let Some(s) = k.top_pairing(&rest, j) {
            let term = ring.var(v).scale(&(sign * s).scalar(field));
            acc = Some(match acc {
                Some(a) => a.add(&term).expect("same degree"),
                None => term,
            });
        }
    }
    acc.filter(|a| !a.is_zero())
}

/// The symmetric form on `M[-1]` over `Δ[r]`: the skew form transmuted by `i = -1`.
pub fn build_phi(k: &KoszulData, ell: i64) -> Result<SymmetricFormData> {
    transmute(&build_phi_skew(k, ell)?, -1)
}

/// Basis pairs `(p, x, y)` at which `β(e_x ⊗ e_y) ≠ ε (-1)^{|x||y|} β(e_y ⊗ e_x)`.
pub fn bilinear_symmetry_failures(phi: &SymmetricFormData) -> Vec<(i64, usize, usize)> {
    let a = phi.complex();
    let n = phi.datum.n;
    let field = phi.ring().field();
    let mut out = Vec::new();
    for (&p, m) in a.terms() {
        let q = -p - n;
        let sign = (phi.epsilon * Sign::from_parity(p * q)).scalar(field);
        for x in 0..m.rank() {
            for y in 0..a.rank(q) {
                let lhs = phi.pairing(p, x, y);
                let rhs = phi.pairing(q, y, x).map(|v| v.scale(&sign));
                let same = match (&lhs, &rhs) {
                    (None, None) => true,
                    (Some(a), Some(b)) => a == b,
                    _ => false,
                };
                if !same {
                    out.push((p, x, y));
                }
            }
        }
    }
    out
}

/// A half-Koszul complex with its symmetric form over `Δ[r]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfKoszulPair {
    pub h: TwistedFreeComplex,
    pub psi: SymmetricFormData,
}

impl HalfKoszulPair {
    pub fn cone(&self) -> Result<TwistedFreeComplex> {
        cone(&self.psi.form)
    }
}

/// `s` with `r = 2s` (even) or `r = 2s - 1` (odd).
pub fn half_index(r: usize) -> usize {
    r.div_ceil(2)
}

/// Truncation level used for even `r`: `ℓ = -s-1`.
pub fn even_ell(r: usize) -> i64 {
    -(half_index(r) as i64) - 1
}

/// The level `ℓ = -s-2`, one below [`even_ell`]. The resulting cone misses
/// two Koszul terms, so it serves as the negative control.
pub fn short_even_ell(r: usize) -> i64 {
    -(half_index(r) as i64) - 2
}

/// The even-`r` pair at an explicit truncation level.
pub fn build_even_pair_at(k: &KoszulData, ell: i64) -> Result<HalfKoszulPair> {
    if k.r % 2 == 1 {
        return Err(Error::WrongParity(format!("r = {} is odd", k.r)));
    }
    let psi = build_phi(k, ell)?;
    Ok(HalfKoszulPair {
        h: psi.complex().clone(),
        psi,
    })
}

/// `(H, ψ)` for even `r`: `H = K_{≤-s-1}[-1]`, `ψ` the transmuted form.
pub fn build_even_pair(k: &KoszulData) -> Result<HalfKoszulPair> {
    build_even_pair_at(k, even_ell(k.r))
}

/// Gram matrix of the wedge pairing on `Λ^s k^{2s}`: `G_IJ = sign(e_I ∧ e_J)`
/// when `J` is the complement of `I`; `ε = (-1)^s`.
pub fn wedge_gram_nu(r: usize, field: FieldSpec) -> Result<EpsForm> {
    if r.is_multiple_of(2) {
        return Err(Error::WrongParity(format!("r = {r} is even")));
    }
    let s = half_index(r);
    let basis = subsets(r + 1, s);
    let mut g = Mat::zeros(field, basis.len(), basis.len());
    for (a, i) in basis.iter().enumerate() {
        let c = complement(i, r);
        let b = basis.binary_search(&c).expect("complement is an s-subset");
        let (sign, _) = wedge_multiply(i, &c).expect("disjoint");
        g.set(a, b, sign.scalar(field));
    }
    EpsForm::new(g, Sign::from_parity(s as i64))
}

/// The data of a split Lagrangian `𝒫 ⊂ K_{-s} ⊕ 𝒩` for odd `r = 2s - 1`.
///
/// `V = K_{-s} ⊕ 𝒩` carries `ν ⊕ σ`; `α: 𝒮 -> 𝒩` has isotropic image;
/// `ι: 𝒫 -> V` and `pr: V -> 𝒫` satisfy the split identities. All of `𝒫`,
/// `𝒩` and `𝒮` are twisted by `O(-s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiddleSplit {
    pub r: usize,
    pub s: usize,
    pub nu: EpsForm,
    pub sigma: EpsForm,
    pub s_rank: usize,
    pub alpha: Mat,
    pub iota: Mat,
    pub pr: Mat,
}

impl MiddleSplit {
    /// `ν ⊕ σ` on `V`.
    pub fn total_form(&self) -> EpsForm {
        self.nu.direct_sum(&self.sigma).expect("signs agree")
    }

    pub fn p_rank(&self) -> usize {
        self.iota.cols()
    }

    pub fn n_rank(&self) -> usize {
        self.sigma.dim()
    }

    /// Re-verifies every defining identity exactly.
    pub fn validate(&self) -> Result<()> {
        if self.sigma.epsilon() != self.nu.epsilon() {
            return Err(Error::InvalidSplit("σ must have the sign of ν".into()));
        }
        if self.alpha.rows() != self.n_rank() || self.alpha.cols() != self.s_rank {
            return Err(Error::InvalidSplit("α has the wrong shape".into()));
        }
        if !self.sigma.restrict(&self.alpha).is_zero() {
            return Err(Error::InvalidSplit("image of α is not isotropic".into()));
        }
        let total = self.total_form();
        if !total.is_nondegenerate() {
            return Err(Error::InvalidSplit("ν ⊕ σ is degenerate".into()));
        }
        let w = Subspace::new(self.iota.clone())?;
        if !crate::witt::is_lagrangian(&total, &w)? {
            return Err(Error::InvalidSplit("𝒫 is not Lagrangian".into()));
        }
        verify_split(
            &total,
            &SplitData {
                iota: self.iota.clone(),
                pr: self.pr.clone(),
                complement: Mat::zeros(self.nu.field(), total.dim(), 0),
            },
        )
    }
}

/// The split with `𝒩 = 𝒮 = 0` and `𝒫 = span{e_I : 0 ∈ I, |I| = s}`.
pub fn middle_split_trivial(r: usize, field: FieldSpec) -> Result<MiddleSplit> {
    let nu = wedge_gram_nu(r, field)?;
    let s = half_index(r);
    let basis = subsets(r + 1, s);
    let coords: Vec<usize> = (0..basis.len()).filter(|&a| basis[a].contains(&0)).collect();
    let w = Subspace::coordinate(field, basis.len(), &coords)?;
    let split = split_sequence(&nu, &w)?;
    let sigma = EpsForm::new(Mat::zeros(field, 0, 0), nu.epsilon())?;
    let out = MiddleSplit {
        r,
        s,
        nu,
        sigma,
        s_rank: 0,
        alpha: Mat::zeros(field, 0, 0),
        iota: split.iota,
        pr: split.pr,
    };
    out.validate()?;
    Ok(out)
}

/// A split with a nontrivial `(𝒩, σ)` and `α: 𝒮 -> 𝒩`. Without an explicit
/// Lagrangian (columns in `K_{-s} ⊕ 𝒩` coordinates) the default
/// `span{e_I : 0 ∈ I} ⊕ im α` is used.
pub fn middle_split_injected(
    r: usize,
    field: FieldSpec,
    sigma_gram: Mat,
    alpha: Mat,
    lagrangian: Option<Mat>,
) -> Result<MiddleSplit> {
    let nu = wedge_gram_nu(r, field)?;
    let s = half_index(r);
    let sigma = EpsForm::new(sigma_gram, nu.epsilon())
        .map_err(|_| Error::InvalidSplit("σ must be (-1)^s-symmetric".into()))?;
    if alpha.rows() != sigma.dim() {
        return Err(Error::InvalidSplit("α must map into 𝒩".into()));
    }
    let total = nu.direct_sum(&sigma)?;
    let kdim = nu.dim();
    let iota = match lagrangian {
        Some(l) => l,
        None => {
            let basis = subsets(r + 1, s);
            let coords: Vec<usize> = (0..kdim).filter(|&a| basis[a].contains(&0)).collect();
            let mut cols = Subspace::coordinate(field, total.dim(), &coords)?.basis().clone();
            let mut lifted = Mat::zeros(field, total.dim(), alpha.cols());
            for i in 0..alpha.rows() {
                for j in 0..alpha.cols() {
                    lifted.set(kdim + i, j, alpha.get(i, j).clone());
                }
            }
            cols = cols.hstack(&lifted)?;
            // keep an independent set of columns
            let (_, pivots) = cols.rref();
            cols.select_cols(&pivots)
        }
    };
    let w = Subspace::new(iota).map_err(|e| Error::InvalidSplit(format!("{e}")))?;
    let split = split_sequence(&total, &w).map_err(|e| Error::InvalidSplit(format!("{e}")))?;
    let out = MiddleSplit {
        r,
        s,
        nu,
        sigma,
        s_rank: alpha.cols(),
        alpha,
        iota: split.iota,
        pr: split.pr,
    };
    out.validate()?;
    Ok(out)
}

/// Intermediate data of the odd-`r` construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddPairParts {
    pub h: TwistedFreeComplex,
    pub psi_map: GradedMap,
    /// Sum of the two path composites around the central square.
    pub path_sum: GradedMatrix,
    /// `d^T G_ν^T d` on `K_{-s-1}`.
    pub d_nu_d: GradedMatrix,
}

/// Builds `H = (K_{-r-1} -> ... -> K_{-s-1} ⊕ 𝒮 -> 𝒫)` in degrees
/// `[-r, -s+1]` and the components of `ψ`.
pub fn odd_pair_parts(k: &KoszulData, split: &MiddleSplit) -> Result<OddPairParts> {
    let r = k.r;
    if r.is_multiple_of(2) {
        return Err(Error::WrongParity(format!("r = {r} is even")));
    }
    if split.r != r {
        return Err(Error::InvalidSplit("split built for a different r".into()));
    }
    let ring = k.ring();
    let s = split.s as i64;
    let ri = r as i64;
    let kc = &k.complex;
    let t = -2 * s; // twist of Δ[r]
    let tw_s = |n: usize| vec![-s; n];

    let k_mid = kc.term(-s).to_vec();
    let k_low = kc.term(-s - 1).to_vec();
    let v_tw = [k_mid.clone(), tw_s(split.n_rank())].concat();
    let p_tw = tw_s(split.p_rank());
    let s_tw = tw_s(split.s_rank);
    let hs_tw = [k_low.clone(), s_tw.clone()].concat();

    // H
    let mut terms = BTreeMap::new();
    for j in -ri..=-s - 1 {
        terms.insert(j, kc.module(j - 1).cloned().unwrap_or_default());
    }
    let mut hs_labels: Vec<String> = k.basis(-s - 1).iter().map(|x| ext_label(x)).collect();
    hs_labels.extend((0..split.s_rank).map(|a| format!("S{a}")));
    terms.insert(-s, TwistedFreeModule::labelled(hs_tw.clone(), hs_labels));
    terms.insert(
        -s + 1,
        TwistedFreeModule::labelled(p_tw.clone(), (0..split.p_rank()).map(|a| format!("P{a}")).collect()),
    );

    let alpha_g = GradedMatrix::from_constant(ring, s_tw.clone(), tw_s(split.n_rank()), &split.alpha)?;
    let d_low = kc.diff(-s - 1);
    let dd = GradedMatrix::block(
        ring,
        &[k_low.clone(), s_tw.clone()],
        &[k_mid.clone(), tw_s(split.n_rank())],
        &[vec![Some(&d_low), None], vec![None, Some(&alpha_g)]],
    )?;
    let iota_g = GradedMatrix::from_constant(ring, p_tw.clone(), v_tw.clone(), &split.iota)?;
    let pr_g = GradedMatrix::from_constant(ring, v_tw.clone(), p_tw.clone(), &split.pr)?;
    let total = split.total_form();
    // ν ⊕ σ as a map V -> V^∨ has matrix G^T
    let v_dual: Vec<i64> = v_tw.iter().map(|a| t - a).collect();
    let g_map = GradedMatrix::from_constant(ring, v_tw.clone(), v_dual, &total.gram().transpose())?;

    let mut diffs = BTreeMap::new();
    for j in -ri..=-s - 2 {
        diffs.insert(j, kc.diff(j - 1));
    }
    if -s > -ri {
        let d2 = kc.diff(-s - 2);
        let z = GradedMatrix::zero(ring, kc.term(-s - 2).to_vec(), s_tw.clone());
        diffs.insert(
            -s - 1,
            GradedMatrix::block(
                ring,
                &[kc.term(-s - 2).to_vec()],
                &[k_low.clone(), s_tw.clone()],
                &[vec![Some(&d2)], vec![Some(&z)]],
            )?,
        );
    }
    diffs.insert(-s, pr_g.compose(&dd)?);
    let h = TwistedFreeComplex::new(ring, terms, diffs)?;
    let hd = crate::duality::dualize_complex(&h, delta(r, ri));

    let iota_t = iota_g.transpose_dual(t);
    let pr_t = pr_g.transpose_dual(t);
    let dd_t = dd.transpose_dual(t);
    let psi_low = iota_t.compose(&g_map)?.compose(&dd)?;
    let psi_high = dd_t
        .compose(&g_map)?
        .compose(&iota_g)?
        .signed(s);
    let psi_map = GradedMap::new(
        h.clone(),
        hd,
        0,
        [(-s, psi_low), (-s + 1, psi_high)].into_iter().collect(),
    )?;

    let path_a = dd_t.compose(&g_map)?.compose(&iota_g)?.compose(&pr_g)?.compose(&dd)?;
    let path_b = dd_t.compose(&pr_t)?.compose(&iota_t)?.compose(&g_map)?.compose(&dd)?;
    let path_sum = path_a.add(&path_b)?;

    let nu_map = GradedMatrix::from_constant(
        ring,
        k_mid.clone(),
        k_mid.iter().map(|a| t - a).collect(),
        &split.nu.gram().transpose(),
    )?;
    let d_nu_d = d_low.transpose_dual(t).compose(&nu_map)?.compose(&d_low)?;
    Ok(OddPairParts {
        h,
        psi_map,
        path_sum,
        d_nu_d,
    })
}

/// `(H, ψ)` for odd `r` from a validated split; `ψ` is declared symmetric
/// (`ε = +1`) over `Δ[r]`.
pub fn build_odd_pair(k: &KoszulData, split: &MiddleSplit) -> Result<HalfKoszulPair> {
    split.validate()?;
    let parts = odd_pair_parts(k, split)?;
    let psi = SymmetricFormData::new(parts.psi_map, delta(k.r, k.r as i64), Sign::Plus)?;
    Ok(HalfKoszulPair { h: parts.h, psi })
}

/// Term multiset of `K ⊕ (𝒮 -> 𝒩 -> 𝒮^∨)` in degrees `-s-1, -s, -s+1`.
pub fn expected_odd_cone_multiset(k: &KoszulData, split: &MiddleSplit) -> BTreeMap<i64, Vec<i64>> {
    let s = split.s as i64;
    let mut m = k.complex.term_multiset();
    let mut add = |deg: i64, n: usize| {
        let e = m.entry(deg).or_default();
        e.extend(core::iter::repeat_n(-s, n));
        e.sort_unstable();
    };
    add(-s - 1, split.s_rank);
    add(-s, split.n_rank());
    add(-s + 1, split.s_rank);
    m.retain(|_, v| !v.is_empty());
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(4, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(5, 3).len(), binomial(5, 3));
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_multiply(&[0], &[1]), Some((Sign::Plus, vec![0, 1])));
        assert_eq!(wedge_multiply(&[1], &[0]), Some((Sign::Minus, vec![0, 1])));
        assert_eq!(wedge_multiply(&[0, 2], &[1, 3]), Some((Sign::Minus, vec![0, 1, 2, 3])));
        assert_eq!(wedge_multiply(&[0, 2], &[2]), None);
    }

    #[test]
    fn koszul_p1_differentials() {
        let k = build_koszul(1, FieldSpec::Rationals).unwrap();
        let ring = k.ring();
        let d = k.complex.diff(-2);
        assert_eq!(d.get(0, 0).unwrap(), &ring.var(1).neg());
        assert_eq!(d.get(1, 0).unwrap(), &ring.var(0));
        let d1 = k.complex.diff(-1);
        assert_eq!(d1.get(0, 0).unwrap(), &ring.var(0));
        assert_eq!(d1.get(0, 1).unwrap(), &ring.var(1));
        assert!(k.complex.validate().is_empty());
        assert!(build_koszul(0, FieldSpec::Rationals).is_err());
    }
}
