//! Word-sized arithmetic modulo an odd prime, plus a dense rank routine used
//! by the probabilistic and graded-window checkers.

use alloc::vec::Vec;

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `None` for zero.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Reduces a signed integer into `[0, p)`.
pub fn reduce_i128(v: i128, p: u64) -> u64 {
    v.rem_euclid(p as i128) as u64
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Legendre symbol: 0, 1 or -1.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root modulo an odd prime by Tonelli-Shanks.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut root = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        root = mul_mod(root, b, p);
    }
    Some(root)
}

/// Dense row-major matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ModMatrix {
            rows,
            cols,
            data: alloc::vec![0; rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    /// Rank by Gaussian elimination. Consumes a working copy.
    pub fn rank(&self, p: u64) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        if rows == 0 || cols == 0 {
            return 0;
        }
        let mut a = self.data.clone();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(piv) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
                continue;
            };
            if piv != rank {
                for c in col..cols {
                    a.swap(piv * cols + c, rank * cols + c);
                }
            }
            let inv = inv_mod(a[rank * cols + col], p).expect("nonzero pivot");
            for c in col..cols {
                a[rank * cols + c] = mul_mod(a[rank * cols + c], inv, p);
            }
            let (head, tail) = a.split_at_mut((rank + 1) * cols);
            let pivot_row = &head[rank * cols..];
            for row in tail.chunks_mut(cols) {
                let f = row[col];
                if f == 0 {
                    continue;
                }
                for c in col..cols {
                    if pivot_row[c] != 0 {
                        row[c] = sub_mod(row[c], mul_mod(f, pivot_row[c], p), p);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Rank of a sparse matrix over `F_p`, given as rows of `(column, value)` pairs.
///
/// Pivots are chosen on the sparsest available row to limit fill-in; the
/// graded pieces of Koszul-type complexes stay sparse under this order.
pub fn sparse_rank(rows: Vec<Vec<(usize, u64)>>, p: u64) -> usize {
    use alloc::collections::BTreeMap;
    let mut rows: Vec<Vec<(usize, u64)>> = rows
        .into_iter()
        .map(|mut r| {
            r.retain(|&(_, v)| v % p != 0);
            r.sort_unstable_by_key(|&(c, _)| c);
            r
        })
        .filter(|r| !r.is_empty())
        .collect();
    // pivot column -> normalized pivot row (leading coefficient 1)
    let mut pivots: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    rows.sort_by_key(|r| r.len());
    for row in rows {
        let mut cur = row;
        while let Some(&(lead, lv)) = cur.first() {
            match pivots.get(&lead) {
                Some(prow) => {
                    cur = axpy_sparse(&cur, prow, sub_mod(0, lv, p), p);
                }
                None => {
                    let inv = inv_mod(lv, p).expect("nonzero lead");
                    for e in cur.iter_mut() {
                        e.1 = mul_mod(e.1, inv, p);
                    }
                    pivots.insert(lead, cur);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Returns `x + f * y` for sorted sparse vectors.
fn axpy_sparse(x: &[(usize, u64)], y: &[(usize, u64)], f: u64, p: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i]);
            i += 1;
        } else if take_y {
            out.push((y[j].0, mul_mod(f, y[j].1, p)));
            j += 1;
        } else {
            let v = add_mod(x[i].1, mul_mod(f, y[j].1, p), p);
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
