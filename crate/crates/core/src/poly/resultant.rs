//! Sylvester resultants and determinants of polynomial matrices.

use std::collections::HashMap;

use super::Poly;
use crate::error::{Error, Result};

/// Determinant of a square matrix of polynomials sharing one variable count.
///
/// Small matrices use expansion over column subsets (division free); larger
/// ones fall back to fraction-free Bareiss elimination.
pub fn determinant(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(nvars);
    }
    if n <= 12 {
        subset_expansion(m, nvars)
    } else {
        bareiss(m.to_vec(), nvars)
    }
}

fn subset_expansion(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let n = m.len();
    let mut layer: HashMap<u32, Poly> = HashMap::new();
    layer.insert(0, Poly::one(nvars));
    for row in m {
        let mut next: HashMap<u32, Poly> = HashMap::new();
        for (mask, val) in &layer {
            for (j, entry) in row.iter().enumerate() {
                if mask & (1 << j) != 0 || entry.is_zero() {
                    continue;
                }
                let above = (mask >> (j + 1)).count_ones();
                let mut t = val * entry;
                if above % 2 == 1 {
                    t = -t;
                }
                let key = mask | (1 << j);
                match next.get_mut(&key) {
                    Some(acc) => *acc = &*acc + &t,
                    None => {
                        next.insert(key, t);
                    }
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        layer = next;
    }
    layer.remove(&((1u32 << n) - 1)).unwrap_or_else(|| Poly::zero(nvars))
}

fn bareiss(mut a: Vec<Vec<Poly>>, nvars: usize) -> Poly {
    let n = a.len();
    let mut sign = false;
    let mut prev = Poly::one(nvars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return Poly::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("nonzero pivot")
                    .expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Resultant with respect to `var` using the given formal degrees; the
/// coefficients above the actual degree are treated as zeros.
pub fn sylvester_resultant_formal(p: &Poly, q: &Poly, var: usize, dp: usize, dq: usize) -> Result<Poly> {
    let n = p.nvars();
    if q.nvars() != n {
        return Err(Error::Arity {
            expected: n,
            got: q.nvars(),
        });
    }
    if p.degree_in(var) > dp as i64 || q.degree_in(var) > dq as i64 {
        return Err(Error::Domain("formal degree below actual degree".into()));
    }
    let coeff = |c: &[Poly], k: usize| c.get(k).cloned().unwrap_or_else(|| Poly::zero(n));
    let pc = p.coeffs_in(var);
    let qc = q.coeffs_in(var);
    let size = dp + dq;
    let mut m = vec![vec![Poly::zero(n); size]; size];
    for i in 0..dq {
        for k in 0..=dp {
            m[i][i + k] = coeff(&pc, dp - k);
        }
    }
    for i in 0..dp {
        for k in 0..=dq {
            m[dq + i][i + k] = coeff(&qc, dq - k);
        }
    }
    Ok(determinant(&m, n))
}

/// Determinant of the Sylvester matrix of `p` and `q` with respect to `var`.
pub fn sylvester_resultant(p: &Poly, q: &Poly, var: usize) -> Result<Poly> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::Domain("resultant of the zero polynomial".into()));
    }
    let dp = p.degree_in(var) as usize;
    let dq = q.degree_in(var) as usize;
    sylvester_resultant_formal(p, q, var, dp, dq)
}
