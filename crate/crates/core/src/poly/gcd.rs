//! Multivariate gcd by recursion on the main variable with primitive
//! pseudo-remainder sequences, and the square-free part built on it.

use super::Poly;
use crate::error::{Error, Result};

fn main_var(a: &Poly, b: &Poly) -> Option<usize> {
    let ua = a.support_vars();
    let ub = b.support_vars();
    (0..a.nvars()).rev().find(|&i| ua[i] || ub[i])
}

/// Gcd of the coefficients of `p` seen as a polynomial in `var`.
pub fn content_in(p: &Poly, var: usize) -> Poly {
    let mut g = Poly::zero(p.nvars());
    let mut coeffs: Vec<Poly> = p.coeffs_in(var).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| (c.nterms(), c.degree()));
    for c in coeffs {
        g = gcd(&g, &c);
        if g.is_constant() && !g.is_zero() {
            break;
        }
    }
    g
}

fn exact(p: &Poly, d: &Poly) -> Poly {
    p.exact_div(d)
        .expect("nonzero divisor")
        .expect("divisor known to divide")
}

fn primitive_part_in(p: &Poly, var: usize) -> Poly {
    let c = content_in(p, var);
    exact(p, &c).primitive()
}

/// `lc(b)^k * a mod b` in `var`, for some k.
fn pseudo_rem(a: &Poly, b: &Poly, var: usize) -> Poly {
    let n = a.nvars();
    let bc = b.coeffs_in(var);
    let db = bc.len() - 1;
    let lcb = &bc[db];
    let mut r = a.coeffs_in(var);
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * lcb;
        }
        let shift = dr - db;
        for (j, bj) in bc.iter().enumerate() {
            let t = &lcr * bj;
            r[j + shift] = &r[j + shift] - &t;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    Poly::from_coeffs_in(n, var, &r)
}

/// Monic gcd over the rationals (zero only if both inputs are zero).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    assert_eq!(a.nvars(), b.nvars(), "variable count mismatch");
    let n = a.nvars();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(n);
    }
    let v = main_var(a, b).expect("non-constant input");
    let da = a.degree_in(v);
    let db = b.degree_in(v);
    if da == 0 {
        return gcd(a, &content_in(b, v));
    }
    if db == 0 {
        return gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let (mut f, mut g) = (exact(a, &ca).primitive(), exact(b, &cb).primitive());
    if f.degree_in(v) < g.degree_in(v) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        let r = pseudo_rem(&f, &g, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            g = Poly::one(n);
            break;
        }
        f = g;
        g = primitive_part_in(&r, v);
    }
    (&c * &g).monic()
}

/// Product of the distinct irreducible factors: `p / gcd(p, dp/dx_0, ...)`.
pub fn square_free_part(p: &Poly) -> Result<Poly> {
    if p.is_zero() {
        return Err(Error::Domain("square-free part of the zero polynomial".into()));
    }
    let mut g = p.clone();
    for i in 0..p.nvars() {
        let d = p.partial_derivative(i);
        if !d.is_zero() {
            g = gcd(&g, &d);
            if g.is_constant() {
                break;
            }
        }
    }
    Ok(exact(p, &g).primitive())
}
