//! Helpers for polynomials in a single variable (stored as `Poly` with `nvars == 1`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Poly;
use crate::rat::Rat;

/// Largest absolute value for which divisors are enumerated by trial division.
const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

/// Restriction `t -> f(base + t * dir)` as a polynomial in one variable.
pub fn restrict_to_line(f: &Poly, base: &[Rat], dir: &[Rat]) -> Poly {
    let subs: Vec<Poly> = base
        .iter()
        .zip(dir)
        .map(|(b, d)| Poly::from_terms(1, [(vec![0], b.clone()), (vec![1], d.clone())]))
        .collect();
    f.compose(&subs).expect("line dimension matches polynomial arity")
}

/// Dense integer coefficients (ascending powers) of a scalar multiple of `p`.
pub fn integer_coefficients(p: &Poly) -> Vec<BigInt> {
    assert_eq!(p.nvars(), 1);
    let prim = p.primitive();
    let d = prim.degree().max(0) as usize;
    let mut out = vec![BigInt::zero(); d + 1];
    for (e, c) in prim.terms() {
        out[e[0] as usize] = c.to_integer();
    }
    out
}

/// Lowest power of `t` with a nonzero coefficient (`None` for zero).
pub fn order_at_zero(p: &Poly) -> Option<u32> {
    p.terms().map(|(e, _)| e[0]).min()
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > DIVISOR_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(BigInt::from(i));
            if i * i != n {
                out.push(BigInt::from(n / i));
            }
        }
        i += 1;
    }
    Some(out)
}

/// All rational roots, by the rational root theorem. Returns `None` when the
/// relevant coefficients are too large to enumerate divisors.
pub fn rational_roots(p: &Poly) -> Option<Vec<Rat>> {
    if p.is_zero() {
        return None;
    }
    let c = integer_coefficients(p);
    let low = c.iter().position(|x| !x.is_zero()).unwrap();
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Rat::zero());
    }
    let c = &c[low..];
    if c.len() <= 1 {
        return Some(roots);
    }
    let num_div = divisors(&c[0])?;
    let den_div = divisors(c.last().unwrap())?;
    let eval = |x: &Rat| {
        c.iter()
            .rev()
            .fold(Rat::zero(), |acc, k| acc * x + Rat::from_integer(k.clone()))
    };
    let mut cands: Vec<Rat> = Vec::new();
    for a in &num_div {
        for b in &den_div {
            for s in [BigInt::one(), -BigInt::one()] {
                cands.push(Rat::new(a * &s, b.clone()));
            }
        }
    }
    cands.sort();
    cands.dedup();
    roots.extend(cands.into_iter().filter(|x| eval(x).is_zero()));
    roots.sort();
    Some(roots)
}

/// Integer roots with absolute value at most `bound`.
pub fn integer_roots_bounded(p: &Poly, bound: i64) -> Vec<i64> {
    if p.is_zero() {
        return (-bound..=bound).collect();
    }
    let c = integer_coefficients(p);
    let low = c.iter().position(|x| !x.is_zero()).unwrap();
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(0);
    }
    let c = &c[low..];
    if c.len() <= 1 {
        return roots;
    }
    let eval = |x: i64| {
        let x = BigInt::from(x);
        c.iter().rev().fold(BigInt::zero(), |acc, k| acc * &x + k)
    };
    // Any integer root divides the trailing coefficient.
    let t = c[0].abs();
    for r in 1..=bound {
        if (&t % BigInt::from(r)).is_zero() {
            for x in [r, -r] {
                if eval(x).is_zero() {
                    roots.push(x);
                }
            }
        }
    }
    roots.sort_unstable();
    roots
}

/// Number of distinct complex roots.
pub fn distinct_root_count(p: &Poly) -> usize {
    if p.is_zero() || p.is_constant() {
        return 0;
    }
    let g = super::gcd(p, &p.partial_derivative(0));
    (p.degree() - g.degree()) as usize
}

/// `lcm` of the denominators; handy when a caller needs integer data.
pub fn denominator_lcm(v: &[Rat]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
