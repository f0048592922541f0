//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are stored in a map keyed by exponent vectors under the graded
//! lexicographic order, so the last entry is always the leading term.

mod gcd;
mod parse;
mod resultant;
pub mod univariate;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{check_arity, Error, Result};
use crate::rat::Rat;

pub use gcd::{content_in, gcd, square_free_part};
pub use resultant::{determinant, sylvester_resultant, sylvester_resultant_formal};

/// Exponent vector ordered by total degree, ties broken lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::monomial(c, vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(Rat::one(), e)
    }

    pub fn monomial(c: Rat, exps: Vec<u32>) -> Self {
        let mut p = Poly::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(Monomial(exps), c);
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rat)>,
    {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Integer-coefficient constructor, mostly for fixtures.
    pub fn from_int_terms(nvars: usize, terms: &[(i64, &[u32])]) -> Self {
        Self::from_terms(
            nvars,
            terms
                .iter()
                .map(|(c, e)| (e.to_vec(), Rat::from_integer(BigInt::from(*c)))),
        )
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.terms.iter().map(|(m, c)| (m.0.as_slice(), c))
    }

    /// Total degree; the zero polynomial has degree -1.
    pub fn degree(&self) -> i64 {
        self.terms.keys().next_back().map_or(-1, |m| m.degree() as i64)
    }

    /// Degree in a single variable; -1 for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|m| m.0[var] as i64).max().unwrap_or(-1)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Value of the constant term.
    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Monomial(vec![0; self.nvars]))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Scales to coprime integer coefficients with a positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&den / c.denom()))));
        let mut s = Rat::new(den, num);
        if self.leading_term().unwrap().1.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, at: &[Rat]) -> Result<Rat> {
        check_arity(self.nvars, at.len())?;
        let mut pows: Vec<Vec<Rat>> = vec![vec![Rat::one()]; self.nvars];
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let row = &mut pows[i];
                while row.len() <= e as usize {
                    let next = row.last().unwrap() * &at[i];
                    row.push(next);
                }
                t *= &row[e as usize];
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn partial_derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.0.clone();
            m2[var] -= 1;
            out.terms.insert(Monomial(m2), c * Rat::from_integer(BigInt::from(e)));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Poly> {
        (0..self.nvars).map(|i| self.partial_derivative(i)).collect()
    }

    /// Substitutes `subs[i]` for variable `i`. All substitutes share one variable count.
    pub fn compose(&self, subs: &[Poly]) -> Result<Poly> {
        check_arity(self.nvars, subs.len())?;
        let target = subs.first().map_or(0, |s| s.nvars);
        if subs.iter().any(|s| s.nvars != target) {
            return Err(Error::Domain("substitutes differ in variable count".into()));
        }
        let mut pows: Vec<Vec<Poly>> = subs.iter().map(|_| vec![Poly::one(target)]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pows[i].len() <= e as usize {
                    let next = pows[i].last().unwrap() * &subs[i];
                    pows[i].push(next);
                }
                t = &t * &pows[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// The polynomial `x -> p(at + x)`.
    pub fn shift(&self, at: &[Rat]) -> Result<Poly> {
        check_arity(self.nvars, at.len())?;
        let subs: Vec<Poly> = (0..self.nvars)
            .map(|i| &Poly::var(self.nvars, i) + &Poly::constant(self.nvars, at[i].clone()))
            .collect();
        self.compose(&subs)
    }

    pub fn homogeneous_part(&self, k: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous parts `g_0, ..., g_deg` (empty for the zero polynomial).
    pub fn homogeneous_parts(&self) -> Vec<Poly> {
        let d = self.degree();
        let mut parts = vec![Poly::zero(self.nvars); (d + 1).max(0) as usize];
        for (m, c) in &self.terms {
            parts[m.degree() as usize].terms.insert(m.clone(), c.clone());
        }
        parts
    }

    /// Homogeneous parts of `x -> p(at + x)`: the Taylor expansion of `p` around `at`.
    pub fn taylor_components(&self, at: &[Rat]) -> Result<Vec<Poly>> {
        Ok(self.shift(at)?.homogeneous_parts())
    }

    /// The `k`-th directional derivative as a polynomial in `2 * nvars` variables,
    /// the first block being the base point and the second the direction.
    pub fn directional_power(&self, k: u32) -> Result<Poly> {
        if k < 1 {
            return Err(Error::Domain("directional derivative order must be >= 1".into()));
        }
        let n = self.nvars;
        // d^k/dt^k p(x + t v) at t = 0 is k! times the t^k coefficient.
        let mut subs = Vec::with_capacity(n);
        for i in 0..n {
            let mut e_x = vec![0; 2 * n + 1];
            e_x[i] = 1;
            let mut e_tv = vec![0; 2 * n + 1];
            e_tv[n + i] = 1;
            e_tv[2 * n] = 1;
            subs.push(Poly::from_terms(2 * n + 1, [(e_x, Rat::one()), (e_tv, Rat::one())]));
        }
        let expanded = self.compose(&subs)?;
        let fact: BigInt = (1..=k).map(BigInt::from).product();
        let fact = Rat::from_integer(fact);
        let mut out = Poly::zero(2 * n);
        for (m, c) in &expanded.terms {
            if m.0[2 * n] == k {
                out.terms.insert(Monomial(m.0[..2 * n].to_vec()), c * &fact);
            }
        }
        Ok(out)
    }

    /// Coefficients with respect to `var`, indexed by power; each coefficient
    /// keeps the full variable count with `var` absent.
    pub fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let d = self.degree_in(var);
        let mut out = vec![Poly::zero(self.nvars); (d + 1).max(0) as usize];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut m2 = m.0.clone();
            m2[var] = 0;
            out[e].terms.insert(Monomial(m2), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(nvars: usize, var: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, x) in &c.terms {
                let mut m2 = m.0.clone();
                m2[var] += k as u32;
                out.add_term(Monomial(m2), x.clone());
            }
        }
        out
    }

    /// Re-embeds into `nvars` variables, sending variable `i` to `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Substitutes a constant for one variable; the variable count is kept.
    pub fn substitute_const(&self, var: usize, value: &Rat) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in self.coeffs_in(var).iter().enumerate() {
            let k = num_traits::pow(value.clone(), e);
            out = &out + &c.scale(&k);
        }
        out
    }

    /// Keeps only the listed variables, which must cover every occurring one.
    pub fn drop_vars(&self, keep: &[usize]) -> Result<Poly> {
        let mut out = Poly::zero(keep.len());
        for (m, c) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 && !keep.contains(&i) {
                    return Err(Error::Domain(format!("variable {i} still occurs")));
                }
            }
            let e: Vec<u32> = keep.iter().map(|&i| m.0[i]).collect();
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Which variables actually occur.
    pub fn support_vars(&self) -> Vec<bool> {
        let mut used = vec![false; self.nvars];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        used
    }

    /// Division with remainder by a single divisor in graded-lex order.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        check_arity(self.nvars, divisor.nvars)?;
        let (lm, lc) = divisor
            .leading_term()
            .ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut q = Poly::zero(self.nvars);
        let mut r = Poly::zero(self.nvars);
        let mut p = self.clone();
        while let Some((m, c)) = p.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if lm.divides(&m) {
                let e: Vec<u32> = m.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect();
                let coef = &c / &lc;
                for (dm, dc) in &divisor.terms {
                    let prod: Vec<u32> = dm.0.iter().zip(&e).map(|(a, b)| a + b).collect();
                    p.add_term(Monomial(prod), -(dc * &coef));
                }
                q.add_term(Monomial(e), coef);
            } else {
                p.terms.remove(&m);
                r.terms.insert(m, c);
            }
        }
        Ok((q, r))
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Option<Poly>> {
        let (q, r) = self.div_rem(divisor)?;
        Ok(if r.is_zero() { Some(q) } else { None })
    }

    pub fn var_names(nvars: usize) -> Vec<String> {
        match nvars {
            1 => vec!["t".into()],
            2 => vec!["x".into(), "y".into()],
            3 => vec!["x".into(), "y".into(), "z".into()],
            _ => (0..nvars).map(|i| format!("x{i}")).collect(),
        }
    }

    /// Renders with the given variable names, highest term first.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            let coef = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("{}/{}", a.numer(), a.denom())
            };
            if factors.is_empty() {
                s.push_str(&coef);
            } else {
                if !a.is_one() {
                    s.push_str(&coef);
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }

    pub fn parse(src: &str, names: &[&str]) -> Result<Poly> {
        parse::parse(src, names)
    }
}

/// `f` divides `g` exactly over the rationals.
pub fn divides(f: &Poly, g: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::Domain("divisor is the zero polynomial".into()));
    }
    Ok(g.div_rem(f)?.1.is_zero())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Poly::var_names(self.nvars)))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.nvars, self)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut acc: std::collections::HashMap<Vec<u32>, Rat> = std::collections::HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                let prod = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        Poly {
            nvars: self.nvars,
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (Monomial(e), c))
                .collect(),
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
