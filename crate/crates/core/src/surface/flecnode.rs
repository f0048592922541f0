//! Flecnode polynomial by chart-wise elimination of the osculating direction.

use crate::error::{Error, Result};
use crate::poly::{gcd, sylvester_resultant_formal, Poly};
use crate::rat::Rat;
use num_traits::One;

/// Outcome of one elimination chart.
#[derive(Clone, Debug)]
pub struct ChartResult {
    /// Index of the direction coordinate solved from the first-order equation.
    pub chart: usize,
    /// Resultant after removing every factor shared with the chart's partial derivative.
    pub witness: Poly,
    pub raw_degree: i64,
}

/// The three directional-derivative forms in (x, y, z, v1, v2, v3).
fn directional_forms(f: &Poly) -> Result<[Poly; 3]> {
    Ok([
        f.directional_power(1)?,
        f.directional_power(2)?,
        f.directional_power(3)?,
    ])
}

/// `fc^k * F(v)` with `v_c` replaced by `-(sum_{i != c} f_i v_i) / fc`.
fn substitute_direction(form: &Poly, k: u32, c: usize, fc: &Poly, neg_rest: &Poly) -> Poly {
    let coeffs = form.coeffs_in(3 + c);
    let mut out = Poly::zero(6);
    for (e, coef) in coeffs.iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let e = e as u32;
        let t = &(coef * &neg_rest.pow(e)) * &fc.pow(k - e);
        out = &out + &t;
    }
    out
}

fn strip_shared_factors(mut r: Poly, by: &Poly) -> Poly {
    loop {
        let g = gcd(&r, by);
        if g.is_constant() {
            return r;
        }
        r = r.exact_div(&g).expect("gcd is nonzero").expect("gcd divides");
    }
}

/// Eliminates the direction in chart `c`. `None` when `df/dx_c` vanishes identically.
pub fn chart_witness(f: &Poly, c: usize) -> Result<Option<ChartResult>> {
    let [f1, f2, f3] = directional_forms(f)?;
    chart_from_forms(f, &f1, &f2, &f3, c)
}

fn chart_from_forms(f: &Poly, f1: &Poly, f2: &Poly, f3: &Poly, c: usize) -> Result<Option<ChartResult>> {
    let fc3 = f.partial_derivative(c);
    if fc3.is_zero() {
        return Ok(None);
    }
    let embed: Vec<usize> = (0..3).collect();
    let fc = fc3.remap(6, &embed);
    // -(F1 - fc * v_c)
    let neg_rest = -&(f1 - &(&fc * &Poly::var(6, 3 + c)));
    let g2 = substitute_direction(f2, 2, c, &fc, &neg_rest);
    let g3 = substitute_direction(f3, 3, c, &fc, &neg_rest);
    let others: Vec<usize> = (0..3).filter(|&i| i != c).collect();
    let (va, vb) = (3 + others[0], 3 + others[1]);
    let g2 = g2.substitute_const(vb, &Rat::one());
    let g3 = g3.substitute_const(vb, &Rat::one());
    let res = sylvester_resultant_formal(&g2, &g3, va, 2, 3)?;
    let res = res.drop_vars(&embed)?;
    let raw_degree = res.degree();
    if res.is_zero() {
        return Ok(Some(ChartResult {
            chart: c,
            witness: res,
            raw_degree,
        }));
    }
    let witness = strip_shared_factors(res, &fc3).primitive();
    Ok(Some(ChartResult {
        chart: c,
        witness,
        raw_degree,
    }))
}

/// All non-degenerate charts.
pub fn chart_witnesses(f: &Poly) -> Result<Vec<ChartResult>> {
    let [f1, f2, f3] = directional_forms(f)?;
    let mut out = Vec::new();
    for c in (0..3).rev() {
        if let Some(r) = chart_from_forms(f, &f1, &f2, &f3, c)? {
            out.push(r);
        }
    }
    Ok(out)
}

/// A nonzero polynomial vanishing at every flecnode of `Z(f)`, `deg f >= 3`.
pub fn flecnode_polynomial(f: &Poly) -> Result<Poly> {
    if f.nvars() != 3 {
        return Err(Error::Arity {
            expected: 3,
            got: f.nvars(),
        });
    }
    if f.degree() < 3 {
        return Err(Error::Degree(format!(
            "flecnode polynomial needs degree >= 3, got {}",
            f.degree()
        )));
    }
    let charts = chart_witnesses(f)?;
    combine(&charts)
}

fn combine(charts: &[ChartResult]) -> Result<Poly> {
    let mut acc: Option<Poly> = None;
    for ch in charts {
        if ch.witness.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => ch.witness.clone(),
            Some(a) => gcd(&a, &ch.witness).primitive(),
        });
    }
    acc.ok_or_else(|| Error::Domain("every elimination chart degenerated".into()))
}
