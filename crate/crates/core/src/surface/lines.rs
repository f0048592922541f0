//! Lines on a surface: bounded search through a point, exceptional lines, and
//! the generator counters along a probe line.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use super::{gradient_at, sample_params, show, tangent_basis};
use crate::error::{Error, Result};
use crate::linespace::{line_on_surface, line_relation, AffLine, LineRelation};
use crate::poly::univariate::{integer_roots_bounded, restrict_to_line};
use crate::poly::{gcd, Poly};
use crate::rat::{self, Rat};

/// Direction bound used when probing singular points for further lines.
const SINGULAR_PROBE_BOUND: i64 = 10;

/// Lines through `p` contained in `Z(factor)` whose direction has an integer
/// representative with entries at most `bound` in absolute value.
pub fn find_lines_through_point(factor: &Poly, p: &[Rat], bound: i64) -> Result<Vec<AffLine>> {
    if factor.nvars() != 3 || p.len() != 3 {
        return Err(Error::Arity {
            expected: 3,
            got: p.len().min(factor.nvars()),
        });
    }
    if !factor.eval(p)?.is_zero() {
        return Err(Error::NotOnSurface(format!("factor does not vanish at {}", show(p))));
    }
    let parts: Vec<Poly> = factor
        .taylor_components(p)?
        .into_iter()
        .filter(|g| !g.is_zero())
        .collect();
    let mut found = BTreeSet::new();
    for a in -bound..=bound {
        for c in -bound..=bound {
            let (ra, rc) = (rat::int(a), rat::int(c));
            let mut g = Poly::zero(1);
            for part in &parts {
                let h = part.substitute_const(0, &ra).substitute_const(2, &rc);
                g = gcd(&g, &h.drop_vars(&[1])?);
                if g.is_constant() && !g.is_zero() {
                    break;
                }
            }
            for y in integer_roots_bounded(&g, bound) {
                let dir = vec![ra.clone(), rat::int(y), rc.clone()];
                if !rat::is_zero_vec(&dir) {
                    found.insert(AffLine::new(p.to_vec(), dir)?);
                }
            }
        }
    }
    Ok(found.into_iter().filter(|l| line_on_surface(factor, l)).collect())
}

enum Probe {
    Hit,
    /// No other line through a nonsingular point; the test there is complete.
    Miss,
    /// No other line found through a singular point within the search bound.
    Unresolved,
}

/// Looks for a contained line other than `ln` through the point `q` of `ln`.
fn probe_point(factor: &Poly, ln: &AffLine, q: &[Rat]) -> Result<Probe> {
    let grad = gradient_at(factor, q)?;
    if rat::is_zero_vec(&grad) {
        let parts: Vec<Poly> = factor
            .taylor_components(q)?
            .into_iter()
            .filter(|g| !g.is_zero())
            .collect();
        let common = parts.iter().fold(Poly::zero(3), |acc, g| gcd(&acc, g));
        if !common.is_constant() {
            return Ok(Probe::Hit);
        }
        let others = find_lines_through_point(factor, q, SINGULAR_PROBE_BOUND)?;
        return Ok(if others.iter().any(|l| l != ln) {
            Probe::Hit
        } else {
            Probe::Unresolved
        });
    }
    // Every line through a nonsingular point lies in the tangent plane. With
    // directions a*u + w, u along ln, another line is a common root in a.
    let u = ln.dir().to_vec();
    let w = tangent_basis(&grad)
        .into_iter()
        .find(|b| crate::linalg::rank(&[u.clone(), b.clone()]) == 2)
        .expect("tangent plane is two-dimensional");
    let mut g = Poly::zero(1);
    for part in factor.taylor_components(q)?.iter().skip(2) {
        g = gcd(&g, &restrict_to_line(part, &w, &u));
        if g.is_constant() && !g.is_zero() {
            return Ok(Probe::Miss);
        }
    }
    Ok(Probe::Hit)
}

/// Lines of `lines` whose points (at least `2 deg + 1` samples) all meet some
/// other contained line.
pub fn exceptional_lines(factor: &Poly, lines: &[AffLine]) -> Result<Vec<AffLine>> {
    for l in lines {
        if !line_on_surface(factor, l) {
            return Err(Error::NotOnSurface(format!("{l:?} is not contained in the factor")));
        }
    }
    let need = 2 * factor.degree().max(0) as usize + 1;
    let budget = 2 * need * need + 1;
    let mut out = Vec::new();
    for ln in lines {
        let mut hits = 0;
        for (i, t) in sample_params().take(budget).enumerate() {
            if hits + (budget - i) < need {
                break;
            }
            let q = ln.point_at(&t);
            let probe = if lines.iter().any(|l| l != ln && l.contains(&q)) {
                Probe::Hit
            } else {
                probe_point(factor, ln, &q)?
            };
            match probe {
                Probe::Hit => hits += 1,
                Probe::Miss => break,
                Probe::Unresolved => {}
            }
            if hits == need {
                out.push(ln.clone());
                break;
            }
        }
    }
    out.sort();
    out.dedup();
    if out.len() > 2 {
        return Err(Error::InvariantViolation(format!(
            "{} exceptional lines found; at most two are possible",
            out.len()
        )));
    }
    Ok(out)
}

/// `lambda` and `lambda_star = max(0, lambda - 1)` at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorCount {
    pub lambda: usize,
    pub lambda_star: usize,
}

impl GeneratorCount {
    fn new(lambda: usize) -> Self {
        GeneratorCount {
            lambda,
            lambda_star: lambda.saturating_sub(1),
        }
    }
}

/// Non-exceptional lines of `lines` through `p`; zero at the apex.
pub fn lambda_counts(p: &[Rat], lines: &[AffLine], exceptional: &[AffLine], apex: Option<&[Rat]>) -> GeneratorCount {
    if apex.is_some_and(|a| a == p) {
        return GeneratorCount::new(0);
    }
    let lambda = lines
        .iter()
        .filter(|l| !exceptional.contains(l) && l.contains(p))
        .count();
    GeneratorCount::new(lambda)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorSumReport {
    pub sum: usize,
    pub bound: usize,
    pub ok: bool,
    pub contained: bool,
}

/// Sums `lambda` (or `lambda_star` when `ln` lies on the factor) over the points
/// where `ln` meets the lines of `lines`.
pub fn check_generator_sum(
    factor: &Poly,
    ln: &AffLine,
    lines: &[AffLine],
    exceptional: &[AffLine],
    apex: Option<&[Rat]>,
) -> Result<GeneratorSumReport> {
    if exceptional.contains(ln) {
        return Err(Error::ExceptionalLine);
    }
    let contained = line_on_surface(factor, ln);
    let mut pool: Vec<AffLine> = lines.to_vec();
    if contained && !pool.contains(ln) {
        pool.push(ln.clone());
    }
    let mut points = BTreeSet::new();
    for l in &pool {
        if let LineRelation::Intersecting(p) = line_relation(ln, l)? {
            points.insert(p);
        }
    }
    let sum = points
        .iter()
        .map(|p| {
            let c = lambda_counts(p, &pool, exceptional, apex);
            if contained {
                c.lambda_star
            } else {
                c.lambda
            }
        })
        .sum();
    let bound = factor.degree().max(0) as usize;
    Ok(GeneratorSumReport {
        sum,
        bound,
        ok: sum <= bound,
        contained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ints;

    fn p3(s: &str) -> Poly {
        Poly::parse(s, &["x", "y", "z"]).unwrap()
    }

    fn line(b: &[i64], d: &[i64]) -> AffLine {
        AffLine::new(ints(b), ints(d)).unwrap()
    }

    fn whitney_generator(c: i64) -> AffLine {
        line(&[0, 0, c * c], &[c, 1, 0])
    }

    #[test]
    fn lines_through_cone_apex() {
        let cone = p3("x^2 + y^2 - z^2");
        let found = find_lines_through_point(&cone, &ints(&[0, 0, 0]), 10).unwrap();
        for d in [[3, 4, 5], [0, 1, 1], [0, 1, -1], [1, 0, 1], [1, 0, -1]] {
            assert!(found.contains(&line(&[0, 0, 0], &d)), "missing {d:?}");
        }
        assert!(found.iter().all(|l| line_on_surface(&cone, l)));
    }

    #[test]
    fn no_lines_on_sphere() {
        let sphere = p3("x^2 + y^2 + z^2 - 1");
        assert!(find_lines_through_point(&sphere, &ints(&[0, 0, 1]), 10)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn whitney_lines_through_point() {
        let w = p3("x^2 - y^2*z");
        let found = find_lines_through_point(&w, &ints(&[2, 1, 4]), 10).unwrap();
        assert!(found.contains(&whitney_generator(2)));
        assert!(matches!(
            find_lines_through_point(&w, &ints(&[1, 0, 0]), 3),
            Err(Error::NotOnSurface(_))
        ));
    }

    #[test]
    fn whitney_exceptional_line() {
        let w = p3("x^2 - y^2*z");
        let zaxis = line(&[0, 0, 0], &[0, 0, 1]);
        let mut lines = vec![zaxis.clone()];
        lines.extend([1, -1, 2, -2, 3, -3].map(whitney_generator));
        assert_eq!(exceptional_lines(&w, &lines).unwrap(), vec![zaxis]);
    }

    #[test]
    fn cone_has_no_exceptional_lines() {
        let cone = p3("x^2 + y^2 - z^2");
        let gens: Vec<AffLine> = [[3, 4, 5], [0, 1, 1], [1, 0, 1], [4, 3, 5], [5, 12, 13]]
            .iter()
            .map(|d| line(&[0, 0, 0], d))
            .collect();
        assert!(exceptional_lines(&cone, &gens).unwrap().is_empty());
    }

    #[test]
    fn lambda_examples() {
        let o = ints(&[0, 0, 0]);
        let gens = vec![line(&[0, 0, 0], &[3, 4, 5]), line(&[0, 0, 0], &[0, 1, 1])];
        assert_eq!(
            lambda_counts(&o, &gens, &[], Some(&o)),
            GeneratorCount {
                lambda: 0,
                lambda_star: 0
            }
        );
        let zaxis = line(&[0, 0, 0], &[0, 0, 1]);
        let lines = vec![whitney_generator(2), whitney_generator(-2), zaxis.clone()];
        let c = lambda_counts(&ints(&[0, 0, 4]), &lines, &[zaxis], None);
        assert_eq!(
            c,
            GeneratorCount {
                lambda: 2,
                lambda_star: 1
            }
        );
        assert_eq!(lambda_counts(&ints(&[7, 7, 7]), &lines, &[], None).lambda, 0);
    }

    #[test]
    fn generator_sums_examples() {
        let w = p3("x^2 - y^2*z");
        let gens: Vec<AffLine> = [1, -1, 2, -2, 3, -3].map(whitney_generator).to_vec();
        let r = check_generator_sum(&w, &whitney_generator(0), &gens, &[], None).unwrap();
        assert_eq!((r.sum, r.ok, r.contained), (0, true, true));

        let cone = p3("x^2 + y^2 - z^2");
        let cg = vec![line(&[0, 0, 0], &[3, 4, 5])];
        let r = check_generator_sum(&cone, &line(&[1, 0, 0], &[0, 1, 1]), &cg, &[], Some(&ints(&[0, 0, 0]))).unwrap();
        assert_eq!((r.sum, r.bound, r.ok), (0, 2, true));

        let r = check_generator_sum(
            &w,
            &line(&[0, 1, 1], &[1, 0, 0]),
            &[whitney_generator(1), whitney_generator(-1)],
            &[],
            None,
        )
        .unwrap();
        assert_eq!((r.sum, r.bound, r.ok), (2, 3, true));

        let zaxis = line(&[0, 0, 0], &[0, 0, 1]);
        assert_eq!(
            check_generator_sum(&w, &zaxis, &gens, std::slice::from_ref(&zaxis), None),
            Err(Error::ExceptionalLine)
        );
    }
}
