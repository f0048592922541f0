//! Ruledness indication and component classification.

use num_traits::Zero;
use serde::Serialize;

use super::lines::find_lines_through_point;
use super::{flecnode_polynomial, gradient_at};
use crate::error::{Error, Result};
use crate::linalg::{inertia, kernel};
use crate::linespace::{line_on_surface, AffLine};
use crate::poly::univariate::{rational_roots, restrict_to_line};
use crate::poly::{divides, gcd, square_free_part, Poly};
use crate::rat::{self, Rat};

/// Integer box searched for singular points of a candidate cone.
const APEX_GRID: i64 = 3;
/// Integer box of vertical probes used to find surface points.
const POINT_GRID: i64 = 3;
/// Direction bound for the line search at probe points.
const LINE_SEARCH_BOUND: i64 = 5;
const MAX_PROBE_POINTS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Ruledness {
    RuledIndicated,
    NotRuledIndicated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Plane,
    Regulus,
    Cone(Vec<Rat>),
    SinglyRuled,
    NotRuledReal,
    Unknown,
}

impl Verdict {
    pub fn is_ruled(&self) -> bool {
        !matches!(self, Verdict::NotRuledReal | Verdict::Unknown)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Plane => "Plane",
            Verdict::Regulus => "Regulus",
            Verdict::Cone(_) => "Cone",
            Verdict::SinglyRuled => "SinglyRuled",
            Verdict::NotRuledReal => "NotRuledReal",
            Verdict::Unknown => "Unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    pub complex_ruled_indicated: bool,
    pub notes: String,
}

impl ClassificationResult {
    fn new(verdict: Verdict, complex: bool, notes: impl Into<String>) -> Self {
        ClassificationResult {
            verdict,
            complex_ruled_indicated: complex,
            notes: notes.into(),
        }
    }

    pub fn apex(&self) -> Option<&[Rat]> {
        match &self.verdict {
            Verdict::Cone(a) => Some(a),
            _ => None,
        }
    }
}

/// Quadrics are always ruled over the complex numbers; otherwise the factor
/// must divide its flecnode polynomial.
pub fn ruled_indicator(factor: &Poly) -> Result<Ruledness> {
    if factor.degree() <= 2 {
        return Ok(Ruledness::RuledIndicated);
    }
    let fl = flecnode_polynomial(factor)?;
    Ok(if divides(factor, &fl)? {
        Ruledness::RuledIndicated
    } else {
        Ruledness::NotRuledIndicated
    })
}

/// Symmetric matrix of the homogenized quadric in coordinates `(x0, x, y, z)`.
fn quadric_matrix(q: &Poly) -> Vec<Vec<Rat>> {
    let mut m = vec![vec![Rat::zero(); 4]; 4];
    let half = rat::rat(1, 2);
    for (e, c) in q.terms() {
        let idx: Vec<usize> = e
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat_n(i + 1, k as usize))
            .collect();
        let (i, j) = match idx.len() {
            0 => (0, 0),
            1 => (0, idx[0]),
            _ => (idx[0], idx[1]),
        };
        if i == j {
            m[i][i] += c;
        } else {
            m[i][j] += c * &half;
            m[j][i] += c * &half;
        }
    }
    m
}

fn classify_quadric(q: &Poly) -> ClassificationResult {
    let m = quadric_matrix(q);
    let (pos, neg, zero) = inertia(&m);
    let sig = (pos.max(neg), pos.min(neg));
    match (sig, zero) {
        ((2, 2), 0) => ClassificationResult::new(Verdict::Regulus, true, "inertia (2,2)"),
        ((2, 1), 1) => {
            let k = kernel(&m, 4).swap_remove(0);
            if k[0].is_zero() {
                ClassificationResult::new(
                    Verdict::SinglyRuled,
                    true,
                    "cylinder: rank 3 with kernel at infinity, ruled by parallel lines",
                )
            } else {
                let apex = k[1..].iter().map(|x| x / &k[0]).collect();
                ClassificationResult::new(Verdict::Cone(apex), true, "rank 3, inertia (2,1)")
            }
        }
        _ => ClassificationResult::new(
            Verdict::NotRuledReal,
            true,
            format!("quadric inertia ({pos},{neg},{zero}); ruled only by complex lines"),
        ),
    }
}

/// `f(a + x)` is homogeneous of degree `deg f`.
fn is_apex(f: &Poly, a: &[Rat]) -> bool {
    let d = f.degree() as usize;
    f.taylor_components(a)
        .map(|parts| parts.iter().take(d).all(Poly::is_zero))
        .unwrap_or(false)
}

fn is_singular(f: &Poly, a: &[Rat]) -> bool {
    f.eval(a).is_ok_and(|v| v.is_zero()) && gradient_at(f, a).is_ok_and(|g| rat::is_zero_vec(&g))
}

fn apex_candidates(f: &Poly, hints: &[AffLine]) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    for l in hints {
        let mut g = Poly::zero(1);
        for h in std::iter::once(f.clone()).chain(f.gradient()) {
            g = gcd(&g, &restrict_to_line(&h, l.base(), l.dir()));
        }
        if g.is_zero() || g.is_constant() {
            continue;
        }
        for t in rational_roots(&g).unwrap_or_default() {
            out.push(l.point_at(&t));
        }
    }
    for x in -APEX_GRID..=APEX_GRID {
        for y in -APEX_GRID..=APEX_GRID {
            for z in -APEX_GRID..=APEX_GRID {
                out.push(rat::ints(&[x, y, z]));
            }
        }
    }
    out
}

fn find_apex(f: &Poly, hints: &[AffLine]) -> Option<Vec<Rat>> {
    apex_candidates(f, hints)
        .into_iter()
        .find(|a| is_singular(f, a) && is_apex(f, a))
}

/// Rational points of `Z(f)` on axis-parallel probe lines through a small grid.
fn probe_points(f: &Poly) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    for axis in (0..3).rev() {
        let dir = super::unit(3, axis);
        for a in -POINT_GRID..=POINT_GRID {
            for b in -POINT_GRID..=POINT_GRID {
                let mut base = vec![Rat::zero(); 3];
                let others: Vec<usize> = (0..3).filter(|&i| i != axis).collect();
                base[others[0]] = rat::int(a);
                base[others[1]] = rat::int(b);
                let r = restrict_to_line(f, &base, &dir);
                if r.is_zero() {
                    out.push(base);
                } else if let Some(roots) = rational_roots(&r) {
                    out.extend(roots.iter().map(|t| {
                        let mut p = base.clone();
                        p[axis] = t.clone();
                        p
                    }));
                }
                if out.len() >= MAX_PROBE_POINTS {
                    return out;
                }
            }
        }
    }
    out
}

fn has_real_line(f: &Poly, hints: &[AffLine]) -> Result<bool> {
    if hints.iter().any(|l| line_on_surface(f, l)) {
        return Ok(true);
    }
    for p in probe_points(f) {
        if !find_lines_through_point(f, &p, LINE_SEARCH_BOUND)?.is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Classifies one irreducible factor. `hints` are known lines on the factor.
pub fn classify_component(factor: &Poly, hints: &[AffLine]) -> Result<ClassificationResult> {
    if factor.nvars() != 3 {
        return Err(Error::Arity {
            expected: 3,
            got: factor.nvars(),
        });
    }
    if factor.degree() < 1 {
        return Err(Error::Domain("constant factor".into()));
    }
    if square_free_part(factor)?.degree() != factor.degree() {
        return Err(Error::Domain("factor is not square-free".into()));
    }
    match factor.degree() {
        1 => return Ok(ClassificationResult::new(Verdict::Plane, true, "linear")),
        2 => return Ok(classify_quadric(factor)),
        _ => {}
    }
    if ruled_indicator(factor)? == Ruledness::NotRuledIndicated {
        return Ok(ClassificationResult::new(
            Verdict::NotRuledReal,
            false,
            "factor does not divide its flecnode polynomial",
        ));
    }
    if let Some(a) = find_apex(factor, hints) {
        return Ok(ClassificationResult::new(
            Verdict::Cone(a),
            true,
            "homogeneous after shifting to the apex",
        ));
    }
    if has_real_line(factor, hints)? {
        return Ok(ClassificationResult::new(
            Verdict::SinglyRuled,
            true,
            "flecnode divisibility and a real line",
        ));
    }
    Ok(ClassificationResult::new(
        Verdict::Unknown,
        true,
        "ruled over the complex numbers but no real line was found",
    ))
}
