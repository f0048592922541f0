//! Incidence counting, the s-statistic, the L0/L1 split with point pruning, and
//! the incidence bound evaluators.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linespace::{line_on_surface, AffLine, Flat2};
use crate::rat::Rat;
use crate::surface::{
    check_generator_sum, classify_component, exceptional_lines, ClassificationResult, Surface, Verdict,
};

pub fn count_incidences(points: &[Vec<Rat>], lines: &[AffLine]) -> usize {
    lines
        .iter()
        .map(|l| points.iter().filter(|p| l.contains(p)).count())
        .sum()
}

/// Points on each line, in line order.
pub fn points_per_line(points: &[Vec<Rat>], lines: &[AffLine]) -> Vec<usize> {
    lines
        .iter()
        .map(|l| points.iter().filter(|p| l.contains(p)).count())
        .collect()
}

/// Lines through each point, in point order.
pub fn lines_per_point(points: &[Vec<Rat>], lines: &[AffLine]) -> Vec<usize> {
    points
        .iter()
        .map(|p| lines.iter().filter(|l| l.contains(p)).count())
        .collect()
}

/// Largest number of lines in one 2-flat.
pub fn max_lines_per_flat(lines: &[AffLine]) -> usize {
    let mut flats: HashMap<Flat2, HashSet<usize>> = HashMap::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(f) = Flat2::spanned_by(&lines[i], &lines[j]) {
                let members = flats.entry(f).or_default();
                members.insert(i);
                members.insert(j);
            }
        }
    }
    flats.values().map(HashSet::len).max().unwrap_or(lines.len().min(1))
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub l0: Vec<AffLine>,
    pub l1: Vec<AffLine>,
    /// Factor index of each line of `l1`.
    pub l1_factor: Vec<usize>,
    /// Apexes of the cone factors with the factor index.
    pub apexes: Vec<(Vec<Rat>, usize)>,
    pub classifications: Vec<ClassificationResult>,
    /// Lines of the input contained in each factor.
    pub factor_lines: Vec<Vec<AffLine>>,
    pub exceptional: Vec<Vec<AffLine>>,
    pub l0_bound: usize,
}

impl Decomposition {
    fn is_conical(&self, p: &[Rat], l1_index: usize) -> bool {
        let f = self.l1_factor[l1_index];
        self.apexes.iter().any(|(a, i)| *i == f && a.as_slice() == p)
    }

    fn non_conical_through(&self, p: &[Rat]) -> impl Iterator<Item = usize> + '_ {
        let p = p.to_vec();
        (0..self.l1.len()).filter(move |&k| self.l1[k].contains(&p) && !self.is_conical(&p, k))
    }
}

/// Splits `lines` into the exceptional set `L0` and lines `L1` that each lie
/// in a unique ruled factor.
#[allow(non_snake_case)]
pub fn decompose_L0(surface: &Surface, lines: &[AffLine]) -> Result<Decomposition> {
    for l in lines {
        if !line_on_surface(surface.f(), l) {
            return Err(Error::NotOnSurface(format!("{l:?} is not contained in the surface")));
        }
    }
    let factors = surface.factors();
    let mut classifications = Vec::with_capacity(factors.len());
    let mut factor_lines = Vec::with_capacity(factors.len());
    let mut exceptional = Vec::with_capacity(factors.len());
    for (i, g) in factors.iter().enumerate() {
        let on: Vec<AffLine> = lines.iter().filter(|l| line_on_surface(g, l)).cloned().collect();
        let c = classify_component(g, &on)?;
        if c.verdict == Verdict::Unknown {
            return Err(Error::UnclassifiedFactor(i));
        }
        let exc = match c.verdict {
            Verdict::SinglyRuled | Verdict::Cone(_) => exceptional_lines(g, &on)?,
            _ => Vec::new(),
        };
        classifications.push(c);
        factor_lines.push(on);
        exceptional.push(exc);
    }
    let mut dec = Decomposition {
        l0: Vec::new(),
        l1: Vec::new(),
        l1_factor: Vec::new(),
        apexes: Vec::new(),
        factor_lines,
        exceptional,
        l0_bound: 0,
        classifications,
    };
    for (i, c) in dec.classifications.iter().enumerate() {
        if let Some(a) = c.apex() {
            dec.apexes.push((a.to_vec(), i));
        }
    }
    for l in lines {
        let holders: Vec<usize> = (0..factors.len())
            .filter(|&i| dec.factor_lines[i].contains(l))
            .collect();
        let in_non_ruled = holders.iter().any(|&i| !dec.classifications[i].verdict.is_ruled());
        let is_exceptional = holders.iter().any(|&i| dec.exceptional[i].contains(l));
        if in_non_ruled || holders.len() >= 2 || is_exceptional {
            dec.l0.push(l.clone());
        } else {
            dec.l1.push(l.clone());
            dec.l1_factor.push(holders[0]);
        }
    }
    let d = surface.degree() as usize;
    let sq: usize = factors.iter().map(|g| (g.degree() * g.degree()) as usize).sum();
    dec.l0_bound = 11 * sq + d * d + d;
    if dec.l0.len() > dec.l0_bound {
        return Err(Error::InvariantViolation(format!(
            "|L0| = {} exceeds {}",
            dec.l0.len(),
            dec.l0_bound
        )));
    }
    Ok(dec)
}

/// Keeps the points non-conically incident to at least four lines of `L1`.
pub fn prune_points(points: &[Vec<Rat>], dec: &Decomposition) -> Vec<Vec<Rat>> {
    points
        .iter()
        .filter(|p| dec.non_conical_through(p).nth(3).is_some())
        .cloned()
        .collect()
}

pub fn conical_incidence_count(points: &[Vec<Rat>], dec: &Decomposition) -> Result<usize> {
    let mut count = 0;
    for (a, f) in &dec.apexes {
        if !points.contains(a) {
            continue;
        }
        count += (0..dec.l1.len())
            .filter(|&k| dec.l1_factor[k] == *f && dec.l1[k].contains(a))
            .count();
    }
    if count > dec.l1.len() {
        return Err(Error::InvariantViolation(format!(
            "{count} conical incidences exceed |L1| = {}",
            dec.l1.len()
        )));
    }
    Ok(count)
}

/// For each line of `L1`, the number of other `L1` lines non-conically incident
/// to it at points of `kept`.
pub fn claim_counts(kept: &[Vec<Rat>], dec: &Decomposition) -> Vec<usize> {
    (0..dec.l1.len())
        .map(|k| {
            let mut others = HashSet::new();
            for p in kept.iter().filter(|p| dec.l1[k].contains(p)) {
                others.extend(dec.non_conical_through(p).filter(|&j| j != k));
            }
            others.len()
        })
        .collect()
}

/// Largest generator sum over ruled non-regulus factors, probing with every
/// non-exceptional line of the input.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GeneratorSumAudit {
    pub checks: usize,
    pub worst_sum: usize,
    pub worst_bound: usize,
    pub ok: bool,
}

pub fn generator_sum_audit(surface: &Surface, lines: &[AffLine], dec: &Decomposition) -> Result<GeneratorSumAudit> {
    let mut audit = GeneratorSumAudit {
        ok: true,
        ..Default::default()
    };
    for (i, g) in surface.factors().iter().enumerate() {
        let c = &dec.classifications[i];
        if !matches!(c.verdict, Verdict::SinglyRuled | Verdict::Cone(_)) {
            continue;
        }
        for probe in lines.iter().filter(|l| !dec.exceptional[i].contains(l)) {
            let r = check_generator_sum(g, probe, &dec.factor_lines[i], &dec.exceptional[i], c.apex())?;
            audit.checks += 1;
            audit.ok &= r.ok;
            if r.sum > audit.worst_sum || audit.checks == 1 {
                audit.worst_sum = r.sum;
                audit.worst_bound = r.bound;
            }
        }
    }
    Ok(audit)
}

pub fn choose_xi(m: usize, n: usize, d: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("xi needs at least one point".into()));
    }
    let nd = n as f64 * d as f64;
    Ok(if 9 * m as u128 <= n as u128 * d as u128 {
        (nd / m as f64).sqrt()
    } else {
        3.0
    })
}

pub fn rhs_st(m: usize, n: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    (m * n).powf(2.0 / 3.0) + m + n
}

pub fn rhs_gk(m: usize, n: usize, s: usize) -> f64 {
    let (m, n, s) = (m as f64, n as f64, s as f64);
    m.sqrt() * n.powf(0.75) + m.powf(2.0 / 3.0) * (n * s).cbrt() + m + n
}

pub fn rhs_main(m: usize, n: usize, d: u32, s: usize) -> f64 {
    let k = n.min(d as usize * d as usize) as f64;
    let (m, n, d, s) = (m as f64, n as f64, d as f64, s as f64);
    (m * n * d).sqrt() + m.powf(2.0 / 3.0) * (k * s).cbrt() + m + n
}

pub fn rhs_planes(m: usize, s: usize, n: usize) -> f64 {
    let (m, s, n) = (m as f64, s as f64, n as f64);
    (m * s).powf(2.0 / 3.0) + m + n
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub s: usize,
    #[serde(rename = "I")]
    pub incidences: usize,
    pub rhs_main: f64,
    pub rhs_st: f64,
    pub rhs_gk: f64,
    pub rhs_planes: f64,
    pub ratio: f64,
    pub xi: Option<f64>,
    pub l0_size: usize,
    pub l1_size: usize,
    pub l0_bound: usize,
    pub incidences_l0: usize,
    pub incidences_l1: usize,
    pub kept_points: usize,
    pub incidences_kept_l1: usize,
    pub rhs_gk_l0: f64,
    pub conical: usize,
    pub claim_max: usize,
    pub claim_bound: usize,
    pub exceptional_max: usize,
    pub generator_sums: GeneratorSumAudit,
}

impl BoundReport {
    /// Every hard invariant checked while building the report holds.
    pub fn invariants_hold(&self) -> bool {
        self.claim_max <= self.claim_bound
            && self.conical <= self.l1_size
            && self.l0_size <= self.l0_bound
            && self.exceptional_max <= 2
            && self.generator_sums.ok
    }
}

/// Runs the full pipeline on a 3-space instance whose lines lie on the surface.
pub fn verify_bound(surface: &Surface, points: &[Vec<Rat>], lines: &[AffLine]) -> Result<BoundReport> {
    if let Some(i) = surface.factors().iter().position(|g| g.degree() == 1) {
        return Err(Error::PlanarComponent(i));
    }
    let dec = decompose_L0(surface, lines)?;
    let (m, n, d) = (points.len(), lines.len(), surface.degree());
    let s = max_lines_per_flat(lines);
    let incidences = count_incidences(points, lines);
    let rhs = rhs_main(m, n, d, s);
    let kept = prune_points(points, &dec);
    let claims = claim_counts(&kept, &dec);
    Ok(BoundReport {
        m,
        n,
        d,
        s,
        incidences,
        rhs_main: rhs,
        rhs_st: rhs_st(m, n),
        rhs_gk: rhs_gk(m, n, s),
        rhs_planes: rhs_planes(m, s, n),
        ratio: if rhs > 0.0 { incidences as f64 / rhs } else { 0.0 },
        xi: choose_xi(m, n, d).ok(),
        l0_size: dec.l0.len(),
        l1_size: dec.l1.len(),
        l0_bound: dec.l0_bound,
        incidences_l0: count_incidences(points, &dec.l0),
        incidences_l1: count_incidences(points, &dec.l1),
        kept_points: kept.len(),
        incidences_kept_l1: count_incidences(&kept, &dec.l1),
        rhs_gk_l0: rhs_gk(m, dec.l0.len(), s),
        conical: conical_incidence_count(points, &dec)?,
        claim_max: claims.into_iter().max().unwrap_or(0),
        claim_bound: 4 * d as usize,
        exceptional_max: dec.exceptional.iter().map(Vec::len).max().unwrap_or(0),
        generator_sums: generator_sum_audit(surface, lines, &dec)?,
    })
}
