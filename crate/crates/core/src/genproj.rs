//! Generic projections `R^d -> R^(d-1)` applied until the instance lives in 3-space.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{check_arity, Error, Result};
use crate::incidence::count_incidences;
use crate::linespace::{coplanar_triple, AffLine};
use crate::rat::{self, Rat};

/// Attempts per step before giving up.
pub const MAX_RESAMPLES: usize = 32;
const ENTRY_RANGE: i64 = 10_000;

/// Orthogonal projection onto `w⊥`, written in the coordinates that remain
/// after dropping the first coordinate where `w` is nonzero.
pub fn project_vector(v: &[Rat], w: &[Rat]) -> Vec<Rat> {
    let k = w.iter().position(|x| !x.is_zero()).expect("nonzero direction");
    let c = rat::dot(v, w) / rat::dot(w, w);
    v.iter()
        .zip(w)
        .enumerate()
        .filter(|(i, _)| *i != k)
        .map(|(_, (x, y))| x - &c * y)
        .collect()
}

pub fn project_once(points: &[Vec<Rat>], lines: &[AffLine], w: &[Rat]) -> Result<(Vec<Vec<Rat>>, Vec<AffLine>)> {
    if rat::is_zero_vec(w) {
        return Err(Error::Domain("projection direction is zero".into()));
    }
    for p in points {
        check_arity(w.len(), p.len())?;
    }
    let pts = points.iter().map(|p| project_vector(p, w)).collect();
    let mut out = Vec::with_capacity(lines.len());
    for l in lines {
        check_arity(w.len(), l.dim())?;
        let dir = project_vector(l.dir(), w);
        if rat::is_zero_vec(&dir) {
            return Err(Error::Collapse);
        }
        out.push(AffLine::new(project_vector(l.base(), w), dir)?);
    }
    Ok((pts, out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityCertificate {
    pub d_from: usize,
    pub w: Vec<String>,
    pub points_distinct: bool,
    pub lines_distinct: bool,
    pub noncoplanar_triples_preserved: bool,
    pub incidences_preserved: bool,
    pub resamples_used: usize,
}

impl GenericityCertificate {
    pub fn is_valid(&self) -> bool {
        self.points_distinct && self.lines_distinct && self.noncoplanar_triples_preserved && self.incidences_preserved
    }
}

fn all_distinct<T: Ord + Clone>(items: &[T]) -> bool {
    let mut v = items.to_vec();
    v.sort();
    v.windows(2).all(|p| p[0] != p[1])
}

fn noncoplanar_triples(lines: &[AffLine]) -> Result<Vec<[usize; 3]>> {
    let mut out = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            for k in j + 1..lines.len() {
                if !coplanar_triple(&lines[i], &lines[j], &lines[k])? {
                    out.push([i, j, k]);
                }
            }
        }
    }
    Ok(out)
}

/// Projected points and lines.
type Image = (Vec<Vec<Rat>>, Vec<AffLine>);

fn certify(
    w: &[Rat],
    points: &[Vec<Rat>],
    lines: &[AffLine],
    triples: &[[usize; 3]],
) -> Result<(GenericityCertificate, Option<Image>)> {
    let mut cert = GenericityCertificate {
        d_from: w.len(),
        w: w.iter().map(rat::to_string).collect(),
        points_distinct: false,
        lines_distinct: false,
        noncoplanar_triples_preserved: false,
        incidences_preserved: false,
        resamples_used: 0,
    };
    let (pts, ls) = match project_once(points, lines, w) {
        Ok(x) => x,
        Err(Error::Collapse) => return Ok((cert, None)),
        Err(e) => return Err(e),
    };
    cert.points_distinct = all_distinct(&pts);
    cert.lines_distinct = all_distinct(&ls);
    cert.noncoplanar_triples_preserved = true;
    for t in triples {
        if coplanar_triple(&ls[t[0]], &ls[t[1]], &ls[t[2]])? {
            cert.noncoplanar_triples_preserved = false;
            break;
        }
    }
    cert.incidences_preserved = count_incidences(&pts, &ls) == count_incidences(points, lines);
    Ok((cert, Some((pts, ls))))
}

/// Exact genericity checks for projecting along `w`.
pub fn is_generic(w: &[Rat], points: &[Vec<Rat>], lines: &[AffLine]) -> Result<GenericityCertificate> {
    let triples = noncoplanar_triples(lines)?;
    Ok(certify(w, points, lines, &triples)?.0)
}

fn random_direction(rng: &mut ChaCha8Rng, d: usize) -> Vec<Rat> {
    loop {
        let w: Vec<Rat> = (0..d)
            .map(|_| {
                let n = rng.gen_range(-ENTRY_RANGE..=ENTRY_RANGE);
                let den = rng.gen_range(1..=ENTRY_RANGE);
                Rat::new(BigInt::from(n), BigInt::from(den))
            })
            .collect();
        if !rat::is_zero_vec(&w) {
            return w;
        }
    }
}

#[derive(Clone, Debug)]
pub struct Projected {
    pub points: Vec<Vec<Rat>>,
    pub lines: Vec<AffLine>,
    pub certificates: Vec<GenericityCertificate>,
}

/// Projects one dimension at a time with seeded random directions, resampling
/// until each step is certified generic.
pub fn project_to_3space(points: &[Vec<Rat>], lines: &[AffLine], seed: u64) -> Result<Projected> {
    let d = points
        .first()
        .map(Vec::len)
        .or_else(|| lines.first().map(AffLine::dim))
        .unwrap_or(3);
    if d < 3 {
        return Err(Error::Domain(format!("ambient dimension {d} is below 3")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = Projected {
        points: points.to_vec(),
        lines: lines.to_vec(),
        certificates: Vec::new(),
    };
    for dim in (4..=d).rev() {
        let triples = noncoplanar_triples(&cur.lines)?;
        let mut done = false;
        for attempt in 0..MAX_RESAMPLES {
            let w = random_direction(&mut rng, dim);
            let (mut cert, image) = certify(&w, &cur.points, &cur.lines, &triples)?;
            if let (true, Some((pts, ls))) = (cert.is_valid(), image) {
                cert.resamples_used = attempt;
                cur.points = pts;
                cur.lines = ls;
                cur.certificates.push(cert);
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::ResampleExhausted(MAX_RESAMPLES));
        }
    }
    Ok(cur)
}
