//! Deterministic generators for surfaces, line families and point placements.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::det;
use crate::linespace::AffLine;
use crate::poly::Poly;
use crate::rat::{self, Rat};
use crate::surface::Surface;

/// Pythagorean parameters are drawn from `1..=PYTHAGOREAN_RANGE`.
const PYTHAGOREAN_RANGE: i64 = 40;
/// Per-family cap on enumerated generators.
const FAMILY_CAP: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Cone,
    Regulus,
    Whitney,
    Sphere,
    FermatCubic,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Cone => "cone",
            Kind::Regulus => "regulus",
            Kind::Whitney => "whitney",
            Kind::Sphere => "sphere",
            Kind::FermatCubic => "fermat",
        }
    }

    fn source(self) -> &'static str {
        match self {
            Kind::Cone => "x^2 + y^2 - z^2",
            Kind::Regulus => "z - x*y",
            Kind::Whitney => "x^2 - y^2*z",
            Kind::Sphere => "x^2 + y^2 + z^2 - 1",
            Kind::FermatCubic => "x^3 + y^3 + z^3 - 1",
        }
    }

    pub fn polynomial(self) -> Poly {
        Poly::parse(self.source(), &["x", "y", "z"]).expect("built-in surface parses")
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "cone" => Kind::Cone,
            "regulus" => Kind::Regulus,
            "whitney" => Kind::Whitney,
            "sphere" => Kind::Sphere,
            "fermat" | "fermatcubic" | "fermat_cubic" => Kind::FermatCubic,
            other => return Err(Error::Parse(format!("unknown surface kind `{other}`"))),
        })
    }
}

/// A canonical surface, optionally translated so its origin moves to `offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub kind: Kind,
    pub offset: [i64; 3],
}

impl Component {
    pub fn new(kind: Kind) -> Self {
        Component { kind, offset: [0; 3] }
    }

    fn offset_rat(&self) -> Vec<Rat> {
        rat::ints(&self.offset)
    }

    pub fn polynomial(&self) -> Poly {
        let neg: Vec<Rat> = self.offset.iter().map(|&o| rat::int(-o)).collect();
        self.kind.polynomial().shift(&neg).expect("three coordinates")
    }

    /// The apex of a cone component.
    pub fn apex(&self) -> Option<Vec<Rat>> {
        (self.kind == Kind::Cone).then(|| self.offset_rat())
    }

    fn translate(&self, l: AffLine) -> AffLine {
        let base: Vec<Rat> = l.base().iter().zip(self.offset_rat()).map(|(b, o)| b + o).collect();
        AffLine::new(base, l.dir().to_vec()).expect("direction unchanged")
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        if self.offset != [0; 3] {
            write!(f, "@({},{},{})", self.offset[0], self.offset[1], self.offset[2])?;
        }
        Ok(())
    }
}

/// One kind or a product of kinds: `cone`, `product:cone,regulus@(1,1,0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceSpec {
    pub components: Vec<Component>,
}

impl SurfaceSpec {
    pub fn single(kind: Kind) -> Self {
        SurfaceSpec {
            components: vec![Component::new(kind)],
        }
    }

    pub fn is_product(&self) -> bool {
        self.components.len() > 1
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_component(s: &str) -> Result<Component> {
    let Some((kind, off)) = s.split_once('@') else {
        return Ok(Component::new(s.parse()?));
    };
    let inner = off.trim().trim_start_matches('(').trim_end_matches(')');
    let coords: Vec<i64> = inner
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad offset `{off}`")))
        })
        .collect::<Result<_>>()?;
    let offset: [i64; 3] = coords
        .try_into()
        .map_err(|_| Error::Parse(format!("offset `{off}` needs three integers")))?;
    Ok(Component {
        kind: kind.parse()?,
        offset,
    })
}

impl FromStr for SurfaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s.strip_prefix("product:").unwrap_or(s);
        let components: Vec<Component> = split_top_level(body)
            .into_iter()
            .map(parse_component)
            .collect::<Result<_>>()?;
        if components.is_empty() {
            return Err(Error::Parse("empty surface specification".into()));
        }
        Ok(SurfaceSpec { components })
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        if self.is_product() {
            write!(f, "product:{}", parts.join(","))
        } else {
            write!(f, "{}", parts[0])
        }
    }
}

pub fn make_surface(spec: &SurfaceSpec) -> Result<Surface> {
    Surface::new(spec.components.iter().map(Component::polynomial).collect())
}

/// `0, 1, -1, 2, -2, ...`
fn signed_sequence() -> impl Iterator<Item = i64> {
    (0i64..).map(|k| if k % 2 == 1 { (k + 1) / 2 } else { -k / 2 })
}

fn line(base: [i64; 3], dir: [i64; 3]) -> AffLine {
    AffLine::new(rat::ints(&base), rat::ints(&dir)).expect("nonzero direction")
}

fn cone_directions(seed: u64) -> Vec<[i64; 3]> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in 0..=PYTHAGOREAN_RANGE {
        for b in 0..=a {
            if a == 0 || a.gcd(&b) != 1 {
                continue;
            }
            let (x, y, z) = (a * a - b * b, 2 * a * b, a * a + b * b);
            for (u, v) in [(x, y), (y, x)] {
                for (su, sv) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let d = [su * u, sv * v, z];
                    let g = d.iter().fold(0i64, |acc, c| acc.gcd(c));
                    let d = d.map(|c| c / g);
                    if seen.insert(d) {
                        out.push(d);
                    }
                }
            }
        }
    }
    out.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    out
}

fn family(kind: Kind, seed: u64, with_axis: bool) -> Vec<AffLine> {
    match kind {
        Kind::Cone => cone_directions(seed).into_iter().map(|d| line([0, 0, 0], d)).collect(),
        Kind::Regulus => signed_sequence()
            .take(FAMILY_CAP / 2)
            .flat_map(|c| [line([0, c, 0], [1, 0, c]), line([c, 0, 0], [0, 1, c])])
            .collect(),
        Kind::Whitney => {
            let axis = with_axis.then(|| line([0, 0, 0], [0, 0, 1]));
            axis.into_iter()
                .chain(
                    signed_sequence()
                        .skip(1)
                        .take(FAMILY_CAP)
                        .map(|c| line([0, 0, c * c], [c, 1, 0])),
                )
                .collect()
        }
        Kind::Sphere | Kind::FermatCubic => Vec::new(),
    }
}

/// `count` distinct lines on the surface, drawn round-robin from the
/// components' families. The Whitney z-axis is included when `with_axis`.
pub fn make_lines(spec: &SurfaceSpec, count: usize, seed: u64, with_axis: bool) -> Result<Vec<AffLine>> {
    let mut families: Vec<std::vec::IntoIter<AffLine>> = spec
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let lines: Vec<AffLine> = family(c.kind, seed.wrapping_add(i as u64), with_axis)
                .into_iter()
                .map(|l| c.translate(l))
                .collect();
            lines.into_iter()
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    let mut live = families.len();
    while out.len() < count && live > 0 {
        live = 0;
        for fam in families.iter_mut() {
            if out.len() == count {
                break;
            }
            for l in fam.by_ref() {
                if seen.insert(l.clone()) {
                    out.push(l);
                    live += 1;
                    break;
                }
            }
        }
    }
    let all_empty = spec
        .components
        .iter()
        .all(|c| matches!(c.kind, Kind::Sphere | Kind::FermatCubic));
    if out.len() < count && !all_empty {
        return Err(Error::GenerationExhausted(format!(
            "only {} distinct lines available for {spec}",
            out.len()
        )));
    }
    Ok(out)
}

/// Places `per_line` points on every line: the first half at the parameters
/// `0, 1, -1, ...`, the rest at seeded random rationals. Points listed in
/// `exclude` are skipped; shared points are kept once.
pub fn place_points(lines: &[AffLine], per_line: usize, seed: u64, exclude: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let fixed = per_line.div_ceil(2);
    for l in lines {
        let mut params = BTreeSet::new();
        let mut canonical = signed_sequence();
        while params.len() < per_line {
            let t = if params.len() < fixed {
                rat::int(canonical.next().unwrap())
            } else {
                let n = rng.gen_range(-50i64..=50);
                let d = rng.gen_range(1i64..=7);
                rat::rat(n, d)
            };
            let p = l.point_at(&t);
            if exclude.contains(&p) || !params.insert(t) {
                continue;
            }
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
    }
    out
}

/// Embeds a 3-space instance in `R^dim` and applies a seeded invertible
/// integer affine map.
pub fn lift_to_dim(
    points: &[Vec<Rat>],
    lines: &[AffLine],
    dim: usize,
    seed: u64,
) -> Result<(Vec<Vec<Rat>>, Vec<AffLine>)> {
    if dim < 4 {
        return Err(Error::Domain(format!("lift target {dim} must be at least 4")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = loop {
        let m: Vec<Vec<Rat>> = (0..dim)
            .map(|_| (0..dim).map(|_| rat::int(rng.gen_range(-3i64..=3))).collect())
            .collect();
        if !det(&m).is_zero() {
            break m;
        }
    };
    let b: Vec<Rat> = (0..dim).map(|_| rat::int(rng.gen_range(-5i64..=5))).collect();
    let pad = |v: &[Rat]| -> Vec<Rat> {
        let mut w = v.to_vec();
        w.resize(dim, Rat::zero());
        w
    };
    let apply = |v: &[Rat]| -> Vec<Rat> { a.iter().map(|row| rat::dot(row, &pad(v))).collect() };
    let pts = points
        .iter()
        .map(|p| apply(p).into_iter().zip(&b).map(|(x, y)| x + y).collect())
        .collect();
    let ls = lines
        .iter()
        .map(|l| {
            let base: Vec<Rat> = apply(l.base()).into_iter().zip(&b).map(|(x, y)| x + y).collect();
            AffLine::new(base, apply(l.dir()))
        })
        .collect::<Result<_>>()?;
    Ok((pts, ls))
}

/// A full generated instance description.
#[derive(Clone, Debug)]
pub struct InstanceSpec {
    pub surface: SurfaceSpec,
    pub line_count: usize,
    pub points_per_line: usize,
    pub seed: u64,
    pub dim: usize,
    pub with_axis: bool,
    pub include_apex: bool,
}

/// Points, lines and the surface for a spec; lifted when `dim > 3`.
pub fn generate(spec: &InstanceSpec) -> Result<(Surface, Vec<Vec<Rat>>, Vec<AffLine>)> {
    let surface = make_surface(&spec.surface)?;
    let lines = make_lines(&spec.surface, spec.line_count, spec.seed, spec.with_axis)?;
    let exclude: Vec<Vec<Rat>> = if spec.include_apex {
        Vec::new()
    } else {
        spec.surface.components.iter().filter_map(Component::apex).collect()
    };
    let mut points = place_points(&lines, spec.points_per_line, spec.seed, &exclude);
    if spec.include_apex {
        for a in spec.surface.components.iter().filter_map(Component::apex) {
            if !points.contains(&a) {
                points.push(a);
            }
        }
    }
    if spec.dim > 3 {
        let (p, l) = lift_to_dim(&points, &lines, spec.dim, spec.seed)?;
        return Ok((surface, p, l));
    }
    Ok((surface, points, lines))
}
