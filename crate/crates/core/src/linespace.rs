//! Points, lines and flats in affine and projective space; Plücker coordinates.
//!
//! Projective coordinates put the homogenizing coordinate first, so the
//! affine point `a` is `(1, a)`. With that convention the first three Plücker
//! coordinates of an affine line are its direction and the last three its
//! moment `base × dir`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{check_arity, Error, Result};
use crate::linalg::{rank, rref};
use crate::poly::univariate::restrict_to_line;
use crate::poly::Poly;
use crate::rat::{self, Rat};

/// A projective point, stored scaled so its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<Rat>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Rat>) -> Result<Self> {
        if rat::is_zero_vec(&coords) {
            return Err(Error::Domain("projective point with all coordinates zero".into()));
        }
        Ok(ProjPoint {
            coords: rat::normalize_first(&coords),
        })
    }

    pub fn from_affine(a: &[Rat]) -> Self {
        let mut c = Vec::with_capacity(a.len() + 1);
        c.push(Rat::one());
        c.extend_from_slice(a);
        ProjPoint { coords: c }
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    /// Affine coordinates, or `None` for a point at infinity.
    pub fn to_affine(&self) -> Option<Vec<Rat>> {
        let w = &self.coords[0];
        if w.is_zero() {
            return None;
        }
        Some(self.coords[1..].iter().map(|x| x / w).collect())
    }
}

/// A line of projective 3-space with its two defining points and Plücker vector
/// `(p01, p02, p03, p23, p31, p12)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluckerLine {
    pub p: ProjPoint,
    pub q: ProjPoint,
    pub pl: [Rat; 6],
}

impl PluckerLine {
    pub fn dvec(&self) -> [Rat; 3] {
        [self.pl[0].clone(), self.pl[1].clone(), self.pl[2].clone()]
    }

    pub fn mvec(&self) -> [Rat; 3] {
        [self.pl[3].clone(), self.pl[4].clone(), self.pl[5].clone()]
    }
}

pub fn plucker_from_points(x: &ProjPoint, y: &ProjPoint) -> Result<PluckerLine> {
    check_arity(4, x.coords.len())?;
    check_arity(4, y.coords.len())?;
    let (a, b) = (&x.coords, &y.coords);
    let pi = |i: usize, j: usize| &a[i] * &b[j] - &a[j] * &b[i];
    let pl = [pi(0, 1), pi(0, 2), pi(0, 3), pi(2, 3), pi(3, 1), pi(1, 2)];
    if rat::is_zero_vec(&pl) {
        return Err(Error::DegenerateLine);
    }
    Ok(PluckerLine {
        p: x.clone(),
        q: y.clone(),
        pl,
    })
}

/// `p01 p23 + p02 p31 + p03 p12`, zero exactly on the Klein quadric.
pub fn klein_form(pl: &[Rat; 6]) -> Rat {
    &pl[0] * &pl[3] + &pl[1] * &pl[4] + &pl[2] * &pl[5]
}

/// Hyperplane `A_0 x_0 + ... + A_d x_d = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlatH {
    coeffs: Vec<Rat>,
}

impl FlatH {
    pub fn new(coeffs: Vec<Rat>) -> Result<Self> {
        if rat::is_zero_vec(&coeffs) {
            return Err(Error::Domain("hyperplane with all coefficients zero".into()));
        }
        Ok(FlatH {
            coeffs: rat::normalize_first(&coeffs),
        })
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn eval(&self, p: &ProjPoint) -> Rat {
        rat::dot(&self.coeffs, &p.coords)
    }
}

fn cross(a: &[Rat; 3], b: &[Rat; 3]) -> [Rat; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Intersection of a plane and a line in projective 3-space:
/// `(A·d, A×m − A_0 d)` with `A = (A_1, A_2, A_3)`.
pub fn plane_line_intersection(pi: &FlatH, ln: &PluckerLine) -> Result<ProjPoint> {
    check_arity(4, pi.coeffs.len())?;
    let a0 = &pi.coeffs[0];
    let a = [pi.coeffs[1].clone(), pi.coeffs[2].clone(), pi.coeffs[3].clone()];
    let d = ln.dvec();
    let m = ln.mvec();
    let axm = cross(&a, &m);
    let first = rat::dot(&a, &d);
    let rest: Vec<Rat> = (0..3).map(|i| &axm[i] - a0 * &d[i]).collect();
    let mut coords = vec![first];
    coords.extend(rest);
    if rat::is_zero_vec(&coords) {
        return Err(Error::Contained);
    }
    ProjPoint::new(coords)
}

/// An affine line `base + t * dir`, stored canonically: `dir` has first nonzero
/// entry 1 and `base` is zero in that pivot coordinate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffLine {
    base: Vec<Rat>,
    dir: Vec<Rat>,
}

impl fmt::Debug for AffLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Rat]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "AffLine[({}) + t({})]", show(&self.base), show(&self.dir))
    }
}

impl AffLine {
    pub fn new(base: Vec<Rat>, dir: Vec<Rat>) -> Result<Self> {
        check_arity(base.len(), dir.len())?;
        let Some(k) = dir.iter().position(|x| !x.is_zero()) else {
            return Err(Error::Domain("line direction is zero".into()));
        };
        let dir = rat::normalize_first(&dir);
        let shift = base[k].clone();
        let base = base.iter().zip(&dir).map(|(b, d)| b - &shift * d).collect();
        Ok(AffLine { base, dir })
    }

    pub fn through(a: &[Rat], b: &[Rat]) -> Result<Self> {
        check_arity(a.len(), b.len())?;
        let dir: Vec<Rat> = b.iter().zip(a).map(|(x, y)| x - y).collect();
        if rat::is_zero_vec(&dir) {
            return Err(Error::DegenerateLine);
        }
        AffLine::new(a.to_vec(), dir)
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[Rat] {
        &self.base
    }

    pub fn dir(&self) -> &[Rat] {
        &self.dir
    }

    fn pivot(&self) -> usize {
        self.dir.iter().position(|x| !x.is_zero()).unwrap()
    }

    pub fn point_at(&self, t: &Rat) -> Vec<Rat> {
        self.base.iter().zip(&self.dir).map(|(b, d)| b + t * d).collect()
    }

    /// Parameter of a point known to lie on the line.
    pub fn param_of(&self, p: &[Rat]) -> Rat {
        p[self.pivot()].clone()
    }

    pub fn to_plucker(&self) -> Result<PluckerLine> {
        let a = ProjPoint::from_affine(&self.base);
        let b = ProjPoint::from_affine(&self.point_at(&Rat::one()));
        plucker_from_points(&a, &b)
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        let t = self.param_of(p);
        p.iter()
            .zip(self.base.iter().zip(&self.dir))
            .all(|(x, (b, d))| *x == b + &t * d)
    }
}

pub fn incidence_point_line(p: &[Rat], ln: &AffLine) -> Result<bool> {
    check_arity(ln.dim(), p.len())?;
    Ok(ln.contains(p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineRelation {
    Equal,
    Parallel,
    Intersecting(Vec<Rat>),
    Skew,
}

impl LineRelation {
    /// Coplanar in the affine sense (parallel lines count).
    pub fn is_coplanar(&self) -> bool {
        !matches!(self, LineRelation::Skew)
    }
}

pub fn line_relation(l1: &AffLine, l2: &AffLine) -> Result<LineRelation> {
    check_arity(l1.dim(), l2.dim())?;
    if l1.dir == l2.dir {
        return Ok(if l1.contains(&l2.base) {
            LineRelation::Equal
        } else {
            LineRelation::Parallel
        });
    }
    // Solve base1 + s dir1 = base2 + t dir2 from a nonsingular 2x2 minor.
    let n = l1.dim();
    let rhs: Vec<Rat> = l2.base.iter().zip(&l1.base).map(|(a, b)| a - b).collect();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b, c, d) = (&l1.dir[i], -&l2.dir[i], &l1.dir[j], -&l2.dir[j]);
            let det = a * &d - &b * c;
            if det.is_zero() {
                continue;
            }
            let s = (&rhs[i] * &d - &b * &rhs[j]) / &det;
            let p = l1.point_at(&s);
            return Ok(if l2.contains(&p) {
                LineRelation::Intersecting(p)
            } else {
                LineRelation::Skew
            });
        }
    }
    unreachable!("non-parallel directions have a nonsingular minor")
}

/// All three lines lie in one 2-flat.
pub fn coplanar_triple(l1: &AffLine, l2: &AffLine, l3: &AffLine) -> Result<bool> {
    check_arity(l1.dim(), l2.dim())?;
    check_arity(l1.dim(), l3.dim())?;
    let diff = |a: &[Rat], b: &[Rat]| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<Rat>>();
    let vecs = vec![
        l1.dir.clone(),
        l2.dir.clone(),
        l3.dir.clone(),
        diff(&l2.base, &l1.base),
        diff(&l3.base, &l1.base),
    ];
    Ok(rank(&vecs) <= 2)
}

/// `f(base + t dir)` vanishes identically.
pub fn line_on_surface(f: &Poly, ln: &AffLine) -> bool {
    f.nvars() == ln.dim() && restrict_to_line(f, &ln.base, &ln.dir).is_zero()
}

/// A 2-flat in canonical form: reduced echelon basis of its directions and the
/// unique point that vanishes on the pivot coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flat2 {
    basis: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
    point: Vec<Rat>,
}

impl Flat2 {
    /// The flat spanned by two distinct coplanar lines.
    pub fn spanned_by(l1: &AffLine, l2: &AffLine) -> Option<Flat2> {
        let other = match line_relation(l1, l2).ok()? {
            LineRelation::Intersecting(_) => l2.dir.clone(),
            LineRelation::Parallel => l2.base.iter().zip(&l1.base).map(|(a, b)| a - b).collect(),
            _ => return None,
        };
        let (basis, pivots) = rref(&[l1.dir.clone(), other]);
        if basis.len() != 2 {
            return None;
        }
        let mut point = l1.base.clone();
        for (row, &p) in basis.iter().zip(&pivots) {
            let c = point[p].clone();
            for (x, r) in point.iter_mut().zip(row) {
                *x -= &c * r;
            }
        }
        Some(Flat2 { basis, pivots, point })
    }

    pub fn contains_point(&self, p: &[Rat]) -> bool {
        let mut q: Vec<Rat> = p.iter().zip(&self.point).map(|(a, b)| a - b).collect();
        for (row, &piv) in self.basis.iter().zip(&self.pivots) {
            let c = q[piv].clone();
            for (x, r) in q.iter_mut().zip(row) {
                *x -= &c * r;
            }
        }
        rat::is_zero_vec(&q)
    }

    pub fn contains_line(&self, l: &AffLine) -> bool {
        let tip = l.point_at(&Rat::one());
        self.contains_point(&l.base) && self.contains_point(&tip)
    }
}
