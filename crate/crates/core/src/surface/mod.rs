//! Local and global analysis of surfaces `Z(f)` in 3-space.

pub mod classify;
pub mod flecnode;
pub mod lines;

use num_traits::{One, Zero};

use crate::error::{check_arity, Error, Result};
use crate::linalg::kernel;
use crate::linespace::{line_on_surface, AffLine};
use crate::poly::univariate::{order_at_zero, restrict_to_line};
use crate::poly::{gcd, square_free_part, Poly};
use crate::rat::{self, Rat};

pub use classify::{classify_component, ruled_indicator, ClassificationResult, Ruledness, Verdict};
pub use flecnode::flecnode_polynomial;
pub use lines::{
    check_generator_sum, exceptional_lines, find_lines_through_point, lambda_counts, GeneratorCount, GeneratorSumReport,
};

/// A surface given by its irreducible factors; `f` is their product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surface {
    f: Poly,
    factors: Vec<Poly>,
}

impl Surface {
    pub fn new(factors: Vec<Poly>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Domain("a surface needs at least one factor".into()));
        }
        let mut f = Poly::one(3);
        for (i, g) in factors.iter().enumerate() {
            check_arity(3, g.nvars())?;
            if g.degree() < 1 {
                return Err(Error::Domain("constant factor".into()));
            }
            // The product is square-free iff the factors are, and are pairwise coprime.
            if square_free_part(g)?.degree() != g.degree() || factors[..i].iter().any(|h| !gcd(g, h).is_constant()) {
                return Err(Error::Domain("surface polynomial is not square-free".into()));
            }
            f = &f * g;
        }
        Ok(Surface { f, factors })
    }

    pub fn from_poly(f: Poly) -> Result<Self> {
        Surface::new(vec![f])
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn factors(&self) -> &[Poly] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.f.degree() as u32
    }

    fn on_surface(&self, p: &[Rat]) -> Result<()> {
        check_arity(3, p.len())?;
        if self.f.eval(p)?.is_zero() {
            Ok(())
        } else {
            Err(Error::NotOnSurface(format!("f does not vanish at {}", show(p))))
        }
    }

    pub fn is_singular_point(&self, p: &[Rat]) -> Result<bool> {
        self.on_surface(p)?;
        gradient_at(&self.f, p).map(|g| rat::is_zero_vec(&g))
    }

    pub fn multiplicity(&self, p: &[Rat]) -> Result<u32> {
        self.on_surface(p)?;
        Ok(multiplicity_of(&self.f, p))
    }

    /// Lowest nonzero homogeneous part of `f` around `p`.
    pub fn tangent_cone(&self, p: &[Rat]) -> Result<Poly> {
        let mu = self.multiplicity(p)?;
        Ok(self.f.taylor_components(p)?.swap_remove(mu as usize))
    }

    pub fn is_flat_point(&self, p: &[Rat]) -> Result<bool> {
        self.on_surface(p)?;
        is_flat_point_of(&self.f, p)
    }

    pub fn is_singular_line(&self, ln: &AffLine) -> Result<bool> {
        self.contains_line(ln)?;
        Ok(self
            .f
            .gradient()
            .iter()
            .all(|g| restrict_to_line(g, ln.base(), ln.dir()).is_zero()))
    }

    /// Flatness tested at `3D + 1` nonsingular points of the line.
    pub fn is_flat_line(&self, ln: &AffLine) -> Result<bool> {
        self.contains_line(ln)?;
        let d = self.degree() as usize;
        let need = 3 * d + 1;
        // A nonsingular line carries at most D - 1 singular points.
        let budget = need + d;
        let mut found = 0;
        for t in sample_params().take(budget) {
            let p = ln.point_at(&t);
            if rat::is_zero_vec(&gradient_at(&self.f, &p)?) {
                continue;
            }
            if !is_flat_point_of(&self.f, &p)? {
                return Ok(false);
            }
            found += 1;
            if found == need {
                return Ok(true);
            }
        }
        Err(Error::AllSampledPointsSingular)
    }

    fn contains_line(&self, ln: &AffLine) -> Result<()> {
        check_arity(3, ln.dim())?;
        if line_on_surface(&self.f, ln) {
            Ok(())
        } else {
            Err(Error::NotOnSurface(format!("{ln:?} is not contained in the surface")))
        }
    }
}

/// Order of contact of a line with `Z(f)` at a point of the line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Contact {
    Finite(u32),
    Infinite,
}

pub fn intersection_multiplicity_line(f: &Poly, ln: &AffLine, p: &[Rat]) -> Result<Contact> {
    check_arity(f.nvars(), p.len())?;
    check_arity(f.nvars(), ln.dim())?;
    if !ln.contains(p) {
        return Err(Error::Domain(format!("{} is not on the line", show(p))));
    }
    if !f.eval(p)?.is_zero() {
        return Err(Error::Domain(format!("f does not vanish at {}", show(p))));
    }
    Ok(match order_at_zero(&restrict_to_line(f, p, ln.dir())) {
        Some(k) => Contact::Finite(k),
        None => Contact::Infinite,
    })
}

pub(crate) fn gradient_at(f: &Poly, p: &[Rat]) -> Result<Vec<Rat>> {
    f.gradient().iter().map(|g| g.eval(p)).collect()
}

pub(crate) fn multiplicity_of(f: &Poly, p: &[Rat]) -> u32 {
    let parts = f.taylor_components(p).expect("arity checked");
    parts
        .iter()
        .skip(1)
        .position(|g| !g.is_zero())
        .map_or(0, |k| k as u32 + 1)
}

fn hessian_at(f: &Poly, p: &[Rat]) -> Result<Vec<Vec<Rat>>> {
    let n = f.nvars();
    (0..n)
        .map(|i| {
            let fi = f.partial_derivative(i);
            (0..n).map(|j| fi.partial_derivative(j).eval(p)).collect()
        })
        .collect()
}

fn quad(h: &[Vec<Rat>], u: &[Rat], w: &[Rat]) -> Rat {
    let mut s = Rat::zero();
    for (i, row) in h.iter().enumerate() {
        s += &u[i] * rat::dot(row, w);
    }
    s
}

/// Rational basis of the tangent plane at a nonsingular point.
pub(crate) fn tangent_basis(grad: &[Rat]) -> Vec<Vec<Rat>> {
    kernel(&[grad.to_vec()], grad.len())
}

fn is_flat_point_of(f: &Poly, p: &[Rat]) -> Result<bool> {
    let g = gradient_at(f, p)?;
    if rat::is_zero_vec(&g) {
        return Err(Error::SingularPoint);
    }
    let h = hessian_at(f, p)?;
    let b = tangent_basis(&g);
    for i in 0..b.len() {
        for j in i..b.len() {
            if !quad(&h, &b[i], &b[j]).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The parameters `0, 1, -1, 2, -2, ...`.
pub fn sample_params() -> impl Iterator<Item = Rat> {
    (0i64..).map(|k| {
        if k % 2 == 1 {
            rat::int((k + 1) / 2)
        } else {
            rat::int(-k / 2)
        }
    })
}

pub(crate) fn show(p: &[Rat]) -> String {
    let s: Vec<String> = p.iter().map(rat::to_string).collect();
    format!("({})", s.join(", "))
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}
