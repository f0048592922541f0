//! Instance files and report serialization.
//!
//! An instance is a JSON object:
//!
//! ```json
//! {"dim": 3,
//!  "surface": {"vars": ["x","y","z"], "factors": [{"terms": [{"n": 1, "d": 1, "e": [2,0,0]}]}]},
//!  "points": [["0/1","1/2","3/1"]],
//!  "lines": [{"base": ["0/1","0/1","0/1"], "dir": ["3/1","4/1","5/1"]}]}
//! ```

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linespace::AffLine;
use crate::poly::Poly;
use crate::rat::{self, Rat};
use crate::surface::Surface;

#[derive(Clone, Debug)]
pub struct Instance {
    pub dim: usize,
    pub surface: Surface,
    pub points: Vec<Vec<Rat>>,
    pub lines: Vec<AffLine>,
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    n: i64,
    d: i64,
    e: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct FactorFile {
    terms: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
struct SurfaceFile {
    vars: Vec<String>,
    factors: Vec<FactorFile>,
}

#[derive(Serialize, Deserialize)]
struct LineFile {
    base: Vec<String>,
    dir: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    dim: usize,
    surface: SurfaceFile,
    points: Vec<Vec<String>>,
    lines: Vec<LineFile>,
}

fn rats(v: &[String]) -> Result<Vec<Rat>> {
    v.iter().map(|s| rat::parse(s)).collect()
}

fn strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat::to_string).collect()
}

fn small(x: &num_bigint::BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Domain(format!("coefficient {x} does not fit the instance format")))
}

fn factor_to_file(g: &Poly) -> Result<FactorFile> {
    let terms = g
        .terms()
        .map(|(e, c)| {
            Ok(TermFile {
                n: small(c.numer())?,
                d: small(c.denom())?,
                e: e.to_vec(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(FactorFile { terms })
}

fn factor_from_file(f: &FactorFile) -> Result<Poly> {
    let mut terms = Vec::with_capacity(f.terms.len());
    for t in &f.terms {
        if t.d == 0 {
            return Err(Error::Parse("zero denominator in a term".into()));
        }
        if t.e.len() != 3 {
            return Err(Error::Parse(format!(
                "exponent vector of length {} (expected 3)",
                t.e.len()
            )));
        }
        terms.push((t.e.clone(), rat::rat(t.n, t.d)));
    }
    Ok(Poly::from_terms(3, terms))
}

impl Instance {
    pub fn from_json(src: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
        if file.surface.vars.len() != 3 {
            return Err(Error::Parse("the surface must have three variables".into()));
        }
        let factors = file
            .surface
            .factors
            .iter()
            .map(factor_from_file)
            .collect::<Result<_>>()?;
        let surface = Surface::new(factors)?;
        let points: Vec<Vec<Rat>> = file.points.iter().map(|p| rats(p)).collect::<Result<_>>()?;
        let lines: Vec<AffLine> = file
            .lines
            .iter()
            .map(|l| AffLine::new(rats(&l.base)?, rats(&l.dir)?))
            .collect::<Result<_>>()?;
        let inst = Instance {
            dim: file.dim,
            surface,
            points,
            lines,
        };
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<()> {
        if self.dim < 3 {
            return Err(Error::Parse(format!("dimension {} is below 3", self.dim)));
        }
        if self.points.iter().any(|p| p.len() != self.dim) || self.lines.iter().any(|l| l.dim() != self.dim) {
            return Err(Error::Parse(format!("coordinates do not match dim = {}", self.dim)));
        }
        let mut p = self.points.clone();
        p.sort();
        p.dedup();
        let mut l = self.lines.clone();
        l.sort();
        l.dedup();
        if p.len() != self.points.len() || l.len() != self.lines.len() {
            return Err(Error::Parse("duplicate points or lines".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let file = InstanceFile {
            dim: self.dim,
            surface: SurfaceFile {
                vars: ["x", "y", "z"].map(String::from).to_vec(),
                factors: self
                    .surface
                    .factors()
                    .iter()
                    .map(factor_to_file)
                    .collect::<Result<_>>()?,
            },
            points: self.points.iter().map(|p| strings(p)).collect(),
            lines: self
                .lines
                .iter()
                .map(|l| LineFile {
                    base: strings(l.base()),
                    dir: strings(l.dir()),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).map_err(|e| Error::Parse(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

/// Rounds every float in a JSON tree to 15 significant digits.
pub fn round_reals(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(0.0);
            let r: f64 = format!("{x:.14e}").parse().unwrap_or(x);
            *v = serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number);
        }
        Value::Array(a) => a.iter_mut().for_each(round_reals),
        Value::Object(o) => o.values_mut().for_each(round_reals),
        _ => {}
    }
}

/// Pretty JSON with reals at 15 significant digits.
pub fn report_json<T: Serialize>(report: &T) -> Result<String> {
    let mut v = serde_json::to_value(report).map_err(|e| Error::Parse(e.to_string()))?;
    round_reals(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn rat_strings(v: &[Rat]) -> Vec<String> {
    strings(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ints;

    #[test]
    fn round_trip() {
        let f = Poly::parse("x^2 + y^2 - z^2", &["x", "y", "z"]).unwrap();
        let inst = Instance {
            dim: 3,
            surface: Surface::from_poly(f).unwrap(),
            points: vec![ints(&[3, 4, 5]), vec![rat::rat(3, 2), rat::int(2), rat::rat(5, 2)]],
            lines: vec![AffLine::new(ints(&[0, 0, 0]), ints(&[3, 4, 5])).unwrap()],
        };
        let text = inst.to_json().unwrap();
        let back = Instance::from_json(&text).unwrap();
        assert_eq!(back.points, inst.points);
        assert_eq!(back.lines, inst.lines);
        assert_eq!(back.surface, inst.surface);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Instance::from_json("{"), Err(Error::Parse(_))));
        let bad = r#"{"dim":3,"surface":{"vars":["x","y","z"],"factors":[{"terms":[{"n":1,"d":1,"e":[1,0,0]}]}]},
                     "points":[["1/0","0","0"]],"lines":[]}"#;
        assert!(matches!(Instance::from_json(bad), Err(Error::Parse(_))));
    }

    #[test]
    fn rounding() {
        let mut v = serde_json::json!({"a": 0.1 + 0.2, "b": [1.0 / 3.0], "c": 7});
        round_reals(&mut v);
        assert_eq!(v["a"].as_f64().unwrap(), 0.3);
        assert_eq!(v["c"], 7);
    }
}
