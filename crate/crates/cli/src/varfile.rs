//! Line-oriented variety files:
//!
//! ```text
//! # comment
//! vars: x, y
//! poly: y^2 - x^2 - x^3
//! point: 0, 0
//! dim: 1
//! ```
//!
//! `poly:` may repeat; `point:` defaults to the origin and `dim:` is
//! optional (checked against the Gröbner dimension when given).

use std::path::Path;

use anyhow::{bail, Context, Result};
use jetfiber::jets::VarietySpec;
use jetfiber::{parse_polynomial, Domain, MonomialOrder, Rational, Ring};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarietyFile {
    pub vars: Vec<String>,
    pub polys: Vec<String>,
    pub point: Option<Vec<String>>,
    pub dim: Option<i64>,
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}

impl VarietyFile {
    pub fn parse(text: &str) -> Result<VarietyFile> {
        let mut out = VarietyFile::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once(':').with_context(|| format!("line {}: expected `key: value`", lineno + 1))?;
            let value = value.trim();
            match key.trim() {
                "vars" => {
                    if !out.vars.is_empty() {
                        bail!("line {}: `vars:` given twice", lineno + 1);
                    }
                    out.vars = split_list(value);
                }
                "poly" => out.polys.push(value.to_string()),
                "point" => out.point = Some(split_list(value)),
                "dim" => {
                    out.dim = Some(value.parse().with_context(|| format!("line {}: bad dimension `{value}`", lineno + 1))?)
                }
                other => bail!("line {}: unknown stanza `{other}`", lineno + 1),
            }
        }
        if out.vars.is_empty() {
            bail!("missing `vars:` stanza");
        }
        if out.polys.is_empty() {
            bail!("missing `poly:` stanza");
        }
        Ok(out)
    }

    pub fn read(path: &Path) -> Result<VarietyFile> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        VarietyFile::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_spec(&self) -> Result<VarietySpec> {
        let ring = Ring::new(self.vars.clone(), Domain::Rational, MonomialOrder::GrevLex)?;
        let polys = self
            .polys
            .iter()
            .map(|p| parse_polynomial(p, &ring).with_context(|| format!("bad polynomial `{p}`")))
            .collect::<Result<Vec<_>>>()?;
        let point = match &self.point {
            Some(pt) if pt.len() != self.vars.len() => {
                bail!("point has {} coordinates for {} variables", pt.len(), self.vars.len())
            }
            Some(pt) => Some(
                pt.iter()
                    .map(|c| c.parse::<Rational>().with_context(|| format!("bad coordinate `{c}`")))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        Ok(VarietySpec::new(&ring, polys, self.dim, point)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_stanzas() {
        let f = VarietyFile::parse("# node\nvars: x, y\npoly: y^2 - x^2 - x^3\npoint: 0, 0\ndim: 1\n").unwrap();
        assert_eq!(f.vars, ["x", "y"]);
        assert_eq!(f.polys.len(), 1);
        assert_eq!(f.dim, Some(1));
        assert_eq!(f.to_spec().unwrap().dimension(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(VarietyFile::parse("poly: x\n").is_err());
        assert!(VarietyFile::parse("vars: x\n").is_err());
        assert!(VarietyFile::parse("vars: x\nfoo: 1\npoly: x\n").is_err());
        let off = VarietyFile::parse("vars: x, y\npoly: x\npoint: 1, 0\n").unwrap();
        assert!(off.to_spec().is_err());
        let rational = VarietyFile::parse("vars: x, y\npoly: 2*x - 1\npoint: 1/2, 3\n").unwrap();
        assert_eq!(rational.to_spec().unwrap().point()[0].to_string(), "1/2");
        let declared = VarietyFile::parse("vars: x, y\npoly: x\ndim: 0\n").unwrap();
        assert!(declared.to_spec().is_err());
    }
}
