//! Jet variables, truncated power-series substitution and Hasse–Schmidt
//! derivatives.

use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::{PolyError, Polynomial, Rational, Ring};

/// Serialized name of the level-`level` jet coordinate of `base`.
pub fn jet_variable_name(base: &str, level: usize) -> String {
    format!("{base}#{level}")
}

/// Ring of jet coordinates `v#k` for every ambient variable `v` and every
/// level `k` in `levels`. Variables are laid out level-major: index
/// `(k - lo) * N + i`. Rings without level 0 are ordered by the weight
/// `k` of `v#k`, which makes every Hasse–Schmidt derivative homogeneous.
pub fn jet_ring(ambient: &Ring, levels: RangeInclusive<usize>) -> Arc<Ring> {
    let mut names = Vec::new();
    let mut weights = Vec::new();
    let lo = *levels.start();
    for k in levels {
        for v in ambient.variables() {
            names.push(jet_variable_name(v, k));
            weights.push(k as u32);
        }
    }
    let order = if lo >= 1 { super::MonomialOrder::Weighted(weights) } else { super::MonomialOrder::GrevLex };
    Ring::new(names, ambient.domain(), order).expect("jet names are unique")
}

/// Index of `v_var^(level)` in a jet ring whose lowest level is `lo`.
#[inline]
pub fn jet_index(nvars: usize, lo: usize, var: usize, level: usize) -> usize {
    (level - lo) * nvars + var
}

/// Multiply two truncated series, keeping coefficients of `t^0..t^m`.
pub fn series_mul(a: &[Polynomial], b: &[Polynomial], m: usize) -> Vec<Polynomial> {
    let ring = a[0].ring().clone();
    (0..=m)
        .map(|k| {
            let mut acc = Polynomial::zero(&ring);
            for i in 0..=k {
                if i < a.len() && k - i < b.len() && !a[i].is_zero() && !b[k - i].is_zero() {
                    acc = &acc + &(&a[i] * &b[k - i]);
                }
            }
            acc
        })
        .collect()
}

/// Substitute a truncated series for each variable of `f` and return the
/// coefficients of `t^0..t^m`. `series[i][k]` is the `t^k` coefficient of the
/// image of variable `i`; all coefficients live in `target`.
pub fn substitute_series(
    f: &Polynomial,
    target: &Arc<Ring>,
    series: &[Vec<Polynomial>],
    m: usize,
) -> Vec<Polynomial> {
    assert_eq!(series.len(), f.ring().nvars(), "one series per variable");
    let one: Vec<Polynomial> = (0..=m)
        .map(|k| {
            if k == 0 {
                Polynomial::one(target)
            } else {
                Polynomial::zero(target)
            }
        })
        .collect();
    let mut powers: Vec<Vec<Vec<Polynomial>>> = series.iter().map(|_| vec![one.clone()]).collect();
    let mut out: Vec<Polynomial> = vec![Polynomial::zero(target); m + 1];
    for (mon, c) in f.terms() {
        let mut acc = one.clone();
        for (i, e) in mon.exponents().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[i].len() <= e as usize {
                let last = powers[i].last().expect("nonempty");
                let next = series_mul(last, &series[i], m);
                powers[i].push(next);
            }
            acc = series_mul(&acc, &powers[i][e as usize], m);
        }
        for (k, p) in acc.into_iter().enumerate() {
            if !p.is_zero() {
                out[k] = &out[k] + &p.scale(c);
            }
        }
    }
    out
}

/// Hasse–Schmidt derivatives `f^(0), ..., f^(m)`: the coefficients of `t^j`
/// after substituting `v = Σ_k v#k t^k` for every ambient variable.
pub fn hasse_schmidt(f: &Polynomial, m: usize) -> Vec<Polynomial> {
    let ambient = f.ring();
    let n = ambient.nvars();
    let jr = jet_ring(ambient, 0..=m);
    let series: Vec<Vec<Polynomial>> = (0..n)
        .map(|i| {
            (0..=m)
                .map(|k| Polynomial::var(&jr, jet_index(n, 0, i, k)))
                .collect()
        })
        .collect();
    substitute_series(f, &jr, &series, m)
}

/// Order of vanishing along a jet, with truncation at `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JetOrder {
    Finite(usize),
    /// Every coefficient up to the truncation level vanishes.
    Infinite,
}

impl JetOrder {
    pub fn finite(self) -> Option<usize> {
        match self {
            JetOrder::Finite(v) => Some(v),
            JetOrder::Infinite => None,
        }
    }
}

impl fmt::Display for JetOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JetOrder::Finite(v) => write!(f, "{v}"),
            JetOrder::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for JetOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            JetOrder::Finite(v) => s.serialize_u64(*v as u64),
            JetOrder::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `min { j : f^(j)(jet) != 0 }`; `jet` assigns a value to every coordinate
/// of the level `0..=m` jet ring, in its variable order.
pub fn order_along_jet(f: &Polynomial, jet: &[Rational], m: usize) -> Result<JetOrder, PolyError> {
    let expected = f.ring().nvars() * (m + 1);
    if jet.len() != expected {
        return Err(PolyError::PointDimension {
            expected,
            got: jet.len(),
        });
    }
    for (j, d) in hasse_schmidt(f, m).iter().enumerate() {
        if !d.evaluate(jet)?.is_zero() {
            return Ok(JetOrder::Finite(j));
        }
    }
    Ok(JetOrder::Infinite)
}

/// Substitute numeric series (coefficients of `t^0..`) into `f`, keeping
/// `t^0..t^m`.
pub fn substitute_numeric(f: &Polynomial, series: &[Vec<Rational>], m: usize) -> Vec<Rational> {
    assert_eq!(series.len(), f.ring().nvars());
    let mul = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
        (0..=m)
            .map(|k| {
                (0..=k)
                    .filter(|&i| i < a.len() && k - i < b.len())
                    .fold(Rational::zero(), |acc, i| acc + &a[i] * &b[k - i])
            })
            .collect()
    };
    let mut out = vec![Rational::zero(); m + 1];
    for (mon, c) in f.terms() {
        let mut acc: Vec<Rational> = (0..=m)
            .map(|k| if k == 0 { c.clone() } else { Rational::zero() })
            .collect();
        for (i, e) in mon.exponents().enumerate() {
            for _ in 0..e {
                acc = mul(&acc, &series[i]);
            }
        }
        for (o, a) in out.iter_mut().zip(acc) {
            *o += a;
        }
    }
    out
}

/// t-adic order of a truncated numeric series.
pub fn series_order(coeffs: &[Rational]) -> JetOrder {
    coeffs
        .iter()
        .position(|c| !c.is_zero())
        .map(JetOrder::Finite)
        .unwrap_or(JetOrder::Infinite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn hasse_schmidt_of_quadric_cone() {
        let ring = Ring::rational(&["x", "y", "z"]);
        let f = parse_polynomial("x*y - z^2", &ring).unwrap();
        let d = hasse_schmidt(&f, 2);
        let jr = d[0].ring().clone();
        let p = |s: &str| parse_polynomial(s, &jr).unwrap();
        assert_eq!(d[0], p("x#0*y#0 - z#0^2"));
        assert_eq!(d[1], p("x#0*y#1 + x#1*y#0 - 2*z#0*z#1"));
        assert_eq!(d[2], p("x#0*y#2 + x#1*y#1 + x#2*y#0 - 2*z#0*z#2 - z#1^2"));
    }

    #[test]
    fn hasse_schmidt_of_a_variable_is_the_coordinate() {
        let ring = Ring::rational(&["x"]);
        let d = hasse_schmidt(&Polynomial::var(&ring, 0), 4);
        for (j, p) in d.iter().enumerate() {
            assert_eq!(p, &Polynomial::var(p.ring(), j));
        }
    }

    #[test]
    fn orders_along_jets() {
        let ring = Ring::rational(&["x"]);
        let x = Polynomial::var(&ring, 0);
        // x = t^2
        assert_eq!(
            order_along_jet(&x, &[r(0), r(0), r(1), r(0)], 3).unwrap(),
            JetOrder::Finite(2)
        );

        let ring = Ring::rational(&["x", "y", "z"]);
        let f = parse_polynomial("x*y - z^2", &ring).unwrap();
        // level-major: (x0,y0,z0, x1,y1,z1, ...)
        let mut jet = vec![r(0); 12];
        jet[3] = r(1);
        jet[4] = r(1);
        jet[5] = r(1);
        assert_eq!(order_along_jet(&f, &jet, 3).unwrap(), JetOrder::Infinite);
        // y = t^2 instead
        jet[4] = r(0);
        jet[7] = r(1);
        assert_eq!(order_along_jet(&f, &jet, 3).unwrap(), JetOrder::Finite(2));
        assert!(order_along_jet(&f, &jet[..5], 3).is_err());
    }
}
