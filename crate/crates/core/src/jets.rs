//! Jet schemes, jet fibers over a point, truncation, and the witness-arc
//! invariants μ and ν.

use std::sync::Arc;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::groebner::{GroebnerError, Ideal};
use crate::poly::{
    jet_index, jet_ring, parse_polynomial, series_order, substitute_numeric, substitute_series,
    Domain, JetOrder, MonomialOrder, PolyError, Polynomial, Rational, Ring,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("point is not on the variety: generator {0} does not vanish there")]
    PointNotOnVariety(String),
    #[error("declared dimension {declared} but the ideal has dimension {computed}")]
    DimensionMismatch { declared: i64, computed: i64 },
    #[error("witness `{label}` needs a longer truncation than {level}")]
    TruncationTooShort { label: String, level: usize },
    #[error("witness `{0}` does not lie on the variety")]
    WitnessNotOnVariety(String),
    #[error("no ν found up to the cap {0}")]
    NuNotFound(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// An affine variety given by defining polynomials, with a distinguished
/// point and a validated dimension.
#[derive(Clone, Debug)]
pub struct VarietySpec {
    ring: Arc<Ring>,
    polys: Vec<Polynomial>,
    dim: i64,
    point: Vec<Rational>,
}

impl VarietySpec {
    /// Validates that `point` (default: the origin) lies on the variety and
    /// that the declared dimension, if any, matches the Gröbner dimension.
    pub fn new(
        ring: &Arc<Ring>,
        polys: Vec<Polynomial>,
        declared_dim: Option<i64>,
        point: Option<Vec<Rational>>,
    ) -> Result<VarietySpec, JetError> {
        let point = point.unwrap_or_else(|| vec![Rational::zero(); ring.nvars()]);
        if point.len() != ring.nvars() {
            return Err(PolyError::PointDimension {
                expected: ring.nvars(),
                got: point.len(),
            }
            .into());
        }
        for f in &polys {
            if !f.ring().same_space(ring) {
                return Err(PolyError::RingMismatch.into());
            }
            if !f.evaluate(&point)?.is_zero() {
                return Err(JetError::PointNotOnVariety(f.to_string()));
            }
        }
        let computed = Ideal::new(ring, polys.clone())?.dimension()?;
        if let Some(d) = declared_dim {
            if d != computed {
                return Err(JetError::DimensionMismatch {
                    declared: d,
                    computed,
                });
            }
        }
        Ok(VarietySpec {
            ring: ring.clone(),
            polys,
            dim: computed,
            point,
        })
    }

    /// Build from variable names and polynomial strings, at the origin.
    pub fn parse<S: AsRef<str>, T: AsRef<str>>(
        vars: &[S],
        polys: &[T],
        dim: Option<i64>,
    ) -> Result<VarietySpec, JetError> {
        let ring = Ring::new(
            vars.iter().map(|v| v.as_ref().to_string()).collect(),
            Domain::Rational,
            MonomialOrder::GrevLex,
        )?;
        let polys = polys
            .iter()
            .map(|p| parse_polynomial(p.as_ref(), &ring))
            .collect::<Result<Vec<_>, _>>()?;
        VarietySpec::new(&ring, polys, dim, None)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn polynomials(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn dimension(&self) -> i64 {
        self.dim
    }

    pub fn point(&self) -> &[Rational] {
        &self.point
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::new(&self.ring, self.polys.clone()).expect("generators live in the ring")
    }

    /// Codimension in the ambient affine space.
    pub fn codimension(&self) -> usize {
        (self.ring.nvars() as i64 - self.dim).max(0) as usize
    }

    /// Same variety, another distinguished point.
    pub fn at_point(&self, point: Vec<Rational>) -> Result<VarietySpec, JetError> {
        VarietySpec::new(&self.ring, self.polys.clone(), Some(self.dim), Some(point))
    }

    /// Add generators (the dimension is recomputed).
    pub fn with_extra(&self, extra: Vec<Polynomial>) -> Result<VarietySpec, JetError> {
        let mut polys = self.polys.clone();
        polys.extend(extra);
        VarietySpec::new(&self.ring, polys, None, Some(self.point.clone()))
    }
}

/// Jet coordinates `v#k` for the levels of one computation. A full jet
/// scheme uses levels `0..=m`; a fiber over a base point uses `1..=m`, the
/// level-0 coordinates having been replaced by the point.
#[derive(Clone, Debug)]
pub struct JetContext {
    ambient: Arc<Ring>,
    order: usize,
    ring: Arc<Ring>,
    base: Option<Vec<Rational>>,
}

impl JetContext {
    pub fn full(ambient: &Arc<Ring>, m: usize) -> JetContext {
        JetContext {
            ambient: ambient.clone(),
            order: m,
            ring: jet_ring(ambient, 0..=m),
            base: None,
        }
    }

    pub fn fiber(ambient: &Arc<Ring>, m: usize, point: &[Rational]) -> JetContext {
        assert_eq!(point.len(), ambient.nvars(), "base point dimension");
        JetContext {
            ambient: ambient.clone(),
            order: m,
            ring: jet_ring(ambient, 1..=m),
            base: Some(point.to_vec()),
        }
    }

    pub fn ambient(&self) -> &Arc<Ring> {
        &self.ambient
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn base(&self) -> Option<&[Rational]> {
        self.base.as_deref()
    }

    pub fn lowest_level(&self) -> usize {
        usize::from(self.base.is_some())
    }

    pub fn nvars(&self) -> usize {
        self.ambient.nvars()
    }

    /// Index of `v_var^(level)` in the jet ring.
    pub fn index(&self, var: usize, level: usize) -> usize {
        assert!(
            level >= self.lowest_level() && level <= self.order,
            "level {level} outside the context"
        );
        jet_index(self.nvars(), self.lowest_level(), var, level)
    }

    pub fn var(&self, var: usize, level: usize) -> Polynomial {
        Polynomial::var(&self.ring, self.index(var, level))
    }

    /// Indices of the top-level coordinates, which truncation forgets.
    pub fn top_level_indices(&self) -> Vec<usize> {
        if self.order < self.lowest_level() {
            return vec![];
        }
        (0..self.nvars())
            .map(|i| self.index(i, self.order))
            .collect()
    }

    /// The context one order lower with the same base point.
    pub fn truncated(&self) -> Option<JetContext> {
        let m = self.order.checked_sub(1)?;
        Some(match &self.base {
            Some(p) => JetContext::fiber(&self.ambient, m, p),
            None => JetContext::full(&self.ambient, m),
        })
    }

    /// Image of the ambient variable `var` as a truncated series in the jet
    /// ring, with the base point substituted at level 0.
    pub fn series(&self, var: usize) -> Vec<Polynomial> {
        (0..=self.order)
            .map(|k| match (&self.base, k) {
                (Some(p), 0) => Polynomial::constant(&self.ring, p[var].clone()),
                _ => self.var(var, k),
            })
            .collect()
    }

    /// `f^(0), ..., f^(m)` in this context's ring.
    pub fn derivatives(&self, f: &Polynomial) -> Vec<Polynomial> {
        let series: Vec<Vec<Polynomial>> = (0..self.nvars()).map(|i| self.series(i)).collect();
        substitute_series(f, &self.ring, &series, self.order)
    }

    /// Level-`m` truncation of a numeric jet, as a point of this ring.
    pub fn point_of(&self, series: &[Vec<Rational>]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.ring.nvars()];
        for (i, s) in series.iter().enumerate() {
            for k in self.lowest_level()..=self.order {
                out[self.index(i, k)] = s.get(k).cloned().unwrap_or_else(Rational::zero);
            }
        }
        out
    }
}

/// Ideal of the jet scheme `X_m`: all `f_i^(j)`, `0 ≤ j ≤ m`.
pub fn jet_ideal(v: &VarietySpec, m: usize) -> Result<(JetContext, Ideal), JetError> {
    let ctx = JetContext::full(v.ring(), m);
    let gens = v
        .polynomials()
        .iter()
        .flat_map(|f| ctx.derivatives(f))
        .collect();
    Ok((ctx.clone(), Ideal::new(ctx.ring(), gens)?))
}

/// Scheme-theoretic fiber of `X_m → X` over the variety's distinguished
/// point: `f_i^(j)` for `1 ≤ j ≤ m` with `v^(0)` replaced by the point.
pub fn fiber_ideal(v: &VarietySpec, m: usize) -> Result<(JetContext, Ideal), JetError> {
    fiber_ideal_at(v, m, v.point())
}

pub fn fiber_ideal_at(
    v: &VarietySpec,
    m: usize,
    x: &[Rational],
) -> Result<(JetContext, Ideal), JetError> {
    for f in v.polynomials() {
        if !f.evaluate(x)?.is_zero() {
            return Err(JetError::PointNotOnVariety(f.to_string()));
        }
    }
    let ctx = JetContext::fiber(v.ring(), m, x);
    let gens = v
        .polynomials()
        .iter()
        .flat_map(|f| ctx.derivatives(f).into_iter().skip(1))
        .collect();
    Ok((ctx.clone(), Ideal::new(ctx.ring(), gens)?))
}

/// `(m + 1) dim X − dim S`.
pub fn jet_codim(dim_s: i64, m: usize, dim_x: i64) -> Result<i64, JetError> {
    let top = (m as i64 + 1) * dim_x;
    if dim_s < 0 || dim_x < 0 || dim_s > top {
        return Err(JetError::Invalid(format!(
            "dim_S = {dim_s} outside 0..={top}"
        )));
    }
    Ok(top - dim_s)
}

/// Ideal of the closure of the image of `V(ideal)` under truncation to the
/// next lower order: eliminate the top-level coordinates.
pub fn truncation_image(ideal: &Ideal, ctx: &JetContext) -> Result<(JetContext, Ideal), JetError> {
    let lower = ctx
        .truncated()
        .ok_or_else(|| JetError::Invalid("cannot truncate below order 0".into()))?;
    if !ideal.ring().same_space(ctx.ring()) {
        return Err(PolyError::RingMismatch.into());
    }
    let image = if lower.ring().nvars() == 0 && ctx.lowest_level() == 1 {
        // the fiber at order 0 is the base point itself
        if ideal.is_unit()? {
            Ideal::unit(lower.ring())
        } else {
            Ideal::zero(lower.ring())
        }
    } else {
        ideal.eliminate(&ctx.top_level_indices())?
    };
    Ok((lower, image))
}

/// A truncated parametrized arc: `series[i][k]` is the `t^k` coefficient of
/// ambient coordinate `i`, known for `k ≤ level`.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessArc {
    pub label: String,
    #[serde(serialize_with = "serialize_series")]
    pub series: Vec<Vec<Rational>>,
    pub level: usize,
}

fn serialize_series<S: serde::Serializer>(
    series: &[Vec<Rational>],
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(series.len()))?;
    for row in series {
        let strs: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        seq.serialize_element(&strs)?;
    }
    seq.end()
}

impl WitnessArc {
    pub fn new(label: impl Into<String>, series: Vec<Vec<Rational>>, level: usize) -> WitnessArc {
        let series = series
            .into_iter()
            .map(|mut s| {
                s.resize(level + 1, Rational::zero());
                s
            })
            .collect();
        WitnessArc {
            label: label.into(),
            series,
            level,
        }
    }

    /// Order of `f` along the arc, `Infinite` meaning beyond the truncation.
    pub fn order_of(&self, f: &Polynomial) -> JetOrder {
        series_order(&substitute_numeric(f, &self.series, self.level))
    }

    pub fn lies_on(&self, v: &VarietySpec) -> bool {
        v.polynomials()
            .iter()
            .all(|f| self.order_of(f) == JetOrder::Infinite)
    }

    /// Base point of the arc.
    pub fn base_point(&self) -> Vec<Rational> {
        self.series.iter().map(|s| s[0].clone()).collect()
    }

    /// The arc's truncation as a point of the context's jet ring.
    pub fn truncation(&self, ctx: &JetContext) -> Vec<Rational> {
        assert!(
            ctx.order() <= self.level,
            "witness truncated below the requested order"
        );
        ctx.point_of(&self.series)
    }
}

fn determinant(mut rows: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = rows.len();
    let ring = rows[0][0].ring().clone();
    match n {
        1 => rows.remove(0).remove(0),
        _ => {
            let mut acc = Polynomial::zero(&ring);
            for col in 0..n {
                if rows[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &rows[0][col] * &determinant(minor);
                acc = if col % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        }
    }
}

/// All nonzero `c × c` minors of the Jacobian matrix of `polys`.
pub fn jacobian_minors(polys: &[Polynomial], c: usize) -> Vec<Polynomial> {
    let Some(first) = polys.first() else {
        return vec![];
    };
    let ring = first.ring().clone();
    if c == 0 {
        return vec![Polynomial::one(&ring)];
    }
    let jac: Vec<Vec<Polynomial>> = polys
        .iter()
        .map(|f| (0..ring.nvars()).map(|j| f.derivative(j)).collect())
        .collect();
    let mut out = Vec::new();
    for rows in (0..polys.len()).combinations(c) {
        for cols in (0..ring.nvars()).combinations(c) {
            let sub = rows
                .iter()
                .map(|&r| cols.iter().map(|&k| jac[r][k].clone()).collect())
                .collect();
            let d = determinant(sub);
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

/// Order of the Jacobian ideal along each witness.
pub fn jacobian_orders(v: &VarietySpec, witnesses: &[WitnessArc]) -> Result<Vec<usize>, JetError> {
    let minors = jacobian_minors(v.polynomials(), v.codimension());
    witnesses
        .iter()
        .map(|w| {
            if !w.lies_on(v) {
                return Err(JetError::WitnessNotOnVariety(w.label.clone()));
            }
            let ord = minors
                .iter()
                .map(|g| w.order_of(g))
                .min()
                .unwrap_or(JetOrder::Infinite);
            match ord {
                JetOrder::Finite(o) if o < w.level => Ok(o),
                _ => Err(JetError::TruncationTooShort {
                    label: w.label.clone(),
                    level: w.level,
                }),
            }
        })
        .collect()
}

/// `μ`: the largest Jacobian order over the witnesses.
pub fn mu_invariant(v: &VarietySpec, witnesses: &[WitnessArc]) -> Result<usize, JetError> {
    Ok(jacobian_orders(v, witnesses)?
        .into_iter()
        .max()
        .unwrap_or(0))
}

/// Smallest `ν ≥ μ` at which the witness truncations are pairwise distinct
/// and the component closures supplied by `components_at` are pairwise
/// incomparable.
pub fn nu_invariant<F>(
    v: &VarietySpec,
    witnesses: &[WitnessArc],
    mu: usize,
    cap: usize,
    mut components_at: F,
) -> Result<usize, JetError>
where
    F: FnMut(usize) -> Result<Vec<Ideal>, JetError>,
{
    for nu in mu..=cap {
        let ctx = JetContext::fiber(v.ring(), nu, v.point());
        let points: Vec<Vec<Rational>> = witnesses.iter().map(|w| w.truncation(&ctx)).collect();
        if !points.iter().tuple_combinations().all(|(a, b)| a != b) {
            continue;
        }
        let comps = components_at(nu)?;
        let mut incomparable = true;
        'outer: for (a, b) in comps.iter().tuple_combinations() {
            if a.contains(b)? || b.contains(a)? {
                incomparable = false;
                break 'outer;
            }
        }
        if incomparable {
            return Ok(nu);
        }
    }
    Err(JetError::NuNotFound(cap))
}

/// Evaluate every generator of `ideal` at `point`; true iff all vanish.
pub fn vanishes_at(ideal: &Ideal, point: &[Rational]) -> Result<bool, JetError> {
    for g in ideal.generators() {
        if !g.evaluate(point)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Power series of `√(1 + s)` for `s` with zero constant term, truncated at
/// `t^level`.
pub fn sqrt_one_plus(s: &[Rational], level: usize) -> Vec<Rational> {
    let mul = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
        (0..=level)
            .map(|k| (0..=k).fold(Rational::zero(), |acc, i| acc + &a[i] * &b[k - i]))
            .collect::<Vec<_>>()
    };
    let mut s = s.to_vec();
    s.resize(level + 1, Rational::zero());
    let mut out = vec![Rational::zero(); level + 1];
    out[0] = Rational::one();
    let mut power = out.clone();
    let mut binom = Rational::one();
    let half = Rational::new(1.into(), 2.into());
    for k in 1..=level {
        power = mul(&power, &s);
        binom = binom * (&half - Rational::from_integer((k as i64 - 1).into()))
            / Rational::from_integer((k as i64).into());
        for (o, p) in out.iter_mut().zip(&power) {
            *o += &binom * p;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn spec(vars: &[&str], polys: &[&str]) -> VarietySpec {
        VarietySpec::parse(vars, polys, None).unwrap()
    }

    fn p(ctx: &JetContext, s: &str) -> Polynomial {
        parse_polynomial(s, ctx.ring()).unwrap()
    }

    #[test]
    fn jet_ideal_of_a_line() {
        let v = spec(&["x"], &["x"]);
        let (ctx, i) = jet_ideal(&v, 2).unwrap();
        assert_eq!(
            i.generators(),
            &[p(&ctx, "x#0"), p(&ctx, "x#1"), p(&ctx, "x#2")]
        );
    }

    #[test]
    fn jet_ideal_of_the_cone() {
        let v = spec(&["x", "y", "z"], &["x*y - z^2"]);
        let (ctx, i) = jet_ideal(&v, 1).unwrap();
        assert_eq!(
            i.generators(),
            &[
                p(&ctx, "x#0*y#0 - z#0^2"),
                p(&ctx, "x#0*y#1 + x#1*y#0 - 2*z#0*z#1")
            ]
        );
    }

    #[test]
    fn smooth_jet_dimension() {
        for (vars, polys, d) in [
            (vec!["x", "y"], vec!["y - x^2"], 1),
            (vec!["x", "y"], vec![], 2),
            (vec!["x", "y"], vec!["x^2 + y^2 - 2*y"], 1),
        ] {
            let v = spec(&vars, &polys);
            assert_eq!(v.dimension(), d);
            for m in 0..=3 {
                let (_, i) = jet_ideal(&v, m).unwrap();
                assert_eq!(
                    i.dimension().unwrap(),
                    (m as i64 + 1) * d,
                    "{polys:?} m={m}"
                );
            }
        }
    }

    #[test]
    fn smooth_point_fiber_dimension() {
        let v = spec(&["x", "y"], &["y - x^2"]);
        for m in 1..=3 {
            let (_, i) = fiber_ideal(&v, m).unwrap();
            assert_eq!(i.dimension().unwrap(), m as i64);
        }
        let off = v.at_point(vec![rat(2), rat(4)]).unwrap();
        let (_, i) = fiber_ideal(&off, 2).unwrap();
        assert_eq!(i.dimension().unwrap(), 2);
    }

    #[test]
    fn fibers_at_the_origin() {
        let v = spec(&["x", "y", "z"], &["x*y - z^2"]);
        let (ctx, i) = fiber_ideal(&v, 2).unwrap();
        assert_eq!(ctx.ring().nvars(), 6);
        assert_eq!(i.generators(), &[p(&ctx, "x#1*y#1 - z#1^2")]);

        let node = spec(&["x", "y"], &["y^2 - x^2 - x^3"]);
        let (ctx, i) = fiber_ideal(&node, 3).unwrap();
        assert_eq!(
            i.generators(),
            &[
                p(&ctx, "y#1^2 - x#1^2"),
                p(&ctx, "2*y#1*y#2 - 2*x#1*x#2 - x#1^3")
            ]
        );

        let line = spec(&["x", "y"], &["x"]);
        let (ctx, i) = fiber_ideal(&line, 3).unwrap();
        assert_eq!(
            i.generators(),
            &[p(&ctx, "x#1"), p(&ctx, "x#2"), p(&ctx, "x#3")]
        );
        assert_eq!(i.dimension().unwrap(), 3);
    }

    #[test]
    fn point_off_the_variety_is_rejected() {
        let v = spec(&["x", "y"], &["y - x^2"]);
        assert!(matches!(
            v.at_point(vec![rat(1), rat(0)]),
            Err(JetError::PointNotOnVariety(_))
        ));
        let ring = v.ring().clone();
        let f = parse_polynomial("y - x^2", &ring).unwrap();
        assert!(matches!(
            VarietySpec::new(&ring, vec![f], Some(2), None),
            Err(JetError::DimensionMismatch {
                declared: 2,
                computed: 1
            })
        ));
    }

    #[test]
    fn codimension_formula() {
        assert_eq!(jet_codim(4, 3, 1).unwrap(), 0);
        assert_eq!(jet_codim(0, 0, 2).unwrap(), 2);
        assert!(jet_codim(5, 3, 1).is_err());
        // a branch component of the node fiber at order 3
        let node = spec(&["x", "y"], &["y^2 - x^2 - x^3"]);
        let (ctx, _) = fiber_ideal(&node, 3).unwrap();
        let branch = Ideal::new(
            ctx.ring(),
            vec![p(&ctx, "y#1 - x#1"), p(&ctx, "2*y#2 - 2*x#2 - x#1^2")],
        )
        .unwrap();
        let d = branch.dimension().unwrap();
        assert_eq!(d, 4);
        assert_eq!(jet_codim(d, 3, 1).unwrap(), 0);
    }

    #[test]
    fn truncation_of_linear_fibers() {
        let line = spec(&["x"], &["x"]);
        let (ctx, i) = fiber_ideal(&line, 2).unwrap();
        let (lower, img) = truncation_image(&i, &ctx).unwrap();
        assert_eq!(lower.order(), 1);
        assert_eq!(img.generators().len(), 1);
        assert_eq!(img.generators()[0].to_string(), "x#1");
    }

    #[test]
    fn truncation_is_functorial() {
        for (vars, polys) in [
            (vec!["x", "y"], vec!["y^2 - x^2 - x^3"]),
            (vec!["x", "y", "z"], vec!["x*y - z^3"]),
            (vec!["x", "y", "z"], vec!["x*y - z^2"]),
        ] {
            let v = spec(&vars, &polys);
            for m in 1..=3 {
                let (hi_ctx, hi) = fiber_ideal(&v, m + 1).unwrap();
                let (_, lo) = fiber_ideal(&v, m).unwrap();
                let (_, img) = truncation_image(&hi, &hi_ctx).unwrap();
                for g in lo.generators() {
                    assert!(
                        img.radical_contains(&g.embed(img.ring()).unwrap()).unwrap(),
                        "{polys:?} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn truncation_to_order_zero() {
        let v = spec(&["x", "y", "z"], &["x*y - z^2"]);
        let (ctx, i) = fiber_ideal(&v, 1).unwrap();
        let (lower, img) = truncation_image(&i, &ctx).unwrap();
        assert_eq!(lower.ring().nvars(), 0);
        assert!(img.generators().is_empty());
    }

    fn ca_witness(n: u32, i: u32, a: i64, c: i64, level: usize) -> WitnessArc {
        let mu = n + 1;
        let mut x = vec![rat(0); level + 1];
        let mut y = vec![rat(0); level + 1];
        let mut z = vec![rat(0); level + 1];
        x[i as usize] = rat(a);
        y[(mu - i) as usize] =
            Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(c), mu as usize))
                / rat(a);
        z[1] = rat(c);
        WitnessArc::new(format!("V{i}"), vec![x, y, z], level)
    }

    #[test]
    fn mu_of_ca_singularities() {
        for n in 1..=4u32 {
            let v = spec(&["x", "y", "z"], &[&format!("x*y - z^{}", n + 1)]);
            let ws: Vec<WitnessArc> = (1..=n).map(|i| ca_witness(n, i, 3, 2, 8)).collect();
            let orders = jacobian_orders(&v, &ws).unwrap();
            let expected: Vec<usize> = (1..=n).map(|i| i.min(n + 1 - i) as usize).collect();
            assert_eq!(orders, expected);
            assert_eq!(mu_invariant(&v, &ws).unwrap(), n.div_ceil(2) as usize);
        }
    }

    #[test]
    fn mu_of_the_node_and_a_smooth_curve() {
        let node = spec(&["x", "y"], &["y^2 - x^2 - x^3"]);
        let level = 6;
        let x = vec![rat(0), ratio(2, 1)];
        let mut x_full = x.clone();
        x_full.resize(level + 1, rat(0));
        let root = sqrt_one_plus(&x_full, level);
        let y: Vec<Rational> = (0..=level)
            .map(|k| (0..k).fold(rat(0), |a, i| a + &x_full[k - i] * &root[i]))
            .collect();
        let neg: Vec<Rational> = y.iter().map(|c| -c).collect();
        let ws = vec![
            WitnessArc::new("+", vec![x_full.clone(), y], level),
            WitnessArc::new("-", vec![x_full.clone(), neg], level),
        ];
        assert_eq!(mu_invariant(&node, &ws).unwrap(), 1);

        let smooth = spec(&["x", "y"], &["y - x^2"]);
        let w = WitnessArc::new(
            "t",
            vec![vec![rat(0), rat(1)], vec![rat(0), rat(0), rat(1)]],
            4,
        );
        assert_eq!(mu_invariant(&smooth, &[w]).unwrap(), 0);
    }

    #[test]
    fn short_or_foreign_witnesses_are_errors() {
        let v = spec(&["x", "y", "z"], &["x*y - z^2"]);
        let off = WitnessArc::new(
            "off",
            vec![
                vec![rat(0), rat(1)],
                vec![rat(0), rat(1)],
                vec![rat(0), rat(2)],
            ],
            3,
        );
        assert!(matches!(
            mu_invariant(&v, &[off]),
            Err(JetError::WitnessNotOnVariety(_))
        ));
        let w = ca_witness(1, 1, 1, 1, 1);
        assert!(matches!(
            mu_invariant(&v, &[w]),
            Err(JetError::TruncationTooShort { .. })
        ));
    }

    #[test]
    fn witnesses_satisfy_every_fiber_generator() {
        let v = spec(&["x", "y", "z"], &["x*y - z^3"]);
        for i in 1..=2 {
            let w = ca_witness(2, i, 5, -3, 7);
            for m in 1..=7 {
                let (ctx, fiber) = fiber_ideal(&v, m).unwrap();
                assert!(vanishes_at(&fiber, &w.truncation(&ctx)).unwrap());
            }
        }
    }

    #[test]
    fn square_root_series() {
        let s = vec![rat(0), rat(1)];
        let r = sqrt_one_plus(&s, 4);
        assert_eq!(
            r,
            vec![
                rat(1),
                ratio(1, 2),
                ratio(-1, 8),
                ratio(1, 16),
                ratio(-5, 128)
            ]
        );
        let sq: Vec<Rational> = (0..=4)
            .map(|k| (0..=k).fold(rat(0), |a, i| a + &r[i] * &r[k - i]))
            .collect();
        assert_eq!(sq, vec![rat(1), rat(1), rat(0), rat(0), rat(0)]);
    }

    #[test]
    fn minors_of_a_complete_intersection() {
        let v = spec(&["x", "y", "z"], &["x*y - z^2"]);
        let minors = jacobian_minors(v.polynomials(), 1);
        let strs: Vec<String> = minors.iter().map(|m| m.to_string()).collect();
        assert_eq!(strs, vec!["y", "x", "-2*z"]);
        let ring = Ring::rational(&["x", "y", "z"]);
        let f = parse_polynomial("x*y", &ring).unwrap();
        let g = parse_polynomial("z^2", &ring).unwrap();
        let m2 = jacobian_minors(&[f, g], 2);
        assert_eq!(
            m2.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            vec!["2*y*z", "2*x*z"]
        );
    }
}
