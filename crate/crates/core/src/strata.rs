//! Order-constraint strata of jet fibers, their closures, and the candidate
//! component lists of the supported singularity families.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::groebner::{GroebnerError, Ideal};
use crate::invariants::MonomialIdeal;
use crate::jets::{fiber_ideal, sqrt_one_plus, JetContext, JetError, VarietySpec, WitnessArc};
use crate::poly::{rat, Domain, Monomial, MonomialOrder, Polynomial, Rational, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("constraint asks for exact order {value} above the jet order {m}")]
    OrderTooLarge { value: usize, m: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("scenario `{0}` has no candidate generator")]
    Unsupported(String),
}

impl From<crate::poly::PolyError> for StrataError {
    fn from(e: crate::poly::PolyError) -> Self {
        StrataError::Jet(e.into())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OrderTarget {
    Variable(usize),
    Poly(Polynomial),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Exactly,
    AtLeast,
}

/// `ord(target) = value` or `ord(target) ≥ value`, along jets through the
/// base point.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderConstraint {
    pub target: OrderTarget,
    pub relation: Relation,
    pub value: usize,
}

impl OrderConstraint {
    pub fn exactly(target: OrderTarget, value: usize) -> Self {
        OrderConstraint { target, relation: Relation::Exactly, value }
    }

    pub fn at_least(target: OrderTarget, value: usize) -> Self {
        OrderConstraint { target, relation: Relation::AtLeast, value }
    }

    fn polynomial(&self, ambient: &Arc<Ring>) -> Polynomial {
        match &self.target {
            OrderTarget::Variable(i) => Polynomial::var(ambient, *i),
            OrderTarget::Poly(p) => p.clone(),
        }
    }
}

/// A locally closed subset of a jet fiber: the zero set of `equations`
/// minus the zero sets of the `inequations`.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub label: String,
    pub ctx: JetContext,
    pub equations: Ideal,
    pub inequations: Vec<Polynomial>,
    /// Some inequation vanishes identically modulo the equations.
    pub empty: bool,
}

/// Translate order constraints into coefficient conditions and join them
/// to the fiber ideal.
pub fn stratum_from_constraints(
    label: impl Into<String>,
    ctx: &JetContext,
    fiber: &Ideal,
    constraints: &[OrderConstraint],
) -> Result<Stratum, StrataError> {
    let m = ctx.order();
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    for c in constraints {
        if c.relation == Relation::Exactly && c.value > m {
            return Err(StrataError::OrderTooLarge { value: c.value, m });
        }
        let d = ctx.derivatives(&c.polynomial(ctx.ambient()));
        let upto = c.value.min(m + 1);
        eqs.extend(d[..upto].iter().filter(|p| !p.is_zero()).cloned());
        if c.relation == Relation::Exactly {
            ineqs.push(d[c.value].clone());
        }
    }
    let equations = fiber.add_generators(&eqs)?;
    let mut empty = equations.is_unit()?;
    for g in &ineqs {
        if empty {
            break;
        }
        if equations.normal_form(g)?.is_zero() {
            empty = true;
        }
    }
    Ok(Stratum { label: label.into(), ctx: ctx.clone(), equations, inequations: ineqs, empty })
}

/// Ideal of the Zariski closure: the equations saturated by every inequation.
pub fn closure(s: &Stratum) -> Result<Ideal, StrataError> {
    if s.empty {
        return Ok(Ideal::unit(s.ctx.ring()));
    }
    let mut ideal = s.equations.clone();
    for g in &s.inequations {
        if g.is_constant() {
            continue;
        }
        ideal = ideal.saturate(g)?;
    }
    Ok(ideal)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BType {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl BType {
    /// Exponent vectors of the generators of 𝔟 in the variables (x, y, z).
    pub fn exponents(&self) -> Vec<[u32; 3]> {
        match *self {
            BType::A(n) => vec![[2, 0, 0], [0, 2, 0], [0, 0, n + 1]],
            BType::D(n) => vec![[0, 0, 2], [2, 1, 0], [0, n - 2, 0]],
            BType::E6 => vec![[0, 0, 2], [3, 0, 0], [0, 4, 0]],
            BType::E7 => vec![[0, 0, 2], [3, 0, 0], [1, 3, 0]],
            BType::E8 => vec![[0, 0, 2], [3, 0, 0], [0, 5, 0]],
        }
    }

    pub fn validate(&self) -> Result<(), StrataError> {
        match *self {
            BType::A(n) if n < 1 => Err(StrataError::InvalidScenario(format!("A{n} needs n >= 1"))),
            BType::D(n) if n < 4 => Err(StrataError::InvalidScenario(format!("D{n} needs n >= 4"))),
            _ => Ok(()),
        }
    }

    pub fn all_shipped() -> Vec<BType> {
        vec![BType::A(1), BType::A(2), BType::A(3), BType::D(4), BType::E6, BType::E7, BType::E8]
    }
}

impl fmt::Display for BType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BType::A(n) => write!(f, "A{n}"),
            BType::D(n) => write!(f, "D{n}"),
            BType::E6 => write!(f, "E6"),
            BType::E7 => write!(f, "E7"),
            BType::E8 => write!(f, "E8"),
        }
    }
}

/// Scenario names accepted on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScenarioTag {
    /// `y² = x² + x³` at the origin.
    Node,
    /// `xy = z_1^{n+1} + ... + z_{d-1}^{n+1}` in `𝔸^{d+1}`.
    CA { n: u32, d: u32 },
    /// Complete intersection of `e` general members of 𝔞 in `𝔸^{2e+1}`.
    Hdv { e: u32, btype: BType },
    /// Cone `Σ v_i^r = 0` in `𝔸^N`.
    Cone { n: u32, r: u32 },
}

impl fmt::Display for ScenarioTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioTag::Node => write!(f, "node"),
            ScenarioTag::CA { n, d: 2 } => write!(f, "cA:{n}"),
            ScenarioTag::CA { n, d } => write!(f, "cA:{n}:{d}"),
            ScenarioTag::Hdv { e, btype } => match btype {
                BType::A(n) => write!(f, "hdv:{e}:A:{n}"),
                BType::D(n) => write!(f, "hdv:{e}:D:{n}"),
                other => write!(f, "hdv:{e}:{other}"),
            },
            ScenarioTag::Cone { n, r } => write!(f, "cone:{n}:{r}"),
        }
    }
}

impl FromStr for ScenarioTag {
    type Err = StrataError;

    /// `node`, `cA:n[:d]`, `hdv:e:type[:n]`, `cone:N:r`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || StrataError::InvalidScenario(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<u32, StrataError> {
            parts.get(i).ok_or_else(bad)?.parse::<u32>().map_err(|_| bad())
        };
        let tag = match parts[0].to_ascii_lowercase().as_str() {
            "node" if parts.len() == 1 => ScenarioTag::Node,
            "ca" if parts.len() == 2 => ScenarioTag::CA { n: num(1)?, d: 2 },
            "ca" if parts.len() == 3 => ScenarioTag::CA { n: num(1)?, d: num(2)? },
            "hdv" if parts.len() == 3 || parts.len() == 4 => {
                let e = num(1)?;
                let ty = parts[2].to_ascii_uppercase();
                let btype = match (ty.as_str(), parts.len()) {
                    ("A", 4) => BType::A(num(3)?),
                    ("D", 4) => BType::D(num(3)?),
                    ("E6", 3) => BType::E6,
                    ("E7", 3) => BType::E7,
                    ("E8", 3) => BType::E8,
                    (t, 3) if t.len() > 1 && (t.starts_with('A') || t.starts_with('D')) => {
                        let n: u32 = t[1..].parse().map_err(|_| bad())?;
                        if t.starts_with('A') {
                            BType::A(n)
                        } else {
                            BType::D(n)
                        }
                    }
                    _ => return Err(bad()),
                };
                ScenarioTag::Hdv { e, btype }
            }
            "cone" if parts.len() == 3 => ScenarioTag::Cone { n: num(1)?, r: num(2)? },
            _ => return Err(bad()),
        };
        tag.validate()?;
        Ok(tag)
    }
}

impl ScenarioTag {
    pub fn validate(&self) -> Result<(), StrataError> {
        match self {
            ScenarioTag::Node => Ok(()),
            ScenarioTag::CA { n, d } if *n >= 1 && *d >= 2 => Ok(()),
            ScenarioTag::Hdv { e, btype } if *e >= 1 => btype.validate(),
            ScenarioTag::Cone { n, r } if *n >= 2 && *r >= 2 => Ok(()),
            _ => Err(StrataError::InvalidScenario(self.to_string())),
        }
    }
}

fn rational_ring(names: Vec<String>) -> Arc<Ring> {
    Ring::new(names, Domain::Rational, MonomialOrder::GrevLex).expect("distinct names")
}

fn power_sum(ring: &Arc<Ring>, vars: &[usize], e: u32) -> Polynomial {
    vars.iter().fold(Polynomial::zero(ring), |acc, &i| &acc + &Polynomial::var(ring, i).pow(e))
}

fn nonzero_draw(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}


/// A supported scenario: the variety, its candidate components at each
/// order, and witness arcs for its Nash families.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub tag: ScenarioTag,
    pub variety: VarietySpec,
    /// Monomial ideal 𝔞 of an hDV family.
    pub monomial_ideal: Option<MonomialIdeal>,
    /// Seed actually used for random coefficients.
    pub seed: u64,
}

impl Scenario {
    pub fn new(tag: ScenarioTag, seed: u64) -> Result<Scenario, StrataError> {
        tag.validate()?;
        let (variety, monomial_ideal) = match &tag {
            ScenarioTag::Node => {
                (VarietySpec::parse(&["x", "y"], &["y^2 - x^2 - x^3"], Some(1))?, None)
            }
            ScenarioTag::CA { n, d } => {
                let mut names = vec!["x".to_string(), "y".to_string()];
                if *d == 2 {
                    names.push("z".into());
                } else {
                    names.extend((1..*d).map(|k| format!("z{k}")));
                }
                let ring = rational_ring(names);
                let zs: Vec<usize> = (2..ring.nvars()).collect();
                let f = &(&Polynomial::var(&ring, 0) * &Polynomial::var(&ring, 1)) - &power_sum(&ring, &zs, n + 1);
                (VarietySpec::new(&ring, vec![f], Some(*d as i64), None)?, None)
            }
            ScenarioTag::Hdv { e, btype } => {
                let fam = candidates_hdv(*e, *btype, seed)?;
                (fam.variety, Some(fam.monomial_ideal))
            }
            ScenarioTag::Cone { n, r } => {
                let ring = rational_ring((1..=*n).map(|k| format!("v{k}")).collect());
                let all: Vec<usize> = (0..ring.nvars()).collect();
                let f = power_sum(&ring, &all, *r);
                (VarietySpec::new(&ring, vec![f], Some(*n as i64 - 1), None)?, None)
            }
        };
        Ok(Scenario { tag, variety, monomial_ideal, seed })
    }

    pub fn parse(tag: &str, seed: u64) -> Result<Scenario, StrataError> {
        Scenario::new(tag.parse()?, seed)
    }

    /// Number of Nash families (and of witness arcs).
    pub fn nash_families(&self) -> Option<usize> {
        match self.tag {
            ScenarioTag::Node => Some(2),
            ScenarioTag::CA { n, .. } => Some(n as usize),
            _ => None,
        }
    }

    /// Candidate component list of the fiber over the origin at order `m`.
    pub fn candidates(&self, m: usize) -> Result<CandidateFamily, StrataError> {
        match self.tag {
            ScenarioTag::Node => candidates_node(m),
            ScenarioTag::CA { n, d } => {
                if m > n as usize {
                    candidates_ca_general(n, d, m)
                } else {
                    candidates_ca_low(n, d, m)
                }
            }
            _ => Err(StrataError::Unsupported(self.tag.to_string())),
        }
    }

    /// Witness arcs truncated at `level`, with parameters drawn from `seed`.
    pub fn witnesses(&self, level: usize) -> Result<Vec<WitnessArc>, StrataError> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        match self.tag {
            ScenarioTag::Node => Ok(node_witnesses(nonzero_draw(&mut rng, 9), level)),
            ScenarioTag::CA { n, d } => Ok((1..=n)
                .map(|i| {
                    let a = nonzero_draw(&mut rng, 9);
                    let mut cs: Vec<i64>;
                    loop {
                        cs = (1..d).map(|_| nonzero_draw(&mut rng, 9)).collect();
                        let s: BigInt = cs.iter().map(|&c| BigInt::from(c).pow(n + 1)).sum();
                        if !s.is_zero() {
                            break;
                        }
                    }
                    ca_witness(n, i, a, &cs, level)
                })
                .collect()),
            _ => Err(StrataError::Unsupported(self.tag.to_string())),
        }
    }
}

/// Witness of the family `V_i` of `xy = Σ z_k^{n+1}`:
/// `x = a t^i`, `y = (Σ c_k^{n+1} / a) t^{n+1-i}`, `z_k = c_k t`.
pub fn ca_witness(n: u32, i: u32, a: i64, cs: &[i64], level: usize) -> WitnessArc {
    let mu = (n + 1) as usize;
    let mut x = vec![rat(0); level + 1];
    let mut y = vec![rat(0); level + 1];
    let s: BigInt = cs.iter().map(|&c| BigInt::from(c).pow(n + 1)).sum();
    if (i as usize) <= level {
        x[i as usize] = rat(a);
    }
    if mu - (i as usize) <= level {
        y[mu - i as usize] = Rational::from_integer(s) / rat(a);
    }
    let mut series = vec![x, y];
    for &c in cs {
        let mut z = vec![rat(0); level + 1];
        if level >= 1 {
            z[1] = rat(c);
        }
        series.push(z);
    }
    WitnessArc::new(format!("V{i}"), series, level)
}

/// The two branches `y = ± x √(1+x)` of the node, with `x = s t`.
pub fn node_witnesses(s: i64, level: usize) -> Vec<WitnessArc> {
    let mut x = vec![rat(0); level + 1];
    if level >= 1 {
        x[1] = rat(s);
    }
    let root = sqrt_one_plus(&x, level);
    let y: Vec<Rational> =
        (0..=level).map(|k| (0..=k).fold(rat(0), |acc, i| acc + &x[i] * &root[k - i])).collect();
    let neg: Vec<Rational> = y.iter().map(|c| -c).collect();
    vec![
        WitnessArc::new("branch+", vec![x.clone(), y], level),
        WitnessArc::new("branch-", vec![x, neg], level),
    ]
}

/// `y ∓ x·√(1+x)` truncated at x-degree `m`; its jets up to level `m` agree
/// with those of the branch coordinate.
pub fn node_branch_coordinate(ring: &Arc<Ring>, sign: i64, m: usize) -> Polynomial {
    let mut s = vec![Rational::zero(); m + 1];
    if m >= 1 {
        s[1] = Rational::one();
    }
    let root = sqrt_one_plus(&s, m);
    let x = ring.var_index("x").expect("node ring has x");
    let mut out = Polynomial::var(ring, ring.var_index("y").expect("node ring has y"));
    for (k, c) in root.iter().enumerate().take(m) {
        let term = Polynomial::from_terms(ring, [(Monomial::variable(ring.nvars(), x, k as u32 + 1), c * rat(-sign))]);
        out = &out + &term;
    }
    out
}

/// A labelled candidate list for one scenario at one order.
#[derive(Clone, Debug)]
pub struct CandidateFamily {
    pub tag: ScenarioTag,
    pub order: usize,
    pub strata: Vec<Stratum>,
    pub expected_count: usize,
    pub formula: String,
}

impl CandidateFamily {
    pub fn closures(&self) -> Result<Vec<(String, Ideal)>, StrataError> {
        use rayon::prelude::*;
        self.strata.par_iter().map(|s| Ok((s.label.clone(), closure(s)?))).collect()
    }
}

fn ca_variety(n: u32, d: u32) -> Result<Scenario, StrataError> {
    Scenario::new(ScenarioTag::CA { n, d }, 0)
}

/// The strata `V_i = {ord x = i, ord y = μ − i, ord f = μ}`, `1 ≤ i ≤ μ − 1`,
/// of `xy = f` with `f = Σ z_k^{n+1}` and `μ = n + 1`. Requires `m ≥ μ`.
pub fn candidates_ca(n: u32, d: u32, m: usize) -> Result<CandidateFamily, StrataError> {
    let mu = n as usize + 1;
    if m < mu {
        return Err(StrataError::Precondition(format!("m = {m} is below μ = {mu}")));
    }
    candidates_ca_general(n, d, m)
}

fn candidates_ca_general(n: u32, d: u32, m: usize) -> Result<CandidateFamily, StrataError> {
    let sc = ca_variety(n, d)?;
    let mu = n as usize + 1;
    let (ctx, fiber) = fiber_ideal(&sc.variety, m)?;
    let ring = sc.variety.ring().clone();
    let zs: Vec<usize> = (2..ring.nvars()).collect();
    let f = power_sum(&ring, &zs, n + 1);
    let strata = (1..mu)
        .map(|i| {
            let cons = [
                OrderConstraint::exactly(OrderTarget::Variable(0), i),
                OrderConstraint::exactly(OrderTarget::Variable(1), mu - i),
                OrderConstraint::exactly(OrderTarget::Poly(f.clone()), mu),
            ];
            stratum_from_constraints(format!("V{i}"), &ctx, &fiber, &cons)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CandidateFamily {
        tag: sc.tag,
        order: m,
        strata,
        expected_count: n as usize,
        formula: "μ − 1".into(),
    })
}

/// Below `μ` the fiber coincides with that of `xy = 0`, whose components
/// are `{ord x ≥ a, ord y ≥ m + 1 − a}`, `1 ≤ a ≤ m`; the root point at
/// `m = 0`.
pub fn candidates_ca_low(n: u32, d: u32, m: usize) -> Result<CandidateFamily, StrataError> {
    let sc = ca_variety(n, d)?;
    let (ctx, fiber) = fiber_ideal(&sc.variety, m)?;
    let strata = if m == 0 {
        vec![stratum_from_constraints("root", &ctx, &fiber, &[])?]
    } else {
        (1..=m)
            .map(|a| {
                let cons = [
                    OrderConstraint::at_least(OrderTarget::Variable(0), a),
                    OrderConstraint::at_least(OrderTarget::Variable(1), m + 1 - a),
                ];
                stratum_from_constraints(format!("L{a}"), &ctx, &fiber, &cons)
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    Ok(CandidateFamily {
        tag: sc.tag,
        order: m,
        expected_count: m.max(1),
        strata,
        formula: "max(m, 1) below μ".into(),
    })
}

/// Node `y² = x² + x³`: with branch coordinates `u, v = y ∓ x√(1+x)` the
/// equation is `uv = 0`, and the fiber at order `m` is covered by the
/// strata `C_a = {ord u = a, ord v ≥ m + 1 − a}`, `1 ≤ a ≤ m`.
pub fn candidates_node(m: usize) -> Result<CandidateFamily, StrataError> {
    let sc = Scenario::new(ScenarioTag::Node, 0)?;
    let ring = sc.variety.ring().clone();
    let (ctx, fiber) = fiber_ideal(&sc.variety, m)?;
    if m == 0 {
        let root = stratum_from_constraints("root", &ctx, &fiber, &[])?;
        return Ok(CandidateFamily { tag: ScenarioTag::Node, order: 0, strata: vec![root], expected_count: 1, formula: "m".into() });
    }
    let u = node_branch_coordinate(&ring, 1, m);
    let v = node_branch_coordinate(&ring, -1, m);
    let strata = (1..=m)
        .map(|a| {
            let cons = [
                OrderConstraint::exactly(OrderTarget::Poly(u.clone()), a),
                OrderConstraint::at_least(OrderTarget::Poly(v.clone()), m + 1 - a),
            ];
            stratum_from_constraints(format!("C{a}"), &ctx, &fiber, &cons)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CandidateFamily { tag: ScenarioTag::Node, order: m, strata, expected_count: m, formula: "m".into() })
}

/// A complete intersection of `e` random members of
/// `𝔞 = (u_1..u_{2e-2})² + 𝔟` in `𝔸^{2e+1}`.
#[derive(Clone, Debug)]
pub struct HdvFamily {
    pub e: u32,
    pub btype: BType,
    pub variety: VarietySpec,
    pub monomial_ideal: MonomialIdeal,
    pub seed: u64,
}

pub fn hdv_monomial_ideal(e: u32, btype: BType) -> MonomialIdeal {
    let k = (2 * e - 2) as usize;
    let nv = k + 3;
    let mut gens = Vec::new();
    for i in 0..k {
        for j in i..k {
            let mut v = vec![0u32; nv];
            v[i] += 1;
            v[j] += 1;
            gens.push(v);
        }
    }
    for b in btype.exponents() {
        let mut v = vec![0u32; nv];
        v[k..].copy_from_slice(&b);
        gens.push(v);
    }
    MonomialIdeal::new(nv, gens).expect("nonempty proper ideal")
}

pub fn hdv_ring(e: u32) -> Arc<Ring> {
    let mut names: Vec<String> = (1..=2 * e - 2).map(|i| format!("u{i}")).collect();
    names.extend(["x", "y", "z"].map(String::from));
    rational_ring(names)
}

pub fn candidates_hdv(e: u32, btype: BType, seed: u64) -> Result<HdvFamily, StrataError> {
    if e < 1 {
        return Err(StrataError::InvalidScenario(format!("e = {e}")));
    }
    btype.validate()?;
    let ring = hdv_ring(e);
    let a = hdv_monomial_ideal(e, btype);
    let monos: Vec<Polynomial> = a
        .generators()
        .iter()
        .map(|g| Polynomial::from_terms(&ring, [(Monomial::from_exponents(g), Rational::one())]))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys: Vec<Polynomial> = (0..e)
        .map(|_| {
            monos.iter().fold(Polynomial::zero(&ring), |acc, g| &acc + &g.scale(&rat(nonzero_draw(&mut rng, 9))))
        })
        .collect();
    let variety = VarietySpec::new(&ring, polys, None, None)?;
    Ok(HdvFamily { e, btype, variety, monomial_ideal: a, seed })
}
