//! Exhaustive enumeration of 𝔽_q points of jet fibers and other small
//! varieties, with early rejection of partial assignments.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::groebner::Ideal;
use crate::jets::{fiber_ideal, jet_ideal, JetContext, JetError, VarietySpec};
use crate::poly::{is_prime, mul_mod, reduce_mod_p, Polynomial, Rational, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("{q}^{vars} points exceed the budget of {max_points}")]
    BudgetExceeded { q: u64, vars: usize, max_points: u128 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient {0} is not defined modulo {1}")]
    BadReduction(String, u64),
    #[error("need at least two primes with nonzero counts")]
    NotEnoughData,
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Limits on exhaustive enumeration. Work beyond the budget is refused,
/// never sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationBudget {
    pub max_vars: usize,
    pub max_points: u128,
    /// Upper bound on parallel shards (0 = automatic).
    pub shards: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_vars: 24, max_points: 100_000_000, shards: 0 }
    }
}

impl EnumerationBudget {
    pub fn with_max_points(max_points: u128) -> Self {
        EnumerationBudget { max_points, ..Default::default() }
    }

    pub fn with_shards(self, shards: usize) -> Self {
        EnumerationBudget { shards, ..self }
    }

    /// Budget from `JETFIBER_MAX_POINTS` when set.
    pub fn from_env() -> Self {
        match std::env::var("JETFIBER_MAX_POINTS").ok().and_then(|v| v.parse().ok()) {
            Some(p) => Self::with_max_points(p),
            None => Self::default(),
        }
    }

    fn check(&self, q: u64, vars: usize) -> Result<(), EnumError> {
        let refuse = || EnumError::BudgetExceeded { q, vars, max_points: self.max_points };
        if vars > self.max_vars {
            return Err(refuse());
        }
        let mut total: u128 = 1;
        for _ in 0..vars {
            total = total.checked_mul(q as u128).ok_or_else(refuse)?;
        }
        if total > self.max_points {
            return Err(refuse());
        }
        Ok(())
    }
}

/// A polynomial with coefficients reduced mod q, as a term list.
#[derive(Clone, Debug)]
struct ModPoly {
    terms: Vec<(u64, Vec<(usize, u32)>)>,
    max_var: Option<usize>,
}

impl ModPoly {
    fn new(f: &Polynomial, q: u64) -> Result<ModPoly, EnumError> {
        let mut terms = Vec::new();
        let mut max_var = None;
        for (m, c) in f.terms() {
            let c = reduce_mod_p(c, q).ok_or_else(|| EnumError::BadReduction(c.to_string(), q))?;
            if c == 0 {
                continue;
            }
            let vars: Vec<(usize, u32)> = m.exponents().enumerate().filter(|(_, e)| *e > 0).collect();
            if let Some(&(i, _)) = vars.last() {
                max_var = Some(max_var.map_or(i, |v: usize| v.max(i)));
            }
            terms.push((c, vars));
        }
        Ok(ModPoly { terms, max_var })
    }

    fn eval(&self, x: &[u64], q: u64) -> u64 {
        let mut acc = 0u64;
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &(i, e) in vars {
                let mut p = 1u64;
                for _ in 0..e {
                    p = mul_mod(p, x[i], q);
                }
                t = mul_mod(t, p, q);
                if t == 0 {
                    break;
                }
            }
            acc = (acc + t) % q;
        }
        acc
    }
}

/// Generators grouped by the last variable they involve.
struct Schedule {
    nvars: usize,
    q: u64,
    constants_fail: bool,
    at: Vec<Vec<ModPoly>>,
}

impl Schedule {
    fn new(polys: &[Polynomial], nvars: usize, q: u64) -> Result<Schedule, EnumError> {
        let mut at: Vec<Vec<ModPoly>> = vec![Vec::new(); nvars];
        let mut constants_fail = false;
        for f in polys {
            let mp = ModPoly::new(f, q)?;
            match mp.max_var {
                Some(v) => at[v].push(mp),
                None => constants_fail |= !mp.terms.is_empty(),
            }
        }
        Ok(Schedule { nvars, q, constants_fail, at })
    }

    /// Depth-first enumeration from `depth`, calling `leaf` on every point.
    fn walk<F: FnMut(&[u64])>(&self, x: &mut Vec<u64>, depth: usize, leaf: &mut F) {
        if depth == self.nvars {
            leaf(x);
            return;
        }
        for v in 0..self.q {
            x[depth] = v;
            if self.at[depth].iter().all(|g| g.eval(x, self.q) == 0) {
                self.walk(x, depth + 1, leaf);
            }
        }
    }

    /// Run `leaf` over all points, sharded on a prefix of the variables.
    /// Each shard folds into its own accumulator; accumulators are merged.
    fn run<A, F, M>(&self, shards_hint: usize, init: impl Fn() -> A + Sync, leaf: F, merge: M) -> A
    where
        A: Send,
        F: Fn(&mut A, &[u64]) + Sync,
        M: Fn(A, A) -> A + Sync + Send,
    {
        if self.constants_fail {
            return init();
        }
        if self.nvars == 0 {
            let mut acc = init();
            leaf(&mut acc, &[]);
            return acc;
        }
        let target = if shards_hint == 0 { rayon::current_num_threads() * 4 } else { shards_hint };
        let mut prefix_len = 0;
        let mut count = 1usize;
        while prefix_len < self.nvars && count < target {
            prefix_len += 1;
            count = count.saturating_mul(self.q as usize);
        }
        // surviving prefixes after early rejection
        let mut prefixes: Vec<Vec<u64>> = vec![vec![0; self.nvars]];
        for depth in 0..prefix_len {
            let mut next = Vec::new();
            for p in prefixes {
                for v in 0..self.q {
                    let mut x = p.clone();
                    x[depth] = v;
                    if self.at[depth].iter().all(|g| g.eval(&x, self.q) == 0) {
                        next.push(x);
                    }
                }
            }
            prefixes = next;
        }
        prefixes
            .into_par_iter()
            .map(|mut x| {
                let mut acc = init();
                self.walk(&mut x, prefix_len, &mut |pt| leaf(&mut acc, pt));
                acc
            })
            .reduce(&init, &merge)
    }
}

fn check_prime(q: u64) -> Result<(), EnumError> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(EnumError::NotPrime(q))
    }
}

/// Number of 𝔽_q points of `V(ideal)` in the ideal's ring.
pub fn count_points(ideal: &Ideal, q: u64, budget: &EnumerationBudget) -> Result<u64, EnumError> {
    check_prime(q)?;
    let n = ideal.ring().nvars();
    budget.check(q, n)?;
    let s = Schedule::new(ideal.generators(), n, q)?;
    Ok(s.run(budget.shards, || 0u64, |acc, _| *acc += 1, |a, b| a + b))
}

/// All 𝔽_q points of `V(ideal)`, in lexicographic order.
pub fn enumerate_points(ideal: &Ideal, q: u64, budget: &EnumerationBudget) -> Result<Vec<Vec<u64>>, EnumError> {
    check_prime(q)?;
    let n = ideal.ring().nvars();
    budget.check(q, n)?;
    let s = Schedule::new(ideal.generators(), n, q)?;
    let mut out = s.run(budget.shards, Vec::new, |acc: &mut Vec<Vec<u64>>, pt| acc.push(pt.to_vec()), |mut a, b| {
        a.extend(b);
        a
    });
    out.sort();
    Ok(out)
}

/// Order of a target along an 𝔽_q jet: `None` encodes "above m".
pub type Profile = Vec<Option<usize>>;

/// Point count of a fiber, bucketed by the order profile of the targets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StratifiedCount {
    pub q: u64,
    pub order: usize,
    pub total: u64,
    /// Profile keys render as comma-separated orders, `inf` above `m`.
    pub buckets: BTreeMap<String, u64>,
}

fn profile_key(p: &Profile) -> String {
    p.iter().map(|o| o.map_or_else(|| "inf".to_string(), |v| v.to_string())).collect::<Vec<_>>().join(",")
}

/// Enumerate the 𝔽_q points of the fiber of `X_m → X` over the variety's
/// point, bucketing by the orders of `targets` (ambient polynomials).
pub fn count_fiber_points(
    v: &VarietySpec,
    m: usize,
    q: u64,
    targets: &[Polynomial],
    budget: &EnumerationBudget,
) -> Result<StratifiedCount, EnumError> {
    check_prime(q)?;
    let (ctx, fiber) = fiber_ideal(v, m)?;
    let n = ctx.ring().nvars();
    budget.check(q, n)?;
    let s = Schedule::new(fiber.generators(), n, q)?;
    let derivs: Vec<Vec<ModPoly>> = targets
        .iter()
        .map(|t| ctx.derivatives(t).iter().map(|d| ModPoly::new(d, q)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let buckets = s.run(
        budget.shards,
        BTreeMap::<Profile, u64>::new,
        |acc, pt| {
            let prof: Profile = derivs.iter().map(|ds| ds.iter().position(|d| d.eval(pt, q) != 0)).collect();
            *acc.entry(prof).or_insert(0) += 1;
        },
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        },
    );
    let total = buckets.values().sum();
    Ok(StratifiedCount {
        q,
        order: m,
        total,
        buckets: buckets.iter().map(|(k, v)| (profile_key(k), *v)).collect(),
    })
}

/// Number of 𝔽_q points of the full jet scheme `X_m`.
pub fn count_jet_scheme_points(v: &VarietySpec, m: usize, q: u64, budget: &EnumerationBudget) -> Result<u64, EnumError> {
    let (_, ideal) = jet_ideal(v, m)?;
    count_points(&ideal, q, budget)
}

/// `round(log(N₂/N₁) / log(q₂/q₁))` over the first two entries, together
/// with the raw exponent.
pub fn dim_estimate(counts: &[(u64, u64)]) -> Result<(i64, f64), EnumError> {
    let usable: Vec<&(u64, u64)> = counts.iter().filter(|(_, n)| *n > 0).collect();
    if usable.len() < 2 {
        return Err(EnumError::NotEnoughData);
    }
    let (q1, n1) = *usable[0];
    let (q2, n2) = *usable[1];
    let raw = ((n2 as f64) / (n1 as f64)).ln() / ((q2 as f64) / (q1 as f64)).ln();
    Ok((raw.round() as i64, raw))
}

/// Membership pattern of fiber points in a list of closures.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CoverOracle {
    pub q: u64,
    pub fiber_points: u64,
    /// Fiber points lying on no closure.
    pub uncovered: u64,
    /// Per closure: points of the fiber on that closure and on no other.
    pub private_points: Vec<u64>,
    /// Per closure: all fiber points on it.
    pub closure_points: Vec<u64>,
    /// Closure points that are not fiber points (must be zero).
    pub closure_outside_fiber: u64,
}

impl CoverOracle {
    pub fn covered(&self) -> bool {
        self.uncovered == 0 && self.closure_outside_fiber == 0
    }

    pub fn all_private(&self) -> bool {
        self.private_points.iter().all(|&p| p > 0)
    }
}

/// Enumerate the fiber and test every point against each closure.
pub fn cover_oracle(
    fiber: &Ideal,
    closures: &[Ideal],
    q: u64,
    budget: &EnumerationBudget,
) -> Result<CoverOracle, EnumError> {
    check_prime(q)?;
    let n = fiber.ring().nvars();
    budget.check(q, n)?;
    let k = closures.len();
    let closure_polys: Vec<Vec<ModPoly>> = closures
        .iter()
        .map(|c| c.generators().iter().map(|g| ModPoly::new(g, q)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let s = Schedule::new(fiber.generators(), n, q)?;
    let masks = s.run(
        budget.shards,
        BTreeMap::<u128, u64>::new,
        |acc, pt| {
            let mask = closure_polys
                .iter()
                .enumerate()
                .filter(|(_, gs)| gs.iter().all(|g| g.eval(pt, q) == 0))
                .fold(0u128, |m, (i, _)| m | (1 << i));
            *acc.entry(mask).or_insert(0) += 1;
        },
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        },
    );
    let mut out = CoverOracle { q, private_points: vec![0; k], closure_points: vec![0; k], ..Default::default() };
    for (mask, cnt) in &masks {
        out.fiber_points += cnt;
        if *mask == 0 {
            out.uncovered += cnt;
        }
        for i in 0..k {
            if mask & (1 << i) != 0 {
                out.closure_points[i] += cnt;
                if mask.count_ones() == 1 {
                    out.private_points[i] += cnt;
                }
            }
        }
    }
    // closures must lie inside the fiber
    let mut outside = 0;
    for c in closures {
        let total = count_points(c, q, budget)?;
        let inside = {
            let joined = c.sum(fiber).map_err(|e| EnumError::Jet(e.into()))?;
            count_points(&joined, q, budget)?
        };
        outside += total - inside;
    }
    out.closure_outside_fiber = outside;
    Ok(out)
}

/// Cone formula check: `|π_m^{-1}(0)(𝔽_q)| = |X_{m−r}(𝔽_q)| · q^{N(r−1)}`
/// for the cone `Σ v_i^r = 0` in `𝔸^N`, both sides enumerated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeCheck {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub q: u64,
    pub fiber_count: u64,
    pub lower_jet_count: u64,
    pub factor: u64,
    pub holds: bool,
}

pub fn cone_variety(n: usize, r: usize) -> Result<VarietySpec, EnumError> {
    let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let ring = Ring::new(names, crate::poly::Domain::Rational, crate::poly::MonomialOrder::GrevLex)
        .map_err(|e| EnumError::Jet(e.into()))?;
    let f = (0..n).fold(Polynomial::zero(&ring), |acc, i| &acc + &Polynomial::var(&ring, i).pow(r as u32));
    Ok(VarietySpec::new(&ring, vec![f], Some(n as i64 - 1), None)?)
}

pub fn cone_product_check(n: usize, r: usize, m: usize, q: u64, budget: &EnumerationBudget) -> Result<ConeCheck, EnumError> {
    if m < r {
        return Err(EnumError::Jet(JetError::Invalid(format!("m = {m} is below r = {r}"))));
    }
    let v = cone_variety(n, r)?;
    let fiber = count_fiber_points(&v, m, q, &[], budget)?.total;
    let lower = count_jet_scheme_points(&v, m - r, q, budget)?;
    let factor = q.pow((n * (r - 1)) as u32);
    Ok(ConeCheck { n, r, m, q, fiber_count: fiber, lower_jet_count: lower, factor, holds: fiber == lower * factor })
}

/// Convert a rational point to 𝔽_q, if every coordinate reduces.
pub fn reduce_point(pt: &[Rational], q: u64) -> Option<Vec<u64>> {
    pt.iter().map(|c| reduce_mod_p(c, q)).collect()
}

/// Points of a context's jet ring whose truncation data is given by
/// ambient-coordinate series (used to place witnesses in 𝔽_q buckets).
pub fn jet_point_mod(ctx: &JetContext, series: &[Vec<Rational>], q: u64) -> Option<Vec<u64>> {
    reduce_point(&ctx.point_of(series), q)
}
