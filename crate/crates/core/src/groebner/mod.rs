//! Gröbner bases and the ideal operations built on them: membership,
//! containment, elimination, saturation, radical membership, intersection and
//! Krull dimension.

mod engine;

use std::sync::{Arc, OnceLock};
use std::time::Duration;

use thiserror::Error;

use crate::poly::{Monomial, MonomialOrder, PolyError, Polynomial, Rational, Ring};
use engine::{Engine, GPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("computation too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("saturating by the zero polynomial")]
    ZeroSaturator,
    #[error("variable `{0}` is not in the ring")]
    UnknownVariable(String),
}

/// Hard resource caps. Exceeding any of them is an error, never a silent
/// truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerConfig {
    pub max_pairs: usize,
    pub max_degree: u32,
    pub time_limit: Option<Duration>,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            max_pairs: 200_000,
            max_degree: 64,
            time_limit: Some(Duration::from_secs(600)),
        }
    }
}

/// An ideal of a polynomial ring together with a lazily computed reduced
/// Gröbner basis for the ring's monomial order.
pub struct Ideal {
    ring: Arc<Ring>,
    generators: Vec<Polynomial>,
    basis: OnceLock<Vec<Polynomial>>,
    config: GroebnerConfig,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let basis = OnceLock::new();
        if let Some(b) = self.basis.get() {
            let _ = basis.set(b.clone());
        }
        Ideal {
            ring: self.ring.clone(),
            generators: self.generators.clone(),
            basis,
            config: self.config.clone(),
        }
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

fn fresh_name(ring: &Ring, stem: &str) -> String {
    let mut name = stem.to_string();
    while ring.var_index(&name).is_some() {
        name.push('_');
    }
    name
}

impl Ideal {
    /// Ideal generated by `generators`; zero generators are dropped and every
    /// generator is moved into `ring`.
    pub fn new(ring: &Arc<Ring>, generators: Vec<Polynomial>) -> Result<Ideal, GroebnerError> {
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if !g.ring().same_space(ring) {
                return Err(PolyError::RingMismatch.into());
            }
            if !g.is_zero() {
                gens.push(g.with_ring(ring));
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: gens,
            basis: OnceLock::new(),
            config: GroebnerConfig::default(),
        })
    }

    pub fn zero(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(ring, vec![]).expect("empty generator list")
    }

    pub fn unit(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(ring, vec![Polynomial::one(ring)]).expect("same ring")
    }

    /// Parse comma-free list of generator strings.
    pub fn parse<S: AsRef<str>>(ring: &Arc<Ring>, gens: &[S]) -> Result<Ideal, GroebnerError> {
        let polys = gens
            .iter()
            .map(|s| crate::poly::parse_polynomial(s.as_ref(), ring))
            .collect::<Result<Vec<_>, _>>()?;
        Ideal::new(ring, polys)
    }

    pub fn with_config(mut self, config: GroebnerConfig) -> Ideal {
        self.config = config;
        self
    }

    pub fn config(&self) -> &GroebnerConfig {
        &self.config
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    fn derived(&self, ring: &Arc<Ring>, gens: Vec<Polynomial>) -> Result<Ideal, GroebnerError> {
        Ok(Ideal::new(ring, gens)?.with_config(self.config.clone()))
    }

    fn check_same(&self, other: &Ideal) -> Result<(), GroebnerError> {
        if self.ring.same_space(&other.ring) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch.into())
        }
    }

    fn compute_basis(&self, ring: &Arc<Ring>) -> Result<Vec<Polynomial>, GroebnerError> {
        let engine = Engine::new(ring.order(), ring.domain(), &self.config);
        let input: Vec<GPoly> = self
            .generators
            .iter()
            .map(|g| engine.import(&g.with_ring(ring)).0)
            .collect();
        let out = engine.groebner(input)?;
        Ok(out.iter().map(|g| engine.export(g, ring)).collect())
    }

    /// Reduced Gröbner basis for the ring's order (cached).
    pub fn groebner_basis(&self) -> Result<&[Polynomial], GroebnerError> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let b = self.compute_basis(&self.ring)?;
        // generators must reduce to zero modulo the cached basis
        let engine = Engine::new(self.ring.order(), self.ring.domain(), &self.config);
        let imported: Vec<GPoly> = b.iter().map(|p| engine.import(p).0).collect();
        for g in &self.generators {
            if !engine.normal_form(g, &imported, &self.ring).is_zero() {
                return Err(GroebnerError::TooLarge(format!(
                    "basis verification failed for generator {g}"
                )));
            }
        }
        Ok(self.basis.get_or_init(|| b))
    }

    /// Reduced Gröbner basis for another monomial order.
    pub fn groebner_basis_for(
        &self,
        order: MonomialOrder,
    ) -> Result<Vec<Polynomial>, GroebnerError> {
        let ring = self.ring.with_order(order)?;
        self.compute_basis(&ring)
    }

    /// This ideal viewed in the same variables with a different order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Ideal, GroebnerError> {
        let ring = self.ring.with_order(order)?;
        self.derived(
            &ring,
            self.generators.iter().map(|g| g.with_ring(&ring)).collect(),
        )
    }

    /// Remainder of `f` modulo the reduced basis; zero iff `f` is in the ideal.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial, GroebnerError> {
        if !f.ring().same_space(&self.ring) {
            return Err(PolyError::RingMismatch.into());
        }
        let basis = self.groebner_basis()?;
        let engine = Engine::new(self.ring.order(), self.ring.domain(), &self.config);
        let imported: Vec<GPoly> = basis.iter().map(|p| engine.import(p).0).collect();
        Ok(engine.normal_form(&f.with_ring(&self.ring), &imported, &self.ring))
    }

    pub fn contains_poly(&self, f: &Polynomial) -> Result<bool, GroebnerError> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Ideal) -> Result<bool, GroebnerError> {
        self.check_same(other)?;
        for g in &other.generators {
            if !self.contains_poly(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Mutual containment.
    pub fn equals(&self, other: &Ideal) -> Result<bool, GroebnerError> {
        Ok(self.contains(other)? && other.contains(self)?)
    }

    pub fn is_unit(&self) -> Result<bool, GroebnerError> {
        Ok(self.groebner_basis()?.iter().any(Polynomial::is_constant))
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal, GroebnerError> {
        self.check_same(other)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().map(|g| g.with_ring(&self.ring)));
        self.derived(&self.ring, gens)
    }

    pub fn add_generators(&self, extra: &[Polynomial]) -> Result<Ideal, GroebnerError> {
        let mut gens = self.generators.clone();
        for g in extra {
            if !g.ring().same_space(&self.ring) {
                return Err(PolyError::RingMismatch.into());
            }
            gens.push(g.with_ring(&self.ring));
        }
        self.derived(&self.ring, gens)
    }

    /// `I ∩ k[remaining variables]`, returned in the ring of the remaining
    /// variables (grevlex, or lex when this ring is lex-ordered).
    pub fn eliminate(&self, drop: &[usize]) -> Result<Ideal, GroebnerError> {
        let n = self.ring.nvars();
        if let Some(&bad) = drop.iter().find(|&&i| i >= n) {
            return Err(GroebnerError::UnknownVariable(format!("#{bad}")));
        }
        let keep: Vec<usize> = (0..n).filter(|i| !drop.contains(i)).collect();
        let elim_ring = self
            .ring
            .with_order(self.ring.order().elimination_like(n, drop))?;
        let basis = self.compute_basis(&elim_ring)?;
        let mut map = vec![None; n];
        for (j, &i) in keep.iter().enumerate() {
            map[i] = Some(j);
        }
        // restriction of the elimination order to the kept variables
        let small_order = match elim_ring.order() {
            MonomialOrder::LexBy(seq) => {
                let rest: Vec<usize> = seq.iter().filter_map(|&i| map[i]).collect();
                if rest.windows(2).all(|w| w[0] < w[1]) {
                    MonomialOrder::Lex
                } else {
                    MonomialOrder::LexBy(rest)
                }
            }
            MonomialOrder::WeightedBlock(_, w) => MonomialOrder::Weighted(keep.iter().map(|&i| w[i]).collect()),
            _ => MonomialOrder::GrevLex,
        };
        let small = Ring::new(
            keep.iter()
                .map(|&i| self.ring.variable(i).to_string())
                .collect(),
            self.ring.domain(),
            small_order,
        )?;
        let gens: Vec<Polynomial> = basis
            .iter()
            .filter(|p| drop.iter().all(|&d| p.degree_in(d) == 0))
            .map(|p| p.remap(&small, &map))
            .collect::<Result<_, _>>()?;
        let out = self.derived(&small, gens.clone())?;
        // the surviving elements are already a reduced basis for the restricted order
        let _ = out.basis.set(gens.into_iter().map(|g| g.monic()).collect());
        Ok(out)
    }

    /// Eliminate by variable name.
    pub fn eliminate_named(&self, drop: &[&str]) -> Result<Ideal, GroebnerError> {
        let idx = drop
            .iter()
            .map(|v| {
                self.ring
                    .var_index(v)
                    .ok_or_else(|| GroebnerError::UnknownVariable(v.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.eliminate(&idx)
    }

    /// Ring with one extra leading variable `w`, and the embedding map.
    fn with_tag_variable(&self) -> Result<(Arc<Ring>, Vec<Option<usize>>), GroebnerError> {
        let w = fresh_name(&self.ring, "w_");
        let mut names = vec![w];
        names.extend(self.ring.variables().iter().cloned());
        let order = match self.ring.order() {
            MonomialOrder::Lex | MonomialOrder::LexBy(_) => MonomialOrder::Lex,
            MonomialOrder::Weighted(w) => MonomialOrder::Weighted(std::iter::once(1).chain(w.iter().copied()).collect()),
            _ => MonomialOrder::GrevLex,
        };
        let big = Ring::new(names, self.ring.domain(), order)?;
        let map = (0..self.ring.nvars()).map(|i| Some(i + 1)).collect();
        Ok((big, map))
    }

    fn back_to_ring(&self, elim: Ideal) -> Result<Ideal, GroebnerError> {
        // `elim` lives in the original variables (tag removed) but is a new Ring object
        let gens: Vec<Polynomial> = elim
            .generators
            .iter()
            .map(|g| g.with_ring(&self.ring))
            .collect();
        let out = self.derived(&self.ring, gens)?;
        if self.ring.order() == elim.ring.order() {
            if let Some(b) = elim.basis.get() {
                let _ = out
                    .basis
                    .set(b.iter().map(|g| g.with_ring(&self.ring)).collect());
            }
        }
        Ok(out)
    }

    /// `I : g^∞`, computed by eliminating `w` from `I + (w g - 1)`.
    pub fn saturate(&self, g: &Polynomial) -> Result<Ideal, GroebnerError> {
        if g.is_zero() {
            return Err(GroebnerError::ZeroSaturator);
        }
        if !g.ring().same_space(&self.ring) {
            return Err(PolyError::RingMismatch.into());
        }
        let (big, map) = self.with_tag_variable()?;
        let mut gens: Vec<Polynomial> = self
            .generators
            .iter()
            .map(|p| p.remap(&big, &map))
            .collect::<Result<_, _>>()?;
        let w = Polynomial::var(&big, 0);
        gens.push(&(&w * &g.remap(&big, &map)?) - &Polynomial::one(&big));
        let lifted = self.derived(&big, gens)?;
        self.back_to_ring(lifted.eliminate(&[0])?)
    }

    /// True iff `f` vanishes on the zero set of the ideal.
    pub fn radical_contains(&self, f: &Polynomial) -> Result<bool, GroebnerError> {
        if self.contains_poly(f)? {
            return Ok(true);
        }
        let (big, map) = self.with_tag_variable()?;
        let mut gens: Vec<Polynomial> = self
            .generators
            .iter()
            .map(|p| p.remap(&big, &map))
            .collect::<Result<_, _>>()?;
        let w = Polynomial::var(&big, 0);
        gens.push(&(&w * &f.remap(&big, &map)?) - &Polynomial::one(&big));
        self.derived(&big, gens)?.is_unit()
    }

    /// `I ∩ J`, by eliminating `w` from `w I + (1 - w) J`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal, GroebnerError> {
        self.check_same(other)?;
        let (big, map) = self.with_tag_variable()?;
        let w = Polynomial::var(&big, 0);
        let one_minus_w = &Polynomial::one(&big) - &w;
        let mut gens = Vec::new();
        for p in &self.generators {
            gens.push(&w * &p.remap(&big, &map)?);
        }
        for p in &other.generators {
            gens.push(&one_minus_w * &p.remap(&big, &map)?);
        }
        let lifted = self.derived(&big, gens)?;
        self.back_to_ring(lifted.eliminate(&[0])?)
    }

    /// Krull dimension of the zero set; `-1` for the unit ideal.
    pub fn dimension(&self) -> Result<i64, GroebnerError> {
        // the initial ideal of any monomial order has the same dimension
        let n = self.ring.nvars();
        let basis = self.groebner_basis()?.to_vec();
        if basis.iter().any(Polynomial::is_constant) {
            return Ok(-1);
        }
        let lms: Vec<Monomial> = basis
            .iter()
            .map(|p| {
                let ring = p.ring();
                p.terms()
                    .map(|(m, _)| m)
                    .max_by(|a, b| ring.compare(a, b))
                    .expect("nonzero")
                    .clone()
            })
            .collect();
        Ok(max_independent_set(n, &lms) as i64)
    }

    /// Check the Buchberger criterion on the cached basis.
    pub fn verify_basis(&self) -> Result<bool, GroebnerError> {
        let basis = self.groebner_basis()?;
        let engine = Engine::new(self.ring.order(), self.ring.domain(), &self.config);
        let imported: Vec<GPoly> = basis.iter().map(|p| engine.import(p).0).collect();
        Ok(engine.satisfies_buchberger_criterion(&imported))
    }
}

/// Size of the largest variable set containing no leading-monomial support.
pub fn max_independent_set(nvars: usize, lms: &[Monomial]) -> usize {
    assert!(nvars <= 128, "dimension supports at most 128 variables");
    let supports: Vec<u128> = lms
        .iter()
        .map(|m| {
            m.exponents()
                .enumerate()
                .filter(|(_, e)| *e > 0)
                .fold(0u128, |acc, (i, _)| acc | (1u128 << i))
        })
        .collect();
    fn search(v: usize, n: usize, chosen: u128, size: usize, supports: &[u128], best: &mut usize) {
        if size + (n - v) <= *best {
            return;
        }
        if v == n {
            *best = size;
            return;
        }
        let with = chosen | (1u128 << v);
        if supports.iter().all(|s| s & !with != 0) {
            search(v + 1, n, with, size + 1, supports, best);
        }
        search(v + 1, n, chosen, size, supports, best);
    }
    let mut best = 0;
    search(0, nvars, 0, 0, &supports, &mut best);
    best
}

/// `(f - g)` for rational constant shifts; convenience for point ideals.
pub fn point_ideal(ring: &Arc<Ring>, point: &[Rational]) -> Result<Ideal, GroebnerError> {
    let gens = point
        .iter()
        .enumerate()
        .map(|(i, c)| &Polynomial::var(ring, i) - &Polynomial::constant(ring, c.clone()))
        .collect();
    Ideal::new(ring, gens)
}
