//! Singularity invariants: log canonical thresholds of monomial ideals,
//! multiplicity, embedding dimension and codimension, blow-up discrepancy
//! bounds, and certificates for higher Du Val families.

mod hdv;
pub mod lp;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::groebner::GroebnerError;
use crate::jets::{JetError, VarietySpec};
use crate::poly::{PolyError, Polynomial, Rational};
pub use hdv::{hdv_certificate, hdv_certificate_attempts, hdv_certificate_for, hyperplane_section, HdvCertificate, HdvChecks};
use lp::LpOutcome;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("monomial ideal must have at least one generator")]
    EmptyIdeal,
    #[error("monomial ideal is the unit ideal")]
    UnitIdeal,
    #[error("exponent vector has {got} entries, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("{got} generators exceed the oracle cap {cap}")]
    TooManyGenerators { got: usize, cap: usize },
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error("generator {0} does not vanish at the point")]
    NotVanishing(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("validation failed after {0} draws")]
    RedrawsExhausted(usize),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<crate::strata::StrataError> for InvariantError {
    fn from(e: crate::strata::StrataError) -> Self {
        match e {
            crate::strata::StrataError::Jet(j) => InvariantError::Jet(j),
            crate::strata::StrataError::Groebner(g) => InvariantError::Groebner(g),
            other => InvariantError::Invalid(other.to_string()),
        }
    }
}

/// A monomial ideal given by its minimal exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialIdeal {
    nvars: usize,
    generators: Vec<Vec<u32>>,
}

impl MonomialIdeal {
    /// Drops non-minimal generators and duplicates.
    pub fn new(nvars: usize, gens: Vec<Vec<u32>>) -> Result<MonomialIdeal, InvariantError> {
        if gens.is_empty() {
            return Err(InvariantError::EmptyIdeal);
        }
        for g in &gens {
            if g.len() != nvars {
                return Err(InvariantError::Arity { expected: nvars, got: g.len() });
            }
        }
        let dominates = |a: &Vec<u32>, b: &Vec<u32>| a.iter().zip(b).all(|(x, y)| x >= y);
        let mut out: Vec<Vec<u32>> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let redundant = gens
                .iter()
                .enumerate()
                .any(|(j, h)| j != i && dominates(g, h) && (g != h || j < i));
            if !redundant {
                out.push(g.clone());
            }
        }
        out.sort();
        Ok(MonomialIdeal { nvars, generators: out })
    }

    /// Parse `x^2, y^2, z^3`-style generator lists; variables in order of
    /// first appearance unless `vars` is given.
    pub fn parse(text: &str, vars: Option<&[String]>) -> Result<MonomialIdeal, InvariantError> {
        let pieces: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let names: Vec<String> = match vars {
            Some(v) => v.to_vec(),
            None => {
                let mut names: Vec<String> = Vec::new();
                for p in &pieces {
                    for id in crate::poly::identifiers(p)? {
                        if !names.contains(&id) {
                            names.push(id);
                        }
                    }
                }
                names
            }
        };
        let ring = crate::poly::Ring::new(names, crate::poly::Domain::Rational, crate::poly::MonomialOrder::GrevLex)?;
        let mut gens = Vec::new();
        for p in pieces {
            let f = crate::poly::parse_polynomial(p, &ring)?;
            if f.num_terms() != 1 {
                return Err(InvariantError::Invalid(format!("`{p}` is not a monomial")));
            }
            let (m, _) = f.terms().next().expect("one term");
            gens.push(m.to_vec());
        }
        MonomialIdeal::new(ring.nvars(), gens)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn is_proper(&self) -> bool {
        self.generators.iter().all(|g| g.iter().any(|&e| e > 0))
    }

    /// The ideal `a + b` in the disjoint union of the two variable blocks.
    pub fn join(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let n = self.nvars + other.nvars;
        let mut gens: Vec<Vec<u32>> = self
            .generators
            .iter()
            .map(|g| g.iter().cloned().chain(std::iter::repeat_n(0, other.nvars)).collect())
            .collect();
        gens.extend(other.generators.iter().map(|g| std::iter::repeat_n(0, self.nvars).chain(g.iter().cloned()).collect()));
        MonomialIdeal::new(n, gens).expect("nonempty")
    }

    /// All exponent vectors multiplied by `c`.
    pub fn scaled(&self, c: u32) -> MonomialIdeal {
        MonomialIdeal::new(self.nvars, self.generators.iter().map(|g| g.iter().map(|e| e * c).collect()).collect())
            .expect("nonempty")
    }

    /// `(v_1, ..., v_k)^2`.
    pub fn maximal_squared(k: usize) -> MonomialIdeal {
        let mut gens = Vec::new();
        for i in 0..k {
            for j in i..k {
                let mut v = vec![0; k];
                v[i] += 1;
                v[j] += 1;
                gens.push(v);
            }
        }
        MonomialIdeal::new(k, gens).expect("k >= 1")
    }
}

/// An exact lct together with primal and dual LP certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LctResult {
    #[serde(serialize_with = "ser_rat")]
    pub lct: Rational,
    /// Optimal `s*`: the smallest `s` with `Σ λ_j a_j ≤ s·(1,…,1)`.
    #[serde(serialize_with = "ser_rat")]
    pub s: Rational,
    /// Convex weights on the generators attaining `s*`.
    #[serde(serialize_with = "ser_rats")]
    pub lambda: Vec<Rational>,
    /// Weights `w` on the coordinates with `⟨w, a_j⟩ ≥ s*` for every `j`.
    #[serde(serialize_with = "ser_rats")]
    pub dual: Vec<Rational>,
}

pub(crate) fn ser_rat<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub(crate) fn ser_rats<S: serde::Serializer>(r: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(r.iter().map(|x| x.to_string()))
}

fn r(n: u32) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Primal program in standard form: variables `λ_1..λ_k, s, σ_1..σ_N`.
fn primal_program(a: &MonomialIdeal) -> (Vec<Vec<Rational>>, Vec<Rational>, Vec<Rational>) {
    let k = a.generators.len();
    let n = a.nvars;
    let cols = k + 1 + n;
    let mut rows = Vec::new();
    for i in 0..n {
        let mut row = vec![Rational::zero(); cols];
        for (j, g) in a.generators.iter().enumerate() {
            row[j] = r(g[i]);
        }
        row[k] = -Rational::one();
        row[k + 1 + i] = Rational::one();
        rows.push(row);
    }
    let mut last = vec![Rational::zero(); cols];
    for v in last.iter_mut().take(k) {
        *v = Rational::one();
    }
    rows.push(last);
    let mut b = vec![Rational::zero(); n];
    b.push(Rational::one());
    let mut c = vec![Rational::zero(); cols];
    c[k] = Rational::one();
    (rows, b, c)
}

/// Howald's formula: `lct(a) = max{c : (1,…,1) ∈ c·Newt(a)}`, computed by
/// exact simplex on both the primal and the dual program.
pub fn lct_monomial(a: &MonomialIdeal) -> Result<LctResult, InvariantError> {
    if !a.is_proper() {
        return Err(InvariantError::UnitIdeal);
    }
    let k = a.generators.len();
    let n = a.nvars;
    let (rows, b, c) = primal_program(a);
    let (s, lambda) = match lp::simplex(&rows, &b, &c) {
        LpOutcome::Optimal { value, x } => (value, x[..k].to_vec()),
        other => return Err(InvariantError::Lp(format!("{other:?}"))),
    };
    // dual: variables w_1..w_N, t, τ_1..τ_k; ⟨w, a_j⟩ − t − τ_j = 0, Σ w = 1, maximize t
    let cols = n + 1 + k;
    let mut drows = Vec::new();
    for (j, g) in a.generators.iter().enumerate() {
        let mut row = vec![Rational::zero(); cols];
        for i in 0..n {
            row[i] = r(g[i]);
        }
        row[n] = -Rational::one();
        row[n + 1 + j] = -Rational::one();
        drows.push(row);
    }
    let mut last = vec![Rational::zero(); cols];
    for v in last.iter_mut().take(n) {
        *v = Rational::one();
    }
    drows.push(last);
    let mut db = vec![Rational::zero(); k];
    db.push(Rational::one());
    let mut dc = vec![Rational::zero(); cols];
    dc[n] = -Rational::one();
    let (t, dual) = match lp::simplex(&drows, &db, &dc) {
        LpOutcome::Optimal { value, x } => (-value, x[..n].to_vec()),
        other => return Err(InvariantError::Lp(format!("dual: {other:?}"))),
    };
    let res = LctResult { lct: s.recip(), s, lambda, dual };
    if t != res.s || !verify_lct(a, &res) {
        return Err(InvariantError::Lp("certificate verification failed".into()));
    }
    Ok(res)
}

/// Check the primal and dual certificates by direct arithmetic.
pub fn verify_lct(a: &MonomialIdeal, res: &LctResult) -> bool {
    let n = a.nvars;
    let one = Rational::one();
    if res.lambda.len() != a.generators.len() || res.dual.len() != n {
        return false;
    }
    let nonneg = |v: &[Rational]| v.iter().all(|x| !x.is_negative());
    if !nonneg(&res.lambda) || !nonneg(&res.dual) {
        return false;
    }
    if res.lambda.iter().sum::<Rational>() != one || res.dual.iter().sum::<Rational>() != one {
        return false;
    }
    let primal_ok = (0..n).all(|i| {
        let v: Rational = a.generators.iter().zip(&res.lambda).map(|(g, l)| l * r(g[i])).sum();
        v <= res.s
    });
    let dual_ok = a.generators.iter().all(|g| {
        let v: Rational = g.iter().zip(&res.dual).map(|(&e, w)| w * r(e)).sum();
        v >= res.s
    });
    primal_ok && dual_ok && &res.lct * &res.s == one
}

/// Independent lct by enumerating every basic solution of the primal
/// program; limited to `cap` generators.
pub fn lct_by_vertex_enumeration(a: &MonomialIdeal, cap: usize) -> Result<Rational, InvariantError> {
    if a.generators.len() > cap {
        return Err(InvariantError::TooManyGenerators { got: a.generators.len(), cap });
    }
    if !a.is_proper() {
        return Err(InvariantError::UnitIdeal);
    }
    let (rows, b, c) = primal_program(a);
    let (s, _) = lp::min_over_basic_solutions(&rows, &b, &c).ok_or_else(|| InvariantError::Lp("no basic solution".into()))?;
    Ok(s.recip())
}

/// Thom–Sebastiani for monomial ideals in disjoint variable blocks.
pub fn lct_sum_disjoint(a: &MonomialIdeal, b: &MonomialIdeal) -> Result<Rational, InvariantError> {
    Ok(lct_monomial(a)?.lct + lct_monomial(b)?.lct)
}

fn translate(f: &Polynomial, x: &[Rational]) -> Polynomial {
    let ring = f.ring();
    let images: Vec<Polynomial> = (0..ring.nvars())
        .map(|i| &Polynomial::var(ring, i) + &Polynomial::constant(ring, x[i].clone()))
        .collect();
    f.compose(ring, &images)
}

/// Order of vanishing at `x` of the generator set.
pub fn multiplicity_at(polys: &[Polynomial], x: &[Rational]) -> Result<u32, InvariantError> {
    let mut best: Option<u32> = None;
    for f in polys {
        if !f.evaluate(x)?.is_zero() {
            return Err(InvariantError::NotVanishing(f.to_string()));
        }
        if let Some(d) = translate(f, x).lowest_degree() {
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    best.ok_or_else(|| InvariantError::Invalid("no nonzero generators".into()))
}

/// `N − c·mult`: log discrepancy of the exceptional divisor of the blow-up
/// of a point for the pair `(𝔸^N, c·X)`.
pub fn blowup_log_discrepancy(n: u32, c: &Rational, mult: u32) -> Rational {
    r(n) - c * r(mult)
}

/// Rank of a rational matrix by fraction-free (Bareiss) elimination.
pub fn matrix_rank(m: &[Vec<Rational>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    // clear denominators row by row
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let rows = a.len();
    let cols = a[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                a[r][c] = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingData {
    pub edim: i64,
    pub dim: i64,
    pub ecodim: i64,
}

/// Embedding dimension from the Jacobian rank at `x`, dimension from the
/// Gröbner basis.
pub fn edim_ecodim(v: &VarietySpec, x: &[Rational]) -> Result<EmbeddingData, InvariantError> {
    for f in v.polynomials() {
        if !f.evaluate(x)?.is_zero() {
            return Err(InvariantError::NotVanishing(f.to_string()));
        }
    }
    let n = v.ring().nvars();
    let jac: Vec<Vec<Rational>> = v
        .polynomials()
        .iter()
        .map(|f| (0..n).map(|j| f.derivative(j).evaluate(x)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let edim = n as i64 - matrix_rank(&jac) as i64;
    let dim = v.dimension();
    Ok(EmbeddingData { edim, dim, ecodim: edim - dim })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MecBound {
    pub holds: bool,
    /// ecodim equals dim − mld (maximal embedding codimension).
    pub equality: bool,
}

/// `ecodim ≤ dim − mld`, with equality reported separately.
pub fn check_mec_bound(data: &EmbeddingData, mld: &Rational) -> MecBound {
    let rhs = Rational::from_integer(data.dim.into()) - mld;
    let lhs = Rational::from_integer(data.ecodim.into());
    MecBound { holds: lhs <= rhs, equality: lhs == rhs }
}

/// Shared by certificate JSON: the ideal as exponent vectors with names.
pub fn monomial_ideal_polys(a: &MonomialIdeal, ring: &Arc<crate::poly::Ring>) -> Vec<Polynomial> {
    a.generators
        .iter()
        .map(|g| Polynomial::from_terms(ring, [(crate::poly::Monomial::from_exponents(g), Rational::one())]))
        .collect()
}

#[cfg(test)]
mod tests;
