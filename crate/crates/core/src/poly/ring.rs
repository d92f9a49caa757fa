use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Monomial, PolyError, Rational};

/// Coefficient domain of a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    Rational,
    /// Prime field of the given characteristic. Coefficients are stored as
    /// integers in `[0, p)`.
    Prime(u64),
}

impl Domain {
    /// Canonical representative of `c` in this domain.
    pub fn normalize(&self, c: &Rational) -> Rational {
        match *self {
            Domain::Rational => c.clone(),
            Domain::Prime(p) => Rational::from_integer(BigInt::from(
                reduce_mod_p(c, p).expect("denominator divisible by p"),
            )),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            Domain::Rational => 0,
            Domain::Prime(p) => p,
        }
    }
}

/// Image of a rational number in 𝔽_p, `None` if p divides the denominator.
pub fn reduce_mod_p(c: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = c.numer().mod_floor(&pb);
    let den = c.denom().mod_floor(&pb);
    if den.is_zero() {
        return None;
    }
    let num = u64::try_from(num).ok()?;
    let den = u64::try_from(den).ok()?;
    Some(mul_mod(num, inv_mod(den, p)?, p))
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(p as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(p as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Admissible monomial orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    /// Lexicographic order comparing variables in the listed sequence.
    LexBy(Vec<usize>),
    /// Product order over a partition of the variable indices. Blocks are
    /// compared in sequence, grevlex inside each block.
    Block(Vec<Vec<usize>>),
    /// Weighted degree with positive integer weights, ties broken by
    /// reverse lexicographic comparison.
    Weighted(Vec<u32>),
    /// Block order whose block degrees use the given weights.
    WeightedBlock(Vec<Vec<usize>>, Vec<u32>),
}

impl MonomialOrder {
    /// Block order eliminating `first` (grevlex on `first`, then grevlex on the rest).
    pub fn elimination(nvars: usize, first: &[usize]) -> Self {
        let drop: HashSet<usize> = first.iter().copied().collect();
        let rest: Vec<usize> = (0..nvars).filter(|i| !drop.contains(i)).collect();
        MonomialOrder::Block(vec![first.to_vec(), rest])
    }

    /// Elimination order for `first` compatible with `self`: lex orders stay
    /// lex, everything else becomes a grevlex block order.
    pub fn elimination_like(&self, nvars: usize, first: &[usize]) -> Self {
        match self {
            MonomialOrder::Weighted(w) | MonomialOrder::WeightedBlock(_, w) => {
                let rest: Vec<usize> = (0..nvars).filter(|i| !first.contains(i)).collect();
                MonomialOrder::WeightedBlock(vec![first.to_vec(), rest], w.clone())
            }
            MonomialOrder::Lex | MonomialOrder::LexBy(_) => {
                let mut seq = first.to_vec();
                let base: Vec<usize> = match self {
                    MonomialOrder::LexBy(s) => s.clone(),
                    _ => (0..nvars).collect(),
                };
                seq.extend(base.into_iter().filter(|i| !first.contains(i)));
                MonomialOrder::LexBy(seq)
            }
            _ => Self::elimination(nvars, first),
        }
    }

    /// Degree used for sugar: weighted for weighted orders.
    pub fn weights(&self) -> Option<&[u32]> {
        match self {
            MonomialOrder::Weighted(w) | MonomialOrder::WeightedBlock(_, w) => Some(w),
            _ => None,
        }
    }

    fn validate(&self, nvars: usize) -> Result<(), PolyError> {
        if let MonomialOrder::LexBy(seq) = self {
            return MonomialOrder::Block(vec![seq.clone()]).validate(nvars);
        }
        if let Some(w) = self.weights() {
            if w.len() != nvars || w.contains(&0) {
                return Err(PolyError::InvalidOrder(format!("need {nvars} positive weights, got {w:?}")));
            }
        }
        if let MonomialOrder::WeightedBlock(blocks, _) = self {
            return MonomialOrder::Block(blocks.clone()).validate(nvars);
        }
        if let MonomialOrder::Block(blocks) = self {
            let mut seen = vec![false; nvars];
            for &i in blocks.iter().flatten() {
                if i >= nvars || seen[i] {
                    return Err(PolyError::InvalidOrder(format!(
                        "block order must partition 0..{nvars}; index {i} repeated or out of range"
                    )));
                }
                seen[i] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(PolyError::InvalidOrder(
                    "block order does not cover every variable".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.raw().cmp(b.raw()),
            MonomialOrder::GrevLex => grevlex(a.raw(), b.raw()),
            MonomialOrder::LexBy(seq) => {
                for &i in seq {
                    match a.raw()[i].cmp(&b.raw()[i]) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block(blocks) => block_compare(blocks, None, a.raw(), b.raw()),
            MonomialOrder::WeightedBlock(blocks, w) => block_compare(blocks, Some(w), a.raw(), b.raw()),
            MonomialOrder::Weighted(w) => {
                let wa: u64 = a.raw().iter().zip(w).map(|(&e, &k)| e as u64 * k as u64).sum();
                let wb: u64 = b.raw().iter().zip(w).map(|(&e, &k)| e as u64 * k as u64).sum();
                wa.cmp(&wb).then_with(|| {
                    for i in (0..a.raw().len()).rev() {
                        match a.raw()[i].cmp(&b.raw()[i]) {
                            Ordering::Equal => {}
                            o => return o.reverse(),
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

fn block_compare(blocks: &[Vec<usize>], w: Option<&[u32]>, a: &[u16], b: &[u16]) -> Ordering {
    let weight = |i: usize| w.map_or(1, |w| w[i]) as u64;
    for block in blocks {
        let da: u64 = block.iter().map(|&i| a[i] as u64 * weight(i)).sum();
        let db: u64 = block.iter().map(|&i| b[i] as u64 * weight(i)).sum();
        match da.cmp(&db) {
            Ordering::Equal => {}
            o => return o,
        }
        for &i in block.iter().rev() {
            match a[i].cmp(&b[i]) {
                Ordering::Equal => {}
                o => return o.reverse(),
            }
        }
    }
    Ordering::Equal
}

#[inline]
fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => {}
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

/// Polynomial ring: named variables, coefficient domain and term order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
    domain: Domain,
    order: MonomialOrder,
}

impl Ring {
    pub fn new(
        vars: Vec<String>,
        domain: Domain,
        order: MonomialOrder,
    ) -> Result<Arc<Ring>, PolyError> {
        let mut seen = HashSet::new();
        for v in &vars {
            if v.is_empty() || !seen.insert(v.as_str()) {
                return Err(PolyError::DuplicateVariable(v.clone()));
            }
        }
        if let Domain::Prime(p) = domain {
            if !is_prime(p) {
                return Err(PolyError::NotPrime(p));
            }
        }
        order.validate(vars.len())?;
        Ok(Arc::new(Ring {
            vars,
            domain,
            order,
        }))
    }

    /// Rational ring with grevlex order. Panics on duplicate names.
    pub fn rational<S: AsRef<str>>(vars: &[S]) -> Arc<Ring> {
        Ring::new(
            vars.iter().map(|s| s.as_ref().to_string()).collect(),
            Domain::Rational,
            MonomialOrder::GrevLex,
        )
        .expect("invalid variable list")
    }

    pub fn with_order(&self, order: MonomialOrder) -> Result<Arc<Ring>, PolyError> {
        Ring::new(self.vars.clone(), self.domain, order)
    }

    pub fn with_domain(&self, domain: Domain) -> Result<Arc<Ring>, PolyError> {
        Ring::new(self.vars.clone(), domain, self.order.clone())
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn variable(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Same variables and coefficient domain; the term order may differ.
    pub fn same_space(&self, other: &Ring) -> bool {
        self.vars == other.vars && self.domain == other.domain
    }

    #[inline]
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.compare(a, b)
    }

    pub(crate) fn normalize_coeff(&self, c: Rational) -> Rational {
        match self.domain {
            Domain::Rational => c,
            d => d.normalize(&c),
        }
    }

    pub(crate) fn inverse(&self, c: &Rational) -> Rational {
        match self.domain {
            Domain::Rational => c.recip(),
            Domain::Prime(p) => {
                let v = reduce_mod_p(c, p).expect("non-invertible coefficient");
                Rational::from_integer(BigInt::from(inv_mod(v, p).expect("zero has no inverse")))
            }
        }
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Ring({:?}, {:?}, {:?})",
            self.vars, self.domain, self.order
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grevlex_and_lex_disagree_where_expected() {
        // x*z^2 vs y^3 (degree 3): lex prefers x*z^2, grevlex prefers y^3
        let a = m(&[1, 0, 2]);
        let b = m(&[0, 3, 0]);
        assert_eq!(MonomialOrder::Lex.compare(&a, &b), Ordering::Greater);
        assert_eq!(MonomialOrder::GrevLex.compare(&a, &b), Ordering::Less);
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let order = MonomialOrder::elimination(3, &[2]);
        assert_eq!(
            order.compare(&m(&[0, 0, 1]), &m(&[5, 5, 0])),
            Ordering::Greater
        );
        assert_eq!(
            order.compare(&m(&[2, 0, 0]), &m(&[0, 1, 0])),
            Ordering::Greater
        );
    }

    #[test]
    fn weighted_orders() {
        let w = MonomialOrder::Weighted(vec![1, 2]);
        // y has weight 2, so y > x but y < x^3
        assert_eq!(w.compare(&m(&[0, 1]), &m(&[1, 0])), Ordering::Greater);
        assert_eq!(w.compare(&m(&[0, 1]), &m(&[3, 0])), Ordering::Less);
        // equal weight: x^2 vs y, reverse lex prefers x^2
        assert_eq!(w.compare(&m(&[2, 0]), &m(&[0, 1])), Ordering::Greater);
        let e = w.elimination_like(2, &[1]);
        assert_eq!(e.compare(&m(&[0, 1]), &m(&[9, 0])), Ordering::Greater);
        assert!(Ring::new(vec!["x".into()], Domain::Rational, MonomialOrder::Weighted(vec![0])).is_err());
    }

    #[test]
    fn ring_validation() {
        assert!(matches!(
            Ring::new(
                vec!["x".into(), "x".into()],
                Domain::Rational,
                MonomialOrder::Lex
            ),
            Err(PolyError::DuplicateVariable(_))
        ));
        assert!(matches!(
            Ring::new(vec!["x".into()], Domain::Prime(9), MonomialOrder::Lex),
            Err(PolyError::NotPrime(9))
        ));
        assert!(Ring::new(
            vec!["x".into(), "y".into()],
            Domain::Rational,
            MonomialOrder::Block(vec![vec![0], vec![0, 1]])
        )
        .is_err());
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(reduce_mod_p(&Rational::new(1.into(), 2.into()), 5), Some(3));
        assert_eq!(reduce_mod_p(&Rational::new(1.into(), 5.into()), 5), None);
        assert_eq!(pow_mod(2, 10, 1000), 24);
    }
}
