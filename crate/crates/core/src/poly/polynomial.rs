use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{Monomial, PolyError, Rational, Ring};

/// Sparse multivariate polynomial with exact coefficients.
///
/// Terms are keyed by exponent vector; zero coefficients are never stored.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Self {
        Self::from_terms(ring, [(Monomial::one(ring.nvars()), c)])
    }

    pub fn var(ring: &Arc<Ring>, index: usize) -> Self {
        Self::from_terms(
            ring,
            [(Monomial::variable(ring.nvars(), index, 1), Rational::one())],
        )
    }

    /// Variable by name; panics if the ring does not contain it.
    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Self {
        let i = ring
            .var_index(name)
            .unwrap_or_else(|| panic!("unknown variable {name}"));
        Self::var(ring, i)
    }

    pub fn from_terms<I>(ring: &Arc<Ring>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut out = Polynomial::zero(ring);
        for (m, c) in terms {
            assert_eq!(
                m.nvars(),
                ring.nvars(),
                "exponent vector length does not match ring"
            );
            out.add_term(m, c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        let c = self.ring.normalize_coeff(c);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.ring.normalize_coeff(e.get() + c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.ring.nvars()))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Smallest total degree of a term (order of vanishing at the origin).
    pub fn lowest_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// Leading term with respect to the ring's monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| self.ring.compare(a.0, b.0))
    }

    /// Terms sorted by decreasing ring order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| self.ring.compare(b.0, a.0));
        v
    }

    /// Indices of variables that occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.keys().any(|m| m.exponent(i) > 0))
            .collect()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(var))
            .max()
            .unwrap_or(0)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring.same_space(&other.ring) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = Polynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        Polynomial::from_terms(
            &self.ring,
            self.terms.iter().map(|(m, a)| (m.clone(), a * c)),
        )
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        Polynomial::from_terms(
            &self.ring,
            self.terms.iter().map(|(t, a)| (t.mul(m), a * c)),
        )
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.ring.inverse(c);
                self.scale(&inv)
            }
        }
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let n = self.ring.nvars();
        Polynomial::from_terms(
            &self.ring,
            self.terms
                .iter()
                .filter(|(m, _)| m.exponent(var) > 0)
                .map(|(m, c)| {
                    let e = m.exponent(var);
                    let lowered = m
                        .div(&Monomial::variable(n, var, 1))
                        .expect("exponent checked");
                    (lowered, c * Rational::from_integer(e.into()))
                }),
        )
    }

    /// Evaluate at a point with one coordinate per ring variable.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.ring.nvars() {
            return Err(PolyError::PointDimension {
                expected: self.ring.nvars(),
                got: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.exponents().enumerate() {
                if e > 0 {
                    if point[i].is_zero() {
                        t = Rational::zero();
                        break;
                    }
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(self.ring.normalize_coeff(acc))
    }

    /// Substitute `images[i]` for variable `i`; all images live in `target`.
    pub fn compose(&self, target: &Arc<Ring>, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.nvars(), "one image per variable");
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target), p.clone()])
            .collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, e) in m.exponents().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Move into `target`, sending variable `i` to `map[i]`. Variables mapped
    /// to `None` must not occur.
    pub fn remap(
        &self,
        target: &Arc<Ring>,
        map: &[Option<usize>],
    ) -> Result<Polynomial, PolyError> {
        let n = target.nvars();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; n];
            for (i, e) in m.exponents().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => exps[j] += e,
                    None => {
                        return Err(PolyError::UnknownVariable(
                            self.ring.variable(i).to_string(),
                        ))
                    }
                }
            }
            out.add_term(Monomial::from_exponents(&exps), c.clone());
        }
        Ok(out)
    }

    /// Same polynomial viewed in a ring with the same variables but another order.
    pub fn with_ring(&self, ring: &Arc<Ring>) -> Polynomial {
        assert!(
            self.ring.same_space(ring),
            "with_ring requires identical variables and domain"
        );
        Polynomial {
            ring: ring.clone(),
            terms: self.terms.clone(),
        }
    }

    /// Move into a ring with (a superset of) the same variable names.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Polynomial, PolyError> {
        let map: Vec<Option<usize>> = self
            .ring
            .variables()
            .iter()
            .map(|v| target.var_index(v))
            .collect();
        self.remap(target, &map)
    }

    /// Multiply through by the lcm of denominators and divide by the integer
    /// content, with positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() || self.ring.domain() != super::Domain::Rational {
            return self.monic();
        }
        use num_integer::Integer;
        let mut lcm = num_bigint::BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = num_bigint::BigInt::zero();
        for c in self.terms.values() {
            let v = c.numer() * (&lcm / c.denom());
            g = g.gcd(&v);
        }
        let mut factor = Rational::new(lcm, g);
        if self
            .leading_term()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false)
        {
            factor = -factor;
        }
        self.scale(&factor)
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_space(&other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.sorted_terms() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, e) in m.exponents().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.variable(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.ring.variable(i), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            /// Panics on ring mismatch; use the `checked_*` form to get an error.
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                self.$checked(rhs)
                    .expect("polynomials from different rings")
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self)
                    .$checked(&rhs)
                    .expect("polynomials from different rings")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Compare two polynomials' leading monomials under their ring's order.
pub fn compare_leading(a: &Polynomial, b: &Polynomial) -> Ordering {
    match (a.leading_term(), b.leading_term()) {
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Less,
        (_, None) => Ordering::Greater,
        (Some((ma, _)), Some((mb, _))) => a.ring().compare(ma, mb),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn cancellation_and_identity() {
        let ring = Ring::rational(&["x", "y"]);
        let p = |s: &str| parse_polynomial(s, &ring).unwrap();
        assert_eq!(&p("x+y") + &p("x-y"), p("2*x"));
        assert_eq!(&p("x+y") * &p("x-y"), p("x^2-y^2"));
        assert!((&p("x+y") * &Polynomial::zero(&ring)).is_zero());
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = Polynomial::var(&Ring::rational(&["x"]), 0);
        let b = Polynomial::var(&Ring::rational(&["y"]), 0);
        assert_eq!(a.checked_add(&b), Err(PolyError::RingMismatch));
    }

    #[test]
    fn evaluation_and_derivative() {
        let ring = Ring::rational(&["x", "y"]);
        let f = parse_polynomial("y^2 - x^2 - x^3", &ring).unwrap();
        assert_eq!(f.evaluate(&[r(1), r(2)]).unwrap(), r(2));
        assert_eq!(
            f.derivative(0),
            parse_polynomial("-2*x - 3*x^2", &ring).unwrap()
        );
        assert!(f.evaluate(&[r(1)]).is_err());
    }

    #[test]
    fn prime_field_coefficients_reduce() {
        let ring = Ring::new(
            vec!["x".into()],
            super::super::Domain::Prime(5),
            super::super::MonomialOrder::GrevLex,
        )
        .unwrap();
        let f = parse_polynomial("3*x + 4", &ring).unwrap();
        let g = parse_polynomial("2*x + 1", &ring).unwrap();
        assert_eq!(&f + &g, Polynomial::zero(&ring));
    }

    #[test]
    fn display_round_trips() {
        let ring = Ring::rational(&["x", "y#1"]);
        let f = parse_polynomial("-3/2*x^2*y#1 + y#1 - 7", &ring).unwrap();
        assert_eq!(parse_polynomial(&f.to_string(), &ring).unwrap(), f);
    }

    #[test]
    fn primitive_clears_denominators() {
        let ring = Ring::rational(&["x", "y"]);
        let f = parse_polynomial("-1/2*x + 3/4*y", &ring).unwrap();
        assert_eq!(f.primitive(), parse_polynomial("2*x - 3*y", &ring).unwrap());
    }
}
