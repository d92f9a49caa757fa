use std::fmt;

use smallvec::SmallVec;

/// Dense exponent vector, one entry per ring variable.
///
/// The derived `Ord` is plain lexicographic comparison of the exponent
/// arrays; it is only used for canonical storage. Term orders live on
/// [`super::MonomialOrder`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u16; 24]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(
            exps.iter()
                .map(|&e| u16::try_from(e).expect("exponent overflow: degree exceeds u16::MAX"))
                .collect(),
        )
    }

    pub fn variable(nvars: usize, index: usize, exp: u32) -> Self {
        let mut m = Self::one(nvars);
        m.0[index] = u16::try_from(exp).expect("exponent overflow: degree exceeds u16::MAX");
        m
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i] as u32
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|&e| e as u32)
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.exponents().collect()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| {
                    a.checked_add(b)
                        .expect("exponent overflow in monomial product")
                })
                .collect(),
        )
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (&a, &b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(b)?);
        }
        Some(Monomial(out))
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Bit `i % 64` set when variable `i` occurs.
    pub fn support_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |acc, (i, _)| acc | (1u64 << (i % 64)))
    }

    pub(crate) fn raw(&self) -> &[u16] {
        &self.0
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_lcm() {
        let a = Monomial::from_exponents(&[2, 1, 0]);
        let b = Monomial::from_exponents(&[1, 1, 0]);
        assert_eq!(a.div(&b), Some(Monomial::from_exponents(&[1, 0, 0])));
        assert_eq!(b.div(&a), None);
        assert_eq!(
            a.lcm(&Monomial::from_exponents(&[0, 3, 1])).to_vec(),
            vec![2, 3, 1]
        );
        assert!(b.divides(&a));
        assert!(
            Monomial::from_exponents(&[1, 0, 0]).is_coprime(&Monomial::from_exponents(&[0, 2, 0]))
        );
    }

    #[test]
    #[should_panic(expected = "exponent overflow")]
    fn overflow_is_a_hard_error() {
        let a = Monomial::from_exponents(&[u16::MAX as u32]);
        let _ = a.mul(&Monomial::from_exponents(&[1]));
    }
}
