//! Exact jet-scheme computations for singularities.
//!
//! The crate builds jet schemes and jet fibers from defining polynomials,
//! certifies the irreducible components of jet fibers for a handful of
//! structured singularity families, assembles the graph of components across
//! jet orders, and computes the invariants (log canonical thresholds of
//! monomial ideals, embedding codimension, blow-up discrepancy bounds) used to
//! certify higher Du Val singularities.

pub mod components;
pub mod ffenum;
pub mod groebner;
pub mod invariants;
pub mod jets;
pub mod poly;
pub mod strata;
pub mod verify;

pub use poly::{parse_polynomial, Domain, Monomial, MonomialOrder, Polynomial, Rational, Ring};

/// True when `err` (or an error it wraps) reports an exhausted resource cap
/// rather than a mathematical or input failure.
pub fn is_resource_cap(err: &(dyn std::error::Error + 'static)) -> bool {
    use components::ComponentError as C;
    use ffenum::EnumError;
    use groebner::GroebnerError;
    use invariants::InvariantError as I;
    use jets::JetError as J;
    use strata::StrataError as S;

    fn gb(e: &GroebnerError) -> bool {
        matches!(e, GroebnerError::TooLarge(_))
    }
    fn jet(e: &J) -> bool {
        matches!(e, J::Groebner(g) if gb(g))
    }
    fn strata(e: &S) -> bool {
        match e {
            S::Jet(j) => jet(j),
            S::Groebner(g) => gb(g),
            _ => false,
        }
    }
    fn enumeration(e: &EnumError) -> bool {
        match e {
            EnumError::BudgetExceeded { .. } => true,
            EnumError::Jet(j) => jet(j),
            _ => false,
        }
    }
    if let Some(e) = err.downcast_ref::<GroebnerError>() {
        return gb(e);
    }
    if let Some(e) = err.downcast_ref::<J>() {
        return jet(e);
    }
    if let Some(e) = err.downcast_ref::<S>() {
        return strata(e);
    }
    if let Some(e) = err.downcast_ref::<EnumError>() {
        return enumeration(e);
    }
    if let Some(e) = err.downcast_ref::<I>() {
        return match e {
            I::Jet(j) => jet(j),
            I::Groebner(g) => gb(g),
            _ => false,
        };
    }
    if let Some(e) = err.downcast_ref::<C>() {
        return match e {
            C::Strata(s) => strata(s),
            C::Jet(j) => jet(j),
            C::Groebner(g) => gb(g),
            C::Enum(x) => enumeration(x),
            _ => false,
        };
    }
    false
}
