//! Benchmark fixtures shared by the criterion targets.

use jetfiber::jets::VarietySpec;
use jetfiber::strata::Scenario;

/// `xy = z^{n+1}` at the origin.
pub fn ca(n: u32) -> Scenario {
    Scenario::parse(&format!("cA:{n}"), 1).expect("valid tag")
}

pub fn node() -> VarietySpec {
    VarietySpec::parse(&["x", "y"], &["y^2 - x^2 - x^3"], Some(1)).expect("node")
}
