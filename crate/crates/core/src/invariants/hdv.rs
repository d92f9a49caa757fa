//! Certificates for the complete-intersection families built from a monomial
//! ideal 𝔞 = (u_1..u_{2e-2})² + 𝔟.

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    blowup_log_discrepancy, check_mec_bound, edim_ecodim, lct_monomial, multiplicity_at, ser_rat, EmbeddingData,
    InvariantError, LctResult, MecBound,
};
use crate::groebner::Ideal;
use crate::jets::{jacobian_minors, VarietySpec};
use crate::poly::{Polynomial, Rational};
use crate::strata::{candidates_hdv, BType, HdvFamily};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HdvChecks {
    pub complete_intersection: bool,
    pub isolated_singularity: bool,
    /// Dimension of `V(f_1..f_e, e×e minors)`; `-1` when not computed.
    pub singular_locus_dim: i64,
    #[serde(flatten)]
    pub embedding: EmbeddingData,
    pub lct_a: LctResult,
    pub lct_exceeds_e: bool,
    pub multiplicity: u32,
    #[serde(serialize_with = "ser_rat")]
    pub blowup_bound: Rational,
    pub mec: MecBound,
}

#[derive(Clone, Debug, Serialize)]
pub struct HdvCertificate {
    pub e: u32,
    pub btype: String,
    pub variables: Vec<String>,
    pub equations: Vec<String>,
    pub monomial_ideal: Vec<Vec<u32>>,
    pub checks: HdvChecks,
    /// `Some(1)` when every check passes; otherwise not certified.
    #[serde(serialize_with = "ser_opt_rat")]
    pub mld_verdict: Option<Rational>,
    /// `dim − ecodim` (equal to 1 for a certified family).
    pub dim_minus_ecodim: i64,
    pub seed: u64,
    pub draws: usize,
    pub assumptions: Vec<String>,
}

fn ser_opt_rat<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_str("not certified"),
    }
}

impl HdvCertificate {
    pub fn certified(&self) -> bool {
        self.mld_verdict.is_some()
    }
}

fn structural(v: &VarietySpec, e: u32) -> Result<(bool, bool, i64), InvariantError> {
    let n = v.ring().nvars() as i64;
    let ci = v.polynomials().len() == e as usize && v.dimension() == n - e as i64;
    if !ci {
        return Ok((false, false, -1));
    }
    let mut gens = v.polynomials().to_vec();
    gens.extend(jacobian_minors(v.polynomials(), e as usize));
    let d = Ideal::new(v.ring(), gens)?.dimension()?;
    Ok((true, d == 0, d))
}

/// Run every check on an explicit family, without redrawing.
pub fn hdv_certificate_for(fam: &HdvFamily, draws: usize) -> Result<HdvCertificate, InvariantError> {
    let v = &fam.variety;
    let e = fam.e;
    let origin = v.point().to_vec();
    let (ci, isolated, singular_locus_dim) = structural(v, e)?;
    let embedding = edim_ecodim(v, &origin)?;
    let lct_a = lct_monomial(&fam.monomial_ideal)?;
    let e_rat = Rational::from_integer(e.into());
    let lct_exceeds_e = lct_a.lct > e_rat;
    let multiplicity = multiplicity_at(v.polynomials(), &origin)?;
    let n = v.ring().nvars() as u32;
    let blowup_bound = blowup_log_discrepancy(n, &e_rat, multiplicity);
    let one = Rational::one();
    let structural_ok = ci && isolated && embedding.ecodim == e as i64 && embedding.dim == e as i64 + 1;
    let verdict = (structural_ok && lct_exceeds_e && blowup_bound == one).then(|| one.clone());
    let mec = check_mec_bound(&embedding, verdict.as_ref().unwrap_or(&one));
    let checks = HdvChecks {
        complete_intersection: ci,
        isolated_singularity: isolated,
        singular_locus_dim,
        embedding,
        lct_a,
        lct_exceeds_e,
        multiplicity,
        blowup_bound,
        mec,
    };
    Ok(HdvCertificate {
        e,
        btype: fam.btype.to_string(),
        variables: v.ring().variables().to_vec(),
        equations: v.polynomials().iter().map(|p| p.to_string()).collect(),
        monomial_ideal: fam.monomial_ideal.generators().to_vec(),
        dim_minus_ecodim: checks.embedding.dim - checks.embedding.ecodim,
        checks,
        mld_verdict: verdict,
        seed: fam.seed,
        draws,
        assumptions: vec![
            "mld_0(X) >= 1 uses inversion of adjunction with lct(a) > e; the equations are taken to be general \
             members of a, which is validated structurally (complete intersection, isolated singularity) only"
                .into(),
            "mld_0(X) <= 1 uses the exceptional divisor of the blow-up of the origin".into(),
        ],
    })
}

/// Build the family for `(e, btype)` and certify it, redrawing the random
/// coefficients (seeds `seed, seed+1, …`) while a structural check fails.
/// Returns the last attempt when every draw fails validation.
pub fn hdv_certificate_attempts(
    e: u32,
    btype: BType,
    seed: u64,
    max_draws: usize,
) -> Result<HdvCertificate, InvariantError> {
    let mut last = None;
    for draw in 0..max_draws.max(1) {
        let fam = candidates_hdv(e, btype, seed + draw as u64)?;
        let cert = hdv_certificate_for(&fam, draw + 1)?;
        if cert.checks.complete_intersection && cert.checks.isolated_singularity {
            return Ok(cert);
        }
        last = Some(cert);
    }
    Ok(last.expect("at least one draw"))
}

/// As [`hdv_certificate_attempts`], but a family that never validates is an
/// error.
pub fn hdv_certificate(e: u32, btype: BType, seed: u64, max_draws: usize) -> Result<HdvCertificate, InvariantError> {
    let cert = hdv_certificate_attempts(e, btype, seed, max_draws)?;
    if cert.checks.complete_intersection && cert.checks.isolated_singularity {
        Ok(cert)
    } else {
        Err(InvariantError::RedrawsExhausted(max_draws.max(1)))
    }
}

/// Cut `v` by `r` random hyperplanes through its distinguished point,
/// redrawing until the dimension drops by exactly `r`.
pub fn hyperplane_section(v: &VarietySpec, r: usize, seed: u64, max_draws: usize) -> Result<VarietySpec, InvariantError> {
    if r as i64 >= v.dimension() {
        return Err(InvariantError::Invalid(format!("cannot cut a {}-dimensional variety by {r} hyperplanes", v.dimension())));
    }
    if r == 0 {
        return Ok(v.clone());
    }
    let ring = v.ring();
    let x = v.point();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_draws.max(1) {
        let forms: Vec<Polynomial> = (0..r)
            .map(|_| {
                (0..ring.nvars()).fold(Polynomial::zero(ring), |acc, i| {
                    let c = Rational::from_integer(rng.gen_range(-9i64..=9).into());
                    let shifted = &Polynomial::var(ring, i) - &Polynomial::constant(ring, x[i].clone());
                    &acc + &shifted.scale(&c)
                })
            })
            .filter(|p| !p.is_zero())
            .collect();
        if forms.len() != r {
            continue;
        }
        let cut = v.with_extra(forms)?;
        if cut.dimension() == v.dimension() - r as i64 {
            return Ok(cut);
        }
    }
    Err(InvariantError::RedrawsExhausted(max_draws))
}
