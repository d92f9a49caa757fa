//! Certification of component lists, the graph of components across jet
//! orders, arc-type flags and chain analysis.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::ffenum::{cover_oracle, CoverOracle, EnumError, EnumerationBudget};
use crate::groebner::{GroebnerError, Ideal};
use crate::jets::{fiber_ideal, jet_codim, mu_invariant, nu_invariant, vanishes_at, JetContext, JetError, WitnessArc};
use crate::strata::{Scenario, ScenarioTag, StrataError};

pub const SCHEMA_VERSION: &str = "jetfiber/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComponentError {
    #[error("candidate list is empty")]
    NoCandidates,
    #[error("candidate `{0}` lives in a different ring from the fiber")]
    RingMismatch(String),
    #[error("order {order} is not certified: {}", diagnostics.join("; "))]
    NotCertified { order: usize, diagnostics: Vec<String> },
    #[error("max order must be at least 1")]
    MaxOrder,
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Enum(#[from] EnumError),
}

pub(crate) fn ser_ideal<S: Serializer>(ideal: &Ideal, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ideal.generators().iter().map(|g| g.to_string()))
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifiedComponent {
    pub label: String,
    #[serde(serialize_with = "ser_ideal")]
    pub closure: Ideal,
    pub dimension: i64,
    /// `(m + 1) dim X − dim`, when the ambient variety is known.
    pub jet_codimension: Option<i64>,
    pub arc_type: bool,
    /// Labels of the witness arcs whose truncation lies on the closure.
    pub witnesses: Vec<String>,
}

/// Finite-field cross-check attached to a report.
#[derive(Clone, Debug, Serialize)]
pub struct OracleSummary {
    #[serde(flatten)]
    pub counts: CoverOracle,
    /// The enumeration agrees with the symbolic verdicts: the fiber points
    /// are exactly the union of the closure points, and every closure owns
    /// a private point.
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub schema: &'static str,
    pub scenario: String,
    pub order: usize,
    pub seed: u64,
    pub fiber_dimension: i64,
    pub components: Vec<CertifiedComponent>,
    pub containment_certified: bool,
    pub cover_certified: bool,
    pub irredundancy_certified: bool,
    pub certified: bool,
    pub count: usize,
    pub oracle: Option<OracleSummary>,
    pub assumptions: Vec<String>,
    pub notes: Vec<String>,
    pub diagnostics: Vec<String>,
}

impl ComponentReport {
    pub fn arc_type_count(&self) -> usize {
        self.components.iter().filter(|c| c.arc_type).count()
    }
}

const IRREDUCIBILITY_ASSUMPTION: &str =
    "candidates are closures of irreducible strata; irreducibility is not tested symbolically";

/// Does `V(small) ⊆ V(big)` hold, i.e. is every generator of `big` in the
/// radical of `small`?
fn variety_contained(small: &Ideal, big: &Ideal) -> Result<bool, GroebnerError> {
    for g in big.generators() {
        if !small.contains_poly(g)? && !small.radical_contains(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check that the candidates are exactly the components of `V(fiber)`:
/// each contains the fiber ideal, their intersection lies in the radical of
/// the fiber ideal, and no candidate variety contains another.
pub fn certify_components(fiber: &Ideal, candidates: &[(String, Ideal)]) -> Result<ComponentReport, ComponentError> {
    if candidates.is_empty() {
        return Err(ComponentError::NoCandidates);
    }
    for (label, c) in candidates {
        if !c.ring().same_space(fiber.ring()) {
            return Err(ComponentError::RingMismatch(label.clone()));
        }
    }
    let mut diagnostics = Vec::new();

    let mut containment = true;
    for (label, c) in candidates {
        if !c.contains(fiber)? {
            containment = false;
            diagnostics.push(format!("candidate {label} does not contain the fiber ideal"));
        }
    }

    let meet = candidates[1..].iter().try_fold(candidates[0].1.clone(), |acc, (_, c)| acc.intersect(c))?;
    let mut cover = true;
    for g in meet.generators() {
        if !fiber.contains_poly(g)? && !fiber.radical_contains(g)? {
            cover = false;
            diagnostics.push(format!("intersection generator {g} is not in the radical of the fiber ideal"));
            break;
        }
    }

    let mut irredundant = true;
    for (i, j) in (0..candidates.len()).tuple_combinations() {
        let (li, ci) = &candidates[i];
        let (lj, cj) = &candidates[j];
        if variety_contained(ci, cj)? {
            irredundant = false;
            diagnostics.push(format!("V({li}) lies inside V({lj})"));
        }
        if variety_contained(cj, ci)? {
            irredundant = false;
            diagnostics.push(format!("V({lj}) lies inside V({li})"));
        }
    }
    if !cover {
        diagnostics.push("the candidates do not cover the fiber".into());
    }

    let components = candidates
        .par_iter()
        .map(|(label, c)| {
            Ok(CertifiedComponent {
                label: label.clone(),
                closure: c.clone(),
                dimension: c.dimension()?,
                jet_codimension: None,
                arc_type: false,
                witnesses: vec![],
            })
        })
        .collect::<Result<Vec<_>, GroebnerError>>()?;
    let certified = containment && cover && irredundant;
    Ok(ComponentReport {
        schema: SCHEMA_VERSION,
        scenario: "custom".into(),
        order: 0,
        seed: 0,
        fiber_dimension: fiber.dimension()?,
        count: if certified { components.len() } else { 0 },
        components,
        containment_certified: containment,
        cover_certified: cover,
        irredundancy_certified: irredundant,
        certified,
        oracle: None,
        assumptions: vec![IRREDUCIBILITY_ASSUMPTION.into()],
        notes: vec![],
        diagnostics,
    })
}

/// Options shared by scenario reports and graph construction.
#[derive(Clone, Debug)]
pub struct ReportOptions {
    /// Prime for the finite-field cross-check, if any.
    pub oracle_q: Option<u64>,
    /// Only run the oracle up to this order.
    pub oracle_max_order: usize,
    pub budget: EnumerationBudget,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { oracle_q: None, oracle_max_order: 4, budget: EnumerationBudget::default() }
    }
}

impl ReportOptions {
    pub fn with_oracle(q: u64) -> Self {
        ReportOptions { oracle_q: Some(q), ..Default::default() }
    }
}

pub fn node_erratum_note(m: usize) -> String {
    format!(
        "erratum candidate: the certified component count of the nodal fiber at order {m} is {m} = m, \
         not the m − 1 stated in the literature"
    )
}

/// Flag every closure on which the level-`m` truncation of a witness lies.
fn flag_components(ctx: &JetContext, comps: &mut [CertifiedComponent], witnesses: &[WitnessArc]) -> Result<(), JetError> {
    for w in witnesses {
        let pt = w.truncation(ctx);
        for c in comps.iter_mut() {
            if vanishes_at(&c.closure, &pt)? {
                c.arc_type = true;
                c.witnesses.push(w.label.clone());
            }
        }
    }
    Ok(())
}

/// Candidate list, certification, arc-type flags and (optionally) the
/// finite-field oracle for a scenario at order `m`.
pub fn component_report(sc: &Scenario, m: usize, opts: &ReportOptions) -> Result<ComponentReport, ComponentError> {
    let fam = sc.candidates(m)?;
    let (ctx, fiber) = fiber_ideal(&sc.variety, m)?;
    let closures = fam.closures()?;
    let mut report = certify_components(&fiber, &closures)?;
    report.scenario = sc.tag.to_string();
    report.order = m;
    report.seed = sc.seed;
    let dim_x = sc.variety.dimension();
    for c in report.components.iter_mut() {
        c.jet_codimension = Some(jet_codim(c.dimension, m, dim_x)?);
    }
    if sc.nash_families().is_some() {
        let ws = sc.witnesses(m)?;
        flag_components(&ctx, &mut report.components, &ws)?;
    }
    if report.certified && report.count != fam.expected_count {
        report.notes.push(format!(
            "certified count {} differs from the candidate formula {} = {}",
            report.count, fam.formula, fam.expected_count
        ));
    }
    if sc.tag == ScenarioTag::Node && report.certified && m >= 3 && report.count == m {
        report.notes.push(node_erratum_note(m));
    }
    if let Some(q) = opts.oracle_q {
        if m <= opts.oracle_max_order {
            let ideals: Vec<Ideal> = closures.iter().map(|(_, c)| c.clone()).collect();
            let counts = cover_oracle(&fiber, &ideals, q, &opts.budget)?;
            let agrees = counts.covered() == report.cover_certified && (!report.certified || counts.all_private());
            if !agrees {
                report.diagnostics.push(format!("finite-field oracle over F_{q} disagrees with the symbolic verdict"));
            }
            report.oracle = Some(OracleSummary { counts, agrees });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphVertex {
    pub id: usize,
    pub order: usize,
    pub label: String,
    pub dimension: i64,
    pub arc_type: bool,
    #[serde(serialize_with = "ser_ideal")]
    pub closure: Ideal,
}

/// Edge from a vertex at order `m + 1` to one at order `m` whose closure
/// contains the truncation image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct JetGraph {
    pub schema: &'static str,
    pub scenario: String,
    pub seed: u64,
    pub max_order: usize,
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge>,
    pub notes: Vec<String>,
}

impl JetGraph {
    pub fn at_order(&self, m: usize) -> impl Iterator<Item = &GraphVertex> {
        self.vertices.iter().filter(move |v| v.order == m)
    }

    pub fn roots(&self) -> impl Iterator<Item = &GraphVertex> {
        self.at_order(0)
    }

    pub fn out_edges(&self, id: usize) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(move |e| e.from == id)
    }

    pub fn in_edges(&self, id: usize) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(move |e| e.to == id)
    }

    /// Every edge drops the order by exactly one (hence no cycles).
    pub fn is_order_graded(&self) -> bool {
        self.edges.iter().all(|e| self.vertices[e.from].order == self.vertices[e.to].order + 1)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let name = self.scenario.replace('"', "'");
        let _ = writeln!(out, "digraph jetgraph {{");
        let _ = writeln!(out, "  label=\"{name} seed={}\";", self.seed);
        let _ = writeln!(out, "  rankdir=BT;");
        for v in &self.vertices {
            let shape = if v.arc_type { "doublecircle" } else { "ellipse" };
            let _ = writeln!(out, "  v{} [label=\"{}/{}/{}\", shape={shape}];", v.id, v.order, v.label, v.dimension);
        }
        for e in &self.edges {
            let _ = writeln!(out, "  v{} -> v{};", e.from, e.to);
        }
        out.push_str("}\n");
        out
    }
}

/// Edge test between closures one order apart: the truncation image of
/// `upper` lies in `V(lower)`. The lower ring is a prefix of the upper one,
/// so this is radical membership of each lower generator in the upper
/// closure ideal (contraction commutes with taking radicals).
pub fn truncates_into(upper: &Ideal, lower: &Ideal) -> Result<bool, ComponentError> {
    for g in lower.generators() {
        let g = g.embed(upper.ring()).map_err(JetError::from)?;
        if !upper.contains_poly(&g)? && !upper.radical_contains(&g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Certify every order `0..=max` (in parallel) and connect adjacent orders.
pub fn build_graph(sc: &Scenario, max: usize, opts: &ReportOptions) -> Result<(JetGraph, Vec<ComponentReport>), ComponentError> {
    if max < 1 {
        return Err(ComponentError::MaxOrder);
    }
    let reports: Vec<ComponentReport> =
        (0..=max).into_par_iter().map(|m| component_report(sc, m, opts)).collect::<Result<_, _>>()?;
    for r in &reports {
        if !r.certified {
            return Err(ComponentError::NotCertified { order: r.order, diagnostics: r.diagnostics.clone() });
        }
    }
    let mut vertices = Vec::new();
    let mut by_order: Vec<Vec<usize>> = Vec::new();
    for r in &reports {
        let ids = r
            .components
            .iter()
            .map(|c| {
                let id = vertices.len();
                vertices.push(GraphVertex {
                    id,
                    order: r.order,
                    label: c.label.clone(),
                    dimension: c.dimension,
                    arc_type: c.arc_type,
                    closure: c.closure.clone(),
                });
                id
            })
            .collect();
        by_order.push(ids);
    }
    let pairs: Vec<(usize, usize)> = (0..max)
        .flat_map(|m| by_order[m + 1].iter().flat_map(|&v| by_order[m].iter().map(move |&u| (v, u))).collect::<Vec<_>>())
        .collect();
    let verdicts: Vec<bool> = pairs
        .par_iter()
        .map(|&(v, u)| truncates_into(&vertices[v].closure, &vertices[u].closure))
        .collect::<Result<_, _>>()?;
    let mut edges: Vec<GraphEdge> =
        pairs.iter().zip(verdicts).filter(|(_, ok)| *ok).map(|(&(from, to), _)| GraphEdge { from, to }).collect();
    edges.sort();
    let notes = reports.iter().flat_map(|r| r.notes.iter().cloned()).unique().collect();
    let graph = JetGraph { schema: SCHEMA_VERSION, scenario: sc.tag.to_string(), seed: sc.seed, max_order: max, vertices, edges, notes };
    Ok((graph, reports))
}

/// Recompute arc-type flags from witness arcs (truncated at least to the
/// graph's max order).
pub fn arc_type_flags(graph: &JetGraph, sc: &Scenario, witnesses: &[WitnessArc]) -> Result<Vec<bool>, ComponentError> {
    let mut flags = vec![false; graph.vertices.len()];
    for m in 0..=graph.max_order {
        let ctx = JetContext::fiber(sc.variety.ring(), m, sc.variety.point());
        let pts: Vec<_> = witnesses.iter().map(|w| w.truncation(&ctx)).collect();
        for v in graph.at_order(m) {
            for pt in &pts {
                if vanishes_at(&v.closure, pt)? {
                    flags[v.id] = true;
                }
            }
        }
    }
    Ok(flags)
}

/// Flagged vertices above order 0 must truncate onto flagged vertices.
pub fn flags_form_chains(graph: &JetGraph, flags: &[bool]) -> bool {
    graph
        .vertices
        .iter()
        .filter(|v| v.order > 0 && flags[v.id])
        .all(|v| graph.out_edges(v.id).any(|e| flags[e.to]))
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelPattern {
    pub order: usize,
    pub vertices: usize,
    /// Out-degree (towards order − 1) of each vertex at this order.
    pub out_degrees: Vec<usize>,
    /// In-degree (from order + 1) of each vertex at this order.
    pub in_degrees: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub max_order: usize,
    /// Smallest order from which the graph is a disjoint union of simple
    /// chains up to `max_order`; absent when no such order below
    /// `max_order` exists.
    pub m0: Option<usize>,
    pub chains: usize,
    pub all_reach_max: bool,
    pub pattern: Vec<LevelPattern>,
    pub report: String,
}

fn is_chain_band(graph: &JetGraph, m0: usize) -> bool {
    let max = graph.max_order;
    graph.vertices.iter().filter(|v| v.order >= m0).all(|v| {
        let outs = graph.out_edges(v.id).count();
        let ins = graph.in_edges(v.id).count();
        (v.order == m0 || outs == 1) && (v.order == max || ins == 1)
    })
}

/// Find the smallest `m₀ ≤ M − 1` above which the graph consists of
/// disjoint simple chains. A single level is never counted as a chain band.
pub fn chain_analysis(graph: &JetGraph) -> ChainReport {
    let max = graph.max_order;
    let pattern: Vec<LevelPattern> = (0..=max)
        .map(|m| {
            let vs: Vec<&GraphVertex> = graph.at_order(m).collect();
            LevelPattern {
                order: m,
                vertices: vs.len(),
                out_degrees: vs.iter().map(|v| graph.out_edges(v.id).count()).collect(),
                in_degrees: vs.iter().map(|v| graph.in_edges(v.id).count()).collect(),
            }
        })
        .collect();
    let m0 = (0..max).find(|&m0| is_chain_band(graph, m0));
    let (chains, all_reach_max, report) = match m0 {
        Some(m0) => {
            let chains = graph.at_order(m0).count();
            let reach = graph.at_order(max).count() == chains;
            (chains, reach, format!("{chains} disjoint chains on orders {m0}..={max}, each reaching {max}"))
        }
        None => {
            let counts = pattern.iter().map(|p| p.vertices.to_string()).join(",");
            let branching = pattern
                .iter()
                .filter(|p| p.in_degrees.iter().chain(&p.out_degrees).any(|&d| d > 1))
                .map(|p| p.order.to_string())
                .join(",");
            (0, false, format!("no chain band below {max}; vertex counts [{counts}], branching at orders [{branching}]"))
        }
    };
    ChainReport { max_order: max, m0, chains, all_reach_max, pattern, report }
}

/// Per-order witness matching used for the injectivity check.
#[derive(Clone, Debug, Serialize)]
pub struct InjectivityLevel {
    pub order: usize,
    /// Witness label → labels of flagged components.
    pub matches: BTreeMap<String, Vec<String>>,
    pub injective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InjectivityReport {
    pub scenario: String,
    pub seed: u64,
    pub mu: usize,
    pub nu: usize,
    pub levels: Vec<InjectivityLevel>,
    pub holds: bool,
    pub diagnostics: Vec<String>,
}

/// Check that each witness flags exactly one component and distinct
/// witnesses flag distinct components at every order in `μ+ν..=max`.
pub fn injectivity_check(sc: &Scenario, max: usize, opts: &ReportOptions) -> Result<InjectivityReport, ComponentError> {
    let ws = sc.witnesses(max.max(1))?;
    let mu = mu_invariant(&sc.variety, &ws)?;
    let nu = nu_invariant(&sc.variety, &ws, mu, max, |m| {
        let fam = sc.candidates(m).map_err(|e| JetError::Invalid(e.to_string()))?;
        let closures = fam.closures().map_err(|e| JetError::Invalid(e.to_string()))?;
        Ok(closures.into_iter().map(|(_, c)| c).collect())
    })?;
    let start = mu + nu;
    let reports: Vec<ComponentReport> =
        (start..=max).into_par_iter().map(|m| component_report(sc, m, opts)).collect::<Result<_, _>>()?;
    let mut diagnostics = Vec::new();
    let mut levels = Vec::new();
    for r in &reports {
        if !r.certified {
            diagnostics.push(format!("order {} is not certified", r.order));
        }
        let mut matches: BTreeMap<String, Vec<String>> = ws.iter().map(|w| (w.label.clone(), vec![])).collect();
        for c in &r.components {
            for w in &c.witnesses {
                matches.entry(w.clone()).or_default().push(c.label.clone());
            }
        }
        let single = matches.values().all(|v| v.len() == 1);
        let distinct = matches.values().filter_map(|v| v.first()).all_unique();
        for (w, cs) in &matches {
            if cs.len() != 1 {
                diagnostics.push(format!("order {}: witness {w} flags {} components", r.order, cs.len()));
            }
        }
        if single && !distinct {
            diagnostics.push(format!("order {}: two witnesses flag the same component", r.order));
        }
        levels.push(InjectivityLevel { order: r.order, matches, injective: single && distinct && r.certified });
    }
    let holds = !levels.is_empty() && levels.iter().all(|l| l.injective);
    if levels.is_empty() {
        diagnostics.push(format!("no order in {start}..={max} to check"));
    }
    Ok(InjectivityReport { scenario: sc.tag.to_string(), seed: sc.seed, mu, nu, levels, holds, diagnostics })
}

#[cfg(test)]
mod tests;
