//! Witnesses: parameter values read off an explicit birational map, their
//! verification, and the guarded Gröbner solve.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::checks::{check_birational, Answer};
use crate::error::{BudgetExceeded, Error, Result};
use crate::groebner::{Budget, Ideal};
use crate::monoids::{fit_monoid, fit_two_vertex_monoid, FitOptions};
use crate::nullcert::{find_certificate, CertificateQuery};
use crate::polyring::{format_coeff, Coeff, Polynomial, Ring};
use crate::varieties::{image_closure, restricted_graph, MapKind, Mode, RationalMap, Variety};

use super::build::{hypersurface_degree, normalize};
use super::{names, EqKind, ParamSystem, Step, SystemKind};

/// Values for the parameters of a system, keyed by name.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WitnessAssignment {
    pub values: BTreeMap<String, Coeff>,
}

#[derive(Serialize, Deserialize)]
struct WitnessJson {
    values: BTreeMap<String, String>,
}

impl WitnessAssignment {
    pub fn get(&self, name: &str) -> Option<&Coeff> {
        self.values.get(name)
    }

    pub fn set(&mut self, name: &str, value: Coeff) {
        self.values.insert(name.into(), value);
    }

    pub fn to_json(&self) -> String {
        let values = self.values.iter().map(|(k, v)| (k.clone(), format_coeff(v))).collect();
        serde_json::to_string_pretty(&WitnessJson { values }).expect("witness serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let w: WitnessJson = serde_json::from_str(text).map_err(|e| Error::Input(format!("witness: {e}")))?;
        let mut values = BTreeMap::new();
        for (k, v) in w.values {
            let c: Coeff = v.parse().map_err(|_| Error::Input(format!("witness value for `{k}`: `{v}`")))?;
            values.insert(k, c);
        }
        Ok(WitnessAssignment { values })
    }

    fn set_block(&mut self, s: &ParamSystem, block: &str, p: &Polynomial) -> Result<()> {
        let b = s.block(block).ok_or_else(|| Error::Input(format!("system has no block `{block}`")))?;
        for (k, v) in b.assign(p)? {
            self.values.insert(k, v);
        }
        Ok(())
    }

    /// Parameter values by ring index; errors on the first missing parameter.
    fn indexed(&self, s: &ParamSystem) -> Result<Vec<(usize, Coeff)>> {
        s.param_vars
            .iter()
            .map(|p| {
                let v = self.values.get(p).ok_or_else(|| Error::MissingAssignment(p.clone()))?;
                Ok((s.ring.index(p)?, s.ring.field().normalize(v.clone())?))
            })
            .collect()
    }

    /// Substitution for the parameters assigned so far.
    fn partial(&self, s: &ParamSystem) -> Vec<(usize, Coeff)> {
        self.values.iter().filter_map(|(k, v)| s.ring.index(k).ok().map(|i| (i, v.clone()))).collect()
    }
}

fn point_ring(s: &ParamSystem) -> Result<Ring> {
    Ring::with_names(&s.point_vars, s.ring.field())
}

/// Affine chart `x0 = y0 = 1` of a bihomogeneous ideal, in `ring`.
fn affine_chart(ideal: &Ideal, ring: &Ring) -> Result<Ideal> {
    let one = Coeff::one();
    let r = ideal.ring();
    let (x0, y0) = (r.index("x0")?, r.index("y0")?);
    let gens = ideal
        .gens()
        .iter()
        .map(|g| g.dehomogenize(x0, &one).dehomogenize(y0, &one).embed(ring))
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(ring, gens)
}

fn fit_opts(s: &ParamSystem) -> FitOptions {
    FitOptions { start_degree: 1, cap: s.caps.monoid_degree, require_chart: true, ..FitOptions::default() }
}

fn projection(gamma: &Ideal, keep: &[String], budget: &Budget) -> Result<Ideal> {
    let ring = Ring::with_names(keep, gamma.ring().field())?;
    gamma.eliminate_to(&ring, budget)
}

/// One-vertex monoids along `chain`: stage `j` fits on the projection to
/// `xs[j-1..] ∪ ys ∪ extra` with vertex `xs[j-1]`.
fn fit_chain(
    s: &ParamSystem,
    w: &mut WitnessAssignment,
    gamma: &Ideal,
    xs: &[String],
    ys: &[String],
    stages: std::ops::RangeInclusive<usize>,
    prefix: &str,
    budget: &Budget,
) -> Result<()> {
    for j in stages {
        let keep: Vec<String> = xs[j - 1..].iter().chain(ys).cloned().collect();
        let gj = projection(gamma, &keep, budget)?;
        let v = gj.ring().index(&xs[j - 1])?;
        let m = fit_monoid(&gj, Mode::Affine, v, &fit_opts(s), budget)?;
        w.set_block(s, &format!("{prefix}_{j}_0_1"), m.f_top())?;
        w.set_block(s, &format!("{prefix}_{j}_0_2"), m.f_bot())?;
    }
    Ok(())
}

/// Witness for a birationality system (plain or W⁺) from an explicit
/// birational map of degree ≤ `s.d`. Failing fits or certificate searches
/// are inconclusive: they do not show that no witness exists.
pub fn construct_witness(
    map: &RationalMap,
    x: &Variety,
    y: &Variety,
    s: &ParamSystem,
    budget: &Budget,
) -> Result<WitnessAssignment> {
    if !matches!(s.kind, SystemKind::Birational | SystemKind::BirationalPlus) {
        return Err(Error::Input("construct_witness needs a birationality system".into()));
    }
    if !matches!(map.kind(), MapKind::Projective(_)) {
        return Err(Error::Input("witnesses are built from projective maps".into()));
    }
    if map.degree() > s.d {
        return Err(Error::Input(format!("map degree {} exceeds d = {}", map.degree(), s.d)));
    }
    let v = check_birational(map, x, y, budget)?;
    match v.answer {
        Answer::Yes => {}
        Answer::No => return Err(Error::Input(format!("the map is not birational onto Y: {:?}", v.reason))),
        Answer::Inconclusive => {
            return Err(BudgetExceeded::Search(format!("birationality undecided: {:?}", v.reason)).into())
        }
    }
    let nm = normalize(x, y, budget)?;
    let n = nm.n;
    let f = nm.transform_map(map)?;
    let xs = names("x", 1..=n);
    let ys = names("y", 1..=n);
    let field = s.ring.field();
    let aring = Ring::with_names(&xs.iter().chain(&ys).cloned().collect::<Vec<_>>(), field)?;
    let gamma = affine_chart(&restricted_graph(&f, &nm.x, budget)?, &aring)?;
    let mut w = WitnessAssignment::default();

    for j in 1..n {
        let keep: Vec<String> = xs.iter().chain(&ys[..j]).cloned().collect();
        let gj = projection(&gamma, &keep, budget)?;
        let v = gj.ring().index(&ys[j - 1])?;
        let m = fit_monoid(&gj, Mode::Affine, v, &fit_opts(s), budget)?;
        w.set_block(s, &format!("f_0_{}_1", n - j), m.f_top())?;
        w.set_block(s, &format!("f_0_{}_2", n - j), m.f_bot())?;
    }
    let (a, b) = (aring.index(&xs[n - 1])?, aring.index(&ys[n - 1])?);
    let tv = fit_two_vertex_monoid(&gamma, Mode::Affine, a, b, &fit_opts(s), budget)?;
    w.set_block(s, "f_0_0_1", &tv.f_d)?;
    w.set_block(s, "g_0_0", &tv.g)?;
    w.set_block(s, "h_0_0", &tv.h)?;
    w.set_block(s, "f_0_0_2", &tv.f_d2)?;
    fit_chain(s, &mut w, &gamma, &xs, &ys, 1..=n, "f", budget)?;
    set_map_blocks(s, &mut w, &f, &xs)?;

    if s.kind == SystemKind::BirationalPlus {
        let xps = names("xp", 1..=n);
        let yps = names("yp", 1..=n);
        let ambient = Variety::ambient(f.source(), Mode::Projective)?;
        let full = affine_chart(&restricted_graph(&f, &ambient, budget)?, &aring)?;
        let pring = Ring::with_names(&xps.iter().chain(&yps).cloned().collect::<Vec<_>>(), field)?;
        let rename: Vec<Polynomial> = (0..pring.nvars()).map(|i| pring.var(i)).collect();
        let gens = full.gens().iter().map(|g| g.compose(&rename)).collect::<Result<Vec<_>>>()?;
        let gp = Ideal::new(&pring, gens)?;
        fit_chain(s, &mut w, &gp, &xps, &yps, 1..=n - 1, "fp", budget)?;
        let mut keep: Vec<String> = vec![xps[n - 1].clone()];
        keep.extend(yps.iter().cloned());
        let last = projection(&gp, &keep, budget)?;
        keep.push("w".into());
        let wring = Ring::with_names(&keep, field)?;
        let lifted = last.embed(&wring)?.with([wring.var_named("w")?])?;
        let m = fit_monoid(&lifted, Mode::Affine, 0, &fit_opts(s), budget)?;
        w.set_block(s, &format!("fp_{n}_0_1"), m.f_top())?;
        w.set_block(s, &format!("fp_{n}_0_2"), m.f_bot())?;
    }
    complete_certificates(s, &mut w)?;
    Ok(w)
}

/// F_0..F_n from the map dehomogenized at `x0`.
fn set_map_blocks(s: &ParamSystem, w: &mut WitnessAssignment, f: &RationalMap, xs: &[String]) -> Result<()> {
    let MapKind::Projective(comps) = f.kind() else { unreachable!("normalized maps are projective") };
    let xr = Ring::with_names(xs, f.source().field())?;
    let one = Coeff::one();
    for (i, c) in comps.iter().enumerate() {
        let p = c.dehomogenize(0, &one).embed(&xr)?;
        w.set_block(s, &format!("F_{i}"), &p)?;
    }
    Ok(())
}

/// Cofactors for every identity, searched in order after all other blocks
/// are assigned.
fn complete_certificates(s: &ParamSystem, w: &mut WitnessAssignment) -> Result<()> {
    for e in &s.equations {
        let Some(id) = &e.identity else { continue };
        let sub = w.partial(s);
        let b0 = &s.blocks[id.tau_blocks[0]];
        let vars: Vec<&String> = b0.vars.iter().filter(|v| v.as_str() != "a").collect();
        let cring = Ring::with_names(&vars, s.ring.field())?;
        let hs = id
            .generators
            .iter()
            .map(|h| h.substitute_values(&sub).embed(&cring))
            .collect::<Result<Vec<_>>>()?;
        let g = id.target.substitute_values(&sub).embed(&cring)?;
        let q = CertificateQuery::new(hs, g, s.caps.tau_degree);
        let c = find_certificate(&q)?.ok_or(BudgetExceeded::CertificateDegree { limit: s.caps.tau_degree })?;
        w.set_block(s, &b0.name, &c.tau)?;
        for (&bk, t) in id.tau_blocks[1..].iter().zip(&c.cofactors) {
            let name = s.blocks[bk].name.clone();
            w.set_block(s, &name, t)?;
        }
    }
    Ok(())
}

/// Witness for the dominance system E (or E′) from an explicit map: F from the
/// map and Z a generator of the image closure, preferably one not vanishing on
/// Y (which exists exactly when the map is not dominant).
pub fn construct_dominance_witness(
    map: &RationalMap,
    x: &Variety,
    y: &Variety,
    s: &ParamSystem,
    budget: &Budget,
) -> Result<WitnessAssignment> {
    if !matches!(s.kind, SystemKind::Dominance | SystemKind::DominanceExtended) {
        return Err(Error::Input("construct_dominance_witness needs a dominance system".into()));
    }
    if map.degree() > s.d {
        return Err(Error::Input(format!("map degree {} exceeds d = {}", map.degree(), s.d)));
    }
    let nm = normalize(x, y, budget)?;
    let n = nm.n;
    let f = nm.transform_map(map)?;
    let xs = names("x", 1..=n);
    let ys = names("y", 1..=n);
    let mut w = WitnessAssignment::default();
    set_map_blocks(s, &mut w, &f, &xs)?;
    let gamma = restricted_graph(&f, &nm.x, budget)?;
    let image = image_closure(&gamma, f.target(), Mode::Projective, budget)?;
    let zdeg = hypersurface_degree(&nm, s.d, &s.caps, budget)?;
    let mut chosen = None;
    for g in image.gens().iter().filter(|g| g.total_degree().is_some_and(|d| d <= zdeg)) {
        let off_y = !nm.y.ideal().radical_contains(g, budget)?;
        if off_y || chosen.is_none() {
            chosen = Some(g.clone());
        }
        if off_y {
            break;
        }
    }
    let z = chosen.ok_or_else(|| Error::Input(format!("the image lies in no hypersurface of degree ≤ {zdeg}")))?;
    let yr = Ring::with_names(&ys, f.source().field())?;
    w.set_block(s, "Z", &z.dehomogenize(0, &Coeff::one()).embed(&yr)?)?;
    complete_certificates(s, &mut w)?;
    Ok(w)
}

/// Which equation failed, and how.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub index: usize,
    pub step: Step,
    pub stage: usize,
    pub label: String,
    pub residue: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub holds: bool,
    /// First identity that does not vanish identically.
    pub violated: Option<Violation>,
    /// Whether the substituted pointwise system has a solution; not computed
    /// when an identity already failed.
    pub residual_consistent: Option<bool>,
}

/// Pointwise equations with the parameters substituted, in the point ring.
pub fn instantiate(s: &ParamSystem, w: &WitnessAssignment) -> Result<Ideal> {
    let sub = w.indexed(s)?;
    let pr = point_ring(s)?;
    let gens = s
        .equations
        .iter()
        .filter(|e| e.tag.kind == EqKind::Pointwise)
        .map(|e| e.poly.substitute_values(&sub).embed(&pr))
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(&pr, gens)
}

/// Every identity must vanish identically and the pointwise residue must be
/// consistent.
pub fn verify_witness(s: &ParamSystem, w: &WitnessAssignment, budget: &Budget) -> Result<Verification> {
    let sub = w.indexed(s)?;
    for (index, e) in s.equations.iter().enumerate() {
        if e.tag.kind != EqKind::Identity {
            continue;
        }
        let p = e.poly.substitute_values(&sub);
        if !p.is_zero() {
            let mut residue = p.to_string();
            if residue.len() > 200 {
                residue.truncate(200);
                residue.push('…');
            }
            return Ok(Verification {
                holds: false,
                violated: Some(Violation { index, step: e.tag.step, stage: e.tag.stage, label: e.tag.label.clone(), residue }),
                residual_consistent: None,
            });
        }
    }
    let consistent = !instantiate(s, w)?.is_inconsistent(budget)?;
    Ok(Verification { holds: consistent, violated: None, residual_consistent: Some(consistent) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "outcome", content = "reason")]
pub enum SolveOutcome {
    Sat,
    Unsat,
    Inconclusive(String),
}

/// Consistency of the whole system (identities split into coefficient
/// equations) over the algebraic closure, within `budget`. On realistic
/// inputs this runs out of budget. A system with more equations than the
/// S-pair budget is not attempted unless one equation is a nonzero constant.
pub fn toy_solve(s: &ParamSystem, budget: &Budget) -> Result<SolveOutcome> {
    let eqs = s.expanded();
    if eqs.iter().any(|e| e.is_constant() && !e.is_zero()) {
        return Ok(SolveOutcome::Unsat);
    }
    if eqs.len() > budget.max_spairs {
        return Ok(SolveOutcome::Inconclusive(format!(
            "{} equations exceed the budget of {} S-pairs",
            eqs.len(),
            budget.max_spairs
        )));
    }
    let ideal = Ideal::new(&s.ring, eqs)?;
    match ideal.is_inconsistent(budget) {
        Ok(true) => Ok(SolveOutcome::Unsat),
        Ok(false) => Ok(SolveOutcome::Sat),
        Err(e) if e.is_inconclusive() => Ok(SolveOutcome::Inconclusive(e.to_string())),
        Err(e) => Err(e),
    }
}
