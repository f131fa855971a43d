//! Job files, dispatch and reports for the command-line tool.
//!
//! A job is a JSON document with `schema: 1`; see `docs/jobs.md` for the
//! fields each command reads. Every run produces one report whose `verdict`
//! determines the exit code: yes 0, no 1, inconclusive 2, error 3.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::checks::{self, Answer, Evidence, Verdict};
use crate::error::{Error, Result};
use crate::groebner::{meter_read, meter_reset, Budget, Ideal, Spent};
use crate::nullcert::{certify_containment, verify_certificate, CertificateQuery, Containment};
use crate::polyring::{format_coeff, Field, MonomialOrder, Polynomial, Ring};
use crate::varieties::{Mode, RationalMap, Variety};
use crate::wsystem::{self, Caps, ParamSystem, WitnessAssignment};

pub const SCHEMA: u32 = 1;

pub const COMMANDS: &[&str] = &[
    "check-birational",
    "check-dominant",
    "check-regular",
    "check-embedding",
    "check-iso",
    "build-system",
    "build-wplus",
    "build-dominance",
    "construct-witness",
    "verify-witness",
    "toy-solve",
    "certify",
    "groebner",
];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietySpec {
    pub vars: Vec<String>,
    #[serde(default)]
    pub equations: Vec<String>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    #[serde(default)]
    pub components: Option<Vec<String>>,
    #[serde(default)]
    pub numerators: Option<Vec<String>>,
    #[serde(default)]
    pub denominator: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CapsSpec {
    pub spairs: Option<usize>,
    pub degree: Option<u32>,
    pub terms: Option<usize>,
    pub cert_degree: Option<u32>,
    pub monoid_degree: Option<u32>,
    pub tau_degree: Option<u32>,
    pub hypersurface_degree: Option<u32>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub schema: u32,
    #[serde(default)]
    pub command: Option<String>,
    #[serde(default)]
    pub field: Option<String>,
    #[serde(default)]
    pub mode: Option<String>,
    pub source: VarietySpec,
    #[serde(default)]
    pub target: Option<VarietySpec>,
    #[serde(default)]
    pub map: Option<MapSpec>,
    #[serde(default)]
    pub d: Option<u32>,
    #[serde(default)]
    pub caps: CapsSpec,
    /// `certify`: generators and the polynomial whose zero set should contain theirs.
    #[serde(default)]
    pub generators: Option<Vec<String>>,
    #[serde(default)]
    pub polynomial: Option<String>,
    /// `groebner`: `grevlex` (default), `lex` or `block:k`.
    #[serde(default)]
    pub order: Option<String>,
    /// Use the W⁺ system in `construct-witness` / `verify-witness`.
    #[serde(default)]
    pub plus: bool,
    /// `verify-witness`: parameter values, inline or in a file relative to the job.
    #[serde(default)]
    pub witness: Option<std::collections::BTreeMap<String, String>>,
    #[serde(default)]
    pub witness_file: Option<String>,
    /// `toy-solve`: append the equation `1 = 0` first.
    #[serde(default)]
    pub add_contradiction: bool,
}

/// Command-line settings that take precedence over the job file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub spairs: Option<usize>,
    pub degree: Option<u32>,
    pub cert_cap: Option<u32>,
    pub monoid_cap: Option<u32>,
    pub field: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CapsUsed {
    pub spairs: usize,
    pub degree: u32,
    pub terms: usize,
    pub cert_degree: u32,
    pub monoid_degree: u32,
    pub tau_degree: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypersurface_degree: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema: u32,
    pub command: String,
    pub verdict: Answer3,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub property: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub evidence: Vec<Evidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caps: Option<CapsUsed>,
    pub budget_spent: Spent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer3 {
    Yes,
    No,
    Inconclusive,
    Error,
}

impl Answer3 {
    /// Batch exit status: the larger code wins.
    pub fn max_severity(self, other: Answer3) -> Answer3 {
        if other.exit_code() > self.exit_code() {
            other
        } else {
            self
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Answer3::Yes => 0,
            Answer3::No => 1,
            Answer3::Inconclusive => 2,
            Answer3::Error => 3,
        }
    }
}

impl From<Answer> for Answer3 {
    fn from(a: Answer) -> Self {
        match a {
            Answer::Yes => Answer3::Yes,
            Answer::No => Answer3::No,
            Answer::Inconclusive => Answer3::Inconclusive,
        }
    }
}

impl Report {
    fn new(command: &str, verdict: Answer3) -> Self {
        Report {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            schema: SCHEMA,
            command: command.into(),
            verdict,
            exit_code: verdict.exit_code(),
            property: None,
            evidence: vec![],
            reason: None,
            result: None,
            caps: None,
            budget_spent: Spent::default(),
        }
    }

    pub fn error(command: &str, e: &Error) -> Self {
        let verdict = if e.is_inconclusive() { Answer3::Inconclusive } else { Answer3::Error };
        let mut r = Report::new(command, verdict);
        r.reason = Some(e.to_string());
        r
    }

    fn from_verdict(command: &str, v: Verdict) -> Self {
        let mut r = Report::new(command, v.answer.into());
        r.property = Some(v.property);
        r.evidence = v.evidence;
        r.reason = v.reason;
        r.budget_spent = v.budget_spent;
        r
    }

    fn with_result(mut self, result: Value) -> Self {
        self.result = Some(result);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn parse_job(text: &str) -> Result<Job> {
    let job: Job = serde_json::from_str(text).map_err(|e| Error::Input(format!("job file: {e}")))?;
    if job.schema != SCHEMA {
        return Err(Error::Input(format!("unsupported job schema {} (expected {SCHEMA})", job.schema)));
    }
    Ok(job)
}

pub fn parse_field(spec: &str) -> Result<Field> {
    match spec {
        "q" | "Q" => Ok(Field::Rational),
        s if s.starts_with("fp:") => {
            let p: u64 = s[3..].parse().map_err(|_| Error::Input(format!("bad field `{s}`")))?;
            Field::prime(p)
        }
        s => Err(Error::Input(format!("bad field `{s}`, expected q or fp:<p>"))),
    }
}

fn parse_order(spec: Option<&str>) -> Result<MonomialOrder> {
    match spec.unwrap_or("grevlex") {
        "grevlex" => Ok(MonomialOrder::GrevLex),
        "lex" => Ok(MonomialOrder::Lex),
        s if s.starts_with("block:") => {
            let k = s[6..].parse().map_err(|_| Error::Input(format!("bad order `{s}`")))?;
            Ok(MonomialOrder::Block(k))
        }
        s => Err(Error::Input(format!("bad order `{s}`"))),
    }
}

/// Parse `text` in `ring`, naming the offending field on failure.
fn poly(ring: &Ring, text: &str, what: &str) -> Result<Polynomial> {
    ring.parse(text).map_err(|e| match e {
        Error::Syntax { pos, msg } => Error::Syntax { pos, msg: format!("{msg} (in {what})") },
        other => Error::Input(format!("{what}: {other}")),
    })
}

/// Everything a command may need, resolved from the job and the overrides.
struct Context {
    mode: Mode,
    budget: Budget,
    caps: Caps,
    cert_degree: u32,
    source: Ring,
    x: Variety,
    target: Option<(Ring, Variety)>,
}

impl Context {
    fn new(job: &Job, ov: &Overrides) -> Result<Self> {
        let field = parse_field(ov.field.as_deref().or(job.field.as_deref()).unwrap_or("q"))?;
        let mode = match job.mode.as_deref().unwrap_or("projective") {
            "projective" => Mode::Projective,
            "affine" => Mode::Affine,
            m => return Err(Error::Input(format!("bad mode `{m}`"))),
        };
        let mut budget = Budget::default();
        if let Some(v) = ov.spairs.or(job.caps.spairs) {
            budget.max_spairs = v;
        }
        if let Some(v) = ov.degree.or(job.caps.degree) {
            budget.max_degree = v;
        }
        if let Some(v) = job.caps.terms {
            budget.max_terms = v;
        }
        let mut caps = Caps::default();
        if let Some(v) = ov.monoid_cap.or(job.caps.monoid_degree) {
            caps.monoid_degree = v;
        }
        if let Some(v) = job.caps.tau_degree {
            caps.tau_degree = v;
        }
        caps.hypersurface_degree = job.caps.hypersurface_degree;
        let cert_degree = ov.cert_cap.or(job.caps.cert_degree).unwrap_or(4);
        let source = Ring::with_names(&job.source.vars, field)?;
        let x = variety(&source, &job.source, mode, "source")?;
        let target = match &job.target {
            Some(t) => {
                let r = Ring::with_names(&t.vars, field)?;
                let y = variety(&r, t, mode, "target")?;
                Some((r, y))
            }
            None => None,
        };
        Ok(Context { mode, budget, caps, cert_degree, source, x, target })
    }

    fn caps_used(&self) -> CapsUsed {
        CapsUsed {
            spairs: self.budget.max_spairs,
            degree: self.budget.max_degree,
            terms: self.budget.max_terms,
            cert_degree: self.cert_degree,
            monoid_degree: self.caps.monoid_degree,
            tau_degree: self.caps.tau_degree,
            hypersurface_degree: self.caps.hypersurface_degree,
        }
    }

    fn target(&self) -> Result<&(Ring, Variety)> {
        self.target.as_ref().ok_or_else(|| Error::Input("job needs a `target`".into()))
    }

    fn map(&self, job: &Job) -> Result<RationalMap> {
        let spec = job.map.as_ref().ok_or_else(|| Error::Input("job needs a `map`".into()))?;
        let (t, _) = self.target()?;
        let s = &self.source;
        match (&spec.components, &spec.numerators) {
            (Some(c), None) => {
                let comps = c
                    .iter()
                    .enumerate()
                    .map(|(i, p)| poly(s, p, &format!("map.components[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                RationalMap::projective(s, t, comps)
            }
            (None, Some(nums)) => {
                let nums = nums
                    .iter()
                    .enumerate()
                    .map(|(i, p)| poly(s, p, &format!("map.numerators[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let den = poly(s, spec.denominator.as_deref().unwrap_or("1"), "map.denominator")?;
                RationalMap::affine(s, t, nums, den)
            }
            _ => Err(Error::Input("map needs exactly one of `components` and `numerators`".into())),
        }
    }

    fn d(&self, job: &Job) -> Result<u32> {
        job.d.ok_or_else(|| Error::Input("job needs `d`".into()))
    }
}

fn variety(ring: &Ring, spec: &VarietySpec, mode: Mode, what: &str) -> Result<Variety> {
    let gens = spec
        .equations
        .iter()
        .enumerate()
        .map(|(i, e)| poly(ring, e, &format!("{what}.equations[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Variety::new(Ideal::new(ring, gens)?, mode)
}

/// Run one job. `command` must agree with the job's own `command`, if set;
/// `base` resolves relative paths inside the job.
pub fn run(command: &str, job: &Job, ov: &Overrides, base: &Path) -> Report {
    meter_reset();
    let mut report = match dispatch(command, job, ov, base) {
        Ok(r) => r,
        Err(e) => Report::error(command, &e),
    };
    if report.budget_spent.groebner_runs == 0 {
        report.budget_spent = meter_read();
    }
    if report.caps.is_none() {
        report.caps = Context::new(job, ov).ok().map(|c| c.caps_used());
    }
    report
}

fn dispatch(command: &str, job: &Job, ov: &Overrides, base: &Path) -> Result<Report> {
    if let Some(c) = &job.command {
        if c != command {
            return Err(Error::Input(format!("job is for `{c}`, not `{command}`")));
        }
    }
    let ctx = Context::new(job, ov)?;
    let b = &ctx.budget;
    let verdict = |v: Verdict| Ok(Report::from_verdict(command, v));
    match command {
        "check-birational" => {
            let (_, y) = ctx.target()?;
            verdict(checks::check_birational(&ctx.map(job)?, &ctx.x, y, b)?)
        }
        "check-dominant" => {
            let (_, y) = ctx.target()?;
            verdict(checks::check_dominant(&ctx.map(job)?, &ctx.x, y, b)?)
        }
        "check-regular" => verdict(checks::check_regular(&ctx.map(job)?, &ctx.x, b)?),
        "check-embedding" => {
            let (_, y) = ctx.target()?;
            let f = ctx.map(job)?;
            verdict(match ctx.mode {
                Mode::Projective => checks::check_regular_embedding(&f, &ctx.x, y, b)?,
                Mode::Affine => checks::check_closed_embedding_affine(&f, &ctx.x, y, b)?,
            })
        }
        "check-iso" => {
            let (_, y) = ctx.target()?;
            let f = ctx.map(job)?;
            verdict(match ctx.mode {
                Mode::Projective => checks::check_isomorphism_onto(&f, &ctx.x, y, b)?,
                Mode::Affine => affine_iso(&f, &ctx.x, y, b)?,
            })
        }
        "build-system" | "build-wplus" => {
            let s = system(&ctx, job, command == "build-wplus")?;
            Ok(Report::new(command, Answer3::Yes).with_result(system_summary(&s)))
        }
        "build-dominance" => {
            let (_, y) = ctx.target()?;
            let (e, ep) = wsystem::build_dominance_system(&ctx.x, y, ctx.d(job)?, &ctx.caps, b)?;
            Ok(Report::new(command, Answer3::Yes).with_result(json!({
                "E": serde_json::to_value(&e).expect("system serializes"),
                "E_prime": serde_json::to_value(&ep).expect("system serializes"),
            })))
        }
        "construct-witness" => {
            let (_, y) = ctx.target()?;
            let s = system(&ctx, job, job.plus)?;
            let w = wsystem::construct_witness(&ctx.map(job)?, &ctx.x, y, &s, b)?;
            let v = wsystem::verify_witness(&s, &w, b)?;
            let verdict = if v.holds { Answer3::Yes } else { Answer3::No };
            let mut r = Report::new(command, verdict).with_result(json!({
                "witness": witness_value(&w),
                "verification": v,
            }));
            r.property = Some("witness".into());
            Ok(r)
        }
        "verify-witness" => {
            let s = system(&ctx, job, job.plus)?;
            let w = witness(job, base)?;
            let v = wsystem::verify_witness(&s, &w, b)?;
            let mut r = Report::new(command, if v.holds { Answer3::Yes } else { Answer3::No })
                .with_result(serde_json::to_value(&v).expect("verification serializes"));
            r.property = Some("witness".into());
            Ok(r)
        }
        "toy-solve" => {
            let mut s = system(&ctx, job, job.plus)?;
            if job.add_contradiction {
                s = s.with_equation(s.ring.one(), "contradiction")?;
            }
            let out = wsystem::toy_solve(&s, b)?;
            let (verdict, reason) = match &out {
                wsystem::SolveOutcome::Sat => (Answer3::Yes, None),
                wsystem::SolveOutcome::Unsat => (Answer3::No, None),
                wsystem::SolveOutcome::Inconclusive(why) => (Answer3::Inconclusive, Some(why.clone())),
            };
            let mut r = Report::new(command, verdict);
            r.property = Some("solvable".into());
            r.reason = reason;
            Ok(r)
        }
        "certify" => certify(&ctx, job, command),
        "groebner" => {
            let order = parse_order(job.order.as_deref())?;
            let gb = ctx.x.ideal().groebner(order, b)?;
            Ok(Report::new(command, Answer3::Yes).with_result(json!({
                "order": job.order.clone().unwrap_or_else(|| "grevlex".into()),
                "basis": checks_strings(&gb.basis),
                "s_pairs": gb.s_pairs_processed,
                "max_degree": gb.max_intermediate_degree,
            })))
        }
        other => Err(Error::Input(format!("unknown command `{other}`"))),
    }
}

/// Affine isomorphism onto Y: a closed embedding whose image is all of Y.
fn affine_iso(f: &RationalMap, x: &Variety, y: &Variety, b: &Budget) -> Result<Verdict> {
    let emb = checks::check_closed_embedding_affine(f, x, y, b)?;
    if !emb.is_yes() {
        return Ok(emb);
    }
    let dom = checks::check_dominant(f, x, y, b)?;
    Ok(if dom.is_yes() { emb } else { dom })
}

fn checks_strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn system(ctx: &Context, job: &Job, plus: bool) -> Result<ParamSystem> {
    let (_, y) = ctx.target()?;
    let d = ctx.d(job)?;
    if plus {
        wsystem::build_birational_plus_system(&ctx.x, y, d, &ctx.caps, &ctx.budget)
    } else {
        wsystem::build_system(&ctx.x, y, d, &ctx.caps, &ctx.budget)
    }
}

fn system_summary(s: &ParamSystem) -> Value {
    serde_json::to_value(s).expect("system serializes")
}

fn witness_value(w: &WitnessAssignment) -> Value {
    serde_json::from_str(&w.to_json()).expect("witness serializes")
}

fn witness(job: &Job, base: &Path) -> Result<WitnessAssignment> {
    if let Some(values) = &job.witness {
        let text = serde_json::to_string(&json!({ "values": values })).expect("map serializes");
        return WitnessAssignment::from_json(&text);
    }
    let file = job.witness_file.as_ref().ok_or_else(|| Error::Input("job needs `witness` or `witness_file`".into()))?;
    let text = std::fs::read_to_string(base.join(file)).map_err(|e| Error::Input(format!("{file}: {e}")))?;
    // a construct-witness report is accepted as well as a bare witness
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Input(format!("{file}: {e}")))?;
    if v.get("tool").is_some() && v.pointer("/result/witness").is_none() {
        return Err(Error::Input(format!("{file} is a report without a witness")));
    }
    let inner = v.pointer("/result/witness").cloned().unwrap_or(v);
    WitnessAssignment::from_json(&inner.to_string())
}

fn certify(ctx: &Context, job: &Job, command: &str) -> Result<Report> {
    let r = &ctx.source;
    let gens = job
        .generators
        .as_ref()
        .ok_or_else(|| Error::Input("certify needs `generators`".into()))?
        .iter()
        .enumerate()
        .map(|(i, g)| poly(r, g, &format!("generators[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let h = poly(r, job.polynomial.as_deref().ok_or_else(|| Error::Input("certify needs `polynomial`".into()))?, "polynomial")?;
    let ideal = Ideal::new(r, gens.clone())?;
    let mut report = match certify_containment(&ideal, &h, ctx.cert_degree, &ctx.budget)? {
        Containment::Yes(Some(c)) => {
            let ok = verify_certificate(&CertificateQuery::new(gens, h, ctx.cert_degree), &c);
            Report::new(command, if ok { Answer3::Yes } else { Answer3::Error }).with_result(json!({
                "degree": c.degree,
                "tau": c.tau.to_string(),
                "cofactors": checks_strings(&c.cofactors),
                "verified": ok,
            }))
        }
        Containment::Yes(None) => {
            let mut rep = Report::new(command, Answer3::Yes);
            rep.reason = Some(format!("radical membership holds; no certificate up to degree {}", ctx.cert_degree));
            rep
        }
        Containment::No { point } => {
            let mut rep = Report::new(command, Answer3::No);
            if let Some(p) = point {
                rep.evidence.push(Evidence::Point {
                    chart: "V(generators)".into(),
                    coordinates: r.vars().names().iter().cloned().zip(p.iter().map(format_coeff)).collect(),
                });
            }
            rep.reason = Some("the polynomial does not vanish on V(generators)".into());
            rep
        }
        Containment::Inconclusive(why) => {
            let mut rep = Report::new(command, Answer3::Inconclusive);
            rep.reason = Some(why);
            rep
        }
    };
    report.property = Some("containment".into());
    report.caps = Some(ctx.caps_used());
    Ok(report)
}
