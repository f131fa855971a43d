//! Parameterized polynomial systems whose solutions encode bounded-degree
//! birational maps X ⇢ Y, with witness construction and verification.
//!
//! Every system lives in one ring whose variables are split into point
//! variables (coordinates `x1..xn`, `y1..yn`, chart variables `t_*`, the
//! certificate variable `a`, and `w`) and parameters (all named `c_<block>_<k>`,
//! where `k` indexes the monomials of the block in [`monomials_up_to`] order).
//!
//! Equations come in two kinds. A pointwise equation must vanish at the point.
//! An identity `-1 + τ_0·(1 - a·g) + Σ τ_i·h_i` must vanish identically in the
//! point variables: it certifies that the pointwise equations `h_i` listed in
//! its tag cut out a set inside V(g).

mod build;
mod witness;

use std::collections::{BTreeMap, HashMap};

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyring::{monomials_up_to, Coeff, Field, Monomial, Polynomial, Ring};

pub use build::{build_birational_plus_system, build_dominance_system, build_system, normalize, Normalized};
pub use witness::{
    construct_dominance_witness, construct_witness, instantiate, toy_solve, verify_witness, SolveOutcome,
    Verification, WitnessAssignment,
};

/// Dense matrix, row by row.
pub type Matrix = Vec<Vec<Coeff>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarKind {
    Point,
    Param,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EqKind {
    Pointwise,
    Identity,
}

/// Which part of the construction added an equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    /// Equations of X in the affine chart.
    Seed,
    /// One-vertex monoids adding `y_j`, `j = 1..n-1`.
    SourceChain,
    /// The two-vertex monoid in `x_n` and `y_n`.
    TwoVertex,
    /// Monoids dropping `x_j`, `j = 1..n`, coupled by certificates.
    TargetChain,
    /// Coupling to the map F and to the equations of Y.
    Coupling,
    /// Graph of F in primed coordinates.
    GraphSeed,
    /// One-vertex chain on the graph of F, ending in the `w` hyperplane.
    GraphChain,
    /// Graph of F over X for the dominance systems.
    Image,
    /// The hypersurface Z through the image.
    Hypersurface,
    /// Y inside Z.
    TargetInHypersurface,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    Birational,
    BirationalPlus,
    Dominance,
    DominanceExtended,
}

/// Data of an identity equation: the target `g` and the polynomials `h_i` it
/// is built from, with the index of the system equation each one is (if any).
#[derive(Clone, Debug)]
pub struct IdentityData {
    pub target: Polynomial,
    pub generators: Vec<Polynomial>,
    pub sources: Vec<Option<usize>>,
    /// Blocks of `τ_0, τ_1, …`, in order.
    pub tau_blocks: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Tag {
    pub step: Step,
    pub stage: usize,
    pub kind: EqKind,
    pub label: String,
}

#[derive(Clone, Debug)]
pub struct Equation {
    pub poly: Polynomial,
    pub tag: Tag,
    pub identity: Option<IdentityData>,
}

/// A general polynomial `Σ c_<name>_<k> · m_k` over `vars`.
#[derive(Clone, Debug)]
pub struct Block {
    pub name: String,
    pub vars: Vec<String>,
    pub degree: u32,
    /// Monomials over `vars` (indices into `vars`).
    pub monomials: Vec<Monomial>,
    pub params: Vec<String>,
}

impl Block {
    fn new(name: &str, vars: &[String], degree: u32) -> Self {
        let idx: Vec<usize> = (0..vars.len()).collect();
        let monomials = monomials_up_to(&idx, degree);
        let params = (0..monomials.len()).map(|k| format!("c_{name}_{k}")).collect();
        Block { name: name.into(), vars: vars.to_vec(), degree, monomials, params }
    }

    /// Parameter values making the block equal to `p`, whose variables must be
    /// among the block variables (matched by name).
    pub fn assign(&self, p: &Polynomial) -> Result<Vec<(String, Coeff)>> {
        let local = Ring::with_names(&self.vars, p.field())?;
        let q = p.embed(&local).map_err(|_| {
            Error::Input(format!("polynomial for block `{}` uses variables outside {:?}", self.name, self.vars))
        })?;
        let pos: HashMap<&Monomial, usize> = self.monomials.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let mut vals = vec![Coeff::from_integer(0.into()); self.params.len()];
        for (m, c) in q.terms() {
            match pos.get(m) {
                Some(&k) => vals[k] = c.clone(),
                None => {
                    return Err(Error::Input(format!(
                        "polynomial for block `{}` exceeds its degree cap {}",
                        self.name, self.degree
                    )))
                }
            }
        }
        Ok(self.params.iter().cloned().zip(vals).collect())
    }
}

/// Degree caps for the emitted systems.
#[derive(Clone, Debug, Serialize)]
pub struct Caps {
    /// Degree cap for the monoid coefficient blocks.
    pub monoid_degree: u32,
    /// Degree cap (counting `a`) of every certificate cofactor block.
    pub tau_degree: u32,
    /// Degree of the hypersurface Z; `None` uses the Bézout bound of Y.
    pub hypersurface_degree: Option<u32>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { monoid_degree: 3, tau_degree: 2, hypersurface_degree: None }
    }
}

/// Constants recorded alongside a system.
#[derive(Clone, Debug, Serialize)]
pub struct Constants {
    /// Bézout bound for the degree of X.
    pub c1: u64,
    /// Monoid degree cap.
    pub c2: u32,
    /// Largest total degree of an equation in the assembled system.
    pub c3: u32,
    /// Number of coefficients of a degree-`c2` monoid block in `2n - 1` variables.
    pub monoid_coefficients: u128,
}

#[derive(Clone, Debug)]
pub struct ParamSystem {
    pub kind: SystemKind,
    pub n: usize,
    pub d: u32,
    pub caps: Caps,
    pub constants: Constants,
    pub ring: Ring,
    pub point_vars: Vec<String>,
    pub param_vars: Vec<String>,
    pub blocks: Vec<Block>,
    pub equations: Vec<Equation>,
    /// Linear coordinate changes applied to X and Y (rows of the matrix B with
    /// old coordinates = B · new coordinates), when one was needed.
    pub changes: (Option<Matrix>, Option<Matrix>),
}

impl ParamSystem {
    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }

    pub fn count(&self, step: Step) -> usize {
        self.equations.iter().filter(|e| e.tag.step == step).count()
    }

    /// Equations added at each stage of `step`, in stage order.
    pub fn stage_counts(&self, step: Step) -> Vec<usize> {
        let mut m: BTreeMap<usize, usize> = BTreeMap::new();
        for e in self.equations.iter().filter(|e| e.tag.step == step) {
            *m.entry(e.tag.stage).or_default() += 1;
        }
        m.into_values().collect()
    }

    pub fn is_point_var(&self, i: usize) -> bool {
        i < self.point_vars.len()
    }

    /// The system with one more pointwise equation.
    pub fn with_equation(&self, poly: Polynomial, label: &str) -> Result<Self> {
        let mut s = self.clone();
        let step = self.equations.last().map(|e| e.tag.step).unwrap_or(Step::Seed);
        s.equations.push(Equation {
            poly: poly.embed(&s.ring)?,
            tag: Tag { step, stage: 0, kind: EqKind::Pointwise, label: label.into() },
            identity: None,
        });
        Ok(s)
    }

    /// All conditions as polynomial equations in the full ring: pointwise
    /// equations as they are, identities split into their coefficients with
    /// respect to the point variables.
    pub fn expanded(&self) -> Vec<Polynomial> {
        let np = self.point_vars.len();
        let mut out = Vec::new();
        for e in &self.equations {
            match e.tag.kind {
                EqKind::Pointwise => out.push(e.poly.clone()),
                EqKind::Identity => out.extend(e.poly.coefficients_in(|v| v < np).into_values()),
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system serializes")
    }
}

#[derive(Serialize)]
struct VarDecl<'a> {
    name: &'a str,
    kind: VarKind,
}

#[derive(Serialize)]
struct BlockDecl<'a> {
    name: &'a str,
    vars: &'a [String],
    degree: u32,
    size: usize,
}

#[derive(Serialize)]
struct EqDecl<'a> {
    polynomial: String,
    step: Step,
    stage: usize,
    kind: EqKind,
    label: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<String>>,
}

fn matrix_strings(m: &Option<Vec<Vec<Coeff>>>) -> Option<Vec<Vec<String>>> {
    m.as_ref().map(|rows| rows.iter().map(|r| r.iter().map(crate::polyring::format_coeff).collect()).collect())
}

impl Serialize for ParamSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let vars: Vec<VarDecl> = self
            .point_vars
            .iter()
            .map(|n| VarDecl { name: n, kind: VarKind::Point })
            .chain(self.param_vars.iter().map(|n| VarDecl { name: n, kind: VarKind::Param }))
            .collect();
        let blocks: Vec<BlockDecl> = self
            .blocks
            .iter()
            .map(|b| BlockDecl { name: &b.name, vars: &b.vars, degree: b.degree, size: b.params.len() })
            .collect();
        let eqs: Vec<EqDecl> = self
            .equations
            .iter()
            .map(|e| EqDecl {
                polynomial: e.poly.to_string(),
                step: e.tag.step,
                stage: e.tag.stage,
                kind: e.tag.kind,
                label: &e.tag.label,
                target: e.identity.as_ref().map(|i| i.target.to_string()),
                generators: e.identity.as_ref().map(|i| {
                    i.generators
                        .iter()
                        .zip(&i.sources)
                        .map(|(g, s)| match s {
                            Some(k) => format!("#{k}"),
                            None => g.to_string(),
                        })
                        .collect()
                }),
            })
            .collect();
        let mut st = s.serialize_struct("ParamSystem", 10)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("caps", &self.caps)?;
        st.serialize_field("constants", &self.constants)?;
        st.serialize_field("change_x", &matrix_strings(&self.changes.0))?;
        st.serialize_field("change_y", &matrix_strings(&self.changes.1))?;
        st.serialize_field("variables", &vars)?;
        st.serialize_field("blocks", &blocks)?;
        st.serialize_field("equations", &eqs)?;
        st.end()
    }
}

/// Incremental assembly. The ring grows as variables are declared; equations
/// are re-embedded into the final ring at the end.
#[derive(Clone)]
struct Builder {
    field: Field,
    ring: Ring,
    point: Vec<String>,
    params: Vec<String>,
    blocks: Vec<Block>,
    eqs: Vec<Equation>,
}

impl Builder {
    fn new(field: Field, point: &[String]) -> Result<Self> {
        Ok(Builder {
            field,
            ring: Ring::with_names(point, field)?,
            point: point.to_vec(),
            params: vec![],
            blocks: vec![],
            eqs: vec![],
        })
    }

    fn rebuild(&mut self) -> Result<()> {
        let names: Vec<&String> = self.point.iter().chain(self.params.iter()).collect();
        self.ring = Ring::with_names(&names, self.field)?;
        Ok(())
    }

    fn add_points(&mut self, names: &[String]) -> Result<()> {
        self.point.extend(names.iter().cloned());
        self.rebuild()
    }

    fn var(&self, name: &str) -> Polynomial {
        self.ring.var_named(name).expect("declared variable")
    }

    /// The block's general polynomial, with its monomials read over `vars`
    /// (which may differ from the block's own variables, for reuse).
    fn realize(&self, b: usize, vars: &[String]) -> Result<Polynomial> {
        let block = &self.blocks[b];
        let idx: Vec<usize> = vars.iter().map(|v| self.ring.index(v)).collect::<Result<_>>()?;
        let one = Coeff::from_integer(1.into());
        let mut acc = self.ring.zero();
        for (m, p) in block.monomials.iter().zip(&block.params) {
            let mono = Monomial::from_dense(&{
                let mut e = vec![0u32; self.ring.nvars()];
                for &(v, k) in m.pairs() {
                    e[idx[v as usize]] = k;
                }
                e
            });
            let pv = self.ring.index(p)?;
            acc = &acc + &self.ring.term(one.clone(), mono.mul(&Monomial::var(pv, 1)));
        }
        Ok(acc)
    }

    /// Declare a general polynomial block and return it.
    fn general(&mut self, name: &str, vars: &[String], degree: u32) -> Result<(usize, Polynomial)> {
        let block = Block::new(name, vars, degree);
        self.params.extend(block.params.iter().cloned());
        self.blocks.push(block);
        self.rebuild()?;
        let b = self.blocks.len() - 1;
        Ok((b, self.realize(b, vars)?))
    }

    fn push(&mut self, poly: Polynomial, step: Step, stage: usize, label: String) -> usize {
        self.eqs.push(Equation { poly, tag: Tag { step, stage, kind: EqKind::Pointwise, label }, identity: None });
        self.eqs.len() - 1
    }

    /// Indices of the pointwise equations so far, optionally only those whose
    /// label starts with `prefix`.
    fn pointwise(&self, prefix: Option<&str>) -> Vec<usize> {
        self.eqs
            .iter()
            .enumerate()
            .filter(|(_, e)| e.tag.kind == EqKind::Pointwise && prefix.is_none_or(|p| e.tag.label.starts_with(p)))
            .map(|(i, _)| i)
            .collect()
    }

    /// Pointwise equations with the given indices, as identity generators.
    fn hs(&self, idx: Vec<usize>) -> (Vec<Polynomial>, Vec<Option<usize>>) {
        (idx.iter().map(|&i| self.eqs[i].poly.clone()).collect(), idx.into_iter().map(Some).collect())
    }

    /// Append the identity certifying V(h) ⊆ V(target). The cofactors are
    /// general in `vars` and `a`, of degree `tau_degree`.
    #[allow(clippy::too_many_arguments)]
    fn identity(
        &mut self,
        target: &Polynomial,
        (gens, sources): (Vec<Polynomial>, Vec<Option<usize>>),
        vars: &[String],
        tau_name: &str,
        tau_degree: u32,
        step: Step,
        stage: usize,
        label: String,
    ) -> Result<usize> {
        let mut tv: Vec<String> = vars.iter().filter(|v| v.as_str() != "a").cloned().collect();
        tv.push("a".into());
        let mut tau_blocks = Vec::with_capacity(gens.len() + 1);
        let mut taus = Vec::with_capacity(gens.len() + 1);
        for k in 0..=gens.len() {
            let (b, _) = self.general(&format!("{tau_name}_{k}"), &tv, tau_degree)?;
            tau_blocks.push(b);
        }
        for &b in &tau_blocks {
            taus.push(self.realize(b, &tv)?);
        }
        let r = self.ring.clone();
        let g = target.embed(&r)?;
        let mut acc = &(&taus[0] * &(&r.one() - &(&self.var("a") * &g))) - &r.one();
        let gens = gens.iter().map(|h| h.embed(&r)).collect::<Result<Vec<_>>>()?;
        for (t, h) in taus[1..].iter().zip(&gens) {
            acc = &acc + &(t * h);
        }
        self.eqs.push(Equation {
            poly: acc,
            tag: Tag { step, stage, kind: EqKind::Identity, label },
            identity: Some(IdentityData { target: g, generators: gens, sources, tau_blocks }),
        });
        Ok(self.eqs.len() - 1)
    }

    fn finish(
        self,
        kind: SystemKind,
        n: usize,
        d: u32,
        caps: &Caps,
        c1: u64,
        changes: (Option<Matrix>, Option<Matrix>),
    ) -> Result<ParamSystem> {
        let ring = self.ring;
        let mut equations = Vec::with_capacity(self.eqs.len());
        for mut e in self.eqs {
            e.poly = e.poly.embed(&ring)?;
            if let Some(id) = e.identity.as_mut() {
                id.target = id.target.embed(&ring)?;
                for g in id.generators.iter_mut() {
                    *g = g.embed(&ring)?;
                }
            }
            equations.push(e);
        }
        let c3 = equations.iter().filter_map(|e| e.poly.total_degree()).max().unwrap_or(0);
        let m = (2 * n).saturating_sub(1) as u32;
        Ok(ParamSystem {
            kind,
            n,
            d,
            caps: caps.clone(),
            constants: Constants {
                c1,
                c2: caps.monoid_degree,
                c3,
                monoid_coefficients: crate::monoids::q_sequence(m, caps.monoid_degree),
            },
            ring,
            point_vars: self.point,
            param_vars: self.params,
            blocks: self.blocks,
            equations,
            changes,
        })
    }
}

/// `prefix1 .. prefixn` for the given range.
fn names(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests;
