//! Decision procedures for explicit maps: rationality into a target,
//! dominance, birationality, regularity, embeddings and the affine variants.

mod affine;
mod inverse;
mod tangent;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{find_rational_point, meter_read, Budget, Ideal, Spent};
use crate::polyring::{format_coeff, Coeff, Polynomial, Ring};
use crate::varieties::{image_closure, restricted_graph, RationalMap, Variety};

pub use affine::{check_closed_embedding_affine, check_surjective_regular_affine, projection_surjective, Surjectivity};
pub use inverse::{check_birational, extract_inverse, inverse_map, Extraction};
pub use tangent::{
    check_isomorphism_onto, check_regular, check_regular_embedding, graph_charts, relative_tangent_test, GraphChart,
    RelativeJacobian, Side,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Inconclusive,
}

/// Re-checkable support for a verdict. Polynomials and coordinates are in the
/// input grammar.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// A point satisfying the system that should have been inconsistent.
    Point { chart: String, coordinates: Vec<(String, String)> },
    /// A polynomial vanishing on one set and not on the other.
    Separating { polynomial: String, vanishes_on: String, not_on: String },
    /// The ideal generated by these polynomials has reduced basis {1}.
    Inconsistent { chart: String, generators: Vec<String> },
    /// Reduced basis of a consistent system.
    Consistent { chart: String, basis: Vec<String> },
    /// Generators of a computed image closure.
    Image { generators: Vec<String> },
    /// Components of an inverse map, in the target variables.
    Inverse { components: Vec<String>, denominator: Option<String> },
    /// The polynomials lie in the ideal (or its radical) of the named set.
    Vanishing { polynomials: Vec<String>, on: String, radical: bool },
    Note { text: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub property: String,
    pub answer: Answer,
    pub evidence: Vec<Evidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub budget_spent: Spent,
}

impl Verdict {
    fn new(property: &str, answer: Answer, evidence: Vec<Evidence>) -> Self {
        Verdict { property: property.into(), answer, evidence, reason: None, budget_spent: Spent::default() }
    }

    pub fn yes(property: &str, evidence: Vec<Evidence>) -> Self {
        Verdict::new(property, Answer::Yes, evidence)
    }

    pub fn no(property: &str, evidence: Vec<Evidence>) -> Self {
        Verdict::new(property, Answer::No, evidence)
    }

    pub fn inconclusive(property: &str, reason: impl Into<String>) -> Self {
        let mut v = Verdict::new(property, Answer::Inconclusive, vec![]);
        v.reason = Some(reason.into());
        v
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }

    fn because(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    /// The same outcome reported under another property name, for a failed
    /// prerequisite.
    fn relabel(mut self, property: &str) -> Self {
        let why = format!("prerequisite `{}` is {:?}", self.property, self.answer).to_lowercase();
        self.reason = Some(match self.reason.take() {
            Some(r) => format!("{why}: {r}"),
            None => why,
        });
        self.property = property.into();
        self
    }
}

/// Runs a check, turning budget overruns into an inconclusive verdict and
/// recording the Gröbner work spent.
fn metered(property: &str, f: impl FnOnce() -> Result<Verdict>) -> Result<Verdict> {
    let start = meter_read();
    let mut v = match f() {
        Ok(v) => v,
        Err(e) if e.is_inconclusive() => Verdict::inconclusive(property, e.to_string()),
        Err(e) => return Err(e),
    };
    let end = meter_read();
    v.budget_spent = Spent {
        groebner_runs: end.groebner_runs - start.groebner_runs,
        s_pairs: end.s_pairs - start.s_pairs,
        max_degree: end.max_degree,
    };
    Ok(v)
}

pub(crate) fn strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

pub(crate) fn named_point(ring: &Ring, point: &[Coeff]) -> Vec<(String, String)> {
    ring.vars().names().iter().cloned().zip(point.iter().map(format_coeff)).collect()
}

/// A base-field point of V(I) off V(h), as evidence; `None` if the search
/// fails or runs out of budget.
pub(crate) fn point_off(ideal: &Ideal, h: &Polynomial, chart: &str, budget: &Budget) -> Option<Evidence> {
    let (c, t) = ideal.saturation_chart(h, "s").ok()?;
    let mut p = find_rational_point(&c, budget).ok().flatten()?;
    p.remove(t);
    Some(Evidence::Point { chart: chart.into(), coordinates: named_point(ideal.ring(), &p) })
}

fn check_rings(map: &RationalMap, x: &Variety, y: &Variety) -> Result<()> {
    if x.ring() != map.source() || y.ring() != map.target() {
        return Err(Error::VariableMismatch);
    }
    if x.mode() != map.mode() || y.mode() != map.mode() {
        return Err(Error::Input("map and varieties must all be affine or all projective".into()));
    }
    Ok(())
}

/// Graph closure over `x` and the closure of its projection to the target.
pub(crate) fn graph_and_image(map: &RationalMap, x: &Variety, budget: &Budget) -> Result<(Ideal, Variety)> {
    let gamma = restricted_graph(map, x, budget)?;
    let image = image_closure(&gamma, map.target(), map.mode(), budget)?;
    Ok((gamma, image))
}

/// X is not inside the base locus of F, and the image of F|_X lies in Y.
pub fn check_rational_into(map: &RationalMap, x: &Variety, y: &Variety, budget: &Budget) -> Result<Verdict> {
    const P: &str = "rational_into";
    check_rings(map, x, y)?;
    metered(P, || {
        let (gamma, image) = match graph_and_image(map, x, budget) {
            Err(Error::MapUndefined) => {
                return Ok(Verdict::no(
                    P,
                    vec![Evidence::Vanishing { polynomials: strings(&map.base_locus()), on: "X".into(), radical: true }],
                )
                .because("every defining polynomial of the map vanishes on X"));
            }
            r => r?,
        };
        for g in y.gens() {
            if !image.ideal().radical_contains(g, budget)? {
                let gg = g.embed(gamma.ring())?;
                let mut ev =
                    vec![Evidence::Separating { polynomial: g.to_string(), vanishes_on: "Y".into(), not_on: "F(X)".into() }];
                ev.extend(point_off(&gamma, &gg, "graph", budget));
                return Ok(Verdict::no(P, ev).because("the image is not contained in Y"));
            }
        }
        Ok(Verdict::yes(P, vec![Evidence::Image { generators: strings(image.gens()) }]))
    })
}

/// The closure of F(X) equals Y.
pub fn check_dominant(map: &RationalMap, x: &Variety, y: &Variety, budget: &Budget) -> Result<Verdict> {
    const P: &str = "dominant";
    let pre = check_rational_into(map, x, y, budget)?;
    if !pre.is_yes() {
        return Ok(pre.relabel(P));
    }
    metered(P, || {
        let (_, image) = graph_and_image(map, x, budget)?;
        for z in image.gens() {
            if !y.ideal().radical_contains(z, budget)? {
                let mut ev =
                    vec![Evidence::Separating { polynomial: z.to_string(), vanishes_on: "F(X)".into(), not_on: "Y".into() }];
                ev.extend(point_off(y.ideal(), z, "Y", budget));
                return Ok(Verdict::no(P, ev).because("the image closure is a proper subvariety of Y"));
            }
        }
        Ok(Verdict::yes(P, vec![Evidence::Image { generators: strings(image.gens()) }]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Field;
    use crate::varieties::Mode;

    fn rings(src: &[&str], tgt: &[&str]) -> (Ring, Ring) {
        (Ring::with_names(src, Field::Rational).unwrap(), Ring::with_names(tgt, Field::Rational).unwrap())
    }

    fn pmap(s: &Ring, t: &Ring, comps: &[&str]) -> RationalMap {
        RationalMap::projective(s, t, comps.iter().map(|c| s.parse(c).unwrap()).collect()).unwrap()
    }

    #[test]
    fn identity_on_conic_is_into() {
        let (s, t) = rings(&["x", "y", "z"], &["u", "v", "w"]);
        let x = Variety::from_strings(&s, &["x*z - y^2"], Mode::Projective).unwrap();
        let y = Variety::from_strings(&t, &["u*w - v^2"], Mode::Projective).unwrap();
        let f = pmap(&s, &t, &["x", "y", "z"]);
        let b = Budget::default();
        assert!(check_rational_into(&f, &x, &y, &b).unwrap().is_yes());
        assert!(check_dominant(&f, &x, &y, &b).unwrap().is_yes());
        let other = Variety::from_strings(&t, &["u*w - 2*v^2"], Mode::Projective).unwrap();
        let v = check_rational_into(&f, &x, &other, &b).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert!(v.budget_spent.groebner_runs > 0);
    }

    #[test]
    fn undefined_map_is_reported() {
        let (s, t) = rings(&["x", "y", "z"], &["u", "v"]);
        let x = Variety::from_strings(&s, &["x", "y"], Mode::Projective).unwrap();
        let y = Variety::ambient(&t, Mode::Projective).unwrap();
        let v = check_rational_into(&pmap(&s, &t, &["x", "y"]), &x, &y, &Budget::default()).unwrap();
        assert_eq!(v.answer, Answer::No);
    }

    #[test]
    fn constant_map_is_not_dominant() {
        let (s, t) = rings(&["x", "y"], &["u", "v"]);
        let x = Variety::ambient(&s, Mode::Projective).unwrap();
        let y = Variety::ambient(&t, Mode::Projective).unwrap();
        let v = check_dominant(&pmap(&s, &t, &["x", "x"]), &x, &y, &Budget::default()).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert!(matches!(v.evidence[0], Evidence::Separating { .. }));
    }
}
