//! Relative tangent spaces of graph projections, chart by chart.

use crate::error::{Error, Result};
use crate::groebner::{find_rational_point, Budget, Ideal};
use crate::polyring::{Coeff, Polynomial, Ring};
use crate::varieties::{jacobian_minors, restricted_graph, smoothness_check, Mode, RationalMap, Variety};

use super::{
    affine::{projection_surjective, Surjectivity},
    check_dominant, check_rational_into, graph_and_image, inverse::extract_inverse, inverse::Extraction, metered,
    named_point, strings, Evidence, Verdict,
};

/// An affine piece of the graph: source coordinate `source_chart` and target
/// coordinate `target_chart` set to 1 (both `None` for affine maps).
#[derive(Clone, Debug)]
pub struct GraphChart {
    pub source_chart: Option<usize>,
    pub target_chart: Option<usize>,
    pub label: String,
    pub ideal: Ideal,
    /// Indices in the chart ring.
    pub source_vars: Vec<usize>,
    pub target_vars: Vec<usize>,
    graph_ring: Ring,
}

impl GraphChart {
    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }

    /// Graph-ring coordinates of a chart point.
    pub fn lift(&self, point: &[Coeff]) -> Vec<Coeff> {
        let one = Coeff::from_integer(1.into());
        self.graph_ring
            .vars()
            .names()
            .iter()
            .map(|n| match self.ring().vars().index(n) {
                Some(k) => point[k].clone(),
                None => one.clone(),
            })
            .collect()
    }

    pub fn vars(&self, side: Side) -> &[usize] {
        match side {
            Side::Source => &self.source_vars,
            Side::Target => &self.target_vars,
        }
    }
}

/// All graph charts of `gamma` (an ideal in the graph ring of `map`).
pub fn graph_charts(map: &RationalMap, gamma: &Ideal) -> Result<Vec<GraphChart>> {
    let gr = gamma.ring().clone();
    let nsrc = map.source().nvars();
    let ntgt = map.target().nvars();
    if map.mode() == Mode::Affine {
        return Ok(vec![GraphChart {
            source_chart: None,
            target_chart: None,
            label: "affine".into(),
            ideal: gamma.clone(),
            source_vars: (0..nsrc).collect(),
            target_vars: (nsrc..nsrc + ntgt).collect(),
            graph_ring: gr,
        }]);
    }
    let one = Coeff::from_integer(1.into());
    let mut out = Vec::with_capacity(nsrc * ntgt);
    for i in 0..nsrc {
        for j in 0..ntgt {
            let tj = map.target_index(j);
            let names: Vec<&str> =
                (0..gr.nvars()).filter(|&k| k != i && k != tj).map(|k| gr.vars().name(k)).collect();
            let ring = Ring::with_names(&names, gr.field())?;
            let gens = gamma
                .gens()
                .iter()
                .map(|g| g.substitute_values(&[(i, one.clone()), (tj, one.clone())]).embed(&ring))
                .collect::<Result<Vec<_>>>()?;
            out.push(GraphChart {
                source_chart: Some(i),
                target_chart: Some(j),
                label: format!("{}=1, {}=1", gr.vars().name(i), gr.vars().name(tj)),
                ideal: Ideal::new(&ring, gens)?,
                source_vars: (0..nsrc - 1).collect(),
                target_vars: (nsrc - 1..nsrc + ntgt - 2).collect(),
                graph_ring: gr.clone(),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

/// Jacobian of a generator list with respect to some variables, with all
/// maximal (size = number of variables) minors.
#[derive(Clone, Debug)]
pub struct RelativeJacobian {
    pub vars: Vec<usize>,
    pub matrix: Vec<Vec<Polynomial>>,
    pub minors: Vec<Polynomial>,
}

impl RelativeJacobian {
    pub fn new(ring: &Ring, gens: &[Polynomial], vars: &[usize]) -> Self {
        let matrix = gens.iter().map(|g| vars.iter().map(|&v| g.differentiate(v)).collect()).collect();
        RelativeJacobian { vars: vars.to_vec(), matrix, minors: jacobian_minors(ring, gens, vars, vars.len()) }
    }

    pub fn size(&self) -> usize {
        self.vars.len()
    }

    pub fn column(&self, k: usize) -> Vec<Polynomial> {
        self.matrix.iter().map(|row| row[k].clone()).collect()
    }
}

/// Whether the relative tangent space of the projection forgetting `side`'s
/// complement vanishes on every chart: each chart ideal plus all maximal
/// minors with respect to `side`'s variables must be inconsistent.
/// Returns the per-chart evidence and whether the test passed.
pub fn relative_tangent_test(charts: &[GraphChart], side: Side, budget: &Budget) -> Result<(bool, Vec<Evidence>)> {
    let mut ev = Vec::new();
    for ch in charts {
        let jac = RelativeJacobian::new(ch.ring(), ch.ideal.gens(), ch.vars(side));
        let sys = ch.ideal.with(jac.minors)?;
        if sys.is_inconsistent(budget)? {
            ev.push(Evidence::Inconsistent { chart: ch.label.clone(), generators: strings(sys.gens()) });
            continue;
        }
        let point = find_rational_point(&sys, budget).ok().flatten();
        let failure = match point {
            Some(p) => Evidence::Point { chart: ch.label.clone(), coordinates: named_point(&ch.graph_ring, &ch.lift(&p)) },
            None => Evidence::Consistent {
                chart: ch.label.clone(),
                basis: strings(&sys.groebner(crate::MonomialOrder::GrevLex, budget)?.basis),
            },
        };
        return Ok((false, vec![failure]));
    }
    Ok((true, ev))
}

/// F|_X is a regular morphism: the graph projects isomorphically onto X.
pub fn check_regular(map: &RationalMap, x: &Variety, budget: &Budget) -> Result<Verdict> {
    const P: &str = "regular";
    if x.ring() != map.source() {
        return Err(Error::VariableMismatch);
    }
    let smooth = match smoothness_check(x, budget) {
        Ok(s) => s.smooth,
        Err(e) if e.is_inconclusive() => return Ok(Verdict::inconclusive(P, format!("smoothness test: {e}"))),
        Err(e) => return Err(e),
    };
    if !smooth {
        return Err(Error::Input("the source variety is singular; regularity is only decided for smooth sources".into()));
    }
    metered(P, || {
        let gamma = match restricted_graph(map, x, budget) {
            Err(Error::MapUndefined) => {
                return Ok(Verdict::no(
                    P,
                    vec![Evidence::Vanishing { polynomials: strings(&map.base_locus()), on: "X".into(), radical: true }],
                ));
            }
            r => r?,
        };
        let charts = graph_charts(map, &gamma)?;
        let (ok, mut ev) = relative_tangent_test(&charts, Side::Target, budget)?;
        if !ok {
            return Ok(Verdict::no(P, ev).because("the relative tangent space over X is nonzero at a graph point"));
        }
        if map.mode() == Mode::Affine {
            let fiber: Vec<usize> = (0..map.target().nvars()).map(|j| map.target_index(j)).collect();
            let base = x.ideal().embed(gamma.ring())?;
            match projection_surjective(&gamma, &fiber, &base, budget)? {
                Surjectivity::Onto => {}
                Surjectivity::Misses(e) => {
                    return Ok(Verdict::no(P, e).because("some points of X have no image"));
                }
                Surjectivity::Unknown(why) => return Ok(Verdict::inconclusive(P, why)),
            }
        }
        ev.insert(0, Evidence::Image { generators: strings(gamma.gens()) });
        Ok(Verdict::yes(P, ev))
    })
}

/// F|_X is an isomorphism onto its image, and the image lies in Y.
pub fn check_regular_embedding(map: &RationalMap, x: &Variety, y: &Variety, budget: &Budget) -> Result<Verdict> {
    const P: &str = "regular_embedding";
    let pre = check_rational_into(map, x, y, budget)?;
    if !pre.is_yes() {
        return Ok(pre.relabel(P));
    }
    let reg = check_regular(map, x, budget)?;
    if !reg.is_yes() {
        return Ok(reg.relabel(P));
    }
    metered(P, || embedding_tail(P, map, x, budget))
}

/// Birational onto the image, unramified over the image, smooth image.
pub(crate) fn embedding_tail(p: &str, map: &RationalMap, x: &Variety, budget: &Budget) -> Result<Verdict> {
    let (gamma, image) = graph_and_image(map, x, budget)?;
    let mut ev = vec![Evidence::Image { generators: strings(image.gens()) }];
    let charts = graph_charts(map, &gamma)?;
    let (ok, tan) = relative_tangent_test(&charts, Side::Source, budget)?;
    if !ok {
        return Ok(Verdict::no(p, tan).because("the relative tangent space over the image is nonzero at a graph point"));
    }
    match extract_inverse(map, x, &gamma, budget)? {
        Extraction::Found { evidence, .. } => ev.extend(evidence),
        Extraction::NotBirational { variable, degree } => {
            return Ok(Verdict::no(
                p,
                vec![Evidence::Note { text: format!("`{variable}` has degree {degree} over the function field of the image") }],
            )
            .because("the map is not birational onto its image"));
        }
        Extraction::Failed(why) => return Ok(Verdict::inconclusive(p, why)),
    }
    let sm = smoothness_check(&image, budget)?;
    if !sm.smooth {
        let chart = match sm.singular_chart.flatten() {
            Some(i) => format!("{}=1", image.ring().vars().name(i)),
            None => "affine".into(),
        };
        return Ok(Verdict::no(p, vec![Evidence::Note { text: format!("the image closure is singular in chart {chart}") }])
            .because("the image is singular"));
    }
    ev.extend(tan);
    Ok(Verdict::yes(p, ev))
}

/// F|_X is an isomorphism onto Y.
pub fn check_isomorphism_onto(map: &RationalMap, x: &Variety, y: &Variety, budget: &Budget) -> Result<Verdict> {
    const P: &str = "isomorphism";
    let emb = check_regular_embedding(map, x, y, budget)?;
    if !emb.is_yes() {
        return Ok(emb.relabel(P));
    }
    let dom = check_dominant(map, x, y, budget)?;
    if !dom.is_yes() {
        return Ok(dom.relabel(P));
    }
    let mut v = Verdict::yes(P, emb.evidence);
    v.evidence.extend(dom.evidence);
    v.budget_spent = emb.budget_spent;
    v.budget_spent.groebner_runs += dom.budget_spent.groebner_runs;
    v.budget_spent.s_pairs += dom.budget_spent.s_pairs;
    v.budget_spent.max_degree = v.budget_spent.max_degree.max(dom.budget_spent.max_degree);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::Answer;
    use crate::polyring::Field;

    fn setup(src: &[&str], tgt: &[&str], x: &[&str], comps: &[&str]) -> (RationalMap, Variety) {
        let s = Ring::with_names(src, Field::Rational).unwrap();
        let t = Ring::with_names(tgt, Field::Rational).unwrap();
        let f = RationalMap::projective(&s, &t, comps.iter().map(|c| s.parse(c).unwrap()).collect()).unwrap();
        (f, Variety::from_strings(&s, x, Mode::Projective).unwrap())
    }

    #[test]
    fn conic_projection_is_regular() {
        let (f, x) = setup(&["x", "y", "z"], &["u", "v"], &["x*z - y^2"], &["x", "y"]);
        let v = check_regular(&f, &x, &Budget::default()).unwrap();
        assert_eq!(v.answer, Answer::Yes, "{v:?}");
    }

    #[test]
    fn quadric_projection_is_not_regular() {
        let (f, x) = setup(&["x", "y", "z", "w"], &["u", "v", "s"], &["x*w - y*z"], &["x", "y", "z"]);
        let v = check_regular(&f, &x, &Budget::default()).unwrap();
        assert_eq!(v.answer, Answer::No, "{v:?}");
        let Evidence::Point { coordinates, .. } = &v.evidence[0] else { panic!("{v:?}") };
        let val = |n: &str| coordinates.iter().find(|c| c.0 == n).unwrap().1.clone();
        assert_eq!((val("x"), val("y"), val("z")), ("0".into(), "0".into(), "0".into()));
    }

    #[test]
    fn identity_is_regular_and_an_isomorphism() {
        let (f, x) = setup(&["x", "y", "z"], &["u", "v", "w"], &["x*z - y^2"], &["x", "y", "z"]);
        let b = Budget::default();
        assert!(check_regular(&f, &x, &b).unwrap().is_yes());
        let y = Variety::from_strings(f.target(), &["u*w - v^2"], Mode::Projective).unwrap();
        let v = check_isomorphism_onto(&f, &x, &y, &b).unwrap();
        assert!(v.is_yes(), "{v:?}");
    }

    #[test]
    fn singular_source_is_an_input_error() {
        let (f, x) = setup(&["x", "y", "z"], &["u", "v", "w"], &["x^3 - y^2*z"], &["x", "y", "z"]);
        assert!(matches!(check_regular(&f, &x, &Budget::default()), Err(Error::Input(_))));
    }

    #[test]
    fn conic_chart_column() {
        let r = Ring::with_names(&["x", "y", "u"], Field::Rational).unwrap();
        let gens: Vec<Polynomial> = ["x - y^2", "x - y*u", "y - u"].iter().map(|s| r.parse(s).unwrap()).collect();
        let j = RelativeJacobian::new(&r, &gens, &[2]);
        assert_eq!(j.column(0), vec![r.zero(), r.parse("-y").unwrap(), r.int(-1)]);
    }
}
