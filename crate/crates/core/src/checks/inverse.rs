//! Birationality by extracting an inverse from an elimination basis of the graph.

use crate::error::{Error, Result};
use crate::groebner::{Budget, Ideal};
use crate::polyring::{Monomial, MonomialOrder, Polynomial, Ring};
use crate::varieties::{restricted_graph, MapKind, Mode, RationalMap, Variety};

use super::{check_dominant, graph_charts, metered, strings, Evidence, Verdict};

#[derive(Clone, Debug)]
pub enum Extraction {
    /// Inverse components in the target ring; `denominator` is set for affine
    /// maps whose inverse is not polynomial.
    Found { components: Vec<Polynomial>, denominator: Option<Polynomial>, evidence: Vec<Evidence> },
    /// A source coordinate of degree `degree` (0: transcendental) over the
    /// function field of the image.
    NotBirational { variable: String, degree: u32 },
    Failed(String),
}

/// Expresses a source chart coordinate as `-e/c` with `c` nonzero on the
/// image, from a block-order basis of the graph eliminated to that coordinate
/// and the target coordinates.
enum Solved {
    Linear { c: Polynomial, e: Polynomial },
    Degree(u32),
    Failed(String),
}

fn solve_coordinate(chart: &Ideal, s: usize, targets: &[usize], budget: &Budget) -> Result<Solved> {
    let cr = chart.ring();
    let mut keep = vec![s];
    keep.extend_from_slice(targets);
    let elim = chart.eliminate(&keep, budget)?;
    let names: Vec<&str> = keep.iter().map(|&k| cr.vars().name(k)).collect();
    let small = Ring::with_names(&names, cr.field())?;
    let j = elim.embed(&small)?;
    let gb = j.groebner(MonomialOrder::Block(1), budget)?;
    let base: Vec<Polynomial> = gb.basis.iter().filter(|g| g.degree_in(0) == 0).cloned().collect();
    let base = Ideal::new(&small, base)?;
    let mut linear = gb.basis.iter().filter(|g| g.degree_in(0) == 1).peekable();
    if linear.peek().is_none() {
        let deg = gb.basis.iter().map(|g| g.degree_in(0)).filter(|&d| d > 0).min().unwrap_or(0);
        return Ok(Solved::Degree(deg));
    }
    for g in linear {
        let parts = g.coefficients_in(|v| v == 0);
        let c = parts.get(&Monomial::var(0, 1)).cloned().unwrap_or_else(|| small.zero());
        let e = parts.get(&Monomial::one()).cloned().unwrap_or_else(|| small.zero());
        if !base.radical_contains(&c, budget)? {
            return Ok(Solved::Linear { c, e });
        }
    }
    Ok(Solved::Failed(format!("no relation linear in `{}` with a coefficient nonzero on the image", names[0])))
}

/// Divide every polynomial by the largest common power of variable `v`.
fn strip_common_power(ps: &mut [Polynomial], v: usize) {
    let k = ps.iter().flat_map(|p| p.terms().map(|(m, _)| m.exp(v))).min().unwrap_or(0);
    if k == 0 {
        return;
    }
    let d = Monomial::var(v, k);
    for p in ps.iter_mut() {
        *p = p.ring().from_terms(p.terms().map(|(m, c)| (d.quotient_of(m).unwrap(), c.clone())));
    }
}

/// Inverse of F|_X from the graph closure `gamma`, verified to compose to the
/// identity on X.
pub fn extract_inverse(map: &RationalMap, x: &Variety, gamma: &Ideal, budget: &Budget) -> Result<Extraction> {
    let charts = graph_charts(map, gamma)?;
    let gr = gamma.ring();
    let mut chosen = None;
    for ch in &charts {
        let nonzero = |c: Option<usize>, off: usize| -> Result<bool> {
            match c {
                None => Ok(true),
                Some(i) => Ok(!gamma.radical_contains(&gr.var(off + i), budget)?),
            }
        };
        if nonzero(ch.source_chart, 0)? && nonzero(ch.target_chart, map.source().nvars())? {
            chosen = Some(ch);
            break;
        }
    }
    let Some(ch) = chosen else {
        return Ok(Extraction::Failed("the graph is empty".into()));
    };
    let tr = map.target();
    let mut solved: Vec<(usize, Polynomial, Polynomial)> = Vec::new();
    for &s in &ch.source_vars {
        match solve_coordinate(&ch.ideal, s, &ch.target_vars, budget)? {
            Solved::Linear { c, e } => solved.push((s, c.embed(tr)?, e.embed(tr)?)),
            Solved::Degree(d) => {
                return Ok(Extraction::NotBirational { variable: ch.ring().vars().name(s).to_string(), degree: d });
            }
            Solved::Failed(why) => return Ok(Extraction::Failed(why)),
        }
    }
    // common denominator: product of the distinct monic leading coefficients
    let mut distinct: Vec<Polynomial> = Vec::new();
    for (_, c, _) in &solved {
        let m = c.monic(MonomialOrder::GrevLex);
        if !m.is_constant() && !distinct.contains(&m) {
            distinct.push(m);
        }
    }
    let prod = |skip: Option<&Polynomial>| -> Polynomial {
        distinct.iter().filter(|d| Some(*d) != skip).fold(tr.one(), |acc, d| &acc * d)
    };
    let denom = prod(None);
    let mut by_name: std::collections::HashMap<String, Polynomial> = Default::default();
    let f = tr.field();
    for (s, c, e) in &solved {
        let m = c.monic(MonomialOrder::GrevLex);
        let lead = c.leading(MonomialOrder::GrevLex).unwrap().1.clone();
        let scale = f.neg(&f.inv(&lead).unwrap());
        let rest = if m.is_constant() { prod(None) } else { prod(Some(&m)) };
        by_name.insert(ch.ring().vars().name(*s).to_string(), &e.scale(&scale) * &rest);
    }
    let src = map.source();
    let mut comps: Vec<Polynomial> = (0..src.nvars())
        .map(|i| by_name.get(src.vars().name(i)).cloned().unwrap_or_else(|| denom.clone()))
        .collect();
    let (components, denominator) = match map.mode() {
        Mode::Projective => {
            let j = ch.target_chart.unwrap();
            let deg = comps.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0);
            for p in comps.iter_mut() {
                let h = p.homogenize(j)?;
                let d = h.total_degree().unwrap_or(deg);
                *p = if p.is_zero() { h } else { &h * &tr.var(j).pow(deg - d) };
            }
            strip_common_power(&mut comps, j);
            (comps, None)
        }
        Mode::Affine => {
            if denom.is_constant() {
                (comps, None)
            } else {
                (comps, Some(denom))
            }
        }
    };
    let evidence = verify_inverse(map, x, gamma, &components, denominator.as_ref(), budget)?;
    match evidence {
        Some(ev) => {
            let mut all = vec![Evidence::Inverse {
                components: strings(&components),
                denominator: denominator.as_ref().map(|d| d.to_string()),
            }];
            all.extend(ev);
            Ok(Extraction::Found { components, denominator, evidence: all })
        }
        None => Ok(Extraction::Failed("the extracted inverse does not compose to the identity".into())),
    }
}

/// G∘F = id on X: the 2×2 minors `x_a G_b(F) - x_b G_a(F)` vanish on X
/// (projective), or `N_a(y) - x_a D(y)` vanishes on the graph (affine).
fn verify_inverse(
    map: &RationalMap,
    x: &Variety,
    gamma: &Ideal,
    comps: &[Polynomial],
    denom: Option<&Polynomial>,
    budget: &Budget,
) -> Result<Option<Vec<Evidence>>> {
    let (ideal, checks, nonzero, on): (&Ideal, Vec<Polynomial>, Vec<Polynomial>, &str) = match map.kind() {
        MapKind::Projective(f) => {
            let s = map.source();
            let gf = comps.iter().map(|g| g.compose(f)).collect::<Result<Vec<_>>>()?;
            let mut minors = Vec::new();
            for a in 0..gf.len() {
                for b in (a + 1)..gf.len() {
                    minors.push(&(&s.var(a) * &gf[b]) - &(&s.var(b) * &gf[a]));
                }
            }
            (x.ideal(), minors, gf, "X")
        }
        MapKind::Affine { .. } => {
            let gr = gamma.ring();
            let d = match denom {
                Some(d) => d.embed(gr)?,
                None => gr.one(),
            };
            let mut checks = Vec::new();
            for (a, n) in comps.iter().enumerate() {
                checks.push(&n.embed(gr)? - &(&gr.var(a) * &d));
            }
            (gamma, checks, vec![d], "graph")
        }
    };
    let membership = ideal.contains_all(&checks, budget)?;
    if !membership && !ideal.radical_contains_all(&checks, budget)? {
        return Ok(None);
    }
    let mut defined = false;
    for p in &nonzero {
        if !ideal.radical_contains(p, budget)? {
            defined = true;
            break;
        }
    }
    if !defined {
        return Ok(None);
    }
    Ok(Some(vec![Evidence::Vanishing { polynomials: strings(&checks), on: on.into(), radical: !membership }]))
}

/// F|_X is birational onto Y: dominant, with an inverse extracted from the graph.
pub fn check_birational(map: &RationalMap, x: &Variety, y: &Variety, budget: &Budget) -> Result<Verdict> {
    const P: &str = "birational";
    let dom = check_dominant(map, x, y, budget)?;
    if !dom.is_yes() {
        return Ok(dom.relabel(P));
    }
    metered(P, || {
        let gamma = restricted_graph(map, x, budget)?;
        match extract_inverse(map, x, &gamma, budget)? {
            Extraction::Found { evidence, .. } => Ok(Verdict::yes(P, evidence)),
            Extraction::NotBirational { variable, degree } => {
                let text = if degree == 0 {
                    format!("`{variable}` is transcendental over the function field of Y")
                } else {
                    format!("`{variable}` has degree {degree} over the function field of Y")
                };
                Ok(Verdict::no(P, vec![Evidence::Note { text }]).because("the function field extension is not trivial"))
            }
            Extraction::Failed(why) => Ok(Verdict::inconclusive(P, why)),
        }
    })
}

/// Inverse as a map from the target back to the source, for re-checking.
pub fn inverse_map(map: &RationalMap, components: Vec<Polynomial>, denominator: Option<Polynomial>) -> Result<RationalMap> {
    let tr = map.target();
    match map.mode() {
        Mode::Projective => RationalMap::projective(tr, map.source(), components),
        Mode::Affine => {
            let d = denominator.unwrap_or_else(|| tr.one());
            RationalMap::affine(tr, map.source(), components, d)
        }
    }
    .map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("inverse: {m}")),
        e => e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::Answer;
    use crate::polyring::Field;

    #[test]
    fn conic_and_line_are_birational_both_ways() {
        let s = Ring::with_names(&["x", "y", "z"], Field::Rational).unwrap();
        let t = Ring::with_names(&["u", "v"], Field::Rational).unwrap();
        let b = Budget::default();
        let x = Variety::from_strings(&s, &["x*z - y^2"], Mode::Projective).unwrap();
        let line = Variety::ambient(&t, Mode::Projective).unwrap();
        let f = RationalMap::projective(&s, &t, vec![s.var(0), s.var(1)]).unwrap();
        let gamma = restricted_graph(&f, &x, &b).unwrap();
        let Extraction::Found { components, .. } = extract_inverse(&f, &x, &gamma, &b).unwrap() else { panic!() };
        assert_eq!(components, vec![t.parse("u^2").unwrap(), t.parse("u*v").unwrap(), t.parse("v^2").unwrap()]);
        assert!(check_birational(&f, &x, &line, &b).unwrap().is_yes());
        let g = inverse_map(&f, components, None).unwrap();
        assert!(check_birational(&g, &line, &x, &b).unwrap().is_yes());
    }

    #[test]
    fn double_cover_is_not_birational() {
        let s = Ring::with_names(&["x", "y"], Field::Rational).unwrap();
        let t = Ring::with_names(&["u", "v"], Field::Rational).unwrap();
        let p1 = Variety::ambient(&s, Mode::Projective).unwrap();
        let p1t = Variety::ambient(&t, Mode::Projective).unwrap();
        let f = RationalMap::projective(&s, &t, vec![s.parse("x^2").unwrap(), s.parse("y^2").unwrap()]).unwrap();
        let v = check_birational(&f, &p1, &p1t, &Budget::default()).unwrap();
        assert_eq!(v.answer, Answer::No, "{v:?}");
    }

    #[test]
    fn affine_inverse_with_denominator() {
        let s = Ring::with_names(&["t"], Field::Rational).unwrap();
        let t = Ring::with_names(&["p", "q"], Field::Rational).unwrap();
        let x = Variety::ambient(&s, Mode::Affine).unwrap();
        let y = Variety::from_strings(&t, &["q^2 - p^3"], Mode::Affine).unwrap();
        let f = RationalMap::affine(&s, &t, vec![s.parse("t^2").unwrap(), s.parse("t^3").unwrap()], s.one()).unwrap();
        let v = check_birational(&f, &x, &y, &Budget::default()).unwrap();
        assert!(v.is_yes(), "{v:?}");
        let Evidence::Inverse { components, denominator } = &v.evidence[0] else { panic!() };
        assert_eq!(components, &vec!["q".to_string()]);
        assert_eq!(denominator.as_deref(), Some("p"));
    }
}
