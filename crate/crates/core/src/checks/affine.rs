//! Surjectivity of graph projections and the affine closed-image checks.

use crate::error::{Error, Result};
use crate::groebner::{Budget, Ideal};
use crate::polyring::{MonomialOrder, Ring};
use crate::varieties::{Mode, RationalMap, Variety};

use super::{
    check_dominant, check_rational_into, check_regular, graph_and_image, metered, point_off, strings,
    tangent::embedding_tail, Evidence, Verdict,
};

/// How deep the fiber-at-infinity recursion may go before giving up.
const MAX_DEPTH: usize = 8;

#[derive(Clone, Debug)]
pub enum Surjectivity {
    Onto,
    /// Some base points have empty fibers; the evidence separates them.
    Misses(Vec<Evidence>),
    Unknown(String),
}

/// Closure of V(I) in P(fiber) × base: homogenize a basis that is degree
/// compatible in the `fiber` variables, with a fresh coordinate `h`.
/// Returns the ideal and the index of `h`.
fn closure_in_fiber(ideal: &Ideal, fiber: &[usize], budget: &Budget) -> Result<(Ideal, usize)> {
    let r = ideal.ring();
    let n = r.nvars();
    let rest: Vec<usize> = (0..n).filter(|i| !fiber.contains(i)).collect();
    let order: Vec<usize> = fiber.iter().chain(rest.iter()).copied().collect();
    let names: Vec<&str> = order.iter().map(|&i| r.vars().name(i)).collect();
    let pr = Ring::with_names(&names, r.field())?;
    let gb = ideal.embed(&pr)?.groebner(MonomialOrder::Block(fiber.len()), budget)?;
    let h_name = r.vars().fresh_name("h");
    let hr = r.extended(&[h_name.as_str()])?;
    let h = hr.nvars() - 1;
    let in_fiber = |v: usize| v < n && fiber.contains(&v);
    let gens = gb
        .basis
        .iter()
        .map(|g| g.embed(&hr).map(|g| g.homogenize_block(h, in_fiber)))
        .collect::<Result<Vec<_>>>()?;
    Ok((Ideal::new(&hr, gens)?, h))
}

/// Does the projection of V(`gamma`) forgetting the `fiber` variables cover
/// V(`base`)? `base` uses only the remaining variables of the same ring.
///
/// Points of V(base) in the closure of the image but outside the image have
/// all their closure fibers at infinity; their locus is computed chart by
/// chart and the question recurses on it while its dimension drops.
pub fn projection_surjective(gamma: &Ideal, fiber: &[usize], base: &Ideal, budget: &Budget) -> Result<Surjectivity> {
    go(gamma, fiber, base, budget, 0)
}

fn go(gamma: &Ideal, fiber: &[usize], base: &Ideal, budget: &Budget, depth: usize) -> Result<Surjectivity> {
    let r = gamma.ring();
    let n = r.nvars();
    let keep: Vec<usize> = (0..n).filter(|i| !fiber.contains(i)).collect();
    let gamma = gamma.with(base.gens().iter().cloned())?;
    if base.is_inconsistent(budget)? {
        return Ok(Surjectivity::Onto);
    }
    let image = gamma.eliminate(&keep, budget)?;
    for c in image.gens() {
        if !base.radical_contains(c, budget)? {
            let mut ev = vec![Evidence::Separating {
                polynomial: c.to_string(),
                vanishes_on: "image".into(),
                not_on: "base".into(),
            }];
            ev.extend(point_off(base, c, "base", budget));
            return Ok(Surjectivity::Misses(ev));
        }
    }
    let (closure, h) = closure_in_fiber(&gamma, fiber, budget)?;
    let hr = closure.ring().clone();
    let base_dim = base.dimension(budget)?;
    for &f in fiber {
        let at_inf = closure.with([hr.var(h), &hr.var(f) - &hr.one()])?;
        let locus = at_inf.eliminate(&keep, budget)?.embed(r)?;
        if locus.is_inconsistent(budget)? {
            continue;
        }
        if depth >= MAX_DEPTH || locus.dimension(budget)? >= base_dim {
            return Ok(Surjectivity::Unknown(format!(
                "fibers at infinity over a locus of dimension {:?} do not shrink",
                locus.dimension(budget)?
            )));
        }
        match go(&gamma, fiber, &locus, budget, depth + 1)? {
            Surjectivity::Onto => {}
            other => return Ok(other),
        }
    }
    Ok(Surjectivity::Onto)
}

fn require_affine(map: &RationalMap) -> Result<()> {
    if map.mode() != Mode::Affine {
        return Err(Error::Input("affine check called on a projective map".into()));
    }
    Ok(())
}

fn fiber_of_source(map: &RationalMap) -> Vec<usize> {
    (0..map.source().nvars()).collect()
}

/// Regular and surjective onto Y.
pub fn check_surjective_regular_affine(map: &RationalMap, x: &Variety, y: &Variety, budget: &Budget) -> Result<Verdict> {
    const P: &str = "surjective_regular";
    require_affine(map)?;
    let reg = check_regular(map, x, budget)?;
    if !reg.is_yes() {
        return Ok(reg.relabel(P));
    }
    let dom = check_dominant(map, x, y, budget)?;
    if !dom.is_yes() {
        return Ok(dom.relabel(P));
    }
    metered(P, || {
        let (gamma, _) = graph_and_image(map, x, budget)?;
        let base = y.ideal().embed(gamma.ring())?;
        Ok(match projection_surjective(&gamma, &fiber_of_source(map), &base, budget)? {
            Surjectivity::Onto => Verdict::yes(P, vec![Evidence::Note { text: "every point of Y has a preimage".into() }]),
            Surjectivity::Misses(ev) => Verdict::no(P, ev).because("some points of Y have no preimage"),
            Surjectivity::Unknown(why) => Verdict::inconclusive(P, why),
        })
    })
}

/// Isomorphism onto a closed subvariety of Y.
pub fn check_closed_embedding_affine(map: &RationalMap, x: &Variety, y: &Variety, budget: &Budget) -> Result<Verdict> {
    const P: &str = "closed_embedding";
    require_affine(map)?;
    let pre = check_rational_into(map, x, y, budget)?;
    if !pre.is_yes() {
        return Ok(pre.relabel(P));
    }
    let reg = check_regular(map, x, budget)?;
    if !reg.is_yes() {
        return Ok(reg.relabel(P));
    }
    metered(P, || {
        let tail = embedding_tail(P, map, x, budget)?;
        if !tail.is_yes() {
            return Ok(tail);
        }
        let (gamma, image) = graph_and_image(map, x, budget)?;
        let base = image.ideal().embed(gamma.ring())?;
        let mut v = match projection_surjective(&gamma, &fiber_of_source(map), &base, budget)? {
            Surjectivity::Onto => tail,
            Surjectivity::Misses(ev) => {
                return Ok(Verdict::no(P, ev).because("the image is not closed"));
            }
            Surjectivity::Unknown(why) => return Ok(Verdict::inconclusive(P, why)),
        };
        v.evidence.push(Evidence::Image { generators: strings(image.gens()) });
        Ok(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::Answer;
    use crate::polyring::Field;

    fn amap(src: &[&str], tgt: &[&str], nums: &[&str], den: &str) -> RationalMap {
        let s = Ring::with_names(src, Field::Rational).unwrap();
        let t = Ring::with_names(tgt, Field::Rational).unwrap();
        RationalMap::affine(&s, &t, nums.iter().map(|c| s.parse(c).unwrap()).collect(), s.parse(den).unwrap()).unwrap()
    }

    #[test]
    fn parabola_embedding() {
        let f = amap(&["t"], &["x", "y"], &["t", "t^2"], "1");
        let x = Variety::ambient(f.source(), Mode::Affine).unwrap();
        let y = Variety::from_strings(f.target(), &["y - x^2"], Mode::Affine).unwrap();
        let v = check_closed_embedding_affine(&f, &x, &y, &Budget::default()).unwrap();
        assert!(v.is_yes(), "{v:?}");
    }

    #[test]
    fn cusp_parametrization_is_not_an_embedding() {
        let f = amap(&["t"], &["x", "y"], &["t^2", "t^3"], "1");
        let x = Variety::ambient(f.source(), Mode::Affine).unwrap();
        let y = Variety::from_strings(f.target(), &["y^2 - x^3"], Mode::Affine).unwrap();
        let v = check_closed_embedding_affine(&f, &x, &y, &Budget::default()).unwrap();
        assert_eq!(v.answer, Answer::No, "{v:?}");
        let Evidence::Point { coordinates, .. } = &v.evidence[0] else { panic!("{v:?}") };
        assert!(coordinates.iter().all(|(_, c)| c == "0"));
    }

    #[test]
    fn squaring_is_surjective() {
        let f = amap(&["t"], &["x"], &["t^2"], "1");
        let x = Variety::ambient(f.source(), Mode::Affine).unwrap();
        let y = Variety::ambient(f.target(), Mode::Affine).unwrap();
        assert!(check_surjective_regular_affine(&f, &x, &y, &Budget::default()).unwrap().is_yes());
    }

    #[test]
    fn hyperbola_projection_misses_origin() {
        // (s, t) on st = 1 mapped to s: the image is the line minus a point
        let f = amap(&["s", "t"], &["x"], &["s"], "1");
        let x = Variety::from_strings(f.source(), &["s*t - 1"], Mode::Affine).unwrap();
        let y = Variety::ambient(f.target(), Mode::Affine).unwrap();
        let v = check_surjective_regular_affine(&f, &x, &y, &Budget::default()).unwrap();
        assert_eq!(v.answer, Answer::No, "{v:?}");
    }
}
