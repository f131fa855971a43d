use super::*;
use crate::groebner::Budget;
use crate::varieties::{Mode, RationalMap, Variety};

fn plane(names: &[&str]) -> Ring {
    Ring::with_names(names, Field::Rational).unwrap()
}

fn line_identity() -> (RationalMap, Variety, Variety) {
    let s = plane(&["x", "y", "z"]);
    let t = plane(&["u", "v", "w"]);
    let x = Variety::from_strings(&s, &["x + y - z"], Mode::Projective).unwrap();
    let y = Variety::from_strings(&t, &["u + v - w"], Mode::Projective).unwrap();
    let comps = ["x", "y", "z"].iter().map(|c| s.parse(c).unwrap()).collect();
    (RationalMap::projective(&s, &t, comps).unwrap(), x, y)
}

fn conic_automorphism() -> (RationalMap, Variety, Variety) {
    let s = plane(&["x", "y", "z"]);
    let t = plane(&["u", "v", "w"]);
    let x = Variety::from_strings(&s, &["x*z - y^2"], Mode::Projective).unwrap();
    let y = Variety::from_strings(&t, &["u*w - v^2 - u^2"], Mode::Projective).unwrap();
    let comps = ["x", "y + x", "z + 2*y + 2*x"].iter().map(|c| s.parse(c).unwrap()).collect();
    (RationalMap::projective(&s, &t, comps).unwrap(), x, y)
}

#[test]
fn stage_counts_on_a_line() {
    let (_, x, y) = line_identity();
    let s = build_system(&x, &y, 1, &Caps::default(), &Budget::default()).unwrap();
    assert_eq!(s.stage_counts(Step::Seed), vec![1]);
    assert_eq!(s.stage_counts(Step::SourceChain), vec![2]);
    assert_eq!(s.stage_counts(Step::TwoVertex), vec![3]);
    assert_eq!(s.stage_counts(Step::TargetChain), vec![2, 2]);
    assert_eq!(s.count(Step::Coupling), 4);
    for e in &s.equations {
        assert!(e.poly.ring() == &s.ring);
    }
}

#[test]
fn identity_on_a_line_has_a_witness() {
    let (f, x, y) = line_identity();
    let b = Budget::default();
    let s = build_system(&x, &y, 1, &Caps::default(), &b).unwrap();
    let w = construct_witness(&f, &x, &y, &s, &b).unwrap();
    let v = verify_witness(&s, &w, &b).unwrap();
    assert!(v.holds, "{v:?}");
}

#[test]
fn conic_automorphism_has_a_witness() {
    let (f, x, y) = conic_automorphism();
    let b = Budget::default();
    let s = build_system(&x, &y, 1, &Caps::default(), &b).unwrap();
    let w = construct_witness(&f, &x, &y, &s, &b).unwrap();
    assert!(verify_witness(&s, &w, &b).unwrap().holds);
    assert!(toy_solve_residual_is_sat(&s, &w));
}

fn toy_solve_residual_is_sat(s: &ParamSystem, w: &WitnessAssignment) -> bool {
    let ideal = instantiate(s, w).unwrap();
    !ideal.is_inconsistent(&Budget::default()).unwrap()
}

#[test]
fn perturbed_witness_reports_the_failing_identity() {
    let (f, x, y) = line_identity();
    let b = Budget::default();
    let s = build_system(&x, &y, 1, &Caps::default(), &b).unwrap();
    let mut w = construct_witness(&f, &x, &y, &s, &b).unwrap();
    let p = s.block("f_1_0_2").unwrap().params[0].clone();
    let old = w.get(&p).unwrap().clone();
    w.set(&p, old + Coeff::from_integer(1.into()));
    let v = verify_witness(&s, &w, &b).unwrap();
    assert!(!v.holds);
    let bad = v.violated.unwrap();
    assert_eq!((bad.step, bad.stage), (Step::TargetChain, 1));
}

#[test]
fn zero_assignment_fails() {
    let (_, x, y) = line_identity();
    let b = Budget::default();
    let s = build_system(&x, &y, 1, &Caps::default(), &b).unwrap();
    let mut w = WitnessAssignment::default();
    for p in &s.param_vars {
        w.set(p, Coeff::from_integer(0.into()));
    }
    assert!(!verify_witness(&s, &w, &b).unwrap().holds);
    w.values.remove(&s.param_vars[0]);
    assert!(matches!(verify_witness(&s, &w, &b), Err(Error::MissingAssignment(_))));
}

#[test]
fn map_degree_above_d_is_rejected() {
    let s = plane(&["x", "y", "z"]);
    let t = plane(&["u", "v", "w"]);
    let x = Variety::ambient(&s, Mode::Projective).unwrap();
    let y = Variety::ambient(&t, Mode::Projective).unwrap();
    let comps = ["y*z", "x*z", "x*y"].iter().map(|c| s.parse(c).unwrap()).collect();
    let f = RationalMap::projective(&s, &t, comps).unwrap();
    let b = Budget::default();
    let sys = build_system(&x, &y, 1, &Caps::default(), &b).unwrap();
    assert!(matches!(construct_witness(&f, &x, &y, &sys, &b), Err(Error::Input(_))));
}

#[test]
fn plus_system_extends_the_plain_one() {
    let (f, x, y) = conic_automorphism();
    let b = Budget::default();
    let s = build_system(&x, &y, 1, &Caps::default(), &b).unwrap();
    let p = build_birational_plus_system(&x, &y, 1, &Caps::default(), &b).unwrap();
    assert!(p.equations.len() > s.equations.len());
    for (e, q) in s.equations.iter().zip(&p.equations) {
        assert_eq!(e.poly.to_string(), q.poly.to_string());
    }
    let w_idx = p.ring.index("w").unwrap();
    for e in &p.equations[..s.equations.len()] {
        assert!(!e.poly.support().contains(&w_idx));
    }
    let w = construct_witness(&f, &x, &y, &p, &b).unwrap();
    assert!(verify_witness(&p, &w, &b).unwrap().holds);
}

#[test]
fn dominance_systems() {
    // the identity of a line in the plane is not dominant onto the plane
    let s = plane(&["x", "y", "z"]);
    let t = plane(&["u", "v", "w"]);
    let x = Variety::from_strings(&s, &["x + y - z"], Mode::Projective).unwrap();
    let y = Variety::ambient(&t, Mode::Projective).unwrap();
    let comps = ["x", "y", "z"].iter().map(|c| s.parse(c).unwrap()).collect();
    let f = RationalMap::projective(&s, &t, comps).unwrap();
    let b = Budget::default();
    // dimensions differ, so the systems are refused
    assert!(build_dominance_system(&x, &y, 1, &Caps::default(), &b).is_err());

    let (f2, x2, y2) = line_identity();
    let (e, ep) = build_dominance_system(&x2, &y2, 1, &Caps::default(), &b).unwrap();
    for q in &e.equations {
        assert!(ep.equations.iter().any(|r| r.poly.to_string() == q.poly.to_string()));
    }
    assert_eq!(ep.equations.len(), e.equations.len() + 1);
    assert_eq!(e.block("Z").unwrap().params.len(), 3);
    let w = construct_dominance_witness(&f2, &x2, &y2, &e, &b).unwrap();
    assert!(verify_witness(&e, &w, &b).unwrap().holds);
    drop(f);
}

#[test]
fn toy_solve_outcomes() {
    let (_, x, y) = line_identity();
    let b = Budget::default();
    let s = build_system(&x, &y, 1, &Caps::default(), &b).unwrap();
    let bad = s.with_equation(s.ring.one(), "one").unwrap();
    assert_eq!(toy_solve(&bad, &b).unwrap(), SolveOutcome::Unsat);
}

#[test]
fn serialization_is_stable_and_grows_with_caps() {
    let (_, x, y) = line_identity();
    let b = Budget::default();
    let small = Caps { tau_degree: 1, ..Caps::default() };
    let s1 = build_system(&x, &y, 1, &small, &b).unwrap();
    let again = build_system(&x, &y, 1, &small, &b).unwrap();
    assert_eq!(s1.to_json(), again.to_json());
    let s2 = build_system(&x, &y, 2, &small, &b).unwrap();
    let big = Caps { monoid_degree: 4, ..small };
    let s3 = build_system(&x, &y, 1, &big, &b).unwrap();
    assert!(s2.to_json().len() > s1.to_json().len());
    assert!(s3.to_json().len() > s1.to_json().len());
}

#[test]
fn hyperplane_inputs_are_moved() {
    let s = plane(&["x", "y", "z"]);
    let t = plane(&["u", "v", "w"]);
    let x = Variety::from_strings(&s, &["x"], Mode::Projective).unwrap();
    let y = Variety::from_strings(&t, &["u"], Mode::Projective).unwrap();
    let b = Budget::default();
    let sys = build_system(&x, &y, 1, &Caps::default(), &b).unwrap();
    assert!(sys.changes.0.is_some() && sys.changes.1.is_some());
    let comps = ["x", "y", "z"].iter().map(|c| s.parse(c).unwrap()).collect();
    let f = RationalMap::projective(&s, &t, comps).unwrap();
    let w = construct_witness(&f, &x, &y, &sys, &b).unwrap();
    assert!(verify_witness(&sys, &w, &b).unwrap().holds);
}

#[test]
fn full_system_is_out_of_budget() {
    let s = plane(&["x", "y", "z"]);
    let t = plane(&["u", "v", "w"]);
    let x = Variety::from_strings(&s, &["x*z - y^2"], Mode::Projective).unwrap();
    let y = Variety::from_strings(&t, &["u*w - v^2"], Mode::Projective).unwrap();
    let b = Budget::default();
    let sys = build_system(&x, &y, 2, &Caps::default(), &b).unwrap();
    let out = toy_solve(&sys, &b).unwrap();
    assert!(matches!(out, SolveOutcome::Inconclusive(_)));
}
