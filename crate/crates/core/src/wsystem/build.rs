//! Assembly of the birationality, W⁺ and dominance systems.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groebner::Budget;
use crate::linalg::LinearSystem;
use crate::polyring::{Coeff, Field, Polynomial, Ring};
use crate::varieties::{Mode, RationalMap, Variety};

use super::{names, Builder, Caps, Matrix, ParamSystem, Step, SystemKind};

/// X and Y in the coordinates `x0..xn`, `y0..yn`, moved off the coordinate
/// hyperplanes when necessary. The change matrices satisfy
/// old coordinates = B · new coordinates.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub n: usize,
    pub x: Variety,
    pub y: Variety,
    pub bx: Option<Matrix>,
    pub by: Option<Matrix>,
}

fn renamed(v: &Variety, prefix: &str) -> Result<Variety> {
    let n = v.ring().nvars();
    let ring = Ring::with_names(&names(prefix, 0..=n - 1), v.ring().field())?;
    let images: Vec<Polynomial> = (0..n).map(|i| ring.var(i)).collect();
    let gens = v.gens().iter().map(|g| g.compose(&images)).collect::<Result<Vec<_>>>()?;
    Variety::new(crate::groebner::Ideal::new(&ring, gens)?, Mode::Projective)
}

fn linear_images(ring: &Ring, b: &Matrix) -> Vec<Polynomial> {
    let f = ring.field();
    b.iter()
        .map(|row| {
            ring.from_terms(
                row.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (crate::polyring::Monomial::var(j, 1), f.normalize(c.clone()).unwrap_or_else(|_| c.clone()))),
            )
        })
        .collect()
}

fn in_coordinate_hyperplane(v: &Variety, budget: &Budget) -> Result<bool> {
    for i in 0..v.ring().nvars() {
        if v.ideal().radical_contains(&v.ring().var(i), budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}

pub(crate) fn inverse(field: Field, b: &Matrix) -> Option<Matrix> {
    let n = b.len();
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut sys = LinearSystem::new(field, n);
        for (i, row) in b.iter().enumerate() {
            let rhs = if i == k { Coeff::one() } else { Coeff::zero() };
            sys.push(row.iter().cloned().enumerate(), rhs);
        }
        if sys.rank() < n {
            return None;
        }
        cols.push(sys.solve()?);
    }
    Some((0..n).map(|i| (0..n).map(|k| cols[k][i].clone()).collect()).collect())
}

/// Move V off every coordinate hyperplane with a seeded random integer change.
fn move_off_hyperplanes(v: Variety, seed: u64, budget: &Budget) -> Result<(Variety, Option<Matrix>)> {
    if !in_coordinate_hyperplane(&v, budget)? {
        return Ok((v, None));
    }
    let ring = v.ring().clone();
    let n = ring.nvars();
    let field = ring.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let b: Matrix = (0..n).map(|_| (0..n).map(|_| field.from_i64(rng.gen_range(-2..=2))).collect()).collect();
        if inverse(field, &b).is_none() {
            continue;
        }
        let images = linear_images(&ring, &b);
        let gens = v.gens().iter().map(|g| g.compose(&images)).collect::<Result<Vec<_>>>()?;
        let moved = Variety::new(crate::groebner::Ideal::new(&ring, gens)?, Mode::Projective)?;
        if !in_coordinate_hyperplane(&moved, budget)? {
            return Ok((moved, Some(b)));
        }
    }
    Err(Error::Input("could not move the variety off the coordinate hyperplanes".into()))
}

/// Rename to the fixed coordinates, check the dimensions and apply the
/// coordinate change when X or Y lies in a coordinate hyperplane.
pub fn normalize(x: &Variety, y: &Variety, budget: &Budget) -> Result<Normalized> {
    if x.mode() != Mode::Projective || y.mode() != Mode::Projective {
        return Err(Error::Input("systems are built for projective varieties".into()));
    }
    let n = x.ambient_dim();
    if y.ambient_dim() != n || n == 0 {
        return Err(Error::Input("X and Y must lie in the same projective space of dimension ≥ 1".into()));
    }
    let (dx, dy) = (x.dimension(budget)?, y.dimension(budget)?);
    if dx.is_none() || dx != dy {
        return Err(Error::Input(format!("dimension mismatch: dim X = {dx:?}, dim Y = {dy:?}")));
    }
    let (x, bx) = move_off_hyperplanes(renamed(x, "x")?, 7, budget)?;
    let (y, by) = move_off_hyperplanes(renamed(y, "y")?, 11, budget)?;
    Ok(Normalized { n, x, y, bx, by })
}

impl Normalized {
    /// F in the normalized coordinates: `B_Y⁻¹ · F(B_X · x)`.
    pub fn transform_map(&self, map: &RationalMap) -> Result<RationalMap> {
        let (xr, yr) = (self.x.ring(), self.y.ring());
        let crate::varieties::MapKind::Projective(comps) = map.kind() else {
            return Err(Error::Input("expected a projective map".into()));
        };
        let mut comps = comps.clone();
        let images = match &self.bx {
            Some(b) => linear_images(xr, b),
            None => (0..xr.nvars()).map(|i| xr.var(i)).collect(),
        };
        comps = comps.iter().map(|c| c.compose(&images)).collect::<Result<Vec<_>>>()?;
        if let Some(b) = &self.by {
            let inv = inverse(xr.field(), b).ok_or_else(|| Error::Input("singular change".into()))?;
            comps = inv
                .iter()
                .map(|row| {
                    row.iter().zip(&comps).fold(xr.zero(), |acc, (c, p)| &acc + &p.scale(c))
                })
                .collect();
        }
        RationalMap::projective(xr, yr, comps)
    }

    /// Dehomogenized generators of X (at `x0`) or Y (at `y0`), in `ring`.
    fn affine_gens(v: &Variety, ring: &Ring) -> Result<Vec<Polynomial>> {
        let one = Coeff::one();
        v.gens()
            .iter()
            .map(|g| g.dehomogenize(0, &one).embed(ring))
            .filter(|g| !matches!(g, Ok(p) if p.is_zero()))
            .collect()
    }
}

fn check_caps(caps: &Caps, d: u32) -> Result<()> {
    if caps.monoid_degree < 2 {
        return Err(Error::Input("monoid degree cap must be at least 2".into()));
    }
    if d == 0 {
        return Err(Error::Input("map degree bound d must be at least 1".into()));
    }
    Ok(())
}

/// Block indices of F_0..F_n.
struct Core {
    f: Vec<usize>,
}

fn sub(a: &[String], from: usize) -> Vec<String> {
    a[from.min(a.len())..].to_vec()
}

/// Seed, source chain, two-vertex monoid, target chain and coupling.
fn assemble(b: &mut Builder, nm: &Normalized, d: u32, caps: &Caps) -> Result<Core> {
    let n = nm.n;
    let c2 = caps.monoid_degree;
    let xs = names("x", 1..=n);
    let ys = names("y", 1..=n);

    for g in Normalized::affine_gens(&nm.x, &b.ring)? {
        b.push(g, Step::Seed, 0, "X".into());
    }

    for j in 1..n {
        let i = n - j;
        let vars: Vec<String> = xs.iter().chain(&ys[..j - 1]).cloned().collect();
        let (_, f1) = b.general(&format!("f_0_{i}_1"), &vars, c2 - 1)?;
        let (_, f2) = b.general(&format!("f_0_{i}_2"), &vars, c2)?;
        let t = format!("t_0_{i}");
        b.add_points(std::slice::from_ref(&t))?;
        let (f1, f2) = (f1.embed(&b.ring)?, f2.embed(&b.ring)?);
        let eq = &(&f1 * &b.var(&ys[j - 1])) + &f2;
        let chart = &b.ring.one() - &(&b.var(&t) * &(&f1 * &f2));
        b.push(eq, Step::SourceChain, j, "monoid".into());
        b.push(chart, Step::SourceChain, j, "chart".into());
    }

    let vars: Vec<String> = xs[..n - 1].iter().chain(&ys[..n - 1]).cloned().collect();
    let (_, f001) = b.general("f_0_0_1", &vars, c2)?;
    let (_, g) = b.general("g_0_0", &vars, c2 - 1)?;
    let (_, h) = b.general("h_0_0", &vars, c2 - 1)?;
    let (_, f002) = b.general("f_0_0_2", &vars, c2 - 2)?;
    b.add_points(&["t_0_0_1".into(), "t_0_0_2".into()])?;
    let r = b.ring.clone();
    let (f001, g, h, f002) = (f001.embed(&r)?, g.embed(&r)?, h.embed(&r)?, f002.embed(&r)?);
    let (xn, yn) = (b.var(&xs[n - 1]), b.var(&ys[n - 1]));
    let eq = &(&(&f001 + &(&xn * &g)) + &(&yn * &h)) + &(&(&xn * &yn) * &f002);
    let at_y = &(&f001 + &(&xn * &g)) * &(&h + &(&xn * &f002));
    let at_x = &(&f001 + &(&yn * &h)) * &(&g + &(&yn * &f002));
    b.push(eq, Step::TwoVertex, 0, "monoid".into());
    b.push(&r.one() - &(&b.var("t_0_0_1") * &at_y), Step::TwoVertex, 0, "chart_y".into());
    b.push(&r.one() - &(&b.var("t_0_0_2") * &at_x), Step::TwoVertex, 0, "chart_x".into());

    for j in 1..=n {
        let vars: Vec<String> = sub(&xs, j).into_iter().chain(ys.iter().cloned()).collect();
        let (_, f1) = b.general(&format!("f_{j}_0_1"), &vars, c2 - 1)?;
        let (_, f2) = b.general(&format!("f_{j}_0_2"), &vars, c2)?;
        let (f1, f2) = (f1.embed(&b.ring)?, f2.embed(&b.ring)?);
        let m = &(&f1 * &b.var(&xs[j - 1])) + &f2;
        let hs = b.hs(b.pointwise(None));
        let pts = b.point.clone();
        b.identity(&m, hs, &pts, &format!("tau_{j}_0"), caps.tau_degree, Step::TargetChain, j, "monoid".into())?;
        let t = format!("t_{j}_0");
        b.add_points(std::slice::from_ref(&t))?;
        let (f1, f2) = (f1.embed(&b.ring)?, f2.embed(&b.ring)?);
        let chart = &b.ring.one() - &(&b.var(&t) * &(&f1 * &f2));
        b.push(chart, Step::TargetChain, j, "chart".into());
    }

    let mut f = Vec::with_capacity(n + 1);
    for i in 0..=n {
        f.push(b.general(&format!("F_{i}"), &xs, d)?.0);
    }
    let fs: Vec<Polynomial> = f.iter().map(|&k| b.realize(k, &xs)).collect::<Result<_>>()?;
    let gens = b.pointwise(None);
    let pts = b.point.clone();
    let targets: Vec<Polynomial> = (1..=n).map(|i| &(&b.var(&ys[i - 1]) * &fs[0]) - &fs[i]).collect();
    for (i, target) in (1..=n).zip(targets) {
        let hs = b.hs(gens.clone());
        b.identity(&target, hs, &pts, &format!("tau_F_{i}"), caps.tau_degree, Step::Coupling, 0, format!("graph_{i}"))?;
    }
    for (k, g) in Normalized::affine_gens(&nm.y, &b.ring)?.into_iter().enumerate() {
        let hs = b.hs(gens.clone());
        b.identity(&g, hs, &pts, &format!("tau_Y_{k}"), caps.tau_degree, Step::Coupling, 0, format!("Y_{k}"))?;
    }
    b.add_points(&["t_f".into()])?;
    let f0 = b.realize(f[0], &xs)?;
    b.push(&b.ring.one() - &(&b.var("t_f") * &f0), Step::Coupling, 0, "chart".into());
    Ok(Core { f })
}

fn start(nm: &Normalized) -> Result<Builder> {
    let n = nm.n;
    let mut pts: Vec<String> = names("x", 1..=n).into_iter().chain(names("y", 1..=n)).collect();
    pts.push("a".into());
    Builder::new(nm.x.ring().field(), &pts)
}

fn c1(nm: &Normalized) -> u64 {
    nm.x.degree_bound().value
}

/// The system S whose solutions (parameters with a point of the residual
/// system) describe birational maps X ⇢ Y of degree ≤ `d`.
pub fn build_system(x: &Variety, y: &Variety, d: u32, caps: &Caps, budget: &Budget) -> Result<ParamSystem> {
    check_caps(caps, d)?;
    let nm = normalize(x, y, budget)?;
    let mut b = start(&nm)?;
    assemble(&mut b, &nm, d, caps)?;
    b.finish(SystemKind::Birational, nm.n, d, caps, c1(&nm), (nm.bx.clone(), nm.by.clone()))
}

/// S extended by a one-vertex monoid chain on the graph of F (in primed
/// coordinates), ending with the graph moved into the hyperplane `w = 0`.
pub fn build_birational_plus_system(x: &Variety, y: &Variety, d: u32, caps: &Caps, budget: &Budget) -> Result<ParamSystem> {
    check_caps(caps, d)?;
    let nm = normalize(x, y, budget)?;
    let n = nm.n;
    let c2 = caps.monoid_degree;
    let mut b = start(&nm)?;
    let core = assemble(&mut b, &nm, d, caps)?;

    let xps = names("xp", 1..=n);
    let yps = names("yp", 1..=n);
    let mut primed: Vec<String> = xps.iter().chain(&yps).cloned().collect();
    primed.push("tp_f".into());
    b.add_points(&primed)?;
    let first = b.eqs.len();
    let fs: Vec<Polynomial> = core.f.iter().map(|&k| b.realize(k, &xps)).collect::<Result<_>>()?;
    for i in 1..=n {
        let e = &(&b.var(&yps[i - 1]) * &fs[0]) - &fs[i];
        b.push(e, Step::GraphSeed, 0, format!("graph_{i}"));
    }
    b.push(&b.ring.one() - &(&b.var("tp_f") * &fs[0]), Step::GraphSeed, 0, "chart".into());

    let own = |b: &Builder| b.pointwise(None).into_iter().filter(|&i| i >= first).collect::<Vec<_>>();
    for j in 1..=n {
        let mut vars: Vec<String> = sub(&xps, j).into_iter().chain(yps.iter().cloned()).collect();
        if j == n {
            b.add_points(&["w".into()])?;
            primed.push("w".into());
            b.push(b.var("w"), Step::GraphChain, j, "hyperplane".into());
            vars.push("w".into());
        }
        let (_, f1) = b.general(&format!("fp_{j}_0_1"), &vars, c2 - 1)?;
        let (_, f2) = b.general(&format!("fp_{j}_0_2"), &vars, c2)?;
        let (f1, f2) = (f1.embed(&b.ring)?, f2.embed(&b.ring)?);
        let m = &(&f1 * &b.var(&xps[j - 1])) + &f2;
        let hs = b.hs(own(&b));
        b.identity(&m, hs, &primed, &format!("taup_{j}_0"), caps.tau_degree, Step::GraphChain, j, "monoid".into())?;
        let t = format!("tp_{j}_0");
        b.add_points(std::slice::from_ref(&t))?;
        primed.push(t.clone());
        let (f1, f2) = (f1.embed(&b.ring)?, f2.embed(&b.ring)?);
        b.push(&b.ring.one() - &(&b.var(&t) * &(&f1 * &f2)), Step::GraphChain, j, "chart".into());
    }
    let w = b.var("w");
    let hs = b.hs(own(&b));
    b.identity(&w, hs, &primed, "taup_w", caps.tau_degree, Step::GraphChain, n, "image_in_w".into())?;
    b.finish(SystemKind::BirationalPlus, n, d, caps, c1(&nm), (nm.bx.clone(), nm.by.clone()))
}

/// Degree of the hypersurface block Z: the cap, or the Bézout bound for a
/// degree-`d` image of X.
pub(crate) fn hypersurface_degree(nm: &Normalized, d: u32, caps: &Caps, budget: &Budget) -> Result<u32> {
    if let Some(z) = caps.hypersurface_degree {
        return Ok(z);
    }
    let dim = nm.x.dimension(budget)?.unwrap_or(0) as u32;
    let bound = (d as u64).saturating_pow(dim).saturating_mul(c1(nm));
    Ok(bound.min(u32::MAX as u64) as u32)
}

/// The dominance systems (E, E′). E: X, the graph of F, containment of the
/// image in Y and in a hypersurface Z of bounded degree. E′: E with Y ⊆ Z.
pub fn build_dominance_system(
    x: &Variety,
    y: &Variety,
    d: u32,
    caps: &Caps,
    budget: &Budget,
) -> Result<(ParamSystem, ParamSystem)> {
    check_caps(caps, d)?;
    let nm = normalize(x, y, budget)?;
    let n = nm.n;
    let xs = names("x", 1..=n);
    let ys = names("y", 1..=n);
    let zdeg = hypersurface_degree(&nm, d, caps, budget)?;
    let mut b = start(&nm)?;
    for g in Normalized::affine_gens(&nm.x, &b.ring)? {
        b.push(g, Step::Seed, 0, "X".into());
    }
    let mut f = Vec::with_capacity(n + 1);
    for i in 0..=n {
        f.push(b.general(&format!("F_{i}"), &xs, d)?.0);
    }
    b.add_points(&["t_f".into()])?;
    let fs: Vec<Polynomial> = f.iter().map(|&k| b.realize(k, &xs)).collect::<Result<_>>()?;
    for i in 1..=n {
        let e = &(&b.var(&ys[i - 1]) * &fs[0]) - &fs[i];
        b.push(e, Step::Image, 0, format!("graph_{i}"));
    }
    b.push(&b.ring.one() - &(&b.var("t_f") * &fs[0]), Step::Image, 0, "chart".into());
    let gens = b.pointwise(None);
    let pts = b.point.clone();
    let ygens = Normalized::affine_gens(&nm.y, &b.ring)?;
    for (k, g) in ygens.iter().enumerate() {
        let hs = b.hs(gens.clone());
        b.identity(g, hs, &pts, &format!("tau_Y_{k}"), caps.tau_degree, Step::Image, 0, format!("Y_{k}"))?;
    }
    let (zb, _) = b.general("Z", &ys, zdeg)?;
    let z = b.realize(zb, &ys)?;
    let hs = b.hs(gens);
    b.identity(&z, hs, &pts, "tau_Z", caps.tau_degree, Step::Hypersurface, 0, "image_in_Z".into())?;
    let mut bp = b.clone();
    let z = bp.realize(zb, &ys)?;
    let ys_in = ygens.iter().map(|g| g.embed(&bp.ring)).collect::<Result<Vec<_>>>()?;
    let srcs = vec![None; ys_in.len()];
    bp.identity(&z, (ys_in, srcs), &ys, "tau_YZ", caps.tau_degree, Step::TargetInHypersurface, 0, "Y_in_Z".into())?;
    let ch = (nm.bx.clone(), nm.by.clone());
    let e = b.finish(SystemKind::Dominance, n, d, caps, c1(&nm), ch.clone())?;
    let ep = bp.finish(SystemKind::DominanceExtended, n, d, caps, c1(&nm), ch)?;
    Ok((e, ep))
}
