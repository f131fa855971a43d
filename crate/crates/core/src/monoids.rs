//! Monoid hypersurfaces: a degree-d hypersurface with a point of multiplicity
//! d - 1 (the vertex), written `f_top · x_v + f_bot` once the vertex is the
//! coordinate point of `x_v` (or the point at infinity in the `x_v` direction
//! for affine monoids).

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{BudgetExceeded, Error, Result};
use crate::groebner::{Budget, Ideal};
use crate::linalg::LinearSystem;
use crate::polyring::{monomials_of_degree, monomials_up_to, Coeff, Field, Monomial, MonomialOrder, Polynomial, Ring};
use crate::varieties::Mode;

/// Invertible linear substitution `x = A x'`; columns of `A` are the images
/// of the new coordinate points.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearChange {
    pub matrix: Vec<Vec<Coeff>>,
}

impl LinearChange {
    /// A change whose last columns are the given points, so that they become
    /// the last coordinate points.
    pub fn moving_to_last(field: Field, n: usize, points: &[Vec<Coeff>]) -> Result<Self> {
        let mut pivots: Vec<usize> = Vec::new();
        match points {
            [v] => {
                let p = v.iter().position(|c| !c.is_zero()).ok_or_else(|| Error::Input("vertex is the zero vector".into()))?;
                pivots.push(p);
            }
            [v1, v2] => {
                let mut found = None;
                'outer: for p in 0..n {
                    for q in 0..n {
                        if p != q && !field.sub(&field.mul(&v1[p], &v2[q]), &field.mul(&v1[q], &v2[p])).is_zero() {
                            found = Some((p, q));
                            break 'outer;
                        }
                    }
                }
                let (p, q) = found.ok_or_else(|| Error::Input("vertices are not distinct points".into()))?;
                pivots.extend([p, q]);
            }
            _ => return Err(Error::Input("one or two vertices expected".into())),
        }
        if points.iter().any(|v| v.len() != n) {
            return Err(Error::Input(format!("vertex must have {n} coordinates")));
        }
        let mut cols: Vec<Vec<Coeff>> = (0..n)
            .filter(|k| !pivots.contains(k))
            .map(|k| (0..n).map(|i| if i == k { Coeff::from_integer(1.into()) } else { Coeff::zero() }).collect())
            .collect();
        cols.extend(points.iter().cloned());
        let matrix = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        Ok(LinearChange { matrix })
    }

    /// `F(A x')` as a polynomial in the same ring.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        let r = p.ring();
        let images: Vec<Polynomial> = self
            .matrix
            .iter()
            .map(|row| {
                row.iter().enumerate().fold(r.zero(), |acc, (j, c)| &acc + &r.term(c.clone(), Monomial::var(j, 1)))
            })
            .collect();
        p.compose(&images)
    }
}

/// One-vertex monoid `f_top · x_v + f_bot`.
#[derive(Clone, Debug)]
pub struct Monoid {
    ring: Ring,
    mode: Mode,
    vertex: usize,
    degree: u32,
    f_top: Polynomial,
    f_bot: Polynomial,
    change: Option<LinearChange>,
}

impl Monoid {
    pub fn new(mode: Mode, vertex: usize, degree: u32, f_top: Polynomial, f_bot: Polynomial) -> Result<Self> {
        let ring = f_top.ring().clone();
        if f_bot.ring() != &ring {
            return Err(Error::VariableMismatch);
        }
        if f_top.degree_in(vertex) > 0 || f_bot.degree_in(vertex) > 0 {
            return Err(Error::Input("monoid split parts must not involve the vertex coordinate".into()));
        }
        let ok = match mode {
            Mode::Projective => {
                let fits = |p: &Polynomial, d: u32| p.is_zero() || (p.is_homogeneous() && p.total_degree() == Some(d));
                degree >= 1 && fits(&f_top, degree - 1) && fits(&f_bot, degree)
            }
            Mode::Affine => {
                degree >= 1
                    && f_top.total_degree().unwrap_or(0) < degree
                    && f_bot.total_degree().unwrap_or(0) <= degree
            }
        };
        if !ok {
            return Err(Error::Input(format!("split parts do not have degrees ({}, {degree})", degree.saturating_sub(1))));
        }
        Ok(Monoid { ring, mode, vertex, degree, f_top, f_bot, change: None })
    }

    /// Split an equation that is linear in the vertex coordinate.
    pub fn from_equation(eq: &Polynomial, mode: Mode, vertex: usize) -> Result<Self> {
        if eq.degree_in(vertex) > 1 {
            return Err(Error::Input(format!(
                "equation has degree {} in the vertex coordinate; a monoid is linear in it",
                eq.degree_in(vertex)
            )));
        }
        let parts = eq.coefficients_in(|v| v == vertex);
        let r = eq.ring();
        let f_top = parts.get(&Monomial::var(vertex, 1)).cloned().unwrap_or_else(|| r.zero());
        let f_bot = parts.get(&Monomial::one()).cloned().unwrap_or_else(|| r.zero());
        let degree = eq.total_degree().unwrap_or(0);
        Monoid::new(mode, vertex, degree, f_top, f_bot)
    }

    /// Projective monoid with an arbitrary vertex point; coordinates are changed
    /// so that the vertex becomes the last coordinate point.
    pub fn with_vertex_point(eq: &Polynomial, vertex: &[Coeff]) -> Result<Self> {
        let n = eq.ring().nvars();
        let change = LinearChange::moving_to_last(eq.field(), n, &[vertex.to_vec()])?;
        let moved = change.apply(eq)?;
        let mut m = Monoid::from_equation(&moved, Mode::Projective, n - 1)?;
        m.change = Some(change);
        Ok(m)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn f_top(&self) -> &Polynomial {
        &self.f_top
    }

    pub fn f_bot(&self) -> &Polynomial {
        &self.f_bot
    }

    pub fn change(&self) -> Option<&LinearChange> {
        self.change.as_ref()
    }

    pub fn equation(&self) -> Polynomial {
        &(&self.f_top * &self.ring.var(self.vertex)) + &self.f_bot
    }

    /// Ring of the coordinates other than the vertex coordinate.
    pub fn base_ring(&self) -> Result<Ring> {
        let names: Vec<&str> = (0..self.ring.nvars())
            .filter(|&k| k != self.vertex)
            .map(|k| self.ring.vars().name(k))
            .collect();
        Ring::with_names(&names, self.ring.field())
    }

    /// Dropping the vertex coordinate; `None` at the vertex itself.
    pub fn project_point(&self, point: &[Coeff]) -> Option<Vec<Coeff>> {
        let out: Vec<Coeff> =
            point.iter().enumerate().filter(|(k, _)| *k != self.vertex).map(|(_, c)| c.clone()).collect();
        if self.mode == Mode::Projective && out.iter().all(Zero::is_zero) {
            return None;
        }
        Some(out)
    }

    /// Image closure of V(I) under the projection, in the base ring.
    pub fn project_ideal(&self, ideal: &Ideal, budget: &Budget) -> Result<Ideal> {
        ideal.eliminate_to(&self.base_ring()?, budget)
    }

    /// Components of the inverse of the projection: `f_top · x_k` for the base
    /// coordinates and `-f_bot` for the vertex coordinate, in the base ring.
    pub fn inverse_section(&self) -> Result<Vec<Polynomial>> {
        let base = self.base_ring()?;
        let top = self.f_top.embed(&base)?;
        let bot = self.f_bot.embed(&base)?;
        let mut out = Vec::with_capacity(self.ring.nvars());
        let mut k = 0;
        for i in 0..self.ring.nvars() {
            if i == self.vertex {
                out.push(bot.neg());
            } else {
                out.push(match self.mode {
                    Mode::Projective => &top * &base.var(k),
                    Mode::Affine => base.var(k),
                });
                k += 1;
            }
        }
        Ok(out)
    }

    /// Evaluate the inverse at a base point; `None` where it is undefined.
    pub fn inverse_point(&self, base_point: &[Coeff]) -> Result<Option<Vec<Coeff>>> {
        let f = self.ring.field();
        let base = self.base_ring()?;
        let top = self.f_top.embed(&base)?.evaluate(base_point)?;
        let bot = self.f_bot.embed(&base)?.evaluate(base_point)?;
        let mut out = Vec::with_capacity(self.ring.nvars());
        let mut k = 0;
        match self.mode {
            Mode::Projective => {
                if top.is_zero() && bot.is_zero() {
                    return Ok(None);
                }
                for i in 0..self.ring.nvars() {
                    if i == self.vertex {
                        out.push(f.neg(&bot));
                    } else {
                        out.push(f.mul(&top, &base_point[k]));
                        k += 1;
                    }
                }
            }
            Mode::Affine => {
                let Some(inv) = f.inv(&top) else { return Ok(None) };
                for i in 0..self.ring.nvars() {
                    if i == self.vertex {
                        out.push(f.neg(&f.mul(&bot, &inv)));
                    } else {
                        out.push(base_point[k].clone());
                        k += 1;
                    }
                }
            }
        }
        Ok(Some(out))
    }
}

/// Two-vertex monoid `f_d + x_a g + x_b h + x_a x_b f_{d-2}` with vertices the
/// coordinate points of `x_a` and `x_b` (or the points at infinity in those
/// directions, affinely).
#[derive(Clone, Debug)]
pub struct TwoVertexMonoid {
    pub mode: Mode,
    pub vertices: (usize, usize),
    pub degree: u32,
    pub f_d: Polynomial,
    pub g: Polynomial,
    pub h: Polynomial,
    pub f_d2: Polynomial,
}

impl TwoVertexMonoid {
    pub fn ring(&self) -> &Ring {
        self.f_d.ring()
    }

    pub fn equation(&self) -> Polynomial {
        let r = self.ring();
        let (a, b) = (r.var(self.vertices.0), r.var(self.vertices.1));
        &(&(&self.f_d + &(&a * &self.g)) + &(&b * &self.h)) + &(&(&a * &b) * &self.f_d2)
    }

    /// The same hypersurface read as a one-vertex monoid at either vertex.
    pub fn readings(&self) -> Result<(Monoid, Monoid)> {
        let r = self.ring();
        let (a, b) = (r.var(self.vertices.0), r.var(self.vertices.1));
        let at_b = Monoid::new(
            self.mode,
            self.vertices.1,
            self.degree,
            &self.h + &(&a * &self.f_d2),
            &self.f_d + &(&a * &self.g),
        )?;
        let at_a = Monoid::new(
            self.mode,
            self.vertices.0,
            self.degree,
            &self.g + &(&b * &self.f_d2),
            &self.f_d + &(&b * &self.h),
        )?;
        Ok((at_a, at_b))
    }

    /// Split an equation of bidegree ≤ (1, 1) in the two vertex coordinates.
    pub fn from_equation(eq: &Polynomial, mode: Mode, a: usize, b: usize) -> Result<Self> {
        if eq.degree_in(a) > 1 || eq.degree_in(b) > 1 {
            return Err(Error::Input("two-vertex monoid must be linear in each vertex coordinate".into()));
        }
        let r = eq.ring();
        let parts = eq.coefficients_in(|v| v == a || v == b);
        let get = |m: Monomial| parts.get(&m).cloned().unwrap_or_else(|| r.zero());
        Ok(TwoVertexMonoid {
            mode,
            vertices: (a, b),
            degree: eq.total_degree().unwrap_or(0),
            f_d: get(Monomial::one()),
            g: get(Monomial::var(a, 1)),
            h: get(Monomial::var(b, 1)),
            f_d2: get(Monomial::var(a, 1).mul(&Monomial::var(b, 1))),
        })
    }
}

/// Outcome of monoid validation.
#[derive(Clone, Debug, Serialize)]
pub struct MonoidDiagnostics {
    pub valid: bool,
    pub degree: u32,
    /// Multiplicity of the hypersurface at the vertex.
    pub multiplicity: u32,
    /// Dimension of V(f_top, f_bot) in the space of the non-vertex coordinates
    /// (projective dimension for projective monoids); `None` when empty.
    pub common_zero_dim: Option<usize>,
    pub problems: Vec<String>,
}

fn multiplicity_at_vertex(m: &Monoid) -> u32 {
    let eq = m.equation();
    let dehom = match m.mode {
        Mode::Projective => eq.dehomogenize(m.vertex, &Coeff::from_integer(1.into())),
        // the vertex at infinity: homogenize with a fresh coordinate first
        Mode::Affine => {
            let h = m.ring.vars().fresh_name("h");
            let r = m.ring.extended(&[h.as_str()]).unwrap();
            let e = eq.embed(&r).unwrap().homogenize(r.nvars() - 1).unwrap();
            e.dehomogenize(m.vertex, &Coeff::from_integer(1.into()))
        }
    };
    dehom.terms().map(|(t, _)| t.degree()).min().unwrap_or(u32::MAX)
}

/// Multiplicity exactly `d - 1` at the vertex and coprime split parts,
/// tested as `V(f_top, f_bot)` having codimension at least 2.
pub fn validate_monoid(m: &Monoid, budget: &Budget) -> Result<MonoidDiagnostics> {
    let mut problems = Vec::new();
    let d = m.degree;
    let mult = multiplicity_at_vertex(m);
    if m.f_top.is_zero() {
        problems.push("f_top is zero: the vertex has multiplicity d, so the hypersurface is a cone".into());
    } else if mult != d.saturating_sub(1) {
        problems.push(format!("multiplicity {mult} at the vertex, expected {}", d.saturating_sub(1)));
    }
    let base = m.base_ring()?;
    let pair = Ideal::new(&base, [m.f_top.embed(&base)?, m.f_bot.embed(&base)?])?;
    let dim = pair.dimension(budget)?;
    let (common, allowed) = match m.mode {
        Mode::Projective => (dim.and_then(|x| x.checked_sub(1)), base.nvars() as i64 - 3),
        Mode::Affine => (dim, base.nvars() as i64 - 2),
    };
    if let Some(c) = common {
        if c as i64 > allowed {
            problems.push(format!("f_top and f_bot share a component: common zero set has dimension {c}"));
        }
    }
    Ok(MonoidDiagnostics { valid: problems.is_empty(), degree: d, multiplicity: mult, common_zero_dim: common, problems })
}

/// Both one-vertex readings must be valid monoids.
pub fn validate_two_vertex(m: &TwoVertexMonoid, budget: &Budget) -> Result<(MonoidDiagnostics, MonoidDiagnostics)> {
    let (a, b) = m.readings()?;
    Ok((validate_monoid(&a, budget)?, validate_monoid(&b, budget)?))
}

/// The chart `{g_i, f_top·y + f_bot, 1 - t·f_top·f_bot}` of the strict transform
/// of V(I) in the monoid. `I` lives in the monoid's base ring; the result lives
/// in the monoid ring extended by `t`.
pub fn strict_transform_chart(x: &Ideal, m: &Monoid, t_name: &str, budget: &Budget) -> Result<Ideal> {
    let base = m.base_ring()?;
    let xi = x.embed(&base)?;
    let prod = &m.f_top.embed(&base)? * &m.f_bot.embed(&base)?;
    if xi.radical_contains(&prod, budget)? {
        return Err(Error::ChartEmpty(format!("the variety lies in V({})", prod)));
    }
    let ring = m.ring.extended(&[t_name])?;
    let t = ring.var(ring.index(t_name)?);
    let mut gens = x.embed(&ring)?.gens().to_vec();
    gens.push(m.equation().embed(&ring)?);
    gens.push(&ring.one() - &(&t * &(&m.f_top * &m.f_bot).embed(&ring)?));
    Ideal::new(&ring, gens)
}

/// Options for [`fit_monoid`].
#[derive(Clone, Debug)]
pub struct FitOptions {
    pub start_degree: u32,
    pub cap: u32,
    /// Reject candidates with `V(Γ) ⊆ V(f_top · f_bot)`, so that the chart of
    /// the strict transform is nonempty.
    pub require_chart: bool,
    pub seed: u64,
    pub random_tries: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { start_degree: 1, cap: 3, require_chart: false, seed: 17, random_tries: 8 }
    }
}

fn unknown_monomials(mode: Mode, vars: &[usize], deg: u32) -> Vec<Monomial> {
    match mode {
        Mode::Projective => monomials_of_degree(vars, deg),
        Mode::Affine => monomials_up_to(vars, deg),
    }
}

/// Nullspace of the containment condition NF(f_top·x_v + f_bot) = 0 for a
/// degree-`d` monoid, in terms of the unknown coefficients of `blocks`
/// (each block a list of monomials of the full equation).
fn containment_nullspace(gamma: &Ideal, blocks: &[Monomial], budget: &Budget) -> Result<Vec<Vec<Coeff>>> {
    let r = gamma.ring();
    let gb = gamma.groebner(MonomialOrder::GrevLex, budget)?;
    let mut rows: std::collections::BTreeMap<Monomial, Vec<(usize, Coeff)>> = Default::default();
    for (k, m) in blocks.iter().enumerate() {
        let nf = gb.normal_form(&r.term(Coeff::from_integer(1.into()), m.clone()));
        for (t, c) in nf.terms() {
            rows.entry(t.clone()).or_default().push((k, c.clone()));
        }
    }
    let mut sys = LinearSystem::new(r.field(), blocks.len());
    for (_, row) in rows {
        sys.push(row, Coeff::zero());
    }
    Ok(sys.nullspace())
}

fn candidates(basis: &[Vec<Coeff>], rng: &mut ChaCha8Rng, tries: usize, field: Field) -> Vec<Vec<Coeff>> {
    let mut out: Vec<Vec<Coeff>> = basis.to_vec();
    if basis.len() > 1 {
        for _ in 0..tries {
            let mut v = vec![Coeff::zero(); basis[0].len()];
            for b in basis {
                let c = field.from_i64(rng.gen_range(-5..=5));
                for (x, y) in v.iter_mut().zip(b) {
                    *x = field.add(x, &field.mul(&c, y));
                }
            }
            if v.iter().any(|c| !c.is_zero()) {
                out.push(v);
            }
        }
    }
    out
}

/// Whether both parts vanish on the projection of V(Γ) from the vertex, i.e.
/// the monoid contains the cone over V(Γ).
fn contains_cone(gamma: &Ideal, m: &Monoid, budget: &Budget) -> Result<bool> {
    let proj = m.project_ideal(gamma, budget)?.embed(&m.ring)?;
    proj.radical_contains_all(&[m.f_top.clone(), m.f_bot.clone()], budget)
}

/// Search degrees `start_degree..=cap` for a one-vertex monoid with vertex
/// coordinate `vertex` containing V(Γ) but not the cone over it.
pub fn fit_monoid(gamma: &Ideal, mode: Mode, vertex: usize, opts: &FitOptions, budget: &Budget) -> Result<Monoid> {
    let r = gamma.ring().clone();
    let others: Vec<usize> = (0..r.nvars()).filter(|&k| k != vertex).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let xv = Monomial::var(vertex, 1);
    for d in opts.start_degree.max(1)..=opts.cap {
        let tops = unknown_monomials(mode, &others, d - 1);
        let bots = unknown_monomials(mode, &others, d);
        let blocks: Vec<Monomial> = tops.iter().map(|m| m.mul(&xv)).chain(bots.iter().cloned()).collect();
        let basis = containment_nullspace(gamma, &blocks, budget)?;
        for v in candidates(&basis, &mut rng, opts.random_tries, r.field()) {
            let top = r.from_terms(tops.iter().cloned().zip(v[..tops.len()].iter().cloned()));
            let bot = r.from_terms(bots.iter().cloned().zip(v[tops.len()..].iter().cloned()));
            if top.is_zero() {
                continue;
            }
            let m = match Monoid::new(mode, vertex, d, top, bot) {
                Ok(m) => m,
                Err(_) => continue,
            };
            if !validate_monoid(&m, budget)?.valid {
                continue;
            }
            if contains_cone(gamma, &m, budget)? {
                continue;
            }
            if opts.require_chart && gamma.radical_contains(&(m.f_top() * m.f_bot()), budget)? {
                continue;
            }
            return Ok(m);
        }
    }
    Err(BudgetExceeded::MonoidDegree { limit: opts.cap }.into())
}

/// Two-vertex analogue of [`fit_monoid`] with vertex coordinates `a` and `b`.
pub fn fit_two_vertex_monoid(
    gamma: &Ideal,
    mode: Mode,
    a: usize,
    b: usize,
    opts: &FitOptions,
    budget: &Budget,
) -> Result<TwoVertexMonoid> {
    let r = gamma.ring().clone();
    let others: Vec<usize> = (0..r.nvars()).filter(|&k| k != a && k != b).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (ma, mb) = (Monomial::var(a, 1), Monomial::var(b, 1));
    for d in opts.start_degree.max(1)..=opts.cap {
        let fd = unknown_monomials(mode, &others, d);
        let g = unknown_monomials(mode, &others, d - 1);
        let h = unknown_monomials(mode, &others, d - 1);
        let fd2 = if d >= 2 { unknown_monomials(mode, &others, d - 2) } else { vec![] };
        let mut blocks: Vec<Monomial> = fd.clone();
        blocks.extend(g.iter().map(|m| m.mul(&ma)));
        blocks.extend(h.iter().map(|m| m.mul(&mb)));
        blocks.extend(fd2.iter().map(|m| m.mul(&ma).mul(&mb)));
        let basis = containment_nullspace(gamma, &blocks, budget)?;
        let split = |v: &[Coeff], off: usize, ms: &[Monomial]| r.from_terms(ms.iter().cloned().zip(v[off..off + ms.len()].iter().cloned()));
        for v in candidates(&basis, &mut rng, opts.random_tries, r.field()) {
            let m = TwoVertexMonoid {
                mode,
                vertices: (a, b),
                degree: d,
                f_d: split(&v, 0, &fd),
                g: split(&v, fd.len(), &g),
                h: split(&v, fd.len() + g.len(), &h),
                f_d2: split(&v, fd.len() + g.len() + h.len(), &fd2),
            };
            let Ok((ra, rb)) = m.readings() else { continue };
            if !validate_monoid(&ra, budget)?.valid || !validate_monoid(&rb, budget)?.valid {
                continue;
            }
            if contains_cone(gamma, &ra, budget)? || contains_cone(gamma, &rb, budget)? {
                continue;
            }
            if opts.require_chart {
                let prod = &(ra.f_top() * ra.f_bot()) * &(rb.f_top() * rb.f_bot());
                if gamma.radical_contains(&prod, budget)? {
                    continue;
                }
            }
            return Ok(m);
        }
    }
    Err(BudgetExceeded::MonoidDegree { limit: opts.cap }.into())
}

/// `q_0(d) = 1`, `q_m(d) = Σ_{j=0..d} q_{m-1}(j)`; saturates at `u128::MAX`.
pub fn q_sequence(m: u32, d: u32) -> u128 {
    let mut row: Vec<u128> = vec![1; d as usize + 1];
    for _ in 0..m {
        let mut acc: u128 = 0;
        for x in row.iter_mut() {
            acc = acc.saturating_add(*x);
            *x = acc;
        }
    }
    row[d as usize]
}

/// `δ · q_s(d)`.
pub fn monoid_h0_bound(delta: u64, s: u32, d: u32) -> u128 {
    (delta as u128).saturating_mul(q_sequence(s, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{int, Field};

    fn p2() -> Ring {
        Ring::with_names(&["x", "y", "z"], Field::Rational).unwrap()
    }

    #[test]
    fn conic_is_a_monoid() {
        let r = p2();
        let m = Monoid::from_equation(&r.parse("x*z - y^2").unwrap(), Mode::Projective, 2).unwrap();
        assert_eq!(m.f_top(), &r.var(0));
        assert_eq!(m.f_bot(), &r.parse("-y^2").unwrap());
        let diag = validate_monoid(&m, &Budget::default()).unwrap();
        assert!(diag.valid, "{diag:?}");
        assert_eq!(diag.multiplicity, 1);
    }

    #[test]
    fn factorable_equation_is_rejected() {
        let r = p2();
        assert!(Monoid::from_equation(&r.parse("x*z^2 - x^3").unwrap(), Mode::Projective, 2).is_err());
        // a reducible monoid that is linear in z: x*(z - y)
        let m = Monoid::from_equation(&r.parse("x*z - x*y").unwrap(), Mode::Projective, 2).unwrap();
        let diag = validate_monoid(&m, &Budget::default()).unwrap();
        assert!(!diag.valid);
    }

    #[test]
    fn hyperplane_is_degenerate_monoid() {
        let r = p2();
        let m = Monoid::from_equation(&r.var(2), Mode::Projective, 2).unwrap();
        assert_eq!(m.degree(), 1);
        assert!(validate_monoid(&m, &Budget::default()).unwrap().valid);
    }

    #[test]
    fn projection_and_inverse() {
        let r = p2();
        let m = Monoid::from_equation(&r.parse("x*z - y^2").unwrap(), Mode::Projective, 2).unwrap();
        assert_eq!(m.project_point(&[int(1), int(1), int(1)]), Some(vec![int(1), int(1)]));
        assert_eq!(m.project_point(&[int(0), int(0), int(1)]), None);
        let inv = m.inverse_section().unwrap();
        let base = m.base_ring().unwrap();
        assert_eq!(inv, vec![base.parse("x^2").unwrap(), base.parse("x*y").unwrap(), base.parse("y^2").unwrap()]);
        assert_eq!(m.inverse_point(&[int(1), int(2)]).unwrap(), Some(vec![int(1), int(2), int(4)]));
        assert_eq!(m.inverse_point(&[int(0), int(0)]).unwrap(), None);
        let img = m.project_ideal(&Ideal::new(&r, [r.parse("x*z - y^2").unwrap()]).unwrap(), &Budget::default()).unwrap();
        assert!(img.is_zero_ideal());
    }

    #[test]
    fn vertex_normalization() {
        let r = p2();
        // conic through [1:1:1]; make that point the vertex
        let eq = r.parse("x*z - y^2").unwrap();
        let m = Monoid::with_vertex_point(&eq, &[int(1), int(1), int(1)]).unwrap();
        assert!(validate_monoid(&m, &Budget::default()).unwrap().valid);
        assert!(m.change().is_some());
    }

    #[test]
    fn q_values() {
        assert_eq!(q_sequence(1, 3), 4);
        assert_eq!(q_sequence(2, 2), 6);
        for m in 0..5 {
            assert_eq!(q_sequence(m, 0), 1);
        }
        assert_eq!(monoid_h0_bound(3, 2, 2), 18);
    }

    #[test]
    fn fits_plane_through_line() {
        // line in P^3 missing the vertex [0:0:0:1]
        let r = Ring::with_names(&["x", "y", "z", "w"], Field::Rational).unwrap();
        let line = Ideal::new(&r, [r.parse("x - w").unwrap(), r.parse("y - 2*z").unwrap()]).unwrap();
        let m = fit_monoid(&line, Mode::Projective, 3, &FitOptions::default(), &Budget::default()).unwrap();
        assert_eq!(m.degree(), 1);
        assert!(line.contains(&m.equation(), &Budget::default()).unwrap());
    }
}
