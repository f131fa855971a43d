//! Varieties, explicit rational maps, graphs and images.

use std::collections::BTreeSet;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{Budget, GBReport, Ideal};
use crate::polyring::{Coeff, Monomial, MonomialOrder, Polynomial, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Affine,
    Projective,
}

/// Closed subvariety of affine space or projective space, given by an ideal.
/// Projective varieties use homogeneous generators in `n + 1` variables.
#[derive(Clone, Debug)]
pub struct Variety {
    mode: Mode,
    ideal: Ideal,
}

impl Variety {
    pub fn new(ideal: Ideal, mode: Mode) -> Result<Self> {
        if mode == Mode::Projective {
            if let Some(g) = ideal.gens().iter().find(|g| !g.is_homogeneous()) {
                return Err(Error::Input(format!("projective generator `{g}` is not homogeneous")));
            }
            if ideal.ring().nvars() == 0 {
                return Err(Error::Input("projective space needs at least one coordinate".into()));
            }
        }
        Ok(Variety { mode, ideal })
    }

    pub fn from_strings<S: AsRef<str>>(ring: &Ring, gens: &[S], mode: Mode) -> Result<Self> {
        let gens = gens.iter().map(|g| ring.parse(g.as_ref())).collect::<Result<Vec<_>>>()?;
        Variety::new(Ideal::new(ring, gens)?, mode)
    }

    /// The whole ambient space.
    pub fn ambient(ring: &Ring, mode: Mode) -> Result<Self> {
        Variety::new(Ideal::zero(ring), mode)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }

    pub fn gens(&self) -> &[Polynomial] {
        self.ideal.gens()
    }

    pub fn ambient_dim(&self) -> usize {
        match self.mode {
            Mode::Affine => self.ring().nvars(),
            Mode::Projective => self.ring().nvars() - 1,
        }
    }

    /// Dimension of the variety; `None` when it is empty.
    pub fn dimension(&self, budget: &Budget) -> Result<Option<usize>> {
        let d = self.ideal.dimension(budget)?;
        Ok(match self.mode {
            Mode::Affine => d,
            // the affine cone of a nonempty projective variety has dimension ≥ 1
            Mode::Projective => d.and_then(|d| d.checked_sub(1)),
        })
    }

    /// Standard affine pieces. Affine varieties have the single chart `None`;
    /// projective ones have one chart per coordinate, given as `(i, I + (x_i - 1))`.
    pub fn charts(&self) -> Result<Vec<(Option<usize>, Ideal)>> {
        match self.mode {
            Mode::Affine => Ok(vec![(None, self.ideal.clone())]),
            Mode::Projective => {
                let r = self.ring();
                (0..r.nvars())
                    .map(|i| Ok((Some(i), self.ideal.with([&r.var(i) - &r.one()])?)))
                    .collect()
            }
        }
    }

    /// Dehomogenized chart in the ring without coordinate `i`.
    pub fn dehomogenized_chart(&self, i: usize) -> Result<Ideal> {
        let r = self.ring();
        let names: Vec<&str> = (0..r.nvars()).filter(|&k| k != i).map(|k| r.vars().name(k)).collect();
        let cr = Ring::with_names(&names, r.field())?;
        let one = Coeff::from_integer(1.into());
        let gens = self
            .gens()
            .iter()
            .map(|g| g.dehomogenize(i, &one).embed(&cr))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(&cr, gens)
    }

    pub fn is_empty(&self, budget: &Budget) -> Result<bool> {
        Ok(self.dimension(budget)?.is_none())
    }

    /// V(self) ⊆ V(other), for varieties in the same ambient ring.
    pub fn is_subset_of(&self, other: &Variety, budget: &Budget) -> Result<bool> {
        let gens: Vec<Polynomial> =
            other.gens().iter().map(|g| g.embed(self.ring())).collect::<Result<_>>()?;
        self.ideal.radical_contains_all(&gens, budget)
    }

    /// Equal as sets: mutual radical membership of generators.
    pub fn same_set(&self, other: &Variety, budget: &Budget) -> Result<bool> {
        Ok(self.is_subset_of(other, budget)? && other.is_subset_of(self, budget)?)
    }

    pub fn degree_bound(&self) -> DegreeBound {
        let degs: Vec<u32> = self.gens().iter().filter_map(|g| g.total_degree()).collect();
        bezout_degree_bound(&degs, self.ambient_dim())
    }

    pub fn contains_point(&self, point: &[Coeff]) -> Result<bool> {
        for g in self.gens() {
            if !num_traits::Zero::is_zero(&g.evaluate(point)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Explicit rational map given by polynomials in the source ring.
#[derive(Clone, Debug)]
pub enum MapKind {
    /// `[F_0 : … : F_m]`, homogeneous of one common degree.
    Projective(Vec<Polynomial>),
    /// `(g_1/h, …, g_m/h)`.
    Affine { numerators: Vec<Polynomial>, denominator: Polynomial },
}

#[derive(Clone, Debug)]
pub struct RationalMap {
    source: Ring,
    target: Ring,
    kind: MapKind,
}

impl RationalMap {
    pub fn projective(source: &Ring, target: &Ring, components: Vec<Polynomial>) -> Result<Self> {
        if components.len() != target.nvars() {
            return Err(Error::Input(format!(
                "map has {} components but the target has {} coordinates",
                components.len(),
                target.nvars()
            )));
        }
        if components.iter().all(|c| c.is_zero()) {
            return Err(Error::Input("all map components are zero".into()));
        }
        let degs: BTreeSet<u32> = components.iter().filter_map(|c| c.total_degree()).collect();
        if degs.len() > 1 || components.iter().any(|c| !c.is_homogeneous()) {
            return Err(Error::Input("projective components must be homogeneous of one degree".into()));
        }
        let map = RationalMap { source: source.clone(), target: target.clone(), kind: MapKind::Projective(components) };
        map.check_rings()?;
        Ok(map)
    }

    pub fn affine(source: &Ring, target: &Ring, numerators: Vec<Polynomial>, denominator: Polynomial) -> Result<Self> {
        if numerators.len() != target.nvars() {
            return Err(Error::Input(format!(
                "map has {} numerators but the target has {} coordinates",
                numerators.len(),
                target.nvars()
            )));
        }
        if denominator.is_zero() {
            return Err(Error::Input("denominator is zero".into()));
        }
        let map = RationalMap {
            source: source.clone(),
            target: target.clone(),
            kind: MapKind::Affine { numerators, denominator },
        };
        map.check_rings()?;
        Ok(map)
    }

    fn check_rings(&self) -> Result<()> {
        for p in self.polys() {
            if p.ring() != &self.source {
                return Err(Error::VariableMismatch);
            }
        }
        if self.source.field() != self.target.field() {
            return Err(Error::FieldMismatch);
        }
        for n in self.target.vars().names() {
            if self.source.vars().index(n).is_some() {
                return Err(Error::Input(format!("variable `{n}` is used in both source and target")));
            }
        }
        Ok(())
    }

    fn polys(&self) -> Vec<&Polynomial> {
        match &self.kind {
            MapKind::Projective(c) => c.iter().collect(),
            MapKind::Affine { numerators, denominator } => {
                numerators.iter().chain(std::iter::once(denominator)).collect()
            }
        }
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn mode(&self) -> Mode {
        match self.kind {
            MapKind::Projective(_) => Mode::Projective,
            MapKind::Affine { .. } => Mode::Affine,
        }
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    /// Largest degree among the defining polynomials.
    pub fn degree(&self) -> u32 {
        self.polys().iter().filter_map(|p| p.total_degree()).max().unwrap_or(0)
    }

    /// Polynomials whose common zero set is where this representative is undefined:
    /// all components (projective) or the denominator (affine).
    pub fn base_locus(&self) -> Vec<Polynomial> {
        match &self.kind {
            MapKind::Projective(c) => c.iter().filter(|p| !p.is_zero()).cloned().collect(),
            MapKind::Affine { denominator, .. } => vec![denominator.clone()],
        }
    }

    /// Source variables followed by target variables.
    pub fn graph_ring(&self) -> Result<Ring> {
        let names: Vec<String> = self.target.vars().names().to_vec();
        self.source.extended(&names)
    }

    /// Index in the graph ring of target coordinate `j`.
    pub fn target_index(&self, j: usize) -> usize {
        self.source.nvars() + j
    }

    /// Value at a source point; `None` where this representative is undefined.
    pub fn evaluate(&self, point: &[Coeff]) -> Result<Option<Vec<Coeff>>> {
        let f = self.source.field();
        match &self.kind {
            MapKind::Projective(c) => {
                let vals = c.iter().map(|p| p.evaluate(point)).collect::<Result<Vec<_>>>()?;
                Ok(if vals.iter().all(num_traits::Zero::is_zero) { None } else { Some(vals) })
            }
            MapKind::Affine { numerators, denominator } => {
                let h = denominator.evaluate(point)?;
                let Some(hi) = f.inv(&h) else { return Ok(None) };
                let vals = numerators
                    .iter()
                    .map(|p| Ok(f.mul(&p.evaluate(point)?, &hi)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Some(vals))
            }
        }
    }
}

/// Equations cutting out a set containing the graph of `map`:
/// the 2×2 minors `y_j F_i - y_i F_j` (i < j), or `y_i h - g_i` in the affine case.
pub fn graph_ideal(map: &RationalMap) -> Result<Ideal> {
    let gr = map.graph_ring()?;
    let y = |j: usize| gr.var(map.target_index(j));
    let mut gens = Vec::new();
    match map.kind() {
        MapKind::Projective(c) => {
            let c = c.iter().map(|p| p.embed(&gr)).collect::<Result<Vec<_>>>()?;
            for i in 0..c.len() {
                for j in (i + 1)..c.len() {
                    gens.push(&(&y(j) * &c[i]) - &(&y(i) * &c[j]));
                }
            }
        }
        MapKind::Affine { numerators, denominator } => {
            let h = denominator.embed(&gr)?;
            for (i, g) in numerators.iter().enumerate() {
                gens.push(&(&y(i) * &h) - &g.embed(&gr)?);
            }
        }
    }
    Ideal::new(&gr, gens)
}

/// A member of the base locus that does not vanish identically on `x`.
pub fn nonvanishing_component(map: &RationalMap, x: &Variety, budget: &Budget) -> Result<Polynomial> {
    for p in map.base_locus() {
        if !x.ideal().radical_contains(&p, budget)? {
            return Ok(p);
        }
    }
    Err(Error::MapUndefined)
}

/// Ideal of the closure of the graph of `map` restricted to `x` (irreducible),
/// computed by the chart `1 - t·F_i` for a component not vanishing on `x` and
/// elimination of `t`.
pub fn restricted_graph(map: &RationalMap, x: &Variety, budget: &Budget) -> Result<Ideal> {
    if x.ring() != map.source() {
        return Err(Error::VariableMismatch);
    }
    let h = nonvanishing_component(map, x, budget)?;
    let gr = map.graph_ring()?;
    let base = graph_ideal(map)?.with(x.gens().iter().map(|g| g.embed(&gr)).collect::<Result<Vec<_>>>()?)?;
    let (chart, t) = base.saturation_chart(&h.embed(&gr)?, "t")?;
    let keep: Vec<usize> = (0..gr.nvars()).collect();
    debug_assert_eq!(t, gr.nvars());
    let g = chart.eliminate(&keep, budget)?.embed(&gr)?;
    Ideal::new(&gr, g.gens().iter().map(trailing_positive))
}

/// Sign convention for presented generators: the smallest term (grevlex) gets
/// a positive coefficient, so `y^2 - x*z` is shown as `x*z - y^2`.
pub fn trailing_positive(p: &Polynomial) -> Polynomial {
    match p.sorted_terms(MonomialOrder::GrevLex).last() {
        Some((_, c)) if c.is_negative() => p.neg(),
        _ => p.clone(),
    }
}

/// Closure of the projection of a graph ideal to the target variables.
pub fn image_closure(graph: &Ideal, target: &Ring, mode: Mode, budget: &Budget) -> Result<Variety> {
    Variety::new(graph.eliminate_to(target, budget)?, mode)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Derivation {
    BezoutProduct,
    Projection,
    Graph,
}

/// An upper bound on a degree, with how it was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBound {
    pub value: u64,
    pub derivation: Derivation,
}

/// Product of the generator degrees (Bézout with constant 1). Only the `n`
/// largest degrees can cut down dimension, so at most `n` factors are used.
pub fn bezout_degree_bound(degrees: &[u32], n: usize) -> DegreeBound {
    let mut d: Vec<u64> = degrees.iter().map(|&d| d.max(1) as u64).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d.truncate(n.max(1));
    DegreeBound { value: d.iter().product::<u64>().max(1), derivation: Derivation::BezoutProduct }
}

/// Bound on the degree of the graph of a degree-`d` map on `x`: the graph lies
/// in `x` cut by `n` independent hypersurfaces `y_i F_0 - y_0 F_i` of degree
/// `d + 1`.
pub fn graph_degree_bound(d: u32, x: &Variety) -> DegreeBound {
    let n = x.ambient_dim() as u32;
    let base = x.degree_bound().value;
    DegreeBound { value: base.saturating_mul((d as u64 + 1).saturating_pow(n)), derivation: Derivation::Graph }
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<Polynomial>], ring: &Ring) -> Polynomial {
    match m.len() {
        0 => ring.one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        n => {
            let mut acc = ring.zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &m[0][j] * &determinant(&minor, ring);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// k-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for i in start..n {
            if n - i < k - acc.len() {
                break;
            }
            acc.push(i);
            go(i + 1, n, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// All `k × k` minors of the Jacobian of `gens` with respect to `vars`.
/// With fewer than `k` generators there are none, and the minors ideal is zero.
/// The empty minor (`k = 0`) is 1.
pub fn jacobian_minors(ring: &Ring, gens: &[Polynomial], vars: &[usize], k: usize) -> Vec<Polynomial> {
    if k == 0 {
        return vec![ring.one()];
    }
    let jac: Vec<Vec<Polynomial>> = gens.iter().map(|g| vars.iter().map(|&v| g.differentiate(v)).collect()).collect();
    let mut out = Vec::new();
    for rows in subsets(gens.len(), k) {
        for cols in subsets(vars.len(), k) {
            let m: Vec<Vec<Polynomial>> =
                rows.iter().map(|&r| cols.iter().map(|&c| jac[r][c].clone()).collect()).collect();
            let d = determinant(&m, ring);
            if !d.is_zero() && !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

/// Result of a smoothness test.
#[derive(Clone, Debug)]
pub struct Smoothness {
    pub smooth: bool,
    /// A chart (coordinate set to 1, if projective) where singular points exist.
    pub singular_chart: Option<Option<usize>>,
}

/// Jacobian criterion, chart by chart: V(I) is smooth iff I plus all
/// codimension-sized minors is inconsistent in every chart. Assumes the
/// generators define the variety reducedly and it is equidimensional.
pub fn smoothness_check(x: &Variety, budget: &Budget) -> Result<Smoothness> {
    let Some(dim) = x.dimension(budget)? else {
        return Ok(Smoothness { smooth: true, singular_chart: None });
    };
    let codim = x.ambient_dim() - dim;
    let charts: Vec<(Option<usize>, Ideal)> = match x.mode() {
        Mode::Affine => vec![(None, x.ideal().clone())],
        Mode::Projective => {
            (0..x.ring().nvars()).map(|i| Ok((Some(i), x.dehomogenized_chart(i)?))).collect::<Result<_>>()?
        }
    };
    for (label, ideal) in charts {
        let vars: Vec<usize> = (0..ideal.ring().nvars()).collect();
        let minors = jacobian_minors(ideal.ring(), ideal.gens(), &vars, codim);
        let sing = ideal.with(minors)?;
        if !sing.is_inconsistent(budget)? {
            return Ok(Smoothness { smooth: false, singular_chart: Some(label) });
        }
    }
    Ok(Smoothness { smooth: true, singular_chart: None })
}

/// Number of standard monomials of a zero-dimensional basis; `None` if the
/// quotient is not finite-dimensional.
pub fn count_standard_monomials(gb: &GBReport, nvars: usize) -> Option<u64> {
    if gb.is_unit() {
        return Some(0);
    }
    let lms: Vec<Monomial> = gb.basis.iter().map(|g| g.leading(gb.order).unwrap().0.clone()).collect();
    for v in 0..nvars {
        if !lms.iter().any(|m| m.support().all(|s| s == v)) {
            return None;
        }
    }
    let mut count = 0u64;
    let mut stack = vec![Monomial::one()];
    let mut seen = BTreeSet::new();
    while let Some(m) = stack.pop() {
        if !seen.insert(m.clone()) || lms.iter().any(|l| l.divides(&m)) {
            continue;
        }
        count += 1;
        for v in 0..nvars {
            stack.push(m.mul(&Monomial::var(v, 1)));
        }
    }
    Some(count)
}

/// Degree measured by slicing with generic hyperplanes drawn from a seeded
/// generator and counting solutions with multiplicity.
pub fn measured_degree(x: &Variety, seed: u64, budget: &Budget) -> Result<Option<u64>> {
    let Some(dim) = x.dimension(budget)? else { return Ok(Some(0)) };
    let r = x.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rand_linear = |constant: bool| {
        let mut p = r.zero();
        for v in 0..r.nvars() {
            let c: i64 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
            p = &p + &(&r.var(v) * &r.int(c));
        }
        if constant {
            p = &p + &r.int(rng.gen_range(-9..=9));
        }
        p
    };
    let mut extra = Vec::new();
    match x.mode() {
        Mode::Affine => {
            for _ in 0..dim {
                extra.push(rand_linear(true));
            }
        }
        Mode::Projective => {
            for _ in 0..dim {
                extra.push(rand_linear(false));
            }
            let l = rand_linear(false);
            extra.push(&l - &r.one());
        }
    }
    let sliced = x.ideal().with(extra)?;
    let gb = sliced.groebner(MonomialOrder::GrevLex, budget)?;
    Ok(count_standard_monomials(&gb, r.nvars()))
}
