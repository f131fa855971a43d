//! Gröbner bases and the ideal-theoretic decisions built on them.

mod buchberger;
mod points;

use std::cell::Cell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

pub use buchberger::{groebner, normal_form, s_polynomial};
pub use points::{find_rational_point, rational_roots};

use crate::error::{Error, Result};
use crate::polyring::{MonomialOrder, Polynomial, Ring};

/// Resource caps for a single Gröbner computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_spairs: usize,
    pub max_degree: u32,
    pub max_terms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_spairs: 4000, max_degree: 40, max_terms: 4000 }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { max_spairs: usize::MAX, max_degree: u32::MAX, max_terms: usize::MAX }
    }
}

/// Work done by Gröbner computations on the current thread since the last
/// [`meter_reset`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Spent {
    pub groebner_runs: u64,
    pub s_pairs: u64,
    pub max_degree: u32,
}

thread_local! {
    static METER: Cell<Spent> = Cell::new(Spent::default());
}

pub fn meter_reset() {
    METER.with(|m| m.set(Spent::default()));
}

pub fn meter_read() -> Spent {
    METER.with(|m| m.get())
}

fn meter_record(r: &GBReport) {
    METER.with(|m| {
        let mut s = m.get();
        s.groebner_runs += 1;
        s.s_pairs += r.s_pairs_processed as u64;
        s.max_degree = s.max_degree.max(r.max_intermediate_degree);
        m.set(s);
    });
}

/// Result of a Gröbner computation.
#[derive(Clone, Debug)]
pub struct GBReport {
    /// Reduced, monic, sorted by decreasing leading monomial.
    pub basis: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub s_pairs_processed: usize,
    pub max_intermediate_degree: u32,
}

impl GBReport {
    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant() && !self.basis[0].is_zero()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        normal_form(p, &self.basis, self.order)
    }
}

/// Ideal given by generators, with reduced bases cached per order.
/// An empty generator list is the zero ideal.
pub struct Ideal {
    ring: Ring,
    gens: Vec<Polynomial>,
    cache: Mutex<HashMap<MonomialOrder, Arc<GBReport>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "Ideal({})", gens.join(", "))
    }
}

impl Ideal {
    pub fn new(ring: &Ring, gens: impl IntoIterator<Item = Polynomial>) -> Result<Self> {
        let mut out = Vec::new();
        for g in gens {
            if g.ring() != ring {
                return Err(if g.field() != ring.field() { Error::FieldMismatch } else { Error::VariableMismatch });
            }
            if !g.is_zero() && !out.contains(&g) {
                out.push(g);
            }
        }
        Ok(Ideal { ring: ring.clone(), gens: out, cache: Mutex::new(HashMap::new()) })
    }

    pub fn zero(ring: &Ring) -> Self {
        Ideal { ring: ring.clone(), gens: Vec::new(), cache: Mutex::new(HashMap::new()) }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// Ideal with extra generators appended.
    pub fn with(&self, extra: impl IntoIterator<Item = Polynomial>) -> Result<Ideal> {
        Ideal::new(&self.ring, self.gens.iter().cloned().chain(extra))
    }

    /// Same generators viewed in a ring that contains all occurring variables.
    pub fn embed(&self, target: &Ring) -> Result<Ideal> {
        let gens = self.gens.iter().map(|g| g.embed(target)).collect::<Result<Vec<_>>>()?;
        Ideal::new(target, gens)
    }

    pub fn groebner(&self, order: MonomialOrder, budget: &crate::groebner::Budget) -> Result<Arc<GBReport>> {
        if let Some(r) = self.cache.lock().unwrap().get(&order) {
            return Ok(r.clone());
        }
        let r = Arc::new(groebner(&self.ring, &self.gens, order, budget)?);
        meter_record(&r);
        self.cache.lock().unwrap().insert(order, r.clone());
        Ok(r)
    }

    pub fn normal_form(&self, p: &Polynomial, order: MonomialOrder, budget: &Budget) -> Result<Polynomial> {
        Ok(self.groebner(order, budget)?.normal_form(&p.embed(&self.ring)?))
    }

    pub fn contains(&self, p: &Polynomial, budget: &Budget) -> Result<bool> {
        if p.is_zero() {
            return Ok(true);
        }
        if self.gens.is_empty() {
            return Ok(false);
        }
        Ok(self.normal_form(p, MonomialOrder::GrevLex, budget)?.is_zero())
    }

    pub fn contains_all(&self, ps: &[Polynomial], budget: &Budget) -> Result<bool> {
        for p in ps {
            if !self.contains(p, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True iff 1 ∈ I, i.e. V(I) is empty over the algebraic closure.
    pub fn is_inconsistent(&self, budget: &Budget) -> Result<bool> {
        if self.gens.is_empty() {
            return Ok(false);
        }
        if self.gens.iter().any(|g| g.is_constant()) {
            return Ok(true);
        }
        Ok(self.groebner(MonomialOrder::GrevLex, budget)?.is_unit())
    }

    /// I + (1 - t·h) in the ring extended by a fresh variable `t`.
    /// Returns the chart ideal and the index of `t`.
    pub fn saturation_chart(&self, h: &Polynomial, stem: &str) -> Result<(Ideal, usize)> {
        let t_name = self.ring.vars().fresh_name(stem);
        let ring = self.ring.extended(&[t_name.as_str()])?;
        let t = ring.nvars() - 1;
        let h = h.embed(&ring)?;
        let chart = &ring.one() - &(&ring.var(t) * &h);
        let gens = self.gens.iter().map(|g| g.embed(&ring)).collect::<Result<Vec<_>>>()?;
        Ok((Ideal::new(&ring, gens.into_iter().chain(std::iter::once(chart)))?, t))
    }

    /// True iff V(I) ⊆ V(h), via the Rabinowitsch trick.
    pub fn radical_contains(&self, h: &Polynomial, budget: &Budget) -> Result<bool> {
        let h = h.embed(&self.ring)?;
        if h.is_zero() {
            return Ok(true);
        }
        if self.contains(&h, budget)? {
            return Ok(true);
        }
        let (chart, _) = self.saturation_chart(&h, "a")?;
        chart.is_inconsistent(budget)
    }

    pub fn radical_contains_all(&self, hs: &[Polynomial], budget: &Budget) -> Result<bool> {
        for h in hs {
            if !self.radical_contains(h, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// I ∩ k[keep], as an ideal of the same ring whose generators only use `keep`.
    pub fn eliminate(&self, keep: &[usize], budget: &Budget) -> Result<Ideal> {
        let n = self.ring.nvars();
        let drop: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
        if drop.is_empty() {
            return Ok(self.clone());
        }
        let kept: Vec<usize> = (0..n).filter(|i| keep.contains(i)).collect();
        let perm: Vec<usize> = drop.iter().chain(kept.iter()).copied().collect();
        let names: Vec<&str> = perm.iter().map(|&i| self.ring.vars().name(i)).collect();
        let pring = Ring::with_names(&names, self.ring.field())?;
        let moved = self.embed(&pring)?;
        let gb = moved.groebner(MonomialOrder::Block(drop.len()), budget)?;
        let k = drop.len();
        let gens = gb
            .basis
            .iter()
            .filter(|g| g.uses_only(|v| v >= k))
            .map(|g| g.embed(&self.ring))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(&self.ring, gens)
    }

    /// Elimination keeping the named variables, returned in `target`.
    pub fn eliminate_to(&self, target: &Ring, budget: &Budget) -> Result<Ideal> {
        let keep = target
            .vars()
            .names()
            .iter()
            .filter_map(|n| self.ring.vars().index(n))
            .collect::<Vec<_>>();
        self.eliminate(&keep, budget)?.embed(target)
    }

    /// Krull dimension of V(I) in affine space; `None` when V(I) is empty.
    pub fn dimension(&self, budget: &Budget) -> Result<Option<usize>> {
        let n = self.ring.nvars();
        if self.gens.is_empty() {
            return Ok(Some(n));
        }
        let gb = self.groebner(MonomialOrder::GrevLex, budget)?;
        if gb.is_unit() {
            return Ok(None);
        }
        let masks: Vec<Vec<usize>> = gb
            .basis
            .iter()
            .map(|g| g.leading(MonomialOrder::GrevLex).unwrap().0.support().collect())
            .collect();
        Ok(Some(max_independent(n, &masks)))
    }
}

/// Size of a largest variable set containing no leading-monomial support.
fn max_independent(n: usize, supports: &[Vec<usize>]) -> usize {
    fn go(k: usize, n: usize, chosen: &mut Vec<bool>, size: usize, best: &mut usize, sup: &[Vec<usize>]) {
        if size + (n - k) <= *best {
            return;
        }
        if k == n {
            *best = size;
            return;
        }
        chosen[k] = true;
        let ok = sup.iter().all(|s| !s.iter().all(|&v| v <= k && chosen[v]));
        if ok {
            go(k + 1, n, chosen, size + 1, best, sup);
        }
        chosen[k] = false;
        go(k + 1, n, chosen, size, best, sup);
    }
    let mut best = 0;
    go(0, n, &mut vec![false; n], 0, &mut best, supports);
    best
}
