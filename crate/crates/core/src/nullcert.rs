//! Nullstellensatz certificates `1 = τ·(1 - a·h) + Σ τ_i·h_i` found by
//! coefficient balancing at increasing cofactor degree.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::groebner::{find_rational_point, Budget, Ideal};
use crate::linalg::LinearSystem;
use crate::polyring::{monomials_up_to, Coeff, Monomial, Polynomial, Ring};

/// Does V(h_1, …, h_k) lie inside V(h)? Asked up to cofactor degree `max_degree`.
#[derive(Clone, Debug)]
pub struct CertificateQuery {
    pub generators: Vec<Polynomial>,
    pub target: Polynomial,
    pub max_degree: u32,
}

impl CertificateQuery {
    pub fn new(generators: Vec<Polynomial>, target: Polynomial, max_degree: u32) -> Self {
        CertificateQuery { generators, target, max_degree }
    }

    pub fn base_ring(&self) -> &Ring {
        self.target.ring()
    }

    /// The base ring extended by the fresh variable `a`, and the index of `a`.
    pub fn extended_ring(&self) -> Result<(Ring, usize)> {
        let base = self.base_ring();
        let a = base.vars().fresh_name("a");
        let ring = base.extended(&[a.as_str()])?;
        let idx = ring.nvars() - 1;
        Ok((ring, idx))
    }
}

/// Cofactors in the base ring extended by `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub tau: Polynomial,
    pub cofactors: Vec<Polynomial>,
    pub degree: u32,
}

impl Certificate {
    pub fn ring(&self) -> &Ring {
        self.tau.ring()
    }
}

/// The first certificate found for D = 0, 1, …, `max_degree`, where D bounds the
/// total degree (including `a`) of every cofactor. `None` is an inconclusive
/// outcome, not a disproof.
pub fn find_certificate(q: &CertificateQuery) -> Result<Option<Certificate>> {
    let (ring, a) = q.extended_ring()?;
    let h = q.target.embed(&ring)?;
    let rab = &ring.one() - &(&ring.var(a) * &h);
    let mut polys = vec![rab];
    for g in &q.generators {
        polys.push(g.embed(&ring)?);
    }
    let all_vars: Vec<usize> = (0..ring.nvars()).collect();
    for d in 0..=q.max_degree {
        let monos = monomials_up_to(&all_vars, d);
        let ncols = monos.len() * polys.len();
        let mut rows: BTreeMap<Monomial, Vec<(usize, Coeff)>> = BTreeMap::new();
        for (k, p) in polys.iter().enumerate() {
            for (j, m) in monos.iter().enumerate() {
                let col = k * monos.len() + j;
                for (t, c) in p.terms() {
                    rows.entry(m.mul(t)).or_default().push((col, c.clone()));
                }
            }
        }
        let one = Monomial::one();
        if !rows.contains_key(&one) {
            continue;
        }
        let mut sys = LinearSystem::new(ring.field(), ncols);
        for (m, row) in rows {
            let rhs = if m == one { Coeff::one() } else { Coeff::zero() };
            sys.push(row, rhs);
        }
        if let Some(x) = sys.solve() {
            let mut parts = Vec::with_capacity(polys.len());
            for k in 0..polys.len() {
                let terms = monos
                    .iter()
                    .enumerate()
                    .map(|(j, m)| (m.clone(), x[k * monos.len() + j].clone()))
                    .filter(|(_, c)| !c.is_zero());
                parts.push(ring.from_terms(terms));
            }
            let tau = parts.remove(0);
            return Ok(Some(Certificate { tau, cofactors: parts, degree: d }));
        }
    }
    Ok(None)
}

/// Expand the certificate identity exactly and compare with 1.
pub fn verify_certificate(q: &CertificateQuery, c: &Certificate) -> bool {
    let check = || -> Result<bool> {
        let (ring, a) = q.extended_ring()?;
        if c.cofactors.len() != q.generators.len() || c.tau.ring() != &ring {
            return Ok(false);
        }
        let h = q.target.embed(&ring)?;
        let mut acc = c.tau.try_mul(&(&ring.one() - &(&ring.var(a) * &h)))?;
        for (t, g) in c.cofactors.iter().zip(&q.generators) {
            acc = acc.try_add(&t.try_mul(&g.embed(&ring)?)?)?;
        }
        Ok(acc == ring.one())
    };
    check().unwrap_or(false)
}

/// Outcome of a containment question V(I) ⊆ V(h).
#[derive(Clone, Debug)]
pub enum Containment {
    /// Holds. The certificate is absent when only the Gröbner test succeeded
    /// within the budget.
    Yes(Option<Certificate>),
    /// Fails; `point` is a base-field point of V(I) off V(h) when one was found.
    No { point: Option<Vec<Coeff>> },
    Inconclusive(String),
}

/// Certificate search first, then the Rabinowitsch consistency test.
pub fn certify_containment(ideal: &Ideal, h: &Polynomial, max_degree: u32, budget: &Budget) -> Result<Containment> {
    let q = CertificateQuery::new(ideal.gens().to_vec(), h.embed(ideal.ring())?, max_degree);
    if let Some(c) = find_certificate(&q)? {
        return Ok(Containment::Yes(Some(c)));
    }
    match ideal.radical_contains(h, budget) {
        Ok(true) => Ok(Containment::Yes(None)),
        Ok(false) => {
            let (chart, t) = ideal.saturation_chart(h, "a")?;
            let point = find_rational_point(&chart, budget).ok().flatten().map(|mut p| {
                p.remove(t);
                p
            });
            Ok(Containment::No { point })
        }
        Err(e) if e.is_inconclusive() => Ok(Containment::Inconclusive(format!(
            "no certificate up to degree {max_degree}; {e}"
        ))),
        Err(e) => Err(e),
    }
}
