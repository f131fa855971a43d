//! Buchberger's algorithm with the normal selection strategy and the
//! Gebauer–Möller pair update (coprime and chain criteria).

use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::{Budget, GBReport};
use crate::error::{BudgetExceeded, Result};
use crate::polyring::{Coeff, Field, Monomial, MonomialOrder, Polynomial, Ring};

/// Terms sorted by decreasing monomial order; the first entry is the leading term.
pub(crate) type Terms = Vec<(Monomial, Coeff)>;

pub(crate) fn to_terms(p: &Polynomial, order: MonomialOrder) -> Terms {
    p.sorted_terms(order)
}

pub(crate) fn from_terms(ring: &Ring, t: Terms) -> Polynomial {
    ring.from_terms(t)
}

/// `a - c * m * b`, both inputs sorted.
fn sub_scaled(a: &Terms, c: &Coeff, m: &Monomial, b: &Terms, field: Field, order: MonomialOrder) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    let mut shifted: Option<(Monomial, Coeff)> = None;
    loop {
        if shifted.is_none() && j < b.len() {
            shifted = Some((b[j].0.mul(m), field.mul(c, &b[j].1)));
            j += 1;
        }
        match (a.get(i), shifted.as_ref()) {
            (None, None) => break,
            (Some(x), None) => {
                out.push(x.clone());
                i += 1;
            }
            (None, Some(_)) => {
                let (mm, cc) = shifted.take().unwrap();
                out.push((mm, field.neg(&cc)));
            }
            (Some(x), Some(y)) => match order.cmp(&x.0, &y.0) {
                Ordering::Greater => {
                    out.push(x.clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (mm, cc) = shifted.take().unwrap();
                    out.push((mm, field.neg(&cc)));
                }
                Ordering::Equal => {
                    let (mm, cc) = shifted.take().unwrap();
                    let s = field.sub(&x.1, &cc);
                    if !s.is_zero() {
                        out.push((mm, s));
                    }
                    i += 1;
                }
            },
        }
    }
    out
}

fn make_monic(t: &mut Terms, field: Field) {
    if let Some((_, lc)) = t.first() {
        if !lc.is_one() {
            let inv = field.inv(lc).unwrap();
            for e in t.iter_mut() {
                e.1 = field.mul(&e.1, &inv);
            }
        }
    }
}

/// Reduce `p` by the monic polynomials in `basis`. With `full`, tail terms are
/// reduced too; otherwise reduction stops at the first irreducible leading term.
pub(crate) fn reduce(
    mut p: Terms,
    basis: &[&Terms],
    field: Field,
    order: MonomialOrder,
    full: bool,
    max_terms: usize,
) -> Result<Terms> {
    let mut rem: Terms = Vec::new();
    // `p` is consumed from the front; `start` avoids O(n) removals.
    let mut start = 0;
    while start < p.len() {
        let (m, c) = p[start].clone();
        let reducer = basis.iter().find(|g| g[0].0.divides(&m));
        match reducer {
            Some(g) => {
                let q = g[0].0.quotient_of(&m).unwrap();
                let tail: Terms = p[start..].to_vec();
                p = sub_scaled(&tail, &c, &q, g, field, order);
                start = 0;
                if p.len() > max_terms {
                    return Err(BudgetExceeded::Terms { limit: max_terms, reached: p.len() }.into());
                }
            }
            None => {
                if !full {
                    let mut out = p.split_off(start);
                    rem.append(&mut out);
                    return Ok(rem);
                }
                rem.push((m, c));
                start += 1;
            }
        }
    }
    Ok(rem)
}

fn spoly(f: &Terms, g: &Terms, field: Field, order: MonomialOrder) -> Terms {
    let l = f[0].0.lcm(&g[0].0);
    let mf = f[0].0.quotient_of(&l).unwrap();
    let mg = g[0].0.quotient_of(&l).unwrap();
    // both monic: S = mf*f - mg*g
    let a = sub_scaled(&Vec::new(), &field.neg(&Coeff::one()), &mf, f, field, order);
    sub_scaled(&a, &Coeff::one(), &mg, g, field, order)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn degree_of(t: &Terms) -> u32 {
    t.iter().map(|e| e.0.degree()).max().unwrap_or(0)
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `order`.
pub fn groebner(ring: &Ring, gens: &[Polynomial], order: MonomialOrder, budget: &Budget) -> Result<GBReport> {
    let field = ring.field();
    let mut polys: Vec<Terms> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut processed = 0usize;
    let mut max_deg = 0u32;

    let unit = |ring: &Ring, processed, max_deg| GBReport {
        basis: vec![ring.one()],
        order,
        s_pairs_processed: processed,
        max_intermediate_degree: max_deg,
    };

    let mut inputs: Vec<Terms> = gens.iter().filter(|g| !g.is_zero()).map(|g| to_terms(g, order)).collect();
    inputs.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let mut queue: Vec<Terms> = inputs;
    loop {
        // insert pending polynomials (inputs first, then reduced S-polynomials)
        while let Some(t) = queue.pop() {
            let basis: Vec<&Terms> = active.iter().map(|&k| &polys[k]).collect();
            let mut h = reduce(t, &basis, field, order, false, budget.max_terms)?;
            if h.is_empty() {
                continue;
            }
            max_deg = max_deg.max(degree_of(&h));
            if max_deg > budget.max_degree {
                return Err(BudgetExceeded::Degree { limit: budget.max_degree, reached: max_deg }.into());
            }
            if h[0].0.is_one() {
                return Ok(unit(ring, processed, max_deg));
            }
            make_monic(&mut h, field);
            polys.push(h);
            let hi = polys.len() - 1;
            update(&polys, &mut active, &mut pairs, hi);
        }
        if pairs.is_empty() {
            break;
        }
        // normal strategy: smallest lcm first, ties broken by the order then by index
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pairs[a], &pairs[b]);
                pa.lcm
                    .degree()
                    .cmp(&pb.lcm.degree())
                    .then_with(|| order.cmp(&pa.lcm, &pb.lcm))
                    .then_with(|| (pa.i, pa.j).cmp(&(pb.i, pb.j)))
            })
            .unwrap();
        let p = pairs.swap_remove(best);
        processed += 1;
        if processed > budget.max_spairs {
            return Err(BudgetExceeded::SPairs { limit: budget.max_spairs }.into());
        }
        if p.lcm.degree() > budget.max_degree {
            return Err(BudgetExceeded::Degree { limit: budget.max_degree, reached: p.lcm.degree() }.into());
        }
        let s = spoly(&polys[p.i], &polys[p.j], field, order);
        if !s.is_empty() {
            queue.push(s);
        }
    }

    // minimal, then fully interreduced basis
    let mut minimal: Vec<usize> = Vec::new();
    for &k in &active {
        let lm = &polys[k][0].0;
        let dominated = active.iter().any(|&o| {
            o != k && polys[o][0].0.divides(lm) && (polys[o][0].0 != *lm || o < k)
        });
        if !dominated {
            minimal.push(k);
        }
    }
    let mut reduced: Vec<Terms> = Vec::with_capacity(minimal.len());
    for &k in &minimal {
        let others: Vec<&Terms> = minimal.iter().filter(|&&o| o != k).map(|&o| &polys[o]).collect();
        let head = polys[k][0].clone();
        let tail = polys[k][1..].to_vec();
        let mut r = reduce(tail, &others, field, order, true, budget.max_terms)?;
        let mut t = vec![head];
        t.append(&mut r);
        reduced.push(t);
    }
    reduced.sort_by(|a, b| order.cmp(&b[0].0, &a[0].0));
    Ok(GBReport {
        basis: reduced.into_iter().map(|t| from_terms(ring, t)).collect(),
        order,
        s_pairs_processed: processed,
        max_intermediate_degree: max_deg,
    })
}

/// Gebauer–Möller installation of the new element `h`.
fn update(polys: &[Terms], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: usize) {
    let lh = &polys[h][0].0;
    let mut c: Vec<(usize, Monomial)> =
        active.iter().map(|&g| (g, lh.lcm(&polys[g][0].0))).collect();
    let mut d: Vec<(usize, Monomial)> = Vec::new();
    while let Some((g1, l1)) = c.pop() {
        let coprime = lh.coprime(&polys[g1][0].0);
        let covered = c.iter().chain(d.iter()).any(|(_, l2)| l2.divides(&l1));
        if coprime || !covered {
            d.push((g1, l1));
        }
    }
    let e: Vec<(usize, Monomial)> =
        d.into_iter().filter(|(g, _)| !lh.coprime(&polys[*g][0].0)).collect();
    pairs.retain(|p| {
        !lh.divides(&p.lcm)
            || lh.lcm(&polys[p.i][0].0) == p.lcm
            || lh.lcm(&polys[p.j][0].0) == p.lcm
    });
    for (g, l) in e {
        pairs.push(Pair { i: g, j: h, lcm: l });
    }
    active.retain(|&g| !lh.divides(&polys[g][0].0));
    active.push(h);
}

/// Full normal form of `p` against a reduced basis.
pub fn normal_form(p: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let ts: Vec<Terms> = basis.iter().filter(|b| !b.is_zero()).map(|b| {
        let mut t = to_terms(b, order);
        make_monic(&mut t, p.field());
        t
    }).collect();
    let refs: Vec<&Terms> = ts.iter().collect();
    let r = reduce(to_terms(p, order), &refs, p.field(), order, true, usize::MAX)
        .expect("unbounded reduction");
    from_terms(p.ring(), r)
}

/// S-polynomial of two polynomials (after making them monic).
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Polynomial {
    let field = f.field();
    let mut a = to_terms(f, order);
    let mut b = to_terms(g, order);
    make_monic(&mut a, field);
    make_monic(&mut b, field);
    from_terms(f.ring(), spoly(&a, &b, field, order))
}
