//! Search for points with coordinates in the base field, used to attach
//! concrete counterexamples to negative verdicts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Budget, Ideal};
use crate::error::Result;
use crate::polyring::{Coeff, Field, MonomialOrder, Polynomial};

const MAX_NODES: usize = 4000;
const FREE_VALUES: [i64; 7] = [0, 1, -1, 2, -2, 3, 5];

/// A point of V(I) with coordinates in the base field, if one is found by
/// back-substitution through a lexicographic basis. `None` means no point was
/// found, not that none exists.
pub fn find_rational_point(ideal: &Ideal, budget: &Budget) -> Result<Option<Vec<Coeff>>> {
    let n = ideal.ring().nvars();
    if ideal.gens().is_empty() {
        return Ok(Some(vec![Coeff::zero(); n]));
    }
    let gb = ideal.groebner(MonomialOrder::Lex, budget)?;
    if gb.is_unit() {
        return Ok(None);
    }
    let mut levels: Vec<Vec<&Polynomial>> = vec![Vec::new(); n];
    for g in &gb.basis {
        if let Some(&k) = g.support().first() {
            levels[k].push(g);
        }
    }
    let field = ideal.ring().field();
    let mut point = vec![Coeff::zero(); n];
    let mut nodes = 0;
    if n == 0 || search(n - 1, &levels, field, &mut point, &mut nodes) {
        for g in ideal.gens() {
            if !g.evaluate(&point)?.is_zero() {
                return Ok(None);
            }
        }
        return Ok(Some(point));
    }
    Ok(None)
}

fn search(k: usize, levels: &[Vec<&Polynomial>], field: Field, point: &mut Vec<Coeff>, nodes: &mut usize) -> bool {
    *nodes += 1;
    if *nodes > MAX_NODES {
        return false;
    }
    let mut gcd: Option<Vec<Coeff>> = None;
    for g in &levels[k] {
        let known: Vec<(usize, Coeff)> = ((k + 1)..point.len()).map(|i| (i, point[i].clone())).collect();
        let u = g.substitute_values(&known);
        if u.is_zero() {
            continue;
        }
        let dense = univariate(&u, k);
        if dense.len() == 1 {
            return false;
        }
        gcd = Some(match gcd {
            None => dense,
            Some(prev) => poly_gcd(&prev, &dense, field),
        });
        if gcd.as_ref().unwrap().len() == 1 {
            return false;
        }
    }
    let candidates: Vec<Coeff> = match gcd {
        Some(u) => rational_roots(&u, field),
        None => FREE_VALUES.iter().map(|&v| field.from_i64(v)).collect(),
    };
    for c in candidates {
        point[k] = c;
        if k == 0 || search(k - 1, levels, field, point, nodes) {
            return true;
        }
    }
    point[k] = Coeff::zero();
    false
}

fn univariate(p: &Polynomial, var: usize) -> Vec<Coeff> {
    let deg = p.degree_in(var) as usize;
    let mut out = vec![Coeff::zero(); deg + 1];
    for (m, c) in p.terms() {
        out[m.exp(var) as usize] = c.clone();
    }
    out
}

fn trim(mut a: Vec<Coeff>) -> Vec<Coeff> {
    while a.len() > 1 && a.last().unwrap().is_zero() {
        a.pop();
    }
    a
}

fn poly_rem(a: &[Coeff], b: &[Coeff], field: Field) -> Vec<Coeff> {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    if db == 0 {
        return vec![Coeff::zero()];
    }
    let lead_inv = field.inv(&b[db]).unwrap();
    let mut r = trim(a.to_vec());
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - 1 - db;
        let q = field.mul(r.last().unwrap(), &lead_inv);
        for i in 0..=db {
            let t = field.mul(&q, &b[i]);
            r[shift + i] = field.sub(&r[shift + i], &t);
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(Coeff::zero());
        }
    }
    r
}

fn poly_gcd(a: &[Coeff], b: &[Coeff], field: Field) -> Vec<Coeff> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = poly_rem(&a, &b, field);
        a = b;
        b = r;
    }
    a
}

/// Roots in the base field of a dense univariate polynomial (ascending powers).
/// Over ℚ this is the rational root test; over 𝔽_p small fields are scanned
/// exhaustively and large ones only at small residues.
pub fn rational_roots(u: &[Coeff], field: Field) -> Vec<Coeff> {
    let u = trim(u.to_vec());
    if u.len() <= 1 {
        return Vec::new();
    }
    let eval = |x: &Coeff| {
        let mut acc = Coeff::zero();
        for c in u.iter().rev() {
            acc = field.add(&field.mul(&acc, x), c);
        }
        acc
    };
    let mut out: Vec<Coeff> = Vec::new();
    match field {
        Field::Prime(p) => {
            let range: Box<dyn Iterator<Item = i64>> =
                if p <= 100_000 { Box::new(0..p as i64) } else { Box::new(-50..=50) };
            for v in range {
                let x = field.from_i64(v);
                if eval(&x).is_zero() && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        Field::Rational => {
            let den_lcm = u.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> = u.iter().map(|c| (c * Coeff::from_integer(den_lcm.clone())).to_integer()).collect();
            let low = ints.iter().position(|c| !c.is_zero()).unwrap();
            if low > 0 {
                out.push(Coeff::zero());
            }
            let a0 = ints[low].abs();
            let an = ints.last().unwrap().abs();
            let ps = divisors(&a0);
            let qs = divisors(&an);
            for p in &ps {
                for q in &qs {
                    for s in [1, -1] {
                        let x = Coeff::new(p * BigInt::from(s), q.clone());
                        if !out.contains(&x) && eval(&x).is_zero() {
                            out.push(x);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Positive divisors found by trial division up to 10^6 (with cofactors).
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    if let Some(v) = n.to_u128() {
        let mut i: u128 = 1;
        while i * i <= v && i <= 1_000_000 {
            if v % i == 0 {
                out.push(BigInt::from(i));
                if i * i != v {
                    out.push(BigInt::from(v / i));
                }
            }
            i += 1;
        }
    } else {
        out.push(BigInt::one());
        out.push(n.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{ratio, Ring};

    #[test]
    fn roots_of_rational_polynomials() {
        let f = Field::Rational;
        // 2x^2 - 3x + 1 = (2x - 1)(x - 1)
        let u = vec![f.from_i64(1), f.from_i64(-3), f.from_i64(2)];
        assert_eq!(rational_roots(&u, f), vec![ratio(1, 2), ratio(1, 1)]);
        // x^2 + 1 has none
        assert!(rational_roots(&[f.from_i64(1), f.from_i64(0), f.from_i64(1)], f).is_empty());
        // over F_5, x^2 + 1 = (x - 2)(x - 3)
        let p = Field::Prime(5);
        assert_eq!(rational_roots(&[p.from_i64(1), p.from_i64(0), p.from_i64(1)], p), vec![ratio(2, 1), ratio(3, 1)]);
    }

    #[test]
    fn finds_points() {
        let r = Ring::with_names(&["x", "y"], Field::Rational).unwrap();
        let i = Ideal::new(&r, [r.parse("x^2 - 2*y").unwrap(), r.parse("y - 2").unwrap()]).unwrap();
        let p = find_rational_point(&i, &Budget::default()).unwrap().unwrap();
        assert_eq!(p[1], ratio(2, 1));
        assert_eq!(p[0].abs(), ratio(2, 1));
        let curve = Ideal::new(&r, [r.parse("x*y - 1").unwrap()]).unwrap();
        assert!(find_rational_point(&curve, &Budget::default()).unwrap().is_some());
        let irr = Ideal::new(&r, [r.parse("x^2 - 2").unwrap()]).unwrap();
        assert!(find_rational_point(&irr, &Budget::default()).unwrap().is_none());
    }
}
