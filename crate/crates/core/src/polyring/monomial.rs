use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered list of distinct variable names shared by every polynomial of a ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableSet {
    names: Vec<String>,
}

impl VariableSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(Error::Input(format!("`{n}` is not a valid variable name")));
            }
            if names[..i].contains(n) {
                return Err(Error::Input(format!("duplicate variable `{n}`")));
            }
        }
        Ok(Arc::new(VariableSet { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// A new set with `extra` appended. Names already present are kept once.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Arc<Self>> {
        let mut names = self.names.clone();
        for e in extra {
            if !names.iter().any(|n| n == e.as_ref()) {
                names.push(e.as_ref().to_string());
            }
        }
        VariableSet::new(&names)
    }

    /// A name of the form `{stem}`, `{stem}_1`, ... not yet used in this set.
    pub fn fresh_name(&self, stem: &str) -> String {
        if self.index(stem).is_none() {
            return stem.to_string();
        }
        (1..)
            .map(|i| format!("{stem}_{i}"))
            .find(|n| self.index(n).is_none())
            .unwrap()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Power product, stored sparsely as `(variable index, exponent)` pairs sorted
/// by index with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(i as u32, e)])
        }
    }

    pub fn from_dense(exps: &[u32]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| (i as u32, *e))
                .collect(),
        )
    }

    pub(crate) fn from_sparse(mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.retain(|p| p.1 > 0);
        pairs.sort_unstable();
        Monomial(pairs)
    }

    pub fn dense(&self, n: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        for &(i, e) in &self.0 {
            v[i as usize] = e;
        }
        v
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0
            .binary_search_by_key(&(i as u32), |p| p.0)
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn degree_in(&self, pred: impl Fn(usize) -> bool) -> u32 {
        self.0.iter().filter(|p| pred(p.0 as usize)).map(|p| p.1).sum()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|p| p.0 as usize)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        let mut j = 0;
        let b = &other.0;
        for &(v, e) in &self.0 {
            while j < b.len() && b[j].0 < v {
                j += 1;
            }
            if j == b.len() || b[j].0 != v || b[j].1 < e {
                return false;
            }
        }
        true
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut out = Vec::with_capacity(other.0.len());
        let mut i = 0;
        for &(v, e) in &other.0 {
            while i < self.0.len() && self.0[i].0 < v {
                i += 1;
            }
            let d = if i < self.0.len() && self.0[i].0 == v { self.0[i].1 } else { 0 };
            if e > d {
                out.push((v, e - d));
            }
        }
        Some(Monomial(out))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1.max(b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    pub(crate) fn remap(&self, map: &[u32]) -> Monomial {
        Monomial::from_sparse(self.0.iter().map(|&(v, e)| (map[v as usize], e)).collect())
    }
}

/// Term order used by Gröbner computations and leading-term queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Variables with index `< k` form a block that dominates the rest;
    /// graded reverse lex inside each block.
    Block(usize),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::GrevLex => grevlex_in(a, b, 0, u32::MAX),
            MonomialOrder::Block(k) => {
                let k = *k as u32;
                grevlex_in(a, b, 0, k).then_with(|| grevlex_in(a, b, k, u32::MAX))
            }
        }
    }
}

fn lex(a: &Monomial, b: &Monomial) -> Ordering {
    let (a, b) = (&a.0, &b.0);
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if x.1 != y.1 {
                        return x.1.cmp(&y.1);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

/// Graded reverse lex restricted to variables with index in `[lo, hi)`.
fn grevlex_in(a: &Monomial, b: &Monomial, lo: u32, hi: u32) -> Ordering {
    let inr = |p: &&(u32, u32)| p.0 >= lo && p.0 < hi;
    let da: u32 = a.0.iter().filter(inr).map(|p| p.1).sum();
    let db: u32 = b.0.iter().filter(inr).map(|p| p.1).sum();
    if da != db {
        return da.cmp(&db);
    }
    let av: Vec<&(u32, u32)> = a.0.iter().filter(inr).collect();
    let bv: Vec<&(u32, u32)> = b.0.iter().filter(inr).collect();
    let (mut i, mut j) = (av.len(), bv.len());
    loop {
        match (i.checked_sub(1).map(|k| av[k]), j.checked_sub(1).map(|k| bv[k])) {
            (None, None) => return Ordering::Equal,
            // the side that still has a variable carries a larger exponent in the
            // last differing position, so it is smaller
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                Ordering::Greater => return Ordering::Less,
                Ordering::Less => return Ordering::Greater,
                Ordering::Equal => {
                    if x.1 != y.1 {
                        return y.1.cmp(&x.1);
                    }
                    i -= 1;
                    j -= 1;
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_dense(e)
    }

    #[test]
    fn grevlex_textbook_cases() {
        let o = MonomialOrder::GrevLex;
        // x^2 y z^2 vs x y^3 z (both degree 5): last variable z: 2 > 1 so first is smaller
        assert_eq!(o.cmp(&m(&[2, 1, 2]), &m(&[1, 3, 1])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 1, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 0, 2]), &m(&[1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn lex_and_block() {
        assert_eq!(MonomialOrder::Lex.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        let b = MonomialOrder::Block(1);
        assert_eq!(b.cmp(&m(&[1, 0, 0]), &m(&[0, 7, 3])), Ordering::Greater);
        assert_eq!(b.cmp(&m(&[0, 1, 0]), &m(&[0, 0, 1])), Ordering::Greater);
    }

    #[test]
    fn divisibility() {
        assert!(m(&[1, 1]).divides(&m(&[2, 1])));
        assert!(!m(&[0, 2]).divides(&m(&[2, 1])));
        assert_eq!(m(&[1, 1]).quotient_of(&m(&[2, 1])).unwrap(), m(&[1, 0]));
        assert_eq!(m(&[2, 0, 1]).lcm(&m(&[1, 3])), m(&[2, 3, 1]));
        assert!(m(&[1, 0]).coprime(&m(&[0, 4])));
    }
}
