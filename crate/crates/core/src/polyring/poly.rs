use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{format_coeff, is_negative, Coeff, Field};
use super::monomial::{Monomial, MonomialOrder, VariableSet};
use crate::error::{Error, Result};

/// A polynomial ring: variable set plus coefficient field.
#[derive(Clone, Debug)]
pub struct Ring {
    vars: Arc<VariableSet>,
    field: Field,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && (Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars)
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn new(vars: Arc<VariableSet>, field: Field) -> Self {
        Ring { vars, field }
    }

    pub fn with_names<S: AsRef<str>>(names: &[S], field: Field) -> Result<Self> {
        Ok(Ring::new(VariableSet::new(names)?, field))
    }

    pub fn vars(&self) -> &Arc<VariableSet> {
        &self.vars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.vars
            .index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> Polynomial {
        self.constant(BigRational::one())
    }

    pub fn constant(&self, c: Coeff) -> Polynomial {
        self.term(c, Monomial::one())
    }

    pub fn int(&self, v: i64) -> Polynomial {
        self.constant(self.field.from_i64(v))
    }

    pub fn term(&self, c: Coeff, m: Monomial) -> Polynomial {
        let c = self.field.normalize(c).expect("coefficient representable in field");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ring: self.clone(), terms }
    }

    pub fn var(&self, i: usize) -> Polynomial {
        self.term(BigRational::one(), Monomial::var(i, 1))
    }

    pub fn var_named(&self, name: &str) -> Result<Polynomial> {
        Ok(self.var(self.index(name)?))
    }

    /// The same field with extra variables appended.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Ring> {
        Ok(Ring::new(self.vars.extended(extra)?, self.field))
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Polynomial {
        let mut p = self.zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        super::parse::parse(self, text)
    }
}

/// Sparse multivariate polynomial in canonical form: no zero coefficients,
/// one entry per monomial.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, Coeff>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(&Monomial::one())
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Coeff) {
        let f = self.ring.field;
        let c = f.normalize(c).expect("coefficient representable in field");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(o.get(), &c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().flat_map(|m| m.support()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn uses_only(&self, allowed: impl Fn(usize) -> bool) -> bool {
        self.terms.keys().all(|m| m.support().all(&allowed))
    }

    fn check_same(&self, other: &Polynomial) -> Result<()> {
        if self.ring.field != other.ring.field {
            return Err(Error::FieldMismatch);
        }
        if self.ring != other.ring {
            return Err(Error::VariableMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let f = self.field();
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), f.neg(c));
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let f = self.field();
        let mut out = self.ring.zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        let f = self.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        let f = self.field();
        let c = f.normalize(c.clone()).expect("representable scalar");
        if c.is_zero() {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(a, &c))).collect(),
        }
    }

    pub fn mul_term(&self, c: &Coeff, m: &Monomial) -> Polynomial {
        let f = self.field();
        if c.is_zero() {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), f.mul(a, c))).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Leading term under `order`.
    pub fn leading(&self, order: MonomialOrder) -> Option<(&Monomial, &Coeff)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Terms sorted in decreasing `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(Monomial, Coeff)> {
        let mut v: Vec<(Monomial, Coeff)> =
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    /// Divide by the leading coefficient under `order`.
    pub fn monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field().inv(c).unwrap();
                self.scale(&inv)
            }
        }
    }

    /// Exact value at a point given as one field element per variable.
    pub fn evaluate(&self, point: &[Coeff]) -> Result<Coeff> {
        if point.len() != self.ring.nvars() {
            let missing = self.ring.vars().name(point.len().min(self.ring.nvars().saturating_sub(1)));
            return Err(Error::MissingAssignment(missing.to_string()));
        }
        let f = self.field();
        let mut acc = Coeff::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                for _ in 0..e {
                    t = f.mul(&t, &point[v as usize]);
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Evaluate with values given by name. Every occurring variable must be assigned.
    pub fn evaluate_named(&self, values: &HashMap<String, Coeff>) -> Result<Coeff> {
        let f = self.field();
        let mut point = Vec::with_capacity(self.ring.nvars());
        let used = self.support();
        for (i, name) in self.ring.vars().names().iter().enumerate() {
            match values.get(name) {
                Some(v) => point.push(f.normalize(v.clone())?),
                None if used.binary_search(&i).is_err() => point.push(Coeff::zero()),
                None => return Err(Error::MissingAssignment(name.clone())),
            }
        }
        self.evaluate(&point)
    }

    /// Substitute constants for some variables; the ring is unchanged.
    pub fn substitute_values(&self, values: &[(usize, Coeff)]) -> Polynomial {
        let f = self.field();
        let mut table: Vec<Option<&Coeff>> = vec![None; self.ring.nvars()];
        for (i, val) in values {
            table[*i] = Some(val);
        }
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.pairs() {
                if let Some(val) = table[v as usize] {
                    for _ in 0..e {
                        coeff = f.mul(&coeff, val);
                    }
                } else {
                    rest.push((v, e));
                }
            }
            out.add_term(Monomial::from_sparse(rest), coeff);
        }
        out
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn differentiate(&self, var: usize) -> Polynomial {
        let f = self.field();
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let lowered = Monomial::var(var, 1).quotient_of(m).unwrap();
            out.add_term(lowered, f.scale_int(c, e));
        }
        out
    }

    /// Homogenize with respect to the (currently unused) variable `var`.
    pub fn homogenize(&self, var: usize) -> Result<Polynomial> {
        if self.degree_in(var) > 0 {
            return Err(Error::Input(format!(
                "homogenizing variable `{}` already occurs",
                self.ring.vars().name(var)
            )));
        }
        let d = self.total_degree().unwrap_or(0);
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            out.add_term(m.mul(&Monomial::var(var, d - m.degree())), c.clone());
        }
        Ok(out)
    }

    /// Homogenize only the variables selected by `block`, using `var` as the
    /// extra coordinate; other variables are treated as coefficients.
    pub fn homogenize_block(&self, var: usize, block: impl Fn(usize) -> bool) -> Polynomial {
        let d = self.terms.keys().map(|m| m.degree_in(&block)).max().unwrap_or(0);
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            out.add_term(m.mul(&Monomial::var(var, d - m.degree_in(&block))), c.clone());
        }
        out
    }

    pub fn dehomogenize(&self, var: usize, value: &Coeff) -> Polynomial {
        self.substitute_values(&[(var, value.clone())])
    }

    /// Substitute a polynomial (all living in `target`) for every variable.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Input(format!(
                "composition needs {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => return Ok(self.clone()),
        };
        if target.field != self.ring.field {
            return Err(Error::FieldMismatch);
        }
        for p in images {
            if p.ring != target {
                return Err(Error::VariableMismatch);
            }
        }
        let mut powers: HashMap<(u32, u32), Polynomial> = HashMap::new();
        let mut out = target.zero();
        for (m, c) in &self.terms {
            let mut t = target.constant(c.clone());
            for &(v, e) in m.pairs() {
                let pw = powers
                    .entry((v, e))
                    .or_insert_with(|| images[v as usize].pow(e))
                    .clone();
                t = &t * &pw;
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Move into another ring, matching variables by name.
    pub fn embed(&self, target: &Ring) -> Result<Polynomial> {
        if target.field != self.ring.field {
            return Err(Error::FieldMismatch);
        }
        if target == &self.ring {
            return Ok(self.clone());
        }
        let n = self.ring.nvars();
        let mut map = vec![u32::MAX; n];
        for i in self.support() {
            let name = self.ring.vars().name(i);
            map[i] = target.index(name)? as u32;
        }
        let mut out = target.zero();
        for (m, c) in &self.terms {
            out.add_term(m.remap(&map), c.clone());
        }
        Ok(out)
    }

    /// Coefficients with respect to the variables selected by `outer`: each
    /// entry maps an `outer` monomial to its polynomial coefficient.
    pub fn coefficients_in(&self, outer: impl Fn(usize) -> bool) -> BTreeMap<Monomial, Polynomial> {
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (o, i): (Vec<(u32, u32)>, Vec<(u32, u32)>) =
                m.pairs().iter().partition(|p| outer(p.0 as usize));
            out.entry(Monomial::from_sparse(o))
                .or_insert_with(|| self.ring.zero())
                .add_term(Monomial::from_sparse(i), c.clone());
        }
        out
    }

    /// Canonical text: terms in decreasing graded-reverse-lex order.
    pub fn format(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ring.vars().names();
        for (k, (m, c)) in self.sorted_terms(MonomialOrder::GrevLex).iter().enumerate() {
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                parts.push(format_coeff(&abs));
            }
            for &(v, e) in m.pairs() {
                if e == 1 {
                    parts.push(names[v as usize].clone());
                } else {
                    parts.push(format!("{}^{}", names[v as usize], e));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl std::ops::$tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$imp(rhs).expect("operands share ring and field")
            }
        }
        impl std::ops::$tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$imp(&rhs).expect("operands share ring and field")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

/// Compare leading monomials, largest first.
pub fn cmp_leading(order: MonomialOrder, a: &Polynomial, b: &Polynomial) -> Ordering {
    match (a.leading(order), b.leading(order)) {
        (Some(x), Some(y)) => order.cmp(x.0, y.0),
        (Some(_), None) => Ordering::Greater,
        (None, Some(_)) => Ordering::Less,
        (None, None) => Ordering::Equal,
    }
}
