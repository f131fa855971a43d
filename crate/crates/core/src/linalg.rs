//! Sparse exact linear algebra over the coefficient field.

use num_traits::{One, Zero};

use crate::polyring::{Coeff, Field};

type Row = Vec<(usize, Coeff)>;

/// Row-echelon accumulator for `A x = b`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    field: Field,
    ncols: usize,
    /// pivot rows, each normalized so its first (smallest) column has coefficient 1
    pivots: Vec<(Row, Coeff)>,
    pivot_of_col: std::collections::HashMap<usize, usize>,
    inconsistent: bool,
}

fn axpy(row: &Row, c: &Coeff, other: &Row, field: Field) -> Row {
    // row - c * other
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_row = j == other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_other = i == row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_other {
            out.push((other[j].0, field.neg(&field.mul(c, &other[j].1))));
            j += 1;
        } else {
            let v = field.sub(&row[i].1, &field.mul(c, &other[j].1));
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl LinearSystem {
    pub fn new(field: Field, ncols: usize) -> Self {
        LinearSystem {
            field,
            ncols,
            pivots: Vec::new(),
            pivot_of_col: Default::default(),
            inconsistent: false,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Add the equation `Σ row · x = rhs`. Entries may be unsorted or repeated.
    pub fn push(&mut self, entries: impl IntoIterator<Item = (usize, Coeff)>, rhs: Coeff) {
        let f = self.field;
        let mut row: Row = Vec::new();
        let mut raw: Vec<(usize, Coeff)> = entries.into_iter().collect();
        raw.sort_by_key(|e| e.0);
        for (c, v) in raw {
            assert!(c < self.ncols, "column out of range");
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 = f.add(&last.1, &v),
                _ => row.push((c, v)),
            }
        }
        row.retain(|e| !e.1.is_zero());
        let mut rhs = rhs;
        while let Some((c, v)) = row.iter().find(|e| self.pivot_of_col.contains_key(&e.0)).cloned() {
            let (prow, prhs) = &self.pivots[self.pivot_of_col[&c]];
            rhs = f.sub(&rhs, &f.mul(&v, prhs));
            row = axpy(&row, &v, prow, f);
        }
        match row.first() {
            None => {
                if !rhs.is_zero() {
                    self.inconsistent = true;
                }
            }
            Some((c, lead)) => {
                let inv = f.inv(lead).unwrap();
                let c = *c;
                let row: Row = row.iter().map(|(k, v)| (*k, f.mul(v, &inv))).collect();
                let rhs = f.mul(&rhs, &inv);
                self.pivot_of_col.insert(c, self.pivots.len());
                self.pivots.push((row, rhs));
            }
        }
    }

    fn back_substitute(&self, mut x: Vec<Coeff>, with_rhs: bool) -> Vec<Coeff> {
        let f = self.field;
        let mut order: Vec<usize> = (0..self.pivots.len()).collect();
        order.sort_by_key(|&k| std::cmp::Reverse(self.pivots[k].0[0].0));
        for k in order {
            let (row, rhs) = &self.pivots[k];
            let mut v = if with_rhs { rhs.clone() } else { Coeff::zero() };
            for (c, a) in &row[1..] {
                if !x[*c].is_zero() {
                    v = f.sub(&v, &f.mul(a, &x[*c]));
                }
            }
            x[row[0].0] = v;
        }
        x
    }

    /// A solution with every free variable set to zero, or `None`.
    pub fn solve(&self) -> Option<Vec<Coeff>> {
        if self.inconsistent {
            return None;
        }
        Some(self.back_substitute(vec![Coeff::zero(); self.ncols], true))
    }

    /// Basis of the solution space of the homogeneous system, one vector per
    /// free column in increasing column order.
    pub fn nullspace(&self) -> Vec<Vec<Coeff>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivot_of_col.contains_key(c)).collect();
        free.into_iter()
            .map(|fc| {
                let mut x = vec![Coeff::zero(); self.ncols];
                x[fc] = Coeff::one();
                self.back_substitute(x, false)
            })
            .collect()
    }
}
