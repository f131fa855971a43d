//! Exact multivariate polynomials over ℚ or 𝔽_p.

mod field;
mod monomial;
mod parse;
mod poly;

pub use field::{format_coeff, Coeff, Field};
pub use monomial::{Monomial, MonomialOrder, VariableSet};
pub use poly::{cmp_leading, Polynomial, Ring};

/// Shorthand for an integer coefficient.
pub fn int(v: i64) -> Coeff {
    Coeff::from_integer(v.into())
}

/// Shorthand for a rational coefficient `n/d`.
pub fn ratio(n: i64, d: i64) -> Coeff {
    Coeff::new(n.into(), d.into())
}

/// All monomials of total degree exactly `deg` in the variables `vars`,
/// in a fixed enumeration order.
pub fn monomials_of_degree(vars: &[usize], deg: u32) -> Vec<Monomial> {
    fn go(vars: &[usize], deg: u32, acc: &mut Vec<(u32, u32)>, out: &mut Vec<Monomial>) {
        match vars.split_first() {
            None => {
                if deg == 0 {
                    out.push(Monomial::from_sparse(acc.clone()));
                }
            }
            Some((&v, rest)) => {
                for e in (0..=deg).rev() {
                    if rest.is_empty() && e != deg {
                        continue;
                    }
                    acc.push((v as u32, e));
                    go(rest, deg - e, acc, out);
                    acc.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(vars, deg, &mut Vec::new(), &mut out);
    out
}

/// All monomials of total degree at most `deg` in `vars`, by increasing degree.
pub fn monomials_up_to(vars: &[usize], deg: u32) -> Vec<Monomial> {
    (0..=deg).flat_map(|d| monomials_of_degree(vars, d)).collect()
}
