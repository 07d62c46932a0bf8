//! Exact linear algebra over the rationals, and the ideal-membership and
//! span tests built on it.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::kernel::{Monomial, Poly, Rational};

/// Row-reduces in place and returns the pivot columns.
fn eliminate(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rows = rows.to_vec();
    eliminate(&mut rows, ncols).len()
}

/// One solution of `A x = b`, if any.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = eliminate(&mut rows, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][ncols].clone();
    }
    Some(x)
}

/// Coefficient vectors of `polys` over their joint monomial support.
pub fn coefficient_rows(polys: &[Poly]) -> Vec<Vec<Rational>> {
    let support: BTreeSet<Monomial> = polys.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    polys
        .iter()
        .map(|p| {
            support
                .iter()
                .map(|m| p.coeff(m).cloned().unwrap_or_else(Rational::zero))
                .collect()
        })
        .collect()
}

/// Whether two lists of polynomials over the same variables span the same
/// rational vector space.
pub fn same_span(a: &[Poly], b: &[Poly]) -> bool {
    let all: Vec<Poly> = a.iter().chain(b).cloned().collect();
    let joint = rank(&coefficient_rows(&all));
    rank(&coefficient_rows(a)) == joint && rank(&coefficient_rows(b)) == joint
}

fn monomials_up_to(nvars: usize, degree: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(nvars)];
    let mut frontier = out.clone();
    for _ in 0..degree {
        let mut next = BTreeSet::new();
        for m in &frontier {
            for v in 0..nvars {
                next.insert(m.mul(&Monomial::var(nvars, v, 1)));
            }
        }
        frontier = next.into_iter().collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

/// Cofactors `c_i` with `sum c_i g_i = p`, searched among polynomials of
/// degree at most `d` for `d = 0, 1, ..., max_degree`. A returned
/// certificate has been multiplied back out and checked.
pub fn ideal_certificate(p: &Poly, generators: &[Poly], max_degree: u32) -> Option<Vec<Poly>> {
    let vars = p.vars().to_vec();
    let nvars = vars.len();
    if p.is_zero() {
        return Some(vec![Poly::zero(&vars); generators.len()]);
    }
    for d in 0..=max_degree {
        let basis = monomials_up_to(nvars, d);
        let mut columns: Vec<Poly> = Vec::new();
        let mut owner = Vec::new();
        for (gi, g) in generators.iter().enumerate() {
            for m in &basis {
                columns.push(g.mul_monomial(m));
                owner.push((gi, m.clone()));
            }
        }
        let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
        for c in columns.iter().chain(std::iter::once(p)) {
            for (m, _) in c.terms() {
                let n = index.len();
                index.entry(m.clone()).or_insert(n);
            }
        }
        let mut a = vec![vec![Rational::zero(); columns.len()]; index.len()];
        for (j, c) in columns.iter().enumerate() {
            for (m, q) in c.terms() {
                a[index[m]][j] = q.clone();
            }
        }
        let mut b = vec![Rational::zero(); index.len()];
        for (m, q) in p.terms() {
            b[index[m]] = q.clone();
        }
        if let Some(x) = solve(&a, &b) {
            let mut cofactors = vec![Poly::zero(&vars); generators.len()];
            for (j, q) in x.into_iter().enumerate() {
                if !q.is_zero() {
                    let (gi, m) = &owner[j];
                    cofactors[*gi].add_term(m.clone(), q);
                }
            }
            let mut sum = Poly::zero(&vars);
            for (c, g) in cofactors.iter().zip(generators) {
                sum = sum.add(&c.mul(g));
            }
            if sum == *p {
                return Some(cofactors);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::int;

    #[test]
    fn rank_and_solve() {
        let rows = vec![vec![int(1), int(2)], vec![int(2), int(4)], vec![int(0), int(1)]];
        assert_eq!(rank(&rows), 2);
        let x = solve(&rows, &[int(3), int(6), int(1)]).unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
        assert!(solve(&rows, &[int(3), int(5), int(1)]).is_none());
    }

    #[test]
    fn membership() {
        let v: Vec<String> = vec!["x".into(), "y".into()];
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let p = x.mul(&x).add(&x.mul(&y));
        assert!(ideal_certificate(&p, std::slice::from_ref(&x), 2).is_some());
        assert!(ideal_certificate(&p, std::slice::from_ref(&y), 3).is_none());
        assert!(same_span(&[x.add(&y), x.sub(&y)], &[x.clone(), y.clone()]));
        assert!(!same_span(std::slice::from_ref(&x), &[y]));
    }
}
