//! Division by a series whose reduction is `t^n * unit`.

use super::ring::RingElement;
use super::series::PowerSeries;
use crate::error::{Error, Result};

/// `G = quotient * F + remainder`, with `remainder` of degree below `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Division {
    pub quotient: PowerSeries,
    /// Coefficients of `t^0 .. t^(n-1)`.
    pub remainder: Vec<RingElement>,
}

impl Division {
    /// Residue order of the divisor.
    pub fn order(&self) -> usize {
        self.remainder.len()
    }

    pub fn remainder_series(&self, precision: usize) -> PowerSeries {
        let ring = self.quotient.ring();
        let mut s = PowerSeries::zero(ring, precision);
        for (k, c) in self.remainder.iter().enumerate().take(precision) {
            s.set_coeff(k, c.clone());
        }
        s
    }
}

/// Input precision `weierstrass_divide` needs to produce exact quotient
/// coefficients below `target - n`.
pub fn division_precision(target: usize, order: usize, nilpotency: usize) -> usize {
    target + nilpotency.saturating_sub(1) * order
}

/// Divides `g` by `f`, where `f` reduces to `t^n * unit` modulo the maximal
/// ideal. The identity `g = q*f + r` holds exactly in `t^0 .. t^(target-n-1)`.
///
/// Both inputs need precision at least
/// [`division_precision`]`(target, n, nu)`: each pass of the
/// iteration shifts by `t^n` and the remainder converges after `nu` passes.
pub fn weierstrass_divide(g: &PowerSeries, f: &PowerSeries, target: usize) -> Result<Division> {
    let ring = f.ring().clone();
    let n = f.residue_order().ok_or(Error::OrderUndefined(f.precision()))?;
    if n > target {
        return Err(Error::InsufficientPrecision {
            needed: n,
            available: target,
        });
    }
    let needed = division_precision(target, n, ring.nilpotency() as usize);
    let available = g.precision().min(f.precision());
    if available < needed {
        return Err(Error::InsufficientPrecision { needed, available });
    }
    let g = g.truncate(needed)?;
    let f = f.truncate(needed)?;
    let f_low = f.low_part(n);
    let unit = f
        .shift_down(n)
        .inverse()
        .expect("leading residue coefficient is a unit");

    let out_precision = target - n;
    let mut quotient = PowerSeries::zero(&ring, out_precision);
    let mut remainder = vec![RingElement::zero(&ring); n];
    let mut h = g;
    while !h.is_zero() {
        for (k, r) in remainder.iter_mut().enumerate() {
            *r = &*r + h.coeff(k);
        }
        let q = &h.shift_down(n) * &unit;
        quotient = &quotient + &q.truncate(out_precision)?;
        // f_low lies in the maximal ideal, so h gains one adic order per pass.
        h = -&(&q * &f_low);
    }
    Ok(Division { quotient, remainder })
}

/// The unique `a` in the maximal ideal with `f(a) = 0`, for `f` of residue
/// order one.
pub fn distinguished_root(f: &PowerSeries) -> Result<RingElement> {
    let ring = f.ring().clone();
    let n = f.residue_order().ok_or(Error::OrderUndefined(f.precision()))?;
    if n != 1 {
        return Err(Error::ResidueOrder(n));
    }
    // t - r = q*f with q a unit, so r is the root.
    let t = PowerSeries::var(&ring, f.precision());
    let div = weierstrass_divide(&t, f, 1)?;
    let root = div.remainder[0].clone();
    debug_assert!(f.eval_nilpotent(&root)?.is_zero());
    Ok(root)
}
