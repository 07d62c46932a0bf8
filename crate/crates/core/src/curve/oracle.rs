//! Closed-form first-order lifting over the dual numbers, used to
//! cross-check the staged solver.

use super::{PlaneCurveGerm, SeriesCurve};
use crate::error::{Error, Result};
use crate::kernel::{Poly, PowerSeries, TestRing};

/// Outcome for `f~ = f + e*g` over `Q[e]/(e^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstOrder {
    pub liftable: bool,
    /// `d` with lift `h0 + e*d`, when liftable.
    pub direction: Option<PowerSeries>,
}

/// Liftable iff `g(x, h0(x))` has x-order at least `m`; the lift direction
/// is then `-g(x, h0) / (df/dy)(x, h0)`.
pub fn first_order_oracle(germ: &PlaneCurveGerm, g: &Poly, precision: usize) -> Result<FirstOrder> {
    let field = TestRing::field();
    let h0 = germ.branch().truncate(precision)?;
    let g = g.embed(germ.f().vars())?;
    let along = SeriesCurve::from_poly(&g, &field, precision)?.eval(&h0);
    let fy = SeriesCurve::from_poly(germ.f(), &field, precision)?
        .derivative_y()
        .eval(&h0);
    let m = germ.multiplicity();
    if precision <= m {
        return Err(Error::InsufficientPrecision {
            needed: m + 1,
            available: precision,
        });
    }
    let liftable = along.order().is_none_or(|k| k >= m);
    if !liftable {
        return Ok(FirstOrder {
            liftable,
            direction: None,
        });
    }
    let unit_inv = fy
        .shift_down(m)
        .inverse()
        .expect("x^m is the exact order of df/dy along the branch");
    let direction = -&(&along.shift_down(m) * &unit_inv);
    Ok(FirstOrder {
        liftable,
        direction: Some(direction),
    })
}
