//! Flows along the tangent vector fields `eta_i = phi_z d/du_i - phi_{u_i} d/dz`,
//! and the two constructions built from them: truncating an arc's
//! projection to polynomials, and the product chart.

use std::collections::BTreeMap;

use super::{lift_arc, projection_difference, ArcDeformation, FormalArc, Hypersurface};
use crate::error::{Error, Result};
use crate::kernel::{Monomial, Poly, PowerSeries, Rational, RingElement, TestRing};

/// The field `f(t) * eta_i`; `index` is the zero-based position of `u_i`
/// among the non-transverse variables.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowSpec {
    pub index: usize,
    pub f: PowerSeries,
}

impl FlowSpec {
    pub fn new(index: usize, f: PowerSeries) -> Self {
        FlowSpec { index, f }
    }

    /// t-order of `f` modulo the maximal ideal (`None` when `f` is nilpotent).
    pub fn residue_order(&self) -> Option<usize> {
        self.f.residue_order()
    }
}

type SeriesPoly = Poly<PowerSeries>;

/// Components of `sum_i f_i eta_i`, one per variable.
fn vector_field(h: &Hypersurface, specs: &[FlowSpec], arc: &FormalArc, precision: usize) -> Result<Vec<SeriesPoly>> {
    let ring = arc.ring();
    let vars = h.vars().to_vec();
    let as_series =
        |p: &Poly| p.map_coeffs(|q| PowerSeries::constant(&RingElement::constant(ring, q.clone()), precision));
    let phi_z = as_series(&h.phi().derivative(h.transverse()));
    let mut comps = vec![SeriesPoly::zero(&vars); h.nvars()];
    for spec in specs {
        if spec.index >= h.dim() {
            return Err(Error::IndexOutOfRange(spec.index, h.dim()));
        }
        let f = if spec.f.ring().is_field() && !ring.is_field() {
            spec.f.lift_to(ring)
        } else {
            spec.f.clone()
        };
        if f.precision() < precision {
            return Err(Error::InsufficientPrecision {
                needed: precision,
                available: f.precision(),
            });
        }
        let f = f.truncate(precision)?;
        if !TestRing::same(f.ring(), arc.ring()) {
            return Err(Error::RingMismatch);
        }
        if !f.coeff(0).in_maximal_ideal() {
            return Err(Error::DivergentFlow(format!(
                "coefficient function for u_{} has a unit constant term",
                spec.index + 1
            )));
        }
        let v = h.u_var(spec.index);
        let phi_u = as_series(&h.phi().derivative(v));
        comps[v] = comps[v].add(&phi_z.mul_coeff(&f));
        comps[h.transverse()] = comps[h.transverse()].sub(&phi_u.mul_coeff(&f));
    }
    Ok(comps)
}

fn apply_field(field: &[SeriesPoly], p: &SeriesPoly) -> SeriesPoly {
    let mut out = SeriesPoly::zero(p.vars());
    for (v, comp) in field.iter().enumerate() {
        if comp.is_zero() || p.degree_in(v) == 0 {
            continue;
        }
        out = out.add(&comp.mul(&p.derivative(v)));
    }
    out
}

/// Time-one flow of `sum_i f_i(t) eta_i` applied to `arc`, computed as the
/// exponential series `sum_n V^n(q) / n!` of the derivation on each
/// coordinate `q`. Every `f_i` needs its constant term in the maximal
/// ideal, which makes the series terminate.
pub fn flow_arc(h: &Hypersurface, arc: &FormalArc, specs: &[FlowSpec]) -> Result<FormalArc> {
    if arc.comps().len() != h.nvars() {
        return Err(Error::InvalidArc(format!(
            "arc has {} components for {} variables",
            arc.comps().len(),
            h.nvars()
        )));
    }
    let precision = arc.precision();
    let ring = arc.ring();
    let field = vector_field(h, specs, arc, precision)?;
    let vars = h.vars().to_vec();
    let one = PowerSeries::one(ring, precision);
    let limit = precision * ring.nilpotency() as usize + 2;
    let mut comps = Vec::with_capacity(h.nvars());
    for v in 0..h.nvars() {
        let mut term = SeriesPoly::term(&vars, Monomial::var(vars.len(), v, 1), one.clone());
        let mut value = arc.comp(v).clone();
        let mut n = 1usize;
        loop {
            term = apply_field(&field, &term).scale(&Rational::new(1.into(), n.into()));
            if term.is_zero() {
                break;
            }
            value = &value + &term.substitute(ring, arc.comps(), precision)?;
            n += 1;
            if n > limit {
                return Err(Error::DivergentFlow(format!(
                    "exponential series for `{}` did not terminate",
                    vars[v]
                )));
            }
        }
        comps.push(value);
    }
    Ok(FormalArc::new(ring, comps))
}

/// A base arc with polynomial projection and the flows that produced it.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub arc: FormalArc,
    pub flows: Vec<FlowSpec>,
}

/// t-order of `d phi / dz` along a rational arc.
pub fn transverse_order(h: &Hypersurface, gamma: &FormalArc) -> Result<usize> {
    let fz = h.phi().derivative(h.transverse());
    fz.substitute(gamma.ring(), gamma.comps(), gamma.precision())?
        .order()
        .ok_or_else(|| Error::InvalidArc("d phi/dz vanishes along the arc to full precision".into()))
}

fn high_part(s: &PowerSeries, n: usize) -> PowerSeries {
    &s.clone() - &s.low_part(n + 1)
}

/// Flows a rational arc on the hypersurface until every `u`-component is a
/// polynomial of degree at most `n`.
///
/// For each `u_i` in turn, `f` is found by the iteration
/// `f <- f - (part of u_i above t^n) / phi_z`, each `f` taken as a
/// polynomial (coefficients the equations do not determine are zero).
/// Flows along `eta_i` move only `u_i` and `z`, so earlier components stay
/// put.
pub fn truncate_arc(h: &Hypersurface, gamma: &FormalArc, n: usize, precision: usize) -> Result<Truncation> {
    if !gamma.ring().is_field() {
        return Err(Error::InvalidArc(
            "arc to truncate must have rational coefficients".into(),
        ));
    }
    let mut arc = gamma.truncate(precision)?;
    if !h.contains(&arc)? {
        return Err(Error::InvalidArc("arc does not lie on the hypersurface".into()));
    }
    let order = transverse_order(h, &arc)?;
    if n < order {
        return Err(Error::TruncationTooSmall { n, bound: order });
    }
    let mut flows = Vec::new();
    for i in 0..h.dim() {
        let v = h.u_var(i);
        if high_part(arc.comp(v), n).is_zero() {
            continue;
        }
        let mut f = PowerSeries::zero(arc.ring(), precision);
        let mut converged = None;
        for _ in 0..=precision + 1 {
            let moved = flow_arc(h, &arc, &[FlowSpec::new(i, f.clone())])?;
            let excess = high_part(moved.comp(v), n);
            if excess.is_zero() {
                converged = Some(moved);
                break;
            }
            let k = transverse_order(h, &moved)?;
            let s = h
                .phi()
                .derivative(h.transverse())
                .substitute(moved.ring(), moved.comps(), precision)?;
            if excess.order().unwrap_or(precision) <= k {
                return Err(Error::NoConvergence(format!("truncating u_{}", i + 1)));
            }
            let step = &excess.shift_down(k) * &s.shift_down(k).inverse().expect("leading coefficient is nonzero");
            f = &f - &step.extend_zero(precision);
        }
        match converged {
            Some(moved) => {
                arc = moved;
                flows.push(FlowSpec::new(i, f));
            }
            None => return Err(Error::NoConvergence(format!("truncating u_{}", i + 1))),
        }
    }
    Ok(Truncation { arc, flows })
}

/// The product chart: lifts `def` to the hypersurface, flows the lift along
/// `sum a(i,k) t^k eta_i`, and projects back.
///
/// `a` is supported on `k > n - ord_t(phi_z along gamma)`, where `n` is the
/// truncation degree; values lie in the maximal ideal.
pub fn product_chart(
    h: &Hypersurface,
    gamma: &FormalArc,
    def: &ArcDeformation,
    a: &BTreeMap<(usize, usize), RingElement>,
    n: usize,
    precision: usize,
) -> Result<ArcDeformation> {
    let order = transverse_order(h, &gamma.truncate(precision)?)?;
    for (&(i, k), value) in a {
        if i >= h.dim() {
            return Err(Error::IndexOutOfRange(i, h.dim()));
        }
        if k + order <= n {
            return Err(Error::UnsupportedIndex(i, k));
        }
        if !value.in_maximal_ideal() {
            return Err(Error::Parameter(format!(
                "chart coordinate ({}, {k}) is not in the maximal ideal",
                i + 1
            )));
        }
    }
    let lifted = lift_arc(h, gamma, def, precision)?
        .lift
        .ok_or_else(|| Error::Parameter("deformation does not lift to the hypersurface".into()))?;
    if a.values().all(RingElement::is_zero) {
        return Ok(def.clone());
    }
    let p = lifted.precision();
    let ring = def.ring();
    let mut fs: BTreeMap<usize, PowerSeries> = BTreeMap::new();
    for (&(i, k), value) in a {
        let f = fs.entry(i).or_insert_with(|| PowerSeries::zero(ring, p));
        if k < p {
            let c = f.coeff(k) + value;
            f.set_coeff(k, c);
        }
    }
    let specs: Vec<FlowSpec> = fs.into_iter().map(|(i, f)| FlowSpec::new(i, f)).collect();
    let moved = flow_arc(h, &lifted, &specs)?;
    projection_difference(h, gamma, &moved)
}
