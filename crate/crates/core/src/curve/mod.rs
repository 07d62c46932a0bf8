//! Plane curve germs with a smooth branch, their deformations over
//! test-rings, and branch lifting with canonical obstructions.
//!
//! The solver works on `g(x, y) = f~(x, y + h0(x))`, written as
//! `sum_j G_j(x) y^j` with series coefficients. A lift is `h0 + delta` with
//! `g(x, delta(x))` a polynomial of degree `< m` in `x`; those low
//! coefficients are the obstructions, and they vanish exactly when a lift
//! exists.

mod oracle;
mod universal;

pub use oracle::{first_order_oracle, FirstOrder};
pub use universal::{universal_obstructions, UniversalModel};

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kernel::{Coefficient, Monomial, Poly, PowerSeries, Rational, RingElement, RingMorphism, TestRing};

/// `sum_j Q_j(x) y^j` with coefficients in `A[[x]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesCurve {
    ring: Arc<TestRing>,
    coeffs: Vec<PowerSeries>,
}

impl SeriesCurve {
    pub fn new(ring: &Arc<TestRing>, coeffs: Vec<PowerSeries>) -> Self {
        for q in &coeffs {
            assert!(TestRing::same(q.ring(), ring), "ring mismatch");
        }
        SeriesCurve {
            ring: ring.clone(),
            coeffs,
        }
    }

    /// Reads a polynomial in `(x, y)` (in that variable order) as a curve
    /// over `ring`.
    pub fn from_poly<C: Coefficient>(p: &Poly<C>, ring: &Arc<TestRing>, precision: usize) -> Result<Self> {
        if p.vars().len() != 2 {
            return Err(Error::Parameter(format!(
                "plane curve needs two variables, got {}",
                p.vars().len()
            )));
        }
        let x = [PowerSeries::var(ring, precision)];
        let coeffs = p
            .collect_in(1)
            .iter()
            .map(|q| q.substitute(ring, &x, precision))
            .collect::<Result<Vec<_>>>()?;
        Ok(SeriesCurve::new(ring, coeffs))
    }

    pub fn ring(&self) -> &Arc<TestRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[PowerSeries] {
        &self.coeffs
    }

    pub fn precision(&self) -> usize {
        self.coeffs
            .iter()
            .map(PowerSeries::precision)
            .min()
            .unwrap_or(usize::MAX)
    }

    /// Coefficient of `y^j` (zero beyond the top degree).
    pub fn coeff(&self, j: usize) -> PowerSeries {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| PowerSeries::zero(&self.ring, self.precision()))
    }

    pub fn truncate(&self, precision: usize) -> Result<Self> {
        Ok(SeriesCurve {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|q| q.truncate(precision))
                .collect::<Result<_>>()?,
        })
    }

    /// `sum_j Q_j(x) y(x)^j`, by Horner's rule.
    pub fn eval(&self, y: &PowerSeries) -> PowerSeries {
        let precision = self.precision().min(y.precision());
        let mut acc = PowerSeries::zero(&self.ring, precision);
        for q in self.coeffs.iter().rev() {
            acc = &(&acc * y) + q;
        }
        acc
    }

    pub fn derivative_y(&self) -> SeriesCurve {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, q)| q.scale(&Rational::from_integer(j.into())))
            .collect();
        SeriesCurve {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// The curve `Q(x, y + h(x))`.
    pub fn recenter(&self, h: &PowerSeries) -> SeriesCurve {
        let precision = self.precision().min(h.precision());
        let mut acc: Vec<PowerSeries> = Vec::new();
        for q in self.coeffs.iter().rev() {
            // acc <- acc * (y + h) + q
            let mut next = vec![PowerSeries::zero(&self.ring, precision); acc.len() + 1];
            for (j, a) in acc.iter().enumerate() {
                next[j + 1] = &next[j + 1] + a;
                next[j] = &next[j] + &(a * h);
            }
            next[0] = &next[0] + q;
            acc = next;
        }
        SeriesCurve {
            ring: self.ring.clone(),
            coeffs: acc,
        }
    }

    pub fn map(&self, f: &RingMorphism) -> SeriesCurve {
        SeriesCurve {
            ring: f.target().clone(),
            coeffs: self.coeffs.iter().map(|q| q.map(f)).collect(),
        }
    }

    /// Reduction modulo the maximal ideal.
    pub fn reduce(&self) -> SeriesCurve {
        SeriesCurve {
            ring: TestRing::field(),
            coeffs: self.coeffs.iter().map(PowerSeries::reduce).collect(),
        }
    }
}

/// Obstructions and, when they all vanish, the lifted branch.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftResult {
    pub obstructions: Vec<RingElement>,
    pub lift: Option<PowerSeries>,
}

impl LiftResult {
    pub fn is_liftable(&self) -> bool {
        self.lift.is_some()
    }

    pub fn multiplicity(&self) -> usize {
        self.obstructions.len()
    }
}

/// The conservative precision rule `(nu + 1) * (m + deg f) + 8`. The solver
/// itself tracks precision exactly and only needs `nu * m + 1`; this rule is
/// what the front ends use as a default.
pub fn required_precision(nilpotency: usize, m: usize, degree: usize) -> usize {
    (nilpotency + 1) * (m + degree) + 8
}

/// Smallest input precision for which the solver can produce the
/// obstructions and a lift of positive precision.
pub fn minimal_precision(nilpotency: usize, m: usize) -> usize {
    nilpotency * m + 1
}

/// x-order of `df/dy` along the base branch; the base curve must contain
/// the branch. `degree_hint` bounds the x-degree of `df/dy(x, h0(x))` when the
/// branch is polynomial, to tell non-isolated contact from short precision.
fn multiplicity_of(base: &SeriesCurve, h0: &PowerSeries, degree_hint: Option<usize>) -> Result<usize> {
    let on_curve = base.eval(h0);
    if let Some(k) = on_curve.order() {
        return Err(Error::BranchNotOnCurve(k));
    }
    let fy = base.derivative_y().eval(h0);
    match fy.order() {
        Some(m) => Ok(m),
        None => match degree_hint {
            Some(d) if fy.precision() > d => Err(Error::NonIsolatedContact),
            _ => Err(Error::InsufficientPrecision {
                needed: fy.precision() + 1,
                available: fy.precision(),
            }),
        },
    }
}

/// Multiplicity of a branch on a curve with series coefficients.
pub fn series_multiplicity(base: &SeriesCurve, h0: &PowerSeries) -> Result<usize> {
    multiplicity_of(base, h0, None)
}

/// Branch multiplicity `m`: the x-order of `df/dy(x, h0(x))`, computed to
/// precision `precision`.
pub fn branch_multiplicity(f: &Poly, h0: &PowerSeries, precision: usize) -> Result<usize> {
    check_branch(h0, precision)?;
    let field = TestRing::field();
    let base = SeriesCurve::from_poly(f, &field, precision)?;
    let h0 = h0.truncate(precision)?;
    multiplicity_of(&base, &h0, polynomial_degree_bound(f, &h0))
}

fn check_branch(h0: &PowerSeries, precision: usize) -> Result<()> {
    if !h0.ring().is_field() {
        return Err(Error::Parameter("base branch must have rational coefficients".into()));
    }
    if h0.precision() < precision {
        return Err(Error::InsufficientPrecision {
            needed: precision,
            available: h0.precision(),
        });
    }
    Ok(())
}

// x-degree bound of any polynomial expression of y-degree < deg_y f along a
// polynomial branch.
fn polynomial_degree_bound(f: &Poly, h0: &PowerSeries) -> Option<usize> {
    let e = h0.degree().unwrap_or(0).max(1);
    Some(f.total_degree() as usize * e)
}

/// `f(x, y + h0(x))`, reading `h0` as the polynomial of its known
/// coefficients.
pub fn normalize_branch(f: &Poly, h0: &PowerSeries) -> Result<Poly> {
    check_branch(h0, 0)?;
    let vars = f.vars().to_vec();
    if vars.len() != 2 {
        return Err(Error::Parameter("plane curve needs two variables".into()));
    }
    let mut shift = Poly::var(&vars, 1);
    for (k, c) in h0.coeffs().iter().enumerate() {
        let q = c.residue();
        if !Zero::is_zero(&q) {
            shift.add_term(Monomial::from_exponents(vec![k as u16, 0]), q);
        }
    }
    let mut out = Poly::zero(&vars);
    let mut powers = vec![Poly::one(&vars)];
    for (m, c) in f.terms() {
        let j = usize::from(m.exponent(1));
        while powers.len() <= j {
            let next = powers.last().unwrap().mul(&shift);
            powers.push(next);
        }
        let xi = Monomial::from_exponents(vec![m.exponent(0), 0]);
        out = out.add(&powers[j].mul_monomial(&xi).scale(c));
    }
    Ok(out)
}

/// A polynomial `f(x, y)` together with a smooth branch `y = h0(x)` on it.
#[derive(Clone, Debug)]
pub struct PlaneCurveGerm {
    f: Poly,
    h0: PowerSeries,
    m: usize,
    degree_bound: usize,
    normalized: Poly,
}

impl PlaneCurveGerm {
    /// Checks the branch and computes its multiplicity to the precision of
    /// `h0`.
    pub fn new(f: Poly, h0: PowerSeries) -> Result<Self> {
        let m = branch_multiplicity(&f, &h0, h0.precision())?;
        let normalized = normalize_branch(&f, &h0)?;
        let degree_bound = f.total_degree() as usize;
        Ok(PlaneCurveGerm {
            f,
            h0,
            m,
            degree_bound,
            normalized,
        })
    }

    /// Germ of `f` along `y = 0`.
    pub fn on_axis(f: Poly, precision: usize) -> Result<Self> {
        let h0 = PowerSeries::zero(&TestRing::field(), precision);
        Self::new(f, h0)
    }

    /// Overrides the bound `M` on perturbation exponents (default: total degree of `f`).
    pub fn with_degree_bound(mut self, bound: usize) -> Self {
        self.degree_bound = bound;
        self
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn branch(&self) -> &PowerSeries {
        &self.h0
    }

    pub fn multiplicity(&self) -> usize {
        self.m
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// `f(x, y + h0(x))`.
    pub fn normalized_poly(&self) -> &Poly {
        &self.normalized
    }

    /// The same germ moved so that the branch is the x-axis.
    pub fn normalized(&self) -> PlaneCurveGerm {
        PlaneCurveGerm {
            f: self.normalized.clone(),
            h0: PowerSeries::zero(&TestRing::field(), self.h0.precision()),
            m: self.m,
            degree_bound: self.degree_bound,
            normalized: self.normalized.clone(),
        }
    }

    /// Nonzero rational `a_{m,1}`: the `x^m` coefficient of `df/dy` along the branch.
    pub fn pivot(&self) -> Rational {
        let fy = self.normalized.derivative(1);
        let mut coeff = Rational::zero();
        for (mono, c) in fy.terms() {
            if mono.exponent(1) == 0 && usize::from(mono.exponent(0)) == self.m {
                coeff = c.clone();
            }
        }
        coeff
    }
}

/// `f~ = f + sum c_{i,j} x^i y^j` with every `c_{i,j}` in the maximal ideal.
#[derive(Clone, Debug)]
pub struct CurveDeformation {
    germ: PlaneCurveGerm,
    ring: Arc<TestRing>,
    c: BTreeMap<(usize, usize), RingElement>,
}

impl CurveDeformation {
    pub fn new(germ: &PlaneCurveGerm, ring: &Arc<TestRing>, c: BTreeMap<(usize, usize), RingElement>) -> Result<Self> {
        let bound = germ.degree_bound;
        let mut kept = BTreeMap::new();
        for ((i, j), v) in c {
            if !TestRing::same(v.ring(), ring) {
                return Err(Error::RingMismatch);
            }
            if i > bound || j > bound {
                return Err(Error::IndexOutOfRange(i.max(j), bound));
            }
            if !v.in_maximal_ideal() {
                return Err(Error::Parameter(format!(
                    "perturbation coefficient of x^{i}*y^{j} is not in the maximal ideal"
                )));
            }
            if !v.is_zero() {
                kept.insert((i, j), v);
            }
        }
        Ok(CurveDeformation {
            germ: germ.clone(),
            ring: ring.clone(),
            c: kept,
        })
    }

    /// Reads the perturbation off a deformed polynomial `f~`.
    pub fn from_poly(germ: &PlaneCurveGerm, deformed: &Poly<RingElement>) -> Result<Self> {
        let ring = match deformed.terms().next() {
            Some((_, c)) => c.ring().clone(),
            None => TestRing::field(),
        };
        Self::from_poly_in(germ, &ring, deformed)
    }

    pub fn from_poly_in(germ: &PlaneCurveGerm, ring: &Arc<TestRing>, deformed: &Poly<RingElement>) -> Result<Self> {
        let deformed = deformed.embed(germ.f.vars())?;
        let diff = deformed.sub(&germ.f.over_ring(ring));
        let c = diff
            .terms()
            .map(|(m, v)| ((usize::from(m.exponent(0)), usize::from(m.exponent(1))), v.clone()))
            .collect();
        Self::new(germ, ring, c)
    }

    pub fn zero(germ: &PlaneCurveGerm, ring: &Arc<TestRing>) -> Self {
        CurveDeformation {
            germ: germ.clone(),
            ring: ring.clone(),
            c: BTreeMap::new(),
        }
    }

    pub fn germ(&self) -> &PlaneCurveGerm {
        &self.germ
    }

    pub fn ring(&self) -> &Arc<TestRing> {
        &self.ring
    }

    pub fn coefficients(&self) -> &BTreeMap<(usize, usize), RingElement> {
        &self.c
    }

    /// `f~` as a polynomial over the test-ring.
    pub fn deformed(&self) -> Poly<RingElement> {
        let mut p = self.germ.f.over_ring(&self.ring);
        for (&(i, j), v) in &self.c {
            p.add_term(Monomial::from_exponents(vec![i as u16, j as u16]), v.clone());
        }
        p
    }

    /// Base change along `sigma`.
    pub fn map(&self, sigma: &RingMorphism) -> Result<CurveDeformation> {
        if !TestRing::same(sigma.source(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        let c = self.c.iter().map(|(&k, v)| (k, sigma.apply(v))).collect();
        Self::new(&self.germ, sigma.target(), c)
    }
}

/// Canonical staged solve on a recentered curve.
///
/// `residual(delta)` must return `g(x, delta(x))`; `unit_inv` is the inverse
/// of `x^-m * dg/dy(x, 0)` reduced to the residue field. Each stage divides
/// the part of the residual above `x^m` by the base pivot and gains one
/// adic order, so `nu - 1` stages reach the exact solution; each stage
/// costs `m` coefficients of precision.
pub(crate) fn staged_solve(
    ring: &Arc<TestRing>,
    precision: usize,
    m: usize,
    unit_inv: &PowerSeries,
    residual: impl Fn(&PowerSeries) -> Result<PowerSeries>,
) -> Result<LiftResult> {
    let nu = ring.nilpotency() as usize;
    let needed = minimal_precision(nu, m);
    if precision < needed {
        return Err(Error::InsufficientPrecision {
            needed,
            available: precision,
        });
    }
    let final_precision = precision - (nu - 1) * m;
    let unit_inv = unit_inv.truncate(precision - m)?.lift_to(ring);

    let mut delta = PowerSeries::zero(ring, precision);
    for _ in 1..nu {
        let e = residual(&delta)?;
        let correction = &e.shift_down(m) * &unit_inv;
        if correction.is_zero() {
            break;
        }
        delta = &delta.truncate(correction.precision())? - &correction;
    }
    let delta = delta.truncate(final_precision)?;
    let e = residual(&delta)?;
    debug_assert!(e.shift_down(m).is_zero(), "staged solve did not converge");
    let obstructions: Vec<RingElement> = (0..m).map(|l| e.coeff(l).clone()).collect();
    let lift = obstructions.iter().all(RingElement::is_zero).then_some(delta);
    Ok(LiftResult { obstructions, lift })
}

/// Inverse of `x^-m * (df/dy)(x, h0(x))` over the residue field.
pub(crate) fn pivot_unit_inverse(fy_along_branch: &PowerSeries, m: usize) -> PowerSeries {
    fy_along_branch
        .reduce()
        .shift_down(m)
        .inverse()
        .expect("x^m is the exact order of df/dy along the branch")
}

/// Solves `g(x, delta) = low-degree residual` for a deformed curve given
/// directly as a series-coefficient family around its base branch.
///
/// `deformed` is `f~` and `h0` the base branch (rational); the base curve is
/// the reduction of `deformed`.
pub fn lift_series_curve(deformed: &SeriesCurve, h0: &PowerSeries, precision: usize) -> Result<LiftResult> {
    let ring = deformed.ring().clone();
    check_branch(h0, precision)?;
    let curve = deformed.truncate(precision)?;
    let h0_ring = h0.truncate(precision)?.lift_to(&ring);
    let g = curve.recenter(&h0_ring);
    let base = g.reduce();
    let zero = PowerSeries::zero(&TestRing::field(), precision);
    let m = multiplicity_of(&base, &zero, None)?;
    let unit_inv = pivot_unit_inverse(&base.derivative_y().eval(&zero), m);
    let result = staged_solve(&ring, precision, m, &unit_inv, |d| Ok(g.eval(d)))?;
    Ok(LiftResult {
        lift: result.lift.map(|d| &d + &h0_ring.truncate(d.precision()).unwrap()),
        obstructions: result.obstructions,
    })
}

/// Lifts the base branch to `f~`, or reports the obstructions.
///
/// Obstruction `o_l` is the `x^l` coefficient of `f~(x, h0 + delta)` once
/// the equations for `x^m, x^(m+1), ...` are solved. The lift, when present,
/// is known to precision `precision - (nu - 1) * m`.
pub fn lift_branch(def: &CurveDeformation, precision: usize) -> Result<LiftResult> {
    let germ = &def.germ;
    check_branch(&germ.h0, precision)?;
    let curve = SeriesCurve::from_poly(&def.deformed(), &def.ring, precision)?;
    let h0 = germ.h0.truncate(precision)?.lift_to(&def.ring);
    let g = curve.recenter(&h0);
    let unit_inv = germ_unit_inverse(germ, precision)?;
    let result = staged_solve(&def.ring, precision, germ.m, &unit_inv, |d| Ok(g.eval(d)))?;
    Ok(LiftResult {
        lift: result.lift.map(|d| &d + &h0.truncate(d.precision()).unwrap()),
        obstructions: result.obstructions,
    })
}

/// Same solve as [`lift_branch`], but every residual is computed by
/// substituting `y = h0 + delta` into `f~` itself, without recentering.
pub fn lift_branch_direct(def: &CurveDeformation, precision: usize) -> Result<LiftResult> {
    let germ = &def.germ;
    check_branch(&germ.h0, precision)?;
    let ring = &def.ring;
    let deformed = def.deformed();
    let h0 = germ.h0.truncate(precision)?.lift_to(ring);
    let unit_inv = germ_unit_inverse(germ, precision)?;
    let result = staged_solve(ring, precision, germ.m, &unit_inv, |d| {
        let p = d.precision();
        let y = &h0.truncate(p)? + d;
        deformed.substitute(ring, &[PowerSeries::var(ring, p), y], p)
    })?;
    Ok(LiftResult {
        lift: result.lift.map(|d| &d + &h0.truncate(d.precision()).unwrap()),
        obstructions: result.obstructions,
    })
}

fn germ_unit_inverse(germ: &PlaneCurveGerm, precision: usize) -> Result<PowerSeries> {
    let field = TestRing::field();
    let fy = SeriesCurve::from_poly(&germ.f, &field, precision)?
        .derivative_y()
        .eval(&germ.h0.truncate(precision)?);
    Ok(pivot_unit_inverse(&fy, germ.m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::int;

    fn xy_vars() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn poly(terms: &[((u16, u16), i64)]) -> Poly {
        Poly::from_terms(
            &xy_vars(),
            terms
                .iter()
                .map(|&((i, j), c)| (Monomial::from_exponents(vec![i, j]), int(c))),
        )
    }

    #[test]
    fn multiplicities() {
        let field = TestRing::field();
        let zero = PowerSeries::zero(&field, 16);
        assert_eq!(branch_multiplicity(&poly(&[((1, 1), 1)]), &zero, 16).unwrap(), 1);
        assert_eq!(branch_multiplicity(&poly(&[((2, 1), 1)]), &zero, 16).unwrap(), 2);
        let mut h0 = PowerSeries::zero(&field, 16);
        h0.set_coeff(2, RingElement::one(&field));
        let f = poly(&[((0, 2), 1), ((4, 0), -1)]);
        assert_eq!(branch_multiplicity(&f, &h0, 16).unwrap(), 2);
        assert_eq!(normalize_branch(&f, &h0).unwrap().render(), "2*x^2*y + y^2");
    }

    #[test]
    fn branch_off_curve_rejected() {
        let field = TestRing::field();
        let mut h0 = PowerSeries::zero(&field, 8);
        h0.set_coeff(1, RingElement::one(&field));
        let f = poly(&[((0, 1), 1)]);
        assert!(matches!(
            branch_multiplicity(&f, &h0, 8),
            Err(Error::BranchNotOnCurve(1))
        ));
        let f = poly(&[((0, 2), 1)]);
        let zero = PowerSeries::zero(&field, 8);
        assert!(matches!(
            branch_multiplicity(&f, &zero, 8),
            Err(Error::NonIsolatedContact)
        ));
    }

    #[test]
    fn dual_number_lifts() {
        let ring = TestRing::dual_numbers("e", 2);
        let e = RingElement::generator(&ring, 0);
        let germ = PlaneCurveGerm::on_axis(poly(&[((1, 1), 1)]), 32).unwrap();

        let def = CurveDeformation::new(&germ, &ring, [((1, 0), -&e)].into()).unwrap();
        let res = lift_branch(&def, 32).unwrap();
        assert!(res.obstructions[0].is_zero());
        let lift = res.lift.unwrap();
        assert_eq!(lift.coeff(0), &e);
        assert!(lift.coeffs()[1..].iter().all(RingElement::is_zero));

        let def = CurveDeformation::new(&germ, &ring, [((0, 0), e.clone())].into()).unwrap();
        let res = lift_branch(&def, 32).unwrap();
        assert_eq!(res.obstructions, vec![e]);
        assert!(res.lift.is_none());
    }
}
