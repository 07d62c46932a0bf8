//! Arcs on a hypersurface `phi(u, z) = 0`, their deformations over
//! test-rings, and the reduction of arc lifting to branch lifting.
//!
//! A deformation perturbs the `u`-components of a base arc; it lifts to the
//! hypersurface when the transverse component `z` can be solved for. Along
//! the arc this is the plane-curve problem `phi(u(x), y) = 0` in the arc
//! parameter `x` and the transverse coordinate `y`, with the base arc's
//! `z`-component as branch.

mod flow;
mod model;

pub use flow::{flow_arc, product_chart, transverse_order, truncate_arc, FlowSpec, Truncation};
pub use model::{finite_model, model_variable, FiniteModel};

use std::sync::Arc;

use crate::curve::{lift_series_curve, series_multiplicity, SeriesCurve};
use crate::error::{Error, Result};
use crate::kernel::{Poly, PowerSeries, Rational, RingElement, RingMorphism, TestRing};

/// `phi(u_1, ..., u_d, z) = 0`, with one variable singled out as transverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypersurface {
    phi: Poly,
    transverse: usize,
}

impl Hypersurface {
    pub fn new(phi: Poly, transverse: &str) -> Result<Self> {
        let transverse = phi
            .var_index(transverse)
            .ok_or_else(|| Error::UnknownVariable(transverse.to_string()))?;
        if phi.constant_term().is_some() {
            return Err(Error::InvalidHypersurface(
                "equation does not vanish at the origin".into(),
            ));
        }
        if phi.degree_in(transverse) == 0 {
            return Err(Error::InvalidHypersurface(format!(
                "equation does not involve the transverse variable `{}`",
                phi.vars()[transverse]
            )));
        }
        if phi.vars().len() < 2 {
            return Err(Error::InvalidHypersurface(
                "need at least one non-transverse variable".into(),
            ));
        }
        Ok(Hypersurface { phi, transverse })
    }

    pub fn phi(&self) -> &Poly {
        &self.phi
    }

    pub fn vars(&self) -> &[String] {
        self.phi.vars()
    }

    pub fn nvars(&self) -> usize {
        self.phi.vars().len()
    }

    pub fn transverse(&self) -> usize {
        self.transverse
    }

    pub fn transverse_name(&self) -> &str {
        &self.phi.vars()[self.transverse]
    }

    /// Variable indices of `u_1 .. u_d`.
    pub fn u_indices(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| i != self.transverse).collect()
    }

    pub fn u_names(&self) -> Vec<String> {
        self.u_indices()
            .into_iter()
            .map(|i| self.phi.vars()[i].clone())
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.nvars() - 1
    }

    /// Variable index of `u_i` (zero-based).
    pub fn u_var(&self, i: usize) -> usize {
        if i < self.transverse {
            i
        } else {
            i + 1
        }
    }

    /// `phi` along an arc.
    pub fn eval(&self, arc: &FormalArc) -> Result<PowerSeries> {
        self.phi.substitute(&arc.ring, &arc.comps, arc.precision())
    }

    pub fn contains(&self, arc: &FormalArc) -> Result<bool> {
        Ok(self.eval(arc)?.is_zero())
    }

    /// `phi_j(u)`, the coefficient of `z^j`, as polynomials in the `u`.
    fn z_coefficients(&self) -> Vec<Poly> {
        self.phi.collect_in(self.transverse)
    }
}

/// An arc: one series per hypersurface variable, in variable order.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalArc {
    ring: Arc<TestRing>,
    comps: Vec<PowerSeries>,
}

impl FormalArc {
    pub fn new(ring: &Arc<TestRing>, comps: Vec<PowerSeries>) -> Self {
        for c in &comps {
            assert!(TestRing::same(c.ring(), ring), "ring mismatch");
        }
        FormalArc {
            ring: ring.clone(),
            comps,
        }
    }

    pub fn ring(&self) -> &Arc<TestRing> {
        &self.ring
    }

    pub fn comps(&self) -> &[PowerSeries] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &PowerSeries {
        &self.comps[i]
    }

    pub fn precision(&self) -> usize {
        self.comps.iter().map(PowerSeries::precision).min().unwrap_or(0)
    }

    pub fn truncate(&self, precision: usize) -> Result<FormalArc> {
        Ok(FormalArc {
            ring: self.ring.clone(),
            comps: self
                .comps
                .iter()
                .map(|c| c.truncate(precision))
                .collect::<Result<_>>()?,
        })
    }

    /// Same rational arc read over another ring.
    pub fn lift_to(&self, ring: &Arc<TestRing>) -> FormalArc {
        FormalArc {
            ring: ring.clone(),
            comps: self.comps.iter().map(|c| c.lift_to(ring)).collect(),
        }
    }

    pub fn map(&self, f: &RingMorphism) -> FormalArc {
        FormalArc {
            ring: f.target().clone(),
            comps: self.comps.iter().map(|c| c.map(f)).collect(),
        }
    }

    pub fn reduce(&self) -> FormalArc {
        FormalArc {
            ring: TestRing::field(),
            comps: self.comps.iter().map(PowerSeries::reduce).collect(),
        }
    }
}

/// Perturbation `du` of the `u`-components of a base arc, with every
/// coefficient in the maximal ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcDeformation {
    ring: Arc<TestRing>,
    du: Vec<PowerSeries>,
}

impl ArcDeformation {
    pub fn new(ring: &Arc<TestRing>, du: Vec<PowerSeries>) -> Result<Self> {
        for d in &du {
            if !TestRing::same(d.ring(), ring) {
                return Err(Error::RingMismatch);
            }
            if !d.all_in_maximal_ideal() {
                return Err(Error::InvalidArc(
                    "deformation coefficients must lie in the maximal ideal".into(),
                ));
            }
        }
        Ok(ArcDeformation { ring: ring.clone(), du })
    }

    pub fn zero(ring: &Arc<TestRing>, dim: usize, precision: usize) -> Self {
        ArcDeformation {
            ring: ring.clone(),
            du: vec![PowerSeries::zero(ring, precision); dim],
        }
    }

    pub fn ring(&self) -> &Arc<TestRing> {
        &self.ring
    }

    pub fn du(&self) -> &[PowerSeries] {
        &self.du
    }

    pub fn precision(&self) -> usize {
        self.du.iter().map(PowerSeries::precision).min().unwrap_or(usize::MAX)
    }

    pub fn map(&self, f: &RingMorphism) -> ArcDeformation {
        ArcDeformation {
            ring: f.target().clone(),
            du: self.du.iter().map(|d| d.map(f)).collect(),
        }
    }
}

/// The plane-curve data of an arc deformation: `sum_j phi_j(u(x) + du(x)) y^j`
/// over the test-ring, the undeformed curve over the rationals, and the
/// branch `y = z(x)` of the base arc.
#[derive(Clone, Debug)]
pub struct EvalMap {
    pub curve: SeriesCurve,
    pub base: SeriesCurve,
    pub branch: PowerSeries,
}

fn check_base(h: &Hypersurface, gamma: &FormalArc, precision: usize) -> Result<()> {
    if !gamma.ring.is_field() {
        return Err(Error::InvalidArc("base arc must have rational coefficients".into()));
    }
    if gamma.comps.len() != h.nvars() {
        return Err(Error::InvalidArc(format!(
            "arc has {} components for {} variables",
            gamma.comps.len(),
            h.nvars()
        )));
    }
    if gamma.precision() < precision {
        return Err(Error::InsufficientPrecision {
            needed: precision,
            available: gamma.precision(),
        });
    }
    Ok(())
}

/// Substitutes the deformed projection into `phi`, leaving the transverse
/// variable free.
pub fn eval_map(h: &Hypersurface, gamma: &FormalArc, def: &ArcDeformation, precision: usize) -> Result<EvalMap> {
    check_base(h, gamma, precision)?;
    if def.du.len() != h.dim() {
        return Err(Error::InvalidArc(format!(
            "deformation has {} components for {} projected variables",
            def.du.len(),
            h.dim()
        )));
    }
    let ring = &def.ring;
    let gamma = gamma.truncate(precision)?;
    let u_base: Vec<PowerSeries> = h.u_indices().iter().map(|&i| gamma.comps[i].clone()).collect();
    let u_def: Vec<PowerSeries> = u_base
        .iter()
        .zip(&def.du)
        .map(|(b, d)| Ok(&b.lift_to(ring) + &d.truncate(precision)?))
        .collect::<Result<_>>()?;
    let field = TestRing::field();
    let mut curve = Vec::new();
    let mut base = Vec::new();
    for q in h.z_coefficients() {
        curve.push(q.substitute(ring, &u_def, precision)?);
        base.push(q.substitute(&field, &u_base, precision)?);
    }
    Ok(EvalMap {
        curve: SeriesCurve::new(ring, curve),
        base: SeriesCurve::new(&field, base),
        branch: gamma.comps[h.transverse].clone(),
    })
}

/// Multiplicity of the base arc: the t-order of `d phi / dz` along it.
pub fn arc_multiplicity(h: &Hypersurface, gamma: &FormalArc, precision: usize) -> Result<usize> {
    let field = TestRing::field();
    let data = eval_map(h, gamma, &ArcDeformation::zero(&field, h.dim(), precision), precision)?;
    series_multiplicity(&data.base, &data.branch)
}

/// `a_{m,1}`: the leading coefficient of `d phi / dz` along the base arc.
pub fn arc_pivot(h: &Hypersurface, gamma: &FormalArc, precision: usize) -> Result<Rational> {
    let field = TestRing::field();
    let data = eval_map(h, gamma, &ArcDeformation::zero(&field, h.dim(), precision), precision)?;
    let m = series_multiplicity(&data.base, &data.branch)?;
    Ok(data.base.derivative_y().eval(&data.branch).coeff(m).residue())
}

/// Result of lifting an arc deformation.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcLift {
    /// Branch obstructions scaled by `-1 / a_{m,1}`.
    pub obstructions: Vec<RingElement>,
    /// The lifted arc, when every obstruction vanishes.
    pub lift: Option<FormalArc>,
}

impl ArcLift {
    pub fn is_liftable(&self) -> bool {
        self.lift.is_some()
    }
}

/// Lifts `gamma + du` to the hypersurface by solving for the transverse
/// component.
///
/// The obstructions are the branch obstructions of [`eval_map`]'s curve,
/// scaled by `-1/a_{m,1}`, where `a_{m,1}` is the leading coefficient of
/// `d phi / dz` along the base arc.
pub fn lift_arc(h: &Hypersurface, gamma: &FormalArc, def: &ArcDeformation, precision: usize) -> Result<ArcLift> {
    let data = eval_map(h, gamma, def, precision)?;
    let m = series_multiplicity(&data.base, &data.branch)?;
    let pivot = data.base.derivative_y().eval(&data.branch).coeff(m).residue();
    let scale = -Rational::from_integer(1.into()) / pivot;
    let raw = lift_series_curve(&data.curve, &data.branch, precision)?;
    let obstructions = raw.obstructions.iter().map(|o| o.scale(&scale)).collect();
    let lift = match raw.lift {
        None => None,
        Some(z) => {
            let p = z.precision();
            let ring = &def.ring;
            let mut comps = Vec::with_capacity(h.nvars());
            let mut u = 0;
            for i in 0..h.nvars() {
                if i == h.transverse {
                    comps.push(z.clone());
                } else {
                    let base = gamma.comps[i].truncate(p)?.lift_to(ring);
                    comps.push(&base + &def.du[u].truncate(p)?);
                    u += 1;
                }
            }
            Some(FormalArc::new(ring, comps))
        }
    };
    Ok(ArcLift { obstructions, lift })
}

/// The base arc with its projection replaced by `du`-perturbed components
/// and the rest taken from `arc`: `du = p(arc) - p(gamma)`.
pub fn projection_difference(h: &Hypersurface, gamma: &FormalArc, arc: &FormalArc) -> Result<ArcDeformation> {
    let ring = arc.ring();
    let p = arc.precision();
    let du = h
        .u_indices()
        .iter()
        .map(|&i| Ok(&arc.comps[i] - &gamma.comps[i].truncate(p)?.lift_to(ring)))
        .collect::<Result<Vec<_>>>()?;
    ArcDeformation::new(ring, du)
}
