//! The finite model: arc obstructions over the universal ring of
//! perturbations of the first `N + 1` coefficients of each `u`-component.

use std::sync::Arc;

use super::{eval_map, ArcDeformation, FormalArc, Hypersurface};
use crate::curve::{lift_series_curve, minimal_precision, series_multiplicity};
use crate::error::{Error, Result};
use crate::kernel::{PowerSeries, Rational, RingElement, RingMorphism, TestRing};

/// Equations in the variables `c_<u>_<k>` (`k = 0..=N`), truncated above
/// total degree `K`.
#[derive(Clone, Debug)]
pub struct FiniteModel {
    ring: Arc<TestRing>,
    u_names: Vec<String>,
    n: usize,
    k: u32,
    equations: Vec<RingElement>,
}

pub fn model_variable(u: &str, k: usize) -> String {
    format!("c_{u}_{k}")
}

impl FiniteModel {
    pub fn ring(&self) -> &Arc<TestRing> {
        &self.ring
    }

    pub fn variables(&self) -> &[String] {
        self.ring.generators()
    }

    /// Names of the perturbed components, in generator-block order.
    pub fn u_names(&self) -> &[String] {
        &self.u_names
    }

    pub fn equations(&self) -> &[RingElement] {
        &self.equations
    }

    pub fn truncation_degree(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Generator `c_{u_i, k}`.
    pub fn variable(&self, i: usize, k: usize) -> RingElement {
        RingElement::generator(&self.ring, i * (self.n + 1) + k)
    }

    /// Sends `c_{u_i,k}` to the `t^k` coefficient of `du_i`. The
    /// deformation must be polynomial of degree at most `N`, over a ring
    /// with `m^(K+1) = 0`.
    pub fn specialization(&self, def: &ArcDeformation) -> Result<RingMorphism> {
        let mut images = Vec::with_capacity(self.ring.ngens());
        for d in def.du() {
            if let Some(deg) = d.degree() {
                if deg > self.n {
                    return Err(Error::Parameter(format!(
                        "deformation has degree {deg}, model covers degree {}",
                        self.n
                    )));
                }
            }
            for k in 0..=self.n {
                images.push(
                    d.try_coeff(k)
                        .cloned()
                        .unwrap_or_else(|_| RingElement::zero(def.ring())),
                );
            }
        }
        RingMorphism::new(&self.ring, def.ring(), images)
    }

    /// Values of the equations at a polynomial deformation.
    pub fn evaluate(&self, def: &ArcDeformation) -> Result<Vec<RingElement>> {
        let sigma = self.specialization(def)?;
        Ok(self.equations.iter().map(|e| sigma.apply(e)).collect())
    }
}

/// Arc obstructions of `gamma + sum_k c_{u_i,k} t^k` over
/// `Q[c] / (c)^(K+1)`.
pub fn finite_model(h: &Hypersurface, gamma: &FormalArc, n: usize, k: u32, precision: usize) -> Result<FiniteModel> {
    if k < 2 {
        return Err(Error::Parameter(format!("truncation degree {k} must be at least 2")));
    }
    for &i in &h.u_indices() {
        if let Some(deg) = gamma.comp(i).degree() {
            if deg > n {
                return Err(Error::Parameter(format!(
                    "component `{}` has degree {deg} > N = {n}",
                    h.vars()[i]
                )));
            }
        }
    }
    let u_names = h.u_names();
    let names = u_names
        .iter()
        .flat_map(|u| (0..=n).map(move |j| model_variable(u, j)))
        .collect();
    let ring = TestRing::truncated(names, k + 1)?;

    let field = TestRing::field();
    let base = eval_map(h, gamma, &ArcDeformation::zero(&field, h.dim(), precision), precision)?;
    let m = series_multiplicity(&base.base, &base.branch)?;
    let pivot = base.base.derivative_y().eval(&base.branch).coeff(m).residue();
    let needed = minimal_precision(k as usize + 1, m);
    if precision < needed {
        return Err(Error::InsufficientPrecision {
            needed,
            available: precision,
        });
    }
    // the obstructions only involve the first nu*m coefficients
    let precision = needed;

    let du = (0..h.dim())
        .map(|i| {
            let coeffs = (0..precision)
                .map(|j| {
                    if j <= n {
                        RingElement::generator(&ring, i * (n + 1) + j)
                    } else {
                        RingElement::zero(&ring)
                    }
                })
                .collect();
            PowerSeries::from_coeffs(&ring, coeffs)
        })
        .collect();
    let def = ArcDeformation::new(&ring, du)?;
    let data = eval_map(h, gamma, &def, precision)?;
    let raw = lift_series_curve(&data.curve, &data.branch, precision)?;
    let scale = -Rational::from_integer(1.into()) / pivot;
    let equations = raw.obstructions.iter().map(|o| o.scale(&scale)).collect();
    Ok(FiniteModel {
        ring,
        u_names,
        n,
        k,
        equations,
    })
}
