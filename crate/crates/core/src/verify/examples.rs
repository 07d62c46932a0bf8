//! The three worked examples on the quadric cone `x*y = z.z`, each with its
//! finite model `Y` and versal map `alpha`.

use std::sync::Arc;

use crate::arc::{FormalArc, Hypersurface};
use crate::error::{Error, Result};
use crate::expr::parse::parse_poly;
use crate::kernel::{Poly, PowerSeries, RingElement, TestRing};

#[derive(Clone, Debug)]
pub struct WorkedExample {
    pub id: u8,
    pub r: usize,
    pub hypersurface: Hypersurface,
    /// Base arc, one polynomial in `t` per hypersurface variable.
    pub gamma: Vec<Poly>,
    /// Coordinates on `Y`.
    pub chart_vars: Vec<String>,
    /// Equations of `Y` in the chart variables.
    pub y_equations: Vec<Poly>,
    /// One polynomial in the chart variables and `t` per hypersurface
    /// variable.
    pub alpha: Vec<Poly>,
}

fn z_names(r: usize) -> Vec<String> {
    (1..=r).map(|j| format!("z_{j}")).collect()
}

fn indexed(prefix: &str, r: usize) -> Vec<String> {
    (1..=r).map(|j| format!("{prefix}_{j}")).collect()
}

/// `p.q` for two vectors of names, as expression text.
fn dot(p: &[String], q: &[String]) -> String {
    p.iter()
        .zip(q)
        .map(|(a, b)| format!("{a}*{b}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

impl WorkedExample {
    /// Example `id` with `z` of dimension `r`. Example 1 is the scalar case
    /// and ignores `r`.
    pub fn new(id: u8, r: usize) -> Result<WorkedExample> {
        if !(1..=3).contains(&r) {
            return Err(Error::Parameter(format!("r must be between 1 and 3, got {r}")));
        }
        let (zs, r) = match id {
            1 => (vec!["z".to_string()], 1),
            2 | 3 => (z_names(r), r),
            _ => return Err(Error::Parameter(format!("example must be 1, 2 or 3, got {id}"))),
        };
        let mut vars = vec!["x".to_string(), "y".to_string()];
        vars.extend(zs.iter().cloned());
        let phi = parse_poly(&format!("x*y - ({})", dot(&zs, &zs)), &vars)?;
        let hypersurface = Hypersurface::new(phi, "y")?;
        let t = vec!["t".to_string()];

        let (x0, chart_vars, y_eqs, alpha_x, alpha_y, alpha_z): (_, Vec<String>, Vec<String>, _, _, Vec<String>) =
            match id {
                1 => (
                    "t",
                    vec!["a".into()],
                    vec!["a^2".into()],
                    "t".to_string(),
                    "0".to_string(),
                    vec!["a".into()],
                ),
                2 => {
                    let w = indexed("w", r);
                    (
                        "t",
                        w.clone(),
                        vec![dot(&w, &w)],
                        "t".to_string(),
                        "0".to_string(),
                        w.clone(),
                    )
                }
                _ => {
                    let v = indexed("v", r);
                    let w = indexed("w", r);
                    let mut chart = vec!["a".to_string(), "b".to_string()];
                    chart.extend(v.iter().cloned());
                    chart.extend(w.iter().cloned());
                    let ww = dot(&w, &w);
                    (
                        "t^2",
                        chart,
                        vec![
                            format!("a*({ww}) - ({})", dot(&v, &v)),
                            format!("b*({ww}) - 2*({})", dot(&v, &w)),
                        ],
                        "a + b*t + t^2".to_string(),
                        ww.clone(),
                        v.iter().zip(&w).map(|(vj, wj)| format!("{vj} + t*{wj}")).collect(),
                    )
                }
            };

        let mut gamma = vec![parse_poly(x0, &t)?, Poly::zero(&t)];
        gamma.extend((0..r).map(|_| Poly::zero(&t)));

        let y_equations = y_eqs
            .iter()
            .map(|e| parse_poly(e, &chart_vars))
            .collect::<Result<Vec<_>>>()?;
        let mut alpha_vars = chart_vars.clone();
        alpha_vars.push("t".into());
        let mut alpha = vec![parse_poly(&alpha_x, &alpha_vars)?, parse_poly(&alpha_y, &alpha_vars)?];
        for z in &alpha_z {
            alpha.push(parse_poly(z, &alpha_vars)?);
        }
        Ok(WorkedExample {
            id,
            r,
            hypersurface,
            gamma,
            chart_vars,
            y_equations,
            alpha,
        })
    }

    /// All examples at the given `r`.
    pub fn all(r: usize) -> Result<Vec<WorkedExample>> {
        (1..=3).map(|id| WorkedExample::new(id, r)).collect()
    }

    pub fn gamma_arc(&self, precision: usize) -> Result<FormalArc> {
        let q = TestRing::field();
        let comps = self
            .gamma
            .iter()
            .map(|p| p.to_series(&q, precision))
            .collect::<Result<Vec<_>>>()?;
        Ok(FormalArc::new(&q, comps))
    }

    /// `alpha` at a point of the chart with coordinates in `ring`.
    pub fn alpha_arc(&self, ring: &Arc<TestRing>, point: &[RingElement], precision: usize) -> Result<FormalArc> {
        if point.len() != self.chart_vars.len() {
            return Err(Error::Parameter(format!(
                "{} coordinates for {} chart variables",
                point.len(),
                self.chart_vars.len()
            )));
        }
        let mut images: Vec<PowerSeries> = point.iter().map(|c| PowerSeries::constant(c, precision)).collect();
        images.push(PowerSeries::var(ring, precision));
        let comps = self
            .alpha
            .iter()
            .map(|p| p.substitute(ring, &images, precision))
            .collect::<Result<Vec<_>>>()?;
        Ok(FormalArc::new(ring, comps))
    }

    /// `Y`'s equations evaluated at a point.
    pub fn y_values(&self, ring: &Arc<TestRing>, point: &[RingElement]) -> Vec<RingElement> {
        self.y_equations.iter().map(|e| e.eval_ring(ring, point)).collect()
    }

    pub fn is_y_point(&self, ring: &Arc<TestRing>, point: &[RingElement]) -> bool {
        self.y_values(ring, point).iter().all(RingElement::is_zero)
    }
}
