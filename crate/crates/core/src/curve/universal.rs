//! Obstructions over the universal truncated coefficient ring.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{minimal_precision, pivot_unit_inverse, staged_solve, PlaneCurveGerm, SeriesCurve};
use crate::error::{Error, Result};
use crate::kernel::{Monomial, PowerSeries, RingElement, RingMorphism, TestRing};

/// Series `s_l` with `o_l = c_{l,0} - s_l(c)` for every perturbation of the
/// branch-normalized germ, truncated above total degree `K`.
#[derive(Clone, Debug)]
pub struct UniversalModel {
    ring: Arc<TestRing>,
    index: Vec<(usize, usize)>,
    truncation: u32,
    series: Vec<RingElement>,
}

pub fn coefficient_name(i: usize, j: usize) -> String {
    format!("c_{i}_{j}")
}

impl UniversalModel {
    /// `Q[c_{i,j}] / (c)^(K+1)`.
    pub fn ring(&self) -> &Arc<TestRing> {
        &self.ring
    }

    /// `(i, j)` of each generator, in generator order.
    pub fn index(&self) -> &[(usize, usize)] {
        &self.index
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn multiplicity(&self) -> usize {
        self.series.len()
    }

    pub fn series(&self) -> &[RingElement] {
        &self.series
    }

    pub fn generator(&self, i: usize, j: usize) -> Option<RingElement> {
        RingElement::generator_named(&self.ring, &coefficient_name(i, j))
    }

    /// `c_{l,0} - s_l`.
    pub fn obstruction(&self, l: usize) -> RingElement {
        let c = self.generator(l, 0).expect("c_{l,0} is a generator");
        &c - &self.series[l]
    }

    /// Obstructions of the specialization `c_{i,j} -> values[(i, j)]`
    /// (missing entries are zero). The target ring needs `m^(K+1) = 0`.
    pub fn specialize(
        &self,
        target: &Arc<TestRing>,
        values: &BTreeMap<(usize, usize), RingElement>,
    ) -> Result<Vec<RingElement>> {
        let images = self
            .index
            .iter()
            .map(|k| values.get(k).cloned().unwrap_or_else(|| RingElement::zero(target)))
            .collect();
        let sigma = RingMorphism::new(&self.ring, target, images)?;
        Ok((0..self.multiplicity())
            .map(|l| sigma.apply(&self.obstruction(l)))
            .collect())
    }
}

/// Runs the staged solve for `g + sum c_{i,j} x^i y^j` with every
/// `c_{i,j}`, `0 <= i, j <= M`, a generator of the universal ring, where `g`
/// is the germ moved so that its branch is the x-axis.
pub fn universal_obstructions(germ: &PlaneCurveGerm, k: u32, precision: usize) -> Result<UniversalModel> {
    if k < 2 {
        return Err(Error::Parameter(format!("truncation degree {k} must be at least 2")));
    }
    let bound = germ.degree_bound();
    let index: Vec<(usize, usize)> = (0..=bound).flat_map(|i| (0..=bound).map(move |j| (i, j))).collect();
    let names = index.iter().map(|&(i, j)| coefficient_name(i, j)).collect();
    let ring = TestRing::truncated(names, k + 1)?;
    let m = germ.multiplicity();
    let needed = minimal_precision(k as usize + 1, m);
    if precision < needed {
        return Err(Error::InsufficientPrecision {
            needed,
            available: precision,
        });
    }
    // Obstructions only see the first nu*m coefficients.
    let precision = needed;

    let mut deformed = germ.normalized_poly().over_ring(&ring);
    for (n, &(i, j)) in index.iter().enumerate() {
        deformed.add_term(
            Monomial::from_exponents(vec![i as u16, j as u16]),
            RingElement::generator(&ring, n),
        );
    }
    let g = SeriesCurve::from_poly(&deformed, &ring, precision)?;
    let field = TestRing::field();
    let base = SeriesCurve::from_poly(germ.normalized_poly(), &field, precision)?;
    let fy = base.derivative_y().eval(&PowerSeries::zero(&field, precision));
    let unit_inv = pivot_unit_inverse(&fy, m);
    let result = staged_solve(&ring, precision, m, &unit_inv, |d| Ok(g.eval(d)))?;
    let series = result
        .obstructions
        .iter()
        .enumerate()
        .map(|(l, o)| {
            let c = RingElement::generator_named(&ring, &coefficient_name(l, 0)).unwrap();
            &c - o
        })
        .collect();
    Ok(UniversalModel {
        ring,
        index,
        truncation: k,
        series,
    })
}
