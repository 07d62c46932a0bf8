//! Checks on the worked examples: the identity `phi(alpha) = 0` modulo `Y`,
//! agreement of `Y` with lifting over sampled test-ring points, and the
//! quadratic leading forms of the finite model.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use super::examples::WorkedExample;
use super::linalg::{ideal_certificate, same_span};
use crate::arc::{
    finite_model, lift_arc, product_chart, projection_difference, transverse_order, ArcDeformation, FiniteModel,
};
use crate::error::{Error, Result};
use crate::expr::report::Check;
use crate::kernel::{rational, Monomial, Poly, RingElement, RingMorphism, TestRing};
use crate::sample;

/// `p(images)` for polynomial images over a common variable list.
pub fn compose(p: &Poly, images: &[Poly]) -> Poly {
    let vars = images[0].vars().to_vec();
    let mut out = Poly::zero(&vars);
    for (m, q) in p.terms() {
        let mut term = Poly::constant(&vars, q.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                term = term.mul(&images[i].pow(u32::from(e), rational::one()));
            }
        }
        out = out.add(&term);
    }
    out
}

/// `phi(alpha)` reduces to zero modulo the ideal of `Y`. The reduction is
/// witnessed by explicit cofactors.
pub fn check_alpha_identity(ex: &WorkedExample) -> Check {
    let composed = compose(ex.hypersurface.phi(), &ex.alpha);
    let vars = composed.vars().to_vec();
    let gens: Vec<Poly> = ex
        .y_equations
        .iter()
        .map(|g| g.embed(&vars).expect("chart variables are alpha variables"))
        .collect();
    let bound = composed.total_degree();
    let mut check = Check::new("alpha-identity", false).detail("phi(alpha)", composed.render());
    match ideal_certificate(&composed, &gens, bound) {
        Some(cofactors) => {
            check.passed = true;
            for (i, c) in cofactors.iter().enumerate() {
                check = check.detail(format!("cofactor.{}", i + 1), c.render());
            }
        }
        None => check = check.detail("reason", "no cofactors found"),
    }
    check
}

/// Random element of `m^s`.
fn deep_element(rng: &mut impl Rng, ring: &Arc<TestRing>, s: u32) -> RingElement {
    let e = sample::element(rng, ring, true, 0.6);
    RingElement::from_terms(
        ring,
        e.terms()
            .filter(|(m, _)| m.degree() >= s)
            .map(|(m, q)| (m.clone(), q.clone())),
    )
}

/// A coordinate with nonzero linear part: a multiple of one generator or a
/// random nilpotent, plus a random element of `m^s`.
fn active_element(rng: &mut impl Rng, ring: &Arc<TestRing>, s: u32) -> RingElement {
    let lead = if ring.ngens() > 0 && rng.gen_bool(0.5) {
        let g = rng.gen_range(0..ring.ngens());
        RingElement::generator(ring, g).scale(&sample::small_rational(rng))
    } else {
        sample::nilpotent(rng, ring)
    };
    &lead + &deep_element(rng, ring, s)
}

/// Samples a point of `Y` with coordinates in the maximal ideal of `ring`.
///
/// Candidates mix coordinates deep in the maximal ideal (where equations
/// without linear terms vanish automatically) with coordinates that have
/// random linear parts; only exact solutions are returned.
pub fn sample_y_point(
    ex: &WorkedExample,
    ring: &Arc<TestRing>,
    rng: &mut impl Rng,
    attempts: usize,
) -> Option<Vec<RingElement>> {
    let s = ring.nilpotency().div_ceil(2).max(1);
    for _ in 0..attempts {
        let point: Vec<RingElement> = (0..ex.chart_vars.len())
            .map(|_| {
                if rng.gen_bool(0.5) {
                    active_element(rng, ring, s)
                } else {
                    deep_element(rng, ring, s)
                }
            })
            .collect();
        if ex.is_y_point(ring, &point) {
            return Some(point);
        }
    }
    None
}

/// Samples a point violating some equation of `Y`.
pub fn sample_violation(
    ex: &WorkedExample,
    ring: &Arc<TestRing>,
    rng: &mut impl Rng,
    attempts: usize,
) -> Option<Vec<RingElement>> {
    for _ in 0..attempts {
        let point: Vec<RingElement> = (0..ex.chart_vars.len()).map(|_| sample::nilpotent(rng, ring)).collect();
        if !ex.is_y_point(ring, &point) {
            return Some(point);
        }
    }
    None
}

/// `du = p(alpha(point)) - p(gamma)`.
pub fn alpha_deformation(
    ex: &WorkedExample,
    ring: &Arc<TestRing>,
    point: &[RingElement],
    precision: usize,
) -> Result<ArcDeformation> {
    let gamma = ex.gamma_arc(precision)?;
    let arc = ex.alpha_arc(ring, point, precision)?;
    projection_difference(&ex.hypersurface, &gamma, &arc)
}

fn render_point(ex: &WorkedExample, point: &[RingElement]) -> String {
    ex.chart_vars
        .iter()
        .zip(point)
        .map(|(v, c)| format!("{v}={}", c.render()))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Sample sizes for [`check_model_consistency`].
#[derive(Clone, Copy, Debug)]
pub struct Sampling {
    pub points: usize,
    pub violations: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            points: 20,
            violations: 20,
            seed: 0,
        }
    }
}

/// Points of `Y` pushed through `alpha` must lift and satisfy the model
/// equations, and must still lift after moving along random product-chart
/// coordinates. Points violating `Y` must not lift.
pub fn check_model_consistency(
    ex: &WorkedExample,
    ring: &Arc<TestRing>,
    n: usize,
    k: u32,
    precision: usize,
    sampling: Sampling,
) -> Result<Check> {
    let gamma = ex.gamma_arc(precision)?;
    let model = finite_model(&ex.hypersurface, &gamma, n, k, precision)?;
    check_model_consistency_with(ex, &model, ring, precision, sampling)
}

/// As [`check_model_consistency`] with a precomputed model.
pub fn check_model_consistency_with(
    ex: &WorkedExample,
    model: &FiniteModel,
    ring: &Arc<TestRing>,
    precision: usize,
    sampling: Sampling,
) -> Result<Check> {
    let k = model.k();
    if ring.nilpotency() > k + 1 {
        return Err(Error::Parameter(format!(
            "{} has m^{} != 0; the model is truncated above degree {k}",
            ring.label(),
            k + 1
        )));
    }
    let n = model.truncation_degree();
    let h = &ex.hypersurface;
    let gamma = ex.gamma_arc(precision)?;
    let order = transverse_order(h, &gamma)?;
    let name = format!("model-consistency[{}]", ring.label());
    let stream = ring.label().bytes().fold(u64::from(ex.id), |acc, b| {
        acc.wrapping_mul(31).wrapping_add(u64::from(b))
    });
    let mut rng = sample::rng(sampling.seed, stream);
    let mut failures: Vec<String> = Vec::new();
    let mut points = 0;
    let mut linear = 0;
    for _ in 0..sampling.points {
        let Some(point) = sample_y_point(ex, ring, &mut rng, 400) else {
            failures.push("no point of Y found".into());
            break;
        };
        points += 1;
        if point.iter().any(|c| !c.homogeneous_part(1).is_zero()) {
            linear += 1;
        }
        let def = alpha_deformation(ex, ring, &point, precision)?;
        let lift = lift_arc(h, &gamma, &def, precision)?;
        if !lift.obstructions.iter().all(RingElement::is_zero) {
            failures.push(format!("alpha({}) does not lift", render_point(ex, &point)));
            continue;
        }
        if !model.evaluate(&def)?.iter().all(RingElement::is_zero) {
            failures.push(format!(
                "model equations do not vanish at alpha({})",
                render_point(ex, &point)
            ));
            continue;
        }
        let mut chart = BTreeMap::new();
        for i in 0..h.dim() {
            for kk in (n + 1 - order)..=(n + 2 - order) {
                if rng.gen_bool(0.5) {
                    chart.insert((i, kk), sample::nilpotent(&mut rng, ring));
                }
            }
        }
        let moved = product_chart(h, &gamma, &def, &chart, n, precision)?;
        if !lift_arc(h, &gamma, &moved, moved.precision())?
            .obstructions
            .iter()
            .all(RingElement::is_zero)
        {
            failures.push(format!(
                "chart image of alpha({}) does not lift",
                render_point(ex, &point)
            ));
        }
    }

    let mut violations = 0;
    if ring.nilpotency() >= 3 {
        for _ in 0..sampling.violations {
            let Some(point) = sample_violation(ex, ring, &mut rng, 400) else {
                failures.push("no violation of Y found".into());
                break;
            };
            violations += 1;
            let def = alpha_deformation(ex, ring, &point, precision)?;
            let lift = lift_arc(h, &gamma, &def, precision)?;
            if lift.obstructions.iter().all(RingElement::is_zero) {
                failures.push(format!(
                    "alpha({}) lifts although it violates Y",
                    render_point(ex, &point)
                ));
            }
            if model.evaluate(&def)?.iter().all(RingElement::is_zero) {
                failures.push(format!(
                    "model equations vanish at violation {}",
                    render_point(ex, &point)
                ));
            }
        }
    }

    let mut check = Check::new(name, failures.is_empty())
        .detail("points", points)
        .detail("points_with_linear_part", linear)
        .detail("violations", violations);
    if let Some(f) = failures.first() {
        check = check.detail("first_failure", f).detail("failures", failures.len());
    }
    Ok(check)
}

/// A test-ring element as a polynomial in the ring's generators.
pub fn element_poly(e: &RingElement) -> Poly {
    Poly::from_terms(e.ring().generators(), e.terms().map(|(m, q)| (m.clone(), q.clone())))
}

/// Chart variables that appear verbatim as a coefficient of `alpha - gamma`,
/// paired with the model variable of that coefficient.
pub fn correspondence(ex: &WorkedExample, model: &FiniteModel) -> BTreeMap<String, String> {
    let h = &ex.hypersurface;
    let mut out = BTreeMap::new();
    let nchart = ex.chart_vars.len();
    for (i, &v) in h.u_indices().iter().enumerate() {
        let gamma = ex.gamma[v]
            .embed(&[ex.chart_vars.clone(), vec!["t".into()]].concat())
            .expect("t is an alpha variable");
        let diff = ex.alpha[v].sub(&gamma);
        for (kk, part) in diff.collect_in(nchart).into_iter().enumerate() {
            let mut terms = part.terms();
            if let (Some((m, q)), None) = (terms.next(), terms.next()) {
                if m.degree() == 1 && rational::is_one(q) {
                    let var = m.exponents().iter().position(|&e| e == 1).unwrap();
                    if kk <= model.truncation_degree() {
                        out.insert(
                            ex.chart_vars[var].clone(),
                            model.variables()[i * (model.truncation_degree() + 1) + kk].clone(),
                        );
                    }
                }
            }
        }
    }
    out
}

/// Renames the variables of `p` along `map` into the polynomial ring over
/// `target`.
fn rename(p: &Poly, map: &BTreeMap<String, String>, target: &[String]) -> Result<Poly> {
    let index: Vec<usize> = p
        .vars()
        .iter()
        .map(|v| {
            map.get(v)
                .and_then(|w| target.iter().position(|t| t == w))
                .ok_or_else(|| Error::UnknownVariable(v.clone()))
        })
        .collect::<Result<_>>()?;
    let mut out = Poly::zero(target);
    for (m, q) in p.terms() {
        let mut exps = vec![0u16; target.len()];
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                exps[index[i]] += e;
            }
        }
        out.add_term(Monomial::from_exponents(exps), q.clone());
    }
    Ok(out)
}

/// Degree-2 parts of the model equations against the expected quadrics:
/// `sum_j c_{z_j,0}^2` for Examples 1 and 2, and the pencil of `v.v` and
/// `2 v.w` for Example 3 (with `v`, `w` the coefficients of `t^0`, `t^1` in
/// the `z`-components).
pub fn check_leading_forms(ex: &WorkedExample, model: &FiniteModel) -> Result<Check> {
    let vars = model.variables().to_vec();
    let forms: Vec<Poly> = model
        .equations()
        .iter()
        .map(|e| element_poly(&e.homogeneous_part(2)))
        .collect();
    let rendered = forms.iter().map(Poly::render).collect::<Vec<_>>().join("; ");
    let zs: Vec<String> = ex
        .hypersurface
        .u_names()
        .into_iter()
        .filter(|u| u.starts_with('z'))
        .collect();
    let var = |name: String| -> Result<Poly> {
        let i = vars
            .iter()
            .position(|v| *v == name)
            .ok_or(Error::UnknownVariable(name))?;
        Ok(Poly::var(&vars, i))
    };
    let passed = match ex.id {
        1 | 2 => {
            let mut target = Poly::zero(&vars);
            for z in &zs {
                let c = var(crate::arc::model_variable(z, 0))?;
                target = target.add(&c.mul(&c));
            }
            forms.len() == 1 && forms[0] == target
        }
        _ => {
            let map = correspondence(ex, model);
            let v: Vec<String> = ex.chart_vars.iter().filter(|c| c.starts_with('v')).cloned().collect();
            let w: Vec<String> = ex.chart_vars.iter().filter(|c| c.starts_with('w')).cloned().collect();
            let chart = ex.chart_vars.clone();
            let mut vv = Poly::zero(&chart);
            let mut vw = Poly::zero(&chart);
            for (vj, wj) in v.iter().zip(&w) {
                let pv = Poly::var(&chart, chart.iter().position(|c| c == vj).unwrap());
                let pw = Poly::var(&chart, chart.iter().position(|c| c == wj).unwrap());
                vv = vv.add(&pv.mul(&pv));
                vw = vw.add(&pv.mul(&pw).add(&pv.mul(&pw)));
            }
            let pencil = [rename(&vv, &map, &vars)?, rename(&vw, &map, &vars)?];
            forms.len() == 2 && same_span(&forms, &pencil)
        }
    };
    Ok(Check::new("leading-forms", passed).detail("quadratic_parts", rendered))
}

/// Setting the top coefficients of the degree-`N+1` model to zero gives
/// the degree-`N` model.
pub fn check_stabilization(ex: &WorkedExample, n: usize, k: u32, precision: usize) -> Result<Check> {
    let gamma = ex.gamma_arc(precision)?;
    let small = finite_model(&ex.hypersurface, &gamma, n, k, precision)?;
    let large = finite_model(&ex.hypersurface, &gamma, n + 1, k, precision)?;
    let sigma = RingMorphism::by_name(large.ring(), small.ring())?;
    let restricted: Vec<RingElement> = large.equations().iter().map(|e| sigma.apply(e)).collect();
    Ok(Check::new("stabilization", restricted == small.equations()).detail("N", n))
}
