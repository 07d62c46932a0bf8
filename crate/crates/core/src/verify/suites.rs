//! Randomized property suites over the ring catalog. Each suite returns one
//! [`Check`] per property; `selftest` and the acceptance harness share them.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use super::catalog::Catalog;
use super::checks::{
    alpha_deformation, check_alpha_identity, check_leading_forms, check_model_consistency_with, check_stabilization,
    element_poly, sample_y_point, Sampling,
};
use super::examples::WorkedExample;
use crate::arc::{
    arc_multiplicity, finite_model, flow_arc, lift_arc, product_chart, transverse_order, truncate_arc, FlowSpec,
    FormalArc, Hypersurface,
};
use crate::curve::{
    first_order_oracle, lift_branch, universal_obstructions, CurveDeformation, LiftResult, PlaneCurveGerm,
};
use crate::error::Result;
use crate::expr::parse::parse_poly;
use crate::expr::report::{Check, Report};
use crate::kernel::rational::int;
use crate::kernel::{distinguished_root, weierstrass_divide, Monomial, Poly, PowerSeries, RingElement, TestRing};
use crate::sample;

/// Counts cases and keeps the failures of one property.
struct Tally {
    name: String,
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Tally {
            name: name.into(),
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self) -> Check {
        let mut c = Check::new(self.name, self.failures.is_empty() && self.cases > 0).detail("cases", self.cases);
        if let Some(f) = self.failures.first() {
            c = c.detail("first_failure", f).detail("failures", self.failures.len());
        }
        c
    }
}

fn pick<'a>(rng: &mut impl Rng, rings: &'a [Arc<TestRing>]) -> &'a Arc<TestRing> {
    &rings[rng.gen_range(0..rings.len())]
}

fn unit_series(rng: &mut impl Rng, ring: &Arc<TestRing>, precision: usize) -> PowerSeries {
    let mut u = sample::series(rng, ring, precision, 4, false);
    let lead = loop {
        let q = sample::small_rational(rng);
        if q != int(0) {
            break q;
        }
    };
    u.set_coeff(0, &RingElement::constant(ring, lead) + &sample::nilpotent(rng, ring));
    u
}

// ---------------------------------------------------------------- kernel

const KERNEL_PRECISION: usize = 24;

/// A divisor of residue order `n`: `t^n * unit` plus nilpotent noise.
fn divisor(rng: &mut impl Rng, ring: &Arc<TestRing>, n: usize) -> PowerSeries {
    let p = KERNEL_PRECISION;
    let mut f = (&PowerSeries::monomial(&RingElement::one(ring), n, p) * &unit_series(rng, ring, p)).extend_zero(p);
    for k in 0..p {
        if rng.gen_bool(0.3) {
            let c = f.coeff(k) + &sample::nilpotent(rng, ring);
            f.set_coeff(k, c);
        }
    }
    f
}

fn weierstrass_checks(rng: &mut impl Rng, rings: &[Arc<TestRing>], instances: usize) -> Result<Vec<Check>> {
    let mut roundtrip = Tally::new("weierstrass-roundtrip");
    let mut unique = Tally::new("weierstrass-uniqueness");
    let p = KERNEL_PRECISION;
    for _ in 0..instances {
        let ring = pick(rng, rings);
        let n = rng.gen_range(0..=3usize);
        let nu = ring.nilpotency() as usize;
        let target = p - (nu - 1) * n;
        let f = divisor(rng, ring, n);
        let g = sample::series(rng, ring, p, 6, false);

        let d = weierstrass_divide(&g, &f, target)?;
        let exact = target - n;
        let back = &(&d.quotient * &f.truncate(exact)?) + &d.remainder_series(exact);
        roundtrip.record(back == g.truncate(exact)? && d.order() == n, || {
            format!("G = {} over {}", g.render("t"), ring.label())
        });

        // dividing G + delta*F returns (Q + delta, R)
        let delta = sample::series(rng, ring, p, 4, false);
        let shifted = &g + &(&delta * &f);
        let e = weierstrass_divide(&shifted, &f, target)?;
        let q = &d.quotient + &delta.truncate(exact)?;
        unique.record(e.quotient == q && e.remainder == d.remainder, || {
            format!("delta = {} over {}", delta.render("t"), ring.label())
        });
    }
    Ok(vec![roundtrip.finish(), unique.finish()])
}

/// `F(t + a)` from the coefficients of `F`, exact in degrees below
/// `precision - nu + 1`.
fn translate(f: &PowerSeries, a: &RingElement) -> Result<PowerSeries> {
    let ring = f.ring();
    let p = f.precision();
    let mut shift = PowerSeries::var(ring, p);
    shift.set_coeff(0, a.clone());
    let mut acc = PowerSeries::zero(ring, p);
    for k in (0..p).rev() {
        acc = &(&acc * &shift) + &PowerSeries::constant(f.coeff(k), p);
    }
    acc.truncate(p + 1 - ring.nilpotency() as usize)
}

fn root_checks(rng: &mut impl Rng, rings: &[Arc<TestRing>], instances: usize) -> Result<Vec<Check>> {
    let mut exact = Tally::new("distinguished-root");
    let p = KERNEL_PRECISION;

    // fixed cases: t - a, t + x0 + x1*t over (x0, x1)^3, and t
    let a3 = TestRing::truncated(vec!["a".into()], 3)?;
    let a = RingElement::generator(&a3, 0);
    let mut f = PowerSeries::var(&a3, p);
    f.set_coeff(0, -&a);
    exact.record(distinguished_root(&f)? == a, || "t - a".into());
    let x = TestRing::truncated(vec!["x0".into(), "x1".into()], 3)?;
    let (x0, x1) = (RingElement::generator(&x, 0), RingElement::generator(&x, 1));
    let mut f = PowerSeries::var(&x, p);
    f.set_coeff(0, x0.clone());
    f.set_coeff(1, &RingElement::one(&x) + &x1);
    exact.record(distinguished_root(&f)? == &(&x0 * &x1) - &x0, || "t + x0 + x1*t".into());
    let f = PowerSeries::var(&TestRing::field(), p);
    exact.record(distinguished_root(&f)?.is_zero(), || "t".into());

    let mut translated = Tally::new("distinguished-root-translation");
    for _ in 0..instances {
        let ring = pick(rng, rings);
        // (t - a) * unit has root a
        let a = sample::nilpotent(rng, ring);
        let mut line = PowerSeries::var(ring, p);
        line.set_coeff(0, -&a);
        let f = &line * &unit_series(rng, ring, p);
        let root = distinguished_root(&f)?;
        exact.record(root == a && f.eval_nilpotent(&root)?.is_zero(), || {
            format!("F = {} over {}", f.render("t"), ring.label())
        });

        let mut g = divisor(rng, ring, 1);
        let root = distinguished_root(&g)?;
        let vanishes = g.eval_nilpotent(&root)?.is_zero() && root.in_maximal_ideal();
        g = translate(&g, &root)?;
        translated.record(vanishes && distinguished_root(&g)?.is_zero(), || {
            format!("root {} over {}", root.render(), ring.label())
        });
    }
    Ok(vec![exact.finish(), translated.finish()])
}

/// Expressions whose canonical print must survive print -> parse -> print.
const PARSER_CORPUS: &[(&str, &str)] = &[
    ("x*y - z^2", "x*y - z^2"),
    ("-(1/2)*x + x", "1/2*x"),
    ("t^2", "t^2"),
    ("(x + y)^3 - x^3 - y^3", "3*x^2*y + 3*x*y^2"),
    ("a*w^2 - v^2", "a*w^2 - v^2"),
    ("b*w^2 - 2*v*w", "b*w^2 - 2*v*w"),
    ("6/4*x - 3*(x - 1)", "-3/2*x + 3"),
    ("x*y*z - 0*t + 0", "x*y*z"),
    ("-(-x)^2", "-x^2"),
    ("0", "0"),
];

fn parser_check(rng: &mut impl Rng, random: usize) -> Check {
    let vars: Vec<String> = ["a", "b", "t", "v", "w", "x", "y", "z", "z_1", "c_z_1_0"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut tally = Tally::new("parser-round-trip");
    let round_trip = |p: &Poly| -> std::result::Result<(), String> {
        let printed = p.render();
        let back = parse_poly(&printed, &vars).map_err(|e| format!("{printed}: {e}"))?;
        if back != *p || back.render() != printed {
            return Err(format!("{printed} reprints as {}", back.render()));
        }
        Ok(())
    };
    for (text, canonical) in PARSER_CORPUS {
        let outcome = parse_poly(text, &vars).map_err(|e| e.to_string()).and_then(|p| {
            if p.render() != *canonical {
                return Err(format!("{text} prints as {}", p.render()));
            }
            round_trip(&p)
        });
        tally.record(outcome.is_ok(), || outcome.unwrap_err());
    }
    for _ in 0..random {
        let p = sample::poly(rng, &vars, 5, 6);
        let outcome = round_trip(&p);
        tally.record(outcome.is_ok(), || outcome.unwrap_err());
    }
    tally.finish()
}

/// Weierstrass roundtrip and uniqueness, distinguished roots, and parser
/// round trips.
pub fn kernel_suite(seed: u64) -> Result<Vec<Check>> {
    let catalog = Catalog::standard();
    let rings = catalog.rings();
    let mut rng = sample::rng(seed, 100);
    let mut checks = weierstrass_checks(&mut rng, rings, 100)?;
    checks.extend(root_checks(&mut rng, rings, 50)?);
    checks.push(parser_check(&mut rng, 100));
    Ok(checks)
}

// ---------------------------------------------------------------- curves

const CURVE_PRECISION: usize = 40;

fn xy_poly(terms: &[((u16, u16), i64)]) -> Poly {
    let vars = vec!["x".to_string(), "y".to_string()];
    Poly::from_terms(
        &vars,
        terms
            .iter()
            .map(|&((i, j), c)| (Monomial::from_exponents(vec![i, j]), int(c))),
    )
}

/// `xy`, `x^2 y`, and `y^2 - x^4` along `y = x^2`.
pub fn suite_germs(precision: usize) -> Result<Vec<PlaneCurveGerm>> {
    let mut parabola = vec![int(0); precision];
    parabola[2] = int(1);
    Ok(vec![
        PlaneCurveGerm::on_axis(xy_poly(&[((1, 1), 1)]), precision)?,
        PlaneCurveGerm::on_axis(xy_poly(&[((2, 1), 1)]), precision)?,
        PlaneCurveGerm::new(
            xy_poly(&[((0, 2), 1), ((4, 0), -1)]),
            PowerSeries::from_rationals(&TestRing::field(), parabola),
        )?,
    ])
}

fn random_deformation(
    rng: &mut impl Rng,
    germ: &PlaneCurveGerm,
    ring: &Arc<TestRing>,
    nterms: usize,
) -> Result<CurveDeformation> {
    let bound = germ.degree_bound();
    let mut c = BTreeMap::new();
    for _ in 0..nterms {
        let i = rng.gen_range(0..=bound);
        let j = rng.gen_range(0..=bound);
        c.insert((i, j), sample::nilpotent(rng, ring));
    }
    CurveDeformation::new(germ, ring, c)
}

/// `f~(x, h(x))` by plain substitution into the deformed polynomial.
fn residual(def: &CurveDeformation, h: &PowerSeries) -> Result<PowerSeries> {
    let ring = def.ring();
    let p = h.precision();
    def.deformed()
        .substitute(ring, &[PowerSeries::var(ring, p), h.clone()], p)
}

/// A deformation that lifts by construction, with its lift: perturb `f`,
/// choose `h = h0 + delta`, then subtract `f~(x, h(x))`, which does not
/// involve `y`.
fn liftable_deformation(
    rng: &mut impl Rng,
    germ: &PlaneCurveGerm,
    ring: &Arc<TestRing>,
) -> Result<(CurveDeformation, PowerSeries)> {
    let p = CURVE_PRECISION;
    let germ = germ.clone().with_degree_bound(p - 1);
    let start = random_deformation(rng, &germ.clone().with_degree_bound(3), ring, 3)?;
    let start = CurveDeformation::new(&germ, ring, start.coefficients().clone())?;
    let mut delta = PowerSeries::zero(ring, p);
    for k in 0..3 {
        delta.set_coeff(k, sample::nilpotent(rng, ring));
    }
    let h = &germ.branch().lift_to(ring) + &delta;
    let along = residual(&start, &h)?;
    let mut c = start.coefficients().clone();
    for (k, v) in along.coeffs().iter().enumerate() {
        if !v.is_zero() {
            let cur = c.remove(&(k, 0)).unwrap_or_else(|| RingElement::zero(ring));
            c.insert((k, 0), &cur - v);
        }
    }
    Ok((CurveDeformation::new(&germ, ring, c)?, h))
}

fn lift_substitutes(def: &CurveDeformation, res: &LiftResult) -> Result<bool> {
    Ok(match &res.lift {
        Some(h) => residual(def, h)?.is_zero() && res.obstructions.iter().all(RingElement::is_zero),
        None => res.obstructions.iter().any(|o| !o.is_zero()),
    })
}

/// Over a ring with `m^2 = 0` and generators `e_i`, the deformation
/// `f + sum e_i g_i` lifts iff every `g_i` passes the first-order test, and
/// the lift is `h0 + sum e_i d_i`.
fn first_order_agrees(rng: &mut impl Rng, germ: &PlaneCurveGerm, ring: &Arc<TestRing>) -> Result<bool> {
    let p = CURVE_PRECISION;
    let vars = germ.f().vars().to_vec();
    let mut deformed = germ.f().over_ring(ring);
    let mut expected = Some(germ.branch().lift_to(ring));
    for i in 0..ring.ngens() {
        let e = RingElement::generator(ring, i);
        let g = sample::poly(rng, &vars, germ.degree_bound() as u16, 3);
        let oracle = first_order_oracle(germ, &g, p)?;
        deformed = deformed.add(&g.over_ring(ring).mul_coeff(&e));
        expected = match (expected, oracle.direction) {
            (Some(h), Some(d)) => {
                let d = d.lift_to(ring).mul_elem(&e);
                let q = h.precision().min(d.precision());
                Some(&h.truncate(q)? + &d.truncate(q)?)
            }
            _ => None,
        };
    }
    let def = CurveDeformation::from_poly_in(germ, ring, &deformed)?;
    let res = lift_branch(&def, p)?;
    Ok(match (res.lift, expected) {
        (Some(h), Some(e)) => {
            let q = h.precision().min(e.precision());
            h.truncate(q)? == e.truncate(q)?
        }
        (None, None) => true,
        _ => false,
    })
}

/// For each suite germ and catalog ring: lifts satisfy the deformed
/// equation, obstructions and lifts commute with the catalog morphisms, and
/// square-zero rings agree with the first-order oracle.
pub fn solver_suite(seed: u64, deformations: usize) -> Result<Vec<Check>> {
    let catalog = Catalog::standard();
    let germs = suite_germs(CURVE_PRECISION)?;
    let mut substitution = Tally::new("lift-substitution");
    let mut naturality = Tally::new("base-change-naturality");
    let mut first_order = Tally::new("first-order-oracle");
    for (g, germ) in germs.iter().enumerate() {
        for (r, ring) in catalog.rings().iter().enumerate() {
            let mut rng = sample::rng(seed, 200 + 16 * g as u64 + r as u64);
            for n in 0..deformations {
                let (def, built) = if n % 2 == 0 {
                    (random_deformation(&mut rng, germ, ring, 5)?, None)
                } else {
                    let (d, h) = liftable_deformation(&mut rng, germ, ring)?;
                    (d, Some(h))
                };
                let res = lift_branch(&def, CURVE_PRECISION)?;
                let mut ok = lift_substitutes(&def, &res)?;
                if let Some(h) = &built {
                    ok &= res
                        .lift
                        .as_ref()
                        .is_some_and(|l| h.truncate(l.precision()).ok().as_ref() == Some(l));
                }
                substitution.record(ok, || {
                    format!(
                        "germ {} over {}: {:?}",
                        germ.f().render(),
                        ring.label(),
                        def.deformed().render()
                    )
                });

                for sigma in catalog.morphisms().iter().filter(|s| TestRing::same(s.source(), ring)) {
                    let there = lift_branch(&def.map(sigma)?, CURVE_PRECISION)?;
                    let here: Vec<RingElement> = res.obstructions.iter().map(|o| sigma.apply(o)).collect();
                    let mut ok = here == there.obstructions;
                    if let (Some(a), Some(b)) = (&res.lift, &there.lift) {
                        let q = a.precision().min(b.precision());
                        ok &= a.map(sigma).truncate(q)? == b.truncate(q)?;
                    }
                    naturality.record(ok, || {
                        format!(
                            "germ {} along {} -> {}",
                            germ.f().render(),
                            ring.label(),
                            sigma.target().label()
                        )
                    });
                }
                if ring.nilpotency() == 2 {
                    let ok = first_order_agrees(&mut rng, germ, ring)?;
                    first_order.record(ok, || format!("germ {} over {}", germ.f().render(), ring.label()));
                }
            }
        }
    }
    Ok(vec![substitution.finish(), naturality.finish(), first_order.finish()])
}

/// The universal obstruction series of `xy` and `x^2 y` at `K = 3`: leading
/// terms, vanishing linear parts, and agreement with the direct solver on
/// `points` specializations each.
pub fn universal_suite(seed: u64, points: usize) -> Result<Vec<Check>> {
    let catalog = Catalog::standard();
    let rings: Vec<Arc<TestRing>> = catalog.rings().iter().skip(1).cloned().collect();
    let germs = suite_germs(CURVE_PRECISION)?;
    let mut checks = Vec::new();

    let xy = universal_obstructions(&germs[0], 3, CURVE_PRECISION)?;
    let s0 = &xy.series()[0];
    let g = |i, j| xy.generator(i, j).expect("generator in range");
    let quad = &g(0, 1) * &g(1, 0);
    let rest = s0 - &quad;
    let ok = s0.homogeneous_part(0).is_zero()
        && s0.homogeneous_part(1).is_zero()
        && s0.homogeneous_part(2) == quad
        && !rest.is_zero()
        && rest == rest.homogeneous_part(3);
    checks.push(Check::new("universal-leading-term[xy]", ok).detail("s_0", element_poly(s0).render()));

    let x2y = universal_obstructions(&germs[1], 3, CURVE_PRECISION)?;
    let linear_free = x2y.multiplicity() == 2
        && x2y
            .series()
            .iter()
            .all(|s| s.homogeneous_part(0).is_zero() && s.homogeneous_part(1).is_zero());
    let mut c = Check::new("universal-linear-part[x^2y]", linear_free);
    for (l, s) in x2y.series().iter().enumerate() {
        c = c.detail(
            format!("s_{l}.quadratic"),
            element_poly(&s.homogeneous_part(2)).render(),
        );
    }
    checks.push(c);

    for (k, (model, germ, label)) in [(&xy, &germs[0], "xy"), (&x2y, &germs[1], "x^2y")]
        .into_iter()
        .enumerate()
    {
        let mut rng = sample::rng(seed, 300 + k as u64);
        let normal = germ.normalized();
        let mut tally = Tally::new(format!("universal-specialization[{label}]"));
        for n in 0..points {
            let ring = &rings[n % rings.len()];
            let def = random_deformation(&mut rng, &normal, ring, 6)?;
            let via_model = model.specialize(ring, def.coefficients())?;
            let direct = lift_branch(&def, CURVE_PRECISION)?.obstructions;
            tally.record(via_model == direct, || {
                format!("{} over {}", def.deformed().render(), ring.label())
            });
        }
        checks.push(tally.finish());
    }
    Ok(checks)
}

// ---------------------------------------------------------------- arcs

const ARC_PRECISION: usize = 20;

/// A random arc on `x*y = z.z`: `x = t*u`, `z_j = t*g_j`, `y = t*g.g/u`.
fn random_arc_on_cone(rng: &mut impl Rng, ring: &Arc<TestRing>, r: usize) -> FormalArc {
    let p = ARC_PRECISION;
    let t = PowerSeries::var(ring, p);
    let mut u = sample::series(rng, ring, p, 3, false);
    u.set_coeff(0, &RingElement::one(ring) + &sample::nilpotent(rng, ring));
    let gs: Vec<PowerSeries> = (0..r).map(|_| sample::series(rng, ring, p, 3, false)).collect();
    let mut gg = PowerSeries::zero(ring, p);
    for g in &gs {
        gg = &gg + &(g * g);
    }
    let x = &t * &u;
    let y = &t * &(&gg * &u.inverse().expect("unit"));
    let mut comps = vec![x, y];
    comps.extend(gs.iter().map(|g| &t * g));
    FormalArc::new(ring, comps)
}

fn random_flow(rng: &mut impl Rng, ring: &Arc<TestRing>, dim: usize) -> FlowSpec {
    let mut f = sample::series(rng, ring, ARC_PRECISION, 3, false);
    f.set_coeff(0, sample::nilpotent(rng, ring));
    FlowSpec::new(rng.gen_range(0..dim), f)
}

fn flow_checks(rng: &mut impl Rng, rings: &[Arc<TestRing>], trials: usize) -> Result<Vec<Check>> {
    let mut group = Tally::new("flow-group-law");
    let mut tangency = Tally::new("flow-tangency");
    for n in 0..trials {
        let ring = &rings[n % rings.len()];
        let r = 1 + n % 2;
        let h = WorkedExample::new(2, r)?.hypersurface;
        let arc = random_arc_on_cone(rng, ring, r);
        let a = random_flow(rng, ring, h.dim());
        let mut b = random_flow(rng, ring, h.dim());
        b.index = a.index;
        let ab = flow_arc(
            &h,
            &flow_arc(&h, &arc, std::slice::from_ref(&b))?,
            std::slice::from_ref(&a),
        )?;
        let direct = flow_arc(&h, &arc, &[FlowSpec::new(a.index, &a.f + &b.f)])?;
        group.record(ab == direct, || {
            format!("flows on index {} over {}", a.index + 1, ring.label())
        });

        // stays on the hypersurface and fixes coefficients below ord f
        let moved = flow_arc(&h, &arc, std::slice::from_ref(&a))?;
        let k = a.f.order().unwrap_or(ARC_PRECISION);
        let fixed = moved
            .comps()
            .iter()
            .zip(arc.comps())
            .all(|(x, y)| x.coeffs()[..k.min(x.precision())] == y.coeffs()[..k.min(x.precision())]);
        tangency.record(h.contains(&moved)? && h.contains(&direct)? && fixed, || {
            format!("flow on index {} over {}", a.index + 1, ring.label())
        });
    }
    Ok(vec![group.finish(), tangency.finish()])
}

/// `(t + t^(n+1), 0, 0)` truncated at `n`: the `u`-components stop at `t^n`
/// and keep their low coefficients, the result lies on `x*y = z^2`, and a
/// second truncation changes nothing.
fn truncation_check(h: &Hypersurface, n: usize) -> Result<Check> {
    let q = TestRing::field();
    let p = ARC_PRECISION;
    let mut x = vec![int(0); p];
    x[1] = int(1);
    x[n + 1] = int(1);
    let gamma = FormalArc::new(
        &q,
        vec![
            PowerSeries::from_rationals(&q, x),
            PowerSeries::zero(&q, p),
            PowerSeries::zero(&q, p),
        ],
    );
    let out = truncate_arc(h, &gamma, n, p)?;
    let arc = &out.arc;
    let mut ok = h.contains(arc)?;
    for &i in &h.u_indices() {
        let c = arc.comp(i);
        ok &= c.coeffs()[n + 1..].iter().all(RingElement::is_zero);
    }
    for (a, b) in arc.comps().iter().zip(gamma.comps()) {
        ok &= a.coeffs()[..=n] == b.coeffs()[..=n];
    }
    let again = truncate_arc(h, arc, n, p)?;
    ok &= again.flows.is_empty() && &again.arc == arc;
    Ok(Check::new(format!("truncation[N={n}]"), ok).detail("flows", out.flows.len()))
}

fn chart_check(rng: &mut impl Rng, rings: &[Arc<TestRing>], inputs: usize) -> Result<Check> {
    let mut tally = Tally::new("product-chart-lifts");
    let n = 3;
    while tally.cases < inputs {
        let ex = WorkedExample::new(rng.gen_range(1..=3), rng.gen_range(1..=2))?;
        let ring = pick(rng, rings);
        let Some(point) = sample_y_point(&ex, ring, rng, 400) else {
            continue;
        };
        let h = &ex.hypersurface;
        let gamma = ex.gamma_arc(ARC_PRECISION)?;
        let def = alpha_deformation(&ex, ring, &point, ARC_PRECISION)?;
        let order = transverse_order(h, &gamma)?;
        let mut a = BTreeMap::new();
        for i in 0..h.dim() {
            a.insert((i, n + 1 - order + rng.gen_range(0..3)), sample::nilpotent(rng, ring));
        }
        let out = product_chart(h, &gamma, &def, &a, n, ARC_PRECISION)?;
        let lift = lift_arc(h, &gamma, &out, out.precision())?;
        let ok = lift.obstructions.iter().all(RingElement::is_zero)
            && match &lift.lift {
                Some(arc) => h.contains(arc)?,
                None => false,
            };
        tally.record(ok, || format!("example {} over {}", ex.id, ring.label()));
    }
    Ok(tally.finish())
}

/// Flow group law and tangency on random arcs of the quadric cone,
/// truncation of `(t + t^(N+1), 0, 0)` for `N = 2, 3, 4`, and liftability of
/// product-chart outputs.
pub fn flow_suite(seed: u64) -> Result<Vec<Check>> {
    let catalog = Catalog::standard();
    let rings = catalog.rings();
    let mut rng = sample::rng(seed, 400);
    let mut checks = flow_checks(&mut rng, rings, 28)?;
    let h = WorkedExample::new(1, 1)?.hypersurface;
    for n in 2..=4 {
        checks.push(truncation_check(&h, n)?);
    }
    checks.push(chart_check(&mut rng, &rings[1..], 20)?);
    Ok(checks)
}

// ---------------------------------------------------------------- examples

/// Settings for [`verify_example`].
#[derive(Clone, Copy, Debug)]
pub struct ExampleRun {
    pub n: usize,
    pub k: u32,
    pub precision: usize,
    pub sampling: Sampling,
}

/// Multiplicity, model equations and their leading forms for one worked
/// example, with the alpha identity, model consistency over every catalog
/// ring with `m^(K+1) = 0`, stabilization in `N`, and for the double point
/// the two control points `w` over `Q[w]/(w^2)` and `Q[w]/(w^3)`.
pub fn verify_example(id: u8, r: usize, run: ExampleRun) -> Result<Report> {
    let ex = WorkedExample::new(id, r)?;
    let p = run.precision;
    let gamma = ex.gamma_arc(p)?;
    let h = &ex.hypersurface;
    let model = finite_model(h, &gamma, run.n, run.k, p)?;

    let mut report = Report::new();
    report.put("example", id);
    if id != 1 {
        report.put("r", r);
    }
    report.put("m", arc_multiplicity(h, &gamma, p)?);
    report.put("N", run.n);
    report.put("K", run.k);
    report.put("equations", model.equations().len());
    for (i, e) in model.equations().iter().enumerate() {
        report.put(
            format!("leading.{}", i + 1),
            element_poly(&e.homogeneous_part(2)).render(),
        );
    }

    report.check(check_alpha_identity(&ex));
    report.check(check_leading_forms(&ex, &model)?);
    for ring in Catalog::standard().rings() {
        if ring.is_field() || ring.nilpotency() > run.k + 1 {
            continue;
        }
        report.check(check_model_consistency_with(&ex, &model, ring, p, run.sampling)?);
    }
    report.check(check_stabilization(&ex, run.n, run.k, p)?);
    if id == 1 {
        for k in [2u16, 3] {
            let ring = TestRing::dual_numbers("w", k);
            let w = RingElement::generator(&ring, 0);
            let def = alpha_deformation(&ex, &ring, std::slice::from_ref(&w), p)?;
            let lift = lift_arc(h, &gamma, &def, p)?;
            let expected = if k == 2 { RingElement::zero(&ring) } else { w.pow(2) };
            let rendered: Vec<String> = lift.obstructions.iter().map(RingElement::render).collect();
            report.check(
                Check::new(
                    format!("control-point[{}]", ring.label()),
                    lift.obstructions == vec![expected],
                )
                .detail("obstruction", rendered.join(", ")),
            );
        }
    }
    Ok(report)
}

/// Every suite, then the three worked examples at width `r`.
pub fn selftest(seed: u64, r: usize, run: ExampleRun) -> Result<Report> {
    let mut report = Report::new();
    report.put("seed", seed);
    let suites: [(&str, Vec<Check>); 4] = [
        ("kernel", kernel_suite(seed)?),
        ("solver", solver_suite(seed, 50)?),
        ("universal", universal_suite(seed, 20)?),
        ("flow", flow_suite(seed)?),
    ];
    for (name, checks) in suites {
        report.put(format!("suite.{name}"), checks.len());
        report.extend_checks(checks.into_iter().map(|mut c| {
            c.name = format!("{name}/{}", c.name);
            c
        }));
    }
    for id in 1..=3u8 {
        let sub = verify_example(
            id,
            r,
            ExampleRun {
                sampling: Sampling { seed, ..run.sampling },
                ..run
            },
        )?;
        report.extend_checks(sub.checks.into_iter().map(|mut c| {
            c.name = format!("example-{id}/{}", c.name);
            c
        }));
    }
    Ok(report)
}
