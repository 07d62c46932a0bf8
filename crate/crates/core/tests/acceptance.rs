//! Acceptance gate. Runs each criterion in turn and prints one line per
//! criterion with its wall time against the budget; exits nonzero if any
//! criterion fails or runs over budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use arcspace::arc::{arc_multiplicity, finite_model, lift_arc};
use arcspace::expr::Check;
use arcspace::kernel::{RingElement, TestRing};
use arcspace::verify::checks::{alpha_deformation, check_model_consistency_with, element_poly};
use arcspace::verify::{
    check_alpha_identity, check_leading_forms, flow_suite, kernel_suite, solver_suite, universal_suite, Catalog,
    Sampling, WorkedExample,
};
use arcspace::Result;

const T: usize = 64;
const SEED: u64 = 0;

/// Collects named sub-results of one criterion.
#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn checks(&mut self, checks: &[Check]) {
        for c in checks {
            if !c.passed {
                let details: Vec<String> = c.details.iter().map(|(k, v)| format!("{k}={v}")).collect();
                self.failures.push(format!("{} [{}]", c.name, details.join("; ")));
            }
        }
    }

    fn detail(c: &Check, key: &str) -> Option<String> {
        c.details.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone())
    }
}

fn example_one() -> Result<Outcome> {
    let mut out = Outcome::default();
    let ex = WorkedExample::new(1, 1)?;
    let gamma = ex.gamma_arc(T)?;
    out.expect(arc_multiplicity(&ex.hypersurface, &gamma, T)? == 1, "m = 1");
    let model = finite_model(&ex.hypersurface, &gamma, 2, 2, T)?;
    let eqs = model.equations();
    out.expect(eqs.len() == 1, format!("one equation, got {}", eqs.len()));
    if let Some(e) = eqs.first() {
        let lead = element_poly(&e.homogeneous_part(2)).render();
        let low = e.homogeneous_part(0).is_zero() && e.homogeneous_part(1).is_zero();
        out.expect(low && lead == "c_z_0^2", format!("leading form c_z_0^2, got {lead}"));
    }
    out.checks(&[check_alpha_identity(&ex)]);

    let w2 = TestRing::dual_numbers("w", 2);
    let def = alpha_deformation(&ex, &w2, &[RingElement::generator(&w2, 0)], T)?;
    let lift = lift_arc(&ex.hypersurface, &gamma, &def, T)?;
    out.expect(
        lift.is_liftable() && lift.obstructions == vec![RingElement::zero(&w2)],
        "alpha(w) lifts over Q[w]/(w^2)",
    );
    let w3 = TestRing::dual_numbers("w", 3);
    let w = RingElement::generator(&w3, 0);
    let def = alpha_deformation(&ex, &w3, std::slice::from_ref(&w), T)?;
    let lift = lift_arc(&ex.hypersurface, &gamma, &def, T)?;
    let got: Vec<String> = lift.obstructions.iter().map(RingElement::render).collect();
    out.expect(
        lift.obstructions == vec![w.pow(2)],
        format!("obstruction w^2 over Q[w]/(w^3), got {}", got.join(", ")),
    );
    Ok(out)
}

fn example_two() -> Result<Outcome> {
    let mut out = Outcome::default();
    let ex = WorkedExample::new(2, 2)?;
    let gamma = ex.gamma_arc(T)?;
    out.expect(arc_multiplicity(&ex.hypersurface, &gamma, T)? == 1, "m = 1");
    let model = finite_model(&ex.hypersurface, &gamma, 2, 2, T)?;
    let eqs = model.equations();
    out.expect(eqs.len() == 1, format!("one equation, got {}", eqs.len()));
    if let Some(e) = eqs.first() {
        let lead = element_poly(&e.homogeneous_part(2)).render();
        out.expect(lead == "c_z_1_0^2 + c_z_2_0^2", format!("leading form, got {lead}"));
    }
    let y: Vec<String> = ex.y_equations.iter().map(|p| p.render()).collect();
    out.expect(y == ["w_1^2 + w_2^2"], format!("Y = (w.w), got {}", y.join(", ")));
    out.checks(&[check_alpha_identity(&ex), check_leading_forms(&ex, &model)?]);
    Ok(out)
}

fn example_three() -> Result<Outcome> {
    let mut out = Outcome::default();
    let catalog = Catalog::standard();
    for r in 1..=2 {
        let ex = WorkedExample::new(3, r)?;
        let gamma = ex.gamma_arc(T)?;
        out.expect(
            arc_multiplicity(&ex.hypersurface, &gamma, T)? == 2,
            format!("r={r}: m = 2"),
        );
        let model = finite_model(&ex.hypersurface, &gamma, 4, 3, T)?;
        out.expect(model.equations().len() == 2, format!("r={r}: two equations"));
        out.checks(&[check_alpha_identity(&ex), check_leading_forms(&ex, &model)?]);
        let sampling = Sampling {
            points: 20,
            violations: 20,
            seed: SEED,
        };
        let mut rings = 0;
        for ring in catalog.cube_zero() {
            rings += 1;
            let c = check_model_consistency_with(&ex, &model, ring, T, sampling)?;
            let counts = (Outcome::detail(&c, "points"), Outcome::detail(&c, "violations"));
            out.expect(
                counts == (Some("20".into()), Some("20".into())),
                format!("r={r} {}: sampled {counts:?}", ring.label()),
            );
            out.checks(&[c]);
        }
        out.expect(rings == 3, format!("three catalog rings with m^3 = 0, got {rings}"));
    }
    Ok(out)
}

/// A suite passes when every check passes and each ran the expected number
/// of cases.
fn suite(checks: Vec<Check>, cases: &[(&str, usize)]) -> Outcome {
    let mut out = Outcome::default();
    out.checks(&checks);
    for &(name, n) in cases {
        let got = checks
            .iter()
            .find(|c| c.name == name)
            .and_then(|c| Outcome::detail(c, "cases"));
        out.expect(
            got == Some(n.to_string()),
            format!("{name}: expected {n} cases, got {got:?}"),
        );
    }
    out
}

fn solver() -> Result<Outcome> {
    // 3 germs x 7 rings x 50 deformations
    Ok(suite(solver_suite(SEED, 50)?, &[("lift-substitution", 1050)]))
}

fn universal() -> Result<Outcome> {
    let checks = universal_suite(SEED, 20)?;
    let mut out = suite(
        checks.clone(),
        &[
            ("universal-specialization[xy]", 20),
            ("universal-specialization[x^2y]", 20),
        ],
    );
    out.expect(checks.len() == 4, "four universal checks");
    Ok(out)
}

fn flows() -> Result<Outcome> {
    let checks = flow_suite(SEED)?;
    let mut out = suite(checks.clone(), &[("product-chart-lifts", 20)]);
    for n in 2..=4 {
        let name = format!("truncation[N={n}]");
        out.expect(checks.iter().any(|c| c.name == name), name);
    }
    Ok(out)
}

fn kernel() -> Result<Outcome> {
    Ok(suite(
        kernel_suite(SEED)?,
        &[("weierstrass-roundtrip", 100), ("weierstrass-uniqueness", 100)],
    ))
}

type Criterion = (&'static str, u64, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("example 1 end-to-end", 5, example_one),
        ("example 2 with r = 2", 10, example_two),
        ("example 3 with r = 1, 2", 60, example_three),
        ("curve solver suite", 60, solver),
        ("universal model suite", 120, universal),
        ("flow and truncation suite", 60, flows),
        ("kernel suite", 30, kernel),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let problems = match result {
            Ok(o) => o.failures,
            Err(e) => vec![format!("error: {e}")],
        };
        let ok = problems.is_empty() && !over;
        if !ok {
            failed += 1;
        }
        println!(
            "{} {name} ({:.2} s, budget {budget} s)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if over {
            println!("    over budget");
        }
        for p in problems {
            println!("    {p}");
        }
    }
    println!("{} of 7 criteria passed", 7 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
