use arcspace::expr::job::{DEFAULT_K, DEFAULT_N, DEFAULT_T};
use arcspace::expr::parse::split_generators;
use arcspace::expr::{parse_job, parse_poly, parse_ring_poly, parse_series, Command, Report};
use arcspace::kernel::rational::{int, ratio};
use arcspace::kernel::{Monomial, Poly, TestRing};
use arcspace::{sample, Error};
use proptest::prelude::*;

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[test]
fn defining_equation() {
    let v = names(&["x", "y", "z"]);
    let p = parse_poly("x*y - z^2", &v).unwrap();
    let expected = Poly::from_terms(
        &v,
        vec![
            (Monomial::from_exponents(vec![1, 1, 0]), int(1)),
            (Monomial::from_exponents(vec![0, 0, 2]), int(-1)),
        ],
    );
    assert_eq!(p, expected);
    assert_eq!(p.render(), "x*y - z^2");
}

#[test]
fn series_from_polynomial() {
    let q = TestRing::field();
    let s = parse_series("t^2", "t", &q, 6).unwrap();
    assert_eq!(s.residue(), vec![int(0), int(0), int(1), int(0), int(0), int(0)]);
    assert_eq!(s.precision(), 6);
    let e = TestRing::dual_numbers("e", 2);
    let s = parse_series("t + e*t^3 + t^9", "t", &e, 5).unwrap();
    assert_eq!(s.render("t"), "t + e*t^3 + O(t^5)");
}

#[test]
fn cancellation() {
    let v = names(&["x"]);
    let p = parse_poly("-(1/2)*x + x", &v).unwrap();
    assert_eq!(p.coeff(&Monomial::var(1, 0, 1)), Some(&ratio(1, 2)));
    assert_eq!(p.nterms(), 1);
    assert_eq!(p.render(), "1/2*x");
}

#[test]
fn ring_coefficients() {
    let ring = TestRing::truncated(names(&["a", "b"]), 2).unwrap();
    let p = parse_ring_poly("a*x + b*x + 3*y + a*b*y", &names(&["x", "y"]), &ring).unwrap();
    // a*b vanishes in the ring
    assert_eq!(p.render(), "(a + b)*x + 3*y");
    let flat = parse_poly("a*x + x", &names(&["x", "a"])).unwrap();
    assert_eq!(split_generators(&flat, 1, &ring).render(), "(a + 1)*x");
    assert!(matches!(
        parse_ring_poly("a*x", &names(&["x", "a"]), &ring),
        Err(Error::Parameter(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn print_parse_print(seed in any::<u64>()) {
        let vars = names(&["x", "y", "z_1", "c_z_0"]);
        let mut rng = sample::rng(seed, 0);
        let p = sample::poly(&mut rng, &vars, 5, 6);
        let printed = p.render();
        let back = parse_poly(&printed, &vars).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.render(), printed);
    }
}

const EXAMPLE_ONE: &str = "\
# Example 1: the double point
[hypersurface]
variables = x, y, z
transverse = y
equation = x*y - z^2

[arc]
x = t
y = 0
z = 0

[run]
command = model
N = 2
K = 2
";

const LIFT_ARC: &str = "\
[ring]
generators = w
relations = w^3

[hypersurface]
variables = x, y, z
transverse = y
equation = x*y - z^2

[arc]
x = t
y = 0
z = 0

[deformation]
z = w

[run]
command = lift-arc
";

const CURVE: &str = "\
[ring]
generators = e
cap = 2

[curve]
f = x*y
branch = 0
perturbation = e*x + e

[run]
command = lift
T = 16
";

const FLOW: &str = "\
[hypersurface]
variables = x, y, z
transverse = y
equation = x*y - z^2

[arc]
x = t
y = 0
z = 0

[flow]
index = 1
f = -3/2*t^2

[run]
command = flow
T = 12
";

#[test]
fn example_one_job() {
    let job = parse_job(EXAMPLE_ONE).unwrap();
    assert_eq!(job.command, Command::Model);
    assert_eq!(job.dim(), Some(2));
    assert_eq!(job.params.n, 2);
    assert_eq!(job.params.k, 2);
    assert_eq!(job.params.t, DEFAULT_T);
    assert!(job.ring.is_none());
    assert_eq!(job.require_hypersurface().unwrap().transverse_name(), "y");
    let gamma = job.gamma().unwrap();
    assert_eq!(gamma.comp(0).coeff(1).residue(), int(1));
}

#[test]
fn verify_job_carries_only_example() {
    let job = parse_job("[run]\ncommand = verify-example\nexample = 3\n").unwrap();
    assert_eq!(job.command, Command::VerifyExample);
    assert_eq!(job.params.example, Some(3));
    assert_eq!(
        (job.params.n, job.params.k, job.params.t),
        (DEFAULT_N, DEFAULT_K, DEFAULT_T)
    );
    assert!(job.hypersurface.is_none() && job.curve.is_none() && job.ring.is_none());
}

#[test]
fn other_jobs() {
    let job = parse_job(LIFT_ARC).unwrap();
    let def = job.arc_deformation().unwrap();
    assert_eq!(def.du()[1].coeff(0).render(), "w");
    assert!(def.du()[0].is_zero());
    assert_eq!(job.ring().label(), "Q[w]/(w^3)");

    let job = parse_job(CURVE).unwrap();
    let d = job.curve_deformation().unwrap();
    assert_eq!(d.coefficients().len(), 2);
    assert_eq!(job.ring().label(), "Q[e]/(e^2)");

    let job = parse_job(FLOW).unwrap();
    let spec = job.flow_spec().unwrap();
    assert_eq!(spec.index, 0);
    assert_eq!(spec.f.coeff(2).residue(), ratio(-3, 2));
}

#[test]
fn structural_errors() {
    let err = |text: &str| parse_job(text).unwrap_err();
    assert!(matches!(err("[run]\ncommand = mult\n"), Error::Job(_)));
    assert!(matches!(err("[run]\ncommand = lift\n"), Error::Job(m) if m.contains("[ring]")));
    assert!(matches!(err("[run]\ncommand = selftest\ncommand = mult\n"), Error::Job(m) if m.contains("duplicate key")));
    assert!(matches!(err("[run]\ncommand = selftest\n[run]\n"), Error::Job(m) if m.contains("duplicate section")));
    assert!(matches!(err("[rum]\ncommand = selftest\n"), Error::Job(m) if m.contains("unknown section")));
    assert!(matches!(err("[run]\ncommand = selftest\nfoo = 1\n"), Error::Job(m) if m.contains("unknown key")));
    assert!(matches!(err("command = selftest\n"), Error::Job(_)));
    assert!(matches!(err("[run]\ncommand = nope\n"), Error::Job(_)));
    assert!(matches!(err("[run]\ncommand = selftest\nN = 0\n"), Error::Parameter(_)));
    assert!(matches!(err("[run]\ncommand = selftest\nr = 4\n"), Error::Parameter(_)));
    assert!(matches!(err("[run]\ncommand = verify-example\n"), Error::Job(_)));
    // sections the command does not read
    assert!(matches!(err(&format!("{CURVE}[flow]\n")), Error::Job(m) if m.contains("not used")));
}

#[test]
fn expression_errors_carry_file_positions() {
    let text = EXAMPLE_ONE.replace("equation = x*y - z^2", "equation = x*y - w^2");
    assert_eq!(parse_job(&text).unwrap_err(), Error::UnknownVariable("w".into()));
    let text = EXAMPLE_ONE.replace("equation = x*y - z^2", "equation = x*y -* z^2");
    match parse_job(&text).unwrap_err() {
        Error::Syntax { line, column, .. } => assert_eq!((line, column), (5, 17)),
        other => panic!("{other:?}"),
    }
    let text = EXAMPLE_ONE.replace("transverse = y", "transverse = q");
    assert!(matches!(parse_job(&text), Err(Error::Job(_))));
}

/// Deleting any one key line of a valid job is rejected exactly when the key
/// is required.
#[test]
fn key_deletion_fuzz() {
    let optional = ["N", "K", "T", "r", "seed", "branch", "relations", "cap"];
    for (text, deformation_optional) in [(EXAMPLE_ONE, false), (LIFT_ARC, true), (CURVE, false), (FLOW, false)] {
        assert!(parse_job(text).is_ok());
        let lines: Vec<&str> = text.lines().collect();
        for (i, line) in lines.iter().enumerate() {
            let Some((key, _)) = line.split_once('=') else {
                continue;
            };
            if line.trim_start().starts_with('#') {
                continue;
            }
            let key = key.trim();
            let mutated: String = lines
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, l)| format!("{l}\n"))
                .collect();
            let result = parse_job(&mutated);
            let in_deformation =
                deformation_optional && lines[..i].iter().rev().find(|l| l.starts_with('[')) == Some(&"[deformation]");
            let key_optional = optional.contains(&key) || in_deformation;
            // a ring needs at least one of relations and cap
            let ring_bound = key == "relations" || key == "cap";
            if key_optional && !ring_bound {
                assert!(result.is_ok(), "deleting optional `{key}` rejected: {result:?}");
            } else if ring_bound {
                let other = if key == "relations" { "cap" } else { "relations" };
                let has_other = lines.iter().any(|l| l.starts_with(other));
                assert_eq!(result.is_ok(), has_other, "deleting `{key}`");
            } else {
                assert!(result.is_err(), "deleting required `{key}` accepted in\n{mutated}");
            }
        }
    }
}

#[test]
fn report_text_format() {
    let mut r = Report::new();
    r.put("m", 2);
    r.check(arcspace::expr::Check::new("alpha-identity", true).detail("cofactor.1", "1"));
    r.check(arcspace::expr::Check::new("leading-forms", false));
    assert_eq!(
        r.render_text(),
        "[result]\nm = 2\n\n[check]\nname = alpha-identity\nstatus = pass\ncofactor.1 = 1\n\n[check]\nname = leading-forms\nstatus = fail\n"
    );
    assert!(!r.passed());
    assert_eq!(
        r.flatten()[1],
        ("check.alpha-identity.status".to_string(), "pass".to_string())
    );
}
