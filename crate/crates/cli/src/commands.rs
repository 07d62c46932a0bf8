//! One function per subcommand, each turning a validated job into a report.

use arcspace::arc::{arc_multiplicity, finite_model, flow_arc, lift_arc, truncate_arc, FormalArc, Hypersurface};
use arcspace::curve::{lift_branch, universal_obstructions};
use arcspace::expr::{Check, Command, JobSpec, Report};
use arcspace::kernel::RingElement;
use arcspace::verify::checks::element_poly;
use arcspace::verify::{selftest, verify_example, ExampleRun, Sampling};
use arcspace::{Error, Result};

pub fn run(job: &JobSpec) -> Result<Report> {
    match job.command {
        Command::Mult => mult(job),
        Command::Lift => lift(job),
        Command::LiftArc => lift_arc_job(job),
        Command::Model => model(job),
        Command::Flow => flow(job),
        Command::Truncate => truncate(job),
        Command::VerifyExample => {
            let id = job
                .params
                .example
                .ok_or_else(|| Error::Job("verify-example needs --example or `example` in [run]".into()))?;
            verify_example(id, job.params.r, example_run(job))
        }
        Command::Selftest => selftest(job.params.seed, job.params.r, example_run(job)),
    }
}

fn example_run(job: &JobSpec) -> ExampleRun {
    let p = &job.params;
    ExampleRun {
        n: p.n,
        k: p.k,
        precision: p.t,
        sampling: Sampling {
            seed: p.seed,
            ..Sampling::default()
        },
    }
}

fn put_arc(report: &mut Report, h: &Hypersurface, arc: &FormalArc) {
    for (name, c) in h.vars().iter().zip(arc.comps()) {
        report.put(format!("arc.{name}"), c.render("t"));
    }
}

fn put_obstructions(report: &mut Report, obstructions: &[RingElement]) {
    for (l, o) in obstructions.iter().enumerate() {
        report.put(format!("obstruction.{l}"), o.render());
    }
}

fn mult(job: &JobSpec) -> Result<Report> {
    let mut report = Report::new();
    let m = if job.curve.is_some() {
        job.germ()?.multiplicity()
    } else {
        arc_multiplicity(job.require_hypersurface()?, &job.gamma()?, job.params.t)?
    };
    report.put("m", m);
    Ok(report)
}

fn lift(job: &JobSpec) -> Result<Report> {
    let def = job.curve_deformation()?;
    let res = lift_branch(&def, job.params.t)?;
    let mut report = Report::new();
    report.put("ring", def.ring().label());
    report.put("m", res.multiplicity());
    report.put("liftable", res.is_liftable());
    put_obstructions(&mut report, &res.obstructions);
    if let Some(h) = &res.lift {
        report.put("lift", h.render("x"));
    }
    Ok(report)
}

fn lift_arc_job(job: &JobSpec) -> Result<Report> {
    let h = job.require_hypersurface()?;
    let def = job.arc_deformation()?;
    let res = lift_arc(h, &job.gamma()?, &def, job.params.t)?;
    let mut report = Report::new();
    report.put("ring", def.ring().label());
    report.put("m", res.obstructions.len());
    report.put("liftable", res.is_liftable());
    put_obstructions(&mut report, &res.obstructions);
    if let Some(arc) = &res.lift {
        put_arc(&mut report, h, arc);
        report.check(Check::new("on-hypersurface", h.contains(arc)?));
    }
    Ok(report)
}

fn model(job: &JobSpec) -> Result<Report> {
    let p = &job.params;
    let mut report = Report::new();
    if job.curve.is_some() {
        let model = universal_obstructions(&job.germ()?, p.k, p.t)?;
        report.put("m", model.multiplicity());
        report.put("K", p.k);
        report.put("variables", model.ring().ngens());
        for (l, s) in model.series().iter().enumerate() {
            report.put(format!("series.{l}"), s.render());
        }
        for (l, s) in model.series().iter().enumerate() {
            report.put(format!("leading.{l}"), element_poly(&s.homogeneous_part(2)).render());
        }
        return Ok(report);
    }
    let h = job.require_hypersurface()?;
    let gamma = job.gamma()?;
    let model = finite_model(h, &gamma, p.n, p.k, p.t)?;
    report.put("m", arc_multiplicity(h, &gamma, p.t)?);
    report.put("N", p.n);
    report.put("K", p.k);
    report.put("variables", model.variables().len());
    report.put("equations", model.equations().len());
    for (i, e) in model.equations().iter().enumerate() {
        report.put(format!("equation.{}", i + 1), e.render());
    }
    for (i, e) in model.equations().iter().enumerate() {
        report.put(
            format!("leading.{}", i + 1),
            element_poly(&e.homogeneous_part(2)).render(),
        );
    }
    Ok(report)
}

fn flow(job: &JobSpec) -> Result<Report> {
    let h = job.require_hypersurface()?;
    let ring = job.ring();
    let gamma = job.gamma()?.lift_to(&ring);
    let out = flow_arc(h, &gamma, &[job.flow_spec()?])?;
    let mut report = Report::new();
    report.put("ring", ring.label());
    put_arc(&mut report, h, &out);
    // flows are tangent to the hypersurface
    report.check(Check::new("tangency", h.contains(&out)? == h.contains(&gamma)?));
    Ok(report)
}

fn truncate(job: &JobSpec) -> Result<Report> {
    let h = job.require_hypersurface()?;
    let gamma = job.gamma()?;
    let n = job.params.n;
    let out = truncate_arc(h, &gamma, n, job.params.t)?;
    let mut report = Report::new();
    report.put("N", n);
    report.put("flows", out.flows.len());
    let u_names = h.u_names();
    for f in &out.flows {
        report.put(format!("flow.{}", u_names[f.index]), f.f.render_poly("t"));
    }
    put_arc(&mut report, h, &out.arc);
    let arc = &out.arc;
    let mut ok = h.contains(arc)? || !h.contains(&gamma)?;
    for &i in &h.u_indices() {
        ok &= arc.comp(i).coeffs().iter().skip(n + 1).all(RingElement::is_zero);
    }
    for (a, b) in arc.comps().iter().zip(gamma.comps()) {
        ok &= a.coeffs().iter().take(n + 1).eq(b.coeffs().iter().take(n + 1));
    }
    report.check(Check::new("truncation", ok));
    Ok(report)
}
