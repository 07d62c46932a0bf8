//! Job files: bracketed section headers followed by `key = value` lines.
//!
//! ```text
//! [hypersurface]
//! variables = x, y, z
//! transverse = y
//! equation = x*y - z^2
//!
//! [arc]
//! x = t
//! y = 0
//! z = 0
//!
//! [run]
//! command = model
//! N = 2
//! ```
//!
//! `#` starts a comment. Keys and section names are case-sensitive.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::parse::{parse_names, parse_poly_at, parse_relations, parse_ring_poly_at, ring_poly_to_series, Origin};
use crate::arc::{ArcDeformation, FlowSpec, FormalArc, Hypersurface};
use crate::curve::{CurveDeformation, PlaneCurveGerm};
use crate::error::{Error, Result};
use crate::kernel::{Poly, RingElement, TestRing};

pub const DEFAULT_N: usize = 4;
pub const DEFAULT_K: u32 = 3;
pub const DEFAULT_T: usize = 64;
pub const DEFAULT_R: usize = 2;
pub const MAX_R: usize = 3;

/// Name of the arc parameter in job files.
pub const ARC_PARAMETER: &str = "t";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Mult,
    Lift,
    LiftArc,
    Model,
    Flow,
    Truncate,
    VerifyExample,
    Selftest,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Mult,
        Command::Lift,
        Command::LiftArc,
        Command::Model,
        Command::Flow,
        Command::Truncate,
        Command::VerifyExample,
        Command::Selftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Mult => "mult",
            Command::Lift => "lift",
            Command::LiftArc => "lift-arc",
            Command::Model => "model",
            Command::Flow => "flow",
            Command::Truncate => "truncate",
            Command::VerifyExample => "verify-example",
            Command::Selftest => "selftest",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Job(format!("unknown command `{s}`")))
    }
}

/// Numeric run parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    /// Truncation degree of the arc model.
    pub n: usize,
    /// Adic truncation of the universal ring.
    pub k: u32,
    /// Series precision.
    pub t: usize,
    pub example: Option<u8>,
    pub r: usize,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            n: DEFAULT_N,
            k: DEFAULT_K,
            t: DEFAULT_T,
            example: None,
            r: DEFAULT_R,
            seed: 0,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Parameter("N must be positive".into()));
        }
        if self.k == 0 {
            return Err(Error::Parameter("K must be positive".into()));
        }
        if self.t == 0 {
            return Err(Error::Parameter("T must be positive".into()));
        }
        if let Some(e) = self.example {
            if !(1..=3).contains(&e) {
                return Err(Error::Parameter(format!("example must be 1, 2 or 3, got {e}")));
            }
        }
        if !(1..=MAX_R).contains(&self.r) {
            return Err(Error::Parameter(format!(
                "r must be between 1 and {MAX_R}, got {}",
                self.r
            )));
        }
        Ok(())
    }
}

/// Plane curve data: `f(x, y)`, the branch `y = h0(x)`, and an optional
/// perturbation over the job's ring.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub f: Poly,
    pub branch: Poly,
    pub perturbation: Option<Poly<RingElement>>,
}

#[derive(Clone, Debug)]
pub struct FlowSection {
    /// Zero-based position among the non-transverse variables.
    pub index: usize,
    pub f: Poly<RingElement>,
}

/// A validated job.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub ring: Option<Arc<TestRing>>,
    pub hypersurface: Option<Hypersurface>,
    /// One polynomial in `t` per hypersurface variable.
    pub arc: Option<Vec<Poly>>,
    /// One polynomial in `t` per non-transverse variable.
    pub deformation: Option<Vec<Poly<RingElement>>>,
    pub curve: Option<CurveSpec>,
    pub flow: Option<FlowSection>,
    pub params: Params,
}

pub fn curve_variables() -> Vec<String> {
    vec!["x".to_string(), "y".to_string()]
}

fn t_vars() -> Vec<String> {
    vec![ARC_PARAMETER.to_string()]
}

impl JobSpec {
    /// A job with no data sections.
    pub fn bare(command: Command, params: Params) -> JobSpec {
        JobSpec {
            command,
            ring: None,
            hypersurface: None,
            arc: None,
            deformation: None,
            curve: None,
            flow: None,
            params,
        }
    }

    /// Non-transverse dimension `d` of the hypersurface.
    pub fn dim(&self) -> Option<usize> {
        self.hypersurface.as_ref().map(Hypersurface::dim)
    }

    /// The job's test-ring, the ground field when none is declared.
    pub fn ring(&self) -> Arc<TestRing> {
        self.ring.clone().unwrap_or_else(TestRing::field)
    }

    fn need<'a, T>(&self, v: &'a Option<T>, section: &str) -> Result<&'a T> {
        v.as_ref()
            .ok_or_else(|| Error::Job(format!("command {} needs a [{section}] section", self.command)))
    }

    pub fn require_hypersurface(&self) -> Result<&Hypersurface> {
        self.need(&self.hypersurface, "hypersurface")
    }

    /// The base arc at precision `T`.
    pub fn gamma(&self) -> Result<FormalArc> {
        let comps = self.need(&self.arc, "arc")?;
        let q = TestRing::field();
        let t = self.params.t;
        let series = comps.iter().map(|p| p.to_series(&q, t)).collect::<Result<Vec<_>>>()?;
        Ok(FormalArc::new(&q, series))
    }

    pub fn arc_deformation(&self) -> Result<ArcDeformation> {
        let du = self.need(&self.deformation, "deformation")?;
        let ring = self.ring();
        let series = du
            .iter()
            .map(|p| ring_poly_to_series(p, &ring, self.params.t))
            .collect();
        ArcDeformation::new(&ring, series)
    }

    pub fn germ(&self) -> Result<PlaneCurveGerm> {
        let c = self.need(&self.curve, "curve")?;
        let h0 = c.branch.to_series(&TestRing::field(), self.params.t)?;
        PlaneCurveGerm::new(c.f.clone(), h0)
    }

    pub fn curve_deformation(&self) -> Result<CurveDeformation> {
        let c = self.need(&self.curve, "curve")?;
        let germ = self.germ()?;
        let ring = self.ring();
        match &c.perturbation {
            Some(p) => CurveDeformation::from_poly_in(&germ, &ring, &germ.f().over_ring(&ring).add(p)),
            None => Ok(CurveDeformation::zero(&germ, &ring)),
        }
    }

    pub fn flow_spec(&self) -> Result<FlowSpec> {
        let f = self.need(&self.flow, "flow")?;
        let ring = self.ring();
        Ok(FlowSpec::new(f.index, ring_poly_to_series(&f.f, &ring, self.params.t)))
    }
}

#[derive(Clone, Debug)]
struct Entry {
    key: String,
    value: String,
    line: usize,
    value_column: usize,
}

impl Entry {
    fn origin(&self) -> Origin {
        Origin {
            line: self.line,
            column: self.value_column,
        }
    }
}

#[derive(Clone, Debug)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

impl Section {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn require(&self, key: &str) -> Result<&Entry> {
        self.get(key).ok_or_else(|| {
            Error::Job(format!(
                "section [{}] (line {}) is missing key `{key}`",
                self.name, self.line
            ))
        })
    }

    fn only(&self, allowed: &[&str]) -> Result<()> {
        for e in &self.entries {
            if !allowed.contains(&e.key.as_str()) {
                return Err(Error::Job(format!(
                    "line {}: unknown key `{}` in section [{}]",
                    e.line, e.key, self.name
                )));
            }
        }
        Ok(())
    }
}

const SECTIONS: [&str; 7] = ["ring", "hypersurface", "arc", "deformation", "curve", "flow", "run"];

fn split_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (ix, raw) in text.lines().enumerate() {
        let line = ix + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::Job(format!("line {line}: unterminated section header")))?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(Error::Job(format!("line {line}: unknown section [{name}]")));
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(Error::Job(format!("line {line}: duplicate section [{name}]")));
            }
            sections.push(Section {
                name: name.to_string(),
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::Job(format!("line {line}: expected `key = value`")))?;
        let section = sections
            .last_mut()
            .ok_or_else(|| Error::Job(format!("line {line}: key outside of any section")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Job(format!("line {line}: empty key")));
        }
        if section.get(key).is_some() {
            return Err(Error::Job(format!(
                "line {line}: duplicate key `{key}` in section [{}]",
                section.name
            )));
        }
        let offset = key_value_offset(content);
        let leading = value.len() - value.trim_start().len();
        section.entries.push(Entry {
            key: key.to_string(),
            value: value.trim().to_string(),
            line,
            value_column: content[..offset].chars().count() + value[..leading].chars().count() + 1,
        });
    }
    Ok(sections)
}

fn key_value_offset(content: &str) -> usize {
    content.find('=').map_or(0, |i| i + 1)
}

fn parse_number<T: FromStr>(e: &Entry) -> Result<T> {
    e.value
        .parse()
        .map_err(|_| Error::Job(format!("line {}: `{}` must be a non-negative integer", e.line, e.key)))
}

fn parse_run(s: &Section) -> Result<(Command, Params)> {
    s.only(&["command", "N", "K", "T", "example", "r", "seed"])?;
    let command: Command = s.require("command")?.value.parse()?;
    let mut p = Params::default();
    if let Some(e) = s.get("N") {
        p.n = parse_number(e)?;
    }
    if let Some(e) = s.get("K") {
        p.k = parse_number(e)?;
    }
    if let Some(e) = s.get("T") {
        p.t = parse_number(e)?;
    }
    if let Some(e) = s.get("example") {
        p.example = Some(parse_number(e)?);
    }
    if let Some(e) = s.get("r") {
        p.r = parse_number(e)?;
    }
    if let Some(e) = s.get("seed") {
        p.seed = parse_number(e)?;
    }
    p.validate()?;
    Ok((command, p))
}

fn parse_ring(s: &Section) -> Result<Arc<TestRing>> {
    s.only(&["generators", "relations", "cap"])?;
    let gens = parse_names(&s.require("generators")?.value)?;
    let relations = match s.get("relations") {
        Some(e) => parse_relations(&e.value, &gens, e.origin())?,
        None => Vec::new(),
    };
    let cap = s.get("cap").map(parse_number).transpose()?;
    TestRing::quotient(gens, relations, cap)
}

fn parse_hypersurface(s: &Section) -> Result<Hypersurface> {
    s.only(&["variables", "transverse", "equation"])?;
    let vars = parse_names(&s.require("variables")?.value)?;
    if vars.iter().any(|v| v == ARC_PARAMETER) {
        return Err(Error::Job(format!(
            "`{ARC_PARAMETER}` is reserved for the arc parameter"
        )));
    }
    let transverse = s.require("transverse")?;
    if !vars.contains(&transverse.value) {
        return Err(Error::Job(format!(
            "line {}: transverse variable `{}` is not declared",
            transverse.line, transverse.value
        )));
    }
    let eq = s.require("equation")?;
    let phi = parse_poly_at(&eq.value, &vars, eq.origin())?;
    Hypersurface::new(phi, &transverse.value)
}

fn parse_arc(s: &Section, h: &Hypersurface) -> Result<Vec<Poly>> {
    let vars: Vec<&str> = h.vars().iter().map(String::as_str).collect();
    s.only(&vars)?;
    h.vars()
        .iter()
        .map(|v| {
            let e = s.require(v)?;
            parse_poly_at(&e.value, &t_vars(), e.origin())
        })
        .collect()
}

fn parse_deformation(s: &Section, h: &Hypersurface, ring: &Arc<TestRing>) -> Result<Vec<Poly<RingElement>>> {
    let names = h.u_names();
    let allowed: Vec<&str> = names.iter().map(String::as_str).collect();
    s.only(&allowed)?;
    names
        .iter()
        .map(|v| match s.get(v) {
            Some(e) => parse_ring_poly_at(&e.value, &t_vars(), ring, e.origin()),
            None => Ok(Poly::zero(&t_vars())),
        })
        .collect()
}

fn parse_curve(s: &Section, ring: &Arc<TestRing>) -> Result<CurveSpec> {
    s.only(&["f", "branch", "perturbation"])?;
    let vars = curve_variables();
    let e = s.require("f")?;
    let f = parse_poly_at(&e.value, &vars, e.origin())?;
    let branch = match s.get("branch") {
        Some(e) => parse_poly_at(&e.value, &vars[..1], e.origin())?,
        None => Poly::zero(&vars[..1]),
    };
    let perturbation = s
        .get("perturbation")
        .map(|e| parse_ring_poly_at(&e.value, &vars, ring, e.origin()))
        .transpose()?;
    Ok(CurveSpec {
        f,
        branch,
        perturbation,
    })
}

fn parse_flow(s: &Section, h: &Hypersurface, ring: &Arc<TestRing>) -> Result<FlowSection> {
    s.only(&["index", "f"])?;
    let ie = s.require("index")?;
    let index: usize = parse_number(ie)?;
    if index == 0 || index > h.dim() {
        return Err(Error::Job(format!(
            "line {}: flow index must be between 1 and {}",
            ie.line,
            h.dim()
        )));
    }
    let e = s.require("f")?;
    let f = parse_ring_poly_at(&e.value, &t_vars(), ring, e.origin())?;
    Ok(FlowSection { index: index - 1, f })
}

/// Sections each command reads. The first list is mandatory; `mult` and
/// `model` accept either `[curve]` or `[hypersurface]` with `[arc]`.
fn sections_for(command: Command) -> (&'static [&'static str], &'static [&'static str]) {
    match command {
        Command::Mult | Command::Model => (&[], &["ring", "curve", "hypersurface", "arc"]),
        Command::Lift => (&["ring", "curve"], &[]),
        Command::LiftArc => (&["ring", "hypersurface", "arc", "deformation"], &[]),
        Command::Flow => (&["hypersurface", "arc", "flow"], &["ring"]),
        Command::Truncate => (&["hypersurface", "arc"], &[]),
        Command::VerifyExample | Command::Selftest => (&[], &[]),
    }
}

/// Parses and validates a job file.
pub fn parse_job(text: &str) -> Result<JobSpec> {
    let sections = split_sections(text)?;
    let find = |name: &str| sections.iter().find(|s| s.name == name);
    let run = find("run").ok_or_else(|| Error::Job("missing section [run]".into()))?;
    let (command, params) = parse_run(run)?;

    let (required, optional) = sections_for(command);
    for name in required {
        if find(name).is_none() {
            return Err(Error::Job(format!("command {command} needs a [{name}] section")));
        }
    }
    for s in &sections {
        if s.name != "run" && !required.contains(&s.name.as_str()) && !optional.contains(&s.name.as_str()) {
            return Err(Error::Job(format!(
                "line {}: section [{}] is not used by command {command}",
                s.line, s.name
            )));
        }
    }

    let mut job = JobSpec::bare(command, params);
    job.ring = find("ring").map(parse_ring).transpose()?;
    let ring = job.ring();
    job.hypersurface = find("hypersurface").map(parse_hypersurface).transpose()?;
    if let Some(s) = find("arc") {
        let h = job
            .hypersurface
            .as_ref()
            .ok_or_else(|| Error::Job("[arc] needs a [hypersurface] section".into()))?;
        job.arc = Some(parse_arc(s, h)?);
    }
    if let Some(s) = find("deformation") {
        let h = job.require_hypersurface()?;
        job.deformation = Some(parse_deformation(s, h, &ring)?);
    }
    if let Some(s) = find("flow") {
        let h = job.require_hypersurface()?;
        job.flow = Some(parse_flow(s, h, &ring)?);
    }
    job.curve = find("curve").map(|s| parse_curve(s, &ring)).transpose()?;

    match command {
        Command::Mult | Command::Model => {
            let arc_side = job.hypersurface.is_some() || job.arc.is_some();
            match (job.curve.is_some(), arc_side) {
                (true, true) => {
                    return Err(Error::Job(format!(
                        "command {command} takes either [curve] or [hypersurface] with [arc], not both"
                    )))
                }
                (false, false) => {
                    return Err(Error::Job(format!(
                        "command {command} needs [curve] or [hypersurface] with [arc]"
                    )))
                }
                (false, true) if job.arc.is_none() => {
                    return Err(Error::Job(format!("command {command} needs an [arc] section")))
                }
                _ => {}
            }
        }
        Command::Lift => {
            if job.curve.as_ref().is_some_and(|c| c.perturbation.is_none()) {
                return Err(Error::Job("command lift needs `perturbation` in [curve]".into()));
            }
        }
        Command::VerifyExample if job.params.example.is_none() => {
            return Err(Error::Job("command verify-example needs `example` in [run]".into()));
        }
        _ => {}
    }
    Ok(job)
}
