//! Sparse multivariate polynomials over a named, ordered variable list.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::rational::{fmt_rational, Rational};
use super::ring::{RingElement, TestRing};
use super::series::PowerSeries;
use crate::error::{Error, Result};

/// Coefficient domains a [`Poly`] can carry.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, q: &Rational) -> Self;
    /// Text form plus whether it needs parentheses as a factor.
    fn render(&self) -> (String, bool);
    /// Image in a test-ring's power series, as a constant series.
    fn to_series(&self, ring: &Arc<TestRing>, precision: usize) -> Result<PowerSeries>;
}

impl Coefficient for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
    fn render(&self) -> (String, bool) {
        (fmt_rational(self), false)
    }
    fn to_series(&self, ring: &Arc<TestRing>, precision: usize) -> Result<PowerSeries> {
        Ok(PowerSeries::constant(
            &RingElement::constant(ring, self.clone()),
            precision,
        ))
    }
}

impl Coefficient for RingElement {
    fn is_zero(&self) -> bool {
        RingElement::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, q: &Rational) -> Self {
        RingElement::scale(self, q)
    }
    fn render(&self) -> (String, bool) {
        (RingElement::render(self), !self.is_single_term())
    }
    fn to_series(&self, ring: &Arc<TestRing>, precision: usize) -> Result<PowerSeries> {
        if !TestRing::same(self.ring(), ring) {
            return Err(Error::RingMismatch);
        }
        Ok(PowerSeries::constant(self, precision))
    }
}

impl Coefficient for PowerSeries {
    fn is_zero(&self) -> bool {
        PowerSeries::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, q: &Rational) -> Self {
        PowerSeries::scale(self, q)
    }
    fn render(&self) -> (String, bool) {
        (self.render("t"), true)
    }
    fn to_series(&self, ring: &Arc<TestRing>, precision: usize) -> Result<PowerSeries> {
        if !TestRing::same(self.ring(), ring) {
            return Err(Error::RingMismatch);
        }
        self.truncate(precision)
    }
}

#[derive(Clone, PartialEq)]
pub struct Poly<C: Coefficient = Rational> {
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Poly<C> {
    pub fn zero(vars: &[String]) -> Self {
        Poly {
            vars: vars.into(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn term(vars: &[String], m: Monomial, c: C) -> Self {
        Self::from_terms(vars, [(m, c)])
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        assert_eq!(m.nvars(), self.vars.len(), "monomial arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.keys().map(|m| m.exponent(i)).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> Option<&C> {
        self.terms.get(&Monomial::one(self.vars.len()))
    }

    pub fn neg(&self) -> Self {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::from_terms(&self.vars, self.terms.iter().map(|(m, c)| (m.clone(), c.scale(q))))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = Self::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        Self::from_terms(&self.vars, self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))))
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32, one: C) -> Self {
        let mut acc = Self::term(&self.vars, Monomial::one(self.vars.len()), one);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            out.add_term(
                Monomial::from_exponents(exps),
                c.scale(&Rational::from_integer(e.into())),
            );
        }
        out
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Groups terms by the power of variable `i`: entry `j` holds the
    /// coefficient of `v_i^j` as a polynomial in the remaining variables.
    pub fn collect_in(&self, i: usize) -> Vec<Poly<C>> {
        let rest: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, v)| v.clone())
            .collect();
        let deg = usize::from(self.degree_in(i));
        let mut out = vec![Poly::zero(&rest); deg + 1];
        for (m, c) in &self.terms {
            let (e, m2) = m.split_off(i);
            out[usize::from(e)].add_term(m2, c.clone());
        }
        out
    }

    /// Same polynomial over a variable list that contains all of `self`'s.
    pub fn embed(&self, vars: &[String]) -> Result<Self> {
        let map = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::UnknownVariable(v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly {
            vars: vars.into(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.embed(&map, vars.len()), c.clone()))
                .collect(),
        })
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(&self.vars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    fn check_vars(&self, other: &Self) {
        assert!(
            self.vars == other.vars,
            "variable lists differ: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    /// Evaluates with each variable sent to a power series over `ring`,
    /// truncated at `precision`.
    pub fn substitute(&self, ring: &Arc<TestRing>, images: &[PowerSeries], precision: usize) -> Result<PowerSeries> {
        if images.len() != self.vars.len() {
            return Err(Error::Parameter(format!(
                "{} images for {} variables",
                images.len(),
                self.vars.len()
            )));
        }
        for s in images {
            if !TestRing::same(s.ring(), ring) {
                return Err(Error::RingMismatch);
            }
            if s.precision() < precision {
                return Err(Error::InsufficientPrecision {
                    needed: precision,
                    available: s.precision(),
                });
            }
        }
        let images: Vec<PowerSeries> = images.iter().map(|s| s.truncate(precision)).collect::<Result<_>>()?;
        let mut powers: Vec<Vec<PowerSeries>> = images
            .iter()
            .map(|s| vec![PowerSeries::one(ring, precision), s.clone()])
            .collect();
        let mut acc = PowerSeries::zero(ring, precision);
        for (m, c) in &self.terms {
            let mut term = c.to_series(ring, precision)?;
            for (i, &e) in m.exponents().iter().enumerate() {
                let e = usize::from(e);
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e];
                if term.is_zero() {
                    break;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

impl Poly<Rational> {
    pub fn constant(vars: &[String], q: Rational) -> Self {
        Self::term(vars, Monomial::one(vars.len()), q)
    }

    pub fn var(vars: &[String], i: usize) -> Self {
        Self::term(vars, Monomial::var(vars.len(), i, 1), Rational::one())
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// Coefficients as elements of `ring` (constants).
    pub fn over_ring(&self, ring: &Arc<TestRing>) -> Poly<RingElement> {
        self.map_coeffs(|q| RingElement::constant(ring, q.clone()))
    }

    /// Evaluates at elements of a test-ring. Exact because evaluation is a
    /// finite sum.
    pub fn eval_ring(&self, ring: &Arc<TestRing>, values: &[RingElement]) -> RingElement {
        assert_eq!(values.len(), self.vars.len());
        let mut acc = RingElement::zero(ring);
        for (m, q) in &self.terms {
            let mut t = RingElement::constant(ring, q.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &values[i].pow(u32::from(e));
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Evaluates at rational values.
    pub fn eval(&self, values: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, q) in &self.terms {
            let mut t = q.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t *= &values[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Polynomial in the ring's generators back to a ring element.
    pub fn to_ring_element(&self, ring: &Arc<TestRing>) -> Result<RingElement> {
        let embedded = self.embed(ring.generators())?;
        Ok(RingElement::from_terms(
            ring,
            embedded.terms.iter().map(|(m, q)| (m.clone(), q.clone())),
        ))
    }

    /// Polynomial in one variable, converted to a series of precision `precision`.
    pub fn to_series(&self, ring: &Arc<TestRing>, precision: usize) -> Result<PowerSeries> {
        if self.vars.len() != 1 {
            return Err(Error::Parameter(
                "series conversion needs a univariate polynomial".into(),
            ));
        }
        let mut coeffs = vec![Rational::zero(); precision];
        for (m, q) in &self.terms {
            let k = usize::from(m.exponent(0));
            if k < precision {
                coeffs[k] = q.clone();
            }
        }
        Ok(PowerSeries::from_rationals(ring, coeffs))
    }
}

impl Poly<RingElement> {
    /// Polynomial in `(vars, generators)` with rational coefficients.
    pub fn flatten(&self, ring: &Arc<TestRing>) -> Poly<Rational> {
        let mut all: Vec<String> = self.vars.to_vec();
        all.extend(ring.generators().iter().cloned());
        let mut out = Poly::zero(&all);
        for (m, c) in &self.terms {
            for (g, q) in c.terms() {
                let mut exps = m.exponents().to_vec();
                exps.extend_from_slice(g.exponents());
                out.add_term(Monomial::from_exponents(exps), q.clone());
            }
        }
        out
    }
}

impl<C: Coefficient> Poly<C> {
    /// Canonical text: terms by descending degree then descending lex.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let (text, compound) = c.render();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, text),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff = if compound { format!("({body})") } else { body };
            if m.is_one() {
                out.push_str(&coeff);
            } else if coeff == "1" {
                out.push_str(&m.render(&self.vars));
            } else {
                out.push_str(&coeff);
                out.push('*');
                out.push_str(&m.render(&self.vars));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl<C: Coefficient> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<C: Coefficient> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
