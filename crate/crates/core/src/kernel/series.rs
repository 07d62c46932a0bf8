//! Univariate power series over a test-ring, truncated at an explicit
//! precision.
//!
//! A series of precision `T` knows the coefficients of `t^0 .. t^(T-1)`;
//! everything beyond is unknown, not zero. Reading past the precision is a
//! contract violation and panics; fallible accessors return
//! [`Error::InsufficientPrecision`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;

use super::rational::Rational;
use super::ring::{RingElement, RingMorphism, TestRing};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct PowerSeries {
    ring: Arc<TestRing>,
    coeffs: Vec<RingElement>,
}

impl PowerSeries {
    pub fn zero(ring: &Arc<TestRing>, precision: usize) -> Self {
        PowerSeries {
            ring: ring.clone(),
            coeffs: vec![RingElement::zero(ring); precision],
        }
    }

    pub fn one(ring: &Arc<TestRing>, precision: usize) -> Self {
        Self::constant(&RingElement::one(ring), precision)
    }

    pub fn constant(c: &RingElement, precision: usize) -> Self {
        let mut s = Self::zero(c.ring(), precision);
        if precision > 0 {
            s.coeffs[0] = c.clone();
        }
        s
    }

    /// `c * t^k`.
    pub fn monomial(c: &RingElement, k: usize, precision: usize) -> Self {
        let mut s = Self::zero(c.ring(), precision);
        if k < precision {
            s.coeffs[k] = c.clone();
        }
        s
    }

    /// The series `t`.
    pub fn var(ring: &Arc<TestRing>, precision: usize) -> Self {
        Self::monomial(&RingElement::one(ring), 1, precision)
    }

    pub fn from_coeffs(ring: &Arc<TestRing>, coeffs: Vec<RingElement>) -> Self {
        for c in &coeffs {
            assert!(TestRing::same(c.ring(), ring), "ring mismatch");
        }
        PowerSeries {
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn from_rationals(ring: &Arc<TestRing>, coeffs: Vec<Rational>) -> Self {
        PowerSeries {
            ring: ring.clone(),
            coeffs: coeffs.into_iter().map(|q| RingElement::constant(ring, q)).collect(),
        }
    }

    pub fn ring(&self) -> &Arc<TestRing> {
        &self.ring
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    /// Coefficient of `t^k`. Panics when `k` is at or beyond the precision.
    pub fn coeff(&self, k: usize) -> &RingElement {
        assert!(
            k < self.coeffs.len(),
            "coefficient t^{k} requested from a series known to O(t^{})",
            self.coeffs.len()
        );
        &self.coeffs[k]
    }

    pub fn try_coeff(&self, k: usize) -> Result<&RingElement> {
        self.coeffs.get(k).ok_or(Error::InsufficientPrecision {
            needed: k + 1,
            available: self.coeffs.len(),
        })
    }

    pub fn set_coeff(&mut self, k: usize, c: RingElement) {
        assert!(TestRing::same(c.ring(), &self.ring), "ring mismatch");
        self.coeffs[k] = c;
    }

    pub fn truncate(&self, precision: usize) -> Result<Self> {
        if precision > self.coeffs.len() {
            return Err(Error::InsufficientPrecision {
                needed: precision,
                available: self.coeffs.len(),
            });
        }
        Ok(PowerSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs[..precision].to_vec(),
        })
    }

    /// Declares the unknown coefficients up to `precision` to be zero.
    pub fn extend_zero(&self, precision: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if precision > coeffs.len() {
            coeffs.resize(precision, RingElement::zero(&self.ring));
        }
        PowerSeries {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// Zero in every known coefficient.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RingElement::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Index of the first coefficient outside the maximal ideal, i.e. the
    /// order of the reduction to the residue field.
    pub fn residue_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.in_maximal_ideal())
    }

    /// Degree of the last nonzero known coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn residue(&self) -> Vec<Rational> {
        self.coeffs.iter().map(RingElement::residue).collect()
    }

    /// Reduction modulo the maximal ideal, as a series over the ground field.
    pub fn reduce(&self) -> PowerSeries {
        PowerSeries::from_rationals(&TestRing::field(), self.residue())
    }

    pub fn all_in_maximal_ideal(&self) -> bool {
        self.coeffs.iter().all(RingElement::in_maximal_ideal)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        PowerSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c.scale(q)).collect(),
        }
    }

    pub fn mul_elem(&self, a: &RingElement) -> Self {
        PowerSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// Multiplication by `t^n`; the precision grows by `n`.
    pub fn shift_up(&self, n: usize) -> Self {
        let mut coeffs = vec![RingElement::zero(&self.ring); n];
        coeffs.extend(self.coeffs.iter().cloned());
        PowerSeries {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// Drops `t^0 .. t^(n-1)` and divides by `t^n`; the precision shrinks by `n`.
    pub fn shift_down(&self, n: usize) -> Self {
        PowerSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().skip(n).cloned().collect(),
        }
    }

    /// `t^0 .. t^(n-1)` part, as a series of the same precision.
    pub fn low_part(&self, n: usize) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut().skip(n) {
            *c = RingElement::zero(&self.ring);
        }
        s
    }

    /// Inverse of a series whose constant coefficient is a unit.
    pub fn inverse(&self) -> Option<Self> {
        let p = self.precision();
        if p == 0 {
            return Some(self.clone());
        }
        let c0inv = self.coeffs[0].inverse()?;
        let mut out: Vec<RingElement> = Vec::with_capacity(p);
        out.push(c0inv.clone());
        for k in 1..p {
            let mut acc = RingElement::zero(&self.ring);
            for i in 1..=k {
                if self.coeffs[i].is_zero() || out[k - i].is_zero() {
                    continue;
                }
                acc = &acc + &(&self.coeffs[i] * &out[k - i]);
            }
            out.push(-&(&acc * &c0inv));
        }
        Some(PowerSeries::from_coeffs(&self.ring, out))
    }

    /// Quotient by a unit series.
    pub fn div_unit(&self, unit: &PowerSeries) -> Option<Self> {
        Some(self * &unit.inverse()?)
    }

    /// Applies a ring morphism coefficientwise.
    pub fn map(&self, f: &RingMorphism) -> PowerSeries {
        PowerSeries {
            ring: f.target().clone(),
            coeffs: self.coeffs.iter().map(|c| f.apply(c)).collect(),
        }
    }

    /// Same rational coefficients, read in another test-ring.
    pub fn lift_to(&self, ring: &Arc<TestRing>) -> PowerSeries {
        assert!(
            self.coeffs.iter().all(RingElement::is_constant),
            "only residue-field series can be lifted"
        );
        PowerSeries::from_rationals(ring, self.residue())
    }

    /// `sum c_k a^k` for nilpotent `a`; a finite sum.
    pub fn eval_nilpotent(&self, a: &RingElement) -> Result<RingElement> {
        if !a.in_maximal_ideal() {
            return Err(Error::NotNilpotent(a.render()));
        }
        let mut acc = RingElement::zero(&self.ring);
        let mut power = RingElement::one(&self.ring);
        let mut k = 0;
        while !power.is_zero() {
            acc = &acc + &(self.try_coeff(k)? * &power);
            power = &power * a;
            k += 1;
        }
        Ok(acc)
    }

    /// Ascending text form with an explicit truncation marker, e.g.
    /// `t - 1/2*eps*t^3 + O(t^8)`.
    pub fn render(&self, var: &str) -> String {
        let mut s = self.render_poly(var);
        let tail = format!("O({})", pow_text(var, self.precision()));
        if s == "0" {
            s = tail;
        } else {
            s.push_str(" + ");
            s.push_str(&tail);
        }
        s
    }

    /// Ascending text form of the known coefficients, without a marker.
    pub fn render_poly(&self, var: &str) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let text = c.render();
            let (neg, body) = if c.is_single_term() {
                match text.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, text),
                }
            } else {
                (false, format!("({text})"))
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if k == 0 {
                out.push_str(&body);
            } else if body == "1" {
                out.push_str(&pow_text(var, k));
            } else {
                out.push_str(&body);
                out.push('*');
                out.push_str(&pow_text(var, k));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    fn check_ring(&self, other: &PowerSeries) {
        assert!(
            TestRing::same(&self.ring, &other.ring),
            "ring mismatch: {} vs {}",
            self.ring.label(),
            other.ring.label()
        );
    }
}

fn pow_text(var: &str, k: usize) -> String {
    match k {
        0 => "1".to_string(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t"))
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        self.check_ring(rhs);
        PowerSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        self.check_ring(rhs);
        PowerSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        self.check_ring(rhs);
        let p = self.precision().min(rhs.precision());
        let mut out = vec![RingElement::zero(&self.ring); p];
        for (i, a) in self.coeffs.iter().enumerate().take(p) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(p - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        PowerSeries {
            ring: self.ring.clone(),
            coeffs: out,
        }
    }
}

/// Rational series helpers that stay in the residue field.
pub fn rational_order(coeffs: &[Rational]) -> Option<usize> {
    coeffs.iter().position(|q| !q.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::int;

    #[test]
    fn precision_is_min_under_products() {
        let r = TestRing::field();
        let a = PowerSeries::from_rationals(&r, vec![int(1), int(1), int(1)]);
        let b = PowerSeries::from_rationals(&r, vec![int(1), int(-1)]);
        let c = &a * &b;
        assert_eq!(c.precision(), 2);
        assert_eq!(c.residue(), vec![int(1), int(0)]);
    }

    #[test]
    #[should_panic(expected = "known to O(t^2)")]
    fn reading_past_precision_panics() {
        let r = TestRing::field();
        let a = PowerSeries::zero(&r, 2);
        let _ = a.coeff(2);
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let r = TestRing::field();
        let a = PowerSeries::from_rationals(&r, vec![int(1), int(-1), int(0), int(0)]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv.residue(), vec![int(1); 4]);
    }

    #[test]
    fn render_ascending() {
        let r = TestRing::dual_numbers("e", 2);
        let e = RingElement::generator(&r, 0);
        let mut s = PowerSeries::var(&r, 4);
        s.set_coeff(2, -&e);
        s.set_coeff(3, &e + &RingElement::one(&r));
        assert_eq!(s.render("t"), "t - e*t^2 + (e + 1)*t^3 + O(t^4)");
    }
}
