//! Exact arithmetic: rationals, test-rings, polynomials, truncated power
//! series and Weierstrass division.

pub mod monomial;
pub mod poly;
pub mod rational;
pub mod ring;
pub mod series;
pub mod weierstrass;

pub use monomial::Monomial;
pub use poly::{Coefficient, Poly};
pub use rational::Rational;
pub use ring::{RingElement, RingMorphism, TestRing};
pub use series::PowerSeries;
pub use weierstrass::{distinguished_root, weierstrass_divide, Division};
