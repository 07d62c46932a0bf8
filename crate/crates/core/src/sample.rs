//! Seeded random elements, series and polynomials for property checks.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;

use crate::kernel::{Monomial, Poly, PowerSeries, Rational, RingElement, TestRing};

/// A small rational: mostly integers in `-3..=3`, sometimes a fraction.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    let num = rng.gen_range(-3i64..=3);
    let den = if rng.gen_bool(0.25) { rng.gen_range(2i64..=3) } else { 1 };
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let q = small_rational(rng);
        if q != Rational::from_integer(0.into()) {
            return q;
        }
    }
}

/// Random element; each basis monomial gets a coefficient with probability
/// `density`. The constant coordinate is zero when `nilpotent` is set.
pub fn element(rng: &mut impl Rng, ring: &Arc<TestRing>, nilpotent: bool, density: f64) -> RingElement {
    let mut terms: Vec<(Monomial, Rational)> = Vec::new();
    for m in ring.basis() {
        if !(nilpotent && m.is_one()) && rng.gen_bool(density) {
            terms.push((m.clone(), nonzero_rational(rng)));
        }
    }
    RingElement::from_terms(ring, terms)
}

pub fn nilpotent(rng: &mut impl Rng, ring: &Arc<TestRing>) -> RingElement {
    element(rng, ring, true, 0.6)
}

/// Random series of the given precision with `nonzero` random coefficients
/// at random positions.
pub fn series(
    rng: &mut impl Rng,
    ring: &Arc<TestRing>,
    precision: usize,
    nonzero: usize,
    nilpotent: bool,
) -> PowerSeries {
    let mut s = PowerSeries::zero(ring, precision);
    for _ in 0..nonzero {
        if precision == 0 {
            break;
        }
        let k = rng.gen_range(0..precision);
        let c = element(rng, ring, nilpotent, 0.7);
        let sum = s.coeff(k) + &c;
        s.set_coeff(k, sum);
    }
    s
}

/// Random rational polynomial with up to `nterms` terms of total degree at
/// most `max_degree`.
pub fn poly(rng: &mut impl Rng, vars: &[String], max_degree: u16, nterms: usize) -> Poly {
    let mut p = Poly::zero(vars);
    for _ in 0..nterms {
        let mut exps = vec![0u16; vars.len()];
        let mut left = rng.gen_range(0..=max_degree);
        for e in exps.iter_mut() {
            let take = rng.gen_range(0..=left);
            *e = take;
            left -= take;
        }
        p.add_term(Monomial::from_exponents(exps), nonzero_rational(rng));
    }
    p
}

/// A deterministic generator for a named check.
pub fn rng(seed: u64, stream: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}
