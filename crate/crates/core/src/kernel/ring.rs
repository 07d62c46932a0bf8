//! Test-rings: finite-dimensional local quotients `Q[g_1..g_k] / I` with `I`
//! a monomial ideal, and their elements.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::rational::{fmt_rational, Rational};
use crate::error::{Error, Result};

pub struct TestRing {
    generators: Vec<String>,
    relations: Vec<Monomial>,
    // every monomial of total degree >= cap vanishes
    cap: Option<u32>,
    pure_power: Vec<u16>,
    basis: OnceLock<Vec<Monomial>>,
}

impl TestRing {
    /// The ground field, i.e. the test-ring with no generators.
    pub fn field() -> Arc<TestRing> {
        TestRing::new(Vec::new(), Vec::new()).expect("the ground field is a valid test-ring")
    }

    /// `Q[generators] / (relations)` for monomial relations.
    pub fn new(generators: Vec<String>, relations: Vec<Monomial>) -> Result<Arc<TestRing>> {
        Self::build(generators, relations, None)
    }

    /// `Q[generators] / (generators)^cap`.
    pub fn truncated(generators: Vec<String>, cap: u32) -> Result<Arc<TestRing>> {
        if cap == 0 {
            return Err(Error::Parameter("truncation degree must be positive".into()));
        }
        Self::build(generators, Vec::new(), Some(cap))
    }

    /// `Q[generators] / (relations + (generators)^cap)`, the cap optional.
    pub fn quotient(generators: Vec<String>, relations: Vec<Monomial>, cap: Option<u32>) -> Result<Arc<TestRing>> {
        if cap == Some(0) {
            return Err(Error::Parameter("truncation degree must be positive".into()));
        }
        Self::build(generators, relations, cap)
    }

    /// `Q[eps] / (eps^k)`.
    pub fn dual_numbers(name: &str, k: u16) -> Arc<TestRing> {
        TestRing::new(vec![name.to_string()], vec![Monomial::from_exponents(vec![k])])
            .expect("Q[e]/(e^k) is a valid test-ring")
    }

    fn build(generators: Vec<String>, relations: Vec<Monomial>, cap: Option<u32>) -> Result<Arc<TestRing>> {
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(Error::DuplicateGenerator(g.clone()));
            }
        }
        let n = generators.len();
        for r in &relations {
            if r.nvars() != n {
                return Err(Error::NonMonomialRelation(format!("{r:?}")));
            }
            if r.is_one() {
                return Err(Error::Parameter("relation 1 makes the ring zero".into()));
            }
        }
        let mut pure_power = Vec::with_capacity(n);
        for (i, g) in generators.iter().enumerate() {
            let from_rel = relations
                .iter()
                .filter(|r| r.degree() == u32::from(r.exponent(i)))
                .map(|r| r.exponent(i))
                .min();
            let from_cap = cap.map(|c| c as u16);
            match from_rel.into_iter().chain(from_cap).min() {
                Some(p) => pure_power.push(p),
                None => return Err(Error::InfiniteDimensional(g.clone())),
            }
        }
        // keep only minimal generators of the ideal
        let mut minimal: Vec<Monomial> = Vec::new();
        let mut sorted = relations;
        sorted.sort();
        sorted.dedup();
        for r in sorted {
            if !minimal.iter().any(|m| m.divides(&r)) {
                minimal.push(r);
            }
        }
        Ok(Arc::new(TestRing {
            generators,
            relations: minimal,
            cap,
            pure_power,
            basis: OnceLock::new(),
        }))
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &[Monomial] {
        &self.relations
    }

    pub fn degree_cap(&self) -> Option<u32> {
        self.cap
    }

    pub fn vanishes(&self, m: &Monomial) -> bool {
        if let Some(c) = self.cap {
            if m.degree() >= c {
                return true;
            }
        }
        self.relations.iter().any(|r| r.divides(m))
    }

    /// Standard monomials in canonical order; the first is always `1`.
    pub fn basis(&self) -> &[Monomial] {
        self.basis.get_or_init(|| {
            let mut out = Vec::new();
            let mut exps = vec![0u16; self.ngens()];
            self.enumerate(0, &mut exps, &mut out);
            out.sort();
            out
        })
    }

    fn enumerate(&self, i: usize, exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i == exps.len() {
            let m = Monomial::from_exponents(exps.clone());
            if !self.vanishes(&m) {
                out.push(m);
            }
            return;
        }
        for e in 0..self.pure_power[i] {
            exps[i] = e;
            // the ideal is upward closed, so a vanishing prefix prunes the subtree
            let prefix = Monomial::from_exponents(exps.clone());
            if self.vanishes(&prefix) {
                break;
            }
            self.enumerate(i + 1, exps, out);
        }
        exps[i] = 0;
    }

    pub fn dimension(&self) -> usize {
        self.basis().len()
    }

    /// Smallest `nu` with `m^nu = 0`.
    pub fn nilpotency(&self) -> u32 {
        self.basis().iter().map(Monomial::degree).max().unwrap_or(0) + 1
    }

    pub fn is_field(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn same(a: &Arc<TestRing>, b: &Arc<TestRing>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    /// `Q[eps]/(eps^2)`-style label used in reports.
    pub fn label(&self) -> String {
        if self.generators.is_empty() {
            return "Q".to_string();
        }
        let gens = self.generators.join(",");
        let mut rels: Vec<String> = self.relations.iter().map(|r| r.render(&self.generators)).collect();
        if let Some(c) = self.cap {
            rels.push(if self.ngens() == 1 {
                format!("{gens}^{c}")
            } else {
                format!("({gens})^{c}")
            });
        }
        format!("Q[{gens}]/({})", rels.join(","))
    }
}

impl PartialEq for TestRing {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.relations == other.relations && self.cap == other.cap
    }
}

impl Eq for TestRing {}

impl fmt::Debug for TestRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// An element of a test-ring, stored sparsely on the standard monomials.
#[derive(Clone)]
pub struct RingElement {
    ring: Arc<TestRing>,
    terms: BTreeMap<Monomial, Rational>,
}

impl RingElement {
    pub fn zero(ring: &Arc<TestRing>) -> Self {
        RingElement {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<TestRing>, q: Rational) -> Self {
        let mut e = Self::zero(ring);
        if !q.is_zero() {
            e.terms.insert(Monomial::one(ring.ngens()), q);
        }
        e
    }

    pub fn one(ring: &Arc<TestRing>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn generator(ring: &Arc<TestRing>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.ngens(), i, 1), Rational::one())
    }

    pub fn generator_named(ring: &Arc<TestRing>, name: &str) -> Option<Self> {
        ring.generators()
            .iter()
            .position(|g| g == name)
            .map(|i| Self::generator(ring, i))
    }

    /// `q * m`, reduced to zero if `m` lies in the relation ideal.
    pub fn monomial(ring: &Arc<TestRing>, m: Monomial, q: Rational) -> Self {
        let mut e = Self::zero(ring);
        if !q.is_zero() && !ring.vanishes(&m) {
            e.terms.insert(m, q);
        }
        e
    }

    pub fn from_terms(ring: &Arc<TestRing>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut e = Self::zero(ring);
        for (m, q) in terms {
            e.add_term(m, q);
        }
        e
    }

    fn add_term(&mut self, m: Monomial, q: Rational) {
        if q.is_zero() || self.ring.vanishes(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<TestRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coordinate on the basis monomial `m` (zero if absent).
    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Image in the residue field.
    pub fn residue(&self) -> Rational {
        self.coeff(&Monomial::one(self.ring.ngens()))
    }

    pub fn in_maximal_ideal(&self) -> bool {
        self.residue().is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Largest `k` with the element in `m^k` (`None` for zero).
    pub fn adic_order(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    /// Part of total degree exactly `d` in the generators.
    pub fn homogeneous_part(&self, d: u32) -> RingElement {
        RingElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, q)| (m.clone(), q.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> RingElement {
        if q.is_zero() {
            return Self::zero(&self.ring);
        }
        RingElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> RingElement {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse of a unit via the geometric series in the nilpotent part.
    pub fn inverse(&self) -> Option<RingElement> {
        let c = self.residue();
        if c.is_zero() {
            return None;
        }
        let cinv = c.recip();
        // self = c (1 + n),  n nilpotent
        let n = &self.scale(&cinv) - &Self::one(&self.ring);
        let neg_n = -&n;
        let mut term = Self::one(&self.ring);
        let mut sum = Self::one(&self.ring);
        loop {
            term = &term * &neg_n;
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        Some(sum.scale(&cinv))
    }

    fn check_ring(&self, other: &RingElement) {
        assert!(
            TestRing::same(&self.ring, &other.ring),
            "ring mismatch: {} vs {}",
            self.ring.label(),
            other.ring.label()
        );
    }

    /// Canonical text; terms by descending degree, then descending lex.
    pub fn render(&self) -> String {
        render_terms(self.terms.iter().rev(), self.ring.generators())
    }

    /// Whether `render` yields a single signed term (no parentheses needed
    /// when used as a factor).
    pub fn is_single_term(&self) -> bool {
        self.terms.len() <= 1
    }
}

/// Shared term printer for polynomials and ring elements.
pub(crate) fn render_terms<'a>(terms: impl Iterator<Item = (&'a Monomial, &'a Rational)>, names: &[String]) -> String {
    let mut out = String::new();
    for (m, q) in terms {
        let neg = q < &Rational::zero();
        let mag = if neg { -q.clone() } else { q.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&fmt_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&m.render(names));
        } else {
            out.push_str(&fmt_rational(&mag));
            out.push('*');
            out.push_str(&m.render(names));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        TestRing::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for RingElement {}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, q) in &rhs.terms {
            out.add_term(m.clone(), q.clone());
        }
        out
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, q) in &rhs.terms {
            out.add_term(m.clone(), -q.clone());
        }
        out
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect(),
        }
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.check_ring(rhs);
        let mut out = RingElement::zero(&self.ring);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        let cap = self.ring.cap;
        for (ma, qa) in &self.terms {
            for (mb, qb) in &rhs.terms {
                if let Some(c) = cap {
                    // terms are sorted by degree; the rest of `rhs` is too deep
                    if ma.degree() + mb.degree() >= c {
                        break;
                    }
                }
                out.add_term(ma.mul(mb), qa * qb);
            }
        }
        out
    }
}

/// A ring homomorphism `source -> target` fixed by the images of the generators.
#[derive(Clone, Debug)]
pub struct RingMorphism {
    source: Arc<TestRing>,
    target: Arc<TestRing>,
    images: Vec<RingElement>,
}

impl RingMorphism {
    pub fn new(source: &Arc<TestRing>, target: &Arc<TestRing>, images: Vec<RingElement>) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(Error::InvalidMorphism(format!(
                "{} images for {} generators",
                images.len(),
                source.ngens()
            )));
        }
        for (g, img) in source.generators().iter().zip(&images) {
            if !TestRing::same(img.ring(), target) {
                return Err(Error::RingMismatch);
            }
            if !img.in_maximal_ideal() {
                return Err(Error::InvalidMorphism(format!(
                    "image of `{g}` is not in the maximal ideal"
                )));
            }
        }
        let morph = RingMorphism {
            source: source.clone(),
            target: target.clone(),
            images,
        };
        for r in source.relations() {
            if !morph.eval_monomial(r).is_zero() {
                return Err(Error::InvalidMorphism(format!(
                    "relation {} does not map to zero",
                    r.render(source.generators())
                )));
            }
        }
        if let Some(cap) = source.degree_cap() {
            if !morph.kills_degree(cap) {
                return Err(Error::InvalidMorphism(format!(
                    "monomials of degree {cap} do not map to zero"
                )));
            }
        }
        Ok(morph)
    }

    /// Sends every generator to zero (reduction modulo the maximal ideal
    /// composed with the structure map).
    pub fn to_residue(source: &Arc<TestRing>, target: &Arc<TestRing>) -> Self {
        RingMorphism {
            source: source.clone(),
            target: target.clone(),
            images: vec![RingElement::zero(target); source.ngens()],
        }
    }

    /// Generators sent to the same-named generators of `target` (zero when absent).
    pub fn by_name(source: &Arc<TestRing>, target: &Arc<TestRing>) -> Result<Self> {
        let images = source
            .generators()
            .iter()
            .map(|g| RingElement::generator_named(target, g).unwrap_or_else(|| RingElement::zero(target)))
            .collect();
        Self::new(source, target, images)
    }

    fn kills_degree(&self, cap: u32) -> bool {
        let target_nu = self.target.nilpotency();
        if target_nu <= cap {
            return true;
        }
        // every product of `cap` images must vanish
        fn rec(images: &[RingElement], start: usize, left: u32, acc: &RingElement) -> bool {
            if acc.is_zero() {
                return true;
            }
            if left == 0 {
                return false;
            }
            (start..images.len()).all(|i| rec(images, i, left - 1, &(acc * &images[i])))
        }
        rec(&self.images, 0, cap, &RingElement::one(&self.target))
    }

    pub fn source(&self) -> &Arc<TestRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TestRing> {
        &self.target
    }

    pub fn images(&self) -> &[RingElement] {
        &self.images
    }

    fn eval_monomial(&self, m: &Monomial) -> RingElement {
        let mut acc = RingElement::one(&self.target);
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                acc = &acc * &self.images[i].pow(u32::from(e));
            }
        }
        acc
    }

    pub fn apply(&self, x: &RingElement) -> RingElement {
        assert!(TestRing::same(x.ring(), &self.source), "ring mismatch");
        let mut out = RingElement::zero(&self.target);
        for (m, q) in x.terms() {
            out = &out + &self.eval_monomial(m).scale(q);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::{int, ratio};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn dual_numbers_basis() {
        let r = TestRing::dual_numbers("eps", 2);
        assert_eq!(r.dimension(), 2);
        assert_eq!(r.nilpotency(), 2);
    }

    #[test]
    fn ground_field() {
        let r = TestRing::field();
        assert_eq!(r.dimension(), 1);
        assert_eq!(r.nilpotency(), 1);
    }

    #[test]
    fn square_zero_rank_two() {
        let m = |a, b| Monomial::from_exponents(vec![a, b]);
        let r = TestRing::new(names(&["a", "b"]), vec![m(2, 0), m(1, 1), m(0, 2)]).unwrap();
        assert_eq!(r.basis(), &[m(0, 0), m(0, 1), m(1, 0)]);
        assert_eq!(r.nilpotency(), 2);
    }

    #[test]
    fn infinite_dimensional_rejected() {
        let m = |a, b| Monomial::from_exponents(vec![a, b]);
        let err = TestRing::new(names(&["a", "b"]), vec![m(2, 0), m(1, 1)]).unwrap_err();
        assert_eq!(err, Error::InfiniteDimensional("b".into()));
    }

    #[test]
    fn truncated_ring_dimension() {
        let r = TestRing::truncated(names(&["a", "b"]), 3).unwrap();
        assert_eq!(r.dimension(), 6);
        assert_eq!(r.nilpotency(), 3);
    }

    #[test]
    fn unit_inverse() {
        let r = TestRing::dual_numbers("e", 4);
        let e = RingElement::generator(&r, 0);
        let u = &RingElement::constant(&r, int(2)) + &e;
        let inv = u.inverse().unwrap();
        assert_eq!(&u * &inv, RingElement::one(&r));
        assert!(e.inverse().is_none());
        assert_eq!(inv.residue(), ratio(1, 2));
    }

    #[test]
    fn morphism_checks_relations() {
        let e3 = TestRing::dual_numbers("e", 3);
        let e2 = TestRing::dual_numbers("e", 2);
        assert!(RingMorphism::by_name(&e3, &e2).is_ok());
        // e -> e is not well defined from Q[e]/(e^2) to Q[e]/(e^3)
        assert!(RingMorphism::by_name(&e2, &e3).is_err());
        let sq = RingElement::generator(&e3, 0).pow(2);
        assert!(RingMorphism::new(&e2, &e3, vec![sq]).is_ok());
    }

    #[test]
    fn render_canonical() {
        let r = TestRing::truncated(names(&["a", "b"]), 3).unwrap();
        let a = RingElement::generator(&r, 0);
        let b = RingElement::generator(&r, 1);
        let x = &(&(&a * &b) - &a.scale(&ratio(1, 2))) + &RingElement::constant(&r, int(3));
        assert_eq!(x.render(), "a*b - 1/2*a + 3");
    }
}
