//! The fixed set of probe test-rings and the morphisms between them.

use std::sync::Arc;

use crate::kernel::{Monomial, RingElement, RingMorphism, TestRing};

#[derive(Clone, Debug)]
pub struct Catalog {
    rings: Vec<Arc<TestRing>>,
    morphisms: Vec<RingMorphism>,
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

impl Catalog {
    /// `Q`, `Q[e]/(e^k)` for `k = 2, 3, 4`, `Q[a,b]/(a,b)^k` for `k = 2, 3`,
    /// and `Q[a,b]/(a^2,b^2)`.
    pub fn standard() -> Catalog {
        let q = TestRing::field();
        let e2 = TestRing::dual_numbers("e", 2);
        let e3 = TestRing::dual_numbers("e", 3);
        let e4 = TestRing::dual_numbers("e", 4);
        let ab2 = TestRing::truncated(names(&["a", "b"]), 2).expect("valid ring");
        let ab3 = TestRing::truncated(names(&["a", "b"]), 3).expect("valid ring");
        let squares = TestRing::new(
            names(&["a", "b"]),
            vec![
                Monomial::from_exponents(vec![2, 0]),
                Monomial::from_exponents(vec![0, 2]),
            ],
        )
        .expect("valid ring");

        let gen = |r: &Arc<TestRing>, i: usize| RingElement::generator(r, i);
        let hom = |s: &Arc<TestRing>, t: &Arc<TestRing>, images: Vec<RingElement>| {
            RingMorphism::new(s, t, images).expect("catalog morphism is well defined")
        };
        let mut morphisms = vec![
            hom(&e3, &e2, vec![gen(&e2, 0)]),
            hom(&e4, &e3, vec![gen(&e3, 0)]),
            hom(&e4, &e2, vec![gen(&e2, 0)]),
            hom(&ab3, &ab2, vec![gen(&ab2, 0), gen(&ab2, 1)]),
            hom(&squares, &ab2, vec![gen(&ab2, 0), gen(&ab2, 1)]),
            hom(
                &e2,
                &ab2,
                vec![&gen(&ab2, 0) + &gen(&ab2, 1).scale(&crate::kernel::rational::int(2))],
            ),
            hom(&e3, &ab3, vec![gen(&ab3, 0)]),
            hom(&ab3, &e3, vec![gen(&e3, 0), gen(&e3, 0).pow(2)]),
        ];
        let rings = vec![q.clone(), e2, e3, e4, ab2, ab3, squares];
        for r in rings.iter().skip(1) {
            morphisms.push(RingMorphism::to_residue(r, &q));
        }
        Catalog { rings, morphisms }
    }

    pub fn rings(&self) -> &[Arc<TestRing>] {
        &self.rings
    }

    pub fn morphisms(&self) -> &[RingMorphism] {
        &self.morphisms
    }

    /// Rings with `m^3 = 0` but `m^2 != 0`.
    pub fn cube_zero(&self) -> impl Iterator<Item = &Arc<TestRing>> {
        self.rings.iter().filter(|r| r.nilpotency() == 3)
    }

    pub fn by_label(&self, label: &str) -> Option<&Arc<TestRing>> {
        self.rings.iter().find(|r| r.label() == label)
    }
}
