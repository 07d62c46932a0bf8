use std::sync::Arc;

use arcspace::arc::{arc_multiplicity, finite_model, lift_arc, ArcDeformation};
use arcspace::kernel::{PowerSeries, RingElement, TestRing};
use arcspace::verify::checks::{alpha_deformation, element_poly};
use arcspace::verify::{
    check_alpha_identity, check_leading_forms, check_model_consistency, check_stabilization, Catalog, Sampling,
    WorkedExample,
};

const T: usize = 24;

fn dual(k: u16) -> Arc<TestRing> {
    TestRing::dual_numbers("w", k)
}

#[test]
fn example_one_multiplicity_and_model() {
    let ex = WorkedExample::new(1, 1).unwrap();
    let gamma = ex.gamma_arc(T).unwrap();
    assert_eq!(arc_multiplicity(&ex.hypersurface, &gamma, T).unwrap(), 1);
    let model = finite_model(&ex.hypersurface, &gamma, 2, 2, T).unwrap();
    assert_eq!(model.equations().len(), 1);
    let quad = element_poly(&model.equations()[0].homogeneous_part(2));
    assert_eq!(quad.render(), "c_z_0^2");
    assert!(check_leading_forms(&ex, &model).unwrap().passed);
}

#[test]
fn example_one_lifts_over_dual_numbers_only() {
    let ex = WorkedExample::new(1, 1).unwrap();
    let gamma = ex.gamma_arc(T).unwrap();
    let w2 = dual(2);
    let def = alpha_deformation(&ex, &w2, &[RingElement::generator(&w2, 0)], T).unwrap();
    let lift = lift_arc(&ex.hypersurface, &gamma, &def, T).unwrap();
    assert!(lift.obstructions.iter().all(RingElement::is_zero));
    assert!(lift.is_liftable());

    let w3 = dual(3);
    let w = RingElement::generator(&w3, 0);
    let def = alpha_deformation(&ex, &w3, std::slice::from_ref(&w), T).unwrap();
    let lift = lift_arc(&ex.hypersurface, &gamma, &def, T).unwrap();
    assert_eq!(lift.obstructions, vec![w.pow(2)]);
    assert!(!lift.is_liftable());
}

#[test]
fn alpha_identities() {
    for r in 1..=3 {
        for ex in WorkedExample::all(r).unwrap() {
            let c = check_alpha_identity(&ex);
            assert!(c.passed, "example {} r={r}: {:?}", ex.id, c);
        }
    }
}

#[test]
fn example_two_leading_form() {
    let ex = WorkedExample::new(2, 2).unwrap();
    let gamma = ex.gamma_arc(T).unwrap();
    assert_eq!(arc_multiplicity(&ex.hypersurface, &gamma, T).unwrap(), 1);
    let model = finite_model(&ex.hypersurface, &gamma, 2, 2, T).unwrap();
    assert_eq!(model.equations().len(), 1);
    let quad = element_poly(&model.equations()[0].homogeneous_part(2));
    assert_eq!(quad.render(), "c_z_1_0^2 + c_z_2_0^2");
    let alpha = check_alpha_identity(&ex);
    assert!(alpha.passed);
}

#[test]
fn example_three_model() {
    for r in 1..=2 {
        let ex = WorkedExample::new(3, r).unwrap();
        let gamma = ex.gamma_arc(T).unwrap();
        assert_eq!(arc_multiplicity(&ex.hypersurface, &gamma, T).unwrap(), 2);
        let model = finite_model(&ex.hypersurface, &gamma, 4, 2, T).unwrap();
        assert_eq!(model.equations().len(), 2);
        let c = check_leading_forms(&ex, &model).unwrap();
        assert!(c.passed, "{c:?}");
    }
}

#[test]
fn example_three_point_with_only_v() {
    let ex = WorkedExample::new(3, 1).unwrap();
    let gamma = ex.gamma_arc(T).unwrap();
    let v2 = TestRing::dual_numbers("v", 2);
    let zero = RingElement::zero(&v2);
    let v = RingElement::generator(&v2, 0);
    let point = vec![zero.clone(), zero.clone(), v, zero];
    assert!(ex.is_y_point(&v2, &point));
    let def = alpha_deformation(&ex, &v2, &point, T).unwrap();
    let lift = lift_arc(&ex.hypersurface, &gamma, &def, T).unwrap();
    let arc = lift.lift.expect("liftable");
    assert!(arc.comp(1).is_zero());
}

#[test]
fn zero_deformation_is_unobstructed() {
    for ex in WorkedExample::all(2).unwrap() {
        let gamma = ex.gamma_arc(T).unwrap();
        let ring = dual(3);
        let def = ArcDeformation::zero(&ring, ex.hypersurface.dim(), T);
        let lift = lift_arc(&ex.hypersurface, &gamma, &def, T).unwrap();
        let arc = lift.lift.unwrap();
        assert_eq!(arc.reduce().comps(), gamma.truncate(arc.precision()).unwrap().comps());
        let _ = PowerSeries::zero(&ring, 1);
    }
}

#[test]
fn consistency_over_catalog() {
    let catalog = Catalog::standard();
    for (id, r) in [(1, 1), (2, 2), (3, 1)] {
        let ex = WorkedExample::new(id, r).unwrap();
        for ring in catalog.rings() {
            let c = check_model_consistency(
                &ex,
                ring,
                4,
                3,
                T,
                Sampling {
                    points: 5,
                    violations: 5,
                    seed: 1,
                },
            )
            .unwrap();
            assert!(c.passed, "example {id}: {c:?}");
        }
    }
}

#[test]
fn stabilization() {
    for ex in WorkedExample::all(1).unwrap() {
        let c = check_stabilization(&ex, 3, 2, T).unwrap();
        assert!(c.passed, "{c:?}");
    }
}
