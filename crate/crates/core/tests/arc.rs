use std::collections::BTreeMap;
use std::sync::Arc;

use arcspace::arc::{
    eval_map, flow_arc, lift_arc, product_chart, transverse_order, truncate_arc, ArcDeformation, FlowSpec, FormalArc,
    Hypersurface,
};
use arcspace::kernel::rational::{int, inv_factorial, ratio};
use arcspace::kernel::{weierstrass_divide, PowerSeries, Rational, RingElement, TestRing};
use arcspace::verify::checks::{alpha_deformation, sample_y_point};
use arcspace::verify::{Catalog, WorkedExample};
use arcspace::{sample, Error};
use proptest::prelude::*;
use rand::Rng;

const T: usize = 20;

fn cone(r: usize) -> Hypersurface {
    WorkedExample::new(2, r).unwrap().hypersurface
}

fn rational_arc(comps: Vec<Vec<Rational>>, precision: usize) -> FormalArc {
    let q = TestRing::field();
    FormalArc::new(
        &q,
        comps
            .into_iter()
            .map(|mut c| {
                c.resize(precision, int(0));
                PowerSeries::from_rationals(&q, c)
            })
            .collect(),
    )
}

/// `(t + c t^k, 0, 0)`.
fn line_arc(c: Rational, k: usize, precision: usize) -> FormalArc {
    let mut x = vec![int(0); k + 1];
    x[1] = int(1);
    x[k] = x[k].clone() + c;
    rational_arc(vec![x, vec![], vec![]], precision)
}

/// A random arc on `x*y = z.z` over `ring`: `x = t*u`, `z_j = t*g_j`,
/// `y = t * g.g / u` with `u` a unit.
fn random_arc_on_cone(rng: &mut impl Rng, ring: &Arc<TestRing>, r: usize, precision: usize) -> FormalArc {
    let t = PowerSeries::var(ring, precision);
    let mut u = sample::series(rng, ring, precision, 3, false);
    u.set_coeff(0, &RingElement::one(ring) + &sample::nilpotent(rng, ring));
    let gs: Vec<PowerSeries> = (0..r).map(|_| sample::series(rng, ring, precision, 3, false)).collect();
    let mut gg = PowerSeries::zero(ring, precision);
    for g in &gs {
        gg = &gg + &(g * g);
    }
    let x = &t * &u;
    let y = &t * &(&gg * &u.inverse().unwrap());
    let mut comps = vec![x, y];
    comps.extend(gs.iter().map(|g| &t * g));
    FormalArc::new(ring, comps)
}

fn random_flow(rng: &mut impl Rng, ring: &Arc<TestRing>, dim: usize, precision: usize) -> FlowSpec {
    let mut f = sample::series(rng, ring, precision, 3, false);
    f.set_coeff(0, sample::nilpotent(rng, ring));
    FlowSpec::new(rng.gen_range(0..dim), f)
}

#[test]
fn scalar_flow_is_exponential() {
    // eta_x = x d/dx - y d/dy on x*y = z^2; flowing (t, 0, 0) along -c t^n eta_x
    // scales x by exp(-c t^n).
    let h = WorkedExample::new(1, 1).unwrap().hypersurface;
    let gamma = line_arc(int(0), 1, T);
    for n in 1..=4 {
        let c = ratio(3, 2);
        let q = TestRing::field();
        let mut f = vec![int(0); T];
        f[n] = -c.clone();
        let spec = FlowSpec::new(0, PowerSeries::from_rationals(&q, f));
        let out = flow_arc(&h, &gamma, &[spec]).unwrap();

        let mut expected = vec![int(0); T];
        let mut j = 0;
        while 1 + j * n < T {
            let mut coeff = inv_factorial(j);
            for _ in 0..j {
                coeff *= -c.clone();
            }
            expected[1 + j * n] = coeff;
            j += 1;
        }
        assert_eq!(out.comp(0).residue(), expected);
        assert!(out.comp(1).is_zero());
        assert!(out.comp(2).is_zero());
    }
}

#[test]
fn zero_flow_is_identity() {
    let ring = TestRing::dual_numbers("e", 3);
    let mut rng = sample::rng(5, 0);
    let arc = random_arc_on_cone(&mut rng, &ring, 2, T);
    let h = cone(2);
    let out = flow_arc(&h, &arc, &[FlowSpec::new(1, PowerSeries::zero(&ring, T))]).unwrap();
    assert_eq!(out, arc);
}

#[test]
fn unit_flow_diverges() {
    let h = cone(1);
    let gamma = line_arc(int(0), 1, T);
    let spec = FlowSpec::new(0, PowerSeries::one(&TestRing::field(), T));
    assert!(matches!(flow_arc(&h, &gamma, &[spec]), Err(Error::DivergentFlow(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn flow_group_law_and_tangency(seed in any::<u64>(), ix in 0usize..7, r in 1usize..=2) {
        let catalog = Catalog::standard();
        let ring = catalog.rings()[ix].clone();
        let mut rng = sample::rng(seed, 0);
        let h = cone(r);
        let arc = random_arc_on_cone(&mut rng, &ring, r, T);
        prop_assert!(h.contains(&arc).unwrap());
        let a = random_flow(&mut rng, &ring, h.dim(), T);
        let mut b = random_flow(&mut rng, &ring, h.dim(), T);
        b.index = a.index;

        let ab = flow_arc(&h, &flow_arc(&h, &arc, &[b.clone()]).unwrap(), std::slice::from_ref(&a)).unwrap();
        let sum = FlowSpec::new(a.index, &a.f + &b.f);
        let direct = flow_arc(&h, &arc, &[sum]).unwrap();
        prop_assert_eq!(&ab, &direct);
        prop_assert!(h.contains(&direct).unwrap());

        // a flow agrees with the input modulo t^(order of f)
        if let Some(k) = a.f.order() {
            let moved = flow_arc(&h, &arc, std::slice::from_ref(&a)).unwrap();
            for (x, y) in moved.comps().iter().zip(arc.comps()) {
                prop_assert_eq!(&x.coeffs()[..k], &y.coeffs()[..k]);
            }
        }
    }
}

fn check_truncation(h: &Hypersurface, gamma: &FormalArc, n: usize) -> FormalArc {
    let out = truncate_arc(h, gamma, n, T).unwrap();
    let arc = &out.arc;
    for &i in &h.u_indices() {
        let c = arc.comp(i);
        assert!(
            c.coeffs()[n + 1..].iter().all(RingElement::is_zero),
            "u-component above t^{n}"
        );
        assert_eq!(&c.coeffs()[..=n], &gamma.comp(i).coeffs()[..=n]);
    }
    for (x, y) in arc.comps().iter().zip(gamma.comps()) {
        assert_eq!(&x.coeffs()[..=n], &y.coeffs()[..=n]);
    }
    assert!(h.contains(arc).unwrap());
    let again = truncate_arc(h, arc, n, T).unwrap();
    assert!(again.flows.is_empty());
    assert_eq!(&again.arc, arc);
    arc.clone()
}

#[test]
fn truncation_of_line() {
    let h = cone(1);
    for n in 2..=4 {
        let gamma = line_arc(int(1), n + 1, T);
        let out = truncate_arc(&h, &gamma, n, T).unwrap();
        assert_eq!(out.flows.len(), 1);
        assert_eq!(out.flows[0].f.coeff(n).residue(), int(-1));
        assert!(out.flows[0].f.coeffs()[..n].iter().all(RingElement::is_zero));
        let arc = check_truncation(&h, &gamma, n);
        let mut x = vec![int(0); T];
        x[1] = int(1);
        assert_eq!(arc.comp(0).residue(), x);
    }
}

#[test]
fn truncation_with_two_components() {
    // x = t + 2t^4 + t^6, z = t^2 - t^5, y = z^2 / x
    let q = TestRing::field();
    let h = cone(1);
    let mut xs = vec![int(0); T];
    xs[1] = int(1);
    xs[4] = int(2);
    xs[6] = int(1);
    let mut zs = vec![int(0); T];
    zs[2] = int(1);
    zs[5] = int(-1);
    let x = PowerSeries::from_rationals(&q, xs);
    let z = PowerSeries::from_rationals(&q, zs);
    let y = (&z * &z)
        .shift_down(1)
        .div_unit(&x.shift_down(1))
        .unwrap()
        .extend_zero(T);
    let gamma = FormalArc::new(&q, vec![x, y, z]);
    assert!(h.contains(&gamma.truncate(T - 1).unwrap()).unwrap());
    let gamma = gamma.truncate(T - 1).unwrap();
    for n in 2..=4 {
        let out = truncate_arc(&h, &gamma, n, T - 1).unwrap();
        let arc = &out.arc;
        for &i in &h.u_indices() {
            assert!(arc.comp(i).coeffs()[n + 1..].iter().all(RingElement::is_zero));
            assert_eq!(&arc.comp(i).coeffs()[..=n], &gamma.comp(i).coeffs()[..=n]);
        }
        assert!(h.contains(arc).unwrap());
    }
}

#[test]
fn truncation_bounds() {
    let h = WorkedExample::new(3, 1).unwrap().hypersurface;
    let gamma = WorkedExample::new(3, 1).unwrap().gamma_arc(T).unwrap();
    let out = truncate_arc(&h, &gamma, 2, T).unwrap();
    assert!(out.flows.is_empty());
    assert_eq!(out.arc, gamma);
    let cubic = rational_arc(vec![vec![int(0), int(0), int(0), int(1)], vec![], vec![]], T);
    assert_eq!(
        truncate_arc(&h, &cubic, 2, T).unwrap_err(),
        Error::TruncationTooSmall { n: 2, bound: 3 }
    );
}

#[test]
fn chart_on_line_first_order() {
    let h = cone(1);
    let gamma = line_arc(int(0), 1, T);
    let e2 = TestRing::dual_numbers("e", 2);
    let e = RingElement::generator(&e2, 0);
    let zero = ArcDeformation::zero(&e2, 2, T);
    let n = 2;
    for k in 2..=4 {
        let mut a = BTreeMap::new();
        a.insert((0, k), e.clone());
        let out = product_chart(&h, &gamma, &zero, &a, n, T).unwrap();
        let mut expected = PowerSeries::zero(&e2, out.precision());
        expected.set_coeff(k + 1, e.clone());
        assert_eq!(out.du()[0], expected);
        assert!(out.du()[1].is_zero());
        assert!(lift_arc(&h, &gamma, &out, out.precision()).unwrap().is_liftable());
    }
    let same = product_chart(&h, &gamma, &zero, &BTreeMap::new(), n, T).unwrap();
    assert_eq!(same, zero);
    let mut low = BTreeMap::new();
    low.insert((0, 1), e.clone());
    assert_eq!(
        product_chart(&h, &gamma, &zero, &low, n, T).unwrap_err(),
        Error::UnsupportedIndex(0, 1)
    );
}

#[test]
fn chart_outputs_lift() {
    let catalog = Catalog::standard();
    let mut rng = sample::rng(11, 0);
    let mut done = 0;
    while done < 20 {
        let id = rng.gen_range(1..=3u8);
        let ex = WorkedExample::new(id, rng.gen_range(1..=2)).unwrap();
        let ring = catalog.rings()[rng.gen_range(1..catalog.rings().len())].clone();
        let Some(point) = sample_y_point(&ex, &ring, &mut rng, 400) else {
            continue;
        };
        let h = &ex.hypersurface;
        let gamma = ex.gamma_arc(T).unwrap();
        let def = alpha_deformation(&ex, &ring, &point, T).unwrap();
        let n = 3;
        let ord = transverse_order(h, &gamma).unwrap();
        let mut a = BTreeMap::new();
        for i in 0..h.dim() {
            a.insert(
                (i, n + 1 - ord + rng.gen_range(0..3)),
                sample::nilpotent(&mut rng, &ring),
            );
        }
        let out = product_chart(h, &gamma, &def, &a, n, T).unwrap();
        let lift = lift_arc(h, &gamma, &out, out.precision()).unwrap();
        assert!(lift.obstructions.iter().all(RingElement::is_zero));
        assert!(h.contains(lift.lift.as_ref().unwrap()).unwrap());
        done += 1;
    }
}

#[test]
fn eval_map_of_examples() {
    for (id, m) in [(1u8, 1usize), (2, 1), (3, 2)] {
        let ex = WorkedExample::new(id, 2).unwrap();
        let gamma = ex.gamma_arc(T).unwrap();
        let q = TestRing::field();
        let data = eval_map(
            &ex.hypersurface,
            &gamma,
            &ArcDeformation::zero(&q, ex.hypersurface.dim(), T),
            T,
        )
        .unwrap();
        // phi(gamma_u(t), y) = t^m * y
        let coeffs = data.curve.coeffs();
        assert_eq!(coeffs.len(), 2);
        assert!(coeffs[0].is_zero());
        let mut tm = vec![int(0); T];
        tm[m] = int(1);
        assert_eq!(coeffs[1].residue(), tm);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// For x*y = z^2 along (t, 0, 0) the lift is y = z~^2 / x~. Here
    /// x~ may have a nilpotent constant term, so the oracle is Weierstrass
    /// division: z~^2 = q*x~ + r lifts iff r = 0, and then y = q.
    #[test]
    fn lift_matches_division(seed in any::<u64>(), ix in 1usize..7) {
        let catalog = Catalog::standard();
        let ring = catalog.rings()[ix].clone();
        let mut rng = sample::rng(seed, 1);
        let h = WorkedExample::new(1, 1).unwrap().hypersurface;
        let gamma = line_arc(int(0), 1, T);
        let du: Vec<PowerSeries> = (0..2).map(|_| sample::series(&mut rng, &ring, T, 3, true)).collect();
        let def = ArcDeformation::new(&ring, du.clone()).unwrap();
        let lift = lift_arc(&h, &gamma, &def, T).unwrap();

        let x = &gamma.comp(0).lift_to(&ring) + &du[0];
        let z2 = &du[1] * &du[1];
        let division = weierstrass_divide(&z2, &x, T + 1 - ring.nilpotency() as usize).unwrap();
        let liftable = division.remainder[0].is_zero();
        prop_assert_eq!(lift.is_liftable(), liftable);
        prop_assert_eq!(lift.obstructions.len(), 1);
        prop_assert_eq!(lift.obstructions[0].is_zero(), liftable);
        if let Some(arc) = lift.lift {
            let y = &division.quotient;
            let p = arc.precision().min(y.precision());
            prop_assert_eq!(&arc.comp(1).coeffs()[..p], &y.coeffs()[..p]);
            prop_assert!(h.contains(&arc).unwrap());
        }
    }
}
