use potts_core::fixed_points::{
    all_fixed_points, asymmetric_s_roots, f_symmetric, multistart_newton, newton_fixed_points,
    recover_uv, s_star, same_point_set, single_root_threshold, solve_symmetric, st_points,
    stability_of, t_from_s_division, t_from_s_ratio, two_root_threshold, Branch, NewtonOptions,
};
use potts_core::recursion::ratio_step;
use potts_core::{RatioPoint, ThetaParams};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_thetas(rng: &mut ChaCha8Rng) -> ThetaParams {
    let mut e = |lo: f64, hi: f64| rng.gen_range(lo..hi).exp();
    ThetaParams::new(e(-0.5, 1.8), e(-0.5, 2.5), e(-0.7, 0.7), e(-1.0, 1.0)).unwrap()
}

fn points(t: &ThetaParams) -> Vec<RatioPoint> {
    all_fixed_points(t).into_iter().map(|f| f.point).collect()
}

#[test]
fn newton_and_reduction_find_the_same_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut multi = 0;
    for _ in 0..150 {
        let t = random_thetas(&mut rng);
        let ours = points(&t);
        let newton = newton_fixed_points(&t);
        // a point near a fold can escape the Newton grid; both sides must
        // still be genuine fixed points
        for p in ours.iter().chain(&newton) {
            assert!(ratio_step(p, &t).sup_distance(p) < 1e-9);
        }
        assert!(
            same_point_set(&ours, &newton, 1e-8),
            "{t:?}\n{ours:?}\n{newton:?}"
        );
        if ours.len() > 1 {
            multi += 1;
        }
    }
    assert!(
        multi > 5,
        "draws should include several multi-solution points"
    );
}

#[test]
fn newton_asymmetric_points_satisfy_both_t_expressions() {
    let cases = [
        ThetaParams::new(3.0, 5.0, 1.0, 0.84).unwrap(),
        ThetaParams::new(2.0, 6.0, 1.5, 0.7).unwrap(),
        ThetaParams::new(3.0, 5.0, 1.0, 1.0).unwrap(),
        ThetaParams::new(1.5, 9.0, 2.5, 1.3).unwrap(),
    ];
    let mut seen = 0;
    for t in &cases {
        for p in newton_fixed_points(t) {
            if (p.u - p.v).abs() < 1e-6 {
                continue;
            }
            seen += 1;
            let (s, uv) = (p.u + p.v, p.u * p.v);
            assert!((t_from_s_ratio(s, t).unwrap() - uv).abs() < 1e-9 * uv.max(1.0));
            assert!((t_from_s_division(s, t).unwrap() - uv).abs() < 1e-9 * uv.max(1.0));
        }
    }
    assert!(seen >= 6);
}

#[test]
fn admissible_st_roots_reconstruct_newton_points() {
    let t = ThetaParams::new(3.0, 5.0, 1.0, 0.84).unwrap();
    let newton = newton_fixed_points(&t);
    let st = st_points(&t).unwrap();
    assert!(st.iter().any(|p| p.realizable));
    for p in st.iter().filter(|p| p.realizable) {
        let (u, v) = recover_uv(p.s, p.t).unwrap();
        for q in [RatioPoint { u, v }, RatioPoint { u: v, v: u }] {
            assert!(ratio_step(&q, &t).sup_distance(&q) < 1e-9);
            assert!(newton.iter().any(|n| n.relative_distance(&q) < 1e-8));
        }
    }
}

#[test]
fn realizable_roots_lie_beyond_s_star() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for _ in 0..400 {
        let t = random_thetas(&mut rng);
        let (Ok(star), Ok(st)) = (s_star(&t), st_points(&t)) else {
            continue;
        };
        for p in st.iter().filter(|p| p.realizable) {
            assert!(p.s > star * (1.0 - 1e-9), "{t:?} {p:?} {star}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn one_s_root_below_the_single_root_threshold() {
    for (tt, t1) in [(2.5, 4.0), (3.0, 5.0), (2.0, 8.0)] {
        let t = ThetaParams::new(tt, t1, 1.0, 1.0).unwrap();
        let thr = single_root_threshold(&t).unwrap();
        for f in [0.2, 0.5, 0.9] {
            let below = t.with_theta3(thr * f).unwrap();
            assert_eq!(
                asymmetric_s_roots(&below).unwrap().len(),
                1,
                "{tt} {t1} {f}"
            );
        }
    }
}

#[test]
fn two_s_roots_between_the_thresholds() {
    // theta3 in (single_root_threshold, two_root_threshold): the line starts
    // below the parabola's intercept and is steeper than the tangent
    let t = ThetaParams::new(3.0, 5.0, 1.0, 1.0).unwrap();
    let (lo, hi) = (
        single_root_threshold(&t).unwrap(),
        two_root_threshold(&t).unwrap(),
    );
    assert!(lo < hi);
    for x in [0.25, 0.5, 0.75] {
        let theta3 = lo * (hi / lo).powf(x);
        assert_eq!(
            asymmetric_s_roots(&t.with_theta3(theta3).unwrap())
                .unwrap()
                .len(),
            2
        );
    }
    assert!(asymmetric_s_roots(&t.with_theta3(hi * 1.05).unwrap())
        .unwrap()
        .is_empty());
}

#[test]
fn every_returned_point_is_classified_consistently() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..100 {
        let t = random_thetas(&mut rng);
        for f in all_fixed_points(&t) {
            assert!(f.residual < 1e-9);
            let (rho, class) = stability_of(&f.point, &t).unwrap();
            assert_eq!((rho, class), (f.spectral_radius, f.stability));
            assert_eq!(f.branch == Branch::Symmetric, f.point.u == f.point.v);
        }
    }
}

#[test]
fn newton_grid_size_is_configurable() {
    let t = ThetaParams::new(3.0, 5.0, 1.0, 0.84).unwrap();
    let coarse = multistart_newton(
        &t,
        &NewtonOptions {
            grid: 4,
            ..NewtonOptions::default()
        },
    );
    let fine = newton_fixed_points(&t);
    assert!(coarse.len() <= fine.len());
    assert_eq!(fine.len(), 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symmetric_roots_solve_the_scalar_equation(
        tt in 0.2f64..6.0, t1 in 0.2f64..20.0, t3 in 0.05f64..5.0,
    ) {
        let t = ThetaParams::new(tt, t1, 1.0, t3).unwrap();
        let roots = solve_symmetric(&t);
        prop_assert!((1..=3).contains(&roots.len()));
        for u in roots {
            prop_assert!((t3 * u - f_symmetric(u, &t)).abs() < 1e-10 * (t3 * u).max(1.0));
        }
    }

    #[test]
    fn zero_field_sets_are_reflection_closed(
        theta in 0.3f64..5.0, t1 in 0.3f64..15.0, t2 in 0.3f64..3.0,
    ) {
        let t = ThetaParams::new(theta, t1, t2, 1.0).unwrap();
        let pts = points(&t);
        for p in &pts {
            let r = p.swapped();
            prop_assert!(pts.iter().any(|q| q.relative_distance(&r) < 1e-8));
        }
    }

    #[test]
    fn solution_count_is_odd(
        tt in 0.2f64..6.0, t1 in 0.2f64..20.0, t3 in 0.05f64..5.0,
    ) {
        // generic parameters: the fixed-point index sums to one
        let t = ThetaParams::new(tt, t1, 1.0, t3).unwrap();
        let n = all_fixed_points(&t).len();
        let tangent = all_fixed_points(&t).iter().any(|f| (f.spectral_radius - 1.0).abs() < 1e-4);
        prop_assume!(!tangent);
        prop_assert!(n % 2 == 1, "{n} fixed points at {t:?}");
    }
}

#[test]
fn both_s_roots_can_exceed_s_star() {
    // Between the single-root and two-root thresholds it is not always the
    // case that only one root lies beyond s*. Here both do, and both give a
    // realizable asymmetric pair.
    let t = ThetaParams::new(
        2.156779661016949,
        17.78813559322034,
        1.0,
        0.9982512402631617,
    )
    .unwrap();
    let star = s_star(&t).unwrap();
    let st = st_points(&t).unwrap();
    assert_eq!(st.len(), 2);
    assert!(st.iter().all(|p| p.s > star && p.realizable));
    let asym = all_fixed_points(&t)
        .iter()
        .filter(|f| f.branch == Branch::Asymmetric)
        .count();
    assert_eq!(asym, 4);
}
