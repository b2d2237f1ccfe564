use std::f64::consts::TAU;

use orderlab::navas::{
    act_on_kernel, kernel_probe, Acted, Composed, Kernel, KernelGrid, ProbeVerdict, RoughBump,
    SingularKernel, SmoothCircleMap, StabilizationCriterion,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn full_grid() -> KernelGrid {
    KernelGrid::doubling(5, 256).unwrap()
}

fn rough_fixture() -> SmoothCircleMap {
    let bump = RoughBump {
        alpha: 1.3,
        center: 0.25,
        amplitude: 0.01,
        width: 0.25,
    };
    SmoothCircleMap::new(0.0, vec![], vec![], Some(bump)).unwrap()
}

#[test]
fn identity_probe_is_zero() {
    let r = kernel_probe(
        &SmoothCircleMap::identity(),
        &full_grid(),
        StabilizationCriterion::default(),
    )
    .unwrap();
    assert!(r.levels.iter().all(|l| l.sup == 0.0 && l.l2 == 0.0));
}

#[test]
fn single_mode_map_stabilizes() {
    let g = SmoothCircleMap::new(0.0, vec![0.05 / TAU], vec![], None).unwrap();
    let r = kernel_probe(&g, &full_grid(), StabilizationCriterion::default()).unwrap();
    let ratio = r.final_ratio.unwrap();
    assert!((0.8..=1.2).contains(&ratio), "{:?}", r.levels);
    assert_eq!(r.verdict, ProbeVerdict::Stabilized);
    let l2 = r.l2_final_ratio.unwrap();
    assert!((0.8..=1.25).contains(&l2), "{:?}", r.levels);
}

#[test]
fn rough_map_grows() {
    let r = kernel_probe(
        &rough_fixture(),
        &full_grid(),
        StabilizationCriterion::default(),
    )
    .unwrap();
    let sups = r.sups();
    assert!(sups.windows(2).all(|w| w[1] > w[0]), "{sups:?}");
    assert!(r.growth.unwrap() >= 2.0, "{sups:?}");
    assert_eq!(r.verdict, ProbeVerdict::Growing);
}

#[test]
fn right_action_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = SmoothCircleMap::random(3, 10);
    let h = SmoothCircleMap::random(2, 11);
    let gh = Composed {
        outer: &g,
        inner: &h,
    };
    let points: Vec<(f64, f64)> = (0..2000)
        .map(|_| {
            let x: f64 = rng.gen();
            (x, x + rng.gen_range(0.01..0.99))
        })
        .collect();
    let direct = act_on_kernel(&SingularKernel, &gh, &points).unwrap();
    let fg = Acted {
        kernel: &SingularKernel,
        map: &g,
    };
    let iterated = act_on_kernel(&fg, &h, &points).unwrap();
    for (a, b) in direct.iter().zip(&iterated) {
        assert!((a - b).abs() <= 1e-10 * a.abs());
    }
    for &(x, y) in &points[..50] {
        assert_eq!(fg.eval(x, y), fg.eval(y, x));
    }
}
