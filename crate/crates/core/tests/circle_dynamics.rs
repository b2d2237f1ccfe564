use num_bigint::BigInt;
use orderlab::circle::coboundary::{
    coboundary_search, fixed_point_from_coboundary, SearchVerdict, DEFAULT_SEARCH_BUDGET,
};
use orderlab::circle::cochain::{delta, homogenize, inhomogenize, BoundedCochain};
use orderlab::circle::euler::{check_cocycle_identity, EulerCocycleTable};
use orderlab::circle::orbit::{finite_orbit_search, holder_witness, HolderOutcome};
use orderlab::circle::propagate::propagate_orbit_bound;
use orderlab::circle::{
    cocycle_defect, euler_z, lift, ActionBall, CircleMap, CirclePoint, LiftedPoint, MobiusMap,
    PlCircleHomeo, ProjectivePoint,
};
use orderlab::exact::rational::{floor_int, int, ratio};
use orderlab::exact::Rational;
use orderlab::order::line::PlLineMap;

fn rot(p: i64, q: i64) -> PlCircleHomeo {
    PlCircleHomeo::rotation(ratio(p, q))
}

fn rotation_family(max_q: i64) -> Vec<(Rational, PlCircleHomeo)> {
    let mut out = Vec::new();
    for q in 1..=max_q {
        for p in 0..q {
            if num_integer::gcd(p, q) == 1 {
                out.push((ratio(p, q), rot(p, q)));
            }
        }
    }
    out
}

#[test]
fn lift_examples() {
    let half = lift(&rot(1, 2));
    assert_eq!(half.at_zero().point, CirclePoint::new(ratio(1, 2)));
    assert_eq!(half.at_zero().turns, BigInt::from(0));
    let id = rot(0, 1);
    for k in -6..6 {
        assert_eq!(id.lift_eval(&ratio(k, 5)), ratio(k, 5));
    }
    let g = PlCircleHomeo::new(vec![int(0), ratio(1, 2)], vec![ratio(1, 4), ratio(3, 4)]).unwrap();
    assert_eq!(g.lift_eval(&int(0)), ratio(1, 4));
    assert_eq!(g.lift_eval(&int(1)), ratio(5, 4));
    let at_one = lift(&g).eval(&LiftedPoint {
        turns: BigInt::from(1),
        point: CirclePoint::zero(),
    });
    assert_eq!(at_one.turns, BigInt::from(1));
    assert_eq!(at_one.point, CirclePoint::new(ratio(1, 4)));
}

#[test]
fn euler_examples() {
    let g = PlCircleHomeo::new(vec![int(0), ratio(1, 3)], vec![ratio(1, 5), ratio(4, 5)]).unwrap();
    assert_eq!(euler_z(&rot(0, 1), &g), 0);
    assert_eq!(euler_z(&rot(1, 2), &rot(1, 2)), 1);
    assert_eq!(euler_z(&rot(1, 3), &rot(1, 3)), 0);
}

#[test]
fn cocycle_identity_on_small_rotation_family() {
    let fam = rotation_family(6);
    for (_, a) in &fam {
        for (_, b) in &fam {
            for (_, c) in &fam {
                assert_eq!(cocycle_defect(a, b, c), 0);
            }
        }
    }
}

#[test]
fn rotation_euler_matches_carry() {
    let fam = rotation_family(8);
    for (a, ra) in &fam {
        for (b, rb) in &fam {
            let carry = floor_int(&(a + b));
            assert_eq!(BigInt::from(euler_z(ra, rb)), carry);
            assert_eq!(euler_z(ra, rb), euler_z(rb, ra));
        }
    }
}

/// φ(gⁿ) = min(n, B) on the integer model, and δφ checked against the
/// formula φ(h) - φ(gh) + φ(g) evaluated on exponents.
#[test]
fn delta_of_clipped_cochain_matches_formula() {
    let radius = 4u64;
    let bound = 2i64;
    let ball = ActionBall::integers(&rot(1, 7), radius);
    let exponent = |i: usize| -> i64 {
        match i {
            0 => 0,
            i if i % 2 == 1 => (i as i64 + 1) / 2,
            i => -(i as i64) / 2,
        }
    };
    let phi_of = |n: i64| n.min(bound);
    let phi = BoundedCochain::from_fn(ball.len(), 1, |t| phi_of(exponent(t[0])));
    let d = delta(&ball, &phi);
    let r = radius as i64;
    let mut restricted = 0;
    for i in 0..ball.len() {
        for j in 0..ball.len() {
            let (a, b) = (exponent(i), exponent(j));
            if (a + b).abs() > r {
                restricted += 1;
                continue;
            }
            assert_eq!(
                d.value.get(&[i, j]),
                phi_of(b) - phi_of(a + b) + phi_of(a),
                "({a}, {b})"
            );
        }
    }
    assert_eq!(d.restricted, restricted);
}

#[test]
fn delta_squared_vanishes_on_closed_group() {
    // Cyclic group of order 5, closed under products, so nothing is restricted.
    let ball = ActionBall::image(&[rot(1, 5)], 3);
    assert_eq!(ball.len(), 5);
    let mut seed = 17u64;
    let mut next = || {
        seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((seed >> 33) % 7) as i64 - 3
    };
    for arity in [1usize, 2] {
        let c = BoundedCochain::from_fn(ball.len(), arity, |_| next());
        let dd = delta(&ball, &delta(&ball, &c).value);
        assert!(dd.value.is_zero(), "arity {arity}");
        assert_eq!(dd.restricted, 0);
    }
}

#[test]
fn homogeneous_forms() {
    let ball = ActionBall::image(&[rot(1, 3), rot(1, 4)], 3);
    assert_eq!(ball.len(), 12);
    let constant = BoundedCochain::from_fn(ball.len(), 2, |_| 3);
    let h = homogenize(&ball, &constant);
    assert_eq!(h.restricted, 0);
    assert!(h.value.left_invariance_violation(&ball).is_none());
    let mut at_identity = BoundedCochain::zero(2);
    at_identity.set(vec![0, 0], 5);
    let back = inhomogenize(&ball, &homogenize(&ball, &at_identity).value);
    assert_eq!(back.value, at_identity);
    let z = BoundedCochain::from_table(&EulerCocycleTable::from_ball(&ball));
    let back = inhomogenize(&ball, &homogenize(&ball, &z).value);
    assert_eq!(back.value, z);
}

#[test]
fn coboundary_examples() {
    // Global fixed point at 0: z vanishes and φ = 0.
    let a = PlCircleHomeo::new(vec![int(0), ratio(1, 3)], vec![int(0), ratio(1, 2)]).unwrap();
    let b = PlCircleHomeo::new(vec![int(0), ratio(2, 3)], vec![int(0), ratio(1, 2)]).unwrap();
    let ball = ActionBall::image(&[a, b], 2);
    let out = coboundary_search(&ball, 2, DEFAULT_SEARCH_BUDGET).unwrap();
    assert!(out.table.is_zero());
    assert!(out.phi.unwrap().is_zero());

    // Half rotation generating Z: φ(g) + φ(g⁻¹) = z(g, g⁻¹) = 1.
    let ball = ActionBall::integers(&rot(1, 2), 1);
    let out = coboundary_search(&ball, 1, DEFAULT_SEARCH_BUDGET).unwrap();
    assert_eq!(out.verdict, SearchVerdict::Found);
    let phi = out.phi.unwrap();
    assert!(phi.bound() <= 1);
    let d = delta(&ball, &phi).value;
    for i in 0..ball.len() {
        for j in 0..ball.len() {
            if ball.product(i, j).is_some() {
                assert_eq!(d.get(&[i, j]), out.table.get(i, j) as i64, "({i}, {j})");
            }
        }
    }

    let ball = ActionBall::integers(&rot(1, 3), 3);
    let out = coboundary_search(&ball, 0, DEFAULT_SEARCH_BUDGET).unwrap();
    assert_eq!(out.verdict, SearchVerdict::NoneWithinBound);
}

#[test]
fn fixed_points_examples() {
    assert!(rot(1, 2).fixed_points().is_empty());
    assert!(rot(0, 1).fixed_points().all);
    let t = MobiusMap::from_i64([[1, 1], [0, 1]]).unwrap();
    assert_eq!(t.fixed_points().points, vec![ProjectivePoint::Infinity]);
    // Hyperbolic: x² - x - 1 = 0 type fixed points, verified exactly.
    let h = MobiusMap::from_i64([[2, 1], [1, 1]]).unwrap();
    for p in h.fixed_points().points {
        assert_eq!(h.apply(&p), p);
    }
}

#[test]
fn finite_orbit_examples() {
    let orbit = finite_orbit_search(&[rot(1, 3)], 16, 5).unwrap();
    let want: Vec<CirclePoint> = [0, 1, 2]
        .iter()
        .map(|&k| CirclePoint::new(ratio(k, 3)))
        .collect();
    assert_eq!(orbit.points, want);
    let t = MobiusMap::from_i64([[1, 1], [0, 1]]).unwrap();
    assert_eq!(finite_orbit_search(&[t], 16, 5).unwrap().points.len(), 1);
    let orbit = finite_orbit_search(&[rot(355, 113)], 128, 64).unwrap();
    assert_eq!(orbit.points.len(), 113);
}

#[test]
fn holder_examples() {
    let s = MobiusMap::from_i64([[0, -1], [1, 0]]).unwrap();
    let t = MobiusMap::from_i64([[1, 1], [0, 1]]).unwrap();
    let HolderOutcome::Found {
        word_length, point, ..
    } = holder_witness(&[s, t.clone()], 2)
    else {
        panic!("expected a witness")
    };
    assert_eq!(word_length, 1);
    assert_eq!(t.apply(&point), point);
    assert_eq!(
        holder_witness(&[rot(1, 3), rot(1, 5)], 4),
        HolderOutcome::Abelian
    );
}

#[test]
fn propagation_examples() {
    let id = PlLineMap::identity();
    assert_eq!(
        propagate_orbit_bound(&[id.clone(), id], 4).unwrap().bound,
        int(0)
    );
    // sup(⟨g⟩·0) = 2, sup(⟨h⟩·2) = 5.
    let g = PlLineMap::bump(int(-1), int(0), int(1), int(2)).unwrap();
    let h = PlLineMap::bump(int(1), int(2), int(3), int(5)).unwrap();
    assert_eq!(g.orbit_sup(&int(0), 0).unwrap(), int(2));
    assert_eq!(h.orbit_sup(&int(2), 1).unwrap(), int(5));
    assert_eq!(propagate_orbit_bound(&[g, h], 2).unwrap().bound, int(5));
    let err = propagate_orbit_bound(&[PlLineMap::translation(int(1))], 1).unwrap_err();
    assert_eq!(err.generator, 0);
}

#[test]
fn fixed_point_recovery_at_quarter() {
    let a = PlCircleHomeo::new(
        vec![int(0), ratio(1, 4), ratio(1, 2)],
        vec![ratio(1, 8), ratio(1, 4), ratio(3, 4)],
    )
    .unwrap();
    let ball = ActionBall::image(&[a], 3);
    let out = coboundary_search(&ball, 1, DEFAULT_SEARCH_BUDGET).unwrap();
    let rec = fixed_point_from_coboundary(&ball, out.phi.as_ref().unwrap(), 6, None).unwrap();
    assert_eq!(rec.exact, Some(CirclePoint::new(ratio(1, 4))));
    assert!(rec.sup <= ratio(1, 4));
}

#[test]
fn cocycle_table_detects_corruption() {
    let ball = ActionBall::image(&[rot(1, 6)], 3);
    let mut table = EulerCocycleTable::from_ball(&ball);
    let triples = table.closed_triples();
    assert!(check_cocycle_identity(&table, &triples).unwrap().passed());
    table.values[2][3] ^= 1;
    assert!(!check_cocycle_identity(&table, &triples).unwrap().passed());
}
