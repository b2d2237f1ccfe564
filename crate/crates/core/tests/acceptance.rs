//! Acceptance suite. Prints one line per criterion and exits nonzero if any fails.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_integer::gcd;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orderlab::circle::coboundary::{SearchVerdict, DEFAULT_SEARCH_BUDGET};
use orderlab::circle::{
    check_cocycle_identity, coboundary_search, euler_z, fixed_point_from_coboundary,
    holder_witness, propagate_orbit_bound, ActionBall, CircleMap, CirclePoint, EulerCocycleTable,
    HolderOutcome, MobiusMap, PlCircleHomeo,
};
use orderlab::decomposition::{decomposition_stats, Ring};
use orderlab::exact::rational::{floor_int, int, ratio};
use orderlab::exact::{ElementaryMatrix, GroupWord, Rational, SpecialLinearElement};
use orderlab::navas::{
    act_on_kernel, kernel_probe, Acted, Composed, KernelGrid, ProbeVerdict, RoughBump,
    SingularKernel, SmoothCircleMap, StabilizationCriterion,
};
use orderlab::order::witte::WITTE_POSITIONS;
use orderlab::order::{witte_pipeline, GreedyOracle, PlLineMap, WitteOutcome, WitteSystem};

type M3 = [[i64; 3]; 3];

fn unit() -> M3 {
    [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
}

fn mul3(a: &M3, b: &M3) -> M3 {
    let mut c = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

/// Inverse of a determinant-one integer matrix via the adjugate.
fn inv3(a: &M3) -> M3 {
    let mut c = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            c[i][j] = a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
        }
    }
    assert_eq!(mul3(a, &c), unit());
    c
}

fn pow3(a: &M3, e: i64) -> M3 {
    let base = if e < 0 { inv3(a) } else { *a };
    (0..e.unsigned_abs()).fold(unit(), |acc, _| mul3(&acc, &base))
}

fn comm3(a: &M3, b: &M3) -> M3 {
    mul3(&mul3(&inv3(a), &inv3(b)), &mul3(a, b))
}

fn elementary3(i: usize, j: usize, t: i64) -> M3 {
    let mut m = unit();
    m[i][j] = t;
    m
}

fn from_lib(m: &SpecialLinearElement) -> M3 {
    let mut out = [[0; 3]; 3];
    for (i, row) in m.matrix().rows().enumerate() {
        for (j, x) in row.iter().enumerate() {
            assert!(x.is_integer());
            out[i][j] = x.to_integer().try_into().unwrap();
        }
    }
    out
}

fn relation_table() {
    for k in 1..=5 {
        let gens: Vec<M3> = WITTE_POSITIONS
            .iter()
            .map(|&(i, j)| elementary3(i, j, k))
            .collect();
        let system = WitteSystem::new(k).expect("relations verified");
        for (lib, ours) in system.group().generators().iter().zip(&gens) {
            assert_eq!(&from_lib(lib), ours);
        }
        for i in 0..6 {
            let (prev, next) = (&gens[(i + 5) % 6], &gens[(i + 1) % 6]);
            assert_eq!(
                comm3(&gens[i], next),
                unit(),
                "k={k} i={i}: neighbors commute"
            );
            let c = comm3(prev, next);
            let sign = [1, -1]
                .into_iter()
                .find(|&s| c == pow3(&gens[i], s * k))
                .expect("power of the center");
            let recorded = system.relations()[i];
            assert_eq!((recorded.index, recorded.sign), (i, sign), "k={k} i={i}");
        }
    }
}

fn heisenberg_identity() {
    let a = ElementaryMatrix::new(3, 0, 1, int(1)).unwrap().realize();
    let b = ElementaryMatrix::new(3, 1, 2, int(1)).unwrap().realize();
    let ab = SpecialLinearElement::commutator(&a, &b).unwrap();
    let (a3, b3) = (elementary3(0, 1, 1), elementary3(1, 2, 1));
    for k in -5..=5 {
        for m in -5..=5 {
            let lhs = SpecialLinearElement::commutator(&b.pow(k), &a.pow(m)).unwrap();
            assert_eq!(lhs, ab.pow(-k * m), "k={k} m={m}");
            assert_eq!(
                comm3(&pow3(&b3, k), &pow3(&a3, m)),
                pow3(&comm3(&a3, &b3), -k * m)
            );
        }
    }
}

fn witte_refutes_greedy() {
    let mut runs = 0;
    for k in 1..=2 {
        let system = WitteSystem::new(k).unwrap();
        let group = system.group();
        for seed in 0..100 {
            let report = witte_pipeline(k, GreedyOracle::seeded(group.clone(), seed), 50).unwrap();
            match &report.outcome {
                WitteOutcome::Certificate(cert) => {
                    cert.check(group)
                        .unwrap_or_else(|e| panic!("k={k} seed={seed}: check: {e}"));
                    cert.replay(&mut GreedyOracle::seeded(group.clone(), seed))
                        .unwrap_or_else(|e| panic!("k={k} seed={seed}: replay: {e}"));
                }
                WitteOutcome::Inconclusive { .. } => panic!("k={k} seed={seed}: inconclusive"),
            }
            runs += 1;
        }
    }
    assert_eq!(runs, 200);
}

fn decomposition_round_trip() {
    let z = decomposition_stats(3, Ring::Integers, 1000, 20, 3, 0).unwrap();
    assert_eq!(z.sample_size, 1000);
    assert!(z.all_round_trips_exact);
    let q = decomposition_stats(3, Ring::Rationals, 1000, 20, 3, 0).unwrap();
    assert!(q.all_round_trips_exact);
    assert!(q.max_count <= 16, "max count over Q is {}", q.max_count);
}

fn euler_rotations() {
    let mut family = Vec::new();
    for q in 1..=12i64 {
        for p in 0..q {
            if gcd(p, q) == 1 {
                family.push((ratio(p, q), PlCircleHomeo::rotation(ratio(p, q))));
            }
        }
    }
    for (a, ra) in &family {
        for (b, rb) in &family {
            let carry = floor_int(&(a + b));
            let z = euler_z(ra, rb);
            assert!(z <= 1);
            assert_eq!(num_bigint::BigInt::from(z), carry, "z(r_{a}, r_{b})");
        }
    }
    let maps: Vec<PlCircleHomeo> = family.iter().map(|(_, r)| r.clone()).collect();
    let ball = ActionBall::image(&maps, 1);
    let table = EulerCocycleTable::from_ball(&ball);
    assert!(table.values_in_range());
    let report = check_cocycle_identity(&table, &table.closed_triples()).unwrap();
    assert!(report.passed(), "{report:?}");
    for (a, ra) in family.iter().step_by(3) {
        for (b, rb) in family.iter().step_by(3) {
            for (c, rc) in family.iter().step_by(3) {
                let carries = floor_int(&(a + b)) + floor_int(&(frac_sum(a, b) + c))
                    - floor_int(&(b + c))
                    - floor_int(&(a + frac_sum(b, c)));
                assert_eq!(carries, num_bigint::BigInt::from(0));
                let lhs = euler_z(ra, rb) as i64 + euler_z(&ra.compose(rb), rc) as i64;
                let rhs = euler_z(ra, &rb.compose(rc)) as i64 + euler_z(rb, rc) as i64;
                assert_eq!(lhs, rhs);
            }
        }
    }
}

fn frac_sum(a: &Rational, b: &Rational) -> Rational {
    let s = a + b;
    let f = Rational::from_integer(floor_int(&s));
    s - f
}

/// Random PL circle map fixing 0, with knots on a grid of 1/24.
fn pl_fixing_zero(rng: &mut ChaCha8Rng) -> PlCircleHomeo {
    let cuts: std::collections::BTreeSet<i64> = (0..rng.gen_range(1..4))
        .map(|_| rng.gen_range(1..24))
        .collect();
    let mut xs = vec![int(0)];
    xs.extend(cuts.iter().map(|&c| ratio(c, 24)));
    let mut ends: Vec<Rational> = xs.iter().skip(1).cloned().collect();
    ends.push(int(1));
    let lens: Vec<Rational> = xs
        .iter()
        .zip(&ends)
        .map(|(a, b)| (b - a) * int(rng.gen_range(1..5)))
        .collect();
    let total: Rational = lens.iter().sum();
    let mut ys = Vec::with_capacity(xs.len());
    let mut acc = int(0);
    for l in &lens {
        ys.push(acc.clone());
        acc += l / &total;
    }
    PlCircleHomeo::new(xs, ys).unwrap()
}

fn global_fixed_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for action in 0..20 {
        let gens = vec![pl_fixing_zero(&mut rng), pl_fixing_zero(&mut rng)];
        for g in &gens {
            assert_eq!(g.apply(&CirclePoint::zero()), CirclePoint::zero());
        }
        let ball = ActionBall::image(&gens, 2);
        let table = EulerCocycleTable::from_ball(&ball);
        assert!(table.is_zero(), "action {action}: Euler table");
        let search = coboundary_search(&ball, 1, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(search.verdict, SearchVerdict::Found);
        let phi = search.phi.expect("phi");
        assert_eq!(phi.bound(), 0, "action {action}: phi is not zero");
        let rec = fixed_point_from_coboundary(&ball, &phi, 6, None).unwrap();
        assert_eq!(rec.exact, Some(CirclePoint::zero()), "action {action}");
        assert_eq!(rec.sup, int(0));
    }
}

fn evaluate<M: CircleMap>(gens: &[M], word: &GroupWord) -> M {
    let mut m = gens[0].identity_like();
    for l in word.letters() {
        let g = if l.exponent > 0 {
            gens[l.generator].clone()
        } else {
            gens[l.generator].inverse()
        };
        for _ in 0..l.exponent.unsigned_abs() {
            m = m.compose(&g);
        }
    }
    m
}

fn holder_on_modular_group() {
    let s = MobiusMap::from_i64([[0, -1], [1, 0]]).unwrap();
    let t = MobiusMap::from_i64([[1, 1], [0, 1]]).unwrap();
    let gens = [s, t];
    match holder_witness(&gens, 2) {
        HolderOutcome::Found {
            word,
            point,
            word_length,
        } => {
            assert!(word_length <= 2);
            let m = evaluate(&gens, &word);
            assert!(!m.is_identity());
            assert_eq!(m.apply(&point), point);
        }
        other => panic!("no witness: {other:?}"),
    }
}

fn orbit_propagation() {
    let q = |n: i64| int(n);
    // g_i moves i - 1 to i inside [i - 2, i + 1]; listed out of order.
    let gens: Vec<PlLineMap> = [2, 0, 4, 1, 3]
        .iter()
        .map(|&i| PlLineMap::bump(q(i - 2), q(i - 1), q(i), q(i + 1)).unwrap())
        .collect();
    let max_len = 6;
    let bound = propagate_orbit_bound(&gens, gens.len() * max_len)
        .unwrap()
        .bound;
    let maps: Vec<PlLineMap> = gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    let mut seen: HashSet<Rational> = HashSet::from([int(0)]);
    let mut frontier = vec![int(0)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for x in &frontier {
            for m in &maps {
                let y = m.eval(x);
                assert!(y <= bound, "{y} exceeds {bound}");
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    assert!(seen.len() > 1);
}

/// Growth of the rough fixture's sup sequence over 256..4096, from the first run.
const ROUGH_GROWTH_BASELINE: f64 = 6.8706;

fn navas_probe() {
    let grid = KernelGrid::doubling(5, 256).unwrap();
    assert_eq!(
        grid.levels().first().map(|l| (l.n, l.delta)),
        Some((256, 1.0 / 64.0))
    );
    assert_eq!(
        grid.levels().last().map(|l| (l.n, l.delta)),
        Some((4096, 1.0 / 1024.0))
    );
    let criterion = StabilizationCriterion {
        low: 0.8,
        high: 1.25,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for i in 0..5 {
        let g = SmoothCircleMap::random(rng.gen_range(1..=4), rng.gen());
        let r = kernel_probe(&g, &grid, criterion).unwrap();
        let ratio = r.final_ratio.expect("nonzero sups");
        assert!(
            (0.8..=1.25).contains(&ratio),
            "map {i}: final ratio {ratio}"
        );
        assert_eq!(r.verdict, ProbeVerdict::Stabilized);
    }
    let rough = SmoothCircleMap::new(
        0.0,
        vec![],
        vec![],
        Some(RoughBump {
            alpha: 1.3,
            center: 0.25,
            amplitude: 0.01,
            width: 0.25,
        }),
    )
    .unwrap();
    let r = kernel_probe(&rough, &grid, criterion).unwrap();
    let growth = r.growth.expect("growth");
    println!("    rough fixture sups {:?}, growth {growth:.4}", r.sups());
    assert!(growth >= 2.0, "growth {growth}");
    assert_eq!(r.verdict, ProbeVerdict::Growing);
    assert!(
        (growth / ROUGH_GROWTH_BASELINE - 1.0).abs() < 0.05,
        "growth {growth} moved from baseline"
    );
}

fn right_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let n = 1 << 14;
    for pair in 0..10 {
        let g = SmoothCircleMap::random(rng.gen_range(1..=4), rng.gen());
        let h = SmoothCircleMap::random(rng.gen_range(1..=4), rng.gen());
        let gh = Composed {
            outer: &g,
            inner: &h,
        };
        let points: Vec<(f64, f64)> = (0..10_000)
            .map(|_| {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                (i as f64 / n as f64, j as f64 / n as f64)
            })
            .collect();
        let direct = act_on_kernel(&SingularKernel, &gh, &points).unwrap();
        let fg = Acted {
            kernel: &SingularKernel,
            map: &g,
        };
        let iterated = act_on_kernel(&fg, &h, &points).unwrap();
        for (k, (a, b)) in direct.iter().zip(&iterated).enumerate() {
            assert!(
                (a - b).abs() <= 1e-10 * a.abs(),
                "pair {pair}, point {:?}: {a} vs {b}",
                points[k]
            );
        }
    }
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn(),
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            name: "relation table, k = 1..5",
            budget: secs(1),
            run: relation_table,
        },
        Criterion {
            name: "Heisenberg commutator powers",
            budget: secs(1),
            run: heisenberg_identity,
        },
        Criterion {
            name: "greedy oracles refuted",
            budget: secs(60),
            run: witte_refutes_greedy,
        },
        Criterion {
            name: "decomposition round trip",
            budget: secs(30),
            run: decomposition_round_trip,
        },
        Criterion {
            name: "Euler cocycle of rotations",
            budget: secs(5),
            run: euler_rotations,
        },
        Criterion {
            name: "global fixed point recovery",
            budget: secs(10),
            run: global_fixed_point,
        },
        Criterion {
            name: "Holder witness",
            budget: secs(1),
            run: holder_on_modular_group,
        },
        Criterion {
            name: "orbit bound propagation",
            budget: secs(10),
            run: orbit_propagation,
        },
        Criterion {
            name: "kernel probe",
            budget: secs(120),
            run: navas_probe,
        },
        Criterion {
            name: "right action",
            budget: secs(10),
            run: right_action,
        },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run));
        let elapsed = start.elapsed();
        let status = match (&outcome, elapsed <= c.budget) {
            (Ok(()), true) => "PASS",
            (Ok(()), false) => "FAIL (over time budget)",
            (Err(_), _) => "FAIL",
        };
        if status != "PASS" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<32} {status} {:.3}s (budget {}s)",
            i + 1,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
