use orderlab::exact::rational::int;
use orderlab::exact::{ElementaryMatrix, GroupWord, MatrixGroup, SpecialLinearElement};
use orderlab::order::cone::{
    check_cone_axioms, cone_from_order, heisenberg_group, integer_cone, integers_group, lex_sign,
    order_from_cone, z2_group, ConeCheck, LexCone, PositiveCone, WordPredicateCone,
};
use orderlab::order::heisenberg::{
    heisenberg_contradiction_with, HeisenbergOutcome, HeisenbergTriple,
};
use orderlab::order::oracle::{FnOracle, OracleError, OrderOracle, Sign};
use orderlab::order::witte::{witte_generators, witte_pipeline, WitteOutcome, WitteSystem};
use orderlab::order::{GreedyOracle, Violation};

fn heis_triple(group: &MatrixGroup) -> HeisenbergTriple {
    HeisenbergTriple::new(
        group,
        GroupWord::generator(0),
        GroupWord::generator(1),
        GroupWord::generator(2),
        1,
    )
    .unwrap()
}

/// Sign read lexicographically from the corner entry first, then x, then y.
/// Each answer is consistent on its own but closure fails, so both witnesses
/// appear at p = q = 1.
fn corner_first(group: MatrixGroup) -> impl OrderOracle {
    FnOracle::new(group, |m: &SpecialLinearElement| {
        lex_sign(m.matrix(), &[(0, 2), (0, 1), (1, 2)])
    })
}

#[test]
fn heisenberg_certificate_with_unit_witnesses() {
    let group = heisenberg_group();
    let triple = heis_triple(&group);
    let out = heisenberg_contradiction_with(&triple, corner_first(group.clone()), 50).unwrap();
    let HeisenbergOutcome::Certificate(cert) = out else {
        panic!("expected certificate, got {out:?}")
    };
    let w = cert.witness.unwrap();
    assert_eq!((w.p, w.q, w.m, w.k), (1, 1, 3, 1));
    assert_eq!(w.exponent(), -3);
    match &cert.violation {
        Violation::EvaluatedIdentityContradiction {
            target,
            answer,
            required,
            evaluation,
            ..
        } => {
            assert_eq!(target, &GroupWord::power(2, -3));
            assert_eq!(*answer, Sign::Negative);
            assert_eq!(*required, Sign::Positive);
            let e13 = ElementaryMatrix::new(3, 0, 2, int(-3)).unwrap().realize();
            assert_eq!(&evaluation.to_matrix().unwrap(), e13.matrix());
        }
        v => panic!("unexpected {v:?}"),
    }
    cert.check(&group).unwrap();
    cert.replay(&mut corner_first(group)).unwrap();
}

#[test]
fn heisenberg_left_branch_for_x_first_order() {
    // x first, then the corner, then y: a genuine order in which z << a.
    let group = heisenberg_group();
    let triple = heis_triple(&group);
    let oracle = FnOracle::new(group, |m: &SpecialLinearElement| {
        lex_sign(m.matrix(), &[(0, 1), (0, 2), (1, 2)])
    });
    match heisenberg_contradiction_with(&triple, oracle, 20).unwrap() {
        HeisenbergOutcome::LeftBranch(fact) => {
            assert_eq!(fact.smaller, GroupWord::generator(2));
            assert_eq!(fact.larger, GroupWord::generator(0));
        }
        other => panic!("expected left branch, got {other:?}"),
    }
}

#[test]
fn heisenberg_all_positive_oracle_breaks_partition() {
    let group = heisenberg_group();
    let triple = heis_triple(&group);
    let oracle = FnOracle::new(group.clone(), |_: &SpecialLinearElement| Sign::Positive);
    let HeisenbergOutcome::Certificate(cert) =
        heisenberg_contradiction_with(&triple, oracle, 5).unwrap()
    else {
        panic!("expected certificate")
    };
    assert!(matches!(
        cert.violation,
        Violation::PartitionViolation {
            partner: Some(_),
            ..
        }
    ));
    cert.check(&group).unwrap();
}

#[test]
fn heisenberg_rejects_non_heisenberg_input() {
    let group = heisenberg_group();
    assert!(HeisenbergTriple::new(
        &group,
        GroupWord::generator(0),
        GroupWord::generator(2),
        GroupWord::generator(1),
        1
    )
    .is_err());
    assert!(HeisenbergTriple::new(
        &group,
        GroupWord::generator(0),
        GroupWord::generator(1),
        GroupWord::generator(2),
        2
    )
    .is_err());
}

#[test]
fn greedy_witte_runs_produce_replayable_certificates() {
    for k in [1, 2] {
        for seed in 0..10 {
            let system = WitteSystem::new(k).unwrap();
            let oracle = GreedyOracle::seeded(system.group().clone(), seed);
            let report = witte_pipeline(k, oracle, 50).unwrap();
            let cert = report.certificate().expect("certificate");
            let mut fresh = GreedyOracle::seeded(system.group().clone(), seed);
            cert.replay(&mut fresh)
                .unwrap_or_else(|e| panic!("k={k} seed={seed}: {e}"));
        }
    }
}

/// Answers from syntax: a word is positive iff its first letter has an even
/// generator index and positive exponent, or an odd index and negative one.
struct Syntactic(MatrixGroup);

impl OrderOracle for Syntactic {
    fn group(&self) -> &MatrixGroup {
        &self.0
    }
    fn sign(&mut self, w: &GroupWord) -> Result<Sign, OracleError> {
        if self.0.is_identity(w) {
            return Ok(Sign::Identity);
        }
        let l = w.letters()[0];
        Ok(if (l.generator % 2 == 0) == (l.exponent > 0) {
            Sign::Positive
        } else {
            Sign::Negative
        })
    }
}

#[test]
fn witte_detects_word_dependent_answers() {
    let group = MatrixGroup::new(witte_generators(1)).unwrap();
    let report = witte_pipeline(1, Syntactic(group.clone()), 50).unwrap();
    let cert = report.certificate().unwrap();
    assert_eq!(cert.kind(), "LeftInvarianceViolation");
    cert.replay(&mut Syntactic(group)).unwrap();
}

/// Answers generators and their powers, defers every longer word.
struct Deferring(MatrixGroup);

impl OrderOracle for Deferring {
    fn group(&self) -> &MatrixGroup {
        &self.0
    }
    fn sign(&mut self, w: &GroupWord) -> Result<Sign, OracleError> {
        match w.letters() {
            [] => Ok(Sign::Identity),
            [l] => Ok(if l.exponent > 0 {
                Sign::Positive
            } else {
                Sign::Negative
            }),
            _ => Err(OracleError::Undecided("deferred".into())),
        }
    }
}

#[test]
fn witte_inconclusive_against_deferring_oracle() {
    let group = MatrixGroup::new(witte_generators(2)).unwrap();
    let report = witte_pipeline(2, Deferring(group), 7).unwrap();
    match report.outcome {
        WitteOutcome::Inconclusive { bound, frontier } => {
            assert_eq!(bound, 7);
            assert!(!frontier.is_empty());
        }
        other => panic!("expected inconclusive, got {other:?}"),
    }
}

#[test]
fn cone_order_round_trip_on_integers() {
    let mut o = order_from_cone(integer_cone(false));
    assert_eq!(o.sign(&GroupWord::power(0, 3)), Ok(Sign::Positive));
    assert_eq!(o.sign(&GroupWord::power(0, -2)), Ok(Sign::Negative));
    assert_eq!(o.sign(&GroupWord::identity()), Ok(Sign::Identity));
    let cone = cone_from_order(order_from_cone(integer_cone(true)));
    for n in -5i64..=5 {
        assert_eq!(cone.contains(&GroupWord::power(0, n)), n <= -1);
    }
}

#[test]
fn cone_with_both_signs_is_a_partition_error() {
    let cone = WordPredicateCone::new(integers_group(), |w: &GroupWord| !w.is_identity());
    let mut o = order_from_cone(cone);
    assert!(matches!(
        o.sign(&GroupWord::generator(0)),
        Err(OracleError::Partition(_))
    ));
}

#[test]
fn trivial_group_identity_sign() {
    let trivial = MatrixGroup::new(vec![SpecialLinearElement::identity(2)]).unwrap();
    let cone = WordPredicateCone::new(trivial, |_: &GroupWord| false);
    assert_eq!(
        order_from_cone(cone).sign(&GroupWord::identity()),
        Ok(Sign::Identity)
    );
}

fn ball(group: &MatrixGroup, r: u64) -> Vec<GroupWord> {
    group.ball(r).into_iter().map(|(w, _)| w).collect()
}

#[test]
fn cone_axioms_pass_for_genuine_cones() {
    let z = integers_group();
    let words: Vec<GroupWord> = (-10..=10).map(|n| GroupWord::power(0, n)).collect();
    assert!(matches!(
        check_cone_axioms(integer_cone(false), &words).unwrap(),
        ConeCheck::Pass(_)
    ));
    let lex = LexCone::new(z2_group(), vec![(0, 1), (0, 2)]);
    let ConeCheck::Pass(report) = check_cone_axioms(lex, &ball(&z2_group(), 5)).unwrap() else {
        panic!("lex cone on Z^2 should pass")
    };
    assert_eq!(report.elements_checked, 61);
    let _ = z;
}

#[test]
fn pseudo_cone_fails_closure() {
    // Even positive or odd negative powers: the partition axiom holds, closure
    // fails (g^2 * g^-1 = g).
    let cone = WordPredicateCone::new(integers_group(), |w: &GroupWord| match w.letters() {
        [l] => (l.exponent > 0 && l.exponent % 2 == 0) || (l.exponent < 0 && l.exponent % 2 != 0),
        _ => false,
    });
    let words: Vec<GroupWord> = (-10..=10).map(|n| GroupWord::power(0, n)).collect();
    let ConeCheck::Violation(cert) = check_cone_axioms(&cone, &words).unwrap() else {
        panic!("expected violation")
    };
    assert_eq!(cert.kind(), "ClosureViolation");
    cert.check(&integers_group()).unwrap();
}

mod action_and_realization {
    use orderlab::exact::rational::int;
    use orderlab::exact::{GroupWord, MatrixGroup};
    use orderlab::order::action::{order_from_action, LineAction};
    use orderlab::order::cone::{integers_group, order_from_cone, z2_group, LexCone};
    use orderlab::order::line::PlLineMap;
    use orderlab::order::oracle::{OrderOracle, Sign};
    use orderlab::order::realization::{dynamical_realization, order_ball, RealizationError};

    fn ball(group: &MatrixGroup, radius: u64) -> Vec<GroupWord> {
        group.ball(radius).into_iter().map(|(w, _)| w).collect()
    }

    #[test]
    fn action_signs() {
        let g = GroupWord::generator(0);
        let shift = LineAction::new(vec![PlLineMap::translation(int(1))]);
        let mut o = order_from_action(integers_group(), shift, 8).unwrap();
        assert_eq!(o.sign(&g).unwrap(), Sign::Positive);
        assert_eq!(o.sign(&GroupWord::identity()).unwrap(), Sign::Identity);

        // Fixes 0, the first enumerated rational, and sends 1 to 2.
        let bump = PlLineMap::new(vec![
            (int(-1), int(-1)),
            (int(0), int(0)),
            (int(1), int(2)),
            (int(2), int(3)),
        ])
        .unwrap();
        assert_eq!(bump.eval(&int(0)), int(0));
        let mut o = order_from_action(integers_group(), LineAction::new(vec![bump]), 8).unwrap();
        assert_eq!(o.sign(&g).unwrap(), Sign::Positive);
        assert_eq!(o.sign(&g.inverse()).unwrap(), Sign::Negative);
    }

    #[test]
    fn realization_of_integers() {
        let group = integers_group();
        let mut o = order_from_cone(LexCone::new(group.clone(), vec![(0, 1)]));
        let ordered = order_ball(&mut o, &ball(&group, 3)).unwrap();
        let want: Vec<GroupWord> = (-3..=3).map(|n| GroupWord::power(0, n)).collect();
        assert_eq!(ordered, want);
        let r = dynamical_realization(&group, &ordered).unwrap();
        assert!(r.points.windows(2).all(|w| w[0].point < w[1].point));
        let shift = &r.maps[0];
        assert_eq!(shift.pairs.len(), 6);
        assert!(shift.pairs.iter().all(|(x, y)| y - x == int(1)));
    }

    #[test]
    fn realization_of_lex_plane() {
        let group = z2_group();
        let mut o = order_from_cone(LexCone::new(group.clone(), vec![(0, 1), (0, 2)]));
        let words = ball(&group, 2);
        let ordered = order_ball(&mut o, &words).unwrap();
        let r = dynamical_realization(&group, &ordered).unwrap();
        // Pairwise: the assigned points compare as the lexicographic exponents.
        let exps = |w: &GroupWord| {
            let m = group.evaluate(w);
            (m.matrix().get(0, 1).clone(), m.matrix().get(0, 2).clone())
        };
        for a in &r.points {
            for b in &r.points {
                assert_eq!(a.point.cmp(&b.point), exps(&a.word).cmp(&exps(&b.word)));
            }
        }
        for m in &r.maps {
            assert!(m
                .pairs
                .windows(2)
                .all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
        }
    }

    #[test]
    fn realization_rejects_non_invariant_order() {
        let group = integers_group();
        // 0 < 1 < -1 < ... is not left-invariant.
        let ordered: Vec<GroupWord> = [0, 1, -1].iter().map(|&n| GroupWord::power(0, n)).collect();
        assert!(matches!(
            dynamical_realization(&group, &ordered),
            Err(RealizationError::NotLeftInvariant { .. })
        ));
    }
}
