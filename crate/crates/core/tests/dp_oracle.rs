//! Dynamic-programming tables checked against the brute-force oracle on
//! instances small enough to enumerate completely, with the oracle's values
//! frozen as literals where the cases are canonical.

mod common;

use common::{rat, PlayOracle};
use num_rational::BigRational;
use retsec_core::{dp, montecarlo, ProblemSpec, DEFAULT_ENUMERATION_CAP};

#[test]
fn two_by_three_psi_matches_optimal_play() {
    // 90 arrangements of {1,1,2,2,3,3}; the oracle plays optimally on the
    // full observation tree, conditioned on each post-rejection state.
    let oracle = PlayOracle::new(2, 3);
    let psi = dp::psi_table::<BigRational>(2, 3).unwrap();
    let frozen = [
        (1, 1, rat(5, 6)),
        (2, 1, rat(11, 18)),
        (1, 2, rat(8, 9)),
        (2, 2, rat(1, 3)),
        (1, 3, rat(1, 1)),
        (2, 3, rat(0, 1)),
    ];
    for (i, k, expected) in frozen {
        assert_eq!(
            oracle.state_value(i, k).unwrap(),
            expected,
            "oracle [{i}][{k}]"
        );
        assert_eq!(*psi.get(i, k), expected, "psi[{i}][{k}]");
    }
    let s = dp::solve_generic::<BigRational>(2, 3).unwrap();
    assert_eq!(s.p_check, rat(5, 6));
    assert_eq!(s.p_check, oracle.optimal_value());
}

#[test]
fn two_by_three_success_probabilities() {
    let oracle = PlayOracle::new(2, 3);
    let t = dp::table_set::<BigRational>(2, 3).unwrap();
    let frozen = [rat(7, 9), rat(5, 6), rat(11, 15)];
    for k in 1..=3 {
        let p = dp::success_probability(&t.phi, &t.theta, k).unwrap();
        assert_eq!(p, frozen[k - 1], "P({k})");
        assert_eq!(p, oracle.threshold_value(k), "oracle P({k})");
    }
    let (best_k, best_p) = oracle.best_threshold();
    assert_eq!(best_k, dp::optimal_threshold(&t.psi).unwrap());
    assert_eq!(best_p, rat(5, 6));
    // threshold strategies attain the full-information optimum
    assert_eq!(best_p, oracle.optimal_value());
}

#[test]
fn two_by_four_accept_first_nice_conditionals() {
    // 2520 arrangements; condition on the state (k, 2).
    let oracle = PlayOracle::new(2, 4);
    let phi = dp::phi_table::<BigRational>(2, 4).unwrap();
    let frozen = [rat(47, 72), rat(17, 36), rat(1, 4), rat(0, 1)];
    for k in 1..=4 {
        assert_eq!(
            oracle.accept_first_nice_value(2, k).unwrap(),
            frozen[k - 1],
            "oracle phi[2][{k}]"
        );
        assert_eq!(*phi.get(2, k), frozen[k - 1], "phi[2][{k}]");
    }
}

#[test]
fn state_distributions_match_counting() {
    for (m, n) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
        let oracle = PlayOracle::new(m, n);
        let theta = dp::theta_table::<BigRational>(m, n).unwrap();
        for k in 1..=n {
            for i in 1..=m {
                assert_eq!(
                    *theta.get(i, k),
                    oracle.state_distribution(i, k),
                    "theta[{i}][{k}] for ({m}, {n})"
                );
            }
        }
    }
}

#[test]
fn counting_examples_by_hand() {
    // 6 interleavings of {a,a,b,b}: the maximal has been seen once at the
    // second distinct arrival in five of them.
    let oracle = PlayOracle::new(2, 2);
    assert_eq!(oracle.state_distribution(1, 2), rat(5, 6));
    assert_eq!(oracle.state_distribution(2, 2), rat(1, 6));

    // 20 interleavings of {a,a,a,b,b,b}.
    let oracle = PlayOracle::new(3, 2);
    assert_eq!(oracle.state_distribution(1, 2), rat(4, 5));
    assert_eq!(oracle.state_distribution(2, 2), rat(3, 20));
    assert_eq!(oracle.state_distribution(3, 2), rat(1, 20));
}

#[test]
fn library_enumeration_agrees_with_the_oracle() {
    // Two independent enumerators (placement recursion here, lexicographic
    // successor in the library) must produce identical exact values.
    for (m, n) in [(1, 2), (1, 3), (2, 2), (2, 3), (2, 4), (3, 3)] {
        let oracle = PlayOracle::new(m, n);
        let spec = ProblemSpec::exact(m, n).unwrap();
        let all = montecarlo::exhaustive_all(&spec, DEFAULT_ENUMERATION_CAP).unwrap();
        for k in 1..=n {
            assert_eq!(all[k - 1], oracle.threshold_value(k), "({m},{n}) P({k})");
        }
        let (bk, bp) = montecarlo::exhaustive_optimal(&spec, DEFAULT_ENUMERATION_CAP).unwrap();
        let (ok, op) = oracle.best_threshold();
        assert_eq!((bk, &bp), (ok, &op), "({m},{n}) argmax");
    }
}

#[test]
fn threshold_strategies_attain_the_optimum_on_tiny_instances() {
    for (m, n) in [
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 2),
        (2, 3),
        (2, 4),
        (3, 2),
        (3, 3),
    ] {
        let oracle = PlayOracle::new(m, n);
        let (_, best) = oracle.best_threshold();
        assert_eq!(best, oracle.optimal_value(), "({m}, {n})");
    }
}

#[test]
fn solve_agrees_with_the_oracle_end_to_end() {
    for (m, n) in [(1, 2), (1, 3), (2, 2), (2, 3), (2, 4), (3, 3)] {
        let oracle = PlayOracle::new(m, n);
        let spec = ProblemSpec::exact(m, n).unwrap();
        let s = dp::solve(&spec).unwrap();
        let exact = s.exact().unwrap();
        let (best_k, best_p) = oracle.best_threshold();
        assert_eq!(exact.k_star, best_k, "({m}, {n}) threshold");
        assert_eq!(exact.p_success, best_p, "({m}, {n}) probability");
    }
}
