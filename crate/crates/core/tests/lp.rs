use std::time::Instant;

use toroid_core::certificate::{check_certificate, closed_form, diagonal_cycle, odd_toroid_certificate, Variant};
use toroid_core::execution::Uncertainty;
use toroid_core::lp::simplex::Status;
use toroid_core::lp::{best_certificate, build_bound_lp, enumerate_cycles, search_cycles, solve_bound_lp};
use toroid_core::rational::{int, ratio};
use toroid_core::topology::Toroid;
use toroid_core::{Rational, Strategy};

fn lp_optimum(t: Toroid, u: &Uncertainty) -> Rational {
    let lp = build_bound_lp(t, u, &diagonal_cycle(t).unwrap()).unwrap();
    let solution = solve_bound_lp(&lp).unwrap();
    assert_eq!(solution.status, Status::Optimal);
    solution.objective_value
}

#[test]
fn optimum_equals_closed_form_and_scales_linearly() {
    let start = Instant::now();
    let half_more = Uncertainty::new(ratio(3, 2)).unwrap();
    for (k, m) in [(3, 1), (5, 1), (3, 2)] {
        let t = Toroid::new(k, m).unwrap();
        let at_one = lp_optimum(t, &Uncertainty::one());
        let at_half_more = lp_optimum(t, &half_more);
        let expected = int((m * (k * k - 1)) as i64) / int(4 * k as i64);
        assert_eq!(at_one, expected, "k={k} m={m}");
        assert_eq!(
            at_one,
            closed_form(Variant::ToroidOdd, k, m, &Uncertainty::one()).unwrap()
        );
        assert_eq!(at_half_more, closed_form(Variant::ToroidOdd, k, m, &half_more).unwrap());
        assert_eq!(at_half_more / at_one, ratio(3, 2));
    }
    assert!(start.elapsed().as_secs() < 120);
}

#[test]
fn constructed_certificate_is_feasible_and_dominated() {
    for (k, m) in [(3, 1), (5, 1), (3, 2)] {
        for u in [Uncertainty::one(), Uncertainty::new(ratio(3, 2)).unwrap()] {
            let t = Toroid::new(k, m).unwrap();
            let cert = odd_toroid_certificate(t, &u).unwrap();
            let lp = build_bound_lp(t, &u, &cert.cycle).unwrap();
            let point = lp.point_of(&cert).unwrap();
            assert!(lp.program.is_feasible(&point));
            let bound = check_certificate(&cert).bound;
            assert_eq!(lp.program.objective_at(&point), bound);
            assert!(lp_optimum(t, &u) >= bound);
        }
    }
}

#[test]
fn best_certificate_survives_independent_check() {
    let t = Toroid::new(3, 1).unwrap();
    let best = best_certificate(t, &Uncertainty::one(), &diagonal_cycle(t).unwrap()).unwrap();
    assert!(best.report.passed());
    assert_eq!(best.report.bound, ratio(2, 3));
    assert_eq!(best.solution.objective_value, ratio(2, 3));
}

#[test]
fn enumerated_cycles_never_beat_the_diagonal_on_small_rings() {
    for k in [3, 5] {
        let t = Toroid::new(k, 1).unwrap();
        let u = Uncertainty::one();
        let results = search_cycles(t, &u, Strategy::default()).unwrap();
        assert_eq!(results.len(), enumerate_cycles(t).unwrap().len());
        let best = results.iter().map(|r| r.optimum.clone()).max().unwrap();
        assert_eq!(best, lp_optimum(t, &u));
        let sequential: Vec<_> = search_cycles(t, &u, Strategy::Sequential)
            .unwrap()
            .into_iter()
            .map(|r| r.optimum)
            .collect();
        assert_eq!(
            sequential,
            results.iter().map(|r| r.optimum.clone()).collect::<Vec<_>>()
        );
    }
}
