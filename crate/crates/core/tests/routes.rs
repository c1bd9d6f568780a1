mod common;

use common::{probability_gap, random_star, rng, tolerance};
use deltacouple::cli::emit_preset;
use deltacouple::closed_form::solve_two_state;
use deltacouple::oracle::{dense_match_solve, smeared_solve, SmearedProblem};
use deltacouple::{greens, matcher, PotentialSpec, StarProblem};

fn preset_routes_agree(name: &str) {
    let cfg = emit_preset(name).unwrap();
    for e in cfg.energies.points() {
        let p = cfg.problem.at(e);
        let tol = tolerance(&p);
        let (_, cf) = solve_two_state(&p).unwrap();
        let m = matcher::solve_star(&p).unwrap();
        let g = greens::solve_star(&p).unwrap();
        let d = dense_match_solve(&p).unwrap();
        for s in [&m, &g, &d] {
            assert!((s.t_cross() - cf.t_cross).abs() < tol, "{name} E={e}");
            assert!((s.probabilities.r_back - cf.r_back.unwrap()).abs() < tol, "{name} E={e}");
            assert_eq!(s.probabilities.t_same.is_some(), cf.t_same.is_some());
        }
        assert!(probability_gap(&m, &g) < tol && probability_gap(&m, &d) < tol, "{name} E={e}");
    }
}

#[test]
fn figure_const_routes_agree() {
    preset_routes_agree("figure-const");
}

#[test]
fn figure_linear_routes_agree() {
    preset_routes_agree("figure-linear");
}

#[test]
fn figure_expo_routes_agree() {
    preset_routes_agree("figure-expo");
}

#[test]
fn dense_oracle_matches_matcher_on_random_stars() {
    let mut r = rng(11);
    for n in [2, 3, 4, 5].repeat(10) {
        let p = random_star(&mut r, n, false);
        let gap = probability_gap(&dense_match_solve(&p).unwrap(), &matcher::solve_star(&p).unwrap());
        assert!(gap < 1e-8, "{p:?}: {gap}");
    }
}

#[test]
fn smeared_oracle_approaches_the_linear_pair() {
    let p = StarProblem::two_state(
        PotentialSpec::Linear { slope: 1.0 },
        PotentialSpec::Linear { slope: -1.0 },
        1.0,
        2.0,
    );
    let exact = matcher::solve_star(&p).unwrap().t_cross();
    let mut errors = Vec::new();
    for sigma in [0.04, 0.02, 0.01] {
        let s = smeared_solve(&SmearedProblem::with_default_grid(p.clone(), sigma).unwrap()).unwrap();
        assert!(s.flux_residual < 1e-6);
        errors.push((s.t_cross() - exact).abs());
    }
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    assert!(errors[2] < 2e-3, "{errors:?}");
}
