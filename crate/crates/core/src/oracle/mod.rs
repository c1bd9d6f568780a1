//! Numerical cross-checks for the analytic routes.
//!
//! [`dense_match_solve`] re-derives the matching conditions with its own
//! basis, row order and pivoting. [`smeared_solve`] integrates the coupled
//! equations on a grid with Gaussian couplings of width σ; as σ → 0 it tends
//! to the delta-coupled result. It is slow by design and meant for a handful
//! of energies.

mod dense;
mod exact;
mod smeared;

pub use dense::dense_match_solve;
pub use smeared::{smeared_solve, Grid, SmearedProblem, FIT_TOLERANCE};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::solve_constant_pair;
    use crate::model::{CouplingPoint, Incident, PotentialSpec, Side, StarProblem};
    use crate::Error;

    fn constant(v: f64) -> PotentialSpec {
        PotentialSpec::Constant { offset: v }
    }

    fn fig_const(e: f64) -> StarProblem {
        StarProblem::two_state(constant(0.0), constant(5.0), 1.0, e)
    }

    #[test]
    fn dense_constant_pair() {
        let s = dense_match_solve(&fig_const(6.0)).unwrap();
        let (_, r) = solve_constant_pair(0.0, 5.0, 1.0, 1.0, 1.0, 6.0).unwrap();
        assert!((s.t_cross() - r.t_cross).abs() < 1e-12);
        assert!((s.probabilities.r_back - r.r_back.unwrap()).abs() < 1e-12);
        assert!(s.flux_residual < 1e-12);
    }

    #[test]
    fn dense_zero_coupling() {
        let s = dense_match_solve(&StarProblem::two_state(constant(0.0), constant(5.0), 0.0, 6.0)).unwrap();
        assert_eq!(s.t_cross(), 0.0);
        assert!((s.probabilities.t_same.unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dense_degenerate_spokes() {
        let three = StarProblem {
            channels: vec![constant(0.0), constant(5.0), constant(5.0)],
            couplings: vec![CouplingPoint::new(0.0, 1.0); 2],
            mass: 1.0,
            hbar: 1.0,
            energy: 6.0,
            incident: Incident::default(),
        };
        let a = dense_match_solve(&three).unwrap();
        let b = dense_match_solve(&StarProblem::two_state(constant(0.0), constant(5.0), 2f64.sqrt(), 6.0)).unwrap();
        assert!((a.t_cross() - b.t_cross()).abs() < 1e-10);
    }

    #[test]
    fn dense_agrees_with_matcher_on_mixed_stars() {
        let p = StarProblem {
            channels: vec![
                PotentialSpec::Linear { slope: -0.8 },
                constant(0.3),
                PotentialSpec::Exponential { amplitude: 0.6, rate: 1.4 },
                constant(2.5),
            ],
            couplings: vec![CouplingPoint::new(-0.4, 0.9), CouplingPoint::new(0.3, 0.5), CouplingPoint::new(0.3, 1.1)],
            mass: 1.2,
            hbar: 0.9,
            energy: 1.7,
            incident: Incident::new(1, Side::Right),
        };
        for inc in [(1, Side::Right), (2, Side::Left), (3, Side::Left)] {
            let q = p.with_incident(inc.0, inc.1);
            let a = dense_match_solve(&q).unwrap();
            let b = crate::matcher::solve_star(&q).unwrap();
            assert!(a.flux_residual < 1e-9);
            for (x, y) in a.probabilities.outgoing.iter().zip(&b.probabilities.outgoing) {
                for (u, v) in x.iter().zip(y) {
                    assert_eq!(u.is_some(), v.is_some());
                    if let (Some(u), Some(v)) = (u, v) {
                        assert!((u - v).abs() < 1e-9, "{inc:?}: {u} vs {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn smeared_constant_pair() {
        let base = fig_const(6.0);
        let grid = SmearedProblem::default_grid(&base, 1e-2, 1e-3).unwrap();
        let sp = SmearedProblem::new(base, 1e-2, grid).unwrap();
        let s = smeared_solve(&sp).unwrap();
        assert!((s.t_cross() - 0.281568).abs() < 2e-3, "{}", s.t_cross());
        assert!(s.flux_residual < 1e-6, "{}", s.flux_residual);
    }

    #[test]
    fn smeared_zero_coupling_is_free() {
        let sp = SmearedProblem::with_default_grid(StarProblem::two_state(constant(0.0), constant(5.0), 0.0, 6.0), 0.04)
            .unwrap();
        let s = smeared_solve(&sp).unwrap();
        assert!(s.t_cross() < 1e-20);
        assert!((s.probabilities.t_same.unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn smeared_exponential_pair() {
        let base = StarProblem::two_state(
            PotentialSpec::Exponential { amplitude: 1.0, rate: 1.0 },
            PotentialSpec::Exponential { amplitude: 1.0, rate: -1.0 },
            0.1,
            2.0,
        );
        let sp = SmearedProblem::with_default_grid(base, 0.01).unwrap();
        let s = smeared_solve(&sp).unwrap();
        assert!((s.t_cross() - 0.0649044054028877).abs() < 1e-3, "{}", s.t_cross());
        assert!(s.flux_residual < 1e-6, "{}", s.flux_residual);
    }

    #[test]
    fn grid_invariants_are_enforced() {
        let base = fig_const(6.0);
        let tight = Grid { x_min: -0.05, x_max: 40.0, step: 1e-3 };
        assert!(matches!(SmearedProblem::new(base.clone(), 0.01, tight), Err(Error::GridUnderresolved(_))));
        let short = Grid { x_min: -1.0, x_max: 1.0, step: 1e-3 };
        assert!(matches!(SmearedProblem::new(base.clone(), 0.01, short), Err(Error::GridUnderresolved(_))));
        let coarse = Grid { x_min: -30.0, x_max: 30.0, step: 0.02 };
        assert!(matches!(SmearedProblem::new(base, 0.01, coarse), Err(Error::GridUnderresolved(_))));
    }

    #[test]
    fn coarse_grid_fails_the_asymptotic_fit() {
        // resolves σ but not the wavelength at this energy
        let base = fig_const(4000.0);
        let sp = SmearedProblem::new(base, 0.5, Grid { x_min: -10.0, x_max: 10.0, step: 0.1 }).unwrap();
        assert!(matches!(smeared_solve(&sp), Err(Error::GridUnderresolved(_))));
    }
}
