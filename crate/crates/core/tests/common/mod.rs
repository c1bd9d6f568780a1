#![allow(dead_code)]

use deltacouple::{validate_problem, CouplingPoint, Incident, PotentialSpec, Side, StarProblem};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn constant(v: f64) -> PotentialSpec {
    PotentialSpec::Constant { offset: v }
}

fn signed(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    let v = rng.gen_range(lo..hi);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

pub fn random_channel(rng: &mut impl Rng, constant_only: bool) -> PotentialSpec {
    match if constant_only { 0 } else { rng.gen_range(0..3) } {
        0 => constant(rng.gen_range(-1.0..3.0)),
        1 => PotentialSpec::Linear { slope: signed(rng, 0.3, 1.5) },
        _ => PotentialSpec::Exponential { amplitude: rng.gen_range(0.3..2.0), rate: signed(rng, 0.5, 1.5) },
    }
}

/// A valid star with `n` channels: random kinds, positions in [-1, 1] with
/// occasional shared points, and an open incident side.
pub fn random_star(rng: &mut impl Rng, n: usize, constant_only: bool) -> StarProblem {
    loop {
        let channels: Vec<PotentialSpec> = (0..n).map(|_| random_channel(rng, constant_only)).collect();
        let mut couplings: Vec<CouplingPoint> = Vec::with_capacity(n - 1);
        for _ in 1..n {
            let position = match couplings.last() {
                Some(c) if rng.gen_bool(0.3) => c.position,
                _ => rng.gen_range(-1.0..1.0),
            };
            couplings.push(CouplingPoint::new(position, rng.gen_range(0.0..1.5)));
        }
        let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
        let p = StarProblem {
            channels,
            couplings,
            mass: rng.gen_range(0.5..2.0),
            hbar: rng.gen_range(0.7..1.3),
            energy: rng.gen_range(0.5..4.0),
            incident: Incident::new(rng.gen_range(1..=n), side),
        };
        if validate_problem(&p).is_ok() {
            return p;
        }
    }
}

pub fn all_constant(p: &StarProblem) -> bool {
    p.channels.iter().all(|c| matches!(c, PotentialSpec::Constant { .. }))
}

pub fn tolerance(p: &StarProblem) -> f64 {
    if all_constant(p) {
        1e-10
    } else {
        1e-8
    }
}

/// Largest gap between two sets of outgoing probabilities.
pub fn probability_gap(a: &deltacouple::ScatteringSolution, b: &deltacouple::ScatteringSolution) -> f64 {
    let mut gap: f64 = 0.0;
    for (x, y) in a.probabilities.outgoing.iter().zip(&b.probabilities.outgoing) {
        for (u, v) in x.iter().zip(y) {
            match (u, v) {
                (Some(u), Some(v)) => gap = gap.max((u - v).abs()),
                (None, None) => {}
                _ => return f64::INFINITY,
            }
        }
    }
    gap
}
