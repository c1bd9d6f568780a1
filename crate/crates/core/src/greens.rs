//! Green's-function route.
//!
//! Each uncoupled channel has a bare outgoing-wave kernel
//! `G⁰(x, x′) = (2m/ħ²)·u_<(x_<)·u_>(x_>)/W[u_<, u_>]`. A spoke coupled to
//! the hub at `x_n` with strength `K_n` acts on the hub as a point potential
//! `Σ_n δ(x − x_n)` with `Σ_n = K_n²·G_n⁰(x_n, x_n)`, which dresses the hub
//! kernel in closed form:
//!
//! `G(x, x′) = H(x, x′) + Σ_n H(x, x_n) H(x_n, x′) / (1 − Σ_n H(x_n, x_n))`.
//!
//! Folding the spokes in one at a time gives the fully dressed hub kernel.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcher::{BasisSolution, ChannelBasis};
use crate::model::{validate_problem, ChannelClass, PotentialSpec, Side, StarProblem};
use crate::solution::{ChannelAmplitudes, ScatteringSolution, SideAmplitude};

/// Denominators below this magnitude are reported as poles.
pub const POLE_TOLERANCE: f64 = 1e-12;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Bare,
    TwoStateComposed,
    /// Dressed by spokes up to and including channel `n` (1-based).
    ChainComposed(usize),
}

#[derive(Debug, Clone)]
pub struct GreenFn {
    energy: f64,
    mass: f64,
    hbar: f64,
    node: Node,
}

#[derive(Debug, Clone)]
enum Node {
    Bare {
        spec: PotentialSpec,
        basis: ChannelBasis,
        /// `2m / (ħ² W[u_<, u_>])`
        scale: Complex64,
    },
    Dressed {
        hub: Box<GreenFn>,
        spoke: Box<GreenFn>,
        strength: f64,
        position: f64,
        sigma: Complex64,
        stage: Option<usize>,
    },
}

impl GreenFn {
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn construction(&self) -> Construction {
        match &self.node {
            Node::Bare { .. } => Construction::Bare,
            Node::Dressed { stage: None, .. } => Construction::TwoStateComposed,
            Node::Dressed { stage: Some(n), .. } => Construction::ChainComposed(*n),
        }
    }

    /// Potential of the channel this kernel propagates in (the hub, once dressed).
    pub fn channel(&self) -> &PotentialSpec {
        match &self.node {
            Node::Bare { spec, .. } => spec,
            Node::Dressed { hub, .. } => hub.channel(),
        }
    }

    pub fn evaluate(&self, x: f64, xp: f64) -> Result<Complex64> {
        Ok(self.block(&[x], &[xp])?[(0, 0)])
    }

    /// `G(rows[i], cols[j])` for all pairs. Each dressing level needs its hub
    /// on one extra point, so this costs O(N) kernel matrices rather than
    /// 3^N point evaluations.
    pub fn block(&self, rows: &[f64], cols: &[f64]) -> Result<DMatrix<Complex64>> {
        match &self.node {
            Node::Bare { basis, scale, .. } => {
                let lo = basis.outgoing(Side::Left);
                let hi = basis.outgoing(Side::Right);
                let at = |b: &BasisSolution, xs: &[f64]| xs.iter().map(|&x| b.value_at(x)).collect::<Result<Vec<_>>>();
                let (rl, rh, cl, ch) = (at(lo, rows)?, at(hi, rows)?, at(lo, cols)?, at(hi, cols)?);
                Ok(DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
                    if rows[i] <= cols[j] {
                        scale * rl[i] * ch[j]
                    } else {
                        scale * cl[j] * rh[i]
                    }
                }))
            }
            Node::Dressed { hub, position, sigma, stage, .. } => {
                let mut r = rows.to_vec();
                let mut c = cols.to_vec();
                r.push(*position);
                c.push(*position);
                let h = hub.block(&r, &c)?;
                let (pr, pc) = (rows.len(), cols.len());
                let den = ONE - sigma * h[(pr, pc)];
                check_pole(den, *stage)?;
                let f = sigma / den;
                Ok(DMatrix::from_fn(pr, pc, |i, j| h[(i, j)] + f * h[(i, pc)] * h[(pr, j)]))
            }
        }
    }

    fn bare_parts(&self) -> Option<(&ChannelBasis, Complex64)> {
        match &self.node {
            Node::Bare { basis, scale, .. } => Some((basis, *scale)),
            Node::Dressed { .. } => None,
        }
    }

    /// The undressed hub and the spokes in folding order.
    fn unfold(&self) -> (&GreenFn, Vec<(&GreenFn, f64, f64)>) {
        match &self.node {
            Node::Bare { .. } => (self, Vec::new()),
            Node::Dressed { hub, spoke, strength, position, .. } => {
                let (bare, mut spokes) = hub.unfold();
                spokes.push((spoke, *strength, *position));
                (bare, spokes)
            }
        }
    }
}

fn check_pole(den: Complex64, stage: Option<usize>) -> Result<()> {
    let magnitude = den.norm();
    if magnitude >= POLE_TOLERANCE {
        return Ok(());
    }
    Err(match stage {
        Some(stage) => Error::StagePole { stage, magnitude },
        None => Error::ComposedPole { magnitude },
    })
}

/// Outgoing-wave kernel of one uncoupled channel.
pub fn bare_green(spec: &PotentialSpec, energy: f64, mass: f64, hbar: f64) -> Result<GreenFn> {
    let basis = ChannelBasis::new(spec, energy, mass, hbar)?;
    let w = basis.outgoing(Side::Left).wronskian(basis.outgoing(Side::Right));
    if w.norm() == 0.0 || !w.is_finite() {
        return Err(Error::DefectiveBasis);
    }
    let scale = 2.0 * mass / (hbar * hbar) / w;
    Ok(GreenFn { energy, mass, hbar, node: Node::Bare { spec: *spec, basis, scale } })
}

fn dress(hub: GreenFn, spoke: GreenFn, strength: f64, position: f64, stage: Option<usize>) -> Result<GreenFn> {
    if hub.energy != spoke.energy || hub.mass != spoke.mass || hub.hbar != spoke.hbar {
        return Err(Error::InvalidField {
            field: "green function",
            reason: "hub and spoke built at different energy or units".into(),
        });
    }
    let sigma = strength * strength * spoke.evaluate(position, position)?;
    let den = ONE - sigma * hub.evaluate(position, position)?;
    check_pole(den, stage)?;
    let (energy, mass, hbar) = (hub.energy, hub.mass, hub.hbar);
    let node = Node::Dressed { hub: Box::new(hub), spoke: Box::new(spoke), strength, position, sigma, stage };
    Ok(GreenFn { energy, mass, hbar, node })
}

/// Channel-1 kernel dressed by a single spoke at `x_c`.
pub fn compose_two_state(g1: GreenFn, g2: GreenFn, strength: f64, x_c: f64) -> Result<GreenFn> {
    dress(g1, g2, strength, x_c, None)
}

/// Hub kernel dressed by every spoke in turn; stage `n` folds channel `n`
/// (the first spoke is stage 2).
pub fn compose_chain(hub: GreenFn, spokes: Vec<(GreenFn, f64, f64)>) -> Result<GreenFn> {
    spokes
        .into_iter()
        .enumerate()
        .try_fold(hub, |g, (i, (spoke, k, x))| dress(g, spoke, k, x, Some(i + 2)))
}

/// Solution of the bare channel with a unit wave incoming on `side`:
/// `u_in + r·u_out` on that side, `t·u_far` on the other. Returns `(r, t)`.
fn free_scattering(basis: &ChannelBasis, side: Side) -> Result<(Complex64, Complex64)> {
    let inc = basis.incoming(side).ok_or(Error::DefectiveBasis)?;
    let out = basis.outgoing(side);
    let far = basis.outgoing(side.opposite());
    // inc + r·out − t·far = 0 in coefficient space
    let [a, b] = inc.coeffs;
    let (o, f) = (out.coeffs, far.coeffs);
    let det = -o[0] * f[1] + f[0] * o[1];
    if det.norm() == 0.0 {
        return Err(Error::DefectiveBasis);
    }
    let r = (a * f[1] - f[0] * b) / det;
    let t = (a * o[1] - o[0] * b) / det;
    Ok((r, t))
}

/// Amplitudes and probabilities from a fully dressed hub kernel.
///
/// With `V = Σ_n Σ_n δ(x − x_n)`, hub incidence gives
/// `ψ₁ = ψ₀ + G V ψ₀`, and spoke wavefunctions follow from
/// `ψ_n(x) = K_n G_n⁰(x, x_n) ψ₁(x_n)`. Far-field coefficients are read off
/// `ψ₁ = ψ₀ + G₁⁰ V ψ₁` exactly, without evaluating any asymptotics.
pub fn extract_solution(g: &GreenFn, p: &StarProblem) -> Result<ScatteringSolution> {
    let checked = validate_problem(p)?;
    let (hub, spokes) = g.unfold();
    let consistent = g.energy == p.energy
        && g.mass == p.mass
        && g.hbar == p.hbar
        && spokes.len() + 1 == p.n_channels()
        && *hub.channel() == p.channels[0]
        && spokes.iter().zip(&p.couplings).zip(&p.channels[1..]).all(|(((s, k, x), c), spec)| {
            *k == c.strength && *x == c.position && *s.channel() == *spec
        });
    if !consistent {
        return Err(Error::InvalidField {
            field: "green function",
            reason: "composition does not match the problem".into(),
        });
    }
    let (hub_basis, hub_scale) = hub.bare_parts().ok_or(Error::DefectiveBasis)?;
    let bare: Vec<(&ChannelBasis, Complex64)> = spokes
        .iter()
        .map(|(s, _, _)| s.bare_parts().ok_or(Error::DefectiveBasis))
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = p.couplings.iter().map(|c| c.position).collect();
    let ks: Vec<f64> = p.couplings.iter().map(|c| c.strength).collect();
    let n_spokes = xs.len();
    let sigma: Vec<Complex64> = spokes
        .iter()
        .zip(&xs)
        .zip(&ks)
        .map(|(((s, _, _), &x), &k)| Ok(k * k * s.evaluate(x, x)?))
        .collect::<Result<_>>()?;
    let full = g.block(&xs, &xs)?;

    let inc = p.incident;
    let inc_side = inc.side;
    let n = p.n_channels();
    // free-channel reflection/transmission for the incident channel
    let (r0, t0) = if inc.channel == 1 {
        free_scattering(hub_basis, inc_side)?
    } else {
        free_scattering(bare[inc.channel - 2].0, inc_side)?
    };
    // ψ₀ for the incident channel equals t0·u_far everywhere
    let psi0_inc = |x: f64| -> Result<Complex64> {
        let basis = if inc.channel == 1 { hub_basis } else { bare[inc.channel - 2].0 };
        Ok(t0 * basis.outgoing(inc_side.opposite()).value_at(x)?)
    };

    // hub wavefunction at every coupling point
    let psi1: Vec<Complex64> = if inc.channel == 1 {
        let psi0: Vec<Complex64> = xs.iter().map(|&x| psi0_inc(x)).collect::<Result<_>>()?;
        (0..n_spokes)
            .map(|i| psi0[i] + (0..n_spokes).map(|j| full[(i, j)] * sigma[j] * psi0[j]).sum::<Complex64>())
            .collect()
    } else {
        let s = inc.channel - 2;
        let source = ks[s] * psi0_inc(xs[s])?;
        (0..n_spokes).map(|i| full[(i, s)] * source).collect()
    };

    // Point sources seen by the bare hub: Σ_n ψ₁(x_n), plus K_s ψ₀_s(x_s) on spoke incidence.
    let mut sources: Vec<(f64, Complex64)> = (0..n_spokes).map(|i| (xs[i], sigma[i] * psi1[i])).collect();
    if inc.channel != 1 {
        let s = inc.channel - 2;
        sources.push((xs[s], ks[s] * psi0_inc(xs[s])?));
    }

    let far_coeffs = |basis: &ChannelBasis, scale: Complex64, src: &[(f64, Complex64)]| -> Result<[Complex64; 2]> {
        // left of every source G⁰ ∝ u_<(x)·u_>(x_n); right of every source ∝ u_>(x)·u_<(x_n)
        let mut left = ZERO;
        let mut right = ZERO;
        for &(x, q) in src {
            left += scale * basis.outgoing(Side::Right).value_at(x)? * q;
            right += scale * basis.outgoing(Side::Left).value_at(x)? * q;
        }
        Ok([left, right])
    };

    let mut coeffs: Vec<[Complex64; 2]> = Vec::with_capacity(n);
    coeffs.push(far_coeffs(hub_basis, hub_scale, &sources)?);
    for i in 0..n_spokes {
        let (basis, scale) = bare[i];
        coeffs.push(far_coeffs(basis, scale, &[(xs[i], ks[i] * psi1[i])])?);
    }
    let c = &mut coeffs[inc.channel - 1];
    c[inc_side.index()] += r0;
    c[inc_side.opposite().index()] += t0;

    let basis_of = |ch: usize| if ch == 0 { hub_basis } else { bare[ch - 1].0 };
    let inc_basis = basis_of(inc.channel - 1);
    let incoming_flux = inc_basis.incoming(inc_side).ok_or(Error::DefectiveBasis)?.flux.abs();

    let mut channels = Vec::with_capacity(n);
    let mut fluxes = Vec::with_capacity(n);
    for (ch, c) in coeffs.iter().enumerate() {
        let basis = basis_of(ch);
        let side_amp = |side: Side| {
            let class = checked.status(ch, side).class;
            let incoming = if ch + 1 == inc.channel && side == inc_side { ONE } else { ZERO };
            SideAmplitude { incoming, outgoing: c[side.index()], class }
        };
        let flux = Side::BOTH.map(|side| match checked.status(ch, side).class {
            ChannelClass::Open { .. } => Some(c[side.index()].norm_sqr() * basis.outgoing(side).flux.abs()),
            _ => None,
        });
        channels.push(ChannelAmplitudes { left: side_amp(Side::Left), right: side_amp(Side::Right), interior: Vec::new() });
        fluxes.push(flux);
    }
    Ok(ScatteringSolution::new(p.energy, p.incident, channels, incoming_flux, &fluxes, None))
}

/// Build every bare kernel, dress the hub and extract the solution.
pub fn solve_star(p: &StarProblem) -> Result<ScatteringSolution> {
    validate_problem(p)?;
    let (e, m, h) = (p.energy, p.mass, p.hbar);
    let hub = bare_green(&p.channels[0], e, m, h)?;
    let spokes = p.channels[1..]
        .iter()
        .zip(&p.couplings)
        .map(|(spec, c)| Ok((bare_green(spec, e, m, h)?, c.strength, c.position)))
        .collect::<Result<Vec<_>>>()?;
    let g = compose_chain(hub, spokes)?;
    extract_solution(&g, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CouplingPoint, Incident};

    fn constant(v: f64) -> PotentialSpec {
        PotentialSpec::Constant { offset: v }
    }

    fn bare(spec: PotentialSpec, e: f64) -> GreenFn {
        bare_green(&spec, e, 1.0, 1.0).unwrap()
    }

    fn star(specs: Vec<PotentialSpec>, couplings: Vec<(f64, f64)>, e: f64) -> StarProblem {
        StarProblem {
            channels: specs,
            couplings: couplings.into_iter().map(|(x, k)| CouplingPoint::new(x, k)).collect(),
            mass: 1.0,
            hbar: 1.0,
            energy: e,
            incident: Incident::default(),
        }
    }

    #[test]
    fn free_constant_kernel() {
        let g = bare(constant(0.0), 6.0);
        let g00 = g.evaluate(0.0, 0.0).unwrap();
        assert!((g00 - Complex64::new(0.0, -1.0 / 12f64.sqrt())).norm() < 1e-15);
        let k = 12f64.sqrt();
        let expect = Complex64::new(0.0, -1.0 / k) * Complex64::new(0.0, k * 1.3).exp();
        assert!((g.evaluate(0.4, -0.9).unwrap() - expect).norm() < 1e-14);
        assert_eq!(g.construction(), Construction::Bare);
    }

    /// (ħ²/2m)G″ + (E − V)G by central differences, away from the source.
    fn defect(g: &GreenFn, spec: &PotentialSpec, x: f64, xp: f64, h: f64) -> f64 {
        let e = g.energy();
        let f = |y| g.evaluate(y, xp).unwrap();
        let second = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        (0.5 * second + (e - spec.value(x)) * f(x)).norm()
    }

    #[test]
    fn bare_kernels_solve_the_defect_equation() {
        let specs = [
            (constant(0.0), 6.0),
            (constant(5.0), 3.0),
            (PotentialSpec::Linear { slope: 1.0 }, 1.0),
            (PotentialSpec::Linear { slope: -0.5 }, 2.0),
            (PotentialSpec::Exponential { amplitude: 1.0, rate: 1.0 }, 2.0),
        ];
        for (spec, e) in specs {
            let g = bare(spec, e);
            let coarse = defect(&g, &spec, 0.8, -0.3, 1e-2);
            let fine = defect(&g, &spec, 0.8, -0.3, 5e-3);
            let scale = g.evaluate(0.8, -0.3).unwrap().norm();
            assert!(fine < 1e-3 * scale.max(1e-3), "{spec:?}: {fine}");
            assert!(fine < coarse / 3.0 || fine < 1e-9, "{spec:?}: {coarse} -> {fine}");
            // the source produces a derivative jump 2m/ħ²
            let d = 1e-7;
            let dg = |x: f64| (g.evaluate(x + d, 0.2).unwrap() - g.evaluate(x - d, 0.2).unwrap()) / (2.0 * d);
            let jump = dg(0.2 + 1e-5) - dg(0.2 - 1e-5);
            assert!((jump - 2.0).norm() < 1e-3, "{spec:?}: {jump}");
        }
    }

    #[test]
    fn kernels_are_symmetric() {
        let g1 = bare(constant(0.0), 6.0);
        let g2 = bare(PotentialSpec::Exponential { amplitude: 1.0, rate: -1.0 }, 6.0);
        let composed = compose_two_state(g1.clone(), g2.clone(), 0.8, 0.3).unwrap();
        for g in [&g1, &g2, &composed] {
            let a = g.evaluate(1.0, 2.0).unwrap();
            let b = g.evaluate(2.0, 1.0).unwrap();
            assert!((a - b).norm() < 1e-12 * a.norm());
        }
    }

    #[test]
    fn linear_kernel_is_real_in_forbidden_region() {
        let g = bare(PotentialSpec::Linear { slope: 1.0 }, 1.0);
        let v = g.evaluate(6.5, 7.0).unwrap();
        assert!(v.im.abs() < 1e-6 * v.re.abs(), "{v}");
    }

    #[test]
    fn zero_coupling_leaves_kernel_unchanged() {
        let g1 = bare(constant(0.0), 6.0);
        let g = compose_two_state(g1.clone(), bare(constant(5.0), 6.0), 0.0, 0.0).unwrap();
        for (x, xp) in [(0.0, 0.0), (-1.0, 2.0), (3.0, 0.5)] {
            assert_eq!(g.evaluate(x, xp).unwrap(), g1.evaluate(x, xp).unwrap());
        }
    }

    #[test]
    fn composed_kernel_satisfies_fixed_point() {
        // G(x_c, x′) = G₁(x_c, x′) + Σ G₁(x_c, x_c) G(x_c, x′)
        let g1 = bare(constant(0.0), 6.0);
        let g2 = bare(constant(5.0), 6.0);
        let sigma = g2.evaluate(0.0, 0.0).unwrap();
        let g = compose_two_state(g1.clone(), g2, 1.0, 0.0).unwrap();
        for xp in [-2.0, -0.3, 0.7, 1.9] {
            let lhs = g.evaluate(0.0, xp).unwrap();
            let rhs = g1.evaluate(0.0, xp).unwrap() + sigma * g1.evaluate(0.0, 0.0).unwrap() * lhs;
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_pair_reflection() {
        let p = StarProblem::two_state(constant(0.0), constant(5.0), 1.0, 6.0);
        let s = solve_star(&p).unwrap();
        let (k1, k2) = (12f64.sqrt(), 2f64.sqrt());
        let b = -1.0 / (k1 * k2 + 1.0);
        assert!((s.channels[0].left.outgoing - b).norm() < 1e-12);
        assert!((s.t_cross() - 0.281568).abs() < 1e-6);
        assert!(s.flux_residual < 1e-13);
    }

    #[test]
    fn zero_coupling_is_free_motion() {
        let p = StarProblem::two_state(constant(0.0), constant(5.0), 0.0, 6.0);
        let s = solve_star(&p).unwrap();
        assert_eq!(s.t_cross(), 0.0);
        assert_eq!(s.channels[0].left.outgoing, ZERO);
        assert!((s.channels[0].right.outgoing - ONE).norm() < 1e-15);
    }

    #[test]
    fn matches_matcher_on_mixed_problems() {
        let problems = [
            StarProblem::two_state(
                PotentialSpec::Exponential { amplitude: 1.0, rate: 1.0 },
                PotentialSpec::Exponential { amplitude: 1.0, rate: -1.0 },
                0.1,
                2.0,
            ),
            star(
                vec![
                    constant(0.0),
                    PotentialSpec::Linear { slope: 1.0 },
                    PotentialSpec::Exponential { amplitude: 1.0, rate: -1.0 },
                ],
                vec![(0.0, 0.5), (0.5, 0.4)],
                2.0,
            ),
            star(vec![constant(0.0), constant(1.0), constant(0.5)], vec![(0.0, 1.0), (0.3, 0.6)], 2.0)
                .with_incident(3, Side::Right),
            star(vec![PotentialSpec::Linear { slope: -1.0 }, constant(0.5)], vec![(0.2, 0.9)], 1.5)
                .with_incident(1, Side::Right),
        ];
        for p in problems {
            let a = solve_star(&p).unwrap();
            let b = crate::matcher::solve_star(&p).unwrap();
            for (oa, ob) in a.probabilities.outgoing.iter().zip(&b.probabilities.outgoing) {
                for (x, y) in oa.iter().zip(ob) {
                    match (x, y) {
                        (Some(x), Some(y)) => assert!((x - y).abs() < 1e-9, "{x} vs {y}"),
                        (None, None) => {}
                        _ => panic!("open/closed mismatch"),
                    }
                }
            }
            assert!(a.flux_residual < 1e-8);
        }
    }

    #[test]
    fn chain_with_one_spoke_equals_two_state() {
        let g1 = bare(constant(0.0), 6.0);
        let g2 = bare(constant(5.0), 6.0);
        let two = compose_two_state(g1.clone(), g2.clone(), 1.0, 0.2).unwrap();
        let chain = compose_chain(g1, vec![(g2, 1.0, 0.2)]).unwrap();
        assert_eq!(chain.construction(), Construction::ChainComposed(2));
        assert_eq!(two.construction(), Construction::TwoStateComposed);
        for (x, xp) in [(0.0, 0.0), (-1.0, 2.0)] {
            assert!((two.evaluate(x, xp).unwrap() - chain.evaluate(x, xp).unwrap()).norm() < 1e-15);
        }
    }

    #[test]
    fn identical_spokes_act_as_one_stronger_spoke() {
        let hub = bare(constant(0.0), 6.0);
        let spoke = bare(constant(5.0), 6.0);
        let chain = compose_chain(hub.clone(), vec![(spoke.clone(), 1.0, 0.0), (spoke.clone(), 1.0, 0.0)]).unwrap();
        let single = compose_two_state(hub, spoke, 2f64.sqrt(), 0.0).unwrap();
        for (x, xp) in [(0.0, 0.0), (-1.0, -0.5), (2.0, -3.0)] {
            assert!((chain.evaluate(x, xp).unwrap() - single.evaluate(x, xp).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn spoke_order_is_irrelevant() {
        let specs = [(constant(1.0), 0.7, 0.0), (constant(-2.0), 1.2, 0.4), (constant(3.5), 0.3, -0.6)];
        let build = |order: [usize; 3]| {
            let spokes = order.iter().map(|&i| (bare(specs[i].0, 6.0), specs[i].1, specs[i].2)).collect();
            compose_chain(bare(constant(0.0), 6.0), spokes).unwrap()
        };
        let a = build([0, 1, 2]);
        let b = build([2, 0, 1]);
        for (x, xp) in [(0.0, 0.0), (-1.0, 0.5), (0.4, -0.6)] {
            let (u, v) = (a.evaluate(x, xp).unwrap(), b.evaluate(x, xp).unwrap());
            assert!((u - v).norm() < 1e-11 * u.norm().max(1.0));
        }
    }

    #[test]
    fn pole_is_reported() {
        // both channels closed: the dressed kernel has a bound-state pole
        let e_star = (20.0 - 416f64.sqrt()) / 8.0;
        let g1 = bare(constant(0.0), e_star);
        let g2 = bare(constant(5.0), e_star);
        let sigma = g2.evaluate(0.0, 0.0).unwrap();
        let den = ONE - sigma * g1.evaluate(0.0, 0.0).unwrap();
        assert!(den.norm() < 1e-14, "{den}");
        assert!(matches!(compose_two_state(g1.clone(), g2.clone(), 1.0, 0.0), Err(Error::ComposedPole { .. })));
        assert!(matches!(compose_chain(g1, vec![(g2, 1.0, 0.0)]), Err(Error::StagePole { stage: 2, .. })));
    }

    #[test]
    fn mismatched_problem_is_rejected() {
        let p = StarProblem::two_state(constant(0.0), constant(5.0), 1.0, 6.0);
        let g = compose_two_state(bare(constant(0.0), 6.0), bare(constant(5.0), 6.0), 0.5, 0.0).unwrap();
        assert!(extract_solution(&g, &p).is_err());
    }
}
