//! Finite-difference coupled-channel solver with Gaussian couplings.
//!
//! The delta couplings are replaced by `K_n·N_σ(x − x_n)`, the coupled
//! equations are discretized with the three-point Laplacian and solved by
//! block tridiagonal elimination. At each grid end every channel is written
//! as (known incoming) + c·(exact outgoing or decaying solution), which
//! closes the system through a ghost point. Runs at `h` and `h/2` are
//! combined by Richardson extrapolation.

use num_complex::Complex64;

use super::exact::{side_set, SideSet};
use crate::error::{Error, Result};
use crate::model::{validate_problem, CheckedProblem, PotentialSpec, Side, StarProblem};
use crate::solution::{ChannelAmplitudes, ScatteringSolution, SideAmplitude};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Largest accepted mismatch between the grid solution and its analytic form
/// next to the grid ends.
pub const FIT_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub step: f64,
}

impl Grid {
    /// Number of intervals; the step is shrunk so that they fit exactly.
    fn intervals(&self) -> usize {
        ((self.x_max - self.x_min) / self.step).ceil() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmearedProblem {
    pub base: StarProblem,
    pub width: f64,
    pub grid: Grid,
}

fn gaussian(x: f64, sigma: f64) -> f64 {
    (-0.5 * (x / sigma).powi(2)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
}

fn underresolved(msg: impl Into<String>) -> Error {
    Error::GridUnderresolved(msg.into())
}

/// `∫ √(2m(V − E))/ħ dx` from the turning point `from` to `to`.
fn tunnelling_exponent(spec: &PotentialSpec, energy: f64, mass: f64, hbar: f64, from: f64, to: f64) -> f64 {
    let n = 400;
    let h = (to - from) / n as f64;
    let f = |x: f64| (2.0 * mass * (spec.value(x) - energy).max(0.0)).sqrt() / hbar;
    let inner: f64 = (1..n).map(|i| f(from + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (h / 3.0 * (f(from) + inner + f(to))).abs()
}

/// Classical turning point of a diverging wall.
fn turning_point(spec: &PotentialSpec, energy: f64) -> Option<f64> {
    match *spec {
        PotentialSpec::Linear { slope } => Some(energy / slope),
        PotentialSpec::Exponential { amplitude, rate } if energy > 0.0 => Some((energy / amplitude).ln() / rate),
        _ => None,
    }
}

fn wall_side(spec: &PotentialSpec) -> Option<Side> {
    match *spec {
        PotentialSpec::Linear { slope } => Some(if slope > 0.0 { Side::Right } else { Side::Left }),
        PotentialSpec::Exponential { rate, .. } => Some(if rate > 0.0 { Side::Right } else { Side::Left }),
        PotentialSpec::Constant { .. } => None,
    }
}

impl SmearedProblem {
    pub fn new(base: StarProblem, width: f64, grid: Grid) -> Result<Self> {
        let sp = Self { base, width, grid };
        sp.check()?;
        Ok(sp)
    }

    /// Step `σ/20` and grid ends placed by [`Self::default_grid`].
    pub fn with_default_grid(base: StarProblem, width: f64) -> Result<Self> {
        let grid = Self::default_grid(&base, width, width / 20.0)?;
        Self::new(base, width, grid)
    }

    /// Grid ends far enough out for every channel: ten wavelengths across
    /// for open constant channels, several decay lengths for closed ones,
    /// and a tunnelling exponent of 8 past the turning point of walls
    /// (capped where Bessel arguments leave their validated range).
    pub fn default_grid(base: &StarProblem, width: f64, step: f64) -> Result<Grid> {
        let checked = validate_problem(base)?;
        let (first, last) = coupling_span(&checked);
        let (e, m, hb) = (base.energy, base.mass, base.hbar);
        let mut reach = [1.0 + 10.0 * width; 2];
        let mut cap = [f64::INFINITY; 2];
        for spec in &base.channels {
            for side in Side::BOTH {
                let dir = if side == Side::Left { -1.0 } else { 1.0 };
                let edge = if side == Side::Left { first } else { last };
                let need = match *spec {
                    PotentialSpec::Constant { offset } => {
                        let q = (2.0 * m * (e - offset).abs()).sqrt() / hb;
                        if e > offset {
                            // a little over the ten wavelengths the check demands
                            5.5 * 2.0 * std::f64::consts::PI / q
                        } else {
                            8.0 / q
                        }
                    }
                    _ if wall_side(spec) == Some(side) => {
                        let tp = turning_point(spec, e).unwrap_or(edge);
                        let start = if (tp - edge) * dir > 0.0 { tp } else { edge };
                        let mut d = (start - edge) * dir + 0.25;
                        while tunnelling_exponent(spec, e, m, hb, start, edge + dir * d) < 8.0 && d < 200.0 {
                            d += 0.25;
                        }
                        if let PotentialSpec::Exponential { amplitude, rate } = *spec {
                            // ξ = (2√(2mV₀)/(|a|ħ))·e^{ax/2} must stay below ~55
                            let c = 2.0 * (2.0 * m * amplitude).sqrt() / (rate.abs() * hb);
                            let x_cap = 2.0 / rate * (55.0 / c).ln();
                            cap[side.index()] = cap[side.index()].min((x_cap - edge) * dir);
                        }
                        d
                    }
                    _ => 1.0,
                };
                reach[side.index()] = reach[side.index()].max(need);
            }
        }
        let [l, r] = [0, 1].map(|i| reach[i].min(cap[i]));
        Ok(Grid { x_min: first - l, x_max: last + r, step })
    }

    fn check(&self) -> Result<()> {
        let p = validate_problem(&self.base)?;
        let Grid { x_min, x_max, step } = self.grid;
        let sigma = self.width;
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidField { field: "width", reason: format!("must be positive, got {sigma}") });
        }
        if !(step > 0.0 && x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidField { field: "grid", reason: "need x_min < x_max and step > 0".into() });
        }
        let (first, last) = coupling_span(&p);
        if first - x_min < 10.0 * sigma || x_max - last < 10.0 * sigma {
            return Err(underresolved("grid must extend 10σ beyond every coupling point"));
        }
        let h = (x_max - x_min) / self.grid.intervals() as f64;
        for c in &p.couplings {
            let integral: f64 = (0..=self.grid.intervals())
                .map(|i| gaussian(x_min + i as f64 * h - c.position, sigma))
                .sum::<f64>()
                * h;
            if (integral - 1.0).abs() > 1e-12 {
                return Err(underresolved(format!("step {h} does not resolve σ = {sigma}")));
            }
        }
        let (e, m, hb) = (p.energy, p.mass, p.hbar);
        for spec in &p.channels {
            match *spec {
                PotentialSpec::Constant { offset } => {
                    let q = (2.0 * m * (e - offset).abs()).sqrt() / hb;
                    if e > offset && (x_max - x_min) * q < 20.0 * std::f64::consts::PI {
                        return Err(underresolved("grid spans fewer than ten wavelengths"));
                    }
                    if e < offset && (first - x_min).min(x_max - last) * q < 5.0 {
                        return Err(underresolved("grid ends within five decay lengths of a coupling"));
                    }
                }
                _ => {
                    let side = wall_side(spec).expect("walls have a rising side");
                    let end = if side == Side::Left { x_min } else { x_max };
                    let tp = turning_point(spec, e).unwrap_or(f64::NAN);
                    let beyond = if side == Side::Left { end < tp } else { end > tp };
                    if !beyond || tunnelling_exponent(spec, e, m, hb, tp, end) < 5.0 {
                        return Err(underresolved("grid ends less than five decay lengths past a turning point"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn coupling_span(p: &CheckedProblem) -> (f64, f64) {
    let xs = p.couplings.iter().map(|c| c.position);
    (xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max))
}

/// Per-channel far-side coefficients from one grid, plus the flux bookkeeping.
struct GridResult {
    coeffs: Vec<[Complex64; 2]>,
    fluxes: Vec<[Option<f64>; 2]>,
    incoming_flux: f64,
}

/// In-place inverse of a small dense matrix (row-major), partial pivoting.
fn invert(a: &mut [Complex64], n: usize, out: &mut [Complex64]) -> Result<()> {
    out.iter_mut().for_each(|v| *v = ZERO);
    for i in 0..n {
        out[i * n + i] = ONE;
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))
            .expect("nonempty");
        if a[piv * n + col].norm() == 0.0 {
            return Err(Error::SingularSystem { condition: f64::INFINITY });
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
                out.swap(piv * n + k, col * n + k);
            }
        }
        let d = ONE / a[col * n + col];
        for k in 0..n {
            a[col * n + k] *= d;
            out[col * n + k] *= d;
        }
        for r in 0..n {
            if r != col {
                let f = a[r * n + col];
                if f != ZERO {
                    for k in 0..n {
                        let (ak, ok) = (a[col * n + k], out[col * n + k]);
                        a[r * n + k] -= f * ak;
                        out[r * n + k] -= f * ok;
                    }
                }
            }
        }
    }
    Ok(())
}

fn solve_grid(sp: &SmearedProblem, p: &CheckedProblem, intervals: usize) -> Result<GridResult> {
    let n = p.n_channels();
    let (e, m, hb) = (p.energy, p.mass, p.hbar);
    let Grid { x_min, x_max, .. } = sp.grid;
    let h = (x_max - x_min) / intervals as f64;
    let pts = intervals + 1;
    let x_at = |i: usize| x_min + i as f64 * h;
    let inc = p.incident;

    // ends: [left, right] boundary sets for every channel, normalized at the end point
    let ends: Vec<[SideSet; 2]> = p
        .channels
        .iter()
        .map(|spec| Ok([side_set(spec, e, m, hb, Side::Left, x_min)?, side_set(spec, e, m, hb, Side::Right, x_max)?]))
        .collect::<Result<_>>()?;

    // equation scaled by h²: off = −ħ²/2m, diag = ħ²/m + h²(V − E), coupling h²·K·N_σ
    let off = -hb * hb / (2.0 * m);
    let base_diag = hb * hb / m;
    let mut ghost_diag = vec![[ZERO; 2]; n];
    let mut ghost_rhs = vec![[ZERO; 2]; n];
    for ch in 0..n {
        for side in Side::BOTH {
            let (edge, ghost) = match side {
                Side::Left => (x_min, x_min - h),
                Side::Right => (x_max, x_max + h),
            };
            let set = &ends[ch][side.index()];
            let rho = set.free().value(ghost)? / set.free().value(edge)?;
            ghost_diag[ch][side.index()] = off * rho;
            if inc.channel == ch + 1 && inc.side == side {
                let u = set.incoming().ok_or(Error::DefectiveBasis)?;
                ghost_rhs[ch][side.index()] = -off * (u.value(ghost)? - rho * u.value(edge)?);
            }
        }
    }

    let nn = n * n;
    let mut inverses = vec![ZERO; pts * nn];
    let mut y = vec![ZERO; pts * n];
    let mut block = vec![ZERO; nn];
    let mut prev_y = vec![ZERO; n];
    for i in 0..pts {
        let x = x_at(i);
        block.iter_mut().for_each(|v| *v = ZERO);
        for ch in 0..n {
            block[ch * n + ch] = (base_diag + h * h * (p.channels[ch].value(x) - e)).into();
        }
        for (s, c) in p.couplings.iter().enumerate() {
            let w = h * h * c.strength * gaussian(x - c.position, sp.width);
            block[s + 1] += w;
            block[(s + 1) * n] += w;
        }
        let yi = &mut y[i * n..(i + 1) * n];
        yi.iter_mut().for_each(|v| *v = ZERO);
        for ch in 0..n {
            if i == 0 {
                block[ch * n + ch] += ghost_diag[ch][0];
                yi[ch] += ghost_rhs[ch][0];
            }
            if i == pts - 1 {
                block[ch * n + ch] += ghost_diag[ch][1];
                yi[ch] += ghost_rhs[ch][1];
            }
        }
        if i > 0 {
            let prev = &inverses[(i - 1) * nn..i * nn];
            for r in 0..n {
                for c in 0..n {
                    block[r * n + c] -= off * off * prev[r * n + c];
                }
                let t: Complex64 = (0..n).map(|c| prev[r * n + c] * prev_y[c]).sum();
                yi[r] -= off * t;
            }
        }
        prev_y.copy_from_slice(yi);
        let (_, rest) = inverses.split_at_mut(i * nn);
        invert(&mut block, n, &mut rest[..nn])?;
    }
    // back substitution, keeping only the first and last few points
    let keep = 5;
    let mut psi_next = vec![ZERO; n];
    let mut head = vec![vec![ZERO; n]; keep];
    let mut tail = vec![vec![ZERO; n]; keep];
    for i in (0..pts).rev() {
        let inv = &inverses[i * nn..(i + 1) * nn];
        let rhs: Vec<Complex64> = (0..n)
            .map(|r| y[i * n + r] - if i + 1 < pts { off * psi_next[r] } else { ZERO })
            .collect();
        let psi: Vec<Complex64> = (0..n).map(|r| (0..n).map(|c| inv[r * n + c] * rhs[c]).sum()).collect();
        if i < keep {
            head[i] = psi.clone();
        }
        if pts - 1 - i < keep {
            tail[pts - 1 - i] = psi.clone();
        }
        psi_next = psi;
    }

    let mut coeffs = Vec::with_capacity(n);
    let mut fluxes = Vec::with_capacity(n);
    let mut incoming_flux = f64::NAN;
    for ch in 0..n {
        let mut c = [ZERO; 2];
        let mut f = [None, None];
        for side in Side::BOTH {
            let set = &ends[ch][side.index()];
            let samples = if side == Side::Left { &head } else { &tail };
            let at = |j: usize| if side == Side::Left { x_at(j) } else { x_at(pts - 1 - j) };
            let incoming = if inc.channel == ch + 1 && inc.side == side { set.incoming() } else { None };
            let inc_val = |x: f64| incoming.map_or(Ok(ZERO), |u| u.value(x));
            let coeff = samples[0][ch] - inc_val(at(0))?;
            let mut scale: f64 = 0.0;
            let mut worst: f64 = 0.0;
            for j in 0..keep {
                let x = at(j);
                let fit = inc_val(x)? + coeff * set.free().value(x)?;
                scale = scale.max(fit.norm()).max(samples[j][ch].norm());
                worst = worst.max((samples[j][ch] - fit).norm());
            }
            if scale > 0.0 && worst > FIT_TOLERANCE * scale {
                return Err(underresolved(format!(
                    "channel {} {} end deviates from its asymptotic form by {:.2e}",
                    ch + 1,
                    side.name(),
                    worst / scale
                )));
            }
            let edge = at(0);
            if let Some(u) = incoming {
                incoming_flux = u.current(edge, m, hb)?.abs();
            }
            c[side.index()] = coeff;
            if set.is_open() {
                f[side.index()] = Some(coeff.norm_sqr() * set.free().current(edge, m, hb)?.abs());
            }
        }
        coeffs.push(c);
        fluxes.push(f);
    }
    Ok(GridResult { coeffs, fluxes, incoming_flux })
}

/// Solve at the grid step and at half of it, and Richardson-extrapolate
/// amplitudes and outgoing fluxes.
pub fn smeared_solve(sp: &SmearedProblem) -> Result<ScatteringSolution> {
    sp.check()?;
    let p = validate_problem(&sp.base)?;
    let m = sp.grid.intervals();
    let coarse = solve_grid(sp, &p, m)?;
    let fine = solve_grid(sp, &p, 2 * m)?;
    let extrapolate = |a: f64, b: f64| (4.0 * b - a) / 3.0;
    let incoming_flux = fine.incoming_flux;
    let mut channels = Vec::with_capacity(p.n_channels());
    let mut fluxes = Vec::with_capacity(p.n_channels());
    for ch in 0..p.n_channels() {
        let mut sides = Vec::with_capacity(2);
        let mut flux = [None, None];
        for side in Side::BOTH {
            let k = side.index();
            let (a, b) = (coarse.coeffs[ch][k], fine.coeffs[ch][k]);
            let incident = p.incident.channel == ch + 1 && p.incident.side == side;
            sides.push(SideAmplitude {
                incoming: if incident { ONE } else { ZERO },
                outgoing: (4.0 * b - a) / 3.0,
                class: p.status(ch, side).class,
            });
            // fractions of the same incoming flux, extrapolated as such
            flux[k] = match (coarse.fluxes[ch][k], fine.fluxes[ch][k]) {
                (Some(a), Some(b)) => Some(
                    incoming_flux * extrapolate(a / coarse.incoming_flux, b / fine.incoming_flux),
                ),
                _ => None,
            };
        }
        channels.push(ChannelAmplitudes { left: sides[0], right: sides[1], interior: Vec::new() });
        fluxes.push(flux);
    }
    Ok(ScatteringSolution::new(p.energy, p.incident, channels, incoming_flux, &fluxes, None))
}
