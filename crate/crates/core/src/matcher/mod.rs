//! Generic boundary-condition matcher for star-coupled channels.
//!
//! Each channel is written piecewise in exact solutions of its own potential.
//! Continuity of ψ and the delta-induced jump of ψ′ at every coupling point
//! give a square linear system for the unknown amplitudes.

mod basis;

pub use basis::{build_basis, BasisSolution, ChannelBasis, Family, Role};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{validate_problem, ChannelClass, CheckedProblem, Side, StarProblem};
use crate::solution::{ChannelAmplitudes, ScatteringSolution, SideAmplitude};

/// Condition numbers above this are reported as a singular system.
pub const MAX_CONDITION: f64 = 1e12;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Assembled matching equations `matrix · amplitudes = rhs`.
#[derive(Debug, Clone)]
pub struct MatchSystem {
    pub matrix: DMatrix<Complex64>,
    pub rhs: DVector<Complex64>,
    /// Name of each unknown, e.g. `ch1.left` or `ch1.region1.u_right`.
    pub labels: Vec<String>,
    /// 1-norm condition number of the row/column equilibrated matrix.
    pub condition_number: f64,
    layout: Layout,
    row_scale: Vec<f64>,
    col_scale: Vec<f64>,
}

/// Where each channel's unknowns live in the solution vector.
#[derive(Debug, Clone)]
struct Layout {
    /// Sorted distinct coupling positions (hub regions are delimited by these).
    points: Vec<f64>,
    bases: Vec<ChannelBasis>,
    /// Incident channel (0-based) and side, absent for the unforced system.
    incident: Option<(usize, Side)>,
}

impl Layout {
    fn n_points(&self) -> usize {
        self.points.len()
    }

    /// Column of the hub's outgoing (or decaying) coefficient on `side`.
    fn hub_side(&self, side: Side) -> usize {
        match side {
            Side::Left => 0,
            Side::Right => 2 * self.n_points() - 1,
        }
    }

    /// Columns of the interior pair in hub region `r` (1 ≤ r < P).
    fn hub_interior(&self, r: usize) -> (usize, usize) {
        (2 * r - 1, 2 * r)
    }

    /// Column of spoke `n` (1-based channel index − 1) on `side`.
    fn spoke_side(&self, n: usize, side: Side) -> usize {
        2 * self.n_points() + 2 * (n - 1) + side.index()
    }

    fn dim(&self) -> usize {
        2 * self.n_points() + 2 * (self.bases.len() - 1)
    }

    fn incoming(&self, channel: usize, side: Side) -> Option<&BasisSolution> {
        match self.incident {
            Some((c, s)) if c == channel && s == side => self.bases[c].incoming(s),
            _ => None,
        }
    }
}

/// One side of a matching condition: coefficient column and the (value,
/// derivative) of its basis function at the point.
type Term = (usize, (Complex64, Complex64));

impl MatchSystem {
    /// Solve the system, returning amplitudes in `labels` order.
    pub fn solve(&self) -> Result<DVector<Complex64>> {
        let scaled = self.scaled_matrix();
        let b = DVector::from_iterator(
            self.rhs.len(),
            self.rhs.iter().zip(&self.row_scale).map(|(v, s)| v * s),
        );
        let y = scaled
            .lu()
            .solve(&b)
            .ok_or(Error::SingularSystem { condition: f64::INFINITY })?;
        Ok(DVector::from_iterator(y.len(), y.iter().zip(&self.col_scale).map(|(v, s)| v * s)))
    }

    /// Largest entry of `matrix · x − rhs`.
    pub fn residual(&self, x: &DVector<Complex64>) -> f64 {
        (&self.matrix * x - &self.rhs).camax()
    }

    /// Max-abs norm of the unscaled matrix.
    pub fn matrix_norm(&self) -> f64 {
        self.matrix.camax()
    }

    fn scaled_matrix(&self) -> DMatrix<Complex64> {
        let (r, c) = (&self.row_scale, &self.col_scale);
        DMatrix::from_fn(self.matrix.nrows(), self.matrix.ncols(), |i, j| self.matrix[(i, j)] * (r[i] * c[j]))
    }
}

/// Assemble the matching system for a validated problem with its incident
/// wave on the right-hand side.
pub fn assemble(p: &CheckedProblem) -> Result<MatchSystem> {
    let inc = p.incident;
    let sys = build(p.problem(), Some((inc.channel - 1, inc.side)))?;
    if !(sys.condition_number <= MAX_CONDITION) {
        return Err(Error::SingularSystem { condition: sys.condition_number });
    }
    Ok(sys)
}

/// The homogeneous system (no incident wave, no singularity check). Its
/// condition number diverges at bound states and resonances, which makes it
/// usable when no channel is open.
pub fn assemble_unforced(p: &StarProblem) -> Result<MatchSystem> {
    build(p, None)
}

fn build(p: &StarProblem, incident: Option<(usize, Side)>) -> Result<MatchSystem> {
    let n = p.n_channels();
    if p.couplings.len() + 1 != n {
        return Err(Error::CouplingCount { channels: n, couplings: p.couplings.len() });
    }
    let bases = p
        .channels
        .iter()
        .map(|spec| ChannelBasis::new(spec, p.energy, p.mass, p.hbar))
        .collect::<Result<Vec<_>>>()?;
    let mut points: Vec<f64> = p.couplings.iter().map(|c| c.position).collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let layout = Layout { points, bases, incident };
    let dim = layout.dim();
    let jump_scale = 2.0 * p.mass / (p.hbar * p.hbar);

    let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
    let mut rhs = DVector::<Complex64>::zeros(dim);
    let mut labels = vec![String::new(); dim];

    let hub = &layout.bases[0];
    let n_points = layout.n_points();
    // Hub terms left and right of point j, plus the incoming wave's
    // contribution to (ψ(x+) − ψ(x−), ψ′(x+) − ψ′(x−)) when it lives there.
    let hub_terms = |j: usize, x: f64| -> Result<(Vec<Term>, Vec<Term>, Option<(Complex64, Complex64)>)> {
        let region = |r: usize| -> Result<Vec<Term>> {
            Ok(if r == 0 {
                vec![(layout.hub_side(Side::Left), hub.outgoing(Side::Left).eval(x)?)]
            } else if r == n_points {
                vec![(layout.hub_side(Side::Right), hub.outgoing(Side::Right).eval(x)?)]
            } else {
                let (a, b) = layout.hub_interior(r);
                vec![(a, hub.outgoing(Side::Left).eval(x)?), (b, hub.outgoing(Side::Right).eval(x)?)]
            })
        };
        let mut fixed = None;
        if j == 0 {
            if let Some(b) = layout.incoming(0, Side::Left) {
                let (v, d) = b.eval(x)?;
                fixed = Some((-v, -d));
            }
        }
        if j + 1 == n_points {
            if let Some(b) = layout.incoming(0, Side::Right) {
                fixed = Some(b.eval(x)?);
            }
        }
        Ok((region(j)?, region(j + 1)?, fixed))
    };

    labels[layout.hub_side(Side::Left)] = "ch1.left".into();
    labels[layout.hub_side(Side::Right)] = "ch1.right".into();
    for r in 1..n_points {
        let (a, b) = layout.hub_interior(r);
        labels[a] = format!("ch1.region{r}.u_left");
        labels[b] = format!("ch1.region{r}.u_right");
    }
    for ch in 1..n {
        for side in Side::BOTH {
            labels[layout.spoke_side(ch, side)] = format!("ch{}.{}", ch + 1, side.name());
        }
    }

    // Hub rows: 2j continuity, 2j + 1 jump at point j.
    let mut hub_left_at = vec![Vec::new(); n_points];
    for (j, &x) in layout.points.iter().enumerate() {
        let (left, right, fixed) = hub_terms(j, x)?;
        let (rc, rj) = (2 * j, 2 * j + 1);
        for &(col, (v, d)) in &right {
            matrix[(rc, col)] += v;
            matrix[(rj, col)] += d;
        }
        for &(col, (v, d)) in &left {
            matrix[(rc, col)] -= v;
            matrix[(rj, col)] -= d;
        }
        if let Some((v, d)) = fixed {
            // known terms move to the right-hand side
            rhs[rc] -= v;
            rhs[rj] -= d;
        }
        hub_left_at[j] = left;
    }

    // Spoke rows and the hub's coupling terms.
    for ch in 1..n {
        let coupling = p.couplings[ch - 1];
        let x = coupling.position;
        let kappa = jump_scale * coupling.strength;
        let j = layout.points.iter().position(|&q| q == x).expect("coupling point in layout");
        let basis = &layout.bases[ch];
        let lo = basis.outgoing(Side::Left).eval(x)?;
        let ro = basis.outgoing(Side::Right).eval(x)?;
        let (cl, cr) = (layout.spoke_side(ch, Side::Left), layout.spoke_side(ch, Side::Right));
        let (rc, rj) = (cl, cr);

        matrix[(rc, cr)] += ro.0;
        matrix[(rc, cl)] -= lo.0;
        matrix[(rj, cr)] += ro.1;
        matrix[(rj, cl)] -= lo.1;
        // spoke value at the point, taken from its left region
        matrix[(2 * j + 1, cl)] -= kappa * lo.0;
        if let Some(b) = layout.incoming(ch, Side::Left) {
            let (v, d) = b.eval(x)?;
            rhs[rc] += v;
            rhs[rj] += d;
            rhs[2 * j + 1] += kappa * v;
        }
        if let Some(b) = layout.incoming(ch, Side::Right) {
            let (v, d) = b.eval(x)?;
            rhs[rc] -= v;
            rhs[rj] -= d;
        }
        // hub value at the point, from the region to its left
        for &(col, (v, _)) in &hub_left_at[j] {
            matrix[(rj, col)] -= kappa * v;
        }
        if j == 0 {
            if let Some(b) = layout.incoming(0, Side::Left) {
                rhs[rj] += kappa * b.value_at(x)?;
            }
        }
    }

    let (row_scale, col_scale) = equilibrate(&matrix);
    let mut sys = MatchSystem {
        matrix,
        rhs,
        labels,
        condition_number: f64::INFINITY,
        layout,
        row_scale,
        col_scale,
    };
    sys.condition_number = condition_1(&sys.scaled_matrix());
    Ok(sys)
}

/// Row then column max-abs scaling factors.
fn equilibrate(m: &DMatrix<Complex64>) -> (Vec<f64>, Vec<f64>) {
    let inv = |v: f64| if v > 0.0 { 1.0 / v } else { 1.0 };
    let rows: Vec<f64> = m.row_iter().map(|r| inv(r.iter().map(|z| z.norm()).fold(0.0, f64::max))).collect();
    let cols: Vec<f64> = m
        .column_iter()
        .map(|c| inv(c.iter().zip(&rows).map(|(z, s)| z.norm() * s).fold(0.0, f64::max)))
        .collect();
    (rows, cols)
}

fn norm_1(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn condition_1(m: &DMatrix<Complex64>) -> f64 {
    match m.clone().lu().try_inverse() {
        Some(inv) => {
            let c = norm_1(m) * norm_1(&inv);
            if c.is_finite() {
                c
            } else {
                f64::INFINITY
            }
        }
        None => f64::INFINITY,
    }
}

/// Solve a star problem by direct matching.
pub fn solve_star(p: &StarProblem) -> Result<ScatteringSolution> {
    let checked = validate_problem(p)?;
    solve_checked(&checked)
}

pub fn solve_checked(p: &CheckedProblem) -> Result<ScatteringSolution> {
    let sys = assemble(p)?;
    let x = sys.solve()?;
    let layout = &sys.layout;
    let (inc_ch, inc_side) = layout.incident.expect("forced system");
    let incoming_flux = layout.bases[inc_ch]
        .incoming(inc_side)
        .map(|b| b.flux.abs())
        .ok_or(Error::NoIncidentWave { channel: inc_ch + 1, side: inc_side.name() })?;

    let mut channels = Vec::with_capacity(p.n_channels());
    let mut fluxes = Vec::with_capacity(p.n_channels());
    for ch in 0..p.n_channels() {
        let basis = &layout.bases[ch];
        let mut sides = [None, None];
        let mut flux = [None, None];
        for side in Side::BOTH {
            let col = if ch == 0 { layout.hub_side(side) } else { layout.spoke_side(ch, side) };
            let coeff = x[col];
            let out = basis.outgoing(side);
            let class = p.status(ch, side).class;
            let incoming = if layout.incoming(ch, side).is_some() { ONE } else { ZERO };
            sides[side.index()] = Some(SideAmplitude { incoming, outgoing: coeff, class });
            flux[side.index()] = match class {
                ChannelClass::Open { .. } => Some(coeff.norm_sqr() * out.flux.abs()),
                _ => None,
            };
        }
        let interior = if ch == 0 {
            (1..layout.n_points())
                .map(|r| {
                    let (a, b) = layout.hub_interior(r);
                    [x[a], x[b]]
                })
                .collect()
        } else {
            Vec::new()
        };
        let [left, right] = sides.map(|s| s.expect("both sides filled"));
        channels.push(ChannelAmplitudes { left, right, interior });
        fluxes.push(flux);
    }
    Ok(ScatteringSolution::new(
        p.energy,
        p.incident,
        channels,
        incoming_flux,
        &fluxes,
        Some(sys.condition_number),
    ))
}
