//! Dense direct solve of the matching conditions.
//!
//! Unknowns are grouped channel by channel. Rows list every continuity
//! condition first and every derivative jump after, spokes before the hub.
//! Far-side solutions are normalized to 1 at the nearest coupling point and
//! hub regions between points use the regular pair of their left endpoint.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::exact::{raw_pair, regular_pair, side_set, SideSet, Solution};
use crate::error::{Error, Result};
use crate::model::{validate_problem, Side, StarProblem};
use crate::solution::{ChannelAmplitudes, ScatteringSolution, SideAmplitude};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// A linear combination `Σ coeff·unknown + constant` evaluated at a point.
#[derive(Default, Clone)]
struct Expr {
    terms: Vec<(usize, Complex64)>,
    constant: Complex64,
}

impl Expr {
    fn add(&mut self, other: &Expr, sign: f64) {
        self.terms.extend(other.terms.iter().map(|&(c, v)| (c, sign * v)));
        self.constant += sign * other.constant;
    }
}

struct ChannelPiece {
    left: SideSet,
    right: SideSet,
}

pub fn dense_match_solve(p: &StarProblem) -> Result<ScatteringSolution> {
    let checked = validate_problem(p)?;
    let (e, m, hb) = (p.energy, p.mass, p.hbar);
    let n = p.n_channels();
    let mut points: Vec<f64> = p.couplings.iter().map(|c| c.position).collect();
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite positions"));
    points.dedup();
    let n_pts = points.len();
    let (x_first, x_last) = (points[0], points[n_pts - 1]);

    let hub = ChannelPiece {
        left: side_set(&p.channels[0], e, m, hb, Side::Left, x_first)?,
        right: side_set(&p.channels[0], e, m, hb, Side::Right, x_last)?,
    };
    let spokes: Vec<ChannelPiece> = p.channels[1..]
        .iter()
        .zip(&p.couplings)
        .map(|(spec, c)| {
            Ok(ChannelPiece {
                left: side_set(spec, e, m, hb, Side::Left, c.position)?,
                right: side_set(spec, e, m, hb, Side::Right, c.position)?,
            })
        })
        .collect::<Result<_>>()?;
    let hub_pair = raw_pair(&p.channels[0], e, m, hb)?;
    let regular: Vec<[[Complex64; 2]; 2]> =
        points[..n_pts - 1].iter().map(|&x| regular_pair(&hub_pair, x)).collect::<Result<_>>()?;

    // columns: hub [left, (c, s) per interior region, right], then spokes [left, right]
    let hub_cols = 2 * n_pts;
    let dim = hub_cols + 2 * (n - 1);
    let spoke_col = |s: usize, side: Side| hub_cols + 2 * s + side.index();
    let inc = p.incident;
    let incident_on = |ch: usize, side: Side| inc.channel == ch + 1 && inc.side == side;

    let side_expr = |set: &SideSet, col: usize, x: f64, incident: bool| -> Result<(Expr, Expr)> {
        let (v, d) = set.free().eval(x)?;
        let mut val = Expr { terms: vec![(col, v)], constant: ZERO };
        let mut der = Expr { terms: vec![(col, d)], constant: ZERO };
        if incident {
            let (iv, id) = set.incoming().ok_or(Error::DefectiveBasis)?.eval(x)?;
            val.constant += iv;
            der.constant += id;
        }
        Ok((val, der))
    };
    // hub in region r at x
    let hub_expr = |r: usize, x: f64| -> Result<(Expr, Expr)> {
        if r == 0 {
            side_expr(&hub.left, 0, x, incident_on(0, Side::Left))
        } else if r == n_pts {
            side_expr(&hub.right, hub_cols - 1, x, incident_on(0, Side::Right))
        } else {
            let (f, fd) = hub_pair[0].eval(x)?;
            let (g, gd) = hub_pair[1].eval(x)?;
            let [c, s] = regular[r - 1];
            let (cc, sc) = (2 * r - 1, 2 * r);
            Ok((
                Expr { terms: vec![(cc, c[0] * f + c[1] * g), (sc, s[0] * f + s[1] * g)], constant: ZERO },
                Expr { terms: vec![(cc, c[0] * fd + c[1] * gd), (sc, s[0] * fd + s[1] * gd)], constant: ZERO },
            ))
        }
    };

    let kappa = |s: usize| 2.0 * m * p.couplings[s].strength / (hb * hb);
    let mut continuity = Vec::new();
    let mut jumps = Vec::new();
    let mut hub_at_point = Vec::with_capacity(n_pts);
    let mut hub_jumps = Vec::with_capacity(n_pts);
    for (j, &x) in points.iter().enumerate() {
        let (lv, ld) = hub_expr(j, x)?;
        let (rv, rd) = hub_expr(j + 1, x)?;
        let mut cont = rv.clone();
        cont.add(&lv, -1.0);
        continuity.push(cont);
        let mut jump = rd;
        jump.add(&ld, -1.0);
        hub_jumps.push(jump);
        hub_at_point.push(rv);
    }
    let mut spoke_jumps = Vec::new();
    for s in 0..n - 1 {
        let x = p.couplings[s].position;
        let piece = &spokes[s];
        let (lv, ld) = side_expr(&piece.left, spoke_col(s, Side::Left), x, incident_on(s + 1, Side::Left))?;
        let (rv, rd) = side_expr(&piece.right, spoke_col(s, Side::Right), x, incident_on(s + 1, Side::Right))?;
        let mut cont = rv.clone();
        cont.add(&lv, -1.0);
        continuity.push(cont);
        let j = points.iter().position(|&q| q == x).expect("point listed");
        // hub jump picks up κ·ψ_s, spoke jump κ·ψ₁ (both from the right)
        hub_jumps[j].add(&rv, -kappa(s));
        let mut jump = rd;
        jump.add(&ld, -1.0);
        jump.add(&hub_at_point[j], -kappa(s));
        spoke_jumps.push(jump);
    }
    // spokes first within each block
    let hub_cont: Vec<Expr> = continuity.drain(..n_pts).collect();
    continuity.extend(hub_cont);
    jumps.extend(spoke_jumps);
    jumps.extend(hub_jumps);

    let rows: Vec<Expr> = continuity.into_iter().chain(jumps).collect();
    debug_assert_eq!(rows.len(), dim);
    let mut a = DMatrix::<Complex64>::zeros(dim, dim);
    let mut b = DVector::<Complex64>::zeros(dim);
    for (i, row) in rows.iter().enumerate() {
        for &(c, v) in &row.terms {
            a[(i, c)] += v;
        }
        b[i] = -row.constant;
    }
    let x = a.full_piv_lu().solve(&b).ok_or(Error::SingularSystem { condition: f64::INFINITY })?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem { condition: f64::INFINITY });
    }

    // currents measured where each side solution is normalized
    let current = |s: Solution, at: f64| s.current(at, m, hb);
    let pieces: Vec<(&ChannelPiece, [f64; 2], [usize; 2])> = std::iter::once((&hub, [x_first, x_last], [0, hub_cols - 1]))
        .chain(spokes.iter().enumerate().map(|(s, pc)| {
            let at = p.couplings[s].position;
            (pc, [at, at], [spoke_col(s, Side::Left), spoke_col(s, Side::Right)])
        }))
        .collect();
    let (inc_piece, inc_at, _) = pieces[inc.channel - 1];
    let inc_set = if inc.side == Side::Left { &inc_piece.left } else { &inc_piece.right };
    let incoming = inc_set.incoming().ok_or(Error::DefectiveBasis)?;
    let incoming_flux = current(incoming, inc_at[inc.side.index()])?.abs();

    let mut channels = Vec::with_capacity(n);
    let mut fluxes = Vec::with_capacity(n);
    for (ch, (piece, at, cols)) in pieces.iter().enumerate() {
        let mut flux = [None, None];
        let mut amps = Vec::with_capacity(2);
        for side in Side::BOTH {
            let set = if side == Side::Left { &piece.left } else { &piece.right };
            let coeff = x[cols[side.index()]];
            if set.is_open() {
                flux[side.index()] = Some(coeff.norm_sqr() * current(set.free(), at[side.index()])?.abs());
            }
            amps.push(SideAmplitude {
                incoming: if incident_on(ch, side) { ONE } else { ZERO },
                outgoing: coeff,
                class: checked.status(ch, side).class,
            });
        }
        let interior = if ch == 0 { (1..n_pts).map(|r| [x[2 * r - 1], x[2 * r]]).collect() } else { Vec::new() };
        channels.push(ChannelAmplitudes { left: amps[0], right: amps[1], interior });
        fluxes.push(flux);
    }
    Ok(ScatteringSolution::new(e, inc, channels, incoming_flux, &fluxes, None))
}
