use rayon::prelude::*;
use serde_json::{Map, Value};

use super::config::{Format, Route, ScanConfig};
use crate::closed_form::solve_two_state;
use crate::error::{Error, Result};
use crate::model::validate_problem;
use crate::solution::ScatteringSolution;
use crate::{greens, matcher, oracle};

/// Flux and route-agreement tolerance: tighter when every channel is flat.
pub fn tolerance(all_constant: bool) -> f64 {
    if all_constant {
        1e-10
    } else {
        1e-8
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub energy: f64,
    pub route: Route,
    pub t_cross_total: Option<f64>,
    /// Per channel; `None` for the incident channel or when unavailable.
    pub t_cross: Vec<Option<f64>>,
    pub r_back: Option<f64>,
    pub t_same: Option<f64>,
    pub flux_residual: Option<f64>,
    /// Set when this row breached a tolerance or disagreed with another route.
    pub flagged: bool,
}

impl ScanRow {
    fn empty(energy: f64, route: Route, n: usize) -> Self {
        Self { energy, route, t_cross_total: None, t_cross: vec![None; n], r_back: None, t_same: None, flux_residual: None, flagged: false }
    }

    fn from_solution(route: Route, s: &ScatteringSolution) -> Self {
        let p = &s.probabilities;
        Self {
            energy: s.energy,
            route,
            t_cross_total: Some(p.t_cross_total),
            t_cross: p.t_cross.clone(),
            r_back: Some(p.r_back),
            t_same: p.t_same,
            flux_residual: Some(s.flux_residual),
            flagged: false,
        }
    }

    fn values(&self) -> Vec<Option<f64>> {
        let mut v = vec![self.t_cross_total];
        v.extend(&self.t_cross);
        v.extend([self.r_back, self.t_same]);
        v
    }
}

#[derive(Debug, Clone, Default)]
pub struct ScanReport {
    pub n_channels: usize,
    pub rows: Vec<ScanRow>,
    /// Skipped energies and per-row failures.
    pub warnings: Vec<String>,
    /// Flux residuals or route disagreements above tolerance.
    pub breaches: Vec<String>,
}

fn solve_route(cfg: &ScanConfig, route: Route, energy: f64) -> Result<ScanRow> {
    let p = cfg.problem.at(energy);
    let n = p.n_channels();
    Ok(match route {
        Route::ClosedForm => {
            let (_, r) = solve_two_state(&p)?;
            let mut row = ScanRow::empty(energy, route, n);
            row.t_cross_total = Some(r.t_cross);
            row.t_cross[1] = Some(r.t_cross);
            row.r_back = r.r_back;
            row.t_same = r.t_same;
            row.flux_residual = Some(r.flux_residual);
            row
        }
        Route::Matcher => ScanRow::from_solution(route, &matcher::solve_star(&p)?),
        Route::Greens => ScanRow::from_solution(route, &greens::solve_star(&p)?),
        Route::Oracle => ScanRow::from_solution(route, &oracle::dense_match_solve(&p)?),
        Route::All => unreachable!("expanded by the caller"),
    })
}

struct EnergyOutcome {
    rows: Vec<ScanRow>,
    warnings: Vec<String>,
    breaches: Vec<String>,
}

fn scan_energy(cfg: &ScanConfig, energy: f64, tol: f64) -> EnergyOutcome {
    let mut out = EnergyOutcome { rows: Vec::new(), warnings: Vec::new(), breaches: Vec::new() };
    if let Err(e) = validate_problem(&cfg.problem.at(energy)) {
        out.warnings.push(format!("E = {energy:.16e}: skipped ({e})"));
        return out;
    }
    let n = cfg.problem.channels.len();
    for route in cfg.route.expand() {
        match solve_route(cfg, route, energy) {
            Ok(mut row) => {
                if let Some(res) = row.flux_residual {
                    if !(res <= tol) {
                        row.flagged = true;
                        out.breaches.push(format!(
                            "E = {energy:.16e}, route {}: flux residual {res:.3e} exceeds {tol:.0e}",
                            route.name()
                        ));
                    }
                }
                out.rows.push(row);
            }
            Err(e) => {
                // closed forms legitimately refuse other problem shapes under route=all
                if !(cfg.route == Route::All && matches!(e, Error::UseGenericMatcher(_))) {
                    out.warnings.push(format!("E = {energy:.16e}, route {}: {e}", route.name()));
                }
                out.rows.push(ScanRow::empty(energy, route, n));
            }
        }
    }
    if cfg.route == Route::All {
        let solved: Vec<usize> = (0..out.rows.len()).filter(|&i| out.rows[i].flux_residual.is_some()).collect();
        for (k, &i) in solved.iter().enumerate() {
            for &j in &solved[k + 1..] {
                let gap = out.rows[i]
                    .values()
                    .iter()
                    .zip(out.rows[j].values())
                    .filter_map(|(x, y)| Some((x.as_ref()? - y?).abs()))
                    .fold(0.0, f64::max);
                if !(gap <= tol) {
                    out.rows[i].flagged = true;
                    out.rows[j].flagged = true;
                    out.breaches.push(format!(
                        "E = {energy:.16e}: routes {} and {} differ by {gap:.3e}",
                        out.rows[i].route.name(),
                        out.rows[j].route.name()
                    ));
                }
            }
        }
    }
    out
}

/// Evaluate every energy of the config through its route(s). Rows come out
/// ordered by energy, then by route, whatever the thread count.
pub fn run_scan(cfg: &ScanConfig, jobs: Option<usize>) -> Result<ScanReport> {
    scan_with_tolerance(cfg, jobs, tolerance(cfg.problem.all_constant()))
}

fn scan_with_tolerance(cfg: &ScanConfig, jobs: Option<usize>, tol: f64) -> Result<ScanReport> {
    cfg.validate()?;
    let energies = cfg.energies.points();
    let work = || energies.par_iter().map(|&e| scan_energy(cfg, e, tol)).collect::<Vec<_>>();
    let outcomes = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("--jobs: {e}")))?
            .install(work),
        None => work(),
    };
    let mut report = ScanReport { n_channels: cfg.problem.channels.len(), ..Default::default() };
    for o in outcomes {
        report.rows.extend(o.rows);
        report.warnings.extend(o.warnings);
        report.breaches.extend(o.breaches);
    }
    Ok(report)
}

fn number(v: f64) -> String {
    format!("{v:.16e}")
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), number)
}

impl ScanReport {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["energy".to_string(), "route".into(), "t_cross_total".into()];
        h.extend((1..=self.n_channels).map(|n| format!("t_cross_ch{n}")));
        h.extend(["r_back", "t_same", "flux_residual"].map(String::from));
        h
    }

    pub fn exit_code(&self) -> i32 {
        if self.breaches.is_empty() {
            0
        } else {
            2
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header().join(",");
        s.push('\n');
        for r in &self.rows {
            let mut cells = vec![number(r.energy), r.route.name().to_string(), cell(r.t_cross_total)];
            cells.extend(r.t_cross.iter().map(|&v| cell(v)));
            cells.extend([cell(r.r_back), cell(r.t_same), cell(r.flux_residual)]);
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let header = self.header();
        let num = |v: Option<f64>| v.and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number);
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut values = vec![num(Some(r.energy)), Value::String(r.route.name().into()), num(r.t_cross_total)];
                values.extend(r.t_cross.iter().map(|&v| num(v)));
                values.extend([num(r.r_back), num(r.t_same), num(r.flux_residual)]);
                Value::Object(header.iter().cloned().zip(values).collect::<Map<_, _>>())
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}
