//! Subcommand bodies. Each returns its data; writing is left to the caller.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::energy::{ansatz_growth_rate, horizon_t, point_vortex, EnergyReport};
use crate::error::{Error, Result};
use crate::fields::{Cutoff, TruncatedSubsolution};
use crate::profiles::{make_ansatz_profile, Alpha, RadialProfile};
use crate::search::{ansatz_a_functional, ansatz_b_functional, default_b_grid, sweep_b, SweepResult};
use crate::series::{fmt_f64, FigureSeries};
use crate::subsolution::{eval_qs, AdmissibilityReport, SubsolutionFields, DEFAULT_FD_STEP, TOL_C1};

/// Figure α values `k/3`, `k = 1..5`.
pub const FIGURE_ALPHAS: [f64; 5] = [1.0 / 3.0, 2.0 / 3.0, 1.0, 4.0 / 3.0, 5.0 / 3.0];
const FIGURE_ALPHA_LABELS: [&str; 5] = ["1/3", "2/3", "1", "4/3", "5/3"];

/// Profile named by `cfg`: the ansatz, or a log-power profile when `a` is set.
pub fn profile_from_config(cfg: &RunConfig) -> Result<RadialProfile> {
    let alpha = Alpha::new(cfg.alpha)?;
    match cfg.a {
        Some(a) => RadialProfile::log_power(alpha, a, cfg.b),
        None => make_ansatz_profile(alpha, cfg.b),
    }
}

/// `E₀` from `cfg`, or the kinetic energy of the truncated vortex.
pub fn initial_energy(cfg: &RunConfig, alpha: Alpha) -> Result<f64> {
    match cfg.e0 {
        Some(e0) => Ok(e0),
        None => crate::fields::initial_energy(alpha, &Cutoff::new(cfg.r0)?, 1e-13),
    }
}

/// Uniform grid of `n ≥ 2` points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect()
}

fn time_grid(cfg: &RunConfig, default_max: f64, limit: Option<f64>) -> Result<Vec<f64>> {
    let t_max = cfg.t_max.unwrap_or(default_max);
    let t_min = cfg.t_min.unwrap_or(t_max / cfg.steps.max(1) as f64);
    if !(t_min > 0.0 && t_min < t_max) {
        return Err(Error::domain(format!("time range needs 0 < t_min < t_max, got [{t_min}, {t_max}]")));
    }
    if let Some(limit) = limit {
        if t_max > limit * (1.0 + 1e-12) {
            return Err(Error::domain(format!("t_max = {t_max} exceeds the horizon T = {limit}")));
        }
    }
    Ok(linspace(t_min, t_max, cfg.steps))
}

/// One named check in a verification report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// `"<="` or `">"`.
    pub relation: String,
    pub pass: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, threshold, relation: "<=".into(), pass: value <= threshold }
    }

    fn above(name: &str, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, threshold, relation: ">".into(), pass: value > threshold }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub alpha: f64,
    pub b: f64,
    pub a: f64,
    pub admissibility: AdmissibilityReport,
    pub checks: Vec<Check>,
    pub pass: bool,
}

fn rel(x: f64, y: f64) -> f64 {
    ((x - y) / y).abs()
}

/// Conditions, residuals and closed-form cross-checks for `cfg`.
pub fn verify(cfg: &RunConfig) -> Result<VerifyReport> {
    let profile = profile_from_config(cfg)?;
    let a_coeff = match profile.kind() {
        crate::profiles::ProfileKind::LogPower { a, .. } => *a,
        _ => profile.ansatz_a().unwrap_or(f64::NAN),
    };
    let fields = SubsolutionFields::new(profile)?;
    let report = fields.report()?;
    let mut checks = vec![
        Check::at_most("cond1_residual", report.cond1_residual, TOL_C1),
        Check::above("cond2_margin", report.cond2_margin, 0.0),
        Check::at_most("W2_at_1", fields.w2(1.0)?.abs(), 1e-9),
        Check::at_most(
            "Q_jump_at_1",
            (fields.q(1.0 - 1e-12)? - eval_qs(fields.profile().alpha(), 1.0)).abs(),
            1e-8,
        ),
    ];
    let xi_grid = linspace(0.05, 0.95, 20);
    let (res1, res2) = fields.residual_ss(&xi_grid, DEFAULT_FD_STEP)?;
    checks.push(Check::at_most("residual_Q", res1, cfg.tol_fd));
    checks.push(Check::at_most("residual_W2", res2, cfg.tol_fd));

    if cfg.a.is_none() {
        let a_closed = ansatz_a_functional(cfg.alpha, cfg.b);
        let b_closed = ansatz_b_functional(cfg.alpha, cfg.b);
        checks.push(Check::at_most("A_vs_closed_form", rel(report.a_functional, a_closed), 1e-8));
        checks.push(Check::at_most("B_vs_closed_form", rel(report.b_functional, b_closed), 1e-8));
        if let Some(c_opt) = report.c_opt {
            let c_closed = cfg.alpha * a_closed / ((4.0 - cfg.alpha) * b_closed);
            checks.push(Check::at_most("c_opt_vs_closed_form", rel(c_opt, c_closed), 1e-10));
        }
    }

    if report.is_admissible() && report.c_opt.is_some() {
        let sub = TruncatedSubsolution::optimal(fields, Cutoff::new(cfg.r0)?)?;
        let t = 0.5 * sub.horizon();
        let radius = sub.boundary_radius(t);
        let r_grid: Vec<f64> = linspace(0.05, 0.9, 20).into_iter().map(|s| s * radius).collect();
        let (res_q, res_h) = sub.polar_residual(t, &r_grid, DEFAULT_FD_STEP)?;
        checks.push(Check::at_most("polar_residual_q", res_q, cfg.tol_fd));
        checks.push(Check::at_most("polar_residual_h", res_h, cfg.tol_fd));

        let mut defect: f64 = 0.0;
        for (i, s) in linspace(1.05, 0.98 * cfg.r0 / radius, 12).into_iter().enumerate() {
            let theta = 0.7 * i as f64;
            let r = s * radius;
            let f = sub.eval(t, [r * theta.cos(), r * theta.sin()])?;
            defect = defect.max(f.defect().norm());
        }
        checks.push(Check::at_most("solution_region_defect", defect, 1e-12));

        let direct = sub.disc_energy(t, cfg.tol_quad)?;
        let scaled = sub.disc_energy_self_similar(t, cfg.tol_quad)?;
        checks.push(Check::at_most("disc_energy_change_of_variables", rel(direct, scaled), 1e-8));
    }

    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport { alpha: cfg.alpha, b: cfg.b, a: a_coeff, admissibility: report, checks, pass })
}

/// Energy `Ē_χ(t) − E₀ = −drop(t)` of the `b = 0` ansatz for `α = k/3`, on
/// a common grid ending at the smallest horizon. `E₀` is shared by all
/// curves: `cfg.e0`, or the largest truncated-vortex energy among them. The
/// offset is stored in the metadata so drops of order `1e−22` at `α = 1/3`
/// stay resolvable.
pub fn figure1(cfg: &RunConfig) -> Result<FigureSeries> {
    let alphas = FIGURE_ALPHAS.iter().map(|&a| Alpha::new(a)).collect::<Result<Vec<_>>>()?;
    let t_limit = alphas.iter().map(|&a| horizon_t(a, cfg.r0)).fold(f64::INFINITY, f64::min);
    let grid = time_grid(cfg, t_limit, Some(t_limit))?;
    let e0 = match cfg.e0 {
        Some(e0) => e0,
        None => alphas
            .iter()
            .map(|&a| initial_energy(cfg, a))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max),
    };
    let mut s = FigureSeries::new("fig1_energy", "t");
    s.x = grid.clone();
    for (&alpha, label) in alphas.iter().zip(FIGURE_ALPHA_LABELS) {
        let report = EnergyReport::ansatz_b0(alpha, cfg.r0, e0)?;
        s.push_series(format!("alpha={label}"), grid.iter().map(|&t| -report.energy_drop(t)).collect());
    }
    s.meta("r0", cfg.r0);
    s.meta("E0", e0);
    s.meta_str("value", "energy minus E0");
    Ok(s)
}

/// Boundary `(ct)^{1/α}` of the `b = 0` ansatz for `α = k/3`.
pub fn figure2(cfg: &RunConfig) -> Result<FigureSeries> {
    let grid = time_grid(cfg, 1.0, None)?;
    let mut s = FigureSeries::new("fig2_boundary", "t");
    s.x = grid.clone();
    for (alpha, label) in FIGURE_ALPHAS.iter().zip(FIGURE_ALPHA_LABELS) {
        let c = ansatz_growth_rate(Alpha::new(*alpha)?);
        s.push_series(format!("alpha={label}"), grid.iter().map(|&t| (c * t).powf(1.0 / alpha)).collect());
    }
    Ok(s)
}

/// `c(α)^{1/α} = (2α/(4−α))^{2/α}` on `α ∈ [0.05, 1.95]`.
pub fn figure3(cfg: &RunConfig) -> Result<FigureSeries> {
    let grid = linspace(0.05, 1.95, cfg.steps);
    let mut s = FigureSeries::new("fig3_growth_rate", "alpha");
    let values = grid
        .iter()
        .map(|&a| Ok(ansatz_growth_rate(Alpha::new(a)?).powf(1.0 / a)))
        .collect::<Result<Vec<_>>>()?;
    s.x = grid;
    s.push_series("c_pow_inv_alpha", values);
    Ok(s)
}

pub fn figure(which: u8, cfg: &RunConfig) -> Result<FigureSeries> {
    match which {
        1 => figure1(cfg),
        2 => figure2(cfg),
        3 => figure3(cfg),
        other => Err(Error::domain(format!("figure must be 1, 2 or 3, got {other}"))),
    }
}

/// `A`, `B` of the configured profile, then the energy report at the
/// optimal growth rate. The `b = 0` ansatz uses closed forms.
pub fn energy_report(cfg: &RunConfig) -> Result<EnergyReport> {
    let alpha = Alpha::new(cfg.alpha)?;
    let e0 = initial_energy(cfg, alpha)?;
    if cfg.b == 0.0 && cfg.a.is_none() {
        return EnergyReport::ansatz_b0(alpha, cfg.r0, e0);
    }
    let report = SubsolutionFields::new(profile_from_config(cfg)?)?.report()?;
    if !report.is_admissible() {
        return Err(Error::domain(format!(
            "profile is not admissible (cond1_residual = {:e}, cond2_margin = {:e})",
            report.cond1_residual, report.cond2_margin
        )));
    }
    EnergyReport::new(alpha, report.a_functional, report.b_functional, cfg.r0, e0)
}

/// Columns `energy`, `rate`, `drop` on `(0, T]`.
pub fn energy(cfg: &RunConfig) -> Result<FigureSeries> {
    let report = energy_report(cfg)?;
    let grid = time_grid(cfg, report.horizon, Some(report.horizon))?;
    let mut s = FigureSeries::new("energy", "t");
    s.push_series("energy", grid.iter().map(|&t| report.energy(t)).collect());
    s.push_series("rate", grid.iter().map(|&t| report.dissipation(t)).collect());
    s.push_series("drop", grid.iter().map(|&t| report.energy_drop(t)).collect());
    s.x = grid;
    s.meta("alpha", report.alpha);
    s.meta("c", report.c);
    s.meta("T", report.horizon);
    s.meta("E0_lower_bound", report.e0_lower_bound);
    s.meta_str("onsager_class", &format!("{:?}", report.onsager_class));
    Ok(s)
}

/// Self-similar and polar residuals at steps `h`, `h/2`, `h/4`, with
/// observed orders `log₂(r(h)/r(h/2))` in the metadata. The `h/4` column
/// shows where roundoff starts to dominate.
pub fn residuals(cfg: &RunConfig) -> Result<FigureSeries> {
    let fields = SubsolutionFields::new(profile_from_config(cfg)?)?;
    let xi_grid = linspace(0.05, 0.95, 20);
    let steps = [DEFAULT_FD_STEP, DEFAULT_FD_STEP / 2.0, DEFAULT_FD_STEP / 4.0];
    let mut cols = vec![Vec::new(); 4];
    for &h in &steps {
        let (r1, r2) = fields.residual_ss(&xi_grid, h)?;
        cols[0].push(r1);
        cols[1].push(r2);
    }
    let report = fields.report()?;
    if report.is_admissible() && report.c_opt.is_some() {
        let sub = TruncatedSubsolution::optimal(fields, Cutoff::new(cfg.r0)?)?;
        let t = 0.5 * sub.horizon();
        let radius = sub.boundary_radius(t);
        let r_grid: Vec<f64> = linspace(0.05, 0.9, 20).into_iter().map(|s| s * radius).collect();
        for &h in &steps {
            let (rq, rh) = sub.polar_residual(t, &r_grid, h)?;
            cols[2].push(rq);
            cols[3].push(rh);
        }
    } else {
        cols[2] = vec![0.0; steps.len()];
        cols[3] = vec![0.0; steps.len()];
    }
    let mut s = FigureSeries::new("residuals", "step");
    s.x = steps.to_vec();
    for (name, col) in ["ss_Q", "ss_W2", "polar_q", "polar_h"].iter().zip(cols) {
        if col[0] > 0.0 && col[1] > 0.0 {
            s.meta(&format!("order_{name}"), (col[0] / col[1]).log2());
        }
        s.push_series(*name, col);
    }
    Ok(s)
}

/// Point-vortex rate, energy and radius on `[0.1, 4]` by default. The
/// reference energy `Ē(1)` is `cfg.e0`, or `0`.
pub fn point_vortex_series(cfg: &RunConfig) -> Result<FigureSeries> {
    let t_min = cfg.t_min.unwrap_or(0.1);
    let t_max = cfg.t_max.unwrap_or(4.0);
    if !(t_min > 0.0 && t_min < t_max) {
        return Err(Error::domain(format!("time range needs 0 < t_min < t_max, got [{t_min}, {t_max}]")));
    }
    let e_ref = cfg.e0.unwrap_or(0.0);
    let grid = linspace(t_min, t_max, cfg.steps);
    let samples = grid
        .iter()
        .map(|&t| point_vortex(cfg.beta, t, e_ref))
        .collect::<Result<Vec<_>>>()?;
    let mut s = FigureSeries::new("point_vortex", "t");
    s.x = grid;
    s.push_series("rate", samples.iter().map(|p| p.rate).collect());
    s.push_series("energy", samples.iter().map(|p| p.energy).collect());
    s.push_series("boundary_radius", samples.iter().map(|p| p.boundary_radius).collect());
    s.meta("beta", cfg.beta);
    s.meta("E_ref", e_ref);
    Ok(s)
}

pub fn sweep(cfg: &RunConfig) -> Result<SweepResult> {
    sweep_b(Alpha::new(cfg.alpha)?, &default_b_grid())
}

/// Prefactor against `b` for plotting.
pub fn sweep_series(result: &SweepResult) -> FigureSeries {
    let mut s = FigureSeries::new("sweep_b", "b");
    s.x = result.rows.iter().map(|r| r.b).collect();
    s.push_series("prefactor", result.rows.iter().map(|r| r.prefactor).collect());
    s.meta("alpha", result.alpha);
    s
}

/// Output of `construct`.
#[derive(Clone, Debug)]
pub struct Construction {
    pub profile: RadialProfile,
    pub report: AdmissibilityReport,
    /// `ξ, H, G, W2, Q`.
    pub profile_table: FigureSeries,
    /// Header `t,x1,x2,v1,v2,sigma1,sigma2,q,e_bar`.
    pub fields_csv: String,
}

/// Profile tables on `ξ ∈ (0, 2]` and field samples along a ray at
/// `t ∈ {T/4, T/2, T}`.
pub fn construct(cfg: &RunConfig) -> Result<Construction> {
    let profile = profile_from_config(cfg)?;
    let fields = SubsolutionFields::new(profile.clone())?;
    let report = fields.report()?;

    let n = cfg.steps.max(2);
    let xis: Vec<f64> = (1..=n).map(|i| 2.0 * i as f64 / n as f64).collect();
    let mut table = FigureSeries::new("profile", "xi");
    table.push_series("H", xis.iter().map(|&x| profile.h(x)).collect());
    table.push_series("G", xis.iter().map(|&x| profile.g(x)).collect::<Result<Vec<_>>>()?);
    table.push_series("W2", xis.iter().map(|&x| fields.w2(x)).collect::<Result<Vec<_>>>()?);
    table.push_series("Q", xis.iter().map(|&x| fields.q(x)).collect::<Result<Vec<_>>>()?);
    table.x = xis;

    if !report.is_admissible() || report.c_opt.is_none() {
        return Err(Error::domain(format!(
            "profile is not admissible (cond1_residual = {:e}, cond2_margin = {:e})",
            report.cond1_residual, report.cond2_margin
        )));
    }
    let sub = TruncatedSubsolution::optimal(fields, Cutoff::new(cfg.r0)?)?;
    let horizon = sub.horizon();
    let (ct, st) = ((PI / 6.0).cos(), (PI / 6.0).sin());
    let mut csv = String::from("t,x1,x2,v1,v2,sigma1,sigma2,q,e_bar\n");
    for t in [0.25 * horizon, 0.5 * horizon, horizon] {
        for j in 1..=n {
            let r = 2.0 * cfg.r0 * j as f64 / n as f64;
            let x = [r * ct, r * st];
            let f = sub.eval(t, x)?;
            let row = [t, x[0], x[1], f.v[0], f.v[1], f.sigma[0], f.sigma[1], f.q, f.e_bar];
            csv.push_str(&row.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(","));
            csv.push('\n');
        }
    }
    Ok(Construction { profile, report, profile_table: table, fields_csv: csv })
}
