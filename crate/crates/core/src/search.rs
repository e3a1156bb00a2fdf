//! Maximization of the dissipation functional over the growth rate `c`,
//! sweeps over the ansatz exponent `b`, and convex combinations of profiles.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::optimal_prefactor;
use crate::error::{Error, Result};
use crate::profiles::{ansatz_a, make_ansatz_profile, Alpha, RadialProfile};
use crate::subsolution::SubsolutionFields;

/// `(√5 − 1)/2`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;
const GOLDEN_MAX_ITER: usize = 400;
/// Closed-form vs quadrature tolerance in [`sweep_b`].
pub const SWEEP_AGREEMENT_TOL: f64 = 1e-8;
/// Samples used to check that `F` is unimodal before searching.
const UNIMODAL_SAMPLES: usize = 64;

/// Golden-section search for the maximizer of a unimodal function on
/// `[lo, hi]`, driven by `cmp(x, y)`, which orders `f(x)` against `f(y)`.
/// Stops once the bracket is narrower than `tol`.
pub fn golden_section_by<C>(mut lo: f64, mut hi: f64, tol: f64, cmp: C) -> Result<f64>
where
    C: Fn(f64, f64) -> Ordering,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Bracket(format!("invalid bracket [{lo}, {hi}]")));
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    for _ in 0..GOLDEN_MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        if cmp(x1, x2) == Ordering::Less {
            lo = x1;
            x1 = x2;
            x2 = lo + INV_PHI * (hi - lo);
        } else {
            hi = x2;
            x2 = x1;
            x1 = hi - INV_PHI * (hi - lo);
        }
        if !(x1 > lo && x2 < hi && x1 <= x2) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section maximizer of `f` on `[lo, hi]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    golden_section_by(lo, hi, tol, |x, y| f(x).total_cmp(&f(y)))
}

/// `F(c) = (2π/α) c^{2(2−α)/α} (A − (2(2−α)/α) B c)`, the dissipation
/// prefactor at growth rate `c`.
pub fn dissipation_functional(a_fun: f64, b_fun: f64, alpha: Alpha, c: f64) -> f64 {
    let al = alpha.get();
    let p = 2.0 * (2.0 - al) / al;
    if c == 0.0 {
        return 0.0;
    }
    2.0 * PI / al * (p * c.ln()).exp() * (a_fun - p * b_fun * c)
}

/// Maximizes `F` over `(0, c_max)`, `c_max = αA/(2(2−α)B)`.
///
/// Probes are compared through `ln F(x) − ln F(y)` written with `ln_1p`, so
/// the maximizer is resolved well below `√ε`.
pub fn maximize_c(a_fun: f64, b_fun: f64, alpha: Alpha) -> Result<(f64, f64)> {
    if !(a_fun > 0.0) || !(b_fun > 0.0) {
        return Err(Error::domain(format!("maximize_c needs A > 0 and B > 0, got A = {a_fun:e}, B = {b_fun:e}")));
    }
    let al = alpha.get();
    let p = 2.0 * (2.0 - al) / al;
    let k = p * b_fun;
    let c_max = a_fun / k;
    let f = |c: f64| dissipation_functional(a_fun, b_fun, alpha, c);

    let samples: Vec<f64> = (1..UNIMODAL_SAMPLES).map(|i| f(c_max * i as f64 / UNIMODAL_SAMPLES as f64)).collect();
    let peak = samples
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v > samples[best] { i } else { best });
    let rising = samples[..=peak].windows(2).all(|w| w[1] >= w[0]);
    let falling = samples[peak..].windows(2).all(|w| w[1] <= w[0]);
    if !(rising && falling) || samples.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Bracket(format!(
            "F is not unimodal on (0, {c_max:e}) for A = {a_fun:e}, B = {b_fun:e}"
        )));
    }

    let log_cmp = |x: f64, y: f64| {
        let d = p * ((x - y) / y).ln_1p() + (k * (y - x) / (a_fun - k * y)).ln_1p();
        d.total_cmp(&0.0)
    };
    let c_star = golden_section_by(0.0, c_max, 1e-15 * c_max, |x, y| {
        if x <= 0.0 || y <= 0.0 {
            f(x).total_cmp(&f(y))
        } else {
            log_cmp(x, y)
        }
    })?;
    Ok((c_star, f(c_star)))
}

/// One ansatz exponent `b` in a sweep. `A`, `B` are the closed forms; the
/// quadrature values are kept alongside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub b: f64,
    pub a: f64,
    #[serde(rename = "A")]
    pub a_functional: f64,
    #[serde(rename = "B")]
    pub b_functional: f64,
    pub cond2_margin: f64,
    /// `αA/((4−α)B)`; negative once `A < 0`.
    pub c_opt: f64,
    /// `2π(A/(4−α))^{(4−α)/α}(α/B)^{2(2−α)/α}`; zero when `A ≤ 0`.
    pub prefactor: f64,
    pub admissible: bool,
    #[serde(rename = "A_quad")]
    pub a_quadrature: f64,
    #[serde(rename = "B_quad")]
    pub b_quadrature: f64,
    pub cond1_residual: f64,
    /// `max(|ΔA|, |ΔB|)` between closed form and quadrature.
    pub disagreement: f64,
}

impl SweepRow {
    pub fn disagrees(&self) -> bool {
        !(self.disagreement <= SWEEP_AGREEMENT_TOL)
    }
}

/// Sweep output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub alpha: f64,
    pub rows: Vec<SweepRow>,
    /// Index of the largest prefactor among admissible rows.
    pub argmax: Option<usize>,
    /// Golden-section refinement of the argmax between its grid neighbours.
    pub b_refined: Option<f64>,
    pub prefactor_refined: Option<f64>,
    pub first_inadmissible_b: Option<f64>,
}

/// `f(b) = ∫₀¹ ξ H²` for the ansatz.
pub fn ansatz_f(alpha: f64, b: f64) -> f64 {
    let a = ansatz_a(alpha, b);
    let s = 1.0 + a / (2.0 + b);
    (1.0 + s * s) / (4.0 * (2.0 + b))
}

/// Closed-form `A(b) = ½ − (2−α) f(b)`.
pub fn ansatz_a_functional(alpha: f64, b: f64) -> f64 {
    0.5 - (2.0 - alpha) * ansatz_f(alpha, b)
}

/// Closed-form `B(b) = (b+α)² / ((4−α)(4+b)²)`.
pub fn ansatz_b_functional(alpha: f64, b: f64) -> f64 {
    (b + alpha).powi(2) / ((4.0 - alpha) * (4.0 + b).powi(2))
}

fn closed_prefactor(alpha: Alpha, b: f64) -> f64 {
    let al = alpha.get();
    let a_fun = ansatz_a_functional(al, b);
    if a_fun > 0.0 {
        optimal_prefactor(a_fun, ansatz_b_functional(al, b), alpha)
    } else {
        0.0
    }
}

fn sweep_row(alpha: Alpha, b: f64) -> Result<SweepRow> {
    let al = alpha.get();
    let a_fun = ansatz_a_functional(al, b);
    let b_fun = ansatz_b_functional(al, b);
    let report = SubsolutionFields::new(make_ansatz_profile(alpha, b)?)?.report()?;
    let cond2_margin = 2.0 * a_fun;
    Ok(SweepRow {
        b,
        a: ansatz_a(al, b),
        a_functional: a_fun,
        b_functional: b_fun,
        cond2_margin,
        c_opt: al * a_fun / ((4.0 - al) * b_fun),
        prefactor: closed_prefactor(alpha, b),
        admissible: cond2_margin > 0.0 && report.cond1_residual <= crate::subsolution::TOL_C1,
        a_quadrature: report.a_functional,
        b_quadrature: report.b_functional,
        cond1_residual: report.cond1_residual,
        disagreement: (report.a_functional - a_fun).abs().max((report.b_functional - b_fun).abs()),
    })
}

/// 201 equally spaced exponents on `[0, 10]`.
pub fn default_b_grid() -> Vec<f64> {
    (0..=200).map(|i| i as f64 / 20.0).collect()
}

/// Evaluates each `b` in `b_grid ⊂ [0, 10]` by closed form and by
/// quadrature, then locates the admissible row with the largest prefactor.
/// Ties go to the smaller `b`.
pub fn sweep_b(alpha: Alpha, b_grid: &[f64]) -> Result<SweepResult> {
    if let Some(b) = b_grid.iter().find(|b| !(0.0..=10.0).contains(*b)) {
        return Err(Error::domain(format!("sweep exponents must lie in [0, 10], got {b}")));
    }
    let rows = b_grid
        .par_iter()
        .map(|&b| sweep_row(alpha, b))
        .collect::<Result<Vec<_>>>()?;

    let mut argmax: Option<usize> = None;
    for (i, row) in rows.iter().enumerate() {
        if row.admissible && argmax.is_none_or(|k| row.prefactor > rows[k].prefactor) {
            argmax = Some(i);
        }
    }
    let (b_refined, prefactor_refined) = match argmax {
        Some(k) => {
            let lo = if k > 0 { rows[k - 1].b } else { rows[k].b };
            let hi = if k + 1 < rows.len() { rows[k + 1].b } else { rows[k].b };
            let b = if hi > lo {
                let b = golden_section_max(|b| closed_prefactor(alpha, b), lo, hi, 1e-10)?;
                if closed_prefactor(alpha, b) >= rows[k].prefactor {
                    b
                } else {
                    rows[k].b
                }
            } else {
                rows[k].b
            };
            (Some(b), Some(closed_prefactor(alpha, b)))
        }
        None => (None, None),
    };
    Ok(SweepResult {
        alpha: alpha.get(),
        first_inadmissible_b: rows.iter().find(|r| !r.admissible).map(|r| r.b),
        rows,
        argmax,
        b_refined,
        prefactor_refined,
    })
}

impl SweepResult {
    /// Columns `b, a, A, B, cond2_margin, c_opt, prefactor, admissible`.
    pub fn to_csv(&self) -> String {
        use crate::series::fmt_f64;
        let mut out = String::from("b,a,A,B,cond2_margin,c_opt,prefactor,admissible\n");
        for r in &self.rows {
            let nums = [r.b, r.a, r.a_functional, r.b_functional, r.cond2_margin, r.c_opt, r.prefactor];
            for v in nums {
                out.push_str(&fmt_f64(v));
                out.push(',');
            }
            out.push_str(if r.admissible { "true" } else { "false" });
            out.push('\n');
        }
        out
    }
}

/// `λ·p1 + (1−λ)·p2`.
pub fn convex_combine(p1: RadialProfile, p2: RadialProfile, lambda: f64) -> Result<RadialProfile> {
    RadialProfile::combination(p1, p2, lambda)
}
