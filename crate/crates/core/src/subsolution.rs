//! Self-similar subsolution data derived from a profile `H`.
//!
//! Given `H`, the relaxed system in self-similar variables is solved by
//!
//! ```text
//! W₂(ξ) = ξ H − (4−α)/ξ² ∫₀^ξ ζ² H dζ          (0 < ξ ≤ 1), 0 beyond,
//! Q(ξ)  = q_s(1) − ∫_ξ^1 G H dζ                 (0 < ξ ≤ 1), q_s(ξ) beyond,
//! ```
//!
//! and the dissipation rate is governed by the two functionals
//! `A = ½ − (2−α) ∫₀¹ ξ H²` and `B = ∫₀¹ ξ |W₂|`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::{geometric_grid, Alpha, RadialProfile};
use crate::quadrature::{moment_m1, moment_m2, Quadrature};

/// Tolerance on `|(4−α) m₁ − 1|` for the mass condition to count as met.
pub const TOL_C1: f64 = 1e-9;

/// Number of nodes in the cumulative-mass table.
pub const CUMULATIVE_NODES: usize = 4096;

/// Relative finite-difference step for residual checks.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// `|α − 1|` below which the logarithmic pressure branch is used.
const ALPHA_ONE_SWITCH: f64 = 1e-12;

const LOCAL_TOL: f64 = 1e-17;
const Q_TOL: f64 = 1e-14;
const B_TOL: f64 = 1e-13;

/// Outcome of checking both conditions on `H`, together with the
/// functionals and growth rates derived from them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub alpha: f64,
    pub b: Option<f64>,
    /// `|(4−α) m₁ − 1|`.
    pub cond1_residual: f64,
    /// `1 − 2(2−α) m₂`, equal to `2A`.
    pub cond2_margin: f64,
    #[serde(rename = "A")]
    pub a_functional: f64,
    #[serde(rename = "B")]
    pub b_functional: f64,
    /// `αA / (2(2−α)B)`; `None` when `A ≤ 0` or `B ≤ 0`.
    pub c_max_bound: Option<f64>,
    /// `αA / ((4−α)B)`; `None` when `A ≤ 0` or `B ≤ 0`.
    pub c_opt: Option<f64>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.cond1_residual <= TOL_C1 && self.cond2_margin > 0.0
    }
}

/// `(c_max_bound, c_opt)` for an admissible report.
pub fn c_range_and_optimal(report: &AdmissibilityReport, alpha: Alpha) -> Result<(f64, f64)> {
    growth_rates(report.a_functional, report.b_functional, alpha.get())
}

fn growth_rates(a_fun: f64, b_fun: f64, alpha: f64) -> Result<(f64, f64)> {
    if !(a_fun > 0.0) || !(b_fun > 0.0) {
        return Err(Error::domain(format!(
            "growth rate needs A > 0 and B > 0, got A = {a_fun:e}, B = {b_fun:e}"
        )));
    }
    let ratio = a_fun / b_fun;
    Ok((alpha / (2.0 * (2.0 - alpha)) * ratio, alpha / (4.0 - alpha) * ratio))
}

/// Bernoulli pressure of the power-law vortex.
pub fn eval_qs(alpha: Alpha, r: f64) -> f64 {
    let alpha = alpha.get();
    if (alpha - 1.0).abs() < ALPHA_ONE_SWITCH {
        r.ln()
    } else {
        (2.0 - alpha) / (2.0 * (1.0 - alpha)) * r.powf(2.0 * (1.0 - alpha))
    }
}

/// `∫₀^ξ ζ² H dζ` tabulated on a grid refined towards zero. Off-node values
/// add a local adaptive integral from the nearest node below.
#[derive(Clone, Debug)]
struct CumulativeMass {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl CumulativeMass {
    fn build(p: &RadialProfile) -> Result<Self> {
        let mut nodes = vec![0.0];
        nodes.extend(geometric_grid(1e-12, 1.0, CUMULATIVE_NODES - 1));
        let quad = Quadrature::new(LOCAL_TOL);
        let f = |x: f64| x * x * p.h(x);
        let mut values = Vec::with_capacity(nodes.len());
        values.push(0.0);
        let mut acc = 0.0;
        for w in nodes.windows(2) {
            acc += quad.integrate_with_breaks(f, &p.partition(w[0], w[1]))?.value;
            values.push(acc);
        }
        Ok(CumulativeMass { nodes, values })
    }

    fn eval(&self, p: &RadialProfile, xi: f64) -> Result<f64> {
        let last = self.nodes.len() - 1;
        if xi >= 1.0 {
            return Ok(self.values[last]);
        }
        if xi <= 0.0 {
            return Ok(0.0);
        }
        let k = self.nodes.partition_point(|&v| v <= xi) - 1;
        let base = self.nodes[k];
        if base == xi {
            return Ok(self.values[k]);
        }
        let local = Quadrature::new(LOCAL_TOL)
            .integrate_with_breaks(|x| x * x * p.h(x), &p.partition(base, xi))?
            .value;
        Ok(self.values[k] + local)
    }
}

/// The derived profiles `W₂`, `Q` and the moments of one `H`.
#[derive(Clone, Debug)]
pub struct SubsolutionFields {
    profile: RadialProfile,
    cumulative: CumulativeMass,
    m1: f64,
    m2: f64,
}

impl SubsolutionFields {
    pub fn new(profile: RadialProfile) -> Result<Self> {
        let cumulative = CumulativeMass::build(&profile)?;
        let m1 = moment_m1(&profile)?;
        let m2 = moment_m2(&profile)?;
        Ok(SubsolutionFields {
            profile,
            cumulative,
            m1,
            m2,
        })
    }

    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }

    pub fn alpha(&self) -> f64 {
        self.profile.alpha().get()
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    /// `∫₀^ξ ζ² H dζ` (constant `m₁` for `ξ ≥ 1`).
    pub fn cumulative_mass(&self, xi: f64) -> Result<f64> {
        self.cumulative.eval(&self.profile, xi)
    }

    /// `W₂(ξ)`; zero for `ξ > 1` and at `ξ = 0`.
    pub fn w2(&self, xi: f64) -> Result<f64> {
        if !(xi >= 0.0) {
            return Err(Error::domain(format!("W2 requires xi >= 0, got {xi}")));
        }
        // Below 1e-100, |W₂| ~ ξ H is far under any tolerance and ξ² underflows.
        if !(1e-100..=1.0).contains(&xi) {
            return Ok(0.0);
        }
        let mass = self.cumulative_mass(xi)?;
        Ok(xi * self.profile.h(xi) - (4.0 - self.alpha()) * mass / (xi * xi))
    }

    /// `ξ W₂(ξ) = ξ² H − (4−α)/ξ ∫₀^ξ ζ² H`, the integrand of `B`.
    fn b_integrand(&self, xi: f64) -> f64 {
        match self.w2(xi) {
            Ok(w) => xi * w,
            Err(_) => f64::NAN,
        }
    }

    /// `Q(ξ)`, matched to the power-law pressure at `ξ = 1`.
    pub fn q(&self, xi: f64) -> Result<f64> {
        if !(xi >= 0.0) {
            return Err(Error::domain(format!("Q requires xi >= 0, got {xi}")));
        }
        let alpha = self.profile.alpha();
        if xi > 1.0 {
            return Ok(eval_qs(alpha, xi));
        }
        if xi == 1.0 {
            return Ok(eval_qs(alpha, 1.0));
        }
        let p = &self.profile;
        let tail = Quadrature::new(Q_TOL).integrate_with_breaks(|x| p.gh(x), &p.partition(xi, 1.0))?;
        Ok(eval_qs(alpha, 1.0) - tail.value)
    }

    /// `A = ½ − (2−α) m₂`.
    pub fn a_functional(&self) -> f64 {
        0.5 - (2.0 - self.alpha()) * self.m2
    }

    /// `B = ∫₀¹ |ξ W₂|`, splitting the integral where `ξ W₂` changes sign.
    pub fn b_functional(&self) -> Result<f64> {
        let mut points = self.profile.unit_partition();
        points.extend(self.b_sign_changes());
        points.sort_by(f64::total_cmp);
        points.dedup();
        Ok(Quadrature::new(B_TOL)
            .integrate_with_breaks(|x| self.b_integrand(x).abs(), &points)?
            .value)
    }

    /// `B` without the sign split. Agrees with [`Self::b_functional`] when
    /// `ξ W₂` keeps one sign.
    pub fn b_functional_unsplit(&self) -> Result<f64> {
        Ok(Quadrature::new(B_TOL)
            .integrate_with_breaks(|x| self.b_integrand(x).abs(), &self.profile.unit_partition())?
            .value)
    }

    /// Interior sign changes of `ξ W₂` on `(0, 1)`, located by bisection
    /// from a bracketing scan.
    pub fn b_sign_changes(&self) -> Vec<f64> {
        let grid = geometric_grid(1e-8, 1.0 - 1e-6, 400);
        let vals: Vec<f64> = grid.iter().map(|&x| self.b_integrand(x)).collect();
        let mut roots = Vec::new();
        for k in 0..grid.len() - 1 {
            let (mut lo, mut hi) = (grid[k], grid[k + 1]);
            let (mut flo, fhi) = (vals[k], vals[k + 1]);
            if !(flo * fhi < 0.0) {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if !(mid > lo && mid < hi) {
                    break;
                }
                let fm = self.b_integrand(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        roots
    }

    /// Checks both conditions and derives `A`, `B` and the growth rates.
    pub fn report(&self) -> Result<AdmissibilityReport> {
        let alpha = self.alpha();
        let a_fun = self.a_functional();
        let b_fun = self.b_functional()?;
        let rates = growth_rates(a_fun, b_fun, alpha).ok();
        Ok(AdmissibilityReport {
            alpha,
            b: self.profile.ansatz_b(),
            cond1_residual: ((4.0 - alpha) * self.m1 - 1.0).abs(),
            cond2_margin: 1.0 - 2.0 * (2.0 - alpha) * self.m2,
            a_functional: a_fun,
            b_functional: b_fun,
            c_max_bound: rates.map(|r| r.0),
            c_opt: rates.map(|r| r.1),
        })
    }

    /// Centered finite-difference residuals of `Q' = G H` and
    /// `(ξ² W₂)' = ξ^{4−α} (ξ^{α−1} H)'` over `xi_grid`, with step
    /// `step · ξ` at each point. Returns the two maxima.
    pub fn residual_ss(&self, xi_grid: &[f64], step: f64) -> Result<(f64, f64)> {
        let alpha = self.alpha();
        let p = &self.profile;
        let mut res1: f64 = 0.0;
        let mut res2: f64 = 0.0;
        for &xi in xi_grid {
            if !(xi > 0.0) {
                return Err(Error::domain(format!("residual grid must avoid xi <= 0, got {xi}")));
            }
            let h = step * xi;
            let (lo, hi) = (xi - h, xi + h);
            let dq = (self.q(hi)? - self.q(lo)?) / (2.0 * h);
            res1 = res1.max((dq - p.gh(xi)).abs());

            let lhs = (hi * hi * self.w2(hi)? - lo * lo * self.w2(lo)?) / (2.0 * h);
            let scaled = |x: f64| x.powf(alpha - 1.0) * p.h(x);
            let rhs = xi.powf(4.0 - alpha) * (scaled(hi) - scaled(lo)) / (2.0 * h);
            res2 = res2.max((lhs - rhs).abs());
        }
        Ok((res1, res2))
    }
}

/// Checks both conditions on `H`.
pub fn check_conditions(p: &RadialProfile) -> Result<AdmissibilityReport> {
    SubsolutionFields::new(p.clone())?.report()
}

/// `A = ½ − (2−α) ∫₀¹ ξ H²`.
#[allow(non_snake_case)]
pub fn compute_A(p: &RadialProfile) -> Result<f64> {
    Ok(0.5 - (2.0 - p.alpha().get()) * moment_m2(p)?)
}

/// `B = ∫₀¹ |ξ² H − (4−α)/ξ ∫₀^ξ ζ² H dζ| dξ`.
#[allow(non_snake_case)]
pub fn compute_B(p: &RadialProfile) -> Result<f64> {
    SubsolutionFields::new(p.clone())?.b_functional()
}

#[allow(non_snake_case)]
pub fn eval_W2(p: &RadialProfile, xi: f64) -> Result<f64> {
    SubsolutionFields::new(p.clone())?.w2(xi)
}

#[allow(non_snake_case)]
pub fn eval_Q(p: &RadialProfile, xi: f64) -> Result<f64> {
    SubsolutionFields::new(p.clone())?.q(xi)
}

pub fn residual_ss(p: &RadialProfile, xi_grid: &[f64], step: f64) -> Result<(f64, f64)> {
    SubsolutionFields::new(p.clone())?.residual_ss(xi_grid, step)
}
