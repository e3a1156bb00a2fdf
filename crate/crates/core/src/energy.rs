//! Dissipation rates, truncated energy curves and the point-vortex limit.
//!
//! Powers such as `(2α/(4−α))^{(8−α)/α}` reach `1e-18` at `α = 1/3` and
//! overflow-prone exponents near `α → 0`, so every power below is evaluated as
//! `exp(Σ exponent · ln base)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::Alpha;
use crate::series::FigureSeries;

/// `|4 − 3α|` below which `α` is treated as the threshold `4/3`.
const THRESHOLD_TOL: f64 = 1e-12;

#[inline]
fn pow(base: f64, exponent: f64) -> f64 {
    (exponent * base.ln()).exp()
}

/// Exponent of `t` in the dissipation rate, `(4−3α)/α`.
pub fn rate_exponent(alpha: Alpha) -> f64 {
    let a = alpha.get();
    (4.0 - 3.0 * a) / a
}

/// Exponent of `t` in the energy drop, `2(2−α)/α`.
pub fn drop_exponent(alpha: Alpha) -> f64 {
    let a = alpha.get();
    2.0 * (2.0 - a) / a
}

/// Optimal growth rate of the `b = 0` ansatz, `(2α/(4−α))²`.
pub fn ansatz_growth_rate(alpha: Alpha) -> f64 {
    let a = alpha.get();
    let s = 2.0 * a / (4.0 - a);
    s * s
}

/// `∫ ∂ₜē dx` for a growth rate `c`:
/// `−(2π/α) c^{2(2−α)/α} (A − 2(2−α)Bc/α) t^{(4−3α)/α}`.
pub fn dissipation_rate(a_fun: f64, b_fun: f64, c: f64, alpha: Alpha, t: f64) -> f64 {
    let al = alpha.get();
    let k = 2.0 * (2.0 - al) / al;
    let bracket = a_fun - k * b_fun * c;
    -(2.0 * PI / al) * pow(c, k) * bracket * pow(t, rate_exponent(alpha))
}

/// The dissipation rate at the maximizing growth rate,
/// `−2π (A/(4−α))^{(4−α)/α} (α/B)^{2(2−α)/α} t^{(4−3α)/α}`.
pub fn dissipation_rate_optimal(a_fun: f64, b_fun: f64, alpha: Alpha, t: f64) -> f64 {
    -optimal_prefactor(a_fun, b_fun, alpha) * pow(t, rate_exponent(alpha))
}

/// `2π (A/(4−α))^{(4−α)/α} (α/B)^{2(2−α)/α}`, the magnitude of the optimal
/// rate at `t = 1`.
pub fn optimal_prefactor(a_fun: f64, b_fun: f64, alpha: Alpha) -> f64 {
    let al = alpha.get();
    let log = (2.0 * PI).ln()
        + (4.0 - al) / al * (a_fun / (4.0 - al)).ln()
        + 2.0 * (2.0 - al) / al * (al / b_fun).ln();
    log.exp()
}

/// Closed-form optimal rate for the `b = 0` ansatz:
/// `−(π/16) (2α/(4−α))^{(8−α)/α} t^{(4−3α)/α}`.
pub fn dissipation_ansatz_b0(alpha: Alpha, t: f64) -> f64 {
    -ansatz_b0_prefactor(alpha) * pow(t, rate_exponent(alpha))
}

/// Same rate written through the growth rate:
/// `−(π/16) c^{(8−α)/(2α)} t^{(4−3α)/α}` with `c = (2α/(4−α))²`.
pub fn dissipation_in_growth_rate(alpha: Alpha, t: f64) -> f64 {
    let al = alpha.get();
    let c = ansatz_growth_rate(alpha);
    -(PI / 16.0) * pow(c, (8.0 - al) / (2.0 * al)) * pow(t, rate_exponent(alpha))
}

fn ansatz_b0_prefactor(alpha: Alpha) -> f64 {
    let al = alpha.get();
    ((PI / 16.0).ln() + (8.0 - al) / al * (2.0 * al / (4.0 - al)).ln()).exp()
}

/// `T = r₀^α / c` with the `b = 0` growth rate, i.e. `((4−α)/(2α))² r₀^α`.
pub fn horizon_t(alpha: Alpha, r0: f64) -> f64 {
    let al = alpha.get();
    let s = (4.0 - al) / (2.0 * al);
    s * s * pow(r0, al)
}

/// `π/(2(2−α)) r₀^{2(2−α)}`, the energy of the truncated power-law vortex
/// inside `r₀`.
pub fn initial_energy_lower_bound(alpha: Alpha, r0: f64) -> f64 {
    let al = alpha.get();
    PI / (2.0 * (2.0 - al)) * pow(r0, 2.0 * (2.0 - al))
}

/// Behaviour of the dissipation rate as `t → 0⁺`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OnsagerClass {
    /// `α < 4/3`: the rate vanishes at `t = 0`.
    VanishingRate,
    /// `α = 4/3`: the rate is constant in time.
    ConstantRate,
    /// `α > 4/3`: the rate diverges at `t = 0`.
    DivergingRate,
}

pub fn onsager_classify(alpha: Alpha) -> OnsagerClass {
    let d = 4.0 - 3.0 * alpha.get();
    if d.abs() <= THRESHOLD_TOL {
        OnsagerClass::ConstantRate
    } else if d > 0.0 {
        OnsagerClass::VanishingRate
    } else {
        OnsagerClass::DivergingRate
    }
}

/// Energy budget of a truncated subsolution driven at its optimal growth
/// rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub alpha: f64,
    pub c: f64,
    pub r0: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    #[serde(rename = "E0")]
    pub e0: f64,
    #[serde(rename = "E0_lower_bound")]
    pub e0_lower_bound: f64,
    pub onsager_class: OnsagerClass,
    /// Magnitude of the rate at `t = 1`.
    pub rate_prefactor: f64,
}

impl EnergyReport {
    /// Report for functionals `A`, `B`; the growth rate is the maximizer
    /// `αA/((4−α)B)`.
    pub fn new(alpha: Alpha, a_fun: f64, b_fun: f64, r0: f64, e0: f64) -> Result<Self> {
        if !(a_fun > 0.0) || !(b_fun > 0.0) {
            return Err(Error::domain(format!("energy report needs A > 0 and B > 0, got A = {a_fun:e}, B = {b_fun:e}")));
        }
        if !(r0 > 0.0) {
            return Err(Error::domain(format!("truncation radius must be positive, got {r0}")));
        }
        let al = alpha.get();
        let c = al / (4.0 - al) * a_fun / b_fun;
        Ok(EnergyReport {
            alpha: al,
            c,
            r0,
            horizon: pow(r0, al) / c,
            e0,
            e0_lower_bound: initial_energy_lower_bound(alpha, r0),
            onsager_class: onsager_classify(alpha),
            rate_prefactor: optimal_prefactor(a_fun, b_fun, alpha),
        })
    }

    /// Closed-form report for the `b = 0` ansatz.
    pub fn ansatz_b0(alpha: Alpha, r0: f64, e0: f64) -> Result<Self> {
        if !(r0 > 0.0) {
            return Err(Error::domain(format!("truncation radius must be positive, got {r0}")));
        }
        Ok(EnergyReport {
            alpha: alpha.get(),
            c: ansatz_growth_rate(alpha),
            r0,
            horizon: horizon_t(alpha, r0),
            e0,
            e0_lower_bound: initial_energy_lower_bound(alpha, r0),
            onsager_class: onsager_classify(alpha),
            rate_prefactor: ansatz_b0_prefactor(alpha),
        })
    }

    fn alpha_param(&self) -> Alpha {
        Alpha(self.alpha)
    }

    /// `∂ₜĒ(t)`.
    pub fn dissipation(&self, t: f64) -> f64 {
        -self.rate_prefactor * pow(t, rate_exponent(self.alpha_param()))
    }

    /// `E(0) − Ē(t)`, the integral of the rate from `0` to `t`.
    pub fn energy_drop(&self, t: f64) -> f64 {
        let al = self.alpha;
        self.rate_prefactor * al / (2.0 * (2.0 - al)) * pow(t, drop_exponent(self.alpha_param()))
    }

    pub fn energy(&self, t: f64) -> f64 {
        self.e0 - self.energy_drop(t)
    }

    /// Self-similar radius `(ct)^{1/α}`.
    pub fn boundary_radius(&self, t: f64) -> f64 {
        pow(self.c * t, 1.0 / self.alpha)
    }

    fn check_times(&self, t_grid: &[f64]) -> Result<()> {
        let limit = self.horizon * (1.0 + 1e-12);
        for &t in t_grid {
            if !(t > 0.0) {
                return Err(Error::domain(format!("time grid must exclude t <= 0, got {t}")));
            }
            if t > limit {
                return Err(Error::domain(format!(
                    "t = {t} exceeds the horizon T = {} of the truncated subsolution",
                    self.horizon
                )));
            }
        }
        Ok(())
    }

    /// Tabulated `Ē_χ(t)` on `t_grid ⊂ (0, T]`.
    pub fn energy_curve(&self, t_grid: &[f64]) -> Result<FigureSeries> {
        self.check_times(t_grid)?;
        let mut s = FigureSeries::new("energy", "t");
        s.push_series(format!("alpha={}", self.alpha), t_grid.iter().map(|&t| self.energy(t)).collect());
        s.x = t_grid.to_vec();
        self.annotate(&mut s, "energy_truncated");
        Ok(s)
    }

    /// Tabulated `∂ₜĒ(t)` on `t_grid ⊂ (0, T]`.
    pub fn rate_curve(&self, t_grid: &[f64]) -> Result<FigureSeries> {
        self.check_times(t_grid)?;
        let mut s = FigureSeries::new("dissipation", "t");
        s.push_series(format!("alpha={}", self.alpha), t_grid.iter().map(|&t| self.dissipation(t)).collect());
        s.x = t_grid.to_vec();
        self.annotate(&mut s, "dissipation_optimal");
        Ok(s)
    }

    fn annotate(&self, s: &mut FigureSeries, formula: &str) {
        s.meta("alpha", self.alpha);
        s.meta("c", self.c);
        s.meta("r0", self.r0);
        s.meta("E0", self.e0);
        s.meta_str("formula", formula);
    }
}

/// `Ē_χ(t)` for the `b = 0` ansatz truncated at `r₀`.
pub fn energy_curve(alpha: Alpha, r0: f64, e0: f64, t_grid: &[f64]) -> Result<FigureSeries> {
    EnergyReport::ansatz_b0(alpha, r0, e0)?.energy_curve(t_grid)
}

/// Point-vortex (`α → 2`) quantities at time `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointVortex {
    pub rate: f64,
    pub energy: f64,
    pub boundary_radius: f64,
}

/// Rate `−βπ/(2t)`, energy `E_ref − β(π/2) log t` relative to `t = 1`, and
/// self-similar radius `2√t`.
pub fn point_vortex(beta: f64, t: f64, e_ref: f64) -> Result<PointVortex> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::domain(format!("beta must lie in (0, 1], got {beta}")));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("t must be positive, got {t}")));
    }
    Ok(PointVortex {
        rate: -beta * PI / (2.0 * t),
        energy: e_ref - beta * PI / 2.0 * t.ln(),
        boundary_radius: 2.0 * t.sqrt(),
    })
}
