//! Physical-space subsolution `(v̄, σ̄, q̄, ē)` built from self-similar
//! profiles and truncated by a smooth cutoff.
//!
//! Points of the plane are identified with complex numbers. With
//! `ξ = r/(ct)^{1/α}`,
//!
//! ```text
//! v̄ = h i e^{iθ},   σ̄ = −(w₁ + i w₂) e^{2iθ},   w₁ = ½h²,
//! h  = (ct)^{(1−α)/α} H(ξ),
//! w₂ = −(c/α) (ct)^{2(1−α)/α} W₂(ξ),
//! q  = (ct)^{2(1−α)/α} Q(ξ).
//! ```
//!
//! A traceless symmetric matrix `[[z₁, z₂], [z₂, −z₁]]` is stored as the
//! pair `(z₁, z₂)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::Quadrature;
use crate::subsolution::{c_range_and_optimal, SubsolutionFields};

/// Tolerance on the tail pressure integral `∫ h_χ²/s ds`.
const TAIL_Q_TOL: f64 = 1e-13;
/// Relative slack on `t ≤ T`.
const HORIZON_SLACK: f64 = 1e-12;

/// Fields at one point of space-time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub v: [f64; 2],
    pub sigma: [f64; 2],
    pub q: f64,
    pub e_bar: f64,
}

impl FieldSample {
    pub fn v_complex(&self) -> Complex64 {
        Complex64::new(self.v[0], self.v[1])
    }

    pub fn sigma_complex(&self) -> Complex64 {
        Complex64::new(self.sigma[0], self.sigma[1])
    }

    /// `½v̄² − σ̄`, zero exactly where the triple is a solution.
    pub fn defect(&self) -> Complex64 {
        let v = self.v_complex();
        0.5 * v * v - self.sigma_complex()
    }
}

/// Smooth radial cutoff: `1` on `[0, r₀]`, `0` on `[2r₀, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    r0: f64,
}

impl Cutoff {
    pub fn new(r0: f64) -> Result<Self> {
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::domain(format!("cutoff radius must be positive, got {r0}")));
        }
        Ok(Cutoff { r0 })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    /// `1 − s((r − r₀)/r₀)` with the quintic smoothstep
    /// `s(u) = 6u⁵ − 15u⁴ + 10u³`.
    pub fn chi(&self, r: f64) -> f64 {
        let u = (r - self.r0) / self.r0;
        if u <= 0.0 {
            1.0
        } else if u >= 1.0 {
            0.0
        } else {
            1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
        }
    }
}

/// `χ(r)` for `cut`.
pub fn cutoff_chi(cut: &Cutoff, r: f64) -> f64 {
    cut.chi(r)
}

/// Largest eigenvalue of `[[z₁, z₂], [z₂, −z₁]]`.
pub fn lambda_max_traceless(z1: f64, z2: f64) -> f64 {
    z1.hypot(z2)
}

/// `h(r) = (1/r) ∫₀^r s g(s) ds`, the radial velocity with vorticity `g`.
pub fn biot_savart_radial<F: Fn(f64) -> f64>(g: F, r: f64, tol: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("Biot-Savart radius must be positive, got {r}")));
    }
    Ok(Quadrature::new(tol).integrate(|s| s * g(s), 0.0, r)?.value / r)
}

/// Kinetic energy `½∫|v|²` of the truncated vortex `χ(r) r^{1−α}`, the
/// initial energy of every truncated subsolution.
pub fn initial_energy(alpha: crate::profiles::Alpha, cutoff: &Cutoff, tol: f64) -> Result<f64> {
    let al = alpha.get();
    let r0 = cutoff.r0;
    let core = PI * r0.powf(2.0 * (2.0 - al)) / (2.0 * (2.0 - al));
    let shell = Quadrature::new(tol)
        .integrate(|r| r.powf(3.0 - 2.0 * al) * cutoff.chi(r).powi(2), r0, 2.0 * r0)?
        .value;
    Ok(core + PI * shell)
}

/// Self-similar values at one `(t, r)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelfSimilarPoint {
    pub xi: f64,
    pub h: f64,
    pub w2: f64,
    pub q: f64,
}

/// A truncated self-similar subsolution with growth rate `c`.
#[derive(Clone, Debug)]
pub struct TruncatedSubsolution {
    fields: SubsolutionFields,
    alpha: f64,
    c: f64,
    cutoff: Cutoff,
}

impl TruncatedSubsolution {
    pub fn new(fields: SubsolutionFields, c: f64, cutoff: Cutoff) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain(format!("growth rate must be positive, got {c}")));
        }
        let alpha = fields.alpha();
        Ok(TruncatedSubsolution { fields, alpha, c, cutoff })
    }

    /// Uses the optimal growth rate `αA/((4−α)B)` of the profile.
    pub fn optimal(fields: SubsolutionFields, cutoff: Cutoff) -> Result<Self> {
        let report = fields.report()?;
        let (_, c_opt) = c_range_and_optimal(&report, fields.profile().alpha())?;
        Self::new(fields, c_opt, cutoff)
    }

    pub fn fields(&self) -> &SubsolutionFields {
        &self.fields
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    /// `T = r₀^α / c`, when the disc `r ≤ (ct)^{1/α}` reaches `r₀`.
    pub fn horizon(&self) -> f64 {
        self.cutoff.r0.powf(self.alpha) / self.c
    }

    /// `(ct)^{1/α}`.
    pub fn boundary_radius(&self, t: f64) -> f64 {
        (self.c * t).powf(1.0 / self.alpha)
    }

    /// Untruncated self-similar values. For `ξ > 1` the velocity is the
    /// steady `r^{1−α}`.
    pub fn self_similar_map(&self, t: f64, r: f64) -> Result<SelfSimilarPoint> {
        if !(t > 0.0) || !(r > 0.0) {
            return Err(Error::domain(format!("self-similar map needs t > 0 and r > 0, got t = {t}, r = {r}")));
        }
        let al = self.alpha;
        let ct = self.c * t;
        let xi = r / ct.powf(1.0 / al);
        let scale_h = ct.powf((1.0 - al) / al);
        let scale_2 = scale_h * scale_h;
        let h = if xi > 1.0 {
            r.powf(1.0 - al)
        } else {
            scale_h * self.fields.profile().h(xi)
        };
        let w2 = -(self.c / al) * scale_2 * self.fields.w2(xi)?;
        let q = scale_2 * self.fields.q(xi)?;
        Ok(SelfSimilarPoint { xi, h, w2, q })
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(t > 0.0) {
            return Err(Error::domain(format!("fields need t > 0, got {t}")));
        }
        let horizon = self.horizon();
        if t > horizon * (1.0 + HORIZON_SLACK) {
            return Err(Error::domain(format!("t = {t} exceeds the horizon T = {horizon}")));
        }
        Ok(())
    }

    /// Radial data `(h_χ, w₂, q)` at `r > 0`.
    pub fn radial(&self, t: f64, r: f64) -> Result<(f64, f64, f64)> {
        self.check_time(t)?;
        let r0 = self.cutoff.r0;
        if r <= r0 {
            let p = self.self_similar_map(t, r)?;
            return Ok((p.h, p.w2, p.q));
        }
        // Outside r₀ the velocity is the cut-off steady vortex and w₂ = 0;
        // q solves ∂_r q = h_χ (h_χ' + h_χ/r) from its value at r₀.
        let at_r0 = self.self_similar_map(t, r0)?;
        let al = self.alpha;
        let h_chi = |s: f64| s.powf(1.0 - al) * self.cutoff.chi(s);
        let h = h_chi(r);
        let upper = r.min(2.0 * r0);
        let integral = Quadrature::new(TAIL_Q_TOL)
            .integrate(|s| h_chi(s) * h_chi(s) / s, r0, upper)?
            .value;
        let q = at_r0.q + 0.5 * (h * h - at_r0.h * at_r0.h) + integral;
        Ok((h, 0.0, q))
    }

    /// `(v̄, σ̄, q̄, ē)` at the point `x`. At the origin `v̄ = 0`.
    pub fn eval(&self, t: f64, x: [f64; 2]) -> Result<FieldSample> {
        self.check_time(t)?;
        let r = x[0].hypot(x[1]);
        if r == 0.0 {
            let q = self.fields.q(0.0)? * (self.c * t).powf(2.0 * (1.0 - self.alpha) / self.alpha);
            return Ok(FieldSample { v: [0.0, 0.0], sigma: [0.0, 0.0], q, e_bar: 0.0 });
        }
        let (h, w2, q) = self.radial(t, r)?;
        let w1 = 0.5 * h * h;
        let e_itheta = Complex64::new(x[0] / r, x[1] / r);
        let v = h * Complex64::i() * e_itheta;
        let sigma = -Complex64::new(w1, w2) * e_itheta * e_itheta;
        let defect = 0.5 * v * v - sigma;
        let e_bar = 0.5 * v.norm_sqr() + lambda_max_traceless(defect.re, defect.im);
        let e_radial = w1 + w2.abs();
        if (e_bar - e_radial).abs() > 1e-12 * e_radial.max(1.0) {
            return Err(Error::domain(format!(
                "energy density mismatch at r = {r}: {e_bar} vs {e_radial}"
            )));
        }
        Ok(FieldSample { v: [v.re, v.im], sigma: [sigma.re, sigma.im], q, e_bar })
    }

    /// Centered finite-difference residuals of
    /// `r² ∂_r q = ∂_r(r² w₁)` and `r² ∂_t h = ∂_r(r² w₂)` over `r_grid`,
    /// with steps `step·r` in space and `step·t` in time.
    pub fn polar_residual(&self, t: f64, r_grid: &[f64], step: f64) -> Result<(f64, f64)> {
        let dt = step * t;
        self.check_time(t + dt)?;
        let mut res_q: f64 = 0.0;
        let mut res_h: f64 = 0.0;
        for &r in r_grid {
            if !(r > 0.0) {
                return Err(Error::domain(format!("residual grid must avoid r <= 0, got {r}")));
            }
            let dr = step * r;
            let (hp, w2p, qp) = self.radial(t, r + dr)?;
            let (hm, w2m, qm) = self.radial(t, r - dr)?;
            let (rp, rm) = (r + dr, r - dr);
            let dq = (qp - qm) / (2.0 * dr);
            let dw1 = (rp * rp * 0.5 * hp * hp - rm * rm * 0.5 * hm * hm) / (2.0 * dr);
            res_q = res_q.max((r * r * dq - dw1).abs());

            let (h_late, _, _) = self.radial(t + dt, r)?;
            let (h_early, _, _) = self.radial(t - dt, r)?;
            let dh = (h_late - h_early) / (2.0 * dt);
            let dw2 = (rp * rp * w2p - rm * rm * w2m) / (2.0 * dr);
            res_h = res_h.max((r * r * dh - dw2).abs());
        }
        Ok((res_q, res_h))
    }

    /// `2π ∫₀^{(ct)^{1/α}} ē r dr` by quadrature in `r`.
    pub fn disc_energy(&self, t: f64, tol: f64) -> Result<f64> {
        self.check_time(t)?;
        let radius = self.boundary_radius(t);
        let e = |r: f64| match self.radial(t, r) {
            Ok((h, w2, _)) => (0.5 * h * h + w2.abs()) * r,
            Err(_) => f64::NAN,
        };
        let mut points = vec![0.0];
        points.extend(self.fields.b_sign_changes().into_iter().map(|x| x * radius));
        points.push(radius);
        Ok(2.0 * PI * Quadrature::new(tol).integrate_with_breaks(e, &points)?.value)
    }

    /// `(ct)^{2(2−α)/α} · 2π ∫₀¹ (½H² + (c/α)|W₂|) ξ dξ`.
    pub fn disc_energy_self_similar(&self, t: f64, tol: f64) -> Result<f64> {
        self.check_time(t)?;
        let al = self.alpha;
        let p = self.fields.profile();
        let f = |xi: f64| match self.fields.w2(xi) {
            Ok(w) => (0.5 * p.h(xi).powi(2) + self.c / al * w.abs()) * xi,
            Err(_) => f64::NAN,
        };
        let mut points = p.unit_partition();
        points.extend(self.fields.b_sign_changes());
        points.sort_by(f64::total_cmp);
        points.dedup();
        let integral = Quadrature::new(tol).integrate_with_breaks(f, &points)?.value;
        Ok((self.c * t).powf(2.0 * (2.0 - al) / al) * 2.0 * PI * integral)
    }
}

/// Fields of the `b = 0` ansatz at growth rate `c`.
pub fn eval_fields(
    alpha: crate::profiles::Alpha,
    c: f64,
    cutoff: Cutoff,
    t: f64,
    x: [f64; 2],
) -> Result<FieldSample> {
    let p = crate::profiles::make_ansatz_profile(alpha, 0.0)?;
    TruncatedSubsolution::new(SubsolutionFields::new(p)?, c, cutoff)?.eval(t, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{make_ansatz_profile, Alpha};

    fn ansatz(alpha: f64, r0: f64) -> TruncatedSubsolution {
        let p = make_ansatz_profile(Alpha::new(alpha).unwrap(), 0.0).unwrap();
        let c = (2.0 * alpha / (4.0 - alpha)).powi(2);
        TruncatedSubsolution::new(SubsolutionFields::new(p).unwrap(), c, Cutoff::new(r0).unwrap()).unwrap()
    }

    #[test]
    fn chi_values() {
        let cut = Cutoff::new(2.0).unwrap();
        assert_eq!(cut.chi(1.0), 1.0);
        assert_eq!(cut.chi(4.0), 0.0);
        assert!((cut.chi(3.0) - 0.5).abs() < 1e-15);
        assert!(Cutoff::new(0.0).is_err());
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_max_traceless(3.0, 4.0), 5.0);
        assert_eq!(lambda_max_traceless(0.0, 0.0), 0.0);
    }

    #[test]
    fn unit_scaling_point() {
        let s = ansatz(1.0, 4.0);
        let p = s.self_similar_map(9.0 / 4.0, 1.0).unwrap();
        assert!((p.xi - 1.0).abs() < 1e-15);
        assert!((p.h - 1.0).abs() < 1e-15);
        let tail = s.self_similar_map(9.0 / 4.0, 3.0).unwrap();
        assert_eq!(tail.h, 1.0);
        assert_eq!(tail.w2, 0.0);
    }

    #[test]
    fn tail_sample_is_steady_vortex() {
        let s = ansatz(1.0, 4.0);
        let f = s.eval(9.0 / 4.0, [2.0, 0.0]).unwrap();
        assert!(f.v[0].abs() < 1e-15 && (f.v[1] - 1.0).abs() < 1e-15);
        assert!((f.sigma[0] + 0.5).abs() < 1e-15 && f.sigma[1].abs() < 1e-15);
        assert!((f.e_bar - 0.5).abs() < 1e-15);
    }

    #[test]
    fn beyond_horizon_is_rejected() {
        let s = ansatz(1.0, 1.0);
        assert!(s.eval(s.horizon() * 1.01, [0.5, 0.0]).is_err());
        assert!(s.eval(s.horizon(), [0.5, 0.0]).is_ok());
    }

    #[test]
    fn origin_has_zero_velocity() {
        let s = ansatz(1.0, 1.0);
        let f = s.eval(1.0, [0.0, 0.0]).unwrap();
        assert_eq!(f.v, [0.0, 0.0]);
    }

    #[test]
    fn biot_savart_examples() {
        assert!((biot_savart_radial(|_| 1.0, 2.0, 1e-12).unwrap() - 1.0).abs() < 1e-12);
        assert!((biot_savart_radial(|_| 2.0, 0.7, 1e-12).unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn initial_energy_exceeds_core_bound() {
        let al = Alpha::new(1.0).unwrap();
        let e = initial_energy(al, &Cutoff::new(1.0).unwrap(), 1e-13).unwrap();
        assert!(e > crate::energy::initial_energy_lower_bound(al, 1.0));
        // At α = 1 the shell integrand is χ(r)² r on [1, 2].
        let shell = crate::quadrature::integrate(|r| r * Cutoff::new(1.0).unwrap().chi(r).powi(2), 1.0, 2.0, 1e-14).unwrap().value;
        assert!((e - PI * (0.5 + shell)).abs() < 1e-13);
    }

    #[test]
    fn pressure_is_continuous_across_r0() {
        let s = ansatz(1.0, 1.0);
        let (_, _, below) = s.radial(1.0, 1.0).unwrap();
        let (_, _, above) = s.radial(1.0, 1.0 + 1e-9).unwrap();
        assert!((below - above).abs() < 1e-8);
    }
}
