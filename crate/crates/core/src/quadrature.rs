//! Globally adaptive Gauss–Kronrod integration on bounded intervals.
//!
//! Every integral in the construction lives on a bounded interval whose left
//! end is frequently `ξ = 0`, where profiles such as `(1 - a log ξ) ξ^{1+b}`
//! carry a logarithmic singularity in one of their derivatives. A segment
//! starting exactly at zero is therefore integrated in the variable
//! `u = -log(ξ / hi)`, which turns `ξ^p log ξ` (`p > -1`) into an
//! exponentially decaying smooth integrand. The `u` range is cut where
//! `ξ < 1e-300`, far below anything that contributes at double precision.
//!
//! Panels are refined worst-first from a single heap, so for a fixed input the
//! sequence of bisections (and therefore the result) is bit-for-bit
//! reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::profiles::RadialProfile;

/// Default subdivision budget.
pub const DEFAULT_MAX_INTERVALS: usize = 2000;

/// Absolute tolerance used for the profile moments.
pub const MOMENT_TOL: f64 = 1e-11;

/// Smallest abscissa reached by the logarithmic chart.
const XI_FLOOR: f64 = 1e-300;

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule
// (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Outcome of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Adaptive integrator configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    /// Absolute tolerance on the total error estimate.
    pub tol: f64,
    /// Maximum number of panels before giving up.
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            tol: MOMENT_TOL,
            max_intervals: DEFAULT_MAX_INTERVALS,
        }
    }
}

/// Integrates `f` over `[lo, hi]` to absolute tolerance `tol` with the default
/// subdivision budget.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadResult> {
    Quadrature::new(tol).integrate(f, lo, hi)
}

/// One application of the 15-point Kronrod rule on `[a, b]`.
pub fn kronrod15<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    gk15(&f, a, b).value
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Chart {
    Linear,
    /// `x = scale * exp(-u)`, `dx = scale * exp(-u) du`.
    LogFromZero { scale: f64 },
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    chart: Chart,
    value: f64,
    err: f64,
    resabs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // Worst error first; ties broken by position for reproducibility.
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

struct RuleOutput {
    value: f64,
    err: f64,
    resabs: f64,
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut scaled = err.abs();
    if resasc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / resasc).powf(1.5);
        scaled = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * resabs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

fn gk15<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64) -> RuleOutput {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = g(center);
    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = g(center - x);
        let f2 = g(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = (res_kronrod - res_gauss) * half;
    let resabs = res_abs * half.abs();
    RuleOutput {
        value: res_kronrod * half,
        err: rescale_error(err, resabs, res_asc * half.abs()),
        resabs,
    }
}

impl Quadrature {
    pub fn new(tol: f64) -> Self {
        Quadrature {
            tol,
            ..Default::default()
        }
    }

    pub fn with_max_intervals(mut self, max_intervals: usize) -> Self {
        self.max_intervals = max_intervals;
        self
    }

    /// Integrates `f` over `[lo, hi]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> Result<QuadResult> {
        self.integrate_with_breaks(f, &[lo, hi])
    }

    /// Integrates `f` over `[points[0], points[last]]`, never placing a panel
    /// across one of the interior `points`. Use this for piecewise integrands
    /// (tabulated profiles, kinks at a matching point).
    pub fn integrate_with_breaks<F: Fn(f64) -> f64>(&self, f: F, points: &[f64]) -> Result<QuadResult> {
        if points.len() < 2 {
            return Err(Error::domain("integration needs at least two points"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::domain(format!("tolerance must be positive, got {}", self.tol)));
        }
        for w in points.windows(2) {
            if !(w[0] < w[1]) || !w[0].is_finite() || !w[1].is_finite() {
                return Err(Error::domain(format!(
                    "integration limits must be finite and increasing, got [{}, {}]",
                    w[0], w[1]
                )));
            }
        }

        let mut evaluations = 0usize;
        let mut panels: Vec<Panel> = Vec::new();
        for w in points.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if lo == 0.0 {
                let scale = hi;
                let u_max = (scale / XI_FLOOR).ln();
                let mut cuts = vec![0.0, 0.5, 1.0];
                let mut u = 2.0;
                while u < u_max {
                    cuts.push(u);
                    u *= 2.0;
                }
                cuts.push(u_max);
                for c in cuts.windows(2) {
                    panels.push(self.panel(&f, c[0], c[1], Chart::LogFromZero { scale }, &mut evaluations));
                }
            } else {
                panels.push(self.panel(&f, lo, hi, Chart::Linear, &mut evaluations));
            }
        }

        let mut finished: Vec<Panel> = Vec::new();
        let mut heap: BinaryHeap<Panel> = panels.into_iter().collect();
        let mut total_err: f64 = heap.iter().map(|p| p.err).sum();
        let mut total_abs: f64 = heap.iter().map(|p| p.resabs).sum();
        let mut count = heap.len();

        loop {
            let floor = 100.0 * f64::EPSILON * total_abs;
            if total_err <= self.tol.max(floor) {
                break;
            }
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            if !(mid > worst.a && mid < worst.b) {
                finished.push(worst);
                continue;
            }
            if count >= self.max_intervals {
                heap.push(worst);
                let estimate: f64 = heap.iter().chain(finished.iter()).map(|p| p.err).sum();
                let (lo, hi) = (points[0], points[points.len() - 1]);
                return Err(Error::NonConvergence {
                    lo,
                    hi,
                    estimate,
                    tol: self.tol,
                    intervals: count,
                });
            }
            let left = self.panel(&f, worst.a, mid, worst.chart, &mut evaluations);
            let right = self.panel(&f, mid, worst.b, worst.chart, &mut evaluations);
            total_err += left.err + right.err - worst.err;
            total_abs += left.resabs + right.resabs - worst.resabs;
            heap.push(left);
            heap.push(right);
            count += 1;
        }

        finished.extend(heap);
        // Fixed summation order: by chart, then by position.
        finished.sort_by(|p, q| {
            let key = |c: &Chart| match c {
                Chart::LogFromZero { .. } => 0,
                Chart::Linear => 1,
            };
            key(&p.chart).cmp(&key(&q.chart)).then(p.a.total_cmp(&q.a))
        });
        let value = finished.iter().map(|p| p.value).sum();
        let abs_error_estimate = finished.iter().map(|p| p.err).sum();
        Ok(QuadResult {
            value,
            abs_error_estimate,
            evaluations,
        })
    }

    fn panel<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64, chart: Chart, evaluations: &mut usize) -> Panel {
        *evaluations += 15;
        let out = match chart {
            Chart::Linear => gk15(f, a, b),
            Chart::LogFromZero { scale } => gk15(
                &|u: f64| {
                    let x = scale * (-u).exp();
                    if x == 0.0 {
                        0.0
                    } else {
                        f(x) * x
                    }
                },
                a,
                b,
            ),
        };
        Panel {
            a,
            b,
            chart,
            value: out.value,
            err: out.err,
            resabs: out.resabs,
        }
    }
}

/// `m₁ = ∫₀¹ ξ² H dξ`, the mass moment entering the first condition.
pub fn moment_m1(p: &RadialProfile) -> Result<f64> {
    Ok(Quadrature::new(MOMENT_TOL)
        .integrate_with_breaks(|x| x * x * p.h(x), &p.unit_partition())?
        .value)
}

/// `m₂ = ∫₀¹ ξ H² dξ`, the energy moment entering the second condition.
pub fn moment_m2(p: &RadialProfile) -> Result<f64> {
    Ok(Quadrature::new(MOMENT_TOL)
        .integrate_with_breaks(
            |x| {
                let h = p.h(x);
                x * h * h
            },
            &p.unit_partition(),
        )?
        .value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial() {
        let r = integrate(|x| x.powi(3), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 0.25).abs() < 1e-14, "{}", r.value);
        assert!(r.abs_error_estimate >= 0.0 && r.evaluations > 0);
    }

    #[test]
    fn log_weighted_monomials() {
        // ∫₀¹ ξⁿ log ξ dξ = -1/(n+1)²
        for n in 0..6 {
            let r = integrate(|x| x.powi(n) * x.ln(), 0.0, 1.0, 1e-12).unwrap();
            let exact = -1.0 / ((n + 1) as f64).powi(2);
            assert!((r.value - exact).abs() < 1e-12, "n={n}: {} vs {exact}", r.value);
        }
    }

    #[test]
    fn weak_power_singularity() {
        // ∫₀¹ ξ^{-1/2} = 2
        let r = integrate(|x| x.powf(-0.5), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn interior_interval_linear_chart() {
        let r = integrate(f64::sin, 1.0, 3.0, 1e-13).unwrap();
        let exact = 1f64.cos() - 3f64.cos();
        assert!((r.value - exact).abs() < 1e-13);
    }

    #[test]
    fn breaks_handle_kinks() {
        let f = |x: f64| (x - 0.3).abs();
        let r = Quadrature::new(1e-13)
            .integrate_with_breaks(f, &[0.1, 0.3, 1.0])
            .unwrap();
        let exact = 0.5 * 0.2 * 0.2 + 0.5 * 0.7 * 0.7;
        assert!((r.value - exact).abs() < 1e-14);
        assert_eq!(r.evaluations, 30);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let err = Quadrature::new(1e-14)
            .with_max_intervals(3)
            .integrate(|x: f64| (50.0 * x).sin().abs(), 0.1, 1.0)
            .unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }), "{err}");
    }

    #[test]
    fn rejects_bad_limits() {
        assert!(integrate(|x| x, 1.0, 0.0, 1e-10).is_err());
        assert!(integrate(|x| x, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| (1.0 - 1.3 * x.ln()) * x * x.sqrt();
        let a = integrate(f, 0.0, 1.0, 1e-12).unwrap();
        let b = integrate(f, 0.0, 1.0, 1e-12).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
