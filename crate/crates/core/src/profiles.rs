//! Self-similar velocity profiles `H(ξ)` and their vorticity `G(ξ)`.
//!
//! A profile is split at the matching point `ξ = 1`: on `[0, 1]` an interior
//! evaluator chosen by the caller, on `(1, ∞)` the steady power-law tail
//! `ξ^{1-α}`. Every profile built through the public constructors satisfies
//! `H(0) = 0` and `H(1) = 1`; the one exception is [`RadialProfile::steady`],
//! the power-law vortex itself, which is kept around as a reference solution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Power-law exponent `α`, strictly inside `(0, 2)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Alpha(pub(crate) f64);

impl Alpha {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 2.0 {
            Ok(Alpha(alpha))
        } else {
            Err(Error::AlphaOutOfRange(alpha))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Alpha::new(v)
    }
}

impl From<Alpha> for f64 {
    fn from(a: Alpha) -> f64 {
        a.0
    }
}

/// Parameters of the logarithmic ansatz `H(ξ) = (1 - a log ξ) ξ^{1+b}`.
///
/// Only `b` is free: `a` is always recomputed from `(α, b)` so that the
/// mass constraint `(4-α) ∫₀¹ ξ² H = 1` holds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnsatzParams {
    alpha: Alpha,
    b: f64,
}

impl AnsatzParams {
    pub fn new(alpha: Alpha, b: f64) -> Result<Self> {
        if !(b >= 0.0) || !b.is_finite() {
            return Err(Error::domain(format!("ansatz exponent b must be finite and >= 0, got {b}")));
        }
        Ok(AnsatzParams { alpha, b })
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `a = (4+b)(α+b)/(4-α)`.
    pub fn a(&self) -> f64 {
        ansatz_a(self.alpha.get(), self.b)
    }
}

/// `a = (4+b)(α+b)/(4-α)`.
pub fn ansatz_a(alpha: f64, b: f64) -> f64 {
    (4.0 + b) * (alpha + b) / (4.0 - alpha)
}

/// Piecewise-cubic Hermite table with monotonicity-preserving slopes.
#[derive(Clone, Debug, PartialEq)]
pub struct Tabulated {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl Tabulated {
    /// Builds the interpolant through `(xs[k], ys[k])`; nodes must be strictly
    /// increasing.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 3 {
            return Err(Error::Profile("tabulated profile needs at least 3 (xi, H) samples".into()));
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Profile("tabulated samples must be finite".into()));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Profile("tabulated nodes must be strictly increasing".into()));
        }
        let slopes = pchip_slopes(&xs, &ys);
        Ok(Tabulated { xs, ys, slopes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let k = self.xs.partition_point(|&v| v <= x) - 1;
        let (x0, x1) = (self.xs[k], self.xs[k + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[k] + h10 * h * self.slopes[k] + h01 * self.ys[k + 1] + h11 * h * self.slopes[k + 1]
    }
}

// Fritsch–Butland weighted harmonic slopes with shape-preserving end
// conditions, the same scheme as the usual "pchip" interpolant.
fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let mut s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s.signum() != d0.signum() {
            s = 0.0;
        } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
            s = 3.0 * d0;
        }
        s
    };
    m[0] = end(h[0], h[1], d[0], d[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

/// How the interior part of a profile is evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum ProfileKind {
    /// `(1 - a log ξ) ξ^{1+b}` with `a` derived from `(α, b)`.
    Ansatz { b: f64 },
    /// Same family with a free `a`; used for perturbations and overrides.
    LogPower { a: f64, b: f64 },
    /// `ξ^p` with `p > 0`.
    Monomial { exponent: f64 },
    /// The steady power-law vortex `ξ^{1-α}` on all of `[0, ∞)`.
    Steady,
    /// Monotone cubic interpolation through samples on `[0, 1]`.
    Tabulated(Tabulated),
    /// `λ H₁ + (1-λ) H₂`.
    Combination {
        lambda: f64,
        first: Box<RadialProfile>,
        second: Box<RadialProfile>,
    },
}

/// A self-similar velocity profile with the power-law tail attached.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    alpha: Alpha,
    kind: ProfileKind,
}

/// Builds the logarithmic ansatz profile for `(α, b)`.
pub fn make_ansatz_profile(alpha: Alpha, b: f64) -> Result<RadialProfile> {
    RadialProfile::ansatz(AnsatzParams::new(alpha, b)?)
}

impl RadialProfile {
    pub fn ansatz(params: AnsatzParams) -> Result<Self> {
        Ok(RadialProfile {
            alpha: params.alpha(),
            kind: ProfileKind::Ansatz { b: params.b() },
        })
    }

    /// `(1 - a log ξ) ξ^{1+b}` for an arbitrary `a`. The mass constraint is
    /// not enforced.
    pub fn log_power(alpha: Alpha, a: f64, b: f64) -> Result<Self> {
        if !(b >= 0.0) || !b.is_finite() || !a.is_finite() {
            return Err(Error::domain(format!("log-power profile needs finite a and b >= 0, got a={a}, b={b}")));
        }
        Ok(RadialProfile {
            alpha,
            kind: ProfileKind::LogPower { a, b },
        })
    }

    pub fn monomial(alpha: Alpha, exponent: f64) -> Result<Self> {
        if !(exponent > 0.0) || !exponent.is_finite() {
            return Err(Error::domain(format!(
                "monomial exponent must be positive so that H(0) = 0, got {exponent}"
            )));
        }
        Ok(RadialProfile {
            alpha,
            kind: ProfileKind::Monomial { exponent },
        })
    }

    pub fn steady(alpha: Alpha) -> Self {
        RadialProfile {
            alpha,
            kind: ProfileKind::Steady,
        }
    }

    /// Profile interpolating `samples` of `(ξ, H)`. The first sample must be
    /// `(0, 0)` and the last `(1, 1)`.
    pub fn tabulated(alpha: Alpha, samples: &[(f64, f64)]) -> Result<Self> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
        if xs.first() != Some(&0.0) || ys.first() != Some(&0.0) {
            return Err(Error::Profile("tabulated profile must start at (0, 0)".into()));
        }
        let last = samples.len() - 1;
        if (xs[last] - 1.0).abs() > 1e-12 || (ys[last] - 1.0).abs() > 1e-12 {
            return Err(Error::Profile("tabulated profile must end at (1, 1)".into()));
        }
        let mut xs = xs;
        let mut ys = ys;
        xs[last] = 1.0;
        ys[last] = 1.0;
        Ok(RadialProfile {
            alpha,
            kind: ProfileKind::Tabulated(Tabulated::new(xs, ys)?),
        })
    }

    /// Samples `source` at `ξ = 0` and about `n` further nodes: a geometric
    /// grid from `1e-6` to `0.1` merged with a uniform grid on `[0.1, 1]`.
    pub fn tabulate(source: &RadialProfile, n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::Profile("tabulation needs at least 4 nodes".into()));
        }
        let mut xs = vec![0.0];
        xs.extend(geometric_grid(1e-6, 0.1, n / 2));
        let uniform = n - n / 2;
        xs.extend((1..uniform).map(|k| 0.1 + 0.9 * k as f64 / (uniform - 1) as f64));
        xs.dedup();
        *xs.last_mut().expect("nonempty grid") = 1.0;
        let samples: Vec<(f64, f64)> = xs.into_iter().map(|x| (x, source.h(x))).collect();
        RadialProfile::tabulated(source.alpha, &samples)
    }

    /// Pointwise convex combination `λ·first + (1-λ)·second`.
    pub fn combination(first: RadialProfile, second: RadialProfile, lambda: f64) -> Result<Self> {
        if first.alpha != second.alpha {
            return Err(Error::domain(format!(
                "cannot combine profiles with different alpha ({} vs {})",
                first.alpha.get(),
                second.alpha.get()
            )));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::domain(format!("combination weight must lie in [0, 1], got {lambda}")));
        }
        Ok(RadialProfile {
            alpha: first.alpha,
            kind: ProfileKind::Combination {
                lambda,
                first: Box::new(first),
                second: Box::new(second),
            },
        })
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    /// `b` for the logarithmic families, `None` otherwise.
    pub fn ansatz_b(&self) -> Option<f64> {
        match self.kind {
            ProfileKind::Ansatz { b } | ProfileKind::LogPower { b, .. } => Some(b),
            _ => None,
        }
    }

    /// `a` for the logarithmic families, `None` otherwise.
    pub fn ansatz_a(&self) -> Option<f64> {
        match self.kind {
            ProfileKind::Ansatz { b } => Some(ansatz_a(self.alpha.get(), b)),
            ProfileKind::LogPower { a, .. } => Some(a),
            _ => None,
        }
    }

    /// Points in `(0, 1)` where the interior evaluator is not smooth, followed
    /// by the matching point `1`. Quadrature over `[0, 1]` splits there.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = Vec::new();
        self.collect_breaks(&mut pts);
        pts.push(1.0);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    fn collect_breaks(&self, out: &mut Vec<f64>) {
        match &self.kind {
            ProfileKind::Tabulated(t) => {
                out.extend(t.nodes().iter().copied().filter(|&x| x > 0.0 && x < 1.0))
            }
            ProfileKind::Combination { first, second, .. } => {
                first.collect_breaks(out);
                second.collect_breaks(out);
            }
            _ => {}
        }
    }

    /// `[0, breaks..., 1]`, the integration partition of `[0, 1]`.
    pub fn unit_partition(&self) -> Vec<f64> {
        let mut pts = vec![0.0];
        pts.extend(self.breakpoints());
        pts
    }

    /// `[lo, breaks in (lo, hi)..., hi]` for a sub-interval of `[0, 1]`.
    pub fn partition(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts = vec![lo];
        pts.extend(self.breakpoints().into_iter().filter(|&x| x > lo && x < hi));
        pts.push(hi);
        pts
    }

    /// `H(ξ)`.
    pub fn h(&self, xi: f64) -> f64 {
        if !(xi >= 0.0) {
            return f64::NAN;
        }
        if xi > 1.0 {
            return self.tail_h(xi);
        }
        self.interior_h(xi)
    }

    fn tail_h(&self, xi: f64) -> f64 {
        xi.powf(1.0 - self.alpha.get())
    }

    fn interior_h(&self, xi: f64) -> f64 {
        match &self.kind {
            ProfileKind::Ansatz { b } => log_power_h(ansatz_a(self.alpha.get(), *b), *b, xi),
            ProfileKind::LogPower { a, b } => log_power_h(*a, *b, xi),
            ProfileKind::Monomial { exponent } => xi.powf(*exponent),
            ProfileKind::Steady => self.tail_h(xi),
            ProfileKind::Tabulated(t) => t.eval(xi),
            ProfileKind::Combination { lambda, first, second } => {
                lambda * first.interior_h(xi) + (1.0 - lambda) * second.interior_h(xi)
            }
        }
    }

    /// `H'(ξ)`. At the matching point the interior (left) derivative is
    /// returned; use [`RadialProfile::dh_sides`] for both.
    pub fn dh(&self, xi: f64) -> Result<f64> {
        if !(xi >= 0.0) || !xi.is_finite() {
            return Err(Error::domain(format!("H' requires xi >= 0, got {xi}")));
        }
        if xi > 1.0 {
            return Ok(self.tail_dh(xi));
        }
        self.interior_dh(xi)
    }

    /// One-sided derivatives `(H'(ξ⁻), H'(ξ⁺))`. They differ only at `ξ = 1`,
    /// where the interior profile meets the tail with a possible kink.
    pub fn dh_sides(&self, xi: f64) -> Result<(f64, f64)> {
        if xi == 1.0 {
            return Ok((self.interior_dh(1.0)?, self.tail_dh(1.0)));
        }
        let d = self.dh(xi)?;
        Ok((d, d))
    }

    fn tail_dh(&self, xi: f64) -> f64 {
        let alpha = self.alpha.get();
        (1.0 - alpha) * xi.powf(-alpha)
    }

    fn interior_dh(&self, xi: f64) -> Result<f64> {
        let unbounded = || Error::domain(format!("H' is unbounded at xi = {xi}"));
        match &self.kind {
            ProfileKind::Ansatz { b } => {
                log_power_dh(ansatz_a(self.alpha.get(), *b), *b, xi).ok_or_else(unbounded)
            }
            ProfileKind::LogPower { a, b } => log_power_dh(*a, *b, xi).ok_or_else(unbounded),
            ProfileKind::Monomial { exponent } => {
                let p = *exponent;
                if xi == 0.0 {
                    if p > 1.0 {
                        Ok(0.0)
                    } else if p == 1.0 {
                        Ok(1.0)
                    } else {
                        Err(unbounded())
                    }
                } else {
                    Ok(p * xi.powf(p - 1.0))
                }
            }
            ProfileKind::Steady => {
                if xi == 0.0 && self.alpha.get() != 1.0 {
                    Err(unbounded())
                } else {
                    Ok(self.tail_dh(xi))
                }
            }
            ProfileKind::Tabulated(t) => {
                let step = 1e-6 * xi.max(1.0);
                if xi - step < 0.0 {
                    Ok((t.eval(xi + step) - t.eval(xi)) / step)
                } else if xi + step > 1.0 {
                    Ok((t.eval(xi) - t.eval(xi - step)) / step)
                } else {
                    Ok((t.eval(xi + step) - t.eval(xi - step)) / (2.0 * step))
                }
            }
            ProfileKind::Combination { lambda, first, second } => {
                Ok(lambda * first.interior_dh(xi)? + (1.0 - lambda) * second.interior_dh(xi)?)
            }
        }
    }

    /// Vorticity profile `G = H' + H/ξ`, i.e. `ξ G = (ξ H)'`. At `ξ = 1` the
    /// interior value is returned.
    pub fn g(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(Error::domain(format!("G requires xi > 0, got {xi}")));
        }
        if xi > 1.0 {
            let alpha = self.alpha.get();
            return Ok((2.0 - alpha) * xi.powf(-alpha));
        }
        if let ProfileKind::Ansatz { b } = self.kind {
            let a = ansatz_a(self.alpha.get(), b);
            return Ok(xi.powf(b) * ((2.0 + b) * (1.0 - a * xi.ln()) - a));
        }
        Ok(self.interior_dh(xi)? + self.interior_h(xi) / xi)
    }

    /// `G(ξ) H(ξ)`, the self-similar pressure gradient. Returns `0` at `ξ = 0`.
    pub fn gh(&self, xi: f64) -> f64 {
        if xi == 0.0 {
            return 0.0;
        }
        match self.g(xi) {
            Ok(g) => g * self.h(xi),
            Err(_) => f64::NAN,
        }
    }
}

fn log_power_h(a: f64, b: f64, xi: f64) -> f64 {
    if xi == 0.0 {
        return 0.0;
    }
    (1.0 - a * xi.ln()) * xi.powf(1.0 + b)
}

fn log_power_dh(a: f64, b: f64, xi: f64) -> Option<f64> {
    if xi == 0.0 {
        return if b > 0.0 { Some(0.0) } else { None };
    }
    Some(xi.powf(b) * ((1.0 + b) * (1.0 - a * xi.ln()) - a))
}

/// `n` points geometrically spaced from `lo` to `hi`, both included.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l0, l1) = (lo.ln(), hi.ln());
    let mut v: Vec<f64> = (0..n)
        .map(|k| (l0 + (l1 - l0) * k as f64 / (n - 1) as f64).exp())
        .collect();
    v[0] = lo;
    v[n - 1] = hi;
    v
}

// JSON surface: {kind, alpha, b?, a?, exponent?, samples?, lambda?, first?, second?}

#[derive(Serialize, Deserialize)]
struct ProfileJson {
    kind: String,
    alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    first: Option<Box<ProfileJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    second: Option<Box<ProfileJson>>,
}

impl From<&RadialProfile> for ProfileJson {
    fn from(p: &RadialProfile) -> Self {
        let mut j = ProfileJson {
            kind: String::new(),
            alpha: p.alpha.get(),
            b: None,
            a: None,
            exponent: None,
            samples: None,
            lambda: None,
            first: None,
            second: None,
        };
        match &p.kind {
            ProfileKind::Ansatz { b } => {
                j.kind = "ansatz".into();
                j.b = Some(*b);
            }
            ProfileKind::LogPower { a, b } => {
                j.kind = "log_power".into();
                j.a = Some(*a);
                j.b = Some(*b);
            }
            ProfileKind::Monomial { exponent } => {
                j.kind = "monomial".into();
                j.exponent = Some(*exponent);
            }
            ProfileKind::Steady => j.kind = "steady".into(),
            ProfileKind::Tabulated(t) => {
                j.kind = "tabulated".into();
                j.samples = Some(t.nodes().iter().zip(t.values()).map(|(&x, &y)| [x, y]).collect());
            }
            ProfileKind::Combination { lambda, first, second } => {
                j.kind = "combination".into();
                j.lambda = Some(*lambda);
                j.first = Some(Box::new(ProfileJson::from(first.as_ref())));
                j.second = Some(Box::new(ProfileJson::from(second.as_ref())));
            }
        }
        j
    }
}

impl TryFrom<ProfileJson> for RadialProfile {
    type Error = Error;

    fn try_from(j: ProfileJson) -> Result<Self> {
        let alpha = Alpha::new(j.alpha)?;
        let missing = |field: &str| Error::Profile(format!("kind '{}' requires field '{field}'", j.kind));
        match j.kind.as_str() {
            "ansatz" => make_ansatz_profile(alpha, j.b.unwrap_or(0.0)),
            "log_power" => RadialProfile::log_power(alpha, j.a.ok_or_else(|| missing("a"))?, j.b.unwrap_or(0.0)),
            "monomial" => RadialProfile::monomial(alpha, j.exponent.ok_or_else(|| missing("exponent"))?),
            "steady" => Ok(RadialProfile::steady(alpha)),
            "tabulated" => {
                let samples: Vec<(f64, f64)> = j
                    .samples
                    .as_ref()
                    .ok_or_else(|| missing("samples"))?
                    .iter()
                    .map(|s| (s[0], s[1]))
                    .collect();
                RadialProfile::tabulated(alpha, &samples)
            }
            "combination" => {
                let lambda = j.lambda.ok_or_else(|| missing("lambda"))?;
                let first = RadialProfile::try_from(*j.first.ok_or_else(|| missing("first"))?)?;
                let second = RadialProfile::try_from(*j.second.ok_or_else(|| missing("second"))?)?;
                if first.alpha != alpha {
                    return Err(Error::Profile("combination parts must share the outer alpha".into()));
                }
                RadialProfile::combination(first, second, lambda)
            }
            other => Err(Error::Profile(format!("unknown profile kind '{other}'"))),
        }
    }
}

impl Serialize for RadialProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProfileJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RadialProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ProfileJson::deserialize(d)?;
        RadialProfile::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    #[test]
    fn alpha_range() {
        assert!(Alpha::new(0.0).is_err());
        assert!(Alpha::new(2.0).is_err());
        assert!(Alpha::new(f64::NAN).is_err());
        assert!(Alpha::new(1.999).is_ok());
    }

    #[test]
    fn ansatz_a_values() {
        let p = AnsatzParams::new(alpha(1.0), 0.0).unwrap();
        assert!((p.a() - 4.0 / 3.0).abs() < 1e-15);
        let p = AnsatzParams::new(alpha(1.0), 1.0).unwrap();
        assert!((p.a() - 10.0 / 3.0).abs() < 1e-15);
        assert!(AnsatzParams::new(alpha(1.0), -0.1).is_err());
    }

    #[test]
    fn boundary_values_exact() {
        for k in 1..=19 {
            for b in [0.0, 0.5, 1.0] {
                let p = make_ansatz_profile(alpha(0.1 * k as f64), b).unwrap();
                assert_eq!(p.h(0.0), 0.0);
                assert_eq!(p.h(1.0), 1.0);
            }
        }
    }

    #[test]
    fn eval_h_examples() {
        let p = make_ansatz_profile(alpha(1.0), 0.0).unwrap();
        let e1 = (-1.0f64).exp();
        assert!((p.h(e1) - 7.0 / 3.0 * e1).abs() < 1e-15);
        let p = make_ansatz_profile(alpha(0.5), 0.0).unwrap();
        assert!((p.h(4.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let p = make_ansatz_profile(alpha(0.5), 0.0).unwrap();
        assert!((p.dh(4.0).unwrap() - 0.25).abs() < 1e-15);
        let p = make_ansatz_profile(alpha(1.0), 0.0).unwrap();
        let (l, r) = p.dh_sides(1.0).unwrap();
        assert!((l + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r, 0.0);
        let p = make_ansatz_profile(alpha(1.0), 1.0).unwrap();
        assert!((p.dh_sides(1.0).unwrap().0 + 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn derivative_unbounded_at_origin_for_b0() {
        let p = make_ansatz_profile(alpha(1.0), 0.0).unwrap();
        assert!(p.dh(0.0).is_err());
        let p = make_ansatz_profile(alpha(1.0), 0.5).unwrap();
        assert_eq!(p.dh(0.0).unwrap(), 0.0);
    }

    #[test]
    fn vorticity_examples() {
        let p = make_ansatz_profile(alpha(1.0), 0.0).unwrap();
        let a = 4.0 / 3.0;
        for xi in [0.1, 0.5, 0.9] {
            let expected = 2.0 - a - 2.0 * a * f64::ln(xi);
            assert!((p.g(xi).unwrap() - expected).abs() < 1e-14);
        }
        assert!((p.g(1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((p.g(2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(p.g(0.0).is_err());
        let rigid = RadialProfile::monomial(alpha(1.0), 1.0).unwrap();
        for xi in [0.01, 0.3, 0.99] {
            assert!((rigid.g(xi).unwrap() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn tabulated_preserves_endpoints_and_monotone_data() {
        let src = make_ansatz_profile(alpha(1.0), 0.5).unwrap();
        let t = RadialProfile::tabulate(&src, 200).unwrap();
        assert_eq!(t.h(0.0), 0.0);
        assert_eq!(t.h(1.0), 1.0);
        for xi in [1e-4, 0.01, 0.3, 0.77] {
            assert!((t.h(xi) - src.h(xi)).abs() < 1e-4, "xi={xi}");
        }
        // Monotone data stays monotone between nodes.
        let mono = RadialProfile::tabulated(alpha(1.0), &[(0.0, 0.0), (0.2, 0.1), (0.5, 0.95), (1.0, 1.0)]).unwrap();
        let mut prev = 0.0;
        for k in 1..=1000 {
            let v = mono.h(k as f64 / 1000.0);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn tabulated_rejects_bad_endpoints() {
        let a = alpha(1.0);
        assert!(RadialProfile::tabulated(a, &[(0.0, 0.1), (0.5, 0.5), (1.0, 1.0)]).is_err());
        assert!(RadialProfile::tabulated(a, &[(0.0, 0.0), (0.5, 0.5), (1.0, 0.9)]).is_err());
        assert!(RadialProfile::tabulated(a, &[(0.0, 0.0), (0.5, 0.5), (0.4, 0.6), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn combination_rules() {
        let p1 = make_ansatz_profile(alpha(1.0), 0.0).unwrap();
        let p2 = make_ansatz_profile(alpha(1.0), 1.0).unwrap();
        let c = RadialProfile::combination(p1.clone(), p2.clone(), 0.0).unwrap();
        let same = RadialProfile::combination(p1.clone(), p1.clone(), 0.5).unwrap();
        for xi in [0.0, 0.2, 0.7, 1.0, 3.0] {
            assert_eq!(c.h(xi), p2.h(xi));
            assert!((same.h(xi) - p1.h(xi)).abs() < 1e-15);
        }
        let other = make_ansatz_profile(alpha(1.2), 0.0).unwrap();
        assert!(RadialProfile::combination(p1, other, 0.5).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let p1 = make_ansatz_profile(alpha(0.8), 0.25).unwrap();
        let p2 = RadialProfile::tabulate(&make_ansatz_profile(alpha(0.8), 0.0).unwrap(), 16).unwrap();
        let c = RadialProfile::combination(p1, p2, 0.3).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: RadialProfile = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        let s = r#"{"kind":"ansatz","alpha":1.0,"b":0.0}"#;
        let p: RadialProfile = serde_json::from_str(s).unwrap();
        assert_eq!(p.ansatz_a(), Some(4.0 / 3.0));
        assert!(serde_json::from_str::<RadialProfile>(r#"{"kind":"ansatz","alpha":2.5}"#).is_err());
        assert!(serde_json::from_str::<RadialProfile>(r#"{"kind":"spline","alpha":1.0}"#).is_err());
    }
}
