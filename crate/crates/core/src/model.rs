//! Probability-law vocabulary: noise families, integer lattice step laws, and
//! the smoothed-sum scenario consumed by every other module.
//!
//! The three built-in noise families realize the qualitatively different
//! characteristic-function regimes the experiments need:
//!
//! * `gaussian(sigma)` — CF never vanishes (control case),
//! * `uniform_width(w)` — sinc CF; for w = 2 it vanishes on all nonzero
//!   multiples of pi, for w = 1 it does not,
//! * `triangular_cf(T)` — Fejer-type law whose CF is the triangle
//!   `max(0, 1 - |t|/T)`, the canonical compactly supported CF. Its density has
//!   1/x^2 tails, so it has **no finite second moment**; `second_moment()`
//!   returns infinity and moment-based functionals must not be applied to it.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::special::ln_gamma;
use crate::{Error, Result};

/// E|N(0,1)|^3 = 2 sqrt(2/pi).
const STD_NORMAL_ABS3: f64 = 1.595_769_121_605_730_7;

/// Parameters of a continuous noise law.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseFamily {
    /// Centered normal with standard deviation `sigma`.
    Gaussian { sigma: f64 },
    /// Uniform on (-w/2, w/2).
    UniformWidth { w: f64 },
    /// Fejer-type law with CF `max(0, 1 - |t|/T)`.
    TriangularCf { t: f64 },
    /// User-supplied even CF tabulated on [0, t_max] at uniform spacing;
    /// derivative and density come from the interpolant (documented accuracy
    /// loss versus the closed-form families).
    CustomCf { t_max: f64, samples: Vec<f64> },
}

/// A continuous noise law with closed-form density and characteristic
/// function. All built-in families are symmetric, so the CF is real.
#[derive(Debug, Clone)]
pub struct NoiseModel {
    family: NoiseFamily,
    second_moment: f64,
    beta3: Option<f64>,
    cf_support_radius: Option<f64>,
}

impl NoiseModel {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Precondition(format!("gaussian sigma must be positive, got {sigma}")));
        }
        Ok(Self {
            family: NoiseFamily::Gaussian { sigma },
            second_moment: sigma * sigma,
            beta3: Some(sigma * sigma * sigma * STD_NORMAL_ABS3),
            cf_support_radius: None,
        })
    }

    pub fn uniform_width(w: f64) -> Result<Self> {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::Precondition(format!("uniform width must be positive, got {w}")));
        }
        Ok(Self {
            family: NoiseFamily::UniformWidth { w },
            second_moment: w * w / 12.0,
            // int |x|^3 / w over (-w/2, w/2) = w^3 / 32
            beta3: Some(w * w * w / 32.0),
            cf_support_radius: None,
        })
    }

    pub fn triangular_cf(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Precondition(format!(
                "triangular CF support radius must be positive, got {t}"
            )));
        }
        Ok(Self {
            family: NoiseFamily::TriangularCf { t },
            second_moment: f64::INFINITY,
            beta3: None,
            cf_support_radius: Some(t),
        })
    }

    /// Even CF tabulated at uniform spacing on [0, t_max] (first sample must
    /// be 1 = f(0), last should decay to ~0). Treated as 0 beyond t_max.
    pub fn custom_cf(t_max: f64, samples: Vec<f64>) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) || samples.len() < 8 {
            return Err(Error::Precondition(
                "custom CF needs t_max > 0 and at least 8 samples".into(),
            ));
        }
        if (samples[0] - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!(
                "custom CF must have f(0) = 1, got {}",
                samples[0]
            )));
        }
        if samples.iter().any(|v| !v.is_finite() || v.abs() > 1.0 + 1e-12) {
            return Err(Error::Precondition("custom CF samples must lie in [-1, 1]".into()));
        }
        // second moment = -f''(0), one-sided second difference of the even
        // extension: f(-h) = f(h)
        let h = t_max / (samples.len() - 1) as f64;
        let second_moment = (2.0 * (samples[0] - samples[1]) / (h * h)).max(0.0);
        Ok(Self {
            family: NoiseFamily::CustomCf { t_max, samples },
            second_moment,
            beta3: None,
            cf_support_radius: Some(t_max),
        })
    }

    pub fn family(&self) -> &NoiseFamily {
        &self.family
    }

    /// Short lowercase tag used in reports and tables.
    pub fn family_tag(&self) -> String {
        match &self.family {
            NoiseFamily::Gaussian { sigma } => format!("gaussian({sigma})"),
            NoiseFamily::UniformWidth { w } => format!("uniform_width({w})"),
            NoiseFamily::TriangularCf { t } => format!("triangular_cf({t})"),
            NoiseFamily::CustomCf { .. } => "custom_cf".into(),
        }
    }

    /// E X^2; infinite for the triangular-CF family.
    pub fn second_moment(&self) -> f64 {
        self.second_moment
    }

    /// E |X|^3 when finite and known in closed form.
    pub fn beta3(&self) -> Option<f64> {
        self.beta3
    }

    /// Radius T with f(t) = 0 for |t| > T, when the CF is compactly supported.
    pub fn cf_support_radius(&self) -> Option<f64> {
        self.cf_support_radius
    }

    /// Noise density p(x).
    pub fn density(&self, x: f64) -> f64 {
        match &self.family {
            NoiseFamily::Gaussian { sigma } => {
                let z = x / sigma;
                crate::special::INV_SQRT_2PI / sigma * (-0.5 * z * z).exp()
            }
            NoiseFamily::UniformWidth { w } => {
                let half = w / 2.0;
                if x.abs() < half {
                    1.0 / w
                } else if x.abs() == half {
                    // jump convention: average of one-sided limits
                    0.5 / w
                } else {
                    0.0
                }
            }
            NoiseFamily::TriangularCf { t } => {
                // (T / 2pi) * sinc^2(T x / 2)
                t / (2.0 * std::f64::consts::PI) * sinc_sq(t * x / 2.0)
            }
            NoiseFamily::CustomCf { t_max, samples } => {
                // cosine inversion of the tabulated even CF by the midpoint
                // rule on its own sample spacing
                let m = samples.len() - 1;
                let h = t_max / m as f64;
                let mut acc = 0.0;
                for j in 0..m {
                    let t = (j as f64 + 0.5) * h;
                    let f = interp_even(samples, *t_max, t);
                    acc += f * (t * x).cos();
                }
                (acc * h / std::f64::consts::PI).max(0.0)
            }
        }
    }

    /// Characteristic function f(t) = E e^{itX} (real: all families are even).
    pub fn cf(&self, tv: f64) -> f64 {
        match &self.family {
            NoiseFamily::Gaussian { sigma } => {
                let st = sigma * tv;
                (-0.5 * st * st).exp()
            }
            NoiseFamily::UniformWidth { w } => sinc(w * tv / 2.0),
            NoiseFamily::TriangularCf { t } => (1.0 - tv.abs() / t).max(0.0),
            NoiseFamily::CustomCf { t_max, samples } => interp_even(samples, *t_max, tv),
        }
    }

    /// Derivative f'(t) of the characteristic function. For the triangular
    /// family the kink at t = 0 is resolved by symmetry (f'(0) = 0); for the
    /// custom family this is a central difference with step 1e-4.
    pub fn cf_deriv(&self, tv: f64) -> f64 {
        match &self.family {
            NoiseFamily::Gaussian { sigma } => {
                let s2 = sigma * sigma;
                -s2 * tv * (-0.5 * s2 * tv * tv).exp()
            }
            NoiseFamily::UniformWidth { w } => w / 2.0 * sinc_deriv(w * tv / 2.0),
            NoiseFamily::TriangularCf { t } => {
                if tv == 0.0 || tv.abs() >= *t {
                    0.0
                } else {
                    -tv.signum() / t
                }
            }
            NoiseFamily::CustomCf { t_max, samples } => {
                let h = 1e-4;
                (interp_even(samples, *t_max, tv + h) - interp_even(samples, *t_max, tv - h))
                    / (2.0 * h)
            }
        }
    }
}

/// sin(u)/u with a series branch near the removable singularity.
fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sin() / u
    }
}

/// sinc(u)^2, stable near 0.
fn sinc_sq(u: f64) -> f64 {
    let s = sinc(u);
    s * s
}

/// d/du [sin(u)/u] = (u cos u - sin u) / u^2.
fn sinc_deriv(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        -u / 3.0 + u * u2 / 30.0
    } else {
        (u * u.cos() - u.sin()) / (u * u)
    }
}

/// Linear interpolation of an even function tabulated on [0, t_max]; zero
/// outside the table.
fn interp_even(samples: &[f64], t_max: f64, t: f64) -> f64 {
    let a = t.abs();
    if a >= t_max {
        return 0.0;
    }
    let m = samples.len() - 1;
    let pos = a / t_max * m as f64;
    let i = (pos.floor() as usize).min(m - 1);
    let frac = pos - i as f64;
    samples[i] * (1.0 - frac) + samples[i + 1] * frac
}

/// Build a noise model from a family tag and a key -> value parameter map
/// (the shape the scenario config file uses).
pub fn make_noise(family: &str, params: &BTreeMap<String, f64>) -> Result<NoiseModel> {
    let get = |key: &str| {
        params
            .get(key)
            .copied()
            .ok_or_else(|| Error::Config(format!("noise family {family} needs params.{key}")))
    };
    match family {
        "gaussian" => NoiseModel::gaussian(get("sigma")?),
        "uniform_width" => NoiseModel::uniform_width(get("w")?),
        "triangular_cf" => NoiseModel::triangular_cf(get("t").or_else(|_| get("T"))?),
        "custom_cf" => Err(Error::Config(
            "custom_cf noise cannot be built from scalar params; use NoiseModel::custom_cf".into(),
        )),
        other => Err(Error::Config(format!("unknown noise family: {other}"))),
    }
}

/// A finite-support probability law on the integer lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeLaw {
    /// (support point, probability), sorted by support point, probabilities
    /// positive and summing to 1.
    atoms: Vec<(i64, f64)>,
    mean: f64,
    variance: f64,
    beta3: f64,
}

impl LatticeLaw {
    /// Build from a pmf map; probabilities must be nonnegative and sum to 1
    /// within 1e-9 (then exactly normalized). Zero-probability atoms are
    /// dropped.
    pub fn new(pmf: &BTreeMap<i64, f64>) -> Result<Self> {
        let mut atoms: Vec<(i64, f64)> = Vec::new();
        let mut total = 0.0;
        for (&k, &p) in pmf {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::Precondition(format!("pmf({k}) = {p} is not a probability")));
            }
            if p > 0.0 {
                atoms.push((k, p));
                total += p;
            }
        }
        if atoms.is_empty() {
            return Err(Error::Precondition("pmf has no positive atoms".into()));
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Precondition(format!("pmf mass {total} is not 1")));
        }
        for (_, p) in &mut atoms {
            *p /= total;
        }
        let mean: f64 = atoms.iter().map(|&(k, p)| k as f64 * p).sum();
        let variance: f64 = atoms.iter().map(|&(k, p)| (k as f64 - mean).powi(2) * p).sum();
        let beta3: f64 = atoms.iter().map(|&(k, p)| (k as f64).abs().powi(3) * p).sum();
        Ok(Self { atoms, mean, variance, beta3 })
    }

    /// Symmetric two-point law on {-1, +1}: mean 0, variance 1, E|Y|^3 = 1.
    pub fn bernoulli_symmetric() -> Self {
        let mut pmf = BTreeMap::new();
        pmf.insert(-1, 0.5);
        pmf.insert(1, 0.5);
        Self::new(&pmf).expect("two-point law is always valid")
    }

    pub fn atoms(&self) -> &[(i64, f64)] {
        &self.atoms
    }
    pub fn mean(&self) -> f64 {
        self.mean
    }
    pub fn variance(&self) -> f64 {
        self.variance
    }
    /// E|Y|^3 about the origin.
    pub fn beta3(&self) -> f64 {
        self.beta3
    }

    /// Characteristic function v(t) = sum_k pmf(k) e^{ikt}.
    pub fn cf(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(k, p) in &self.atoms {
            acc += p * Complex64::from_polar(1.0, k as f64 * t);
        }
        acc
    }

    fn is_bernoulli_symmetric(&self) -> bool {
        self.atoms == [(-1, 0.5), (1, 0.5)]
    }

    /// Distribution of the n-fold i.i.d. sum S_n, as (lattice point, weight)
    /// pairs in increasing support order. The symmetric two-point law uses
    /// exact log-space binomial weights (accurate to n = 1024 and beyond);
    /// general laws use iterative convolution, guarded by a support budget.
    pub fn power_pmf(&self, n: u32) -> Result<Vec<(i64, f64)>> {
        if n == 0 {
            return Err(Error::Precondition("need n >= 1".into()));
        }
        if self.is_bernoulli_symmetric() {
            let nf = n as f64;
            let ln2 = std::f64::consts::LN_2;
            let lng_n1 = ln_gamma(nf + 1.0);
            let mut out = Vec::with_capacity(n as usize + 1);
            for j in 0..=n {
                let jf = j as f64;
                let lnw =
                    lng_n1 - ln_gamma(jf + 1.0) - ln_gamma(nf - jf + 1.0) - nf * ln2;
                out.push((2 * j as i64 - n as i64, lnw.exp()));
            }
            return Ok(out);
        }
        let lo0 = self.atoms.first().unwrap().0;
        let hi0 = self.atoms.last().unwrap().0;
        let span = (hi0 - lo0) as i128 * n as i128;
        if span > 1 << 22 {
            return Err(Error::Precondition(format!(
                "n = {n} makes the lattice support too large ({span} points)"
            )));
        }
        // iterative convolution over a dense offset array
        let mut lo = lo0;
        let mut cur: Vec<f64> = {
            let width = (hi0 - lo0) as usize + 1;
            let mut v = vec![0.0; width];
            for &(k, p) in &self.atoms {
                v[(k - lo0) as usize] = p;
            }
            v
        };
        for _ in 1..n {
            let new_lo = lo + lo0;
            let new_len = cur.len() + (hi0 - lo0) as usize;
            let mut next = vec![0.0; new_len];
            for (i, &w) in cur.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                for &(k, p) in &self.atoms {
                    next[i + (k - lo0) as usize] += w * p;
                }
            }
            cur = next;
            lo = new_lo;
        }
        Ok(cur
            .into_iter()
            .enumerate()
            .filter(|&(_, w)| w > 0.0)
            .map(|(i, w)| (lo + i as i64, w))
            .collect())
    }
}

/// E|Y|^3 of a lattice step law (the third-moment quantity that sets the
/// compact-CF support radius 1/beta3 in the experiments).
pub fn third_abs_moment(step: &LatticeLaw) -> f64 {
    step.beta3()
}

/// A smoothed-sum experiment: Z_n = (X + Y_1 + ... + Y_n) / sqrt(n) with noise
/// X and i.i.d. lattice steps Y_i. `dimension = 2` means the independent
/// product of two identical copies of the d = 1 scenario, one per coordinate.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub noise: NoiseModel,
    pub step: LatticeLaw,
    pub n_values: Vec<u32>,
    pub dimension: u8,
}

impl Scenario {
    pub fn new(noise: NoiseModel, step: LatticeLaw, n_values: Vec<u32>, dimension: u8) -> Result<Self> {
        if !(dimension == 1 || dimension == 2) {
            return Err(Error::Precondition(format!("dimension must be 1 or 2, got {dimension}")));
        }
        if n_values.is_empty() {
            return Err(Error::Precondition("n_values must be nonempty".into()));
        }
        if n_values[0] == 0 || n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(format!(
                "n_values must be strictly increasing positive integers, got {n_values:?}"
            )));
        }
        Ok(Self { noise, step, n_values, dimension })
    }

    /// The d = 1 scenario underlying each coordinate.
    pub fn component(&self) -> Scenario {
        Scenario { dimension: 1, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_core::{RngCore, SeedableRng};

    fn uniform01(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Adaptive Simpson quadrature for the closed-form moment checks.
    fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
            (b - a) / 6.0 * (fa + 4.0 * fm + fb)
        }
        #[allow(clippy::too_many_arguments)]
        fn rec(
            f: &impl Fn(f64) -> f64,
            a: f64,
            fa: f64,
            b: f64,
            fb: f64,
            fm: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = simpson(a, fa, m, fm, flm);
            let right = simpson(m, fm, b, fb, frm);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, fa, m, fm, flm, left, tol / 2.0, depth - 1)
                    + rec(f, m, fm, b, fb, frm, right, tol / 2.0, depth - 1)
            }
        }
        let fa = f(a);
        let fb = f(b);
        let fm = f(0.5 * (a + b));
        let whole = simpson(a, fa, b, fb, fm);
        rec(f, a, fa, b, fb, fm, whole, tol, 40)
    }

    #[test]
    fn gaussian_cf_values() {
        let x = NoiseModel::gaussian(1.0).unwrap();
        assert_eq!(x.cf(0.0), 1.0);
        let fpi = x.cf(std::f64::consts::PI);
        let want = (-0.5 * std::f64::consts::PI * std::f64::consts::PI).exp();
        assert!((fpi - want).abs() < 1e-15, "f(pi) = {fpi} want {want}");
        assert!((x.second_moment() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_cf_vanishes_on_pi_lattice_only_for_width_two() {
        let w2 = NoiseModel::uniform_width(2.0).unwrap();
        for k in 1..=8 {
            let v = w2.cf(std::f64::consts::PI * k as f64);
            assert!(v.abs() < 1e-15, "width 2, k = {k}: {v}");
        }
        let w1 = NoiseModel::uniform_width(1.0).unwrap();
        let v = w1.cf(std::f64::consts::PI);
        assert!((v - 2.0 / std::f64::consts::PI).abs() < 1e-15, "width 1: {v}");
        assert!((w1.second_moment() - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn triangular_family_has_compact_cf_and_infinite_energy() {
        let x = NoiseModel::triangular_cf(1.0).unwrap();
        assert_eq!(x.cf_support_radius(), Some(1.0));
        assert_eq!(x.cf(0.0), 1.0);
        assert_eq!(x.cf(1.5), 0.0);
        assert!((x.cf(0.25) - 0.75).abs() < 1e-15);
        assert!(x.second_moment().is_infinite());
        assert!(x.beta3().is_none());
        // density closed form at x = 1: (1/2pi) * (sin(1/2)/(1/2))^2 = (1 - cos 1)/pi
        let want = (1.0 - 1.0_f64.cos()) / std::f64::consts::PI;
        assert!((x.density(1.0) - want).abs() < 1e-15);
        // nonnegative across the default window
        let spec = crate::grid::GridSpec::default_grid();
        for i in 0..spec.cells() {
            assert!(x.density(spec.node(i)) >= 0.0);
        }
    }

    #[test]
    fn densities_integrate_to_one_with_declared_second_moment() {
        // adaptive quadrature over the effective support, split at any jumps
        let g = NoiseModel::gaussian(1.3).unwrap();
        let mass = adaptive_simpson(&|x| g.density(x), -14.0, 14.0, 1e-12);
        assert!((mass - 1.0).abs() < 1e-8, "gaussian mass {mass}");
        let m2 = adaptive_simpson(&|x| x * x * g.density(x), -14.0, 14.0, 1e-12);
        assert!((m2 - g.second_moment()).abs() < 1e-8, "gaussian m2 {m2}");

        let u = NoiseModel::uniform_width(1.7).unwrap();
        let half = 1.7 / 2.0;
        let mass = adaptive_simpson(&|x| u.density(x), -half, half, 1e-12);
        assert!((mass - 1.0).abs() < 1e-8, "uniform mass {mass}");
        let m2 = adaptive_simpson(&|x| x * x * u.density(x), -half, half, 1e-12);
        assert!((m2 - u.second_moment()).abs() < 1e-8, "uniform m2 {m2}");
    }

    #[test]
    fn cf_derivative_matches_central_difference() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6d6f64656c);
        let noises = [
            NoiseModel::gaussian(0.7).unwrap(),
            NoiseModel::uniform_width(2.0).unwrap(),
            NoiseModel::triangular_cf(1.0).unwrap(),
        ];
        let h = 1e-6;
        for noise in &noises {
            let mut checked = 0;
            while checked < 200 {
                let t = (uniform01(&mut rng) - 0.5) * 12.0;
                // keep clear of kinks (triangle at 0 and +-T) and of sinc's
                // removable singularity
                if t.abs() < 0.05 {
                    continue;
                }
                if let Some(r) = noise.cf_support_radius() {
                    if (t.abs() - r).abs() < 0.05 || t.abs() > r - 0.05 {
                        continue;
                    }
                }
                let numeric = (noise.cf(t + h) - noise.cf(t - h)) / (2.0 * h);
                let exact = noise.cf_deriv(t);
                let scale = exact.abs().max(1e-3);
                assert!(
                    (numeric - exact).abs() / scale < 1e-5,
                    "{} at t = {t}: {numeric} vs {exact}",
                    noise.family_tag()
                );
                checked += 1;
            }
        }
    }

    #[test]
    fn make_noise_dispatches_and_validates() {
        let mut params = BTreeMap::new();
        params.insert("w".to_string(), 2.0);
        let u = make_noise("uniform_width", &params).unwrap();
        assert!((u.cf(1.0) - 1.0_f64.sin()).abs() < 1e-15);
        assert!(make_noise("uniform_width", &BTreeMap::new()).is_err());
        assert!(make_noise("frobnicate", &params).is_err());
        let mut params = BTreeMap::new();
        params.insert("sigma".to_string(), -1.0);
        assert!(make_noise("gaussian", &params).is_err());
    }

    #[test]
    fn custom_cf_tracks_its_source_family() {
        // tabulate the gaussian CF and compare the interpolated model
        let src = NoiseModel::gaussian(1.0).unwrap();
        let t_max = 12.0;
        let m = 24_000;
        let samples: Vec<f64> = (0..=m).map(|i| src.cf(t_max * i as f64 / m as f64)).collect();
        let custom = NoiseModel::custom_cf(t_max, samples).unwrap();
        assert!((custom.cf(1.3) - src.cf(1.3)).abs() < 1e-7);
        assert!((custom.cf_deriv(1.3) - src.cf_deriv(1.3)).abs() < 1e-4);
        assert!((custom.second_moment() - 1.0).abs() < 1e-3);
        assert!((custom.density(0.4) - src.density(0.4)).abs() < 1e-4);
    }

    #[test]
    fn lattice_law_moments() {
        let b = LatticeLaw::bernoulli_symmetric();
        assert_eq!(b.mean(), 0.0);
        assert_eq!(b.variance(), 1.0);
        assert_eq!(third_abs_moment(&b), 1.0);

        let mut pmf = BTreeMap::new();
        pmf.insert(-2, 0.25);
        pmf.insert(0, 0.5);
        pmf.insert(2, 0.25);
        let y = LatticeLaw::new(&pmf).unwrap();
        assert_eq!(third_abs_moment(&y), 4.0);
        assert_eq!(y.variance(), 2.0);

        let mut pmf = BTreeMap::new();
        pmf.insert(0, 1.0);
        let point = LatticeLaw::new(&pmf).unwrap();
        assert_eq!(third_abs_moment(&point), 0.0);
    }

    #[test]
    fn lattice_law_rejects_bad_pmfs() {
        let mut pmf = BTreeMap::new();
        pmf.insert(0, 0.7);
        pmf.insert(1, 0.2);
        assert!(LatticeLaw::new(&pmf).is_err());
        let mut pmf = BTreeMap::new();
        pmf.insert(0, -0.5);
        pmf.insert(1, 1.5);
        assert!(LatticeLaw::new(&pmf).is_err());
    }

    #[test]
    fn step_cf_is_cosine_for_symmetric_two_point() {
        let b = LatticeLaw::bernoulli_symmetric();
        for &t in &[0.0, 0.3, 1.0, 2.5, -1.7] {
            let v = b.cf(t);
            assert!((v.re - t.cos()).abs() < 1e-15);
            assert!(v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn binomial_power_pmf_matches_convolution_and_scale() {
        let b = LatticeLaw::bernoulli_symmetric();
        let exact = b.power_pmf(4).unwrap();
        let want = [(-4, 1.0 / 16.0), (-2, 4.0 / 16.0), (0, 6.0 / 16.0), (2, 4.0 / 16.0), (4, 1.0 / 16.0)];
        for (&(k, w), &(ke, we)) in exact.iter().zip(&want) {
            assert_eq!(k, ke);
            assert!((w - we).abs() < 1e-14, "k = {k}: {w}");
        }
        // deep regime: weights stay normalized and match closed binomials
        let deep = b.power_pmf(1024).unwrap();
        let mass: f64 = deep.iter().map(|&(_, w)| w).sum();
        assert!((mass - 1.0).abs() < 1e-12, "mass {mass}");
        let center = deep.iter().find(|&&(k, _)| k == 0).unwrap().1;
        assert!((center - 0.024_927_805_892_979_54).abs() < 1e-14, "P(S = 0) = {center}");
        let mid = b.power_pmf(256).unwrap();
        let far = mid.iter().find(|&&(k, _)| k == 80).unwrap().1;
        assert!((far / 1.581_126_102_907_853e-7 - 1.0).abs() < 1e-10, "P(S = 80) = {far}");
    }

    #[test]
    fn general_power_pmf_by_convolution() {
        let mut pmf = BTreeMap::new();
        pmf.insert(0, 0.5);
        pmf.insert(1, 0.5);
        let y = LatticeLaw::new(&pmf).unwrap();
        let p3 = y.power_pmf(3).unwrap();
        let want = [(0, 0.125), (1, 0.375), (2, 0.375), (3, 0.125)];
        for (&(k, w), &(ke, we)) in p3.iter().zip(&want) {
            assert_eq!(k, ke);
            assert!((w - we).abs() < 1e-15);
        }
    }

    #[test]
    fn scenario_validation() {
        let noise = NoiseModel::gaussian(1.0).unwrap();
        let step = LatticeLaw::bernoulli_symmetric();
        assert!(Scenario::new(noise.clone(), step.clone(), vec![1, 4, 16], 1).is_ok());
        assert!(Scenario::new(noise.clone(), step.clone(), vec![4, 4], 1).is_err());
        assert!(Scenario::new(noise.clone(), step.clone(), vec![], 1).is_err());
        assert!(Scenario::new(noise.clone(), step.clone(), vec![0, 4], 1).is_err());
        assert!(Scenario::new(noise, step, vec![4], 3).is_err());
    }
}
