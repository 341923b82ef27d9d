//! Test functions for the explicit formula and their transforms.
//!
//! A test function lives on [0, X] and is extended to the whole line by
//! g(-x) = conj(g(x)). Its transform is
//!
//! ```text
//! h(z) = ∫₀^X [ g(x) e^{ixz} + conj(g(x)) e^{-ixz} ] dx,
//! ```
//!
//! the full-line Fourier transform of the Hermitian extension, which is real
//! on the real axis.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_with, QuadOptions, QuadratureResult};

pub const DEFAULT_STRIP: f64 = 2.0;
/// Target accuracy of a transform, relative to ∫|g|.
const TRANSFORM_REL_TOL: f64 = 1e-14;

type Profile = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    /// exp(-1/(1-t²)), t = (x - center)/width, zero for |t| ≥ 1.
    Bump { center: f64, width: f64 },
    Custom(Profile),
}

#[derive(Clone)]
struct Term {
    weight: Complex64,
    shape: Shape,
}

/// A smooth function g: [0, X] → ℂ vanishing to all orders at X.
#[derive(Clone)]
pub struct TestFunction {
    support: f64,
    terms: Vec<Term>,
    strip: f64,
    smoothness_scale: f64,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("TestFunction");
        d.field("support", &self.support);
        for t in &self.terms {
            match t.shape {
                Shape::Bump { center, width } => d.field("bump", &(t.weight, center, width)),
                Shape::Custom(_) => d.field("custom", &t.weight),
            };
        }
        d.finish()
    }
}

fn bump(t: f64) -> f64 {
    let u = 1.0 - t * t;
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

/// The canonical compactly supported bump rescaled to [center-width, center+width].
pub fn make_bump(support: f64, center: f64, width: f64) -> Result<TestFunction> {
    let finite = support.is_finite() && center.is_finite() && width.is_finite();
    if !finite || support <= 0.0 || width <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "bump needs X > 0 and width > 0, got X = {support}, width = {width}"
        )));
    }
    let (lo, hi) = (center - width, center + width);
    // allow for rounding in center ± width
    let slack = 1e-12 * support;
    if lo < -slack || hi > support + slack {
        return Err(Error::Geometry { lo, hi, support });
    }
    let mut tf = TestFunction {
        support,
        terms: vec![Term {
            weight: Complex64::new(1.0, 0.0),
            shape: Shape::Bump { center, width },
        }],
        strip: DEFAULT_STRIP,
        smoothness_scale: 0.0,
    };
    tf.smoothness_scale = tf.estimate_smoothness();
    Ok(tf)
}

impl TestFunction {
    /// Wraps an arbitrary profile on [0, X]. The profile must vanish to high
    /// order at X; this is checked on a short stencil.
    pub fn custom<G>(support: f64, g: G) -> Result<TestFunction>
    where
        G: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        if !(support.is_finite() && support > 0.0) {
            return Err(Error::InvalidArgument(format!("support bound must be positive, got {support}")));
        }
        let scale = (0..=64)
            .map(|k| g(support * k as f64 / 64.0).norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        for k in 0..4 {
            let x = support * (1.0 - k as f64 * 1e-4);
            let v = g(x).norm();
            if !v.is_finite() || v > 1e-10 * scale {
                return Err(Error::InvalidArgument(format!(
                    "profile does not vanish at the support bound: |g({x})| = {v:e}"
                )));
            }
        }
        if !g(0.0).norm().is_finite() {
            return Err(Error::InvalidArgument("profile is not finite at x = 0".into()));
        }
        let mut tf = TestFunction {
            support,
            terms: vec![Term {
                weight: Complex64::new(1.0, 0.0),
                shape: Shape::Custom(Arc::new(g)),
            }],
            strip: DEFAULT_STRIP,
            smoothness_scale: 0.0,
        };
        tf.smoothness_scale = tf.estimate_smoothness();
        Ok(tf)
    }

    /// Σ wᵢ·gᵢ on the largest of the supports.
    pub fn linear_combination(parts: &[(Complex64, &TestFunction)]) -> Result<TestFunction> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("empty test-function combination".into()));
        }
        let support = parts.iter().map(|(_, t)| t.support).fold(0.0, f64::max);
        let strip = parts.iter().map(|(_, t)| t.strip).fold(f64::INFINITY, f64::min);
        let terms = parts
            .iter()
            .flat_map(|(w, t)| {
                t.terms.iter().map(move |term| Term {
                    weight: term.weight * *w,
                    shape: term.shape.clone(),
                })
            })
            .collect();
        let mut tf = TestFunction {
            support,
            terms,
            strip,
            smoothness_scale: 0.0,
        };
        tf.smoothness_scale = tf.estimate_smoothness();
        Ok(tf)
    }

    pub fn with_strip(mut self, strip: f64) -> Self {
        self.strip = strip;
        self
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn strip(&self) -> f64 {
        self.strip
    }

    /// max(|g|, |g'|, |g''|) estimated by finite differences on 64 nodes.
    pub fn smoothness_scale(&self) -> f64 {
        self.smoothness_scale
    }

    /// g(x); zero outside [0, X].
    pub fn eval(&self, x: f64) -> Complex64 {
        if !(0.0..=self.support).contains(&x) {
            return Complex64::new(0.0, 0.0);
        }
        self.terms
            .iter()
            .map(|t| t.weight * eval_shape(&t.shape, x))
            .sum()
    }

    /// True when every term is real-valued (weights real, profiles bumps).
    pub fn is_real(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.weight.im == 0.0 && matches!(t.shape, Shape::Bump { .. }))
    }

    fn estimate_smoothness(&self) -> f64 {
        let n = 64;
        let h = self.support / n as f64;
        let vals: Vec<Complex64> = (0..=n).map(|k| self.eval(h * k as f64)).collect();
        let mut scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for k in 1..n {
            let d1 = (vals[k + 1] - vals[k - 1]).norm() / (2.0 * h);
            let d2 = (vals[k + 1] - vals[k] * 2.0 + vals[k - 1]).norm() / (h * h);
            scale = scale.max(d1).max(d2);
        }
        scale
    }

    /// Intervals on which each term can be nonzero.
    fn windows(&self) -> Vec<(usize, f64, f64)> {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| match t.shape {
                Shape::Bump { center, width } => {
                    (i, (center - width).max(0.0), (center + width).min(self.support))
                }
                Shape::Custom(_) => (i, 0.0, self.support),
            })
            .collect()
    }

    pub(crate) fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Interval outside which term `i` vanishes.
    pub(crate) fn term_window(&self, i: usize) -> (f64, f64) {
        let (_, lo, hi) = self.windows()[i];
        (lo, hi)
    }

    pub(crate) fn eval_term(&self, i: usize, x: f64) -> Complex64 {
        if !(0.0..=self.support).contains(&x) {
            return Complex64::new(0.0, 0.0);
        }
        let t = &self.terms[i];
        t.weight * eval_shape(&t.shape, x)
    }

    /// h(z) with its quadrature error estimate.
    pub fn transform(&self, z: Complex64) -> Result<QuadratureResult> {
        if z.im.abs() > self.strip {
            return Err(Error::StripExceeded {
                im: z.im.abs(),
                bound: self.strip,
            });
        }
        let iz = Complex64::i() * z;
        let mut value = Complex64::new(0.0, 0.0);
        let mut error_estimate = 0.0;
        let mut evaluations = 0;
        for (i, lo, hi) in self.windows() {
            let term = &self.terms[i];
            let integrand = |x: f64| {
                let g = term.weight * eval_shape(&term.shape, x);
                if g == Complex64::new(0.0, 0.0) {
                    return g;
                }
                let e = (iz * x).exp();
                g * e + g.conj() / e
            };
            let panels = ((z.re.abs() * (hi - lo)) / std::f64::consts::PI).ceil() as usize + 2;
            let opts = QuadOptions {
                abs_tol: 0.0,
                rel_tol: TRANSFORM_REL_TOL,
                max_evaluations: 4_000_000,
                initial_panels: panels,
            };
            let r = integrate_with(&integrand, lo, hi, &opts)?;
            value += r.value;
            error_estimate += r.error_estimate;
            evaluations += r.evaluations;
        }
        Ok(QuadratureResult {
            value,
            error_estimate,
            evaluations,
        })
    }

    /// Weighted integral ∫₀^X w(x) g(x) dx for a smooth weight.
    pub fn integrate_against<W: Fn(f64) -> Complex64>(&self, weight: W, tol: f64) -> Result<QuadratureResult> {
        let mut value = Complex64::new(0.0, 0.0);
        let mut error_estimate = 0.0;
        let mut evaluations = 0;
        for (i, lo, hi) in self.windows() {
            let term = &self.terms[i];
            let f = |x: f64| term.weight * eval_shape(&term.shape, x) * weight(x);
            let r = integrate_with(&f, lo, hi, &QuadOptions::absolute(tol).with_panels(4))?;
            value += r.value;
            error_estimate += r.error_estimate;
            evaluations += r.evaluations;
        }
        Ok(QuadratureResult {
            value,
            error_estimate,
            evaluations,
        })
    }
}

fn eval_shape(shape: &Shape, x: f64) -> Complex64 {
    match shape {
        Shape::Bump { center, width } => Complex64::new(bump((x - center) / width), 0.0),
        Shape::Custom(g) => g(x),
    }
}

/// h(z) for `tf`; see [`TestFunction::transform`] for the error estimate.
pub fn transform_h(tf: &TestFunction, z: Complex64) -> Result<Complex64> {
    tf.transform(z).map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bump_values() {
        let g = make_bump(1.0, 0.5, 0.5).unwrap();
        assert_eq!(g.eval(0.0), c(0.0, 0.0));
        assert_eq!(g.eval(1.0), c(0.0, 0.0));
        assert!((g.eval(0.5).re - 1.0 / E).abs() < 1e-16);
        let narrow = make_bump(1.0, 0.5, 0.25).unwrap();
        assert!((narrow.eval(0.5).re - 1.0 / E).abs() < 1e-16);
        assert_eq!(narrow.eval(0.2), c(0.0, 0.0));
        let wide = make_bump(2.0, 1.0, 1.0).unwrap();
        for k in 0..=40 {
            let x = 2.0 * k as f64 / 40.0;
            assert!((wide.eval(x) - g.eval(x / 2.0)).norm() < 1e-16);
        }
    }

    #[test]
    fn bump_geometry_errors() {
        assert!(matches!(make_bump(1.0, 0.3, 0.5), Err(Error::Geometry { .. })));
        assert!(matches!(make_bump(1.0, 0.8, 0.5), Err(Error::Geometry { .. })));
        assert!(make_bump(1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn transform_specialisations() {
        let g = make_bump(1.0, 0.5, 0.5).unwrap();
        let h0 = transform_h(&g, c(0.0, 0.0)).unwrap();
        let int = g.integrate_against(|_| c(1.0, 0.0), 1e-15).unwrap().value;
        assert!((h0 - int * 2.0).norm() < 1e-14);
        for &x in &[0.7, 3.0, 14.134_725, 77.0] {
            let hp = transform_h(&g, c(x, 0.0)).unwrap();
            let hm = transform_h(&g, c(-x, 0.0)).unwrap();
            assert!((hp - hm).norm() < 1e-15);
            assert!(hp.im.abs() < 1e-15);
        }
        let hi = transform_h(&g, c(0.0, 0.5)).unwrap();
        let cosh = g.integrate_against(|x| c((x / 2.0).cosh(), 0.0), 1e-15).unwrap().value;
        assert!((hi - cosh * 2.0).norm() < 1e-14);
    }

    #[test]
    fn schwarz_reflection_and_strip() {
        let g = make_bump(2.0, 1.1, 0.6).unwrap();
        for &z in &[c(3.0, 0.4), c(-7.5, -1.2), c(0.1, 1.9), c(40.0, 0.5)] {
            let a = transform_h(&g, z.conj()).unwrap();
            let b = transform_h(&g, z).unwrap().conj();
            assert!((a - b).norm() <= 1e-13 * (1.0 + b.norm()));
        }
        assert!(matches!(transform_h(&g, c(0.0, 2.5)), Err(Error::StripExceeded { .. })));
    }

    #[test]
    fn transform_decays() {
        let g = make_bump(1.0, 0.5, 0.5).unwrap();
        let h0 = transform_h(&g, c(0.0, 0.0)).unwrap().norm();
        let mags: Vec<f64> = [50.0, 100.0, 200.0]
            .iter()
            .map(|&x| transform_h(&g, c(x, 0.0)).unwrap().norm())
            .collect();
        assert!(mags[0] > mags[1] && mags[1] > mags[2]);
        // |h| ~ exp(-sqrt(z w)): |h(200)| ≈ 4e-6·|h(0)|, |h(1000)| ≈ 4e-12·|h(0)|
        assert!(mags[2] < 1e-5 * h0);
        assert!(transform_h(&g, c(1000.0, 0.0)).unwrap().norm() < 1e-8 * h0);
    }

    #[test]
    fn transform_is_real_linear() {
        let g1 = make_bump(1.0, 0.5, 0.5).unwrap();
        let g2 = make_bump(1.0, 0.3, 0.2).unwrap();
        let sum = TestFunction::linear_combination(&[(c(0.7, 0.0), &g1), (c(-1.3, 0.0), &g2)]).unwrap();
        for &z in &[c(0.0, 0.0), c(5.0, 0.0), c(21.0, 0.3)] {
            let lhs = transform_h(&sum, z).unwrap();
            let rhs = transform_h(&g1, z).unwrap() * 0.7 - transform_h(&g2, z).unwrap() * 1.3;
            assert!((lhs - rhs).norm() < 1e-13);
        }
        // i·g is odd under the Hermitian extension: h becomes i·(sine transform)·2i
        let ig = TestFunction::linear_combination(&[(c(0.0, 1.0), &g1)]).unwrap();
        assert!(transform_h(&ig, c(0.0, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn custom_profile_validation() {
        let ok = TestFunction::custom(1.0, |x| c(bump(2.0 * x - 1.0), 0.0)).unwrap();
        assert!(ok.smoothness_scale() > 0.0);
        assert!(TestFunction::custom(1.0, |x| c(1.0 - x * 0.5, 0.0)).is_err());
    }
}
