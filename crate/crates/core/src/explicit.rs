//! Both sides of the explicit formula
//!
//! ```text
//! Σ m(z) h(z) = 2 Re[ ∫₀^∞ K(x)(g(0) − g(x)) dx − Σ_{n≥1} f(n) g(log n) ]
//! ```
//!
//! and the residual report.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::datum::{shift_kernel, KernelTerm, LDatum};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_half_line, integrate_with, QuadOptions};
use crate::test_function::TestFunction;

pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Multiplier applied to the zero-side tail heuristic.
pub const ZERO_SAFETY: f64 = 10.0;
/// Bound on the kernel tail dropped beyond x_cut, relative to |g(0)|.
const KERNEL_TAIL: f64 = 1e-17;
const PRIME_CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy)]
pub struct EfOptions {
    pub tolerance: f64,
    /// Largest e^X accepted for the prime sum.
    pub max_prime_terms: u64,
}

impl Default for EfOptions {
    fn default() -> Self {
        EfOptions { tolerance: DEFAULT_TOLERANCE, max_prime_terms: 100_000_000 }
    }
}

/// Sum with a fixed pairwise tree, independent of how the terms were produced.
pub fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroSide {
    pub value: f64,
    pub imag: f64,
    pub truncation_estimate: f64,
    pub quadrature_estimate: f64,
    pub entries: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArithmeticSide {
    pub value: f64,
    pub kernel_integral: Complex64,
    pub prime_sum: Complex64,
    pub truncation_estimate: f64,
    pub quadrature_estimate: f64,
    pub prime_terms: u64,
}

/// Σ m(z) h(z) over the expanded multiplicity entries.
pub fn zero_side(datum: &LDatum, tf: &TestFunction) -> Result<ZeroSide> {
    let zeros = datum.zeros();
    let t_max = zeros.t_max();
    if !(t_max > 0.0) {
        return Err(Error::Coverage("zero data has empty coverage".into()));
    }
    let entries = zeros.expanded();
    let terms: Vec<(Complex64, f64)> = entries
        .par_iter()
        .map(|e| tf.transform(e.z).map(|r| (e.m * r.value, e.m.abs() * r.error_estimate)))
        .collect::<Result<_>>()?;
    let values: Vec<Complex64> = terms.iter().map(|t| t.0).collect();
    let total = pairwise_sum(&values);
    let quad: f64 = terms.iter().map(|t| t.1).sum();

    let truncation_estimate = if t_max.is_finite() {
        let period = TAU / tf.support();
        let mut envelope = 0.0f64;
        for k in 0..=8 {
            let z = Complex64::new(t_max + period * k as f64 / 8.0, 0.0);
            envelope = envelope.max(tf.transform(z)?.value.norm());
        }
        let near = entries
            .iter()
            .filter(|e| e.z.re.abs() >= 0.9 * t_max && e.z.re.abs() <= t_max)
            .map(|e| e.m.abs())
            .sum::<f64>()
            / (0.1 * t_max);
        let average = entries.iter().map(|e| e.m.abs()).sum::<f64>() / t_max;
        // + 0.0 turns the empty-sum −0.0 into 0
        envelope * near.max(average) * ZERO_SAFETY + 0.0
    } else {
        0.0
    };

    Ok(ZeroSide {
        value: total.re,
        imag: total.im,
        truncation_estimate,
        quadrature_estimate: quad,
        entries: entries.len(),
    })
}

fn kernel_opts() -> QuadOptions {
    QuadOptions { abs_tol: 1e-16, rel_tol: 1e-14, max_evaluations: 2_000_000, initial_panels: 8 }
}

/// ∫_a^∞ of the unweighted kernel term, truncated where the tail drops
/// below [`KERNEL_TAIL`].
fn kernel_tail(term: &KernelTerm, a: f64) -> Result<(Complex64, f64)> {
    match term {
        KernelTerm::Gamma(g) => {
            let mut value = Complex64::new(0.0, 0.0);
            let mut err = 0.0;
            for &mu in &g.shifts {
                let sigma = 0.5 + mu.re;
                let den = -(-2.0 * a).exp_m1();
                let x_cut = a.max((1.0 / (sigma * KERNEL_TAIL * den)).ln() / sigma);
                if x_cut <= a {
                    continue;
                }
                let panels = ((x_cut - a) * sigma.max(mu.im.abs())).ceil() as usize + 2;
                let r = integrate_with(&|x| shift_kernel(mu, x), a, x_cut, &kernel_opts().with_panels(panels))?;
                value += r.value;
                err += r.error_estimate + KERNEL_TAIL;
            }
            Ok((value, err))
        }
        KernelTerm::Opaque { func, .. } => {
            let r = integrate_half_line(|x| func(x), a, 1e-15)?;
            Ok((r.value, r.error_estimate))
        }
    }
}

/// ∫₀^∞ K(x)(g(0) − g(x)) dx, one integral per (kernel term, test function
/// term) pair so that the result is exactly linear in the kernel weights.
fn kernel_integral(datum: &LDatum, tf: &TestFunction) -> Result<(Complex64, f64)> {
    let mut pieces = Vec::new();
    let mut err = 0.0;
    for term in datum.kernel().terms() {
        let w = term.weight();
        for i in 0..tf.term_count() {
            let (lo, hi) = tf.term_window(i);
            let g0 = tf.eval_term(i, 0.0);
            let (v, e) = if g0 == Complex64::new(0.0, 0.0) {
                let f = |x: f64| -term.eval_unweighted(x) * tf.eval_term(i, x);
                let r = integrate_with(&f, lo, hi, &kernel_opts())?;
                (r.value, r.error_estimate)
            } else {
                // (g(0) − g(x))K(x) stays bounded at 0 since xK(x) does
                let f = |x: f64| (g0 - tf.eval_term(i, x)) * term.eval_unweighted(x);
                let r = integrate_with(&f, 0.0, hi, &kernel_opts())?;
                let (tail, tail_err) = kernel_tail(term, hi)?;
                (r.value + g0 * tail, r.error_estimate + g0.norm() * tail_err)
            };
            pieces.push(w * v);
            err += w.abs() * e;
        }
    }
    Ok((pairwise_sum(&pieces), err))
}

/// 2 Re[I_K − Σ_{n ≤ e^X} f(n) g(log n)].
pub fn arithmetic_side(datum: &LDatum, tf: &TestFunction) -> Result<ArithmeticSide> {
    arithmetic_side_with(datum, tf, &EfOptions::default())
}

pub fn arithmetic_side_with(datum: &LDatum, tf: &TestFunction, opts: &EfOptions) -> Result<ArithmeticSide> {
    let (kernel, kernel_err) = kernel_integral(datum, tf)?;

    let x = tf.support();
    let limit = x.exp().floor();
    if !(limit <= opts.max_prime_terms as f64) {
        return Err(Error::InvalidArgument(format!(
            "support X = {x} needs more than {} prime-sum terms",
            opts.max_prime_terms
        )));
    }
    let n_max = limit as u64;
    crate::sieve::sieve_to(n_max);
    let f = datum.f();
    let chunks: Vec<(Complex64, f64)> = (0..n_max.div_ceil(PRIME_CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * PRIME_CHUNK + 1;
            let hi = ((c + 1) * PRIME_CHUNK).min(n_max);
            let mut terms = Vec::with_capacity((hi - lo + 1) as usize);
            let mut abs = 0.0;
            for n in lo..=hi {
                let g = if n == 1 { tf.eval(0.0) } else { tf.eval((n as f64).ln()) };
                if g == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let t = f.get(n) * g;
                abs += t.norm();
                terms.push(t);
            }
            (pairwise_sum(&terms), abs)
        })
        .collect();
    let sums: Vec<Complex64> = chunks.iter().map(|c| c.0).collect();
    let prime_sum = pairwise_sum(&sums);
    let abs_total: f64 = chunks.iter().map(|c| c.1).sum();

    Ok(ArithmeticSide {
        value: 2.0 * (kernel - prime_sum).re,
        kernel_integral: kernel,
        prime_sum,
        truncation_estimate: 2.0 * 4.0 * f64::EPSILON * abs_total,
        quadrature_estimate: 2.0 * kernel_err,
        prime_terms: n_max,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfReport {
    pub zero_side: f64,
    pub zero_side_imag: f64,
    pub arithmetic_side: f64,
    pub residual: f64,
    pub zero_truncation_estimate: f64,
    pub prime_truncation_estimate: f64,
    pub quadrature_estimate: f64,
    pub composite_estimate: f64,
    pub tolerance: f64,
    pub zero_entries: usize,
    pub prime_terms: u64,
    pub t_max: f64,
    pub pass: bool,
}

/// Plain notation for moderate magnitudes, exponent notation otherwise.
pub(crate) fn fmt_real(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-3..1e12).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl EfReport {
    /// Flat `key=value` lines.
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "zero_side={}", fmt_real(self.zero_side));
        let _ = writeln!(s, "zero_side_imag={}", fmt_real(self.zero_side_imag));
        let _ = writeln!(s, "arithmetic_side={}", fmt_real(self.arithmetic_side));
        let _ = writeln!(s, "residual={}", fmt_real(self.residual));
        let _ = writeln!(s, "zero_truncation_estimate={}", fmt_real(self.zero_truncation_estimate));
        let _ = writeln!(s, "prime_truncation_estimate={}", fmt_real(self.prime_truncation_estimate));
        let _ = writeln!(s, "quadrature_estimate={}", fmt_real(self.quadrature_estimate));
        let _ = writeln!(s, "composite_estimate={}", fmt_real(self.composite_estimate));
        let _ = writeln!(s, "tolerance={}", fmt_real(self.tolerance));
        let _ = writeln!(s, "zero_entries={}", self.zero_entries);
        let _ = writeln!(s, "prime_terms={}", self.prime_terms);
        let _ = writeln!(s, "t_max={}", fmt_real(self.t_max));
        let _ = writeln!(s, "pass={}", self.pass);
        s
    }
}

/// Imaginary parts of the zero side above this fail the verdict.
pub const IMAG_LIMIT: f64 = 1e-10;

pub fn verify(datum: &LDatum, tf: &TestFunction) -> Result<EfReport> {
    verify_with(datum, tf, &EfOptions::default())
}

pub fn verify_with(datum: &LDatum, tf: &TestFunction, opts: &EfOptions) -> Result<EfReport> {
    let z = zero_side(datum, tf)?;
    let a = arithmetic_side_with(datum, tf, opts)?;
    let residual = (z.value - a.value).abs();
    let quadrature_estimate = z.quadrature_estimate + a.quadrature_estimate;
    let composite = z.truncation_estimate + a.truncation_estimate + quadrature_estimate;
    let imag_ok = z.imag.abs() <= IMAG_LIMIT || !(datum.zeros().mirrored() && tf.is_real());
    Ok(EfReport {
        zero_side: z.value,
        zero_side_imag: z.imag,
        arithmetic_side: a.value,
        residual,
        zero_truncation_estimate: z.truncation_estimate,
        prime_truncation_estimate: a.truncation_estimate,
        quadrature_estimate,
        composite_estimate: composite,
        tolerance: opts.tolerance,
        zero_entries: z.entries,
        prime_terms: a.prime_terms,
        t_max: datum.zeros().t_max(),
        pass: imag_ok && residual <= composite.max(opts.tolerance),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{CoefficientStream, StreamKind};
    use crate::datum::{GammaSpec, Kernel, MultiplicityEntry, ZeroData};
    use crate::instances::build_zeta;
    use crate::test_function::make_bump;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_entry_gives_h0() {
        let tf = make_bump(1.0, 0.5, 0.5).unwrap();
        let zeros = ZeroData::new(vec![MultiplicityEntry::new(c(0.0, 0.0), 1.0)], 1.0, true).unwrap();
        let d = LDatum::new(CoefficientStream::zero(StreamKind::F), Kernel::default(), zeros).unwrap();
        let z = zero_side(&d, &tf).unwrap();
        assert!((z.value - tf.transform(c(0.0, 0.0)).unwrap().value.re).abs() < 1e-15);
    }

    #[test]
    fn poles_give_cosh_integral() {
        let tf = make_bump(1.0, 0.5, 0.5).unwrap();
        let z = build_zeta().with_zeros(ZeroData::new(
            vec![MultiplicityEntry::new(c(0.0, 0.5), -1.0), MultiplicityEntry::new(c(0.0, -0.5), -1.0)],
            1.0,
            true,
        ).unwrap());
        let s = zero_side(&z, &tf).unwrap();
        let cosh = tf.integrate_against(|x| c((0.5 * x).cosh(), 0.0), 1e-15).unwrap().value.re;
        assert!((s.value + 4.0 * cosh).abs() < 1e-13);
    }

    #[test]
    fn trivial_datum() {
        let tf = make_bump(1.0, 0.5, 0.5).unwrap();
        let d = LDatum::new(CoefficientStream::zero(StreamKind::F), Kernel::default(), ZeroData::none()).unwrap();
        let r = verify(&d, &tf).unwrap();
        assert_eq!(r.residual, 0.0);
        assert!(r.pass);
        let empty = d.clone().with_zeros(ZeroData::empty());
        assert!(matches!(verify(&empty, &tf), Err(Error::Coverage(_))));
    }

    #[test]
    fn small_support_has_no_prime_terms() {
        // g supported inside (0, log 2): arithmetic side is −2∫K g
        let tf = make_bump(0.6, 0.3, 0.25).unwrap();
        let z = build_zeta();
        let a = arithmetic_side(&z, &tf).unwrap();
        let direct = tf.integrate_against(|x| shift_kernel(c(0.0, 0.0), x), 1e-15).unwrap().value.re;
        assert!((a.value + 2.0 * direct).abs() < 1e-13, "{} vs {}", a.value, -2.0 * direct);
        assert_eq!(a.prime_sum, c(0.0, 0.0));
    }

    #[test]
    fn g0_nonzero_tail() {
        // half of a bump centred at 0: exercises the tail beyond X
        let tf = TestFunction::custom(1.0, |x: f64| {
            let u = 1.0 - x * x;
            c(if u > 0.0 { (-1.0 / u).exp() } else { 0.0 }, 0.0)
        })
        .unwrap();
        let d = LDatum::new(
            CoefficientStream::zero(StreamKind::F),
            Kernel::from_gamma(GammaSpec::new(0.0, vec![c(0.0, 0.0)])),
            ZeroData::none(),
        )
        .unwrap();
        let a = arithmetic_side(&d, &tf).unwrap();
        // same integral by a half-line quadrature of (g(0) − g(x))K(x)
        let g0 = tf.eval(0.0);
        let full = integrate_half_line(|x| (g0 - tf.eval(x)) * shift_kernel(c(0.0, 0.0), x), 0.0, 1e-15).unwrap();
        assert!((a.value - 2.0 * full.value.re).abs() < 1e-11, "{} vs {}", a.value, 2.0 * full.value.re);
    }

    #[test]
    fn scaling_is_linear() {
        let tf = make_bump(2.0, 1.0, 0.9).unwrap();
        let z = build_zeta();
        let a1 = arithmetic_side(&z, &tf).unwrap().value;
        let d3 = LDatum::combine(&[(3.0, &z)]).unwrap();
        let a3 = arithmetic_side(&d3, &tf).unwrap().value;
        assert!((a3 - 3.0 * a1).abs() < 1e-13 * a1.abs().max(1.0));
    }

    #[test]
    fn pairwise_matches_naive() {
        let v: Vec<Complex64> = (0..1000).map(|k| c(k as f64, -(k as f64))).collect();
        assert_eq!(pairwise_sum(&v), c(499_500.0, -499_500.0));
    }
}
