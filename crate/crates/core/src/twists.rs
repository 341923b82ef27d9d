//! Exponential sums S_F(z), nonlinear twists S_F(z; α), the asymptotic
//! expansion of log γ_F and the factor G(s).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

use crate::coefficients::{exp_transform, CoefficientStream};
use crate::datum::{KernelTerm, LDatum};
use crate::error::{Error, Result};
use crate::special::{log_gamma, log_gamma_r};

/// Sums stop once the tail bound falls below this.
pub const TAIL_TARGET: f64 = 1e-14;
const FIRST_BLOCK: u64 = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistSpec {
    alphas: Vec<f64>,
    cs: Vec<f64>,
}

impl TwistSpec {
    pub fn new(alphas: Vec<f64>, cs: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::TwistSpec("empty exponent list".into()));
        }
        if alphas.len() != cs.len() {
            return Err(Error::TwistSpec(format!(
                "{} exponents but {} coefficients",
                alphas.len(),
                cs.len()
            )));
        }
        if let Some(a) = alphas.iter().find(|&&a| !(a > 0.0 && a <= 1.0)) {
            return Err(Error::TwistSpec(format!("exponent {a} outside (0, 1]")));
        }
        if let Some(c) = cs.iter().find(|&&c| !(c > 0.0 && c.is_finite())) {
            return Err(Error::TwistSpec(format!("coefficient {c} is not positive")));
        }
        Ok(TwistSpec { alphas, cs })
    }

    /// The linear phase n ↦ n.
    pub fn linear() -> Self {
        TwistSpec { alphas: vec![1.0], cs: vec![1.0] }
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn cs(&self) -> &[f64] {
        &self.cs
    }

    /// Σ c_i n^{α_i}.
    pub fn phase(&self, n: u64) -> f64 {
        let x = n as f64;
        self.alphas.iter().zip(&self.cs).map(|(&a, &c)| c * if a == 1.0 { x } else { x.powf(a) }).sum()
    }

    /// (c, α) of the term that dominates for large n.
    fn dominant(&self) -> (f64, f64) {
        let mut best = (self.cs[0], self.alphas[0]);
        for (&a, &c) in self.alphas.iter().zip(&self.cs) {
            if a > best.1 || (a == best.1 && c > best.0) {
                best = (c, a);
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwistValue {
    pub value: Complex64,
    pub terms: u64,
    /// Heuristic: assumes |a(n)| stays below its observed maximum.
    pub tail_bound: f64,
}

fn check_upper(z: Complex64) -> Result<()> {
    if !(z.im > 0.0) || !z.re.is_finite() {
        return Err(Error::LowerHalfPlane(format!("{z}")));
    }
    Ok(())
}

/// Upper bound for Γ(a, x) with a ≥ 1, valid when x > a − 1.
fn upper_incomplete_gamma_bound(a: f64, x: f64) -> f64 {
    if x <= 2.0 * (a - 1.0) {
        return f64::INFINITY;
    }
    ((a - 1.0) * x.ln() - x).exp() / (1.0 - (a - 1.0) / x)
}

/// Shared driver: a(n) is computed in doubling blocks until `tail(N, B)`
/// drops below the target or N reaches the cap.
fn truncated_sum<P, T>(
    datum: &LDatum,
    z: Complex64,
    n_cap: u64,
    phase: P,
    tail: T,
) -> Result<TwistValue>
where
    P: Fn(u64) -> f64,
    T: Fn(u64, f64) -> f64,
{
    check_upper(z)?;
    if n_cap == 0 {
        return Err(Error::InvalidArgument("N_cap must be positive".into()));
    }
    let mut n = FIRST_BLOCK.min(n_cap);
    loop {
        let a = exp_transform(datum.f(), n)?;
        let (value, bound) = partial(&a, z, n, &phase);
        let tail_bound = tail(n, bound);
        if tail_bound < TAIL_TARGET || n >= n_cap {
            return Ok(TwistValue { value, terms: n, tail_bound });
        }
        n = (2 * n).min(n_cap);
    }
}

fn partial<P: Fn(u64) -> f64>(a: &CoefficientStream, z: Complex64, n: u64, phase: &P) -> (Complex64, f64) {
    let mut terms = Vec::with_capacity(n as usize);
    let mut bound = 0.0f64;
    for k in 1..=n {
        let ak = a.get(k);
        bound = bound.max(ak.norm());
        if ak != Complex64::new(0.0, 0.0) {
            terms.push(ak * (Complex64::new(0.0, TAU * phase(k)) * z).exp());
        }
    }
    (crate::explicit::pairwise_sum(&terms), bound)
}

/// S_F(z) = Σ a_F(n) e^{2πinz}, Im z > 0.
pub fn s_sum(datum: &LDatum, z: Complex64, n_cap: u64) -> Result<TwistValue> {
    let r = (-TAU * z.im).exp();
    truncated_sum(datum, z, n_cap, |k| k as f64, |n, b| {
        b * r.powf((n + 1) as f64) / (1.0 - r)
    })
}

/// S_F(z; α) = Σ a_F(n) exp(2πi (Σ c_i n^{α_i}) z), Im z > 0.
pub fn twist_sum(datum: &LDatum, z: Complex64, spec: &TwistSpec, n_cap: u64) -> Result<TwistValue> {
    let (c, alpha) = spec.dominant();
    let k = TAU * z.im * c;
    let a = 1.0 / alpha;
    truncated_sum(datum, z, n_cap, |n| spec.phase(n), |n, b| {
        // Σ_{m>N} e^{-k m^α} ≤ ∫_N^∞ e^{-k x^α} dx = Γ(1/α, k N^α) / (α k^{1/α})
        let x = k * (n as f64).powf(alpha);
        b * upper_incomplete_gamma_bound(a, x) / (alpha * k.powf(a))
    })
}

/// δ(α, j, d) = 2jα / (2 − dα).
pub fn delta_shift(alpha: f64, j: u32, d: f64) -> Result<f64> {
    let den = 2.0 - d * alpha;
    if den.abs() <= 1e-12 {
        return Err(Error::Resonance { alpha, degree: d });
    }
    Ok(2.0 * j as f64 * alpha / den)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaAsymptotics {
    pub d: f64,
    pub c_minus1: f64,
    pub mu: Complex64,
    /// c_0, …, c_{order−1}.
    pub c: Vec<Complex64>,
    /// Largest template deviation over the samples at the outermost radius.
    pub fit_residual: f64,
}

impl GammaAsymptotics {
    /// The fitted template at s.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut v = (s - 0.5) * ((s / std::f64::consts::E).ln() * (0.5 * self.d) + self.c_minus1)
            + self.mu * 0.5 * (s * 0.5).ln();
        let inv = 1.0 / s;
        let mut p = Complex64::new(1.0, 0.0);
        for cj in &self.c {
            v += cj * p;
            p *= inv;
        }
        v
    }
}

/// log γ_F(s) for a gamma-type kernel: Σ weight · [(s/2) log q + Σ_j log Γ_ℝ(s + μ_j)].
pub fn log_gamma_factor(datum: &LDatum, s: Complex64) -> Result<Complex64> {
    let mut v = Complex64::new(0.0, 0.0);
    for t in datum.kernel().terms() {
        match t {
            KernelTerm::Gamma(g) => {
                let mut part = s * (0.5 * g.log_conductor);
                for &mu in &g.shifts {
                    part += log_gamma_r(s + mu)?;
                }
                v += g.weight * part;
            }
            KernelTerm::Opaque { .. } => {
                return Err(Error::InvalidArgument("kernel is not a gamma-factor combination".into()))
            }
        }
    }
    Ok(v)
}

/// Sample radii 50·2^{k/4}, k = 0..=12 (50 to 400), on the rays arg s = 0
/// and arg s = π/6.
fn sample_points() -> Vec<Complex64> {
    let mut pts = Vec::new();
    for ray in [0.0, PI / 6.0] {
        for k in 0..=12 {
            pts.push(Complex64::from_polar(50.0 * (k as f64 / 4.0).exp2(), ray));
        }
    }
    pts
}

/// Least-squares fit of
/// (s − ½)(d/2 log(s/e) + c₋₁) + μ/2 log(s/2) + Σ_{j<order} c_j s^{−j}.
pub fn gamma_asymptotics(datum: &LDatum, order: usize) -> Result<GammaAsymptotics> {
    if order == 0 || order > 8 {
        return Err(Error::InvalidArgument(format!("order {order} outside 1..=8")));
    }
    let pts = sample_points();
    let targets: Vec<Complex64> = pts.iter().map(|&s| log_gamma_factor(datum, s)).collect::<Result<_>>()?;

    // real unknowns: d, c₋₁, Re μ, Im μ, then (Re c_j, Im c_j)
    let cols = 4 + 2 * order;
    let rows = 2 * pts.len();
    let mut m = DMatrix::<f64>::zeros(rows, cols);
    let mut rhs = DVector::<f64>::zeros(rows);
    let i = Complex64::new(0.0, 1.0);
    for (r, (&s, &y)) in pts.iter().zip(&targets).enumerate() {
        let mut basis = vec![
            (s - 0.5) * (s / std::f64::consts::E).ln() * 0.5,
            s - 0.5,
            (s * 0.5).ln() * 0.5,
            i * (s * 0.5).ln() * 0.5,
        ];
        let mut p = Complex64::new(1.0, 0.0);
        for _ in 0..order {
            basis.push(p);
            basis.push(i * p);
            p /= s;
        }
        for (c, b) in basis.iter().enumerate() {
            m[(2 * r, c)] = b.re;
            m[(2 * r + 1, c)] = b.im;
        }
        rhs[2 * r] = y.re;
        rhs[2 * r + 1] = y.im;
    }
    let scale: Vec<f64> = (0..cols).map(|c| m.column(c).norm()).collect();
    for (c, &sc) in scale.iter().enumerate() {
        if sc == 0.0 {
            return Err(Error::IllConditioned(format!("column {c} vanishes")));
        }
        m.column_mut(c).scale_mut(1.0 / sc);
    }
    let svd = m.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (hi, lo) = (sv.max(), sv.min());
    if !(lo > 0.0) || hi / lo > 1e12 {
        return Err(Error::IllConditioned(format!("condition number {:e}", hi / lo)));
    }
    let sol = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::IllConditioned(e.to_string()))?;
    let x: Vec<f64> = (0..cols).map(|c| sol[c] / scale[c]).collect();

    let fit = GammaAsymptotics {
        d: x[0],
        c_minus1: x[1],
        mu: Complex64::new(x[2], x[3]),
        c: (0..order).map(|j| Complex64::new(x[4 + 2 * j], x[5 + 2 * j])).collect(),
        fit_residual: 0.0,
    };
    let outer = pts.iter().map(|s| s.norm()).fold(0.0, f64::max);
    let residual = pts
        .iter()
        .zip(&targets)
        .filter(|(s, _)| (s.norm() - outer).abs() <= 1e-9 * outer)
        .map(|(&s, &y)| (fit.eval(s) - y).norm())
        .fold(0.0, f64::max);
    Ok(GammaAsymptotics { fit_residual: residual, ..fit })
}

/// G(s) = (2π (1−d/2)^{1−d/2} e^{c₋₁})^{½−s} Γ((1−d/2)(s−½) + (1−μ)/2), 0 ≤ d < 2.
pub fn g_factor(s: Complex64, d: f64, c_minus1: f64, mu: Complex64) -> Result<Complex64> {
    if !(0.0..2.0).contains(&d) {
        return Err(Error::DegreeRange(d));
    }
    let e = 1.0 - d / 2.0;
    let log_base = TAU.ln() + e * e.ln() + c_minus1;
    let arg = (s - 0.5) * e + (1.0 - mu) * 0.5;
    Ok(((0.5 - s) * log_base + log_gamma(arg)?).exp())
}
