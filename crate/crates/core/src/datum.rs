//! The L-datum F = (f, K, m): coefficient stream, archimedean kernel and
//! multiplicity function.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use crate::coefficients::{growth_diagnostics, CoefficientStream, GrowthReport, StreamKind};
use crate::error::{Error, Result};

/// Entries closer than this are the same point of the multiplicity function.
pub const MERGE_TOLERANCE: f64 = 1e-9;
/// Multiplicities of magnitude below this are dropped after merging.
pub const ZERO_MULTIPLICITY: f64 = 1e-12;
/// More non-integral multiplicities than this triggers a warning.
pub const MAX_NONINTEGRAL: usize = 16;

/// weight · (q^{s/2} Π Γ_ℝ(s + μ_j)) in kernel form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaSpec {
    pub log_conductor: f64,
    pub shifts: Vec<Complex64>,
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

impl GammaSpec {
    pub fn new(log_conductor: f64, shifts: Vec<Complex64>) -> Self {
        GammaSpec { log_conductor, shifts, weight: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        for mu in &self.shifts {
            if !(mu.re > -0.5) || !mu.im.is_finite() {
                return Err(Error::Domain(format!("gamma shift {mu} needs Re > -1/2")));
            }
        }
        if !self.log_conductor.is_finite() || !self.weight.is_finite() {
            return Err(Error::Domain("non-finite gamma data".into()));
        }
        Ok(())
    }
}

/// e^{-(1/2 + μ)x} / (1 - e^{-2x}), evaluated with expm1 so that small x
/// keeps full relative accuracy.
pub fn shift_kernel(mu: Complex64, x: f64) -> Complex64 {
    let den = -(-2.0 * x).exp_m1();
    (-(0.5 + mu) * x).exp() / den
}

/// One summand of the kernel.
#[derive(Clone)]
pub enum KernelTerm {
    Gamma(GammaSpec),
    /// Caller-supplied kernel with a real weight. Treated as opaque: the
    /// degree is found numerically.
    Opaque {
        weight: f64,
        func: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    },
}

impl fmt::Debug for KernelTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelTerm::Gamma(g) => f.debug_tuple("Gamma").field(g).finish(),
            KernelTerm::Opaque { weight, .. } => {
                f.debug_struct("Opaque").field("weight", weight).finish_non_exhaustive()
            }
        }
    }
}

impl KernelTerm {
    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            KernelTerm::Gamma(g) => {
                g.weight * g.shifts.iter().map(|&mu| shift_kernel(mu, x)).sum::<Complex64>()
            }
            KernelTerm::Opaque { weight, func } => *weight * func(x),
        }
    }

    pub fn weight(&self) -> f64 {
        match self {
            KernelTerm::Gamma(g) => g.weight,
            KernelTerm::Opaque { weight, .. } => *weight,
        }
    }

    /// The term with weight 1.
    pub fn eval_unweighted(&self, x: f64) -> Complex64 {
        match self {
            KernelTerm::Gamma(g) => g.shifts.iter().map(|&mu| shift_kernel(mu, x)).sum(),
            KernelTerm::Opaque { func, .. } => func(x),
        }
    }

    fn scaled(&self, t: f64) -> KernelTerm {
        match self {
            KernelTerm::Gamma(g) => KernelTerm::Gamma(GammaSpec { weight: g.weight * t, ..g.clone() }),
            KernelTerm::Opaque { weight, func } => {
                KernelTerm::Opaque { weight: weight * t, func: Arc::clone(func) }
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Kernel {
    terms: Vec<KernelTerm>,
}

impl Kernel {
    pub fn new(terms: Vec<KernelTerm>) -> Self {
        Kernel { terms }
    }

    pub fn from_gamma(spec: GammaSpec) -> Self {
        Kernel { terms: vec![KernelTerm::Gamma(spec)] }
    }

    pub fn terms(&self) -> &[KernelTerm] {
        &self.terms
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    pub fn is_analytic(&self) -> bool {
        self.terms.iter().all(|t| matches!(t, KernelTerm::Gamma(_)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityEntry {
    pub z: Complex64,
    pub m: f64,
}

impl MultiplicityEntry {
    pub fn new(z: Complex64, m: f64) -> Self {
        MultiplicityEntry { z, m }
    }
}

/// Finitely many multiplicity entries, complete for |Re z| ≤ t_max.
///
/// With `mirrored` set, only entries with Re z ≥ 0 are stored and each one
/// with Re z > 0 stands also for its partner −conj(z).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroData {
    entries: Vec<MultiplicityEntry>,
    t_max: f64,
    mirrored: bool,
}

impl ZeroData {
    pub fn new(mut entries: Vec<MultiplicityEntry>, t_max: f64, mirrored: bool) -> Result<Self> {
        if t_max.is_nan() || t_max < 0.0 {
            return Err(Error::Coverage(format!("invalid coverage bound {t_max}")));
        }
        for e in &entries {
            if !e.z.re.is_finite() || !e.z.im.is_finite() || !e.m.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite entry at {}", e.z)));
            }
            if e.z.re.abs() > t_max {
                return Err(Error::Coverage(format!(
                    "entry at {} lies beyond the coverage bound {t_max}",
                    e.z
                )));
            }
            if mirrored && e.z.re < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "mirrored data must not store Re z < 0 (found {})",
                    e.z
                )));
            }
        }
        sort_entries(&mut entries);
        for w in entries.windows(2) {
            if (w[0].z - w[1].z).norm() <= MERGE_TOLERANCE {
                return Err(Error::InvalidArgument(format!("duplicate entry at {}", w[0].z)));
            }
        }
        Ok(ZeroData { entries, t_max, mirrored })
    }

    /// No entries, covering nothing.
    pub fn empty() -> Self {
        ZeroData { entries: Vec::new(), t_max: 0.0, mirrored: true }
    }

    /// Known to have no entries anywhere.
    pub fn none() -> Self {
        ZeroData { entries: Vec::new(), t_max: f64::INFINITY, mirrored: true }
    }

    pub fn entries(&self) -> &[MultiplicityEntry] {
        &self.entries
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn mirrored(&self) -> bool {
        self.mirrored
    }

    /// All entries explicitly, including mirror partners, sorted by (Re, Im).
    pub fn expanded(&self) -> Vec<MultiplicityEntry> {
        let mut out = self.entries.clone();
        if self.mirrored {
            out.extend(
                self.entries
                    .iter()
                    .filter(|e| e.z.re > 0.0)
                    .map(|e| MultiplicityEntry::new(-e.z.conj(), e.m)),
            );
        }
        sort_entries(&mut out);
        out
    }

    /// The first `count` stored entries with Re z > 0 (by |Re z|), together
    /// with all entries on Re z = 0. Coverage shrinks to the last kept ordinate.
    pub fn first(&self, count: usize) -> ZeroData {
        let mut positive: Vec<MultiplicityEntry> =
            self.entries.iter().filter(|e| e.z.re != 0.0).copied().collect();
        positive.sort_by(|a, b| a.z.re.abs().total_cmp(&b.z.re.abs()));
        if positive.len() <= count {
            return self.clone();
        }
        positive.truncate(count);
        let t_max = positive.last().map_or(0.0, |e| e.z.re.abs());
        let mut entries: Vec<MultiplicityEntry> =
            self.entries.iter().filter(|e| e.z.re == 0.0).copied().collect();
        entries.extend(positive.into_iter().filter(|e| e.z.re.abs() <= t_max));
        sort_entries(&mut entries);
        ZeroData { entries, t_max, mirrored: self.mirrored }
    }

    /// Σ |m| over expanded entries with |Re z| ≤ t.
    pub fn mass_within(&self, t: f64) -> f64 {
        self.expanded().iter().filter(|e| e.z.re.abs() <= t).map(|e| e.m.abs()).sum()
    }

    /// Weighted merge. Coverage is the minimum of the inputs; entries beyond
    /// it are dropped and coinciding entries are summed.
    pub fn merge(parts: &[(f64, &ZeroData)]) -> Result<ZeroData> {
        if parts.is_empty() {
            return Ok(ZeroData::none());
        }
        let t_max = parts.iter().map(|(_, z)| z.t_max).fold(f64::INFINITY, f64::min);
        let had_nonreal = parts.iter().any(|(_, z)| z.entries.iter().any(|e| e.z.re != 0.0));
        if t_max <= 0.0 && had_nonreal {
            return Err(Error::Coverage(
                "merged coverage is empty but inputs carry entries off the imaginary axis".into(),
            ));
        }
        let mirrored = parts.iter().all(|(_, z)| z.mirrored);
        let mut raw: Vec<MultiplicityEntry> = Vec::new();
        for (t, z) in parts {
            let list = if mirrored { z.entries.clone() } else { z.expanded() };
            raw.extend(
                list.into_iter()
                    .filter(|e| e.z.re.abs() <= t_max)
                    .map(|e| MultiplicityEntry::new(e.z, t * e.m)),
            );
        }
        sort_entries(&mut raw);
        let mut merged: Vec<MultiplicityEntry> = Vec::with_capacity(raw.len());
        for e in raw {
            let hit = merged
                .iter_mut()
                .rev()
                .take_while(|m| m.z.re >= e.z.re - MERGE_TOLERANCE)
                .find(|m| (m.z - e.z).norm() <= MERGE_TOLERANCE);
            match hit {
                Some(m) => m.m += e.m,
                None => merged.push(e),
            }
        }
        merged.retain(|e| e.m.abs() > ZERO_MULTIPLICITY);
        Ok(ZeroData { entries: merged, t_max, mirrored })
    }
}

fn sort_entries(v: &mut [MultiplicityEntry]) {
    v.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
}

#[derive(Debug, Clone)]
pub struct LDatum {
    f: CoefficientStream,
    kernel: Kernel,
    zeros: ZeroData,
    strip: f64,
}

/// Samples of x·K(x) used by the Richardson degree estimate: x = 2^{-k}.
const RICHARDSON_K: std::ops::RangeInclusive<i32> = 4..=20;
const RICHARDSON_COLUMNS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub analytic: bool,
}

impl LDatum {
    pub fn new(f: CoefficientStream, kernel: Kernel, zeros: ZeroData) -> Result<Self> {
        if f.kind() != StreamKind::F {
            return Err(Error::InvalidArgument("datum needs an f-stream".into()));
        }
        let f1 = f.get(1);
        if f1.im != 0.0 || !f1.re.is_finite() {
            return Err(Error::Domain(format!("f(1) must be real, found {f1}")));
        }
        for t in kernel.terms() {
            if let KernelTerm::Gamma(g) = t {
                g.validate()?;
            }
        }
        Ok(LDatum { f, kernel, zeros, strip: 0.5 })
    }

    pub fn with_strip(mut self, strip: f64) -> Self {
        self.strip = strip;
        self
    }

    /// Replace the zero data by the merge of the current entries and `table`;
    /// coverage becomes that of `table`.
    pub fn with_zero_table(mut self, table: ZeroData) -> Result<Self> {
        let mut current = self.zeros.clone();
        current.t_max = f64::INFINITY;
        let merged = ZeroData::merge(&[(1.0, &current), (1.0, &table)])?;
        self.zeros = merged;
        Ok(self)
    }

    pub fn with_zeros(mut self, zeros: ZeroData) -> Self {
        self.zeros = zeros;
        self
    }

    pub fn f(&self) -> &CoefficientStream {
        &self.f
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn zeros(&self) -> &ZeroData {
        &self.zeros
    }

    /// Bound on |Im z| over multiplicity entries.
    pub fn strip(&self) -> f64 {
        self.strip
    }

    pub fn kernel_eval(&self, x: f64) -> Result<Complex64> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("kernel evaluated at x = {x}")));
        }
        Ok(self.kernel.eval(x))
    }

    /// Σ weight · (number of shifts), exact for gamma-type kernels.
    pub fn analytic_degree(&self) -> Option<f64> {
        self.kernel
            .terms()
            .iter()
            .map(|t| match t {
                KernelTerm::Gamma(g) => Some(g.weight * g.shifts.len() as f64),
                KernelTerm::Opaque { .. } => None,
            })
            .sum()
    }

    /// 2 lim_{x→0+} x K(x) by Richardson extrapolation.
    pub fn degree_richardson(&self) -> Result<DegreeEstimate> {
        let samples: Vec<f64> = RICHARDSON_K
            .map(|k| {
                let x = (-k as f64).exp2();
                2.0 * x * self.kernel.eval(x).re
            })
            .collect();
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("kernel is not finite near 0".into()));
        }
        let mut table = vec![samples];
        for j in 1..=RICHARDSON_COLUMNS {
            let prev = &table[j - 1];
            let factor = (j as f64).exp2() - 1.0;
            let col: Vec<f64> = prev.windows(2).map(|w| w[1] + (w[1] - w[0]) / factor).collect();
            table.push(col);
        }
        let last = &table[RICHARDSON_COLUMNS];
        let prev = &table[RICHARDSON_COLUMNS - 1];
        let value = *last.last().unwrap();
        let error = (value - prev.last().unwrap()).abs() + (value - last[last.len() - 2]).abs();
        if error > 1e-6 * (1.0 + value.abs()) {
            return Err(Error::NonConvergence {
                evaluations: RICHARDSON_K.count(),
                estimate: error,
                tol: 1e-6,
            });
        }
        Ok(DegreeEstimate { value, error_estimate: error, analytic: false })
    }

    pub fn degree_estimate(&self) -> Result<DegreeEstimate> {
        match self.analytic_degree() {
            Some(d) => Ok(DegreeEstimate { value: d, error_estimate: 0.0, analytic: true }),
            None => self.degree_richardson(),
        }
    }

    pub fn degree(&self) -> Result<f64> {
        self.degree_estimate().map(|d| d.value)
    }

    /// Q = exp(−2 f(1)).
    pub fn conductor(&self) -> f64 {
        (-2.0 * self.f.get(1).re).exp()
    }

    pub fn log_conductor(&self) -> f64 {
        -2.0 * self.f.get(1).re
    }

    /// Σ t_i F_i, componentwise.
    pub fn combine(terms: &[(f64, &LDatum)]) -> Result<LDatum> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("empty combination".into()));
        }
        let streams: Vec<(f64, &CoefficientStream)> = terms.iter().map(|(t, d)| (*t, &d.f)).collect();
        let f = CoefficientStream::linear_combination(&streams)?;
        let kernel = Kernel::new(
            terms
                .iter()
                .flat_map(|(t, d)| d.kernel.terms().iter().map(move |k| k.scaled(*t)))
                .collect(),
        );
        let parts: Vec<(f64, &ZeroData)> = terms.iter().map(|(t, d)| (*t, &d.zeros)).collect();
        let zeros = ZeroData::merge(&parts)?;
        let strip = terms.iter().map(|(_, d)| d.strip).fold(0.0, f64::max);
        Ok(LDatum { f, kernel, zeros, strip })
    }

    pub fn positivity_report(&self) -> PositivityReport {
        positivity_report(self)
    }

    pub fn axiom_report(&self, n_max: u64) -> Result<AxiomReport> {
        axiom_report(self, n_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Positivity {
    PositiveWithinCoverage,
    NotPositive,
}

/// At least this many negative entries, with non-decreasing density per unit
/// T, make a datum "not positive".
pub const NEGATIVE_THRESHOLD: usize = 8;

/// Negative multiplicities within coverage. Positivity can only be asserted
/// up to `t_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub negative_count: usize,
    pub negative_locations: Vec<Complex64>,
    /// Negative entries with |Re z| in the outer half of the range.
    pub outer_half_count: usize,
    pub t_max: f64,
    pub verdict: Positivity,
}

pub fn positivity_report(datum: &LDatum) -> PositivityReport {
    let negative: Vec<Complex64> = datum
        .zeros
        .expanded()
        .into_iter()
        .filter(|e| e.m < 0.0)
        .map(|e| e.z)
        .collect();
    let t = datum.zeros.t_max;
    let range = if t.is_finite() { t } else { negative.iter().map(|z| z.re.abs()).fold(0.0, f64::max) };
    let outer = negative.iter().filter(|z| z.re.abs() > 0.5 * range).count();
    let growing = outer > 0 && outer >= negative.len() - outer;
    let verdict = if negative.len() >= NEGATIVE_THRESHOLD && growing {
        Positivity::NotPositive
    } else {
        Positivity::PositiveWithinCoverage
    };
    PositivityReport {
        negative_count: negative.len(),
        negative_locations: negative,
        outer_half_count: outer,
        t_max: t,
        verdict,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomStatus {
    Pass,
    Warn,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub growth: GrowthReport,
    pub f1_real: bool,
    pub growth_status: AxiomStatus,
    /// x·K(x) at x = 1e-2, 1e-4, 1e-6.
    pub kernel_samples: [Complex64; 3],
    pub degree_status: AxiomStatus,
    pub entries_outside_strip: usize,
    pub nonintegral_multiplicities: usize,
    pub multiplicity_status: AxiomStatus,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        [self.growth_status, self.degree_status, self.multiplicity_status]
            .iter()
            .all(|s| *s == AxiomStatus::Pass)
    }
}

pub fn axiom_report(datum: &LDatum, n_max: u64) -> Result<AxiomReport> {
    let growth = growth_diagnostics(&datum.f, n_max)?;
    let f1_real = datum.f.get(1).im == 0.0;
    let growth_status = if f1_real && !growth.flagged { AxiomStatus::Pass } else { AxiomStatus::Warn };

    let samples = [1e-2, 1e-4, 1e-6].map(|x| x * datum.kernel.eval(x));
    let finite = samples.iter().all(|v| v.re.is_finite() && v.im.is_finite());
    let settling = (samples[1] - samples[2]).norm() <= (samples[0] - samples[1]).norm() + 1e-9;
    let real_limit = samples[2].im.abs() <= 1e-6 * (1.0 + samples[2].norm());
    let degree_status =
        if finite && settling && real_limit { AxiomStatus::Pass } else { AxiomStatus::Warn };

    let expanded = datum.zeros.expanded();
    let outside = expanded.iter().filter(|e| e.z.im.abs() > datum.strip + 1e-12).count();
    let nonintegral = expanded.iter().filter(|e| (e.m - e.m.round()).abs() > 1e-9).count();
    let multiplicity_status = if outside == 0 && nonintegral <= MAX_NONINTEGRAL {
        AxiomStatus::Pass
    } else {
        AxiomStatus::Warn
    };

    Ok(AxiomReport {
        growth,
        f1_real,
        growth_status,
        kernel_samples: samples,
        degree_status,
        entries_outside_strip: outside,
        nonintegral_multiplicities: nonintegral,
        multiplicity_status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn toy(shifts: Vec<Complex64>) -> LDatum {
        LDatum::new(
            CoefficientStream::zero(StreamKind::F),
            Kernel::from_gamma(GammaSpec::new(0.0, shifts)),
            ZeroData::none(),
        )
        .unwrap()
    }

    #[test]
    fn shift_kernel_small_x() {
        // x/(1-e^{-2x}) = 1/2 + x/2 + x^2/6 + O(x^4)
        for &x in &[1e-3, 1e-6, 1e-9] {
            let v = x * shift_kernel(c(-0.5, 0.0), x).re;
            let series = 0.5 + x / 2.0 + x * x / 6.0;
            assert!((v - series).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn degrees() {
        let d = toy(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.3, 2.0)]);
        assert_eq!(d.degree().unwrap(), 3.0);
        let r = d.degree_richardson().unwrap();
        assert!((r.value - 3.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn opaque_kernel_degree() {
        let k = Kernel::new(vec![KernelTerm::Opaque {
            weight: 0.5,
            func: Arc::new(|x: f64| Complex64::new(x.cosh() / x.sinh(), 0.0)),
        }]);
        let d = LDatum::new(CoefficientStream::zero(StreamKind::F), k, ZeroData::none()).unwrap();
        let r = d.degree_estimate().unwrap();
        assert!(!r.analytic);
        assert!((r.value - 1.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn bad_shift() {
        let k = Kernel::from_gamma(GammaSpec::new(0.0, vec![c(-0.5, 0.0)]));
        let r = LDatum::new(CoefficientStream::zero(StreamKind::F), k, ZeroData::none());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn zero_data_rules() {
        let e = |re, im, m| MultiplicityEntry::new(c(re, im), m);
        assert!(matches!(ZeroData::new(vec![e(5.0, 0.0, 1.0)], 4.0, true), Err(Error::Coverage(_))));
        assert!(ZeroData::new(vec![e(-1.0, 0.0, 1.0)], 4.0, true).is_err());
        let z = ZeroData::new(vec![e(1.0, 0.0, 1.0), e(0.0, 0.5, -1.0)], 4.0, true).unwrap();
        let x = z.expanded();
        assert_eq!(x.len(), 3);
        assert_eq!(x[0].z, c(-1.0, 0.0));
        assert_eq!(z.mass_within(4.0), 3.0);
    }

    #[test]
    fn merge_cancels_and_truncates() {
        let e = |re, im, m| MultiplicityEntry::new(c(re, im), m);
        let a = ZeroData::new(vec![e(1.0, 0.0, 1.0), e(3.0, 0.0, 2.0)], 4.0, true).unwrap();
        let b = ZeroData::new(vec![e(1.0, 0.0, 1.0)], 2.0, true).unwrap();
        let m = ZeroData::merge(&[(1.0, &a), (-1.0, &b)]).unwrap();
        assert_eq!(m.t_max(), 2.0);
        assert!(m.entries().is_empty());
        let empty = ZeroData::empty();
        assert!(matches!(ZeroData::merge(&[(1.0, &a), (1.0, &empty)]), Err(Error::Coverage(_))));
    }

    #[test]
    fn merge_mixed_representations() {
        let e = |re, im, m| MultiplicityEntry::new(c(re, im), m);
        let a = ZeroData::new(vec![e(1.0, 0.1, 1.0)], 4.0, true).unwrap();
        let b = ZeroData::new(vec![e(-1.0, 0.1, 1.0), e(1.0, 0.1, 1.0)], 4.0, false).unwrap();
        let m = ZeroData::merge(&[(1.0, &a), (-1.0, &b)]).unwrap();
        assert!(!m.mirrored());
        assert!(m.entries().is_empty());
    }

    #[test]
    fn positivity_threshold() {
        let e = |re, im, m| MultiplicityEntry::new(c(re, im), m);
        let poles = vec![e(0.0, 0.5, -1.0), e(0.0, -0.5, -1.0), e(14.0, 0.0, 1.0)];
        let d = toy(vec![]).with_zeros(ZeroData::new(poles, 20.0, true).unwrap());
        let r = d.positivity_report();
        assert_eq!(r.negative_count, 2);
        assert_eq!(r.verdict, Positivity::PositiveWithinCoverage);
        let quotient: Vec<MultiplicityEntry> = (1..=20).map(|k| e(k as f64, 0.0, -1.0)).collect();
        let q = toy(vec![]).with_zeros(ZeroData::new(quotient, 20.0, true).unwrap());
        assert_eq!(q.positivity_report().verdict, Positivity::NotPositive);
    }

    #[test]
    fn first_entries() {
        let e = |re, im, m| MultiplicityEntry::new(c(re, im), m);
        let z = ZeroData::new(
            vec![e(0.0, 0.5, -1.0), e(1.0, 0.0, 1.0), e(2.0, 0.0, 1.0), e(3.0, 0.0, 1.0)],
            4.0,
            true,
        )
        .unwrap();
        let f = z.first(2);
        assert_eq!(f.entries().len(), 3);
        assert_eq!(f.t_max(), 2.0);
    }
}
