//! Lazy, memoised coefficient streams and the exp/log transforms between the
//! f-sequence of a datum and the Dirichlet coefficients a(n) of L_F.

use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::character::DirichletCharacter;
use crate::error::{Error, Result};
use crate::sieve::{prime_power_base, sieve_to};

/// Which sequence a stream represents. Transforms check this tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StreamKind {
    F,
    A,
}

type Generator = Arc<dyn Fn(u64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Source {
    /// n = 1..=len, zero beyond.
    Table(Arc<Vec<Complex64>>),
    Func(Generator),
    Combination(Vec<(f64, CoefficientStream)>),
    WithHead(Complex64, CoefficientStream),
}

struct Inner {
    kind: StreamKind,
    source: Source,
    bound: Option<f64>,
    memo: RwLock<HashMap<u64, Complex64>>,
}

/// An infinite sequence indexed by n ≥ 1. Cheap to clone.
#[derive(Clone)]
pub struct CoefficientStream {
    inner: Arc<Inner>,
}

impl fmt::Debug for CoefficientStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<Complex64> = (1..=4).map(|n| self.get(n)).collect();
        f.debug_struct("CoefficientStream")
            .field("kind", &self.inner.kind)
            .field("head", &head)
            .finish()
    }
}

impl CoefficientStream {
    fn from_source(kind: StreamKind, source: Source) -> Self {
        CoefficientStream {
            inner: Arc::new(Inner {
                kind,
                source,
                bound: None,
                memo: RwLock::new(HashMap::new()),
            }),
        }
    }

    pub fn from_fn<G>(kind: StreamKind, g: G) -> Self
    where
        G: Fn(u64) -> Complex64 + Send + Sync + 'static,
    {
        Self::from_source(kind, Source::Func(Arc::new(g)))
    }

    /// `values[k]` is the coefficient at n = k + 1; zero beyond the table.
    pub fn from_table(kind: StreamKind, values: Vec<Complex64>) -> Self {
        Self::from_source(kind, Source::Table(Arc::new(values)))
    }

    pub fn zero(kind: StreamKind) -> Self {
        Self::from_table(kind, Vec::new())
    }

    /// Attach a declared bound |f(n)| ≤ B used by tail estimates.
    pub fn with_bound(self, bound: f64) -> Self {
        CoefficientStream {
            inner: Arc::new(Inner {
                kind: self.inner.kind,
                source: self.inner.source.clone(),
                bound: Some(bound),
                memo: RwLock::new(HashMap::new()),
            }),
        }
    }

    pub fn kind(&self) -> StreamKind {
        self.inner.kind
    }

    pub fn declared_bound(&self) -> Option<f64> {
        self.inner.bound
    }

    /// Same sequence with the n = 1 value replaced.
    pub fn with_head(&self, head: Complex64) -> Self {
        Self::from_source(self.kind(), Source::WithHead(head, self.clone()))
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self::from_source(self.kind(), Source::Combination(vec![(t, self.clone())]))
    }

    /// Σ t_i · s_i. All streams must share a kind.
    pub fn linear_combination(terms: &[(f64, &CoefficientStream)]) -> Result<Self> {
        let kind = match terms.first() {
            Some((_, s)) => s.kind(),
            None => return Err(Error::InvalidArgument("empty linear combination".into())),
        };
        if terms.iter().any(|(_, s)| s.kind() != kind) {
            return Err(Error::InvalidArgument(
                "cannot combine streams of different kinds".into(),
            ));
        }
        let bound = terms
            .iter()
            .map(|(t, s)| s.declared_bound().map(|b| t.abs() * b))
            .sum::<Option<f64>>();
        let out = Self::from_source(
            kind,
            Source::Combination(terms.iter().map(|(t, s)| (*t, (*s).clone())).collect()),
        );
        Ok(match bound {
            Some(b) => out.with_bound(b),
            None => out,
        })
    }

    /// Coefficient at n ≥ 1 (n = 0 yields zero).
    pub fn get(&self, n: u64) -> Complex64 {
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        match &self.inner.source {
            Source::Table(t) => return t.get((n - 1) as usize).copied().unwrap_or_default(),
            Source::WithHead(h, rest) => return if n == 1 { *h } else { rest.get(n) },
            _ => {}
        }
        if let Some(v) = self.inner.memo.read().expect("memo poisoned").get(&n) {
            return *v;
        }
        let v = match &self.inner.source {
            Source::Func(g) => g(n),
            Source::Combination(terms) => terms.iter().map(|(t, s)| *t * s.get(n)).sum(),
            _ => unreachable!(),
        };
        self.inner.memo.write().expect("memo poisoned").insert(n, v);
        v
    }

    /// Coefficients for n = 1..=n_max.
    pub fn values(&self, n_max: u64) -> Vec<Complex64> {
        (1..=n_max).map(|n| self.get(n)).collect()
    }
}

/// Λ(n)χ(n)/√n for n ≥ 2 and 0 at n = 1 (the archimedean f(1) is set by the
/// instance builders). Errors for non-primitive χ.
pub fn vonmangoldt_stream(chi: &DirichletCharacter) -> Result<CoefficientStream> {
    if !chi.is_primitive() {
        return Err(Error::NonPrimitive { modulus: chi.modulus(), index: chi.index() });
    }
    let chi = chi.clone();
    let s = CoefficientStream::from_fn(StreamKind::F, move |n| {
        if n < 2 {
            return Complex64::new(0.0, 0.0);
        }
        match prime_power_base(n) {
            Some(p) => chi.value(n) * ((p as f64).ln() / (n as f64).sqrt()),
            None => Complex64::new(0.0, 0.0),
        }
    });
    Ok(s)
}

/// a(n) for n ≤ N from the f-stream: a(1) = 1 and
/// a(n) log n = Σ_{d | n, d > 1} f(d) √d a(n/d).
pub fn exp_transform(f: &CoefficientStream, n_max: u64) -> Result<CoefficientStream> {
    if f.kind() != StreamKind::F {
        return Err(Error::InvalidArgument("exp_transform expects an f-stream".into()));
    }
    let n = n_max as usize;
    let mut acc = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut a = vec![Complex64::new(0.0, 0.0); n + 1];
    let fd: Vec<Complex64> = (0..=n_max)
        .map(|d| if d >= 2 { f.get(d) * (d as f64).sqrt() } else { Complex64::new(0.0, 0.0) })
        .collect();
    if n >= 1 {
        a[1] = Complex64::new(1.0, 0.0);
    }
    for m in 1..=n {
        if m >= 2 {
            a[m] = acc[m] / (m as f64).ln();
        }
        let am = a[m];
        if am == Complex64::new(0.0, 0.0) {
            continue;
        }
        // push a(m) into every multiple m·d
        let mut d = 2;
        while m * d <= n {
            if fd[d] != Complex64::new(0.0, 0.0) {
                acc[m * d] += fd[d] * am;
            }
            d += 1;
        }
    }
    Ok(CoefficientStream::from_table(StreamKind::A, a.split_off(1)))
}

/// Inverse of [`exp_transform`]: f(n) for n ≤ N from a(n), via
/// c(n) = a(n) log n − Σ_{d | n, 1 < d < n} c(d) a(n/d), f(n) = c(n)/√n.
/// f(1) is returned as 0.
pub fn log_transform(a: &CoefficientStream, n_max: u64) -> Result<CoefficientStream> {
    if a.kind() != StreamKind::A {
        return Err(Error::InvalidArgument("log_transform expects an a-stream".into()));
    }
    let a1 = a.get(1);
    if (a1 - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::Normalization(format!("{a1}")));
    }
    let n = n_max as usize;
    let av: Vec<Complex64> = (0..=n_max).map(|k| a.get(k)).collect();
    let mut conv = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    for d in 2..=n {
        c[d] = av[d] * (d as f64).ln() - conv[d];
        let cd = c[d];
        if cd == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut k = 2;
        while d * k <= n {
            conv[d * k] += cd * av[k];
            k += 1;
        }
    }
    let f: Vec<Complex64> = (1..=n)
        .map(|k| if k == 1 { Complex64::new(0.0, 0.0) } else { c[k] / (k as f64).sqrt() })
        .collect();
    Ok(CoefficientStream::from_table(StreamKind::F, f))
}

/// (a * b)(n) = Σ_{d | n} a(d) b(n/d) for n ≤ N.
pub fn dirichlet_convolution(
    a: &CoefficientStream,
    b: &CoefficientStream,
    n_max: u64,
) -> Vec<Complex64> {
    let n = n_max as usize;
    let bv: Vec<Complex64> = (0..=n_max).map(|k| b.get(k)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for d in 1..=n {
        let ad = a.get(d as u64);
        if ad == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut k = 1;
        while d * k <= n {
            out[d * k] += ad * bv[k];
            k += 1;
        }
    }
    out.split_off(1)
}

/// Threshold on the fitted growth exponent of Σ_{n≤x} |f(n)|² above which a
/// stream is flagged.
pub const GROWTH_FLAG: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub n_max: u64,
    /// max_{2≤n≤N} |f(n)| / log^k n for k = 1..5.
    pub log_power_maxima: [f64; 5],
    pub sample_points: [u64; 3],
    /// Σ_{n≤x} |f(n)|² at the sample points (n ≥ 2).
    pub partial_sums: [f64; 3],
    /// Raw log–log slopes between consecutive sample points.
    pub raw_slopes: [f64; 2],
    /// ε from fitting log S = a + ε log x + k log log x through the samples.
    pub exponent: f64,
    pub flagged: bool,
}

/// Growth diagnostics over n ≤ N (N ≥ 100). Sample points are N/100, N/10, N.
pub fn growth_diagnostics(f: &CoefficientStream, n_max: u64) -> Result<GrowthReport> {
    if n_max < 100 {
        return Err(Error::InvalidArgument(format!("growth diagnostics need N >= 100, got {n_max}")));
    }
    sieve_to(n_max);
    let pts = [n_max / 100, n_max / 10, n_max];
    let mut maxima = [0.0f64; 5];
    let mut sums = [0.0f64; 3];
    let mut running = 0.0;
    let mut next = 0;
    for n in 2..=n_max {
        let v = f.get(n).norm();
        let l = (n as f64).ln();
        let mut lk = 1.0;
        for m in maxima.iter_mut() {
            lk *= l;
            *m = m.max(v / lk);
        }
        running += v * v;
        while next < 3 && pts[next] == n {
            sums[next] = running;
            next += 1;
        }
    }
    while next < 3 {
        sums[next] = running;
        next += 1;
    }
    let lx = pts.map(|p| (p as f64).ln());
    let slope = |i: usize, j: usize| {
        if sums[i] > 0.0 && sums[j] > 0.0 {
            (sums[j] / sums[i]).ln() / (lx[j] - lx[i])
        } else {
            0.0
        }
    };
    let raw = [slope(0, 1), slope(1, 2)];
    let exponent = if sums.iter().all(|&s| s > 0.0) {
        fit_polylog(lx, sums.map(f64::ln))
    } else {
        raw[1]
    };
    Ok(GrowthReport {
        n_max,
        log_power_maxima: maxima,
        sample_points: pts,
        partial_sums: sums,
        raw_slopes: raw,
        exponent,
        flagged: exponent > GROWTH_FLAG,
    })
}

/// Exact solve of y_i = a + ε u_i + k log u_i for ε.
fn fit_polylog(u: [f64; 3], y: [f64; 3]) -> f64 {
    let m = nalgebra::Matrix3::new(
        1.0, u[0], u[0].ln(),
        1.0, u[1], u[1].ln(),
        1.0, u[2], u[2].ln(),
    );
    match m.lu().solve(&nalgebra::Vector3::new(y[0], y[1], y[2])) {
        Some(x) if x[1].is_finite() => x[1],
        _ => (y[2] - y[1]) / (u[2] - u[1]),
    }
}
