//! Classification diagnostics in low degree. Everything here is computed at
//! a finite truncation and reports consistency, never proof.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

use crate::character::DirichletCharacter;
use crate::coefficients::{exp_transform, CoefficientStream};
use crate::datum::LDatum;
use crate::error::{Error, Result};
use crate::sieve::{divisors, gcd, sieve_to};

/// Log–log slopes below this count as "flat".
pub const FLAT_SLOPE: f64 = 0.05;
pub const PERIOD_TOLERANCE: f64 = 1e-9;
pub const MATCH_TOLERANCE: f64 = 1e-6;
pub const DEGREE_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_T_RANGE: f64 = 10.0;
const T_GRID_STEP: f64 = 0.005;

pub const TRUNCATION_NOTE: &str = "diagnostic at finite truncation";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthSeries {
    pub points: Vec<f64>,
    pub values: Vec<f64>,
    /// log–log slope over the last two points; `None` without data.
    pub slope: Option<f64>,
}

impl GrowthSeries {
    fn new(points: Vec<f64>, values: Vec<f64>) -> Self {
        let k = points.len();
        let slope = if k < 2 {
            None
        } else if values[k - 1] == 0.0 && values[k - 2] == 0.0 {
            Some(0.0)
        } else if values[k - 2] > 0.0 && values[k - 1] > 0.0 {
            Some((values[k - 1] / values[k - 2]).ln() / (points[k - 1] / points[k - 2]).ln())
        } else {
            Some(f64::INFINITY)
        };
        GrowthSeries { points, values, slope }
    }

    fn flat(&self) -> Option<bool> {
        self.slope.map(|s| s < FLAT_SLOPE)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrivialityReport {
    /// Σ_{2≤n≤x} |f(n)| / log n.
    pub f_sums: GrowthSeries,
    /// Σ_{n≤x} |a(n)| / √n.
    pub a_sums: GrowthSeries,
    /// Σ_{|Re z|≤T} |m(z)| / T at T_max/4, T_max/2, T_max; no points when
    /// the coverage is empty or unbounded with no entries.
    pub zero_ratio: GrowthSeries,
    pub consistent_with_trivial: bool,
    pub note: &'static str,
}

pub fn triviality_diagnostic(datum: &LDatum, n_max: u64) -> Result<TrivialityReport> {
    if n_max < 100 {
        return Err(Error::InvalidArgument(format!("triviality diagnostic needs N >= 100, got {n_max}")));
    }
    sieve_to(n_max);
    let pts = [n_max / 100, n_max / 10, n_max];
    let a = exp_transform(datum.f(), n_max)?;
    let (mut fs, mut as_) = (0.0, a.get(1).norm());
    let mut fv = Vec::new();
    let mut av = Vec::new();
    let mut next = 0;
    for n in 2..=n_max {
        fs += datum.f().get(n).norm() / (n as f64).ln();
        as_ += a.get(n).norm() / (n as f64).sqrt();
        while next < 3 && pts[next] == n {
            fv.push(fs);
            av.push(as_);
            next += 1;
        }
    }
    while fv.len() < 3 {
        fv.push(fs);
        av.push(as_);
    }
    let xs: Vec<f64> = pts.iter().map(|&p| p as f64).collect();
    let f_sums = GrowthSeries::new(xs.clone(), fv);
    let a_sums = GrowthSeries::new(xs, av);

    let t = datum.zeros().t_max();
    let zero_ratio = if t.is_finite() && t > 0.0 {
        let ts = vec![t / 4.0, t / 2.0, t];
        let vals = ts.iter().map(|&x| datum.zeros().mass_within(x) / x).collect();
        GrowthSeries::new(ts, vals)
    } else if t.is_infinite() && datum.zeros().entries().is_empty() {
        GrowthSeries::new(vec![1.0, 2.0], vec![0.0, 0.0])
    } else {
        GrowthSeries::new(Vec::new(), Vec::new())
    };
    // Σ|a(n)|/√n ≥ |a(1)| = 1 never decays; it is flat exactly when a(n) = 0 for n ≥ 2
    let consistent = f_sums.flat() == Some(true)
        && a_sums.flat() == Some(true)
        && zero_ratio.flat() != Some(false);
    Ok(TrivialityReport {
        f_sums,
        a_sums,
        zero_ratio,
        consistent_with_trivial: consistent,
        note: TRUNCATION_NOTE,
    })
}

/// Smallest q ≤ q_max with |a(n+q) − a(n)| ≤ 1e-9 for n ≤ N − q. Needs N ≥ 4 q_max.
pub fn detect_periodicity(a: &CoefficientStream, n_max: u64, q_max: u64) -> Result<Option<u64>> {
    if q_max == 0 || n_max < 4 * q_max {
        return Err(Error::InvalidArgument(format!(
            "periodicity search needs N >= 4 q_max (N = {n_max}, q_max = {q_max})"
        )));
    }
    let v = a.values(n_max);
    Ok((1..=q_max).find(|&q| {
        let q = q as usize;
        (0..v.len() - q).all(|i| (v[i + q] - v[i]).norm() <= PERIOD_TOLERANCE)
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterMatch {
    pub modulus: u64,
    pub index: u64,
    pub t: f64,
    /// The match is a shift of ζ (trivial character).
    pub zeta_shift: bool,
    pub max_deviation: f64,
}

fn wrap(x: f64) -> f64 {
    x - TAU * ((x + PI) / TAU).floor()
}

/// Best t on a grid over [−range, range] for phases φ_n ≈ −t log n.
fn periodogram(samples: &[(f64, f64)], range: f64) -> f64 {
    let steps = (2.0 * range / T_GRID_STEP).round() as i64;
    let mut best = (f64::NEG_INFINITY, 0.0f64);
    for k in 0..=steps {
        let t = -range + k as f64 * T_GRID_STEP;
        let s: Complex64 = samples.iter().map(|&(phi, l)| Complex64::from_polar(1.0, phi + t * l)).sum();
        // ties go to the smaller |t|
        if s.norm() > best.0 + 1e-9 || ((s.norm() - best.0).abs() <= 1e-9 && t.abs() < best.1.abs()) {
            best = (s.norm(), t);
        }
    }
    best.1
}

/// Least-squares refinement of t around `seed` with unwrapped residuals.
fn refine_t(samples: &[(f64, f64)], seed: f64) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for &(phi, l) in samples {
        let r = wrap(phi + seed * l);
        num += r * l;
        den += l * l;
    }
    if den == 0.0 {
        seed
    } else {
        seed - num / den
    }
}

/// Search primitive χ mod divisors of q and real |t| ≤ range with
/// a(n) = χ(n) n^{−it} for n ≤ N. Returns the unique match, if any.
pub fn match_character_in(a: &CoefficientStream, q: u64, n_max: u64, range: f64) -> Result<Option<CharacterMatch>> {
    if q == 0 || q > 10_000 {
        return Err(Error::InvalidArgument(format!("modulus {q} outside 1..=10000")));
    }
    let values = a.values(n_max);
    let at = |n: u64| values[(n - 1) as usize];
    if n_max == 0 || (at(1) - Complex64::new(1.0, 0.0)).norm() > MATCH_TOLERANCE {
        return Ok(None);
    }
    let sieve = sieve_to(n_max);

    // character-free seed from n ≡ 1 mod q, where χ(n) = 1
    let ones: Vec<(f64, f64)> = (1..)
        .map(|k| 1 + k * q)
        .take_while(|&n| n <= n_max)
        .filter(|&n| at(n).norm() > 0.5)
        .map(|n| (at(n).arg(), (n as f64).ln()))
        .collect();
    let shared_seed = (ones.len() >= 2).then(|| refine_t(&ones, periodogram(&ones, range)));

    let mut candidates = Vec::new();
    for d in divisors(q) {
        for i in 0..DirichletCharacter::count(d) {
            candidates.push((d, i));
        }
    }
    let matches: Vec<CharacterMatch> = candidates
        .par_iter()
        .filter_map(|&(d, i)| {
            let chi = DirichletCharacter::new(d, i).ok()?;
            if !chi.is_primitive() {
                return None;
            }
            let samples: Vec<(f64, f64)> = sieve
                .primes()
                .iter()
                .map(|&p| p as u64)
                .take_while(|&p| p <= n_max)
                .filter(|&p| gcd(p, d) == 1 && at(p).norm() > 0.5)
                .map(|p| ((at(p) * chi.value(p).conj()).arg(), (p as f64).ln()))
                .collect();
            let seed = match shared_seed {
                Some(s) => s,
                None if samples.is_empty() => 0.0,
                None => periodogram(&samples, range),
            };
            let t = if samples.is_empty() { seed } else { refine_t(&samples, seed) };
            if t.abs() > range + T_GRID_STEP {
                return None;
            }
            let mut worst = 0.0f64;
            for n in 1..=n_max {
                let model = chi.value(n) * Complex64::from_polar(1.0, -t * (n as f64).ln());
                worst = worst.max((at(n) - model).norm());
                if worst > MATCH_TOLERANCE {
                    return None;
                }
            }
            Some(CharacterMatch { modulus: d, index: i, t, zeta_shift: d == 1, max_deviation: worst })
        })
        .collect();
    Ok(match matches.len() {
        1 => matches.into_iter().next(),
        _ => None,
    })
}

pub fn match_character(a: &CoefficientStream, q: u64, n_max: u64) -> Result<Option<CharacterMatch>> {
    match_character_in(a, q, n_max, DEFAULT_T_RANGE)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Trivial,
    /// 0 < d < 1
    ImpossibleBelowOne,
    Dirichlet,
    /// 1 < d < 2
    ImpossibleBelowTwo,
    Unknown,
}

impl Category {
    pub fn label(&self) -> &'static str {
        match self {
            Category::Trivial => "trivial",
            Category::ImpossibleBelowOne => "impossible(0<d<1)",
            Category::Dirichlet => "dirichlet",
            Category::ImpossibleBelowTwo => "impossible(1<d<2)",
            Category::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationVerdict {
    pub degree: f64,
    pub category: Category,
    pub evidence: String,
    pub character: Option<CharacterMatch>,
}

pub fn degree_gate(d: f64) -> Result<ClassificationVerdict> {
    if !d.is_finite() || d < -DEGREE_TOLERANCE {
        return Err(Error::DegreeRange(d));
    }
    let tol = DEGREE_TOLERANCE;
    let (category, evidence) = if d.abs() <= tol {
        (Category::Trivial, "degree 0: the only L-datum is the trivial datum (0, 0, 0)")
    } else if d < 1.0 - tol {
        (Category::ImpossibleBelowOne, "no L-datum has degree strictly between 0 and 1")
    } else if (d - 1.0).abs() <= tol {
        (
            Category::Dirichlet,
            "degree 1: a positive datum has periodic coefficients and is L(s + it, chi) for a primitive character chi",
        )
    } else if d < 2.0 - tol {
        (Category::ImpossibleBelowTwo, "no positive L-datum has degree strictly between 1 and 2")
    } else {
        (Category::Unknown, "degree >= 2: no classification available")
    };
    Ok(ClassificationVerdict { degree: d, category, evidence: evidence.to_string(), character: None })
}

/// Degree gate plus, in degree 1, a periodicity search and character match
/// on the first N coefficients of L_F.
pub fn classify(datum: &LDatum, n_max: u64, q_max: u64) -> Result<ClassificationVerdict> {
    let d = datum.degree()?;
    let mut v = degree_gate(d)?;
    if v.category == Category::Dirichlet {
        let a = exp_transform(datum.f(), n_max)?;
        let q_max = q_max.min(n_max / 4).max(1);
        let found = match detect_periodicity(&a, n_max, q_max)? {
            Some(q) => match_character(&a, q, n_max)?,
            None => match_character(&a, 1, n_max)?,
        };
        v.evidence = match &found {
            Some(m) => format!(
                "{}; coefficients match chi = {} mod {} with t = {} up to n = {n_max} ({TRUNCATION_NOTE})",
                v.evidence, m.index, m.modulus, m.t
            ),
            None => format!("{}; no character match up to n = {n_max} ({TRUNCATION_NOTE})", v.evidence),
        };
        v.character = found;
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingVerdict {
    pub n: u64,
    pub k: u64,
    pub holds: bool,
    pub explanation: String,
}

/// Whether the degree gate forces Λ(s, π), π unitary cuspidal on GL_n, to
/// have infinitely many zeros of order not divisible by k: true iff n/k < 2.
pub fn vanishing_order_gate(n: u64, k: u64) -> VanishingVerdict {
    if k < 2 || n == 0 {
        return VanishingVerdict {
            n,
            k,
            holds: false,
            explanation: "the argument needs n >= 1 and k >= 2".into(),
        };
    }
    let r = n as f64 / k as f64;
    let holds = 2 * k > n;
    let order = if k == 2 { "odd order".to_string() } else { format!("order not divisible by {k}") };
    let explanation = if holds {
        format!(
            "If all but finitely many zeros of Lambda(s, pi) had order divisible by {k}, then (1/{k}) F_pi \
             would be a positive L-datum of degree {n}/{k} = {r}. Degree below 2 leaves only the trivial \
             datum, degree-1 Dirichlet data, or forbidden ranges, none of which is (1/{k}) F_pi. Hence \
             infinitely many zeros have {order}."
        )
    } else {
        format!("{n}/{k} = {r} >= 2: the scaled datum falls outside the classified range, so the gate is silent.")
    };
    VanishingVerdict { n, k, holds, explanation }
}
