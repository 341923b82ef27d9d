//! Built-in data: ζ, Dirichlet L-functions, and data assembled from a gamma
//! specification.

use num_complex::Complex64;
use std::path::{Path, PathBuf};

use crate::character::DirichletCharacter;
use crate::coefficients::{vonmangoldt_stream, CoefficientStream};
use crate::datum::{GammaSpec, Kernel, LDatum, MultiplicityEntry, ZeroData};
use crate::error::{Error, Result};
use crate::special::gamma_r_logderiv;

/// Environment variable overriding the directory holding the bundled zero table.
pub const DATA_DIR_ENV: &str = "LDATA_DATA_DIR";
pub const ZETA_ZERO_FILE: &str = "zeta_zeros.txt";

/// Archimedean part of f(1): −½ log q − Re Σ Γ'_ℝ/Γ_ℝ(½ + μ_j).
pub fn archimedean_f1(log_conductor: f64, shifts: &[Complex64]) -> Result<f64> {
    let mut digamma_part = 0.0;
    for &mu in shifts {
        digamma_part += gamma_r_logderiv(Complex64::new(0.5, 0.0) + mu)?.re;
    }
    Ok(-0.5 * log_conductor - digamma_part)
}

fn pole_entries() -> Vec<MultiplicityEntry> {
    vec![
        MultiplicityEntry::new(Complex64::new(0.0, -0.5), -1.0),
        MultiplicityEntry::new(Complex64::new(0.0, 0.5), -1.0),
    ]
}

/// ζ with its pole entries and no zero coverage. Attach zeros with
/// [`LDatum::with_zero_table`] or use [`build_zeta_with_zeros`].
pub fn build_zeta() -> LDatum {
    let f = vonmangoldt_stream(&DirichletCharacter::trivial())
        .expect("trivial character is primitive")
        .with_head(Complex64::new(archimedean_f1(0.0, &[Complex64::new(0.0, 0.0)]).expect("finite"), 0.0))
        .with_bound(1.0);
    let zeros = ZeroData::new(pole_entries(), 0.0, true).expect("pole entries are valid");
    LDatum::new(f, Kernel::from_gamma(GammaSpec::new(0.0, vec![Complex64::new(0.0, 0.0)])), zeros)
        .expect("zeta datum is valid")
}

/// ζ with the bundled zero table, optionally limited to the first `limit` zeros.
pub fn build_zeta_with_zeros(limit: Option<usize>) -> Result<LDatum> {
    let mut table = bundled_zeta_zeros()?;
    if let Some(n) = limit {
        table = table.first(n);
    }
    build_zeta().with_zero_table(table)
}

/// Dirichlet L(s, χ) for the primitive character `index` mod q. No zero
/// coverage; q = 1 gives ζ (poles included).
pub fn build_dirichlet(modulus: u64, index: u64) -> Result<LDatum> {
    let chi = DirichletCharacter::new(modulus, index)?;
    if modulus == 1 {
        return Ok(build_zeta());
    }
    if !chi.is_primitive() {
        return Err(Error::NonPrimitive { modulus, index });
    }
    let log_q = (modulus as f64).ln();
    let shift = vec![Complex64::new(chi.parity() as f64, 0.0)];
    let f1 = archimedean_f1(log_q, &shift)?;
    let f = vonmangoldt_stream(&chi)?.with_head(Complex64::new(f1, 0.0)).with_bound(1.0);
    let zeros = ZeroData::new(Vec::new(), 0.0, chi.is_real())?;
    LDatum::new(f, Kernel::from_gamma(GammaSpec::new(log_q, shift)), zeros)
}

/// Datum with gamma factor q^{s/2} Π Γ_ℝ(s + μ_j), coefficients `f` for n ≥ 2
/// and the archimedean f(1).
pub fn build_from_spec(
    log_conductor: f64,
    shifts: Vec<Complex64>,
    f: CoefficientStream,
    zeros: ZeroData,
) -> Result<LDatum> {
    let spec = GammaSpec::new(log_conductor, shifts);
    spec.validate()?;
    let f1 = archimedean_f1(log_conductor, &spec.shifts)?;
    let f = f.with_head(Complex64::new(f1, 0.0));
    LDatum::new(f, Kernel::from_gamma(spec), zeros)
}

/// Parse a zero table: one entry per line, `re [im [m]]`, `#` comments.
/// Missing fields default to im = 0 and m = 1.
pub fn parse_zero_table(text: &str, mirrored: bool, t_max: f64) -> Result<ZeroData> {
    let mut entries = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() > 3 {
            return Err(Error::Parse { line, message: format!("expected at most 3 fields, got {}", fields.len()) });
        }
        let mut vals = [0.0, 0.0, 1.0];
        for (slot, s) in vals.iter_mut().zip(&fields) {
            *slot = s.parse::<f64>().map_err(|e| Error::Parse { line, message: format!("{s:?}: {e}") })?;
            if !slot.is_finite() {
                return Err(Error::Parse { line, message: format!("non-finite value {s:?}") });
            }
        }
        let z = Complex64::new(vals[0], vals[1]);
        if mirrored && z.re < 0.0 {
            return Err(Error::Parse { line, message: "negative real part in a mirrored table".into() });
        }
        if z.re.abs() > t_max {
            return Err(Error::Coverage(format!("line {line}: entry {z} beyond coverage bound {t_max}")));
        }
        entries.push(MultiplicityEntry::new(z, vals[2]));
    }
    ZeroData::new(entries, t_max, mirrored)
}

pub fn read_zero_table(path: impl AsRef<Path>, mirrored: bool, t_max: f64) -> Result<ZeroData> {
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    parse_zero_table(&text, mirrored, t_max)
}

pub fn data_dir() -> PathBuf {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("data"),
    }
}

/// Coverage of the bundled table: every zero with 0 < γ ≤ this is listed.
pub const ZETA_TABLE_COVERAGE: f64 = 1031.0;

pub fn bundled_zeta_zeros() -> Result<ZeroData> {
    read_zero_table(data_dir().join(ZETA_ZERO_FILE), true, ZETA_TABLE_COVERAGE)
}
