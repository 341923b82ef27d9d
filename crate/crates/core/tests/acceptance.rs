//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach stdout.

use std::f64::consts::{LN_2, PI};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ldata::character::DirichletCharacter;
use ldata::classify::{degree_gate, detect_periodicity, match_character, vanishing_order_gate};
use ldata::coefficients::{exp_transform, log_transform, CoefficientStream, StreamKind};
use ldata::datum::{LDatum, ZeroData};
use ldata::explicit::{verify, zero_side};
use ldata::instances::{build_dirichlet, build_from_spec, build_zeta, build_zeta_with_zeros};
use ldata::sieve::sieve_to;
use ldata::special::{digamma, EULER_GAMMA};
use ldata::test_function::make_bump;
use ldata::twists::{gamma_asymptotics, s_sum, twist_sum, TwistSpec};
use ldata::Error;

type Outcome = Result<String, String>;
type Criterion = Box<dyn FnOnce(&mut ChaCha8Rng) -> Result<Outcome, Error>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

fn gamma_datum(shifts: &[f64]) -> LDatum {
    let shifts = shifts.iter().map(|&m| c(m, 0.0)).collect();
    let f = CoefficientStream::zero(StreamKind::F);
    build_from_spec(0.0, shifts, f, ZeroData::empty()).unwrap()
}

fn zeta_explicit_formula() -> Result<Outcome, Error> {
    let tf = make_bump(1.0, 0.5, 0.5)?;
    let start = Instant::now();
    let full = verify(&build_zeta_with_zeros(None)?, &tf)?;
    let elapsed = start.elapsed().as_secs_f64();
    let short = verify(&build_zeta_with_zeros(Some(100))?, &tf)?;
    let ratio = short.residual / full.residual;
    Ok(check(
        full.residual < 1e-4 && ratio >= 10.0 && elapsed < 10.0,
        format!(
            "residual {:.3e}, first 100 zeros {:.3e} (ratio {ratio:.1e}), {elapsed:.2} s",
            full.residual, short.residual
        ),
    ))
}

fn linearity(rng: &mut ChaCha8Rng) -> Result<Outcome, Error> {
    let tf = make_bump(1.0, 0.5, 0.5)?;
    let zeta = build_zeta_with_zeros(None)?;
    let base = verify(&zeta, &tf)?;
    let signed = |r: &ldata::explicit::EfReport| r.zero_side - r.arithmetic_side;
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let t1 = rng.gen_range(-2.0..2.0);
        let t2 = rng.gen_range(-2.0..2.0);
        let combo = LDatum::combine(&[(t1, &zeta), (t2, &zeta)])?;
        let r = verify(&combo, &tf)?;
        worst = worst.max((signed(&r) - (t1 + t2) * signed(&base)).abs());
        worst = worst.max((r.residual - (t1 + t2).abs() * base.residual).abs());
    }
    Ok(check(worst < 1e-12, format!("max deviation {worst:.2e} over 3 weight pairs")))
}

fn degrees() -> Result<Outcome, Error> {
    let zeta = build_zeta();
    let chi4 = build_dirichlet(4, 1)?;
    let both = LDatum::combine(&[(1.0, &zeta), (1.0, &chi4)])?;
    let half = LDatum::combine(&[(0.5, &gamma_datum(&[0.0, 0.0, 1.0]))])?;
    let mut worst_a = 0.0f64;
    let mut worst_r = 0.0f64;
    for (d, expect) in [(&zeta, 1.0), (&chi4, 1.0), (&both, 2.0), (&half, 1.5)] {
        let a = d.analytic_degree().ok_or_else(|| Error::InvalidArgument("no analytic degree".into()))?;
        worst_a = worst_a.max((a - expect).abs());
        worst_r = worst_r.max((d.degree_richardson()?.value - expect).abs());
    }
    Ok(check(
        worst_a < 1e-12 && worst_r < 1e-4,
        format!("analytic max error {worst_a:.1e}, Richardson max error {worst_r:.1e}"),
    ))
}

fn conductor() -> Result<Outcome, Error> {
    let zeta = build_zeta();
    let psi = digamma(c(0.25, 0.0))?.re;
    let closed = -EULER_GAMMA - 3.0 * LN_2 - PI / 2.0;
    let f1 = 0.5 * PI.ln() - 0.5 * closed;
    let expect = (-2.0 * f1).exp();
    let rel_q = (zeta.conductor() - expect).abs() / expect;
    let rel_psi = (psi - closed).abs() / closed.abs();
    Ok(check(
        rel_q < 1e-10 && rel_psi < 1e-10,
        format!("Q = {:.15}, relative error {rel_q:.1e}; digamma(1/4) relative error {rel_psi:.1e}", zeta.conductor()),
    ))
}

fn coefficient_algebra(rng: &mut ChaCha8Rng) -> Result<Outcome, Error> {
    let a = exp_transform(build_zeta().f(), 10_000)?;
    let ones = (1..=10_000).map(|n| (a.get(n) - 1.0).norm()).fold(0.0, f64::max);

    // Random Euler products: f(p^k) = -α_p^k log p with |α_p| ≤ 1.
    let n_max = 1000u64;
    let sieve = sieve_to(n_max);
    let mut roundtrip = 0.0f64;
    for _ in 0..50 {
        let alpha: Vec<Complex64> = (0..=n_max)
            .map(|_| Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..2.0 * PI)))
            .collect();
        let values: Vec<Complex64> = (1..=n_max)
            .map(|n| match sieve.prime_power_base(n) {
                Some(p) => {
                    let k = (n as f64).ln() / (p as f64).ln();
                    -alpha[p as usize].powu(k.round() as u32) * (p as f64).ln()
                }
                None => c(0.0, 0.0),
            })
            .collect();
        let f = CoefficientStream::from_table(StreamKind::F, values);
        let g = log_transform(&exp_transform(&f, n_max)?, n_max)?;
        for n in 2..=n_max {
            roundtrip = roundtrip.max((g.get(n) - f.get(n)).norm());
        }
    }

    let half = build_zeta().f().scaled(0.5);
    let a4 = exp_transform(&half, 4)?.get(4);
    let dev4 = (a4 - 0.375).norm();
    Ok(check(
        ones < 1e-10 && roundtrip < 1e-12 && dev4 < 1e-12,
        format!("max |a(n) - 1| {ones:.1e}, roundtrip {roundtrip:.1e} on 50 streams, |a(4) - 3/8| {dev4:.1e}"),
    ))
}

fn twists(rng: &mut ChaCha8Rng) -> Result<Outcome, Error> {
    let zeta = build_zeta();
    let mut closed = 0.0f64;
    for y in [0.5, 1.0, 2.0] {
        let s = s_sum(&zeta, c(0.0, y), 1_000_000)?;
        let expect = 1.0 / (2.0 * PI * y).exp_m1();
        closed = closed.max((s.value - expect).norm());
    }
    let chi4 = build_dirichlet(4, 1)?;
    let spec = TwistSpec::new(vec![1.0], vec![1.0])?;
    let mut agree = 0.0f64;
    for i in 0..20 {
        let d = if i % 2 == 0 { &zeta } else { &chi4 };
        let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(0.2..2.0));
        let a = twist_sum(d, z, &spec, 1_000_000)?;
        let b = s_sum(d, z, 1_000_000)?;
        agree = agree.max((a.value - b.value).norm());
    }
    Ok(check(
        closed < 1e-12 && agree < 1e-13,
        format!("closed form max error {closed:.1e}, twist vs s_sum max difference {agree:.1e}"),
    ))
}

fn asymptotics() -> Result<Outcome, Error> {
    let zeta = build_zeta();
    let chi4 = build_dirichlet(4, 1)?;
    let gl3 = gamma_datum(&[0.0, 0.0, 1.0]);
    let cases = [
        ("zeta", zeta.clone(), 1.0),
        ("chi4", chi4.clone(), 1.0),
        ("zeta+chi4", LDatum::combine(&[(1.0, &zeta), (1.0, &chi4)])?, 2.0),
        ("gl3 shifts", gl3.clone(), 3.0),
        ("half gl3", LDatum::combine(&[(0.5, &gl3)])?, 1.5),
    ];
    let mut worst = 0.0f64;
    let mut monotone = true;
    for (_, d, expect) in &cases {
        worst = worst.max((gamma_asymptotics(d, 5)?.d - expect).abs());
        let mut last = f64::INFINITY;
        for order in 1..=5 {
            let r = gamma_asymptotics(d, order)?.fit_residual;
            monotone &= r < last;
            last = r;
        }
    }
    Ok(check(
        worst < 1e-6 && monotone,
        format!("max |d - expected| {worst:.1e} over 5 specs, residual decreasing with order: {monotone}"),
    ))
}

fn chi_stream(chi: &DirichletCharacter, t: f64) -> CoefficientStream {
    let chi = chi.clone();
    CoefficientStream::from_fn(StreamKind::A, move |n| {
        chi.value(n) * Complex64::from_polar(1.0, -t * (n as f64).ln())
    })
}

fn classifier() -> Result<Outcome, Error> {
    let mut recovered = 0;
    let mut total = 0;
    for q in 1..=20 {
        for chi in DirichletCharacter::primitive_characters(q)? {
            total += 1;
            let a = chi_stream(&chi, 0.0);
            let Some(period) = detect_periodicity(&a, 400, 20)? else { continue };
            if let Some(m) = match_character(&a, period, 400)? {
                if m.modulus == q && m.index == chi.index() && m.t == 0.0 {
                    recovered += 1;
                }
            }
        }
    }
    let chi = DirichletCharacter::new(5, 1)?;
    let shifted = match_character(&chi_stream(&chi, 0.5), 5, 500)?;
    let t_ok = shifted.as_ref().is_some_and(|m| m.index == 1 && (m.t - 0.5).abs() < 1e-6);
    let gates = [(163, 82), (3, 2), (4, 3)].iter().all(|&(n, k)| vanishing_order_gate(n, k).holds);
    let gate_ok = degree_gate(1.0).is_ok();
    Ok(check(
        recovered == total && t_ok && gates && gate_ok,
        format!(
            "{recovered}/{total} primitive characters, shifted t = {}, gates (163,82) (3,2) (4,3): {gates}",
            shifted.map_or("none".to_string(), |m| format!("{:.9}", m.t))
        ),
    ))
}

fn negative_controls() -> Result<Outcome, Error> {
    let tf = make_bump(1.0, 0.5, 0.5)?;
    let zeta = build_zeta_with_zeros(None)?;
    let zeros = zeta.zeros();
    let no_poles: Vec<_> = zeros.entries().iter().filter(|e| e.z.re != 0.0).copied().collect();
    let stripped = zeta.clone().with_zeros(ZeroData::new(no_poles, zeros.t_max(), zeros.mirrored())?);
    let shift = zero_side(&stripped, &tf)?.value - zero_side(&zeta, &tf)?.value;
    let expect = 4.0 * tf.integrate_against(|x| c((0.5 * x).cosh(), 0.0), 1e-14)?.value.re;
    let dev = (shift - expect).abs();

    let non_primitive = matches!(build_dirichlet(6, 1), Err(Error::NonPrimitive { .. }));

    let status = Command::new(env!("CARGO_BIN_EXE_ldata"))
        .arg("verify")
        .arg(spec_path("zeta.spec"))
        .args(["--tol", "1e-30"])
        .output()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?
        .status;
    let exit = status.code();
    Ok(check(
        dev < 1e-8 && non_primitive && exit == Some(1),
        format!("pole shift error {dev:.1e}, non-primitive rejected: {non_primitive}, exit code {exit:?}"),
    ))
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let criteria: Vec<(&str, Criterion)> = vec![
        ("zeta explicit formula", Box::new(|_| zeta_explicit_formula())),
        ("linearity", Box::new(linearity)),
        ("degree", Box::new(|_| degrees())),
        ("conductor", Box::new(|_| conductor())),
        ("coefficient algebra", Box::new(coefficient_algebra)),
        ("twists", Box::new(twists)),
        ("gamma asymptotics", Box::new(|_| asymptotics())),
        ("classifier", Box::new(|_| classifier())),
        ("negative controls", Box::new(|_| negative_controls())),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let (verdict, detail) = match run(&mut rng) {
            Ok(Ok(d)) => ("PASS", d),
            Ok(Err(d)) => ("FAIL", d),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if verdict == "FAIL" {
            failures += 1;
        }
        println!("criterion {}: {verdict} {name}: {detail}", i + 1);
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
