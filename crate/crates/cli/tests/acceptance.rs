//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p unruh-cli --test acceptance`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use unruh_entanglement::bosonic::{evaluate_bosonic, TruncationPolicy};
use unruh_entanglement::fermionic::{
    fermionic_curve, fermionic_negativity_checked, fermionic_negativity_pair, FermionMethod, FermionScenario,
};
use unruh_entanglement::wavepacket::{
    alternate_packets, closed_form_g, f_log_gaussian, g_from_f, massive_g_from_f, massive_round_trip_error,
    parseval_residual, peaking_report, rapidity_gaussian_on, round_trip_error, AlternateKind, BogoliubovKernel,
    LogGaussianParams, MassiveKernel,
};
use unruh_entanglement::UnruhWeights;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn weights(q: f64) -> UnruhWeights {
    UnruhWeights::from_magnitude(q).unwrap()
}

fn fermion(r: f64, w: UnruhWeights) -> (f64, f64) {
    let n = fermionic_negativity_checked(&FermionScenario::new(r, w).unwrap()).unwrap();
    (n.n_ar, n.n_aar)
}

fn linspace(a: f64, b: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| {
            if i + 1 == points {
                b
            } else {
                a + (b - a) * i as f64 / (points - 1) as f64
            }
        })
        .collect()
}

fn fermion_exact_values() -> Outcome {
    let (ar0, _) = fermion(0.0, UnruhWeights::right());
    let (ar, aar) = fermion(FRAC_PI_4, UnruhWeights::right());
    let err = (ar0 - 0.5).abs().max((ar - 0.25).abs()).max((aar - 0.25).abs());
    check(
        err < 1e-9,
        format!("N_AR(0)={ar0:.12} N_AR(pi/4)={ar:.12} N_AAR(pi/4)={aar:.12} max err {err:.1e}"),
    )
}

fn fermion_conservation() -> Outcome {
    let worst = linspace(0.0, FRAC_PI_4, 200)
        .into_iter()
        .map(|r| {
            let (ar, aar) = fermion(r, UnruhWeights::right());
            (ar + aar - 0.5).abs()
        })
        .fold(0.0, f64::max);
    check(
        worst < 1e-9,
        format!("max |N_AR+N_AAR-0.5| = {worst:.1e} over 200 points"),
    )
}

fn block_full_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in linspace(0.0, FRAC_PI_4, 20) {
        for q in linspace(0.0, 1.0, 20) {
            let sc = FermionScenario::new(r, weights(q)).unwrap();
            let (b_ar, b_aar) = fermionic_negativity_pair(&sc, FermionMethod::Blocks).unwrap();
            let (f_ar, f_aar) = fermionic_negativity_pair(&sc, FermionMethod::Full).unwrap();
            worst = worst.max((b_ar - f_ar).abs()).max((b_aar - f_aar).abs());
        }
    }
    check(
        worst < 1e-10,
        format!("max block/full deviation {worst:.1e} on 20x20 grid"),
    )
}

fn fermion_shape() -> Outcome {
    let grid = linspace(0.0, FRAC_PI_4, 201);
    let mut notes = Vec::new();
    let mut ok = true;
    for q in [0.9, 0.8, 0.7] {
        let curve = fermionic_curve(q, &grid).unwrap();
        let (i_min, _) =
            curve.rows.iter().enumerate().fold(
                (0, f64::MAX),
                |best, (i, row)| if row.n_aar < best.1 { (i, row.n_aar) } else { best },
            );
        let interior = i_min > 0 && i_min + 1 < grid.len();
        ok &= interior;
        let place = if interior { "interior" } else { "endpoint" };
        notes.push(format!("q={q}: {place} min at r={:.4}", grid[i_min]));
    }
    let balanced = fermionic_curve(FRAC_1_SQRT_2, &grid).unwrap();
    let gap = balanced
        .rows
        .iter()
        .map(|row| (row.n_ar - row.n_aar).abs())
        .fold(0.0, f64::max);
    ok &= gap < 1e-10;
    notes.push(format!("q=1/sqrt2 gap {gap:.1e}"));
    check(ok, notes.join(", "))
}

fn boson_anchor() -> Outcome {
    let policy = TruncationPolicy::default();
    let mut worst: f64 = 0.0;
    for q in [1.0, 0.9, 0.8, 0.7] {
        let ql2: f64 = 1.0 - q * q;
        let want = ((ql2 * ql2 + 4.0 * q * q).sqrt() - ql2) / 4.0;
        let got = evaluate_bosonic(0.0, &weights(q), &policy).unwrap().n_ar;
        worst = worst.max((got - want).abs());
    }
    check(worst < 1e-8, format!("max deviation from 2x2 block value {worst:.1e}"))
}

fn boson_decay_and_ordering() -> Outcome {
    let policy = TruncationPolicy::default();
    let mut values = Vec::new();
    for r in linspace(0.0, 3.0, 31) {
        let res = evaluate_bosonic(r, &UnruhWeights::right(), &policy).unwrap();
        if !res.report.converged {
            return Err(format!("q_R=1 did not converge at r={r}"));
        }
        values.push(res.n_ar);
    }
    let monotone = values.windows(2).all(|w| w[1] < w[0]);
    let end = *values.last().unwrap();
    let at_half: Vec<f64> = [1.0, 0.9, 0.8, 0.7]
        .iter()
        .map(|&q| evaluate_bosonic(0.5, &weights(q), &policy).unwrap().n_ar)
        .collect();
    let ordered = at_half.windows(2).all(|w| w[0] > w[1]);
    check(
        monotone && end < 0.01 && ordered,
        format!(
            "monotone={monotone}, N_AR(3)={end:.3e}, N_AR(0.5) over q=1..0.7: {}",
            at_half
                .iter()
                .map(|v| format!("{v:.4}"))
                .collect::<Vec<_>>()
                .join(" > ")
        ),
    )
}

fn boson_truncation() -> Outcome {
    let policy = TruncationPolicy::default();
    let (mut worst_delta, mut worst_tail, mut points): (f64, f64, usize) = (0.0, 0.0, 0);
    for q in [1.0, 0.9, 0.8, 0.7] {
        for r in linspace(0.0, 1.5, 31) {
            let res = evaluate_bosonic(r, &weights(q), &policy).unwrap();
            if !res.report.converged {
                return Err(format!("q={q}, r={r} was not accepted"));
            }
            worst_delta = worst_delta.max(res.report.delta);
            worst_tail = worst_tail.max(res.report.vacuum_tail);
            points += 1;
        }
    }
    check(
        worst_delta < 1e-6 && worst_tail < 1e-8,
        format!("{points} points, max |dN| {worst_delta:.1e}, max tail {worst_tail:.1e}"),
    )
}

fn phase_invariance() -> Outcome {
    let policy = TruncationPolicy::default();
    let mut worst: f64 = 0.0;
    for q in [0.9, 0.7, 0.4] {
        let base = weights(q);
        let b0 = evaluate_bosonic(0.6, &base, &policy).unwrap();
        let f0 = fermion(0.5, base);
        for phi in [PI / 7.0, PI / 3.0, 1.0] {
            let w = base.with_phase(phi);
            let b = evaluate_bosonic(0.6, &w, &policy).unwrap();
            let f = fermion(0.5, w);
            worst = worst
                .max((b.n_ar - b0.n_ar).abs())
                .max((b.n_aar - b0.n_aar).abs())
                .max((f.0 - f0.0).abs())
                .max((f.1 - f0.1).abs());
        }
    }
    check(worst < 1e-10, format!("max change under q_R phase {worst:.1e}"))
}

fn wavepacket_oracle() -> Outcome {
    let p = LogGaussianParams::new(1.0, 5.0, 1.0).unwrap();
    let kernel = BogoliubovKernel::default();
    let f = f_log_gaussian(p).unwrap();
    let pair = g_from_f(&f, &kernel).unwrap();
    let pointwise = pair
        .max_distance(&closed_form_g(&p, &kernel, f.grid()).unwrap())
        .unwrap();
    let parseval = parseval_residual(&f, &pair);
    let round_trip = round_trip_error(&f, &kernel).unwrap();
    let product = peaking_report(&f, &kernel, 1e-2).unwrap().uncertainty_product;
    let ok = pointwise < 1e-6
        && parseval < 1e-6
        && round_trip < 1e-6
        && product >= 0.5 - 1e-3
        && (product - 0.5).abs() < 0.01;
    check(
        ok,
        format!(
            "closed form {pointwise:.1e}, Parseval {parseval:.1e}, round trip {round_trip:.1e}, product {product:.6}"
        ),
    )
}

fn alternate_and_massive() -> Outcome {
    let p = LogGaussianParams::new(1.0, 5.0, 1.0).unwrap();
    let kernel = BogoliubovKernel::default();
    let mut notes = Vec::new();
    let mut ok = true;
    for kind in [AlternateKind::Gamma, AlternateKind::Bessel] {
        let f = alternate_packets(kind, p).unwrap();
        let norm = (f.quadrature_norm() - 1.0).abs();
        let parseval = parseval_residual(&f, &g_from_f(&f, &kernel).unwrap());
        let round_trip = round_trip_error(&f, &kernel).unwrap();
        ok &= norm < 1e-8 && parseval < 1e-6 && round_trip < 1e-6;
        notes.push(format!(
            "{kind:?}: norm {norm:.1e} Parseval {parseval:.1e} round trip {round_trip:.1e}"
        ));
    }
    let massless = f_log_gaussian(p).unwrap();
    let g0 = g_from_f(&massless, &kernel).unwrap();
    let massive = rapidity_gaussian_on(p, &MassiveKernel::default(), massless.grid()).unwrap();
    let gap = massive_g_from_f(&massive).unwrap().max_distance(&g0).unwrap();
    let massive_rt = massive_round_trip_error(&massive).unwrap();
    ok &= gap < 1e-6 && massive_rt < 1e-6;
    notes.push(format!(
        "massive vs massless {gap:.1e}, massive round trip {massive_rt:.1e}"
    ));
    check(ok, notes.join("; "))
}

fn run_fermion_sweep(out: &Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_unruh"))
        .args([
            "fermion", "--q", "1", "--r-min", "0", "--r-max", "pi/4", "--steps", "200", "--format", "csv", "--out",
        ])
        .arg(out)
        .status()
        .map_err(|e| e.to_string())?;
    if status.success() {
        Ok(())
    } else {
        Err(format!("unruh exited with {status}"))
    }
}

fn cli_reproducibility() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    run_fermion_sweep(&a)?;
    run_fermion_sweep(&b)?;
    let bytes_a = std::fs::read(&a).map_err(|e| e.to_string())?;
    let identical = bytes_a == std::fs::read(&b).map_err(|e| e.to_string())?;

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(bytes_a.as_slice());
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or(format!("missing column {name}"))
    };
    let (ci_r, ci_ar, ci_aar) = (col("r")?, col("N_AR")?, col("N_AAR")?);
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let num = |i: usize| rec[i].parse::<f64>().map_err(|e| e.to_string());
        rows.push((num(ci_r)?, num(ci_ar)?, num(ci_aar)?));
    }
    if rows.len() != 200 {
        return Err(format!("expected 200 rows, read {}", rows.len()));
    }
    let first = rows[0];
    let last = rows[199];
    let exact = (first.1 - 0.5)
        .abs()
        .max((last.1 - 0.25).abs())
        .max((last.2 - 0.25).abs());
    let conservation = rows
        .iter()
        .map(|&(_, ar, aar)| (ar + aar - 0.5).abs())
        .fold(0.0, f64::max);
    check(
        identical && first.0 == 0.0 && (last.0 - FRAC_PI_4).abs() < 1e-11 && exact < 1e-9 && conservation < 1e-9,
        format!("byte-identical={identical}, exact values err {exact:.1e}, conservation {conservation:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("fermionic exact values", Duration::from_secs(1), fermion_exact_values),
        (
            "fermionic conservation law",
            Duration::from_secs(1),
            fermion_conservation,
        ),
        (
            "block/full partial transpose equivalence",
            Duration::from_secs(1),
            block_full_equivalence,
        ),
        (
            "fermionic minimum and balanced weights",
            Duration::from_secs(1),
            fermion_shape,
        ),
        ("bosonic r=0 anchor", Duration::from_secs(1), boson_anchor),
        (
            "bosonic decay and ordering",
            Duration::from_secs(30),
            boson_decay_and_ordering,
        ),
        (
            "bosonic truncation convergence",
            Duration::from_secs(30),
            boson_truncation,
        ),
        ("phase invariance", Duration::from_secs(5), phase_invariance),
        (
            "log-Gaussian wave-packet oracle",
            Duration::from_secs(5),
            wavepacket_oracle,
        ),
        (
            "alternate and massive packets",
            Duration::from_secs(10),
            alternate_and_massive,
        ),
        ("CLI reproducibility", Duration::from_secs(10), cli_reproducibility),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget of {budget:?}")),
            Err(d) => ("FAIL", d),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {:>2} {status} {name}: {detail} ({:.2?})", i + 1, elapsed);
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
