//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

#[path = "../../core/tests/common/mod.rs"]
mod common;
mod support;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_8, PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use telerot_core::analysis::{
    average_fidelity, average_fidelity_quadrature, protocol_phi_samples, receiver_leakage,
    sigma_y_eigenstate_invariance,
};
use telerot_core::parties::{full_cooperation, non_cooperation_average, run_secret_sharing, MessageFamily};
use telerot_core::protocol::{self, enumerate_branches, recovery_plan, two_party_run, Outcomes};
use telerot_core::{
    AngleDistributionSpec, AverageSpec, BlochState, Complex64, FidelityStats, ScenarioConfig, StateVector,
    Unitary2x2,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_message(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    let s = BlochState::new((1.0 - 2.0 * rng.random::<f64>()).acos(), TAU * rng.random::<f64>()).unwrap();
    s.amplitudes()
}

/// 50 angle vectors × 10 messages for each n in 1..=4.
fn sweep() -> Vec<(Vec<f64>, Vec<ScenarioConfig>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::new();
    for n in 1..=4 {
        for _ in 0..50 {
            let thetas: Vec<f64> = (0..n).map(|_| PI * rng.random::<f64>()).collect();
            let configs = (0..10)
                .map(|_| {
                    let (a, b) = random_message(&mut rng);
                    ScenarioConfig::new(a, b, thetas.clone()).unwrap()
                })
                .collect();
            out.push((thetas, configs));
        }
    }
    out
}

fn recovery_identity() -> Outcome {
    let mut worst = 0.0_f64;
    let mut branches = 0;
    for (_, configs) in sweep() {
        for cfg in configs {
            let message = cfg.message();
            for b in enumerate_branches(&cfg).map_err(|e| e.to_string())? {
                let fixed = recovery_plan(b.phi, b.alice_outcome).apply(&b.final_state).unwrap();
                worst = worst.max((fixed.fidelity_up_to_phase(&message).unwrap() - 1.0).abs());
                branches += 1;
            }
        }
    }
    ensure(worst <= 1e-10, format!("{branches} branches, worst |F-1| = {worst:.2e}"))
}

fn phi_vs_tensor_algebra() -> Outcome {
    let mut worst = 0.0_f64;
    let mut checked = 0;
    for (thetas, configs) in sweep() {
        let oracle: std::collections::HashMap<Vec<u8>, f64> = enumerate_branches(&configs[0])
            .unwrap()
            .iter()
            .map(|b| (b.receiver_outcomes.clone(), common::oracle_phi(&thetas, &b.receiver_outcomes)))
            .collect();
        for cfg in &configs {
            for b in enumerate_branches(cfg).unwrap() {
                let phi = protocol::compute_phi(&thetas, &b.receiver_outcomes).unwrap();
                worst = worst.max(common::angle_gap(phi, oracle[&b.receiver_outcomes]));
                worst = worst.max(common::angle_gap(b.phi, phi));
                checked += 1;
            }
        }
    }
    ensure(worst <= 1e-9, format!("{checked} branches, worst angle gap = {worst:.2e}"))
}

fn golden_encoded_state() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    for n in 1..=3 {
        let (alpha, beta) = random_message(&mut rng);
        let cfg = ScenarioConfig::new(alpha, beta, vec![0.7; n]).unwrap();
        let got = protocol::alice_encode(&protocol::prepare(&cfg).unwrap()).unwrap();
        let ones = (1 << n) - 1;
        let mut want = vec![Complex64::new(0.0, 0.0); 1 << (n + 2)];
        want[0] = alpha * FRAC_1_SQRT_2;
        want[0b11 << n] = beta * FRAC_1_SQRT_2;
        want[(0b01 << n) | ones] = alpha * FRAC_1_SQRT_2;
        want[(0b10 << n) | ones] = -beta * FRAC_1_SQRT_2;
        let want = StateVector::from_amplitudes(want).unwrap();
        worst = worst.max((got.fidelity_up_to_phase(&want).unwrap() - 1.0).abs());
    }
    ensure(worst <= 1e-12, format!("n = 1..3, worst |overlap-1| = {worst:.2e}"))
}

fn five_eighths() -> Outcome {
    let spec = AverageSpec::default();
    let mc = average_fidelity(&spec, 1_000_000, 1).map_err(|e| e.to_string())?;
    let exact = average_fidelity_quadrature(&spec).unwrap();
    ensure(
        mc.within_sigma(0.625, 3.0) && (exact - 0.625).abs() <= 1e-9,
        format!("MC {:.6} ± {:.1e}, quadrature {exact}", mc.mean, mc.std_error),
    )
}

fn real_one_half() -> Outcome {
    let mc = average_fidelity(&AverageSpec::real_messages(), 1_000_000, 2).map_err(|e| e.to_string())?;
    ensure(mc.within_sigma(0.5, 3.0), format!("MC {:.6} ± {:.1e}", mc.mean, mc.std_error))
}

fn hiding() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0_f64;
    for n in 1..=4 {
        for _ in 0..100 {
            let (a, b) = random_message(&mut rng);
            let cfg = ScenarioConfig::new(a, b, vec![0.0; n]).unwrap();
            worst = worst.max(receiver_leakage(&cfg).unwrap());
        }
    }
    ensure(worst <= 1e-10, format!("400 messages, worst trace distance = {worst:.2e}"))
}

fn sigma_y_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let worst = (0..100)
        .map(|_| (sigma_y_eigenstate_invariance(TAU * rng.random::<f64>() - PI) - 1.0).abs())
        .fold(0.0, f64::max);
    ensure(worst <= 1e-12, format!("100 angles, worst |F-1| = {worst:.2e}"))
}

fn two_party() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (alpha, beta) = random_message(&mut rng);
    let message = StateVector::qubit(alpha, beta).unwrap();
    let mut worst = 0.0_f64;
    let mut worst_z = 0.0_f64;
    for theta in [FRAC_PI_8, FRAC_PI_4, FRAC_PI_3] {
        let target = |s: f64| message.apply_single(0, &Unitary2x2::rotation(s * theta)).unwrap();
        let (plus, minus) = (target(1.0), target(-1.0));
        for r in 0..2u8 {
            for a in 0..2u8 {
                let res = two_party_run(alpha, beta, theta, Outcomes::Forced { receivers: &[r], alice: a })
                    .map_err(|e| e.to_string())?;
                let want = if res.sign == 1 { &plus } else { &minus };
                worst = worst.max((res.state.fidelity_up_to_phase(want).unwrap() - 1.0).abs());
            }
        }
        let runs = 10_000;
        let hits = (0..runs)
            .filter(|_| two_party_run(alpha, beta, theta, Outcomes::Sampled(&mut rng)).unwrap().sign == 1)
            .count();
        let z = (hits as f64 / runs as f64 - 0.5) / (0.25 / runs as f64).sqrt();
        worst_z = worst_z.max(z.abs());
    }
    ensure(
        worst <= 1e-10 && worst_z <= 3.0,
        format!("worst |F-1| = {worst:.2e}, worst sign-frequency z = {worst_z:.2}"),
    )
}

fn branch_probabilities() -> Outcome {
    let (mut sum_err, mut dep_err, mut alice_err) = (0.0_f64, 0.0_f64, 0.0_f64);
    for (_, configs) in sweep() {
        let reference = enumerate_branches(&configs[0]).unwrap();
        for cfg in &configs {
            let bs = enumerate_branches(cfg).unwrap();
            sum_err = sum_err.max((bs.iter().map(|b| b.probability).sum::<f64>() - 1.0).abs());
            let ones: f64 = bs.iter().filter(|b| b.alice_outcome == 1).map(|b| b.probability).sum();
            alice_err = alice_err.max((ones - 0.5).abs());
            if bs.len() != reference.len() {
                return Err("branch set depends on the message".into());
            }
            for (x, y) in bs.iter().zip(&reference) {
                dep_err = dep_err.max((x.probability - y.probability).abs());
            }
        }
    }
    ensure(
        sum_err <= 1e-10 && dep_err <= 1e-12 && alice_err <= 1e-12,
        format!("sum {sum_err:.1e}, message dependence {dep_err:.1e}, Alice bias {alice_err:.1e}"),
    )
}

fn phi_symmetry() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 1..=3 {
        let phis = protocol_phi_samples(&AngleDistributionSpec::uniform(n).unwrap(), 100_000, 10 + n as u64)
            .map_err(|e| e.to_string())?;
        let cos2: Vec<f64> = phis.iter().map(|p| (2.0 * p).cos()).collect();
        let s = FidelityStats::from_samples(&cos2).unwrap();
        ok &= s.within_sigma(0.0, 3.0);
        parts.push(format!("n={n}: {:+.4} ± {:.1e}", s.mean, s.std_error));
    }
    ensure(ok, parts.join(", "))
}

fn secret_sharing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0_f64;
    for n in 1..=4 {
        for k in 0..10 {
            let (a, b) = random_message(&mut rng);
            let thetas = (0..n).map(|_| PI * rng.random::<f64>()).collect();
            let cfg = ScenarioConfig::new(a, b, thetas).unwrap();
            let t = run_secret_sharing(&cfg, k % n, &full_cooperation(n), rng.random()).unwrap();
            worst = worst.max((t.fidelity - 1.0).abs());
        }
    }
    let template = ScenarioConfig::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), vec![0.4, 1.3, 2.2])
        .unwrap();
    let trials = 100_000;
    let mut ok = worst <= 1e-10;
    let mut parts = vec![format!("full cooperation |F-1| ≤ {worst:.1e}")];
    for (family, want, seed) in [
        (MessageFamily::Real, 0.5, 21),
        (MessageFamily::Uniform, 0.625, 22),
        (MessageFamily::SigmaYEigenstates, 1.0, 23),
    ] {
        let s = non_cooperation_average(&template, 0, 2, trials, seed, family).map_err(|e| e.to_string())?;
        // σ_y eigenstates give F = 1 on every trial, so the spread is zero.
        ok &= (s.mean - want).abs() <= (3.0 * s.std_error).max(1e-10);
        parts.push(format!("{family:?} {:.4} ± {:.1e}", s.mean, s.std_error));
    }
    ensure(ok, parts.join(", "))
}

fn cli_determinism() -> Outcome {
    let mut notes = Vec::new();
    for case in support::GOLDEN_CASES {
        let first = support::run_cli(case.args)?;
        let second = support::run_cli(case.args)?;
        if first != second {
            return Err(format!("{}: repeated runs differ", case.name));
        }
        let golden = std::fs::read_to_string(support::golden_path(case.name)).map_err(|e| e.to_string())?;
        if first != golden {
            return Err(format!("{}: output differs from golden file", case.name));
        }
        notes.push(case.name);
    }
    Ok(format!("byte-identical and matching goldens: {}", notes.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("recovery identity on every branch", recovery_identity),
        ("effective angle vs tensor algebra", phi_vs_tensor_algebra),
        ("encoded state vs hand-built superposition", golden_encoded_state),
        ("average fidelity 5/8", five_eighths),
        ("real-message average 1/2", real_one_half),
        ("receivers learn nothing", hiding),
        ("sigma_y eigenstates unaffected", sigma_y_invariance),
        ("two-party rotation and sign balance", two_party),
        ("branch probability properties", branch_probabilities),
        ("effective angle symmetry", phi_symmetry),
        ("secret-sharing scenarios", secret_sharing),
        ("CLI determinism and goldens", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(d) => println!("PASS [{:>2}] {name}: {d} ({secs:.1}s)", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {d} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
