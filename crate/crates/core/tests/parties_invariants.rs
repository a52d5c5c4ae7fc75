use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use telerot_core::parties::{
    encoded_receiver_leakage, full_cooperation, non_cooperation_average, receiver_view_gap,
    run_secret_sharing, validate_transcript, BobAction, MessageFamily,
};
use telerot_core::{BlochState, PartyId, Payload, ScenarioConfig};

fn random_config(rng: &mut ChaCha8Rng, n: usize) -> ScenarioConfig {
    let s = BlochState::new(PI * rng.random::<f64>(), 2.0 * PI * rng.random::<f64>()).unwrap();
    let (a, b) = s.amplitudes();
    let thetas = (0..n).map(|_| PI * rng.random::<f64>()).collect();
    ScenarioConfig::new(a, b, thetas).unwrap()
}

#[test]
fn full_cooperation_always_reconstructs() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for n in 1..=4 {
        for k in 0..25 {
            let cfg = random_config(&mut rng, n);
            let bob = k % n;
            let t = run_secret_sharing(&cfg, bob, &full_cooperation(n), rng.random()).unwrap();
            assert!((t.fidelity - 1.0).abs() < 1e-10, "n={n} fidelity {}", t.fidelity);
            assert!(validate_transcript(&t).is_empty());
            assert!(matches!(t.bob_action, BobAction::Recovered { .. }));
        }
    }
}

#[test]
fn one_withholder_spoils_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    let template = random_config(&mut rng, 3);
    let stats = non_cooperation_average(&template, 0, 2, 10_000, 61, MessageFamily::Uniform).unwrap();
    assert!(stats.mean + 3.0 * stats.std_error < 1.0, "{stats:?}");
    assert!(stats.within_sigma(0.625, 3.0), "{stats:?}");
}

#[test]
fn withholding_families_hit_their_averages() {
    let template = ScenarioConfig::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), vec![0.3, 0.9]).unwrap();
    let real = non_cooperation_average(&template, 0, 1, 20_000, 67, MessageFamily::Real).unwrap();
    assert!(real.within_sigma(0.5, 3.0), "{real:?}");
    let fixed_points =
        non_cooperation_average(&template, 1, 0, 2_000, 71, MessageFamily::SigmaYEigenstates).unwrap();
    assert!((fixed_points.mean - 1.0).abs() < 1e-10);
}

#[test]
fn no_message_reveals_the_angle() {
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    for n in 1..=4 {
        let cfg = random_config(&mut rng, n);
        let bob = n - 1;
        let t = run_secret_sharing(&cfg, bob, &full_cooperation(n), 5).unwrap();
        assert!(!t.interceptor_can_compute_phi());
        assert!(t.messages.iter().all(|m| m.from != PartyId::Receiver(bob) && m.from != PartyId::Bob(bob)));
        assert!(t.messages.iter().all(|m| m.to == PartyId::Bob(bob)));
        let disclosures = t
            .messages
            .iter()
            .filter(|m| matches!(m.payload, Payload::AngleDisclosure { .. } | Payload::OutcomeDisclosure { .. }))
            .count();
        assert_eq!(disclosures, 2 * (n - 1));
    }
}

#[test]
fn receivers_learn_nothing_before_transfer() {
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    for n in 1..=4 {
        for _ in 0..10 {
            let cfg = random_config(&mut rng, n);
            assert!(encoded_receiver_leakage(&cfg).unwrap() <= 1e-10);
            let other = BlochState::new(PI * rng.random::<f64>(), 2.0 * PI * rng.random::<f64>()).unwrap();
            let (a, b) = other.amplitudes();
            assert!(receiver_view_gap(&cfg, a, b, rng.random()).unwrap() <= 1e-10);
        }
    }
}

#[test]
fn same_seed_same_transcript() {
    let mut rng = ChaCha8Rng::seed_from_u64(83);
    let cfg = random_config(&mut rng, 3);
    let a = run_secret_sharing(&cfg, 1, &full_cooperation(3), 99).unwrap();
    let b = run_secret_sharing(&cfg, 1, &full_cooperation(3), 99).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}
