use mentorq::bases::gates;
use mentorq::channels::combined_tau;
use mentorq::noise::*;
use mentorq::protocol::{BranchSelector, ProtocolInputs};
use mentorq::qcore::{kron, DensityMatrix, C64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn s(v: f64) -> NoiseStrength {
    NoiseStrength::new(v).unwrap()
}

/// ε(|τ⟩⟨τ|) as an explicit sum over every product of five Kraus
/// operators, each embedded as a full 512×512 matrix.
fn global_kraus_sum(kind: NoiseKind, p: f64) -> DensityMatrix {
    let ops = kraus_set(kind, s(p)).ops().to_vec();
    let tau = combined_tau().unwrap();
    let id16: Vec<C64> = (0..256).map(|i| C64::new(if i % 17 == 0 { 1.0 } else { 0.0 }, 0.0)).collect();
    let n = ops.len();
    let mut acc = vec![C64::new(0.0, 0.0); 512 * 512];
    for combo in 0..n.pow(5) {
        let mut e = id16.clone();
        let mut dim = 16;
        let mut rest = combo;
        let mut digits = [0usize; 5];
        for d in digits.iter_mut().rev() {
            *d = rest % n;
            rest /= n;
        }
        for d in digits {
            e = kron(&e, dim, &ops[d], 2);
            dim *= 2;
        }
        let v: Vec<C64> = (0..512)
            .map(|r| (0..512).map(|col| e[r * 512 + col] * tau.amp(col)).sum())
            .collect();
        for r in 0..512 {
            if v[r].norm_sqr() == 0.0 {
                continue;
            }
            for col in 0..512 {
                acc[r * 512 + col] += v[r] * v[col].conj();
            }
        }
    }
    DensityMatrix::new(9, acc).unwrap()
}

fn min_eigenvalue(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let m = DMatrix::from_fn(d, d, |r, c| rho.at(r, c));
    m.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

#[test]
fn sequential_channel_equals_global_kraus_sum() {
    for kind in NoiseKind::ALL {
        for p in [0.15, 0.5, 0.85] {
            let seq = noisy_channel(kind, s(p)).unwrap();
            let global = global_kraus_sum(kind, p);
            let dev = seq.max_abs_diff(&global).unwrap();
            assert!(dev < 1e-10, "{kind} p={p}: {dev:e}");
        }
    }
}

#[test]
fn channel_limits() {
    let tau = DensityMatrix::from_pure(&combined_tau().unwrap());
    for kind in NoiseKind::ALL {
        let rho = noisy_channel(kind, s(0.0)).unwrap();
        assert!(rho.max_abs_diff(&tau).unwrap() < 1e-15, "{kind}");
        let noisy = noisy_channel(kind, s(0.6)).unwrap();
        assert!((noisy.trace() - 1.0).abs() < 1e-10);
        assert!(noisy.hermiticity_deviation() < 1e-10);
    }
    let mut flipped = combined_tau().unwrap();
    for q in NOISY_POSITIONS {
        flipped = flipped.apply_unitary(&gates::x(), &[q]).unwrap();
    }
    let rho = noisy_channel(NoiseKind::BitFlip, s(1.0)).unwrap();
    assert!(rho.max_abs_diff(&DensityMatrix::from_pure(&flipped)).unwrap() < 1e-12);
    assert!((rho.purity() - 1.0).abs() < 1e-12);
}

#[test]
fn noisy_states_are_positive() {
    let rho = noisy_channel(NoiseKind::Depolarizing, s(0.4)).unwrap();
    assert!(min_eigenvalue(&rho) > -1e-12);
    let inputs = ProtocolInputs::from_weights(0.3, 0.6, 1.1).unwrap();
    for kind in NoiseKind::ALL {
        let rho = noisy_channel(kind, s(0.7)).unwrap();
        for idx in (0..256).step_by(17) {
            let sel = BranchSelector::from_index(idx).unwrap();
            let (_, out) = branch_output(&rho, &inputs, &sel).unwrap();
            assert!(min_eigenvalue(&out) > -1e-12, "{kind} {sel}");
            assert!((out.trace() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn bit_flip_unitary_limit_gives_pure_outputs() {
    let inputs = ProtocolInputs::from_weights(0.8, 0.1, 0.0).unwrap();
    let rho = noisy_channel(NoiseKind::BitFlip, s(1.0)).unwrap();
    for idx in [0, 77, 200] {
        let (_, out) = branch_output(&rho, &inputs, &BranchSelector::from_index(idx).unwrap()).unwrap();
        assert!((out.purity() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn zero_strength_is_unity_for_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let inputs = ProtocolInputs::random(&mut rng);
        for kind in NoiseKind::ALL {
            let f = average_fidelity(kind, s(0.0), &inputs).unwrap();
            assert!((f - 1.0).abs() < 1e-9, "{kind}: {f}");
        }
    }
}

#[test]
fn bit_flip_is_symmetric_and_unity_at_full_strength() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let inputs = ProtocolInputs::random(&mut rng);
    for p in [0.1, 0.3, 0.45] {
        let lo = average_fidelity(NoiseKind::BitFlip, s(p), &inputs).unwrap();
        let hi = average_fidelity(NoiseKind::BitFlip, s(1.0 - p), &inputs).unwrap();
        assert!((lo - hi).abs() < 1e-9, "{p}: {lo} vs {hi}");
    }
    let f = average_fidelity(NoiseKind::BitFlip, s(1.0), &inputs).unwrap();
    assert!((f - 1.0).abs() < 1e-9);
}

#[test]
fn branch_probabilities_stay_uniform_under_local_noise() {
    let inputs = ProtocolInputs::from_weights(0.25, 0.65, 0.4).unwrap();
    for kind in NoiseKind::ALL {
        let avg = fidelity_averages(kind, s(0.55), &inputs).unwrap();
        assert!((avg.min_probability - 1.0 / 256.0).abs() < 1e-12, "{kind}");
        assert!((avg.max_probability - 1.0 / 256.0).abs() < 1e-12, "{kind}");
        assert!((avg.weighted - avg.unweighted).abs() < 1e-12);
    }
}

#[test]
fn payload_phase_does_not_matter_except_for_bit_flip() {
    for kind in [NoiseKind::PhaseFlip, NoiseKind::PhaseDamping, NoiseKind::Depolarizing] {
        let rho = noisy_channel(kind, s(0.35)).unwrap();
        let base = averages_for(&rho, &ProtocolInputs::from_weights(0.3, 0.6, 0.0).unwrap()).unwrap();
        for phase in [0.7, 2.0, -1.4] {
            let other = averages_for(&rho, &ProtocolInputs::from_weights(0.3, 0.6, phase).unwrap()).unwrap();
            assert!((base.unweighted - other.unweighted).abs() < 1e-9, "{kind} φ={phase}");
        }
    }
    // A global phase on the payload is physically irrelevant.
    let rho = noisy_channel(NoiseKind::PhaseFlip, s(0.35)).unwrap();
    let g = C64::from_polar(1.0, 0.9);
    let a = ProtocolInputs::new(C64::new(0.6, 0.0), C64::new(0.8, 0.0), 0.6, 0.8).unwrap();
    let b = ProtocolInputs::new(g * 0.6, g * 0.8, 0.6, 0.8).unwrap();
    let fa = averages_for(&rho, &a).unwrap().unweighted;
    let fb = averages_for(&rho, &b).unwrap().unweighted;
    assert!((fa - fb).abs() < 1e-12);
}

#[test]
fn bit_flip_depends_on_the_payload_phase() {
    let rho = noisy_channel(NoiseKind::BitFlip, s(0.3)).unwrap();
    for phase in [0.0, 0.7, std::f64::consts::FRAC_PI_2, 2.5] {
        let inputs = ProtocolInputs::from_weights(0.4, 0.3, phase).unwrap();
        let numeric = averages_for(&rho, &inputs).unwrap().unweighted;
        let expected = bit_flip_with_phase(0.3, 0.4, 0.3, phase).unwrap();
        assert!((numeric - expected).abs() < 1e-9, "φ={phase}: {numeric} vs {expected}");
    }
    let real = closed_form(NoiseKind::BitFlip, 0.3, 0.4, 0.3).unwrap();
    let rotated = bit_flip_with_phase(0.3, 0.4, 0.3, std::f64::consts::FRAC_PI_2).unwrap();
    assert!((real - rotated).abs() > 1e-3);
}

#[test]
fn closed_forms_match_on_a_coarse_grid() {
    for kind in NoiseKind::ALL {
        let grid = SweepGrid::new(kind, vec![0.2, 0.6, 0.9], vec![0.1, 0.5], vec![0.0, 0.7]).unwrap();
        let recs = sweep(&grid, 0.0).unwrap();
        let worst = summarize(&recs)[0].max_deviation;
        assert!(worst < 1e-6, "{kind}: {worst:e}");
    }
}

#[test]
fn closed_form_boundaries() {
    for b2 in [0.0, 0.3, 0.5, 1.0] {
        for y2 in [0.0, 0.2, 0.9] {
            for l in [0.0, 1.0] {
                assert!((closed_form(NoiseKind::BitFlip, l, b2, y2).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }
    for l in [0.1, 0.5, 0.77] {
        assert!((closed_form(NoiseKind::BitFlip, l, 0.5, 0.5).unwrap() - 1.0).abs() < 1e-12);
    }
    for kind in NoiseKind::ALL {
        assert!((closed_form(kind, 0.0, 0.37, 0.81).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn sweep_rows_are_ordered_and_phase_flip_peaks_at_zero() {
    let strengths = SweepGrid::linspace(0.0, 1.0, 6);
    let grid = SweepGrid::new(NoiseKind::PhaseFlip, strengths.clone(), vec![0.4], vec![0.3]).unwrap();
    let recs = sweep(&grid, 0.0).unwrap();
    let order: Vec<f64> = recs.iter().map(|r| r.strength).collect();
    assert_eq!(order, strengths);
    let best = recs.iter().map(|r| r.numeric_f).fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(recs[0].numeric_f, best);
    assert_eq!(sweep(&grid, 0.0).unwrap(), recs);
}

#[test]
fn branch_fidelity_of_random_states_is_a_probability() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let inputs = ProtocolInputs::random(&mut rng);
    for _ in 0..50 {
        let a: Vec<C64> = (0..16).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        let mut rho = vec![C64::new(0.0, 0.0); 16];
        for r in 0..4 {
            for c in 0..4 {
                rho[r * 4 + c] = (0..4).map(|k| a[r * 4 + k] * a[c * 4 + k].conj()).sum();
            }
        }
        let tr: f64 = (0..4).map(|i| rho[i * 5].re).sum();
        let rho = DensityMatrix::new(2, rho.into_iter().map(|z| z / tr).collect()).unwrap();
        let f = branch_fidelity(&rho, &inputs).unwrap();
        assert!((-1e-12..=1.0 + 1e-12).contains(&f), "{f}");
    }
    // Fully dephased outputs: product of the single-qubit diagonal overlaps.
    let dephased = DensityMatrix::maximally_mixed(2);
    let f = branch_fidelity(&dephased, &inputs).unwrap();
    assert!((f - 0.25).abs() < 1e-12);
}
