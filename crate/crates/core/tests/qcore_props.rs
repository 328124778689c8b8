use mentorq::bases::{gates, state_prep_gate};
use mentorq::qcore::{DensityMatrix, KrausChannel, StateVector, UnitaryGate, C64};
use proptest::prelude::*;

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map("nonzero", move |v| {
        let amps: Vec<C64> = v.into_iter().map(|(r, i)| C64::new(r, i)).collect();
        StateVector::new(n, amps).ok()?.normalized().ok()
    })
}

fn unitary() -> impl Strategy<Value = UnitaryGate> {
    (0.0f64..1.0, 0.0f64..6.3, 0.0f64..6.3)
        .prop_map(|(t, p, q)| state_prep_gate(C64::from_polar(t.sqrt(), p), C64::from_polar((1.0 - t).sqrt(), q)).unwrap())
}

fn distinct(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(move |v| v[..k].to_vec())
}

/// Amplitude-damping-like pair built from a random angle; complete by construction.
fn channel() -> impl Strategy<Value = KrausChannel> {
    (0.0f64..1.0, 0.0f64..6.3).prop_map(|(g, ph)| {
        let z = C64::new(0.0, 0.0);
        let k0 = [C64::new(1.0, 0.0), z, z, C64::new((1.0 - g).sqrt(), 0.0)];
        let k1 = [z, C64::from_polar(g.sqrt(), ph), z, z];
        KrausChannel::new(vec![k0, k1]).unwrap()
    })
}

proptest! {
    #[test]
    fn unitaries_preserve_norm(s in state(4), u in unitary(), t in distinct(4, 2)) {
        let out = s.apply_unitary(&u, &t[..1]).unwrap().apply_unitary(&gates::cnot(), &t).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kraus_preserves_trace_and_hermiticity(s in state(3), ch in channel(), q in 0usize..3) {
        let rho = DensityMatrix::from_pure(&s).apply_kraus(&ch, q).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
        prop_assert!(rho.hermiticity_deviation() < 1e-10);
        prop_assert!(rho.purity() <= 1.0 + 1e-10);
    }

    #[test]
    fn partial_trace_of_product(a in state(2), b in state(1)) {
        let joint = DensityMatrix::from_pure(&a.tensor(&b));
        let ra = joint.partial_trace(&[0, 1]).unwrap();
        let rb = joint.partial_trace(&[2]).unwrap();
        prop_assert!(ra.max_abs_diff(&DensityMatrix::from_pure(&a)).unwrap() < 1e-12);
        prop_assert!(rb.max_abs_diff(&DensityMatrix::from_pure(&b)).unwrap() < 1e-12);
    }

    #[test]
    fn permutation_inverts(s in state(4), perm in distinct(4, 4)) {
        let mut inv = vec![0; 4];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let back = s.permute(&perm).unwrap().permute(&inv).unwrap();
        prop_assert!(back.max_abs_diff(&s).unwrap() < 1e-15);
    }

    #[test]
    fn contraction_equals_projection_then_trace(s in state(3), b in state(1), q in 0usize..3) {
        let rho = DensityMatrix::from_pure(&s);
        let orth = StateVector::qubit(-b.amp(1).conj(), b.amp(0).conj());
        let (p, post) = rho.project(&[q], &[b.clone(), orth], 0).unwrap();
        let keep: Vec<usize> = (0..3).filter(|&r| r != q).collect();
        let slow = post.partial_trace(&keep).unwrap();
        let (w, fast) = rho.contract(&[q], &b).unwrap();
        prop_assert!((p - w).abs() < 1e-12);
        prop_assert!(fast.max_abs_diff(&slow).unwrap() < 1e-10);
    }

    #[test]
    fn born_probabilities_sum_to_one(s in state(3), t in distinct(3, 2)) {
        let basis = mentorq::bases::bell_basis();
        let total: f64 = (0..4)
            .map(|w| s.project(&t, &basis, w).map(|(p, _)| p).unwrap_or(0.0))
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }
}
