use mentorq::circuit::*;
use mentorq::protocol::{standard_table, ProtocolInputs};
use mentorq::qcore::C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn deferred_measurement_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..20 {
        let inputs = ProtocolInputs::random(&mut rng);
        let c = build_protocol_circuit(&inputs).unwrap();
        let f = output_state(&c).unwrap().fidelity(&inputs.joint_target()).unwrap();
        assert!(f >= 1.0 - 1e-10, "{f}");
        let m = simulate_marginals(&c).unwrap();
        for dist in m.values() {
            assert!((dist[0] + dist[1] - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn correction_network_is_linear() {
    assert!(correction_network(standard_table()).max_degree() <= 1);
}

#[test]
fn qasm_round_trip_and_determinism() {
    let inputs = ProtocolInputs::new(C64::new(0.6, 0.0), C64::from_polar(0.8, 1.1), 0.3f64.sqrt(), 0.7f64.sqrt()).unwrap();
    let c = build_protocol_circuit(&inputs).unwrap();
    let doc = export_qasm(&c);
    assert_eq!(doc, export_qasm(&build_protocol_circuit(&inputs).unwrap()));
    assert!(!doc.text.contains("if"), "no classical control flow");
    let parsed = parse_qasm(&doc.text).unwrap();
    assert_eq!(parsed.measured(), c.measured());
    let (a, b) = (simulate_marginals(&c).unwrap(), simulate_marginals(&parsed).unwrap());
    for (q, d) in &a {
        assert!((d[0] - b[q][0]).abs() < 1e-12 && (d[1] - b[q][1]).abs() < 1e-12);
    }
    // Re-exporting the parsed circuit is a fixed point.
    assert_eq!(export_qasm(&parsed).text.lines().filter(|l| !l.contains("//")).count(),
               doc.text.lines().filter(|l| !l.contains("//")).count());
}

#[test]
fn measurements_are_terminal_in_the_export() {
    let c = build_protocol_circuit(&ProtocolInputs::from_weights(0.5, 0.5, 0.0).unwrap()).unwrap();
    let text = export_qasm(&c).text;
    let lines: Vec<&str> = text.lines().collect();
    let first_measure = lines.iter().position(|l| l.contains("measure")).unwrap();
    assert!(lines[first_measure..].iter().all(|l| l.contains("measure")));
    assert_eq!(c.measured(), [ALICE_OUT, BOB_OUT]);
}
