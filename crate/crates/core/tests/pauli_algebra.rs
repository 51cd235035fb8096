mod common;

use common::{kron_dense, max_diff, random_sum, rng};
use molpea::chem::{fixture_text, load_fixture, Molecule};
use molpea::pauli::{mul_strings, Pauli, PauliString, PauliSum, PhasedPauli, SIMPLIFY_TOL};
use molpea::{CMatrix, Complex64};
use proptest::prelude::*;

fn pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(0usize..4, n).prop_map(|idx| {
        PauliString::from_qubit_ops(idx.into_iter().map(|i| Pauli::ALL[i]).collect())
    })
}

fn pauli_sum(n: usize) -> impl Strategy<Value = PauliSum> {
    prop::collection::vec((pauli_string(n), -1.0f64..1.0, -1.0f64..1.0), 1..=5).prop_map(
        move |terms| {
            PauliSum::from_terms(
                n,
                terms
                    .into_iter()
                    .map(|(s, re, im)| (s, Complex64::new(re, im))),
            )
            .unwrap()
        },
    )
}

fn well_formed(s: &PauliSum) -> bool {
    s.iter()
        .all(|(p, c)| c.norm() >= SIMPLIFY_TOL && p.num_qubits() == s.num_qubits())
}

proptest! {
    #[test]
    fn string_product_is_exact((p, q) in (1usize..=3).prop_flat_map(|n| (pauli_string(n), pauli_string(n)))) {
        let r = mul_strings(&p.clone().into(), &q.clone().into()).unwrap();
        let lhs = kron_dense(&p) * kron_dense(&q);
        let rhs = kron_dense(&r.string) * r.phase.to_complex();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(p.to_dense().unwrap(), kron_dense(&p));
    }

    #[test]
    fn string_product_associates((p, q, r) in (1usize..=3).prop_flat_map(|n| (pauli_string(n), pauli_string(n), pauli_string(n)))) {
        let (p, q, r): (PhasedPauli, PhasedPauli, PhasedPauli) = (p.into(), q.into(), r.into());
        let left = mul_strings(&mul_strings(&p, &q).unwrap(), &r).unwrap();
        let right = mul_strings(&p, &mul_strings(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn sum_product_associative_and_bilinear(
        (a, b, c) in (1usize..=3).prop_flat_map(|n| (pauli_sum(n), pauli_sum(n), pauli_sum(n))),
        alpha in -2.0f64..2.0,
    ) {
        let (da, db, dc) = (a.to_dense().unwrap(), b.to_dense().unwrap(), c.to_dense().unwrap());
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        let dense = &da * &db * &dc;
        prop_assert!(max_diff(&ab_c.to_dense().unwrap(), &dense) < 1e-12);
        prop_assert!(max_diff(&a_bc.to_dense().unwrap(), &dense) < 1e-12);

        let k = Complex64::new(alpha, 0.5);
        let lhs = a.scale(k).add(&b).unwrap().mul(&c).unwrap();
        let rhs = a.mul(&c).unwrap().scale(k).add(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
        prop_assert!(max_diff(&lhs.to_dense().unwrap(), &((&da * k + &db) * &dc)) < 1e-12);

        for s in [&ab_c, &a_bc, &lhs, &rhs, &a.add(&b).unwrap()] {
            prop_assert!(well_formed(s));
        }
    }

    #[test]
    fn text_format_round_trips(a in (1usize..=4).prop_flat_map(pauli_sum)) {
        let text = a.to_string();
        let back = PauliSum::parse(&text).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), text);
    }
}

#[test]
fn random_sums_match_dense_products() {
    let mut rng = rng(11);
    for _ in 0..200 {
        let n = 1 + (rand::Rng::random_range(&mut rng, 0..3));
        let a = random_sum(&mut rng, n, 5);
        let b = random_sum(&mut rng, n, 5);
        let dense = a.to_dense().unwrap() * b.to_dense().unwrap();
        assert!(max_diff(&a.mul(&b).unwrap().to_dense().unwrap(), &dense) < 1e-12);
    }
}

#[test]
fn fixtures_are_hermitian_and_dense_trace_matches() {
    for m in Molecule::NAMED {
        let h = load_fixture(m.name()).unwrap();
        assert!(h.is_hermitian_as_sum(), "{m}");
        let d = h.to_dense().unwrap();
        assert!(max_diff(&d, &d.adjoint()) < 1e-12);
        let dim = 1usize << h.num_qubits();
        let id = PauliString::identity(h.num_qubits());
        assert!((d.trace() - h.coeff(&id) * dim as f64).norm() < 1e-12);
    }
    let h = load_fixture("H2-nospin").unwrap();
    let trace = h.to_dense().unwrap().trace();
    assert!((trace.re - 4.0 * 1.5686986355290005).abs() < 1e-12);
}

#[test]
fn fixture_square_matches_dense() {
    let h = load_fixture("H2-nospin").unwrap();
    let d = h.to_dense().unwrap();
    let sq = h.mul(&h).unwrap();
    assert!(max_diff(&sq.to_dense().unwrap(), &(&d * &d)) < 1e-12);
}

#[test]
fn fixture_plus_negation_cancels() {
    let h = load_fixture("H2-nospin").unwrap();
    assert!(h.add(&h.neg()).unwrap().is_empty());
}

#[test]
fn fixture_text_is_byte_stable() {
    for m in Molecule::NAMED {
        let text = fixture_text(m).unwrap();
        let parsed = PauliSum::parse(text).unwrap();
        assert_eq!(parsed.to_string(), text, "{m}");
    }
}

#[test]
fn anti_hermitian_first_order_term() {
    let h = load_fixture("H2-nospin").unwrap();
    let cfg = molpea::lcu::LcuConfig::new(1, 1, 1.0).unwrap();
    let v = molpea::lcu::build_taylor(&h, cfg).unwrap();
    assert!(!v.expansion.is_hermitian_as_sum());
    let d: CMatrix = v.expansion.to_dense().unwrap();
    assert!(max_diff(&d, &d.adjoint()) > 0.1);
}
