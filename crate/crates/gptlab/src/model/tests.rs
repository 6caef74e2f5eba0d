use super::*;
use crate::scalar::{Mode, Scalar};
use crate::theories::{boxworld_theory, classical_theory, gbit_effect, gbit_vertex, pr_state};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn exact(p: i64, q: i64) -> Scalar {
    Scalar::ratio(p, q, Mode::Exact)
}

fn bit() -> SystemType {
    SystemType::new("bit", 2)
}

fn bit_state(i: usize) -> GVector {
    let mut c = vec![exact(0, 1); 2];
    c[i] = exact(1, 1);
    GVector::new(vec![bit()], c)
}

fn bit_effects() -> Vec<GEffect> {
    vec![
        GEffect::new(vec![bit()], vec![exact(1, 1), exact(0, 1)]),
        GEffect::new(vec![bit()], vec![exact(0, 1), exact(1, 1)]),
    ]
}

#[test]
fn tensor_of_basis_vectors() {
    let t = bit_state(0).tensor(&bit_state(1)).unwrap();
    assert_eq!(
        t.coords,
        vec![exact(0, 1), exact(1, 1), exact(0, 1), exact(0, 1)]
    );
    assert_eq!(t.systems.len(), 2);
}

#[test]
fn tensor_of_identities_is_identity() {
    let a = GTransform::identity(vec![bit()], Mode::Exact);
    let sys3 = SystemType::new("trit", 3);
    let b = GTransform::identity(vec![sys3.clone()], Mode::Exact);
    let t = a.tensor(&b).unwrap();
    assert_eq!(t, GTransform::identity(vec![bit(), sys3], Mode::Exact));
}

#[test]
fn tensor_of_gbit_states_matches_double_loop_oracle() {
    let a = gbit_vertex(0, 0, Mode::Exact); // (1, 1, 1)
    let b = gbit_vertex(1, 0, Mode::Exact); // (1, -1, 1)
    let t = a.tensor(&b).unwrap();
    // Independent brute-force Kronecker.
    let mut oracle = Vec::new();
    for x in &a.coords {
        for y in &b.coords {
            oracle.push(x * y);
        }
    }
    assert_eq!(t.coords, oracle);
}

fn random_rational_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Vec<Scalar> {
    (0..rows * cols)
        .map(|_| exact(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
        .collect()
}

#[test]
fn sequential_compose_matches_triple_loop_oracle() {
    let sys3 = SystemType::new("trit", 3);
    let mut rng = ChaCha12Rng::seed_from_u64(11);
    for _ in 0..5 {
        let a = GTransform::new(
            vec![sys3.clone()],
            vec![sys3.clone()],
            random_rational_matrix(&mut rng, 3, 3),
        );
        let b = GTransform::new(
            vec![sys3.clone()],
            vec![sys3.clone()],
            random_rational_matrix(&mut rng, 3, 3),
        );
        let prod = sequential_compose(&b, &a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = exact(0, 1);
                for k in 0..3 {
                    acc = &acc + &(b.entry(i, k) * a.entry(k, j));
                }
                assert_eq!(*prod.entry(i, j), acc);
            }
        }
    }
}

#[test]
fn compose_not_not_is_identity_and_identity_is_neutral() {
    let th = classical_theory(2, Mode::Exact).unwrap();
    let not = &th.gate("NOT").unwrap().transform;
    let id = GTransform::identity(vec![th.base_system().system.clone()], Mode::Exact);
    assert_eq!(sequential_compose(not, not).unwrap(), id);
    assert_eq!(sequential_compose(not, &id).unwrap(), *not);
    assert_eq!(sequential_compose(&id, not).unwrap(), *not);
}

#[test]
fn compose_rejects_type_mismatch() {
    let id2 = GTransform::identity(vec![bit()], Mode::Exact);
    let id3 = GTransform::identity(vec![SystemType::new("trit", 3)], Mode::Exact);
    assert!(matches!(
        sequential_compose(&id3, &id2),
        Err(ModelError::Wiring(_))
    ));
}

#[test]
fn prepare_and_measure_bit() {
    let mut b = CircuitBuilder::new();
    let (_, w) = b.prepare(Device::preparation("p", vec![bit_state(0)]));
    let m = b.measure(Device::measurement("m", bit_effects()), &[w[0]]);
    let c = b.finish(AcceptExpr::eq(AcceptExpr::var(m), AcceptExpr::Lit(0)));
    let dist = evaluate_closed(&c).unwrap();
    assert_eq!(*dist.prob(&[0, 0]), exact(1, 1));
    assert_eq!(*dist.prob(&[0, 1]), exact(0, 1));
}

/// The PR circuit with fiducial settings (x, y).
fn pr_circuit(x: usize, y: usize) -> Circuit {
    let mode = Mode::Exact;
    let mut b = CircuitBuilder::new();
    let (_, wires) = b.prepare(Device::preparation("pr", vec![pr_state(mode)]));
    let meas = |xx: usize| {
        Device::measurement(
            "fiducial",
            vec![gbit_effect(xx, 0, mode), gbit_effect(xx, 1, mode)],
        )
    };
    let a = b.measure(meas(x), &[wires[0]]);
    let bb = b.measure(meas(y), &[wires[1]]);
    b.finish(AcceptExpr::eq(
        AcceptExpr::xor(AcceptExpr::var(a), AcceptExpr::var(bb)),
        AcceptExpr::Lit(1),
    ))
}

#[test]
fn pr_circuit_at_x1_y1() {
    let dist = evaluate_closed(&pr_circuit(1, 1)).unwrap();
    assert_eq!(*dist.prob(&[0, 0, 0]), exact(0, 1));
    assert_eq!(*dist.prob(&[0, 1, 1]), exact(0, 1));
    assert_eq!(*dist.prob(&[0, 0, 1]), exact(1, 2));
    assert_eq!(*dist.prob(&[0, 1, 0]), exact(1, 2));
}

#[test]
fn evaluation_is_invariant_under_topological_reordering() {
    // Same DAG, devices listed in a different order: the distribution keyed
    // by device must match after permuting indices.
    let mode = Mode::Exact;
    let mk = |flip: bool| -> (Circuit, [usize; 3]) {
        let mut b = CircuitBuilder::new();
        let (_, wires) = b.prepare(Device::preparation("pr", vec![pr_state(mode)]));
        let meas = |x: usize| {
            Device::measurement(
                "fid",
                vec![gbit_effect(x, 0, mode), gbit_effect(x, 1, mode)],
            )
        };
        if flip {
            let vb = b.measure(meas(1), &[wires[1]]);
            let va = b.measure(meas(1), &[wires[0]]);
            (b.finish(AcceptExpr::Const(true)), [0, va.0, vb.0])
        } else {
            let va = b.measure(meas(1), &[wires[0]]);
            let vb = b.measure(meas(1), &[wires[1]]);
            (b.finish(AcceptExpr::Const(true)), [0, va.0, vb.0])
        }
    };
    let (c1, m1) = mk(false);
    let (c2, m2) = mk(true);
    let d1 = evaluate_closed(&c1).unwrap();
    let d2 = evaluate_closed(&c2).unwrap();
    for a in 0..2usize {
        for bb in 0..2usize {
            let mut s1 = [0usize; 3];
            s1[m1[1]] = a;
            s1[m1[2]] = bb;
            let mut s2 = [0usize; 3];
            s2[m2[1]] = a;
            s2[m2[2]] = bb;
            assert_eq!(d1.prob(&s1), d2.prob(&s2));
        }
    }
}

#[test]
fn accept_probability_trivial_case() {
    let mut b = CircuitBuilder::new();
    let w = b.aux(bit());
    let m = b.measure(Device::measurement("m", bit_effects()), &[w]);
    let c = b.finish(AcceptExpr::eq(AcceptExpr::var(m), AcceptExpr::Lit(0)));
    let p = accept_probability(&c, &bit_state(0)).unwrap();
    assert_eq!(p, exact(1, 1));
}

#[test]
fn accept_map_of_unit_only_circuit_is_the_unit_row() {
    let mut b = CircuitBuilder::new();
    let w = b.aux(bit());
    let u = GEffect::new(vec![bit()], vec![exact(1, 1), exact(1, 1)]);
    b.measure(Device::measurement("u", vec![u]), &[w]);
    let c = b.finish(AcceptExpr::Const(true));
    let m = accept_map(&c, false).unwrap();
    assert_eq!(m.out_systems.len(), 0);
    assert_eq!(m.matrix, vec![exact(1, 1), exact(1, 1)]);
}

#[test]
fn accept_map_of_measure_accept_zero_is_the_effect_row() {
    let mut b = CircuitBuilder::new();
    let w = b.aux(bit());
    let m = b.measure(Device::measurement("m", bit_effects()), &[w]);
    let c = b.finish(AcceptExpr::eq(AcceptExpr::var(m), AcceptExpr::Lit(0)));
    let map = accept_map(&c, false).unwrap();
    assert_eq!(map.matrix, vec![exact(1, 1), exact(0, 1)]);
    // Zero-padding to square shape tacks on zero rows.
    let padded = accept_map(&c, true).unwrap();
    assert_eq!(padded.out_dim(), 2);
    assert_eq!(
        padded.matrix,
        vec![exact(1, 1), exact(0, 1), exact(0, 1), exact(0, 1)]
    );
}

#[test]
fn accept_probability_equals_u_accept_map_aux_on_random_circuits() {
    // Cross-check over random 2-gbit circuits and random auxiliary states.
    let mode = Mode::Exact;
    let th = boxworld_theory(mode);
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    for _ in 0..20 {
        let mut b = CircuitBuilder::new();
        let w0 = b.aux(crate::theories::gbit_system());
        let w1 = b.aux(crate::theories::gbit_system());
        let x0 = rng.gen_range(0..2);
        let x1 = rng.gen_range(0..2);
        let m0 = b.measure(
            Device::measurement(
                "f",
                vec![gbit_effect(x0, 0, mode), gbit_effect(x0, 1, mode)],
            ),
            &[w0],
        );
        let m1 = b.measure(
            Device::measurement(
                "f",
                vec![gbit_effect(x1, 0, mode), gbit_effect(x1, 1, mode)],
            ),
            &[w1],
        );
        let target = rng.gen_range(0..2);
        let c = b.finish(AcceptExpr::eq(
            AcceptExpr::xor(AcceptExpr::var(m0), AcceptExpr::var(m1)),
            AcceptExpr::Lit(target),
        ));
        let map = th.acceptance_effect(&c).unwrap();
        for _ in 0..5 {
            // Random mixture of product vertices: always physical.
            let verts = th
                .extremal_states(&[
                    crate::theories::gbit_system(),
                    crate::theories::gbit_system(),
                ])
                .unwrap();
            let i = rng.gen_range(0..verts.len());
            let j = rng.gen_range(0..verts.len());
            let mut coords = Vec::with_capacity(9);
            for k in 0..9 {
                coords.push(&(&verts[i].coords[k] + &verts[j].coords[k]) * &exact(1, 2));
            }
            let aux = GVector::new(verts[i].systems.clone(), coords);
            let via_map = map.apply(&aux).unwrap();
            let direct = th.accept_probability(&c, &aux).unwrap();
            assert_eq!(via_map, direct);
        }
    }
}

#[test]
fn plugging_wrong_aux_type_fails() {
    let mut b = CircuitBuilder::new();
    let w = b.aux(bit());
    let m = b.measure(Device::measurement("m", bit_effects()), &[w]);
    let c = b.finish(AcceptExpr::eq(AcceptExpr::var(m), AcceptExpr::Lit(0)));
    let bad = gbit_vertex(0, 0, Mode::Exact);
    assert!(matches!(
        accept_probability(&c, &bad),
        Err(ModelError::TypeMismatch { .. })
    ));
}

#[test]
fn evaluate_closed_rejects_open_circuits() {
    let mut b = CircuitBuilder::new();
    b.aux(bit());
    let c = b.finish(AcceptExpr::Const(true));
    assert!(matches!(evaluate_closed(&c), Err(ModelError::OpenPorts(_))));
}

#[test]
fn outcome_guard_is_enforced() {
    // 21 four-outcome devices exceed 2^20 outcome strings.
    let mode = Mode::Exact;
    let mut b = CircuitBuilder::new();
    for _ in 0..21 {
        let dev = Device::preparation(
            "coin4",
            (0..4)
                .map(|i| {
                    let mut c = vec![Scalar::zero(mode); 2];
                    c[i % 2] = Scalar::one(mode);
                    let mut v = GVector::new(vec![bit()], c);
                    v.outcome_label = Some(i);
                    v
                })
                .collect(),
        );
        let (_, w) = b.prepare(dev);
        let u = GEffect::new(vec![bit()], vec![exact(1, 1), exact(1, 1)]);
        b.measure(Device::measurement("u", vec![u]), &[w[0]]);
    }
    let c = b.finish(AcceptExpr::Const(true));
    assert!(matches!(
        evaluate_closed(&c),
        Err(ModelError::GuardExceeded(_))
    ));
}

#[test]
fn coarse_grain_examples() {
    let meas = Device::measurement("m4", {
        let sys = SystemType::new("quad", 4);
        (0..4)
            .map(|i| {
                let mut c = vec![exact(0, 1); 4];
                c[i] = exact(1, 1);
                GEffect::new(vec![sys.clone()], c)
            })
            .collect()
    });
    // Singleton partition: identical device components.
    let same = coarse_grain(&meas, &[vec![0], vec![1], vec![2], vec![3]]).unwrap();
    match (&same.kind, &meas.kind) {
        (DeviceKind::Measurement(a), DeviceKind::Measurement(b)) => assert_eq!(a, b),
        _ => panic!("kind changed"),
    }
    // Full coarse-graining of a basis measurement gives the unit effect.
    let full = coarse_grain(&meas, &[vec![0, 1, 2, 3]]).unwrap();
    match &full.kind {
        DeviceKind::Measurement(e) => {
            assert_eq!(e.len(), 1);
            assert_eq!(e[0].coords, vec![exact(1, 1); 4]);
        }
        _ => panic!("kind changed"),
    }
    // Two cells, checked against manual addition.
    let two = coarse_grain(&meas, &[vec![0, 2], vec![1, 3]]).unwrap();
    match &two.kind {
        DeviceKind::Measurement(e) => {
            assert_eq!(
                e[0].coords,
                vec![exact(1, 1), exact(0, 1), exact(1, 1), exact(0, 1)]
            );
            assert_eq!(
                e[1].coords,
                vec![exact(0, 1), exact(1, 1), exact(0, 1), exact(1, 1)]
            );
        }
        _ => panic!("kind changed"),
    }
    // Overlap and omission are rejected.
    assert!(coarse_grain(&meas, &[vec![0, 1], vec![1, 2, 3]]).is_err());
    assert!(coarse_grain(&meas, &[vec![0, 1], vec![2]]).is_err());
}

#[test]
fn cyclic_wiring_is_rejected() {
    // A transformation whose output feeds its own input.
    let id = GTransform::identity(vec![bit()], Mode::Exact);
    let dev = Device::transformation("loop", vec![id]);
    let circuit = Circuit {
        devices: vec![dev],
        wires: vec![Wire {
            ty: bit(),
            source: super::circuit::WireSource::Device(0, 0),
            sink: Some((0, 0)),
        }],
        aux_wires: vec![],
        accept: AcceptExpr::Const(true),
        post_select: None,
    };
    assert!(matches!(
        circuit.topological_order(),
        Err(ModelError::Wiring(_))
    ));
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-6i64..=6, 1i64..=4).prop_map(|(p, q)| exact(p, q))
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Scalar>> {
        proptest::collection::vec(arb_scalar(), rows * cols)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn tensor_is_associative(
            a in arb_matrix(2, 2),
            b in arb_matrix(2, 2),
            c in arb_matrix(2, 2),
        ) {
            let t = |m: Vec<Scalar>| GTransform::new(vec![bit()], vec![bit()], m);
            let (a, b, c) = (t(a), t(b), t(c));
            let left = a.tensor(&b).unwrap().tensor(&c).unwrap();
            let right = a.tensor(&b.tensor(&c).unwrap()).unwrap();
            prop_assert_eq!(left.matrix, right.matrix);
        }

        #[test]
        fn tensor_respects_sequential_composition(
            a in arb_matrix(2, 2),
            b in arb_matrix(2, 2),
            c in arb_matrix(2, 2),
            d in arb_matrix(2, 2),
        ) {
            // (A ⊗ B)(C ⊗ D) = AC ⊗ BD
            let t = |m: Vec<Scalar>| GTransform::new(vec![bit()], vec![bit()], m);
            let (a, b, c, d) = (t(a), t(b), t(c), t(d));
            let lhs = sequential_compose(&a.tensor(&b).unwrap(), &c.tensor(&d).unwrap()).unwrap();
            let rhs = sequential_compose(&a, &c).unwrap()
                .tensor(&sequential_compose(&b, &d).unwrap()).unwrap();
            prop_assert_eq!(lhs.matrix, rhs.matrix);
        }

        #[test]
        fn post_select_then_reweight_recovers_restriction(
            probs in proptest::collection::vec(0u32..=8, 4),
        ) {
            let total: u32 = probs.iter().sum();
            prop_assume!(total > 0);
            let d = OutcomeDistribution::new(
                vec![2, 2],
                probs.iter().map(|&p| exact(p as i64, total as i64)).collect(),
            );
            let event = |z: &[usize]| z[0] == 1;
            match post_select(&d, event) {
                Ok((cond, p_s)) => {
                    for (string, p) in d.iter() {
                        if event(&string) {
                            let recovered = &p_s * cond.prob(&string);
                            prop_assert_eq!(recovered, p.clone());
                        }
                    }
                }
                Err(_) => {
                    // Selection had zero mass.
                    let mass: Scalar = Scalar::sum(
                        d.iter().filter(|(z, _)| event(z)).map(|(_, p)| p),
                        Mode::Exact,
                    );
                    prop_assert!(mass.is_zero());
                }
            }
        }
    }
}
