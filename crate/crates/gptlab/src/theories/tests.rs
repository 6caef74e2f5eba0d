use super::quantum::{cnot_unitary, embed, extract_state, is_psd_exact, pauli, CMatrix, CRat};
use super::*;
use crate::model::evaluate_closed;
use crate::model::{AcceptExpr, CircuitBuilder, Device};
use num::rational::BigRational;
use num::{BigInt, One, Zero};

fn exact(p: i64, q: i64) -> Scalar {
    Scalar::ratio(p, q, Mode::Exact)
}

#[test]
fn classical_bit_conventions() {
    let th = classical_theory(2, Mode::Exact).unwrap();
    let spec = th.base_system();
    assert_eq!(spec.pure_states[0].coords, vec![exact(1, 1), exact(0, 1)]);
    assert_eq!(spec.pure_states[1].coords, vec![exact(0, 1), exact(1, 1)]);
    assert_eq!(spec.unit.coords, vec![exact(1, 1), exact(1, 1)]);
    // Basis effects are dual to basis states.
    for (i, e) in spec.extremal_effects.iter().enumerate() {
        for (j, s) in spec.pure_states.iter().enumerate() {
            let p = e.apply(s).unwrap();
            assert_eq!(p, if i == j { exact(1, 1) } else { exact(0, 1) });
        }
    }
    assert!(classical_theory(1, Mode::Exact).is_err());
}

#[test]
fn uniform_mixture_invariant_under_transpositions() {
    let th = classical_theory(2, Mode::Exact).unwrap();
    let mix = th.base_system().uniform_mixture();
    assert_eq!(mix.coords, vec![exact(1, 2), exact(1, 2)]);
    for g in &th.base_system().generators {
        assert_eq!(g.transform.apply(&mix).unwrap(), mix);
    }
}

#[test]
fn qubit_embeddings_match_conventions() {
    // |0><0| -> (1, 0, 0, 1).
    let ket0 = CMatrix::from_ints(2, &[(1, 0), (0, 0), (0, 0), (0, 0)]);
    let v = embed(&ket0, Mode::Exact).unwrap();
    assert_eq!(
        v.coords,
        vec![exact(1, 1), exact(0, 1), exact(0, 1), exact(1, 1)]
    );
    // Maximally mixed -> (1, 0, 0, 0).
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mixed = CMatrix::identity(2).scale(&half);
    let m = embed(&mixed, Mode::Exact).unwrap();
    assert_eq!(
        m.coords,
        vec![exact(1, 1), exact(0, 1), exact(0, 1), exact(0, 1)]
    );
}

#[test]
fn embed_extract_is_a_bijection_on_rational_hermitians() {
    // Hermitian with rational real/imag parts.
    let h = CMatrix {
        dim: 2,
        data: vec![
            CRat::from_ints(1, 0),
            CRat {
                re: BigRational::new(BigInt::from(1), BigInt::from(3)),
                im: BigRational::new(BigInt::from(-2), BigInt::from(7)),
            },
            CRat {
                re: BigRational::new(BigInt::from(1), BigInt::from(3)),
                im: BigRational::new(BigInt::from(2), BigInt::from(7)),
            },
            CRat::from_ints(-2, 0),
        ],
    };
    let v = embed(&h, Mode::Exact).unwrap();
    let back = extract_state(&v).unwrap();
    assert_eq!(back, h);
}

#[test]
fn cnot_transfer_matrix_agrees_with_conjugation_oracle() {
    // |10><10| -> |11><11| under CNOT, checked through the embedding.
    let ket = |b1: usize, b2: usize| -> CMatrix {
        let mut m = CMatrix::zeros(4);
        let idx = b1 * 2 + b2;
        m.data[idx * 4 + idx] = CRat::one();
        m
    };
    let u = cnot_unitary();
    let oracle = u.mul(&ket(1, 0)).mul(&u.dagger());
    assert_eq!(oracle, ket(1, 1));

    let th = quantum_theory(2, Mode::Exact).unwrap();
    let cnot = &th.gate("CNOT").unwrap().transform;
    let in_state = embed(&ket(1, 0), Mode::Exact).unwrap();
    let out_state = cnot.apply(&in_state).unwrap();
    assert_eq!(out_state, embed(&ket(1, 1), Mode::Exact).unwrap());
}

#[test]
fn hardcoded_transfer_matrices_match_the_float_oracle() {
    // Conjugation oracle in complex f64 for H and S, whose unitaries are not
    // rational.
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let h = [[(s2, 0.0), (s2, 0.0)], [(s2, 0.0), (-s2, 0.0)]];
    let s = [[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (0.0, 1.0)]];
    let paulis_f64: Vec<[[(f64, f64); 2]; 2]> = (0..4)
        .map(|p| {
            let pm = pauli(p);
            let mut out = [[(0.0, 0.0); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    use num::ToPrimitive;
                    let c = pm.get(i, j);
                    out[i][j] = (c.re.to_f64().unwrap(), c.im.to_f64().unwrap());
                }
            }
            out
        })
        .collect();
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let mat_mul = |a: &[[(f64, f64); 2]; 2], b: &[[(f64, f64); 2]; 2]| {
        let mut out = [[(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let p = cmul(a[i][k], b[k][j]);
                    out[i][j].0 += p.0;
                    out[i][j].1 += p.1;
                }
            }
        }
        out
    };
    let dagger = |a: &[[(f64, f64); 2]; 2]| {
        let mut out = [[(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[j][i] = (a[i][j].0, -a[i][j].1);
            }
        }
        out
    };
    let th = quantum_theory(1, Mode::Exact).unwrap();
    for (name, u) in [("H", h), ("S", s)] {
        let t = &th.gate(name).unwrap().transform;
        for p in 0..4 {
            for q in 0..4 {
                let uq = mat_mul(&u, &paulis_f64[q]);
                let uqut = mat_mul(&uq, &dagger(&u));
                let prod = mat_mul(&paulis_f64[p], &uqut);
                let trace_re = prod[0][0].0 + prod[1][1].0;
                let expected = trace_re / 2.0;
                let got = t.entry(p, q).to_f64();
                assert!(
                    (got - expected).abs() < 1e-12,
                    "{name} PTM entry ({p},{q}): {got} vs oracle {expected}"
                );
            }
        }
    }
}

#[test]
fn membership_examples() {
    let cl = classical_theory(2, Mode::Exact).unwrap();
    let bit = cl.base_system().system.clone();
    let half = GVector::new(vec![bit.clone()], vec![exact(1, 2), exact(1, 2)]);
    assert!(cl.membership(&half).unwrap());
    let bad = GVector::new(vec![bit], vec![exact(3, 2), exact(-1, 2)]);
    assert!(!cl.membership(&bad).unwrap());

    let q = quantum_theory(1, Mode::Exact).unwrap();
    let sys = q.base_system().system.clone();
    // Bloch vector of norm √3 > 1: not a state.
    let v = GVector::new(
        vec![sys.clone()],
        vec![exact(1, 1), exact(1, 1), exact(1, 1), exact(1, 1)],
    );
    assert!(!q.membership(&v).unwrap());
    for s in &q.base_system().pure_states {
        assert!(q.membership(s).unwrap());
    }

    let bw = boxworld_theory(Mode::Exact);
    let vertex = gbit_vertex(0, 1, Mode::Exact);
    assert_eq!(vertex.coords, vec![exact(1, 1), exact(1, 1), exact(-1, 1)]);
    assert!(bw.membership(&vertex).unwrap());
    let outside = GVector::new(
        vec![gbit_system()],
        vec![exact(1, 1), exact(3, 2), exact(0, 1)],
    );
    assert!(!bw.membership(&outside).unwrap());
}

#[test]
fn psd_test_agrees_with_eigenvalue_signs() {
    // diag(1, -1/5) is not PSD; a small Gram matrix is.
    let m = CMatrix {
        dim: 2,
        data: vec![
            CRat::one(),
            CRat::zero(),
            CRat::zero(),
            CRat {
                re: BigRational::new(BigInt::from(-1), BigInt::from(5)),
                im: BigRational::zero(),
            },
        ],
    };
    assert!(!is_psd_exact(&m).unwrap());
    // [[2, i], [-i, 1]] has eigenvalues (3 ± √5)/2 > 0.
    let g = CMatrix {
        dim: 2,
        data: vec![
            CRat::from_ints(2, 0),
            CRat::from_ints(0, 1),
            CRat::from_ints(0, -1),
            CRat::from_ints(1, 0),
        ],
    };
    assert!(is_psd_exact(&g).unwrap());
    // Zero diagonal entry with nonzero off-diagonal: indefinite.
    let z = CMatrix {
        dim: 2,
        data: vec![CRat::zero(), CRat::one(), CRat::one(), CRat::zero()],
    };
    assert!(!is_psd_exact(&z).unwrap());
}

#[test]
fn product_of_members_passes_composite_membership() {
    let bw = boxworld_theory(Mode::Exact);
    let a = gbit_vertex(0, 0, Mode::Exact);
    let b = gbit_vertex(1, 0, Mode::Exact);
    let prod = a.tensor(&b).unwrap();
    assert!(bw.membership(&prod).unwrap());
    // The PR state is also a physical composite state.
    assert!(bw.membership(&pr_state(Mode::Exact)).unwrap());
    // A signalling-free but negative box is rejected: flip one correlator
    // past the no-signalling polytope.
    let mut coords = pr_state(Mode::Exact).coords.clone();
    coords[4] = exact(3, 1); // E_00 = 3
    let bad = GVector::new(vec![gbit_system(), gbit_system()], coords);
    assert!(!bw.membership(&bad).unwrap());
}

#[test]
fn rho_f_circuit_distribution_matches_construction() {
    // Evaluate a closed 3-party majority circuit and compare with the
    // distribution required by the construction.
    let mode = Mode::Exact;
    let f = TruthTable::new(3, vec![false, false, false, true, false, true, true, true]).unwrap();
    let x = [true, true, false];
    let state = rho_f(&f, mode).unwrap();
    let th = boxworld_theory(mode);
    let mut b = CircuitBuilder::new();
    let (_, wires) = b.prepare(Device::preparation("rho_f", vec![state]));
    for (j, &w) in wires.iter().enumerate() {
        let meas = th
            .measurement("gbit", if x[j] { "fiducial1" } else { "fiducial0" })
            .unwrap();
        b.measure(Device::measurement("m", meas.effects.clone()), &[w]);
    }
    let c = b.finish(AcceptExpr::Const(true));
    let dist = evaluate_closed(&c).unwrap();
    let fx = f.eval(&x);
    for (string, p) in dist.iter() {
        // string[0] is the preparation outcome (single), then the 3 results.
        let parity = string[1] ^ string[2] ^ string[3];
        let expected = if parity == fx as usize {
            exact(1, 4)
        } else {
            exact(0, 1)
        };
        assert_eq!(*p, expected, "string {string:?}");
    }
    dist.check_normalised(1e-12).unwrap();
}

#[test]
fn theory_json_round_trips() {
    for th in [
        classical_theory(3, Mode::Exact).unwrap(),
        boxworld_theory(Mode::Exact),
        quantum_theory(2, Mode::Exact).unwrap(),
    ] {
        let json = theory_to_json(&th).unwrap();
        let back = theory_from_json(&json).unwrap();
        assert_eq!(back.name, th.name);
        assert_eq!(back.membership, th.membership);
        assert_eq!(back.systems[0].system, th.systems[0].system);
        assert_eq!(back.systems[0].pure_states, th.systems[0].pure_states);
        assert_eq!(back.systems[0].unit, th.systems[0].unit);
        assert_eq!(back.gates.len(), th.gates.len());
        for (a, b) in back.gates.iter().zip(&th.gates) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.transform, b.transform);
        }
    }
}

#[test]
fn swap_exchanges_local_states() {
    let mode = Mode::Exact;
    let bw = boxworld_theory(mode);
    let swap = swap_transform(&gbit_system(), &gbit_system(), mode);
    let a = gbit_vertex(0, 0, mode);
    let b = gbit_vertex(1, 1, mode);
    let ab = a.tensor(&b).unwrap();
    let ba = b.tensor(&a).unwrap();
    assert_eq!(swap.apply(&ab).unwrap().coords, ba.coords);
    let _ = bw;
}
