//! Random aux-ported circuits for bound sweeps.

use crate::model::{AcceptExpr, Circuit, CircuitBuilder, Device, OutcomeVar};
use crate::theories::{TheoryError, TheorySpec};
use rand::Rng;
use rand_chacha::ChaCha12Rng;

/// Draws a random circuit over the theory's base system: an auxiliary
/// register of 1–2 sites, optional ancilla preparations, a handful of gates,
/// measurements on a random subset of wires (some wires may survive as
/// residual outputs) and a random acceptance set over the bound outcomes.
pub fn random_aux_circuit(
    theory: &TheorySpec,
    rng: &mut ChaCha12Rng,
) -> Result<Circuit, TheoryError> {
    let base = theory.base_system();
    let sys = base.system.clone();
    let mut b = CircuitBuilder::new();
    let n_aux = rng.gen_range(1..=2usize);
    let mut live: Vec<usize> = (0..n_aux).map(|_| b.aux(sys.clone())).collect();
    // Ancilla preparations.
    for _ in 0..rng.gen_range(0..=1usize) {
        let idx = rng.gen_range(0..base.pure_states.len());
        let state = base.pure_states[idx].clone();
        let (_, outs) = b.prepare(Device::preparation("anc", vec![state]));
        live.extend(outs);
    }
    // Random single- and two-site gates among the live wires.
    let single_gates: Vec<_> = theory
        .gates
        .iter()
        .filter(|g| g.transform.in_systems.len() == 1 && g.transform.in_systems[0] == sys)
        .collect();
    let double_gates: Vec<_> = theory
        .gates
        .iter()
        .filter(|g| g.transform.in_systems.len() == 2 && g.transform.in_systems[0] == sys)
        .collect();
    for _ in 0..rng.gen_range(0..=3usize) {
        if !double_gates.is_empty() && live.len() >= 2 && rng.gen_bool(0.4) {
            let g = double_gates[rng.gen_range(0..double_gates.len())];
            let i = rng.gen_range(0..live.len());
            let mut j = rng.gen_range(0..live.len());
            while j == i {
                j = rng.gen_range(0..live.len());
            }
            let (_, outs) = b.apply(
                Device::transformation(g.name.clone(), vec![g.transform.clone()]),
                &[live[i], live[j]],
            );
            live[i] = outs[0];
            live[j] = outs[1];
        } else if !single_gates.is_empty() {
            let g = single_gates[rng.gen_range(0..single_gates.len())];
            let i = rng.gen_range(0..live.len());
            let (_, outs) = b.apply(
                Device::transformation(g.name.clone(), vec![g.transform.clone()]),
                &[live[i]],
            );
            live[i] = outs[0];
        }
    }
    // Measure a random subset (keep at least one measurement so acceptance
    // has something to look at; unmeasured wires stay residual).
    let mut vars: Vec<(OutcomeVar, usize)> = Vec::new();
    let n_measure = rng.gen_range(1..=live.len());
    for _ in 0..n_measure {
        let i = rng.gen_range(0..live.len());
        let wire = live.swap_remove(i);
        let m = &base.measurements[rng.gen_range(0..base.measurements.len())];
        let var = b.measure(
            Device::measurement(m.name.clone(), m.effects.clone()),
            &[wire],
        );
        vars.push((var, m.effects.len()));
    }
    // Random accepted set over the joint outcomes of the measured devices.
    let total: usize = vars.iter().map(|(_, n)| n).product();
    let mut clauses: Vec<AcceptExpr> = Vec::new();
    for z in 0..total {
        if rng.gen_bool(0.5) {
            let mut rank = z;
            let mut conj: Option<AcceptExpr> = None;
            for (var, n) in vars.iter().rev() {
                let digit = (rank % n) as i64;
                rank /= n;
                let eq = AcceptExpr::eq(AcceptExpr::Var(*var), AcceptExpr::Lit(digit));
                conj = Some(match conj {
                    None => eq,
                    Some(c) => AcceptExpr::and(eq, c),
                });
            }
            clauses.push(conj.expect("at least one measurement"));
        }
    }
    let accept = match clauses.len() {
        0 => AcceptExpr::Const(false),
        _ => {
            let mut it = clauses.into_iter();
            let first = it.next().unwrap();
            it.fold(first, AcceptExpr::or)
        }
    };
    Ok(b.finish(accept))
}
