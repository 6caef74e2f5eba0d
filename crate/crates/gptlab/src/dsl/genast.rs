//! Deterministic pseudo-random AST generation for round-trip testing.

use super::ast::{Arg, BoolAst, CircuitAst, Ctor, Stmt, StmtKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn random_expr<R: Rng>(rng: &mut R, vars: &[String], depth: usize) -> BoolAst {
    if depth == 0 || rng.gen_range(0..4) == 0 {
        return if !vars.is_empty() && rng.gen_bool(0.7) {
            BoolAst::Var(vars[rng.gen_range(0..vars.len())].clone())
        } else {
            BoolAst::Int(rng.gen_range(0..2))
        };
    }
    let a = Box::new(random_expr(rng, vars, depth - 1));
    let b = Box::new(random_expr(rng, vars, depth - 1));
    match rng.gen_range(0..5) {
        0 => BoolAst::Xor(a, b),
        1 => BoolAst::And(a, b),
        2 => BoolAst::Or(a, b),
        3 => BoolAst::Not(a),
        _ => {
            // == may not nest on either side without parens; keep operands at
            // or-level and below, which random_expr already guarantees.
            BoolAst::Eq(a, b)
        }
    }
}

/// Generates a small syntactically valid AST (≤ 10 devices). Deterministic in
/// the seed. The result parses back from its printed form; it is not
/// necessarily physically valid for any theory.
pub fn random_ast(seed: u64) -> CircuitAst {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let theory = ["boxworld", "classical", "quantum"][rng.gen_range(0..3)].to_string();
    let n_wires = rng.gen_range(1..=4usize);
    let mut statements = Vec::new();
    let wires: Vec<String> = (0..n_wires).map(|i| format!("w{i}")).collect();
    let ty = match theory.as_str() {
        "boxworld" => "gbit",
        "classical" => "bit",
        _ => "qubit",
    };
    for w in &wires {
        let aux = rng.gen_bool(0.25);
        statements.push(Stmt {
            kind: if aux {
                StmtKind::Aux {
                    name: w.clone(),
                    ty: ty.to_string(),
                }
            } else {
                StmtKind::System {
                    name: w.clone(),
                    ty: ty.to_string(),
                }
            },
            line: 0,
        });
    }
    let n_devices = rng.gen_range(1..=10usize);
    let mut vars: Vec<String> = Vec::new();
    for d in 0..n_devices {
        match rng.gen_range(0..3) {
            0 => {
                let n_args = rng.gen_range(0..=3);
                let args = (0..n_args)
                    .map(|_| {
                        if rng.gen_bool(0.5) {
                            Arg::Int(rng.gen_range(-3..=3))
                        } else {
                            Arg::Ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9))
                        }
                    })
                    .collect();
                statements.push(Stmt {
                    kind: StmtKind::Prepare {
                        ctor: Ctor {
                            name: format!("ctor{d}"),
                            args,
                        },
                        wires: vec![wires[rng.gen_range(0..wires.len())].clone()],
                    },
                    line: 0,
                });
            }
            1 => {
                let w = wires[rng.gen_range(0..wires.len())].clone();
                statements.push(Stmt {
                    kind: StmtKind::Apply {
                        gate: format!("g{d}"),
                        inputs: vec![w.clone()],
                        outputs: vec![w],
                    },
                    line: 0,
                });
            }
            _ => {
                let v = format!("v{}", vars.len());
                vars.push(v.clone());
                statements.push(Stmt {
                    kind: StmtKind::Measure {
                        ctor: Ctor {
                            name: "m".into(),
                            args: vec![],
                        },
                        wires: vec![wires[rng.gen_range(0..wires.len())].clone()],
                        vars: vec![v],
                    },
                    line: 0,
                });
            }
        }
    }
    if rng.gen_bool(0.3) && !vars.is_empty() {
        statements.push(Stmt {
            kind: StmtKind::PostSelect {
                expr: random_expr(&mut rng, &vars, 2),
            },
            line: 0,
        });
    }
    let accept = random_expr(&mut rng, &vars, 3);
    CircuitAst {
        theory,
        statements,
        accept,
        accept_line: 0,
    }
}
