use super::*;
use crate::model::evaluate_closed;
use crate::scalar::{Mode, Scalar};
use crate::theories::{boxworld_theory, builtin_theory, rho_f, TruthTable};

#[test]
fn smoke_parse_single_measurement() {
    let src = "theory boxworld; system A:gbit; prepare vertex(1,1,1) -> A; \
               measure fiducial(0) A -> a; accept a == 0";
    let ast = parse(src).unwrap();
    assert_eq!(ast.theory, "boxworld");
    let preps = ast
        .statements
        .iter()
        .filter(|s| matches!(s.kind, StmtKind::Prepare { .. }))
        .count();
    let meas = ast
        .statements
        .iter()
        .filter(|s| matches!(s.kind, StmtKind::Measure { .. }))
        .count();
    assert_eq!((preps, meas), (1, 1));
    assert_eq!(
        ast.accept,
        BoolAst::Eq(
            Box::new(BoolAst::Var("a".into())),
            Box::new(BoolAst::Int(0))
        )
    );
}

#[test]
fn empty_accept_clause_is_a_syntax_error() {
    let src = "theory boxworld\nsystem A:gbit\naccept\n";
    assert!(matches!(parse(src), Err(DslError::Parse { .. })));
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let src = "theory boxworld\nsystem A gbit\naccept 1";
    match parse(src) {
        Err(DslError::Parse { line, col, .. }) => {
            assert_eq!(line, 2);
            assert!(col > 1);
        }
        other => panic!("expected parse error, got {other:?}"),
    }
}

#[test]
fn precedence_of_xor_and_eq() {
    let ast = parse("theory t\naccept a xor b == 1").unwrap();
    assert_eq!(
        ast.accept,
        BoolAst::Eq(
            Box::new(BoolAst::Xor(
                Box::new(BoolAst::Var("a".into())),
                Box::new(BoolAst::Var("b".into()))
            )),
            Box::new(BoolAst::Int(1))
        )
    );
}

#[test]
fn whitespace_variants_print_identically() {
    let a = parse("theory boxworld;system A:gbit;prepare pr0() -> A;accept 1").unwrap();
    let b =
        parse("theory boxworld\n  system A : gbit\n\n prepare pr0( ) ->  A\naccept  1\n").unwrap();
    assert_eq!(print(&a), print(&b));
}

#[test]
fn print_parse_round_trip_on_fixture_style_files() {
    let src = "theory boxworld\nsystem A:gbit\nsystem B:gbit\nprepare pr() -> A, B\n\
               measure fiducial(1) A -> a\nmeasure fiducial(1) B -> b\naccept a xor b == 1\n";
    let ast = parse(src).unwrap();
    let printed = print(&ast);
    let reparsed = parse(&printed).unwrap();
    assert_eq!(ast, reparsed);
    // print ∘ parse is idempotent on text.
    assert_eq!(print(&reparsed), printed);
}

#[test]
fn random_asts_round_trip() {
    for seed in 0..60 {
        let ast = random_ast(seed);
        let printed = print(&ast);
        let reparsed = parse(&printed).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{printed}"));
        assert_eq!(ast, reparsed, "seed {seed}:\n{printed}");
    }
}

#[test]
fn validate_type_mismatch_for_wrong_gate_input() {
    // A gbit wired into a classical-bit gate.
    let src = "theory classical\nsystem A:gbit\naccept 1";
    let th = builtin_theory("classical", Mode::Exact).unwrap();
    match validate(&parse(src).unwrap(), &th) {
        Err(DslError::Validate { kind, .. }) => assert_eq!(kind, ValidateKind::UnknownSystem),
        other => panic!("expected validation error, got {other:?}"),
    }

    let src2 = "theory quantum\nsystem A:qubit\nprepare ket(0) -> A\napply CNOT A -> A\naccept 1";
    let th2 = builtin_theory("quantum", Mode::Exact).unwrap();
    match validate(&parse(src2).unwrap(), &th2) {
        Err(DslError::Validate { kind, .. }) => assert_eq!(kind, ValidateKind::Arity),
        other => panic!("expected arity error, got {other:?}"),
    }
}

#[test]
fn validate_unbound_variable_in_accept() {
    let src = "theory boxworld\nsystem A:gbit\nprepare vertex(1,1,1) -> A\n\
               measure fiducial(0) A -> a\naccept b == 0";
    let th = boxworld_theory(Mode::Exact);
    match validate(&parse(src).unwrap(), &th) {
        Err(DslError::Validate { kind, .. }) => assert_eq!(kind, ValidateKind::UnboundVariable),
        other => panic!("expected unbound-variable error, got {other:?}"),
    }
}

#[test]
fn validate_rejects_consumed_wire_reuse() {
    let src = "theory boxworld\nsystem A:gbit\nprepare vertex(1,1,1) -> A\n\
               measure fiducial(0) A -> a\nmeasure fiducial(1) A -> b\naccept a == 0";
    let th = boxworld_theory(Mode::Exact);
    match validate(&parse(src).unwrap(), &th) {
        Err(DslError::Validate { kind, .. }) => assert_eq!(kind, ValidateKind::WireUnavailable),
        other => panic!("expected wire error, got {other:?}"),
    }
}

#[test]
fn validated_rho_f_circuit_matches_direct_construction() {
    // Three-party majority at settings x = (1, 1, 0).
    let src = "theory boxworld\n\
               system P1:gbit\nsystem P2:gbit\nsystem P3:gbit\n\
               prepare rhof(0,0,0,1,0,1,1,1) -> P1, P2, P3\n\
               measure fiducial(1) P1 -> a1\n\
               measure fiducial(1) P2 -> a2\n\
               measure fiducial(0) P3 -> a3\n\
               accept a1 xor a2 xor a3 == 1\n";
    let th = boxworld_theory(Mode::Exact);
    let circuit = validate(&parse(src).unwrap(), &th).unwrap();
    let dist = evaluate_closed(&circuit).unwrap();

    // Direct construction through the theories module.
    let f = TruthTable::new(3, vec![false, false, false, true, false, true, true, true]).unwrap();
    let state = rho_f(&f, Mode::Exact).unwrap();
    use crate::model::{AcceptExpr, CircuitBuilder, Device};
    let mut b = CircuitBuilder::new();
    let (_, wires) = b.prepare(Device::preparation("rho_f", vec![state]));
    for (j, &w) in wires.iter().enumerate() {
        let name = if j < 2 { "fiducial1" } else { "fiducial0" };
        let m = th.measurement("gbit", name).unwrap();
        b.measure(Device::measurement("m", m.effects.clone()), &[w]);
    }
    let direct = b.finish(AcceptExpr::Const(true));
    let want = evaluate_closed(&direct).unwrap();
    for (string, p) in want.iter() {
        assert_eq!(dist.prob(&string), p);
    }
    // Majority(1,1,0) = 1: all supported outcome strings have odd parity.
    for (string, p) in dist.iter() {
        if !p.is_zero() {
            assert_eq!(string[1] ^ string[2] ^ string[3], 1);
            assert_eq!(*p, Scalar::ratio(1, 4, Mode::Exact));
        }
    }
}

#[test]
fn aux_ports_are_ordered_as_declared() {
    let src = "theory boxworld\naux B:gbit\naux A:gbit\n\
               measure fiducial(0) A -> a\nmeasure fiducial(0) B -> b\naccept a == b";
    let th = boxworld_theory(Mode::Exact);
    let c = validate(&parse(src).unwrap(), &th).unwrap();
    assert_eq!(c.aux_wires.len(), 2);
    // First declared aux (B) is the first register factor.
    assert_eq!(c.aux_wires[0], 0);
}

#[test]
fn parse_ctor_accepts_rationals() {
    let c = parse_ctor("dist(1/3, 2/3)").unwrap();
    assert_eq!(c.name, "dist");
    assert_eq!(c.args, vec![Arg::Ratio(1, 3), Arg::Ratio(2, 3)]);
    assert!(parse_ctor("dist(1/3").is_err());
}
