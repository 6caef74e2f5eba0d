//! Subcommand implementations and exit-code mapping.

use crate::output::{emit, to_json, Envelope, RunConfig};
use crate::{Command, Format, GlobalOpts};
use gptlab::dsl;
use gptlab::model::{evaluate_closed, plug_aux, post_select, Circuit};
use gptlab::principles;
use gptlab::protocols;
use gptlab::scalar::{Mode, Scalar};
use gptlab::theories::{self, TheoryError, TheorySpec, TruthTable};
use serde::Serialize;
use std::fmt::Write as _;

const EXIT_RUNTIME: i32 = 1;
const EXIT_PARSE: i32 = 2;
const EXIT_GUARD: i32 = 3;
const EXIT_VIOLATION: i32 = 4;

pub fn dispatch(global: &GlobalOpts, command: &Command) -> i32 {
    let mode: Mode = global.mode.into();
    let config = RunConfig {
        mode: mode.to_string(),
        seed: global.seed,
        tol: global.tol,
    };
    let result = match command {
        Command::Simulate { circuit, aux } => cmd_simulate(global, &config, mode, circuit, aux),
        Command::AdviceDemo { n, table } => cmd_advice_demo(global, &config, mode, *n, table),
        Command::GmaBound { circuits, d } => cmd_gma_bound(global, &config, mode, circuits, *d),
        Command::Verify { theory } => cmd_verify(global, &config, mode, theory),
        Command::Unbias { p, pairs } => cmd_unbias(global, &config, mode, p, *pairs),
        Command::Distill { family, t_max } => cmd_distill(global, &config, mode, family, *t_max),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Dsl(dsl::DslError),
    Theory(TheoryError),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "{m}"),
            CliError::Dsl(e) => write!(f, "{e}"),
            CliError::Theory(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<dsl::DslError> for CliError {
    fn from(e: dsl::DslError) -> Self {
        CliError::Dsl(e)
    }
}

impl From<TheoryError> for CliError {
    fn from(e: TheoryError) -> Self {
        CliError::Theory(e)
    }
}

impl From<gptlab::model::ModelError> for CliError {
    fn from(e: gptlab::model::ModelError) -> Self {
        CliError::Theory(TheoryError::Model(e))
    }
}

fn exit_code_for(err: &CliError) -> i32 {
    match err {
        CliError::Dsl(_) | CliError::Usage(_) => EXIT_PARSE,
        CliError::Theory(TheoryError::Guard(_)) => EXIT_GUARD,
        CliError::Theory(TheoryError::Model(gptlab::model::ModelError::GuardExceeded(_))) => {
            EXIT_GUARD
        }
        CliError::Theory(TheoryError::UnknownTheory(_))
        | CliError::Theory(TheoryError::UnknownSystem(_))
        | CliError::Theory(TheoryError::UnknownGate(_))
        | CliError::Theory(TheoryError::UnknownMeasurement(_))
        | CliError::Theory(TheoryError::UnknownState(_)) => EXIT_PARSE,
        CliError::Io(_) => EXIT_PARSE,
        _ => EXIT_RUNTIME,
    }
}

fn load_circuit(
    path: &std::path::Path,
    mode: Mode,
) -> Result<(TheorySpec, Circuit, Vec<(String, usize)>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let ast = dsl::parse(&text)?;
    let theory = theories::builtin_theory(&ast.theory, mode)?;
    let (circuit, bindings) = dsl::validate_with_bindings(&ast, &theory)?;
    Ok((theory, circuit, bindings))
}

#[derive(Serialize)]
struct OutcomeRow {
    outcomes: String,
    probability: Scalar,
}

#[derive(Serialize)]
struct SimulateReport {
    theory: String,
    variables: Vec<String>,
    distribution: Vec<OutcomeRow>,
    accept_probability: Scalar,
    post_selection: Option<PostSelectionPart>,
}

#[derive(Serialize)]
struct PostSelectionPart {
    p_selected: Scalar,
    conditional_accept: Scalar,
}

fn cmd_simulate(
    global: &GlobalOpts,
    config: &RunConfig,
    mode: Mode,
    path: &std::path::Path,
    aux: &Option<String>,
) -> Result<i32, CliError> {
    let (theory, circuit, bindings) = load_circuit(path, mode)?;
    let closed = if circuit.aux_wires.is_empty() {
        theory.close_residuals(&circuit)?
    } else {
        let spec = aux.as_ref().ok_or_else(|| {
            CliError::Usage("the circuit has auxiliary ports; pass --aux <ctor>".into())
        })?;
        let ctor = dsl::parse_ctor(spec)?;
        let state = dsl::resolve_state(&theory, &ctor, &circuit.aux_systems(), 0)?;
        let plugged = plug_aux(&circuit, &state)?;
        theory.close_residuals(&plugged)?
    };
    let dist = evaluate_closed(&closed)?;
    let var_devices: Vec<usize> = bindings.iter().map(|(_, d)| *d).collect();
    let rows: Vec<OutcomeRow> = dist
        .iter()
        .filter(|(_, p)| !p.is_zero() || dist.len() <= 64)
        .map(|(string, p)| OutcomeRow {
            outcomes: var_devices
                .iter()
                .map(|&d| string[d].to_string())
                .collect::<Vec<_>>()
                .join(""),
            probability: p.clone(),
        })
        .collect();
    let mut accept = Scalar::zero(mode);
    for (string, p) in dist.iter() {
        if circuit.accept.accepts(&string) {
            accept = &accept + p;
        }
    }
    let post_selection = match &circuit.post_select {
        None => None,
        Some(ps) => {
            let (cond, p_s) = post_select(&dist, |z| ps.accepts(z))?;
            let mut cond_accept = Scalar::zero(mode);
            for (string, p) in cond.iter() {
                if circuit.accept.accepts(&string) {
                    cond_accept = &cond_accept + p;
                }
            }
            Some(PostSelectionPart {
                p_selected: p_s,
                conditional_accept: cond_accept,
            })
        }
    };
    let report = SimulateReport {
        theory: theory.name.clone(),
        variables: bindings.iter().map(|(n, _)| n.clone()).collect(),
        distribution: rows,
        accept_probability: accept,
        post_selection,
    };
    let text = match global.format {
        Format::Json => to_json(&Envelope {
            command: "simulate".into(),
            config: config.clone(),
            report,
        }),
        Format::Tsv => {
            let mut s = String::from("outcomes\tprobability\n");
            for r in &report.distribution {
                writeln!(s, "{}\t{}", r.outcomes, r.probability).unwrap();
            }
            writeln!(s, "accept\t{}", report.accept_probability).unwrap();
            s
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "theory: {}", report.theory).unwrap();
            writeln!(s, "outcomes ({}):", report.variables.join("")).unwrap();
            for r in &report.distribution {
                writeln!(s, "  {}  {}", r.outcomes, r.probability).unwrap();
            }
            writeln!(s, "accept probability: {}", report.accept_probability).unwrap();
            if let Some(ps) = &report.post_selection {
                writeln!(s, "post-selection: p = {}", ps.p_selected).unwrap();
                writeln!(s, "conditional accept: {}", ps.conditional_accept).unwrap();
            }
            s
        }
    };
    Ok(emit(&text, &global.out))
}

#[derive(Serialize)]
struct AdviceDemoReport {
    n: usize,
    truth_table: String,
    rows: Vec<AdviceRow>,
    matches: usize,
    total: usize,
    exact_match: bool,
}

#[derive(Serialize)]
struct AdviceRow {
    input: String,
    evaluated: u8,
    expected: u8,
}

fn cmd_advice_demo(
    global: &GlobalOpts,
    config: &RunConfig,
    mode: Mode,
    n: usize,
    table: &Option<String>,
) -> Result<i32, CliError> {
    if n == 0 || n > 12 {
        return Err(CliError::Theory(TheoryError::Guard(
            "advice-demo supports 1..=12 input bits".into(),
        )));
    }
    let f = match table {
        Some(bits) => {
            if bits.len() != 1 << n || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(CliError::Usage(format!(
                    "--table needs {} bits of 0/1",
                    1usize << n
                )));
            }
            TruthTable::new(n, bits.chars().map(|c| c == '1').collect())?
        }
        None => TruthTable::random_seeded(n, global.seed),
    };
    let theory = theories::boxworld_theory(mode);
    let results = gptlab::par::indexed_map(1usize << n, |x| {
        let bits: Vec<bool> = (0..n).map(|j| (x >> (n - 1 - j)) & 1 == 1).collect();
        protocols::advice_parity_eval(&theory, &f, &bits).map(|got| (x, got))
    });
    let mut rows = Vec::with_capacity(1 << n);
    let mut matches = 0usize;
    for r in results {
        let (x, got) = r?;
        let expected = f.eval_index(x);
        if got == expected {
            matches += 1;
        }
        rows.push(AdviceRow {
            input: format!("{:0width$b}", x, width = n),
            evaluated: got as u8,
            expected: expected as u8,
        });
    }
    let total = rows.len();
    let report = AdviceDemoReport {
        n,
        truth_table: f
            .bits()
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect(),
        rows,
        matches,
        total,
        exact_match: matches == total,
    };
    let ok = report.exact_match;
    let text = match global.format {
        Format::Json => to_json(&Envelope {
            command: "advice-demo".into(),
            config: config.clone(),
            report,
        }),
        Format::Tsv => {
            let mut s = String::from("input\tevaluated\texpected\n");
            for r in &report.rows {
                writeln!(s, "{}\t{}\t{}", r.input, r.evaluated, r.expected).unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "f (truth table, input 0 first): {}", report.truth_table).unwrap();
            for r in &report.rows {
                writeln!(
                    s,
                    "  f({}) -> {} (expected {})",
                    r.input, r.evaluated, r.expected
                )
                .unwrap();
            }
            writeln!(
                s,
                "{}/{} match{}",
                report.matches,
                report.total,
                if report.exact_match { " — exact" } else { "" }
            )
            .unwrap();
            s
        }
    };
    let code = emit(&text, &global.out);
    Ok(if ok { code } else { EXIT_RUNTIME })
}

fn cmd_gma_bound(
    global: &GlobalOpts,
    config: &RunConfig,
    mode: Mode,
    paths: &[std::path::PathBuf],
    d_override: Option<u32>,
) -> Result<i32, CliError> {
    if paths.is_empty() {
        return Err(CliError::Usage(
            "gma-bound needs at least one circuit file".into(),
        ));
    }
    if mode != Mode::Exact {
        return Err(CliError::Theory(TheoryError::Unsupported(
            "gma-bound runs in exact mode".into(),
        )));
    }
    let mut reports = Vec::new();
    let mut violation = false;
    for path in paths {
        let (theory, circuit, _) = load_circuit(path, mode)?;
        if circuit.aux_wires.is_empty() {
            return Err(CliError::Usage(format!(
                "{}: the circuit has no auxiliary register",
                path.display()
            )));
        }
        let n = circuit.aux_wires.len();
        let d = d_override.unwrap_or_else(|| protocols::default_d_rule(n));
        if !protocols::d_rule_satisfies_growth(n, d) {
            return Err(CliError::Usage(format!(
                "{}: d = {d} violates 2^(n+1) <= 4^d at n = {n}",
                path.display()
            )));
        }
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let report = protocols::circuit_bound_report(
            &theory,
            &circuit,
            &label,
            n,
            d,
            &Scalar::ratio(1, 3, mode),
        )?;
        if report.classification == protocols::Classification::Violation || !report.bound_holds {
            violation = true;
        }
        reports.push(report);
    }
    let text = match global.format {
        Format::Json => to_json(&Envelope {
            command: "gma-bound".into(),
            config: config.clone(),
            report: &reports,
        }),
        Format::Tsv => {
            let mut s =
                String::from("circuit\tn\td\tsigma_max\tmax_accept\tgap_trace\tclassification\n");
            for r in &reports {
                writeln!(
                    s,
                    "{}\t{}\t{}\t{:.9}\t{:.9}\t{}\t{:?}",
                    r.input, r.n, r.d, r.sigma_max, r.max_accept, r.gap_trace, r.classification
                )
                .unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                writeln!(
                    s,
                    "{}: n={} d={} sigma_max={:.9} max_accept={:.9} f={} -> {:?}",
                    r.input, r.n, r.d, r.sigma_max, r.max_accept, r.gap_trace, r.classification
                )
                .unwrap();
                if let Some(chain) = &r.reject_chain {
                    writeln!(
                        s,
                        "  reject chain: f<=2^n*sigma^2d {}, sigma<=1/3 {}, growth {}",
                        chain.f_le_2n_sigma, chain.sigma_le_beta, chain.growth_arithmetic
                    )
                    .unwrap();
                }
            }
            s
        }
    };
    let code = emit(&text, &global.out);
    Ok(if violation { EXIT_VIOLATION } else { code })
}

#[derive(Serialize)]
struct VerifyReport {
    theory: String,
    causality: Vec<principles::CausalityReport>,
    tomographic_locality: principles::TomographicReport,
    completely_mixed: principles::MixedStateReport,
    distinguishability: String,
    bit_symmetry: BitSymmetryReport,
}

#[derive(Serialize)]
struct BitSymmetryReport {
    pairs_checked: usize,
    witnessed: usize,
    refuted: usize,
    inconclusive: usize,
    verdict: String,
}

fn cmd_verify(
    global: &GlobalOpts,
    config: &RunConfig,
    mode: Mode,
    theory_arg: &str,
) -> Result<i32, CliError> {
    if mode != Mode::Exact {
        return Err(CliError::Theory(TheoryError::Unsupported(
            "verify runs in exact mode".into(),
        )));
    }
    let theory = if std::path::Path::new(theory_arg).exists() {
        let text = std::fs::read_to_string(theory_arg)
            .map_err(|e| CliError::Io(format!("cannot read {theory_arg}: {e}")))?;
        theories::theory_from_json(&text)?
    } else {
        theories::builtin_theory(theory_arg, mode)?
    };
    let base = theory.base_system().system.name.clone();
    let causality = principles::check_causality(&theory);
    let tomographic = principles::check_tomographic_locality(&theory, &base, &base)?;
    let (_, mixed) = principles::completely_mixed(&theory, &base)?;

    // Distinguishability demo on the first two pure states.
    let pures = theory.base_system().pure_states.clone();
    let distinguishability = if pures.len() >= 2 {
        match principles::find_distinguishing_measurement(&theory, &pures[0..2])? {
            principles::Distinguishability::Found(_) => "found".to_string(),
            principles::Distinguishability::Infeasible { .. } => "infeasible".to_string(),
        }
    } else {
        "skipped".to_string()
    };

    // Bit-symmetry sweep: every ordered pair of perfectly distinguishable
    // pure 2-tuples must be related by a reversible transformation.
    let mut tuples = Vec::new();
    for i in 0..pures.len() {
        for j in 0..pures.len() {
            if i == j {
                continue;
            }
            let pair = [pures[i].clone(), pures[j].clone()];
            if matches!(
                principles::find_distinguishing_measurement(&theory, &pair)?,
                principles::Distinguishability::Found(_)
            ) {
                tuples.push(pair);
            }
        }
    }
    let mut witnessed = 0usize;
    let mut refuted = 0usize;
    let mut inconclusive = 0usize;
    let depth = 6;
    let mut pairs_checked = 0usize;
    for a in &tuples {
        for b in &tuples {
            pairs_checked += 1;
            match principles::search_symmetry(&theory, a, b, depth)? {
                principles::SymmetrySearch::Found { .. } => witnessed += 1,
                principles::SymmetrySearch::NotFound { depth: reached, .. } => {
                    if reached < depth {
                        refuted += 1; // group exhausted below the bound
                    } else {
                        inconclusive += 1;
                    }
                }
            }
        }
    }
    let verdict = if refuted > 0 {
        "refuted".to_string()
    } else if inconclusive > 0 {
        "inconclusive".to_string()
    } else {
        "witnessed".to_string()
    };
    let report = VerifyReport {
        theory: theory.name.clone(),
        causality,
        tomographic_locality: tomographic,
        completely_mixed: mixed,
        distinguishability,
        bit_symmetry: BitSymmetryReport {
            pairs_checked,
            witnessed,
            refuted,
            inconclusive,
            verdict,
        },
    };
    let text = match global.format {
        Format::Json => to_json(&Envelope {
            command: "verify".into(),
            config: config.clone(),
            report: &report,
        }),
        _ => {
            let mut s = String::new();
            writeln!(s, "theory: {}", report.theory).unwrap();
            for c in &report.causality {
                writeln!(s, "causality[{}]: {:?}", c.system, c.verdict).unwrap();
            }
            writeln!(
                s,
                "tomographic locality: {:?} (state rank {}, effect rank {}, expected {})",
                report.tomographic_locality.verdict,
                report.tomographic_locality.state_rank,
                report.tomographic_locality.effect_rank,
                report.tomographic_locality.expected
            )
            .unwrap();
            writeln!(s, "completely mixed: {:?}", report.completely_mixed.verdict).unwrap();
            writeln!(
                s,
                "distinguishability (first pair): {}",
                report.distinguishability
            )
            .unwrap();
            writeln!(
                s,
                "bit symmetry: {} ({} witnessed, {} refuted, {} inconclusive of {})",
                report.bit_symmetry.verdict,
                report.bit_symmetry.witnessed,
                report.bit_symmetry.refuted,
                report.bit_symmetry.inconclusive,
                report.bit_symmetry.pairs_checked
            )
            .unwrap();
            s
        }
    };
    Ok(emit(&text, &global.out))
}

fn parse_probability(text: &str, mode: Mode) -> Result<Scalar, CliError> {
    Scalar::parse_lenient(text, mode)
        .map_err(|e| CliError::Usage(format!("cannot parse probability: {e}")))
}

fn cmd_unbias(
    global: &GlobalOpts,
    config: &RunConfig,
    mode: Mode,
    p_text: &str,
    pairs: usize,
) -> Result<i32, CliError> {
    let p = parse_probability(p_text, mode)?;
    let pf = p.to_f64();
    if !(pf > 0.0 && pf < 1.0) {
        return Err(CliError::Usage(
            "p must lie strictly between 0 and 1".into(),
        ));
    }
    // A gbit state with (0_0|y) = p: coordinates (1, 2p−1, 0).
    let two_p_minus_one = &(&p + &p) - &Scalar::one(mode);
    let y = gptlab::model::GVector::new(
        vec![theories::gbit_system()],
        vec![Scalar::one(mode), two_p_minus_one, Scalar::zero(mode)],
    );
    let e0 = theories::gbit_effect(0, 0, mode);
    let (_, report) = protocols::von_neumann_bit(&y, &e0, pairs, global.seed)?;
    let text = match global.format {
        Format::Json => to_json(&Envelope {
            command: "unbias".into(),
            config: config.clone(),
            report: &report,
        }),
        _ => {
            let mut s = String::new();
            writeln!(s, "p = {}, pairs = {}", report.p, report.pairs).unwrap();
            writeln!(
                s,
                "kept {} (rate {:.6}, expected {:.6})",
                report.kept, report.keep_rate, report.expected_keep_rate
            )
            .unwrap();
            writeln!(s, "P(1) = {:.6}", report.p_hat_one).unwrap();
            s
        }
    };
    Ok(emit(&text, &global.out))
}

fn cmd_distill(
    global: &GlobalOpts,
    config: &RunConfig,
    mode: Mode,
    family: &str,
    t_max: usize,
) -> Result<i32, CliError> {
    if mode != Mode::Exact {
        return Err(CliError::Theory(TheoryError::Unsupported(
            "distill runs in exact mode".into(),
        )));
    }
    let theory = theories::quantum_theory(1, mode)?;
    let circuits = match family {
        "plus" => protocols::toy_plus_family(&theory)?,
        "contradictory" => protocols::toy_contradictory_family(&theory)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown family `{other}` (expected `plus` or `contradictory`)"
            )))
        }
    };
    let alpha = Scalar::ratio(2, 3, mode);
    let result = protocols::advice_distillation(&theory, &circuits, &alpha, t_max)?;
    let text = match global.format {
        Format::Json => to_json(&Envelope {
            command: "distill".into(),
            config: config.clone(),
            report: &result,
        }),
        _ => {
            let mut s = String::new();
            for (i, step) in result.steps.iter().enumerate() {
                writeln!(
                    s,
                    "iteration {i}: input {} accepted with {}; post-selected",
                    step.input, step.pre_accept
                )
                .unwrap();
            }
            writeln!(
                s,
                "{} after {} iteration(s); final accepts: {}",
                if result.complete {
                    "complete"
                } else {
                    "incomplete"
                },
                result.steps.len(),
                result
                    .final_accepts
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
            .unwrap();
            s
        }
    };
    Ok(emit(&text, &global.out))
}
