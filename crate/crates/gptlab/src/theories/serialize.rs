//! Theory (de)serialization: a JSON document with the system list and the
//! base type's states, effects, measurements, unit, generators and facets.
//! Exact-mode numbers travel as `p/q` strings.

use super::{MembershipTag, NamedGate, NamedMeasurement, SystemSpec, TheoryError, TheorySpec};
use crate::model::{GEffect, GTransform, GVector, SystemType};
use crate::scalar::{Mode, Scalar};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
struct SystemTypeJson {
    name: String,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct MeasurementJson {
    name: String,
    effects: Vec<Vec<Scalar>>,
}

#[derive(Serialize, Deserialize)]
struct GateJson {
    name: String,
    in_systems: Vec<String>,
    out_systems: Vec<String>,
    /// Row-major `out_dim × in_dim`.
    matrix: Vec<Vec<Scalar>>,
}

#[derive(Serialize, Deserialize)]
struct TheoryJson {
    name: String,
    mode: Mode,
    membership: MembershipTag,
    max_sites: usize,
    systems: Vec<SystemTypeJson>,
    states: Vec<Vec<Scalar>>,
    effects: Vec<Vec<Scalar>>,
    measurements: Vec<MeasurementJson>,
    unit: Vec<Scalar>,
    generators: Vec<GateJson>,
    facets: Vec<Vec<Scalar>>,
    gates: Vec<GateJson>,
}

fn gate_to_json(g: &NamedGate) -> GateJson {
    let cols = g.transform.in_dim();
    GateJson {
        name: g.name.clone(),
        in_systems: g
            .transform
            .in_systems
            .iter()
            .map(|s| s.name.clone())
            .collect(),
        out_systems: g
            .transform
            .out_systems
            .iter()
            .map(|s| s.name.clone())
            .collect(),
        matrix: g
            .transform
            .matrix
            .chunks(cols)
            .map(|r| r.to_vec())
            .collect(),
    }
}

pub fn theory_to_json(theory: &TheorySpec) -> Result<String, TheoryError> {
    if theory.systems.len() != 1 {
        return Err(TheoryError::Unsupported(
            "serialization covers theories with a single base system type".into(),
        ));
    }
    let spec = &theory.systems[0];
    let doc = TheoryJson {
        name: theory.name.clone(),
        mode: theory.mode,
        membership: theory.membership,
        max_sites: theory.max_sites,
        systems: vec![SystemTypeJson {
            name: spec.system.name.clone(),
            dim: spec.system.dim,
        }],
        states: spec.pure_states.iter().map(|s| s.coords.clone()).collect(),
        effects: spec
            .extremal_effects
            .iter()
            .map(|e| e.coords.clone())
            .collect(),
        measurements: spec
            .measurements
            .iter()
            .map(|m| MeasurementJson {
                name: m.name.clone(),
                effects: m.effects.iter().map(|e| e.coords.clone()).collect(),
            })
            .collect(),
        unit: spec.unit.coords.clone(),
        generators: spec.generators.iter().map(gate_to_json).collect(),
        facets: spec.facets.clone(),
        gates: theory.gates.iter().map(gate_to_json).collect(),
    };
    serde_json::to_string_pretty(&doc).map_err(|e| TheoryError::Invalid(e.to_string()))
}

pub fn theory_from_json(text: &str) -> Result<TheorySpec, TheoryError> {
    let doc: TheoryJson = serde_json::from_str(text)
        .map_err(|e| TheoryError::Invalid(format!("bad theory JSON: {e}")))?;
    if doc.systems.len() != 1 {
        return Err(TheoryError::Unsupported(
            "theory JSON must declare exactly one base system type".into(),
        ));
    }
    let sys = SystemType::new(doc.systems[0].name.clone(), doc.systems[0].dim);
    let mode = doc.mode;
    let fix = |coords: Vec<Scalar>| -> Vec<Scalar> {
        match mode {
            Mode::Exact => coords,
            Mode::Approx => coords.iter().map(|c| Scalar::Approx(c.to_f64())).collect(),
        }
    };
    let state = |coords: Vec<Scalar>| -> Result<GVector, TheoryError> {
        if coords.len() != sys.dim {
            return Err(TheoryError::Invalid(
                "state coordinate length mismatch".into(),
            ));
        }
        Ok(GVector::new(vec![sys.clone()], fix(coords)))
    };
    let effect = |coords: Vec<Scalar>| -> Result<GEffect, TheoryError> {
        if coords.len() != sys.dim {
            return Err(TheoryError::Invalid(
                "effect coordinate length mismatch".into(),
            ));
        }
        Ok(GEffect::new(vec![sys.clone()], fix(coords)))
    };
    let gate = |g: &GateJson| -> Result<NamedGate, TheoryError> {
        let resolve = |names: &[String]| -> Result<Vec<SystemType>, TheoryError> {
            names
                .iter()
                .map(|n| {
                    if *n == sys.name {
                        Ok(sys.clone())
                    } else {
                        Err(TheoryError::UnknownSystem(n.clone()))
                    }
                })
                .collect()
        };
        let in_systems = resolve(&g.in_systems)?;
        let out_systems = resolve(&g.out_systems)?;
        let rows: usize = out_systems.iter().map(|s| s.dim).product();
        let cols: usize = in_systems.iter().map(|s| s.dim).product();
        if g.matrix.len() != rows || g.matrix.iter().any(|r| r.len() != cols) {
            return Err(TheoryError::Invalid(format!(
                "gate {} matrix shape mismatch",
                g.name
            )));
        }
        let matrix: Vec<Scalar> = g.matrix.iter().flat_map(|r| r.iter().cloned()).collect();
        Ok(NamedGate {
            name: g.name.clone(),
            transform: GTransform::new(in_systems, out_systems, fix(matrix)),
        })
    };
    let spec = SystemSpec {
        system: sys.clone(),
        pure_states: doc
            .states
            .into_iter()
            .map(state)
            .collect::<Result<_, _>>()?,
        extremal_effects: doc
            .effects
            .into_iter()
            .map(effect)
            .collect::<Result<_, _>>()?,
        measurements: doc
            .measurements
            .into_iter()
            .map(|m| {
                Ok(NamedMeasurement {
                    name: m.name,
                    effects: m
                        .effects
                        .into_iter()
                        .map(effect)
                        .collect::<Result<_, _>>()?,
                })
            })
            .collect::<Result<_, TheoryError>>()?,
        unit: effect(doc.unit)?,
        generators: doc.generators.iter().map(gate).collect::<Result<_, _>>()?,
        facets: doc.facets.into_iter().map(fix).collect(),
    };
    Ok(TheorySpec {
        name: doc.name,
        mode,
        membership: doc.membership,
        max_sites: doc.max_sites,
        systems: vec![spec],
        gates: doc.gates.iter().map(gate).collect::<Result<_, _>>()?,
    })
}
