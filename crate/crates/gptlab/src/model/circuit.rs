//! Devices and typed circuit DAGs.

use super::expr::AcceptExpr;
use super::{total_dim, GEffect, GTransform, GVector, ModelError, Result, SystemType};
use crate::scalar::{Mode, Scalar};

/// Outcome-indexed components of a laboratory device.
#[derive(Clone, Debug)]
pub enum DeviceKind {
    /// No input ports; one state per pointer position.
    Preparation(Vec<GVector>),
    /// Input and output ports; one linear map per pointer position.
    Transformation(Vec<GTransform>),
    /// No output ports; one effect per pointer position.
    Measurement(Vec<GEffect>),
}

/// A laboratory device: typed ports plus outcome-indexed components that all
/// share the same port types.
#[derive(Clone, Debug)]
pub struct Device {
    pub name: String,
    pub kind: DeviceKind,
}

impl Device {
    pub fn preparation(name: impl Into<String>, outcomes: Vec<GVector>) -> Self {
        assert!(!outcomes.is_empty(), "device needs at least one outcome");
        let sys = outcomes[0].systems.clone();
        assert!(
            outcomes.iter().all(|s| s.systems == sys),
            "all outcomes must share port types"
        );
        Device {
            name: name.into(),
            kind: DeviceKind::Preparation(outcomes),
        }
    }

    pub fn transformation(name: impl Into<String>, outcomes: Vec<GTransform>) -> Self {
        assert!(!outcomes.is_empty(), "device needs at least one outcome");
        let (i, o) = (
            outcomes[0].in_systems.clone(),
            outcomes[0].out_systems.clone(),
        );
        assert!(
            outcomes
                .iter()
                .all(|t| t.in_systems == i && t.out_systems == o),
            "all outcomes must share port types"
        );
        Device {
            name: name.into(),
            kind: DeviceKind::Transformation(outcomes),
        }
    }

    pub fn measurement(name: impl Into<String>, outcomes: Vec<GEffect>) -> Self {
        assert!(!outcomes.is_empty(), "device needs at least one outcome");
        let sys = outcomes[0].systems.clone();
        assert!(
            outcomes.iter().all(|e| e.systems == sys),
            "all outcomes must share port types"
        );
        Device {
            name: name.into(),
            kind: DeviceKind::Measurement(outcomes),
        }
    }

    pub fn n_outcomes(&self) -> usize {
        match &self.kind {
            DeviceKind::Preparation(v) => v.len(),
            DeviceKind::Transformation(v) => v.len(),
            DeviceKind::Measurement(v) => v.len(),
        }
    }

    pub fn in_systems(&self) -> &[SystemType] {
        match &self.kind {
            DeviceKind::Preparation(_) => &[],
            DeviceKind::Transformation(v) => &v[0].in_systems,
            DeviceKind::Measurement(v) => &v[0].systems,
        }
    }

    pub fn out_systems(&self) -> &[SystemType] {
        match &self.kind {
            DeviceKind::Preparation(v) => &v[0].systems,
            DeviceKind::Transformation(v) => &v[0].out_systems,
            DeviceKind::Measurement(_) => &[],
        }
    }

    pub fn mode(&self) -> Mode {
        match &self.kind {
            DeviceKind::Preparation(v) => v[0].mode(),
            DeviceKind::Transformation(v) => v[0].mode(),
            DeviceKind::Measurement(v) => v[0].mode(),
        }
    }

    /// The outcome component as a stacked linear map
    /// `in_dim -> n_outcomes * out_dim`, outcome index most significant.
    pub(crate) fn stacked_matrix(&self) -> (usize, usize, Vec<Scalar>) {
        let in_dim = total_dim(self.in_systems());
        let out_dim = total_dim(self.out_systems());
        let n = self.n_outcomes();
        let mut m = Vec::with_capacity(n * out_dim * in_dim);
        match &self.kind {
            DeviceKind::Preparation(v) => {
                for s in v {
                    m.extend(s.coords.iter().cloned());
                }
            }
            DeviceKind::Transformation(v) => {
                for t in v {
                    m.extend(t.matrix.iter().cloned());
                }
            }
            DeviceKind::Measurement(v) => {
                for e in v {
                    m.extend(e.coords.iter().cloned());
                }
            }
        }
        (n * out_dim, in_dim, m)
    }

    pub(crate) fn coarse_grained(&self, partition: &[Vec<usize>]) -> Result<Device> {
        fn sum_coords(items: &[Vec<Scalar>], cell: &[usize], mode: Mode) -> Vec<Scalar> {
            let len = items[cell[0]].len();
            let mut acc = vec![Scalar::zero(mode); len];
            for &i in cell {
                for (a, x) in acc.iter_mut().zip(&items[i]) {
                    *a = &*a + x;
                }
            }
            acc
        }
        let mode = self.mode();
        let name = format!("{}·cg", self.name);
        Ok(match &self.kind {
            DeviceKind::Preparation(v) => {
                let coords: Vec<Vec<Scalar>> = v.iter().map(|s| s.coords.clone()).collect();
                let sys = v[0].systems.clone();
                Device::preparation(
                    name,
                    partition
                        .iter()
                        .map(|cell| GVector::new(sys.clone(), sum_coords(&coords, cell, mode)))
                        .collect(),
                )
            }
            DeviceKind::Transformation(v) => {
                let mats: Vec<Vec<Scalar>> = v.iter().map(|t| t.matrix.clone()).collect();
                let (i, o) = (v[0].in_systems.clone(), v[0].out_systems.clone());
                Device::transformation(
                    name,
                    partition
                        .iter()
                        .map(|cell| {
                            GTransform::new(i.clone(), o.clone(), sum_coords(&mats, cell, mode))
                        })
                        .collect(),
                )
            }
            DeviceKind::Measurement(v) => {
                let coords: Vec<Vec<Scalar>> = v.iter().map(|e| e.coords.clone()).collect();
                let sys = v[0].systems.clone();
                Device::measurement(
                    name,
                    partition
                        .iter()
                        .map(|cell| GEffect::new(sys.clone(), sum_coords(&coords, cell, mode)))
                        .collect(),
                )
            }
        })
    }
}

/// A wire: one system instance, produced once and consumed at most once.
#[derive(Clone, Debug)]
pub struct Wire {
    pub ty: SystemType,
    pub source: WireSource,
    /// `(device index, input port index)`, or `None` for residual outputs.
    pub sink: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WireSource {
    /// `(device index, output port index)`.
    Device(usize, usize),
    /// Position in the auxiliary register (declaration order).
    Aux(usize),
}

/// Handle to a device's classical pointer, used in accept expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutcomeVar(pub usize);

/// A typed DAG of outcome-labelled devices with a designated auxiliary
/// register and an acceptance predicate over joint outcome strings.
#[derive(Clone, Debug)]
pub struct Circuit {
    pub devices: Vec<Device>,
    pub wires: Vec<Wire>,
    /// Wire indices fed by the auxiliary register, in declaration order.
    pub aux_wires: Vec<usize>,
    pub accept: AcceptExpr,
    pub post_select: Option<AcceptExpr>,
}

impl Circuit {
    pub fn aux_systems(&self) -> Vec<SystemType> {
        self.aux_wires
            .iter()
            .map(|&w| self.wires[w].ty.clone())
            .collect()
    }

    pub fn is_closed(&self) -> bool {
        self.aux_wires.is_empty() && self.wires.iter().all(|w| w.sink.is_some())
    }

    /// Residual output wires (unconsumed device outputs), in wire order.
    pub fn residual_wires(&self) -> Vec<usize> {
        (0..self.wires.len())
            .filter(|&w| self.wires[w].sink.is_none())
            .collect()
    }

    pub fn residual_systems(&self) -> Vec<SystemType> {
        self.residual_wires()
            .iter()
            .map(|&w| self.wires[w].ty.clone())
            .collect()
    }

    pub fn outcome_counts(&self) -> Vec<usize> {
        self.devices.iter().map(Device::n_outcomes).collect()
    }

    pub fn n_outcome_strings(&self) -> usize {
        self.devices.iter().map(|d| d.n_outcomes()).product()
    }

    pub fn mode(&self) -> Mode {
        self.devices.first().map_or(Mode::Exact, Device::mode)
    }

    /// Type-checks wiring and acyclicity; returns devices in a topological
    /// processing order.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let n = self.devices.len();
        // Verify port/wire consistency.
        for (di, dev) in self.devices.iter().enumerate() {
            let mut in_seen = vec![false; dev.in_systems().len()];
            let mut out_seen = vec![false; dev.out_systems().len()];
            for w in &self.wires {
                if let Some((d, p)) = w.sink {
                    if d == di {
                        if p >= in_seen.len() || in_seen[p] {
                            return Err(ModelError::Wiring(format!(
                                "device {} input port {p} multiply wired or out of range",
                                dev.name
                            )));
                        }
                        if w.ty != dev.in_systems()[p] {
                            return Err(ModelError::TypeMismatch {
                                expected: dev.in_systems()[p].name.clone(),
                                got: w.ty.name.clone(),
                            });
                        }
                        in_seen[p] = true;
                    }
                }
                if let WireSource::Device(d, p) = w.source {
                    if d == di {
                        if p >= out_seen.len() || out_seen[p] {
                            return Err(ModelError::Wiring(format!(
                                "device {} output port {p} multiply wired or out of range",
                                dev.name
                            )));
                        }
                        if w.ty != dev.out_systems()[p] {
                            return Err(ModelError::TypeMismatch {
                                expected: dev.out_systems()[p].name.clone(),
                                got: w.ty.name.clone(),
                            });
                        }
                        out_seen[p] = true;
                    }
                }
            }
            if !in_seen.iter().all(|&s| s) {
                return Err(ModelError::Wiring(format!(
                    "device {} has unconnected input ports",
                    dev.name
                )));
            }
            if !out_seen.iter().all(|&s| s) {
                return Err(ModelError::Wiring(format!(
                    "device {} has dangling output ports with no wire",
                    dev.name
                )));
            }
        }
        // Kahn's algorithm over device dependencies.
        let mut indeg = vec![0usize; n];
        let mut deps: Vec<Vec<usize>> = vec![Vec::new(); n];
        for w in &self.wires {
            if let (WireSource::Device(src, _), Some((dst, _))) = (&w.source, w.sink) {
                deps[*src].push(dst);
                indeg[dst] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(d) = queue.pop() {
            order.push(d);
            for &next in &deps[d] {
                indeg[next] -= 1;
                if indeg[next] == 0 {
                    queue.push(next);
                }
            }
        }
        if order.len() != n {
            return Err(ModelError::Wiring("cyclic wiring".into()));
        }
        Ok(order)
    }
}

/// Incremental circuit construction with wire handles.
pub struct CircuitBuilder {
    devices: Vec<Device>,
    wires: Vec<Wire>,
    aux_wires: Vec<usize>,
    post_select: Option<AcceptExpr>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        CircuitBuilder {
            devices: Vec::new(),
            wires: Vec::new(),
            aux_wires: Vec::new(),
            post_select: None,
        }
    }

    /// Declares an auxiliary input wire of the given type.
    pub fn aux(&mut self, ty: SystemType) -> usize {
        let idx = self.wires.len();
        let pos = self.aux_wires.len();
        self.wires.push(Wire {
            ty,
            source: WireSource::Aux(pos),
            sink: None,
        });
        self.aux_wires.push(idx);
        idx
    }

    fn push_device(&mut self, dev: Device, inputs: &[usize]) -> (OutcomeVar, Vec<usize>) {
        let di = self.devices.len();
        assert_eq!(inputs.len(), dev.in_systems().len(), "input arity mismatch");
        for (p, &w) in inputs.iter().enumerate() {
            assert!(self.wires[w].sink.is_none(), "wire already consumed");
            self.wires[w].sink = Some((di, p));
        }
        let mut outs = Vec::new();
        for (p, ty) in dev.out_systems().iter().enumerate() {
            let wi = self.wires.len();
            self.wires.push(Wire {
                ty: ty.clone(),
                source: WireSource::Device(di, p),
                sink: None,
            });
            outs.push(wi);
        }
        self.devices.push(dev);
        (OutcomeVar(di), outs)
    }

    pub fn prepare(&mut self, dev: Device) -> (OutcomeVar, Vec<usize>) {
        assert!(matches!(dev.kind, DeviceKind::Preparation(_)));
        self.push_device(dev, &[])
    }

    pub fn apply(&mut self, dev: Device, inputs: &[usize]) -> (OutcomeVar, Vec<usize>) {
        assert!(matches!(dev.kind, DeviceKind::Transformation(_)));
        self.push_device(dev, inputs)
    }

    pub fn measure(&mut self, dev: Device, inputs: &[usize]) -> OutcomeVar {
        assert!(matches!(dev.kind, DeviceKind::Measurement(_)));
        self.push_device(dev, inputs).0
    }

    pub fn post_select(&mut self, expr: AcceptExpr) {
        self.post_select = Some(expr);
    }

    pub fn finish(self, accept: AcceptExpr) -> Circuit {
        Circuit {
            devices: self.devices,
            wires: self.wires,
            aux_wires: self.aux_wires,
            accept,
            post_select: self.post_select,
        }
    }
}

impl Default for CircuitBuilder {
    fn default() -> Self {
        Self::new()
    }
}
