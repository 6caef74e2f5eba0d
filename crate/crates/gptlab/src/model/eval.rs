//! Closed-circuit evaluation and acceptance maps.
//!
//! Evaluation runs one contraction pass over the device DAG in topological
//! order. Each multi-outcome device contributes its stacked component map
//! `in -> (outcome register ⊗ out)`, so the classical pointer of every device
//! becomes an explicit output index and the full joint outcome table is
//! produced in a single pass. Circuits with an open auxiliary register are
//! contracted starting from the identity on the register, which yields the
//! linear map from the register instead of a number.

use super::circuit::{Circuit, Device, WireSource};
use super::distribution::OutcomeDistribution;
use super::{
    total_dim, GTransform, GVector, ModelError, Result, MAX_LIVE_ENTRIES, MAX_OUTCOME_STRINGS,
};
use crate::scalar::{Mode, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LiveId {
    Wire(usize),
    /// Classical pointer register of a device.
    Outcome(usize),
}

struct Frontier {
    ids: Vec<LiveId>,
    dims: Vec<usize>,
    /// Row-major `(∏ dims) × cols` matrix; `cols` is the auxiliary dimension.
    mat: Vec<Scalar>,
    cols: usize,
    mode: Mode,
}

impl Frontier {
    fn rows(&self) -> usize {
        self.dims.iter().product()
    }

    fn guard(&self) -> Result<()> {
        let entries = self.rows().checked_mul(self.cols).unwrap_or(usize::MAX);
        if entries > MAX_LIVE_ENTRIES {
            return Err(ModelError::GuardExceeded(format!(
                "intermediate contraction would hold {entries} entries (cap {MAX_LIVE_ENTRIES})"
            )));
        }
        Ok(())
    }

    /// Reorders tensor factors so that `front` (positions into the current
    /// factor list) comes first, in the given order.
    fn bring_to_front(&mut self, front: &[usize]) {
        if front.iter().enumerate().all(|(k, &p)| p == k) {
            return;
        }
        let n = self.dims.len();
        let mut perm: Vec<usize> = front.to_vec();
        for p in 0..n {
            if !front.contains(&p) {
                perm.push(p);
            }
        }
        let old_dims = self.dims.clone();
        let mut old_strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            old_strides[i] = old_strides[i + 1] * old_dims[i + 1];
        }
        let new_dims: Vec<usize> = perm.iter().map(|&p| old_dims[p]).collect();
        let new_ids: Vec<LiveId> = perm.iter().map(|&p| self.ids[p]).collect();
        let mut new_strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            new_strides[i] = new_strides[i + 1] * new_dims[i + 1];
        }
        let rows = self.rows();
        let mut out = vec![Scalar::zero(self.mode); self.mat.len()];
        for new_row in 0..rows {
            let mut r = new_row;
            let mut old_row = 0usize;
            for k in 0..n {
                let digit = r / new_strides[k];
                r %= new_strides[k];
                old_row += digit * old_strides[perm[k]];
            }
            out[new_row * self.cols..(new_row + 1) * self.cols]
                .clone_from_slice(&self.mat[old_row * self.cols..(old_row + 1) * self.cols]);
        }
        self.mat = out;
        self.dims = new_dims;
        self.ids = new_ids;
    }

    /// Applies `t` (`t_rows × front_dim`) to the leading factors whose
    /// dimensions multiply to `front_dim`, replacing them with `new_front`.
    fn apply_front(
        &mut self,
        t: &[Scalar],
        t_rows: usize,
        front_dim: usize,
        new_front: Vec<(LiveId, usize)>,
    ) -> Result<()> {
        let rows = self.rows();
        debug_assert_eq!(rows % front_dim.max(1), 0);
        let rest = if front_dim == 0 {
            rows
        } else {
            rows / front_dim
        };
        let cols = self.cols;
        let new_rows = t_rows * rest;
        if new_rows.checked_mul(cols).unwrap_or(usize::MAX) > MAX_LIVE_ENTRIES {
            return Err(ModelError::GuardExceeded(format!(
                "intermediate contraction would hold {} entries (cap {MAX_LIVE_ENTRIES})",
                new_rows * cols
            )));
        }
        let mut out = vec![Scalar::zero(self.mode); new_rows * cols];
        for o in 0..t_rows {
            for i in 0..front_dim {
                let coeff = &t[o * front_dim + i];
                if coeff.is_zero() {
                    continue;
                }
                for r in 0..rest {
                    let src = (i * rest + r) * cols;
                    let dst = (o * rest + r) * cols;
                    for c in 0..cols {
                        let x = &self.mat[src + c];
                        if !x.is_zero() {
                            out[dst + c] = &out[dst + c] + &(coeff * x);
                        }
                    }
                }
            }
        }
        // Drop the consumed leading factors, then prepend the new ones.
        let mut consumed = 0usize;
        let mut acc = 1usize;
        while acc < front_dim {
            acc *= self.dims[consumed];
            consumed += 1;
        }
        debug_assert_eq!(acc, front_dim.max(1));
        let mut ids: Vec<LiveId> = new_front.iter().map(|(id, _)| *id).collect();
        let mut dims: Vec<usize> = new_front.iter().map(|(_, d)| *d).collect();
        ids.extend_from_slice(&self.ids[consumed..]);
        dims.extend_from_slice(&self.dims[consumed..]);
        self.ids = ids;
        self.dims = dims;
        self.mat = out;
        Ok(())
    }
}

fn check_guards(c: &Circuit) -> Result<()> {
    let strings = c
        .devices
        .iter()
        .map(Device::n_outcomes)
        .try_fold(1usize, |acc, n| acc.checked_mul(n))
        .unwrap_or(usize::MAX);
    if strings > MAX_OUTCOME_STRINGS {
        return Err(ModelError::GuardExceeded(format!(
            "{strings} joint outcome strings (cap {MAX_OUTCOME_STRINGS})"
        )));
    }
    Ok(())
}

/// Runs the single contraction pass and returns the final matrix with rows
/// indexed by `(outcome string in device order, residual outputs)` and
/// columns by the auxiliary register.
fn contract(c: &Circuit) -> Result<Frontier> {
    check_guards(c)?;
    let order = c.topological_order()?;
    let mode = c.mode();
    let aux_dims: Vec<usize> = c.aux_wires.iter().map(|&w| c.wires[w].ty.dim).collect();
    let aux_dim: usize = aux_dims.iter().product();
    let mut fr = Frontier {
        ids: c.aux_wires.iter().map(|&w| LiveId::Wire(w)).collect(),
        dims: aux_dims,
        mat: identity_matrix(aux_dim, mode),
        cols: aux_dim,
        mode,
    };
    fr.guard()?;

    // Wire index lookup for device inputs: wire consumed by (device, port).
    let mut input_wire = vec![Vec::new(); c.devices.len()];
    for (wi, w) in c.wires.iter().enumerate() {
        if let Some((d, p)) = w.sink {
            if input_wire[d].len() <= p {
                input_wire[d].resize(p + 1, usize::MAX);
            }
            input_wire[d][p] = wi;
        }
    }
    let mut output_wire = vec![Vec::new(); c.devices.len()];
    for (wi, w) in c.wires.iter().enumerate() {
        if let WireSource::Device(d, p) = w.source {
            if output_wire[d].len() <= p {
                output_wire[d].resize(p + 1, usize::MAX);
            }
            output_wire[d][p] = wi;
        }
    }

    for &di in &order {
        let dev = &c.devices[di];
        let in_wires = &input_wire[di];
        // Locate input factors in the frontier.
        let front: Vec<usize> = in_wires
            .iter()
            .map(|&wi| {
                fr.ids
                    .iter()
                    .position(|id| *id == LiveId::Wire(wi))
                    .expect("input wire not live; topological order violated")
            })
            .collect();
        fr.bring_to_front(&front);
        let in_dim = total_dim(dev.in_systems());
        let (t_rows, t_cols, stacked) = dev.stacked_matrix();
        debug_assert_eq!(t_cols, in_dim);
        let mut new_front = vec![(LiveId::Outcome(di), dev.n_outcomes())];
        for (p, ty) in dev.out_systems().iter().enumerate() {
            new_front.push((LiveId::Wire(output_wire[di][p]), ty.dim));
        }
        fr.apply_front(&stacked, t_rows, in_dim, new_front)?;
    }

    // Canonical final order: outcome registers by device index, then residual
    // wires by wire index.
    let mut want: Vec<LiveId> = (0..c.devices.len()).map(LiveId::Outcome).collect();
    for wi in c.residual_wires() {
        want.push(LiveId::Wire(wi));
    }
    let front: Vec<usize> = want
        .iter()
        .map(|target| {
            fr.ids
                .iter()
                .position(|id| id == target)
                .expect("factor lost")
        })
        .collect();
    fr.bring_to_front(&front);
    Ok(fr)
}

fn identity_matrix(d: usize, mode: Mode) -> Vec<Scalar> {
    let mut m = vec![Scalar::zero(mode); d * d];
    for i in 0..d {
        m[i * d + i] = Scalar::one(mode);
    }
    m
}

/// Evaluates a closed circuit into its joint outcome distribution.
///
/// The distribution is indexed by outcome strings in device declaration
/// order, so it is invariant under topological reordering of the DAG.
pub fn evaluate_closed(c: &Circuit) -> Result<OutcomeDistribution> {
    if !c.aux_wires.is_empty() {
        return Err(ModelError::OpenPorts("auxiliary register is open".into()));
    }
    let residual = c.residual_wires();
    if !residual.is_empty() {
        return Err(ModelError::OpenPorts(format!(
            "{} residual output wire(s); contract them with effects first",
            residual.len()
        )));
    }
    let fr = contract(c)?;
    debug_assert_eq!(fr.cols, 1);
    Ok(OutcomeDistribution::new(c.outcome_counts(), fr.mat))
}

/// The acceptance map of a circuit with an open auxiliary register: the sum
/// over accepted outcome strings of the linear map from the register to the
/// (possibly trivial) residual output.
///
/// With `pad_square` the matrix is zero-padded on trailing rows/columns to
/// square shape.
pub fn accept_map(c: &Circuit, pad_square: bool) -> Result<GTransform> {
    if c.aux_wires.is_empty() {
        return Err(ModelError::NoAuxPorts);
    }
    let fr = contract(c)?;
    let radices = c.outcome_counts();
    let n_strings: usize = radices.iter().product();
    let res_dim: usize = fr.rows() / n_strings.max(1);
    let aux_dim = fr.cols;
    let mode = fr.mode;
    let mut m = vec![Scalar::zero(mode); res_dim * aux_dim];
    let mut string = vec![0usize; radices.len()];
    for z in 0..n_strings {
        decode_string(z, &radices, &mut string);
        if c.accept.accepts(&string) {
            for r in 0..res_dim {
                let src = (z * res_dim + r) * aux_dim;
                for a in 0..aux_dim {
                    let x = &fr.mat[src + a];
                    if !x.is_zero() {
                        m[r * aux_dim + a] = &m[r * aux_dim + a] + x;
                    }
                }
            }
        }
    }
    let out_systems = c.residual_systems();
    if !pad_square || res_dim == aux_dim {
        return Ok(GTransform::new(c.aux_systems(), out_systems, m));
    }
    let n = res_dim.max(aux_dim);
    let mut padded = vec![Scalar::zero(mode); n * n];
    for r in 0..res_dim {
        for a in 0..aux_dim {
            padded[r * n + a] = m[r * aux_dim + a].clone();
        }
    }
    // The padded map is reported on anonymous equal-size registers.
    let pad_sys = vec![super::SystemType::new("padded", n)];
    Ok(GTransform::new(pad_sys.clone(), pad_sys, padded))
}

pub(crate) fn decode_string(mut rank: usize, radices: &[usize], out: &mut [usize]) {
    for i in (0..radices.len()).rev() {
        out[i] = rank % radices[i];
        rank /= radices[i];
    }
}

/// Replaces the auxiliary register by a preparation of `aux`, turning an
/// aux-ported circuit into one with no open inputs.
pub fn plug_aux(c: &Circuit, aux: &GVector) -> Result<Circuit> {
    if c.aux_wires.is_empty() {
        return Err(ModelError::NoAuxPorts);
    }
    if aux.systems != c.aux_systems() {
        return Err(ModelError::TypeMismatch {
            expected: super::systems_label(&c.aux_systems()),
            got: super::systems_label(&aux.systems),
        });
    }
    let mut out = c.clone();
    let di = out.devices.len();
    out.devices
        .push(Device::preparation("aux-state", vec![aux.clone()]));
    for (port, &wi) in c.aux_wires.iter().enumerate() {
        out.wires[wi].source = WireSource::Device(di, port);
    }
    out.aux_wires.clear();
    Ok(out)
}

/// Probability that the circuit accepts when `aux` is plugged into the
/// auxiliary register. Any residual outputs must have been contracted first
/// (see `TheorySpec::close_residuals`).
pub fn accept_probability(c: &Circuit, aux: &GVector) -> Result<Scalar> {
    if !c.residual_wires().is_empty() {
        return Err(ModelError::OpenPorts(
            "circuit has residual outputs; close them with unit effects".into(),
        ));
    }
    let closed = plug_aux(c, aux)?;
    let dist = evaluate_closed(&closed)?;
    let mode = dist.mode();
    let mut total = Scalar::zero(mode);
    // The plugged preparation is the last device and has a single outcome, so
    // accept expressions over the original devices remain valid.
    for (string, p) in dist.iter() {
        if c.accept.accepts(&string) {
            total = &total + p;
        }
    }
    Ok(total)
}
