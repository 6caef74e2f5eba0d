//! Quantum theory in a real transfer (Pauli) representation.
//!
//! An `m`-qubit state is the real vector of expectation values
//! `c_P = Tr(P ρ)` over the 4^m Pauli strings `P` (identity first, base-4
//! digits I,X,Y,Z per qubit, first qubit most significant), so `c_I = 1` for
//! normalised states and the completely mixed state is `(1, 0, …, 0)`.
//! Effects carry dual coordinates `d_P` with `(e|ρ) = Σ_P d_P c_P`, i.e.
//! `E = Σ_P d_P P`. Composition is the plain tensor product of coordinate
//! vectors, so tomographic locality holds by construction.

use super::{MembershipTag, NamedGate, NamedMeasurement, SystemSpec, TheoryError, TheorySpec};
use crate::model::{GEffect, GTransform, GVector, SystemType};
use crate::scalar::{Mode, Scalar};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// A complex number with exact rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct CRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRat {
    pub fn zero() -> Self {
        CRat {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        CRat {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        CRat {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn real(r: BigRational) -> Self {
        CRat {
            re: r,
            im: BigRational::zero(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        CRat {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn conj(&self) -> Self {
        CRat {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn add(&self, o: &CRat) -> CRat {
        CRat {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn mul(&self, o: &CRat) -> CRat {
        CRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

/// Dense complex-rational square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub dim: usize,
    pub data: Vec<CRat>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![CRat::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = CRat::one();
        }
        m
    }

    pub fn from_ints(dim: usize, entries: &[(i64, i64)]) -> Self {
        assert_eq!(entries.len(), dim * dim);
        CMatrix {
            dim,
            data: entries
                .iter()
                .map(|&(re, im)| CRat::from_ints(re, im))
                .collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &CRat {
        &self.data[i * self.dim + j]
    }

    pub fn mul(&self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, o.dim);
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let y = o.get(k, j);
                    if y.is_zero() {
                        continue;
                    }
                    out.data[i * d + j] = out.data[i * d + j].add(&x.mul(y));
                }
            }
        }
        out
    }

    pub fn add(&self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, o.dim);
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|c| CRat {
                    re: &c.re * s,
                    im: &c.im * s,
                })
                .collect(),
        }
    }

    pub fn dagger(&self) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn trace(&self) -> CRat {
        let mut t = CRat::zero();
        for i in 0..self.dim {
            t = t.add(self.get(i, i));
        }
        t
    }

    pub fn kron(&self, o: &CMatrix) -> CMatrix {
        let (a, b) = (self.dim, o.dim);
        let d = a * b;
        let mut out = CMatrix::zeros(d);
        for i1 in 0..a {
            for j1 in 0..a {
                let x = self.get(i1, j1);
                if x.is_zero() {
                    continue;
                }
                for i2 in 0..b {
                    for j2 in 0..b {
                        let y = o.get(i2, j2);
                        if !y.is_zero() {
                            out.data[(i1 * b + i2) * d + (j1 * b + j2)] = x.mul(y);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.dagger()
    }

    pub fn to_f64_parts(&self) -> (Vec<f64>, Vec<f64>) {
        use num::ToPrimitive;
        let re = self.data.iter().map(|c| c.re.to_f64().unwrap()).collect();
        let im = self.data.iter().map(|c| c.im.to_f64().unwrap()).collect();
        (re, im)
    }
}

/// Single-qubit Pauli matrices, indexed 0..4 as I, X, Y, Z.
pub fn pauli(idx: usize) -> CMatrix {
    match idx {
        0 => CMatrix::from_ints(2, &[(1, 0), (0, 0), (0, 0), (1, 0)]),
        1 => CMatrix::from_ints(2, &[(0, 0), (1, 0), (1, 0), (0, 0)]),
        2 => CMatrix::from_ints(2, &[(0, 0), (0, -1), (0, 1), (0, 0)]),
        3 => CMatrix::from_ints(2, &[(1, 0), (0, 0), (0, 0), (-1, 0)]),
        _ => panic!("pauli index out of range"),
    }
}

/// The Pauli string for coordinate index `p` on `m` qubits.
pub fn pauli_string(p: usize, m: usize) -> CMatrix {
    let mut digits = Vec::with_capacity(m);
    let mut r = p;
    for _ in 0..m {
        digits.push(r % 4);
        r /= 4;
    }
    digits.reverse();
    let mut out = pauli(digits[0]);
    for &d in &digits[1..] {
        out = out.kron(&pauli(d));
    }
    out
}

/// Number of qubits for a 4^m coordinate dimension.
pub fn qubits_of_dim(dim: usize) -> Option<usize> {
    let mut m = 0;
    let mut d = 1;
    while d < dim {
        d *= 4;
        m += 1;
    }
    (d == dim).then_some(m)
}

pub fn qubit_system() -> SystemType {
    SystemType::new("qubit", 4)
}

/// Embeds an exact density (or any Hermitian) matrix into Pauli coordinates.
pub fn embed(rho: &CMatrix, mode: Mode) -> Result<GVector, TheoryError> {
    if !rho.is_hermitian() {
        return Err(TheoryError::Invalid(
            "embed: matrix is not Hermitian".into(),
        ));
    }
    let m = (rho.dim as f64).log2().round() as usize;
    if 1 << m != rho.dim {
        return Err(TheoryError::Invalid(
            "embed: dimension is not a power of two".into(),
        ));
    }
    let n_coords = 1usize << (2 * m);
    let mut coords = Vec::with_capacity(n_coords);
    for p in 0..n_coords {
        let t = pauli_string(p, m).mul(rho).trace();
        debug_assert!(t.im.is_zero());
        coords.push(match mode {
            Mode::Exact => Scalar::Exact(t.re),
            Mode::Approx => {
                use num::ToPrimitive;
                Scalar::Approx(t.re.to_f64().unwrap())
            }
        });
    }
    Ok(GVector::new(vec![qubit_system(); m], coords))
}

/// Reconstructs the density matrix `2^{-m} Σ_P c_P P` from state coordinates.
/// Exact mode only.
pub fn extract_state(v: &GVector) -> Result<CMatrix, TheoryError> {
    let m = qubits_of_dim(v.dim())
        .ok_or_else(|| TheoryError::Invalid("state dimension is not 4^m".into()))?;
    let d = 1usize << m;
    let mut rho = CMatrix::zeros(d);
    for (p, c) in v.coords.iter().enumerate() {
        let r = c
            .as_rational()
            .ok_or_else(|| TheoryError::Invalid("exact mode required".into()))?;
        if r.is_zero() {
            continue;
        }
        rho = rho.add(&pauli_string(p, m).scale(r));
    }
    let half_m = BigRational::new(BigInt::one(), BigInt::from(d));
    Ok(rho.scale(&half_m))
}

/// Reconstructs the effect matrix `Σ_P d_P P` from effect coordinates.
/// Exact mode only.
pub fn extract_effect(e: &GEffect) -> Result<CMatrix, TheoryError> {
    let m = qubits_of_dim(e.dim())
        .ok_or_else(|| TheoryError::Invalid("effect dimension is not 4^m".into()))?;
    let d = 1usize << m;
    let mut out = CMatrix::zeros(d);
    for (p, c) in e.coords.iter().enumerate() {
        let r = c
            .as_rational()
            .ok_or_else(|| TheoryError::Invalid("exact mode required".into()))?;
        if r.is_zero() {
            continue;
        }
        out = out.add(&pauli_string(p, m).scale(r));
    }
    Ok(out)
}

/// Effect coordinates `d_P = 2^{-m} Tr(P E)` of an exact effect matrix.
pub fn effect_from_matrix(e: &CMatrix, mode: Mode) -> Result<GEffect, TheoryError> {
    let v = embed(e, Mode::Exact)?;
    let m = qubits_of_dim(v.dim()).unwrap();
    let scale = Scalar::ratio(1, 1 << m, Mode::Exact);
    let coords: Vec<Scalar> = v
        .coords
        .iter()
        .map(|c| {
            let x = c * &scale;
            match mode {
                Mode::Exact => x,
                Mode::Approx => Scalar::Approx(x.to_f64()),
            }
        })
        .collect();
    Ok(GEffect::new(vec![qubit_system(); m], coords))
}

/// Exact PSD test for a Hermitian rational matrix, via symmetric elimination
/// on the realified block form.
pub fn is_psd_exact(h: &CMatrix) -> Result<bool, TheoryError> {
    if !h.is_hermitian() {
        return Ok(false);
    }
    let d = h.dim;
    let n = 2 * d;
    // Realify: [[Re, -Im], [Im, Re]] is symmetric with the same definiteness.
    let mut a = vec![BigRational::zero(); n * n];
    for i in 0..d {
        for j in 0..d {
            let c = h.get(i, j);
            a[i * n + j] = c.re.clone();
            a[i * n + (d + j)] = -&c.im;
            a[(d + i) * n + j] = c.im.clone();
            a[(d + i) * n + (d + j)] = c.re.clone();
        }
    }
    // Symmetric Gaussian elimination: PSD iff every pivot is nonnegative and
    // any zero diagonal has an all-zero row.
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(pos) = {
        let p = active.iter().position(|&i| a[i * n + i].is_positive());
        p
    } {
        let piv = active.remove(pos);
        let pval = a[piv * n + piv].clone();
        let others = active.clone();
        for &i in &others {
            let f = &a[i * n + piv] / &pval;
            if f.is_zero() {
                continue;
            }
            for &j in &others {
                let delta = &f * &a[piv * n + j];
                a[i * n + j] = &a[i * n + j] - &delta;
            }
            a[i * n + piv] = BigRational::zero();
            a[piv * n + i] = BigRational::zero();
        }
    }
    // Remaining active rows have nonpositive diagonals.
    for &i in &active {
        if a[i * n + i].is_negative() {
            return Ok(false);
        }
        // Zero diagonal: the whole remaining row must vanish.
        for &j in &active {
            if !a[i * n + j].is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn exact(p: i64, q: i64) -> Scalar {
    Scalar::ratio(p, q, Mode::Exact)
}

fn coords_mode(coords: Vec<Scalar>, mode: Mode) -> Vec<Scalar> {
    match mode {
        Mode::Exact => coords,
        Mode::Approx => coords.iter().map(|c| Scalar::Approx(c.to_f64())).collect(),
    }
}

fn qubit_state(coords: [i64; 4], den: i64, mode: Mode) -> GVector {
    GVector::new(
        vec![qubit_system()],
        coords_mode(coords.iter().map(|&c| exact(c, den)).collect(), mode),
    )
}

fn qubit_effect(coords: [i64; 4], den: i64, mode: Mode) -> GEffect {
    GEffect::new(
        vec![qubit_system()],
        coords_mode(coords.iter().map(|&c| exact(c, den)).collect(), mode),
    )
}

fn ptm_from_rows(rows: &[[i64; 4]], mode: Mode) -> GTransform {
    let matrix: Vec<Scalar> = rows
        .iter()
        .flat_map(|r| r.iter().map(|&x| Scalar::from_int(x, Mode::Exact)))
        .collect();
    GTransform::new(
        vec![qubit_system()],
        vec![qubit_system()],
        coords_mode(matrix, mode),
    )
}

/// Transfer matrix of conjugation by an exact-entry unitary:
/// `T[P][Q] = 2^{-m} Tr(P U Q U†)`.
pub fn ptm_of_unitary(u: &CMatrix, mode: Mode) -> Result<GTransform, TheoryError> {
    let m = (u.dim as f64).log2().round() as usize;
    if 1 << m != u.dim {
        return Err(TheoryError::Invalid(
            "unitary dimension is not a power of two".into(),
        ));
    }
    let n = 1usize << (2 * m);
    let udag = u.dagger();
    let d_rat = BigRational::new(BigInt::one(), BigInt::from(u.dim as i64));
    let mut matrix = Vec::with_capacity(n * n);
    for p in 0..n {
        let pp = pauli_string(p, m);
        for q in 0..n {
            let conj = u.mul(&pauli_string(q, m)).mul(&udag);
            let t = pp.mul(&conj).trace();
            if !t.im.is_zero() {
                return Err(TheoryError::Invalid(
                    "transfer matrix entry not real".into(),
                ));
            }
            matrix.push(Scalar::Exact(&t.re * &d_rat));
        }
    }
    Ok(GTransform::new(
        vec![qubit_system(); m],
        vec![qubit_system(); m],
        coords_mode(matrix, mode),
    ))
}

pub(super) fn cnot_unitary() -> CMatrix {
    CMatrix::from_ints(
        4,
        &[
            (1, 0),
            (0, 0),
            (0, 0),
            (0, 0),
            (0, 0),
            (1, 0),
            (0, 0),
            (0, 0),
            (0, 0),
            (0, 0),
            (0, 0),
            (1, 0),
            (0, 0),
            (0, 0),
            (1, 0),
            (0, 0),
        ],
    )
}

/// Quantum theory on up to `n_qubits` sites.
pub fn quantum_theory(n_qubits: usize, mode: Mode) -> Result<TheorySpec, TheoryError> {
    if n_qubits == 0 || n_qubits > 5 {
        return Err(TheoryError::Guard(format!(
            "quantum theory supports 1..=5 qubits, got {n_qubits}"
        )));
    }
    let sys = qubit_system();
    // Pauli eigenstates |0>, |1>, |+>, |->, |+i>, |-i>.
    let pure_states = vec![
        qubit_state([1, 0, 0, 1], 1, mode),
        qubit_state([1, 0, 0, -1], 1, mode),
        qubit_state([1, 1, 0, 0], 1, mode),
        qubit_state([1, -1, 0, 0], 1, mode),
        qubit_state([1, 0, 1, 0], 1, mode),
        qubit_state([1, 0, -1, 0], 1, mode),
    ];
    let proj = |c: [i64; 4]| qubit_effect(c, 2, mode);
    let e0 = proj([1, 0, 0, 1]);
    let e1 = proj([1, 0, 0, -1]);
    let ep = proj([1, 1, 0, 0]);
    let em = proj([1, -1, 0, 0]);
    let eip = proj([1, 0, 1, 0]);
    let eim = proj([1, 0, -1, 0]);
    let unit = qubit_effect([1, 0, 0, 0], 1, mode);
    let measurements = vec![
        NamedMeasurement {
            name: "zbasis".into(),
            effects: vec![e0.clone(), e1.clone()],
        },
        NamedMeasurement {
            name: "xbasis".into(),
            effects: vec![ep.clone(), em.clone()],
        },
        NamedMeasurement {
            name: "ybasis".into(),
            effects: vec![eip.clone(), eim.clone()],
        },
    ];
    let extremal_effects = vec![e0, e1, ep, em, eip, eim];

    // Transfer matrices. H and S are fixed rational matrices even though the
    // unitaries are not; the Paulis and CNOT are computed by exact
    // conjugation.
    let h = ptm_from_rows(
        &[[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0]],
        mode,
    );
    let s = ptm_from_rows(
        &[[1, 0, 0, 0], [0, 0, -1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
        mode,
    );
    let x = ptm_of_unitary(&pauli(1), mode)?;
    let y = ptm_of_unitary(&pauli(2), mode)?;
    let z = ptm_of_unitary(&pauli(3), mode)?;
    let cnot = ptm_of_unitary(&cnot_unitary(), mode)?;
    let gates = vec![
        NamedGate {
            name: "H".into(),
            transform: h.clone(),
        },
        NamedGate {
            name: "S".into(),
            transform: s.clone(),
        },
        NamedGate {
            name: "X".into(),
            transform: x,
        },
        NamedGate {
            name: "Y".into(),
            transform: y,
        },
        NamedGate {
            name: "Z".into(),
            transform: z,
        },
        NamedGate {
            name: "CNOT".into(),
            transform: cnot,
        },
    ];
    let generators = vec![
        NamedGate {
            name: "H".into(),
            transform: h,
        },
        NamedGate {
            name: "S".into(),
            transform: s,
        },
    ];

    Ok(TheorySpec {
        name: "quantum".into(),
        mode,
        membership: MembershipTag::Psd,
        max_sites: n_qubits,
        systems: vec![SystemSpec {
            system: sys,
            pure_states,
            extremal_effects,
            measurements,
            unit,
            generators,
            facets: Vec::new(),
        }],
        gates,
    })
}
