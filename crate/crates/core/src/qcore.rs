//! Dense complex linear algebra for few-qubit systems.
//!
//! Qubit ordering convention: qubit 0 is the leftmost tensor factor, i.e. the
//! most significant bit of the computational-basis index. All operations are
//! pure functions over immutable values.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-10;

/// Pauli axis label for operator construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    I,
    X,
    Y,
    Z,
}

impl Axis {
    pub fn matrix(self) -> Matrix2<C64> {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Axis::I => Matrix2::new(o, z, z, o),
            Axis::X => Matrix2::new(z, o, o, z),
            Axis::Y => Matrix2::new(z, -i, i, z),
            Axis::Z => Matrix2::new(o, z, z, -o),
        }
    }
}

pub fn pauli_x() -> Matrix2<C64> {
    Axis::X.matrix()
}
pub fn pauli_y() -> Matrix2<C64> {
    Axis::Y.matrix()
}
pub fn pauli_z() -> Matrix2<C64> {
    Axis::Z.matrix()
}
pub fn id2() -> Matrix2<C64> {
    Axis::I.matrix()
}

/// Normalized pure state on n qubits (dim = 2^n).
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: DVector<C64>,
}

impl Ket {
    /// Construct from amplitudes, requiring unit norm within `NORM_TOL`.
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        let n2 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (n2.sqrt() - 1.0).abs() > NORM_TOL {
            return Err(Error::Build(format!(
                "ket norm {} deviates from 1 beyond {NORM_TOL}",
                n2.sqrt()
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Construct, rescaling to unit norm.
    pub fn normalized(mut amplitudes: DVector<C64>) -> Result<Self> {
        let n = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(Error::Build("cannot normalize zero vector".into()));
        }
        amplitudes.scale_mut(1.0 / n);
        Ok(Self { amplitudes })
    }

    /// Computational basis state |index⟩ on n qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1 << n_qubits;
        let mut v = DVector::from_element(dim, C64::new(0.0, 0.0));
        v[index] = C64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Ket) -> C64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |self⟩ ⊗ |other⟩.
    pub fn tensor(&self, other: &Ket) -> Ket {
        Ket {
            amplitudes: DVector::from_iterator(
                self.dim() * other.dim(),
                self.amplitudes
                    .iter()
                    .flat_map(|a| other.amplitudes.iter().map(move |b| a * b)),
            ),
        }
    }

    /// |self⟩⟨self| as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |r, c| self.amplitudes[r] * self.amplitudes[c].conj());
        DensityMatrix { matrix: m }
    }
}

/// Hermitian operator (energy in units of h).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOp {
    matrix: DMatrix<C64>,
}

impl HermitianOp {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Build("operator matrix must be square".into()));
        }
        let dev = (&matrix - matrix.adjoint()).norm();
        if dev > NORM_TOL * (1.0 + matrix.norm()) {
            return Err(Error::Build(format!(
                "matrix deviates from Hermitian by {dev}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Real eigenvalues and unitary eigenvector matrix (columns).
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<C64>) {
        // force exact Hermiticity before the symmetric solver
        let h = (&self.matrix + self.matrix.adjoint()).scale(0.5);
        let se = nalgebra::SymmetricEigen::new(h);
        // sort ascending (the solver returns an arbitrary order)
        let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
        let evals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
        let d = se.eigenvectors.nrows();
        let vecs = DMatrix::from_fn(d, d, |r, c| se.eigenvectors[(r, order[c])]);
        (evals, vecs)
    }
}

/// Unitary operator.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    matrix: DMatrix<C64>,
}

impl UnitaryOp {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        let d = matrix.nrows();
        let dev = (matrix.adjoint() * &matrix - DMatrix::<C64>::identity(d, d)).norm();
        if dev > UNITARY_TOL {
            return Err(Error::Build(format!("U†U deviates from I by {dev}")));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, s: &Ket) -> Ket {
        Ket {
            amplitudes: &self.matrix * s.amplitudes(),
        }
    }
}

/// Density matrix: Hermitian, unit trace, PSD.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        let dev = (&matrix - matrix.adjoint()).norm();
        if dev > 1e-10 {
            return Err(Error::Build(format!("density matrix not Hermitian: {dev}")));
        }
        let tr: C64 = matrix.diagonal().iter().sum();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::Build(format!("density matrix trace {tr} != 1")));
        }
        let herm = HermitianOp { matrix: matrix.clone() };
        let (evals, _) = herm.eigen();
        if evals.iter().any(|&e| e < -1e-10) {
            return Err(Error::Build("density matrix has negative eigenvalues".into()));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.matrix.nrows().trailing_zeros() as usize
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diagonal().iter().sum()
    }
}

/// Kronecker product.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Embed a single-qubit operator on qubit `k` of an n-qubit register.
pub fn embed_single(op: &Matrix2<C64>, k: usize, n_qubits: usize) -> DMatrix<C64> {
    let mut m = DMatrix::<C64>::identity(1, 1);
    for q in 0..n_qubits {
        let factor = if q == k {
            DMatrix::from_fn(2, 2, |r, c| op[(r, c)])
        } else {
            DMatrix::<C64>::identity(2, 2)
        };
        m = m.kronecker(&factor);
    }
    m
}

/// Tensor product of single-qubit Paulis times a coefficient, identity elsewhere.
pub fn build_operator(
    pauli_string: &[(usize, Axis)],
    n_qubits: usize,
    coefficient: f64,
) -> Result<HermitianOp> {
    let mut seen = vec![false; n_qubits];
    for &(q, _) in pauli_string {
        if q >= n_qubits {
            return Err(Error::Build(format!(
                "qubit index {q} out of range for {n_qubits} qubits"
            )));
        }
        if seen[q] {
            return Err(Error::Build(format!("duplicate qubit index {q}")));
        }
        seen[q] = true;
    }
    let mut factors = vec![Axis::I; n_qubits];
    for &(q, ax) in pauli_string {
        factors[q] = ax;
    }
    let mut m = DMatrix::<C64>::identity(1, 1);
    for ax in factors {
        m = m.kronecker(&DMatrix::from_fn(2, 2, |r, c| ax.matrix()[(r, c)]));
    }
    HermitianOp::new(m.scale(coefficient))
}

/// exp(−iHt)|s⟩ via eigendecomposition of the Hermitian generator.
pub fn evolve(h: &HermitianOp, t: f64, s: &Ket) -> Result<Ket> {
    if t < 0.0 {
        return Err(Error::Param(format!("negative evolution time {t}")));
    }
    let u = propagator(h, t)?;
    Ok(u.apply(s))
}

/// exp(−iHt) as a unitary.
pub fn propagator(h: &HermitianOp, t: f64) -> Result<UnitaryOp> {
    let (evals, vecs) = h.eigen();
    let d = h.dim();
    let phases = DMatrix::from_fn(d, d, |r, c| {
        if r == c {
            C64::from_polar(1.0, -evals[r] * t)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let u = &vecs * phases * vecs.adjoint();
    UnitaryOp::new(u)
}

/// Principal-branch effective generator: H with exp(−iHT) = U.
///
/// U is normal, so it is diagonalized in two Hermitian stages:
/// eigenspaces of (U+U†)/2 are refined by (U−U†)/(2i), which fixes the
/// eigenbasis even when cos and sin parts are separately degenerate.
pub fn effective_generator(u: &UnitaryOp, t: f64) -> Result<HermitianOp> {
    if t <= 0.0 {
        return Err(Error::Param(format!("non-positive duration {t}")));
    }
    let d = u.dim();
    let m = u.matrix();
    let hr = HermitianOp::new((m + m.adjoint()).scale(0.5))?;
    let hi = HermitianOp::new((m - m.adjoint()).scale(0.5) * C64::new(0.0, -1.0))?;
    let (re_evals, re_vecs) = hr.eigen();

    // group (nearly) equal cosine eigenvalues, refine each block with the sine part
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| re_evals[a].partial_cmp(&re_evals[b]).unwrap());
    let mut basis = DMatrix::<C64>::zeros(d, d);
    let mut col = 0;
    let mut i = 0;
    while i < d {
        let mut j = i + 1;
        while j < d && (re_evals[order[j]] - re_evals[order[i]]).abs() < 1e-8 {
            j += 1;
        }
        let block: Vec<usize> = order[i..j].to_vec();
        let k = block.len();
        let sub = DMatrix::from_fn(d, k, |r, c| re_vecs[(r, block[c])]);
        if k == 1 {
            basis.set_column(col, &sub.column(0));
            col += 1;
        } else {
            let proj = sub.adjoint() * hi.matrix() * &sub;
            let se = nalgebra::SymmetricEigen::new((&proj + proj.adjoint()).scale(0.5));
            let refined = &sub * se.eigenvectors;
            for c in 0..k {
                basis.set_column(col, &refined.column(c));
                col += 1;
            }
        }
        i = j;
    }

    let mut gen = DMatrix::<C64>::zeros(d, d);
    for c in 0..d {
        let v = basis.column(c);
        let uv = m * v;
        let lambda: C64 = v.iter().zip(uv.iter()).map(|(a, b)| a.conj() * b).sum();
        let phase = lambda.arg();
        if (phase.abs() - std::f64::consts::PI).abs() < 1e-9 {
            return Err(Error::BranchAmbiguity(format!(
                "eigenphase {phase} at the ±π cut; shorten the extraction window"
            )));
        }
        // e^{iφ} = e^{−iλT}  ⇒  λ = −φ/T
        let ev = -phase / t;
        for r in 0..d {
            for r2 in 0..d {
                gen[(r, r2)] += v[r] * C64::new(ev, 0.0) * v[r2].conj();
            }
        }
    }
    HermitianOp::new((&gen + gen.adjoint()).scale(0.5))
}

/// Reduced density matrix on the kept qubits (index summation over the rest).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    if keep.is_empty() {
        return Err(Error::Param("keep set must be nonempty".into()));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || keep_sorted.iter().any(|&q| q >= n) {
        return Err(Error::Param(format!("invalid keep set {keep:?} for {n} qubits")));
    }
    let traced: Vec<usize> = (0..n).filter(|q| !keep_sorted.contains(q)).collect();
    let dk = 1 << keep_sorted.len();
    let dt = 1 << traced.len();
    // qubit q occupies bit (n-1-q): qubit 0 is the most significant bit
    let compose = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut full = 0usize;
        for (pos, &q) in keep_sorted.iter().enumerate() {
            let bit = (kept_idx >> (keep_sorted.len() - 1 - pos)) & 1;
            full |= bit << (n - 1 - q);
        }
        for (pos, &q) in traced.iter().enumerate() {
            let bit = (traced_idx >> (traced.len() - 1 - pos)) & 1;
            full |= bit << (n - 1 - q);
        }
        full
    };
    let m = rho.matrix();
    let mut out = DMatrix::<C64>::zeros(dk, dk);
    for r in 0..dk {
        for c in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for s in 0..dt {
                acc += m[(compose(r, s), compose(c, s))];
            }
            out[(r, c)] = acc;
        }
    }
    DensityMatrix::new(out)
}

/// Closed-form exp(−iHt) for a Hermitian 2×2 matrix; the hot path for
/// per-trajectory sensor propagation.
pub fn su2_exp(h: &Matrix2<C64>, t: f64) -> Matrix2<C64> {
    let a0 = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
    let az = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
    let ax = h[(0, 1)].re;
    let ay = -h[(0, 1)].im;
    let r = (ax * ax + ay * ay + az * az).sqrt();
    let phase = C64::from_polar(1.0, -a0 * t);
    let (c, sr) = if r * t == 0.0 {
        (1.0, t)
    } else {
        ((r * t).cos(), (r * t).sin() / r)
    };
    let i = C64::new(0.0, 1.0);
    let m00 = phase * (C64::new(c, 0.0) - i * sr * az);
    let m01 = phase * (-i * sr * C64::new(ax, -ay));
    let m10 = phase * (-i * sr * C64::new(ax, ay));
    let m11 = phase * (C64::new(c, 0.0) + i * sr * az);
    Matrix2::new(m00, m01, m10, m11)
}
