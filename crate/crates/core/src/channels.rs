//! Channels induced by bipartite unitaries: effective, complementary and entangled-helper
//! channels, plus Kraus normal forms and Choi states.

use std::cmp::Ordering;

use crate::error::{mismatch, Error, Result};
use crate::linalg::{
    herm_eigh, permutation_matrix, tensor, ComplexMatrix, DensityMatrix, PureState, C64, ONE, ZERO,
};

const UNITARY_TOL: f64 = 1e-10;
const COMPLETENESS_TOL: f64 = 1e-9;
/// Kraus operators with Tr K†K below this are dropped by the normal form.
pub const ZERO_KRAUS_TOL: f64 = 1e-14;

/// Unitary V: A⊗E → B⊗F with row-major factor ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteUnitary {
    dim_a: usize,
    dim_e: usize,
    dim_b: usize,
    dim_f: usize,
    matrix: ComplexMatrix,
}

impl BipartiteUnitary {
    pub fn new(
        matrix: ComplexMatrix,
        dim_a: usize,
        dim_e: usize,
        dim_b: usize,
        dim_f: usize,
    ) -> Result<Self> {
        if dim_a * dim_e != dim_b * dim_f {
            return Err(mismatch(
                format!("dimA*dimE = {}", dim_a * dim_e),
                format!("dimB*dimF = {}", dim_b * dim_f),
            ));
        }
        matrix.check_square(dim_a * dim_e)?;
        let deviation = matrix.unitarity_error();
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self {
            dim_a,
            dim_e,
            dim_b,
            dim_f,
            matrix,
        })
    }

    /// Two-qubit gate with A, E, B, F all qubits.
    pub fn qubits(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(matrix, 2, 2, 2, 2)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_e(&self) -> usize {
        self.dim_e
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim_f(&self) -> usize {
        self.dim_f
    }

    pub fn is_two_qubit(&self) -> bool {
        self.dim_a == 2 && self.dim_e == 2 && self.dim_b == 2 && self.dim_f == 2
    }

    pub(crate) fn require_qubits(&self) -> Result<()> {
        if self.is_two_qubit() {
            Ok(())
        } else {
            Err(mismatch(
                "qubit system and environment",
                format!(
                    "A={} E={} B={} F={}",
                    self.dim_a, self.dim_e, self.dim_b, self.dim_f
                ),
            ))
        }
    }

    /// Exchanges the output registers, giving SWAP·V with outputs F⊗B relabeled B⊗F.
    pub fn swap_outputs(&self) -> Self {
        let p = permutation_matrix(&[self.dim_b, self.dim_f], &[1, 0]).expect("valid permutation");
        Self {
            dim_a: self.dim_a,
            dim_e: self.dim_e,
            dim_b: self.dim_f,
            dim_f: self.dim_b,
            matrix: &p * &self.matrix,
        }
    }

    /// V₁⊗V₂ regrouped as (A₁A₂)⊗(E₁E₂) → (B₁B₂)⊗(F₁F₂).
    pub fn parallel(&self, other: &Self) -> Self {
        let p_in = permutation_matrix(
            &[self.dim_a, other.dim_a, self.dim_e, other.dim_e],
            &[0, 2, 1, 3],
        )
        .expect("valid permutation");
        let p_out = permutation_matrix(
            &[self.dim_b, self.dim_f, other.dim_b, other.dim_f],
            &[0, 2, 1, 3],
        )
        .expect("valid permutation");
        let joint = tensor(&self.matrix, &other.matrix);
        Self {
            dim_a: self.dim_a * other.dim_a,
            dim_e: self.dim_e * other.dim_e,
            dim_b: self.dim_b * other.dim_b,
            dim_f: self.dim_f * other.dim_f,
            matrix: &(&p_out * &joint) * &p_in,
        }
    }

    /// (a⊗b)·V·(c⊗d) with a on B, b on F, c on A and d on E.
    pub fn dressed(
        &self,
        a: &ComplexMatrix,
        b: &ComplexMatrix,
        c: &ComplexMatrix,
        d: &ComplexMatrix,
    ) -> Result<Self> {
        let left = tensor(a, b);
        let right = tensor(c, d);
        let m = left.matmul(&self.matrix)?.matmul(&right)?;
        Self::new(m, self.dim_a, self.dim_e, self.dim_b, self.dim_f)
    }

    /// The gate applied after `self`: other·self. Output dims of `self` must match input dims of `other`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if (self.dim_b, self.dim_f) != (other.dim_a, other.dim_e) {
            return Err(mismatch(
                format!("{}x{}", self.dim_b, self.dim_f),
                format!("{}x{}", other.dim_a, other.dim_e),
            ));
        }
        Ok(Self {
            dim_a: self.dim_a,
            dim_e: self.dim_e,
            dim_b: other.dim_b,
            dim_f: other.dim_f,
            matrix: &other.matrix * &self.matrix,
        })
    }
}

/// Completely positive trace-preserving map given by Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidState("empty Kraus list".into()))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        for k in &kraus {
            if (k.rows(), k.cols()) != (dim_out, dim_in) {
                return Err(mismatch(
                    format!("{dim_out}x{dim_in}"),
                    format!("{}x{}", k.rows(), k.cols()),
                ));
            }
        }
        let ch = Self {
            dim_in,
            dim_out,
            kraus,
        };
        let err = ch.completeness_error();
        if err > COMPLETENESS_TOL {
            return Err(Error::InvalidState(format!(
                "Kraus operators are not complete (deviation {err:.3e})"
            )));
        }
        Ok(ch)
    }

    pub(crate) fn new_unchecked(dim_in: usize, dim_out: usize, kraus: Vec<ComplexMatrix>) -> Self {
        Self {
            dim_in,
            dim_out,
            kraus,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new_unchecked(dim, dim, vec![ComplexMatrix::identity(dim)])
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    /// ‖Σ K†K − I‖_max.
    pub fn completeness_error(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim_in))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim_in {
            return Err(mismatch(self.dim_in, rho.dim()));
        }
        Ok(DensityMatrix::new_unchecked(
            self.apply_matrix(rho.matrix()),
        ))
    }

    pub(crate) fn apply_matrix(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = &out + &(&(k * rho) * &k.adjoint());
        }
        out
    }

    /// Complement from the dilation |ψ⟩ ↦ Σ_i K_i|ψ⟩⊗|i⟩; output dimension is the Kraus count.
    pub fn complement(&self) -> KrausChannel {
        let n = self.kraus.len();
        let ops = (0..self.dim_out)
            .map(|b| ComplexMatrix::from_fn(n, self.dim_in, |i, a| self.kraus[i][(b, a)]))
            .collect();
        Self::new_unchecked(self.dim_in, n, ops)
    }

    /// Complementary output Tr(K_i ρ K_j†) without building the complement.
    pub(crate) fn complement_matrix(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let n = self.kraus.len();
        let k_rho: Vec<ComplexMatrix> = self.kraus.iter().map(|k| k * rho).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                // Tr(A B†) = Σ A_xy conj(B_xy)
                let v: C64 = k_rho[i]
                    .data()
                    .iter()
                    .zip(self.kraus[j].data())
                    .map(|(a, b)| a * b.conj())
                    .sum();
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        out
    }

    pub fn choi_state(&self) -> DensityMatrix {
        choi_state(self)
    }

    pub fn normal_form(&self) -> KrausChannel {
        kraus_normal_form(self)
    }

    /// Channel product c₁⊗c₂.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut ops = Vec::with_capacity(self.len() * other.len());
        for a in &self.kraus {
            for b in &other.kraus {
                ops.push(tensor(a, b));
            }
        }
        Self::new_unchecked(
            self.dim_in * other.dim_in,
            self.dim_out * other.dim_out,
            ops,
        )
    }
}

/// N_η for a pure environment state.
pub fn effective_channel_pure(v: &BipartiteUnitary, eta: &PureState) -> Result<KrausChannel> {
    if eta.dim() != v.dim_e {
        return Err(mismatch(v.dim_e, eta.dim()));
    }
    Ok(KrausChannel::new_unchecked(
        v.dim_a,
        v.dim_b,
        effective_ops(v, eta.amplitudes(), ONE),
    ))
}

fn effective_ops(v: &BipartiteUnitary, eta: &[C64], weight: C64) -> Vec<ComplexMatrix> {
    let m = &v.matrix;
    (0..v.dim_f)
        .map(|i| {
            ComplexMatrix::from_fn(v.dim_b, v.dim_a, |b, a| {
                let row = b * v.dim_f + i;
                let s: C64 = (0..v.dim_e)
                    .map(|e| m[(row, a * v.dim_e + e)] * eta[e])
                    .sum();
                s * weight
            })
        })
        .collect()
}

/// N_η: A → B for an arbitrary environment state; mixed η contributes √p_j-weighted Kraus
/// operators for each eigenvector.
pub fn effective_channel(v: &BipartiteUnitary, eta: &DensityMatrix) -> Result<KrausChannel> {
    if eta.dim() != v.dim_e {
        return Err(mismatch(v.dim_e, eta.dim()));
    }
    let mut ops = Vec::new();
    for (p, vec) in eta.spectral_decomposition(ZERO_KRAUS_TOL) {
        ops.extend(effective_ops(v, vec.amplitudes(), C64::new(p.sqrt(), 0.0)));
    }
    Ok(KrausChannel::new_unchecked(v.dim_a, v.dim_b, ops))
}

/// Ñ_η: A → F for a pure environment state.
pub fn complementary_channel(v: &BipartiteUnitary, eta: &PureState) -> Result<KrausChannel> {
    if eta.dim() != v.dim_e {
        return Err(mismatch(v.dim_e, eta.dim()));
    }
    let m = &v.matrix;
    let amps = eta.amplitudes();
    let ops = (0..v.dim_b)
        .map(|i| {
            ComplexMatrix::from_fn(v.dim_f, v.dim_a, |f, a| {
                let row = i * v.dim_f + f;
                (0..v.dim_e)
                    .map(|e| m[(row, a * v.dim_e + e)] * amps[e])
                    .sum()
            })
        })
        .collect();
    Ok(KrausChannel::new_unchecked(v.dim_a, v.dim_f, ops))
}

/// Ñ_η from a density matrix; only rank-one environments are accepted.
pub fn complementary_channel_density(
    v: &BipartiteUnitary,
    eta: &DensityMatrix,
) -> Result<KrausChannel> {
    let parts = eta.spectral_decomposition(1e-10);
    match parts.as_slice() {
        [(p, psi)] if (p - 1.0).abs() <= 1e-9 => complementary_channel(v, psi),
        _ => Err(Error::MixedEnvironment),
    }
}

/// N_κ: A → B⊗H for a pure helper state κ on E⊗H.
pub fn entangled_env_channel(
    v: &BipartiteUnitary,
    kappa: &PureState,
    dim_h: usize,
) -> Result<KrausChannel> {
    if dim_h == 0 || kappa.dim() != v.dim_e * dim_h {
        return Err(mismatch(
            format!("dimE*dimH = {}", v.dim_e * dim_h),
            kappa.dim(),
        ));
    }
    let m = &v.matrix;
    let k = kappa.amplitudes();
    let ops = (0..v.dim_f)
        .map(|i| {
            ComplexMatrix::from_fn(v.dim_b * dim_h, v.dim_a, |bh, a| {
                let (b, h) = (bh / dim_h, bh % dim_h);
                let row = b * v.dim_f + i;
                (0..v.dim_e)
                    .map(|e| m[(row, a * v.dim_e + e)] * k[e * dim_h + h])
                    .sum()
            })
        })
        .collect();
    Ok(KrausChannel::new_unchecked(v.dim_a, v.dim_b * dim_h, ops))
}

/// Σ K_i ρ K_i†.
pub fn apply(c: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    c.apply(rho)
}

/// (id ⊗ c)(|Φ⟩⟨Φ|) on R⊗B.
pub fn choi_state(c: &KrausChannel) -> DensityMatrix {
    let (din, dout) = (c.dim_in, c.dim_out);
    let scale = 1.0 / din as f64;
    let mut m = ComplexMatrix::zeros(din * dout, din * dout);
    for k in &c.kraus {
        let v: Vec<C64> = (0..din * dout)
            .map(|ib| k[(ib % dout, ib / dout)])
            .collect();
        for x in 0..v.len() {
            if v[x] == ZERO {
                continue;
            }
            for y in 0..v.len() {
                m[(x, y)] += v[x] * v[y].conj() * scale;
            }
        }
    }
    DensityMatrix::new_unchecked(m)
}

fn fix_phase(k: ComplexMatrix) -> ComplexMatrix {
    match k.data().iter().find(|z| z.norm() > 1e-12) {
        Some(z) => {
            let phase = z.conj() / z.norm();
            k.scale(phase)
        }
        None => k,
    }
}

fn lexicographic(a: &ComplexMatrix, b: &ComplexMatrix) -> Ordering {
    for (x, y) in a.data().iter().zip(b.data()) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Kraus operators with a diagonal Gram matrix, sorted by descending Tr K†K.
pub fn kraus_normal_form(c: &KrausChannel) -> KrausChannel {
    let n = c.kraus.len();
    let gram = ComplexMatrix::from_fn(n, n, |i, j| c.kraus[i].hs_inner(&c.kraus[j]));
    let (_, u) = herm_eigh(&gram).expect("Gram matrices are Hermitian");
    let mut ops: Vec<(f64, ComplexMatrix)> = (0..n)
        .map(|k| {
            let mut op = ComplexMatrix::zeros(c.dim_out, c.dim_in);
            for (i, ki) in c.kraus.iter().enumerate() {
                let w = u[(i, k)];
                if w != ZERO {
                    op = &op + &ki.scale(w);
                }
            }
            let weight = op.hs_inner(&op).re;
            (weight, op)
        })
        .filter(|(w, _)| *w >= ZERO_KRAUS_TOL)
        .map(|(w, op)| (w, fix_phase(op)))
        .collect();
    ops.sort_by(|(wa, _), (wb, _)| wb.total_cmp(wa));
    // Runs of equal weight are ordered by entries so the output is deterministic.
    let mut start = 0;
    while start < ops.len() {
        let mut end = start + 1;
        while end < ops.len() && ops[end - 1].0 - ops[end].0 <= 1e-12 {
            end += 1;
        }
        ops[start..end].sort_by(|(_, a), (_, b)| lexicographic(a, b));
        start = end;
    }
    KrausChannel::new_unchecked(
        c.dim_in,
        c.dim_out,
        ops.into_iter().map(|(_, op)| op).collect(),
    )
}
