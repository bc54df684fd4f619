//! Dense complex operator algebra for finite-dimensional systems.
//!
//! Multi-register operators are laid out row-major over their [`RegisterLayout`]:
//! for registers `(A, B, C)` with dimensions `(dA, dB, dC)` the joint basis index is
//! `(iA * dB + iB) * dC + iC`. Every tensor product, partial trace and permutation
//! in this crate follows that convention.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

/// Entrywise Hermiticity tolerance.
pub const TOL_HERM: f64 = 1e-9;
/// Smallest accepted eigenvalue of a density operator is `-TOL_PSD`.
pub const TOL_PSD: f64 = 1e-9;
/// Accepted deviation of a density operator's trace from one.
pub const TOL_TRACE: f64 = 1e-9;
/// Eigenvalues with magnitude at or below this are treated as zero before logs,
/// inverses and support tests.
pub const EIG_CLAMP: f64 = 1e-10;

/// Largest entrywise modulus of `A - A†`.
pub fn hermiticity_residual(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = m[(i, j)] - m[(j, i)].conj();
            worst = worst.max(d.norm());
        }
    }
    worst
}

fn check_square(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::NotSquare { rows: 0, cols: 0 });
    }
    Ok(())
}

fn check_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            got: b,
        });
    }
    Ok(())
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Columns are orthonormal eigenvectors, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// `V f(Λ) V†`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            let v = self.vectors.column(k);
            for i in 0..n {
                let vi = v[i] * w;
                for j in 0..n {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }

    /// `⟨v_k| m |v_k⟩` for every eigenvector.
    pub fn diagonal_weights(&self, m: &ComplexMatrix) -> Vec<f64> {
        (0..self.values.len())
            .map(|k| {
                let v = self.vectors.column(k);
                let mv = m * v;
                v.dotc(&mv).re
            })
            .collect()
    }

    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

/// Eigendecomposition without the Hermiticity check; the input is symmetrized first.
pub(crate) fn eigh(h: &ComplexMatrix) -> Eigen {
    let n = h.nrows();
    if n == 1 {
        return Eigen {
            values: vec![h[(0, 0)].re],
            vectors: ComplexMatrix::identity(1, 1),
        };
    }
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let decomposition = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        decomposition.eigenvalues[a]
            .partial_cmp(&decomposition.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| decomposition.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &decomposition.eigenvectors.column(src));
    }
    Eigen { values, vectors }
}

/// Eigendecomposition of a Hermitian matrix with ascending eigenvalues.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<Eigen> {
    check_square(h)?;
    let residual = hermiticity_residual(h);
    if residual > TOL_HERM {
        return Err(Error::NotHermitian(residual));
    }
    Ok(eigh(h))
}

/// Checks the density-operator invariants: Hermitian, PSD and unit trace.
pub fn validate_density(m: &ComplexMatrix) -> Result<()> {
    check_square(m)?;
    let residual = hermiticity_residual(m);
    if residual > TOL_HERM {
        return Err(Error::NotHermitian(residual));
    }
    let trace = m.trace();
    let deviation = ((trace.re - 1.0).powi(2) + trace.im.powi(2)).sqrt();
    if deviation > TOL_TRACE {
        return Err(Error::TraceDeviation(deviation));
    }
    let min = eigh(m).min_value();
    if min < -TOL_PSD {
        return Err(Error::NotPsd(min));
    }
    Ok(())
}

/// Positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    label: Option<String>,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        validate_density(&matrix)?;
        Ok(Self {
            matrix,
            label: None,
        })
    }

    /// Skips validation; for operators that are density operators by construction.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self {
            matrix,
            label: None,
        }
    }

    pub fn from_diagonal(probabilities: &[f64]) -> Result<Self> {
        let n = probabilities.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (i, &p) in probabilities.iter().enumerate() {
            m[(i, i)] = C64::new(p, 0.0);
        }
        Self::new(m)
    }

    /// `|ψ⟩⟨ψ|` for a normalized (or normalizable) vector.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::TraceDeviation(1.0));
        }
        let n = amplitudes.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = amplitudes[i] * amplitudes[j].conj() / (norm * norm);
            }
        }
        Self::new(m)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let m = ComplexMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
        Self::from_matrix_unchecked(m)
    }

    /// `|k⟩⟨k|` in a `dim`-dimensional space.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(k, k)] = C64::new(1.0, 0.0);
        Self::from_matrix_unchecked(m)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eigen(&self) -> Eigen {
        eigh(&self.matrix)
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, unitary: &ComplexMatrix) -> Self {
        let m = unitary * &self.matrix * unitary.adjoint();
        Self::from_matrix_unchecked(m)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[(i, j)].norm() <= tol))
    }
}

/// Ordered named registers with their dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    registers: Vec<(String, usize)>,
}

impl RegisterLayout {
    pub fn new<S: Into<String>>(registers: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let registers: Vec<(String, usize)> = registers
            .into_iter()
            .map(|(name, dim)| (name.into(), dim))
            .collect();
        for (i, (name, dim)) in registers.iter().enumerate() {
            if *dim == 0 {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    got: 0,
                });
            }
            if registers[..i].iter().any(|(other, _)| other == name) {
                return Err(Error::DuplicateRegister(name.clone()));
            }
        }
        Ok(Self { registers })
    }

    pub fn empty() -> Self {
        Self {
            registers: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.registers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.registers.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.registers.iter().map(|(_, d)| d).product()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.registers.iter().map(|(n, _)| n.as_str())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.registers.iter().map(|(_, d)| *d).collect()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.registers.iter().position(|(n, _)| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    pub fn dim_of(&self, name: &str) -> Option<usize> {
        self.position(name).map(|i| self.registers[i].1)
    }

    /// Mask over registers, `true` where the register is named in `keep`.
    pub fn mask(&self, keep: &[&str]) -> Result<Vec<bool>> {
        for name in keep {
            if !self.contains(name) {
                return Err(Error::UnknownRegister(name.to_string()));
            }
        }
        Ok(self
            .registers
            .iter()
            .map(|(n, _)| keep.contains(&n.as_str()))
            .collect())
    }

    /// Sub-layout of the masked registers, in layout order.
    pub fn restrict(&self, mask: &[bool]) -> Self {
        Self {
            registers: self
                .registers
                .iter()
                .zip(mask)
                .filter(|(_, &k)| k)
                .map(|(r, _)| r.clone())
                .collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        Self::new(self.registers.iter().chain(other.registers.iter()).cloned())
    }
}

/// Kronecker product `a ⊗ b`; `a` occupies the leading (slower) index.
pub fn tensor(a: &DensityOperator, b: &DensityOperator) -> DensityOperator {
    DensityOperator::from_matrix_unchecked(a.matrix.kronecker(&b.matrix))
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Partial trace of a raw matrix over the registers where `keep` is false.
pub fn partial_trace_matrix(m: &ComplexMatrix, dims: &[usize], keep: &[bool]) -> ComplexMatrix {
    let total: usize = dims.iter().product();
    debug_assert_eq!(m.nrows(), total);
    let kept_dims: Vec<usize> = dims
        .iter()
        .zip(keep)
        .filter(|(_, &k)| k)
        .map(|(d, _)| *d)
        .collect();
    let traced_dims: Vec<usize> = dims
        .iter()
        .zip(keep)
        .filter(|(_, &k)| !k)
        .map(|(d, _)| *d)
        .collect();
    let kept_total: usize = kept_dims.iter().product();
    let full_strides = strides(dims);
    let kept_strides = strides(&kept_dims);
    let traced_strides = strides(&traced_dims);

    let mut kept_index = vec![0usize; total];
    let mut traced_index = vec![0usize; total];
    for idx in 0..total {
        let (mut ki, mut ti, mut kpos, mut tpos) = (0, 0, 0, 0);
        for (r, &d) in dims.iter().enumerate() {
            let digit = (idx / full_strides[r]) % d;
            if keep[r] {
                ki += digit * kept_strides[kpos];
                kpos += 1;
            } else {
                ti += digit * traced_strides[tpos];
                tpos += 1;
            }
        }
        kept_index[idx] = ki;
        traced_index[idx] = ti;
    }

    let mut out = ComplexMatrix::zeros(kept_total, kept_total);
    for i in 0..total {
        for j in 0..total {
            if traced_index[i] == traced_index[j] {
                out[(kept_index[i], kept_index[j])] += m[(i, j)];
            }
        }
    }
    out
}

/// `Tr_discarded{ρ}` keeping the named registers (in layout order).
pub fn partial_trace(
    rho: &DensityOperator,
    layout: &RegisterLayout,
    keep: &[&str],
) -> Result<DensityOperator> {
    check_same_dim(layout.total_dim(), rho.dim())?;
    if keep.is_empty() {
        return Err(Error::UnknownRegister(String::from("<empty keep set>")));
    }
    let mask = layout.mask(keep)?;
    let out = partial_trace_matrix(&rho.matrix, &layout.dims(), &mask);
    Ok(DensityOperator::from_matrix_unchecked(out))
}

/// Reorders the tensor factors of `m`. New factor `k` is old factor `order[k]`.
pub fn permute_subsystems(m: &ComplexMatrix, dims: &[usize], order: &[usize]) -> ComplexMatrix {
    let total: usize = dims.iter().product();
    let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let old_strides = strides(dims);
    let new_strides = strides(&new_dims);
    let map: Vec<usize> = (0..total)
        .map(|idx| {
            order
                .iter()
                .enumerate()
                .map(|(k, &o)| ((idx / old_strides[o]) % dims[o]) * new_strides[k])
                .sum()
        })
        .collect();
    let mut out = ComplexMatrix::zeros(total, total);
    for i in 0..total {
        for j in 0..total {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    out
}

/// `Tr|σ − ρ|` for raw Hermitian matrices.
pub(crate) fn trace_norm_of_difference(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    eigh(&(a - b)).values.iter().map(|l| l.abs()).sum()
}

/// Trace distance `‖σ − ρ‖₁`; 0 for equal states and 2 for orthogonal ones.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_same_dim(rho.dim(), sigma.dim())?;
    Ok(trace_norm_of_difference(&sigma.matrix, &rho.matrix))
}

/// Principal square root of a PSD matrix, negative eigenvalues clamped to zero.
pub(crate) fn psd_sqrt(m: &ComplexMatrix) -> ComplexMatrix {
    eigh(m).apply(|l| if l > 0.0 { l.sqrt() } else { 0.0 })
}

/// Squared trace norm of `√ρ√σ`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_same_dim(rho.dim(), sigma.dim())?;
    let sqrt_rho = psd_sqrt(&rho.matrix);
    let inner = &sqrt_rho * &sigma.matrix * &sqrt_rho;
    let root_fidelity: f64 = eigh(&inner)
        .values
        .iter()
        .map(|&l| if l > 0.0 { l.sqrt() } else { 0.0 })
        .sum();
    Ok((root_fidelity * root_fidelity).clamp(0.0, 1.0))
}

/// Which formula turns fidelity into purified distance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceConvention {
    /// `√(1 − F)` with `F` the squared-norm fidelity.
    #[default]
    Standard,
    /// `√(1 − F²)`, composing a square with the already-squared fidelity.
    Literal,
}

impl DistanceConvention {
    /// Purified distance from a fidelity value.
    pub fn from_fidelity(self, f: f64) -> f64 {
        let f = f.clamp(0.0, 1.0);
        match self {
            DistanceConvention::Standard => (1.0 - f).max(0.0).sqrt(),
            DistanceConvention::Literal => (1.0 - f * f).max(0.0).sqrt(),
        }
    }

    /// Squared purified distance from the Hellinger-type quantity
    /// `h = 1 − √F`, accurate when `F` is close to one.
    pub(crate) fn squared_from_root_infidelity(self, h: f64) -> f64 {
        let h = h.clamp(0.0, 1.0);
        match self {
            // 1 − (1 − h)² = 2h − h²
            DistanceConvention::Standard => h * (2.0 - h),
            // 1 − (1 − h)⁴
            DistanceConvention::Literal => {
                let g = h * (2.0 - h);
                g * (2.0 - g)
            }
        }
    }

    /// Largest discarded probability mass `m` such that restricting a classical
    /// distribution to a subset of mass `1 − m` stays within purified distance `eps`.
    pub(crate) fn admits_discarded_mass(self, discarded: f64, eps: f64) -> bool {
        let m = discarded.clamp(0.0, 1.0);
        let squared = match self {
            DistanceConvention::Standard => m,
            DistanceConvention::Literal => m * (2.0 - m),
        };
        squared <= eps * eps + 1e-12
    }
}

pub fn purified_distance(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    convention: DistanceConvention,
) -> Result<f64> {
    Ok(convention.from_fidelity(fidelity(rho, sigma)?))
}
