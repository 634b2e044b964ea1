//! Finite-dimensional operator algebra on labelled tensor spaces.
//!
//! Index convention: a tensor space with factors `[(A, dA), (B, dB), ...]`
//! is flattened row-major, leftmost factor slowest. The basis state with
//! digits `(a, b, c)` on dims `(dA, dB, dC)` sits at `a*dB*dC + b*dC + c`.
//! Every other module relies on this, so reductions and transpositions
//! always address factors by label.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Partial-transpose eigenvalues in `(-NEGATIVITY_CUTOFF, 0)` count as zero.
pub const NEGATIVITY_CUTOFF: f64 = 1e-12;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TensorSpace {
    factors: Vec<Factor>,
}

impl TensorSpace {
    pub fn new<I, S>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let factors: Vec<Factor> = factors
            .into_iter()
            .map(|(label, dim)| Factor {
                label: label.into(),
                dim,
            })
            .collect();
        if factors.is_empty() {
            return Err(Error::InvalidSpace("no factors".into()));
        }
        for (i, f) in factors.iter().enumerate() {
            if f.dim == 0 {
                return Err(Error::InvalidSpace(format!("factor `{}` has dimension 0", f.label)));
            }
            if factors[..i].iter().any(|g| g.label == f.label) {
                return Err(Error::InvalidSpace(format!("duplicate label `{}`", f.label)));
            }
        }
        Ok(Self { factors })
    }

    pub fn single(label: impl Into<String>, dim: usize) -> Result<Self> {
        Self::new([(label.into(), dim)])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|f| f.label.as_str())
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn factor_dim(&self, label: &str) -> Result<usize> {
        Ok(self.factors[self.position(label)?].dim)
    }

    /// Stride of each factor in the flattened index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.factors.len()];
        for i in (0..self.factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.factors[i + 1].dim;
        }
        strides
    }

    /// Flattened index of a basis state given one digit per factor.
    pub fn index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                got: digits.len(),
            });
        }
        let mut idx = 0;
        for (d, f) in digits.iter().zip(&self.factors) {
            if *d >= f.dim {
                return Err(Error::InvalidParameter(format!(
                    "digit {d} out of range for factor `{}` (dim {})",
                    f.label, f.dim
                )));
            }
            idx = idx * f.dim + d;
        }
        Ok(idx)
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.factors.len()];
        for (slot, f) in digits.iter_mut().zip(&self.factors).rev() {
            *slot = index % f.dim;
            index /= f.dim;
        }
        digits
    }

    pub fn concat(&self, other: &TensorSpace) -> Result<TensorSpace> {
        if let Some(f) = other.factors.iter().find(|f| self.position(&f.label).is_ok()) {
            return Err(Error::LabelCollision(f.label.clone()));
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(TensorSpace { factors })
    }

    /// Restriction to the given factor positions, in ascending order.
    fn subspace(&self, positions: &[usize]) -> TensorSpace {
        TensorSpace {
            factors: positions.iter().map(|&p| self.factors[p].clone()).collect(),
        }
    }

    /// Flattened offsets of every basis state of the listed factors,
    /// enumerated leftmost-slowest.
    fn offsets(&self, positions: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut out = vec![0usize];
        for &p in positions {
            let (d, s) = (self.factors[p].dim, strides[p]);
            out = out.iter().flat_map(|&base| (0..d).map(move |k| base + k * s)).collect();
        }
        out
    }

    /// Split factor positions into (kept, traced) for a `keep` label list.
    fn split(&self, keep: &[&str]) -> Result<(Vec<usize>, Vec<usize>)> {
        if keep.is_empty() {
            return Err(Error::InvalidParameter("keep list is empty".into()));
        }
        let mut kept = Vec::with_capacity(keep.len());
        for label in keep {
            let p = self.position(label)?;
            if kept.contains(&p) {
                return Err(Error::InvalidParameter(format!("label `{label}` listed twice")));
            }
            kept.push(p);
        }
        kept.sort_unstable();
        let traced = (0..self.factors.len()).filter(|p| !kept.contains(p)).collect();
        Ok((kept, traced))
    }
}

/// Kronecker product of operands living on disjoint spaces.
pub trait TensorProduct: Sized {
    fn tensor(&self, other: &Self) -> Result<Self>;
}

pub fn tensor_product<T: TensorProduct>(a: &T, b: &T) -> Result<T> {
    a.tensor(b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockKet {
    space: TensorSpace,
    amplitudes: DVector<C64>,
}

impl FockKet {
    pub fn new(space: TensorSpace, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: amplitudes.len(),
            });
        }
        Ok(Self { space, amplitudes })
    }

    pub fn zeros(space: TensorSpace) -> Self {
        let n = space.dim();
        Self {
            space,
            amplitudes: DVector::zeros(n),
        }
    }

    /// Basis ket with the given occupation digits.
    pub fn basis(space: TensorSpace, digits: &[usize]) -> Result<Self> {
        let idx = space.index(digits)?;
        let mut ket = Self::zeros(space);
        ket.amplitudes[idx] = C64::new(1.0, 0.0);
        Ok(ket)
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, digits: &[usize]) -> Result<C64> {
        Ok(self.amplitudes[self.space.index(digits)?])
    }

    pub fn add_amplitude(&mut self, digits: &[usize], value: C64) -> Result<()> {
        let idx = self.space.index(digits)?;
        self.amplitudes[idx] += value;
        Ok(())
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn inner(&self, other: &FockKet) -> Result<C64> {
        if self.space != other.space {
            return Err(Error::InvalidSpace("inner product across different spaces".into()));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Rescale to unit norm; returns the norm before rescaling.
    pub fn normalize(&mut self) -> Result<f64> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidParameter(format!("cannot normalize ket of norm {n}")));
        }
        self.amplitudes.unscale_mut(n);
        Ok(n)
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            space: self.space.clone(),
            amplitudes: self.amplitudes.map(|a| a * factor),
        }
    }

    pub fn projector(&self) -> Result<DensityOperator> {
        let matrix = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator::new(self.space.clone(), matrix)
    }

    /// Reduced state on `keep`, computed from the amplitudes without
    /// forming the full projector.
    pub fn reduced(&self, keep: &[&str]) -> Result<DensityOperator> {
        let (kept, traced) = self.space.split(keep)?;
        let ko = self.space.offsets(&kept);
        let to = self.space.offsets(&traced);
        let a = DMatrix::from_fn(ko.len(), to.len(), |i, j| self.amplitudes[ko[i] + to[j]]);
        let matrix = &a * a.adjoint();
        DensityOperator::new(self.space.subspace(&kept), matrix)
    }
}

impl TensorProduct for FockKet {
    fn tensor(&self, other: &Self) -> Result<Self> {
        let space = self.space.concat(&other.space)?;
        let amplitudes = self.amplitudes.kronecker(&other.amplitudes);
        Ok(Self { space, amplitudes })
    }
}

/// Hermitian, unit-trace operator on a labelled tensor space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    space: TensorSpace,
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    /// Checks shape, Hermiticity and unit trace. Positivity is checked
    /// separately by [`DensityOperator::check_positive`] since it needs
    /// an eigensolve.
    pub fn new(space: TensorSpace, matrix: DMatrix<C64>) -> Result<Self> {
        let n = space.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        let herm = hermiticity_defect(&matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::NotDensity(format!("Hermiticity defect {herm:e}")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        Ok(Self { space, matrix })
    }

    pub fn from_ket(ket: &FockKet) -> Result<Self> {
        ket.projector()
    }

    /// Convex mixture `Σ w_i ρ_i` of operators on the same space.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?
            .1;
        let mut matrix = DMatrix::zeros(first.matrix.nrows(), first.matrix.ncols());
        for (w, rho) in parts {
            if rho.space != first.space {
                return Err(Error::InvalidSpace("mixture across different spaces".into()));
            }
            matrix += rho.matrix.map(|z| z * *w);
        }
        Self::new(first.space.clone(), matrix)
    }

    pub fn maximally_mixed(space: TensorSpace) -> Self {
        let n = space.dim();
        Self {
            space,
            matrix: DMatrix::identity(n, n).map(|z: C64| z / n as f64),
        }
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Matrix element between two basis states given by their digits.
    pub fn element(&self, row: &[usize], col: &[usize]) -> Result<C64> {
        Ok(self.matrix[(self.space.index(row)?, self.space.index(col)?)])
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Fails if any eigenvalue is below `-tol`.
    pub fn check_positive(&self, tol: f64) -> Result<()> {
        let min = self.eigenvalues()?.first().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::NotDensity(format!("eigenvalue {min:e} below -{tol:e}")));
        }
        Ok(())
    }

    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityOperator> {
        let (kept, traced) = self.space.split(keep)?;
        let ko = self.space.offsets(&kept);
        let to = self.space.offsets(&traced);
        let matrix = DMatrix::from_fn(ko.len(), ko.len(), |i, j| {
            to.iter().map(|&t| self.matrix[(ko[i] + t, ko[j] + t)]).sum::<C64>()
        });
        DensityOperator::new(self.space.subspace(&kept), matrix)
    }

    pub fn partial_transpose(&self, factor: &str) -> Result<PartialTransposeMatrix> {
        let matrix = transpose_factor(&self.space, &self.matrix, factor)?;
        Ok(PartialTransposeMatrix {
            space: self.space.clone(),
            transposed_factor: factor.to_string(),
            matrix,
        })
    }

    pub fn negativity(&self, factor: &str) -> Result<NegativityValue> {
        self.partial_transpose(factor)?.negativity()
    }
}

impl TensorProduct for DensityOperator {
    fn tensor(&self, other: &Self) -> Result<Self> {
        let space = self.space.concat(&other.space)?;
        let matrix = self.matrix.kronecker(&other.matrix);
        Ok(Self { space, matrix })
    }
}

/// Partial transpose of a density operator with respect to one factor.
/// Hermitian with the trace of the source, but generally not positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialTransposeMatrix {
    space: TensorSpace,
    transposed_factor: String,
    matrix: DMatrix<C64>,
}

impl PartialTransposeMatrix {
    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn transposed_factor(&self) -> &str {
        &self.transposed_factor
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn element(&self, row: &[usize], col: &[usize]) -> Result<C64> {
        Ok(self.matrix[(self.space.index(row)?, self.space.index(col)?)])
    }

    /// Transposes the same factor again, recovering the source operator.
    pub fn undo(&self) -> Result<DensityOperator> {
        let matrix = transpose_factor(&self.space, &self.matrix, &self.transposed_factor)?;
        DensityOperator::new(self.space.clone(), matrix)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn negativity(&self) -> Result<NegativityValue> {
        let eigenvalues = self.eigenvalues()?;
        Ok(NegativityValue::from_eigenvalues(eigenvalues))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativityValue {
    pub value: f64,
    /// Full partial-transpose spectrum, ascending.
    pub eigenvalues: Vec<f64>,
}

impl NegativityValue {
    pub fn from_eigenvalues(eigenvalues: Vec<f64>) -> Self {
        let value = negativity_of_spectrum(&eigenvalues);
        Self { value, eigenvalues }
    }
}

/// `-Σ λ` over eigenvalues below `-NEGATIVITY_CUTOFF`.
pub fn negativity_of_spectrum(eigenvalues: &[f64]) -> f64 {
    -eigenvalues.iter().filter(|&&l| l <= -NEGATIVITY_CUTOFF).sum::<f64>()
}

pub fn partial_trace(rho: &DensityOperator, keep: &[&str]) -> Result<DensityOperator> {
    rho.partial_trace(keep)
}

pub fn partial_transpose(rho: &DensityOperator, factor: &str) -> Result<PartialTransposeMatrix> {
    rho.partial_transpose(factor)
}

pub fn negativity(rho: &DensityOperator, factor: &str) -> Result<NegativityValue> {
    rho.negativity(factor)
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle
/// is read.
///
/// Entries below `ε² max|m_ij|` are dropped (an eigenvalue shift of at
/// most `dim ε² ‖m‖`), then the matrix is split into the connected
/// components of its nonzero pattern. Truncated Fock states give strongly
/// graded matrices with long runs of negligible rows that the dense solver
/// can stall on otherwise.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    let dim = m.nrows();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let floor = scale * f64::EPSILON * f64::EPSILON;
    let m = &m.map(|z| if z.norm() < floor { C64::new(0.0, 0.0) } else { z });
    let mut values = Vec::with_capacity(dim);
    for block in components(m) {
        if block.len() == 1 {
            values.push(m[(block[0], block[0])].re);
            continue;
        }
        let sub = DMatrix::from_fn(block.len(), block.len(), |i, j| m[(block[i], block[j])]);
        values.extend(dense_eigenvalues(sub).ok_or(Error::Eigensolver { dim })?);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigensolver { dim });
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn dense_eigenvalues(m: DMatrix<C64>) -> Option<Vec<f64>> {
    let n = m.nrows();
    if let Some(eig) = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 1000 * n) {
        return Some(eig.eigenvalues.iter().copied().collect());
    }
    // a diagonal shift changes the QR sweep enough to escape stalls
    let shift = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let shifted = m + DMatrix::from_diagonal_element(n, n, C64::new(shift, 0.0));
    let eig = SymmetricEigen::try_new(shifted, 4.0 * f64::EPSILON, 10_000 * n)?;
    Some(eig.eigenvalues.iter().map(|v| v - shift).collect())
}

/// Index sets of the connected components of the lower-triangle pattern.
fn components(m: &DMatrix<C64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in 0..n {
        for i in j + 1..n {
            if m[(i, j)] != C64::new(0.0, 0.0) {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = root(&mut parent, i);
        groups[r].push(i);
    }
    groups.retain(|g| !g.is_empty());
    groups
}

/// Largest `|m_ij - conj(m_ji)|`.
pub fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..=i {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn transpose_factor(space: &TensorSpace, m: &DMatrix<C64>, factor: &str) -> Result<DMatrix<C64>> {
    let pos = space.position(factor)?;
    let d = space.factors()[pos].dim;
    let s = space.strides()[pos];
    let n = space.dim();
    Ok(DMatrix::from_fn(n, n, |r, c| {
        let i = (r / s) % d;
        let j = (c / s) % d;
        m[(r - i * s + j * s, c - j * s + i * s)]
    }))
}
