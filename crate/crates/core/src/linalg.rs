//! Dense complex linear algebra and time-evolution primitives.
//!
//! Every operator in the crate is a [`ComplexMatrix`] of dimension at most
//! [`MAX_DIM`]. Time evolution is always generated by a Hermitian operator, so
//! exponentials go through a Hermitian eigendecomposition and stay unitary to
//! machine precision.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Result};

pub type C64 = Complex64;

/// Largest supported Hilbert-space dimension (six two-level ions).
pub const MAX_DIM: usize = 64;

/// Default absolute Frobenius tolerance for structural predicates.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Tolerance used when validating generators as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// `e^{i angle}`.
#[inline]
pub fn cis(angle: f64) -> C64 {
    C64::from_polar(1.0, angle)
}

/// Dense complex matrix stored row-major in its public interface.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    /// Build from row-major entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return invalid("matrix dimensions must be positive");
        }
        if entries.len() != rows * cols {
            return invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            ));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, entries)))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    /// `|ket⟩⟨bra|`.
    pub fn outer(ket: &ComplexVector, bra: &ComplexVector) -> Self {
        Self(&ket.0 * bra.0.adjoint())
    }

    /// Orthogonal projector onto the span of an orthonormal set.
    pub fn projector(basis: &[ComplexVector]) -> Result<Self> {
        let Some(first) = basis.first() else {
            return invalid("projector needs at least one vector");
        };
        let dim = first.dim();
        let mut p = Self::zeros(dim, dim);
        for v in basis {
            if v.dim() != dim {
                return invalid("projector basis vectors differ in dimension");
            }
            p = &p + &Self::outer(v, v);
        }
        Ok(p)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.0[(row, col)] = value;
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.push(self.0[(r, c)]);
            }
        }
        out
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        ComplexVector(&self.0 * &v.0)
    }

    /// `⟨u|M|v⟩`.
    pub fn expectation(&self, u: &ComplexVector, v: &ComplexVector) -> C64 {
        u.0.dotc(&(&self.0 * &v.0))
    }

    /// Restriction to the given basis indices: `M[idx[i], idx[j]]`.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), indices.len(), |i, j| {
            self.0[(indices[i], indices[j])]
        })
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::identity(self.rows());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && (&self.0 - self.0.adjoint()).norm() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square()
            && (self.0.adjoint() * &self.0 - DMatrix::identity(self.rows(), self.cols())).norm()
                <= tol
    }
}

impl From<DMatrix<C64>> for ComplexMatrix {
    fn from(m: DMatrix<C64>) -> Self {
        Self(m)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for r in 0..self.rows() {
            write!(f, "  ")?;
            for c in 0..self.cols() {
                let z = self.0[(r, c)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0 * rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Dense complex column vector.
#[derive(Clone, PartialEq)]
pub struct ComplexVector(DVector<C64>);

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return invalid("vector dimension must be positive");
        }
        Ok(Self(DVector::from_vec(entries)))
    }

    /// Standard basis vector `e_k` of the given dimension.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[k] = ONE;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> C64 {
        self.0[i]
    }

    pub fn entries(&self) -> &[C64] {
        self.0.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &ComplexVector) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn normalized(&self) -> Self {
        Self(&self.0 / C64::new(self.norm(), 0.0))
    }
}

impl Add for &ComplexVector {
    type Output = ComplexVector;
    fn add(self, rhs: &ComplexVector) -> ComplexVector {
        ComplexVector(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexVector {
    type Output = ComplexVector;
    fn sub(self, rhs: &ComplexVector) -> ComplexVector {
        ComplexVector(&self.0 - &rhs.0)
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.0.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)))
            .finish()
    }
}

fn check_generator(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return invalid(format!("generator must be square, got {}x{}", h.rows(), h.cols()));
    }
    if h.rows() > MAX_DIM {
        return invalid(format!("dimension {} exceeds cap {MAX_DIM}", h.rows()));
    }
    let scale = h.frobenius_norm().max(1.0);
    if !h.is_hermitian(HERMITIAN_TOL * scale) {
        return invalid("generator is not Hermitian");
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian generator, reusable for many durations.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    values: Vec<f64>,
    vectors: DMatrix<C64>,
}

impl HermitianEigen {
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        check_generator(h)?;
        let eig = SymmetricEigen::new(h.0.clone());
        Ok(Self {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// Largest eigenvalue magnitude (operator norm).
    pub fn spectral_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `exp(−i H t)`.
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        if t == 0.0 {
            return ComplexMatrix::identity(self.values.len());
        }
        let phases = DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&lambda| cis(-lambda * t)),
        );
        let scaled = DMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |r, c| {
            self.vectors[(r, c)] * phases[c]
        });
        ComplexMatrix(scaled * self.vectors.adjoint())
    }
}

/// `exp(−i H t)` for Hermitian `H`.
pub fn expm_hermitian_generator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    Ok(HermitianEigen::new(h)?.propagator(t))
}

/// A Hermitian generator applied for a given pulse area.
#[derive(Clone, Debug)]
pub struct Drive {
    pub generator: ComplexMatrix,
    pub area: f64,
}

impl Drive {
    pub fn new(generator: ComplexMatrix, area: f64) -> Self {
        Self { generator, area }
    }

    pub fn propagator(&self) -> Result<ComplexMatrix> {
        expm_hermitian_generator(&self.generator, self.area)
    }
}

/// `exp(−i A_n G_n) ··· exp(−i A_1 G_1)`; the first drive acts first.
///
/// An empty list yields the 1x1 identity; use [`time_ordered_product_dim`]
/// when the dimension must be fixed.
pub fn time_ordered_product(drives: &[Drive]) -> Result<ComplexMatrix> {
    let dim = drives.first().map_or(1, |d| d.generator.rows());
    time_ordered_product_dim(drives, dim)
}

/// As [`time_ordered_product`], returning `I_dim` for an empty list.
pub fn time_ordered_product_dim(drives: &[Drive], dim: usize) -> Result<ComplexMatrix> {
    let mut u = ComplexMatrix::identity(dim);
    for (k, drive) in drives.iter().enumerate() {
        if drive.generator.rows() != dim {
            return invalid(format!(
                "drive {k} has dimension {}, expected {dim}",
                drive.generator.rows()
            ));
        }
        u = &drive.propagator()? * &u;
    }
    Ok(u)
}

/// `‖A − B‖_F`.
pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return invalid(format!(
            "shape mismatch: {}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        ));
    }
    Ok((&a.0 - &b.0).norm())
}

/// Pauli matrices and the in-plane combination `σ_α = cos α σ_x + sin α σ_y`.
pub mod pauli {
    use super::*;

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |r, c| if r != c { ONE } else { ZERO })
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 1) => -I,
            (1, 0) => I,
            _ => ZERO,
        })
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[ONE, -ONE])
    }

    pub fn sigma(alpha: f64) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 1) => cis(-alpha),
            (1, 0) => cis(alpha),
            _ => ZERO,
        })
    }
}
