//! Dense inner-product-space kernel.
//!
//! Every vector and operator stores complex scalars; a [`Space`] tagged
//! [`Field::Real`] only ever holds entries with zero imaginary part, so
//! conjugation is a no-op there and adjoints reduce to transposes.
//!
//! The inner product is linear in the first slot and conjugate-linear in the
//! second: `⟨x, y⟩ = Σᵢ xᵢ·conj(yᵢ)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Scalar = Complex64;

/// Default relative tolerance for eigen/SVD based decisions.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// The field of a tensor product: complex if either factor is.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Real && other == Field::Real {
            Field::Real
        } else {
            Field::Complex
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Space {
    dim: usize,
    field: Field,
}

impl Space {
    pub fn new(dim: usize, field: Field) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("space dimension must be >= 1"));
        }
        Ok(Space { dim, field })
    }

    /// # Panics
    /// If `dim == 0`.
    pub fn real(dim: usize) -> Self {
        Self::new(dim, Field::Real).expect("dimension must be positive")
    }

    /// # Panics
    /// If `dim == 0`.
    pub fn complex(dim: usize) -> Self {
        Self::new(dim, Field::Complex).expect("dimension must be positive")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn tensor(&self, other: &Space) -> Space {
        Space {
            dim: self.dim * other.dim,
            field: self.field.join(other.field),
        }
    }
}

fn check_field(field: Field, entries: impl IntoIterator<Item = Scalar>, what: &str) -> Result<()> {
    if field == Field::Real {
        if let Some((i, z)) = entries.into_iter().enumerate().find(|(_, z)| z.im != 0.0) {
            return Err(Error::invalid(format!(
                "{what} entry {i} = {z} is not real but the space is real"
            )));
        }
    }
    Ok(())
}

/// An element of a finite-dimensional inner-product space.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    space: Space,
    data: DVector<Scalar>,
}

impl Vector {
    pub fn new(space: Space, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != space.dim {
            return Err(Error::shape(format!(
                "vector has {} entries, space has dimension {}",
                entries.len(),
                space.dim
            )));
        }
        check_field(space.field, entries.iter().copied(), "vector")?;
        Ok(Vector {
            space,
            data: DVector::from_vec(entries),
        })
    }

    /// A vector in `ℝⁿ` with `n = entries.len()`.
    ///
    /// # Panics
    /// If `entries` is empty.
    pub fn real(entries: &[f64]) -> Self {
        Vector {
            space: Space::real(entries.len()),
            data: DVector::from_iterator(entries.len(), entries.iter().map(|&x| Scalar::new(x, 0.0))),
        }
    }

    /// A vector in `ℂⁿ`.
    ///
    /// # Panics
    /// If `entries` is empty.
    pub fn complex(entries: &[Scalar]) -> Self {
        Vector {
            space: Space::complex(entries.len()),
            data: DVector::from_column_slice(entries),
        }
    }

    pub fn zeros(space: Space) -> Self {
        Vector {
            space,
            data: DVector::zeros(space.dim),
        }
    }

    /// The `i`-th standard basis vector.
    pub fn basis(space: Space, i: usize) -> Self {
        let mut v = Self::zeros(space);
        v.data[i] = Scalar::new(1.0, 0.0);
        v
    }

    pub(crate) fn from_data(space: Space, data: DVector<Scalar>) -> Self {
        debug_assert_eq!(space.dim, data.len());
        Vector { space, data }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn entries(&self) -> &[Scalar] {
        self.data.as_slice()
    }

    pub(crate) fn data(&self) -> &DVector<Scalar> {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn scale(&self, c: Scalar) -> Vector {
        Vector {
            space: self.space,
            data: &self.data * c,
        }
    }

    /// Multiplication by a real factor; keeps real vectors real.
    pub fn scale_real(&self, c: f64) -> Vector {
        self.scale(Scalar::new(c, 0.0))
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        same_space(self.space, other.space)?;
        Ok(Vector {
            space: self.space,
            data: &self.data - &other.data,
        })
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        same_space(self.space, other.space)?;
        Ok(Vector {
            space: self.space,
            data: &self.data + &other.data,
        })
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Vector) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn same_space(a: Space, b: Space) -> Result<()> {
    if a != b {
        return Err(Error::shape(format!(
            "space mismatch: dim {} ({:?}) vs dim {} ({:?})",
            a.dim, a.field, b.dim, b.field
        )));
    }
    Ok(())
}

/// `⟨x, y⟩ = Σᵢ xᵢ·conj(yᵢ)`.
pub fn inner(x: &Vector, y: &Vector) -> Result<Scalar> {
    same_space(x.space, y.space)?;
    Ok(raw_inner(&x.data, &y.data))
}

pub(crate) fn raw_inner(x: &DVector<Scalar>, y: &DVector<Scalar>) -> Scalar {
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// A bounded linear map between two spaces, stored as a dense
/// `codomain.dim × domain.dim` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    domain: Space,
    codomain: Space,
    mat: DMatrix<Scalar>,
}

impl Operator {
    pub fn new(domain: Space, codomain: Space, mat: DMatrix<Scalar>) -> Result<Self> {
        if mat.nrows() != codomain.dim || mat.ncols() != domain.dim {
            return Err(Error::shape(format!(
                "grid is {}x{} but spaces need {}x{}",
                mat.nrows(),
                mat.ncols(),
                codomain.dim,
                domain.dim
            )));
        }
        if domain.field == Field::Real && codomain.field == Field::Real {
            check_field(Field::Real, mat.iter().copied(), "operator")?;
        }
        Ok(Operator {
            domain,
            codomain,
            mat,
        })
    }

    pub(crate) fn on(space: Space, mat: DMatrix<Scalar>) -> Self {
        debug_assert_eq!(mat.shape(), (space.dim, space.dim));
        Operator {
            domain: space,
            codomain: space,
            mat,
        }
    }

    /// Real square operator from rows.
    ///
    /// # Panics
    /// If the rows are empty or ragged, or not square.
    pub fn real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        assert!(n > 0 && rows.iter().all(|r| r.len() == n), "rows must form a square grid");
        let mat = DMatrix::from_fn(n, n, |i, j| Scalar::new(rows[i][j], 0.0));
        Self::on(Space::real(n), mat)
    }

    pub fn identity(space: Space) -> Self {
        Self::on(space, DMatrix::identity(space.dim, space.dim))
    }

    pub fn zeros(space: Space) -> Self {
        Self::on(space, DMatrix::zeros(space.dim, space.dim))
    }

    /// Real diagonal operator on `ℝⁿ`.
    pub fn diag_real(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut mat = DMatrix::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            mat[(i, i)] = Scalar::new(d, 0.0);
        }
        Self::on(Space::real(n), mat)
    }

    pub fn domain(&self) -> Space {
        self.domain
    }

    pub fn codomain(&self) -> Space {
        self.codomain
    }

    pub fn is_square(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn matrix(&self) -> &DMatrix<Scalar> {
        &self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.mat[(row, col)]
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.mat.nrows())
            .map(|i| self.mat.row(i).iter().copied().collect())
            .collect()
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        same_space(self.domain, x.space)?;
        Ok(Vector::from_data(self.codomain, &self.mat * &x.data))
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &Operator) -> Result<Operator> {
        same_space(self.domain, rhs.codomain)?;
        Ok(Operator {
            domain: rhs.domain,
            codomain: self.codomain,
            mat: &self.mat * &rhs.mat,
        })
    }

    pub fn sub(&self, rhs: &Operator) -> Result<Operator> {
        same_space(self.domain, rhs.domain)?;
        same_space(self.codomain, rhs.codomain)?;
        Ok(Operator {
            domain: self.domain,
            codomain: self.codomain,
            mat: &self.mat - &rhs.mat,
        })
    }

    pub fn add(&self, rhs: &Operator) -> Result<Operator> {
        same_space(self.domain, rhs.domain)?;
        same_space(self.codomain, rhs.codomain)?;
        Ok(Operator {
            domain: self.domain,
            codomain: self.codomain,
            mat: &self.mat + &rhs.mat,
        })
    }

    pub fn scale(&self, c: Scalar) -> Operator {
        Operator {
            domain: self.domain,
            codomain: self.codomain,
            mat: &self.mat * c,
        }
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            domain: self.codomain,
            codomain: self.domain,
            mat: self.mat.adjoint(),
        }
    }

    /// `(T + T*)/2`.
    ///
    /// # Panics
    /// If the operator is not square.
    pub fn hermitian_part(&self) -> Operator {
        assert!(self.is_square(), "hermitian part of a non-square operator");
        let mat = (&self.mat + self.mat.adjoint()) * Scalar::new(0.5, 0.0);
        Operator::on(self.domain, mat)
    }

    /// `(T − T*)/(2i)`, so that `T = H + iK` with `H`, `K` Hermitian.
    pub fn skew_part(&self) -> Operator {
        assert!(self.is_square(), "skew part of a non-square operator");
        let mat = (&self.mat - self.mat.adjoint()) * Scalar::new(0.0, -0.5);
        Operator::on(self.domain, mat)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        if self.mat.shape() != other.mat.shape() {
            return f64::INFINITY;
        }
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn adjoint(t: &Operator) -> Operator {
    t.adjoint()
}

fn singular_values(t: &Operator) -> Vec<f64> {
    let mut s: Vec<f64> = t.mat.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value.
pub fn op_norm(t: &Operator) -> f64 {
    singular_values(t).first().copied().unwrap_or(0.0)
}

/// Smallest singular value.
pub fn sigma_min(t: &Operator) -> f64 {
    singular_values(t).last().copied().unwrap_or(0.0)
}

/// Spectral condition number `σ_max/σ_min`; infinite for singular input.
pub fn condition_number(t: &Operator) -> f64 {
    let s = singular_values(t);
    let (hi, lo) = (s[0], s[s.len() - 1]);
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// `‖T − T*‖ / ‖T‖`, 0 for the zero operator.
pub fn hermitian_residual(t: &Operator) -> f64 {
    let norm = op_norm(t);
    if norm == 0.0 {
        return 0.0;
    }
    let diff = Operator::on(t.domain, &t.mat - t.mat.adjoint());
    op_norm(&diff) / norm
}

/// Inverse of a square operator. Fails when `σ_min ≤ tol·σ_max`.
pub fn invert(t: &Operator, tol: f64) -> Result<Operator> {
    if !t.is_square() {
        return Err(Error::shape("only square operators can be inverted"));
    }
    let s = singular_values(t);
    let (hi, lo) = (s[0], s[s.len() - 1]);
    if hi == 0.0 || lo <= tol * hi {
        let condition = if lo == 0.0 { f64::INFINITY } else { hi / lo };
        return Err(Error::SingularOperator { condition });
    }
    let inv = t.mat.clone().lu().try_inverse().ok_or(Error::SingularOperator {
        condition: hi / lo,
    })?;
    Ok(Operator {
        domain: t.codomain,
        codomain: t.domain,
        mat: inv,
    })
}

/// Eigen-decomposition of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unit eigenvectors, in the order of `values`.
    pub vectors: Vec<Vector>,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

/// Full eigen-decomposition; rejects input whose relative Hermitian residual
/// exceeds `tol`. The decomposition is taken of `(T + T*)/2`.
pub fn hermitian_eigen(t: &Operator, tol: f64) -> Result<HermitianEigen> {
    if !t.is_square() {
        return Err(Error::shape("eigenvalues need a square operator"));
    }
    let residual = hermitian_residual(t);
    if residual > tol {
        return Err(Error::NotHermitian { residual, tol });
    }
    Ok(eigen_of_hermitian_part(t))
}

pub(crate) fn eigen_of_hermitian_part(t: &Operator) -> HermitianEigen {
    let h = t.hermitian_part();
    let eig = h.mat.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| {
            let mut col: DVector<Scalar> = eig.eigenvectors.column(i).into_owned();
            if t.domain.field == Field::Real {
                // real symmetric input yields real eigenvectors; drop rounding noise
                col.iter_mut().for_each(|z| z.im = 0.0);
            }
            Vector::from_data(t.domain, col)
        })
        .collect();
    HermitianEigen { values, vectors }
}

/// Ascending eigenvalues of a Hermitian operator.
pub fn hermitian_eigs(t: &Operator, tol: f64) -> Result<Vec<f64>> {
    hermitian_eigen(t, tol).map(|e| e.values)
}

/// Kronecker product `Q ⊗ T`, left-major: row `(i₁, i₂) ↦ i₁·d₂ + i₂`.
pub fn kron(q: &Operator, t: &Operator) -> Operator {
    Operator {
        domain: q.domain.tensor(&t.domain),
        codomain: q.codomain.tensor(&t.codomain),
        mat: q.mat.kronecker(&t.mat),
    }
}

/// `f ⊗ g` with the same left-major layout as [`kron`].
pub fn kron_vec(f: &Vector, g: &Vector) -> Vector {
    Vector {
        space: f.space.tensor(&g.space),
        data: f.data.kronecker(&g.data),
    }
}
