//! Dense real/complex linear algebra used throughout the crate.
//!
//! Every object stores complex entries. Real-field objects are complex
//! matrices whose imaginary parts vanish; the [`ScalarField`] tag records
//! which field a computation lives in and restricts the admissible
//! [`Automorphism`]s.
//!
//! Vectors and functionals are kept apart on purpose. The pairing
//! `<x, f> = sum_j x_j f_j` is bilinear, with no conjugation: it is the
//! evaluation `f(x)` of a functional in coordinates. The sesquilinear Hilbert
//! product only appears in [`crate::indefinite`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Matrix = DMatrix<C64>;
pub type ColVector = DVector<C64>;

/// Smallest accepted ratio `sigma_min / sigma_max` for an invertible matrix.
pub const TOL_SINGULAR: f64 = 1e-10;
/// Relative rank threshold used by [`kernel_and_range`].
pub const TOL_RANK: f64 = 1e-9;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarField {
    Real,
    Complex,
}

impl ScalarField {
    pub fn admits(self, auto: Automorphism) -> bool {
        !(self == ScalarField::Real && auto == Automorphism::Conjugation)
    }

    /// Checks that every entry lies in this field.
    pub fn check_entries<'a>(self, entries: impl IntoIterator<Item = &'a C64>) -> Result<()> {
        for z in entries {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite);
            }
            if self == ScalarField::Real && z.im != 0.0 {
                return Err(Error::ComplexEntryInRealField);
            }
        }
        Ok(())
    }
}

/// A continuous ring automorphism of the scalar field.
///
/// Both variants are involutions, so every tag is its own inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Automorphism {
    #[serde(rename = "id")]
    Identity,
    #[serde(rename = "conj")]
    Conjugation,
}

impl Automorphism {
    #[inline]
    pub fn apply(self, z: C64) -> C64 {
        match self {
            Automorphism::Identity => z,
            Automorphism::Conjugation => z.conj(),
        }
    }

    pub fn apply_vec(self, v: &ColVector) -> ColVector {
        match self {
            Automorphism::Identity => v.clone(),
            Automorphism::Conjugation => v.map(|z| z.conj()),
        }
    }

    pub fn apply_matrix(self, m: &Matrix) -> Matrix {
        match self {
            Automorphism::Identity => m.clone(),
            Automorphism::Conjugation => m.map(|z| z.conj()),
        }
    }

    /// `self ∘ other`.
    pub fn compose(self, other: Automorphism) -> Automorphism {
        if self == other {
            Automorphism::Identity
        } else {
            Automorphism::Conjugation
        }
    }

    pub fn inverse(self) -> Automorphism {
        self
    }
}

/// Coordinates of a vector `x ∈ X`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(pub ColVector);

/// Coordinates of a functional `f ∈ X'`, acting by `x ↦ sum_j x_j f_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional(pub ColVector);

macro_rules! coord_type {
    ($t:ident) => {
        impl $t {
            pub fn new(coords: ColVector) -> Self {
                $t(coords)
            }

            pub fn from_slice(coords: &[C64]) -> Self {
                $t(ColVector::from_column_slice(coords))
            }

            pub fn from_real(coords: &[f64]) -> Self {
                $t(ColVector::from_iterator(
                    coords.len(),
                    coords.iter().map(|&r| C64::new(r, 0.0)),
                ))
            }

            /// The `k`-th standard basis element (zero-based).
            pub fn basis(n: usize, k: usize) -> Self {
                let mut v = ColVector::zeros(n);
                v[k] = ONE;
                $t(v)
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &ColVector {
                &self.0
            }

            pub fn norm(&self) -> f64 {
                self.0.norm()
            }

            pub fn scale(&self, s: C64) -> Self {
                $t(self.0.map(|z| z * s))
            }
        }
    };
}

coord_type!(Vector);
coord_type!(Functional);

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `<x, f> = f(x)`.
pub fn pair(x: &Vector, f: &Functional) -> Result<C64> {
    check_dims(x.dim(), f.dim())?;
    Ok(x.0.iter().zip(f.0.iter()).map(|(a, b)| a * b).sum())
}

/// The operator `z ↦ <z, f> x`, i.e. the matrix `x fᵀ`.
pub fn tensor(x: &Vector, f: &Functional) -> Result<Matrix> {
    check_dims(x.dim(), f.dim())?;
    Ok(&x.0 * f.0.transpose())
}

pub fn trace(a: &Matrix) -> C64 {
    a.diagonal().iter().sum()
}

/// `min_λ ‖a − λ b‖_F / ‖a‖_F`, the distance between the scalar rays of two
/// matrices.
pub fn ray_distance(a: &Matrix, b: &Matrix) -> f64 {
    let bb = b.dotc(b);
    if bb.re == 0.0 {
        return if a.norm() == 0.0 { 0.0 } else { 1.0 };
    }
    let lambda = b.dotc(a) / bb;
    let r = a - b * lambda;
    let an = a.norm();
    if an == 0.0 {
        0.0
    } else {
        r.norm() / an
    }
}

fn sorted_svd(a: &Matrix) -> (Matrix, Vec<f64>, Matrix) {
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .total_cmp(&svd.singular_values[i])
            .then(i.cmp(&j))
    });
    let n = a.nrows();
    let mut us = Matrix::zeros(n, order.len());
    let mut vs = Matrix::zeros(a.ncols(), order.len());
    let mut s = Vec::with_capacity(order.len());
    for (k, &i) in order.iter().enumerate() {
        us.set_column(k, &u.column(i));
        vs.set_column(k, &v_t.row(i).adjoint());
        s.push(svd.singular_values[i]);
    }
    (us, s, vs)
}

pub fn singular_values(a: &Matrix) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `sigma_min / sigma_max`; zero for the zero matrix.
pub fn conditioning_ratio(a: &Matrix) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    }
}

pub fn check_invertible(a: &Matrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    let ratio = conditioning_ratio(a);
    if ratio > TOL_SINGULAR {
        Ok(())
    } else {
        Err(Error::SingularOperator { ratio })
    }
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    check_invertible(a)?;
    a.clone()
        .try_inverse()
        .ok_or(Error::SingularOperator { ratio: 0.0 })
}

/// Orthonormal bases of the kernel and the range of a square matrix.
#[derive(Debug, Clone)]
pub struct KernelRange {
    pub kernel: Matrix,
    pub range: Matrix,
}

/// Kernel and range bases from a singular value decomposition. Singular
/// values at or below `tol` (default `1e-9 · ‖A‖₂`) count as zero.
pub fn kernel_and_range(a: &Matrix, tol: Option<f64>) -> KernelRange {
    let n = a.ncols();
    let (u, s, v) = sorted_svd(a);
    let smax = s.first().copied().unwrap_or(0.0);
    let tol = tol.unwrap_or(TOL_RANK * smax);
    let rank = s.iter().filter(|&&x| x > tol).count();
    let range = u.columns(0, rank).into_owned();
    let mut kernel = Matrix::zeros(n, n - rank);
    for k in rank..n {
        kernel.set_column(k - rank, &v.column(k));
    }
    KernelRange { kernel, range }
}

/// Orthonormal basis of the null space of an arbitrary (possibly
/// rectangular) matrix.
pub fn null_space(a: &Matrix, rel_tol: f64) -> Matrix {
    let n = a.ncols();
    if a.nrows() < n {
        let mut padded = Matrix::zeros(n, n);
        padded.rows_mut(0, a.nrows()).copy_from(a);
        return null_space(&padded, rel_tol);
    }
    let (_, s, v) = sorted_svd(a);
    let smax = s.first().copied().unwrap_or(0.0);
    let rank = s.iter().filter(|&&x| x > rel_tol * smax).count();
    v.columns(rank, n - rank).into_owned()
}

/// Modified Gram–Schmidt with column pivoting.
///
/// Picks the remaining column of largest norm at each step; near-ties (within
/// a relative `1e-12`) go to the lowest index. Stops once every remaining
/// column norm is at most `tol`. Returns the orthonormal basis and the pivot
/// order.
pub fn pivoted_basis(cols: &Matrix, tol: f64) -> (Matrix, Vec<usize>) {
    let n = cols.nrows();
    let mut work = cols.clone();
    let mut used = vec![false; cols.ncols()];
    let mut basis: Vec<ColVector> = Vec::new();
    let mut pivots = Vec::new();
    while basis.len() < n {
        let norms: Vec<f64> = (0..work.ncols())
            .map(|j| if used[j] { -1.0 } else { work.column(j).norm() })
            .collect();
        let max = norms.iter().copied().fold(-1.0, f64::max);
        if max <= tol || max <= 0.0 {
            break;
        }
        let j = norms
            .iter()
            .position(|&v| v >= max * (1.0 - 1e-12))
            .expect("max is attained");
        used[j] = true;
        let mut q: ColVector = work.column(j).into_owned();
        // second pass restores orthogonality lost to cancellation
        for b in &basis {
            let c = b.dotc(&q);
            q -= b * c;
        }
        let qn = q.norm();
        if qn <= tol || qn == 0.0 {
            continue;
        }
        q /= C64::new(qn, 0.0);
        for k in (0..work.ncols()).filter(|&k| !used[k]) {
            let c = q.dotc(&work.column(k));
            let upd = &q * c;
            let mut col = work.column_mut(k);
            col -= upd;
        }
        basis.push(q);
        pivots.push(j);
    }
    let mut m = Matrix::zeros(n, basis.len());
    for (k, b) in basis.iter().enumerate() {
        m.set_column(k, b);
    }
    (m, pivots)
}

/// Orthonormal basis of the coordinate-orthogonal complement of `span(q)`,
/// where `q` has orthonormal columns.
pub fn orthogonal_complement(q: &Matrix) -> Matrix {
    let n = q.nrows();
    let proj = Matrix::identity(n, n) - q * q.adjoint();
    let (c, _) = pivoted_basis(&proj, 1e-8);
    let k = n.saturating_sub(q.ncols()).min(c.ncols());
    c.columns(0, k).into_owned()
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub fn expm(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let norm = a.norm();
    let mut squarings = 0u32;
    if norm > 0.25 {
        squarings = (norm / 0.25).log2().ceil() as u32;
    }
    let scaled = a / C64::new(2f64.powi(squarings as i32), 0.0);
    let mut result = Matrix::identity(n, n);
    let mut term = Matrix::identity(n, n);
    for k in 1..=20 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        result += &term;
        if term.norm() < 1e-18 * result.norm() {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// An invertible operator `x ↦ M·h(x)` for a ring automorphism `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemilinearOperator {
    matrix: Matrix,
    auto: Automorphism,
}

impl SemilinearOperator {
    pub fn new(matrix: Matrix, auto: Automorphism) -> Result<Self> {
        check_invertible(&matrix)?;
        Ok(Self { matrix, auto })
    }

    pub fn linear(matrix: Matrix) -> Result<Self> {
        Self::new(matrix, Automorphism::Identity)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: Matrix::identity(n, n),
            auto: Automorphism::Identity,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn auto(&self) -> Automorphism {
        self.auto
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        check_dims(self.dim(), x.dim())?;
        Ok(Vector(&self.matrix * self.auto.apply_vec(&x.0)))
    }

    /// The inverse `y ↦ h(M⁻¹)·h(y)`.
    pub fn inverse(&self) -> Result<Self> {
        let inv = inverse(&self.matrix)?;
        Ok(Self {
            matrix: self.auto.apply_matrix(&inv),
            auto: self.auto,
        })
    }

    /// `self ∘ other`: `(M₁, h₁)∘(M₂, h₂) = (M₁·h₁(M₂), h₁∘h₂)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            matrix: &self.matrix * self.auto.apply_matrix(&other.matrix),
            auto: self.auto.compose(other.auto),
        })
    }

    pub fn scaled(&self, c: C64) -> Result<Self> {
        Self::new(&self.matrix * c, self.auto)
    }

    /// The Banach adjoint `A'`, realized on functional coordinates so that
    /// `<Ax, f> = h(<x, A'f>)`.
    pub fn adjoint(&self) -> FunctionalMap {
        let matrix = match self.auto {
            Automorphism::Identity => self.matrix.transpose(),
            Automorphism::Conjugation => self.matrix.adjoint(),
        };
        FunctionalMap {
            matrix,
            auto: self.auto,
        }
    }
}

/// A semilinear operator acting on functional coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalMap {
    pub matrix: Matrix,
    pub auto: Automorphism,
}

impl FunctionalMap {
    pub fn apply(&self, f: &Functional) -> Result<Functional> {
        check_dims(self.matrix.nrows(), f.dim())?;
        Ok(Functional(&self.matrix * self.auto.apply_vec(&f.0)))
    }
}
