//! Idempotents: rank-one normalization, the relations between idempotents
//! (zero products, algebraic orthogonality, the order `P ≤ Q`), orthogonal
//! rank-one decompositions, and common majorants.

use crate::error::{Error, Result};
use crate::linalg::{
    null_space, orthogonal_complement, pair, pivoted_basis, trace, ColVector, Functional, Matrix,
    Vector, C64, ONE,
};

/// Pairings below this fraction of `‖x‖‖f‖` are treated as zero.
pub const TOL_PAIRING: f64 = 1e-10;
/// Relative tolerance for `‖P² − P‖_F`.
pub const TOL_IDEMPOTENT: f64 = 1e-9;
/// Allowed distance between the trace and the nearest integer.
pub const TOL_TRACE: f64 = 1e-8;

/// A rank-one idempotent `x ⊗ f` with `<x, f> = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneIdempotent {
    x: Vector,
    f: Functional,
}

impl RankOneIdempotent {
    /// `(1/<x,f>) x ⊗ f`. The factor is absorbed into `x`.
    pub fn from_pair(x: Vector, f: Functional) -> Result<Self> {
        let p = pair(&x, &f)?;
        let scale = x.norm() * f.norm();
        if p.norm() <= TOL_PAIRING * scale || !p.norm().is_finite() {
            return Err(Error::DegeneratePair { pairing: p.norm() });
        }
        Ok(Self {
            x: x.scale(ONE / p),
            f,
        })
    }

    /// `e_k ⊗ f_k`.
    pub fn standard(n: usize, k: usize) -> Self {
        Self {
            x: Vector::basis(n, k),
            f: Functional::basis(n, k),
        }
    }

    pub fn x(&self) -> &Vector {
        &self.x
    }

    pub fn f(&self) -> &Functional {
        &self.f
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn matrix(&self) -> Matrix {
        &self.x.0 * self.f.0.transpose()
    }

    pub fn to_finite_rank(&self) -> FiniteRankIdempotent {
        FiniteRankIdempotent {
            matrix: self.matrix(),
            rank: 1,
        }
    }

    /// `‖PQ‖_F / (‖P‖_F ‖Q‖_F)`, which for rank-one idempotents reduces to
    /// `|<y,f>| / (‖y‖‖f‖)`.
    pub fn product_cosine(&self, other: &Self) -> f64 {
        let p = pair(&other.x, &self.f).expect("same dimension");
        p.norm() / (other.x.norm() * self.f.norm())
    }
}

impl From<&RankOneIdempotent> for FiniteRankIdempotent {
    fn from(p: &RankOneIdempotent) -> Self {
        p.to_finite_rank()
    }
}

/// A finite-rank idempotent matrix together with its rank.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteRankIdempotent {
    matrix: Matrix,
    rank: usize,
}

impl FiniteRankIdempotent {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let norm = matrix.norm();
        let defect = (&matrix * &matrix - &matrix).norm();
        if defect > TOL_IDEMPOTENT * (1.0 + norm * norm) || defect.is_nan() {
            return Err(Error::NotIdempotent { defect });
        }
        let tr = trace(&matrix);
        let rank = tr.re.round();
        let off = (tr - C64::new(rank, 0.0)).norm();
        if off > TOL_TRACE || rank < 0.0 {
            return Err(Error::NotIdempotent {
                defect: defect.max(off),
            });
        }
        Ok(Self {
            matrix,
            rank: rank as usize,
        })
    }

    pub fn from_pieces(pieces: &[RankOneIdempotent], n: usize) -> Result<Self> {
        let mut m = Matrix::zeros(n, n);
        for p in pieces {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.dim(),
                });
            }
            m += p.matrix();
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Relation {
    pub pq_zero: bool,
    pub qp_zero: bool,
    pub orthogonal: bool,
    pub p_leq_q: bool,
    pub q_leq_p: bool,
}

pub fn default_relation_tol(p: &Matrix, q: &Matrix) -> f64 {
    1e-8 * (1.0 + p.norm()) * (1.0 + q.norm())
}

/// Zero-product, orthogonality and order relations between `P` and `Q`,
/// decided from the matrix equations `PQ = 0`, `QP = 0`, `PQ = QP = P`.
pub fn relate(
    p: &FiniteRankIdempotent,
    q: &FiniteRankIdempotent,
    tol: Option<f64>,
) -> Result<Relation> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let (p, q) = (&p.matrix, &q.matrix);
    let tol = tol.unwrap_or_else(|| default_relation_tol(p, q));
    let pq = p * q;
    let qp = q * p;
    let pq_zero = pq.norm() <= tol;
    let qp_zero = qp.norm() <= tol;
    Ok(Relation {
        pq_zero,
        qp_zero,
        orthogonal: pq_zero && qp_zero,
        p_leq_q: (&pq - p).norm() <= tol && (&qp - p).norm() <= tol,
        q_leq_p: (&qp - q).norm() <= tol && (&pq - q).norm() <= tol,
    })
}

/// Splits `P` into `rank(P)` mutually orthogonal rank-one idempotents.
///
/// The range basis `U` comes from pivoted Gram–Schmidt on the columns of
/// `P`, so the output is reproducible. With `G = U*P` we have `P = UG` and
/// `GU = I`, and the pieces are `u_i ⊗ g_i`.
pub fn decompose(p: &FiniteRankIdempotent) -> Result<Vec<RankOneIdempotent>> {
    let r = p.rank;
    if r == 0 {
        return Ok(Vec::new());
    }
    let m = &p.matrix;
    let colmax = (0..m.ncols())
        .map(|j| m.column(j).norm())
        .fold(0.0, f64::max);
    let (q, _) = pivoted_basis(m, 1e-9 * colmax);
    if q.ncols() < r {
        return Err(Error::NotIdempotent {
            defect: (r - q.ncols()) as f64,
        });
    }
    let u = q.columns(0, r).into_owned();
    let g = u.adjoint() * m;
    (0..r)
        .map(|i| {
            let ui = Vector(u.column(i).into_owned());
            let gi = Functional(g.row(i).transpose());
            RankOneIdempotent::from_pair(ui, gi)
        })
        .collect()
}

fn stack_columns(parts: &[&Matrix], n: usize) -> Matrix {
    let total: usize = parts.iter().map(|p| p.ncols()).sum();
    let mut out = Matrix::zeros(n, total);
    let mut k = 0;
    for p in parts {
        for j in 0..p.ncols() {
            out.set_column(k, &p.column(j));
            k += 1;
        }
    }
    out
}

fn span_basis(cols: &Matrix) -> Matrix {
    let scale = (0..cols.ncols())
        .map(|j| cols.column(j).norm())
        .fold(0.0, f64::max);
    pivoted_basis(cols, 1e-9 * scale.max(f64::MIN_POSITIVE)).0
}

/// An idempotent `P` with `P₁ ≤ P` and `P₂ ≤ P`.
///
/// With `N = rng P₁ + rng P₂` and `M = ker P₁ ∩ ker P₂`, take `K` a complement
/// of `M ∩ N` inside `M` and `L` a complement of `M + N` in the whole space.
/// Then `K ⊕ (N ⊕ L)` is the whole space and `P` is the idempotent with
/// kernel `K` and range `N ⊕ L`. Complements are coordinate-orthogonal.
pub fn majorant(
    p1: &FiniteRankIdempotent,
    p2: &FiniteRankIdempotent,
) -> Result<FiniteRankIdempotent> {
    let n = p1.dim();
    if p2.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p2.dim(),
        });
    }
    let range_n = span_basis(&stack_columns(&[&p1.matrix, &p2.matrix], n));

    let mut stacked = Matrix::zeros(2 * n, n);
    stacked.rows_mut(0, n).copy_from(&p1.matrix);
    stacked.rows_mut(n, n).copy_from(&p2.matrix);
    let kernel_m = null_space(&stacked, 1e-9);

    // v = N a = M b  ⇔  [N, -M] (a; b) = 0
    let joint = stack_columns(&[&range_n, &(-&kernel_m)], n);
    let coeffs = null_space(&joint, 1e-9);
    let meet = span_basis(&(&range_n * coeffs.rows(0, range_n.ncols())));

    // K: orthogonal complement of M ∩ N inside M
    let k_dim = kernel_m.ncols() - meet.ncols();
    let proj_out_meet = Matrix::identity(n, n) - &meet * meet.adjoint();
    let k_basis = span_basis(&(proj_out_meet * &kernel_m));
    let k_basis = k_basis.columns(0, k_dim.min(k_basis.ncols())).into_owned();

    // L: orthogonal complement of M + N
    let sum = span_basis(&stack_columns(&[&range_n, &kernel_m], n));
    let l_basis = orthogonal_complement(&sum);

    let range_basis = stack_columns(&[&range_n, &l_basis], n);
    let r = range_basis.ncols();
    if r + k_basis.ncols() != n {
        return Err(Error::NotIdempotent {
            defect: (r + k_basis.ncols()) as f64 - n as f64,
        });
    }
    let w = stack_columns(&[&range_basis, &k_basis], n);
    let w_inv = crate::linalg::inverse(&w)?;
    let mut sel = ColVector::zeros(n);
    for i in 0..r {
        sel[i] = ONE;
    }
    let p = &w * Matrix::from_diagonal(&sel) * w_inv;
    FiniteRankIdempotent::new(p)
}

/// `x ⊗ f` as a [`FiniteRankIdempotent`] after normalization.
pub fn rank_one_from_pair(x: Vector, f: Functional) -> Result<RankOneIdempotent> {
    RankOneIdempotent::from_pair(x, f)
}
