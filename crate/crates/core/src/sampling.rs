//! Seeded random test data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::idempotents::{FiniteRankIdempotent, RankOneIdempotent};
use crate::linalg::{
    conditioning_ratio, inverse, ColVector, Functional, Matrix, ScalarField, Vector, C64, ONE,
};

/// Minimum `sigma_min / sigma_max` for matrices returned by
/// [`Sampler::invertible`].
pub const WELL_CONDITIONED: f64 = 1e-2;

/// Gaussian entries over the chosen field from a ChaCha stream.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    field: ScalarField,
}

impl Sampler {
    pub fn new(seed: u64, field: ScalarField) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            field,
        }
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn real(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn index(&mut self, upper: usize) -> usize {
        self.rng.random_range(0..upper)
    }

    pub fn scalar(&mut self) -> C64 {
        match self.field {
            ScalarField::Real => C64::new(self.real(), 0.0),
            ScalarField::Complex => C64::new(self.real(), self.real()) / C64::new(2f64.sqrt(), 0.0),
        }
    }

    pub fn nonzero_scalar(&mut self) -> C64 {
        loop {
            let s = self.scalar();
            if s.norm() > 0.1 {
                return s;
            }
        }
    }

    pub fn column(&mut self, n: usize) -> ColVector {
        ColVector::from_iterator(n, (0..n).map(|_| self.scalar()))
    }

    pub fn vector(&mut self, n: usize) -> Vector {
        Vector(self.column(n))
    }

    pub fn functional(&mut self, n: usize) -> Functional {
        Functional(self.column(n))
    }

    pub fn matrix(&mut self, n: usize) -> Matrix {
        Matrix::from_fn(n, n, |_, _| self.scalar())
    }

    pub fn invertible(&mut self, n: usize) -> Matrix {
        loop {
            let m = self.matrix(n);
            if conditioning_ratio(&m) > WELL_CONDITIONED {
                return m;
            }
        }
    }

    /// A random rank-one idempotent with `|<x,f>|` bounded away from zero.
    pub fn rank_one(&mut self, n: usize) -> RankOneIdempotent {
        loop {
            let x = self.vector(n);
            let f = self.functional(n);
            let p = crate::linalg::pair(&x, &f).expect("same dimension");
            if p.norm() > 0.1 * x.norm() * f.norm() {
                return RankOneIdempotent::from_pair(x, f).expect("pairing checked");
            }
        }
    }

    /// A rank-one idempotent `y ⊗ g` with `y ∈ ker f`, so that `PQ = 0` for
    /// `P = x ⊗ f`.
    pub fn annihilated_by(&mut self, p: &RankOneIdempotent) -> RankOneIdempotent {
        let f = p.f().coords();
        let n = f.len();
        let k = (0..n)
            .max_by(|&a, &b| f[a].norm().total_cmp(&f[b].norm()))
            .expect("n > 0");
        loop {
            let z = self.column(n);
            let zf: C64 = z.iter().zip(f.iter()).map(|(a, b)| a * b).sum();
            let mut y = z;
            y[k] -= zf / f[k];
            let g = self.functional(n);
            let yv = Vector(y);
            let pg = crate::linalg::pair(&yv, &g).expect("same dimension");
            if yv.norm() > 1e-3 && pg.norm() > 0.1 * yv.norm() * g.norm() {
                return RankOneIdempotent::from_pair(yv, g).expect("pairing checked");
            }
        }
    }

    /// `S · diag(1,…,1,0,…,0) · S⁻¹` with `rank` ones and a well-conditioned `S`.
    pub fn idempotent(&mut self, n: usize, rank: usize) -> (FiniteRankIdempotent, Matrix) {
        let s = self.invertible(n);
        let s_inv = inverse(&s).expect("well conditioned");
        let d = Matrix::from_diagonal(&ColVector::from_iterator(
            n,
            (0..n).map(|i| if i < rank { ONE } else { C64::new(0.0, 0.0) }),
        ));
        let p = &s * d * &s_inv;
        (
            FiniteRankIdempotent::new(p).expect("similar to a diagonal projector"),
            s,
        )
    }

    /// The pieces `s_i ⊗ (row i of S⁻¹)` of `S·diag(1..1,0..0)·S⁻¹`.
    pub fn pieces_from_similarity(s: &Matrix, rank: usize) -> Vec<RankOneIdempotent> {
        let s_inv = inverse(s).expect("invertible");
        (0..rank)
            .map(|i| {
                RankOneIdempotent::from_pair(
                    Vector(s.column(i).into_owned()),
                    Functional(s_inv.row(i).transpose()),
                )
                .expect("dual rows pair to one")
            })
            .collect()
    }
}

/// Shapes of `η` drawn by [`Sampler::eta`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaKind {
    /// `diag(±1)` with at least one sign of each kind.
    Signature,
    /// A random invertible Hermitian matrix.
    Hermitian,
    /// `(1 + i·a)·diag(±1)`; complex field only, falls back to [`EtaKind::Symplectic`].
    RotatedSignature,
    /// `diag(±1)` plus a real antisymmetric coupling on consecutive index pairs
    /// of equal sign. Not self-adjoint.
    Symplectic,
    /// `I` plus a random strictly upper-triangular part. Not self-adjoint.
    UpperTriangular,
}

impl Sampler {
    fn signature(&mut self, n: usize) -> Vec<f64> {
        let negatives = 1 + self.index(n - 1);
        (0..n)
            .map(|i| if i < n - negatives { 1.0 } else { -1.0 })
            .collect()
    }

    pub fn eta(&mut self, n: usize, kind: EtaKind) -> Matrix {
        let diag = |s: &[f64]| {
            Matrix::from_diagonal(&ColVector::from_iterator(
                s.len(),
                s.iter().map(|&r| C64::new(r, 0.0)),
            ))
        };
        match kind {
            EtaKind::Signature => {
                let s = self.signature(n);
                diag(&s)
            }
            EtaKind::Hermitian => loop {
                let m = self.matrix(n);
                let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
                if conditioning_ratio(&h) > WELL_CONDITIONED {
                    return h;
                }
            },
            EtaKind::RotatedSignature if self.field == ScalarField::Complex => {
                let s = self.signature(n);
                let a = self.uniform(0.3, 2.0);
                diag(&s) * C64::new(1.0, a)
            }
            EtaKind::RotatedSignature | EtaKind::Symplectic => {
                let s = self.signature(n);
                let mut eta = diag(&s);
                let mut i = 0;
                while i + 1 < n {
                    if s[i] == s[i + 1] {
                        let a = self.uniform(0.3, 2.0);
                        eta[(i, i + 1)] = C64::new(a, 0.0);
                        eta[(i + 1, i)] = C64::new(-a, 0.0);
                        i += 2;
                    } else {
                        i += 1;
                    }
                }
                if (&eta - eta.adjoint()).norm() == 0.0 {
                    // no equal-sign neighbours: couple the first two with a
                    // non-self-adjoint upper entry instead
                    eta[(0, 1)] = C64::new(self.uniform(0.3, 2.0), 0.0);
                }
                eta
            }
            EtaKind::UpperTriangular => {
                let mut eta = Matrix::identity(n, n);
                for i in 0..n {
                    for j in i + 1..n {
                        eta[(i, j)] = self.scalar() * C64::new(0.5, 0.0);
                    }
                }
                eta
            }
        }
    }
}
