//! Maps on rank-one idempotents that preserve zero products.
//!
//! A [`TransformHandle`] is a black box `φ` that can only be queried on
//! rank-one idempotents. Maps of the form `P ↦ A·h(P)·A⁻¹` are built with
//! [`induce`]; [`reconstruct`] runs the other way and recovers `A` (up to a
//! scalar) and `h` from a finite set of queries.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::idempotents::{decompose, FiniteRankIdempotent, RankOneIdempotent, TOL_PAIRING};
use crate::linalg::{
    pair, Automorphism, ColVector, Functional, Matrix, ScalarField, SemilinearOperator, Vector,
    C64, I, ONE,
};
use crate::sampling::Sampler;

/// Residual above which a map is declared not induced.
pub const TOL_RESIDUAL: f64 = 1e-6;
/// Acceptance window around `±i` in the trace probe.
pub const TOL_AUTOMORPHISM: f64 = 1e-6;
/// Margin between "zero" and "clearly nonzero" in preservation checks.
pub const VIOLATION_MARGIN: f64 = 100.0;

type EvalFn = dyn Fn(&RankOneIdempotent) -> Result<RankOneIdempotent> + Send + Sync;
type VectorFn = dyn Fn(&Vector) -> Vector + Send + Sync;
type FunctionalFn = dyn Fn(&Functional) -> Functional + Send + Sync;

/// A black-box map `φ` on the rank-one idempotents of an `n`-dimensional space.
#[derive(Clone)]
pub struct TransformHandle {
    eval: Arc<EvalFn>,
    n: usize,
    field: ScalarField,
}

impl fmt::Debug for TransformHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformHandle")
            .field("n", &self.n)
            .field("field", &self.field)
            .finish()
    }
}

impl TransformHandle {
    pub fn new<F>(n: usize, field: ScalarField, eval: F) -> Self
    where
        F: Fn(&RankOneIdempotent) -> Result<RankOneIdempotent> + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
            n,
            field,
        }
    }

    pub fn identity(n: usize, field: ScalarField) -> Self {
        Self::new(n, field, |p| Ok(p.clone()))
    }

    /// `P ↦ Pᵀ`. Reverses products, so it does not preserve zero products.
    pub fn transpose(n: usize, field: ScalarField) -> Self {
        Self::new(n, field, |p| {
            RankOneIdempotent::from_pair(
                Vector(p.f().coords().clone()),
                Functional(p.x().coords().clone()),
            )
        })
    }

    /// A map given by a finite table of `(P, φ(P))` entries. Queries outside
    /// the table fail with [`Error::MissingEntry`].
    pub fn from_table(
        n: usize,
        field: ScalarField,
        entries: Vec<(RankOneIdempotent, RankOneIdempotent)>,
    ) -> Self {
        let table: Vec<(Matrix, RankOneIdempotent)> =
            entries.into_iter().map(|(p, q)| (p.matrix(), q)).collect();
        Self::new(n, field, move |p| {
            let m = p.matrix();
            let tol = 1e-12 * (1.0 + m.norm());
            table
                .iter()
                .find(|(k, _)| (k - &m).norm() <= tol)
                .map(|(_, v)| v.clone())
                .ok_or(Error::MissingEntry)
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn eval(&self, p: &RankOneIdempotent) -> Result<RankOneIdempotent> {
        if p.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.dim(),
            });
        }
        let q = (self.eval)(p)?;
        if q.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: q.dim(),
            });
        }
        let one = pair(q.x(), q.f())?;
        if !(one - ONE).norm().is_finite() || (one - ONE).norm() > 1e-8 {
            return Err(Error::DegeneratePair {
                pairing: one.norm(),
            });
        }
        Ok(q)
    }
}

fn require_dim(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::DimensionTooSmall(n))
    } else {
        Ok(())
    }
}

fn check_operator_field(a: &SemilinearOperator, field: ScalarField) -> Result<()> {
    if !field.admits(a.auto()) {
        return Err(Error::ConjugationOnReal);
    }
    field.check_entries(a.matrix().iter())
}

/// `φ(P) = A·h(P)·A⁻¹`, evaluated as `(Ax) ⊗ ((A⁻¹)'f)` for `P = x ⊗ f`.
pub fn induce(a: &SemilinearOperator, field: ScalarField) -> Result<TransformHandle> {
    require_dim(a.dim())?;
    check_operator_field(a, field)?;
    let pair_map = RayPair::induced(a)?;
    let a = a.clone();
    let n = a.dim();
    Ok(TransformHandle::new(n, field, move |p| {
        let x = a.apply(p.x())?;
        let f = (pair_map.functional_map)(p.f());
        RankOneIdempotent::from_pair(x, f)
    }))
}

/// Outcome of [`check_preservation`].
#[derive(Debug, Clone, Default)]
pub struct PreservationReport {
    pub violations: Vec<(RankOneIdempotent, RankOneIdempotent)>,
    pub pairs_tested: usize,
}

impl PreservationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// True when exactly one side is zero (`≤ tol`) and the other is clearly not
/// (`≥ 100·tol`).
pub fn biconditional_violated(source: f64, image: f64, tol: f64) -> bool {
    (source <= tol && image >= VIOLATION_MARGIN * tol)
        || (image <= tol && source >= VIOLATION_MARGIN * tol)
}

/// Samples pairs `(P, Q)` and checks `PQ = 0 ⇔ φ(P)φ(Q) = 0`.
///
/// Even-numbered samples are crafted with `PQ = 0`; odd ones are generic.
/// Products are measured by `‖PQ‖_F / (‖P‖_F‖Q‖_F)`.
pub fn check_preservation(
    phi: &TransformHandle,
    sample_count: usize,
    seed: u64,
    tol: f64,
) -> Result<PreservationReport> {
    require_dim(phi.dim())?;
    let n = phi.dim();
    let mut sampler = Sampler::new(seed, phi.field());
    let mut report = PreservationReport::default();
    for k in 0..sample_count {
        let p = sampler.rank_one(n);
        let q = if k % 2 == 0 {
            sampler.annihilated_by(&p)
        } else {
            sampler.rank_one(n)
        };
        let source = p.product_cosine(&q);
        let image = phi.eval(&p)?.product_cosine(&phi.eval(&q)?);
        if biconditional_violated(source, image, tol) {
            report.violations.push((p, q));
        }
        report.pairs_tested += 1;
    }
    Ok(report)
}

/// `φ̃(P) = Σ φ(P_i)` over a given orthogonal rank-one decomposition of `P`.
pub fn extend_pieces(
    phi: &TransformHandle,
    pieces: &[RankOneIdempotent],
) -> Result<FiniteRankIdempotent> {
    let n = phi.dim();
    let mut sum = Matrix::zeros(n, n);
    for p in pieces {
        sum += phi.eval(p)?.matrix();
    }
    match FiniteRankIdempotent::new(sum) {
        Ok(q) if q.rank() == pieces.len() => Ok(q),
        _ => Err(Error::ExtensionInconsistent),
    }
}

/// Extends `φ` to finite-rank idempotents through [`decompose`].
pub fn extend(phi: &TransformHandle, p: &FiniteRankIdempotent) -> Result<FiniteRankIdempotent> {
    if p.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim(),
            found: p.dim(),
        });
    }
    extend_pieces(phi, &decompose(p)?)
}

/// The probe pair `(e₁ ⊗ f₁, y ⊗ g)` with `y = (i,1,0,…)`, `g = (1,1−i,0,…)`,
/// for which `tr PQ = i`.
pub fn trace_probe_pair(n: usize) -> (RankOneIdempotent, RankOneIdempotent) {
    let mut y = ColVector::zeros(n);
    y[0] = I;
    y[1] = ONE;
    let mut g = ColVector::zeros(n);
    g[0] = ONE;
    g[1] = C64::new(1.0, -1.0);
    let q = RankOneIdempotent::from_pair(Vector(y), Functional(g)).expect("<y,g> = 1");
    (RankOneIdempotent::standard(n, 0), q)
}

fn classify_trace(t: C64) -> Result<Automorphism> {
    if (t - I).norm() <= TOL_AUTOMORPHISM {
        Ok(Automorphism::Identity)
    } else if (t + I).norm() <= TOL_AUTOMORPHISM {
        Ok(Automorphism::Conjugation)
    } else {
        Err(Error::UnrecognizedAutomorphism { re: t.re, im: t.im })
    }
}

fn product_trace(p: &RankOneIdempotent, q: &RankOneIdempotent) -> C64 {
    // tr (x⊗f)(y⊗g) = <y,f><x,g>
    pair(q.x(), p.f()).expect("same dimension") * pair(p.x(), q.f()).expect("same dimension")
}

/// Reads the ring automorphism `h` off the trace identity
/// `tr φ(P)φ(Q) = h(tr PQ)` on a pair with `tr PQ = i`.
pub fn automorphism_of(phi: &TransformHandle) -> Result<Automorphism> {
    if phi.field() == ScalarField::Real {
        return Ok(Automorphism::Identity);
    }
    let (p, q) = trace_probe_pair(phi.dim());
    classify_trace(product_trace(&phi.eval(&p)?, &phi.eval(&q)?))
}

/// Operator recovered by [`reconstruct`], normalized to unit Frobenius norm
/// with its first entry of largest modulus real and positive.
#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub operator: SemilinearOperator,
    pub residual: f64,
    /// Queries of `φ` made by the probe protocol, validation excluded.
    pub probes_used: usize,
}

/// The probe set queried by [`reconstruct`], in query order:
/// `e_j ⊗ f_j` for every `j`, then `(e₁+e_j) ⊗ f₁` for `j ≥ 2`, and over the
/// complex field the trace probe and `(e₁ + i e₂) ⊗ f₁`.
pub fn probe_set(n: usize, field: ScalarField) -> Vec<RankOneIdempotent> {
    let mut probes: Vec<RankOneIdempotent> =
        (0..n).map(|j| RankOneIdempotent::standard(n, j)).collect();
    for j in 1..n {
        let mut x = ColVector::zeros(n);
        x[0] = ONE;
        x[j] = ONE;
        probes.push(
            RankOneIdempotent::from_pair(Vector(x), Functional::basis(n, 0))
                .expect("<e1+ej,f1> = 1"),
        );
    }
    if field == ScalarField::Complex {
        probes.push(trace_probe_pair(n).1);
        let mut x = ColVector::zeros(n);
        x[0] = ONE;
        x[1] = I;
        probes.push(
            RankOneIdempotent::from_pair(Vector(x), Functional::basis(n, 0))
                .expect("<e1+ie2,f1> = 1"),
        );
    }
    probes
}

/// Scales `m` to unit Frobenius norm and rotates its first entry of largest
/// modulus (row-major) onto the positive real axis.
pub fn normalize_operator(m: &Matrix) -> Matrix {
    let norm = m.norm();
    if norm == 0.0 {
        return m.clone();
    }
    let max = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let (rows, cols) = m.shape();
    let lead = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)])
        .find(|z| z.norm() >= max * (1.0 - 1e-9))
        .expect("max is attained");
    let phase = lead.conj() / lead.norm();
    m * (phase / norm)
}

/// Least-squares coefficients `(α, β)` of `r ≈ α·u + β·v`, together with the
/// relative fit residual.
fn fit_pair(u: &ColVector, v: &ColVector, r: &ColVector) -> Option<(C64, C64, f64)> {
    let n = u.len();
    let mut b = Matrix::zeros(n, 2);
    b.set_column(0, u);
    b.set_column(1, v);
    let svd = b.clone().svd(true, true);
    let s = &svd.singular_values;
    if s.min() <= 1e-8 * s.max() {
        return None;
    }
    let coeffs = svd.solve(r, 0.0).ok()?;
    let resid = (&b * &coeffs - r).norm() / r.norm();
    Some((coeffs[0], coeffs[1], resid))
}

fn unit(v: &Vector) -> ColVector {
    v.coords() / C64::new(v.norm(), 0.0)
}

/// Largest `‖φ(P) − Â·h(P)·Â⁻¹‖_F` over the given `(P, φ(P))` pairs.
pub fn validation_residual(
    a: &SemilinearOperator,
    pairs: &[(RankOneIdempotent, RankOneIdempotent)],
) -> Result<f64> {
    let inv = crate::linalg::inverse(a.matrix())?;
    let mut worst = 0.0f64;
    for (p, img) in pairs {
        let predicted = a.matrix() * a.auto().apply_matrix(&p.matrix()) * &inv;
        let r = (img.matrix() - predicted).norm();
        worst = if r.is_nan() {
            f64::INFINITY
        } else {
            worst.max(r)
        };
    }
    Ok(worst)
}

/// Recovers `A` and `h` with `φ(P) = A·h(P)·A⁻¹` from a black-box `φ`, then
/// validates on the probe images plus `validation_count` random rank-one
/// idempotents drawn from `seed`.
pub fn reconstruct(
    phi: &TransformHandle,
    validation_count: usize,
    seed: u64,
) -> Result<ReconstructionResult> {
    let mut sampler = Sampler::new(seed, phi.field());
    let extra: Vec<RankOneIdempotent> = (0..validation_count)
        .map(|_| sampler.rank_one(phi.dim()))
        .collect();
    reconstruct_with_validation(phi, &extra)
}

/// [`reconstruct`] with an explicit validation set.
pub fn reconstruct_with_validation(
    phi: &TransformHandle,
    validation: &[RankOneIdempotent],
) -> Result<ReconstructionResult> {
    let n = phi.dim();
    require_dim(n)?;
    let probes = probe_set(n, phi.field());
    let mut images = Vec::with_capacity(probes.len());
    for (index, p) in probes.iter().enumerate() {
        let img = phi.eval(p).map_err(|e| Error::DegenerateProbe {
            index,
            reason: e.to_string(),
        })?;
        images.push(img);
    }

    let columns: Vec<ColVector> = images[..n].iter().map(|q| unit(q.x())).collect();
    let mut scales = vec![ONE; n];
    let mut fit_worst = 0.0f64;
    for j in 1..n {
        let index = n + j - 1;
        let r = unit(images[index].x());
        let (alpha, beta, resid) =
            fit_pair(&columns[0], &columns[j], &r).ok_or_else(|| Error::DegenerateProbe {
                index,
                reason: "probe ranges are collinear".into(),
            })?;
        if alpha.norm() <= TOL_PAIRING {
            return Err(Error::DegenerateProbe {
                index,
                reason: "no component along the first column".into(),
            });
        }
        scales[j] = beta / alpha;
        fit_worst = fit_worst.max(resid);
    }

    let tag = match phi.field() {
        ScalarField::Real => Automorphism::Identity,
        ScalarField::Complex => {
            let trace_probe = &images[2 * n - 1];
            let from_trace = classify_trace(product_trace(&images[0], trace_probe));
            let r = unit(images[2 * n].x());
            let s2_col = &columns[1] * scales[1];
            let from_mixed = fit_pair(&columns[0], &s2_col, &r).and_then(|(alpha, beta, resid)| {
                fit_worst = fit_worst.max(resid);
                if alpha.norm() <= TOL_PAIRING {
                    return None;
                }
                // range of φ((e1 + i e2) ⊗ f1) is x1 + h(i) s2 x2
                classify_trace(beta / alpha).ok()
            });
            match (from_trace, from_mixed) {
                (Ok(a), Some(b)) if a == b => a,
                (Ok(_), Some(_)) => {
                    return Err(Error::NotInduced {
                        residual: f64::INFINITY,
                    })
                }
                (Ok(a), None) => a,
                (Err(_), Some(b)) => b,
                (Err(Error::UnrecognizedAutomorphism { re, im }), None) => {
                    let miss = (C64::new(re, im) - I)
                        .norm()
                        .min((C64::new(re, im) + I).norm());
                    return Err(Error::NotInduced { residual: miss });
                }
                (Err(e), None) => return Err(e),
            }
        }
    };

    let mut assembled = Matrix::zeros(n, n);
    for j in 0..n {
        assembled.set_column(j, &(&columns[j] * scales[j]));
    }
    let operator = SemilinearOperator::new(normalize_operator(&assembled), tag).map_err(|_| {
        Error::NotInduced {
            residual: f64::INFINITY,
        }
    })?;

    let mut pairs: Vec<(RankOneIdempotent, RankOneIdempotent)> =
        probes.into_iter().zip(images).collect();
    for p in validation {
        match phi.eval(p) {
            Ok(img) => pairs.push((p.clone(), img)),
            Err(_) => {
                return Err(Error::NotInduced {
                    residual: f64::INFINITY,
                })
            }
        }
    }
    let residual = validation_residual(&operator, &pairs)?;
    if residual > TOL_RESIDUAL || residual.is_nan() || fit_worst > TOL_RESIDUAL {
        return Err(Error::NotInduced {
            residual: residual.max(fit_worst),
        });
    }
    Ok(ReconstructionResult {
        operator,
        residual,
        probes_used: pairs.len() - validation.len(),
    })
}

/// A pair of ray maps `T` on vectors and `S` on functionals, given through
/// representative choosers.
#[derive(Clone)]
pub struct RayPair {
    pub vector_map: Arc<VectorFn>,
    pub functional_map: Arc<FunctionalFn>,
}

impl fmt::Debug for RayPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("RayPair")
    }
}

impl RayPair {
    pub fn new<T, S>(t: T, s: S) -> Self
    where
        T: Fn(&Vector) -> Vector + Send + Sync + 'static,
        S: Fn(&Functional) -> Functional + Send + Sync + 'static,
    {
        Self {
            vector_map: Arc::new(t),
            functional_map: Arc::new(s),
        }
    }

    pub fn identity() -> Self {
        Self::new(|x| x.clone(), |f| f.clone())
    }

    /// `T x = Ax`, `S f = (A⁻¹)'f`.
    pub fn induced(a: &SemilinearOperator) -> Result<Self> {
        let dual = a.inverse()?.adjoint();
        let a = a.clone();
        Ok(Self::new(
            move |x| a.apply(x).expect("dimension checked by caller"),
            move |f| dual.apply(f).expect("dimension checked by caller"),
        ))
    }
}

/// `φ((1/<x,f>) x ⊗ f) = (1/<Tx,Sf>) Tx ⊗ Sf`.
pub fn from_ray_pair(ts: RayPair, n: usize, field: ScalarField) -> TransformHandle {
    TransformHandle::new(n, field, move |p| {
        let tx = (ts.vector_map)(p.x());
        let sf = (ts.functional_map)(p.f());
        let paired = pair(&tx, &sf)?;
        if paired.norm() <= TOL_PAIRING * tx.norm() * sf.norm() || paired.norm().is_nan() {
            return Err(Error::DegenerateImage {
                pairing: paired.norm(),
            });
        }
        RankOneIdempotent::from_pair(tx, sf)
    })
}
