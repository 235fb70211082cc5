//! Indefinite inner product spaces `(x, y)_η = <ηx, y>` for an invertible,
//! not necessarily self-adjoint `η`, and the symmetry transformations of
//! their rays.
//!
//! The Hilbert product `<a, b> = Σ a_j conj(b_j)` is linear in the first slot.
//! With this convention a linear `U` is a symmetry exactly when
//! `U*ηU = cη`, and a conjugate-linear `x ↦ M conj(x)` exactly when
//! `M*ηM = d·conj(η)`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{
    check_invertible, expm, inverse, Automorphism, ColVector, Functional, Matrix, ScalarField,
    SemilinearOperator, Vector, C64,
};
use crate::sampling::Sampler;
use crate::transform::{
    biconditional_violated, from_ray_pair, reconstruct, RayPair, ReconstructionResult, TOL_RESIDUAL,
};

/// Relative tolerance used by [`characterize`].
pub const TOL_CHARACTERIZE: f64 = 1e-8;
/// Relative sine below which two representatives span the same ray.
pub const TOL_RAY: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct IndefiniteSpace {
    field: ScalarField,
    eta: Matrix,
}

impl IndefiniteSpace {
    pub fn new(eta: Matrix, field: ScalarField) -> Result<Self> {
        if eta.nrows() < 3 {
            return Err(Error::DimensionTooSmall(eta.nrows()));
        }
        field.check_entries(eta.iter())?;
        check_invertible(&eta)?;
        Ok(Self { field, eta })
    }

    pub fn dim(&self) -> usize {
        self.eta.nrows()
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn eta(&self) -> &Matrix {
        &self.eta
    }

    pub fn is_self_adjoint(&self) -> bool {
        (&self.eta - self.eta.adjoint()).norm() <= 1e-14 * self.eta.norm()
    }

    fn check(&self, v: &Vector) -> Result<()> {
        if v.dim() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            })
        }
    }

    /// `(x, y)_η = <ηx, y>`.
    pub fn eta_product(&self, x: &Vector, y: &Vector) -> Result<C64> {
        self.check(x)?;
        self.check(y)?;
        Ok(hilbert(&(&self.eta * x.coords()), y.coords()))
    }
}

/// `<a, b> = Σ a_j conj(b_j)`.
pub fn hilbert(a: &ColVector, b: &ColVector) -> C64 {
    b.dotc(a)
}

/// The set of nonzero multiples of a nonzero vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    representative: Vector,
}

impl Ray {
    pub fn new(representative: Vector) -> Result<Self> {
        if representative.norm() == 0.0 || !representative.norm().is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self { representative })
    }

    pub fn representative(&self) -> &Vector {
        &self.representative
    }

    /// Linear dependence of the representatives, up to a relative sine of
    /// [`TOL_RAY`].
    pub fn same_as(&self, other: &Ray) -> bool {
        let a = self.representative.coords();
        let b = other.representative.coords();
        if a.len() != b.len() {
            return false;
        }
        let ua = a / C64::new(a.norm(), 0.0);
        let proj = &ua * ua.dotc(b);
        (b - proj).norm() <= TOL_RAY * b.norm()
    }
}

type RayFn = dyn Fn(&Ray) -> Ray + Send + Sync;

/// A transformation of rays.
#[derive(Clone)]
pub struct RayMap {
    eval: Arc<RayFn>,
}

impl fmt::Debug for RayMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("RayMap")
    }
}

impl RayMap {
    pub fn new<F>(eval: F) -> Self
    where
        F: Fn(&Ray) -> Ray + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
        }
    }

    /// `T(x̲) = (Ux)̲`.
    pub fn induced(u: &SemilinearOperator) -> Self {
        let u = u.clone();
        Self::new(move |r| {
            Ray::new(u.apply(r.representative()).expect("dimension")).expect("U is invertible")
        })
    }

    pub fn eval(&self, r: &Ray) -> Ray {
        (self.eval)(r)
    }
}

/// `|(x,y)_η| ≤ tol·‖ηx‖‖y‖`. Independent of the representatives chosen.
pub fn ray_eta_orthogonal(space: &IndefiniteSpace, rx: &Ray, ry: &Ray, tol: f64) -> Result<bool> {
    Ok(eta_cosine(space, rx.representative(), ry.representative())? <= tol)
}

fn eta_cosine(space: &IndefiniteSpace, x: &Vector, y: &Vector) -> Result<f64> {
    let p = space.eta_product(x, y)?;
    let eta_x = (space.eta() * x.coords()).norm();
    Ok(p.norm() / (eta_x * y.norm()))
}

#[derive(Debug, Clone, Default)]
pub struct SymmetryReport {
    pub violations: Vec<(Ray, Ray)>,
    pub pairs_tested: usize,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A random vector `y` with `(x, y)_η = 0`: the Hilbert projection of a
/// random vector away from `ηx`.
pub fn eta_orthogonal_partner(
    space: &IndefiniteSpace,
    x: &Vector,
    sampler: &mut Sampler,
) -> Vector {
    let w = space.eta() * x.coords();
    let ww = w.norm_squared();
    loop {
        let z = sampler.column(space.dim());
        let y = &z - &w * (hilbert(&z, &w) / C64::new(ww, 0.0));
        if y.norm() > 1e-3 * z.norm() {
            return Vector(y);
        }
    }
}

/// Samples ray pairs and checks `T x̲ ·_η T y̲ = 0 ⇔ x̲ ·_η y̲ = 0`.
/// Even-numbered samples are crafted η-orthogonal pairs.
pub fn is_symmetry(
    space: &IndefiniteSpace,
    t: &RayMap,
    sample_count: usize,
    seed: u64,
    tol: f64,
) -> Result<SymmetryReport> {
    let n = space.dim();
    let mut sampler = Sampler::new(seed, space.field());
    let mut report = SymmetryReport::default();
    for k in 0..sample_count {
        let x = sampler.vector(n);
        let y = if k % 2 == 0 {
            eta_orthogonal_partner(space, &x, &mut sampler)
        } else {
            sampler.vector(n)
        };
        let (rx, ry) = (Ray::new(x)?, Ray::new(y)?);
        let source = eta_cosine(space, rx.representative(), ry.representative())?;
        let (tx, ty) = (t.eval(&rx), t.eval(&ry));
        let image = eta_cosine(space, tx.representative(), ty.representative())?;
        if biconditional_violated(source, image, tol) {
            report.violations.push((rx, ry));
        }
        report.pairs_tested += 1;
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Characterization {
    /// `(Ux, Uy)_η = c (x, y)_η`.
    LinearSymmetry(C64),
    /// `(Ux, Uy)_η = d (y, x)_{η*}`.
    ConjugateSymmetry(C64),
    NotSymmetry,
}

impl Characterization {
    pub fn is_symmetry(&self) -> bool {
        !matches!(self, Characterization::NotSymmetry)
    }

    pub fn constant(&self) -> Option<C64> {
        match *self {
            Characterization::LinearSymmetry(c) | Characterization::ConjugateSymmetry(c) => Some(c),
            Characterization::NotSymmetry => None,
        }
    }
}

/// Decides whether `U` induces a symmetry transformation by fitting the
/// constant on the basis pair with the largest right-hand side and checking
/// the identity on all `n²` basis pairs.
pub fn characterize(space: &IndefiniteSpace, u: &SemilinearOperator) -> Result<Characterization> {
    let n = space.dim();
    if u.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.dim(),
        });
    }
    check_invertible(u.matrix())?;
    let basis: Vec<Vector> = (0..n).map(|k| Vector::basis(n, k)).collect();
    let images: Vec<Vector> = basis.iter().map(|e| u.apply(e)).collect::<Result<_>>()?;
    let eta_star = IndefiniteSpace {
        field: space.field,
        eta: space.eta.adjoint(),
    };

    let mut lhs = Vec::with_capacity(n * n);
    let mut rhs = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            lhs.push(space.eta_product(&images[i], &images[j])?);
            rhs.push(match u.auto() {
                Automorphism::Identity => space.eta_product(&basis[i], &basis[j])?,
                Automorphism::Conjugation => eta_star.eta_product(&basis[j], &basis[i])?,
            });
        }
    }
    let reference = (0..rhs.len())
        .max_by(|&a, &b| rhs[a].norm().total_cmp(&rhs[b].norm()).then(b.cmp(&a)))
        .expect("n > 0");
    let c = lhs[reference] / rhs[reference];
    let lhs_max = lhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let rhs_max = rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = TOL_CHARACTERIZE * (lhs_max + c.norm() * rhs_max);
    let fits = lhs.iter().zip(&rhs).all(|(l, r)| (l - c * r).norm() <= tol);
    Ok(match (fits, u.auto()) {
        (false, _) => Characterization::NotSymmetry,
        (true, Automorphism::Identity) => Characterization::LinearSymmetry(c),
        (true, Automorphism::Conjugation) => Characterization::ConjugateSymmetry(c),
    })
}

/// Real-coordinate basis of the Lie algebra `{K : K*η + ηK = 0}`.
fn isometry_algebra(space: &IndefiniteSpace) -> Vec<Matrix> {
    let n = space.dim();
    let eta = space.eta();
    let mut generators = Vec::new();
    for i in 0..n {
        for j in 0..n {
            generators.push(unit_matrix(n, i, j, C64::new(1.0, 0.0)));
            if space.field() == ScalarField::Complex {
                generators.push(unit_matrix(n, i, j, C64::new(0.0, 1.0)));
            }
        }
    }
    let rows = 2 * n * n;
    let mut system = DMatrix::<f64>::zeros(rows, generators.len());
    for (col, k) in generators.iter().enumerate() {
        let image = k.adjoint() * eta + eta * k;
        for (idx, z) in image.iter().enumerate() {
            system[(2 * idx, col)] = z.re;
            system[(2 * idx + 1, col)] = z.im;
        }
    }
    let svd = system.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.max();
    let mut algebra = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= 1e-10 * smax {
            let mut m = Matrix::zeros(n, n);
            for (col, g) in generators.iter().enumerate() {
                m += g * C64::new(v_t[(k, col)], 0.0);
            }
            algebra.push(m);
        }
    }
    algebra
}

fn unit_matrix(n: usize, i: usize, j: usize, value: C64) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m[(i, j)] = value;
    m
}

/// A random `V` with `V*ηV = scale·η`: `√scale · exp(K)` for a random `K`
/// in the Lie algebra of `η`, normalized to `‖K‖_F ∈ [0.5, 1.5]`.
pub fn generate_eta_isometry(
    space: &IndefiniteSpace,
    seed: u64,
    scale: f64,
) -> Result<SemilinearOperator> {
    if scale <= 0.0 || !scale.is_finite() {
        return Err(Error::Malformed(format!(
            "scale must be positive, got {scale}"
        )));
    }
    let n = space.dim();
    let mut sampler = Sampler::new(seed, ScalarField::Real);
    let mut k = Matrix::zeros(n, n);
    for g in isometry_algebra(space) {
        k += g * C64::new(sampler.real(), 0.0);
    }
    let norm = k.norm();
    if norm > 0.0 {
        let target = sampler.uniform(0.5, 1.5);
        k *= C64::new(target / norm, 0.0);
    }
    let v = expm(&k) * C64::new(scale.sqrt(), 0.0);
    let v = if space.field() == ScalarField::Real {
        v.map(|z| C64::new(z.re, 0.0))
    } else {
        v
    };
    SemilinearOperator::linear(v)
}

/// Recovers `U` with `T x̲ = (Ux)̲` from a ray map `T`.
///
/// The vector side of the ray pair is `T` itself. A functional `f` is read as
/// `x ↦ (x, y)_η` with `y = η^{-*} conj(f)`, and sent to the functional of
/// `Ty`, so that `<Tx, Sf> = (Tx, Ty)_η`. The pair is then fed through the
/// rank-one reconstruction.
pub fn recover_inducing_operator(
    space: &IndefiniteSpace,
    t: &RayMap,
    validation_count: usize,
    seed: u64,
) -> Result<ReconstructionResult> {
    let eta_star = space.eta().adjoint();
    let eta_star_inv = inverse(&eta_star)?;
    let t_vec = t.clone();
    let t_fun = t.clone();
    let pair = RayPair::new(
        move |x: &Vector| match Ray::new(x.clone()) {
            Ok(r) => t_vec.eval(&r).representative().clone(),
            Err(_) => x.clone(),
        },
        move |f: &Functional| {
            let y = Vector(&eta_star_inv * f.coords().map(|z| z.conj()));
            match Ray::new(y) {
                Ok(r) => {
                    let ty = t_fun.eval(&r);
                    Functional((&eta_star * ty.representative().coords()).map(|z| z.conj()))
                }
                Err(_) => f.clone(),
            }
        },
    );
    let phi = from_ray_pair(pair, space.dim(), space.field());
    match reconstruct(&phi, validation_count, seed) {
        Err(Error::DegenerateProbe { .. }) => Err(Error::NotInduced {
            residual: f64::INFINITY,
        }),
        Err(e) => Err(e),
        Ok(r) if r.residual > TOL_RESIDUAL => Err(Error::NotInduced {
            residual: r.residual,
        }),
        Ok(r) => Ok(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ray_distance, I, ONE, ZERO};

    fn diag(d: &[f64]) -> Matrix {
        Matrix::from_diagonal(&ColVector::from_iterator(
            d.len(),
            d.iter().map(|&r| C64::new(r, 0.0)),
        ))
    }

    fn minkowski() -> IndefiniteSpace {
        IndefiniteSpace::new(diag(&[1., 1., -1.]), ScalarField::Real).unwrap()
    }

    fn hyperbolic(t: f64) -> Matrix {
        Matrix::from_row_iterator(
            3,
            3,
            [1., 0., 0., 0., t.cosh(), t.sinh(), 0., t.sinh(), t.cosh()]
                .into_iter()
                .map(|r| C64::new(r, 0.0)),
        )
    }

    fn ray(v: &[f64]) -> Ray {
        Ray::new(Vector::from_real(v)).unwrap()
    }

    #[test]
    fn eta_product_examples() {
        let euclid = IndefiniteSpace::new(Matrix::identity(3, 3), ScalarField::Real).unwrap();
        let e1 = Vector::basis(3, 0);
        assert_eq!(euclid.eta_product(&e1, &e1).unwrap(), ONE);
        let e3 = Vector::basis(3, 2);
        assert_eq!(minkowski().eta_product(&e3, &e3).unwrap(), -ONE);
        let null = Vector::from_real(&[1., 0., 1.]);
        assert_eq!(minkowski().eta_product(&null, &null).unwrap(), ZERO);
    }

    #[test]
    fn eta_product_is_conjugate_linear_in_second_slot() {
        let space = IndefiniteSpace::new(Matrix::identity(3, 3), ScalarField::Complex).unwrap();
        let x = Vector::basis(3, 0);
        assert_eq!(space.eta_product(&x.scale(I), &x).unwrap(), I);
        assert_eq!(space.eta_product(&x, &x.scale(I)).unwrap(), -I);
    }

    #[test]
    fn space_validation() {
        assert_eq!(
            IndefiniteSpace::new(Matrix::identity(2, 2), ScalarField::Real).unwrap_err(),
            Error::DimensionTooSmall(2)
        );
        assert!(matches!(
            IndefiniteSpace::new(diag(&[1., 0., 1.]), ScalarField::Real),
            Err(Error::SingularOperator { .. })
        ));
        assert!(Ray::new(Vector::from_real(&[0., 0., 0.])).is_err());
    }

    #[test]
    fn orthogonality_examples() {
        let euclid = IndefiniteSpace::new(Matrix::identity(3, 3), ScalarField::Real).unwrap();
        assert!(
            ray_eta_orthogonal(&euclid, &ray(&[1., 0., 0.]), &ray(&[0., 1., 0.]), 1e-10).unwrap()
        );
        assert!(ray_eta_orthogonal(
            &minkowski(),
            &ray(&[1., 0., 1.]),
            &ray(&[1., 0., 1.]),
            1e-10
        )
        .unwrap());
        assert!(!ray_eta_orthogonal(
            &minkowski(),
            &ray(&[1., 0., 0.]),
            &ray(&[1., 0., 0.]),
            1e-10
        )
        .unwrap());
    }

    #[test]
    fn same_ray() {
        let a = Ray::new(Vector::from_slice(&[ONE, I, ZERO])).unwrap();
        let b = Ray::new(Vector::from_slice(&[
            C64::new(0., 2.),
            C64::new(-2., 0.),
            ZERO,
        ]))
        .unwrap();
        assert!(a.same_as(&b));
        assert!(!a.same_as(&ray(&[1., 1., 0.])));
    }

    #[test]
    fn symmetry_examples() {
        let id = RayMap::induced(&SemilinearOperator::identity(3));
        assert!(is_symmetry(&minkowski(), &id, 200, 1, 1e-8)
            .unwrap()
            .passed());

        let boost = RayMap::induced(&SemilinearOperator::linear(hyperbolic(1.0)).unwrap());
        assert!(is_symmetry(&minkowski(), &boost, 200, 2, 1e-8)
            .unwrap()
            .passed());

        let euclid = IndefiniteSpace::new(Matrix::identity(3, 3), ScalarField::Real).unwrap();
        let tri = Matrix::from_row_iterator(
            3,
            3,
            [1., 2., 0., 0., 1., 3., 0., 0., 2.]
                .into_iter()
                .map(|r| C64::new(r, 0.0)),
        );
        let skew = RayMap::induced(&SemilinearOperator::linear(tri).unwrap());
        assert!(!is_symmetry(&euclid, &skew, 200, 3, 1e-8).unwrap().passed());
    }

    #[test]
    fn characterize_examples() {
        let space = IndefiniteSpace::new(diag(&[1., 1., -1.]), ScalarField::Complex).unwrap();
        assert_eq!(
            characterize(&space, &SemilinearOperator::identity(3)).unwrap(),
            Characterization::LinearSymmetry(ONE)
        );

        let u = SemilinearOperator::linear(hyperbolic(1.0) * C64::new(2.0, 0.0)).unwrap();
        match characterize(&minkowski(), &u).unwrap() {
            Characterization::LinearSymmetry(c) => assert!((c - C64::new(4.0, 0.0)).norm() < 1e-12),
            other => panic!("{other:?}"),
        }

        let euclid = IndefiniteSpace::new(Matrix::identity(3, 3), ScalarField::Complex).unwrap();
        let conj =
            SemilinearOperator::new(Matrix::identity(3, 3), Automorphism::Conjugation).unwrap();
        assert_eq!(
            characterize(&euclid, &conj).unwrap(),
            Characterization::ConjugateSymmetry(ONE)
        );

        let tri = Matrix::from_row_iterator(
            3,
            3,
            [1., 2., 0., 0., 1., 3., 0., 0., 2.]
                .into_iter()
                .map(|r| C64::new(r, 0.0)),
        );
        assert_eq!(
            characterize(&euclid, &SemilinearOperator::linear(tri).unwrap()).unwrap(),
            Characterization::NotSymmetry
        );
    }

    #[test]
    fn conjugate_symmetry_with_non_self_adjoint_eta() {
        let mut eta = Matrix::identity(3, 3);
        eta[(0, 1)] = C64::new(0.5, 0.0);
        eta[(1, 2)] = C64::new(-2.0, 0.0);
        let space = IndefiniteSpace::new(eta, ScalarField::Complex).unwrap();
        let conj =
            SemilinearOperator::new(Matrix::identity(3, 3), Automorphism::Conjugation).unwrap();
        // for real η: <η x̄, ȳ> = conj(<ηx, y>) = <y, ηx> = (y, x)_{η*}
        assert_eq!(
            characterize(&space, &conj).unwrap(),
            Characterization::ConjugateSymmetry(ONE)
        );
        let t = RayMap::induced(&conj);
        assert!(is_symmetry(&space, &t, 200, 5, 1e-8).unwrap().passed());
    }

    #[test]
    fn generated_isometries() {
        let euclid = IndefiniteSpace::new(Matrix::identity(4, 4), ScalarField::Complex).unwrap();
        let u = generate_eta_isometry(&euclid, 1, 1.0).unwrap();
        assert!((u.matrix().adjoint() * u.matrix() - Matrix::identity(4, 4)).norm() < 1e-9);

        let space = IndefiniteSpace::new(diag(&[1., 1., -1.]), ScalarField::Real).unwrap();
        let v = generate_eta_isometry(&space, 7, 1.0).unwrap();
        let m = v.matrix();
        assert!((m.adjoint() * space.eta() * m - space.eta()).norm() < 1e-9);
        assert!((m - Matrix::identity(3, 3)).norm() > 0.1);

        let v = generate_eta_isometry(&space, 8, 4.0).unwrap();
        match characterize(&space, &v).unwrap() {
            Characterization::LinearSymmetry(c) => {
                assert!((c - C64::new(4.0, 0.0)).norm() <= 1e-8 * 4.0)
            }
            other => panic!("{other:?}"),
        }
        assert!(generate_eta_isometry(&space, 1, 0.0).is_err());
    }

    #[test]
    fn generated_isometry_non_self_adjoint_eta() {
        let mut eta = Matrix::identity(4, 4);
        eta[(0, 1)] = C64::new(0.7, 0.2);
        eta[(2, 3)] = C64::new(-0.4, 1.0);
        eta[(3, 3)] = C64::new(-1.0, 0.0);
        let space = IndefiniteSpace::new(eta, ScalarField::Complex).unwrap();
        assert!(!space.is_self_adjoint());
        let v = generate_eta_isometry(&space, 3, 2.5).unwrap();
        let m = v.matrix();
        assert!((m.adjoint() * space.eta() * m - space.eta() * C64::new(2.5, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn recover_examples() {
        let r = recover_inducing_operator(
            &minkowski(),
            &RayMap::induced(&SemilinearOperator::identity(3)),
            10,
            1,
        )
        .unwrap();
        assert!(ray_distance(r.operator.matrix(), &Matrix::identity(3, 3)) < 1e-12);

        let boost = hyperbolic(1.0);
        let t = RayMap::induced(&SemilinearOperator::linear(boost.clone()).unwrap());
        let r = recover_inducing_operator(&minkowski(), &t, 10, 2).unwrap();
        assert!(r.residual <= 1e-7);
        assert!(ray_distance(r.operator.matrix(), &boost) < 1e-10);

        let euclid = IndefiniteSpace::new(Matrix::identity(3, 3), ScalarField::Complex).unwrap();
        let conj =
            SemilinearOperator::new(Matrix::identity(3, 3), Automorphism::Conjugation).unwrap();
        let r = recover_inducing_operator(&euclid, &RayMap::induced(&conj), 10, 3).unwrap();
        assert_eq!(r.operator.auto(), Automorphism::Conjugation);
        assert!(ray_distance(r.operator.matrix(), &Matrix::identity(3, 3)) < 1e-12);
    }

    #[test]
    fn recover_rejects_non_symmetry() {
        let euclid = IndefiniteSpace::new(Matrix::identity(3, 3), ScalarField::Real).unwrap();
        let tri = Matrix::from_row_iterator(
            3,
            3,
            [1., 2., 0., 0., 1., 3., 0., 0., 2.]
                .into_iter()
                .map(|r| C64::new(r, 0.0)),
        );
        let t = RayMap::induced(&SemilinearOperator::linear(tri).unwrap());
        assert!(matches!(
            recover_inducing_operator(&euclid, &t, 10, 1),
            Err(Error::NotInduced { .. })
        ));
    }
}
