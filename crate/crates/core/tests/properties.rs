//! Randomized invariants across the public API. Instances come from seeded
//! samplers, so proptest only drives seeds and shapes.

use orthosym_core::idempotents::{default_relation_tol, FiniteRankIdempotent};
use orthosym_core::indefinite::{
    characterize, generate_eta_isometry, is_symmetry, ray_eta_orthogonal, Characterization,
};
use orthosym_core::linalg::{inverse, kernel_and_range, singular_values, ColVector};
use orthosym_core::sampling::{EtaKind, Sampler};
use orthosym_core::transform::{check_preservation, extend, induce, reconstruct};
use orthosym_core::{
    decompose, majorant, pair, relate, tensor, trace, Automorphism, IndefiniteSpace, Matrix, Ray,
    RayMap, ScalarField, SemilinearOperator, Vector, C64,
};
use proptest::prelude::*;

fn field_of(complex: bool) -> ScalarField {
    if complex {
        ScalarField::Complex
    } else {
        ScalarField::Real
    }
}

fn close(a: C64, b: C64, scale: f64, tol: f64) -> bool {
    (a - b).norm() <= tol * scale.max(1.0)
}

fn operator(s: &mut Sampler, n: usize, conj: bool) -> SemilinearOperator {
    let auto = if conj && s.field() == ScalarField::Complex {
        Automorphism::Conjugation
    } else {
        Automorphism::Identity
    };
    SemilinearOperator::new(s.invertible(n), auto).unwrap()
}

fn numeric_rank(m: &Matrix) -> usize {
    let sv = singular_values(m);
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-9 * top.max(1.0)).count()
}

/// `rng P ⊆ rng Q` and `ker P ⊇ ker Q`, from bases alone.
fn below_by_subspaces(p: &Matrix, q: &Matrix) -> bool {
    let (kp, kq) = (kernel_and_range(p, None), kernel_and_range(q, None));
    let n = p.nrows();
    let mut joined = Matrix::zeros(n, kq.range.ncols() + kp.range.ncols());
    joined.columns_mut(0, kq.range.ncols()).copy_from(&kq.range);
    joined
        .columns_mut(kq.range.ncols(), kp.range.ncols())
        .copy_from(&kp.range);
    let ranges = numeric_rank(&joined) == kq.range.ncols();
    let kernels = kq.kernel.ncols() == 0 || (p * &kq.kernel).norm() <= 1e-8 * (1.0 + p.norm());
    ranges && kernels
}

fn nested(
    s: &mut Sampler,
    n: usize,
    r1: usize,
    r2: usize,
) -> (FiniteRankIdempotent, FiniteRankIdempotent) {
    let sim = s.invertible(n);
    let inv = inverse(&sim).unwrap();
    let proj = |r: usize| {
        let d = Matrix::from_diagonal(&ColVector::from_iterator(
            n,
            (0..n).map(|i| C64::new(f64::from(u8::from(i < r)), 0.0)),
        ));
        FiniteRankIdempotent::new(&sim * d * &inv).unwrap()
    };
    (proj(r1), proj(r2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_is_bilinear(seed in any::<u64>(), n in 1usize..9, complex in any::<bool>()) {
        let mut s = Sampler::new(seed, field_of(complex));
        let (x, y, f) = (s.vector(n), s.vector(n), s.functional(n));
        let (a, b) = (s.scalar(), s.scalar());
        let combo = Vector(x.coords() * a + y.coords() * b);
        let lhs = pair(&combo, &f).unwrap();
        let rhs = a * pair(&x, &f).unwrap() + b * pair(&y, &f).unwrap();
        let scale = (a.norm() * x.norm() + b.norm() * y.norm()) * f.norm();
        prop_assert!(close(lhs, rhs, scale, 1e-12));
    }

    #[test]
    fn tensors_multiply_through_the_pairing(seed in any::<u64>(), n in 1usize..9, complex in any::<bool>()) {
        let mut s = Sampler::new(seed, field_of(complex));
        let (x, f, y, g) = (s.vector(n), s.functional(n), s.vector(n), s.functional(n));
        let xf = tensor(&x, &f).unwrap();
        prop_assert!(close(trace(&xf), pair(&x, &f).unwrap(), x.norm() * f.norm(), 1e-14));
        let prod = &xf * tensor(&y, &g).unwrap();
        let expected = tensor(&x, &g).unwrap() * pair(&y, &f).unwrap();
        prop_assert!((prod - &expected).norm() <= 1e-12 * (x.norm() * f.norm() * y.norm() * g.norm()).max(1.0));
    }

    #[test]
    fn adjoint_identity(seed in any::<u64>(), n in 1usize..9, complex in any::<bool>(), conj in any::<bool>()) {
        let mut s = Sampler::new(seed, field_of(complex));
        let a = operator(&mut s, n, conj);
        let (x, f) = (s.vector(n), s.functional(n));
        let lhs = pair(&a.apply(&x).unwrap(), &f).unwrap();
        let rhs = a.auto().apply(pair(&x, &a.adjoint().apply(&f).unwrap()).unwrap());
        prop_assert!(close(lhs, rhs, a.matrix().norm() * x.norm() * f.norm(), 1e-12));
    }

    #[test]
    fn composition_applies_in_sequence(seed in any::<u64>(), n in 1usize..9, c1 in any::<bool>(), c2 in any::<bool>()) {
        let mut s = Sampler::new(seed, ScalarField::Complex);
        let (a, b) = (operator(&mut s, n, c1), operator(&mut s, n, c2));
        let x = s.vector(n);
        let direct = a.compose(&b).unwrap().apply(&x).unwrap();
        let seq = a.apply(&b.apply(&x).unwrap()).unwrap();
        prop_assert!((direct.coords() - seq.coords()).norm() <= 1e-12 * a.matrix().norm() * b.matrix().norm() * x.norm());
    }

    #[test]
    fn rank_one_zero_products(seed in any::<u64>(), n in 3usize..9, complex in any::<bool>(), crafted in any::<bool>()) {
        let mut s = Sampler::new(seed, field_of(complex));
        let p = s.rank_one(n);
        let q = if crafted { s.annihilated_by(&p) } else { s.rank_one(n) };
        let (pm, qm) = (p.to_finite_rank(), q.to_finite_rank());
        let tol = default_relation_tol(pm.matrix(), qm.matrix());
        let rel = relate(&pm, &qm, Some(tol)).unwrap();
        let yf = pair(q.x(), p.f()).unwrap();
        // ‖PQ‖ = |<y,f>|·‖x‖‖g‖
        let predicted = yf.norm() * p.x().norm() * q.f().norm() <= tol;
        prop_assert_eq!(rel.pq_zero, predicted);
        if crafted {
            prop_assert!(rel.pq_zero);
        }
    }

    #[test]
    fn decompose_gives_orthogonal_pieces(seed in any::<u64>(), n in 3usize..9, complex in any::<bool>(), r in 1usize..8) {
        let mut s = Sampler::new(seed, field_of(complex));
        let rank = r.min(n);
        let (p, _) = s.idempotent(n, rank);
        let pieces = decompose(&p).unwrap();
        prop_assert_eq!(pieces.len(), rank);
        let scale = 1.0 + p.matrix().norm();
        let mut sum = Matrix::zeros(n, n);
        for (i, a) in pieces.iter().enumerate() {
            sum += a.matrix();
            for b in &pieces[i + 1..] {
                prop_assert!((a.matrix() * b.matrix()).norm() <= 1e-8 * scale * scale);
                prop_assert!((b.matrix() * a.matrix()).norm() <= 1e-8 * scale * scale);
            }
        }
        prop_assert!((sum - p.matrix()).norm() <= 1e-8 * scale);
    }

    #[test]
    fn order_matches_subspaces(seed in any::<u64>(), n in 3usize..8, complex in any::<bool>(), linked in any::<bool>()) {
        let mut s = Sampler::new(seed, field_of(complex));
        let r2 = 1 + s.index(n - 1);
        let r1 = 1 + s.index(r2);
        let (p, q) = if linked {
            nested(&mut s, n, r1, r2)
        } else {
            (s.idempotent(n, r1).0, s.idempotent(n, r2).0)
        };
        let rel = relate(&p, &q, None).unwrap();
        prop_assert_eq!(rel.p_leq_q, below_by_subspaces(p.matrix(), q.matrix()));
        if linked {
            prop_assert!(rel.p_leq_q);
        }
    }

    #[test]
    fn majorant_dominates(seed in any::<u64>(), n in 3usize..9, complex in any::<bool>()) {
        let mut s = Sampler::new(seed, field_of(complex));
        let (r1, r2) = (1 + s.index(n - 1), 1 + s.index(n - 1));
        let (p1, p2) = (s.idempotent(n, r1).0, s.idempotent(n, r2).0);
        let m = majorant(&p1, &p2).unwrap();
        prop_assert!(m.rank() <= n);
        prop_assert!(relate(&p1, &m, None).unwrap().p_leq_q);
        prop_assert!(relate(&p2, &m, None).unwrap().p_leq_q);
        let same = majorant(&p1, &p1).unwrap();
        prop_assert!(relate(&p1, &same, None).unwrap().p_leq_q);
    }

    #[test]
    fn extension_preserves_rank_and_order(seed in any::<u64>(), n in 3usize..8, complex in any::<bool>(), conj in any::<bool>()) {
        let mut s = Sampler::new(seed, field_of(complex));
        let a = operator(&mut s, n, conj);
        let phi = induce(&a, s.field()).unwrap();
        let r2 = 1 + s.index(n - 1);
        let r1 = 1 + s.index(r2);
        let (p, q) = nested(&mut s, n, r1, r2);
        let other = s.idempotent(n, r1).0;
        let (ep, eq, eo) = (extend(&phi, &p).unwrap(), extend(&phi, &q).unwrap(), extend(&phi, &other).unwrap());
        prop_assert_eq!(ep.rank(), p.rank());
        prop_assert_eq!(numeric_rank(ep.matrix()), r1);
        prop_assert!(relate(&ep, &eq, None).unwrap().p_leq_q);
        prop_assert_eq!(relate(&other, &q, None).unwrap().p_leq_q, relate(&eo, &eq, None).unwrap().p_leq_q);
    }

    #[test]
    fn induced_maps_ignore_operator_scale(seed in any::<u64>(), n in 3usize..8, complex in any::<bool>(), conj in any::<bool>()) {
        let mut s = Sampler::new(seed, field_of(complex));
        let a = operator(&mut s, n, conj);
        let c = s.nonzero_scalar();
        let (phi, psi) = (induce(&a, s.field()).unwrap(), induce(&a.scaled(c).unwrap(), s.field()).unwrap());
        for _ in 0..5 {
            let p = s.rank_one(n);
            let (u, v) = (phi.eval(&p).unwrap().matrix(), psi.eval(&p).unwrap().matrix());
            prop_assert!((&u - v).norm() <= 1e-10 * (1.0 + u.norm()));
        }
        let rec = reconstruct(&phi, 5, seed).unwrap();
        let rec_scaled = reconstruct(&psi, 5, seed).unwrap();
        prop_assert!((rec.operator.matrix() - rec_scaled.operator.matrix()).norm() <= 1e-8);
    }

    #[test]
    fn induced_maps_preserve_zero_products(seed in any::<u64>(), n in 3usize..7, complex in any::<bool>(), conj in any::<bool>()) {
        let mut s = Sampler::new(seed, field_of(complex));
        let a = operator(&mut s, n, conj);
        let report = check_preservation(&induce(&a, s.field()).unwrap(), 200, seed, 1e-8).unwrap();
        prop_assert!(report.passed());
    }
}

const KINDS: [EtaKind; 5] = [
    EtaKind::Signature,
    EtaKind::Hermitian,
    EtaKind::RotatedSignature,
    EtaKind::Symplectic,
    EtaKind::UpperTriangular,
];

fn space(s: &mut Sampler, n: usize, kind: usize) -> IndefiniteSpace {
    IndefiniteSpace::new(s.eta(n, KINDS[kind % KINDS.len()]), s.field()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scaled_isometries_are_symmetries(seed in any::<u64>(), n in 3usize..7, complex in any::<bool>(), kind in 0usize..5, c in 0.1f64..5.0) {
        let mut s = Sampler::new(seed, field_of(complex));
        let sp = space(&mut s, n, kind);
        let u = generate_eta_isometry(&sp, seed, c).unwrap();
        let lambda = s.nonzero_scalar();
        let v = u.scaled(lambda).unwrap();
        prop_assert!(is_symmetry(&sp, &RayMap::induced(&v), 300, seed, 1e-8).unwrap().passed());
        let constant = characterize(&sp, &u).unwrap().constant().unwrap();
        prop_assert!((constant - C64::new(c, 0.0)).norm() <= 1e-8 * c);
    }

    /// Zero violations exactly when `characterize` accepts, over a mix of
    /// isometries, scaled isometries, conjugations and generic operators.
    #[test]
    fn violations_iff_rejected(seed in any::<u64>(), n in 3usize..7, complex in any::<bool>(), kind in 0usize..5, shape in 0usize..4) {
        let mut s = Sampler::new(seed, field_of(complex));
        let sp = space(&mut s, n, kind);
        let iso = generate_eta_isometry(&sp, seed, 1.0).unwrap();
        let real_eta = sp.eta().iter().all(|z| z.im == 0.0);
        let u = match shape {
            0 => iso,
            1 => iso.scaled(s.nonzero_scalar()).unwrap(),
            2 if complex && real_eta => SemilinearOperator::new(iso.matrix().clone(), Automorphism::Conjugation).unwrap(),
            _ => operator(&mut s, n, false),
        };
        let accepted = characterize(&sp, &u).unwrap().is_symmetry();
        let clean = is_symmetry(&sp, &RayMap::induced(&u), 300, seed, 1e-8).unwrap().passed();
        prop_assert_eq!(accepted, clean);
    }

    #[test]
    fn linear_constant_matches_trace_formula(seed in any::<u64>(), n in 3usize..7, complex in any::<bool>(), kind in 0usize..5, c in 0.1f64..5.0) {
        let mut s = Sampler::new(seed, field_of(complex));
        let sp = space(&mut s, n, kind);
        let u = generate_eta_isometry(&sp, seed, c).unwrap();
        let m = u.matrix();
        let formula = trace(&(inverse(sp.eta()).unwrap() * m.adjoint() * sp.eta() * m)) / C64::new(n as f64, 0.0);
        match characterize(&sp, &u).unwrap() {
            Characterization::LinearSymmetry(fit) => prop_assert!((fit - formula).norm() <= 1e-8 * c),
            other => prop_assert!(false, "expected a linear symmetry, got {:?}", other),
        }
    }

    #[test]
    fn eta_orthogonality_ignores_representatives(seed in any::<u64>(), n in 3usize..7, complex in any::<bool>(), kind in 0usize..5) {
        let mut s = Sampler::new(seed, field_of(complex));
        let sp = space(&mut s, n, kind);
        let x = s.vector(n);
        let y = orthosym_core::indefinite::eta_orthogonal_partner(&sp, &x, &mut s);
        let z = s.vector(n);
        let (a, b) = (s.nonzero_scalar(), s.nonzero_scalar());
        for other in [&y, &z] {
            let base = ray_eta_orthogonal(&sp, &Ray::new(x.clone()).unwrap(), &Ray::new(other.clone()).unwrap(), 1e-8).unwrap();
            let scaled = ray_eta_orthogonal(&sp, &Ray::new(x.scale(a)).unwrap(), &Ray::new(other.scale(b)).unwrap(), 1e-8).unwrap();
            prop_assert_eq!(base, scaled);
        }
        prop_assert!(ray_eta_orthogonal(&sp, &Ray::new(x).unwrap(), &Ray::new(y).unwrap(), 1e-8).unwrap());
    }
}
