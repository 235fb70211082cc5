//! Property suites run by `orthosym selftest`.
//!
//! Each suite draws its instances from a seeded [`Sampler`] and reports how
//! many checks ran and how many failed. A non-`None` `tol_override` replaces
//! every suite's pass threshold.

use std::time::Instant;

use crate::idempotents::{decompose, majorant, relate};
use crate::indefinite::{
    characterize, generate_eta_isometry, is_symmetry, recover_inducing_operator, IndefiniteSpace,
    RayMap,
};
use crate::linalg::{ray_distance, trace, Automorphism, ScalarField, SemilinearOperator, C64};
use crate::sampling::{EtaKind, Sampler};
use crate::transform::{
    check_preservation, extend, extend_pieces, induce, reconstruct, TransformHandle,
};

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub n_min: usize,
    pub n_max: usize,
    /// Instances per suite.
    pub cases: usize,
    pub seed: u64,
    pub tol_override: Option<f64>,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            n_min: 3,
            n_max: 6,
            cases: 200,
            seed: 42,
            tol_override: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    pub seconds: f64,
    pub note: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn vacuous(&self) -> bool {
        self.checked == 0
    }
}

struct Ctx<'a> {
    cfg: &'a SelftestConfig,
    sampler: Sampler,
}

impl Ctx<'_> {
    fn tol(&self, default: f64) -> f64 {
        self.cfg.tol_override.unwrap_or(default)
    }

    fn n(&self, k: usize) -> usize {
        let span = self.cfg.n_max.saturating_sub(self.cfg.n_min) + 1;
        self.cfg.n_min + k % span
    }

    fn field(k: usize) -> ScalarField {
        if k.is_multiple_of(2) {
            ScalarField::Real
        } else {
            ScalarField::Complex
        }
    }

    fn operator(&mut self, n: usize, field: ScalarField, conj: bool) -> SemilinearOperator {
        let mut s = Sampler::new(self.sampler.rng_seed(), field);
        let auto = if conj && field == ScalarField::Complex {
            Automorphism::Conjugation
        } else {
            Automorphism::Identity
        };
        SemilinearOperator::new(s.invertible(n), auto).expect("well conditioned")
    }
}

impl Sampler {
    fn rng_seed(&mut self) -> u64 {
        use rand::Rng;
        self.rng().random()
    }
}

type Suite = fn(&mut Ctx<'_>) -> (usize, usize, Option<String>);

const SUITES: [(&str, Suite); 8] = [
    ("round_trip", round_trip),
    ("zero_product_preservation", zero_products),
    ("trace_identity", trace_identity),
    ("extension_well_defined", well_defined),
    ("majorant", majorants),
    ("symmetry_sufficiency", sufficiency),
    ("symmetry_necessity", necessity),
    ("symmetry_recovery", recovery),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(name, _)| *name).collect()
}

pub fn run_all(cfg: &SelftestConfig) -> Vec<SuiteOutcome> {
    SUITES
        .iter()
        .enumerate()
        .map(|(k, (name, suite))| {
            let mut ctx = Ctx {
                cfg,
                sampler: Sampler::new(cfg.seed.wrapping_add(k as u64), ScalarField::Real),
            };
            let start = Instant::now();
            let (checked, failures, note) = if cfg.cases == 0 {
                (0, 0, None)
            } else {
                suite(&mut ctx)
            };
            SuiteOutcome {
                name,
                checked,
                failures,
                seconds: start.elapsed().as_secs_f64(),
                note,
            }
        })
        .collect()
}

fn round_trip(ctx: &mut Ctx<'_>) -> (usize, usize, Option<String>) {
    let tol = ctx.tol(1e-7);
    let mut failures = 0;
    let mut worst = 0.0f64;
    for k in 0..ctx.cfg.cases {
        let (n, field) = (ctx.n(k), Ctx::field(k / 2));
        let a = ctx.operator(n, field, k % 2 == 1);
        let ok = induce(&a, field)
            .and_then(|phi| reconstruct(&phi, 10, k as u64))
            .map(|r| {
                let d = ray_distance(r.operator.matrix(), a.matrix());
                worst = worst.max(d);
                d <= tol && r.operator.auto() == a.auto()
            })
            .unwrap_or(false);
        failures += usize::from(!ok);
    }
    (
        ctx.cfg.cases,
        failures,
        Some(format!("worst relative error {worst:.2e}")),
    )
}

fn zero_products(ctx: &mut Ctx<'_>) -> (usize, usize, Option<String>) {
    let tol = ctx.tol(1e-8);
    let maps = (ctx.cfg.cases / 20).max(1);
    let mut failures = 0;
    for k in 0..maps {
        let (n, field) = (ctx.n(k), Ctx::field(k));
        let a = ctx.operator(n, field, k % 4 == 3);
        let report = induce(&a, field).and_then(|phi| check_preservation(&phi, 200, k as u64, tol));
        failures += usize::from(!matches!(report, Ok(r) if r.passed()));
    }
    let witness = check_preservation(
        &TransformHandle::transpose(3, ScalarField::Real),
        200,
        ctx.cfg.seed,
        tol,
    );
    let found = witness.map(|r| r.violations.len()).unwrap_or(0);
    failures += usize::from(found == 0);
    (
        maps + 1,
        failures,
        Some(format!("transpose witness: {found} violations")),
    )
}

fn trace_identity(ctx: &mut Ctx<'_>) -> (usize, usize, Option<String>) {
    let tol = ctx.tol(1e-8);
    let per_map = 10;
    let maps = ctx.cfg.cases.div_ceil(per_map);
    let mut failures = 0;
    let mut checked = 0;
    for k in 0..maps {
        let (n, field) = (ctx.n(k), Ctx::field(k));
        let a = ctx.operator(n, field, k % 4 == 3);
        let phi = induce(&a, field).expect("valid operator");
        let mut s = Sampler::new(ctx.sampler.rng_seed(), field);
        for _ in 0..per_map {
            let (r1, r2) = (1 + s.index(n - 1), 1 + s.index(n - 1));
            let (p, _) = s.idempotent(n, r1);
            let (q, _) = s.idempotent(n, r2);
            let lhs = extend(&phi, &p)
                .and_then(|ep| extend(&phi, &q).map(|eq| trace(&(ep.matrix() * eq.matrix()))));
            let rhs = a.auto().apply(trace(&(p.matrix() * q.matrix())));
            let ok = matches!(lhs, Ok(l) if (l - rhs).norm() <= tol * (1.0 + rhs.norm()));
            failures += usize::from(!ok);
            checked += 1;
        }
    }
    (checked, failures, None)
}

fn well_defined(ctx: &mut Ctx<'_>) -> (usize, usize, Option<String>) {
    let tol = ctx.tol(1e-8);
    let mut failures = 0;
    for k in 0..ctx.cfg.cases {
        let (n, field) = (ctx.n(k).max(3), Ctx::field(k));
        let rank = 2 + k % 2;
        let a = ctx.operator(n, field, k % 4 == 3);
        let phi = induce(&a, field).expect("valid operator");
        let mut s = Sampler::new(ctx.sampler.rng_seed(), field);
        let (p, sim) = s.idempotent(n, rank);
        let alternative = Sampler::pieces_from_similarity(&sim, rank);
        let ok = match (decompose(&p), extend_pieces(&phi, &alternative)) {
            (Ok(pieces), Ok(via_alt)) => match extend_pieces(&phi, &pieces) {
                Ok(via_default) => {
                    (via_default.matrix() - via_alt.matrix()).norm()
                        <= tol * (1.0 + via_alt.matrix().norm())
                }
                Err(_) => false,
            },
            _ => false,
        };
        failures += usize::from(!ok);
    }
    (ctx.cfg.cases, failures, None)
}

fn majorants(ctx: &mut Ctx<'_>) -> (usize, usize, Option<String>) {
    let mut failures = 0;
    for k in 0..ctx.cfg.cases {
        let (n, field) = (ctx.n(k), Ctx::field(k));
        let mut s = Sampler::new(ctx.sampler.rng_seed(), field);
        let (r1, r2) = (1 + s.index(n - 1), 1 + s.index(n - 1));
        let p1 = s.idempotent(n, r1).0;
        let p2 = s.idempotent(n, r2).0;
        let ok = majorant(&p1, &p2)
            .and_then(|m| {
                Ok(relate(&p1, &m, ctx.cfg.tol_override)?.p_leq_q
                    && relate(&p2, &m, ctx.cfg.tol_override)?.p_leq_q)
            })
            .unwrap_or(false);
        failures += usize::from(!ok);
    }
    (ctx.cfg.cases, failures, None)
}

const ETA_KINDS: [EtaKind; 5] = [
    EtaKind::Signature,
    EtaKind::Hermitian,
    EtaKind::RotatedSignature,
    EtaKind::Symplectic,
    EtaKind::UpperTriangular,
];

fn space(ctx: &mut Ctx<'_>, k: usize) -> IndefiniteSpace {
    let (n, field) = (ctx.n(k), Ctx::field(k / ETA_KINDS.len()));
    let mut s = Sampler::new(ctx.sampler.rng_seed(), field);
    let eta = s.eta(n, ETA_KINDS[k % ETA_KINDS.len()]);
    IndefiniteSpace::new(eta, field).expect("sampled η is invertible")
}

fn sufficiency(ctx: &mut Ctx<'_>) -> (usize, usize, Option<String>) {
    let tol = ctx.tol(1e-8);
    let count = (ctx.cfg.cases / 4).max(1);
    let mut failures = 0;
    let mut non_self_adjoint = 0;
    for k in 0..count {
        let sp = space(ctx, k);
        non_self_adjoint += usize::from(!sp.is_self_adjoint());
        let c = 0.25 + 4.0 * ctx.sampler.uniform(0.0, 1.0);
        let v = generate_eta_isometry(&sp, ctx.sampler.rng_seed(), c).expect("positive scale");
        let report = is_symmetry(&sp, &RayMap::induced(&v), 100, k as u64, 1e-8);
        let constant = characterize(&sp, &v).ok().and_then(|ch| ch.constant());
        let ok = matches!(report, Ok(r) if r.passed())
            && matches!(constant, Some(z) if (z - C64::new(c, 0.0)).norm() <= tol * c);
        failures += usize::from(!ok);
    }
    (
        count,
        failures,
        Some(format!("{non_self_adjoint} with non-self-adjoint η")),
    )
}

fn necessity(ctx: &mut Ctx<'_>) -> (usize, usize, Option<String>) {
    let tol = ctx.tol(1e-8);
    let count = (ctx.cfg.cases / 4).max(1);
    let mut failures = 0;
    for k in 0..count {
        let sp = space(ctx, k);
        let u = ctx.operator(sp.dim(), sp.field(), false);
        let flagged = matches!(characterize(&sp, &u), Ok(ch) if !ch.is_symmetry());
        let found = is_symmetry(&sp, &RayMap::induced(&u), 100, k as u64, tol)
            .map(|r| r.violations.len())
            .unwrap_or(0);
        failures += usize::from(!flagged || found == 0);
    }
    (count, failures, None)
}

fn recovery(ctx: &mut Ctx<'_>) -> (usize, usize, Option<String>) {
    let tol = ctx.tol(1e-6);
    let count = (ctx.cfg.cases / 4).max(1);
    let mut failures = 0;
    for k in 0..count {
        let sp = space(ctx, k);
        let v = generate_eta_isometry(&sp, ctx.sampler.rng_seed(), 1.0).expect("positive scale");
        let u = if sp.field() == ScalarField::Complex
            && k % 2 == 1
            && sp.is_self_adjoint()
            && real_eta(&sp)
        {
            // x ↦ V conj(x) is a symmetry when η is real
            SemilinearOperator::new(v.matrix().clone(), Automorphism::Conjugation)
                .expect("invertible")
        } else {
            v
        };
        let ok = recover_inducing_operator(&sp, &RayMap::induced(&u), 10, k as u64)
            .map(|r| {
                ray_distance(r.operator.matrix(), u.matrix()) <= tol
                    && r.operator.auto() == u.auto()
            })
            .unwrap_or(false);
        failures += usize::from(!ok);
    }
    (count, failures, None)
}

fn real_eta(sp: &IndefiniteSpace) -> bool {
    sp.eta().iter().all(|z| z.im == 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_budget_passes() {
        let cfg = SelftestConfig {
            cases: 40,
            ..SelftestConfig::default()
        };
        let outcomes = run_all(&cfg);
        assert_eq!(outcomes.len(), 8);
        for o in &outcomes {
            assert!(
                o.passed(),
                "{} failed {}/{} ({:?})",
                o.name,
                o.failures,
                o.checked,
                o.note
            );
            assert!(!o.vacuous());
        }
    }

    #[test]
    fn zero_budget_is_vacuous() {
        let cfg = SelftestConfig {
            cases: 0,
            ..SelftestConfig::default()
        };
        assert!(run_all(&cfg).iter().all(|o| o.passed() && o.vacuous()));
    }

    #[test]
    fn impossible_tolerance_fails() {
        let cfg = SelftestConfig {
            cases: 8,
            tol_override: Some(1e-20),
            ..SelftestConfig::default()
        };
        assert!(run_all(&cfg).iter().any(|o| !o.passed()));
    }
}
