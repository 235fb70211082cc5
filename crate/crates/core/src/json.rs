//! JSON interchange formats.
//!
//! Matrices are `{"field": "real"|"complex", "n": 3, "data": [...]}` with
//! row-major data; real entries are plain numbers and complex entries are
//! `[re, im]` pairs. Semilinear operators add `"auto": "id"|"conj"`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::idempotents::{FiniteRankIdempotent, RankOneIdempotent};
use crate::indefinite::{Characterization, IndefiniteSpace, Ray, SymmetryReport};
use crate::linalg::{
    Automorphism, ColVector, Functional, Matrix, ScalarField, SemilinearOperator, Vector, C64,
};
use crate::transform::{PreservationReport, ReconstructionResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Real(f64),
    Complex([f64; 2]),
}

impl ScalarJson {
    fn encode(z: C64, field: ScalarField) -> Self {
        match field {
            ScalarField::Real => ScalarJson::Real(z.re),
            ScalarField::Complex => ScalarJson::Complex([z.re, z.im]),
        }
    }

    fn decode(self) -> C64 {
        match self {
            ScalarJson::Real(r) => C64::new(r, 0.0),
            ScalarJson::Complex([re, im]) => C64::new(re, im),
        }
    }
}

fn encode_all<'a>(it: impl IntoIterator<Item = &'a C64>, field: ScalarField) -> Vec<ScalarJson> {
    it.into_iter()
        .map(|&z| ScalarJson::encode(z, field))
        .collect()
}

fn decode_column(data: &[ScalarJson], n: usize, field: ScalarField) -> Result<ColVector> {
    if data.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: data.len(),
        });
    }
    let v = ColVector::from_iterator(n, data.iter().map(|s| s.decode()));
    field.check_entries(v.iter())?;
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: ScalarField,
    pub n: usize,
    pub data: Vec<ScalarJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auto: Option<Automorphism>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix, field: ScalarField) -> Self {
        let n = m.nrows();
        let data = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| ScalarJson::encode(m[(i, j)], field))
            .collect();
        Self {
            field,
            n,
            data,
            auto: None,
        }
    }

    pub fn from_operator(a: &SemilinearOperator, field: ScalarField) -> Self {
        Self {
            auto: Some(a.auto()),
            ..Self::from_matrix(a.matrix(), field)
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        let n = self.n;
        if self.data.len() != n * n {
            return Err(Error::Malformed(format!(
                "expected {} entries, found {}",
                n * n,
                self.data.len()
            )));
        }
        let m = Matrix::from_row_iterator(n, n, self.data.iter().map(|s| s.decode()));
        self.field.check_entries(m.iter())?;
        Ok(m)
    }

    /// Reads a semilinear operator; a missing `"auto"` means linear.
    pub fn to_operator(&self) -> Result<SemilinearOperator> {
        let auto = self.auto.unwrap_or(Automorphism::Identity);
        if !self.field.admits(auto) {
            return Err(Error::ConjugationOnReal);
        }
        SemilinearOperator::new(self.to_matrix()?, auto)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdempotentKind {
    Rank1,
    FiniteRank,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdempotentJson {
    pub kind: IdempotentKind,
    #[serde(flatten)]
    pub matrix: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<ScalarJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<ScalarJson>>,
}

impl IdempotentJson {
    pub fn from_rank_one(p: &RankOneIdempotent, field: ScalarField) -> Self {
        Self {
            kind: IdempotentKind::Rank1,
            matrix: MatrixJson::from_matrix(&p.matrix(), field),
            x: Some(encode_all(p.x().coords().iter(), field)),
            f: Some(encode_all(p.f().coords().iter(), field)),
        }
    }

    pub fn from_finite_rank(p: &FiniteRankIdempotent, field: ScalarField) -> Self {
        Self {
            kind: IdempotentKind::FiniteRank,
            matrix: MatrixJson::from_matrix(p.matrix(), field),
            x: None,
            f: None,
        }
    }

    /// Rebuilds a rank-one idempotent from its stored `x` and `f`.
    pub fn to_rank_one(&self) -> Result<RankOneIdempotent> {
        let (Some(x), Some(f)) = (&self.x, &self.f) else {
            return Err(Error::Malformed(
                "rank-one idempotent needs \"x\" and \"f\"".into(),
            ));
        };
        if self.kind != IdempotentKind::Rank1 {
            return Err(Error::Malformed("expected kind \"rank1\"".into()));
        }
        let n = self.matrix.n;
        let x = Vector(decode_column(x, n, self.matrix.field)?);
        let f = Functional(decode_column(f, n, self.matrix.field)?);
        RankOneIdempotent::from_pair(x, f)
    }

    pub fn to_finite_rank(&self) -> Result<FiniteRankIdempotent> {
        FiniteRankIdempotent::new(self.matrix.to_matrix()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub n: usize,
    pub field: ScalarField,
    pub eta: MatrixJson,
}

impl SpaceJson {
    pub fn from_space(space: &IndefiniteSpace) -> Self {
        Self {
            n: space.dim(),
            field: space.field(),
            eta: MatrixJson::from_matrix(space.eta(), space.field()),
        }
    }

    pub fn to_space(&self) -> Result<IndefiniteSpace> {
        if self.eta.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.eta.n,
            });
        }
        IndefiniteSpace::new(self.eta.to_matrix()?, self.field)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionJson {
    #[serde(rename = "A")]
    pub a: MatrixJson,
    pub auto: Automorphism,
    pub residual: f64,
    pub probes: usize,
}

impl ReconstructionJson {
    pub fn from_result(r: &ReconstructionResult, field: ScalarField) -> Self {
        Self {
            a: MatrixJson::from_matrix(r.operator.matrix(), field),
            auto: r.operator.auto(),
            residual: r.residual,
            probes: r.probes_used,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdempotentPairJson {
    pub p: IdempotentJson,
    pub q: IdempotentJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreservationJson {
    pub violations: Vec<IdempotentPairJson>,
    pub pairs: usize,
}

impl PreservationJson {
    pub fn from_report(r: &PreservationReport, field: ScalarField) -> Self {
        Self {
            violations: r
                .violations
                .iter()
                .map(|(p, q)| IdempotentPairJson {
                    p: IdempotentJson::from_rank_one(p, field),
                    q: IdempotentJson::from_rank_one(q, field),
                })
                .collect(),
            pairs: r.pairs_tested,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayPairJson {
    pub x: Vec<ScalarJson>,
    pub y: Vec<ScalarJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryJson {
    pub violations: Vec<RayPairJson>,
    pub pairs: usize,
}

impl SymmetryJson {
    pub fn from_report(r: &SymmetryReport, field: ScalarField) -> Self {
        let enc = |ray: &Ray| encode_all(ray.representative().coords().iter(), field);
        Self {
            violations: r
                .violations
                .iter()
                .map(|(x, y)| RayPairJson {
                    x: enc(x),
                    y: enc(y),
                })
                .collect(),
            pairs: r.pairs_tested,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharacterizationKind {
    Linear,
    Conjugate,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationJson {
    pub kind: CharacterizationKind,
    pub constant: Option<[f64; 2]>,
}

impl From<Characterization> for CharacterizationJson {
    fn from(c: Characterization) -> Self {
        let kind = match c {
            Characterization::LinearSymmetry(_) => CharacterizationKind::Linear,
            Characterization::ConjugateSymmetry(_) => CharacterizationKind::Conjugate,
            Characterization::NotSymmetry => CharacterizationKind::None,
        };
        Self {
            kind,
            constant: c.constant().map(|z| [z.re, z.im]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Sampler;
    use proptest::prelude::*;

    #[test]
    fn real_matrix_layout() {
        let m = Matrix::from_row_iterator(3, 3, (1..=9).map(|k| C64::new(k as f64, 0.0)));
        let js = serde_json::to_value(MatrixJson::from_matrix(&m, ScalarField::Real)).unwrap();
        assert_eq!(
            js,
            serde_json::json!({"field": "real", "n": 3, "data": [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]})
        );
    }

    #[test]
    fn complex_operator_layout() {
        let a = SemilinearOperator::new(Matrix::identity(3, 3), Automorphism::Conjugation).unwrap();
        let js = serde_json::to_value(MatrixJson::from_operator(&a, ScalarField::Complex)).unwrap();
        assert_eq!(js["auto"], "conj");
        assert_eq!(js["data"][0], serde_json::json!([1.0, 0.0]));
        assert_eq!(js["field"], "complex");
    }

    #[test]
    fn rank_one_layout() {
        let p = RankOneIdempotent::standard(3, 1);
        let js =
            serde_json::to_value(IdempotentJson::from_rank_one(&p, ScalarField::Real)).unwrap();
        assert_eq!(js["kind"], "rank1");
        assert_eq!(js["x"], serde_json::json!([0.0, 1.0, 0.0]));
        assert_eq!(js["n"], 3);
    }

    #[test]
    fn rejects_bad_input() {
        let bad: MatrixJson =
            serde_json::from_str(r#"{"field":"real","n":3,"data":[[1,2],0,0,0,1,0,0,0,1]}"#)
                .unwrap();
        assert_eq!(bad.to_matrix().unwrap_err(), Error::ComplexEntryInRealField);
        let short: MatrixJson =
            serde_json::from_str(r#"{"field":"real","n":3,"data":[1,0,0]}"#).unwrap();
        assert!(matches!(short.to_matrix(), Err(Error::Malformed(_))));
        let conj: MatrixJson = serde_json::from_str(
            r#"{"field":"real","n":3,"data":[1,0,0,0,1,0,0,0,1],"auto":"conj"}"#,
        )
        .unwrap();
        assert_eq!(conj.to_operator().unwrap_err(), Error::ConjugationOnReal);
    }

    #[test]
    fn characterization_layout() {
        let js = serde_json::to_value(CharacterizationJson::from(
            Characterization::LinearSymmetry(C64::new(1.0, 0.0)),
        ))
        .unwrap();
        assert_eq!(
            js,
            serde_json::json!({"kind": "linear", "constant": [1.0, 0.0]})
        );
        let js = serde_json::to_value(CharacterizationJson::from(Characterization::NotSymmetry))
            .unwrap();
        assert_eq!(js["kind"], "none");
    }

    proptest! {
        #[test]
        fn operators_survive_json(seed in any::<u64>(), n in 3usize..7, conj in any::<bool>()) {
            let mut s = Sampler::new(seed, ScalarField::Complex);
            let auto = if conj { Automorphism::Conjugation } else { Automorphism::Identity };
            let a = SemilinearOperator::new(s.invertible(n), auto).unwrap();
            let text = serde_json::to_string(&MatrixJson::from_operator(&a, ScalarField::Complex)).unwrap();
            let back: MatrixJson = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back.to_operator().unwrap(), a);
        }

        #[test]
        fn rank_ones_survive_json(seed in any::<u64>(), n in 3usize..7) {
            let mut s = Sampler::new(seed, ScalarField::Real);
            let p = s.rank_one(n);
            let text = serde_json::to_string(&IdempotentJson::from_rank_one(&p, ScalarField::Real)).unwrap();
            let back: IdempotentJson = serde_json::from_str(&text).unwrap();
            let q = back.to_rank_one().unwrap();
            prop_assert!((q.matrix() - p.matrix()).norm() <= 1e-12 * p.matrix().norm());
        }
    }
}
