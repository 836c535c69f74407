//! Stable JSON report schemas ("schema": "v1").
//!
//! Scalars are serialized in their text syntax (decimal for prime fields,
//! bracketed power-basis coordinates for extensions); points are arrays of
//! scalar strings; subspaces carry their projective dimension and canonical
//! echelon basis. Struct field order is the byte order in the output, so a
//! fixed configuration always produces identical bytes.

use serde::Serialize;

use crate::gaussmap::{GaussPointData, RankEstimate};
use crate::gf::FieldCtx;
use crate::linproj::{LinearSubspace, ProjPoint, PLUCKER_MINOR_ORDER};

use super::fiber::FiberAnalysis;
use super::{CheckResult, ImageDimEstimate, VarietyAnalysis, VerifyOutcome};

pub const SCHEMA: &str = "v1";

pub const GROUPING_NOTE: &str = "groups are keyed by exact equality of the degeneracy plane; \
     this refines irreducible components at the rational-point level and is \
     not claimed to be a component decomposition";

#[derive(Serialize, Clone)]
pub struct FieldJson {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    pub modulus: Vec<u16>,
}

impl FieldJson {
    pub fn of(field: &FieldCtx) -> FieldJson {
        FieldJson { p: field.p(), k: field.k(), q: field.order(), modulus: field.modulus() }
    }
}

pub fn point_json(x: &ProjPoint) -> Vec<String> {
    x.coords().iter().map(|c| c.to_string()).collect()
}

#[derive(Serialize, Clone)]
pub struct SubspaceJson {
    pub dim: i64,
    pub basis: Vec<Vec<String>>,
}

impl SubspaceJson {
    pub fn of(s: &LinearSubspace) -> SubspaceJson {
        SubspaceJson {
            dim: s.proj_dim(),
            basis: (0..s.basis().rows())
                .map(|r| s.basis().row(r).iter().map(|c| c.to_string()).collect())
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct PluckerJson {
    pub coords: Vec<String>,
    pub minor_order: &'static str,
}

impl PluckerJson {
    pub fn of(s: &LinearSubspace) -> crate::error::Result<PluckerJson> {
        Ok(PluckerJson {
            coords: s.plucker()?.iter().map(|c| c.to_string()).collect(),
            minor_order: PLUCKER_MINOR_ORDER,
        })
    }
}

#[derive(Serialize)]
pub struct RankSampleJson {
    pub m: u32,
    pub q: u64,
    pub points: usize,
    pub max_rank: usize,
}

#[derive(Serialize)]
pub struct ImageCountJson {
    pub m: u32,
    pub q: u64,
    pub distinct_gamma: u64,
}

#[derive(Serialize)]
pub struct ImageDimJson {
    pub value: i64,
    pub conclusive: bool,
    pub log_ratio: f64,
    pub counts: Vec<ImageCountJson>,
}

impl ImageDimJson {
    pub fn of(est: &ImageDimEstimate) -> ImageDimJson {
        ImageDimJson {
            value: est.value,
            conclusive: est.conclusive,
            log_ratio: est.log_ratio,
            counts: est
                .counts
                .iter()
                .map(|c| ImageCountJson { m: c.m, q: c.field_order, distinct_gamma: c.distinct_gamma })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct ConeCheckJson {
    pub vertex: Vec<String>,
    pub is_cone: bool,
}

#[derive(Serialize)]
pub struct EvidenceJson {
    pub seed: u64,
    pub trials: usize,
    pub ext_bound: u32,
    pub budget_cap: u64,
    pub budget_used: u64,
}

#[derive(Serialize)]
pub struct VarietyReportJson {
    pub schema: &'static str,
    pub field: FieldJson,
    pub f: String,
    pub ambient_dim: usize,
    pub n: usize,
    pub generic_rank: usize,
    pub rank_samples: Vec<RankSampleJson>,
    pub image_dim_estimate: ImageDimJson,
    pub separability: &'static str,
    pub strange_locus: SubspaceJson,
    pub cone_vertices: Vec<ConeCheckJson>,
    pub theorem_conflicts: Vec<String>,
    pub evidence: EvidenceJson,
}

pub fn rank_samples_json(est: &RankEstimate) -> Vec<RankSampleJson> {
    est.samples
        .iter()
        .map(|s| RankSampleJson { m: s.m, q: s.field_order, points: s.points, max_rank: s.max_rank })
        .collect()
}

impl VarietyReportJson {
    pub fn of(a: &VarietyAnalysis) -> VarietyReportJson {
        VarietyReportJson {
            schema: SCHEMA,
            field: FieldJson::of(&a.field),
            f: a.f_text.clone(),
            ambient_dim: a.ambient_dim,
            n: a.n,
            generic_rank: a.rank.rank,
            rank_samples: rank_samples_json(&a.rank),
            image_dim_estimate: ImageDimJson::of(&a.image),
            separability: a.separability.as_str(),
            strange_locus: SubspaceJson::of(&a.strange_locus),
            cone_vertices: a
                .cone_checks
                .iter()
                .map(|(v, is_cone)| ConeCheckJson { vertex: point_json(v), is_cone: *is_cone })
                .collect(),
            theorem_conflicts: a.theorem_conflicts.clone(),
            evidence: EvidenceJson {
                seed: a.seed,
                trials: a.trials,
                ext_bound: a.ext_bound,
                budget_cap: a.budget_cap,
                budget_used: a.budget_used,
            },
        }
    }
}

#[derive(Serialize)]
pub struct FiberGroupJson {
    pub kappa: SubspaceJson,
    pub points: Vec<Vec<String>>,
    pub all_on_plane: bool,
    pub ranks: Vec<usize>,
}

#[derive(Serialize)]
pub struct FiberEvidenceJson {
    pub budget_used: u64,
}

#[derive(Serialize)]
pub struct FiberReportJson {
    pub schema: &'static str,
    pub field: FieldJson,
    pub f: String,
    pub extension_m: u32,
    pub base_point: Vec<String>,
    pub gamma_value: Vec<String>,
    pub base_rank: usize,
    pub base_kappa: SubspaceJson,
    pub fiber_points: Vec<Vec<String>>,
    pub singular_points: Vec<Vec<String>>,
    pub groups: Vec<FiberGroupJson>,
    pub grouping_note: &'static str,
    pub evidence: FiberEvidenceJson,
}

impl FiberReportJson {
    pub fn of(fib: &FiberAnalysis, f_text: &str, budget_used: u64) -> FiberReportJson {
        FiberReportJson {
            schema: SCHEMA,
            field: FieldJson::of(fib.base.field()),
            f: f_text.to_owned(),
            extension_m: fib.m,
            base_point: point_json(&fib.base),
            gamma_value: point_json(&fib.gamma),
            base_rank: fib.base_rank,
            base_kappa: SubspaceJson::of(&fib.base_kappa),
            fiber_points: fib.smooth_points.iter().map(point_json).collect(),
            singular_points: fib.singular_on_kappa.iter().map(point_json).collect(),
            groups: fib
                .groups
                .iter()
                .map(|g| FiberGroupJson {
                    kappa: SubspaceJson::of(&g.kappa),
                    points: g.points.iter().map(point_json).collect(),
                    all_on_plane: g.all_on_plane,
                    ranks: g.ranks.clone(),
                })
                .collect(),
            grouping_note: GROUPING_NOTE,
            evidence: FiberEvidenceJson { budget_used },
        }
    }
}

#[derive(Serialize)]
pub struct PointReportJson {
    pub schema: &'static str,
    pub x: Vec<String>,
    pub gamma: Vec<String>,
    pub tangent: SubspaceJson,
    pub rank: usize,
    pub kappa: SubspaceJson,
    pub generic: bool,
}

impl PointReportJson {
    pub fn of(data: &GaussPointData, generic_rank: usize) -> PointReportJson {
        PointReportJson {
            schema: SCHEMA,
            x: point_json(&data.x),
            gamma: point_json(&data.gamma),
            tangent: SubspaceJson::of(&data.tangent),
            rank: data.rank,
            kappa: SubspaceJson::of(&data.kappa),
            generic: data.is_generic(generic_rank),
        }
    }
}

#[derive(Serialize)]
pub struct CheckJson {
    pub id: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub skipped: bool,
    pub details: String,
}

#[derive(Serialize)]
pub struct VerifyReportJson {
    pub schema: &'static str,
    pub all_passed: bool,
    pub checks: Vec<CheckJson>,
    pub variety: VarietyReportJson,
}

impl VerifyReportJson {
    pub fn of(outcome: &VerifyOutcome) -> VerifyReportJson {
        VerifyReportJson {
            schema: SCHEMA,
            all_passed: outcome.all_passed,
            checks: outcome
                .checks
                .iter()
                .map(|c: &CheckResult| CheckJson {
                    id: c.id,
                    description: c.description,
                    passed: c.passed,
                    skipped: c.skipped,
                    details: c.details.clone(),
                })
                .collect(),
            variety: VarietyReportJson::of(&outcome.variety),
        }
    }
}
