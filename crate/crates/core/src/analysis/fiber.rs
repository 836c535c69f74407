//! Brute-force fibers of the Gauss map with degeneracy-plane grouping.
//!
//! The fiber of a smooth base point x collects every smooth rational point
//! x' of X over the extension with gamma(x') = gamma(x). Smooth fiber points
//! are partitioned by the canonical echelon basis of their degeneracy plane;
//! plane equality refines the decomposition of the fiber closure into
//! irreducible components at the rational-point level, and the report keeps
//! that heuristic explicit rather than claiming a component decomposition.
//!
//! Singular points of X cannot be assigned a Gauss value, but the fiber
//! closure may run into them; the candidates collected here are the singular
//! rational points lying on the degeneracy plane of the base point.

use crate::error::{Error, Result};
use crate::gf::{Embedding, Scalar};
use crate::gaussmap::Hypersurface;
use crate::linproj::{LinearSubspace, ProjPoint};

use super::enumerate::{scan_hypersurface, Budget};

/// Smooth fiber points sharing one degeneracy plane.
pub struct FiberGroup {
    pub kappa: LinearSubspace,
    pub points: Vec<ProjPoint>,
    /// Every member lies on the shared plane (re-verified, not assumed).
    pub all_on_plane: bool,
    /// Ranks of the differential at the members, for genericity judgement.
    pub ranks: Vec<usize>,
}

/// Everything known about one Gauss-map fiber at the rational-point level.
pub struct FiberAnalysis {
    /// Base point, expressed over the extension field.
    pub base: ProjPoint,
    /// Shared Gauss value of the fiber.
    pub gamma: ProjPoint,
    /// Extension multiplier m over the coefficient field of f.
    pub m: u32,
    /// Order of GF(p^(k*m)).
    pub ext_order: u64,
    /// Degeneracy plane of the base point.
    pub base_kappa: LinearSubspace,
    /// Rank of the differential at the base point.
    pub base_rank: usize,
    /// Smooth rational points with gamma(x') = gamma(x), enumeration order.
    pub smooth_points: Vec<ProjPoint>,
    /// Singular rational points of X on the base degeneracy plane.
    pub singular_on_kappa: Vec<ProjPoint>,
    /// Smooth fiber points grouped by identical degeneracy plane.
    pub groups: Vec<FiberGroup>,
}

impl FiberAnalysis {
    /// Total reported fiber size: smooth members plus singular candidates.
    pub fn total_points(&self) -> usize {
        self.smooth_points.len() + self.singular_on_kappa.len()
    }
}

/// Enumerate the fiber of the Gauss map through `x` over GF(p^(k*m)).
///
/// `x` may be given over the extension field itself or over any field in the
/// tower below it (it is lifted along the deterministic embedding).
pub fn fiber(
    h: &Hypersurface,
    x: &ProjPoint,
    m: u32,
    budget: &Budget,
) -> Result<FiberAnalysis> {
    let ext = h.field().extension(m)?;
    let h_ext = if *h.field() == ext {
        None
    } else {
        Some(h.lift(&Embedding::new(h.field(), &ext)?)?)
    };
    let h_ext = h_ext.as_ref().unwrap_or(h);

    let x_ext = if *x.field() == ext {
        x.clone()
    } else {
        let emb = Embedding::new(x.field(), &ext)?;
        let coords: Vec<Scalar> =
            x.coords().iter().map(|c| emb.map(c)).collect::<Result<_>>()?;
        ProjPoint::new(&ext, coords)?
    };

    let base_data = h_ext.point_data(&x_ext)?;
    let target = base_data.gamma.key();
    let base_kappa = base_data.kappa.clone();

    struct Acc {
        smooth: Vec<ProjPoint>,
        singular: Vec<ProjPoint>,
    }
    let chunks = scan_hypersurface(
        h_ext,
        budget,
        || Acc { smooth: vec![], singular: vec![] },
        |acc, point, grads| {
            if grads.iter().all(Scalar::is_zero) {
                if base_kappa.contains_point(&point).unwrap_or(false) {
                    acc.singular.push(point);
                }
            } else {
                let gamma = ProjPoint::new(point.field(), grads.to_vec())
                    .expect("nonzero gradient");
                if gamma.key() == target {
                    acc.smooth.push(point);
                }
            }
        },
    )?;

    let mut smooth_points = vec![];
    let mut singular_on_kappa = vec![];
    for c in chunks {
        smooth_points.extend(c.smooth);
        singular_on_kappa.extend(c.singular);
    }
    if !smooth_points.contains(&x_ext) {
        return Err(Error::InvalidArgument(
            "base point missing from its own fiber; enumeration is broken".into(),
        ));
    }

    // Group by canonical degeneracy plane.
    let mut groups: std::collections::BTreeMap<Vec<u64>, FiberGroup> =
        std::collections::BTreeMap::new();
    for p in &smooth_points {
        let data = h_ext.point_data(p)?;
        let key = data.kappa.key();
        let entry = groups.entry(key).or_insert_with(|| FiberGroup {
            kappa: data.kappa.clone(),
            points: vec![],
            all_on_plane: true,
            ranks: vec![],
        });
        entry.all_on_plane &= entry.kappa.contains_point(p)?;
        entry.points.push(p.clone());
        entry.ranks.push(data.rank);
    }

    Ok(FiberAnalysis {
        base: x_ext,
        gamma: base_data.gamma,
        m,
        ext_order: ext.order(),
        base_kappa,
        base_rank: base_data.rank,
        smooth_points,
        singular_on_kappa,
        groups: groups.into_values().collect(),
    })
}
