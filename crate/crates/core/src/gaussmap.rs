//! The per-point core of the Gauss map of a hypersurface X = V(f) in P^N.
//!
//! For a smooth rational point x the Gauss map is the gradient map
//! gamma(x) = (f_0(x) : ... : f_N(x)) into the dual space; its value pins the
//! embedded tangent hyperplane T_xX = { Z : grad f(x) . Z = 0 }. The
//! differential of gamma is computed chart-free through the Hessian H(x):
//! with That = ker(grad f(x) . ) the affine tangent cone,
//!
//!   rk d_x gamma = dim( (H(x) That + <grad f(x)>) / <grad f(x)> ),
//!
//! which is well defined because the Euler identity on the gradient entries
//! gives H(x) xhat = (d-1) grad f(x). The degeneracy plane kappa(x) is the
//! projectivization of W = { u in That : H(x) u in <grad f(x)> }; it always
//! contains x and sits inside T_xX, with projective dimension
//! dim X - rk d_x gamma at points of generic rank.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::gf::{Embedding, FieldCtx, Scalar};
use crate::linproj::{LinearSubspace, Mat, ProjPoint};
use crate::poly::MultiPoly;

/// A hypersurface V(f) with its gradient and Hessian polynomials precomputed.
pub struct Hypersurface {
    f: MultiPoly,
    grad: Vec<MultiPoly>,
    hess: Vec<Vec<MultiPoly>>,
    degree: u32,
}

impl Hypersurface {
    /// Wrap a nonzero homogeneous polynomial of degree >= 1.
    pub fn new(f: MultiPoly) -> Result<Hypersurface> {
        if f.is_zero() {
            return Err(Error::DegreeTooSmall(0));
        }
        if !f.is_homogeneous() {
            return Err(Error::NonHomogeneous);
        }
        let degree = f.degree();
        if degree == 0 {
            return Err(Error::DegreeTooSmall(0));
        }
        let grad = f.gradient();
        let hess = grad.iter().map(MultiPoly::gradient).collect();
        Ok(Hypersurface { f, grad, hess, degree })
    }

    pub fn parse(field: &FieldCtx, num_vars: usize, text: &str) -> Result<Hypersurface> {
        Self::new(MultiPoly::parse_homogeneous(field, num_vars, text)?)
    }

    pub fn f(&self) -> &MultiPoly {
        &self.f
    }

    pub fn gradient_polys(&self) -> &[MultiPoly] {
        &self.grad
    }

    pub fn field(&self) -> &FieldCtx {
        self.f.field()
    }

    pub fn num_vars(&self) -> usize {
        self.f.num_vars()
    }

    /// Projective ambient dimension N.
    pub fn ambient_dim(&self) -> usize {
        self.f.num_vars() - 1
    }

    /// n = dim X = N - 1.
    pub fn dim(&self) -> usize {
        self.ambient_dim() - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn lift(&self, emb: &Embedding) -> Result<Hypersurface> {
        Hypersurface::new(self.f.lift(emb)?)
    }

    fn check_point(&self, x: &ProjPoint) -> Result<()> {
        if x.ambient_dim() != self.ambient_dim() || x.field() != self.field() {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    pub fn is_on(&self, x: &ProjPoint) -> Result<bool> {
        self.check_point(x)?;
        Ok(self.f.evaluate(x.coords())?.is_zero())
    }

    pub fn gradient_at(&self, x: &ProjPoint) -> Result<Vec<Scalar>> {
        self.check_point(x)?;
        self.grad.iter().map(|g| g.evaluate(x.coords())).collect()
    }

    /// Gradient at a smooth point of X; errors off X or at singular points.
    fn smooth_gradient(&self, x: &ProjPoint) -> Result<Vec<Scalar>> {
        if !self.is_on(x)? {
            return Err(Error::NotOnHypersurface);
        }
        let grad = self.gradient_at(x)?;
        if grad.iter().all(Scalar::is_zero) {
            return Err(Error::SingularPoint);
        }
        Ok(grad)
    }

    pub fn is_smooth_point(&self, x: &ProjPoint) -> Result<bool> {
        Ok(self.is_on(x)? && !self.gradient_at(x)?.iter().all(Scalar::is_zero))
    }

    /// The Gauss image gamma(x) = (f_0(x) : ... : f_N(x)) in the dual space.
    pub fn gauss_image(&self, x: &ProjPoint) -> Result<ProjPoint> {
        let grad = self.smooth_gradient(x)?;
        ProjPoint::new(self.field(), grad)
    }

    /// The embedded tangent hyperplane at a smooth point.
    pub fn tangent_space(&self, x: &ProjPoint) -> Result<LinearSubspace> {
        let grad = self.smooth_gradient(x)?;
        LinearSubspace::hyperplane(self.field(), &grad)
    }

    /// The Hessian matrix H(x) of second partials evaluated at x.
    pub fn hessian_at(&self, x: &ProjPoint) -> Result<Mat> {
        self.check_point(x)?;
        let n1 = self.num_vars();
        let mut m = Mat::zeros(self.field(), n1, n1);
        for i in 0..n1 {
            for j in 0..n1 {
                *m.at_mut(i, j) = self.hess[i][j].evaluate(x.coords())?;
            }
        }
        Ok(m)
    }

    /// The Hessian together with rk d_x gamma at a smooth point.
    pub fn gauss_differential(&self, x: &ProjPoint) -> Result<(Mat, usize)> {
        let grad = self.smooth_gradient(x)?;
        let hess = self.hessian_at(x)?;
        let rank = self.rank_from_parts(&grad, &hess)?;
        Ok((hess, rank))
    }

    fn rank_from_parts(&self, grad: &[Scalar], hess: &Mat) -> Result<usize> {
        let field = self.field();
        let grad_row = Mat::from_rows(field, vec![grad.to_vec()])?;
        let tangent_cone = grad_row.nullspace();
        let mut rows = Vec::with_capacity(tangent_cone.rows() + 1);
        for r in 0..tangent_cone.rows() {
            rows.push(hess.mul_vec(tangent_cone.row(r))?);
        }
        rows.push(grad.to_vec());
        let stacked = Mat::from_rows(field, rows)?;
        Ok(stacked.rank() - 1)
    }

    /// The degeneracy plane kappa(x): projectivization of
    /// { u : grad f(x) . u = 0 and H(x) u = mu grad f(x) for some mu }.
    pub fn kappa(&self, x: &ProjPoint) -> Result<LinearSubspace> {
        Ok(self.point_data(x)?.kappa)
    }

    /// Everything the Gauss map knows about one smooth point.
    pub fn point_data(&self, x: &ProjPoint) -> Result<GaussPointData> {
        let grad = self.smooth_gradient(x)?;
        let field = self.field();
        let n1 = self.num_vars();
        let hess = self.hessian_at(x)?;
        let rank = self.rank_from_parts(&grad, &hess)?;

        // One kernel computation in N+2 unknowns (u, mu):
        //   H u - mu grad = 0  and  grad . u = 0.
        let mut rows = Vec::with_capacity(n1 + 1);
        for i in 0..n1 {
            let mut row = hess.row(i).to_vec();
            row.push(field.neg(&grad[i]));
            rows.push(row);
        }
        let mut last = grad.clone();
        last.push(field.zero());
        rows.push(last);
        let system = Mat::from_rows(field, rows)?;
        let kernel = system.nullspace();
        let u_rows: Vec<Vec<Scalar>> =
            (0..kernel.rows()).map(|r| kernel.row(r)[..n1].to_vec()).collect();
        let kappa = LinearSubspace::from_rows(field, self.ambient_dim(), u_rows)?;

        let gamma = ProjPoint::new(field, grad.clone())?;
        let tangent = LinearSubspace::hyperplane(field, &grad)?;
        Ok(GaussPointData { x: x.clone(), gamma, tangent, hessian: hess, rank, kappa })
    }
}

/// Per-point bundle: the Gauss image, tangent hyperplane, Hessian, rank of
/// the differential, and the degeneracy plane.
pub struct GaussPointData {
    pub x: ProjPoint,
    pub gamma: ProjPoint,
    pub tangent: LinearSubspace,
    pub hessian: Mat,
    pub rank: usize,
    pub kappa: LinearSubspace,
}

impl GaussPointData {
    pub fn is_generic(&self, generic_rank: usize) -> bool {
        self.rank == generic_rank
    }
}

/// Per-extension evidence from rank sampling.
#[derive(Debug, Clone)]
pub struct RankSample {
    pub m: u32,
    pub field_order: u64,
    pub points: usize,
    pub max_rank: usize,
}

/// Outcome of generic-rank estimation: the maximum observed rank (the rank
/// function is lower semicontinuous, so the sample maximum is the generic
/// value with overwhelming probability) plus the evidence.
#[derive(Debug, Clone)]
pub struct RankEstimate {
    pub rank: usize,
    pub samples: Vec<RankSample>,
}

/// Draw random rational points of X over GF(p^(k*m)) by rejection sampling.
///
/// Smooth points only; deterministic for a fixed rng state. Gives up after
/// `max_attempts` draws and returns what it found.
pub fn sample_smooth_points(
    h: &Hypersurface,
    m: u32,
    count: usize,
    rng: &mut ChaCha12Rng,
    max_attempts: usize,
) -> Result<Vec<ProjPoint>> {
    let ext = h.field().extension(m)?;
    let hm = if m == 1 {
        None
    } else {
        let emb = Embedding::new(h.field(), &ext)?;
        Some(h.lift(&emb)?)
    };
    let hm = match &hm {
        Some(h) => h,
        None => h,
    };
    let q = ext.order();
    let n1 = h.num_vars();
    let mut out = Vec::with_capacity(count);
    for _ in 0..max_attempts {
        if out.len() == count {
            break;
        }
        let coords: Vec<Scalar> = (0..n1).map(|_| ext.scalar_at(rng.gen_range(0..q))).collect();
        if coords.iter().all(Scalar::is_zero) {
            continue;
        }
        let x = ProjPoint::new(&ext, coords)?;
        if hm.is_smooth_point(&x)? && !out.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Maximum of rk d_x gamma over smooth points sampled across extension
/// levels m = 1..=ext_bound (subject to the tower cap k*m <= 8).
pub fn generic_rank(
    h: &Hypersurface,
    trials: usize,
    ext_bound: u32,
    seed: u64,
) -> Result<RankEstimate> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut samples = vec![];
    let mut best = None;
    for m in 1..=ext_bound.max(1) {
        if h.field().extension(m).is_err() {
            break;
        }
        let ext = h.field().extension(m)?;
        let hm = if m == 1 {
            None
        } else {
            Some(h.lift(&Embedding::new(h.field(), &ext)?)?)
        };
        let hm = hm.as_ref().unwrap_or(h);
        let attempts = trials.saturating_mul((4 * ext.order() as usize).max(64));
        let pts = sample_smooth_points(hm, 1, trials, &mut rng, attempts)?;
        let mut max_rank = 0;
        for x in &pts {
            let (_, rank) = hm.gauss_differential(x)?;
            max_rank = max_rank.max(rank);
        }
        if !pts.is_empty() {
            best = Some(best.map_or(max_rank, |b: usize| b.max(max_rank)));
        }
        samples.push(RankSample { m, field_order: ext.order(), points: pts.len(), max_rank });
    }
    match best {
        Some(rank) => Ok(RankEstimate { rank, samples }),
        None => Err(Error::NoSmoothPoint),
    }
}
