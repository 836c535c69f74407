//! Brute-force enumeration of rational points of a hypersurface over an
//! extension field, with budget accounting and deterministic parallelism.
//!
//! Points of P^N are walked chart by chart: chart c holds the points whose
//! first nonzero coordinate sits at position c (normalized to 1), so every
//! point appears exactly once and in a fixed order. Charts split into tasks
//! along the first free coordinate; tasks run in parallel and their results
//! are merged in task order, so a run with T workers is bit-identical to a
//! single-worker run.
//!
//! For small fields the evaluator compiles the polynomials into dense
//! add/mul/power tables indexed by element number, which keeps the inner
//! loop to a handful of table lookups per term.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{Embedding, FieldCtx, Scalar};
use crate::gaussmap::Hypersurface;
use crate::linproj::ProjPoint;
use crate::poly::MultiPoly;

/// Largest field order that still gets dense lookup tables.
const TABLE_CAP: u64 = 2500;

/// Work accounting in polynomial evaluations. The cap is checked against an
/// up-front estimate before every scan; the exact count is accumulated as
/// work happens.
pub struct Budget {
    cap: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(cap: u64) -> Budget {
        Budget { cap, used: AtomicU64::new(0) }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub fn charge(&self, n: u64) {
        self.used.fetch_add(n, Ordering::Relaxed);
    }

    /// Fail before starting work that would blow past the cap.
    pub fn ensure(&self, estimate: u64) -> Result<()> {
        let used = self.used();
        if used.saturating_add(estimate) > self.cap {
            return Err(Error::BudgetExceeded { estimated: estimate, budget: self.cap - used.min(self.cap) });
        }
        Ok(())
    }
}

/// Number of points of P^N over GF(q): (q^(N+1) - 1) / (q - 1).
pub fn ambient_point_count(num_vars: usize, q: u64) -> u64 {
    let mut total = 0u64;
    let mut level = 1u64;
    for _ in 0..num_vars {
        total = total.saturating_add(level);
        level = level.saturating_mul(q);
    }
    total
}

enum EvalMode {
    Table {
        q: usize,
        add: Vec<u16>,
        mul: Vec<u16>,
        /// pow_tables[slot][i] = index of (element i)^e for the slot's exponent.
        pow_tables: Vec<Vec<u16>>,
        /// Per polynomial: terms as (coefficient index, [(var, pow slot)]).
        polys: Vec<Vec<(u16, Vec<(usize, usize)>)>>,
    },
    Direct {
        polys: Vec<MultiPoly>,
    },
}

/// Evaluates a fixed family of polynomials at points given by element
/// indices.
pub(crate) struct Evaluator {
    field: FieldCtx,
    mode: EvalMode,
}

impl Evaluator {
    pub fn new(field: &FieldCtx, polys: Vec<MultiPoly>) -> Evaluator {
        let q = field.order();
        if q > TABLE_CAP {
            return Evaluator { field: field.clone(), mode: EvalMode::Direct { polys } };
        }
        let q = q as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        let scalars: Vec<Scalar> = field.elements().collect();
        for (i, a) in scalars.iter().enumerate() {
            for (j, b) in scalars.iter().enumerate() {
                add[i * q + j] = field.index_of(&field.add(a, b)) as u16;
                mul[i * q + j] = field.index_of(&field.mul(a, b)) as u16;
            }
        }
        let mut slots: BTreeMap<u16, usize> = BTreeMap::new();
        let mut pow_tables: Vec<Vec<u16>> = vec![];
        let mut compiled = vec![];
        for poly in &polys {
            let mut terms = vec![];
            for (mono, coeff) in poly.terms() {
                let mut factors = vec![];
                for (var, &e) in mono.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let slot = *slots.entry(e).or_insert_with(|| {
                        let table: Vec<u16> = (0..q)
                            .map(|i| {
                                field.index_of(&field.pow_u(&field.scalar_at(i as u64), e as u64))
                                    as u16
                            })
                            .collect();
                        pow_tables.push(table);
                        pow_tables.len() - 1
                    });
                    factors.push((var, slot));
                }
                terms.push((field.index_of(coeff) as u16, factors));
            }
            compiled.push(terms);
        }
        Evaluator {
            field: field.clone(),
            mode: EvalMode::Table { q, add, mul, pow_tables, polys: compiled },
        }
    }

    /// Index of the value of polynomial `which` at the point with the given
    /// coordinate indices; index 0 is the zero scalar.
    #[inline]
    pub fn eval_index(&self, which: usize, idxs: &[u64]) -> u64 {
        match &self.mode {
            EvalMode::Table { q, add, mul, pow_tables, polys } => {
                let q = *q;
                let mut total = 0usize;
                for (coeff, factors) in &polys[which] {
                    let mut acc = *coeff as usize;
                    for &(var, slot) in factors {
                        let f = pow_tables[slot][idxs[var] as usize] as usize;
                        acc = mul[acc * q + f] as usize;
                    }
                    total = add[total * q + acc] as usize;
                }
                total as u64
            }
            EvalMode::Direct { polys } => {
                let point: Vec<Scalar> =
                    idxs.iter().map(|&i| self.field.scalar_at(i)).collect();
                self.field.index_of(&polys[which].evaluate(&point).expect("matching arity"))
            }
        }
    }

    pub fn num_polys(&self) -> usize {
        match &self.mode {
            EvalMode::Table { polys, .. } => polys.len(),
            EvalMode::Direct { polys } => polys.len(),
        }
    }
}

struct ChartTask {
    chart: usize,
    /// Pinned value of the first free coordinate, when the chart has one.
    first_val: Option<u64>,
}

fn tasks_for(num_vars: usize, q: u64) -> Vec<ChartTask> {
    let mut tasks = vec![];
    for chart in 0..num_vars {
        if chart + 1 == num_vars {
            tasks.push(ChartTask { chart, first_val: None });
        } else {
            for v in 0..q {
                tasks.push(ChartTask { chart, first_val: Some(v) });
            }
        }
    }
    tasks
}

/// Scan every rational point of X(GF(ext)) for a hypersurface already
/// expressed over the extension field.
///
/// `visit` is called once per on-X point (in deterministic order within a
/// task) with the normalized point and the gradient values at it; fold the
/// per-task accumulators afterwards in the returned order.
pub(crate) fn scan_hypersurface<T, I, V>(
    h_ext: &Hypersurface,
    budget: &Budget,
    init: I,
    visit: V,
) -> Result<Vec<T>>
where
    T: Send,
    I: Fn() -> T + Sync,
    V: Fn(&mut T, ProjPoint, &[Scalar]) + Sync,
{
    let ext = h_ext.field().clone();
    let q = ext.order();
    let n1 = h_ext.num_vars();
    budget.ensure(ambient_point_count(n1, q))?;

    let mut polys = vec![h_ext.f().clone()];
    polys.extend(h_ext.gradient_polys().iter().cloned());
    let eval = Evaluator::new(&ext, polys);
    let tasks = tasks_for(n1, q);

    let results: Result<Vec<T>> = tasks
        .par_iter()
        .map(|task| {
            let mut acc = init();
            let mut evals = 0u64;
            let mut idxs = vec![0u64; n1];
            // coordinates below the chart are 0, the chart coordinate is 1
            idxs[task.chart] = ext.index_of(&ext.one());
            let free_start = task.chart + 1 + usize::from(task.first_val.is_some());
            if let Some(v) = task.first_val {
                idxs[task.chart + 1] = v;
            }
            let mut grad_idx = vec![0u64; n1];
            loop {
                evals += 1;
                if eval.eval_index(0, &idxs) == 0 {
                    evals += n1 as u64;
                    for i in 0..n1 {
                        grad_idx[i] = eval.eval_index(1 + i, &idxs);
                    }
                    let coords: Vec<Scalar> =
                        idxs.iter().map(|&i| ext.scalar_at(i)).collect();
                    let grads: Vec<Scalar> =
                        grad_idx.iter().map(|&i| ext.scalar_at(i)).collect();
                    let point = ProjPoint::new(&ext, coords)?;
                    visit(&mut acc, point, &grads);
                }
                // odometer over the free coordinates, last position fastest
                let mut pos = n1;
                loop {
                    if pos == free_start {
                        budget.charge(evals);
                        return Ok(acc);
                    }
                    pos -= 1;
                    idxs[pos] += 1;
                    if idxs[pos] < q {
                        break;
                    }
                    idxs[pos] = 0;
                }
            }
        })
        .collect();
    results
}

/// Lift a hypersurface and scan X(GF(p^(k*m))).
pub(crate) fn scan_extension<T, I, V>(
    h: &Hypersurface,
    m: u32,
    budget: &Budget,
    init: I,
    visit: V,
) -> Result<(Vec<T>, FieldCtx)>
where
    T: Send,
    I: Fn() -> T + Sync,
    V: Fn(&mut T, ProjPoint, &[Scalar]) + Sync,
{
    let ext = h.field().extension(m)?;
    if m == 1 {
        return Ok((scan_hypersurface(h, budget, init, visit)?, ext));
    }
    let emb = Embedding::new(h.field(), &ext)?;
    let h_ext = h.lift(&emb)?;
    Ok((scan_hypersurface(&h_ext, budget, init, visit)?, ext))
}

/// All points of X(GF(p^(k*m))) in deterministic chart order.
pub fn enumerate_points(h: &Hypersurface, m: u32, budget: &Budget) -> Result<Vec<ProjPoint>> {
    let (chunks, _) = scan_extension(h, m, budget, Vec::new, |acc, point, _| acc.push(point))?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Number of distinct Gauss-image values over the smooth points of
/// X(GF(p^(k*m))).
pub fn count_gauss_image_values(h: &Hypersurface, m: u32, budget: &Budget) -> Result<u64> {
    let (chunks, _) = scan_extension(
        h,
        m,
        budget,
        std::collections::HashSet::<Vec<u64>>::new,
        |acc, point, grads| {
            if !grads.iter().all(Scalar::is_zero) {
                let gamma = ProjPoint::new(point.field(), grads.to_vec())
                    .expect("nonzero gradient");
                acc.insert(gamma.key());
            }
        },
    )?;
    let mut all = std::collections::HashSet::new();
    for c in chunks {
        all.extend(c);
    }
    Ok(all.len() as u64)
}

/// Smooth points of X(GF(p^(k*m))) partitioned by Gauss-image value;
/// classes and members come back in deterministic order.
pub fn fiber_partition(
    h: &Hypersurface,
    m: u32,
    budget: &Budget,
) -> Result<Vec<(ProjPoint, Vec<ProjPoint>)>> {
    let (chunks, ext) = scan_extension(
        h,
        m,
        budget,
        Vec::<(ProjPoint, ProjPoint)>::new,
        |acc, point, grads| {
            if !grads.iter().all(Scalar::is_zero) {
                let gamma = ProjPoint::new(point.field(), grads.to_vec())
                    .expect("nonzero gradient");
                acc.push((gamma, point));
            }
        },
    )?;
    let _ = ext;
    let mut classes: BTreeMap<Vec<u64>, (ProjPoint, Vec<ProjPoint>)> = BTreeMap::new();
    for (gamma, point) in chunks.into_iter().flatten() {
        classes
            .entry(gamma.key())
            .or_insert_with(|| (gamma, Vec::new()))
            .1
            .push(point);
    }
    Ok(classes.into_values().collect())
}
