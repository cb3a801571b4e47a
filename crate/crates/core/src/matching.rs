//! Recovering a point set from facet projections whose labels were lost.
//!
//! Each facet holds an unordered multiset of `L` projections. Facet
//! `σ₋(j+2)` supplies the cycle ratio `r_{j,j+1}` for each of its points, which
//! gives `J` candidate sets of `L` ratios each. A tuple taking one candidate
//! per set can only come from a single original point if the ratios multiply
//! to one; for exact projections exactly `L` disjoint such tuples exist.
//!
//! The search runs in three stages:
//! 1. depth-first enumeration of tuples whose log-product stays within the
//!    cycle tolerance, pruned by the min/max attainable from the remaining sets;
//! 2. a full compatibility check of the facet points in every surviving tuple;
//! 3. branch and bound over disjoint selections, minimizing the summed residual.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{self, BarycentricPoint, FacetProjection};
use crate::projection::{
    self, cycle_facet, cycle_labels, ProjectionBundle, ProjectionError, Solver,
};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatchError {
    #[error("points have mixed dimensions ({0} and {1})")]
    MixedDimensions(usize, usize),
    #[error("empty point set")]
    EmptySet,
    #[error("set projection needs J >= 3, got {0}")]
    DimensionTooSmall(usize),
    #[error("facet multisets are malformed: {0}")]
    Malformed(String),
    #[error("no complete assignment of the facet projections closes every ratio cycle")]
    NoFeasibleAssignment,
    #[error(
        "two different complete assignments fit within tolerance \
         (residual sums {best_residual:e} and {other_residual:e})"
    )]
    AmbiguousAssignment {
        best_residual: f64,
        other_residual: f64,
    },
    #[error("matched tuple {tuple} passed the cycle test but its facets are incompatible")]
    PostMatchIncompatibility { tuple: usize },
    #[error(transparent)]
    Projection(#[from] ProjectionError),
}

pub type Result<T, E = MatchError> = std::result::Result<T, E>;

/// `J` multisets of `L` facet projections each, in no particular order.
#[derive(Debug, Clone, PartialEq)]
pub struct UnlabeledFacetSets {
    dim: usize,
    per_facet: Vec<Vec<FacetProjection>>,
}

impl UnlabeledFacetSets {
    /// `per_facet[j-1]` must hold the projections onto the facet opposite `v_j`.
    pub fn new(per_facet: Vec<Vec<FacetProjection>>) -> Result<Self> {
        let dim = per_facet.len();
        if dim < 3 {
            return Err(MatchError::DimensionTooSmall(dim));
        }
        let count = per_facet[0].len();
        if count == 0 {
            return Err(MatchError::EmptySet);
        }
        for (j, set) in per_facet.iter().enumerate() {
            if set.len() != count {
                return Err(MatchError::Malformed(format!(
                    "facet {} has {} projections, facet 1 has {count}",
                    j + 1,
                    set.len()
                )));
            }
            if let Some(p) = set.iter().find(|p| p.dropped() != j + 1 || p.dim() != dim) {
                return Err(MatchError::Malformed(format!(
                    "facet {} holds a projection opposite v{} in J = {}",
                    j + 1,
                    p.dropped(),
                    geometry::LabeledWeights::dim(p)
                )));
            }
        }
        Ok(Self { dim, per_facet })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.per_facet[0].len()
    }

    pub fn facet(&self, vertex: usize) -> &[FacetProjection] {
        &self.per_facet[vertex - 1]
    }

    pub fn per_facet(&self) -> &[Vec<FacetProjection>] {
        &self.per_facet
    }

    /// Bundle formed by picking `tuple[j-1]` from facet `j`.
    pub fn bundle(&self, tuple: &[usize]) -> ProjectionBundle {
        let picks = tuple
            .iter()
            .enumerate()
            .map(|(j, &i)| self.per_facet[j][i].clone())
            .collect();
        ProjectionBundle::new(picks).expect("facet sets are structurally valid")
    }
}

/// Projects every point onto every facet. With `shuffle_seed` set, each facet's
/// multiset is permuted independently so the original pairing is lost.
pub fn project_set(
    points: &[BarycentricPoint],
    shuffle_seed: Option<u64>,
) -> Result<UnlabeledFacetSets> {
    let first = points.first().ok_or(MatchError::EmptySet)?;
    let dim = first.weights().len();
    if let Some(p) = points.iter().find(|p| p.weights().len() != dim) {
        return Err(MatchError::MixedDimensions(dim, p.weights().len()));
    }
    if dim < 3 {
        return Err(MatchError::DimensionTooSmall(dim));
    }
    let mut per_facet: Vec<Vec<FacetProjection>> = (1..=dim)
        .map(|v| {
            points
                .iter()
                .map(|p| p.project(v).expect("vertex in range"))
                .collect()
        })
        .collect();
    if let Some(seed) = shuffle_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for set in &mut per_facet {
            set.shuffle(&mut rng);
        }
    }
    Ok(UnlabeledFacetSets { dim, per_facet })
}

/// Candidate values of each cycle ratio: entry `j-1` lists `r_{j,j+1}` for every
/// projection on [`cycle_facet`]`(J, j)`, in that facet's order.
pub fn candidate_ratio_sets(u: &UnlabeledFacetSets) -> Vec<Vec<f64>> {
    (1..=u.dim)
        .map(|j| {
            let (n, m) = cycle_labels(u.dim, j);
            u.facet(cycle_facet(u.dim, j))
                .iter()
                .map(|p| geometry::ratio(p, n, m).expect("cycle facet keeps both labels"))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchOptions {
    /// Relative tolerance on the cycle product for candidate tuples.
    pub tol_cycle: f64,
    /// Compatibility tolerance a candidate tuple must meet to be accepted.
    pub tol_compat: f64,
}

impl Default for MatchOptions {
    fn default() -> Self {
        Self {
            tol_cycle: tol::CYCLE,
            tol_compat: tol::MATCH_COMPAT,
        }
    }
}

/// Two tuples of the chosen assignment that reconstruct to (nearly) the same
/// point; swapping their projections gives an equally valid assignment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyNote {
    pub tuples: (usize, usize),
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchAssignment {
    /// One entry per recovered point; `tuples[l][j-1]` indexes facet `j`.
    pub tuples: Vec<Vec<usize>>,
    /// `|∏ ratios − 1|` per tuple.
    pub residuals: Vec<f64>,
    pub notes: Vec<DegeneracyNote>,
}

impl MatchAssignment {
    pub fn residual_sum(&self) -> f64 {
        self.residuals.iter().sum()
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    /// Projection index per facet, facet order.
    tuple: Vec<usize>,
    residual: f64,
    point: BarycentricPoint,
}

/// Tuples of indices into the candidate ratio sets (set order) whose product
/// is within `tol` of one.
fn cycle_tuples(sets: &[Vec<f64>], tol: f64) -> Vec<(Vec<usize>, f64)> {
    let lo = (1.0 - tol).ln();
    let hi = (1.0 + tol).ln();
    // per set: (log ratio, original index), sorted
    let sorted: Vec<Vec<(f64, usize)>> = sets
        .iter()
        .map(|s| {
            let mut v: Vec<(f64, usize)> = s.iter().map(|r| r.ln()).zip(0..).collect();
            v.sort_by(|a, b| a.0.total_cmp(&b.0));
            v
        })
        .collect();
    let k = sorted.len();
    // bounds on the log-sum still reachable from sets i..k
    let mut rest_min = vec![0.0; k + 1];
    let mut rest_max = vec![0.0; k + 1];
    for i in (0..k).rev() {
        rest_min[i] = rest_min[i + 1] + sorted[i].first().map_or(0.0, |x| x.0);
        rest_max[i] = rest_max[i + 1] + sorted[i].last().map_or(0.0, |x| x.0);
    }

    // first set fans out in parallel
    sorted[0]
        .par_iter()
        .flat_map_iter(|&(l0, i0)| {
            let mut out = Vec::new();
            let mut path = vec![i0];
            descend(&sorted, &rest_min, &rest_max, 1, l0, lo, hi, &mut path, &mut out);
            out
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn descend(
    sorted: &[Vec<(f64, usize)>],
    rest_min: &[f64],
    rest_max: &[f64],
    level: usize,
    acc: f64,
    lo: f64,
    hi: f64,
    path: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, f64)>,
) {
    if acc + rest_max[level] < lo || acc + rest_min[level] > hi {
        return;
    }
    let set = &sorted[level];
    if level + 1 == sorted.len() {
        let start = set.partition_point(|x| acc + x.0 < lo);
        for &(l, i) in set[start..].iter().take_while(|x| acc + x.0 <= hi) {
            path.push(i);
            out.push((path.clone(), ((acc + l).exp() - 1.0).abs()));
            path.pop();
        }
        return;
    }
    for &(l, i) in set {
        path.push(i);
        descend(sorted, rest_min, rest_max, level + 1, acc + l, lo, hi, path, out);
        path.pop();
    }
}

/// Tuples (facet order) that close the ratio cycle within `tol_cycle` and
/// pass the full compatibility check, with their residuals. For exact
/// projections of `L` distinct points there are exactly `L` of them.
pub fn concurrencies(u: &UnlabeledFacetSets, opts: MatchOptions) -> Vec<(Vec<usize>, f64)> {
    candidates(u, opts)
        .into_iter()
        .map(|c| (c.tuple, c.residual))
        .collect()
}

fn candidates(u: &UnlabeledFacetSets, opts: MatchOptions) -> Vec<Candidate> {
    let dim = u.dim;
    let sets = candidate_ratio_sets(u);
    // set j-1 draws from facet cycle_facet(dim, j); convert to facet order
    let set_facet: Vec<usize> = (1..=dim).map(|j| cycle_facet(dim, j) - 1).collect();
    let raw = cycle_tuples(&sets, opts.tol_cycle);
    let mut out: Vec<Candidate> = raw
        .into_par_iter()
        .filter_map(|(by_set, residual)| {
            let mut tuple = vec![0; dim];
            for (s, &i) in by_set.iter().enumerate() {
                tuple[set_facet[s]] = i;
            }
            let bundle = u.bundle(&tuple);
            let point =
                projection::reconstruct_with(&bundle, opts.tol_compat, Solver::default()).ok()?;
            Some(Candidate {
                tuple,
                residual,
                point,
            })
        })
        .collect();
    out.sort_by(|a, b| a.tuple.cmp(&b.tuple));
    out
}

/// Finds the labeling of the facet projections: `L` disjoint tuples, each
/// closing its ratio cycle and passing the full compatibility check.
pub fn match_sets(u: &UnlabeledFacetSets, opts: MatchOptions) -> Result<MatchAssignment> {
    let count = u.count();
    let candidates = candidates(u, opts);
    log::debug!("{} candidate tuples for L = {count}", candidates.len());

    let search = Selection::new(&candidates, u.dim, count);
    let best = search.best().ok_or(MatchError::NoFeasibleAssignment)?;
    let best_sum: f64 = best.iter().map(|&c| candidates[c].residual).sum();

    if let Some(other) = search.distinct_alternative(&best) {
        let other_sum = other.iter().map(|&c| candidates[c].residual).sum();
        return Err(MatchError::AmbiguousAssignment {
            best_residual: best_sum,
            other_residual: other_sum,
        });
    }

    let mut notes = Vec::new();
    for a in 0..best.len() {
        for b in a + 1..best.len() {
            let d = candidates[best[a]]
                .point
                .max_abs_diff(&candidates[best[b]].point);
            if d < tol::COINCIDENT {
                notes.push(DegeneracyNote {
                    tuples: (a, b),
                    distance: d,
                });
            }
        }
    }
    Ok(MatchAssignment {
        tuples: best.iter().map(|&c| candidates[c].tuple.clone()).collect(),
        residuals: best.iter().map(|&c| candidates[c].residual).collect(),
        notes,
    })
}

/// Disjoint selection of candidate tuples covering every projection once.
struct Selection<'a> {
    candidates: &'a [Candidate],
    dim: usize,
    count: usize,
    /// candidate indices grouped by their facet-1 projection
    by_first: Vec<Vec<usize>>,
    /// cheapest residual available for each facet-1 projection
    floor: Vec<f64>,
}

const ENUMERATION_BUDGET: usize = 2_000_000;

impl<'a> Selection<'a> {
    fn new(candidates: &'a [Candidate], dim: usize, count: usize) -> Self {
        let mut by_first = vec![Vec::new(); count];
        for (c, cand) in candidates.iter().enumerate() {
            by_first[cand.tuple[0]].push(c);
        }
        for group in &mut by_first {
            group.sort_by(|&a, &b| candidates[a].residual.total_cmp(&candidates[b].residual));
        }
        let floor = by_first
            .iter()
            .map(|g| g.first().map_or(f64::INFINITY, |&c| candidates[c].residual))
            .collect();
        Self {
            candidates,
            dim,
            count,
            by_first,
            floor,
        }
    }

    fn best(&self) -> Option<Vec<usize>> {
        if self.floor.iter().any(|f| f.is_infinite()) {
            return None;
        }
        let mut state = BranchState {
            used: vec![vec![false; self.count]; self.dim],
            path: Vec::with_capacity(self.count),
            best: None,
            best_cost: f64::INFINITY,
        };
        let suffix: Vec<f64> = {
            let mut s = vec![0.0; self.count + 1];
            for i in (0..self.count).rev() {
                s[i] = s[i + 1] + self.floor[i];
            }
            s
        };
        self.branch(0, 0.0, &suffix, &mut state);
        state.best
    }

    fn branch(&self, slot: usize, cost: f64, suffix: &[f64], st: &mut BranchState) {
        if slot == self.count {
            if cost < st.best_cost {
                st.best_cost = cost;
                st.best = Some(st.path.clone());
            }
            return;
        }
        for &c in &self.by_first[slot] {
            let cand = &self.candidates[c];
            let next = cost + cand.residual;
            if next + suffix[slot + 1] >= st.best_cost {
                // groups are sorted by residual, nothing cheaper follows
                break;
            }
            if !self.fits(&cand.tuple, &st.used) {
                continue;
            }
            self.mark(&cand.tuple, &mut st.used, true);
            st.path.push(c);
            self.branch(slot + 1, next, suffix, st);
            st.path.pop();
            self.mark(&cand.tuple, &mut st.used, false);
        }
    }

    /// A complete assignment whose reconstructed points differ from those of
    /// `best` (as multisets, beyond the coincidence tolerance).
    fn distinct_alternative(&self, best: &[usize]) -> Option<Vec<usize>> {
        let reference: Vec<&BarycentricPoint> =
            best.iter().map(|&c| &self.candidates[c].point).collect();
        let mut used = vec![vec![false; self.count]; self.dim];
        let mut path = Vec::with_capacity(self.count);
        let mut budget = ENUMERATION_BUDGET;
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        self.enumerate(0, &mut used, &mut path, &mut budget, &mut |assignment| {
            let mut key = assignment.to_vec();
            key.sort_unstable();
            if !seen.insert(key) {
                return false;
            }
            let pts: Vec<&BarycentricPoint> = assignment
                .iter()
                .map(|&c| &self.candidates[c].point)
                .collect();
            !same_multiset(&reference, &pts, tol::COINCIDENT)
        })
    }

    fn enumerate(
        &self,
        slot: usize,
        used: &mut Vec<Vec<bool>>,
        path: &mut Vec<usize>,
        budget: &mut usize,
        differs: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Option<Vec<usize>> {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        if slot == self.count {
            return differs(path).then(|| path.clone());
        }
        for &c in &self.by_first[slot] {
            let tuple = &self.candidates[c].tuple;
            if !self.fits(tuple, used) {
                continue;
            }
            self.mark(tuple, used, true);
            path.push(c);
            let found = self.enumerate(slot + 1, used, path, budget, differs);
            path.pop();
            self.mark(tuple, used, false);
            if found.is_some() {
                return found;
            }
        }
        if *budget == 0 {
            log::warn!("ambiguity check stopped after {ENUMERATION_BUDGET} search nodes");
        }
        None
    }

    fn fits(&self, tuple: &[usize], used: &[Vec<bool>]) -> bool {
        tuple.iter().enumerate().all(|(j, &i)| !used[j][i])
    }

    fn mark(&self, tuple: &[usize], used: &mut [Vec<bool>], value: bool) {
        for (j, &i) in tuple.iter().enumerate() {
            used[j][i] = value;
        }
    }
}

struct BranchState {
    used: Vec<Vec<bool>>,
    path: Vec<usize>,
    best: Option<Vec<usize>>,
    best_cost: f64,
}

/// Greedy one-to-one pairing of two point lists within `tol` (∞-norm).
fn same_multiset(a: &[&BarycentricPoint], b: &[&BarycentricPoint], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut taken = vec![false; b.len()];
    a.iter().all(|p| {
        match (0..b.len()).find(|&i| !taken[i] && p.max_abs_diff(b[i]) < tol) {
            Some(i) => {
                taken[i] = true;
                true
            }
            None => false,
        }
    })
}

/// Reassembles each matched tuple into a bundle and inverts it, re-checking
/// full compatibility at `tol_compat`.
pub fn reconstruct_set(
    u: &UnlabeledFacetSets,
    m: &MatchAssignment,
    tol_compat: f64,
) -> Result<Vec<BarycentricPoint>> {
    m.tuples
        .iter()
        .enumerate()
        .map(|(l, tuple)| {
            if tuple.len() != u.dim || tuple.iter().any(|&i| i >= u.count()) {
                return Err(MatchError::Malformed(format!(
                    "tuple {l} does not index these facet sets"
                )));
            }
            projection::reconstruct_with(&u.bundle(tuple), tol_compat, Solver::default())
                .map_err(|e| match e {
                    ProjectionError::IncompatibleBundle => {
                        MatchError::PostMatchIncompatibility { tuple: l }
                    }
                    other => other.into(),
                })
        })
        .collect()
}

/// `match_sets` followed by `reconstruct_set`.
pub fn recover(u: &UnlabeledFacetSets, opts: MatchOptions) -> Result<(MatchAssignment, Vec<BarycentricPoint>)> {
    let m = match_sets(u, opts)?;
    let points = reconstruct_set(u, &m, opts.tol_compat)?;
    Ok((m, points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, Exp1};

    fn sample(dim: usize, rng: &mut ChaCha8Rng) -> BarycentricPoint {
        let e: Vec<f64> = (0..dim).map(|_| Exp1.sample(rng)).collect();
        let s: f64 = e.iter().sum();
        BarycentricPoint::new(e.iter().map(|x| x / s).collect()).unwrap()
    }

    fn sorted_weights(points: &[BarycentricPoint]) -> Vec<Vec<f64>> {
        let mut v: Vec<Vec<f64>> = points.iter().map(|p| p.weights().to_vec()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn single_point_matches_trivially() {
        let x = BarycentricPoint::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let u = project_set(std::slice::from_ref(&x), Some(3)).unwrap();
        let m = match_sets(&u, MatchOptions::default()).unwrap();
        assert_eq!(m.tuples, vec![vec![0; 4]]);
        assert!(m.residuals[0] < 1e-14);
        let r = reconstruct_set(&u, &m, tol::MATCH_COMPAT).unwrap();
        assert!(r[0].max_abs_diff(&x) < 1e-14);
        assert_eq!(r[0], projection::reconstruct(&u.bundle(&[0; 4])).unwrap());
    }

    #[test]
    fn project_set_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts = vec![sample(4, &mut rng), sample(4, &mut rng)];
        let u = project_set(&pts, Some(9)).unwrap();
        assert_eq!(u.dim(), 4);
        assert_eq!(u.count(), 2);
        for j in 1..=4 {
            assert_eq!(u.facet(j).len(), 2);
            assert!(u.facet(j).iter().all(|p| p.dropped() == j));
        }

        let reversed: Vec<_> = pts.iter().rev().cloned().collect();
        let v = project_set(&reversed, Some(9)).unwrap();
        for j in 1..=4 {
            let key = |s: &[FacetProjection]| {
                let mut w: Vec<Vec<f64>> = s.iter().map(|p| p.weights().to_vec()).collect();
                w.sort_by(|a, b| a.partial_cmp(b).unwrap());
                w
            };
            assert_eq!(key(u.facet(j)), key(v.facet(j)));
        }

        let mixed = vec![pts[0].clone(), BarycentricPoint::centroid(3)];
        assert_eq!(
            project_set(&mixed, None),
            Err(MatchError::MixedDimensions(4, 3))
        );
        assert_eq!(project_set(&[], None), Err(MatchError::EmptySet));
    }

    #[test]
    fn unshuffled_candidates_close_the_cycle() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for dim in [3, 4, 5] {
            let pts: Vec<_> = (0..6).map(|_| sample(dim, &mut rng)).collect();
            let u = project_set(&pts, None).unwrap();
            let sets = candidate_ratio_sets(&u);
            assert_eq!(sets.len(), dim);
            for l in 0..pts.len() {
                let prod: f64 = sets.iter().map(|s| s[l]).product();
                assert!((prod - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn shuffled_sets_recover_original_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for dim in [3, 4, 5] {
            for l in [2, 3, 7] {
                let pts: Vec<_> = (0..l).map(|_| sample(dim, &mut rng)).collect();
                let u = project_set(&pts, Some(l as u64)).unwrap();
                let (m, rec) = recover(&u, MatchOptions::default()).unwrap();
                assert_eq!(m.tuples.len(), l);
                let (a, b) = (sorted_weights(&pts), sorted_weights(&rec));
                for (p, q) in a.iter().zip(&b) {
                    for (x, y) in p.iter().zip(q) {
                        assert!((x - y).abs() < 1e-8);
                    }
                }
                // every projection used once per facet
                for j in 0..dim {
                    let mut idx: Vec<usize> = m.tuples.iter().map(|t| t[j]).collect();
                    idx.sort_unstable();
                    assert_eq!(idx, (0..l).collect::<Vec<_>>());
                }
            }
        }
    }

    #[test]
    fn duplicates_are_kept_with_multiplicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let x = sample(4, &mut rng);
        let y = sample(4, &mut rng);
        let pts = vec![x.clone(), y.clone(), x.clone()];
        let u = project_set(&pts, Some(1)).unwrap();
        let (m, rec) = recover(&u, MatchOptions::default()).unwrap();
        assert_eq!(rec.len(), 3);
        assert_eq!(rec.iter().filter(|p| p.max_abs_diff(&x) < 1e-10).count(), 2);
        assert_eq!(rec.iter().filter(|p| p.max_abs_diff(&y) < 1e-10).count(), 1);
        assert_eq!(m.notes.len(), 1);

        let c = BarycentricPoint::centroid(4);
        let u = project_set(&vec![c.clone(); 4], Some(2)).unwrap();
        let (_, rec) = recover(&u, MatchOptions::default()).unwrap();
        assert!(rec.iter().all(|p| p.max_abs_diff(&c) < 1e-14));
    }

    #[test]
    fn foreign_projection_is_infeasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let pts: Vec<_> = (0..3).map(|_| sample(4, &mut rng)).collect();
        let mut u = project_set(&pts, Some(4)).unwrap();
        u.per_facet[1][0] = sample(4, &mut rng).project(2).unwrap();
        assert_eq!(
            match_sets(&u, MatchOptions::default()),
            Err(MatchError::NoFeasibleAssignment)
        );
    }

    #[test]
    fn loose_tolerance_reports_ambiguity() {
        // two points whose cycle ratios nearly coincide become interchangeable
        // once the tolerances are loose enough to accept the crossed tuples
        let a = BarycentricPoint::new(vec![0.2, 0.3, 0.5]).unwrap();
        let b = BarycentricPoint::new(vec![0.2001, 0.3, 0.4999]).unwrap();
        let u = project_set(&[a, b], None).unwrap();
        let loose = MatchOptions {
            tol_cycle: 1e-2,
            tol_compat: 1e-2,
        };
        assert!(matches!(
            match_sets(&u, loose),
            Err(MatchError::AmbiguousAssignment { .. })
        ));
        assert!(match_sets(&u, MatchOptions::default()).is_ok());
    }

    #[test]
    fn tampered_assignment_fails_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let pts: Vec<_> = (0..2).map(|_| sample(4, &mut rng)).collect();
        let u = project_set(&pts, None).unwrap();
        let m = MatchAssignment {
            tuples: vec![vec![0, 1, 0, 0], vec![1, 0, 1, 1]],
            residuals: vec![0.0, 0.0],
            notes: vec![],
        };
        assert_eq!(
            reconstruct_set(&u, &m, tol::MATCH_COMPAT),
            Err(MatchError::PostMatchIncompatibility { tuple: 0 })
        );
    }
}
