//! Cone-offs: a base graph with one cone glued along each family member.
//!
//! Materialized points are the base vertices, one apex per cone and the cone
//! points `(y, r)` with `r < r0` (the rim `(y, r0)` is the base vertex `y`).
//! The chain metric is computed by Dijkstra with neighbours generated on the
//! fly: base edges plus every pair of points inside a common cone.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cone::{angle, cone_formula, default_radii, mu, ConeSpace};
use crate::error::{Error, Result};
use crate::metric::{dijkstra_with, four_point_delta, FiniteMetricSpace, FourPointMode, WeightedGraph, SLACK};
use crate::subspace::{check_distinct, Subspace};

const NO_BASE: usize = usize::MAX;

/// A materialized point of the cone-off.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum ConeOffPoint {
    Base(usize),
    Apex(usize),
    Interior { cone: usize, base: usize, r: f64 },
}

/// An ordered sequence of materialized point indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub points: Vec<usize>,
}

impl Chain {
    pub fn new(points: Vec<usize>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParameter("a chain needs at least two points".into()));
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sum of the two-scale distances between consecutive points.
    pub fn length(&self, space: &ConeOffSpace) -> f64 {
        self.points.windows(2).map(|w| space.sc(w[0], w[1])).sum()
    }
}

#[derive(Clone, Debug)]
struct ConeCoords {
    /// (materialized index, ambient base vertex or NO_BASE for the apex, radius)
    points: Vec<(usize, usize, f64)>,
}

/// The cone-off of a weighted graph along a family of subspaces.
#[derive(Clone, Debug)]
pub struct ConeOffSpace {
    base: WeightedGraph,
    family: Vec<Subspace>,
    r0: f64,
    radii: Vec<f64>,
    cones: Vec<ConeSpace>,
    points: Vec<ConeOffPoint>,
    coords: Vec<ConeCoords>,
    membership: Vec<Vec<usize>>,
    apexes: Vec<usize>,
}

impl ConeOffSpace {
    /// `radii` are the sampled cone radii; `r0` is always added.
    pub fn new(base: WeightedGraph, family: Vec<Subspace>, r0: f64, radii: Vec<f64>) -> Result<Self> {
        check_distinct(&family)?;
        let n = base.len();
        for y in &family {
            if let Some(&bad) = y.members().iter().find(|&&m| m >= n) {
                return Err(Error::PointOutOfRange { index: bad, len: n });
            }
        }
        let cones = family
            .iter()
            .map(|y| ConeSpace::new(base.metric().restrict(y.members()), r0, radii.clone()))
            .collect::<Result<Vec<_>>>()?;
        let radii = cones.first().map(|c| c.radii().to_vec()).unwrap_or_else(|| {
            let mut r = radii.clone();
            r.push(r0);
            r.sort_by(f64::total_cmp);
            r.dedup();
            r
        });
        let inner: Vec<f64> = radii.iter().copied().filter(|&r| r < r0).collect();
        let mut points: Vec<ConeOffPoint> = (0..n).map(ConeOffPoint::Base).collect();
        let mut coords = Vec::with_capacity(family.len());
        let mut membership = vec![Vec::new(); n];
        let mut apexes = Vec::with_capacity(family.len());
        for (i, y) in family.iter().enumerate() {
            let mut cone = Vec::with_capacity(1 + y.len() * radii.len());
            apexes.push(points.len());
            cone.push((points.len(), NO_BASE, 0.0));
            points.push(ConeOffPoint::Apex(i));
            for &m in y.members() {
                for &r in &inner {
                    cone.push((points.len(), m, r));
                    points.push(ConeOffPoint::Interior { cone: i, base: m, r });
                }
                cone.push((m, m, r0));
                membership[m].push(i);
            }
            coords.push(ConeCoords { points: cone });
        }
        Ok(Self { base, family, r0, radii, cones, points, coords, membership, apexes })
    }

    pub fn with_default_radii(base: WeightedGraph, family: Vec<Subspace>, r0: f64, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("at least one radius sample is required".into()));
        }
        Self::new(base, family, r0, default_radii(r0, m))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn base(&self) -> &WeightedGraph {
        &self.base
    }

    pub fn family(&self) -> &[Subspace] {
        &self.family
    }

    pub fn cones(&self) -> &[ConeSpace] {
        &self.cones
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn point(&self, p: usize) -> ConeOffPoint {
        self.points[p]
    }

    pub fn points(&self) -> &[ConeOffPoint] {
        &self.points
    }

    pub fn apex(&self, cone: usize) -> usize {
        self.apexes[cone]
    }

    pub fn apexes(&self) -> &[usize] {
        &self.apexes
    }

    pub fn is_base(&self, p: usize) -> bool {
        p < self.base.len()
    }

    fn check(&self, p: usize) -> Result<()> {
        if p < self.points.len() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange { index: p, len: self.points.len() })
        }
    }

    /// Ambient base vertex and radius of a point; the apex has radius 0.
    fn local(&self, p: usize) -> (usize, f64) {
        match self.points[p] {
            ConeOffPoint::Base(v) => (v, self.r0),
            ConeOffPoint::Apex(_) => (NO_BASE, 0.0),
            ConeOffPoint::Interior { base, r, .. } => (base, r),
        }
    }

    fn cones_of(&self, p: usize) -> &[usize] {
        match &self.points[p] {
            ConeOffPoint::Base(v) => &self.membership[*v],
            ConeOffPoint::Apex(i) | ConeOffPoint::Interior { cone: i, .. } => std::slice::from_ref(i),
        }
    }

    #[inline]
    fn in_cone(&self, (y, r): (usize, f64), (y2, r2): (usize, f64)) -> f64 {
        if r == 0.0 {
            r2
        } else if r2 == 0.0 {
            r
        } else {
            cone_formula(r, r2, self.base.metric().d(y, y2), self.r0)
        }
    }

    /// The two-scale distance: cone distance inside a common cone, base
    /// distance between base vertices with no common cone, infinite otherwise.
    pub fn sc_distance(&self, p: usize, q: usize) -> Result<f64> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.sc(p, q))
    }

    pub(crate) fn sc(&self, p: usize, q: usize) -> f64 {
        if p == q {
            return 0.0;
        }
        let (cp, cq) = (self.cones_of(p), self.cones_of(q));
        let shared = cp.iter().any(|i| cq.binary_search(i).is_ok());
        if shared {
            return self.in_cone(self.local(p), self.local(q));
        }
        if self.is_base(p) && self.is_base(q) {
            self.base.metric().d(p, q)
        } else {
            f64::INFINITY
        }
    }

    fn chain_neighbours(&self, u: usize, relax: &mut dyn FnMut(usize, f64)) {
        let lu = self.local(u);
        if self.is_base(u) {
            for &(v, _) in self.base.neighbours(u) {
                relax(v, self.sc(u, v));
            }
        }
        for &i in self.cones_of(u) {
            for &(q, y, r) in &self.coords[i].points {
                if q != u {
                    relax(q, self.in_cone(lu, (y, r)));
                }
            }
        }
    }

    fn run_chain(&self, sources: &[usize], limit: f64) -> (Vec<f64>, Vec<usize>) {
        dijkstra_with(self.len(), sources, limit, |u, relax| self.chain_neighbours(u, relax))
    }

    /// Chain distances from `source` to every point, truncated at `limit`
    /// (points further away read as infinite).
    pub fn chain_distances(&self, source: usize, limit: f64) -> Result<Vec<f64>> {
        self.check(source)?;
        Ok(self.run_chain(&[source], limit).0)
    }

    pub fn chain_metric(&self, p: usize, q: usize) -> Result<f64> {
        self.check(q)?;
        Ok(self.chain_distances(p, f64::INFINITY)?[q])
    }

    /// A chain realizing the chain distance between `p` and `q`.
    pub fn realizing_chain(&self, p: usize, q: usize) -> Result<Chain> {
        self.check(p)?;
        self.check(q)?;
        if p == q {
            return Chain::new(vec![p, p]);
        }
        let (_, pred) = self.run_chain(&[p], f64::INFINITY);
        let mut points = vec![q];
        let mut cur = q;
        while cur != p {
            cur = pred[cur];
            points.push(cur);
        }
        points.reverse();
        Chain::new(points)
    }

    /// All-pairs chain metric on the materialized points.
    pub fn chain_matrix(&self) -> FiniteMetricSpace {
        let n = self.len();
        let rows: Vec<Vec<f64>> = (0..n).into_par_iter().map(|s| self.run_chain(&[s], f64::INFINITY).0).collect();
        FiniteMetricSpace::from_matrix_unchecked(n, rows.concat()).expect("square matrix")
    }

    /// Distance from every point to the nearest apex, truncated at `limit`.
    pub fn apex_distances(&self, limit: f64) -> Vec<f64> {
        self.run_chain(&self.apexes, limit).0
    }

    /// Points within chain distance `radius` of `center`, sorted by index.
    pub fn ball(&self, center: usize, radius: f64) -> Result<Vec<usize>> {
        let d = self.chain_distances(center, radius + SLACK)?;
        Ok((0..self.len()).filter(|&p| d[p] <= radius + SLACK).collect())
    }

    /// Chain metric restricted to `points`, computed with truncated searches.
    pub fn restricted_metric(&self, points: &[usize], reach: f64) -> FiniteMetricSpace {
        let m = points.len();
        let rows: Vec<Vec<f64>> = points
            .par_iter()
            .map(|&s| {
                let d = self.run_chain(&[s], reach).0;
                points.iter().map(|&q| d[q]).collect()
            })
            .collect();
        FiniteMetricSpace::from_matrix_unchecked(m, rows.concat()).expect("square matrix")
    }

    /// Four-point δ of the ball of chain radius `radius` around `center`.
    pub fn local_delta(&self, center: usize, radius: f64, mode: FourPointMode) -> Result<LocalDelta> {
        let ball = self.ball(center, radius)?;
        let metric = self.restricted_metric(&ball, 2.0 * radius + SLACK);
        Ok(LocalDelta { center, size: ball.len(), delta: four_point_delta(&metric, mode) })
    }

    /// Projection to the base; undefined at apexes.
    pub fn project(&self, p: usize) -> Result<usize> {
        self.check(p)?;
        match self.points[p] {
            ConeOffPoint::Base(v) => Ok(v),
            ConeOffPoint::Interior { base, .. } => Ok(base),
            ConeOffPoint::Apex(_) => Err(Error::ApexProjection),
        }
    }

    /// Drops non-base interior points. Consecutive non-base points always lie
    /// in one cone together with their neighbours, so the length never grows.
    pub fn base_normal_form(&self, chain: &Chain) -> Chain {
        let last = chain.points.len() - 1;
        let points = chain
            .points
            .iter()
            .enumerate()
            .filter(|&(k, &p)| k == 0 || k == last || self.is_base(p))
            .map(|(_, &p)| p)
            .collect();
        Chain { points }
    }

    /// Compares chain distances with shortest admissible paths on `pairs`.
    ///
    /// Admissible steps are base edges at their weight and moves inside a
    /// cone whose straight cone segment exists in the glued space: through the
    /// apex, along one ray, or over a fixed base geodesic contained in the
    /// family member.
    pub fn path_metric_gap(&self, delta: f64, pairs: &[(usize, usize)]) -> Result<PathMetricGap> {
        for &(p, q) in pairs {
            self.check(p)?;
            self.check(q)?;
        }
        let inside: Vec<Vec<bool>> = self
            .family
            .par_iter()
            .map(|y| {
                let m = y.members();
                let k = m.len();
                (0..k * k)
                    .map(|t| self.base.geodesic(m[t / k], m[t % k]).vertices.iter().all(|&u| y.contains(u)))
                    .collect()
            })
            .collect();
        let mut sources: Vec<usize> = pairs.iter().map(|&(p, _)| p).collect();
        sources.sort_unstable();
        sources.dedup();
        let runs: Vec<(usize, Vec<f64>, Vec<f64>)> = sources
            .par_iter()
            .map(|&s| {
                let adm = dijkstra_with(self.len(), &[s], f64::INFINITY, |u, relax| {
                    self.admissible_neighbours(&inside, u, relax)
                })
                .0;
                (s, adm, self.run_chain(&[s], f64::INFINITY).0)
            })
            .collect();
        let mut gap = 0.0f64;
        let mut excess = f64::NEG_INFINITY;
        let mut finite_pairs = 0;
        for &(p, q) in pairs {
            let (_, adm, chain) = &runs[sources.binary_search(&p).unwrap()];
            gap = gap.max(adm[q] - chain[q]);
            let sc = self.sc(p, q);
            if sc.is_finite() {
                finite_pairs += 1;
                excess = excess.max(adm[q] - sc - 40.0 * delta);
            }
        }
        let strongly_qc = self.family.iter().map(|y| y.strong_quasiconvexity(&self.base, delta).holds).collect();
        Ok(PathMetricGap {
            pairs: pairs.len(),
            max_gap: gap,
            finite_sc_pairs: finite_pairs,
            max_excess_over_sc: if finite_pairs == 0 { 0.0 } else { excess },
            bound: 40.0 * delta,
            strongly_quasiconvex: strongly_qc,
        })
    }

    fn admissible_neighbours(&self, inside: &[Vec<bool>], u: usize, relax: &mut dyn FnMut(usize, f64)) {
        let (yu, ru) = self.local(u);
        if self.is_base(u) {
            for &(v, w) in self.base.neighbours(u) {
                relax(v, w);
            }
        }
        for &i in self.cones_of(u) {
            let y = &self.family[i];
            let k = y.len();
            let pu = if yu == NO_BASE { 0 } else { y.position(yu).unwrap() };
            for &(q, yq, rq) in &self.coords[i].points {
                if q == u {
                    continue;
                }
                let straight = ru == 0.0
                    || rq == 0.0
                    || yu == yq
                    || angle(self.base.metric().d(yu, yq), self.r0) >= std::f64::consts::PI
                    || inside[i][pu * k + y.position(yq).unwrap()];
                if straight {
                    relax(q, self.in_cone((yu, ru), (yq, rq)));
                }
            }
        }
    }

    /// Evenly spread sample of ordered point pairs drawn from a seeded stream.
    pub fn sample_pairs(&self, count: usize, seed: u64) -> Vec<(usize, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all: Vec<usize> = (0..self.len()).collect();
        (0..count)
            .map(|_| {
                let p = *all.choose(&mut rng).unwrap();
                let q = *all.choose(&mut rng).unwrap();
                (p, q)
            })
            .collect()
    }
}

/// Four-point δ of one ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalDelta {
    pub center: usize,
    pub size: usize,
    pub delta: f64,
}

/// Discrepancy between admissible paths and the chain metric.
#[derive(Clone, Debug, PartialEq)]
pub struct PathMetricGap {
    pub pairs: usize,
    /// Largest admissible distance minus chain distance.
    pub max_gap: f64,
    pub finite_sc_pairs: usize,
    /// Largest admissible distance minus `sc + 40δ` over pairs with finite two-scale distance.
    pub max_excess_over_sc: f64,
    pub bound: f64,
    pub strongly_quasiconvex: Vec<bool>,
}

/// The subchain built by the greedy reduction rules with threshold `eta`.
///
/// Indices below are 0-based: keep the first two points, then from position
/// `j` jump to the furthest `j' ≤ n−2` within base distance `eta` when the
/// next gap is at most `eta`, else step by one, and finish at the last point.
pub fn chain_reduce(space: &ConeOffSpace, chain: &Chain, eta: f64) -> Result<Chain> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidParameter(format!("reduction threshold must lie in (0, 1), got {eta}")));
    }
    let z = &chain.points;
    let n = z.len();
    if n < 2 {
        return Err(Error::InvalidParameter("a chain needs at least two points".into()));
    }
    if let Some(&bad) = z[1..n - 1].iter().find(|&&p| !space.is_base(p)) {
        return Err(Error::InvalidParameter(format!("chain interior point {bad} is not a base vertex")));
    }
    if n == 2 {
        return Ok(chain.clone());
    }
    let d = |a: usize, b: usize| space.base.metric().d(z[a], z[b]);
    let mut kept = vec![0, 1];
    let mut j = 1;
    while j < n - 2 {
        j = if d(j, j + 1) > eta {
            j + 1
        } else {
            (j + 1..=n - 2).rev().find(|&t| d(j, t) <= eta).unwrap()
        };
        kept.push(j);
    }
    kept.push(n - 1);
    Ok(Chain { points: kept.into_iter().map(|k| z[k]).collect() })
}

/// Threshold giving length error at most `eps` for chains of length at most `a`.
pub fn approximation_eta(a: f64, eps: f64) -> f64 {
    0.1 * (eps / (2.0 * a)).sqrt()
}

/// Explicit point-count bound `1000·A·sqrt(2A/ε)` for approximating chains.
pub fn approximation_point_bound(a: f64, eps: f64) -> f64 {
    1000.0 * a * (2.0 * a / eps).sqrt()
}

/// Lower bound `μ(d_X)` for the chain distance between two base vertices.
pub fn base_lower_bound(space: &ConeOffSpace, u: usize, v: usize) -> f64 {
    mu(space.base.metric().d(u, v), space.r0)
}
