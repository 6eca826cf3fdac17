//! Subsets of a finite space: neighbourhoods, quasi-convexity, cylinders and
//! overlaps between family members.
//!
//! A [`Subspace`] only stores its member indices; every operation takes the
//! ambient space explicitly so one subspace can be measured against a
//! rescaled copy of its ambient graph.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, WeightedGraph, SLACK};

/// Non-empty sorted set of ambient point indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    members: Vec<usize>,
}

impl Subspace {
    /// Sorts and deduplicates `members`, rejecting empty sets and indices
    /// outside `0..ambient_len`.
    pub fn new(ambient_len: usize, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::InvalidSubspace("subspace has no members".into()));
        }
        if let Some(&bad) = members.iter().find(|&&m| m >= ambient_len) {
            return Err(Error::PointOutOfRange { index: bad, len: ambient_len });
        }
        Ok(Self { members })
    }

    pub fn whole(ambient_len: usize) -> Result<Self> {
        Self::new(ambient_len, (0..ambient_len).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members.binary_search(&p).is_ok()
    }

    /// Position of `p` inside the sorted member list.
    pub fn position(&self, p: usize) -> Option<usize> {
        self.members.binary_search(&p).ok()
    }

    /// Distance from `p` to the closest member.
    pub fn distance_from(&self, metric: &FiniteMetricSpace, p: usize) -> f64 {
        let row = metric.row(p);
        self.members.iter().map(|&m| row[m]).fold(f64::INFINITY, f64::min)
    }

    /// All ambient points within `alpha` of some member.
    pub fn neighborhood(&self, metric: &FiniteMetricSpace, alpha: f64) -> Subspace {
        neighborhood_of(metric, &self.members, alpha)
    }

    /// Smallest α such that every fixed geodesic between two members stays in
    /// the α-neighbourhood.
    pub fn quasi_convexity_constant(&self, graph: &WeightedGraph) -> f64 {
        let metric = graph.metric();
        let to_self: Vec<f64> = (0..graph.len()).map(|u| self.distance_from(metric, u)).collect();
        self.members
            .par_iter()
            .map(|&p| {
                self.members
                    .iter()
                    .flat_map(|&q| graph.geodesic(p, q).vertices)
                    .map(|u| to_self[u])
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }

    /// Union of the 10δ-neighbourhoods of the fixed geodesics between members.
    pub fn cylinder(&self, graph: &WeightedGraph, delta: f64) -> Subspace {
        let mut on_paths = vec![false; graph.len()];
        for &p in &self.members {
            for &q in &self.members {
                for u in graph.geodesic(p, q).vertices {
                    on_paths[u] = true;
                }
            }
        }
        let core: Vec<usize> = (0..graph.len()).filter(|&u| on_paths[u]).collect();
        neighborhood_of(graph.metric(), &core, 10.0 * delta)
    }

    /// Strong quasi-convexity at scale δ: every ordered member pair `(x, x')`
    /// admits members `p, p'` with `d(p,x), d(p',x') ≤ 10δ` such that the fixed
    /// geodesics `[x,p]`, `[p,p']`, `[p',x']` all lie inside the subspace.
    pub fn strong_quasiconvexity(&self, graph: &WeightedGraph, delta: f64) -> StrongQuasiConvexity {
        let m = self.members.len();
        let radius = 10.0 * delta + SLACK;
        let metric = graph.metric();
        // inside[a * m + b]: geodesic between members a and b stays in the subspace
        let inside: Vec<bool> = (0..m * m)
            .into_par_iter()
            .map(|k| {
                let (a, b) = (self.members[k / m], self.members[k % m]);
                graph.geodesic(a, b).vertices.iter().all(|&u| self.contains(u))
            })
            .collect();
        let near: Vec<Vec<usize>> = (0..m)
            .map(|a| (0..m).filter(|&b| metric.d(self.members[a], self.members[b]) <= radius).collect())
            .collect();
        let witness = (0..m).into_par_iter().find_map_first(|a| {
            for b in 0..m {
                let starts: Vec<usize> = near[a].iter().copied().filter(|&p| inside[a * m + p]).collect();
                let ends: Vec<usize> = near[b].iter().copied().filter(|&q| inside[q * m + b]).collect();
                let ok = starts.iter().any(|&p| ends.iter().any(|&q| inside[p * m + q]));
                if !ok {
                    return Some((self.members[a], self.members[b]));
                }
            }
            None
        });
        StrongQuasiConvexity { holds: witness.is_none(), witness }
    }
}

/// Outcome of the strong quasi-convexity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrongQuasiConvexity {
    pub holds: bool,
    /// First failing ordered member pair.
    pub witness: Option<(usize, usize)>,
}

fn neighborhood_of(metric: &FiniteMetricSpace, core: &[usize], alpha: f64) -> Subspace {
    let members = (0..metric.len())
        .filter(|&u| {
            let row = metric.row(u);
            core.iter().any(|&c| row[c] <= alpha + SLACK)
        })
        .collect();
    Subspace { members }
}

/// Diameter of an intersection of neighbourhoods.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Overlap {
    Empty,
    Diameter(f64),
}

impl Overlap {
    /// Diameter with empty intersections counted as 0.
    pub fn value(self) -> f64 {
        match self {
            Overlap::Empty => 0.0,
            Overlap::Diameter(d) => d,
        }
    }
}

fn intersection_diameter(metric: &FiniteMetricSpace, a: &[usize], b: &[usize]) -> Overlap {
    let mut common = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    if common.is_empty() {
        return Overlap::Empty;
    }
    let mut diam = 0.0f64;
    for (k, &u) in common.iter().enumerate() {
        let row = metric.row(u);
        for &v in &common[k + 1..] {
            diam = diam.max(row[v]);
        }
    }
    Overlap::Diameter(diam)
}

/// Diameter of `Y^{+margin} ∩ Z^{+margin}`.
pub fn overlap_diameter(metric: &FiniteMetricSpace, y: &Subspace, z: &Subspace, margin: f64) -> Overlap {
    let ny = y.neighborhood(metric, margin);
    let nz = z.neighborhood(metric, margin);
    intersection_diameter(metric, &ny.members, &nz.members)
}

/// Largest overlap diameter between distinct family members at margin 20δ.
pub fn largest_piece(metric: &FiniteMetricSpace, family: &[Subspace], delta: f64) -> Result<f64> {
    check_distinct(family)?;
    if family.len() < 2 {
        return Ok(0.0);
    }
    let hoods: Vec<Subspace> = family.par_iter().map(|y| y.neighborhood(metric, 20.0 * delta)).collect();
    let k = hoods.len();
    Ok((0..k)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..k)
                .map(|j| intersection_diameter(metric, &hoods[i].members, &hoods[j].members).value())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max))
}

/// Rejects families containing the same subspace twice.
pub fn check_distinct(family: &[Subspace]) -> Result<()> {
    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by(|&a, &b| family[a].members.cmp(&family[b].members).then(a.cmp(&b)));
    for w in order.windows(2) {
        if family[w[0]] == family[w[1]] {
            return Err(Error::DuplicateSubspace(w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    Ok(())
}
