//! Rips complexes and their mod-2 homology.
//!
//! A simplex is a vertex set of diameter strictly less than the scale.
//! Ranks of boundary maps are computed by column reduction over the field
//! with two elements, with columns stored as sorted face-index lists.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;

/// Hard limit on the total number of simplices.
pub const MAX_SIMPLICES: usize = 500_000;
pub const DEFAULT_MAXDIM: usize = 3;

/// Simplices of diameter `< scale`, listed per dimension in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct RipsComplex {
    scale: f64,
    maxdim: usize,
    simplices: Vec<Vec<Vec<u32>>>,
}

impl RipsComplex {
    /// Clique expansion of the graph joining points at distance `< scale`.
    pub fn build(space: &FiniteMetricSpace, scale: f64, maxdim: usize) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::InvalidParameter(format!("Rips scale must be positive, got {scale}")));
        }
        let n = space.len();
        let up: Vec<Vec<u32>> = (0..n)
            .map(|i| ((i + 1)..n).filter(|&j| space.d(i, j) < scale).map(|j| j as u32).collect())
            .collect();
        let mut simplices = vec![Vec::new(); maxdim + 1];
        let mut total = 0usize;
        let mut stack: Vec<u32> = Vec::with_capacity(maxdim + 1);
        for v in 0..n {
            stack.push(v as u32);
            expand(&up, &mut stack, &up[v], maxdim, &mut simplices, &mut total)?;
            stack.pop();
        }
        let complex = Self { scale, maxdim, simplices };
        debug_assert!(complex.boundary_squares_to_zero());
        Ok(complex)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn maxdim(&self) -> usize {
        self.maxdim
    }

    pub fn simplices(&self, dim: usize) -> &[Vec<u32>] {
        self.simplices.get(dim).map(|s| s.as_slice()).unwrap_or(&[])
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(|s| s.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(k, s)| if k % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }

    fn index_of(&self, dim: usize, face: &[u32]) -> u32 {
        self.simplices[dim].binary_search_by(|s| s.as_slice().cmp(face)).expect("faces are listed") as u32
    }

    /// Columns of the boundary map from dimension `dim` to `dim − 1`.
    fn boundary_columns(&self, dim: usize) -> Vec<Vec<u32>> {
        self.simplices[dim]
            .par_iter()
            .map(|s| {
                let mut col: Vec<u32> = (0..s.len())
                    .map(|skip| {
                        let face: Vec<u32> = s.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect();
                        self.index_of(dim - 1, &face)
                    })
                    .collect();
                col.sort_unstable();
                col
            })
            .collect()
    }

    /// Rank over the two-element field of the boundary map out of dimension `dim`.
    pub fn boundary_rank(&self, dim: usize) -> usize {
        if dim == 0 || dim > self.maxdim {
            return 0;
        }
        reduce_rank(self.boundary_columns(dim))
    }

    /// Mod-2 Betti numbers `b_0..=b_up_to`; requires `up_to < maxdim` so the
    /// next boundary map is available.
    pub fn betti_numbers(&self, up_to: usize) -> Result<Vec<usize>> {
        if up_to >= self.maxdim {
            return Err(Error::DimensionOutOfRange { requested: up_to, available: self.maxdim.saturating_sub(1) });
        }
        let ranks: Vec<usize> = (0..=up_to + 1).into_par_iter().map(|k| self.boundary_rank(k)).collect();
        Ok((0..=up_to).map(|k| self.simplices[k].len() - ranks[k] - ranks[k + 1]).collect())
    }

    /// Betti numbers of the complex itself, truncated at `maxdim`.
    pub fn skeleton_betti_numbers(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=self.maxdim + 1).into_par_iter().map(|k| self.boundary_rank(k)).collect();
        (0..=self.maxdim).map(|k| self.simplices[k].len() - ranks[k] - ranks[k + 1]).collect()
    }

    /// Every codimension-2 face appears an even number of times in the
    /// boundary of each boundary.
    pub fn boundary_squares_to_zero(&self) -> bool {
        (2..=self.maxdim).all(|k| {
            let top = self.boundary_columns(k);
            let low = self.boundary_columns(k - 1);
            top.iter().all(|col| {
                let mut acc: HashMap<u32, u32> = HashMap::new();
                for &f in col {
                    for &g in &low[f as usize] {
                        *acc.entry(g).or_default() += 1;
                    }
                }
                acc.values().all(|c| c % 2 == 0)
            })
        })
    }
}

fn expand(
    up: &[Vec<u32>],
    stack: &mut Vec<u32>,
    candidates: &[u32],
    maxdim: usize,
    out: &mut [Vec<Vec<u32>>],
    total: &mut usize,
) -> Result<()> {
    *total += 1;
    if *total > MAX_SIMPLICES {
        return Err(Error::SimplexOverflow(MAX_SIMPLICES));
    }
    out[stack.len() - 1].push(stack.clone());
    if stack.len() > maxdim {
        return Ok(());
    }
    for (k, &v) in candidates.iter().enumerate() {
        let next: Vec<u32> = intersect(&candidates[k + 1..], &up[v as usize]);
        stack.push(v);
        expand(up, stack, &next, maxdim, out, total)?;
        stack.pop();
    }
    Ok(())
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn symmetric_difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Column reduction by lowest nonzero entry.
fn reduce_rank(mut columns: Vec<Vec<u32>>) -> usize {
    let mut pivots: HashMap<u32, usize> = HashMap::new();
    let mut rank = 0;
    for c in 0..columns.len() {
        loop {
            let Some(&low) = columns[c].last() else { break };
            match pivots.get(&low) {
                Some(&other) => {
                    let reduced = symmetric_difference(&columns[c], &columns[other]);
                    columns[c] = reduced;
                }
                None => {
                    pivots.insert(low, c);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Reduced-homology test for connectivity up to dimension `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectednessCertificate {
    pub scale: f64,
    pub n: usize,
    /// Reduced Betti numbers in dimensions `0..=n`.
    pub reduced_betti: Vec<usize>,
    pub passes: bool,
}

/// Default scale: `4δ` plus the bottleneck plus the smallest positive distance.
/// Below the bottleneck the complex is disconnected whatever `δ` is.
pub fn default_certificate_scale(space: &FiniteMetricSpace, delta: f64) -> f64 {
    4.0 * delta + bottleneck(space) + space.min_positive_distance().unwrap_or(1.0)
}

/// Longest edge of a minimum spanning tree of the complete graph on the
/// space: the least scale at which the closed-ball 1-skeleton is connected.
pub fn bottleneck(space: &FiniteMetricSpace) -> f64 {
    let n = space.len();
    if n < 2 {
        return 0.0;
    }
    let mut reach = space.row(0).to_vec();
    let mut done = vec![false; n];
    done[0] = true;
    let mut worst = 0.0f64;
    for _ in 1..n {
        let next = (0..n).filter(|&v| !done[v]).min_by(|&a, &b| reach[a].total_cmp(&reach[b])).unwrap();
        worst = worst.max(reach[next]);
        done[next] = true;
        for (r, &d) in reach.iter_mut().zip(space.row(next)) {
            *r = r.min(d);
        }
    }
    worst
}

/// Builds the Rips complex up to dimension `n + 1` and checks that the
/// reduced mod-2 Betti numbers vanish through dimension `n`.
pub fn connectedness_certificate(space: &FiniteMetricSpace, scale: f64, n: usize) -> Result<ConnectednessCertificate> {
    let complex = RipsComplex::build(space, scale, n + 1)?;
    let mut reduced = complex.betti_numbers(n)?;
    if !space.is_empty() {
        reduced[0] -= 1;
    }
    let passes = reduced.iter().all(|&b| b == 0);
    Ok(ConnectednessCertificate { scale, n, reduced_betti: reduced, passes })
}
