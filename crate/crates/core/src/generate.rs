//! Seeded generators for test spaces and demo workspaces.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric::{Edge, WeightedGraph};
use crate::subspace::Subspace;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn weight(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

/// Random labelled tree: vertex `i > 0` hangs off a uniform earlier vertex,
/// with weights uniform in `[lo, hi)`.
pub fn random_tree(n: usize, lo: f64, hi: f64, seed: u64) -> Result<WeightedGraph> {
    let mut r = rng(seed);
    let edges = (1..n).map(|v| Edge { u: r.gen_range(0..v), v, w: weight(&mut r, lo, hi) }).collect();
    WeightedGraph::new(n, edges)
}

/// Random tree plus `extra` additional distinct edges.
pub fn random_connected_graph(n: usize, extra: usize, lo: f64, hi: f64, seed: u64) -> Result<WeightedGraph> {
    let mut r = rng(seed);
    let mut edges: Vec<Edge> = (1..n).map(|v| Edge { u: r.gen_range(0..v), v, w: weight(&mut r, lo, hi) }).collect();
    let mut present: std::collections::HashSet<(usize, usize)> = edges.iter().map(|e| (e.u, e.v)).collect();
    let possible = n * n.saturating_sub(1) / 2;
    let target = (edges.len() + extra).min(possible);
    while edges.len() < target {
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if present.insert(key) {
            edges.push(Edge { u: key.0, v: key.1, w: weight(&mut r, lo, hi) });
        }
    }
    WeightedGraph::new(n, edges)
}

pub fn cycle(n: usize, w: f64) -> Result<WeightedGraph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("a cycle needs at least 3 vertices, got {n}")));
    }
    WeightedGraph::new(n, (0..n).map(|i| Edge { u: i, v: (i + 1) % n, w }).collect())
}

pub fn path(n: usize, w: f64) -> Result<WeightedGraph> {
    WeightedGraph::new(n, (1..n).map(|i| Edge { u: i - 1, v: i, w }).collect())
}

/// `k × k` grid with unit edges, vertex `(row, col)` at `row * k + col`.
pub fn grid(k: usize) -> Result<WeightedGraph> {
    let mut edges = Vec::new();
    for r in 0..k {
        for c in 0..k {
            let v = r * k + c;
            if c + 1 < k {
                edges.push(Edge { u: v, v: v + 1, w: 1.0 });
            }
            if r + 1 < k {
                edges.push(Edge { u: v, v: v + k, w: 1.0 });
            }
        }
    }
    WeightedGraph::new(k * k, edges)
}

/// `n` equally spaced points on a circle of perimeter `2π sinh r0`.
pub fn circle(n: usize, r0: f64) -> Result<WeightedGraph> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidParameter(format!("r0 must be positive, got {r0}")));
    }
    cycle(n, 2.0 * PI * r0.sinh() / n as f64)
}

/// A random tree containing subtrees of the given sizes that pairwise share
/// at most one vertex, plus `filler` vertices outside every subtree.
pub fn tree_family(seed: u64, sizes: &[usize], filler: usize) -> Result<(WeightedGraph, Vec<Subspace>)> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("at least one subtree size is required".into()));
    }
    if let Some(&s) = sizes.iter().find(|&&s| s < 2) {
        return Err(Error::InvalidParameter(format!("subtree sizes must be at least 2, got {s}")));
    }
    let mut r = rng(seed);
    let mut n = 1usize;
    let mut edges = Vec::new();
    let mut members = Vec::new();
    for (t, &size) in sizes.iter().enumerate() {
        let root = if t == 0 { 0 } else { r.gen_range(0..n) };
        let mut sub = vec![root];
        for _ in 1..size {
            let parent = sub[r.gen_range(0..sub.len())];
            edges.push(Edge { u: parent, v: n, w: weight(&mut r, 0.5, 1.5) });
            sub.push(n);
            n += 1;
        }
        members.push(sub);
    }
    for _ in 0..filler {
        edges.push(Edge { u: r.gen_range(0..n), v: n, w: weight(&mut r, 0.5, 1.5) });
        n += 1;
    }
    let graph = WeightedGraph::new(n, edges)?;
    let family = members.into_iter().map(|m| Subspace::new(n, m)).collect::<Result<Vec<_>>>()?;
    Ok((graph, family))
}

/// Cyclic `m`-sheeted cover of a random connected graph on `k` vertices,
/// with the deck shift `(v, s) ↦ (v, s + 1)` at index `v * m + s`.
pub fn cyclic_cover(k: usize, extra: usize, m: usize, seed: u64) -> Result<(WeightedGraph, Vec<usize>)> {
    if k < 3 || m < 1 || extra < 1 {
        return Err(Error::InvalidParameter("cyclic cover needs k ≥ 3, m ≥ 1 and a cycle".into()));
    }
    let base = random_connected_graph(k, extra, 0.5, 2.0, seed)?;
    let mut r = rng(seed ^ 0x9e37_79b9);
    let tree_edges = k - 1;
    let mut edges = Vec::new();
    for (idx, e) in base.edges().iter().enumerate() {
        // one non-tree edge carries voltage 1 so the cover is connected
        let volt = if idx < tree_edges {
            0
        } else if idx == tree_edges {
            1 % m
        } else {
            r.gen_range(0..m)
        };
        for s in 0..m {
            edges.push(Edge { u: e.u * m + s, v: e.v * m + (s + volt) % m, w: e.w });
        }
    }
    let graph = WeightedGraph::new(k * m, edges)?;
    let shift = (0..k * m).map(|x| (x / m) * m + (x % m + 1) % m).collect();
    Ok((graph, shift))
}

/// Letters of the free group on `a, b`: `a, b, a⁻¹, b⁻¹`.
pub const LETTERS: [char; 4] = ['a', 'b', 'A', 'B'];

#[inline]
pub fn inverse_letter(l: u8) -> u8 {
    (l + 2) % 4
}

/// Free reduction of a concatenation.
pub fn reduce(parts: &[&[u8]]) -> Vec<u8> {
    let mut out: Vec<u8> = Vec::new();
    for part in parts {
        for &l in *part {
            if out.last() == Some(&inverse_letter(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
    }
    out
}

pub fn invert(w: &[u8]) -> Vec<u8> {
    w.iter().rev().map(|&l| inverse_letter(l)).collect()
}

pub fn letters_to_string(w: &[u8]) -> String {
    w.iter().map(|&l| LETTERS[l as usize]).collect()
}

/// Word text in the generators `a`, `b` with runs written as powers.
pub fn word_text(w: &[u8]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut tokens = Vec::new();
    let mut k = 0;
    while k < w.len() {
        let mut run = 1;
        while k + run < w.len() && w[k + run] == w[k] {
            run += 1;
        }
        let name = if w[k] % 2 == 0 { "a" } else { "b" };
        let power = if w[k] >= 2 { -(run as i64) } else { run as i64 };
        tokens.push(if power == 1 { name.to_string() } else { format!("{name}^{power}") });
        k += run;
    }
    tokens.join(".")
}

/// Parses words like `(ab)^3`, `abAB` or `a^2b^-1` into letters, rejecting
/// anything that is not cyclically reduced as written.
pub fn parse_relator(text: &str) -> Result<Vec<u8>> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let word = parse_sequence(&chars, &mut pos, text)?;
    if pos != chars.len() {
        return Err(Error::MalformedWord(format!("unexpected `{}` in `{text}`", chars[pos])));
    }
    if word.is_empty() {
        return Err(Error::NotCyclicallyReduced(format!("`{text}` is the empty word")));
    }
    let freely = word.windows(2).all(|p| p[1] != inverse_letter(p[0]));
    if !freely || word[0] == inverse_letter(*word.last().unwrap()) {
        return Err(Error::NotCyclicallyReduced(text.to_string()));
    }
    Ok(word)
}

fn parse_sequence(chars: &[char], pos: &mut usize, text: &str) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    while *pos < chars.len() && chars[*pos] != ')' {
        let atom = if chars[*pos] == '(' {
            *pos += 1;
            let inner = parse_sequence(chars, pos, text)?;
            if *pos >= chars.len() || chars[*pos] != ')' {
                return Err(Error::MalformedWord(format!("unbalanced parentheses in `{text}`")));
            }
            *pos += 1;
            inner
        } else {
            let l = LETTERS
                .iter()
                .position(|&c| c == chars[*pos])
                .ok_or_else(|| Error::MalformedWord(format!("unknown letter `{}` in `{text}`", chars[*pos])))?;
            *pos += 1;
            vec![l as u8]
        };
        let mut power: i64 = 1;
        if *pos < chars.len() && chars[*pos] == '^' {
            *pos += 1;
            let start = *pos;
            if *pos < chars.len() && chars[*pos] == '-' {
                *pos += 1;
            }
            while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let digits: String = chars[start..*pos].iter().collect();
            power = digits.parse().map_err(|_| Error::MalformedWord(format!("bad exponent in `{text}`")))?;
        }
        let piece = if power < 0 { invert(&atom) } else { atom };
        for _ in 0..power.unsigned_abs() {
            out.extend_from_slice(&piece);
        }
    }
    Ok(out)
}

/// Shortest `u` with `w = u^k`.
pub fn root(w: &[u8]) -> &[u8] {
    let n = w.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| w[i] == w[i - p]) {
            return &w[..p];
        }
    }
    w
}

/// Ball of radius `radius` around the identity in the Cayley graph of the
/// free group on `a, b`, listed in breadth-first order.
#[derive(Clone, Debug)]
pub struct FreeGroupBall {
    pub radius: usize,
    pub words: Vec<Vec<u8>>,
    pub index: HashMap<Vec<u8>, usize>,
    pub graph: WeightedGraph,
    /// Left multiplication by `a` and `b` as partial maps.
    pub generators: Vec<(String, Vec<usize>)>,
}

impl FreeGroupBall {
    pub fn new(radius: usize) -> Result<Self> {
        let mut words = vec![Vec::new()];
        let mut index = HashMap::from([(Vec::new(), 0usize)]);
        let mut edges = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            if words[i].len() == radius {
                continue;
            }
            for l in 0..4u8 {
                if words[i].last() == Some(&inverse_letter(l)) {
                    continue;
                }
                let mut child = words[i].clone();
                child.push(l);
                let j = words.len();
                index.insert(child.clone(), j);
                words.push(child);
                edges.push(Edge { u: i, v: j, w: 1.0 });
                queue.push_back(j);
            }
        }
        let graph = WeightedGraph::new(words.len(), edges)?;
        let generators = [(0u8, "a"), (1u8, "b")]
            .iter()
            .map(|&(l, name)| {
                let images = words
                    .iter()
                    .map(|w| index.get(&reduce(&[&[l], w])).copied().unwrap_or(usize::MAX))
                    .collect();
                (name.to_string(), images)
            })
            .collect();
        Ok(Self { radius, words, index, graph, generators })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Every reduced word of length at most `r`, breadth-first.
    pub fn words_up_to(r: usize) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        let mut k = 0;
        while k < out.len() {
            if out[k].len() < r {
                for l in 0..4u8 {
                    if out[k].last() != Some(&inverse_letter(l)) {
                        let mut c = out[k].clone();
                        c.push(l);
                        out.push(c);
                    }
                }
            }
            k += 1;
        }
        out
    }
}

/// Translates of the axis of a cyclically reduced word, intersected with a ball.
#[derive(Clone, Debug)]
pub struct AxisFamily {
    pub ball: FreeGroupBall,
    pub relator: Vec<u8>,
    pub root: Vec<u8>,
    /// Per translate: translating element `g`, ball members, and the subgroup
    /// generator `g w g⁻¹`.
    pub translates: Vec<(Vec<u8>, Vec<usize>, Vec<u8>)>,
    /// Per translate: `(generator, index)` for translates whose image under
    /// `a` or `b` is again in the list.
    pub images: Vec<Vec<(usize, usize)>>,
}

impl AxisFamily {
    pub fn new(radius: usize, relator: &[u8]) -> Result<Self> {
        let ball = FreeGroupBall::new(radius)?;
        let u = root(relator).to_vec();
        let reach = 2 * radius + u.len();
        let reps = reach / u.len() + 2;
        let inv_u = invert(&u);
        let mut line: Vec<Vec<u8>> = Vec::new();
        for k in -(reps as i64)..=(reps as i64) {
            let power: Vec<u8> = if k >= 0 { u.repeat(k as usize) } else { inv_u.repeat((-k) as usize) };
            for j in 0..u.len() {
                let x = reduce(&[&power, &u[..j]]);
                if x.len() <= reach {
                    line.push(x);
                }
            }
        }
        line.sort();
        line.dedup();
        let trace = |g: &[u8]| -> Vec<usize> {
            let mut pts: Vec<usize> = line.iter().filter_map(|x| ball.index.get(&reduce(&[g, x])).copied()).collect();
            pts.sort_unstable();
            pts.dedup();
            pts
        };
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut translates = Vec::new();
        for g in FreeGroupBall::words_up_to(radius + u.len()) {
            let pts = trace(&g);
            if pts.len() < 2 || seen.contains_key(&pts) {
                continue;
            }
            seen.insert(pts.clone(), translates.len());
            let h = reduce(&[&g, relator, &invert(&g)]);
            translates.push((g, pts, h));
        }
        let images = translates
            .iter()
            .map(|(g, _, _)| {
                (0..2u8)
                    .filter_map(|s| seen.get(&trace(&reduce(&[&[s], g]))).map(|&j| (s as usize, j)))
                    .collect()
            })
            .collect();
        Ok(Self { ball, relator: relator.to_vec(), root: u, translates, images })
    }
}
