//! Isometric actions of finitely generated groups on finite spaces.
//!
//! Generators are injective partial maps: a ball in a Cayley graph is not
//! preserved by left multiplication, so a generator may send some points out
//! of the model. Words are evaluated letter by letter from the right and the
//! domain shrinks whenever an intermediate image leaves the model.

use std::collections::{HashMap, HashSet, VecDeque};
use std::f64::consts::PI;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cone::default_radii;
use crate::coneoff::{ConeOffSpace, LocalDelta};
use crate::error::{Error, Result};
use crate::metric::{four_point_delta, FiniteMetricSpace, FourPointMode, WeightedGraph, SLACK};
use crate::subspace::{largest_piece, StrongQuasiConvexity, Subspace};

/// Marker for points outside the domain of a partial map.
pub const UNDEFINED: usize = usize::MAX;

/// Default word-length cap for subgroup enumeration.
pub const DEFAULT_CAP: usize = 12;

/// Budget on `elements × points` kept in memory during enumeration.
const ENUMERATION_BUDGET: usize = 20_000_000;
const MAX_ELEMENTS: usize = 200_000;

/// An injective partial self-map of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialMap(Vec<usize>);

impl PartialMap {
    pub fn identity(n: usize) -> Self {
        PartialMap((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Self {
        PartialMap(images)
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, x: usize) -> Option<usize> {
        match self.0[x] {
            UNDEFINED => None,
            y => Some(y),
        }
    }

    pub fn is_total(&self) -> bool {
        self.0.iter().all(|&y| y != UNDEFINED)
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &y)| y != UNDEFINED).map(|(x, _)| x)
    }

    pub fn domain_is_empty(&self) -> bool {
        self.0.iter().all(|&y| y == UNDEFINED)
    }

    /// True when the map fixes every point of its domain.
    pub fn is_identity_on_domain(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| y == UNDEFINED || y == x)
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(&self, inner: &PartialMap) -> PartialMap {
        PartialMap(
            inner
                .0
                .iter()
                .map(|&y| if y == UNDEFINED { UNDEFINED } else { self.0[y] })
                .collect(),
        )
    }

    pub fn inverse(&self) -> PartialMap {
        let mut inv = vec![UNDEFINED; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            if y != UNDEFINED {
                inv[y] = x;
            }
        }
        PartialMap(inv)
    }

    /// Image of the part of `set` inside the domain, sorted.
    pub fn image_of(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().filter_map(|&x| self.get(x)).collect();
        out.sort_unstable();
        out
    }
}

#[derive(Clone, Debug)]
struct Generator {
    name: String,
    map: PartialMap,
    inverse: PartialMap,
}

/// A word in the generators, stored as letters `(generator, inverted)` and
/// read as a product from left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<(usize, bool)>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[(usize, bool)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|&(g, inv)| (g, !inv)).collect() }
    }

    /// Concatenation `self · other`.
    pub fn then(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn generator(g: usize) -> Word {
        Word { letters: vec![(g, false)] }
    }
}

/// A finite space with named isometric partial maps.
#[derive(Clone, Debug)]
pub struct GroupAction {
    space: FiniteMetricSpace,
    generators: Vec<Generator>,
    boundary: Vec<bool>,
}

impl GroupAction {
    /// Validates every generator: correct length, images in range, injective,
    /// and distance-preserving on its domain.
    pub fn new(space: FiniteMetricSpace, generators: Vec<(String, Vec<usize>)>) -> Result<Self> {
        let n = space.len();
        let mut gens = Vec::with_capacity(generators.len());
        let mut seen = HashSet::new();
        for (name, images) in generators {
            if !seen.insert(name.clone()) {
                return Err(Error::NotAnIsometry { name, reason: "generator declared twice".into() });
            }
            if images.len() != n {
                return Err(Error::NotAnIsometry {
                    name,
                    reason: format!("{} images given for {n} points", images.len()),
                });
            }
            let mut hit = vec![false; n];
            for &y in &images {
                if y == UNDEFINED {
                    continue;
                }
                if y >= n {
                    return Err(Error::NotAnIsometry { name, reason: format!("image {y} out of range") });
                }
                if std::mem::replace(&mut hit[y], true) {
                    return Err(Error::NotAnIsometry { name, reason: format!("point {y} is hit twice") });
                }
            }
            let dom: Vec<usize> = (0..n).filter(|&x| images[x] != UNDEFINED).collect();
            let bad = dom.par_iter().find_map_first(|&x| {
                dom.iter()
                    .find(|&&y| (space.d(images[x], images[y]) - space.d(x, y)).abs() > SLACK)
                    .map(|&y| (x, y))
            });
            if let Some((x, y)) = bad {
                return Err(Error::NotAnIsometry { name, reason: format!("distance between {x} and {y} changes") });
            }
            let map = PartialMap(images);
            let inverse = map.inverse();
            gens.push(Generator { name, map, inverse });
        }
        let boundary = (0..n)
            .map(|x| gens.iter().any(|g| g.map.get(x).is_none() || g.inverse.get(x).is_none()))
            .collect();
        Ok(Self { space, generators: gens, boundary })
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_name(&self, g: usize) -> &str {
        &self.generators[g].name
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn generator_map(&self, g: usize) -> &PartialMap {
        &self.generators[g].map
    }

    pub fn is_total(&self) -> bool {
        self.generators.iter().all(|g| g.map.is_total())
    }

    /// True at points where some generator or inverse is undefined.
    pub fn is_boundary(&self, x: usize) -> bool {
        self.boundary[x]
    }

    /// Parses `NAME`, `NAME^k` tokens separated by `.`; `1` or an empty
    /// string is the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        for token in text.split('.') {
            let (name, power) = match token.split_once('^') {
                Some((name, k)) => {
                    let k: i64 = k.parse().map_err(|_| Error::MalformedWord(format!("bad exponent in `{token}`")))?;
                    (name, k)
                }
                None => (token, 1),
            };
            if name.is_empty() {
                return Err(Error::MalformedWord(format!("empty letter in `{text}`")));
            }
            if name == "1" {
                continue;
            }
            let g = self.generator_index(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            for _ in 0..power.unsigned_abs() {
                letters.push((g, power < 0));
            }
        }
        Ok(Word { letters })
    }

    /// Canonical text form, compressing runs into powers.
    pub fn format_word(&self, w: &Word) -> String {
        if w.letters.is_empty() {
            return "1".into();
        }
        let mut tokens = Vec::new();
        let mut k = 0;
        while k < w.letters.len() {
            let (g, inv) = w.letters[k];
            let mut run = 1;
            while k + run < w.letters.len() && w.letters[k + run] == (g, inv) {
                run += 1;
            }
            let power = if inv { -(run as i64) } else { run as i64 };
            tokens.push(if power == 1 {
                self.generators[g].name.clone()
            } else {
                format!("{}^{}", self.generators[g].name, power)
            });
            k += run;
        }
        tokens.join(".")
    }

    fn letter_map(&self, (g, inv): (usize, bool)) -> &PartialMap {
        if inv {
            &self.generators[g].inverse
        } else {
            &self.generators[g].map
        }
    }

    /// The partial map of a word, applying letters from the right.
    pub fn element(&self, w: &Word) -> PartialMap {
        let mut map = PartialMap::identity(self.space.len());
        for &letter in w.letters.iter().rev() {
            map = self.letter_map(letter).after(&map);
        }
        map
    }

    /// Smallest displacement `d(x, g·x)` over the domain, optionally
    /// restricted to `within`.
    pub fn displacement(&self, map: &PartialMap, within: Option<&Subspace>) -> Displacement {
        let candidates: Box<dyn Iterator<Item = usize>> = match within {
            Some(y) => Box::new(y.members().iter().copied()),
            None => Box::new(0..self.space.len()),
        };
        // ties go to points whose displacement is seen away from the boundary
        let mut best: Option<(f64, bool, usize)> = None;
        for x in candidates {
            if let Some(y) = map.get(x) {
                let d = self.space.d(x, y);
                let edge = self.boundary[x] || self.boundary[y];
                if best.map_or(true, |(b, e, _)| d < b || (d == b && e && !edge)) {
                    best = Some((d, edge, x));
                }
            }
        }
        match best {
            Some((value, boundary, x)) => Displacement { value, point: Some(x), boundary },
            None => Displacement { value: f64::INFINITY, point: None, boundary: false },
        }
    }

    /// Enumerates `⟨words⟩` by breadth-first search over freely reduced words
    /// of length at most `cap`, keeping the first word for each distinct map.
    pub fn enumerate(&self, words: &[Word], cap: usize) -> Enumeration {
        let n = self.space.len().max(1);
        let limit = MAX_ELEMENTS.min((ENUMERATION_BUDGET / n).max(1));
        let mut letters: Vec<(PartialMap, Word)> = Vec::with_capacity(2 * words.len());
        for w in words {
            letters.push((self.element(w), w.clone()));
            letters.push((self.element(&w.inverse()), w.inverse()));
        }
        let identity = PartialMap::identity(self.space.len());
        let mut seen: HashSet<PartialMap> = HashSet::new();
        seen.insert(identity.clone());
        let mut elements = vec![EnumeratedElement { map: identity, parent: usize::MAX, letter: usize::MAX, depth: 0 }];
        let mut unrealized = 0;
        let mut truncated = false;
        let mut queue = VecDeque::from([0usize]);
        'bfs: while let Some(e) = queue.pop_front() {
            if elements[e].depth == cap {
                continue;
            }
            for (l, (lmap, _)) in letters.iter().enumerate() {
                let last = elements[e].letter;
                if last != usize::MAX && last ^ 1 == l {
                    continue;
                }
                let map = lmap.after(&elements[e].map);
                if map.domain_is_empty() {
                    unrealized += 1;
                    continue;
                }
                if seen.contains(&map) {
                    continue;
                }
                if elements.len() >= limit {
                    truncated = true;
                    break 'bfs;
                }
                seen.insert(map.clone());
                let depth = elements[e].depth + 1;
                elements.push(EnumeratedElement { map, parent: e, letter: l, depth });
                queue.push_back(elements.len() - 1);
            }
        }
        let words = letters.into_iter().map(|(_, w)| w).collect();
        Enumeration { elements, letters: words, cap, unrealized, truncated }
    }

    /// Smallest translation length over nontrivial enumerated elements of
    /// `⟨words⟩`, measured on `within` when given.
    pub fn injectivity_radius_on(&self, words: &[Word], cap: usize, within: Option<&Subspace>) -> Result<InjectivityRadius> {
        if words.is_empty() {
            return Err(Error::EmptySubgroup);
        }
        let en = self.enumerate(words, cap);
        let best = en
            .elements
            .par_iter()
            .enumerate()
            .filter(|(_, e)| !e.map.is_identity_on_domain())
            .map(|(k, e)| (self.displacement(&e.map, within), k))
            .filter(|(d, _)| d.point.is_some())
            .min_by(|a, b| a.0.value.total_cmp(&b.0.value).then(a.1.cmp(&b.1)));
        let nontrivial = en.elements.iter().filter(|e| !e.map.is_identity_on_domain()).count();
        Ok(match best {
            Some((d, k)) => InjectivityRadius {
                value: d.value,
                witness: Some(self.format_word(&en.word(k))),
                point: d.point,
                boundary: d.boundary,
                elements: en.elements.len(),
                nontrivial,
                unrealized: en.unrealized,
                truncated: en.truncated,
                cap,
            },
            None => InjectivityRadius {
                value: f64::INFINITY,
                witness: None,
                point: None,
                boundary: false,
                elements: en.elements.len(),
                nontrivial,
                unrealized: en.unrealized,
                truncated: en.truncated,
                cap,
            },
        })
    }

    pub fn injectivity_radius(&self, words: &[Word], cap: usize) -> Result<InjectivityRadius> {
        self.injectivity_radius_on(words, cap, None)
    }
}

/// Smallest displacement of one element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Displacement {
    /// Infinite when the domain is empty.
    pub value: f64,
    pub point: Option<usize>,
    /// The minimum is realized at or into a point where the action is truncated.
    pub boundary: bool,
}

#[derive(Clone, Debug)]
struct EnumeratedElement {
    map: PartialMap,
    parent: usize,
    letter: usize,
    depth: usize,
}

/// Distinct elements found by [`GroupAction::enumerate`].
#[derive(Clone, Debug)]
pub struct Enumeration {
    elements: Vec<EnumeratedElement>,
    letters: Vec<Word>,
    pub cap: usize,
    /// Products whose domain became empty.
    pub unrealized: usize,
    /// The element limit stopped the search before the cap.
    pub truncated: bool,
}

impl Enumeration {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn map(&self, k: usize) -> &PartialMap {
        &self.elements[k].map
    }

    pub fn maps(&self) -> impl Iterator<Item = &PartialMap> {
        self.elements.iter().map(|e| &e.map)
    }

    /// The word that produced element `k`.
    pub fn word(&self, k: usize) -> Word {
        let mut parts = Vec::new();
        let mut cur = k;
        while self.elements[cur].parent != usize::MAX {
            parts.push(self.elements[cur].letter);
            cur = self.elements[cur].parent;
        }
        // the last letter applied is the leftmost factor
        parts.iter().fold(Word::identity(), |acc, &l| acc.then(&self.letters[l]))
    }
}

/// Injectivity radius together with enumeration bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct InjectivityRadius {
    /// Infinite when no nontrivial element was found.
    pub value: f64,
    pub witness: Option<String>,
    pub point: Option<usize>,
    pub boundary: bool,
    pub elements: usize,
    pub nontrivial: usize,
    pub unrealized: usize,
    pub truncated: bool,
    pub cap: usize,
}

/// Translation length of one word.
pub fn translation_length(action: &GroupAction, w: &Word) -> Displacement {
    action.displacement(&action.element(w), None)
}

/// Multiplies every distance by `lambda > 0`.
pub fn rescale(space: &FiniteMetricSpace, lambda: f64) -> Result<FiniteMetricSpace> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("rescaling factor must be positive, got {lambda}")));
    }
    Ok(space.scaled(lambda))
}

/// Orbit space with the induced metric.
#[derive(Clone, Debug, PartialEq)]
pub struct Quotient {
    pub metric: FiniteMetricSpace,
    /// Orbits sorted by smallest member; each orbit sorted.
    pub orbits: Vec<Vec<usize>>,
}

/// Quotient by a total action: orbits are closed under generators and
/// inverses within `cap` steps, and `d(Gx, Gy)` is the smallest distance
/// between orbit members.
pub fn quotient_metric(action: &GroupAction, cap: usize) -> Result<Quotient> {
    if let Some(g) = action.generators.iter().find(|g| !g.map.is_total()) {
        return Err(Error::PartialAction(format!("generator {} is not a permutation", g.name)));
    }
    let n = action.space.len();
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbit_of[start] = id;
        let mut orbit = vec![start];
        let mut frontier = vec![start];
        let mut depth = 0;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &x in &frontier {
                for g in &action.generators {
                    for y in [g.map.get(x).unwrap(), g.inverse.get(x).unwrap()] {
                        if orbit_of[y] == usize::MAX {
                            orbit_of[y] = id;
                            orbit.push(y);
                            next.push(y);
                        }
                    }
                }
            }
            if !next.is_empty() {
                depth += 1;
                if depth > cap {
                    return Err(Error::OrbitNotClosed(start));
                }
            }
            frontier = next;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    let k = orbits.len();
    let mut dist = vec![0.0; k * k];
    for a in 0..k {
        for b in (a + 1)..k {
            let mut best = f64::INFINITY;
            for &x in &orbits[a] {
                let row = action.space.row(x);
                for &y in &orbits[b] {
                    best = best.min(row[y]);
                }
            }
            dist[a * k + b] = best;
            dist[b * k + a] = best;
        }
    }
    Ok(Quotient { metric: FiniteMetricSpace::from_matrix(k, dist)?, orbits })
}

/// One indexed pair of a rotation family as declared by the input.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationEntry {
    pub name: String,
    pub subspace: Subspace,
    pub subgroup: Vec<Word>,
    /// Declared images `(generator, index)` of this entry's index.
    pub images: Vec<(usize, usize)>,
}

/// How the index action of one generator on one index was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexSource {
    Supplied,
    Inferred,
    /// No unique family member contains the image (only for partial maps).
    Unresolved,
}

impl fmt::Display for IndexSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexSource::Supplied => "supplied",
            IndexSource::Inferred => "inferred",
            IndexSource::Unresolved => "unresolved",
        })
    }
}

/// A validated family of pairs `(Y_i, H_i)` with the action on indices.
#[derive(Clone, Debug)]
pub struct RotationFamily {
    entries: Vec<RotationEntry>,
    /// `index_action[g][i]`
    index_action: Vec<Vec<Option<usize>>>,
    sources: Vec<Vec<IndexSource>>,
    pub conjugations_checked: usize,
    pub conjugations_unverified: usize,
}

impl RotationFamily {
    /// Checks distinctness, that each `H_i` preserves `Y_i`, that every
    /// generator maps `Y_i` into `Y_{g·i}` (and back under the inverse) on the
    /// common domain, and that `g H_i g⁻¹` agrees with elements of `H_{g·i}`.
    pub fn new(action: &GroupAction, entries: Vec<RotationEntry>, cap: usize) -> Result<Self> {
        let subspaces: Vec<Subspace> = entries.iter().map(|e| e.subspace.clone()).collect();
        crate::subspace::check_distinct(&subspaces).map_err(|e| match e {
            Error::DuplicateSubspace(a, b) => {
                Error::InvalidFamily(format!("entries {} and {} use the same subspace", entries[a].name, entries[b].name))
            }
            other => other,
        })?;
        let k = entries.len();
        let n = action.space.len();
        for e in &entries {
            if let Some(&bad) = e.subspace.members().iter().find(|&&m| m >= n) {
                return Err(Error::PointOutOfRange { index: bad, len: n });
            }
            for w in &e.subgroup {
                for map in [action.element(w), action.element(&w.inverse())] {
                    let img = map.image_of(e.subspace.members());
                    if img.iter().any(|&y| !e.subspace.contains(y)) {
                        return Err(Error::InvalidFamily(format!(
                            "subgroup word {} of entry {} does not preserve its subspace",
                            action.format_word(w),
                            e.name
                        )));
                    }
                }
            }
            for &(g, j) in &e.images {
                if g >= action.generator_count() || j >= k {
                    return Err(Error::InvalidFamily(format!("entry {} declares an image out of range", e.name)));
                }
            }
        }

        let maps_into = |map: &PartialMap, from: usize, to: usize| {
            map.image_of(entries[from].subspace.members()).iter().all(|&y| entries[to].subspace.contains(y))
        };
        let gc = action.generator_count();
        let mut index_action = vec![vec![None; k]; gc];
        let mut sources = vec![vec![IndexSource::Unresolved; k]; gc];
        for g in 0..gc {
            let (fwd, back) = (&action.generators[g].map, &action.generators[g].inverse);
            let total = fwd.is_total();
            for i in 0..k {
                let declared: Vec<usize> = entries[i].images.iter().filter(|&&(h, _)| h == g).map(|&(_, j)| j).collect();
                if declared.len() > 1 {
                    return Err(Error::InvalidFamily(format!(
                        "entry {} declares several images under {}",
                        entries[i].name, action.generators[g].name
                    )));
                }
                if let Some(&j) = declared.first() {
                    if !maps_into(fwd, i, j) || !maps_into(back, j, i) {
                        return Err(Error::InvalidFamily(format!(
                            "{} does not map subspace {} onto subspace {}",
                            action.generators[g].name, entries[i].name, entries[j].name
                        )));
                    }
                    index_action[g][i] = Some(j);
                    sources[g][i] = IndexSource::Supplied;
                    continue;
                }
                let image = fwd.image_of(entries[i].subspace.members());
                // a partial map seen on fewer than two points says too little
                let candidates: Vec<usize> = if image.is_empty() || (!total && image.len() < 2) {
                    Vec::new()
                } else {
                    (0..k).filter(|&j| maps_into(fwd, i, j) && maps_into(back, j, i)).collect()
                };
                if candidates.len() == 1 {
                    index_action[g][i] = Some(candidates[0]);
                    sources[g][i] = IndexSource::Inferred;
                } else if total {
                    return Err(Error::InvalidFamily(format!(
                        "the image of subspace {} under {} is not a unique family member",
                        entries[i].name, action.generators[g].name
                    )));
                }
            }
        }

        let mut cache: HashMap<usize, Enumeration> = HashMap::new();
        let mut checked = 0;
        let mut unverified = 0;
        for g in 0..gc {
            let gw = Word::generator(g);
            for i in 0..k {
                let Some(j) = index_action[g][i] else { continue };
                for h in &entries[i].subgroup {
                    let conj = action.element(&gw.then(h).then(&gw.inverse()));
                    if conj.domain_is_empty() {
                        unverified += 1;
                        continue;
                    }
                    let en = cache.entry(j).or_insert_with(|| action.enumerate(&entries[j].subgroup, cap));
                    let agrees = en.maps().any(|e| {
                        let mut common = false;
                        for x in conj.domain() {
                            if let Some(y) = e.get(x) {
                                if y != conj.get(x).unwrap() {
                                    return false;
                                }
                                common = true;
                            }
                        }
                        common
                    });
                    if !agrees {
                        return Err(Error::InvalidFamily(format!(
                            "conjugating the subgroup of {} by {} leaves the subgroup of {}",
                            entries[i].name, action.generators[g].name, entries[j].name
                        )));
                    }
                    checked += 1;
                }
            }
        }
        Ok(Self { entries, index_action, sources, conjugations_checked: checked, conjugations_unverified: unverified })
    }

    pub fn entries(&self) -> &[RotationEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn subspaces(&self) -> Vec<Subspace> {
        self.entries.iter().map(|e| e.subspace.clone()).collect()
    }

    pub fn index_image(&self, g: usize, i: usize) -> Option<usize> {
        self.index_action[g][i]
    }

    pub fn index_source(&self, g: usize, i: usize) -> IndexSource {
        self.sources[g][i]
    }

    /// Counts of supplied, inferred and unresolved index images.
    pub fn source_counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for row in &self.sources {
            for s in row {
                match s {
                    IndexSource::Supplied => c.0 += 1,
                    IndexSource::Inferred => c.1 += 1,
                    IndexSource::Unresolved => c.2 += 1,
                }
            }
        }
        c
    }
}

/// Caller-chosen thresholds and sampling controls.
#[derive(Clone, Debug, PartialEq)]
pub struct ScParams {
    pub delta0: f64,
    pub big_delta0: f64,
    pub r0: f64,
    pub epsilon: f64,
    pub cap: usize,
    pub radii: usize,
    pub mode: FourPointMode,
    pub centres: usize,
    pub seed: u64,
}

impl ScParams {
    /// Illustrative thresholds for demos.
    pub const DEMO_DELTA0: f64 = 1e-2;
    pub const DEMO_BIG_DELTA0: f64 = 1e-1;
}

/// Outcome of the small-cancellation check.
#[derive(Clone, Debug, PartialEq)]
pub struct ScReport {
    pub delta: f64,
    pub delta_mode: String,
    pub largest_piece: f64,
    pub rho: f64,
    pub rho_per_entry: Vec<InjectivityRadius>,
    /// `None` when `rho = 0`.
    pub delta_ratio: Option<f64>,
    pub piece_ratio: Option<f64>,
    pub strongly_quasiconvex: Vec<StrongQuasiConvexity>,
    pub pass: bool,
    /// Rescaling factor `2π sinh r0 / ρ` when ρ is finite and positive.
    pub rescale: Option<f64>,
    pub local: Vec<LocalDelta>,
    pub local_target: f64,
    /// Per entry: injectivity radius of `H_i` on `Y_i` after rescaling, and
    /// whether it exceeds `2π sinh r0`.
    pub first_theorem: Vec<(f64, bool)>,
    pub first_theorem_bound: f64,
    pub large_radius: bool,
    pub notes: Vec<String>,
}

/// Computes δ, Δ and ρ for a rotation family, the ratio verdict and, on a
/// pass, the local hyperbolicity of the rescaled cone-off.
pub fn small_cancellation_report(
    graph: &WeightedGraph,
    action: &GroupAction,
    family: &RotationFamily,
    p: &ScParams,
) -> Result<ScReport> {
    for (name, v) in [("delta0", p.delta0), ("Delta0", p.big_delta0)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be non-negative, got {v}")));
        }
    }
    for (name, v) in [("r0", p.r0), ("epsilon", p.epsilon)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
    }
    if graph.metric() != action.space() {
        return Err(Error::InvalidParameter("group action is defined on a different space".into()));
    }
    let metric = graph.metric();
    let mut notes = Vec::new();
    let delta = four_point_delta(metric, p.mode);
    let subspaces = family.subspaces();
    let piece = largest_piece(metric, &subspaces, delta)?;
    let rho_per_entry = family
        .entries()
        .iter()
        .map(|e| action.injectivity_radius(&e.subgroup, p.cap))
        .collect::<Result<Vec<_>>>()?;
    let rho = rho_per_entry.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let strongly: Vec<StrongQuasiConvexity> = subspaces.iter().map(|y| y.strong_quasiconvexity(graph, delta)).collect();
    let all_sqc = strongly.iter().all(|s| s.holds);
    let (delta_ratio, piece_ratio) = if rho == 0.0 {
        notes.push("some subgroup fixes a point: injectivity radius is 0 and the ratios are undefined".into());
        (None, None)
    } else {
        (Some(delta / rho), Some(piece / rho))
    };
    let pass = matches!((delta_ratio, piece_ratio), (Some(a), Some(b)) if a <= p.delta0 && b <= p.big_delta0) && all_sqc;
    let bound = 2.0 * PI * p.r0.sinh();
    let large_radius = p.r0 > 1e6 * (3f64.ln() + p.epsilon);
    let rescale = if rho.is_finite() && rho > 0.0 {
        let l = bound / rho;
        if l.is_finite() {
            Some(l)
        } else {
            notes.push("rescaling factor overflows; rescaled checks skipped".into());
            None
        }
    } else {
        None
    };
    if rho.is_infinite() {
        notes.push("no nontrivial element within the enumeration cap; rescaling undefined".into());
    }
    let first_theorem = family
        .entries()
        .iter()
        .map(|e| {
            let on_y = action.injectivity_radius_on(&e.subgroup, p.cap, Some(&e.subspace))?;
            let value = match rescale {
                Some(l) => on_y.value * l,
                None => on_y.value,
            };
            Ok((value, value - bound > SLACK))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut local = Vec::new();
    if let (true, Some(lambda)) = (pass, rescale) {
        let scaled = graph.scaled(lambda)?;
        let cone_off = ConeOffSpace::new(scaled, subspaces, p.r0, default_radii(p.r0, p.radii.max(1)))?;
        let half = 0.5 * p.r0;
        let apex_d = cone_off.apex_distances(half);
        let mut candidates: Vec<usize> = (0..cone_off.len()).filter(|&x| !(apex_d[x] < half - SLACK)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        candidates.shuffle(&mut rng);
        candidates.truncate(p.centres);
        candidates.sort_unstable();
        for c in candidates {
            let ld = cone_off.local_delta(c, p.r0 / 9.0, FourPointMode::auto(usize::MAX, p.seed))?;
            local.push(ld);
        }
    } else if !pass {
        notes.push("verdict failed; local cone-off check not run".into());
    }
    Ok(ScReport {
        delta,
        delta_mode: p.mode.label(),
        largest_piece: piece,
        rho,
        rho_per_entry,
        delta_ratio,
        piece_ratio,
        strongly_quasiconvex: strongly,
        pass,
        rescale,
        local,
        local_target: 3f64.ln() + p.epsilon,
        first_theorem,
        first_theorem_bound: bound,
        large_radius,
        notes,
    })
}
