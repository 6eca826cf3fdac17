//! The plain-text workspace format.
//!
//! ```text
//! # comment
//! points 4
//! edge 0 1 1.5          # graph mode, or `dist i j d` for matrix mode
//! subspace Y: 0 1
//! generator t: 1 2 3 0  # `-` marks points outside the domain
//! rotation 0: subspace=Y subgroup=t^2,1 image_under t=1
//! param r0 1
//! ```

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::group::{GroupAction, RotationEntry, RotationFamily, DEFAULT_CAP, UNDEFINED};
use crate::metric::{Edge, FiniteMetricSpace, WeightedGraph};
use crate::report::fmt_num;
use crate::subspace::Subspace;

/// Point set declaration.
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceDecl {
    Graph(Vec<Edge>),
    /// Unordered pairs `i < j` with their distance.
    Matrix(Vec<(usize, usize, f64)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RotationDecl {
    pub index: usize,
    pub subspace: String,
    pub subgroup: Vec<String>,
    pub image_under: Vec<(String, usize)>,
}

/// Named numeric parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    pub r0: Option<f64>,
    pub delta0: Option<f64>,
    pub big_delta0: Option<f64>,
    pub epsilon: Option<f64>,
    pub cap: Option<usize>,
    pub radii: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorkspaceDocument {
    pub points: usize,
    pub space: SpaceDecl,
    pub subspaces: Vec<(String, Vec<usize>)>,
    pub generators: Vec<(String, Vec<Option<usize>>)>,
    pub rotations: Vec<RotationDecl>,
    pub params: Params,
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn num<T: std::str::FromStr>(line: usize, what: &str, token: &str) -> Result<T> {
    token.parse().map_err(|_| perr(line, format!("invalid {what} `{token}`")))
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "1"
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        && !name.starts_with('-')
}

impl WorkspaceDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut points: Option<usize> = None;
        let mut edges = Vec::new();
        let mut dists = Vec::new();
        let mut subspaces: Vec<(String, Vec<usize>)> = Vec::new();
        let mut generators: Vec<(String, Vec<Option<usize>>)> = Vec::new();
        let mut rotations: Vec<(usize, RotationDecl)> = Vec::new();
        let mut params = Params::default();
        let mut seen_params = HashSet::new();
        let mut seen_pairs = HashSet::new();

        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let (head, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
            let rest = rest.trim();
            if head != "points" && points.is_none() {
                return Err(perr(line, "the document must start with `points n`"));
            }
            let n = points.unwrap_or(0);
            let index = |token: &str| -> Result<usize> {
                let i: usize = num(line, "point index", token)?;
                if i >= n {
                    return Err(perr(line, format!("point {i} out of range for {n} points")));
                }
                Ok(i)
            };
            match head {
                "points" => {
                    if points.is_some() {
                        return Err(perr(line, "`points` declared twice"));
                    }
                    points = Some(num(line, "point count", rest)?);
                }
                "edge" | "dist" => {
                    let t: Vec<&str> = rest.split_whitespace().collect();
                    if t.len() != 3 {
                        return Err(perr(line, format!("`{head}` expects two indices and a length")));
                    }
                    let (u, v) = (index(t[0])?, index(t[1])?);
                    let w: f64 = num(line, "length", t[2])?;
                    if !(w > 0.0 && w.is_finite()) {
                        return Err(perr(line, format!("length must be positive and finite, got {}", t[2])));
                    }
                    if u == v {
                        return Err(perr(line, "a point cannot be paired with itself"));
                    }
                    if !seen_pairs.insert((u.min(v), u.max(v))) {
                        return Err(perr(line, format!("pair {u} {v} declared twice")));
                    }
                    if head == "edge" {
                        edges.push(Edge { u, v, w });
                    } else {
                        dists.push((u.min(v), u.max(v), w));
                    }
                    if !edges.is_empty() && !dists.is_empty() {
                        return Err(perr(line, "`edge` and `dist` lines cannot be mixed"));
                    }
                }
                "subspace" | "generator" => {
                    let (name, body) = rest
                        .split_once(':')
                        .ok_or_else(|| perr(line, format!("`{head}` expects `NAME: ...`")))?;
                    let name = name.trim();
                    if !valid_name(name) {
                        return Err(perr(line, format!("invalid name `{name}`")));
                    }
                    if head == "subspace" {
                        if subspaces.iter().any(|(s, _)| s == name) {
                            return Err(perr(line, format!("subspace `{name}` declared twice")));
                        }
                        let members = body.split_whitespace().map(index).collect::<Result<Vec<_>>>()?;
                        if members.is_empty() {
                            return Err(perr(line, format!("subspace `{name}` has no members")));
                        }
                        subspaces.push((name.to_string(), members));
                    } else {
                        if generators.iter().any(|(s, _)| s == name) {
                            return Err(perr(line, format!("generator `{name}` declared twice")));
                        }
                        let images = body
                            .split_whitespace()
                            .map(|t| if t == "-" { Ok(None) } else { index(t).map(Some) })
                            .collect::<Result<Vec<_>>>()?;
                        if images.len() != n {
                            return Err(perr(line, format!("generator `{name}` lists {} images for {n} points", images.len())));
                        }
                        generators.push((name.to_string(), images));
                    }
                }
                "rotation" => {
                    let (idx, body) = rest.split_once(':').ok_or_else(|| perr(line, "`rotation` expects `i: ...`"))?;
                    let idx: usize = num(line, "rotation index", idx.trim())?;
                    if idx != rotations.len() {
                        return Err(perr(line, format!("rotation indices must be consecutive from 0, got {idx}")));
                    }
                    let mut subspace = None;
                    let mut subgroup = None;
                    let mut image_under = Vec::new();
                    let mut in_images = false;
                    for token in body.split_whitespace() {
                        if token == "image_under" {
                            in_images = true;
                            continue;
                        }
                        let (key, value) = token
                            .split_once('=')
                            .ok_or_else(|| perr(line, format!("expected `key=value`, got `{token}`")))?;
                        if in_images {
                            image_under.push((key.to_string(), num(line, "rotation index", value)?));
                            continue;
                        }
                        match key {
                            "subspace" if subspace.is_none() => subspace = Some(value.to_string()),
                            "subgroup" if subgroup.is_none() => {
                                subgroup = Some(value.split(',').map(str::to_string).collect::<Vec<_>>())
                            }
                            _ => return Err(perr(line, format!("unexpected key `{key}`"))),
                        }
                    }
                    let decl = RotationDecl {
                        index: idx,
                        subspace: subspace.ok_or_else(|| perr(line, "rotation without `subspace=`"))?,
                        subgroup: subgroup.ok_or_else(|| perr(line, "rotation without `subgroup=`"))?,
                        image_under,
                    };
                    rotations.push((line, decl));
                }
                "param" => {
                    let t: Vec<&str> = rest.split_whitespace().collect();
                    if t.len() != 2 {
                        return Err(perr(line, "`param` expects a name and a value"));
                    }
                    if !seen_params.insert(t[0].to_string()) {
                        return Err(perr(line, format!("parameter `{}` set twice", t[0])));
                    }
                    match t[0] {
                        "r0" => params.r0 = Some(num(line, "r0", t[1])?),
                        "delta0" => params.delta0 = Some(num(line, "delta0", t[1])?),
                        "Delta0" => params.big_delta0 = Some(num(line, "Delta0", t[1])?),
                        "epsilon" => params.epsilon = Some(num(line, "epsilon", t[1])?),
                        "cap" => params.cap = Some(num(line, "cap", t[1])?),
                        "radii" => params.radii = Some(num(line, "radii", t[1])?),
                        other => return Err(perr(line, format!("unknown parameter `{other}`"))),
                    }
                }
                other => return Err(perr(line, format!("unknown key `{other}`"))),
            }
        }
        let points = points.ok_or_else(|| perr(0, "empty document: `points n` is missing"))?;

        let k = rotations.len();
        for (line, r) in &rotations {
            if !subspaces.iter().any(|(s, _)| *s == r.subspace) {
                return Err(perr(*line, format!("unknown subspace `{}`", r.subspace)));
            }
            for (g, j) in &r.image_under {
                if !generators.iter().any(|(s, _)| s == g) {
                    return Err(perr(*line, format!("unknown generator `{g}`")));
                }
                if *j >= k {
                    return Err(perr(*line, format!("rotation index {j} out of range")));
                }
            }
            for w in &r.subgroup {
                for token in w.split('.').filter(|t| !t.is_empty()) {
                    let name = token.split('^').next().unwrap();
                    if name != "1" && !generators.iter().any(|(s, _)| s == name) {
                        return Err(perr(*line, format!("unknown generator `{name}` in `{w}`")));
                    }
                }
            }
        }
        let space = if dists.is_empty() { SpaceDecl::Graph(edges) } else { SpaceDecl::Matrix(dists) };
        Ok(Self {
            points,
            space,
            subspaces,
            generators,
            rotations: rotations.into_iter().map(|(_, r)| r).collect(),
            params,
        })
    }

    /// Canonical text form; parsing it gives back an equal document.
    pub fn render(&self) -> String {
        let mut out = format!("points {}\n", self.points);
        match &self.space {
            SpaceDecl::Graph(edges) => {
                for e in edges {
                    out.push_str(&format!("edge {} {} {}\n", e.u, e.v, fmt_num(e.w)));
                }
            }
            SpaceDecl::Matrix(d) => {
                for (i, j, w) in d {
                    out.push_str(&format!("dist {i} {j} {}\n", fmt_num(*w)));
                }
            }
        }
        for (name, members) in &self.subspaces {
            let m: Vec<String> = members.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("subspace {name}: {}\n", m.join(" ")));
        }
        for (name, images) in &self.generators {
            let m: Vec<String> = images.iter().map(|x| x.map_or("-".to_string(), |y| y.to_string())).collect();
            out.push_str(&format!("generator {name}: {}\n", m.join(" ")));
        }
        for r in &self.rotations {
            out.push_str(&format!("rotation {}: subspace={} subgroup={}", r.index, r.subspace, r.subgroup.join(",")));
            if !r.image_under.is_empty() {
                out.push_str(" image_under");
                for (g, j) in &r.image_under {
                    out.push_str(&format!(" {g}={j}"));
                }
            }
            out.push('\n');
        }
        let p = &self.params;
        let floats = [("r0", p.r0), ("delta0", p.delta0), ("Delta0", p.big_delta0), ("epsilon", p.epsilon)];
        for (name, v) in floats {
            if let Some(v) = v {
                out.push_str(&format!("param {name} {}\n", fmt_num(v)));
            }
        }
        for (name, v) in [("cap", p.cap), ("radii", p.radii)] {
            if let Some(v) = v {
                out.push_str(&format!("param {name} {v}\n"));
            }
        }
        out
    }

    /// Resolves the document into validated objects.
    pub fn build(&self) -> Result<Workspace> {
        let n = self.points;
        let (graph, from_matrix) = match &self.space {
            SpaceDecl::Graph(edges) => (WeightedGraph::new(n, edges.clone())?, false),
            SpaceDecl::Matrix(entries) => {
                if entries.len() != n * n.saturating_sub(1) / 2 {
                    return Err(Error::NotAMetric(format!(
                        "matrix mode needs all {} pairs, got {}",
                        n * n.saturating_sub(1) / 2,
                        entries.len()
                    )));
                }
                let mut dist = vec![0.0; n * n];
                for &(i, j, w) in entries {
                    dist[i * n + j] = w;
                    dist[j * n + i] = w;
                }
                let metric = FiniteMetricSpace::from_matrix(n, dist)?;
                (WeightedGraph::from_metric(&metric)?, true)
            }
        };
        let subspaces = self
            .subspaces
            .iter()
            .map(|(name, m)| Ok((name.clone(), Subspace::new(n, m.clone())?)))
            .collect::<Result<Vec<_>>>()?;
        let gens = self
            .generators
            .iter()
            .map(|(name, images)| (name.clone(), images.iter().map(|x| x.unwrap_or(UNDEFINED)).collect()))
            .collect();
        let action = GroupAction::new(graph.metric().clone(), gens)?;
        let cap = self.params.cap.unwrap_or(DEFAULT_CAP);
        let family = if self.rotations.is_empty() {
            None
        } else {
            let entries = self
                .rotations
                .iter()
                .map(|r| {
                    let subspace = subspaces.iter().find(|(s, _)| *s == r.subspace).unwrap().1.clone();
                    let subgroup = r.subgroup.iter().map(|w| action.parse_word(w)).collect::<Result<Vec<_>>>()?;
                    let images = r
                        .image_under
                        .iter()
                        .map(|(g, j)| (action.generator_index(g).unwrap(), *j))
                        .collect();
                    Ok(RotationEntry { name: r.subspace.clone(), subspace, subgroup, images })
                })
                .collect::<Result<Vec<_>>>()?;
            Some(RotationFamily::new(&action, entries, cap)?)
        };
        Ok(Workspace { graph, from_matrix, subspaces, action, family, params: self.params.clone() })
    }
}

/// A resolved workspace.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub graph: WeightedGraph,
    /// The graph is the complete graph on a declared distance matrix.
    pub from_matrix: bool,
    pub subspaces: Vec<(String, Subspace)>,
    pub action: GroupAction,
    pub family: Option<RotationFamily>,
    pub params: Params,
}

impl Workspace {
    pub fn metric(&self) -> &FiniteMetricSpace {
        self.graph.metric()
    }

    pub fn subspace(&self, name: &str) -> Result<&Subspace> {
        self.subspaces
            .iter()
            .find(|(s, _)| s == name)
            .map(|(_, y)| y)
            .ok_or_else(|| Error::InvalidSubspace(format!("unknown subspace `{name}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# four-cycle\npoints 4\nedge 0 1 1\nedge 1 2 1\nedge 2 3 1\nedge 3 0 1  # closing edge\n\
subspace A: 0 1\nsubspace B: 2 3\ngenerator t: 2 3 0 1\n\
rotation 0: subspace=A subgroup=1 image_under t=1\nrotation 1: subspace=B subgroup=1\nparam r0 1.5\nparam cap 6\n";

    #[test]
    fn parse_and_round_trip() {
        let doc = WorkspaceDocument::parse(SAMPLE).unwrap();
        assert_eq!(doc.points, 4);
        assert_eq!(doc.subspaces.len(), 2);
        assert_eq!(doc.params.r0, Some(1.5));
        assert_eq!(doc.rotations[0].image_under, vec![("t".to_string(), 1)]);
        let again = WorkspaceDocument::parse(&doc.render()).unwrap();
        assert_eq!(again, doc);
        let ws = doc.build().unwrap();
        assert_eq!(ws.family.unwrap().len(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = SAMPLE.replace("param cap 6", "param speed 6");
        assert!(matches!(WorkspaceDocument::parse(&bad), Err(Error::Parse { line: 13, .. })));
        let bad = SAMPLE.replace("edge 1 2 1", "edge 1 9 1");
        assert!(matches!(WorkspaceDocument::parse(&bad), Err(Error::Parse { line: 4, .. })));
        let bad = SAMPLE.replace("subspace=B", "subspace=C");
        assert!(matches!(WorkspaceDocument::parse(&bad), Err(Error::Parse { line: 11, .. })));
        let bad = SAMPLE.replace("subgroup=1\nparam", "subgroup=u\nparam");
        assert!(matches!(WorkspaceDocument::parse(&bad), Err(Error::Parse { line: 11, .. })));
        assert!(matches!(WorkspaceDocument::parse("edge 0 1 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(WorkspaceDocument::parse("points 2\nfoo 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(WorkspaceDocument::parse("points 2\nedge 0 1 1\ndist 0 1 1\n").is_err());
    }

    #[test]
    fn matrix_mode() {
        let doc = WorkspaceDocument::parse("points 3\ndist 0 1 1\ndist 0 2 2\ndist 1 2 1\n").unwrap();
        let ws = doc.build().unwrap();
        assert!(ws.from_matrix);
        assert_eq!(ws.metric().d(0, 2), 2.0);
        let missing = WorkspaceDocument::parse("points 3\ndist 0 1 1\n").unwrap();
        assert!(missing.build().is_err());
    }
}
