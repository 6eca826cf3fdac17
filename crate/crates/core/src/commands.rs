//! Command dispatch: each command reads a workspace and produces a report.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cone::{mu, ConeSpace, DEFAULT_RADII};
use crate::coneoff::ConeOffSpace;
use crate::document::{Params, RotationDecl, SpaceDecl, Workspace, WorkspaceDocument};
use crate::error::{Error, Result};
use crate::generate::{self, AxisFamily};
use crate::group::{quotient_metric, small_cancellation_report, ScParams, DEFAULT_CAP};
use crate::metric::{four_point_delta, thin_triangle_constant, FourPointMode, SLACK};
use crate::report::{fmt_num, Relation, ReportDocument};
use crate::rips::{connectedness_certificate, default_certificate_scale, RipsComplex};
use crate::subspace::Subspace;

/// Largest space on which the thin-triangle scan runs.
pub const THINNESS_LIMIT: usize = 200;
/// Largest materialized cone validated exhaustively.
pub const VALIDATE_LIMIT: usize = 400;

const TIE_BREAK: &str = "geodesics use the lexicographically smallest shortest path";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaMode {
    Auto,
    Exact,
    Sampled,
}

/// Four-point scan controls shared by several commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub mode: DeltaMode,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Self { mode: DeltaMode::Auto, samples: FourPointMode::DEFAULT_SAMPLES, seed: 0 }
    }
}

impl Sampling {
    pub fn resolve(&self, n: usize) -> FourPointMode {
        let sampled = FourPointMode::Sampled { samples: self.samples, seed: self.seed };
        match self.mode {
            DeltaMode::Exact => FourPointMode::Exact,
            DeltaMode::Sampled => sampled,
            DeltaMode::Auto if n <= FourPointMode::EXACT_LIMIT => FourPointMode::Exact,
            DeltaMode::Auto => sampled,
        }
    }

    fn echo(&self) -> String {
        let mode = match self.mode {
            DeltaMode::Auto => "auto",
            DeltaMode::Exact => "exact",
            DeltaMode::Sampled => "sampled",
        };
        format!("--mode {mode} --samples {} --seed {}", self.samples, self.seed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DemoKind {
    Circle { n: usize, r0: f64 },
    TreeFamily { seed: u64, sizes: Vec<usize>, filler: usize },
    FreeGroupBall { radius: usize, relator: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Delta {
        sampling: Sampling,
    },
    Mu {
        r0: f64,
        values: Vec<f64>,
    },
    Cone {
        r0: Option<f64>,
        radii: Option<usize>,
        subspace: Option<String>,
        quotient: bool,
        emit_metric: bool,
        sampling: Sampling,
    },
    ConeOff {
        r0: Option<f64>,
        radii: Option<usize>,
        family: Vec<String>,
        pairs: usize,
        emit_metric: bool,
        sampling: Sampling,
    },
    Rips {
        scale: Option<f64>,
        maxdim: usize,
        certificate: Option<usize>,
        sampling: Sampling,
    },
    ScCheck {
        delta0: Option<f64>,
        big_delta0: Option<f64>,
        r0: Option<f64>,
        epsilon: Option<f64>,
        cap: Option<usize>,
        radii: Option<usize>,
        centres: usize,
        sampling: Sampling,
    },
    Demo(DemoKind),
}

fn opt<T: ToString>(name: &str, v: &Option<T>) -> String {
    v.as_ref().map(|x| format!(" --{name} {}", x.to_string())).unwrap_or_default()
}

fn opt_num(name: &str, v: Option<f64>) -> String {
    v.map(|x| format!(" --{name} {}", fmt_num(x))).unwrap_or_default()
}

impl Command {
    pub fn needs_input(&self) -> bool {
        !matches!(self, Command::Mu { .. } | Command::Demo(_))
    }

    /// Canonical command line, without the input path.
    pub fn echo(&self) -> String {
        match self {
            Command::Delta { sampling } => format!("delta {}", sampling.echo()),
            Command::Mu { r0, values } => {
                let v: Vec<String> = values.iter().map(|t| fmt_num(*t)).collect();
                format!("mu --r0 {} {}", fmt_num(*r0), v.join(" ")).trim_end().to_string()
            }
            Command::Cone { r0, radii, subspace, quotient, emit_metric, sampling } => format!(
                "cone{}{}{}{}{} {}",
                opt_num("r0", *r0),
                opt("radii", radii),
                opt("subspace", subspace),
                if *quotient { " --quotient" } else { "" },
                if *emit_metric { " --emit-metric" } else { "" },
                sampling.echo()
            ),
            Command::ConeOff { r0, radii, family, pairs, emit_metric, sampling } => format!(
                "coneoff{}{}{} --pairs {pairs}{} {}",
                opt_num("r0", *r0),
                opt("radii", radii),
                if family.is_empty() { String::new() } else { format!(" --family {}", family.join(",")) },
                if *emit_metric { " --emit-metric" } else { "" },
                sampling.echo()
            ),
            Command::Rips { scale, maxdim, certificate, sampling } => format!(
                "rips{} --maxdim {maxdim}{} {}",
                opt_num("d", *scale),
                opt("certificate", certificate),
                sampling.echo()
            ),
            Command::ScCheck { delta0, big_delta0, r0, epsilon, cap, radii, centres, sampling } => format!(
                "sc-check{}{}{}{}{}{} --centres {centres} {}",
                opt_num("delta0", *delta0),
                opt_num("Delta0", *big_delta0),
                opt_num("r0", *r0),
                opt_num("epsilon", *epsilon),
                opt("cap", cap),
                opt("radii", radii),
                sampling.echo()
            ),
            Command::Demo(kind) => match kind {
                DemoKind::Circle { n, r0 } => format!("demo circle --n {n} --r0 {}", fmt_num(*r0)),
                DemoKind::TreeFamily { seed, sizes, filler } => {
                    let s: Vec<String> = sizes.iter().map(|x| x.to_string()).collect();
                    format!("demo tree-family --seed {seed} --sizes {} --filler {filler}", s.join(","))
                }
                DemoKind::FreeGroupBall { radius, relator } => {
                    format!("demo free-group-ball --radius {radius} --relator {relator}")
                }
            },
        }
    }
}

/// A named input document.
#[derive(Clone, Copy, Debug)]
pub struct Input<'a> {
    pub name: &'a str,
    pub text: &'a str,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    Report(ReportDocument),
    Document(WorkspaceDocument),
}

pub fn run(command: &Command, input: Option<Input<'_>>) -> Result<Output> {
    if let Command::Demo(kind) = command {
        return demo(kind).map(Output::Document);
    }
    let mut echo = command.echo();
    if let Some(i) = input {
        echo = format!("{echo} {}", i.name);
    }
    let mut report = ReportDocument::new(echo);
    if let Command::Mu { r0, values } = command {
        mu_report(&mut report, *r0, values)?;
        return Ok(Output::Report(report));
    }
    let input = input.ok_or_else(|| Error::InvalidParameter("this command needs an input document".into()))?;
    let ws = WorkspaceDocument::parse(input.text)?.build()?;
    if ws.from_matrix {
        report.note("matrix-mode input: geodesics run in the complete graph on the declared distances");
    }
    match command {
        Command::Delta { sampling } => delta_report(&mut report, &ws, sampling),
        Command::Cone { r0, radii, subspace, quotient, emit_metric, sampling } => {
            let r0 = required_r0(*r0, &ws.params)?;
            let m = radii.or(ws.params.radii).unwrap_or(DEFAULT_RADII);
            cone_report(&mut report, &ws, r0, m, subspace.as_deref(), *quotient, *emit_metric, sampling)
        }
        Command::ConeOff { r0, radii, family, pairs, emit_metric, sampling } => {
            let r0 = required_r0(*r0, &ws.params)?;
            let m = radii.or(ws.params.radii).unwrap_or(DEFAULT_RADII);
            coneoff_report(&mut report, &ws, r0, m, family, *pairs, *emit_metric, sampling)
        }
        Command::Rips { scale, maxdim, certificate, sampling } => {
            rips_report(&mut report, &ws, *scale, *maxdim, *certificate, sampling)
        }
        Command::ScCheck { delta0, big_delta0, r0, epsilon, cap, radii, centres, sampling } => {
            let p = &ws.params;
            let need = |v: Option<f64>, doc: Option<f64>, name: &str| {
                v.or(doc).ok_or_else(|| Error::InvalidParameter(format!("{name} is required (flag or `param {name}`)")))
            };
            let params = ScParams {
                delta0: need(*delta0, p.delta0, "delta0")?,
                big_delta0: need(*big_delta0, p.big_delta0, "Delta0")?,
                r0: need(*r0, p.r0, "r0")?,
                epsilon: need(*epsilon, p.epsilon, "epsilon")?,
                cap: cap.or(p.cap).unwrap_or(DEFAULT_CAP),
                radii: radii.or(p.radii).unwrap_or(DEFAULT_RADII),
                mode: sampling.resolve(ws.graph.len()),
                centres: *centres,
                seed: sampling.seed,
            };
            sc_report(&mut report, &ws, &params)
        }
        Command::Mu { .. } | Command::Demo(_) => unreachable!(),
    }?;
    Ok(Output::Report(report))
}

fn required_r0(flag: Option<f64>, params: &Params) -> Result<f64> {
    let r0 = flag.or(params.r0).ok_or_else(|| Error::InvalidParameter("r0 is required (flag or `param r0`)".into()))?;
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::InvalidParameter(format!("r0 must be positive, got {r0}")));
    }
    Ok(r0)
}

fn radius_note(report: &mut ReportDocument, r0: f64, epsilon: f64) {
    let threshold = 1e6 * (3f64.ln() + epsilon);
    report.value("large_radius", r0 > threshold, "r0 > 1e6·(ln 3 + epsilon)");
    if r0 <= threshold {
        report.note(format!(
            "r0 = {} is below the large-radius threshold {}; results are desk-scale illustrations",
            fmt_num(r0),
            fmt_num(threshold)
        ));
    }
}

fn delta_report(report: &mut ReportDocument, ws: &Workspace, sampling: &Sampling) -> Result<()> {
    let metric = ws.metric();
    let n = metric.len();
    let mode = sampling.resolve(n);
    report.value("points", n, "declared point count");
    report.value("diameter", metric.diameter(), "max d(x,y)");
    let delta = four_point_delta(metric, mode);
    report.value("delta", delta, "max over quadruples of min((x,y)_t,(y,z)_t) - (x,z)_t");
    report.value("delta.mode", mode.label(), "four-point scan mode");
    if n <= THINNESS_LIMIT {
        let tau = thin_triangle_constant(&ws.graph);
        report.value("thinness", tau, "fixed-geodesic thinness: max distance from a side to the other two");
        if mode == FourPointMode::Exact {
            report.audit("thinness_vs_delta", tau, Relation::AtMost, 4.0 * delta, "thinness <= 4·delta");
            report.audit("delta_vs_thinness", delta, Relation::AtMost, 8.0 * tau, "delta <= 8·thinness");
        } else {
            report.note("sampled delta is a lower estimate; cross-bounds with thinness not audited");
        }
        report.note(TIE_BREAK);
    } else {
        report.note(format!("thinness skipped above {THINNESS_LIMIT} points"));
    }
    Ok(())
}

fn mu_report(report: &mut ReportDocument, r0: f64, values: &[f64]) -> Result<()> {
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::InvalidParameter(format!("r0 must be positive, got {r0}")));
    }
    let plateau = PI * r0.sinh();
    report.value("r0", r0, "cone radius");
    report.value("plateau_start", plateau, "pi·sinh r0");
    report.value("plateau", 2.0 * r0, "2·r0");
    for &t in values {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("mu needs finite non-negative arguments, got {t}")));
        }
        let v = mu(t, r0);
        let key = format!("mu({})", fmt_num(t));
        report.value(&key, v, "rim distance of the cone for base distance t");
        report.audit(&format!("{key}.upper"), v, Relation::AtMost, t, "mu(t) <= t");
        let lower = 2.0 * r0 / plateau * plateau.min(t);
        report.audit(&format!("{key}.lower"), v, Relation::AtLeast, lower, "mu(t) >= (2 r0/(pi sinh r0))·min(pi sinh r0, t)");
    }
    Ok(())
}

fn emit_rows(report: &mut ReportDocument, metric: &crate::metric::FiniteMetricSpace) {
    for i in 0..metric.len() {
        report.value(&format!("metric.row.{i}"), metric.row(i).to_vec(), "materialized distances");
    }
}

#[allow(clippy::too_many_arguments)]
fn cone_report(
    report: &mut ReportDocument,
    ws: &Workspace,
    r0: f64,
    m: usize,
    subspace: Option<&str>,
    quotient: bool,
    emit_metric: bool,
    sampling: &Sampling,
) -> Result<()> {
    let base = match subspace {
        Some(name) => {
            report.note("base metric of a subspace cone is the restriction of the ambient metric");
            ws.metric().restrict(ws.subspace(name)?.members())
        }
        None => ws.metric().clone(),
    };
    let cone = ConeSpace::with_default_radii(base.clone(), r0, m)?;
    report.value("r0", r0, "cone radius");
    report.value("radii", cone.radii().to_vec(), "r0·k/m for k = 1..m");
    report.value("points", cone.point_count(), "1 + base points · radii");
    let validate = cone.point_count() <= VALIDATE_LIMIT;
    let metric = cone.materialize(validate)?;
    report.value("metric.validated", validate, "metric axioms checked exhaustively");
    let mode = sampling.resolve(metric.len());
    let delta = four_point_delta(&metric, mode);
    report.value("delta", delta, "four-point delta of the materialized cone");
    report.value("delta.mode", mode.label(), "four-point scan mode");
    if four_point_delta(&base, FourPointMode::auto(base.len(), sampling.seed)) <= SLACK && base.len() <= FourPointMode::EXACT_LIMIT {
        report.audit("tree_cone", delta, Relation::AtMost, 3f64.ln(), "delta(cone over a tree metric) <= ln 3");
    }
    if emit_metric {
        emit_rows(report, &metric);
    }
    if quotient {
        let cap = ws.params.cap.unwrap_or(DEFAULT_CAP);
        if subspace.is_some() {
            return Err(Error::InvalidParameter("--quotient applies to the whole space only".into()));
        }
        let q = quotient_metric(&ws.action, cap)?;
        let qcone = ConeSpace::new(q.metric.clone(), r0, cone.radii().to_vec())?;
        report.value("quotient.orbits", q.orbits.len(), "orbits of the generated group");
        let qm = qcone.materialize(qcone.point_count() <= VALIDATE_LIMIT)?;
        let qmode = sampling.resolve(qm.len());
        report.value("quotient.delta", four_point_delta(&qm, qmode), "four-point delta of the cone over the quotient");
        report.value("quotient.delta.mode", qmode.label(), "four-point scan mode");
        let words: Vec<crate::group::Word> =
            (0..ws.action.generator_count()).map(crate::group::Word::generator).collect();
        if !words.is_empty() {
            let rinj = ws.action.injectivity_radius(&words, cap)?;
            let bound = 2.0 * PI * r0.sinh();
            report.audit_with(
                "quotient.injectivity",
                rinj.value,
                Relation::AtLeast,
                bound,
                rinj.value - bound > SLACK,
                "injectivity radius > 2 pi sinh r0 (strict)",
            );
            report.note(format!("group elements enumerated within enumeration cap {cap}"));
        }
    }
    radius_note(report, r0, ws.params.epsilon.unwrap_or(0.0));
    Ok(())
}

fn family_from(ws: &Workspace, names: &[String]) -> Result<(Vec<String>, Vec<Subspace>)> {
    if names.is_empty() {
        return Ok(ws.subspaces.iter().cloned().unzip());
    }
    let ys = names.iter().map(|n| ws.subspace(n).cloned()).collect::<Result<Vec<_>>>()?;
    Ok((names.to_vec(), ys))
}

#[allow(clippy::too_many_arguments)]
fn coneoff_report(
    report: &mut ReportDocument,
    ws: &Workspace,
    r0: f64,
    m: usize,
    names: &[String],
    pairs: usize,
    emit_metric: bool,
    sampling: &Sampling,
) -> Result<()> {
    let (names, family) = family_from(ws, names)?;
    let space = ConeOffSpace::with_default_radii(ws.graph.clone(), family.clone(), r0, m)?;
    let n = ws.graph.len();
    report.value("family", names.join(","), "coned subspaces");
    report.value("points", space.len(), "base points, then per cone the apex and interior radii");
    report.value("radii", space.radii().to_vec(), "r0·k/m for k = 1..m");
    let base_mode = sampling.resolve(n);
    let base_delta = four_point_delta(ws.metric(), base_mode);
    report.value("base.delta", base_delta, "four-point delta of the base");
    report.value("base.delta.mode", base_mode.label(), "four-point scan mode");

    let chain = space.chain_matrix();
    let mode = sampling.resolve(chain.len());
    let delta = four_point_delta(&chain, mode);
    report.value("delta", delta, "four-point delta of the chain metric on materialized points");
    report.value("delta.mode", mode.label(), "four-point scan mode");

    let mut lower_gap = f64::INFINITY;
    let mut sc_excess = f64::NEG_INFINITY;
    let mut min_positive = f64::INFINITY;
    for p in 0..space.len() {
        for q in 0..space.len() {
            if p == q {
                continue;
            }
            let d = chain.d(p, q);
            min_positive = min_positive.min(d);
            let sc = space.sc_distance(p, q)?;
            if sc.is_finite() {
                sc_excess = sc_excess.max(d - sc);
            }
            if p < n && q < n {
                lower_gap = lower_gap.min(d - mu(ws.metric().d(p, q), r0));
            }
        }
    }
    if n >= 2 {
        report.audit("chain_lower_bound", lower_gap, Relation::AtLeast, 0.0, "chain(x,y) - mu(d_X(x,y)) >= 0 on base pairs");
    }
    if space.len() >= 2 {
        report.audit("chain_le_sc", sc_excess, Relation::AtMost, 0.0, "chain(x,y) - sc(x,y) <= 0");
        report.audit_with(
            "positivity",
            min_positive,
            Relation::AtLeast,
            0.0,
            min_positive > 0.0,
            "min chain distance between distinct points > 0",
        );
    }

    let tree = ws.graph.edges().len() + 1 == n;
    let sparse = family.iter().enumerate().all(|(i, y)| {
        family[i + 1..].iter().all(|z| y.members().iter().filter(|v| z.contains(**v)).count() <= 1)
    });
    if tree && sparse && mode == FourPointMode::Exact {
        report.audit("tree_ln3", delta, Relation::AtMost, 3f64.ln() + 0.2, "delta <= ln 3 + 0.2 sampling slack");
    }

    // projection bound on sampled pairs near each other and away from apexes
    let apex_d = space.apex_distances(r0);
    let far: Vec<usize> = (0..space.len()).filter(|&x| apex_d[x] >= 0.5 * r0 - SLACK).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let lipschitz = 3.0 * PI * r0.sinh() / r0;
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for _ in 0..pairs.min(far.len() * far.len()) {
        let x = *far.choose(&mut rng).unwrap();
        let row = chain.row(x);
        let near: Vec<usize> = (0..space.len()).filter(|&y| y != x && row[y] < r0 / 3.0).collect();
        let Some(&y) = near.choose(&mut rng) else { continue };
        let dp = ws.metric().d(space.project(x)?, space.project(y)?);
        worst = worst.max(dp - lipschitz * row[y]);
        checked += 1;
    }
    report.value("projection.pairs", checked, "pairs with x at least r0/2 from apexes and chain distance < r0/3");
    if checked > 0 {
        report.audit(
            "projection_lipschitz",
            worst,
            Relation::AtMost,
            0.0,
            "d_X(p x, p y) - (3 pi sinh r0 / r0)·chain(x,y) <= 0",
        );
    }

    let sample = space.sample_pairs(pairs, sampling.seed);
    let gap = space.path_metric_gap(base_delta, &sample)?;
    report.value("path_gap.pairs", gap.pairs, "sampled point pairs");
    report.value("path_gap.max", gap.max_gap, "max admissible-path distance minus chain distance");
    if gap.finite_sc_pairs > 0 {
        report.audit(
            "path_gap_40delta",
            gap.max_excess_over_sc,
            Relation::AtMost,
            0.0,
            "admissible-path distance - sc - 40·delta <= 0 on pairs with finite sc",
        );
    }
    if !gap.strongly_quasiconvex.iter().all(|&b| b) {
        report.note("some family members are not strongly quasi-convex; the 40·delta comparison assumes they are");
    }
    if emit_metric {
        emit_rows(report, &chain);
    }
    report.note(TIE_BREAK);
    report.note("chains run over materialized points only");
    report.value(
        "chain_reduction.point_bound",
        crate::coneoff::approximation_point_bound(1.0, ws.params.epsilon.unwrap_or(0.1)),
        "M(A) = 1000·A·sqrt(2A/epsilon) at A = 1",
    );
    radius_note(report, r0, ws.params.epsilon.unwrap_or(0.0));
    Ok(())
}

fn rips_report(
    report: &mut ReportDocument,
    ws: &Workspace,
    scale: Option<f64>,
    maxdim: usize,
    certificate: Option<usize>,
    sampling: &Sampling,
) -> Result<()> {
    let metric = ws.metric();
    let scale = match scale {
        Some(d) => d,
        None => {
            let mode = sampling.resolve(metric.len());
            let delta = four_point_delta(metric, mode);
            report.value("delta", delta, "four-point delta of the input");
            report.value("delta.mode", mode.label(), "four-point scan mode");
            default_certificate_scale(metric, delta)
        }
    };
    if !(scale > 0.0) {
        return Err(Error::InvalidParameter(format!("Rips scale must be positive, got {scale}")));
    }
    if maxdim == 0 {
        return Err(Error::InvalidParameter("maxdim must be at least 1".into()));
    }
    report.value("scale", scale, "simplices have diameter < scale");
    let complex = RipsComplex::build(metric, scale, maxdim)?;
    report.value("simplices", complex.counts(), "simplex counts per dimension");
    let euler = complex.euler_characteristic();
    let skeleton = complex.skeleton_betti_numbers();
    let alt: i64 = skeleton.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
    report.value("euler", euler as f64, "alternating sum of simplex counts");
    report.audit("euler_betti", (euler - alt).abs() as f64, Relation::AtMost, 0.0, "|chi - alternating Betti sum| = 0");
    report.value("betti", complex.betti_numbers(maxdim - 1)?, "mod-2 Betti numbers b_0..b_{maxdim-1}");
    report.note("coefficients mod 2; torsion is not detected");
    report.note("ties at the scale are excluded");
    if let Some(k) = certificate {
        let cert = connectedness_certificate(metric, scale, k)?;
        report.value("certificate.n", k, "connectivity dimension tested");
        report.value("certificate.reduced_betti", cert.reduced_betti.clone(), "reduced mod-2 Betti numbers 0..n");
        report.value("certificate.pass", cert.passes, "all reduced Betti numbers vanish");
        report.note("the certificate is a necessary condition only; fundamental-group triviality is not certified");
    }
    Ok(())
}

fn sc_report(report: &mut ReportDocument, ws: &Workspace, p: &ScParams) -> Result<()> {
    let family = ws
        .family
        .as_ref()
        .ok_or_else(|| Error::InvalidFamily("sc-check needs `rotation` blocks".into()))?;
    let sc = small_cancellation_report(&ws.graph, &ws.action, family, p)?;
    report.value("delta", sc.delta, "four-point delta of the base");
    report.value("delta.mode", sc.delta_mode.clone(), "four-point scan mode");
    report.value("Delta", sc.largest_piece, "max diameter of Y^{+20 delta} ∩ Y'^{+20 delta} over distinct members");
    report.value("rho", sc.rho, "min over entries of the injectivity radius of H_i");
    for (e, r) in family.entries().iter().zip(&sc.rho_per_entry) {
        report.value(&format!("rho.{}", e.name), r.value, "min translation length over nontrivial enumerated elements");
        if let Some(w) = &r.witness {
            report.value(&format!("rho.{}.witness", e.name), w.clone(), "element realizing the minimum");
        }
    }
    let flagged = |f: &dyn Fn(&crate::group::InjectivityRadius) -> bool| -> Vec<String> {
        family.entries().iter().zip(&sc.rho_per_entry).filter(|(_, r)| f(r)).map(|(e, _)| e.name.clone()).collect()
    };
    let boundary = flagged(&|r| r.boundary);
    if !boundary.is_empty() {
        report.value("rho.boundary_entries", boundary.join(","), "entries whose minimum is realized at the ball boundary");
    }
    let truncated = flagged(&|r| r.truncated);
    if !truncated.is_empty() {
        report.value("rho.truncated_entries", truncated.join(","), "entries whose enumeration hit the element limit");
    }
    let ratio_audit = |report: &mut ReportDocument, key: &str, ratio: Option<f64>, bound: f64, formula: &str| match ratio {
        Some(v) => {
            report.audit_with(key, v, Relation::AtMost, bound, v <= bound, formula);
        }
        None => report.audit_with(key, f64::NAN, Relation::AtMost, bound, false, formula),
    };
    ratio_audit(report, "delta_ratio", sc.delta_ratio, p.delta0, "delta/rho <= delta0");
    ratio_audit(report, "Delta_ratio", sc.piece_ratio, p.big_delta0, "Delta/rho <= Delta0");
    for (e, s) in family.entries().iter().zip(&sc.strongly_quasiconvex) {
        report.value(&format!("strongly_qc.{}", e.name), s.holds, "geodesics between members stay in the cylinder");
    }
    report.value("verdict", if sc.pass { "pass" } else { "fail" }, "both ratio bounds and strong quasi-convexity");
    if let Some(l) = sc.rescale {
        report.value("rescale", l, "2 pi sinh r0 / rho");
    }
    for (e, &(v, ok)) in family.entries().iter().zip(&sc.first_theorem) {
        report.audit_with(
            &format!("injectivity.{}", e.name),
            v,
            Relation::AtLeast,
            sc.first_theorem_bound,
            ok,
            "rescaled injectivity radius of H_i on Y_i > 2 pi sinh r0 (strict)",
        );
    }
    for ld in &sc.local {
        report.value(&format!("local.{}.size", ld.center), ld.size, "points in the ball of radius r0/9");
        report.audit(
            &format!("local.{}", ld.center),
            ld.delta,
            Relation::AtMost,
            sc.local_target,
            "four-point delta of the r0/9 ball <= ln 3 + epsilon",
        );
    }
    let (supplied, inferred, unresolved) = family.source_counts();
    report.value("index_action.supplied", supplied, "index images declared by the input");
    report.value("index_action.inferred", inferred, "index images inferred from subspace images");
    report.value("index_action.unresolved", unresolved, "index images left open on a partial action");
    report.value("conjugations.checked", family.conjugations_checked, "g H_i g^-1 matched in H_{g i}");
    report.value("conjugations.unverified", family.conjugations_unverified, "conjugates with empty domain");
    report.note(format!("group elements enumerated within enumeration cap {}", p.cap));
    if p.delta0 == ScParams::DEMO_DELTA0 && p.big_delta0 == ScParams::DEMO_BIG_DELTA0 {
        report.note("thresholds are the demo profile: illustrative, not derived");
    }
    report.note("Delta over translates not present in the finite model is unverified");
    report.note(TIE_BREAK);
    for n in &sc.notes {
        report.note(n.clone());
    }
    radius_note(report, p.r0, p.epsilon);
    Ok(())
}

fn demo_params() -> Params {
    Params {
        r0: Some(1.0),
        delta0: Some(ScParams::DEMO_DELTA0),
        big_delta0: Some(ScParams::DEMO_BIG_DELTA0),
        epsilon: Some(0.1),
        cap: Some(DEFAULT_CAP),
        radii: None,
    }
}

fn graph_decl(graph: &crate::metric::WeightedGraph) -> SpaceDecl {
    SpaceDecl::Graph(graph.edges().to_vec())
}

/// Builds a ready-to-run workspace document.
pub fn demo(kind: &DemoKind) -> Result<WorkspaceDocument> {
    match kind {
        DemoKind::Circle { n, r0 } => {
            if *n < 3 {
                return Err(Error::InvalidParameter(format!("circle demo needs at least 3 points, got {n}")));
            }
            let g = generate::circle(*n, *r0)?;
            Ok(WorkspaceDocument {
                points: *n,
                space: graph_decl(&g),
                subspaces: Vec::new(),
                generators: Vec::new(),
                rotations: Vec::new(),
                params: Params { r0: Some(*r0), ..Params::default() },
            })
        }
        DemoKind::TreeFamily { seed, sizes, filler } => {
            let (g, family) = generate::tree_family(*seed, sizes, *filler)?;
            let subspaces: Vec<(String, Vec<usize>)> =
                family.iter().enumerate().map(|(i, y)| (format!("Y{i}"), y.members().to_vec())).collect();
            let rotations = (0..family.len())
                .map(|i| RotationDecl {
                    index: i,
                    subspace: format!("Y{i}"),
                    subgroup: vec!["1".into()],
                    image_under: Vec::new(),
                })
                .collect();
            Ok(WorkspaceDocument {
                points: g.len(),
                space: graph_decl(&g),
                subspaces,
                generators: Vec::new(),
                rotations,
                params: demo_params(),
            })
        }
        DemoKind::FreeGroupBall { radius, relator } => {
            if *radius == 0 {
                return Err(Error::InvalidParameter("ball radius must be positive".into()));
            }
            let w = generate::parse_relator(relator)?;
            let fam = AxisFamily::new(*radius, &w)?;
            let subspaces: Vec<(String, Vec<usize>)> =
                fam.translates.iter().enumerate().map(|(i, (_, m, _))| (format!("T{i}"), m.clone())).collect();
            let names = ["a", "b"];
            let rotations = fam
                .translates
                .iter()
                .enumerate()
                .map(|(i, (_, _, h))| RotationDecl {
                    index: i,
                    subspace: format!("T{i}"),
                    subgroup: vec![generate::word_text(h)],
                    image_under: fam.images[i].iter().map(|&(g, j)| (names[g].to_string(), j)).collect(),
                })
                .collect();
            let generators = fam
                .ball
                .generators
                .iter()
                .map(|(name, images)| {
                    (name.clone(), images.iter().map(|&x| (x != usize::MAX).then_some(x)).collect())
                })
                .collect();
            Ok(WorkspaceDocument {
                points: fam.ball.len(),
                space: graph_decl(&fam.ball.graph),
                subspaces,
                generators,
                rotations,
                params: demo_params(),
            })
        }
    }
}
