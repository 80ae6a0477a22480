//! Subcommand bodies. Each returns the text to write and whether a check failed.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use piecewise::curves::{compare_profile_to_curve, ReferenceCurve};
use piecewise::gluing::{beta_extension, build_houghton, pocket_extension, star_extension, HoughtonSpec};
use piecewise::io::{cache_dir, cache_path, decode_cache, encode_cache, sha256_hex, Report};
use piecewise::labelled_graph::{enumerate_ball, validate, BallEnumeration};
use piecewise::profile::{lambda_profile, ProfileTable};
use piecewise::walk::{monte_carlo_return, return_probability, walk_distribution, Measure};
use piecewise::{Error, Group, LabelledGraph, Rational, Result, Scalar};

use crate::registry::{cayley, glued_measure, parse_base, parse_group, perm_measure, rooted, Handle};
use crate::suites::{run_suite, SuiteOptions};

/// Text produced by a command; `failed` marks a validation failure (exit code 2).
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub text: String,
    pub failed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failed: false }
    }
}

#[derive(Serialize)]
struct GraphReport {
    group: String,
    letters: Vec<String>,
    radius: usize,
    volumes: Vec<usize>,
    validation: piecewise::labelled_graph::ValidationReport,
}

fn graph_report(name: String, graph: &LabelledGraph, radius: usize) -> Result<Output> {
    let ball = enumerate_ball(graph, graph.root(), radius)?;
    let validation = validate(graph, &ball);
    let failed = !validation.is_valid();
    let body = GraphReport { group: name, letters: graph.letters().to_vec(), radius, volumes: ball.volumes, validation };
    Ok(Output { text: Report::new("build", body).to_json()?, failed })
}

/// Builds a named group's graph and validates it on the ball around the root.
pub fn build(group: &str, radius: usize) -> Result<Output> {
    let handle = parse_group(group)?;
    graph_report(handle.name(), &handle.graph()?, radius)
}

/// Glues Cayley graphs of named base groups.
pub fn glue(kind: &str, components: &[String], order: u32, radius: usize) -> Result<Output> {
    let bases = components.iter().map(|c| parse_base(c)).collect::<Result<Vec<_>>>()?;
    let single = || -> Result<piecewise::BaseGroup> {
        match bases.as_slice() {
            [b] => Ok(b.clone()),
            _ => Err(Error::InvalidParameter(format!("{kind} gluing takes exactly one component"))),
        }
    };
    let graph = match kind {
        "rooted" => rooted(&bases)?,
        "pocket" => pocket_extension(cayley(single()?)?)?,
        "star" => star_extension(cayley(single()?)?)?,
        "beta" => beta_extension(cayley(single()?)?, order)?,
        "houghton" => build_houghton(&HoughtonSpec::standard(order as usize), None)?,
        other => return Err(Error::InvalidParameter(format!("unknown gluing kind `{other}`"))),
    };
    graph_report(graph.name().to_string(), &graph, radius)
}

fn exact_series<G: Group, S: Scalar>(group: &G, m: &Measure<G::Elem, S>, steps: usize) -> Result<String> {
    Ok(return_probability(group, m, steps / 2)?.0.to_csv())
}

/// Exact return probabilities up to `steps`, or a Monte Carlo estimate at `steps` when `trials` is set.
pub fn walk(group: &str, steps: usize, trials: Option<u64>, seed: Option<u64>, rational: bool) -> Result<Output> {
    let handle = parse_group(group)?;
    if let Some(trials) = trials {
        let seed = seed.ok_or_else(|| Error::InvalidParameter("Monte Carlo walks need --seed".into()))?;
        let est = match &handle {
            Handle::Glued(g) => monte_carlo_return(g, &glued_measure::<f64>(g)?, steps, trials, seed)?,
            _ => {
                let (g, m) = perm_measure::<f64>(&handle)?;
                monte_carlo_return(&g, &m, steps, trials, seed)?
            }
        };
        return Ok(Output::ok(est.to_csv()));
    }
    if steps < 2 {
        return Err(Error::InvalidParameter("exact walks need at least 2 steps".into()));
    }
    let text = match (&handle, rational) {
        (Handle::Glued(g), false) => exact_series(g, &glued_measure::<f64>(g)?, steps)?,
        (Handle::Glued(g), true) => exact_series(g, &glued_measure::<Rational>(g)?, steps)?,
        (_, false) => {
            let (g, m) = perm_measure::<f64>(&handle)?;
            exact_series(&g, &m, steps)?
        }
        (_, true) => {
            let (g, m) = perm_measure::<Rational>(&handle)?;
            exact_series(&g, &m, steps)?
        }
    };
    Ok(Output::ok(text))
}

fn profile_table(group: &str, p: u8, v_max: usize, radius: Option<usize>) -> Result<ProfileTable> {
    let handle = parse_group(group)?;
    let radius = radius.unwrap_or(v_max.saturating_sub(1));
    match &handle {
        Handle::Glued(g) => lambda_profile(g, &glued_measure::<f64>(g)?, radius, v_max, p),
        _ => {
            let (g, m) = perm_measure::<f64>(&handle)?;
            lambda_profile(&g, &m, radius, v_max, p)
        }
    }
}

/// `Λ_p(v)` table as CSV; the ball radius defaults to `v_max − 1`.
pub fn profile(group: &str, p: u8, v_max: usize, radius: Option<usize>) -> Result<Output> {
    Ok(Output::ok(profile_table(group, p, v_max, radius)?.to_csv()))
}

pub fn verify(suite: &str, opts: &SuiteOptions) -> Result<Output> {
    let report = run_suite(suite, opts)?;
    let failed = !report.passed;
    Ok(Output { text: Report::new("verify", report).to_json()?, failed })
}

/// Parses a curve name with its parameter: `power`, `rho`, `bubble-profile`, `bubble-return`
/// take `param`; `ball-volume`, `window`, `half-bubble` take the sequence `a`.
pub fn parse_curve(name: &str, param: Option<&str>, a: &[u64], composite: bool) -> Result<ReferenceCurve> {
    let need = || param.ok_or_else(|| Error::InvalidParameter(format!("curve {name} needs --param")));
    let number = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("bad curve parameter `{s}`")));
    let need_a = || {
        if a.is_empty() {
            Err(Error::InvalidParameter(format!("curve {name} needs --a")))
        } else {
            Ok(a.to_vec())
        }
    };
    let curve = match name {
        "power" => ReferenceCurve::Power { exponent: number(need()?)? },
        "rho" => {
            let p = need()?.to_string();
            p.parse::<piecewise::walk::XiParam>()?;
            ReferenceCurve::Rho { param: p }
        }
        "bubble-profile" => ReferenceCurve::BubbleProfile { kappa: number(need()?)? },
        "bubble-return" => ReferenceCurve::BubbleReturn { kappa: number(need()?)? },
        "ball-volume" => ReferenceCurve::BallVolume { a: need_a()? },
        "window" => ReferenceCurve::Window { a: need_a()? },
        "half-bubble" => ReferenceCurve::HalfBubble { a: need_a()? },
        other => return Err(Error::InvalidParameter(format!("unknown curve `{other}`"))),
    };
    Ok(if composite { ReferenceCurve::Composite { inner: Box::new(curve) } } else { curve })
}

/// CSV `x,value` of a curve at the given points.
pub fn curves(curve: &ReferenceCurve, xs: &[f64]) -> Result<Output> {
    let mut out = String::from("x,value\n");
    for &x in xs {
        out.push_str(&format!("{x},{:.17e}\n", curve.eval(x)?));
    }
    Ok(Output::ok(out))
}

/// JSON fit report of a computed profile table against a curve.
pub fn fit(curve: &ReferenceCurve, group: &str, p: u8, v_max: usize, radius: Option<usize>) -> Result<Output> {
    let table = profile_table(group, p, v_max, radius)?;
    let report = compare_profile_to_curve(&table, curve)?;
    Ok(Output::ok(Report::new("fit", json!({ "group": group, "p": p, "fit": report })).to_json()?))
}

/// Distribution of the walk after `steps` steps, in element encodings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionEntry {
    pub group: String,
    pub steps: usize,
    pub atoms: Vec<(String, f64)>,
    pub defect: f64,
}

fn distribution_entry<G: Group>(group: &G, m: &Measure<G::Elem, f64>, name: &str, steps: usize) -> DistributionEntry {
    let d = walk_distribution(group, m, steps);
    let atoms = d.iter().map(|(e, w)| (group.encode(e), *w)).collect();
    DistributionEntry { group: name.to_string(), steps, atoms, defect: *d.defect() }
}

/// What to store in the cache.
#[derive(Clone, Debug)]
pub enum CacheItem {
    Ball { radius: usize },
    Walk { steps: usize },
    Profile { p: u8, v_max: usize, radius: Option<usize> },
}

impl CacheItem {
    pub fn kind(&self) -> &'static str {
        match self {
            CacheItem::Ball { .. } => "ball",
            CacheItem::Walk { .. } => "walk",
            CacheItem::Profile { .. } => "profile",
        }
    }
}

fn cache_text(group: &str, item: &CacheItem) -> Result<(String, String)> {
    let kind = item.kind();
    match item {
        CacheItem::Ball { radius } => {
            let graph = parse_group(group)?.graph()?;
            let ball = enumerate_ball(&graph, graph.root(), *radius)?;
            Ok((format!("{kind}|{group}|{radius}"), encode_cache(kind, &ball)?))
        }
        CacheItem::Walk { steps } => {
            let handle = parse_group(group)?;
            let entry = match &handle {
                Handle::Glued(g) => distribution_entry(g, &glued_measure::<f64>(g)?, group, *steps),
                _ => {
                    let (g, m) = perm_measure::<f64>(&handle)?;
                    distribution_entry(&g, &m, group, *steps)
                }
            };
            Ok((format!("{kind}|{group}|{steps}"), encode_cache(kind, &entry)?))
        }
        CacheItem::Profile { p, v_max, radius } => {
            let table = profile_table(group, *p, *v_max, *radius)?;
            Ok((format!("{kind}|{group}|{p}|{v_max}|{radius:?}"), encode_cache(kind, &table)?))
        }
    }
}

/// Computes an item and writes it to the cache directory (`PIECEWISE_CACHE_DIR`).
pub fn cache_write(group: &str, item: &CacheItem) -> Result<Output> {
    let (key, text) = cache_text(group, item)?;
    let dir = cache_dir();
    let path = cache_path(&dir, item.kind(), &key);
    std::fs::create_dir_all(&dir)?;
    std::fs::write(&path, &text)?;
    let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let body = json!({ "kind": item.kind(), "key": key, "file": file, "sha256": sha256_hex(text.as_bytes()) });
    Ok(Output::ok(Report::new("cache-write", body).to_json()?))
}

fn roundtrip<T: Serialize + for<'de> Deserialize<'de>>(path: &Path, kind: &str) -> Result<bool> {
    let text = std::fs::read_to_string(path)?;
    let payload: T = decode_cache(kind, &text)?;
    Ok(encode_cache(kind, &payload)? == text)
}

/// Checks a cache file: header, checksum, and that re-encoding the payload reproduces it.
pub fn cache_check(kind: &str, path: &Path) -> Result<Output> {
    let stable = match kind {
        "ball" => roundtrip::<BallEnumeration>(path, kind)?,
        "walk" => roundtrip::<DistributionEntry>(path, kind)?,
        "profile" => roundtrip::<ProfileTable>(path, kind)?,
        other => return Err(Error::InvalidParameter(format!("unknown cache kind `{other}`"))),
    };
    let text = std::fs::read_to_string(path)?;
    let body = json!({ "kind": kind, "checksum_ok": true, "reencode_identical": stable, "sha256": sha256_hex(text.as_bytes()) });
    Ok(Output { text: Report::new("cache-check", body).to_json()?, failed: !stable })
}
