use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use hemisystem::charsum::{self, IdentityCheck};
use hemisystem::conic::compute_singer_set;
use hemisystem::construct::{build_point_set, PointSet};
use hemisystem::descriptor::Provenance;
use hemisystem::field::{load_or_build, DEFAULT_TABLE_BUDGET};
use hemisystem::verify::{run_checks_on, CheckKind, VerifyOptions};
use hemisystem::{build_field, DescriptorFile, Error, FElem, FieldCtx, HemisystemDescriptor};
use serde_json::{json, Value};

use crate::config::{InvalidInput, RunConfig};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest q whose Cayley graph is exported without `--force`.
const EXPORT_LIMIT_Q: u64 = 3;

pub enum Outcome {
    Pass,
    Fail,
}

/// Output that would exceed a resource limit; maps to exit code 3.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct OverBudget(pub String);

pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<InvalidInput>().is_some() {
        return 2;
    }
    if e.downcast_ref::<OverBudget>().is_some() {
        return 3;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::TableBudgetExceeded { .. } | Error::BudgetExceeded { .. }) => 3,
        Some(
            Error::VerificationFailure { .. }
            | Error::NonIntegerCharacterValue { .. }
            | Error::CollisionDetected(_)
            | Error::ScalarOrbitNotClosed(_),
        ) => 1,
        _ => 2,
    }
}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(InvalidInput(msg.into()))
}

fn require_construction_field(q: u64) -> Result<()> {
    if q % 4 != 3 {
        return Err(invalid(format!("q = {q}: q ≡ 3 (mod 4) required")));
    }
    Ok(())
}

fn load_field(cfg: &RunConfig, p: u64, f: u32) -> Result<FieldCtx> {
    let ctx = match &cfg.cache_dir {
        Some(dir) => load_or_build(dir, p, f, DEFAULT_TABLE_BUDGET)?,
        None => build_field(p, f)?,
    };
    Ok(ctx)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// `{header: {tool_version, timestamp, timings_ms}, body}`; everything that
/// varies between identical runs lives in the header.
fn envelope(body: Value, timings: BTreeMap<String, f64>) -> String {
    let prov = Provenance::now(TOOL_VERSION);
    let doc = json!({
        "header": {
            "tool_version": prov.tool_version,
            "timestamp": prov.timestamp,
            "timings_ms": timings,
        },
        "body": body,
    });
    serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
}

fn descriptor_for(cfg: &RunConfig) -> Result<(FieldCtx, HemisystemDescriptor)> {
    if let Some(path) = &cfg.descriptor {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(|e| invalid(format!("{e:#}")))?;
        let file = DescriptorFile::from_json(&text)?;
        if let (Some(p), Some(f)) = (cfg.p, cfg.f) {
            if (p, f) != (file.p, file.f) {
                return Err(invalid("descriptor field differs from --q / --p --f"));
            }
        }
        require_construction_field(file.q)?;
        let ctx = load_field(cfg, file.p, file.f)?;
        let desc = file.to_descriptor(&ctx)?;
        return Ok((ctx, desc));
    }
    let (p, f) = cfg.field()?;
    require_construction_field(cfg.q()?)?;
    let ctx = load_field(cfg, p, f)?;
    let desc = HemisystemDescriptor::construct(&ctx, cfg.d0)?;
    Ok((ctx, desc))
}

pub fn construct(cfg: &RunConfig) -> Result<Outcome> {
    let (ctx, desc) = descriptor_for(cfg)?;
    desc.check_closure(&ctx)?;
    let m = build_point_set(&ctx, &desc)?;
    let sizes = desc.expected_sizes();
    if m.len() as u64 != sizes.m || desc.d_exponents(&ctx).len() as u64 != sizes.d {
        return Err(Error::VerificationFailure {
            check: "construct".into(),
            detail: format!("|M| = {}, expected {}", m.len(), sizes.m),
        }
        .into());
    }
    let file = DescriptorFile::new(&desc, Provenance::now(TOOL_VERSION));
    let out = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("hemisystem_q{}.json", desc.q)));
    write_text(&out, &file.to_json())?;
    println!(
        "q = {}  N = {}  d0 = {}  |I| = {}  |D| = {}  |M| = {}  -> {}",
        desc.q,
        desc.n,
        desc.conic.d0,
        desc.i.len(),
        sizes.d,
        m.len(),
        out.display()
    );
    Ok(Outcome::Pass)
}

fn read_points(path: &Path, total: usize) -> Result<PointSet> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| invalid(format!("{e:#}")))?;
    let mut pts = Vec::new();
    for tok in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        let c: u32 = tok
            .parse()
            .map_err(|_| invalid(format!("bad point id '{tok}'")))?;
        if c as usize >= total {
            return Err(invalid(format!("point id {c} out of range")));
        }
        pts.push(c);
    }
    Ok(PointSet::from_points(total, pts))
}

pub fn verify(cfg: &RunConfig) -> Result<Outcome> {
    let (ctx, desc) = descriptor_for(cfg)?;
    let kinds = cfg
        .checks
        .clone()
        .unwrap_or_else(|| CheckKind::ALL.to_vec());
    let mut opts = VerifyOptions::default();
    if let Some(s) = cfg.sample {
        opts.sample_pairs = s;
    }
    if let Some(t) = cfg.tolerance {
        opts.rel_tolerance = t;
    }
    let points = match &cfg.points {
        Some(path) => Some(read_points(path, ctx.params().proj_points() as usize)?),
        None => None,
    };
    let report = run_checks_on(&ctx, &desc, points, &kinds, &opts)?;

    let mut timings = BTreeMap::new();
    for c in &report.checks {
        timings.insert(c.kind.to_string(), c.elapsed_ms);
        println!(
            "{}  {:<6} {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.kind,
            c.detail
        );
    }
    let mut body = serde_json::to_value(&report)?;
    for check in body["checks"].as_array_mut().expect("array") {
        check.as_object_mut().expect("object").remove("elapsed_ms");
    }
    body["p"] = json!(desc.p);
    body["f"] = json!(desc.f);
    body["I"] = json!(desc.i.to_vec());
    if let Some(out) = &cfg.out {
        write_text(out, &envelope(body, timings))?;
    }
    Ok(if report.pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

pub fn charsums(cfg: &RunConfig) -> Result<Outcome> {
    let (p, f) = cfg.field()?;
    let q = cfg.q()?;
    if q % 4 != 3 {
        return Err(invalid(format!(
            "q = {q}: the Gauss-sum identities need q ≡ 3 (mod 4)"
        )));
    }
    let ctx = load_field(cfg, p, f)?;
    let singer = compute_singer_set(&ctx);
    let start = std::time::Instant::now();
    let rel = cfg.tolerance.unwrap_or(charsum::REL_TOLERANCE);
    let checks: Vec<IdentityCheck> = charsum::run_all(&ctx, &singer, 50, 20)?
        .into_iter()
        .map(|c| c.with_relative_tolerance(rel))
        .collect();
    let elapsed = start.elapsed().as_secs_f64() * 1e3;

    let mut groups: BTreeMap<&str, (usize, f64, bool)> = BTreeMap::new();
    for c in &checks {
        let g = groups.entry(&c.name).or_insert((0, 0.0, true));
        g.0 += 1;
        g.1 = g.1.max(c.abs_deviation);
        g.2 &= c.pass;
    }
    for (name, (count, dev, pass)) in &groups {
        println!(
            "{}  {name:<30} {count:>4} checks  max deviation {dev:.3e}",
            if *pass { "PASS" } else { "FAIL" }
        );
    }
    let pass = checks.iter().all(|c| c.pass);
    if let Some(out) = &cfg.out {
        let body = json!({
            "q": q,
            "divisors": charsum::odd_divisors_of_n(ctx.params().n),
            "relative_tolerance": rel,
            "pass": pass,
            "identities": checks,
        });
        let timings = BTreeMap::from([("charsums".to_string(), elapsed)]);
        write_text(out, &envelope(body, timings))?;
    }
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

pub fn export_graph(cfg: &RunConfig) -> Result<Outcome> {
    let q = cfg.q()?;
    require_construction_field(q)?;
    if q > EXPORT_LIMIT_Q && !cfg.force {
        return Err(anyhow!(OverBudget(format!(
            "the Cayley graph for q = {q} has {} vertices; pass --force to export it",
            q.pow(6)
        ))));
    }
    let (ctx, desc) = descriptor_for(cfg)?;
    let params = ctx.params();
    let d: Vec<FElem> = desc
        .d_exponents(&ctx)
        .into_iter()
        .map(FElem::from_exp)
        .collect();
    let v = params.q6 as u32;
    let out = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("cayley_q{q}.edges")));
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let mut w = BufWriter::new(
        fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?,
    );
    let poly: Vec<String> = desc.polynomial.iter().map(u32::to_string).collect();
    let index: Vec<String> = desc.i.iter().map(|r| r.to_string()).collect();
    writeln!(
        w,
        "# Cayley graph Cay(F_q^6, D), adjacency x ~ y iff x - y in D"
    )?;
    writeln!(w, "# p = {} f = {} q = {q}", params.p, params.f)?;
    writeln!(w, "# polynomial (low to high) = {}", poly.join(" "))?;
    writeln!(w, "# I (mod {}) = {}", desc.modulus(), index.join(" "))?;
    writeln!(w, "# vertex of x = sum_i c_i gamma^i is sum_i c_i p^i")?;
    writeln!(
        w,
        "# vertices = {v} edges = {}",
        v as u64 * d.len() as u64 / 2
    )?;
    let mut edges = 0u64;
    for u in 0..v {
        let x = ctx.from_vector(u);
        let mut nbrs: Vec<u32> = d
            .iter()
            .map(|&y| ctx.to_vector(ctx.add(x, y)))
            .filter(|&w| w > u)
            .collect();
        nbrs.sort_unstable();
        for w2 in nbrs {
            writeln!(w, "{u} {w2}")?;
            edges += 1;
        }
    }
    w.flush()?;
    println!("{edges} edges on {v} vertices -> {}", out.display());
    Ok(Outcome::Pass)
}

pub fn info(cfg: &RunConfig) -> Result<Outcome> {
    let (p, f) = cfg.field()?;
    let ctx = load_field(cfg, p, f)?;
    let params = ctx.params();
    let q = params.q;
    let mut doc = json!({
        "p": p,
        "f": f,
        "q": q,
        "N": params.n,
        "4N": 4 * params.n,
        "polynomial": ctx.polynomial_full(),
        "field_order": params.q6,
        "projective_points": params.proj_points(),
        "quadric_points": (params.q3 + 1) * (q + 1),
        "construction_supported": params.is_construction_field(),
    });
    if params.is_construction_field() {
        let sizes = hemisystem::construct::Sizes::expected(q);
        doc["sizes"] = json!({"I": sizes.index_set, "D": sizes.d, "M": sizes.m});
        doc["odd_divisors_of_N"] = json!(charsum::odd_divisors_of_n(params.n));
        doc["character_values"] = json!([
            params.m() as i64 * (q as i64 - 1) - params.q3 as i64,
            params.m() as i64 * (q as i64 - 1)
        ]);
    }
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&doc)?);
    Ok(Outcome::Pass)
}
