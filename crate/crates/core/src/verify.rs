//! Exact verification of the hemisystem: line intersections, perp counts,
//! the character spectrum of `D`, strong regularity of `Cay(F_{q^6}, D)` and
//! invariance under `x -> gamma^{4N} x` and `x -> x^{q^2}`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::charsum;
use crate::conic::{check_conic_char_values, ConicData};
use crate::construct::{build_point_set, HemisystemDescriptor, PointSet};
use crate::error::{Error, Result};
use crate::field::{FElem, FieldCtx};
use crate::geometry::{perp_contains, Geometry, LineSet, ProjPoint};

type Histogram = BTreeMap<i64, u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Lines,
    Perp,
    Chars,
    Srg,
    Group,
    Conic,
    Gauss,
}

impl CheckKind {
    pub const ALL: [CheckKind; 7] = [
        CheckKind::Lines,
        CheckKind::Perp,
        CheckKind::Chars,
        CheckKind::Srg,
        CheckKind::Group,
        CheckKind::Conic,
        CheckKind::Gauss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Lines => "lines",
            CheckKind::Perp => "perp",
            CheckKind::Chars => "chars",
            CheckKind::Srg => "srg",
            CheckKind::Group => "group",
            CheckKind::Conic => "conic",
            CheckKind::Gauss => "gauss",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| format!("unknown check '{s}'"))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub kind: CheckKind,
    pub pass: bool,
    /// Summary on success, first violation on failure.
    pub detail: String,
    pub data: Value,
    pub elapsed_ms: f64,
}

impl CheckReport {
    fn new(kind: CheckKind, pass: bool, detail: String, data: Value) -> Self {
        CheckReport {
            kind,
            pass,
            detail,
            data,
            elapsed_ms: 0.0,
        }
    }

    /// `Err(VerificationFailure)` for a failed check.
    pub fn ensure(&self) -> Result<()> {
        if self.pass {
            Ok(())
        } else {
            Err(Error::failure(self.kind.name(), self.detail.clone()))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub q: u64,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
}

impl VerificationReport {
    pub fn get(&self, kind: CheckKind) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.kind == kind)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Vertex pairs sampled when the full common-neighbour count is too big.
    pub sample_pairs: usize,
    /// Largest `q^6` for which every pair of the Cayley graph is counted.
    pub full_srg_max: u64,
    /// Random characters per field for the conjugation and Galois checks.
    pub gauss_samples: (usize, usize),
    /// Relative tolerance of the Gauss-sum identities.
    pub rel_tolerance: f64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            sample_pairs: 10_000,
            full_srg_max: 729,
            gauss_samples: (50, 20),
            rel_tolerance: charsum::REL_TOLERANCE,
            seed: 0x5eed,
        }
    }
}

fn hist<I: IntoIterator<Item = i64>>(values: I) -> Histogram {
    let mut h = Histogram::new();
    for v in values {
        *h.entry(v).or_default() += 1;
    }
    h
}

fn line_counts(m: &PointSet, lines: &LineSet) -> Vec<usize> {
    lines
        .par_iter()
        .map(|l| l.iter().filter(|&&c| m.contains(ProjPoint(c))).count())
        .collect()
}

/// Every line must meet `m` in exactly `expected` points. The complement of
/// `m` inside `quadric` is checked too: it is an ovoid with the same parameter.
pub fn check_line_intersections(
    m: &PointSet,
    quadric: &[ProjPoint],
    lines: &LineSet,
    expected: usize,
) -> CheckReport {
    let counts = line_counts(m, lines);
    let first_bad = counts.iter().position(|&c| c != expected);
    let complement = m.complement_in(quadric);
    let width = lines.width();
    let comp_ok = counts.iter().all(|&c| width - c == expected)
        && complement.len() == quadric.len() - m.len();
    let detail = match first_bad {
        Some(i) => format!(
            "line {:?} meets the set in {} points, expected {expected}",
            lines.get(i),
            counts[i]
        ),
        None if !comp_ok => "complement is not an ovoid".to_string(),
        None => format!(
            "all {} lines meet the set in {expected} points",
            lines.len()
        ),
    };
    let histogram = hist(counts.iter().map(|&c| c as i64));
    CheckReport::new(
        CheckKind::Lines,
        first_bad.is_none() && comp_ok,
        detail,
        json!({
            "lines": lines.len(),
            "expected": expected,
            "histogram": histogram,
            "complement_pass": comp_ok,
        }),
    )
}

fn perp_count(ctx: &FieldCtx, p: ProjPoint, m: &[ProjPoint]) -> i64 {
    m.iter().filter(|&&x| perp_contains(ctx, p, x)).count() as i64
}

/// `|P^perp ∩ M|` over every point of the quadric, split by `P ∈ M`, and over
/// all of PG(5,q) by residue class mod 4N (the count is constant on classes
/// because `gamma^{4N}` stabilises `M`).
pub fn check_perp_counts(
    ctx: &FieldCtx,
    desc: &HemisystemDescriptor,
    m: &PointSet,
    quadric: &[ProjPoint],
) -> CheckReport {
    let q = ctx.q() as i64;
    let mm = desc.m() as i64;
    let on_m = (mm - 1) * (q * q + 1) + 1;
    let off_m = mm * (q * q + 1);
    let m_pts = m.to_vec();

    let quadric_counts: Vec<(bool, i64)> = quadric
        .par_iter()
        .map(|&p| (m.contains(p), perp_count(ctx, p, &m_pts)))
        .collect();
    let in_hist = hist(quadric_counts.iter().filter(|c| c.0).map(|c| c.1));
    let out_hist = hist(quadric_counts.iter().filter(|c| !c.0).map(|c| c.1));
    let bad = quadric
        .iter()
        .zip(&quadric_counts)
        .find(|(_, &(inside, c))| c != if inside { on_m } else { off_m });

    let modulus = desc.modulus();
    let weight = ctx.params().proj_points() / modulus as u64;
    let singular: HashSet<u32> = quadric.iter().map(|p| p.0 % modulus).collect();
    let class_counts: Vec<i64> = (0..modulus)
        .into_par_iter()
        .map(|r| perp_count(ctx, ProjPoint(r), &m_pts))
        .collect();
    let mut full = [Histogram::new(), Histogram::new(), Histogram::new()];
    let mut full_ok = true;
    for (r, &c) in class_counts.iter().enumerate() {
        let r = r as u32;
        let slot = if m.contains(ProjPoint(r)) {
            full_ok &= c == on_m;
            0
        } else if singular.contains(&r) {
            full_ok &= c == off_m;
            1
        } else {
            full_ok &= c == off_m;
            2
        };
        *full[slot].entry(c).or_default() += weight;
    }

    let detail = match bad {
        Some((p, &(inside, c))) => format!(
            "|P^perp ∩ M| = {c} at P = {} ({} M), expected {}",
            p.0,
            if inside { "in" } else { "not in" },
            if inside { on_m } else { off_m }
        ),
        None if !full_ok => "full-space perp counts off the predicted values".into(),
        None => format!("perp counts {on_m} on M and {off_m} off M"),
    };
    CheckReport::new(
        CheckKind::Perp,
        bad.is_none() && full_ok,
        detail,
        json!({
            "expected": {"in_m": on_m, "off_m": off_m},
            "quadric": {"in_m": in_hist, "off_m": out_hist},
            "full_space": {
                "in_m": full[0],
                "quadric_off_m": full[1],
                "off_quadric": full[2],
            },
        }),
    )
}

/// Exact values of `psi(gamma^b D) = n_0(b) - n_1(b)` for every `b mod 4N`,
/// where `n_t(b)` counts `x ∈ D` with `Tr_{q^6/p}(gamma^b x) = t`.
pub fn character_values(ctx: &FieldCtx, desc: &HemisystemDescriptor) -> Result<Vec<i64>> {
    let d = desc.d_exponents(ctx);
    let order = ctx.params().order() as u32;
    let p = ctx.p() as usize;
    (0..desc.modulus())
        .into_par_iter()
        .map(|b| {
            let mut counts = vec![0u64; p];
            for &e in &d {
                let s = b + e;
                let idx = if s >= order { s - order } else { s };
                counts[ctx.abs_trace_exp(idx) as usize] += 1;
            }
            if counts[1..].iter().any(|&c| c != counts[1]) {
                return Err(Error::NonIntegerCharacterValue { class: b, counts });
            }
            Ok(counts[0] as i64 - counts[1] as i64)
        })
        .collect()
}

/// Two-valued spectrum: `-q^3 + m(q-1)` exactly on `J`, `m(q-1)` elsewhere,
/// cross-checked against `q |P^perp ∩ M| - |M|` at `P = <gamma^{b q^3}>`.
pub fn check_character_spectrum(
    ctx: &FieldCtx,
    desc: &HemisystemDescriptor,
    m: &PointSet,
) -> Result<CheckReport> {
    let params = ctx.params();
    let q = params.q as i64;
    let r_val = desc.m() as i64 * (q - 1);
    let s_val = r_val - params.q3 as i64;
    let values = character_values(ctx, desc)?;
    let m_pts = m.to_vec();
    let m_len = m_pts.len() as i64;

    let mut first_bad = None;
    let mut cross_bad = None;
    for (b, &v) in values.iter().enumerate() {
        let b = b as u64;
        let dual = desc.j.contains_reduced(b as u32);
        let expected = if dual { s_val } else { r_val };
        if v != expected && first_bad.is_none() {
            first_bad = Some((b, v, expected));
        }
        let point = ProjPoint((b * params.q3 % params.proj_points()) as u32);
        let via_perp = q * perp_count(ctx, point, &m_pts) - m_len;
        if via_perp != v && cross_bad.is_none() {
            cross_bad = Some((b, v, via_perp));
        }
    }
    let on_j = values
        .iter()
        .enumerate()
        .filter(|(b, _)| desc.j.contains_reduced(*b as u32))
        .map(|(_, &v)| v);
    let j_values: Vec<i64> = on_j
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let detail = match (first_bad, cross_bad) {
        (Some((b, v, e)), _) => format!("class {b}: value {v}, expected {e}"),
        (None, Some((b, v, w))) => {
            format!("class {b}: value {v} but perp counts give {w}")
        }
        (None, None) => format!("values {{{s_val}, {r_val}}} with {s_val} exactly on J"),
    };
    Ok(CheckReport::new(
        CheckKind::Chars,
        first_bad.is_none() && cross_bad.is_none(),
        detail,
        json!({
            "expected": [s_val, r_val],
            "histogram": hist(values.iter().copied()),
            "values_on_j": j_values,
            "classes": values.len(),
            "cross_validated": cross_bad.is_none(),
        }),
    ))
}

/// Predicted `(v, k, lambda, mu)` from `|D|` and the two character values.
pub fn predicted_srg(desc: &HemisystemDescriptor) -> (i64, i64, i64, i64) {
    let q = desc.q as i64;
    let v = q.pow(6);
    let k = desc.expected_sizes().d as i64;
    let r = desc.m() as i64 * (q - 1);
    let s = r - q.pow(3);
    (v, k, k + r + s + r * s, k + r * s)
}

fn common_neighbours(ctx: &FieldCtx, desc: &HemisystemDescriptor, d: &[u32], z: FElem) -> i64 {
    d.iter()
        .filter(|&&e| {
            let w = ctx.sub(FElem::from_exp(e), z);
            w.exp().is_some_and(|x| desc.contains_exp(x as u64))
        })
        .count() as i64
}

/// Strong regularity of `Cay(F_{q^6}, D)`: every pair of vertices when
/// `q^6 <= full_srg_max`, otherwise sampled pairs, half of them adjacent.
pub fn check_srg(ctx: &FieldCtx, desc: &HemisystemDescriptor, opts: &VerifyOptions) -> CheckReport {
    let (v, k, lambda, mu) = predicted_srg(desc);
    let d = desc.d_exponents(ctx);
    let identity_ok = mu * (v - k - 1) == k * (k - lambda - 1);
    let mut data = json!({
        "predicted": {"v": v, "k": k, "lambda": lambda, "mu": mu},
        "parameter_identity": identity_ok,
    });
    let (pass, detail) = if v as u64 <= opts.full_srg_max {
        full_srg(ctx, &d, (v, k, lambda, mu), &mut data)
    } else {
        sampled_srg(ctx, desc, &d, (lambda, mu), opts, &mut data)
    };
    CheckReport::new(
        CheckKind::Srg,
        pass && identity_ok && d.len() as i64 == k,
        detail,
        data,
    )
}

fn full_srg(
    ctx: &FieldCtx,
    d: &[u32],
    (v, k, lambda, mu): (i64, i64, i64, i64),
    data: &mut Value,
) -> (bool, String) {
    let vn = v as usize;
    let adj: Vec<FixedBitSet> = (0..vn)
        .into_par_iter()
        .map(|x| {
            let mut row = FixedBitSet::with_capacity(vn);
            let xe = ctx.from_vector(x as u32);
            for &e in d {
                row.insert(ctx.to_vector(ctx.add(xe, FElem::from_exp(e))) as usize);
            }
            row
        })
        .collect();
    let edges: usize = adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2;
    let symmetric = (0..vn).all(|x| adj[x].ones().all(|y| adj[y].contains(x)));
    let regular = adj.iter().all(|r| r.count_ones(..) as i64 == k);
    let pairs: Vec<(bool, i64)> = (0..vn)
        .into_par_iter()
        .flat_map_iter(|x| {
            let adj = &adj;
            (x + 1..vn).map(move |y| {
                let common = adj[x].intersection(&adj[y]).count() as i64;
                (adj[x].contains(y), common)
            })
        })
        .collect();
    let lambda_hist = hist(pairs.iter().filter(|p| p.0).map(|p| p.1));
    let mu_hist = hist(pairs.iter().filter(|p| !p.0).map(|p| p.1));
    let ok_l = lambda_hist.keys().all(|&x| x == lambda);
    let ok_m = mu_hist.keys().all(|&x| x == mu);
    data["method"] = json!("full");
    data["edges"] = json!(edges);
    data["observed"] = json!({"lambda": lambda_hist, "mu": mu_hist});
    let pass = symmetric && regular && ok_l && ok_m && edges as i64 == v * k / 2;
    let detail = if pass {
        format!("SRG({v}, {k}, {lambda}, {mu}) with {edges} edges")
    } else if !symmetric {
        "graph is not undirected".into()
    } else if !regular {
        "graph is not regular".into()
    } else {
        format!("common neighbours: adjacent {lambda_hist:?}, non-adjacent {mu_hist:?}")
    };
    (pass, detail)
}

fn sampled_srg(
    ctx: &FieldCtx,
    desc: &HemisystemDescriptor,
    d: &[u32],
    (lambda, mu): (i64, i64),
    opts: &VerifyOptions,
    data: &mut Value,
) -> (bool, String) {
    let order = ctx.params().order() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut diffs = Vec::with_capacity(opts.sample_pairs);
    for i in 0..opts.sample_pairs {
        let z = if i % 2 == 0 {
            *d.choose(&mut rng).expect("D is nonempty")
        } else {
            loop {
                let e = rng.gen_range(0..order);
                if !desc.contains_exp(e as u64) {
                    break e;
                }
            }
        };
        diffs.push(z);
    }
    let results: Vec<(u32, bool, i64)> = diffs
        .par_iter()
        .map(|&z| {
            let adjacent = desc.contains_exp(z as u64);
            (
                z,
                adjacent,
                common_neighbours(ctx, desc, d, FElem::from_exp(z)),
            )
        })
        .collect();
    let lambda_hist = hist(results.iter().filter(|r| r.1).map(|r| r.2));
    let mu_hist = hist(results.iter().filter(|r| !r.1).map(|r| r.2));
    let bad = results
        .iter()
        .find(|r| r.2 != if r.1 { lambda } else { mu });
    data["method"] = json!("sampled");
    data["pairs"] = json!(opts.sample_pairs);
    data["seed"] = json!(opts.seed);
    data["observed"] = json!({"lambda": lambda_hist, "mu": mu_hist});
    match bad {
        Some(&(z, adj, c)) => (
            false,
            format!(
                "pair with difference gamma^{z} ({}) has {c} common neighbours",
                if adj { "adjacent" } else { "non-adjacent" }
            ),
        ),
        None => (
            true,
            format!(
                "{} sampled pairs match lambda = {lambda}, mu = {mu}",
                opts.sample_pairs
            ),
        ),
    }
}

/// Affine maps `c -> a c + t (mod P)` generated by the two generators.
fn generated_group(proj: u64, generators: &[(u64, u64)]) -> usize {
    let mut seen: HashSet<(u64, u64)> = HashSet::new();
    let mut stack = vec![(1u64, 0u64)];
    seen.insert((1, 0));
    while let Some((a, t)) = stack.pop() {
        for &(ga, gt) in generators {
            let next = (
                (ga as u128 * a as u128 % proj as u128) as u64,
                ((ga as u128 * t as u128 + gt as u128) % proj as u128) as u64,
            );
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    seen.len()
}

/// `gamma^{4N} D = D`, `q^2 I = I`, both generators stabilise `M`, and the
/// group they generate on PG(5,q) has order `3 (q^3 + 1) / 4`.
pub fn check_group_invariance(
    ctx: &FieldCtx,
    desc: &HemisystemDescriptor,
    m: &PointSet,
    seed: u64,
) -> CheckReport {
    let params = ctx.params();
    let modulus = desc.modulus() as u64;
    let order = params.order();
    let proj = params.proj_points();
    let q2 = params.q * params.q;

    let structural = order.is_multiple_of(modulus);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampled = (0..1000).all(|_| {
        let e = rng.gen_range(0..order);
        desc.contains_exp(e) == desc.contains_exp((e + modulus) % order)
    });
    let translation_ok = structural && sampled;
    let frobenius_ok = desc.i.scaled(q2 as i64) == desc.i;
    let gens = [(1u64, modulus % proj), (q2 % proj, 0u64)];
    let on_m = gens.iter().map(|&(a, t)| {
        m.iter()
            .all(|c| m.contains(ProjPoint(((a * c.0 as u64 + t) % proj) as u32)))
    });
    let m_stable: Vec<bool> = on_m.collect();

    let group_order = generated_group(proj, &gens);
    let expected_order = 3 * (params.q3 as usize + 1) / 4;

    // orbits of the group on M
    let mut visited = FixedBitSet::with_capacity(proj as usize);
    let mut orbit_sizes = Vec::new();
    for start in m.iter() {
        if visited.contains(start.0 as usize) {
            continue;
        }
        let mut size = 0u64;
        let mut stack = vec![start.0 as u64];
        visited.insert(start.0 as usize);
        while let Some(c) = stack.pop() {
            size += 1;
            for &(a, t) in &gens {
                let next = (a * c + t) % proj;
                if !visited.put(next as usize) {
                    stack.push(next);
                }
            }
        }
        orbit_sizes.push(size as i64);
    }
    let orbits = hist(orbit_sizes);

    let pass = translation_ok
        && frobenius_ok
        && m_stable.iter().all(|&b| b)
        && group_order == expected_order;
    let detail = if !translation_ok || !m_stable[0] {
        "multiplication by gamma^{4N} does not stabilise D".to_string()
    } else if !frobenius_ok || !m_stable[1] {
        "x -> x^{q^2} does not stabilise D".to_string()
    } else if group_order != expected_order {
        format!("group order {group_order}, expected {expected_order}")
    } else {
        format!("stabilised by a group of order {group_order}")
    };
    CheckReport::new(
        CheckKind::Group,
        pass,
        detail,
        json!({
            "translation": translation_ok,
            "frobenius_q2": frobenius_ok,
            "stabilises_m": m_stable,
            "group_order": group_order,
            "expected_order": expected_order,
            "orbits_on_m": orbits,
        }),
    )
}

pub fn check_conic(ctx: &FieldCtx, conic: &ConicData) -> Result<CheckReport> {
    if let Err(e) = conic.check_invariants() {
        return Ok(CheckReport::new(
            CheckKind::Conic,
            false,
            e.to_string(),
            Value::Null,
        ));
    }
    match check_conic_char_values(ctx, conic) {
        Ok(report) => Ok(CheckReport::new(
            CheckKind::Conic,
            true,
            "all conic invariants and value sets hold".into(),
            serde_json::to_value(report).expect("serializable"),
        )),
        Err(e @ Error::VerificationFailure { .. }) => Ok(CheckReport::new(
            CheckKind::Conic,
            false,
            e.to_string(),
            Value::Null,
        )),
        Err(e) => Err(e),
    }
}

pub fn check_gauss(ctx: &FieldCtx, conic: &ConicData, opts: &VerifyOptions) -> Result<CheckReport> {
    let (conj, galois) = opts.gauss_samples;
    let checks: Vec<_> = charsum::run_all(ctx, &conic.s, conj, galois)?
        .into_iter()
        .map(|c| c.with_relative_tolerance(opts.rel_tolerance))
        .collect();
    let failed = checks.iter().find(|c| !c.pass);
    let max_dev = checks.iter().map(|c| c.abs_deviation).fold(0.0, f64::max);
    let detail = match failed {
        Some(c) => format!(
            "{} ({}) deviates by {:.3e}",
            c.name, c.parameters, c.abs_deviation
        ),
        None => format!(
            "{} identities hold, max deviation {max_dev:.3e}",
            checks.len()
        ),
    };
    Ok(CheckReport::new(
        CheckKind::Gauss,
        failed.is_none(),
        detail,
        json!({"max_deviation": max_dev, "identities": checks}),
    ))
}

/// A uniformly random subset of half of the quadric points.
pub fn random_half_quadric(ctx: &FieldCtx, quadric: &[ProjPoint], seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<u32> = quadric.iter().map(|p| p.0).collect();
    pts.shuffle(&mut rng);
    pts.truncate(quadric.len() / 2);
    PointSet::from_points(ctx.params().proj_points() as usize, pts)
}

/// Runs the selected checks against `m` (the descriptor's point set unless
/// one is supplied).
pub fn run_checks_on(
    ctx: &FieldCtx,
    desc: &HemisystemDescriptor,
    m: Option<PointSet>,
    kinds: &[CheckKind],
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let needs_points = kinds.iter().any(|k| {
        matches!(
            k,
            CheckKind::Lines | CheckKind::Perp | CheckKind::Chars | CheckKind::Group
        )
    });
    let m = match m {
        Some(m) => Some(m),
        None if needs_points => Some(build_point_set(ctx, desc)?),
        None => None,
    };
    let geometry = if kinds.contains(&CheckKind::Lines) {
        Some(Geometry::build(ctx))
    } else if kinds.contains(&CheckKind::Perp) {
        Some(Geometry::points_only(ctx))
    } else {
        None
    };
    let mut checks = Vec::new();
    let mut kinds = kinds.to_vec();
    kinds.sort();
    kinds.dedup();
    for kind in kinds {
        let start = Instant::now();
        let mut report = match kind {
            CheckKind::Lines => {
                let geo = geometry.as_ref().expect("built above");
                let m = m.as_ref().expect("built above");
                check_line_intersections(m, geo.points(), geo.lines(), desc.m() as usize)
            }
            CheckKind::Perp => {
                let geo = geometry.as_ref().expect("built above");
                check_perp_counts(ctx, desc, m.as_ref().expect("built above"), geo.points())
            }
            CheckKind::Chars => {
                check_character_spectrum(ctx, desc, m.as_ref().expect("built above"))?
            }
            CheckKind::Srg => check_srg(ctx, desc, opts),
            CheckKind::Group => {
                check_group_invariance(ctx, desc, m.as_ref().expect("built above"), opts.seed)
            }
            CheckKind::Conic => check_conic(ctx, &desc.conic)?,
            CheckKind::Gauss => check_gauss(ctx, &desc.conic, opts)?,
        };
        report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        checks.push(report);
    }
    Ok(VerificationReport {
        q: desc.q,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

pub fn run_checks(
    ctx: &FieldCtx,
    desc: &HemisystemDescriptor,
    kinds: &[CheckKind],
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    run_checks_on(ctx, desc, None, kinds, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn setup() -> (FieldCtx, HemisystemDescriptor, PointSet, Geometry) {
        let ctx = build_field(3, 1).unwrap();
        let desc = HemisystemDescriptor::construct(&ctx, None).unwrap();
        let m = build_point_set(&ctx, &desc).unwrap();
        let geo = Geometry::build(&ctx);
        (ctx, desc, m, geo)
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("srg".parse::<CheckKind>(), Ok(CheckKind::Srg));
        assert!("bogus".parse::<CheckKind>().is_err());
    }

    #[test]
    fn lines_q3() {
        let (_, _, m, geo) = setup();
        let r = check_line_intersections(&m, geo.points(), geo.lines(), 2);
        assert!(r.pass, "{}", r.detail);
        assert_eq!(r.data["histogram"]["2"], 280);
    }

    #[test]
    fn perp_q3() {
        let (ctx, desc, m, geo) = setup();
        let r = check_perp_counts(&ctx, &desc, &m, geo.points());
        assert!(r.pass, "{}", r.detail);
        assert_eq!(r.data["quadric"]["in_m"]["11"], 56);
        assert_eq!(r.data["quadric"]["off_m"]["20"], 56);
    }

    #[test]
    fn chars_q3() {
        let (ctx, desc, m, _) = setup();
        let values = character_values(&ctx, &desc).unwrap();
        assert_eq!(values.iter().filter(|&&v| v == -23).count(), 8);
        assert_eq!(values.iter().filter(|&&v| v == 4).count(), 44);
        let r = check_character_spectrum(&ctx, &desc, &m).unwrap();
        assert!(r.pass, "{}", r.detail);
    }

    #[test]
    fn srg_q3_full() {
        let (ctx, desc, _, _) = setup();
        assert_eq!(predicted_srg(&desc), (729, 112, 1, 20));
        let r = check_srg(&ctx, &desc, &VerifyOptions::default());
        assert!(r.pass, "{}", r.detail);
        assert_eq!(r.data["edges"], 40824);
    }

    #[test]
    fn srg_q3_sampled_agrees() {
        let (ctx, desc, _, _) = setup();
        let opts = VerifyOptions {
            full_srg_max: 0,
            sample_pairs: 500,
            ..Default::default()
        };
        let r = check_srg(&ctx, &desc, &opts);
        assert!(r.pass, "{}", r.detail);
    }

    #[test]
    fn group_q3() {
        let (ctx, desc, m, _) = setup();
        let r = check_group_invariance(&ctx, &desc, &m, 1);
        assert!(r.pass, "{}", r.detail);
        assert_eq!(r.data["group_order"], 21);
    }

    #[test]
    fn group_order_formula() {
        // q = 7: P = 19608, 4N = 228.
        let gens = [(1u64, 228u64), (49u64, 0u64)];
        assert_eq!(generated_group(19608, &gens), 258);
    }

    #[test]
    fn negative_controls_q3() {
        let (ctx, desc, _, geo) = setup();
        let random = random_half_quadric(&ctx, geo.points(), 7);
        assert_eq!(random.len(), 56);
        let r = check_line_intersections(&random, geo.points(), geo.lines(), 2);
        assert!(!r.pass);
        assert!(r.ensure().is_err());

        let tampered = desc.without_residue(desc.i.as_slice()[0]);
        let report = run_checks(
            &ctx,
            &tampered,
            &[CheckKind::Lines, CheckKind::Chars],
            &VerifyOptions::default(),
        )
        .unwrap();
        assert!(!report.pass);
        assert!(!report.get(CheckKind::Lines).unwrap().pass);
        assert!(!report.get(CheckKind::Chars).unwrap().pass);
    }
}
