//! The conic `Tr_{q^3/q}(x^2) = 0` of PG(2,q), modelled on F_{q^3} with
//! points `<omega^i>`, `i mod N`, and the partition of the Singer line
//! `S = {i : Tr_{q^3/q}(omega^i) = 0}` into `S_1`, `S_2` that the hemisystem
//! construction consumes.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::charsum::{gauss_sum, MultChar};
use crate::error::{Error, Result};
use crate::field::{FElem, FieldCtx, Level};
use crate::residues::{mod_inverse, ResidueSet};

/// Absolute tolerance for the four-valued complex spectrum.
pub const CONIC_COMPLEX_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicData {
    pub q: u64,
    pub n: u32,
    /// Singer difference set, the line `L_0`.
    pub s: ResidueSet,
    /// Points of the conic.
    pub i_q: ResidueSet,
    /// `Tr(omega^{2i})` a nonzero square of F_q.
    pub i_s: ResidueSet,
    /// `Tr(omega^{2i})` a nonsquare of F_q.
    pub i_n: ResidueSet,
    pub d0: u32,
    /// Subset of `Z_{2N}`.
    pub x: ResidueSet,
    pub s1_pp: ResidueSet,
    pub s2_pp: ResidueSet,
    pub s1_p: ResidueSet,
    pub s2_p: ResidueSet,
    pub s1: ResidueSet,
    pub s2: ResidueSet,
    /// +1 for q ≡ 1 (mod 4), -1 for q ≡ 3 (mod 4).
    pub epsilon: i8,
}

/// The even/odd split of `X` and its images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub s1_pp: ResidueSet,
    pub s2_pp: ResidueSet,
    pub s1_p: ResidueSet,
    pub s2_p: ResidueSet,
    pub s1: ResidueSet,
    pub s2: ResidueSet,
}

fn n_of(ctx: &FieldCtx) -> u32 {
    ctx.params().n as u32
}

fn cubic_trace(ctx: &FieldCtx, x: FElem) -> FElem {
    ctx.trace(x, Level::Cubic, Level::Base)
        .expect("powers of omega lie in F_{q^3}")
}

/// True iff the nonzero element `t` of F_q is a square there.
fn is_base_square(ctx: &FieldCtx, t: FElem) -> bool {
    ctx.level_log(t, Level::Base)
        .expect("nonzero element of F_q")
        .is_multiple_of(2)
}

/// `S = {i mod N : Tr_{q^3/q}(omega^i) = 0}`.
pub fn compute_singer_set(ctx: &FieldCtx) -> ResidueSet {
    let n = n_of(ctx);
    ResidueSet::new(
        n,
        (0..n as i64).filter(|&i| cubic_trace(ctx, ctx.omega_pow(i)).is_zero()),
    )
}

/// `(I_Q, I_s, I_n)`, classifying `i mod N` by `Tr_{q^3/q}(omega^{2i})`.
pub fn compute_conic_indices(ctx: &FieldCtx) -> (ResidueSet, ResidueSet, ResidueSet) {
    let n = n_of(ctx);
    let mut zero = Vec::new();
    let mut square = Vec::new();
    let mut nonsquare = Vec::new();
    for i in 0..n as i64 {
        let t = cubic_trace(ctx, ctx.omega_pow(2 * i));
        if t.is_zero() {
            zero.push(i);
        } else if is_base_square(ctx, t) {
            square.push(i);
        } else {
            nonsquare.push(i);
        }
    }
    (
        ResidueSet::new(n, zero),
        ResidueSet::new(n, square),
        ResidueSet::new(n, nonsquare),
    )
}

/// `X = log_omega` of `{omega^{d_i} Tr(omega^{d0 + d_i}) : d_i != d0} ∪ {2 omega^{d0}}`, mod 2N.
pub fn compute_x(ctx: &FieldCtx, i_q: &ResidueSet, d0: u32) -> Result<ResidueSet> {
    if !i_q.contains(d0 as i64) || d0 >= i_q.modulus() {
        return Err(Error::InvalidD0 { d0 });
    }
    let two_n = 2 * i_q.modulus();
    let q3p1 = ctx.params().q3 + 1;
    let mut logs = Vec::with_capacity(i_q.len());
    for di in i_q.iter() {
        let elem = if di == d0 {
            ctx.mul(ctx.from_int(2), ctx.omega_pow(d0 as i64))
        } else {
            let t = cubic_trace(ctx, ctx.omega_pow(d0 as i64 + di as i64));
            ctx.mul(ctx.omega_pow(di as i64), t)
        };
        let e = elem.exp().ok_or_else(|| {
            Error::failure("conic", format!("element of X for d_i = {di} vanishes"))
        })?;
        logs.push((e as u64 / q3p1) as i64);
    }
    let x = ResidueSet::new(two_n, logs);
    if x.len() != i_q.len() {
        return Err(Error::failure("conic", "X has repeated residues"));
    }
    Ok(x)
}

/// Splits `X = 2 S_1'' ∪ (2 S_2'' + N)` and forms `S_i' = 2 S_i''`, `S_i = 2 S_i'`.
pub fn partition_from_x(x: &ResidueSet) -> Partition {
    let two_n = x.modulus();
    let n = two_n / 2;
    assert_eq!(n % 2, 1, "N is odd");
    let s1_pp = ResidueSet::new(n, x.iter().filter(|v| v % 2 == 0).map(|v| v as i64 / 2));
    let s2_pp = ResidueSet::new(
        n,
        x.iter()
            .filter(|v| v % 2 == 1)
            .map(|v| (v as i64 - n as i64) / 2),
    );
    let s1_p = s1_pp.scaled(2);
    let s2_p = s2_pp.scaled(2);
    let s1 = s1_p.scaled(2);
    let s2 = s2_p.scaled(2);
    Partition {
        s1_pp,
        s2_pp,
        s1_p,
        s2_p,
        s1,
        s2,
    }
}

impl ConicData {
    /// Derives every set from the field. `d0` defaults to the smallest element of `I_Q`.
    pub fn build(ctx: &FieldCtx, d0: Option<u32>) -> Result<ConicData> {
        let q = ctx.q();
        let s = compute_singer_set(ctx);
        let (i_q, i_s, i_n) = compute_conic_indices(ctx);
        let d0 = d0.unwrap_or_else(|| i_q.as_slice()[0]);
        let x = compute_x(ctx, &i_q, d0)?;
        let Partition {
            s1_pp,
            s2_pp,
            s1_p,
            s2_p,
            s1,
            s2,
        } = partition_from_x(&x);
        Ok(ConicData {
            q,
            n: n_of(ctx),
            s,
            i_q,
            i_s,
            i_n,
            d0,
            x,
            s1_pp,
            s2_pp,
            s1_p,
            s2_p,
            s1,
            s2,
            epsilon: if q % 4 == 1 { 1 } else { -1 },
        })
    }

    /// Checks every structural invariant of the sets; returns the first violation.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        let q = self.q as i64;
        let fail = |what: &str| Err(Error::failure("conic", what.to_string()));
        let q1 = self.q as usize + 1;
        if self.s.len() != q1 || self.i_q.len() != q1 || self.x.len() != q1 {
            return fail("|S|, |I_Q|, |X| must all equal q + 1");
        }
        if !self.i_q.is_disjoint(&self.i_s)
            || !self.i_q.is_disjoint(&self.i_n)
            || !self.i_s.is_disjoint(&self.i_n)
            || self.i_q.len() + self.i_s.len() + self.i_n.len() != n as usize
        {
            return fail("I_Q, I_s, I_n do not partition Z_N");
        }
        if !is_planar_difference_set(&self.s) {
            return fail("S is not a planar difference set");
        }
        let half = mod_inverse(2, n as i64).unwrap();
        if self.s.scaled(half) != self.i_q {
            return fail("I_Q != 2^{-1} S");
        }
        if self.x.reduced(n) != self.i_q {
            return fail("X mod N != I_Q");
        }
        if self.x.scaled(q) != self.x {
            return fail("X is not invariant under multiplication by q mod 2N");
        }
        if self.s1_pp.len() + self.s2_pp.len() != q1 {
            return fail("|S_1''| + |S_2''| != q + 1");
        }
        if !self.s1.is_disjoint(&self.s2) || self.s1.union(&self.s2) != self.s {
            return fail("S_1, S_2 do not partition S");
        }
        if self.s1_p.union(&self.s2_p) != self.i_q {
            return fail("S_1' ∪ S_2' != I_Q");
        }
        if self.s1 != self.s1_pp.scaled(4) || self.s2 != self.s2_pp.scaled(4) {
            return fail("S_i != 4 S_i''");
        }
        if self.s1.scaled(q) != self.s1 || self.s2.scaled(q) != self.s2 {
            return fail("S_i not invariant under multiplication by q");
        }
        if self.s.scaled(q) != self.s {
            return fail("S not invariant under multiplication by q");
        }
        Ok(())
    }
}

/// Every nonzero residue is a difference of two elements exactly once.
pub fn is_planar_difference_set(s: &ResidueSet) -> bool {
    let n = s.modulus() as i64;
    let mut hits = vec![0u32; n as usize];
    for a in s.iter() {
        for b in s.iter() {
            if a != b {
                hits[(a as i64 - b as i64).rem_euclid(n) as usize] += 1;
            }
        }
    }
    hits[1..].iter().all(|&h| h == 1)
}

/// Exact value of `sum_{x in D} psi_{F_{q^3}}(omega^c x)` for a union `D` of
/// classes `{omega^e : e mod k in classes}`, by counting traces.
fn exact_cubic_counts(ctx: &FieldCtx, classes: &ResidueSet, c: u64) -> Vec<u64> {
    let params = ctx.params();
    let p = params.p as usize;
    let k = classes.modulus() as u64;
    let group = params.q3 - 1;
    let mut counts = vec![0u64; p];
    for e in 0..group {
        if classes.contains_reduced((e % k) as u32) {
            let x = ctx.omega_pow(((c + e) % group) as i64);
            let t = ctx.abs_trace(x, Level::Cubic).expect("x lies in F_{q^3}");
            counts[t as usize] += 1;
        }
    }
    counts
}

fn integer_value(counts: &[u64]) -> Option<i64> {
    let n1 = *counts.get(1)?;
    counts[1..]
        .iter()
        .all(|&c| c == n1)
        .then(|| counts[0] as i64 - n1 as i64)
}

fn counts_to_complex(counts: &[u64]) -> Complex64 {
    let p = counts.len() as f64;
    counts
        .iter()
        .enumerate()
        .map(|(t, &n)| Complex64::from_polar(n as f64, 2.0 * std::f64::consts::PI * t as f64 / p))
        .sum()
}

/// Outcome of the conic character and incidence checks.
#[derive(Debug, Clone, Serialize)]
pub struct ConicCharReport {
    /// Integer value of `psi(omega^c D_1)` → number of `c` in `Z_N`.
    pub d1_histogram: BTreeMap<i64, usize>,
    /// Predicted values for `D_{1,1}` with the number of `c` in `Z_{2N}` hitting each.
    pub d11_values: Vec<(f64, f64, usize)>,
    pub d11_max_deviation: f64,
    /// `G_q(eta)` used in the prediction.
    pub gauss_eta: (f64, f64),
    pub eta_two: i8,
    pub exterior_points: usize,
    pub interior_points: usize,
}

/// Checks the three-valued spectrum of `D_1`, the four-valued spectrum of
/// `D_{1,1}`, the tangent/secant/exterior trichotomy and the interior and
/// exterior point counts.
pub fn check_conic_char_values(ctx: &FieldCtx, data: &ConicData) -> Result<ConicCharReport> {
    let q = data.q as i64;
    let n = data.n;
    let eps = data.epsilon as i64;

    let d1_values: Vec<(u32, Option<i64>)> = (0..n)
        .into_par_iter()
        .map(|c| {
            (
                c,
                integer_value(&exact_cubic_counts(ctx, &data.i_q, c as u64)),
            )
        })
        .collect();
    let mut d1_histogram = BTreeMap::new();
    for (c, value) in d1_values {
        let value = value.ok_or_else(|| {
            Error::failure("conic", format!("psi(omega^{c} D_1) is not an integer"))
        })?;
        let expected = if data.i_q.contains_reduced(c) {
            -1
        } else if data.i_s.contains_reduced(c) {
            -1 + eps * q
        } else {
            -1 - eps * q
        };
        if value != expected {
            return Err(Error::failure(
                "conic",
                format!("psi(omega^{c} D_1) = {value}, expected {expected}"),
            ));
        }
        *d1_histogram.entry(value).or_insert(0) += 1;
    }

    let eta = MultChar::quadratic(ctx, Level::Base)?;
    let g_eta = gauss_sum(ctx, &eta)?.value;
    let eta_two = ctx.eta(2);
    let qf = data.q as f64;
    let twist = g_eta * (eta_two as f64 * qf);
    let predicted = [
        (Complex64::new(-1.0, 0.0) + twist) / 2.0,
        (Complex64::new(-1.0, 0.0) - twist) / 2.0,
        Complex64::new((-1.0 + eps as f64 * qf) / 2.0, 0.0),
        Complex64::new((-1.0 - eps as f64 * qf) / 2.0, 0.0),
    ];
    let x_plus_n = data.x.shifted(n as i64);
    let d11: Vec<(u32, Complex64)> = (0..2 * n)
        .into_par_iter()
        .map(|c| {
            (
                c,
                counts_to_complex(&exact_cubic_counts(ctx, &data.x, c as u64)),
            )
        })
        .collect();
    let mut hits = [0usize; 4];
    let mut max_dev: f64 = 0.0;
    for (c, value) in d11 {
        let cn = c % n;
        let case = if data.i_q.contains_reduced(cn) {
            if data.x.contains_reduced(c) {
                0
            } else {
                debug_assert!(x_plus_n.contains_reduced(c));
                1
            }
        } else if data.i_s.contains_reduced(cn) {
            2
        } else {
            3
        };
        let dev = (value - predicted[case]).norm();
        max_dev = max_dev.max(dev);
        if dev > CONIC_COMPLEX_TOLERANCE {
            return Err(Error::failure(
                "conic",
                format!(
                    "psi(omega^{c} D_11) = {value}, expected {} (case {case})",
                    predicted[case]
                ),
            ));
        }
        hits[case] += 1;
    }

    // Line classes through the polarity: |(S - c) ∩ I_Q| against sgn f(omega^c).
    for c in 0..n as i64 {
        let meet = data
            .s
            .shifted(-c)
            .iter()
            .filter(|&v| data.i_q.contains_reduced(v))
            .count();
        let f = cubic_trace(ctx, ctx.omega_pow(2 * c));
        let sgn = ctx.sgn(f)? as i64;
        let expected = match sgn {
            0 => 1,
            s if s == eps => 2,
            _ => 0,
        };
        if meet != expected {
            return Err(Error::failure(
                "conic",
                format!("line L_{c} meets the conic in {meet} points, sgn = {sgn}"),
            ));
        }
    }

    // A point off the conic is exterior iff it lies on two tangent lines.
    let tangents: Vec<i64> = data.i_q.iter().map(|c| c as i64).collect();
    let mut exterior = 0;
    let mut interior = 0;
    for i in 0..n as i64 {
        if data.i_q.contains(i) {
            continue;
        }
        let on = tangents
            .iter()
            .filter(|&&c| cubic_trace(ctx, ctx.omega_pow(c + i)).is_zero())
            .count();
        let sgn = ctx.sgn(cubic_trace(ctx, ctx.omega_pow(2 * i)))? as i64;
        match (on, sgn == eps) {
            (2, true) => exterior += 1,
            (0, false) => interior += 1,
            _ => {
                return Err(Error::failure(
                    "conic",
                    format!("point {i} lies on {on} tangents with sgn {sgn}"),
                ))
            }
        }
    }
    let qu = data.q as usize;
    if exterior != qu * (qu + 1) / 2 || interior != qu * (qu - 1) / 2 {
        return Err(Error::failure(
            "conic",
            format!("{exterior} exterior and {interior} interior points"),
        ));
    }

    Ok(ConicCharReport {
        d1_histogram,
        d11_values: predicted
            .iter()
            .zip(hits)
            .map(|(v, h)| (v.re, v.im, h))
            .collect(),
        d11_max_deviation: max_dev,
        gauss_eta: (g_eta.re, g_eta.im),
        eta_two,
        exterior_points: exterior,
        interior_points: interior,
    })
}
