//! Gauss sums, Gauss periods and the identities between them, all by direct
//! compensated summation in double precision.
//!
//! A multiplicative character of a level `L` of the tower is given by an
//! `(order, index)` pair against the fixed generator `g_L` of `L^*`
//! (`g_L = gamma^{(q^6-1)/(|L|-1)}`): `chi(g_L^e) = exp(2 pi i index e / order)`.
//! Since `Norm_{q^6/L}(gamma) = g_L`, lifting a character to F_{q^6} keeps
//! its `(order, index)` pair.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{mod_pow, FElem, FieldCtx, Level};
use crate::residues::ResidueSet;

/// Default cap on the number of terms in a single direct summation.
pub const DEFAULT_SUM_BUDGET: u64 = 50_000_000;

/// Relative tolerance: identities must hold to `REL_TOLERANCE * sqrt(|field|)`.
pub const REL_TOLERANCE: f64 = 1e-6;

const BLOCK: usize = 1 << 15;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MultChar {
    pub level: Level,
    pub order: u64,
    pub index: u64,
}

impl MultChar {
    pub fn new(ctx: &FieldCtx, level: Level, order: u64, index: i64) -> Result<MultChar> {
        let group = level.size(ctx.params()) - 1;
        if order == 0 || !group.is_multiple_of(order) {
            return Err(Error::NotADivisor(order, group));
        }
        Ok(MultChar {
            level,
            order,
            index: index.rem_euclid(order as i64) as u64,
        })
    }

    pub fn trivial(level: Level) -> MultChar {
        MultChar {
            level,
            order: 1,
            index: 0,
        }
    }

    pub fn quadratic(ctx: &FieldCtx, level: Level) -> Result<MultChar> {
        Self::new(ctx, level, 2, 1)
    }

    pub fn is_trivial(&self) -> bool {
        self.index.is_multiple_of(self.order)
    }

    /// Exact order of the character.
    pub fn exact_order(&self) -> u64 {
        self.order / gcd(self.index, self.order)
    }

    pub fn pow(&self, k: i64) -> MultChar {
        let index = (self.index as i128 * k as i128).rem_euclid(self.order as i128) as u64;
        MultChar { index, ..*self }
    }

    pub fn inverse(&self) -> MultChar {
        self.pow(-1)
    }

    /// Pointwise product; both characters must live on the same level.
    pub fn mul(&self, other: &MultChar) -> MultChar {
        assert_eq!(self.level, other.level);
        let order = self.order / gcd(self.order, other.order) * other.order;
        let index =
            (self.index * (order / self.order) + other.index * (order / other.order)) % order;
        MultChar {
            level: self.level,
            order,
            index,
        }
    }

    /// The lift `chi(alpha) = chi'(Norm(alpha))` to F_{q^6}.
    pub fn lift(&self) -> MultChar {
        MultChar {
            level: Level::Top,
            ..*self
        }
    }

    /// `chi(x)`, zero at zero. `x` must lie in the character's level.
    pub fn eval(&self, ctx: &FieldCtx, x: FElem) -> Result<Complex64> {
        if x.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let e = ctx.level_log(x, self.level)?;
        Ok(self.eval_log(e))
    }

    /// `chi(g_L^e)`.
    pub fn eval_log(&self, e: u64) -> Complex64 {
        let k = (self.index as u128 * e as u128 % self.order as u128) as f64;
        Complex64::from_polar(1.0, 2.0 * PI * k / self.order as f64)
    }
}

/// A floating value with its summation size and a conservative error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexVal {
    pub value: Complex64,
    pub terms: u64,
    pub error_bound: f64,
}

#[derive(Default, Clone, Copy)]
struct Kahan {
    sum: Complex64,
    comp: Complex64,
}

impl Kahan {
    fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

fn roots_of_unity(k: u64) -> Vec<Complex64> {
    (0..k)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / k as f64))
        .collect()
}

/// `Tr_{L/p}(g_L^e)` for every `e < |L| - 1`.
fn level_traces(ctx: &FieldCtx, level: Level) -> Vec<u8> {
    let params = ctx.params();
    let group = level.size(params) - 1;
    let stride = level.stride(params);
    (0..group)
        .into_par_iter()
        .map(|e| {
            let x = FElem::from_exp((e * stride) as u32);
            ctx.abs_trace(x, level).expect("x lies in its level") as u8
        })
        .collect()
}

/// `sum_{e} chi(g^e) psi(g^e)` over the multiplicative group of the level.
fn sum_over_group(ctx: &FieldCtx, chi: &MultChar, budget: u64) -> Result<ComplexVal> {
    let params = ctx.params();
    let group = chi.level.size(params) - 1;
    if group > budget {
        return Err(Error::BudgetExceeded {
            terms: group,
            budget,
        });
    }
    let p = params.p;
    let psi = roots_of_unity(p);
    let zeta = roots_of_unity(chi.order);
    let owned;
    let traces: &(dyn Fn(usize) -> u8 + Sync) = if chi.level == Level::Top {
        &|e| ctx.abs_trace_exp(e as u32) as u8
    } else {
        owned = level_traces(ctx, chi.level);
        &|e| owned[e]
    };
    let blocks: Vec<Kahan> = (0..group as usize)
        .into_par_iter()
        .step_by(BLOCK)
        .map(|start| {
            let end = (start + BLOCK).min(group as usize);
            let mut acc = Kahan::default();
            let mut k = (chi.index as u128 * start as u128 % chi.order as u128) as u64;
            for e in start..end {
                acc.add(zeta[k as usize] * psi[traces(e) as usize]);
                k += chi.index;
                if k >= chi.order {
                    k -= chi.order;
                }
            }
            acc
        })
        .collect();
    let mut total = Kahan::default();
    for b in blocks {
        total.add(b.sum);
        total.add(-b.comp);
    }
    Ok(ComplexVal {
        value: total.sum,
        terms: group,
        error_bound: 4.0 * f64::EPSILON * group as f64,
    })
}

/// `G_L(chi) = sum_{x in L^*} chi(x) psi_L(x)`.
pub fn gauss_sum(ctx: &FieldCtx, chi: &MultChar) -> Result<ComplexVal> {
    sum_over_group(ctx, chi, DEFAULT_SUM_BUDGET)
}

pub fn gauss_sum_with_budget(ctx: &FieldCtx, chi: &MultChar, budget: u64) -> Result<ComplexVal> {
    sum_over_group(ctx, chi, budget)
}

/// A Gauss period computed twice.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GaussPeriod {
    /// Sum of `psi` over the class.
    pub direct: Complex64,
    /// `(1/k) sum_j G(chi^j) chi^{-j}(g^i)`.
    pub expansion: Complex64,
    pub deviation: f64,
}

/// `psi(C_i^{(k)})` for the index-`k` classes of `level^*`, by direct
/// summation over the class and by the Gauss-sum expansion.
pub fn gauss_period(ctx: &FieldCtx, level: Level, i: u64, k: u64) -> Result<GaussPeriod> {
    let params = ctx.params();
    let group = level.size(params) - 1;
    if k == 0 || !group.is_multiple_of(k) {
        return Err(Error::NotADivisor(k, group));
    }
    if group.saturating_mul(k) > DEFAULT_SUM_BUDGET * 64 {
        return Err(Error::BudgetExceeded {
            terms: group * k,
            budget: DEFAULT_SUM_BUDGET * 64,
        });
    }
    let stride = level.stride(params);
    let psi = roots_of_unity(params.p);
    let mut direct = Kahan::default();
    let mut e = i % k;
    while e < group {
        let x = FElem::from_exp((e * stride) as u32);
        direct.add(psi[ctx.abs_trace(x, level)? as usize]);
        e += k;
    }
    let chi = MultChar::new(ctx, level, k, 1)?;
    let mut expansion = Kahan::default();
    for j in 0..k as i64 {
        let g = gauss_sum(ctx, &chi.pow(j))?.value;
        expansion.add(g * chi.pow(-j).eval_log(i));
    }
    let expansion = expansion.sum / k as f64;
    Ok(GaussPeriod {
        direct: direct.sum,
        expansion,
        deviation: (direct.sum - expansion).norm(),
    })
}

/// One numerically checked identity.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub parameters: String,
    pub lhs: (f64, f64),
    pub rhs: (f64, f64),
    pub abs_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    /// Re-evaluates `pass` with `rel` in place of [`REL_TOLERANCE`].
    pub fn with_relative_tolerance(mut self, rel: f64) -> Self {
        self.tolerance = self.tolerance / REL_TOLERANCE * rel;
        self.pass = self.abs_deviation < self.tolerance;
        self
    }

    fn new(
        name: &str,
        parameters: String,
        lhs: Complex64,
        rhs: Complex64,
        tolerance: f64,
    ) -> IdentityCheck {
        let dev = (lhs - rhs).norm();
        IdentityCheck {
            name: name.to_string(),
            parameters,
            lhs: (lhs.re, lhs.im),
            rhs: (rhs.re, rhs.im),
            abs_deviation: dev,
            tolerance,
            pass: dev < tolerance,
        }
    }
}

fn tolerance_for(ctx: &FieldCtx, level: Level) -> f64 {
    REL_TOLERANCE * (level.size(ctx.params()) as f64).sqrt()
}

fn g(ctx: &FieldCtx, chi: &MultChar) -> Result<Complex64> {
    Ok(gauss_sum(ctx, chi)?.value)
}

/// `G_{q^6}(chi_m) = p^{3f} (-1)^{t-1+(p^s+1)t/m}` for `p` semi-primitive mod `m`.
pub fn verify_semiprimitive(ctx: &FieldCtx, m: u64) -> Result<IdentityCheck> {
    let params = ctx.params();
    let p = params.p;
    let degree = Level::Top.degree(params.f) as u64;
    if m <= 2 {
        return Err(Error::NotApplicable(format!("order {m} must exceed 2")));
    }
    let s = (1..=m)
        .find(|&s| mod_pow(p, s, m) == m - 1)
        .ok_or_else(|| Error::NotApplicable(format!("{p} is not semi-primitive modulo {m}")))?;
    if !degree.is_multiple_of(2 * s) {
        return Err(Error::NotApplicable(format!(
            "degree {degree} is not a multiple of 2s = {}",
            2 * s
        )));
    }
    let t = degree / (2 * s);
    let exponent = if p == 2 {
        t - 1
    } else {
        t - 1 + (p.pow(s as u32) + 1) * t / m
    };
    let sign = if exponent % 2 == 0 { 1.0 } else { -1.0 };
    let predicted = sign * (p as f64).powi((degree / 2) as i32);
    let chi = MultChar::new(ctx, Level::Top, m, 1)?;
    Ok(IdentityCheck::new(
        "semiprimitive",
        format!("q={} m={m} s={s} t={t}", params.q),
        g(ctx, &chi)?,
        Complex64::new(predicted, 0.0),
        tolerance_for(ctx, Level::Top),
    ))
}

/// `G_{q^6}(lift chi') = -G_{q^3}(chi')^2`.
pub fn verify_lifting(ctx: &FieldCtx, chi: &MultChar) -> Result<IdentityCheck> {
    if chi.level != Level::Cubic || chi.is_trivial() {
        return Err(Error::NotApplicable(
            "lifting needs a nontrivial character of F_{q^3}".into(),
        ));
    }
    let lhs = g(ctx, &chi.lift())?;
    let base = g(ctx, chi)?;
    Ok(IdentityCheck::new(
        "lifting",
        format!("q={} order={} index={}", ctx.q(), chi.order, chi.index),
        lhs,
        -(base * base),
        tolerance_for(ctx, Level::Top),
    ))
}

/// `G(chi) = G(chi^l) / chi^l(l) * prod_{i=1}^{l-1} G(eta^i) / G(chi eta^i)`
/// with `eta` the index-1 character of order `l` on the level of `chi`.
pub fn verify_product_formula(ctx: &FieldCtx, chi: &MultChar, l: u64) -> Result<IdentityCheck> {
    if chi.is_trivial() {
        return Err(Error::NotApplicable("chi must be nontrivial".into()));
    }
    if l < 2 || l.is_multiple_of(ctx.p()) {
        return Err(Error::NotApplicable(format!("l = {l} is not usable")));
    }
    let eta = MultChar::new(ctx, chi.level, l, 1)?;
    let chi_l = chi.pow(l as i64);
    let mut rhs = g(ctx, &chi_l)? / chi_l.eval(ctx, ctx.from_int(l as i64))?;
    for i in 1..l as i64 {
        rhs *= g(ctx, &eta.pow(i))? / g(ctx, &chi.mul(&eta.pow(i)))?;
    }
    Ok(IdentityCheck::new(
        "product_formula",
        format!(
            "q={} level={} order={} index={} l={l}",
            ctx.q(),
            chi.level,
            chi.order,
            chi.index
        ),
        g(ctx, chi)?,
        rhs,
        tolerance_for(ctx, chi.level),
    ))
}

/// `-1` for q ≡ 3 (mod 8), `+1` for q ≡ 7 (mod 8).
pub fn rho(q: u64) -> f64 {
    if q % 8 == 3 {
        -1.0
    } else {
        1.0
    }
}

/// The characters `chi_4` on F_{q^6} and `chi'_m` on F_{q^3} used by the
/// main identity.
pub fn main_identity_characters(ctx: &FieldCtx, m: u64) -> Result<(MultChar, MultChar)> {
    let q = ctx.q();
    if q % 4 != 3 {
        return Err(Error::BadCongruence(q));
    }
    let n = ctx.params().n;
    if m <= 1 || m.is_multiple_of(2) || !n.is_multiple_of(m) {
        return Err(Error::NotADivisor(m, n));
    }
    Ok((
        MultChar::new(ctx, Level::Top, 4, 1)?,
        MultChar::new(ctx, Level::Cubic, m, 1)?,
    ))
}

/// For an odd divisor `m > 1` of `N`:
/// `G_{q^6}(chi_4 chi_m) = rho_q G_{q^3}(chi'_m^4) G_{q^3}(chi'_m^{-2})`,
/// `G_{q^6}(chi_4 chi_m) = G_{q^6}(chi_4^3 chi_m)`, and
/// `G_{q^6}(chi_4 chi_m) = rho_q q^3 G_{q^3}(chi'_2 chi'_m^2) / G_{q^3}(chi'_2)`.
pub fn verify_main_identity(ctx: &FieldCtx, m: u64) -> Result<Vec<IdentityCheck>> {
    let (chi4, chi_m_cubic) = main_identity_characters(ctx, m)?;
    let q = ctx.q();
    let rho = rho(q);
    let chi_m = chi_m_cubic.lift();
    let tol = REL_TOLERANCE * (ctx.params().q3 as f64);
    let params = format!("q={q} m={m} rho={rho}");

    let lhs = g(ctx, &chi4.mul(&chi_m))?;
    let rhs = rho * g(ctx, &chi_m_cubic.pow(4))? * g(ctx, &chi_m_cubic.pow(-2))?;
    let cubed = g(ctx, &chi4.pow(3).mul(&chi_m))?;
    let chi2 = MultChar::quadratic(ctx, Level::Cubic)?;
    let cor =
        rho * ctx.params().q3 as f64 * g(ctx, &chi2.mul(&chi_m_cubic.pow(2)))? / g(ctx, &chi2)?;
    Ok(vec![
        IdentityCheck::new("main_identity", params.clone(), lhs, rhs, tol),
        IdentityCheck::new(
            "main_identity_conjugate_pair",
            params.clone(),
            lhs,
            cubed,
            tol,
        ),
        IdentityCheck::new("main_identity_quadratic_form", params, lhs, cor, tol),
    ])
}

/// `G_{q^3}(chi'_N^j) = q sum_{s in S} chi'_N^j(omega^s)` for `j ≢ 0 (mod N)`.
pub fn verify_singer_gauss(ctx: &FieldCtx, singer: &ResidueSet, j: i64) -> Result<IdentityCheck> {
    let n = ctx.params().n;
    if j.rem_euclid(n as i64) == 0 {
        return Err(Error::NotApplicable("j must be nonzero mod N".into()));
    }
    let chi = MultChar::new(ctx, Level::Cubic, n, j)?;
    let rhs: Complex64 = singer
        .iter()
        .map(|s| chi.eval_log(s as u64))
        .sum::<Complex64>()
        * ctx.q() as f64;
    Ok(IdentityCheck::new(
        "singer_gauss",
        format!("q={} j={j}", ctx.q()),
        g(ctx, &chi)?,
        rhs,
        tolerance_for(ctx, Level::Cubic),
    ))
}

/// `G(chi^{-1}) = chi(-1) conj(G(chi))`.
pub fn verify_conjugation(ctx: &FieldCtx, chi: &MultChar) -> Result<IdentityCheck> {
    let minus_one = ctx.neg(FElem::ONE);
    let rhs = chi.eval(ctx, minus_one)? * g(ctx, chi)?.conj();
    Ok(IdentityCheck::new(
        "conjugation",
        format!(
            "q={} level={} order={} index={}",
            ctx.q(),
            chi.level,
            chi.order,
            chi.index
        ),
        g(ctx, &chi.inverse())?,
        rhs,
        tolerance_for(ctx, chi.level),
    ))
}

/// `G(chi^p) = G(chi)`.
pub fn verify_galois(ctx: &FieldCtx, chi: &MultChar) -> Result<IdentityCheck> {
    Ok(IdentityCheck::new(
        "galois_invariance",
        format!(
            "q={} level={} order={} index={}",
            ctx.q(),
            chi.level,
            chi.order,
            chi.index
        ),
        g(ctx, &chi.pow(ctx.p() as i64))?,
        g(ctx, chi)?,
        tolerance_for(ctx, chi.level),
    ))
}

/// Odd divisors `m > 1` of `N`.
pub fn odd_divisors_of_n(n: u64) -> Vec<u64> {
    (3..=n)
        .filter(|d| d % 2 == 1 && n.is_multiple_of(*d))
        .collect()
}

/// Every applicable identity for the field, in a fixed order, with
/// `conjugation` and `galois` random characters per field for the two
/// structural properties.
pub fn run_all(
    ctx: &FieldCtx,
    singer: &ResidueSet,
    conjugation: usize,
    galois: usize,
) -> Result<Vec<IdentityCheck>> {
    let params = ctx.params();
    let n = params.n;
    let mut out = Vec::new();
    for m in odd_divisors_of_n(n) {
        out.extend(verify_main_identity(ctx, m)?);
        let (chi4, chi_m) = main_identity_characters(ctx, m)?;
        out.push(verify_product_formula(ctx, &chi4.mul(&chi_m.lift()), 4)?);
        let chi2 = MultChar::quadratic(ctx, Level::Cubic)?;
        out.push(verify_product_formula(ctx, &chi2.mul(&chi_m.pow(2)), 2)?);
        out.push(verify_lifting(ctx, &chi_m)?);
    }
    out.push(verify_semiprimitive(ctx, 4)?);
    out.push(verify_lifting(
        ctx,
        &MultChar::quadratic(ctx, Level::Cubic)?,
    )?);
    let chi4 = MultChar::new(ctx, Level::Top, 4, 1)?;
    out.push(verify_product_formula(ctx, &chi4, 2)?);
    for j in 1..n as i64 {
        out.push(verify_singer_gauss(ctx, singer, j)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.q);
    for level in [Level::Cubic, Level::Top] {
        let group = level.size(params) - 1;
        for i in 0..conjugation.max(galois) {
            let chi = MultChar::new(ctx, level, group, rng.gen_range(1..group as i64))?;
            if i < conjugation {
                out.push(verify_conjugation(ctx, &chi)?);
            }
            if i < galois {
                out.push(verify_galois(ctx, &chi)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn trivial_and_quadratic_q3() {
        let ctx = build_field(3, 1).unwrap();
        let triv = gauss_sum(&ctx, &MultChar::trivial(Level::Top)).unwrap();
        assert!((triv.value - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        // G_3(eta) = e^{2 pi i/3} - e^{4 pi i/3} = i sqrt 3.
        let eta = MultChar::quadratic(&ctx, Level::Base).unwrap();
        let g = gauss_sum(&ctx, &eta).unwrap().value;
        assert!((g - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn absolute_value_sqrt_order() {
        let ctx = build_field(3, 1).unwrap();
        for (level, k) in [
            (Level::Base, 2),
            (Level::Cubic, 13),
            (Level::Cubic, 26),
            (Level::Top, 52),
        ] {
            let chi = MultChar::new(&ctx, level, k, 1).unwrap();
            let g = gauss_sum(&ctx, &chi).unwrap().value;
            let size = level.size(ctx.params()) as f64;
            assert!((g.norm_sqr() - size).abs() < 1e-8 * size);
        }
    }

    #[test]
    fn character_algebra() {
        let ctx = build_field(3, 1).unwrap();
        let chi4 = MultChar::new(&ctx, Level::Top, 4, 1).unwrap();
        let chi13 = MultChar::new(&ctx, Level::Top, 13, 1).unwrap();
        let prod = chi4.mul(&chi13);
        assert_eq!(prod.order, 52);
        assert_eq!(prod.exact_order(), 52);
        for e in [0u64, 1, 5, 100, 727] {
            let lhs = prod.eval_log(e);
            let rhs = chi4.eval_log(e) * chi13.eval_log(e);
            assert!((lhs - rhs).norm() < 1e-12);
        }
        assert!(chi4.pow(4).is_trivial());
        assert!(MultChar::new(&ctx, Level::Top, 5, 1).is_err());
    }

    #[test]
    fn lift_agrees_with_norm() {
        let ctx = build_field(3, 1).unwrap();
        let chi = MultChar::new(&ctx, Level::Cubic, 13, 3).unwrap();
        let lifted = chi.lift();
        for e in [1i64, 7, 300, 727] {
            let x = ctx.gamma_pow(e);
            let norm = ctx.pow(x, 28);
            let a = lifted.eval(&ctx, x).unwrap();
            let b = chi.eval(&ctx, norm).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn periods_sum_to_minus_one() {
        let ctx = build_field(3, 1).unwrap();
        let total: Complex64 = (0..13)
            .map(|i| gauss_period(&ctx, Level::Cubic, i, 13).unwrap().direct)
            .sum();
        assert!((total + 1.0).norm() < 1e-9);
        let whole = gauss_period(&ctx, Level::Top, 0, 1).unwrap();
        assert!((whole.direct + 1.0).norm() < 1e-9);
        assert!(whole.deviation < 1e-9);
    }

    #[test]
    fn semiprimitive_q3() {
        let ctx = build_field(3, 1).unwrap();
        let check = verify_semiprimitive(&ctx, 4).unwrap();
        assert!(check.pass, "{check:?}");
        assert_eq!(check.rhs, (-27.0, 0.0));
        assert!(matches!(
            verify_semiprimitive(&ctx, 2),
            Err(Error::NotApplicable(_))
        ));
        // 3 has order 3 mod 13 and is never -1 there.
        assert!(matches!(
            verify_semiprimitive(&ctx, 13),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn main_identity_rejects_bad_input() {
        let ctx = build_field(3, 1).unwrap();
        assert_eq!(
            verify_main_identity(&ctx, 5).unwrap_err(),
            Error::NotADivisor(5, 13)
        );
        assert_eq!(
            verify_main_identity(&ctx, 1).unwrap_err(),
            Error::NotADivisor(1, 13)
        );
        let ctx5 = build_field(5, 1).unwrap();
        assert_eq!(
            verify_main_identity(&ctx5, 31).unwrap_err(),
            Error::BadCongruence(5)
        );
    }

    #[test]
    fn singer_gauss_zero_index_is_excluded() {
        let ctx = build_field(3, 1).unwrap();
        let s = crate::conic::compute_singer_set(&ctx);
        assert!(verify_singer_gauss(&ctx, &s, 0).is_err());
        // The degenerate identity really fails at j = 0: -1 against q(q+1).
        let g0 = gauss_sum(&ctx, &MultChar::trivial(Level::Cubic))
            .unwrap()
            .value;
        assert!((g0 - Complex64::new(12.0, 0.0)).norm() > 1.0);
    }

    #[test]
    fn budget_is_enforced() {
        let ctx = build_field(3, 1).unwrap();
        let chi = MultChar::new(&ctx, Level::Top, 4, 1).unwrap();
        assert!(matches!(
            gauss_sum_with_budget(&ctx, &chi, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
