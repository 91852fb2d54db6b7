//! Exact arithmetic in F_{q^6}, q = p^f, in discrete-logarithm form.
//!
//! Every nonzero element is stored as its exponent with respect to a fixed
//! primitive element `gamma`, the root of the lexicographically smallest
//! primitive polynomial of degree `6f` over F_p. Multiplication is exponent
//! addition and addition goes through a Zech logarithm table. The vector
//! (polynomial basis) representation only appears while the tables are built
//! and at the edges where callers need coordinates, e.g. graph export.
//!
//! The tower F_p ⊂ F_q ⊂ F_{q^3} ⊂ F_{q^6} is addressed through [`Level`].

mod cache;
mod poly;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cache::{cache_path, load_or_build, read_cache, write_cache, CACHE_MAGIC, CACHE_VERSION};

/// Default cap on `q^6` for exhaustive table construction.
pub const DEFAULT_TABLE_BUDGET: u64 = 50_000_000;

const SENTINEL: u32 = u32::MAX;

/// Numeric parameters of the tower F_p ⊂ F_q ⊂ F_{q^3} ⊂ F_{q^6}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u64,
    pub f: u32,
    pub q: u64,
    /// `q^2 + q + 1`.
    pub n: u64,
    pub q3: u64,
    pub q6: u64,
}

impl FieldParams {
    pub fn new(p: u64, f: u32) -> Self {
        let q = p.pow(f);
        FieldParams {
            p,
            f,
            q,
            n: q * q + q + 1,
            q3: q * q * q,
            q6: q.pow(6),
        }
    }

    /// Order of the multiplicative group of F_{q^6}.
    pub fn order(&self) -> u64 {
        self.q6 - 1
    }

    /// Number of points of PG(5,q), which is also the exponent stride of F_q^*.
    pub fn proj_points(&self) -> u64 {
        (self.q6 - 1) / (self.q - 1)
    }

    pub fn is_construction_field(&self) -> bool {
        self.q % 4 == 3
    }

    /// `(q + 1) / 2`, the ovoid parameter of a hemisystem.
    pub fn m(&self) -> u64 {
        self.q.div_ceil(2)
    }

    /// `[q - 1, q^3 - 1, q^6 - 1, N, 2N, 4N]`.
    pub fn moduli(&self) -> [u64; 6] {
        [
            self.q - 1,
            self.q3 - 1,
            self.q6 - 1,
            self.n,
            2 * self.n,
            4 * self.n,
        ]
    }
}

/// A level of the subfield tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    Prime,
    Base,
    Cubic,
    Top,
}

impl Level {
    /// Degree of this level over F_p.
    pub fn degree(self, f: u32) -> u32 {
        match self {
            Level::Prime => 1,
            Level::Base => f,
            Level::Cubic => 3 * f,
            Level::Top => 6 * f,
        }
    }

    pub fn size(self, params: &FieldParams) -> u64 {
        params.p.pow(self.degree(params.f))
    }

    /// Exponent step `(q^6 - 1) / (|L| - 1)`; `gamma^step` generates `L^*`.
    pub fn stride(self, params: &FieldParams) -> u64 {
        params.order() / (self.size(params) - 1)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Level::Prime => "F_p",
            Level::Base => "F_q",
            Level::Cubic => "F_{q^3}",
            Level::Top => "F_{q^6}",
        };
        f.write_str(s)
    }
}

/// A field element: either zero or `gamma^e` with `e` reduced mod `q^6 - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FElem(u32);

impl FElem {
    pub const ZERO: FElem = FElem(SENTINEL);
    pub const ONE: FElem = FElem(0);

    /// The caller guarantees `e < q^6 - 1`; use [`FieldCtx::gamma_pow`] otherwise.
    pub fn from_exp(e: u32) -> Self {
        debug_assert!(e != SENTINEL);
        FElem(e)
    }

    pub fn exp(self) -> Option<u32> {
        (self.0 != SENTINEL).then_some(self.0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == SENTINEL
    }

    pub fn raw(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for FElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp() {
            None => write!(f, "0"),
            Some(e) => write!(f, "γ^{e}"),
        }
    }
}

/// Immutable arithmetic context for F_{q^6}.
pub struct FieldCtx {
    params: FieldParams,
    /// `c_0..c_{n-1}` of the monic modulus `x^n + c_{n-1} x^{n-1} + ... + c_0`.
    poly: Vec<u32>,
    /// exponent -> vector code (base-p digits, digit i = coefficient of gamma^i)
    antilog: Vec<u32>,
    /// vector code -> exponent, `SENTINEL` at 0
    log: Vec<u32>,
    /// `gamma^{zech[e]} = 1 + gamma^e`, `SENTINEL` when that sum is 0
    zech: Vec<u32>,
    /// `Tr_{q^6/p}(gamma^e)` as an integer in `0..p`
    abs_trace: Vec<u8>,
    /// `Tr_{q^6/q}(gamma^e)` as raw `FElem`
    rel_trace: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("params", &self.params)
            .field("poly", &self.poly)
            .finish_non_exhaustive()
    }
}

/// Builds the context for F_{(p^f)^6} under the default table budget.
pub fn build_field(p: u64, f: u32) -> Result<FieldCtx> {
    build_field_with_budget(p, f, DEFAULT_TABLE_BUDGET)
}

pub fn build_field_with_budget(p: u64, f: u32, budget: u64) -> Result<FieldCtx> {
    let poly = select_polynomial(p, f, budget)?;
    Ok(FieldCtx::from_polynomial(p, f, poly))
}

/// Validates `(p, f)` against the budget and finds the modulus.
pub(crate) fn select_polynomial(p: u64, f: u32, budget: u64) -> Result<Vec<u32>> {
    check_size(p, f, budget)?;
    let params = FieldParams::new(p, f);
    let degree = 6 * f;
    poly::smallest_primitive(p, degree, params.order())
        .map(|c| c.into_iter().map(|x| x as u32).collect())
        .ok_or(Error::NoPrimitivePolynomialFound { p, degree })
}

pub(crate) fn check_size(p: u64, f: u32, budget: u64) -> Result<()> {
    if !poly::is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    let degree = 6 * f;
    let exceeded = Error::TableBudgetExceeded { p, degree, budget };
    if f == 0 {
        return Err(exceeded);
    }
    let mut size: u64 = 1;
    for _ in 0..degree {
        size = size.checked_mul(p).ok_or(exceeded.clone())?;
        if size > budget {
            return Err(exceeded);
        }
    }
    Ok(())
}

impl FieldCtx {
    /// Builds every table for the modulus with low coefficients `poly`.
    /// The polynomial must be primitive; this is asserted while walking the
    /// powers of `gamma`.
    pub(crate) fn from_polynomial(p: u64, f: u32, poly: Vec<u32>) -> FieldCtx {
        let params = FieldParams::new(p, f);
        let n = (6 * f) as usize;
        assert_eq!(poly.len(), n);
        let order = params.order() as usize;
        let p32 = p as u32;

        let mut antilog = vec![0u32; order];
        let mut v = vec![0u32; n];
        v[0] = 1;
        let powers: Vec<u32> = (0..n).map(|i| p.pow(i as u32) as u32).collect();
        let mut code: u32 = 1;
        for slot in antilog.iter_mut() {
            *slot = code;
            // v <- v * x mod poly
            let carry = v[n - 1];
            for i in (1..n).rev() {
                v[i] = (v[i - 1] + (p32 - poly[i]) * carry) % p32;
            }
            v[0] = ((p32 - poly[0]) * carry) % p32;
            code = v.iter().zip(&powers).map(|(d, w)| d * w).sum();
        }
        assert_eq!(code, 1, "gamma is not primitive");
        Self::from_antilog(params, poly, antilog).expect("gamma is not primitive")
    }

    /// Completes a context from its antilog table. Fails if the table is not
    /// a bijection onto the nonzero vectors.
    pub(crate) fn from_antilog(
        params: FieldParams,
        poly: Vec<u32>,
        antilog: Vec<u32>,
    ) -> Result<FieldCtx> {
        let p = params.p;
        let p32 = p as u32;
        let n = (6 * params.f) as usize;
        let order = params.order() as usize;
        if antilog.len() != order {
            return Err(Error::Cache("antilog table has the wrong length".into()));
        }
        let mut log = vec![SENTINEL; params.q6 as usize];
        for (e, &code) in antilog.iter().enumerate() {
            let slot = log
                .get_mut(code as usize)
                .filter(|s| code != 0 && **s == SENTINEL)
                .ok_or_else(|| Error::Cache("antilog table is not a bijection".into()))?;
            *slot = e as u32;
        }

        let zech = antilog
            .iter()
            .map(|&c| {
                let d0 = c % p32;
                let bumped = c - d0 + (d0 + 1) % p32;
                log[bumped as usize]
            })
            .collect();

        let mut ctx = FieldCtx {
            params,
            poly,
            antilog,
            log,
            zech,
            abs_trace: Vec::new(),
            rel_trace: Vec::new(),
        };

        // Tr_{q^6/p} is F_p-linear: tabulate it on the basis and extend.
        let basis_traces: Vec<u32> = (0..n)
            .map(|i| {
                let t = ctx.frobenius_sum(FElem(i as u32), p, n as u32);
                ctx.to_vector(t)
            })
            .collect();
        ctx.abs_trace = ctx
            .antilog
            .iter()
            .map(|&c| {
                let mut c = c;
                let mut acc = 0u32;
                for &t in &basis_traces {
                    acc += (c % p32) * t;
                    c /= p32;
                }
                (acc % p32) as u8
            })
            .collect();
        let q = params.q;
        ctx.rel_trace = (0..order as u32)
            .map(|e| ctx.frobenius_sum(FElem(e), q, 6).0)
            .collect();
        Ok(ctx)
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn p(&self) -> u64 {
        self.params.p
    }

    pub fn q(&self) -> u64 {
        self.params.q
    }

    /// Low coefficients `c_0..c_{n-1}` of the monic modulus.
    pub fn polynomial(&self) -> &[u32] {
        &self.poly
    }

    /// Full coefficient list of the modulus, constant term first, leading 1 last.
    pub fn polynomial_full(&self) -> Vec<u32> {
        let mut v = self.poly.clone();
        v.push(1);
        v
    }

    /// Vector code of `gamma * v` computed with the companion recurrence.
    pub(crate) fn mul_by_x_vector(&self, code: u32) -> u32 {
        let p = self.params.p as u32;
        let n = self.poly.len();
        let mut digits: Vec<u32> = (0..n)
            .scan(code, |c, _| {
                let d = *c % p;
                *c /= p;
                Some(d)
            })
            .collect();
        let carry = digits[n - 1];
        for i in (1..n).rev() {
            digits[i] = (digits[i - 1] + (p - self.poly[i]) * carry) % p;
        }
        digits[0] = ((p - self.poly[0]) * carry) % p;
        digits.iter().rev().fold(0, |acc, &d| acc * p + d)
    }

    pub(crate) fn antilog_table(&self) -> &[u32] {
        &self.antilog
    }

    pub(crate) fn zech_table(&self) -> &[u32] {
        &self.zech
    }

    fn order(&self) -> u64 {
        self.params.order()
    }

    /// `gamma^k` for any integer `k`.
    pub fn gamma_pow(&self, k: i64) -> FElem {
        FElem(k.rem_euclid(self.order() as i64) as u32)
    }

    pub fn gamma(&self) -> FElem {
        self.gamma_pow(1)
    }

    /// `omega = gamma^{q^3 + 1}`, a primitive element of F_{q^3}.
    pub fn omega(&self) -> FElem {
        self.gamma_pow((self.params.q3 + 1) as i64)
    }

    /// `omega^k` for any integer `k`.
    pub fn omega_pow(&self, k: i64) -> FElem {
        let order = self.order() as i128;
        let e = (k as i128 * (self.params.q3 + 1) as i128).rem_euclid(order);
        FElem(e as u32)
    }

    /// The image of the integer `k` in the prime field.
    pub fn from_int(&self, k: i64) -> FElem {
        let r = k.rem_euclid(self.params.p as i64) as usize;
        FElem(self.log[r])
    }

    /// Element with the given base-p vector code.
    pub fn from_vector(&self, code: u32) -> FElem {
        FElem(self.log[code as usize])
    }

    /// Base-p vector code of `x` (digit i is the coefficient of `gamma^i`).
    pub fn to_vector(&self, x: FElem) -> u32 {
        match x.exp() {
            None => 0,
            Some(e) => self.antilog[e as usize],
        }
    }

    pub fn mul(&self, x: FElem, y: FElem) -> FElem {
        match (x.exp(), y.exp()) {
            (Some(a), Some(b)) => {
                let s = a as u64 + b as u64;
                let o = self.order();
                FElem(if s >= o { s - o } else { s } as u32)
            }
            _ => FElem::ZERO,
        }
    }

    pub fn add(&self, x: FElem, y: FElem) -> FElem {
        let (a, b) = match (x.exp(), y.exp()) {
            (None, _) => return y,
            (_, None) => return x,
            (Some(a), Some(b)) => (a as u64, b as u64),
        };
        let o = self.order();
        let d = if b >= a { b - a } else { b + o - a };
        let z = self.zech[d as usize];
        if z == SENTINEL {
            return FElem::ZERO;
        }
        let s = a + z as u64;
        FElem(if s >= o { s - o } else { s } as u32)
    }

    /// The exponent of -1.
    fn minus_one_exp(&self) -> u64 {
        if self.params.p == 2 {
            0
        } else {
            self.order() / 2
        }
    }

    pub fn neg(&self, x: FElem) -> FElem {
        self.mul(x, FElem(self.minus_one_exp() as u32))
    }

    pub fn sub(&self, x: FElem, y: FElem) -> FElem {
        self.add(x, self.neg(y))
    }

    pub fn inv(&self, x: FElem) -> Result<FElem> {
        let e = x.exp().ok_or(Error::DivisionByZero)? as u64;
        Ok(FElem(((self.order() - e) % self.order()) as u32))
    }

    pub fn pow(&self, x: FElem, k: u64) -> FElem {
        match x.exp() {
            None if k == 0 => FElem::ONE,
            None => FElem::ZERO,
            Some(e) => FElem(((e as u128 * k as u128) % self.order() as u128) as u32),
        }
    }

    /// `x^{q^k}`.
    pub fn frobenius(&self, x: FElem, k: u32) -> FElem {
        let qk = mod_pow(self.params.q, k as u64, self.order());
        self.pow(x, qk)
    }

    /// `x^{r^k}` for an arbitrary base `r`.
    fn power_of_power(&self, x: FElem, r: u64, k: u32) -> FElem {
        self.pow(x, mod_pow(r, k as u64, self.order()))
    }

    /// `x + x^r + x^{r^2} + ... + x^{r^{d-1}}`.
    fn frobenius_sum(&self, x: FElem, r: u64, d: u32) -> FElem {
        (0..d).fold(FElem::ZERO, |acc, k| {
            self.add(acc, self.power_of_power(x, r, k))
        })
    }

    /// True iff `x` lies in the subfield `level`.
    pub fn contains(&self, x: FElem, level: Level) -> bool {
        match x.exp() {
            None => true,
            Some(e) => (e as u64).is_multiple_of(level.stride(&self.params)),
        }
    }

    /// Relative trace `Tr_{top/bottom}(x)`, computed as a sum of Frobenius powers.
    pub fn trace(&self, x: FElem, top: Level, bottom: Level) -> Result<FElem> {
        if bottom > top {
            return Err(Error::LevelMismatch {
                top: top.to_string(),
                bottom: bottom.to_string(),
            });
        }
        if !self.contains(x, top) {
            return Err(Error::NotInSubfield(top.to_string()));
        }
        let f = self.params.f;
        let (dt, db) = (top.degree(f), bottom.degree(f));
        debug_assert_eq!(dt % db, 0);
        Ok(self.frobenius_sum(x, bottom.size(&self.params), dt / db))
    }

    /// `Tr_{q^6/q}(x)` by table lookup.
    pub fn trace_to_base(&self, x: FElem) -> FElem {
        match x.exp() {
            None => FElem::ZERO,
            Some(e) => FElem(self.rel_trace[e as usize]),
        }
    }

    /// `Tr_{q^6/q}(gamma^e) == 0` for an exponent `e < q^6 - 1`.
    #[inline]
    pub fn base_trace_is_zero(&self, e: u32) -> bool {
        self.rel_trace[e as usize] == SENTINEL
    }

    /// `Tr_{q^6/p}(gamma^e)` as an integer in `0..p` for an exponent `e < q^6 - 1`.
    #[inline]
    pub fn abs_trace_exp(&self, e: u32) -> u32 {
        self.abs_trace[e as usize] as u32
    }

    /// `Tr_{level/p}(x)` lifted to an integer in `0..p`; `x` must lie in `level`.
    pub fn abs_trace(&self, x: FElem, level: Level) -> Result<u32> {
        if !self.contains(x, level) {
            return Err(Error::NotInSubfield(level.to_string()));
        }
        let Some(e) = x.exp() else { return Ok(0) };
        let p = self.params.p;
        let index = (6 * self.params.f / level.degree(self.params.f)) as u64;
        if !index.is_multiple_of(p) {
            // Tr_{q^6/p}(x) = [q^6 : level] * Tr_{level/p}(x) for x in the subfield.
            let inv = mod_pow(index % p, p - 2, p);
            return Ok((self.abs_trace[e as usize] as u64 * inv % p) as u32);
        }
        let t = self.trace(x, level, Level::Prime)?;
        Ok(self.to_vector(t))
    }

    /// Sign of an element of F_{q^3}: 0 at zero, +1 on squares, -1 on nonsquares.
    pub fn sgn(&self, x: FElem) -> Result<i8> {
        if !self.contains(x, Level::Cubic) {
            return Err(Error::NotInSubfield(Level::Cubic.to_string()));
        }
        Ok(match x.exp() {
            None => 0,
            Some(e) => {
                let k = e as u64 / (self.params.q3 + 1);
                if k.is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            }
        })
    }

    /// Canonical additive character of `level` twisted by `a`:
    /// `exp(2 pi i Tr_{level/p}(a x) / p)`.
    pub fn additive_char(&self, a: FElem, x: FElem, level: Level) -> Result<Complex64> {
        let t = self.abs_trace(self.mul(a, x), level)?;
        Ok(Complex64::from_polar(
            1.0,
            2.0 * PI * t as f64 / self.params.p as f64,
        ))
    }

    /// Exponent of `x` with respect to the generator of `level^*`.
    pub fn level_log(&self, x: FElem, level: Level) -> Result<u64> {
        if x.is_zero() || !self.contains(x, level) {
            return Err(Error::NotInSubfield(level.to_string()));
        }
        Ok(x.exp().unwrap() as u64 / level.stride(&self.params))
    }

    /// Quadratic character of the prime-field integer `k` viewed in F_q.
    pub fn eta(&self, k: i64) -> i8 {
        let x = self.from_int(k);
        match x.exp() {
            None => 0,
            Some(e) => {
                let k = e as u64 / self.params.proj_points();
                if k.is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

/// `base^exp mod m`.
pub fn mod_pow(base: u64, exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m = m as u128;
    let mut result: u128 = 1;
    let mut b = base as u128 % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    result as u64
}
