//! The hemisystem: an index set `I ⊂ Z_{4N}`, the union `D` of the
//! cyclotomic classes `C_i^{(4N)}` for `i ∈ I`, and the point set `M` of
//! PG(5,q) that `D` covers.
//!
//! With `r = N i - (q+1) j`, CRT splits `Z_{4N}` as `Z_4 × Z_N`: for
//! q ≡ 3 (mod 4) we have `N ≡ 1` and `q + 1 ≡ 0 (mod 4)`, so `r ≡ i (mod 4)`
//! and `r ≡ -(q+1) j (mod N)`.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::conic::ConicData;
use crate::error::{Error, Result};
use crate::field::{FElem, FieldCtx};
use crate::geometry::{quadric_form, ProjPoint};
use crate::residues::ResidueSet;

pub const J1: [i64; 2] = [0, 3];
pub const J2: [i64; 2] = [1, 2];
pub const K1: [i64; 2] = [0, 1];
pub const K2: [i64; 2] = [2, 3];

/// Expected sizes of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Sizes {
    pub index_set: u64,
    pub d: u64,
    pub m: u64,
}

impl Sizes {
    pub fn expected(q: u64) -> Sizes {
        let q3 = q * q * q;
        Sizes {
            index_set: 2 * (q + 1),
            d: (q3 + 1) * (q * q - 1) / 2,
            m: (q + 1) * (q3 + 1) / 2,
        }
    }
}

fn combine(conic: &ConicData, first: [i64; 2], second: [i64; 2]) -> Result<ResidueSet> {
    if conic.q % 4 != 3 {
        return Err(Error::BadCongruence(conic.q));
    }
    let n = conic.n as i64;
    let modulus = 4 * n;
    let q1 = conic.q as i64 + 1;
    let mut seen = FixedBitSet::with_capacity(modulus as usize);
    let pairs = first
        .iter()
        .flat_map(|&i| conic.s1.iter().map(move |j| (i, j)))
        .chain(
            second
                .iter()
                .flat_map(|&i| conic.s2.iter().map(move |j| (i, j))),
        );
    for (i, j) in pairs {
        let r = (n * i - q1 * j as i64).rem_euclid(modulus) as usize;
        if seen.put(r) {
            return Err(Error::CollisionDetected(r as u32));
        }
    }
    Ok(ResidueSet::new(
        modulus as u32,
        seen.ones().map(|r| r as i64),
    ))
}

/// `I = {N i - (q+1) j mod 4N : (i, j) ∈ J_1 × S_1 ∪ J_2 × S_2}`.
pub fn build_index_set(conic: &ConicData) -> Result<ResidueSet> {
    combine(conic, J1, J2)
}

/// `J` from `K_1 = {0,1}`, `K_2 = {2,3}`; it indexes the dual set `E`.
pub fn build_dual_index_set(conic: &ConicData) -> Result<ResidueSet> {
    combine(conic, K1, K2)
}

/// Everything needed to reproduce `D` bit for bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HemisystemDescriptor {
    pub p: u64,
    pub f: u32,
    pub q: u64,
    pub n: u32,
    /// Full primitive polynomial, low coefficient first, ending in 1.
    pub polynomial: Vec<u32>,
    pub conic: ConicData,
    pub i: ResidueSet,
    pub j: ResidueSet,
}

impl HemisystemDescriptor {
    pub fn build(ctx: &FieldCtx, conic: ConicData) -> Result<Self> {
        let params = ctx.params();
        if !params.is_construction_field() {
            return Err(Error::BadCongruence(params.q));
        }
        let i = build_index_set(&conic)?;
        let j = build_dual_index_set(&conic)?;
        Ok(HemisystemDescriptor {
            p: params.p,
            f: params.f,
            q: params.q,
            n: params.n as u32,
            polynomial: ctx.polynomial_full(),
            conic,
            i,
            j,
        })
    }

    /// Builds the conic data with the given `d0` and then the descriptor.
    pub fn construct(ctx: &FieldCtx, d0: Option<u32>) -> Result<Self> {
        let conic = ConicData::build(ctx, d0)?;
        Self::build(ctx, conic)
    }

    pub fn m(&self) -> u64 {
        self.q.div_ceil(2)
    }

    pub fn modulus(&self) -> u32 {
        4 * self.n
    }

    pub fn expected_sizes(&self) -> Sizes {
        Sizes::expected(self.q)
    }

    /// A copy with residue `r` removed from `I`; used as a negative control.
    pub fn without_residue(&self, r: u32) -> Self {
        let i = ResidueSet::new(
            self.modulus(),
            self.i.iter().filter(|&x| x != r).map(i64::from),
        );
        HemisystemDescriptor { i, ..self.clone() }
    }

    #[inline]
    pub fn contains_exp(&self, e: u64) -> bool {
        self.i.contains_reduced((e % self.modulus() as u64) as u32)
    }

    /// Membership of `x` in `D`.
    pub fn contains(&self, x: FElem) -> Result<bool> {
        x.exp()
            .map(|e| self.contains_exp(e as u64))
            .ok_or(Error::ZeroInput)
    }

    /// Exponents of the elements of `D`, increasing.
    pub fn d_exponents(&self, ctx: &FieldCtx) -> Vec<u32> {
        let order = ctx.params().order() as u32;
        let modulus = self.modulus();
        let mut out: Vec<u32> = (0..order / modulus)
            .flat_map(|block| self.i.iter().map(move |r| block * modulus + r))
            .collect();
        out.sort_unstable();
        out
    }

    /// Exact closure properties on `I`: `|I| = 2(q+1)`, `q^2 I = I`,
    /// `q^3 I = J`, `-D = D` and `F_q^* D = D`.
    pub fn check_closure(&self, ctx: &FieldCtx) -> Result<()> {
        let params = ctx.params();
        let modulus = self.modulus() as u64;
        let q = self.q as i64;
        if self.i.len() as u64 != self.expected_sizes().index_set {
            return Err(Error::failure(
                "construct",
                format!("|I| = {}, expected {}", self.i.len(), 2 * (self.q + 1)),
            ));
        }
        if self.i.scaled(q * q) != self.i {
            return Err(Error::failure("construct", "q^2 I != I (mod 4N)"));
        }
        if self.i.scaled(q * q * q) != self.j {
            return Err(Error::failure("construct", "q^3 I != J (mod 4N)"));
        }
        let minus_one = (params.order() / 2) % modulus;
        if self.i.shifted(minus_one as i64) != self.i {
            return Err(Error::failure("construct", "-D != D"));
        }
        self.check_scalar_closure(ctx)
    }

    /// `lambda x ∈ D` for every `lambda ∈ F_q^*` and `x ∈ D`, by coset arithmetic.
    pub fn check_scalar_closure(&self, ctx: &FieldCtx) -> Result<()> {
        let params = ctx.params();
        let modulus = self.modulus() as u64;
        let stride = params.proj_points();
        for r in self.i.iter() {
            for k in 1..params.q - 1 {
                let shifted = (r as u64 + (k * stride) % modulus) % modulus;
                if !self.i.contains_reduced(shifted as u32) {
                    return Err(Error::ScalarOrbitNotClosed(r));
                }
            }
        }
        Ok(())
    }
}

/// A set of points of PG(5,q) as a bitset over canonical exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    bits: FixedBitSet,
    len: usize,
}

impl PointSet {
    pub fn from_points(total: usize, points: impl IntoIterator<Item = u32>) -> Self {
        let mut bits = FixedBitSet::with_capacity(total);
        for p in points {
            bits.insert(p as usize);
        }
        let len = bits.count_ones(..);
        PointSet { bits, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, p: ProjPoint) -> bool {
        self.bits.contains(p.0 as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        self.bits.ones().map(|c| ProjPoint(c as u32))
    }

    pub fn to_vec(&self) -> Vec<ProjPoint> {
        self.iter().collect()
    }

    /// `universe \ self`.
    pub fn complement_in(&self, universe: &[ProjPoint]) -> PointSet {
        PointSet::from_points(
            self.bits.len(),
            universe.iter().filter(|p| !self.contains(**p)).map(|p| p.0),
        )
    }
}

/// `M = {<gamma^c> : c mod 4N ∈ I}`. Every point of `M` must be singular and
/// carry its whole scalar orbit inside `D`.
pub fn build_point_set(ctx: &FieldCtx, desc: &HemisystemDescriptor) -> Result<PointSet> {
    desc.check_scalar_closure(ctx)?;
    let total = ctx.params().proj_points() as u32;
    let points: Vec<u32> = (0..total)
        .into_par_iter()
        .filter(|&c| desc.contains_exp(c as u64))
        .collect();
    if let Some(&bad) = points
        .par_iter()
        .find_any(|&&c| !quadric_form(ctx, FElem::from_exp(c)).is_zero())
    {
        return Err(Error::failure(
            "construct",
            format!("point {bad} of M is not on the quadric"),
        ));
    }
    Ok(PointSet::from_points(total as usize, points))
}
