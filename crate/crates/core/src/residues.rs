//! Sets of residues modulo a fixed integer, kept both as a sorted vector and
//! as a bitset for constant-time membership.

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

#[derive(Clone, PartialEq, Eq)]
pub struct ResidueSet {
    modulus: u32,
    elems: Vec<u32>,
    bits: FixedBitSet,
}

impl ResidueSet {
    /// Reduces every input mod `modulus`; duplicates collapse.
    pub fn new<I: IntoIterator<Item = i64>>(modulus: u32, items: I) -> Self {
        let mut bits = FixedBitSet::with_capacity(modulus as usize);
        for x in items {
            bits.insert(x.rem_euclid(modulus as i64) as usize);
        }
        let elems = bits.ones().map(|x| x as u32).collect();
        ResidueSet {
            modulus,
            elems,
            bits,
        }
    }

    pub fn empty(modulus: u32) -> Self {
        Self::new(modulus, std::iter::empty())
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Membership of `x mod modulus`.
    #[inline]
    pub fn contains(&self, x: i64) -> bool {
        self.bits
            .contains(x.rem_euclid(self.modulus as i64) as usize)
    }

    /// Membership of an already reduced residue.
    #[inline]
    pub fn contains_reduced(&self, x: u32) -> bool {
        self.bits.contains(x as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.elems.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.elems
    }

    /// `{k * s}`.
    pub fn scaled(&self, k: i64) -> Self {
        let m = self.modulus as i128;
        Self::new(
            self.modulus,
            self.iter()
                .map(|s| (s as i128 * k as i128).rem_euclid(m) as i64),
        )
    }

    /// `{s + t}`.
    pub fn shifted(&self, t: i64) -> Self {
        Self::new(self.modulus, self.iter().map(|s| s as i64 + t))
    }

    /// Image under reduction to a divisor of the modulus.
    pub fn reduced(&self, modulus: u32) -> Self {
        debug_assert_eq!(self.modulus % modulus, 0);
        Self::new(modulus, self.iter().map(|s| s as i64))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        Self::new(
            self.modulus,
            self.iter().chain(other.iter()).map(|x| x as i64),
        )
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.elems.clone()
    }
}

impl std::fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} (mod {})", self.elems, self.modulus)
    }
}

impl Serialize for ResidueSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.elems.serialize(s)
    }
}

/// Multiplicative inverse of `a` mod `m`, if it exists.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m))
}
