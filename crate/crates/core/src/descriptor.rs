//! JSON form of a [`HemisystemDescriptor`].
//!
//! Everything except `provenance` is a pure function of `(p, f, d0)` and the
//! index sets, so two runs with the same inputs differ only in the
//! provenance block.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::conic::ConicData;
use crate::construct::{HemisystemDescriptor, Sizes, J1, J2};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::residues::ResidueSet;

pub const DESCRIPTOR_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicSection {
    #[serde(rename = "N")]
    pub n: u32,
    pub d0: u32,
    #[serde(rename = "S")]
    pub s: Vec<u32>,
    #[serde(rename = "IQ")]
    pub i_q: Vec<u32>,
    #[serde(rename = "Is")]
    pub i_s: Vec<u32>,
    #[serde(rename = "In")]
    pub i_n: Vec<u32>,
    #[serde(rename = "X")]
    pub x: Vec<u32>,
    #[serde(rename = "S1")]
    pub s1: Vec<u32>,
    #[serde(rename = "S2")]
    pub s2: Vec<u32>,
}

impl ConicSection {
    fn of(c: &ConicData) -> Self {
        ConicSection {
            n: c.n,
            d0: c.d0,
            s: c.s.to_vec(),
            i_q: c.i_q.to_vec(),
            i_s: c.i_s.to_vec(),
            i_n: c.i_n.to_vec(),
            x: c.x.to_vec(),
            s1: c.s1.to_vec(),
            s2: c.s2.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizesSection {
    #[serde(rename = "I")]
    pub index_set: u64,
    #[serde(rename = "D")]
    pub d: u64,
    #[serde(rename = "M")]
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl Provenance {
    pub fn now(tool_version: &str) -> Self {
        Provenance {
            tool_version: tool_version.to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorFile {
    pub version: u32,
    pub p: u64,
    pub f: u32,
    pub q: u64,
    #[serde(rename = "N")]
    pub n: u32,
    pub polynomial: Vec<u32>,
    pub d0: u32,
    pub conic: ConicSection,
    #[serde(rename = "J1")]
    pub j1: Vec<i64>,
    #[serde(rename = "J2")]
    pub j2: Vec<i64>,
    #[serde(rename = "I")]
    pub i: Vec<u32>,
    #[serde(rename = "J")]
    pub j: Vec<u32>,
    pub sizes: SizesSection,
    pub provenance: Provenance,
}

impl DescriptorFile {
    pub fn new(desc: &HemisystemDescriptor, provenance: Provenance) -> Self {
        let Sizes { index_set, d, m } = desc.expected_sizes();
        DescriptorFile {
            version: DESCRIPTOR_VERSION,
            p: desc.p,
            f: desc.f,
            q: desc.q,
            n: desc.n,
            polynomial: desc.polynomial.clone(),
            d0: desc.conic.d0,
            conic: ConicSection::of(&desc.conic),
            j1: J1.to_vec(),
            j2: J2.to_vec(),
            i: desc.i.to_vec(),
            j: desc.j.to_vec(),
            sizes: SizesSection { index_set, d, m },
            provenance,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DescriptorFile =
            serde_json::from_str(text).map_err(|e| Error::Descriptor(e.to_string()))?;
        if file.version != DESCRIPTOR_VERSION {
            return Err(Error::Descriptor(format!(
                "unsupported version {}",
                file.version
            )));
        }
        Ok(file)
    }

    /// Rebuilds the in-memory descriptor against `ctx`. The field, polynomial
    /// and conic data must match what `ctx` and `d0` produce; `I` and `J` are
    /// taken verbatim so that edited descriptors can be verified.
    pub fn to_descriptor(&self, ctx: &FieldCtx) -> Result<HemisystemDescriptor> {
        let params = ctx.params();
        if (self.p, self.f, self.q, self.n as u64) != (params.p, params.f, params.q, params.n) {
            return Err(Error::Descriptor("field parameters do not match".into()));
        }
        if self.polynomial != ctx.polynomial_full() {
            return Err(Error::Descriptor(
                "polynomial differs from the canonical primitive polynomial".into(),
            ));
        }
        let conic = ConicData::build(ctx, Some(self.d0))?;
        if ConicSection::of(&conic) != self.conic {
            return Err(Error::Descriptor(
                "conic section does not match the field".into(),
            ));
        }
        let modulus = 4 * self.n;
        let residues = |v: &[u32], name: &str| -> Result<ResidueSet> {
            if let Some(r) = v.iter().find(|&&r| r >= modulus) {
                return Err(Error::Descriptor(format!("{name} contains {r} >= 4N")));
            }
            let set = ResidueSet::new(modulus, v.iter().map(|&r| r as i64));
            if set.len() != v.len() {
                return Err(Error::Descriptor(format!("{name} has repeated residues")));
            }
            Ok(set)
        };
        Ok(HemisystemDescriptor {
            p: self.p,
            f: self.f,
            q: self.q,
            n: self.n,
            polynomial: self.polynomial.clone(),
            conic,
            i: residues(&self.i, "I")?,
            j: residues(&self.j, "J")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn round_trip_q3() {
        let ctx = build_field(3, 1).unwrap();
        let desc = HemisystemDescriptor::construct(&ctx, None).unwrap();
        let file = DescriptorFile::new(&desc, Provenance::now("test"));
        let text = file.to_json();
        let back = DescriptorFile::from_json(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.to_descriptor(&ctx).unwrap(), desc);

        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in [
            "version",
            "p",
            "f",
            "q",
            "N",
            "polynomial",
            "d0",
            "conic",
            "J1",
            "J2",
            "I",
            "J",
            "sizes",
            "provenance",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["polynomial"].as_array().unwrap().len(), 7);
        assert_eq!(v["sizes"]["M"], 56);
        assert_eq!(v["conic"]["S"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn rejects_mismatches() {
        let ctx = build_field(3, 1).unwrap();
        let desc = HemisystemDescriptor::construct(&ctx, None).unwrap();
        let mut file = DescriptorFile::new(&desc, Provenance::now("test"));
        file.i.push(60);
        assert!(file.to_descriptor(&ctx).is_err());
        let mut file = DescriptorFile::new(&desc, Provenance::now("test"));
        file.polynomial[0] = (file.polynomial[0] + 1) % 3;
        assert!(file.to_descriptor(&ctx).is_err());
        assert!(DescriptorFile::from_json("{}").is_err());
    }
}
