//! Shared fixtures for the criterion benchmarks.

use hemisystem::{build_field, FieldCtx, HemisystemDescriptor};

/// Field and default descriptor for `q = p`.
pub fn fixture(q: u64) -> (FieldCtx, HemisystemDescriptor) {
    let ctx = build_field(q, 1).expect("supported field");
    let desc = HemisystemDescriptor::construct(&ctx, None).expect("q ≡ 3 (mod 4)");
    (ctx, desc)
}
