use std::sync::OnceLock;

use hemisystem::field::FieldCtx;
use hemisystem::geometry::{bilinear_form, quadric_form};
use hemisystem::{build_field, FElem, HemisystemDescriptor, Level};
use proptest::prelude::*;

fn ctx7() -> &'static FieldCtx {
    static CTX: OnceLock<FieldCtx> = OnceLock::new();
    CTX.get_or_init(|| build_field(7, 1).unwrap())
}

fn desc7() -> &'static HemisystemDescriptor {
    static DESC: OnceLock<HemisystemDescriptor> = OnceLock::new();
    DESC.get_or_init(|| HemisystemDescriptor::construct(ctx7(), None).unwrap())
}

const ORDER7: u32 = 117_648;

proptest! {
    #[test]
    fn field_axioms(a in 0..ORDER7, b in 0..ORDER7, c in 0..ORDER7) {
        let ctx = ctx7();
        let (x, y, z) = (FElem::from_exp(a), FElem::from_exp(b), FElem::from_exp(c));
        prop_assert_eq!(ctx.add(x, y), ctx.add(y, x));
        prop_assert_eq!(ctx.add(ctx.add(x, y), z), ctx.add(x, ctx.add(y, z)));
        prop_assert_eq!(ctx.mul(x, ctx.add(y, z)), ctx.add(ctx.mul(x, y), ctx.mul(x, z)));
        prop_assert_eq!(ctx.sub(ctx.add(x, y), y), x);
        prop_assert_eq!(ctx.mul(x, ctx.inv(x).unwrap()), FElem::ONE);
        prop_assert_eq!(ctx.from_vector(ctx.to_vector(x)), x);
    }

    #[test]
    fn traces_are_linear(a in 0..ORDER7, b in 0..ORDER7) {
        let ctx = ctx7();
        let (x, y) = (FElem::from_exp(a), FElem::from_exp(b));
        let t = |v| ctx.trace(v, Level::Top, Level::Base).unwrap();
        prop_assert_eq!(t(ctx.add(x, y)), ctx.add(t(x), t(y)));
        prop_assert_eq!(ctx.frobenius(t(x), 1), t(x));
    }

    #[test]
    fn polarization(a in 0..ORDER7, b in 0..ORDER7) {
        // B(x, y) = Q(x + y) - Q(x) - Q(y)
        let ctx = ctx7();
        let (x, y) = (FElem::from_exp(a), FElem::from_exp(b));
        let rhs = ctx.sub(ctx.sub(quadric_form(ctx, ctx.add(x, y)), quadric_form(ctx, x)), quadric_form(ctx, y));
        prop_assert_eq!(bilinear_form(ctx, x, y), rhs);
    }

    #[test]
    fn d_is_closed(a in 0..ORDER7, k in 0u32..7) {
        let ctx = ctx7();
        let desc = desc7();
        let x = FElem::from_exp(a);
        let inside = desc.contains(x).unwrap();
        let scalar = ctx.gamma_pow((k as i64) * ctx.params().proj_points() as i64);
        prop_assert_eq!(desc.contains(ctx.mul(scalar, x)).unwrap(), inside);
        prop_assert_eq!(desc.contains(ctx.neg(x)).unwrap(), inside);
        prop_assert_eq!(desc.contains(ctx.frobenius(x, 2)).unwrap(), inside);
        prop_assert_eq!(desc.contains(ctx.mul(ctx.gamma_pow(228), x)).unwrap(), inside);
        if inside {
            prop_assert!(quadric_form(ctx, x).is_zero());
        }
    }
}
