//! PG(5,q) over F_{q^6}, the elliptic quadric Q⁻(5,q) given by
//! `Q(x) = Tr_{q^3/q}(x^{q^3+1})`, its polarity, and its totally singular lines.
//!
//! A projective point `<gamma^c>` is identified by its canonical exponent
//! `c mod (q^6-1)/(q-1)`, the smallest exponent in its F_q^* coset.

use std::io::{self, Write};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::field::{FElem, FieldCtx, Level};

/// A point of PG(5,q) by canonical exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint(pub u32);

impl ProjPoint {
    pub fn of(ctx: &FieldCtx, x: FElem) -> Option<ProjPoint> {
        let stride = ctx.params().proj_points();
        x.exp().map(|e| ProjPoint((e as u64 % stride) as u32))
    }

    /// The representative vector `gamma^c`.
    pub fn rep(self) -> FElem {
        FElem::from_exp(self.0)
    }
}

/// `Q(x) = Tr_{q^3/q}(x^{q^3+1})`.
pub fn quadric_form(ctx: &FieldCtx, x: FElem) -> FElem {
    let norm = ctx.pow(x, ctx.params().q3 + 1);
    ctx.trace(norm, Level::Cubic, Level::Base)
        .expect("norm lies in F_{q^3}")
}

/// `B(x, y) = Tr_{q^6/q}(x y^{q^3})`, computed from Frobenius powers.
pub fn bilinear_form(ctx: &FieldCtx, x: FElem, y: FElem) -> FElem {
    let z = ctx.mul(x, ctx.frobenius(y, 3));
    ctx.trace(z, Level::Top, Level::Base)
        .expect("every element lies in the top field")
}

/// `B(gamma^a, gamma^b) == 0` by table lookup.
#[inline]
fn orthogonal_exp(ctx: &FieldCtx, a: u32, b_q3: u32) -> bool {
    let order = ctx.params().order() as u32;
    let s = a as u64 + b_q3 as u64;
    let idx = if s >= order as u64 {
        s - order as u64
    } else {
        s
    };
    ctx.base_trace_is_zero(idx as u32)
}

fn times_q3(ctx: &FieldCtx, e: u32) -> u32 {
    let p = ctx.params();
    ((e as u64 * p.q3) % p.order()) as u32
}

/// True iff `R` lies in the polar hyperplane of `P`.
pub fn perp_contains(ctx: &FieldCtx, p: ProjPoint, r: ProjPoint) -> bool {
    orthogonal_exp(ctx, p.0, times_q3(ctx, r.0))
}

/// Every point of PG(5,q) on which `Q` vanishes, in increasing order.
pub fn quadric_points(ctx: &FieldCtx) -> Vec<ProjPoint> {
    let total = ctx.params().proj_points() as u32;
    (0..total)
        .into_par_iter()
        .filter(|&c| quadric_form(ctx, FElem::from_exp(c)).is_zero())
        .map(ProjPoint)
        .collect()
}

/// The `q + 1` points of the line through `<x>` and `<y>`, sorted.
pub fn span_line(ctx: &FieldCtx, x: ProjPoint, y: ProjPoint) -> Vec<u32> {
    let params = ctx.params();
    let stride = params.proj_points();
    let mut pts = Vec::with_capacity(params.q as usize + 1);
    pts.push(x.0);
    pts.push(y.0);
    for k in 0..params.q - 1 {
        let scaled = FElem::from_exp((y.0 as u64 + k * stride) as u32);
        let z = ctx.add(x.rep(), scaled);
        let pt = ProjPoint::of(ctx, z).expect("distinct points span a line");
        pts.push(pt.0);
    }
    pts.sort_unstable();
    pts
}

/// Lines stored as consecutive sorted point tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineSet {
    width: usize,
    flat: Vec<u32>,
}

impl LineSet {
    pub fn from_lines(width: usize, lines: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let mut flat = Vec::new();
        for l in lines {
            assert_eq!(l.len(), width);
            flat.extend(l);
        }
        LineSet { width, flat }
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    /// Points per line.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, u32> {
        self.flat.chunks_exact(self.width)
    }

    pub fn par_iter(&self) -> rayon::slice::ChunksExact<'_, u32> {
        self.flat.par_chunks_exact(self.width)
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.flat[i * self.width..(i + 1) * self.width]
    }

    /// One line per row, point ids separated by spaces.
    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        for line in self.iter() {
            let row: Vec<String> = line.iter().map(u32::to_string).collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Enumerates the totally singular lines of the quadric. For every singular
/// `P` the singular points of `P^perp` are scanned, and the line through a
/// collinear pair is kept only when the pair are its two smallest points, so
/// every line is produced once. The result is sorted and checked for
/// duplicates.
pub fn enumerate_lines(ctx: &FieldCtx, points: &[ProjPoint]) -> LineSet {
    let width = ctx.params().q as usize + 1;
    let scaled: Vec<u32> = points.iter().map(|r| times_q3(ctx, r.0)).collect();
    let per_point: Vec<Vec<u32>> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let p = points[i];
            let mut out = Vec::new();
            for j in i + 1..points.len() {
                if !orthogonal_exp(ctx, p.0, scaled[j]) {
                    continue;
                }
                let r = points[j];
                let line = span_line(ctx, p, r);
                if line[0] == p.0 && line[1] == r.0 {
                    out.extend(line);
                }
            }
            out
        })
        .collect();
    let mut lines: Vec<&[u32]> = per_point
        .iter()
        .flat_map(|v| v.chunks_exact(width))
        .collect();
    lines.sort_unstable();
    let before = lines.len();
    lines.dedup();
    assert_eq!(before, lines.len(), "line produced twice");
    LineSet {
        width,
        flat: lines.concat(),
    }
}

/// The quadric with its points, membership bitset and lines.
#[derive(Debug, Clone)]
pub struct Geometry {
    points: Vec<ProjPoint>,
    on_quadric: FixedBitSet,
    lines: LineSet,
}

impl Geometry {
    pub fn build(ctx: &FieldCtx) -> Self {
        let points = quadric_points(ctx);
        let lines = enumerate_lines(ctx, &points);
        Self::from_parts(ctx, points, lines)
    }

    /// Builds without enumerating lines.
    pub fn points_only(ctx: &FieldCtx) -> Self {
        let points = quadric_points(ctx);
        Self::from_parts(ctx, points, LineSet::from_lines(ctx.q() as usize + 1, []))
    }

    fn from_parts(ctx: &FieldCtx, points: Vec<ProjPoint>, lines: LineSet) -> Self {
        let mut on_quadric = FixedBitSet::with_capacity(ctx.params().proj_points() as usize);
        for p in &points {
            on_quadric.insert(p.0 as usize);
        }
        Geometry {
            points,
            on_quadric,
            lines,
        }
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn lines(&self) -> &LineSet {
        &self.lines
    }

    pub fn is_singular(&self, p: ProjPoint) -> bool {
        self.on_quadric.contains(p.0 as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quadric_form_zero_and_homogeneity() {
        let ctx = build_field(3, 1).unwrap();
        assert_eq!(quadric_form(&ctx, FElem::ZERO), FElem::ZERO);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let stride = ctx.params().proj_points() as i64;
        for _ in 0..100 {
            let x = ctx.gamma_pow(rng.gen_range(0..728));
            let lambda = ctx.gamma_pow(stride * rng.gen_range(0..2));
            let lhs = quadric_form(&ctx, ctx.mul(lambda, x));
            let rhs = ctx.mul(ctx.mul(lambda, lambda), quadric_form(&ctx, x));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn singular_vectors_q3() {
        // Direct enumeration over all 728 nonzero vectors.
        let ctx = build_field(3, 1).unwrap();
        let zeros = (0..728)
            .filter(|&e| quadric_form(&ctx, FElem::from_exp(e)).is_zero())
            .count();
        assert_eq!(zeros, 224);
    }

    #[test]
    fn bilinear_form_properties() {
        let ctx = build_field(7, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let order = ctx.params().order() as i64;
        for _ in 0..100 {
            let x = ctx.gamma_pow(rng.gen_range(0..order));
            let y = ctx.gamma_pow(rng.gen_range(0..order));
            assert_eq!(bilinear_form(&ctx, x, FElem::ZERO), FElem::ZERO);
            assert_eq!(bilinear_form(&ctx, x, y), bilinear_form(&ctx, y, x));
            let two_q = ctx.mul(ctx.from_int(2), quadric_form(&ctx, x));
            assert_eq!(bilinear_form(&ctx, x, x), two_q);
            // table route agrees with the Frobenius route
            let (px, py) = (
                ProjPoint::of(&ctx, x).unwrap(),
                ProjPoint::of(&ctx, y).unwrap(),
            );
            assert_eq!(
                perp_contains(&ctx, px, py),
                bilinear_form(&ctx, px.rep(), py.rep()).is_zero()
            );
        }
    }

    #[test]
    fn point_counts_q3() {
        let ctx = build_field(3, 1).unwrap();
        let pts = quadric_points(&ctx);
        assert_eq!(pts.len(), 112);
        assert_eq!(364 - pts.len(), 252);
        let all: Vec<ProjPoint> = (0..364).map(ProjPoint).collect();
        for &p in &all {
            let perp = all.iter().filter(|&&r| perp_contains(&ctx, p, r)).count();
            assert_eq!(perp, 121);
        }
        for &p in &pts {
            assert!(perp_contains(&ctx, p, p));
            let cone = pts.iter().filter(|&&r| perp_contains(&ctx, p, r)).count();
            // P itself plus q points on each of its q^2 + 1 lines.
            assert_eq!(cone, 31);
        }
    }

    #[test]
    fn lines_q3() {
        let ctx = build_field(3, 1).unwrap();
        let geo = Geometry::build(&ctx);
        let lines = geo.lines();
        assert_eq!(lines.len(), 280);
        let mut on = vec![0u32; 364];
        for line in lines.iter() {
            assert_eq!(line.len(), 4);
            for &a in line {
                assert!(geo.is_singular(ProjPoint(a)));
                on[a as usize] += 1;
                for &b in line {
                    assert!(perp_contains(&ctx, ProjPoint(a), ProjPoint(b)));
                }
            }
            // re-expanding from any two points gives the same line
            for i in 0..4 {
                for j in i + 1..4 {
                    assert_eq!(
                        span_line(&ctx, ProjPoint(line[i]), ProjPoint(line[j])),
                        line
                    );
                }
            }
        }
        for p in geo.points() {
            assert_eq!(on[p.0 as usize], 10);
        }
    }

    #[test]
    fn line_text_export() {
        let lines = LineSet::from_lines(2, [vec![1, 5], vec![2, 3]]);
        let mut out = Vec::new();
        lines.write_text(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "1 5\n2 3\n");
    }
}
