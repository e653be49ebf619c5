//! Operations on lifted representations that never increase the block size:
//! intersection, product, conic hull and closed convex hull of a union.
//!
//! Each combinator has a `*_lift` companion that maps witnesses for the
//! inputs to a witness for the output.

use super::conic::{AffineForm, Block, ConicRep, RepKind};
use crate::error::{Error, Result};
use crate::exactpoly::Rational;

fn require_set(r: &ConicRep, op: &str) -> Result<()> {
    if r.kind != RepKind::Set {
        return Err(Error::InvalidArgument(format!("{op} expects a set representation")));
    }
    Ok(())
}

/// Re-embeds `r`'s blocks into a representation with `n_vars` coordinates and
/// `n_lifts` lifts: coordinate `i` of `r` becomes `x_map[i]`, lift `j` becomes
/// lift `lift_offset + j`.
fn embed_blocks(
    out: &mut ConicRep,
    r: &ConicRep,
    x_map: &[AffineForm],
    lift_offset: usize,
    prefix: &str,
) {
    for (block, label) in r.blocks.iter().zip(&r.labels) {
        let b = block.map_forms(|f| f.substitute(x_map, lift_offset, out.n_vars, out.n_lifts));
        out.push(b, format!("{prefix}{label}"));
    }
}

/// `{ x : x in K1 and x in K2 }`; lifts are `[y1, y2]`.
pub fn intersect(r1: &ConicRep, r2: &ConicRep) -> Result<ConicRep> {
    require_set(r1, "intersect")?;
    require_set(r2, "intersect")?;
    if r1.n_vars != r2.n_vars {
        return Err(Error::DimensionMismatch(format!(
            "intersect: {} vs {} coordinates",
            r1.n_vars, r2.n_vars
        )));
    }
    let n = r1.n_vars;
    let mut out = ConicRep::new(RepKind::Set, n, r1.n_lifts + r2.n_lifts);
    let x_map: Vec<AffineForm> = (0..n).map(|i| out.x_var(i)).collect();
    embed_blocks(&mut out, r1, &x_map, 0, "L: ");
    embed_blocks(&mut out, r2, &x_map, r1.n_lifts, "R: ");
    Ok(out)
}

pub fn intersect_lift(y1: &[Rational], y2: &[Rational]) -> Vec<Rational> {
    [y1, y2].concat()
}

/// `K1 x K2` in coordinates `[x1, x2]`; lifts are `[y1, y2]`.
pub fn product(r1: &ConicRep, r2: &ConicRep) -> Result<ConicRep> {
    require_set(r1, "product")?;
    require_set(r2, "product")?;
    let (n1, n2) = (r1.n_vars, r2.n_vars);
    let mut out = ConicRep::new(RepKind::Set, n1 + n2, r1.n_lifts + r2.n_lifts);
    let map1: Vec<AffineForm> = (0..n1).map(|i| out.x_var(i)).collect();
    let map2: Vec<AffineForm> = (0..n2).map(|i| out.x_var(n1 + i)).collect();
    embed_blocks(&mut out, r1, &map1, 0, "L: ");
    embed_blocks(&mut out, r2, &map2, r1.n_lifts, "R: ");
    Ok(out)
}

pub fn product_lift(y1: &[Rational], y2: &[Rational]) -> Vec<Rational> {
    [y1, y2].concat()
}

/// Closed conic hull of `K`. Every block `A_0 + sum x_i B_i + sum y_j C_j`
/// is homogenized to `s A_0 + sum x_i B_i + sum y_j C_j`, and the blocks
/// `[[s, x_i], [x_i, t]]` force `x = 0` when `s = 0`. Lifts are `[y, s, t]`.
pub fn cone_hull(r: &ConicRep) -> Result<ConicRep> {
    require_set(r, "cone_hull")?;
    let n = r.n_vars;
    let s_idx = r.n_lifts;
    let t_idx = r.n_lifts + 1;
    let mut out = ConicRep::new(RepKind::Cone, n, r.n_lifts + 2);
    for (block, label) in r.blocks.iter().zip(&r.labels) {
        let b = block.map_forms(|f| {
            let mut g = f.substitute(
                &(0..n).map(|i| out.x_var(i)).collect::<Vec<_>>(),
                0,
                n,
                out.n_lifts,
            );
            g.y[s_idx] = g.constant.clone();
            g.constant = Rational::zero();
            g
        });
        out.push(b, format!("homogenized {label}"));
    }
    for i in 0..n {
        let block = Block::Sym2 {
            a: out.y_var(s_idx),
            b: out.x_var(i),
            c: out.y_var(t_idx),
        };
        out.push(block, format!("[[s, x_{i}], [x_{i}, t]]"));
    }
    Ok(out)
}

/// Witness for the point `scale * x` of the conic hull, given a point `x`
/// of `K` with lift `y` and `scale >= 0`.
pub fn cone_hull_lift(x: &[Rational], y: &[Rational], scale: &Rational) -> Vec<Rational> {
    let t = x
        .iter()
        .map(|xi| scale * xi * xi)
        .max()
        .unwrap_or_default()
        .max(Rational::zero());
    let mut out: Vec<Rational> = y.iter().map(|yj| scale * yj).collect();
    out.push(scale.clone());
    out.push(t);
    out
}

/// `{ l : l = 1 }` in one coordinate.
fn unit_point() -> ConicRep {
    let mut r = ConicRep::new(RepKind::Set, 1, 0);
    let e = r.x_var(0).add(&r.constant(Rational::from_int(-1)));
    r.push_zero(e, "lambda = 1");
    r
}

/// Closed convex hull of `K1 u K2`: `{ x : (x, 1) in H(K1) + H(K2) }` with
/// `H(K) = cone_hull(K x {1})`. Lifts are `[x', l', lifts of H(K1), lifts of H(K2)]`
/// where `H(K1)` sees the point `(x', l')` and `H(K2)` sees `(x - x', 1 - l')`.
pub fn union_hull(r1: &ConicRep, r2: &ConicRep) -> Result<ConicRep> {
    require_set(r1, "union_hull")?;
    require_set(r2, "union_hull")?;
    if r1.n_vars != r2.n_vars {
        return Err(Error::DimensionMismatch(format!(
            "union_hull: {} vs {} coordinates",
            r1.n_vars, r2.n_vars
        )));
    }
    let n = r1.n_vars;
    let h1 = cone_hull(&product(r1, &unit_point())?)?;
    let h2 = cone_hull(&product(r2, &unit_point())?)?;
    let base = n + 1;
    let n_lifts = base + h1.n_lifts + h2.n_lifts;
    let mut out = ConicRep::new(RepKind::Set, n, n_lifts);

    let map1: Vec<AffineForm> = (0..=n).map(|i| out.y_var(i)).collect();
    let mut map2: Vec<AffineForm> = (0..n)
        .map(|i| out.x_var(i).add(&out.y_var(i).neg()))
        .collect();
    map2.push(out.constant(Rational::one()).add(&out.y_var(n).neg()));

    // H(K) is a cone; its blocks are substituted directly.
    embed_blocks(&mut out, &as_set(&h1), &map1, base, "K1: ");
    embed_blocks(&mut out, &as_set(&h2), &map2, base + h1.n_lifts, "K2: ");
    Ok(out)
}

fn as_set(r: &ConicRep) -> ConicRep {
    ConicRep {
        kind: RepKind::Set,
        ..r.clone()
    }
}

/// Witness for `lambda * x1 + (1 - lambda) * x2` with `x1 in K1` (lift `y1`),
/// `x2 in K2` (lift `y2`) and `0 <= lambda <= 1`.
pub fn union_hull_lift(
    x1: &[Rational],
    y1: &[Rational],
    x2: &[Rational],
    y2: &[Rational],
    lambda: &Rational,
) -> (Vec<Rational>, Vec<Rational>) {
    let mu = Rational::one() - lambda;
    let point: Vec<Rational> = x1
        .iter()
        .zip(x2)
        .map(|(a, b)| lambda * a + &mu * b)
        .collect();
    let mut lift: Vec<Rational> = x1.iter().map(|a| lambda * a).collect();
    lift.push(lambda.clone());
    let mut k1_point = x1.to_vec();
    k1_point.push(Rational::one());
    let mut k2_point = x2.to_vec();
    k2_point.push(Rational::one());
    lift.extend(cone_hull_lift(&k1_point, &product_lift(y1, &[]), lambda));
    lift.extend(cone_hull_lift(&k2_point, &product_lift(y2, &[]), &mu));
    (point, lift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;
    use crate::repforge::check_point;

    fn point_rep(p: &[Rational]) -> ConicRep {
        let mut r = ConicRep::new(RepKind::Set, p.len(), 0);
        for (i, c) in p.iter().enumerate() {
            let e = r.x_var(i).add(&r.constant(-c));
            r.push_zero(e, format!("x_{i} = {c}").as_str());
        }
        r
    }

    #[test]
    fn cone_of_a_point() {
        let h = cone_hull(&point_rep(&[rat(1, 1)])).unwrap();
        assert_eq!(h.kind, RepKind::Cone);
        let two = rat(2, 1);
        assert!(check_point(&h, &[two.clone()], &cone_hull_lift(&[rat(1, 1)], &[], &two)).unwrap());
        assert!(check_point(&h, &[rat(0, 1)], &[rat(0, 1), rat(0, 1)]).unwrap());
        // s is pinned to x, and [[s, -1], [-1, t]] needs s > 0
        for s in [-2, -1, 0, 1, 2] {
            for t in [0, 1, 5] {
                let y = [rat(s, 1), rat(t, 1)];
                assert!(!check_point(&h, &[rat(-1, 1)], &y).unwrap());
            }
        }
    }

    #[test]
    fn segment_from_two_points() {
        let u = union_hull(&point_rep(&[rat(-1, 1)]), &point_rep(&[rat(1, 1)])).unwrap();
        let half = rat(1, 2);
        let (pt, lift) = union_hull_lift(&[rat(-1, 1)], &[], &[rat(1, 1)], &[], &half);
        assert_eq!(pt, vec![rat(0, 1)]);
        assert!(check_point(&u, &pt, &lift).unwrap());
        assert!(u.max_block_size() <= 2);
    }

    #[test]
    fn dimension_checks() {
        let a = point_rep(&[rat(0, 1)]);
        let b = point_rep(&[rat(0, 1), rat(1, 1)]);
        assert!(intersect(&a, &b).is_err());
        assert!(union_hull(&a, &b).is_err());
        let p = product(&a, &b).unwrap();
        assert_eq!(p.n_vars, 3);
        assert!(check_point(&p, &[rat(0, 1), rat(0, 1), rat(1, 1)], &[]).unwrap());
        let cone = cone_hull(&a).unwrap();
        assert!(intersect(&cone, &cone).is_err());
    }
}
