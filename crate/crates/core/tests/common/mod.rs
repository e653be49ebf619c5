#![allow(dead_code)]

use sorep::exactpoly::{BiPoly, Rational, UniPoly};
use sorep::tensorcalc::{taylor_remainder, DecompTerm, TensorDecomposition};

pub fn r(n: i64, d: i64) -> Rational {
    sorep::exactpoly::rat(n, d)
}

pub fn poly(c: &[i64]) -> UniPoly {
    UniPoly::from_ints(c)
}

pub fn ratpoly(c: &[Rational]) -> UniPoly {
    UniPoly::new(c.to_vec())
}

/// `t^2 - t^6`
pub fn x2_minus_x6() -> UniPoly {
    poly(&[0, 0, 1, 0, 0, 0, -1])
}

/// `a^i + u^i`
pub fn p_i(a: &Rational, i: usize) -> UniPoly {
    &UniPoly::constant(a.pow(i as u32)) + &UniPoly::monomial(Rational::one(), i)
}

/// `a^j - v^j`
pub fn q_j(a: &Rational, j: usize) -> UniPoly {
    &UniPoly::constant(a.pow(j as u32)) - &UniPoly::monomial(Rational::one(), j)
}

/// Hand-made decomposition of the remainder `1 - u^4 - 2u^3v - 3u^2v^2 - 4uv^3 - 5v^4`
/// of `t^2 - t^6`:
/// `2 p3 q1 + 3 p2 q2 + 4 p1 q3 + p4 + q4`, with
/// `p4 = 1/2 - 4a^4 - 4a^3 u - 3a^2 u^2 - 2a u^3 - u^4` and
/// `q4 = 1/2 - 5a^4 + 2a^3 v + 3a^2 v^2 + 4a v^3 - 5v^4`.
pub fn handmade_decomposition(a: &Rational) -> TensorDecomposition {
    let k = |n: i64| Rational::from_int(n);
    let half = r(1, 2);
    let p4 = ratpoly(&[
        &half - k(4) * a.pow(4),
        -(k(4) * a.pow(3)),
        -(k(3) * a.pow(2)),
        -(k(2) * a.clone()),
        k(-1),
    ]);
    let q4 = ratpoly(&[
        &half - k(5) * a.pow(4),
        k(2) * a.pow(3),
        k(3) * a.pow(2),
        k(4) * a.clone(),
        k(-5),
    ]);
    let terms = vec![
        DecompTerm::new(0, 0, p_i(a, 3).scale(&k(2)), q_j(a, 1)),
        DecompTerm::new(0, 0, p_i(a, 2).scale(&k(3)), q_j(a, 2)),
        DecompTerm::new(0, 0, p_i(a, 1).scale(&k(4)), q_j(a, 3)),
        DecompTerm::new(0, 0, p4, UniPoly::one()),
        DecompTerm::new(0, 0, UniPoly::one(), q4),
    ];
    TensorDecomposition {
        flat_order: 0,
        terms,
        base: taylor_remainder(&x2_minus_x6()),
    }
}

/// `sum_{i,j} c_ij u^i v^j` from a list of `(i, j, c)`.
pub fn bipoly(terms: &[(u32, u32, i64)]) -> BiPoly {
    BiPoly::from_terms(terms.iter().map(|&(i, j, c)| ((i, j), Rational::from_int(c))))
}

use sorep::repforge::{Block, ConicRep, RepKind};

/// `(x - cx)^2 + (y - cy)^2 <= rho^2` as `[[rho + x - cx, y - cy], [y - cy, rho - x + cx]] >= 0`.
pub fn disk(cx: &Rational, cy: &Rational, rho: &Rational) -> ConicRep {
    let mut rep = ConicRep::new(RepKind::Set, 2, 0);
    let dx = rep.x_var(0).add(&rep.constant(-cx));
    let dy = rep.x_var(1).add(&rep.constant(-cy));
    let block = Block::Sym2 {
        a: rep.constant(rho.clone()).add(&dx),
        b: dy,
        c: rep.constant(rho.clone()).add(&dx.neg()),
    };
    rep.push(block, "disk");
    rep
}

pub fn in_disk(p: &[Rational], cx: &Rational, cy: &Rational, rho: &Rational) -> bool {
    let dx = &p[0] - cx;
    let dy = &p[1] - cy;
    &dx * &dx + &dy * &dy <= rho * rho
}

/// `y >= x^2` with one lift `z`: `[[1, x], [x, z]] >= 0` and `y - z >= 0`.
pub fn parabola_epigraph() -> ConicRep {
    let mut rep = ConicRep::new(RepKind::Set, 2, 1);
    let block = Block::Sym2 {
        a: rep.constant(Rational::one()),
        b: rep.x_var(0),
        c: rep.y_var(0),
    };
    rep.push(block, "z >= x^2");
    let slack = rep.x_var(1).add(&rep.y_var(0).neg());
    rep.push_nonneg(slack, "y >= z");
    rep
}

pub fn parabola_lift(p: &[Rational]) -> Vec<Rational> {
    vec![&p[0] * &p[0]]
}

/// `{ c }` for a single point `c`.
pub fn point(c: &[Rational]) -> ConicRep {
    let mut rep = ConicRep::new(RepKind::Set, c.len(), 0);
    for (i, ci) in c.iter().enumerate() {
        let e = rep.x_var(i).add(&rep.constant(-ci));
        rep.push_zero(e, &format!("x_{i} = {ci}"));
    }
    rep
}

/// `n` evenly spaced rationals from `lo` to `hi`.
pub fn ticks(lo: &Rational, hi: &Rational, n: usize) -> Vec<Rational> {
    let step = (hi - lo) / Rational::from_int(n as i64 - 1);
    (0..n).map(|k| lo + &step * Rational::from_int(k as i64)).collect()
}

pub fn grid(lo: &Rational, hi: &Rational, n: usize) -> Vec<Vec<Rational>> {
    let t = ticks(lo, hi, n);
    t.iter()
        .flat_map(|x| t.iter().map(move |y| vec![x.clone(), y.clone()]))
        .collect()
}
