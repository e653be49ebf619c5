//! Exact nonnegativity decisions for univariate polynomials on closed intervals.
//!
//! A polynomial changes sign only at roots of odd multiplicity, so `p >= 0` on
//! `[lo, hi]` iff the endpoints are nonnegative, the odd-multiplicity part of
//! `p` has no root in `(lo, hi)`, and `p` is positive at one non-root interior
//! sample. Roots are counted with Sturm sequences.

use serde::{Deserialize, Serialize};

use super::{Rational, UniPoly};
use crate::error::{Error, Result};

/// Signed remainder sequence `p, p', -rem(p, p'), ...`.
pub fn sturm_sequence(p: &UniPoly) -> Vec<UniPoly> {
    let mut seq = Vec::new();
    if p.is_zero() {
        return seq;
    }
    seq.push(p.clone());
    let mut prev = p.clone();
    let mut cur = p.derivative();
    while !cur.is_zero() {
        let (_, r) = prev.div_rem(&cur);
        seq.push(cur.clone());
        prev = cur;
        cur = -r;
    }
    seq
}

fn sign_variations(seq: &[UniPoly], x: &Rational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|q| q.eval(x).signum())
        .filter(|s| *s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`.
pub fn count_roots_open(p: &UniPoly, lo: &Rational, hi: &Rational) -> usize {
    if lo >= hi || p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let q = p.squarefree_part();
    let seq = sturm_sequence(&q);
    // V(lo) - V(hi) counts roots in (lo, hi] for a square-free polynomial.
    let half_open = sign_variations(&seq, lo) - sign_variations(&seq, hi);
    if q.eval(hi).is_zero() {
        half_open - 1
    } else {
        half_open
    }
}

/// Evidence that a polynomial is nonnegative on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalCert {
    pub poly: UniPoly,
    pub lo: Rational,
    pub hi: Rational,
    pub squarefree_part: UniPoly,
    /// Distinct roots of `poly` in `(lo, hi)`.
    pub root_count_interior: usize,
    /// Distinct odd-multiplicity roots of `poly` in `(lo, hi)`; zero in an accepted cert.
    pub odd_root_count_interior: usize,
    pub endpoint_values: (Rational, Rational),
    /// Interior non-root point and the (positive) value there; absent for
    /// degenerate intervals and the zero polynomial.
    pub sample: Option<(Rational, Rational)>,
}

impl IntervalCert {
    /// Recomputes every field from `poly`, `lo`, `hi` and checks acceptance.
    pub fn recheck(&self) -> bool {
        match nonneg_on_interval(&self.poly, &self.lo, &self.hi) {
            Ok(Nonnegativity::Certified(fresh)) => fresh == *self,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nonnegativity {
    Certified(IntervalCert),
    /// `poly(witness) = value < 0`.
    Refuted { witness: Rational, value: Rational },
}

impl Nonnegativity {
    pub fn is_certified(&self) -> bool {
        matches!(self, Nonnegativity::Certified(_))
    }

    pub fn cert(self) -> Option<IntervalCert> {
        match self {
            Nonnegativity::Certified(c) => Some(c),
            Nonnegativity::Refuted { .. } => None,
        }
    }
}

/// Decides `p >= 0` on `[lo, hi]`.
pub fn nonneg_on_interval(p: &UniPoly, lo: &Rational, hi: &Rational) -> Result<Nonnegativity> {
    if lo > hi {
        return Err(Error::InvalidInterval {
            lo: Box::new(lo.clone()),
            hi: Box::new(hi.clone()),
        });
    }
    let at_lo = p.eval(lo);
    let at_hi = p.eval(hi);
    if at_lo.is_negative() {
        return Ok(refuted(p, lo.clone()));
    }
    if at_hi.is_negative() {
        return Ok(refuted(p, hi.clone()));
    }
    let squarefree_part = p.squarefree_part();
    let root_count_interior = count_roots_open(&squarefree_part, lo, hi);
    let odd = p.odd_multiplicity_part();
    let odd_root_count_interior = count_roots_open(&odd, lo, hi);

    if odd_root_count_interior > 0 {
        return Ok(refuted(p, find_negative(p, &odd, lo.clone(), hi.clone())));
    }

    let sample = if p.is_zero() || lo == hi {
        None
    } else {
        let x = non_root_point(p, lo, hi);
        let value = p.eval(&x);
        if value.is_negative() {
            return Ok(Nonnegativity::Refuted { witness: x, value });
        }
        Some((x, value))
    };

    Ok(Nonnegativity::Certified(IntervalCert {
        poly: p.clone(),
        lo: lo.clone(),
        hi: hi.clone(),
        squarefree_part,
        root_count_interior,
        odd_root_count_interior,
        endpoint_values: (at_lo, at_hi),
        sample,
    }))
}

fn refuted(p: &UniPoly, witness: Rational) -> Nonnegativity {
    let value = p.eval(&witness);
    debug_assert!(value.is_negative());
    Nonnegativity::Refuted { witness, value }
}

/// First point of the dyadic refinement of `(lo, hi)` where `p` is nonzero.
/// `p` must be nonzero and `lo < hi`.
fn non_root_point(p: &UniPoly, lo: &Rational, hi: &Rational) -> Rational {
    let width = hi - lo;
    let mut denom = 2i64;
    loop {
        for k in (1..denom).step_by(2) {
            let x = lo + &width * Rational::new(k, denom);
            if !p.eval(&x).is_zero() {
                return x;
            }
        }
        denom *= 2;
    }
}

/// Bisection towards an odd-multiplicity root of `p` inside `(lo, hi)` until a
/// point with `p < 0` shows up. `odd` must have a root in `(lo, hi)`.
fn find_negative(p: &UniPoly, odd: &UniPoly, mut lo: Rational, mut hi: Rational) -> Rational {
    loop {
        let mid = lo.midpoint(&hi);
        if p.eval(&mid).is_negative() {
            return mid;
        }
        if count_roots_open(odd, &lo, &mid) > 0 {
            hi = mid;
        } else if count_roots_open(odd, &mid, &hi) > 0 {
            lo = mid;
        } else {
            // mid is itself the sign-changing root: probe both sides.
            let mut eps = (&hi - &lo) / Rational::from_int(4);
            loop {
                for x in [&mid - &eps, &mid + &eps] {
                    if p.eval(&x).is_negative() {
                        return x;
                    }
                }
                eps = eps / Rational::from_int(2);
            }
        }
        if p.eval(&lo).is_negative() {
            return lo;
        }
        if p.eval(&hi).is_negative() {
            return hi;
        }
    }
}

/// First polynomial of a family that fails on `[-a, a]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiusRefutation {
    pub index: usize,
    pub witness: Rational,
    pub value: Rational,
}

impl std::fmt::Display for RadiusRefutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "polynomial #{} takes value {} at t = {}",
            self.index, self.value, self.witness
        )
    }
}

/// Certifies every polynomial of `ps` on `[-a, a]`. Requires `a >= 0`.
pub fn certify_all(
    ps: &[UniPoly],
    a: &Rational,
) -> Result<std::result::Result<Vec<IntervalCert>, RadiusRefutation>> {
    let lo = -a;
    let mut certs = Vec::with_capacity(ps.len());
    for (index, p) in ps.iter().enumerate() {
        match nonneg_on_interval(p, &lo, a)? {
            Nonnegativity::Certified(c) => certs.push(c),
            Nonnegativity::Refuted { witness, value } => {
                return Ok(Err(RadiusRefutation {
                    index,
                    witness,
                    value,
                }))
            }
        }
    }
    Ok(Ok(certs))
}

/// Largest radius `a <= cap` (up to `precision`) on which every polynomial
/// of `ps` is certified nonnegative over `[-a, a]`.
///
/// Bisection on the exact predicate: if `cap` itself passes it is returned,
/// otherwise the returned value always passes and lies within `precision`
/// of a failing radius.
pub fn certified_radius(ps: &[UniPoly], cap: &Rational, precision: &Rational) -> Result<Rational> {
    if !cap.is_positive() {
        return Err(Error::InvalidArgument(format!("cap must be positive, got {cap}")));
    }
    if !precision.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "precision must be positive, got {precision}"
        )));
    }
    for (index, p) in ps.iter().enumerate() {
        let value = p.coeff(0);
        if !value.is_positive() {
            return Err(Error::NotPositiveAtBase { index, value });
        }
    }
    let valid = |a: &Rational| -> Result<bool> { Ok(certify_all(ps, a)?.is_ok()) };
    if valid(cap)? {
        return Ok(cap.clone());
    }
    let mut lo = Rational::zero();
    let mut hi = cap.clone();
    while lo.is_zero() || &hi - &lo > *precision {
        let mid = lo.midpoint(&hi);
        if valid(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // The simplest rational in the final bracket lands exactly on rational suprema.
    let simple = simplest_between(&lo, &hi);
    if valid(&simple)? {
        lo = simple;
    }
    Ok(lo)
}

/// Rational with the smallest denominator (then numerator) in the open
/// interval `(lo, hi)`, for `0 <= lo < hi`.
pub(crate) fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(!lo.is_negative() && lo < hi);
    let floor = Rational::from(lo.numer() / lo.denom());
    let next = &floor + Rational::one();
    if &next < hi {
        return next;
    }
    let frac_lo = lo - &floor;
    let frac_hi = hi - &floor;
    // invert: x in (frac_lo, frac_hi) iff 1/x in (1/frac_hi, 1/frac_lo)
    let inv_lo = frac_hi.recip();
    let inner = if frac_lo.is_zero() {
        Rational::from(inv_lo.numer() / inv_lo.denom()) + Rational::one()
    } else {
        simplest_between(&inv_lo, &frac_lo.recip())
    };
    floor + inner.recip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn sturm_counts_simple_roots() {
        // (t-1)(t-2)(t-3)
        let q = p(&[-6, 11, -6, 1]);
        assert_eq!(count_roots_open(&q, &rat(0, 1), &rat(4, 1)), 3);
        assert_eq!(count_roots_open(&q, &rat(1, 1), &rat(3, 1)), 1);
        assert_eq!(count_roots_open(&q, &rat(1, 1), &rat(2, 1)), 0);
        assert_eq!(count_roots_open(&q, &rat(3, 2), &rat(5, 2)), 1);
        assert_eq!(count_roots_open(&p(&[1, 0, 1]), &rat(-9, 1), &rat(9, 1)), 0);
    }

    #[test]
    fn one_minus_t_squared_on_unit_interval() {
        let cert = nonneg_on_interval(&p(&[1, 0, -1]), &rat(-1, 1), &rat(1, 1))
            .unwrap()
            .cert()
            .unwrap();
        assert_eq!(cert.odd_root_count_interior, 0);
        assert_eq!(cert.root_count_interior, 0);
        assert_eq!(cert.endpoint_values, (rat(0, 1), rat(0, 1)));
        assert!(cert.recheck());
    }

    #[test]
    fn square_accepted_with_double_root() {
        let cert = nonneg_on_interval(&p(&[0, 0, 1]), &rat(-1, 1), &rat(1, 1))
            .unwrap()
            .cert()
            .unwrap();
        assert_eq!(cert.root_count_interior, 1);
        assert_eq!(cert.odd_root_count_interior, 0);
    }

    #[test]
    fn sign_change_refuted() {
        let q = UniPoly::new(vec![rat(-1, 2), rat(1, 1)]);
        match nonneg_on_interval(&q, &rat(0, 1), &rat(1, 1)).unwrap() {
            Nonnegativity::Refuted { witness, value } => {
                assert_eq!(witness, rat(0, 1));
                assert_eq!(value, rat(-1, 2));
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn negative_between_zero_endpoints() {
        // t(t-1) vanishes at both ends and is negative inside.
        let q = p(&[0, -1, 1]);
        match nonneg_on_interval(&q, &rat(0, 1), &rat(1, 1)).unwrap() {
            Nonnegativity::Refuted { value, .. } => assert!(value.is_negative()),
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn interior_dip_refuted() {
        // (t - 1/3)(t - 1/2) * 6 is positive at 0 and 1 but negative between.
        let q = p(&[1, -5, 6]);
        match nonneg_on_interval(&q, &rat(0, 1), &rat(1, 1)).unwrap() {
            Nonnegativity::Refuted { witness, value } => {
                assert!(value.is_negative());
                assert_eq!(q.eval(&witness), value);
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn odd_root_exactly_at_midpoint() {
        // t(t - 1/2)(t - 1): all roots on the bisection grid of [0, 1]
        let q = UniPoly::new(vec![rat(0, 1), rat(1, 2), rat(-3, 2), rat(1, 1)]);
        match nonneg_on_interval(&q, &rat(0, 1), &rat(1, 1)).unwrap() {
            Nonnegativity::Refuted { witness, value } => {
                assert!(value.is_negative());
                assert!(witness > rat(1, 2));
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn zero_polynomial_and_degenerate_interval() {
        assert!(nonneg_on_interval(&UniPoly::zero(), &rat(-3, 1), &rat(5, 1))
            .unwrap()
            .is_certified());
        assert!(nonneg_on_interval(&p(&[0, 1]), &rat(0, 1), &rat(0, 1))
            .unwrap()
            .is_certified());
        assert!(matches!(
            nonneg_on_interval(&p(&[1]), &rat(1, 1), &rat(0, 1)),
            Err(Error::InvalidInterval { .. })
        ));
    }

    #[test]
    fn radius_examples() {
        let one_minus = p(&[1, 0, -1]);
        assert_eq!(
            certified_radius(&[one_minus.clone()], &rat(10, 1), &rat(1, 100)).unwrap(),
            rat(1, 1)
        );
        assert_eq!(
            certified_radius(&[one_minus], &rat(1, 2), &rat(1, 100)).unwrap(),
            rat(1, 2)
        );
        assert_eq!(
            certified_radius(&[p(&[1])], &rat(3, 1), &rat(1, 100)).unwrap(),
            rat(3, 1)
        );
        assert!(matches!(
            certified_radius(&[p(&[0, 1])], &rat(1, 1), &rat(1, 100)),
            Err(Error::NotPositiveAtBase { index: 0, .. })
        ));
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&rat(99, 100), &rat(21, 20)), rat(1, 1));
        assert_eq!(simplest_between(&rat(0, 1), &rat(1, 1)), rat(1, 2));
        assert_eq!(simplest_between(&rat(1, 3), &rat(1, 2)), rat(2, 5));
        assert_eq!(simplest_between(&rat(3, 1), &rat(7, 2)), rat(10, 3));
        assert_eq!(simplest_between(&rat(0, 1), &rat(1, 10)), rat(1, 11));
    }

    #[test]
    fn radius_brackets_supremum() {
        // 1 - 4t^2 >= 0 iff |t| <= 1/2, approached from cap 1 by bisection
        let q = p(&[1, 0, -4]);
        let precision = rat(1, 1000);
        let a = certified_radius(std::slice::from_ref(&q), &rat(3, 1), &precision).unwrap();
        assert!(a <= rat(1, 2));
        assert!(rat(1, 2) - &a <= precision);
    }
}
