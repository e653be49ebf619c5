mod common;

use num_traits::{One, Signed};
use proptest::prelude::*;

use common::*;
use sorep::certcheck::{build_bundle, verify_bundle, BuildOptions};
use sorep::exactpoly::{
    certified_radius, certify_all, count_roots_open, nonneg_on_interval, BiPoly, Nonnegativity,
    Rational, UniPoly,
};
use sorep::obstruct::{condition_star, condition_star_with, FourierMotzkin, PointSet, Simplex};
use sorep::registry::AutoStrategy;
use sorep::repforge::{check_point, tangent_line, FactorTerm};
use sorep::tensorcalc::{
    delta, positive_residue_decompose, s_polynomial, strict_decompose, tangent_tensor,
    taylor_remainder,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| r(n, d))
}

fn unipoly(max_deg: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-6i64..=6, 0..=max_deg + 1).prop_map(|c| poly(&c))
}

fn is_canonical_rational(x: &Rational) -> bool {
    use num_integer::Integer;
    x.denom().is_positive() && x.numer().gcd(x.denom()).is_one()
}

fn is_canonical_poly(p: &UniPoly) -> bool {
    p.coeffs().last().is_none_or(|c| !c.is_zero()) && p.coeffs().iter().all(is_canonical_rational)
}

fn is_canonical_bipoly(p: &BiPoly) -> bool {
    p.terms().all(|(_, c)| !c.is_zero() && is_canonical_rational(c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arithmetic_stays_canonical(p in unipoly(5), q in unipoly(5), x in rational(), y in rational()) {
        for z in [&x + &y, &x - &y, &x * &y] {
            prop_assert!(is_canonical_rational(&z));
        }
        if !y.is_zero() {
            prop_assert!(is_canonical_rational(&(&x / &y)));
        }
        for s in [&p + &q, &p - &q, &p * &q, p.derivative(), p.scale(&x)] {
            prop_assert!(is_canonical_poly(&s));
            prop_assert_eq!(UniPoly::new(s.coeffs().to_vec()), s.clone());
        }
        if !q.is_zero() {
            let (quo, rem) = p.div_rem(&q);
            prop_assert!(is_canonical_poly(&quo) && is_canonical_poly(&rem));
            prop_assert_eq!(&(&quo * &q) + &rem, p.clone());
        }
        let b = &BiPoly::tensor(&p, &q) - &BiPoly::tensor(&q, &p);
        prop_assert!(is_canonical_bipoly(&b));
    }

    #[test]
    fn rational_text_round_trip(x in rational()) {
        let back: Rational = x.to_string().parse().unwrap();
        prop_assert_eq!(&back, &x);
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), x);
    }

    #[test]
    fn poly_json_round_trip(p in unipoly(8)) {
        let text = sorep::json::to_canonical_string(&p).unwrap();
        let back: UniPoly = sorep::json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(sorep::json::to_canonical_string(&back).unwrap(), text);
    }

    /// Roots planted with multiplicities; Sturm counts distinct roots in an open interval.
    #[test]
    fn sturm_counts_planted_roots(
        roots in prop::collection::btree_set(-30i64..=30, 0..=4),
        mults in prop::collection::vec(1u32..=2, 4),
        lead in prop::sample::select(vec![-3i64, -1, 1, 2]),
        lo in -35i64..=35,
        width in 1i64..=40,
    ) {
        let roots: Vec<Rational> = roots.into_iter().map(|k| r(k, 4)).collect();
        let mut p = UniPoly::constant(Rational::from_int(lead));
        for (x, m) in roots.iter().zip(&mults) {
            let lin = UniPoly::new(vec![-x, Rational::one()]);
            p = &p * &lin.pow(*m);
        }
        prop_assume!(p.degree().unwrap_or(0) <= 8);
        let (lo, hi) = (r(lo, 4) + r(1, 8), r(lo + width, 4) + r(1, 8));
        let planted = roots.iter().filter(|x| **x > lo && **x < hi).count();
        prop_assert_eq!(count_roots_open(&p, &lo, &hi), planted);
    }

    /// Exactly one of certificate / witness, and the witness is genuinely negative.
    #[test]
    fn nonneg_is_a_decision(p in unipoly(6), a in rational(), w in 1i64..=20) {
        let hi = &a + r(w, 4);
        match nonneg_on_interval(&p, &a, &hi).unwrap() {
            Nonnegativity::Certified(cert) => {
                prop_assert!(cert.recheck());
                prop_assert_eq!(cert.odd_root_count_interior, 0);
                // independent spot checks
                for k in 0..=16 {
                    let x = &a + (&hi - &a) * r(k, 16);
                    prop_assert!(!p.eval(&x).is_negative());
                }
            }
            Nonnegativity::Refuted { witness, value } => {
                prop_assert!(witness >= a && witness <= hi);
                prop_assert_eq!(p.eval(&witness), value.clone());
                prop_assert!(value.is_negative());
            }
        }
    }

    #[test]
    fn radius_is_certified_and_nearly_tight(
        extra in prop::collection::vec(prop::collection::vec(-4i64..=4, 1..=4), 1..=3),
    ) {
        // polynomials positive at 0
        let ps: Vec<UniPoly> = extra.iter().map(|c| {
            let mut c = c.clone();
            c[0] = c[0].abs() + 1;
            poly(&c)
        }).collect();
        let cap = r(4, 1);
        let precision = r(1, 64);
        let a = certified_radius(&ps, &cap, &precision).unwrap();
        prop_assert!(a.is_positive() && a <= cap);
        prop_assert!(certify_all(&ps, &a).unwrap().is_ok());
        let beyond = &a + &precision * r(2, 1);
        if beyond < cap {
            prop_assert!(certify_all(&ps, &beyond).unwrap().is_err());
        }
    }

    #[test]
    fn tangent_tensor_factors(p in unipoly(10)) {
        prop_assert_eq!(tangent_tensor(&p), &delta().pow(2) * &taylor_remainder(&p));
    }

    #[test]
    fn tangent_tensor_swap(p in unipoly(8), u in rational(), v in rational()) {
        // f(v) - f(u) - (v - u) f'(u) is T with u and v exchanged
        let direct = p.eval(&v) - p.eval(&u) - (&v - &u) * p.derivative().eval(&u);
        prop_assert_eq!(tangent_tensor(&p).eval(&v, &u), direct.clone());
        prop_assert_eq!(tangent_tensor(&p).swap().eval(&u, &v), direct);
    }

    #[test]
    fn residue_decomposition_reexpands(
        raw in prop::collection::vec((unipoly(6), unipoly(6)), 1..=4),
    ) {
        let theta: Rational = raw.iter().map(|(a, b)| a.coeff(0) * b.coeff(0)).sum();
        match positive_residue_decompose(&raw) {
            Ok(d) => {
                prop_assert!(theta.is_positive());
                let input = raw.iter().fold(BiPoly::zero(), |acc, (a, b)| &acc + &BiPoly::tensor(a, b));
                prop_assert_eq!(d.expand(), input);
                prop_assert!(d.is_valid());
            }
            Err(_) => prop_assert!(!theta.is_positive()),
        }
    }

    #[test]
    fn strict_decomposition_valid(p in unipoly(8), c2 in 1i64..=5) {
        let mut c = p.coeffs().to_vec();
        c.resize(c.len().max(3), Rational::zero());
        c[2] = Rational::from_int(c2);
        let f = UniPoly::new(c);
        let d = strict_decompose(&f).unwrap();
        prop_assert!(d.is_valid());
        prop_assert_eq!(d.expand(), taylor_remainder(&f));
    }

    #[test]
    fn inner_product_law(p in unipoly(5), q in unipoly(5)) {
        let t = FactorTerm { p: p.clone(), q: q.clone() };
        prop_assert_eq!(t.inner_product(), &BiPoly::tensor(&p, &q) * &delta().pow(2));
    }

    /// Membership of the weighted centroid is invariant under scaling the sample.
    #[test]
    fn obstruction_scaling(
        pts in prop::collection::btree_set((-6i64..=6, -6i64..=6), 4..=6),
        num in 1i64..=7,
        den in 1i64..=5,
    ) {
        let points: Vec<Vec<Rational>> = pts.iter().map(|&(x, y)| vec![r(x, 1), r(y, 1)]).collect();
        let s = PointSet::new(2, points).unwrap();
        let lambda = r(num, den);
        let a = condition_star(&s, 1).unwrap();
        let b = condition_star(&s.scaled(&lambda), 1).unwrap();
        prop_assert_eq!(a.holds, b.holds);
        prop_assert_eq!(&a.failing_subset, &b.failing_subset);
        for w in &a.witnesses {
            prop_assert!(w.verify(&s));
            // w -> (w_1/lambda, w_2/lambda, w_0) witnesses the scaled set
            let mut scaled = w.clone();
            for c in scaled.f_coeffs.iter_mut().take(2) {
                *c = &*c / &lambda;
            }
            prop_assert!(scaled.verify(&s.scaled(&lambda)));
        }
        let fm = condition_star_with(&s, 1, &FourierMotzkin::default(), 1).unwrap();
        prop_assert_eq!(fm.holds, a.holds);
        prop_assert_eq!(fm.failing_subset, a.failing_subset);
    }
}

#[test]
fn monomial_law() {
    for n in 2..=10u32 {
        let f = UniPoly::monomial(Rational::one(), n as usize);
        assert_eq!(taylor_remainder(&f), s_polynomial(1, n).unwrap().value, "n = {n}");
    }
}

#[test]
fn tangent_points_of_the_representation() {
    let opts = BuildOptions {
        cap: r(1, 1),
        precision: r(1, 1000),
        decomp: None,
        strategy: &AutoStrategy,
        samples: 21,
    };
    for f in [poly(&[0, 0, 1]), x2_minus_x6()] {
        let (s, _) = build_bundle(&f, &opts).unwrap();
        for v in ticks(&-&s.a, &s.a, 21) {
            let cert = s.tangent_certificate(&v).unwrap();
            assert!(cert.c.is_zero());
            let tau = tangent_line(&f, &v);
            assert!(check_point(&s.rep, &tau.as_vec(), &cert.to_lift()).unwrap(), "{f} at {v}");
        }
        for (_, cert) in s.generator_certificates(3).into_iter().filter(|(g, _)| {
            matches!(g, sorep::repforge::Generator::Vertical { .. })
        }) {
            let g = s.certificate_polynomial(&cert).unwrap();
            assert_eq!(g.degree(), Some(1));
        }
    }
}

#[test]
fn moment_side_contains_graph_and_refutes_outside() {
    let f = x2_minus_x6();
    let (s, _) = build_bundle(
        &f,
        &BuildOptions {
            cap: r(1, 1),
            precision: r(1, 1000),
            decomp: None,
            strategy: &AutoStrategy,
            samples: 5,
        },
    )
    .unwrap();
    let dual = s.moment_rep();
    for x in ticks(&-&s.a, &s.a, 9) {
        let y = f.eval(&x);
        assert!(check_point(&dual, &[x.clone(), y.clone()], &s.moment_lift(&x)).unwrap());
        let above = &y + r(1, 3);
        assert!(check_point(&dual, &[x.clone(), above], &s.moment_lift(&x)).unwrap());
        let below = &y - r(1, 100);
        let (gen, cert) = s.refute_point(&x, &below).expect("refutable");
        let functional = gen.functional(&f, &s.a);
        assert!(functional.eval(&x, &below).is_negative());
        assert!(check_point(&s.rep, &functional.as_vec(), &cert.to_lift()).unwrap());
    }
    let outside = &s.a + r(1, 10);
    let (gen, _) = s.refute_point(&outside, &r(0, 1)).unwrap();
    assert!(gen.functional(&f, &s.a).eval(&outside, &r(0, 1)).is_negative());
}

#[test]
fn bundles_over_the_corpus() {
    let opts = BuildOptions {
        cap: r(1, 1),
        precision: r(1, 1000),
        decomp: None,
        strategy: &AutoStrategy,
        samples: 21,
    };
    let corpus = [
        poly(&[0, 0, 1]),
        poly(&[0, 0, 1, 0, 1]),
        x2_minus_x6(),
        poly(&[1, 1, 3]),
        poly(&[0, 0, 0, 0, 1]),
        poly(&[0, 0, 0, 0, 0, 0, 1, 0, 1]),
    ];
    for f in corpus {
        let (_, b) = build_bundle(&f, &opts).unwrap();
        let res = verify_bundle(&b);
        assert!(res.ok, "{f}: {:?}", res.failures);
    }
}

#[test]
fn handmade_bundle_reaches_two_fifths() {
    let a = r(2, 5);
    let opts = BuildOptions {
        cap: a.clone(),
        precision: r(1, 1000),
        decomp: Some(handmade_decomposition(&a)),
        strategy: &AutoStrategy,
        samples: 21,
    };
    let (s, b) = build_bundle(&x2_minus_x6(), &opts).unwrap();
    assert_eq!(b.a, a);
    assert!(verify_bundle(&b).ok);
    assert!(sorep::certcheck::sample_soundness(&s, 21).unwrap().is_empty());
    let mut wide = b.clone();
    wide.a = r(1, 2);
    assert!(!verify_bundle(&wide).ok);
}

#[test]
fn failure_is_monotone_in_the_sample() {
    let square: Vec<Vec<Rational>> = [(0, 0), (1, 0), (1, 1), (0, 1)]
        .iter()
        .map(|&(x, y)| vec![r(x, 1), r(y, 1)])
        .collect();
    let mut pts = vec![vec![r(1, 2), r(1, 2)]];
    pts.extend(square.iter().cloned());
    let base = PointSet::new(2, pts.clone()).unwrap().with_hull(square.clone()).unwrap();
    let rep = condition_star(&base, 1).unwrap();
    assert_eq!(rep.failing_subset, Some(vec![0]));
    for extra in [vec![r(1, 4), r(3, 4)], vec![r(1, 2), r(0, 1)]] {
        pts.push(extra);
        let bigger = PointSet::new(2, pts.clone()).unwrap().with_hull(square.clone()).unwrap();
        assert_eq!(condition_star(&bigger, 1).unwrap().failing_subset, Some(vec![0]));
    }
}

#[test]
fn lp_kernels_agree_and_are_deterministic() {
    let mc = sorep::obstruct::moment_curve_points(4, 6).unwrap();
    let a = condition_star_with(&mc, 2, &Simplex, 1).unwrap();
    let b = condition_star_with(&mc, 2, &Simplex, 3).unwrap();
    assert_eq!(a, b);
    let fm = condition_star_with(&mc, 2, &FourierMotzkin::default(), 2).unwrap();
    assert!(a.holds && fm.holds);
    assert!(fm.witnesses.iter().all(|w| w.verify(&mc)));
}
