use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed};
use proptest::prelude::*;
use rotalg_core::diophantine::{Angle, AngleDescriptor, AngleError, StreamRule};

/// Bounds on `(a + b√c)/den` from integer square roots of `c·10^{2k}`,
/// independent of any continued-fraction machinery.
fn surd_bounds(a: i64, b: i64, c: i64, den: i64, digits: u32) -> (BigRational, BigRational) {
    let scale = BigInt::from(10).pow(digits);
    let root = (BigInt::from(c) * &scale * &scale).sqrt();
    let lo_root = BigRational::new(root.clone(), scale.clone());
    let hi_root = BigRational::new(root + 1, scale);
    let (lo_root, hi_root) = if b > 0 { (lo_root, hi_root) } else { (hi_root, lo_root) };
    let bb = BigRational::from_integer(b.into());
    let aa = BigRational::from_integer(a.into());
    let d = BigRational::from_integer(den.into());
    ((&aa + &bb * lo_root) / &d, (&aa + &bb * hi_root) / &d)
}

fn oracle_sign(r: Rational64, n: i64, bounds: &(BigRational, BigRational)) -> Option<Ordering> {
    let r = BigRational::new((*r.numer()).into(), (*r.denom()).into());
    let nn = BigRational::from_integer(n.into());
    let a = &r + &nn * &bounds.0;
    let b = &r + &nn * &bounds.1;
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if lo.is_positive() {
        Some(Ordering::Greater)
    } else if hi.is_negative() {
        Some(Ordering::Less)
    } else {
        None
    }
}

fn golden_stream() -> Angle {
    Angle::new(AngleDescriptor::ContinuedFraction { prefix: vec![0, 1, 1, 1], rule: StreamRule::RepeatLast }).unwrap()
}

#[test]
fn best_denominators_of_golden_and_silver() {
    let g = Angle::golden();
    let dens: Vec<BigInt> = g.best_denominators(5);
    assert_eq!(dens, [1, 2, 3, 5, 8].map(BigInt::from).to_vec());
    let s = Angle::sqrt2_minus_one();
    assert_eq!(s.best_denominators(4), [2, 5, 12, 29].map(BigInt::from).to_vec());
}

#[test]
fn best_denominators_are_record_approximations() {
    // brute force: n is a record if ‖nρ‖ beats every smaller denominator
    for angle in [Angle::golden(), Angle::sqrt2_minus_one(), Angle::new(AngleDescriptor::Surd { a: 0, b: 1, c: 7, den: 3 }).unwrap()] {
        let x = angle.approx();
        let dist = |n: u64| {
            let f = (n as f64 * x).fract();
            f.min(1.0 - f)
        };
        let mut records = Vec::new();
        let mut best = f64::INFINITY;
        for n in 1..2000u64 {
            if dist(n) < best - 1e-12 {
                best = dist(n);
                records.push(BigInt::from(n));
            }
        }
        if angle.coefficient(1) > 1 {
            records.remove(0);
        }
        let mut dens = angle.best_denominators(records.len() + 1);
        dens.dedup();
        assert_eq!(dens[..records.len()], records[..]);
        for w in dens.windows(2) {
            assert!(dist(w[1].to_string().parse().unwrap()) < dist(w[0].to_string().parse().unwrap()) || w[0] == w[1]);
        }
    }
}

#[test]
fn refine_gives_nested_enclosures() {
    let g = Angle::golden();
    let truth = surd_bounds(-1, 1, 5, 2, 40);
    let mut last: Option<(BigRational, BigRational)> = None;
    for k in 1..12 {
        let prec = BigRational::new(BigInt::one(), BigInt::from(10).pow(k));
        let iv = g.refine(&prec).unwrap();
        assert!(iv.width() <= prec);
        assert!(iv.lo < truth.0 && truth.1 < iv.hi);
        if let Some((lo, hi)) = &last {
            assert!(lo <= &iv.lo && iv.hi <= *hi);
        }
        last = Some((iv.lo, iv.hi));
    }
    let iv = g.refine(&BigRational::new(1.into(), 100.into())).unwrap();
    assert!(iv.contains(&truth.0));
    // 21/34 < ρ < 13/21
    assert_eq!(g.compare_linear(&Rational64::new(-21, 34), 1), Ordering::Greater);
    assert_eq!(g.compare_linear(&Rational64::new(-13, 21), 1), Ordering::Less);
    assert!(g.refine(&BigRational::new(0.into(), 1.into())).is_err());
}

#[test]
fn compare_linear_spec_cases() {
    let g = Angle::golden();
    assert_eq!(g.compare_linear(&Rational64::new(-1, 2), 1), Ordering::Greater);
    assert_eq!(g.compare_linear(&Rational64::new(-2, 3), 1), Ordering::Less);
    assert_eq!(g.compare_linear(&Rational64::new(3, 1), -5), Ordering::Less);
    assert_eq!(g.compare_linear(&Rational64::new(0, 1), 0), Ordering::Equal);
}

#[test]
fn floor_linear_matches_float_far_from_integers() {
    let g = Angle::golden();
    for n in -500..500 {
        let r = Rational64::new(n % 7, 5);
        let x = *r.numer() as f64 / *r.denom() as f64 + n as f64 * g.approx();
        if (x - x.round()).abs() > 1e-9 {
            assert_eq!(g.floor_linear(&r, n), x.floor() as i64, "n = {n}");
        }
    }
}

#[test]
fn match_phase_examples() {
    let g = Angle::golden();
    let m = g.match_phase(0.5, 0.01, 100).unwrap();
    assert_eq!(m.k, 17);
    assert!((m.frac - 0.5066).abs() < 1e-4);
    assert!(g.match_phase(1.0 / 3.0, 1e-6, 10).is_none());
}

#[test]
fn match_phase_agrees_with_plain_float_scan() {
    let g = Angle::golden();
    let x = g.approx();
    for (target, tol) in [(0.5, 0.002), (1.0 / 3.0, 0.0013), (0.9, 0.01), (0.123, 0.004)] {
        let scan = (1..=300i64).flat_map(|m| [m, -m]).find(|k| {
            let f = (*k as f64 * x).rem_euclid(1.0);
            let d = (f - target).rem_euclid(1.0);
            d.min(1.0 - d) < tol
        });
        assert_eq!(g.match_phase(target, tol, 300).map(|m| m.k), scan);
    }
}

#[test]
fn frac_multiple_is_accurate_for_large_k() {
    let g = Angle::golden();
    let truth = surd_bounds(-1, 1, 5, 2, 60);
    for k in [1i64, 17, 1000, -987, 123_456, 10_000_000] {
        let kk = BigRational::from_integer(k.into());
        let v = &kk * &truth.0;
        let frac = &v - BigRational::from_integer(v.floor().to_integer());
        let expected: f64 = num_traits::ToPrimitive::to_f64(&frac).unwrap();
        assert!((g.frac_multiple(k) - expected).abs() < 1e-14, "k = {k}");
    }
}

#[test]
fn descriptor_validation() {
    assert_eq!(Angle::new(AngleDescriptor::Surd { a: 0, b: 1, c: 4, den: 3 }).unwrap_err(), AngleError::RationalSurd(4));
    assert_eq!(Angle::new(AngleDescriptor::Surd { a: 1, b: 1, c: 5, den: 2 }).unwrap_err(), AngleError::OutOfRange);
    assert!(Angle::new(AngleDescriptor::ContinuedFraction { prefix: vec![1, 2], rule: StreamRule::RepeatLast }).is_err());
    let neg = Angle::new(AngleDescriptor::Surd { a: 3, b: -1, c: 5, den: 2 }).unwrap();
    assert!((neg.approx() - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
    let parsed = AngleDescriptor::parse(r#"{"kind":"surd","a":-1,"b":1,"c":5,"den":2}"#).unwrap();
    assert_eq!(parsed, AngleDescriptor::golden());
    let cf = AngleDescriptor::parse(r#"{"kind":"cf","prefix":[0,1,1,1],"rule":"repeat-last"}"#).unwrap();
    assert!(matches!(cf, AngleDescriptor::ContinuedFraction { .. }));
}

#[test]
fn surd_expansion_matches_known_partial_quotients() {
    let s = Angle::sqrt2_minus_one();
    assert!((1..20).all(|k| s.coefficient(k) == 2));
    // √7/3 against a float expansion
    let a = Angle::new(AngleDescriptor::Surd { a: 0, b: 1, c: 7, den: 3 }).unwrap();
    let mut x = 7f64.sqrt() / 3.0;
    for k in 1..8 {
        x = 1.0 / x;
        let t = x.floor();
        assert_eq!(a.coefficient(k), t as u64, "index {k}");
        x -= t;
    }
}

#[test]
fn cache_is_shared_across_threads() {
    let g = std::sync::Arc::new(Angle::golden());
    let handles: Vec<_> = (0..8)
        .map(|i| {
            let g = g.clone();
            std::thread::spawn(move || g.convergent(20 + i * 5))
        })
        .collect();
    for h in handles {
        let (p, q) = h.join().unwrap();
        assert!(q > p);
    }
    assert_eq!(g.convergent(10).1, BigInt::from(89));
}

proptest! {
    #[test]
    fn surd_sign_matches_isqrt_oracle(num in -2000i64..2000, den in 1i64..60, n in -3000i64..3000) {
        let r = Rational64::new(num, den);
        let g = Angle::golden();
        let bounds = surd_bounds(-1, 1, 5, 2, 30);
        if let Some(expected) = oracle_sign(r, n, &bounds) {
            prop_assert_eq!(g.compare_linear(&r, n), expected);
        }
    }

    #[test]
    fn surd_and_stream_routes_agree(num in -500i64..500, den in 1i64..40, n in -400i64..400) {
        let r = Rational64::new(num, den);
        prop_assert_eq!(Angle::golden().compare_linear(&r, n), golden_stream().compare_linear(&r, n));
    }

    #[test]
    fn sign_is_odd(num in -500i64..500, den in 1i64..40, n in -400i64..400) {
        let r = Rational64::new(num, den);
        let s = Angle::sqrt2_minus_one();
        prop_assert_eq!(s.compare_linear(&r, n), s.compare_linear(&-r, -n).reverse());
    }
}
