use super::*;
use proptest::prelude::*;

fn p(n: u32) -> Prime {
    Prime::new(n).unwrap()
}

fn capped(n: u32) -> Backend {
    Backend::Capped { digits: n }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn prime_validation() {
    assert!(Prime::new(2).is_ok());
    assert!(Prime::new(97).is_ok());
    assert!(Prime::new(1).is_err());
    assert!(Prime::new(9).is_err());
}

#[test]
fn from_rational_examples() {
    let x = PadicScalar::from_rational(-1, 3, p(2), capped(3)).unwrap();
    assert_eq!(x.valuation(), Some(0));
    // -1/3 = 5 mod 8: digits 1,0,1
    assert_eq!(x.unit_digits().unwrap(), vec![1, 0, 1]);
    assert_eq!(x.relative_precision(), Some(3));

    let z = PadicScalar::from_rational(0, 1, p(5), Backend::Exact).unwrap();
    assert_eq!(z.valuation(), None);
    assert!(z.is_exact_zero());

    let y = PadicScalar::from_rational(24, 1, p(2), Backend::Exact).unwrap();
    assert_eq!(y.valuation(), Some(3));

    assert!(matches!(
        PadicScalar::from_rational(1, 0, p(2), Backend::Exact),
        Err(PadicError::InvalidInput(_))
    ));
}

#[test]
fn field_op_examples() {
    for b in [Backend::Exact, capped(8)] {
        let five = PadicScalar::from_int(5, p(2), b);
        let three = PadicScalar::from_int(3, p(2), b);
        assert_eq!((&five + &three).valuation(), Some(3));
        let zero = PadicScalar::zero(p(2), b);
        assert_eq!(&five + &zero, five);
    }
    let inv3 = PadicScalar::from_int(3, p(2), capped(3)).inv().unwrap();
    assert_eq!(inv3.unit_digits().unwrap(), vec![1, 1, 0]);
}

#[test]
fn abs_exponent_examples() {
    let b = Backend::Exact;
    assert_eq!(PadicScalar::from_int(24, p(2), b).abs_exponent(), Some(-3));
    assert_eq!(PadicScalar::zero(p(2), b).abs_exponent(), None);
    assert_eq!(PadicScalar::from_rational(1, 2, p(2), b).unwrap().abs_exponent(), Some(1));
}

#[test]
fn cancellation_shrinks_precision() {
    let b = capped(10);
    let x = PadicScalar::from_int(1, p(2), b);
    let y = PadicScalar::from_rational(1 + 8 * 3, 1, p(2), b).unwrap();
    let d = &y - &x;
    assert_eq!(d.valuation(), Some(3));
    assert_eq!(d.relative_precision(), Some(7));
    assert_eq!(d.absolute_precision(), Some(10));
}

#[test]
fn zero_to_precision_is_not_exact_zero() {
    let b = capped(6);
    let x = PadicScalar::from_rational(1, 3, p(3), b).unwrap();
    // 1/3 = 3^-1 * 1 + O(3^5)
    let z = &x - &x;
    assert!(z.is_zero());
    assert!(!z.is_exact_zero());
    assert_eq!(z.bound_exponent(), Some(-5));
    assert!(matches!(z.inv(), Err(PadicError::Singular(_))));
    assert!(matches!(PadicScalar::zero(p(3), Backend::Exact).inv(), Err(PadicError::Singular(_))));
}

#[test]
fn backend_mismatch_is_rejected() {
    let a = PadicScalar::one(p(2), Backend::Exact);
    let b = PadicScalar::one(p(2), capped(4));
    let c = PadicScalar::one(p(3), Backend::Exact);
    assert!(matches!(a.checked_add(&b), Err(PadicError::InvalidInput(_))));
    assert!(matches!(a.checked_mul(&c), Err(PadicError::InvalidInput(_))));
}

#[test]
fn parse_and_render_rationals() {
    assert_eq!(parse_ratio(" -3/6 ").unwrap(), q(-1, 2));
    assert_eq!(parse_ratio("7").unwrap(), q(7, 1));
    assert!(parse_ratio("1/0").is_err());
    assert!(parse_ratio("x/2").is_err());
    assert_eq!(ratio_string(&q(4, -6)), "-2/3");
}

#[test]
fn prime_power_and_powi() {
    let b = Backend::Exact;
    let x = PadicScalar::prime_power(-3, p(5), b);
    assert_eq!(x.to_rational(), q(1, 125));
    let y = PadicScalar::from_int(2, p(5), b).powi(-2).unwrap();
    assert_eq!(y.to_rational(), q(1, 4));
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-300i64..300, 1i64..300).prop_map(|(n, d)| q(n, d))
}

#[derive(Clone, Debug)]
enum Step {
    Add(BigRational),
    Sub(BigRational),
    Mul(BigRational),
    Inv,
}

fn step() -> impl Strategy<Value = Step> {
    prop_oneof![
        small_rational().prop_map(Step::Add),
        small_rational().prop_map(Step::Sub),
        small_rational().prop_map(Step::Mul),
        Just(Step::Inv),
    ]
}

/// The capped value is a valid approximation of the exact one: they agree
/// modulo `p^(absolute precision)`.
fn consistent(exact: &PadicScalar, approx: &PadicScalar) -> bool {
    let e = exact.to_rational();
    match approx.absolute_precision() {
        None => approx.is_exact_zero() && e.is_zero(),
        Some(abs) => {
            let diff = PadicScalar::from_ratio(&(e - approx.to_rational()), exact.prime(), Backend::Exact);
            diff.valuation().is_none_or(|v| v >= abs)
        }
    }
}

proptest! {
    #[test]
    fn multiplicativity_and_ultrametric(a in small_rational(), b in small_rational(), pi in 0usize..3) {
        let prime = p([2, 3, 5][pi]);
        let x = PadicScalar::from_ratio(&a, prime, Backend::Exact);
        let y = PadicScalar::from_ratio(&b, prime, Backend::Exact);
        prop_assert_eq!((&x * &y).abs_exponent(), exp_add(x.abs_exponent(), y.abs_exponent()));
        let s = (&x + &y).abs_exponent();
        prop_assert!(s <= x.abs_exponent().max(y.abs_exponent()));
        if x.abs_exponent() != y.abs_exponent() {
            prop_assert_eq!(s, x.abs_exponent().max(y.abs_exponent()));
        }
    }

    #[test]
    fn capped_tracks_exact(start in small_rational(), steps in proptest::collection::vec(step(), 0..=20), pi in 0usize..3) {
        let prime = p([2, 3, 5][pi]);
        let b = capped(40);
        let mut exact = PadicScalar::from_ratio(&start, prime, Backend::Exact);
        let mut approx = PadicScalar::from_ratio(&start, prime, b);
        for s in steps {
            match s {
                Step::Add(r) => {
                    exact = &exact + &PadicScalar::from_ratio(&r, prime, Backend::Exact);
                    approx = &approx + &PadicScalar::from_ratio(&r, prime, b);
                }
                Step::Sub(r) => {
                    exact = &exact - &PadicScalar::from_ratio(&r, prime, Backend::Exact);
                    approx = &approx - &PadicScalar::from_ratio(&r, prime, b);
                }
                Step::Mul(r) => {
                    exact = &exact * &PadicScalar::from_ratio(&r, prime, Backend::Exact);
                    approx = &approx * &PadicScalar::from_ratio(&r, prime, b);
                }
                Step::Inv => {
                    if approx.is_zero() {
                        continue;
                    }
                    exact = exact.inv().unwrap();
                    approx = approx.inv().unwrap();
                }
            }
            prop_assert!(consistent(&exact, &approx), "exact {} approx {}", exact, approx);
            if !approx.is_zero() {
                prop_assert_eq!(exact.valuation(), approx.valuation());
            }
        }
    }
}
