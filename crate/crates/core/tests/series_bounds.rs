use birthday_bounds::rational::ratio;
use birthday_bounds::{
    auto_select_order, bernoulli, epsilon_tail, exact_pi, exp_neg_enclosure, faulhaber_poly, ln_pi_enclosure,
    ln_series_lower, power_sum, Rational,
};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn u(v: u64) -> BigUint {
    BigUint::from(v)
}

/// Akiyama-Tanigawa: an independent route to B^m with B^1 = +1/2.
fn akiyama_tanigawa(max: usize) -> Vec<Rational> {
    let mut row: Vec<Rational> = Vec::new();
    let mut out = Vec::new();
    for m in 0..=max {
        row.push(ratio(1, m as i64 + 1));
        for j in (1..=m).rev() {
            row[j - 1] = Rational::from_integer(BigInt::from(j)) * (&row[j - 1] - &row[j]);
        }
        out.push(row[0].clone());
    }
    out
}

#[test]
fn bernoulli_matches_independent_algorithm() {
    let reference = akiyama_tanigawa(60);
    for (m, expected) in reference.iter().enumerate() {
        assert_eq!(&bernoulli(m), expected, "B^{m}");
    }
    assert_eq!(bernoulli(12), ratio(-691, 2730));
}

#[test]
fn faulhaber_vanishes_at_zero() {
    for m in 1..=50 {
        assert!(faulhaber_poly(m).eval(&BigInt::zero()).is_zero());
    }
}

proptest! {
    #[test]
    fn power_sum_telescopes(k in 1u64..100_000, m in 1u32..40) {
        let diff = power_sum(&u(k), m) - power_sum(&u(k - 1), m);
        prop_assert_eq!(diff, Rational::from_integer(num_traits::pow(BigInt::from(k), m as usize)));
    }

    #[test]
    fn power_sum_is_integral(k in 0u64..1_000_000_000, m in 1u32..60) {
        prop_assert!(power_sum(&u(k), m).is_integer());
    }
}

/// Certified check of `lower <= -ln pi <= upper`:
/// `pi <= e^-lower` and `pi >= e^-upper`, using certified exponential bounds.
fn ln_enclosure_contains(pi: &Rational, lower: &Rational, upper: &Rational) -> bool {
    let width = Rational::new(BigInt::one(), BigInt::from(10u32).pow(20));
    let at_lower = tight_exp(lower, &width);
    let at_upper = tight_exp(upper, &width);
    pi <= at_lower.lo() && pi >= at_upper.hi()
}

fn tight_exp(x: &Rational, width: &Rational) -> birthday_bounds::Enclosure {
    let mut m = 3;
    loop {
        let e = exp_neg_enclosure(x, m, 40).unwrap();
        if &e.width() <= width {
            return e;
        }
        m = 2 * m + 1;
    }
}

#[test]
fn ln_enclosure_contains_oracle() {
    for n in [61u64, 365] {
        for k in 2..=60u64 {
            let pi = exact_pi(&u(k), &u(n)).unwrap();
            for order in [2u32, 3, 4, 7] {
                let r = ln_pi_enclosure(&u(k), &u(n), order).unwrap();
                assert!(ln_enclosure_contains(&pi, &r.lower, &r.upper), "k={k} n={n} N={order}");
                let improved = r.improved_lower.unwrap();
                assert!(
                    ln_enclosure_contains(&pi, &improved, &r.upper),
                    "improved k={k} n={n} N={order}"
                );
            }
        }
    }
}

#[test]
fn two_samples_single_term() {
    for n in 2..=100u64 {
        let r = ln_pi_enclosure(&u(2), &u(n), 2).unwrap();
        assert_eq!(r.lower, ratio(1, n as i64));
        // -ln(1 - 1/n) lies in [lower, upper]  <=>  e^-upper <= (n-1)/n <= e^-lower
        let pi = ratio(n as i64 - 1, n as i64);
        assert!(ln_enclosure_contains(&pi, &r.lower, &r.upper), "n={n}");
    }
}

#[test]
fn monotone_sandwich_across_orders() {
    for (k, n) in [
        (2u64, 2u64),
        (5, 365),
        (30, 61),
        (60, 61),
        (73, 365),
        (200, 1000),
        (1000, 1000),
    ] {
        for order in 2..12u32 {
            for next in order + 1..=12 {
                let l = ln_series_lower(&u(k), &u(n), order).unwrap();
                let l_next = ln_series_lower(&u(k), &u(n), next).unwrap();
                let eps = epsilon_tail(&u(k), &u(n), order).unwrap();
                assert!(l < l_next, "k={k} n={n} N={order}->{next}");
                assert!(l_next < &l + &eps, "k={k} n={n} N={order}->{next}");
            }
        }
    }
}

#[test]
fn epsilon_strictly_decreasing() {
    for (k, n) in [(2u64, 4u64), (5, 365), (50, 100), (500, 1000), (3, 3), (1000, 1000)] {
        let mut prev = epsilon_tail(&u(k), &u(n), 2).unwrap();
        assert!(prev > Rational::zero());
        for order in 3..40u32 {
            let eps = epsilon_tail(&u(k), &u(n), order).unwrap();
            assert!(eps > Rational::zero() && eps < prev, "k={k} n={n} N={order}");
            // eps(N) / eps(N-1) = (k - 1/2)/n * (N-1)/(N+1)
            let ratio_bound = (Rational::from_integer(BigInt::from(2 * k - 1))
                / Rational::from_integer(BigInt::from(2 * n)))
                * ratio(i64::from(order - 1), i64::from(order + 1));
            assert_eq!(&eps / &prev, ratio_bound);
            prev = eps;
        }
    }
}

#[test]
fn auto_order_is_minimal() {
    for (k, n, digits) in [
        (5u64, 365u64, 3u32),
        (5, 365, 40),
        (100, 365, 12),
        (199, 200, 6),
        (2, 2, 2),
    ] {
        let target = Rational::new(BigInt::one(), BigInt::from(10u32).pow(digits));
        let order = auto_select_order(&u(k), &u(n), &target, 10_000).unwrap();
        assert!(epsilon_tail(&u(k), &u(n), order).unwrap() < target);
        if order > 2 {
            assert!(epsilon_tail(&u(k), &u(n), order - 1).unwrap() >= target);
        }
    }
}

#[test]
fn large_parameters_stay_exact() {
    let k = BigUint::one() << 32u32;
    let n = BigUint::one() << 128u32;
    let r = ln_pi_enclosure(&k, &n, 3).unwrap();
    // N = 2 lower bound is k(k-1)/2n
    let two = ln_series_lower(&k, &n, 2).unwrap();
    let kr = Rational::from_integer(BigInt::from(k.clone()));
    let nr = Rational::from_integer(BigInt::from(n.clone()));
    assert_eq!(two, &kr * (&kr - Rational::one()) / (nr * ratio(2, 1)));
    assert!(r.lower > two);
    assert!(r.upper < &two + epsilon_tail(&k, &n, 2).unwrap());
}
