use birthday_bounds::rational::ratio;
use birthday_bounds::{
    binom_pi_factor, enclosed_pi_product, exact_beta, exact_pi, exact_pi_capped, orbit_size_probabilities, Error,
    Rational,
};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

fn u(v: u64) -> BigUint {
    BigUint::from(v)
}

fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i)) / factorial(k)
}

#[test]
fn product_enclosure_contains_exact_value() {
    for n in [365u64, 1000] {
        for k in 0..=200u64 {
            let pi = exact_pi(&u(k), &u(n)).unwrap();
            let e = enclosed_pi_product(&u(k), &u(n), 12).unwrap();
            assert!(e.contains(&pi), "k={k} n={n}");
            assert!(e.width() < ratio(1, 1_000_000_000_000i64));
        }
    }
}

#[test]
fn pigeonhole_region() {
    for n in 1..=20u64 {
        for k in n + 1..=n + 5 {
            assert!(exact_pi(&u(k), &u(n)).unwrap().is_zero());
            assert!(exact_beta(&u(k), &u(n)).unwrap().is_one());
        }
    }
    // huge k beyond n is still exact, before any size check
    assert!(exact_pi(&(BigUint::one() << 80u32), &u(365)).unwrap().is_zero());
}

#[test]
fn size_cap_is_enforced() {
    assert!(matches!(
        exact_pi_capped(&u(101), &u(1000), 100),
        Err(Error::SizeLimit(_))
    ));
    assert!(exact_pi_capped(&u(100), &u(1000), 100).is_ok());
}

#[test]
fn factor_matches_binomial_identity() {
    for n in [10u64, 50, 365] {
        for k in 0..=n.min(60) {
            let expected = Rational::new(
                binomial(n, k) * factorial(k),
                num_traits::pow(BigInt::from(n), k as usize),
            );
            let e = binom_pi_factor(&u(k), &u(n), 20).unwrap();
            assert!(e.is_point());
            assert_eq!(e.lo(), &expected, "k={k} n={n}");
        }
    }
    assert!(binom_pi_factor(&u(11), &u(10), 10).is_err());
}

#[test]
fn factor_fallback_encloses_large_case() {
    let (k, n) = (u(20_000), u(1_000_000_000));
    let e = binom_pi_factor(&k, &n, 15).unwrap();
    assert!(!e.is_point());
    assert!(e.width() < ratio(1, 1_000_000_000_000_000i64));
    let product = enclosed_pi_product(&k, &n, 15).unwrap();
    assert!(product.lo() <= e.hi() && e.lo() <= product.hi());
}

/// Follows `x, f(x), f(f(x)), ...` and counts distinct values.
fn orbit_len(map: &[usize], start: usize) -> usize {
    let mut seen = vec![false; map.len()];
    let mut x = start;
    let mut len = 0;
    while !seen[x] {
        seen[x] = true;
        len += 1;
        x = map[x];
    }
    len
}

#[test]
fn orbit_distribution_matches_enumeration() {
    for n in 1..=5usize {
        let total = n.pow(n as u32);
        let mut counts = vec![0u64; n + 1];
        for code in 0..total {
            let mut c = code;
            let map: Vec<usize> = (0..n)
                .map(|_| {
                    let v = c % n;
                    c /= n;
                    v
                })
                .collect();
            counts[orbit_len(&map, 0)] += 1;
        }
        let mut sum = Rational::zero();
        for k in 1..=n {
            let o = orbit_size_probabilities(&u(k as u64), &u(n as u64), 20).unwrap();
            assert!(o.exact);
            let exactly = ratio(counts[k] as i64, total as i64);
            let greater = ratio(counts[k + 1..].iter().sum::<u64>() as i64, total as i64);
            assert_eq!(o.p_exact_size_k.lo(), &exactly, "n={n} k={k}");
            assert_eq!(o.p_size_greater_k.lo(), &greater, "n={n} k={k}");
            sum += exactly;
        }
        assert!(sum.is_one());
    }
}

#[test]
fn orbit_tail_differences() {
    let n = u(50);
    for k in 2..=50u64 {
        let prev = orbit_size_probabilities(&u(k - 1), &n, 20).unwrap();
        let cur = orbit_size_probabilities(&u(k), &n, 20).unwrap();
        assert_eq!(
            prev.p_size_greater_k.lo() - cur.p_size_greater_k.lo(),
            cur.p_exact_size_k.lo().clone(),
            "k={k}"
        );
    }
    assert!(orbit_size_probabilities(&u(0), &n, 10).is_err());
    assert!(orbit_size_probabilities(&u(51), &n, 10).is_err());
}

#[test]
fn orbit_large_case_is_enclosed() {
    let (k, n) = (u(30_000), u(10_000_000_000));
    let o = orbit_size_probabilities(&k, &n, 15).unwrap();
    assert!(!o.exact);
    // the two enclosures are scalings of one pi enclosure, so they sum to the pi(k) enclosure
    let pi_lo = o.p_exact_size_k.lo() + o.p_size_greater_k.lo();
    let pi_hi = o.p_exact_size_k.hi() + o.p_size_greater_k.hi();
    let product = enclosed_pi_product(&k, &n, 15).unwrap();
    assert!(product.lo() <= &pi_hi && &pi_lo <= product.hi());
}
