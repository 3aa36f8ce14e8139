//! Ground-truth products and the application formulas built on `pi(k, n)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::probability::{beta_enclosure, BetaQuery};
use crate::rational::{from_uint, truncate_directed, Enclosure, Rational};
use crate::RoundingDirection::{Down, Up};

/// Default largest `k` accepted by [`exact_pi`].
pub const DEFAULT_EXACT_CAP: u64 = 10_000;

/// Exact `pi(k, n) = prod_{i=1}^{k-1} (1 - i/n)`, with the default size cap.
pub fn exact_pi(k: &BigUint, n: &BigUint) -> Result<Rational> {
    exact_pi_capped(k, n, DEFAULT_EXACT_CAP)
}

pub fn exact_pi_capped(k: &BigUint, n: &BigUint, cap: u64) -> Result<Rational> {
    if n.is_zero() {
        return Err(Error::domain("sample space size n must be positive"));
    }
    if k <= &BigUint::one() {
        return Ok(Rational::one());
    }
    if k > n {
        return Ok(Rational::zero());
    }
    let k_small = k.to_u64().filter(|&v| v <= cap).ok_or_else(|| {
        Error::SizeLimit(format!(
            "exact product for k={k} exceeds the cap of {cap} factors; \
             use enclosed_pi_product or beta_enclosure instead"
        ))
    })?;
    let n_int = BigInt::from(n.clone());
    let mut num = BigInt::one();
    for i in 1..k_small {
        num *= &n_int - i;
    }
    let den = num_traits::pow(n_int, k_small as usize - 1);
    Ok(Rational::new(num, den))
}

/// Exact collision probability `1 - pi(k, n)`.
pub fn exact_beta(k: &BigUint, n: &BigUint) -> Result<Rational> {
    exact_pi(k, n).map(|p| Rational::one() - p)
}

/// Enclosure of `pi(k, n)` by a factor-by-factor product with directed truncation.
pub fn enclosed_pi_product(k: &BigUint, n: &BigUint, digits: u32) -> Result<Enclosure> {
    if n.is_zero() {
        return Err(Error::domain("sample space size n must be positive"));
    }
    if k > n {
        return Err(Error::domain(format!("enclosed product needs k <= n (k={k}, n={n})")));
    }
    let k_small = k
        .to_u64()
        .ok_or_else(|| Error::SizeLimit(format!("k={k} is too large to multiply factor by factor")))?;
    if k_small <= 1 {
        return Ok(Enclosure::point(Rational::one()));
    }
    let scale = digits + k_small.ilog10() + 1 + 5;
    let n_int = BigInt::from(n.clone());
    let mut lo = Rational::one();
    let mut hi = Rational::one();
    for i in 1..k_small {
        let factor = Rational::new(&n_int - i, n_int.clone());
        lo = truncate_directed(&(&lo * &factor), scale, Down);
        hi = truncate_directed(&(&hi * &factor), scale, Up);
    }
    Enclosure::new(lo, hi)
}

/// Expected number of colliding pairs, `C(k, 2) / n`.
pub fn expected_collisions(k: &BigUint, n: &BigUint) -> Rational {
    if k.is_zero() {
        return Rational::zero();
    }
    let k = from_uint(k);
    &k * (&k - Rational::one()) / (from_uint(n) * Rational::from_integer(2.into()))
}

/// Factor relating `C(n, k)` to `n^k / k!`; it equals `pi(k, n)`.
pub fn binom_pi_factor(k: &BigUint, n: &BigUint, target_digits: u32) -> Result<Enclosure> {
    if k > n {
        return Err(Error::domain(format!("binomial factor needs k <= n (k={k}, n={n})")));
    }
    pi_enclosure(k, n, target_digits)
}

fn pi_enclosure(k: &BigUint, n: &BigUint, target_digits: u32) -> Result<Enclosure> {
    match exact_pi(k, n) {
        Ok(p) => Ok(Enclosure::point(p)),
        Err(Error::SizeLimit(_)) => {
            let r = beta_enclosure(&BetaQuery::new(k.clone(), n.clone()).digits(target_digits))?;
            Ok(r.pi)
        }
        Err(e) => Err(e),
    }
}

/// Orbit-size distribution of a fixed point `x` under a uniformly random map
/// on an `n`-element set. The orbit is the set of distinct values visited
/// from `x` before the first repetition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitProbabilities {
    pub n: BigUint,
    pub k: BigUint,
    /// `P(orbit size = k) = pi(k, n) * k / n`.
    pub p_exact_size_k: Enclosure,
    /// `P(orbit size > k) = pi(k, n) * (n - k) / n = pi(k + 1, n)`.
    pub p_size_greater_k: Enclosure,
    /// Both values are exact (point enclosures).
    pub exact: bool,
}

pub fn orbit_size_probabilities(k: &BigUint, n: &BigUint, target_digits: u32) -> Result<OrbitProbabilities> {
    if k.is_zero() || k > n {
        return Err(Error::domain(format!("orbit sizes need 1 <= k <= n (k={k}, n={n})")));
    }
    let pi = pi_enclosure(k, n, target_digits)?;
    let n_r = from_uint(n);
    let k_r = from_uint(k);
    let p_exact = pi.scale(&(&k_r / &n_r))?;
    let p_greater = pi.scale(&((&n_r - &k_r) / &n_r))?;
    Ok(OrbitProbabilities {
        n: n.clone(),
        k: k.clone(),
        exact: pi.is_point(),
        p_exact_size_k: p_exact,
        p_size_greater_k: p_greater,
    })
}
