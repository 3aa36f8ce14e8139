//! Certified enclosure of `-ln pi(k, n)`.
//!
//! Expanding `ln(1 - i/n)` and swapping sums gives
//! `-ln pi(k, n) = sum_{m>=1} p(k-1, m) / (m n^m)`. Truncating after `N - 1`
//! terms yields a lower bound, and the tail is at most
//!
//! ```text
//! eps(k, n, N) = (k - 1/2)^(N+1) / (N (N+1) (1 - (k - 1/2)/n) n^N)
//! ```
//!
//! All quantities here are exact rationals.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::bernoulli::power_sum_at;
use crate::error::{Error, Result};
use crate::rational::{from_uint, Rational};

/// Default ceiling on the series order when it is chosen automatically.
pub const DEFAULT_MAX_ORDER: u32 = 10_000;

/// Environment variable that overrides [`DEFAULT_MAX_ORDER`] in the CLI.
pub const MAX_ORDER_ENV: &str = "BIRTHDAY_BOUNDS_MAX_N";

/// Enclosure of `-ln pi(k, n)` at series order `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LnEnclosureResult {
    pub k: BigUint,
    pub n: BigUint,
    /// Series order `N`: terms `m = 1 .. N-1` are summed exactly.
    pub order: u32,
    pub lower: Rational,
    pub epsilon: Rational,
    pub upper: Rational,
    /// `lower` plus a certified lower bound on the first neglected term.
    pub improved_lower: Option<Rational>,
}

impl LnEnclosureResult {
    /// Lower bound to use: the improved one when requested and available.
    pub fn lower_bound(&self, improved: bool) -> &Rational {
        match (&self.improved_lower, improved) {
            (Some(v), true) => v,
            _ => &self.lower,
        }
    }
}

fn check_order(order: u32) -> Result<()> {
    if order < 2 {
        return Err(Error::domain(format!("series order N must be at least 2, got {order}")));
    }
    Ok(())
}

fn check_sample(k: &BigUint, n: &BigUint) -> Result<()> {
    if k < &BigUint::from(2u32) {
        return Err(Error::domain(format!(
            "the log-series bound needs k >= 2, got k={k} (k <= 1 never collides)"
        )));
    }
    if k > n {
        return Err(Error::domain(format!(
            "tail bound inapplicable: k - 1/2 >= n (k={k}, n={n})"
        )));
    }
    Ok(())
}

/// Exact `L_N = sum_{m=1}^{N-1} p(k-1, m) / (m n^m)`.
pub fn ln_series_lower(k: &BigUint, n: &BigUint, order: u32) -> Result<Rational> {
    check_order(order)?;
    check_sample(k, n)?;
    let last = from_uint(k) - Rational::one();
    let n_int = BigInt::from(n.clone());
    let mut n_pow = BigInt::one();
    let mut sum = Rational::zero();
    for m in 1..order {
        n_pow *= &n_int;
        let denom = &n_pow * BigInt::from(m);
        sum += power_sum_at(&last, m) / Rational::from_integer(denom);
    }
    Ok(sum)
}

/// Exact tail bound `eps(k, n, N)`.
pub fn epsilon_tail(k: &BigUint, n: &BigUint, order: u32) -> Result<Rational> {
    check_order(order)?;
    if k.is_zero() {
        return Err(Error::domain("tail bound needs k >= 1"));
    }
    if k > n {
        return Err(Error::domain(format!(
            "tail bound inapplicable: k - 1/2 >= n (k={k}, n={n})"
        )));
    }
    // (2k-1)^(N+1) / (2^N N (N+1) (2n-2k+1) n^(N-1))
    let two_k_minus_one = BigInt::from(k.clone()) * 2 - 1;
    let gap = BigInt::from(n.clone()) * 2 - BigInt::from(k.clone()) * 2 + 1;
    let num = num_traits::pow(two_k_minus_one, order as usize + 1);
    let den = (BigInt::one() << order)
        * BigInt::from(order)
        * BigInt::from(order + 1)
        * gap
        * num_traits::pow(BigInt::from(n.clone()), order as usize - 1);
    Ok(Rational::new(num, den))
}

/// `(k-1)^(N+1) / (N (N+1) n^N)`, a lower bound on the first neglected term.
fn first_tail_term_lower(k: &BigUint, n: &BigUint, order: u32) -> Rational {
    let last = BigInt::from(k.clone()) - 1;
    let num = num_traits::pow(last, order as usize + 1);
    let den = BigInt::from(order) * BigInt::from(order + 1) * num_traits::pow(BigInt::from(n.clone()), order as usize);
    Rational::new(num, den)
}

/// Two-sided enclosure of `-ln pi(k, n)` at order `N`.
pub fn ln_pi_enclosure(k: &BigUint, n: &BigUint, order: u32) -> Result<LnEnclosureResult> {
    let lower = ln_series_lower(k, n, order)?;
    let epsilon = epsilon_tail(k, n, order)?;
    let upper = &lower + &epsilon;
    let improved_lower = Some(&lower + first_tail_term_lower(k, n, order));
    Ok(LnEnclosureResult {
        k: k.clone(),
        n: n.clone(),
        order,
        lower,
        epsilon,
        upper,
        improved_lower,
    })
}

/// Smallest order `N >= 2` with `eps(k, n, N) < target_width`.
///
/// `eps` is strictly decreasing in `N`, so the search doubles `N` until the
/// bound falls below the target and then bisects the last bracket. Every
/// candidate is checked exactly.
pub fn auto_select_order(k: &BigUint, n: &BigUint, target_width: &Rational, max_order: u32) -> Result<u32> {
    check_sample(k, n)?;
    if !target_width.is_positive() {
        return Err(Error::domain("target width must be positive"));
    }
    let max_order = max_order.max(2);
    let below = |order: u32| -> Result<bool> { Ok(&epsilon_tail(k, n, order)? < target_width) };

    let mut lo = 1u32; // largest order known to miss the target (1 is a sentinel)
    let mut hi = 2u32;
    loop {
        if below(hi)? {
            break;
        }
        if hi >= max_order {
            return Err(Error::PrecisionUnreachable(format!(
                "tail bound did not reach width 10^{:.1} within N <= {max_order} (k={k}, n={n}); \
                 (k - 1/2)/n is too close to 1, use the exact product oracle instead",
                crate::rational::approx_log10(target_width)
            )));
        }
        lo = hi;
        hi = hi.saturating_mul(2).min(max_order);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if below(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
