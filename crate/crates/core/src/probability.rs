//! Certified enclosures of the collision probability `beta(k, n)`.
//!
//! An enclosure `[L, U]` of `-ln pi` becomes `beta in [1 - e^-L, 1 - e^-U]`.
//! The exponentials are bracketed by consecutive partial sums of the
//! alternating series for `e^-y`, `0 <= y < 1`; larger arguments are halved
//! `s` times first and the resulting bounds squared back up.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{approx_log10, div_directed, from_int, ten_pow, ten_pow_neg, Enclosure, Rational};
use crate::tail::{auto_select_order, ln_pi_enclosure, LnEnclosureResult, DEFAULT_MAX_ORDER};
use crate::RoundingDirection::{self, Down, Up};

/// Default ceiling on the alternating-series order `M`.
pub const DEFAULT_MAX_SERIES_TERMS: u32 = 10_000;

/// How the log-series order `N` is picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderChoice {
    /// Smallest `N` whose tail bound fits the requested width.
    Auto,
    Fixed(u32),
}

/// Parameters of a collision-probability query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaQuery {
    pub k: BigUint,
    pub n: BigUint,
    pub order: OrderChoice,
    /// Absolute width target `10^-target_digits`.
    pub target_digits: u32,
    /// Use the improved lower bound on `-ln pi`.
    pub improved_lower: bool,
    pub max_order: u32,
    pub max_series_terms: u32,
}

impl BetaQuery {
    pub fn new(k: impl Into<BigUint>, n: impl Into<BigUint>) -> Self {
        BetaQuery {
            k: k.into(),
            n: n.into(),
            order: OrderChoice::Auto,
            target_digits: 10,
            improved_lower: false,
            max_order: DEFAULT_MAX_ORDER,
            max_series_terms: DEFAULT_MAX_SERIES_TERMS,
        }
    }

    pub fn order(mut self, order: OrderChoice) -> Self {
        self.order = order;
        self
    }

    pub fn digits(mut self, digits: u32) -> Self {
        self.target_digits = digits;
        self
    }

    pub fn improved_lower(mut self, on: bool) -> Self {
        self.improved_lower = on;
        self
    }

    pub fn max_order(mut self, cap: u32) -> Self {
        self.max_order = cap;
        self
    }

    pub fn max_series_terms(mut self, cap: u32) -> Self {
        self.max_series_terms = cap;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaEnclosureResult {
    pub k: BigUint,
    pub n: BigUint,
    /// Absent when `k <= 1` or `k > n`, where the answer is exact.
    pub ln_result: Option<LnEnclosureResult>,
    pub beta: Enclosure,
    /// Always exactly `1 - beta`.
    pub pi: Enclosure,
    /// Odd series order used for the exponential, if one was needed.
    pub m_used: Option<u32>,
    /// Number of halvings applied to the larger exponential argument.
    pub s_used: Option<u32>,
}

impl BetaEnclosureResult {
    fn exact(k: &BigUint, n: &BigUint, beta: Rational) -> Self {
        let beta = Enclosure::point(beta);
        BetaEnclosureResult {
            k: k.clone(),
            n: n.clone(),
            ln_result: None,
            pi: beta.one_minus(),
            beta,
            m_used: None,
            s_used: None,
        }
    }
}

/// Smallest `s` with `x / 2^s < 1`.
fn halvings_needed(x: &Rational) -> u32 {
    let one = Rational::one();
    let mut s = 0u32;
    let mut y = x.clone();
    while y >= one {
        y /= from_int(2);
        s += 1;
    }
    s
}

/// Magnitudes `y^m / m!` for `m = 0 ..= last`, as integers on the `10^-scale`
/// grid, each rounded in direction `dir`.
fn series_magnitudes(y: &Rational, last: u32, grid: &BigInt, dir: RoundingDirection) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(last as usize + 1);
    let mut a = grid.clone();
    out.push(a.clone());
    for m in 1..=last {
        a = div_directed(&(&a * y.numer()), &(y.denom() * BigInt::from(m)), dir);
        out.push(a.clone());
    }
    out
}

/// `[lo, hi]` for `e^-y` with `0 <= y < 1` as grid integers, before any squaring.
fn alternating_sandwich(y: &Rational, m_order: u32, grid: &BigInt) -> (BigInt, BigInt) {
    let down = series_magnitudes(y, m_order + 1, grid, Down);
    let up = series_magnitudes(y, m_order + 1, grid, Up);
    // M odd: S_M <= e^-y <= S_{M+1}
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for m in 0..=(m_order + 1) as usize {
        let even = m % 2 == 0;
        if m <= m_order as usize {
            if even {
                lo += &down[m];
            } else {
                lo -= &up[m];
            }
        }
        if even {
            hi += &up[m];
        } else {
            hi -= &down[m];
        }
    }
    (lo, hi)
}

fn exp_neg_with_halvings(x: &Rational, m_order: u32, scale: u32) -> Result<(Enclosure, u32)> {
    if x.is_negative() {
        return Err(Error::domain(format!("exp_neg_enclosure needs x >= 0, got {x}")));
    }
    if m_order.is_multiple_of(2) {
        return Err(Error::domain(format!("series order M must be odd, got {m_order}")));
    }
    if x.is_zero() {
        return Ok((Enclosure::point(Rational::one()), 0));
    }
    let s = halvings_needed(x);
    let y = x / Rational::from_integer(BigInt::one() << s);
    // per-term rounding accumulates over M + 2 terms
    let extra = (m_order + 2).ilog10() + 2;
    let (lo, hi) = alternating_sandwich(&y, m_order, &ten_pow(scale + extra));

    // Everything below is the value times 10^scale, i.e. truncate_directed at `scale`.
    let grid = ten_pow(scale);
    let shrink = ten_pow(extra);
    let mut lo = div_directed(&lo, &shrink, Down).max(BigInt::zero());
    let mut hi = div_directed(&hi, &shrink, Up).min(grid.clone());
    for _ in 0..s {
        lo = div_directed(&(&lo * &lo), &grid, Down);
        hi = div_directed(&(&hi * &hi), &grid, Up);
    }
    let enclosure = Enclosure::new(Rational::new(lo, grid.clone()), Rational::new(hi, grid))?;
    Ok((enclosure, s))
}

/// Enclosure of `e^-x` for `x >= 0` using the odd series order `m_order`.
///
/// Endpoints are truncated onto the `10^-truncation_scale` grid (lo down,
/// hi up) after summation and after every squaring.
pub fn exp_neg_enclosure(x: &Rational, m_order: u32, truncation_scale: u32) -> Result<Enclosure> {
    exp_neg_with_halvings(x, m_order, truncation_scale).map(|(e, _)| e)
}

/// Certified enclosure of `beta(k, n)` (and `pi = 1 - beta`).
pub fn beta_enclosure(query: &BetaQuery) -> Result<BetaEnclosureResult> {
    let BetaQuery { k, n, .. } = query;
    if n.is_zero() {
        return Err(Error::domain("sample space size n must be positive"));
    }
    if k <= &BigUint::one() {
        return Ok(BetaEnclosureResult::exact(k, n, Rational::zero()));
    }
    if k > n {
        // pigeonhole
        return Ok(BetaEnclosureResult::exact(k, n, Rational::one()));
    }

    let digits = query.target_digits;
    let order = match query.order {
        OrderChoice::Fixed(order) => order,
        OrderChoice::Auto => auto_select_order(k, n, &ten_pow_neg(digits + 4), query.max_order)?,
    };
    let ln = ln_pi_enclosure(k, n, order)?;
    let lower = ln.lower_bound(query.improved_lower).clone();
    let upper = ln.upper.clone();

    let s = halvings_needed(&upper);
    let scale = digits + 10 + s;
    let exp_target = ten_pow_neg(digits + 2);
    let mut m_order = 3u32;
    loop {
        // -ln pi > L gives beta > 1 - e^-L; -ln pi < U gives beta < 1 - e^-U
        let at_lower = exp_neg_enclosure(&lower, m_order, scale)?;
        let at_upper = exp_neg_enclosure(&upper, m_order, scale)?;
        if at_lower.width() < exp_target && at_upper.width() < exp_target {
            let one = Rational::one();
            let beta = Enclosure::new(&one - at_lower.hi(), &one - at_upper.lo())?;
            if query.order == OrderChoice::Auto && beta.width() >= ten_pow_neg(digits) {
                return Err(Error::PrecisionUnreachable(format!(
                    "enclosure width did not reach 10^-{digits} (k={k}, n={n}, N={order})"
                )));
            }
            return Ok(BetaEnclosureResult {
                k: k.clone(),
                n: n.clone(),
                ln_result: Some(ln),
                pi: beta.one_minus(),
                beta,
                m_used: Some(m_order),
                s_used: Some(s),
            });
        }
        if m_order >= query.max_series_terms {
            return Err(Error::PrecisionUnreachable(format!(
                "exponential series did not converge within M <= {} (k={k}, n={n}); \
                 use the exact product oracle instead",
                query.max_series_terms
            )));
        }
        m_order = (m_order * 2 + 1).min(query.max_series_terms | 1);
    }
}

/// Closed-form single-term enclosure of `beta(k, n)`:
/// `x - x^2 <= beta <= x + eps(k, n, 2)` with `x = k(k-1)/2n`.
pub fn beta_enclosure_m1(k: &BigUint, n: &BigUint) -> Result<Enclosure> {
    let ln = ln_pi_enclosure(k, n, 2)?;
    let x = ln.lower;
    let lo = &x - &x * &x;
    Enclosure::new(lo, ln.upper)
}

/// Absolute digits needed for `beta(k, n)` to carry `rel_digits` significant digits.
///
/// Uses `beta >= min(x/2, 1/2)` with `x = k(k-1)/2n`, valid for `2 <= k <= n`.
pub fn digits_for_relative(k: &BigUint, n: &BigUint, rel_digits: u32) -> u32 {
    let x = crate::oracle::expected_collisions(k, n);
    if x.is_zero() {
        return rel_digits;
    }
    let floor = (x / from_int(2)).min(Rational::new(BigInt::one(), BigInt::from(2)));
    let zeros = (-approx_log10(&floor)).ceil().max(0.0) as u32;
    rel_digits + zeros + 1
}
