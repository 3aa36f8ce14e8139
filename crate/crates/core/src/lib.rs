//! Certified enclosures of birthday-collision probabilities.
//!
//! For `k` uniform samples from `n` values, `pi(k, n)` is the probability that
//! all samples are distinct and `beta(k, n) = 1 - pi(k, n)` the probability of
//! at least one collision. `-ln pi` is a power series whose coefficients are
//! power sums, computed exactly from Bernoulli numbers; an explicit tail bound
//! turns any truncation into a two-sided enclosure, and alternating-series
//! bounds on the exponential carry that enclosure over to `beta`.
//!
//! ```
//! use birthday_bounds::{beta_enclosure, render_decimal, BetaQuery, OrderChoice, RoundingDirection};
//!
//! let r = beta_enclosure(&BetaQuery::new(5u32, 365u32).order(OrderChoice::Fixed(2)).digits(7)).unwrap();
//! assert_eq!(render_decimal(r.beta.lo(), 7, RoundingDirection::Down), "0.0270253");
//! assert_eq!(render_decimal(r.beta.hi(), 7, RoundingDirection::Up), "0.0271377");
//! ```

pub mod bernoulli;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod probability;
pub mod rational;
pub mod tail;

pub use bernoulli::{bernoulli, faulhaber_poly, power_sum, BernoulliTable, FaulhaberPoly};
pub use error::{Error, Result};
pub use oracle::{
    binom_pi_factor, enclosed_pi_product, exact_beta, exact_pi, exact_pi_capped, expected_collisions,
    orbit_size_probabilities, OrbitProbabilities, DEFAULT_EXACT_CAP,
};
pub use probability::{
    beta_enclosure, beta_enclosure_m1, exp_neg_enclosure, BetaEnclosureResult, BetaQuery, OrderChoice,
};
pub use rational::{
    parse_decimal, render_decimal, render_log2_exponent, truncate_directed, Enclosure, Rational, RoundingDirection,
};
pub use tail::{auto_select_order, epsilon_tail, ln_pi_enclosure, ln_series_lower, LnEnclosureResult};
