//! Exact rationals, certified enclosures and directed-rounding output.
//!
//! Every non-rational quantity in this crate (logarithms, exponentials,
//! probabilities derived from them) is carried as an [`Enclosure`]: a pair of
//! exact rationals known to bracket the true value. Rounding only ever happens
//! through [`truncate_directed`], which moves a value onto the decimal grid
//! `10^-d` on a chosen side, so an enclosure can widen but never lose the
//! value it brackets.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact, always-reduced rational with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Side to which a value is moved when it is rounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoundingDirection {
    /// Toward negative infinity; never increases a value.
    Down,
    /// Toward positive infinity; never decreases a value.
    Up,
}

impl RoundingDirection {
    pub fn opposite(self) -> Self {
        match self {
            RoundingDirection::Down => RoundingDirection::Up,
            RoundingDirection::Up => RoundingDirection::Down,
        }
    }
}

/// Closed interval `[lo, hi]` of rationals bracketing some real quantity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain(format!("enclosure endpoints out of order: {lo} > {hi}")));
        }
        Ok(Enclosure { lo, hi })
    }

    /// Degenerate enclosure of an exactly known value.
    pub fn point(value: Rational) -> Self {
        Enclosure {
            lo: value.clone(),
            hi: value,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, value: &Rational) -> bool {
        &self.lo <= value && value <= &self.hi
    }

    /// True when `other` lies entirely inside `self`.
    pub fn encloses(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Enclosure of `1 - v` for every `v` in `self`.
    pub fn one_minus(&self) -> Self {
        let one = Rational::one();
        Enclosure {
            lo: &one - &self.hi,
            hi: &one - &self.lo,
        }
    }

    /// Multiplies both endpoints by a nonnegative exact factor.
    pub fn scale(&self, factor: &Rational) -> Result<Self> {
        if factor.is_negative() {
            return Err(Error::domain("enclosure scale factor must be nonnegative"));
        }
        Ok(Enclosure {
            lo: &self.lo * factor,
            hi: &self.hi * factor,
        })
    }

    pub fn into_parts(self) -> (Rational, Rational) {
        (self.lo, self.hi)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

pub fn ten_pow(d: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), d as usize)
}

/// `10^-d` as an exact rational.
pub fn ten_pow_neg(d: u32) -> Rational {
    Rational::new(BigInt::one(), ten_pow(d))
}

pub fn from_int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

pub fn from_uint(v: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from_biguint(Sign::Plus, v.clone()))
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Rounds `x` onto the grid of integer multiples of `10^-d` in direction `dir`.
///
/// The result's denominator divides `10^d` and it differs from `x` by less
/// than `10^-d`. Values already on the grid are returned unchanged.
pub fn truncate_directed(x: &Rational, d: u32, dir: RoundingDirection) -> Rational {
    let scale = ten_pow(d);
    let grid = div_directed(&(x.numer() * &scale), x.denom(), dir);
    Rational::new(grid, scale)
}

/// `num / den` rounded to an integer in direction `dir`; `den` must be positive.
pub(crate) fn div_directed(num: &BigInt, den: &BigInt, dir: RoundingDirection) -> BigInt {
    match dir {
        RoundingDirection::Down => num.div_floor(den),
        RoundingDirection::Up => num.div_ceil(den),
    }
}

/// Renders `x` with exactly `d` fractional digits, rounded in direction `dir`.
pub fn render_decimal(x: &Rational, d: u32, dir: RoundingDirection) -> String {
    let grid = truncate_directed(x, d, dir) * Rational::from_integer(ten_pow(d));
    debug_assert!(grid.is_integer());
    format_scaled_integer(&grid.to_integer(), d)
}

fn format_scaled_integer(value: &BigInt, d: u32) -> String {
    let digits = value.magnitude().to_str_radix(10);
    let width = d as usize + 1;
    let padded = if digits.len() < width {
        format!("{}{}", "0".repeat(width - digits.len()), digits)
    } else {
        digits
    };
    let split = padded.len() - d as usize;
    let sign = if value.is_negative() { "-" } else { "" };
    if d == 0 {
        format!("{sign}{padded}")
    } else {
        format!("{sign}{}.{}", &padded[..split], &padded[split..])
    }
}

/// Parses a plain decimal string (`-?digits(.digits)?`) into an exact rational.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let offset = s.len() - body.len();
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() {
        return Err(Error::Parse {
            position: offset,
            message: "expected digits".into(),
        });
    }
    if let Some(pos) = body.find(|c: char| !(c.is_ascii_digit() || c == '.')) {
        return Err(Error::Parse {
            position: offset + pos,
            message: "unexpected character".into(),
        });
    }
    if body.contains('.') && frac_part.is_empty() {
        return Err(Error::Parse {
            position: s.len(),
            message: "expected fractional digits".into(),
        });
    }
    let joined = format!("{int_part}{frac_part}");
    let mantissa: BigInt = joined.parse().map_err(|_| Error::Parse {
        position: offset,
        message: "malformed decimal".into(),
    })?;
    let value = Rational::new(mantissa, ten_pow(frac_part.len() as u32));
    Ok(if negative { -value } else { value })
}

/// Largest `p` with `2^p <= y`, for `y >= 1`.
fn floor_log2(y: &Rational) -> u64 {
    let num_bits = y.numer().bits();
    let den_bits = y.denom().bits();
    let mut p = num_bits.saturating_sub(den_bits);
    // bit lengths pin p to within one of the answer
    let two_p = |p: u64| Rational::from_integer(BigInt::one() << p);
    if y < &two_p(p) {
        p -= 1;
    } else if y >= &two_p(p + 1) {
        p += 1;
    }
    p
}

/// Binary fraction bits of `log2(m)` for `m` in `[1, 2)`, by repeated squaring.
///
/// With `dir == Down` the returned integer `b` satisfies `b / 2^bits <= log2(m)`;
/// with `dir == Up` it satisfies `log2(m) <= (b + 1) / 2^bits`. Intermediate
/// squares are truncated onto the `10^-guard` grid in direction `dir`.
fn log2_mantissa_bits(m: &Rational, bits: u32, guard: u32, dir: RoundingDirection) -> BigUint {
    // Each square is kept as an integer Q on the 10^-guard grid; after a halving
    // the current value is T / (2 * 10^guard), otherwise T / 10^guard.
    let grid = ten_pow(guard);
    let two_grid = &grid * 2;
    let four_grid = &grid * 4;
    let mut q = div_directed(&(m.numer() * m.numer() * &grid), &(m.denom() * m.denom()), dir);
    let mut acc = BigUint::zero();
    for step in 0..bits {
        acc <<= 1;
        let halved = q >= two_grid;
        if halved {
            acc |= BigUint::one();
        }
        if step + 1 == bits {
            break;
        }
        let divisor = if halved { &four_grid } else { &grid };
        q = div_directed(&(&q * &q), divisor, dir);
    }
    acc
}

/// Renders the exponent `e` of `x = 2^-e` with `frac_digits` fractional digits.
///
/// `dir` names the side of `x` that the printed exponent certifies:
/// `Down` prints `e` rounded up so that `2^-e <= x`, `Up` prints `e` rounded
/// down so that `2^-e >= x`.
pub fn render_log2_exponent(x: &Rational, frac_digits: u32, dir: RoundingDirection) -> Result<String> {
    if !x.is_positive() || x >= &Rational::one() {
        return Err(Error::domain(format!(
            "log2 exponent rendering needs 0 < x < 1, got {x}"
        )));
    }
    let y = x.recip();
    let p = floor_log2(&y);
    let mantissa = &y / Rational::from_integer(BigInt::one() << p);
    let int_part = from_int(p);
    if mantissa.is_one() {
        return Ok(render_decimal(&int_part, frac_digits, dir));
    }

    // 10^-frac needs about 3.33 bits per digit
    let mut bits = frac_digits * 3322 / 1000 + 16;
    let mut guard = frac_digits + 10;
    let e_dir = dir.opposite();
    let mut attempts = 0;
    loop {
        let denom = Rational::from_integer(BigInt::one() << bits);
        let lo_bits = log2_mantissa_bits(&mantissa, bits, guard, RoundingDirection::Down);
        let hi_bits = log2_mantissa_bits(&mantissa, bits, guard, RoundingDirection::Up);
        let e_lo = &int_part + Rational::from_integer(lo_bits.into()) / &denom;
        let e_hi = &int_part + Rational::from_integer(BigInt::from(hi_bits) + 1) / &denom;
        let (certified, other) = match e_dir {
            RoundingDirection::Up => (&e_hi, &e_lo),
            RoundingDirection::Down => (&e_lo, &e_hi),
        };
        let printed = render_decimal(certified, frac_digits, e_dir);
        // Both chains agreeing on the printed digits means the rounding is also tight.
        if printed == render_decimal(other, frac_digits, e_dir) || attempts >= 4 {
            return Ok(printed);
        }
        attempts += 1;
        bits += 32;
        guard += 10;
    }
}

/// Approximate base-10 magnitude, used only to size guard digits.
pub(crate) fn approx_log10(x: &Rational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    let log_mag = |v: &BigUint| {
        let bits = v.bits();
        let shift = bits.saturating_sub(64);
        let top = (v >> shift).to_f64().unwrap_or(f64::MAX);
        top.log10() + shift as f64 * std::f64::consts::LOG10_2
    };
    log_mag(n) - log_mag(d)
}
