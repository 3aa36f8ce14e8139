//! Command-line front end.
//!
//! Output is line-oriented `key=value` text. Exit codes: 0 on success, 2 for
//! malformed input, 3 when the parameters fall outside what an operation can
//! certify (pigeonhole region for `bound`, size or iteration caps).

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::bernoulli::{bernoulli, power_sum};
use crate::error::Error;
use crate::oracle::{binom_pi_factor, exact_pi, expected_collisions, orbit_size_probabilities};
use crate::probability::{beta_enclosure, digits_for_relative, BetaQuery, OrderChoice};
use crate::rational::{render_decimal, render_log2_exponent, Enclosure, Rational};
use crate::tail::{DEFAULT_MAX_ORDER, MAX_ORDER_ENV};
use crate::RoundingDirection::{self, Down, Up};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INAPPLICABLE: i32 = 3;

/// Parses `DECIMAL` or `DECIMAL^DECIMAL` into an exact nonnegative integer.
pub fn parse_int_expr(s: &str) -> Result<BigUint, Error> {
    let err = |position: usize, message: &str| Error::Parse {
        position,
        message: message.to_string(),
    };
    if let Some(pos) = s.find(|c: char| !(c.is_ascii_digit() || c == '^')) {
        return Err(err(pos, "expected a decimal digit or '^'"));
    }
    let mut parts = s.split('^');
    let base = parts.next().unwrap_or_default();
    if base.is_empty() {
        return Err(err(0, "expected a decimal integer"));
    }
    let base: BigUint = base.parse().map_err(|_| err(0, "malformed integer"))?;
    match (parts.next(), parts.next()) {
        (None, _) => Ok(base),
        (Some(exp), None) => {
            let at = s.find('^').unwrap_or(0) + 1;
            if exp.is_empty() {
                return Err(err(at, "expected an exponent after '^'"));
            }
            let exp: u32 = exp.parse().map_err(|_| err(at, "exponent does not fit in 32 bits"))?;
            Ok(base.pow(exp))
        }
        (Some(_), Some(_)) => {
            let second = s.match_indices('^').nth(1).map(|(i, _)| i).unwrap_or(0);
            Err(err(second, "only one '^' is allowed"))
        }
    }
}

fn parse_big(s: &str) -> Result<BigUint, String> {
    parse_int_expr(s).map_err(|e| e.to_string())
}

fn parse_order(s: &str) -> Result<OrderChoice, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(OrderChoice::Auto);
    }
    match s.parse::<u32>() {
        Ok(n) if n >= 2 => Ok(OrderChoice::Fixed(n)),
        _ => Err(format!("N must be 'auto' or an integer >= 2, got '{s}'")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Decimal,
    Rational,
    Log2,
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct QueryArgs {
    /// Number of samples (e.g. 23 or 2^32).
    #[arg(long, value_parser = parse_big)]
    pub k: BigUint,
    /// Size of the sample space (e.g. 365 or 2^128).
    #[arg(long, value_parser = parse_big)]
    pub n: BigUint,
    /// Fractional digits to certify.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub digits: u32,
    /// Series order N, or "auto".
    #[arg(long = "N", default_value = "auto", value_parser = parse_order)]
    pub order: OrderChoice,
    #[arg(long, value_enum, default_value_t = OutputFormat::Decimal)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Certified bounds on the collision probability.
    Bound {
        #[command(flatten)]
        query: QueryArgs,
        /// Add a certified lower bound on the first neglected series term.
        #[arg(long)]
        improved_lower: bool,
    },
    /// Exact collision probability from the product formula.
    Exact {
        #[arg(long, value_parser = parse_big)]
        k: BigUint,
        #[arg(long, value_parser = parse_big)]
        n: BigUint,
    },
    /// Expected number of colliding pairs, k(k-1)/2n.
    Expected {
        #[arg(long, value_parser = parse_big)]
        k: BigUint,
        #[arg(long, value_parser = parse_big)]
        n: BigUint,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
        digits: u32,
    },
    /// Exact Bernoulli number B^m (convention B^1 = +1/2).
    Bernoulli {
        #[arg(long, value_parser = clap::value_parser!(u32))]
        m: u32,
    },
    /// Exact power sum 1^m + ... + k^m.
    Powersum {
        #[arg(long, value_parser = parse_big)]
        k: BigUint,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
    },
    /// Enclosure of C(n,k) k! / n^k.
    BinomFactor {
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Orbit-size probabilities for a uniformly random self-map.
    Orbit {
        #[command(flatten)]
        query: QueryArgs,
    },
}

#[derive(Debug, Parser)]
#[command(
    name = "birthday-bounds",
    version,
    about = "Certified birthday-collision probabilities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A parsed invocation together with its environment-derived limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliRequest {
    pub command: Command,
    pub max_order: u32,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => EXIT_INVALID,
            Error::Domain(_) | Error::PrecisionUnreachable(_) | Error::SizeLimit(_) => EXIT_INAPPLICABLE,
        };
        Outcome::fail(code, format!("error: {e}"))
    }
}

/// Parses arguments (including the program name) and runs the command.
pub fn run_args<I, T>(args: I, max_order_env: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, text)
            };
        }
    };
    let max_order = match max_order_env {
        None => DEFAULT_MAX_ORDER,
        Some(v) => match v.trim().parse::<u32>() {
            Ok(cap) if cap >= 2 => cap,
            _ => {
                return Outcome::fail(
                    EXIT_INVALID,
                    format!("error: {MAX_ORDER_ENV} must be an integer >= 2, got '{v}'"),
                )
            }
        },
    };
    run(&CliRequest {
        command: cli.command,
        max_order,
    })
}

pub fn run(request: &CliRequest) -> Outcome {
    let result = match &request.command {
        Command::Bound { query, improved_lower } => bound(query, *improved_lower, request.max_order),
        Command::Exact { k, n } => exact(k, n),
        Command::Expected { k, n, digits } => expected(k, n, *digits),
        Command::Bernoulli { m } => Ok(format!("bernoulli={}\n", bernoulli(*m as usize))),
        Command::Powersum { k, m } => Ok(format!("powersum={}\n", power_sum(k, *m))),
        Command::BinomFactor { query } => binom_factor(query),
        Command::Orbit { query } => orbit(query),
    };
    match result {
        Ok(text) => Outcome::ok(text),
        Err(e) => e.into(),
    }
}

fn render_value(x: &Rational, digits: u32, format: OutputFormat, dir: RoundingDirection) -> Result<String, Error> {
    match format {
        OutputFormat::Decimal => Ok(render_decimal(x, digits, dir)),
        OutputFormat::Rational => Ok(x.to_string()),
        OutputFormat::Log2 => {
            if x.is_zero() {
                Ok("inf".to_string())
            } else if x.is_one() {
                Ok(render_decimal(&Rational::zero(), digits, dir))
            } else {
                render_log2_exponent(x, digits, dir)
            }
        }
    }
}

fn push_enclosure(out: &mut String, name: &str, e: &Enclosure, digits: u32, format: OutputFormat) -> Result<(), Error> {
    let lo = render_value(e.lo(), digits, format, Down)?;
    let hi = render_value(e.hi(), digits, format, Up)?;
    let _ = writeln!(out, "{name}_lower={lo}");
    let _ = writeln!(out, "{name}_upper={hi}");
    Ok(())
}

/// Absolute digits needed so that `format` can print `digits` certified digits.
fn working_digits(q: &QueryArgs) -> u32 {
    match q.format {
        OutputFormat::Log2 => digits_for_relative(&q.k, &q.n, q.digits + 3),
        _ => q.digits,
    }
}

fn bound(q: &QueryArgs, improved_lower: bool, max_order: u32) -> Result<String, Error> {
    if q.k > q.n {
        return Err(Error::Domain(format!(
            "tail bound inapplicable: k - 1/2 >= n (k={}, n={}); by pigeonhole beta = 1 exactly",
            q.k, q.n
        )));
    }
    let query = BetaQuery::new(q.k.clone(), q.n.clone())
        .order(q.order)
        .digits(working_digits(q))
        .improved_lower(improved_lower)
        .max_order(max_order);
    let r = beta_enclosure(&query)?;
    let mut out = String::new();
    if let Some(ln) = &r.ln_result {
        let lower = ln.lower_bound(improved_lower);
        match q.format {
            OutputFormat::Rational => {
                let _ = writeln!(out, "ln_lower={lower}");
                let _ = writeln!(out, "ln_epsilon={}", ln.epsilon);
                let _ = writeln!(out, "ln_upper={}", ln.upper);
            }
            OutputFormat::Decimal => {
                let _ = writeln!(out, "ln_lower={}", render_decimal(lower, q.digits, Down));
                let _ = writeln!(out, "ln_upper={}", render_decimal(&ln.upper, q.digits, Up));
            }
            OutputFormat::Log2 => {}
        }
    }
    push_enclosure(&mut out, "beta", &r.beta, q.digits, q.format)?;
    if q.format != OutputFormat::Log2 {
        push_enclosure(&mut out, "pi", &r.pi, q.digits, q.format)?;
    }
    let meta = |v: Option<u32>| v.map_or_else(|| "none".to_string(), |v| v.to_string());
    let _ = writeln!(out, "N={}", meta(r.ln_result.as_ref().map(|l| l.order)));
    let _ = writeln!(out, "M={}", meta(r.m_used));
    let _ = writeln!(out, "s={}", meta(r.s_used));
    Ok(out)
}

fn exact(k: &BigUint, n: &BigUint) -> Result<String, Error> {
    let pi = exact_pi(k, n)?;
    let beta = Rational::one() - &pi;
    Ok(format!("beta={beta}\npi={pi}\n"))
}

fn expected(k: &BigUint, n: &BigUint, digits: u32) -> Result<String, Error> {
    if n.is_zero() {
        return Err(Error::Domain("sample space size n must be positive".into()));
    }
    let e = expected_collisions(k, n);
    Ok(format!(
        "expected={e}\nexpected_decimal={}\n",
        render_decimal(&e, digits, Down)
    ))
}

fn binom_factor(q: &QueryArgs) -> Result<String, Error> {
    let e = binom_pi_factor(&q.k, &q.n, working_digits(q))?;
    let mut out = String::new();
    push_enclosure(&mut out, "factor", &e, q.digits, q.format)?;
    let _ = writeln!(out, "exact={}", e.is_point());
    Ok(out)
}

fn orbit(q: &QueryArgs) -> Result<String, Error> {
    let digits = match q.format {
        // P(size = k) can be far smaller than P(size > k); size for the smaller one
        OutputFormat::Log2 => {
            let k_over_n = q.k.to_f64().unwrap_or(f64::MAX) / q.n.to_f64().unwrap_or(f64::MAX);
            let extra = (-k_over_n.log10()).ceil().max(0.0) as u32;
            working_digits(q) + extra
        }
        _ => q.digits,
    };
    let o = orbit_size_probabilities(&q.k, &q.n, digits)?;
    let mut out = String::new();
    push_enclosure(&mut out, "p_size_exactly_k", &o.p_exact_size_k, q.digits, q.format)?;
    push_enclosure(&mut out, "p_size_greater_k", &o.p_size_greater_k, q.digits, q.format)?;
    let _ = writeln!(out, "exact={}", o.exact);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_expressions() {
        assert_eq!(
            parse_int_expr("2^128").unwrap().to_string(),
            "340282366920938463463374607431768211456"
        );
        assert_eq!(parse_int_expr("365").unwrap(), BigUint::from(365u32));
        assert_eq!(parse_int_expr("10^0").unwrap(), BigUint::one());
    }

    #[test]
    fn int_expression_errors() {
        assert!(matches!(parse_int_expr("2^3^2"), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(parse_int_expr(""), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_int_expr("2^"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_int_expr("^5"), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_int_expr("12a"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_int_expr("-4"), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_int_expr("2 ^3"), Err(Error::Parse { position: 1, .. })));
    }

    #[test]
    fn order_parsing() {
        assert_eq!(parse_order("auto"), Ok(OrderChoice::Auto));
        assert_eq!(parse_order("8"), Ok(OrderChoice::Fixed(8)));
        assert!(parse_order("1").is_err());
        assert!(parse_order("x").is_err());
    }
}
