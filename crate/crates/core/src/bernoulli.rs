//! Bernoulli numbers and Faulhaber power sums.
//!
//! Sign convention: this module uses `B^1 = +1/2`, the convention under which
//! `((k + B)^(m+1) - B^(m+1)) / (m+1)` expands to `1^m + 2^m + ... + k^m`.
//! Tables built with the more common `B_1 = -1/2` convention will give the
//! sum up to `k - 1` instead; do not mix the two when porting.

use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

/// Exact Bernoulli numbers `B^0 ..= B^max_index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliTable {
    pub fn new() -> Self {
        BernoulliTable {
            values: vec![Rational::one()],
        }
    }

    pub fn with_max_index(max_index: usize) -> Self {
        let mut table = Self::new();
        table.extend_to(max_index);
        table
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, m: usize) -> Option<&Rational> {
        self.values.get(m)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Grows the table until it holds `B^max_index`.
    ///
    /// Uses the formal relation `B^n = (B - 1)^n`: the `B^n` terms cancel,
    /// leaving `n B^(n-1) = sum_{j<n-1} C(n,j) (-1)^(n-j) B^j`.
    pub fn extend_to(&mut self, max_index: usize) {
        while self.values.len() <= max_index {
            let n = self.values.len() + 1;
            let mut acc = Rational::zero();
            let mut binom = BigInt::one();
            for (j, b) in self.values.iter().enumerate().take(n - 1) {
                if !b.is_zero() {
                    let term = Rational::from_integer(binom.clone()) * b;
                    if (n - j).is_multiple_of(2) {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                binom = binom * BigInt::from(n - j) / BigInt::from(j + 1);
            }
            self.values.push(acc / Rational::from_integer(BigInt::from(n)));
        }
    }
}

static SHARED_TABLE: LazyLock<RwLock<BernoulliTable>> = LazyLock::new(|| RwLock::new(BernoulliTable::new()));

/// Exact `B^m` under the `B^1 = +1/2` convention, from a shared memo table.
pub fn bernoulli(m: usize) -> Rational {
    if let Some(v) = SHARED_TABLE.read().expect("bernoulli table poisoned").get(m) {
        return v.clone();
    }
    let mut table = SHARED_TABLE.write().expect("bernoulli table poisoned");
    table.extend_to(m);
    table.values[m].clone()
}

fn bernoulli_prefix(max_index: usize) -> Vec<Rational> {
    {
        let table = SHARED_TABLE.read().expect("bernoulli table poisoned");
        if table.max_index() >= max_index {
            return table.values[..=max_index].to_vec();
        }
    }
    let mut table = SHARED_TABLE.write().expect("bernoulli table poisoned");
    table.extend_to(max_index);
    table.values[..=max_index].to_vec()
}

/// Polynomial `p(k, m) = sum_j c_j k^j` equal to `1^m + ... + k^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaulhaberPoly {
    exponent: u32,
    /// `coefficients[j - 1]` multiplies `k^j`, for `j = 1 ..= m + 1`.
    coefficients: Vec<Rational>,
    // Integer form over a common denominator, for fast Horner evaluation.
    common_denom: BigInt,
    scaled: Vec<BigInt>,
}

impl FaulhaberPoly {
    pub fn new(m: u32) -> Self {
        assert!(m >= 1, "power sums are defined here for m >= 1");
        let degree = m as usize + 1;
        let bern = bernoulli_prefix(degree);
        let inv = Rational::new(BigInt::one(), BigInt::from(degree));
        let mut coefficients = vec![Rational::zero(); degree];
        // coefficient of k^j is C(m+1, j) B^(m+1-j) / (m+1)
        let mut binom = BigInt::one();
        for j in 0..=degree {
            if j >= 1 {
                let b = &bern[degree - j];
                coefficients[j - 1] = Rational::from_integer(binom.clone()) * b * &inv;
            }
            binom = binom * BigInt::from(degree - j) / BigInt::from(j + 1);
        }
        let common_denom = coefficients.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled = coefficients
            .iter()
            .map(|c| c.numer() * (&common_denom / c.denom()))
            .collect();
        FaulhaberPoly {
            exponent: m,
            coefficients,
            common_denom,
            scaled,
        }
    }

    /// The power `m` being summed.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    /// Coefficients of `k^1 ..= k^(m+1)`; there is no constant term.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn coefficient(&self, j: usize) -> Rational {
        if j == 0 || j > self.coefficients.len() {
            Rational::zero()
        } else {
            self.coefficients[j - 1].clone()
        }
    }

    pub fn eval(&self, k: &BigInt) -> Rational {
        let mut acc = BigInt::zero();
        for c in self.scaled.iter().rev() {
            acc = (acc + c) * k;
        }
        Rational::new(acc, self.common_denom.clone())
    }
}

static SHARED_POLYS: LazyLock<RwLock<Vec<Option<Arc<FaulhaberPoly>>>>> = LazyLock::new(|| RwLock::new(Vec::new()));

/// Faulhaber polynomial for exponent `m >= 1`, memoized.
pub fn faulhaber_poly(m: u32) -> Arc<FaulhaberPoly> {
    let idx = m as usize;
    if let Some(Some(p)) = SHARED_POLYS.read().expect("poly cache poisoned").get(idx) {
        return Arc::clone(p);
    }
    let poly = Arc::new(FaulhaberPoly::new(m));
    let mut cache = SHARED_POLYS.write().expect("poly cache poisoned");
    if cache.len() <= idx {
        cache.resize(idx + 1, None);
    }
    Arc::clone(cache[idx].get_or_insert(poly))
}

/// Exact `1^m + 2^m + ... + k^m` for `m >= 1`.
pub fn power_sum(k: &BigUint, m: u32) -> Rational {
    if k.is_zero() {
        return Rational::zero();
    }
    faulhaber_poly(m).eval(&BigInt::from(k.clone()))
}

/// Same as [`power_sum`], taking the upper limit as an exact rational integer.
pub(crate) fn power_sum_at(k: &Rational, m: u32) -> Rational {
    debug_assert!(k.is_integer());
    faulhaber_poly(m).eval(k.numer())
}
