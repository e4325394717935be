//! Exact counting: reduced diagrams by size, spheres of k-tuples, densities.
//!
//! All counts are arbitrary-precision. The number `r_n` of reduced diagrams
//! with n carets satisfies
//!
//! ```text
//! r_n = C_n^2 - sum_{m<n} r_m * forest_count(m+1, n-m)
//! ```
//!
//! where `C_n` is the Catalan number and `forest_count(q, j)` counts ordered
//! q-tuples of trees with j carets total: every tree pair splits uniquely as
//! a reduced core refined by a common forest. Spheres of unordered k-tuples
//! come in two flavors — total size exactly n ([`Model::Sum`]) or maximum
//! size exactly n ([`Model::Max`]) — counted with multiset coefficients.
//! Ratios r_n/r_{n+1} approach 1/mu with mu = 8 + 4*sqrt(3); comparisons
//! against mu stay exact by bracketing sqrt(3) in a rational interval.

use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use thiserror::Error;

use crate::diagram::{Element, TreeDiagram};
use crate::tree::BinaryTree;

/// Catalan number C_n.
pub fn catalan(n: usize) -> BigUint {
    binomial(BigUint::from(2 * n), BigUint::from(n)) / BigUint::from(n + 1)
}

/// Ordered q-tuples of binary trees with j carets in total:
/// `(q / (2j + q)) * binom(2j + q, j)`.
pub fn forest_count(q: usize, j: usize) -> BigUint {
    assert!(q >= 1, "a forest has at least one root");
    if j == 0 {
        return BigUint::one();
    }
    binomial(BigUint::from(2 * j + q), BigUint::from(j)) * BigUint::from(q)
        / BigUint::from(2 * j + q)
}

static R_MEMO: Lazy<Mutex<Vec<BigUint>>> = Lazy::new(|| Mutex::new(vec![BigUint::one()]));

/// Number of reduced tree diagrams with exactly n carets.
pub fn r_count(n: usize) -> BigUint {
    let mut memo = R_MEMO.lock().unwrap();
    while memo.len() <= n {
        let next = memo.len();
        let total = catalan(next) * catalan(next);
        let refined: BigUint = (0..next)
            .map(|m| &memo[m] * forest_count(m + 1, next - m))
            .sum();
        memo.push(total - refined);
    }
    memo[n].clone()
}

/// Cumulative count R_n = r_0 + … + r_n (ball size in the diagram metric).
pub fn r_cumulative(n: usize) -> BigUint {
    (0..=n).map(r_count).sum()
}

/// All reduced elements with exactly n carets, canonically sorted.
pub fn enumerate_reduced(n: usize) -> Vec<Element> {
    let trees = BinaryTree::all_with_carets(n);
    let mut out = Vec::new();
    for s in &trees {
        for t in &trees {
            let e = TreeDiagram::new(s.clone(), t.clone())
                .expect("equal caret counts")
                .reduce();
            if e.size() == n {
                out.push(e);
            }
        }
    }
    out.sort();
    out
}

/// Which statistic of a k-tuple the sphere radius measures.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Model {
    /// Total of the member sizes.
    Sum,
    /// Maximum member size.
    Max,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Sum => "sum",
            Model::Max => "max",
        })
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(Model::Sum),
            "max" => Ok(Model::Max),
            other => Err(format!("unknown model {other:?}: expected \"sum\" or \"max\"")),
        }
    }
}

/// Multisets of size t drawn from n distinguishable objects:
/// `binom(n + t - 1, t)`.
pub fn multiset_coeff(n: &BigUint, t: usize) -> BigUint {
    if t == 0 {
        return BigUint::one();
    }
    if n.is_zero() {
        return BigUint::zero();
    }
    binomial(n + BigUint::from(t - 1), BigUint::from(t))
}

fn sphere_sum_count(k: usize, n: usize) -> BigUint {
    // multisets of k elements with member sizes summing to n; DP over sizes
    // with a multiset coefficient per size class (size 1 is empty)
    let mut dp = vec![vec![BigUint::zero(); n + 1]; k + 1];
    dp[0][0] = BigUint::one();
    for s in (0..=n).filter(|&s| s != 1) {
        let class = r_count(s);
        let mut next = dp.clone();
        for used in 0..k {
            for total in 0..=n {
                if dp[used][total].is_zero() {
                    continue;
                }
                for t in 1..=(k - used) {
                    let Some(new_total) = total.checked_add(s * t).filter(|&w| w <= n) else {
                        break;
                    };
                    let add = &dp[used][total] * multiset_coeff(&class, t);
                    next[used + t][new_total] += add;
                }
            }
        }
        dp = next;
    }
    dp[k][n].clone()
}

fn sphere_max_count(k: usize, n: usize) -> BigUint {
    let all = multiset_coeff(&r_cumulative(n), k);
    let below = if n == 0 {
        BigUint::zero()
    } else {
        multiset_coeff(&r_cumulative(n - 1), k)
    };
    all - below
}

/// Unordered k-tuples (multisets) whose size statistic equals n.
pub fn sphere_count(k: usize, n: usize, model: Model) -> BigUint {
    assert!(k >= 1, "tuples have arity at least 1");
    match model {
        Model::Sum => sphere_sum_count(k, n),
        Model::Max => sphere_max_count(k, n),
    }
}

/// Ordered k-tuples whose size statistic equals n.
pub fn ordered_count(k: usize, n: usize, model: Model) -> BigUint {
    assert!(k >= 1, "tuples have arity at least 1");
    match model {
        Model::Sum => {
            let mut dp = vec![BigUint::zero(); n + 1];
            dp[0] = BigUint::one();
            for _ in 0..k {
                let mut next = vec![BigUint::zero(); n + 1];
                for total in 0..=n {
                    if dp[total].is_zero() {
                        continue;
                    }
                    for s in (0..=(n - total)).filter(|&s| s != 1) {
                        next[total + s] += &dp[total] * r_count(s);
                    }
                }
                dp = next;
            }
            dp[n].clone()
        }
        Model::Max => {
            let all = r_cumulative(n).pow(k as u32);
            let below = if n == 0 {
                BigUint::zero()
            } else {
                r_cumulative(n - 1).pow(k as u32)
            };
            all - below
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("radius {n} too small for this density: need at least {min}")]
    RadiusTooSmall { n: usize, min: usize },
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact density of the generating set S inside the radius-n sphere:
/// `sphere(k, n - shift) / sphere(k, n)` with shift 8 (sum) or 6 (max).
pub fn density_s(k: usize, n: usize, model: Model) -> Result<BigRational, CountError> {
    let shift = match model {
        Model::Sum => 8,
        Model::Max => 6,
    };
    if n < shift {
        return Err(CountError::RadiusTooSmall { n, min: shift });
    }
    Ok(ratio(
        sphere_count(k, n - shift, model),
        sphere_count(k, n, model),
    ))
}

/// Closed-form bracket around [`density_s`], when the sphere bounds apply
/// (sum: n ≥ k + 8, max: n ≥ k + 6); `None` below that.
pub fn density_envelope(k: usize, n: usize, model: Model) -> Option<(BigRational, BigRational)> {
    match model {
        Model::Sum => {
            if n < k + 8 {
                return None;
            }
            // r_{m-k+1} <= sphere_sum(k, m) <= r_{m+k-1} for m >= k
            let lo = ratio(r_count(n - 8 - k + 1), r_count(n + k - 1));
            let hi = ratio(r_count(n - 8 + k - 1), r_count(n - k + 1));
            Some((lo, hi))
        }
        Model::Max => {
            if n < k + 6 {
                return None;
            }
            // r_m^k / k! <= sphere_max(k, m) <= k * r_m^k for m >= k
            let kf: BigUint = (1..=k as u64).product::<u64>().into();
            let top = r_count(n - 6).pow(k as u32);
            let bot = r_count(n).pow(k as u32);
            let lo = ratio(top.clone(), &bot * &kf * BigUint::from(k));
            let hi = ratio(top * kf * BigUint::from(k), bot);
            Some((lo, hi))
        }
    }
}

/// A closed rational interval certifying where an irrational value lies.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn add(&self, other: &RatInterval) -> Self {
        RatInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &RatInterval) -> Self {
        RatInterval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn mul(&self, other: &RatInterval) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }

    pub fn scale(&self, by: &BigRational) -> Self {
        self.mul(&RatInterval::point(by.clone()))
    }

    /// Reciprocal; the interval must not contain zero.
    pub fn recip(&self) -> Self {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "interval straddles zero"
        );
        RatInterval::new(self.hi.recip(), self.lo.recip())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = RatInterval::point(BigRational::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    /// Every point of self is below every point of other.
    pub fn strictly_below(&self, other: &RatInterval) -> bool {
        self.hi < other.lo
    }
}

fn big10(exp: u32) -> BigUint {
    BigUint::from(10u32).pow(exp)
}

/// sqrt(3) bracketed to 14 decimal digits.
pub fn sqrt3() -> RatInterval {
    let scaled = (BigUint::from(3u32) * big10(28)).sqrt();
    let den = BigInt::from(big10(14));
    RatInterval::new(
        BigRational::new(BigInt::from(scaled.clone()), den.clone()),
        BigRational::new(BigInt::from(scaled + BigUint::one()), den),
    )
}

/// The growth constant mu = 8 + 4*sqrt(3) of the reduced-diagram counts.
pub fn mu_interval() -> RatInterval {
    let eight = RatInterval::point(BigRational::from_integer(8.into()));
    eight.add(&sqrt3().scale(&BigRational::from_integer(4.into())))
}

/// mu^{-j}, bracketed.
pub fn mu_inv_pow(j: usize) -> RatInterval {
    mu_interval().recip().pow(j)
}

/// Fixed-point decimal rendering of a rational, truncated toward zero.
pub fn decimal_string(r: &BigRational, digits: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let (mut rem, den) = (a.numer().clone(), a.denom().clone());
    let int = &rem / &den;
    rem %= &den;
    let mut out = String::new();
    if neg && !(int.is_zero() && rem.is_zero() && digits == 0) {
        out.push('-');
    }
    out.push_str(&int.to_string());
    if digits > 0 {
        out.push('.');
        for _ in 0..digits {
            rem *= BigInt::from(10);
            let d = &rem / &den;
            rem %= &den;
            out.push_str(&d.to_string());
        }
    }
    out
}
