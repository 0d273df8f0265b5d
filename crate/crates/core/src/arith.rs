//! Big integers and rationals, combinatorial numbers, and the `(d, k)` parameter pair.

use std::fmt;
use std::str::FromStr;

pub use num_bigint::BigInt;
use num_integer::Integer;
pub use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// `C(n, r)`, zero when `r < 0` or `r > n`.
pub fn binomial(n: u64, r: i64) -> BigInt {
    if r < 0 || r as u64 > n {
        return BigInt::zero();
    }
    let r = (r as u64).min(n - r as u64);
    let mut acc = BigInt::one();
    for i in 0..r {
        // Running product stays integral: acc = C(n, i) before the step.
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Eulerian number `A(n, m)`: permutations of `n` elements with exactly `m` descents.
pub fn eulerian(n: u64, m: u64) -> Result<BigInt> {
    if n == 0 || m >= n {
        return Err(domain(format!("eulerian({n}, {m}) requires 0 <= m < n")));
    }
    // Row-by-row recurrence A(n,m) = (m+1)A(n-1,m) + (n-m)A(n-1,m-1).
    let mut row = vec![BigInt::one()];
    for len in 2..=n {
        let mut next = vec![BigInt::zero(); len as usize];
        for j in 0..len as usize {
            let mut v = BigInt::zero();
            if j < row.len() {
                v += BigInt::from(j as u64 + 1) * &row[j];
            }
            if j >= 1 && j - 1 < row.len() {
                v += BigInt::from(len - j as u64) * &row[j - 1];
            }
            next[j] = v;
        }
        row = next;
    }
    Ok(row[m as usize].clone())
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `q^e` for any integer exponent; `0^0 = 1`.
pub fn pow(q: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"a/b"`, an integer, or a decimal such as `"-2.50"` or `"1.5e-2"`
/// into an exact rational. Decimals become fractions over a power of ten.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let mut value =
        int(BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?);
    value *= pow(&int(10), exponent - frac.len() as i64);
    Ok(if neg { -value } else { value })
}

/// Renders `q` as a decimal string with `digits` places after the point,
/// rounding half away from zero.
pub fn decimal_string(q: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = q.abs() * BigRational::from_integer(scale.clone());
    let rounded = (scaled + rat(1, 2)).floor().to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if q.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!(
            "{sign}{whole}.{:0>width$}",
            frac.to_string(),
            width = digits
        )
    }
}

/// Canonical text for a rational: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// The pair `(d, k)` with `d >= 1` and `k` an exact rational in `[1, d]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Params {
    d: usize,
    k: BigRational,
}

impl Params {
    pub fn new(d: usize, k: BigRational) -> Result<Self> {
        if d == 0 {
            return Err(domain("dimension d must be positive"));
        }
        if k < BigRational::one() || k > int(d as i64) {
            return Err(domain(format!(
                "k = {} must lie in [1, {d}]",
                rational_string(&k)
            )));
        }
        Ok(Params { d, k })
    }

    pub fn integer(d: usize, k: usize) -> Result<Self> {
        Self::new(d, int(k as i64))
    }

    pub fn parse(d: usize, k: &str) -> Result<Self> {
        Self::new(d, parse_rational(k)?)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> &BigRational {
        &self.k
    }

    pub fn floor_k(&self) -> usize {
        self.k
            .floor()
            .to_integer()
            .to_usize()
            .expect("k <= d fits in usize")
    }

    /// `k - floor(k)`, in `[0, 1)`.
    pub fn frac_k(&self) -> BigRational {
        self.k.fract()
    }

    pub fn is_integer_k(&self) -> bool {
        self.k.is_integer()
    }

    pub fn integer_k(&self) -> Option<usize> {
        self.is_integer_k().then(|| self.floor_k())
    }

    pub fn require_integer_k(&self, what: &str) -> Result<usize> {
        self.integer_k().ok_or_else(|| {
            Error::Unsupported(format!(
                "{what} requires integer k, got k = {}",
                rational_string(&self.k)
            ))
        })
    }

    pub fn k_f64(&self) -> f64 {
        to_f64(&self.k)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d={}, k={})", self.d, rational_string(&self.k))
    }
}
