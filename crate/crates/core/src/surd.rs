//! Exact finite sums `Σ q·√n` with rational `q` and squarefree `n`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{decimal_string, rational_string, BigRational};

/// Splits `n` as `outer² · inner` with `inner` squarefree.
///
/// Trial division runs only up to the cube root of what remains: once every
/// prime factor left is larger than that bound there are at most two of them,
/// so the remainder is `1`, a prime, a product of two distinct primes, or a
/// perfect square.
pub fn squarefree_split(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::zero());
    }
    let mut rest = n.clone();
    let mut outer = BigUint::one();
    let mut inner = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p * &p <= rest {
        let mut count = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            count += 1;
        }
        for _ in 0..count / 2 {
            outer *= &p;
        }
        if count % 2 == 1 {
            inner *= &p;
        }
        p += if p == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    let root = rest.sqrt();
    if &root * &root == rest && !rest.is_one() {
        outer *= root;
    } else {
        inner *= rest;
    }
    (outer, inner)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SurdValue {
    /// Radicand → coefficient. Radicands are squarefree, coefficients nonzero.
    terms: BTreeMap<BigUint, BigRational>,
}

impl SurdValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(q: BigRational) -> Self {
        Self::term(q, BigUint::one())
    }

    /// `coefficient · √radicand`, normalizing the radicand.
    pub fn term(coefficient: BigRational, radicand: impl Into<BigUint>) -> Self {
        let mut out = Self::zero();
        out.add_term(coefficient, radicand.into());
        out
    }

    /// `√n` for a nonnegative integer.
    pub fn sqrt(n: u64) -> Self {
        Self::term(BigRational::one(), BigUint::from(n))
    }

    /// `√q` for a nonnegative rational: `√(a/b) = √(ab)/b`.
    ///
    /// Panics on a negative argument.
    pub fn sqrt_rational(q: &BigRational) -> Self {
        assert!(!q.is_negative(), "square root of a negative rational");
        let num = q.numer().to_biguint().expect("nonnegative");
        let den = q.denom().to_biguint().expect("positive");
        Self::term(
            BigRational::new(BigInt::one(), BigInt::from(den.clone())),
            num * den,
        )
    }

    fn add_term(&mut self, coefficient: BigRational, radicand: BigUint) {
        if coefficient.is_zero() || radicand.is_zero() {
            return;
        }
        let (outer, inner) = squarefree_split(&radicand);
        let scaled = coefficient * BigRational::from_integer(BigInt::from(outer));
        let entry = self
            .terms
            .entry(inner.clone())
            .or_insert_with(BigRational::zero);
        *entry += scaled;
        if entry.is_zero() {
            self.terms.remove(&inner);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `√radicand` (radicand must already be squarefree).
    pub fn coefficient(&self, radicand: u64) -> BigRational {
        self.terms
            .get(&BigUint::from(radicand))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn rational_part(&self) -> BigRational {
        self.coefficient(1)
    }

    /// The value as a plain rational when it has no irrational terms.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 if self.terms.contains_key(&BigUint::one()) => Some(self.rational_part()),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &BigRational)> {
        self.terms.iter()
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        SurdValue {
            terms: self
                .terms
                .iter()
                .map(|(n, q)| (n.clone(), q * factor))
                .collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(n, q)| q.to_f64().unwrap_or(f64::NAN) * n.to_f64().unwrap_or(f64::NAN).sqrt())
            .sum()
    }

    /// Decimal rendering with `digits` places; each square root is evaluated
    /// with integer square roots at extra precision, so the result is exact up
    /// to the final rounding of the last place.
    pub fn decimal_string(&self, digits: usize) -> String {
        let guard = digits + 10;
        let scale = num_traits::pow(BigUint::from(10u32), guard);
        let mut total = BigRational::zero();
        for (n, q) in &self.terms {
            let root = (n * &scale * &scale).sqrt();
            let approx = BigRational::new(BigInt::from(root), BigInt::from(scale.clone()));
            total += q * approx;
        }
        decimal_string(&total, digits)
    }
}

impl From<BigRational> for SurdValue {
    fn from(q: BigRational) -> Self {
        Self::rational(q)
    }
}

impl Add<&SurdValue> for &SurdValue {
    type Output = SurdValue;
    fn add(self, rhs: &SurdValue) -> SurdValue {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for SurdValue {
    type Output = SurdValue;
    fn add(self, rhs: SurdValue) -> SurdValue {
        &self + &rhs
    }
}

impl AddAssign<&SurdValue> for SurdValue {
    fn add_assign(&mut self, rhs: &SurdValue) {
        for (n, q) in &rhs.terms {
            self.add_term(q.clone(), n.clone());
        }
    }
}

impl AddAssign for SurdValue {
    fn add_assign(&mut self, rhs: SurdValue) {
        *self += &rhs;
    }
}

impl Neg for &SurdValue {
    type Output = SurdValue;
    fn neg(self) -> SurdValue {
        self.scale(&-BigRational::one())
    }
}

impl Sub<&SurdValue> for &SurdValue {
    type Output = SurdValue;
    fn sub(self, rhs: &SurdValue) -> SurdValue {
        self + &(-rhs)
    }
}

impl Mul<&SurdValue> for &SurdValue {
    type Output = SurdValue;
    fn mul(self, rhs: &SurdValue) -> SurdValue {
        let mut out = SurdValue::zero();
        for (n1, q1) in &self.terms {
            for (n2, q2) in &rhs.terms {
                out.add_term(q1 * q2, n1 * n2);
            }
        }
        out
    }
}

impl std::iter::Sum for SurdValue {
    fn sum<I: Iterator<Item = SurdValue>>(iter: I) -> Self {
        iter.fold(SurdValue::zero(), |acc, x| acc + x)
    }
}

/// Canonical form: terms by increasing radicand, e.g. `12 + 4*sqrt(3)`,
/// `1/2*sqrt(2)`, `-sqrt(5)`, `0`.
impl fmt::Display for SurdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (n, q)) in self.terms.iter().enumerate() {
            let magnitude = q.abs();
            if i == 0 {
                if q.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if q.is_negative() { '-' } else { '+' })?;
            }
            if n.is_one() {
                write!(f, "{}", rational_string(&magnitude))?;
            } else if magnitude.is_one() {
                write!(f, "sqrt({n})")?;
            } else {
                write!(f, "{}*sqrt({n})", rational_string(&magnitude))?;
            }
        }
        Ok(())
    }
}
