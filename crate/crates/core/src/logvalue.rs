//! Exact real numbers of the form `Σ c_p ln p` with rational `c_p`.
//!
//! Because the logarithms of distinct primes are linearly independent over
//! the rationals, two such numbers are equal exactly when their coefficient
//! maps are equal. The sign of a nonzero value is found by evaluating a
//! rigorous enclosure with fixed-point big integers and doubling the working
//! precision until the enclosure excludes zero.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Rational;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LogValue {
    coeffs: BTreeMap<BigUint, Rational>,
}

/// Prime factorisation with multiplicities. `n` must be positive.
pub fn factorize(n: &BigUint) -> BTreeMap<BigUint, usize> {
    assert!(!n.is_zero(), "cannot factor zero");
    match n.to_u64() {
        Some(small) => num_prime::nt_funcs::factorize64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect(),
        None => num_prime::nt_funcs::factorize(n.clone()),
    }
}

impl LogValue {
    pub fn zero() -> Self {
        LogValue::default()
    }

    /// `ln n` for a positive integer.
    pub fn ln_int(n: &BigUint) -> Self {
        let mut coeffs = BTreeMap::new();
        for (p, e) in factorize(n) {
            coeffs.insert(p, Rational::from_integer(BigInt::from(e)));
        }
        LogValue { coeffs }
    }

    pub fn ln_usize(n: usize) -> Self {
        Self::ln_int(&BigUint::from(n as u64))
    }

    /// `ln r` for a positive rational.
    pub fn ln_rational(r: &Rational) -> Self {
        assert!(r.is_positive(), "logarithm of a non-positive rational");
        let num = r.numer().magnitude();
        let den = r.denom().magnitude();
        &Self::ln_int(num) - &Self::ln_int(den)
    }

    /// Builds a value from `(prime, coefficient)` pairs. The keys must be primes.
    pub fn from_prime_coeffs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (u64, Rational)>,
    {
        let mut out = LogValue::zero();
        for (p, c) in pairs {
            out.add_term(BigUint::from(p), c);
        }
        out
    }

    fn add_term(&mut self, p: BigUint, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(p) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<BigUint, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, p: u64) -> Rational {
        self.coeffs
            .get(&BigUint::from(p))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return LogValue::zero();
        }
        LogValue {
            coeffs: self
                .coeffs
                .iter()
                .map(|(p, c)| (p.clone(), c * r))
                .collect(),
        }
    }

    /// Sign of the represented real number.
    pub fn sign(&self) -> Ordering {
        self.sign_with_offset(&Rational::zero())
    }

    /// Sign of `self + offset`.
    ///
    /// Terminates for every input: a nonzero combination of prime logarithms
    /// is never a nonzero rational.
    pub fn sign_with_offset(&self, offset: &Rational) -> Ordering {
        if self.is_zero() {
            return offset.cmp(&Rational::zero());
        }
        let mut bits = 64u64;
        loop {
            let (lo, hi) = self.enclosure(offset, bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            assert!(bits < 1 << 24, "sign refinement did not separate from zero");
            bits *= 2;
        }
    }

    /// Compares the represented values of `self` and `other`.
    pub fn cmp_value(&self, other: &LogValue) -> Ordering {
        (self - other).sign()
    }

    /// Integers `lo <= 2^bits (self + offset) <= hi`.
    pub fn enclosure(&self, offset: &Rational, bits: u64) -> (BigInt, BigInt) {
        let scale = BigInt::one() << bits;
        let shifted = offset * Rational::from_integer(scale);
        let mut lo = shifted.floor().to_integer();
        let mut hi = shifted.ceil().to_integer();
        let ln2 = ln2_bounds(bits);
        for (p, c) in &self.coeffs {
            let (l, h) = ln_bounds(p, bits, &ln2);
            let n = c.numer();
            let d = c.denom();
            let (first, second) = if n.is_positive() { (&l, &h) } else { (&h, &l) };
            lo += (n * first).div_floor(d);
            hi += ceil_div(&(n * second), d);
        }
        (lo, hi)
    }

    /// Nearest double, from a 128-bit enclosure.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = 128u64;
        let (lo, hi) = self.enclosure(&Rational::zero(), bits);
        let mid: BigInt = (lo + hi) / 2;
        mid.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(bits as i32))
    }
}

fn ceil_div(n: &BigInt, d: &BigInt) -> BigInt {
    -((-n).div_floor(d))
}

/// Enclosure of `2^bits atanh(a/b)` for `0 <= a/b <= 1/3`.
///
/// Partial sums of the odd power series are truncated term by term; each
/// truncated power is low by at most `j + 1` units and each quotient by at
/// most two more, and the tail after the first vanishing power is below two
/// units.
fn atanh_bounds(a: &BigUint, b: &BigUint, bits: u64) -> (BigInt, BigInt) {
    let a2 = a * a;
    let b2 = b * b;
    let mut power = (BigUint::one() << bits) * a / b;
    let mut sum = BigUint::zero();
    let mut j: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigUint::from(2 * j + 1);
        power = power * &a2 / &b2;
        j += 1;
    }
    let lo = BigInt::from(sum);
    let hi = &lo + BigInt::from(2 * j + 3);
    (lo, hi)
}

fn ln2_bounds(bits: u64) -> (BigInt, BigInt) {
    let (lo, hi) = atanh_bounds(&BigUint::from(1u32), &BigUint::from(3u32), bits);
    (lo * 2, hi * 2)
}

/// Enclosure of `2^bits ln m` for a positive integer `m`, via
/// `ln m = k ln 2 + 2 atanh((m - 2^k)/(m + 2^k))` with `2^k <= m < 2^(k+1)`.
fn ln_bounds(m: &BigUint, bits: u64, ln2: &(BigInt, BigInt)) -> (BigInt, BigInt) {
    let k = m.bits() - 1;
    let pow = BigUint::one() << k;
    let kk = BigInt::from(k);
    let mut lo = &ln2.0 * &kk;
    let mut hi = &ln2.1 * &kk;
    if *m != pow {
        let (al, ah) = atanh_bounds(&(m - &pow), &(m + &pow), bits);
        lo += al * 2;
        hi += ah * 2;
    }
    (lo, hi)
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl Add<&LogValue> for &LogValue {
    type Output = LogValue;
    fn add(self, rhs: &LogValue) -> LogValue {
        let mut out = self.clone();
        for (p, c) in &rhs.coeffs {
            out.add_term(p.clone(), c.clone());
        }
        out
    }
}

impl Sub<&LogValue> for &LogValue {
    type Output = LogValue;
    fn sub(self, rhs: &LogValue) -> LogValue {
        let mut out = self.clone();
        for (p, c) in &rhs.coeffs {
            out.add_term(p.clone(), -c.clone());
        }
        out
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        &self + &rhs
    }
}

impl Sub for LogValue {
    type Output = LogValue;
    fn sub(self, rhs: LogValue) -> LogValue {
        &self - &rhs
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue {
            coeffs: self.coeffs.into_iter().map(|(p, c)| (p, -c)).collect(),
        }
    }
}

impl Neg for &LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        -self.clone()
    }
}

impl Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        iter.fold(LogValue::zero(), |acc, x| &acc + &x)
    }
}

impl<'a> Sum<&'a LogValue> for LogValue {
    fn sum<I: Iterator<Item = &'a LogValue>>(iter: I) -> LogValue {
        iter.fold(LogValue::zero(), |acc, x| &acc + x)
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (p, c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            if mag.is_one() {
                write!(f, "ln {p}")?;
            } else {
                write!(f, "{mag} ln {p}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    #[test]
    fn factorisation_examples() {
        let six = LogValue::ln_usize(6);
        assert_eq!(six, LogValue::from_prime_coeffs([(2, ratio(1, 1)), (3, ratio(1, 1))]));
        let twelve = LogValue::ln_usize(12);
        assert_eq!(twelve.coeff(2), ratio(2, 1));
        assert_eq!(twelve.coeff(3), ratio(1, 1));
        assert!(LogValue::ln_usize(1).is_zero());
    }

    #[test]
    fn cancellation_removes_entries() {
        let v = &LogValue::ln_usize(6) - &LogValue::ln_usize(2);
        assert_eq!(v, LogValue::ln_usize(3));
        assert!((&v - &v).is_zero());
    }

    #[test]
    fn float_rendering_matches_std() {
        for m in [2usize, 3, 5, 7, 10, 97, 1000, 123_456_789] {
            let v = LogValue::ln_usize(m);
            assert!((v.to_f64() - (m as f64).ln()).abs() < 1e-12);
        }
        let v = LogValue::ln_rational(&ratio(4, 3)).scale(&ratio(1, 3));
        assert!((v.to_f64() - (4f64 / 3.0).ln() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn close_values_are_separated() {
        // 2^10 = 1024 > 1000 = 10^3, difference about 0.0237.
        let a = LogValue::ln_usize(1024);
        let b = LogValue::ln_usize(1000);
        assert_eq!(a.cmp_value(&b), Ordering::Greater);
        // 3^12 = 531441 vs 2^19 = 524288.
        let c = LogValue::ln_usize(3).scale(&ratio(12, 1));
        let d = LogValue::ln_usize(2).scale(&ratio(19, 1));
        assert_eq!(c.cmp_value(&d), Ordering::Greater);
    }

    #[test]
    fn offsets_against_rationals() {
        let ln2 = LogValue::ln_usize(2);
        // ln 2 = 0.693147...
        assert_eq!(ln2.sign_with_offset(&ratio(-693, 1000)), Ordering::Greater);
        assert_eq!(ln2.sign_with_offset(&ratio(-694, 1000)), Ordering::Less);
        assert_eq!(LogValue::zero().sign_with_offset(&ratio(-1, 7)), Ordering::Less);
    }

    #[test]
    fn large_prime_keys() {
        let p = BigUint::from(1_000_000_007u64) * BigUint::from(998_244_353u64);
        let v = LogValue::ln_int(&(&p * &p));
        assert_eq!(v.coeffs().len(), 2);
        assert!((v.to_f64() - 2.0 * ((1_000_000_007f64).ln() + (998_244_353f64).ln())).abs() < 1e-9);
    }
}
