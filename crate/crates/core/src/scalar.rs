//! Exact coefficients: big rationals and the cyclotomic field `Q[q]/(Φ_p(q))`.
//!
//! Every coefficient in the engine is a [`CycScalar`]. The field order `p` is
//! carried by each value; `p = 1` (and `p = 2`, where `q = -1`) degenerate to
//! plain rationals. Elements are stored in the power basis `1, q, …, q^{φ(p)-1}`,
//! so structural equality is field equality.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ScalarError;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Euler's totient.
pub fn euler_phi(p: u32) -> usize {
    let mut n = p;
    let mut result = p;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            while n % f == 0 {
                n /= f;
            }
            result -= result / f;
        }
        f += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den is monic with integer coefficients, so the quotient stays integral.
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

fn cyclotomic_table() -> &'static Mutex<HashMap<u32, Arc<Vec<BigInt>>>> {
    static TABLE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The p-th cyclotomic polynomial, ascending coefficients, monic of degree φ(p).
pub fn cyclotomic_polynomial(p: u32) -> Arc<Vec<BigInt>> {
    assert!(p >= 1, "cyclotomic order must be positive");
    if let Some(hit) = cyclotomic_table().lock().unwrap().get(&p) {
        return hit.clone();
    }
    // x^p - 1 = prod_{d | p} Φ_d(x)
    let mut poly = vec![BigInt::zero(); p as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[p as usize] = BigInt::one();
    for d in 1..p {
        if p % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            poly = poly_div_exact(&poly, &phi_d);
        }
    }
    let poly = Arc::new(poly);
    cyclotomic_table()
        .lock()
        .unwrap()
        .insert(p, poly.clone());
    poly
}

/// An element of `Q[q]/(Φ_p(q))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycScalar {
    p: u32,
    coeffs: Vec<Rational>,
}

impl CycScalar {
    pub fn zero(p: u32) -> Self {
        CycScalar {
            p,
            coeffs: vec![Rational::zero(); euler_phi(p)],
        }
    }

    pub fn one(p: u32) -> Self {
        Self::from_rational(p, Rational::one())
    }

    pub fn from_rational(p: u32, r: Rational) -> Self {
        let mut s = Self::zero(p);
        s.coeffs[0] = r;
        s
    }

    pub fn from_int(p: u32, n: i64) -> Self {
        Self::from_rational(p, Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(p: u32, num: i64, den: i64) -> Self {
        Self::from_rational(p, Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Build from power-basis coordinates of any length; higher powers are
    /// reduced modulo Φ_p.
    pub fn from_coeffs(p: u32, raw: Vec<Rational>) -> Self {
        let phi = euler_phi(p);
        let mut coeffs = raw;
        if coeffs.len() < phi {
            coeffs.resize(phi, Rational::zero());
        }
        reduce_mod_cyclotomic(p, &mut coeffs);
        CycScalar { p, coeffs }
    }

    /// The generator `q`.
    pub fn q(p: u32) -> Self {
        Self::q_power(p, 1)
    }

    /// `q^k`, with `k` taken modulo `p`.
    pub fn q_power(p: u32, k: i64) -> Self {
        let e = k.rem_euclid(p as i64) as usize;
        let mut raw = vec![Rational::zero(); e + 1];
        raw[e] = Rational::one();
        Self::from_coeffs(p, raw)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Power-basis coordinates, length φ(p).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in the prime field.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_field(&self, other: &Self) -> Result<(), ScalarError> {
        if self.p != other.p {
            Err(ScalarError::FieldMismatch {
                left: self.p,
                right: other.p,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_field(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycScalar { p: self.p, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_field(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycScalar { p: self.p, coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_field(other)?;
        let n = self.coeffs.len();
        if n == 1 {
            return Ok(CycScalar {
                p: self.p,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            });
        }
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        reduce_mod_cyclotomic(self.p, &mut prod);
        Ok(CycScalar {
            p: self.p,
            coeffs: prod,
        })
    }

    pub fn inverse(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.coeffs.len() == 1 {
            return Ok(CycScalar {
                p: self.p,
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        let modulus: Vec<Rational> = cyclotomic_polynomial(self.p)
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let inv = poly_inverse_mod(&self.coeffs, &modulus).ok_or(ScalarError::DivisionByZero)?;
        Ok(Self::from_coeffs(self.p, inv))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_field(other)?;
        self.try_mul(&other.inverse()?)
    }

    /// Multi-term values need parentheses when printed as a coefficient.
    pub fn is_compound(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() > 1
    }

    /// True when the printed form begins with a minus sign.
    pub fn is_negative_leading(&self) -> bool {
        self.coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map_or(false, |c| c.is_negative())
    }
}

fn reduce_mod_cyclotomic(p: u32, v: &mut Vec<Rational>) {
    let phi = euler_phi(p);
    if v.len() > phi {
        let modulus = cyclotomic_polynomial(p);
        for i in (phi..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut v[i], Rational::zero());
            for (j, m) in modulus.iter().enumerate().take(phi) {
                if !m.is_zero() {
                    v[i - phi + j] -= &c * m;
                }
            }
        }
        v.truncate(phi);
    }
}

fn trim(v: &mut Vec<Rational>) {
    while v.len() > 1 && v.last().map_or(false, Zero::is_zero) {
        v.pop();
    }
}

fn poly_divrem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let mut den = den.to_vec();
    trim(&mut den);
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![Rational::zero()], rem);
    }
    let lead = den[dd].clone();
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    rem.truncate(dd.max(1));
    trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn is_zero_poly(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Extended Euclid: the inverse of `a` modulo `m`, if `gcd(a, m)` is a unit.
fn poly_inverse_mod(a: &[Rational], m: &[Rational]) -> Option<Vec<Rational>> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![Rational::zero()], vec![Rational::one()]);
    while !is_zero_poly(&r1) {
        let (quot, rem) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&quot, &s1));
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    trim(&mut r0);
    if r0.len() != 1 || r0[0].is_zero() {
        return None;
    }
    let g = r0[0].clone();
    Some(s0.into_iter().map(|c| c / &g).collect())
}

impl Add for &CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        self.try_add(rhs).expect("scalar field mismatch")
    }
}

impl Sub for &CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        self.try_sub(rhs).expect("scalar field mismatch")
    }
}

impl Mul for &CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        self.try_mul(rhs).expect("scalar field mismatch")
    }
}

impl Add for CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: CycScalar) -> CycScalar {
        &self + &rhs
    }
}

impl Sub for CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: CycScalar) -> CycScalar {
        &self - &rhs
    }
}

impl Mul for CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: CycScalar) -> CycScalar {
        &self * &rhs
    }
}

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        assert_eq!(self.p, rhs.p, "scalar field mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, rhs: &CycScalar) {
        assert_eq!(self.p, rhs.p, "scalar field mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", fmt_rational(&mag))?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}", fmt_rational(&mag))?;
                        if !mag.denom().is_one() {
                            write!(f, " ")?;
                        }
                    }
                    if k == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (p={})", self.p)
    }
}

/// `n!` as a rational scalar.
pub fn factorial(p: u32, n: u32) -> CycScalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    CycScalar::from_rational(p, Rational::from_integer(acc))
}

/// Greatest common divisor, used when validating primitive-root exponents.
pub fn gcd(a: u32, b: u32) -> u32 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: u32, c: &[i64]) -> CycScalar {
        CycScalar::from_coeffs(
            p,
            c.iter().map(|&x| Rational::from_integer(x.into())).collect(),
        )
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        let show = |p| -> Vec<i64> {
            cyclotomic_polynomial(p)
                .iter()
                .map(|c| c.to_string().parse().unwrap())
                .collect()
        };
        assert_eq!(show(1), vec![-1, 1]);
        assert_eq!(show(2), vec![1, 1]);
        assert_eq!(show(3), vec![1, 1, 1]);
        assert_eq!(show(4), vec![1, 0, 1]);
        assert_eq!(show(6), vec![1, -1, 1]);
        assert_eq!(show(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn one_plus_q_times_minus_q_is_one_at_order_three() {
        let a = s(3, &[1, 1]);
        let b = s(3, &[0, -1]);
        assert!((&a * &b).is_one());
        assert_eq!(a.inverse().unwrap(), b);
    }

    #[test]
    fn q_power_examples() {
        assert_eq!(CycScalar::q_power(2, 5), CycScalar::from_int(2, -1));
        assert!(CycScalar::q_power(3, 3).is_one());
        assert_eq!(CycScalar::q_power(3, 2), s(3, &[-1, -1]));
        assert!(CycScalar::q_power(1, 7).is_one());
        let q = CycScalar::q(2);
        assert!((&q * &q).is_one());
    }

    #[test]
    fn unit_inverse_and_division_errors() {
        assert!(CycScalar::one(5).inverse().unwrap().is_one());
        assert_eq!(
            CycScalar::zero(5).inverse(),
            Err(ScalarError::DivisionByZero)
        );
        assert!(matches!(
            CycScalar::one(3).try_add(&CycScalar::one(4)),
            Err(ScalarError::FieldMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn rendering() {
        assert_eq!(s(5, &[1, -2, 1]).to_string(), "1 - 2q + q^2");
        assert_eq!(s(3, &[0, -1]).to_string(), "-q");
        assert_eq!(CycScalar::from_ratio(1, -2, 3).to_string(), "-2/3");
        assert_eq!(CycScalar::zero(4).to_string(), "0");
        assert_eq!(CycScalar::q_power(3, 2).to_string(), "-1 - q");
    }
}
