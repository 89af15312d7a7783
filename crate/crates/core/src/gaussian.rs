//! Arithmetic in `Z[i]` and the decomposition `p = e² + 4f²`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numtheory::{self, exact_sqrt, is_prime, jacobi, Integer};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("gcd(0, 0) is undefined")]
    ZeroGcd,
    #[error("division by zero in Z[i]")]
    ZeroDivisor,
    #[error("{0} is not a prime congruent to 1 mod 4")]
    InvalidPrime(Integer),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianInt {
    pub re: Integer,
    pub im: Integer,
}

impl GaussianInt {
    pub fn new(re: impl Into<Integer>, im: impl Into<Integer>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn from_integer(n: impl Into<Integer>) -> Self {
        GaussianInt::new(n, 0)
    }

    pub fn one() -> Self {
        GaussianInt::new(1, 0)
    }

    pub fn i() -> Self {
        GaussianInt::new(0, 1)
    }

    /// The ramified prime `1 + i` above 2.
    pub fn one_plus_i() -> Self {
        GaussianInt::new(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm(&self) -> Integer {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussianInt {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn mul_i(&self) -> Self {
        GaussianInt {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    pub fn scale(&self, k: &Integer) -> Self {
        GaussianInt {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Quotient rounded to the nearest lattice point (ties toward +∞).
    pub fn div_round(&self, w: &GaussianInt) -> Result<GaussianInt, GaussError> {
        if w.is_zero() {
            return Err(GaussError::ZeroDivisor);
        }
        let n = w.norm();
        let num = self * &w.conj();
        let two_n: Integer = &n * 2u32;
        let round = |x: &Integer| (x * 2u32 + &n).div_floor(&two_n);
        Ok(GaussianInt {
            re: round(&num.re),
            im: round(&num.im),
        })
    }

    /// `self / w` when the division is exact.
    pub fn exact_div(&self, w: &GaussianInt) -> Result<Option<GaussianInt>, GaussError> {
        if w.is_zero() {
            return Err(GaussError::ZeroDivisor);
        }
        let n = w.norm();
        let num = self * &w.conj();
        let (qr, rr) = num.re.div_rem(&n);
        let (qi, ri) = num.im.div_rem(&n);
        Ok((rr.is_zero() && ri.is_zero()).then_some(GaussianInt { re: qr, im: qi }))
    }

    /// The associate with `re > 0` and `im ≥ 0`; zero stays zero.
    pub fn normalized(&self) -> GaussianInt {
        let mut z = self.clone();
        if z.is_zero() {
            return z;
        }
        while !(z.re.is_positive() && !z.im.is_negative()) {
            z = z.mul_i();
        }
        z
    }

    /// A square root in `Z[i]`, if one exists.
    pub fn sqrt(&self) -> Option<GaussianInt> {
        let n = exact_sqrt(&self.norm())?;
        let p2 = &n + &self.re;
        let q2 = &n - &self.re;
        if p2.is_odd() {
            return None;
        }
        let p = exact_sqrt(&(p2 / 2u32))?;
        let mut q = exact_sqrt(&(q2 / 2u32))?;
        if &p * &q * 2u32 != self.im.abs() {
            return None;
        }
        if self.im.is_negative() {
            q = -q;
        }
        Some(GaussianInt { re: p, im: q })
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl<'a> Mul<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: GaussianInt) -> GaussianInt {
        &self * &rhs
    }
}

impl<'a> Add<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: GaussianInt) -> GaussianInt {
        &self + &rhs
    }
}

impl<'a> Sub<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: GaussianInt) -> GaussianInt {
        &self - &rhs
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl std::iter::Product for GaussianInt {
    fn product<I: Iterator<Item = GaussianInt>>(iter: I) -> GaussianInt {
        iter.fold(GaussianInt::one(), |acc, z| &acc * &z)
    }
}

pub fn g_norm(z: &GaussianInt) -> Integer {
    z.norm()
}

/// Euclidean gcd, normalized to the first quadrant.
pub fn gauss_gcd(a: &GaussianInt, b: &GaussianInt) -> Result<GaussianInt, GaussError> {
    if a.is_zero() && b.is_zero() {
        return Err(GaussError::ZeroGcd);
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let q = a.div_round(&b)?;
        let r = &a - &(&q * &b);
        a = b;
        b = r;
    }
    Ok(a.normalized())
}

/// Whether `w` divides `z` in `Z[i]`.
pub fn divides(w: &GaussianInt, z: &GaussianInt) -> Result<bool, GaussError> {
    Ok(z.exact_div(w)?.is_some())
}

/// A prime `p ≡ 1 (mod 4)` written as `e² + 4f²` with `e` odd and `e, f > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoSquares {
    pub p: Integer,
    pub e: Integer,
    pub f: Integer,
}

impl TwoSquares {
    /// `e + 2fi`.
    pub fn pi(&self) -> GaussianInt {
        GaussianInt::new(self.e.clone(), &self.f * 2u32)
    }

    /// `e − 2fi`.
    pub fn pi_conj(&self) -> GaussianInt {
        self.pi().conj()
    }
}

pub fn two_squares(p: &Integer) -> Result<TwoSquares, GaussError> {
    if numtheory::small_mod(p, 4) != 1 || !is_prime(p) {
        return Err(GaussError::InvalidPrime(p.clone()));
    }
    let t = sqrt_minus_one_mod(p);
    let pi = gauss_gcd(&GaussianInt::from_integer(p.clone()), &GaussianInt::new(t, 1))?;
    let (odd, even) = if pi.re.is_odd() {
        (pi.re.abs(), pi.im.abs())
    } else {
        (pi.im.abs(), pi.re.abs())
    };
    let out = TwoSquares {
        p: p.clone(),
        e: odd,
        f: even / 2u32,
    };
    debug_assert_eq!(&out.e * &out.e + &out.f * &out.f * 4u32, *p);
    Ok(out)
}

/// A root of `t² ≡ −1 (mod p)` for prime `p ≡ 1 (mod 4)`.
fn sqrt_minus_one_mod(p: &Integer) -> Integer {
    let exponent: Integer = (p - 1u32) / 4u32;
    let mut c = Integer::from(2);
    loop {
        if jacobi(&c, p).expect("p is odd") == -1 {
            return c.modpow(&exponent, p);
        }
        c += Integer::one();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Roots;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    fn brute_two_squares(p: u64) -> (u64, u64) {
        let mut e = 1;
        while e * e < p {
            let r = p - e * e;
            if r % 4 == 0 {
                let f = (r / 4).sqrt();
                if f > 0 && 4 * f * f == r {
                    return (e, f);
                }
            }
            e += 2;
        }
        panic!("no decomposition for {p}");
    }

    #[test]
    fn norms() {
        assert_eq!(g_norm(&g(1, 1)), Integer::from(2));
        assert_eq!(g_norm(&g(1, 2)), Integer::from(5));
        assert_eq!(g_norm(&(g(1, 2) * g(1, -2))), Integer::from(25));
    }

    #[test]
    fn two_squares_examples() {
        for (p, e, f) in [(5, 1, 1), (17, 1, 2), (41, 5, 2), (29, 5, 1)] {
            let ts = two_squares(&Integer::from(p)).unwrap();
            assert_eq!((ts.e, ts.f), (Integer::from(e), Integer::from(f)), "p={p}");
        }
        assert!(two_squares(&Integer::from(7)).is_err());
        assert!(two_squares(&Integer::from(21)).is_err());
    }

    #[test]
    fn gcd_examples() {
        let d = gauss_gcd(&g(1, 2), &g(5, 0)).unwrap();
        assert_eq!(d.norm(), Integer::from(5));
        assert!(divides(&d, &g(1, 2)).unwrap());
        assert_eq!(gauss_gcd(&g(3, 0), &g(7, 0)).unwrap(), g(1, 0));
        assert_eq!(gauss_gcd(&g(2, 0), &g(1, 1)).unwrap(), g(1, 1));
        assert_eq!(gauss_gcd(&g(0, 0), &g(0, 0)), Err(GaussError::ZeroGcd));
    }

    #[test]
    fn divisibility() {
        assert!(divides(&g(1, 2), &g(5, 0)).unwrap());
        assert!(!divides(&g(1, 2), &g(1, -2)).unwrap());
        for x in [1i64, 3, 17, 12545, -9] {
            assert!(divides(&g(1, 1), &g(x, 1)).unwrap());
        }
        assert_eq!(divides(&g(0, 0), &g(1, 0)), Err(GaussError::ZeroDivisor));
    }

    #[test]
    fn square_roots() {
        assert_eq!(g(-3, 4).sqrt(), Some(g(1, 2)));
        assert_eq!(g(-3, -4).sqrt(), Some(g(1, -2)));
        assert_eq!(g(0, 2).sqrt(), Some(g(1, 1)));
        assert_eq!(g(-4, 0).sqrt(), Some(g(0, 2)));
        assert_eq!(g(0, 0).sqrt(), Some(g(0, 0)));
        assert!(g(2, 0).sqrt().is_none());
        assert!(g(1, 1).sqrt().is_none());
    }

    #[test]
    fn two_squares_exhaustive_below_ten_thousand() {
        for p in numtheory::primes_one_mod_four(10_000) {
            let ts = two_squares(&Integer::from(p)).unwrap();
            let (e, f) = brute_two_squares(p);
            assert_eq!((ts.e.clone(), ts.f.clone()), (Integer::from(e), Integer::from(f)));
            assert_eq!(ts.pi().norm(), Integer::from(p));
            assert_eq!(ts.pi_conj(), ts.pi().conj());
        }
    }

    proptest! {
        #[test]
        fn gcd_is_greatest_common_divisor(
            a in (-700i64..700, -700i64..700),
            b in (-700i64..700, -700i64..700),
            c in (-30i64..30, -30i64..30),
        ) {
            let c = g(c.0, c.1);
            prop_assume!(!c.is_zero());
            let a = &g(a.0, a.1) * &c;
            let b = &g(b.0, b.1) * &c;
            prop_assume!(!(a.is_zero() && b.is_zero()));
            let d = gauss_gcd(&a, &b).unwrap();
            prop_assert!(divides(&d, &a).unwrap());
            prop_assert!(divides(&d, &b).unwrap());
            prop_assert!(divides(&c, &d).unwrap());
            prop_assert!(d.re.is_positive() && !d.im.is_negative());
        }

        #[test]
        fn norm_is_multiplicative(a in (-10_000i64..10_000, -10_000i64..10_000), b in (-10_000i64..10_000, -10_000i64..10_000)) {
            let (a, b) = (g(a.0, a.1), g(b.0, b.1));
            prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        }

        #[test]
        fn squares_have_roots(a in (-100_000i64..100_000, -100_000i64..100_000)) {
            let z = g(a.0, a.1);
            let root = z.square().sqrt().unwrap();
            prop_assert!(root == z || root == -z);
        }
    }
}
