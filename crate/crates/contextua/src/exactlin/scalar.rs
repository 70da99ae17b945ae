use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact element of the field generated over the rationals by sqrt(2) and
/// the imaginary unit, stored as `a + b*r2 + c*i + d*i*r2` with reduced
/// arbitrary-precision rational coefficients.
///
/// The text form follows a fixed grammar: terms joined by `+`/`-`, each term a
/// rational (`3`, `-1/2`) optionally followed by a unit (`r2`, `i`, `i*r2`),
/// or a bare unit. Printing is canonical: terms in the order `1, r2, i, i*r2`,
/// zero terms omitted, a lone zero printed as `0`, no whitespace.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    c: BigRational,
    d: BigRational,
}

fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Scalar { a, b, c, d }
    }

    pub fn zero() -> Self {
        Scalar::from_int(0)
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(rat_int(n), rat_int(0), rat_int(0), rat_int(0))
    }

    /// Exact rational `num/den`; `den` must be nonzero.
    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            rat_int(0),
            rat_int(0),
            rat_int(0),
        ))
    }

    pub fn rt2() -> Self {
        Scalar::new(rat_int(0), rat_int(1), rat_int(0), rat_int(0))
    }

    pub fn i() -> Self {
        Scalar::new(rat_int(0), rat_int(0), rat_int(1), rat_int(0))
    }

    /// The four rational coordinates `(a, b, c, d)`.
    pub fn coords(&self) -> (&BigRational, &BigRational, &BigRational, &BigRational) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// True when the imaginary coordinates vanish.
    pub fn is_real(&self) -> bool {
        self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.is_real() && self.b.is_zero()
    }

    /// Complex conjugate: negates the `i` and `i*r2` coordinates.
    pub fn conj(&self) -> Self {
        Scalar::new(
            self.a.clone(),
            self.b.clone(),
            -self.c.clone(),
            -self.d.clone(),
        )
    }

    /// Field automorphism sending `r2` to `-r2`.
    pub fn rt2_conj(&self) -> Self {
        Scalar::new(
            self.a.clone(),
            -self.b.clone(),
            self.c.clone(),
            -self.d.clone(),
        )
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Rationalize in two stages: multiplying by the complex conjugate
        // leaves a real denominator a + b*r2, and multiplying that by its
        // r2-conjugate leaves a plain rational.
        let num = self.conj();
        let den = self * &num;
        debug_assert!(den.is_real());
        let den_rt2 = den.rt2_conj();
        let num = &num * &den_rt2;
        let q = &den.a * &den.a - rat_int(2) * &den.b * &den.b;
        debug_assert!(!q.is_zero());
        Ok(Scalar::new(&num.a / &q, &num.b / &q, &num.c / &q, &num.d / &q))
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Sign of a real scalar: -1, 0, or +1. Errors when the value is not real.
    pub fn real_sign(&self) -> Result<i8> {
        if !self.is_real() {
            return Err(Error::domain(format!("scalar {self} is not real")));
        }
        let sa = match (self.a.is_zero(), self.a.is_positive()) {
            (true, _) => 0i8,
            (false, true) => 1,
            (false, false) => -1,
        };
        let sb = match (self.b.is_zero(), self.b.is_positive()) {
            (true, _) => 0i8,
            (false, true) => 1,
            (false, false) => -1,
        };
        if sb == 0 {
            return Ok(sa);
        }
        if sa == 0 || sa == sb {
            return Ok(sb);
        }
        // Opposite signs: compare a^2 against 2 b^2. They cannot tie because
        // r2 is irrational.
        let a2 = &self.a * &self.a;
        let b2 = rat_int(2) * &self.b * &self.b;
        Ok(if a2 > b2 { sa } else { sb })
    }

    /// Total order on real scalars by numeric value.
    pub fn cmp_real(&self, other: &Scalar) -> Result<Ordering> {
        let diff = self - other;
        Ok(match diff.real_sign()? {
            0 => Ordering::Equal,
            s if s > 0 => Ordering::Greater,
            _ => Ordering::Less,
        })
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(
            &self.a + &rhs.a,
            &self.b + &rhs.b,
            &self.c + &rhs.c,
            &self.d + &rhs.d,
        )
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(
            &self.a - &rhs.a,
            &self.b - &rhs.b,
            &self.c - &rhs.c,
            &self.d - &rhs.d,
        )
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(
            -self.a.clone(),
            -self.b.clone(),
            -self.c.clone(),
            -self.d.clone(),
        )
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        // Treat both factors as (x + y*i) with x, y in Q(r2), where
        // (a1 + b1 r2)(a2 + b2 r2) = (a1 a2 + 2 b1 b2) + (a1 b2 + b1 a2) r2
        // and i^2 = -1.
        let two = rat_int(2);
        let f_mul = |a1: &BigRational, b1: &BigRational, a2: &BigRational, b2: &BigRational| {
            (a1 * a2 + &two * b1 * b2, a1 * b2 + b1 * a2)
        };
        let (xx_a, xx_b) = f_mul(&self.a, &self.b, &rhs.a, &rhs.b);
        let (yy_a, yy_b) = f_mul(&self.c, &self.d, &rhs.c, &rhs.d);
        let (xy_a, xy_b) = f_mul(&self.a, &self.b, &rhs.c, &rhs.d);
        let (yx_a, yx_b) = f_mul(&self.c, &self.d, &rhs.a, &rhs.b);
        Scalar::new(xx_a - yy_a, xx_b - yy_b, xy_a + yx_a, xy_b + yx_b)
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_term(out: &mut String, q: &BigRational, unit: &str) {
    if q.is_zero() {
        return;
    }
    if out.is_empty() {
        if q.is_negative() {
            out.push('-');
        }
    } else {
        out.push(if q.is_negative() { '-' } else { '+' });
    }
    let m = q.abs();
    if unit.is_empty() {
        out.push_str(&m.to_string());
    } else {
        if !m.is_one() {
            out.push_str(&m.to_string());
        }
        out.push_str(unit);
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        fmt_term(&mut out, &self.a, "");
        fmt_term(&mut out, &self.b, "r2");
        fmt_term(&mut out, &self.c, "i");
        fmt_term(&mut out, &self.d, "i*r2");
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Unit {
    One,
    Rt2,
    I,
    IRt2,
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::parse(format!("invalid scalar {:?}: {msg}", self.src))
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        self.src[start..self.pos]
            .parse::<BigInt>()
            .map_err(|e| self.err(&e.to_string()))
    }

    fn rational(&mut self) -> Result<BigRational> {
        let num = self.digits()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.digits()?;
            if den.is_zero() {
                return Err(self.err("denominator must be positive"));
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    fn unit(&mut self) -> Result<Unit> {
        match self.peek() {
            Some(b'i') => {
                self.pos += 1;
                if self.peek() == Some(b'*') {
                    if self.bytes[self.pos..].starts_with(b"*r2") {
                        self.pos += 3;
                        Ok(Unit::IRt2)
                    } else {
                        Err(self.err("expected i*r2"))
                    }
                } else {
                    Ok(Unit::I)
                }
            }
            Some(b'r') => {
                if self.bytes[self.pos..].starts_with(b"r2") {
                    self.pos += 2;
                    Ok(Unit::Rt2)
                } else {
                    Err(self.err("expected r2"))
                }
            }
            _ => Err(self.err("expected a unit")),
        }
    }

    fn term(&mut self) -> Result<(BigRational, Unit)> {
        match self.peek() {
            Some(b'0'..=b'9') => {
                let q = self.rational()?;
                match self.peek() {
                    Some(b'i') | Some(b'r') => Ok((q, self.unit()?)),
                    _ => Ok((q, Unit::One)),
                }
            }
            Some(b'i') | Some(b'r') => Ok((BigRational::one(), self.unit()?)),
            _ => Err(self.err("expected a term")),
        }
    }

    fn scalar(&mut self) -> Result<Scalar> {
        if self.src.is_empty() {
            return Err(self.err("empty input"));
        }
        let mut acc = Scalar::zero();
        let mut negate = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        loop {
            let (mut q, unit) = self.term()?;
            if negate {
                q = -q;
            }
            match unit {
                Unit::One => acc.a += q,
                Unit::Rt2 => acc.b += q,
                Unit::I => acc.c += q,
                Unit::IRt2 => acc.d += q,
            }
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(_) => return Err(self.err("expected + or -")),
            }
            self.pos += 1;
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parser::new(s).scalar()
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e: Error| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sc(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    #[test]
    fn rt2_squares_to_two() {
        assert_eq!(&Scalar::rt2() * &Scalar::rt2(), Scalar::from_int(2));
    }

    #[test]
    fn i_squares_to_minus_one() {
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
    }

    #[test]
    fn conjugate_product_is_norm() {
        let z = sc("1+i");
        assert_eq!(&z * &z.conj(), Scalar::from_int(2));
    }

    #[test]
    fn inverse_of_one_plus_rt2() {
        let z = sc("1+r2");
        let inv = z.inv().unwrap();
        assert_eq!(inv, sc("-1+r2"));
        assert_eq!(&z * &inv, Scalar::one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Scalar::one().div(&Scalar::zero()), Err(Error::DivisionByZero));
        assert_eq!(Scalar::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn parses_grammar_examples() {
        assert_eq!(sc("1"), Scalar::one());
        assert_eq!(sc("-1/2"), Scalar::from_ratio(-1, 2).unwrap());
        assert_eq!(sc("r2"), Scalar::rt2());
        assert_eq!(
            sc("1/2+1/2i"),
            &Scalar::from_ratio(1, 2).unwrap()
                + &(&Scalar::from_ratio(1, 2).unwrap() * &Scalar::i())
        );
        assert_eq!(
            sc("3-2r2"),
            &Scalar::from_int(3) - &(&Scalar::from_int(2) * &Scalar::rt2())
        );
        assert_eq!(sc("i*r2"), &Scalar::i() * &Scalar::rt2());
        assert_eq!(sc("-3/4i*r2").to_string(), "-3/4i*r2");
    }

    #[test]
    fn prints_canonically() {
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!(sc("0").to_string(), "0");
        assert_eq!(sc("r2+1").to_string(), "1+r2");
        assert_eq!(sc("i-1").to_string(), "-1+i");
        assert_eq!(sc("1i").to_string(), "i");
        assert_eq!(sc("2/4").to_string(), "1/2");
        assert_eq!(sc("1+1").to_string(), "2");
        assert_eq!(sc("1-1").to_string(), "0");
        assert_eq!(sc("-r2-i").to_string(), "-r2-i");
    }

    #[test]
    fn rejects_malformed_text() {
        for bad in [
            "", " ", "1 + 2", "+1", "1.5", "r", "r3", "i*", "i*r", "x", "1/0", "--1", "1+", "2r",
            "1//2", "r2r2", "1i2",
        ] {
            assert!(bad.parse::<Scalar>().is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn real_sign_handles_mixed_terms() {
        assert_eq!(sc("3-2r2").real_sign().unwrap(), 1); // 3 > 2.828
        assert_eq!(sc("-3+2r2").real_sign().unwrap(), -1);
        assert_eq!(sc("1-r2").real_sign().unwrap(), -1);
        assert_eq!(sc("0").real_sign().unwrap(), 0);
        assert!(sc("i").real_sign().is_err());
    }

    #[test]
    fn cmp_real_orders_values() {
        assert_eq!(sc("r2").cmp_real(&sc("3/2")).unwrap(), Ordering::Less);
        assert_eq!(sc("r2").cmp_real(&sc("7/5")).unwrap(), Ordering::Greater);
        assert_eq!(sc("1/2").cmp_real(&sc("2/4")).unwrap(), Ordering::Equal);
    }

    fn arb_rational() -> impl Strategy<Value = BigRational> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (arb_rational(), arb_rational(), arb_rational(), arb_rational())
            .prop_map(|(a, b, c, d)| Scalar::new(a, b, c, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn addition_commutes(x in arb_scalar(), y in arb_scalar()) {
            prop_assert_eq!(&x + &y, &y + &x);
        }

        #[test]
        fn multiplication_commutes(x in arb_scalar(), y in arb_scalar()) {
            prop_assert_eq!(&x * &y, &y * &x);
        }

        #[test]
        fn multiplication_associates(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        }

        #[test]
        fn multiplication_distributes(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        }

        #[test]
        fn nonzero_scalars_invert(x in arb_scalar()) {
            prop_assume!(!x.is_zero());
            prop_assert_eq!(&x * &x.inv().unwrap(), Scalar::one());
        }

        #[test]
        fn print_parse_roundtrip(x in arb_scalar()) {
            let text = x.to_string();
            let back: Scalar = text.parse().unwrap();
            prop_assert_eq!(&back, &x);
            prop_assert_eq!(back.to_string(), text);
        }

        #[test]
        fn conjugation_is_multiplicative(x in arb_scalar(), y in arb_scalar()) {
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        }
    }
}
