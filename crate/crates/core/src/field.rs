//! Exact ground fields: the rationals and prime fields of odd characteristic.
//!
//! Every value carries its field, so mixing elements of different fields is
//! caught. The `try_*` methods report a mismatch as an error; the operator
//! impls treat it as a programming error and panic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
}

/// A field of characteristic different from two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec(FieldKind);

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec(FieldKind::Rationals);

    pub fn rationals() -> Self {
        Self::RATIONALS
    }

    /// The prime field `F_p`. Rejects `p = 2`, composites, and moduli that do
    /// not fit in 32 bits.
    pub fn prime(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidField(
                "characteristic 2 is not supported".into(),
            ));
        }
        if p > u32::MAX as u64 {
            return Err(Error::InvalidField(format!("modulus {p} is too large")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(FieldSpec(FieldKind::Prime(p)))
    }

    pub fn kind(&self) -> FieldKind {
        self.0
    }

    pub fn characteristic(&self) -> u64 {
        match self.0 {
            FieldKind::Rationals => 0,
            FieldKind::Prime(p) => p,
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self.0 {
            FieldKind::Rationals => None,
            FieldKind::Prime(p) => Some(p),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.0, FieldKind::Prime(_))
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(*self)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(*self)
    }

    pub fn int(&self, v: i64) -> Scalar {
        Scalar::from_i64(v, *self)
    }

    /// Every element of a prime field, in residue order.
    pub fn elements(&self) -> Option<impl Iterator<Item = Scalar>> {
        let p = self.modulus()?;
        Some((0..p).map(move |v| Scalar(Repr::Residue { value: v, p })))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::RATIONALS);
        }
        let digits = s
            .strip_prefix('F')
            .ok_or_else(|| Error::InvalidField(format!("unknown field '{s}'")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::InvalidField(format!("unknown field '{s}'")))?;
        FieldSpec::prime(p)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Residue { value: u64, p: u64 },
}

/// An exact field element. Rationals are kept in lowest terms and residues in
/// `0..p`, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        Self::from_i64(0, field)
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_i64(1, field)
    }

    pub fn from_i64(v: i64, field: FieldSpec) -> Self {
        match field.kind() {
            FieldKind::Rationals => Scalar(Repr::Rational(BigRational::from_integer(v.into()))),
            FieldKind::Prime(p) => Scalar(Repr::Residue {
                value: v.rem_euclid(p as i64) as u64,
                p,
            }),
        }
    }

    pub fn from_bigint(v: &BigInt, field: FieldSpec) -> Self {
        match field.kind() {
            FieldKind::Rationals => Scalar(Repr::Rational(BigRational::from_integer(v.clone()))),
            FieldKind::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar(Repr::Residue {
                    value: r.to_u64().expect("residue below modulus"),
                    p,
                })
            }
        }
    }

    /// `num / den` in the given field.
    pub fn from_ratio(num: &BigInt, den: &BigInt, field: FieldSpec) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match field.kind() {
            FieldKind::Rationals => Ok(Scalar(Repr::Rational(BigRational::new(
                num.clone(),
                den.clone(),
            )))),
            FieldKind::Prime(_) => {
                Scalar::from_bigint(num, field).try_div(&Scalar::from_bigint(den, field))
            }
        }
    }

    pub fn from_rational(r: &BigRational, field: FieldSpec) -> Result<Self> {
        Self::from_ratio(r.numer(), r.denom(), field)
    }

    /// Residue `value mod p`; only meaningful for prime fields.
    pub fn residue(value: u64, field: FieldSpec) -> Self {
        match field.kind() {
            FieldKind::Prime(p) => Scalar(Repr::Residue { value: value % p, p }),
            FieldKind::Rationals => Self::from_bigint(&BigInt::from(value), field),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match &self.0 {
            Repr::Rational(_) => FieldSpec::RATIONALS,
            Repr::Residue { p, .. } => FieldSpec(FieldKind::Prime(*p)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_zero(),
            Repr::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_one(),
            Repr::Residue { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(r) => Some(r),
            Repr::Residue { .. } => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Rational(_) => None,
            Repr::Residue { value, .. } => Some(*value),
        }
    }

    /// Maps this value into `target`. Rationals reduce modulo `p` (failing if
    /// the denominator vanishes); residues only map to their own field.
    pub fn reduce_to(&self, target: FieldSpec) -> Result<Scalar> {
        match (&self.0, target.kind()) {
            (Repr::Rational(r), _) => Scalar::from_rational(r, target),
            (Repr::Residue { .. }, _) if self.field() == target => Ok(self.clone()),
            _ => Err(Error::FieldMismatch {
                left: self.field(),
                right: target,
            }),
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field(),
                right: other.field(),
            })
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a + b)),
            (Repr::Residue { value: a, p }, Repr::Residue { value: b, .. }) => {
                Scalar(Repr::Residue {
                    value: (a + b) % p,
                    p: *p,
                })
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a * b)),
            (Repr::Residue { value: a, p }, Repr::Residue { value: b, .. }) => {
                Scalar(Repr::Residue {
                    value: (a * b) % p,
                    p: *p,
                })
            }
            _ => unreachable!(),
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.try_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Rational(a) => Scalar(Repr::Rational(a.recip())),
            Repr::Residue { value, p } => Scalar(Repr::Residue {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            }),
        })
    }

    fn neg_ref(&self) -> Scalar {
        match &self.0 {
            Repr::Rational(a) => Scalar(Repr::Rational(-a)),
            Repr::Residue { value, p } => Scalar(Repr::Residue {
                value: (p - value) % p,
                p: *p,
            }),
        }
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Parses `"3"`, `"-2/3"` into the given field.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::parse(1, 1, format!("invalid scalar literal '{text}'"));
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<BigInt>().map_err(|_| bad())?,
                d.trim().parse::<BigInt>().map_err(|_| bad())?,
            ),
            None => (text.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
        };
        Scalar::from_ratio(&num, &den, field)
    }

    /// Representative as a rational: residues map to `0..p`.
    pub fn to_rational(&self) -> BigRational {
        match &self.0 {
            Repr::Rational(r) => r.clone(),
            Repr::Residue { value, .. } => BigRational::from_integer(BigInt::from(*value)),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_negative(),
            Repr::Residue { .. } => false,
        }
    }
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")?;
        if let Repr::Residue { p, .. } = &self.0 {
            write!(f, " (mod {p})")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar operands from different fields")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}
