//! Exact arithmetic over 𝔽_p, 𝔽_{p^k}, ℚ and number fields ℚ[x]/(f).
//!
//! A [`Field`] is a cheap, shareable handle; every [`Element`] carries the
//! handle of the field it lives in, so mixing elements of different fields is
//! detected rather than silently producing garbage.
//!
//! Elements of a finite field are identified with an *index* in `0..q`. For
//! 𝔽_p the index is the residue; for 𝔽_{p^k} it is `Σ cᵢ pⁱ` where `cᵢ` is the
//! coefficient of `xⁱ` of the reduced representative. Enumeration follows
//! index order.

mod poly;
mod syntax;

pub use syntax::{format_poly, parse_poly};

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Limits;

pub use num_rational::BigRational as Rational;
pub use poly::prime_power;
pub(crate) use poly::is_prime;

/// Largest characteristic accepted for finite fields.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;
/// Largest order accepted for finite fields.
pub const MAX_ORDER: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("modulus is reducible over the prime field")]
    ReducibleModulus,
    #[error("invalid modulus: {0}")]
    InvalidModulus(&'static str),
    #[error("number-field polynomial is not squarefree")]
    NonSquarefreeNumberFieldPolynomial,
    #[error("field order exceeds the supported range")]
    OrderTooLarge,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is a zero divisor: the modulus is not irreducible")]
    ZeroDivisor,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("field is infinite")]
    InfiniteField,
    #[error("field of order {order} exceeds the enumeration cap {cap}")]
    EnumerationCapExceeded { order: u64, cap: u64 },
    #[error("parse error: {0}")]
    Parse(alloc::string::String),
}

/// A presentation of a field.
///
/// Polynomials are given constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldSpec {
    Prime(u64),
    Extension { p: u64, k: u32, modulus: Option<Vec<u64>> },
    Rationals,
    /// ℚ[x]/(f) for a monic squarefree `f`.
    NumberField(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Prime { p: u64 },
    Extension { p: u64, k: u32, modulus: Vec<u64>, order: u64 },
    Rationals,
    NumberField { modulus: Vec<Rational> },
}

#[derive(Debug)]
struct Inner {
    kind: Kind,
    spec: FieldSpec,
}

/// Handle to a constructed field.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.0.spec)
    }
}

/// The four field operations accepted by [`element_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Field, FieldError> {
        let (kind, spec) = match spec {
            FieldSpec::Prime(p) => {
                check_characteristic(p)?;
                (Kind::Prime { p }, FieldSpec::Prime(p))
            }
            FieldSpec::Extension { p, k, modulus } => {
                check_characteristic(p)?;
                if k == 0 {
                    return Err(FieldError::InvalidModulus("extension degree must be at least 1"));
                }
                let order = p.checked_pow(k).filter(|&q| q <= MAX_ORDER).ok_or(FieldError::OrderTooLarge)?;
                let modulus = match modulus {
                    Some(m) => {
                        let m: Vec<u64> = poly::fp_trim(m.into_iter().map(|c| c % p).collect());
                        if m.len() != k as usize + 1 {
                            return Err(FieldError::InvalidModulus("modulus degree differs from k"));
                        }
                        if m[k as usize] != 1 {
                            return Err(FieldError::InvalidModulus("modulus is not monic"));
                        }
                        if !poly::fp_is_irreducible(&m, p) {
                            return Err(FieldError::ReducibleModulus);
                        }
                        m
                    }
                    None => default_modulus(p, k),
                };
                let spec = FieldSpec::Extension { p, k, modulus: Some(modulus.clone()) };
                let kind = if k == 1 {
                    Kind::Prime { p }
                } else {
                    Kind::Extension { p, k, modulus, order }
                };
                (kind, spec)
            }
            FieldSpec::Rationals => (Kind::Rationals, FieldSpec::Rationals),
            FieldSpec::NumberField(f) => {
                let f = poly::q_trim(f);
                if f.len() < 2 {
                    return Err(FieldError::InvalidModulus("number-field polynomial must have degree ≥ 1"));
                }
                if !f[f.len() - 1].is_one() {
                    return Err(FieldError::InvalidModulus("number-field polynomial is not monic"));
                }
                if poly::q_gcd(&f, &poly::q_derivative(&f)).len() > 1 {
                    return Err(FieldError::NonSquarefreeNumberFieldPolynomial);
                }
                (Kind::NumberField { modulus: f.clone() }, FieldSpec::NumberField(f))
            }
        };
        Ok(Field(Arc::new(Inner { kind, spec })))
    }

    /// 𝔽_q for a prime power `q`, with the default modulus.
    pub fn finite(q: u64) -> Result<Field, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::CompositeCharacteristic(q))?;
        Field::new(FieldSpec::Extension { p, k, modulus: None })
    }

    /// The presentation this field was built from, with any default modulus
    /// filled in.
    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn characteristic(&self) -> u64 {
        match &self.0.kind {
            Kind::Prime { p } | Kind::Extension { p, .. } => *p,
            Kind::Rationals | Kind::NumberField { .. } => 0,
        }
    }

    /// Number of elements, or `None` for infinite fields.
    pub fn order(&self) -> Option<u64> {
        match &self.0.kind {
            Kind::Prime { p } => Some(*p),
            Kind::Extension { order, .. } => Some(*order),
            Kind::Rationals | Kind::NumberField { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// Degree over the prime field (finite fields) or over ℚ.
    pub fn degree(&self) -> u32 {
        match &self.0.kind {
            Kind::Prime { .. } | Kind::Rationals => 1,
            Kind::Extension { k, .. } => *k,
            Kind::NumberField { modulus } => (modulus.len() - 1) as u32,
        }
    }

    /// The defining polynomial of an extension or number field, as rationals
    /// (constant term first).
    pub fn modulus(&self) -> Option<Vec<Rational>> {
        match &self.0.kind {
            Kind::Extension { modulus, .. } => {
                Some(modulus.iter().map(|&c| Rational::from_integer(c.into())).collect())
            }
            Kind::NumberField { modulus } => Some(modulus.clone()),
            _ => None,
        }
    }

    /// Order after checking the enumeration cap.
    pub fn checked_order(&self, limits: &Limits) -> Result<u64, FieldError> {
        let order = self.order().ok_or(FieldError::InfiniteField)?;
        if order > limits.enumeration_cap {
            return Err(FieldError::EnumerationCapExceeded { order, cap: limits.enumeration_cap });
        }
        Ok(order)
    }

    pub fn zero(&self) -> Element {
        self.wrap(match &self.0.kind {
            Kind::Prime { .. } | Kind::Extension { .. } => Value::Finite(0),
            Kind::Rationals => Value::Rational(Rational::zero()),
            Kind::NumberField { modulus } => Value::Poly(vec![Rational::zero(); modulus.len() - 1]),
        })
    }

    pub fn one(&self) -> Element {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Element {
        self.from_rational(&Rational::from_integer(n.into())).expect("integers embed in every field")
    }

    /// Image of a rational number. Fails in characteristic `p` when `p`
    /// divides the denominator.
    pub fn from_rational(&self, r: &Rational) -> Result<Element, FieldError> {
        Ok(self.wrap(match &self.0.kind {
            Kind::Prime { p } | Kind::Extension { p, .. } => Value::Finite(rational_mod(r, *p)?),
            Kind::Rationals => Value::Rational(r.clone()),
            Kind::NumberField { modulus } => {
                let mut v = vec![Rational::zero(); modulus.len() - 1];
                v[0] = r.clone();
                Value::Poly(v)
            }
        }))
    }

    /// Element of a finite field with the given index.
    pub fn from_index(&self, index: u64) -> Result<Element, FieldError> {
        let order = self.order().ok_or(FieldError::InfiniteField)?;
        if index >= order {
            return Err(FieldError::Parse(alloc::format!("index {index} out of range for order {order}")));
        }
        Ok(self.wrap(Value::Finite(index)))
    }

    /// Reduces a polynomial with rational coefficients (constant term first)
    /// into the field; `x` maps to the generator of an extension or number
    /// field.
    pub fn from_poly(&self, coeffs: &[Rational]) -> Result<Element, FieldError> {
        match &self.0.kind {
            Kind::Prime { p } => {
                if coeffs.iter().skip(1).any(|c| !c.is_zero()) {
                    return Err(FieldError::Parse("prime-field elements cannot involve x".into()));
                }
                let c = coeffs.first().map(|c| rational_mod(c, *p)).transpose()?.unwrap_or(0);
                Ok(self.wrap(Value::Finite(c)))
            }
            Kind::Extension { p, modulus, .. } => {
                let reduced: Vec<u64> =
                    coeffs.iter().map(|c| rational_mod(c, *p)).collect::<Result<_, _>>()?;
                let r = poly::fp_rem(&reduced, modulus, *p);
                Ok(self.wrap(Value::Finite(encode_digits(&r, *p))))
            }
            Kind::Rationals => {
                if coeffs.iter().skip(1).any(|c| !c.is_zero()) {
                    return Err(FieldError::Parse("rational elements cannot involve x".into()));
                }
                Ok(self.wrap(Value::Rational(coeffs.first().cloned().unwrap_or_else(Rational::zero))))
            }
            Kind::NumberField { modulus } => {
                let r = poly::q_rem(coeffs, modulus);
                Ok(self.wrap(Value::Poly(pad(r, modulus.len() - 1))))
            }
        }
    }

    /// The class of `x` in an extension or number field.
    pub fn generator(&self) -> Option<Element> {
        match &self.0.kind {
            Kind::Extension { .. } | Kind::NumberField { .. } => {
                Some(self.from_poly(&[Rational::zero(), Rational::one()]).expect("x reduces"))
            }
            _ => None,
        }
    }

    /// Every element exactly once, in index order.
    pub fn enumerate_elements(&self, limits: &Limits) -> Result<Vec<Element>, FieldError> {
        let q = self.checked_order(limits)?;
        Ok((0..q).map(|i| self.wrap(Value::Finite(i))).collect())
    }

    fn wrap(&self, value: Value) -> Element {
        Element { field: self.clone(), value }
    }

    // -- raw finite-field arithmetic on indices ---------------------------------

    pub(crate) fn raw_add(&self, a: u64, b: u64) -> u64 {
        match &self.0.kind {
            Kind::Prime { p } => (a + b) % p,
            Kind::Extension { p, k, .. } => digitwise(a, b, *p, *k, |x, y| (x + y) % p),
            _ => unreachable!("raw arithmetic on an infinite field"),
        }
    }

    pub(crate) fn raw_neg(&self, a: u64) -> u64 {
        match &self.0.kind {
            Kind::Prime { p } => (p - a) % p,
            Kind::Extension { p, k, .. } => digitwise(0, a, *p, *k, |_, y| (p - y) % p),
            _ => unreachable!("raw arithmetic on an infinite field"),
        }
    }

    pub(crate) fn raw_sub(&self, a: u64, b: u64) -> u64 {
        self.raw_add(a, self.raw_neg(b))
    }

    pub(crate) fn raw_mul(&self, a: u64, b: u64) -> u64 {
        match &self.0.kind {
            Kind::Prime { p } => poly::mul_mod(a, b, *p),
            Kind::Extension { p, k, modulus, .. } => ext_mul(a, b, *p, *k as usize, modulus),
            _ => unreachable!("raw arithmetic on an infinite field"),
        }
    }

    pub(crate) fn raw_pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.raw_mul(base, base);
            }
        }
        acc
    }

    pub(crate) fn raw_inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        match &self.0.kind {
            Kind::Prime { p } => poly::inv_mod(a, *p),
            Kind::Extension { order, .. } => Some(self.raw_pow(a, order - 2)),
            _ => unreachable!("raw arithmetic on an infinite field"),
        }
    }
}

fn check_characteristic(p: u64) -> Result<(), FieldError> {
    if !is_prime(p) {
        return Err(FieldError::CompositeCharacteristic(p));
    }
    if p >= MAX_CHARACTERISTIC {
        return Err(FieldError::OrderTooLarge);
    }
    Ok(())
}

/// Smallest monic irreducible polynomial of degree `k` over 𝔽_p, comparing
/// coefficient tuples lexicographically with the constant term first.
fn default_modulus(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    let mut low = vec![0u64; k];
    loop {
        let mut f = low.clone();
        f.push(1);
        if poly::fp_is_irreducible(&f, p) {
            return f;
        }
        // odometer with the constant term as the most significant digit
        let mut i = k;
        loop {
            i -= 1;
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            assert!(i > 0, "irreducible polynomials exist in every degree");
        }
    }
}

fn rational_mod(r: &Rational, p: u64) -> Result<u64, FieldError> {
    let pb = BigInt::from(p);
    let num = (r.numer() % &pb + &pb) % &pb;
    let den = (r.denom() % &pb + &pb) % &pb;
    let den_inv = poly::inv_mod(den.to_u64().unwrap(), p).ok_or(FieldError::DivisionByZero)?;
    Ok(poly::mul_mod(num.to_u64().unwrap(), den_inv, p))
}

fn pad(mut v: Vec<Rational>, len: usize) -> Vec<Rational> {
    v.resize(len, Rational::zero());
    v
}

pub(crate) fn decode_digits(mut a: u64, p: u64, k: usize, out: &mut [u64]) {
    for d in out.iter_mut().take(k) {
        *d = a % p;
        a /= p;
    }
}

pub(crate) fn encode_digits(digits: &[u64], p: u64) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn digitwise(a: u64, b: u64, p: u64, k: u32, f: impl Fn(u64, u64) -> u64) -> u64 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..k {
        out += f(a % p, b % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn ext_mul(a: u64, b: u64, p: u64, k: usize, modulus: &[u64]) -> u64 {
    let mut da = [0u64; 64];
    let mut db = [0u64; 64];
    decode_digits(a, p, k, &mut da);
    decode_digits(b, p, k, &mut db);
    let mut prod = [0u64; 128];
    for i in 0..k {
        if da[i] == 0 {
            continue;
        }
        for j in 0..k {
            prod[i + j] = (prod[i + j] + poly::mul_mod(da[i], db[j], p)) % p;
        }
    }
    // reduce by the monic modulus from the top down
    for top in (k..2 * k - 1).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for i in 0..k {
            let j = top - k + i;
            prod[j] = (prod[j] + p - poly::mul_mod(c, modulus[i], p)) % p;
        }
    }
    encode_digits(&prod[..k], p)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Value {
    Finite(u64),
    Rational(Rational),
    Poly(Vec<Rational>),
}

/// An element of a [`Field`].
#[derive(Clone)]
pub struct Element {
    field: Field,
    value: Value,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field == other.field
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Element {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Finite(a) => *a == 0,
            Value::Rational(r) => r.is_zero(),
            Value::Poly(v) => v.iter().all(Zero::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    /// Index of a finite-field element (see the module docs).
    pub fn index(&self) -> Option<u64> {
        match self.value {
            Value::Finite(a) => Some(a),
            _ => None,
        }
    }

    /// Coefficients of the reduced representative as rationals, constant term
    /// first.
    pub fn coefficients(&self) -> Vec<Rational> {
        match (&self.value, &self.field.0.kind) {
            (Value::Finite(a), Kind::Prime { .. }) => vec![Rational::from_integer((*a).into())],
            (Value::Finite(a), Kind::Extension { p, k, .. }) => {
                let mut d = [0u64; 64];
                decode_digits(*a, *p, *k as usize, &mut d);
                d[..*k as usize].iter().map(|&c| Rational::from_integer(c.into())).collect()
            }
            (Value::Rational(r), _) => vec![r.clone()],
            (Value::Poly(v), _) => v.clone(),
            _ => unreachable!("value kind matches field kind"),
        }
    }

    /// The rational value of an element of ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.value {
            Value::Rational(r) => Some(r),
            _ => None,
        }
    }

    fn same_field(&self, other: &Element) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Element) -> Result<Element, FieldError> {
        self.same_field(other)?;
        let value = match (&self.value, &other.value) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(self.field.raw_add(*a, *b)),
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a + b),
            (Value::Poly(a), Value::Poly(b)) => Value::Poly(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            _ => unreachable!("value kind matches field kind"),
        };
        Ok(self.field.wrap(value))
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element, FieldError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element, FieldError> {
        self.same_field(other)?;
        let value = match (&self.value, &other.value) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(self.field.raw_mul(*a, *b)),
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a * b),
            (Value::Poly(a), Value::Poly(b)) => {
                let Kind::NumberField { modulus } = &self.field.0.kind else { unreachable!() };
                let prod = poly::q_rem(&poly::q_mul(&poly::q_trim(a.clone()), &poly::q_trim(b.clone())), modulus);
                Value::Poly(pad(prod, modulus.len() - 1))
            }
            _ => unreachable!("value kind matches field kind"),
        };
        Ok(self.field.wrap(value))
    }

    pub fn try_div(&self, other: &Element) -> Result<Element, FieldError> {
        self.same_field(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Element, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let value = match &self.value {
            Value::Finite(a) => Value::Finite(self.field.raw_inv(*a).ok_or(FieldError::DivisionByZero)?),
            Value::Rational(r) => Value::Rational(r.recip()),
            Value::Poly(v) => {
                let Kind::NumberField { modulus } = &self.field.0.kind else { unreachable!() };
                let inv = poly::q_inverse_mod(v, modulus).ok_or(FieldError::ZeroDivisor)?;
                Value::Poly(pad(inv, modulus.len() - 1))
            }
        };
        Ok(self.field.wrap(value))
    }

    fn neg_ref(&self) -> Element {
        let value = match &self.value {
            Value::Finite(a) => Value::Finite(self.field.raw_neg(*a)),
            Value::Rational(r) => Value::Rational(-r),
            Value::Poly(v) => Value::Poly(v.iter().map(|c| -c).collect()),
        };
        self.field.wrap(value)
    }

    /// `self^e` by square-and-multiply; `x^0 = 1` for every `x`, including 0.
    pub fn pow(&self, e: u64) -> Element {
        if let Value::Finite(a) = self.value {
            return self.field.wrap(Value::Finite(self.field.raw_pow(a, e)));
        }
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplies by a rational scalar (the image of ℚ or of 𝔽_p's prime ring).
    pub fn scale(&self, r: &Rational) -> Result<Element, FieldError> {
        self.try_mul(&self.field.from_rational(r)?)
    }

    /// True if the element is `r` for some rational `r` with `r > 0`
    /// (characteristic zero only).
    pub fn is_positive_rational(&self) -> bool {
        match &self.value {
            Value::Rational(r) => r.is_positive(),
            Value::Poly(v) => v[0].is_positive() && v[1..].iter().all(Zero::is_zero),
            Value::Finite(_) => false,
        }
    }
}

/// Applies one of the four field operations.
pub fn element_arith(a: &Element, b: &Element, op: ArithOp) -> Result<Element, FieldError> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.try_div(b),
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        /// Panics if the operands belong to different fields.
        impl $tr<&Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                self.$imp(rhs).expect("operands belong to the same field")
            }
        }
        impl $tr<Element> for Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Element> for Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.neg_ref()
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.neg_ref()
    }
}
