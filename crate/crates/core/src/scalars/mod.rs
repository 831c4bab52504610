//! Exact coefficients: rational functions in s = q^{1/2} over Q, or residues in
//! Q[q]/Phi_r(q) at an odd root of unity (where s = q^{(r+1)/2}).
//!
//! Generic-mode values that are defined at the root of unity coerce
//! automatically when combined with cyclotomic values, so constants such as
//! `Scalar::int(2)` can be used in either mode.

mod cyclo;
mod parse;
pub mod poly;
mod ratfunc;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cyclo::Cyclo;
pub use ratfunc::RatFunc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic mode needs odd r >= 3, got {0}")]
    BadOrder(u32),
    #[error("value has a pole at the root of unity of order {0}")]
    Pole(u32),
    #[error("cannot parse scalar `{input}`: {msg}")]
    Parse { input: String, msg: String },
}

/// Coefficient field selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Mode {
    #[default]
    Generic,
    Cyclotomic(u32),
}

impl Mode {
    pub fn cyclotomic(r: u32) -> Result<Mode, ScalarError> {
        if r < 3 || r.is_multiple_of(2) {
            return Err(ScalarError::BadOrder(r));
        }
        Ok(Mode::Cyclotomic(r))
    }

    pub fn s_pow(self, k: i64) -> Scalar {
        match self {
            Mode::Generic => Scalar::Gen(RatFunc::monomial(BigRational::one(), k)),
            Mode::Cyclotomic(r) => Scalar::Cyc(Cyclo::s_pow(r, k)),
        }
    }

    pub fn q_pow(self, k: i64) -> Scalar {
        self.s_pow(2 * k)
    }

    pub fn q(self) -> Scalar {
        self.q_pow(1)
    }

    pub fn int(self, a: i64) -> Scalar {
        self.embed(&Scalar::int(a))
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    /// Move a scalar into this mode (no-op for generic).
    pub fn embed(self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Mode::Cyclotomic(r), Scalar::Gen(f)) => Scalar::Cyc(
                Cyclo::from_ratfunc(r, f).unwrap_or_else(|| panic!("{}", ScalarError::Pole(r))),
            ),
            _ => a.clone(),
        }
    }

    pub fn try_embed(self, a: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, a) {
            (Mode::Cyclotomic(r), Scalar::Gen(f)) => {
                Cyclo::from_ratfunc(r, f).map(Scalar::Cyc).ok_or(ScalarError::Pole(r))
            }
            _ => Ok(a.clone()),
        }
    }

    pub fn parse(self, text: &str) -> Result<Scalar, ScalarError> {
        let v = Scalar::parse(text)?;
        self.try_embed(&v)
    }
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Gen(RatFunc),
    Cyc(Cyclo),
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Gen(RatFunc::zero())
    }

    pub fn one() -> Scalar {
        Scalar::int(1)
    }

    pub fn int(a: i64) -> Scalar {
        Scalar::Gen(RatFunc::constant(BigRational::from_integer(a.into())))
    }

    pub fn rational(n: i64, d: i64) -> Scalar {
        Scalar::Gen(RatFunc::constant(BigRational::new(n.into(), d.into())))
    }

    pub fn from_bigrational(a: BigRational) -> Scalar {
        Scalar::Gen(RatFunc::constant(a))
    }

    /// Generic q^k.
    pub fn q_pow(k: i64) -> Scalar {
        Mode::Generic.q_pow(k)
    }

    /// Generic s^k = q^{k/2}.
    pub fn s_pow(k: i64) -> Scalar {
        Mode::Generic.s_pow(k)
    }

    pub fn q() -> Scalar {
        Scalar::q_pow(1)
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Gen(_) => Mode::Generic,
            Scalar::Cyc(c) => Mode::Cyclotomic(c.r()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Gen(f) => f.is_zero(),
            Scalar::Cyc(c) => c.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Gen(f) => f.is_one(),
            Scalar::Cyc(c) => c.is_one(),
        }
    }

    fn lift(a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
        match (a, b) {
            (Scalar::Cyc(x), Scalar::Gen(_)) => (a.clone(), Mode::Cyclotomic(x.r()).embed(b)),
            (Scalar::Gen(_), Scalar::Cyc(y)) => (Mode::Cyclotomic(y.r()).embed(a), b.clone()),
            _ => (a.clone(), b.clone()),
        }
    }

    fn add_ref(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Gen(a), Scalar::Gen(b)) => Scalar::Gen(a.add(b)),
            (Scalar::Cyc(a), Scalar::Cyc(b)) => Scalar::Cyc(a.add(b)),
            _ => {
                let (a, b) = Scalar::lift(self, o);
                a.add_ref(&b)
            }
        }
    }

    fn mul_ref(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Gen(a), Scalar::Gen(b)) => Scalar::Gen(a.mul(b)),
            (Scalar::Cyc(a), Scalar::Cyc(b)) => Scalar::Cyc(a.mul(b)),
            _ => {
                let (a, b) = Scalar::lift(self, o);
                a.mul_ref(&b)
            }
        }
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Gen(a) => Scalar::Gen(a.neg()),
            Scalar::Cyc(a) => Scalar::Cyc(a.neg()),
        }
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Gen(a) => a.inv().map(Scalar::Gen).ok_or(ScalarError::DivisionByZero),
            Scalar::Cyc(a) => a.inv().map(Scalar::Cyc).ok_or(ScalarError::DivisionByZero),
        }
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul_ref(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Scalar {
        let base = if k < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Scalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&b);
            }
            b = b.mul_ref(&b);
            e >>= 1;
        }
        if let Scalar::Cyc(c) = self {
            return Mode::Cyclotomic(c.r()).embed(&acc);
        }
        acc
    }

    /// Substitute q -> q^{-1} (s -> s^{-1}); identity on cyclotomic constants is not
    /// meaningful so this is generic-mode only.
    pub fn bar(&self) -> Scalar {
        match self {
            Scalar::Gen(a) => Scalar::Gen(a.invert_variable()),
            Scalar::Cyc(c) => {
                let r = c.r();
                let mut acc = Scalar::Cyc(Cyclo::zero(r));
                for (e, k) in c.terms_desc() {
                    acc += Scalar::Cyc(Cyclo::q_pow(r, -e)) * Scalar::from_bigrational(k);
                }
                acc
            }
        }
    }

    /// The rational value if this scalar is a constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Gen(a) => a.as_constant(),
            Scalar::Cyc(c) => match c.poly().degree() {
                None => Some(BigRational::zero()),
                Some(0) => Some(c.poly().coeff(0)),
                _ => None,
            },
        }
    }

    pub fn parse(text: &str) -> Result<Scalar, ScalarError> {
        parse::parse_scalar(text)
    }

    /// For a single-term value `±c·q^a`, the sign and the rendering of `c·q^a`.
    pub fn signed_monomial(&self) -> Option<(bool, String)> {
        let t = match self {
            Scalar::Gen(a) if a.is_laurent() => a.num_terms_desc(),
            Scalar::Cyc(c) => c.terms_desc().into_iter().map(|(e, k)| (2 * e, k)).collect(),
            _ => return None,
        };
        match t.as_slice() {
            [] => Some((false, "0".into())),
            [(e, k)] => Some((k.is_negative(), fmt_terms(&[(*e, k.abs())]))),
            _ => None,
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Scalar) -> bool {
        match (self, o) {
            (Scalar::Gen(a), Scalar::Gen(b)) => a == b,
            (Scalar::Cyc(a), Scalar::Cyc(b)) => a == b,
            (Scalar::Cyc(a), Scalar::Gen(b)) | (Scalar::Gen(b), Scalar::Cyc(a)) => {
                Cyclo::from_ratfunc(a.r(), b).is_some_and(|x| &x == a)
            }
        }
    }
}

impl Eq for Scalar {}

impl From<i64> for Scalar {
    fn from(a: i64) -> Self {
        Scalar::int(a)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, o)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_ref(b));
binop!(Sub, sub, |a, b| a.add_ref(&b.neg_ref()));
binop!(Mul, mul, |a, b| a.mul_ref(b));
binop!(Div, div, |a, b| a.checked_div(b).expect("scalar division by zero"));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = self.add_ref(o);
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self = self.add_ref(&o);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = self.add_ref(&o.neg_ref());
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = self.mul_ref(o);
    }
}

/// 1 + t + ... + t^{m-1}; equals m at t = 1.
pub fn q_integer(m: u32, t: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    let mut p = Scalar::one();
    for _ in 0..m {
        acc += &p;
        p = &p * t;
    }
    if let Scalar::Cyc(c) = t {
        return Mode::Cyclotomic(c.r()).embed(&acc);
    }
    acc
}

/// Product of q_integer(k, t) for k = 1..m.
pub fn q_factorial(m: u32, t: &Scalar) -> Scalar {
    let mut acc = Scalar::one();
    for k in 1..=m {
        acc = acc * q_integer(k, t);
    }
    if let Scalar::Cyc(c) = t {
        return Mode::Cyclotomic(c.r()).embed(&acc);
    }
    acc
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Monomial in q for an s-exponent.
fn fmt_monomial_s(e: i64) -> String {
    match e {
        0 => String::new(),
        2 => "q".to_string(),
        e if e % 2 == 0 => format!("q^{{{}}}", e / 2),
        e => format!("q^{{{}/2}}", e),
    }
}

fn fmt_terms(terms: &[(i64, BigRational)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (e, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        let mono = fmt_monomial_s(*e);
        let body = if mono.is_empty() {
            fmt_rational(&a)
        } else if a.is_one() {
            mono
        } else if a.is_integer() {
            format!("{}{}", fmt_rational(&a), mono)
        } else {
            format!("({}){}", fmt_rational(&a), mono)
        };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Gen(a) => {
                let num = a.num_terms_desc();
                if a.is_laurent() {
                    return write!(f, "{}", fmt_terms(&num));
                }
                let den = a.den_terms_desc();
                let ns = fmt_terms(&num);
                let ds = fmt_terms(&den);
                if num.len() == 1 {
                    write!(f, "{}/({})", ns, ds)
                } else {
                    write!(f, "({})/({})", ns, ds)
                }
            }
            Scalar::Cyc(c) => {
                // q-exponents doubled into s-exponents for the shared formatter
                let t: Vec<(i64, BigRational)> =
                    c.terms_desc().into_iter().map(|(e, k)| (2 * e, k)).collect();
                write!(f, "{}", fmt_terms(&t))
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Scalar::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_additive_inverse() {
        let q = Scalar::q();
        assert!((&q * &q.inv().unwrap()).is_one());
        let a = &q - &q.inv().unwrap();
        let b = q.inv().unwrap() - &q;
        assert!((a + b).is_zero());
    }

    #[test]
    fn cyclotomic_three() {
        let m = Mode::cyclotomic(3).unwrap();
        let q = m.q();
        let v = m.one() + &q + &q * &q;
        assert!(v.is_zero());
        assert!(Mode::cyclotomic(4).is_err());
        // s^2 = q
        assert_eq!(m.s_pow(1) * m.s_pow(1), q);
    }

    #[test]
    fn cyclotomic_order_exact() {
        for r in [3u32, 5, 7, 9] {
            let m = Mode::cyclotomic(r).unwrap();
            let q = m.q();
            assert!(q.pow(r as i64).is_one());
            for j in 1..r as i64 {
                assert!(!q.pow(j).is_one());
            }
        }
    }

    #[test]
    fn q_integers() {
        let t = Scalar::q_pow(2);
        assert!(q_integer(0, &t).is_zero());
        assert!(q_integer(1, &t).is_one());
        assert_eq!(q_integer(3, &t), Scalar::parse("1 + q^{2} + q^{4}").unwrap());
        let f = q_factorial(3, &t);
        assert_eq!(f, Scalar::parse("(1+q^2)(1+q^2+q^4)").unwrap());
        assert_eq!(q_integer(4, &Scalar::one()), Scalar::int(4));
    }

    #[test]
    fn render_roundtrip() {
        for s in ["q^{-3/2}", "q - q^{-1}", "1/(q^{2} - 1)", "(3/2)q^{1/2} + 7", "-q", "0"] {
            let a = Scalar::parse(s).unwrap();
            let b = Scalar::parse(&a.to_string()).unwrap();
            assert_eq!(a, b, "{s} -> {a}");
        }
        assert_eq!(Scalar::s_pow(-3).to_string(), "q^{-3/2}");
        assert_eq!(Scalar::q_pow(2).to_string(), "q^{2}");
    }

    #[test]
    fn mixed_mode_coercion() {
        let m = Mode::cyclotomic(5).unwrap();
        let a = m.q() + Scalar::int(1);
        assert_eq!(a.mode(), m);
        assert_eq!(Scalar::q_pow(5) * m.one(), m.one());
    }

    #[test]
    fn division_by_zero_is_error() {
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
    }

    use proptest::prelude::*;

    fn laurent(mode: Mode, terms: &[(i64, i64)]) -> Scalar {
        let mut acc = mode.int(0);
        for &(c, k) in terms {
            acc += &(mode.int(c) * mode.s_pow(2 * k));
        }
        acc
    }

    fn modes() -> impl Strategy<Value = Mode> {
        prop_oneof![Just(Mode::Generic), Just(Mode::cyclotomic(5).unwrap()), Just(Mode::cyclotomic(7).unwrap())]
    }

    proptest! {
        #[test]
        fn quotient_times_divisor(mode in modes(), a in prop::collection::vec((-4i64..5, -3i64..4), 0..4), b in prop::collection::vec((-4i64..5, -3i64..4), 1..4)) {
            let (a, b) = (laurent(mode, &a), laurent(mode, &b));
            prop_assume!(!b.is_zero());
            prop_assert_eq!(&(&a / &b) * &b, a);
        }

        #[test]
        fn q_integer_telescopes(mode in modes(), m in 0u32..8, k in -3i64..4) {
            let t = mode.s_pow(2 * k);
            let one = mode.int(1);
            prop_assert_eq!(q_integer(m, &t) * (&one - &t), &one - &t.pow(m as i64));
        }
    }
}
