//! Rational functions in s over Q, stored as s^shift * num(s) / den(s).
//!
//! Canonical form: zero is (0, [], [1]); otherwise num(0) != 0, den(0) != 0,
//! den monic and gcd(num, den) = 1.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::QPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    shift: i64,
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { shift: 0, num: QPoly::zero(), den: QPoly::one() }
    }

    pub fn constant(a: BigRational) -> Self {
        if a.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { shift: 0, num: QPoly::constant(a), den: QPoly::one() }
    }

    /// `a * s^k`
    pub fn monomial(a: BigRational, k: i64) -> Self {
        if a.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { shift: k, num: QPoly::constant(a), den: QPoly::one() }
    }

    /// Laurent polynomial sum of `c * s^k` over the given pairs.
    pub fn laurent(terms: &[(i64, BigRational)]) -> Self {
        let mut acc = RatFunc::zero();
        for (k, c) in terms {
            acc = acc.add(&RatFunc::monomial(c.clone(), *k));
        }
        acc
    }

    pub fn from_parts(shift: i64, num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::normalize(shift, num, den)
    }

    fn normalize(mut shift: i64, mut num: QPoly, mut den: QPoly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let k = num.low_zeros();
        if k > 0 {
            num = num.shift_down(k);
            shift += k as i64;
        }
        let j = den.low_zeros();
        if j > 0 {
            den = den.shift_down(j);
            shift -= j as i64;
        }
        if !den.is_one() {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
            let lc = den.lead().cloned().expect("nonzero denominator");
            if !lc.is_one() {
                let li = lc.recip();
                num = num.scale(&li);
                den = den.scale(&li);
            }
        }
        RatFunc { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    /// Returns the rational constant if this is one.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.shift == 0 && self.den.is_one() && self.num.degree() == Some(0) {
            return Some(self.num.coeff(0));
        }
        None
    }

    pub fn neg(&self) -> Self {
        RatFunc { shift: self.shift, num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let m = self.shift.min(o.shift);
        let na = self.num.shift_up((self.shift - m) as usize);
        let nb = o.num.shift_up((o.shift - m) as usize);
        if self.den == o.den {
            return Self::normalize(m, na.add(&nb), self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let (da, db) = if g.is_one() {
            (self.den.clone(), o.den.clone())
        } else {
            (self.den.div_exact(&g), o.den.div_exact(&g))
        };
        let num = na.mul(&db).add(&nb.mul(&da));
        let den = self.den.mul(&db);
        Self::normalize(m, num, den)
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        let shift = self.shift + o.shift;
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { shift, num: self.num.mul(&o.num), den: QPoly::one() };
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let (n1, d2) = if g1.is_one() {
            (self.num.clone(), o.den.clone())
        } else {
            (self.num.div_exact(&g1), o.den.div_exact(&g1))
        };
        let (n2, d1) = if g2.is_one() {
            (o.num.clone(), self.den.clone())
        } else {
            (o.num.div_exact(&g2), self.den.div_exact(&g2))
        };
        // dividing monic by monic keeps the denominators monic
        RatFunc { shift, num: n1.mul(&n2), den: d1.mul(&d2) }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        let lc = self.num.lead().cloned().expect("nonzero");
        let li = lc.recip();
        Some(RatFunc { shift: -self.shift, num: self.den.scale(&li), den: self.num.scale(&li) })
    }

    /// Laurent terms (s-exponent, coefficient) of the numerator times s^shift, highest first.
    pub fn num_terms_desc(&self) -> Vec<(i64, BigRational)> {
        let mut v: Vec<(i64, BigRational)> = self
            .num
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 + self.shift, c.clone()))
            .collect();
        v.reverse();
        v
    }

    pub fn den_terms_desc(&self) -> Vec<(i64, BigRational)> {
        let mut v: Vec<(i64, BigRational)> = self
            .den
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64, c.clone()))
            .collect();
        v.reverse();
        v
    }

    /// Substitute s -> s^{-1}.
    pub fn invert_variable(&self) -> RatFunc {
        if self.is_zero() {
            return self.clone();
        }
        let reverse = |p: &QPoly| {
            let mut c = p.coeffs().to_vec();
            c.reverse();
            QPoly::from_coeffs(c)
        };
        let dn = self.num.degree().unwrap() as i64;
        let dd = self.den.degree().unwrap() as i64;
        // num(1/s) = s^{-dn} rev(num)
        Self::normalize(-self.shift - dn + dd, reverse(&self.num), reverse(&self.den))
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    #[test]
    fn canonical_cancel() {
        // (s^2 - 1)/(s - 1) = s + 1
        let a = RatFunc::from_parts(0, QPoly::from_ints(&[-1, 0, 1]), QPoly::from_ints(&[-1, 1]));
        assert_eq!(a, RatFunc::laurent(&[(0, int(1)), (1, int(1))]));
        assert!(a.is_laurent());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = RatFunc::laurent(&[(2, int(1)), (-2, int(-1))]);
        let b = a.inv().unwrap();
        assert!(a.mul(&b).is_one());
        assert!(b.add(&b.neg()).is_zero());
    }

    #[test]
    fn invert_variable_monomial() {
        let a = RatFunc::laurent(&[(3, int(2)), (1, int(1))]);
        assert_eq!(a.invert_variable(), RatFunc::laurent(&[(-3, int(2)), (-1, int(1))]));
    }
}
