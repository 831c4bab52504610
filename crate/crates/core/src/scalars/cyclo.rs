//! Elements of Q[q]/Phi_r(q) for odd r.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::Zero;

use super::poly::{cyclotomic, QPoly};
use super::ratfunc::RatFunc;

fn modulus(r: u32) -> Arc<QPoly> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<QPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut g = cache.lock().expect("cyclotomic cache poisoned");
    g.entry(r).or_insert_with(|| Arc::new(cyclotomic(r))).clone()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclo {
    r: u32,
    c: QPoly,
}

impl Cyclo {
    pub fn from_poly(r: u32, p: QPoly) -> Self {
        let m = modulus(r);
        Cyclo { r, c: p.rem(&m) }
    }

    pub fn zero(r: u32) -> Self {
        Cyclo { r, c: QPoly::zero() }
    }

    pub fn constant(r: u32, a: BigRational) -> Self {
        Cyclo { r, c: QPoly::constant(a) }
    }

    /// q^k for any integer k (reduced mod r).
    pub fn q_pow(r: u32, k: i64) -> Self {
        let e = k.rem_euclid(r as i64) as usize;
        Self::from_poly(r, QPoly::monomial(BigRational::from_integer(1.into()), e))
    }

    /// s^k with s = q^{(r+1)/2}.
    pub fn s_pow(r: u32, k: i64) -> Self {
        Self::q_pow(r, k * ((r as i64 + 1) / 2))
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn poly(&self) -> &QPoly {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.c.is_one()
    }

    fn check(&self, o: &Cyclo) {
        assert_eq!(self.r, o.r, "mixing cyclotomic scalars of different order");
    }

    pub fn add(&self, o: &Cyclo) -> Cyclo {
        self.check(o);
        Cyclo { r: self.r, c: self.c.add(&o.c) }
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo { r: self.r, c: self.c.neg() }
    }

    pub fn mul(&self, o: &Cyclo) -> Cyclo {
        self.check(o);
        Cyclo::from_poly(self.r, self.c.mul(&o.c))
    }

    pub fn inv(&self) -> Option<Cyclo> {
        if self.is_zero() {
            return None;
        }
        let m = modulus(self.r);
        let (g, u, _) = self.c.xgcd(&m);
        debug_assert!(g.is_one(), "cyclotomic polynomial must be irreducible");
        Some(Cyclo::from_poly(self.r, u))
    }

    /// Image of a rational function in s under s -> q^{(r+1)/2}; `None` if the denominator vanishes.
    pub fn from_ratfunc(r: u32, f: &RatFunc) -> Option<Cyclo> {
        if f.is_zero() {
            return Some(Cyclo::zero(r));
        }
        let eval = |p: &QPoly, shift: i64| {
            let mut acc = Cyclo::zero(r);
            for (i, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    let t = Cyclo::s_pow(r, i as i64 + shift);
                    acc = acc.add(&Cyclo { r, c: t.c.scale(c) });
                }
            }
            acc
        };
        let n = eval(f.num(), f.shift());
        let d = eval(f.den(), 0);
        Some(n.mul(&d.inv()?))
    }

    /// Terms (q-exponent, coefficient), highest first.
    pub fn terms_desc(&self) -> Vec<(i64, BigRational)> {
        let mut v: Vec<(i64, BigRational)> = self
            .c
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64, c.clone()))
            .collect();
        v.reverse();
        v
    }
}
