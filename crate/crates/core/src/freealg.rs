//! Words, sparse linear combinations and free noncommutative polynomials.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeAlgError {
    #[error("letter {letter} outside alphabet of size {n}")]
    AlphabetMismatch { letter: usize, n: usize },
}

/// A word in generators `0..n` (displayed 1-based). Ordered by length, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Word {
        Word(vec![i as u8])
    }

    pub fn from_letters(ls: &[usize]) -> Word {
        Word(ls.iter().map(|&i| i as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&x| x as usize)
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + o.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn slice(&self, a: usize, b: usize) -> Word {
        Word(self.0[a..b].to_vec())
    }

    pub fn degree(&self, n: usize) -> Degree {
        let mut d = vec![0i64; n];
        for l in self.letters() {
            d[l] += 1;
        }
        Degree(d)
    }

    pub fn check(&self, n: usize) -> Result<(), FreeAlgError> {
        match self.letters().find(|&l| l >= n) {
            Some(letter) => Err(FreeAlgError::AlphabetMismatch { letter, n }),
            None => Ok(()),
        }
    }

    /// All words of a given degree vector, in canonical order.
    pub fn all_of_degree(d: &Degree) -> Vec<Word> {
        let total: i64 = d.0.iter().sum();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(total as usize);
        let mut left = d.0.clone();
        fn rec(cur: &mut Vec<u8>, left: &mut [i64], out: &mut Vec<Word>) {
            if left.iter().all(|&x| x == 0) {
                out.push(Word(cur.clone()));
                return;
            }
            for i in 0..left.len() {
                if left[i] > 0 {
                    left[i] -= 1;
                    cur.push(i as u8);
                    rec(cur, left, out);
                    cur.pop();
                    left[i] += 1;
                }
            }
        }
        rec(&mut cur, &mut left, &mut out);
        out
    }

    /// All words of length m over `n` letters.
    pub fn all_of_length(n: usize, m: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..m {
            out = out
                .into_iter()
                .flat_map(|w| (0..n).map(move |i| w.concat(&Word::letter(i))))
                .collect();
        }
        out
    }
}

impl Ord for Word {
    fn cmp(&self, o: &Word) -> Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Word) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let s: Vec<String> = self.letters().map(|l| (l + 1).to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// Dense degree vector in Z^I.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Degree(pub Vec<i64>);

impl Degree {
    pub fn zero(n: usize) -> Degree {
        Degree(vec![0; n])
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, o: &Degree) -> Degree {
        Degree(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Degree) -> Degree {
        Degree(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    /// Componentwise nonnegative degree vectors of a given total, in lexicographic order.
    pub fn all_of_total(n: usize, total: i64) -> Vec<Degree> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; n];
        fn rec(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Degree>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Degree(cur.clone()));
                return;
            }
            for k in (0..=left).rev() {
                cur[i] = k;
                rec(i + 1, left - k, cur, out);
            }
        }
        if n == 0 {
            return out;
        }
        rec(0, total, &mut cur, &mut out);
        out
    }
}

/// Finite linear combination of keys with nonzero scalar coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Lin<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for Lin<K> {
    fn default() -> Self {
        Lin { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn zero() -> Self {
        Lin::default()
    }

    pub fn term(k: K, c: Scalar) -> Self {
        let mut l = Lin::zero();
        l.add_term(k, c);
        l
    }

    pub fn basis(k: K) -> Self {
        Lin::term(k, Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> std::collections::btree_map::Iter<'_, K, Scalar> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn coeff(&self, k: &K) -> Scalar {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, k: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, o: &Lin<K>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &o.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add(&self, o: &Lin<K>) -> Lin<K> {
        let mut r = self.clone();
        r.add_scaled(o, &Scalar::one());
        r
    }

    pub fn sub(&self, o: &Lin<K>) -> Lin<K> {
        let mut r = self.clone();
        r.add_scaled(o, &Scalar::int(-1));
        r
    }

    pub fn scale(&self, c: &Scalar) -> Lin<K> {
        let mut r = Lin::zero();
        r.add_scaled(self, c);
        r
    }

    pub fn neg(&self) -> Lin<K> {
        self.scale(&Scalar::int(-1))
    }

    /// Linear extension of `f` on basis keys.
    pub fn flat_map<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Lin<K2>) -> Lin<K2> {
        let mut r = Lin::zero();
        for (k, c) in &self.terms {
            r.add_scaled(&f(k), c);
        }
        r
    }

    pub fn map_keys<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> K2) -> Lin<K2> {
        let mut r = Lin::zero();
        for (k, c) in &self.terms {
            r.add_term(f(k), c.clone());
        }
        r
    }

    pub fn filter(&self, mut p: impl FnMut(&K) -> bool) -> Lin<K> {
        Lin { terms: self.terms.iter().filter(|(k, _)| p(k)).map(|(k, c)| (k.clone(), c.clone())).collect() }
    }

    pub fn into_terms(self) -> BTreeMap<K, Scalar> {
        self.terms
    }

    /// Leading (largest) key.
    pub fn lead(&self) -> Option<(&K, &Scalar)> {
        self.terms.iter().next_back()
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for Lin<K> {
    fn from_iter<T: IntoIterator<Item = (K, Scalar)>>(it: T) -> Self {
        let mut l = Lin::zero();
        for (k, c) in it {
            l.add_term(k, c);
        }
        l
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Lin<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("({c})·{k:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub type NCPoly = Lin<Word>;
pub type TensorPoly = Lin<(Word, Word)>;
pub type Tensor3Poly = Lin<(Word, Word, Word)>;

impl NCPoly {
    pub fn one() -> NCPoly {
        Lin::basis(Word::empty())
    }

    pub fn word(w: Word) -> NCPoly {
        Lin::basis(w)
    }

    pub fn gen(i: usize) -> NCPoly {
        Lin::basis(Word::letter(i))
    }

    pub fn mul(&self, o: &NCPoly) -> NCPoly {
        let mut r = Lin::zero();
        for (a, x) in self.iter() {
            for (b, y) in o.iter() {
                r.add_term(a.concat(b), x * y);
            }
        }
        r
    }

    /// Product with alphabet validation.
    pub fn checked_mul(&self, o: &NCPoly, n: usize) -> Result<NCPoly, FreeAlgError> {
        for w in self.keys().chain(o.keys()) {
            w.check(n)?;
        }
        Ok(self.mul(o))
    }

    pub fn homogeneous_component(&self, d: &Degree) -> NCPoly {
        let n = d.0.len();
        self.filter(|w| w.degree(n) == *d)
    }

    pub fn render(&self, sym: &dyn Fn(usize) -> String) -> String {
        render_lin(self, |w| render_word(w, sym))
    }
}

impl TensorPoly {
    pub fn mul_tensor(&self, o: &TensorPoly) -> TensorPoly {
        // plain (unbraided) componentwise product
        let mut r = Lin::zero();
        for ((a, b), x) in self.iter() {
            for ((c, d), y) in o.iter() {
                r.add_term((a.concat(c), b.concat(d)), x * y);
            }
        }
        r
    }
}

pub fn render_word(w: &Word, sym: &dyn Fn(usize) -> String) -> String {
    if w.is_empty() {
        return "1".into();
    }
    // collapse runs into powers
    let mut out = String::new();
    let ls: Vec<usize> = w.letters().collect();
    let mut i = 0;
    while i < ls.len() {
        let mut j = i;
        while j < ls.len() && ls[j] == ls[i] {
            j += 1;
        }
        let s = sym(ls[i]);
        if j - i > 1 {
            out.push_str(&format!("({s})^{}", j - i));
        } else {
            out.push_str(&s);
        }
        i = j;
    }
    out
}

/// Render `Σ c·k` with terms in descending key order.
pub fn render_lin<K: Ord + Clone>(l: &Lin<K>, key: impl Fn(&K) -> String) -> String {
    if l.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (k, c)) in l.iter().rev().enumerate() {
        let ks = key(k);
        let (neg, cs) = coeff_string(c);
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match (cs.as_str(), ks.as_str()) {
            ("1", k) => out.push_str(k),
            (c, "1") => out.push_str(c),
            (c, k) => out.push_str(&format!("{c} {k}")),
        }
    }
    out
}

/// Sign and magnitude string of a coefficient; compound values are parenthesised.
pub fn coeff_string(c: &Scalar) -> (bool, String) {
    match c.signed_monomial() {
        Some(x) => x,
        None => (false, format!("({c})")),
    }
}
