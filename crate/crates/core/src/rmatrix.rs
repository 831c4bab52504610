//! R-matrices `R^i_j^k_l` (row `(i,k)`, column `(j,l)`), the braidings they
//! induce on words, and braided integers / factorials.
//!
//! Indices are 0-based internally; the JSON format is 1-based.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freealg::{Lin, NCPoly, TensorPoly, Word};
use crate::linalg::Matrix;
use crate::scalars::{Scalar, ScalarError};

#[derive(Debug, Error)]
pub enum RMatrixError {
    #[error("R-matrix must be {expected}x{expected}, got {rows}x{cols}")]
    Shape { expected: usize, rows: usize, cols: usize },
    #[error("R-matrix is not invertible")]
    Singular,
    #[error("R-matrix fails the quantum Yang-Baxter equation")]
    NotQybe,
    #[error("index {0} out of range in R-matrix entry")]
    Index(usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("bad R-matrix JSON: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Sparse table of an elementary crossing: `cross[u*n+v]` lists `(a, b, coeff)`
/// with `(u, v) -> Σ coeff (a, b)`.
type Crossing = Vec<Vec<(u8, u8, Scalar)>>;

/// A braiding on V⊗V given by its action on basis pairs, with its inverse,
/// extended to words letter by letter.
#[derive(Clone, Debug)]
pub struct Braiding {
    n: usize,
    fwd: Crossing,
    inv: Crossing,
}

fn crossing_table(n: usize, m: &Matrix) -> Crossing {
    let mut t: Crossing = vec![Vec::new(); n * n];
    for u in 0..n {
        for v in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let c = &m[(a * n + b, u * n + v)];
                    if !c.is_zero() {
                        t[u * n + v].push((a as u8, b as u8, c.clone()));
                    }
                }
            }
        }
    }
    t
}

impl Braiding {
    /// `m` maps the basis pair in column `(u,v)` to the combination in its column.
    pub fn from_matrix(n: usize, m: &Matrix) -> Result<Braiding, RMatrixError> {
        let inv = m.inverse().ok_or(RMatrixError::Singular)?;
        Ok(Braiding { n, fwd: crossing_table(n, m), inv: crossing_table(n, &inv) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The braiding Ψ⁻¹ regarded as a braiding.
    pub fn inverse(&self) -> Braiding {
        Braiding { n: self.n, fwd: self.inv.clone(), inv: self.fwd.clone() }
    }

    fn table(&self, d: Direction) -> &Crossing {
        match d {
            Direction::Forward => &self.fwd,
            Direction::Inverse => &self.inv,
        }
    }

    /// Elementary crossing at `(pos, pos+1)` applied to a combination of words.
    pub fn cross_at(&self, v: &NCPoly, pos: usize, d: Direction) -> NCPoly {
        apply_at(self.table(d), self.n, v, pos)
    }

    /// Ψ (or Ψ⁻¹) of `w1 ⊗ w2`: every letter of `w2` is moved left past all of `w1`.
    /// The result has components of lengths `(|w2|, |w1|)`.
    pub fn braid_words(&self, w1: &Word, w2: &Word, d: Direction) -> TensorPoly {
        let p = w1.len();
        let q = w2.len();
        let mut cur = NCPoly::word(w1.concat(w2));
        if p > 0 {
            for k in 0..q {
                for t in (k..p + k).rev() {
                    cur = self.cross_at(&cur, t, d);
                }
            }
        }
        cur.map_keys(|w| (w.slice(0, q), w.slice(q, p + q)))
    }

    pub fn braid(&self, t: &TensorPoly, d: Direction) -> TensorPoly {
        t.flat_map(|(a, b)| self.braid_words(a, b, d))
    }
}

#[derive(Clone, Debug)]
pub struct RMatrix {
    n: usize,
    r: Matrix,
    inv: Matrix,
    qybe: bool,
    vector: Braiding,
    covector: Braiding,
    pr: Crossing,
}

impl PartialEq for RMatrix {
    fn eq(&self, o: &RMatrix) -> bool {
        self.n == o.n && self.r == o.r
    }
}

impl RMatrix {
    pub fn new(n: usize, r: Matrix) -> Result<RMatrix, RMatrixError> {
        if r.rows() != n * n || r.cols() != n * n {
            return Err(RMatrixError::Shape { expected: n * n, rows: r.rows(), cols: r.cols() });
        }
        let inv = r.inverse().ok_or(RMatrixError::Singular)?;
        let p = permutation(n);
        // Ψ(e^u ⊗ e^v) = Σ R^v_a^u_b e^a ⊗ e^b, i.e. the matrix Rᵀ P
        let vector = Braiding::from_matrix(n, &r.transpose().mul(&p))?;
        // Ψ(f_u ⊗ f_v) = Σ f_b ⊗ f_a R^a_u^b_v, i.e. the matrix P R
        let pr_m = p.mul(&r);
        let covector = Braiding::from_matrix(n, &pr_m)?;
        let pr = crossing_table(n, &pr_m);
        Ok(RMatrix { n, r, inv, qybe: false, vector, covector, pr })
    }

    /// Build from `(i, j, k, l, value)` entries (0-based); missing entries are zero.
    pub fn from_entries(n: usize, entries: &[(usize, usize, usize, usize, Scalar)]) -> Result<RMatrix, RMatrixError> {
        let mut m = Matrix::zeros(n * n, n * n);
        for (i, j, k, l, v) in entries {
            for &x in [i, j, k, l] {
                if x >= n {
                    return Err(RMatrixError::Index(x + 1));
                }
            }
            m[(i * n + k, j * n + l)] = v.clone();
        }
        RMatrix::new(n, m)
    }

    /// Diagonal R with `R^i_i^k_k = d(i, k)`.
    pub fn diagonal(n: usize, d: impl Fn(usize, usize) -> Scalar) -> Result<RMatrix, RMatrixError> {
        let mut m = Matrix::zeros(n * n, n * n);
        for i in 0..n {
            for k in 0..n {
                m[(i * n + k, i * n + k)] = d(i, k);
            }
        }
        RMatrix::new(n, m)
    }

    /// The standard sl2 R-matrix on the quantum plane.
    pub fn sl2() -> RMatrix {
        let q = Scalar::q();
        let q2 = Scalar::q_pow(2);
        let rows = vec![
            vec![q2.clone(), Scalar::zero(), Scalar::zero(), Scalar::zero()],
            vec![Scalar::zero(), q.clone(), &q2 - Scalar::one(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), q, Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), Scalar::zero(), q2],
        ];
        RMatrix::new(2, Matrix::from_rows(rows)).expect("sl2 R-matrix is invertible")
    }

    /// Parse `{ "n": int, "entries": [[i,j,k,l,"scalar"], ...] }` with 1-based indices.
    pub fn from_json(text: &str) -> Result<RMatrix, RMatrixError> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            entries: Vec<(usize, usize, usize, usize, String)>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| RMatrixError::Json(e.to_string()))?;
        let mut es = Vec::new();
        for (i, j, k, l, s) in raw.entries {
            for x in [i, j, k, l] {
                if x == 0 || x > raw.n {
                    return Err(RMatrixError::Index(x));
                }
            }
            es.push((i - 1, j - 1, k - 1, l - 1, Scalar::parse(&s)?));
        }
        RMatrix::from_entries(raw.n, &es)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.n;
        let mut es = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.entry(i, j, k, l);
                        if !v.is_zero() {
                            es.push(serde_json::json!([i + 1, j + 1, k + 1, l + 1, v.to_string()]));
                        }
                    }
                }
            }
        }
        serde_json::json!({ "n": n, "entries": es })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.r
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inv
    }

    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> Scalar {
        self.r[(i * self.n + k, j * self.n + l)].clone()
    }

    pub fn inv_entry(&self, i: usize, j: usize, k: usize, l: usize) -> Scalar {
        self.inv[(i * self.n + k, j * self.n + l)].clone()
    }

    pub fn scaled(&self, lambda: &Scalar) -> RMatrix {
        RMatrix::new(self.n, self.r.scale(lambda)).expect("nonzero rescale keeps R invertible")
    }

    /// Same matrix with the inverse as R (R⁻¹ is again a QYBE solution).
    pub fn inverted(&self) -> RMatrix {
        RMatrix::new(self.n, self.inv.clone()).expect("inverse is invertible")
    }

    /// `R21 = P R P`.
    pub fn transposed_legs(&self) -> RMatrix {
        let p = permutation(self.n);
        RMatrix::new(self.n, p.mul(&self.r).mul(&p)).expect("conjugate is invertible")
    }

    pub fn is_certified(&self) -> bool {
        self.qybe
    }

    /// Checks QYBE and sets the certification flag.
    pub fn certify(mut self) -> Result<RMatrix, RMatrixError> {
        if !check_qybe(&self) {
            return Err(RMatrixError::NotQybe);
        }
        self.qybe = true;
        Ok(self)
    }

    /// Braiding of the vector algebra generated by the e^i.
    pub fn vector_braiding(&self) -> &Braiding {
        &self.vector
    }

    /// Braiding of the covector algebra generated by the f_i.
    pub fn covector_braiding(&self) -> &Braiding {
        &self.covector
    }

    pub fn cross_at(&self, v: &NCPoly, pos: usize, d: Direction) -> NCPoly {
        self.vector.cross_at(v, pos, d)
    }

    /// `(PR)` acting on tensor positions `(pos, pos+1)`.
    pub fn pr_at(&self, v: &NCPoly, pos: usize) -> NCPoly {
        apply_at(&self.pr, self.n, v, pos)
    }

    /// `[m;R]` applied to a vector in V^{⊗m}, represented by words of length m.
    pub fn braided_integer_apply(&self, m: usize, v: &NCPoly) -> NCPoly {
        self.braided_integer_apply_at(m, 0, v)
    }

    /// `[m;R]` acting on the positions `start..start+m`.
    fn braided_integer_apply_at(&self, m: usize, start: usize, v: &NCPoly) -> NCPoly {
        let mut acc = v.clone();
        let mut cur = v.clone();
        for p in 0..m.saturating_sub(1) {
            cur = self.pr_at(&cur, start + p);
            acc = acc.add(&cur);
        }
        acc
    }

    /// `[m;R]!` applied to a vector of words of length m.
    pub fn braided_factorial_apply(&self, m: usize, v: &NCPoly) -> NCPoly {
        let mut cur = v.clone();
        for k in 2..=m {
            cur = self.braided_integer_apply_at(k, m - k, &cur);
        }
        cur
    }

    /// Dense `[m;R]` on V^{⊗m}.
    pub fn braided_integer(&self, m: usize) -> Matrix {
        self.dense(m, |v| self.braided_integer_apply(m, v))
    }

    /// Dense `[m;R]!` on V^{⊗m}.
    pub fn braided_factorial(&self, m: usize) -> Matrix {
        self.dense(m, |v| self.braided_factorial_apply(m, v))
    }

    fn dense(&self, m: usize, f: impl Fn(&NCPoly) -> NCPoly) -> Matrix {
        let words = Word::all_of_length(self.n, m);
        let index = |w: &Word| w.letters().fold(0usize, |a, l| a * self.n + l);
        let mut out = Matrix::zeros(words.len(), words.len());
        for (j, w) in words.iter().enumerate() {
            let img = f(&NCPoly::word(w.clone()));
            for (u, c) in img.iter() {
                out[(index(u), j)] = c.clone();
            }
        }
        out
    }

    /// Ψ (or Ψ⁻¹) of `w1 ⊗ w2` in the vector algebra.
    pub fn braid_words(&self, w1: &Word, w2: &Word, d: Direction) -> TensorPoly {
        self.vector.braid_words(w1, w2, d)
    }

    pub fn braid(&self, t: &TensorPoly, d: Direction) -> TensorPoly {
        self.vector.braid(t, d)
    }
}

fn apply_at(table: &Crossing, n: usize, v: &NCPoly, pos: usize) -> NCPoly {
    let mut out = Lin::zero();
    for (w, c) in v.iter() {
        let u = w.0[pos] as usize;
        let x = w.0[pos + 1] as usize;
        for (a, b, k) in &table[u * n + x] {
            let mut nw = w.0.clone();
            nw[pos] = *a;
            nw[pos + 1] = *b;
            out.add_term(Word(nw), c * k);
        }
    }
    out
}

/// Flip `P^i_j^k_l = δ^i_l δ^k_j`.
pub fn permutation(n: usize) -> Matrix {
    let mut p = Matrix::zeros(n * n, n * n);
    for j in 0..n {
        for l in 0..n {
            p[(l * n + j, j * n + l)] = Scalar::one();
        }
    }
    p
}

/// `R12 R13 R23 = R23 R13 R12` as exact n³×n³ matrices.
pub fn check_qybe(r: &RMatrix) -> bool {
    let n = r.n;
    let id = Matrix::identity(n);
    let r12 = r.r.kron(&id);
    let r23 = id.kron(&r.r);
    let p23 = id.kron(&permutation(n));
    let r13 = p23.mul(&r12).mul(&p23);
    r12.mul(&r13).mul(&r23) == r23.mul(&r13).mul(&r12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a1() -> RMatrix {
        RMatrix::diagonal(1, |_, _| Scalar::q_pow(2)).unwrap()
    }

    #[test]
    fn sl2_qybe_and_perturbation() {
        let r = RMatrix::sl2();
        assert!(check_qybe(&r));
        let mut m = r.matrix().clone();
        m[(1, 2)] = &m[(1, 2)] + Scalar::one();
        assert!(!check_qybe(&RMatrix::new(2, m).unwrap()));
        assert!(r.clone().certify().unwrap().is_certified());
        assert_eq!(r.entry(0, 1, 1, 0), Scalar::parse("q^2 - 1").unwrap());
    }

    #[test]
    fn one_dimensional_integers() {
        let r = a1();
        assert_eq!(r.braided_integer(1), Matrix::identity(1));
        assert_eq!(r.braided_integer(2)[(0, 0)], Scalar::parse("1+q^2").unwrap());
        assert_eq!(r.braided_integer(3)[(0, 0)], Scalar::parse("1+q^2+q^4").unwrap());
        assert_eq!(r.braided_factorial(3)[(0, 0)], Scalar::parse("(1+q^2)(1+q^2+q^4)").unwrap());
    }

    #[test]
    fn integer_two_is_id_plus_pr() {
        let r = RMatrix::sl2();
        let pr = permutation(2).mul(r.matrix());
        assert_eq!(r.braided_integer(2), Matrix::identity(4).add(&pr));
    }

    #[test]
    fn integer_recursion() {
        // [m;R] = id + ([m-1;R] on positions 2..m)·(PR)_12
        let r = RMatrix::sl2();
        let pr = permutation(2).mul(r.matrix());
        for m in 2..=4usize {
            let upper = Matrix::identity(2).kron(&r.braided_integer(m - 1));
            let pr_first = pr.kron(&Matrix::identity(1usize << (m - 2)));
            let rhs = Matrix::identity(1 << m).add(&upper.mul(&pr_first));
            assert_eq!(r.braided_integer(m), rhs, "m={m}");
        }
        // in one dimension this is also [m] = 1 + q^2 [m-1]
        let a = a1();
        for m in 2..=4usize {
            let rhs = Scalar::one() + Scalar::q_pow(2) * &a.braided_integer(m - 1)[(0, 0)];
            assert_eq!(a.braided_integer(m)[(0, 0)], rhs);
        }
    }

    #[test]
    fn hecke_condition() {
        let r = RMatrix::sl2().scaled(&Scalar::q_pow(-1));
        let pr = permutation(2).mul(r.matrix());
        let q = Scalar::q();
        let id = Matrix::identity(4);
        let lhs = pr.sub(&id.scale(&q)).mul(&pr.add(&id.scale(&q.inv().unwrap())));
        assert!(lhs.is_zero());
    }

    #[test]
    fn braid_words_examples() {
        let r = a1();
        let e = Word::letter(0);
        let t = r.braid_words(&Word::empty(), &e, Direction::Forward);
        assert_eq!(t, Lin::basis((e.clone(), Word::empty())));
        let t = r.braid_words(&e, &e, Direction::Forward);
        assert_eq!(t, Lin::term((e.clone(), e.clone()), Scalar::q_pow(2)));
    }

    #[test]
    fn json_roundtrip() {
        let r = RMatrix::sl2();
        let back = RMatrix::from_json(&r.to_json().to_string()).unwrap();
        assert_eq!(back, r);
        assert!(RMatrix::from_json(r#"{"n":1,"entries":[[1,1,1,2,"q"]]}"#).is_err());
    }

    proptest! {
        #[test]
        fn inverse_braid_undoes_forward(a in prop::collection::vec(0u8..2, 0..4), b in prop::collection::vec(0u8..2, 0..4)) {
            let r = RMatrix::sl2();
            let (a, b) = (Word(a), Word(b));
            let fwd = r.braid_words(&a, &b, Direction::Forward);
            let back = r.braid(&fwd, Direction::Inverse);
            prop_assert_eq!(back, Lin::basis((a, b)));
        }
    }
}
