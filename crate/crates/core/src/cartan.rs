//! Cartan and root data, the torus H = kY, its pairing with kZ[I] and the weak
//! quasitriangular maps R, R̄.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freealg::Degree;
use crate::rmatrix::{RMatrix, RMatrixError};
use crate::scalars::{Mode, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error("invalid datum: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("bad datum JSON: {0}")]
    Json(String),
    #[error("R-matrix: {0}")]
    RMatrix(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    NotSquare { row: usize },
    Asymmetric { i: usize, j: usize },
    DiagonalNotEvenPositive { i: usize, value: i64 },
    OffDiagonal { i: usize, j: usize, a_ij: String },
    RootShape(String),
    RootPairing { i: usize, j: usize, expected: i64, found: i64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotSquare { row } => write!(f, "row {} has the wrong length", row + 1),
            Violation::Asymmetric { i, j } => write!(f, "{}·{} != {}·{}", i + 1, j + 1, j + 1, i + 1),
            Violation::DiagonalNotEvenPositive { i, value } => {
                write!(f, "{}·{} = {} must be even and positive", i + 1, i + 1, value)
            }
            Violation::OffDiagonal { i, j, a_ij } => {
                write!(f, "a_{}{} = {} must be a nonpositive integer", i + 1, j + 1, a_ij)
            }
            Violation::RootShape(s) => write!(f, "root datum shape: {s}"),
            Violation::RootPairing { i, j, expected, found } => {
                write!(f, "<{}, {}'> = {} but a_{}{} = {}", i + 1, j + 1, found, i + 1, j + 1, expected)
            }
        }
    }
}

/// Symmetric bilinear form `i·j` on Z[I].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanDatum {
    pub dot: Vec<Vec<i64>>,
}

impl CartanDatum {
    pub fn new(dot: Vec<Vec<i64>>) -> CartanDatum {
        CartanDatum { dot }
    }

    pub fn a1() -> CartanDatum {
        CartanDatum::new(vec![vec![2]])
    }

    pub fn a2() -> CartanDatum {
        CartanDatum::new(vec![vec![2, -1], vec![-1, 2]])
    }

    pub fn n(&self) -> usize {
        self.dot.len()
    }

    pub fn dot(&self, i: usize, j: usize) -> i64 {
        self.dot[i][j]
    }

    /// `a_ij = 2 (i·j)/(i·i)`; only meaningful after validation.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        2 * self.dot[i][j] / self.dot[i][i]
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.n()).map(|i| (0..self.n()).map(|j| self.a(i, j)).collect()).collect()
    }

    /// `ν·μ` for degree vectors.
    pub fn form(&self, a: &Degree, b: &Degree) -> i64 {
        let mut s = 0;
        for i in 0..self.n() {
            for j in 0..self.n() {
                s += a.0[i] * self.dot[i][j] * b.0[j];
            }
        }
        s
    }

    pub fn violations(&self) -> Vec<Violation> {
        let n = self.n();
        let mut out = Vec::new();
        for (i, row) in self.dot.iter().enumerate() {
            if row.len() != n {
                out.push(Violation::NotSquare { row: i });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for i in 0..n {
            let d = self.dot[i][i];
            if d <= 0 || d % 2 != 0 {
                out.push(Violation::DiagonalNotEvenPositive { i, value: d });
            }
            for j in 0..n {
                if j > i && self.dot[i][j] != self.dot[j][i] {
                    out.push(Violation::Asymmetric { i, j });
                }
            }
        }
        for i in 0..n {
            let d = self.dot[i][i];
            if d <= 0 {
                continue;
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let num = 2 * self.dot[i][j];
                if num % d != 0 || num > 0 {
                    let a = if num % d == 0 { (num / d).to_string() } else { format!("{}/{}", num, d) };
                    out.push(Violation::OffDiagonal { i, j, a_ij: a });
                }
            }
        }
        out
    }

    /// The diagonal R-matrix `R^i_i^k_k = q^{i·k}` of the free braided plane.
    pub fn to_rmatrix(&self, mode: Mode) -> Result<RMatrix, CartanError> {
        let v = self.violations();
        if !v.is_empty() {
            return Err(CartanError::Invalid(v));
        }
        let r = RMatrix::diagonal(self.n(), |i, k| mode.q_pow(self.dot[i][k]))
            .map_err(|e: RMatrixError| CartanError::RMatrix(e.to_string()))?;
        Ok(r)
    }
}

/// Root datum: free abelian Y, X with `pairing[y][x] = <y_basis, x_basis>`,
/// `i_in_y[i]` the image of i in Y and `i_prime[i]` the image i' in X.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    pub pairing: Vec<Vec<i64>>,
    pub i_in_y: Vec<Vec<i64>>,
    pub i_prime: Vec<Vec<i64>>,
}

impl RootDatum {
    /// Y = X = Z^n, identity pairing, i ↦ e_i, i' = column i of the Cartan matrix.
    pub fn simply_connected(d: &CartanDatum) -> RootDatum {
        let n = d.n();
        let unit = |i: usize| (0..n).map(|k| i64::from(k == i)).collect::<Vec<_>>();
        RootDatum {
            pairing: (0..n).map(unit).collect(),
            i_in_y: (0..n).map(unit).collect(),
            i_prime: (0..n).map(|j| (0..n).map(|i| d.a(i, j)).collect()).collect(),
        }
    }

    pub fn rank_y(&self) -> usize {
        self.pairing.len()
    }

    pub fn rank_x(&self) -> usize {
        self.pairing.first().map_or(0, |r| r.len())
    }

    /// `<y, x>` on coordinate vectors.
    pub fn pair(&self, y: &[i64], x: &[i64]) -> i64 {
        let mut s = 0;
        for (a, row) in y.iter().zip(&self.pairing) {
            if *a == 0 {
                continue;
            }
            for (b, p) in x.iter().zip(row) {
                s += a * b * p;
            }
        }
        s
    }

    pub fn violations(&self, d: &CartanDatum) -> Vec<Violation> {
        let n = d.n();
        let mut out = Vec::new();
        let (ry, rx) = (self.rank_y(), self.rank_x());
        if self.pairing.iter().any(|r| r.len() != rx) {
            out.push(Violation::RootShape("pairing rows have unequal length".into()));
        }
        if self.i_in_y.len() != n || self.i_in_y.iter().any(|v| v.len() != ry) {
            out.push(Violation::RootShape(format!("need {n} vectors of length {ry} for I -> Y")));
        }
        if self.i_prime.len() != n || self.i_prime.iter().any(|v| v.len() != rx) {
            out.push(Violation::RootShape(format!("need {n} vectors of length {rx} for I -> X")));
        }
        if !out.is_empty() {
            return out;
        }
        for i in 0..n {
            for j in 0..n {
                let found = self.pair(&self.i_in_y[i], &self.i_prime[j]);
                let expected = d.a(i, j);
                if found != expected {
                    out.push(Violation::RootPairing { i, j, expected, found });
                }
            }
        }
        out
    }
}

/// Group-like `K_μ c^k` with μ stored doubled so half-integer exponents are exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusElement {
    pub twice: Vec<i64>,
    pub dilaton: i64,
}

impl TorusElement {
    pub fn identity(rank: usize) -> TorusElement {
        TorusElement { twice: vec![0; rank], dilaton: 0 }
    }

    pub fn from_twice(twice: Vec<i64>) -> TorusElement {
        TorusElement { twice, dilaton: 0 }
    }

    pub fn is_identity(&self) -> bool {
        self.dilaton == 0 && self.twice.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, o: &TorusElement) -> TorusElement {
        TorusElement {
            twice: self.twice.iter().zip(&o.twice).map(|(a, b)| a + b).collect(),
            dilaton: self.dilaton + o.dilaton,
        }
    }

    pub fn inv(&self) -> TorusElement {
        TorusElement { twice: self.twice.iter().map(|a| -a).collect(), dilaton: -self.dilaton }
    }

    /// Reduce exponents modulo `r` (for K^r = 1); dilaton untouched.
    pub fn reduce_mod(&self, r: i64) -> TorusElement {
        TorusElement { twice: self.twice.iter().map(|a| a.rem_euclid(2 * r)).collect(), dilaton: self.dilaton }
    }
}

/// Torus data for a validated Cartan/root datum, optionally with a dilaton c
/// pairing as `<c, g_i> = λ` and `R(g_i)` extended by `c^{-1}`.
#[derive(Clone, Debug)]
pub struct Torus {
    pub datum: CartanDatum,
    pub root: RootDatum,
    pub dilaton: Option<Scalar>,
    pub mode: Mode,
}

impl Torus {
    pub fn new(datum: CartanDatum, root: RootDatum, mode: Mode) -> Result<Torus, CartanError> {
        validate(&datum, &root)?;
        Ok(Torus { datum, root, dilaton: None, mode })
    }

    pub fn simply_connected(datum: CartanDatum, mode: Mode) -> Result<Torus, CartanError> {
        let root = RootDatum::simply_connected(&datum);
        Torus::new(datum, root, mode)
    }

    pub fn with_dilaton(mut self, lambda: Scalar) -> Torus {
        self.dilaton = Some(lambda);
        self
    }

    pub fn n(&self) -> usize {
        self.datum.n()
    }

    pub fn rank(&self) -> usize {
        self.root.rank_y()
    }

    pub fn identity(&self) -> TorusElement {
        TorusElement::identity(self.rank())
    }

    /// `K_i` (the image of i in Y).
    pub fn k(&self, i: usize) -> TorusElement {
        TorusElement::from_twice(self.root.i_in_y[i].iter().map(|x| 2 * x).collect())
    }

    /// `⟨K_μ, g^ν⟩ = q^{⟨μ, Σ ν_i i'⟩}` times `λ^{k·|ν|}` for the dilaton part.
    pub fn pairing(&self, mu: &TorusElement, nu: &Degree) -> Scalar {
        let mut s_exp = 0;
        for (i, &c) in nu.0.iter().enumerate() {
            if c != 0 {
                s_exp += c * self.root.pair(&mu.twice, &self.root.i_prime[i]);
            }
        }
        let mut v = self.mode.s_pow(s_exp);
        if mu.dilaton != 0 {
            let lam = self.dilaton.as_ref().expect("dilaton exponent without dilaton");
            v = v * self.mode.embed(lam).pow(mu.dilaton * nu.total());
        }
        v
    }

    /// Weak quasitriangular map on the group element g^ν: `R(g_i) = K_i^{i·i/2}` (and `c^{-1}`);
    /// `R̄` is its inverse.
    pub fn weak_r(&self, nu: &Degree, bar: bool) -> TorusElement {
        let mut twice = vec![0; self.rank()];
        for (i, &c) in nu.0.iter().enumerate() {
            let d = self.datum.dot(i, i);
            for (t, y) in twice.iter_mut().zip(&self.root.i_in_y[i]) {
                *t += c * d * y;
            }
        }
        let dil = if self.dilaton.is_some() { -nu.total() } else { 0 };
        let el = TorusElement { twice, dilaton: dil };
        if bar {
            el.inv()
        } else {
            el
        }
    }

    /// `K̃_ν = R(g^ν)`.
    pub fn k_tilde(&self, nu: &Degree) -> TorusElement {
        self.weak_r(nu, false)
    }

    /// `q_i = q^{i·i/2}`.
    pub fn q_i(&self, i: usize) -> Scalar {
        self.mode.q_pow(self.datum.dot(i, i) / 2)
    }

    /// Checks `⟨R̄(g_i), g_j⟩ = ⟨R⁻¹(g_j), g_i⟩` for all generator pairs.
    pub fn check_weak_symmetry(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let unit = |i: usize| Degree((0..n).map(|k| i64::from(k == i)).collect());
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.pairing(&self.weak_r(&unit(i), true), &unit(j));
                let rhs = self.pairing(&self.weak_r(&unit(j), false).inv(), &unit(i));
                if lhs != rhs {
                    bad.push((i, j));
                }
            }
        }
        bad
    }
}

pub fn validate(d: &CartanDatum, r: &RootDatum) -> Result<(), CartanError> {
    let mut v = d.violations();
    if v.is_empty() {
        v.extend(r.violations(d));
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(CartanError::Invalid(v))
    }
}

/// Cartan-datum JSON: `{ "n": int, "dot": [[int]], "root_datum": "simply_connected" | {...}, "half_torus": bool }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatumConfig {
    pub n: usize,
    pub dot: Vec<Vec<i64>>,
    #[serde(default = "default_root")]
    pub root_datum: RootSpec,
    #[serde(default)]
    pub half_torus: bool,
}

fn default_root() -> RootSpec {
    RootSpec::Named("simply_connected".into())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootSpec {
    Named(String),
    Explicit(RootDatum),
}

impl DatumConfig {
    pub fn preset(name: &str) -> Result<DatumConfig, CartanError> {
        let d = match name {
            "A1" => CartanDatum::a1(),
            "A2" => CartanDatum::a2(),
            _ => return Err(CartanError::UnknownPreset(name.into())),
        };
        Ok(DatumConfig { n: d.n(), dot: d.dot, root_datum: default_root(), half_torus: false })
    }

    pub fn from_json(text: &str) -> Result<DatumConfig, CartanError> {
        serde_json::from_str(text).map_err(|e| CartanError::Json(e.to_string()))
    }

    pub fn resolve(&self) -> Result<(CartanDatum, RootDatum), CartanError> {
        let d = CartanDatum::new(self.dot.clone());
        if d.n() != self.n {
            return Err(CartanError::Json(format!("n = {} but dot has {} rows", self.n, d.n())));
        }
        let v = d.violations();
        if !v.is_empty() {
            return Err(CartanError::Invalid(v));
        }
        let r = match &self.root_datum {
            RootSpec::Named(s) if s == "simply_connected" => RootDatum::simply_connected(&d),
            RootSpec::Named(s) => return Err(CartanError::Json(format!("unknown root datum `{s}`"))),
            RootSpec::Explicit(r) => r.clone(),
        };
        validate(&d, &r)?;
        Ok((d, r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(CartanDatum::a2().violations().is_empty());
        let bad = CartanDatum::new(vec![vec![3]]);
        assert!(matches!(bad.violations()[0], Violation::DiagonalNotEvenPositive { i: 0, value: 3 }));
        let asym = CartanDatum::new(vec![vec![2, -1], vec![0, 2]]);
        assert!(asym.violations().iter().any(|v| matches!(v, Violation::Asymmetric { .. })));
        let d = CartanDatum::a2();
        let mut r = RootDatum::simply_connected(&d);
        assert!(validate(&d, &r).is_ok());
        r.i_prime[0][1] = 0;
        assert!(validate(&d, &r).is_err());
    }

    #[test]
    fn rmatrix_from_datum() {
        let r = CartanDatum::a2().to_rmatrix(Mode::Generic).unwrap();
        let q = |k| Scalar::q_pow(k);
        assert_eq!(r.entry(0, 0, 0, 0), q(2));
        assert_eq!(r.entry(0, 0, 1, 1), q(-1));
        assert_eq!(r.entry(1, 1, 0, 0), q(-1));
        assert_eq!(r.entry(1, 1, 1, 1), q(2));
        assert!(crate::rmatrix::check_qybe(&r));
        assert_eq!(CartanDatum::a1().to_rmatrix(Mode::Generic).unwrap().entry(0, 0, 0, 0), q(2));
    }

    #[test]
    fn pairing_and_weak_r() {
        let t = Torus::simply_connected(CartanDatum::a1(), Mode::Generic).unwrap();
        let g = Degree(vec![1]);
        assert_eq!(t.pairing(&t.k(0), &g), Scalar::q_pow(2));
        assert!(t.pairing(&t.identity(), &g).is_one());
        assert_eq!(t.weak_r(&g, false), t.k(0));
        assert!(t.weak_r(&Degree(vec![0]), false).is_identity());
        assert!(t.check_weak_symmetry().is_empty());

        let t2 = Torus::simply_connected(CartanDatum::a2(), Mode::Generic).unwrap();
        assert_eq!(t2.weak_r(&Degree(vec![1, 1]), false), t2.k(0).mul(&t2.k(1)));
        assert!(t2.check_weak_symmetry().is_empty());
    }

    #[test]
    fn k_tilde_is_multiplicative() {
        let t = Torus::simply_connected(CartanDatum::a2(), Mode::Generic).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let x = Degree(vec![a, b]);
                    let y = Degree(vec![c, a]);
                    assert_eq!(t.k_tilde(&x.add(&y)), t.k_tilde(&x).mul(&t.k_tilde(&y)));
                }
            }
        }
    }

    #[test]
    fn datum_json() {
        let c = DatumConfig::from_json(r#"{"n":2,"dot":[[2,-1],[-1,2]],"root_datum":"simply_connected","half_torus":false}"#).unwrap();
        let (d, _) = c.resolve().unwrap();
        assert_eq!(d, CartanDatum::a2());
        assert!(DatumConfig::preset("B7").is_err());
    }
}
