//! The double-bosonisation U(C̄, H, B) for torus-type H, realised on normal-ordered
//! triples (C̄-word, torus element, B-word).
//!
//! Conventions: `e^i K_μ = q^{⟨μ,i′⟩} K_μ e^i`, `K_μ f_i = q^{⟨μ,i′⟩} f_i K_μ`,
//! `⟨f_i, e^j⟩ = δ_ij (q_i − q_i⁻¹)⁻¹` in the U-layer pairing, and the
//! fundamental representation is a right action on B.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use thiserror::Error;

use crate::braidedgroup::{braided_exp, BraidedError, BraidedGroup, ExpVariant, Flavor, Quotient};
use crate::cartan::{validate, CartanDatum, CartanError, RootDatum, Torus, TorusElement};
use crate::freealg::{render_lin, render_word, Degree, Lin, NCPoly, Word};
use crate::report::Report;
use crate::scalars::{Mode, Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DoubleBosError {
    #[error("intermediate degree {degree} exceeds the truncation bound {bound}")]
    Truncation { degree: usize, bound: usize },
    #[error("operation needs a rank-one algebra at a root of unity")]
    NotRootOfUnity,
    #[error(transparent)]
    Braided(#[from] BraidedError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A basis monomial `c K_μ b`.
pub type UKey = (Word, TorusElement, Word);
pub type UElement = Lin<UKey>;
/// Elements of `U^{⊗k}`, one key per tensor factor.
pub type UTensor = Lin<Vec<UKey>>;

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub mode: Mode,
    /// Largest total C̄ + B degree of a product's factors.
    pub truncation: usize,
    pub dilaton: Option<Scalar>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { mode: Mode::Generic, truncation: 8, dilaton: None }
    }
}

/// Deliberate corruption for testing the verifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Scale the `⟨c₍₁₎, b₍₁₎⟩` cross terms with nonempty `b₍₁₎` by this factor.
    CrossPairing(Scalar),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhChoice {
    Standard,
    Identity,
}

type Cache<K> = RwLock<HashMap<K, Arc<UElement>>>;

pub struct UAlgebra {
    pub torus: Torus,
    b: BraidedGroup,
    c: BraidedGroup,
    kappa: Vec<Scalar>,
    truncation: usize,
    root_of_unity: Option<u32>,
    fault: Option<Fault>,
    cross_cache: Cache<(Word, Word)>,
    sb_cache: Cache<Word>,
    sc_cache: Cache<Word>,
}

impl std::fmt::Debug for UAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UAlgebra").field("n", &self.n()).field("truncation", &self.truncation).field("root_of_unity", &self.root_of_unity).finish()
    }
}

pub fn build(datum: &CartanDatum, root: &RootDatum, opts: &BuildOptions) -> Result<UAlgebra, DoubleBosError> {
    validate(datum, root)?;
    let mut torus = Torus::new(datum.clone(), root.clone(), opts.mode)?;
    if let Some(l) = &opts.dilaton {
        torus = torus.with_dilaton(l.clone());
    }
    let r = datum.to_rmatrix(opts.mode)?;
    let b = BraidedGroup::vector(r.clone(), Quotient::Radical)?;
    let c = BraidedGroup::cbar(r, Quotient::Radical)?;
    let mut kappa = Vec::new();
    for i in 0..datum.n() {
        let qi = torus.q_i(i);
        kappa.push((&qi - qi.inv()?).inv()?);
    }
    let root_of_unity = match opts.mode {
        Mode::Cyclotomic(r) => Some(r),
        Mode::Generic => None,
    };
    Ok(UAlgebra {
        torus,
        b,
        c,
        kappa,
        truncation: opts.truncation,
        root_of_unity,
        fault: None,
        cross_cache: RwLock::new(HashMap::new()),
        sb_cache: RwLock::new(HashMap::new()),
        sc_cache: RwLock::new(HashMap::new()),
    })
}

/// `build` with the simply-connected root datum.
pub fn build_simply_connected(datum: &CartanDatum, opts: &BuildOptions) -> Result<UAlgebra, DoubleBosError> {
    build(datum, &RootDatum::simply_connected(datum), opts)
}

/// u_q(sl₂) at a primitive r-th root of unity (`K^r = 1`, `e^r = f^r = 0`).
pub fn build_root_of_unity(r: u32) -> Result<UAlgebra, DoubleBosError> {
    let mode = Mode::cyclotomic(r)?;
    build_simply_connected(&CartanDatum::a1(), &BuildOptions { mode, truncation: 2 * (r as usize - 1), dilaton: None })
}

fn get_or<K: std::hash::Hash + Eq + Clone>(cache: &Cache<K>, k: &K, f: impl FnOnce() -> Result<UElement, DoubleBosError>) -> Result<Arc<UElement>, DoubleBosError> {
    if let Some(v) = cache.read().expect("cache poisoned").get(k) {
        return Ok(v.clone());
    }
    let v = Arc::new(f()?);
    Ok(cache.write().expect("cache poisoned").entry(k.clone()).or_insert(v).clone())
}

impl UAlgebra {
    pub fn with_fault(mut self, fault: Fault) -> UAlgebra {
        self.fault = Some(fault);
        self
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn mode(&self) -> Mode {
        self.torus.mode
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn root_of_unity(&self) -> Option<u32> {
        self.root_of_unity
    }

    pub fn b_group(&self) -> &BraidedGroup {
        &self.b
    }

    pub fn c_group(&self) -> &BraidedGroup {
        &self.c
    }

    pub fn kappa(&self) -> &[Scalar] {
        &self.kappa
    }

    fn tnorm(&self, t: TorusElement) -> TorusElement {
        match self.root_of_unity {
            Some(r) => t.reduce_mod(r as i64),
            None => t,
        }
    }

    fn tmul(&self, a: &TorusElement, b: &TorusElement) -> TorusElement {
        self.tnorm(a.mul(b))
    }

    fn deg(&self, w: &Word) -> Degree {
        w.degree(self.n())
    }

    fn scalar(&self, x: Scalar) -> Scalar {
        self.mode().embed(&x)
    }

    pub fn one(&self) -> UElement {
        Lin::basis((Word::empty(), self.torus.identity(), Word::empty()))
    }

    pub fn e(&self, i: usize) -> UElement {
        Lin::basis((Word::empty(), self.torus.identity(), Word::letter(i)))
    }

    pub fn f(&self, i: usize) -> UElement {
        Lin::basis((Word::letter(i), self.torus.identity(), Word::empty()))
    }

    pub fn k(&self, t: &TorusElement) -> UElement {
        Lin::basis((Word::empty(), self.tnorm(t.clone()), Word::empty()))
    }

    /// `K_i^{±1}`.
    pub fn k_gen(&self, i: usize, inverse: bool) -> UElement {
        let t = self.torus.k(i);
        self.k(&if inverse { t.inv() } else { t })
    }

    /// `K̃_i = K_i^{i·i/2}` (times `c⁻¹` with a dilaton).
    pub fn k_tilde_gen(&self, i: usize) -> TorusElement {
        self.tnorm(self.torus.k_tilde(&self.deg(&Word::letter(i))))
    }

    pub fn scalar_elem(&self, s: Scalar) -> UElement {
        self.one().scale(&self.scalar(s))
    }

    /// `f_i`, `K_i^{±1}` (and `c^{±1}`), `e^i`.
    pub fn generators(&self) -> Vec<(String, UElement)> {
        let mut g = Vec::new();
        for i in 0..self.n() {
            g.push((self.render_key(&(Word::letter(i), self.torus.identity(), Word::empty())), self.f(i)));
        }
        for i in 0..self.n() {
            for inv in [false, true] {
                let t = self.torus.k(i);
                let t = if inv { t.inv() } else { t };
                g.push((self.render_torus(&t), self.k(&t)));
            }
        }
        if self.torus.dilaton.is_some() {
            for d in [1, -1] {
                let t = TorusElement { twice: vec![0; self.torus.rank()], dilaton: d };
                g.push((self.render_torus(&t), self.k(&t)));
            }
        }
        for i in 0..self.n() {
            g.push((self.render_key(&(Word::empty(), self.torus.identity(), Word::letter(i))), self.e(i)));
        }
        g
    }

    /// U-layer pairing `⟨c, b⟩` including the per-generator rescale.
    pub fn pair(&self, c: &Word, b: &Word) -> Scalar {
        let v = self.b.pair_words(c, b);
        if v.is_zero() {
            return v;
        }
        let d = self.deg(b);
        let mut s = v;
        for (i, &m) in d.0.iter().enumerate() {
            s = s * self.kappa[i].pow(m);
        }
        s
    }

    fn pair_poly(&self, c: &NCPoly, b: &Word) -> Scalar {
        let mut acc = Scalar::zero();
        for (w, k) in c.iter() {
            let p = self.pair(w, b);
            if !p.is_zero() {
                acc += k * p;
            }
        }
        acc
    }

    /// `b c` for basis words, normal ordered:
    /// `Σ K̃_{|b₁|} c₂ b₂ K̃⁻¹_{|c₃|} ⟨c₁,b₁⟩⟨S̄c₃,b₃⟩`.
    fn cross(&self, b: &Word, c: &Word) -> Result<Arc<UElement>, DoubleBosError> {
        get_or(&self.cross_cache, &(b.clone(), c.clone()), || {
            if b.is_empty() || c.is_empty() {
                return Ok(Lin::basis((c.clone(), self.torus.identity(), b.clone())));
            }
            let db = self.b.normal_form_multi(&self.b.coproduct_iter(b, 3, Flavor::Standard));
            let dc = self.c.normal_form_multi(&self.c.coproduct_iter(c, 3, Flavor::Standard));
            let mut anti: HashMap<&Word, NCPoly> = HashMap::new();
            for cs in dc.keys() {
                anti.entry(&cs[2]).or_insert_with(|| self.c.antipode(&NCPoly::word(cs[2].clone())));
            }
            let mut out = UElement::zero();
            for (bs, beta) in db.iter() {
                for (cs, gamma) in dc.iter() {
                    if self.deg(&bs[0]) != self.deg(&cs[0]) || self.deg(&bs[2]) != self.deg(&cs[2]) {
                        continue;
                    }
                    let mut p1 = self.pair(&cs[0], &bs[0]);
                    if p1.is_zero() {
                        continue;
                    }
                    if let (Some(Fault::CrossPairing(s)), false) = (&self.fault, bs[0].is_empty()) {
                        p1 *= s;
                    }
                    let p3 = self.pair_poly(&anti[&cs[2]], &bs[2]);
                    if p3.is_zero() {
                        continue;
                    }
                    let kt1 = self.tnorm(self.torus.k_tilde(&self.deg(&bs[0])));
                    let kt3 = self.tnorm(self.torus.k_tilde(&self.deg(&cs[2])).inv());
                    let coef = beta * gamma * p1 * p3 * self.torus.pairing(&kt1, &self.deg(&cs[1])) * self.torus.pairing(&kt3, &self.deg(&bs[1]));
                    out.add_term((cs[1].clone(), self.tmul(&kt1, &kt3), bs[1].clone()), coef);
                }
            }
            Ok(out)
        })
    }

    fn check_degree(&self, d: usize) -> Result<(), DoubleBosError> {
        if d > self.truncation {
            return Err(DoubleBosError::Truncation { degree: d, bound: self.truncation });
        }
        Ok(())
    }

    pub fn key_degree(k: &UKey) -> usize {
        k.0.len() + k.2.len()
    }

    fn mul_keys(&self, x: &UKey, y: &UKey) -> Result<UElement, DoubleBosError> {
        let (c, k, b) = x;
        let (c2, k2, b2) = y;
        self.check_degree(UAlgebra::key_degree(x) + UAlgebra::key_degree(y))?;
        let mid = self.cross(b, c2)?;
        let mut out = UElement::zero();
        for ((cc, kk, bb), coef) in mid.iter() {
            let s = coef * self.torus.pairing(k, &self.deg(cc)) * self.torus.pairing(k2, &self.deg(bb));
            let kt = self.tmul(&self.tmul(k, kk), k2);
            let cp = self.c.mul(&NCPoly::word(c.clone()), &NCPoly::word(cc.clone()));
            let bp = self.b.mul(&NCPoly::word(bb.clone()), &NCPoly::word(b2.clone()));
            for (cw, u) in cp.iter() {
                for (bw, v) in bp.iter() {
                    out.add_term((cw.clone(), kt.clone(), bw.clone()), &s * u * v);
                }
            }
        }
        Ok(out)
    }

    pub fn multiply(&self, u: &UElement, v: &UElement) -> Result<UElement, DoubleBosError> {
        let mut out = UElement::zero();
        for (x, a) in u.iter() {
            for (y, b) in v.iter() {
                out.add_scaled(&self.mul_keys(x, y)?, &(a * b));
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, u: &UElement, v: &UElement) -> Result<UElement, DoubleBosError> {
        Ok(self.multiply(u, v)?.sub(&self.multiply(v, u)?))
    }

    /// Normal form of an arbitrary product of elements.
    pub fn product(&self, factors: &[UElement]) -> Result<UElement, DoubleBosError> {
        let mut acc = self.one();
        for f in factors {
            acc = self.multiply(&acc, f)?;
        }
        Ok(acc)
    }

    /// `Δ(cKb) = Σ c₁K̃⁻¹_{|c₂|}K b₁ ⊗ c₂ K K̃_{|b₁|} b₂`.
    pub fn coproduct(&self, u: &UElement) -> Result<UTensor, DoubleBosError> {
        let mut out = UTensor::zero();
        for ((c, k, b), a) in u.iter() {
            self.check_degree(c.len() + b.len())?;
            let dc = self.c.braided_coproduct(c, Flavor::Standard);
            let db = self.b.braided_coproduct(b, Flavor::Standard);
            for ((c1, c2), x) in dc.iter() {
                let left_k = self.tmul(&self.torus.k_tilde(&self.deg(c2)).inv(), k);
                for ((b1, b2), y) in db.iter() {
                    let right_k = self.tmul(k, &self.torus.k_tilde(&self.deg(b1)));
                    out.add_term(vec![(c1.clone(), left_k.clone(), b1.clone()), (c2.clone(), right_k, b2.clone())], a * x * y);
                }
            }
        }
        Ok(out)
    }

    pub fn counit(&self, u: &UElement) -> Scalar {
        let mut s = Scalar::zero();
        for ((c, _, b), a) in u.iter() {
            if c.is_empty() && b.is_empty() {
                s += a;
            }
        }
        s
    }

    fn antipode_b(&self, b: &Word) -> Result<Arc<UElement>, DoubleBosError> {
        get_or(&self.sb_cache, b, || {
            if b.is_empty() {
                return Ok(self.one());
            }
            let kb_inv = self.k(&self.torus.k_tilde(&self.deg(b)).inv());
            let mut out = UElement::zero();
            for ((b1, b2), x) in self.b.braided_coproduct(b, Flavor::Standard).iter() {
                if b2.is_empty() {
                    continue;
                }
                let s1 = self.antipode_b(b1)?;
                let mid: UElement = Lin::basis((Word::empty(), self.tnorm(self.torus.k_tilde(&self.deg(b1))), b2.clone()));
                let t = self.product(&[(*s1).clone(), mid, kb_inv.clone()])?;
                out.add_scaled(&t, &-x);
            }
            Ok(out)
        })
    }

    fn antipode_c(&self, c: &Word) -> Result<Arc<UElement>, DoubleBosError> {
        get_or(&self.sc_cache, c, || {
            if c.is_empty() {
                return Ok(self.one());
            }
            let mut sum = UElement::zero();
            for ((c1, c2), x) in self.c.braided_coproduct(c, Flavor::Standard).iter() {
                if c1.is_empty() {
                    continue;
                }
                let first: UElement = Lin::basis((c1.clone(), self.tnorm(self.torus.k_tilde(&self.deg(c2)).inv()), Word::empty()));
                let s2 = self.antipode_c(c2)?;
                let t = self.multiply(&first, &s2)?;
                sum.add_scaled(&t, x);
            }
            let kc = self.k(&self.torus.k_tilde(&self.deg(c)));
            Ok(self.multiply(&kc, &sum)?.neg())
        })
    }

    /// `S(cKb) = S(b) K⁻¹ S(c)`.
    pub fn antipode(&self, u: &UElement) -> Result<UElement, DoubleBosError> {
        let mut out = UElement::zero();
        for ((c, k, b), a) in u.iter() {
            let t = self.product(&[(*self.antipode_b(b)?).clone(), self.k(&k.inv()), (*self.antipode_c(c)?).clone()])?;
            out.add_scaled(&t, a);
        }
        Ok(out)
    }

    pub fn multiply_tensor(&self, x: &UTensor, y: &UTensor) -> Result<UTensor, DoubleBosError> {
        let mut out = UTensor::zero();
        for (xs, a) in x.iter() {
            for (ys, b) in y.iter() {
                let mut acc: UTensor = Lin::term(Vec::new(), a * b);
                for (kx, ky) in xs.iter().zip(ys) {
                    let p = self.mul_keys(kx, ky)?;
                    let mut next = UTensor::zero();
                    for (pre, s) in acc.iter() {
                        for (k, t) in p.iter() {
                            let mut v = pre.clone();
                            v.push(k.clone());
                            next.add_term(v, s * t);
                        }
                    }
                    acc = next;
                }
                out.add_scaled(&acc, &Scalar::one());
            }
        }
        Ok(out)
    }

    /// Apply the coproduct to tensor slot `slot`, producing one more factor.
    pub fn coproduct_at(&self, t: &UTensor, slot: usize) -> Result<UTensor, DoubleBosError> {
        let mut out = UTensor::zero();
        for (ks, a) in t.iter() {
            let d = self.coproduct(&Lin::basis(ks[slot].clone()))?;
            for (pair, b) in d.iter() {
                let mut v = ks[..slot].to_vec();
                v.extend(pair.iter().cloned());
                v.extend(ks[slot + 1..].iter().cloned());
                out.add_term(v, a * b);
            }
        }
        Ok(out)
    }

    fn unit_key(&self) -> UKey {
        (Word::empty(), self.torus.identity(), Word::empty())
    }

    /// Place the factors of a two-fold tensor at `positions` of a `k`-fold one.
    pub fn embed_tensor(&self, t: &UTensor, k: usize, positions: &[usize]) -> UTensor {
        t.map_keys(|ks| {
            let mut v = vec![self.unit_key(); k];
            for (p, key) in positions.iter().zip(ks) {
                v[*p] = key.clone();
            }
            v
        })
    }

    pub fn flip(&self, t: &UTensor) -> UTensor {
        t.map_keys(|ks| vec![ks[1].clone(), ks[0].clone()])
    }

    pub fn tensor_one(&self, k: usize) -> UTensor {
        Lin::basis(vec![self.unit_key(); k])
    }

    pub fn pure_tensor(&self, parts: &[UElement]) -> UTensor {
        let mut acc: UTensor = Lin::basis(Vec::new());
        for p in parts {
            let mut next = UTensor::zero();
            for (pre, a) in acc.iter() {
                for (k, b) in p.iter() {
                    let mut v = pre.clone();
                    v.push(k.clone());
                    next.add_term(v, a * b);
                }
            }
            acc = next;
        }
        acc
    }

    /// `c K_μ b` with `|c| + |b| ≤ max` and `K_μ = 1`, plus the torus generators.
    pub fn basis_elements(&self, max: usize) -> Vec<UKey> {
        let cs = self.c.basis_upto(max);
        let bs = self.b.basis_upto(max);
        let mut out = Vec::new();
        for c in &cs {
            for b in &bs {
                if c.len() + b.len() <= max {
                    out.push((c.clone(), self.torus.identity(), b.clone()));
                }
            }
        }
        for (_, g) in self.generators() {
            let k = g.keys().next().expect("generator is a monomial").clone();
            if UAlgebra::key_degree(&k) == 0 {
                out.push(k);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    // ---- rendering ----

    pub fn render_torus(&self, t: &TorusElement) -> String {
        let mut parts = Vec::new();
        let multi = t.twice.len() > 1;
        for (j, &tw) in t.twice.iter().enumerate() {
            if tw == 0 {
                continue;
            }
            let base = if multi { format!("K_{}", j + 1) } else { "K".to_string() };
            let exp = if tw % 2 == 0 { (tw / 2).to_string() } else { format!("{tw}/2") };
            parts.push(if exp == "1" { base } else { format!("{base}^{{{exp}}}") });
        }
        match t.dilaton {
            0 => {}
            1 => parts.push("c".into()),
            d => parts.push(format!("c^{{{d}}}")),
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("")
        }
    }

    pub fn render_key(&self, k: &UKey) -> String {
        let n = self.n();
        let fsym = |i: usize| if n == 1 { "f".to_string() } else { format!("f_{}", i + 1) };
        let esym = |i: usize| if n == 1 { "e".to_string() } else { format!("e^{}", i + 1) };
        let mut parts = Vec::new();
        if !k.0.is_empty() {
            parts.push(render_word(&k.0, &fsym));
        }
        let t = self.render_torus(&k.1);
        if t != "1" {
            parts.push(t);
        }
        if !k.2.is_empty() {
            parts.push(render_word(&k.2, &esym));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    pub fn render(&self, u: &UElement) -> String {
        render_lin(u, |k| self.render_key(k))
    }

    pub fn render_tensor(&self, t: &UTensor) -> String {
        render_lin(t, |ks| {
            let parts: Vec<String> = ks.iter().map(|k| self.render_key(k)).collect();
            if parts.len() == 1 {
                parts[0].clone()
            } else {
                format!("({})", parts.join(" ⊗ "))
            }
        })
    }

    /// Defining relations and generator coproducts, with the Serre relations
    /// read off the pairing radical.
    pub fn presentation(&self) -> Result<Report, DoubleBosError> {
        let mut rep = Report::new();
        let n = self.n();
        let gens = self.generators();
        let name = |u: &UElement| self.render(u);
        for i in 0..n {
            for j in 0..n {
                let ei = self.e(i);
                let fj = self.f(j);
                rep.relation(format!("[{}, {}]", name(&ei), name(&fj)), self.render(&self.commutator(&ei, &fj)?));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ei = self.e(i);
                let kj = self.k_gen(j, false);
                rep.relation(format!("{} {}", name(&ei), name(&kj)), self.render(&self.multiply(&ei, &kj)?));
                let fi = self.f(i);
                rep.relation(format!("{} {}", name(&kj), name(&fi)), self.render(&self.multiply(&kj, &fi)?));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let m = 1 - self.torus.datum.a(i, j);
                let mut d = vec![0; n];
                d[i] = m;
                d[j] = 1;
                let deg = Degree(d);
                let esym = |k: usize| if n == 1 { "e".to_string() } else { format!("e^{}", k + 1) };
                let fsym = |k: usize| if n == 1 { "f".to_string() } else { format!("f_{}", k + 1) };
                for r in self.b.radical_basis(&deg) {
                    rep.relation(render_lin(&r, |w| render_word(w, &esym)), "0");
                }
                for r in self.c.radical_basis(&deg) {
                    rep.relation(render_lin(&r, |w| render_word(w, &fsym)), "0");
                }
            }
        }
        for (g, u) in &gens {
            rep.relation(format!("Δ({g})"), self.render_tensor(&self.coproduct(u)?));
        }
        for (g, u) in &gens {
            rep.relation(format!("S({g})"), self.render(&self.antipode(u)?));
        }
        Ok(rep)
    }

    // ---- verification ----

    /// Exhaustive Hopf-axiom checks over basis elements of total degree ≤ `max_degree`.
    pub fn verify_bialgebra(&self, max_degree: usize) -> Report {
        let mut rep = Report::new();
        let els = self.basis_elements(max_degree);
        let d = |k: &UKey| UAlgebra::key_degree(k);
        let el = |k: &UKey| -> UElement { Lin::basis(k.clone()) };
        let show = |k: &UKey| self.render_key(k);

        let mut triples = Vec::new();
        for a in &els {
            for b in &els {
                if d(a) + d(b) > max_degree {
                    continue;
                }
                for c in &els {
                    if d(a) + d(b) + d(c) <= max_degree {
                        triples.push((a, b, c));
                    }
                }
            }
        }
        let witness = triples
            .par_iter()
            .map(|(a, b, c)| {
                let res = (|| -> Result<bool, DoubleBosError> {
                    let l = self.multiply(&self.multiply(&el(a), &el(b))?, &el(c))?;
                    let r = self.multiply(&el(a), &self.multiply(&el(b), &el(c))?)?;
                    Ok(l == r)
                })();
                match res {
                    Ok(true) => None,
                    Ok(false) => Some(format!("({})({})({})", show(a), show(b), show(c))),
                    Err(e) => Some(format!("({})({})({}): {e}", show(a), show(b), show(c))),
                }
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .next();
        rep.check(format!("associativity ({} triples)", triples.len()), witness);

        let mut pairs = Vec::new();
        for a in &els {
            for b in &els {
                if d(a) + d(b) <= max_degree {
                    pairs.push((a, b));
                }
            }
        }
        let witness = pairs
            .par_iter()
            .map(|(a, b)| {
                let res = (|| -> Result<bool, DoubleBosError> {
                    let l = self.coproduct(&self.multiply(&el(a), &el(b))?)?;
                    let r = self.multiply_tensor(&self.coproduct(&el(a))?, &self.coproduct(&el(b))?)?;
                    Ok(l == r)
                })();
                match res {
                    Ok(true) => None,
                    Ok(false) => Some(format!("Δ(({})({})) ≠ Δ({})Δ({})", show(a), show(b), show(a), show(b))),
                    Err(e) => Some(format!("({})({}): {e}", show(a), show(b))),
                }
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .next();
        rep.check(format!("multiplicativity ({} pairs)", pairs.len()), witness);

        let singles: Vec<(Option<String>, Option<String>, Option<String>)> = els
            .par_iter()
            .map(|a| {
                let u = el(a);
                let fail = |e: DoubleBosError| Some(format!("{}: {e}", show(a)));
                let coassoc = (|| -> Result<bool, DoubleBosError> {
                    let du = self.coproduct(&u)?;
                    Ok(self.coproduct_at(&du, 0)? == self.coproduct_at(&du, 1)?)
                })();
                let coassoc = match coassoc {
                    Ok(true) => None,
                    Ok(false) => Some(show(a)),
                    Err(e) => fail(e),
                };
                let du = match self.coproduct(&u) {
                    Ok(x) => x,
                    Err(e) => return (coassoc, fail(e.clone()), fail(e)),
                };
                let mut l = UElement::zero();
                let mut r = UElement::zero();
                for (ks, c) in du.iter() {
                    l.add_term(ks[1].clone(), c * self.counit(&el(&ks[0])));
                    r.add_term(ks[0].clone(), c * self.counit(&el(&ks[1])));
                }
                let counit = if l == u && r == u { None } else { Some(show(a)) };
                let anti = (|| -> Result<bool, DoubleBosError> {
                    let eps = self.one().scale(&self.counit(&u));
                    let mut l = UElement::zero();
                    let mut r = UElement::zero();
                    for (ks, c) in du.iter() {
                        l.add_scaled(&self.multiply(&self.antipode(&el(&ks[0]))?, &el(&ks[1]))?, c);
                        r.add_scaled(&self.multiply(&el(&ks[0]), &self.antipode(&el(&ks[1]))?)?, c);
                    }
                    Ok(l == eps && r == eps)
                })();
                let anti = match anti {
                    Ok(true) => None,
                    Ok(false) => Some(show(a)),
                    Err(e) => fail(e),
                };
                (coassoc, counit, anti)
            })
            .collect();
        rep.check(format!("coassociativity ({} elements)", els.len()), singles.iter().find_map(|s| s.0.clone()));
        rep.check("counit", singles.iter().find_map(|s| s.1.clone()));
        rep.check("antipode", singles.iter().find_map(|s| s.2.clone()));

        let unit_ok = els.iter().all(|a| self.multiply(&self.one(), &el(a)).ok() == Some(el(a)) && self.multiply(&el(a), &self.one()).ok() == Some(el(a)));
        rep.check("unit", if unit_ok { None } else { Some("unit".into()) });
        rep
    }

    // ---- quasitriangular structure at a root of unity ----

    fn require_root(&self) -> Result<u32, DoubleBosError> {
        match self.root_of_unity {
            Some(r) if self.n() == 1 && self.torus.dilaton.is_none() => Ok(r),
            _ => Err(DoubleBosError::NotRootOfUnity),
        }
    }

    /// `R_H = r⁻¹ Σ q^{∓2mn} K^m ⊗ K^n` (lower sign for the inverse).
    pub fn r_h(&self, inverse: bool) -> Result<UTensor, DoubleBosError> {
        let r = self.require_root()? as i64;
        let mode = self.mode();
        let rinv = mode.int(r).inv()?;
        let sign = if inverse { 2 } else { -2 };
        let k = self.torus.k(0);
        let mut kp = vec![self.torus.identity()];
        for m in 1..r {
            kp.push(self.tmul(&kp[(m - 1) as usize], &k));
        }
        let mut out = UTensor::zero();
        for m in 0..r {
            for n in 0..r {
                let key = vec![(Word::empty(), kp[m as usize].clone(), Word::empty()), (Word::empty(), kp[n as usize].clone(), Word::empty())];
                out.add_term(key, &rinv * mode.q_pow(sign * ((m * n) % r)));
            }
        }
        Ok(out)
    }

    /// `exp̄_B = Σ f^a ⊗ S̲e_a` (or `exp_B = Σ f^a ⊗ e_a`) as an element of U ⊗ U.
    pub fn exp_element(&self, variant: ExpVariant) -> Result<UTensor, DoubleBosError> {
        let r = self.require_root()?;
        let t = braided_exp(&self.b, &self.c, r as usize - 1, variant, &self.kappa)?;
        let id = self.torus.identity();
        Ok(match variant {
            ExpVariant::BarExp => t.map_keys(|(f, e)| vec![(f.clone(), id.clone(), Word::empty()), (Word::empty(), id.clone(), e.clone())]),
            ExpVariant::Exp => t.map_keys(|(e, f)| vec![(f.clone(), id.clone(), Word::empty()), (Word::empty(), id.clone(), e.clone())]),
        })
    }

    pub fn quasitriangular_element(&self) -> Result<UTensor, DoubleBosError> {
        self.quasitriangular_element_with(RhChoice::Standard)
    }

    /// `R_U = exp̄_B · R_H`, with `R_H` optionally replaced by `1 ⊗ 1` for fault injection.
    pub fn quasitriangular_element_with(&self, choice: RhChoice) -> Result<UTensor, DoubleBosError> {
        let rh = match choice {
            RhChoice::Standard => self.r_h(false)?,
            RhChoice::Identity => self.tensor_one(2),
        };
        self.multiply_tensor(&self.exp_element(ExpVariant::BarExp)?, &rh)
    }

    /// The candidate inverse `R_H⁻¹ · exp_B`.
    pub fn quasitriangular_inverse(&self) -> Result<UTensor, DoubleBosError> {
        self.multiply_tensor(&self.r_h(true)?, &self.exp_element(ExpVariant::Exp)?)
    }

    pub fn verify_quasitriangular(&self, r: &UTensor) -> Report {
        let mut rep = Report::new();
        let err = |e: DoubleBosError| Some(e.to_string());
        let left = (|| -> Result<bool, DoubleBosError> {
            let l = self.coproduct_at(r, 0)?;
            let rr = self.multiply_tensor(&self.embed_tensor(r, 3, &[0, 2]), &self.embed_tensor(r, 3, &[1, 2]))?;
            Ok(l == rr)
        })();
        rep.check("(Δ⊗id)R = R13 R23", match left {
            Ok(true) => None,
            Ok(false) => Some("R".into()),
            Err(e) => err(e),
        });
        let right = (|| -> Result<bool, DoubleBosError> {
            let l = self.coproduct_at(r, 1)?;
            let rr = self.multiply_tensor(&self.embed_tensor(r, 3, &[0, 2]), &self.embed_tensor(r, 3, &[0, 1]))?;
            Ok(l == rr)
        })();
        rep.check("(id⊗Δ)R = R13 R12", match right {
            Ok(true) => None,
            Ok(false) => Some("R".into()),
            Err(e) => err(e),
        });
        let mut bad = Vec::new();
        for (name, h) in [("e", self.e(0)), ("f", self.f(0)), ("K", self.k_gen(0, false))] {
            let ok = (|| -> Result<bool, DoubleBosError> {
                let dh = self.coproduct(&h)?;
                Ok(self.multiply_tensor(&self.flip(&dh), r)? == self.multiply_tensor(r, &dh)?)
            })();
            match ok {
                Ok(true) => {}
                Ok(false) => bad.push(name.to_string()),
                Err(e) => bad.push(format!("{name}: {e}")),
            }
        }
        let witness = if bad.is_empty() { None } else { Some(bad.join(", ")) };
        rep.check("τ∘Δ(h) R = R Δ(h)", witness);
        let inv = (|| -> Result<bool, DoubleBosError> {
            let ri = self.quasitriangular_inverse()?;
            let one = self.tensor_one(2);
            Ok(self.multiply_tensor(r, &ri)? == one && self.multiply_tensor(&ri, r)? == one)
        })();
        rep.check("R invertible with inverse R_H⁻¹ exp_B", match inv {
            Ok(true) => None,
            Ok(false) => Some("R R⁻¹ ≠ 1⊗1".into()),
            Err(e) => err(e),
        });
        rep
    }

    // ---- fundamental representation ----

    fn act_torus(&self, v: &NCPoly, t: &TorusElement) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in v.iter() {
            out.add_term(w.clone(), c * self.torus.pairing(t, &self.deg(w)));
        }
        out
    }

    /// `v⊲e^i = κ_i (v x^i − x^i (v⊲K̃_i))`.
    fn act_e(&self, i: usize, v: &NCPoly) -> NCPoly {
        let x = NCPoly::gen(i);
        let vk = self.act_torus(v, &self.k_tilde_gen(i));
        self.b.mul(v, &x).sub(&self.b.mul(&x, &vk)).scale(&self.kappa[i])
    }

    /// `v⊲f_i = −∂_i v` with the opposite-braiding derivative.
    fn act_f(&self, i: usize, v: &NCPoly) -> NCPoly {
        self.b.braided_diff(i, v, Flavor::Opposite).neg()
    }

    /// Right action `v⊲u` of U on B.
    pub fn fundamental_rep(&self, v: &NCPoly, u: &UElement) -> NCPoly {
        let v = self.b.normal_form(v);
        let mut out = NCPoly::zero();
        for ((c, k, b), a) in u.iter() {
            let mut x = v.clone();
            for i in c.letters() {
                x = self.act_f(i, &x);
            }
            x = self.act_torus(&x, k);
            for i in b.letters() {
                x = self.act_e(i, &x);
            }
            out.add_scaled(&x, a);
        }
        out
    }

    /// Right-module law on generator pairs, and the rank-one operator identities
    /// `K∘E∘K⁻¹ = q_i^2 E`, `K∘F∘K⁻¹ = q_i^{-2} F` (composition of endomorphisms)
    /// and `v⊲[e,f] = v⊲(K̃−K̃⁻¹)/(q_i−q_i⁻¹)`, on B-monomials of degree ≤ `max_degree`.
    pub fn verify_fundamental(&self, max_degree: usize) -> Result<Report, DoubleBosError> {
        let mut rep = Report::new();
        let vs: Vec<NCPoly> = self.b.basis_upto(max_degree).into_iter().map(NCPoly::word).collect();
        let gens = self.generators();
        let mut witness = None;
        'outer: for (gn, g) in &gens {
            for (hn, h) in &gens {
                let gh = self.multiply(g, h)?;
                for v in &vs {
                    if self.fundamental_rep(v, &gh) != self.fundamental_rep(&self.fundamental_rep(v, g), h) {
                        witness = Some(format!("v={} u={gn} u'={hn}", self.b_render(v)));
                        break 'outer;
                    }
                }
            }
        }
        rep.check("(v⊲u)⊲u' = v⊲(uu')", witness);
        for i in 0..self.n() {
            let qi2 = self.torus.pairing(&self.torus.k(i), &self.deg(&Word::letter(i)));
            let k = self.k_gen(i, false);
            let kinv = self.k_gen(i, true);
            let (e, f) = (self.e(i), self.f(i));
            let conj = |x: &UElement, v: &NCPoly| self.fundamental_rep(&self.fundamental_rep(&self.fundamental_rep(v, &kinv), x), &k);
            let mut we = None;
            let mut wf = None;
            let mut wc = None;
            let kt = self.k_tilde_gen(i);
            let cas = self.k(&kt).sub(&self.k(&kt.inv())).scale(&self.kappa[i]);
            for v in &vs {
                if we.is_none() && conj(&e, v) != self.fundamental_rep(v, &e).scale(&qi2) {
                    we = Some(self.b_render(v));
                }
                if wf.is_none() && conj(&f, v) != self.fundamental_rep(v, &f).scale(&qi2.inv()?) {
                    wf = Some(self.b_render(v));
                }
                let lhs = self.fundamental_rep(&self.fundamental_rep(v, &e), &f).sub(&self.fundamental_rep(&self.fundamental_rep(v, &f), &e));
                if wc.is_none() && lhs != self.fundamental_rep(v, &cas) {
                    wc = Some(self.b_render(v));
                }
            }
            let sfx = if self.n() == 1 { String::new() } else { format!(" (i={})", i + 1) };
            rep.check(format!("K e K^-1 = q^2 e{sfx}"), we);
            rep.check(format!("K f K^-1 = q^-2 f{sfx}"), wf);
            rep.check(format!("[e,f] = (K-K^-1)/(q-q^-1){sfx}"), wc);
        }
        Ok(rep)
    }

    /// `(vw)⊲u = Σ (v⊲u₁)(w⊲u₂)` for generators u and monomial pairs of total degree ≤ `max_total`.
    pub fn verify_module_algebra(&self, max_total: usize) -> Result<Report, DoubleBosError> {
        let mut rep = Report::new();
        let ws = self.b.basis_upto(max_total);
        let mut pairs = Vec::new();
        for v in &ws {
            for w in &ws {
                if v.len() + w.len() <= max_total {
                    pairs.push((v, w));
                }
            }
        }
        let gens = self.generators();
        let mut coprods = Vec::new();
        for (n, g) in &gens {
            coprods.push((n, g, self.coproduct(g)?));
        }
        let witness = pairs
            .par_iter()
            .map(|(v, w)| {
                let (pv, pw) = (NCPoly::word((*v).clone()), NCPoly::word((*w).clone()));
                let vw = self.b.mul(&pv, &pw);
                for (n, g, dg) in &coprods {
                    let lhs = self.fundamental_rep(&vw, g);
                    let mut rhs = NCPoly::zero();
                    for (ks, c) in dg.iter() {
                        let a = self.fundamental_rep(&pv, &Lin::basis(ks[0].clone()));
                        let b = self.fundamental_rep(&pw, &Lin::basis(ks[1].clone()));
                        rhs.add_scaled(&self.b.mul(&a, &b), c);
                    }
                    if lhs != rhs {
                        return Some(format!("v={} w={} u={n}", self.b_render(&pv), self.b_render(&pw)));
                    }
                }
                None
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .next();
        rep.check(format!("module algebra ({} pairs)", pairs.len()), witness);
        Ok(rep)
    }

    pub fn b_render(&self, v: &NCPoly) -> String {
        let n = self.n();
        render_lin(v, |w| render_word(w, &|i| if n == 1 { "x".into() } else { format!("x^{}", i + 1) }))
    }
}
