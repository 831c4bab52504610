//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use doublebos_core::braidedgroup::{braided_exp, exp_coproduct_sides, BraidedGroup, ExpVariant, Quotient};
use doublebos_core::cartan::CartanDatum;
use doublebos_core::doublebos::{build_root_of_unity, build_simply_connected, BuildOptions, UAlgebra};
use doublebos_core::freealg::{Degree, NCPoly, Word};
use doublebos_core::pbw::check_example56;
use doublebos_core::report::Report;
use doublebos_core::rmatrix::{check_qybe, permutation, RMatrix};
use doublebos_core::{Matrix, Mode, Scalar};

type Outcome = Result<(), String>;
type Criterion = fn() -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passed(rep: &Report, what: &str) -> Outcome {
    ensure(rep.passed(), || {
        let f: Vec<String> = rep.failures().iter().map(|c| format!("{} [{}]", c.name, c.witness.as_deref().unwrap_or(""))).collect();
        format!("{what}: {}", f.join("; "))
    })
}

fn a(d: CartanDatum) -> UAlgebra {
    build_simply_connected(&d, &BuildOptions::default()).expect("build")
}

fn criterion1() -> Outcome {
    let a1 = CartanDatum::a1().to_rmatrix(Mode::Generic).unwrap();
    let a2 = CartanDatum::a2().to_rmatrix(Mode::Generic).unwrap();
    let sl2 = RMatrix::sl2();
    for (name, r) in [("A1", &a1), ("A2", &a2), ("sl2", &sl2)] {
        ensure(check_qybe(r), || format!("{name} fails QYBE"))?;
    }
    for (name, r) in [("A2", &a2), ("sl2", &sl2)] {
        let mut m = r.matrix().clone();
        let k = r.n() * r.n();
        m[(1, 1)] = &m[(1, 1)] + Scalar::int(1);
        m[(k - 2, 1)] = &m[(k - 2, 1)] + Scalar::q();
        let bad = RMatrix::new(r.n(), m).map_err(|e| e.to_string())?;
        ensure(!check_qybe(&bad), || format!("perturbed {name} passes QYBE"))?;
        let mut m = r.matrix().clone();
        m[(1, 2)] = &m[(1, 2)] + Scalar::one();
        let bad = RMatrix::new(r.n(), m).map_err(|e| e.to_string())?;
        ensure(!check_qybe(&bad), || format!("single-entry perturbation of {name} passes QYBE"))?;
    }
    Ok(())
}

/// `I^{⊗a} ⊗ x ⊗ I^{⊗b}`.
fn embed(x: &Matrix, n: usize, a: usize, b: usize) -> Matrix {
    let mut out = Matrix::identity(1);
    for _ in 0..a {
        out = out.kron(&Matrix::identity(n));
    }
    out = out.kron(x);
    for _ in 0..b {
        out = out.kron(&Matrix::identity(n));
    }
    out
}

/// `[m;R] = id + (PR)_12 + (PR)_23(PR)_12 + …` on V^{⊗m}.
fn braided_integer(pr: &Matrix, n: usize, m: usize) -> Matrix {
    let dim = n.pow(m as u32);
    let mut acc = Matrix::identity(dim);
    let mut cur = Matrix::identity(dim);
    for p in 0..m.saturating_sub(1) {
        cur = embed(pr, n, p, m - p - 2).mul(&cur);
        acc = acc.add(&cur);
    }
    acc
}

/// `[m;R]! = [m;R]_{1…m} [m-1;R]_{2…m} ⋯ [2;R]_{m-1 m}`.
fn braided_factorial(r: &RMatrix, m: usize) -> Matrix {
    let n = r.n();
    let pr = permutation(n).mul(r.matrix());
    let mut acc = Matrix::identity(n.pow(m as u32));
    for k in (2..=m).rev() {
        acc = acc.mul(&embed(&braided_integer(&pr, n, k), n, m - k, 0));
    }
    acc
}

/// Radical of the B side in one degree: x with `Σ_I x_I [m;R]!^I_J = 0`.
fn oracle_radical(r: &RMatrix, deg: &[i64]) -> Vec<NCPoly> {
    let n = r.n();
    let m: i64 = deg.iter().sum();
    let fact = braided_factorial(r, m as usize);
    let words = Word::all_of_degree(&Degree(deg.to_vec()));
    let idx = |w: &Word| w.letters().fold(0usize, |a, l| a * n + l);
    let mut block = Matrix::zeros(words.len(), words.len());
    for (i, wi) in words.iter().enumerate() {
        for (j, wj) in words.iter().enumerate() {
            block[(j, i)] = fact[(idx(wi), idx(wj))].clone();
        }
    }
    block
        .kernel()
        .into_iter()
        .map(|v| {
            let mut p = NCPoly::zero();
            for (w, c) in words.iter().zip(v) {
                p.add_term(w.clone(), c);
            }
            p
        })
        .collect()
}

fn normalized(p: &NCPoly, w: &Word) -> NCPoly {
    p.scale(&p.coeff(w).inv().expect("pivot present"))
}

fn criterion2() -> Outcome {
    let r = CartanDatum::a2().to_rmatrix(Mode::Generic).unwrap();
    let b = BraidedGroup::vector(r.clone(), Quotient::Radical).map_err(|e| e.to_string())?;
    for d in [[1, 0], [0, 1], [1, 1], [2, 0]] {
        let rad = b.radical_basis(&Degree(d.to_vec()));
        ensure(rad.is_empty(), || format!("radical nonempty at {d:?}"))?;
        ensure(oracle_radical(&r, &d).is_empty(), || format!("oracle radical nonempty at {d:?}"))?;
    }
    let qq = -(Scalar::q() + Scalar::q_pow(-1));
    for (d, x, y) in [([2, 1], 0usize, 1usize), ([1, 2], 1, 0)] {
        let rad = b.radical_basis(&Degree(d.to_vec()));
        let orc = oracle_radical(&r, &d);
        ensure(rad.len() == 1 && orc.len() == 1, || format!("radical at {d:?} has dimension {} (oracle {})", rad.len(), orc.len()))?;
        let (xxy, xyx, yxx) = (Word::from_letters(&[x, x, y]), Word::from_letters(&[x, y, x]), Word::from_letters(&[y, x, x]));
        let serre: NCPoly = [(xxy.clone(), Scalar::one()), (xyx, qq.clone()), (yxx, Scalar::one())].into_iter().collect();
        ensure(normalized(&rad[0], &xxy) == serre, || format!("radical at {d:?} is not q-Serre"))?;
        ensure(normalized(&orc[0], &xxy) == serre, || format!("oracle radical at {d:?} is not q-Serre"))?;
    }
    Ok(())
}

fn criterion3() -> Outcome {
    let u = a(CartanDatum::a1());
    let (e, f, k, ki) = (u.e(0), u.f(0), u.k_gen(0, false), u.k_gen(0, true));
    let kappa = (Scalar::q() - Scalar::q_pow(-1)).inv().unwrap();
    let err = |e: doublebos_core::doublebos::DoubleBosError| e.to_string();
    ensure(u.commutator(&e, &f).map_err(err)? == k.sub(&ki).scale(&kappa), || "[e,f]".into())?;
    ensure(u.multiply(&e, &k).map_err(err)? == u.multiply(&k, &e).map_err(err)?.scale(&Scalar::q_pow(2)), || "e K = q^2 K e".into())?;
    let de = u.coproduct(&e).map_err(err)?;
    ensure(de == u.pure_tensor(&[e.clone(), k.clone()]).add(&u.pure_tensor(&[u.one(), e.clone()])), || "Δe".into())?;
    let df = u.coproduct(&f).map_err(err)?;
    ensure(df == u.pure_tensor(&[f.clone(), u.one()]).add(&u.pure_tensor(&[ki.clone(), f.clone()])), || "Δf".into())?;
    ensure(u.render_tensor(&de) == "(e ⊗ K) + (1 ⊗ e)", || u.render_tensor(&de))?;
    ensure(u.render_tensor(&df) == "(f ⊗ 1) + (K^{-1} ⊗ f)", || u.render_tensor(&df))?;
    Ok(())
}

fn criterion4() -> Outcome {
    passed(&a(CartanDatum::a1()).verify_bialgebra(3), "A1")?;
    passed(&a(CartanDatum::a2()).verify_bialgebra(3), "A2")
}

fn criterion5() -> Outcome {
    for r in [3, 5] {
        let u = build_root_of_unity(r).map_err(|e| e.to_string())?;
        let rr = u.quasitriangular_element().map_err(|e| e.to_string())?;
        let rep = u.verify_quasitriangular(&rr);
        ensure(rep.checks.len() == 4, || format!("r={r}: expected 4 checks"))?;
        passed(&rep, &format!("r={r}"))?;
    }
    Ok(())
}

fn criterion6() -> Outcome {
    let u = a(CartanDatum::a1());
    passed(&u.verify_fundamental(12).map_err(|e| e.to_string())?, "operators")?;
    passed(&u.verify_module_algebra(8).map_err(|e| e.to_string())?, "module algebra")
}

fn criterion7() -> Outcome {
    let rep = check_example56().map_err(|e| e.to_string())?;
    passed(&rep, "example")?;
    let count = |p: &str| rep.checks.iter().filter(|c| c.name.starts_with(p)).count();
    ensure(count("relation ") == 12 && count("coproduct ") == 4, || "expected 12 relations and 4 coproducts".into())?;
    ensure(rep.checks.iter().any(|c| c.name.starts_with("A₂ identification")), || "identification missing".into())
}

/// `[m;t]! = Π_{k≤m} (1 + t + … + t^{k-1})`.
fn q_fact(m: usize, t: &Scalar) -> Scalar {
    let mut acc = Scalar::one();
    for k in 1..=m {
        let mut s = Scalar::zero();
        let mut p = Scalar::one();
        for _ in 0..k {
            s += p.clone();
            p = &p * t;
        }
        acc = &acc * &s;
    }
    acc
}

fn criterion8() -> Outcome {
    for d in [CartanDatum::a1(), CartanDatum::a2()] {
        let r = d.to_rmatrix(Mode::Generic).unwrap();
        let b = BraidedGroup::vector(r.clone(), Quotient::Radical).map_err(|e| e.to_string())?;
        let dd = BraidedGroup::covector(r, Quotient::Radical).map_err(|e| e.to_string())?;
        let kappa = vec![Scalar::one(); d.n()];
        let [l, s, _] = exp_coproduct_sides(&b, &dd, 4, &kappa).map_err(|e| e.to_string())?;
        ensure(l == s, || format!("coproduct law fails for n={}", d.n()))?;
    }
    let r = CartanDatum::a1().to_rmatrix(Mode::Generic).unwrap();
    let b = BraidedGroup::vector(r.clone(), Quotient::Radical).map_err(|e| e.to_string())?;
    let dd = BraidedGroup::covector(r, Quotient::Radical).map_err(|e| e.to_string())?;
    let qq = Scalar::q() - Scalar::q_pow(-1);
    let bar = braided_exp(&b, &dd, 4, ExpVariant::BarExp, &[qq.inv().unwrap()]).map_err(|e| e.to_string())?;
    ensure(bar.len() == 5, || format!("exp̄ has {} terms", bar.len()))?;
    for m in 0..=4usize {
        let x = Word::from_letters(&vec![0; m]);
        let want = &(-qq.clone()).pow(m as i64) * &q_fact(m, &Scalar::q_pow(-2)).inv().unwrap();
        ensure(bar.coeff(&(x.clone(), x)) == want, || format!("exp̄ coefficient m={m}"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("QYBE for A1, A2, sl2; perturbations fail", criterion1),
        ("A2 radical is q-Serre (Kronecker oracle agrees)", criterion2),
        ("U_q(sl2) relations and coproducts from build(A1)", criterion3),
        ("bialgebra and antipode axioms for A1, A2 through degree 3", criterion4),
        ("quasitriangularity at r = 3, 5", criterion5),
        ("fundamental representation (degree 12, module law 8)", criterion6),
        ("U_q(sl3) from U_q(sl2)", criterion7),
        ("braided exponential through degree 4", criterion8),
    ];
    let mut ok = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(()) => println!("criterion {}: PASS  {name} ({secs:.1}s)", i + 1),
            Err(e) => {
                ok = false;
                println!("criterion {}: FAIL  {name} ({secs:.1}s): {e}", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
