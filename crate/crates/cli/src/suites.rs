//! The `verify` batteries. Items run in parallel and are reported sorted by key.

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use surfarith_core::cocycle::*;
use surfarith_core::forms::diag::Involution;
use surfarith_core::forms::hermitian::{hermitian_equiv, HermSetting, HermitianForm};
use surfarith_core::forms::*;
use surfarith_core::g2::*;
use surfarith_core::numfield::{prime_split, BaseField, ExtField};
use surfarith_core::qalg::{local_symbols, Place, QuatAlgebra};
use surfarith_core::symrep::{j_form, phi_eval, tau, trace_poly};
use surfarith_core::{FMatrix, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Symrep,
    Cocycle,
    Forms,
    G2,
    SpIdentities,
    SlIdentities,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Symrep => "symrep",
            Suite::Cocycle => "cocycle",
            Suite::Forms => "forms",
            Suite::G2 => "g2",
            Suite::SpIdentities => "sp-identities",
            Suite::SlIdentities => "sl-identities",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub key: String,
    pub pass: bool,
    pub inputs: Value,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

type Check = Box<dyn Fn() -> Result<Item> + Send + Sync>;

fn item(key: impl Into<String>, inputs: Value, f: impl Fn() -> Result<bool> + Send + Sync + 'static) -> Check {
    item_with(key, inputs, move || Ok((f()?, Value::Null)))
}

/// Unsupported cases abort the run; any other error fails the item.
fn item_with(key: impl Into<String>, inputs: Value, f: impl Fn() -> Result<(bool, Value)> + Send + Sync + 'static) -> Check {
    let key = key.into();
    Box::new(move || {
        let (pass, detail) = match f() {
            Ok(r) => r,
            Err(e) if e.is_unsupported() => return Err(e),
            Err(e) => (false, json!({ "error": e.to_string() })),
        };
        Ok(Item { key: key.clone(), pass, inputs: inputs.clone(), detail })
    })
}

pub fn run(suite: Suite, seed: u64) -> Result<Vec<Item>> {
    let checks = match suite {
        Suite::Symrep => symrep(seed),
        Suite::Cocycle => cocycle(seed),
        Suite::Forms => forms(seed),
        Suite::G2 => g2(seed),
        Suite::SpIdentities => sp_identities(),
        Suite::SlIdentities => sl_identities(),
    };
    let mut items = checks.par_iter().map(|c| c()).collect::<Result<Vec<_>>>()?;
    items.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(items)
}

const TRIPLES: [(i64, i64, i64); 3] = [(2, 3, 5), (5, 2, 3), (2, 2, 3)];

fn random_sl2(e: &ExtField, rng: &mut ChaCha8Rng) -> FMatrix {
    let b = e.base();
    let mut el = |nonzero: bool| loop {
        let c: Vec<_> = (0..e.degree()).map(|_| b.int(rng.gen_range(-3..=3))).collect();
        let x = e.from_coeffs(c).expect("coefficient count matches degree");
        if !nonzero || !x.is_zero() {
            return x;
        }
    };
    let (a, bb, c) = (el(true), el(false), el(false));
    let d = &(&e.one() + &(&bb * &c)) * &a.inv().expect("nonzero");
    FMatrix::from_rows(vec![vec![a, bb], vec![c, d]])
}

fn symrep(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 2..=9usize {
        out.push(item(format!("invariance/n={n}"), json!({ "n": n, "samples": 10, "field": "Q(√2,√3)" }), move || {
            let f = BaseField::rationals();
            let (e, _) = ExtField::with_roots(f, &[f.int(2), f.int(3)])?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
            let j = j_form(n, &e.one());
            for _ in 0..10 {
                let (a, b) = (random_sl2(&e, &mut rng), random_sl2(&e, &mut rng));
                let (ta, tb) = (tau(n, &a)?, tau(n, &b)?);
                if &(&ta.transpose() * &j) * &ta != j || tau(n, &(&a * &b))? != &ta * &tb {
                    return Ok(false);
                }
                if ta.trace() != phi_eval(n, &a.trace()) || trace_poly(n).eval(&a.trace()) != ta.trace() {
                    return Ok(false);
                }
            }
            Ok(true)
        }));
        out.push(item(format!("parity/n={n}"), json!({ "n": n }), move || {
            let j = j_form(n, &ExtField::rationals().one());
            Ok(if n % 2 == 1 { j.transpose() == j } else { j.transpose() == -&j })
        }));
    }
    for (n, want) in [(3usize, vec![2i64, -1, 2]), (4, vec![6, -2, 2, -6])] {
        out.push(item(format!("entries/J{n}"), json!({ "antidiagonal": want }), move || {
            let e = ExtField::rationals();
            let j = j_form(n, &e.one());
            Ok((0..n).all(|i| (0..n).all(|k| if i + k == n - 1 { *j.get(i, k) == e.int(want[i]) } else { j.get(i, k).is_zero() })))
        }));
    }
    for k in 1..=4usize {
        let want = if k % 2 == 0 { (k + 1, k) } else { (k, k + 1) };
        out.push(item_with(format!("signature/J{}", 2 * k + 1), json!({ "n": 2 * k + 1 }), move || {
            let s = j_signature(2 * k + 1)?;
            Ok(((s.pos, s.neg) == want, json!({ "pos": s.pos, "neg": s.neg })))
        }));
    }
    out
}

fn cocycle(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for (a, b, d) in TRIPLES {
        let inputs = json!({ "a": a, "b": b, "d": d });
        out.push(item(format!("axioms/T/({a},{b})"), inputs.clone(), move || {
            let f = BaseField::rationals();
            t_cocycle(f, &f.int(a), &f.int(b))?.is_cocycle()
        }));
        for n in 2..=7usize {
            out.push(item(format!("axioms/compatible-inner/n={n}/({a},{b})"), inputs.clone(), move || {
                let f = BaseField::rationals();
                compatible_cocycle(f, &f.int(a), &f.int(b), n, Compat::Inner, None)?.is_cocycle()
            }));
            out.push(item(format!("axioms/compatible-outer/n={n}/({a},{b},{d})"), inputs.clone(), move || {
                let f = BaseField::rationals();
                compatible_cocycle(f, &f.int(a), &f.int(b), n, Compat::Outer, Some(&f.int(d)))?.is_cocycle()
            }));
        }
        for n in 2..=4usize {
            out.push(item(format!("axioms/eta/n={n}/({a},{b})"), inputs.clone(), move || {
                let f = BaseField::rationals();
                eta_cocycle(f, &f.int(a), &f.int(b), n)?.is_cocycle()
            }));
            out.push(item(format!("axioms/chi/n={n}/({a},{b})"), inputs.clone(), move || {
                let f = BaseField::rationals();
                chi_lift(f, &f.int(a), &f.int(b), n)?.is_cocycle()
            }));
        }
        for n in [3usize, 5, 7] {
            out.push(item_with(format!("h90/n={n}/({a},{b})"), inputs.clone(), move || {
                let f = BaseField::rationals();
                let z = compatible_cocycle(f, &f.int(a), &f.int(b), n, Compat::Inner, None)?;
                let s = hilbert90_solve(&z, seed)?;
                Ok((z.is_coboundary_of(&s.s)?, json!({ "attempts": s.attempts })))
            }));
        }
        out.push(item(format!("explicit-S/({a},{b})"), inputs.clone(), move || {
            let f = BaseField::rationals();
            let (a, b) = (f.int(a), f.int(b));
            compatible_cocycle(f, &a, &b, 7, Compat::Inner, None)?.is_coboundary_of(&explicit_s7(f, &a, &b)?)
        }));
    }
    out
}

fn forms(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for (a, b) in [(2i64, 3i64), (3, 5)] {
        for n in [5usize, 7, 9, 11] {
            out.push(item_with(format!("hasse-closed-form/n={n}/({a},{b})"), json!({ "n": n, "a": a, "b": b, "primes": "odd p <= 50" }), move || {
                let f = BaseField::rationals();
                let (a, b) = (f.int(a), f.int(b));
                let d = jnab(f, n, &a, &b)?.normalized().matrix().diagonal();
                let mut places = vec![Place::Real(0)];
                for p in (3..=50u64).filter(|&p| (2..p).all(|q| p % q != 0)) {
                    places.push(Place::Finite(prime_split(f, p)?[0]));
                }
                let mut bad = Vec::new();
                for v in &places {
                    if hasse_at(&d, v)? != hasse_closed_form(n, &a, &b, v)? {
                        bad.push(v.to_string());
                    }
                }
                Ok((bad.is_empty(), json!({ "places": places.len(), "mismatches": bad })))
            }));
        }
        for n in [5usize, 7] {
            out.push(item(format!("jnab-transport/n={n}/({a},{b})"), json!({ "n": n, "a": a, "b": b }), move || {
                let f = BaseField::rationals();
                let (a, b) = (f.int(a), f.int(b));
                let z = compatible_cocycle(f, &a, &b, n, Compat::Inner, None)?;
                let s = hilbert90_solve(&z, seed)?.s;
                let jt = transport_form(&s, &j_form(n, &s.one_elem()))?;
                let Some(jt) = jt.to_base() else { return Ok(false) };
                Ok(invariants(&QuadraticForm::new(f, jt)?)?.agrees_with(&invariants(&jnab(f, n, &a, &b)?)?))
            }));
        }
    }
    out.push(item("square-products/n<=101", json!({ "n": "odd 5..=101" }), || Ok((5..=101).step_by(2).all(square_product_check))));
    out.push(item_with("reciprocity/Q", json!({ "pairs": 50, "range": 200 }), move || {
        let f = BaseField::rationals();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut nonzero = || loop {
            let x: i64 = rng.gen_range(-200..=200);
            if x != 0 {
                return x;
            }
        };
        let mut bad = Vec::new();
        for _ in 0..50 {
            let (a, b) = (nonzero(), nonzero());
            let s = local_symbols(f, &f.int(a), &f.int(b))?;
            if s.symbols.iter().map(|(_, e)| *e).product::<i32>() != 1 {
                bad.push((a, b));
            }
        }
        Ok((bad.is_empty(), json!({ "failures": bad })))
    }));
    out
}

fn norm_one_units(alg: &QuatAlgebra, count: usize) -> Vec<surfarith_core::qalg::QuatElem> {
    let r = 6i64;
    let mut out = Vec::new();
    'search: for x0 in -r..=r {
        for x1 in -r..=r {
            for x2 in -r..=r {
                for x3 in -r..=r {
                    let u = alg.from_ints([x0, x1, x2, x3]);
                    if u.is_norm_one() {
                        out.push(u);
                        if out.len() == count {
                            break 'search;
                        }
                    }
                }
            }
        }
    }
    out
}

fn g2(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for (name, m) in [("upper", [[1i64, 1], [0, 1]]), ("lower", [[1, 0], [1, 1]])] {
        out.push(item(format!("principal/{name}"), json!({ "generator": m }), move || {
            let e = ExtField::rationals();
            let t = tau(7, &FMatrix::from_ints(&e, &[&m[0], &m[1]]))?;
            let j = j_form(7, &e.one());
            Ok(preserves_cross(&t, untwisted_cross) && &(&t.transpose() * &j) * &t == j)
        }));
    }
    out.push(item("cross/alternating-bilinear", json!({ "a": 2, "b": 3, "pairs": 100 }), move || {
        let f = BaseField::rationals();
        let (a, b) = (f.int(2), f.int(3));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = || (0..7).map(|_| f.int(rng.gen_range(-9..=9))).collect::<Vec<_>>();
        for _ in 0..100 {
            let (x, x2, y) = (v(), v(), v());
            if !cross(&a, &b, &x, &x).iter().all(|c| c.is_zero()) {
                return Ok(false);
            }
            let xs: Vec<_> = x.iter().zip(&x2).map(|(p, q)| p + q).collect();
            let rhs: Vec<_> = cross(&a, &b, &x, &y).iter().zip(cross(&a, &b, &x2, &y)).map(|(p, q)| p + &q).collect();
            if cross(&a, &b, &xs, &y) != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }));
    out.push(item("twisted/S-conjugates", json!({ "a": 2, "b": 3, "units": 10 }), || {
        let f = BaseField::rationals();
        let (a, b) = (f.int(2), f.int(3));
        let alg = QuatAlgebra::new(f, a.clone(), b.clone())?;
        let s = explicit_s7(f, &a, &b)?;
        let si = s.inverse()?;
        let units = norm_one_units(&alg, 10);
        for u in &units {
            if !in_g2(&a, &b, &(&(&s * &tau(7, &u.embed_2x2())?) * &si))? {
                return Ok(false);
            }
        }
        Ok(units.len() == 10)
    }));
    for q in [3u64, 5, 7, 9] {
        out.push(item_with(format!("octonion/q={q}"), json!({ "q": q }), move || {
            let alg = OctonionFq::new(q)?;
            let fq = alg.field();
            let mut table = Vec::new();
            let mut auto = true;
            for x in fq.elements() {
                let phi = oct_aut_phi(&alg, &x);
                auto &= phi.is_automorphism(&alg) && phi.preserves_norm(&alg);
                table.push(json!({ "a": x.to_string(), "trace": oct_trace7(&phi, &alg).to_string() }));
            }
            let onto = trace_surjective(q)?;
            Ok((auto && onto, json!({ "automorphisms": auto, "trace_onto": onto, "trace_table": table })))
        }));
    }
    out
}

fn sp_identities() -> Vec<Check> {
    let mut out = Vec::new();
    for n in 2..=4usize {
        out.push(item_with(format!("jstar/n={n}"), json!({ "a": 2, "b": 3, "n": n }), move || {
            let f = BaseField::rationals();
            let (a, b) = (f.int(2), f.int(3));
            let hermitian = Involution::quaternion(None).is_hermitian(&jstar(f, &a, &b, n)?);
            let d = n_diagonalize(f, &a, &b, n)?;
            let e = d[0].field().clone();
            let fact = |k: usize| (1..=k as i64).product::<i64>();
            let want: Vec<_> = (1..=2 * n)
                .map(|i| e.int(if i % 2 == 1 { -4 * fact(2 * n - i - 1) * fact(i) } else { -4 * fact(2 * n - i) * fact(i - 1) }))
                .collect();
            let got: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            Ok((hermitian && d == want, json!({ "hermitian": hermitian, "n_diagonal": got })))
        }));
        for (a, b) in [(2i64, 3i64), (5, 2), (3, 5)] {
            out.push(item(format!("explicit-P/n={n}/({a},{b})"), json!({ "a": a, "b": b, "n": n }), move || {
                let f = BaseField::rationals();
                let (a, b) = (f.int(a), f.int(b));
                let p = explicit_p(f, &a, &b, n)?;
                let pi = p.inverse()?;
                let eta = eta_cocycle(f, &a, &b, n)?;
                let zeta = t_cocycle(f, &a, &b)?.map(Kind::Projective, |t| tau(2 * n, t))?;
                for g in eta.field().galois_group() {
                    let rhs = &(&pi * &eta.get(&g)?.mat) * &p.galois(&g);
                    if !rhs.proj_eq(&zeta.get(&g)?.mat) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }));
        }
    }
    for n in [2usize, 3] {
        out.push(item(format!("minus-jstar-vs-identity/n={n}"), json!({ "a": -1, "b": -3, "n": n }), move || {
            let f = BaseField::rationals();
            let (a, b) = (f.int(-1), f.int(-3));
            let set = HermSetting::Quaternion { a: a.clone(), b: b.clone() };
            let h = HermitianForm::new(f, set.clone(), &-&jstar(f, &a, &b, n)?)?;
            hermitian_equiv(&h, &HermitianForm::identity(f, set, n)?)
        }));
    }
    out
}

fn sl_identities() -> Vec<Check> {
    let mut out = Vec::new();
    for n in [5usize, 7] {
        out.push(item(format!("jnab-sigma-hermitian/n={n}"), json!({ "a": -1, "b": -3, "d": -7, "n": n }), move || {
            let f = BaseField::rationals();
            let d = f.int(-7);
            let j = jnab(f, n, &f.int(-1), &f.int(-3))?;
            let h = HermitianForm::from_quadratic(f, d.clone(), j.matrix())?;
            hermitian_equiv(&h, &HermitianForm::identity(f, HermSetting::Quadratic { d }, n)?)
        }));
    }
    for n in [2usize, 3] {
        out.push(item(format!("jstar-unitary/n={n}"), json!({ "field": "Q(√2)", "a": "1-√2", "b": "1-2√2", "d": "2-3√2", "n": n }), move || {
            let f = BaseField::quadratic(2)?;
            let q = surfarith_core::numfield::rat::q;
            let (a, b, d) = (f.elem(q(1), q(-1)), f.elem(q(1), q(-2)), f.elem(q(2), q(-3)));
            let set = HermSetting::QuaternionUnitary { a: a.clone(), b: b.clone(), d };
            let h = HermitianForm::new(f, set.clone(), &jstar(f, &a, &b, n)?)?;
            hermitian_equiv(&h, &HermitianForm::identity(f, set, n)?.scaled(&f.int(-1)))
        }));
    }
    for (a, b, d) in TRIPLES {
        for n in 2..=7usize {
            out.push(item(format!("outer-cocycle/n={n}/({a},{b},{d})"), json!({ "a": a, "b": b, "d": d, "n": n }), move || {
                let f = BaseField::rationals();
                let z = compatible_cocycle(f, &f.int(a), &f.int(b), n, Compat::Outer, Some(&f.int(d)))?;
                Ok(z.is_cocycle()? && z.has_outer())
            }));
        }
    }
    out
}
