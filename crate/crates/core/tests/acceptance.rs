//! The twelve acceptance criteria, one PASS/FAIL line each.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use surfarith_core::bend::fixtures::{battery, lifted};
use surfarith_core::bend::{bend, invariant_form_solver, make_bending_element, zariski_classify, BendingDatum, Closure};
use surfarith_core::cocycle::*;
use surfarith_core::forms::diag::Involution;
use surfarith_core::forms::*;
use surfarith_core::g2::*;
use surfarith_core::numfield::rat::qf;
use surfarith_core::numfield::{prime_split, BaseField, ExtField, FieldElem};
use surfarith_core::qalg::{local_symbols, Place, QuatAlgebra};
use surfarith_core::redux::{phi_image, separation_experiment, SeparationReport};
use surfarith_core::symrep::{j_form, tau};
use surfarith_core::FMatrix;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn qq() -> BaseField {
    BaseField::rationals()
}

fn random_sl2(e: &ExtField, rng: &mut ChaCha8Rng) -> FMatrix {
    let b = e.base();
    let mut el = |nonzero: bool| loop {
        let c: Vec<_> = (0..e.degree()).map(|_| b.int(rng.gen_range(-3..=3))).collect();
        let x = e.from_coeffs(c).unwrap();
        if !nonzero || !x.is_zero() {
            return x;
        }
    };
    let (a, bb, c) = (el(true), el(false), el(false));
    let d = &(&e.one() + &(&bb * &c)) * &a.inv().unwrap();
    FMatrix::from_rows(vec![vec![a, bb], vec![c, d]])
}

fn c1() -> Check {
    let f = qq();
    let (e, _) = ExtField::with_roots(f, &[f.int(2), f.int(3)]).map_err(|x| x.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ms: Vec<FMatrix> = (0..50).map(|_| random_sl2(&e, &mut rng)).collect();
    for n in 3..=9 {
        let j = j_form(n, &e.one());
        for m in &ms {
            ensure(m.det().is_one(), "sample not in SL2")?;
            let t = tau(n, m).unwrap();
            ensure(&(&t.transpose() * &j) * &t == j, format!("invariance fails at n={n}"))?;
        }
    }
    Ok("n=3..9, 50 samples over Q(√2,√3)".into())
}

fn c2() -> Check {
    let e = ExtField::rationals();
    let anti = |n: usize, v: &[i64]| {
        let j = j_form(n, &e.one());
        (0..n).all(|i| (0..n).all(|k| if i + k == n - 1 { *j.get(i, k) == e.int(v[i]) } else { j.get(i, k).is_zero() }))
    };
    ensure(anti(3, &[2, -1, 2]), "J3 entries")?;
    ensure(anti(4, &[6, -2, 2, -6]), "J4 entries")?;
    for n in 2..=9 {
        let j = j_form(n, &e.one());
        let t = j.transpose();
        ensure(if n % 2 == 1 { t == j } else { t == -&j }, format!("parity of J{n}"))?;
    }
    for k in 1..=4usize {
        let s = j_signature(2 * k + 1).map_err(|x| x.to_string())?;
        let want = if k % 2 == 0 { (k + 1, k) } else { (k, k + 1) };
        ensure((s.pos, s.neg) == want, format!("signature of J{}: {:?}", 2 * k + 1, (s.pos, s.neg)))?;
    }
    Ok("J3, J4 entries; parity n<=9; signatures k=1..4".into())
}

const TRIPLES: [(i64, i64, i64); 3] = [(2, 3, 5), (5, 2, 3), (2, 2, 3)];

fn c3() -> Check {
    let f = qq();
    let mut count = 0;
    for (a, b, d) in TRIPLES {
        let (a, b, d) = (f.int(a), f.int(b), f.int(d));
        let mut zs = vec![t_cocycle(f, &a, &b).unwrap()];
        for n in 2..=7 {
            zs.push(compatible_cocycle(f, &a, &b, n, Compat::Inner, None).unwrap());
            zs.push(compatible_cocycle(f, &a, &b, n, Compat::Outer, Some(&d)).unwrap());
        }
        for n in 2..=4 {
            zs.push(eta_cocycle(f, &a, &b, n).unwrap());
            zs.push(chi_lift(f, &a, &b, n).unwrap());
        }
        for z in &zs {
            ensure(z.is_cocycle().unwrap(), "cocycle identity fails")?;
            count += 1;
        }
    }
    Ok(format!("{count} tables, all character pairs"))
}

fn c4() -> Check {
    let f = qq();
    let mut solved = 0;
    for (a, b, _) in TRIPLES {
        let (a, b) = (f.int(a), f.int(b));
        let mut zs: Vec<Cocycle> = [3, 5, 7].iter().map(|&n| compatible_cocycle(f, &a, &b, n, Compat::Inner, None).unwrap()).collect();
        zs.extend((2..=3).map(|n| chi_lift(f, &a, &b, n).unwrap()));
        for z in &zs {
            let s = hilbert90_solve(z, 11).map_err(|x| x.to_string())?;
            ensure(z.is_coboundary_of(&s.s).unwrap(), "solver output is not a splitting")?;
            solved += 1;
        }
    }
    for (a, b) in [(2, 3), (5, 2), (3, 5)] {
        let (a, b) = (f.int(a), f.int(b));
        let s = explicit_s7(f, &a, &b).unwrap();
        ensure(compatible_cocycle(f, &a, &b, 7, Compat::Inner, None).unwrap().is_coboundary_of(&s).unwrap(), "explicit S")?;
        for n in 2..=4 {
            let p = explicit_p(f, &a, &b, n).unwrap();
            let pi = p.inverse().unwrap();
            let eta = eta_cocycle(f, &a, &b, n).unwrap();
            let zeta = t_cocycle(f, &a, &b).unwrap().map(Kind::Projective, |t| tau(2 * n, t)).unwrap();
            for g in eta.field().galois_group() {
                let rhs = &(&pi * &eta.get(&g).unwrap().mat) * &p.galois(&g);
                ensure(rhs.proj_eq(&zeta.get(&g).unwrap().mat), format!("explicit P, n={n}"))?;
            }
        }
    }
    Ok(format!("{solved} solver round trips; explicit S and P for 3 pairs"))
}

fn c5() -> Check {
    let f = qq();
    for (a, b) in [(2, 3), (3, 5)] {
        let (a, b) = (f.int(a), f.int(b));
        for n in [5, 7] {
            let z = compatible_cocycle(f, &a, &b, n, Compat::Inner, None).unwrap();
            let s = hilbert90_solve(&z, 5).unwrap().s;
            let jt = transport_form(&s, &j_form(n, &s.one_elem())).unwrap();
            let jt = jt.to_base().ok_or("transported form is not Galois-invariant")?;
            let lhs = invariants(&QuadraticForm::new(f, jt).unwrap()).map_err(|x| format!("transported invariants: {x}"))?;
            let rhs = invariants(&jnab(f, n, &a, &b).unwrap()).unwrap();
            ensure(lhs.agrees_with(&rhs), format!("invariants differ for n={n}"))?;
        }
    }
    Ok("n=5,7 × (2,3),(3,5)".into())
}

fn c6() -> Check {
    let f = qq();
    let odd_primes: Vec<u64> = (3..=50).filter(|&p| (2..p).all(|d| p % d != 0)).collect();
    let mut checked = 0;
    for (a, b) in [(2, 3), (3, 5)] {
        let (a, b) = (f.int(a), f.int(b));
        for n in [5, 7, 9, 11] {
            let d = jnab(f, n, &a, &b).unwrap().normalized().matrix().diagonal();
            let mut places = vec![Place::Real(0)];
            places.extend(odd_primes.iter().map(|&p| Place::Finite(prime_split(f, p).unwrap()[0])));
            for v in &places {
                let got = hasse_at(&d, v).unwrap();
                let want = hasse_closed_form(n, &a, &b, v).unwrap();
                ensure(got == want, format!("n={n} at {v}: {got} vs {want}"))?;
                checked += 1;
            }
        }
    }
    for n in (5..=101).step_by(2) {
        ensure(square_product_check(n), format!("square product n={n}"))?;
    }
    Ok(format!("{checked} local symbols; square products n<=101"))
}

fn c7() -> Check {
    let f = qq();
    let (a, b) = (f.int(2), f.int(3));
    for n in 2..=4 {
        let js = jstar(f, &a, &b, n).unwrap();
        ensure(Involution::quaternion(None).is_hermitian(&js), format!("J*_{} not Hermitian", 2 * n))?;
        let d = n_diagonalize(f, &a, &b, n).unwrap();
        let e = d[0].field().clone();
        let mut want = Vec::new();
        for i in 1..=2 * n {
            let fact = |k: usize| (1..=k as i64).product::<i64>();
            let v = if i % 2 == 1 { -4 * fact(2 * n - i - 1) * fact(i) } else { -4 * fact(2 * n - i) * fact(i - 1) };
            want.push(e.int(v));
        }
        ensure(d == want, format!("N-diagonal n={n}: {d:?}"))?;
    }
    Ok("n=2,3,4".into())
}

fn norm_one_units(alg: &QuatAlgebra, count: usize) -> Vec<surfarith_core::qalg::QuatElem> {
    let mut out = Vec::new();
    let r = 6i64;
    for x0 in -r..=r {
        for x1 in -r..=r {
            for x2 in -r..=r {
                for x3 in -r..=r {
                    let u = alg.from_ints([x0, x1, x2, x3]);
                    if u.is_norm_one() && out.len() < count {
                        out.push(u);
                    }
                }
            }
        }
    }
    out
}

fn c8() -> Check {
    let e = ExtField::rationals();
    for m in [[[1, 1], [0, 1]], [[1, 0], [1, 1]]] {
        let t = tau(7, &FMatrix::from_ints(&e, &[&m[0], &m[1]])).unwrap();
        ensure(preserves_cross(&t, untwisted_cross), "τ7 generator does not preserve ×")?;
        let j = j_form(7, &e.one());
        ensure(&(&t.transpose() * &j) * &t == j, "τ7 generator does not preserve J7")?;
    }
    let f = qq();
    let (a, b) = (f.int(2), f.int(3));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut v = || (0..7).map(|_| f.int(rng.gen_range(-9..=9))).collect::<Vec<_>>();
    for _ in 0..100 {
        let (x, x2, y) = (v(), v(), v());
        ensure(cross(&a, &b, &x, &x).iter().all(|c| c.is_zero()), "x×x ≠ 0")?;
        ensure(untwisted_cross(&x, &x).iter().all(|c| c.is_zero()), "untwisted x×x ≠ 0")?;
        let xs: Vec<_> = x.iter().zip(&x2).map(|(p, q)| p + q).collect();
        let lhs = cross(&a, &b, &xs, &y);
        let rhs: Vec<_> = cross(&a, &b, &x, &y).iter().zip(cross(&a, &b, &x2, &y)).map(|(p, q)| p + &q).collect();
        ensure(lhs == rhs, "bilinearity")?;
    }
    let alg = QuatAlgebra::new(f, a.clone(), b.clone()).unwrap();
    let units = norm_one_units(&alg, 10);
    ensure(units.len() == 10, "fewer than 10 norm-one units found")?;
    let s = explicit_s7(f, &a, &b).unwrap();
    let si = s.inverse().unwrap();
    let z = compatible_cocycle(f, &a, &b, 7, Compat::Inner, None).unwrap();
    for u in &units {
        let t = tau(7, &u.embed_2x2()).unwrap();
        ensure(fixed_points_member(&z, &t).unwrap(), "unit image not twisted-fixed")?;
        ensure(in_g2(&a, &b, &(&(&s * &t) * &si)).unwrap(), "S-conjugate not in G2(a,b)")?;
    }
    for q in [3u64, 5, 7, 9] {
        let o = OctonionFq::new(q).unwrap();
        let fq = o.field();
        for x in fq.elements() {
            ensure(oct_aut_phi(&o, &x).is_automorphism(&o), format!("φ_a not an automorphism, q={q}"))?;
        }
        ensure(trace_surjective(q).unwrap(), format!("trace map not onto F_{q}"))?;
    }
    Ok("21 pairs, 100 random pairs, 10 units, q=3,5,7,9".into())
}

fn c9() -> Check {
    let e = ExtField::rationals();
    let mut verdicts = BTreeSet::new();
    let mut count = 0;
    for fx in battery() {
        let rep = lifted(fx.n);
        let id = bend(&rep, &BendingDatum::identity(&rep)).unwrap();
        ensure(id == rep, "bend(I) changed the representation")?;
        let d = make_bending_element(&rep, &fx.multipliers(&e)).unwrap();
        let r = bend(&rep, &d).unwrap();
        ensure(r.pres.relator(&r.images).unwrap().is_identity(), "relator")?;
        ensure(r.gamma() == rep.gamma(), "ρ_B(γ) ≠ ρ(γ)")?;
        let c = zariski_classify(&r, &d).unwrap();
        ensure(c == fx.expected, format!("{}: classified {c}", fx.name))?;
        let inv = invariant_form_solver(&r.images);
        ensure(inv.consistent_with(c, fx.n), format!("{}: oracle {inv:?} vs {c}", fx.name))?;
        verdicts.insert((c, fx.n % 2));
        count += 1;
    }
    ensure(count >= 12, "fewer than 12 fixtures")?;
    for need in [Closure::PrincipalSl2, Closure::Sp, Closure::So, Closure::G2, Closure::Sl] {
        ensure(verdicts.iter().any(|(c, _)| *c == need), format!("no fixture with verdict {need}"))?;
    }
    Ok(format!("{count} fixtures agree with the invariant-form oracle"))
}

fn separation(seed: u64) -> SeparationReport {
    let rep = lifted(3);
    let e = &rep.field;
    let mu: Vec<FieldElem> = vec![e.int(2), e.int(2), e.rat(qf(1, 4))];
    let d = make_bending_element(&rep, &mu).unwrap();
    separation_experiment(&rep, &d, &[3, 5, 7], 4, 10_000_000, seed).unwrap()
}

fn c10() -> Check {
    let rpt = separation(10);
    ensure(rpt.collapse_failures().is_empty(), "a collapsed row differs from Φ3(SL2 traces)")?;
    ensure(rpt.rows.iter().any(|r| r.collapsed && r.l > 0), "no nontrivial collapse row")?;
    ensure(!phi_image(3, 3).unwrap().surjective && !phi_image(3, 5).unwrap().surjective, "Φ3 surjective")?;
    ensure(rpt.rows.iter().all(|r| r.exhaustive || r.seed.is_some()), "unflagged incomplete trace set")?;
    let sep = rpt.separating_rows();
    ensure(!sep.is_empty(), "no separating row")?;
    let collapsed = rpt.rows.iter().filter(|r| r.collapsed).count();
    Ok(format!("{} rows, {collapsed} collapsed, {} separating", rpt.rows.len(), sep.len()))
}

fn c11() -> Check {
    let f = qq();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let mut nz = || loop {
            let x = rng.gen_range(-500i64..=500);
            if x != 0 {
                return x;
            }
        };
        let (a, b) = (f.int(nz()), f.int(nz()));
        let s = local_symbols(f, &a, &b).unwrap();
        ensure(s.inferred.is_none(), "symbol inferred over Q")?;
        let prod: i32 = s.symbols.iter().map(|(_, x)| x).product();
        ensure(prod == 1, format!("product formula fails for ({a},{b})"))?;
    }
    let g = BaseField::quadratic(2).unwrap();
    let (a, b) = (g.elem(qf(1, 1), qf(-1, 1)), g.elem(qf(1, 1), qf(-2, 1)));
    let mut sizes = Vec::new();
    for n in [5, 11, 13] {
        let v = fuchsian_admissibility(&jnab(g, n, &a, &b).unwrap()).unwrap();
        let t = v.target().ok_or("target undetermined")?;
        ensure(t.len() % 2 == 0, format!("odd target for n={n}"))?;
        ensure(v.certificate.nontrivial % 2 == 0, "odd certificate")?;
        sizes.push(t.len());
    }
    Ok(format!("50 pairs over Q; target sizes {sizes:?} over Q(√2)"))
}

fn c12() -> Check {
    let a = serde_json::to_string(&separation(3)).unwrap();
    let b = serde_json::to_string(&separation(3)).unwrap();
    ensure(a == b, "separation reports differ")?;
    let f = qq();
    let z = compatible_cocycle(f, &f.int(2), &f.int(3), 5, Compat::Inner, None).unwrap();
    ensure(hilbert90_solve(&z, 42).unwrap().s == hilbert90_solve(&z, 42).unwrap().s, "Hilbert 90 not reproducible")?;
    let inv = |_: ()| serde_json::to_string(&surfarith_core::json::InvariantsJson::of(&invariants(&jnab(f, 7, &f.int(2), &f.int(3)).unwrap()).unwrap())).unwrap();
    ensure(inv(()) == inv(()), "invariant reports differ")?;
    Ok(format!("{} byte report reproduced", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<Duration>); 12] = [
        ("tau-invariance", c1, Some(Duration::from_secs(60))),
        ("J-form values", c2, None),
        ("cocycle axioms", c3, None),
        ("Hilbert-90 round trips", c4, None),
        ("J^{a,b} consistency", c5, Some(Duration::from_secs(120))),
        ("Hasse closed form", c6, None),
        ("J* and N identities", c7, None),
        ("G2 battery", c8, None),
        ("bending battery", c9, Some(Duration::from_secs(300))),
        ("separation mechanism", c10, None),
        ("reciprocity", c11, None),
        ("determinism", c12, None),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t0.elapsed();
        let res = match (res, limit) {
            (Ok(_), Some(l)) if dt > *l => Err(format!("took {dt:.1?}, limit {l:?}")),
            (r, _) => r,
        };
        match res {
            Ok(msg) => println!("criterion {:>2} {name}: PASS ({msg}) [{dt:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({msg}) [{dt:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
