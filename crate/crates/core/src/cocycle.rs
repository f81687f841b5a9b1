//! Finite Galois 1-cocycles with values in (P)GL_n or Aut(SL_n), a constructive
//! Hilbert 90, and the twisted fixed-point groups they define.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::FMatrix;
use crate::numfield::{BaseElem, BaseField, ExtField, FieldElem, GaloisChar};
use crate::symrep::{j_form, tau};

/// Int(mat) ∘ ω^outer, where ω(M) = M^{-⊤}.
#[derive(Clone, Debug, PartialEq)]
pub struct Twist {
    pub mat: FMatrix,
    pub outer: bool,
}

impl Twist {
    pub fn inner(mat: FMatrix) -> Self {
        Twist { mat, outer: false }
    }

    /// (A,e)(B,f) = (A·ω^e(B), e⊕f).
    pub fn compose(&self, o: &Twist) -> Result<Twist> {
        let b = if self.outer { o.mat.inverse()?.transpose() } else { o.mat.clone() };
        Ok(Twist { mat: &self.mat * &b, outer: self.outer ^ o.outer })
    }

    pub fn galois(&self, g: &GaloisChar) -> Twist {
        Twist { mat: self.mat.galois(g), outer: self.outer }
    }

    /// The automorphism applied to a matrix.
    pub fn act(&self, m: &FMatrix) -> Result<FMatrix> {
        let m = if self.outer { m.inverse()?.transpose() } else { m.clone() };
        Ok(&(&self.mat * &m) * &self.mat.inverse()?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    /// Values in GL_n, compared exactly.
    Linear,
    /// Values in PGL_n or Aut(SL_n), compared up to scalars.
    Projective,
}

#[derive(Clone, Debug)]
pub struct Cocycle {
    field: ExtField,
    table: BTreeMap<GaloisChar, Twist>,
    kind: Kind,
    /// When set, Galois acts on values through σ·M = η(σ)σ(M)η(σ)^{-1}.
    twist: Option<Box<Cocycle>>,
}

/// Whether σ negates the chosen square root r.
pub fn flips(g: &GaloisChar, r: &FieldElem) -> bool {
    r.galois(g) != *r
}

/// The four-case table: (+,+) I, (+,−) diag(1,−1), (−,+) [[0,1],[1,0]], (−,−) [[0,1],[−1,0]].
pub fn t_matrix(e: &ExtField, flip_a: bool, flip_b: bool) -> FMatrix {
    let rows: [[i64; 4]; 4] = [[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, 1, -1, 0]];
    let r = rows[(flip_a as usize) << 1 | flip_b as usize];
    FMatrix::from_ints(e, &[&r[..2], &r[2..]])
}

pub(crate) fn block_diag(blocks: &[FMatrix]) -> FMatrix {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = FMatrix::zeros(n, n, blocks[0].sample());
    let mut o = 0;
    for b in blocks {
        out.set_block(o, o, b);
        o += b.rows();
    }
    out
}

impl Cocycle {
    pub fn new(field: ExtField, table: BTreeMap<GaloisChar, Twist>, kind: Kind) -> Self {
        Cocycle { field, table, kind, twist: None }
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn table(&self) -> &BTreeMap<GaloisChar, Twist> {
        &self.table
    }

    pub fn get(&self, g: &GaloisChar) -> Result<&Twist> {
        self.table.get(g).ok_or(Error::IncompleteTable)
    }

    pub fn twisted_by(&self) -> Option<&Cocycle> {
        self.twist.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.table.values().next().map_or(0, |t| t.mat.rows())
    }

    pub fn has_outer(&self) -> bool {
        self.table.values().any(|t| t.outer)
    }

    /// Galois action on a value, twisted if this is a cocycle for a twisted action.
    fn act_on(&self, g: &GaloisChar, v: &Twist) -> Result<Twist> {
        let gv = v.galois(g);
        match &self.twist {
            None => Ok(gv),
            Some(eta) => {
                let e = &eta.get(g)?.mat;
                Ok(Twist { mat: &(e * &gv.mat) * &e.inverse()?, outer: gv.outer })
            }
        }
    }

    fn same(&self, x: &Twist, y: &Twist) -> bool {
        x.outer == y.outer
            && match self.kind {
                Kind::Linear => x.mat == y.mat,
                Kind::Projective => x.mat.proj_eq(&y.mat),
            }
    }

    /// ζ(στ) = ζ(σ)·σ(ζ(τ)) for every pair, and ζ(1) = 1.
    pub fn is_cocycle(&self) -> Result<bool> {
        let group = self.field.galois_group();
        for g in &group {
            self.get(g)?;
        }
        let id = self.get(&self.field.identity_char())?;
        let idm = Twist::inner(FMatrix::identity(self.dim(), &self.field.one()));
        if !self.same(id, &idm) {
            return Ok(false);
        }
        for s in &group {
            for t in &group {
                let lhs = self.get(&s.compose(t))?;
                let rhs = self.get(s)?.compose(&self.act_on(s, self.get(t)?)?)?;
                if !self.same(lhs, &rhs) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Pointwise image under a map of matrices (e.g. τ_n), keeping the outer flags.
    pub fn map(&self, kind: Kind, f: impl Fn(&FMatrix) -> Result<FMatrix>) -> Result<Cocycle> {
        let table = self.table.iter().map(|(g, t)| Ok((*g, Twist { mat: f(&t.mat)?, outer: t.outer }))).collect::<Result<_>>()?;
        Ok(Cocycle { field: self.field.clone(), table, kind, twist: None })
    }

    pub fn with_corrupted(&self, g: &GaloisChar) -> Cocycle {
        let mut c = self.clone();
        if let Some(t) = c.table.get_mut(g) {
            // negate one entry: not a scalar multiple, so even projectively different
            let x = t.mat.get(0, 0).clone();
            let y = if x.is_zero() { self.field.one() } else { -&x - &self.field.one() };
            t.mat.set(0, 0, y);
        }
        c
    }
}

/// Tower F(√a,√b) and the chosen roots.
fn tower_ab(f: BaseField, xs: &[BaseElem]) -> Result<(ExtField, Vec<FieldElem>)> {
    ExtField::with_roots(f, xs)
}

pub fn t_cocycle(f: BaseField, a: &BaseElem, b: &BaseElem) -> Result<Cocycle> {
    let (e, r) = tower_ab(f, &[a.clone(), b.clone()])?;
    let table = e.galois_group().into_iter().map(|g| (g, Twist::inner(t_matrix(&e, flips(&g, &r[0]), flips(&g, &r[1]))))).collect();
    Ok(Cocycle::new(e, table, Kind::Projective))
}

/// η(σ) = Diag(T_σ), n blocks.
pub fn eta_cocycle(f: BaseField, a: &BaseElem, b: &BaseElem, n: usize) -> Result<Cocycle> {
    t_cocycle(f, a, b)?.map(Kind::Projective, |t| Ok(block_diag(&vec![t.clone(); n])))
}

/// Block antidiagonal permutation of I₂ blocks.
pub fn chi_flip(e: &ExtField, n: usize) -> FMatrix {
    let mut w = FMatrix::zeros(2 * n, 2 * n, &e.one());
    for i in 0..n {
        w.set_block(2 * i, 2 * (n - 1 - i), &FMatrix::identity(2, &e.one()));
    }
    w
}

/// Lift of τ_{2n}(T)η^{-1} to SL_{2n}, a cocycle for the η-twisted action.
pub fn chi_lift(f: BaseField, a: &BaseElem, b: &BaseElem, n: usize) -> Result<Cocycle> {
    let eta = eta_cocycle(f, a, b, n)?;
    let e = eta.field.clone();
    let (_, r) = tower_ab(f, std::slice::from_ref(a))?;
    let ra = e.lift(&r[0])?;
    let w = chi_flip(&e, n);
    let id = FMatrix::identity(2 * n, &e.one());
    let table = e.galois_group().into_iter().map(|g| (g, Twist::inner(if flips(&g, &ra) { w.clone() } else { id.clone() }))).collect();
    Ok(Cocycle { field: e, table, kind: Kind::Linear, twist: Some(Box::new(eta)) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Compat {
    Inner,
    /// Outer on the side where √d is negated.
    Outer,
}

/// τ_n-compatible cocycle with ξ = T^{a,b}.
///
/// Inner, n odd: σ ↦ det(T_σ)^{(n−1)/2} τ_n(T_σ), a linear cocycle into SO(J_n).
/// Inner, n even: σ ↦ τ_n(T_σ) in PSp(J_n).
/// Outer: σ ↦ Int(τ_n(T_σ)J_n^{-1})∘ω when σ negates √d.
pub fn compatible_cocycle(f: BaseField, a: &BaseElem, b: &BaseElem, n: usize, kind: Compat, d: Option<&BaseElem>) -> Result<Cocycle> {
    let mut xs = vec![a.clone(), b.clone()];
    if kind == Compat::Outer {
        let d = d.ok_or_else(|| Error::Unsupported("outer cocycle needs d".into()))?;
        if f.is_square(d) {
            return Err(Error::Unsupported("d must be a nonsquare".into()));
        }
        xs.push(d.clone());
    }
    let (e, r) = tower_ab(f, &xs)?;
    let j = j_form(n, &e.one());
    let jinv = j.inverse()?;
    let mut table = BTreeMap::new();
    for g in e.galois_group() {
        let t = t_matrix(&e, flips(&g, &r[0]), flips(&g, &r[1]));
        let mut m = tau(n, &t)?;
        if n % 2 == 1 && kind == Compat::Inner {
            let det = t.det();
            if (n - 1) / 2 % 2 == 1 {
                m = m.scale(&det);
            }
        }
        let outer = kind == Compat::Outer && flips(&g, &r[2]);
        if outer {
            m = &m * &jinv;
        }
        table.insert(g, Twist { mat: m, outer });
    }
    let linear = kind == Compat::Inner && n % 2 == 1;
    Ok(Cocycle::new(e, table, if linear { Kind::Linear } else { Kind::Projective }))
}

/// Membership in the twisted group: ζ(σ)·σ(M) = M for every σ (through ω where outer).
pub fn fixed_points_member(z: &Cocycle, m: &FMatrix) -> Result<bool> {
    let m = m.lift_to(&z.field)?;
    for (g, t) in &z.table {
        let gm = match &z.twist {
            None => m.galois(g),
            Some(_) => return Err(Error::Unsupported("membership for twisted-action cocycles".into())),
        };
        if t.act(&gm)? != m {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct Hilbert90Solution {
    /// ζ(σ) = S^{-1}·(σ·S) for all σ.
    pub s: FMatrix,
    pub seed: u64,
    pub attempts: u32,
}

pub const H90_RETRIES: u32 = 64;

fn random_elem(e: &ExtField, rng: &mut ChaCha8Rng) -> FieldElem {
    let b = e.base();
    let coeffs = (0..e.degree())
        .map(|_| {
            let u = rng.gen_range(-4i64..=4);
            match b.m() {
                None => b.int(u),
                Some(_) => b.elem(crate::numfield::rat::q(u), crate::numfield::rat::q(rng.gen_range(-2i64..=2))),
            }
        })
        .collect();
    e.from_coeffs(coeffs).unwrap()
}

impl Cocycle {
    /// σ·M for the (possibly twisted) action on plain matrices.
    pub fn act_matrix(&self, g: &GaloisChar, m: &FMatrix) -> Result<FMatrix> {
        Ok(self.act_on(g, &Twist::inner(m.clone()))?.mat)
    }

    /// Check ζ(σ) = S^{-1}(σ·S) for all σ.
    pub fn is_coboundary_of(&self, s: &FMatrix) -> Result<bool> {
        let s = s.lift_to(&self.field)?;
        let si = s.inverse()?;
        for (g, t) in &self.table {
            let rhs = &si * &self.act_matrix(g, &s)?;
            let ok = match self.kind {
                Kind::Linear => rhs == t.mat,
                Kind::Projective => rhs.proj_eq(&t.mat),
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// S = (Σ_τ ζ(τ)·(τ·C))^{-1} for a seeded random C, retried until invertible.
pub fn hilbert90_solve(z: &Cocycle, seed: u64) -> Result<Hilbert90Solution> {
    if z.kind != Kind::Linear || z.has_outer() {
        return Err(Error::NotLinear("Hilbert 90 needs a linear inner cocycle".into()));
    }
    let n = z.dim();
    let e = z.field.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=H90_RETRIES {
        let c = FMatrix::from_fn(n, n, |_, _| random_elem(&e, &mut rng));
        let mut acc = FMatrix::zeros(n, n, &e.one());
        for (g, t) in &z.table {
            acc = &acc + &(&t.mat * &z.act_matrix(g, &c)?);
        }
        let Ok(s) = acc.inverse() else { continue };
        if !z.is_coboundary_of(&s)? {
            return Err(Error::NotLinear("table is not a linear cocycle".into()));
        }
        return Ok(Hilbert90Solution { s, seed, attempts: attempt });
    }
    Err(Error::ExhaustedRetries(H90_RETRIES))
}

/// The explicit 7×7 S with τ₇(T_σ) = S^{-1}σ(S); rows ½·[(e₁−e₇)/√b, e₂−e₆, (e₃−e₅)/√b, 2e₄/√a, (e₃+e₅)/√ab, (e₂+e₆)/√a, (e₁+e₇)/√ab].
pub fn explicit_s7(f: BaseField, a: &BaseElem, b: &BaseElem) -> Result<FMatrix> {
    let (e, r) = tower_ab(f, &[a.clone(), b.clone()])?;
    let (ra, rb) = (&r[0], &r[1]);
    let one = e.one();
    let ia = ra.inv()?;
    let ib = rb.inv()?;
    let iab = (ra * rb).inv()?;
    let half = e.rat(crate::numfield::rat::qf(1, 2));
    let mut s = FMatrix::zeros(7, 7, &one);
    let mut put = |i: usize, j: usize, x: FieldElem| s.set(i, j, &x * &half);
    put(0, 0, ib.clone());
    put(0, 6, -&ib);
    put(1, 1, one.clone());
    put(1, 5, -&one);
    put(2, 2, ib.clone());
    put(2, 4, -&ib);
    put(3, 3, &ia + &ia);
    put(4, 2, iab.clone());
    put(4, 4, iab.clone());
    put(5, 1, ia.clone());
    put(5, 5, ia.clone());
    put(6, 0, iab.clone());
    put(6, 6, iab);
    Ok(s)
}

/// Block layout shared by P and N: n block rows of 2×2 blocks.
/// Upper rows i < ⌊n/2⌋: `top` at (i,i) and (i,n−1−i); middle row (n odd): `mid` at the centre;
/// lower rows: `lo_left` at (i,n−1−i), `lo_diag` at (i,i).
fn pn_layout(e: &ExtField, n: usize, top: &FMatrix, mid: &FMatrix, lo_left: &FMatrix, lo_diag: &FMatrix) -> FMatrix {
    let mut m = FMatrix::zeros(2 * n, 2 * n, &e.one());
    let h = n / 2;
    for i in 0..h {
        m.set_block(2 * i, 2 * i, top);
        m.set_block(2 * i, 2 * (n - 1 - i), top);
    }
    if n % 2 == 1 {
        m.set_block(2 * h, 2 * h, mid);
    }
    for i in (n - h)..n {
        m.set_block(2 * i, 2 * (n - 1 - i), lo_left);
        m.set_block(2 * i, 2 * i, lo_diag);
    }
    m
}

/// The explicit P with τ_{2n}(T_σ) = P^{-1}η(σ)σ(P) (projectively); P = I when a is a square.
pub fn explicit_p(f: BaseField, a: &BaseElem, b: &BaseElem, n: usize) -> Result<FMatrix> {
    let (e, r) = tower_ab(f, &[a.clone(), b.clone()])?;
    if f.is_square(a) {
        return Ok(FMatrix::identity(2 * n, &e.one()));
    }
    let i2 = FMatrix::identity(2, &e.one());
    let ia = r[0].inv()?;
    let p = pn_layout(&e, n, &i2, &i2.scale(&e.int(2)), &i2.scale(&ia), &i2.scale(&-&ia));
    Ok(p.scale(&e.rat(crate::numfield::rat::qf(1, 2))))
}

/// The explicit N diagonalizing J*_{2n}: as P without the ½, with ∓D in the lower rows, D = diag(1/√a, −1/√a).
pub fn explicit_n(f: BaseField, a: &BaseElem, b: &BaseElem, n: usize) -> Result<FMatrix> {
    let (e, r) = tower_ab(f, &[a.clone(), b.clone()])?;
    let i2 = FMatrix::identity(2, &e.one());
    let ia = r[0].inv()?;
    let d = FMatrix::diag(&[ia.clone(), -&ia]);
    Ok(pn_layout(&e, n, &i2, &i2.scale(&e.int(2)), &-&d, &d))
}

/// K = Diag([[0,1],[−1,0]]).
pub fn k_matrix(e: &ExtField, n: usize) -> FMatrix {
    block_diag(&vec![FMatrix::from_ints(e, &[&[0, 1], &[-1, 0]]); n])
}

/// Transport of J_n through S: S^{-⊤}J_nS^{-1}.
pub fn transport_form(s: &FMatrix, j: &FMatrix) -> Result<FMatrix> {
    let si = s.inverse()?;
    let j = j.lift_to(s.sample().field())?;
    Ok(&(&si.transpose() * &j) * &si)
}

/// Small helper for reports: sign string of σ on each chosen root.
pub fn signs_on(g: &GaloisChar, roots: &[FieldElem]) -> String {
    roots.iter().map(|r| if flips(g, r) { '-' } else { '+' }).collect()
}
