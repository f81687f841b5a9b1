//! Reduction mod primes, trace sets of finite matrix groups, and the bending separation experiment.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bend::{bend, BendingDatum, SurfaceRep};
use crate::error::{Error, Result};
use crate::matrix::{FMatrix, Matrix};
use crate::numfield::{prime_split, ExtField, Fq, FqElem, PrimeIdeal, TowerReduction};
use crate::symrep::phi_eval;

pub type FqMatrix = Matrix<FqElem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRep {
    pub field: Fq,
    pub n: usize,
    pub gens: Vec<FqMatrix>,
}

impl FiniteRep {
    pub fn new(field: Fq, gens: Vec<FqMatrix>) -> Result<Self> {
        let n = gens.first().map(|g| g.rows()).ok_or_else(|| Error::DimensionMismatch("no generators".into()))?;
        for g in &gens {
            if g.rows() != n || g.cols() != n || g.sample().field() != field {
                return Err(Error::DimensionMismatch("generators must share size and field".into()));
            }
            if !g.det().is_one() {
                return Err(Error::DetNotOne);
            }
        }
        Ok(FiniteRep { field, n, gens })
    }
}

pub fn reduce_matrix(m: &FMatrix, red: &TowerReduction) -> Result<FqMatrix> {
    m.try_map(|x| red.reduce(x))
}

/// Generator-wise reduction at a prime of the base field.
pub fn reduce_rep(rep: &SurfaceRep, prime: PrimeIdeal, allow_extension: bool) -> Result<FiniteRep> {
    let red = TowerReduction::new(&rep.field, prime, allow_extension)?;
    reduce_with(&rep.images, &red)
}

fn reduce_with(images: &[FMatrix], red: &TowerReduction) -> Result<FiniteRep> {
    let gens = images.iter().map(|m| reduce_matrix(m, red)).collect::<Result<Vec<_>>>()?;
    FiniteRep::new(red.field, gens)
}

/// The first prime of the base above p.
pub fn first_prime(field: &ExtField, p: u64) -> Result<PrimeIdeal> {
    Ok(prime_split(field.base(), p)?[0])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSetResult {
    pub q: u64,
    /// Field elements by index (a + b·p).
    pub traces: BTreeSet<u64>,
    pub exhaustive: bool,
    /// Group elements visited by the closure.
    pub elements: u64,
    pub sample_seed: Option<u64>,
}

/// Index-coded arithmetic tables, so group elements are flat u16 arrays.
struct Tables {
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
}

impl Tables {
    fn new(f: Fq) -> Self {
        let q = f.q() as usize;
        let els: Vec<FqElem> = (0..q as u64).map(|i| f.from_index(i)).collect();
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for i in 0..q {
            for j in 0..q {
                add[i * q + j] = (els[i] + els[j]).index() as u16;
                mul[i * q + j] = (els[i] * els[j]).index() as u16;
            }
        }
        Tables { q, add, mul }
    }

    fn matmul(&self, n: usize, x: &[u16], y: &[u16], out: &mut [u16]) {
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u16;
                for k in 0..n {
                    let m = self.mul[x[i * n + k] as usize * self.q + y[k * n + j] as usize];
                    acc = self.add[acc as usize * self.q + m as usize];
                }
                out[i * n + j] = acc;
            }
        }
    }

    fn trace(&self, n: usize, x: &[u16]) -> u16 {
        (0..n).fold(0u16, |acc, i| self.add[acc as usize * self.q + x[i * n + i] as usize])
    }
}

fn encode(m: &FqMatrix) -> Vec<u16> {
    m.data().iter().map(|x| x.index() as u16).collect()
}

enum Visited {
    Bits(Vec<u64>),
    Hash(HashSet<u128>),
}

impl Visited {
    fn insert(&mut self, key: u128) -> bool {
        match self {
            Visited::Bits(b) => {
                let (w, bit) = ((key >> 6) as usize, key & 63);
                let fresh = b[w] >> bit & 1 == 0;
                b[w] |= 1 << bit;
                fresh
            }
            Visited::Hash(h) => h.insert(key),
        }
    }
}

/// Bitset keyed by the base-q code when q^{n²} stays within this many bits.
const BITSET_LIMIT: u128 = 1 << 32;

/// Closure of the generated group by BFS while it fits in `budget` elements; otherwise the partial
/// closure is topped up with a seeded random walk of `budget` steps.
pub fn trace_set(fin: &FiniteRep, budget: u64, seed: u64) -> TraceSetResult {
    assert!(budget >= 1);
    let n = fin.n;
    let t = Tables::new(fin.field);
    let q = t.q as u128;
    let space = (0..n * n).try_fold(1u128, |acc, _| acc.checked_mul(q));
    let key = |x: &[u16]| x.iter().rev().fold(0u128, |acc, &d| acc * q + d as u128);
    let gens: Vec<Vec<u16>> = fin.gens.iter().map(encode).collect();
    let id = encode(&Matrix::identity(n, &fin.field.one()));
    let mut traces = BTreeSet::new();
    let mut elements = 0u64;
    let mut exhaustive = false;

    if let Some(space) = space {
        let mut seen = if space <= BITSET_LIMIT {
            Visited::Bits(vec![0u64; (space as usize).div_ceil(64)])
        } else {
            Visited::Hash(HashSet::new())
        };
        let mut queue = VecDeque::new();
        seen.insert(key(&id));
        queue.push_back(id.clone());
        let mut buf = vec![0u16; n * n];
        exhaustive = true;
        'bfs: while let Some(x) = queue.pop_front() {
            traces.insert(t.trace(n, &x) as u64);
            elements += 1;
            for g in &gens {
                t.matmul(n, &x, g, &mut buf);
                if seen.insert(key(&buf)) {
                    if elements + queue.len() as u64 >= budget {
                        exhaustive = false;
                        break 'bfs;
                    }
                    queue.push_back(buf.clone());
                }
            }
        }
        if !exhaustive {
            for x in &queue {
                traces.insert(t.trace(n, x) as u64);
            }
        }
    }
    if exhaustive {
        return TraceSetResult { q: t.q as u64, traces, exhaustive, elements, sample_seed: None };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = id;
    let mut buf = vec![0u16; n * n];
    for _ in 0..budget {
        let g = &gens[rng.gen_range(0..gens.len())];
        t.matmul(n, &x, g, &mut buf);
        std::mem::swap(&mut x, &mut buf);
        traces.insert(t.trace(n, &x) as u64);
    }
    TraceSetResult { q: t.q as u64, traces, exhaustive: false, elements, sample_seed: Some(seed) }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiImage {
    pub n: usize,
    pub q: u64,
    pub image: BTreeSet<u64>,
    pub surjective: bool,
}

/// Image of the trace polynomial Φ_n over F_q.
pub fn phi_image(n: usize, q: u64) -> Result<PhiImage> {
    let f = Fq::of_order(q)?;
    if f.p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let image: BTreeSet<u64> = f.elements().map(|t| phi_eval(n, &t).index()).collect();
    let surjective = image.len() as u64 == q;
    Ok(PhiImage { n, q, image, surjective })
}

pub fn pushforward(n: usize, f: Fq, traces: &BTreeSet<u64>) -> BTreeSet<u64> {
    traces.iter().map(|&t| phi_eval(n, &f.from_index(t)).index()).collect()
}

/// Multiplicative order of an invertible matrix, searched up to `limit`.
pub fn matrix_order(m: &FqMatrix, limit: u64) -> Option<u64> {
    let mut x = m.clone();
    for k in 1..=limit {
        if x.is_identity() {
            return Some(k);
        }
        x = &x * m;
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationRow {
    pub prime: u64,
    pub l: u32,
    pub ord_b: Option<u64>,
    pub trace_set_size: usize,
    pub trace_set: BTreeSet<u64>,
    /// B̄^l = 1.
    pub collapsed: bool,
    /// The trace set equals the Φ_n-pushforward of the SL₂ trace set.
    pub matches_pushforward: bool,
    pub exhaustive: bool,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSummary {
    pub prime: u64,
    pub q: u64,
    pub sl2_traces: BTreeSet<u64>,
    pub pushforward: BTreeSet<u64>,
    pub phi_surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub n: usize,
    pub primes: Vec<PrimeSummary>,
    pub rows: Vec<SeparationRow>,
}

impl SeparationReport {
    /// Rows with B̄^l = 1 whose trace set is not the collapsed one.
    pub fn collapse_failures(&self) -> Vec<&SeparationRow> {
        self.rows.iter().filter(|r| r.collapsed && !r.matches_pushforward).collect()
    }

    pub fn separating_rows(&self) -> Vec<&SeparationRow> {
        self.rows.iter().filter(|r| !r.collapsed && r.trace_set.len() > self.summary(r.prime).pushforward.len()).collect()
    }

    fn summary(&self, p: u64) -> &PrimeSummary {
        self.primes.iter().find(|s| s.prime == p).expect("prime summary")
    }
}

/// For each prime and 0 ≤ l ≤ max_power, the trace set of ρ_{B^l} mod p against the collapsed set Φ_n(Tr ρ₀).
pub fn separation_experiment(
    rep: &SurfaceRep,
    datum: &BendingDatum,
    primes: &[u64],
    max_power: u32,
    budget: u64,
    seed: u64,
) -> Result<SeparationReport> {
    let sl2 = rep.sl2.as_deref().ok_or_else(|| Error::Unsupported("separation needs a lifted SL2 representation".into()))?;
    let mut summaries = Vec::new();
    let mut cells = Vec::new();
    for &p in primes {
        let prime = first_prime(&rep.field, p)?;
        let red = TowerReduction::new(&rep.field, prime, false)?;
        let base = reduce_with(&sl2.images, &red)?;
        let base_traces = trace_set(&base, budget, seed);
        if !base_traces.exhaustive {
            return Err(Error::Unsupported(format!("SL2 reduction mod {p} did not close within budget")));
        }
        let push = pushforward(rep.n, red.field, &base_traces.traces);
        let phi = phi_image(rep.n, red.field.q())?;
        let b = reduce_matrix(&datum.b, &red)?;
        let ord = matrix_order(&b, red.field.q().pow(rep.n as u32));
        summaries.push(PrimeSummary { prime: p, q: red.field.q(), sl2_traces: base_traces.traces, pushforward: push, phi_surjective: phi.surjective });
        for l in 0..=max_power {
            cells.push((p, l, red.clone(), ord, b.pow(l as u64).is_identity()));
        }
    }
    let rows = cells
        .into_par_iter()
        .map(|(p, l, red, ord, collapsed)| {
            let bent = bend(rep, &datum.power(l))?;
            let fin = reduce_with(&bent.images, &red)?;
            let cell_seed = seed ^ (p << 32) ^ l as u64;
            let ts = trace_set(&fin, budget, cell_seed);
            Ok((p, l, ord, collapsed, ts))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = rows
        .into_iter()
        .map(|(p, l, ord_b, collapsed, ts)| {
            let push = &summaries.iter().find(|s| s.prime == p).unwrap().pushforward;
            SeparationRow {
                prime: p,
                l,
                ord_b,
                trace_set_size: ts.traces.len(),
                matches_pushforward: &ts.traces == push,
                trace_set: ts.traces,
                collapsed,
                exhaustive: ts.exhaustive,
                seed: ts.sample_seed,
            }
        })
        .collect();
    Ok(SeparationReport { n: rep.n, primes: summaries, rows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceField {
    /// Monomial masks spanning the subfield: bit i is √r_i, bit k is √m of the base.
    pub span: Vec<u32>,
    pub degree_over_q: usize,
    pub equals_base: bool,
    /// Word length after which the span stopped growing.
    pub stable_from: usize,
}

fn reduce_span(basis: &mut Vec<u32>, mut v: u32) -> bool {
    for &b in basis.iter() {
        v = v.min(v ^ b);
    }
    if v == 0 {
        return false;
    }
    basis.push(v);
    basis.sort_unstable_by(|a, b| b.cmp(a));
    true
}

/// Subfield generated by adjoint traces Tr(g)Tr(g⁻¹) − 1 over reduced words of length ≤ `word_length`.
pub fn trace_field(rep: &SurfaceRep, word_length: usize) -> TraceField {
    assert!(word_length >= 1);
    let e = &rep.field;
    let k = e.k();
    let letters: Vec<(FMatrix, FMatrix)> = rep
        .images
        .iter()
        .flat_map(|m| {
            let mi = m.inverse().expect("images are invertible");
            [(m.clone(), mi.clone()), (mi, m.clone())]
        })
        .collect();
    let mut basis: Vec<u32> = Vec::new();
    let mut stable_from = 1;
    let mut frontier: Vec<(usize, FMatrix, FMatrix)> =
        letters.iter().enumerate().map(|(i, (g, gi))| (i, g.clone(), gi.clone())).collect();
    for len in 1..=word_length {
        let mut grew = false;
        for (_, g, gi) in &frontier {
            let x = &(&g.trace() * &gi.trace()) - &e.one();
            for (s, c) in x.coeffs().iter().enumerate() {
                if !c.re().is_zero() {
                    grew |= reduce_span(&mut basis, s as u32);
                }
                if !c.im().is_zero() {
                    grew |= reduce_span(&mut basis, s as u32 | 1 << k);
                }
            }
        }
        if grew {
            stable_from = len;
        }
        if len == word_length {
            break;
        }
        let mut next = Vec::new();
        for (last, g, gi) in &frontier {
            for (i, (h, hi)) in letters.iter().enumerate() {
                if i ^ 1 == *last {
                    continue;
                }
                next.push((i, g * h, hi * gi));
            }
        }
        frontier = next;
    }
    let base_span: Vec<u32> = if e.base().is_rationals() { vec![] } else { vec![1 << k] };
    let mut probe = basis.clone();
    let equals_base = basis.len() == base_span.len() && base_span.iter().all(|&b| !reduce_span(&mut probe, b));
    TraceField { degree_over_q: 1 << basis.len(), span: basis, equals_base, stable_from }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bend::fixtures::lifted;
    use crate::bend::{fuchsian_lift, make_bending_element, rep_from_images, SurfacePresentation};
    use crate::numfield::rat::qf;
    use crate::numfield::BaseField;

    fn fin(p: u64, rows: &[&[&[i64]]]) -> FiniteRep {
        let f = Fq::prime(p).unwrap();
        let gens = rows.iter().map(|m| Matrix::from_rows(m.iter().map(|r| r.iter().map(|&x| f.int(x)).collect()).collect())).collect();
        FiniteRep::new(f, gens).unwrap()
    }

    #[test]
    fn sl23_traces() {
        let r = fin(3, &[&[&[1, 1], &[0, 1]], &[&[1, 0], &[1, 1]]]);
        let t = trace_set(&r, 1000, 0);
        assert!(t.exhaustive);
        assert_eq!(t.elements, 24);
        assert_eq!(t.traces, BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn identity_traces() {
        let r = fin(5, &[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]]);
        let t = trace_set(&r, 10, 0);
        assert_eq!(t.traces, BTreeSet::from([3]));
        assert_eq!(t.elements, 1);
    }

    #[test]
    fn tau3_of_sl23() {
        let r = fin(3, &[&[&[1, 1, 1], &[0, 1, 2], &[0, 0, 1]], &[&[1, 0, 0], &[2, 1, 0], &[1, 1, 1]]]);
        let t = trace_set(&r, 10_000, 0);
        assert!(t.exhaustive);
        assert_eq!(t.traces, BTreeSet::from([0, 2]));
    }

    #[test]
    fn budget_monotone() {
        let r = fin(5, &[&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]], &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]], &[&[2, 0, 0], &[0, 3, 0], &[0, 0, 1]]]);
        let mut prev = BTreeSet::new();
        for b in [5, 50, 500, 5000] {
            let t = trace_set(&r, b, 9);
            assert!(t.traces.is_superset(&prev));
            prev = t.traces;
        }
    }

    #[test]
    fn phi_images() {
        assert!(phi_image(2, 7).unwrap().surjective);
        let p5 = phi_image(3, 5).unwrap();
        assert_eq!(p5.image, BTreeSet::from([0, 3, 4]));
        assert!(!p5.surjective);
        assert_eq!(phi_image(3, 3).unwrap().image, BTreeSet::from([0, 2]));
    }

    #[test]
    fn reductions() {
        let rep = lifted(3);
        let p = first_prime(&rep.field, 5).unwrap();
        let r = reduce_rep(&rep, p, false).unwrap();
        assert!(r.gens.iter().all(|g| g.det().is_one()));
        let e = ExtField::rationals();
        let id = FMatrix::identity(3, &e.one());
        let pres = SurfacePresentation::new(2, 1).unwrap();
        let idrep = rep_from_images(pres, vec![id; 4]).unwrap();
        assert!(reduce_rep(&idrep, p, false).unwrap().gens.iter().all(|g| g.is_identity()));
        let d = FMatrix::diag(&[e.rat(qf(1, 5)), e.int(5)]);
        let bad = rep_from_images(pres, vec![d.clone(), d.clone(), d.clone(), d]).unwrap();
        assert!(matches!(reduce_rep(&bad, p, false), Err(Error::BadReduction(_))));
    }

    #[test]
    fn small_separation() {
        let rep = lifted(3);
        let e = &rep.field;
        let mu = [e.int(2), e.int(2), e.rat(qf(1, 4))];
        let d = make_bending_element(&rep, &mu).unwrap();
        let rpt = separation_experiment(&rep, &d, &[3, 5], 3, 1_000_000, 1).unwrap();
        assert!(rpt.collapse_failures().is_empty());
        assert!(rpt.rows.iter().filter(|r| r.l == 0).all(|r| r.collapsed && r.matches_pushforward));
        assert!(!rpt.separating_rows().is_empty());
    }

    #[test]
    fn trace_fields() {
        let rep = lifted(3);
        let tf = trace_field(&rep, 3);
        assert!(tf.equals_base);
        assert_eq!(tf.degree_over_q, 1);

        let f = BaseField::rationals();
        let (e, roots) = ExtField::with_roots(f, &[f.int(2)]).unwrap();
        let r2 = &roots[0];
        let a = FMatrix::from_rows(vec![vec![r2.clone(), e.one()], vec![-&e.one(), e.zero()]]);
        let b = FMatrix::from_ints(&e, &[&[1, 1], &[0, 1]]);
        let pres = SurfacePresentation::new(2, 1).unwrap();
        let rep2 = rep_from_images(pres, vec![a.clone(), b.clone(), b, a]).unwrap();
        let tf = trace_field(&fuchsian_lift(2, &rep2).unwrap(), 2);
        assert_eq!(tf.span, vec![1]);
        assert!(!tf.equals_base);
    }
}
