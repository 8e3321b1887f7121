//! Brute-force Lie-closure oracle: enumerate the k-local symmetric
//! skew-Hermitian generators and saturate commutators, all in exact
//! arithmetic.
//!
//! Internally the ambient symmetric skew-Hermitian space gets a fixed real
//! coordinate basis (diagonal units i|b⟩⟨b| and, per sector-compatible pair
//! b < b′, the symmetric i(|b⟩⟨b′|+|b′⟩⟨b|) and antisymmetric
//! |b⟩⟨b′|−|b′⟩⟨b| directions). Rank and span bookkeeping run over sparse
//! rational row reduction; the exported [`Subspace`] basis is produced by a
//! final Gram–Schmidt pass over the (near-unit, fully reduced) rows, so the
//! published invariant — pairwise Hilbert–Schmidt orthogonality without
//! normalization — holds exactly.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::bits::BitString;
use crate::operator::{commutator, Operator};
use crate::scalar::{Rational, Scalar};
use crate::symmetry::LValue;
use crate::{Error, Result};

/// How basis states are partitioned into symmetry sectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sectoring {
    /// Hamming weight modulo L (weight itself for L = INF).
    ModWeight(LValue),
    /// Parity of the weight of b ∧ mask (product ℤ/2ℤ representations).
    MaskParity(BitString),
}

impl Sectoring {
    pub fn sector(&self, b: BitString) -> u32 {
        match self {
            Sectoring::ModWeight(LValue::Finite(l)) => b.weight() as u32 % l,
            Sectoring::ModWeight(LValue::Infinite) => b.weight() as u32,
            Sectoring::MaskParity(mask) => (b.and(mask).weight() % 2) as u32,
        }
    }

    /// The symmetry condition on a stored term (bra, ket).
    pub fn compatible(&self, bra: BitString, ket: BitString) -> bool {
        self.sector(bra) == self.sector(ket)
    }
}

#[derive(Clone, Debug)]
enum CoordKind {
    /// i|b⟩⟨b|, squared HS norm 1.
    Diag(BitString),
    /// i(|b⟩⟨b′| + |b′⟩⟨b|), squared HS norm 2.
    Sym(BitString, BitString),
    /// |b⟩⟨b′| − |b′⟩⟨b|, squared HS norm 2.
    Asym(BitString, BitString),
}

/// Fixed real coordinate system on the ambient sector-preserving
/// skew-Hermitian space for one (m, sectoring).
#[derive(Clone, Debug)]
pub struct CoordIndex {
    m: u8,
    sectoring: Sectoring,
    diag: BTreeMap<BitString, u32>,
    /// pair (b < b′) → index of the Sym coordinate; Asym is the next index.
    pairs: BTreeMap<(BitString, BitString), u32>,
    kinds: Vec<CoordKind>,
}

impl CoordIndex {
    pub fn new(m: u8, sectoring: Sectoring) -> Self {
        let mut kinds = Vec::new();
        let mut diag = BTreeMap::new();
        let mut pairs = BTreeMap::new();
        for b in BitString::all(m) {
            diag.insert(b, kinds.len() as u32);
            kinds.push(CoordKind::Diag(b));
        }
        for b in BitString::all(m) {
            for bp in BitString::all(m) {
                if b < bp && sectoring.compatible(b, bp) {
                    pairs.insert((b, bp), kinds.len() as u32);
                    kinds.push(CoordKind::Sym(b, bp));
                    kinds.push(CoordKind::Asym(b, bp));
                }
            }
        }
        CoordIndex {
            m,
            sectoring,
            diag,
            pairs,
            kinds,
        }
    }

    /// Dimension of the ambient symmetric skew-Hermitian space, equal to
    /// Σ_r (sector size)².
    pub fn dim(&self) -> usize {
        self.kinds.len()
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    pub fn sectoring(&self) -> &Sectoring {
        &self.sectoring
    }

    /// Squared HS norm of coordinate direction `i`.
    fn weight(&self, i: u32) -> u32 {
        match self.kinds[i as usize] {
            CoordKind::Diag(_) => 1,
            CoordKind::Sym(..) | CoordKind::Asym(..) => 2,
        }
    }

    /// Real coordinates of a skew-Hermitian sector-preserving operator;
    /// `None` when the operator falls outside the ambient space.
    pub fn coordinatize(&self, a: &Operator) -> Option<SparseVec> {
        if a.m() != self.m || !a.is_skew_hermitian() {
            return None;
        }
        let mut v = SparseVec::new();
        for (&(bra, ket), c) in a.terms() {
            if bra == ket {
                // skew-Hermiticity already forces the diagonal imaginary
                v.insert(self.diag[&bra], c.im.clone());
            } else if bra < ket {
                let &sym = self.pairs.get(&(bra, ket))?;
                if !c.im.is_zero() {
                    v.insert(sym, c.im.clone());
                }
                if !c.re.is_zero() {
                    v.insert(sym + 1, c.re.clone());
                }
            }
            // bra > ket is the conjugate of a visited pair
        }
        Some(v)
    }

    /// Inverse of [`coordinatize`](Self::coordinatize).
    pub fn op_from_coords(&self, v: &SparseVec) -> Operator {
        let mut op = Operator::zero(self.m);
        for (&i, r) in v {
            match &self.kinds[i as usize] {
                CoordKind::Diag(b) => op.add_term(*b, *b, Scalar::imag(r.clone())),
                CoordKind::Sym(b, bp) => {
                    op.add_term(*b, *bp, Scalar::imag(r.clone()));
                    op.add_term(*bp, *b, Scalar::imag(r.clone()));
                }
                CoordKind::Asym(b, bp) => {
                    op.add_term(*b, *bp, Scalar::real(r.clone()));
                    op.add_term(*bp, *b, Scalar::real(-r.clone()));
                }
            }
        }
        op
    }

    /// The weighted dot product matching Re tr(A†B) on reconstructed
    /// operators (which is all of tr(A†B): it is real for skew-Hermitian
    /// pairs).
    pub fn weighted_dot(&self, u: &SparseVec, v: &SparseVec) -> Rational {
        let (small, big) = if u.len() <= v.len() { (u, v) } else { (v, u) };
        let mut acc = Rational::zero();
        for (i, a) in small {
            if let Some(b) = big.get(i) {
                acc += a * b * Rational::from_integer(self.weight(*i).into());
            }
        }
        acc
    }
}

/// Sparse real coordinate vector.
pub type SparseVec = BTreeMap<u32, Rational>;

fn axpy(dst: &mut SparseVec, c: &Rational, src: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (i, v) in src {
        let entry = dst.entry(*i).or_insert_with(Rational::zero);
        *entry += c * v;
        if entry.is_zero() {
            dst.remove(i);
        }
    }
}

/// Sparse rational row-reduced echelon form; rows keep pivot value 1 and are
/// back-eliminated against every later pivot, so they stay near-unit.
#[derive(Default)]
struct Rref {
    rows: Vec<SparseVec>,
    pivot_to_row: BTreeMap<u32, usize>,
}

impl Rref {
    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut cursor = 0u32;
        // elimination against a row only introduces columns past its pivot,
        // so one ascending pass suffices
        while let Some((c, r)) = v
            .range(cursor..)
            .find_map(|(c, _)| self.pivot_to_row.get(c).map(|&r| (*c, r)))
        {
            let coef = -v[&c].clone();
            axpy(&mut v, &coef, &self.rows[r]);
            cursor = c;
        }
        v
    }

    /// Returns true (and grows the rank) when `v` is independent.
    fn insert(&mut self, v: SparseVec) -> bool {
        let mut r = self.reduce(v);
        let Some((&pivot, pv)) = r.iter().next() else {
            return false;
        };
        let inv = pv.recip();
        for entry in r.values_mut() {
            *entry *= &inv;
        }
        for row in &mut self.rows {
            if let Some(c) = row.get(&pivot).cloned() {
                axpy(row, &(-c), &r);
            }
        }
        self.pivot_to_row.insert(pivot, self.rows.len());
        self.rows.push(r);
        true
    }
}

/// The enumerated generator set 𝔞ₖᴳ.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub m: u8,
    pub k: u8,
    pub sectoring: Sectoring,
    pub ops: Vec<Operator>,
}

impl GeneratorSet {
    /// Generators for the weight-mod-L symmetry.
    pub fn new(m: u8, k: u8, l: LValue) -> Result<Self> {
        GeneratorSet::with_sectoring(m, k, Sectoring::ModWeight(l))
    }

    /// Generators for an arbitrary sectoring (used by the product-ℤ/2ℤ
    /// representations).
    pub fn with_sectoring(m: u8, k: u8, sectoring: Sectoring) -> Result<Self> {
        if k < 1 || k > m {
            return Err(Error::LocalityOutOfRange { k, m });
        }
        let mut ops = Vec::new();
        // index subsets S, |S| = k, in lexicographic order
        for s in (1..=m).combinations(k as usize) {
            for c in BitString::all(k) {
                for cp in BitString::all(k) {
                    if cp < c {
                        continue;
                    }
                    // symmetry of the embedded operator: check one
                    // representative term (the rest bits cancel)
                    let bra = local_to_global(c, &s, m);
                    let ket = local_to_global(cp, &s, m);
                    if !sectoring.compatible(bra, ket) {
                        continue;
                    }
                    if c == cp {
                        let p = Operator::matrix_unit(c, c)?.scaled(&Scalar::i());
                        ops.push(Operator::embed_local(&p, &s, m)?);
                    } else {
                        let e = Operator::matrix_unit(c, cp)?;
                        let sym = e.add(&e.dagger())?.scaled(&Scalar::i());
                        let asym = e.sub(&e.dagger())?;
                        ops.push(Operator::embed_local(&sym, &s, m)?);
                        ops.push(Operator::embed_local(&asym, &s, m)?);
                    }
                }
            }
        }
        Ok(GeneratorSet {
            m,
            k,
            sectoring,
            ops,
        })
    }

    /// Same set in reversed enumeration order (determinism checks).
    pub fn reversed(&self) -> Self {
        let mut g = self.clone();
        g.ops.reverse();
        g
    }
}

fn local_to_global(c: BitString, s: &[u8], m: u8) -> BitString {
    let mut b = BitString::zeros(m);
    for (t, &j) in s.iter().enumerate() {
        b = b.with_bit(j, c.get(t as u8 + 1));
    }
    b
}

/// The computed Lie algebra: an exactly pairwise-orthogonal (unnormalized)
/// basis plus the coordinate system it lives in.
pub struct Subspace {
    index: CoordIndex,
    ortho: Vec<(SparseVec, Rational)>,
    ops: Vec<Operator>,
}

impl Subspace {
    pub fn m(&self) -> u8 {
        self.index.m
    }

    pub fn dim(&self) -> usize {
        self.ortho.len()
    }

    pub fn basis(&self) -> &[Operator] {
        &self.ops
    }

    pub fn index(&self) -> &CoordIndex {
        &self.index
    }

    fn from_rows(index: CoordIndex, rows: &[SparseVec]) -> Self {
        let mut ortho: Vec<(SparseVec, Rational)> = Vec::with_capacity(rows.len());
        for row in rows {
            let mut v = row.clone();
            for (u, n2) in &ortho {
                let d = index.weighted_dot(u, &v);
                if !d.is_zero() {
                    axpy(&mut v, &(-(d / n2)), u);
                }
            }
            let n2 = index.weighted_dot(&v, &v);
            debug_assert!(!n2.is_zero(), "independent rows cannot collapse");
            ortho.push((v, n2));
        }
        let ops = ortho.iter().map(|(v, _)| index.op_from_coords(v)).collect();
        Subspace { index, ortho, ops }
    }

    /// Exact span membership: project and test the residual for zero.
    pub fn contains(&self, a: &Operator) -> Result<bool> {
        if a.m() != self.index.m {
            return Err(Error::DimensionMismatch(a.m(), self.index.m));
        }
        if a.is_zero() {
            return Ok(true);
        }
        let Some(mut v) = self.index.coordinatize(a) else {
            return Ok(false);
        };
        for (u, n2) in &self.ortho {
            let d = self.index.weighted_dot(u, &v);
            if !d.is_zero() {
                axpy(&mut v, &(-(d / n2)), u);
            }
        }
        Ok(v.is_empty())
    }
}

/// Saturates commutators over the generator span until it is bracket-closed.
///
/// Deterministic for fixed generator content and order, independent of
/// `threads`: brackets of a frontier element against all earlier basis
/// elements may run in parallel, but insertion happens serially in partner
/// order.
pub fn lie_closure(gens: &GeneratorSet, threads: usize) -> Result<Subspace> {
    if gens.ops.is_empty() {
        return Err(Error::EmptyGeneratorSet);
    }
    let index = CoordIndex::new(gens.m, gens.sectoring.clone());
    let ambient = index.dim();
    let mut rref = Rref::default();
    let mut elems: Vec<Operator> = Vec::new();
    let mut masks: Vec<u16> = Vec::new();
    let absorb = |op_coords: SparseVec,
                      rref: &mut Rref,
                      elems: &mut Vec<Operator>,
                      masks: &mut Vec<u16>| {
        if rref.insert(op_coords) {
            // keep the reduced representative: same span, sparser brackets
            let rep = index.op_from_coords(rref.rows.last().expect("row just inserted"));
            masks.push(rep.support_mask());
            elems.push(rep);
            assert!(rref.rank() <= ambient, "rank exceeded the ambient bound");
        }
    };
    for g in &gens.ops {
        let v = index
            .coordinatize(g)
            .ok_or_else(|| Error::Invalid("generator outside the symmetric ambient space".into()))?;
        absorb(v, &mut rref, &mut elems, &mut masks);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    pool.install(|| -> Result<()> {
        let mut t = 1usize;
        while t < elems.len() && rref.rank() < ambient {
            let brackets: Vec<Option<Operator>> = (0..t)
                .into_par_iter()
                .map(|s| -> Result<Option<Operator>> {
                    if masks[t] & masks[s] == 0 {
                        return Ok(None); // disjoint supports commute
                    }
                    let c = commutator(&elems[t], &elems[s])?;
                    Ok(if c.is_zero() { None } else { Some(c) })
                })
                .collect::<Result<_>>()?;
            for c in brackets.into_iter().flatten() {
                let v = index
                    .coordinatize(&c)
                    .expect("brackets stay inside the ambient space");
                absorb(v, &mut rref, &mut elems, &mut masks);
                if rref.rank() == ambient {
                    break;
                }
            }
            t += 1;
        }
        Ok(())
    })?;
    Ok(Subspace::from_rows(index, &rref.rows))
}

// ---------------------------------------------------------------------------
// floating cross-check

type FloatOp = BTreeMap<(u16, u16), Complex64>;

const FLOAT_PRUNE: f64 = 1e-12;
const FLOAT_RANK_TOL: f64 = 1e-9;

fn float_from_op(a: &Operator) -> FloatOp {
    a.terms()
        .map(|(&(bra, ket), c)| {
            let (re, im) = c.to_f64s();
            ((bra.bits(), ket.bits()), Complex64::new(re, im))
        })
        .collect()
}

fn float_mul(a: &FloatOp, b: &FloatOp) -> FloatOp {
    let mut by_bra: BTreeMap<u16, Vec<(u16, Complex64)>> = BTreeMap::new();
    for (&(bra, ket), &c) in b {
        by_bra.entry(bra).or_default().push((ket, c));
    }
    let mut out = FloatOp::new();
    for (&(bra, ket), &ca) in a {
        if let Some(hits) = by_bra.get(&ket) {
            for &(kb, cb) in hits {
                *out.entry((bra, kb)).or_insert(Complex64::new(0.0, 0.0)) += ca * cb;
            }
        }
    }
    out.retain(|_, v| v.norm() > FLOAT_PRUNE);
    out
}

fn float_commutator(a: &FloatOp, b: &FloatOp) -> FloatOp {
    let mut out = float_mul(a, b);
    for (k, v) in float_mul(b, a) {
        *out.entry(k).or_insert(Complex64::new(0.0, 0.0)) -= v;
    }
    out.retain(|_, v| v.norm() > FLOAT_PRUNE);
    out
}

fn float_coords(a: &FloatOp, index: &CoordIndex) -> Vec<f64> {
    let m = index.m;
    let mut v = vec![0.0; index.dim()];
    for (&(bra, ket), c) in a {
        let b = BitString::new(bra, m).expect("stored key in range");
        let bp = BitString::new(ket, m).expect("stored key in range");
        if b == bp {
            v[index.diag[&b] as usize] = c.im;
        } else if b < bp {
            if let Some(&sym) = index.pairs.get(&(b, bp)) {
                v[sym as usize] = c.im;
                v[sym as usize + 1] = c.re;
            }
        }
    }
    v
}

/// Closure dimension recomputed in f64 (modified Gram–Schmidt with relative
/// rank tolerance). Cross-check only; any disagreement with the exact engine
/// is a hard error at the call site.
pub fn lie_closure_dim_float(gens: &GeneratorSet) -> Result<usize> {
    if gens.ops.is_empty() {
        return Err(Error::EmptyGeneratorSet);
    }
    let index = CoordIndex::new(gens.m, gens.sectoring.clone());
    let ambient = index.dim();
    let mut ortho: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut elems: Vec<FloatOp> = Vec::new();
    let mut max_norm: f64 = 0.0;
    let absorb = |op: FloatOp,
                      ortho: &mut Vec<(Vec<f64>, f64)>,
                      elems: &mut Vec<FloatOp>,
                      max_norm: &mut f64| {
        let mut v = float_coords(&op, &index);
        let full: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        *max_norm = max_norm.max(full);
        for (u, n2) in ortho.iter() {
            let d: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            if d != 0.0 {
                let c = d / n2;
                for (slot, ui) in v.iter_mut().zip(u) {
                    *slot -= c * ui;
                }
            }
        }
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2.sqrt() > FLOAT_RANK_TOL * max_norm.max(1.0) {
            ortho.push((v, n2));
            elems.push(op);
        }
    };
    for g in &gens.ops {
        absorb(float_from_op(g), &mut ortho, &mut elems, &mut max_norm);
    }
    let mut t = 1usize;
    while t < elems.len() && ortho.len() < ambient {
        for s in 0..t {
            let c = float_commutator(&elems[t], &elems[s]);
            if c.is_empty() {
                continue;
            }
            absorb(c, &mut ortho, &mut elems, &mut max_norm);
            if ortho.len() == ambient {
                break;
            }
        }
        t += 1;
    }
    Ok(ortho.len())
}
