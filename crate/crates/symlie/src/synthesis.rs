//! Constructive bracket-expression certificates: explicit nested commutators
//! of k-local symmetric generators that evaluate exactly to diagonal targets
//! iZᵇ (odd and even modulus variants) and off-diagonal targets
//! F(b, b′) = |b⟩⟨b′| − |b′⟩⟨b|.
//!
//! Every scalar appearing in an inductive step is determined at construction
//! time by exact projection of the actually-computed bracket onto the target
//! direction; printed closed-form constants are never assumed. Shared
//! subexpressions are deduplicated through `Rc` nodes (memoized per target),
//! so certificate size stays polynomial in m.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::rc::Rc;

use num_traits::Zero;

use crate::bits::BitString;
use crate::operator::{commutator, i_z_string, linear_combine, Operator};
use crate::scalar::{Rational, Scalar};
use crate::symmetry::{is_symmetric, LValue};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LeafTag {
    /// A k-local symmetric skew-Hermitian generator.
    Generator,
    /// i|b⟩⟨b|, admitted only by the off-diagonal construction (which
    /// generates 𝔥ₘᴳ from the diagonal units together with 𝔥ₖᴳ).
    AuxDiagonal,
}

#[derive(Debug)]
pub enum ExprNode {
    Leaf { op: Operator, tag: LeafTag },
    Bracket(BracketExpr, BracketExpr),
    /// Real-rational combination; an empty list denotes zero.
    LinComb(Vec<(Rational, BracketExpr)>),
}

/// A shared, immutable bracket-expression tree.
#[derive(Clone, Debug)]
pub struct BracketExpr(Rc<ExprNode>);

impl BracketExpr {
    pub fn generator(op: Operator) -> Self {
        BracketExpr(Rc::new(ExprNode::Leaf {
            op,
            tag: LeafTag::Generator,
        }))
    }

    pub fn aux_diagonal(b: BitString) -> Self {
        let op = Operator::matrix_unit(b, b)
            .expect("equal bit widths")
            .scaled(&Scalar::i());
        BracketExpr(Rc::new(ExprNode::Leaf {
            op,
            tag: LeafTag::AuxDiagonal,
        }))
    }

    pub fn bracket(left: BracketExpr, right: BracketExpr) -> Self {
        BracketExpr(Rc::new(ExprNode::Bracket(left, right)))
    }

    pub fn lincomb(terms: Vec<(Rational, BracketExpr)>) -> Self {
        BracketExpr(Rc::new(ExprNode::LinComb(terms)))
    }

    pub fn node(&self) -> &ExprNode {
        &self.0
    }

    fn key(&self) -> usize {
        Rc::as_ptr(&self.0) as usize
    }

    /// Walks the tree once per shared node.
    fn visit(&self, seen: &mut HashSet<usize>, f: &mut impl FnMut(&ExprNode)) {
        if !seen.insert(self.key()) {
            return;
        }
        f(&self.0);
        match &*self.0 {
            ExprNode::Leaf { .. } => {}
            ExprNode::Bracket(l, r) => {
                l.visit(seen, f);
                r.visit(seen, f);
            }
            ExprNode::LinComb(terms) => {
                for (_, e) in terms {
                    e.visit(seen, f);
                }
            }
        }
    }

    pub fn uses_aux(&self) -> bool {
        let mut found = false;
        self.visit(&mut HashSet::new(), &mut |n| {
            if matches!(
                n,
                ExprNode::Leaf {
                    tag: LeafTag::AuxDiagonal,
                    ..
                }
            ) {
                found = true;
            }
        });
        found
    }

    /// Soundness of the leaves alone, independent of the construction logic:
    /// generator leaves are ≤ k-local, skew-Hermitian, symmetric under `l`;
    /// auxiliary leaves are of the form i|b⟩⟨b| and only allowed when
    /// `allow_aux` is set.
    pub fn check_leaves(&self, k: u8, l: LValue, allow_aux: bool) -> Result<()> {
        let mut problem: Option<Error> = None;
        self.visit(&mut HashSet::new(), &mut |n| {
            if problem.is_some() {
                return;
            }
            if let ExprNode::Leaf { op, tag } = n {
                match tag {
                    LeafTag::Generator => {
                        if op.locality() > k as usize {
                            problem = Some(Error::MalformedCertificate(format!(
                                "generator leaf has locality {} > k = {k}",
                                op.locality()
                            )));
                        } else if !op.is_skew_hermitian() {
                            problem = Some(Error::MalformedCertificate(
                                "generator leaf is not skew-Hermitian".into(),
                            ));
                        } else if !is_symmetric(op, l) {
                            problem = Some(Error::MalformedCertificate(
                                "generator leaf is not symmetric".into(),
                            ));
                        }
                    }
                    LeafTag::AuxDiagonal => {
                        let well_formed = op.num_terms() == 1
                            && op
                                .terms()
                                .all(|(&(b, bp), c)| b == bp && *c == Scalar::i());
                        if !allow_aux {
                            problem = Some(Error::MalformedCertificate(
                                "auxiliary diagonal leaf not allowed here".into(),
                            ));
                        } else if !well_formed {
                            problem = Some(Error::MalformedCertificate(
                                "auxiliary leaf is not of the form i|b⟩⟨b|".into(),
                            ));
                        }
                    }
                }
            }
        });
        match problem {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Recursive exact evaluation, memoized over shared nodes.
pub fn eval_expr(e: &BracketExpr, m: u8) -> Result<Operator> {
    fn go(e: &BracketExpr, m: u8, memo: &mut HashMap<usize, Operator>) -> Result<Operator> {
        if let Some(v) = memo.get(&e.key()) {
            return Ok(v.clone());
        }
        let v = match e.node() {
            ExprNode::Leaf { op, .. } => {
                if op.m() != m {
                    return Err(Error::MalformedCertificate(format!(
                        "leaf on {} qubits inside an m = {m} certificate",
                        op.m()
                    )));
                }
                op.clone()
            }
            ExprNode::Bracket(l, r) => commutator(&go(l, m, memo)?, &go(r, m, memo)?)?,
            ExprNode::LinComb(terms) => {
                if terms.is_empty() {
                    Operator::zero(m)
                } else {
                    let pairs: Vec<(Scalar, Operator)> = terms
                        .iter()
                        .map(|(c, e)| Ok((Scalar::real(c.clone()), go(e, m, memo)?)))
                        .collect::<Result<_>>()?;
                    linear_combine(&pairs)?
                }
            }
        };
        memo.insert(e.key(), v.clone());
        Ok(v)
    }
    go(e, m, &mut HashMap::new())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Odd,
    Even,
}

/// The ladder operators attached to a weight-n string b.
///
/// alpha_b = (i/2)(σ₊ᵇ + σ₋ᵇ) and beta_b = (1/2)(σ₊ᵇ − σ₋ᵇ) raise/lower all
/// of supp(b) at once; a_b is the diagonal partner (a projector string for
/// the odd variant, (i/2)(P₀ᵇ − P₁ᵇ) for the even one). The relations
/// [a, α] = −β and [a, β] = α are verified exactly at construction, and the
/// diagonal expansion of [α, β] is computed rather than assumed.
#[derive(Clone, Debug)]
pub struct LadderTriple {
    pub b: BitString,
    pub parity: Parity,
    pub a_b: Operator,
    pub alpha_b: Operator,
    pub beta_b: Operator,
    /// [alpha_b, beta_b], exact.
    pub alpha_beta: Operator,
    /// Coefficient of iZᵇ in [alpha_b, beta_b] (zero when w(b) is even).
    pub z_coefficient: Rational,
    /// Coefficient of the heaviest iZ-strings present in [alpha_b, beta_b];
    /// always nonzero.
    pub leading_coefficient: Rational,
}

pub fn ladder_triple(b: BitString, n: u8, parity: Parity) -> Result<LadderTriple> {
    if b.weight() != n {
        return Err(Error::WeightMismatch {
            got: b.weight(),
            expected: n,
        });
    }
    if n < 2 {
        return Err(Error::UnsupportedRegime(
            "ladder triples need weight >= 2 (the weight-1 variant degenerates)".into(),
        ));
    }
    let m = b.m();
    let supp = b.support();
    let lower_local = Operator::matrix_unit(BitString::zeros(n), BitString::ones(n))?;
    let lower = Operator::embed_local(&lower_local, &supp, m)?;
    let raise = lower.dagger();
    let alpha_b = lower.add(&raise)?.scaled(&Scalar::from_imag_ratio(1, 2));
    let beta_b = lower.sub(&raise)?.scaled(&Scalar::from_ratio(1, 2));
    let a_b = match parity {
        Parity::Odd => {
            // clear the largest set index of b
            let tilde_supp = &supp[..supp.len() - 1];
            let p0 = Operator::matrix_unit(BitString::zeros(n - 1), BitString::zeros(n - 1))?;
            Operator::embed_local(&p0, tilde_supp, m)?.scaled(&Scalar::i())
        }
        Parity::Even => {
            let p0 = Operator::matrix_unit(BitString::zeros(n), BitString::zeros(n))?;
            let p1 = Operator::matrix_unit(BitString::ones(n), BitString::ones(n))?;
            Operator::embed_local(&p0, &supp, m)?
                .sub(&Operator::embed_local(&p1, &supp, m)?)?
                .scaled(&Scalar::from_imag_ratio(1, 2))
        }
    };
    assert_eq!(
        commutator(&a_b, &alpha_b)?,
        beta_b.neg(),
        "[a, alpha] = -beta must hold exactly"
    );
    assert_eq!(
        commutator(&a_b, &beta_b)?,
        alpha_b,
        "[a, beta] = alpha must hold exactly"
    );
    let alpha_beta = commutator(&alpha_b, &beta_b)?;
    let zx = alpha_beta.z_expansion()?;
    let z_coefficient = zx.get(&b).cloned().unwrap_or_else(Rational::zero);
    let top = zx.keys().map(|d| d.weight()).max().expect("nonzero bracket");
    let leading_coefficient = zx
        .iter()
        .find(|(d, _)| d.weight() == top)
        .map(|(_, r)| r.clone())
        .expect("leading term exists");
    Ok(LadderTriple {
        b,
        parity,
        a_b,
        alpha_b,
        beta_b,
        alpha_beta,
        z_coefficient,
        leading_coefficient,
    })
}

/// A certificate together with its (construction-time) exact evaluation.
#[derive(Clone)]
struct Cert {
    expr: BracketExpr,
    val: Operator,
}

struct Synth {
    m: u8,
    n: u8,
    k: u8,
    parity: Parity,
    memo: HashMap<BitString, Cert>,
}

impl Synth {
    fn new(m: u8, n: u8, k: u8, parity: Parity) -> Result<Self> {
        if k > m || k < 2 {
            return Err(Error::LocalityOutOfRange { k, m });
        }
        if n < 2 || n > k || n >= m {
            return Err(Error::UnsupportedRegime(format!(
                "synthesis needs 2 <= n <= k and n < m (got n = {n}, k = {k}, m = {m})"
            )));
        }
        match parity {
            Parity::Odd if n % 2 == 0 => Err(Error::UnsupportedRegime(format!(
                "odd-variant synthesis requested with even n = {n}"
            ))),
            Parity::Even if n % 2 == 1 => Err(Error::UnsupportedRegime(format!(
                "even-variant synthesis requested with odd n = {n}"
            ))),
            _ => Ok(Synth {
                m,
                n,
                k,
                parity,
                memo: HashMap::new(),
            }),
        }
    }

    /// Certificate for a real diagonal combination Σ r_d·iZᵈ.
    fn cert_combo(&mut self, zx: &BTreeMap<BitString, Rational>) -> Result<Cert> {
        let mut terms = Vec::with_capacity(zx.len());
        let mut pairs = Vec::with_capacity(zx.len());
        for (d, r) in zx {
            if r.is_zero() {
                continue;
            }
            let c = self.cert_z(*d)?;
            terms.push((r.clone(), c.expr));
            pairs.push((Scalar::real(r.clone()), c.val));
        }
        let val = if pairs.is_empty() {
            Operator::zero(self.m)
        } else {
            linear_combine(&pairs)?
        };
        Ok(Cert {
            expr: BracketExpr::lincomb(terms),
            val,
        })
    }

    /// Certificate evaluating exactly to iZᵇ, by induction on w(b).
    fn cert_z(&mut self, b: BitString) -> Result<Cert> {
        if let Some(c) = self.memo.get(&b) {
            return Ok(c.clone());
        }
        let target = i_z_string(b);
        let cert = if b.weight() as usize <= self.k as usize {
            Cert {
                expr: BracketExpr::generator(target.clone()),
                val: target.clone(),
            }
        } else {
            match self.parity {
                Parity::Odd => self.step_odd(b)?,
                Parity::Even => self.step_even(b)?,
            }
        };
        assert_eq!(cert.val, target, "certificate must evaluate to iZ^b");
        self.memo.insert(b, cert.clone());
        Ok(cert)
    }

    /// Odd inductive step: build [[A_{b₁}Z^{b₂}, β_{b₁}], β_{b₁}], whose
    /// diagonal expansion contains iZᵇ with a nonzero coefficient, and
    /// subtract the lower-weight remainder recursively.
    fn step_odd(&mut self, b: BitString) -> Result<Cert> {
        let supp = b.support();
        let b1 = BitString::indicator(&supp[..self.n as usize], self.m)?;
        let b2 = b.xor(&b1);
        let t = ladder_triple(b1, self.n, Parity::Odd)?;
        let az = t.a_b.mul(&Operator::z_string(b2))?;
        let c_az = self.cert_combo(&az.z_expansion()?)?;
        let beta_leaf = BracketExpr::generator(t.beta_b.clone());
        let e1 = BracketExpr::bracket(c_az.expr, beta_leaf.clone());
        let v1 = commutator(&az, &t.beta_b)?;
        let e2 = BracketExpr::bracket(e1, beta_leaf);
        let v2 = commutator(&v1, &t.beta_b)?;
        self.extract_target(b, e2, v2)
    }

    /// Splits v = c·iZᵇ + (strictly lower-weight diagonal), subtracts the
    /// remainder recursively, scales by the exactly-computed 1/c.
    fn extract_target(&mut self, b: BitString, expr: BracketExpr, v: Operator) -> Result<Cert> {
        let mut zx = v.z_expansion()?;
        let c = zx.remove(&b).filter(|c| !c.is_zero()).ok_or_else(|| {
            Error::Invalid("constructed bracket has no component along the target".into())
        })?;
        for d in zx.keys() {
            assert!(d.weight() < b.weight(), "remainder must have lower weight");
        }
        let rest = self.cert_combo(&zx)?;
        let inv = c.recip();
        let expr = BracketExpr::lincomb(vec![(inv.clone(), expr), (-inv.clone(), rest.expr)]);
        let val = linear_combine(&[
            (Scalar::real(inv.clone()), v),
            (Scalar::real(-inv), rest.val),
        ])?;
        Ok(Cert { expr, val })
    }

    /// Even inductive step: the symmetrized sums over n-subsets A of
    /// J = supp(b) ∪ {one extra index}, combined by an exactly-solved 2×2
    /// elimination (the binomial coefficients of the proof, recomputed).
    fn step_even(&mut self, b: BitString) -> Result<Cert> {
        let l = b.weight();
        assert!(l < self.m, "excluded target must be caught earlier");
        let extra = (1..=self.m)
            .find(|&j| !b.get(j))
            .expect("some qubit is outside supp(b)");
        let mut j_set: Vec<u8> = b.support();
        j_set.push(extra);
        j_set.sort_unstable();
        let mut sum1: Vec<Cert> = Vec::new(); // subsets containing `extra`
        let mut sum2: Vec<Cert> = Vec::new(); // subsets avoiding `extra`
        for a_set in combinations(&j_set, self.n as usize) {
            let s_a = self.symmetrized_term(&j_set, &a_set)?;
            if a_set.contains(&extra) {
                sum1.push(s_a);
            } else {
                sum2.push(s_a);
            }
        }
        let combine = |parts: &[Cert], m: u8| -> Result<Cert> {
            let expr = BracketExpr::lincomb(
                parts
                    .iter()
                    .map(|c| (Rational::from_integer(1.into()), c.expr.clone()))
                    .collect(),
            );
            let val = if parts.is_empty() {
                Operator::zero(m)
            } else {
                linear_combine(
                    &parts
                        .iter()
                        .map(|c| (Scalar::one(), c.val.clone()))
                        .collect::<Vec<_>>(),
                )?
            };
            Ok(Cert { expr, val })
        };
        let s1 = combine(&sum1, self.m)?;
        let s2 = combine(&sum2, self.m)?;
        let zx1 = s1.val.z_expansion()?;
        let zx2 = s2.val.z_expansion()?;
        let a = zx1
            .get(&b)
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::Invalid("symmetrized sum misses the target".into()))?
            .clone();
        assert!(
            !zx2.contains_key(&b),
            "the j_p-avoiding sum has no target component"
        );
        let u = a.recip();
        // u·zx1 + v·zx2 must cancel on every other string; the proof's
        // symmetry makes the required v unique and consistent
        let mut v: Option<Rational> = None;
        for (d, c1) in &zx1 {
            if d == &b {
                continue;
            }
            let c2 = zx2
                .get(d)
                .filter(|c| !c.is_zero())
                .ok_or_else(|| Error::Invalid("cannot eliminate a residual string".into()))?;
            let cand = -(&u * c1) / c2;
            match &v {
                None => v = Some(cand),
                Some(prev) => assert_eq!(prev, &cand, "elimination ratio must be uniform"),
            }
        }
        let v = v.unwrap_or_else(Rational::zero);
        for (d, c2) in &zx2 {
            assert!(
                zx1.contains_key(d) || (&v * c2).is_zero(),
                "second sum introduces no new strings"
            );
        }
        let expr = BracketExpr::lincomb(vec![(u.clone(), s1.expr), (v.clone(), s2.expr)]);
        let val = linear_combine(&[
            (Scalar::real(u), s1.val),
            (Scalar::real(v), s2.val),
        ])?;
        Ok(Cert { expr, val })
    }

    /// The weight-l part of A_{1_A}·Z^{J∖A}, certified through the bracket
    /// chain A·Z^{b₂} → α·Z^{b₂} → β·Z^{b₂}Z_{j_e} → A·Z^{b₂}Z_{j_e}.
    fn symmetrized_term(&mut self, j_set: &[u8], a_set: &[u8]) -> Result<Cert> {
        let rest: Vec<u8> = j_set.iter().copied().filter(|j| !a_set.contains(j)).collect();
        let j_e = *rest.last().expect("J is strictly larger than A");
        let b1 = BitString::indicator(a_set, self.m)?;
        let b2 = BitString::indicator(&rest[..rest.len() - 1], self.m)?;
        let t = ladder_triple(b1, self.n, Parity::Even)?;
        let az = t.a_b.mul(&Operator::z_string(b2))?;
        let c_az = self.cert_combo(&az.z_expansion()?)?;
        let e1 = BracketExpr::bracket(c_az.expr, BracketExpr::generator(t.beta_b.clone()));
        let v1 = commutator(&az, &t.beta_b)?;
        // A_{b₁}Z_{j_e} expands into iZ-strings of weight ≤ n ≤ k: a direct
        // combination of base-case leaves
        let az_je = t
            .a_b
            .mul(&Operator::z_string(BitString::indicator(&[j_e], self.m)?))?;
        let c_az_je = self.cert_combo(&az_je.z_expansion()?)?;
        let e2 = BracketExpr::bracket(e1, c_az_je.expr);
        let v2 = commutator(&v1, &az_je)?;
        let e3 = BracketExpr::bracket(e2, BracketExpr::generator(t.alpha_b.clone()));
        let v3 = commutator(&v2, &t.alpha_b)?;
        // keep the weight-l strings; recurse away the lighter remainder
        let l = j_set.len() as u8 - 1;
        let zx = v3.z_expansion()?;
        let mut low = BTreeMap::new();
        let mut keep = Operator::zero(self.m);
        for (d, r) in &zx {
            if d.weight() == l {
                keep = keep.add(&i_z_string(*d).scaled(&Scalar::real(r.clone())))?;
            } else {
                assert!(d.weight() < l, "no overweight strings can appear");
                low.insert(*d, r.clone());
            }
        }
        let c_low = self.cert_combo(&low)?;
        let one = Rational::from_integer(1.into());
        let expr = BracketExpr::lincomb(vec![(one.clone(), e3), (-one, c_low.expr)]);
        let val = v3.sub(&c_low.val)?;
        assert_eq!(val, keep);
        Ok(Cert { expr, val })
    }
}

fn combinations(items: &[u8], n: usize) -> Vec<Vec<u8>> {
    use itertools::Itertools;
    items.iter().copied().combinations(n).collect()
}

/// Certificate with generator leaves only, evaluating exactly to iZᵇ, for
/// odd n.
pub fn synth_diag_odd(b: BitString, m: u8, n: u8, k: u8) -> Result<BracketExpr> {
    if b.m() != m {
        return Err(Error::DimensionMismatch(b.m(), m));
    }
    let mut s = Synth::new(m, n, k, Parity::Odd)?;
    Ok(s.cert_z(b)?.expr)
}

/// Certificate with generator leaves only, evaluating exactly to iZᵇ, for
/// even n; the full string iZ^{⊗m} is provably outside 𝔥ₖᴳ and rejected.
pub fn synth_diag_even(b: BitString, m: u8, n: u8, k: u8) -> Result<BracketExpr> {
    if b.m() != m {
        return Err(Error::DimensionMismatch(b.m(), m));
    }
    if b.weight() == m {
        return Err(Error::ExcludedTarget);
    }
    let mut s = Synth::new(m, n, k, Parity::Even)?;
    Ok(s.cert_z(b)?.expr)
}

/// Certificate for F(b, b′) = |b⟩⟨b′| − |b′⟩⟨b| over generator leaves plus
/// auxiliary diagonal units i|c⟩⟨c|, following the transposition /
/// weight-raising / transitivity moves.
pub fn synth_offdiag(b: BitString, bp: BitString, m: u8, n: u8, k: u8) -> Result<BracketExpr> {
    if b.m() != m || bp.m() != m {
        return Err(Error::DimensionMismatch(b.m().max(bp.m()), m));
    }
    if b == bp {
        return Err(Error::IdenticalTargets);
    }
    if k > m || k < 2 {
        return Err(Error::LocalityOutOfRange { k, m });
    }
    if n < 1 || n > k || n >= m {
        return Err(Error::UnsupportedRegime(format!(
            "off-diagonal synthesis needs 1 <= n <= k and n < m (got n = {n}, k = {k}, m = {m})"
        )));
    }
    if (b.weight() % n) != (bp.weight() % n) {
        return Err(Error::IncongruentWeights(
            b.to_string(),
            bp.to_string(),
            n as u32,
        ));
    }
    // build F(lo, hi) with w(lo) ≤ w(hi), then orient
    let (lo, hi, flipped) = if b.weight() <= bp.weight() {
        (b, bp, false)
    } else {
        (bp, b, true)
    };
    let mut chain: Option<Cert> = None; // F(lo, current)
    let mut current = lo;
    // raise the weight n bits at a time, preferring positions inside
    // supp(hi) so that the final permutation stage stays short
    while current.weight() < hi.weight() {
        let mut chosen: Vec<u8> = (1..=m)
            .filter(|&j| !current.get(j) && hi.get(j))
            .take(n as usize)
            .collect();
        if chosen.len() < n as usize {
            let extras: Vec<u8> = (1..=m)
                .filter(|&j| !current.get(j) && !chosen.contains(&j))
                .take(n as usize - chosen.len())
                .collect();
            chosen.extend(extras);
        }
        assert_eq!(chosen.len(), n as usize, "enough zero positions exist");
        let next = current.or(&BitString::indicator(&chosen, m)?);
        let step = raise_move(current, &chosen, m, n)?;
        chain = Some(compose(chain, step, lo, current, next)?);
        current = next;
    }
    // permutation stage: transpositions shrinking the mismatch with hi
    while current != hi {
        let r = (1..=m)
            .find(|&j| current.get(j) && !hi.get(j))
            .expect("mismatch implies a surplus bit");
        let s = (1..=m)
            .find(|&j| !current.get(j) && hi.get(j))
            .expect("mismatch implies a missing bit");
        let next = current.with_bit(r, false).with_bit(s, true);
        let step = transposition_move(current, r, s, m)?;
        chain = Some(compose(chain, step, lo, current, next)?);
        current = next;
    }
    let cert = chain.expect("b != b' guarantees at least one move");
    let target = Operator::f_op(b, bp)?;
    let (expr, val) = if flipped {
        let minus_one = -Rational::from_integer(1.into());
        let val = cert.val.neg();
        (
            BracketExpr::lincomb(vec![(minus_one, cert.expr)]),
            val,
        )
    } else {
        (cert.expr, cert.val)
    };
    assert_eq!(val, target, "off-diagonal certificate must match exactly");
    Ok(expr)
}

/// F(c, c ∪ chosen) from 2·[α_d, i|c⟩⟨c|], oriented by evaluation.
fn raise_move(c: BitString, chosen: &[u8], m: u8, n: u8) -> Result<Cert> {
    let d = BitString::indicator(chosen, m)?;
    let t = ladder_triple(d, n, if n % 2 == 1 { Parity::Odd } else { Parity::Even });
    let alpha = match t {
        Ok(t) => t.alpha_b,
        Err(_) => {
            // n = 1: α reduces to (i/2)(X on the chosen qubit); build directly
            let lower = Operator::embed_local(
                &Operator::matrix_unit(BitString::zeros(1), BitString::ones(1))?,
                chosen,
                m,
            )?;
            lower
                .add(&lower.dagger())?
                .scaled(&Scalar::from_imag_ratio(1, 2))
        }
    };
    let diag = Operator::matrix_unit(c, c)?.scaled(&Scalar::i());
    let two = Rational::from_integer(2.into());
    let expr = BracketExpr::lincomb(vec![(
        two.clone(),
        BracketExpr::bracket(
            BracketExpr::generator(alpha.clone()),
            BracketExpr::aux_diagonal(c),
        ),
    )]);
    let val = commutator(&alpha, &diag)?.scaled(&Scalar::real(two));
    orient(expr, val, c, c.or(&d))
}

/// F(c, c with bits r and s swapped) from [i(X_rX_s + Y_rY_s)/2, i|c⟩⟨c|].
fn transposition_move(c: BitString, r: u8, s: u8, m: u8) -> Result<Cert> {
    let xx = Operator::pauli_x(r, m).mul(&Operator::pauli_x(s, m))?;
    let yy = Operator::pauli_y(r, m).mul(&Operator::pauli_y(s, m))?;
    let swap = xx.add(&yy)?.scaled(&Scalar::from_imag_ratio(1, 2));
    let diag = Operator::matrix_unit(c, c)?.scaled(&Scalar::i());
    let expr = BracketExpr::bracket(
        BracketExpr::generator(swap.clone()),
        BracketExpr::aux_diagonal(c),
    );
    let val = commutator(&swap, &diag)?;
    let next = c.with_bit(r, !c.get(r)).with_bit(s, !c.get(s));
    orient(expr, val, c, next)
}

/// Normalizes a move's sign so it evaluates to F(from, to).
fn orient(expr: BracketExpr, val: Operator, from: BitString, to: BitString) -> Result<Cert> {
    let want = Operator::f_op(from, to)?;
    if val == want {
        return Ok(Cert { expr, val });
    }
    assert_eq!(val, want.neg(), "move must produce the pair up to sign");
    let minus_one = -Rational::from_integer(1.into());
    Ok(Cert {
        expr: BracketExpr::lincomb(vec![(minus_one, expr)]),
        val: want,
    })
}

/// Transitivity: F(lo, next) = [F(lo, current), F(current, next)]; the first
/// move starts the chain directly.
fn compose(
    chain: Option<Cert>,
    step: Cert,
    lo: BitString,
    current: BitString,
    next: BitString,
) -> Result<Cert> {
    match chain {
        None => Ok(step),
        Some(prev) => {
            debug_assert!(lo != current && next != current, "middle differs from ends");
            let val = commutator(&prev.val, &step.val)?;
            let expr = BracketExpr::bracket(prev.expr, step.expr);
            assert_eq!(val, Operator::f_op(lo, next)?, "transitivity step");
            Ok(Cert { expr, val })
        }
    }
}
