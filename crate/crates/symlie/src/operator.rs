//! Sparse exact operator algebra in the matrix-unit basis, with Pauli-string
//! expansion on demand.

use std::collections::BTreeMap;
use std::fmt;


use crate::bits::BitString;
use crate::scalar::{Rational, Scalar};
use crate::Error;

/// Sparse complex-rational linear combination of matrix units |b⟩⟨b′| on `m`
/// qubits. No stored coefficient is zero; iteration is lexicographic by
/// (bra, ket).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Operator {
    m: u8,
    terms: BTreeMap<(BitString, BitString), Scalar>,
}

impl Operator {
    pub fn zero(m: u8) -> Self {
        Operator {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(m: u8) -> Self {
        let mut op = Operator::zero(m);
        for b in BitString::all(m) {
            op.terms.insert((b, b), Scalar::one());
        }
        op
    }

    /// |bra⟩⟨ket|.
    pub fn matrix_unit(bra: BitString, ket: BitString) -> Result<Self, Error> {
        if bra.m() != ket.m() {
            return Err(Error::DimensionMismatch(bra.m(), ket.m()));
        }
        let mut op = Operator::zero(bra.m());
        op.terms.insert((bra, ket), Scalar::one());
        Ok(op)
    }

    /// F(b, b′) = |b⟩⟨b′| − |b′⟩⟨b|.
    pub fn f_op(b: BitString, bp: BitString) -> Result<Self, Error> {
        let mut op = Operator::matrix_unit(b, bp)?;
        op.add_term(bp, b, Scalar::from_int(-1));
        Ok(op)
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(BitString, BitString), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, bra: BitString, ket: BitString) -> Scalar {
        self.terms
            .get(&(bra, ket))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Accumulates `c·|bra⟩⟨ket|`, pruning a resulting zero.
    pub fn add_term(&mut self, bra: BitString, ket: BitString, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((bra, ket)).or_insert_with(Scalar::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&(bra, ket));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Operator::zero(self.m);
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (*k, v * c))
            .collect();
        Operator { m: self.m, terms }
    }

    pub fn add(&self, other: &Operator) -> Result<Operator, Error> {
        linear_combine(&[
            (Scalar::one(), self.clone()),
            (Scalar::one(), other.clone()),
        ])
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator, Error> {
        linear_combine(&[
            (Scalar::one(), self.clone()),
            (Scalar::from_int(-1), other.clone()),
        ])
    }

    pub fn neg(&self) -> Operator {
        self.scaled(&Scalar::from_int(-1))
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Operator {
        let mut out = Operator::zero(self.m);
        for (&(bra, ket), c) in &self.terms {
            out.terms.insert((ket, bra), c.conj());
        }
        out
    }

    pub fn is_skew_hermitian(&self) -> bool {
        self.dagger() == self.neg()
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|(b, bp)| b == bp)
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for (&(bra, ket), c) in &self.terms {
            if bra == ket {
                t = &t + c;
            }
        }
        t
    }

    /// Exact matrix product via |b⟩⟨b′|·|c⟩⟨c′| = δ_{b′c}|b⟩⟨c′|.
    pub fn mul(&self, other: &Operator) -> Result<Operator, Error> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch(self.m, other.m));
        }
        // index other's terms by bra
        let mut by_bra: BTreeMap<BitString, Vec<(BitString, &Scalar)>> = BTreeMap::new();
        for (&(bra, ket), c) in &other.terms {
            by_bra.entry(bra).or_default().push((ket, c));
        }
        let mut out = Operator::zero(self.m);
        for (&(bra, ket), ca) in &self.terms {
            if let Some(hits) = by_bra.get(&ket) {
                for (kb, cb) in hits {
                    out.add_term(bra, *kb, ca * cb);
                }
            }
        }
        Ok(out)
    }

    /// tr(A†B).
    pub fn hs_inner(&self, other: &Operator) -> Result<Scalar, Error> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch(self.m, other.m));
        }
        let mut acc = Scalar::zero();
        let (small, _big) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (k, _) in &small.terms {
            if let (Some(ca), Some(cb)) = (self.terms.get(k), other.terms.get(k)) {
                acc = &acc + &(&ca.conj() * cb);
            }
        }
        Ok(acc)
    }

    /// Bitmask of qubits the operator acts on nontrivially (bit m−j for
    /// qubit j, matching `BitString`).
    pub fn support_mask(&self) -> u16 {
        let mut mask = 0u16;
        for j in 1..=self.m {
            if !self.acts_trivially_on(j) {
                mask |= 1 << (self.m - j);
            }
        }
        mask
    }

    /// 1-based qubit indices the operator acts on nontrivially.
    pub fn support(&self) -> Vec<u8> {
        (1..=self.m)
            .filter(|&j| !self.acts_trivially_on(j))
            .collect()
    }

    pub fn locality(&self) -> usize {
        self.support().len()
    }

    // A acts trivially on j iff A = A' ⊗ I_j: every term has equal bits at j
    // and coefficients are invariant under flipping bit j on both sides.
    fn acts_trivially_on(&self, j: u8) -> bool {
        for (&(bra, ket), c) in &self.terms {
            if bra.get(j) != ket.get(j) {
                return false;
            }
            let fb = bra.with_bit(j, !bra.get(j));
            let fk = ket.with_bit(j, !ket.get(j));
            match self.terms.get(&(fb, fk)) {
                Some(cf) if cf == c => {}
                _ => return false,
            }
        }
        true
    }

    /// Z^b as a diagonal operator.
    pub fn z_string(b: BitString) -> Operator {
        let m = b.m();
        let mut op = Operator::zero(m);
        for c in BitString::all(m) {
            let sign = if c.and(&b).weight() % 2 == 0 { 1 } else { -1 };
            op.terms.insert((c, c), Scalar::from_int(sign));
        }
        op
    }

    /// Single-qubit Pauli at qubit `j` (1-based), identity elsewhere.
    pub fn pauli_x(j: u8, m: u8) -> Operator {
        Operator::embed_single(j, m, |bra, ket| {
            if bra != ket {
                Some(Scalar::one())
            } else {
                None
            }
        })
    }

    pub fn pauli_y(j: u8, m: u8) -> Operator {
        Operator::embed_single(j, m, |bra, ket| match (bra, ket) {
            (false, true) => Some(-&Scalar::i()),
            (true, false) => Some(Scalar::i()),
            _ => None,
        })
    }

    pub fn pauli_z(j: u8, m: u8) -> Operator {
        Operator::embed_single(j, m, |bra, ket| match (bra, ket) {
            (false, false) => Some(Scalar::one()),
            (true, true) => Some(Scalar::from_int(-1)),
            _ => None,
        })
    }

    fn embed_single(j: u8, m: u8, entry: impl Fn(bool, bool) -> Option<Scalar>) -> Operator {
        let mut op = Operator::zero(m);
        for rest in BitString::all(m) {
            for (vb, vk) in [(false, false), (false, true), (true, false), (true, true)] {
                if rest.get(j) {
                    continue; // enumerate the rest with bit j cleared
                }
                if let Some(c) = entry(vb, vk) {
                    op.add_term(rest.with_bit(j, vb), rest.with_bit(j, vk), c);
                }
            }
        }
        op
    }

    /// Places `w` (on `|s|` qubits) on the global qubits `s` (1-based,
    /// ordered), identity elsewhere.
    pub fn embed_local(w: &Operator, s: &[u8], m: u8) -> Result<Operator, Error> {
        if s.len() != w.m as usize {
            return Err(Error::DimensionMismatch(w.m, s.len() as u8));
        }
        for (i, &j) in s.iter().enumerate() {
            if j < 1 || j > m {
                return Err(Error::IndexOutOfRange { index: j, m });
            }
            if s[..i].contains(&j) {
                return Err(Error::DuplicateIndex(j));
            }
        }
        let mut rest_positions: Vec<u8> = (1..=m).filter(|j| !s.contains(j)).collect();
        rest_positions.sort_unstable();
        let mut out = Operator::zero(m);
        for (&(c, cp), coeff) in &w.terms {
            for rest in 0..(1u32 << rest_positions.len()) {
                let mut bra = BitString::zeros(m);
                let mut ket = BitString::zeros(m);
                for (t, &j) in s.iter().enumerate() {
                    bra = bra.with_bit(j, c.get(t as u8 + 1));
                    ket = ket.with_bit(j, cp.get(t as u8 + 1));
                }
                for (t, &j) in rest_positions.iter().enumerate() {
                    let v = (rest >> t) & 1 == 1;
                    bra = bra.with_bit(j, v);
                    ket = ket.with_bit(j, v);
                }
                out.add_term(bra, ket, coeff.clone());
            }
        }
        Ok(out)
    }

    /// C_l = Σ_{w(b)=l} Z^b.
    pub fn build_c(l: u8, m: u8) -> Result<Operator, Error> {
        if l > m {
            return Err(Error::WeightOutOfRange { weight: l, m });
        }
        let mut out = Operator::zero(m);
        for b in BitString::all_of_weight(m, l) {
            out = out.add(&Operator::z_string(b))?;
        }
        Ok(out)
    }

    /// Exact expansion into Pauli strings; reassembling the terms reproduces
    /// the operator.
    pub fn pauli_expand(&self) -> Vec<PauliTerm> {
        let m = self.m;
        let mut acc: BTreeMap<(BitString, BitString), Scalar> = BTreeMap::new();
        let half = Scalar::from_ratio(1, 2);
        let half_i = Scalar::from_imag_ratio(1, 2);
        for (&(bra, ket), coeff) in &self.terms {
            // per-qubit factors: list of (x_bit, z_bit, scalar)
            let mut partial: Vec<(u16, u16, Scalar)> = vec![(0, 0, coeff.clone())];
            for j in 1..=m {
                let choices: Vec<(bool, bool, Scalar)> = match (bra.get(j), ket.get(j)) {
                    // |0⟩⟨0| = (I+Z)/2
                    (false, false) => vec![(false, false, half.clone()), (false, true, half.clone())],
                    // |1⟩⟨1| = (I−Z)/2
                    (true, true) => vec![
                        (false, false, half.clone()),
                        (false, true, -&half),
                    ],
                    // |0⟩⟨1| = (X+iY)/2
                    (false, true) => vec![(true, false, half.clone()), (true, true, half_i.clone())],
                    // |1⟩⟨0| = (X−iY)/2
                    (true, false) => vec![
                        (true, false, half.clone()),
                        (true, true, -&half_i),
                    ],
                };
                let bit = 1u16 << (m - j);
                let mut next = Vec::with_capacity(partial.len() * choices.len());
                for (xm, zm, c) in &partial {
                    for (xb, zb, fc) in &choices {
                        let nx = xm | if *xb { bit } else { 0 };
                        let nz = zm | if *zb { bit } else { 0 };
                        next.push((nx, nz, c * fc));
                    }
                }
                partial = next;
            }
            for (xm, zm, c) in partial {
                let key = (
                    BitString::new(xm, m).expect("mask in range"),
                    BitString::new(zm, m).expect("mask in range"),
                );
                let entry = acc.entry(key).or_insert_with(Scalar::zero);
                *entry = &*entry + &c;
            }
        }
        acc.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((x_mask, z_mask), coeff)| PauliTerm {
                x_mask,
                z_mask,
                coeff,
            })
            .collect()
    }

    /// For a diagonal operator of the form Σ r_d·iZ^d, returns the real
    /// rational coefficients r_d keyed by d.
    pub fn z_expansion(&self) -> Result<BTreeMap<BitString, Rational>, Error> {
        if !self.is_diagonal() {
            return Err(Error::NotDiagonal);
        }
        let mut out = BTreeMap::new();
        for term in self.pauli_expand() {
            if term.x_mask.weight() != 0 || !term.coeff.is_imaginary() {
                return Err(Error::NotDiagonal);
            }
            out.insert(term.z_mask, term.coeff.im.clone());
        }
        Ok(out)
    }
}

/// Exact termwise combination Σ cᵢ·Aᵢ.
pub fn linear_combine(pairs: &[(Scalar, Operator)]) -> Result<Operator, Error> {
    let m = match pairs.first() {
        Some((_, op)) => op.m(),
        None => return Err(Error::EmptyCombination),
    };
    let mut out = Operator::zero(m);
    for (c, op) in pairs {
        if op.m() != m {
            return Err(Error::DimensionMismatch(m, op.m()));
        }
        for (&(bra, ket), v) in &op.terms {
            out.add_term(bra, ket, c * v);
        }
    }
    Ok(out)
}

/// AB − BA, exact.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator, Error> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// One Pauli string `coeff · ∏ σ_j` with σ_j ∈ {I,X,Y,Z} encoded by the
/// (x, z) bits at j (Y where both are set).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PauliTerm {
    pub x_mask: BitString,
    pub z_mask: BitString,
    pub coeff: Scalar,
}

impl PauliTerm {
    pub fn support_mask(&self) -> u16 {
        self.x_mask.bits() | self.z_mask.bits()
    }

    /// Materializes the string as a sparse operator.
    pub fn to_operator(&self) -> Operator {
        let m = self.x_mask.m();
        let mut op = Operator::zero(m);
        for c in BitString::all(m) {
            // σ^{(x,z)} = ∏_j i^{x_j z_j} X^{x_j} Z^{z_j}
            let y_count = self.x_mask.and(&self.z_mask).weight();
            let mut phase = Scalar::one();
            for _ in 0..y_count {
                phase = &phase * &Scalar::i();
            }
            let sign = if c.and(&self.z_mask).weight() % 2 == 0 {
                1
            } else {
                -1
            };
            let coeff = &(&self.coeff * &phase) * &Scalar::from_int(sign);
            op.add_term(c.xor(&self.x_mask), c, coeff);
        }
        op
    }
}

/// Reassembles an operator from Pauli terms (inverse of `pauli_expand`).
pub fn from_pauli_terms(terms: &[PauliTerm], m: u8) -> Result<Operator, Error> {
    let mut out = Operator::zero(m);
    for t in terms {
        if t.x_mask.m() != m {
            return Err(Error::DimensionMismatch(m, t.x_mask.m()));
        }
        out = out.add(&t.to_operator())?;
    }
    Ok(out)
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(bra, ket), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})|{bra}⟩⟨{ket}|")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// i·Z^b (skew-Hermitian diagonal string), used throughout the synthesis
/// constructions.
pub fn i_z_string(b: BitString) -> Operator {
    Operator::z_string(b).scaled(&Scalar::i())
}

pub use crate::scalar::fmt_rational;

#[allow(unused_imports)]
use num_traits::One;

// keep ratio available to tests below
#[allow(unused_imports)]
use crate::scalar::ratio as _ratio;

#[cfg(test)]
pub(crate) mod dense_oracle {
    //! Brute-force dense multiplication, independent of the sparse path.
    use super::*;

    pub fn to_dense(op: &Operator) -> Vec<Vec<Scalar>> {
        let n = 1usize << op.m();
        let mut d = vec![vec![Scalar::zero(); n]; n];
        for (&(bra, ket), c) in &op.terms {
            d[bra.bits() as usize][ket.bits() as usize] = c.clone();
        }
        d
    }

    pub fn dense_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
        let n = a.len();
        let mut out = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                if a[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
                }
            }
        }
        out
    }

    pub fn dense_commutator(a: &Operator, b: &Operator) -> Vec<Vec<Scalar>> {
        let (da, db) = (to_dense(a), to_dense(b));
        let ab = dense_mul(&da, &db);
        let ba = dense_mul(&db, &da);
        let n = ab.len();
        let mut out = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = &ab[i][j] - &ba[i][j];
            }
        }
        out
    }

    pub fn assert_matches_dense(op: &Operator, dense: &[Vec<Scalar>]) {
        let d = to_dense(op);
        assert_eq!(d, dense, "sparse result disagrees with dense oracle");
    }
}

#[cfg(test)]
mod tests {
    use super::dense_oracle::*;
    use num_traits::Zero;
    use super::*;
    use crate::scalar::ratio;

    fn bs(s: &str) -> BitString {
        BitString::parse(s, s.len() as u8).unwrap()
    }

    #[test]
    fn linear_combine_cancellation() {
        let iz = Operator::pauli_z(1, 1).scaled(&Scalar::i());
        let r = linear_combine(&[
            (Scalar::one(), iz.clone()),
            (Scalar::from_int(-1), iz),
        ])
        .unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn linear_combine_identity_doubling() {
        let id = Operator::identity(2);
        let r = linear_combine(&[(Scalar::one(), id.clone()), (Scalar::one(), id.clone())])
            .unwrap();
        assert_eq!(r, id.scaled(&Scalar::from_int(2)));
    }

    #[test]
    fn linear_combine_half_sum_of_units() {
        let a = Operator::matrix_unit(bs("01"), bs("10")).unwrap();
        let b = Operator::matrix_unit(bs("10"), bs("01")).unwrap();
        let half = Scalar::from_ratio(1, 2);
        let r = linear_combine(&[(half.clone(), a), (half.clone(), b)]).unwrap();
        assert_eq!(r.num_terms(), 2);
        for (_, c) in r.terms() {
            assert_eq!(*c, half);
        }
    }

    #[test]
    fn linear_combine_dimension_error() {
        let a = Operator::identity(1);
        let b = Operator::identity(2);
        assert!(linear_combine(&[(Scalar::one(), a), (Scalar::one(), b)]).is_err());
    }

    #[test]
    fn matrix_unit_product_rule() {
        let a = Operator::matrix_unit(bs("0"), bs("1")).unwrap();
        let b = Operator::matrix_unit(bs("1"), bs("0")).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p, Operator::matrix_unit(bs("0"), bs("0")).unwrap());
    }

    #[test]
    fn z_squares_to_identity() {
        let z1 = Operator::pauli_z(1, 2);
        assert_eq!(z1.mul(&z1).unwrap(), Operator::identity(2));
    }

    #[test]
    fn delta_mismatch_annihilates() {
        let u = Operator::matrix_unit(bs("11"), bs("00")).unwrap();
        assert!(u.mul(&u).unwrap().is_zero());
    }

    #[test]
    fn commutator_antisymmetry() {
        let a = Operator::pauli_y(1, 2)
            .add(&Operator::pauli_x(2, 2))
            .unwrap();
        assert!(commutator(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn pauli_identity_z_x() {
        // [iZ, iX] = −[Z, X] = −2iY
        let iz = Operator::pauli_z(1, 1).scaled(&Scalar::i());
        let ix = Operator::pauli_x(1, 1).scaled(&Scalar::i());
        let c = commutator(&iz, &ix).unwrap();
        let expect = Operator::pauli_y(1, 1).scaled(&Scalar::from_imag_ratio(-2, 1));
        assert_eq!(c, expect);
    }

    #[test]
    fn ladder_commutator_matches_dense_oracle() {
        // α = (i/2)(|11⟩⟨00|+|00⟩⟨11|), β = (1/2)(|11⟩⟨00|−|00⟩⟨11|)
        let up = Operator::matrix_unit(bs("11"), bs("00")).unwrap();
        let dn = Operator::matrix_unit(bs("00"), bs("11")).unwrap();
        let alpha = linear_combine(&[
            (Scalar::from_imag_ratio(1, 2), up.clone()),
            (Scalar::from_imag_ratio(1, 2), dn.clone()),
        ])
        .unwrap();
        let beta = linear_combine(&[
            (Scalar::from_ratio(1, 2), up),
            (Scalar::from_ratio(-1, 2), dn),
        ])
        .unwrap();
        let c = commutator(&alpha, &beta).unwrap();
        assert_matches_dense(&c, &dense_commutator(&alpha, &beta));
        // expected (i/2)(|00⟩⟨00| − |11⟩⟨11|)
        let mut expect = Operator::zero(2);
        expect.add_term(bs("00"), bs("00"), Scalar::from_imag_ratio(1, 2));
        expect.add_term(bs("11"), bs("11"), Scalar::from_imag_ratio(-1, 2));
        assert_eq!(c, expect);
    }

    #[test]
    fn dagger_examples() {
        let p = Operator::matrix_unit(bs("0"), bs("0"))
            .unwrap()
            .scaled(&Scalar::i());
        assert_eq!(p.dagger(), p.neg());
        let u = Operator::matrix_unit(bs("01"), bs("10")).unwrap();
        assert_eq!(u.dagger(), Operator::matrix_unit(bs("10"), bs("01")).unwrap());
        let f = Operator::f_op(bs("01"), bs("10")).unwrap();
        assert_eq!(f.dagger(), f.neg());
    }

    #[test]
    fn hs_inner_z_strings() {
        for m in 1..=4u8 {
            for b in BitString::all(m) {
                let zb = Operator::z_string(b);
                assert_eq!(
                    zb.hs_inner(&zb).unwrap(),
                    Scalar::from_int(1 << m),
                    "⟨Z^b, Z^b⟩ = 2^m"
                );
                for bp in BitString::all(m) {
                    if b != bp {
                        assert!(zb.hs_inner(&Operator::z_string(bp)).unwrap().is_zero());
                    }
                }
            }
        }
        let u = Operator::matrix_unit(bs("01"), bs("10")).unwrap();
        assert_eq!(u.hs_inner(&u).unwrap(), Scalar::one());
    }

    #[test]
    fn support_examples() {
        assert_eq!(Operator::pauli_z(2, 3).support(), vec![2]);
        let swap_part = Operator::matrix_unit(bs("01"), bs("10"))
            .unwrap()
            .add(&Operator::matrix_unit(bs("10"), bs("01")).unwrap())
            .unwrap()
            .scaled(&Scalar::i());
        assert_eq!(swap_part.support(), vec![1, 2]);
        assert!(Operator::identity(3).support().is_empty());
        // projector |0⟩⟨0| acts nontrivially on its qubit
        let p0 = Operator::embed_local(
            &Operator::matrix_unit(bs("0"), bs("0")).unwrap(),
            &[2],
            3,
        )
        .unwrap();
        assert_eq!(p0.support(), vec![2]);
    }

    #[test]
    fn embed_local_examples() {
        let z = Operator::pauli_z(1, 1);
        assert_eq!(
            Operator::embed_local(&z, &[2], 3).unwrap(),
            Operator::pauli_z(2, 3)
        );
        let raise = Operator::matrix_unit(bs("1"), bs("0")).unwrap();
        let e = Operator::embed_local(&raise, &[1], 2).unwrap();
        let mut expect = Operator::zero(2);
        expect.add_term(bs("10"), bs("00"), Scalar::one());
        expect.add_term(bs("11"), bs("01"), Scalar::one());
        assert_eq!(e, expect);
        assert!(Operator::embed_local(&z, &[4], 3).is_err());
        assert!(Operator::embed_local(&Operator::identity(2), &[1, 1], 3).is_err());
        // full local support maps onto s exactly
        let xz = Operator::pauli_x(1, 2).mul(&Operator::pauli_z(2, 2)).unwrap();
        let emb = Operator::embed_local(&xz, &[1, 3], 3).unwrap();
        assert_eq!(emb.support(), vec![1, 3]);
    }

    #[test]
    fn build_c_examples() {
        assert_eq!(Operator::build_c(0, 3).unwrap(), Operator::identity(3));
        let c1 = Operator::build_c(1, 2).unwrap();
        let mut expect = Operator::zero(2);
        expect.add_term(bs("00"), bs("00"), Scalar::from_int(2));
        expect.add_term(bs("11"), bs("11"), Scalar::from_int(-2));
        assert_eq!(c1, expect);
        // C_m = Z^{⊗m}
        assert_eq!(
            Operator::build_c(3, 3).unwrap(),
            Operator::z_string(BitString::ones(3))
        );
        assert!(Operator::build_c(4, 3).is_err());
    }

    #[test]
    fn pauli_expand_projector() {
        let p0 = Operator::matrix_unit(bs("0"), bs("0")).unwrap();
        let terms = p0.pauli_expand();
        assert_eq!(terms.len(), 2);
        for t in &terms {
            assert_eq!(t.coeff, Scalar::from_ratio(1, 2));
            assert_eq!(t.x_mask.weight(), 0);
        }
    }

    #[test]
    fn pauli_expand_raising() {
        let u = Operator::matrix_unit(bs("0"), bs("1")).unwrap();
        let terms = u.pauli_expand();
        // (X + iY)/2
        assert_eq!(terms.len(), 2);
        let x = terms
            .iter()
            .find(|t| t.z_mask.weight() == 0)
            .expect("X part");
        assert_eq!(x.coeff, Scalar::from_ratio(1, 2));
        let y = terms
            .iter()
            .find(|t| t.z_mask.weight() == 1)
            .expect("Y part");
        assert_eq!(y.coeff, Scalar::from_imag_ratio(1, 2));
    }

    #[test]
    fn pauli_expand_z_string_is_single_term() {
        let b = bs("101");
        let terms = Operator::z_string(b).pauli_expand();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].z_mask, b);
        assert_eq!(terms[0].x_mask.weight(), 0);
        assert_eq!(terms[0].coeff, Scalar::one());
    }

    #[test]
    fn z_expansion_of_even_ladder_base() {
        // (i/2)(P0⊗P0 − P1⊗P1) = (i/4)(Z₁ + Z₂)
        let p00 = Operator::matrix_unit(bs("00"), bs("00")).unwrap();
        let p11 = Operator::matrix_unit(bs("11"), bs("11")).unwrap();
        let a = linear_combine(&[
            (Scalar::from_imag_ratio(1, 2), p00),
            (Scalar::from_imag_ratio(-1, 2), p11),
        ])
        .unwrap();
        let zx = a.z_expansion().unwrap();
        assert_eq!(zx.len(), 2);
        assert_eq!(zx[&bs("10")], ratio(1, 4));
        assert_eq!(zx[&bs("01")], ratio(1, 4));
    }

    mod random_ops {
        use super::*;
        use rand::Rng;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        pub fn random_operator(rng: &mut ChaCha8Rng, m: u8, terms: usize) -> Operator {
            let mut op = Operator::zero(m);
            let n = 1u16 << m;
            for _ in 0..terms {
                let bra = BitString::new(rng.gen_range(0..n), m).unwrap();
                let ket = BitString::new(rng.gen_range(0..n), m).unwrap();
                let c = Scalar::new(
                    ratio(rng.gen_range(-3..=3), rng.gen_range(1..=4)),
                    ratio(rng.gen_range(-3..=3), rng.gen_range(1..=4)),
                );
                op.add_term(bra, ket, c);
            }
            op
        }

        pub fn random_skew(rng: &mut ChaCha8Rng, m: u8, terms: usize) -> Operator {
            let a = random_operator(rng, m, terms);
            a.sub(&a.dagger()).unwrap()
        }

        #[test]
        fn bracket_bilinearity_antisymmetry_jacobi() {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for trial in 0..200 {
                let m = 1 + (trial % 4) as u8;
                let a = random_operator(&mut rng, m, 4);
                let b = random_operator(&mut rng, m, 4);
                let c = random_operator(&mut rng, m, 4);
                // antisymmetry
                assert_eq!(
                    commutator(&a, &b).unwrap(),
                    commutator(&b, &a).unwrap().neg()
                );
                // bilinearity in the first slot
                let s = Scalar::from_ratio(3, 5);
                let lhs = commutator(
                    &linear_combine(&[(s.clone(), a.clone()), (Scalar::one(), b.clone())])
                        .unwrap(),
                    &c,
                )
                .unwrap();
                let rhs = commutator(&a, &c)
                    .unwrap()
                    .scaled(&s)
                    .add(&commutator(&b, &c).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
                // Jacobi
                let j = commutator(&a, &commutator(&b, &c).unwrap())
                    .unwrap()
                    .add(&commutator(&b, &commutator(&c, &a).unwrap()).unwrap())
                    .unwrap()
                    .add(&commutator(&c, &commutator(&a, &b).unwrap()).unwrap())
                    .unwrap();
                assert!(j.is_zero(), "Jacobi identity failed at trial {trial}");
            }
        }

        #[test]
        fn trace_cyclicity_of_brackets() {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for trial in 0..100 {
                let m = 1 + (trial % 4) as u8;
                let a = random_operator(&mut rng, m, 4);
                let b = random_operator(&mut rng, m, 4);
                let c = random_operator(&mut rng, m, 4);
                let lhs = commutator(&a, &b).unwrap().mul(&c).unwrap().trace();
                let rhs = a.mul(&commutator(&b, &c).unwrap()).unwrap().trace();
                assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn bracket_of_skew_is_skew() {
            let mut rng = ChaCha8Rng::seed_from_u64(13);
            for trial in 0..100 {
                let m = 1 + (trial % 4) as u8;
                let a = random_skew(&mut rng, m, 4);
                let b = random_skew(&mut rng, m, 4);
                assert!(a.is_skew_hermitian());
                let c = commutator(&a, &b).unwrap();
                assert!(c.is_skew_hermitian());
            }
        }

        #[test]
        fn pauli_round_trip_is_identity() {
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            for trial in 0..200 {
                let m = 1 + (trial % 4) as u8;
                let a = random_operator(&mut rng, m, 5);
                let back = from_pauli_terms(&a.pauli_expand(), m).unwrap();
                assert_eq!(a, back, "round trip failed at trial {trial}");
            }
        }

        #[test]
        fn hs_norm_is_positive_definite() {
            let mut rng = ChaCha8Rng::seed_from_u64(19);
            for trial in 0..100 {
                let m = 1 + (trial % 4) as u8;
                let a = random_operator(&mut rng, m, 4);
                let n = a.hs_inner(&a).unwrap();
                assert!(n.is_real());
                assert!(n.re >= Rational::zero());
                assert_eq!(n.is_zero(), a.is_zero());
            }
        }

        #[test]
        fn support_agrees_with_pauli_expansion() {
            let mut rng = ChaCha8Rng::seed_from_u64(23);
            for _ in 0..100 {
                let m = 2 + (rng.gen_range(0..3)) as u8;
                let a = random_operator(&mut rng, m, 4);
                let mut mask = 0u16;
                for t in a.pauli_expand() {
                    mask |= t.support_mask();
                }
                assert_eq!(a.support_mask(), mask);
            }
        }
    }
}
