//! Reduction of an Abelian symmetry to its cyclic data (P, L), symmetry
//! checks in the rotated frame, and the charge-sector grading.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::bits::BitString;
use crate::dense::{rational_approx, Mat2};
use crate::operator::Operator;
use crate::scalar::Rational;
use crate::{Error, Result};

const COMMUTE_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-8;
const DIAG_TOL: f64 = 1e-10;
const ORDER_TOL: f64 = 1e-9;
const ORDER_DEN_CAP: u64 = 4096;

/// The order parameter L: lcm of relative-phase orders, or INF.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum LValue {
    Finite(u32),
    Infinite,
}

impl LValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, LValue::Finite(_))
    }

    pub fn finite(&self) -> Option<u32> {
        match self {
            LValue::Finite(l) => Some(*l),
            LValue::Infinite => None,
        }
    }
}

impl fmt::Display for LValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LValue::Finite(l) => write!(f, "{l}"),
            LValue::Infinite => write!(f, "INF"),
        }
    }
}

impl FromStr for LValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(LValue::Infinite);
        }
        let l: u32 = s
            .parse()
            .map_err(|_| Error::Invalid(format!("cannot parse L value {s:?}")))?;
        if l == 0 {
            return Err(Error::Invalid("L must be positive or INF".into()));
        }
        Ok(LValue::Finite(l))
    }
}

/// One single-qubit symmetry generator.
#[derive(Clone, Debug)]
pub enum GeneratorSpec {
    /// An arbitrary 2×2 unitary with floating entries.
    Matrix(Mat2),
    /// diag(e^{2πi p₁/q₁}, e^{2πi p₂/q₂}), exact.
    Phases(Rational, Rational),
    /// diag(1, e^{iθ}) with θ an irrational fraction of a turn.
    IrrationalAngle(f64),
}

impl GeneratorSpec {
    fn to_matrix(&self) -> Mat2 {
        match self {
            GeneratorSpec::Matrix(m) => *m,
            GeneratorSpec::Phases(p1, p2) => {
                let phase = |r: &Rational| {
                    let x = r.to_f64().unwrap_or(0.0) * std::f64::consts::TAU;
                    Complex64::new(x.cos(), x.sin())
                };
                Mat2::diag(phase(p1), phase(p2))
            }
            GeneratorSpec::IrrationalAngle(theta) => Mat2::diag(
                Complex64::new(1.0, 0.0),
                Complex64::new(theta.cos(), theta.sin()),
            ),
        }
    }

    fn is_exactly_diagonal(&self) -> bool {
        match self {
            GeneratorSpec::Matrix(m) => m.is_diagonal(DIAG_TOL),
            GeneratorSpec::Phases(..) | GeneratorSpec::IrrationalAngle(_) => true,
        }
    }
}

/// An Abelian symmetry given by commuting single-qubit generators, acting as
/// u(g)^{⊗m}.
#[derive(Clone, Debug, Default)]
pub struct GroupSpec {
    pub generators: Vec<GeneratorSpec>,
}

impl GroupSpec {
    pub fn new(generators: Vec<GeneratorSpec>) -> Self {
        GroupSpec { generators }
    }

    fn validate(&self) -> Result<()> {
        let mats: Vec<Mat2> = self.generators.iter().map(|g| g.to_matrix()).collect();
        for m in &mats {
            let dev = m.deviation_from_unitary();
            if dev > UNITARY_TOL {
                return Err(Error::NonUnitary(dev));
            }
        }
        for (i, a) in mats.iter().enumerate() {
            for b in &mats[i + 1..] {
                if !a.commutes_with(b, COMMUTE_TOL) {
                    return Err(Error::NonCommutingGenerators);
                }
            }
        }
        Ok(())
    }
}

/// The pair (P, L) describing the symmetry after simultaneous
/// diagonalization; downstream computation happens in the rotated frame.
#[derive(Clone, Debug)]
pub struct ReducedSymmetry {
    pub p: Mat2,
    pub l: LValue,
    /// p/q with e^{2πi p/q} of exact multiplicative order L (finite L only).
    pub omega_exponent: Option<Rational>,
}

/// Basis change P with P·u(g)·P† diagonal for every generator. Exact
/// phase-form (and already-diagonal) input yields P = identity.
pub fn simultaneous_diagonalize(spec: &GroupSpec) -> Result<Mat2> {
    spec.validate()?;
    if spec.generators.iter().all(|g| g.is_exactly_diagonal()) {
        return Ok(Mat2::identity());
    }
    // first non-scalar generator fixes the eigenbasis; a non-scalar diagonal
    // one forces every commuting generator diagonal, which the branch above
    // already handled
    let first = spec
        .generators
        .iter()
        .map(|g| g.to_matrix())
        .find(|m| !m.is_scalar(DIAG_TOL));
    let p = match first {
        None => Mat2::identity(),
        Some(u) => {
            let (_, _, p) = u.eigendecompose();
            p
        }
    };
    for g in &spec.generators {
        let d = p.mul(&g.to_matrix()).mul(&p.dagger());
        if !d.is_diagonal(DIAG_TOL) {
            return Err(Error::NonCommutingGenerators);
        }
    }
    Ok(p)
}

fn order_of_rational_turn(r: &Rational) -> u32 {
    // ord(e^{2πi p/q}) = q for p/q in lowest terms
    let mut r = r.clone();
    // reduce mod 1
    let floor = r.floor();
    r -= floor;
    if r.is_zero() {
        return 1;
    }
    r.denom().to_u32().unwrap_or(u32::MAX)
}

fn generator_order(g: &GeneratorSpec, p: &Mat2) -> LValue {
    match g {
        GeneratorSpec::Phases(p1, p2) => LValue::Finite(order_of_rational_turn(&(p2 - p1))),
        GeneratorSpec::IrrationalAngle(_) => LValue::Infinite,
        GeneratorSpec::Matrix(u) => {
            let d = p.mul(u).mul(&p.dagger());
            let rel = d.e[1][1] / d.e[0][0];
            let turn = rel.arg() / std::f64::consts::TAU;
            match rational_approx(turn, ORDER_DEN_CAP, ORDER_TOL) {
                Some((num, den)) => {
                    let g = (num.unsigned_abs()).gcd(&den);
                    LValue::Finite((den / g.max(1)) as u32)
                }
                None => LValue::Infinite,
            }
        }
    }
}

/// L = LCM(n(g) : g ∈ G), with L = INF when any n(g) = INF. An empty
/// generator list (or all-scalar generators) yields the trivial symmetry
/// L = 1.
pub fn compute_l(spec: &GroupSpec) -> Result<LValue> {
    let p = simultaneous_diagonalize(spec)?;
    let mut l: u64 = 1;
    for g in &spec.generators {
        match generator_order(g, &p) {
            LValue::Infinite => return Ok(LValue::Infinite),
            LValue::Finite(n) => l = l.lcm(&(n as u64)),
        }
    }
    u32::try_from(l)
        .map(LValue::Finite)
        .map_err(|_| Error::Invalid("LCM of generator orders overflows u32".into()))
}

/// Bundles P and L; downstream modules operate in the rotated frame where
/// every U(g) is diagonal.
pub fn reduce(spec: &GroupSpec) -> Result<ReducedSymmetry> {
    let p = simultaneous_diagonalize(spec)?;
    let l = compute_l(spec)?;
    let omega_exponent = l.finite().map(|l| {
        Rational::new(BigInt::from(1), BigInt::from(l))
    });
    Ok(ReducedSymmetry {
        p,
        l,
        omega_exponent,
    })
}

/// Residue class of a basis state under the symmetry grading.
pub fn weight_sector(b: BitString, l: LValue) -> u32 {
    match l {
        LValue::Finite(l) => b.weight() as u32 % l,
        LValue::Infinite => b.weight() as u32,
    }
}

/// In the rotated frame: every stored term (b, b′) must satisfy
/// w(b) ≡ w(b′) mod L (equality for L = INF).
pub fn is_symmetric(a: &Operator, l: LValue) -> bool {
    a.terms()
        .all(|(&(bra, ket), _)| weight_sector(bra, l) == weight_sector(ket, l))
}

/// Π_l: diagonal projector onto basis states of weight ≡ l mod L.
pub fn sector_projector(l: u32, modulus: LValue, m: u8) -> Result<Operator> {
    let modulus = modulus.finite().ok_or(Error::InfiniteModulusProjector)?;
    if l >= modulus {
        return Err(Error::SectorOutOfRange { l, modulus });
    }
    let mut op = Operator::zero(m);
    for b in BitString::all(m) {
        if b.weight() as u32 % modulus == l {
            op.add_term(b, b, crate::scalar::Scalar::one());
        }
    }
    Ok(op)
}

/// The full grading {Π₀, …, Π_{L−1}}.
#[derive(Clone, Debug)]
pub struct SectorGrading {
    pub l: u32,
    pub m: u8,
    pub projectors: Vec<Operator>,
}

impl SectorGrading {
    pub fn new(modulus: LValue, m: u8) -> Result<Self> {
        let l = modulus.finite().ok_or(Error::InfiniteModulusProjector)?;
        let projectors = (0..l)
            .map(|r| sector_projector(r, modulus, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(SectorGrading { l, m, projectors })
    }

    /// Σ_r Π_r·A·Π_r — equals A exactly for every element of 𝔥ₘᴳ.
    pub fn block_diagonal_part(&self, a: &Operator) -> Result<Operator> {
        let mut acc = Operator::zero(self.m);
        for p in &self.projectors {
            let block = p.mul(a)?.mul(p)?;
            acc = acc.add(&block)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{commutator, Operator};
    use crate::scalar::{ratio, Scalar};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bs(s: &str) -> BitString {
        BitString::parse(s, s.len() as u8).unwrap()
    }

    #[test]
    fn diagonalize_pauli_x() {
        let spec = GroupSpec::new(vec![GeneratorSpec::Matrix(Mat2::pauli_x())]);
        let p = simultaneous_diagonalize(&spec).unwrap();
        let d = p.mul(&Mat2::pauli_x()).mul(&p.dagger());
        assert!(d.is_diagonal(1e-10));
        assert!((d.e[0][0] - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn scalar_generators_leave_p_identity() {
        let spec = GroupSpec::new(vec![
            GeneratorSpec::Matrix(Mat2::identity()),
            GeneratorSpec::Matrix(Mat2::identity().scale(Complex64::new(-1.0, 0.0))),
        ]);
        assert_eq!(simultaneous_diagonalize(&spec).unwrap(), Mat2::identity());
        assert_eq!(compute_l(&spec).unwrap(), LValue::Finite(1));
    }

    #[test]
    fn phase_form_keeps_identity_frame() {
        let spec = GroupSpec::new(vec![GeneratorSpec::Phases(ratio(0, 1), ratio(1, 3))]);
        assert_eq!(simultaneous_diagonalize(&spec).unwrap(), Mat2::identity());
        assert_eq!(compute_l(&spec).unwrap(), LValue::Finite(3));
    }

    #[test]
    fn non_commuting_generators_rejected() {
        let spec = GroupSpec::new(vec![
            GeneratorSpec::Matrix(Mat2::pauli_x()),
            GeneratorSpec::Matrix(Mat2::pauli_z()),
        ]);
        assert!(matches!(
            simultaneous_diagonalize(&spec),
            Err(Error::NonCommutingGenerators)
        ));
    }

    #[test]
    fn compute_l_examples() {
        let orders_2_and_3 = GroupSpec::new(vec![
            GeneratorSpec::Phases(ratio(0, 1), ratio(1, 2)),
            GeneratorSpec::Phases(ratio(0, 1), ratio(1, 3)),
        ]);
        assert_eq!(compute_l(&orders_2_and_3).unwrap(), LValue::Finite(6));

        let irr = GroupSpec::new(vec![GeneratorSpec::IrrationalAngle(1.0)]);
        assert_eq!(compute_l(&irr).unwrap(), LValue::Infinite);

        let irr_matrix = GroupSpec::new(vec![GeneratorSpec::Matrix(Mat2::diag(
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0f64.cos(), 1.0f64.sin()),
        ))]);
        assert_eq!(compute_l(&irr_matrix).unwrap(), LValue::Infinite);
    }

    #[test]
    fn reduce_examples() {
        // {X, −X}: relative eigenvalue phase −1, so L = 2
        let spec = GroupSpec::new(vec![
            GeneratorSpec::Matrix(Mat2::pauli_x()),
            GeneratorSpec::Matrix(Mat2::pauli_x().scale(Complex64::new(-1.0, 0.0))),
        ]);
        let red = reduce(&spec).unwrap();
        assert_eq!(red.l, LValue::Finite(2));
        let d = red.p.mul(&Mat2::pauli_x()).mul(&red.p.dagger());
        assert!(d.is_diagonal(1e-10));

        let diag_i = GroupSpec::new(vec![GeneratorSpec::Matrix(Mat2::diag(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
        ))]);
        let red = reduce(&diag_i).unwrap();
        assert_eq!(red.p, Mat2::identity());
        assert_eq!(red.l, LValue::Finite(4));

        let trivial = GroupSpec::new(vec![GeneratorSpec::Matrix(Mat2::identity())]);
        let red = reduce(&trivial).unwrap();
        assert_eq!(red.p, Mat2::identity());
        assert_eq!(red.l, LValue::Finite(1));
        assert_eq!(red.omega_exponent, Some(ratio(1, 1)));
    }

    #[test]
    fn reduce_is_idempotent_on_diagonal_specs() {
        let spec = GroupSpec::new(vec![GeneratorSpec::Phases(ratio(0, 1), ratio(2, 6))]);
        let r1 = reduce(&spec).unwrap();
        assert_eq!(r1.p, Mat2::identity());
        assert_eq!(r1.l, LValue::Finite(3));
        let r2 = reduce(&spec).unwrap();
        assert_eq!(r2.l, r1.l);
        assert_eq!(r2.p, r1.p);
    }

    #[test]
    fn is_symmetric_examples() {
        let f = Operator::f_op(bs("01"), bs("10")).unwrap();
        assert!(is_symmetric(&f, LValue::Finite(2)));
        let g = Operator::f_op(bs("00"), bs("11")).unwrap();
        assert!(!is_symmetric(&g, LValue::Finite(3)));
        assert!(is_symmetric(&g, LValue::Finite(2)));
        let d = Operator::z_string(bs("101"));
        for l in [LValue::Finite(1), LValue::Finite(5), LValue::Infinite] {
            assert!(is_symmetric(&d, l));
        }
        assert!(is_symmetric(&g, LValue::Finite(1)));
    }

    #[test]
    fn projector_examples() {
        let p = sector_projector(0, LValue::Finite(2), 2).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(bs("00"), bs("00")), Scalar::one());
        assert_eq!(p.coeff(bs("11"), bs("11")), Scalar::one());
        // rank of (l=1, L=3, m=4) counts weights ≡ 1 mod 3 among 0..4
        let p13 = sector_projector(1, LValue::Finite(3), 4).unwrap();
        assert_eq!(p13.num_terms(), 5);
        assert!(sector_projector(3, LValue::Finite(3), 2).is_err());
        assert!(sector_projector(0, LValue::Infinite, 2).is_err());
    }

    #[test]
    fn gradings_are_orthogonal_resolutions_of_identity() {
        for l in 1..=6u32 {
            for m in 1..=6u8 {
                let grading = SectorGrading::new(LValue::Finite(l), m).unwrap();
                let mut sum = Operator::zero(m);
                for (i, pi) in grading.projectors.iter().enumerate() {
                    sum = sum.add(pi).unwrap();
                    assert_eq!(pi.mul(pi).unwrap(), *pi, "idempotent");
                    for (j, pj) in grading.projectors.iter().enumerate() {
                        if i != j {
                            assert!(pi.mul(pj).unwrap().is_zero(), "orthogonal");
                        }
                    }
                }
                assert_eq!(sum, Operator::identity(m), "complete");
            }
        }
    }

    fn random_symmetric_skew(rng: &mut ChaCha8Rng, m: u8, l: LValue) -> Operator {
        let mut op = Operator::zero(m);
        let n = 1u16 << m;
        for _ in 0..5 {
            let bra = BitString::new(rng.gen_range(0..n), m).unwrap();
            let ket = BitString::new(rng.gen_range(0..n), m).unwrap();
            if weight_sector(bra, l) != weight_sector(ket, l) {
                continue;
            }
            let c = Scalar::new(ratio(rng.gen_range(-2..=2), 1), ratio(rng.gen_range(-2..=2), 1));
            op.add_term(bra, ket, c);
        }
        op.sub(&op.dagger()).unwrap()
    }

    // Independent route: conjugating by U = diag(1, ω)^{⊗m} multiplies entry
    // (b, b′) by ω^{w(b)−w(b′)}, so U A U† = A iff every term has
    // ω^{Δw} = 1. With ord(ω) = L exactly, that is Δw ≡ 0 mod L; the phase
    // exponent is tracked symbolically, so the check is exact for every L.
    fn dense_symmetry_check(a: &Operator, l: u32) -> bool {
        a.terms().all(|(&(bra, ket), c)| {
            c.is_zero() || (bra.weight() as i32 - ket.weight() as i32).rem_euclid(l as i32) == 0
        })
    }

    #[test]
    fn symmetry_check_agrees_with_conjugation_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for trial in 0..50 {
            let m = 1 + (trial % 3) as u8;
            for l in [1u32, 2, 3, 4, 6] {
                let a = random_ops_any(&mut rng, m);
                assert_eq!(
                    is_symmetric(&a, LValue::Finite(l)),
                    dense_symmetry_check(&a, l)
                );
                // floating route at 1e−9 for good measure
                assert_eq!(
                    is_symmetric(&a, LValue::Finite(l)),
                    float_symmetry_check(&a, l)
                );
            }
        }
    }

    fn random_ops_any(rng: &mut ChaCha8Rng, m: u8) -> Operator {
        let mut op = Operator::zero(m);
        let n = 1u16 << m;
        for _ in 0..4 {
            let bra = BitString::new(rng.gen_range(0..n), m).unwrap();
            let ket = BitString::new(rng.gen_range(0..n), m).unwrap();
            op.add_term(bra, ket, Scalar::from_int(rng.gen_range(-2..=2)));
        }
        op
    }

    fn float_symmetry_check(a: &Operator, l: u32) -> bool {
        use num_complex::Complex64;
        let omega = Complex64::from_polar(1.0, std::f64::consts::TAU / l as f64);
        a.terms().all(|(&(bra, ket), c)| {
            let phase = omega.powi(bra.weight() as i32 - ket.weight() as i32);
            let (re, im) = c.to_f64s();
            let v = Complex64::new(re, im);
            (v * phase - v).norm() <= 1e-9
        })
    }

    #[test]
    fn brackets_preserve_the_grading() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for trial in 0..60 {
            let m = 2 + (trial % 2) as u8;
            for l in [LValue::Finite(2), LValue::Finite(3), LValue::Infinite] {
                let a = random_symmetric_skew(&mut rng, m, l);
                let b = random_symmetric_skew(&mut rng, m, l);
                let c = commutator(&a, &b).unwrap();
                assert!(is_symmetric(&c, l));
            }
        }
    }
}
