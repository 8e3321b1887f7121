//! Closed-form membership criteria and dimension formulas, organized by the
//! (m, k, L) regime, all checked elsewhere against the closure oracle.

use serde::Serialize;

use crate::operator::Operator;
use crate::scalar::Scalar;
use crate::symmetry::LValue;
use crate::{Error, Result};

/// Which of the closed-form cases applies.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum RegimeTag {
    /// L = INF: U(1)-type grading plus trace constraints; gap m − k.
    LInfinite,
    /// k < L < INF: same criterion as the infinite case.
    LGtK,
    /// L ≤ k, L odd (including L = 1): universality, gap 0.
    LLeKOdd,
    /// L ≤ k, L even: single constraint tr(A·Z^{⊗m}) = 0, gap 1.
    LLeKEven,
    /// L = 1: no symmetry at all; universality with k ≥ 2.
    TrivialL1,
}

impl RegimeTag {
    pub fn describe(&self) -> &'static str {
        match self {
            RegimeTag::LInfinite => "L=INF: weight-graded + trace constraints",
            RegimeTag::LGtK => "k<L<INF: weight-graded + trace constraints",
            RegimeTag::LLeKOdd => "L<=k odd: universality",
            RegimeTag::LLeKEven => "L<=k even: tr(A Z^m)=0",
            RegimeTag::TrivialL1 => "trivial symmetry: universality",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Regime {
    pub tag: RegimeTag,
    pub m: u8,
    pub k: u8,
    pub l: LValue,
}

/// Maps (m, k, L) to its unique regime, or a declared unsupported error —
/// never a silent guess.
///
/// k = 1 is excluded: 1-local symmetric generators are diagonal for every
/// nontrivial L, their closure is abelian, and the formulas below do not
/// apply; the oracle handles k = 1 directly.
pub fn classify(m: u8, k: u8, l: LValue) -> Result<Regime> {
    if k > m || k == 0 {
        return Err(Error::LocalityOutOfRange { k, m });
    }
    if k == 1 {
        return Err(Error::UnsupportedRegime(
            "k = 1 has an abelian closure not covered by the formulas; use the closure oracle"
                .into(),
        ));
    }
    let tag = match l {
        LValue::Infinite => RegimeTag::LInfinite,
        LValue::Finite(1) => RegimeTag::TrivialL1,
        LValue::Finite(lf) => {
            if lf > k as u32 {
                RegimeTag::LGtK
            } else if lf >= m as u32 && k < m {
                // unreachable: L ≤ k < m forces L < m; kept as a guard
                return Err(Error::UnsupportedRegime(format!(
                    "L = {lf} >= m = {m} with L <= k is outside the proven range (oracle-only)"
                )));
            } else if k == m && lf >= m as u32 {
                // k = m is trivially universal regardless of the L < m
                // hypothesis; report the parity tag for consistency
                parity_tag(lf)
            } else {
                parity_tag(lf)
            }
        }
    };
    Ok(Regime { tag, m, k, l })
}

fn parity_tag(l: u32) -> RegimeTag {
    if l % 2 == 1 {
        RegimeTag::LLeKOdd
    } else {
        RegimeTag::LLeKEven
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// dim 𝔥ₘᴳ = Σ_r (sector size)²: Σ_{r=0}^{L−1} (Σ_{j≡r (L)} C(m,j))² for
/// finite L (this yields 4^m at L = 1) and C(2m, m) for L = INF.
pub fn h_m_dim(m: u8, l: LValue) -> usize {
    match l {
        LValue::Infinite => binomial(2 * m as u64, m as u64) as usize,
        LValue::Finite(lf) => {
            let mut total = 0u64;
            for r in 0..lf.min(m as u32 + 1) {
                let sector: u64 = (0..=m as u32)
                    .filter(|j| j % lf == r % lf)
                    .map(|j| binomial(m as u64, j as u64))
                    .sum();
                total += sector * sector;
            }
            total as usize
        }
    }
}

/// dim 𝔥ₘᴳ − dim 𝔥ₖᴳ for the matched regime; 0 when k = m.
pub fn predicted_gap(m: u8, k: u8, l: LValue) -> Result<usize> {
    let regime = classify(m, k, l)?;
    if k == m {
        return Ok(0);
    }
    Ok(match regime.tag {
        RegimeTag::LInfinite => (m - k) as usize,
        RegimeTag::LGtK => {
            // h_m(L) ≥ C(2m, m) and k ≤ m keep this nonnegative
            h_m_dim(m, l) + m as usize - binomial(2 * m as u64, m as u64) as usize - k as usize
        }
        RegimeTag::LLeKOdd | RegimeTag::TrivialL1 => 0,
        RegimeTag::LLeKEven => 1,
    })
}

/// A ∈ 𝔥ₘ^U(1): skew-Hermitian and every term weight-preserving.
pub fn u1_member(a: &Operator) -> bool {
    a.is_skew_hermitian() && a.terms().all(|(&(bra, ket), _)| bra.weight() == ket.weight())
}

/// One named linear constraint with its exact value; satisfied ⟺ zero.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub value: Scalar,
    pub ok: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: Scalar) -> Self {
        let ok = value.is_zero();
        Check {
            name: name.into(),
            value,
            ok,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MembershipVerdict {
    pub member: bool,
    pub checks: Vec<Check>,
}

fn symmetric_residual(a: &Operator, l: LValue) -> Scalar {
    let mut acc = Scalar::zero();
    for (&(bra, ket), c) in a.terms() {
        if crate::symmetry::weight_sector(bra, l) != crate::symmetry::weight_sector(ket, l) {
            acc = &acc + &Scalar::real(c.norm_sq());
        }
    }
    acc
}

fn grading_residual(a: &Operator) -> Scalar {
    let mut acc = Scalar::zero();
    for (&(bra, ket), c) in a.terms() {
        if bra.weight() != ket.weight() {
            acc = &acc + &Scalar::real(c.norm_sq());
        }
    }
    acc
}

fn skew_residual(a: &Operator) -> Result<Scalar> {
    let r = a.add(&a.dagger())?;
    r.hs_inner(&r)
}

fn trace_check(a: &Operator, l: u8, m: u8) -> Result<Check> {
    let c_l = Operator::build_c(l, m)?;
    let value = a.mul(&c_l)?.trace();
    let name = if l == m {
        "tr(A·C_m) = tr(A·Z^⊗m)".to_string()
    } else {
        format!("tr(A·C_{l})")
    };
    Ok(Check::new(name, value))
}

/// The regime's exact membership criterion, evaluated in the rotated frame.
pub fn membership(a: &Operator, m: u8, k: u8, l: LValue) -> Result<MembershipVerdict> {
    if a.m() != m {
        return Err(Error::DimensionMismatch(a.m(), m));
    }
    let regime = classify(m, k, l)?;
    let mut checks = Vec::new();
    checks.push(Check::new("skew-hermitian", skew_residual(a)?));
    if k == m {
        checks.push(Check::new("symmetric", symmetric_residual(a, l)));
    } else {
        match regime.tag {
            RegimeTag::LInfinite | RegimeTag::LGtK => {
                checks.push(Check::new("u1-graded", grading_residual(a)));
                for t in (k + 1)..=m {
                    checks.push(trace_check(a, t, m)?);
                }
            }
            RegimeTag::LLeKEven => {
                checks.push(Check::new("symmetric", symmetric_residual(a, l)));
                checks.push(trace_check(a, m, m)?);
            }
            RegimeTag::LLeKOdd | RegimeTag::TrivialL1 => {
                checks.push(Check::new("symmetric", symmetric_residual(a, l)));
            }
        }
    }
    let member = checks.iter().all(|c| c.ok);
    Ok(MembershipVerdict { member, checks })
}

#[derive(Clone, Copy, Debug)]
pub struct DimsReport {
    pub h_m_dim: usize,
    pub h_k_dim: usize,
    pub gap: usize,
    pub regime: Regime,
}

/// Mutually consistent (dim 𝔥ₘᴳ, dim 𝔥ₖᴳ, gap) for a supported regime.
pub fn dims_report(m: u8, k: u8, l: LValue) -> Result<DimsReport> {
    let regime = classify(m, k, l)?;
    let hm = h_m_dim(m, l);
    let gap = predicted_gap(m, k, l)?;
    Ok(DimsReport {
        h_m_dim: hm,
        h_k_dim: hm - gap,
        gap,
        regime,
    })
}
