//! JSON (de)serialization for operators, group specifications, subspaces,
//! certificates, and verdicts.
//!
//! Rational coefficients are written as exact strings (`"3/4"`, `"-2"`) and
//! accepted back either as such strings or as JSON numbers; numeric literals
//! like `0.25` are parsed exactly from their decimal expansion, never through
//! floating point.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{pow::Pow, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bits::BitString;
use crate::characterization::{DimsReport, MembershipVerdict};
use crate::closure::Subspace;
use crate::dense::Mat2;
use crate::operator::Operator;
use crate::scalar::{fmt_rational, Rational, Scalar};
use crate::symmetry::{GeneratorSpec, GroupSpec};
use crate::synthesis::{BracketExpr, ExprNode, LeafTag};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// rationals

/// Parses `"p/q"`, an integer string, or an exact decimal such as `"-0.125"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::RationalParse(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    decimal_to_rational(s).ok_or_else(bad)
}

/// Exact decimal-literal conversion, with optional exponent.
fn decimal_to_rational(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, i32::from_str(e).ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return None;
    }
    let n = BigInt::from_str(&digits).ok()?;
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    Some(if shift >= 0 {
        Rational::from_integer(n * ten.pow(shift as u32))
    } else {
        Rational::new(n, ten.pow((-shift) as u32))
    })
}

fn rational_from_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        // arbitrary_precision keeps the full literal text
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::RationalParse(other.to_string())),
    }
}

// ---------------------------------------------------------------------------
// operators

#[derive(Serialize, Deserialize)]
struct TermRepr {
    bra: String,
    ket: String,
    re: Value,
    im: Value,
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    m: u8,
    terms: Vec<TermRepr>,
}

fn operator_repr(op: &Operator) -> OperatorRepr {
    OperatorRepr {
        m: op.m(),
        terms: op
            .terms()
            .map(|(&(bra, ket), c)| TermRepr {
                bra: bra.to_string(),
                ket: ket.to_string(),
                re: Value::String(fmt_rational(&c.re)),
                im: Value::String(fmt_rational(&c.im)),
            })
            .collect(),
    }
}

fn operator_from_repr(r: &OperatorRepr) -> Result<Operator> {
    let mut op = Operator::zero(r.m);
    for t in &r.terms {
        let bra = BitString::parse(&t.bra, r.m)?;
        let ket = BitString::parse(&t.ket, r.m)?;
        let c = Scalar::new(rational_from_value(&t.re)?, rational_from_value(&t.im)?);
        op.add_term(bra, ket, c);
    }
    Ok(op)
}

pub fn operator_to_json(op: &Operator) -> Value {
    serde_json::to_value(operator_repr(op)).expect("plain data serializes")
}

pub fn operator_from_json(v: &Value) -> Result<Operator> {
    let repr: OperatorRepr = serde_json::from_value(v.clone())?;
    operator_from_repr(&repr)
}

pub fn read_operator(path: &Path) -> Result<Operator> {
    operator_from_json(&serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

pub fn write_operator(path: &Path, op: &Operator) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(&operator_to_json(op))?)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// group specifications

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum GeneratorRepr {
    /// 2×2 matrix of [re, im] entry pairs, row major.
    Matrix([[[f64; 2]; 2]; 2]),
    /// Two phases as fractions of a full turn.
    Phases(Value, Value),
    /// diag(1, e^{iθ}) for an angle incommensurate with 2π.
    IrrationalAngle(f64),
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    generators: Vec<GeneratorRepr>,
}

pub fn group_spec_to_json(spec: &GroupSpec) -> Value {
    let generators = spec
        .generators
        .iter()
        .map(|g| match g {
            GeneratorSpec::Matrix(u) => {
                let mut e = [[[0.0; 2]; 2]; 2];
                for r in 0..2 {
                    for c in 0..2 {
                        e[r][c] = [u.e[r][c].re, u.e[r][c].im];
                    }
                }
                GeneratorRepr::Matrix(e)
            }
            GeneratorSpec::Phases(p1, p2) => GeneratorRepr::Phases(
                Value::String(fmt_rational(p1)),
                Value::String(fmt_rational(p2)),
            ),
            GeneratorSpec::IrrationalAngle(t) => GeneratorRepr::IrrationalAngle(*t),
        })
        .collect();
    serde_json::to_value(GroupRepr { generators }).expect("plain data serializes")
}

pub fn group_spec_from_json(v: &Value) -> Result<GroupSpec> {
    let repr: GroupRepr = serde_json::from_value(v.clone())?;
    let generators = repr
        .generators
        .iter()
        .map(|g| {
            Ok(match g {
                GeneratorRepr::Matrix(e) => {
                    let mut u = Mat2::identity();
                    for r in 0..2 {
                        for c in 0..2 {
                            u.e[r][c] = Complex64::new(e[r][c][0], e[r][c][1]);
                        }
                    }
                    GeneratorSpec::Matrix(u)
                }
                GeneratorRepr::Phases(p1, p2) => {
                    GeneratorSpec::Phases(rational_from_value(p1)?, rational_from_value(p2)?)
                }
                GeneratorRepr::IrrationalAngle(t) => GeneratorSpec::IrrationalAngle(*t),
            })
        })
        .collect::<Result<_>>()?;
    Ok(GroupSpec::new(generators))
}

pub fn read_group_spec(path: &Path) -> Result<GroupSpec> {
    group_spec_from_json(&serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

// ---------------------------------------------------------------------------
// subspaces

pub fn subspace_to_json(s: &Subspace) -> Value {
    serde_json::json!({
        "m": s.m(),
        "dim": s.dim(),
        "basis": s.basis().iter().map(operator_to_json).collect::<Vec<_>>(),
    })
}

pub fn write_subspace(path: &Path, s: &Subspace) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(&subspace_to_json(s))?)?;
    Ok(())
}

/// Reads back the basis of a previously exported subspace.
pub fn read_basis(path: &Path) -> Result<Vec<Operator>> {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let basis = v
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Invalid("subspace file lacks a \"basis\" array".into()))?;
    basis.iter().map(operator_from_json).collect()
}

// ---------------------------------------------------------------------------
// certificates

pub fn cert_to_json(e: &BracketExpr) -> Value {
    match e.node() {
        ExprNode::Leaf { op, tag } => serde_json::json!({
            "kind": "leaf",
            "tag": match tag {
                LeafTag::Generator => "GENERATOR",
                LeafTag::AuxDiagonal => "AUX_DIAGONAL",
            },
            "op": operator_to_json(op),
        }),
        ExprNode::Bracket(l, r) => serde_json::json!({
            "kind": "bracket",
            "left": cert_to_json(l),
            "right": cert_to_json(r),
        }),
        ExprNode::LinComb(terms) => serde_json::json!({
            "kind": "lincomb",
            "terms": terms
                .iter()
                .map(|(c, e)| serde_json::json!({
                    "coeff": fmt_rational(c),
                    "expr": cert_to_json(e),
                }))
                .collect::<Vec<_>>(),
        }),
    }
}

pub fn cert_from_json(v: &Value) -> Result<BracketExpr> {
    let malformed = |msg: &str| Error::MalformedCertificate(msg.to_string());
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| malformed("node lacks a \"kind\""))?;
    match kind {
        "leaf" => {
            let op = operator_from_json(
                v.get("op").ok_or_else(|| malformed("leaf lacks \"op\""))?,
            )?;
            match v.get("tag").and_then(Value::as_str) {
                Some("GENERATOR") => Ok(BracketExpr::generator(op)),
                Some("AUX_DIAGONAL") => {
                    let mut terms = op.terms();
                    match (terms.next(), terms.next()) {
                        (Some((&(b, bp), c)), None) if b == bp && *c == Scalar::i() => {
                            Ok(BracketExpr::aux_diagonal(b))
                        }
                        _ => Err(malformed("auxiliary leaf is not of the form i|b⟩⟨b|")),
                    }
                }
                _ => Err(malformed("leaf has an unknown tag")),
            }
        }
        "bracket" => Ok(BracketExpr::bracket(
            cert_from_json(v.get("left").ok_or_else(|| malformed("bracket lacks \"left\""))?)?,
            cert_from_json(v.get("right").ok_or_else(|| malformed("bracket lacks \"right\""))?)?,
        )),
        "lincomb" => {
            let terms = v
                .get("terms")
                .and_then(Value::as_array)
                .ok_or_else(|| malformed("lincomb lacks \"terms\""))?;
            let parsed = terms
                .iter()
                .map(|t| {
                    let c = rational_from_value(
                        t.get("coeff").ok_or_else(|| malformed("term lacks \"coeff\""))?,
                    )?;
                    let e = cert_from_json(
                        t.get("expr").ok_or_else(|| malformed("term lacks \"expr\""))?,
                    )?;
                    Ok((c, e))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(BracketExpr::lincomb(parsed))
        }
        other => Err(malformed(&format!("unknown node kind {other:?}"))),
    }
}

pub fn read_cert(path: &Path) -> Result<BracketExpr> {
    cert_from_json(&serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

pub fn write_cert(path: &Path, e: &BracketExpr) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(&cert_to_json(e))?)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// reports

pub fn verdict_to_json(v: &MembershipVerdict) -> Value {
    serde_json::json!({
        "member": v.member,
        "checks": v.checks.iter().map(|c| serde_json::json!({
            "name": c.name,
            "value": c.value.to_string(),
            "ok": c.ok,
        })).collect::<Vec<_>>(),
    })
}

pub fn dims_report_to_json(m: u8, k: u8, l: &str, r: &DimsReport) -> Value {
    serde_json::json!({
        "m": m,
        "k": k,
        "L": l,
        "h_m_dim": r.h_m_dim,
        "h_k_dim": r.h_k_dim,
        "gap": r.gap,
        "regime": r.regime.tag,
        "regime_description": r.regime.tag.describe(),
    })
}
