//! Closed-form membership checks: decides A ∈ 𝔥ₖᴳ by linear constraints
//! instead of running the closure, and prints each constraint's exact value.

use symlie::characterization::membership;
use symlie::operator::i_z_string;
use symlie::symmetry::LValue;
use symlie::{BitString, Operator};

fn report(label: &str, a: &Operator, m: u8, k: u8, l: LValue) -> symlie::Result<()> {
    let verdict = membership(a, m, k, l)?;
    println!("{label}: member = {}", verdict.member);
    for c in &verdict.checks {
        println!("  {:<28} value {:>8}  ok {}", c.name, c.value.to_string(), c.ok);
    }
    Ok(())
}

fn main() -> symlie::Result<()> {
    let l = LValue::Finite(2);

    // iZ^{⊗4} is symmetric but excluded: its trace against Z^{⊗4} is 16, not 0
    report("iZZZZ, (m,k,L) = (4,2,2)", &i_z_string(BitString::ones(4)), 4, 2, l)?;

    // a matrix-unit pair within one weight sector is a member
    let b = BitString::parse("0011", 4)?;
    let bp = BitString::parse("0101", 4)?;
    report("F(0011,0101), (4,2,2)", &Operator::f_op(b, bp)?, 4, 2, l)?;

    // an off-sector pair fails the symmetry residual
    let c = BitString::parse("0001", 4)?;
    report("F(0011,0001), (4,2,2)", &Operator::f_op(b, c)?, 4, 2, l)?;
    Ok(())
}
