//! Computes the Lie closure of the 2-local Z₂-symmetric generators on three
//! qubits with exact rational arithmetic, then inspects the result.

use symlie::closure::{lie_closure, GeneratorSet};
use symlie::operator::i_z_string;
use symlie::symmetry::LValue;
use symlie::BitString;

fn main() -> symlie::Result<()> {
    let gens = GeneratorSet::new(3, 2, LValue::Finite(2))?;
    let closure = lie_closure(&gens, 1)?;
    println!(
        "h_2 for m = 3, L = 2: dim {} inside an ambient symmetric space of dim {}",
        closure.dim(),
        closure.index().dim()
    );

    // the one missing direction is iZ⊗Z⊗Z
    let z3 = i_z_string(BitString::ones(3));
    println!("contains iZZZ? {}", closure.contains(&z3)?);

    // basis vectors are pairwise orthogonal under tr(A†B)
    let basis = closure.basis();
    for i in 0..3.min(basis.len()) {
        for j in 0..i {
            assert!(basis[i].hs_inner(&basis[j])?.is_zero());
        }
    }
    println!("first basis element: {}", basis[0]);
    Ok(())
}
