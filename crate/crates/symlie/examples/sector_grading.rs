//! The charge-sector grading: projectors Πₗ onto weight classes mod L,
//! block-diagonality of symmetric operators, and preservation of the grading
//! under commutators.

use symlie::closure::{lie_closure, GeneratorSet};
use symlie::operator::commutator;
use symlie::symmetry::{is_symmetric, weight_sector, LValue, SectorGrading};
use symlie::BitString;

fn main() -> symlie::Result<()> {
    let (m, l) = (4u8, LValue::Finite(3));
    let grading = SectorGrading::new(l, m)?;
    println!(
        "m = {m}, L = 3: {} sector projectors with ranks {:?}",
        grading.projectors.len(),
        grading
            .projectors
            .iter()
            .map(|p| p.trace().to_string())
            .collect::<Vec<_>>()
    );
    for b in BitString::all(m).take(4) {
        println!("  |{b}⟩ lives in sector {}", weight_sector(b, l));
    }

    // every element of the closure is symmetric, i.e. equals its own
    // block-diagonal part, and brackets stay inside the grading
    let s = lie_closure(&GeneratorSet::new(m, 2, l)?, 1)?;
    let a = &s.basis()[0];
    let b = &s.basis()[1];
    assert_eq!(&grading.block_diagonal_part(a)?, a);
    let c = commutator(a, b)?;
    assert!(is_symmetric(&c, l));
    println!("closure elements are block diagonal; brackets preserve the grading");
    Ok(())
}
