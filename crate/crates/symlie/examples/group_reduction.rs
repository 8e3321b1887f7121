//! Reduces an Abelian symmetry group given by commuting single-qubit
//! generators to a diagonal frame, and computes the order L that controls
//! every downstream formula.

use symlie::dense::Mat2;
use symlie::scalar::ratio;
use symlie::symmetry::{compute_l, reduce, GeneratorSpec, GroupSpec};

fn main() -> symlie::Result<()> {
    // diag(1, ω₃) and Z together generate phases of order lcm(3, 2) = 6
    let spec = GroupSpec::new(vec![
        GeneratorSpec::Phases(ratio(0, 1), ratio(1, 3)),
        GeneratorSpec::Matrix(Mat2::pauli_z()),
    ]);
    let red = reduce(&spec)?;
    println!("phases {{ω₃, −1}} reduce to L = {}", red.l);

    // a non-diagonal generator is rotated first: {X, −X} has relative
    // eigenvalue phase −1, so L = 2 in the rotated frame
    let spec = GroupSpec::new(vec![
        GeneratorSpec::Matrix(Mat2::pauli_x()),
        GeneratorSpec::Matrix(Mat2::pauli_x().scale((-1.0).into())),
    ]);
    println!("{{X, −X}} reduce to L = {}", reduce(&spec)?.l);

    // an irrational rotation never closes: L = INF
    let spec = GroupSpec::new(vec![GeneratorSpec::IrrationalAngle(1.0)]);
    println!("diag(1, e^i) gives L = {}", compute_l(&spec)?);

    // the trivial group
    let spec = GroupSpec::new(vec![GeneratorSpec::Phases(ratio(0, 1), ratio(0, 1))]);
    println!("identity-only group gives L = {} (trivial symmetry)", compute_l(&spec)?);
    Ok(())
}
