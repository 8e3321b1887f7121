//! Reproduces the dimension table: for each (m, k, L), the closed-form
//! dimensions of 𝔥ₘᴳ and 𝔥ₖᴳ, the gap between them, and (for small m) the
//! exact closure oracle's agreement.

use symlie::characterization::dims_report;
use symlie::closure::{lie_closure, GeneratorSet};
use symlie::symmetry::LValue;

fn main() -> symlie::Result<()> {
    println!(
        "{:>2} {:>2} {:>4}  {:>7} {:>7} {:>4}  {:>7}  {}",
        "m", "k", "L", "dim h_m", "dim h_k", "gap", "oracle", "regime"
    );
    for m in [3u8, 4] {
        for k in 2..=m {
            for l in [
                LValue::Finite(1),
                LValue::Finite(2),
                LValue::Finite(3),
                LValue::Finite(4),
                LValue::Infinite,
            ] {
                let r = dims_report(m, k, l)?;
                let oracle = lie_closure(&GeneratorSet::new(m, k, l)?, 1)?.dim();
                assert_eq!(oracle, r.h_k_dim, "formula and oracle must agree");
                println!(
                    "{:>2} {:>2} {:>4}  {:>7} {:>7} {:>4}  {:>7}  {}",
                    m,
                    k,
                    l.to_string(),
                    r.h_m_dim,
                    r.h_k_dim,
                    r.gap,
                    oracle,
                    r.regime.tag.describe(),
                );
            }
        }
    }
    Ok(())
}
