//! Scaled Hadamard operators: the norm shrinks like n^{-1/4} while the
//! regular norm grows like n^{1/4}.

use kernel_repr::order::counterexample_sequence;

fn main() -> kernel_repr::Result<()> {
    println!("{:>4} {:>14} {:>14} {:>10}", "n", "norm", "regular norm", "ratio");
    for (n, r) in counterexample_sequence(256)? {
        println!("{n:>4} {:>14.10} {:>14.10} {:>10.4}", r.operator_norm, r.regular_norm, r.ratio);
    }
    Ok(())
}
