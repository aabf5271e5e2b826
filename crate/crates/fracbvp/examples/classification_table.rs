//! Print the nine-cell wellposedness table: three equation forms against
//! three Neumann-type boundary conditions.
//!
//! ```text
//! cargo run --example classification_table
//! ```

use fracbvp::wellposed::{classification_table, ConstraintKind, Status};

fn main() {
    let table = classification_table();
    println!("{:<22} {:<18} {:<28} {:<18} constraint", "equation", "boundary", "status", "kernel");
    println!("{}", "-".repeat(100));
    for v in &table {
        let status = match v.status {
            Status::WellPosedUpToConstant => "well posed (+ constant)",
            Status::WellPosedUpToSingularKernel => "well posed (+ C x^-beta)",
            Status::UniqueSolution => "unique solution",
            Status::IllPosedInGeneral => "ill posed in general",
        };
        let constraint = match v.constraint_kind {
            ConstraintKind::WeightedPairing => "<f,(1-x)^-b> + G(1-b)(a1-a0) = 0",
            ConstraintKind::PlainIntegral => "<f,1> + a1 - a0 = 0",
            ConstraintKind::None => "-",
        };
        println!(
            "{:<22} {:<18} {:<28} {:<18} {}",
            format!("{:?}", v.form),
            format!("{:?}", v.bc),
            status,
            v.kernel.as_deref().unwrap_or("-"),
            constraint,
        );
    }
    let well_posed = table.iter().filter(|v| v.status.is_well_posed()).count();
    println!("\n{well_posed} of {} combinations admit solutions.", table.len());
}
