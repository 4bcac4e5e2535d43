//! Runs every kernel implementation against its independent host oracle.

use longvec_lab::harness::validate_oracles;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let checks = validate_oracles()?;
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    if failed > 0 {
        return Err(format!("{failed} oracle checks failed").into());
    }
    Ok(())
}
