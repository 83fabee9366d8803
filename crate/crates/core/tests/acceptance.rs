//! One line per acceptance criterion. Criteria 1 to 9 run in process through
//! the verification suite; 10 drives the binary with a corrupted matrix.

use std::process::{Command, ExitCode};
use std::time::Instant;

use fractal_spectra::verify::{criterion, CheckOutcome, VerifyConfig};

fn negative_control() -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fractal-spectra"))
        .args(["verify", "--selftest-negative"])
        .output()
        .expect("binary runs");
    let code = out.status.code();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let named = stdout.contains("oracle:g:1");
    (
        code == Some(3) && named,
        format!("exit {code:?}, corrupted check named: {named}"),
    )
}

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    let started = Instant::now();
    let results: Vec<(u8, Vec<CheckOutcome>)> = std::thread::scope(|scope| {
        let cfg = &cfg;
        let handles: Vec<_> = (1..=9u8)
            .map(|k| (k, scope.spawn(move || criterion(k, cfg))))
            .collect();
        handles
            .into_iter()
            .map(|(k, h)| (k, h.join().expect("criterion thread")))
            .collect()
    });

    let mut all = true;
    for (k, checks) in &results {
        let failed: Vec<&CheckOutcome> = checks.iter().filter(|c| !c.pass).collect();
        let pass = !checks.is_empty() && failed.is_empty();
        all &= pass;
        println!(
            "criterion {k}: {} ({} checks)",
            if pass { "PASS" } else { "FAIL" },
            checks.len()
        );
        for c in failed {
            println!("    failed {}: {}", c.name, c.detail);
        }
    }
    let (pass, detail) = negative_control();
    all &= pass;
    println!(
        "criterion 10: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    println!(
        "acceptance: {} in {:.1}s",
        if all { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
