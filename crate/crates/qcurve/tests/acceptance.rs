//! Acceptance runner: one line per criterion with its time budget.

use std::process::ExitCode;
use std::time::Duration;

use qcurve::checks::{self, timed, SuiteResult};
use qcurve::par::Exec;

type Criterion = (usize, &'static str, Duration, Box<dyn Fn() -> SuiteResult>);

fn main() -> ExitCode {
    let exec = Exec::default();
    let criteria: Vec<Criterion> = vec![
        (
            1,
            "table1 golden suite",
            Duration::from_secs(1),
            Box::new(|| timed("table1", checks::table1_suite)),
        ),
        (
            2,
            "blow-up counts",
            Duration::from_secs(1),
            Box::new(|| timed("blowups", checks::blowup_suite)),
        ),
        (
            3,
            "lattice cross-check",
            Duration::from_secs(5),
            Box::new(|| timed("lattice", || checks::lattice_suite(3, 50))),
        ),
        (
            4,
            "wkb golden series",
            Duration::from_secs(10),
            Box::new(|| timed("wkb", checks::wkb_suite)),
        ),
        (
            5,
            "central quantization identity",
            Duration::from_secs(120),
            Box::new(move || timed("cross", || checks::central_suite(5, exec))),
        ),
        (
            6,
            "oracle triangulation",
            Duration::from_secs(300),
            Box::new(move || timed("oracles", || checks::oracle_suite(exec))),
        ),
        (
            7,
            "gauss wavefunction",
            Duration::from_secs(30),
            Box::new(|| timed("gauss", checks::gauss_suite)),
        ),
        (
            8,
            "property suites",
            Duration::from_secs(120),
            Box::new(move || timed("properties", || checks::property_suite(5, 500, exec))),
        ),
    ];

    let mut all = true;
    for (n, label, budget, run) in criteria {
        let r = run();
        let in_time = r.seconds < budget.as_secs_f64();
        let ok = r.passed() && in_time;
        all &= ok;
        println!(
            "criterion {n}: {} {label} ({} checks, {:.2}s of {}s)",
            if ok { "PASS" } else { "FAIL" },
            r.checks.len(),
            r.seconds,
            budget.as_secs()
        );
        for c in r.failures() {
            println!("    {}: {}", c.name, c.detail);
        }
        if !in_time {
            println!("    over time budget");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
