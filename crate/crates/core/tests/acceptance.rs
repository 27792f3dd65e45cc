//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use heralded_cat::phasespace::{component_coherent_limit, component_husimi_peak};
use heralded_cat::states::{component_state, component_truncation};
use heralded_cat::verify::{run_selected, Criterion, Report, VerifyOptions};

struct Line {
    passed: bool,
    text: String,
    required: bool,
}

fn group(criterion: Criterion) -> (Report, f64) {
    let start = Instant::now();
    let report = run_selected(VerifyOptions::default(), &[criterion]).expect("verification ran");
    (report, start.elapsed().as_secs_f64())
}

fn summary(report: &Report) -> String {
    report
        .checks
        .iter()
        .map(|c| format!("{}={:.3e}{}", c.name, c.value, if c.passed { "" } else { " (failed)" }))
        .collect::<Vec<_>>()
        .join(", ")
}

fn line(title: &str, criterion: Criterion, budget: Option<f64>) -> Line {
    let (report, secs) = group(criterion);
    let in_time = budget.map_or(true, |b| secs < b);
    let timing = match budget {
        Some(b) => format!(" [{secs:.2}s, budget {b}s]"),
        None => format!(" [{secs:.2}s]"),
    };
    Line {
        passed: report.passed && in_time,
        text: format!("{title}: {}{timing}", summary(&report)),
        required: true,
    }
}

#[test]
fn acceptance() {
    let mut lines = vec![
        line("coincidence priors k=1..4", Criterion::CoincidencePriors, Some(1.0)),
        line("conditional state vs beam-splitter oracle", Criterion::OracleEquivalence, Some(30.0)),
        line("closed-form norms vs series", Criterion::ClosedVsSeries, None),
        line("normalisation and marginals", Criterion::Normalization, None),
        line("negativity and parity", Criterion::NegativityParity, None),
        line("Mandel Q signs", Criterion::MandelQ, None),
        line("detector limits", Criterion::DetectorLimits, None),
        line("Hermite summation identities", Criterion::HermiteSums, None),
    ];

    // The usual statement puts the large-m component at γ = √(αm). The exact
    // Husimi maximum sits near √(αm/(1−α)) instead; both are reported, only
    // the second is required.
    let comp = component_state(1, 0.6, 12, component_truncation(0.6, 12).unwrap()).unwrap();
    let (x, p) = component_husimi_peak(&comp);
    let gamma = component_coherent_limit(0.6, 12);
    let (cx, cp) = (2f64.sqrt() * gamma.re, 2f64.sqrt() * gamma.im);
    let off = ((x - cx).powi(2) + (p - cp).powi(2)).sqrt() / (cx * cx + cp * cp).sqrt();
    lines.push(Line {
        passed: off < 0.05,
        text: format!(
            "component peak vs gamma = sqrt(alpha m): peak (x,p)=({x:.4},{p:.4}), predicted ({cx:.4},{cp:.4}), \
             off by {:.1}% (limit 5%)",
            100.0 * off
        ),
        required: false,
    });
    let (report, secs) = group(Criterion::ComponentAsymptotics);
    lines.push(Line {
        passed: report.passed,
        text: format!(
            "component peak vs sqrt(alpha m/(1-alpha)): off by {:.2}% (limit 5%) [{secs:.2}s]",
            100.0 * report.checks[0].residual
        ),
        required: true,
    });

    lines.push(line("curve structure (two peaks, fringes, fading with k)", Criterion::CurveStructure, None));
    lines.push(line("phase-space closed forms vs Fock sums", Criterion::PhaseSpaceOracles, None));

    for l in &lines {
        let tag = match (l.passed, l.required) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (not required)",
        };
        println!("{tag} {}", l.text);
    }
    let failed: Vec<&str> = lines.iter().filter(|l| l.required && !l.passed).map(|l| l.text.as_str()).collect();
    assert!(failed.is_empty(), "failed: {failed:#?}");
}
