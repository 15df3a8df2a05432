// Temporary pilot probe; removed once acceptance scales are calibrated.
use netmed_core::sampler::ChainConfig;
use netmed_core::simstudy::{run_condition, SimCondition};
use std::time::Instant;

#[test]
fn pilot_c5_full_scale() {
    let cond = SimCondition {
        dim: 2,
        n: 200,
        med_level: 0.1521,
        c_prime: 0.14,
        n_reps: 100,
        base_seed: 500,
    };
    let cfg = ChainConfig::desk_scale(0);
    let t0 = Instant::now();
    let report = run_condition(&cond, &cfg);
    println!(
        "C5 full (100 reps): {:.1?}; med rel bias {:.2}% cover {:.1}% width {:.3}; failed {}",
        t0.elapsed(),
        report.med.rel_bias_percent,
        report.med.coverage_percent,
        report.med.mean_ci_width,
        report.n_failed,
    );
    let misses: Vec<usize> = report
        .replications
        .iter()
        .filter_map(|r| {
            r.estimates.as_ref().and_then(|e| {
                if e.med.ci_lower > 0.1521 || e.med.ci_upper < 0.1521 {
                    Some(r.rep)
                } else {
                    None
                }
            })
        })
        .collect();
    println!("C5 misses at reps: {misses:?}");
}

#[test]
fn pilot_c6_null_coverage() {
    let cond = SimCondition {
        dim: 2,
        n: 250,
        med_level: 0.0,
        c_prime: 0.0,
        n_reps: 12,
        base_seed: 600,
    };
    let cfg = ChainConfig::desk_scale(0);
    let t0 = Instant::now();
    let report = run_condition(&cond, &cfg);
    println!(
        "C6 pilot (12 reps): {:.1?}; med cover {:.1}%; rel bias {:.3}; failed {}",
        t0.elapsed(),
        report.med.coverage_percent,
        report.med.rel_bias_percent,
        report.n_failed,
    );
}

#[test]
fn pilot_c8_small_n() {
    let cfg = ChainConfig::desk_scale(0);
    for (n, seed) in [(50usize, 800u64), (100, 801)] {
        let cond = SimCondition {
            dim: 2,
            n,
            med_level: 0.1521,
            c_prime: 0.14,
            n_reps: 30,
            base_seed: seed,
        };
        let t0 = Instant::now();
        let report = run_condition(&cond, &cfg);
        println!(
            "C8 N={n} (30 reps): {:.1?}; med |rel bias| {:.2}% width {:.3} cover {:.1}%; failed {}",
            t0.elapsed(),
            report.med.rel_bias_percent.abs(),
            report.med.mean_ci_width,
            report.med.coverage_percent,
            report.n_failed,
        );
    }
}
