//! Acceptance gate: every criterion at tolerance 0 with its runtime limit.
//! Prints one `[PASS]`/`[FAIL]` line per criterion and exits nonzero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use amortized::cost::amortized_step;
use amortized::stack;
use amortized::verify::gen::{self, MAX_MULTIPOP, MAX_STACK_HEIGHT};
use amortized::verify::{
    oracle_check, run_bound_suite, run_contract_suite, timing_crosscheck, GenConfig, Structure,
    VerifyReport, VerifyRun,
};

const TOTAL_LIMIT: Duration = Duration::from_secs(180);

type Outcome = Result<String, String>;

/// Cases per check, or an error if a check ran no cases or produced any
/// finding. Truncated finding lists fail every check conservatively.
fn clean(report: &VerifyReport, checks: &[&str]) -> Result<u64, String> {
    let truncated = report.violations.len() as u64 != report.violation_count
        || report.oracle_mismatches.len() as u64 != report.mismatch_count;
    let mut total = 0;
    for &check in checks {
        let n = report.cases(check);
        if n == 0 {
            return Err(format!(
                "{}/{}: no `{check}` cases ran",
                report.structure, report.suite
            ));
        }
        let hit = report.violations.iter().find(|v| v.check == check);
        if let Some(v) = hit {
            return Err(format!(
                "{check}: {} on {} gave {} > {}",
                v.operation, v.input, v.observed, v.bound
            ));
        }
        if let Some(m) = report.oracle_mismatches.iter().find(|m| m.check == check) {
            return Err(format!(
                "{check}: {} on {} expected {} observed {}",
                m.operation, m.input, m.expected, m.observed
            ));
        }
        if truncated {
            return Err(format!(
                "{}/{}: findings truncated",
                report.structure, report.suite
            ));
        }
        total += n;
    }
    Ok(total)
}

fn whole(report: &VerifyReport) -> Result<u64, String> {
    if report.passed() {
        Ok(report.cases_run)
    } else {
        Err(report.to_text())
    }
}

fn ac01_push_exact() -> Outcome {
    let cfg = GenConfig::for_structure(Structure::Stack);
    let stacks = gen::exhaustive_stacks(&cfg);
    let heights: Vec<usize> = stacks.iter().map(|s| s.height()).collect();
    if heights != (0..=MAX_STACK_HEIGHT).collect::<Vec<_>>() {
        return Err(format!("enumerated heights {heights:?}"));
    }
    let mut n = 0;
    for s in &stacks {
        for x in [i64::MIN, -1, 0, 1, 7, i64::MAX] {
            let pushed = stack::push(x, s);
            let a = amortized_step(
                stack::push_time(&x, s),
                stack::potential(s),
                stack::potential(&pushed),
            );
            if a != 2 {
                return Err(format!("push {x} onto {:?}: amortized {a}", s.to_vec()));
            }
            n += 1;
        }
    }
    let report = run_bound_suite(
        Structure::Stack,
        &GenConfig {
            num_traces: 0,
            ..cfg
        },
    );
    let suite = clean(&report, &["push"])?;
    Ok(format!(
        "{n} pushes amortize to exactly 2; {suite} suite cases"
    ))
}

fn ac02_multipop(report: &VerifyReport) -> Outcome {
    let cfg = GenConfig {
        num_traces: 0,
        ..GenConfig::for_structure(Structure::Stack)
    };
    let exhaustive = run_bound_suite(Structure::Stack, &cfg);
    let n = clean(&exhaustive, &["multipop"])?;
    let expected = ((MAX_STACK_HEIGHT + 1) * (MAX_MULTIPOP as usize + 1)) as u64;
    if n != expected {
        return Err(format!(
            "{n} exhaustive multipop cases, expected {expected}"
        ));
    }
    let traced = clean(report, &["multipop"])?;
    Ok(format!(
        "{n} exhaustive (h 0..8, k 0..10) + {} traced cases within 2",
        traced - n
    ))
}

fn ac03_heap_insert(report: &VerifyReport) -> Outcome {
    let cfg = GenConfig::for_structure(Structure::Heap);
    let sizes: std::collections::BTreeSet<usize> = gen::exhaustive_forests(&cfg)
        .iter()
        .map(|f| f.len())
        .collect();
    if sizes != (0..=cfg.max_size).collect() {
        return Err("forest sizes 0..=64 are not all enumerated".into());
    }
    let orders: Vec<&str> = gen::heap_orders(&cfg)
        .into_iter()
        .map(|(name, _)| name)
        .collect();
    let n = clean(report, &["insert"])?;
    Ok(format!(
        "{n} inserts within 2 over orders {}",
        orders.join(", ")
    ))
}

fn ac04_heap_shape(report: &VerifyReport) -> Outcome {
    let n = clean(
        report,
        &["shape", "binary_increment", "counter_bits", "popcount"],
    )?;
    Ok(format!("{n} shape and counter checks"))
}

fn ac05_cons_snoc(report: &VerifyReport) -> Outcome {
    let n = clean(report, &["cons", "snoc"])?;
    Ok(format!(
        "{n} cons/snoc cases within 3 (every spine level, plus traces)"
    ))
}

fn ac06_folds(report: &VerifyReport) -> Outcome {
    let n = clean(report, &["fold_cons", "fold_snoc"])?;
    Ok(format!("{n} fold cases within 3|as| + 1"))
}

fn ac07_glue(report: &VerifyReport) -> Outcome {
    let n = clean(report, &["glue"])?;
    Ok(format!("{n} glue cases within log2(max(n1 + n2, 2)) + 14"))
}

fn ac08_telescope(bounds: &[&VerifyReport]) -> Outcome {
    let mut n = 0;
    for r in bounds {
        let traces = clean(r, &["telescope"])?;
        clean(r, &["actual_within_bounds"])?;
        if traces != GenConfig::default().num_traces as u64 {
            return Err(format!("{}: {traces} traces", r.structure));
        }
        n += traces;
    }
    Ok(format!(
        "{n} traces telescope exactly and stay within the summed bounds"
    ))
}

fn ac09_banker(report: &VerifyReport) -> Outcome {
    let n = clean(report, &["banker_equals_height", "banker_solvent"])?;
    Ok(format!(
        "{n} banker checks (balance = height, never negative)"
    ))
}

fn ac10_oracles() -> Outcome {
    let mut n = 0;
    for (s, per_step) in [
        (Structure::Stack, "trace_model"),
        (Structure::Heap, "multiset"),
        (Structure::FingerTree, "trace_model"),
    ] {
        let r = oracle_check(s, &GenConfig::for_structure(s));
        n += whole(&r)?;
        clean(&r, &[per_step])?;
    }
    Ok(format!("{n} oracle comparisons, zero mismatches"))
}

fn ac11_timing() -> Outcome {
    let mut n = 0;
    for s in Structure::ALL {
        let r = timing_crosscheck(s, &GenConfig::for_structure(s));
        n += whole(&r)?;
        clean(&r, &["trace_metered"])?;
    }
    Ok(format!("{n} metered counts equal their timing functions"))
}

fn ac12_contracts() -> Outcome {
    let r = run_contract_suite(&GenConfig::for_structure(Structure::FingerTree));
    let n = clean(
        &r,
        &[
            "to_tuples_prime_len",
            "tuples_to_list_lower",
            "tuples_to_list_upper",
            "log2_mono",
            "div_cancel",
            "length_law",
        ],
    )?;
    whole(&r)?;
    if r.cases("to_tuples_prime_len") != 9 || r.cases("log2_mono") != 4096 * 4097 / 2 {
        return Err("contract sweep incomplete".into());
    }
    Ok(format!("{n} helper-law cases"))
}

fn ac13_determinism() -> Outcome {
    let cfg = GenConfig::default();
    let a = VerifyRun::execute(&cfg, &Structure::ALL)
        .without_timing()
        .to_json();
    let b = VerifyRun::execute(&cfg, &Structure::ALL)
        .without_timing()
        .to_json();
    if a != b {
        return Err("reports differ".into());
    }
    let other = VerifyRun::execute(
        &GenConfig {
            seed: cfg.seed + 1,
            ..cfg
        },
        &[Structure::Stack],
    );
    let same_seed = VerifyRun::execute(&cfg, &[Structure::Stack]);
    if other.without_timing().to_json() == same_seed.without_timing().to_json() {
        return Err("seed does not reach the generators".into());
    }
    Ok(format!("{} bytes of JSON identical across runs", a.len()))
}

struct Gate {
    results: Vec<bool>,
}

impl Gate {
    fn run(&mut self, id: &str, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let started = Instant::now();
        let outcome = f();
        self.report(id, name, limit, started.elapsed(), outcome);
    }

    fn report(
        &mut self,
        id: &str,
        name: &str,
        limit: Option<Duration>,
        took: Duration,
        outcome: Outcome,
    ) {
        let outcome = match (outcome, limit) {
            (Ok(_), Some(limit)) if took >= limit => {
                Err(format!("took {took:.2?}, limit {limit:?}"))
            }
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("[{tag}] {id} {name} ({took:.2?}): {detail}");
        self.results.push(outcome.is_ok());
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let started = Instant::now();
    let out = f();
    (out, started.elapsed())
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut gate = Gate {
        results: Vec::new(),
    };
    let secs = |s| Some(Duration::from_secs(s));

    gate.run("AC-01", "stack push bound", secs(1), ac01_push_exact);
    let (stack_bounds, t) = timed(|| {
        run_bound_suite(
            Structure::Stack,
            &GenConfig::for_structure(Structure::Stack),
        )
    });
    let (out, t2) = timed(|| ac02_multipop(&stack_bounds));
    gate.report("AC-02", "stack multipop bound", secs(1), t + t2, out);

    let (heap_bounds, t) =
        timed(|| run_bound_suite(Structure::Heap, &GenConfig::for_structure(Structure::Heap)));
    gate.report(
        "AC-03",
        "heap insert bound",
        secs(5),
        t,
        ac03_heap_insert(&heap_bounds),
    );
    let (heap_oracle, t) =
        timed(|| oracle_check(Structure::Heap, &GenConfig::for_structure(Structure::Heap)));
    gate.report(
        "AC-04",
        "heap shape",
        secs(5),
        t,
        ac04_heap_shape(&heap_oracle),
    );

    // one finger-tree bound run serves AC-05..07; each is held to the whole run's time
    let (finger_bounds, t) = timed(|| {
        run_bound_suite(
            Structure::FingerTree,
            &GenConfig::for_structure(Structure::FingerTree),
        )
    });
    gate.report(
        "AC-05",
        "finger-tree cons/snoc bounds",
        secs(30),
        t,
        ac05_cons_snoc(&finger_bounds),
    );
    gate.report(
        "AC-06",
        "fold lemmas",
        secs(10),
        t,
        ac06_folds(&finger_bounds),
    );
    gate.report(
        "AC-07",
        "append bound",
        secs(60),
        t,
        ac07_glue(&finger_bounds),
    );

    gate.run("AC-08", "telescoping identity", None, || {
        ac08_telescope(&[&stack_bounds, &heap_bounds, &finger_bounds])
    });
    gate.run("AC-09", "banker simulation", None, || {
        ac09_banker(&stack_bounds)
    });
    gate.run("AC-10", "oracle equivalence", None, ac10_oracles);
    gate.run("AC-11", "timing crosscheck", None, ac11_timing);
    gate.run("AC-12", "helper contracts", None, ac12_contracts);
    gate.run("AC-13", "determinism", None, ac13_determinism);

    let took = started.elapsed();
    let passed = gate.results.iter().filter(|&&ok| ok).count();
    let within = took < TOTAL_LIMIT;
    println!(
        "acceptance: {passed}/{} criteria passed in {took:.2?} (limit {TOTAL_LIMIT:?}){}",
        gate.results.len(),
        if within { "" } else { ", OVER TIME" }
    );
    if passed == gate.results.len() && within {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
