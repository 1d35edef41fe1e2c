use rand::Rng;

use crate::finger_tree::{self as ft, Tuple};

use super::gen::{self, Stream};
use super::{GenConfig, Recorder, Structure, VerifyReport};

/// Largest argument of the exhaustive log2 monotonicity sweep.
pub const LOG2_SWEEP: i64 = 4096;
/// Random lists and integers drawn for the sampled laws.
pub const SAMPLES: usize = 10_000;

/// Tuples produced for a list of `n` items, per the piecewise contract.
fn expected_tuples(n: usize) -> usize {
    match n {
        0 => 0,
        2..=3 => 1,
        4..=6 => 2,
        _ => 3,
    }
}

/// Length contracts of the tuple helpers and the arithmetic laws behind the
/// logarithmic glue bound.
pub fn run_contract_suite(cfg: &GenConfig) -> VerifyReport {
    let cfg = GenConfig {
        structure: Structure::FingerTree,
        ..cfg.clone()
    };
    let mut rec = Recorder::new("contracts", &cfg);
    let mut rng = gen::rng(&cfg, Stream::Contracts);

    for n in 0..=11usize {
        let xs: Vec<usize> = (0..n).collect();
        let input = || (format!("{n} items"), "to_tuples_prime".to_string());
        match ft::to_tuples_prime(&xs) {
            Ok(tuples) if n == 0 || (2..=9).contains(&n) => {
                rec.agree(
                    "to_tuples_prime_len",
                    expected_tuples(n),
                    tuples.len(),
                    input,
                );
                rec.agree(
                    "to_tuples_prime_flatten",
                    xs.clone(),
                    ft::tuples_to_list(&tuples),
                    input,
                );
            }
            other => rec.agree(
                "to_tuples_prime_domain",
                n == 0 || (2..=9).contains(&n),
                other.is_ok(),
                input,
            ),
        }
        let input = || (format!("{n} items"), "to_tuples".to_string());
        match ft::to_tuples(&xs) {
            Ok(tuples) if (2..=9).contains(&n) => {
                rec.agree("to_tuples_len", expected_tuples(n), tuples.len(), input);
                rec.agree(
                    "to_tuples_flatten",
                    xs.clone(),
                    ft::tuples_to_list(&tuples),
                    input,
                );
            }
            other => rec.agree(
                "to_tuples_domain",
                (2..=9).contains(&n),
                other.is_ok(),
                input,
            ),
        }
    }

    for _ in 0..SAMPLES {
        let len = rng.gen_range(0..=20);
        let tuples: Vec<Tuple<u8>> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Tuple::Pair(0, 1)
                } else {
                    Tuple::Triple(0, 1, 2)
                }
            })
            .collect();
        let y = ft::tuples_to_list(&tuples).len() as i64;
        let x = tuples.len() as i64;
        let input = || (format!("{x} tuples"), "tuples_to_list".to_string());
        rec.bound("tuples_to_list_lower", 2 * x, y, input);
        rec.bound("tuples_to_list_upper", y, 3 * x, input);
    }

    let table: Vec<u32> = (1..=LOG2_SWEEP)
        .map(|n| ft::log2(n).expect("n is positive"))
        .collect();
    for (i, &lx) in table.iter().enumerate() {
        let n = i as i64 + 1;
        let floor_ok = (1i64 << lx) <= n && n < (1i64 << (lx + 1));
        rec.agree("log2_floor", true, floor_ok, || {
            (format!("n = {n}"), "log2".to_string())
        });
    }
    // every pair x <= y; passing pairs are counted in bulk
    let mut passing = 0u64;
    for (i, &lx) in table.iter().enumerate() {
        for (j, &ly) in table.iter().enumerate().skip(i) {
            if lx <= ly {
                passing += 1;
            } else {
                rec.bound("log2_mono", lx as i64, ly as i64, || {
                    (
                        format!("x = {}, y = {}", i + 1, j + 1),
                        "log2 x <= log2 y".to_string(),
                    )
                });
            }
        }
    }
    rec.bulk("log2_mono", passing);
    for n in [0, -1, -4096, i64::MIN] {
        rec.agree(
            "log2_domain",
            Err(ft::FingerError::Domain(n)),
            ft::log2(n),
            || (format!("n = {n}"), "log2".to_string()),
        );
    }

    let half = i64::MAX / 2;
    let edges = [0, 1, -1, half, -half, i64::MIN / 2];
    let drawn: Vec<i64> = (0..SAMPLES).map(|_| rng.gen_range(-half..=half)).collect();
    for x in edges.into_iter().chain(drawn) {
        rec.agree("div_cancel", x, (2 * x).div_euclid(2), || {
            (format!("x = {x}"), "(2x) div 2".to_string())
        });
    }

    for _ in 0..SAMPLES {
        let xs: Vec<u32> = (0..rng.gen_range(0..=50)).map(|_| rng.gen()).collect();
        let ys: Vec<u32> = (0..rng.gen_range(0..=50)).map(|_| rng.gen()).collect();
        let joined = ft::list_append(&xs, &ys);
        let input = || {
            (
                format!("|xs| = {}, |ys| = {}", xs.len(), ys.len()),
                "xs ++ ys".to_string(),
            )
        };
        rec.agree("length_law", xs.len() + ys.len(), joined.len(), input);
        rec.agree(
            "append_model",
            [xs.as_slice(), ys.as_slice()].concat(),
            joined,
            input,
        );
    }

    rec.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contract_suite_passes_and_sweeps_every_pair() {
        let report = run_contract_suite(&GenConfig::default());
        assert!(report.passed(), "{}", report.to_text());
        let n = LOG2_SWEEP as u64;
        assert_eq!(report.cases("log2_mono"), n * (n + 1) / 2);
        assert_eq!(report.cases("to_tuples_prime_len"), 9);
        assert_eq!(report.cases("to_tuples_prime_domain"), 3);
    }

    #[test]
    fn piecewise_lengths() {
        let got: Vec<usize> = [0, 2, 3, 4, 5, 6, 7, 8, 9]
            .iter()
            .map(|&n| expected_tuples(n))
            .collect();
        assert_eq!(got, vec![0, 1, 1, 2, 2, 2, 3, 3, 3]);
    }
}
