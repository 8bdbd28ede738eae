//! Acceptance suite: one test per gate criterion, each printing a PASS
//! line once its assertions hold (visible with `--nocapture`).
//!
//! Run with: `cargo test -p sflm --test acceptance -- --nocapture`

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sflm::kernel::{baseline_scores, sflm};
use sflm::localizer::localize;
use sflm::minilang::{self, build_cfg, parse_suite, run_suite, DEFAULT_FUEL};
use sflm::spectrum::{hit_function, BinaryVector, Bit, SpectrumMatrix};

fn bv(bits: &[u8]) -> BinaryVector {
    BinaryVector::from_bits(bits).unwrap()
}

/// The six-block spectrum of the faulty rational sort: a passing run that
/// skips the swap block and a failing run that hits everything.
fn six_block_spectrum() -> SpectrumMatrix {
    SpectrumMatrix::new(
        vec![bv(&[1, 1, 1, 1, 0, 1]), bv(&[1, 1, 1, 1, 1, 1])],
        bv(&[0, 1]),
        (0..6).map(|k| k.to_string()).collect(),
    )
    .unwrap()
}

/// Independent scoring oracle: counts positions directly. Shared hits go
/// to the numerator, shared hits plus disagreements to the denominator;
/// shared misses count toward neither. None when nothing has evidence.
fn counted_score(u: &[u8], v: &[u8]) -> Option<f64> {
    let both = u.iter().zip(v).filter(|(a, b)| **a == 1 && **b == 1).count();
    let mismatch = u.iter().zip(v).filter(|(a, b)| a != b).count();
    if both + mismatch == 0 {
        None
    } else {
        Some(both as f64 / (both + mismatch) as f64)
    }
}

fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.random_range(0..=1)).collect()
}

#[test]
fn criterion_1_case_study_reproduction() {
    let matrix = six_block_spectrum();
    let started = Instant::now();
    let report = localize(&matrix, false);
    let elapsed = started.elapsed();

    for entry in &report.entries {
        let expected = if entry.id == 4 { 1.0 } else { 0.5 };
        assert!(
            (entry.sflm - expected).abs() <= 1e-12,
            "block {} scored {}, expected {expected}",
            entry.id,
            entry.sflm
        );
    }
    assert_eq!(report.verdict, vec![4]);
    assert!(
        elapsed.as_micros() < 1000,
        "localize took {elapsed:?}, budget is 1 ms"
    );
    println!(
        "acceptance 1: PASS — block 4 scores 1.0, blocks 0,1,2,3,5 score 0.5, verdict {{4}} ({elapsed:?})"
    );
}

#[test]
fn criterion_2_end_to_end_reproduction() {
    let started = Instant::now();

    let source = include_str!("../fixtures/rational_sort.mini");
    let program = minilang::parse(source).expect("fixture parses");
    let cfg = build_cfg(&program);
    assert_eq!(cfg.block_count(), 6);

    let suite = include_str!("../fixtures/rational_sort.tests");
    let cases = parse_suite(suite).expect("fixture suite parses");
    assert_eq!(cases.len(), 2);

    let (spectrum, warnings) = run_suite(&program, &cfg, &cases, DEFAULT_FUEL).unwrap();
    assert!(warnings.is_empty());
    // Sorted input: misses the swap block, passes.
    assert_eq!(spectrum.rows()[0], bv(&[1, 1, 1, 1, 0, 1]));
    // Unsorted input: hits every block, fails.
    assert_eq!(spectrum.rows()[1], bv(&[1, 1, 1, 1, 1, 1]));
    assert_eq!(spectrum.decisions(), &bv(&[0, 1]));
    assert_eq!(spectrum, six_block_spectrum());

    let report = localize(&spectrum, false);
    assert_eq!(report.verdict, vec![4], "verdict must be the swap block");

    let elapsed = started.elapsed();
    assert!(elapsed.as_millis() < 1000, "pipeline took {elapsed:?}");
    println!(
        "acceptance 2: PASS — executed fixture reproduces the spectrum and implicates the swap block ({elapsed:?})"
    );
}

#[test]
fn criterion_3_kernel_range_over_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5f13_a110);
    let mut checked = 0u32;
    while checked < 10_000 {
        let len = rng.random_range(1..=64);
        let u = random_bits(&mut rng, len);
        let v = random_bits(&mut rng, len);
        if u.iter().all(|&b| b == 0) && v.iter().all(|&b| b == 0) {
            continue;
        }
        let score = sflm(&bv(&u), &bv(&v)).unwrap();
        assert!(!score.no_evidence());
        assert!(
            (0.0..=1.0).contains(&score.value()),
            "score {} out of range for u={u:?} v={v:?}",
            score.value()
        );
        checked += 1;
    }
    println!("acceptance 3: PASS — 10000 random pairs (lengths 1–64) all score within [0, 1]");
}

#[test]
fn criterion_4_closed_form_oracle_equivalence() {
    let mut pairs = 0u64;
    for len in 1..=8usize {
        for ubits in 0u32..(1 << len) {
            for vbits in 0u32..(1 << len) {
                let u: Vec<u8> = (0..len).map(|k| ((ubits >> k) & 1) as u8).collect();
                let v: Vec<u8> = (0..len).map(|k| ((vbits >> k) & 1) as u8).collect();
                let got = sflm(&bv(&u), &bv(&v)).unwrap();
                match counted_score(&u, &v) {
                    None => assert!(got.no_evidence()),
                    Some(expected) => {
                        assert!(!got.no_evidence());
                        assert!(
                            (got.value() - expected).abs() <= 1e-12,
                            "kernel {} vs oracle {expected} for u={u:?} v={v:?}",
                            got.value()
                        );
                        let jaccard = baseline_scores(&bv(&u), &bv(&v)).unwrap().jaccard;
                        assert!(
                            (got.value() - jaccard).abs() <= 1e-12,
                            "kernel {} vs jaccard {jaccard} for u={u:?} v={v:?}",
                            got.value()
                        );
                        pairs += 1;
                    }
                }
            }
        }
    }
    println!(
        "acceptance 4: PASS — {pairs} exhaustive pairs (length ≤ 8) match the counting oracle and the Jaccard baseline to 1e-12"
    );
}

#[test]
fn criterion_5_symmetry_and_padding_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1ce);
    for _ in 0..10_000 {
        let len = rng.random_range(1..=48);
        let u = random_bits(&mut rng, len);
        let v = random_bits(&mut rng, len);

        let uv = sflm(&bv(&u), &bv(&v)).unwrap();
        let vu = sflm(&bv(&v), &bv(&u)).unwrap();
        assert_eq!(uv, vu, "symmetry must be exact for u={u:?} v={v:?}");

        let pad = rng.random_range(1..=16);
        let mut up = u.clone();
        let mut vp = v.clone();
        up.extend(std::iter::repeat_n(0, pad));
        vp.extend(std::iter::repeat_n(0, pad));
        let padded = sflm(&bv(&up), &bv(&vp)).unwrap();
        assert_eq!(uv, padded, "padding changed the score for u={u:?} v={v:?}");
    }
    println!(
        "acceptance 5: PASS — 10000 pairs: symmetry exact, ≤16 appended shared-zero positions change nothing"
    );
}

#[test]
fn criterion_6_hit_function_table() {
    assert_eq!(hit_function(Bit::ZERO, Bit::ZERO).value(), -1);
    assert_eq!(hit_function(Bit::ZERO, Bit::ONE).value(), 0);
    assert_eq!(hit_function(Bit::ONE, Bit::ZERO).value(), 0);
    assert_eq!(hit_function(Bit::ONE, Bit::ONE).value(), 1);
    for a in [Bit::ZERO, Bit::ONE] {
        for b in [Bit::ZERO, Bit::ONE] {
            let closed_form = i16::from(a.as_u8()) + i16::from(b.as_u8()) - 1;
            assert_eq!(i16::from(hit_function(a, b).value()), closed_form);
        }
    }
    println!("acceptance 6: PASS — all four hit-function rows hold and equal a + b − 1");
}

#[test]
fn criterion_7_cfg_leader_rules() {
    // if/else with a join: statements s0 = if (then [s1], else [s2]),
    // s3 = print. s1 and s2 are branch targets; s3 is the target of the
    // then-arm's jump over the else arm. Four single-statement blocks.
    let p = minilang::parse("if (c > 0) { x = 1; } else { x = 2; } print(x);").unwrap();
    let cfg = build_cfg(&p);
    let ranges: Vec<_> = cfg.blocks().iter().map(|b| b.stmts.clone()).collect();
    assert_eq!(ranges, vec![0..1, 1..2, 2..3, 3..4]);
    let edges: Vec<_> = cfg.edges().iter().copied().collect();
    assert_eq!(edges, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);

    // while loop: s0,s1 = straight-line prologue, s2 = header, s3,s4 =
    // body, s5 = exit. The header is the back-edge target from s4, the
    // body head and the exit are branch targets of the header.
    let p = minilang::parse(
        "s = 0; i = 1; while (i <= n) { s = s + i; i = i + 1; } print(s);",
    )
    .unwrap();
    let cfg = build_cfg(&p);
    let ranges: Vec<_> = cfg.blocks().iter().map(|b| b.stmts.clone()).collect();
    assert_eq!(ranges, vec![0..2, 2..3, 3..5, 5..6]);
    let edges: Vec<_> = cfg.edges().iter().copied().collect();
    assert_eq!(edges, vec![(0, 1), (1, 2), (1, 3), (2, 1)]);

    println!(
        "acceptance 7: PASS — if/else and loop fixtures match the hand-derived partitions and edge sets"
    );
}

#[test]
fn criterion_8_pipeline_determinism() {
    use std::process::Command;

    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let program = manifest.join("fixtures/rational_sort.mini");
    let suite = manifest.join("fixtures/rational_sort.tests");

    let run_once = || {
        let out = Command::new(env!("CARGO_BIN_EXE_sflm"))
            .arg("run")
            .arg(&program)
            .arg(&suite)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let csv_a = run_once();
    let csv_b = run_once();
    assert_eq!(csv_a, csv_b, "spectrum CSV must be byte-identical");

    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("spectrum.csv");
    std::fs::write(&csv_path, &csv_a).unwrap();
    let localize_once = || {
        let out = Command::new(env!("CARGO_BIN_EXE_sflm"))
            .args(["localize", "--with-baselines", "--format", "json"])
            .arg(&csv_path)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let json_a = localize_once();
    let json_b = localize_once();
    assert_eq!(json_a, json_b, "report JSON must be byte-identical");

    // Same property for the in-process pipeline.
    let source = std::fs::read_to_string(&program).unwrap();
    let suite_text = std::fs::read_to_string(&suite).unwrap();
    let once = || {
        let program = minilang::parse(&source).unwrap();
        let cfg = build_cfg(&program);
        let cases = parse_suite(&suite_text).unwrap();
        let (spectrum, _) = run_suite(&program, &cfg, &cases, DEFAULT_FUEL).unwrap();
        let report = localize(&spectrum, true);
        (spectrum.to_csv(), report.to_json())
    };
    assert_eq!(once(), once());

    println!("acceptance 8: PASS — repeated runs produce byte-identical CSV and JSON");
}
