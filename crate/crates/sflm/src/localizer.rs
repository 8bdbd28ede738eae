//! Scores every block column against the decision vector, ranks the blocks,
//! and assembles the suspiciousness report.
//!
//! The most suspicious block is the one whose hit pattern across runs is
//! most similar to the pass/fail pattern. Ties are broken by ascending
//! block id and ranks use competition ranking (tied entries share the
//! smallest rank), so identical inputs always produce identical reports.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{baseline_scores, sflm, BaselineScores};
use crate::spectrum::SpectrumMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LocalizerError {
    #[error("unknown block id {0}")]
    UnknownBlock(usize),
}

/// One ranked block of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub id: usize,
    pub label: String,
    pub sflm: f64,
    pub no_evidence: bool,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baselines: Option<BaselineScores>,
}

/// Per-block suspiciousness, most suspicious first.
///
/// `verdict` holds the ids of the blocks sharing the maximum score among
/// blocks that carry evidence; `caveats` flags degenerate spectra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuspiciousnessReport {
    #[serde(rename = "blocks")]
    pub entries: Vec<ReportEntry>,
    pub verdict: Vec<usize>,
    pub caveats: Vec<String>,
}

/// Scores each block column against the decision vector and ranks blocks
/// by descending score.
///
/// Blocks whose column carries no evidence (never executed while no run
/// failed) sink to the bottom regardless of their neutral 0.5 score and
/// never enter the verdict: an unexecuted block cannot have caused the
/// observed failures. Degenerate decision vectors (all-pass or all-fail)
/// still produce a report, with a caveat attached.
pub fn localize(matrix: &SpectrumMatrix, with_baselines: bool) -> SuspiciousnessReport {
    let decisions = matrix.decisions();
    let mut entries: Vec<ReportEntry> = (0..matrix.block_count())
        .map(|k| {
            let column = matrix.column(k).expect("index bounded by block_count");
            let score = sflm(&column, decisions).expect("column and decisions share length S");
            let baselines = with_baselines.then(|| {
                baseline_scores(&column, decisions).expect("column and decisions share length S")
            });
            ReportEntry {
                id: k,
                label: matrix.block_labels()[k].clone(),
                sflm: score.value(),
                no_evidence: score.no_evidence(),
                rank: 0,
                baselines,
            }
        })
        .collect();

    entries.sort_by(|a, b| {
        a.no_evidence
            .cmp(&b.no_evidence)
            .then_with(|| b.sflm.total_cmp(&a.sflm))
            .then_with(|| a.id.cmp(&b.id))
    });

    for i in 0..entries.len() {
        let tied_with_previous = i > 0
            && entries[i].sflm == entries[i - 1].sflm
            && entries[i].no_evidence == entries[i - 1].no_evidence;
        entries[i].rank = if tied_with_previous {
            entries[i - 1].rank
        } else {
            i + 1
        };
    }

    let verdict = match entries.iter().find(|e| !e.no_evidence) {
        Some(top) => {
            let best = top.sflm;
            let mut ids: Vec<usize> = entries
                .iter()
                .filter(|e| !e.no_evidence && e.sflm == best)
                .map(|e| e.id)
                .collect();
            ids.sort_unstable();
            ids
        }
        None => Vec::new(),
    };

    let mut caveats = Vec::new();
    let failing = decisions.ones();
    if failing == 0 {
        caveats.push(
            "degenerate spectrum: no failing runs; scores measure similarity to an all-pass decision vector"
                .to_string(),
        );
    } else if failing == decisions.len() {
        caveats.push(
            "degenerate spectrum: no passing runs; every executed block is implicated".to_string(),
        );
    }
    if entries.iter().any(|e| e.no_evidence) {
        caveats.push(
            "some blocks carry no evidence (never executed, no failing run); ranked last and excluded from the verdict"
                .to_string(),
        );
    }

    SuspiciousnessReport {
        entries,
        verdict,
        caveats,
    }
}

/// Fraction of blocks ranked at or above the given block: its competition
/// rank divided by the block count. Lower is better.
pub fn evaluate_rank(
    report: &SuspiciousnessReport,
    true_fault: usize,
) -> Result<f64, LocalizerError> {
    let entry = report
        .entries
        .iter()
        .find(|e| e.id == true_fault)
        .ok_or(LocalizerError::UnknownBlock(true_fault))?;
    Ok(entry.rank as f64 / report.entries.len() as f64)
}

impl SuspiciousnessReport {
    /// Stable JSON rendering: fixed key order, full float precision.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Plain-text table for terminals; scores shown at four decimal places.
    pub fn to_text(&self) -> String {
        let label_width = self
            .entries
            .iter()
            .map(|e| e.label.len())
            .max()
            .unwrap_or(0)
            .max("label".len());
        let with_baselines = self.entries.iter().any(|e| e.baselines.is_some());

        let mut out = String::new();
        out.push_str(&format!(
            "{:>4}  {:>5}  {:<label_width$}  {:>6}",
            "rank", "block", "label", "sflm"
        ));
        if with_baselines {
            out.push_str(&format!(
                "  {:>9}  {:>6}  {:>7}  {:>6}",
                "tarantula", "ochiai", "jaccard", "dstar2"
            ));
        }
        out.push('\n');
        for e in &self.entries {
            out.push_str(&format!(
                "{:>4}  {:>5}  {:<label_width$}  {:>6.4}",
                e.rank, e.id, e.label, e.sflm
            ));
            if let Some(b) = &e.baselines {
                out.push_str(&format!(
                    "  {:>9.4}  {:>6.4}  {:>7.4}  {:>6.4}",
                    b.tarantula, b.ochiai, b.jaccard, b.dstar2
                ));
            }
            if e.no_evidence {
                out.push_str("  (no evidence)");
            }
            out.push('\n');
        }
        if self.verdict.is_empty() {
            out.push_str("verdict: none (no block carries evidence)\n");
        } else {
            let ids: Vec<String> = self.verdict.iter().map(ToString::to_string).collect();
            out.push_str(&format!("verdict: {}\n", ids.join(" ")));
        }
        for c in &self.caveats {
            out.push_str(&format!("caveat: {c}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::BinaryVector;
    use proptest::prelude::*;

    fn bv(bits: &[u8]) -> BinaryVector {
        BinaryVector::from_bits(bits).unwrap()
    }

    fn matrix(rows: &[&[u8]], decisions: &[u8]) -> SpectrumMatrix {
        let blocks = rows[0].len();
        SpectrumMatrix::new(
            rows.iter().map(|r| bv(r)).collect(),
            bv(decisions),
            (0..blocks).map(|k| k.to_string()).collect(),
        )
        .unwrap()
    }

    /// Two runs over six blocks: the passing run misses block 4, the
    /// failing run hits everything.
    fn six_block_matrix() -> SpectrumMatrix {
        matrix(&[&[1, 1, 1, 1, 0, 1], &[1, 1, 1, 1, 1, 1]], &[0, 1])
    }

    #[test]
    fn six_block_case_ranks_the_skipped_block_first() {
        let report = localize(&six_block_matrix(), false);
        assert_eq!(report.entries[0].id, 4);
        assert_eq!(report.entries[0].sflm, 1.0);
        assert_eq!(report.entries[0].rank, 1);
        for e in &report.entries[1..] {
            assert_eq!(e.sflm, 0.5);
            assert_eq!(e.rank, 2);
        }
        // Ties fall back to ascending block id.
        let order: Vec<usize> = report.entries.iter().map(|e| e.id).collect();
        assert_eq!(order, vec![4, 0, 1, 2, 3, 5]);
        assert_eq!(report.verdict, vec![4]);
        assert!(report.caveats.is_empty());
    }

    #[test]
    fn all_columns_equal_to_decisions_tie_at_one() {
        let m = matrix(&[&[0, 0, 0], &[1, 1, 1]], &[0, 1]);
        let report = localize(&m, false);
        assert!(report.entries.iter().all(|e| e.sflm == 1.0 && e.rank == 1));
        assert_eq!(report.verdict, vec![0, 1, 2]);
    }

    #[test]
    fn single_block_matrix() {
        // Column [1,1] vs decisions [0,1]: one match, one mismatch.
        let m = matrix(&[&[1], &[1]], &[0, 1]);
        let report = localize(&m, false);
        assert_eq!(report.entries.len(), 1);
        assert_eq!(report.entries[0].sflm, 0.5);
        assert_eq!(report.verdict, vec![0]);
    }

    #[test]
    fn all_passing_decisions_carry_a_caveat() {
        let report = localize(&matrix(&[&[1, 0], &[1, 0]], &[0, 0]), false);
        assert!(report.caveats.iter().any(|c| c.contains("no failing runs")));
        // Scores are still computed.
        assert_eq!(report.entries.len(), 2);
    }

    #[test]
    fn all_failing_decisions_carry_a_caveat() {
        let report = localize(&matrix(&[&[1, 0], &[1, 1]], &[1, 1]), false);
        assert!(report.caveats.iter().any(|c| c.contains("no passing runs")));
    }

    #[test]
    fn no_evidence_blocks_rank_last_and_never_enter_the_verdict() {
        // Block 1 is never executed and no run fails: its kernel score is
        // the neutral 0.5, higher than block 0's 0.0, yet it must sink.
        let report = localize(&matrix(&[&[1, 0], &[1, 0]], &[0, 0]), false);
        assert_eq!(report.entries[0].id, 0);
        assert_eq!(report.entries[0].sflm, 0.0);
        assert_eq!(report.entries[1].id, 1);
        assert!(report.entries[1].no_evidence);
        assert_eq!(report.entries[1].rank, 2);
        assert_eq!(report.verdict, vec![0]);
        assert!(report.caveats.iter().any(|c| c.contains("no evidence")));
    }

    #[test]
    fn verdict_is_empty_when_nothing_has_evidence() {
        let report = localize(&matrix(&[&[0, 0]], &[0]), false);
        assert!(report.verdict.is_empty());
        assert!(report.entries.iter().all(|e| e.no_evidence));
    }

    #[test]
    fn baselines_attached_on_request() {
        let report = localize(&six_block_matrix(), true);
        let top = &report.entries[0];
        assert_eq!(top.id, 4);
        let b = top.baselines.as_ref().unwrap();
        assert_eq!(b.jaccard, 1.0);
        let plain = localize(&six_block_matrix(), false);
        assert!(plain.entries[0].baselines.is_none());
    }

    #[test]
    fn evaluate_rank_of_the_top_block() {
        let report = localize(&six_block_matrix(), false);
        let frac = evaluate_rank(&report, 4).unwrap();
        assert!((frac - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn evaluate_rank_when_all_blocks_tie() {
        // Every column equals the decision vector: all six share rank 1.
        let m = matrix(
            &[&[0, 0, 0, 0, 0, 0], &[1, 1, 1, 1, 1, 1]],
            &[0, 1],
        );
        let report = localize(&m, false);
        for k in 0..6 {
            let frac = evaluate_rank(&report, k).unwrap();
            assert!((frac - 1.0 / 6.0).abs() < 1e-15);
        }
    }

    #[test]
    fn evaluate_rank_of_a_strictly_last_block() {
        // Five columns match the decisions exactly, the sixth inverts them.
        let m = matrix(
            &[&[0, 0, 0, 0, 0, 1], &[1, 1, 1, 1, 1, 0]],
            &[0, 1],
        );
        let report = localize(&m, false);
        assert_eq!(evaluate_rank(&report, 5).unwrap(), 1.0);
    }

    #[test]
    fn evaluate_rank_rejects_unknown_ids() {
        let report = localize(&six_block_matrix(), false);
        assert_eq!(
            evaluate_rank(&report, 99).unwrap_err(),
            LocalizerError::UnknownBlock(99)
        );
    }

    #[test]
    fn permuting_runs_leaves_the_score_multiset_unchanged() {
        let a = localize(&matrix(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 0]], &[0, 1, 1]), false);
        let b = localize(&matrix(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]], &[1, 0, 1]), false);
        let mut scores_a: Vec<f64> = a.entries.iter().map(|e| e.sflm).collect();
        let mut scores_b: Vec<f64> = b.entries.iter().map(|e| e.sflm).collect();
        scores_a.sort_by(f64::total_cmp);
        scores_b.sort_by(f64::total_cmp);
        assert_eq!(scores_a, scores_b);
    }

    #[test]
    fn permuting_block_columns_permutes_the_verdict() {
        let original = matrix(&[&[1, 1, 1, 1, 0, 1], &[1, 1, 1, 1, 1, 1]], &[0, 1]);
        // Swap columns 0 and 4.
        let swapped = matrix(&[&[0, 1, 1, 1, 1, 1], &[1, 1, 1, 1, 1, 1]], &[0, 1]);
        assert_eq!(localize(&original, false).verdict, vec![4]);
        assert_eq!(localize(&swapped, false).verdict, vec![0]);
    }

    #[test]
    fn identical_inputs_produce_byte_identical_reports() {
        let a = localize(&six_block_matrix(), true);
        let b = localize(&six_block_matrix(), true);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_text(), b.to_text());
    }

    #[test]
    fn report_json_round_trips() {
        let report = localize(&six_block_matrix(), true);
        let parsed = SuspiciousnessReport::from_json(&report.to_json()).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn text_report_lists_the_top_block_first() {
        let text = localize(&six_block_matrix(), false).to_text();
        let first_data_line = text.lines().nth(1).unwrap();
        assert!(first_data_line.contains("1.0000"));
        assert!(text.contains("verdict: 4"));
    }

    proptest! {
        #[test]
        fn prop_adding_an_all_hit_passing_run_never_raises_scores(
            rows in prop::collection::vec(prop::collection::vec(0u8..=1, 4), 1..6),
            decisions in prop::collection::vec(0u8..=1, 6)
        ) {
            let runs = rows.len();
            let before = localize(&{
                SpectrumMatrix::new(
                    rows.iter().map(|r| bv(r)).collect(),
                    bv(&decisions[..runs]),
                    (0..4).map(|k| k.to_string()).collect(),
                ).unwrap()
            }, false);

            let mut extended = rows.clone();
            extended.push(vec![1, 1, 1, 1]);
            let mut ext_decisions = decisions[..runs].to_vec();
            ext_decisions.push(0);
            let after = localize(&SpectrumMatrix::new(
                extended.iter().map(|r| bv(r)).collect(),
                bv(&ext_decisions),
                (0..4).map(|k| k.to_string()).collect(),
            ).unwrap(), false);

            for k in 0..4 {
                let s_before = before.entries.iter().find(|e| e.id == k).unwrap().sflm;
                let s_after = after.entries.iter().find(|e| e.id == k).unwrap().sflm;
                prop_assert!(s_after <= s_before + 1e-15);
            }
        }
    }
}
