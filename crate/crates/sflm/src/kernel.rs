//! The SFLM similarity kernel over pairs of coverage vectors, plus the
//! classic suspiciousness coefficients used as comparison baselines.
//!
//! The kernel scores two equal-length binary vectors by passing each
//! position through the ternary block-hit function and combining a match
//! weight η with an evidence indicator φ:
//!
//! ```text
//! SFLM(u, v) = 0.5 · (1 + Ση(h_k) / Σφ(h_k))      h_k = hit(u_k, v_k)
//! ```
//!
//! Positions where both vectors are 0 carry no evidence (φ = 0) and do not
//! influence the score. When evidence exists the value always lies in
//! [0, 1] and coincides with the Jaccard coefficient of the two vectors
//! viewed as sets.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectrum::{hit_function, BinaryVector, HitValue};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

/// Match weight of one hit-function value: +1 for a shared hit, −1 for a
/// hit/miss disagreement, 0 for a shared miss.
///
/// The weight is defined as e^(−(1−h)) for h = +1, −e^(−h) for h = 0, and 0
/// for h = −1; on the ternary domain both exponents are identically zero,
/// so the function evaluates exactly to the constants below.
pub fn eta(h: HitValue) -> f64 {
    match h {
        HitValue::BothHit => 1.0,
        HitValue::BothMiss => 0.0,
        HitValue::Mixed => -1.0,
    }
}

/// Evidence indicator of one hit-function value: 0 for a shared miss,
/// 1 otherwise. A position where neither run entered the block says
/// nothing about either run and is excluded from the kernel denominator.
pub fn phi(h: HitValue) -> f64 {
    match h {
        HitValue::BothMiss => 0.0,
        HitValue::Mixed | HitValue::BothHit => 1.0,
    }
}

/// Kernel score for one vector pair.
///
/// `no_evidence` is true exactly when every position was a shared miss
/// (Σφ = 0, i.e. both vectors all-zero); the value is then pinned to the
/// kernel's neutral midpoint 0.5 and callers are expected to treat the
/// pair as unscorable rather than genuinely similar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityScore {
    value: f64,
    evidence_count: usize,
    no_evidence: bool,
}

impl SimilarityScore {
    pub fn value(&self) -> f64 {
        self.value
    }

    /// Number of positions with evidence (Σφ).
    pub fn evidence_count(&self) -> usize {
        self.evidence_count
    }

    pub fn no_evidence(&self) -> bool {
        self.no_evidence
    }
}

/// SFLM kernel over two equal-length coverage vectors.
pub fn sflm(u: &BinaryVector, v: &BinaryVector) -> Result<SimilarityScore, KernelError> {
    if u.len() != v.len() {
        return Err(KernelError::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let mut eta_sum = 0.0;
    let mut evidence = 0usize;
    for (a, b) in u.iter().zip(v.iter()) {
        let h = hit_function(a, b);
        eta_sum += eta(h);
        if phi(h) > 0.0 {
            evidence += 1;
        }
    }
    if evidence == 0 {
        return Ok(SimilarityScore {
            value: 0.5,
            evidence_count: 0,
            no_evidence: true,
        });
    }
    let value = 0.5 * (1.0 + eta_sum / evidence as f64);
    debug_assert!((0.0..=1.0).contains(&value));
    Ok(SimilarityScore {
        value,
        evidence_count: evidence,
        no_evidence: false,
    })
}

/// Classic suspiciousness coefficients for one block column against the
/// decision vector. Any coefficient whose denominator is zero is reported
/// as 0, matching common tooling practice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineScores {
    pub tarantula: f64,
    pub ochiai: f64,
    pub jaccard: f64,
    pub dstar2: f64,
}

impl BaselineScores {
    pub const NAMES: [&'static str; 4] = ["tarantula", "ochiai", "jaccard", "dstar2"];

    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "tarantula" => Some(self.tarantula),
            "ochiai" => Some(self.ochiai),
            "jaccard" => Some(self.jaccard),
            "dstar2" => Some(self.dstar2),
            _ => None,
        }
    }

    /// Coefficient-name/value pairs in a fixed order.
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, f64)> {
        [
            ("tarantula", self.tarantula),
            ("ochiai", self.ochiai),
            ("jaccard", self.jaccard),
            ("dstar2", self.dstar2),
        ]
        .into_iter()
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Baseline coefficients from the four executed/failed counters:
/// a_ef (hit in failing runs), a_ep (hit in passing runs), a_nf (missed in
/// failing runs), a_np (missed in passing runs).
pub fn baseline_scores(
    block: &BinaryVector,
    decisions: &BinaryVector,
) -> Result<BaselineScores, KernelError> {
    if block.len() != decisions.len() {
        return Err(KernelError::LengthMismatch {
            left: block.len(),
            right: decisions.len(),
        });
    }
    let mut a_ef = 0.0;
    let mut a_ep = 0.0;
    let mut a_nf = 0.0;
    let mut a_np = 0.0;
    for (hit, failed) in block.iter().zip(decisions.iter()) {
        match (hit.as_bool(), failed.as_bool()) {
            (true, true) => a_ef += 1.0,
            (true, false) => a_ep += 1.0,
            (false, true) => a_nf += 1.0,
            (false, false) => a_np += 1.0,
        }
    }

    let fail_ratio = ratio(a_ef, a_ef + a_nf);
    let pass_ratio = ratio(a_ep, a_ep + a_np);
    Ok(BaselineScores {
        tarantula: ratio(fail_ratio, fail_ratio + pass_ratio),
        ochiai: ratio(a_ef, ((a_ef + a_nf) * (a_ef + a_ep)).sqrt()),
        jaccard: ratio(a_ef, a_ef + a_nf + a_ep),
        dstar2: ratio(a_ef * a_ef, a_ep + a_nf),
    })
}
