//! Exhaustive classification of a coefficient box, with an append-only
//! JSONL checkpoint so long runs can be killed and resumed.
//!
//! Invariants
//! - Enumeration order is fixed: index `i` decodes big-endian, radix
//!   `2*coeff_max + 1`, over the digit string `f0..fD, g0..gD, h0..hD`
//!   (ascending coefficients, digit `v` meaning coefficient `v - coeff_max`).
//!   Reports are therefore byte-identical across runs, resumes, and
//!   thread counts; nothing in the output depends on wall-clock time.
//! - Every verdict is cross-checked against a term window before it is
//!   recorded; a disagreement aborts the whole search rather than
//!   producing a report that the terms contradict.
//! - The checkpoint starts with a header line carrying the exact search
//!   configuration; resuming under a different configuration is refused.
//!   A torn final line (from a killed run) is truncated away, any other
//!   malformed content is an error.

use std::collections::HashMap;
use std::fmt;
use std::fs::OpenOptions;
use std::io::{BufWriter, Read, Seek, SeekFrom, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use ultgeo::{
    classify, empirical_geometric_tail, factor, BigInt, Classification, FactorPolicy,
    GeometricFit, Poly, SeqSpec,
};

use crate::json::{classification_tag, to_line, SpecJson};

// ---- Configuration ----

/// Upper bound on the number of specs a single search may enumerate.
pub const SPEC_CAP: u64 = 5_000_000;

/// Indices are classified and appended to the checkpoint in blocks of
/// this size; each block is computed in parallel but written in order.
const BLOCK: u64 = 512;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Every polynomial gets `deg_max + 1` coefficients.
    pub deg_max: usize,
    /// Coefficients range over `[-coeff_max, coeff_max]`.
    pub coeff_max: i64,
    /// Verdicts are checked against the window `a(0)..a(term_count)`.
    pub term_count: usize,
    /// Primes are counted among `a(0)..a(prime_checkpoint)`.
    pub prime_checkpoint: usize,
    /// A spec is a candidate when it is not ultimately geometric and at
    /// most this many distinct primes divide the scanned window.
    pub prime_threshold: usize,
}

#[derive(Debug)]
pub enum SearchError {
    Io(std::io::Error),
    CheckpointCorrupt { detail: String },
    VerdictMismatch { index: u64, detail: String },
    BadConfig { detail: String },
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::Io(e) => write!(f, "checkpoint i/o failed: {e}"),
            SearchError::CheckpointCorrupt { detail } => {
                write!(f, "checkpoint is corrupt: {detail}")
            }
            SearchError::VerdictMismatch { index, detail } => write!(
                f,
                "verdict for spec {index} contradicts its terms: {detail}"
            ),
            SearchError::BadConfig { detail } => write!(f, "{detail}"),
        }
    }
}

impl std::error::Error for SearchError {}

impl From<std::io::Error> for SearchError {
    fn from(e: std::io::Error) -> Self {
        SearchError::Io(e)
    }
}

// ---- Enumeration ----

/// Number of specs in the box, refusing boxes past [`SPEC_CAP`].
pub fn spec_count(config: &SearchConfig) -> Result<u64, SearchError> {
    if config.term_count < 2 {
        return Err(SearchError::BadConfig {
            detail: "the term window must reach at least a(2)".into(),
        });
    }
    if config.coeff_max < 0 {
        return Err(SearchError::BadConfig {
            detail: "the coefficient bound must be nonnegative".into(),
        });
    }
    let radix = 2u128 * config.coeff_max as u128 + 1;
    let width = 3 * (config.deg_max as u32 + 1);
    let total = radix
        .checked_pow(width)
        .filter(|t| *t <= SPEC_CAP as u128)
        .ok_or(SearchError::BadConfig {
            detail: format!("the box holds more than {SPEC_CAP} specs; shrink it"),
        })?;
    Ok(total as u64)
}

/// Decodes an index into its spec. The index must be below `spec_count`.
pub fn spec_at(config: &SearchConfig, index: u64) -> SeqSpec {
    let per_poly = config.deg_max + 1;
    let width = 3 * per_poly;
    let radix = 2 * config.coeff_max as u64 + 1;
    let mut digits = vec![0i64; width];
    let mut rest = index;
    for slot in (0..width).rev() {
        digits[slot] = (rest % radix) as i64 - config.coeff_max;
        rest /= radix;
    }
    debug_assert_eq!(rest, 0, "index outside the box");
    let f = Poly::from_int_coeffs(&digits[..per_poly]);
    let g = Poly::from_int_coeffs(&digits[per_poly..2 * per_poly]);
    let h = Poly::from_int_coeffs(&digits[2 * per_poly..]);
    SeqSpec::new(f, g, h).expect("integer coefficients are integer-valued")
}

// ---- Records and report ----

/// One checkpoint line. `prime_count` is present exactly for verdicts
/// that are not ultimately geometric; it is exact when at most the
/// configured threshold and otherwise reports the count at which the
/// scan stopped (see [`bounded_prime_count`]).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecordJson {
    pub index: u64,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_count: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct HeaderJson {
    config: SearchConfig,
}

#[derive(Serialize)]
pub struct SearchReportJson {
    pub config: SearchConfig,
    pub summary: SummaryJson,
    pub candidates: Vec<CandidateJson>,
}

#[derive(Serialize)]
pub struct SummaryJson {
    pub total: u64,
    pub zero_sequence: u64,
    pub geometric: u64,
    pub ultimately_geometric: u64,
    pub not_ultimately_geometric: u64,
}

#[derive(Serialize)]
pub struct CandidateJson {
    pub index: u64,
    pub spec: SpecJson,
    pub prime_count: usize,
}

// ---- Verdict evidence ----

fn geometric_tail_holds(terms: &[BigInt], b: &BigInt, c: &BigInt, n0: usize) -> bool {
    let mut power = BigInt::from(1);
    for _ in 0..n0 {
        power = &power * b;
    }
    for (n, a) in terms.iter().enumerate().skip(n0) {
        if n > n0 {
            power = &power * b;
        }
        if *a != c * &power {
            return false;
        }
    }
    true
}

/// Checks the verdict against `a(0)..a(count)`; a refuted verdict is a
/// bug, so the caller aborts. For negative verdicts the window evidence
/// is one-sided: an apparent geometric tail must already fail on the
/// doubled window before the verdict is accepted.
fn verdict_window_evidence(
    spec: &SeqSpec,
    verdict: &Classification,
    count: usize,
) -> Result<(), String> {
    let window = spec.terms(count);
    match verdict {
        Classification::ZeroSequence => {
            if let Some(n) = window.iter().position(|a| *a != BigInt::from(0)) {
                return Err(format!("claimed zero sequence but a({n}) != 0"));
            }
        }
        Classification::Geometric { b, c } => {
            if !geometric_tail_holds(&window, b, c, 0) {
                return Err(format!("claimed a(n) = {c} * {b}^n but the window disagrees"));
            }
        }
        Classification::UltimatelyGeometric { b, c, n0 } => {
            if *n0 == 0 || *n0 > count {
                return Err(format!("reset index {n0} outside the checkable window"));
            }
            if !geometric_tail_holds(&window, b, c, *n0) {
                return Err(format!(
                    "claimed a(n) = {c} * {b}^n from n = {n0} but the tail disagrees"
                ));
            }
            if geometric_tail_holds(&window[..=*n0], b, c, n0 - 1) {
                return Err(format!("the tail already holds at n = {}", n0 - 1));
            }
        }
        Classification::NotUltimatelyGeometric { .. } => {
            if let Some(GeometricFit { b, c, n0 }) = empirical_geometric_tail(&window) {
                let doubled = spec.terms(2 * count);
                if geometric_tail_holds(&doubled, &b, &c, n0) {
                    return Err(format!(
                        "claimed not ultimately geometric but a(n) = {c} * {b}^n \
                         holds from n = {n0} through a({})",
                        2 * count
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Distinct primes dividing `a(0)..a(checkpoint)`, except that the scan
/// stops as soon as the count exceeds `threshold`: candidacy only needs
/// counts at or below the threshold, and most sequences blow past it
/// within a few terms, long before their terms get expensive to factor.
fn bounded_prime_count(
    spec: &SeqSpec,
    checkpoint: usize,
    threshold: usize,
    policy: &FactorPolicy,
) -> usize {
    let zero = BigInt::from(0);
    let mut primes = std::collections::BTreeSet::new();
    for (_, term) in spec.term_stream().take(checkpoint + 1) {
        if term == zero {
            continue;
        }
        let fz = factor(&term, policy).expect("nonzero terms are factorable");
        primes.extend(fz.factors.into_keys());
        if primes.len() > threshold {
            break;
        }
    }
    primes.len()
}

fn compute_record(
    config: &SearchConfig,
    index: u64,
    policy: &FactorPolicy,
) -> Result<RecordJson, SearchError> {
    let spec = spec_at(config, index);
    let verdict = classify(&spec);
    verdict_window_evidence(&spec, &verdict, config.term_count)
        .map_err(|detail| SearchError::VerdictMismatch { index, detail })?;
    let prime_count = match verdict {
        Classification::NotUltimatelyGeometric { .. } => Some(bounded_prime_count(
            &spec,
            config.prime_checkpoint,
            config.prime_threshold,
            policy,
        )),
        _ => None,
    };
    Ok(RecordJson {
        index,
        verdict: classification_tag(&verdict).to_string(),
        prime_count,
    })
}

// ---- Checkpoint file ----

fn validate_record(rec: &RecordJson, total: u64) -> Result<(), String> {
    if rec.index >= total {
        return Err(format!("record index {} outside the box", rec.index));
    }
    let negative = rec.verdict == "not_ultimately_geometric";
    let known = negative
        || matches!(
            rec.verdict.as_str(),
            "zero_sequence" | "geometric" | "ultimately_geometric"
        );
    if !known {
        return Err(format!("unknown verdict tag '{}'", rec.verdict));
    }
    if negative != rec.prime_count.is_some() {
        return Err(format!(
            "record {} pairs verdict '{}' with the wrong prime_count shape",
            rec.index, rec.verdict
        ));
    }
    Ok(())
}

/// Reads a checkpoint back, truncating a torn final line. Returns the
/// recorded verdicts; the file is left ready for ordered appends.
fn load_checkpoint(
    file: &mut std::fs::File,
    config: &SearchConfig,
    total: u64,
) -> Result<HashMap<u64, RecordJson>, SearchError> {
    let mut text = String::new();
    file.read_to_string(&mut text)?;
    let mut records = HashMap::new();
    if text.is_empty() {
        writeln!(
            file,
            "{}",
            to_line(&HeaderJson {
                config: config.clone()
            })
        )?;
        return Ok(records);
    }

    let corrupt = |detail: String| SearchError::CheckpointCorrupt { detail };
    let mut offset = 0usize;
    for (lineno, line) in text.split_inclusive('\n').enumerate() {
        let complete = line.ends_with('\n');
        let body = line.trim_end_matches('\n');
        if lineno == 0 {
            let header: HeaderJson = serde_json::from_str(body)
                .map_err(|e| corrupt(format!("unreadable header line: {e}")))?;
            if !complete {
                return Err(corrupt("header line is torn".into()));
            }
            if header.config != *config {
                return Err(corrupt(
                    "the checkpoint was written under a different search configuration".into(),
                ));
            }
        } else {
            match serde_json::from_str::<RecordJson>(body) {
                Ok(rec) if complete => {
                    validate_record(&rec, total).map_err(corrupt)?;
                    if let Some(old) = records.insert(rec.index, rec) {
                        return Err(corrupt(format!(
                            "index {} is recorded more than once",
                            old.index
                        )));
                    }
                }
                // A torn or malformed final line is the expected debris of
                // a killed run: drop it and recompute that index.
                _ if offset + line.len() == text.len() => {
                    file.set_len(offset as u64)?;
                    break;
                }
                Ok(_) => unreachable!("complete lines either insert or are final"),
                Err(e) => {
                    return Err(corrupt(format!("line {} is malformed: {e}", lineno + 1)));
                }
            }
        }
        offset += line.len();
    }
    file.seek(SeekFrom::End(0))?;
    Ok(records)
}

// ---- Driver ----

/// Classifies the whole box, reusing and extending the checkpoint when
/// one is given. The report depends only on the configuration.
pub fn run_search(
    config: &SearchConfig,
    checkpoint: Option<&Path>,
) -> Result<SearchReportJson, SearchError> {
    let total = spec_count(config)?;
    let policy = FactorPolicy::default();

    let mut records: HashMap<u64, RecordJson> = HashMap::new();
    let mut writer = match checkpoint {
        Some(path) => {
            let mut file = OpenOptions::new()
                .read(true)
                .write(true)
                .create(true)
                .truncate(false) // resuming must preserve finished records
                .open(path)?;
            records = load_checkpoint(&mut file, config, total)?;
            Some(BufWriter::new(file))
        }
        None => None,
    };

    let mut start = 0u64;
    while start < total {
        let end = (start + BLOCK).min(total);
        let missing: Vec<u64> = (start..end).filter(|i| !records.contains_key(i)).collect();
        let fresh: Vec<RecordJson> = missing
            .par_iter()
            .map(|&i| compute_record(config, i, &policy))
            .collect::<Result<_, _>>()?;
        for rec in fresh {
            if let Some(w) = writer.as_mut() {
                writeln!(w, "{}", to_line(&rec))?;
            }
            records.insert(rec.index, rec);
        }
        if let Some(w) = writer.as_mut() {
            w.flush()?;
        }
        start = end;
    }

    let mut summary = SummaryJson {
        total,
        zero_sequence: 0,
        geometric: 0,
        ultimately_geometric: 0,
        not_ultimately_geometric: 0,
    };
    let mut candidates = Vec::new();
    for index in 0..total {
        let rec = &records[&index];
        match rec.verdict.as_str() {
            "zero_sequence" => summary.zero_sequence += 1,
            "geometric" => summary.geometric += 1,
            "ultimately_geometric" => summary.ultimately_geometric += 1,
            _ => {
                summary.not_ultimately_geometric += 1;
                let prime_count = rec.prime_count.expect("validated shape");
                if prime_count <= config.prime_threshold {
                    candidates.push(CandidateJson {
                        index,
                        spec: SpecJson::from_spec(&spec_at(config, index)),
                        prime_count,
                    });
                }
            }
        }
    }
    Ok(SearchReportJson {
        config: config.clone(),
        summary,
        candidates,
    })
}
