//! Embedded ledger of every claimed code: the three record Goppa codes, two
//! related Goppa codes, and the puncture/shorten/lengthen families derived
//! from the records.
//!
//! Each [`CatalogEntry`] stores the construction recipe next to the expected
//! parameters (and, for the records, the full weight distribution), so a
//! single call rebuilds the code from scratch and compares every claim
//! field by field.  Prior best-known distances are static snapshot values;
//! the catalog verifies the claims as published, not today's tables.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::code::{CodeError, EnumOptions, LinearCode};
use crate::derive::{DerivationRegistry, DerivationStep};
use crate::field::FieldSpec;
use crate::goppa::GoppaSpec;
use crate::poly::Polynomial;

static EMBEDDED_JSON: &str = include_str!("../data/catalog.json");
static EMBEDDED: OnceLock<Catalog> = OnceLock::new();

/// Errors from catalog loading, lookup, and construction replay.
#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("catalog JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("duplicate catalog id {0:?}")]
    DuplicateId(String),
    /// Derived entries may only reference entries that precede them.
    #[error("entry {id:?} references unknown or later base {base:?}")]
    UnknownBase { id: String, base: String },
    #[error("entry {id:?}: {detail}")]
    Inconsistent { id: String, detail: String },
    #[error("unknown catalog id {0:?}")]
    UnknownId(String),
    #[error("entry {id:?} has no prior best distance")]
    MissingPriorBest { id: String },
    #[error("entry {id:?} failed to build: {detail}")]
    Build { id: String, detail: String },
}

/// Recipe for rebuilding a catalogued code from nothing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Construction {
    /// A Goppa code over F_2^m with the maximal support (every field element
    /// that is not a root of the polynomial).
    Goppa {
        m: u32,
        /// Field modulus as a hex (`0x...`) or decimal string.
        modulus: String,
        poly: String,
    },
    /// A derivation pipeline applied to an earlier catalog entry.
    Derived {
        base: String,
        steps: Vec<DerivationStep>,
    },
}

/// One claimed code: its construction, expected parameters, and provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub id: String,
    pub construction: Construction,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_best_d: Option<usize>,
    /// Full weight distribution as `[weight, count]` pairs, nonzero terms
    /// only, ascending by weight, counts in decimal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<Vec<(usize, String)>>,
    pub source: String,
}

/// Outcome of checking one claimed field against the rebuilt code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CheckStatus {
    Match,
    Mismatch { expected: String, actual: String },
    Skipped { reason: String },
}

/// One claimed field together with its check outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldCheck {
    pub field: &'static str,
    #[serde(flatten)]
    pub status: CheckStatus,
}

/// Field-by-field verification result for one entry.
#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub checks: Vec<FieldCheck>,
    /// `(n, k, d)` of the rebuilt code; `d` is `None` when not enumerated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<(usize, usize, Option<usize>)>,
    /// Construction failure, reported instead of raised.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl EntryReport {
    /// True when the entry was rebuilt and nothing mismatched.  Skipped
    /// checks do not fail the entry.
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self
                .checks
                .iter()
                .all(|c| !matches!(c.status, CheckStatus::Mismatch { .. }))
    }
}

/// Reports for a batch of entries.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub reports: Vec<EntryReport>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(EntryReport::passed)
    }
}

#[derive(Deserialize)]
struct CatalogFile {
    entries: Vec<CatalogEntry>,
}

/// The validated collection of catalog entries.
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// The catalog shipped inside the binary.
    pub fn embedded() -> &'static Catalog {
        EMBEDDED.get_or_init(|| {
            Catalog::from_json(EMBEDDED_JSON).expect("embedded catalog is valid")
        })
    }

    /// Parse and validate a catalog from JSON text.
    pub fn from_json(text: &str) -> Result<Catalog, CatalogError> {
        let file: CatalogFile = serde_json::from_str(text)?;
        let catalog = Catalog {
            entries: file.entries,
        };
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Expected distance minus the recorded prior best.
    pub fn improvement_margin(&self, entry: &CatalogEntry) -> Result<i64, CatalogError> {
        let prior = entry
            .prior_best_d
            .ok_or_else(|| CatalogError::MissingPriorBest {
                id: entry.id.clone(),
            })?;
        Ok(entry.d as i64 - prior as i64)
    }

    /// Rebuild the entry's code from its construction recipe.
    ///
    /// Derived entries rebuild their base first; automatic puncture
    /// positions are re-chosen by enumeration, so `opts` must admit every
    /// intermediate dimension of the pipeline.
    pub fn build_code(
        &self,
        entry: &CatalogEntry,
        opts: &EnumOptions,
    ) -> Result<LinearCode, CatalogError> {
        let fail = |detail: String| CatalogError::Build {
            id: entry.id.clone(),
            detail,
        };
        match &entry.construction {
            Construction::Goppa { m, modulus, poly } => {
                let modulus = parse_modulus(modulus).map_err(|e| fail(e.to_owned()))?;
                let field = FieldSpec::new(*m, modulus).map_err(|e| fail(e.to_string()))?;
                let g = Polynomial::parse(&field, poly).map_err(|e| fail(e.to_string()))?;
                let spec = GoppaSpec::with_max_support(g).map_err(|e| fail(e.to_string()))?;
                Ok(spec.build_code())
            }
            Construction::Derived { base, steps } => {
                let base_entry = self
                    .get(base)
                    .ok_or_else(|| CatalogError::UnknownBase {
                        id: entry.id.clone(),
                        base: base.clone(),
                    })?;
                let base_code = self.build_code(base_entry, opts)?;
                let registry = DerivationRegistry::standard();
                let (code, _trace) = registry
                    .apply_steps(&base_code, steps, opts)
                    .map_err(|e| fail(e.to_string()))?;
                Ok(code)
            }
        }
    }

    /// Rebuild one entry and compare every claimed field exactly.
    ///
    /// When the rebuilt dimension exceeds the enumeration limit the distance
    /// and distribution checks are skipped rather than failed.
    pub fn verify_entry(&self, entry: &CatalogEntry, opts: &EnumOptions) -> EntryReport {
        let mut report = EntryReport {
            id: entry.id.clone(),
            checks: Vec::new(),
            measured: None,
            error: None,
        };
        let code = match self.build_code(entry, opts) {
            Ok(code) => code,
            Err(e) => {
                report.error = Some(e.to_string());
                return report;
            }
        };
        report
            .checks
            .push(check_usize("n", entry.n, code.n()));
        report
            .checks
            .push(check_usize("k", entry.k, code.k()));
        match code.enumerate(opts) {
            Ok(enumeration) => {
                let d = enumeration.min_weight;
                report.measured = Some((code.n(), code.k(), d));
                report.checks.push(FieldCheck {
                    field: "d",
                    status: match d {
                        Some(actual) if actual == entry.d => CheckStatus::Match,
                        Some(actual) => CheckStatus::Mismatch {
                            expected: entry.d.to_string(),
                            actual: actual.to_string(),
                        },
                        None => CheckStatus::Mismatch {
                            expected: entry.d.to_string(),
                            actual: "none (zero code)".to_owned(),
                        },
                    },
                });
                if let Some(expected) = &entry.distribution {
                    let actual = enumeration.distribution.nonzero_terms();
                    report.checks.push(FieldCheck {
                        field: "distribution",
                        status: compare_distribution(expected, &actual),
                    });
                }
            }
            Err(CodeError::EnumerationRefused { k, limit }) => {
                report.measured = Some((code.n(), code.k(), None));
                let reason = format!("dimension {k} exceeds the enumeration limit {limit}");
                report.checks.push(FieldCheck {
                    field: "d",
                    status: CheckStatus::Skipped {
                        reason: reason.clone(),
                    },
                });
                if entry.distribution.is_some() {
                    report.checks.push(FieldCheck {
                        field: "distribution",
                        status: CheckStatus::Skipped { reason },
                    });
                }
            }
            Err(other) => {
                report.error = Some(other.to_string());
            }
        }
        report
    }

    /// Verify the entries with the given ids, in the given order.
    pub fn verify_ids(
        &self,
        ids: &[String],
        opts: &EnumOptions,
    ) -> Result<VerificationReport, CatalogError> {
        let mut reports = Vec::with_capacity(ids.len());
        for id in ids {
            let entry = self
                .get(id)
                .ok_or_else(|| CatalogError::UnknownId(id.clone()))?;
            reports.push(self.verify_entry(entry, opts));
        }
        Ok(VerificationReport { reports })
    }

    /// Verify every entry whose expected dimension fits the enumeration
    /// limit, so that all claimed distances are actually certified.
    pub fn verify_enumerable(&self, opts: &EnumOptions) -> VerificationReport {
        let reports = self
            .entries
            .iter()
            .filter(|e| e.k <= opts.limit)
            .map(|e| self.verify_entry(e, opts))
            .collect();
        VerificationReport { reports }
    }

    fn validate(&self) -> Result<(), CatalogError> {
        let mut seen: Vec<&str> = Vec::with_capacity(self.entries.len());
        for entry in &self.entries {
            let inconsistent = |detail: String| CatalogError::Inconsistent {
                id: entry.id.clone(),
                detail,
            };
            if seen.contains(&entry.id.as_str()) {
                return Err(CatalogError::DuplicateId(entry.id.clone()));
            }
            match &entry.construction {
                Construction::Goppa { modulus, .. } => {
                    parse_modulus(modulus).map_err(|e| inconsistent(e.to_owned()))?;
                }
                Construction::Derived { base, .. } => {
                    if !seen.contains(&base.as_str()) {
                        return Err(CatalogError::UnknownBase {
                            id: entry.id.clone(),
                            base: base.clone(),
                        });
                    }
                }
            }
            if entry.k > entry.n {
                return Err(inconsistent(format!("k = {} exceeds n = {}", entry.k, entry.n)));
            }
            if entry.d == 0 || entry.d > entry.n {
                return Err(inconsistent(format!(
                    "d = {} outside 1..={}",
                    entry.d, entry.n
                )));
            }
            if let Some(terms) = &entry.distribution {
                validate_distribution(terms, entry).map_err(inconsistent)?;
            }
            seen.push(&entry.id);
        }
        Ok(())
    }
}

fn check_usize(field: &'static str, expected: usize, actual: usize) -> FieldCheck {
    FieldCheck {
        field,
        status: if expected == actual {
            CheckStatus::Match
        } else {
            CheckStatus::Mismatch {
                expected: expected.to_string(),
                actual: actual.to_string(),
            }
        },
    }
}

fn compare_distribution(expected: &[(usize, String)], actual: &[(usize, u64)]) -> CheckStatus {
    if expected.len() != actual.len() {
        return CheckStatus::Mismatch {
            expected: format!("{} nonzero terms", expected.len()),
            actual: format!("{} nonzero terms", actual.len()),
        };
    }
    for ((ew, ec), (aw, ac)) in expected.iter().zip(actual) {
        if ew != aw || ec != &ac.to_string() {
            return CheckStatus::Mismatch {
                expected: format!("A_{ew} = {ec}"),
                actual: format!("A_{aw} = {ac}"),
            };
        }
    }
    CheckStatus::Match
}

fn validate_distribution(terms: &[(usize, String)], entry: &CatalogEntry) -> Result<(), String> {
    let mut total: u128 = 0;
    let mut min_positive: Option<usize> = None;
    let mut prev: Option<usize> = None;
    for (w, count) in terms {
        if prev.is_some_and(|p| p >= *w) {
            return Err(format!("distribution weights not strictly ascending at {w}"));
        }
        prev = Some(*w);
        if *w > entry.n {
            return Err(format!("distribution weight {w} exceeds n = {}", entry.n));
        }
        let parsed: u128 = count
            .parse()
            .map_err(|_| format!("distribution count {count:?} is not a decimal integer"))?;
        if parsed == 0 {
            return Err(format!("distribution lists a zero count at weight {w}"));
        }
        total = total
            .checked_add(parsed)
            .ok_or_else(|| "distribution sum overflows".to_owned())?;
        if *w > 0 && min_positive.is_none() {
            min_positive = Some(*w);
        }
    }
    if entry.k >= 128 {
        return Err("distribution present but dimension too large to total".to_owned());
    }
    if total != 1u128 << entry.k {
        return Err(format!(
            "distribution sums to {total}, expected 2^{} = {}",
            entry.k,
            1u128 << entry.k
        ));
    }
    if min_positive != Some(entry.d) {
        return Err(format!(
            "minimum positive distribution weight {min_positive:?} disagrees with d = {}",
            entry.d
        ));
    }
    Ok(())
}

/// Parse a field modulus written as `0x...` hex or plain decimal.
pub fn parse_modulus(text: &str) -> Result<u32, &'static str> {
    let parsed = match text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        Some(hex) => u32::from_str_radix(hex, 16),
        None => text.parse(),
    };
    parsed.map_err(|_| "modulus must be a hex (0x...) or decimal integer")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> EnumOptions {
        EnumOptions::default()
    }

    #[test]
    fn embedded_catalog_loads_with_all_families() {
        let catalog = Catalog::embedded();
        assert_eq!(catalog.entries().len(), 31);

        let count = |prefix: &str| {
            catalog
                .entries()
                .iter()
                .filter(|e| e.id.starts_with(prefix))
                .count()
        };
        assert_eq!(count("goppa-"), 5);
        assert_eq!(count("punct-"), 12);
        assert_eq!(count("short-"), 8);
        assert_eq!(count("short-punct-"), 7);
        assert_eq!(count("ext-"), 6);
    }

    #[test]
    fn record_entries_claim_expected_parameters() {
        let catalog = Catalog::embedded();
        for (id, n, d, prior, terms) in [
            ("goppa-239", 239, 103, 98, 12),
            ("goppa-240", 240, 104, 98, 7),
            ("goppa-241", 241, 104, 99, 7),
        ] {
            let entry = catalog.get(id).unwrap();
            assert_eq!((entry.n, entry.k, entry.d), (n, 21, d));
            assert_eq!(entry.prior_best_d, Some(prior));
            assert_eq!(entry.distribution.as_ref().unwrap().len(), terms);
        }
    }

    #[test]
    fn derived_chains_step_down_as_claimed() {
        let catalog = Catalog::embedded();
        for i in 0..12usize {
            let entry = catalog.get(&format!("punct-{}", 238 - i)).unwrap();
            assert_eq!((entry.n, entry.k, entry.d), (238 - i, 21, 102 - i));
        }
        let short = catalog.get("short-239").unwrap();
        assert_eq!((short.n, short.k, short.d), (239, 20, 104));
        for i in 0..7usize {
            let entry = catalog.get(&format!("short-punct-{}", 238 - i)).unwrap();
            assert_eq!((entry.n, entry.k, entry.d), (238 - i, 20, 103 - i));
        }
        for i in 0..6usize {
            let entry = catalog.get(&format!("ext-{}", 242 + i)).unwrap();
            assert_eq!((entry.n, entry.k, entry.d), (242 + i, 21, 104));
        }
    }

    #[test]
    fn verify_small_related_code_passes() {
        let catalog = Catalog::embedded();
        let entry = catalog.get("goppa-55").unwrap();
        let report = catalog.verify_entry(entry, &opts());
        assert!(report.passed(), "report: {report:?}");
        assert_eq!(report.measured, Some((55, 16, Some(19))));
        assert!(report
            .checks
            .iter()
            .all(|c| c.status == CheckStatus::Match));
    }

    #[test]
    fn verify_skips_distance_beyond_enumeration_limit() {
        let catalog = Catalog::embedded();
        let entry = catalog.get("goppa-239-123").unwrap();
        let report = catalog.verify_entry(entry, &opts());
        assert!(report.passed());
        assert_eq!(report.measured, Some((239, 123, None)));
        let d_check = report.checks.iter().find(|c| c.field == "d").unwrap();
        assert!(matches!(d_check.status, CheckStatus::Skipped { .. }));
    }

    #[test]
    fn corrupted_distance_fails_naming_the_field() {
        let catalog = Catalog::embedded();
        let mut entry = catalog.get("goppa-55").unwrap().clone();
        entry.d = 20;
        let report = catalog.verify_entry(&entry, &opts());
        assert!(!report.passed());
        let d_check = report.checks.iter().find(|c| c.field == "d").unwrap();
        assert_eq!(
            d_check.status,
            CheckStatus::Mismatch {
                expected: "20".to_owned(),
                actual: "19".to_owned(),
            }
        );
    }

    #[test]
    fn construction_failure_is_reported_not_raised() {
        let catalog = Catalog::embedded();
        let mut entry = catalog.get("goppa-55").unwrap().clone();
        entry.construction = Construction::Goppa {
            m: 6,
            modulus: "0x5B".to_owned(),
            poly: "x^^".to_owned(),
        };
        let report = catalog.verify_entry(&entry, &opts());
        assert!(!report.passed());
        assert!(report.error.is_some());
        assert!(report.checks.is_empty());
    }

    #[test]
    fn improvement_margins_for_records() {
        let catalog = Catalog::embedded();
        for (id, margin) in [("goppa-239", 5), ("goppa-240", 6), ("goppa-241", 5)] {
            let entry = catalog.get(id).unwrap();
            assert_eq!(catalog.improvement_margin(entry).unwrap(), margin);
        }
        let no_prior = catalog.get("ext-242").unwrap();
        assert!(matches!(
            catalog.improvement_margin(no_prior),
            Err(CatalogError::MissingPriorBest { .. })
        ));
    }

    #[test]
    fn verify_ids_rejects_unknown_id() {
        let catalog = Catalog::embedded();
        assert!(matches!(
            catalog.verify_ids(&["goppa-999".to_owned()], &opts()),
            Err(CatalogError::UnknownId(id)) if id == "goppa-999"
        ));
    }

    #[test]
    fn enumerable_selection_excludes_only_the_large_code() {
        let catalog = Catalog::embedded();
        let selected: Vec<&CatalogEntry> = catalog
            .entries()
            .iter()
            .filter(|e| e.k <= opts().limit)
            .collect();
        assert_eq!(selected.len(), 30);
        assert!(selected.iter().all(|e| e.id != "goppa-239-123"));
    }

    #[test]
    fn load_rejects_duplicate_ids() {
        let text = r#"{"entries":[
            {"id":"a","construction":{"type":"goppa","m":4,"modulus":"0x13","poly":"x"},"n":4,"k":1,"d":2,"source":"t"},
            {"id":"a","construction":{"type":"goppa","m":4,"modulus":"0x13","poly":"x"},"n":4,"k":1,"d":2,"source":"t"}
        ]}"#;
        assert!(matches!(
            Catalog::from_json(text),
            Err(CatalogError::DuplicateId(id)) if id == "a"
        ));
    }

    #[test]
    fn load_rejects_forward_or_missing_base() {
        let text = r#"{"entries":[
            {"id":"b","construction":{"type":"derived","base":"a","steps":[{"kind":"puncture"}]},"n":3,"k":1,"d":2,"source":"t"}
        ]}"#;
        assert!(matches!(
            Catalog::from_json(text),
            Err(CatalogError::UnknownBase { id, base }) if id == "b" && base == "a"
        ));
    }

    #[test]
    fn load_rejects_distribution_with_wrong_sum() {
        let text = r#"{"entries":[
            {"id":"a","construction":{"type":"goppa","m":4,"modulus":"0x13","poly":"x"},
             "n":4,"k":1,"d":2,"distribution":[[0,"1"],[2,"2"]],"source":"t"}
        ]}"#;
        match Catalog::from_json(text) {
            Err(CatalogError::Inconsistent { id, detail }) => {
                assert_eq!(id, "a");
                assert!(detail.contains("sums to 3"), "detail: {detail}");
            }
            other => panic!("expected Inconsistent, got {:?}", other.err()),
        }
    }

    #[test]
    fn load_rejects_distance_disagreeing_with_distribution() {
        let text = r#"{"entries":[
            {"id":"a","construction":{"type":"goppa","m":4,"modulus":"0x13","poly":"x"},
             "n":4,"k":1,"d":3,"distribution":[[0,"1"],[2,"1"]],"source":"t"}
        ]}"#;
        match Catalog::from_json(text) {
            Err(CatalogError::Inconsistent { detail, .. }) => {
                assert!(detail.contains("disagrees with d"), "detail: {detail}");
            }
            other => panic!("expected Inconsistent, got {:?}", other.err()),
        }
    }

    #[test]
    fn modulus_strings_parse_both_bases() {
        assert_eq!(parse_modulus("0x11D").unwrap(), 0x11d);
        assert_eq!(parse_modulus("0X11d").unwrap(), 0x11d);
        assert_eq!(parse_modulus("285").unwrap(), 285);
        assert!(parse_modulus("11D").is_err());
    }

    #[test]
    fn derived_entry_rebuilds_through_its_base() {
        let catalog = Catalog::embedded();
        let entry = catalog.get("ext-242").unwrap();
        let report = catalog.verify_entry(entry, &opts());
        assert!(report.passed(), "report: {report:?}");
        assert_eq!(report.measured, Some((242, 21, Some(104))));
    }
}
