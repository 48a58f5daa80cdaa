//! Line-oriented JSON records, one per check, so runs can be diffed.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gallery::ConstructionEntry;
use crate::metrics::{girth, min_nonadjacent_distance, spread, DEFAULT_GIRTH_CAP};
use crate::rulegraph::spec::{validate_spec, Coverage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Computed without a claim to compare against.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub construction: String,
    pub check: String,
    pub claimed: Value,
    pub computed: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    fn compare(construction: &str, check: &str, claimed: Option<Value>, computed: Value) -> Self {
        let status = match &claimed {
            Some(c) if *c == computed => Status::Pass,
            Some(_) => Status::Fail,
            None => Status::Info,
        };
        CheckRecord {
            construction: construction.into(),
            check: check.into(),
            claimed: claimed.unwrap_or(Value::Null),
            computed,
            status,
            detail: None,
        }
    }

    fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorRecord {
    pub error: String,
    pub message: String,
}

impl ErrorRecord {
    pub fn new(e: &Error) -> Self {
        let kind = match e {
            Error::Parse { .. } => "parse",
            Error::UnknownConstruction(_) => "unknown_construction",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::InvalidParams(_) => "invalid_params",
            Error::Certificate(_) => "certificate",
            _ => "engine",
        };
        ErrorRecord { error: kind.into(), message: e.to_string() }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub girth_cap: u32,
    /// Spread depth to report; defaults to the claimed depth.
    pub spread_depth: Option<u32>,
    pub window_radius: i64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { girth_cap: DEFAULT_GIRTH_CAP, spread_depth: None, window_radius: 4 }
    }
}

/// Checks of an entry against its claims, in a fixed order: validation,
/// girth, spread, non-adjacent distance.
pub fn verify_entry(e: &ConstructionEntry, opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let id = e.id.as_str();
    let mut out = Vec::new();

    let v = validate_spec(&e.spec, opts.window_radius);
    let degree = match v.observed_degrees.as_slice() {
        [d] => json!(d),
        ds => json!(ds),
    };
    let mut rec = CheckRecord::compare(id, "degree", e.claimed.degree.map(|d| json!(d)), degree);
    if !v.is_valid() {
        rec.status = Status::Fail;
        let kinds: Vec<String> = v.violations.iter().map(|x| format!("{}: {} at {}", x.kind, x.detail, x.point)).collect();
        rec = rec.with_detail(kinds.join("; "));
    }
    out.push(rec);

    let g = girth(&e.spec, opts.girth_cap)?;
    let computed = match g.girth.exact() {
        Some(x) => json!(x),
        None => json!(format!(">{}", opts.girth_cap)),
    };
    let mut rec = CheckRecord::compare(id, "girth", e.claimed.girth.map(|x| json!(x)), computed);
    if let Coverage::Argued(why) = &e.spec.coverage {
        rec = rec.with_detail(format!("representatives argued: {why}"));
    }
    out.push(rec);

    let depth = opts.spread_depth.or(e.claimed.spread.map(|s| s.0));
    if let Some(d) = depth {
        let s = spread(&e.spec, d)?;
        let claimed = e.claimed.spread.filter(|c| c.0 == d).map(|c| json!(c.1));
        let mut rec = CheckRecord::compare(id, &format!("spread@{d}"), claimed, json!(s.spread));
        if !s.coverage_exact {
            rec = rec.with_detail("upper bound: coverage argued");
        }
        out.push(rec);
    }

    if let Some(sq) = e.claimed.nonadjacent_sq_dist {
        let got = min_nonadjacent_distance(&e.spec, 4)?;
        out.push(CheckRecord::compare(id, "nonadjacent_sq_dist", Some(json!(sq)), json!(got)));
    }
    Ok(out)
}

pub fn all_pass(records: &[CheckRecord]) -> bool {
    records.iter().all(|r| r.status != Status::Fail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::find_construction;

    #[test]
    fn g3_verifies() {
        let recs = verify_entry(find_construction("G3").unwrap(), &VerifyOptions::default()).unwrap();
        assert!(all_pass(&recs), "{recs:?}");
        assert_eq!(recs[1].computed, json!(10));
        let line = recs[1].to_json_line();
        assert!(line.starts_with("{\"construction\":\"G3\",\"check\":\"girth\""), "{line}");
    }

    #[test]
    fn spread_without_claim_is_info() {
        let opts = VerifyOptions { spread_depth: Some(3), ..VerifyOptions::default() };
        let recs = verify_entry(find_construction("G1").unwrap(), &opts).unwrap();
        assert_eq!(recs[2].status, Status::Info);
    }
}
