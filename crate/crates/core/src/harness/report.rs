use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bounds::Verdict;
use crate::eig::interval::{cmp, decimal, Round};

use super::record::{parse_decimal, Outcome, RunRecord, DECIMAL_DIGITS};
use super::HarnessError;

/// Per-check counts for the summary file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Counts {
    holds: u64,
    fails: u64,
    undecided: u64,
    skipped: u64,
    min_margin: Option<BigRational>,
    max_precision_bits: u32,
}

/// One line of the CSV summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub check_id: String,
    pub total: u64,
    pub holds: u64,
    pub fails: u64,
    pub undecided: u64,
    pub skipped: u64,
    /// Smallest `lhs.lo - rhs.hi` (or its analogue for `<`), rounded down.
    pub min_margin: Option<String>,
    pub max_precision_bits: u32,
}

/// Running per-check verdict counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    by_check: BTreeMap<String, Counts>,
}

impl Tally {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, check_id: &str, verdict: Verdict, margin: Option<BigRational>, precision_bits: u32) {
        if !self.by_check.contains_key(check_id) {
            self.by_check.insert(check_id.to_string(), Counts::default());
        }
        let c = self.by_check.get_mut(check_id).expect("inserted above");
        match verdict {
            Verdict::Holds => c.holds += 1,
            Verdict::Fails => c.fails += 1,
            Verdict::Undecided => c.undecided += 1,
            Verdict::Skipped => c.skipped += 1,
        }
        if verdict != Verdict::Skipped {
            if let Some(m) = margin {
                if c.min_margin.as_ref().is_none_or(|old| cmp(&m, old).is_lt()) {
                    c.min_margin = Some(m);
                }
            }
            c.max_precision_bits = c.max_precision_bits.max(precision_bits);
        }
    }

    pub fn add_outcome(&mut self, o: &Outcome) {
        let v = &o.verdict;
        self.add(v.check_id.as_str(), v.verdict, v.margin(), v.precision_bits);
    }

    pub fn add_record(&mut self, r: &RunRecord) {
        self.add(
            &r.check_id,
            r.verdict,
            r.margin.as_deref().and_then(parse_decimal),
            r.precision_bits,
        );
    }

    pub fn count(&self, check_id: &str, verdict: Verdict) -> u64 {
        self.by_check.get(check_id).map_or(0, |c| match verdict {
            Verdict::Holds => c.holds,
            Verdict::Fails => c.fails,
            Verdict::Undecided => c.undecided,
            Verdict::Skipped => c.skipped,
        })
    }

    pub fn total(&self, check_id: &str) -> u64 {
        [Verdict::Holds, Verdict::Fails, Verdict::Undecided, Verdict::Skipped]
            .iter()
            .map(|&v| self.count(check_id, v))
            .sum()
    }

    pub fn min_margin(&self, check_id: &str) -> Option<&BigRational> {
        self.by_check.get(check_id)?.min_margin.as_ref()
    }

    pub fn merge(&mut self, other: &Tally) {
        for (id, c) in &other.by_check {
            let mine = self.by_check.entry(id.clone()).or_default();
            mine.holds += c.holds;
            mine.fails += c.fails;
            mine.undecided += c.undecided;
            mine.skipped += c.skipped;
            mine.max_precision_bits = mine.max_precision_bits.max(c.max_precision_bits);
            if let Some(m) = &c.min_margin {
                if mine.min_margin.as_ref().is_none_or(|old| cmp(m, old).is_lt()) {
                    mine.min_margin = Some(m.clone());
                }
            }
        }
    }

    /// Rows sorted by check id.
    pub fn rows(&self) -> Vec<SummaryRow> {
        self.by_check
            .iter()
            .map(|(id, c)| SummaryRow {
                check_id: id.clone(),
                total: c.holds + c.fails + c.undecided + c.skipped,
                holds: c.holds,
                fails: c.fails,
                undecided: c.undecided,
                skipped: c.skipped,
                min_margin: c.min_margin.as_ref().map(|m| decimal(m, DECIMAL_DIGITS, Round::Down)),
                max_precision_bits: c.max_precision_bits,
            })
            .collect()
    }
}

/// Output locations of one report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportPaths {
    pub detail: PathBuf,
    pub summary: PathBuf,
    pub counterexamples: PathBuf,
}

impl ReportPaths {
    /// `detail.jsonl`, `summary.csv` and `counterexamples.g6` inside `dir`.
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            detail: dir.join("detail.jsonl"),
            summary: dir.join("summary.csv"),
            counterexamples: dir.join("counterexamples.g6"),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, HarnessError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(io_err(path))?))
}

/// Streams records to the detail and counterexample files and writes the
/// summary on [`ReportWriter::finish`].
pub struct ReportWriter {
    paths: ReportPaths,
    detail: BufWriter<File>,
    counterexamples: BufWriter<File>,
    last_witness: Option<String>,
    tally: Tally,
}

impl ReportWriter {
    pub fn create(paths: ReportPaths) -> Result<Self, HarnessError> {
        let detail = create(&paths.detail)?;
        let counterexamples = create(&paths.counterexamples)?;
        Ok(Self {
            paths,
            detail,
            counterexamples,
            last_witness: None,
            tally: Tally::new(),
        })
    }

    pub fn write(&mut self, r: &RunRecord) -> Result<(), HarnessError> {
        let line = serde_json::to_string(r).expect("records serialize");
        writeln!(self.detail, "{line}").map_err(io_err(&self.paths.detail))?;
        if r.verdict == Verdict::Fails && self.last_witness.as_deref() != Some(r.graph6.as_str()) {
            writeln!(self.counterexamples, "{}", r.graph6).map_err(io_err(&self.paths.counterexamples))?;
            self.last_witness = Some(r.graph6.clone());
        }
        self.tally.add_record(r);
        Ok(())
    }

    pub fn finish(mut self) -> Result<Vec<SummaryRow>, HarnessError> {
        self.detail.flush().map_err(io_err(&self.paths.detail))?;
        self.counterexamples
            .flush()
            .map_err(io_err(&self.paths.counterexamples))?;
        let rows = self.tally.rows();
        let file = create(&self.paths.summary)?;
        let mut w = csv::Writer::from_writer(file);
        if rows.is_empty() {
            w.write_record([
                "check_id",
                "total",
                "holds",
                "fails",
                "undecided",
                "skipped",
                "min_margin",
                "max_precision_bits",
            ])
            .map_err(|source| HarnessError::Csv {
                path: self.paths.summary.clone(),
                source,
            })?;
        }
        for row in &rows {
            w.serialize(row).map_err(|source| HarnessError::Csv {
                path: self.paths.summary.clone(),
                source,
            })?;
        }
        w.flush().map_err(io_err(&self.paths.summary))?;
        Ok(rows)
    }
}

/// Writes the JSON-lines detail file, the CSV summary and the counterexample
/// graph6 file. Records are written in the order given.
pub fn emit_report<'a>(
    records: impl IntoIterator<Item = &'a RunRecord>,
    paths: &ReportPaths,
) -> Result<Vec<SummaryRow>, HarnessError> {
    let mut w = ReportWriter::create(paths.clone())?;
    for r in records {
        w.write(r)?;
    }
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(check: &str, verdict: Verdict, margin: Option<&str>, g6: &str) -> RunRecord {
        RunRecord {
            index: 0,
            graph_id: g6.into(),
            graph6: g6.into(),
            edge: None,
            check_id: check.into(),
            relation: ">".into(),
            lhs_lo: None,
            lhs_hi: None,
            rhs_lo: None,
            rhs_hi: None,
            verdict,
            hypothesis_report: String::new(),
            precision_bits: 12,
            margin: margin.map(String::from),
            notes: Vec::new(),
            wall_time_us: 5,
        }
    }

    #[test]
    fn empty_report() {
        let dir = tempfile::tempdir().unwrap();
        let paths = ReportPaths::in_dir(dir.path());
        let rows = emit_report(&[], &paths).unwrap();
        assert!(rows.is_empty());
        assert_eq!(std::fs::read_to_string(&paths.detail).unwrap(), "");
        let summary = std::fs::read_to_string(&paths.summary).unwrap();
        assert_eq!(summary.lines().count(), 1);
        assert!(summary.starts_with("check_id,total"));
    }

    #[test]
    fn single_and_mixed() {
        let dir = tempfile::tempdir().unwrap();
        let paths = ReportPaths::in_dir(dir.path());
        let rows = emit_report(&[record("T2", Verdict::Holds, Some("2.5e-1"), "Bw")], &paths).unwrap();
        assert_eq!(rows[0].min_margin.as_deref(), Some("2.5e-1"));

        let recs = vec![
            record("T2", Verdict::Holds, Some("1e0"), "Bw"),
            record("T2", Verdict::Fails, Some("-3e-2"), "Bw"),
            record("T2", Verdict::Fails, Some("-1e-2"), "Bw"),
            record("T2", Verdict::Undecided, Some("-1e-9"), "Bg"),
            record("T2", Verdict::Skipped, None, "Bg"),
            record("P2", Verdict::Fails, Some("-1"), "Bg"),
        ];
        let rows = emit_report(&recs, &paths).unwrap();
        let t2 = rows.iter().find(|r| r.check_id == "T2").unwrap();
        assert_eq!(t2.holds + t2.fails + t2.undecided + t2.skipped, t2.total);
        assert_eq!((t2.total, t2.fails, t2.skipped), (5, 2, 1));
        assert_eq!(t2.min_margin.as_deref(), Some("-3e-2"));
        assert_eq!(rows[0].check_id, "P2");
        // Consecutive failures on one graph give one witness line.
        assert_eq!(std::fs::read_to_string(&paths.counterexamples).unwrap(), "Bw\nBg\n");
        let detail = std::fs::read_to_string(&paths.detail).unwrap();
        let back: Vec<RunRecord> = detail.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(back, recs);
    }

    #[test]
    fn unwritable_path_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "").unwrap();
        let err = emit_report(&[], &ReportPaths::in_dir(&blocker.join("sub"))).unwrap_err();
        assert!(err.to_string().contains("file"), "{err}");
    }
}
