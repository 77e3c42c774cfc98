//! Measurement-quality statistics for clustering coefficients taken over a
//! sample of subjects: stability, concurrent validity, distinguishability,
//! and discriminability.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use serde::Serialize;

use crate::error::{Error, Result};

/// Two measurements per subject.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedSample {
    subjects: Vec<String>,
    first: Vec<f64>,
    second: Vec<f64>,
}

impl PairedSample {
    pub fn new(rows: impl IntoIterator<Item = (String, f64, f64)>) -> Result<Self> {
        let mut s = PairedSample {
            subjects: Vec::new(),
            first: Vec::new(),
            second: Vec::new(),
        };
        for (id, a, b) in rows {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite value for `{id}`")));
            }
            s.subjects.push(id);
            s.first.push(a);
            s.second.push(b);
        }
        if s.subjects.is_empty() {
            return Err(Error::InvalidArgument("empty paired sample".into()));
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.subjects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subjects.is_empty()
    }

    pub fn subjects(&self) -> &[String] {
        &self.subjects
    }
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Share SSM/SST of the variation explained by subject in a one-way ANOVA
/// with two observations per subject.
pub fn stability(p: &PairedSample) -> Result<f64> {
    if p.len() < 2 {
        return Err(Error::InvalidArgument("stability needs at least two subjects".into()));
    }
    let all: Vec<f64> = p.first.iter().chain(&p.second).copied().collect();
    let grand = mean(&all);
    let ssm: f64 = p
        .first
        .iter()
        .zip(&p.second)
        .map(|(a, b)| 2.0 * ((a + b) / 2.0 - grand).powi(2))
        .sum();
    // Within-subject variation; SST = SSM + SSE.
    let sse: f64 = p.first.iter().zip(&p.second).map(|(a, b)| (a - b).powi(2) / 2.0).sum();
    let sst = ssm + sse;
    if sst == 0.0 {
        return Err(Error::undefined("no variation in the sample"));
    }
    Ok(ssm / sst)
}

/// Squared Pearson correlation.
pub fn r_squared(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument("samples differ in length".into()));
    }
    if x.len() < 2 {
        return Err(Error::InvalidArgument("at least two observations are required".into()));
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::undefined("a sample has zero variance"));
    }
    Ok((sxy * sxy / (sxx * syy)).min(1.0))
}

pub fn distinguishability(x: &[f64], y: &[f64]) -> Result<f64> {
    r_squared(x, y).map(|r| 1.0 - r)
}

/// Four times the population variance; 1 for an even split of 0s and 1s.
pub fn discriminability(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("empty sample".into()));
    }
    let m = mean(values);
    Ok(4.0 * values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / values.len() as f64)
}

/// Long-format measurements: one value per subject, statistic, and period.
/// Missing or undefined values are kept as `None`.
#[derive(Debug, Clone, Default)]
pub struct Panel {
    values: BTreeMap<(String, String, String), Option<f64>>,
    statistics: Vec<String>,
    periods: Vec<String>,
}

fn is_missing(s: &str) -> bool {
    matches!(s.to_ascii_lowercase().as_str(), "" | "na" | "nan" | "undefined" | "null")
}

impl Panel {
    /// Reads `subject,statistic,period,value` CSV.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers: Vec<String> = rdr.headers()?.iter().map(|h| h.to_ascii_lowercase()).collect();
        let col = |name: &str| {
            headers.iter().position(|h| h == name).ok_or_else(|| Error::BadRow {
                row: 1,
                message: format!("missing `{name}` column"),
            })
        };
        let (cs, ct, cp, cv) = (col("subject")?, col("statistic")?, col("period")?, col("value")?);
        let mut panel = Panel::default();
        for (n, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let row = n as u64 + 2;
            let field = |c: usize| rec.get(c).unwrap_or("").to_string();
            let raw = field(cv);
            let value = if is_missing(&raw) {
                None
            } else {
                let v: f64 = raw.parse().map_err(|_| Error::BadRow {
                    row,
                    message: format!("value `{raw}` is not a number"),
                })?;
                Some(v).filter(|v| v.is_finite())
            };
            panel.insert(field(cs), field(ct), field(cp), value);
        }
        Ok(panel)
    }

    pub fn insert(&mut self, subject: String, statistic: String, period: String, value: Option<f64>) {
        if !self.statistics.contains(&statistic) {
            self.statistics.push(statistic.clone());
        }
        if !self.periods.contains(&period) {
            self.periods.push(period.clone());
        }
        self.values.insert((statistic, period, subject), value);
    }

    /// Statistics in first-seen order.
    pub fn statistics(&self) -> &[String] {
        &self.statistics
    }

    /// Periods sorted numerically when they all parse as numbers, otherwise
    /// lexicographically.
    pub fn periods(&self) -> Vec<String> {
        let mut p = self.periods.clone();
        if p.iter().all(|x| x.parse::<f64>().is_ok()) {
            p.sort_by(|a, b| a.parse::<f64>().unwrap().total_cmp(&b.parse::<f64>().unwrap()));
        } else {
            p.sort();
        }
        p
    }

    fn subjects(&self) -> BTreeSet<&String> {
        self.values.keys().map(|k| &k.2).collect()
    }

    fn get(&self, statistic: &str, period: &str, subject: &str) -> Option<Option<f64>> {
        self.values
            .get(&(statistic.to_string(), period.to_string(), subject.to_string()))
            .copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub assessment: &'static str,
    pub statistic: String,
    /// The second statistic for validity and distinguishability.
    pub other: Option<String>,
    /// `None` when the assessment is undefined on this sample.
    pub value: Option<f64>,
    /// Observations (or pairs) used.
    pub n: usize,
    /// Observations dropped for missing or undefined values.
    pub dropped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstrumentReport {
    pub rows: Vec<ReportRow>,
}

impl InstrumentReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("assessment,statistic,other,value,n,dropped\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.assessment,
                r.statistic,
                r.other.as_deref().unwrap_or(""),
                r.value.map_or("undefined".to_string(), |v| v.to_string()),
                r.n,
                r.dropped
            ));
        }
        s
    }
}

fn defined(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_undefined() || matches!(e, Error::InvalidArgument(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Every assessment for every statistic (and pair of statistics), pooled
/// across periods. Stability pairs each subject's values at adjacent periods.
pub fn assess(panel: &Panel) -> Result<InstrumentReport> {
    let periods = panel.periods();
    let subjects = panel.subjects();
    let mut rows = Vec::new();
    for stat in panel.statistics() {
        let mut pairs = Vec::new();
        let mut dropped = 0;
        for w in periods.windows(2) {
            for &s in &subjects {
                match (panel.get(stat, &w[0], s), panel.get(stat, &w[1], s)) {
                    (Some(Some(a)), Some(Some(b))) => pairs.push((format!("{s}@{}", w[0]), a, b)),
                    (None, None) => {}
                    _ => dropped += 1,
                }
            }
        }
        let n = pairs.len();
        let value = match PairedSample::new(pairs) {
            Ok(p) => defined(stability(&p))?,
            Err(_) => None,
        };
        rows.push(ReportRow {
            assessment: "stability",
            statistic: stat.clone(),
            other: None,
            value,
            n,
            dropped,
        });

        let mut values = Vec::new();
        let mut dropped = 0;
        for p in &periods {
            for &s in &subjects {
                match panel.get(stat, p, s) {
                    Some(Some(v)) => values.push(v),
                    Some(None) => dropped += 1,
                    None => {}
                }
            }
        }
        rows.push(ReportRow {
            assessment: "discriminability",
            statistic: stat.clone(),
            other: None,
            value: defined(discriminability(&values))?,
            n: values.len(),
            dropped,
        });
    }
    let stats = panel.statistics();
    for (x, a) in stats.iter().enumerate() {
        for b in &stats[x + 1..] {
            let (mut xs, mut ys, mut dropped) = (Vec::new(), Vec::new(), 0);
            for p in &periods {
                for &s in &subjects {
                    match (panel.get(a, p, s), panel.get(b, p, s)) {
                        (Some(Some(u)), Some(Some(v))) => {
                            xs.push(u);
                            ys.push(v);
                        }
                        (None, None) => {}
                        _ => dropped += 1,
                    }
                }
            }
            let r2 = defined(r_squared(&xs, &ys))?;
            for (assessment, value) in [("validity", r2), ("distinguishability", r2.map(|r| 1.0 - r))] {
                rows.push(ReportRow {
                    assessment,
                    statistic: a.clone(),
                    other: Some(b.clone()),
                    value,
                    n: xs.len(),
                    dropped,
                });
            }
        }
    }
    Ok(InstrumentReport { rows })
}
