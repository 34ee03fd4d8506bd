//! Text formats.
//!
//! | data               | format | columns / keys                                      |
//! |--------------------|--------|-----------------------------------------------------|
//! | click distribution | CSV    | `m,probability`                                     |
//! | click histogram    | CSV    | `m,count` (17 rows)                                 |
//! | efficiency sweep   | CSV    | `eta,n,p_correct` (optional trailing `p_analytic`)  |
//! | fit result         | JSON   | `normalization, mu_prime, eta_l_mu0, rss, iterations` |
//! | layout             | JSON   | see [`crate::network::TmdLayout`]                   |
//!
//! CSV files may start with `#` comment lines, which readers skip. Floats are
//! written in shortest round-trip form, so reading back is lossless.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::detection::ClickDistribution;
use crate::error::{Error, Result};
use crate::fit::{ClickHistogram, FitResult};
use crate::BINS;

fn write_comments<W: Write>(w: &mut W, comments: &[String]) -> Result<()> {
    for line in comments {
        writeln!(w, "# {line}")?;
    }
    Ok(())
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(r)
}

fn check_headers<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let headers = rdr.headers()?;
    let got: Vec<&str> = headers.iter().collect();
    if got.len() < expected.len() || got[..expected.len()] != *expected {
        return Err(Error::Format(format!(
            "expected header `{}`, found `{}`",
            expected.join(","),
            got.join(",")
        )));
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct DistributionRow {
    m: usize,
    probability: f64,
}

/// Writes `P(m)` for `m = 0..=max_m`.
pub fn write_distribution<W: Write>(
    mut w: W,
    dist: &ClickDistribution,
    max_m: usize,
    comments: &[String],
) -> Result<()> {
    write_comments(&mut w, comments)?;
    let mut wtr = csv::Writer::from_writer(w);
    for m in 0..=max_m.min(dist.max_count()) {
        wtr.serialize(DistributionRow {
            m,
            probability: dist.get(m),
        })?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a distribution; counts missing from the file have probability 0.
pub fn read_distribution<R: Read>(r: R) -> Result<ClickDistribution> {
    let mut rdr = reader(r);
    check_headers(&mut rdr, &["m", "probability"])?;
    let mut probs = vec![0.0; BINS + 1];
    for row in rdr.deserialize() {
        let row: DistributionRow = row?;
        if row.m > BINS {
            return Err(Error::Format(format!("m = {} exceeds {BINS}", row.m)));
        }
        probs[row.m] = row.probability;
    }
    ClickDistribution::from_probs(probs)
}

#[derive(Debug, Serialize, Deserialize)]
struct HistogramRow {
    m: usize,
    count: u64,
}

pub fn write_histogram<W: Write>(mut w: W, hist: &ClickHistogram, comments: &[String]) -> Result<()> {
    write_comments(&mut w, comments)?;
    let mut wtr = csv::Writer::from_writer(w);
    for (m, &count) in hist.counts().iter().enumerate() {
        wtr.serialize(HistogramRow { m, count })?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a `m,count` histogram with exactly one row per `m = 0..=16`.
pub fn read_histogram<R: Read>(r: R) -> Result<ClickHistogram> {
    let mut rdr = reader(r);
    check_headers(&mut rdr, &["m", "count"])?;
    let mut counts = vec![None; BINS + 1];
    for row in rdr.deserialize() {
        let row: HistogramRow = row?;
        let slot = counts
            .get_mut(row.m)
            .ok_or_else(|| Error::Format(format!("m = {} exceeds {BINS}", row.m)))?;
        if slot.replace(row.count).is_some() {
            return Err(Error::Format(format!("duplicate row for m = {}", row.m)));
        }
    }
    let counts = counts
        .into_iter()
        .enumerate()
        .map(|(m, c)| c.ok_or_else(|| Error::Format(format!("missing row for m = {m}"))))
        .collect::<Result<Vec<_>>>()?;
    ClickHistogram::new(counts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eta: f64,
    pub n: usize,
    pub p_correct: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_analytic: Option<f64>,
}

pub fn write_sweep<W: Write>(mut w: W, rows: &[SweepRow], comments: &[String]) -> Result<()> {
    write_comments(&mut w, comments)?;
    let with_analytic = rows.iter().any(|r| r.p_analytic.is_some());
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    if with_analytic {
        wtr.write_record(["eta", "n", "p_correct", "p_analytic"])?;
    } else {
        wtr.write_record(["eta", "n", "p_correct"])?;
    }
    for row in rows {
        let mut rec = vec![row.eta.to_string(), row.n.to_string(), row.p_correct.to_string()];
        if with_analytic {
            rec.push(row.p_analytic.map(|p| p.to_string()).unwrap_or_default());
        }
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_sweep<R: Read>(r: R) -> Result<Vec<SweepRow>> {
    let mut rdr = reader(r);
    check_headers(&mut rdr, &["eta", "n", "p_correct"])?;
    rdr.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

pub fn write_fit<W: Write>(mut w: W, fit: &FitResult) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, fit)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_fit<R: Read>(r: R) -> Result<FitResult> {
    Ok(serde_json::from_reader(r)?)
}
