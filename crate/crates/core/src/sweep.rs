//! Range sweeps of a prediction and their CSV form.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::config::Prediction;
use crate::error::{Error, Result};
use crate::flags::Regime;
use crate::units::to_db;

/// `min:max:points[:log]`; linear spacing unless `log` is given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec {
    pub min_m: f64,
    pub max_m: f64,
    pub points: usize,
    pub log: bool,
}

impl RangeSpec {
    pub fn ranges(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min_m];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / n;
                if i + 1 == self.points {
                    self.max_m
                } else if self.log {
                    self.min_m * (self.max_m / self.min_m).powf(t)
                } else {
                    self.min_m + (self.max_m - self.min_m) * t
                }
            })
            .collect()
    }
}

impl FromStr for RangeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| {
            Error::invalid(
                "range",
                format!("`{s}`: {reason}; expected min:max:points[:log]"),
            )
        };
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad("wrong number of fields"));
        }
        let min_m: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| bad("min is not a number"))?;
        let max_m: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| bad("max is not a number"))?;
        let points: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| bad("points is not a count"))?;
        let log = match parts.get(3).map(|p| p.trim()) {
            None | Some("lin") => false,
            Some("log") => true,
            Some(_) => return Err(bad("spacing must be `log` or `lin`")),
        };
        if !(min_m.is_finite() && min_m > 0.0) {
            return Err(bad("min must be > 0"));
        }
        if points == 0 {
            return Err(bad("points must be >= 1"));
        }
        if !(max_m.is_finite() && (max_m > min_m || (points == 1 && max_m == min_m))) {
            return Err(bad("max must exceed min"));
        }
        Ok(RangeSpec {
            min_m,
            max_m,
            points,
            log,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub range_m: f64,
    pub gain_db: f64,
    pub components_db: Vec<f64>,
    pub flags: Regime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub component_names: Vec<String>,
    pub points: Vec<SweepPoint>,
}

/// Evaluates `predict` at every range, in parallel, keeping range order.
pub fn sweep<F>(ranges: &[f64], component_names: &[&str], predict: F) -> Result<SweepResult>
where
    F: Fn(f64) -> Result<Prediction> + Sync,
{
    if ranges
        .windows(2)
        .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
    {
        return Err(Error::invalid(
            "range",
            "ranges must be strictly increasing",
        ));
    }
    let points = ranges
        .par_iter()
        .map(|&r| {
            let p = predict(r)?;
            Ok(SweepPoint {
                range_m: r,
                gain_db: to_db(p.total),
                components_db: p.components.iter().map(|&c| to_db(c)).collect(),
                flags: p.flags,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        component_names: component_names.iter().map(|s| s.to_string()).collect(),
        points,
    })
}

impl SweepResult {
    /// Writes `range_m,gain_db,component_*,flags` with dB to 2 decimals.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let to_err = |e: csv::Error| Error::Config(format!("csv write: {e}"));
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["range_m".to_string(), "gain_db".to_string()];
        header.extend(
            self.component_names
                .iter()
                .map(|c| format!("component_{c}")),
        );
        header.push("flags".into());
        w.write_record(&header).map_err(to_err)?;
        for p in &self.points {
            let mut row = vec![format!("{}", p.range_m), format!("{:.2}", p.gain_db)];
            row.extend(p.components_db.iter().map(|c| format!("{c:.2}")));
            row.push(p.flags.names());
            w.write_record(&row).map_err(to_err)?;
        }
        w.flush()
            .map_err(|e| Error::Config(format!("csv write: {e}")))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data_fit::read_csv_from;
    use std::path::Path;

    #[test]
    fn range_spec_parses() {
        let r: RangeSpec = "5:70:100".parse().unwrap();
        let v = r.ranges();
        assert_eq!(v.len(), 100);
        assert_eq!(v[0], 5.0);
        assert_eq!(v[99], 70.0);
        let r: RangeSpec = "10:1000:3:log".parse().unwrap();
        let v = r.ranges();
        assert!((v[1] - 100.0).abs() < 1e-9);
        for bad in [
            "",
            "5:70",
            "0:10:5",
            "10:5:3",
            "5:70:0",
            "5:70:3:cubic",
            "a:b:c",
        ] {
            assert!(bad.parse::<RangeSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn csv_round_trips_through_ingestion() {
        let ranges = RangeSpec::from_str("10:100:7:log").unwrap().ranges();
        let s = sweep(&ranges, &["a"], |r| {
            Ok(Prediction {
                total: 1e-6 / (r * r),
                components: vec![0.5e-6 / (r * r)],
                flags: Regime::SHORT_RANGE,
            })
        })
        .unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("range_m,gain_db,component_a,flags\n"));
        let ds = read_csv_from(buf.as_slice(), Path::new("mem"), 2e9).unwrap();
        assert_eq!(ds.len(), 7);
        for (rec, p) in ds.records.iter().zip(&s.points) {
            assert_eq!(rec.range_m, p.range_m);
            assert_eq!(
                format!("{:.2}", rec.path_gain_db),
                format!("{:.2}", p.gain_db)
            );
            assert_eq!(rec.flag.as_deref(), Some("short_range"));
        }
    }

    #[test]
    fn unsorted_ranges_rejected() {
        let r = sweep(&[2.0, 1.0], &[], |_| unreachable!());
        assert!(r.is_err());
    }
}
