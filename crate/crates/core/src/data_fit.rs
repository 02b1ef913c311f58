//! Measurement ingestion, slope-intercept fitting and RMSE evaluation of
//! path gain models against measured or synthetic data.

use std::io::{Read, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphology::{canyon_total_gain, Link, MacroGeometry, StreetScene};
use crate::reference::{tr38901_gain_db, Condition, Family, SlopeIntercept, ThreeGppScenario};
use crate::units::{require_positive, to_db};

/// Upper sanity bound on a measured path gain.
pub const MAX_PATH_GAIN_DB: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub range_m: f64,
    pub path_gain_db: f64,
    pub street: Option<String>,
    pub flag: Option<String>,
}

impl MeasurementRecord {
    pub fn new(range_m: f64, path_gain_db: f64) -> Result<Self> {
        let r = Self {
            range_m,
            path_gain_db,
            street: None,
            flag: None,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("range_m", self.range_m)?;
        if !self.path_gain_db.is_finite() || self.path_gain_db >= MAX_PATH_GAIN_DB {
            return Err(Error::invalid(
                "path_gain_db",
                format!(
                    "must be finite and < {MAX_PATH_GAIN_DB} dB, got {}",
                    self.path_gain_db
                ),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDataset {
    pub records: Vec<MeasurementRecord>,
    pub frequency_hz: f64,
    pub morphology: Option<String>,
}

impl MeasurementDataset {
    pub fn new(records: Vec<MeasurementRecord>, frequency_hz: f64) -> Result<Self> {
        require_positive("frequency_hz", frequency_hz)?;
        for r in &records {
            r.validate()?;
        }
        Ok(Self {
            records,
            frequency_hz,
            morphology: None,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records grouped by street tag, in order of first appearance.
    pub fn by_street(&self) -> Vec<(Option<String>, MeasurementDataset)> {
        let mut groups: Vec<(Option<String>, Vec<MeasurementRecord>)> = Vec::new();
        for r in &self.records {
            match groups.iter_mut().find(|(s, _)| *s == r.street) {
                Some((_, v)) => v.push(r.clone()),
                None => groups.push((r.street.clone(), vec![r.clone()])),
            }
        }
        groups
            .into_iter()
            .map(|(s, records)| {
                (
                    s,
                    MeasurementDataset {
                        records,
                        frequency_hz: self.frequency_hz,
                        morphology: self.morphology.clone(),
                    },
                )
            })
            .collect()
    }
}

/// Reads `range_m,path_gain_db[,street,flag]` CSV. `gain_db` and `flags`
/// are accepted as aliases so prediction output can be re-ingested; other
/// columns are ignored.
pub fn read_csv(path: &Path, frequency_hz: f64) -> Result<MeasurementDataset> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv_from(file, path, frequency_hz)
}

pub fn read_csv_from<R: Read>(
    reader: R,
    path: &Path,
    frequency_hz: f64,
) -> Result<MeasurementDataset> {
    require_positive("frequency_hz", frequency_hz)?;
    let csv_err = |line: u64, reason: String| Error::Csv {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| csv_err(1, e.to_string()))?
        .clone();
    let find = |names: &[&str]| headers.iter().position(|h| names.contains(&h));
    let range_col =
        find(&["range_m"]).ok_or_else(|| csv_err(1, "missing column `range_m`".into()))?;
    let gain_col = find(&["path_gain_db", "gain_db"])
        .ok_or_else(|| csv_err(1, "missing column `path_gain_db`".into()))?;
    let street_col = find(&["street"]);
    let flag_col = find(&["flag", "flags"]);

    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            csv_err(line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let number = |col: usize, name: &str| -> Result<f64> {
            let s = row.get(col).unwrap_or("");
            let v: f64 = s
                .parse()
                .map_err(|_| csv_err(line, format!("`{name}` is not a number: {s:?}")))?;
            if !v.is_finite() {
                return Err(csv_err(line, format!("`{name}` must be finite, got {s}")));
            }
            Ok(v)
        };
        let text = |col: Option<usize>| {
            col.and_then(|c| row.get(c))
                .filter(|s| !s.is_empty())
                .map(str::to_owned)
        };
        let rec = MeasurementRecord {
            range_m: number(range_col, "range_m")?,
            path_gain_db: number(gain_col, "path_gain_db")?,
            street: text(street_col),
            flag: text(flag_col),
        };
        rec.validate().map_err(|e| csv_err(line, e.to_string()))?;
        records.push(rec);
    }
    Ok(MeasurementDataset {
        records,
        frequency_hz,
        morphology: None,
    })
}

/// Writes the dataset in the ingestion format; gains with 2 decimals.
pub fn write_csv<W: Write>(ds: &MeasurementDataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let to_err = |e: csv::Error| Error::Config(format!("csv write: {e}"));
    w.write_record(["range_m", "path_gain_db", "street", "flag"])
        .map_err(to_err)?;
    for r in &ds.records {
        w.write_record([
            format!("{}", r.range_m),
            format!("{:.2}", r.path_gain_db),
            r.street.clone().unwrap_or_default(),
            r.flag.clone().unwrap_or_default(),
        ])
        .map_err(to_err)?;
    }
    w.flush()
        .map_err(|e| Error::Config(format!("csv write: {e}")))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub model: SlopeIntercept,
    pub rmse_db: f64,
    pub n_points: usize,
}

/// Ordinary least squares of `(log10 r, gain_dB)` pairs.
pub fn fit_points(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    for &(r, g) in points {
        require_positive("range", r)?;
        if !g.is_finite() {
            return Err(Error::invalid("gain", format!("must be finite, got {g}")));
        }
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.log10()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, p) in xs.iter().zip(points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (p.1 - my);
    }
    if sxx <= f64::EPSILON * n * mx.abs().max(1.0) {
        return Err(Error::Degenerate("fewer than two distinct ranges".into()));
    }
    let slope = sxy / sxx;
    let model = SlopeIntercept {
        intercept_db: my - slope * mx,
        exponent: -slope / 10.0,
    };
    let ss: f64 = points
        .iter()
        .map(|&(r, g)| (g - model.eval_db(r)).powi(2))
        .sum();
    Ok(FitResult {
        model,
        rmse_db: (ss / n).sqrt(),
        n_points: points.len(),
    })
}

pub fn fit_slope_intercept(ds: &MeasurementDataset) -> Result<FitResult> {
    let pts: Vec<(f64, f64)> = ds
        .records
        .iter()
        .map(|r| (r.range_m, r.path_gain_db))
        .collect();
    fit_points(&pts)
}

/// Anything that predicts a path gain in dB for a measurement record.
pub trait PathGainModel: Sync {
    fn gain_db(&self, record: &MeasurementRecord) -> Result<f64>;
}

impl PathGainModel for SlopeIntercept {
    fn gain_db(&self, record: &MeasurementRecord) -> Result<f64> {
        crate::reference::slope_intercept_eval(self, record.range_m)
    }
}

/// Adapts a closure into a [`PathGainModel`].
pub struct ModelFn<F>(pub F);

impl<F> PathGainModel for ModelFn<F>
where
    F: Fn(&MeasurementRecord) -> Result<f64> + Sync,
{
    fn gain_db(&self, record: &MeasurementRecord) -> Result<f64> {
        (self.0)(record)
    }
}

/// Measured minus predicted, per record, in record order.
pub fn residuals<M: PathGainModel + ?Sized>(
    ds: &MeasurementDataset,
    model: &M,
) -> Result<Vec<f64>> {
    let out: Vec<Result<f64>> = ds
        .records
        .par_iter()
        .enumerate()
        .map(|(index, rec)| {
            model
                .gain_db(rec)
                .and_then(|p| {
                    if p.is_finite() {
                        Ok(rec.path_gain_db - p)
                    } else {
                        Err(Error::Domain(format!("prediction is {p}")))
                    }
                })
                .map_err(|e| Error::ModelEvaluation {
                    index,
                    source: Box::new(e),
                })
        })
        .collect();
    out.into_iter().collect()
}

/// Root-mean-square of measured minus predicted dB, bias included.
pub fn rmse_against_model<M: PathGainModel + ?Sized>(
    ds: &MeasurementDataset,
    model: &M,
) -> Result<f64> {
    if ds.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    let res = residuals(ds, model)?;
    Ok(rms(&res))
}

fn rms(values: &[f64]) -> f64 {
    // Sorted by magnitude so the sum is independent of record order.
    let mut sq: Vec<f64> = values.iter().map(|v| v * v).collect();
    sq.sort_by(f64::total_cmp);
    (sq.iter().sum::<f64>() / values.len() as f64).sqrt()
}

/// One street of a Table 1 style evaluation.
#[derive(Debug, Clone)]
pub struct StreetData {
    pub name: String,
    pub dataset: MeasurementDataset,
    pub scene: StreetScene,
    pub macro_geometry: MacroGeometry,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub street: String,
    pub n_points: usize,
    pub data_fit_db: f64,
    pub uma_los_db: f64,
    pub uma_nlos_db: f64,
    pub theory_db: f64,
}

/// Composite urban model in dB at a record's range, taken as the
/// horizontal distance.
pub fn composite_model_db(
    scene: &StreetScene,
    m: &MacroGeometry,
    frequency_hz: f64,
    range_m: f64,
) -> Result<f64> {
    let link = Link::new(range_m, frequency_hz)?;
    Ok(to_db(canyon_total_gain(scene, m, &link)?.total))
}

fn uma(m: &MacroGeometry, frequency_hz: f64, condition: Condition) -> ThreeGppScenario {
    ThreeGppScenario::new(Family::UMa, condition, frequency_hz / 1e9, m.z_bs, m.z_m)
}

/// Per-street RMSE of the street's own fit, 38.901 UMa LOS/NLOS and the
/// composite model, plus an `Overall` row over the pooled records with a
/// single pooled fit.
pub fn table1_report(streets: &[StreetData]) -> Result<Vec<Table1Row>> {
    if streets.is_empty() {
        return Err(Error::Empty("street list"));
    }
    let mut rows = Vec::with_capacity(streets.len() + 1);
    let mut pooled_points = Vec::new();
    let mut pooled = [Vec::new(), Vec::new(), Vec::new()];
    for s in streets {
        let ds = &s.dataset;
        let fit = fit_slope_intercept(ds)?;
        let f = ds.frequency_hz;
        let los = uma(&s.macro_geometry, f, Condition::Los);
        let nlos = uma(&s.macro_geometry, f, Condition::Nlos);
        let cols = [
            residuals(
                ds,
                &ModelFn(|r: &MeasurementRecord| Ok(tr38901_gain_db(&los, r.range_m)?.value)),
            )?,
            residuals(
                ds,
                &ModelFn(|r: &MeasurementRecord| Ok(tr38901_gain_db(&nlos, r.range_m)?.value)),
            )?,
            residuals(
                ds,
                &ModelFn(|r: &MeasurementRecord| {
                    composite_model_db(&s.scene, &s.macro_geometry, f, r.range_m)
                }),
            )?,
        ];
        rows.push(Table1Row {
            street: s.name.clone(),
            n_points: ds.len(),
            data_fit_db: fit.rmse_db,
            uma_los_db: rms(&cols[0]),
            uma_nlos_db: rms(&cols[1]),
            theory_db: rms(&cols[2]),
        });
        pooled_points.extend(ds.records.iter().map(|r| (r.range_m, r.path_gain_db)));
        for (acc, c) in pooled.iter_mut().zip(cols) {
            acc.extend(c);
        }
    }
    rows.push(Table1Row {
        street: "Overall".into(),
        n_points: pooled_points.len(),
        data_fit_db: fit_points(&pooled_points)?.rmse_db,
        uma_los_db: rms(&pooled[0]),
        uma_nlos_db: rms(&pooled[1]),
        theory_db: rms(&pooled[2]),
    });
    Ok(rows)
}

/// Running median over `2 * half_window + 1` samples, truncated at the
/// ends.
pub fn median_window(values: &[f64], half_window: usize) -> Vec<f64> {
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half_window);
            let hi = (i + half_window + 1).min(values.len());
            let mut w = values[lo..hi].to_vec();
            w.sort_by(f64::total_cmp);
            let n = w.len();
            if n % 2 == 1 {
                w[n / 2]
            } else {
                0.5 * (w[n / 2 - 1] + w[n / 2])
            }
        })
        .collect()
}

/// Samples `model` at `ranges` and adds seeded Gaussian noise of
/// `sigma_db`.
pub fn synthesize<F>(
    ranges: &[f64],
    frequency_hz: f64,
    sigma_db: f64,
    seed: u64,
    model: F,
) -> Result<MeasurementDataset>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(sigma_db.is_finite() && sigma_db >= 0.0) {
        return Err(Error::invalid(
            "sigma_db",
            format!("must be finite and >= 0, got {sigma_db}"),
        ));
    }
    let normal =
        Normal::new(0.0, sigma_db).map_err(|e| Error::invalid("sigma_db", e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(ranges.len());
    for (index, &r) in ranges.iter().enumerate() {
        let g = model(r).map_err(|e| Error::ModelEvaluation {
            index,
            source: Box::new(e),
        })?;
        let noisy = g + normal.sample(&mut rng);
        records.push(MeasurementRecord::new(r, noisy)?);
    }
    MeasurementDataset::new(records, frequency_hz)
}
