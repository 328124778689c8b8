use std::io::{Read, Write};

use rayon::prelude::*;

use super::{averages_for, closed_form, noisy_channel, NoiseKind, NoiseStrength};
use crate::error::{Error, Result};
use crate::protocol::ProtocolInputs;

pub const CSV_HEADER: [&str; 7] = ["kind", "strength", "b2", "y2", "numeric_f", "closed_form_f", "deviation"];
const WEIGHTED_COLUMN: &str = "weighted_f";

/// Grid of (strength, b², |y|²) points for one noise model.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub kind: NoiseKind,
    pub strengths: Vec<f64>,
    pub b2_values: Vec<f64>,
    pub y2_values: Vec<f64>,
}

impl SweepGrid {
    pub fn new(kind: NoiseKind, strengths: Vec<f64>, b2_values: Vec<f64>, y2_values: Vec<f64>) -> Result<Self> {
        for (name, values) in [("strength", &strengths), ("b2", &b2_values), ("y2", &y2_values)] {
            if let Some(&v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::OutOfRange { name, value: v });
            }
        }
        Ok(Self { kind, strengths, b2_values, y2_values })
    }

    /// `count` evenly spaced values from `start` to `stop` inclusive.
    pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
        match count {
            0 => Vec::new(),
            1 => vec![start],
            _ => (0..count)
                .map(|i| {
                    if i == count - 1 {
                        stop
                    } else {
                        start + (stop - start) * i as f64 / (count - 1) as f64
                    }
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.strengths.len() * self.b2_values.len() * self.y2_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityRecord {
    pub kind: NoiseKind,
    pub strength: f64,
    pub b2: f64,
    pub y2: f64,
    pub numeric_f: f64,
    pub closed_form_f: f64,
    pub deviation: f64,
    /// Probability-weighted average, when computed.
    pub weighted_f: Option<f64>,
}

/// Evaluates every grid point. Strengths run in parallel; rows come back
/// ordered by (strength, b², |y|²) as listed in the grid.
pub fn sweep(grid: &SweepGrid, y_phase: f64) -> Result<Vec<FidelityRecord>> {
    let rows: Vec<Vec<FidelityRecord>> = grid
        .strengths
        .par_iter()
        .map(|&p| -> Result<Vec<FidelityRecord>> {
            let noisy = noisy_channel(grid.kind, NoiseStrength::new(p)?)?;
            let mut out = Vec::with_capacity(grid.b2_values.len() * grid.y2_values.len());
            for &b2 in &grid.b2_values {
                for &y2 in &grid.y2_values {
                    let inputs = ProtocolInputs::from_weights(b2, y2, y_phase)?;
                    let avg = averages_for(&noisy, &inputs)?;
                    let cf = closed_form(grid.kind, p, b2, y2)?;
                    out.push(FidelityRecord {
                        kind: grid.kind,
                        strength: p,
                        b2,
                        y2,
                        numeric_f: avg.unweighted,
                        closed_form_f: cf,
                        deviation: (avg.unweighted - cf).abs(),
                        weighted_f: Some(avg.weighted),
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Twelve significant digits, fixed notation.
fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let decimals = (11 - v.abs().log10().floor() as i32).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn write_csv<W: Write>(records: &[FidelityRecord], writer: W, with_weighted: bool) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    if with_weighted {
        header.push(WEIGHTED_COLUMN);
    }
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![
            r.kind.to_string(),
            sig12(r.strength),
            sig12(r.b2),
            sig12(r.y2),
            sig12(r.numeric_f),
            sig12(r.closed_form_f),
            sig12(r.deviation),
        ];
        if with_weighted {
            row.push(r.weighted_f.map(sig12).unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(reader: R) -> Result<Vec<FidelityRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.len() < CSV_HEADER.len() || headers.iter().zip(CSV_HEADER).any(|(a, b)| a != b) {
        return Err(Error::InvalidInput(format!("unexpected CSV header {headers:?}")));
    }
    let weighted = headers.get(CSV_HEADER.len()) == Some(WEIGHTED_COLUMN);
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let num = |i: usize| -> Result<f64> {
            let s = row.get(i).unwrap_or_default();
            s.parse().map_err(|_| Error::InvalidInput(format!("bad number `{s}` in column {i}")))
        };
        out.push(FidelityRecord {
            kind: row.get(0).unwrap_or_default().parse()?,
            strength: num(1)?,
            b2: num(2)?,
            y2: num(3)?,
            numeric_f: num(4)?,
            closed_form_f: num(5)?,
            deviation: num(6)?,
            weighted_f: if weighted { Some(num(7)?) } else { None },
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KindSummary {
    pub kind: NoiseKind,
    pub points: usize,
    pub max_deviation: f64,
}

/// Worst |numeric − closed form| per noise model, in model order.
pub fn summarize(records: &[FidelityRecord]) -> Vec<KindSummary> {
    NoiseKind::ALL
        .iter()
        .filter_map(|&kind| {
            let rows: Vec<_> = records.iter().filter(|r| r.kind == kind).collect();
            (!rows.is_empty()).then(|| KindSummary {
                kind,
                points: rows.len(),
                max_deviation: rows.iter().map(|r| r.deviation).fold(0.0, f64::max),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_formatting() {
        assert_eq!(sig12(0.92), "0.920000000000");
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1.5e-7), "0.000000150000000000");
    }

    #[test]
    fn linspace_is_inclusive() {
        assert_eq!(SweepGrid::linspace(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(SweepGrid::linspace(0.3, 0.3, 1), vec![0.3]);
    }

    #[test]
    fn csv_round_trip() {
        let grid = SweepGrid::new(NoiseKind::PhaseFlip, vec![0.0, 0.5], vec![0.4], vec![0.3]).unwrap();
        let recs = sweep(&grid, 0.0).unwrap();
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf, true).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("kind,strength,b2,y2,numeric_f,closed_form_f,deviation,weighted_f\n"));
        let back = read_csv(&buf[..]).unwrap();
        assert_eq!(back.len(), 2);
        for (a, b) in recs.iter().zip(&back) {
            assert_eq!(a.kind, b.kind);
            assert!((a.numeric_f - b.numeric_f).abs() < 1e-11);
        }
        let s = summarize(&back);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].points, 2);
    }

    #[test]
    fn grid_rejects_out_of_range() {
        assert!(SweepGrid::new(NoiseKind::BitFlip, vec![1.5], vec![0.1], vec![0.1]).is_err());
    }
}
