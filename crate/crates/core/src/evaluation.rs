//! Loss accounting, the window-size sweep, and `k*` selection.

use std::fmt;
use std::io::{Read, Write};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::alphabet::Sequence;
use crate::assignment::Assignment;
use crate::channel::{EstimatedLossTables, LossMatrix};
use crate::dude::dude_assignment;
use crate::error::{Error, Result};
use crate::neural::{train, Architecture, TrainConfig};

/// `(1/n) Σ Λ(x_i, x̂_i)`; the bit error rate under Hamming loss.
pub fn true_loss(x: &Sequence, xhat: &Sequence, lam: &LossMatrix) -> Result<f64> {
    if x.len() != xhat.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: xhat.len(),
        });
    }
    if x.is_empty() {
        return Ok(0.0);
    }
    let total: f64 = x
        .data()
        .iter()
        .zip(xhat.data())
        .map(|(&a, &b)| lam.loss(a, b))
        .sum();
    Ok(total / x.len() as f64)
}

/// `(1/n) Σ L(z_i, s_i)`, computable without the clean sequence. Averages over
/// all positions, boundary positions included.
pub fn estimated_loss(
    z: &Sequence,
    assignment: &Assignment,
    tables: &EstimatedLossTables,
) -> Result<f64> {
    assignment.estimated_loss(z, tables)
}

/// Which sliding-window denoiser a sweep fits at each `k`.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Dude,
    Neural {
        arch: Architecture,
        cfg: TrainConfig,
    },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Dude => "dude",
            Method::Neural { .. } => "ndude",
        }
    }

    /// Fits the method at half-width `k` and returns its per-position choice.
    pub fn fit(&self, z: &Sequence, k: usize, tables: &EstimatedLossTables) -> Result<Assignment> {
        match self {
            Method::Dude => dude_assignment(z, k, tables),
            Method::Neural { arch, cfg } => {
                let (model, _) = train::<f32>(z, k, tables, arch, cfg)?;
                model.assignment(z)
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Dude => f.write_str("dude"),
            Method::Neural { arch, cfg } => write!(
                f,
                "ndude arch={arch} epochs={} batch={} lr={} seed={}",
                cfg.epochs, cfg.batch_size, cfg.learning_rate, cfg.seed
            ),
        }
    }
}

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KRecord {
    pub k: usize,
    pub estimated_loss: f64,
    pub true_ber: Option<f64>,
    pub wall_time_s: Option<f64>,
}

/// Per-`k` results with the selected `k*`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub method: String,
    pub fingerprint: String,
    pub records: Vec<KRecord>,
    pub k_star: usize,
}

impl ExperimentReport {
    /// Builds a report, sorting records by `k` and choosing `k*` as the
    /// smallest `k` attaining the minimum estimated loss.
    pub fn new(method: String, fingerprint: String, mut records: Vec<KRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Config("empty sweep".into()));
        }
        records.sort_by_key(|r| r.k);
        let k_star = select_k_star(&records);
        Ok(Self {
            method,
            fingerprint,
            records,
            k_star,
        })
    }

    pub fn record(&self, k: usize) -> Option<&KRecord> {
        self.records.iter().find(|r| r.k == k)
    }

    pub fn best(&self) -> &KRecord {
        self.record(self.k_star).expect("k* is one of the records")
    }

    /// Drops wall-clock times so the report is reproducible byte for byte.
    pub fn without_timing(mut self) -> Self {
        for r in &mut self.records {
            r.wall_time_s = None;
        }
        self
    }

    /// CSV with `#` provenance lines, then `k,estimated_loss,true_ber,wall_time_s`.
    /// Missing values are empty fields.
    pub fn write_csv<W: Write>(&self, mut out: W, provenance: &[(&str, String)]) -> Result<()> {
        writeln!(out, "# method: {}", self.method)?;
        writeln!(out, "# fingerprint: {}", self.fingerprint)?;
        for (key, value) in provenance {
            writeln!(out, "# {key}: {value}")?;
        }
        writeln!(out, "# k_star: {}", self.k_star)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "estimated_loss", "true_ber", "wall_time_s"])?;
        for r in &self.records {
            w.write_record([
                r.k.to_string(),
                r.estimated_loss.to_string(),
                r.true_ber.map(|v| v.to_string()).unwrap_or_default(),
                r.wall_time_s.map(|v| v.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut text = String::new();
        let mut input = input;
        input.read_to_string(&mut text)?;
        let mut method = String::new();
        let mut fingerprint = String::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let body = line.trim_start_matches('#').trim();
            if let Some(v) = body.strip_prefix("method:") {
                method = v.trim().to_string();
            } else if let Some(v) = body.strip_prefix("fingerprint:") {
                fingerprint = v.trim().to_string();
            }
        }
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut records = Vec::new();
        for row in rdr.records() {
            let row = row?;
            let field = |i: usize| row.get(i).unwrap_or("").trim().to_string();
            let opt = |s: String| -> Result<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse()
                        .map(Some)
                        .map_err(|_| Error::Parse(format!("bad number {s:?}")))
                }
            };
            records.push(KRecord {
                k: field(0)
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad k {:?}", field(0))))?,
                estimated_loss: field(1)
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad estimated loss {:?}", field(1))))?,
                true_ber: opt(field(2))?,
                wall_time_s: opt(field(3))?,
            });
        }
        Self::new(method, fingerprint, records)
    }

    /// JSON summary of the selection.
    pub fn summary_json(&self, provenance: &[(&str, String)]) -> Result<String> {
        let best = self.best();
        let mut map = serde_json::Map::new();
        map.insert("method".into(), self.method.clone().into());
        map.insert("fingerprint".into(), self.fingerprint.clone().into());
        map.insert("k_star".into(), self.k_star.into());
        map.insert("estimated_loss".into(), best.estimated_loss.into());
        map.insert(
            "true_ber".into(),
            best.true_ber.map_or(serde_json::Value::Null, Into::into),
        );
        map.insert(
            "k_values".into(),
            self.records.iter().map(|r| r.k).collect::<Vec<_>>().into(),
        );
        for (key, value) in provenance {
            map.insert((*key).into(), value.clone().into());
        }
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(map))?;
        s.push('\n');
        Ok(s)
    }
}

fn select_k_star(records: &[KRecord]) -> usize {
    let mut best = &records[0];
    for r in &records[1..] {
        if r.estimated_loss < best.estimated_loss {
            best = r;
        }
    }
    best.k
}

/// Result of a sweep: the report and the reconstruction at `k*`.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub report: ExperimentReport,
    pub assignment: Assignment,
    pub reconstruction: Sequence,
}

/// Runs `method` for every `k` in `k_values`, recording the estimated loss and,
/// when `clean` is given, the true loss. Selects `k*` by minimum estimated loss.
pub fn sweep(
    z: &Sequence,
    k_values: &[usize],
    tables: &EstimatedLossTables,
    lam: &LossMatrix,
    method: &Method,
    clean: Option<&Sequence>,
    mut on_record: impl FnMut(&KRecord),
) -> Result<SweepOutcome> {
    if k_values.is_empty() {
        return Err(Error::Config("no window sizes to sweep".into()));
    }
    if let Some(x) = clean {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: z.len(),
            });
        }
    }
    let mut records = Vec::with_capacity(k_values.len());
    let mut best: Option<(f64, usize, Assignment)> = None;
    for &k in k_values {
        let start = Instant::now();
        let assignment = method.fit(z, k, tables)?;
        let est = assignment.estimated_loss(z, tables)?;
        let true_ber = match clean {
            Some(x) => Some(true_loss(x, &assignment.reconstruct(z, tables)?, lam)?),
            None => None,
        };
        let record = KRecord {
            k,
            estimated_loss: est,
            true_ber,
            wall_time_s: Some(start.elapsed().as_secs_f64()),
        };
        on_record(&record);
        records.push(record);
        let better = match &best {
            None => true,
            Some((b, bk, _)) => est < *b || (est == *b && k < *bk),
        };
        if better {
            best = Some((est, k, assignment));
        }
    }
    let (_, _, assignment) = best.expect("at least one k");
    let reconstruction = assignment.reconstruct(z, tables)?;
    let report = ExperimentReport::new(
        method.to_string(),
        tables.fingerprint().to_string(),
        records,
    )?;
    debug_assert_eq!(report.k_star, assignment.k());
    Ok(SweepOutcome {
        report,
        assignment,
        reconstruction,
    })
}

/// Sweep over `k = 1..=k_max`.
pub fn sweep_k(
    z: &Sequence,
    k_max: usize,
    tables: &EstimatedLossTables,
    lam: &LossMatrix,
    method: &Method,
    clean: Option<&Sequence>,
) -> Result<SweepOutcome> {
    if k_max == 0 {
        return Err(Error::Config("k_max must be at least 1".into()));
    }
    let ks: Vec<usize> = (1..=k_max).collect();
    sweep(z, &ks, tables, lam, method, clean, |_| {})
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::alphabet::Alphabet;
    use crate::channel::ChannelMatrix;

    fn binary(data: &[u8]) -> Sequence {
        Sequence::new(data.to_vec(), Arc::new(Alphabet::binary())).unwrap()
    }

    fn bsc_tables() -> EstimatedLossTables {
        EstimatedLossTables::build(&ChannelMatrix::bsc(0.1).unwrap(), &LossMatrix::hamming(2))
            .unwrap()
    }

    #[test]
    fn true_loss_examples() {
        let lam = LossMatrix::hamming(2);
        let x = binary(&[0, 1, 0]);
        assert_eq!(true_loss(&x, &x, &lam).unwrap(), 0.0);
        assert!((true_loss(&x, &binary(&[0, 1, 1]), &lam).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            true_loss(&binary(&[0, 0, 1, 1]), &binary(&[1, 0, 0, 1]), &lam).unwrap(),
            0.5
        );
        assert!(matches!(
            true_loss(&x, &binary(&[0]), &lam),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn estimated_loss_examples() {
        let t = bsc_tables();
        let z = binary(&[0, 1, 1, 0, 1, 0, 0]);
        let id = Assignment::new(1, vec![2; z.len()]);
        assert!((estimated_loss(&z, &id, &t).unwrap() - 0.1).abs() < 1e-12);
        let zeros = binary(&[0; 9]);
        let always0 = Assignment::new(1, vec![0; 9]);
        assert!((estimated_loss(&zeros, &always0, &t).unwrap() + 0.125).abs() < 1e-12);
    }

    #[test]
    fn k_star_prefers_smaller_k_on_ties() {
        let recs = vec![
            KRecord {
                k: 3,
                estimated_loss: 0.05,
                true_ber: None,
                wall_time_s: None,
            },
            KRecord {
                k: 1,
                estimated_loss: 0.05,
                true_ber: None,
                wall_time_s: None,
            },
            KRecord {
                k: 2,
                estimated_loss: 0.07,
                true_ber: None,
                wall_time_s: None,
            },
        ];
        let r = ExperimentReport::new("dude".into(), "x".into(), recs).unwrap();
        assert_eq!(r.k_star, 1);
        assert_eq!(
            r.records.iter().map(|r| r.k).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
    }

    #[test]
    fn single_k_sweep() {
        let t = bsc_tables();
        let z = binary(&[0, 1, 1, 0, 1, 0, 0, 0, 0, 1, 1, 1]);
        let out = sweep_k(&z, 1, &t, &LossMatrix::hamming(2), &Method::Dude, None).unwrap();
        assert_eq!(out.report.k_star, 1);
        assert_eq!(out.report.records.len(), 1);
        assert!(out.report.records[0].true_ber.is_none());
    }

    #[test]
    fn csv_roundtrip() {
        let recs = vec![
            KRecord {
                k: 1,
                estimated_loss: -0.0125,
                true_ber: Some(0.0561),
                wall_time_s: Some(1.5),
            },
            KRecord {
                k: 2,
                estimated_loss: 0.1 / 3.0,
                true_ber: None,
                wall_time_s: None,
            },
        ];
        let r = ExperimentReport::new("ndude arch=40-40-40".into(), "abcd".into(), recs).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf, &[("seed", "7".into())]).unwrap();
        let back = ExperimentReport::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, r);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("k,estimated_loss,true_ber,wall_time_s"));
    }
}
