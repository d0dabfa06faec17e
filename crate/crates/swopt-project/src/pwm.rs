use nalgebra::DVector;
use swopt_core::Partition;

use crate::ProjectError;

/// Relaxed mode weights constant on the 2^level dyadic cells of [0, 1],
/// one simplex row per cell.
#[derive(Debug, Clone)]
pub struct DyadicWeights {
    level: u32,
    rows: Vec<DVector<f64>>,
}

impl DyadicWeights {
    pub fn new(level: u32, rows: Vec<DVector<f64>>) -> Result<Self, ProjectError> {
        if rows.len() != (1usize << level) || rows.is_empty() {
            return Err(ProjectError::BadSignal {
                times: 1 << level,
                values: rows.len(),
            });
        }
        let q = rows[0].len();
        if q == 0 || rows.iter().any(|r| r.len() != q) {
            return Err(ProjectError::BadSignal {
                times: 1 << level,
                values: rows.len(),
            });
        }
        Ok(DyadicWeights { level, rows })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn rows(&self) -> &[DVector<f64>] {
        &self.rows
    }

    pub fn mode_count(&self) -> usize {
        self.rows[0].len()
    }

    pub fn row_at(&self, t: f64) -> &DVector<f64> {
        let idx = (t * (1u64 << self.level) as f64).floor() as usize;
        &self.rows[idx.min(self.rows.len() - 1)]
    }
}

/// Pulse-width modulation P_N. Each frame [k 2^-N, (k+1) 2^-N) is split
/// among the modes in index order, giving mode i the sub-interval
/// [(k + P_{i-1}) 2^-N, (k + P_i) 2^-N) where P_0 = 0 and P_i advances by
/// the frame's weight for mode i, clamped to [P_{i-1}, 1]. The last
/// cumulative point is pinned to 1 so consecutive frames tile exactly.
///
/// Zero-length sub-intervals are retained, so the returned partition has
/// exactly 1 + q·2^N samples and the rows align interval-for-interval:
/// row k·q + i is the unit vector for mode i within frame k.
pub fn pwm(weights: &DyadicWeights, n: u32) -> Result<(Vec<DVector<f64>>, Partition), ProjectError> {
    if weights.level < n {
        return Err(ProjectError::FrameTooFine {
            frame_level: n,
            weights_level: weights.level,
        });
    }
    let q = weights.mode_count();
    let frames = 1usize << n;
    let stride = 1usize << (weights.level - n);
    let w = 0.5f64.powi(n as i32);
    let mut samples = Vec::with_capacity(1 + q * frames);
    samples.push(0.0);
    let mut d_rows = Vec::with_capacity(q * frames);
    for k in 0..frames {
        let d = &weights.rows[k * stride];
        let mut p_prev = 0.0f64;
        for i in 0..q {
            let mut p = p_prev + d[i];
            if p > 1.0 {
                p = 1.0;
            }
            if p < p_prev {
                p = p_prev;
            }
            if i == q - 1 {
                p = 1.0;
            }
            samples.push((k as f64 + p) * w);
            let mut row = DVector::zeros(q);
            row[i] = 1.0;
            d_rows.push(row);
            p_prev = p;
        }
    }
    let partition = Partition::new(samples, n)?;
    Ok((d_rows, partition))
}
