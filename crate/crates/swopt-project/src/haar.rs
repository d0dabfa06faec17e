use crate::ProjectError;

/// A scalar piecewise-constant function on [0, 1]: `values[k]` on the
/// right-open interval `[times[k], times[k+1])`.
#[derive(Debug, Clone)]
pub struct StepSignal {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl StepSignal {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self, ProjectError> {
        if times.len() != values.len() + 1 || values.is_empty() {
            return Err(ProjectError::BadSignal {
                times: times.len(),
                values: values.len(),
            });
        }
        if times[0] != 0.0 {
            return Err(ProjectError::BadSignalTime {
                index: 0,
                value: times[0],
            });
        }
        if *times.last().unwrap() != 1.0 {
            return Err(ProjectError::BadSignalTime {
                index: times.len() - 1,
                value: *times.last().unwrap(),
            });
        }
        for i in 1..times.len() {
            if !(times[i] >= times[i - 1]) {
                return Err(ProjectError::BadSignalTime {
                    index: i,
                    value: times[i],
                });
            }
        }
        Ok(StepSignal { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value of the right-open step function at `t`.
    pub fn value_at(&self, t: f64) -> f64 {
        let kmax = self.times.len() - 2;
        let mut k = match self
            .times
            .binary_search_by(|s| s.partial_cmp(&t).unwrap())
        {
            Ok(i) => i.min(kmax),
            Err(i) => i.saturating_sub(1).min(kmax),
        };
        while k < kmax && self.times[k + 1] <= t {
            k += 1;
        }
        self.values[k]
    }

    /// Total variation: sum of |jumps| between consecutive intervals of
    /// positive length.
    pub fn bv(&self) -> f64 {
        let mut total = 0.0;
        let mut prev: Option<f64> = None;
        for k in 0..self.values.len() {
            if self.times[k + 1] <= self.times[k] {
                continue;
            }
            if let Some(p) = prev {
                total += (self.values[k] - p).abs();
            }
            prev = Some(self.values[k]);
        }
        total
    }
}

/// A function constant on the 2^level dyadic cells of [0, 1].
#[derive(Debug, Clone)]
pub struct DyadicSignal {
    level: u32,
    values: Vec<f64>,
}

impl DyadicSignal {
    pub fn new(level: u32, values: Vec<f64>) -> Result<Self, ProjectError> {
        if values.len() != (1usize << level) {
            return Err(ProjectError::BadSignal {
                times: 1 << level,
                values: values.len(),
            });
        }
        Ok(DyadicSignal { level, values })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, t: f64) -> f64 {
        let idx = (t * (1u64 << self.level) as f64).floor() as usize;
        self.values[idx.min(self.values.len() - 1)]
    }

    pub fn to_step_signal(&self) -> StepSignal {
        let w = 0.5f64.powi(self.level as i32);
        let mut times: Vec<f64> = (0..self.values.len()).map(|j| j as f64 * w).collect();
        times.push(1.0);
        StepSignal {
            times,
            values: self.values.clone(),
        }
    }
}

/// Exact integrals of the signal over each dyadic cell at `level`,
/// accumulated interval-by-interval on the common refinement of the
/// signal's breakpoints and the dyadic grid.
fn cell_integrals(signal: &StepSignal, level: u32) -> Vec<f64> {
    let cells = 1usize << level;
    let w = 0.5f64.powi(level as i32);
    let times = signal.times();
    let values = signal.values();
    let mut out = vec![0.0; cells];
    let mut seg = 0usize;
    for (c, slot) in out.iter_mut().enumerate() {
        let a = c as f64 * w;
        let b = (c as f64 + 1.0) * w;
        while seg + 1 < values.len() && times[seg + 1] <= a {
            seg += 1;
        }
        let mut acc = 0.0;
        let mut s = seg;
        loop {
            let lo = times[s].max(a);
            let hi = times[s + 1].min(b);
            if hi > lo {
                acc += values[s] * (hi - lo);
            }
            if times[s + 1] >= b || s + 1 >= values.len() {
                break;
            }
            s += 1;
        }
        *slot = acc;
    }
    out
}

/// Haar partial sum F_N: ⟨c, 𝟙⟩ + Σ_{k=0}^{N} Σ_j ⟨c, b_kj⟩ b_kj / ‖b_kj‖²
/// with b_kj(t) = λ(2^k t − j), evaluated with exact interval arithmetic
/// on the common refinement of the signal's breakpoints and the dyadic
/// grid. The result is constant on cells of width 2^-(N+1).
///
/// ⟨c, 𝟙⟩ carries no normalizer because ‖𝟙‖² = 1 on the unit horizon.
pub fn haar_partial_sum(signal: &StepSignal, n: u32) -> DyadicSignal {
    let out_level = n + 1;
    let integrals = cell_integrals(signal, out_level);
    let total: f64 = integrals.iter().sum();
    let mut out = vec![total; integrals.len()];
    for k in 0..=n {
        let half = 1usize << (out_level - k - 1);
        let scale = (1u64 << k) as f64;
        for j in 0..(1usize << k) {
            let start = j * half * 2;
            let mid = start + half;
            let end = mid + half;
            let mut coeff = 0.0;
            for c in start..mid {
                coeff += integrals[c];
            }
            for c in mid..end {
                coeff -= integrals[c];
            }
            let add = coeff * scale;
            for slot in &mut out[start..mid] {
                *slot += add;
            }
            for slot in &mut out[mid..end] {
                *slot -= add;
            }
        }
    }
    DyadicSignal {
        level: out_level,
        values: out,
    }
}

/// Exact L² distance between two step signals, integrated cell-by-cell on
/// the union of their breakpoints.
pub fn l2_distance(a: &StepSignal, b: &StepSignal) -> f64 {
    let mut ts: Vec<f64> = a.times().iter().chain(b.times().iter()).copied().collect();
    ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut acc = 0.0;
    for w in ts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let mid = 0.5 * (w[0] + w[1]);
        let diff = a.value_at(mid) - b.value_at(mid);
        acc += diff * diff * (w[1] - w[0]);
    }
    acc.sqrt()
}
