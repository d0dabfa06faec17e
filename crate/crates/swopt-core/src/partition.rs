use crate::CoreError;

/// Guard for deciding whether two sample times are the same breakpoint.
/// Times are dyadic rationals wherever the algorithm produces them, so
/// equal times are usually bitwise equal; the guard absorbs the rest.
pub const TIME_EQ_TOL: f64 = 1e-12;

/// A finite nondecreasing sequence of sample times spanning [0, 1].
///
/// `level` witnesses the mesh bound: every interval is at most `2^-level`
/// long. Zero-length intervals are legal and are kept as-is, because the
/// modulation projection emits them whenever a mode receives no time in a
/// frame and downstream sample counts rely on that.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    samples: Vec<f64>,
    level: u32,
}

impl Partition {
    /// Validates endpoint, ordering, and mesh constraints, then wraps the
    /// sample vector.
    pub fn new(samples: Vec<f64>, level: u32) -> Result<Self, CoreError> {
        if samples.len() < 2 {
            return Err(CoreError::TooFewSamples);
        }
        for (index, &value) in samples.iter().enumerate() {
            if !value.is_finite() {
                return Err(CoreError::NonFiniteTime { index });
            }
        }
        let first = samples[0];
        let last = *samples.last().unwrap();
        if first != 0.0 || last != 1.0 {
            return Err(CoreError::BadEndpoints { first, last });
        }
        let mut mesh = 0.0f64;
        for index in 1..samples.len() {
            let value = samples[index];
            let previous = samples[index - 1];
            if value < previous {
                return Err(CoreError::NotNondecreasing {
                    index,
                    value,
                    previous,
                });
            }
            mesh = mesh.max(value - previous);
        }
        let bound = 0.5f64.powi(level as i32);
        if mesh > bound + TIME_EQ_TOL {
            return Err(CoreError::MeshTooCoarse { mesh, level });
        }
        Ok(Partition { samples, level })
    }

    /// Uniform partition with `intervals` equal cells, tagged with the
    /// largest level its mesh supports.
    pub fn uniform(intervals: usize) -> Result<Self, CoreError> {
        if intervals == 0 {
            return Err(CoreError::TooFewSamples);
        }
        let n = intervals as f64;
        let samples: Vec<f64> = (0..=intervals).map(|j| j as f64 / n).collect();
        let mut mesh = 0.0f64;
        for k in 1..samples.len() {
            mesh = mesh.max(samples[k] - samples[k - 1]);
        }
        let mut level = 0u32;
        while level < 52 && mesh <= 0.5f64.powi(level as i32 + 1) + TIME_EQ_TOL {
            level += 1;
        }
        Partition::new(samples, level)
    }

    /// Uniform dyadic partition with `2^level` cells. Every sample is an
    /// exact binary fraction.
    pub fn dyadic(level: u32) -> Self {
        let n = 1usize << level;
        let w = 0.5f64.powi(level as i32);
        let mut samples: Vec<f64> = (0..n).map(|j| j as f64 * w).collect();
        samples.push(1.0);
        Partition { samples, level }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn num_samples(&self) -> usize {
        self.samples.len()
    }

    pub fn num_intervals(&self) -> usize {
        self.samples.len() - 1
    }

    /// Length of interval `k`.
    pub fn delta(&self, k: usize) -> f64 {
        self.samples[k + 1] - self.samples[k]
    }

    /// Largest interval length.
    pub fn mesh(&self) -> f64 {
        (1..self.samples.len())
            .map(|k| self.samples[k] - self.samples[k - 1])
            .fold(0.0, f64::max)
    }

    /// Index of the interval holding `t`: the last interval whose left
    /// endpoint is ≤ `t`, clamped to the final interval. Skips past
    /// zero-length intervals, whose nodes coincide anyway.
    pub fn interval_containing(&self, t: f64) -> usize {
        let kmax = self.samples.len() - 2;
        let mut k = match self
            .samples
            .binary_search_by(|s| s.partial_cmp(&t).unwrap())
        {
            Ok(i) => i.min(kmax),
            Err(i) => i.saturating_sub(1).min(kmax),
        };
        while k < kmax && self.samples[k + 1] <= t {
            k += 1;
        }
        k
    }

    /// True when every sample of `self` appears in `other` within the
    /// exact-equality guard.
    pub fn is_refined_by(&self, other: &Partition) -> bool {
        self.missing_breakpoint_in(other).is_none()
    }

    pub(crate) fn missing_breakpoint_in(&self, other: &Partition) -> Option<f64> {
        let os = other.samples();
        let mut j = 0usize;
        for &s in &self.samples {
            while j < os.len() && os[j] < s - TIME_EQ_TOL {
                j += 1;
            }
            if j >= os.len() || (os[j] - s).abs() > TIME_EQ_TOL {
                return Some(s);
            }
        }
        None
    }

    /// Union of the two sample sets. `self`'s samples are kept verbatim,
    /// duplicates included; samples of `other` that fall within the guard
    /// of an already-placed one are dropped. The level is the larger of
    /// the two, which the union mesh always supports.
    pub fn merge(&self, other: &Partition) -> Partition {
        let a = &self.samples;
        let b = &other.samples;
        let mut out: Vec<f64> = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.len() || j < b.len() {
            let take_a = if i >= a.len() {
                false
            } else if j >= b.len() {
                true
            } else {
                a[i] <= b[j] + TIME_EQ_TOL
            };
            if take_a {
                out.push(a[i]);
                i += 1;
            } else {
                let t = b[j];
                if out.last().map_or(true, |&x| t - x > TIME_EQ_TOL) {
                    out.push(t);
                }
                j += 1;
            }
        }
        let merged = Partition {
            samples: out,
            level: self.level.max(other.level),
        };
        debug_assert!(Partition::new(merged.samples.clone(), merged.level).is_ok());
        merged
    }
}
