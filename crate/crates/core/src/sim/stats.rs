//! Running statistics for long horizons.

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Mean of a per-slot series plus a batch-means standard error, which stays
/// honest when consecutive slots are correlated.
#[derive(Debug, Clone)]
pub struct SeriesStats {
    total: CompensatedSum,
    count: u64,
    batch_len: u64,
    batch: CompensatedSum,
    in_batch: u64,
    batch_means: Vec<f64>,
}

/// Number of batches the horizon is split into for the standard error.
pub const BATCHES: u64 = 100;

impl SeriesStats {
    pub fn new(horizon: u64) -> Self {
        SeriesStats {
            total: CompensatedSum::default(),
            count: 0,
            batch_len: (horizon / BATCHES).max(1),
            batch: CompensatedSum::default(),
            in_batch: 0,
            batch_means: Vec::with_capacity(BATCHES as usize + 1),
        }
    }

    pub fn push(&mut self, x: f64) {
        self.total.add(x);
        self.count += 1;
        self.batch.add(x);
        self.in_batch += 1;
        if self.in_batch == self.batch_len {
            self.batch_means.push(self.batch.total() / self.batch_len as f64);
            self.batch = CompensatedSum::default();
            self.in_batch = 0;
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.total.total() / self.count as f64
        }
    }

    /// Standard error of the mean from complete batches; zero with fewer than two.
    pub fn sem(&self) -> f64 {
        let n = self.batch_means.len();
        if n < 2 {
            return 0.0;
        }
        let mean = self.batch_means.iter().sum::<f64>() / n as f64;
        let var = self
            .batch_means
            .iter()
            .map(|m| (m - mean).powi(2))
            .sum::<f64>()
            / (n - 1) as f64;
        (var / n as f64).sqrt()
    }
}
