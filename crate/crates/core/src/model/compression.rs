use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TABLE_TOL: f64 = 1e-9;

/// How a per-slot quantity is spread around its conditional mean.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Noise {
    #[default]
    Deterministic,
    /// Uniform on `[mean * (1 - half_width), mean * (1 + half_width)]`.
    UniformAroundMean { half_width: f64 },
}

impl Noise {
    fn half_width(self) -> f64 {
        match self {
            Noise::Deterministic => 0.0,
            Noise::UniformAroundMean { half_width } => half_width,
        }
    }

    /// Maps a uniform draw `u` in `[0, 1)` onto the distribution.
    fn apply(self, mean: f64, u: f64) -> f64 {
        match self {
            Noise::Deterministic => mean,
            Noise::UniformAroundMean { half_width } => mean * (1.0 + half_width * (2.0 * u - 1.0)),
        }
    }

    /// Second moment of the distribution around `mean`.
    fn second_moment(self, mean: f64) -> f64 {
        let h = self.half_width();
        mean * mean * (1.0 + h * h / 3.0)
    }

    fn is_deterministic(self) -> bool {
        self.half_width() == 0.0
    }
}

/// Conditional statistics of compressing `a` packets with option `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    /// `m(a, k)`, bits.
    pub mean_output: f64,
    /// `phi(a, k)`, power units.
    pub mean_power: f64,
    /// `d(a, k)`, distortion units.
    #[serde(default)]
    pub mean_distortion: f64,
    #[serde(default)]
    pub output_noise: Noise,
    #[serde(default)]
    pub power_noise: Noise,
    #[serde(default)]
    pub distortion_noise: Noise,
}

impl TableEntry {
    pub fn deterministic(mean_output: f64, mean_power: f64, mean_distortion: f64) -> Self {
        TableEntry {
            mean_output,
            mean_power,
            mean_distortion,
            output_noise: Noise::Deterministic,
            power_noise: Noise::Deterministic,
            distortion_noise: Noise::Deterministic,
        }
    }

    fn zero() -> Self {
        TableEntry::deterministic(0.0, 0.0, 0.0)
    }
}

/// One slot's compressor outcome `(R, P_comp, D)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionOutcome {
    pub output: f64,
    pub power: f64,
    pub distortion: f64,
}

/// The `(a, k)` table of compressor statistics, with rows `a = 0..=N` and
/// columns `k = 0..=K`. Option 0 never compresses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct CompressionTable {
    packet_bits: f64,
    entries: Vec<Vec<TableEntry>>,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    packet_bits: f64,
    entries: Vec<Vec<TableEntry>>,
}

impl TryFrom<TableRepr> for CompressionTable {
    type Error = Error;

    fn try_from(repr: TableRepr) -> Result<Self> {
        CompressionTable::new(repr.packet_bits, repr.entries)
    }
}

impl From<CompressionTable> for TableRepr {
    fn from(table: CompressionTable) -> Self {
        TableRepr {
            packet_bits: table.packet_bits,
            entries: table.entries,
        }
    }
}

impl CompressionTable {
    pub fn new(packet_bits: f64, entries: Vec<Vec<TableEntry>>) -> Result<Self> {
        let bad = |reason: String| Err(Error::invalid("compression table", reason));
        if !(packet_bits.is_finite() && packet_bits > 0.0) {
            return bad("packet size must be positive".into());
        }
        if entries.len() < 2 {
            return bad("rows for a = 0..=N with N >= 1 are required".into());
        }
        let width = entries[0].len();
        if width == 0 || entries.iter().any(|row| row.len() != width) {
            return bad("every row needs the same nonzero number of options".into());
        }
        for (a, row) in entries.iter().enumerate() {
            let raw = a as f64 * packet_bits;
            for (k, e) in row.iter().enumerate() {
                let means = [e.mean_output, e.mean_power, e.mean_distortion];
                if means.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return bad(format!("({a}, {k}): means must be finite and nonnegative"));
                }
                for noise in [e.output_noise, e.power_noise, e.distortion_noise] {
                    let h = noise.half_width();
                    if !(0.0..=1.0).contains(&h) {
                        return bad(format!("({a}, {k}): half width must lie in [0, 1]"));
                    }
                }
                let max_output = e.mean_output * (1.0 + e.output_noise.half_width());
                if max_output > raw * (1.0 + TABLE_TOL) {
                    return bad(format!(
                        "({a}, {k}): output can reach {max_output} bits, more than the raw {raw}"
                    ));
                }
                if a == 0 && means.iter().any(|v| *v != 0.0) {
                    return bad(format!("(0, {k}): nothing to compress, all means must be 0"));
                }
                if k == 0 {
                    let exact = (e.mean_output - raw).abs() <= raw * TABLE_TOL
                        && e.output_noise.is_deterministic();
                    if !exact || e.mean_power != 0.0 || e.mean_distortion != 0.0 {
                        return bad(format!(
                            "({a}, 0): option 0 must pass a*b bits through at zero power"
                        ));
                    }
                }
            }
        }
        Ok(CompressionTable {
            packet_bits,
            entries,
        })
    }

    /// Builds a table with `options` compression options besides option 0.
    /// `entry(a, k)` is consulted for `a >= 1, k >= 1` only; the `a = 0` row and
    /// the `k = 0` column are filled in.
    pub fn from_fn(
        max_packets: usize,
        options: usize,
        packet_bits: f64,
        mut entry: impl FnMut(usize, usize) -> TableEntry,
    ) -> Result<Self> {
        let entries = (0..=max_packets)
            .map(|a| {
                (0..=options)
                    .map(|k| match (a, k) {
                        (0, _) => TableEntry::zero(),
                        (_, 0) => TableEntry::deterministic(a as f64 * packet_bits, 0.0, 0.0),
                        _ => entry(a, k),
                    })
                    .collect()
            })
            .collect();
        CompressionTable::new(packet_bits, entries)
    }

    /// Only option 0.
    pub fn uncompressed(max_packets: usize, packet_bits: f64) -> Result<Self> {
        CompressionTable::from_fn(max_packets, 0, packet_bits, |_, _| unreachable!())
    }

    /// Same compression ratios for a different packet size.
    pub fn rescaled(&self, packet_bits: f64) -> Result<Self> {
        let scale = packet_bits / self.packet_bits;
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(a, row)| {
                row.iter()
                    .enumerate()
                    .map(|(k, e)| TableEntry {
                        mean_output: if k == 0 {
                            a as f64 * packet_bits
                        } else {
                            e.mean_output * scale
                        },
                        ..*e
                    })
                    .collect()
            })
            .collect();
        CompressionTable::new(packet_bits, entries)
    }

    pub fn packet_bits(&self) -> f64 {
        self.packet_bits
    }

    pub fn max_packets(&self) -> usize {
        self.entries.len() - 1
    }

    /// `K + 1`, the number of options including option 0.
    pub fn option_count(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entry(&self, a: usize, k: usize) -> Result<&TableEntry> {
        self.entries
            .get(a)
            .and_then(|row| row.get(k))
            .ok_or_else(|| Error::domain(format!("no table entry for a = {a}, k = {k}")))
    }

    /// The row for `a` arrivals. Panics if `a > N`.
    pub fn row(&self, a: usize) -> &[TableEntry] {
        &self.entries[a]
    }

    pub fn mean_output(&self, a: usize, k: usize) -> f64 {
        self.entries[a][k].mean_output
    }

    pub fn mean_power(&self, a: usize, k: usize) -> f64 {
        self.entries[a][k].mean_power
    }

    pub fn mean_distortion(&self, a: usize, k: usize) -> f64 {
        self.entries[a][k].mean_distortion
    }

    /// True when no option ever introduces distortion.
    pub fn is_lossless(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.mean_distortion == 0.0)
    }

    /// `delta^2`: largest conditional second moment of the distortion over
    /// `a >= 1` and all options.
    pub fn distortion_second_moment_max(&self) -> f64 {
        self.entries
            .iter()
            .skip(1)
            .flatten()
            .map(|e| e.distortion_noise.second_moment(e.mean_distortion))
            .fold(0.0, f64::max)
    }

    /// Draws `(R, P_comp, D)` for `a` arrivals under option `k`.
    pub fn sample<R: Rng + ?Sized>(&self, a: usize, k: usize, rng: &mut R) -> Result<CompressionOutcome> {
        self.entry(a, k)?;
        Ok(self.sample_unchecked(a, k, rng))
    }

    /// Like [`sample`](Self::sample) without index checks. Always consumes three
    /// uniforms so the stream stays aligned whichever option is chosen.
    pub fn sample_unchecked<R: Rng + ?Sized>(&self, a: usize, k: usize, rng: &mut R) -> CompressionOutcome {
        let e = &self.entries[a][k];
        let (u_out, u_pow, u_dist): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
        let raw = a as f64 * self.packet_bits;
        CompressionOutcome {
            output: e.output_noise.apply(e.mean_output, u_out).min(raw),
            power: e.power_noise.apply(e.mean_power, u_pow),
            distortion: e.distortion_noise.apply(e.mean_distortion, u_dist),
        }
    }
}
