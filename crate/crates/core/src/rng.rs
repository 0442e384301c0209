//! Seeded random streams.
//!
//! One master seed feeds three independent ChaCha streams so that changing the
//! policy never changes the arrivals, channel states or compressor draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Arrivals = 1,
    Channel = 2,
    Compression = 3,
}

pub fn stream(seed: u64, id: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    rng
}

#[derive(Debug, Clone)]
pub struct RngStreams {
    pub arrivals: ChaCha8Rng,
    pub channel: ChaCha8Rng,
    pub compression: ChaCha8Rng,
}

impl RngStreams {
    pub fn new(seed: u64) -> Self {
        RngStreams {
            arrivals: stream(seed, Stream::Arrivals),
            channel: stream(seed, Stream::Channel),
            compression: stream(seed, Stream::Compression),
        }
    }
}
