//! Deterministic seed splitting.
//!
//! Every random stream in the crate is derived from one user seed through
//! [`derive_seed`], so a `(seed, stream, index)` triple always names the
//! same draws no matter how work is scheduled across threads.

/// Stream tags for [`derive_seed`].
pub mod stream {
    pub const SAMPLE_A: u64 = 1;
    pub const SAMPLE_B: u64 = 2;
    pub const CONJUGATION: u64 = 3;
    pub const REACH: u64 = 4;
    pub const TARGET: u64 = 5;
    pub const VERIFY: u64 = 6;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for item `index` of stream `stream` under `seed`.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index)
}
