use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for trial `stream` of an experiment seeded with `seed`.
///
/// ChaCha8 keyed by `seed` (expanded by `seed_from_u64`) with the trial index
/// as its 64-bit stream id, so trial `i` draws the same numbers no matter
/// which worker runs it or in what order.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
