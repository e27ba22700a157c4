use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const MODULUS_RANGE: (f64, f64) = (1e-3, 1e3);

/// Deterministic generator used for every sampled test point.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A point in the open upper half-plane: modulus log-uniform over
/// [`MODULUS_RANGE`], argument uniform over (0, π).
pub fn upper_half_plane_point<R: Rng>(rng: &mut R) -> Complex64 {
    let (lo, hi) = MODULUS_RANGE;
    let log_r = rng.gen_range(lo.ln()..hi.ln());
    let mut arg = rng.gen_range(0.0..std::f64::consts::PI);
    if arg == 0.0 {
        arg = f64::EPSILON;
    }
    Complex64::from_polar(log_r.exp(), arg)
}

pub fn upper_half_plane_points(seed: u64, count: usize) -> Vec<Complex64> {
    let mut r = rng(seed);
    (0..count).map(|_| upper_half_plane_point(&mut r)).collect()
}

/// Upper half-plane points together with their conjugates, interleaved.
pub fn off_axis_points(seed: u64, count: usize) -> Vec<Complex64> {
    upper_half_plane_points(seed, count.div_ceil(2))
        .into_iter()
        .flat_map(|z| [z, z.conj()])
        .take(count)
        .collect()
}
