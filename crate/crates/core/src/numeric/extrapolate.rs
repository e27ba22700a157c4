//! Polynomial (Richardson) extrapolation to zero step.

/// Result of a Neville-tableau extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    pub error: f64,
}

/// Extrapolate samples `(h_i, y_i)` to `h = 0` with polynomials in `h`.
///
/// The `h_i` must be distinct. Every tableau entry of order up to `max_order`
/// is considered and the one with the smallest error estimate is returned
/// (Ridders' rule: the error estimate is the larger of the distances to the
/// two parent entries).
pub fn richardson(h: &[f64], y: &[f64], max_order: usize) -> Option<Extrapolated> {
    assert_eq!(h.len(), y.len());
    let n = h.len();
    if n == 0 {
        return None;
    }
    let mut prev: Vec<f64> = y.to_vec();
    let mut best = Extrapolated {
        value: y[n - 1],
        error: f64::INFINITY,
    };
    if n >= 2 {
        best.error = (y[n - 1] - y[n - 2]).abs();
    }
    for k in 1..=max_order.min(n - 1) {
        let mut cur = vec![0.0; n];
        for i in k..n {
            // Neville: extrapolate to 0 from the points i-k..=i
            let hi = h[i];
            let hl = h[i - k];
            cur[i] = (hl * prev[i] - hi * prev[i - 1]) / (hl - hi);
            let err = (cur[i] - prev[i]).abs().max((cur[i] - prev[i - 1]).abs());
            if err.is_finite() && err < best.error {
                best = Extrapolated {
                    value: cur[i],
                    error: err,
                };
            }
        }
        prev = cur;
    }
    best.value.is_finite().then_some(best)
}
