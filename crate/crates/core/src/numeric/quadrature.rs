use std::f64::consts::PI;

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Integrate over [a, b] with `panels` equal sub-intervals.
    pub fn composite<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64, panels: usize) -> f64 {
        let width = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let lo = a + width * p as f64;
            let mid = lo + 0.5 * width;
            let half = 0.5 * width;
            let mut s = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s += w * f(mid + half * x);
            }
            total += s * half;
        }
        total
    }

    /// Integrate over the union of the given consecutive breakpoints.
    pub fn over_breakpoints<F: FnMut(f64) -> f64>(&self, mut f: F, breaks: &[f64]) -> f64 {
        breaks
            .windows(2)
            .map(|w| self.composite(&mut f, w[0], w[1], 1))
            .sum()
    }
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 33] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_to_degree_2n_minus_1() {
        let g = GaussLegendre::new(8);
        // ∫_0^1 x^15 dx = 1/16
        let v = g.composite(|x| x.powi(15), 0.0, 1.0, 1);
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn composite_smooth() {
        let g = GaussLegendre::new(16);
        let v = g.composite(f64::sin, 0.0, PI, 4);
        assert!((v - 2.0).abs() < 1e-14);
    }
}
