//! Small numeric helpers shared across modules: exact binomial coefficients,
//! compensated summation, and Gauss-Legendre quadrature nodes.

/// Exact binomial coefficient `C(n, k)` computed in integer arithmetic.
///
/// The intermediate product `comb * (n - j)` is kept exactly divisible by
/// `j + 1`, so no rounding occurs. Panics on overflow, which cannot happen
/// for the mask widths this crate accepts (`n <= 64` stays far below
/// `u128::MAX` for the widths used here, and callers guard `n <= 30`).
pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut comb: u128 = 1;
    for j in 0..k as u128 {
        comb = comb * (n as u128 - j) / (j + 1);
    }
    u64::try_from(comb).expect("binomial overflow")
}

/// Neumaier-compensated accumulator. Used where test tolerances sit close to
/// the error floor of plain f64 summation over a few thousand terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
///
/// Nodes are the roots of the Legendre polynomial `P_n`, found by Newton
/// iteration from the usual Chebyshev-like initial guesses; an `n`-point rule
/// integrates polynomials up to degree `2n - 1` exactly.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        // Map from [-1, 1] to [0, 1].
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(9, 0), 1);
        assert_eq!(binomial(9, 9), 1);
        assert_eq!(binomial(20, 10), 184_756);
        assert_eq!(binomial(30, 15), 155_117_520);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn binomial_pascal_identity() {
        for n in 1..=30u32 {
            for k in 1..n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn kahan_handles_scale_mismatch() {
        let mut s = KahanSum::new();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-17);
        }
        assert_eq!(s.value(), 1.0 + 1e-16);
    }

    #[test]
    fn quadrature_integrates_polynomials_exactly() {
        // An n-node rule is exact through degree 2n-1; check moments of x^d
        // against 1/(d+1).
        for n in 1..=16usize {
            let (xs, ws) = gauss_legendre_unit(n);
            assert_eq!(xs.len(), n);
            for d in 0..(2 * n) {
                let approx: f64 = xs
                    .iter()
                    .zip(&ws)
                    .map(|(&x, &w)| w * x.powi(d as i32))
                    .sum();
                let exact = 1.0 / (d as f64 + 1.0);
                assert!(
                    (approx - exact).abs() < 1e-13,
                    "n={n} d={d}: {approx} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn quadrature_nodes_sorted_inside_unit_interval() {
        let (xs, ws) = gauss_legendre_unit(7);
        for pair in xs.windows(2) {
            assert!(pair[0] < pair[1]);
        }
        assert!(xs.iter().all(|&x| x > 0.0 && x < 1.0));
        let total: f64 = ws.iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
    }
}
