//! Gauss–Legendre rules.

use crate::scalar::Real;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = T::from_count(n);
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n
            let theta = T::PI() * (T::from_count(i) + T::lit(0.75)) / (nf + T::lit(0.5));
            let mut x = theta.cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= T::eps() {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != T::zero() {
                dp = d;
            }
            let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate(&self, a: T, b: T, mut f: impl FnMut(T) -> T) -> T {
        let half = T::lit(0.5) * (b - a);
        let mid = T::lit(0.5) * (a + b);
        let mut sum = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += *w * f(mid + half * *x);
        }
        sum * half
    }

    /// Tensor-product rule over the rectangle `[x0, x1] × [y0, y1]`.
    pub fn integrate_rect(&self, x0: T, x1: T, y0: T, y1: T, mut f: impl FnMut(T, T) -> T) -> T {
        let hx = T::lit(0.5) * (x1 - x0);
        let mx = T::lit(0.5) * (x0 + x1);
        let hy = T::lit(0.5) * (y1 - y0);
        let my = T::lit(0.5) * (y0 + y1);
        let mut sum = T::zero();
        for (xi, wi) in self.nodes.iter().zip(&self.weights) {
            let x = mx + hx * *xi;
            let mut row = T::zero();
            for (yj, wj) in self.nodes.iter().zip(&self.weights) {
                row += *wj * f(x, my + hy * *yj);
            }
            sum += *wi * row;
        }
        sum * hx * hy
    }
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_count(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_count(n);
    let dp = nf * (x * p1 - p0) / (x * x - T::one());
    if n == 0 {
        (T::one(), T::zero())
    } else {
        (p1, dp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in 1..=20 {
            let rule = GaussLegendre::<f64>::new(n);
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n}");
            // degree 2n-1 is exact
            let deg = 2 * n - 1;
            let got = rule.integrate(0.0, 1.0, |x| x.powi(deg as i32));
            assert!((got - 1.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn nodes_sorted_and_symmetric() {
        let rule = GaussLegendre::<f64>::new(7);
        for w in rule.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..7 {
            assert!((rule.nodes[i] + rule.nodes[6 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn smooth_integrand() {
        let rule = GaussLegendre::<f64>::new(16);
        let got = rule.integrate(0.0, std::f64::consts::PI, f64::sin);
        assert!((got - 2.0).abs() < 1e-14);
        let got = rule.integrate_rect(0.0, 1.0, 0.0, 2.0, |x, y| (x + y).exp());
        let exact = (1f64.exp() - 1.0) * (2f64.exp() - 1.0);
        assert!((got - exact).abs() < 1e-12);
    }
}
