//! Nesterov-accelerated adaptive moment estimation on a flat real vector.

#[derive(Debug, Clone)]
pub(crate) struct Nadam {
    beta1: f64,
    beta2: f64,
    eps: f64,
    momentum_decay: f64,
    mu_product: f64,
    step: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl Nadam {
    pub fn new(len: usize) -> Self {
        Nadam { beta1: 0.9, beta2: 0.999, eps: 1e-8, momentum_decay: 0.004, mu_product: 1.0, step: 0, m: vec![0.0; len], v: vec![0.0; len] }
    }

    fn mu(&self, t: u64) -> f64 {
        self.beta1 * (1.0 - 0.5 * 0.96f64.powf(t as f64 * self.momentum_decay))
    }

    pub fn update(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        self.step += 1;
        let t = self.step;
        let mu = self.mu(t);
        let mu_next = self.mu(t + 1);
        self.mu_product *= mu;
        let bias2 = 1.0 - self.beta2.powf(t as f64);
        let c_grad = lr * (1.0 - mu) / (1.0 - self.mu_product);
        let c_mom = lr * mu_next / (1.0 - self.mu_product * mu_next);
        for i in 0..params.len() {
            let g = grad[i];
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
            let denom = (self.v[i] / bias2).sqrt() + self.eps;
            params[i] -= (c_grad * g + c_mom * self.m[i]) / denom;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_matches_hand_computation() {
        let mut opt = Nadam::new(1);
        let mut p = [1.0];
        opt.update(&mut p, &[0.5], 0.1);
        let mu1 = 0.9 * (1.0 - 0.5 * 0.96f64.powf(0.004));
        let mu2 = 0.9 * (1.0 - 0.5 * 0.96f64.powf(0.008));
        let m = 0.05;
        let denom = (0.001 * 0.25 / 0.001f64).sqrt() + 1e-8;
        let expected = 1.0 - 0.1 * (1.0 - mu1) / (1.0 - mu1) * 0.5 / denom - 0.1 * mu2 / (1.0 - mu1 * mu2) * m / denom;
        assert!((p[0] - expected).abs() < 1e-15);
    }

    #[test]
    fn minimizes_a_quadratic() {
        let mut opt = Nadam::new(2);
        let mut p = [3.0, -2.0];
        for _ in 0..3000 {
            let g = [2.0 * (p[0] - 1.0), 8.0 * (p[1] + 0.5)];
            opt.update(&mut p, &g, 0.01);
        }
        assert!((p[0] - 1.0).abs() < 1e-3 && (p[1] + 0.5).abs() < 1e-3);
    }

    #[test]
    fn zero_gradient_is_a_fixed_point() {
        let mut opt = Nadam::new(3);
        let mut p = [1.0, 2.0, 3.0];
        opt.update(&mut p, &[0.0; 3], 1.0);
        assert_eq!(p, [1.0, 2.0, 3.0]);
    }
}
