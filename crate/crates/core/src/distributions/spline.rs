//! Natural cubic spline on a uniform grid.

#[derive(Debug, Clone)]
pub(crate) struct UniformSpline {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl UniformSpline {
    /// Interpolates `y[i]` at `x0 + i h`; needs at least two nodes.
    pub(crate) fn new(x0: f64, h: f64, y: Vec<f64>) -> Self {
        let n = y.len();
        assert!(n >= 2 && h > 0.0);
        let mut m = vec![0.0; n];
        if n > 2 {
            // tridiagonal system 1 4 1 for interior second derivatives (Thomas algorithm)
            let k = n - 2;
            let mut c = vec![0.0; k];
            let mut d = vec![0.0; k];
            let scale = 6.0 / (h * h);
            for i in 0..k {
                let rhs = scale * (y[i] - 2.0 * y[i + 1] + y[i + 2]);
                if i == 0 {
                    c[i] = 0.25;
                    d[i] = rhs / 4.0;
                } else {
                    let den = 4.0 - c[i - 1];
                    c[i] = 1.0 / den;
                    d[i] = (rhs - d[i - 1]) / den;
                }
            }
            m[k] = d[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = d[i] - c[i] * m[i + 2];
            }
        }
        Self { x0, h, y, m }
    }

    pub(crate) fn lo(&self) -> f64 {
        self.x0
    }

    pub(crate) fn hi(&self) -> f64 {
        self.x0 + self.h * (self.y.len() - 1) as f64
    }

    /// Value at `x`, clamped to the grid.
    pub(crate) fn eval(&self, x: f64) -> f64 {
        let n = self.y.len();
        let t = ((x - self.x0) / self.h).clamp(0.0, (n - 1) as f64);
        let i = (t.floor() as usize).min(n - 2);
        let b = t - i as f64;
        let a = 1.0 - b;
        let h2 = self.h * self.h / 6.0;
        a * self.y[i] + b * self.y[i + 1] + h2 * ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_lines() {
        let y: Vec<f64> = (0..11).map(|i| 2.0 + 0.5 * i as f64).collect();
        let s = UniformSpline::new(-1.0, 0.2, y);
        assert!((s.eval(-1.0) - 2.0).abs() < 1e-14);
        assert!((s.eval(-0.37) - (2.0 + 0.5 * 0.63 / 0.2)).abs() < 1e-12);
        assert_eq!(s.hi(), -1.0 + 0.2 * 10.0);
    }

    #[test]
    fn smooth_function_accuracy() {
        let h = 0.05;
        let y: Vec<f64> = (0..=200).map(|i| (i as f64 * h).sin()).collect();
        let s = UniformSpline::new(0.0, h, y);
        for k in 0..100 {
            let x = 0.5 + 0.0813 * k as f64;
            if x > 9.5 {
                break;
            }
            assert!((s.eval(x) - x.sin()).abs() < 1e-6, "x={x}");
        }
    }
}
