//! Nelder–Mead downhill simplex.

/// Stopping rules for [`minimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Maximum number of objective evaluations.
    pub max_evals: usize,
    /// Relative spread of function values across the simplex.
    pub f_tol: f64,
    /// Absolute floor added to the spread test, for objectives that reach zero.
    pub f_abs: f64,
    /// Largest distance of any vertex from the best one.
    pub x_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_evals: 4000,
            f_tol: 1e-10,
            f_abs: 1e-300,
            x_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `f` starting from the simplex `x0, x0 + step_i e_i`.
/// Non-finite objective values are treated as `+∞`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], step: &[f64], opts: &SimplexOptions) -> SimplexResult {
    let n = x0.len();
    assert_eq!(step.len(), n);
    let evals = std::cell::Cell::new(0usize);
    let mut eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step[i];
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| eval(p)).collect();
    let mut iterations = 0;
    let mut converged = false;
    let mut order: Vec<usize> = (0..=n).collect();
    loop {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        let best = order[0];
        let worst = order[n];
        let second = order[n - 1];
        let spread = vals[worst] - vals[best];
        let f_ok = vals[best].is_finite() && spread <= opts.f_tol * vals[best].abs() + opts.f_abs;
        let diameter = pts
            .iter()
            .map(|p| p.iter().zip(&pts[best]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if f_ok && diameter <= opts.x_tol {
            converged = true;
            break;
        }
        if evals.get() >= opts.max_evals {
            break;
        }
        iterations += 1;
        let mut centroid = vec![0.0; n];
        for &i in &order[..n] {
            for (c, v) in centroid.iter_mut().zip(&pts[i]) {
                *c += v / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&pts[worst]).map(|(c, w)| c + t * (c - w)).collect() };
        let xr = along(1.0);
        let fr = eval(&xr);
        if fr < vals[best] {
            let xe = along(2.0);
            let fe = eval(&xe);
            if fe < fr {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if fr < vals[second] {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[worst] {
            let xc = along(0.5);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(-0.5);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < vals[worst].min(fr) {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        // shrink towards the best vertex
        let keep = pts[best].clone();
        for &i in &order[1..] {
            for (p, b) in pts[i].iter_mut().zip(&keep) {
                *p = b + 0.5 * (*p - b);
            }
            vals[i] = eval(&pts[i]);
        }
    }
    let best = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    SimplexResult {
        x: pts[best].clone(),
        f: vals[best],
        evaluations: evals.get(),
        iterations,
        converged,
    }
}
