//! Small Nelder-Mead simplex minimizer for the 3-dimensional measurement
//! setting search. Standard reflection/expansion/contraction/shrink
//! coefficients, with a hard evaluation budget.

use crate::error::{Error, Result};

pub struct NelderMead {
    pub fatol: f64,
    pub xatol: f64,
    pub max_evals: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            fatol: 1e-10,
            xatol: 1e-9,
            max_evals: 10_000,
        }
    }
}

impl NelderMead {
    /// Minimizes `f` starting from `x0` with per-coordinate initial steps
    /// `scale`. Returns (argmin, min).
    pub fn minimize<F>(&self, f: F, x0: &[f64], scale: &[f64]) -> Result<(Vec<f64>, f64)>
    where
        F: Fn(&[f64]) -> f64,
    {
        let n = x0.len();
        assert_eq!(scale.len(), n);
        let evals = std::cell::Cell::new(0usize);
        let eval = |x: &[f64]| -> f64 {
            evals.set(evals.get() + 1);
            f(x)
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), eval(x0)));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += scale[i];
            let fx = eval(&x);
            simplex.push((x, fx));
        }

        let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let fspread = simplex[n].1 - simplex[0].1;
            let xspread = (0..n)
                .map(|i| {
                    simplex
                        .iter()
                        .map(|(x, _)| (x[i] - simplex[0].0[i]).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if fspread.abs() <= self.fatol && xspread <= self.xatol {
                let (x, fx) = simplex.swap_remove(0);
                return Ok((x, fx));
            }
            if evals.get() >= self.max_evals {
                return Err(Error::Optimization(format!(
                    "simplex did not converge within {} evaluations (f spread {:.3e})",
                    self.max_evals, fspread
                )));
            }

            let centroid: Vec<f64> = (0..n)
                .map(|i| simplex[..n].iter().map(|(x, _)| x[i]).sum::<f64>() / n as f64)
                .collect();
            let worst = simplex[n].clone();
            let refl: Vec<f64> = (0..n)
                .map(|i| centroid[i] + alpha * (centroid[i] - worst.0[i]))
                .collect();
            let frefl = eval(&refl);

            if frefl < simplex[0].1 {
                let exp: Vec<f64> = (0..n)
                    .map(|i| centroid[i] + gamma * (refl[i] - centroid[i]))
                    .collect();
                let fexp = eval(&exp);
                simplex[n] = if fexp < frefl { (exp, fexp) } else { (refl, frefl) };
            } else if frefl < simplex[n - 1].1 {
                simplex[n] = (refl, frefl);
            } else {
                let contr: Vec<f64> = (0..n)
                    .map(|i| centroid[i] + rho * (worst.0[i] - centroid[i]))
                    .collect();
                let fcontr = eval(&contr);
                if fcontr < worst.1 {
                    simplex[n] = (contr, fcontr);
                } else {
                    let best = simplex[0].0.clone();
                    for entry in simplex.iter_mut().skip(1) {
                        let x: Vec<f64> = (0..n)
                            .map(|i| best[i] + sigma * (entry.0[i] - best[i]))
                            .collect();
                        let fx = eval(&x);
                        *entry = (x, fx);
                    }
                }
            }
        }
    }
}
