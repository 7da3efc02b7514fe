//! Bounded derivative-free maximization: a coarse grid scan followed by a
//! Nelder-Mead refinement seeded at the best grid point.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Maximum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub grid_best: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Grid points per axis (at least 2).
    pub grid: usize,
    /// Stop when the simplex values span less than this (absolute).
    pub f_tol: f64,
    /// Stop when the simplex extent, in units of the box, is below this.
    pub x_tol: f64,
    pub max_evaluations: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            grid: 21,
            f_tol: 1e-12,
            x_tol: 1e-10,
            max_evaluations: 5000,
        }
    }
}

/// Maximize `f` over the box `bounds`. `f` returns `None` where the model is
/// unstable or undefined; such points never win.
pub fn maximize<F>(f: F, bounds: &[(f64, f64)], opts: &SearchOptions) -> Result<Maximum>
where
    F: Fn(&[f64]) -> Option<f64>,
{
    let dim = bounds.len();
    if dim == 0 || dim > 3 {
        return Err(Error::InvalidParams(format!("1 to 3 free parameters required, got {dim}")));
    }
    for &(lo, hi) in bounds {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParams(format!("bounds must be finite with lo < hi, got [{lo}, {hi}]")));
        }
    }
    if opts.grid < 2 {
        return Err(Error::InvalidParams("grid needs at least 2 points per axis".into()));
    }
    let to_x = |u: &[f64]| -> Vec<f64> {
        u.iter()
            .zip(bounds)
            .map(|(&t, &(lo, hi))| lo + t.clamp(0.0, 1.0) * (hi - lo))
            .collect()
    };
    let evaluations = std::cell::Cell::new(0usize);
    let eval = |u: &[f64]| -> f64 {
        evaluations.set(evaluations.get() + 1);
        match f(&to_x(u)) {
            Some(v) if v.is_finite() => v,
            _ => f64::NEG_INFINITY,
        }
    };

    let n = opts.grid;
    let total = n.pow(dim as u32);
    let mut best_u = vec![0.0; dim];
    let mut best_v = f64::NEG_INFINITY;
    for idx in 0..total {
        let mut rest = idx;
        let u: Vec<f64> = (0..dim)
            .map(|_| {
                let k = rest % n;
                rest /= n;
                k as f64 / (n - 1) as f64
            })
            .collect();
        let v = eval(&u);
        if v > best_v {
            best_v = v;
            best_u = u;
        }
    }
    if best_v == f64::NEG_INFINITY {
        return Err(Error::UnstableRegime("no stable point inside the search bounds".into()));
    }
    let grid_best = to_x(&best_u);

    // Nelder-Mead on the unit box, minimizing -f.
    let step = 1.0 / (n - 1) as f64;
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(best_u.clone(), -best_v)];
    for k in 0..dim {
        let mut u = best_u.clone();
        u[k] = if u[k] + step <= 1.0 { u[k] + step } else { u[k] - step };
        let v = -eval(&u);
        simplex.push((u, v));
    }
    let clamp = |u: Vec<f64>| -> Vec<f64> { u.into_iter().map(|t| t.clamp(0.0, 1.0)).collect() };
    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect() };
    while evaluations.get() < opts.max_evaluations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[dim].1 - simplex[0].1;
        let extent = simplex[1..]
            .iter()
            .flat_map(|(u, _)| u.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if (spread.is_finite() && spread <= opts.f_tol) || extent <= opts.x_tol {
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|(u, _)| u[k]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let reflected = clamp(lerp(&centroid, &worst.0, -1.0));
        let fr = -eval(&reflected);
        if fr < simplex[0].1 {
            let expanded = clamp(lerp(&centroid, &worst.0, -2.0));
            let fe = -eval(&expanded);
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
        } else {
            let (target, ft) = if fr < worst.1 { (&reflected, fr) } else { (&worst.0, worst.1) };
            let contracted = clamp(lerp(&centroid, target, 0.5));
            let fc = -eval(&contracted);
            if fc < ft {
                simplex[dim] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let u = lerp(&best, &item.0, 0.5);
                    let v = -eval(&u);
                    *item = (u, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (u, v) = simplex.swap_remove(0);
    Ok(Maximum {
        x: to_x(&u),
        value: -v,
        evaluations: evaluations.get(),
        grid_best,
    })
}
