//! Small dense linear-algebra kernels: balancing, eigenvalues, polynomial
//! roots, symplectic spectra and the continuous Lyapunov equation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

const RADIX: f64 = 2.0;

/// Diagonal similarity balancing (Parlett-Reinsch, radix 2).
///
/// Returns a matrix with the same eigenvalues whose row and column norms are
/// roughly equal. Scalings are powers of two, so no rounding is introduced.
pub fn balance(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut m = a.clone();
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    m[(i, j)] *= inv;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
    m
}

/// Eigenvalues of a real square matrix, computed on the balanced matrix.
pub fn eigenvalues(a: &DMatrix<f64>) -> Vec<Complex64> {
    let b = balance(a);
    b.complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect()
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(eigs: &[Complex64]) -> f64 {
    eigs.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Evaluate a polynomial with coefficients in ascending order at `z`.
pub fn poly_eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn poly_eval_derivative(coeffs: &[f64], z: Complex64) -> Complex64 {
    let n = coeffs.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (1..n).rev() {
        acc = acc * z + coeffs[k] * k as f64;
    }
    acc
}

/// Roots of a real polynomial (coefficients in ascending order) from the
/// eigenvalues of its balanced companion matrix, polished by Newton steps.
pub fn poly_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let mut deg = coeffs.len();
    while deg > 0 && coeffs[deg - 1] == 0.0 {
        deg -= 1;
    }
    if deg < 2 {
        return Ok(Vec::new());
    }
    let c = &coeffs[..deg];
    let n = deg - 1;
    let lead = c[n];
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        comp[(0, j)] = -c[n - 1 - j] / lead;
    }
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    let mut roots = eigenvalues(&comp);
    for z in roots.iter_mut() {
        for _ in 0..3 {
            let d = poly_eval_derivative(c, *z);
            if d.norm() == 0.0 {
                break;
            }
            let step = poly_eval(c, *z) / d;
            if !step.is_finite() {
                break;
            }
            *z -= step;
            if step.norm() <= 1e-16 * z.norm() {
                break;
            }
        }
    }
    Ok(roots)
}

/// Standard symplectic form for `modes` position/momentum pairs ordered
/// (x1, p1, x2, p2, ...).
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let n = 2 * modes;
    let mut omega = DMatrix::zeros(n, n);
    for k in 0..modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Symplectic eigenvalues of a covariance matrix in ascending order.
///
/// They are the moduli of the eigenvalues of `Omega V`, which come in
/// `+-i nu` pairs. Pairs must agree to a relative tolerance of 1e-9.
pub fn symplectic_eigenvalues(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = v.nrows();
    if n % 2 != 0 || v.ncols() != n {
        return Err(Error::InvalidCovariance(format!(
            "expected an even square matrix, got {}x{}",
            v.nrows(),
            v.ncols()
        )));
    }
    let omega = symplectic_form(n / 2);
    let mut moduli: Vec<f64> = eigenvalues(&(omega * v)).iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| a.total_cmp(b));
    let scale = moduli.last().copied().unwrap_or(0.0);
    let mut nus = Vec::with_capacity(n / 2);
    for pair in moduli.chunks(2) {
        let (a, b) = (pair[0], pair[1]);
        if (a - b).abs() > 1e-9 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidCovariance(format!(
                "symplectic spectrum does not pair: {a:e} vs {b:e}"
            )));
        }
        nus.push(0.5 * (a + b));
    }
    Ok(nus)
}

/// Infinity norm (maximum absolute row sum).
pub fn norm_inf(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn sym_index(i: usize, j: usize, n: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

/// `A V + V A^T + D` for symmetric `V`.
pub fn lyapunov_residual(a: &DMatrix<f64>, v: &DMatrix<f64>, d: &DMatrix<f64>) -> DMatrix<f64> {
    a * v + v * a.transpose() + d
}

/// Solve `A V + V A^T + D = 0` for symmetric `V` through the dense
/// `n(n+1)/2` system of the upper-triangular unknowns, with two steps of
/// iterative refinement.
pub fn solve_lyapunov(a: &DMatrix<f64>, d: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let size = n * (n + 1) / 2;
    let mut m = DMatrix::<f64>::zeros(size, size);
    let mut rhs = DVector::<f64>::zeros(size);
    for i in 0..n {
        for j in i..n {
            let row = sym_index(i, j, n);
            for k in 0..n {
                m[(row, sym_index(k, j, n))] += a[(i, k)];
                m[(row, sym_index(i, k, n))] += a[(j, k)];
            }
            rhs[row] = -d[(i, j)];
        }
    }
    let lu = m.lu();
    if !lu.is_invertible() {
        return Err(Error::SolveFailure("singular Lyapunov operator".into()));
    }
    let unpack = |x: &DVector<f64>| {
        DMatrix::from_fn(n, n, |i, j| x[sym_index(i, j, n)])
    };
    let mut x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::SolveFailure("LU back-substitution failed".into()))?;
    for _ in 0..2 {
        let r = lyapunov_residual(a, &unpack(&x), d);
        let mut rv = DVector::<f64>::zeros(size);
        for i in 0..n {
            for j in i..n {
                rv[sym_index(i, j, n)] = -r[(i, j)];
            }
        }
        match lu.solve(&rv) {
            Some(dx) => x += dx,
            None => break,
        }
    }
    Ok(unpack(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn balancing_preserves_spectrum() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 1e6, 0.0, 1e-6, 2.0, 1e4, 0.0, 1e-4, 3.0]);
        let mut e1: Vec<f64> = eigenvalues(&a).iter().map(|z| z.re).collect();
        let mut e2: Vec<f64> = a.complex_eigenvalues().iter().map(|z| z.re).collect();
        e1.sort_by(f64::total_cmp);
        e2.sort_by(f64::total_cmp);
        for (x, y) in e1.iter().zip(&e2) {
            assert_relative_eq!(x, y, max_relative = 1e-9);
        }
    }

    #[test]
    fn quadratic_roots() {
        // s^2 + 1
        let mut r = poly_roots(&[1.0, 0.0, 1.0]).unwrap();
        r.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert_relative_eq!(r[0].im, -1.0, epsilon = 1e-14);
        assert_relative_eq!(r[1].im, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn cubic_roots_are_polished() {
        // (s - 1)(s - 2)(s - 3) = s^3 - 6 s^2 + 11 s - 6
        let mut r: Vec<f64> = poly_roots(&[-6.0, 11.0, -6.0, 1.0])
            .unwrap()
            .iter()
            .map(|z| z.re)
            .collect();
        r.sort_by(f64::total_cmp);
        for (x, y) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert_relative_eq!(*x, y, max_relative = 1e-14);
        }
    }

    #[test]
    fn lyapunov_scalar_case() {
        let a = DMatrix::from_diagonal_element(2, 2, -0.5);
        let d = DMatrix::identity(2, 2);
        let v = solve_lyapunov(&a, &d).unwrap();
        assert_relative_eq!(v, DMatrix::identity(2, 2), epsilon = 1e-15);
    }

    #[test]
    fn lyapunov_singular_operator() {
        // A + A^T has a zero mode for a pure rotation.
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let d = DMatrix::identity(2, 2);
        assert!(matches!(solve_lyapunov(&a, &d), Err(Error::SolveFailure(_))));
    }

    #[test]
    fn vacuum_symplectic_spectrum() {
        let v = DMatrix::from_diagonal_element(4, 4, 0.5);
        let nus = symplectic_eigenvalues(&v).unwrap();
        assert_eq!(nus.len(), 2);
        for nu in nus {
            assert_relative_eq!(nu, 0.5, epsilon = 1e-14);
        }
    }
}
