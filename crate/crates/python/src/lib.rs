//! Python module `optomech`: parameter records, steady-state solvers and
//! purity analysis. Results come back as dicts of floats.

use nalgebra::{DMatrix, Matrix4};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ::optomech as om;
use ::optomech::{Coupling, Error, NoiseMode};

create_exception!(optomech, UnstableError, PyRuntimeError, "No stable steady state exists.");
create_exception!(optomech, RegimeError, PyValueError, "Parameters are outside the formula's regime.");
create_exception!(optomech, NumericalError, PyRuntimeError, "A solver or quadrature failed.");

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        e if e.is_instability() => UnstableError::new_err(msg),
        Error::InvalidRegime(_) | Error::AssumptionViolated(_) => RegimeError::new_err(msg),
        Error::SolveFailure(_) | Error::QuadratureFailure { .. } | Error::FixedPointDivergence { .. } => {
            NumericalError::new_err(msg)
        }
        _ => PyValueError::new_err(msg),
    }
}

fn noise_for(gamma: f64) -> NoiseMode {
    if gamma > 0.0 {
        NoiseMode::MarkovianThermal
    } else {
        NoiseMode::VacuumOnly
    }
}

fn warnings(w: &[om::Warning]) -> Vec<&'static str> {
    w.iter().map(|w| w.code()).collect()
}

/// Single mechanical mode coupled to one cavity mode.
#[pyclass(name = "SystemParams1D", module = "optomech")]
pub struct PyParams1D {
    inner: om::SystemParams1D,
}

#[pymethods]
impl PyParams1D {
    #[new]
    #[pyo3(signature = (omega_b=1.0, kappa=0.2, delta=None, g_o=None, lambda_o=None, gamma_b=0.0, n_b=None, kt=None, mass=1.0, hbar=1.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        omega_b: f64,
        kappa: f64,
        delta: Option<f64>,
        g_o: Option<f64>,
        lambda_o: Option<f64>,
        gamma_b: f64,
        n_b: Option<f64>,
        kt: Option<f64>,
        mass: f64,
        hbar: f64,
    ) -> PyResult<Self> {
        let delta = delta.unwrap_or(omega_b);
        let mut p = om::SystemParams1D::new(omega_b, kappa, delta, Coupling::Rate(g_o.unwrap_or(0.0)))
            .with_units(mass, hbar)
            .with_gamma(gamma_b);
        match (lambda_o, g_o) {
            (Some(_), Some(_)) => return Err(PyValueError::new_err("give either g_o or lambda_o, not both")),
            (Some(l), None) => p.set_coupling(Coupling::Lambda(l)),
            _ => {}
        }
        p = match (n_b, kt) {
            (Some(_), Some(_)) => return Err(PyValueError::new_err("give either n_b or kt, not both")),
            (Some(n), None) => p.with_bath_occupation(n).map_err(to_py)?,
            (None, Some(t)) => p.with_thermal_energy(t),
            (None, None) => p,
        };
        p.validate().map_err(to_py)?;
        Ok(PyParams1D { inner: p })
    }

    #[getter]
    fn omega_b(&self) -> f64 {
        self.inner.omega_b
    }
    #[getter]
    fn kappa(&self) -> f64 {
        self.inner.kappa
    }
    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta
    }
    #[getter]
    fn g_o(&self) -> f64 {
        self.inner.g_o()
    }
    #[getter]
    fn lambda_o(&self) -> f64 {
        self.inner.lambda_o
    }
    #[getter]
    fn gamma_b(&self) -> f64 {
        self.inner.gamma_b
    }
    #[getter]
    fn bath_occupation(&self) -> f64 {
        self.inner.bath_occupation()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "SystemParams1D(omega_b={}, kappa={}, delta={}, g_o={}, gamma_b={}, n_b={})",
            p.omega_b,
            p.kappa,
            p.delta,
            p.g_o(),
            p.gamma_b,
            p.bath_occupation()
        )
    }
}

/// Two-dimensional oscillator in a rotated trap, one cavity mode.
#[pyclass(name = "SystemParams2D", module = "optomech")]
pub struct PyParams2D {
    inner: om::SystemParams2D,
}

#[pymethods]
impl PyParams2D {
    #[new]
    #[pyo3(signature = (omega_x, omega_y, phi, kappa, delta, lambda_o, gamma_x=0.0, gamma_y=0.0, kt=0.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        omega_x: f64,
        omega_y: f64,
        phi: f64,
        kappa: f64,
        delta: f64,
        lambda_o: f64,
        gamma_x: f64,
        gamma_y: f64,
        kt: f64,
    ) -> PyResult<Self> {
        let p = om::SystemParams2D::new(omega_x, omega_y, phi, kappa, delta, lambda_o)
            .with_damping(gamma_x, gamma_y)
            .with_thermal_energy(kt);
        p.validate().map_err(to_py)?;
        Ok(PyParams2D { inner: p })
    }

    /// Trap at phi = pi/4 with omega_b = omega_d and bright-dark coupling g_m.
    #[staticmethod]
    #[pyo3(signature = (omega_b, g_m, kappa, delta, g_o))]
    fn diagonal_resonant(omega_b: f64, g_m: f64, kappa: f64, delta: f64, g_o: f64) -> PyResult<Self> {
        let p = om::SystemParams2D::diagonal_resonant(omega_b, g_m, kappa, delta, g_o).map_err(to_py)?;
        Ok(PyParams2D { inner: p })
    }

    /// Bright/dark frequencies and couplings.
    fn bright_dark<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let bd = om::bright_dark(&self.inner);
        let d = PyDict::new(py);
        d.set_item("omega_b", bd.omega_b)?;
        d.set_item("omega_d", bd.omega_d)?;
        d.set_item("gamma_b", bd.gamma_b)?;
        d.set_item("gamma_d", bd.gamma_d)?;
        d.set_item("delta_m", bd.delta_m)?;
        d.set_item("eta_m", bd.eta_m)?;
        d.set_item("g_m", bd.g_m)?;
        Ok(d)
    }

    #[getter]
    fn g_o(&self) -> f64 {
        self.inner.g_o()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "SystemParams2D(omega_x={}, omega_y={}, phi={}, kappa={}, delta={}, lambda_o={})",
            p.omega_x, p.omega_y, p.phi, p.kappa, p.delta, p.lambda_o
        )
    }
}

/// Rotating-wave cavity, bright and dark mode model.
#[pyclass(name = "SystemParamsRWA", module = "optomech")]
pub struct PyParamsRwa {
    inner: om::SystemParamsRWA,
}

#[pymethods]
impl PyParamsRwa {
    #[new]
    #[pyo3(signature = (omega, kappa, gamma_tot, n_th, g_o, g_m, omega_d=None, delta=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        omega: f64,
        kappa: f64,
        gamma_tot: f64,
        n_th: f64,
        g_o: f64,
        g_m: f64,
        omega_d: Option<f64>,
        delta: Option<f64>,
    ) -> PyResult<Self> {
        let mut p = om::SystemParamsRWA::resonant(omega, kappa, gamma_tot, n_th, g_o, g_m);
        p.omega_d = omega_d.unwrap_or(omega);
        p.delta = delta.unwrap_or(omega);
        p.validate().map_err(to_py)?;
        Ok(PyParamsRwa { inner: p })
    }

    fn cooperativity(&self) -> PyResult<f64> {
        om::cooperativity(&self.inner).map_err(to_py)
    }
}

fn cov1d_dict<'py>(py: Python<'py>, c: &om::Cov1D) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("xx", c.xx)?;
    d.set_item("pp", c.pp)?;
    d.set_item("xp", c.xp)?;
    let (n, mu) = om::occupation_and_purity_1d(c).map_err(to_py)?;
    d.set_item("n_bar", n)?;
    d.set_item("purity", mu)?;
    Ok(d)
}

fn matrix(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

/// Exact backaction-limited 1D state (closed form).
#[pyfunction]
fn backaction_1d<'py>(py: Python<'py>, p: PyRef<'_, PyParams1D>) -> PyResult<Bound<'py, PyDict>> {
    let r = om::backaction_1d(&p.inner).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("xx", r.xx)?;
    d.set_item("pp", r.pp)?;
    d.set_item("n_bar", r.n_bar)?;
    d.set_item("purity", r.purity)?;
    d.set_item("m_omega", r.m_omega)?;
    d.set_item("n_bar_0", r.n_bar_0)?;
    d.set_item("n_min_weak", r.n_min_weak)?;
    Ok(d)
}

/// Lyapunov steady state of the 1D model.
#[pyfunction]
fn lyapunov_1d<'py>(py: Python<'py>, p: PyRef<'_, PyParams1D>) -> PyResult<Bound<'py, PyDict>> {
    let sys = om::build_1d(&p.inner, noise_for(p.inner.gamma_b)).map_err(to_py)?;
    let cov = om::steady_covariance(&sys).map_err(to_py)?;
    let m = cov.mode(0);
    let d = cov1d_dict(py, &m)?;
    d.set_item(
        "n_bar_0",
        om::closed_form::bare_phonon_number(m.xx, m.pp, p.inner.omega_b, p.inner.mass, p.inner.hbar),
    )?;
    d.set_item("matrix", matrix(&cov.matrix))?;
    d.set_item("labels", cov.labels.clone())?;
    Ok(d)
}

/// Frequency-integrated 1D moments.
#[pyfunction]
#[pyo3(signature = (p, rel_tol=1e-10))]
fn spectral_1d<'py>(py: Python<'py>, p: PyRef<'_, PyParams1D>, rel_tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let s = om::integrate_moments(&p.inner, &om::FreqGrid::with_rel_tol(rel_tol)).map_err(to_py)?;
    let d = cov1d_dict(py, &s.cov)?;
    d.set_item("xx_error", s.xx_error)?;
    d.set_item("pp_error", s.pp_error)?;
    d.set_item("commutator", s.commutator)?;
    d.set_item("cutoff", s.cutoff)?;
    Ok(d)
}

/// Position noise spectrum S_xx(omega).
#[pyfunction]
fn position_psd(omega: f64, p: PyRef<'_, PyParams1D>) -> PyResult<f64> {
    om::position_psd(omega, &p.inner).map_err(to_py)
}

#[pyfunction]
fn weak_coupling<'py>(py: Python<'py>, p: PyRef<'_, PyParams1D>) -> PyResult<Bound<'py, PyDict>> {
    let r = om::weak_coupling(&p.inner).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("omega_tilde", r.omega_tilde)?;
    d.set_item("gamma_tilde", r.gamma_tilde)?;
    d.set_item("n_bar", r.n_bar)?;
    d.set_item("x_zpf_eff", r.x_zpf_eff)?;
    d.set_item("fixed_points", r.fixed_points)?;
    d.set_item("warnings", warnings(&r.warnings))?;
    Ok(d)
}

#[pyfunction]
fn strong_coupling<'py>(py: Python<'py>, p: PyRef<'_, PyParams1D>) -> PyResult<Bound<'py, PyDict>> {
    let r = om::strong_coupling(&p.inner).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("omega_plus", r.omega_plus)?;
    d.set_item("omega_minus", r.omega_minus)?;
    d.set_item("kappa_plus", r.kappa_plus)?;
    d.set_item("kappa_minus", r.kappa_minus)?;
    d.set_item("n_plus", r.n_plus)?;
    d.set_item("n_minus", r.n_minus)?;
    d.set_item("n_bar", r.n_bar)?;
    d.set_item("n_bar_0", r.n_bar_0)?;
    d.set_item("warnings", warnings(&r.warnings))?;
    Ok(d)
}

#[pyfunction]
fn is_stable(p: PyRef<'_, PyParams1D>) -> PyResult<bool> {
    let sys = om::build_1d(&p.inner, noise_for(p.inner.gamma_b)).map_err(to_py)?;
    Ok(om::stability(&sys))
}

fn summary_2d<'py>(py: Python<'py>, cov: &om::Cov2D) -> PyResult<Bound<'py, PyDict>> {
    let s = om::purity_2d_general(cov).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("purity_2d", s.purity_2d)?;
    d.set_item("n_plus", s.n_plus)?;
    d.set_item("n_minus", s.n_minus)?;
    d.set_item("purity_product", s.purity_product_1d)?;
    Ok(d)
}

/// Exact backaction-limited 2D state (closed form).
#[pyfunction]
fn backaction_2d<'py>(py: Python<'py>, p: PyRef<'_, PyParams2D>) -> PyResult<Bound<'py, PyDict>> {
    let r = om::backaction_2d(&p.inner).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("xx_b", r.xx_b)?;
    d.set_item("xx_d", r.xx_d)?;
    d.set_item("pp_b", r.pp_b)?;
    d.set_item("pp_d", r.pp_d)?;
    d.set_item("x_b_x_d", r.x_b_x_d)?;
    d.set_item("p_b_p_d", r.p_b_p_d)?;
    d.set_item("purity_2d", r.purity_2d)?;
    d.set_item("purity_product", r.purity_product)?;
    Ok(d)
}

/// Lyapunov steady state of the 2D model, bright/dark mechanical block.
#[pyfunction]
fn lyapunov_2d<'py>(py: Python<'py>, p: PyRef<'_, PyParams2D>) -> PyResult<Bound<'py, PyDict>> {
    let gamma = p.inner.gamma_x.max(p.inner.gamma_y);
    let sys = om::build_2d(&p.inner, noise_for(gamma)).map_err(to_py)?;
    let cov = om::steady_covariance(&sys).map_err(to_py)?;
    let d = summary_2d(py, &cov.two_mode(0, 2, "bright/dark").map_err(to_py)?)?;
    d.set_item("matrix", matrix(&cov.matrix))?;
    d.set_item("labels", cov.labels.clone())?;
    Ok(d)
}

/// Lyapunov steady state of the RWA model; the mechanical block is in
/// zero-point units.
#[pyfunction]
fn lyapunov_rwa<'py>(py: Python<'py>, p: PyRef<'_, PyParamsRwa>) -> PyResult<Bound<'py, PyDict>> {
    let sys = om::build_rwa(&p.inner).map_err(to_py)?;
    let cov = om::steady_covariance(&sys).map_err(to_py)?;
    let d = summary_2d(py, &cov.two_mode(2, 4, "bright/dark RWA").map_err(to_py)?)?;
    d.set_item("matrix", matrix(&cov.matrix))?;
    d.set_item("labels", cov.labels.clone())?;
    d.set_item("warnings", warnings(&sys.warnings))?;
    Ok(d)
}

#[pyfunction]
fn rwa_optimum<'py>(py: Python<'py>, p: PyRef<'_, PyParamsRwa>) -> PyResult<Bound<'py, PyDict>> {
    let r = om::rwa_optimum(&p.inner).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("g_m_opt", r.g_m_opt)?;
    d.set_item("purity_approx", r.purity_approx)?;
    d.set_item("warnings", warnings(&r.warnings))?;
    Ok(d)
}

/// Occupation and purity of a single-mode covariance.
#[pyfunction]
#[pyo3(signature = (xx, pp, xp=0.0, hbar=1.0))]
fn occupation_and_purity(xx: f64, pp: f64, xp: f64, hbar: f64) -> PyResult<(f64, f64)> {
    om::occupation_and_purity_1d(&om::Cov1D::new(xx, pp, xp).with_hbar(hbar)).map_err(to_py)
}

fn cov2d_from(m: Vec<Vec<f64>>, hbar: f64) -> PyResult<om::Cov2D> {
    if m.len() != 4 || m.iter().any(|r| r.len() != 4) {
        return Err(PyValueError::new_err("expected a 4x4 matrix"));
    }
    let mat = Matrix4::from_fn(|i, j| m[i][j]);
    om::Cov2D::new(mat, hbar, "user").map_err(to_py)
}

/// Two-mode purity and diagonal-basis occupations of a 4x4 covariance in
/// the order (x1, p1, x2, p2).
#[pyfunction]
#[pyo3(signature = (matrix, hbar=1.0))]
fn purity_2d<'py>(py: Python<'py>, matrix: Vec<Vec<f64>>, hbar: f64) -> PyResult<Bound<'py, PyDict>> {
    summary_2d(py, &cov2d_from(matrix, hbar)?)
}

/// Purity from the reduced aggregate formula.
#[pyfunction]
#[pyo3(signature = (matrix, hbar=1.0))]
fn purity_2d_reduced(matrix: Vec<Vec<f64>>, hbar: f64) -> PyResult<f64> {
    om::purity_2d_reduced(&cov2d_from(matrix, hbar)?).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "optomech")]
fn optomech_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams1D>()?;
    m.add_class::<PyParams2D>()?;
    m.add_class::<PyParamsRwa>()?;
    m.add("UnstableError", m.py().get_type::<UnstableError>())?;
    m.add("RegimeError", m.py().get_type::<RegimeError>())?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_function(wrap_pyfunction!(backaction_1d, m)?)?;
    m.add_function(wrap_pyfunction!(lyapunov_1d, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_1d, m)?)?;
    m.add_function(wrap_pyfunction!(position_psd, m)?)?;
    m.add_function(wrap_pyfunction!(weak_coupling, m)?)?;
    m.add_function(wrap_pyfunction!(strong_coupling, m)?)?;
    m.add_function(wrap_pyfunction!(is_stable, m)?)?;
    m.add_function(wrap_pyfunction!(backaction_2d, m)?)?;
    m.add_function(wrap_pyfunction!(lyapunov_2d, m)?)?;
    m.add_function(wrap_pyfunction!(lyapunov_rwa, m)?)?;
    m.add_function(wrap_pyfunction!(rwa_optimum, m)?)?;
    m.add_function(wrap_pyfunction!(occupation_and_purity, m)?)?;
    m.add_function(wrap_pyfunction!(purity_2d, m)?)?;
    m.add_function(wrap_pyfunction!(purity_2d_reduced, m)?)?;
    Ok(())
}
