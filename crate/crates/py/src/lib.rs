//! Python bindings: parameters, spectral analysis, normal forms and simulation.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use memhopf::model::{linearize, steady_state, ModelParams, Variant};
use memhopf::simulator::diagnostics::{diagnose_signal, Signal};
use memhopf::simulator::{run, InitialCondition, Profile, SimConfig, TimeScheme};
use memhopf::spectral::{self, Verdict};
use memhopf::{Error, HopfPoint, NormalFormResult};

type Mat2 = [[f64; 2]; 2];

create_exception!(pymemhopf, MemhopfError, PyException);

fn to_py(e: Error) -> PyErr {
    MemhopfError::new_err(format!("[{}] {e}", e.code()))
}

fn parse<T: std::str::FromStr>(s: &str) -> PyResult<T>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>()
        .map_err(|e| MemhopfError::new_err(format!("[E_PARAM] {e}")))
}

#[pyclass(
    name = "ModelParams",
    module = "pymemhopf",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyModelParams {
    inner: ModelParams,
}

#[pymethods]
impl PyModelParams {
    #[new]
    #[pyo3(signature = (variant="memory", beta=1.0, m=0.5, gamma=0.5, d11=0.6, d22=0.8, d21=0.0, ell=2.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        variant: &str,
        beta: f64,
        m: f64,
        gamma: f64,
        d11: f64,
        d22: f64,
        d21: f64,
        ell: f64,
    ) -> PyResult<Self> {
        let variant: Variant = parse(variant)?;
        ModelParams::new(variant, beta, m, gamma, d11, d22, d21, ell)
            .map(|inner| PyModelParams { inner })
            .map_err(to_py)
    }

    fn with_d21(&self, d21: f64) -> PyResult<Self> {
        self.inner
            .with_d21(d21)
            .map(|inner| PyModelParams { inner })
            .map_err(to_py)
    }

    #[getter]
    fn variant(&self) -> &'static str {
        self.inner.variant.as_str()
    }
    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }
    #[getter]
    fn m(&self) -> f64 {
        self.inner.m
    }
    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }
    #[getter]
    fn d11(&self) -> f64 {
        self.inner.d11
    }
    #[getter]
    fn d22(&self) -> f64 {
        self.inner.d22
    }
    #[getter]
    fn d21(&self) -> f64 {
        self.inner.d21
    }
    #[getter]
    fn ell(&self) -> f64 {
        self.inner.ell
    }

    /// `(u*, v*)`.
    fn steady_state(&self) -> PyResult<(f64, f64)> {
        steady_state(&self.inner)
            .map(|s| (s.u_star, s.v_star))
            .map_err(to_py)
    }

    /// `((a11, a12), (a21, a22))` and `((b11, b12), (b21, b22))`.
    fn jacobians(&self) -> PyResult<(Mat2, Mat2)> {
        linearize(&self.inner)
            .map(|l| (l.a1(), l.a2()))
            .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "ModelParams(variant='{}', beta={}, m={}, gamma={}, d11={}, d22={}, d21={}, ell={})",
            p.variant.as_str(),
            p.beta,
            p.m,
            p.gamma,
            p.d11,
            p.d22,
            p.d21,
            p.ell
        )
    }
}

#[pyclass(name = "HopfPoint", module = "pymemhopf", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyHopfPoint {
    inner: HopfPoint,
}

#[pymethods]
impl PyHopfPoint {
    #[getter]
    fn n_c(&self) -> u32 {
        self.inner.n_c
    }
    #[getter]
    fn j(&self) -> u32 {
        self.inner.j
    }
    #[getter]
    fn omega(&self) -> f64 {
        self.inner.omega_nc
    }
    #[getter]
    fn tau_c(&self) -> f64 {
        self.inner.tau_c
    }
    #[getter]
    fn transversality(&self) -> f64 {
        self.inner.transversality
    }

    fn __repr__(&self) -> String {
        let h = &self.inner;
        format!(
            "HopfPoint(n_c={}, j={}, omega={}, tau_c={})",
            h.n_c, h.j, h.omega_nc, h.tau_c
        )
    }
}

#[pyclass(name = "NormalForm", module = "pymemhopf", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyNormalForm {
    inner: NormalFormResult,
}

#[pymethods]
impl PyNormalForm {
    #[getter]
    #[allow(non_snake_case)]
    fn K1(&self) -> f64 {
        self.inner.k1
    }
    #[getter]
    #[allow(non_snake_case)]
    fn K2(&self) -> f64 {
        self.inner.k2
    }
    #[getter]
    fn direction(&self) -> &'static str {
        self.inner.direction.as_str()
    }
    #[getter]
    fn stability(&self) -> &'static str {
        self.inner.orbit_stability.as_str()
    }
    #[getter]
    fn label(&self) -> String {
        self.inner.class_label()
    }

    /// `[(name, (re, im))]` for B1, B21 to B24 and B2.
    fn coefficients(&self) -> Vec<(&'static str, (f64, f64))> {
        let r = &self.inner;
        [
            ("B1", r.b1),
            ("B21", r.b21),
            ("B22", r.b22),
            ("B23", r.b23),
            ("B24", r.b24),
            ("B2", r.b2),
        ]
        .into_iter()
        .map(|(k, z)| (k, (z.re, z.im)))
        .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "NormalForm(K1={}, K2={}, class='{}')",
            self.inner.k1,
            self.inner.k2,
            self.inner.class_label()
        )
    }
}

#[pyclass(name = "Simulation", module = "pymemhopf", frozen)]
struct PySimulation {
    #[pyo3(get)]
    x: Vec<f64>,
    #[pyo3(get)]
    times: Vec<f64>,
    #[pyo3(get)]
    u: Vec<Vec<f64>>,
    #[pyo3(get)]
    v: Vec<Vec<f64>>,
    #[pyo3(get)]
    dt: f64,
    #[pyo3(get)]
    converged_to_steady: bool,
    #[pyo3(get)]
    final_distance: f64,
    #[pyo3(get)]
    amplitude_trend: Option<&'static str>,
    #[pyo3(get)]
    period_estimate: Option<f64>,
    #[pyo3(get)]
    spatial_inhomogeneity: f64,
    #[pyo3(get)]
    inconclusive: bool,
}

/// Hopf point of mode `n` on branch `j`.
#[pyfunction]
#[pyo3(signature = (params, n, j=0))]
fn hopf_point(params: &PyModelParams, n: u32, j: u32) -> PyResult<PyHopfPoint> {
    let lin = linearize(&params.inner).map_err(to_py)?;
    spectral::hopf_point(&lin, n, j)
        .map(|inner| PyHopfPoint { inner })
        .map_err(to_py)
}

/// First Hopf point(s) as the delay increases; ties are all returned.
#[pyfunction]
fn critical_set(params: &PyModelParams) -> PyResult<Vec<PyHopfPoint>> {
    spectral::critical_set(&params.inner)
        .map(|s| {
            s.points
                .into_iter()
                .map(|inner| PyHopfPoint { inner })
                .collect()
        })
        .map_err(to_py)
}

/// `"stable"`, `"unstable"` or `"on-hopf-curve"`.
#[pyfunction]
fn stability_verdict(params: &PyModelParams, tau: f64) -> PyResult<&'static str> {
    spectral::stability_verdict(&params.inner, tau)
        .map(|v| match v {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::OnHopfCurve { .. } => "on-hopf-curve",
        })
        .map_err(to_py)
}

/// Memory-only thresholds `[(n, d21^(n))]` and their minimum.
#[pyfunction]
fn d21_thresholds(params: &PyModelParams) -> PyResult<(Vec<(u32, f64)>, f64)> {
    let lin = linearize(&params.inner).map_err(to_py)?;
    spectral::d21_thresholds(&lin, spectral::default_n_max(&lin))
        .map(|t| (t.by_mode, t.d21_star))
        .map_err(to_py)
}

/// Samples `τ_{n,0}(d21)` and returns `(points, crossings)`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn hopf_curves(
    py: Python<'_>,
    params: &PyModelParams,
    d21_min: f64,
    d21_max: f64,
    step: f64,
) -> PyResult<(Vec<(f64, u32, f64)>, Vec<(f64, f64, u32, u32, bool)>)> {
    let p = params.inner;
    let scan = py
        .detach(|| spectral::hopf_curve_scan(&p, d21_min, d21_max, step))
        .map_err(to_py)?;
    Ok((
        scan.points.iter().map(|c| (c.d21, c.n, c.tau_n0)).collect(),
        scan.crossings
            .iter()
            .map(|c| (c.d21, c.tau, c.n_a, c.n_b, c.on_boundary))
            .collect(),
    ))
}

/// Normal form at a Hopf point.
#[pyfunction]
fn normal_form(params: &PyModelParams, point: &PyHopfPoint) -> PyResult<PyNormalForm> {
    memhopf::normal_form(&params.inner, &point.inner)
        .map(|d| PyNormalForm { inner: d.result })
        .map_err(to_py)
}

/// Integrates from the profiles `u0`, `v0` (e.g. `"0.3333+0.02cos(x)"`) and diagnoses the last `window`.
#[pyfunction]
#[pyo3(signature = (params, tau, u0, v0, t_end=3000.0, n_x=201, dt=0.05, scheme="split", snapshot_every=1.0, window=None, signal="mean"))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    py: Python<'_>,
    params: &PyModelParams,
    tau: f64,
    u0: &str,
    v0: &str,
    t_end: f64,
    n_x: usize,
    dt: f64,
    scheme: &str,
    snapshot_every: f64,
    window: Option<f64>,
    signal: &str,
) -> PyResult<PySimulation> {
    let initial = InitialCondition {
        u: Profile::parse(u0).map_err(|e| MemhopfError::new_err(format!("[E_PARAM] {e}")))?,
        v: Profile::parse(v0).map_err(|e| MemhopfError::new_err(format!("[E_PARAM] {e}")))?,
    };
    let scheme: TimeScheme = parse(scheme)?;
    let signal: Signal = memhopf::config::parse_signal(signal)
        .map_err(|e| MemhopfError::new_err(format!("[E_PARAM] {e}")))?;
    let cfg = SimConfig {
        n_x,
        dt,
        t_end,
        snapshot_every,
        scheme,
        probe: 0,
    };
    let p = params.inner;
    let window = window.unwrap_or(t_end / 3.0);
    let (traj, diag) = py
        .detach(|| {
            let traj = run(&p, tau, &cfg, &initial)?;
            let diag = diagnose_signal(&traj, window, signal)?;
            Ok::<_, Error>((traj, diag))
        })
        .map_err(to_py)?;
    Ok(PySimulation {
        dt: traj.grid.dt,
        x: traj.x,
        times: traj.times,
        u: traj.u,
        v: traj.v,
        converged_to_steady: diag.converged_to_steady,
        final_distance: diag.final_distance,
        amplitude_trend: diag.amplitude_trend.map(|t| t.as_str()),
        period_estimate: diag.period_estimate,
        spatial_inhomogeneity: diag.spatial_inhomogeneity,
        inconclusive: diag.inconclusive,
    })
}

#[pymodule]
fn pymemhopf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MemhopfError", m.py().get_type::<MemhopfError>())?;
    m.add_class::<PyModelParams>()?;
    m.add_class::<PyHopfPoint>()?;
    m.add_class::<PyNormalForm>()?;
    m.add_class::<PySimulation>()?;
    m.add_function(wrap_pyfunction!(hopf_point, m)?)?;
    m.add_function(wrap_pyfunction!(critical_set, m)?)?;
    m.add_function(wrap_pyfunction!(stability_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(d21_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(hopf_curves, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
