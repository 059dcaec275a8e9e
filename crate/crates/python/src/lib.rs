//! Python bindings: grids, fields, filter banks, fluxes, example fields and the CLI.
//!
//! Fields cross the boundary as nested lists of physical samples, one list per
//! component in row-major order.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use lpflux::besov::{besov_norm as core_besov_norm, dyadic_coefficients as core_dyadic, BesovParams};
use lpflux::constructions::{self, EnvelopeVariant};
use lpflux::{bilinear, flux, io, triad, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn envelope(name: &str) -> PyResult<EnvelopeVariant> {
    match name {
        "torus" => Ok(EnvelopeVariant::Torus),
        "localized" => Ok(EnvelopeVariant::Localized),
        _ => Err(PyValueError::new_err(format!(
            "unknown envelope {name:?}, expected torus or localized"
        ))),
    }
}

/// Periodic grid of period `2 pi L` per axis.
#[pyclass(frozen, from_py_object)]
#[derive(Clone, Copy)]
struct Grid {
    inner: lpflux::Grid,
}

#[pymethods]
impl Grid {
    #[new]
    #[pyo3(signature = (sizes, lattice_denominator=1))]
    fn new(sizes: Vec<usize>, lattice_denominator: u32) -> PyResult<Self> {
        let inner = lpflux::Grid::new(sizes.len(), &sizes, lattice_denominator).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn sizes(&self) -> Vec<usize> {
        self.inner.sizes().to_vec()
    }

    #[getter]
    fn lattice_denominator(&self) -> u32 {
        self.inner.lattice_denominator()
    }

    #[getter]
    fn volume(&self) -> f64 {
        self.inner.volume()
    }

    fn __repr__(&self) -> String {
        format!(
            "Grid(sizes={:?}, lattice_denominator={})",
            self.inner.sizes(),
            self.inner.lattice_denominator()
        )
    }
}

/// A real scalar or vector field on a grid.
#[pyclass(frozen)]
struct Field {
    inner: lpflux::Field,
}

impl Field {
    fn wrap(inner: lpflux::Field) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl Field {
    /// Builds a field from physical samples, one flat list per component.
    #[staticmethod]
    fn from_physical(grid: Grid, components: Vec<Vec<f64>>) -> PyResult<Self> {
        lpflux::Field::from_physical(grid.inner, components)
            .map(Self::wrap)
            .map_err(to_py)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        io::load_field(path).map(Self::wrap).map_err(to_py)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        io::save_field(&self.inner, path).map_err(to_py)
    }

    #[getter]
    fn grid(&self) -> Grid {
        Grid {
            inner: *self.inner.grid(),
        }
    }

    #[getter]
    fn ncomp(&self) -> usize {
        self.inner.ncomp()
    }

    /// Physical samples, one flat list per component.
    fn physical(&self) -> Vec<Vec<f64>> {
        self.inner.physical().into_owned()
    }

    fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }

    fn __repr__(&self) -> String {
        format!(
            "Field(ncomp={}, sizes={:?})",
            self.inner.ncomp(),
            self.inner.grid().sizes()
        )
    }
}

/// Littlewood-Paley multipliers for one grid.
#[pyclass(frozen)]
struct FilterBank {
    inner: lpflux::FilterBank,
}

#[pymethods]
impl FilterBank {
    #[new]
    fn new(grid: Grid) -> PyResult<Self> {
        let inner = lpflux::make_filter_bank(grid.inner, lpflux::make_chi_profile()).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn q_max(&self) -> i32 {
        self.inner.q_max()
    }

    fn partition_residual(&self) -> f64 {
        self.inner.partition_residual()
    }
}

#[pyfunction]
fn energy_flux(u: &Field, q: i32, bank: &FilterBank) -> PyResult<f64> {
    flux::energy_flux(&u.inner, q, &bank.inner).map_err(to_py)
}

#[pyfunction]
fn shell_flux(u: &Field, q0: i32, q1: i32, bank: &FilterBank) -> PyResult<f64> {
    flux::shell_flux(&u.inner, q0, q1, &bank.inner).map_err(to_py)
}

#[pyfunction]
fn helicity_flux(u: &Field, q: i32, bank: &FilterBank) -> PyResult<f64> {
    flux::helicity_flux(&u.inner, q, &bank.inner).map_err(to_py)
}

#[pyfunction]
fn enstrophy_flux(u: &Field, q: i32, bank: &FilterBank) -> PyResult<f64> {
    flux::enstrophy_flux(&u.inner, q, &bank.inner).map_err(to_py)
}

#[pyfunction]
fn energy_bound(u: &Field, q: i32, bank: &FilterBank) -> PyResult<f64> {
    flux::energy_bound(&u.inner, q, &bank.inner).map_err(to_py)
}

/// `[(q, lambda_q^s ||Delta_q u||_p)]` for `q = -1..=q_max`.
#[pyfunction]
fn dyadic_coefficients(u: &Field, s: f64, p: f64, bank: &FilterBank) -> PyResult<Vec<(i32, f64)>> {
    let d = core_dyadic(&u.inner, s, p, &bank.inner).map_err(to_py)?;
    Ok(d.iter().collect())
}

#[pyfunction]
fn besov_norm(u: &Field, s: f64, p: f64, r: f64, bank: &FilterBank) -> PyResult<f64> {
    let params = BesovParams::new(s, p, r).map_err(to_py)?;
    core_besov_norm(&u.inner, params, &bank.inner).map_err(to_py)
}

#[pyfunction]
fn trilinear(u: &Field, v: &Field, w: &Field) -> PyResult<f64> {
    bilinear::trilinear(&u.inner, &v.inner, &w.inner).map_err(to_py)
}

/// Energy flux by direct summation over triads.
#[pyfunction]
fn triad_energy_flux(u: &Field, q: i32, bank: &FilterBank) -> PyResult<f64> {
    triad::triad_energy_flux(&u.inner, q, &bank.inner)
        .map(|t| t.value)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (grid, q_lo, q_hi, envelope="torus"))]
fn eyink_energy_field(grid: Grid, q_lo: i32, q_hi: i32, envelope: &str) -> PyResult<Field> {
    let env = self::envelope(envelope)?;
    constructions::eyink_energy_field(grid.inner, q_lo, q_hi, env)
        .map(Field::wrap)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (grid, q_lo, q_hi, envelope="torus"))]
fn eyink_helicity_field(grid: Grid, q_lo: i32, q_hi: i32, envelope: &str) -> PyResult<Field> {
    let env = self::envelope(envelope)?;
    constructions::eyink_helicity_field(grid.inner, q_lo, q_hi, env)
        .map(Field::wrap)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (grid, q_top, delta=None))]
fn enstrophy_nonlocal_field(grid: Grid, q_top: i32, delta: Option<f64>) -> PyResult<Field> {
    constructions::enstrophy_nonlocal_field(grid.inner, q_top, delta)
        .map(Field::wrap)
        .map_err(to_py)
}

/// Seeded divergence-free field with `lambda_q^{1/3} ||Delta_q u||_3` close to `profile[q]`.
#[pyfunction]
fn random_spectrum_field(grid: Grid, profile: Vec<f64>, seed: u64) -> PyResult<Field> {
    constructions::random_spectrum_field(grid.inner, &profile, seed)
        .map(Field::wrap)
        .map_err(to_py)
}

/// Runs the command-line interface on `argv` (without the program name) and returns its exit code.
#[pyfunction]
fn run_cli(argv: Vec<String>) -> i32 {
    lpflux::cli::run(std::iter::once("lpflux".to_string()).chain(argv))
}

#[pymodule]
fn pylpflux(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Grid>()?;
    m.add_class::<Field>()?;
    m.add_class::<FilterBank>()?;
    m.add_function(wrap_pyfunction!(energy_flux, m)?)?;
    m.add_function(wrap_pyfunction!(shell_flux, m)?)?;
    m.add_function(wrap_pyfunction!(helicity_flux, m)?)?;
    m.add_function(wrap_pyfunction!(enstrophy_flux, m)?)?;
    m.add_function(wrap_pyfunction!(energy_bound, m)?)?;
    m.add_function(wrap_pyfunction!(dyadic_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(besov_norm, m)?)?;
    m.add_function(wrap_pyfunction!(trilinear, m)?)?;
    m.add_function(wrap_pyfunction!(triad_energy_flux, m)?)?;
    m.add_function(wrap_pyfunction!(eyink_energy_field, m)?)?;
    m.add_function(wrap_pyfunction!(eyink_helicity_field, m)?)?;
    m.add_function(wrap_pyfunction!(enstrophy_nonlocal_field, m)?)?;
    m.add_function(wrap_pyfunction!(random_spectrum_field, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
