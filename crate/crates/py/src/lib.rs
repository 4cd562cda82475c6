//! Python module `cartier_codes`.
//!
//! Build with `--features extension-module` and load the resulting shared
//! library as `cartier_codes`.

use std::sync::Arc;

use cartier_core::agc::{self, AgInstance, BoundReport};
use cartier_core::cartier::CartierCtx;
use cartier_core::codes::{Distance, LinearCode};
use cartier_core::curve::{self as cv, Differential, FuncElem, Place};
use cartier_core::ff::{self, Fe, FieldTower};
use cartier_core::goppa::{self, GoppaInstance};
use cartier_core::klein;
use cartier_core::polymat::Poly;
use cartier_core::text;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: cartier_core::Error) -> PyErr {
    match e {
        cartier_core::Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for cartier_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

/// A finite field `F_{p^m}`; elements are passed as strings such as `"w^2+1"`.
#[pyclass(frozen, name = "Field")]
struct PyField(ff::Field);

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, m = 1, modulus = None))]
    fn new(p: u32, m: u32, modulus: Option<Vec<u32>>) -> PyResult<Self> {
        Ok(PyField(ff::mk_field(p, m, modulus.as_deref()).py()?))
    }

    /// Parses a line like `field p=2 m=3 modulus=1,1,0,1 gen=w`.
    #[staticmethod]
    fn parse(line: &str) -> PyResult<Self> {
        Ok(PyField(text::parse_field(line).py()?))
    }

    #[getter]
    fn size(&self) -> u32 {
        self.0.size()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.0.p()
    }

    fn elements(&self) -> Vec<String> {
        self.0.elements().map(|a| self.0.format(a)).collect()
    }

    fn mul(&self, a: &str, b: &str) -> PyResult<String> {
        let (a, b) = (self.elem(a)?, self.elem(b)?);
        Ok(self.0.format(self.0.mul(a, b)))
    }

    fn add(&self, a: &str, b: &str) -> PyResult<String> {
        let (a, b) = (self.elem(a)?, self.elem(b)?);
        Ok(self.0.format(self.0.add(a, b)))
    }

    fn inv(&self, a: &str) -> PyResult<String> {
        Ok(self.0.format(self.0.inv(self.elem(a)?).py()?))
    }

    fn pth_root(&self, a: &str) -> PyResult<String> {
        Ok(self.0.format(self.0.pth_root(self.elem(a)?)))
    }

    /// `Tr(a)` down to the subfield of size `q`.
    fn trace(&self, a: &str, q: u64) -> PyResult<String> {
        let t = tower(&self.0, Some(q))?;
        Ok(t.base().format(t.trace_to_base(self.elem(a)?)))
    }

    fn __repr__(&self) -> String {
        self.0.describe()
    }
}

impl PyField {
    fn elem(&self, s: &str) -> PyResult<Fe> {
        text::parse_element(&self.0, s).py()
    }
}

fn tower(ext: &ff::Field, base_q: Option<u64>) -> PyResult<Arc<FieldTower>> {
    let p = ext.p() as u64;
    let q = base_q.unwrap_or(p);
    let a = (1..=ext.m()).find(|&a| p.pow(a) == q).filter(|a| ext.m().is_multiple_of(*a));
    let a = a.ok_or_else(|| PyValueError::new_err(format!("{q} is not a subfield size of F_{}", ext.size())))?;
    let base = if a == ext.m() { ext.clone() } else { ff::mk_field(ext.p(), a, None).py()? };
    Ok(Arc::new(FieldTower::new(&base, ext).py()?))
}

/// A linear code with a canonical generator matrix.
#[pyclass(frozen, name = "LinearCode")]
struct PyCode(LinearCode);

#[pymethods]
impl PyCode {
    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.0.field().size()
    }

    /// Exact minimum distance, `None` for the zero code.
    #[pyo3(signature = (budget = 1 << 24))]
    fn min_distance(&self, py: Python<'_>, budget: u128) -> PyResult<Option<u32>> {
        match py.detach(|| self.0.min_distance(budget)).py()? {
            Distance::Exact(d) => Ok(Some(d)),
            _ => Ok(None),
        }
    }

    /// `[n, k, d]_q`.
    #[pyo3(signature = (budget = 1 << 24))]
    fn params(&self, py: Python<'_>, budget: u128) -> String {
        py.detach(|| agc::params(&self.0, budget))
    }

    fn generator(&self) -> Vec<Vec<String>> {
        let k = self.0.field();
        self.0.generator().row_vecs().iter().map(|r| r.iter().map(|&a| k.format(a)).collect()).collect()
    }

    fn contains(&self, word: Vec<String>) -> PyResult<bool> {
        let k = self.0.field();
        let w = word.iter().map(|s| text::parse_element(k, s)).collect::<cartier_core::Result<Vec<_>>>().py()?;
        if w.len() != self.0.n() {
            return Err(PyValueError::new_err("word length differs from n"));
        }
        Ok(self.0.contains(&w))
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn to_bits(&self) -> PyResult<String> {
        self.0.to_bits().py()
    }

    fn __eq__(&self, o: &PyCode) -> bool {
        self.0 == o.0
    }

    fn __repr__(&self) -> String {
        format!("LinearCode(n={}, k={}, q={})", self.0.n(), self.0.k(), self.0.field().size())
    }
}

/// Result of a theorem or bound check.
#[pyclass(frozen, name = "Report")]
struct PyReport(BoundReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn holds(&self) -> bool {
        self.0.holds()
    }

    #[getter]
    fn title(&self) -> String {
        self.0.title.clone()
    }

    fn value(&self, name: &str) -> Option<String> {
        self.0.value(name).map(str::to_string)
    }

    fn checks(&self) -> Vec<(String, i64, String, i64, bool)> {
        self.0
            .checks
            .iter()
            .map(|c| (c.name.clone(), c.lhs, c.rel.symbol().to_string(), c.rhs, c.holds()))
            .collect()
    }

    fn __str__(&self) -> String {
        self.0.to_text()
    }
}

/// Classical Goppa code data `(L, f)` over a tower.
#[pyclass(frozen, name = "GoppaInstance")]
struct PyGoppa(GoppaInstance);

#[pymethods]
impl PyGoppa {
    /// `f` is given by its coefficients, low degree first.
    #[new]
    #[pyo3(signature = (field, support, f, base_q = None))]
    fn new(field: &PyField, support: Vec<String>, f: Vec<String>, base_q: Option<u64>) -> PyResult<Self> {
        let k = &field.0;
        let l = support.iter().map(|s| field.elem(s)).collect::<PyResult<Vec<_>>>()?;
        let c = f.iter().map(|s| field.elem(s)).collect::<PyResult<Vec<_>>>()?;
        Ok(PyGoppa(GoppaInstance::new(tower(k, base_q)?, l, Poly::new(k, c)).py()?))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn code(&self) -> PyResult<PyCode> {
        Ok(PyCode(goppa::goppa_code(&self.0).py()?))
    }

    /// Compares `Γ(L, f^(q-1))` and `Γ(L, f^q)`; requires squarefree `f`.
    fn check_identity(&self, py: Python<'_>) -> PyResult<(bool, usize, usize, i64)> {
        let r = py.detach(|| goppa::check_goppa_identity(&self.0, Some(1 << 20))).py()?;
        Ok((r.holds, r.k_lhs, r.k_rhs, r.designed_distance))
    }

    fn check_ag_example(&self, py: Python<'_>) -> PyResult<PyReport> {
        Ok(PyReport(py.detach(|| agc::check_example_goppa(&self.0)).py()?))
    }

    fn check_cartier(&self, py: Python<'_>) -> PyResult<PyReport> {
        Ok(PyReport(py.detach(|| agc::check_cartier_goppa(&self.0)).py()?))
    }
}

/// A smooth plane curve or the projective line.
#[pyclass(frozen, name = "Curve")]
struct PyCurve(cv::Curve);

#[pymethods]
impl PyCurve {
    /// Parses a line like `curve field=field p=2 m=3 poly=x^3*y + y^3*z + x*z^3`.
    #[staticmethod]
    fn parse(line: &str) -> PyResult<Self> {
        Ok(PyCurve(text::parse_curve(line).py()?))
    }

    #[staticmethod]
    fn klein() -> PyResult<Self> {
        Ok(PyCurve(klein::klein_quartic().py()?))
    }

    #[staticmethod]
    fn projective_line(field: &PyField) -> Self {
        PyCurve(cv::Curve::projective_line(&field.0))
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.0.genus()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField(self.0.field().clone())
    }

    fn rational_points(&self) -> PyResult<Vec<String>> {
        Ok(self.0.rational_points().py()?.iter().map(|p| self.0.format_place(p)).collect())
    }

    fn places_of_degree(&self, r: u32) -> PyResult<Vec<String>> {
        Ok(self.0.places_of_degree(r).py()?.iter().map(|p| self.0.format_place(p)).collect())
    }

    /// `(h0(G), h1(G))` for a divisor in text form.
    fn h0_h1(&self, divisor: &str) -> PyResult<(usize, usize)> {
        let g = text::parse_divisor(&self.0, divisor).py()?;
        Ok((self.0.h0(&g).py()?, self.0.h1(&g).py()?))
    }

    /// `C^iterate(h dx)` for a function given as a ratio `num / den` of forms.
    #[pyo3(signature = (num, den = "1", iterate = 1, base_q = None))]
    fn cartier(&self, num: &str, den: &str, iterate: u32, base_q: Option<u64>) -> PyResult<String> {
        let k = self.0.field();
        let a = text::parse_mpoly(k, num).py()?;
        let b = text::parse_mpoly(k, den).py()?;
        let h = FuncElem::from_forms(&self.0, &a, &b).py()?;
        let ctx = CartierCtx::new(&self.0, tower(k, base_q)?).py()?;
        let mut w = Differential::new(h);
        for _ in 0..iterate {
            w = ctx.cartier(&w).py()?;
        }
        Ok(w.format())
    }

    fn __repr__(&self) -> String {
        text::format_curve(&self.0)
    }
}

/// AG code data: curve, evaluation places `D`, divisor `G`, base field.
#[pyclass(frozen, name = "AgInstance")]
struct PyAg(AgInstance);

#[pymethods]
impl PyAg {
    /// `D` defaults to all rational points outside the support of `G`.
    #[new]
    #[pyo3(signature = (curve, g, d = None, base_q = None))]
    fn new(curve: &PyCurve, g: &str, d: Option<Vec<String>>, base_q: Option<u64>) -> PyResult<Self> {
        let c = &curve.0;
        let g = text::parse_divisor(c, g).py()?;
        let d: Vec<Place> = match d {
            Some(d) => d.iter().map(|s| text::parse_place(c, s)).collect::<cartier_core::Result<_>>().py()?,
            None => c.rational_points().py()?.into_iter().filter(|p| g.coeff(p) == 0).collect(),
        };
        Ok(PyAg(AgInstance::new(c, d, g, tower(c.field(), base_q)?).py()?))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn c_omega(&self, py: Python<'_>) -> PyResult<PyCode> {
        Ok(PyCode(py.detach(|| agc::c_omega(&self.0)).py()?))
    }

    fn subfield_code(&self, py: Python<'_>) -> PyResult<PyCode> {
        Ok(PyCode(py.detach(|| agc::subfield_code(&self.0)).py()?))
    }

    fn cartier_code(&self, py: Python<'_>) -> PyResult<PyCode> {
        Ok(PyCode(py.detach(|| agc::cartier_code(&self.0)).py()?))
    }

    fn check_equality(&self, py: Python<'_>) -> PyResult<PyReport> {
        Ok(PyReport(py.detach(|| agc::check_equality_theorem(&self.0)).py()?))
    }

    fn check_codim(&self, py: Python<'_>, g1: &str) -> PyResult<PyReport> {
        let g1 = text::parse_divisor(&self.0.curve, g1).py()?;
        Ok(PyReport(py.detach(|| agc::check_codim_theorem(&self.0, &g1)).py()?))
    }

    #[pyo3(signature = (g1 = None))]
    fn check_bounds(&self, py: Python<'_>, g1: Option<&str>) -> PyResult<PyReport> {
        let g1 = g1.map(|s| text::parse_divisor(&self.0.curve, s)).transpose().py()?;
        Ok(PyReport(py.detach(|| agc::check_bounds(&self.0, g1.as_ref())).py()?))
    }
}

/// Parameters of the four Klein quartic codes, keyed by name.
#[pyfunction]
fn klein_codes(py: Python<'_>) -> PyResult<Vec<(String, String)>> {
    py.detach(|| {
        let s = klein::setup()?;
        let t = Arc::new(FieldTower::new(&ff::mk_field(2, 1, None)?, s.curve.field())?);
        let d: Vec<Place> = s.d.support().cloned().collect();
        let mut out = Vec::new();
        for (tag, g) in [("G0-G-", s.g0.sub(&s.g_minus)), ("2G0-G-", s.g0.scale(2).sub(&s.g_minus))] {
            let inst = AgInstance::new(&s.curve, d.clone(), g, t.clone())?;
            out.push((format!("Car_2(D,{tag})"), agc::params(&agc::cartier_code(&inst)?, 1 << 20)));
            out.push((format!("C_Omega(D,{tag})|F_2"), agc::params(&agc::subfield_code(&inst)?, 1 << 20)));
        }
        Ok(out)
    })
    .py()
}

#[pymodule]
fn cartier_codes(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyCode>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyGoppa>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PyAg>()?;
    m.add_function(wrap_pyfunction!(klein_codes, m)?)?;
    Ok(())
}
