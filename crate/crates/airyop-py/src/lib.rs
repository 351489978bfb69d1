use pyo3::prelude::*;

#[pymodule]
fn airyop_py(_m: &Bound<'_, PyModule>) -> PyResult<()> { Ok(()) }
