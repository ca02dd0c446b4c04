//! Python bindings: `import agpv`.

use agpv_core::bench::run_bench as core_run_bench;
use agpv_core::glyphs::{
    db_from_images, glyph_candidate, render_corpus, render_glyph as core_render_glyph, GlyphStyle,
};
use agpv_core::matching::LABELS;
use agpv_core::{
    extract_candidates, load_pgm as core_load_pgm, recognize as core_recognize, save_pgm, BBox,
    CharCandidate, Error, Orientation,
};
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

type Rect = (usize, usize, usize, usize);

fn rect(b: BBox) -> Rect {
    (b.x, b.y, b.width, b.height)
}

/// 8-bit grayscale image.
#[pyclass(frozen, from_py_object, module = "agpv")]
#[derive(Clone)]
struct GrayImage(agpv_core::GrayImage);

#[pymethods]
impl GrayImage {
    /// Row-major pixels, `len(data) == width * height`.
    #[new]
    fn new(width: usize, height: usize, data: Vec<u8>) -> PyResult<Self> {
        agpv_core::GrayImage::from_raw(width, height, data)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn width(&self) -> usize {
        self.0.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.0.height()
    }

    fn pixels<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, self.0.data())
    }

    fn get(&self, x: usize, y: usize) -> PyResult<u8> {
        if x >= self.0.width() || y >= self.0.height() {
            return Err(PyValueError::new_err(format!(
                "({x}, {y}) outside the image"
            )));
        }
        Ok(self.0.get(x, y))
    }

    /// Binary PGM (P5) encoding.
    fn to_pgm<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &save_pgm(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("GrayImage({}x{})", self.0.width(), self.0.height())
    }
}

/// Every tunable threshold.
#[pyclass(from_py_object, module = "agpv")]
#[derive(Clone, Copy)]
struct Params(agpv_core::Params);

#[pymethods]
impl Params {
    #[new]
    #[pyo3(signature = (t_dog=None, th_f=None, th_rec=None, th_bin_div=None, octaves=None))]
    fn new(
        t_dog: Option<f64>,
        th_f: Option<f64>,
        th_rec: Option<f64>,
        th_bin_div: Option<f64>,
        octaves: Option<usize>,
    ) -> PyResult<Self> {
        let d = agpv_core::Params::default();
        let p = agpv_core::Params {
            t_dog: t_dog.unwrap_or(d.t_dog),
            th_f: th_f.unwrap_or(d.th_f),
            th_rec: th_rec.unwrap_or(d.th_rec),
            th_bin_div: th_bin_div.unwrap_or(d.th_bin_div),
            octaves: octaves.unwrap_or(d.octaves),
        };
        p.validate().map_err(to_py)?;
        Ok(Self(p))
    }

    #[getter]
    fn t_dog(&self) -> f64 {
        self.0.t_dog
    }

    #[getter]
    fn th_f(&self) -> f64 {
        self.0.th_f
    }

    #[getter]
    fn th_rec(&self) -> f64 {
        self.0.th_rec
    }

    #[getter]
    fn th_bin_div(&self) -> f64 {
        self.0.th_bin_div
    }

    #[getter]
    fn octaves(&self) -> usize {
        self.0.octaves
    }

    fn __repr__(&self) -> String {
        let p = &self.0;
        format!(
            "Params(t_dog={}, th_f={}, th_rec={}, th_bin_div={}, octaves={})",
            p.t_dog, p.th_f, p.th_rec, p.th_bin_div, p.octaves
        )
    }
}

fn params_or_default(p: Option<Params>) -> agpv_core::Params {
    p.map(|p| p.0).unwrap_or_default()
}

/// One connected DOG group.
#[pyclass(frozen, module = "agpv")]
struct Candidate(CharCandidate);

#[pymethods]
impl Candidate {
    #[getter]
    fn octave(&self) -> usize {
        self.0.octave
    }

    /// `"positive"` or `"negative"`.
    #[getter]
    fn polarity(&self) -> &'static str {
        self.0.polarity.as_str()
    }

    /// `(x, y, width, height)` in octave pixels.
    #[getter]
    fn bbox(&self) -> Rect {
        rect(self.0.bbox)
    }

    /// `(x, y, width, height)` in input pixels.
    #[getter]
    fn source_bbox(&self) -> Rect {
        rect(self.0.source_bbox)
    }

    #[getter]
    fn pixel_count(&self) -> usize {
        self.0.pixels.len()
    }

    #[getter]
    fn patch(&self) -> GrayImage {
        GrayImage(self.0.patch.clone())
    }

    fn __repr__(&self) -> String {
        format!(
            "Candidate(octave={}, polarity={}, source_bbox={})",
            self.0.octave,
            self.0.polarity.as_str(),
            self.0.source_bbox
        )
    }
}

/// Standard AGPVs of the 36 characters.
#[pyclass(frozen, module = "agpv")]
struct StandardDb(agpv_core::StandardDb);

#[pymethods]
impl StandardDb {
    /// Parse the text form written by `to_text`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        agpv_core::StandardDb::parse(text).map(Self).map_err(to_py)
    }

    /// Database of the built-in glyph corpus.
    #[staticmethod]
    #[pyo3(signature = (params=None))]
    fn builtin(params: Option<Params>) -> PyResult<Self> {
        let params = params_or_default(params);
        let corpus = render_corpus(&GlyphStyle::default(), 0.0).map_err(to_py)?;
        db_from_images(&corpus, &params).map(Self).map_err(to_py)
    }

    /// Database from `(label, image)` pairs, one clean glyph per label.
    #[staticmethod]
    #[pyo3(signature = (images, params=None))]
    fn from_images(images: Vec<(char, GrayImage)>, params: Option<Params>) -> PyResult<Self> {
        let images: Vec<_> = images.into_iter().map(|(l, i)| (l, i.0)).collect();
        db_from_images(&images, &params_or_default(params))
            .map(Self)
            .map_err(to_py)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn labels(&self) -> Vec<char> {
        self.0.chars().iter().map(|c| c.label).collect()
    }

    /// `(nature, augmented)` vector counts of one label.
    fn counts(&self, label: char) -> PyResult<(usize, usize)> {
        let c = self
            .0
            .get(label)
            .ok_or_else(|| PyValueError::new_err(format!("no label {label:?}")))?;
        Ok((c.nature_count(), c.augmented_count()))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

#[pyfunction]
fn load_pgm(data: &[u8]) -> PyResult<GrayImage> {
    core_load_pgm(data).map(GrayImage).map_err(to_py)
}

/// One built-in glyph on a 64x64 canvas, rotated clockwise by `degrees`.
#[pyfunction]
#[pyo3(signature = (label, degrees=0.0))]
fn render_glyph(label: char, degrees: f64) -> PyResult<GrayImage> {
    core_render_glyph(label, &GlyphStyle::default(), degrees.to_radians())
        .map(GrayImage)
        .map_err(to_py)
}

#[pyfunction]
fn labels() -> Vec<char> {
    LABELS.to_vec()
}

#[pyfunction]
#[pyo3(signature = (image, params=None))]
fn extract(image: &GrayImage, params: Option<Params>) -> PyResult<Vec<Candidate>> {
    let params = params_or_default(params);
    extract_candidates(&image.0, &params.extract())
        .map(|cs| cs.into_iter().map(Candidate).collect())
        .map_err(to_py)
}

fn recognize_one(
    c: &CharCandidate,
    db: &agpv_core::StandardDb,
    params: &agpv_core::Params,
    mode: Orientation,
) -> PyResult<(Option<char>, f64)> {
    match agpv_core::TestFeatures::from_candidate(c, params.th_bin_div) {
        Ok(t) => {
            let r = core_recognize(&t, db, mode, &params.matching()).map_err(to_py)?;
            Ok((r.label, r.cmc))
        }
        Err(Error::NoGradient | Error::EmptyPixelSet) => Ok((None, f64::INFINITY)),
        Err(e) => Err(to_py(e)),
    }
}

fn mode(known: bool) -> Orientation {
    if known {
        Orientation::Known
    } else {
        Orientation::Unknown
    }
}

/// `(label or None, cmc, source_bbox)` for every candidate of `image`.
#[pyfunction]
#[pyo3(signature = (image, db, known_orientation=false, params=None))]
fn recognize(
    image: &GrayImage,
    db: &StandardDb,
    known_orientation: bool,
    params: Option<Params>,
) -> PyResult<Vec<(Option<char>, f64, Rect)>> {
    let params = params_or_default(params);
    let cands = extract_candidates(&image.0, &params.extract()).map_err(to_py)?;
    cands
        .iter()
        .map(|c| {
            let (l, cmc) = recognize_one(c, &db.0, &params, mode(known_orientation))?;
            Ok((l, cmc, rect(c.source_bbox)))
        })
        .collect()
}

/// Label and cost of a single-glyph image, using its main ink candidate.
#[pyfunction]
#[pyo3(signature = (image, db, known_orientation=false, params=None))]
fn recognize_glyph(
    image: &GrayImage,
    db: &StandardDb,
    known_orientation: bool,
    params: Option<Params>,
) -> PyResult<(Option<char>, f64)> {
    let params = params_or_default(params);
    let cands = extract_candidates(&image.0, &params.extract()).map_err(to_py)?;
    match glyph_candidate(&cands) {
        Some(c) => recognize_one(c, &db.0, &params, mode(known_orientation)),
        None => Ok((None, f64::INFINITY)),
    }
}

/// Four-set benchmark on the built-in corpus; returns the CSV report.
#[pyfunction]
#[pyo3(signature = (seed=7, scenes=60, params=None))]
fn run_bench(py: Python<'_>, seed: u64, scenes: usize, params: Option<Params>) -> PyResult<String> {
    let params = params_or_default(params);
    py.detach(|| {
        let corpus = render_corpus(&GlyphStyle::default(), 0.0)?;
        let db = db_from_images(&corpus, &params)?;
        core_run_bench(&corpus, &db, &params, seed, scenes).map(|r| r.to_csv())
    })
    .map_err(to_py)
}

#[pymodule]
fn agpv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<GrayImage>()?;
    m.add_class::<Params>()?;
    m.add_class::<Candidate>()?;
    m.add_class::<StandardDb>()?;
    m.add_function(wrap_pyfunction!(load_pgm, m)?)?;
    m.add_function(wrap_pyfunction!(render_glyph, m)?)?;
    m.add_function(wrap_pyfunction!(labels, m)?)?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(recognize, m)?)?;
    m.add_function(wrap_pyfunction!(recognize_glyph, m)?)?;
    m.add_function(wrap_pyfunction!(run_bench, m)?)?;
    Ok(())
}
