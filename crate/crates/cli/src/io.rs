//! Matrix file I/O and deterministic JSON emission.

use fanmaj::{Error, HermitianMatrix, Mat};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// On-disk matrix format: dimension plus real and (optional) imaginary
/// parts as d x d row-major arrays.
#[derive(Serialize, Deserialize)]
pub struct MatrixFile {
    pub d: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixFile {
    pub fn from_matrix(h: &HermitianMatrix) -> Self {
        let d = h.dim();
        let m = h.mat();
        let re = (0..d)
            .map(|i| (0..d).map(|j| m[(i, j)].re).collect())
            .collect();
        let im: Vec<Vec<f64>> = (0..d)
            .map(|i| (0..d).map(|j| m[(i, j)].im).collect())
            .collect();
        let all_real = im.iter().flatten().all(|&x| x == 0.0);
        MatrixFile {
            d,
            re,
            im: if all_real { None } else { Some(im) },
        }
    }

    pub fn to_matrix(&self) -> Result<HermitianMatrix, Error> {
        let d = self.d;
        let check_shape = |rows: &Vec<Vec<f64>>| -> bool {
            rows.len() == d && rows.iter().all(|r| r.len() == d)
        };
        if !check_shape(&self.re) || self.im.as_ref().is_some_and(|im| !check_shape(im)) {
            return Err(Error::NotSquare {
                rows: self.re.len(),
                cols: self.re.first().map_or(0, |r| r.len()),
            });
        }
        let m = Mat::from_fn(d, d, |i, j| {
            Complex64::new(
                self.re[i][j],
                self.im.as_ref().map_or(0.0, |im| im[i][j]),
            )
        });
        HermitianMatrix::new(m)
    }
}

pub fn load_matrix(path: &Path) -> Result<HermitianMatrix, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| format!("cannot parse {}: {e}", path.display()))?;
    file.to_matrix()
        .map_err(|e| format!("{} is not a valid Hermitian matrix: {e}", path.display()))
}

/// Floats are emitted with 17 significant digits so that reports are
/// byte-identical across runs and decode to the exact same f64.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("\"{x}\"")
    }
}

/// A minimal JSON emitter with deterministic float formatting. serde_json
/// is used for parsing; emission goes through this to pin the byte format.
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<Json>),
    /// Key order is preserved as given.
    Object(Vec<(String, Json)>),
}

impl Json {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => out.push_str(&i.to_string()),
            Json::Float(x) => out.push_str(&fmt_f64(*x)),
            Json::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Array(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Object(fields) => {
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    Json::Str(key.clone()).write(out);
                    out.push(':');
                    value.write(out);
                }
                out.push('}');
            }
        }
    }

    pub fn floats(xs: &[f64]) -> Json {
        Json::Array(xs.iter().map(|&x| Json::Float(x)).collect())
    }
}
