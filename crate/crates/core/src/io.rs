//! Dual-matrix containers: a pair of CSV files `<name>.standard.csv` and
//! `<name>.infinitesimal.csv`, one matrix row per line.
//!
//! Entries are written as `a`, `a+bi` or `a-bi` with 17 significant digits,
//! which reads back bit-exactly. Complex matrices always carry the imaginary
//! token, so the element type survives a round trip.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Complex64, DualComplexMatrix, DualMatrix, DualRealMatrix, Entry};

pub const STANDARD_SUFFIX: &str = ".standard.csv";
pub const INFINITESIMAL_SUFFIX: &str = ".infinitesimal.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dtype {
    Real,
    Complex,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyDualMatrix {
    Real(DualRealMatrix),
    Complex(DualComplexMatrix),
}

impl AnyDualMatrix {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Self::Real(a) => a.shape(),
            Self::Complex(a) => a.shape(),
        }
    }

    pub fn dtype(&self) -> Dtype {
        match self {
            Self::Real(_) => Dtype::Real,
            Self::Complex(_) => Dtype::Complex,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixContainer {
    pub name: String,
    pub standard_path: PathBuf,
    pub infinitesimal_path: PathBuf,
    pub shape: (usize, usize),
    pub dtype: Dtype,
}

/// A plain matrix read from one CSV file.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

/// `prefix.standard.csv` and `prefix.infinitesimal.csv`.
pub fn container_paths(prefix: &Path) -> (PathBuf, PathBuf) {
    let s = prefix.as_os_str().to_string_lossy();
    (
        PathBuf::from(format!("{s}{STANDARD_SUFFIX}")),
        PathBuf::from(format!("{s}{INFINITESIMAL_SUFFIX}")),
    )
}

/// Accepts a directory holding exactly one container, either file of a
/// container, or the shared prefix.
pub fn resolve_container(path: &Path) -> Result<(String, PathBuf, PathBuf)> {
    let not_found = |msg: String| Error::Io(io::Error::new(io::ErrorKind::NotFound, msg));
    let prefix = if path.is_dir() {
        let mut found = Vec::new();
        for entry in fs::read_dir(path)? {
            let p = entry?.path();
            if let Some(name) = p.file_name().and_then(|n| n.to_str()) {
                if let Some(stem) = name.strip_suffix(STANDARD_SUFFIX) {
                    found.push(path.join(stem));
                }
            }
        }
        found.sort();
        match found.len() {
            1 => found.pop().expect("one element"),
            0 => return Err(not_found(format!("no *{STANDARD_SUFFIX} file in {}", path.display()))),
            n => {
                return Err(Error::Io(io::Error::new(
                    io::ErrorKind::InvalidInput,
                    format!("{} holds {n} containers; name one", path.display()),
                )))
            }
        }
    } else {
        let s = path.as_os_str().to_string_lossy();
        match s.strip_suffix(STANDARD_SUFFIX).or_else(|| s.strip_suffix(INFINITESIMAL_SUFFIX)) {
            Some(stem) => PathBuf::from(stem),
            None => path.to_path_buf(),
        }
    };
    let (sp, ip) = container_paths(&prefix);
    for p in [&sp, &ip] {
        if !p.is_file() {
            return Err(not_found(format!("container file {} not found", p.display())));
        }
    }
    let name = prefix
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok((name, sp, ip))
}

pub fn parse_container(path: &Path) -> Result<AnyDualMatrix> {
    open_container(path).map(|(_, a)| a)
}

pub fn open_container(path: &Path) -> Result<(MatrixContainer, AnyDualMatrix)> {
    let (name, sp, ip) = resolve_container(path)?;
    let (s, s_complex) = read_csv(&sp)?;
    let (i, i_complex) = read_csv(&ip)?;
    if s.shape() != i.shape() {
        return Err(Error::DimensionMismatch {
            op: "container parts",
            left: s.shape(),
            right: i.shape(),
        });
    }
    let matrix = if s_complex || i_complex {
        AnyDualMatrix::Complex(DualMatrix::new(s, i)?)
    } else {
        AnyDualMatrix::Real(DualMatrix::new(s.map(|z| z.re), i.map(|z| z.re))?)
    };
    let container = MatrixContainer {
        name,
        standard_path: sp,
        infinitesimal_path: ip,
        shape: matrix.shape(),
        dtype: matrix.dtype(),
    };
    Ok((container, matrix))
}

/// Writes both parts next to `prefix`, creating parent directories.
pub fn serialize_container<T: Entry>(a: &DualMatrix<T>, prefix: &Path) -> Result<MatrixContainer> {
    let (sp, ip) = container_paths(prefix);
    // render both before touching the disk so a refused entry leaves nothing behind
    let s = render_csv(a.standard())?;
    let i = render_csv(a.infinitesimal())?;
    if let Some(parent) = sp.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(&sp, s)?;
    fs::write(&ip, i)?;
    Ok(MatrixContainer {
        name: prefix
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        standard_path: sp,
        infinitesimal_path: ip,
        shape: a.shape(),
        dtype: if T::IS_COMPLEX { Dtype::Complex } else { Dtype::Real },
    })
}

pub fn read_matrix(path: &Path) -> Result<AnyMatrix> {
    let (m, complex) = read_csv(path)?;
    Ok(if complex {
        AnyMatrix::Complex(m)
    } else {
        AnyMatrix::Real(m.map(|z| z.re))
    })
}

pub fn write_matrix<T: Entry>(m: &DMatrix<T>, path: &Path) -> Result<()> {
    let text = render_csv(m)?;
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn render_csv<T: Entry>(m: &DMatrix<T>) -> Result<String> {
    let mut out = String::new();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)].to_complex();
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite { row: r, col: c });
            }
            if c > 0 {
                out.push(',');
            }
            out.push_str(&format_real(z.re));
            if T::IS_COMPLEX {
                out.push(if z.im.is_sign_negative() { '-' } else { '+' });
                out.push_str(&format_real(z.im.abs()));
                out.push('i');
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// 17 significant digits; zeros keep their sign as `0` / `-0`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let mut s = String::with_capacity(24);
    write!(s, "{x:.16e}").expect("writing to a String");
    s
}

/// Parses `a`, `a+bi`, `a-bi` or `bi`. The flag tells whether an imaginary
/// token was present.
pub fn parse_entry(token: &str) -> std::result::Result<(Complex64, bool), String> {
    let t = token.trim();
    if t.is_empty() {
        return Err("empty entry".into());
    }
    let real = |s: &str| -> std::result::Result<f64, String> {
        let v: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("non-finite value {s:?}"))
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok((Complex64::new(real(t)?, 0.0), false));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, real(&body[k..])?),
        None => (0.0, real(body)?),
    };
    Ok((Complex64::new(re, im), true))
}

fn read_csv(path: &Path) -> Result<(DMatrix<Complex64>, bool)> {
    let text = fs::read_to_string(path)?;
    let parse_err = |line: usize, column: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message,
    };
    let mut lines: Vec<&str> = text.lines().collect();
    while lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }
    if lines.is_empty() {
        return Err(parse_err(1, 1, "empty matrix".into()));
    }
    let mut data = Vec::new();
    let mut ncols = None;
    let mut complex = false;
    for (ln, line) in lines.iter().enumerate() {
        let mut count = 0;
        let mut col = 1;
        for field in line.split(',') {
            let (z, has_im) = parse_entry(field).map_err(|m| parse_err(ln + 1, col, m))?;
            complex |= has_im;
            data.push(z);
            count += 1;
            col += field.chars().count() + 1;
        }
        match ncols {
            None => ncols = Some(count),
            Some(n) if n != count => {
                return Err(parse_err(ln + 1, 1, format!("expected {n} entries, found {count}")));
            }
            _ => {}
        }
    }
    let n = ncols.expect("at least one line");
    Ok((DMatrix::from_row_slice(lines.len(), n, &data), complex))
}
