//! Model-configuration files and the dense boundary-operator matrix format.
//!
//! Config files are plain sectioned key-value text:
//!
//! ```text
//! # comment
//! [geometry]
//! kind = disk_modes          # sl1d | rect2d | disk_modes
//! n_r = 64
//! mode_max = 32
//! radius = 1.0
//! gamma1_scale = 1.0         # optional fault-injection knob
//!
//! [coefficients]             # keys depend on the geometry kind
//! a = 1.0                    # constant, or comma-separated samples
//! a0 = 0.0
//!
//! [boundary_op]              # operator B (first operator of a Robin pair)
//! variant = multiplication   # multiplication | dense | fourier_decay
//! beta = 1.0
//!
//! [boundary_op2]             # second operator of a Robin/Robin pair
//! variant = fourier_decay
//! s = 1.0
//! amplitude = 1.0
//! offset = 0.0
//! ```
//!
//! Geometry keys per kind: `sl1d` takes `n`, `length` and coefficients `a`,
//! `a0`; `rect2d` takes `nx`, `ny`, `lx`, `ly` and coefficients `a11`, `a22`,
//! `a0` (constants only); `disk_modes` takes `n_r`, `mode_max`, `radius` and
//! no coefficients.  Unknown sections or keys are rejected.
//!
//! Boundary-operator keys per variant: `multiplication` takes `beta` (a
//! constant or one sample per boundary coordinate); `dense` takes `file`, a
//! path (relative to the config file) to a matrix in the format read by
//! [`read_dense_matrix`]; `fourier_decay` takes `s`, `amplitude`, `offset`.
//! Every variant accepts an optional `declared_s`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::models::{
    BetaSpec, BoundaryOpSpec, BoundaryOpVariant, Coeff, ModelConfig, ModelInstance,
};

/// A parsed configuration file: the model plus optional boundary operators
/// and fault-injection settings.
#[derive(Debug, Clone)]
pub struct FileConfig {
    pub model: ModelConfig,
    /// Scale applied to the Dirichlet trace after building (1 = faithful
    /// model; anything else deliberately breaks the Green identity).
    pub gamma1_scale: f64,
    /// `[boundary_op]` section, if present.
    pub boundary_op: Option<BoundaryOpSpec>,
    /// `[boundary_op2]` section, if present.
    pub boundary_op2: Option<BoundaryOpSpec>,
}

impl FileConfig {
    /// Build the model instance, applying the fault-injection scale.
    pub fn build_instance(&self) -> Result<ModelInstance> {
        let mut instance = self.model.build()?;
        if self.gamma1_scale != 1.0 {
            match &mut instance {
                ModelInstance::Dense(tr) => tr.scale_dirichlet_trace(self.gamma1_scale),
                ModelInstance::Modes(blocks) => {
                    for block in blocks {
                        block.triple.scale_dirichlet_trace(self.gamma1_scale);
                    }
                }
            }
        }
        Ok(instance)
    }
}

/// Read and parse a configuration file; relative `file =` paths resolve
/// against the config file's directory.
pub fn load_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config_str(&text, base)
}

/// One parsed section: ordered key-value pairs with duplicate detection.
struct Section {
    name: String,
    entries: BTreeMap<String, String>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<String> {
        self.take(key).ok_or_else(|| {
            Error::Config(format!("section [{}] is missing key `{}`", self.name, key))
        })
    }

    fn finish(self) -> Result<()> {
        if let Some(key) = self.entries.keys().next() {
            return Err(Error::Config(format!(
                "unknown key `{key}` in section [{}]",
                self.name
            )));
        }
        Ok(())
    }
}

fn parse_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| {
                Error::Config(format!("line {line_no}: malformed section header `{line}`"))
            })?;
            sections.push(Section {
                name: name.trim().to_string(),
                entries: BTreeMap::new(),
            });
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "line {line_no}: expected `key = value`, got `{line}`"
            ))
        })?;
        let section = sections.last_mut().ok_or_else(|| {
            Error::Config(format!(
                "line {line_no}: key `{}` appears before any section header",
                key.trim()
            ))
        })?;
        let key = key.trim().to_string();
        if section
            .entries
            .insert(key.clone(), value.trim().to_string())
            .is_some()
        {
            return Err(Error::Config(format!(
                "line {line_no}: duplicate key `{key}` in section [{}]",
                section.name
            )));
        }
    }
    Ok(sections)
}

fn parse_f64(name: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("`{name}` must be a number, got `{value}`")))
}

fn parse_usize(name: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| Error::Config(format!("`{name}` must be a non-negative integer, got `{value}`")))
}

/// A coefficient value: a single number, or a comma-separated sample list.
fn parse_coeff(name: &str, value: &str) -> Result<Coeff> {
    if value.contains(',') {
        let samples = value
            .split(',')
            .map(|v| parse_f64(name, v.trim()))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Coeff::Samples(samples))
    } else {
        Ok(Coeff::Const(parse_f64(name, value)?))
    }
}

fn parse_boundary_op(mut section: Section, base: &Path) -> Result<BoundaryOpSpec> {
    let declared_s = section
        .take("declared_s")
        .map(|v| parse_f64("declared_s", &v))
        .transpose()?;
    let variant = section.require("variant")?;
    let variant = match variant.as_str() {
        "multiplication" => {
            let beta = section.require("beta")?;
            match parse_coeff("beta", &beta)? {
                Coeff::Const(b) => BoundaryOpVariant::Multiplication(BetaSpec::Const(b)),
                Coeff::Samples(b) => BoundaryOpVariant::Multiplication(BetaSpec::Samples(b)),
            }
        }
        "dense" => {
            let file = section.require("file")?;
            let mut path = PathBuf::from(&file);
            if path.is_relative() {
                path = base.join(path);
            }
            BoundaryOpVariant::Dense(read_dense_matrix(&path)?)
        }
        "fourier_decay" => BoundaryOpVariant::FourierDecay {
            s: parse_f64("s", &section.require("s")?)?,
            amplitude: parse_f64("amplitude", &section.require("amplitude")?)?,
            offset: parse_f64("offset", &section.require("offset")?)?,
        },
        other => {
            return Err(Error::Config(format!(
                "unknown boundary-operator variant `{other}` \
                 (expected multiplication, dense, or fourier_decay)"
            )))
        }
    };
    section.finish()?;
    Ok(BoundaryOpSpec { variant, declared_s })
}

/// Parse configuration text; `base` anchors relative file references.
pub fn parse_config_str(text: &str, base: &Path) -> Result<FileConfig> {
    let mut geometry = None;
    let mut coefficients = None;
    let mut boundary_op = None;
    let mut boundary_op2 = None;
    for section in parse_sections(text)? {
        let slot = match section.name.as_str() {
            "geometry" => &mut geometry,
            "coefficients" => &mut coefficients,
            "boundary_op" => &mut boundary_op,
            "boundary_op2" => &mut boundary_op2,
            other => {
                return Err(Error::Config(format!(
                    "unknown section [{other}] (expected geometry, coefficients, \
                     boundary_op, boundary_op2)"
                )))
            }
        };
        if slot.is_some() {
            return Err(Error::Config(format!(
                "duplicate section [{}]",
                section.name
            )));
        }
        *slot = Some(section);
    }

    let mut geometry =
        geometry.ok_or_else(|| Error::Config("missing [geometry] section".into()))?;
    let gamma1_scale = geometry
        .take("gamma1_scale")
        .map(|v| parse_f64("gamma1_scale", &v))
        .transpose()?
        .unwrap_or(1.0);
    let kind = geometry.require("kind")?;

    let mut coeff = coefficients.unwrap_or(Section {
        name: "coefficients".into(),
        entries: BTreeMap::new(),
    });
    let coeff_or = |section: &mut Section, key: &str, default: f64| -> Result<Coeff> {
        match section.take(key) {
            Some(v) => parse_coeff(key, &v),
            None => Ok(Coeff::Const(default)),
        }
    };

    let model = match kind.as_str() {
        "sl1d" => {
            let n = parse_usize("n", &geometry.require("n")?)?;
            let length = parse_f64("length", &geometry.require("length")?)?;
            let a = coeff_or(&mut coeff, "a", 1.0)?;
            let a0 = coeff_or(&mut coeff, "a0", 0.0)?;
            ModelConfig::Sl1d { n, length, a, a0 }
        }
        "rect2d" => {
            let nx = parse_usize("nx", &geometry.require("nx")?)?;
            let ny = parse_usize("ny", &geometry.require("ny")?)?;
            let lx = parse_f64("lx", &geometry.require("lx")?)?;
            let ly = parse_f64("ly", &geometry.require("ly")?)?;
            let a11 = coeff_or(&mut coeff, "a11", 1.0)?;
            let a22 = coeff_or(&mut coeff, "a22", 1.0)?;
            let a0 = coeff_or(&mut coeff, "a0", 0.0)?;
            ModelConfig::Rect2d {
                nx,
                ny,
                lx,
                ly,
                a11,
                a22,
                a0,
            }
        }
        "disk_modes" => {
            let n_r = parse_usize("n_r", &geometry.require("n_r")?)?;
            let mode_max = parse_usize("mode_max", &geometry.require("mode_max")?)?;
            let radius = parse_f64("radius", &geometry.require("radius")?)?;
            ModelConfig::DiskModes {
                n_r,
                mode_max,
                radius,
            }
        }
        other => {
            return Err(Error::Config(format!(
                "unknown geometry kind `{other}` (expected sl1d, rect2d, disk_modes)"
            )))
        }
    };
    geometry.finish()?;
    coeff.finish()?;

    let boundary_op = boundary_op
        .map(|s| parse_boundary_op(s, base))
        .transpose()?;
    let boundary_op2 = boundary_op2
        .map(|s| parse_boundary_op(s, base))
        .transpose()?;

    Ok(FileConfig {
        model,
        gamma1_scale,
        boundary_op,
        boundary_op2,
    })
}

/// Read a dense complex matrix: a header line `rows cols`, then the matrix
/// entries row by row as `re im` pairs (whitespace- and line-break-agnostic
/// after the header).
pub fn read_dense_matrix(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_dense_matrix(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn parse_dense_matrix(text: &str) -> std::result::Result<CMatrix, String> {
    let mut lines = text.lines();
    let header = loop {
        match lines.next() {
            Some(line) => {
                let line = line.trim();
                if !line.is_empty() && !line.starts_with('#') {
                    break line;
                }
            }
            None => return Err("empty matrix file".into()),
        }
    };
    let mut dims = header.split_whitespace();
    let rows: usize = dims
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or("header must be `rows cols`")?;
    let cols: usize = dims
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or("header must be `rows cols`")?;
    if dims.next().is_some() {
        return Err("header must be exactly `rows cols`".into());
    }
    let mut values = Vec::with_capacity(rows * cols * 2);
    for line in lines {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        for tok in line.split_whitespace() {
            values.push(
                tok.parse::<f64>()
                    .map_err(|_| format!("non-numeric matrix entry `{tok}`"))?,
            );
        }
    }
    if values.len() != rows * cols * 2 {
        return Err(format!(
            "expected {} numbers ({rows}x{cols} re/im pairs), found {}",
            rows * cols * 2,
            values.len()
        ));
    }
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let at = 2 * (i * cols + j);
            m.set(i, j, Complex64::new(values[at], values[at + 1]));
        }
    }
    Ok(m)
}

/// Render a matrix in the same format (used by tooling and tests).
pub fn format_dense_matrix(m: &CMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for i in 0..m.rows() {
        let mut first = true;
        for j in 0..m.cols() {
            let z = m.get(i, j);
            if !first {
                out.push(' ');
            }
            let _ = write!(out, "{} {}", z.re, z.im);
            first = false;
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn parses_a_full_disk_config() {
        let text = "\
# decay ladder base
[geometry]
kind = disk_modes
n_r = 64
mode_max = 32
radius = 1.0

[boundary_op]
variant = fourier_decay
s = 1.0
amplitude = 1.0
offset = 1.0

[boundary_op2]
variant = multiplication
beta = 1.0
";
        let cfg = parse_config_str(text, Path::new(".")).unwrap();
        assert_eq!(
            cfg.model,
            ModelConfig::DiskModes {
                n_r: 64,
                mode_max: 32,
                radius: 1.0
            }
        );
        assert_eq!(cfg.gamma1_scale, 1.0);
        let b1 = cfg.boundary_op.unwrap();
        assert_eq!(b1.effective_declared_s(), Some(1.0));
        assert!(matches!(
            cfg.boundary_op2.unwrap().variant,
            BoundaryOpVariant::Multiplication(BetaSpec::Const(b)) if b == 1.0
        ));
    }

    #[test]
    fn parses_sampled_coefficients_and_fault_knob() {
        let text = "\
[geometry]
kind = sl1d
n = 4
length = 2.0
gamma1_scale = 1.5

[coefficients]
a = 1.0, 1.1, 1.2, 1.3
a0 = 0.5
";
        let cfg = parse_config_str(text, Path::new(".")).unwrap();
        assert_eq!(cfg.gamma1_scale, 1.5);
        match &cfg.model {
            ModelConfig::Sl1d { n, length, a, a0 } => {
                assert_eq!((*n, *length), (4, 2.0));
                assert_eq!(*a, Coeff::Samples(vec![1.0, 1.1, 1.2, 1.3]));
                assert_eq!(*a0, Coeff::Const(0.5));
            }
            other => panic!("unexpected {other:?}"),
        }
        // The fault knob must actually break the Green identity.
        let faulty = cfg.build_instance().unwrap();
        assert!(faulty.max_green_residual(8, 11) > 1e-3);
    }

    #[test]
    fn rejects_unknown_keys_sections_and_malformed_lines() {
        let base = Path::new(".");
        let bad_key = "[geometry]\nkind = sl1d\nn = 4\nlength = 1\nwat = 3\n";
        assert!(matches!(
            parse_config_str(bad_key, base),
            Err(Error::Config(msg)) if msg.contains("wat")
        ));
        let bad_section = "[geometry]\nkind = sl1d\nn = 4\nlength = 1\n[extras]\nx = 1\n";
        assert!(matches!(
            parse_config_str(bad_section, base),
            Err(Error::Config(msg)) if msg.contains("extras")
        ));
        let no_header = "kind = sl1d\n";
        assert!(matches!(
            parse_config_str(no_header, base),
            Err(Error::Config(msg)) if msg.contains("before any section")
        ));
        let missing = "[geometry]\nkind = rect2d\nnx = 5\nny = 5\nlx = 1\n";
        assert!(matches!(
            parse_config_str(missing, base),
            Err(Error::Config(msg)) if msg.contains("`ly`")
        ));
        let dup = "[geometry]\nkind = sl1d\nn = 4\nn = 5\nlength = 1\n";
        assert!(matches!(
            parse_config_str(dup, base),
            Err(Error::Config(msg)) if msg.contains("duplicate key")
        ));
    }

    #[test]
    fn dense_matrix_round_trips_and_validates() {
        let mut m = CMatrix::zeros(2, 3);
        m.set(0, 0, c64(1.0, -2.0));
        m.set(1, 2, c64(0.25, 3.5));
        let text = format_dense_matrix(&m);
        let back = parse_dense_matrix(&text).unwrap();
        assert_eq!(m, back);

        assert!(parse_dense_matrix("").is_err());
        assert!(parse_dense_matrix("2 2\n1 0 0 0\n").is_err());
        assert!(parse_dense_matrix("1 1\nx y\n").is_err());
    }
}
