//! File formats: matrix and sequence CSV, and the JSON reports.
//!
//! Every real number is written with 17 significant digits so that a value
//! read back is bit-identical to the one written. Output is a pure function
//! of its input: no timestamps, no hash-ordered maps.

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};
use serde_json::{json, Value};

use crate::flows::{FlowDecomposition, InitialConditions, RecursionReport};
use crate::linalg::{Group, SpectralClassification};
use crate::oracles::SubexponentialReport;
use crate::seq::TimeWindowSequence;
use crate::{Error, Matrix, Result, Tolerances};

pub const SCHEMA_VERSION: u32 = 1;

/// `x` with 17 significant digits in exponent notation; `-0` prints as `0`.
pub fn format_real(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn parse_real(field: &str, what: &str) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::Input(format!("{what}: '{field}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Input(format!("{what}: '{field}' is not finite")));
    }
    Ok(v)
}

fn csv_records(text: &str, headers: bool) -> Result<(Option<Vec<String>>, Vec<Vec<String>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(headers)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = if headers {
        let h = rdr.headers().map_err(|e| Error::Input(format!("csv header: {e}")))?;
        Some(h.iter().map(str::to_owned).collect())
    } else {
        None
    };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Input(format!("csv: {e}")))?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        rows.push(rec.iter().map(str::to_owned).collect());
    }
    Ok((header, rows))
}

/// N rows of N comma-separated reals.
pub fn parse_matrix_csv(text: &str) -> Result<Matrix> {
    let (_, rows) = csv_records(text, false)?;
    let n = rows.len();
    if n == 0 {
        return Err(Error::Input("matrix csv is empty".into()));
    }
    let mut data = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Input(format!(
                "matrix csv row {} has {} values, expected {n}",
                i + 1,
                row.len()
            )));
        }
        for (j, f) in row.iter().enumerate() {
            data.push(parse_real(f, &format!("matrix entry ({}, {})", i + 1, j + 1))?);
        }
    }
    Matrix::from_real(&DMatrix::from_row_slice(n, n, &data))
}

pub fn format_matrix_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format_real(m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Header `t,v1,...,vN`, then one row per consecutive time; the window must contain 0.
pub fn parse_sequence_csv(text: &str) -> Result<TimeWindowSequence> {
    let (header, rows) = csv_records(text, true)?;
    let header = header.unwrap_or_default();
    if header.first().map(String::as_str) != Some("t") {
        return Err(Error::Input("sequence csv header must start with 't'".into()));
    }
    let dim = header.len() - 1;
    if dim == 0 {
        return Err(Error::Input("sequence csv has no value columns".into()));
    }
    for (k, name) in header.iter().enumerate().skip(1) {
        if *name != format!("v{k}") {
            return Err(Error::Input(format!(
                "sequence csv column {} is '{name}', expected 'v{k}'",
                k + 1
            )));
        }
    }
    if rows.is_empty() {
        return Err(Error::Input("sequence csv has no rows".into()));
    }
    let mut t_min = 0;
    let mut values = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim + 1 {
            return Err(Error::Input(format!(
                "sequence csv row {} has {} fields, expected {}",
                i + 2,
                row.len(),
                dim + 1
            )));
        }
        let t: i64 = row[0]
            .parse()
            .map_err(|_| Error::Input(format!("sequence csv row {}: bad time '{}'", i + 2, row[0])))?;
        if i == 0 {
            t_min = t;
        } else if t != t_min + i as i64 {
            return Err(Error::Input(format!(
                "sequence csv times must be consecutive: expected {} at row {}, found {t}",
                t_min + i as i64,
                i + 2
            )));
        }
        let v = row[1..]
            .iter()
            .map(|f| parse_real(f, &format!("sequence value at t = {t}")))
            .collect::<Result<Vec<f64>>>()?;
        values.push(DVector::from_vec(v));
    }
    TimeWindowSequence::from_real(t_min, values)
}

/// Writes the real parts; fails if the sequence is not flagged real.
pub fn format_sequence_csv(s: &TimeWindowSequence) -> Result<String> {
    if !s.is_real() {
        return Err(Error::Input("only real sequences can be written as csv".into()));
    }
    let mut out = String::from("t");
    for k in 1..=s.dim() {
        out.push_str(&format!(",v{k}"));
    }
    out.push('\n');
    for (t, row) in s.times().zip(s.real_rows()) {
        out.push_str(&t.to_string());
        for x in row {
            out.push(',');
            out.push_str(&format_real(x));
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Deserialize)]
struct InitialConditionsFile {
    v_forward: Vec<f64>,
    v_backward: Vec<f64>,
    v_outward: Vec<f64>,
}

/// `{"v_forward": [...], "v_backward": [...], "v_outward": [...]}`
pub fn parse_initial_conditions(text: &str) -> Result<InitialConditions> {
    let f: InitialConditionsFile =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("initial conditions: {e}")))?;
    let n = f.v_forward.len();
    if f.v_backward.len() != n || f.v_outward.len() != n {
        return Err(Error::Input(
            "initial conditions: v_forward, v_backward and v_outward must have equal length".into(),
        ));
    }
    if f.v_forward.iter().chain(&f.v_backward).chain(&f.v_outward).any(|x| !x.is_finite()) {
        return Err(Error::Input("initial conditions must be finite".into()));
    }
    Ok(InitialConditions {
        v_forward: DVector::from_vec(f.v_forward),
        v_backward: DVector::from_vec(f.v_backward),
        v_outward: DVector::from_vec(f.v_outward),
    })
}

pub fn initial_conditions_json(ic: &InitialConditions) -> Value {
    json!({
        "v_forward": ic.v_forward.as_slice(),
        "v_backward": ic.v_backward.as_slice(),
        "v_outward": ic.v_outward.as_slice(),
    })
}

pub fn tolerances_json(tol: &Tolerances) -> Value {
    json!({
        "tol_unit": tol.unit,
        "tol_cluster": tol.cluster,
        "tol_proj": tol.proj,
        "tol_nilp": tol.nilp,
        "tol_drazin": tol.drazin,
        "tol_imag": tol.imag,
        "tol_flow": tol.flow,
        "tol_trunc": tol.trunc,
    })
}

fn group_name(g: Group) -> &'static str {
    match g {
        Group::Zero => "zero",
        Group::Forward => "forward",
        Group::Backward => "backward",
        Group::Unit => "unit",
    }
}

/// Classification report: one entry per eigenvalue cluster plus Θ.
pub fn classification_json(class: &SpectralClassification, tol: &Tolerances) -> Value {
    let eigenvalues: Vec<Value> = class
        .clusters
        .iter()
        .zip(&class.groups)
        .map(|(c, g)| {
            json!({
                "re": c.value.re,
                "im": c.value.im,
                "multiplicity": c.algebraic_multiplicity,
                "index": c.index,
                "group": group_name(*g),
            })
        })
        .collect();
    json!({
        "eigenvalues": eigenvalues,
        "frequencies": class.frequencies(),
        "unit_margin": class.unit_margin,
        "unit_deviation": class.unit_deviation,
        "tolerances": tolerances_json(tol),
    })
}

pub fn recursion_json(rep: &RecursionReport, tolerance: f64) -> Value {
    json!({
        "max_residual": rep.max_residual,
        "at": rep.at,
        "tolerance": tolerance,
        "satisfied": rep.max_residual <= tolerance,
    })
}

/// `{schema_version, initial_conditions, residual_report, classification, tolerances}`
pub fn summary_json(dec: &FlowDecomposition) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "initial_conditions": initial_conditions_json(&dec.initial),
        "residual_report": dec.residual_report,
        "classification": classification_json(&dec.classification, &dec.tolerances),
        "tolerances": tolerances_json(&dec.tolerances),
    })
}

pub fn diagnostic_json(rep: &SubexponentialReport) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "diagnostic": rep,
    })
}

pub fn error_json(e: &Error) -> Value {
    let mut obj = json!({
        "kind": e.kind(),
        "exit_code": e.exit_code(),
        "message": e.to_string(),
    });
    match e {
        Error::Recursion { t, residual, tolerance } => {
            obj["t"] = json!(t);
            obj["residual"] = json!(residual);
            obj["tolerance"] = json!(tolerance);
        }
        Error::Numeric { residual: Some(r), .. } => obj["residual"] = json!(r),
        Error::ConjugatePairing { residue, tolerance } => {
            obj["residue"] = json!(residue);
            obj["tolerance"] = json!(tolerance);
        }
        Error::Inconsistency { discrepancy, .. } => obj["discrepancy"] = json!(discrepancy),
        _ => {}
    }
    json!({ "error": obj })
}

/// Pretty printer whose floats carry 17 significant digits.
struct Sig17<'a>(PrettyFormatter<'a>);

impl Formatter for Sig17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        if value.is_finite() {
            w.write_all(format_real(value).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with a trailing newline and 17-digit floats.
pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, Sig17(PrettyFormatter::new()));
    serde::Serialize::serialize(v, &mut ser).expect("serializing a json value cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("json output is utf-8")
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    parse_matrix_csv(&read_to_string(path)?)
}

pub fn read_sequence(path: &Path) -> Result<TimeWindowSequence> {
    parse_sequence_csv(&read_to_string(path)?)
}
