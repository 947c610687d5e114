//! JSON, CSV, LaTeX and plain-text serialization of instances.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Domain, Entry, MrsInstance, MrsParams, PFArray};
use crate::error::{MrsError, Result};
use crate::group::FiniteAbelianGroup;

/// Output formats understood by [`export`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Json,
    Csv,
    Latex,
    Pretty,
}

impl FromStr for Format {
    type Err = MrsError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "latex" | "tex" => Ok(Format::Latex),
            "pretty" | "text" => Ok(Format::Pretty),
            other => Err(MrsError::InvalidInput(format!("unknown format {other:?}"))),
        }
    }
}

/// Serializes `inst` in the given format. `compact` only affects LaTeX,
/// where group elements are written as concatenated coordinates.
pub fn export(inst: &MrsInstance, format: Format, compact: bool) -> String {
    match format {
        Format::Json => to_json(inst),
        Format::Csv => to_csv(inst),
        Format::Latex => to_latex(inst, compact),
        Format::Pretty => to_pretty(inst),
    }
}

#[derive(Serialize, Deserialize)]
struct ArrayDoc {
    m: usize,
    n: usize,
    mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<FiniteAbelianGroup>,
    cells: Vec<Vec<Value>>,
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    params: MrsParams,
    mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<FiniteAbelianGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<Value>,
    arrays: Vec<ArrayDoc>,
}

fn entry_value(e: &Entry) -> Value {
    serde_json::to_value(e).expect("entries serialize")
}

fn array_doc(a: &PFArray) -> ArrayDoc {
    ArrayDoc {
        m: a.rows(),
        n: a.cols(),
        mode: a.domain().mode_name().to_string(),
        group: a.domain().group().cloned(),
        cells: (0..a.rows())
            .map(|i| a.row(i).iter().map(|c| c.as_ref().map_or(Value::Null, entry_value)).collect())
            .collect(),
    }
}

/// Compact JSON of the whole instance.
pub fn to_json(inst: &MrsInstance) -> String {
    let doc = InstanceDoc {
        params: inst.params(),
        mode: inst.domain().mode_name().to_string(),
        group: inst.domain().group().cloned(),
        omega: inst.omega().map(entry_value),
        delta: inst.delta().map(entry_value),
        arrays: inst.arrays().iter().map(array_doc).collect(),
    };
    serde_json::to_string(&doc).expect("instance serializes")
}

/// Compact JSON of one array.
pub fn array_to_json(a: &PFArray) -> String {
    serde_json::to_string(&array_doc(a)).expect("array serializes")
}

fn parse_domain(mode: &str, group: Option<FiniteAbelianGroup>) -> Result<Domain> {
    match (mode, group) {
        ("integer", None) => Ok(Domain::Integers),
        ("group", Some(g)) => Ok(Domain::Group(g)),
        ("group", None) => Err(MrsError::InvalidInput("group mode without a group".into())),
        ("integer", Some(_)) => Err(MrsError::InvalidInput("integer mode with a group".into())),
        (other, _) => Err(MrsError::InvalidInput(format!("unknown mode {other:?}"))),
    }
}

/// Reads one entry; group coordinates must already be reduced.
pub fn parse_entry(domain: &Domain, v: &Value) -> Result<Entry> {
    let bad = || MrsError::InvalidInput(format!("bad entry {v}"));
    match domain {
        Domain::Integers => v.as_i64().map(Entry::Int).ok_or_else(bad),
        Domain::Group(g) => {
            let coords = v.as_array().ok_or_else(bad)?;
            if coords.len() != g.rank() {
                return Err(bad());
            }
            let mut xs = Vec::with_capacity(coords.len());
            for (c, &d) in coords.iter().zip(g.factors()) {
                let x = c.as_u64().filter(|&x| x < d).ok_or_else(bad)?;
                xs.push(x as i64);
            }
            Ok(Entry::Elem(g.element(&xs)?))
        }
    }
}

fn array_from_doc(doc: ArrayDoc) -> Result<PFArray> {
    let domain = parse_domain(&doc.mode, doc.group)?;
    if doc.cells.len() != doc.m || doc.cells.iter().any(|r| r.len() != doc.n) {
        return Err(MrsError::ShapeError(format!("cells do not form a {}x{} grid", doc.m, doc.n)));
    }
    let cells: Result<Vec<Option<Entry>>> = doc
        .cells
        .iter()
        .flatten()
        .map(|v| if v.is_null() { Ok(None) } else { parse_entry(&domain, v).map(Some) })
        .collect();
    PFArray::from_cells(doc.m, doc.n, domain, cells?)
}

/// Parses an instance document, or a bare array document (one array whose
/// parameters are read off its first row and column).
pub fn from_json(text: &str) -> Result<MrsInstance> {
    let value: Value = serde_json::from_str(text).map_err(|e| MrsError::Parse(e.to_string()))?;
    if value.get("params").is_some() {
        let doc: InstanceDoc =
            serde_json::from_value(value).map_err(|e| MrsError::Parse(e.to_string()))?;
        let domain = parse_domain(&doc.mode, doc.group)?;
        let omega = doc.omega.as_ref().map(|v| parse_entry(&domain, v)).transpose()?;
        let delta = doc.delta.as_ref().map(|v| parse_entry(&domain, v)).transpose()?;
        let arrays: Result<Vec<PFArray>> = doc.arrays.into_iter().map(array_from_doc).collect();
        MrsInstance::new(doc.params, domain, arrays?)?.with_constants(omega, delta)
    } else {
        let doc: ArrayDoc =
            serde_json::from_value(value).map_err(|e| MrsError::Parse(e.to_string()))?;
        let a = array_from_doc(doc)?;
        let params = MrsParams::new(a.rows(), a.cols(), a.row_count(0), a.col_count(0), 1);
        MrsInstance::new(params, a.domain().clone(), vec![a])
    }
}

fn csv_entry(e: &Entry) -> String {
    match e {
        Entry::Int(v) => v.to_string(),
        Entry::Elem(g) => g.coords().iter().map(u64::to_string).collect::<Vec<_>>().join("|"),
    }
}

/// One line per array row, empty field for an empty cell, `x|y|z` for group
/// elements and a blank line between arrays.
pub fn to_csv(inst: &MrsInstance) -> String {
    let mut out = String::new();
    for (t, a) in inst.arrays().iter().enumerate() {
        if t > 0 {
            out.push('\n');
        }
        for i in 0..a.rows() {
            let fields: Vec<String> =
                a.row(i).iter().map(|c| c.as_ref().map_or_else(String::new, csv_entry)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
    }
    out
}

fn latex_entry(e: &Entry, compact: bool) -> String {
    match e {
        Entry::Int(v) => v.to_string(),
        Entry::Elem(g) => {
            let factors = g.group().factors();
            if compact {
                let sep = if factors.iter().all(|&d| d <= 10) { "" } else { "," };
                g.coords().iter().map(u64::to_string).collect::<Vec<_>>().join(sep)
            } else {
                let parts: Vec<String> = g
                    .coords()
                    .iter()
                    .zip(factors)
                    .map(|(x, d)| if *d < 10 { format!("[{x}]_{d}") } else { format!("[{x}]_{{{d}}}") })
                    .collect();
                if parts.len() == 1 {
                    parts.into_iter().next().unwrap()
                } else {
                    format!("({})", parts.join(","))
                }
            }
        }
    }
}

/// Display-math block with one ruled `array` per set member.
pub fn to_latex(inst: &MrsInstance, compact: bool) -> String {
    let mut out = String::from("$$");
    let count = inst.arrays().len();
    for (t, a) in inst.arrays().iter().enumerate() {
        let _ = writeln!(out, "\\begin{{array}}{{|{}}}\\hline", "c|".repeat(a.cols()));
        for i in 0..a.rows() {
            let fields: Vec<String> = a
                .row(i)
                .iter()
                .map(|c| c.as_ref().map_or_else(String::new, |e| latex_entry(e, compact)))
                .collect();
            let _ = writeln!(out, "{} \\\\\\hline", fields.join(" & "));
        }
        out.push_str("\\end{array}");
        out.push_str(if t + 1 < count { ",\\quad\n" } else { ".$$\n" });
    }
    if count == 0 {
        out.push_str("$$\n");
    }
    out
}

/// Human-readable listing with aligned columns and `.` for empty cells.
pub fn to_pretty(inst: &MrsInstance) -> String {
    let p = inst.params();
    let mut out = String::new();
    let over = inst.domain().group().map_or_else(|| "integers".to_string(), |g| g.to_string());
    let _ = writeln!(out, "MRS{} over {over}", p);
    if let Some(w) = inst.omega() {
        let _ = writeln!(out, "row sum {w}");
    }
    if let Some(d) = inst.delta() {
        let _ = writeln!(out, "column sum {d}");
    }
    for (t, a) in inst.arrays().iter().enumerate() {
        let cells: Vec<String> = a
            .cells()
            .iter()
            .map(|c| c.as_ref().map_or_else(|| ".".to_string(), Entry::to_string))
            .collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        let _ = writeln!(out, "\narray {}", t + 1);
        for row in cells.chunks(a.cols().max(1)) {
            let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            let _ = writeln!(out, "  {}", line.join(" "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_group_instance() -> MrsInstance {
        let g = FiniteAbelianGroup::new(&[2, 2]).unwrap();
        let d = Domain::Group(g.clone());
        let mut a = PFArray::new(2, 2, d.clone());
        a.set(0, 0, Some(g.element(&[1, 0]).unwrap().into())).unwrap();
        a.set(0, 1, Some(g.element(&[0, 1]).unwrap().into())).unwrap();
        a.set(1, 0, Some(g.element(&[1, 1]).unwrap().into())).unwrap();
        MrsInstance::new(MrsParams::new(2, 2, 2, 2, 1), d, vec![a]).unwrap()
    }

    #[test]
    fn json_roundtrip_is_byte_identical() {
        let inst = small_group_instance();
        let text = to_json(&inst);
        let back = from_json(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(to_json(&back), text);
        assert!(text.contains("\"cells\":[[[1,0],[0,1]],[[1,1],null]]"));
    }

    #[test]
    fn bare_array_document() {
        let inst = from_json(r#"{"m":1,"n":2,"mode":"integer","cells":[[1,2]]}"#).unwrap();
        assert_eq!(inst.params(), MrsParams::new(1, 2, 2, 1, 1));
        assert!(from_json(r#"{"m":1,"n":2,"mode":"group","cells":[[1,2]]}"#).is_err());
        let bad = r#"{"m":1,"n":1,"mode":"group","group":{"factors":[4]},"cells":[[[4]]]}"#;
        assert!(from_json(bad).is_err());
    }

    #[test]
    fn csv_has_one_empty_field_per_empty_cell() {
        let csv = to_csv(&small_group_instance());
        assert_eq!(csv, "1|0,0|1\n1|1,\n");
    }

    #[test]
    fn latex_layout() {
        let inst = small_group_instance();
        let tex = to_latex(&inst, true);
        assert_eq!(tex, "$$\\begin{array}{|c|c|}\\hline\n10 & 01 \\\\\\hline\n11 &  \\\\\\hline\n\\end{array}.$$\n");
        assert!(to_latex(&inst, false).contains("([1]_2,[0]_2)"));
        assert!(matches!("xml".parse::<Format>(), Err(MrsError::InvalidInput(_))));
    }
}
