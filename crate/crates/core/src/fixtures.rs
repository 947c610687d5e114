//! Explicit arrays shipped with the crate: complete example instances and the
//! parametric header rows used by the `r x 8` base cases.

use serde::Deserialize;

use crate::array::{io, Domain, Entry, MrsInstance, PFArray};
use crate::construct::BaseCaseKind;
use crate::error::{MrsError, Result};
use crate::group::FiniteAbelianGroup;

macro_rules! fixture_file {
    ($name:literal) => {
        ($name, include_str!(concat!("../data/fixtures/", $name, ".json")))
    };
}

/// Complete instances, by file stem.
pub const INSTANCES: &[(&str, &str)] = &[
    fixture_file!("mr_3_5"),
    fixture_file!("base_z12_z4_r3"),
    fixture_file!("base_z6_z8_r3"),
    fixture_file!("base_z6_z2_z4_r3"),
    fixture_file!("diagonal_z4_z8_n4_k2_c4"),
    fixture_file!("gcd_z8_z3_m6_n3_s2_k4_c2"),
    fixture_file!("diagonal_z4_z4_z2_n8_k4_c1"),
    fixture_file!("diagonal_z6_z2_z4_n6_k4_c2"),
];

/// Header rows for the four base-case kinds, by file stem.
pub const HEADERS: &[(&str, &str)] = &[
    fixture_file!("header_z4z4"),
    fixture_file!("header_z2z8"),
    fixture_file!("header_z2z2z4"),
    fixture_file!("header_z2z2z2z2"),
];

/// The one header cell whose printed source carries a wrong modulus on its
/// last coordinate: `([2]_{2r},[1]_2,[1]_2)` in a group whose last factor is
/// `Z_4`. It is stored as `[1]_4`, the only reading under which the header
/// rows cover `A x (Z_2 + Z_4)` exactly.
pub const HEADER_Z2Z2Z4_CORRECTED_CELL: HeaderCellRef =
    HeaderCellRef { kind: BaseCaseKind::Z2Z2Z4, array: 0, row: 3, col: 4 };

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeaderCellRef {
    pub kind: BaseCaseKind,
    pub array: usize,
    pub row: usize,
    pub col: usize,
}

pub fn instance_names() -> impl Iterator<Item = &'static str> {
    INSTANCES.iter().map(|(n, _)| *n)
}

/// Raw JSON text of a shipped file (instance or header) by stem.
pub fn raw(name: &str) -> Option<&'static str> {
    INSTANCES.iter().chain(HEADERS).find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a shipped complete instance.
pub fn instance(name: &str) -> Result<MrsInstance> {
    let text = INSTANCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| MrsError::InvalidInput(format!("no fixture named {name:?}")))?;
    io::from_json(text)
}

/// Evaluates `ar+b` style expressions (`"0"`, `"r"`, `"2r-2"`, `"3r+1"`).
pub fn eval_affine(expr: &str, r: i64) -> Result<i64> {
    let bad = || MrsError::Parse(format!("bad expression {expr:?}"));
    let e = expr.trim();
    let Some(pos) = e.find('r') else {
        return e.parse().map_err(|_| bad());
    };
    let coef = match &e[..pos] {
        "" => 1,
        c => c.parse::<i64>().map_err(|_| bad())?,
    };
    let rest = &e[pos + 1..];
    let offset = match rest.chars().next() {
        None => 0,
        Some('+') => rest[1..].parse::<i64>().map_err(|_| bad())?,
        Some('-') => -rest[1..].parse::<i64>().map_err(|_| bad())?,
        _ => return Err(bad()),
    };
    Ok(coef * r + offset)
}

#[derive(Deserialize)]
struct HeaderDoc {
    kind: String,
    cyclic: String,
    tail: Vec<u64>,
    a_set: Vec<String>,
    arrays: Vec<Vec<Vec<Vec<serde_json::Value>>>>,
}

/// Parametric header rows of one base-case kind.
#[derive(Clone, Debug)]
pub struct Header {
    pub kind: BaseCaseKind,
    cyclic: String,
    tail: Vec<u64>,
    a_set: Vec<String>,
    arrays: Vec<Vec<Vec<(String, Vec<u64>)>>>,
}

/// A header instantiated at a concrete `r`.
#[derive(Clone, Debug)]
pub struct HeaderRows {
    pub group: FiniteAbelianGroup,
    /// Residues of the first coordinate used by the header rows.
    pub first_coords: Vec<u64>,
    pub arrays: Vec<PFArray>,
}

pub fn header(kind: BaseCaseKind) -> Header {
    let stem = format!("header_{}", kind.name());
    let text = raw(&stem).expect("every kind ships a header");
    Header::from_json(text).expect("shipped header parses")
}

impl Header {
    /// Parses a header document in the shipped format.
    pub fn from_json(text: &str) -> Result<Header> {
        let doc: HeaderDoc = serde_json::from_str(text).map_err(|e| MrsError::Parse(e.to_string()))?;
        let kind = BaseCaseKind::from_name(&doc.kind)
            .ok_or_else(|| MrsError::Parse(format!("unknown header kind {:?}", doc.kind)))?;
        let mut arrays = Vec::with_capacity(doc.arrays.len());
        for a in doc.arrays {
            let mut rows = Vec::with_capacity(a.len());
            for row in a {
                let mut cells = Vec::with_capacity(row.len());
                for cell in row {
                    let (first, tail) = cell.split_first().ok_or_else(|| MrsError::Parse("empty header cell".into()))?;
                    let expr = match first {
                        serde_json::Value::String(s) => s.clone(),
                        v => v.to_string(),
                    };
                    let tail = tail
                        .iter()
                        .map(|x| x.as_u64().ok_or_else(|| MrsError::Parse(format!("bad coordinate {x}"))))
                        .collect::<Result<_>>()?;
                    cells.push((expr, tail));
                }
                rows.push(cells);
            }
            arrays.push(rows);
        }
        Ok(Header { kind, cyclic: doc.cyclic, tail: doc.tail, a_set: doc.a_set, arrays })
    }

    pub fn rows(&self) -> usize {
        self.arrays.first().map_or(0, Vec::len)
    }

    pub fn instantiate(&self, r: u64) -> Result<HeaderRows> {
        let r = r as i64;
        let cyc = eval_affine(&self.cyclic, r)? as u64;
        let mut factors = vec![cyc];
        factors.extend(&self.tail);
        let group = FiniteAbelianGroup::new(&factors)?;
        let mut first_coords: Vec<u64> = self
            .a_set
            .iter()
            .map(|e| eval_affine(e, r).map(|v| crate::num::rem(v, cyc)))
            .collect::<Result<_>>()?;
        first_coords.sort_unstable();
        first_coords.dedup();
        let domain = Domain::Group(group.clone());
        let mut arrays = Vec::with_capacity(self.arrays.len());
        for a in &self.arrays {
            let mut rows = Vec::with_capacity(a.len());
            for row in a {
                let mut cells = Vec::with_capacity(row.len());
                for (e, tail) in row {
                    let mut coords = vec![eval_affine(e, r)?];
                    coords.extend(tail.iter().map(|&x| x as i64));
                    cells.push(Some(Entry::Elem(group.element(&coords)?)));
                }
                rows.push(cells);
            }
            arrays.push(PFArray::from_rows(domain.clone(), rows)?);
        }
        Ok(HeaderRows { group, first_coords, arrays })
    }
}
