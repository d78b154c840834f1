//! Knot records, tables and their JSONL form.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::based_matrix::BasedMatrix;
use crate::error::{Error, Result};
use crate::gauss::GaussDiagram;
use crate::moves::{diagram_key, SymmetryType};

/// Version of the JSONL layout written by [`Table::write_jsonl`].
pub const SCHEMA_VERSION: u32 = 1;

/// One row of a knot table: a flat knot up to symmetry, its minimal
/// diagram and its invariants. Expensive invariants are optional and
/// omitted from the JSONL form when they were not computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotRecord {
    pub name: String,
    pub crossings: usize,
    pub gauss_code: String,
    pub ou_word: String,
    pub matching: Vec<u32>,
    pub genus: usize,
    pub symmetry_type: char,
    pub checkerboard: bool,
    pub almost_classical: bool,
    pub u_poly: String,
    pub phi: Vec<i64>,
    pub based_matrix: BasedMatrix,
    pub primitive_based_matrix: BasedMatrix,
    pub inner_char: String,
    pub outer_char: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebraic_genus: Option<usize>,
    pub arrow_poly: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrow_cable2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrow_cable3_const: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jk: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jk_normalized: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jk_enhanced: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice_status: Option<String>,
}

impl KnotRecord {
    /// The stored minimal diagram.
    pub fn diagram(&self) -> Result<GaussDiagram> {
        GaussDiagram::parse(&self.gauss_code).map_err(|e| self.invalid(format!("gauss_code: {e}")))
    }

    pub fn symmetry(&self) -> Option<SymmetryType> {
        SymmetryType::from_letter(self.symmetry_type)
    }

    fn invalid(&self, msg: impl Into<String>) -> Error {
        Error::InvalidRecord { name: self.name.clone(), msg: msg.into() }
    }

    /// Checks the internal consistency of the record: the Gauss code
    /// parses to a knot whose canonical key is `(ou_word, matching)`, the
    /// crossing count and class flags agree with the diagram, and the
    /// matrices have the right shape.
    pub fn validate(&self) -> Result<()> {
        let d = self.diagram()?;
        if !d.is_knot() {
            return Err(self.invalid("gauss_code is not a knot"));
        }
        if d.n_arrows() != self.crossings {
            return Err(self.invalid(format!(
                "crossings is {} but gauss_code has {} arrows",
                self.crossings,
                d.n_arrows()
            )));
        }
        let key = diagram_key(&d);
        if key.ou_word() != self.ou_word || key.matching() != self.matching {
            return Err(self.invalid(format!(
                "gauss_code has key {key}, record says {} {:?}",
                self.ou_word, self.matching
            )));
        }
        if d.is_checkerboard_colorable() != self.checkerboard {
            return Err(self.invalid("checkerboard flag disagrees with the diagram"));
        }
        if d.is_almost_classical() != self.almost_classical {
            return Err(self.invalid("almost_classical flag disagrees with the diagram"));
        }
        if self.symmetry().is_none() {
            return Err(self.invalid(format!("unknown symmetry letter `{}`", self.symmetry_type)));
        }
        if self.based_matrix.size() != self.crossings + 1 || !self.based_matrix.is_skew() {
            return Err(self.invalid("based_matrix must be skew of size crossings + 1"));
        }
        if !self.primitive_based_matrix.is_skew() {
            return Err(self.invalid("primitive_based_matrix is not skew"));
        }
        Ok(())
    }
}

/// Header line of the JSONL form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableHeader {
    pub schema_version: u32,
    pub max_crossings: usize,
    /// Name prefix of the class: `""`, `"cc"` or `"ac"`.
    pub class: String,
    pub counts: BTreeMap<usize, usize>,
    pub generator: String,
}

/// An ordered list of knot records, sorted by crossing number and then
/// by name index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub max_crossings: usize,
    pub class: String,
    pub records: Vec<KnotRecord>,
}

impl Table {
    /// Number of records per crossing number.
    pub fn counts(&self) -> BTreeMap<usize, usize> {
        let mut c = BTreeMap::new();
        for r in &self.records {
            *c.entry(r.crossings).or_insert(0) += 1;
        }
        c
    }

    pub fn get(&self, name: &str) -> Option<&KnotRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn header(&self) -> TableHeader {
        TableHeader {
            schema_version: SCHEMA_VERSION,
            max_crossings: self.max_crossings,
            class: self.class.clone(),
            counts: self.counts(),
            generator: concat!("flatknot ", env!("CARGO_PKG_VERSION")).to_string(),
        }
    }

    /// Validates every record and checks that names are dense per
    /// crossing number (`n.1, n.2, ...` with the class prefix).
    pub fn validate(&self) -> Result<()> {
        let mut next: BTreeMap<usize, usize> = BTreeMap::new();
        for r in &self.records {
            r.validate()?;
            if r.crossings > self.max_crossings {
                return Err(Error::InvalidRecord {
                    name: r.name.clone(),
                    msg: format!("exceeds max_crossings {}", self.max_crossings),
                });
            }
            let k = next.entry(r.crossings).or_insert(0);
            *k += 1;
            let expected = format!("{}{}.{}", self.class, r.crossings, k);
            if r.name != expected {
                return Err(Error::InvalidRecord {
                    name: r.name.clone(),
                    msg: format!("expected name {expected}"),
                });
            }
        }
        Ok(())
    }

    pub fn write_jsonl(&self, mut w: impl Write) -> std::io::Result<()> {
        serde_json::to_writer(&mut w, &self.header())?;
        writeln!(w)?;
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }

    /// Reads and validates a table. Line numbers in errors are 1-based.
    pub fn read_jsonl(r: impl BufRead) -> Result<Table> {
        let mut lines = r.lines().enumerate();
        let malformed = |line: usize, msg: String| Error::MalformedLine { line: line + 1, msg };
        let header: TableHeader = match lines.next() {
            Some((i, line)) => {
                let line = line.map_err(|e| malformed(i, e.to_string()))?;
                serde_json::from_str(&line).map_err(|e| malformed(i, format!("header: {e}")))?
            }
            None => return Err(malformed(0, "empty input, expected a header line".into())),
        };
        if header.schema_version != SCHEMA_VERSION {
            return Err(malformed(
                0,
                format!("unsupported schema_version {}", header.schema_version),
            ));
        }
        let mut records = Vec::new();
        for (i, line) in lines {
            let line = line.map_err(|e| malformed(i, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            records.push(serde_json::from_str(&line).map_err(|e| malformed(i, e.to_string()))?);
        }
        let table = Table { max_crossings: header.max_crossings, class: header.class, records };
        table.validate()?;
        if table.counts() != header.counts {
            return Err(malformed(0, "header counts do not match the records".into()));
        }
        Ok(table)
    }

    pub fn from_jsonl(text: &str) -> Result<Table> {
        Table::read_jsonl(text.as_bytes())
    }
}
