//! Weight tables for Kasami exponents and the `d = 13` case analysis.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::inv;
use crate::record::Record;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    /// `d = 57` (`k = 3`), odd `r` up to 17.
    Kasami3,
    /// `d = 241` (`k = 4`), `r` up to 23.
    Kasami4,
    /// `d = 993` (`k = 5`), odd `r` up to 29.
    Kasami5,
    /// `d = 13`: `Inv(r)` and the weight law for `n ≡ r (mod 12)`.
    Kasami13,
}

impl TableId {
    pub const ALL: [TableId; 4] = [TableId::Kasami3, TableId::Kasami4, TableId::Kasami5, TableId::Kasami13];

    pub fn name(self) -> &'static str {
        match self {
            TableId::Kasami3 => "2",
            TableId::Kasami4 => "3",
            TableId::Kasami5 => "4",
            TableId::Kasami13 => "kasami13",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown table `{s}` (expected 2, 3, 4 or kasami13)")))
    }
}

/// A rectangular table of strings with a title.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub id: TableId,
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Title line, then right-aligned columns separated by two spaces.
    pub fn to_text(&self) -> String {
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|c| {
                self.rows.iter().map(|r| r[c].len()).chain([self.columns[c].len()]).max().unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            let parts: Vec<String> =
                cells.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
            parts.join("  ")
        };
        let mut out = format!("# {}\n{}\n", self.title, line(&self.columns));
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }

    pub fn to_records(&self) -> Vec<Record> {
        self.rows
            .iter()
            .map(|r| {
                let mut rec = Record::new().with("table", self.id);
                for (k, v) in self.columns.iter().zip(r) {
                    rec.push(k.as_str(), v);
                }
                rec
            })
            .collect()
    }
}

fn kasami_d(k: u64) -> BigUint {
    (BigUint::from(1u32) << (2 * k)) - (BigUint::from(1u32) << k) + 1u32
}

fn weight_table(id: TableId, k: u64, rs: impl Iterator<Item = u64>) -> Result<Table> {
    let d = kasami_d(k);
    let rows = rs
        .map(|r| Ok(vec![r.to_string(), inv::invert(&d, r)?.weight().to_string()]))
        .collect::<Result<_>>()?;
    Ok(Table {
        id,
        title: format!("weights of Inv_{d}(r)"),
        columns: vec!["r".into(), "weight".into()],
        rows,
    })
}

/// `(n + c)/2` written out, where `c = 2 wt(Inv(r)) - r`.
fn weight_law(c: i64) -> String {
    match c {
        0 => "n/2".to_string(),
        c if c > 0 => format!("(n+{c})/2"),
        c => format!("(n-{})/2", -c),
    }
}

fn kasami13() -> Result<Table> {
    let d = BigUint::from(13u32);
    let mut rows = Vec::new();
    for r in 1..=11u64 {
        let res = inv::invert(&d, r)?;
        let s = inv::s_quantity(&d, r, &res.value)?;
        let w = res.weight();
        rows.push(vec![
            r.to_string(),
            res.value.to_string(),
            w.to_string(),
            (s.s - 1u32).to_string(),
            weight_law(2 * w as i64 - r as i64),
        ]);
    }
    Ok(Table {
        id: TableId::Kasami13,
        title: "Inv_13(r) and wt(Inv_13(n)) for n ≡ r (mod 12)".to_string(),
        columns: ["r", "inverse", "weight", "coefficient", "law"].map(String::from).to_vec(),
        rows,
    })
}

pub fn table(id: TableId) -> Result<Table> {
    match id {
        TableId::Kasami3 => weight_table(id, 3, (1..=17).step_by(2)),
        TableId::Kasami4 => weight_table(id, 4, 1..=23),
        TableId::Kasami5 => weight_table(id, 5, (1..=29).step_by(2)),
        TableId::Kasami13 => kasami13(),
    }
}
