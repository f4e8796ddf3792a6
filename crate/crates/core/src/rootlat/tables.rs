//! Tabulated classification results with JSON and text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::closure::closure_of_rank;
use super::fibers::{complement_types, fibered_configs};
use super::types::{AffineType, RootSystemType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RowKey {
    Rank(u32),
    Affine(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub key: RowKey,
    pub types: Vec<RootSystemType>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub table: String,
    pub rows: Vec<TableRow>,
}

impl Table {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    /// One line per row, exponent notation, `none` for empty rows.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for row in &self.rows {
            let key = match &row.key {
                RowKey::Rank(r) => format!("rank {r}"),
                RowKey::Affine(a) => {
                    let label = a.parse::<AffineType>().map(|t| t.painleve_label()).unwrap_or("-");
                    format!("{a} ({label})")
                }
            };
            let types = if row.types.is_empty() {
                "none".to_string()
            } else {
                row.types.iter().map(|t| t.exponent_form()).collect::<Vec<_>>().join(", ")
            };
            writeln!(s, "{key}: {types}").expect("write to string");
        }
        s
    }

    pub fn row(&self, key: &RowKey) -> Option<&TableRow> {
        self.rows.iter().find(|r| &r.key == key)
    }
}

/// Root subsystems of E8 by rank, highest rank first.
pub fn table2() -> Table {
    let rows = (1..=8)
        .rev()
        .map(|r| TableRow { key: RowKey::Rank(r), types: closure_of_rank(r) })
        .collect();
    Table { table: "2".into(), rows }
}

fn affine_table(name: &str, f: impl Fn(AffineType) -> Vec<RootSystemType>) -> Table {
    let rows = AffineType::painleve_types()
        .into_iter()
        .map(|a| TableRow { key: RowKey::Affine(a.to_string()), types: f(a) })
        .collect();
    Table { table: name.into(), rows }
}

/// Configurations of nodal curves for non-fibered pairs.
pub fn table3() -> Table {
    affine_table("3", |a| complement_types(a).expect("Painleve type").into_iter().collect())
}

/// Configurations of nodal curves for fibered pairs.
pub fn table4() -> Table {
    affine_table("4", |a| fibered_configs(a).expect("Painleve type").into_iter().collect())
}
