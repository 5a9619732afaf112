//! Depressed cubic x^3 + a x = b over Q_p: solvability and root-count criteria
//! for p > 3 and p = 3, and the root oracle used to adjudicate them.

mod criteria;
pub mod oracle;
mod p3;
pub mod poly;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use criteria::{compute_aux, compute_aux_with, count_gt3, count_gt3_with, solvable_gt3, CubicAux, D0Mode};
pub use oracle::{count_roots, find_roots, find_roots_with_multiplicity, newton_valuations, RootInfo};
pub use p3::{count_p3, delta_member, pattern_member, solvable_p3, DeltaSet, DigitPattern};
pub use poly::Poly;

use crate::padic::rational::int;
use crate::padic::ExactRational;

/// x^3 + a x = b.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DepressedCubic {
    pub a: ExactRational,
    pub b: ExactRational,
}

impl DepressedCubic {
    pub fn new(a: ExactRational, b: ExactRational) -> Self {
        DepressedCubic { a, b }
    }

    /// x^3 + a x - b
    pub fn poly(&self) -> Poly {
        Poly::new(vec![-self.b.clone(), self.a.clone(), int(0), int(1)])
    }
}

/// Printed criteria tables, named as in the source tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableId {
    #[serde(rename = "cubeq")]
    Cubeq,
    #[serde(rename = "Nsol")]
    Nsol,
    #[serde(rename = "exstp3")]
    Exstp3,
    #[serde(rename = "Nsolp3")]
    Nsolp3,
    #[serde(rename = "N1")]
    N1,
    #[serde(rename = "unique")]
    Unique,
    #[serde(rename = "NPer2")]
    NPer2,
    #[serde(rename = "Tp2-dyn")]
    Tp2Dyn,
    #[serde(rename = "TR1")]
    TR1,
    #[serde(rename = "Tp")]
    Tp,
    #[serde(rename = "Tp2-ggm")]
    Tp2Ggm,
}

impl TableId {
    /// Number of printed rows.
    pub fn rows(self) -> u8 {
        match self {
            TableId::Cubeq => 3,
            TableId::Nsol => 12,
            TableId::Exstp3 => 4,
            TableId::Nsolp3 => 6,
            TableId::N1 | TableId::TR1 => 11,
            TableId::Unique => 2,
            TableId::NPer2 | TableId::Tp => 7,
            TableId::Tp2Dyn => 14,
            TableId::Tp2Ggm => 13,
        }
    }
}

/// Which printed row fired. Row 0 means no listed row applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleId {
    pub table: TableId,
    pub row: u8,
}

impl RuleId {
    pub fn new(table: TableId, row: u8) -> Self {
        debug_assert!(row <= table.rows());
        RuleId { table, row }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name =
            serde_json::to_value(self.table).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        write!(f, "{name}#{}", self.row)
    }
}
