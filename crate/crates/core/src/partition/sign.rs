use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Point};

/// A strict sign condition: one entry in `{+1, -1}` per polynomial of an
/// ordered list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SignCondition {
    pub signs: Vec<i8>,
}

impl SignCondition {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput("strict sign conditions use +1 and -1 only".into()));
        }
        Ok(SignCondition { signs })
    }

    pub fn empty() -> Self {
        SignCondition::default()
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub(crate) fn extended(&self, s: i8) -> SignCondition {
        let mut signs = self.signs.clone();
        signs.push(s);
        SignCondition { signs }
    }
}

impl fmt::Display for SignCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.signs {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl Serialize for SignCondition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub type Cells = BTreeMap<SignCondition, Vec<usize>>;

/// Buckets points by the sign vector of `polys`; a zero in any coordinate
/// sends the point to the residual list instead.
pub fn assign_cells(points: &[Point], polys: &[MultiPoly]) -> Result<(Cells, Vec<usize>)> {
    let mut cells = Cells::new();
    let mut residual = Vec::new();
    'points: for (i, x) in points.iter().enumerate() {
        let mut signs = Vec::with_capacity(polys.len());
        for q in polys {
            let s = q.sign_at(x)?;
            if s == 0 {
                residual.push(i);
                continue 'points;
            }
            signs.push(s);
        }
        cells.entry(SignCondition { signs }).or_default().push(i);
    }
    Ok((cells, residual))
}

/// Serializable view of a cell map.
#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub signs: SignCondition,
    pub count: usize,
    pub indices: Vec<usize>,
}

pub fn cell_reports(cells: &Cells) -> Vec<CellReport> {
    cells
        .iter()
        .map(|(s, v)| CellReport {
            signs: s.clone(),
            count: v.len(),
            indices: v.clone(),
        })
        .collect()
}
