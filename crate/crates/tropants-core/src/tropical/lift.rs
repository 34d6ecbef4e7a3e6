//! Integer lifts on finite lattice supports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::tropical::polytope::{lattice_points, Polytope};
use crate::IVec;

/// An integer-valued function on a finite set of lattice points.
///
/// Points outside the support are treated as carrying the value `+infinity`;
/// they are simply absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftFunction {
    pub dim: usize,
    values: BTreeMap<IVec, i64>,
}

impl LiftFunction {
    pub fn new(dim: usize, entries: impl IntoIterator<Item = (IVec, i64)>) -> Result<Self, Error> {
        let mut values = BTreeMap::new();
        for (p, v) in entries {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if let Some(old) = values.insert(p.clone(), v) {
                if old != v {
                    return Err(Error::invalid(format!(
                        "conflicting lift values {old} and {v} at {p:?}"
                    )));
                }
            }
        }
        if values.is_empty() {
            return Err(Error::EmptyInput("lift support"));
        }
        Ok(LiftFunction { dim, values })
    }

    pub fn support(&self) -> impl Iterator<Item = &IVec> {
        self.values.keys()
    }

    pub fn support_vec(&self) -> Vec<IVec> {
        self.values.keys().cloned().collect()
    }

    pub fn value(&self, p: &[i64]) -> Option<i64> {
        self.values.get(p).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Convex hull of the support.
    pub fn hull(&self) -> Result<Polytope, Error> {
        Polytope::from_lattice_points(self.dim, &self.support_vec())
    }

    /// Checks that the support is exactly `conv(support) ∩ Z^n`, the shape
    /// the degeneration hypotheses ask for.
    pub fn support_is_saturated(&self) -> Result<bool, Error> {
        let hull = self.hull()?;
        if !hull.is_full_dimensional() {
            return Ok(false);
        }
        let lp = lattice_points(&hull)?;
        Ok(lp.all.len() == self.len() && lp.all.iter().all(|p| self.values.contains_key(p)))
    }
}

/// JSON fixture for a lifted polytope, per the file format used by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiftFixture {
    pub dim: usize,
    pub support: Vec<IVec>,
    pub values: Vec<i64>,
    #[serde(default)]
    pub triangulation: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub gram: Option<Vec<IVec>>,
}

impl LiftFixture {
    pub fn lift(&self) -> Result<LiftFunction, Error> {
        if self.support.len() != self.values.len() {
            return Err(Error::invalid(format!(
                "support has {} points but {} values",
                self.support.len(),
                self.values.len()
            )));
        }
        LiftFunction::new(
            self.dim,
            self.support.iter().cloned().zip(self.values.iter().copied()),
        )
    }
}
