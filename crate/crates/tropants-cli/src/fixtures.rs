//! Fixture schemas and the embedded regression set.

use anyhow::{anyhow, Context, Result};
use serde::{Deserialize, Serialize};

use tropants_core::novikov::{ConvexHamiltonian, Piece, Region, ValuationSpec};
use tropants_core::periodic::{PeriodicTriangulation, PolarizedTropicalAV, QuasiPeriodicLift};
use tropants_core::rat::{rat_from_str, Rat};
use tropants_core::tropical::LiftFixture;
use tropants_core::pants::GraphFixture;
use tropants_core::IVec;

/// Periodic fixture file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodicFixture {
    pub n: usize,
    pub gamma_basis: Vec<IVec>,
    pub gram: Vec<IVec>,
    pub base_values: Vec<BaseValue>,
    pub fundamental_triangulation: Vec<Vec<IVec>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaseValue {
    pub point: IVec,
    pub value: i64,
}

impl PeriodicFixture {
    pub fn build(&self) -> Result<(QuasiPeriodicLift, PeriodicTriangulation)> {
        let av = PolarizedTropicalAV::new(self.n, self.gamma_basis.clone(), self.gram.clone())?;
        let lift = QuasiPeriodicLift::new(
            av,
            self.base_values
                .iter()
                .map(|b| (b.point.clone(), b.value))
                .collect(),
        )?;
        Ok((
            lift,
            PeriodicTriangulation {
                triangles: self.fundamental_triangulation.clone(),
            },
        ))
    }
}

/// Novikov section fixture file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NovikovFixture {
    pub spec: SpecFixture,
    pub region: Region,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecFixture {
    pub pieces: Vec<PieceFixture>,
    #[serde(default)]
    pub exceptional: Vec<ExceptionalPoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExceptionalPoint {
    pub point: IVec,
    pub val: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PieceFixture {
    pub cone_rays: Vec<IVec>,
    pub a: String,
    pub w: Vec<String>,
    #[serde(default)]
    pub quad: Option<Vec<IVec>>,
}

impl NovikovFixture {
    pub fn build(&self) -> Result<(ValuationSpec, Region)> {
        let dim = self
            .region
            .vertices
            .first()
            .map(|v| v.len())
            .ok_or_else(|| anyhow!("region needs at least one vertex"))?;
        let mut pieces = Vec::new();
        for p in &self.spec.pieces {
            let a = rat_from_str(&p.a)?;
            let w: Vec<Rat> = p
                .w
                .iter()
                .map(|s| rat_from_str(s))
                .collect::<std::result::Result<_, _>>()?;
            pieces.push(Piece {
                cone_rays: p.cone_rays.clone(),
                a,
                w,
                quad: p.quad.clone(),
            });
        }
        let exceptional = self
            .spec
            .exceptional
            .iter()
            .map(|e| Ok((e.point.clone(), rat_from_str(&e.val)?)))
            .collect::<Result<Vec<_>>>()?;
        let spec = ValuationSpec::new(dim, pieces, exceptional)?;
        Ok((spec, self.region.clone()))
    }
}

/// Hamiltonian fixture file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamiltonianFixture {
    pub hamiltonian: HamiltonianKind,
    pub window: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HamiltonianKind {
    Quadratic { q: Vec<Vec<String>>, c: Vec<String> },
    Disc { lambda: String, dim: usize },
}

impl HamiltonianFixture {
    pub fn build(&self) -> Result<(ConvexHamiltonian, i64)> {
        let h = match &self.hamiltonian {
            HamiltonianKind::Quadratic { q, c } => {
                let qm: Vec<Vec<Rat>> = q
                    .iter()
                    .map(|row| row.iter().map(|s| rat_from_str(s)).collect())
                    .collect::<std::result::Result<_, _>>()?;
                let cv: Vec<Rat> = c
                    .iter()
                    .map(|s| rat_from_str(s))
                    .collect::<std::result::Result<_, _>>()?;
                ConvexHamiltonian::quadratic(qm, cv)?
            }
            HamiltonianKind::Disc { lambda, dim } => {
                ConvexHamiltonian::disc(rat_from_str(lambda)?, *dim)?
            }
        };
        Ok((h, self.window))
    }
}

/// Parses a JSON file with line/column context in errors.
pub fn parse_json<T: for<'de> Deserialize<'de>>(name: &str, data: &str) -> Result<T> {
    serde_json::from_str(data).with_context(|| format!("parsing {name}"))
}

pub fn load_lift(path_or_data: &str, data: &str) -> Result<LiftFixture> {
    parse_json(path_or_data, data)
}

pub fn load_graph(name: &str, data: &str) -> Result<GraphFixture> {
    parse_json(name, data)
}

/// Embedded fixtures for the regression harness.
pub mod embedded {
    pub const GENUS2: &str = include_str!("../fixtures/genus2.json");
    pub const NODE: &str = include_str!("../fixtures/node.json");
    pub const GENUS5: &str = include_str!("../fixtures/genus5.json");
    pub const NOVIKOV_FLAT: &str = include_str!("../fixtures/novikov_flat.json");
    pub const NOVIKOV_PUNCTURED: &str = include_str!("../fixtures/novikov_punctured.json");
    pub const NOVIKOV_BAD: &str = include_str!("../fixtures/novikov_bad.json");
    pub const DISC: &str = include_str!("../fixtures/disc.json");
    pub const QUADRATIC: &str = include_str!("../fixtures/quadratic.json");
    pub const PANTS: &str = include_str!("../fixtures/pants.json");
    pub const THETA: &str = include_str!("../fixtures/theta.json");
    pub const DUMBBELL: &str = include_str!("../fixtures/dumbbell.json");
    pub const THETA_CLASH: &str = include_str!("../fixtures/theta_clash.json");
}
