//! Signed tropical structures on trivalent metrized graphs: double covers,
//! glued-surface invariants, and the chart/transition gluing atlas.

mod atlas;
mod cover;

pub use atlas::{build_atlas, validate_atlas, AtlasValidation, EdgeTwist, GluingAtlas, Transition};
pub use cover::{
    cover_components, matching_chirality, matching_is_triangle_type, validate_cover,
    ComponentCount, CoverReport, SheetPoint, SignedCover, VertexMatching,
};

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rat::Rat;

/// A trivalent metrized graph with optional semi-infinite legs.
///
/// Loops are allowed and count twice towards the vertex degree; legs count
/// once.
#[derive(Debug, Clone, PartialEq)]
pub struct TrivalentGraph {
    pub n_vertices: usize,
    /// `(end a, end b, length)`.
    pub edges: Vec<(usize, usize, Rat)>,
    /// Vertex each semi-infinite leg is attached to.
    pub legs: Vec<usize>,
}

/// Global half-edge indexing: edge `e` owns half-edges `2e` (at its first
/// end) and `2e + 1`; leg `l` owns half-edge `2*edges + l`.
impl TrivalentGraph {
    pub fn half_edge_count(&self) -> usize {
        2 * self.edges.len() + self.legs.len()
    }

    /// Vertex carrying a half-edge.
    pub fn half_edge_vertex(&self, h: usize) -> usize {
        let ne = 2 * self.edges.len();
        if h < ne {
            let (a, b, _) = self.edges[h / 2];
            if h % 2 == 0 {
                a
            } else {
                b
            }
        } else {
            self.legs[h - ne]
        }
    }

    /// The opposite half-edge across an edge; `None` for legs.
    pub fn partner(&self, h: usize) -> Option<usize> {
        if h < 2 * self.edges.len() {
            Some(h ^ 1)
        } else {
            None
        }
    }

    /// Canonical incident half-edge list per vertex (edges first, in input
    /// order, then legs).
    pub fn incidences(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n_vertices];
        for h in 0..self.half_edge_count() {
            inc[self.half_edge_vertex(h)].push(h);
        }
        inc
    }
}

/// Graph validation outcome.
#[derive(Debug, Clone, Serialize)]
pub struct GraphReport {
    pub valid: bool,
    pub bad_vertices: Vec<usize>,
    pub nonpositive_lengths: Vec<usize>,
    pub connected: bool,
    pub components: usize,
}

/// Degree, length and connectivity checks; non-trivalent vertices are named
/// explicitly.
pub fn validate_graph(g: &TrivalentGraph) -> Result<GraphReport, Error> {
    for &(a, b, _) in &g.edges {
        if a >= g.n_vertices || b >= g.n_vertices {
            return Err(Error::Graph(format!(
                "edge endpoint out of range in ({a},{b})"
            )));
        }
    }
    for &v in &g.legs {
        if v >= g.n_vertices {
            return Err(Error::Graph(format!("leg vertex {v} out of range")));
        }
    }
    let inc = g.incidences();
    let bad_vertices: Vec<usize> = (0..g.n_vertices).filter(|&v| inc[v].len() != 3).collect();
    let nonpositive_lengths: Vec<usize> = g
        .edges
        .iter()
        .enumerate()
        .filter(|(_, (_, _, l))| !l.is_positive())
        .map(|(i, _)| i)
        .collect();
    // connectivity over edges
    let mut uf: Vec<usize> = (0..g.n_vertices).collect();
    fn find(uf: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        let mut c = x;
        while uf[c] != r {
            let n = uf[c];
            uf[c] = r;
            c = n;
        }
        r
    }
    for &(a, b, _) in &g.edges {
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        if ra != rb {
            uf[ra] = rb;
        }
    }
    let mut roots: Vec<usize> = (0..g.n_vertices).map(|v| find(&mut uf, v)).collect();
    roots.sort_unstable();
    roots.dedup();
    let components = roots.len().max(usize::from(g.n_vertices == 0));
    Ok(GraphReport {
        valid: bad_vertices.is_empty() && nonpositive_lengths.is_empty(),
        bad_vertices,
        nonpositive_lengths,
        connected: components <= 1,
        components,
    })
}

/// Topological invariants of the glued surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub genus: Option<i64>,
    pub ends: usize,
    pub euler: i64,
}

/// Per-component surface invariants; `overall` is present for connected
/// graphs.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceReport {
    pub overall: Option<SurfaceInvariants>,
    pub per_component: Vec<SurfaceInvariants>,
}

/// Euler characteristic and genus of the surface glued from pants and
/// cylinders: each vertex contributes -1, edges and legs contribute 0, so
/// `χ = -V` and `χ = 2 - 2g - ends` fixes the genus.
pub fn surface_invariants(g: &TrivalentGraph) -> Result<SurfaceReport, Error> {
    let report = validate_graph(g)?;
    if !report.valid {
        return Err(Error::Graph(format!(
            "invalid graph: vertices {:?} are not trivalent",
            report.bad_vertices
        )));
    }
    // component decomposition
    let mut comp = vec![usize::MAX; g.n_vertices];
    let mut count = 0usize;
    for start in 0..g.n_vertices {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = count;
        while let Some(v) = stack.pop() {
            for &(a, b, _) in &g.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && comp[y] == usize::MAX {
                        comp[y] = count;
                        stack.push(y);
                    }
                }
            }
        }
        count += 1;
    }
    let mut per_component = Vec::new();
    for c in 0..count {
        let nv = comp.iter().filter(|&&x| x == c).count() as i64;
        let ends = g.legs.iter().filter(|&&v| comp[v] == c).count();
        let euler = -nv;
        // χ = 2 - 2g - ends
        let two_g = 2 - euler - ends as i64;
        let genus = if two_g % 2 == 0 && two_g >= 0 {
            Some(two_g / 2)
        } else {
            None
        };
        per_component.push(SurfaceInvariants { genus, ends, euler });
    }
    let overall = if count == 1 {
        Some(per_component[0].clone())
    } else {
        None
    };
    Ok(SurfaceReport {
        overall,
        per_component,
    })
}

/// Graph fixture format shared with the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFixture {
    pub vertices: Vec<usize>,
    pub edges: Vec<GraphFixtureEdge>,
    #[serde(default)]
    pub legs: Vec<GraphFixtureLeg>,
    #[serde(default)]
    pub vertex_matchings: std::collections::BTreeMap<String, Vec<Vec<Vec<i64>>>>,
    #[serde(default)]
    pub cyclic_orders: std::collections::BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFixtureEdge {
    pub ends: (usize, usize),
    #[serde(with = "crate::rat::rat_string")]
    pub length: Rat,
    #[serde(default)]
    pub sheet_swap: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFixtureLeg {
    pub vertex: usize,
}

impl GraphFixture {
    pub fn graph(&self) -> TrivalentGraph {
        TrivalentGraph {
            n_vertices: self.vertices.len(),
            edges: self
                .edges
                .iter()
                .map(|e| (e.ends.0, e.ends.1, e.length.clone()))
                .collect(),
            legs: self.legs.iter().map(|l| l.vertex).collect(),
        }
    }

    pub fn cover(&self, g: &TrivalentGraph) -> Result<SignedCover, Error> {
        let edge_swaps: Vec<bool> = self.edges.iter().map(|e| e.sheet_swap).collect();
        if self.vertex_matchings.is_empty() {
            let mut cover = SignedCover::planar(g);
            cover.edge_swaps = edge_swaps;
            return Ok(cover);
        }
        let mut matchings = Vec::with_capacity(g.n_vertices);
        for v in 0..g.n_vertices {
            let m = self
                .vertex_matchings
                .get(&v.to_string())
                .ok_or_else(|| Error::Graph(format!("missing matching for vertex {v}")))?;
            if m.len() != 3 {
                return Err(Error::Graph(format!(
                    "vertex {v} needs exactly 3 arcs, got {}",
                    m.len()
                )));
            }
            let mut arcs = Vec::with_capacity(3);
            for arc in m {
                if arc.len() != 2 || arc.iter().any(|p| p.len() != 2) {
                    return Err(Error::Graph("arc must be a pair of [slot, sheet]".into()));
                }
                let p = (arc[0][0] as usize, arc[0][1] as u8);
                let q = (arc[1][0] as usize, arc[1][1] as u8);
                arcs.push((p, q));
            }
            matchings.push(arcs);
        }
        Ok(SignedCover {
            edge_swaps,
            matchings,
        })
    }

    pub fn cyclic_order_list(&self, g: &TrivalentGraph) -> Vec<[usize; 3]> {
        (0..g.n_vertices)
            .map(|v| {
                self.cyclic_orders
                    .get(&v.to_string())
                    .map(|o| [o[0], o[1], o[2]])
                    .unwrap_or([0, 1, 2])
            })
            .collect()
    }
}

/// The pair-of-pants graph: one vertex, three legs.
pub fn pants_graph() -> TrivalentGraph {
    TrivalentGraph {
        n_vertices: 1,
        edges: vec![],
        legs: vec![0, 0, 0],
    }
}

/// The theta graph: two vertices joined by three parallel edges.
pub fn theta_graph() -> TrivalentGraph {
    let one = crate::rat::rat(1);
    TrivalentGraph {
        n_vertices: 2,
        edges: vec![(0, 1, one.clone()), (0, 1, one.clone()), (0, 1, one)],
        legs: vec![],
    }
}

/// The dumbbell: two loops joined by one edge.
pub fn dumbbell_graph() -> TrivalentGraph {
    let one = crate::rat::rat(1);
    TrivalentGraph {
        n_vertices: 2,
        edges: vec![(0, 0, one.clone()), (1, 1, one.clone()), (0, 1, one)],
        legs: vec![],
    }
}
