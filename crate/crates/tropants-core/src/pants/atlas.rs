//! The gluing atlas: signed-algebra charts over edge interiors, the
//! rank-six vertex model, and per-half-edge transitions through the leg
//! quasi-isomorphisms.
//!
//! Transitions are stored as symbolic references (which leg map, plus a
//! sheet-trivialization bit from the vertex chirality); their compositions
//! reduce to the involution-compatibility identity verified symbolically in
//! the matrix-factorization module.

use serde::Serialize;

use crate::error::Error;
use crate::mf::{tau12_check, RingSpec};
use crate::pants::cover::{matching_chirality, validate_cover, SignedCover};
use crate::pants::{validate_graph, TrivalentGraph};

/// One transition record: the half-edge it glues, the vertex chart it comes
/// from, the leg slot (hence which `phi_k` it uses), and the
/// sheet-trivialization bit induced by the vertex's chirality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub half_edge: usize,
    pub vertex: usize,
    /// 1-based leg slot in the vertex's cyclic order; selects `phi_slot`.
    pub slot: usize,
    pub trivialization: u8,
}

/// Atlas data: edge and vertex charts plus the transition list.
#[derive(Debug, Clone, Serialize)]
pub struct GluingAtlas {
    /// Edge chart labels (one 2x2 signed-algebra model per edge interior).
    pub edge_charts: Vec<usize>,
    /// Vertex chart labels (one rank-6 dga model per vertex).
    pub vertex_charts: Vec<usize>,
    pub transitions: Vec<Transition>,
    /// Chirality bit of each vertex with respect to its cyclic order.
    pub vertex_chirality: Vec<u8>,
    /// Sheet matching of each edge (straight/swapped), copied from the
    /// cover.
    pub edge_swaps: Vec<bool>,
}

/// Builds the atlas from a validated cover and per-vertex cyclic orders of
/// the local half-edge slots.
pub fn build_atlas(
    g: &TrivalentGraph,
    cover: &SignedCover,
    cyclic_orders: &[[usize; 3]],
) -> Result<GluingAtlas, Error> {
    let graph_report = validate_graph(g)?;
    if !graph_report.valid {
        return Err(Error::Graph(format!(
            "graph is not trivalent at {:?}",
            graph_report.bad_vertices
        )));
    }
    let cover_report = validate_cover(g, cover)?;
    if !cover_report.valid {
        return Err(Error::Graph(format!(
            "invalid cover: {:?}",
            cover_report.failures
        )));
    }
    if cyclic_orders.len() != g.n_vertices {
        return Err(Error::Graph(format!(
            "need {} cyclic orders, got {}",
            g.n_vertices,
            cyclic_orders.len()
        )));
    }
    let inc = g.incidences();
    let mut vertex_chirality = Vec::with_capacity(g.n_vertices);
    for v in 0..g.n_vertices {
        let order = &cyclic_orders[v];
        {
            let mut sorted = *order;
            sorted.sort_unstable();
            if sorted != [0, 1, 2] {
                return Err(Error::Graph(format!(
                    "cyclic order at vertex {v} must be a permutation of 0..3"
                )));
            }
        }
        vertex_chirality.push(matching_chirality(&cover.matchings[v], order)?);
    }
    let mut transitions = Vec::new();
    for v in 0..g.n_vertices {
        for (k, &slot) in cyclic_orders[v].iter().enumerate() {
            transitions.push(Transition {
                half_edge: inc[v][slot],
                vertex: v,
                slot: k + 1,
                trivialization: vertex_chirality[v],
            });
        }
    }
    transitions.sort_by_key(|t| (t.vertex, t.slot));
    Ok(GluingAtlas {
        edge_charts: (0..g.edges.len()).collect(),
        vertex_charts: (0..g.n_vertices).collect(),
        transitions,
        vertex_chirality,
        edge_swaps: cover.edge_swaps.clone(),
    })
}

/// Per-edge compatibility result.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeTwist {
    pub edge: usize,
    /// Whether the transition composite across this edge needs the covering
    /// involution.
    pub twist: bool,
    /// The twist demanded by the cover's sheet matching.
    pub expected_twist: bool,
    pub compatible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtlasValidation {
    pub ok: bool,
    pub edges: Vec<EdgeTwist>,
    /// Vertex named on a chirality clash, if any.
    pub clash_vertex: Option<usize>,
    /// The symbolic involution-compatibility identity backing the
    /// composites, checked in the matrix-factorization window.
    pub involution_identity_ok: bool,
}

/// Validates the atlas edge by edge: the composite of the two end
/// transitions (each a leg quasi-isomorphism twisted by its trivialization
/// bit) equals the identity twisted by the covering involution exactly when
/// the edge's sheet matching is swapped. With the involution-compatibility
/// square verified symbolically, the composite twist reduces to
/// `triv_A XOR swap XOR triv_B`, so compatibility is `triv_A == triv_B`.
pub fn validate_atlas(
    g: &TrivalentGraph,
    atlas: &GluingAtlas,
    mf_window: &RingSpec,
) -> Result<AtlasValidation, Error> {
    let involution_identity_ok = tau12_check(mf_window, 2 * mf_window.n_cap)?;
    let mut edges = Vec::new();
    let mut incompat_per_vertex = vec![0usize; g.n_vertices];
    for (e, &(a, b, _)) in g.edges.iter().enumerate() {
        let swap = atlas.edge_swaps[e];
        let ta = atlas.vertex_chirality[a];
        let tb = atlas.vertex_chirality[b];
        let twist = (ta ^ (swap as u8) ^ tb) == 1;
        let compatible = twist == swap;
        if !compatible {
            incompat_per_vertex[a] += 1;
            incompat_per_vertex[b] += 1;
        }
        edges.push(EdgeTwist {
            edge: e,
            twist,
            expected_twist: swap,
            compatible,
        });
    }
    let ok = involution_identity_ok && edges.iter().all(|e| e.compatible);
    let clash_vertex = if ok {
        None
    } else {
        // name the vertex involved in the most incompatible edges
        (0..g.n_vertices).max_by_key(|&v| incompat_per_vertex[v]).filter(|&v| incompat_per_vertex[v] > 0)
    };
    Ok(AtlasValidation {
        ok,
        edges,
        clash_vertex,
        involution_identity_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pants::cover::SignedCover;
    use crate::pants::{pants_graph, theta_graph};

    fn default_orders(g: &TrivalentGraph) -> Vec<[usize; 3]> {
        vec![[0, 1, 2]; g.n_vertices]
    }

    fn spec() -> RingSpec {
        RingSpec::invertible(3, 3)
    }

    #[test]
    fn pants_atlas_has_three_leg_transitions() {
        let g = pants_graph();
        let cover = SignedCover::planar(&g);
        let atlas = build_atlas(&g, &cover, &default_orders(&g)).unwrap();
        assert_eq!(atlas.transitions.len(), 3);
        let slots: Vec<usize> = atlas.transitions.iter().map(|t| t.slot).collect();
        assert_eq!(slots, vec![1, 2, 3]);
    }

    #[test]
    fn theta_atlas_has_six_transitions_and_passes_untwisted() {
        let g = theta_graph();
        let cover = SignedCover::planar(&g);
        let atlas = build_atlas(&g, &cover, &default_orders(&g)).unwrap();
        assert_eq!(atlas.transitions.len(), 6);
        let v = validate_atlas(&g, &atlas, &spec()).unwrap();
        assert!(v.ok, "{v:?}");
        assert!(v.edges.iter().all(|e| !e.twist));
    }

    #[test]
    fn swapped_edge_requires_the_involution_twist() {
        let g = theta_graph();
        let mut cover = SignedCover::planar(&g);
        cover.edge_swaps[1] = true;
        let atlas = build_atlas(&g, &cover, &default_orders(&g)).unwrap();
        let v = validate_atlas(&g, &atlas, &spec()).unwrap();
        assert!(v.ok, "{v:?}");
        assert!(v.edges[1].twist);
        assert!(!v.edges[0].twist && !v.edges[2].twist);
    }

    #[test]
    fn chirality_clash_names_the_vertex() {
        let g = theta_graph();
        let mut cover = SignedCover::planar(&g);
        cover.flip_vertex(1);
        let atlas = build_atlas(&g, &cover, &default_orders(&g)).unwrap();
        let v = validate_atlas(&g, &atlas, &spec()).unwrap();
        assert!(!v.ok);
        assert_eq!(v.clash_vertex, Some(1));
    }

    #[test]
    fn global_chirality_flip_is_invisible() {
        let g = theta_graph();
        // flip every vertex and reverse every cyclic order
        let mut cover = SignedCover::planar(&g);
        cover.flip_vertex(0);
        cover.flip_vertex(1);
        let reversed = vec![[0, 2, 1]; 2];
        let atlas = build_atlas(&g, &cover, &reversed).unwrap();
        let v = validate_atlas(&g, &atlas, &spec()).unwrap();
        assert!(v.ok, "{v:?}");
    }

    #[test]
    fn atlas_is_deterministic() {
        let g = theta_graph();
        let cover = SignedCover::planar(&g);
        let a1 = build_atlas(&g, &cover, &default_orders(&g)).unwrap();
        let a2 = build_atlas(&g, &cover, &default_orders(&g)).unwrap();
        assert_eq!(a1.transitions, a2.transitions);
    }
}
