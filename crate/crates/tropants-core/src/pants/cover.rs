//! Double covers of trivalent graphs: sheet data, the local triangle model
//! at vertices, and the component count of the covering one-manifold.

use serde::Serialize;

use crate::error::Error;
use crate::pants::TrivalentGraph;

/// A point of the double cover over a half-edge: `(global half-edge, sheet)`.
pub type SheetPoint = (usize, u8);

/// Perfect matching of the six sheet-points at a vertex into three arcs,
/// using local slots `0..3` into the vertex's canonical half-edge list.
pub type VertexMatching = Vec<((usize, u8), (usize, u8))>;

/// Double-cover data: per-edge sheet matchings (straight or swapped) and a
/// per-vertex arc matching.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedCover {
    pub edge_swaps: Vec<bool>,
    pub matchings: Vec<VertexMatching>,
}

impl SignedCover {
    /// The planar cover: all edges straight, every vertex carrying the
    /// counterclockwise triangle matching `(slot i, +) - (slot i+1, -)`.
    pub fn planar(g: &TrivalentGraph) -> Self {
        SignedCover {
            edge_swaps: vec![false; g.edges.len()],
            matchings: (0..g.n_vertices)
                .map(|_| (0..3).map(|i| ((i, 0u8), ((i + 1) % 3, 1u8))).collect())
                .collect(),
        }
    }

    /// The matching of one vertex with the opposite chirality.
    pub fn flip_vertex(&mut self, v: usize) {
        self.matchings[v] = (0..3).map(|i| ((i, 1u8), ((i + 1) % 3, 0u8))).collect();
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverReport {
    pub valid: bool,
    pub failures: Vec<String>,
}

/// Validates the local model at every vertex: the three arcs must form a
/// perfect matching of the six sheet-points, each arc joining opposite
/// sheets on two distinct half-edges, with every unordered half-edge pair
/// used exactly once. Exactly two of the fifteen perfect matchings on six
/// points satisfy this (the two chiralities of the thickened-Y boundary).
pub fn validate_cover(g: &TrivalentGraph, cover: &SignedCover) -> Result<CoverReport, Error> {
    let mut failures = Vec::new();
    if cover.edge_swaps.len() != g.edges.len() {
        return Err(Error::Graph(format!(
            "cover has {} edge entries for {} edges",
            cover.edge_swaps.len(),
            g.edges.len()
        )));
    }
    if cover.matchings.len() != g.n_vertices {
        return Err(Error::Graph(format!(
            "cover has {} vertex matchings for {} vertices",
            cover.matchings.len(),
            g.n_vertices
        )));
    }
    for (v, matching) in cover.matchings.iter().enumerate() {
        if let Err(msg) = matching_is_triangle_type(matching) {
            failures.push(format!("vertex {v}: {msg}"));
        }
    }
    Ok(CoverReport {
        valid: failures.is_empty(),
        failures,
    })
}

/// Core acceptance test for a single vertex matching.
pub fn matching_is_triangle_type(matching: &VertexMatching) -> Result<(), String> {
    if matching.len() != 3 {
        return Err(format!("expected 3 arcs, got {}", matching.len()));
    }
    let mut used = [[false; 2]; 3];
    let mut pairs = Vec::new();
    for ((h1, s1), (h2, s2)) in matching {
        for (h, s) in [(h1, s1), (h2, s2)] {
            if *h >= 3 || *s >= 2 {
                return Err(format!("sheet point ({h},{s}) out of range"));
            }
            if used[*h][*s as usize] {
                return Err(format!("sheet point ({h},{s}) used twice"));
            }
            used[*h][*s as usize] = true;
        }
        if h1 == h2 {
            return Err(format!("arc joins the two sheets of half-edge {h1}"));
        }
        if s1 == s2 {
            return Err(format!(
                "arc joins sheet {s1} of half-edge {h1} to the same sheet of {h2}"
            ));
        }
        pairs.push(if h1 < h2 { (*h1, *h2) } else { (*h2, *h1) });
    }
    pairs.sort_unstable();
    if pairs != vec![(0, 1), (0, 2), (1, 2)] {
        return Err(format!("arcs induce the pattern {pairs:?}, not a triangle"));
    }
    Ok(())
}

/// Chirality of a valid matching with respect to a cyclic order of the
/// local slots: `0` when the arc from `order[i]` to `order[i+1]` leaves on
/// sheet 0, `1` for the mirror. Uniform for triangle-type matchings.
pub fn matching_chirality(
    matching: &VertexMatching,
    order: &[usize; 3],
) -> Result<u8, Error> {
    let mut bits = Vec::new();
    for i in 0..3 {
        let (a, b) = (order[i], order[(i + 1) % 3]);
        let arc = matching
            .iter()
            .find(|((h1, _), (h2, _))| (*h1 == a && *h2 == b) || (*h1 == b && *h2 == a))
            .ok_or_else(|| Error::Graph(format!("no arc joins slots {a} and {b}")))?;
        let sheet_at_a = if arc.0 .0 == a { arc.0 .1 } else { arc.1 .1 };
        bits.push(sheet_at_a);
    }
    if bits.iter().all(|&b| b == bits[0]) {
        Ok(bits[0])
    } else {
        Err(Error::Graph(
            "matching is not planar with respect to the cyclic order".into(),
        ))
    }
}

/// Component count of the covering one-manifold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentCount {
    pub circles: usize,
    pub arcs: usize,
}

/// Counts the connected components of the double cover by explicit
/// traversal: sheet-points alternate between vertex arcs and edge
/// matchings; leg sheet-points are open ends.
pub fn cover_components(
    g: &TrivalentGraph,
    cover: &SignedCover,
) -> Result<ComponentCount, Error> {
    let report = validate_cover(g, cover)?;
    if !report.valid {
        return Err(Error::Graph(format!(
            "invalid cover: {:?}",
            report.failures
        )));
    }
    let inc = g.incidences();
    // vertex-arc partner of each sheet point, in global indexing
    let nh = g.half_edge_count();
    let mut arc_partner: Vec<[Option<SheetPoint>; 2]> = vec![[None, None]; nh];
    for (v, matching) in cover.matchings.iter().enumerate() {
        for ((l1, s1), (l2, s2)) in matching {
            let h1 = inc[v][*l1];
            let h2 = inc[v][*l2];
            arc_partner[h1][*s1 as usize] = Some((h2, *s2));
            arc_partner[h2][*s2 as usize] = Some((h1, *s1));
        }
    }
    let edge_partner = |(h, s): SheetPoint| -> Option<SheetPoint> {
        g.partner(h).map(|h2| {
            let swap = cover.edge_swaps[h / 2];
            (h2, if swap { 1 - s } else { s })
        })
    };

    // every sheet point has exactly one arc link and at most one edge
    // link, so components are alternating walks: paths ending at leg
    // points, or closed circuits
    let mut visited = vec![[false; 2]; nh];
    let mut circles = 0usize;
    let mut arcs = 0usize;
    for h in 0..nh {
        for s in 0..2u8 {
            if visited[h][s as usize] {
                continue;
            }
            let start: SheetPoint = (h, s);
            visited[h][s as usize] = true;
            let mut open = false;
            for arc_first in [true, false] {
                let mut cur = start;
                let mut step_arc = arc_first;
                loop {
                    let next = if step_arc {
                        arc_partner[cur.0][cur.1 as usize]
                    } else {
                        edge_partner(cur)
                    };
                    match next {
                        None => {
                            open = true;
                            break;
                        }
                        Some(q) => {
                            if visited[q.0][q.1 as usize] {
                                break; // closed up or rejoined the walk
                            }
                            visited[q.0][q.1 as usize] = true;
                            cur = q;
                            step_arc = !step_arc;
                        }
                    }
                }
            }
            if open {
                arcs += 1;
            } else {
                circles += 1;
            }
        }
    }
    Ok(ComponentCount { circles, arcs })
}
