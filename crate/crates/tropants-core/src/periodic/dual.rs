//! Central fibre of the periodic degeneration: dual cells of the twisted
//! Legendre transform modulo the lattice, and component surfaces from the
//! triangulation star fans.

use crate::error::Error;
use crate::periodic::{extend_lift, PeriodicTriangulation, QuasiPeriodicLift};
use crate::toric::{surface_from_ray_cycle, ToricSurfaceId};
use crate::tropical::dual_cell;
use crate::vecops::{primitive, sub_i, to_q};
use crate::IVec;

/// One component class of the periodic central fibre.
#[derive(Debug, Clone)]
pub struct PeriodicComponent {
    /// Canonical vertex representative in the fundamental cell.
    pub label: IVec,
    /// Number of walls of the dual cell (edges, for surfaces).
    pub walls: usize,
    pub compact: bool,
    /// Star-fan surface identification, for two-dimensional bases.
    pub surface: Option<ToricSurfaceId>,
}

#[derive(Debug, Clone)]
pub struct PeriodicComponentReport {
    pub components: Vec<PeriodicComponent>,
}

/// Rays of the star of a vertex in the periodic triangulation: primitive
/// directions `w' - w` over all triangulation edges at `w`.
pub fn star_fan_rays(
    lift: &QuasiPeriodicLift,
    tri: &PeriodicTriangulation,
    w: &[i64],
) -> Result<Vec<IVec>, Error> {
    // gather triangles containing w, over lattice translates of the fixture
    let av = &lift.av;
    let n = av.n;
    let mut rays: Vec<IVec> = Vec::new();
    let mut shift_mask = vec![-2i64; n];
    'scan: loop {
        let mut s = vec![0i64; n];
        for (c, &mc) in shift_mask.iter().enumerate() {
            for r in 0..n {
                s[r] += mc * av.gamma_basis[c][r];
            }
        }
        for t in &tri.triangles {
            let verts: Vec<IVec> = t.iter().map(|p| crate::vecops::add_i(p, &s)).collect();
            if verts.iter().any(|v| v == w) {
                for v in &verts {
                    if v != w {
                        let d = primitive(&sub_i(v, w));
                        if !rays.contains(&d) {
                            rays.push(d);
                        }
                    }
                }
            }
        }
        for c in 0..n {
            shift_mask[c] += 1;
            if shift_mask[c] <= 2 {
                continue 'scan;
            }
            shift_mask[c] = -2;
        }
        break;
    }
    if rays.is_empty() {
        return Err(Error::invalid(format!(
            "{w:?} is not a vertex of the periodic triangulation"
        )));
    }
    rays.sort();
    Ok(rays)
}

/// Components of the periodic central fibre: one per vertex class of the
/// triangulation, with dual-cell wall counts (from the twisted transform on
/// a window) and star-fan surface identifications for `n = 2`.
pub fn periodic_central_fiber(
    lift: &QuasiPeriodicLift,
    tri: &PeriodicTriangulation,
) -> Result<PeriodicComponentReport, Error> {
    let av = &lift.av;
    let n = av.n;
    // vertex classes: normalize all fixture triangle vertices into the
    // fundamental cell
    let mut classes: Vec<IVec> = Vec::new();
    for t in &tri.triangles {
        for v in t {
            let g = av.fundamental_translate(&to_q(v));
            let rep = sub_i(v, &g);
            if !classes.contains(&rep) {
                classes.push(rep);
            }
        }
    }
    classes.sort();

    // windowed lift for exact dual cells; quadratic growth keeps every
    // central dual cell inside one fundamental-domain margin
    let window = super::domain_window(av, 1);
    let table = extend_lift(lift, &window)?;
    let window_lift = table.to_lift()?;

    let mut components = Vec::new();
    for w in &classes {
        let cell = dual_cell(&window_lift, Some(&av.gram), w)?;
        let walls = if n == 2 {
            cell.vertices.len()
        } else {
            cell.vertices.len()
        };
        let surface = if n == 2 {
            let rays = star_fan_rays(lift, tri, w)?;
            Some(surface_from_ray_cycle(rays)?)
        } else {
            None
        };
        components.push(PeriodicComponent {
            label: w.clone(),
            walls,
            compact: cell.is_compact(),
            surface,
        });
    }
    Ok(PeriodicComponentReport { components })
}

/// Checks positivity of the quadratic growth so windowed dual cells are
/// honest: every dual cell of the periodic transform is bounded.
pub fn all_cells_compact(report: &PeriodicComponentReport) -> bool {
    report.components.iter().all(|c| c.compact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::{genus5_fixture, node_fixture};

    #[test]
    fn node_has_one_component_class() {
        let (lift, tri) = node_fixture();
        let report = periodic_central_fiber(&lift, &tri).unwrap();
        assert_eq!(report.components.len(), 1);
        assert!(report.components[0].compact);
    }

    #[test]
    fn genus5_has_four_hexagonal_del_pezzo_components() {
        let (lift, tri) = genus5_fixture();
        let report = periodic_central_fiber(&lift, &tri).unwrap();
        assert_eq!(report.components.len(), 4);
        for c in &report.components {
            assert!(c.compact, "component {:?} not compact", c.label);
            assert_eq!(c.walls, 6, "component {:?} is not hexagonal", c.label);
            let s = c.surface.as_ref().unwrap();
            assert_eq!(s.name, "Bl3(P2)");
            assert_eq!(s.selfint, vec![-1; 6]);
        }
    }

    #[test]
    fn star_fan_of_origin_in_genus5() {
        let (lift, tri) = genus5_fixture();
        let rays = star_fan_rays(&lift, &tri, &[0, 0]).unwrap();
        assert_eq!(rays.len(), 6);
        assert!(rays.contains(&vec![1, 0]));
        assert!(rays.contains(&vec![-1, 1]));
    }
}
