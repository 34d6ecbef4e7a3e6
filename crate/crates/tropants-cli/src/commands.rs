//! Command runners: each returns a deterministic JSON report and an overall
//! pass flag.

use anyhow::Result;
use serde_json::{json, Value};

use tropants_core::mf::{
    contraction_e3, e_single, e_sum, tau12_check, verify_mf, verify_phi3, RingSpec,
};
use tropants_core::novikov::{
    cf_correspondence_report, count_below, enumerate_chords, section_membership, ActionValue,
    ConvexHamiltonian, Coords,
};
use tropants_core::pants::{
    build_atlas, cover_components, surface_invariants, validate_atlas, validate_cover,
    validate_graph, GraphFixture,
};
use tropants_core::periodic::{
    extend_lift, periodic_central_fiber, periodic_genus, periodic_subdivision_check,
    ring_presentation_mod_t, theta_exponent_check,
};
use tropants_core::rat::{rat, rat_from_str, rat_to_string, Rat};
use tropants_core::toric::{
    build_fan, central_fiber, chart_superpotential_check, cstar_weight, genus_and_ends, multiply,
    ring_basis, smoothness_check,
};
use tropants_core::tropical::{
    check_unimodular_regular, dual_cell, induced_triangulation, lattice_points,
    legendre_transform, LiftFixture, Simplex, Triangulation,
};

use crate::fixtures::{HamiltonianFixture, NovikovFixture, PeriodicFixture};

fn check(name: &str, ok: bool) -> Value {
    json!({ "name": name, "status": if ok { "pass" } else { "fail" } })
}

pub fn run_validate(fx: &LiftFixture) -> Result<(Value, bool)> {
    let lift = fx.lift()?;
    let saturated = lift.support_is_saturated()?;
    let tri = match &fx.triangulation {
        Some(cells) => Triangulation::new(
            fx.dim,
            fx.support.clone(),
            cells.iter().map(|c| Simplex::new(c.clone())).collect(),
        )?,
        None => induced_triangulation(&lift)?,
    };
    let report = check_unimodular_regular(&lift, &tri)?;
    let (genus, ends, pants) = genus_and_ends(&lift)?;
    let lp = lattice_points(&lift.hull()?)?;
    let ok = saturated && report.pass();
    let value = json!({
        "command": "validate",
        "checks": [
            check("support_saturated", saturated),
            check("structural", report.structural_ok),
            check("unimodular", report.unimodular),
            check("matches_induced_subdivision", report.matches_induced),
            check("strict_creases", report.strict_creases),
        ],
        "failures": report.failures,
        "pants": pants,
        "genus": genus,
        "ends": ends,
        "lattice_points": lp.all.len(),
        "interior_points": lp.interior,
        "boundary_points": lp.boundary.len(),
    });
    Ok((value, ok))
}

pub fn run_legendre(fx: &LiftFixture) -> Result<(Value, bool)> {
    let lift = fx.lift()?;
    let psi = legendre_transform(&lift, fx.gram.as_deref())?;
    let mut cells = Vec::new();
    for cell in &psi.cells {
        let label = cell.label.clone().unwrap_or_default();
        // the per-label dual cell op must agree with the decomposition
        let direct = dual_cell(&lift, fx.gram.as_deref(), &label)?;
        cells.push(json!({
            "label": label,
            "compact": cell.is_compact(),
            "vertices": cell.vertices.iter()
                .map(|v| v.iter().map(rat_to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "rays": cell.rays,
            "agrees_with_dual_cell": direct == *cell,
        }));
    }
    let compact = psi.cells.iter().filter(|c| c.is_compact()).count();
    let consistent = cells
        .iter()
        .all(|c| c["agrees_with_dual_cell"].as_bool() == Some(true));
    let value = json!({
        "command": "legendre",
        "checks": [check("cells_match_dual_cell_op", consistent)],
        "maximal_cells": psi.cells.len(),
        "compact_cells": compact,
        "cells": cells,
    });
    Ok((value, consistent))
}

pub fn run_degenerate(fx: &LiftFixture, window: Option<i64>, degree: i64) -> Result<(Value, bool)> {
    let lift = fx.lift()?;
    let tri = induced_triangulation(&lift)?;
    let fan = build_fan(&tri);
    let mut smooth_all = true;
    let mut chart_all = true;
    let mut cones = Vec::new();
    for cone in &fan {
        let smooth = smoothness_check(cone)?;
        let chart = chart_superpotential_check(cone)?;
        smooth_all &= smooth;
        chart_all &= chart;
        cones.push(json!({ "rays": cone.rays, "smooth": smooth, "chart_W": chart }));
    }
    let psi = legendre_transform(&lift, fx.gram.as_deref())?;
    let w = window.unwrap_or(2);
    let window_box: Vec<(i64, i64)> = (0..fx.dim).map(|_| (-w, w)).collect();
    let slice = ring_basis(&psi, degree, &rat(0), Some(&window_box))?;
    // exercise the product and weight bookkeeping on the first basis pair
    let mut product = json!(null);
    if slice.basis.len() >= 2 {
        let a = &slice.basis[0].0;
        let b = &slice.basis[1].0;
        let p = multiply(a, b, &psi)?;
        let additive = cstar_weight(&p.point) == cstar_weight(a) + cstar_weight(b);
        product = json!({
            "degree": p.point.degree,
            "nums": p.point.nums,
            "height": rat_to_string(&p.height),
            "weight_additive": additive,
        });
    }
    let ok = smooth_all && chart_all;
    let value = json!({
        "command": "degenerate",
        "checks": [check("all_cones_smooth", smooth_all), check("chart_superpotential", chart_all)],
        "cones": cones,
        "smooth": smooth_all,
        "chart_W": chart_all,
        "ring_slice": {
            "degree": degree,
            "basis_size": slice.basis.len(),
            "sample_product": product,
        },
    });
    Ok((value, ok))
}

pub fn run_central_fiber(fx: &LiftFixture) -> Result<(Value, bool)> {
    let lift = fx.lift()?;
    let psi = legendre_transform(&lift, fx.gram.as_deref())?;
    let report = central_fiber(&psi);
    let (genus, ends, pants) = genus_and_ends(&lift)?;
    let components: Vec<Value> = report
        .components
        .iter()
        .map(|c| {
            json!({
                "label": c.label,
                "compact": c.compact,
                "surface": c.surface.as_ref().map(|s| s.name.clone()),
            })
        })
        .collect();
    // compact two-dimensional components must carry a smooth surface name
    let surfaces_ok = fx.dim != 2
        || report
            .components
            .iter()
            .filter(|c| c.compact)
            .all(|c| c.surface.is_some());
    let value = json!({
        "command": "central-fiber",
        "checks": [check("compact_components_identified", surfaces_ok)],
        "components": components,
        "adjacency": report.adjacency,
        "genus": genus,
        "ends": ends,
        "pants": pants,
    });
    Ok((value, surfaces_ok))
}

pub fn run_periodic(fx: &PeriodicFixture, max_degree: i64) -> Result<(Value, bool)> {
    let (lift, tri) = fx.build()?;
    let sub = periodic_subdivision_check(&lift, &tri)?;
    let genus = periodic_genus(&tri).ok();
    let fiber = periodic_central_fiber(&lift, &tri)?;
    let pres = ring_presentation_mod_t(&lift, &tri, max_degree)?;
    let gens: Vec<Value> = pres
        .generators
        .iter()
        .map(|(d, g)| json!({ "degree": d, "nums": g.nums }))
        .collect();
    let relations: Vec<Value> = pres
        .relations
        .iter()
        .map(|r| {
            let rendered: Vec<String> = r
                .terms
                .iter()
                .map(|(c, m)| {
                    let mono: Vec<String> = m
                        .iter()
                        .map(|(g, p)| format!("g{}^{}", g, p))
                        .collect();
                    format!("{}*{}", rat_to_string(c), mono.join("*"))
                })
                .collect();
            json!({ "degree": r.degree, "terms": rendered })
        })
        .collect();
    // every recorded relation must evaluate to zero
    let mut relations_ok = true;
    let zero = rat(0);
    for r in &pres.relations {
        let v = pres.evaluate_combo(&lift, &tri, &r.terms)?;
        relations_ok &= v.iter().all(|x| *x == zero);
    }
    let components: Vec<Value> = fiber
        .components
        .iter()
        .map(|c| {
            json!({
                "label": c.label,
                "walls": c.walls,
                "compact": c.compact,
                "surface": c.surface.as_ref().map(|s| s.name.clone()),
            })
        })
        .collect();
    let ok = sub.pass() && relations_ok;
    let value = json!({
        "command": "periodic",
        "checks": [
            check("periodic_subdivision", sub.pass()),
            check("relations_vanish", relations_ok),
        ],
        "cells_per_domain": sub.cells_per_domain,
        "genus": genus,
        "hilbert": pres.hilbert,
        "generators": gens,
        "relations": relations,
        "components": components,
    });
    Ok((value, ok))
}

pub fn run_theta(fx: &PeriodicFixture, window: i64) -> Result<(Value, bool)> {
    let (lift, _) = fx.build()?;
    let av = lift.av.clone();
    let margin = 2 * window;
    let table_window: Vec<(i64, i64)> = (0..av.n).map(|_| (-margin, margin)).collect();
    let table = extend_lift(&lift, &table_window)?;
    let check_window: Vec<(i64, i64)> = (0..av.n).map(|_| (-window, window)).collect();
    let mut all_ok = true;
    let mut results = Vec::new();
    // generating set: the basis and its negatives
    let mut gammas: Vec<Vec<i64>> = Vec::new();
    for b in &av.gamma_basis {
        gammas.push(b.clone());
        gammas.push(b.iter().map(|x| -x).collect());
    }
    for g in &gammas {
        let c = theta_exponent_check(&table, &av, g, &check_window)?;
        all_ok &= c.ok;
        results.push(json!({ "gamma": g, "ok": c.ok, "failure_at": c.failure_at }));
    }
    let value = json!({
        "command": "theta-check",
        "checks": [check("exponent_identity", all_ok)],
        "window": window,
        "gammas": results,
    });
    Ok((value, all_ok))
}

pub fn run_novikov(fx: &NovikovFixture) -> Result<(Value, bool)> {
    let (spec, region) = fx.build()?;
    let membership = section_membership(&spec, &region)?;
    // heuristic counts at an interior sample
    let dim = spec.dim;
    let k = rat(region.vertices.len() as i64);
    let mut centroid: Vec<Rat> = (0..dim)
        .map(|i| {
            region
                .vertices
                .iter()
                .map(|v| v[i].clone())
                .fold(Rat::from_integer(0.into()), |a, b| a + b)
                / &k
        })
        .collect();
    for r in &region.rays {
        for i in 0..dim {
            centroid[i] += rat(r[i]);
        }
    }
    let counts: Vec<usize> = [10, 20, 40]
        .iter()
        .map(|&r| count_below(&spec, &centroid, &rat(0), r))
        .collect();
    let value = json!({
        "command": "novikov-check",
        "checks": [check("decided", true)],
        "member": membership.member,
        "violation": membership.violation.map(|v| format!("{v:?}")),
        "oracle_counts_radius_10_20_40": counts,
    });
    Ok((value, true))
}

pub fn run_chords(fx: &HamiltonianFixture) -> Result<(Value, bool)> {
    let (h, window) = fx.build()?;
    let chords = enumerate_chords(&h, window)?;
    let rows: Vec<Value> = chords
        .iter()
        .map(|c| {
            let b = match &c.b {
                Coords::Exact(v) => json!(v.iter().map(rat_to_string).collect::<Vec<_>>()),
                Coords::Approx(v) => json!(v),
            };
            let action = match &c.action {
                ActionValue::Exact(r) => json!(rat_to_string(r)),
                ActionValue::Approx(x) => json!(x),
            };
            json!({
                "v": c.v,
                "b": b,
                "action": action,
                "index": c.index,
                "nondegenerate": c.nondegenerate,
            })
        })
        .collect();
    let mut checks = vec![check("enumerated", true)];
    let mut ok = true;
    if let ConvexHamiltonian::Disc { lambda, dim } = &h {
        let report = cf_correspondence_report(lambda, *dim, window)?;
        ok = report.pass();
        checks.push(check("chords_biject_with_lattice", report.chord_count == report.lattice_count));
        checks.push(check("all_indices_zero", report.all_index_zero));
        checks.push(check("action_bridge_bound", report.bridge_ok));
        checks.push(check("radial_growth", report.radial_ok));
    }
    let value = json!({
        "command": "chords",
        "checks": checks,
        "count": chords.len(),
        "chords": rows,
    });
    Ok((value, ok))
}

pub fn run_mf_verify(d: i64, n: i64, novikov_trunc: Option<&str>) -> Result<(Value, bool)> {
    let spec = RingSpec::invertible(d, n);
    let mut mf_ok = true;
    for i in 1..=3 {
        mf_ok &= verify_mf(&e_single::<Rat>(i, &spec)?, &spec).pass();
    }
    mf_ok &= verify_mf(&e_sum::<Rat>(&spec)?, &spec).pass();
    let (_, contraction_ok) = contraction_e3::<Rat>(&spec)?;
    let phi = verify_phi3(&spec)?;
    let tau12_ok = tau12_check(&spec, 2 * spec.n_cap)?;
    let mut report = json!({
        "mf_ok": mf_ok,
        "contraction_ok": contraction_ok,
        "phi3_closed": phi.closed_ok,
        "phi3_mult": phi.multiplicative_ok,
        "quasi_iso_dims": {
            "interior_even": phi.interior_even,
            "interior_odd": phi.interior_odd,
            "expected_even": phi.expected_even,
            "expected_odd": phi.expected_odd,
            "even_per_integer_exponent": 2,
            "odd_per_half_integer_exponent": 2,
            "spanned_by_phi3": phi.spanned_ok,
        },
        "tau12_ok": tau12_ok,
    });
    let mut ok = mf_ok && contraction_ok && phi.pass() && tau12_ok;
    if let Some(tr) = novikov_trunc {
        use tropants_core::novikov::NovikovScalar;
        let _trunc = rat_from_str(tr)?;
        let nmf = verify_mf(&e_sum::<NovikovScalar>(&spec)?, &spec).pass();
        let (_, ncontr) = contraction_e3::<NovikovScalar>(&spec)?;
        report["novikov_mode"] = json!({ "mf_ok": nmf, "contraction_ok": ncontr, "trunc": tr });
        ok &= nmf && ncontr;
    }
    Ok((report, ok))
}

pub fn run_graph(fx: &GraphFixture) -> Result<(Value, bool)> {
    let g = fx.graph();
    let report = validate_graph(&g)?;
    if !report.valid {
        let value = json!({
            "command": "graph",
            "checks": [check("trivalent", false)],
            "bad_vertices": report.bad_vertices,
        });
        return Ok((value, false));
    }
    let surface = surface_invariants(&g)?;
    let cover = fx.cover(&g)?;
    let cover_report = validate_cover(&g, &cover)?;
    let components = if cover_report.valid {
        let c = cover_components(&g, &cover)?;
        json!({ "circles": c.circles, "arcs": c.arcs })
    } else {
        json!(null)
    };
    let ok = report.valid && cover_report.valid;
    let value = json!({
        "command": "graph",
        "checks": [
            check("trivalent", report.valid),
            check("cover_valid", cover_report.valid),
        ],
        "connected": report.connected,
        "surface": surface.overall.map(|s| json!({
            "genus": s.genus, "ends": s.ends, "euler": s.euler,
        })),
        "per_component": surface.per_component.iter().map(|s| json!({
            "genus": s.genus, "ends": s.ends, "euler": s.euler,
        })).collect::<Vec<_>>(),
        "cover_failures": cover_report.failures,
        "cover_components": components,
    });
    Ok((value, ok))
}

pub fn run_atlas(fx: &GraphFixture) -> Result<(Value, bool)> {
    let g = fx.graph();
    let cover = fx.cover(&g)?;
    let orders = fx.cyclic_order_list(&g);
    let atlas = build_atlas(&g, &cover, &orders)?;
    let spec = RingSpec::invertible(3, 3);
    let validation = validate_atlas(&g, &atlas, &spec)?;
    let pants_model = tropants_core::mf::restrict_to_tropical_pants(3, 3)?;
    let ok = validation.ok && pants_model.pass();
    let value = json!({
        "command": "atlas",
        "checks": [
            check("transitions_compatible", validation.ok),
            check("leg_quasi_isomorphisms_closed", pants_model.pass()),
        ],
        "transitions": atlas.transitions,
        "vertex_chirality": atlas.vertex_chirality,
        "edges": validation.edges,
        "clash_vertex": validation.clash_vertex,
        "vertex_rank": pants_model.vertex_rank,
    });
    Ok((value, ok))
}

/// The full regression battery over the embedded fixtures.
pub fn run_regress() -> Result<(Value, bool)> {
    use crate::fixtures::{embedded, load_graph, load_lift, parse_json};
    fn push(
        lines: &mut Vec<(String, bool)>,
        name: &str,
        r: Result<(Value, bool)>,
    ) -> Result<Value> {
        let (v, ok) = r?;
        lines.push((name.to_string(), ok));
        Ok(v)
    }
    let mut lines: Vec<(String, bool)> = Vec::new();

    let genus2 = load_lift("genus2", embedded::GENUS2)?;
    let v = push(&mut lines, "genus2:validate", run_validate(&genus2))?;
    let pass_counts = v["pants"] == json!(8) && v["genus"] == json!(2) && v["ends"] == json!(6);
    lines.push(("genus2:counts(8,2,6)".into(), pass_counts));
    let v = push(&mut lines, "genus2:legendre", run_legendre(&genus2))?;
    lines.push((
        "genus2:two_compact_cells".into(),
        v["compact_cells"] == json!(2) && v["maximal_cells"] == json!(8),
    ));
    push(&mut lines, "genus2:degenerate", run_degenerate(&genus2, Some(2), 1))?;
    let v = push(&mut lines, "genus2:central-fiber", run_central_fiber(&genus2))?;
    let surfaces: Vec<&Value> = v["components"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["compact"] == json!(true))
        .collect();
    lines.push((
        "genus2:compact_components_Bl1(P1xP1)".into(),
        surfaces.len() == 2
            && surfaces
                .iter()
                .all(|c| c["surface"] == json!("Bl1(P1xP1)=Bl2(P2)")),
    ));

    let node: PeriodicFixture = parse_json("node", embedded::NODE)?;
    let v = push(&mut lines, "node:periodic(max-degree=6)", run_periodic(&node, 6))?;
    lines.push((
        "node:hilbert=1..6".into(),
        v["hilbert"] == json!([1, 2, 3, 4, 5, 6]),
    ));
    lines.push((
        "node:generators(a,b,c)".into(),
        v["generators"]
            == json!([
                { "degree": 1, "nums": [0, 0] },
                { "degree": 2, "nums": [1, 1] },
                { "degree": 3, "nums": [1, 1] },
            ]),
    ));
    lines.push((
        "node:relation_in_degree_6".into(),
        v["relations"]
            .as_array()
            .unwrap()
            .iter()
            .any(|r| r["degree"] == json!(6)),
    ));
    push(&mut lines, "node:theta-check", run_theta(&node, 5))?;

    let genus5: PeriodicFixture = parse_json("genus5", embedded::GENUS5)?;
    let v = push(&mut lines, "genus5:periodic(max-degree=2)", run_periodic(&genus5, 2))?;
    lines.push((
        "genus5:eight_cells_genus_5".into(),
        v["cells_per_domain"] == json!(8) && v["genus"] == json!(5),
    ));
    let comps = v["components"].as_array().unwrap();
    lines.push((
        "genus5:four_hexagonal_Bl3(P2)".into(),
        comps.len() == 4
            && comps
                .iter()
                .all(|c| c["walls"] == json!(6) && c["surface"] == json!("Bl3(P2)")),
    ));
    push(&mut lines, "genus5:theta-check", run_theta(&genus5, 5))?;

    let flat: NovikovFixture = parse_json("novikov_flat", embedded::NOVIKOV_FLAT)?;
    let v = push(&mut lines, "novikov:flat_tail", run_novikov(&flat))?;
    lines.push(("novikov:flat_member".into(), v["member"] == json!(true)));
    let punctured: NovikovFixture = parse_json("novikov_punctured", embedded::NOVIKOV_PUNCTURED)?;
    let v = push(&mut lines, "novikov:punctured_disc", run_novikov(&punctured))?;
    lines.push((
        "novikov:punctured_member".into(),
        v["member"] == json!(true),
    ));
    let bad: NovikovFixture = parse_json("novikov_bad", embedded::NOVIKOV_BAD)?;
    let v = push(&mut lines, "novikov:wrong_side", run_novikov(&bad))?;
    lines.push(("novikov:wrong_side_rejected".into(), v["member"] == json!(false)));

    let disc: HamiltonianFixture = parse_json("disc", embedded::DISC)?;
    let v = push(&mut lines, "chords:disc", run_chords(&disc))?;
    lines.push(("chords:disc_count_21".into(), v["count"] == json!(21)));
    let quad: HamiltonianFixture = parse_json("quadratic", embedded::QUADRATIC)?;
    push(&mut lines, "chords:quadratic", run_chords(&quad))?;

    push(&mut lines, "mf-verify(D=4,N=6)", run_mf_verify(4, 6, None))?;

    for (name, data, expect_ok) in [
        ("pants", embedded::PANTS, true),
        ("theta", embedded::THETA, true),
        ("dumbbell", embedded::DUMBBELL, true),
    ] {
        let fx = load_graph(name, data)?;
        let v = push(&mut lines, &format!("graph:{name}"), run_graph(&fx))?;
        let _ = (v, expect_ok);
        let fx2 = load_graph(name, data)?;
        push(&mut lines, &format!("atlas:{name}"), run_atlas(&fx2))?;
    }
    // the chirality clash must fail with a named vertex
    let clash = load_graph("theta_clash", embedded::THETA_CLASH)?;
    let (v, ok) = run_atlas(&clash)?;
    lines.push((
        "atlas:clash_detected".into(),
        !ok && v["clash_vertex"] == json!(1),
    ));

    let all_ok = lines.iter().all(|(_, ok)| *ok);
    let value = json!({
        "command": "regress",
        "checks": lines.iter().map(|(n, ok)| check(n, *ok)).collect::<Vec<_>>(),
        "total": lines.len(),
        "failed": lines.iter().filter(|(_, ok)| !ok).count(),
    });
    Ok((value, all_ok))
}
