//! Cross-module property tests: invariance under lattice symmetries,
//! bookkeeping identities, and representative independence.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use num_traits::Zero;
use tropants_core::periodic::{
    class_basis, genus5_fixture, node_fixture, quotient_multiply, PeriodicTriangulation,
    PolarizedTropicalAV, QuasiPeriodicLift, QuotientGradedPoint,
};
use tropants_core::rat::{rat, Rat};
use tropants_core::toric::{multiply, surface_from_ray_cycle, GradedPoint};
use tropants_core::tropical::{
    induced_subdivision, legendre_transform, normalized_volume, LiftFunction, Simplex,
};
use tropants_core::vecops::dot_i;

/// Random GL_n(Z) matrix as a product of elementary shears and swaps.
fn random_unimodular(rng: &mut StdRng, n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..8 {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        match rng.gen_range(0..3) {
            0 => {
                let c = rng.gen_range(-2..=2i64);
                for k in 0..n {
                    m[i][k] += c * m[j][k];
                }
            }
            1 => m.swap(i, j),
            _ => {
                for k in 0..n {
                    m[i][k] = -m[i][k];
                }
            }
        }
    }
    m
}

fn apply(m: &[Vec<i64>], p: &[i64]) -> Vec<i64> {
    m.iter().map(|row| dot_i(row, p)).collect()
}

#[test]
fn normalized_volume_is_a_lattice_invariant() {
    let mut rng = StdRng::seed_from_u64(7);
    let points = vec![
        vec![0, 0, 0],
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![1, 1, 2],
        vec![2, 0, 1],
    ];
    let simplices = [
        Simplex::new(vec![0, 1, 2, 3]),
        Simplex::new(vec![0, 1, 2, 4]),
        Simplex::new(vec![1, 2, 3, 4]),
    ];
    for _ in 0..25 {
        let g = random_unimodular(&mut rng, 3);
        let shift: Vec<i64> = (0..3).map(|_| rng.gen_range(-4..=4i64)).collect();
        let moved: Vec<Vec<i64>> = points
            .iter()
            .map(|p| {
                apply(&g, p)
                    .iter()
                    .zip(&shift)
                    .map(|(a, b)| a + b)
                    .collect()
            })
            .collect();
        for s in &simplices {
            assert_eq!(normalized_volume(s, &points), normalized_volume(s, &moved));
        }
    }
}

#[test]
fn surface_id_is_gl2_invariant() {
    let mut rng = StdRng::seed_from_u64(11);
    // del Pezzo 6 fan and the 5-ray fan
    let fans = [
        vec![
            vec![1, 0],
            vec![0, 1],
            vec![-1, 1],
            vec![-1, 0],
            vec![0, -1],
            vec![1, -1],
        ],
        vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, 0], vec![-1, -1]],
    ];
    for fan in &fans {
        let base = surface_from_ray_cycle(fan.clone()).unwrap();
        for _ in 0..25 {
            let g = random_unimodular(&mut rng, 2);
            let moved: Vec<Vec<i64>> = fan.iter().map(|r| apply(&g, r)).collect();
            let id = surface_from_ray_cycle(moved).unwrap();
            assert_eq!(id.name, base.name);
            // the self-intersection cycle is preserved up to rotation and
            // reflection
            let mut doubled = base.selfint.clone();
            doubled.extend(base.selfint.iter().copied());
            let mut reversed = doubled.clone();
            reversed.reverse();
            let found = doubled
                .windows(base.selfint.len())
                .chain(reversed.windows(base.selfint.len()))
                .any(|w| w == id.selfint.as_slice());
            assert!(found, "{:?} vs {:?}", base.selfint, id.selfint);
        }
    }
}

#[test]
fn graded_multiplication_is_commutative_and_associative() {
    let mut rng = StdRng::seed_from_u64(13);
    let lift = LiftFunction::new(1, vec![(vec![0], 0), (vec![1], 0)]).unwrap();
    let psi = legendre_transform(&lift, None).unwrap();
    for _ in 0..50 {
        let mk = |rng: &mut StdRng| {
            let degree = rng.gen_range(1..=4i64);
            GradedPoint::new(
                degree,
                vec![rng.gen_range(-6..=6i64), rng.gen_range(0..=6i64)],
            )
            .unwrap()
        };
        let (a, b, c) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
        let ab = multiply(&a, &b, &psi).unwrap();
        let ba = multiply(&b, &a, &psi).unwrap();
        assert_eq!(ab.point, ba.point);
        assert_eq!(ab.height, ba.height);
        let ab_c = multiply(&ab.point, &c, &psi).unwrap();
        let bc = multiply(&b, &c, &psi).unwrap();
        let a_bc = multiply(&a, &bc.point, &psi).unwrap();
        assert_eq!(ab_c.point, a_bc.point);
        // total t-power bookkeeping is associative: the final height only
        // depends on the product point
        assert_eq!(ab_c.height, a_bc.height);
    }
}

#[test]
fn cell_count_duality() {
    // maximal dual cells biject with support points that are subdivision
    // vertices
    let fixtures: Vec<LiftFunction> = vec![
        LiftFunction::new(1, vec![(vec![0], 0), (vec![1], 0), (vec![2], 0)]).unwrap(),
        LiftFunction::new(1, vec![(vec![0], 1), (vec![1], 0), (vec![2], 1)]).unwrap(),
        {
            let support: Vec<Vec<i64>> = vec![
                vec![1, 0],
                vec![0, 1],
                vec![1, 1],
                vec![2, 1],
                vec![1, 2],
                vec![2, 2],
                vec![3, 2],
                vec![2, 3],
            ];
            let values = vec![2, 2, 0, 1, 1, 0, 2, 2];
            LiftFunction::new(2, support.into_iter().zip(values)).unwrap()
        },
    ];
    for lift in &fixtures {
        let sub = induced_subdivision(lift).unwrap();
        let mut vertex_ids = std::collections::BTreeSet::new();
        for cell in &sub.cells {
            // vertices of the cell: points that are extreme in it; for
            // simplicial cells every point is a vertex, otherwise check
            // extremality against the cell hull
            let pts: Vec<Vec<Rat>> = cell
                .point_ids
                .iter()
                .map(|&i| sub.points[i].iter().map(|&x| rat(x)).collect())
                .collect();
            for (k, &i) in cell.point_ids.iter().enumerate() {
                let others: Vec<Vec<Rat>> = pts
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, p)| p.clone())
                    .collect();
                if !tropants_core::tropical::point_in_hull(&pts[k], &others) {
                    vertex_ids.insert(i);
                }
            }
        }
        let psi = legendre_transform(lift, None).unwrap();
        assert_eq!(psi.cells.len(), vertex_ids.len());
    }
}

#[test]
fn quotient_multiply_is_representative_independent() {
    let (lift, tri) = node_fixture();
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..20 {
        let degree_a = rng.gen_range(1..=3i64);
        let degree_b = rng.gen_range(1..=3i64);
        let basis_a = class_basis(&lift, &tri, degree_a).unwrap();
        let basis_b = class_basis(&lift, &tri, degree_b).unwrap();
        let a = basis_a[rng.gen_range(0..basis_a.len())].clone();
        let b = basis_b[rng.gen_range(0..basis_b.len())].clone();
        let t = Rat::new(1.into(), (degree_a + degree_b).into());
        let ab = quotient_multiply(&lift, &tri, &a, &b, &t).unwrap();
        let ba = quotient_multiply(&lift, &tri, &b, &a, &t).unwrap();
        assert_eq!(ab, ba, "swapping the fixed factor changed the terms");
    }
}

#[test]
fn hilbert_dimensions_are_fundamental_domain_independent() {
    // same lattice 2Z x 2Z presented by two different bases
    let (reference, tri) = genus5_fixture();
    let skew_av = PolarizedTropicalAV::new(
        2,
        vec![vec![2, 2], vec![0, 2]],
        vec![vec![6, 2], vec![2, 6]],
    )
    .unwrap();
    let skew = QuasiPeriodicLift::new(skew_av, reference.base_values.clone()).unwrap();
    for k in 1..=3i64 {
        let a = class_basis(&reference, &tri, k).unwrap().len();
        let b = class_basis(&skew, &tri, k).unwrap().len();
        assert_eq!(a, b, "degree {k}");
    }
}

#[test]
fn quotient_superadditivity_weighted_on_genus5() {
    let (lift, tri) = genus5_fixture();
    let mut rng = StdRng::seed_from_u64(23);
    let basis1 = class_basis(&lift, &tri, 1).unwrap();
    for _ in 0..10 {
        let a = basis1[rng.gen_range(0..basis1.len())].clone();
        let mut b = basis1[rng.gen_range(0..basis1.len())].clone();
        // lift b by a t-power: height 1
        *b.nums.last_mut().unwrap() += 1;
        let b = QuotientGradedPoint {
            degree: b.degree,
            nums: b.nums,
            height: b.height + rat(1),
        };
        let terms = quotient_multiply(&lift, &tri, &a, &b, &rat(10)).unwrap();
        assert!(!terms.is_empty());
        for (t, _) in &terms {
            let lhs = rat(2) * &t.height;
            let rhs = rat(1) * &a.height + rat(1) * &b.height;
            assert!(lhs >= rhs);
        }
    }
}

#[test]
fn periodic_pl_is_integral_on_degree_lattices() {
    // the extension takes values in (1/k)Z on (1/k)Z^n, which is what makes
    // every class carry a height-zero representative
    let (lift, tri) = node_fixture();
    for k in 1..=6i64 {
        for j in 0..k {
            let x = vec![Rat::new(j.into(), k.into())];
            let v = tropants_core::periodic::eval_periodic_pl(&lift, &tri, &x).unwrap();
            let scaled = v * rat(k);
            assert!(tropants_core::rat::is_integer(&scaled));
        }
    }
}

#[test]
fn height_zero_terms_only_in_mod_t_products() {
    let (lift, tri) = node_fixture();
    let basis2 = class_basis(&lift, &tri, 2).unwrap();
    let basis3 = class_basis(&lift, &tri, 3).unwrap();
    for a in &basis2 {
        for b in &basis3 {
            let t = Rat::new(1.into(), 5.into());
            let terms = quotient_multiply(&lift, &tri, a, b, &t).unwrap();
            for (term, mult) in &terms {
                assert!(term.height.is_zero());
                assert!(*mult >= 1);
            }
        }
    }
}

#[test]
fn periodic_fixture_triangle_count_matches_euler() {
    // χ(M) = -#pants: 8 triangles per domain for genus 5, 2 for genus 2
    let (_, tri5) = genus5_fixture();
    assert_eq!(tri5.cells_per_domain(), 8);
    let two = PeriodicTriangulation {
        triangles: vec![vec![], vec![]],
    };
    assert_eq!(
        tropants_core::periodic::periodic_genus(&two).unwrap(),
        2
    );
}

#[test]
fn big_triangle_with_strictly_convex_lift() {
    // conv{(0,0),(3,0),(0,3)} with the strictly convex quadratic-type lift
    // x² + xy + y² on its ten lattice points: genus 1, 9 ends, 9 pants
    let mut entries = Vec::new();
    for x in 0..=3i64 {
        for y in 0..=(3 - x) {
            entries.push((vec![x, y], x * x + x * y + y * y));
        }
    }
    let lift = LiftFunction::new(2, entries).unwrap();
    let tri = tropants_core::tropical::induced_triangulation(&lift).unwrap();
    let check = tropants_core::tropical::check_unimodular_regular(&lift, &tri).unwrap();
    assert!(check.pass(), "{:?}", check.failures);
    let (genus, ends, pants) = tropants_core::toric::genus_and_ends(&lift).unwrap();
    assert_eq!((genus, ends, pants), (Some(1), Some(9), 9));
}

#[test]
fn quotient_multiply_guard_aborts_on_absurd_truncation() {
    let (lift, tri) = node_fixture();
    let a = QuotientGradedPoint {
        degree: 1,
        nums: vec![0, 0],
        height: rat(0),
    };
    let err = quotient_multiply(&lift, &tri, &a, &a, &rat(100_000_000)).unwrap_err();
    assert!(matches!(
        err,
        tropants_core::error::Error::EnumerationGuard(_)
    ));
}

#[test]
fn phi3_refuses_tiny_windows() {
    use tropants_core::mf::{verify_phi3, RingSpec};
    let spec = RingSpec::invertible(4, 1);
    assert!(verify_phi3(&spec).is_err());
}

#[test]
fn quotient_multiply_certified_box_misses_no_terms() {
    // brute-force sweep over a wide explicit translate range must agree
    // with the certified enumeration
    let (lift, tri) = node_fixture();
    use tropants_core::periodic::class_normal_form;
    use tropants_core::toric::GradedPoint as GP;
    let cases = [
        ((1i64, vec![0i64, 0]), (2i64, vec![1i64, 1]), 3i64),
        ((2, vec![1, 1]), (2, vec![1, 1]), 4),
        ((1, vec![0, 0]), (3, vec![2, 2]), 4),
        ((3, vec![1, 1]), (3, vec![2, 2]), 6),
    ];
    for ((ka, na), (kb, nb), kout) in cases {
        let a = class_normal_form(&lift, &tri, &GP::new(ka, na.clone()).unwrap()).unwrap();
        let b = class_normal_form(&lift, &tri, &GP::new(kb, nb.clone()).unwrap()).unwrap();
        let trunc = Rat::new(1.into(), kout.into());
        let fast = quotient_multiply(&lift, &tri, &a, &b, &trunc).unwrap();
        // wide manual sweep: translates of b in [-10, 10]
        let mut manual: std::collections::BTreeMap<Vec<i64>, i64> = std::collections::BTreeMap::new();
        for g in -10..=10i64 {
            let shifted = tropants_core::periodic::translate_rep(&lift, kb, &b.nums, &[g]);
            let prod = GP::new(
                kout,
                a.nums.iter().zip(&shifted).map(|(x, y)| x + y).collect(),
            )
            .unwrap();
            let nf = class_normal_form(&lift, &tri, &prod).unwrap();
            if nf.height < trunc {
                *manual.entry(nf.nums).or_insert(0) += 1;
            }
        }
        let fast_map: std::collections::BTreeMap<Vec<i64>, i64> =
            fast.into_iter().map(|(t, m)| (t.nums, m)).collect();
        assert_eq!(fast_map, manual, "a={na:?}/{ka} b={nb:?}/{kb}");
    }
}

#[test]
fn quadratic_piece_with_kernel_direction_falls_back_to_the_affine_test() {
    use tropants_core::novikov::{section_membership, Piece, Region, ValuationSpec};
    // val = v1² on the upper half plane cone(e1, -e1, e2): along e2 the
    // quadratic term vanishes, so the affine condition must decide
    let spec = ValuationSpec::new(
        2,
        vec![Piece {
            cone_rays: vec![vec![1, 0], vec![-1, 0], vec![0, 1]],
            a: rat(0),
            w: vec![rat(0), rat(0)],
            quad: Some(vec![vec![2, 0], vec![0, 0]]),
        }],
        vec![],
    )
    .unwrap();
    // region with second coordinate positive: (w - b)·e2 = -b2 < 0 inside
    let upper = Region {
        vertices: vec![
            vec![rat(0), rat(1)],
            vec![rat(1), rat(1)],
            vec![rat(0), rat(2)],
            vec![rat(1), rat(2)],
        ],
        rays: vec![],
        open: true,
    };
    assert!(!section_membership(&spec, &upper).unwrap().member);
    // region with second coordinate negative: fine
    let lower = Region {
        vertices: vec![
            vec![rat(0), rat(-2)],
            vec![rat(1), rat(-2)],
            vec![rat(0), rat(-1)],
            vec![rat(1), rat(-1)],
        ],
        rays: vec![],
        open: true,
    };
    assert!(section_membership(&spec, &lower).unwrap().member);
}
