mod common;

use std::collections::HashSet;

use common::{plane_annulus_components, OBall, OGroup, ALL_SPECS};
use proptest::prelude::*;
use spherescope::topology::SimpleConnectivity;
use spherescope::{
    build_ball, AnalysisError, BallTable, ComponentClass, Element, EndsHint, Explorer, GroupModel,
    Guard, Region, TailVerdict,
};

fn ball(spec: &str, n: u32) -> BallTable {
    build_ball(&GroupModel::from_spec(spec).unwrap(), n).unwrap()
}

fn lat(v: &[i64]) -> Element {
    Element::Lattice(v.to_vec())
}

/// Library vertex of every oracle vertex.
fn vertex_map(b: &BallTable, o: &OBall) -> Vec<u32> {
    let m = b.model();
    o.word
        .iter()
        .map(|w| b.lookup(&m.trace(&m.identity(), w.iter().copied())).unwrap())
        .collect()
}

#[test]
fn complement_examples() {
    let b = ball("z", 12);
    let ex = Explorer::new(&b);
    let map = ex.complement_components(4).unwrap();
    assert_eq!((map.horizon_count(), map.enclosed_count()), (2, 0));
    assert_eq!(ex.infinite_part(4).unwrap().len(), 16);

    let b = ball("zd:2", 12);
    let ex = Explorer::new(&b);
    let map = ex.complement_components(4).unwrap();
    assert_eq!((map.horizon_count(), map.enclosed_count()), (1, 0));
    let o = OBall::new(OGroup::for_spec("zd:2"), 12);
    assert_eq!(map.infinite_part_size(), o.infinite_part(4).len());
    assert_eq!(map.infinite_part_size(), b.len() - b.ball_range(4).len());

    // one component per vertex of S_3
    let b = ball("free:2", 8);
    let map = Explorer::new(&b).complement_components(2).unwrap();
    assert_eq!(map.horizon_count(), b.sphere_size(3).unwrap());
    assert_eq!(map.enclosed_count(), 0);
}

#[test]
fn lamplighter_classification_matches_oracle() {
    let b = ball("lamplighter2", 10);
    let ex = Explorer::new(&b);
    let o = OBall::new(OGroup::for_spec("lamplighter2"), 10);
    let to_lib = vertex_map(&b, &o);
    let map = ex.complement_components(3).unwrap();
    let oracle = o.complement(3);
    assert_eq!(map.components().len(), oracle.len());
    for (comp, horizon) in &oracle {
        let ids: HashSet<usize> = comp
            .iter()
            .map(|&x| map.component_of(to_lib[x]).unwrap())
            .collect();
        assert_eq!(ids.len(), 1);
        let info = &map.components()[*ids.iter().next().unwrap()];
        assert_eq!(info.size, comp.len());
        assert_eq!(info.class == ComponentClass::Horizon, *horizon);
    }
    let part = ex.infinite_part(3).unwrap();
    assert_eq!(part.len(), o.infinite_part(3).len());
    assert!(part
        .vertices()
        .iter()
        .all(|&v| map.is_horizon(v) && b.length(v) > 3));
}

#[test]
fn thick_sphere_examples() {
    let b = ball("zd:2", 12);
    let ex = Explorer::new(&b);
    let thick = ex.thick_sphere_components(5, 1).unwrap();
    // S_6 of the L1 norm has 24 points and no edges among them
    assert_eq!(thick.component_count, plane_annulus_components(5, 6));
    assert_eq!(thick.component_count, 24);
    assert_eq!(thick.witnesses(&b).len(), 24);

    let b = ball("z", 12);
    assert_eq!(
        Explorer::new(&b)
            .thick_sphere_components(5, 1)
            .unwrap()
            .component_count,
        2
    );

    let b = ball("free:2", 8);
    assert_eq!(
        Explorer::new(&b)
            .thick_sphere_components(3, 1)
            .unwrap()
            .component_count,
        108
    );
}

#[test]
fn plane_scans_against_coordinate_flood_fill() {
    let b = ball("zd:2", 14);
    let ex = Explorer::new(&b);
    for r in 1..=3 {
        let n_max = ex.max_inner_radius(r).unwrap();
        let scan = ex.scan_connected_spheres(r, n_max).unwrap();
        let want: Vec<usize> = (0..=n_max as i64)
            .map(|n| plane_annulus_components(n, n + r as i64))
            .collect();
        assert_eq!(scan.counts(), want, "r = {r}");
    }
}

#[test]
fn heisenberg_is_connected_at_relator_thickness() {
    let b = ball("heisenberg:xyz", 14);
    let ex = Explorer::new(&b);
    let scan = ex.scan_connected_spheres(3, 8).unwrap();
    assert_eq!(scan.counts(), vec![1; 9]);
    let search = ex.min_connecting_radius(8, 3).unwrap();
    assert!(search.radius.unwrap() <= 3);
}

#[test]
fn lamplighter_scan_finds_a_witness() {
    let b = ball("lamplighter2", 14);
    let ex = Explorer::new(&b);
    let scan = ex.scan_connected_spheres(2, 10).unwrap();
    let row = scan.first_disconnected().expect("disconnected thick sphere");
    assert!(row.component_count >= 2);
    assert_eq!(row.witnesses(&b).len(), row.component_count);
}

#[test]
fn radius_search_examples() {
    let b = ball("z", 16);
    let search = Explorer::new(&b).min_connecting_radius(8, 4).unwrap();
    assert_eq!(search.radius, None);
    assert!(search.tried.iter().all(|(_, c)| c.iter().all(|&k| k == 2)));

    // a single L1 sphere is never connected; two layers are
    let b = ball("zd:2", 14);
    let search = Explorer::with_guard(&b, Guard::fixed(4))
        .min_connecting_radius(8, 3)
        .unwrap();
    assert_eq!(search.radius, Some(2));
    let r1: Vec<usize> = (0..=8).map(|n| plane_annulus_components(n, n + 1)).collect();
    assert_eq!(search.tried[0], (1, r1));
}

#[test]
fn region_examples() {
    let b = ball("zd:2", 14);
    let ex = Explorer::new(&b);
    let sc = |omega: &Region| -> SimpleConnectivity { ex.is_simply_connected_region(omega).unwrap() };

    assert!(sc(&Region::ball(&b, 3)).simply_connected);
    let pair = Region::from_elements(&b, [&lat(&[0, 0]), &lat(&[5, 5])]).unwrap();
    let pair = sc(&pair);
    assert!(!pair.simply_connected);
    assert_eq!(pair.region_components, 2);
    let annulus = sc(&Region::annulus(&b, 2, 5));
    assert!(!annulus.simply_connected);
    assert_eq!(annulus.complement_components, 2);

    let shell = |omega: &Region, r| ex.shell_components(omega, r).unwrap().len();
    let o = OBall::new(OGroup::for_spec("zd:2"), 14);
    let oracle_shell = |inner: i64, outer: i64| {
        let members: HashSet<usize> = (0..o.len())
            .filter(|&x| (o.length[x] as i64) > inner && (o.length[x] as i64) <= outer)
            .collect();
        o.components(&members).len()
    };
    assert_eq!(shell(&Region::ball(&b, 3), 3), oracle_shell(3, 6));
    assert_eq!(shell(&Region::ball(&b, 3), 3), 1);
    let identity = Region::ball(&b, 0);
    assert_eq!(shell(&identity, 3), oracle_shell(0, 3));
    assert_eq!(shell(&identity, 3), 1);
    assert_eq!(shell(&identity, 1), 4);

    assert!(matches!(
        ex.shell_components(&Region::annulus(&b, 2, 5), 1),
        Err(AnalysisError::NotSimplyConnected { .. })
    ));
    assert!(matches!(
        ex.is_simply_connected_region(&Region::ball(&b, 12)),
        Err(AnalysisError::GuardViolated { .. })
    ));
}

#[test]
fn ends_examples() {
    let b = ball("z", 12);
    let p = Explorer::new(&b).ends_profile(1, 8).unwrap();
    assert_eq!(p.scan.counts(), vec![2; 9]);
    assert_eq!(p.verdict, TailVerdict::StabilizesAt(2));
    assert_eq!(p.ends, Some(EndsHint::Two));

    let b = ball("free:2", 10);
    let p = Explorer::new(&b).ends_profile(1, 5).unwrap();
    let want: Vec<usize> = (0..=5).map(|n| 4 * 3usize.pow(n)).collect();
    assert_eq!(p.scan.counts(), want);
    assert_eq!(p.ends, Some(EndsHint::Infinite));

    let b = ball("zd:2", 12);
    let p = Explorer::new(&b).ends_profile(2, 8).unwrap();
    assert_eq!(p.scan.counts(), vec![1; 9]);
    assert_eq!(p.ends, Some(EndsHint::One));
    // one layer is too thin: the counts track |S_{n+1}| and keep growing
    let p = Explorer::new(&b).ends_profile(1, 8).unwrap();
    assert_eq!(p.verdict, TailVerdict::Grows);
}

#[test]
fn guard_is_enforced() {
    let b = ball("zd:2", 10);
    let ex = Explorer::new(&b);
    assert!(ex.thick_sphere_components(6, 1).is_ok());
    assert!(matches!(
        ex.thick_sphere_components(7, 1),
        Err(AnalysisError::GuardViolated { .. })
    ));
    assert!(ex.scan_connected_spheres(3, 5).is_err());
    assert!(Explorer::with_guard(&b, Guard::fixed(0))
        .complement_components(9)
        .is_ok());
}

/// Component partitions and thick-sphere counts of every model on `B_6`
/// agree with flood fill over the oracle ball (no guard).
#[test]
fn components_match_oracle_on_b6() {
    for spec in ALL_SPECS {
        let b = ball(spec, 6);
        let ex = Explorer::with_guard(&b, Guard::fixed(0));
        let o = OBall::new(OGroup::for_spec(spec), 6);
        let to_lib = vertex_map(&b, &o);
        for n in 0..6 {
            let map = ex.complement_components(n).unwrap();
            let oracle = o.complement(n as i64);
            assert_eq!(map.components().len(), oracle.len(), "{spec} n={n}");
            for (comp, horizon) in &oracle {
                let id = map.component_of(to_lib[comp[0]]).unwrap();
                assert!(comp.iter().all(|&x| map.component_of(to_lib[x]) == Some(id)));
                assert_eq!(map.components()[id].size, comp.len());
                assert_eq!(map.is_horizon(to_lib[comp[0]]), *horizon, "{spec} n={n}");
            }
            for r in 1..=6 - n {
                assert_eq!(
                    ex.thick_sphere_components(n, r).unwrap().component_count,
                    o.thick_sphere_count(n, r),
                    "{spec} n={n} r={r}"
                );
            }
        }
    }
}

fn spec_strategy() -> impl Strategy<Value = &'static str> {
    prop::sample::select(ALL_SPECS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Enclosed components never reach the horizon; horizon ones do; the
    /// partition covers the complement exactly.
    #[test]
    fn classification_is_sound(spec in spec_strategy(), n in 0u32..5) {
        let b = ball(spec, 9);
        let ex = Explorer::new(&b);
        let map = ex.complement_components(n).unwrap();
        let total: usize = map.components().iter().map(|c| c.size).sum();
        prop_assert_eq!(total, b.len() - b.ball_range(n).len());
        for c in map.components() {
            prop_assert!(c.min_length > n);
            match c.class {
                ComponentClass::Horizon => prop_assert_eq!(c.max_length, 9),
                ComponentClass::EnclosedFinite => prop_assert!(c.max_length < 9),
            }
        }
    }

    /// Every thick-sphere component lies inside one infinite-part component,
    /// and each vertex of the thick sphere is counted once.
    #[test]
    fn thick_spheres_refine_the_infinite_part(spec in spec_strategy(), n in 0u32..3, r in 1u32..3) {
        let b = ball(spec, 9);
        let ex = Explorer::new(&b);
        let map = ex.complement_components(n).unwrap();
        let thick = ex.thick_sphere_components(n, r).unwrap();
        let expect = ex
            .infinite_part(n)
            .unwrap()
            .vertices()
            .iter()
            .filter(|&&v| b.length(v) <= n + r)
            .count();
        prop_assert_eq!(thick.vertex_count(), expect);
        for part in &thick.partition {
            let ids: HashSet<_> = part.iter().map(|&v| map.component_of(v)).collect();
            prop_assert_eq!(ids.len(), 1);
        }
        // a horizon component meets S_{n+1}, so it holds at least one thick component
        prop_assert!(thick.component_count >= thick.horizon_components);
    }
}
