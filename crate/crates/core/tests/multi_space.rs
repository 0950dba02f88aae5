use proptest::prelude::*;
use surfmap::formats::{parse_affine, parse_multigroup};
use surfmap::multi_space::{
    build_cyclic_multigroup, certify, coset, cyclic_group, fixed_points, is_normal, lagrange_decomposition,
    maximal_normal_series_lengths, symmetric_group_3, AffineSelfMap, FixedPointOptions, MetricError, MultiGroupError,
    MultiMetricSpace, SubMultiGroup, Violation, DEFAULT_SERIES_GUARD,
};

const CYCLIC4: &str = include_str!("../../../data/cyclic4.mgroup");
const Z6: &str = include_str!("../../../data/z6.mgroup");
const THREE_PARTS: &str = include_str!("../../../data/three_parts.affine");

fn subgroup_of_zn(n: usize, d: usize) -> SubMultiGroup {
    let g = cyclic_group(n);
    SubMultiGroup::new(&g, vec![Some((0..n).step_by(d).collect())]).unwrap()
}

#[test]
fn the_cyclic_construction_breaks_distribution() {
    assert!(build_cyclic_multigroup(1).is_multigroup());
    for n in 2..=8 {
        let g = build_cyclic_multigroup(n);
        assert!(g.parts().iter().all(|p| p.identity().is_some()));
        assert!(matches!(g.validate(), Err(Violation::Distribution { .. })), "n = {n}");
    }
}

#[test]
fn file_inputs_agree_with_builders() {
    let parsed = parse_multigroup(CYCLIC4).unwrap();
    assert_eq!(parsed.group.parts(), build_cyclic_multigroup(4).parts());
    let z6 = parse_multigroup(Z6).unwrap();
    assert!(z6.group.is_multigroup());
    let d = lagrange_decomposition(&z6.group, &z6.sub.unwrap()).unwrap();
    assert_eq!(d.cosets.len(), 2);
    assert!(certify(&d, 6));
}

#[test]
fn lagrange_on_the_cyclic_construction() {
    let input = parse_multigroup(CYCLIC4).unwrap();
    let h = input.sub.unwrap();
    assert!(h.validate(&input.group).is_ok());
    let d = lagrange_decomposition(&input.group, &h).unwrap();
    assert!(certify(&d, 4));
    let sizes: Vec<usize> = d.cosets.iter().map(|c| c.len()).collect();
    assert_eq!(sizes, vec![2, 2]);
}

#[test]
fn s3_cosets_and_normality() {
    let s3 = symmetric_group_3();
    let a3 = SubMultiGroup::new(&s3, vec![Some(vec![0, 3, 4])]).unwrap();
    let swap = SubMultiGroup::new(&s3, vec![Some(vec![0, 1])]).unwrap();
    assert!(is_normal(&a3, &s3));
    assert!(!is_normal(&swap, &s3));
    assert_eq!(lagrange_decomposition(&s3, &a3).unwrap().cosets.len(), 2);
    assert_eq!(lagrange_decomposition(&s3, &swap).unwrap().cosets.len(), 3);
    assert_eq!(coset(&s3, &a3, 0), [0, 3, 4].into_iter().collect());
}

#[test]
fn series_lengths() {
    let lengths = |g| maximal_normal_series_lengths(&g, DEFAULT_SERIES_GUARD).unwrap().into_iter().collect::<Vec<_>>();
    assert_eq!(lengths(cyclic_group(4)), vec![2]);
    assert_eq!(lengths(cyclic_group(6)), vec![2]);
    assert_eq!(lengths(cyclic_group(8)), vec![3]);
    assert_eq!(lengths(symmetric_group_3()), vec![2]);
    assert!(matches!(
        maximal_normal_series_lengths(&cyclic_group(13), DEFAULT_SERIES_GUARD),
        Err(MultiGroupError::GuardExceeded { .. })
    ));
}

#[test]
fn fixed_points_of_a_three_part_space() {
    let (space, t) = parse_affine(THREE_PARTS).unwrap();
    let points = fixed_points(&space, &t, &FixedPointOptions::default()).unwrap();
    assert_eq!(points.len(), 2);
    assert!((points[0] - 0.5).abs() < 1e-9);
    assert!((points[1] - 2.5).abs() < 1e-9);
}

#[test]
fn metric_errors() {
    let space = MultiMetricSpace::new(vec![(0.0, 1.0)]).unwrap();
    let opts = FixedPointOptions::default();
    let escape = AffineSelfMap::new(vec![(0.5, 3.0)]);
    assert!(matches!(fixed_points(&space, &escape, &opts), Err(MetricError::Escapes { .. })));
    let expand = AffineSelfMap::new(vec![(1.0, 0.0)]);
    assert!(matches!(fixed_points(&space, &expand, &opts), Err(MetricError::NotContraction(_))));
    assert!(matches!(fixed_points(&space, &AffineSelfMap::new(vec![]), &opts), Err(MetricError::PieceCount { .. })));
    assert!(MultiMetricSpace::new(vec![(1.0, 0.0)]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subgroups_of_zn_tile_the_group(n in 1usize..=12, pick in any::<prop::sample::Index>()) {
        let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
        let d = divisors[pick.index(divisors.len())];
        let g = cyclic_group(n);
        let h = subgroup_of_zn(n, d);
        prop_assert!(is_normal(&h, &g));
        prop_assert!(h.validate(&g).is_ok());
        let dec = lagrange_decomposition(&g, &h).unwrap();
        prop_assert!(certify(&dec, n));
        prop_assert_eq!(dec.cosets.len(), d);
        prop_assert!(dec.cosets.iter().all(|c| c.len() == n / d));
    }

    #[test]
    fn cyclic_parts_are_groups_but_never_distribute(n in 2usize..=9) {
        let g = build_cyclic_multigroup(n);
        for (i, p) in g.parts().iter().enumerate() {
            prop_assert_eq!(p.identity(), Some(i));
            for x in 0..n {
                prop_assert_eq!(p.op(x, p.inverse(x).unwrap()), Some(i));
            }
        }
        prop_assert!(!g.is_multigroup());
    }

    /// Part `k` is `[3k, 3k+1]`; self-mapped parts each carry one fixed
    /// point and every other part feeds into a lower one.
    #[test]
    fn affine_contractions(
        layout in prop::collection::vec((-0.9f64..0.9, 0.0f64..1.0, any::<bool>(), any::<prop::sample::Index>()), 1..=5),
    ) {
        let m = layout.len();
        let space = MultiMetricSpace::new((0..m).map(|k| (3.0 * k as f64, 3.0 * k as f64 + 1.0)).collect()).unwrap();
        let mut pieces = Vec::new();
        let mut expected = Vec::new();
        for (k, &(a, s, stay, pick)) in layout.iter().enumerate() {
            let target = if k == 0 || stay { k } else { pick.index(k) };
            let lo = 3.0 * k as f64;
            let low_end = (a * lo).min(a * (lo + 1.0));
            let b = 3.0 * target as f64 + s * (1.0 - a.abs()) - low_end;
            pieces.push((a, b));
            if target == k {
                expected.push(b / (1.0 - a));
            }
        }
        let t = AffineSelfMap::new(pieces);
        let points = fixed_points(&space, &t, &FixedPointOptions::default()).unwrap();
        prop_assert!(!points.is_empty() && points.len() <= m);
        prop_assert_eq!(points.len(), expected.len());
        for (p, e) in points.iter().zip(&expected) {
            prop_assert!((p - e).abs() < 1e-9, "{} vs {}", p, e);
            prop_assert!((t.apply(&space, *p).unwrap() - p).abs() < 1e-9);
        }
    }
}
