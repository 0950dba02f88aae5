use num_rational::Rational64;
use surfmap::comb_map::{GraphError, DEFAULT_ROTATION_GUARD};
use surfmap::formats::{
    parse_affine, parse_blocks, parse_geometry, parse_graph, parse_map, parse_multigroup, parse_splane, InputError,
    SPlaneQuery, SyntaxError,
};
use surfmap::map_geometry::GeometryError;
use surfmap::multi_space::Violation;

const TRIANGLES: &str = include_str!("../../../data/triangles.graph");
const FAR: &str = include_str!("../../../data/far_neighbor.blocks");
const SPLANE: &str = include_str!("../../../data/splane.txt");

fn syntax_at(e: InputError) -> (usize, usize) {
    match e {
        InputError::Syntax(SyntaxError { line, column, .. }) => (line, column),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn map_syntax_positions() {
    assert_eq!(syntax_at(parse_map("(x)").unwrap_err()), (1, 1));
    let e = parse_map("edges: x\n\n(x,q.x)(b.x,ab.x)").unwrap_err();
    assert_eq!(syntax_at(e).0, 3);
}

#[test]
fn maps_survive_a_print_round_trip() {
    let m = parse_map(include_str!("../../../data/k4_torus.map")).unwrap();
    let mut text = format!("edges: {}\n", m.edge_names().join(" "));
    for c in m.cycles() {
        let names: Vec<String> = c.iter().map(|&f| m.flag_name(f)).collect();
        text.push_str(&format!("({})\n", names.join(",")));
    }
    assert_eq!(parse_map(&text).unwrap(), m);
}

#[test]
fn graphs_and_blocks() {
    let g = parse_graph(TRIANGLES).unwrap();
    assert_eq!(g.vertex_count(), 7);
    assert_eq!(g.edges().len(), 10);
    let blocks = parse_blocks(FAR, &g).unwrap();
    assert_eq!(blocks.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 4, 3]);
    let partial = parse_blocks("block p q\n", &g).unwrap();
    assert!(matches!(g.check_multi_embedding(&partial, DEFAULT_ROTATION_GUARD), Err(GraphError::NotAPartition(_))));
    assert!(parse_blocks("block p s\n", &g).is_err());
    assert!(parse_graph("vertex a\nvertex a\n").is_err());
    assert!(parse_graph("vertex a\nedge a b\n").is_err());
}

#[test]
fn geometry_keys_and_angles() {
    let base = include_str!("../../../data/k4_half_pi.geom");
    assert!(parse_geometry::<Rational64>(base).is_ok());
    assert!(parse_geometry::<f64>(base).is_ok());
    let missing = base.replace("mu b.z 1/2 pi\n", "");
    assert!(parse_geometry::<Rational64>(&missing).is_err());
    let unknown = base.replace("mu b.z", "mu ab.q");
    assert!(parse_geometry::<Rational64>(&unknown).is_err());
    let wide = base.replace("mu b.z 1/2 pi", "mu b.z 2 pi");
    assert!(matches!(
        parse_geometry::<Rational64>(&wide),
        Err(InputError::Geometry(GeometryError::AngleOutOfRange { .. }))
    ));
}

#[test]
fn splane_queries() {
    let input = parse_splane::<Rational64>(SPLANE).unwrap();
    assert_eq!(input.queries.len(), 4);
    assert!(matches!(input.queries[0], SPlaneQuery::Incidence(..)));
    assert!(matches!(input.queries[2], SPlaneQuery::Parallel(..)));
    assert!(parse_splane::<Rational64>("point A 0 0\npoint B 1 0\n").is_err());
    assert!(parse_splane::<Rational64>("point A 0 0\npoint B 1 1\npoint C 2 2\n").is_err());
    assert_eq!(syntax_at(parse_splane::<Rational64>("point D 0 0").unwrap_err()), (1, 7));
}

#[test]
fn multigroup_files() {
    let g = parse_multigroup(include_str!("../../../data/z4.mgroup")).unwrap();
    assert!(g.group.is_multigroup());
    assert!(g.sub.is_none());
    let bad = "universe 0 1\npart 0 carrier 0 1\nrow 0 0 0\nrow 0 1 1\nrow 1 0 1\nrow 1 1 1\n";
    assert!(matches!(parse_multigroup(bad).unwrap().group.validate(), Err(Violation::NoInverse { .. })));
    assert!(parse_multigroup("universe 0 1\npart 0 carrier 0 1\nrow 0 0 0\n").is_err());
    assert!(parse_multigroup("universe 0 0\n").is_err());
}

#[test]
fn affine_files() {
    let (space, t) = parse_affine(include_str!("../../../data/two_parts.affine")).unwrap();
    assert_eq!(space.parts().len(), 2);
    assert_eq!(t.pieces().len(), 2);
    assert!(parse_affine("part 0: 0.5*y on [0,1]\n").is_err());
    assert!(parse_affine("part 0: 0.5*x on [1,0]\n").is_err());
    assert!(parse_affine("part 1: 0.5*x on [0,1]\n").is_err());
}
