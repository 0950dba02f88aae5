use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_string_lossy().into_owned()
}

fn surfmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surfmap")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = surfmap(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    surfmap(args).status.code().unwrap()
}

#[test]
fn word_commands() {
    assert_eq!(stdout(&["word-classify", "--word", "a a-"]), "form=sphere\ngenus=0\nchi=2\nstandard=a a-\n");
    let out = stdout(&["word-classify", "--word", "a a b b"]);
    assert!(out.starts_with("form=non-orientable\ngenus=2\nchi=0\n"));
    let out = stdout(&["word-normalize", "--word", "a b c a- b- c-"]);
    assert!(out.contains("form=orientable\ngenus=1\n"), "{out}");
    assert_eq!(code(&["word-classify", "--word", "a b a"]), 1);
    assert_eq!(code(&["word-classify"]), 2);
}

#[test]
fn word_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    std::fs::write(&path, "x y x- y-\n").unwrap();
    let out = stdout(&["word-classify", path.to_str().unwrap()]);
    assert!(out.starts_with("form=orientable\ngenus=1\n"));
}

#[test]
fn map_analyze_plain_and_json() {
    let k4 = data("k4_torus.map");
    let plain = stdout(&["map-analyze", &k4]);
    assert_eq!(plain, "nu=4\neps=6\nphi=2\nchi=0\norientable=true\ngenus=1\n");
    let json = stdout(&["--json", "map-analyze", &k4]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["nu", "eps", "phi", "chi", "orientable", "genus"]);
    assert_eq!(v["genus"], 1);
    assert!(stdout(&["map-analyze", &k4, "--faces"]).contains("face_lengths=4,8\n"));
    assert_eq!(stdout(&["map-analyze", &k4]), plain, "output is reproducible");
}

#[test]
fn dual_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("dual.map");
    let k4 = data("k4_torus.map");
    let dual = stdout(&["map-dual", &k4]);
    std::fs::write(&once, &dual).unwrap();
    assert!(stdout(&["map-analyze", once.to_str().unwrap()]).starts_with("nu=2\neps=6\nphi=4\nchi=0\n"));
    let twice = stdout(&["map-dual", once.to_str().unwrap()]);
    let original = surfmap::formats::parse_map(&std::fs::read_to_string(&k4).unwrap()).unwrap();
    assert_eq!(twice, original.to_string());
}

#[test]
fn graph_commands() {
    assert_eq!(stdout(&["graph-genus", &data("k5.graph")]), "genus=1\nrotation_systems=7776\n");
    assert_eq!(stdout(&["graph-planar", &data("k33.graph")]), "planar=false\n");
    assert_eq!(stdout(&["graph-planar", &data("k4.graph")]), "planar=true\n");
    assert_eq!(code(&["graph-genus", &data("k5.graph"), "--guard", "10"]), 1);
    let out = stdout(&["graph-multiembed", &data("k5.graph"), "--blocks", &data("k5_single.blocks")]);
    assert_eq!(out, "holds=false\nviolation=i\nblock=1\n");
    let out = stdout(&["graph-multiembed", &data("triangles.graph"), "--blocks", &data("far_neighbor_first.blocks")]);
    assert_eq!(out, "holds=false\nviolation=ii\nblock=1\nvertex=v\nneighbor=u\n");
}

#[test]
fn geometry_commands() {
    let out = stdout(&["geom-classify", &data("valency_3_5_half_pi.geom")]);
    assert!(out.contains("a hyperbolic\n") && out.contains("b.a elliptic\n"), "{out}");
    let out = stdout(&["geom-classify", &data("k4_two_thirds_pi.geom"), "--float"]);
    assert!(out.lines().take(4).all(|l| l.contains("euclidean")), "{out}");
    assert_eq!(code(&["geom-classify", &data("k4_upper_bound.geom")]), 1);
    let out = stdout(&["geom-boundary", &data("k4_half_pi.geom"), "--remove", "x"]);
    assert_eq!(out, "boundary=valid\nremoved=x\nkept_faces=1\n");
    assert_eq!(code(&["geom-boundary", &data("k4_half_pi.geom"), "--remove", "x,a.y"]), 1);
    assert_eq!(code(&["geom-classify", &data("k4_half_pi.geom"), "--tolerance", "0.1"]), 2);
}

#[test]
fn splane_command() {
    assert_eq!(stdout(&["splane-query", &data("splane.txt")]), "incidence=1\nincidence=0\nparallel=0\nparallel=0\n");
}

#[test]
fn multigroup_commands() {
    assert_eq!(stdout(&["mgroup-validate", &data("z6_plain.mgroup")]), "multigroup=true\n");
    let out = stdout(&["mgroup-validate", "--cyclic", "3"]);
    assert!(out.starts_with("multigroup=false\nviolation="), "{out}");
    let out = stdout(&["mgroup-lagrange", &data("z6.mgroup")]);
    assert!(out.starts_with("certified=true\n"), "{out}");
    assert_eq!(stdout(&["mgroup-series", &data("z4.mgroup")]), "lengths=2\nsingleton=true\n");
    assert_eq!(code(&["mgroup-lagrange", &data("z6_plain.mgroup")]), 1);
    assert_eq!(code(&["mgroup-validate", "--cyclic", "0"]), 2);
}

#[test]
fn metric_command() {
    let out = stdout(&["metric-fixpoints", &data("banach.affine")]);
    assert!(out.starts_with("count=1\nparts=1\npoints=1.99999"), "{out}");
}

#[test]
fn usage_and_io_errors() {
    assert_eq!(code(&["--json", "--plain", "map-analyze", &data("k4_torus.map")]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["map-analyze", "/nonexistent/file.map"]), 1);
    assert_eq!(code(&["--help"]), 0);
    let out = surfmap(&["map-analyze", &data("k4.graph")]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error: line "), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn verbose_traces_go_to_stderr() {
    let out = surfmap(&["--verbose", "map-analyze", &data("k4_torus.map")]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "nu=4\neps=6\nphi=2\nchi=0\norientable=true\ngenus=1\n");
    assert!(!out.stderr.is_empty());
}
