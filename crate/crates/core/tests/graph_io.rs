use std::io::Write;
use std::path::Path;

use epa_core::graph::{
    apply_perturbation, generate_planted_partition, load_edge_list, parse_edge_list, parse_gml,
    write_edge_list, write_gml, Graph, GraphFormat, LinkIndexSpace, Perturbation,
};
use epa_core::Error;

#[test]
fn loads_edge_list_from_disk() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "0 1\n1 2").unwrap();
    let d = load_edge_list(file.path(), GraphFormat::EdgeList).unwrap();
    assert_eq!((d.graph.node_count(), d.graph.edge_count()), (3, 2));

    let mut dup = tempfile::NamedTempFile::new().unwrap();
    writeln!(dup, "0 1\n1 0").unwrap();
    let d = load_edge_list(dup.path(), GraphFormat::EdgeList).unwrap();
    assert_eq!((d.graph.node_count(), d.graph.edge_count()), (2, 1));
}

#[test]
fn parse_errors_name_file_and_line() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "0 1\n1 2\nthree\n").unwrap();
    let err = load_edge_list(file.path(), GraphFormat::EdgeList).unwrap_err();
    match &err {
        Error::Parse { path, line, .. } => {
            assert_eq!(path, file.path());
            assert_eq!(*line, 3);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(err.to_string().contains(":3:"));

    let empty = tempfile::NamedTempFile::new().unwrap();
    assert!(matches!(
        load_edge_list(empty.path(), GraphFormat::EdgeList),
        Err(Error::EmptyGraph)
    ));
    assert!(matches!(
        load_edge_list(Path::new("/nonexistent/graph.txt"), GraphFormat::EdgeList),
        Err(Error::Io(_))
    ));
}

#[test]
fn gml_roundtrip_keeps_edges_and_communities() {
    let (g, truth) = generate_planted_partition(&[6, 5, 7], 0.8, 0.1, 3).unwrap();
    let mut buf = Vec::new();
    write_gml(&g, Some(&truth), &mut buf).unwrap();
    let d = parse_gml(std::str::from_utf8(&buf).unwrap(), Path::new("<mem>")).unwrap();
    assert_eq!(d.graph, g);
    assert_eq!(d.ground_truth.unwrap(), truth);

    let mut buf = Vec::new();
    write_gml(&g, None, &mut buf).unwrap();
    let d = parse_gml(std::str::from_utf8(&buf).unwrap(), Path::new("<mem>")).unwrap();
    assert!(d.ground_truth.is_none());
}

#[test]
fn edge_list_roundtrip() {
    let (g, _) = generate_planted_partition(&[10, 10], 0.5, 0.05, 8).unwrap();
    let mut buf = Vec::new();
    write_edge_list(&g, &mut buf).unwrap();
    let d = parse_edge_list(std::str::from_utf8(&buf).unwrap(), Path::new("<mem>")).unwrap();
    assert_eq!(d.graph, g);
}

#[test]
fn index_space_roundtrip_on_random_graph() {
    let (g, _) = generate_planted_partition(&[10, 10], 0.4, 0.1, 20).unwrap();
    let idx = LinkIndexSpace::new(&g);
    let n = g.node_count();
    assert_eq!(idx.edge_space(), g.edge_count());
    assert_eq!(idx.edge_space() + idx.nonedge_space(), n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) {
                let id = idx.edge_id(u, v).unwrap();
                assert_eq!(idx.edge_pair(id), Some((u, v)));
                assert!(idx.nonedge_id(u, v).is_none());
            } else {
                let id = idx.nonedge_id(u, v).unwrap();
                assert_eq!(idx.nonedge_pair(id), Some((u, v)));
                assert!(idx.edge_id(u, v).is_none());
            }
        }
    }
}

#[test]
fn perturbation_set_algebra() {
    let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    assert_eq!(
        apply_perturbation(&path, &Perturbation::default()).unwrap(),
        path
    );
    let moved = apply_perturbation(&path, &Perturbation::new(vec![(0, 2)], vec![(1, 2)])).unwrap();
    assert_eq!(moved.edges(), &[(0, 1), (0, 2)]);
    assert!(matches!(
        apply_perturbation(&path, &Perturbation::new(vec![], vec![(0, 2)])),
        Err(Error::InvalidPerturbation(_))
    ));
    assert!(matches!(
        apply_perturbation(&path, &Perturbation::new(vec![(0, 1)], vec![])),
        Err(Error::InvalidPerturbation(_))
    ));
}
