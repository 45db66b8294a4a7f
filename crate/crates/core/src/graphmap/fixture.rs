use super::{ExplicitGraph, NodeRef};

/// The six-node worked example: start `S`, goal `G`.
///
/// Edge costs and heuristic values reproduce the final costs of the worked
/// example exactly: f(A)=4 and f(G)=10 from S, f(B)=7 and f(C)=4 from A,
/// f(G)=6 and f(D)=11 from C.
pub fn figure2_fixture() -> (ExplicitGraph, NodeRef, NodeRef) {
    const NODES: [(&str, f64); 6] = [
        ("S", 5.0),
        ("A", 3.0),
        ("B", 4.0),
        ("C", 1.0),
        ("D", 2.0),
        ("G", 0.0),
    ];
    const EDGES: [(&str, &str, f64); 6] = [
        ("S", "A", 1.0),
        ("S", "G", 10.0),
        ("A", "B", 2.0),
        ("A", "C", 2.0),
        ("C", "G", 3.0),
        ("C", "D", 6.0),
    ];

    let mut graph = ExplicitGraph::new();
    for (label, _) in NODES {
        graph.add_node(label, None).expect("fixture labels are unique");
    }
    for (from, to, cost) in EDGES {
        let from = graph.id_of(from).unwrap();
        let to = graph.id_of(to).unwrap();
        graph.add_edge(from, to, cost).expect("fixture edges are valid");
    }
    graph
        .set_h_table(NODES.iter().map(|&(_, h)| h).collect())
        .expect("fixture table covers every node");

    let start = graph.node_by_label("S").unwrap();
    let goal = graph.node_by_label("G").unwrap();
    (graph, start, goal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_cost(graph: &ExplicitGraph, labels: &[&str]) -> f64 {
        labels
            .windows(2)
            .map(|w| {
                let (a, b) = (graph.id_of(w[0]).unwrap(), graph.id_of(w[1]).unwrap());
                graph
                    .edges()
                    .iter()
                    .find(|&&(f, t, _)| f == a && t == b)
                    .map(|&(_, _, c)| c)
                    .unwrap()
            })
            .sum()
    }

    #[test]
    fn recomputed_path_costs() {
        let (graph, _, _) = figure2_fixture();
        assert_eq!(path_cost(&graph, &["S", "A", "C", "G"]), 6.0);
        assert_eq!(path_cost(&graph, &["S", "G"]), 10.0);
    }

    #[test]
    fn f_values_from_edges_and_table() {
        let (graph, _, _) = figure2_fixture();
        let h = |l: &str| graph.h_table().unwrap()[graph.id_of(l).unwrap()];
        let f = |path: &[&str]| path_cost(&graph, path) + h(path.last().unwrap());
        assert_eq!(f(&["S", "A"]), 4.0);
        assert_eq!(f(&["S", "G"]), 10.0);
        assert_eq!(f(&["S", "A", "B"]), 7.0);
        assert_eq!(f(&["S", "A", "C"]), 4.0);
        assert_eq!(f(&["S", "A", "C", "G"]), 6.0);
        assert_eq!(f(&["S", "A", "C", "D"]), 11.0);
    }
}
