use crate::{Error, Result, Vec3};

use super::{Connectivity, Domain, NodeRef};

#[derive(Debug, Clone, PartialEq)]
pub struct GraphNode {
    pub id: usize,
    pub label: String,
    pub position: Option<Vec3>,
}

/// Labeled directed graph with non-negative edge costs and an optional
/// per-node heuristic table. Node ids are assigned densely in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExplicitGraph {
    nodes: Vec<GraphNode>,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
    h_table: Option<Vec<f64>>,
}

impl ExplicitGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, label: impl Into<String>, position: Option<Vec3>) -> Result<usize> {
        let label = label.into();
        if self.id_of(&label).is_some() {
            return Err(Error::InvalidGraph(format!("duplicate node label `{label}`")));
        }
        if position.is_some_and(|p| !p.is_finite()) {
            return Err(Error::InvalidGraph(format!("node `{label}` has a non-finite position")));
        }
        let id = self.nodes.len();
        self.nodes.push(GraphNode { id, label, position });
        self.adjacency.push(Vec::new());
        // a table that covered every node no longer does
        self.h_table = None;
        Ok(id)
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cost: f64) -> Result<()> {
        if from >= self.nodes.len() || to >= self.nodes.len() {
            return Err(Error::InvalidGraph(format!("edge {from}->{to} references a missing node")));
        }
        if !(cost >= 0.0 && cost.is_finite()) {
            return Err(Error::InvalidGraph(format!("edge {from}->{to} has invalid cost {cost}")));
        }
        self.edges.push((from, to, cost));
        self.adjacency[from].push((to, cost));
        Ok(())
    }

    /// Installs a heuristic value for every node, indexed by id.
    pub fn set_h_table(&mut self, table: Vec<f64>) -> Result<()> {
        if table.len() != self.nodes.len() {
            return Err(Error::InvalidGraph(format!(
                "heuristic table has {} entries for {} nodes",
                table.len(),
                self.nodes.len()
            )));
        }
        if let Some(bad) = table.iter().position(|h| !(*h >= 0.0 && h.is_finite())) {
            return Err(Error::InvalidGraph(format!(
                "heuristic value for `{}` must be finite and >= 0",
                self.nodes[bad].label
            )));
        }
        self.h_table = Some(table);
        Ok(())
    }

    pub fn h_table(&self) -> Option<&[f64]> {
        self.h_table.as_deref()
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn id_of(&self, label: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.label == label)
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeRef> {
        self.id_of(label).map(NodeRef::Node)
    }
}

impl Domain for ExplicitGraph {
    fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn index_of(&self, node: &NodeRef) -> Result<usize> {
        match *node {
            NodeRef::Node(id) if id < self.nodes.len() => Ok(id),
            _ => Err(Error::UnknownNode(node.to_string())),
        }
    }

    fn node_ref(&self, index: usize) -> NodeRef {
        NodeRef::Node(index)
    }

    fn is_blocked(&self, _index: usize) -> bool {
        false
    }

    fn check_connectivity(&self, _conn: Connectivity) -> Result<()> {
        Ok(())
    }

    fn successors(&self, index: usize, _conn: Connectivity, out: &mut Vec<(usize, f64)>) {
        out.extend_from_slice(&self.adjacency[index]);
    }

    fn position(&self, index: usize) -> Option<Vec3> {
        self.nodes[index].position
    }

    fn heuristic_table(&self) -> Option<&[f64]> {
        self.h_table()
    }

    fn label(&self, index: usize) -> String {
        self.nodes[index].label.clone()
    }
}
