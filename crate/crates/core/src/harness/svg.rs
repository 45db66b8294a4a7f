use std::fmt::Write as _;

use crate::graphmap::{Domain, GridMap, NodeRef};
use crate::search::PlanResult;
use crate::{Error, Result};

const CELL_PX: usize = 20;

fn pixel_center(node: &NodeRef) -> Option<(usize, usize)> {
    match *node {
        NodeRef::Cell { i, j, .. } => Some((i * CELL_PX + CELL_PX / 2, j * CELL_PX + CELL_PX / 2)),
        NodeRef::Node(_) => None,
    }
}

/// Renders one z-layer of `map` with the planned path projected onto it.
///
/// Occupied cells of the layer become `class="obstacle"` squares, the path a
/// single polyline through cell centers, and start/goal are circles. Element
/// and attribute order is fixed, so equal inputs give identical bytes. An
/// empty path renders the markers only.
pub fn render_path_svg(map: &GridMap, layer: usize, start: &NodeRef, goal: &NodeRef, result: &PlanResult) -> Result<String> {
    if layer >= map.depth() {
        return Err(Error::InvalidParameter(format!("layer {layer} outside map depth {}", map.depth())));
    }
    for node in [start, goal] {
        map.index_of(node)?;
    }
    let (w, h) = (map.width() * CELL_PX, map.height() * CELL_PX);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(svg, r##"<rect class="frame" x="0" y="0" width="{w}" height="{h}" fill="none" stroke="#000000"/>"##);
    for j in 0..map.height() {
        for i in 0..map.width() {
            if map.is_occupied(i, j, layer) {
                let _ = writeln!(
                    svg,
                    r##"<rect class="obstacle" x="{}" y="{}" width="{CELL_PX}" height="{CELL_PX}" fill="#404040"/>"##,
                    i * CELL_PX,
                    j * CELL_PX
                );
            }
        }
    }
    let points: Vec<String> = result
        .path
        .iter()
        .filter_map(pixel_center)
        .map(|(x, y)| format!("{x},{y}"))
        .collect();
    if !points.is_empty() {
        let _ = writeln!(
            svg,
            r##"<polyline class="path" points="{}" fill="none" stroke="#d62728" stroke-width="4"/>"##,
            points.join(" ")
        );
    }
    for (class, node, color) in [("start", start, "#2ca02c"), ("goal", goal, "#1f77b4")] {
        let (cx, cy) = pixel_center(node).expect("validated grid cell");
        let _ = writeln!(
            svg,
            r##"<circle class="{class}" cx="{cx}" cy="{cy}" r="{}" fill="{color}"/>"##,
            CELL_PX / 3
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphmap::Connectivity;
    use crate::heuristics::HeuristicSpec;
    use crate::search::{astar, SearchOptions};

    fn plan(map: &GridMap, s: NodeRef, g: NodeRef) -> PlanResult {
        let opts = SearchOptions::with_connectivity(Connectivity::default_for_depth(map.depth()));
        astar(map, &s, &g, &HeuristicSpec::euclidean(), &opts).unwrap()
    }

    #[test]
    fn straight_path_polyline() {
        let map = GridMap::new(3, 3, 1, 1.0).unwrap();
        let (s, g) = (NodeRef::cell(0, 1, 0), NodeRef::cell(2, 1, 0));
        let svg = render_path_svg(&map, 0, &s, &g, &plan(&map, s, g)).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains(r#"points="10,30 30,30 50,30""#), "{svg}");
        assert_eq!(svg.matches(r#"class="obstacle""#).count(), 0);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn one_obstacle_one_rect() {
        let mut map = GridMap::new(3, 3, 1, 1.0).unwrap();
        map.set_occupied(1, 1, 0, true).unwrap();
        let (s, g) = (NodeRef::cell(0, 0, 0), NodeRef::cell(2, 2, 0));
        let r = plan(&map, s, g);
        let svg = render_path_svg(&map, 0, &s, &g, &r).unwrap();
        assert_eq!(svg.matches(r#"class="obstacle""#).count(), 1);
        assert_eq!(svg, render_path_svg(&map, 0, &s, &g, &r).unwrap());
    }

    #[test]
    fn empty_path_renders_markers_only() {
        let map = GridMap::new(2, 2, 2, 1.0).unwrap();
        let (s, g) = (NodeRef::cell(0, 0, 0), NodeRef::cell(1, 1, 1));
        let mut r = plan(&map, s, g);
        r.path.clear();
        let svg = render_path_svg(&map, 1, &s, &g, &r).unwrap();
        assert!(!svg.contains("<polyline"));
        assert!(svg.contains(r#"class="start""#) && svg.contains(r#"class="goal""#));
        assert!(render_path_svg(&map, 2, &s, &g, &r).is_err());
    }
}
