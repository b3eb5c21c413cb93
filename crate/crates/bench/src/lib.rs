//! Inputs shared by the benchmarks in `benches/`.

use spiral_core::corpus::{gen_annulus_rings, gen_rect_spiral, gen_square_grid, load_fixture};
use spiral_core::detect::LocalGraph;
use spiral_core::patch::Patch;

/// Named patches covering the negative control, spirals of growing size,
/// rings and a guided-mode fixture.
pub fn patches() -> Vec<(&'static str, Patch)> {
    vec![
        ("square_grid_8", gen_square_grid(8).unwrap().patch),
        ("rect_spiral_2", gen_rect_spiral(2).unwrap().patch),
        ("rect_spiral_3", gen_rect_spiral(3).unwrap().patch),
        ("annulus_3x8", gen_annulus_rings(3, 8).unwrap().patch),
        ("double_partition", load_fixture("double_partition").unwrap().patch),
    ]
}

/// The `w` by `h` grid graph, vertices numbered row by row.
pub fn grid_graph(w: usize, h: usize) -> LocalGraph {
    let mut edges = Vec::new();
    for r in 0..h {
        for c in 0..w {
            let v = r * w + c;
            if c + 1 < w {
                edges.push((v, v + 1));
            }
            if r + 1 < h {
                edges.push((v, v + w));
            }
        }
    }
    LocalGraph::new(w * h, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_build() {
        assert_eq!(patches().len(), 5);
        let g = grid_graph(3, 2);
        assert_eq!(g.len(), 6);
        assert!(g.has_edge(0, 3) && !g.has_edge(2, 3));
    }
}
