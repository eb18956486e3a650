//! Built-in demonstration instance: three wheel-like blocks joined by three
//! connector edges (36 vertices, 84 edges, rank 35).

use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeStyle {
    /// Inner `K6` edges.
    Solid,
    /// Outer hexagon and spokes.
    Dashed,
    /// Connectors between blocks.
    Dotted,
}

impl EdgeStyle {
    pub fn name(self) -> &'static str {
        match self {
            EdgeStyle::Solid => "solid",
            EdgeStyle::Dashed => "dashed",
            EdgeStyle::Dotted => "dotted",
        }
    }

    pub const ALL: [EdgeStyle; 3] = [EdgeStyle::Solid, EdgeStyle::Dashed, EdgeStyle::Dotted];
}

const LETTERS: [char; 12] = ['A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'I', 'J', 'K', 'L'];

fn v(block: usize, letter: char) -> usize {
    12 * block + LETTERS.iter().position(|&c| c == letter).expect("letter")
}

/// The demonstration graph with the style of every edge, in edge order.
pub fn figure1() -> (Graph, Vec<EdgeStyle>) {
    let labels: Vec<String> = (0..3).flat_map(|b| LETTERS.iter().map(move |c| format!("{c}{b}"))).collect();
    let mut edges = Vec::with_capacity(84);
    let mut styles = Vec::with_capacity(84);
    let inner = ['G', 'H', 'I', 'J', 'K', 'L'];
    let outer = ['A', 'B', 'C', 'D', 'E', 'F'];
    for b in 0..3 {
        for i in 0..6 {
            for j in i + 1..6 {
                edges.push((v(b, inner[i]), v(b, inner[j])));
                styles.push(EdgeStyle::Solid);
            }
        }
    }
    for b in 0..3 {
        for i in 0..6 {
            edges.push((v(b, outer[i]), v(b, outer[(i + 1) % 6])));
            styles.push(EdgeStyle::Dashed);
        }
        for i in 0..6 {
            edges.push((v(b, outer[i]), v(b, inner[i])));
            styles.push(EdgeStyle::Dashed);
        }
    }
    for (a, b) in [((0, 'C'), (1, 'F')), ((0, 'B'), (2, 'E')), ((2, 'D'), (1, 'A'))] {
        edges.push((v(a.0, a.1), v(b.0, b.1)));
        styles.push(EdgeStyle::Dotted);
    }
    (Graph::with_labels(labels, edges).expect("valid demo graph"), styles)
}
