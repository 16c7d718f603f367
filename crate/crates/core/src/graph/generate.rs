use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Graph, PlanarGraph};
use crate::error::{Error, Result};

/// Test families with a fixed embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Path on `n` vertices.
    Path(usize),
    /// Cycle on `n` vertices.
    Cycle(usize),
    /// The square grid `Z^2 ∩ [-m, m]^2`, `(2m + 1)^2` vertices.
    Grid(usize),
    /// Complete binary tree of the given depth, `2^(depth + 1) - 1` vertices.
    BinaryTree(usize),
    /// K4.
    Tetrahedron,
    Octahedron,
    /// Two apexes joined to every vertex of a triangle.
    Bipyramid,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Path(_) => "path",
            Family::Cycle(_) => "cycle",
            Family::Grid(_) => "grid",
            Family::BinaryTree(_) => "binary_tree",
            Family::Tetrahedron => "tetrahedron",
            Family::Octahedron => "octahedron",
            Family::Bipyramid => "bipyramid",
        }
    }

    pub fn size(&self) -> Option<usize> {
        match *self {
            Family::Path(k) | Family::Cycle(k) | Family::Grid(k) | Family::BinaryTree(k) => Some(k),
            _ => None,
        }
    }

    /// Family from a name and size, e.g. `("grid", 4)`.
    pub fn from_name(name: &str, size: usize) -> Result<Family> {
        Ok(match name {
            "path" => Family::Path(size),
            "cycle" => Family::Cycle(size),
            "grid" => Family::Grid(size),
            "binary_tree" | "tree" => Family::BinaryTree(size),
            "tetrahedron" | "k4" => Family::Tetrahedron,
            "octahedron" => Family::Octahedron,
            "bipyramid" => Family::Bipyramid,
            other => return Err(Error::InvalidParameter(format!("unknown family `{other}`"))),
        })
    }

    /// Same family at a different size. Fixed-size families are unchanged.
    pub fn with_size(&self, size: usize) -> Family {
        match self {
            Family::Path(_) => Family::Path(size),
            Family::Cycle(_) => Family::Cycle(size),
            Family::Grid(_) => Family::Grid(size),
            Family::BinaryTree(_) => Family::BinaryTree(size),
            other => *other,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.size() {
            Some(k) => write!(f, "{}({k})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Parses `grid(4)`, `grid:4` or a bare fixed-size name.
    fn from_str(s: &str) -> Result<Family> {
        let s = s.trim();
        let (name, size) = match s.find(['(', ':']) {
            Some(i) => {
                let digits = s[i + 1..].trim_end_matches(')');
                let size = digits
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad family size in `{s}`")))?;
                (&s[..i], size)
            }
            None => (s, 0),
        };
        Family::from_name(name, size)
    }
}

/// Builds a member of a test family with its canonical rotation system.
pub fn generate(family: Family) -> Result<PlanarGraph> {
    match family {
        Family::Path(n) => {
            check_size(n, 1)?;
            let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            let g = Graph::new(n, &edges)?;
            let rotation = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
            PlanarGraph::with_rotation(g, rotation)
        }
        Family::Cycle(n) => {
            check_size(n, 3)?;
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            let g = Graph::new(n, &edges)?;
            let rotation = (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect();
            PlanarGraph::with_rotation(g, rotation)
        }
        Family::Grid(m) => grid(m),
        Family::BinaryTree(depth) => {
            check_size(depth, 1)?;
            let n = (1usize << (depth + 1)) - 1;
            let edges: Vec<_> = (1..n).map(|c| ((c - 1) / 2, c)).collect();
            let g = Graph::new(n, &edges)?;
            let rotation = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
            PlanarGraph::with_rotation(g, rotation)
        }
        Family::Tetrahedron => {
            PlanarGraph::embed(Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])?)
        }
        Family::Octahedron => PlanarGraph::embed(Graph::new(
            6,
            &[
                (0, 1), (0, 2), (0, 3), (0, 4),
                (1, 2), (2, 3), (3, 4), (1, 4),
                (5, 1), (5, 2), (5, 3), (5, 4),
            ],
        )?),
        Family::Bipyramid => PlanarGraph::embed(Graph::new(
            5,
            &[(0, 1), (1, 2), (0, 2), (3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 2)],
        )?),
    }
}

fn check_size(got: usize, min: usize) -> Result<()> {
    if got < min {
        Err(Error::SizeTooSmall { got, min })
    } else {
        Ok(())
    }
}

/// Index of grid point `(x, y)`, both in `-m..=m`.
pub fn grid_index(m: usize, x: i64, y: i64) -> usize {
    let side = 2 * m as i64 + 1;
    ((y + m as i64) * side + (x + m as i64)) as usize
}

fn grid(m: usize) -> Result<PlanarGraph> {
    check_size(m, 1)?;
    let side = 2 * m + 1;
    let n = side * side;
    let r = m as i64;
    let mut edges = Vec::with_capacity(2 * side * (side - 1));
    for y in -r..=r {
        for x in -r..=r {
            let v = grid_index(m, x, y);
            if x < r {
                edges.push((v, grid_index(m, x + 1, y)));
            }
            if y < r {
                edges.push((v, grid_index(m, x, y + 1)));
            }
        }
    }
    let g = Graph::new(n, &edges)?;
    let mut rotation = vec![Vec::new(); n];
    let mut labels = vec![String::new(); n];
    for y in -r..=r {
        for x in -r..=r {
            let v = grid_index(m, x, y);
            labels[v] = format!("({x},{y})");
            // N, E, S, W
            for (dx, dy) in [(0, 1), (1, 0), (0, -1), (-1, 0)] {
                let (nx, ny) = (x + dx, y + dy);
                if nx.abs() <= r && ny.abs() <= r {
                    rotation[v].push(grid_index(m, nx, ny));
                }
            }
        }
    }
    PlanarGraph::with_rotation(g, rotation)?.with_labels(labels)
}
