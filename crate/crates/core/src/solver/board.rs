//! Small dense 2-colored graphs as per-color adjacency bitmasks.

use crate::game::{BlueTarget, Color, ColoredGraph, RedTarget, TargetSpec, Vertex};

pub const MAX_VERTICES: usize = 32;

#[derive(Clone, PartialEq, Eq)]
pub(crate) struct Board {
    pub n: usize,
    pub adj: [[u32; MAX_VERTICES]; 2],
}

impl std::fmt::Debug for Board {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if let Some(c) = self.color(u, v) {
                    edges.push((u, v, c.code()));
                }
            }
        }
        f.debug_struct("Board").field("n", &self.n).field("edges", &edges).finish()
    }
}

impl Board {
    pub fn empty(n: usize) -> Board {
        assert!(n <= MAX_VERTICES);
        Board {
            n,
            adj: [[0; MAX_VERTICES]; 2],
        }
    }

    /// Touched vertices of `g`, relabeled `0..` in increasing order. Returns
    /// the board and the original vertex of each label.
    pub fn from_graph(g: &ColoredGraph) -> Option<(Board, Vec<Vertex>)> {
        let verts: Vec<Vertex> = g.touched_vertices().collect();
        if verts.len() > MAX_VERTICES {
            return None;
        }
        let mut b = Board::empty(verts.len());
        let pos = |v: Vertex| verts.binary_search(&v).expect("touched vertex");
        for (e, c) in g.edges() {
            b.set(pos(e.lo()), pos(e.hi()), c);
        }
        Some((b, verts))
    }

    pub fn set(&mut self, u: usize, v: usize, c: Color) {
        let i = c.index();
        self.adj[i][u] |= 1 << v;
        self.adj[i][v] |= 1 << u;
    }

    pub fn color(&self, u: usize, v: usize) -> Option<Color> {
        if self.adj[0][u] >> v & 1 == 1 {
            Some(Color::Red)
        } else if self.adj[1][u] >> v & 1 == 1 {
            Some(Color::Blue)
        } else {
            None
        }
    }

    pub fn code(&self, u: usize, v: usize) -> u8 {
        match self.color(u, v) {
            None => 0,
            Some(Color::Red) => 1,
            Some(Color::Blue) => 2,
        }
    }

    /// Plays `c` on `(u, v)`, growing the board if either endpoint is new.
    pub fn with_edge(&self, u: usize, v: usize, c: Color) -> Board {
        let mut b = self.clone();
        b.n = b.n.max(u + 1).max(v + 1);
        b.set(u, v, c);
        b
    }

    /// Relabels so that old vertex `order[i]` becomes `i`.
    pub fn permuted(&self, order: &[usize]) -> Board {
        let mut inv = [0usize; MAX_VERTICES];
        for (i, &v) in order.iter().enumerate() {
            inv[v] = i;
        }
        let mut b = Board::empty(self.n);
        for c in 0..2 {
            for (i, &v) in order.iter().enumerate() {
                let mut m = self.adj[c][v];
                let mut out = 0u32;
                while m != 0 {
                    let w = m.trailing_zeros() as usize;
                    m &= m - 1;
                    out |= 1 << inv[w];
                }
                b.adj[c][i] = out;
            }
        }
        b
    }
}

fn has_path(adj: &[u32; MAX_VERTICES], n: usize, k: usize) -> bool {
    fn extend(adj: &[u32; MAX_VERTICES], end: usize, seen: u32, left: usize) -> bool {
        if left == 0 {
            return true;
        }
        let mut m = adj[end] & !seen;
        while m != 0 {
            let w = m.trailing_zeros() as usize;
            m &= m - 1;
            if extend(adj, w, seen | 1 << w, left - 1) {
                return true;
            }
        }
        false
    }
    if k <= 1 {
        return true;
    }
    (0..n).any(|s| adj[s] != 0 && extend(adj, s, 1 << s, k - 1))
}

fn has_cycle(adj: &[u32; MAX_VERTICES], n: usize, len: usize) -> bool {
    fn extend(adj: &[u32; MAX_VERTICES], start: usize, end: usize, allowed: u32, left: usize) -> bool {
        if left == 0 {
            return adj[end] >> start & 1 == 1;
        }
        let mut m = adj[end] & allowed;
        while m != 0 {
            let w = m.trailing_zeros() as usize;
            m &= m - 1;
            if extend(adj, start, w, allowed & !(1 << w), left - 1) {
                return true;
            }
        }
        false
    }
    (0..n).any(|s| {
        // Only vertices above the start, so each cycle is found from its least vertex.
        let above = if s + 1 >= 32 { 0 } else { u32::MAX << (s + 1) };
        adj[s].count_ones() >= 2 && extend(adj, s, s, above, len - 1)
    })
}

pub(crate) fn has_red(b: &Board, t: &TargetSpec) -> bool {
    match t.red {
        RedTarget::Path(k) => has_path(&b.adj[0], b.n, k),
        RedTarget::Star(k) => (0..b.n).any(|v| b.adj[0][v].count_ones() as usize >= k),
    }
}

pub(crate) fn has_blue(b: &Board, t: &TargetSpec) -> bool {
    match t.blue {
        BlueTarget::Path(n) => has_path(&b.adj[1], b.n, n),
        BlueTarget::Cycle(n) => has_cycle(&b.adj[1], b.n, n),
    }
}

pub(crate) fn has_target(b: &Board, t: &TargetSpec) -> bool {
    has_red(b, t) || has_blue(b, t)
}
