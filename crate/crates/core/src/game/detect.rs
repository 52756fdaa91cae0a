//! Exact target detection by depth-first search.
//!
//! Searches visit start vertices and neighbors in increasing id order, so the
//! first witness found is the lexicographically least vertex sequence.

use super::{Color, ColoredGraph, Vertex, Witness, WitnessKind};

/// The monochromatic subgraph of one color, re-indexed densely.
struct Mono {
    ids: Vec<Vertex>,
    adj: Vec<Vec<usize>>,
}

impl Mono {
    fn of(g: &ColoredGraph, c: Color) -> Mono {
        let ids: Vec<Vertex> = g.touched_vertices().filter(|&v| g.degree(v, c) > 0).collect();
        let adj = ids
            .iter()
            .map(|&v| {
                g.neighbors(v, c)
                    .map(|w| ids.binary_search(&w).expect("neighbor is touched"))
                    .collect()
            })
            .collect();
        Mono { ids, adj }
    }

    fn component_sizes(&self) -> Vec<usize> {
        let n = self.ids.len();
        let mut comp = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut size = 0;
            while let Some(v) = stack.pop() {
                size += 1;
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            sizes.push(size);
        }
        comp.iter().map(|&c| sizes[c]).collect()
    }
}

fn single_vertex(g: &ColoredGraph, kind: WitnessKind) -> Witness {
    let v = g.touched_vertices().next().unwrap_or(0);
    Witness::path(kind, vec![v])
}

/// A path on exactly `k` vertices in color `c`.
pub fn detect_path(g: &ColoredGraph, c: Color, k: usize) -> Option<Witness> {
    let kind = match c {
        Color::Red => WitnessKind::RedPath,
        Color::Blue => WitnessKind::BluePath,
    };
    if k <= 1 {
        return Some(single_vertex(g, kind));
    }
    let m = Mono::of(g, c);
    let sizes = m.component_sizes();
    let mut on_path = vec![false; m.ids.len()];
    let mut path = Vec::with_capacity(k);
    for s in 0..m.ids.len() {
        if sizes[s] < k {
            continue;
        }
        path.push(s);
        on_path[s] = true;
        if extend_path(&m, k, &mut path, &mut on_path) {
            return Some(Witness::path(kind, path.iter().map(|&i| m.ids[i]).collect()));
        }
        on_path[s] = false;
        path.pop();
    }
    None
}

fn extend_path(m: &Mono, k: usize, path: &mut Vec<usize>, on_path: &mut [bool]) -> bool {
    if path.len() == k {
        return true;
    }
    let last = *path.last().expect("non-empty");
    for &w in &m.adj[last] {
        if on_path[w] {
            continue;
        }
        path.push(w);
        on_path[w] = true;
        if extend_path(m, k, path, on_path) {
            return true;
        }
        on_path[w] = false;
        path.pop();
    }
    false
}

/// A star with exactly `k` leaves in color `c`: lowest center of degree at
/// least `k`, lowest `k` leaves. The witness kind is always `RedStar`, the
/// only star target.
pub fn detect_star(g: &ColoredGraph, c: Color, k: usize) -> Option<Witness> {
    let center = g.touched_vertices().find(|&v| g.degree(v, c) >= k)?;
    let leaves = g.neighbors(center, c).take(k).collect();
    Some(Witness::star(center, leaves))
}

/// A cycle on exactly `n` vertices in color `c` (n >= 3).
pub fn detect_cycle(g: &ColoredGraph, c: Color, n: usize) -> Option<Witness> {
    if n < 3 {
        return None;
    }
    let m = Mono::of(g, c);
    let sizes = m.component_sizes();
    let mut on_path = vec![false; m.ids.len()];
    let mut path = Vec::with_capacity(n);
    for s in 0..m.ids.len() {
        if sizes[s] < n || m.adj[s].len() < 2 {
            continue;
        }
        path.push(s);
        on_path[s] = true;
        if extend_cycle(&m, n, s, &mut path, &mut on_path) {
            return Some(Witness::path(
                WitnessKind::BlueCycle,
                path.iter().map(|&i| m.ids[i]).collect(),
            ));
        }
        on_path[s] = false;
        path.pop();
    }
    None
}

fn extend_cycle(m: &Mono, n: usize, start: usize, path: &mut Vec<usize>, on_path: &mut [bool]) -> bool {
    let last = *path.last().expect("non-empty");
    if path.len() == n {
        return m.adj[last].binary_search(&start).is_ok();
    }
    for &w in &m.adj[last] {
        // Cycles are reported from their least vertex.
        if w <= start || on_path[w] || m.adj[w].len() < 2 {
            continue;
        }
        path.push(w);
        on_path[w] = true;
        if extend_cycle(m, n, start, path, on_path) {
            return true;
        }
        on_path[w] = false;
        path.pop();
    }
    false
}

pub fn detect_red_path(g: &ColoredGraph, k: usize) -> Option<Witness> {
    detect_path(g, Color::Red, k)
}

pub fn detect_red_star(g: &ColoredGraph, k: usize) -> Option<Witness> {
    detect_star(g, Color::Red, k)
}

pub fn detect_blue_path(g: &ColoredGraph, n: usize) -> Option<Witness> {
    detect_path(g, Color::Blue, n)
}

pub fn detect_blue_cycle(g: &ColoredGraph, n: usize) -> Option<Witness> {
    detect_cycle(g, Color::Blue, n)
}
