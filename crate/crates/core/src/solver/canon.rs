//! Canonical labeling of 2-colored graphs.
//!
//! Individualization-refinement: the partition of vertices is refined by
//! red/blue neighbor counts until equitable, then a vertex of the first
//! non-singleton cell is individualized and the search recurses. The least
//! adjacency encoding over all leaves is the canonical form. Leaves with
//! equal encodings yield automorphisms, which prune branches that lie in the
//! same orbit as one already explored.

use super::board::{Board, MAX_VERTICES};

#[derive(Clone, Debug)]
pub(crate) struct Canon {
    /// `[n, packed upper triangle]`, two bits per vertex pair.
    pub key: Vec<u8>,
    /// Canonical position to vertex of the input board. Isolated vertices of
    /// the input are not listed.
    pub order: Vec<usize>,
    /// Automorphisms of the input board found along the way, as vertex maps.
    pub generators: Vec<Vec<usize>>,
}

impl Canon {
    /// The input board relabeled into canonical position.
    pub fn board(&self, b: &Board) -> Board {
        let mut out = b.permuted_partial(&self.order);
        out.n = self.order.len();
        out
    }

    /// The automorphisms in canonical coordinates.
    pub fn canonical_generators(&self) -> Vec<Vec<usize>> {
        let mut inv = vec![usize::MAX; MAX_VERTICES];
        for (i, &v) in self.order.iter().enumerate() {
            inv[v] = i;
        }
        self.generators
            .iter()
            .map(|g| self.order.iter().map(|&v| inv[g[v]]).collect())
            .collect()
    }
}

impl Board {
    /// Like [`Board::permuted`] for an order covering only some vertices.
    pub(crate) fn permuted_partial(&self, order: &[usize]) -> Board {
        if order.len() == self.n {
            return self.permuted(order);
        }
        let mut b = Board::empty(order.len());
        for (i, &u) in order.iter().enumerate() {
            for (j, &v) in order.iter().enumerate().skip(i + 1) {
                if let Some(c) = self.color(u, v) {
                    b.set(i, j, c);
                }
            }
        }
        b
    }
}

type Cells = Vec<Vec<usize>>;

fn mask(cell: &[usize]) -> u32 {
    cell.iter().fold(0, |m, &v| m | 1 << v)
}

fn refine(b: &Board, cells: &mut Cells) {
    'outer: loop {
        for s in 0..cells.len() {
            let m = mask(&cells[s]);
            for c in 0..cells.len() {
                if cells[c].len() == 1 {
                    continue;
                }
                let key = |v: usize| ((b.adj[0][v] & m).count_ones(), (b.adj[1][v] & m).count_ones());
                let k0 = key(cells[c][0]);
                if cells[c].iter().all(|&v| key(v) == k0) {
                    continue;
                }
                let mut cell = std::mem::take(&mut cells[c]);
                cell.sort_by_key(|&v| (key(v), v));
                let mut groups: Cells = Vec::new();
                let mut last = None;
                for v in cell {
                    if last != Some(key(v)) {
                        groups.push(Vec::new());
                        last = Some(key(v));
                    }
                    groups.last_mut().expect("group").push(v);
                }
                cells.splice(c..=c, groups);
                continue 'outer;
            }
        }
        return;
    }
}

fn encode(b: &Board, order: &[usize]) -> Vec<u8> {
    let n = order.len();
    let mut out = Vec::with_capacity(1 + (n * n.saturating_sub(1) / 2).div_ceil(4));
    out.push(n as u8);
    let (mut acc, mut bits) = (0u8, 0);
    for i in 0..n {
        for j in i + 1..n {
            acc |= b.code(order[i], order[j]) << bits;
            bits += 2;
            if bits == 8 {
                out.push(acc);
                acc = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        out.push(acc);
    }
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct Search<'a> {
    b: &'a Board,
    first: Option<(Vec<u8>, Vec<usize>)>,
    best: Option<(Vec<u8>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn automorphism(&mut self, from: &[usize], to: &[usize]) {
        let mut g: Vec<usize> = (0..self.b.n).collect();
        for (&a, &b) in from.iter().zip(to) {
            g[a] = b;
        }
        if g.iter().enumerate().any(|(i, &x)| i != x) && !self.generators.contains(&g) {
            self.generators.push(g);
        }
    }

    fn leaf(&mut self, order: Vec<usize>) {
        let enc = encode(self.b, &order);
        match &self.first {
            None => {
                self.first = Some((enc.clone(), order.clone()));
                self.best = Some((enc, order));
                return;
            }
            Some((f, fo)) if *f == enc => {
                let fo = fo.clone();
                self.automorphism(&fo, &order);
            }
            _ => {}
        }
        let (best, bo) = self.best.as_ref().expect("best set with first");
        match enc.cmp(best) {
            std::cmp::Ordering::Less => self.best = Some((enc, order)),
            std::cmp::Ordering::Equal => {
                let bo = bo.clone();
                self.automorphism(&bo, &order);
            }
            std::cmp::Ordering::Greater => {}
        }
    }

    fn node(&mut self, mut cells: Cells, prefix: &mut Vec<usize>) {
        refine(self.b, &mut cells);
        let Some(ci) = cells.iter().position(|c| c.len() > 1) else {
            self.leaf(cells.into_iter().map(|c| c[0]).collect());
            return;
        };
        let mut candidates = cells[ci].clone();
        candidates.sort_unstable();
        let mut explored: Vec<usize> = Vec::new();
        for v in candidates {
            if !explored.is_empty() {
                let mut uf = UnionFind::new(self.b.n);
                for g in &self.generators {
                    if prefix.iter().all(|&p| g[p] == p) {
                        for (x, &y) in g.iter().enumerate() {
                            uf.union(x, y);
                        }
                    }
                }
                let rv = uf.find(v);
                if explored.iter().any(|&u| uf.find(u) == rv) {
                    continue;
                }
            }
            explored.push(v);
            let mut next = cells.clone();
            let rest: Vec<usize> = next[ci].iter().copied().filter(|&u| u != v).collect();
            next.splice(ci..=ci, [vec![v], rest]);
            prefix.push(v);
            self.node(next, prefix);
            prefix.pop();
        }
    }
}

/// Canonical form of `b`, ignoring isolated vertices.
pub(crate) fn canonical(b: &Board) -> Canon {
    let active: Vec<usize> = (0..b.n).filter(|&v| b.adj[0][v] | b.adj[1][v] != 0).collect();
    if active.is_empty() {
        return Canon {
            key: vec![0],
            order: Vec::new(),
            generators: Vec::new(),
        };
    }
    let mut s = Search {
        b,
        first: None,
        best: None,
        generators: Vec::new(),
    };
    s.node(vec![active], &mut Vec::new());
    let (key, order) = s.best.expect("at least one leaf");
    Canon {
        key,
        order,
        generators: s.generators,
    }
}
