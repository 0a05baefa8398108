use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::linalg::SymMat;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid graph: {0}")]
    Invalid(String),
}

/// Simple undirected graph on `0..n`, optionally weighted.
///
/// Edges are stored as `(i, j)` with `i < j`, sorted. Without explicit
/// weights every edge weighs 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    weights: Option<SymMat>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    /// 1-based pairs.
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<SymMat>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = GraphError;

    fn try_from(r: GraphRepr) -> Result<Self, GraphError> {
        if r.edges.iter().any(|&(i, j)| i == 0 || j == 0) {
            return Err(GraphError::Invalid("vertices are numbered from 1".into()));
        }
        let g = Graph::from_edges(r.n, r.edges.iter().map(|&(i, j)| (i - 1, j - 1)))?;
        match r.weights {
            Some(w) => g.with_weights(w),
            None => Ok(g),
        }
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { n: g.n, edges: g.edges.iter().map(|&(i, j)| (i + 1, j + 1)).collect(), weights: g.weights }
    }
}

impl Graph {
    /// Rejects loops, duplicates and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::Invalid(format!("loop at vertex {}", a + 1)));
            }
            if a >= n || b >= n {
                return Err(GraphError::Invalid(format!("edge {{{},{}}} outside 1..{n}", a + 1, b + 1)));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(GraphError::Invalid(format!("duplicate edge {{{},{}}}", a + 1, b + 1)));
            }
        }
        Ok(Graph { n, edges: set.into_iter().collect(), weights: None })
    }

    /// Attaches a weight matrix. It must be symmetric and vanish off the
    /// edges and on the diagonal.
    pub fn with_weights(mut self, w: SymMat) -> Result<Self, GraphError> {
        if w.n() != self.n {
            return Err(GraphError::Invalid(format!("weight matrix has order {}, expected {}", w.n(), self.n)));
        }
        for i in 0..self.n {
            for j in i..self.n {
                if w.get(i, j) != 0.0 && (i == j || !self.has_edge(i, j)) {
                    return Err(GraphError::Invalid(format!("nonzero weight at ({},{}) off the edge set", i + 1, j + 1)));
                }
            }
        }
        self.weights = Some(w);
        Ok(self)
    }

    /// Graph of the nonzero off-diagonal pattern of `w`, weighted by `w`.
    pub fn from_weights(w: SymMat) -> Result<Self, GraphError> {
        let n = w.n();
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| w.get(i, j) != 0.0).collect();
        let mut w = w;
        for i in 0..n {
            w.set(i, i, 0.0);
        }
        Graph::from_edges(n, edges)?.with_weights(w)
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new(), weights: None }
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).expect("valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid")
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid")
    }

    /// Graph whose edge set is given by the bits of `mask` over the pairs
    /// `(0,1), (0,2), …, (n-2,n-1)` in lexicographic order.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Graph::from_edges(n, pairs.enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, e)| e)).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i.min(j), i.max(j))).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| u != v && self.has_edge(u, v)).collect()
    }

    pub fn adjacency(&self) -> SymMat {
        SymMat::from_fn(self.n, |i, j| if i != j && self.has_edge(i, j) { 1.0 } else { 0.0 })
    }

    /// Edge weights; the adjacency matrix when unweighted.
    pub fn weights(&self) -> SymMat {
        self.weights.clone().unwrap_or_else(|| self.adjacency())
    }

    /// `L = Diag(W1) − W`.
    pub fn laplacian(&self) -> SymMat {
        let w = self.weights();
        let deg: Vec<f64> = (0..self.n).map(|i| (0..self.n).map(|j| w.get(i, j)).sum()).collect();
        SymMat::from_fn(self.n, |i, j| if i == j { deg[i] } else { -w.get(i, j) })
    }

    /// Total weight of edges whose endpoints get different labels.
    pub fn cut_weight(&self, label: &[usize]) -> f64 {
        let w = self.weights();
        self.edges.iter().filter(|&&(i, j)| label[i] != label[j]).map(|&(i, j)| w.get(i, j)).sum()
    }

    pub fn is_stable(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(a, &i)| set[a + 1..].iter().all(|&j| !self.has_edge(i, j)))
    }

    /// Breadth-first distances from `s` (`None` when unreachable).
    pub fn bfs(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[s] = Some(0);
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].expect("queued vertices have a distance");
            for u in self.neighbors(v) {
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.bfs(0).iter().all(Option::is_some)
    }

    /// Edge bitmask in the [`Graph::from_mask`] encoding.
    pub fn mask(&self) -> u64 {
        let mut bit = 0;
        let mut m = 0u64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    m |= 1 << bit;
                }
                bit += 1;
            }
        }
        m
    }

    /// `p edge n m` then `e i j [w]` lines, 1-based.
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p edge {} {}\n", self.n, self.edges.len());
        for &(i, j) in &self.edges {
            match &self.weights {
                Some(w) => s.push_str(&format!("e {} {} {}\n", i + 1, j + 1, crate::linalg::fmt_num(w.get(i, j)))),
                None => s.push_str(&format!("e {} {}\n", i + 1, j + 1)),
            }
        }
        s
    }

    /// Parses DIMACS edge format. A weight on any edge makes the graph
    /// weighted; unweighted edges then get weight 1.
    pub fn parse_dimacs(text: &str) -> Result<Self, GraphError> {
        let mut n = None;
        let mut declared = 0;
        let mut edges = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line_no = ln + 1;
            let err = |msg: String| GraphError::Parse { line: line_no, msg };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.first().copied() {
                None | Some("c") => {}
                Some("p") => {
                    if toks.len() != 4 || !matches!(toks[1], "edge" | "col") {
                        return Err(err("expected `p edge <n> <m>`".into()));
                    }
                    n = Some(toks[2].parse::<usize>().map_err(|e| err(format!("bad vertex count: {e}")))?);
                    declared = toks[3].parse::<usize>().map_err(|e| err(format!("bad edge count: {e}")))?;
                }
                Some("e") => {
                    let nv = n.ok_or_else(|| err("edge before the problem line".into()))?;
                    if toks.len() != 3 && toks.len() != 4 {
                        return Err(err("expected `e <i> <j> [w]`".into()));
                    }
                    let a: usize = toks[1].parse().map_err(|e| err(format!("bad endpoint: {e}")))?;
                    let b: usize = toks[2].parse().map_err(|e| err(format!("bad endpoint: {e}")))?;
                    if a == 0 || b == 0 || a > nv || b > nv {
                        return Err(err(format!("endpoint outside 1..{nv}")));
                    }
                    let w = match toks.get(3) {
                        Some(t) => Some(t.parse::<f64>().map_err(|e| err(format!("bad weight: {e}")))?),
                        None => None,
                    };
                    edges.push((a - 1, b - 1, w, line_no));
                }
                Some(t) => return Err(err(format!("unknown line type `{t}`"))),
            }
        }
        let n = n.ok_or(GraphError::Parse { line: text.lines().count().max(1), msg: "missing problem line".into() })?;
        if edges.len() != declared {
            return Err(GraphError::Invalid(format!("{} edges listed, {declared} declared", edges.len())));
        }
        let weighted = edges.iter().any(|e| e.2.is_some());
        let mut seen = BTreeSet::new();
        for &(a, b, _, line) in &edges {
            if a == b {
                return Err(GraphError::Parse { line, msg: "loop".into() });
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(GraphError::Parse { line, msg: "duplicate edge".into() });
            }
        }
        let g = Graph::from_edges(n, edges.iter().map(|e| (e.0, e.1)))?;
        if !weighted {
            return Ok(g);
        }
        let mut w = SymMat::zeros(n);
        for &(a, b, wt, _) in &edges {
            w.set(a, b, wt.unwrap_or(1.0));
        }
        g.with_weights(w)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut p, &mut out);
    out
}

fn heap_permute(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, p, out);
        if k % 2 == 0 {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
}

/// All `2^{n(n-1)/2}` labeled graphs on `n` vertices, by edge mask.
pub fn all_labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    assert!(n <= 8, "too many labeled graphs");
    let pairs = n * n.saturating_sub(1) / 2;
    (0..1u64 << pairs).map(move |m| Graph::from_mask(n, m))
}

/// One representative per isomorphism class (the one with the smallest
/// mask), sorted by mask. Brute force over all relabelings, so `n ≤ 6`.
pub fn graphs_up_to_isomorphism(n: usize) -> Vec<Graph> {
    assert!(n <= 6, "brute-force isomorphism needs n <= 6");
    let perms = permutations(n);
    let pairs = n * n.saturating_sub(1) / 2;
    let mut classes = BTreeSet::new();
    for m in 0..1u64 << pairs {
        let g = Graph::from_mask(n, m);
        let canon = perms
            .iter()
            .map(|p| Graph::from_edges(n, g.edges.iter().map(|&(i, j)| (p[i], p[j]))).expect("valid").mask())
            .min()
            .expect("at least one permutation");
        classes.insert(canon);
    }
    classes.into_iter().map(|m| Graph::from_mask(n, m)).collect()
}
