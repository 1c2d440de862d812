use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::QuadraticWord;

/// The closed surface obtained by gluing the marked disk along a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedSurface {
    /// `vertex_class[l - 1]` is the class of the disk vertex `v_l`. Classes
    /// are numbered by their smallest vertex, so `v_1` is in class 0.
    pub vertex_class: Vec<usize>,
    /// Number of vertex classes, i.e. punctures of `S`.
    pub s: usize,
    /// Genus of the closed surface.
    pub g: usize,
    /// Edge `alpha_k` of the 1-skeleton, `skeleton[k - 1] = (tail, head)`.
    pub skeleton: Vec<(usize, usize)>,
    /// Whether `alpha_{2g+1}, ..., alpha_n` form a spanning tree.
    pub tree_ok: bool,
}

impl GluedSurface {
    /// The members of each vertex class (1-based vertex numbers).
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.s];
        for (l, &c) in self.vertex_class.iter().enumerate() {
            out[c].push(l + 1);
        }
        out
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

/// Identifies the disk vertices along the side pairing of `word`.
pub fn glue(word: &QuadraticWord) -> GluedSurface {
    let n = word.n();
    let m = 2 * n;
    // vertex v_l lives at index l - 1; v_{2n+1} = v_1
    let wrap = |l: usize| (l - 1) % m;
    let mut uf = UnionFind((0..m).collect());
    for k in 1..=n {
        let p = word.pos_plus(k);
        let q = word.pos_minus(k);
        uf.union(wrap(p), wrap(q + 1));
        uf.union(wrap(p + 1), wrap(q));
    }
    let mut root_class = vec![usize::MAX; m];
    let mut vertex_class = vec![0; m];
    let mut s = 0;
    for v in 0..m {
        let r = uf.find(v);
        if root_class[r] == usize::MAX {
            root_class[r] = s;
            s += 1;
        }
        vertex_class[v] = root_class[r];
    }
    let twice_g = n + 1 - s;
    assert!(twice_g.is_multiple_of(2), "Euler characteristic parity violated");
    let g = twice_g / 2;
    let skeleton: Vec<(usize, usize)> = (1..=n)
        .map(|k| {
            let p = word.pos_plus(k);
            (vertex_class[wrap(p)], vertex_class[wrap(p + 1)])
        })
        .collect();
    let tree_ok = is_spanning_tree(s, &skeleton[2 * g..]);
    GluedSurface { vertex_class, s, g, skeleton, tree_ok }
}

fn is_spanning_tree(s: usize, edges: &[(usize, usize)]) -> bool {
    if edges.len() + 1 != s {
        return false;
    }
    let mut uf = UnionFind((0..s).collect());
    edges.iter().all(|&(a, b)| uf.union(a, b))
}

/// Relabels the letters so that `alpha_{2g+1}, ..., alpha_n` span the
/// 1-skeleton.
///
/// Words that already satisfy the condition are returned unchanged.
/// Otherwise the tree is found by breadth-first search from the class of
/// `v_1`, visiting neighbours in increasing (class, edge) order; non-tree
/// letters keep their relative order as `1..=2g` and tree letters theirs as
/// `2g+1..=n`, which is the lexicographically smallest such relabeling.
pub fn normalize(word: &QuadraticWord) -> QuadraticWord {
    let surf = glue(word);
    if surf.tree_ok {
        return word.clone();
    }
    let n = word.n();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); surf.s];
    for (e, &(a, b)) in surf.skeleton.iter().enumerate() {
        if a != b {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }
    let mut seen = vec![false; surf.s];
    let mut in_tree = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(c) = queue.pop_front() {
        for &(nb, e) in &adj[c] {
            if !seen[nb] {
                seen[nb] = true;
                in_tree[e] = true;
                queue.push_back(nb);
            }
        }
    }
    let mut relabel = vec![0; n];
    let mut next_free = 1;
    let mut next_tree = 2 * surf.g + 1;
    for e in 0..n {
        if in_tree[e] {
            relabel[e] = next_tree;
            next_tree += 1;
        } else {
            relabel[e] = next_free;
            next_free += 1;
        }
    }
    word.relabeled(&relabel).expect("relabeling preserves the quadratic condition")
}
