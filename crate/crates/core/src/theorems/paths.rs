use std::collections::VecDeque;

use crate::complex::ColoredGraph;

/// Result of a biconnectivity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biconnectivity {
    pub biconnected: bool,
    /// Vertices whose removal disconnects their component, sorted.
    pub articulation: Vec<usize>,
}

pub fn connected_components(g: &ColoredGraph) -> Vec<Vec<usize>> {
    g.components()
}

/// Articulation vertices by lowlink. A graph is biconnected when it is
/// connected, has no articulation vertex, and is a single edge or has at
/// least three vertices.
pub fn is_biconnected(g: &ColoredGraph) -> Biconnectivity {
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_cut = vec![false; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent, next neighbor position)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
            if let Some(&(w, _)) = g.neighbors(u).get(*next) {
                *next += 1;
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push((w, u, 0));
                } else if w != parent {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[u]);
                    if parent != root && low[u] >= disc[parent] {
                        is_cut[parent] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }
    let articulation: Vec<usize> = (0..n).filter(|&v| is_cut[v]).collect();
    let biconnected =
        g.is_connected() && articulation.is_empty() && (n >= 3 || g.is_single_edge());
    Biconnectivity { biconnected, articulation }
}

/// Shortest path from `s` to `t` through allowed vertices and steps, with
/// the lexicographically smallest vertex sequence among shortest ones.
fn shortest_path(
    g: &ColoredGraph,
    s: usize,
    t: usize,
    blocked: &[bool],
    step: &dyn Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    if blocked[s] || blocked[t] {
        return None;
    }
    // Distances to t along reversed steps.
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[t] = 0;
    let mut queue = VecDeque::from([t]);
    while let Some(u) = queue.pop_front() {
        for &(w, _) in g.neighbors(u) {
            if !blocked[w] && dist[w] == usize::MAX && step(w, u) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    if dist[s] == usize::MAX {
        return None;
    }
    let mut path = vec![s];
    let mut u = s;
    while u != t {
        u = g
            .neighbors(u)
            .iter()
            .map(|&(w, _)| w)
            .filter(|&w| !blocked[w] && dist[w] == dist[u] - 1 && step(u, w))
            .min()
            .expect("a neighbor one step closer exists");
        path.push(u);
    }
    Some(path)
}

/// Vertex-disjoint paths `s1 -> t1` and `s2 -> t2`, shortest total length
/// first, then lexicographically smallest first path, then second path.
/// Only steps allowed by `step` are taken.
pub fn two_disjoint_paths_with(
    g: &ColoredGraph,
    (s1, t1): (usize, usize),
    (s2, t2): (usize, usize),
    step: &dyn Fn(usize, usize) -> bool,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let ends = [s1, t1, s2, t2];
    if ends.iter().enumerate().any(|(i, a)| ends[i + 1..].contains(a)) {
        return None;
    }
    if g.vertex_count() > 20 && max_disjoint_paths(g, [s1, s2], [t1, t2]) < 2 {
        return None;
    }
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
    let mut blocked = vec![false; g.vertex_count()];
    blocked[s2] = true;
    blocked[t2] = true;
    let mut path = vec![s1];
    blocked[s1] = true;
    search(g, t1, (s2, t2), step, &mut path, &mut blocked, &mut best);
    best.map(|(_, a, b)| (a, b))
}

fn search(
    g: &ColoredGraph,
    t1: usize,
    (s2, t2): (usize, usize),
    step: &dyn Fn(usize, usize) -> bool,
    path: &mut Vec<usize>,
    blocked: &mut Vec<bool>,
    best: &mut Option<(usize, Vec<usize>, Vec<usize>)>,
) {
    let u = *path.last().expect("non-empty");
    if let Some((total, _, _)) = best {
        if path.len() > *total {
            return;
        }
    }
    if u == t1 {
        blocked[s2] = false;
        blocked[t2] = false;
        if let Some(second) = shortest_path(g, s2, t2, blocked, step) {
            let total = path.len() + second.len() - 2;
            let better = match best {
                None => true,
                Some((bt, bp, bs)) => (total, &*path, &second) < (*bt, &*bp, &*bs),
            };
            if better {
                *best = Some((total, path.clone(), second));
            }
        }
        blocked[s2] = true;
        blocked[t2] = true;
        return;
    }
    for &(w, _) in g.neighbors(u) {
        if (w == t1 || !blocked[w]) && step(u, w) {
            blocked[w] = true;
            path.push(w);
            search(g, t1, (s2, t2), step, path, blocked, best);
            path.pop();
            blocked[w] = false;
        }
    }
}

pub fn two_disjoint_paths(
    g: &ColoredGraph,
    s1: usize,
    t1: usize,
    s2: usize,
    t2: usize,
) -> Option<(Vec<usize>, Vec<usize>)> {
    two_disjoint_paths_with(g, (s1, t1), (s2, t2), &|_, _| true)
}

/// Maximum number of vertex-disjoint paths from the source set to the sink
/// set, by unit-capacity augmenting paths on the split graph.
pub fn max_disjoint_paths(g: &ColoredGraph, sources: [usize; 2], sinks: [usize; 2]) -> usize {
    let n = g.vertex_count();
    // Node v_in = 2v, v_out = 2v + 1, super source 2n, super sink 2n + 1.
    let (src, snk) = (2 * n, 2 * n + 1);
    let mut cap: Vec<Vec<(usize, i32)>> = vec![Vec::new(); 2 * n + 2];
    let add = |cap: &mut Vec<Vec<(usize, i32)>>, a: usize, b: usize| {
        cap[a].push((b, 1));
        cap[b].push((a, 0));
    };
    for v in 0..n {
        add(&mut cap, 2 * v, 2 * v + 1);
        for &(w, _) in g.neighbors(v) {
            add(&mut cap, 2 * v + 1, 2 * w);
        }
    }
    for s in sources {
        add(&mut cap, src, 2 * s);
    }
    for t in sinks {
        add(&mut cap, 2 * t + 1, snk);
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; cap.len()];
        prev[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &(w, c) in &cap[u] {
                if c > 0 && prev[w] == usize::MAX {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if prev[snk] == usize::MAX {
            return flow;
        }
        let mut v = snk;
        while v != src {
            let u = prev[v];
            for e in cap[u].iter_mut().filter(|e| e.0 == v) {
                if e.1 > 0 {
                    e.1 -= 1;
                    break;
                }
            }
            if let Some(e) = cap[v].iter_mut().find(|e| e.0 == u) {
                e.1 += 1;
            }
            v = u;
        }
        flow += 1;
    }
}
