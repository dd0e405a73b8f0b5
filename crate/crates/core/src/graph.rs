//! Small directed-graph helpers over string-named edge sets.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;

/// Node sets of every cycle (strongly connected component with more than
/// one node, or a self-loop), members sorted, cycles sorted.
pub fn cycles<'a>(edges: impl IntoIterator<Item = (&'a str, &'a str)>) -> Vec<Vec<&'a str>> {
    let mut graph = DiGraphMap::<&str, ()>::new();
    for (a, b) in edges {
        graph.add_edge(a, b, ());
    }
    let mut out: Vec<Vec<&str>> = tarjan_scc(&graph)
        .into_iter()
        .filter(|scc| scc.len() > 1 || graph.contains_edge(scc[0], scc[0]))
        .map(|mut scc| {
            scc.sort_unstable();
            scc
        })
        .collect();
    out.sort();
    out
}

/// Nodes reachable from `start` in one or more steps.
pub fn descendants<'a>(adjacency: &BTreeMap<&'a str, Vec<&'a str>>, start: &'a str) -> BTreeSet<&'a str> {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<&str> = adjacency.get(start).cloned().unwrap_or_default();
    while let Some(n) = stack.pop() {
        if seen.insert(n) {
            if let Some(next) = adjacency.get(n) {
                stack.extend(next.iter().copied());
            }
        }
    }
    seen
}

pub fn adjacency<'a>(edges: impl IntoIterator<Item = (&'a str, &'a str)>) -> BTreeMap<&'a str, Vec<&'a str>> {
    let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (a, b) in edges {
        adj.entry(a).or_default().push(b);
    }
    adj
}

/// Edges `(a, b)` implied by a longer path `a -> c -> ... -> b`.
///
/// On an acyclic edge set, removing the returned edges yields the unique
/// transitive reduction.
pub fn transitively_implied(edges: &BTreeSet<(String, String)>) -> BTreeSet<(String, String)> {
    let adj = adjacency(edges.iter().map(|(a, b)| (a.as_str(), b.as_str())));
    let mut memo: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut implied = BTreeSet::new();
    for (a, b) in edges {
        if a == b {
            continue;
        }
        let via_other = adj[a.as_str()].iter().filter(|&&c| c != b && c != a).any(|&c| {
            memo.entry(c).or_insert_with(|| descendants(&adj, c)).contains(b.as_str())
        });
        if via_other {
            implied.insert((a.clone(), b.clone()));
        }
    }
    implied
}
