//! Undirected, unweighted graphs and the community tables attached to them.
//!
//! Nodes carry dense indices `0..node_count`; the external ids read from
//! files are mapped to indices in first-seen order.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Immutable undirected graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    node_ids: Vec<String>,
    index_of: HashMap<String, usize>,
}

impl Graph {
    /// Builds a graph over `node_count` nodes whose ids are their decimal indices.
    ///
    /// Duplicate pairs (in either orientation) collapse to one edge and
    /// self-loops are dropped.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let ids = (0..node_count).map(|i| i.to_string()).collect();
        Self::with_ids(ids, edges)
    }

    /// Builds a graph with explicit external ids, one per dense index.
    pub fn with_ids<I>(node_ids: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let node_count = node_ids.len();
        if node_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut pairs = BTreeSet::new();
        for (u, v) in edges {
            for index in [u, v] {
                if index >= node_count {
                    return Err(Error::NodeOutOfRange { index, node_count });
                }
            }
            if u != v {
                pairs.insert((u.min(v), u.max(v)));
            }
        }

        let mut degree = vec![0usize; node_count];
        for &(u, v) in &pairs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..node_count].to_vec();
        let mut neighbors = vec![0usize; offsets[node_count]];
        for &(u, v) in &pairs {
            neighbors[fill[u]] = v;
            fill[u] += 1;
            neighbors[fill[v]] = u;
            fill[v] += 1;
        }
        for u in 0..node_count {
            neighbors[offsets[u]..offsets[u + 1]].sort_unstable();
        }

        let index_of = node_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        Ok(Self {
            offsets,
            neighbors,
            node_ids,
            index_of,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    pub fn node_id(&self, node: usize) -> &str {
        &self.node_ids[node]
    }

    pub fn node_ids(&self) -> &[String] {
        &self.node_ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index_of.get(id).copied()
    }

    /// Connected iff every node is reachable from node 0.
    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    stack.push(v);
                }
            }
        }
        reached == n
    }
}

/// Parses an edge list: two whitespace-separated ids per line, `#` comments.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut ids: Vec<String> = Vec::new();
    let mut index_of: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut intern = |id: &str| -> usize {
        if let Some(&i) = index_of.get(id) {
            return i;
        }
        let i = ids.len();
        ids.push(id.to_string());
        index_of.insert(id.to_string(), i);
        i
    };
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected two node ids, found {}", tokens.len()),
            });
        }
        let u = intern(tokens[0]);
        let v = intern(tokens[1]);
        edges.push((u, v));
    }
    Graph::with_ids(ids, edges)
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(&fs::read_to_string(path)?)
}

/// A named group of nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Community {
    pub name: String,
    /// Sorted dense node indices.
    pub members: Vec<usize>,
}

/// Possibly overlapping node groups, kept in the order they were first seen.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommunityTable {
    pub groups: Vec<Community>,
}

impl CommunityTable {
    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Community> {
        self.groups.iter().find(|c| c.name == name)
    }

    /// Re-indexes the table onto a subgraph; `kept[new] = old`.
    /// Members that were dropped disappear, and so do groups left empty.
    pub fn remap(&self, kept: &[usize]) -> CommunityTable {
        let new_index: HashMap<usize, usize> =
            kept.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let groups = self
            .groups
            .iter()
            .filter_map(|c| {
                let members: Vec<usize> = c
                    .members
                    .iter()
                    .filter_map(|old| new_index.get(old).copied())
                    .collect();
                (!members.is_empty()).then(|| Community {
                    name: c.name.clone(),
                    members,
                })
            })
            .collect();
        CommunityTable { groups }
    }
}

/// Parses `node_id group_id` lines against the graph's id map.
pub fn parse_labels(text: &str, graph: &Graph) -> Result<CommunityTable> {
    let mut order: Vec<String> = Vec::new();
    let mut members: HashMap<String, BTreeSet<usize>> = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected node id and group id, found {} tokens", tokens.len()),
            });
        }
        let node = graph
            .index_of(tokens[0])
            .ok_or_else(|| Error::UnknownNode(tokens[0].to_string()))?;
        let group = tokens[1];
        if !members.contains_key(group) {
            order.push(group.to_string());
        }
        members.entry(group.to_string()).or_default().insert(node);
    }
    let groups = order
        .into_iter()
        .map(|name| {
            let members = members.remove(&name).unwrap().into_iter().collect();
            Community { name, members }
        })
        .collect();
    Ok(CommunityTable { groups })
}

pub fn load_labels(path: impl AsRef<Path>, graph: &Graph) -> Result<CommunityTable> {
    parse_labels(&fs::read_to_string(path)?, graph)
}

/// Positive-label and sensitive node sets chosen from a community table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunitySelection {
    pub positive: Vec<usize>,
    pub sensitive: Vec<usize>,
}

/// Picks the first group with more than `min_size` members as positives and
/// the second such group as sensitive, unless `explicit_sensitive` is given.
pub fn select_communities(
    table: &CommunityTable,
    min_size: usize,
    explicit_sensitive: Option<&[usize]>,
) -> Result<CommunitySelection> {
    let needed = if explicit_sensitive.is_some() { 1 } else { 2 };
    let qualifying: Vec<&Community> = table
        .groups
        .iter()
        .filter(|c| c.members.len() > min_size)
        .take(needed)
        .collect();
    if qualifying.len() < needed {
        return Err(Error::NotEnoughCommunities {
            found: qualifying.len(),
            needed,
            min_size,
        });
    }
    let positive = qualifying[0].members.clone();
    let sensitive = match explicit_sensitive {
        Some(nodes) => {
            let mut nodes = nodes.to_vec();
            nodes.sort_unstable();
            nodes.dedup();
            nodes
        }
        None => qualifying[1].members.clone(),
    };
    Ok(CommunitySelection {
        positive,
        sensitive,
    })
}

/// Result of pruning: the subgraph plus `kept[new_index] = old_index`.
#[derive(Debug, Clone)]
pub struct Pruned {
    pub graph: Graph,
    pub kept: Vec<usize>,
}

/// Drops, in a single pass, every node whose degree is below `min_degree`.
///
/// Degrees are those of the input graph; nodes whose degree falls after the
/// pass are kept.
pub fn remove_low_degree(graph: &Graph, min_degree: usize) -> Result<Pruned> {
    let kept: Vec<usize> = (0..graph.node_count())
        .filter(|&v| graph.degree(v) >= min_degree)
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut new_index = vec![usize::MAX; graph.node_count()];
    for (new, &old) in kept.iter().enumerate() {
        new_index[old] = new;
    }
    let ids = kept.iter().map(|&v| graph.node_id(v).to_string()).collect();
    let edges: Vec<(usize, usize)> = graph
        .edges()
        .filter(|&(u, v)| new_index[u] != usize::MAX && new_index[v] != usize::MAX)
        .map(|(u, v)| (new_index[u], new_index[v]))
        .collect();
    Ok(Pruned {
        graph: Graph::with_ids(ids, edges)?,
        kept,
    })
}
