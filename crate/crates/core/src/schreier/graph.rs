use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::level_ops::level_images;
use crate::tree_groups::{GroupPreset, TreeWord};

/// Directed graph with generator-labelled edges and a marked vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub labels: Vec<String>,
    pub vertices: Vec<String>,
    /// `(src, dst, label)` as indices into `vertices` and `labels`.
    pub edges: Vec<(usize, usize, usize)>,
    pub basepoint: usize,
}

impl LabeledGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// `out[v][ℓ]`: the end of the unique `ℓ`-edge leaving `v`. Fails unless
    /// every label acts as a function on the vertices.
    pub fn out_table(&self) -> Result<Vec<Vec<usize>>> {
        let mut out = vec![vec![usize::MAX; self.labels.len()]; self.vertices.len()];
        for &(s, d, l) in &self.edges {
            if out[s][l] != usize::MAX {
                return Err(Error::InvalidInput(format!(
                    "vertex {} has two `{}` edges",
                    self.vertices[s], self.labels[l]
                )));
            }
            out[s][l] = d;
        }
        if let Some((v, l)) = out
            .iter()
            .enumerate()
            .find_map(|(v, row)| row.iter().position(|&d| d == usize::MAX).map(|l| (v, l)))
        {
            return Err(Error::InvalidInput(format!(
                "vertex {} has no `{}` edge",
                self.vertices[v], self.labels[l]
            )));
        }
        Ok(out)
    }

    /// Every vertex has exactly one out-edge per label.
    pub fn is_schreier(&self) -> bool {
        self.out_table().is_ok()
    }

    /// Labels that are involutions on the vertex set.
    pub fn involutive_labels(&self) -> Vec<bool> {
        match self.out_table() {
            Ok(out) => (0..self.labels.len())
                .map(|l| (0..out.len()).all(|v| out[out[v][l]][l] == v))
                .collect(),
            Err(_) => vec![false; self.labels.len()],
        }
    }

    /// Undirected neighbour lists without loops or repeated neighbours.
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.vertices.len()];
        for &(s, d, _) in &self.edges {
            if s != d {
                adj[s].insert(d);
                adj[d].insert(s);
            }
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// Distances from `source` in the undirected view, `None` if unreachable.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        distances(&self.neighbours(), source)
    }

    /// Sorts vertices by name and edges by (source name, label, target name).
    pub fn canonicalize(&mut self) {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| self.vertices[a].cmp(&self.vertices[b]));
        let mut new_index = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let mut label_order: Vec<usize> = (0..self.labels.len()).collect();
        label_order.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        let mut new_label = vec![0; label_order.len()];
        for (new, &old) in label_order.iter().enumerate() {
            new_label[old] = new;
        }
        self.vertices = order.iter().map(|&i| self.vertices[i].clone()).collect();
        self.labels = label_order
            .iter()
            .map(|&i| self.labels[i].clone())
            .collect();
        for e in &mut self.edges {
            *e = (new_index[e.0], new_index[e.1], new_label[e.2]);
        }
        self.edges.sort_by_key(|&(s, d, l)| (s, l, d));
        self.basepoint = new_index[self.basepoint];
    }
}

pub(crate) fn distances(adj: &[Vec<usize>], source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    let mut queue = VecDeque::from([source]);
    dist[source] = Some(0);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v].expect("queued vertices have a distance");
        for &w in &adj[v] {
            if dist[w].is_none() {
                dist[w] = Some(dv + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn word_names(d: usize, n: usize) -> Vec<String> {
    let dim = d.pow(n as u32);
    (0..dim)
        .map(|i| TreeWord::from_index(i, n, d).to_string())
        .collect()
}

/// Schreier graph of the level-`n` action, vertices in word-index order and
/// the basepoint on the ray `1ⁿ` (binary) or `2ⁿ` (ternary).
pub fn action_graph(preset: GroupPreset, n: usize) -> Result<LabeledGraph> {
    let d = preset.alphabet_size();
    let images = level_images(preset, n)?;
    let images = &images;
    let edges: Vec<(usize, usize, usize)> = (0..images[0].len())
        .flat_map(|v| {
            preset
                .generators()
                .map(move |g| (v, images[g.index()][v], g.index()))
        })
        .collect();
    Ok(LabeledGraph {
        labels: preset
            .generator_names()
            .iter()
            .map(|s| s.to_string())
            .collect(),
        vertices: word_names(d, n),
        edges,
        basepoint: TreeWord::constant(preset.ray_letter(), n).index(d),
    })
}

/// Whether a basepoint- and label-preserving isomorphism exists. Labels are
/// matched by name; both graphs must be Schreier graphs and connected.
pub fn labeled_isomorphic(g1: &LabeledGraph, g2: &LabeledGraph) -> bool {
    if g1.vertex_count() != g2.vertex_count() || g1.labels.len() != g2.labels.len() {
        return false;
    }
    let by_name: HashMap<&str, usize> = g2
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let Some(label_map) = g1
        .labels
        .iter()
        .map(|l| by_name.get(l.as_str()).copied())
        .collect::<Option<Vec<_>>>()
    else {
        return false;
    };
    let (Ok(out1), Ok(out2)) = (g1.out_table(), g2.out_table()) else {
        return false;
    };
    let n = g1.vertex_count();
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    phi[g1.basepoint] = g2.basepoint;
    used[g2.basepoint] = true;
    let mut queue = VecDeque::from([g1.basepoint]);
    let mut seen = 1;
    while let Some(v) = queue.pop_front() {
        for (l, &w) in out1[v].iter().enumerate() {
            let image = out2[phi[v]][label_map[l]];
            if phi[w] == usize::MAX {
                if used[image] {
                    return false;
                }
                phi[w] = image;
                used[image] = true;
                seen += 1;
                queue.push_back(w);
            } else if phi[w] != image {
                return false;
            }
        }
    }
    seen == n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_levels() {
        let g1 = action_graph(GroupPreset::G, 1).unwrap();
        assert_eq!(g1.vertices, ["0", "1"]);
        assert_eq!(g1.basepoint, 1);
        let out = g1.out_table().unwrap();
        assert_eq!(out[0], [1, 0, 0, 0]);
        assert_eq!(out[1], [0, 1, 1, 1]);

        let g2 = action_graph(GroupPreset::G, 2).unwrap();
        let dist = g2.distances_from(g2.basepoint);
        // path 11, 01, 00, 10
        let names = ["11", "01", "00", "10"];
        for (k, name) in names.iter().enumerate() {
            assert_eq!(dist[g2.vertex_index(name).unwrap()], Some(k));
        }

        let t = action_graph(GroupPreset::Gamma, 1).unwrap();
        let out = t.out_table().unwrap();
        for (v, row) in out.iter().enumerate() {
            assert_eq!(row[0], (v + 1) % 3);
            assert_eq!(row[2], v);
            assert_eq!(row[3], v);
        }
        assert_eq!(t.vertices[t.basepoint], "2");
    }

    #[test]
    fn isomorphism_checks_labels_and_base() {
        let g = action_graph(GroupPreset::G, 3).unwrap();
        assert!(labeled_isomorphic(&g, &g));
        let mut moved = g.clone();
        moved.basepoint = 0;
        assert!(!labeled_isomorphic(&g, &moved));
        assert!(!labeled_isomorphic(
            &g,
            &action_graph(GroupPreset::G, 2).unwrap()
        ));
        assert!(!labeled_isomorphic(
            &g,
            &action_graph(GroupPreset::Gtilde, 3).unwrap()
        ));
    }
}
