use serde::Serialize;

use super::graph::LabeledGraph;
use crate::error::{Error, Result};
use crate::limits;
use crate::tree_groups::GroupPreset;

/// One piece of a replacement graph. Letters name the copies `xσ` of an old
/// vertex `σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Replacement {
    /// Edge `xσ → yσ` inside the copies of a single old vertex.
    Local { from: u8, to: u8, label: usize },
    /// For an old rooted edge `σ → τ`: the edge `xσ → xτ`, or `xτ → xσ` when
    /// `reversed`.
    Across {
        letter: u8,
        label: usize,
        reversed: bool,
    },
    /// For an old rooted edge `σ → τ`: a loop at `xσ`.
    Loop { letter: u8, label: usize },
}

/// Rewriting rules turning the level-`n` Schreier graph into level `n+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubstitutionRuleSet {
    pub group: GroupPreset,
    /// Letter prepended by the inclusion `ι(σ) = xσ`.
    pub ray_letter: u8,
    /// Label whose edges trigger the `Across`/`Loop` replacements.
    pub rooted_label: usize,
    /// Label map for the non-rooted edges copied onto `ι(σ) → ι(τ)`.
    pub carried: Vec<(usize, usize)>,
    /// Replacements applied once per old vertex.
    pub per_vertex: Vec<Replacement>,
    /// Replacements applied once per old rooted edge.
    pub per_rooted_edge: Vec<Replacement>,
}

impl SubstitutionRuleSet {
    pub fn for_group(group: GroupPreset) -> Self {
        use Replacement::*;
        let (a, b, c, d) = (0, 1, 2, 3);
        match group {
            GroupPreset::G | GroupPreset::Gtilde => {
                let per_rooted_edge = if group == GroupPreset::G {
                    vec![
                        Across {
                            letter: 0,
                            label: b,
                            reversed: false,
                        },
                        Across {
                            letter: 0,
                            label: c,
                            reversed: false,
                        },
                        Loop {
                            letter: 0,
                            label: d,
                        },
                    ]
                } else {
                    vec![
                        Across {
                            letter: 0,
                            label: b,
                            reversed: false,
                        },
                        Loop {
                            letter: 0,
                            label: c,
                        },
                        Loop {
                            letter: 0,
                            label: d,
                        },
                    ]
                };
                Self {
                    group,
                    ray_letter: 1,
                    rooted_label: a,
                    // b ↦ d, c ↦ b, d ↦ c
                    carried: vec![(b, d), (c, b), (d, c)],
                    per_vertex: vec![
                        Local {
                            from: 1,
                            to: 0,
                            label: a,
                        },
                        Local {
                            from: 0,
                            to: 1,
                            label: a,
                        },
                    ],
                    per_rooted_edge,
                }
            }
            _ => {
                let (a_inv, x, x_inv) = (1, 2, 3);
                let mut per_rooted_edge = vec![
                    Across {
                        letter: 0,
                        label: x,
                        reversed: false,
                    },
                    Across {
                        letter: 0,
                        label: x_inv,
                        reversed: true,
                    },
                ];
                per_rooted_edge.extend(match group {
                    GroupPreset::Gamma => [
                        Loop {
                            letter: 1,
                            label: x,
                        },
                        Loop {
                            letter: 1,
                            label: x_inv,
                        },
                    ],
                    GroupPreset::GammaBar => [
                        Across {
                            letter: 1,
                            label: x,
                            reversed: false,
                        },
                        Across {
                            letter: 1,
                            label: x_inv,
                            reversed: true,
                        },
                    ],
                    _ => [
                        Across {
                            letter: 1,
                            label: x,
                            reversed: true,
                        },
                        Across {
                            letter: 1,
                            label: x_inv,
                            reversed: false,
                        },
                    ],
                });
                let mut per_vertex = Vec::new();
                for i in 0..3u8 {
                    per_vertex.push(Local {
                        from: i,
                        to: (i + 1) % 3,
                        label: a,
                    });
                    per_vertex.push(Local {
                        from: (i + 1) % 3,
                        to: i,
                        label: a_inv,
                    });
                }
                Self {
                    group,
                    ray_letter: 2,
                    rooted_label: a,
                    carried: vec![(x, x), (x_inv, x_inv)],
                    per_vertex,
                    per_rooted_edge,
                }
            }
        }
    }

    /// One vertex carrying a loop for every label.
    pub fn axiom(&self) -> LabeledGraph {
        let labels: Vec<String> = self
            .group
            .generator_names()
            .iter()
            .map(|s| s.to_string())
            .collect();
        LabeledGraph {
            edges: (0..labels.len()).map(|l| (0, 0, l)).collect(),
            labels,
            vertices: vec!["()".into()],
            basepoint: 0,
        }
    }

    /// Applies the rules once. Vertex names are the old names with a letter
    /// prepended.
    pub fn apply(&self, old: &LabeledGraph) -> Result<LabeledGraph> {
        let d = self.group.alphabet_size();
        let nv = old.vertex_count();
        // copy x of old vertex v lives at index x * nv + v
        let at = |x: u8, v: usize| x as usize * nv + v;
        let mut edges = Vec::with_capacity(old.edges.len() * d);
        for &(s, t, l) in &old.edges {
            if l == self.rooted_label {
                for r in &self.per_rooted_edge {
                    edges.push(match *r {
                        Replacement::Across {
                            letter,
                            label,
                            reversed: false,
                        } => (at(letter, s), at(letter, t), label),
                        Replacement::Across {
                            letter,
                            label,
                            reversed: true,
                        } => (at(letter, t), at(letter, s), label),
                        Replacement::Loop { letter, label } => {
                            (at(letter, s), at(letter, s), label)
                        }
                        Replacement::Local { .. } => {
                            return Err(Error::Internal("local piece in edge rule".into()))
                        }
                    });
                }
            } else if let Some(&(_, new)) = self.carried.iter().find(|(from, _)| *from == l) {
                edges.push((at(self.ray_letter, s), at(self.ray_letter, t), new));
            }
        }
        for v in 0..nv {
            for r in &self.per_vertex {
                match *r {
                    Replacement::Local { from, to, label } => {
                        edges.push((at(from, v), at(to, v), label))
                    }
                    _ => return Err(Error::Internal("edge piece in vertex rule".into())),
                }
            }
        }
        let strip = |name: &str| {
            if name == "()" {
                String::new()
            } else {
                name.to_string()
            }
        };
        let vertices = (0..d as u8)
            .flat_map(|x| old.vertices.iter().map(move |v| format!("{x}{}", strip(v))))
            .collect();
        let mut g = LabeledGraph {
            labels: old.labels.clone(),
            vertices,
            edges,
            basepoint: at(self.ray_letter, old.basepoint),
        };
        g.canonicalize();
        g.out_table().map_err(|e| {
            Error::Internal(format!("substitution broke the Schreier property: {e}"))
        })?;
        Ok(g)
    }
}

/// The level-`n` Schreier graph built from the axiom by `n` rule applications.
pub fn substitution_graph(group: GroupPreset, n: usize) -> Result<LabeledGraph> {
    limits::level_dim(group.alphabet_size(), n)?;
    let rules = SubstitutionRuleSet::for_group(group);
    let mut g = rules.axiom();
    for _ in 0..n {
        g = rules.apply(&g)?;
    }
    Ok(g)
}
