//! Agglomerative hierarchical clustering of arcs from a distance matrix,
//! with single, complete and average linkage.

use crate::dtw::DistanceMatrix;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::str::FromStr;

/// Inter-cluster distance rule during merging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    #[default]
    Single,
    Complete,
    Average,
}

impl FromStr for Linkage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(Linkage::Single),
            "complete" => Ok(Linkage::Complete),
            "average" => Ok(Linkage::Average),
            other => Err(format!("unknown linkage `{other}` (expected single, complete or average)")),
        }
    }
}

/// One agglomeration step. Node ids follow the usual convention: leaves are
/// `0..n-1`, the k-th merge creates node `n+k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub height: f64,
    pub size: usize,
}

/// A stepwise dendrogram: leaf labels plus exactly `len(leaves) - 1` merges
/// with non-decreasing heights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub leaves: Vec<String>,
    pub merges: Vec<Merge>,
}

/// Repeatedly merges the two clusters at minimum linkage distance.
/// Distance ties resolve to the pair whose (smaller, larger) representative
/// labels compare lexicographically smallest; a cluster is represented by
/// its lexicographically smallest leaf label.
pub fn hcluster(matrix: &DistanceMatrix, linkage: Linkage) -> Dendrogram {
    let n = matrix.len();
    let leaves = matrix.labels.clone();
    if n < 2 {
        return Dendrogram {
            leaves,
            merges: Vec::new(),
        };
    }

    #[derive(Clone)]
    struct Active {
        node: usize,
        repr: String,
        size: usize,
    }

    fn pair_key<'a>(a: &'a Active, b: &'a Active) -> (&'a str, &'a str) {
        if a.repr <= b.repr {
            (&a.repr, &b.repr)
        } else {
            (&b.repr, &a.repr)
        }
    }

    // dist[i][j] between active clusters, kept in lockstep with `active`
    let mut dist: Vec<Vec<f64>> = matrix.values.clone();
    let mut active: Vec<Active> = leaves
        .iter()
        .enumerate()
        .map(|(i, l)| Active {
            node: i,
            repr: l.clone(),
            size: 1,
        })
        .collect();
    let mut merges = Vec::with_capacity(n - 1);
    let mut next_node = n;

    while active.len() > 1 {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..active.len() {
            for j in i + 1..active.len() {
                let d = dist[i][j];
                let better = match best {
                    None => true,
                    Some((bi, bj, bd)) => {
                        if d < bd {
                            true
                        } else if d > bd {
                            false
                        } else {
                            pair_key(&active[i], &active[j]) < pair_key(&active[bi], &active[bj])
                        }
                    }
                };
                if better {
                    best = Some((i, j, d));
                }
            }
        }
        let (i, j, height) = best.expect("at least two active clusters");

        let (first, second) = if active[i].repr <= active[j].repr {
            (i, j)
        } else {
            (j, i)
        };
        let size = active[i].size + active[j].size;
        merges.push(Merge {
            a: active[first].node,
            b: active[second].node,
            height,
            size,
        });

        // Lance-Williams update of row i, then drop row j.
        let (si, sj) = (active[i].size as f64, active[j].size as f64);
        for k in 0..active.len() {
            if k == i || k == j {
                continue;
            }
            let dik = dist[i][k];
            let djk = dist[j][k];
            let d = match linkage {
                Linkage::Single => dik.min(djk),
                Linkage::Complete => dik.max(djk),
                Linkage::Average => (si * dik + sj * djk) / (si + sj),
            };
            dist[i][k] = d;
            dist[k][i] = d;
        }
        active[i] = Active {
            node: next_node,
            repr: active[first].repr.clone(),
            size,
        };
        next_node += 1;
        active.remove(j);
        dist.remove(j);
        for row in &mut dist {
            row.remove(j);
        }
    }

    Dendrogram { leaves, merges }
}

impl Dendrogram {
    /// Leaf indices in display order (depth-first, first-merged child
    /// first).
    pub fn leaf_order(&self) -> Vec<usize> {
        let n = self.leaves.len();
        if n == 0 {
            return Vec::new();
        }
        if self.merges.is_empty() {
            return (0..n).collect();
        }
        let root = n + self.merges.len() - 1;
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        while let Some(node) = stack.pop() {
            if node < n {
                order.push(node);
            } else {
                let merge = &self.merges[node - n];
                // push b first so a is visited first
                stack.push(merge.b);
                stack.push(merge.a);
            }
        }
        order
    }

    /// Height of the named node (0 for leaves).
    fn node_height(&self, node: usize) -> f64 {
        let n = self.leaves.len();
        if node < n {
            0.0
        } else {
            self.merges[node - n].height
        }
    }

    /// Nested merge tree with heights, for the JSON artifact.
    pub fn to_json_tree(&self) -> serde_json::Value {
        let n = self.leaves.len();
        if n == 0 {
            return json!(null);
        }
        if self.merges.is_empty() {
            return json!({ "leaf": self.leaves[0] });
        }
        self.node_json(n + self.merges.len() - 1)
    }

    fn node_json(&self, node: usize) -> serde_json::Value {
        let n = self.leaves.len();
        if node < n {
            json!({ "leaf": self.leaves[node] })
        } else {
            let merge = &self.merges[node - n];
            json!({
                "height": merge.height,
                "size": merge.size,
                "children": [self.node_json(merge.a), self.node_json(merge.b)],
            })
        }
    }

    /// Newick text with branch lengths (parent height minus child height).
    pub fn to_newick(&self) -> String {
        let n = self.leaves.len();
        if n == 0 {
            return ";".to_string();
        }
        if self.merges.is_empty() {
            return format!("{};", newick_escape(&self.leaves[0]));
        }
        let root = n + self.merges.len() - 1;
        let mut out = String::new();
        self.newick_node(root, self.node_height(root), &mut out);
        out.push(';');
        out
    }

    fn newick_node(&self, node: usize, parent_height: f64, out: &mut String) {
        let n = self.leaves.len();
        if node < n {
            out.push_str(&newick_escape(&self.leaves[node]));
            out.push(':');
            out.push_str(&format_height(parent_height));
        } else {
            let merge = &self.merges[node - n];
            out.push('(');
            self.newick_node(merge.a, merge.height, out);
            out.push(',');
            self.newick_node(merge.b, merge.height, out);
            out.push_str("):");
            out.push_str(&format_height(parent_height - merge.height));
        }
    }
}

fn newick_escape(label: &str) -> String {
    if label
        .chars()
        .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | ',' | ':' | ';' | '\''))
    {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_string()
    }
}

fn format_height(h: f64) -> String {
    format!("{h:.6}")
}
