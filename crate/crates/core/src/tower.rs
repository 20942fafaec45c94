//! An independent model of the completion's objects at the empty context:
//! a plain graph grown in stages, each stage adjoining one fresh object and
//! a formal iso for every object of the previous stage.

use petgraph::algo::is_isomorphic_matching;
use petgraph::Graph;

use crate::completion::Fragment;

#[derive(Clone, Debug)]
pub struct Tower {
    /// Object labels: base names, then primed copies.
    pub objects: Vec<String>,
    /// The stage at which each object appeared.
    pub stage: Vec<usize>,
    /// `(src, dst, iso)` arrows.
    pub arrows: Vec<(usize, usize, bool)>,
}

impl Tower {
    /// Grow `depth` stages over a base graph.
    pub fn build(base_objects: &[&str], base_arrows: &[(usize, usize, bool)], depth: usize) -> Tower {
        let mut t = Tower {
            objects: base_objects.iter().map(|s| s.to_string()).collect(),
            stage: vec![0; base_objects.len()],
            arrows: base_arrows.to_vec(),
        };
        for d in 1..=depth {
            let newest: Vec<usize> = (0..t.objects.len()).filter(|&k| t.stage[k] == d - 1).collect();
            for k in newest {
                t.objects.push(format!("{}'", t.objects[k]));
                t.stage.push(d);
                t.arrows.push((k, t.objects.len() - 1, true));
            }
        }
        t
    }

    pub fn count(&self) -> usize {
        self.objects.len()
    }

    pub fn graph(&self) -> Graph<(), bool> {
        let mut g = Graph::new();
        let nodes: Vec<_> = self.objects.iter().map(|_| g.add_node(())).collect();
        for &(s, d, iso) in &self.arrows {
            g.add_edge(nodes[s], nodes[d], iso);
        }
        g
    }

    /// Whether a fragment's objects and generating arrows form the same
    /// graph, iso markings included.
    pub fn matches(&self, f: &Fragment) -> bool {
        is_isomorphic_matching(&self.graph(), &f.graph(), |_, _| true, |a, b| a == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_counts() {
        let counts: Vec<usize> = (0..4).map(|d| Tower::build(&["x", "y"], &[], d).count()).collect();
        assert_eq!(counts, [2, 4, 6, 8]);
    }

    #[test]
    fn markings_matter() {
        let a = Tower::build(&["x", "y"], &[(0, 1, true)], 1).graph();
        let b = Tower::build(&["x", "y"], &[(0, 1, false)], 1).graph();
        assert!(!is_isomorphic_matching(&a, &b, |_, _| true, |x, y| x == y));
    }
}
