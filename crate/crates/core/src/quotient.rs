//! Quotients of finite index sets by generated equivalence relations.

use petgraph::unionfind::UnionFind;

/// An equivalence relation on `0..n`, grown by [`Quotient::union`].
pub(crate) struct Quotient {
    uf: UnionFind<usize>,
    len: usize,
}

impl Quotient {
    pub fn new(len: usize) -> Self {
        Quotient { uf: UnionFind::new(len), len }
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        self.uf.union(a, b)
    }

    pub fn find(&self, a: usize) -> usize {
        self.uf.find(a)
    }

    /// Classes ordered by the least key of their members; returns the class
    /// index of every element and the members of every class.
    pub fn classes_by<K: Ord + Clone>(&self, key: impl Fn(usize) -> K) -> (Vec<usize>, Vec<Vec<usize>>) {
        let labels = self.uf.clone().into_labeling();
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (i, &r) in labels.iter().enumerate().take(self.len) {
            by_root.entry(r).or_default().push(i);
        }
        let mut classes: Vec<(K, Vec<usize>)> = by_root
            .into_values()
            .map(|members| {
                let k = members.iter().map(|&i| key(i)).min().expect("non-empty class");
                (k, members)
            })
            .collect();
        classes.sort_by(|a, b| a.0.cmp(&b.0));
        let mut class_of = vec![0; self.len];
        for (c, (_, members)) in classes.iter().enumerate() {
            for &i in members {
                class_of[i] = c;
            }
        }
        (class_of, classes.into_iter().map(|(_, m)| m).collect())
    }
}
