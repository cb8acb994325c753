use std::collections::HashMap;

use serde::Serialize;

use crate::model::{short_type_name, GuiHierarchy};

/// A node present in both hierarchies, with its preorder index on each side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommonNode {
    pub component_type: String,
    pub old_index: usize,
    pub new_index: usize,
    pub children: Vec<CommonNode>,
}

impl CommonNode {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(CommonNode::size).sum::<usize>()
    }

    pub fn label(&self) -> &str {
        short_type_name(&self.component_type)
    }
}

struct Solver<'a> {
    a: &'a GuiHierarchy,
    b: &'a GuiHierarchy,
    memo: HashMap<(usize, usize), usize>,
}

impl Solver<'_> {
    /// Size of the largest common subtree rooted at `(i, j)`.
    fn size(&mut self, i: usize, j: usize) -> usize {
        if let Some(&s) = self.memo.get(&(i, j)) {
            return s;
        }
        let s = if self.a.node(i).component.component_type != self.b.node(j).component.component_type {
            0
        } else {
            let table = self.table(i, j);
            1 + table[0][0]
        };
        self.memo.insert((i, j), s);
        s
    }

    /// Suffix table of the weighted longest common subsequence of the two
    /// child lists, where a pair weighs the size of its common subtree.
    fn table(&mut self, i: usize, j: usize) -> Vec<Vec<usize>> {
        let ca = self.a.node(i).children.clone();
        let cb = self.b.node(j).children.clone();
        let (n, m) = (ca.len(), cb.len());
        let mut t = vec![vec![0usize; m + 1]; n + 1];
        for p in (0..n).rev() {
            for q in (0..m).rev() {
                let pair = self.size(ca[p], cb[q]);
                let take = if pair > 0 { pair + t[p + 1][q + 1] } else { 0 };
                t[p][q] = take.max(t[p + 1][q]).max(t[p][q + 1]);
            }
        }
        t
    }

    fn build(&mut self, i: usize, j: usize) -> CommonNode {
        let table = self.table(i, j);
        let ca = self.a.node(i).children.clone();
        let cb = self.b.node(j).children.clone();
        let (mut p, mut q) = (0, 0);
        let mut children = Vec::new();
        while p < ca.len() && q < cb.len() {
            let pair = self.size(ca[p], cb[q]);
            if pair > 0 && table[p][q] == pair + table[p + 1][q + 1] {
                children.push(self.build(ca[p], cb[q]));
                p += 1;
                q += 1;
            } else if table[p][q] == table[p + 1][q] {
                p += 1;
            } else {
                q += 1;
            }
        }
        CommonNode {
            component_type: self.a.node(i).component.component_type.clone(),
            old_index: i,
            new_index: j,
            children,
        }
    }
}

/// Largest ordered common subtree anchored at both roots. Roots match when
/// their types are equal; children are aligned by a longest common
/// subsequence weighted by the size of each aligned pair's own common
/// subtree. `None` when the root types differ or a hierarchy is empty.
pub fn common_subtree(old: &GuiHierarchy, new: &GuiHierarchy) -> Option<CommonNode> {
    if old.is_empty() || new.is_empty() {
        return None;
    }
    let mut s = Solver {
        a: old,
        b: new,
        memo: HashMap::new(),
    };
    (s.size(0, 0) > 0).then(|| s.build(0, 0))
}
