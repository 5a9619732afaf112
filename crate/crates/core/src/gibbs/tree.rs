use std::ops::Range;

use crate::error::{Error, Result};

/// The ball V_n of radius n in the Cayley tree of order k, vertices in
/// breadth-first order so that V_m is always a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTree {
    k: usize,
    depth: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    level: Vec<usize>,
    shells: Vec<Range<usize>>,
}

/// Spin per vertex, indexed like the tree's vertices.
pub type Configuration = Vec<u8>;

pub fn build_tree(k: usize, n: usize) -> Result<CayleyTree> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("tree order must be at least 2, got {k}")));
    }
    let mut parent = vec![None];
    let mut children = vec![Vec::new()];
    let mut level = vec![0];
    let mut shells = vec![std::ops::Range { start: 0, end: 1 }];
    for m in 1..=n {
        let prev = shells[m - 1].clone();
        let start = parent.len();
        for x in prev {
            let fan = if x == 0 { k + 1 } else { k };
            for _ in 0..fan {
                let y = parent.len();
                parent.push(Some(x));
                children.push(Vec::new());
                level.push(m);
                children[x].push(y);
            }
        }
        shells.push(start..parent.len());
    }
    Ok(CayleyTree { k, depth: n, parent, children, level, shells })
}

impl CayleyTree {
    pub fn order(&self) -> usize {
        self.k
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    /// W_m as a range of vertex ids.
    pub fn shell(&self, m: usize) -> Range<usize> {
        self.shells[m].clone()
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    /// S(x); empty on the outer shell.
    pub fn successors(&self, x: usize) -> &[usize] {
        &self.children[x]
    }

    /// Number of successors x has in the infinite tree.
    pub fn fan_out(&self, x: usize) -> usize {
        if x == 0 {
            self.k + 1
        } else {
            self.k
        }
    }

    pub fn level(&self, x: usize) -> usize {
        self.level[x]
    }

    /// Number of admissible configurations with spins in 0..=m.
    pub fn count_admissible(&self, m: u8) -> u128 {
        // (free, occupied) counts per subtree, bottom-up
        let mut free = vec![1u128; self.vertex_count()];
        let mut occupied = vec![u128::from(m); self.vertex_count()];
        for x in (0..self.vertex_count()).rev() {
            for &y in &self.children[x] {
                free[x] = free[x].saturating_mul(free[y].saturating_add(occupied[y]));
                occupied[x] = occupied[x].saturating_mul(free[y]);
            }
        }
        free[0].saturating_add(occupied[0])
    }
}

pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

/// All admissible configurations in lexicographic order of the vertex sequence.
pub fn enumerate_admissible(tree: &CayleyTree, m: u8, cap: u128) -> Result<Vec<Configuration>> {
    if m == 0 {
        return Err(Error::InvalidInput("maximum spin must be at least 1".into()));
    }
    let count = tree.count_admissible(m);
    if count > cap {
        return Err(Error::SizeGuard { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut sigma = vec![0u8; tree.vertex_count()];
    fill(tree, m, 0, &mut sigma, &mut out);
    Ok(out)
}

fn fill(tree: &CayleyTree, m: u8, x: usize, sigma: &mut Configuration, out: &mut Vec<Configuration>) {
    if x == sigma.len() {
        out.push(sigma.clone());
        return;
    }
    let top = match tree.parent(x) {
        Some(px) if sigma[px] != 0 => 0,
        _ => m,
    };
    for s in 0..=top {
        sigma[x] = s;
        fill(tree, m, x + 1, sigma, out);
    }
    sigma[x] = 0;
}
