//! Root system of finite E6, in simple-root coordinates on nodes 1..6.

use std::collections::{HashMap, VecDeque};

pub const FINITE_RANK: usize = 6;

/// Coefficients of a root on the simple roots `alpha_1..alpha_6`.
pub type Root = [i32; FINITE_RANK];

/// Cartan matrix of finite E6 with the affine numbering (chain 1-2-3-4-5,
/// node 6 attached to 3).
pub const FINITE_CARTAN: [[i32; FINITE_RANK]; FINITE_RANK] = [
    [2, -1, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0],
    [0, -1, 2, -1, 0, -1],
    [0, 0, -1, 2, -1, 0],
    [0, 0, 0, -1, 2, 0],
    [0, 0, -1, 0, 0, 2],
];

#[derive(Clone, Debug)]
pub struct RootSystem {
    roots: Vec<Root>,
    index: HashMap<Root, usize>,
}

pub fn simple_root(i: usize) -> Root {
    std::array::from_fn(|k| i32::from(k == i))
}

pub fn inner(a: &Root, b: &Root) -> i32 {
    let mut acc = 0;
    for i in 0..FINITE_RANK {
        for j in 0..FINITE_RANK {
            acc += a[i] * FINITE_CARTAN[i][j] * b[j];
        }
    }
    acc
}

pub fn height(a: &Root) -> i32 {
    a.iter().sum()
}

pub fn add(a: &Root, b: &Root) -> Root {
    std::array::from_fn(|k| a[k] + b[k])
}

pub fn neg(a: &Root) -> Root {
    a.map(|x| -x)
}

impl RootSystem {
    /// Orbit of the simple roots under the simple reflections.
    pub fn e6() -> Self {
        let mut seen: HashMap<Root, ()> = HashMap::new();
        let mut queue: VecDeque<Root> = (0..FINITE_RANK).map(simple_root).collect();
        while let Some(r) = queue.pop_front() {
            if seen.insert(r, ()).is_some() {
                continue;
            }
            for i in 0..FINITE_RANK {
                let a = simple_root(i);
                let c = inner(&r, &a);
                let mut img = r;
                img[i] -= c;
                if !seen.contains_key(&img) {
                    queue.push_back(img);
                }
            }
        }
        let mut roots: Vec<Root> = seen.into_keys().collect();
        roots.sort_by_key(|r| (height(r), *r));
        let index = roots.iter().enumerate().map(|(k, r)| (*r, k)).collect();
        RootSystem { roots, index }
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.index.contains_key(r)
    }

    pub fn position(&self, r: &Root) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn positive(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| height(r) > 0)
    }

    pub fn highest_root(&self) -> Root {
        *self.roots.last().expect("nonempty root system")
    }
}
