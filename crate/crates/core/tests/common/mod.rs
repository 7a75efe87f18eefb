//! Brute-force reference implementations used by the integration tests.
//!
//! Nothing here calls into the library's arithmetic, ball, or component
//! code. Groups are multiplied with their textbook formulas (integer
//! matrices, the wreath product law, string reduction), balls are grown by
//! plain BFS over hash maps, and components come from a DFS flood fill.
//! The only shared convention is the generator order of each model.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

pub type Mat3 = [[i64; 3]; 3];

pub fn mat_mul(x: &Mat3, y: &Mat3) -> Mat3 {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    out
}

pub fn unitriangular(a: i64, b: i64, c: i64) -> Mat3 {
    [[1, a, c], [0, 1, b], [0, 0, 1]]
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OElem {
    Vector(Vec<i64>),
    Matrix(Mat3),
    /// Sorted lamp list `((x, y), value)` with nonzero values, and the head.
    Lamps(Vec<((i64, i64), i64)>, (i64, i64)),
    /// Reduced word over `a A b B ...` (upper case = inverse).
    Letters(String),
}

#[derive(Clone, Debug)]
pub enum OGroup {
    Lattice(usize),
    Heisenberg(bool),
    /// base dimension, lamp modulus (0 = Z)
    Wreath(usize, i64),
    Free(usize),
}

impl OGroup {
    pub fn for_spec(spec: &str) -> OGroup {
        match spec {
            "z" => OGroup::Lattice(1),
            "zd:2" => OGroup::Lattice(2),
            "zd:3" => OGroup::Lattice(3),
            "heisenberg:xy" => OGroup::Heisenberg(false),
            "heisenberg:xyz" => OGroup::Heisenberg(true),
            "lamplighter2" => OGroup::Wreath(1, 2),
            "zwrz" => OGroup::Wreath(1, 0),
            "lamplighter2_z2" => OGroup::Wreath(2, 2),
            "free:1" => OGroup::Free(1),
            "free:2" => OGroup::Free(2),
            "free:3" => OGroup::Free(3),
            other => panic!("no oracle for {other}"),
        }
    }

    pub fn identity(&self) -> OElem {
        match self {
            OGroup::Lattice(d) => OElem::Vector(vec![0; *d]),
            OGroup::Heisenberg(_) => OElem::Matrix(unitriangular(0, 0, 0)),
            OGroup::Wreath(..) => OElem::Lamps(Vec::new(), (0, 0)),
            OGroup::Free(_) => OElem::Letters(String::new()),
        }
    }

    /// The group element of generator `i`, in the library's generator order.
    pub fn generator(&self, i: usize) -> OElem {
        let sign = |k: usize| if k.is_multiple_of(2) { 1 } else { -1 };
        match self {
            OGroup::Lattice(d) => {
                let mut v = vec![0; *d];
                v[i / 2] = sign(i);
                OElem::Vector(v)
            }
            OGroup::Heisenberg(_) => {
                let s = sign(i);
                OElem::Matrix(match i / 2 {
                    0 => unitriangular(s, 0, 0),
                    1 => unitriangular(0, s, 0),
                    _ => unitriangular(0, 0, s),
                })
            }
            // Z_2 lamps: [a, t1, t1^-1, (t2, t2^-1)]
            OGroup::Wreath(_, 2) => {
                if i == 0 {
                    OElem::Lamps(vec![((0, 0), 1)], (0, 0))
                } else {
                    let s = if i % 2 == 1 { 1 } else { -1 };
                    let head = if i <= 2 { (s, 0) } else { (0, s) };
                    OElem::Lamps(vec![], head)
                }
            }
            // Z lamps: [a, a^-1, t, t^-1]
            OGroup::Wreath(..) => {
                if i < 2 {
                    OElem::Lamps(vec![((0, 0), sign(i))], (0, 0))
                } else {
                    OElem::Lamps(vec![], (sign(i), 0))
                }
            }
            OGroup::Free(_) => {
                let c = (b'a' + (i / 2) as u8) as char;
                OElem::Letters(if i.is_multiple_of(2) { c } else { c.to_ascii_uppercase() }.to_string())
            }
        }
    }

    pub fn generator_count(&self) -> usize {
        match self {
            OGroup::Lattice(d) => 2 * d,
            OGroup::Heisenberg(z) => {
                if *z {
                    6
                } else {
                    4
                }
            }
            OGroup::Wreath(d, 2) => 1 + 2 * d,
            OGroup::Wreath(..) => 4,
            OGroup::Free(k) => 2 * k,
        }
    }

    pub fn mul(&self, x: &OElem, y: &OElem) -> OElem {
        match (self, x, y) {
            (_, OElem::Vector(u), OElem::Vector(v)) => {
                OElem::Vector(u.iter().zip(v).map(|(a, b)| a + b).collect())
            }
            (_, OElem::Matrix(p), OElem::Matrix(q)) => OElem::Matrix(mat_mul(p, q)),
            (OGroup::Wreath(_, modulus), OElem::Lamps(f, h), OElem::Lamps(g, k)) => {
                // (f, h)(g, k) = (f + g(. - h), h + k)
                let mut lamps: BTreeMap<(i64, i64), i64> = f.iter().cloned().collect();
                for &((x, y), v) in g {
                    let e = lamps.entry((x + h.0, y + h.1)).or_insert(0);
                    *e += v;
                    if *modulus != 0 {
                        *e = e.rem_euclid(*modulus);
                    }
                }
                OElem::Lamps(
                    lamps.into_iter().filter(|&(_, v)| v != 0).collect(),
                    (h.0 + k.0, h.1 + k.1),
                )
            }
            (_, OElem::Letters(s), OElem::Letters(t)) => {
                let mut out: Vec<char> = s.chars().collect();
                for c in t.chars() {
                    let inv = if c.is_ascii_lowercase() {
                        c.to_ascii_uppercase()
                    } else {
                        c.to_ascii_lowercase()
                    };
                    if out.last() == Some(&inv) {
                        out.pop();
                    } else {
                        out.push(c);
                    }
                }
                OElem::Letters(out.into_iter().collect())
            }
            _ => panic!("mismatched oracle elements"),
        }
    }

    pub fn trace(&self, word: &[usize]) -> OElem {
        word.iter()
            .fold(self.identity(), |acc, &i| self.mul(&acc, &self.generator(i)))
    }
}

/// A ball grown by BFS, with explicit adjacency.
pub struct OBall {
    pub group: OGroup,
    pub radius: u32,
    pub elems: Vec<OElem>,
    pub length: Vec<u32>,
    /// BFS word (generator indices) reaching each element.
    pub word: Vec<Vec<usize>>,
    pub adj: Vec<Vec<usize>>,
    pub index: HashMap<OElem, usize>,
}

impl OBall {
    pub fn new(group: OGroup, radius: u32) -> OBall {
        let e = group.identity();
        let mut index = HashMap::new();
        index.insert(e.clone(), 0);
        let mut elems = vec![e];
        let mut length = vec![0];
        let mut word = vec![vec![]];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            if length[x] == radius {
                continue;
            }
            for i in 0..group.generator_count() {
                let y = group.mul(&elems[x], &group.generator(i));
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len());
                    let mut w = word[x].clone();
                    w.push(i);
                    elems.push(y);
                    length.push(length[x] + 1);
                    word.push(w);
                    queue.push_back(elems.len() - 1);
                }
            }
        }
        let adj = elems
            .iter()
            .map(|x| {
                (0..group.generator_count())
                    .filter_map(|i| index.get(&group.mul(x, &group.generator(i))).copied())
                    .collect()
            })
            .collect();
        OBall {
            group,
            radius,
            elems,
            length,
            word,
            adj,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    /// Components of the subgraph induced on `members`, by DFS.
    pub fn components(&self, members: &HashSet<usize>) -> Vec<Vec<usize>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut sorted: Vec<usize> = members.iter().copied().collect();
        sorted.sort_unstable();
        for &s in &sorted {
            if !seen.insert(s) {
                continue;
            }
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &y in &self.adj[x] {
                    if members.contains(&y) && seen.insert(y) {
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn outside(&self, n: i64) -> HashSet<usize> {
        (0..self.len())
            .filter(|&x| self.length[x] as i64 > n)
            .collect()
    }

    /// Components of `B_N \ B_n`, each tagged with whether it reaches `S_N`.
    pub fn complement(&self, n: i64) -> Vec<(Vec<usize>, bool)> {
        self.components(&self.outside(n))
            .into_iter()
            .map(|c| {
                let horizon = c.iter().any(|&x| self.length[x] == self.radius);
                (c, horizon)
            })
            .collect()
    }

    pub fn infinite_part(&self, n: i64) -> HashSet<usize> {
        self.complement(n)
            .into_iter()
            .filter(|(_, h)| *h)
            .flat_map(|(c, _)| c)
            .collect()
    }

    pub fn thick_sphere_count(&self, n: u32, r: u32) -> usize {
        let members: HashSet<usize> = self
            .infinite_part(n as i64)
            .into_iter()
            .filter(|&x| self.length[x] <= n + r)
            .collect();
        self.components(&members).len()
    }

    pub fn is_dead_end(&self, x: usize) -> bool {
        self.adj[x].iter().all(|&y| self.length[y] <= self.length[x])
    }

    /// `parts[m]` is the infinite part of `B_N \ B_m`, for `m = 0..N`.
    pub fn infinite_parts(&self) -> Vec<HashSet<usize>> {
        (0..self.radius as i64).map(|m| self.infinite_part(m)).collect()
    }

    pub fn depth(&self, x: usize, parts: &[HashSet<usize>]) -> u32 {
        let target = &parts[self.length[x] as usize];
        let mut dist = HashMap::from([(x, 0u32)]);
        let mut queue = VecDeque::from([x]);
        while let Some(y) = queue.pop_front() {
            if target.contains(&y) {
                return dist[&y];
            }
            for &z in &self.adj[y] {
                if !dist.contains_key(&z) {
                    dist.insert(z, dist[&y] + 1);
                    queue.push_back(z);
                }
            }
        }
        panic!("no target reachable")
    }

    pub fn retreat_depth(&self, x: usize, parts: &[HashSet<usize>]) -> u32 {
        let len = self.length[x] as i64;
        (1..)
            .find(|&d| len - d < 0 || parts[(len - d) as usize].contains(&x))
            .unwrap() as u32
    }
}

/// Every model spec the library ships.
pub const ALL_SPECS: &[&str] = &[
    "z",
    "zd:2",
    "zd:3",
    "heisenberg:xy",
    "heisenberg:xyz",
    "lamplighter2",
    "zwrz",
    "lamplighter2_z2",
    "free:2",
];

/// Sizes of L1 balls in Z^2.
pub fn l1_ball_size(n: i64) -> usize {
    (2 * n * n + 2 * n + 1) as usize
}

/// L1 thick-sphere components in Z^2 by direct coordinate flood fill.
pub fn plane_annulus_components(inner: i64, outer: i64) -> usize {
    let pts: HashSet<(i64, i64)> = (-outer..=outer)
        .flat_map(|x| (-outer..=outer).map(move |y| (x, y)))
        .filter(|&(x, y)| {
            let d = x.abs() + y.abs();
            d > inner && d <= outer
        })
        .collect();
    let mut seen = HashSet::new();
    let mut count = 0;
    for &p in &pts {
        if !seen.insert(p) {
            continue;
        }
        count += 1;
        let mut stack = vec![p];
        while let Some((x, y)) = stack.pop() {
            for q in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                if pts.contains(&q) && seen.insert(q) {
                    stack.push(q);
                }
            }
        }
    }
    count
}
