//! Complement components of balls, infinite-part approximation, thick
//! spheres, region shells and ends profiles.
//!
//! All connectivity is that of the induced subgraph on the stated vertex set.
//! A complement component is a *horizon* component when it reaches the
//! outermost computed sphere `S_N`; those are treated as (parts of) the
//! infinite component. A component that does not reach `S_N` is separated
//! from everything outside `B_N` and is therefore finite in the full graph.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::ball::{Adjacency, BallTable};
use crate::error::{AnalysisError, Result};
use crate::groups::{Element, EndsHint};

/// How far below the horizon an inner radius must stay before horizon
/// components are read as infinite.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Guard {
    fixed: Option<u32>,
}

impl Guard {
    /// `max(2r, 4)` for thickness `r`.
    pub fn auto() -> Self {
        Guard { fixed: None }
    }

    pub fn fixed(width: u32) -> Self {
        Guard { fixed: Some(width) }
    }

    pub fn width(&self, r: u32) -> u32 {
        self.fixed.unwrap_or((2 * r).max(4))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentClass {
    /// Does not reach `S_N`; provably finite.
    EnclosedFinite,
    /// Reaches `S_N`; treated as infinite.
    Horizon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentInfo {
    /// Vertex with the smallest canonical key; this orders component ids.
    pub representative: u32,
    pub size: usize,
    pub min_length: u32,
    pub max_length: u32,
    pub class: ComponentClass,
}

/// Connected components of the induced subgraph on `B_N \ B_n`.
#[derive(Clone, Debug)]
pub struct ComponentMap {
    radius: u32,
    inner: u32,
    offset: usize,
    labels: Vec<u32>,
    components: Vec<ComponentInfo>,
}

impl ComponentMap {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn inner(&self) -> u32 {
        self.inner
    }

    pub fn components(&self) -> &[ComponentInfo] {
        &self.components
    }

    /// Component id of `v`, or `None` when `v` lies in `B_n`.
    pub fn component_of(&self, v: u32) -> Option<usize> {
        (v as usize)
            .checked_sub(self.offset)
            .map(|i| self.labels[i] as usize)
    }

    pub fn is_horizon(&self, v: u32) -> bool {
        self.component_of(v)
            .is_some_and(|c| self.components[c].class == ComponentClass::Horizon)
    }

    pub fn horizon_count(&self) -> usize {
        self.count(ComponentClass::Horizon)
    }

    pub fn enclosed_count(&self) -> usize {
        self.count(ComponentClass::EnclosedFinite)
    }

    fn count(&self, class: ComponentClass) -> usize {
        self.components.iter().filter(|c| c.class == class).count()
    }

    /// Number of vertices in horizon components.
    pub fn infinite_part_size(&self) -> usize {
        self.components
            .iter()
            .filter(|c| c.class == ComponentClass::Horizon)
            .map(|c| c.size)
            .sum()
    }

    /// Vertex range of the annulus `B_N \ B_n`.
    pub fn vertices(&self) -> std::ops::Range<u32> {
        self.offset as u32..(self.offset + self.labels.len()) as u32
    }
}

/// A set of ball vertices, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    vertices: Vec<u32>,
}

impl Region {
    pub fn from_vertices(mut vertices: Vec<u32>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Region { vertices }
    }

    /// Elements must lie in the ball.
    pub fn from_elements<'a, I>(ball: &BallTable, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Element>,
    {
        let vertices = elements
            .into_iter()
            .map(|g| {
                ball.lookup(g).ok_or(AnalysisError::NotInBall {
                    radius: ball.radius(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_vertices(vertices))
    }

    /// `B_n` as a region.
    pub fn ball(ball: &BallTable, n: u32) -> Self {
        let r = ball.ball_range(n);
        Region {
            vertices: (r.start as u32..r.end as u32).collect(),
        }
    }

    /// `B_hi \ B_lo` as a region (`lo < hi`).
    pub fn annulus(ball: &BallTable, lo: u32, hi: u32) -> Self {
        let start = ball.ball_range(lo).end as u32;
        let end = ball.ball_range(hi).end as u32;
        Region {
            vertices: (start..end).collect(),
        }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// Union-find over local indices `0..n`.
pub(crate) struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    pub(crate) fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
    }
}

/// Connected components of the subgraph induced on `members` (sorted ball
/// vertices), ordered by smallest canonical key. Each component lists its
/// vertices in ascending index order.
pub(crate) fn induced_components(
    ball: &BallTable,
    adj: &Adjacency,
    members: &[u32],
) -> Vec<Vec<u32>> {
    let local = |v: u32| members.binary_search(&v).ok();
    let mut sets = DisjointSets::new(members.len());
    for (i, &v) in members.iter().enumerate() {
        for u in adj.neighbors(v) {
            if let Some(j) = local(u) {
                sets.union(i as u32, j as u32);
            }
        }
    }
    let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (i, &v) in members.iter().enumerate() {
        groups.entry(sets.find(i as u32)).or_default().push(v);
    }
    let mut out: Vec<Vec<u32>> = groups.into_values().collect();
    out.sort_by(|a, b| min_key(ball, a).cmp(min_key(ball, b)));
    out
}

fn min_key<'a>(ball: &'a BallTable, vs: &[u32]) -> &'a [u8] {
    vs.iter().map(|&v| ball.key(v)).min().unwrap_or(&[])
}

fn min_key_vertex(ball: &BallTable, vs: &[u32]) -> u32 {
    *vs.iter().min_by_key(|&&v| ball.key(v)).expect("nonempty")
}

/// Flags attached to every horizon-dependent result.
pub const FLAG_HORIZON_LIMITED: &str = "horizon-limited";
/// More than one horizon component; the infinite part is their union.
pub const FLAG_MULTI_HORIZON: &str = "multi-horizon";
/// Enclosed finite pockets were excluded from the infinite part.
pub const FLAG_ENCLOSED_POCKETS: &str = "enclosed-pockets";

fn flags_for(map: &ComponentMap) -> Vec<&'static str> {
    let mut flags = vec![FLAG_HORIZON_LIMITED];
    if map.horizon_count() > 1 {
        flags.push(FLAG_MULTI_HORIZON);
    }
    if map.enclosed_count() > 0 {
        flags.push(FLAG_ENCLOSED_POCKETS);
    }
    flags
}

/// Components of `B_{n+r} ∩ B_n^{comp,∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThickSphere {
    pub n: u32,
    pub r: u32,
    pub component_count: usize,
    pub infinite_part_size: usize,
    pub horizon_components: usize,
    pub enclosed_components: usize,
    pub flags: Vec<&'static str>,
    /// Witness partition, components ordered by smallest canonical key.
    #[serde(skip)]
    pub partition: Vec<Vec<u32>>,
}

impl ThickSphere {
    /// One vertex (smallest key) per component.
    pub fn witnesses(&self, ball: &BallTable) -> Vec<u32> {
        self.partition
            .iter()
            .map(|c| min_key_vertex(ball, c))
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.partition.iter().map(Vec::len).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereScan {
    pub r: u32,
    pub rows: Vec<ThickSphere>,
}

impl SphereScan {
    pub fn counts(&self) -> Vec<usize> {
        self.rows.iter().map(|row| row.component_count).collect()
    }

    /// Every scanned thick sphere is connected.
    pub fn connected(&self) -> bool {
        self.rows.iter().all(|row| row.component_count == 1)
    }

    /// First `n` whose thick sphere is disconnected.
    pub fn first_disconnected(&self) -> Option<&ThickSphere> {
        self.rows.iter().find(|row| row.component_count >= 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadiusSearch {
    /// Smallest connecting thickness, if any up to the cap.
    pub radius: Option<u32>,
    /// Per-thickness component counts for every `r` tried.
    pub tried: Vec<(u32, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleConnectivity {
    pub region_components: usize,
    pub complement_components: usize,
    pub simply_connected: bool,
    /// The complement is only examined inside `B_N`.
    pub horizon_limited: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum TailVerdict {
    StabilizesAt(usize),
    Grows,
    Inconclusive,
}

impl std::fmt::Display for TailVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TailVerdict::StabilizesAt(k) => write!(f, "stabilizes at {k}"),
            TailVerdict::Grows => write!(f, "grows"),
            TailVerdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Number of trailing counts that decide the verdict.
pub const TAIL_WINDOW: usize = 3;

impl TailVerdict {
    /// Constant tail, strictly increasing tail, or neither.
    pub fn from_counts(counts: &[usize]) -> Self {
        if counts.len() < TAIL_WINDOW {
            return TailVerdict::Inconclusive;
        }
        let tail = &counts[counts.len() - TAIL_WINDOW..];
        if tail.windows(2).all(|w| w[0] == w[1]) {
            TailVerdict::StabilizesAt(tail[0])
        } else if tail.windows(2).all(|w| w[0] < w[1]) {
            TailVerdict::Grows
        } else {
            TailVerdict::Inconclusive
        }
    }

    /// The end count this verdict points to, when it is one of 0, 1, 2, ∞.
    pub fn ends(&self) -> Option<EndsHint> {
        match self {
            TailVerdict::StabilizesAt(0) => Some(EndsHint::Zero),
            TailVerdict::StabilizesAt(1) => Some(EndsHint::One),
            TailVerdict::StabilizesAt(2) => Some(EndsHint::Two),
            TailVerdict::Grows => Some(EndsHint::Infinite),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndsProfile {
    pub scan: SphereScan,
    pub verdict: TailVerdict,
    pub ends: Option<EndsHint>,
}

/// Read-only analysis context over a ball: transient adjacency index,
/// horizon guard, and a cache of complement component maps.
pub struct Explorer<'a> {
    ball: &'a BallTable,
    adj: Adjacency,
    guard: Guard,
    maps: Mutex<FxHashMap<u32, Arc<ComponentMap>>>,
}

impl<'a> Explorer<'a> {
    pub fn new(ball: &'a BallTable) -> Self {
        Self::with_guard(ball, Guard::auto())
    }

    pub fn with_guard(ball: &'a BallTable, guard: Guard) -> Self {
        Explorer {
            ball,
            adj: Adjacency::build(ball),
            guard,
            maps: Mutex::new(FxHashMap::default()),
        }
    }

    pub fn ball(&self) -> &'a BallTable {
        self.ball
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adj
    }

    pub fn guard(&self) -> Guard {
        self.guard
    }

    /// Checks `value + guard(r) <= N` (and `value + r <= N`).
    pub(crate) fn check_guard(&self, what: &'static str, value: u32, r: u32) -> Result<()> {
        let radius = self.ball.radius();
        let guard = self.guard.width(r);
        let limit = radius.saturating_sub(guard.max(r));
        if value + guard.max(r) > radius {
            return Err(AnalysisError::GuardViolated {
                what,
                value,
                limit,
                radius,
                guard,
            });
        }
        Ok(())
    }

    /// Exact component decomposition of `B_N \ B_n` (`n < N`).
    pub fn complement_components(&self, n: u32) -> Result<Arc<ComponentMap>> {
        let radius = self.ball.radius();
        if n >= radius {
            return Err(AnalysisError::OutOfRange {
                n,
                max: radius.saturating_sub(1),
            });
        }
        if let Some(map) = self.maps.lock().unwrap().get(&n) {
            return Ok(map.clone());
        }
        let map = Arc::new(self.compute_components(n));
        Ok(self
            .maps
            .lock()
            .unwrap()
            .entry(n)
            .or_insert(map)
            .clone())
    }

    fn compute_components(&self, n: u32) -> ComponentMap {
        let ball = self.ball;
        let offset = ball.ball_range(n).end;
        let count = ball.len() - offset;
        let mut sets = DisjointSets::new(count);
        for v in offset..ball.len() {
            for u in self.adj.neighbors(v as u32) {
                if (u as usize) > v {
                    sets.union((v - offset) as u32, (u as usize - offset) as u32);
                }
            }
        }

        // per root: representative (min key), size, length span
        let mut per_root: FxHashMap<u32, ComponentInfo> = FxHashMap::default();
        let mut roots = vec![0u32; count];
        for (i, root) in roots.iter_mut().enumerate() {
            let v = (offset + i) as u32;
            *root = sets.find(i as u32);
            let len = ball.length(v);
            let info = per_root.entry(*root).or_insert(ComponentInfo {
                representative: v,
                size: 0,
                min_length: len,
                max_length: len,
                class: ComponentClass::EnclosedFinite,
            });
            info.size += 1;
            info.min_length = info.min_length.min(len);
            info.max_length = info.max_length.max(len);
            if ball.key(v) < ball.key(info.representative) {
                info.representative = v;
            }
        }
        let mut ordered: Vec<(u32, ComponentInfo)> = per_root.into_iter().collect();
        ordered.sort_by(|a, b| ball.key(a.1.representative).cmp(ball.key(b.1.representative)));
        let mut id_of: FxHashMap<u32, u32> = FxHashMap::default();
        let components = ordered
            .into_iter()
            .enumerate()
            .map(|(id, (root, mut info))| {
                id_of.insert(root, id as u32);
                if info.max_length == ball.radius() {
                    info.class = ComponentClass::Horizon;
                }
                info
            })
            .collect();
        let labels = roots.iter().map(|r| id_of[r]).collect();
        ComponentMap {
            radius: ball.radius(),
            inner: n,
            offset,
            labels,
            components,
        }
    }

    /// Union of the horizon components of `B_N \ B_n`.
    pub fn infinite_part(&self, n: u32) -> Result<Region> {
        self.check_guard("n", n, 0)?;
        let map = self.complement_components(n)?;
        if map.horizon_count() == 0 {
            return Err(AnalysisError::NoHorizonComponent {
                n,
                radius: self.ball.radius(),
            });
        }
        Ok(Region {
            vertices: map.vertices().filter(|&v| map.is_horizon(v)).collect(),
        })
    }

    /// Components of the induced subgraph on `B_{n+r} ∩ B_n^{comp,∞}`.
    pub fn thick_sphere_components(&self, n: u32, r: u32) -> Result<ThickSphere> {
        self.check_guard("n", n, r)?;
        let map = self.complement_components(n)?;
        let outer = self.ball.ball_range(n + r).end as u32;
        let members: Vec<u32> = (map.vertices().start..outer)
            .filter(|&v| map.is_horizon(v))
            .collect();
        let partition = induced_components(self.ball, &self.adj, &members);
        Ok(ThickSphere {
            n,
            r,
            component_count: partition.len(),
            infinite_part_size: map.infinite_part_size(),
            horizon_components: map.horizon_count(),
            enclosed_components: map.enclosed_count(),
            flags: flags_for(&map),
            partition,
        })
    }

    /// Thick-sphere component counts for `n = 0..=n_max`.
    pub fn scan_connected_spheres(&self, r: u32, n_max: u32) -> Result<SphereScan> {
        self.check_guard("n_max", n_max, r)?;
        let rows = (0..=n_max)
            .into_par_iter()
            .map(|n| self.thick_sphere_components(n, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(SphereScan { r, rows })
    }

    /// Smallest `r <= r_cap` whose scan over `0..=n_max` is all ones.
    pub fn min_connecting_radius(&self, n_max: u32, r_cap: u32) -> Result<RadiusSearch> {
        self.check_guard("n_max", n_max, r_cap)?;
        let mut tried = Vec::new();
        for r in 1..=r_cap {
            let scan = self.scan_connected_spheres(r, n_max)?;
            let connected = scan.connected();
            tried.push((r, scan.counts()));
            if connected {
                return Ok(RadiusSearch {
                    radius: Some(r),
                    tried,
                });
            }
        }
        Ok(RadiusSearch {
            radius: None,
            tried,
        })
    }

    fn check_region(&self, omega: &Region, r: u32) -> Result<()> {
        let max = omega
            .vertices
            .iter()
            .map(|&v| self.ball.length(v))
            .max()
            .ok_or(AnalysisError::EmptyRegion)?;
        self.check_guard("max region length", max, r)
    }

    /// Both `omega` and `B_N \ omega` induce connected subgraphs.
    pub fn is_simply_connected_region(&self, omega: &Region) -> Result<SimpleConnectivity> {
        self.check_region(omega, 0)?;
        let region_components = induced_components(self.ball, &self.adj, &omega.vertices).len();
        let complement: Vec<u32> = (0..self.ball.len() as u32)
            .filter(|&v| !omega.contains(v))
            .collect();
        let complement_components = induced_components(self.ball, &self.adj, &complement).len();
        Ok(SimpleConnectivity {
            region_components,
            complement_components,
            simply_connected: region_components == 1 && complement_components <= 1,
            horizon_limited: true,
        })
    }

    /// `omega^{+r}`: all vertices within distance `r` of `omega`.
    pub fn dilate(&self, omega: &Region, r: u32) -> Region {
        let mut dist: FxHashMap<u32, u32> = omega.vertices.iter().map(|&v| (v, 0)).collect();
        let mut frontier = omega.vertices.clone();
        for d in 1..=r {
            let mut next = Vec::new();
            for &v in &frontier {
                for u in self.adj.neighbors(v) {
                    if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(u) {
                        e.insert(d);
                        next.push(u);
                    }
                }
            }
            frontier = next;
        }
        Region::from_vertices(dist.into_keys().collect())
    }

    /// Components of the induced subgraph on `omega^{+r} \ omega`.
    pub fn shell_components(&self, omega: &Region, r: u32) -> Result<Vec<Vec<u32>>> {
        self.check_region(omega, r)?;
        let sc = self.is_simply_connected_region(omega)?;
        if !sc.simply_connected {
            return Err(AnalysisError::NotSimplyConnected {
                region_components: sc.region_components,
                complement_components: sc.complement_components,
            });
        }
        let shell: Vec<u32> = self
            .dilate(omega, r)
            .vertices
            .into_iter()
            .filter(|&v| !omega.contains(v))
            .collect();
        Ok(induced_components(self.ball, &self.adj, &shell))
    }

    /// Thick-sphere counts with a tail verdict on their limit.
    pub fn ends_profile(&self, r: u32, n_max: u32) -> Result<EndsProfile> {
        let scan = self.scan_connected_spheres(r, n_max)?;
        let verdict = TailVerdict::from_counts(&scan.counts());
        Ok(EndsProfile {
            ends: verdict.ends(),
            scan,
            verdict,
        })
    }

    /// Largest `n_max` allowed for thickness `r`.
    pub fn max_inner_radius(&self, r: u32) -> Option<u32> {
        self.ball.radius().checked_sub(self.guard.width(r).max(r))
    }
}
