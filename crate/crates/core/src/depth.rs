//! Dead ends, (usual) depth and retreat depth.
//!
//! The depth of `g` is its graph distance to `B_{|g|}^{comp,∞}`; the retreat
//! depth is the smallest `d >= 1` with `g ∈ B_{|g|-d}^{comp,∞}`, taking
//! `B_m = ∅` for `m < 0`. Both use the horizon approximation of the infinite
//! part. Dead-end status only looks at word lengths.

use std::collections::VecDeque;

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::error::{AnalysisError, Result};
use crate::groups::Element;
use crate::topology::Explorer;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthRecord {
    pub vertex: u32,
    pub length: u32,
    pub dead_end: bool,
    pub depth: u32,
    pub retreat_depth: u32,
    /// The depth search reached the outermost sphere before finishing.
    pub horizon_limited: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: u32,
    pub elements: usize,
    pub dead_end_count: usize,
    pub max_depth: u32,
    pub max_retreat_depth: u32,
    /// Smallest-key dead end, if any.
    pub dead_end_witness: Option<u32>,
    /// Smallest-key element of maximal depth.
    pub depth_witness: u32,
    /// Smallest-key element of maximal retreat depth.
    pub retreat_witness: u32,
    pub horizon_limited: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeadEndCensus {
    pub rows: Vec<CensusRow>,
}

impl DeadEndCensus {
    pub fn total_dead_ends(&self) -> usize {
        self.rows.iter().map(|r| r.dead_end_count).sum()
    }
}

impl Explorer<'_> {
    fn vertex_of(&self, g: &Element) -> Result<u32> {
        self.ball().lookup(g).ok_or(AnalysisError::NotInBall {
            radius: self.ball().radius(),
        })
    }

    fn check_depth_guard(&self, length: u32) -> Result<()> {
        self.check_guard("word length + 1", length + 1, 0)
    }

    /// No neighbour is longer than `v` (read from the ball alone).
    pub fn is_dead_end(&self, v: u32) -> bool {
        let len = self.ball().length(v);
        debug_assert!(len < self.ball().radius());
        !self
            .adjacency()
            .neighbors(v)
            .any(|u| self.ball().length(u) > len)
    }

    pub fn element_depth(&self, g: &Element) -> Result<u32> {
        let v = self.vertex_of(g)?;
        Ok(self.vertex_depth(v)?.0)
    }

    pub fn retreat_depth(&self, g: &Element) -> Result<u32> {
        let v = self.vertex_of(g)?;
        self.vertex_retreat_depth(v)
    }

    /// Distance to the infinite part of `B_{|v|}`'s complement, and whether
    /// the search touched `S_N`.
    pub fn vertex_depth(&self, v: u32) -> Result<(u32, bool)> {
        let ball = self.ball();
        let len = ball.length(v);
        self.check_depth_guard(len)?;
        let map = self.complement_components(len)?;
        if map.horizon_count() == 0 {
            return Err(AnalysisError::NoHorizonComponent {
                n: len,
                radius: ball.radius(),
            });
        }
        let adj = self.adjacency();
        if adj.neighbors(v).any(|u| map.is_horizon(u)) {
            return Ok((1, false));
        }
        let mut seen: FxHashSet<u32> = FxHashSet::default();
        seen.insert(v);
        let mut queue = VecDeque::from([(v, 0u32)]);
        let mut touched_horizon = false;
        while let Some((x, d)) = queue.pop_front() {
            for u in adj.neighbors(x) {
                if !seen.insert(u) {
                    continue;
                }
                if ball.length(u) == ball.radius() {
                    touched_horizon = true;
                }
                if map.is_horizon(u) {
                    return Ok((d + 1, touched_horizon));
                }
                queue.push_back((u, d + 1));
            }
        }
        // the ball is connected and the target is nonempty
        unreachable!("depth search exhausted the ball")
    }

    pub fn vertex_retreat_depth(&self, v: u32) -> Result<u32> {
        let len = self.ball().length(v);
        self.check_depth_guard(len)?;
        for d in 1..=len {
            if self.complement_components(len - d)?.is_horizon(v) {
                return Ok(d);
            }
        }
        Ok(len + 1)
    }

    pub fn depth_record(&self, v: u32) -> Result<DepthRecord> {
        let (depth, horizon_limited) = self.vertex_depth(v)?;
        Ok(DepthRecord {
            vertex: v,
            length: self.ball().length(v),
            dead_end: self.is_dead_end(v),
            depth,
            retreat_depth: self.vertex_retreat_depth(v)?,
            horizon_limited,
        })
    }

    /// Depth records for every element of sphere `n`.
    pub fn sphere_records(&self, n: u32) -> Result<Vec<DepthRecord>> {
        self.check_depth_guard(n)?;
        let range = self.ball().sphere_range(n);
        (range.start as u32..range.end as u32)
            .into_par_iter()
            .map(|v| self.depth_record(v))
            .collect()
    }

    /// Per-radius dead-end counts and extremal depths for `n = 0..=n_max`.
    pub fn dead_end_census(&self, n_max: u32) -> Result<DeadEndCensus> {
        self.check_depth_guard(n_max)?;
        (0..=n_max)
            .into_par_iter()
            .try_for_each(|n| self.complement_components(n).map(|_| ()))?;
        let ball = self.ball();
        let rows = (0..=n_max)
            .map(|n| {
                let records = self.sphere_records(n)?;
                let best = |f: &dyn Fn(&DepthRecord) -> u32| -> (u32, u32) {
                    let max = records.iter().map(f).max().unwrap_or(0);
                    let witness = records
                        .iter()
                        .filter(|r| f(r) == max)
                        .map(|r| r.vertex)
                        .min_by_key(|&v| ball.key(v))
                        .expect("spheres are nonempty");
                    (max, witness)
                };
                let (max_depth, depth_witness) = best(&|r| r.depth);
                let (max_retreat_depth, retreat_witness) = best(&|r| r.retreat_depth);
                Ok(CensusRow {
                    n,
                    elements: records.len(),
                    dead_end_count: records.iter().filter(|r| r.dead_end).count(),
                    max_depth,
                    max_retreat_depth,
                    dead_end_witness: records
                        .iter()
                        .filter(|r| r.dead_end)
                        .map(|r| r.vertex)
                        .min_by_key(|&v| ball.key(v)),
                    depth_witness,
                    retreat_witness,
                    horizon_limited: records.iter().any(|r| r.horizon_limited),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DeadEndCensus { rows })
    }
}
