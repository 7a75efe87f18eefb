//! Breadth-first construction of the ball `B_N` in a Cayley graph.
//!
//! Vertices are numbered by `(word length, canonical key)`, so sphere `n` is
//! a contiguous index range. Edges are not stored; they are recomputed from
//! the generator action, or collected into a transient [`Adjacency`] index
//! by analyses that sweep the ball repeatedly.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::ops::Range;
use std::path::Path;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{AnalysisError, Result};
use crate::groups::{Element, GroupModel, Key};

pub const DEFAULT_MAX_VERTICES: usize = 50_000_000;

const CACHE_MAGIC: &[u8; 8] = b"SPSCBALL";
pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Sentinel in adjacency rows for a neighbour outside the ball.
pub const OUTSIDE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct BallTable {
    model: GroupModel,
    radius: u32,
    elements: Vec<Element>,
    keys: Vec<Key>,
    /// `sphere_starts[n]..sphere_starts[n + 1]` is sphere `n`.
    sphere_starts: Vec<usize>,
    index: FxHashMap<Key, u32>,
}

impl PartialEq for BallTable {
    fn eq(&self, other: &Self) -> bool {
        self.model == other.model
            && self.radius == other.radius
            && self.keys == other.keys
            && self.sphere_starts == other.sphere_starts
    }
}

/// Builds `B_radius` with the default vertex cap.
pub fn build_ball(model: &GroupModel, radius: u32) -> Result<BallTable> {
    BallTable::build(model, radius, DEFAULT_MAX_VERTICES)
}

impl BallTable {
    /// Level-synchronous BFS from the identity. Fails once more than
    /// `max_vertices` vertices would be stored.
    pub fn build(model: &GroupModel, radius: u32, max_vertices: usize) -> Result<Self> {
        let e = model.identity();
        let mut table = BallTable {
            model: model.clone(),
            radius: 0,
            keys: vec![model.key(&e)],
            elements: vec![e],
            sphere_starts: vec![0, 1],
            index: FxHashMap::default(),
        };
        table.index.insert(table.keys[0].clone(), 0);
        if max_vertices < 1 {
            return Err(AnalysisError::BudgetExceeded {
                cap: max_vertices,
                radius: 0,
                last_complete: 0,
            });
        }

        let gens = model.generator_count();
        for level in 1..=radius {
            let frontier = table.sphere_range(level - 1);
            let index = &table.index;
            let mut found: Vec<(Key, Element)> = table.elements[frontier]
                .par_iter()
                .flat_map_iter(|g| {
                    let mut buf = Vec::new();
                    (0..gens).filter_map(move |i| {
                        let h = model.apply_generator(g, i);
                        model.encode_key(&h, &mut buf);
                        if index.contains_key(&buf[..]) {
                            None
                        } else {
                            Some((buf.as_slice().into(), h))
                        }
                    })
                })
                .collect();
            found.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
            found.dedup_by(|a, b| a.0 == b.0);

            if table.keys.len() + found.len() > max_vertices {
                return Err(AnalysisError::BudgetExceeded {
                    cap: max_vertices,
                    radius: level,
                    last_complete: level - 1,
                });
            }
            table.push_sphere(found);
        }
        Ok(table)
    }

    fn push_sphere(&mut self, sphere: Vec<(Key, Element)>) {
        for (key, g) in sphere {
            self.index.insert(key.clone(), self.keys.len() as u32);
            self.keys.push(key);
            self.elements.push(g);
        }
        self.sphere_starts.push(self.keys.len());
        self.radius = (self.sphere_starts.len() - 2) as u32;
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn element(&self, v: u32) -> &Element {
        &self.elements[v as usize]
    }

    pub fn key(&self, v: u32) -> &[u8] {
        &self.keys[v as usize]
    }

    pub fn length(&self, v: u32) -> u32 {
        // sphere_starts is sorted; find the sphere containing v
        (self.sphere_starts.partition_point(|&s| s <= v as usize) - 1) as u32
    }

    pub fn lookup(&self, g: &Element) -> Option<u32> {
        self.index.get(&self.model.key(g)[..]).copied()
    }

    pub fn lookup_key(&self, key: &[u8]) -> Option<u32> {
        self.index.get(key).copied()
    }

    /// Exact word length of `g`.
    pub fn word_length(&self, g: &Element) -> Result<u32> {
        self.lookup(g)
            .map(|v| self.length(v))
            .ok_or(AnalysisError::NotInBall {
                radius: self.radius,
            })
    }

    pub fn sphere_size(&self, n: u32) -> Result<usize> {
        self.check_radius(n)?;
        Ok(self.sphere_range(n).len())
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.sphere_starts.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Vertex indices of sphere `n`; empty beyond the radius.
    pub fn sphere_range(&self, n: u32) -> Range<usize> {
        let n = n as usize;
        if n + 1 >= self.sphere_starts.len() {
            let end = self.len();
            return end..end;
        }
        self.sphere_starts[n]..self.sphere_starts[n + 1]
    }

    /// Vertex indices of `B_n` (clamped to the ball).
    pub fn ball_range(&self, n: u32) -> Range<usize> {
        let n = (n as usize).min(self.sphere_starts.len() - 2);
        0..self.sphere_starts[n + 1]
    }

    pub(crate) fn check_radius(&self, n: u32) -> Result<()> {
        if n > self.radius {
            return Err(AnalysisError::OutOfRange {
                n,
                max: self.radius,
            });
        }
        Ok(())
    }

    /// Neighbour of `v` along generator `i`, if it lies in the ball.
    pub fn neighbor(&self, v: u32, i: usize) -> Option<u32> {
        let h = self.model.apply_generator(self.element(v), i);
        self.lookup(&h)
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = Option<u32>> + '_ {
        (0..self.model.generator_count()).map(move |i| self.neighbor(v, i))
    }

    /// A geodesic word (generator indices) from the identity to `v`.
    pub fn geodesic_word(&self, v: u32) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length(v) as usize);
        let mut cur = v;
        while cur != 0 {
            let len = self.length(cur);
            let (i, prev) = (0..self.model.generator_count())
                .find_map(|i| {
                    self.neighbor(cur, i)
                        .filter(|&u| self.length(u) + 1 == len)
                        .map(|u| (i, u))
                })
                .expect("every non-identity vertex has a shorter neighbour");
            // we stepped cur -> prev with generator i; the word reads prev -> cur
            word.push(self.model.pair(i));
            cur = prev;
        }
        word.reverse();
        word
    }

    /// The sub-ball `B_m` as its own table.
    pub fn truncate(&self, m: u32) -> BallTable {
        let m = m.min(self.radius);
        let end = self.sphere_starts[m as usize + 1];
        BallTable {
            model: self.model.clone(),
            radius: m,
            elements: self.elements[..end].to_vec(),
            keys: self.keys[..end].to_vec(),
            sphere_starts: self.sphere_starts[..m as usize + 2].to_vec(),
            index: self
                .index
                .iter()
                .filter(|(_, &v)| (v as usize) < end)
                .map(|(k, &v)| (k.clone(), v))
                .collect(),
        }
    }

    /// Writes the versioned binary cache: header, then `(key, length)` records
    /// sorted by key.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        self.write_cache_to(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn write_cache_to<W: Write>(&self, out: &mut W) -> Result<()> {
        out.write_all(CACHE_MAGIC)?;
        out.write_all(&CACHE_FORMAT_VERSION.to_le_bytes())?;
        let spec = self.model.spec().as_bytes();
        out.write_all(&(spec.len() as u32).to_le_bytes())?;
        out.write_all(spec)?;
        out.write_all(&self.radius.to_le_bytes())?;
        out.write_all(&(self.len() as u64).to_le_bytes())?;

        let mut order: Vec<u32> = (0..self.len() as u32).collect();
        order.par_sort_unstable_by(|&a, &b| self.key(a).cmp(self.key(b)));
        for v in order {
            let key = self.key(v);
            out.write_all(&(key.len() as u32).to_le_bytes())?;
            out.write_all(key)?;
            out.write_all(&self.length(v).to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<Self> {
        Self::read_cache_from(&mut BufReader::new(File::open(path)?))
    }

    pub fn read_cache_from<R: Read>(input: &mut R) -> Result<Self> {
        let bad = |msg: &str| AnalysisError::Cache(msg.to_string());
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(bad("not a ball cache file"));
        }
        let version = read_u32(input)?;
        if version != CACHE_FORMAT_VERSION {
            return Err(AnalysisError::Cache(format!(
                "unsupported format version {version}"
            )));
        }
        let spec_len = read_u32(input)? as usize;
        let mut spec = vec![0u8; spec_len];
        input.read_exact(&mut spec)?;
        let spec = String::from_utf8(spec).map_err(|_| bad("model spec is not UTF-8"))?;
        let model = GroupModel::from_spec(&spec)?;
        let radius = read_u32(input)?;
        let mut count_bytes = [0u8; 8];
        input.read_exact(&mut count_bytes)?;
        let count = u64::from_le_bytes(count_bytes) as usize;

        let mut spheres: Vec<Vec<(Key, Element)>> = vec![Vec::new(); radius as usize + 1];
        let mut prev: Option<Key> = None;
        for _ in 0..count {
            let klen = read_u32(input)? as usize;
            let mut key = vec![0u8; klen];
            input.read_exact(&mut key)?;
            let len = read_u32(input)?;
            let key: Key = key.into_boxed_slice();
            if prev.as_ref().is_some_and(|p| *p >= key) {
                return Err(bad("records are not strictly sorted by key"));
            }
            let g = model.decode_key(&key)?;
            let sphere = spheres
                .get_mut(len as usize)
                .ok_or_else(|| bad("record length exceeds the radius"))?;
            sphere.push((key.clone(), g));
            prev = Some(key);
        }
        let mut trailing = [0u8; 1];
        if input.read(&mut trailing)? != 0 {
            return Err(bad("trailing bytes after the last record"));
        }
        if spheres[0].len() != 1 || spheres[0][0].1 != model.identity() {
            return Err(bad("sphere 0 must be exactly the identity"));
        }

        let mut table = BallTable {
            model,
            radius: 0,
            elements: Vec::with_capacity(count),
            keys: Vec::with_capacity(count),
            sphere_starts: vec![0],
            index: FxHashMap::default(),
        };
        for sphere in spheres {
            // records were key-sorted, so each sphere already is
            table.push_sphere(sphere);
        }
        Ok(table)
    }
}

fn read_u32<R: Read>(input: &mut R) -> std::io::Result<u32> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

/// Neighbour table for every ball vertex: row `v` has one entry per
/// generator, [`OUTSIDE`] where the neighbour leaves the ball.
#[derive(Clone, Debug)]
pub struct Adjacency {
    degree: usize,
    table: Vec<u32>,
}

impl Adjacency {
    pub fn build(ball: &BallTable) -> Self {
        let degree = ball.model().generator_count();
        let rows: Vec<Vec<u32>> = (0..ball.len() as u32)
            .into_par_iter()
            .map_init(Vec::new, |buf, v| {
                let g = ball.element(v);
                (0..degree)
                    .map(|i| {
                        let h = ball.model().apply_generator(g, i);
                        ball.model().encode_key(&h, buf);
                        ball.lookup_key(buf).unwrap_or(OUTSIDE)
                    })
                    .collect()
            })
            .collect();
        Adjacency {
            degree,
            table: rows.concat(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn row(&self, v: u32) -> &[u32] {
        let start = v as usize * self.degree;
        &self.table[start..start + self.degree]
    }

    /// Neighbours of `v` inside the ball.
    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.row(v).iter().copied().filter(|&u| u != OUTSIDE)
    }
}
