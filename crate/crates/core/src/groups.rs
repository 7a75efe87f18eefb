//! Concrete group arithmetic for the catalog of supported groups.
//!
//! Every model carries a symmetric generating set with an explicit inverse
//! pairing. Elements are kept in a normal form, and each normal form has a
//! deterministic byte encoding (the canonical key) used to index balls.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::ModelError;
use crate::presentation::{parse_word_with, Presentation, Word};

/// Number of ends the group is known to have, used as a hint by analyses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EndsHint {
    Zero,
    One,
    Two,
    Infinite,
    Unknown,
}

impl fmt::Display for EndsHint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EndsHint::Zero => "0",
            EndsHint::One => "1",
            EndsHint::Two => "2",
            EndsHint::Infinite => "inf",
            EndsHint::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Z^d with the standard basis.
    Lattice { dim: usize },
    /// Integer Heisenberg group; `with_z` adds the central generator.
    Heisenberg { with_z: bool },
    /// Lamps over Z (or Z^2) with values mod `modulus` (0 = unbounded Z).
    Wreath { base_dim: usize, modulus: i64 },
    /// Free group of the given rank.
    Free { rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub name: String,
    pub inverse: bool,
    /// Index of the inverse generator; equal to the own index for involutions.
    pub pair: usize,
}

impl Generator {
    pub fn label(&self) -> String {
        if self.inverse {
            format!("{}^-1", self.name)
        } else {
            self.name.clone()
        }
    }
}

/// Lamp position; the second coordinate is unused (zero) over Z.
pub type Pos = [i64; 2];

/// A group element in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Lattice(Vec<i64>),
    /// Upper unitriangular matrix with `a` = (1,2), `b` = (2,3), `c` = (1,3).
    Heisenberg { a: i64, b: i64, c: i64 },
    /// Finite-support lamp map (no zero values stored) and head position.
    Wreath { lamps: BTreeMap<Pos, i64>, head: Pos },
    /// Freely reduced word of generator indices.
    Free(Vec<u32>),
}

/// Deterministic byte encoding of a normal form.
pub type Key = Box<[u8]>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupModel {
    spec: String,
    kind: ModelKind,
    generators: Vec<Generator>,
    ends: EndsHint,
}

fn letter_names(count: usize) -> Vec<String> {
    (0..count)
        .map(|i| {
            if count <= 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("x{}", i + 1)
            }
        })
        .collect()
}

fn paired(names: &[&str]) -> Vec<Generator> {
    let mut out = Vec::with_capacity(names.len() * 2);
    for (i, n) in names.iter().enumerate() {
        out.push(Generator {
            name: n.to_string(),
            inverse: false,
            pair: 2 * i + 1,
        });
        out.push(Generator {
            name: n.to_string(),
            inverse: true,
            pair: 2 * i,
        });
    }
    out
}

fn involution(name: &str, index: usize) -> Generator {
    Generator {
        name: name.to_string(),
        inverse: false,
        pair: index,
    }
}

impl GroupModel {
    /// Builds a model from a spec string such as `zd:2`, `heisenberg:xyz`,
    /// `lamplighter2`, `zwrz`, `lamplighter2_z2` or `free:2`.
    pub fn from_spec(spec: &str) -> Result<Self, ModelError> {
        let spec = spec.trim();
        let (name, param) = match spec.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (spec, None),
        };
        let invalid = |reason: &str| ModelError::InvalidParameter {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let count = |p: Option<&str>| -> Result<usize, ModelError> {
            let p = p.ok_or_else(|| invalid("missing parameter"))?;
            let v: usize = p.parse().map_err(|_| invalid("not a positive integer"))?;
            if v < 1 {
                return Err(invalid("parameter must be at least 1"));
            }
            Ok(v)
        };
        let no_param = |m: GroupModel| -> Result<GroupModel, ModelError> {
            match param {
                None => Ok(m),
                Some(_) => Err(invalid("takes no parameter")),
            }
        };
        match name {
            "z" => no_param(Self::lattice(1)),
            "zd" => Ok(Self::lattice(count(param)?)),
            "heisenberg" => match param {
                Some("xy") => Ok(Self::heisenberg(false)),
                Some("xyz") | None => Ok(Self::heisenberg(true)),
                Some(_) => Err(invalid("generating set must be `xy` or `xyz`")),
            },
            "lamplighter2" => no_param(Self::lamplighter()),
            "zwrz" => no_param(Self::int_wreath_int()),
            "lamplighter2_z2" => no_param(Self::planar_lamplighter()),
            "free" => Ok(Self::free(count(param)?)),
            _ => Err(ModelError::UnknownSpec(spec.to_string())),
        }
    }

    /// Z^d with generators `a, b, ...` and their inverses.
    pub fn lattice(dim: usize) -> Self {
        assert!(dim >= 1);
        let names = letter_names(dim);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        GroupModel {
            spec: if dim == 1 { "z".into() } else { format!("zd:{dim}") },
            kind: ModelKind::Lattice { dim },
            generators: paired(&refs),
            ends: if dim == 1 { EndsHint::Two } else { EndsHint::One },
        }
    }

    pub fn heisenberg(with_z: bool) -> Self {
        let names: &[&str] = if with_z { &["x", "y", "z"] } else { &["x", "y"] };
        GroupModel {
            spec: format!("heisenberg:{}", if with_z { "xyz" } else { "xy" }),
            kind: ModelKind::Heisenberg { with_z },
            generators: paired(names),
            ends: EndsHint::One,
        }
    }

    /// Z_2 wr Z with generators `a` (involution), `t`, `t^-1`.
    pub fn lamplighter() -> Self {
        let mut generators = vec![involution("a", 0)];
        generators.extend(paired(&["t"]).into_iter().map(|mut g| {
            g.pair += 1;
            g
        }));
        GroupModel {
            spec: "lamplighter2".into(),
            kind: ModelKind::Wreath {
                base_dim: 1,
                modulus: 2,
            },
            generators,
            ends: EndsHint::One,
        }
    }

    /// Z wr Z with generators `a^±1`, `t^±1`.
    pub fn int_wreath_int() -> Self {
        GroupModel {
            spec: "zwrz".into(),
            kind: ModelKind::Wreath {
                base_dim: 1,
                modulus: 0,
            },
            generators: paired(&["a", "t"]),
            ends: EndsHint::One,
        }
    }

    /// Z_2 wr Z^2 with generators `a` (involution), `t1^±1`, `t2^±1`.
    pub fn planar_lamplighter() -> Self {
        let mut generators = vec![involution("a", 0)];
        generators.extend(paired(&["t1", "t2"]).into_iter().map(|mut g| {
            g.pair += 1;
            g
        }));
        GroupModel {
            spec: "lamplighter2_z2".into(),
            kind: ModelKind::Wreath {
                base_dim: 2,
                modulus: 2,
            },
            generators,
            ends: EndsHint::One,
        }
    }

    pub fn free(rank: usize) -> Self {
        assert!(rank >= 1);
        let names = letter_names(rank);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        GroupModel {
            spec: format!("free:{rank}"),
            kind: ModelKind::Free { rank },
            generators: paired(&refs),
            ends: if rank == 1 {
                EndsHint::Two
            } else {
                EndsHint::Infinite
            },
        }
    }

    /// Canonical spec string; `from_spec(m.spec())` rebuilds the same model.
    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn pair(&self, i: usize) -> usize {
        self.generators[i].pair
    }

    pub fn ends_hint(&self) -> EndsHint {
        self.ends
    }

    pub fn identity(&self) -> Element {
        match self.kind {
            ModelKind::Lattice { dim } => Element::Lattice(vec![0; dim]),
            ModelKind::Heisenberg { .. } => Element::Heisenberg { a: 0, b: 0, c: 0 },
            ModelKind::Wreath { .. } => Element::Wreath {
                lamps: BTreeMap::new(),
                head: [0, 0],
            },
            ModelKind::Free { .. } => Element::Free(Vec::new()),
        }
    }

    /// Right multiplication `g * s_i`.
    pub fn apply_generator(&self, g: &Element, i: usize) -> Element {
        let mut out = g.clone();
        self.apply_in_place(&mut out, i);
        out
    }

    pub fn apply_in_place(&self, g: &mut Element, i: usize) {
        debug_assert!(i < self.generators.len());
        let sign = if self.generators[i].inverse { -1 } else { 1 };
        match (self.kind, g) {
            (ModelKind::Lattice { .. }, Element::Lattice(v)) => v[i / 2] += sign,
            (ModelKind::Heisenberg { .. }, Element::Heisenberg { a, b, c }) => match i / 2 {
                0 => *a += sign,
                1 => {
                    *b += sign;
                    *c += sign * *a;
                }
                _ => *c += sign,
            },
            (ModelKind::Wreath { modulus, .. }, Element::Wreath { lamps, head }) => {
                if modulus == 2 {
                    // generator 0 toggles the lamp, then t1^±, t2^±
                    if i == 0 {
                        toggle(lamps, *head, 1, 2);
                    } else {
                        head[(i - 1) / 2] += sign;
                    }
                } else if i / 2 == 0 {
                    toggle(lamps, *head, sign, modulus);
                } else {
                    head[0] += sign;
                }
            }
            (ModelKind::Free { .. }, Element::Free(w)) => {
                let pair = self.generators[i].pair as u32;
                if w.last() == Some(&pair) {
                    w.pop();
                } else {
                    w.push(i as u32);
                }
            }
            (kind, g) => panic!("element {g:?} does not belong to model {kind:?}"),
        }
    }

    pub fn invert(&self, g: &Element) -> Element {
        match g {
            Element::Lattice(v) => Element::Lattice(v.iter().map(|x| -x).collect()),
            Element::Heisenberg { a, b, c } => Element::Heisenberg {
                a: -a,
                b: -b,
                c: a * b - c,
            },
            Element::Wreath { lamps, head } => {
                let modulus = match self.kind {
                    ModelKind::Wreath { modulus, .. } => modulus,
                    _ => unreachable!(),
                };
                let lamps = lamps
                    .iter()
                    .map(|(p, v)| {
                        let v = if modulus == 0 { -v } else { (modulus - v) % modulus };
                        ([p[0] - head[0], p[1] - head[1]], v)
                    })
                    .collect();
                Element::Wreath {
                    lamps,
                    head: [-head[0], -head[1]],
                }
            }
            Element::Free(w) => {
                Element::Free(w.iter().rev().map(|&i| self.pair(i as usize) as u32).collect())
            }
        }
    }

    /// Applies the generator indices in order, starting from `start`.
    pub fn trace<I: IntoIterator<Item = usize>>(&self, start: &Element, gens: I) -> Element {
        let mut g = start.clone();
        for i in gens {
            self.apply_in_place(&mut g, i);
        }
        g
    }

    /// `g * h`, computed by tracing a word for `h` from `g`.
    pub fn multiply(&self, g: &Element, h: &Element) -> Element {
        self.trace(g, self.word_for(h))
    }

    /// A (not necessarily geodesic) word in generator indices evaluating to `g`.
    pub fn word_for(&self, g: &Element) -> Vec<usize> {
        let pow = |out: &mut Vec<usize>, base: usize, n: i64| {
            let idx = if n >= 0 { base } else { base + 1 };
            out.extend(std::iter::repeat_n(idx, n.unsigned_abs() as usize));
        };
        let mut out = Vec::new();
        match (self.kind, g) {
            (ModelKind::Lattice { .. }, Element::Lattice(v)) => {
                for (axis, &x) in v.iter().enumerate() {
                    pow(&mut out, 2 * axis, x);
                }
            }
            (ModelKind::Heisenberg { with_z }, Element::Heisenberg { a, b, c }) => {
                // y^b x^a = (a, b, 0), leaving the centre c
                pow(&mut out, 2, *b);
                pow(&mut out, 0, *a);
                let rest = *c;
                if with_z {
                    pow(&mut out, 4, rest);
                } else {
                    // [x, y] = x y x^-1 y^-1 is the central generator
                    let commutator: &[usize] = if rest >= 0 { &[0, 2, 1, 3] } else { &[2, 0, 3, 1] };
                    for _ in 0..rest.unsigned_abs() {
                        out.extend_from_slice(commutator);
                    }
                }
            }
            (ModelKind::Wreath { modulus, base_dim }, Element::Wreath { lamps, head }) => {
                let mut at = [0i64, 0];
                let mv = |out: &mut Vec<usize>, at: &mut Pos, to: Pos| {
                    for axis in 0..base_dim {
                        let base = if modulus == 2 { 1 + 2 * axis } else { 2 };
                        pow(out, base, to[axis] - at[axis]);
                    }
                    *at = to;
                };
                for (p, &v) in lamps {
                    mv(&mut out, &mut at, *p);
                    if modulus == 2 {
                        out.push(0);
                    } else {
                        pow(&mut out, 0, v);
                    }
                }
                mv(&mut out, &mut at, *head);
            }
            (ModelKind::Free { .. }, Element::Free(w)) => out.extend(w.iter().map(|&i| i as usize)),
            (kind, g) => panic!("element {g:?} does not belong to model {kind:?}"),
        }
        out
    }

    pub fn key(&self, g: &Element) -> Key {
        let mut buf = Vec::with_capacity(16);
        self.encode_key(g, &mut buf);
        buf.into_boxed_slice()
    }

    /// Writes the canonical key of `g` into `buf` (cleared first).
    pub fn encode_key(&self, g: &Element, buf: &mut Vec<u8>) {
        buf.clear();
        match g {
            Element::Lattice(v) => {
                buf.push(0);
                v.iter().for_each(|&x| put_varint(buf, x));
            }
            Element::Heisenberg { a, b, c } => {
                buf.push(1);
                [*a, *b, *c].iter().for_each(|&x| put_varint(buf, x));
            }
            Element::Wreath { lamps, head } => {
                let (dim, modulus) = match self.kind {
                    ModelKind::Wreath { base_dim, modulus } => (base_dim, modulus),
                    _ => unreachable!(),
                };
                buf.push(2);
                head[..dim].iter().for_each(|&x| put_varint(buf, x));
                put_varint(buf, lamps.len() as i64);
                for (p, &v) in lamps {
                    p[..dim].iter().for_each(|&x| put_varint(buf, x));
                    if modulus != 2 {
                        put_varint(buf, v);
                    }
                }
            }
            Element::Free(w) => {
                buf.push(3);
                w.iter().for_each(|&i| put_varint(buf, i as i64));
            }
        }
    }

    /// Inverse of [`GroupModel::key`].
    pub fn decode_key(&self, key: &[u8]) -> Result<Element, ModelError> {
        let bad = || ModelError::MalformedKey(self.spec.clone());
        let (&tag, mut rest) = key.split_first().ok_or_else(bad)?;
        let mut next = || get_varint(&mut rest).ok_or_else(bad);
        let g = match (self.kind, tag) {
            (ModelKind::Lattice { dim }, 0) => {
                Element::Lattice((0..dim).map(|_| next()).collect::<Result<_, _>>()?)
            }
            (ModelKind::Heisenberg { .. }, 1) => Element::Heisenberg {
                a: next()?,
                b: next()?,
                c: next()?,
            },
            (ModelKind::Wreath { base_dim, modulus }, 2) => {
                let mut head = [0i64; 2];
                for h in head.iter_mut().take(base_dim) {
                    *h = next()?;
                }
                let count = next()?;
                let mut lamps = BTreeMap::new();
                for _ in 0..count {
                    let mut p = [0i64; 2];
                    for c in p.iter_mut().take(base_dim) {
                        *c = next()?;
                    }
                    let v = if modulus == 2 { 1 } else { next()? };
                    if v == 0 {
                        return Err(bad());
                    }
                    lamps.insert(p, v);
                }
                Element::Wreath { lamps, head }
            }
            (ModelKind::Free { .. }, 3) => {
                let mut w = Vec::new();
                while !rest.is_empty() {
                    let i = get_varint(&mut rest).ok_or_else(bad)?;
                    if i < 0 || i as usize >= self.generators.len() {
                        return Err(bad());
                    }
                    if w.last().map(|&l| self.pair(l as usize)) == Some(i as usize) {
                        return Err(bad());
                    }
                    w.push(i as u32);
                }
                Element::Free(w)
            }
            _ => return Err(bad()),
        };
        if !rest.is_empty() || self.key(&g)[..] != *key {
            return Err(bad());
        }
        Ok(g)
    }

    /// Index of the non-inverted generator named `name`.
    pub fn generator_by_name(&self, name: &str) -> Option<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name && !g.inverse)
    }

    /// Parses a word in this model's generator names into generator indices.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>, ModelError> {
        let word = parse_word_with(text, |n| self.generator_by_name(n))
            .map_err(|e| ModelError::UnmappedLetter(e.to_string()))?;
        Ok(word
            .letters
            .iter()
            .map(|l| {
                if l.inverse {
                    self.pair(l.generator)
                } else {
                    l.generator
                }
            })
            .collect())
    }

    pub fn display<'a>(&'a self, g: &'a Element) -> ElementDisplay<'a> {
        ElementDisplay { model: self, g }
    }
}

fn toggle(lamps: &mut BTreeMap<Pos, i64>, at: Pos, delta: i64, modulus: i64) {
    let v = lamps.entry(at).or_insert(0);
    *v += delta;
    if modulus != 0 {
        *v = v.rem_euclid(modulus);
    }
    if *v == 0 {
        lamps.remove(&at);
    }
}

fn put_varint(buf: &mut Vec<u8>, x: i64) {
    let mut z = ((x << 1) ^ (x >> 63)) as u64;
    loop {
        let byte = (z & 0x7f) as u8;
        z >>= 7;
        if z == 0 {
            buf.push(byte);
            return;
        }
        buf.push(byte | 0x80);
    }
}

fn get_varint(buf: &mut &[u8]) -> Option<i64> {
    let mut z = 0u64;
    for shift in (0..64).step_by(7) {
        let (&byte, rest) = buf.split_first()?;
        *buf = rest;
        z |= u64::from(byte & 0x7f) << shift;
        if byte & 0x80 == 0 {
            return Some(((z >> 1) as i64) ^ -((z & 1) as i64));
        }
    }
    None
}

pub struct ElementDisplay<'a> {
    model: &'a GroupModel,
    g: &'a Element,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.g {
            Element::Lattice(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            Element::Heisenberg { a, b, c } => write!(f, "[a={a},b={b},c={c}]"),
            Element::Wreath { lamps, head } => {
                let dim = match self.model.kind {
                    ModelKind::Wreath { base_dim, .. } => base_dim,
                    _ => 1,
                };
                let pos = |p: &Pos| {
                    if dim == 1 {
                        p[0].to_string()
                    } else {
                        format!("({},{})", p[0], p[1])
                    }
                };
                let parts: Vec<String> = lamps
                    .iter()
                    .map(|(p, v)| {
                        if matches!(self.model.kind, ModelKind::Wreath { modulus: 2, .. }) {
                            pos(p)
                        } else {
                            format!("{}:{v}", pos(p))
                        }
                    })
                    .collect();
                write!(f, "lamps{{{}}}@{}", parts.join(","), pos(head))
            }
            Element::Free(w) => {
                if w.is_empty() {
                    return write!(f, "e");
                }
                let parts: Vec<String> = w
                    .iter()
                    .map(|&i| self.model.generators[i as usize].label())
                    .collect();
                write!(f, "{}", parts.join(" "))
            }
        }
    }
}

/// Maps presentation generators onto model generators (non-inverted indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterMap {
    targets: Vec<usize>,
    names: Vec<String>,
}

impl LetterMap {
    /// Matches presentation generator names to model generator names.
    pub fn by_name(model: &GroupModel, p: &Presentation) -> Result<Self, ModelError> {
        let targets = p
            .generators
            .iter()
            .map(|n| {
                model
                    .generator_by_name(n)
                    .ok_or_else(|| ModelError::UnmappedLetter(n.clone()))
            })
            .collect::<Result<_, _>>()?;
        Ok(LetterMap {
            targets,
            names: p.generators.clone(),
        })
    }

    /// Explicit `(presentation name, model generator index)` pairs.
    pub fn explicit(p: &Presentation, pairs: &[(&str, usize)]) -> Result<Self, ModelError> {
        let targets = p
            .generators
            .iter()
            .map(|n| {
                pairs
                    .iter()
                    .find(|(name, _)| name == n)
                    .map(|&(_, i)| i)
                    .ok_or_else(|| ModelError::UnmappedLetter(n.clone()))
            })
            .collect::<Result<_, _>>()?;
        Ok(LetterMap {
            targets,
            names: p.generators.clone(),
        })
    }

    /// Model generator indices spelling `w`.
    pub fn translate(&self, model: &GroupModel, w: &Word) -> Result<Vec<usize>, ModelError> {
        w.letters
            .iter()
            .map(|l| {
                let base = *self
                    .targets
                    .get(l.generator)
                    .ok_or_else(|| ModelError::UnmappedLetter(format!("#{}", l.generator)))?;
                Ok(if l.inverse { model.pair(base) } else { base })
            })
            .collect()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// True iff tracing `w` from the identity returns to the identity.
pub fn relator_holds(model: &GroupModel, map: &LetterMap, w: &Word) -> Result<bool, ModelError> {
    let gens = map.translate(model, w)?;
    let e = model.identity();
    Ok(model.trace(&e, gens) == e)
}
