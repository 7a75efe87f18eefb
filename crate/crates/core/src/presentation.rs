//! Finite presentations `<S | R>`: parsing, free and cyclic reduction, and
//! the relator-length radius bound for connected spheres.

use std::fmt;

use serde::Serialize;

use crate::error::PresentationError;

/// One letter of a word: a generator index and whether it is inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A word over an indexed alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word::new(self.letters.iter().rev().map(|l| l.inv()).collect())
    }

    /// Free reduction, and cyclic reduction as well when `cyclic` is set.
    pub fn reduce(&self, cyclic: bool) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        if cyclic {
            // a freely reduced word only cancels at the ends, pairwise inward
            let mut lo = 0;
            let mut hi = out.len();
            while hi - lo >= 2 && out[lo].cancels(out[hi - 1]) {
                lo += 1;
                hi -= 1;
            }
            out = out[lo..hi].to_vec();
        }
        Word::new(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|p| !p[0].cancels(p[1]))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.letters.first(), self.letters.last()) {
                (Some(&a), Some(&b)) if self.letters.len() >= 2 => !a.cancels(b),
                _ => true,
            }
    }

    /// Renders the word using `names` for the generators, `e` for the empty word.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

/// Free reduction of `w`, additionally cyclic when `cyclic` is set.
pub fn reduce(w: &Word, cyclic: bool) -> Word {
    w.reduce(cyclic)
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.word.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let name = self
                .names
                .get(l.generator)
                .map(String::as_str)
                .unwrap_or("?");
            if l.inverse {
                write!(f, "{name}^-1")?;
            } else {
                write!(f, "{name}")?;
            }
        }
        Ok(())
    }
}

/// A finite presentation with cyclically reduced, nonempty relators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    /// Relator text as written in the source, before reduction.
    pub relator_text: Vec<String>,
}

impl Presentation {
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn relator_lengths(&self) -> Vec<usize> {
        self.relators.iter().map(Word::len).collect()
    }

    pub fn max_relator_length(&self) -> Option<usize> {
        self.relators.iter().map(Word::len).max()
    }

    /// Smallest `r` with `2r > max |w|`.
    pub fn theorem_radius(&self) -> Result<u32, PresentationError> {
        theorem_radius(self)
    }

    /// Parses a whitespace-separated word over this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<Word, PresentationError> {
        parse_word_with(text, |name| self.generator_index(name))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} |", self.generators.join(","))?;
        for (i, w) in self.relators.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{}", w.display(&self.generators))?;
        }
        write!(f, ">")
    }
}

/// Smallest integer `r` with `2r > max_{w in R} |w|`, i.e. `floor(max/2) + 1`.
pub fn theorem_radius(p: &Presentation) -> Result<u32, PresentationError> {
    let max = p.max_relator_length().ok_or(PresentationError::NoRelators)?;
    Ok((max / 2 + 1) as u32)
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && chars.all(is_name_char)
}

/// Parses a word of letters `g` or `g^-1` separated by whitespace. A lone `e`
/// (when `e` is not itself a generator) denotes the empty word.
pub fn parse_word_with<F>(text: &str, lookup: F) -> Result<Word, PresentationError>
where
    F: Fn(&str) -> Option<usize>,
{
    let mut letters = Vec::new();
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens == ["e"] && lookup("e").is_none() {
        return Ok(Word::default());
    }
    for tok in tokens {
        let (name, inverse) = match tok.split_once('^') {
            None => (tok, false),
            Some((name, "-1")) => (name, true),
            Some((_, exp)) => {
                return Err(PresentationError::Syntax(format!(
                    "unsupported exponent `^{exp}` in `{tok}`; only `^-1` is allowed"
                )))
            }
        };
        if !valid_name(name) {
            return Err(PresentationError::Syntax(format!("invalid letter `{tok}`")));
        }
        let generator =
            lookup(name).ok_or_else(|| PresentationError::UnknownGenerator(name.to_string()))?;
        letters.push(Letter { generator, inverse });
    }
    Ok(Word::new(letters))
}

/// Parses `<g1, g2, ... | w1, w2, ...>`. The relator list may be empty.
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let body = text.trim();
    let inner = body
        .strip_prefix('<')
        .and_then(|s| s.strip_suffix('>'))
        .ok_or_else(|| PresentationError::Syntax("presentation must be enclosed in `<` `>`".into()))?;
    let (gens_text, rels_text) = match inner.split_once('|') {
        Some((g, r)) => (g, r),
        None => (inner, ""),
    };
    if rels_text.contains('|') {
        return Err(PresentationError::Syntax("more than one `|`".into()));
    }

    let mut generators: Vec<String> = Vec::new();
    for raw in gens_text.split(',') {
        let name = raw.trim();
        if !valid_name(name) {
            return Err(PresentationError::Syntax(format!(
                "invalid generator name `{name}`"
            )));
        }
        if generators.iter().any(|g| g == name) {
            return Err(PresentationError::DuplicateGenerator(name.to_string()));
        }
        generators.push(name.to_string());
    }

    let mut relators = Vec::new();
    let mut relator_text = Vec::new();
    if !rels_text.trim().is_empty() {
        for (i, raw) in rels_text.split(',').enumerate() {
            let src = raw.trim();
            if src.is_empty() {
                return Err(PresentationError::Syntax(format!("relator {} is blank", i + 1)));
            }
            let word = parse_word_with(src, |n| generators.iter().position(|g| g == n))?;
            let reduced = word.reduce(true);
            if reduced.is_empty() {
                return Err(PresentationError::TrivialRelator(src.to_string()));
            }
            relators.push(reduced);
            relator_text.push(src.to_string());
        }
    }

    Ok(Presentation {
        generators,
        relators,
        relator_text,
    })
}
