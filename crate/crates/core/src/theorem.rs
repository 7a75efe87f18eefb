//! Empirical check of the connected-spheres bound for finitely presented
//! one-ended groups.
//!
//! Two things are checked: every thick sphere of thickness
//! `r = floor(max|w|/2) + 1` is connected, and every relator loop spans at
//! most `floor(|w|/2)` word-length levels. The second is what rules out a
//! relator cell touching both `B_n` and the complement of `B_{n+r}`.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ball::{BallTable, OUTSIDE};
use crate::error::{AnalysisError, Result};
use crate::groups::{relator_holds, Element, EndsHint, LetterMap};
use crate::presentation::{theorem_radius, Presentation, Word};
use crate::topology::Explorer;

/// Level span (max minus min word length) of the loop traced by `w` from `g`.
pub fn relator_loop_span(ball: &BallTable, map: &LetterMap, w: &Word, g: &Element) -> Result<u32> {
    let model = ball.model();
    let gens = map.translate(model, w)?;
    let exits = || AnalysisError::LoopExitsBall {
        radius: ball.radius(),
    };
    let mut cur = g.clone();
    let start = ball.word_length(&cur).map_err(|_| exits())?;
    let (mut lo, mut hi) = (start, start);
    for i in gens {
        model.apply_in_place(&mut cur, i);
        let len = ball.word_length(&cur).map_err(|_| exits())?;
        lo = lo.min(len);
        hi = hi.max(len);
    }
    Ok(hi - lo)
}

/// How span base points are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpanSampling {
    /// Check every base point when there are at most this many.
    pub exhaustive_limit: usize,
    /// Otherwise draw this many base points.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SpanSampling {
    fn default() -> Self {
        SpanSampling {
            exhaustive_limit: 100_000,
            samples: 10_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelatorSpan {
    pub relator: String,
    pub length: usize,
    /// `floor(|w|/2)`.
    pub bound: u32,
    /// Base points lie in `B_{base_radius}` so the whole loop stays in the ball.
    pub base_radius: u32,
    pub base_points: usize,
    pub exhaustive: bool,
    pub max_span: u32,
    pub violations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub presentation: String,
    pub model: String,
    pub ball_radius: u32,
    pub guard: u32,
    pub r: u32,
    pub n_max: u32,
    pub counts: Vec<usize>,
    pub spans: Vec<RelatorSpan>,
    pub span_checks: usize,
    pub max_span: u32,
    pub span_bound: u32,
    pub seed: u64,
    pub flags: Vec<&'static str>,
    pub verdict: Verdict,
}

impl Explorer<'_> {
    /// Spans of `w`'s loop at every base point in `B_base_radius` (or a seeded
    /// sample of them).
    pub fn relator_spans(
        &self,
        map: &LetterMap,
        relator: &Word,
        base_radius: u32,
        sampling: &SpanSampling,
    ) -> Result<RelatorSpan> {
        let ball = self.ball();
        let gens = map.translate(ball.model(), relator)?;
        let half = (relator.len() / 2) as u32;
        if base_radius + half > ball.radius() {
            return Err(AnalysisError::LoopExitsBall {
                radius: ball.radius(),
            });
        }
        let pool = ball.ball_range(base_radius).len();
        let exhaustive = pool <= sampling.exhaustive_limit;
        let bases: Vec<u32> = if exhaustive {
            (0..pool as u32).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
            let mut picked: Vec<u32> = sample(&mut rng, pool, sampling.samples.min(pool))
                .into_iter()
                .map(|i| i as u32)
                .collect();
            picked.sort_unstable();
            picked
        };
        let adj = self.adjacency();
        let spans = bases
            .par_iter()
            .map(|&v| {
                let (mut lo, mut hi) = (ball.length(v), ball.length(v));
                let mut cur = v;
                for &i in &gens {
                    cur = adj.row(cur)[i];
                    if cur == OUTSIDE {
                        return Err(AnalysisError::LoopExitsBall {
                            radius: ball.radius(),
                        });
                    }
                    let len = ball.length(cur);
                    lo = lo.min(len);
                    hi = hi.max(len);
                }
                Ok(hi - lo)
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(RelatorSpan {
            relator: relator.display(map.names()).to_string(),
            length: relator.len(),
            bound: half,
            base_radius,
            base_points: bases.len(),
            exhaustive,
            max_span: spans.iter().copied().max().unwrap_or(0),
            violations: spans.iter().filter(|&&s| s > half).count(),
        })
    }

    /// Scans thick spheres at the relator-length radius over `0..=n_max` and
    /// checks relator spans.
    pub fn verify_theorem(
        &self,
        p: &Presentation,
        map: &LetterMap,
        n_max: u32,
        sampling: &SpanSampling,
    ) -> Result<TheoremReport> {
        let ball = self.ball();
        let model = ball.model();
        for (w, text) in p.relators.iter().zip(&p.relator_text) {
            if !relator_holds(model, map, w)? {
                return Err(AnalysisError::RelatorDoesNotHold {
                    relator: text.clone(),
                    model: model.spec().to_string(),
                });
            }
        }
        if model.ends_hint() != EndsHint::One {
            return Err(AnalysisError::NotOneEnded(model.spec().to_string()));
        }
        let r = theorem_radius(p)?;
        let scan = self.scan_connected_spheres(r, n_max)?;

        let spans = p
            .relators
            .iter()
            .map(|w| {
                let base = ball.radius() - (w.len() / 2) as u32;
                self.relator_spans(map, w, base, sampling)
            })
            .collect::<Result<Vec<_>>>()?;
        let span_bound = (p.max_relator_length().unwrap_or(0) / 2) as u32;
        let max_span = spans.iter().map(|s| s.max_span).max().unwrap_or(0);
        let violations: usize = spans.iter().map(|s| s.violations).sum();
        let verdict = if scan.connected() && violations == 0 && max_span <= span_bound {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        let mut flags: Vec<&'static str> = Vec::new();
        for row in &scan.rows {
            for f in &row.flags {
                if !flags.contains(f) {
                    flags.push(f);
                }
            }
        }
        Ok(TheoremReport {
            presentation: p.to_string(),
            model: model.spec().to_string(),
            ball_radius: ball.radius(),
            guard: self.guard().width(r),
            r,
            n_max,
            counts: scan.counts(),
            span_checks: spans.iter().map(|s| s.base_points).sum(),
            spans,
            max_span,
            span_bound,
            seed: sampling.seed,
            flags,
            verdict,
        })
    }
}
