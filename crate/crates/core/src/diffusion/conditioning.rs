//! Conditioning features: token-to-frame alignment and projected fusion.

use ndarray::{Array2, ArrayView2, Axis};

use crate::io::{FeatureDocument, Word};
use crate::{Error, Result, Scalar};

/// How token rows are mapped onto motion frames.
#[derive(Debug, Clone, Copy)]
pub enum TokenTiming<'a, T> {
    /// Frame `t` (1-based) takes token `argmin_i |t − (T/M)·i|` (1-based).
    Index,
    /// Frame `t` (0-based, at time `t/fps`) takes the token with the nearest timestamp.
    Timestamps { times: &'a [T], fps: T },
}

/// Token index (0-based) chosen for every frame. Ties go to the earlier token.
pub fn token_assignment<T: Scalar>(tokens: usize, frames: usize, timing: TokenTiming<'_, T>) -> Result<Vec<usize>> {
    if tokens == 0 {
        return Err(Error::InvalidArgument("token list is empty".into()));
    }
    match timing {
        TokenTiming::Index => Ok((1..=frames)
            .map(|t| {
                // |t − (T/M)·i| scaled by M stays in integers
                (1..=tokens)
                    .min_by_key(|&i| ((t * tokens) as i128 - (frames * i) as i128).abs())
                    .expect("tokens > 0")
                    - 1
            })
            .collect()),
        TokenTiming::Timestamps { times, fps } => {
            if times.len() != tokens {
                return Err(Error::InvalidArgument(format!(
                    "{} timestamps for {tokens} tokens",
                    times.len()
                )));
            }
            if !(fps > T::zero()) {
                return Err(Error::InvalidArgument("fps must be positive".into()));
            }
            Ok((0..frames)
                .map(|t| {
                    let time = T::from_count(t) / fps;
                    let mut best = 0;
                    for i in 1..tokens {
                        if (times[i] - time).abs() < (times[best] - time).abs() {
                            best = i;
                        }
                    }
                    best
                })
                .collect())
        }
    }
}

/// Nearest-neighbour alignment of `M×d` token embeddings onto `frames` rows.
pub fn align_token_features<T: Scalar>(
    tokens: ArrayView2<'_, T>,
    frames: usize,
    timing: TokenTiming<'_, T>,
) -> Result<Array2<T>> {
    let idx = token_assignment(tokens.nrows(), frames, timing)?;
    Ok(tokens.select(Axis(0), &idx))
}

fn is_marker(c: char) -> bool {
    c.is_whitespace() || c == '\u{0120}' || c == '\u{2581}'
}

/// Token times from word-level timing: each word's span is split evenly over
/// its characters, a token covers the characters it spells, and its time is
/// the midpoint of that coverage. Whitespace and sub-word space markers
/// (`Ġ`, `▁`) carry no duration.
pub fn token_timestamps<T: Scalar>(tokens: &[String], words: &[Word<T>]) -> Result<Vec<T>> {
    // (start, end) per character
    let mut chars: Vec<(T, T)> = Vec::new();
    for w in words {
        let n = w.text.chars().filter(|c| !is_marker(*c)).count();
        if n == 0 {
            continue;
        }
        let step = (w.end - w.start) / T::from_count(n);
        chars.extend((0..n).map(|i| (w.start + step * T::from_count(i), w.start + step * T::from_count(i + 1))));
    }
    let mut cursor = 0usize;
    let end_time = chars.last().map_or(T::zero(), |c| c.1);
    let mut out = Vec::with_capacity(tokens.len());
    for (k, tok) in tokens.iter().enumerate() {
        let n = tok.chars().filter(|c| !is_marker(*c)).count();
        if cursor + n > chars.len() {
            return Err(Error::InvalidArgument(format!(
                "token {k} ('{tok}') runs past the {} characters of the word list",
                chars.len()
            )));
        }
        let t = if n == 0 {
            chars.get(cursor).map_or(end_time, |c| c.0)
        } else {
            (chars[cursor].0 + chars[cursor + n - 1].1) / T::lit(2.0)
        };
        out.push(t);
        cursor += n;
    }
    Ok(out)
}

/// Frame-aligned feature streams.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditioningSet<T> {
    pub mel: Array2<T>,
    pub hubert: Array2<T>,
    pub llm: Array2<T>,
}

/// Learned linear maps from each stream to the shared conditioning width.
#[derive(Debug, Clone, PartialEq)]
pub struct Projections<T> {
    pub mel: Array2<T>,
    pub hubert: Array2<T>,
    pub llm: Array2<T>,
}

pub(crate) fn rows_to_array<T: Scalar>(name: &str, rows: &[Vec<T>]) -> Result<Array2<T>> {
    let width = rows.first().map_or(0, Vec::len);
    let flat: Vec<T> = rows.iter().flat_map(|r| r.iter().copied()).collect();
    Array2::from_shape_vec((rows.len(), width), flat)
        .map_err(|e| Error::Dimension { stream: name.into(), detail: e.to_string() })
}

impl<T: Scalar> ConditioningSet<T> {
    /// Aligns the token stream using, in order of preference, explicit
    /// timestamps, word-derived timestamps, or the index formula.
    pub fn from_features(doc: &FeatureDocument<T>) -> Result<Self> {
        doc.validate()?;
        let frames = doc.frame_count;
        let tokens = rows_to_array("llm", &doc.llm.embeddings)?;
        let derived;
        let timing = match (&doc.llm.timestamps, &doc.llm.tokens, &doc.llm.words) {
            (Some(ts), _, _) => TokenTiming::Timestamps { times: ts, fps: doc.fps },
            (None, Some(tok), Some(words)) => {
                derived = token_timestamps(tok, words)?;
                TokenTiming::Timestamps { times: &derived, fps: doc.fps }
            }
            _ => TokenTiming::Index,
        };
        Ok(Self {
            mel: rows_to_array("mel", &doc.mel)?,
            hubert: rows_to_array("hubert", &doc.hubert)?,
            llm: align_token_features(tokens.view(), frames, timing)?,
        })
    }

    pub fn frames(&self) -> usize {
        self.mel.nrows()
    }
}

/// `F = mel·W_mel + hubert·W_hubert + llm·W_llm`, one row per frame.
pub fn fuse_features<T: Scalar>(cond: &ConditioningSet<T>, proj: &Projections<T>) -> Result<Array2<T>> {
    let frames = cond.mel.nrows();
    let width = proj.mel.ncols();
    let streams = [("mel", &cond.mel, &proj.mel), ("hubert", &cond.hubert, &proj.hubert), ("llm", &cond.llm, &proj.llm)];
    for (name, feat, w) in streams {
        if feat.nrows() != frames {
            return Err(Error::Dimension {
                stream: name.into(),
                detail: format!("{} rows, expected {frames}", feat.nrows()),
            });
        }
        if feat.ncols() != w.nrows() {
            return Err(Error::Dimension {
                stream: name.into(),
                detail: format!("feature width {} but projection has {} rows", feat.ncols(), w.nrows()),
            });
        }
        if w.ncols() != width {
            return Err(Error::Dimension {
                stream: name.into(),
                detail: format!("projection width {} differs from {width}", w.ncols()),
            });
        }
    }
    let mut out = cond.mel.dot(&proj.mel);
    out += &cond.hubert.dot(&proj.hubert);
    out += &cond.llm.dot(&proj.llm);
    Ok(out)
}
