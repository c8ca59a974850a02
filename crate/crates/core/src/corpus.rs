//! Tokenization and rank-frequency tables for real text.
//!
//! A token is a maximal run of Unicode alphanumeric characters, lowercased.
//! Everything else separates tokens. Invalid UTF-8 is replaced and counted.

use std::collections::HashMap;
use std::io::{self, BufRead};

use crate::error::{Error, Result};
use crate::simulate::{GrowthCurve, GrowthPoint};

/// Name of the tokenization rule, written into analysis outputs.
pub const TOKENIZER_RULE: &str = "lowercase-alphanumeric-runs";

/// Tokens with their counts, sorted by count descending then token
/// ascending. Position `i` (from 1) is the token's rank.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankFrequency {
    entries: Vec<(String, u64)>,
}

impl RankFrequency {
    pub fn from_counts<I: IntoIterator<Item = (String, u64)>>(counts: I) -> Result<Self> {
        let mut entries: Vec<(String, u64)> = counts.into_iter().collect();
        if entries.iter().any(|(_, c)| *c == 0) {
            return Err(Error::domain("rank-frequency counts must be positive"));
        }
        entries.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::domain("duplicate token in rank-frequency table"));
        }
        Ok(RankFrequency { entries })
    }

    pub fn entries(&self) -> &[(String, u64)] {
        &self.entries
    }

    /// Counts in rank order.
    pub fn counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|(_, c)| *c)
    }

    pub fn total(&self) -> u64 {
        self.counts().sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn push_tokens(text: &str, out: &mut Vec<String>) {
    let mut cur = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            cur.extend(ch.to_lowercase());
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
}

/// Tokenize an in-memory string.
pub fn tokenize_str(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    push_tokens(text, &mut out);
    out
}

/// Streaming tokenizer over a byte reader, one line at a time.
pub struct Tokenizer<R> {
    reader: R,
    line: Vec<u8>,
    pending: std::vec::IntoIter<String>,
    invalid_sequences: u64,
}

impl<R: BufRead> Tokenizer<R> {
    pub fn new(reader: R) -> Self {
        Tokenizer {
            reader,
            line: Vec::new(),
            pending: Vec::new().into_iter(),
            invalid_sequences: 0,
        }
    }

    /// Invalid UTF-8 sequences replaced so far.
    pub fn invalid_sequences(&self) -> u64 {
        self.invalid_sequences
    }

    fn refill(&mut self) -> io::Result<bool> {
        self.line.clear();
        if self.reader.read_until(b'\n', &mut self.line)? == 0 {
            return Ok(false);
        }
        let mut text = String::with_capacity(self.line.len());
        for chunk in self.line.utf8_chunks() {
            text.push_str(chunk.valid());
            if !chunk.invalid().is_empty() {
                self.invalid_sequences += 1;
                text.push(char::REPLACEMENT_CHARACTER);
            }
        }
        let mut toks = Vec::new();
        push_tokens(&text, &mut toks);
        self.pending = toks.into_iter();
        Ok(true)
    }
}

impl<R: BufRead> Iterator for Tokenizer<R> {
    type Item = io::Result<String>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(t) = self.pending.next() {
                return Some(Ok(t));
            }
            match self.refill() {
                Ok(true) => continue,
                Ok(false) => return None,
                Err(e) => return Some(Err(e)),
            }
        }
    }
}

/// Single-pass accumulator for a growth curve and token counts.
///
/// The curve is sampled at every power of two and at the final token.
#[derive(Debug, Default)]
pub struct StreamAnalyzer {
    counts: HashMap<String, u64>,
    points: Vec<GrowthPoint>,
    m: u64,
    next_checkpoint: u64,
}

impl StreamAnalyzer {
    pub fn new() -> Self {
        StreamAnalyzer {
            next_checkpoint: 1,
            ..Default::default()
        }
    }

    pub fn push(&mut self, token: &str) {
        match self.counts.get_mut(token) {
            Some(c) => *c += 1,
            None => {
                self.counts.insert(token.to_owned(), 1);
            }
        }
        self.m += 1;
        if self.m == self.next_checkpoint {
            self.points.push(GrowthPoint {
                m: self.m,
                d: self.counts.len() as u64,
            });
            self.next_checkpoint = self.next_checkpoint.saturating_mul(2);
        }
    }

    pub fn finish(mut self) -> (GrowthCurve, RankFrequency) {
        if self.m > 0 && self.points.last().map(|p| p.m) != Some(self.m) {
            self.points.push(GrowthPoint {
                m: self.m,
                d: self.counts.len() as u64,
            });
        }
        let curve = GrowthCurve::new(self.points).expect("streamed curve is consistent");
        let table = RankFrequency::from_counts(self.counts).expect("streamed counts are positive");
        (curve, table)
    }
}

/// Growth curve and rank-frequency table of a token sequence.
pub fn analyze_stream<I, S>(tokens: I) -> (GrowthCurve, RankFrequency)
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut a = StreamAnalyzer::new();
    for t in tokens {
        a.push(t.as_ref());
    }
    a.finish()
}

/// Result of analyzing raw text.
#[derive(Clone, Debug)]
pub struct CorpusAnalysis {
    pub curve: GrowthCurve,
    pub table: RankFrequency,
    pub invalid_utf8: u64,
}

/// Tokenize and analyze several readers as one concatenated stream.
pub fn analyze_readers<R: BufRead, I: IntoIterator<Item = R>>(
    readers: I,
) -> Result<CorpusAnalysis> {
    let mut a = StreamAnalyzer::new();
    let mut invalid = 0;
    for r in readers {
        let mut tok = Tokenizer::new(r);
        for t in tok.by_ref() {
            a.push(&t?);
        }
        invalid += tok.invalid_sequences();
    }
    let (curve, table) = a.finish();
    Ok(CorpusAnalysis {
        curve,
        table,
        invalid_utf8: invalid,
    })
}
