//! The formula corpora the suites read: one formula per line, blank lines
//! and `#` comments skipped. A `#` followed by a digit is a set literal, not
//! a comment.

use std::path::Path;

use crate::error::{Error, Result};
use crate::logic::{parse, AnyFormula, Language};

/// A corpus line and where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub number: usize,
    pub text: String,
}

pub fn lines(src: &str) -> Vec<Line> {
    src.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let t = l.trim();
            let comment = t.starts_with('#') && !t[1..].starts_with(|c: char| c.is_ascii_digit());
            (!t.is_empty() && !comment).then(|| Line {
                number: i + 1,
                text: t.to_string(),
            })
        })
        .collect()
}

impl Line {
    pub fn parse(&self, lang: Language) -> Result<AnyFormula> {
        parse(lang, &self.text).map_err(|e| self.locate(e))
    }

    pub(crate) fn locate(&self, e: Error) -> Error {
        match e {
            Error::Syntax { pos, msg } => Error::Syntax {
                pos,
                msg: format!("corpus line {}: {msg}", self.number),
            },
            e => e,
        }
    }

    pub fn id(&self) -> String {
        format!("line-{}", self.number)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpeiBranch {
    /// `Φ(∅)` and every one-point step hold, and so does `Φ` below the cutoff.
    Holds,
    /// `Φ(∅)` or some step `Φ(x) → Φ(x ∪ {z})` fails.
    HypothesisFails,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpeiEntry {
    pub line: Line,
    pub expected: OpeiBranch,
    pub formula: String,
}

/// `holds | Φ` or `hypothesis-fails | Φ`, with `x` free in `Φ`.
pub fn opei_entries(lines: &[Line]) -> Result<Vec<OpeiEntry>> {
    lines
        .iter()
        .map(|l| {
            let bad = || {
                Error::syntax(
                    0,
                    format!(
                        "corpus line {}: expected `holds | ...` or `hypothesis-fails | ...`",
                        l.number
                    ),
                )
            };
            let (tag, phi) = l.text.split_once('|').ok_or_else(bad)?;
            let expected = match tag.trim() {
                "holds" => OpeiBranch::Holds,
                "hypothesis-fails" => OpeiBranch::HypothesisFails,
                _ => return Err(bad()),
            };
            Ok(OpeiEntry {
                line: l.clone(),
                expected,
                formula: phi.trim().to_string(),
            })
        })
        .collect()
}

/// All corpora, defaulting to the ones shipped with the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    /// Arithmetic formulas for the round trips.
    pub arith: Vec<Line>,
    /// Set formulas for the round trips.
    pub set: Vec<Line>,
    /// Bounded set formulas in `z`, instances of separation.
    pub separation: Vec<Line>,
    /// Predicates for one point extension induction.
    pub opei: Vec<Line>,
    /// Arithmetic laws checked under the cardinal reading.
    pub cardinal: Vec<Line>,
}

pub const ARITH: &str = include_str!("../../corpus/arith.txt");
pub const SET: &str = include_str!("../../corpus/set.txt");
pub const SEPARATION: &str = include_str!("../../corpus/separation.txt");
pub const OPEI: &str = include_str!("../../corpus/opei.txt");
pub const CARDINAL: &str = include_str!("../../corpus/cardinal.txt");

impl Default for Corpus {
    fn default() -> Self {
        Corpus {
            arith: lines(ARITH),
            set: lines(SET),
            separation: lines(SEPARATION),
            opei: lines(OPEI),
            cardinal: lines(CARDINAL),
        }
    }
}

impl Corpus {
    /// The default corpora with the one read by `suite` replaced by the
    /// file at `path`.
    pub fn with_file(suite: super::Suite, path: &Path) -> Result<Corpus> {
        use super::Suite::*;
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Unsupported(format!("cannot read {}: {e}", path.display())))?;
        let mut c = Corpus::default();
        let slot = match suite {
            Axioms => &mut c.separation,
            Opei => &mut c.opei,
            RoundtripAd => &mut c.set,
            RoundtripDa | RoundtripOa => &mut c.arith,
            Cardinal => &mut c.cardinal,
            Theorem6 | Controls | All => {
                return Err(Error::Unsupported(format!(
                    "suite `{suite}` does not read a corpus"
                )));
            }
        };
        *slot = lines(&text);
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_literals() {
        let ls = lines("# a comment\n\n  x in #3\n#12 = #12\n   # indented comment\n");
        let texts: Vec<_> = ls.iter().map(|l| (l.number, l.text.as_str())).collect();
        assert_eq!(texts, [(3, "x in #3"), (4, "#12 = #12")]);
    }

    #[test]
    fn shipped_corpora_parse() {
        let c = Corpus::default();
        for l in &c.arith {
            l.parse(Language::Arith).unwrap();
        }
        for l in c.set.iter().chain(&c.separation) {
            l.parse(Language::Set).unwrap();
        }
        for l in &c.cardinal {
            l.parse(Language::Arith).unwrap();
        }
        for e in opei_entries(&c.opei).unwrap() {
            parse(Language::Set, &e.formula).unwrap();
        }
        assert!(c.arith.len() >= 40 && c.set.len() >= 40);
        assert_eq!(c.separation.len(), 50);
    }

    #[test]
    fn separation_instances_are_bounded() {
        for l in &Corpus::default().separation {
            assert!(l.parse(Language::Set).unwrap().is_bounded(), "{}", l.text);
        }
    }

    #[test]
    fn malformed_opei_line() {
        assert!(opei_entries(&lines("maybe | x = x")).is_err());
        assert!(opei_entries(&lines("x = x")).is_err());
    }
}
