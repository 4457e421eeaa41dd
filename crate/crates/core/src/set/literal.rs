use std::fmt;

use num_bigint::BigUint;

use super::{decode, HfSet};
use crate::error::{Error, Result};

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            fmt::Display::fmt(m, f)?;
        }
        f.write_str("}")
    }
}

/// Parses `{}`, `{a, b, ...}` and `#n` (the set with code `n`), nested freely.
pub fn parse_set_literal(src: &str) -> Result<HfSet> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let x = p.set()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::syntax(p.pos, "trailing input after set literal"));
    }
    Ok(x)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn set(&mut self) -> Result<HfSet> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'{') => {
                self.pos += 1;
                let mut members = Vec::new();
                self.skip_ws();
                if self.src.get(self.pos) == Some(&b'}') {
                    self.pos += 1;
                    return Ok(HfSet::empty());
                }
                loop {
                    members.push(self.set()?);
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        Some(b',') => self.pos += 1,
                        Some(b'}') => {
                            self.pos += 1;
                            return Ok(HfSet::from_children(members));
                        }
                        _ => return Err(Error::syntax(self.pos, "expected `,` or `}`")),
                    }
                }
            }
            Some(b'#') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(Error::syntax(start, "expected digits after `#`"));
                }
                let n = BigUint::parse_bytes(&self.src[start..self.pos], 10)
                    .ok_or_else(|| Error::syntax(start, "bad number"))?;
                decode(&n)
            }
            _ => Err(Error::syntax(self.pos, "expected `{` or `#`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::decode_u64;

    #[test]
    fn print() {
        assert_eq!(decode_u64(0).to_string(), "{}");
        assert_eq!(decode_u64(1).to_string(), "{{}}");
        assert_eq!(decode_u64(3).to_string(), "{{}, {{}}}");
        assert_eq!(decode_u64(6).to_string(), "{{{}}, {{{}}}}");
    }

    #[test]
    fn parse() {
        assert_eq!(parse_set_literal("{}").unwrap(), decode_u64(0));
        assert_eq!(parse_set_literal(" { {{}} , {} } ").unwrap(), decode_u64(3));
        assert_eq!(parse_set_literal("{#1, #2}").unwrap(), decode_u64(6));
        assert_eq!(parse_set_literal("#100").unwrap(), decode_u64(100));
        assert_eq!(parse_set_literal("{{}, {}}").unwrap(), decode_u64(1));
    }

    #[test]
    fn round_trip() {
        for n in 0..2000 {
            let x = decode_u64(n);
            assert_eq!(parse_set_literal(&x.to_string()).unwrap(), x);
        }
    }

    #[test]
    fn errors() {
        for (src, pos) in [("{", 1), ("{}}", 2), ("#", 1), ("{{},", 4), ("x", 0)] {
            match parse_set_literal(src) {
                Err(Error::Syntax { pos: p, .. }) => assert_eq!(p, pos, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }
}
