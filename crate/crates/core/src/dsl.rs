//! Text syntax for groups and elements.
//!
//! ```text
//! Group  := Term ( "+" Term )*
//! Term   := "Z" | "Z" "_"? INT | "Z" "^" REP | "Z" "_"? INT "^" REP | "Prufer" "(" INT ")"
//! REP    := INT | "w"
//! ```
//!
//! Whitespace is ignored. `Z_n^k` expands to `k` copies of `Z_n`, `Z_n^w`
//! is a single repeated factor.
//!
//! Elements of a single-factor group are written bare, otherwise as a
//! parenthesised tuple. Integer and residue coordinates are integers,
//! repeated-cyclic coordinates are `[c0,c1,...]` (or `0`), and Prufer
//! coordinates are `a/p^k` (or `0`).

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{is_prime, trim, Coord, Element, Factor, GroupSpec};

const GRAMMAR: &str = "Group := Term (\"+\" Term)*; Term := Z | Z_n | Z^k | Z_n^k | Z_n^w | Prufer(p)";

/// Human-readable grammar summary, used in CLI usage errors.
pub fn grammar_help() -> &'static str {
    GRAMMAR
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(w) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn int(&mut self) -> Result<i128> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.eat('-');
        self.skip_ws();
        let digits_start = self.pos;
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return self.err("expected an integer");
        }
        let v: i128 = match self.src[digits_start..self.pos].parse() {
            Ok(v) => v,
            Err(_) => {
                self.pos = digits_start;
                return self.err("integer out of range");
            }
        };
        Ok(if neg { -v } else { v })
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let at = self.pos;
        let v = self.int()?;
        u64::try_from(v).or_else(|_| {
            self.pos = at;
            self.err("expected a non-negative integer")
        })
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }
}

enum Rep {
    Count(u64),
    Countable,
}

/// Parses a group description such as `"Z_4 + Z_2^w"`.
pub fn parse_group(text: &str) -> Result<GroupSpec> {
    let mut cur = Cursor::new(text);
    let mut factors = Vec::new();
    loop {
        parse_term(&mut cur, &mut factors)?;
        if cur.at_end() {
            break;
        }
        cur.expect('+')?;
    }
    GroupSpec::new(factors)
}

fn parse_term(cur: &mut Cursor<'_>, out: &mut Vec<Factor>) -> Result<()> {
    if cur.eat_word("Prufer") {
        cur.expect('(')?;
        let at = cur.pos;
        let p = cur.uint()?;
        if !is_prime(p) {
            cur.pos = at;
            return Err(Error::NotPrime(p));
        }
        cur.expect(')')?;
        out.push(Factor::Prufer(p));
        return Ok(());
    }
    if !cur.eat('Z') {
        return cur.err("expected 'Z' or 'Prufer'");
    }
    let underscore = cur.eat('_');
    let modulus = match cur.peek() {
        Some(c) if c.is_ascii_digit() => {
            let n = cur.uint()?;
            if n < 2 {
                return Err(Error::InvalidModulus(n));
            }
            Some(n)
        }
        _ if underscore => return cur.err("expected a modulus after '_'"),
        _ => None,
    };
    let rep = if cur.eat('^') {
        if cur.eat('w') {
            Rep::Countable
        } else {
            let at = cur.pos;
            let k = cur.uint()?;
            if k == 0 {
                cur.pos = at;
                return cur.err("repetition count must be at least 1");
            }
            Rep::Count(k)
        }
    } else {
        Rep::Count(1)
    };
    match (modulus, rep) {
        (None, Rep::Countable) => cur.err("Z^w (free abelian group of countable rank) is not supported"),
        (None, Rep::Count(k)) => {
            out.extend((0..k).map(|_| Factor::Integers));
            Ok(())
        }
        (Some(n), Rep::Countable) => {
            out.push(Factor::RepeatedCyclic(n));
            Ok(())
        }
        (Some(n), Rep::Count(k)) => {
            out.extend((0..k).map(|_| Factor::Cyclic(n)));
            Ok(())
        }
    }
}

impl fmt::Display for GroupSpec {
    /// Canonical text: runs of identical finite or integer factors collapse
    /// into a power.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors = self.factors();
        let mut i = 0;
        let mut first = true;
        while i < factors.len() {
            let mut run = 1;
            if matches!(factors[i], Factor::Integers | Factor::Cyclic(_)) {
                while i + run < factors.len() && factors[i + run] == factors[i] {
                    run += 1;
                }
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match factors[i] {
                Factor::Integers => f.write_str("Z")?,
                Factor::Cyclic(n) => write!(f, "Z_{n}")?,
                Factor::RepeatedCyclic(n) => write!(f, "Z_{n}^w")?,
                Factor::Prufer(p) => write!(f, "Prufer({p})")?,
            }
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl GroupSpec {
    /// Parses an element in the element syntax and brings it to canonical form.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let mut cur = Cursor::new(text);
        let coords = if self.rank() == 1 {
            let parenthesised = cur.eat('(');
            let c = parse_coord(&mut cur, self.factors()[0])?;
            if parenthesised {
                cur.expect(')')?;
            }
            vec![c]
        } else {
            cur.expect('(')?;
            let mut coords = Vec::with_capacity(self.rank());
            for (i, f) in self.factors().iter().enumerate() {
                if i > 0 {
                    cur.expect(',')?;
                }
                coords.push(parse_coord(&mut cur, *f)?);
            }
            cur.expect(')')?;
            coords
        };
        if !cur.at_end() {
            return cur.err("trailing input");
        }
        let e = Element::new(coords);
        self.check(&e)?;
        Ok(e)
    }

    pub fn format_element(&self, e: &Element) -> String {
        let parts: Vec<String> = self.factors().iter().zip(e.coords()).map(|(f, c)| format_coord(*f, c)).collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            format!("({})", parts.join(","))
        }
    }
}

fn residue(v: i128, n: u64) -> u64 {
    v.rem_euclid(n as i128) as u64
}

fn parse_coord(cur: &mut Cursor<'_>, f: Factor) -> Result<Coord> {
    match f {
        Factor::Integers => {
            let at = cur.pos;
            let v = cur.int()?;
            i64::try_from(v).map(Coord::Int).or_else(|_| {
                cur.pos = at;
                cur.err("integer out of range")
            })
        }
        Factor::Cyclic(n) => Ok(Coord::Residue(residue(cur.int()?, n))),
        Factor::RepeatedCyclic(n) => {
            if cur.eat('[') {
                let mut v = Vec::new();
                if !cur.eat(']') {
                    loop {
                        v.push(residue(cur.int()?, n));
                        if cur.eat(']') {
                            break;
                        }
                        cur.expect(',')?;
                    }
                }
                trim(&mut v);
                Ok(Coord::Vector(v))
            } else {
                let at = cur.pos;
                if cur.int()? != 0 {
                    cur.pos = at;
                    return cur.err("repeated-cyclic coordinate must be '[...]' or 0");
                }
                Ok(Coord::Vector(Vec::new()))
            }
        }
        Factor::Prufer(p) => {
            let num = cur.int()?;
            if !cur.eat('/') {
                if num != 0 {
                    return cur.err("Prufer coordinate must be 'a/p^k' or 0");
                }
                return Ok(Coord::Fraction { num: 0, level: 0 });
            }
            let at = cur.pos;
            let base = cur.uint()?;
            let level = if cur.eat('^') {
                if base != p {
                    cur.pos = at;
                    return cur.err(format!("denominator base must be {p}"));
                }
                let k = cur.uint()?;
                u32::try_from(k).or_else(|_| cur.err("level out of range"))?
            } else {
                // a/q with q a power of p
                let mut q = base;
                let mut k = 0u32;
                while q > 1 && q % p == 0 {
                    q /= p;
                    k += 1;
                }
                if q != 1 {
                    cur.pos = at;
                    return cur.err(format!("denominator must be a power of {p}"));
                }
                k
            };
            let modulus = (p as i128).checked_pow(level).ok_or(Error::Overflow("Prufer level"))?;
            let mut num = num.rem_euclid(modulus) as u128;
            let mut level = level;
            if num == 0 {
                return Ok(Coord::Fraction { num: 0, level: 0 });
            }
            while num.is_multiple_of(p as u128) {
                num /= p as u128;
                level -= 1;
            }
            Ok(Coord::Fraction { num: num as u64, level })
        }
    }
}

fn format_coord(f: Factor, c: &Coord) -> String {
    match c {
        Coord::Int(x) => x.to_string(),
        Coord::Residue(r) => r.to_string(),
        Coord::Vector(v) if v.is_empty() => "0".into(),
        Coord::Vector(v) => {
            let parts: Vec<String> = v.iter().map(u64::to_string).collect();
            format!("[{}]", parts.join(","))
        }
        Coord::Fraction { num: 0, .. } => "0".into(),
        Coord::Fraction { num, level } => match f {
            Factor::Prufer(p) => format!("{num}/{p}^{level}"),
            _ => format!("{num}/?^{level}"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_integer_factor() {
        assert_eq!(parse_group("Z").unwrap().factors(), &[Factor::Integers]);
    }

    #[test]
    fn parses_sum_with_repeated_factor() {
        assert_eq!(parse_group("Z_4 + Z_2^w").unwrap().factors(), &[Factor::Cyclic(4), Factor::RepeatedCyclic(2)]);
        assert_eq!(parse_group("  Z4+Z_2 ^ w ").unwrap(), parse_group("Z_4 + Z_2^w").unwrap());
    }

    #[test]
    fn parses_prufer() {
        assert_eq!(parse_group("Prufer(3)").unwrap().factors(), &[Factor::Prufer(3)]);
    }

    #[test]
    fn expands_finite_powers() {
        assert_eq!(parse_group("Z_2^3").unwrap().factors(), &[Factor::Cyclic(2); 3]);
        assert_eq!(parse_group("Z^2").unwrap().factors(), &[Factor::Integers; 2]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_group("Z_1"), Err(Error::InvalidModulus(1))));
        assert!(matches!(parse_group("Z_0^w"), Err(Error::InvalidModulus(0))));
        assert!(matches!(parse_group("Prufer(4)"), Err(Error::NotPrime(4))));
        assert!(matches!(parse_group("Z + Q"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_group("Z_4 +"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_group("Z^w"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_group(""), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_group("Z_2^0"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn canonical_text_round_trips() {
        for s in ["Z", "Z_4 + Z_2^w", "Prufer(3)", "Z_2^4", "Z^2 + Z_3 + Prufer(2)", "Z_5^w + Z_5^w"] {
            assert_eq!(parse_group(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn element_syntax() {
        let g = parse_group("Z_4 + Z_2^w + Prufer(3)").unwrap();
        let e = g.parse_element("(5, [1,0,3,0], 4/9)").unwrap();
        assert_eq!(e.coords(), &[Coord::Residue(1), Coord::Vector(vec![1, 0, 1]), Coord::Fraction { num: 4, level: 2 }]);
        assert_eq!(g.format_element(&e), "(1,[1,0,1],4/3^2)");
        assert_eq!(g.parse_element(&g.format_element(&e)).unwrap(), e);
        assert_eq!(g.parse_element("(0,0,3/9)").unwrap(), g.parse_element("(0,[],1/3^1)").unwrap());
        assert!(g.parse_element("(1,2)").is_err());
        assert!(g.parse_element("(1,0,1/2)").is_err());

        let z = parse_group("Z").unwrap();
        assert_eq!(z.format_element(&z.parse_element("-7").unwrap()), "-7");
    }
}
