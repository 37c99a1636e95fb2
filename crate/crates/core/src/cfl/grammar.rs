//! Chomsky-normal-form grammars.

use std::fmt;

use crate::error::{Error, Result};
use crate::report::{ValidationReport, ViolationKind};
use crate::symbol::{Alphabet, Sym, RESERVED};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GSym {
    N(String),
    T(Sym),
}

impl fmt::Display for GSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GSym::N(n) => write!(f, "{n}"),
            GSym::T(t) => write!(f, "'{t}'"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Production {
    pub lhs: String,
    pub rhs: Vec<GSym>,
}

/// A grammar as written. Shapes are only guaranteed after [`validate_cnf`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfGrammar {
    pub nonterminals: Vec<String>,
    pub terminals: Vec<Sym>,
    pub start: String,
    pub productions: Vec<Production>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rhs {
    Pair(usize, usize),
    Term(Sym),
}

/// Index form of a valid grammar.
#[derive(Clone, Debug)]
pub struct Indexed {
    pub start: usize,
    /// (lhs, rhs) in declaration order.
    pub prods: Vec<(usize, Rhs)>,
    /// One tape symbol per nonterminal.
    pub tape_syms: Vec<Sym>,
}

impl CnfGrammar {
    /// Collects N and T from the productions; the start symbol is the first left-hand side.
    pub fn from_productions(productions: Vec<Production>) -> Result<Self> {
        let start = productions
            .first()
            .map(|p| p.lhs.clone())
            .ok_or_else(|| Error::Precondition("grammar has no productions".into()))?;
        let mut nonterminals: Vec<String> = Vec::new();
        let mut terminals: Vec<Sym> = Vec::new();
        for p in &productions {
            if !nonterminals.contains(&p.lhs) {
                nonterminals.push(p.lhs.clone());
            }
            for s in &p.rhs {
                match s {
                    GSym::N(n) if !nonterminals.contains(n) => nonterminals.push(n.clone()),
                    GSym::T(t) if !terminals.contains(t) => terminals.push(*t),
                    _ => {}
                }
            }
        }
        Ok(CnfGrammar { nonterminals, terminals, start, productions })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut prods = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line_no = ln + 1;
            let body = line.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let err = |column: usize, message: &str| Error::Syntax { line: line_no, column, message: message.into() };
            let Some(arrow) = body.find("->") else { return Err(err(1, "expected `->`")) };
            let lhs = body[..arrow].trim();
            if !lhs.starts_with(|c: char| c.is_uppercase()) || lhs.contains(char::is_whitespace) {
                return Err(err(1, "left-hand side must be one nonterminal"));
            }
            let mut rhs = Vec::new();
            let rest = &body[arrow + 2..];
            let mut chars = rest.char_indices().peekable();
            while let Some(&(i, c)) = chars.peek() {
                let column = arrow + 3 + i;
                if c.is_whitespace() {
                    chars.next();
                } else if c == '\'' {
                    chars.next();
                    let t = chars.next().map(|x| x.1);
                    let close = chars.next().map(|x| x.1);
                    match (t, close) {
                        (Some(t), Some('\'')) => rhs.push(GSym::T(t)),
                        _ => return Err(err(column, "terminal must be one character in single quotes")),
                    }
                } else if c.is_uppercase() {
                    let mut name = String::new();
                    while let Some(&(_, c)) = chars.peek() {
                        if c.is_whitespace() {
                            break;
                        }
                        name.push(c);
                        chars.next();
                    }
                    rhs.push(GSym::N(name));
                } else {
                    return Err(err(column, "expected a nonterminal or a quoted terminal"));
                }
            }
            prods.push(Production { lhs: lhs.to_string(), rhs });
        }
        Self::from_productions(prods)
    }

    pub fn terminal_alphabet(&self) -> Result<Alphabet> {
        Alphabet::new(self.terminals.iter().copied())
    }

    /// Index form; fails on an invalid grammar.
    pub fn indexed(&self) -> Result<Indexed> {
        validate_cnf(self).into_result()?;
        let idx = |n: &str| self.nonterminals.iter().position(|x| x == n).unwrap_or_default();
        let prods = self
            .productions
            .iter()
            .map(|p| {
                let rhs = match p.rhs.as_slice() {
                    [GSym::N(y), GSym::N(z)] => Rhs::Pair(idx(y), idx(z)),
                    [GSym::T(a)] => Rhs::Term(*a),
                    _ => unreachable!("validated"),
                };
                (idx(&p.lhs), rhs)
            })
            .collect();
        Ok(Indexed { start: idx(&self.start), prods, tape_syms: self.tape_symbols() })
    }

    /// Tape symbol for each nonterminal: its own name when that is a single
    /// free character, otherwise the next unused capital letter.
    pub fn tape_symbols(&self) -> Vec<Sym> {
        let usable = |c: char| !c.is_whitespace() && !RESERVED.contains(&c) && !self.terminals.contains(&c);
        let mut taken: Vec<Sym> = Vec::new();
        let mut out: Vec<Option<Sym>> = vec![None; self.nonterminals.len()];
        for (i, n) in self.nonterminals.iter().enumerate() {
            let mut cs = n.chars();
            if let (Some(c), None) = (cs.next(), cs.next()) {
                if usable(c) && !taken.contains(&c) {
                    out[i] = Some(c);
                    taken.push(c);
                }
            }
        }
        let mut pool = ('A'..='Z').chain('\u{391}'..='\u{3A9}').chain('\u{410}'..='\u{42F}');
        for slot in out.iter_mut().filter(|s| s.is_none()) {
            let c = pool.by_ref().find(|&c| usable(c) && !taken.contains(&c) && !self.nonterminals.iter().any(|n| n.len() == c.len_utf8() && n.starts_with(c)));
            let c = c.expect("enough spare symbols");
            taken.push(c);
            *slot = Some(c);
        }
        out.into_iter().map(|c| c.unwrap_or('?')).collect()
    }
}

impl fmt::Display for CnfGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.productions {
            write!(f, "{} ->", p.lhs)?;
            for s in &p.rhs {
                write!(f, " {s}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn validate_cnf(g: &CnfGrammar) -> ValidationReport {
    let mut r = ValidationReport::default();
    if !g.nonterminals.contains(&g.start) {
        r.push(ViolationKind::GrammarShape, format!("start symbol {} is not a nonterminal", g.start));
    }
    for n in &g.nonterminals {
        let mut cs = n.chars();
        if !n.starts_with(|c: char| c.is_uppercase()) || n.contains(char::is_whitespace) {
            r.push(ViolationKind::GrammarShape, format!("bad nonterminal name {n:?}"));
        }
        if let (Some(c), None) = (cs.next(), cs.next()) {
            if g.terminals.contains(&c) {
                r.push(ViolationKind::SymbolClash, format!("{c} is both a nonterminal and a terminal"));
            }
        }
    }
    for &t in &g.terminals {
        if t.is_whitespace() || RESERVED.contains(&t) {
            r.push(ViolationKind::SymbolClash, format!("terminal {t:?} is a reserved character"));
        }
    }
    for p in &g.productions {
        if !g.nonterminals.contains(&p.lhs) {
            r.push(ViolationKind::GrammarShape, format!("unknown nonterminal {}", p.lhs));
        }
        let ok = match p.rhs.as_slice() {
            [GSym::N(y), GSym::N(z)] => g.nonterminals.contains(y) && g.nonterminals.contains(z),
            [GSym::T(a)] => g.terminals.contains(a),
            _ => false,
        };
        if !ok {
            let rhs: Vec<String> = p.rhs.iter().map(|s| s.to_string()).collect();
            r.push(ViolationKind::GrammarShape, format!("{} -> {} is not in normal form", p.lhs, rhs.join(" ")));
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let text = "S -> A B\nA -> 'a'\nB -> 'b'\n";
        let g = CnfGrammar::parse(text).unwrap();
        assert_eq!(g.start, "S");
        assert_eq!(g.terminals, vec!['a', 'b']);
        assert!(validate_cnf(&g).is_empty());
        assert_eq!(g.to_string(), text);
        assert_eq!(CnfGrammar::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn shape_violations() {
        let g = CnfGrammar::parse("S -> 'a' B\nB -> 'b'").unwrap();
        assert_eq!(validate_cnf(&g).count(ViolationKind::GrammarShape), 1);
        let g = CnfGrammar::parse("S -> A A\nA -> 'A'").unwrap();
        assert_eq!(validate_cnf(&g).count(ViolationKind::SymbolClash), 1);
        let g = CnfGrammar::parse("S -> A B C\nA -> 'a'\nB -> 'b'\nC -> 'c'").unwrap();
        assert_eq!(validate_cnf(&g).count(ViolationKind::GrammarShape), 1);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match CnfGrammar::parse("S -> A B\nA -> a") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 6)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn long_names_get_spare_symbols() {
        let g = CnfGrammar::parse("S -> A S'\nS' -> A B\nA -> 'a'\nB -> 'b'").unwrap();
        let syms = g.tape_symbols();
        assert_eq!(syms[0], 'S');
        assert_eq!(syms.len(), 4);
        let mut d = syms.clone();
        d.dedup();
        d.sort();
        d.dedup();
        assert_eq!(d.len(), 4);
    }
}
