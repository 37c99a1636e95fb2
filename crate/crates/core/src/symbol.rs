//! Symbols, alphabets, tape cells and head moves shared by every model.

use std::fmt;

use crate::error::{Error, Result};

/// A tape or stack symbol. Symbols are single characters.
pub type Sym = char;

/// Characters that can never be alphabet members because the text formats
/// use them for endmarkers, fillers, stack bottoms and comments.
pub const RESERVED: &[char] = &['|', '-', '~', '_', '#', '\''];

/// An ordered, duplicate-free, nonempty set of symbols.
///
/// Declaration order is significant: it fixes shortlex enumeration order and
/// the bit codes assigned by the block and bookkeeping encodings.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<Sym>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = Sym>) -> Result<Self> {
        let mut out: Vec<Sym> = Vec::new();
        for s in symbols {
            if s.is_whitespace() || RESERVED.contains(&s) {
                return Err(Error::Alphabet(format!("reserved character {s:?} cannot be a symbol")));
            }
            if out.contains(&s) {
                return Err(Error::Alphabet(format!("duplicate symbol {s:?}")));
            }
            out.push(s);
        }
        if out.is_empty() {
            return Err(Error::Alphabet("alphabet must be nonempty".into()));
        }
        Ok(Alphabet { symbols: out })
    }

    /// Shorthand for tests and built-in machines: every char of `s` is a symbol.
    pub fn from_chars(s: &str) -> Self {
        Alphabet::new(s.chars()).expect("valid alphabet literal")
    }

    pub fn symbols(&self) -> &[Sym] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, s: Sym) -> bool {
        self.symbols.contains(&s)
    }

    pub fn index_of(&self, s: Sym) -> Option<usize> {
        self.symbols.iter().position(|&c| c == s)
    }

    pub fn is_subset_of(&self, other: &Alphabet) -> bool {
        self.symbols.iter().all(|&s| other.contains(s))
    }

    /// Same members, ignoring declaration order.
    pub fn same_set(&self, other: &Alphabet) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// Symbols of `self` that are not in `other`, in declaration order.
    pub fn minus(&self, other: &Alphabet) -> Vec<Sym> {
        self.symbols.iter().copied().filter(|&s| !other.contains(s)).collect()
    }

    pub fn check_word(&self, word: &[Sym]) -> Result<()> {
        match word.iter().find(|&&c| !self.contains(c)) {
            Some(c) => Err(Error::InputSymbol(*c)),
            None => Ok(()),
        }
    }

    /// All words of length `len` in lexicographic order of symbol indices.
    pub fn words_of_len(&self, len: usize) -> Vec<Vec<Sym>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * self.len());
            for w in &out {
                for &s in &self.symbols {
                    let mut v = w.clone();
                    v.push(s);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// All words of length at most `max_len`, shortlex.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Vec<Sym>> {
        (0..=max_len).flat_map(|l| self.words_of_len(l)).collect()
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// Content of a fixed tape position: an endmarker or a symbol.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Cell {
    Left,
    Sym(Sym),
    Right,
}

impl Cell {
    pub fn sym(self) -> Option<Sym> {
        match self {
            Cell::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_endmarker(self) -> bool {
        !matches!(self, Cell::Sym(_))
    }

    pub fn token(self) -> String {
        match self {
            Cell::Left => "|-".into(),
            Cell::Right => "-|".into(),
            Cell::Sym(s) => s.to_string(),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Move {
    Left,
    Right,
    Stay,
}

impl Move {
    pub fn offset(self) -> isize {
        match self {
            Move::Left => -1,
            Move::Right => 1,
            Move::Stay => 0,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Move::Left => "L",
            Move::Right => "R",
            Move::Stay => "S",
        }
    }
}

/// The cell at `pos` of a bordered tape: 0 is the left endmarker and
/// `tape.len() + 1` the right one.
pub fn bordered(tape: &[Sym], pos: usize) -> Cell {
    if pos == 0 {
        Cell::Left
    } else if pos == tape.len() + 1 {
        Cell::Right
    } else {
        Cell::Sym(tape[pos - 1])
    }
}

pub fn word(s: &str) -> Vec<Sym> {
    s.chars().collect()
}

pub fn show(w: &[Sym]) -> String {
    w.iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_reserved_and_duplicates() {
        assert!(Alphabet::new("a|".chars()).is_err());
        assert!(Alphabet::new("aa".chars()).is_err());
        assert!(Alphabet::new("".chars()).is_err());
        assert!(Alphabet::new("ab".chars()).is_ok());
    }

    #[test]
    fn shortlex_enumeration() {
        let a = Alphabet::from_chars("ab");
        let ws: Vec<String> = a.words_up_to(2).iter().map(|w| show(w)).collect();
        assert_eq!(ws, vec!["", "a", "b", "aa", "ab", "ba", "bb"]);
    }

    #[test]
    fn bordered_positions() {
        let t = word("01");
        assert_eq!(bordered(&t, 0), Cell::Left);
        assert_eq!(bordered(&t, 1), Cell::Sym('0'));
        assert_eq!(bordered(&t, 3), Cell::Right);
    }
}
