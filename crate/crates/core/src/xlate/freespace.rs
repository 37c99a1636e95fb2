//! The free-space word between the two stack halves of a simulated tape:
//! ε, `1` or `1 0^z 1`, covering 0, 1 or z + 2 freed cells.

use crate::symbol::Sym;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FreeSpace {
    Empty,
    One,
    Block(usize),
}

impl FreeSpace {
    pub fn from_cells(n: usize) -> Self {
        match n {
            0 => FreeSpace::Empty,
            1 => FreeSpace::One,
            n => FreeSpace::Block(n - 2),
        }
    }

    pub fn cells(self) -> usize {
        match self {
            FreeSpace::Empty => 0,
            FreeSpace::One => 1,
            FreeSpace::Block(z) => z + 2,
        }
    }

    /// One link further along ε → 1 → 11 → 101 → 1001 → ...
    pub fn expand(self) -> Self {
        FreeSpace::from_cells(self.cells() + 1)
    }

    pub fn contract(self) -> Option<Self> {
        self.cells().checked_sub(1).map(FreeSpace::from_cells)
    }

    pub fn render(self, zero: Sym, one: Sym) -> Vec<Sym> {
        match self {
            FreeSpace::Empty => vec![],
            FreeSpace::One => vec![one],
            FreeSpace::Block(z) => {
                let mut v = vec![one];
                v.extend(std::iter::repeat_n(zero, z));
                v.push(one);
                v
            }
        }
    }

    /// Reads a free-space word back; `None` unless it is exactly one of the shapes.
    pub fn parse(cells: &[Sym], zero: Sym, one: Sym) -> Option<Self> {
        match cells {
            [] => Some(FreeSpace::Empty),
            [c] if *c == one => Some(FreeSpace::One),
            [a, mid @ .., b] if *a == one && *b == one && mid.iter().all(|&c| c == zero) => {
                Some(FreeSpace::Block(mid.len()))
            }
            _ => None,
        }
    }
}

/// Compact tag for the finite control: the shape without the zero count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShapeTag {
    Empty,
    One,
    Block,
}

impl From<FreeSpace> for ShapeTag {
    fn from(f: FreeSpace) -> Self {
        match f {
            FreeSpace::Empty => ShapeTag::Empty,
            FreeSpace::One => ShapeTag::One,
            FreeSpace::Block(_) => ShapeTag::Block,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_links() {
        let words: Vec<String> = (0..6)
            .map(|n| FreeSpace::from_cells(n).render('0', '1').into_iter().collect())
            .collect();
        assert_eq!(words, vec!["", "1", "11", "101", "1001", "10001"]);
    }

    #[test]
    fn expand_and_contract_move_one_link() {
        let mut f = FreeSpace::Empty;
        for n in 1..20 {
            let g = f.expand();
            assert_eq!(g.cells(), n);
            assert_eq!(g.contract(), Some(f));
            f = g;
        }
        assert_eq!(FreeSpace::Empty.contract(), None);
    }

    #[test]
    fn parse_round_trip() {
        for n in 0..8 {
            let f = FreeSpace::from_cells(n);
            assert_eq!(FreeSpace::parse(&f.render('0', '1'), '0', '1'), Some(f));
        }
        assert_eq!(FreeSpace::parse(&['1', '1', '0'], '0', '1'), None);
    }
}
