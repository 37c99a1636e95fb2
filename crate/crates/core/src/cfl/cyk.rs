//! CYK membership with back-pointers.

use crate::error::{Error, Result};
use crate::symbol::Sym;

use super::grammar::{CnfGrammar, Indexed, Rhs};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    /// Index of the production applied here.
    pub prod: usize,
    pub lhs: usize,
    /// (rY, rZ) for binary applications.
    pub children: Option<(usize, usize)>,
    /// Covered input positions, end exclusive.
    pub span: (usize, usize),
}

impl Node {
    /// n(r): leaves below this node.
    pub fn leaves(&self) -> usize {
        self.span.1 - self.span.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseTree {
    pub nodes: Vec<Node>,
    pub root: usize,
}

impl ParseTree {
    /// Checks that the tree derives `word` from the start symbol.
    pub fn check(&self, g: &Indexed, word: &[Sym]) -> Result<()> {
        let bad = |m: String| Err(Error::Precondition(format!("parse tree does not match the word: {m}")));
        let root = self.nodes.get(self.root).ok_or_else(|| Error::Precondition("empty parse tree".into()))?;
        if root.lhs != g.start || root.span != (0, word.len()) {
            return bad("root".into());
        }
        for (i, n) in self.nodes.iter().enumerate() {
            let Some(&(lhs, rhs)) = g.prods.get(n.prod) else { return bad(format!("node {i} names no production")) };
            if lhs != n.lhs || n.span.0 >= n.span.1 || n.span.1 > word.len() {
                return bad(format!("node {i}"));
            }
            match (rhs, n.children) {
                (Rhs::Term(a), None) if n.leaves() == 1 && word[n.span.0] == a => {}
                (Rhs::Pair(y, z), Some((cy, cz))) => {
                    let (Some(ny), Some(nz)) = (self.nodes.get(cy), self.nodes.get(cz)) else {
                        return bad(format!("node {i} children"));
                    };
                    if ny.lhs != y || nz.lhs != z || ny.span.0 != n.span.0 || ny.span.1 != nz.span.0 || nz.span.1 != n.span.1 {
                        return bad(format!("node {i} children"));
                    }
                }
                _ => return bad(format!("node {i} shape")),
            }
        }
        Ok(())
    }

    /// Productions applied, in preorder.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(i) = stack.pop() {
            out.push(i);
            if let Some((y, z)) = self.nodes[i].children {
                stack.push(z);
                stack.push(y);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
enum Back {
    Leaf(usize),
    Split { prod: usize, k: usize, y: usize, z: usize },
}

/// Membership of `word`; the tree breaks ties by lowest split, then production order.
pub fn cyk_parse(g: &CnfGrammar, word: &[Sym]) -> Result<(bool, Option<ParseTree>)> {
    let ix = g.indexed()?;
    if let Some(&c) = word.iter().find(|c| !g.terminals.contains(c)) {
        return Err(Error::InputSymbol(c));
    }
    let n = word.len();
    if n == 0 {
        return Ok((false, None));
    }
    let nn = g.nonterminals.len();
    // table[i][l - 1][x]: back-pointer for x deriving word[i..i + l].
    let mut table: Vec<Vec<Vec<Option<Back>>>> = vec![vec![vec![None; nn]; n]; n];
    for (i, &c) in word.iter().enumerate() {
        for (p, &(x, rhs)) in ix.prods.iter().enumerate() {
            if rhs == Rhs::Term(c) && table[i][0][x].is_none() {
                table[i][0][x] = Some(Back::Leaf(p));
            }
        }
    }
    for l in 2..=n {
        for i in 0..=n - l {
            for k in 1..l {
                for (p, &(x, rhs)) in ix.prods.iter().enumerate() {
                    let Rhs::Pair(y, z) = rhs else { continue };
                    if table[i][l - 1][x].is_none() && table[i][k - 1][y].is_some() && table[i + k][l - k - 1][z].is_some() {
                        table[i][l - 1][x] = Some(Back::Split { prod: p, k, y, z });
                    }
                }
            }
        }
    }
    if table[0][n - 1][ix.start].is_none() {
        return Ok((false, None));
    }
    let mut nodes = Vec::new();
    let root = build(&table, 0, n, ix.start, &mut nodes);
    Ok((true, Some(ParseTree { nodes, root })))
}

fn build(table: &[Vec<Vec<Option<Back>>>], i: usize, l: usize, x: usize, nodes: &mut Vec<Node>) -> usize {
    match table[i][l - 1][x].expect("back-pointer") {
        Back::Leaf(prod) => {
            nodes.push(Node { prod, lhs: x, children: None, span: (i, i + 1) });
        }
        Back::Split { prod, k, y, z } => {
            let cy = build(table, i, k, y, nodes);
            let cz = build(table, i + k, l - k, z, nodes);
            nodes.push(Node { prod, lhs: x, children: Some((cy, cz)), span: (i, i + l) });
        }
    }
    nodes.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::word;

    fn ab() -> CnfGrammar {
        CnfGrammar::parse("S -> A B\nA -> 'a'\nB -> 'b'").unwrap()
    }

    #[test]
    fn small_examples() {
        let g = ab();
        let (yes, tree) = cyk_parse(&g, &word("ab")).unwrap();
        assert!(yes);
        let tree = tree.unwrap();
        assert_eq!(tree.nodes[tree.root].leaves(), 2);
        tree.check(&g.indexed().unwrap(), &word("ab")).unwrap();
        assert_eq!(cyk_parse(&g, &word("ba")).unwrap(), (false, None));
        assert!(cyk_parse(&g, &word("ac")).is_err());
    }

    #[test]
    fn ties_go_to_the_lowest_split() {
        // S -> S S | 'a': "aaa" splits at 1 first.
        let g = CnfGrammar::parse("S -> S S\nS -> 'a'").unwrap();
        let (_, tree) = cyk_parse(&g, &word("aaa")).unwrap();
        let tree = tree.unwrap();
        let (y, z) = tree.nodes[tree.root].children.unwrap();
        assert_eq!(tree.nodes[y].span, (0, 1));
        assert_eq!(tree.nodes[z].span, (1, 3));
    }
}
