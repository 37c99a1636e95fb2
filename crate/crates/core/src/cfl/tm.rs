//! Bottom-up parsing by editing: undo one production at a time.
//!
//! From `main` the machine picks a production and a direction, walks that
//! way and may stop at any cell holding the first right-hand-side symbol.
//! There it deletes the right-hand side and inserts the left-hand side.
//! It accepts once the tape is exactly the start symbol.

use crate::editing::{EdBuilder, EdRule, Effect, EditingTm};
use crate::of::StateId;
use crate::error::Result;
use crate::symbol::{Alphabet, Cell, Move};

use super::grammar::{CnfGrammar, Rhs};

pub(crate) const MAIN: &str = "main";
pub(crate) const CHECK: &str = "check";

pub(crate) fn search_state(p: usize, right: bool) -> String {
    format!("find{p}{}", if right { 'R' } else { 'L' })
}

pub(crate) fn second_state(p: usize) -> String {
    format!("second{p}")
}

pub(crate) fn insert_state(p: usize) -> String {
    format!("put{p}")
}

pub fn grammar_to_editing_tm(g: &CnfGrammar) -> Result<EditingTm> {
    let ix = g.indexed()?;
    let sigma = g.terminal_alphabet()?;
    let syms = &ix.tape_syms;
    let gamma = Alphabet::new(g.terminals.iter().copied().chain(syms.iter().copied()))?;
    let cells: Vec<Cell> =
        [Cell::Left, Cell::Right].into_iter().chain(gamma.symbols().iter().map(|&s| Cell::Sym(s))).collect();
    let start_sym = Cell::Sym(syms[ix.start]);

    let mut b = EdBuilder::default();
    b.pass("init", Cell::Left, MAIN, Move::Right);
    for &c in &cells {
        for p in 0..ix.prods.len() {
            for right in [true, false] {
                let useless = (right && c == Cell::Right) || (!right && c == Cell::Left);
                if !useless {
                    b.pass(MAIN, c, &search_state(p, right), Move::Stay);
                }
            }
        }
        if c == start_sym {
            b.pass(MAIN, c, CHECK, Move::Left);
        }
    }
    b.pass(CHECK, Cell::Left, "check2", Move::Right);
    b.pass("check2", start_sym, "check3", Move::Right);
    b.pass("check3", Cell::Right, "acc", Move::Stay);
    b.accept("acc");

    for (p, &(x, rhs)) in ix.prods.iter().enumerate() {
        let first = match rhs {
            Rhs::Pair(y, _) => Cell::Sym(syms[y]),
            Rhs::Term(a) => Cell::Sym(a),
        };
        let after_first = match rhs {
            Rhs::Pair(..) => second_state(p),
            Rhs::Term(_) => insert_state(p),
        };
        for right in [true, false] {
            let s = search_state(p, right);
            for &c in &cells {
                if c == first {
                    b.rule(&s, c, &after_first, Effect::Delete);
                }
                let blocked = (right && c == Cell::Right) || (!right && c == Cell::Left);
                if !blocked {
                    b.pass(&s, c, &s, if right { Move::Right } else { Move::Left });
                }
            }
        }
        if let Rhs::Pair(_, z) = rhs {
            b.rule(&second_state(p), Cell::Sym(syms[z]), &insert_state(p), Effect::Delete);
        }
        for &c in cells.iter().filter(|&&c| c != Cell::Left) {
            b.rule(&insert_state(p), c, MAIN, Effect::Insert(syms[x]));
        }
    }
    Ok(b.build("init", sigma, gamma).with_deterministic_flag(false))
}

/// Adds acceptance of the empty word in front of `m`.
pub fn with_empty_word(m: &EditingTm) -> EditingTm {
    let mut m = m.clone();
    let old_start = m.start;
    let entry = m.states.len();
    let empty = entry + 1;
    let acc = entry + 2;
    m.states.extend(["entry".to_string(), "empty".to_string(), "acc_empty".to_string()]);
    m.accepting.insert(StateId(acc));
    let id = StateId;
    m.push_rule(EdRule {
        from: id(entry),
        read: Cell::Left,
        to: id(empty),
        effect: Effect::Write(Cell::Left, Move::Right),
    });
    m.push_rule(EdRule {
        from: id(empty),
        read: Cell::Right,
        to: id(acc),
        effect: Effect::Write(Cell::Right, Move::Stay),
    });
    for &s in m.input_alphabet.clone().symbols() {
        m.push_rule(EdRule {
            from: id(empty),
            read: Cell::Sym(s),
            to: id(empty),
            effect: Effect::Write(Cell::Sym(s), Move::Left),
        });
    }
    // Back on the left endmarker with a nonempty word: hand over to the old start.
    m.push_rule(EdRule {
        from: id(empty),
        read: Cell::Left,
        to: old_start,
        effect: Effect::Write(Cell::Left, Move::Stay),
    });
    m.start = id(entry);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::editing::{run_editing, validate_editing};
    use crate::machine::{Budget, Mode, Verdict};
    use crate::symbol::word;

    fn ab() -> CnfGrammar {
        CnfGrammar::parse("S -> A B\nA -> 'a'\nB -> 'b'").unwrap()
    }

    #[test]
    fn machine_is_well_formed() {
        let m = grammar_to_editing_tm(&ab()).unwrap();
        assert!(validate_editing(&m).is_empty(), "{}", validate_editing(&m));
        assert!(!m.deterministic);
        assert_eq!(m.input_alphabet.symbols(), &['a', 'b']);
        assert_eq!(m.tape_alphabet.len(), 5);
    }

    #[test]
    fn bfs_agrees_on_short_words() {
        let m = grammar_to_editing_tm(&ab()).unwrap();
        let run = |w: &str| run_editing(&m, &word(w), &Mode::Bfs, Budget::default(), None).unwrap().result.verdict;
        assert_eq!(run("ab"), Verdict::Accept);
        assert_eq!(run("aa"), Verdict::Reject);
        assert_eq!(run("ba"), Verdict::Reject);
        assert_eq!(run("abb"), Verdict::Reject);
        assert_eq!(run(""), Verdict::Reject);
    }

    #[test]
    fn empty_word_patch() {
        let m = with_empty_word(&grammar_to_editing_tm(&ab()).unwrap());
        assert!(validate_editing(&m).is_empty(), "{}", validate_editing(&m));
        let run = |w: &str| run_editing(&m, &word(w), &Mode::Bfs, Budget::default(), None).unwrap().result.verdict;
        assert_eq!(run(""), Verdict::Accept);
        assert_eq!(run("ab"), Verdict::Accept);
        assert_eq!(run("a"), Verdict::Reject);
    }
}
