//! Overhead-free two-stack automaton → OF machine.
//!
//! The tape reads `stack2 (top rightmost) · free space · stack1 (top leftmost)`.
//! The free space is one of ε, `1`, `1 0^z 1` over two designated input
//! symbols, and the control remembers which. Between simulated steps the
//! head rests on the anchor: the top of stack 2, or the left endmarker when
//! stack 2 is empty.

use crate::error::{Error, Result};
use crate::machine::{Branch, Prune};
use crate::of::{OfAction, OfControl, StateId};
use crate::symbol::{Alphabet, Cell, Move, Sym};
use crate::twostack::{validate_ts, StackAction, TwoStackAutomaton, TwoStackControl};

use super::freespace::ShapeTag;

/// Work left to do once the head is back on the anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Then {
    Nothing,
    Pop2,
    Push2(Sym),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pc {
    AtAnchor,
    CrossOne { top2: Option<Sym> },
    CrossFirst { top2: Option<Sym> },
    CrossZeros { top2: Option<Sym> },
    AtTop1 { top2: Option<Sym> },
    BackOne(Then),
    BackLast(Then),
    BackZeros(Then),
    AnchorDo(Then),
    Pop1Fix,
    Pop2Fix,
    Pop2Leave,
    Push1One(Sym),
    Push1Last(Sym),
    Push1Probe(Sym),
    Push1Write { s: Sym, block: bool },
    Push2One(Sym),
    Push2Probe1(Sym),
    Push2Probe2(Sym),
    Push2Write(Sym),
    Accept,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TtState {
    pub q: StateId,
    pub shape: ShapeTag,
    pub pc: Pc,
}

#[derive(Clone, Debug)]
pub struct TsToOf {
    pub source: TwoStackAutomaton,
    pub zero: Sym,
    pub one: Sym,
}

/// Two distinct input symbols playing 0 and 1: the literal digits when
/// present, otherwise the first two symbols of the alphabet.
pub fn designated_bits(sigma: &Alphabet) -> Option<(Sym, Sym)> {
    if sigma.contains('0') && sigma.contains('1') {
        return Some(('0', '1'));
    }
    match sigma.symbols() {
        [a, b, ..] => Some((*a, *b)),
        _ => None,
    }
}

pub fn twostack_to_of(a: &TwoStackAutomaton) -> Result<TsToOf> {
    validate_ts(a).into_result()?;
    if !a.overhead_free || !a.input_alphabet.same_set(&a.tape_alphabet) {
        return Err(Error::Precondition("source automaton is not overhead-free".into()));
    }
    let (zero, one) = designated_bits(&a.input_alphabet)
        .ok_or_else(|| Error::Precondition("input alphabet needs at least two symbols".into()))?;
    Ok(TsToOf { source: a.clone(), zero, one })
}

type Out = Vec<Branch<OfAction<TtState>>>;

fn go(q: StateId, shape: ShapeTag, pc: Pc, write: Cell, mv: Move) -> Out {
    vec![Branch::Next(OfAction { next: TtState { q, shape, pc }, write, mv })]
}

fn back_from_top1(shape: ShapeTag, then: Then) -> Pc {
    match shape {
        ShapeTag::Empty => Pc::AnchorDo(then),
        ShapeTag::One => Pc::BackOne(then),
        ShapeTag::Block => Pc::BackLast(then),
    }
}

impl TsToOf {
    fn decide(&self, s: &TtState, top2: Option<Sym>, read: Cell) -> Out {
        let top1 = read.sym();
        let t = &self.source;
        t.delta(&s.q, top1, top2)
            .into_iter()
            .map(|b| {
                let act = match b {
                    Branch::Next(a) => a,
                    Branch::Pruned(p) => return Branch::Pruned(p),
                };
                let q = act.next;
                let step = |shape, pc, write, mv| Branch::Next(OfAction { next: TtState { q, shape, pc }, write, mv });
                if t.accepting.contains(&q) && self.legal(act.action, top1, top2, s.shape).is_ok() {
                    return step(s.shape, Pc::Accept, read, Move::Stay);
                }
                if let Err(p) = self.legal(act.action, top1, top2, s.shape) {
                    return Branch::Pruned(p);
                }
                let one = Cell::Sym(self.one);
                match (act.action, s.shape) {
                    (StackAction::Noop, sh) => step(sh, back_from_top1(sh, Then::Nothing), read, Move::Left),
                    (StackAction::Pop1, ShapeTag::Empty) => step(ShapeTag::One, Pc::AnchorDo(Then::Nothing), one, Move::Left),
                    (StackAction::Pop1, ShapeTag::One) => step(ShapeTag::Block, Pc::BackOne(Then::Nothing), one, Move::Left),
                    (StackAction::Pop1, ShapeTag::Block) => step(ShapeTag::Block, Pc::Pop1Fix, one, Move::Left),
                    (StackAction::Pop2, sh) => step(sh, back_from_top1(sh, Then::Pop2), read, Move::Left),
                    (StackAction::Push2(x), sh) => step(sh, back_from_top1(sh, Then::Push2(x)), read, Move::Left),
                    (StackAction::Push1(x), ShapeTag::One) => step(ShapeTag::One, Pc::Push1One(x), read, Move::Left),
                    (StackAction::Push1(x), sh) => step(sh, Pc::Push1Last(x), read, Move::Left),
                }
            })
            .collect()
    }

    fn legal(&self, a: StackAction, top1: Option<Sym>, top2: Option<Sym>, shape: ShapeTag) -> Result<(), Prune> {
        match a {
            StackAction::Pop1 if top1.is_none() => Err(Prune::IllegalStep),
            StackAction::Pop2 if top2.is_none() => Err(Prune::IllegalStep),
            StackAction::Push1(x) | StackAction::Push2(x) if !self.source.tape_alphabet.contains(x) => {
                Err(Prune::IllegalStep)
            }
            StackAction::Push1(_) | StackAction::Push2(_) if shape == ShapeTag::Empty => Err(Prune::HeightBound),
            _ => Ok(()),
        }
    }

    fn at_anchor(&self, s: &TtState, read: Cell, then: Then) -> Out {
        let (q, sh) = (s.q, s.shape);
        let one = Cell::Sym(self.one);
        match then {
            Then::Nothing => self.delta(&TtState { pc: Pc::AtAnchor, ..*s }, read),
            Then::Pop2 => match sh {
                ShapeTag::Empty => go(q, ShapeTag::One, Pc::AtAnchor, one, Move::Left),
                ShapeTag::One => go(q, ShapeTag::Block, Pc::AtAnchor, one, Move::Left),
                ShapeTag::Block => go(q, ShapeTag::Block, Pc::Pop2Fix, one, Move::Right),
            },
            Then::Push2(x) => match sh {
                ShapeTag::One => go(q, sh, Pc::Push2One(x), read, Move::Right),
                _ => go(q, sh, Pc::Push2Probe1(x), read, Move::Right),
            },
        }
    }
}

impl OfControl for TsToOf {
    type State = TtState;

    fn input_alphabet(&self) -> &Alphabet {
        &self.source.input_alphabet
    }

    fn start(&self) -> TtState {
        TtState { q: self.source.start, shape: ShapeTag::Empty, pc: Pc::AtAnchor }
    }

    fn is_accepting(&self, s: &TtState) -> bool {
        s.pc == Pc::Accept || (s.pc == Pc::AtAnchor && self.source.accepting.contains(&s.q))
    }

    fn delta(&self, s: &TtState, read: Cell) -> Out {
        let (q, sh) = (s.q, s.shape);
        let zero = Cell::Sym(self.zero);
        let one = Cell::Sym(self.one);
        let is0 = read == zero;
        let is1 = read == one;
        match s.pc {
            Pc::Accept => vec![],
            Pc::AtAnchor => {
                if self.source.accepting.contains(&q) {
                    return vec![];
                }
                let top2 = read.sym();
                let pc = match sh {
                    ShapeTag::Empty => Pc::AtTop1 { top2 },
                    ShapeTag::One => Pc::CrossOne { top2 },
                    ShapeTag::Block => Pc::CrossFirst { top2 },
                };
                go(q, sh, pc, read, Move::Right)
            }
            Pc::CrossOne { top2 } | Pc::CrossFirst { top2 } if is1 => {
                let pc = if sh == ShapeTag::One { Pc::AtTop1 { top2 } } else { Pc::CrossZeros { top2 } };
                go(q, sh, pc, read, Move::Right)
            }
            Pc::CrossZeros { top2 } if is0 => go(q, sh, Pc::CrossZeros { top2 }, read, Move::Right),
            Pc::CrossZeros { top2 } if is1 => go(q, sh, Pc::AtTop1 { top2 }, read, Move::Right),
            Pc::AtTop1 { top2 } if read != Cell::Left => self.decide(s, top2, read),
            Pc::BackOne(t) if is1 => go(q, sh, Pc::AnchorDo(t), read, Move::Left),
            Pc::BackLast(t) if is1 => go(q, sh, Pc::BackZeros(t), read, Move::Left),
            Pc::BackZeros(t) if is0 => go(q, sh, Pc::BackZeros(t), read, Move::Left),
            Pc::BackZeros(t) if is1 => go(q, sh, Pc::AnchorDo(t), read, Move::Left),
            Pc::AnchorDo(t) => self.at_anchor(s, read, t),
            Pc::Pop1Fix if is1 => go(q, sh, Pc::BackZeros(Then::Nothing), zero, Move::Left),
            Pc::Pop2Fix if is1 => go(q, sh, Pc::Pop2Leave, zero, Move::Left),
            Pc::Pop2Leave if is1 => go(q, sh, Pc::AtAnchor, read, Move::Left),
            Pc::Push1One(x) if is1 => go(q, ShapeTag::Empty, Pc::AnchorDo(Then::Nothing), Cell::Sym(x), Move::Left),
            Pc::Push1Last(x) if is1 => go(q, sh, Pc::Push1Probe(x), read, Move::Left),
            Pc::Push1Probe(x) if is0 => go(q, sh, Pc::Push1Write { s: x, block: true }, one, Move::Right),
            Pc::Push1Probe(x) if is1 => go(q, sh, Pc::Push1Write { s: x, block: false }, read, Move::Right),
            Pc::Push1Write { s: x, block } => {
                let pc = if block { Pc::BackLast(Then::Nothing) } else { Pc::BackOne(Then::Nothing) };
                go(q, if block { ShapeTag::Block } else { ShapeTag::One }, pc, Cell::Sym(x), Move::Left)
            }
            Pc::Push2One(x) if is1 => go(q, ShapeTag::Empty, Pc::AtAnchor, Cell::Sym(x), Move::Stay),
            Pc::Push2Probe1(x) if is1 => go(q, sh, Pc::Push2Probe2(x), read, Move::Right),
            Pc::Push2Probe2(x) if is0 => go(q, ShapeTag::Block, Pc::Push2Write(x), one, Move::Left),
            Pc::Push2Probe2(x) if is1 => go(q, ShapeTag::One, Pc::Push2Write(x), one, Move::Left),
            Pc::Push2Write(x) => go(q, sh, Pc::AtAnchor, Cell::Sym(x), Move::Stay),
            _ => vec![],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Budget, Mode};
    use crate::of::run_of;
    use crate::twostack::{build_palindrome_ts, build_unary_power2_ts, run_ts};

    #[test]
    fn palindromes_agree_under_bfs() {
        let a = build_palindrome_ts();
        let m = twostack_to_of(&a).unwrap();
        for w in a.input_alphabet.words_up_to(6) {
            let src = run_ts(&a, &w, &Mode::Bfs, Budget::default(), false).unwrap();
            let tgt = run_of(&m, &w, &Mode::Bfs, Budget::default(), false).unwrap();
            assert_eq!(src.verdict, tgt.verdict, "{w:?}");
            assert_eq!(tgt.pruned.get(Prune::OverheadViolation), 0);
        }
    }

    #[test]
    fn witness_transfers_unchanged() {
        let a = build_palindrome_ts();
        let m = twostack_to_of(&a).unwrap();
        let w = crate::symbol::word("abba");
        let src = run_ts(&a, &w, &Mode::Bfs, Budget::default(), false).unwrap();
        let wit = src.witness.clone().unwrap();
        let tgt = run_of(&m, &w, &Mode::Witness(wit), Budget::default(), false).unwrap();
        assert!(tgt.accepted());
    }

    #[test]
    fn unary_source_is_refused() {
        assert!(twostack_to_of(&build_unary_power2_ts()).is_err());
    }
}
