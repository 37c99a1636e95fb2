//! OF machine → overhead-free two-stack automaton.
//!
//! Stack 1 holds the head cell and everything right of it, head cell on top.
//! Stack 2 holds the cells left of the head, nearest on top. The left
//! endmarker is not stored: a flag in the control says the head is on it.
//! An empty stack 1 means the head is on the right endmarker.

use crate::error::Result;
use crate::machine::Branch;
use crate::of::{validate_machine, OfMachine, StateId};
use crate::symbol::{Alphabet, Cell, Move, Sym};
use crate::twostack::{StackAction, TsAction, TwoStackAutomaton, TwoStackControl};

use super::enumerate::enumerate_ts;

/// Pending work after the first stack action of a simulated step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// Push the written symbol to stack 2 (right move).
    Push2(Sym),
    /// Put the written symbol back on stack 1 (stay).
    Push1(Sym),
    /// Put the written symbol back, then pull the left neighbour over (left move).
    Push1Pull(Sym),
    /// Move the top of stack 2 over to stack 1, or note the left endmarker.
    Pull,
    /// Finish a pull by pushing the popped symbol.
    PushBack(Sym),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OtState {
    Decide { q: StateId, at_left: bool },
    Then { q: StateId, tail: Tail },
}

pub struct OfToTs<'a> {
    pub source: &'a OfMachine,
}

impl OfToTs<'_> {
    fn first(&self, q: StateId, tail: Tail, action: StackAction) -> Branch<TsAction<OtState>> {
        Branch::Next(TsAction { next: OtState::Then { q, tail }, action })
    }

    fn decide(q: StateId, at_left: bool, action: StackAction) -> TsAction<OtState> {
        TsAction { next: OtState::Decide { q, at_left }, action }
    }
}

impl TwoStackControl for OfToTs<'_> {
    type State = OtState;

    fn input_alphabet(&self) -> &Alphabet {
        &self.source.input_alphabet
    }

    fn tape_alphabet(&self) -> &Alphabet {
        &self.source.input_alphabet
    }

    fn overhead_free(&self) -> bool {
        true
    }

    fn start(&self) -> OtState {
        OtState::Decide { q: self.source.start, at_left: true }
    }

    fn is_accepting(&self, s: &OtState) -> bool {
        let q = match s {
            OtState::Decide { q, .. } | OtState::Then { q, .. } => q,
        };
        self.source.accepting.contains(q)
    }

    fn delta(&self, s: &OtState, top1: Option<Sym>, top2: Option<Sym>) -> Vec<Branch<TsAction<OtState>>> {
        use StackAction::*;
        match *s {
            OtState::Decide { q, at_left } => {
                if self.source.accepting.contains(&q) {
                    return vec![];
                }
                let read = match (at_left, top1) {
                    (true, _) => Cell::Left,
                    (false, Some(x)) => Cell::Sym(x),
                    (false, None) => Cell::Right,
                };
                self.source
                    .rules_for(q, read)
                    .map(|r| match (read, r.write, r.mv) {
                        (Cell::Left, _, Move::Right) => Branch::Next(Self::decide(r.to, false, Noop)),
                        (Cell::Left, _, _) => Branch::Next(Self::decide(r.to, true, Noop)),
                        (Cell::Sym(_), Cell::Sym(w), Move::Right) => self.first(r.to, Tail::Push2(w), Pop1),
                        (Cell::Sym(_), Cell::Sym(w), Move::Stay) => self.first(r.to, Tail::Push1(w), Pop1),
                        (Cell::Sym(_), Cell::Sym(w), Move::Left) => self.first(r.to, Tail::Push1Pull(w), Pop1),
                        (Cell::Right, _, Move::Left) => self.pull(r.to, top2),
                        (Cell::Right, _, _) => Branch::Next(Self::decide(r.to, false, Noop)),
                        _ => Branch::Pruned(crate::machine::Prune::IllegalStep),
                    })
                    .collect()
            }
            OtState::Then { q, tail } => vec![match tail {
                Tail::Push2(w) => Branch::Next(Self::decide(q, false, Push2(w))),
                Tail::Push1(w) => Branch::Next(Self::decide(q, false, Push1(w))),
                Tail::Push1Pull(w) => self.first(q, Tail::Pull, Push1(w)),
                Tail::Pull => self.pull(q, top2),
                Tail::PushBack(y) => Branch::Next(Self::decide(q, false, Push1(y))),
            }],
        }
    }
}

impl OfToTs<'_> {
    fn pull(&self, q: StateId, top2: Option<Sym>) -> Branch<TsAction<OtState>> {
        match top2 {
            Some(y) => self.first(q, Tail::PushBack(y), StackAction::Pop2),
            None => Branch::Next(Self::decide(q, true, StackAction::Noop)),
        }
    }
}

pub fn of_to_twostack(m: &OfMachine) -> Result<TwoStackAutomaton> {
    validate_machine(m).into_result()?;
    let a = enumerate_ts(&OfToTs { source: m }, 1_000_000)?;
    Ok(a.with_deterministic_flag(m.deterministic))
}
