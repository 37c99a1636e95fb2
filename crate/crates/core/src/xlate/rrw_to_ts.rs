//! RRW automaton → overhead-free two-stack automaton.
//!
//! The window contents live in the control. Stack 2 holds the tape left of
//! the window (nearest on top) and stack 1 the tape right of it. The left
//! endmarker is never stored; an empty stack 1 reads as the right endmarker
//! and then as filler.

use crate::error::Result;
use crate::machine::{Branch, Prune};
use crate::of::StateId;
use crate::restart::{validate_rrw, Phase, RrwAutomaton, RrwOp, WinSym};
use crate::symbol::{Alphabet, Sym};
use crate::twostack::{StackAction, TsAction, TwoStackAutomaton, TwoStackControl};

use super::enumerate::enumerate_ts;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RtMode {
    Fill,
    Decide,
    /// Returning the window symbols to stack 1 after a restart.
    PushBack,
    Drain,
    DrainPush(Sym),
    Accept,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RtState {
    pub q: StateId,
    pub phase: Phase,
    pub win: Vec<WinSym>,
    pub mode: RtMode,
}

pub struct RrwToTs<'a> {
    pub source: &'a RrwAutomaton,
}

type Out = Vec<Branch<TsAction<RtState>>>;

fn sym_count(w: &[WinSym]) -> usize {
    w.iter().filter(|c| c.sym().is_some()).count()
}

impl RrwToTs<'_> {
    fn k(&self) -> usize {
        self.source.window_size
    }

    fn after(&self, q: StateId, phase: Phase, win: Vec<WinSym>) -> RtState {
        let mode = if win.len() < self.k() { RtMode::Fill } else { RtMode::Decide };
        RtState { q, phase, win, mode }
    }

    fn decide(&self, s: &RtState) -> Out {
        let a = self.source;
        a.ops(s.q, &s.win)
            .into_iter()
            .map(|op| {
                let (next, action) = match op {
                    RrwOp::Accept => {
                        (RtState { mode: RtMode::Accept, phase: Phase::Accepted, ..s.clone() }, StackAction::Noop)
                    }
                    RrwOp::MoveRight(q) => {
                        let action = match s.win[0] {
                            WinSym::Right | WinSym::Beyond => return Branch::Pruned(Prune::IllegalStep),
                            WinSym::Left => StackAction::Noop,
                            WinSym::Sym(x) => StackAction::Push2(x),
                        };
                        (self.after(*q, s.phase, s.win[1..].to_vec()), action)
                    }
                    RrwOp::Rewrite(q, rep) => {
                        if s.phase != Phase::MayRewrite {
                            return Branch::Pruned(Prune::Alternation);
                        }
                        if sym_count(rep) >= sym_count(&s.win) {
                            return Branch::Pruned(Prune::IllegalStep);
                        }
                        (self.after(*q, Phase::MustRestart, rep.clone()), StackAction::Noop)
                    }
                    RrwOp::Restart => {
                        if s.phase != Phase::MustRestart {
                            return Branch::Pruned(Prune::Alternation);
                        }
                        let next = RtState { q: a.start, phase: Phase::MayRewrite, win: s.win.clone(), mode: RtMode::PushBack };
                        (next, StackAction::Noop)
                    }
                };
                Branch::Next(TsAction { next, action })
            })
            .collect()
    }
}

impl TwoStackControl for RrwToTs<'_> {
    type State = RtState;

    fn input_alphabet(&self) -> &Alphabet {
        &self.source.input_alphabet
    }

    fn tape_alphabet(&self) -> &Alphabet {
        &self.source.input_alphabet
    }

    fn overhead_free(&self) -> bool {
        true
    }

    fn start(&self) -> RtState {
        self.after(self.source.start, Phase::MayRewrite, vec![WinSym::Left])
    }

    fn is_accepting(&self, s: &RtState) -> bool {
        s.mode == RtMode::Accept
    }

    fn delta(&self, s: &RtState, top1: Option<Sym>, top2: Option<Sym>) -> Out {
        let step = |next: RtState, action| vec![Branch::Next(TsAction { next, action })];
        match s.mode {
            RtMode::Accept => vec![],
            RtMode::Decide => self.decide(s),
            RtMode::Fill => match top1 {
                Some(x) => {
                    let mut win = s.win.clone();
                    win.push(WinSym::Sym(x));
                    step(self.after(s.q, s.phase, win), StackAction::Pop1)
                }
                None => {
                    let mut win = s.win.clone();
                    if !win.contains(&WinSym::Right) {
                        win.push(WinSym::Right);
                    }
                    win.resize(self.k(), WinSym::Beyond);
                    step(self.after(s.q, s.phase, win), StackAction::Noop)
                }
            },
            RtMode::PushBack => match s.win.iter().rposition(|c| c.sym().is_some()) {
                Some(i) => {
                    let mut win = s.win.clone();
                    let x = win.remove(i).sym().unwrap_or_default();
                    step(RtState { win, ..s.clone() }, StackAction::Push1(x))
                }
                None => step(RtState { win: vec![], mode: RtMode::Drain, ..s.clone() }, StackAction::Noop),
            },
            RtMode::Drain => match top2 {
                Some(y) => step(RtState { mode: RtMode::DrainPush(y), ..s.clone() }, StackAction::Pop2),
                None => step(self.after(s.q, s.phase, vec![WinSym::Left]), StackAction::Noop),
            },
            RtMode::DrainPush(y) => step(RtState { mode: RtMode::Drain, ..s.clone() }, StackAction::Push1(y)),
        }
    }
}

pub fn rrw_to_twostack(a: &RrwAutomaton) -> Result<TwoStackAutomaton> {
    validate_rrw(a).into_result()?;
    enumerate_ts(&RrwToTs { source: a }, 2_000_000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Budget, Mode};
    use crate::restart::{build_anbn_rrw, run_rrw};
    use crate::twostack::{run_ts, validate_ts};

    #[test]
    fn anbn_agrees_with_source() {
        let a = build_anbn_rrw();
        let t = rrw_to_twostack(&a).unwrap();
        assert!(validate_ts(&t).is_empty(), "{}", validate_ts(&t));
        assert_eq!(t.deterministic, a.deterministic);
        for w in a.input_alphabet.words_up_to(8) {
            let src = run_rrw(&a, &w, &Mode::Bfs, Budget::default(), false).unwrap();
            let tgt = run_ts(&t, &w, &Mode::Bfs, Budget::default(), false).unwrap();
            assert_eq!(src.verdict, tgt.verdict, "{w:?}");
            assert_eq!(tgt.pruned.get(Prune::HeightBound), 0);
        }
    }
}
