//! Materializes a structured finite control as a transition table by
//! exploring the control states reachable from the start state.
//!
//! Pruned branches become moves into a dead state so choice indices of the
//! table match those of the control.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::machine::Branch;
use crate::of::{OfControl, OfMachine, OfRule, StateId};
use crate::symbol::{Cell, Move};
use crate::twostack::{StackAction, TsRule, TwoStackAutomaton, TwoStackControl};

struct Namer<S> {
    ids: HashMap<S, usize>,
    order: Vec<S>,
}

impl<S: Clone + Eq + Hash> Namer<S> {
    fn new() -> Self {
        Namer { ids: HashMap::new(), order: Vec::new() }
    }

    fn id(&mut self, s: &S, queue: &mut VecDeque<S>) -> usize {
        if let Some(&i) = self.ids.get(s) {
            return i;
        }
        let i = self.order.len();
        self.ids.insert(s.clone(), i);
        self.order.push(s.clone());
        queue.push_back(s.clone());
        i
    }
}

fn names(n: usize, dead: bool) -> Vec<String> {
    let mut v: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    if dead {
        v.push("dead".into());
    }
    v
}

/// (from, top1, top2, to or dead, action)
type RawTsRule = (usize, Option<char>, Option<char>, Option<usize>, StackAction);

pub fn enumerate_ts<C: TwoStackControl>(c: &C, limit: usize) -> Result<TwoStackAutomaton> {
    let mut namer = Namer::new();
    let mut queue = VecDeque::new();
    namer.id(&c.start(), &mut queue);
    let tops: Vec<Option<char>> =
        std::iter::once(None).chain(c.tape_alphabet().symbols().iter().map(|&s| Some(s))).collect();
    let mut raw: Vec<RawTsRule> = Vec::new();
    let mut any_dead = false;
    while let Some(s) = queue.pop_front() {
        if namer.order.len() > limit {
            return Err(Error::Precondition(format!("control has more than {limit} reachable states")));
        }
        let from = namer.ids[&s];
        for &t1 in &tops {
            for &t2 in &tops {
                for b in c.delta(&s, t1, t2) {
                    match b {
                        Branch::Next(a) => {
                            let to = namer.id(&a.next, &mut queue);
                            raw.push((from, t1, t2, Some(to), a.action));
                        }
                        Branch::Pruned(_) => {
                            any_dead = true;
                            raw.push((from, t1, t2, None, StackAction::Noop));
                        }
                    }
                }
            }
        }
    }
    let n = namer.order.len();
    let accepting: BTreeSet<StateId> =
        namer.order.iter().enumerate().filter(|(_, s)| c.is_accepting(s)).map(|(i, _)| StateId(i)).collect();
    let rules = raw
        .into_iter()
        .map(|(from, top1, top2, to, action)| TsRule {
            from: StateId(from),
            top1,
            top2,
            to: StateId(to.unwrap_or(n)),
            action,
        })
        .collect();
    let a = TwoStackAutomaton::new(
        names(n, any_dead),
        StateId(0),
        accepting,
        c.input_alphabet().clone(),
        c.tape_alphabet().clone(),
        rules,
    );
    Ok(a.with_overhead_free(c.overhead_free()))
}

/// Steps the simulator would prune: endmarker overwrites, writes outside
/// the tape alphabet, moves off the tape.
fn legal_of_step<C: OfControl>(c: &C, read: Cell, write: Cell, mv: Move) -> bool {
    let write_ok = match (read, write) {
        (Cell::Sym(_), Cell::Sym(s)) => c.tape_alphabet().contains(s),
        (r, w) => r == w,
    };
    write_ok && !matches!((read, mv), (Cell::Left, Move::Left) | (Cell::Right, Move::Right))
}

pub fn enumerate_of<C: OfControl>(c: &C, limit: usize) -> Result<OfMachine> {
    let mut namer = Namer::new();
    let mut queue = VecDeque::new();
    namer.id(&c.start(), &mut queue);
    let reads: Vec<Cell> = [Cell::Left, Cell::Right]
        .into_iter()
        .chain(c.tape_alphabet().symbols().iter().map(|&s| Cell::Sym(s)))
        .collect();
    let mut raw: Vec<(usize, Cell, Option<usize>, Cell, Move)> = Vec::new();
    let mut any_dead = false;
    while let Some(s) = queue.pop_front() {
        if namer.order.len() > limit {
            return Err(Error::Precondition(format!("control has more than {limit} reachable states")));
        }
        let from = namer.ids[&s];
        for &r in &reads {
            for b in c.delta(&s, r) {
                match b {
                    Branch::Next(a) if legal_of_step(c, r, a.write, a.mv) => {
                        let to = namer.id(&a.next, &mut queue);
                        raw.push((from, r, Some(to), a.write, a.mv));
                    }
                    _ => {
                        any_dead = true;
                        raw.push((from, r, None, r, Move::Stay));
                    }
                }
            }
        }
    }
    let n = namer.order.len();
    let accepting: BTreeSet<StateId> =
        namer.order.iter().enumerate().filter(|(_, s)| c.is_accepting(s)).map(|(i, _)| StateId(i)).collect();
    let rules = raw
        .into_iter()
        .map(|(from, read, to, write, mv)| OfRule { from: StateId(from), read, to: StateId(to.unwrap_or(n)), write, mv })
        .collect();
    let mut m = OfMachine::new(names(n, any_dead), StateId(0), accepting, c.input_alphabet().clone(), rules);
    if !c.tape_alphabet().same_set(c.input_alphabet()) {
        m = m.with_tape_alphabet(c.tape_alphabet().clone());
        m.deterministic = m.is_structurally_deterministic();
    }
    Ok(m)
}
