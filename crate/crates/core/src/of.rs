//! One-tape overhead-free Turing machines.
//!
//! The tape holds exactly the input between two unwritable endmarkers and
//! every write must be an input-alphabet symbol. The head starts on the left
//! endmarker (position 0); position `|w| + 1` is the right endmarker.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::Result;
use crate::machine::{self, Branch, Budget, Machine, Mode, Prune, RunResult};
use crate::report::{ValidationReport, ViolationKind};
use crate::symbol::{bordered, Alphabet, Cell, Move, Sym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OfAction<S> {
    pub next: S,
    pub write: Cell,
    pub mv: Move,
}

/// Finite control of a one-tape machine over a fixed-length tape.
///
/// Tables implement it with [`StateId`]s; compilers implement it with
/// structured states whose reachable set is finite but never materialized.
pub trait OfControl {
    type State: Clone + Eq + Hash + Debug;

    fn input_alphabet(&self) -> &Alphabet;
    fn start(&self) -> Self::State;
    fn is_accepting(&self, q: &Self::State) -> bool;
    fn delta(&self, q: &Self::State, read: Cell) -> Vec<Branch<OfAction<Self::State>>>;

    /// Symbols the control may write. Overhead-free controls write only input symbols.
    fn tape_alphabet(&self) -> &Alphabet {
        self.input_alphabet()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OfConfig<S> {
    pub state: S,
    pub head: usize,
    pub tape: Vec<Sym>,
}

impl<S> OfConfig<S> {
    pub fn read(&self) -> Cell {
        bordered(&self.tape, self.head)
    }
}

/// Simulator adapter: wraps a control and enforces the model on every step.
///
/// Writes outside the tape alphabet, endmarker overwrites and moves off the
/// tape are pruned as [`Prune::OverheadViolation`].
pub struct OfSim<'a, C: ?Sized> {
    pub control: &'a C,
}

impl<'a, C: OfControl + ?Sized> OfSim<'a, C> {
    pub fn new(control: &'a C) -> Self {
        OfSim { control }
    }

    fn apply(&self, c: &OfConfig<C::State>, act: OfAction<C::State>) -> Branch<OfConfig<C::State>> {
        let read = c.read();
        let legal_write = match (read, act.write) {
            (Cell::Sym(_), Cell::Sym(s)) => self.control.tape_alphabet().contains(s),
            (r, w) => r == w,
        };
        let target = c.head as isize + act.mv.offset();
        if !legal_write || target < 0 || target as usize > c.tape.len() + 1 {
            return Branch::Pruned(Prune::OverheadViolation);
        }
        let mut tape = c.tape.clone();
        if let Cell::Sym(s) = act.write {
            tape[c.head - 1] = s;
        }
        Branch::Next(OfConfig { state: act.next, head: target as usize, tape })
    }
}

impl<C: OfControl + ?Sized> Machine for OfSim<'_, C> {
    type Config = OfConfig<C::State>;

    fn input_alphabet(&self) -> &Alphabet {
        self.control.input_alphabet()
    }

    fn initial(&self, input: &[Sym]) -> Self::Config {
        OfConfig { state: self.control.start(), head: 0, tape: input.to_vec() }
    }

    fn branches(&self, c: &Self::Config) -> Vec<Branch<Self::Config>> {
        self.control
            .delta(&c.state, c.read())
            .into_iter()
            .map(|b| match b {
                Branch::Next(act) => self.apply(c, act),
                Branch::Pruned(p) => Branch::Pruned(p),
            })
            .collect()
    }

    fn is_accepting(&self, c: &Self::Config) -> bool {
        self.control.is_accepting(&c.state)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OfRule {
    pub from: StateId,
    pub read: Cell,
    pub to: StateId,
    pub write: Cell,
    pub mv: Move,
}

/// Transition-table machine. Rule order is the choice-index order.
#[derive(Clone, Debug)]
pub struct OfMachine {
    pub states: Vec<String>,
    pub start: StateId,
    pub accepting: BTreeSet<StateId>,
    pub input_alphabet: Alphabet,
    /// Present only for linear-space machines that write a richer alphabet.
    pub tape_alphabet: Option<Alphabet>,
    pub deterministic: bool,
    rules: Vec<OfRule>,
    index: HashMap<(StateId, Cell), Vec<usize>>,
}

impl OfMachine {
    pub fn new(
        states: Vec<String>,
        start: StateId,
        accepting: BTreeSet<StateId>,
        input_alphabet: Alphabet,
        rules: Vec<OfRule>,
    ) -> Self {
        let mut m = OfMachine {
            states,
            start,
            accepting,
            input_alphabet,
            tape_alphabet: None,
            deterministic: false,
            rules: Vec::new(),
            index: HashMap::new(),
        };
        for r in rules {
            m.push_rule(r);
        }
        m.deterministic = m.is_structurally_deterministic();
        m
    }

    pub fn with_tape_alphabet(mut self, gamma: Alphabet) -> Self {
        self.tape_alphabet = Some(gamma);
        self
    }

    pub fn with_deterministic_flag(mut self, flag: bool) -> Self {
        self.deterministic = flag;
        self
    }

    pub fn push_rule(&mut self, r: OfRule) {
        self.index.entry((r.from, r.read)).or_default().push(self.rules.len());
        self.rules.push(r);
    }

    pub fn rules(&self) -> &[OfRule] {
        &self.rules
    }

    pub fn rules_for(&self, q: StateId, read: Cell) -> impl Iterator<Item = &OfRule> {
        self.index.get(&(q, read)).into_iter().flatten().map(|&i| &self.rules[i])
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn is_structurally_deterministic(&self) -> bool {
        self.index.values().all(|v| v.len() <= 1)
    }

    /// Σ for overhead-free machines, Γ for linear-space ones.
    pub fn writable(&self) -> &Alphabet {
        self.tape_alphabet.as_ref().unwrap_or(&self.input_alphabet)
    }
}

impl OfControl for OfMachine {
    type State = StateId;

    fn input_alphabet(&self) -> &Alphabet {
        &self.input_alphabet
    }

    fn start(&self) -> StateId {
        self.start
    }

    fn is_accepting(&self, q: &StateId) -> bool {
        self.accepting.contains(q)
    }

    fn delta(&self, q: &StateId, read: Cell) -> Vec<Branch<OfAction<StateId>>> {
        self.rules_for(*q, read)
            .map(|r| Branch::Next(OfAction { next: r.to, write: r.write, mv: r.mv }))
            .collect()
    }

    fn tape_alphabet(&self) -> &Alphabet {
        self.writable()
    }
}

/// Incremental construction with states named on first use.
#[derive(Default)]
pub struct OfBuilder {
    states: Vec<String>,
    rules: Vec<OfRule>,
    accepting: BTreeSet<StateId>,
}

impl OfBuilder {
    pub fn state(&mut self, name: &str) -> StateId {
        match self.states.iter().position(|s| s == name) {
            Some(i) => StateId(i),
            None => {
                self.states.push(name.to_string());
                StateId(self.states.len() - 1)
            }
        }
    }

    pub fn rule(&mut self, from: &str, read: Cell, to: &str, write: Cell, mv: Move) -> &mut Self {
        let from = self.state(from);
        let to = self.state(to);
        self.rules.push(OfRule { from, read, to, write, mv });
        self
    }

    /// Rule that leaves the read cell unchanged.
    pub fn pass(&mut self, from: &str, read: Cell, to: &str, mv: Move) -> &mut Self {
        self.rule(from, read, to, read, mv)
    }

    pub fn accept(&mut self, name: &str) -> &mut Self {
        let q = self.state(name);
        self.accepting.insert(q);
        self
    }

    pub fn build(self, start: &str, alphabet: Alphabet) -> OfMachine {
        let start = StateId(self.states.iter().position(|s| s == start).expect("start state used"));
        OfMachine::new(self.states, start, self.accepting, alphabet, self.rules)
    }
}

/// Syntactic overhead-freeness check; an empty report means well formed.
pub fn validate_machine(m: &OfMachine) -> ValidationReport {
    validate_with(m, &m.input_alphabet)
}

/// Same checks, but writes may use the declared tape alphabet (linear-space machines).
pub fn validate_linear(m: &OfMachine) -> ValidationReport {
    validate_with(m, m.writable())
}

fn validate_with(m: &OfMachine, writable: &Alphabet) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = m.states.len();
    if m.start.0 >= n {
        report.push(ViolationKind::UnknownState, format!("start state #{} undefined", m.start.0));
    }
    for q in &m.accepting {
        if q.0 >= n {
            report.push(ViolationKind::UnknownState, format!("accepting state #{} undefined", q.0));
        }
    }
    let readable = m.tape_alphabet.as_ref().unwrap_or(&m.input_alphabet);
    for (i, r) in m.rules.iter().enumerate() {
        if r.from.0 >= n || r.to.0 >= n {
            report.push(ViolationKind::UnknownState, format!("rule {i} uses an undefined state"));
            continue;
        }
        let name = m.state_name(r.from);
        match (r.read, r.write) {
            (Cell::Sym(s), _) if !readable.contains(s) => report.push(
                ViolationKind::Other,
                format!("rule {i} ({name}) reads {s:?}, which no tape cell can hold"),
            ),
            (Cell::Sym(_), Cell::Sym(w)) if !writable.contains(w) => report.push(
                ViolationKind::OutOfAlphabetWrite,
                format!("rule {i} ({name}) writes {w:?} outside the alphabet"),
            ),
            (Cell::Sym(_), w) if w.is_endmarker() => report.push(
                ViolationKind::OutOfAlphabetWrite,
                format!("rule {i} ({name}) writes an endmarker onto an input cell"),
            ),
            (rd, w) if rd.is_endmarker() && rd != w => report.push(
                ViolationKind::EndmarkerOverwrite,
                format!("rule {i} ({name}) overwrites endmarker {rd}"),
            ),
            _ => {}
        }
        if (r.read == Cell::Left && r.mv == Move::Left) || (r.read == Cell::Right && r.mv == Move::Right)
        {
            report.push(
                ViolationKind::MoveOffEndmarker,
                format!("rule {i} ({name}) moves off endmarker {}", r.read),
            );
        }
    }
    let structural = m.is_structurally_deterministic();
    if m.deterministic && !structural {
        let mut keys: Vec<_> = m.index.iter().filter(|(_, v)| v.len() > 1).map(|(k, _)| *k).collect();
        keys.sort();
        for (q, c) in keys {
            report.push(
                ViolationKind::DeterminismMismatch,
                format!("deterministic flag set but ({}, {c}) has several successors", m.state_name(q)),
            );
        }
    } else if !m.deterministic && structural {
        report.push(
            ViolationKind::DeterminismMismatch,
            "deterministic flag cleared but every key has at most one successor",
        );
    }
    report
}

/// Successor configurations in declaration order; empty means halted.
pub fn step_of<C: OfControl + ?Sized>(m: &C, c: &OfConfig<C::State>) -> Vec<OfConfig<C::State>> {
    OfSim::new(m).branches(c).into_iter().filter_map(Branch::next).collect()
}

pub fn run_of<C: OfControl + ?Sized>(
    m: &C,
    input: &[Sym],
    mode: &Mode,
    budget: Budget,
    trace: bool,
) -> Result<RunResult<OfConfig<C::State>>> {
    machine::run(&OfSim::new(m), input, mode, budget, trace)
}

/// Machine for `{0^n 1^n 0^n | n >= 1}` that never writes anything but 0 and 1.
///
/// After a sweep checks the form `0+1+0+`, each round turns the last 0 of the
/// first block into 1, the last two 1s of the next block into 0s and the last
/// three 0s of the block after that into 1s. The tape keeps the shape
/// `0^a 1^b 0^c 1^d` and the machine accepts once it reads `0 1 0 1*`.
pub fn build_block_language_machine() -> OfMachine {
    use Cell::{Left as L, Right as R};
    use Move::{Left as ML, Right as MR, Stay as MS};
    let (z, o) = (Cell::Sym('0'), Cell::Sym('1'));
    let mut b = OfBuilder::default();
    // form check 0+1+0+
    b.pass("start", L, "c0", MR);
    b.pass("c0", z, "c1", MR);
    b.pass("c1", z, "c1", MR).pass("c1", o, "c2", MR);
    b.pass("c2", o, "c2", MR).pass("c2", z, "c3", MR);
    b.pass("c3", z, "c3", MR).pass("c3", R, "rw_check", ML);
    // rewind, then test for 0101*
    b.pass("rw_check", z, "rw_check", ML).pass("rw_check", o, "rw_check", ML);
    b.pass("rw_check", L, "chk", MR);
    b.pass("chk", z, "a1", MR);
    b.pass("a1", o, "a2", MR).pass("a1", z, "rw_iter", ML);
    b.pass("a2", z, "a3", MR).pass("a2", o, "rw_iter", ML);
    b.pass("a3", o, "a3", MR).pass("a3", z, "rw_iter", ML).pass("a3", R, "acc", MS);
    b.pass("rw_iter", z, "rw_iter", ML).pass("rw_iter", o, "rw_iter", ML);
    b.pass("rw_iter", L, "i1", MR);
    // one round
    b.pass("i1", z, "i2", MR);
    b.pass("i2", z, "i2", MR).pass("i2", o, "i3", ML);
    b.rule("i3", z, "i4", o, MR);
    b.pass("i4", o, "i4", MR).pass("i4", z, "i5", ML);
    b.rule("i5", o, "i6", z, ML);
    b.rule("i6", o, "i7", z, MR);
    b.pass("i7", z, "i7", MR).pass("i7", o, "i8", ML).pass("i7", R, "i8", ML);
    b.rule("i8", z, "i9", o, ML);
    b.rule("i9", z, "i10", o, ML);
    b.rule("i10", z, "rw_check", o, ML);
    b.accept("acc");
    b.build("start", Alphabet::from_chars("01"))
}
