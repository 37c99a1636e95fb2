//! Two-stack automata and the overhead-free height monitor.
//!
//! Stacks are stored bottom first, so the top symbol is the last element.
//! An empty stack shows its bottom marker, read here as `None`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Debug};
use std::hash::Hash;

use crate::error::Result;
use crate::machine::{self, Branch, Budget, Machine, Mode, Prune, RunResult};
use crate::of::StateId;
use crate::report::{ValidationReport, ViolationKind};
use crate::symbol::{Alphabet, Sym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StackAction {
    Pop1,
    Pop2,
    Push1(Sym),
    Push2(Sym),
    Noop,
}

impl StackAction {
    /// Change of the total stack height.
    pub fn height_delta(self) -> isize {
        match self {
            StackAction::Pop1 | StackAction::Pop2 => -1,
            StackAction::Push1(_) | StackAction::Push2(_) => 1,
            StackAction::Noop => 0,
        }
    }
}

impl fmt::Display for StackAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StackAction::Pop1 => write!(f, "POP1"),
            StackAction::Pop2 => write!(f, "POP2"),
            StackAction::Push1(s) => write!(f, "PUSH1 {s}"),
            StackAction::Push2(s) => write!(f, "PUSH2 {s}"),
            StackAction::Noop => write!(f, "NOOP"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsAction<S> {
    pub next: S,
    pub action: StackAction,
}

pub trait TwoStackControl {
    type State: Clone + Eq + Hash + Debug;

    fn input_alphabet(&self) -> &Alphabet;
    fn tape_alphabet(&self) -> &Alphabet;
    /// When set, the simulator prunes any step that would raise the total
    /// height above the input length.
    fn overhead_free(&self) -> bool;
    fn start(&self) -> Self::State;
    fn is_accepting(&self, q: &Self::State) -> bool;
    fn delta(&self, q: &Self::State, top1: Option<Sym>, top2: Option<Sym>) -> Vec<Branch<TsAction<Self::State>>>;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TsConfig<S> {
    pub state: S,
    pub stack1: Vec<Sym>,
    pub stack2: Vec<Sym>,
    /// Input length; the overhead-free height bound.
    pub limit: usize,
}

impl<S> TsConfig<S> {
    pub fn height(&self) -> usize {
        self.stack1.len() + self.stack2.len()
    }

    pub fn tops(&self) -> (Option<Sym>, Option<Sym>) {
        (self.stack1.last().copied(), self.stack2.last().copied())
    }
}

/// Renders a stack top first, `_` for the bottom.
pub fn show_stack(s: &[Sym]) -> String {
    let mut out: String = s.iter().rev().collect();
    out.push('_');
    out
}

pub struct TsSim<'a, C: ?Sized> {
    pub control: &'a C,
}

impl<'a, C: TwoStackControl + ?Sized> TsSim<'a, C> {
    pub fn new(control: &'a C) -> Self {
        TsSim { control }
    }

    fn apply(&self, c: &TsConfig<C::State>, act: TsAction<C::State>) -> Branch<TsConfig<C::State>> {
        let mut n = TsConfig { state: act.next, stack1: c.stack1.clone(), stack2: c.stack2.clone(), limit: c.limit };
        let ok = match act.action {
            StackAction::Pop1 => n.stack1.pop().is_some(),
            StackAction::Pop2 => n.stack2.pop().is_some(),
            StackAction::Push1(s) | StackAction::Push2(s) if !self.control.tape_alphabet().contains(s) => false,
            StackAction::Push1(s) => {
                n.stack1.push(s);
                true
            }
            StackAction::Push2(s) => {
                n.stack2.push(s);
                true
            }
            StackAction::Noop => true,
        };
        if !ok {
            return Branch::Pruned(Prune::IllegalStep);
        }
        if self.control.overhead_free() && n.height() > n.limit {
            return Branch::Pruned(Prune::HeightBound);
        }
        Branch::Next(n)
    }
}

impl<C: TwoStackControl + ?Sized> Machine for TsSim<'_, C> {
    type Config = TsConfig<C::State>;

    fn input_alphabet(&self) -> &Alphabet {
        self.control.input_alphabet()
    }

    fn initial(&self, input: &[Sym]) -> Self::Config {
        TsConfig {
            state: self.control.start(),
            stack1: input.iter().rev().copied().collect(),
            stack2: Vec::new(),
            limit: input.len(),
        }
    }

    fn branches(&self, c: &Self::Config) -> Vec<Branch<Self::Config>> {
        let (t1, t2) = c.tops();
        self.control
            .delta(&c.state, t1, t2)
            .into_iter()
            .map(|b| match b {
                Branch::Next(a) => self.apply(c, a),
                Branch::Pruned(p) => Branch::Pruned(p),
            })
            .collect()
    }

    fn is_accepting(&self, c: &Self::Config) -> bool {
        self.control.is_accepting(&c.state)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsRule {
    pub from: StateId,
    pub top1: Option<Sym>,
    pub top2: Option<Sym>,
    pub to: StateId,
    pub action: StackAction,
}

#[derive(Clone, Debug)]
pub struct TwoStackAutomaton {
    pub states: Vec<String>,
    pub start: StateId,
    pub accepting: BTreeSet<StateId>,
    pub input_alphabet: Alphabet,
    pub tape_alphabet: Alphabet,
    pub overhead_free: bool,
    pub deterministic: bool,
    rules: Vec<TsRule>,
    index: HashMap<(StateId, Option<Sym>, Option<Sym>), Vec<usize>>,
}

impl TwoStackAutomaton {
    pub fn new(
        states: Vec<String>,
        start: StateId,
        accepting: BTreeSet<StateId>,
        input_alphabet: Alphabet,
        tape_alphabet: Alphabet,
        rules: Vec<TsRule>,
    ) -> Self {
        let overhead_free = input_alphabet.same_set(&tape_alphabet);
        let mut a = TwoStackAutomaton {
            states,
            start,
            accepting,
            input_alphabet,
            tape_alphabet,
            overhead_free,
            deterministic: false,
            rules: Vec::new(),
            index: HashMap::new(),
        };
        for r in rules {
            a.push_rule(r);
        }
        a.deterministic = a.is_structurally_deterministic();
        a
    }

    pub fn with_overhead_free(mut self, flag: bool) -> Self {
        self.overhead_free = flag;
        self
    }

    pub fn with_deterministic_flag(mut self, flag: bool) -> Self {
        self.deterministic = flag;
        self
    }

    pub fn push_rule(&mut self, r: TsRule) {
        self.index.entry((r.from, r.top1, r.top2)).or_default().push(self.rules.len());
        self.rules.push(r);
    }

    pub fn rules(&self) -> &[TsRule] {
        &self.rules
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
}

impl TwoStackControl for TwoStackAutomaton {
    type State = StateId;

    fn input_alphabet(&self) -> &Alphabet {
        &self.input_alphabet
    }

    fn tape_alphabet(&self) -> &Alphabet {
        &self.tape_alphabet
    }

    fn overhead_free(&self) -> bool {
        self.overhead_free
    }

    fn start(&self) -> StateId {
        self.start
    }

    fn is_accepting(&self, q: &StateId) -> bool {
        self.accepting.contains(q)
    }

    fn delta(&self, q: &StateId, top1: Option<Sym>, top2: Option<Sym>) -> Vec<Branch<TsAction<StateId>>> {
        self.index
            .get(&(*q, top1, top2))
            .into_iter()
            .flatten()
            .map(|&i| {
                let r = &self.rules[i];
                Branch::Next(TsAction { next: r.to, action: r.action })
            })
            .collect()
    }
}

/// A stack-top pattern for [`TsBuilder`]: `Any` expands over Γ and the bottom.
#[derive(Clone, Copy, Debug)]
pub enum Top {
    Bottom,
    Is(Sym),
    Any,
}

pub struct TsBuilder {
    gamma: Alphabet,
    states: Vec<String>,
    rules: Vec<TsRule>,
    accepting: BTreeSet<StateId>,
}

impl TsBuilder {
    pub fn new(gamma: Alphabet) -> Self {
        TsBuilder { gamma, states: Vec::new(), rules: Vec::new(), accepting: BTreeSet::new() }
    }

    pub fn state(&mut self, name: &str) -> StateId {
        match self.states.iter().position(|s| s == name) {
            Some(i) => StateId(i),
            None => {
                self.states.push(name.to_string());
                StateId(self.states.len() - 1)
            }
        }
    }

    fn expand(&self, t: Top) -> Vec<Option<Sym>> {
        match t {
            Top::Bottom => vec![None],
            Top::Is(s) => vec![Some(s)],
            Top::Any => std::iter::once(None).chain(self.gamma.symbols().iter().map(|&s| Some(s))).collect(),
        }
    }

    pub fn rule(&mut self, from: &str, t1: Top, t2: Top, to: &str, action: StackAction) -> &mut Self {
        let from = self.state(from);
        let to = self.state(to);
        for top1 in self.expand(t1) {
            for top2 in self.expand(t2) {
                self.rules.push(TsRule { from, top1, top2, to, action });
            }
        }
        self
    }

    pub fn accept(&mut self, name: &str) -> &mut Self {
        let q = self.state(name);
        self.accepting.insert(q);
        self
    }

    pub fn build(self, start: &str, sigma: Alphabet) -> TwoStackAutomaton {
        let start = StateId(self.states.iter().position(|s| s == start).expect("start state used"));
        TwoStackAutomaton::new(self.states, start, self.accepting, sigma, self.gamma, self.rules)
    }
}

pub fn validate_ts(a: &TwoStackAutomaton) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = a.states.len();
    if a.start.0 >= n {
        report.push(ViolationKind::UnknownState, "start state undefined");
    }
    if !a.input_alphabet.is_subset_of(&a.tape_alphabet) {
        report.push(ViolationKind::TapeAlphabet, "input alphabet is not contained in the tape alphabet");
    }
    if a.overhead_free && !a.input_alphabet.same_set(&a.tape_alphabet) {
        report.push(
            ViolationKind::TapeAlphabet,
            format!("overhead-free flag set but tape alphabet adds {:?}", a.tape_alphabet.minus(&a.input_alphabet)),
        );
    }
    for (i, r) in a.rules.iter().enumerate() {
        if r.from.0 >= n || r.to.0 >= n {
            report.push(ViolationKind::UnknownState, format!("rule {i} uses an undefined state"));
            continue;
        }
        let name = a.state_name(r.from);
        for t in [r.top1, r.top2].into_iter().flatten() {
            if !a.tape_alphabet.contains(t) {
                report.push(ViolationKind::Other, format!("rule {i} ({name}) reads {t:?}, not a stack symbol"));
            }
        }
        match r.action {
            StackAction::Push1(s) | StackAction::Push2(s) if !a.tape_alphabet.contains(s) => report.push(
                ViolationKind::PushOutsideTapeAlphabet,
                format!("rule {i} ({name}) pushes {s:?} outside the tape alphabet"),
            ),
            StackAction::Pop1 if r.top1.is_none() => {
                report.push(ViolationKind::BottomMarker, format!("rule {i} ({name}) pops the bottom of stack 1"))
            }
            StackAction::Pop2 if r.top2.is_none() => {
                report.push(ViolationKind::BottomMarker, format!("rule {i} ({name}) pops the bottom of stack 2"))
            }
            _ => {}
        }
    }
    let structural = a.is_structurally_deterministic();
    if a.deterministic && !structural {
        report.push(ViolationKind::DeterminismMismatch, "deterministic flag set but some key has several successors");
    } else if !a.deterministic && structural {
        report.push(
            ViolationKind::DeterminismMismatch,
            "deterministic flag cleared but every key has at most one successor",
        );
    }
    report
}

pub fn run_ts<C: TwoStackControl + ?Sized>(
    a: &C,
    input: &[Sym],
    mode: &Mode,
    budget: Budget,
    trace: bool,
) -> Result<RunResult<TsConfig<C::State>>> {
    machine::run(&TsSim::new(a), input, mode, budget, trace)
}

/// Palindromes over `sigma`, by shuttling: pop the first symbol, move the
/// rest of stack 1 onto stack 2, compare the last symbol, move everything back.
pub fn build_palindrome_ts_over(sigma: &Alphabet) -> TwoStackAutomaton {
    use StackAction::*;
    let mut b = TsBuilder::new(sigma.clone());
    b.rule("start", Top::Bottom, Top::Bottom, "acc", Noop);
    for &x in sigma.symbols() {
        let m = format!("m_{x}");
        b.rule("start", Top::Is(x), Top::Bottom, &m, Pop1);
        for &y in sigma.symbols() {
            let my = format!("m_{x}_{y}");
            b.rule(&m, Top::Is(y), Top::Any, &my, Pop1);
            b.rule(&my, Top::Any, Top::Any, &m, Push2(y));
        }
        b.rule(&m, Top::Bottom, Top::Bottom, "acc", Noop);
        b.rule(&m, Top::Bottom, Top::Is(x), "back", Pop2);
    }
    for &y in sigma.symbols() {
        let by = format!("back_{y}");
        b.rule("back", Top::Any, Top::Is(y), &by, Pop2);
        b.rule(&by, Top::Any, Top::Any, "back", Push1(y));
    }
    b.rule("back", Top::Any, Top::Bottom, "start", Noop);
    b.accept("acc");
    b.build("start", sigma.clone())
}

pub fn build_palindrome_ts() -> TwoStackAutomaton {
    build_palindrome_ts_over(&Alphabet::from_chars("ab"))
}

/// `{a^(2^n)}`: each round halves stack 1 onto stack 2 and moves it back.
pub fn build_unary_power2_ts() -> TwoStackAutomaton {
    use StackAction::*;
    let a = 'a';
    let mut b = TsBuilder::new(Alphabet::from_chars("a"));
    b.rule("p0", Top::Is(a), Top::Any, "p1", Pop1);
    b.rule("p0", Top::Bottom, Top::Is(a), "mv", Noop);
    b.rule("p1", Top::Is(a), Top::Any, "p2", Pop1);
    b.rule("p1", Top::Bottom, Top::Bottom, "acc", Noop);
    b.rule("p2", Top::Any, Top::Any, "p0", Push2(a));
    b.rule("mv", Top::Any, Top::Is(a), "mv_a", Pop2);
    b.rule("mv_a", Top::Any, Top::Any, "mv", Push1(a));
    b.rule("mv", Top::Any, Top::Bottom, "p0", Noop);
    b.accept("acc");
    b.build("p0", Alphabet::from_chars("a"))
}
