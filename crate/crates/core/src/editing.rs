//! Editing Turing machines: one-tape machines that may also insert and
//! delete cells, and the configuration weight that bounds their space.

use std::collections::{BTreeSet, HashMap};

use crate::error::Result;
use crate::machine::{self, Branch, Budget, Machine, Mode, Prune, RunResult, TraceStep};
use crate::of::StateId;
use crate::report::{ValidationReport, ViolationKind};
use crate::symbol::{bordered, Alphabet, Cell, Move, Sym};

/// Tolerance for weight comparisons.
pub const WEIGHT_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Effect {
    Write(Cell, Move),
    Insert(Sym),
    Delete,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdRule {
    pub from: StateId,
    pub read: Cell,
    pub to: StateId,
    pub effect: Effect,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EditConfig<S> {
    pub state: S,
    pub tape: Vec<Sym>,
    /// 0 is the left endmarker, `tape.len() + 1` the right one.
    pub head: usize,
}

impl<S> EditConfig<S> {
    pub fn read(&self) -> Cell {
        bordered(&self.tape, self.head)
    }
}

#[derive(Clone, Debug)]
pub struct EditingTm {
    pub states: Vec<String>,
    pub start: StateId,
    pub accepting: BTreeSet<StateId>,
    pub input_alphabet: Alphabet,
    pub tape_alphabet: Alphabet,
    pub deterministic: bool,
    rules: Vec<EdRule>,
    index: HashMap<(StateId, Cell), Vec<usize>>,
}

impl EditingTm {
    pub fn new(
        states: Vec<String>,
        start: StateId,
        accepting: BTreeSet<StateId>,
        input_alphabet: Alphabet,
        tape_alphabet: Alphabet,
        rules: Vec<EdRule>,
    ) -> Self {
        let mut m = EditingTm {
            states,
            start,
            accepting,
            input_alphabet,
            tape_alphabet,
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

    pub fn with_deterministic_flag(mut self, flag: bool) -> Self {
        self.deterministic = flag;
        self
    }

    pub fn push_rule(&mut self, r: EdRule) {
        self.index.entry((r.from, r.read)).or_default().push(self.rules.len());
        self.rules.push(r);
    }

    pub fn rules(&self) -> &[EdRule] {
        &self.rules
    }

    pub fn rules_for(&self, q: StateId, read: Cell) -> impl Iterator<Item = &EdRule> {
        self.index.get(&(q, read)).into_iter().flatten().map(|&i| &self.rules[i])
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting.contains(&q)
    }

    pub fn is_structurally_deterministic(&self) -> bool {
        self.index.values().all(|v| v.len() <= 1)
    }
}

#[derive(Default)]
pub struct EdBuilder {
    states: Vec<String>,
    rules: Vec<EdRule>,
    accepting: BTreeSet<StateId>,
}

impl EdBuilder {
    pub fn state(&mut self, name: &str) -> StateId {
        match self.states.iter().position(|s| s == name) {
            Some(i) => StateId(i),
            None => {
                self.states.push(name.to_string());
                StateId(self.states.len() - 1)
            }
        }
    }

    pub fn rule(&mut self, from: &str, read: Cell, to: &str, effect: Effect) -> &mut Self {
        let from = self.state(from);
        let to = self.state(to);
        self.rules.push(EdRule { from, read, to, effect });
        self
    }

    pub fn pass(&mut self, from: &str, read: Cell, to: &str, mv: Move) -> &mut Self {
        self.rule(from, read, to, Effect::Write(read, mv))
    }

    pub fn accept(&mut self, name: &str) -> &mut Self {
        let q = self.state(name);
        self.accepting.insert(q);
        self
    }

    pub fn build(self, start: &str, sigma: Alphabet, gamma: Alphabet) -> EditingTm {
        let start = StateId(self.states.iter().position(|s| s == start).expect("start state used"));
        EditingTm::new(self.states, start, self.accepting, sigma, gamma, self.rules)
    }
}

pub fn validate_editing(m: &EditingTm) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = m.states.len();
    if m.start.0 >= n {
        report.push(ViolationKind::UnknownState, "start state undefined");
    }
    if !m.input_alphabet.is_subset_of(&m.tape_alphabet) {
        report.push(ViolationKind::TapeAlphabet, "input alphabet is not contained in the tape alphabet");
    }
    for (i, r) in m.rules.iter().enumerate() {
        if r.from.0 >= n || r.to.0 >= n {
            report.push(ViolationKind::UnknownState, format!("rule {i} uses an undefined state"));
            continue;
        }
        let name = m.state_name(r.from);
        if let Cell::Sym(s) = r.read {
            if !m.tape_alphabet.contains(s) {
                report.push(ViolationKind::Other, format!("rule {i} ({name}) reads {s:?} outside the tape alphabet"));
            }
        }
        match r.effect {
            Effect::Write(w, mv) => {
                match (r.read, w) {
                    (Cell::Sym(_), Cell::Sym(s)) if !m.tape_alphabet.contains(s) => report.push(
                        ViolationKind::OutOfAlphabetWrite,
                        format!("rule {i} ({name}) writes {s:?} outside the tape alphabet"),
                    ),
                    (Cell::Sym(_), Cell::Sym(_)) => {}
                    (rd, w) if rd != w => report.push(
                        ViolationKind::EndmarkerOverwrite,
                        format!("rule {i} ({name}) writes {w} over {rd}"),
                    ),
                    _ => {}
                }
                if (r.read == Cell::Left && mv == Move::Left) || (r.read == Cell::Right && mv == Move::Right) {
                    report.push(ViolationKind::MoveOffEndmarker, format!("rule {i} ({name}) moves off {}", r.read));
                }
            }
            Effect::Insert(s) => {
                if !m.tape_alphabet.contains(s) {
                    report.push(
                        ViolationKind::OutOfAlphabetWrite,
                        format!("rule {i} ({name}) inserts {s:?} outside the tape alphabet"),
                    );
                }
                if r.read == Cell::Left {
                    report.push(ViolationKind::EditOnEndmarker, format!("rule {i} ({name}) inserts on |-"));
                }
            }
            Effect::Delete => {
                if r.read.is_endmarker() {
                    report.push(ViolationKind::EditOnEndmarker, format!("rule {i} ({name}) deletes {}", r.read));
                }
            }
        }
    }
    let structural = m.is_structurally_deterministic();
    if m.deterministic != structural {
        report.push(
            ViolationKind::DeterminismMismatch,
            format!("deterministic flag is {} but the table says {}", m.deterministic, structural),
        );
    }
    report
}

/// Contribution of a noninput symbol at distance `d` from the head.
pub fn mu_far(d: usize) -> f64 {
    if d == 0 {
        1.0
    } else {
        1.0 + 3.0 * (d as f64).log2()
    }
}

/// Sum over tape cells of 1 for input symbols and the head cell, and
/// `1 + 3 log2 |p - i|` for every other noninput symbol.
pub fn config_weight(tape: &[Sym], head: usize, sigma: &Alphabet) -> f64 {
    tape.iter()
        .enumerate()
        .map(|(i, &s)| if sigma.contains(s) { 1.0 } else { mu_far((i + 1).abs_diff(head)) })
        .sum()
}

/// Weight kept up to date from the edits themselves: the tape length plus
/// the excess of the noninput cells, whose positions are tracked directly.
#[derive(Clone, Debug)]
pub struct WeightTracker {
    len: usize,
    head: usize,
    noninput: BTreeSet<usize>,
}

impl WeightTracker {
    pub fn new(tape: &[Sym], head: usize, sigma: &Alphabet) -> Self {
        let noninput = tape.iter().enumerate().filter(|(_, &s)| !sigma.contains(s)).map(|(i, _)| i + 1).collect();
        WeightTracker { len: tape.len(), head, noninput }
    }

    pub fn weight(&self) -> f64 {
        self.len as f64 + self.noninput.iter().map(|&i| mu_far(i.abs_diff(self.head)) - 1.0).sum::<f64>()
    }

    pub fn write(&mut self, noninput: bool, mv: Move) {
        if self.head >= 1 && self.head <= self.len {
            if noninput {
                self.noninput.insert(self.head);
            } else {
                self.noninput.remove(&self.head);
            }
        }
        self.head = (self.head as isize + mv.offset()) as usize;
    }

    pub fn insert(&mut self, noninput: bool) {
        let p = self.head;
        self.noninput = self.noninput.iter().map(|&i| if i >= p { i + 1 } else { i }).collect();
        if noninput {
            self.noninput.insert(p);
        }
        self.len += 1;
    }

    pub fn delete(&mut self) {
        let p = self.head;
        self.noninput = self.noninput.iter().filter(|&&i| i != p).map(|&i| if i > p { i - 1 } else { i }).collect();
        self.len -= 1;
    }
}

/// One step of the model; `None` when the effect is not allowed here.
pub fn apply_effect<S: Clone>(c: &EditConfig<S>, next: S, effect: Effect, gamma: &Alphabet) -> Option<EditConfig<S>> {
    let read = c.read();
    let mut tape = c.tape.clone();
    let head = match effect {
        Effect::Write(w, mv) => {
            match (read, w) {
                (Cell::Sym(_), Cell::Sym(s)) if gamma.contains(s) => tape[c.head - 1] = s,
                (r, w) if r.is_endmarker() && r == w => {}
                _ => return None,
            }
            let h = c.head as isize + mv.offset();
            if h < 0 || h as usize > tape.len() + 1 {
                return None;
            }
            h as usize
        }
        Effect::Insert(s) => {
            if read == Cell::Left || !gamma.contains(s) {
                return None;
            }
            tape.insert(c.head - 1, s);
            c.head
        }
        Effect::Delete => {
            if read.is_endmarker() {
                return None;
            }
            tape.remove(c.head - 1);
            c.head
        }
    };
    Some(EditConfig { state: next, tape, head })
}

pub struct EditSim<'a> {
    pub machine: &'a EditingTm,
    pub weight_bound: Option<f64>,
}

impl Machine for EditSim<'_> {
    type Config = EditConfig<StateId>;

    fn input_alphabet(&self) -> &Alphabet {
        &self.machine.input_alphabet
    }

    fn initial(&self, input: &[Sym]) -> Self::Config {
        EditConfig { state: self.machine.start, tape: input.to_vec(), head: 0 }
    }

    fn branches(&self, c: &Self::Config) -> Vec<Branch<Self::Config>> {
        let m = self.machine;
        m.rules_for(c.state, c.read())
            .map(|r| match apply_effect(c, r.to, r.effect, &m.tape_alphabet) {
                None => Branch::Pruned(Prune::IllegalStep),
                Some(n) => match self.weight_bound {
                    Some(b) if config_weight(&n.tape, n.head, &m.input_alphabet) > b + WEIGHT_EPS => {
                        Branch::Pruned(Prune::WeightBound)
                    }
                    _ => Branch::Next(n),
                },
            })
            .collect()
    }

    fn is_accepting(&self, c: &Self::Config) -> bool {
        self.machine.is_accepting(c.state)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightReport {
    pub per_step: Vec<f64>,
    pub max: f64,
    pub argmax: usize,
}

impl WeightReport {
    pub fn from_trace(trace: &[TraceStep<EditConfig<StateId>>], sigma: &Alphabet) -> Self {
        let per_step: Vec<f64> = trace.iter().map(|s| config_weight(&s.config.tape, s.config.head, sigma)).collect();
        let mut argmax = 0;
        for (i, &w) in per_step.iter().enumerate() {
            if w > per_step[argmax] + WEIGHT_EPS {
                argmax = i;
            }
        }
        let max = per_step.get(argmax).copied().unwrap_or(0.0);
        WeightReport { per_step, max, argmax }
    }
}

pub struct EditRun {
    pub result: RunResult<EditConfig<StateId>>,
    /// Weights along the traced path; absent when no path was reconstructed.
    pub weights: Option<WeightReport>,
}

/// Runs with tracing; branches heavier than `weight_bound` are pruned.
pub fn run_editing(m: &EditingTm, input: &[Sym], mode: &Mode, budget: Budget, weight_bound: Option<f64>) -> Result<EditRun> {
    let result = machine::run(&EditSim { machine: m, weight_bound }, input, mode, budget, true)?;
    let weights = result.trace.as_deref().map(|t| WeightReport::from_trace(t, &m.input_alphabet));
    Ok(EditRun { result, weights })
}

/// Palindromes over {a, b} by deletion: delete the first symbol, walk to
/// the end, delete the matching last symbol, walk back.
pub fn build_palindrome_editing() -> EditingTm {
    use Cell::{Left as L, Right as R};
    let sigma = Alphabet::from_chars("ab");
    let mut b = EdBuilder::default();
    b.pass("start", L, "s", Move::Right);
    b.pass("s", R, "acc", Move::Stay);
    for x in ['a', 'b'] {
        let go = format!("go_{x}");
        let cmp = format!("cmp_{x}");
        b.rule("s", Cell::Sym(x), &go, Effect::Delete);
        for y in ['a', 'b'] {
            b.pass(&go, Cell::Sym(y), &go, Move::Right);
        }
        b.pass(&go, R, &cmp, Move::Left);
        b.rule(&cmp, Cell::Sym(x), "ret", Effect::Delete);
        b.pass(&cmp, L, "acc", Move::Stay);
    }
    b.pass("ret", R, "ret", Move::Left);
    b.pass("ret", Cell::Sym('a'), "ret", Move::Left);
    b.pass("ret", Cell::Sym('b'), "ret", Move::Left);
    b.pass("ret", L, "s", Move::Right);
    b.accept("acc");
    b.build("start", sigma.clone(), sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::Verdict;
    use crate::symbol::word;

    #[test]
    fn weight_examples() {
        let s = Alphabet::from_chars("01");
        assert_eq!(config_weight(&word("0110"), 2, &s), 4.0);
        assert!((config_weight(&word("01A1"), 1, &s) - 7.0).abs() < WEIGHT_EPS);
        assert_eq!(config_weight(&word("A"), 1, &s), 1.0);
    }

    #[test]
    fn palindrome_editing_examples() {
        let m = build_palindrome_editing();
        assert!(validate_editing(&m).is_empty(), "{}", validate_editing(&m));
        let run = |w: &str| run_editing(&m, &word(w), &Mode::Deterministic, Budget::default(), None).unwrap();
        let r = run("abba");
        assert_eq!(r.result.verdict, Verdict::Accept);
        assert_eq!(r.weights.unwrap().max, 4.0);
        assert_eq!(run("aba").result.verdict, Verdict::Accept);
        assert_eq!(run("").result.verdict, Verdict::Accept);
        assert_eq!(run("ab").result.verdict, Verdict::Reject);
    }

    #[test]
    fn insert_keeps_head_on_new_cell() {
        let g = Alphabet::from_chars("abX");
        let c = EditConfig { state: 0, tape: word("ab"), head: 2 };
        let n = apply_effect(&c, 0, Effect::Insert('X'), &g).unwrap();
        assert_eq!(n.tape, word("aXb"));
        assert_eq!(n.head, 2);
        let c = EditConfig { state: 0, tape: word("ab"), head: 3 };
        let n = apply_effect(&c, 0, Effect::Insert('X'), &g).unwrap();
        assert_eq!((n.tape, n.head), (word("abX"), 3));
    }

    #[test]
    fn delete_moves_successor_under_head() {
        let g = Alphabet::from_chars("ab");
        let c = EditConfig { state: 0, tape: word("ab"), head: 1 };
        let n = apply_effect(&c, 0, Effect::Delete, &g).unwrap();
        assert_eq!((n.tape, n.head), (word("b"), 1));
        let c = EditConfig { state: 0, tape: word("a"), head: 1 };
        let n = apply_effect(&c, 0, Effect::Delete, &g).unwrap();
        assert_eq!((n.read(), n.head), (Cell::Right, 1));
        assert!(apply_effect(&n, 0, Effect::Delete, &g).is_none());
    }

    #[test]
    fn tracker_follows_edits() {
        let s = Alphabet::from_chars("ab");
        let g = Alphabet::from_chars("abX");
        let mut c = EditConfig { state: 0, tape: word("aXbXa"), head: 1 };
        let mut t = WeightTracker::new(&c.tape, c.head, &s);
        let steps = [Effect::Insert('X'), Effect::Write(Cell::Sym('X'), Move::Right), Effect::Delete];
        for e in steps {
            let n = apply_effect(&c, 0, e, &g).unwrap();
            match e {
                Effect::Insert(x) => t.insert(!s.contains(x)),
                Effect::Delete => t.delete(),
                Effect::Write(w, mv) => t.write(w.sym().is_some_and(|x| !s.contains(x)), mv),
            }
            c = n;
            assert!((t.weight() - config_weight(&c.tape, c.head, &s)).abs() < WEIGHT_EPS);
        }
    }

    #[test]
    fn edits_on_endmarkers_are_reported() {
        let mut b = EdBuilder::default();
        b.rule("q", Cell::Left, "q", Effect::Insert('a'));
        b.rule("q", Cell::Right, "q", Effect::Delete);
        let s = Alphabet::from_chars("a");
        let m = b.build("q", s.clone(), s);
        assert_eq!(validate_editing(&m).count(ViolationKind::EditOnEndmarker), 2);
    }
}
