//! RRW restarting automata.
//!
//! The tape `|- w -|` shrinks under rewrites. A window of `k` cells starts
//! at the left endmarker; cells past the right endmarker read as the filler
//! [`WinSym::Beyond`] (token `~`).

use std::collections::HashMap;
use std::fmt;

use crate::error::Result;
use crate::machine::{self, Branch, Budget, Machine, Mode, Prune, RunResult};
use crate::of::StateId;
use crate::report::{ValidationReport, ViolationKind};
use crate::symbol::{Alphabet, Sym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WinSym {
    Left,
    Sym(Sym),
    Right,
    Beyond,
}

impl WinSym {
    pub fn token(self) -> String {
        match self {
            WinSym::Left => "|-".into(),
            WinSym::Right => "-|".into(),
            WinSym::Beyond => "~".into(),
            WinSym::Sym(s) => s.to_string(),
        }
    }

    pub fn sym(self) -> Option<Sym> {
        match self {
            WinSym::Sym(s) => Some(s),
            _ => None,
        }
    }
}

/// Concatenated tokens, e.g. `|-ab-|`.
pub fn show_window(w: &[WinSym]) -> String {
    w.iter().map(|c| c.token()).collect()
}

/// Parses concatenated window tokens.
pub fn parse_window(s: &str) -> Option<Vec<WinSym>> {
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix("|-") {
            out.push(WinSym::Left);
            rest = r;
        } else if let Some(r) = rest.strip_prefix("-|") {
            out.push(WinSym::Right);
            rest = r;
        } else if let Some(r) = rest.strip_prefix('~') {
            out.push(WinSym::Beyond);
            rest = r;
        } else {
            let c = rest.chars().next()?;
            if crate::symbol::RESERVED.contains(&c) {
                return None;
            }
            out.push(WinSym::Sym(c));
            rest = &rest[c.len_utf8()..];
        }
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RrwOp<S> {
    MoveRight(S),
    /// Replacement for the window's cells; endmarkers it covered are repeated.
    Rewrite(S, Vec<WinSym>),
    Restart,
    Accept,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    MayRewrite,
    MustRestart,
    Accepted,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RrwConfig<S> {
    pub state: S,
    pub tape: Vec<Sym>,
    /// Index of the window's leftmost cell in `|- tape -|`.
    pub pos: usize,
    pub phase: Phase,
}

impl<S> RrwConfig<S> {
    pub fn window(&self, k: usize) -> Vec<WinSym> {
        let n = self.tape.len();
        (self.pos..self.pos + k)
            .map(|i| {
                if i == 0 {
                    WinSym::Left
                } else if i <= n {
                    WinSym::Sym(self.tape[i - 1])
                } else if i == n + 1 {
                    WinSym::Right
                } else {
                    WinSym::Beyond
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrwRule {
    pub from: StateId,
    pub window: Vec<WinSym>,
    pub op: RrwOp<StateId>,
}

#[derive(Clone, Debug)]
pub struct RrwAutomaton {
    pub states: Vec<String>,
    pub start: StateId,
    pub window_size: usize,
    pub input_alphabet: Alphabet,
    pub deterministic: bool,
    rules: Vec<RrwRule>,
    index: HashMap<(StateId, Vec<WinSym>), Vec<usize>>,
}

impl RrwAutomaton {
    pub fn new(states: Vec<String>, start: StateId, window_size: usize, input_alphabet: Alphabet, rules: Vec<RrwRule>) -> Self {
        let mut a = RrwAutomaton {
            states,
            start,
            window_size,
            input_alphabet,
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

    pub fn with_deterministic_flag(mut self, flag: bool) -> Self {
        self.deterministic = flag;
        self
    }

    pub fn push_rule(&mut self, r: RrwRule) {
        self.index.entry((r.from, r.window.clone())).or_default().push(self.rules.len());
        self.rules.push(r);
    }

    pub fn rules(&self) -> &[RrwRule] {
        &self.rules
    }

    pub fn ops(&self, q: StateId, window: &[WinSym]) -> Vec<&RrwOp<StateId>> {
        self.index
            .get(&(q, window.to_vec()))
            .into_iter()
            .flatten()
            .map(|&i| &self.rules[i].op)
            .collect()
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

/// Every window content that can occur: `[|-] Σ^j [-| ~*]` of length `k`,
/// where a window without `-|` is full of symbols.
pub fn all_windows(sigma: &Alphabet, k: usize) -> Vec<Vec<WinSym>> {
    let mut out = Vec::new();
    for left in [true, false] {
        let room = k - usize::from(left);
        for j in 0..=room {
            let tails: Vec<Vec<WinSym>> = if j == room {
                vec![vec![]]
            } else {
                let mut t = vec![WinSym::Right];
                t.extend(std::iter::repeat_n(WinSym::Beyond, room - j - 1));
                vec![t]
            };
            if left && k == 0 {
                continue;
            }
            for body in sigma.words_of_len(j) {
                for tail in &tails {
                    let mut w = Vec::with_capacity(k);
                    if left {
                        w.push(WinSym::Left);
                    }
                    w.extend(body.iter().map(|&s| WinSym::Sym(s)));
                    w.extend(tail.iter().copied());
                    out.push(w);
                }
            }
        }
    }
    out
}

fn window_is_well_formed(w: &[WinSym]) -> bool {
    let mut i = 0;
    if w.first() == Some(&WinSym::Left) {
        i = 1;
    }
    while i < w.len() && matches!(w[i], WinSym::Sym(_)) {
        i += 1;
    }
    if i == w.len() {
        return true;
    }
    if w[i] != WinSym::Right {
        return false;
    }
    w[i + 1..].iter().all(|&c| c == WinSym::Beyond)
}

fn sym_count(w: &[WinSym]) -> usize {
    w.iter().filter(|c| matches!(c, WinSym::Sym(_))).count()
}

pub fn validate_rrw(a: &RrwAutomaton) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = a.states.len();
    if a.window_size == 0 {
        report.push(ViolationKind::WindowShape, "window size must be at least 1");
    }
    if a.start.0 >= n {
        report.push(ViolationKind::UnknownState, "start state undefined");
    }
    for (i, r) in a.rules.iter().enumerate() {
        if r.from.0 >= n {
            report.push(ViolationKind::UnknownState, format!("rule {i} uses an undefined state"));
            continue;
        }
        let name = a.state_name(r.from);
        let win = show_window(&r.window);
        if r.window.len() != a.window_size || !window_is_well_formed(&r.window) {
            report.push(ViolationKind::WindowShape, format!("rule {i} ({name}) has malformed window {win}"));
        }
        if let Some(s) = r.window.iter().filter_map(|c| c.sym()).find(|&s| !a.input_alphabet.contains(s)) {
            report.push(ViolationKind::Other, format!("rule {i} ({name}) window uses {s:?} outside the alphabet"));
        }
        match &r.op {
            RrwOp::MoveRight(q) | RrwOp::Rewrite(q, _) if q.0 >= n => {
                report.push(ViolationKind::UnknownState, format!("rule {i} ({name}) targets an undefined state"));
            }
            RrwOp::MoveRight(_) if r.window.first() == Some(&WinSym::Right) => report.push(
                ViolationKind::WindowShape,
                format!("rule {i} ({name}) moves right off the right endmarker"),
            ),
            RrwOp::Rewrite(_, rep) => {
                let rep_text = show_window(rep);
                if sym_count(rep) >= sym_count(&r.window) {
                    report.push(
                        ViolationKind::NonShorteningRewrite,
                        format!("rule {i} ({name}) rewrites {win} to {rep_text}, which is not shorter"),
                    );
                }
                if let Some(s) = rep.iter().filter_map(|c| c.sym()).find(|&s| !a.input_alphabet.contains(s)) {
                    report.push(
                        ViolationKind::OutOfAlphabetWrite,
                        format!("rule {i} ({name}) replacement uses {s:?} outside the alphabet"),
                    );
                }
                let has = |w: &[WinSym], c: WinSym| w.contains(&c);
                let mut expected = Vec::new();
                if has(&r.window, WinSym::Left) {
                    expected.push(WinSym::Left);
                }
                expected.extend(rep.iter().copied().filter(|c| matches!(c, WinSym::Sym(_))));
                if has(&r.window, WinSym::Right) {
                    expected.push(WinSym::Right);
                }
                if &expected != rep {
                    report.push(
                        ViolationKind::EndmarkerNotReproduced,
                        format!("rule {i} ({name}) replacement {rep_text} does not reproduce the endmarkers of {win}"),
                    );
                }
            }
            _ => {}
        }
    }
    let structural = a.is_structurally_deterministic();
    if a.deterministic != structural {
        report.push(
            ViolationKind::DeterminismMismatch,
            format!("deterministic flag is {} but the table says {}", a.deterministic, structural),
        );
    }
    report
}

pub struct RrwSim<'a> {
    pub automaton: &'a RrwAutomaton,
}

impl<'a> RrwSim<'a> {
    pub fn new(automaton: &'a RrwAutomaton) -> Self {
        RrwSim { automaton }
    }

    fn apply(&self, c: &RrwConfig<StateId>, window: &[WinSym], op: &RrwOp<StateId>) -> Branch<RrwConfig<StateId>> {
        let a = self.automaton;
        match op {
            RrwOp::Accept => Branch::Next(RrwConfig { phase: Phase::Accepted, ..c.clone() }),
            RrwOp::MoveRight(q) => {
                if window[0] == WinSym::Right {
                    return Branch::Pruned(Prune::IllegalStep);
                }
                Branch::Next(RrwConfig { state: *q, pos: c.pos + 1, ..c.clone() })
            }
            RrwOp::Restart => {
                if c.phase != Phase::MustRestart {
                    return Branch::Pruned(Prune::Alternation);
                }
                Branch::Next(RrwConfig { state: a.start, tape: c.tape.clone(), pos: 0, phase: Phase::MayRewrite })
            }
            RrwOp::Rewrite(q, rep) => {
                if c.phase != Phase::MayRewrite {
                    return Branch::Pruned(Prune::Alternation);
                }
                let covered = sym_count(window);
                let first = c.pos.max(1) - 1;
                let mut tape = c.tape[..first].to_vec();
                tape.extend(rep.iter().filter_map(|s| s.sym()));
                tape.extend_from_slice(&c.tape[first + covered..]);
                if tape.len() >= c.tape.len() {
                    return Branch::Pruned(Prune::IllegalStep);
                }
                Branch::Next(RrwConfig { state: *q, tape, pos: c.pos, phase: Phase::MustRestart })
            }
        }
    }
}

impl Machine for RrwSim<'_> {
    type Config = RrwConfig<StateId>;

    fn input_alphabet(&self) -> &Alphabet {
        &self.automaton.input_alphabet
    }

    fn initial(&self, input: &[Sym]) -> Self::Config {
        RrwConfig { state: self.automaton.start, tape: input.to_vec(), pos: 0, phase: Phase::MayRewrite }
    }

    fn branches(&self, c: &Self::Config) -> Vec<Branch<Self::Config>> {
        if c.phase == Phase::Accepted {
            return Vec::new();
        }
        let window = c.window(self.automaton.window_size);
        self.automaton
            .ops(c.state, &window)
            .into_iter()
            .map(|op| self.apply(c, &window, op))
            .collect()
    }

    fn is_accepting(&self, c: &Self::Config) -> bool {
        c.phase == Phase::Accepted
    }
}

impl fmt::Display for RrwConfig<StateId> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{} pos={} tape={}", self.state.0, self.pos, crate::symbol::show(&self.tape))
    }
}

pub fn run_rrw(
    a: &RrwAutomaton,
    input: &[Sym],
    mode: &Mode,
    budget: Budget,
    trace: bool,
) -> Result<RunResult<RrwConfig<StateId>>> {
    machine::run(&RrwSim::new(a), input, mode, budget, trace)
}

/// `{a^n b^n | n >= 1}` with window size 4: accept `|-ab-|`, otherwise find
/// the first `aabb`, rewrite it to `ab` and restart.
pub fn build_anbn_rrw() -> RrwAutomaton {
    let sigma = Alphabet::from_chars("ab");
    let (q0, q1) = (StateId(0), StateId(1));
    let w = |s: &str| parse_window(s).expect("window literal");
    let mut rules = Vec::new();
    for win in all_windows(&sigma, 4) {
        let op = if win == w("|-ab-|") {
            RrwOp::Accept
        } else if win == w("aabb") {
            RrwOp::Rewrite(q1, w("ab"))
        } else if win.contains(&WinSym::Right) {
            continue;
        } else {
            RrwOp::MoveRight(q0)
        };
        rules.push(RrwRule { from: q0, window: win, op });
    }
    for win in all_windows(&sigma, 4) {
        rules.push(RrwRule { from: q1, window: win, op: RrwOp::Restart });
    }
    RrwAutomaton::new(vec!["q0".into(), "q1".into()], q0, 4, sigma, rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::Verdict;
    use crate::symbol::word;

    fn verdict(a: &RrwAutomaton, w: &str) -> Verdict {
        run_rrw(a, &word(w), &Mode::Deterministic, Budget::default(), false).unwrap().verdict
    }

    #[test]
    fn window_tokens_round_trip() {
        let w = parse_window("|-ab-|~").unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(show_window(&w), "|-ab-|~");
        assert!(parse_window("a#").is_none());
    }

    #[test]
    fn window_shapes() {
        let ws = all_windows(&Alphabet::from_chars("a"), 2);
        let shown: Vec<String> = ws.iter().map(|w| show_window(w)).collect();
        assert_eq!(shown, vec!["|--|", "|-a", "-|~", "a-|", "aa"]);
    }

    #[test]
    fn anbn_examples() {
        let a = build_anbn_rrw();
        assert!(validate_rrw(&a).is_empty(), "{}", validate_rrw(&a));
        assert_eq!(verdict(&a, "ab"), Verdict::Accept);
        assert_eq!(verdict(&a, "aabb"), Verdict::Accept);
        assert_eq!(verdict(&a, "aaabbb"), Verdict::Accept);
        assert_eq!(verdict(&a, "aab"), Verdict::Reject);
        assert_eq!(verdict(&a, ""), Verdict::Reject);
        assert_eq!(verdict(&a, "abab"), Verdict::Reject);
    }

    #[test]
    fn aabb_rewrites_once_then_restarts() {
        let a = build_anbn_rrw();
        let r = run_rrw(&a, &word("aabb"), &Mode::Deterministic, Budget::default(), true).unwrap();
        let tapes: Vec<String> = r.trace.unwrap().iter().map(|s| crate::symbol::show(&s.config.tape)).collect();
        assert_eq!(tapes, vec!["aabb", "aabb", "ab", "ab", "ab"]);
    }

    #[test]
    fn non_shortening_rewrite_is_reported() {
        let sigma = Alphabet::from_chars("ab");
        let rules = vec![RrwRule {
            from: StateId(0),
            window: parse_window("ab").unwrap(),
            op: RrwOp::Rewrite(StateId(0), parse_window("ba").unwrap()),
        }];
        let a = RrwAutomaton::new(vec!["q".into()], StateId(0), 2, sigma, rules);
        assert_eq!(validate_rrw(&a).count(ViolationKind::NonShorteningRewrite), 1);
    }

    #[test]
    fn dropped_endmarker_is_reported() {
        let sigma = Alphabet::from_chars("ab");
        let rules = vec![RrwRule {
            from: StateId(0),
            window: parse_window("|-ab").unwrap(),
            op: RrwOp::Rewrite(StateId(0), parse_window("a").unwrap()),
        }];
        let a = RrwAutomaton::new(vec!["q".into()], StateId(0), 3, sigma, rules);
        assert_eq!(validate_rrw(&a).count(ViolationKind::EndmarkerNotReproduced), 1);
    }

    #[test]
    fn restart_without_rewrite_is_pruned() {
        let sigma = Alphabet::from_chars("a");
        let rules = vec![RrwRule { from: StateId(0), window: parse_window("|-a").unwrap(), op: RrwOp::Restart }];
        let a = RrwAutomaton::new(vec!["q".into()], StateId(0), 2, sigma, rules);
        let r = run_rrw(&a, &word("a"), &Mode::Bfs, Budget::default(), false).unwrap();
        assert_eq!(r.verdict, Verdict::Reject);
        assert_eq!(r.pruned.get(Prune::Alternation), 1);
    }
}
