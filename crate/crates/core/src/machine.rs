//! Model-independent simulation: deterministic runs, breadth-first search of
//! the configuration graph, and witness replay.
//!
//! Every model exposes its one-step semantics as an ordered list of
//! [`Branch`]es. The order is the choice-index contract: a [`Witness`] holds
//! one index for every step that offers two or more branches, and nothing for
//! forced steps. Branches that a runtime monitor suppresses stay in the list
//! as [`Branch::Pruned`] so that indices never shift.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::{self, Debug};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::symbol::{Alphabet, Sym};

/// Why a branch was cut off by a runtime monitor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prune {
    /// Two-stack height sum would exceed the input length.
    HeightBound,
    /// Rewrite/restart alternation of a restarting automaton broken.
    Alternation,
    /// Editing-machine configuration weight above the requested bound.
    WeightBound,
    /// A compiled machine ran out of free space.
    OutOfSpace,
    /// Pop on an empty stack, move-right past the right end, and similar.
    IllegalStep,
    /// A generated overhead-free machine tried a write or move its model forbids.
    OverheadViolation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Branch<C> {
    Next(C),
    Pruned(Prune),
}

impl<C> Branch<C> {
    pub fn next(self) -> Option<C> {
        match self {
            Branch::Next(c) => Some(c),
            Branch::Pruned(_) => None,
        }
    }
}

/// A model with a one-step successor relation.
pub trait Machine {
    type Config: Clone + Eq + Hash + Debug;

    fn input_alphabet(&self) -> &Alphabet;
    fn initial(&self, input: &[Sym]) -> Self::Config;
    fn branches(&self, c: &Self::Config) -> Vec<Branch<Self::Config>>;
    fn is_accepting(&self, c: &Self::Config) -> bool;
}

/// Replayable sequence of nondeterministic choice indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness(pub Vec<usize>);

impl Witness {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            let mut column = 1;
            for tok in line.split_whitespace() {
                let idx = tok.parse::<usize>().map_err(|_| Error::Syntax {
                    line: line_no + 1,
                    column,
                    message: format!("expected a choice index, found {tok:?}"),
                })?;
                out.push(idx);
                column += tok.len() + 1;
            }
        }
        Ok(Witness(out))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Deterministic,
    Bfs,
    Witness(Witness),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_steps: u64,
    pub max_configs: u64,
}

impl Budget {
    pub const fn new(max_steps: u64, max_configs: u64) -> Self {
        Budget { max_steps, max_configs }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_steps: 1_000_000, max_configs: 1_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
    BudgetExhausted,
}

/// How many branches each monitor suppressed during a run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PruneStats {
    counts: BTreeMap<Prune, u64>,
}

impl PruneStats {
    pub fn record(&mut self, p: Prune) {
        *self.counts.entry(p).or_default() += 1;
    }

    pub fn get(&self, p: Prune) -> u64 {
        self.counts.get(&p).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Prune, u64)> + '_ {
        self.counts.iter().map(|(k, v)| (*k, *v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep<C> {
    /// Choice index consumed to reach this configuration, if the step was a choice point.
    pub choice: Option<usize>,
    pub config: C,
}

#[derive(Clone, Debug)]
pub struct RunResult<C> {
    pub verdict: Verdict,
    pub steps_used: u64,
    pub configurations_explored: u64,
    /// The followed path (deterministic and witness modes) or the path to the
    /// accepting configuration (breadth-first mode). Only present when requested.
    pub trace: Option<Vec<TraceStep<C>>>,
    /// Choices along the accepting path; set on every accepting run.
    pub witness: Option<Witness>,
    pub pruned: PruneStats,
}

impl<C> RunResult<C> {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }
}

/// Runs `m` on `input`. `trace` requests the configuration path.
pub fn run<M: Machine>(
    m: &M,
    input: &[Sym],
    mode: &Mode,
    budget: Budget,
    trace: bool,
) -> Result<RunResult<M::Config>> {
    m.input_alphabet().check_word(input)?;
    match mode {
        Mode::Bfs => Ok(run_bfs(m, input, budget, trace)),
        Mode::Deterministic => run_path(m, input, None, budget, trace),
        Mode::Witness(w) => run_path(m, input, Some(w), budget, trace),
    }
}

fn run_path<M: Machine>(
    m: &M,
    input: &[Sym],
    witness: Option<&Witness>,
    budget: Budget,
    want_trace: bool,
) -> Result<RunResult<M::Config>> {
    let mut cur = m.initial(input);
    let mut trace = want_trace.then(|| vec![TraceStep { choice: None, config: cur.clone() }]);
    let mut pruned = PruneStats::default();
    let mut used = Vec::new();
    let mut next_choice = 0usize;
    let mut steps = 0u64;
    let finish = |verdict, steps, trace, pruned, used: Vec<usize>| RunResult {
        verdict,
        steps_used: steps,
        configurations_explored: steps + 1,
        trace,
        witness: (verdict == Verdict::Accept).then_some(Witness(used)),
        pruned,
    };
    loop {
        if m.is_accepting(&cur) {
            return Ok(finish(Verdict::Accept, steps, trace, pruned, used));
        }
        if steps >= budget.max_steps {
            return Ok(finish(Verdict::BudgetExhausted, steps, trace, pruned, used));
        }
        let mut branches = m.branches(&cur);
        let (choice, branch) = match branches.len() {
            0 => return Ok(finish(Verdict::Reject, steps, trace, pruned, used)),
            1 => (None, branches.pop().unwrap()),
            n => match witness {
                None => {
                    return Err(Error::NotDeterministic { step: steps as usize, branches: n })
                }
                Some(w) => {
                    let Some(&idx) = w.0.get(next_choice) else {
                        // Witness exhausted at a choice point: the path ends here.
                        return Ok(finish(Verdict::Reject, steps, trace, pruned, used));
                    };
                    if idx >= n {
                        return Err(Error::WitnessIndex {
                            step: steps as usize,
                            index: idx,
                            available: n,
                        });
                    }
                    next_choice += 1;
                    (Some(idx), branches.swap_remove(idx))
                }
            },
        };
        if let Some(i) = choice {
            used.push(i);
        }
        steps += 1;
        match branch {
            Branch::Pruned(p) => {
                pruned.record(p);
                return Ok(finish(Verdict::Reject, steps, trace, pruned, used));
            }
            Branch::Next(c) => {
                if let Some(t) = trace.as_mut() {
                    t.push(TraceStep { choice, config: c.clone() });
                }
                cur = c;
            }
        }
    }
}

struct Node<C> {
    config: C,
    parent: Option<usize>,
    choice: Option<usize>,
}

fn run_bfs<M: Machine>(m: &M, input: &[Sym], budget: Budget, want_trace: bool) -> RunResult<M::Config> {
    let start = m.initial(input);
    let mut nodes = vec![Node { config: start.clone(), parent: None, choice: None }];
    let mut seen: HashMap<M::Config, usize> = HashMap::new();
    seen.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    let mut pruned = PruneStats::default();
    let mut expanded = 0u64;

    let path_result = |nodes: &Vec<Node<M::Config>>, end: usize, expanded, pruned| {
        let mut idxs = vec![end];
        while let Some(p) = nodes[*idxs.last().unwrap()].parent {
            idxs.push(p);
        }
        idxs.reverse();
        let witness = Witness(idxs.iter().filter_map(|&i| nodes[i].choice).collect());
        let trace = want_trace.then(|| {
            idxs.iter()
                .map(|&i| TraceStep { choice: nodes[i].choice, config: nodes[i].config.clone() })
                .collect()
        });
        RunResult {
            verdict: Verdict::Accept,
            steps_used: expanded,
            configurations_explored: nodes.len() as u64,
            trace,
            witness: Some(witness),
            pruned,
        }
    };

    if m.is_accepting(&nodes[0].config) {
        return path_result(&nodes, 0, 0, pruned);
    }
    while let Some(idx) = queue.pop_front() {
        if expanded >= budget.max_steps {
            return RunResult {
                verdict: Verdict::BudgetExhausted,
                steps_used: expanded,
                configurations_explored: nodes.len() as u64,
                trace: None,
                witness: None,
                pruned,
            };
        }
        expanded += 1;
        let branches = m.branches(&nodes[idx].config);
        let is_choice = branches.len() >= 2;
        for (i, b) in branches.into_iter().enumerate() {
            let c = match b {
                Branch::Pruned(p) => {
                    pruned.record(p);
                    continue;
                }
                Branch::Next(c) => c,
            };
            let Entry::Vacant(slot) = seen.entry(c.clone()) else { continue };
            if nodes.len() as u64 >= budget.max_configs {
                return RunResult {
                    verdict: Verdict::BudgetExhausted,
                    steps_used: expanded,
                    configurations_explored: nodes.len() as u64,
                    trace: None,
                    witness: None,
                    pruned,
                };
            }
            let accepting = m.is_accepting(&c);
            slot.insert(nodes.len());
            nodes.push(Node { config: c, parent: Some(idx), choice: is_choice.then_some(i) });
            if accepting {
                let end = nodes.len() - 1;
                return path_result(&nodes, end, expanded, pruned);
            }
            queue.push_back(nodes.len() - 1);
        }
    }
    RunResult {
        verdict: Verdict::Reject,
        steps_used: expanded,
        configurations_explored: nodes.len() as u64,
        trace: None,
        witness: None,
        pruned,
    }
}

/// Calls `visit` on every configuration reachable from the initial one, in
/// breadth-first order. Returns `false` when the budget stopped the search early.
pub fn visit_reachable<M: Machine>(
    m: &M,
    input: &[Sym],
    budget: Budget,
    mut visit: impl FnMut(&M::Config),
) -> bool {
    let start = m.initial(input);
    let mut seen = std::collections::HashSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    let mut expanded = 0u64;
    while let Some(c) = queue.pop_front() {
        visit(&c);
        if expanded >= budget.max_steps {
            return false;
        }
        expanded += 1;
        for b in m.branches(&c) {
            if let Branch::Next(n) = b {
                if seen.len() as u64 >= budget.max_configs && !seen.contains(&n) {
                    return false;
                }
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
    }
    true
}

/// Type-erased view of any machine: enough to decide words.
pub trait Acceptor {
    fn alphabet(&self) -> &Alphabet;
    fn decide(&self, input: &[Sym], mode: &Mode, budget: Budget) -> Result<Verdict>;
}

impl<M: Machine> Acceptor for M {
    fn alphabet(&self) -> &Alphabet {
        self.input_alphabet()
    }

    fn decide(&self, input: &[Sym], mode: &Mode, budget: Budget) -> Result<Verdict> {
        Ok(run(self, input, mode, budget, false)?.verdict)
    }
}

/// Accepted words of length at most `max_len`, in shortlex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Language {
    pub words: Vec<Vec<Sym>>,
    /// Set when some run exhausted its budget; `words` is then a lower bound.
    pub partial: bool,
}

impl Language {
    pub fn strings(&self) -> Vec<String> {
        self.words.iter().map(|w| w.iter().collect()).collect()
    }
}

pub fn enumerate_language(m: &dyn Acceptor, max_len: usize, budget: Budget) -> Result<Language> {
    let mut words = Vec::new();
    let mut partial = false;
    for w in m.alphabet().words_up_to(max_len) {
        match m.decide(&w, &Mode::Bfs, budget)? {
            Verdict::Accept => words.push(w),
            Verdict::Reject => {}
            Verdict::BudgetExhausted => partial = true,
        }
    }
    Ok(Language { words, partial })
}
