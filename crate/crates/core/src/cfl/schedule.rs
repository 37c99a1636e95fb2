//! Reduction order for a parse tree and the witness that realizes it.
//!
//! Children are reduced one after the other, the one with more leaves
//! first and the left one on ties. The witness is produced by driving the
//! grammar machine step by step and recording the index of the rule taken
//! wherever more than one applies.

use crate::editing::{apply_effect, EditConfig, Effect, EditingTm};
use crate::error::{Error, Result};
use crate::machine::Witness;
use crate::of::StateId;
use crate::symbol::Sym;

use super::cyk::ParseTree;
use super::grammar::{CnfGrammar, Rhs};
use super::tm::{grammar_to_editing_tm, insert_state, search_state, second_state, CHECK, MAIN};

/// Node indices in reduction order (postorder, larger child first).
pub fn reduction_order(tree: &ParseTree) -> Vec<usize> {
    fn visit(t: &ParseTree, i: usize, out: &mut Vec<usize>) {
        if let Some((y, z)) = t.nodes[i].children {
            if t.nodes[y].leaves() >= t.nodes[z].leaves() {
                visit(t, y, out);
                visit(t, z, out);
            } else {
                visit(t, z, out);
                visit(t, y, out);
            }
        }
        out.push(i);
    }
    let mut out = Vec::new();
    visit(tree, tree.root, &mut out);
    out
}

/// One head-distance excess: a nonterminal farther from the head than its leaf count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceExcess {
    pub step: usize,
    pub node: usize,
    pub distance: usize,
    pub leaves: usize,
}

#[derive(Clone, Debug)]
pub struct Schedule {
    pub order: Vec<usize>,
    pub witness: Witness,
    /// Configurations along the scheduled run, starting with the initial one.
    pub configs: Vec<EditConfig<StateId>>,
    pub excesses: Vec<DistanceExcess>,
}

struct Driver<'a> {
    m: &'a EditingTm,
    tree: &'a ParseTree,
    cfg: EditConfig<StateId>,
    /// Tree node for each tape cell, and whether it has been reduced.
    cells: Vec<(usize, bool)>,
    witness: Vec<usize>,
    configs: Vec<EditConfig<StateId>>,
    excesses: Vec<DistanceExcess>,
}

impl Driver<'_> {
    fn state(&self, name: &str) -> StateId {
        self.m.state_id(name).expect("state of the grammar machine")
    }

    /// Takes the rule picked by `pick` among those applicable now.
    fn step(&mut self, pick: impl Fn(StateId, Effect) -> bool) -> Result<()> {
        let rules: Vec<_> = self.m.rules_for(self.cfg.state, self.cfg.read()).collect();
        let Some(i) = rules.iter().position(|r| pick(r.to, r.effect)) else {
            return Err(Error::Precondition(format!(
                "no rule to follow in state {} reading {}",
                self.m.state_name(self.cfg.state),
                self.cfg.read().token()
            )));
        };
        if rules.len() > 1 {
            self.witness.push(i);
        }
        let r = rules[i];
        let at = self.cfg.head.wrapping_sub(1);
        let next = apply_effect(&self.cfg, r.to, r.effect, &self.m.tape_alphabet)
            .ok_or_else(|| Error::Precondition("scheduled step is not allowed".into()))?;
        match r.effect {
            Effect::Delete => {
                self.cells.remove(at);
            }
            Effect::Insert(_) => self.cells.insert(at, (usize::MAX, true)),
            Effect::Write(..) => {}
        }
        self.cfg = next;
        self.configs.push(self.cfg.clone());
        self.audit();
        Ok(())
    }

    fn audit(&mut self) {
        let step = self.configs.len() - 1;
        for (j, &(node, reduced)) in self.cells.iter().enumerate() {
            if !reduced || node == usize::MAX {
                continue;
            }
            let distance = (j + 1).abs_diff(self.cfg.head);
            let leaves = self.tree.nodes[node].leaves();
            if distance > leaves {
                self.excesses.push(DistanceExcess { step, node, distance, leaves });
            }
        }
    }

    fn reduce(&mut self, r: usize, rhs: Rhs) -> Result<()> {
        let node = &self.tree.nodes[r];
        let p = node.prod;
        let first = match node.children {
            Some((y, _)) => self.cells.iter().position(|&c| c == (y, true)),
            None => self.cells.iter().position(|&c| c == (r, false)),
        }
        .ok_or_else(|| Error::Precondition("reduction target not on the tape".into()))?;
        let target = first + 1;
        let right = target >= self.cfg.head;
        let search = self.state(&search_state(p, right));
        self.step(|to, _| to == search)?;
        while self.cfg.head != target {
            self.step(|to, e| to == search && matches!(e, Effect::Write(..)))?;
        }
        self.step(|_, e| e == Effect::Delete)?;
        if let Rhs::Pair(..) = rhs {
            let put = self.state(&insert_state(p));
            debug_assert_eq!(self.cfg.state, self.state(&second_state(p)));
            self.step(|to, _| to == put)?;
        }
        let main = self.state(MAIN);
        self.step(|to, _| to == main)?;
        self.cells[self.cfg.head - 1] = (r, true);
        self.audit();
        Ok(())
    }
}

/// Witness driving the grammar machine along `tree` to acceptance.
pub fn schedule_reductions(g: &CnfGrammar, tree: &ParseTree) -> Result<Schedule> {
    let m = grammar_to_editing_tm(g)?;
    schedule_on(&m, g, tree)
}

pub(crate) fn schedule_on(m: &EditingTm, g: &CnfGrammar, tree: &ParseTree) -> Result<Schedule> {
    let ix = g.indexed()?;
    let root = tree.nodes.get(tree.root).ok_or_else(|| Error::Precondition("empty parse tree".into()))?;
    let n = root.span.1;
    let mut leaves: Vec<Option<(usize, Sym)>> = vec![None; n];
    for (i, node) in tree.nodes.iter().enumerate() {
        if let (None, Some(&(_, Rhs::Term(a)))) = (node.children, ix.prods.get(node.prod)) {
            if node.span.0 < n {
                leaves[node.span.0] = Some((i, a));
            }
        }
    }
    let leaves: Vec<(usize, Sym)> =
        leaves.into_iter().collect::<Option<_>>().ok_or_else(|| Error::Precondition("tree has a gap".into()))?;
    let word: Vec<Sym> = leaves.iter().map(|l| l.1).collect();
    tree.check(&ix, &word)?;

    let start = EditConfig { state: m.start, tape: word.clone(), head: 0 };
    let mut d = Driver {
        m,
        tree,
        cfg: start.clone(),
        cells: leaves.iter().map(|&(i, _)| (i, false)).collect(),
        witness: Vec::new(),
        configs: vec![start],
        excesses: Vec::new(),
    };
    let main = d.state(MAIN);
    d.step(|to, _| to == main)?;
    let order = reduction_order(tree);
    for &r in &order {
        d.reduce(r, ix.prods[tree.nodes[r].prod].1)?;
    }
    let check = d.state(CHECK);
    d.step(|to, _| to == check)?;
    while !m.is_accepting(d.cfg.state) {
        d.step(|_, _| true)?;
    }
    Ok(Schedule { order, witness: Witness(d.witness), configs: d.configs, excesses: d.excesses })
}
