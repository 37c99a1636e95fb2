//! Membership through the oracle, the editing machine, or its OF compilation.

use crate::editing::{run_editing, WeightReport};
use crate::error::{Error, Result};
use crate::machine::{Budget, Mode, Verdict, Witness};
use crate::of::run_of;
use crate::symbol::Sym;
use crate::xlate::editing_to_of::{editing_to_of, DEFAULT_SLACK};

use super::cyk::cyk_parse;
use super::grammar::CnfGrammar;
use super::schedule::schedule_reductions;
use super::tm::grammar_to_editing_tm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Via {
    Cyk,
    Editing,
    CompiledOf,
}

#[derive(Clone, Copy, Debug)]
pub struct MembershipOptions {
    pub budget: Budget,
    /// Negative answers are searched for exhaustively up to this length.
    pub bfs_max_len: usize,
    /// Same, for the compiled OF machine.
    pub of_bfs_max_len: usize,
    /// Virtual cells for the OF compilation.
    pub slack: usize,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        MembershipOptions { budget: Budget::default(), bfs_max_len: 6, of_bfs_max_len: 3, slack: DEFAULT_SLACK }
    }
}

#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub verdict: Verdict,
    /// The negative answer comes from the oracle, not from a search.
    pub oracle_negative: bool,
    pub witness: Option<Witness>,
    pub weights: Option<WeightReport>,
    pub steps: u64,
}

impl MembershipReport {
    fn plain(verdict: Verdict) -> Self {
        MembershipReport { verdict, oracle_negative: false, witness: None, weights: None, steps: 0 }
    }
}

pub fn decide_membership(g: &CnfGrammar, word: &[Sym], via: Via, opts: &MembershipOptions) -> Result<MembershipReport> {
    let (member, tree) = cyk_parse(g, word)?;
    let oracle = if member { Verdict::Accept } else { Verdict::Reject };
    if via == Via::Cyk {
        return Ok(MembershipReport::plain(oracle));
    }
    let m = grammar_to_editing_tm(g)?;
    let witness = match &tree {
        Some(t) => Some(schedule_reductions(g, t)?.witness),
        None => None,
    };
    let search_limit = if via == Via::Editing { opts.bfs_max_len } else { opts.of_bfs_max_len };
    if witness.is_none() && word.len() > search_limit {
        return Ok(MembershipReport { oracle_negative: true, ..MembershipReport::plain(Verdict::Reject) });
    }
    let mode = match &witness {
        Some(w) => Mode::Witness(w.clone()),
        None => Mode::Bfs,
    };
    match via {
        Via::Editing => {
            let run = run_editing(&m, word, &mode, opts.budget, None)?;
            Ok(MembershipReport {
                verdict: run.result.verdict,
                oracle_negative: false,
                witness: run.result.witness,
                weights: if witness.is_some() { run.weights } else { None },
                steps: run.result.steps_used,
            })
        }
        Via::CompiledOf | Via::Cyk => {
            let t = editing_to_of(&m, opts.slack)?;
            let run = run_of(&t, word, &mode, opts.budget, false)?;
            Ok(MembershipReport {
                verdict: run.verdict,
                oracle_negative: false,
                witness: run.witness,
                weights: None,
                steps: run.steps_used,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightAudit {
    pub max_weight: f64,
    /// `max_weight - |word|`.
    pub slack: f64,
    pub weights: WeightReport,
}

/// Replays `witness` on the grammar machine and measures configuration weights.
pub fn verify_weight_bound(g: &CnfGrammar, word: &[Sym], witness: &Witness) -> Result<WeightAudit> {
    let m = grammar_to_editing_tm(g)?;
    let run = run_editing(&m, word, &Mode::Witness(witness.clone()), Budget::default(), None)?;
    if run.result.verdict != Verdict::Accept {
        return Err(Error::WitnessRejected(format!("{:?}", run.result.verdict)));
    }
    let weights = run.weights.ok_or_else(|| Error::WitnessRejected("no trace".into()))?;
    Ok(WeightAudit { max_weight: weights.max, slack: weights.max - word.len() as f64, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::word;

    fn ab() -> CnfGrammar {
        CnfGrammar::parse("S -> A B\nA -> 'a'\nB -> 'b'").unwrap()
    }

    fn parens() -> CnfGrammar {
        CnfGrammar::parse("S -> L R\nS -> L T\nS -> S S\nT -> S R\nL -> '('\nR -> ')'").unwrap()
    }

    #[test]
    fn three_routes_agree_on_ab() {
        let o = MembershipOptions::default();
        for w in ["ab", "aa", "ba", "a", ""] {
            let want = decide_membership(&ab(), &word(w), Via::Cyk, &o).unwrap().verdict;
            for via in [Via::Editing, Via::CompiledOf] {
                assert_eq!(decide_membership(&ab(), &word(w), via, &o).unwrap().verdict, want, "{w} {via:?}");
            }
        }
    }

    #[test]
    fn parens_via_editing_is_light() {
        let r = decide_membership(&parens(), &word("()()"), Via::Editing, &MembershipOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Accept);
        let audit = verify_weight_bound(&parens(), &word("()()"), &r.witness.unwrap()).unwrap();
        assert!(audit.slack <= 4.0, "{}", audit.slack);
    }

    #[test]
    fn long_negatives_defer_to_the_oracle() {
        let r = decide_membership(&ab(), &word("abababab"), Via::Editing, &MembershipOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Reject);
        assert!(r.oracle_negative);
    }
}
