//! Bounded language equivalence between two machines of any model.

use std::fmt;

use crate::error::{Error, Result};
use crate::machine::{Acceptor, Budget, Mode, Verdict};
use crate::symbol::{show, Sym};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivVerdict {
    Equivalent,
    /// First shortlex word on which the two definite verdicts differ.
    Counterexample(Vec<Sym>, Verdict, Verdict),
    /// Some run ran out of budget and no counterexample was found.
    Inconclusive(Budget),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivReport {
    pub max_len: usize,
    pub words_checked: usize,
    pub verdict: EquivVerdict,
}

impl fmt::Display for EquivReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            EquivVerdict::Equivalent => {
                write!(f, "equivalent on all {} words of length <= {}", self.words_checked, self.max_len)
            }
            EquivVerdict::Counterexample(w, a, b) => {
                write!(f, "counterexample \"{}\": first {:?}, second {:?}", show(w), a, b)
            }
            EquivVerdict::Inconclusive(b) => write!(
                f,
                "inconclusive up to length {}: budget of {} steps / {} configurations exhausted",
                self.max_len, b.max_steps, b.max_configs
            ),
        }
    }
}

/// Compares both machines on every word up to `max_len`, in shortlex order.
pub fn check_equivalence(m1: &dyn Acceptor, m2: &dyn Acceptor, max_len: usize, budget: Budget) -> Result<EquivReport> {
    if !m1.alphabet().same_set(m2.alphabet()) {
        return Err(Error::AlphabetMismatch(format!(
            "{{{}}} vs {{{}}}",
            show(m1.alphabet().symbols()),
            show(m2.alphabet().symbols())
        )));
    }
    let mut exhausted = false;
    let mut words_checked = 0;
    for w in m1.alphabet().words_up_to(max_len) {
        let v1 = m1.decide(&w, &Mode::Bfs, budget)?;
        let v2 = m2.decide(&w, &Mode::Bfs, budget)?;
        words_checked += 1;
        match (v1, v2) {
            (Verdict::BudgetExhausted, _) | (_, Verdict::BudgetExhausted) => exhausted = true,
            (a, b) if a != b => {
                return Ok(EquivReport { max_len, words_checked, verdict: EquivVerdict::Counterexample(w, a, b) });
            }
            _ => {}
        }
    }
    let verdict = if exhausted { EquivVerdict::Inconclusive(budget) } else { EquivVerdict::Equivalent };
    Ok(EquivReport { max_len, words_checked, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::of::{build_block_language_machine, OfSim};
    use crate::restart::{build_anbn_rrw, RrwSim};
    use crate::symbol::word;
    use crate::twostack::{build_palindrome_ts, build_unary_power2_ts, TsSim};
    use crate::xlate::of_to_twostack;

    #[test]
    fn block_machine_and_its_two_stack_compile() {
        let m = build_block_language_machine();
        let a = of_to_twostack(&m).unwrap();
        let r = check_equivalence(&OfSim::new(&m), &TsSim::new(&a), 8, Budget::default()).unwrap();
        assert_eq!(r.verdict, EquivVerdict::Equivalent);
        assert_eq!(r.words_checked, 511);
    }

    #[test]
    fn palindromes_are_not_anbn() {
        let p = build_palindrome_ts();
        let r = build_anbn_rrw();
        let rep = check_equivalence(&TsSim::new(&p), &RrwSim::new(&r), 4, Budget::default()).unwrap();
        // The empty word is a palindrome and comes first in shortlex order.
        assert_eq!(rep.verdict, EquivVerdict::Counterexample(vec![], Verdict::Accept, Verdict::Reject));
        let b = Budget::default();
        let aa = word("aa");
        assert_eq!(TsSim::new(&p).decide(&aa, &Mode::Bfs, b).unwrap(), Verdict::Accept);
        assert_eq!(RrwSim::new(&r).decide(&aa, &Mode::Bfs, b).unwrap(), Verdict::Reject);
    }

    #[test]
    fn self_equivalence_and_tiny_budget() {
        let m = build_block_language_machine();
        let s = OfSim::new(&m);
        assert_eq!(check_equivalence(&s, &s, 5, Budget::default()).unwrap().verdict, EquivVerdict::Equivalent);
        let tiny = Budget::new(3, 3);
        assert_eq!(check_equivalence(&s, &s, 5, tiny).unwrap().verdict, EquivVerdict::Inconclusive(tiny));
    }

    #[test]
    fn alphabets_must_match() {
        let p = build_palindrome_ts();
        let u = build_unary_power2_ts();
        assert!(matches!(
            check_equivalence(&TsSim::new(&p), &TsSim::new(&u), 2, Budget::default()),
            Err(Error::AlphabetMismatch(_))
        ));
    }
}
