//! Context-free membership: grammars, the CYK oracle, the parsing editing
//! machine and its reduction schedule.
pub mod cyk;
pub mod grammar;
pub mod membership;
pub mod schedule;
pub mod tm;

pub use cyk::{cyk_parse, Node, ParseTree};
pub use grammar::{validate_cnf, CnfGrammar, GSym, Production};
pub use membership::{decide_membership, verify_weight_bound, MembershipOptions, MembershipReport, Via, WeightAudit};
pub use schedule::{reduction_order, schedule_reductions, DistanceExcess, Schedule};
pub use tm::{grammar_to_editing_tm, with_empty_word};
