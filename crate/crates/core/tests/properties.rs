use overfree::editing::{apply_effect, config_weight, EditConfig, Effect, WeightTracker};
use overfree::format::{parse_machine_file, print_machine, AnyMachine};
use overfree::machine::visit_reachable;
use overfree::of::{build_block_language_machine, OfMachine, OfRule, OfSim, StateId};
use overfree::symbol::{word, Alphabet, Cell, Move};
use overfree::xlate::{decode_sd, encode_sd};
use overfree::{Budget, Mode};
use proptest::prelude::*;

fn unary_machine() -> impl Strategy<Value = OfMachine> {
    (1usize..5).prop_flat_map(|k| {
        let rule = (0..k, 0..3usize, 0..k, 0..3usize).prop_map(|(from, r, to, m)| {
            let read = [Cell::Left, Cell::Sym('a'), Cell::Right][r];
            let mv = match (read, [Move::Left, Move::Right, Move::Stay][m]) {
                (Cell::Left, Move::Left) | (Cell::Right, Move::Right) => Move::Stay,
                (_, mv) => mv,
            };
            OfRule { from: StateId(from), read, to: StateId(to), write: read, mv }
        });
        (Just(k), prop::collection::vec(rule, 0..12), prop::collection::btree_set(0..k, 0..=k))
    })
    .prop_map(|(k, rules, acc)| {
        OfMachine::new(
            (0..k).map(|i| format!("q{i}")).collect(),
            StateId(0),
            acc.into_iter().map(StateId).collect(),
            Alphabet::from_chars("a"),
            rules,
        )
    })
}

proptest! {
    #[test]
    fn unary_tape_never_changes(m in unary_machine(), n in 0usize..=10) {
        let input = vec!['a'; n];
        let mut changed = 0;
        visit_reachable(&OfSim::new(&m), &input, Budget::default(), |c| changed += usize::from(c.tape != input));
        prop_assert_eq!(changed, 0);
    }

    #[test]
    fn unary_machines_survive_the_text_format(m in unary_machine()) {
        let any = AnyMachine::Of(m);
        let text = print_machine(&any);
        let back = parse_machine_file(&text).unwrap();
        prop_assert_eq!(print_machine(&back), text);
    }

    #[test]
    fn codes_concatenate(a in 0u64..1_000_000, b in 0u64..1_000_000) {
        let mut bits = encode_sd(a);
        let la = bits.len();
        bits.extend(encode_sd(b));
        prop_assert_eq!(decode_sd(&bits).unwrap(), (a, la));
        prop_assert_eq!(decode_sd(&bits[la..]).unwrap(), (b, bits.len() - la));
    }

    #[test]
    fn tracker_matches_recomputation(
        tape in prop::collection::vec(prop::sample::select(vec!['a', 'b', 'X']), 0..16),
        head_seed in 0usize..100,
        ops in prop::collection::vec((0..3usize, 0..3usize, 0..3usize), 1..30),
    ) {
        let sigma = Alphabet::from_chars("ab");
        let gamma = Alphabet::from_chars("abX");
        let head = head_seed % (tape.len() + 2);
        let mut c = EditConfig { state: (), tape, head };
        let mut tr = WeightTracker::new(&c.tape, c.head, &sigma);
        for (kind, s, m) in ops {
            let sym = ['a', 'b', 'X'][s];
            let effect = match kind {
                0 => Effect::Write(match c.read() { Cell::Sym(_) => Cell::Sym(sym), e => e }, [Move::Left, Move::Right, Move::Stay][m]),
                1 => Effect::Insert(sym),
                _ => Effect::Delete,
            };
            let Some(next) = apply_effect(&c, (), effect, &gamma) else { continue };
            match effect {
                Effect::Write(w, mv) => tr.write(w == Cell::Sym('X'), mv),
                Effect::Insert(s) => tr.insert(s == 'X'),
                Effect::Delete => tr.delete(),
            }
            c = next;
            prop_assert!((tr.weight() - config_weight(&c.tape, c.head, &sigma)).abs() < 1e-9);
        }
    }
}

#[test]
fn serialized_block_machine_still_accepts() {
    let text = print_machine(&AnyMachine::Of(build_block_language_machine()));
    let m = parse_machine_file(&text).unwrap();
    let a = m.acceptor();
    assert_eq!(a.decide(&word("010"), &Mode::Deterministic, Budget::default()).unwrap(), overfree::Verdict::Accept);
    assert_eq!(a.decide(&word("0110"), &Mode::Deterministic, Budget::default()).unwrap(), overfree::Verdict::Reject);
}
