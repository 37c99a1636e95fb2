//! Line-oriented text format shared by all machine models.
//!
//! ```text
//! model: of-tm
//! input_alphabet: 0 1
//! states: q0 q1 acc
//! start: q0
//! accept: acc
//! q0 |- -> q1 |- R
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::editing::{validate_editing, EditSim, EdRule, Effect, EditingTm};
use crate::error::{Error, Result};
use crate::machine::Acceptor;
use crate::of::{validate_linear, validate_machine, OfMachine, OfRule, OfSim, StateId};
use crate::restart::{parse_window, show_window, validate_rrw, RrwAutomaton, RrwOp, RrwRule, RrwSim};
use crate::symbol::{Alphabet, Cell, Move, Sym};
use crate::twostack::{validate_ts, StackAction, TsRule, TsSim, TwoStackAutomaton};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    OfTm,
    TwoStack,
    Rrw,
    Editing,
}

impl Model {
    pub fn tag(self) -> &'static str {
        match self {
            Model::OfTm => "of-tm",
            Model::TwoStack => "two-stack",
            Model::Rrw => "rrw",
            Model::Editing => "editing",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        [Model::OfTm, Model::TwoStack, Model::Rrw, Model::Editing].into_iter().find(|m| m.tag() == s)
    }
}

#[derive(Clone, Debug)]
pub enum AnyMachine {
    Of(OfMachine),
    TwoStack(TwoStackAutomaton),
    Rrw(RrwAutomaton),
    Editing(EditingTm),
}

impl AnyMachine {
    pub fn model(&self) -> Model {
        match self {
            AnyMachine::Of(_) => Model::OfTm,
            AnyMachine::TwoStack(_) => Model::TwoStack,
            AnyMachine::Rrw(_) => Model::Rrw,
            AnyMachine::Editing(_) => Model::Editing,
        }
    }

    /// Runs on the model's own simulator.
    pub fn acceptor(&self) -> Box<dyn Acceptor + '_> {
        match self {
            AnyMachine::Of(m) => Box::new(OfSim::new(m)),
            AnyMachine::TwoStack(a) => Box::new(TsSim::new(a)),
            AnyMachine::Rrw(a) => Box::new(RrwSim::new(a)),
            AnyMachine::Editing(m) => Box::new(EditSim { machine: m, weight_bound: None }),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        match self {
            AnyMachine::Of(m) => m.deterministic,
            AnyMachine::TwoStack(a) => a.deterministic,
            AnyMachine::Rrw(a) => a.deterministic,
            AnyMachine::Editing(m) => m.deterministic,
        }
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        match self {
            AnyMachine::Of(m) => &m.input_alphabet,
            AnyMachine::TwoStack(m) => &m.input_alphabet,
            AnyMachine::Rrw(m) => &m.input_alphabet,
            AnyMachine::Editing(m) => &m.input_alphabet,
        }
    }
}

#[derive(Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Tok { text: &line[s..i], col: line[..s].chars().count() + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

struct Ctx {
    line: usize,
}

impl Ctx {
    fn err(&self, col: usize, message: impl Into<String>) -> Error {
        Error::Syntax { line: self.line, column: col, message: message.into() }
    }
}

#[derive(Default)]
struct Header {
    model: Option<Model>,
    sigma: Option<Alphabet>,
    gamma: Option<Alphabet>,
    overhead_free: Option<bool>,
    states: Vec<String>,
    start: Option<String>,
    accept: Vec<String>,
    window: Option<usize>,
}

fn alphabet(ctx: &Ctx, toks: &[Tok<'_>]) -> Result<Alphabet> {
    let mut syms = Vec::new();
    for t in toks {
        let mut cs = t.text.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) => syms.push(c),
            _ => return Err(ctx.err(t.col, format!("symbol `{}` is not a single character", t.text))),
        }
    }
    Alphabet::new(syms).map_err(|e| ctx.err(toks.first().map_or(1, |t| t.col), e.to_string()))
}

fn cell(ctx: &Ctx, t: Tok<'_>) -> Result<Cell> {
    match t.text {
        "|-" => Ok(Cell::Left),
        "-|" => Ok(Cell::Right),
        s => {
            let mut cs = s.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) => Ok(Cell::Sym(c)),
                _ => Err(ctx.err(t.col, format!("`{s}` is not a symbol or endmarker"))),
            }
        }
    }
}

fn sym(ctx: &Ctx, t: Tok<'_>) -> Result<Sym> {
    match cell(ctx, t)? {
        Cell::Sym(s) => Ok(s),
        _ => Err(ctx.err(t.col, "endmarker where a symbol is required")),
    }
}

fn top(ctx: &Ctx, t: Tok<'_>) -> Result<Option<Sym>> {
    if t.text == "_" {
        Ok(None)
    } else {
        sym(ctx, t).map(Some)
    }
}

fn mv(ctx: &Ctx, t: Tok<'_>) -> Result<Move> {
    match t.text {
        "L" => Ok(Move::Left),
        "R" => Ok(Move::Right),
        "S" => Ok(Move::Stay),
        s => Err(ctx.err(t.col, format!("unknown move `{s}`"))),
    }
}

fn state(ctx: &Ctx, h: &Header, t: Tok<'_>) -> Result<StateId> {
    h.states
        .iter()
        .position(|s| s == t.text)
        .map(StateId)
        .ok_or_else(|| ctx.err(t.col, format!("undeclared state `{}`", t.text)))
}

fn expect_len(ctx: &Ctx, toks: &[Tok<'_>], n: usize) -> Result<()> {
    if toks.len() == n {
        Ok(())
    } else {
        let col = toks.get(n).or(toks.last()).map_or(1, |t| t.col);
        Err(ctx.err(col, format!("expected {n} fields, found {}", toks.len())))
    }
}

enum Rules {
    Of(Vec<OfRule>),
    Ts(Vec<TsRule>),
    Rrw(Vec<RrwRule>),
    Ed(Vec<EdRule>),
}

/// Parses and validates a machine file.
pub fn parse_machine_file(text: &str) -> Result<AnyMachine> {
    let mut h = Header::default();
    let mut rules: Option<Rules> = None;
    for (ln, raw) in text.lines().enumerate() {
        let ctx = Ctx { line: ln + 1 };
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(first) = toks.first().copied() else { continue };
        if let Some(key) = first.text.strip_suffix(':') {
            if rules.is_some() {
                return Err(ctx.err(first.col, "header line after the first transition"));
            }
            let rest = &toks[1..];
            match key {
                "model" => {
                    expect_len(&ctx, rest, 1)?;
                    h.model = Some(Model::from_tag(rest[0].text).ok_or_else(|| ctx.err(rest[0].col, "unknown model"))?);
                }
                "input_alphabet" => h.sigma = Some(alphabet(&ctx, rest)?),
                "tape_alphabet" => h.gamma = Some(alphabet(&ctx, rest)?),
                "overhead_free" => {
                    expect_len(&ctx, rest, 1)?;
                    h.overhead_free = Some(match rest[0].text {
                        "true" => true,
                        "false" => false,
                        _ => return Err(ctx.err(rest[0].col, "expected true or false")),
                    });
                }
                "states" => h.states = rest.iter().map(|t| t.text.to_string()).collect(),
                "start" => {
                    expect_len(&ctx, rest, 1)?;
                    h.start = Some(rest[0].text.to_string());
                }
                "accept" => h.accept = rest.iter().map(|t| t.text.to_string()).collect(),
                "window" => {
                    expect_len(&ctx, rest, 1)?;
                    h.window = Some(rest[0].text.parse().map_err(|_| ctx.err(rest[0].col, "window must be a number"))?);
                }
                _ => return Err(ctx.err(first.col, format!("unknown header `{key}`"))),
            }
            continue;
        }
        let model = h.model.ok_or_else(|| ctx.err(first.col, "transition before `model:`"))?;
        let rs = rules.get_or_insert_with(|| match model {
            Model::OfTm => Rules::Of(Vec::new()),
            Model::TwoStack => Rules::Ts(Vec::new()),
            Model::Rrw => Rules::Rrw(Vec::new()),
            Model::Editing => Rules::Ed(Vec::new()),
        });
        let arrow = toks.iter().position(|t| t.text == "->").ok_or_else(|| ctx.err(first.col, "expected `->`"))?;
        let (lhs, rhs) = (&toks[..arrow], &toks[arrow + 1..]);
        let from = state(&ctx, &h, lhs[0])?;
        match rs {
            Rules::Of(v) => {
                expect_len(&ctx, lhs, 2)?;
                expect_len(&ctx, rhs, 3)?;
                v.push(OfRule {
                    from,
                    read: cell(&ctx, lhs[1])?,
                    to: state(&ctx, &h, rhs[0])?,
                    write: cell(&ctx, rhs[1])?,
                    mv: mv(&ctx, rhs[2])?,
                });
            }
            Rules::Ts(v) => {
                expect_len(&ctx, lhs, 3)?;
                let to = state(&ctx, &h, *rhs.first().ok_or_else(|| ctx.err(toks[arrow].col, "missing target"))?)?;
                let op = rhs.get(1).ok_or_else(|| ctx.err(toks[arrow].col, "missing action"))?;
                let action = match op.text {
                    "POP1" | "POP2" | "NOOP" => {
                        expect_len(&ctx, rhs, 2)?;
                        match op.text {
                            "POP1" => StackAction::Pop1,
                            "POP2" => StackAction::Pop2,
                            _ => StackAction::Noop,
                        }
                    }
                    "PUSH1" | "PUSH2" => {
                        expect_len(&ctx, rhs, 3)?;
                        let s = sym(&ctx, rhs[2])?;
                        if op.text == "PUSH1" {
                            StackAction::Push1(s)
                        } else {
                            StackAction::Push2(s)
                        }
                    }
                    other => return Err(ctx.err(op.col, format!("unknown stack action `{other}`"))),
                };
                v.push(TsRule { from, top1: top(&ctx, lhs[1])?, top2: top(&ctx, lhs[2])?, to, action });
            }
            Rules::Rrw(v) => {
                expect_len(&ctx, lhs, 2)?;
                let window = parse_window(lhs[1].text).ok_or_else(|| ctx.err(lhs[1].col, "bad window"))?;
                let op = rhs.first().ok_or_else(|| ctx.err(toks[arrow].col, "missing operation"))?;
                let op = match op.text {
                    "MR" => {
                        expect_len(&ctx, rhs, 2)?;
                        RrwOp::MoveRight(state(&ctx, &h, rhs[1])?)
                    }
                    "RW" => {
                        if rhs.len() != 2 && rhs.len() != 3 {
                            return Err(ctx.err(op.col, "expected `RW state [replacement]`"));
                        }
                        let rep = match rhs.get(2) {
                            Some(t) => parse_window(t.text).ok_or_else(|| ctx.err(t.col, "bad replacement"))?,
                            None => Vec::new(),
                        };
                        RrwOp::Rewrite(state(&ctx, &h, rhs[1])?, rep)
                    }
                    "RESTART" => {
                        expect_len(&ctx, rhs, 1)?;
                        RrwOp::Restart
                    }
                    "ACCEPT" => {
                        expect_len(&ctx, rhs, 1)?;
                        RrwOp::Accept
                    }
                    other => return Err(ctx.err(op.col, format!("unknown operation `{other}`"))),
                };
                v.push(RrwRule { from, window, op });
            }
            Rules::Ed(v) => {
                expect_len(&ctx, lhs, 2)?;
                let to = state(&ctx, &h, *rhs.first().ok_or_else(|| ctx.err(toks[arrow].col, "missing target"))?)?;
                let kind = rhs.get(1).ok_or_else(|| ctx.err(toks[arrow].col, "missing operation"))?;
                let effect = match kind.text {
                    "W" => {
                        expect_len(&ctx, rhs, 4)?;
                        Effect::Write(cell(&ctx, rhs[2])?, mv(&ctx, rhs[3])?)
                    }
                    "I" => {
                        expect_len(&ctx, rhs, 3)?;
                        Effect::Insert(sym(&ctx, rhs[2])?)
                    }
                    "D" => {
                        expect_len(&ctx, rhs, 2)?;
                        Effect::Delete
                    }
                    other => return Err(ctx.err(kind.col, format!("unknown edit `{other}`"))),
                };
                v.push(EdRule { from, read: cell(&ctx, lhs[1])?, to, effect });
            }
        }
    }
    let end = Ctx { line: text.lines().count().max(1) };
    let model = h.model.ok_or_else(|| end.err(1, "missing `model:`"))?;
    let sigma = h.sigma.clone().ok_or_else(|| end.err(1, "missing `input_alphabet:`"))?;
    let start_name = h.start.clone().ok_or_else(|| end.err(1, "missing `start:`"))?;
    let start = StateId(h.states.iter().position(|s| *s == start_name).ok_or_else(|| end.err(1, "start state is not declared"))?);
    let mut accepting = BTreeSet::new();
    for a in &h.accept {
        let i = h.states.iter().position(|s| s == a).ok_or_else(|| end.err(1, format!("accepting state `{a}` is not declared")))?;
        accepting.insert(StateId(i));
    }
    let states = h.states.clone();
    let m = match (model, rules) {
        (Model::OfTm, r) => {
            let rules = if let Some(Rules::Of(v)) = r { v } else { Vec::new() };
            let mut m = OfMachine::new(states, start, accepting, sigma, rules);
            if let Some(g) = h.gamma {
                m = m.with_tape_alphabet(g);
                validate_linear(&m).into_result()?;
            } else {
                validate_machine(&m).into_result()?;
            }
            AnyMachine::Of(m)
        }
        (Model::TwoStack, r) => {
            let rules = if let Some(Rules::Ts(v)) = r { v } else { Vec::new() };
            let gamma = h.gamma.unwrap_or_else(|| sigma.clone());
            let mut a = TwoStackAutomaton::new(states, start, accepting, sigma, gamma, rules);
            if let Some(f) = h.overhead_free {
                a = a.with_overhead_free(f);
            }
            validate_ts(&a).into_result()?;
            AnyMachine::TwoStack(a)
        }
        (Model::Rrw, r) => {
            let rules = if let Some(Rules::Rrw(v)) = r { v } else { Vec::new() };
            let k = h.window.ok_or_else(|| end.err(1, "missing `window:`"))?;
            let a = RrwAutomaton::new(states, start, k, sigma, rules);
            validate_rrw(&a).into_result()?;
            AnyMachine::Rrw(a)
        }
        (Model::Editing, r) => {
            let rules = if let Some(Rules::Ed(v)) = r { v } else { Vec::new() };
            let gamma = h.gamma.ok_or_else(|| end.err(1, "missing `tape_alphabet:`"))?;
            let m = EditingTm::new(states, start, accepting, sigma, gamma, rules);
            validate_editing(&m).into_result()?;
            AnyMachine::Editing(m)
        }
    };
    Ok(m)
}

fn join_syms(a: &Alphabet) -> String {
    a.symbols().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

fn header(out: &mut String, model: Model, sigma: &Alphabet, states: &[String], start: StateId) {
    let _ = writeln!(out, "model: {}", model.tag());
    let _ = writeln!(out, "input_alphabet: {}", join_syms(sigma));
    let _ = writeln!(out, "states: {}", states.join(" "));
    let _ = writeln!(out, "start: {}", states[start.0]);
}

fn accept_line(out: &mut String, states: &[String], acc: &BTreeSet<StateId>) {
    let names: Vec<&str> = acc.iter().map(|q| states[q.0].as_str()).collect();
    let _ = writeln!(out, "accept: {}", names.join(" "));
}

fn top_token(t: Option<Sym>) -> String {
    t.map_or_else(|| "_".to_string(), |s| s.to_string())
}

pub fn print_machine(m: &AnyMachine) -> String {
    let mut out = String::new();
    match m {
        AnyMachine::Of(m) => {
            header(&mut out, Model::OfTm, &m.input_alphabet, &m.states, m.start);
            if let Some(g) = &m.tape_alphabet {
                let _ = writeln!(out, "tape_alphabet: {}", join_syms(g));
            }
            accept_line(&mut out, &m.states, &m.accepting);
            for r in m.rules() {
                let _ = writeln!(
                    out,
                    "{} {} -> {} {} {}",
                    m.states[r.from.0],
                    r.read,
                    m.states[r.to.0],
                    r.write,
                    r.mv.token()
                );
            }
        }
        AnyMachine::TwoStack(a) => {
            header(&mut out, Model::TwoStack, &a.input_alphabet, &a.states, a.start);
            let _ = writeln!(out, "tape_alphabet: {}", join_syms(&a.tape_alphabet));
            let _ = writeln!(out, "overhead_free: {}", a.overhead_free);
            accept_line(&mut out, &a.states, &a.accepting);
            for r in a.rules() {
                let action = match r.action {
                    StackAction::Pop1 => "POP1".to_string(),
                    StackAction::Pop2 => "POP2".to_string(),
                    StackAction::Push1(s) => format!("PUSH1 {s}"),
                    StackAction::Push2(s) => format!("PUSH2 {s}"),
                    StackAction::Noop => "NOOP".to_string(),
                };
                let _ = writeln!(
                    out,
                    "{} {} {} -> {} {}",
                    a.states[r.from.0],
                    top_token(r.top1),
                    top_token(r.top2),
                    a.states[r.to.0],
                    action
                );
            }
        }
        AnyMachine::Rrw(a) => {
            header(&mut out, Model::Rrw, &a.input_alphabet, &a.states, a.start);
            let _ = writeln!(out, "window: {}", a.window_size);
            for r in a.rules() {
                let op = match &r.op {
                    RrwOp::MoveRight(q) => format!("MR {}", a.states[q.0]),
                    RrwOp::Rewrite(q, rep) if rep.is_empty() => format!("RW {}", a.states[q.0]),
                    RrwOp::Rewrite(q, rep) => format!("RW {} {}", a.states[q.0], show_window(rep)),
                    RrwOp::Restart => "RESTART".into(),
                    RrwOp::Accept => "ACCEPT".into(),
                };
                let _ = writeln!(out, "{} {} -> {}", a.states[r.from.0], show_window(&r.window), op);
            }
        }
        AnyMachine::Editing(m) => {
            header(&mut out, Model::Editing, &m.input_alphabet, &m.states, m.start);
            let _ = writeln!(out, "tape_alphabet: {}", join_syms(&m.tape_alphabet));
            accept_line(&mut out, &m.states, &m.accepting);
            for r in m.rules() {
                let eff = match r.effect {
                    Effect::Write(w, mv) => format!("W {} {}", w, mv.token()),
                    Effect::Insert(s) => format!("I {s}"),
                    Effect::Delete => "D".into(),
                };
                let _ = writeln!(out, "{} {} -> {} {}", m.states[r.from.0], r.read, m.states[r.to.0], eff);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::editing::build_palindrome_editing;
    use crate::of::build_block_language_machine;
    use crate::restart::build_anbn_rrw;
    use crate::twostack::{build_palindrome_ts, build_unary_power2_ts};

    fn builtins() -> Vec<AnyMachine> {
        vec![
            AnyMachine::Of(build_block_language_machine()),
            AnyMachine::TwoStack(build_palindrome_ts()),
            AnyMachine::TwoStack(build_unary_power2_ts()),
            AnyMachine::Rrw(build_anbn_rrw()),
            AnyMachine::Editing(build_palindrome_editing()),
        ]
    }

    #[test]
    fn print_parse_print_is_stable() {
        for m in builtins() {
            let text = print_machine(&m);
            let back = parse_machine_file(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
            assert_eq!(back.model(), m.model());
            assert_eq!(print_machine(&back), text);
        }
    }

    #[test]
    fn unknown_model_is_a_syntax_error() {
        let e = parse_machine_file("model: queue\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 1, column: 8, .. }), "{e}");
    }

    #[test]
    fn of_write_outside_sigma_is_invalid() {
        let text = "model: of-tm\ninput_alphabet: 0 1\nstates: q\nstart: q\naccept:\nq 0 -> q A R\n";
        assert!(matches!(parse_machine_file(text), Err(Error::Invalid(_))));
    }

    #[test]
    fn transitions_report_their_column() {
        let text = "model: editing\ninput_alphabet: a\ntape_alphabet: a\nstates: q\nstart: q\naccept:\nq a -> q X\n";
        assert!(matches!(parse_machine_file(text), Err(Error::Syntax { line: 7, column: 10, .. })));
    }
}
