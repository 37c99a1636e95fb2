use std::fmt::Debug;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use overfree::cfl::{decide_membership, verify_weight_bound, CnfGrammar, MembershipOptions, Via};
use overfree::editing::{config_weight, run_editing, EditConfig};
use overfree::equiv::{check_equivalence, EquivVerdict};
use overfree::format::{parse_machine_file, print_machine, AnyMachine};
use overfree::machine::{enumerate_language, Acceptor, RunResult, TraceStep};
use overfree::of::{run_of, OfConfig, OfControl, StateId};
use overfree::restart::{run_rrw, RrwConfig};
use overfree::symbol::{show, Sym};
use overfree::twostack::{run_ts, show_stack, TsConfig};
use overfree::xlate::editing_to_of::DEFAULT_SLACK;
use overfree::xlate::{
    block_encode, editing_to_of, enumerate_of, of_to_twostack, rrw_to_twostack, twostack_to_of, BlockMachine,
    EditingToOf, TsToOf,
};
use overfree::{Budget, Mode, Verdict, Witness};

const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "overfree", version, about = "Run, compile and compare overhead-free machines")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Det,
    Bfs,
    Witness,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    OfTm,
    TwoStack,
    /// Block encoding of an of-tm over {0, 1}.
    Block,
}

#[derive(Clone, Copy, ValueEnum)]
enum ViaArg {
    Cyk,
    Editing,
    Of,
}

#[derive(clap::Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_configs: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget::new(self.max_steps, self.max_configs)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a machine file or a compiled handle on one input.
    Run {
        machine: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        /// Defaults to det for deterministic machines and bfs otherwise.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Choice indices, whitespace separated.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        trace: bool,
    },
    /// Translate a machine into another model.
    Compile {
        #[arg(long)]
        from: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        /// Virtual cells for editing -> of-tm.
        #[arg(long, default_value_t = DEFAULT_SLACK)]
        slack: usize,
        #[arg(long)]
        out: PathBuf,
        /// Write a full transition table instead of a handle when the target is a generated control.
        #[arg(long)]
        enumerate: bool,
        /// Give up enumerating beyond this many control states.
        #[arg(long, default_value_t = 200_000)]
        state_limit: usize,
    },
    /// Compare two machines on all words up to a length.
    Equiv {
        m1: PathBuf,
        m2: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Context-free membership through the oracle, the editing machine or its OF compilation.
    Cfl {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, value_enum, default_value = "cyk")]
        via: ViaArg,
        #[arg(long)]
        audit_weight: bool,
        #[arg(long, default_value_t = 6)]
        bfs_max_len: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// List accepted words up to a length, in shortlex order.
    Enum {
        machine: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

/// A machine file, or a handle naming a source file and the model to compile it to.
enum Loaded {
    Table(AnyMachine),
    TsOf(TsToOf),
    EdOf(EditingToOf),
    Block(BlockMachine),
}

impl Loaded {
    fn acceptor(&self) -> Box<dyn Acceptor + '_> {
        match self {
            Loaded::Table(m) => m.acceptor(),
            Loaded::TsOf(c) => Box::new(overfree::of::OfSim::new(c)),
            Loaded::EdOf(c) => Box::new(overfree::of::OfSim::new(c)),
            Loaded::Block(c) => Box::new(overfree::of::OfSim::new(c)),
        }
    }

    fn deterministic(&self) -> bool {
        match self {
            Loaded::Table(m) => m.is_deterministic(),
            Loaded::TsOf(c) => c.source.deterministic,
            Loaded::EdOf(c) => c.source.deterministic,
            Loaded::Block(c) => c.source.deterministic,
        }
    }
}

const HANDLE_TAG: &str = "handle:";

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_machine(path: &Path) -> Result<AnyMachine> {
    parse_machine_file(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load(path: &Path) -> Result<Loaded> {
    let text = read(path)?;
    if !text.trim_start().starts_with(HANDLE_TAG) {
        return Ok(Loaded::Table(parse_machine_file(&text).with_context(|| format!("in {}", path.display()))?));
    }
    let (mut target, mut from, mut slack) = (None, None, DEFAULT_SLACK);
    for line in text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()) {
        let (key, value) = line.split_once(':').ok_or_else(|| anyhow!("bad handle line `{line}`"))?;
        let value = value.trim();
        match key {
            "handle" => target = Some(value.to_string()),
            "from" => from = Some(path.parent().unwrap_or(Path::new(".")).join(value)),
            "slack" => slack = value.parse().context("slack")?,
            _ => bail!("unknown handle key `{key}`"),
        }
    }
    let from = from.ok_or_else(|| anyhow!("handle without `from:`"))?;
    let target = target.ok_or_else(|| anyhow!("handle without a target"))?;
    let target = Target::from_str(&target, false).map_err(|e| anyhow!("handle target: {e}"))?;
    let source = load_machine(&from)?;
    compile_control(source, target, slack)
}

fn compile_control(source: AnyMachine, to: Target, slack: usize) -> Result<Loaded> {
    Ok(match (source, to) {
        (AnyMachine::Of(m), Target::TwoStack) => Loaded::Table(AnyMachine::TwoStack(of_to_twostack(&m)?)),
        (AnyMachine::Rrw(a), Target::TwoStack) => Loaded::Table(AnyMachine::TwoStack(rrw_to_twostack(&a)?)),
        (AnyMachine::TwoStack(a), Target::OfTm) => Loaded::TsOf(twostack_to_of(&a)?),
        (AnyMachine::Editing(m), Target::OfTm) => Loaded::EdOf(editing_to_of(&m, slack)?),
        (AnyMachine::Of(m), Target::Block) => Loaded::Block(block_encode(&m)?.machine),
        (src, to) => bail!(
            "no compiler from {} to {}",
            src.model().tag(),
            to.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
        ),
    })
}

fn show_tape(tape: &[Sym], head: usize) -> String {
    let cells: Vec<String> = std::iter::once("|-".to_string())
        .chain(tape.iter().map(|c| c.to_string()))
        .chain(std::iter::once("-|".to_string()))
        .enumerate()
        .map(|(i, c)| if i == head { format!("[{c}]") } else { c })
        .collect();
    cells.concat()
}

fn choice(step: &TraceStep<impl Sized>) -> String {
    step.choice.map(|c| format!(" choice={c}")).unwrap_or_default()
}

fn print_trace<C>(trace: &[TraceStep<C>], line: impl Fn(&C) -> String) {
    for (i, s) in trace.iter().enumerate() {
        println!("{i:>5} {}{}", line(&s.config), choice(s));
    }
}

fn of_line<S: Debug>(name: impl Fn(&S) -> String) -> impl Fn(&OfConfig<S>) -> String {
    move |c| format!("{} head={} {}", name(&c.state), c.head, show_tape(&c.tape, c.head))
}

fn report<C>(r: &RunResult<C>) -> ExitCode {
    println!("verdict: {}", verdict_word(r.verdict));
    println!("steps: {}", r.steps_used);
    println!("configurations: {}", r.configurations_explored);
    if let Some(w) = r.witness.as_ref().filter(|w| !w.is_empty()) {
        println!("witness: {w}");
    }
    for (p, n) in r.pruned.iter().filter(|(_, n)| *n > 0) {
        println!("pruned {p:?}: {n}");
    }
    verdict_code(r.verdict)
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Accept => "accept",
        Verdict::Reject => "reject",
        Verdict::BudgetExhausted => "budget exhausted",
    }
}

fn verdict_code(v: Verdict) -> ExitCode {
    ExitCode::from(match v {
        Verdict::Accept => 0,
        Verdict::Reject => 1,
        Verdict::BudgetExhausted => 2,
    })
}

fn cmd_run(path: &Path, input: &str, mode: Option<ModeArg>, witness: Option<&Path>, budget: Budget, trace: bool) -> Result<ExitCode> {
    let loaded = load(path)?;
    let input: Vec<Sym> = input.chars().collect();
    let mode = match (mode, witness) {
        (Some(ModeArg::Witness), None) => bail!("--mode witness needs --witness <file>"),
        (Some(ModeArg::Witness) | None, Some(w)) => Mode::Witness(Witness::parse(&read(w)?)?),
        (Some(ModeArg::Det), _) => Mode::Deterministic,
        (Some(ModeArg::Bfs), _) => Mode::Bfs,
        (None, None) if loaded.deterministic() => Mode::Deterministic,
        (None, None) => Mode::Bfs,
    };
    let dbg = |s: &dyn Debug| format!("{s:?}");
    Ok(match &loaded {
        Loaded::Table(AnyMachine::Of(m)) => {
            let r = run_of(m, &input, &mode, budget, trace)?;
            if let Some(t) = &r.trace {
                print_trace(t, of_line(|q: &StateId| m.state_name(*q).to_string()));
            }
            report(&r)
        }
        Loaded::Table(AnyMachine::TwoStack(a)) => {
            let r = run_ts(a, &input, &mode, budget, trace)?;
            if let Some(t) = &r.trace {
                print_trace(t, |c: &TsConfig<StateId>| {
                    format!("{} s1={} s2={} height={}", a.state_name(c.state), show_stack(&c.stack1), show_stack(&c.stack2), c.height())
                });
            }
            report(&r)
        }
        Loaded::Table(AnyMachine::Rrw(a)) => {
            let r = run_rrw(a, &input, &mode, budget, trace)?;
            if let Some(t) = &r.trace {
                print_trace(t, |c: &RrwConfig<StateId>| {
                    format!(
                        "{} pos={} window={} tape={} {:?}",
                        a.state_name(c.state),
                        c.pos,
                        overfree::restart::show_window(&c.window(a.window_size)),
                        show(&c.tape),
                        c.phase
                    )
                });
            }
            report(&r)
        }
        Loaded::Table(AnyMachine::Editing(m)) => {
            let run = run_editing(m, &input, &mode, budget, None)?;
            if trace {
                if let Some(t) = &run.result.trace {
                    print_trace(t, |c: &EditConfig<StateId>| {
                        format!(
                            "{} head={} {} weight={:.4}",
                            m.state_name(c.state),
                            c.head,
                            show_tape(&c.tape, c.head),
                            config_weight(&c.tape, c.head, &m.input_alphabet)
                        )
                    });
                }
            }
            if let Some(w) = &run.weights {
                println!("max weight: {:.4} at step {}", w.max, w.argmax);
            }
            report(&run.result)
        }
        Loaded::TsOf(c) => run_control(c, &input, &mode, budget, trace, dbg)?,
        Loaded::EdOf(c) => run_control(c, &input, &mode, budget, trace, dbg)?,
        Loaded::Block(c) => run_control(c, &input, &mode, budget, trace, dbg)?,
    })
}

fn run_control<C: OfControl>(
    c: &C,
    input: &[Sym],
    mode: &Mode,
    budget: Budget,
    trace: bool,
    name: impl Fn(&dyn Debug) -> String,
) -> Result<ExitCode> {
    let r = run_of(c, input, mode, budget, trace)?;
    if let Some(t) = &r.trace {
        print_trace(t, of_line(|q: &C::State| name(q)));
    }
    Ok(report(&r))
}

fn cmd_compile(from: &Path, to: Target, slack: usize, out: &Path, enumerate: bool, state_limit: usize) -> Result<ExitCode> {
    let source = load_machine(from)?;
    let compiled = compile_control(source, to, slack)?;
    let table = match &compiled {
        Loaded::Table(m) => Some(m.clone()),
        Loaded::TsOf(c) if enumerate => Some(AnyMachine::Of(enumerate_of(c, state_limit)?)),
        Loaded::EdOf(c) if enumerate => Some(AnyMachine::Of(enumerate_of(c, state_limit)?)),
        Loaded::Block(c) if enumerate => Some(AnyMachine::Of(enumerate_of(c, state_limit)?)),
        _ => None,
    };
    if let Loaded::Block(c) = &compiled {
        for &s in c.source.input_alphabet.symbols() {
            println!("h({s}) = {}", c.g(s).iter().map(|&b| if b { '1' } else { '0' }).collect::<String>());
        }
    }
    match table {
        Some(m) => {
            fs::write(out, print_machine(&m)).with_context(|| format!("writing {}", out.display()))?;
            println!("wrote {} machine to {}", m.model().tag(), out.display());
        }
        None => {
            let src = fs::canonicalize(from).unwrap_or_else(|_| from.to_path_buf());
            let name = to.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
            let text = format!("{HANDLE_TAG} {name}\nfrom: {}\nslack: {slack}\n", src.display());
            fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
            println!("wrote handle to {} (use --enumerate for a transition table)", out.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_equiv(m1: &Path, m2: &Path, max_len: usize, budget: Budget) -> Result<ExitCode> {
    let (a, b) = (load(m1)?, load(m2)?);
    let r = check_equivalence(a.acceptor().as_ref(), b.acceptor().as_ref(), max_len, budget)?;
    println!("{r}");
    Ok(ExitCode::from(match r.verdict {
        EquivVerdict::Equivalent => 0,
        EquivVerdict::Counterexample(..) => 1,
        EquivVerdict::Inconclusive(_) => 2,
    }))
}

fn cmd_cfl(grammar: &Path, word: &str, via: ViaArg, audit: bool, bfs_max_len: usize, budget: Budget) -> Result<ExitCode> {
    let g = CnfGrammar::parse(&read(grammar)?).with_context(|| format!("in {}", grammar.display()))?;
    let w: Vec<Sym> = word.chars().collect();
    let via = match via {
        ViaArg::Cyk => Via::Cyk,
        ViaArg::Editing => Via::Editing,
        ViaArg::Of => Via::CompiledOf,
    };
    let opts = MembershipOptions { budget, bfs_max_len, ..MembershipOptions::default() };
    let r = decide_membership(&g, &w, via, &opts)?;
    println!("verdict: {}", verdict_word(r.verdict));
    if r.oracle_negative {
        println!("negative from the CYK oracle; the word is longer than the search limit {}", bfs_max_len);
    }
    if via != Via::Cyk {
        println!("steps: {}", r.steps);
    }
    if let Some(wit) = &r.witness {
        println!("witness: {wit}");
    }
    if audit {
        match &r.witness {
            Some(wit) if r.verdict == Verdict::Accept => {
                let a = verify_weight_bound(&g, &w, wit)?;
                println!("max weight: {:.4} at step {}", a.max_weight, a.weights.argmax);
                println!("word length: {}", w.len());
                println!("slack: {:.4}", a.slack);
            }
            _ => println!("no accepting witness to audit"),
        }
    }
    Ok(verdict_code(r.verdict))
}

fn cmd_enum(path: &Path, max_len: usize, budget: Budget) -> Result<ExitCode> {
    let loaded = load(path)?;
    let lang = enumerate_language(loaded.acceptor().as_ref(), max_len, budget)?;
    for w in &lang.words {
        println!("{}", if w.is_empty() { "ε".to_string() } else { show(w) });
    }
    if lang.partial {
        eprintln!("some runs exhausted the budget; the list may be incomplete");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Run { machine, input, mode, witness, budget, trace } => {
            cmd_run(&machine, &input, mode, witness.as_deref(), budget.budget(), trace)
        }
        Cmd::Compile { from, to, slack, out, enumerate, state_limit } => {
            cmd_compile(&from, to, slack, &out, enumerate, state_limit)
        }
        Cmd::Equiv { m1, m2, max_len, budget } => cmd_equiv(&m1, &m2, max_len, budget.budget()),
        Cmd::Cfl { grammar, word, via, audit_weight, bfs_max_len, budget } => {
            cmd_cfl(&grammar, &word, via, audit_weight, bfs_max_len, budget.budget())
        }
        Cmd::Enum { machine, max_len, budget } => cmd_enum(&machine, max_len, budget.budget()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
