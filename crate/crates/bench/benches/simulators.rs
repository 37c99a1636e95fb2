use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use overfree::cfl::{cyk_parse, decide_membership, CnfGrammar, MembershipOptions, Via};
use overfree::editing::{build_palindrome_editing, run_editing};
use overfree::of::{build_block_language_machine, run_of};
use overfree::restart::{build_anbn_rrw, run_rrw};
use overfree::symbol::{word, Sym};
use overfree::twostack::{build_palindrome_ts, run_ts};
use overfree::xlate::editing_to_of::DEFAULT_SLACK;
use overfree::xlate::{editing_to_of, twostack_to_of};
use overfree::{Budget, Mode};

fn palindrome(n: usize) -> Vec<Sym> {
    let half: Vec<Sym> = "abb".chars().cycle().take(n / 2).collect();
    half.iter().chain(half.iter().rev()).copied().collect()
}

fn simulators(c: &mut Criterion) {
    let block = build_block_language_machine();
    let pal = build_palindrome_ts();
    let rrw = build_anbn_rrw();
    let ed = build_palindrome_editing();
    let budget = Budget::new(u64::MAX, u64::MAX);
    let mut g = c.benchmark_group("deterministic");
    for n in [4usize, 16, 64] {
        let w = word(&format!("{}{}{}", "0".repeat(n), "1".repeat(n), "0".repeat(n)));
        g.bench_with_input(BenchmarkId::new("block-of-tm", 3 * n), &w, |b, w| {
            b.iter(|| run_of(&block, black_box(w), &Mode::Deterministic, budget, false).unwrap())
        });
        let p = palindrome(2 * n);
        g.bench_with_input(BenchmarkId::new("palindrome-two-stack", 2 * n), &p, |b, w| {
            b.iter(|| run_ts(&pal, black_box(w), &Mode::Deterministic, budget, false).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("palindrome-editing", 2 * n), &p, |b, w| {
            b.iter(|| run_editing(&ed, black_box(w), &Mode::Deterministic, budget, None).unwrap())
        });
        let w = word(&format!("{}{}", "a".repeat(n), "b".repeat(n)));
        g.bench_with_input(BenchmarkId::new("anbn-rrw", 2 * n), &w, |b, w| {
            b.iter(|| run_rrw(&rrw, black_box(w), &Mode::Deterministic, budget, false).unwrap())
        });
    }
    g.finish();
}

fn compiled(c: &mut Criterion) {
    let pal = twostack_to_of(&build_palindrome_ts()).unwrap();
    let ed = editing_to_of(&build_palindrome_editing(), DEFAULT_SLACK).unwrap();
    let budget = Budget::new(u64::MAX, u64::MAX);
    let mut g = c.benchmark_group("compiled");
    for n in [4usize, 16] {
        let p = palindrome(n);
        g.bench_with_input(BenchmarkId::new("two-stack-to-of", n), &p, |b, w| {
            b.iter(|| run_of(&pal, black_box(w), &Mode::Deterministic, budget, false).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("editing-to-of", n), &p, |b, w| {
            b.iter(|| run_of(&ed, black_box(w), &Mode::Deterministic, budget, false).unwrap())
        });
    }
    g.finish();
}

fn membership(c: &mut Criterion) {
    let g = CnfGrammar::parse("S -> L R\nS -> L T\nS -> S S\nT -> S R\nL -> '('\nR -> ')'").unwrap();
    let w = word("(()(()))()()");
    let opts = MembershipOptions::default();
    let mut grp = c.benchmark_group("membership");
    grp.bench_function("cyk", |b| b.iter(|| cyk_parse(&g, black_box(&w)).unwrap()));
    grp.bench_function("editing-witness", |b| b.iter(|| decide_membership(&g, black_box(&w), Via::Editing, &opts).unwrap()));
    grp.bench_function("compiled-of-witness", |b| {
        b.iter(|| decide_membership(&g, black_box(&w), Via::CompiledOf, &opts).unwrap())
    });
    grp.bench_function("editing-bfs-negative", |b| {
        b.iter(|| decide_membership(&g, black_box(&word("(()(()")), Via::Editing, &opts).unwrap())
    });
    grp.finish();
}

criterion_group!(benches, simulators, compiled, membership);
criterion_main!(benches);
