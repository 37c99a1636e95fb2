//! Block encoding of a linear-space machine over a binary input alphabet.
//!
//! Every tape symbol δ ∈ Γ becomes a k-bit block g(δ), `k = ⌈log2 |Γ|⌉`.
//! The target first checks that its input is a sequence of blocks from
//! h(Σ), then returns to the left endmarker and simulates the source one
//! block per source cell.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::machine::{Branch, Prune};
use crate::of::{validate_linear, OfAction, OfControl, OfMachine, StateId};
use crate::symbol::{Alphabet, Cell, Move, Sym};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BePc {
    VerifyStart,
    Verify(Vec<bool>),
    Rewind,
    /// On a block's first cell or an endmarker, about to simulate a step.
    Start(StateId),
    Read(StateId, Vec<bool>),
    WriteBack { q: StateId, code: Vec<bool>, i: usize, mv: Move },
    Travel { q: StateId, right: bool, rem: usize },
    Accept,
}

#[derive(Clone, Debug)]
pub struct BlockMachine {
    pub source: OfMachine,
    pub gamma: Vec<Sym>,
    pub k: usize,
    bits: Alphabet,
}

#[derive(Clone, Debug)]
pub struct BlockEncoding {
    /// h(σ) for every input symbol.
    pub h: BTreeMap<Sym, String>,
    pub machine: BlockMachine,
}

impl BlockEncoding {
    pub fn encode_word(&self, w: &[Sym]) -> Vec<Sym> {
        w.iter().flat_map(|s| self.h[s].chars()).collect()
    }
}

pub fn block_encode(m: &OfMachine) -> Result<BlockEncoding> {
    validate_linear(m).into_result()?;
    let gamma = m.writable().symbols().to_vec();
    if gamma.len() < 2 {
        return Err(Error::Precondition("tape alphabet has one symbol, so blocks would be empty".into()));
    }
    let mut k = 0;
    while (1usize << k) < gamma.len() {
        k += 1;
    }
    let machine = BlockMachine { source: m.clone(), gamma, k, bits: Alphabet::from_chars("01") };
    let h = m
        .input_alphabet
        .symbols()
        .iter()
        .map(|&s| (s, machine.g(s).iter().map(|&b| if b { '1' } else { '0' }).collect()))
        .collect();
    Ok(BlockEncoding { h, machine })
}

type Out = Vec<Branch<OfAction<BePc>>>;

fn go(pc: BePc, write: Cell, mv: Move) -> Out {
    vec![Branch::Next(OfAction { next: pc, write, mv })]
}

fn bit_cell(b: bool) -> Cell {
    Cell::Sym(if b { '1' } else { '0' })
}

impl BlockMachine {
    pub fn g(&self, s: Sym) -> Vec<bool> {
        let i = self.gamma.iter().position(|&c| c == s).expect("tape symbol");
        (0..self.k).rev().map(|b| (i >> b) & 1 == 1).collect()
    }

    fn g_inv(&self, bits: &[bool]) -> Option<Sym> {
        let i = bits.iter().fold(0usize, |acc, &b| acc * 2 + usize::from(b));
        self.gamma.get(i).copied()
    }

    fn travel(q: StateId, right: bool, rem: usize) -> BePc {
        if rem == 0 {
            BePc::Start(q)
        } else {
            BePc::Travel { q, right, rem }
        }
    }

    /// One source step on the block whose last bit is under the head.
    fn decide(&self, q: StateId, bits: &[bool], read: Cell) -> Out {
        let Some(delta) = self.g_inv(bits) else { return vec![] };
        let k = self.k;
        self.source
            .rules_for(q, Cell::Sym(delta))
            .map(|r| {
                let Cell::Sym(w) = r.write else { return Branch::Pruned(Prune::IllegalStep) };
                if self.source.accepting.contains(&r.to) {
                    return Branch::Next(OfAction { next: BePc::Accept, write: read, mv: Move::Stay });
                }
                let code = self.g(w);
                let last = bit_cell(code[k - 1]);
                let (next, mv) = if k == 1 {
                    (BePc::Start(r.to), r.mv)
                } else {
                    (BePc::WriteBack { q: r.to, code, i: k - 2, mv: r.mv }, Move::Left)
                };
                Branch::Next(OfAction { next, write: last, mv })
            })
            .collect()
    }

    fn start(&self, q: StateId, read: Cell) -> Out {
        match read {
            Cell::Sym(c) => {
                let b = c == '1';
                if self.k == 1 {
                    self.decide(q, &[b], read)
                } else {
                    go(BePc::Read(q, vec![b]), read, Move::Right)
                }
            }
            end => self
                .source
                .rules_for(q, end)
                .map(|r| {
                    if self.source.accepting.contains(&r.to) {
                        return Branch::Next(OfAction { next: BePc::Accept, write: end, mv: Move::Stay });
                    }
                    let next = match (end, r.mv) {
                        (Cell::Right, Move::Left) => Self::travel(r.to, false, self.k - 1),
                        _ => BePc::Start(r.to),
                    };
                    Branch::Next(OfAction { next, write: end, mv: r.mv })
                })
                .collect(),
        }
    }
}

impl OfControl for BlockMachine {
    type State = BePc;

    fn input_alphabet(&self) -> &Alphabet {
        &self.bits
    }

    fn start(&self) -> BePc {
        BePc::VerifyStart
    }

    fn is_accepting(&self, s: &BePc) -> bool {
        match s {
            BePc::Accept => true,
            BePc::Start(q) => self.source.accepting.contains(q),
            _ => false,
        }
    }

    fn delta(&self, s: &BePc, read: Cell) -> Out {
        match s {
            BePc::Accept => vec![],
            BePc::VerifyStart => go(BePc::Verify(vec![]), read, Move::Right),
            BePc::Verify(buf) => match read {
                Cell::Sym(c) => {
                    let mut buf = buf.clone();
                    buf.push(c == '1');
                    if buf.len() == self.k {
                        match self.g_inv(&buf) {
                            Some(x) if self.source.input_alphabet.contains(x) => buf.clear(),
                            _ => return vec![],
                        }
                    }
                    go(BePc::Verify(buf), read, Move::Right)
                }
                Cell::Right if buf.is_empty() => go(BePc::Rewind, read, Move::Left),
                _ => vec![],
            },
            BePc::Rewind => match read {
                Cell::Left => go(BePc::Start(self.source.start), read, Move::Stay),
                _ => go(BePc::Rewind, read, Move::Left),
            },
            BePc::Start(q) => {
                if self.source.accepting.contains(q) {
                    return vec![];
                }
                self.start(*q, read)
            }
            BePc::Read(q, bits) => {
                let Cell::Sym(c) = read else { return vec![] };
                let mut bits = bits.clone();
                bits.push(c == '1');
                if bits.len() == self.k {
                    self.decide(*q, &bits, read)
                } else {
                    go(BePc::Read(*q, bits), read, Move::Right)
                }
            }
            BePc::WriteBack { q, code, i, mv } => {
                let write = bit_cell(code[*i]);
                if *i > 0 {
                    let next = BePc::WriteBack { q: *q, code: code.clone(), i: i - 1, mv: *mv };
                    return go(next, write, Move::Left);
                }
                let next = match mv {
                    Move::Stay => BePc::Start(*q),
                    Move::Right => Self::travel(*q, true, self.k - 1),
                    Move::Left => Self::travel(*q, false, self.k - 1),
                };
                go(next, write, *mv)
            }
            BePc::Travel { q, right, rem } => {
                if read == Cell::Left {
                    return self.delta(&BePc::Start(*q), read);
                }
                let mv = if *right { Move::Right } else { Move::Left };
                go(Self::travel(*q, *right, rem - 1), read, mv)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Budget, Mode, Verdict};
    use crate::of::{build_block_language_machine, run_of, OfBuilder};
    use crate::symbol::word;

    #[test]
    fn binary_source_keeps_its_language() {
        let m = build_block_language_machine();
        let enc = block_encode(&m).unwrap();
        assert_eq!(enc.machine.k, 1);
        for w in m.input_alphabet.words_up_to(6) {
            let src = run_of(&m, &w, &Mode::Deterministic, Budget::default(), false).unwrap();
            let tgt = run_of(&enc.machine, &enc.encode_word(&w), &Mode::Deterministic, Budget::default(), false).unwrap();
            assert_eq!(src.verdict, tgt.verdict, "{w:?}");
        }
    }

    /// Σ = {a, b}, Γ adds X; accepts words whose first letter is a, marking it X
    /// and walking back to check the mark.
    fn marker_machine() -> OfMachine {
        let mut b = OfBuilder::default();
        b.pass("s", Cell::Left, "f", Move::Right);
        b.rule("f", Cell::Sym('a'), "back", Cell::Sym('X'), Move::Left);
        b.pass("back", Cell::Left, "chk", Move::Right);
        b.pass("chk", Cell::Sym('X'), "acc", Move::Stay);
        b.accept("acc");
        b.build("s", Alphabet::from_chars("ab")).with_tape_alphabet(Alphabet::from_chars("abX"))
    }

    #[test]
    fn wider_tape_alphabet_uses_two_bit_blocks() {
        let m = marker_machine();
        let enc = block_encode(&m).unwrap();
        assert_eq!(enc.machine.k, 2);
        assert!(enc.h.values().all(|c| c.len() == 2));
        let run = |s: &str| {
            run_of(&enc.machine, &word(s), &Mode::Deterministic, Budget::default(), false).unwrap().verdict
        };
        assert_eq!(run(&enc.h[&'a'].repeat(2)), Verdict::Accept);
        assert_eq!(run(&enc.h[&'b']), Verdict::Reject);
        assert_eq!(run("1"), Verdict::Reject);
        // "10" decodes to X, which is not an input symbol.
        assert_eq!(run("10"), Verdict::Reject);
    }
}
