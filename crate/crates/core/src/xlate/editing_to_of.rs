//! Editing machine → OF machine.
//!
//! Physical tape: `A · FS · B`. The input-alphabet cells of the simulated tape
//! are `A · lv` left of the simulated head and `rv · B` from it onward, where
//! `lv` and `rv` are virtual cells kept in the control (at most `c` of them).
//! Noninput cells are records keyed by their signed distance from the
//! simulated head: near records (|d| ≤ D) live in the control, far records
//! are written into the free space FS.
//!
//! FS is ε, `1`, `11` or `1 R 1 0^z 1`: a delimiter, the far records R, a
//! separator, unused zeros and a final `1`. Between simulated steps the
//! physical head rests on the anchor, the first cell right of FS.

use std::collections::{BTreeMap, VecDeque};

use crate::editing::{validate_editing, EditConfig, Effect, EditingTm};
use crate::error::{Error, Result};
use crate::machine::{Branch, Prune};
use crate::of::{OfAction, OfConfig, OfControl, StateId};
use crate::symbol::{Alphabet, Cell, Move, Sym};

use super::sdcode::{shortlex_bits, GammaCode, Record};
use super::ts_to_of::designated_bits;

/// Default number of virtual cells.
pub const DEFAULT_SLACK: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fs {
    Empty,
    One,
    Two,
    Big,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    MoveRight,
    MoveLeft,
    Insert,
    Delete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Adj {
    Inc,
    Dec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Upd {
    pub kind: Kind,
    /// Value of the f3 flag that marks a record as done in this pass.
    pub p: bool,
    pub pending: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Task {
    GrowRight,
    TakeLeft,
    UpdateFar(Upd),
    Extract,
    AppendFar { d: i64, g: Sym },
    Normalize { left: bool },
}

/// What a forward scan has learned about the record it is in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RecInfo {
    pub f1: bool,
    pub f2: bool,
    pub f3: bool,
    pub g: Vec<bool>,
    pub sigma: bool,
    /// Prefix matchers against s(D) and s(D+1).
    pub md: Option<usize>,
    pub md1: Option<usize>,
    pub process: bool,
    pub adj: Option<Adj>,
}

impl RecInfo {
    fn fresh() -> Self {
        RecInfo {
            f1: false,
            f2: false,
            f3: false,
            g: Vec::new(),
            sigma: false,
            md: Some(0),
            md1: Some(0),
            process: false,
            adj: None,
        }
    }

    fn with_f2(f2: bool) -> Self {
        RecInfo { f2, ..RecInfo::fresh() }
    }
}

/// Position of a left-to-right scan inside FS; names the cell about to be read.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cur {
    Delim,
    Hdr(usize, RecInfo),
    HStart(u8, RecInfo),
    PairFirst(RecInfo),
    PairSecond(bool, RecInfo),
    Sep,
    Zeros,
    Final,
}

/// Right-to-left record parser states, starting on a record's last cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rev {
    Term2,
    Term1,
    Pair0,
    PairBit,
    Start1,
    Hdr(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RevGoal {
    /// Stop on the delimiter left of the first record.
    Delim,
    /// Overwrite this record's f2 flag.
    SetF2(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stop {
    AtFinal,
    AtRecEnd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AfterShift {
    ToAnchor,
    FixPrevF2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlSt {
    Read,
    GoL { v: Sym, r: usize, last: bool },
    Put { v: Sym, last: bool },
    GoR { r: usize, last: bool },
    Fill1,
    FillW(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pc {
    Init,
    Ready,
    Accept,
    GrowBig2,
    GrowBig3,
    Walk { right: bool, rem: usize, then: Box<Pc> },
    SlPut { y: Sym, back: usize },
    SlBigProbe(Sym),
    SrPut(Sym),
    SrBigProbe(Sym),
    SeekFinal(Box<Pc>),
    SeekZeros(Box<Pc>),
    Rev { rs: Rev, goal: RevGoal, then: Box<Pc> },
    Fwd { cur: Cur, stop: Stop, then: Box<Pc> },
    ShiftRight { buf: VecDeque<Sym>, cur: Cur },
    ShiftLeft { k: usize, cur: Cur, mod_f1: bool, after: AfterShift, st: SlSt },
    ToAnchorStart,
    ToAnchor,
    Probe { back: Option<usize> },
    UpdWalk { u: Upd, cur: Cur },
    CarryBack1 { u: Upd, adj: Adj, info: RecInfo },
    CarryCheck { u: Upd, adj: Adj, info: RecInfo },
    CarryBit { u: Upd, adj: Adj, info: RecInfo },
    ExWalk(Cur),
    AppCount { i: usize, d: i64, g: Sym },
    AppGoSep { d: i64, g: Sym },
    WriteRec(VecDeque<Sym>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EoState {
    pub q: StateId,
    pub at_left: bool,
    pub near: BTreeMap<i64, Sym>,
    pub lv: VecDeque<Sym>,
    pub rv: VecDeque<Sym>,
    pub shape: Fs,
    pub has_far: bool,
    pub parity: bool,
    pub tasks: VecDeque<Task>,
    pub pc: Pc,
}

impl EoState {
    /// True on the steps where the next source step is about to be chosen.
    pub fn is_decision_point(&self) -> bool {
        self.pc == Pc::Ready && self.tasks.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct EditingToOf {
    pub source: EditingTm,
    /// Number of virtual cells.
    pub slack: usize,
    /// Records at distance at most this stay in the control.
    pub near_limit: u64,
    pub code: GammaCode,
    pub zero: Sym,
    pub one: Sym,
    sd_d: Vec<bool>,
    sd_d1: Vec<bool>,
}

/// Compiles with the default near-record limit `2^(k+10)`.
pub fn editing_to_of(m: &EditingTm, slack: usize) -> Result<EditingToOf> {
    let code = GammaCode::new(&m.input_alphabet, &m.tape_alphabet);
    editing_to_of_with_limit(m, slack, 1u64 << (code.k + 10))
}

pub fn editing_to_of_with_limit(m: &EditingTm, slack: usize, near_limit: u64) -> Result<EditingToOf> {
    validate_editing(m).into_result()?;
    if near_limit == 0 {
        return Err(Error::Precondition("near-record limit must be at least 1".into()));
    }
    let (zero, one) = designated_bits(&m.input_alphabet)
        .ok_or_else(|| Error::Precondition("input alphabet needs at least two symbols".into()))?;
    Ok(EditingToOf {
        source: m.clone(),
        slack,
        near_limit,
        code: GammaCode::new(&m.input_alphabet, &m.tape_alphabet),
        zero,
        one,
        sd_d: shortlex_bits(near_limit),
        sd_d1: shortlex_bits(near_limit + 1),
    })
}

type Out = Vec<Branch<OfAction<EoState>>>;

fn out(s: EoState, write: Cell, mv: Move) -> Out {
    vec![Branch::Next(OfAction { next: s, write, mv })]
}

fn walk(right: bool, rem: usize, then: Pc) -> Pc {
    if rem == 0 {
        then
    } else {
        Pc::Walk { right, rem, then: Box::new(then) }
    }
}

fn feed(target: &[bool], pos: Option<usize>, b: bool) -> Option<usize> {
    pos.and_then(|i| (i < target.len() && target[i] == b).then_some(i + 1))
}

fn adj_for(kind: Kind, positive: bool) -> Option<Adj> {
    match (kind, positive) {
        (Kind::MoveRight, true) | (Kind::Delete, true) => Some(Adj::Dec),
        (Kind::MoveLeft, true) | (Kind::Insert, true) => Some(Adj::Inc),
        (Kind::MoveRight, false) => Some(Adj::Inc),
        (Kind::MoveLeft, false) => Some(Adj::Dec),
        _ => None,
    }
}

/// Which cell the simulated head is on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Head {
    Left,
    Right,
    Near(Sym),
    Virt(Sym),
    Anchor(Sym),
}

impl EditingToOf {
    fn bit(&self, b: bool) -> Sym {
        if b {
            self.one
        } else {
            self.zero
        }
    }

    fn is_one(&self, c: Cell) -> bool {
        c == Cell::Sym(self.one)
    }

    fn k(&self) -> usize {
        self.code.k
    }

    fn is_input(&self, s: Sym) -> bool {
        self.source.input_alphabet.contains(s)
    }

    fn advance(&self, cur: &Cur, v: bool, has_far: bool) -> Cur {
        let k = self.k();
        match cur {
            Cur::Delim => {
                if has_far {
                    Cur::Hdr(0, RecInfo::fresh())
                } else {
                    Cur::Sep
                }
            }
            Cur::Hdr(i, info) => {
                let mut info = info.clone();
                match *i {
                    0 => info.f1 = v,
                    1 => info.f2 = v,
                    2 => info.f3 = v,
                    j if j < 3 + k => info.g.push(v),
                    _ => info.sigma = v,
                }
                if *i == 3 + k {
                    Cur::HStart(0, info)
                } else {
                    Cur::Hdr(i + 1, info)
                }
            }
            Cur::HStart(0, info) => Cur::HStart(1, info.clone()),
            Cur::HStart(_, info) => Cur::PairFirst(info.clone()),
            Cur::PairFirst(info) => Cur::PairSecond(v, info.clone()),
            Cur::PairSecond(b, info) => {
                if !v {
                    let mut info = info.clone();
                    info.md = feed(&self.sd_d, info.md, *b);
                    info.md1 = feed(&self.sd_d1, info.md1, *b);
                    Cur::PairFirst(info)
                } else if info.f2 {
                    Cur::Sep
                } else {
                    Cur::Hdr(0, RecInfo::fresh())
                }
            }
            Cur::Sep => Cur::Zeros,
            Cur::Zeros => {
                if v {
                    Cur::Final
                } else {
                    Cur::Zeros
                }
            }
            Cur::Final => Cur::Final,
        }
    }

    fn head(&self, s: &EoState, read: Cell) -> Head {
        if s.at_left {
            Head::Left
        } else if let Some(&g) = s.near.get(&0) {
            Head::Near(g)
        } else if let Some(&x) = s.rv.front() {
            Head::Virt(x)
        } else {
            match read {
                Cell::Sym(x) => Head::Anchor(x),
                Cell::Right => Head::Right,
                Cell::Left => Head::Left,
            }
        }
    }

    fn shift_near(near: &BTreeMap<i64, Sym>, from: i64, delta: i64) -> BTreeMap<i64, Sym> {
        near.iter().map(|(&d, &g)| (if d >= from { d + delta } else { d }, g)).collect()
    }

    /// One source step; every source rule yields exactly one branch.
    fn decide(&self, s: &EoState, read: Cell) -> Out {
        let h = self.head(s, read);
        let mread = match h {
            Head::Left => Cell::Left,
            Head::Right => Cell::Right,
            Head::Near(x) | Head::Virt(x) | Head::Anchor(x) => Cell::Sym(x),
        };
        self.source
            .rules_for(s.q, mread)
            .map(|r| match self.apply(s, h, r.effect) {
                Some((mut n, write)) => {
                    n.q = r.to;
                    if self.source.is_accepting(r.to) {
                        n.tasks.clear();
                        n.pc = Pc::Accept;
                        return Branch::Next(OfAction { next: n, write: read, mv: Move::Stay });
                    }
                    Branch::Next(OfAction { next: n, write: write.unwrap_or(read), mv: Move::Stay })
                }
                None => Branch::Pruned(Prune::IllegalStep),
            })
            .collect()
    }

    /// Control-side effect of a source step plus the physical tasks it needs.
    fn apply(&self, s: &EoState, h: Head, effect: Effect) -> Option<(EoState, Option<Cell>)> {
        let mut n = s.clone();
        n.tasks.clear();
        n.pc = Pc::Ready;
        let mut write = None;
        let mut kind = None;
        match effect {
            Effect::Write(w, mv) => {
                let mut head = h;
                match (h, w) {
                    (Head::Left, Cell::Left) | (Head::Right, Cell::Right) => {}
                    (Head::Near(_), Cell::Sym(x)) => {
                        if self.is_input(x) {
                            n.near.remove(&0);
                            n.rv.push_front(x);
                            head = Head::Virt(x);
                        } else {
                            n.near.insert(0, x);
                            head = Head::Near(x);
                        }
                    }
                    (Head::Virt(_), Cell::Sym(x)) => {
                        if self.is_input(x) {
                            n.rv[0] = x;
                            head = Head::Virt(x);
                        } else {
                            n.rv.pop_front();
                            n.near.insert(0, x);
                            head = Head::Near(x);
                        }
                    }
                    (Head::Anchor(_), Cell::Sym(x)) => {
                        if self.is_input(x) {
                            write = Some(Cell::Sym(x));
                            head = Head::Anchor(x);
                        } else {
                            n.near.insert(0, x);
                            n.tasks.push_back(Task::GrowRight);
                            head = Head::Near(x);
                        }
                    }
                    _ => return None,
                }
                match mv {
                    Move::Stay => {}
                    Move::Right => {
                        match head {
                            Head::Right => return None,
                            Head::Left => n.at_left = false,
                            Head::Near(_) => {}
                            Head::Virt(_) => {
                                let x = n.rv.pop_front()?;
                                n.lv.push_back(x);
                            }
                            Head::Anchor(x) => {
                                n.lv.push_back(x);
                                n.tasks.push_back(Task::GrowRight);
                            }
                        }
                        n.near = Self::shift_near(&n.near, i64::MIN, -1);
                        kind = Some(Kind::MoveRight);
                    }
                    Move::Left => {
                        if head == Head::Left {
                            return None;
                        }
                        if !n.near.contains_key(&-1) {
                            if let Some(x) = n.lv.pop_back() {
                                n.rv.push_front(x);
                            } else {
                                n.tasks.push_back(Task::TakeLeft);
                            }
                        }
                        n.near = Self::shift_near(&n.near, i64::MIN, 1);
                        kind = Some(Kind::MoveLeft);
                    }
                }
            }
            Effect::Insert(x) => {
                if h == Head::Left {
                    return None;
                }
                n.near = Self::shift_near(&n.near, 0, 1);
                if self.is_input(x) {
                    n.rv.push_front(x);
                } else {
                    n.near.insert(0, x);
                }
                kind = Some(Kind::Insert);
            }
            Effect::Delete => {
                match h {
                    Head::Left | Head::Right => return None,
                    Head::Near(_) => {
                        n.near.remove(&0);
                    }
                    Head::Virt(_) => {
                        n.rv.pop_front();
                    }
                    Head::Anchor(_) => n.tasks.push_back(Task::GrowRight),
                }
                n.near = Self::shift_near(&n.near, 1, -1);
                kind = Some(Kind::Delete);
            }
        }
        if let (Some(kind), true) = (kind, n.has_far) {
            n.tasks.push_back(Task::UpdateFar(Upd { kind, p: !n.parity, pending: false }));
        }
        let lim = self.near_limit as i64;
        let far: Vec<(i64, Sym)> = n.near.iter().filter(|(d, _)| d.abs() > lim).map(|(&d, &g)| (d, g)).collect();
        for (d, g) in far {
            n.near.remove(&d);
            n.tasks.push_back(Task::AppendFar { d, g });
        }
        n.tasks.push_back(Task::Normalize { left: true });
        Some((n, write))
    }

    fn record_bits(&self, f1: bool, f2: bool, f3: bool, g: Sym, d: i64) -> VecDeque<Sym> {
        let r = Record { f1, f2, f3, gamma: g, distance: d };
        r.encode(&self.code).into_iter().map(|b| self.bit(b)).collect()
    }

    /// Starts the first queued task at the anchor, or makes the next source step.
    fn ready(&self, s: &EoState, read: Cell) -> Out {
        let mut n = s.clone();
        let Some(task) = n.tasks.pop_front() else {
            if self.source.is_accepting(s.q) {
                return vec![];
            }
            if s.lv.len() + s.rv.len() > self.slack {
                return vec![Branch::Pruned(Prune::OutOfSpace)];
            }
            return self.decide(s, read);
        };
        let one = Cell::Sym(self.one);
        match task {
            Task::GrowRight => {
                n.shape = match s.shape {
                    Fs::Empty => Fs::One,
                    Fs::One => Fs::Two,
                    Fs::Two | Fs::Big => Fs::Big,
                };
                if s.shape == Fs::Big {
                    n.pc = Pc::GrowBig2;
                    out(n, one, Move::Left)
                } else {
                    out(n, one, Move::Right)
                }
            }
            Task::TakeLeft => {
                let f = match s.shape {
                    Fs::Empty => 0,
                    Fs::One => 1,
                    Fs::Two => 2,
                    Fs::Big => {
                        n.pc = Pc::SeekFinal(Box::new(walk(false, 1, Pc::Probe { back: None })));
                        return out(n, read, Move::Left);
                    }
                };
                n.pc = walk(false, f, Pc::Probe { back: Some(f + 1) });
                out(n, read, Move::Left)
            }
            Task::UpdateFar(u) => {
                if !s.has_far {
                    return out(n, read, Move::Stay);
                }
                n.pc = Pc::SeekFinal(Box::new(Pc::UpdWalk { u, cur: Cur::Delim }));
                out(n, read, Move::Left)
            }
            Task::Extract => {
                if !s.has_far {
                    return out(n, read, Move::Stay);
                }
                n.pc = Pc::SeekFinal(Box::new(Pc::ExWalk(Cur::Delim)));
                out(n, read, Move::Left)
            }
            Task::AppendFar { d, g } => {
                if s.shape != Fs::Big {
                    return vec![Branch::Pruned(Prune::OutOfSpace)];
                }
                n.pc = walk(false, 1, Pc::AppCount { i: 0, d, g });
                out(n, read, Move::Left)
            }
            Task::Normalize { left: true } => {
                let Some(&y) = s.lv.front() else {
                    n.tasks.push_front(Task::Normalize { left: false });
                    return out(n, read, Move::Stay);
                };
                match s.shape {
                    Fs::Empty => {
                        n.tasks.push_front(Task::Normalize { left: false });
                        out(n, read, Move::Stay)
                    }
                    Fs::One | Fs::Two => {
                        let back = if s.shape == Fs::One { 1 } else { 2 };
                        n.shape = if s.shape == Fs::One { Fs::Empty } else { Fs::One };
                        n.lv.pop_front();
                        n.tasks.push_front(Task::Normalize { left: true });
                        n.pc = walk(false, back - 1, Pc::SlPut { y, back });
                        out(n, read, Move::Left)
                    }
                    Fs::Big => {
                        n.pc = walk(false, 1, Pc::SlBigProbe(y));
                        out(n, read, Move::Left)
                    }
                }
            }
            Task::Normalize { left: false } => {
                let Some(&y) = s.rv.back() else { return out(n, read, Move::Stay) };
                match s.shape {
                    Fs::Empty => out(n, read, Move::Stay),
                    Fs::One | Fs::Two => {
                        n.shape = if s.shape == Fs::One { Fs::Empty } else { Fs::One };
                        n.rv.pop_back();
                        n.tasks.push_front(Task::Normalize { left: false });
                        n.pc = Pc::SrPut(y);
                        out(n, read, Move::Left)
                    }
                    Fs::Big => {
                        n.pc = walk(false, 1, Pc::SrBigProbe(y));
                        out(n, read, Move::Left)
                    }
                }
            }
        }
    }

    fn shift_left(&self, k: usize, cur: Cur, mod_f1: bool, after: AfterShift) -> Pc {
        Pc::ShiftLeft { k, cur, mod_f1, after, st: SlSt::Read }
    }

    fn micro(&self, s: &EoState, read: Cell) -> Out {
        let mut n = s.clone();
        let one = Cell::Sym(self.one);
        let zero = Cell::Sym(self.zero);
        let is1 = self.is_one(read);
        let bit = is1;
        let k = self.k();
        let fail = || vec![];
        match &s.pc {
            Pc::Init | Pc::Ready | Pc::Accept => unreachable!(),
            Pc::GrowBig2 => {
                n.pc = Pc::GrowBig3;
                out(n, zero, Move::Right)
            }
            Pc::GrowBig3 => {
                n.pc = Pc::Ready;
                out(n, read, Move::Right)
            }
            Pc::Walk { right, rem, then } => {
                n.pc = walk(*right, rem - 1, (**then).clone());
                out(n, read, if *right { Move::Right } else { Move::Left })
            }
            Pc::SlPut { y, back } => {
                n.pc = walk(true, back - 1, Pc::Ready);
                out(n, Cell::Sym(*y), Move::Right)
            }
            Pc::SlBigProbe(y) => {
                if is1 && !s.has_far {
                    n.shape = Fs::Two;
                    n.lv.pop_front();
                    n.tasks.push_front(Task::Normalize { left: true });
                    n.pc = Pc::SlPut { y: *y, back: 3 };
                    out(n, read, Move::Left)
                } else if is1 {
                    n.tasks.push_front(Task::Normalize { left: false });
                    n.pc = walk(true, 1, Pc::Ready);
                    out(n, read, Move::Right)
                } else {
                    n.lv.pop_front();
                    n.tasks.push_front(Task::Normalize { left: true });
                    let buf = VecDeque::from([*y]);
                    n.pc = Pc::SeekZeros(Box::new(Pc::ShiftRight { buf, cur: Cur::Delim }));
                    out(n, read, Move::Left)
                }
            }
            Pc::SrPut(y) => {
                n.pc = Pc::Ready;
                out(n, Cell::Sym(*y), Move::Stay)
            }
            Pc::SrBigProbe(y) => {
                if is1 && s.has_far {
                    n.pc = walk(true, 1, Pc::Ready);
                    return out(n, read, Move::Right);
                }
                n.rv.pop_back();
                n.tasks.push_front(Task::Normalize { left: false });
                n.pc = Pc::SrPut(*y);
                if is1 {
                    n.shape = Fs::Two;
                    out(n, read, Move::Right)
                } else {
                    out(n, one, Move::Right)
                }
            }
            Pc::SeekFinal(then) => {
                if !is1 {
                    return fail();
                }
                n.pc = Pc::SeekZeros(then.clone());
                out(n, read, Move::Left)
            }
            Pc::SeekZeros(then) => {
                if read == zero {
                    return out(n, read, Move::Left);
                }
                n.pc = if s.has_far {
                    Pc::Rev { rs: Rev::Term2, goal: RevGoal::Delim, then: then.clone() }
                } else {
                    (**then).clone()
                };
                out(n, read, Move::Left)
            }
            Pc::Rev { rs, goal, then } => {
                let next = match *rs {
                    Rev::Term2 => Rev::Term1,
                    Rev::Term1 => Rev::Pair0,
                    Rev::Pair0 => {
                        if bit {
                            Rev::Start1
                        } else {
                            Rev::PairBit
                        }
                    }
                    Rev::PairBit => Rev::Pair0,
                    Rev::Start1 => Rev::Hdr(3 + k),
                    Rev::Hdr(1) if matches!(goal, RevGoal::SetF2(_)) => {
                        let RevGoal::SetF2(b) = goal else { unreachable!() };
                        n.pc = (**then).clone();
                        return out(n, Cell::Sym(self.bit(*b)), Move::Right);
                    }
                    Rev::Hdr(0) => {
                        if bit {
                            n.pc = (**then).clone();
                            return out(n, read, Move::Left);
                        }
                        Rev::Term2
                    }
                    Rev::Hdr(i) => Rev::Hdr(i - 1),
                };
                n.pc = Pc::Rev { rs: next, goal: *goal, then: then.clone() };
                out(n, read, Move::Left)
            }
            Pc::Fwd { cur, stop, then } => {
                if *stop == Stop::AtFinal && *cur == Cur::Zeros && bit {
                    n.pc = (**then).clone();
                    return out(n, read, Move::Right);
                }
                if *stop == Stop::AtRecEnd && matches!(cur, Cur::PairSecond(..)) && bit {
                    n.pc = (**then).clone();
                    return out(n, read, Move::Right);
                }
                n.pc = Pc::Fwd { cur: self.advance(cur, bit, s.has_far), stop: *stop, then: then.clone() };
                out(n, read, Move::Right)
            }
            Pc::ShiftRight { buf, cur } => {
                let mut buf = buf.clone();
                if *cur == Cur::Zeros {
                    if is1 {
                        return vec![Branch::Pruned(Prune::OutOfSpace)];
                    }
                    let w = buf.pop_front().unwrap_or(self.zero);
                    n.pc = if buf.is_empty() { Pc::ToAnchor } else { Pc::ShiftRight { buf, cur: Cur::Zeros } };
                    return out(n, Cell::Sym(w), Move::Right);
                }
                let Cell::Sym(v) = read else { return fail() };
                let w = buf.pop_front().unwrap_or(v);
                buf.push_back(v);
                n.pc = Pc::ShiftRight { buf, cur: self.advance(cur, bit, s.has_far) };
                out(n, Cell::Sym(w), Move::Right)
            }
            Pc::ShiftLeft { k: sk, cur, mod_f1, after, st } => {
                let sk = *sk;
                let set = |st: SlSt, cur: Cur| Pc::ShiftLeft { k: sk, cur, mod_f1: false, after: *after, st };
                match *st {
                    SlSt::Read => {
                        let Cell::Sym(v) = read else { return fail() };
                        let last = *cur == Cur::Sep;
                        let v = if *mod_f1 { self.one } else { v };
                        let nc = self.advance(cur, bit, s.has_far);
                        let st = if sk == 1 { SlSt::Put { v, last } } else { SlSt::GoL { v, r: sk - 1, last } };
                        n.pc = set(st, nc);
                        out(n, read, Move::Left)
                    }
                    SlSt::GoL { v, r, last } => {
                        let st = if r == 1 { SlSt::Put { v, last } } else { SlSt::GoL { v, r: r - 1, last } };
                        n.pc = set(st, cur.clone());
                        out(n, read, Move::Left)
                    }
                    SlSt::Put { v, last } => {
                        n.pc = set(SlSt::GoR { r: sk, last }, cur.clone());
                        out(n, Cell::Sym(v), Move::Right)
                    }
                    SlSt::GoR { r, last } => {
                        let st = match (r, last) {
                            (1, true) => SlSt::Fill1,
                            (1, false) => SlSt::Read,
                            _ => SlSt::GoR { r: r - 1, last },
                        };
                        n.pc = set(st, cur.clone());
                        out(n, read, Move::Right)
                    }
                    SlSt::Fill1 => {
                        n.pc = set(SlSt::FillW(sk), cur.clone());
                        out(n, read, Move::Left)
                    }
                    SlSt::FillW(r) => {
                        n.pc = if r > 1 {
                            set(SlSt::FillW(r - 1), cur.clone())
                        } else {
                            match after {
                                AfterShift::ToAnchor => Pc::ToAnchorStart,
                                AfterShift::FixPrevF2 => {
                                    let fwd = Pc::Fwd {
                                        cur: Cur::Hdr(2, RecInfo::with_f2(true)),
                                        stop: Stop::AtFinal,
                                        then: Box::new(Pc::Ready),
                                    };
                                    let rev = Pc::Rev { rs: Rev::Term2, goal: RevGoal::SetF2(true), then: Box::new(fwd) };
                                    walk(false, 1, rev)
                                }
                            }
                        };
                        out(n, zero, Move::Left)
                    }
                }
            }
            Pc::ToAnchorStart => {
                n.pc = Pc::ToAnchor;
                out(n, read, Move::Right)
            }
            Pc::ToAnchor => {
                if is1 {
                    n.pc = Pc::Ready;
                }
                out(n, read, Move::Right)
            }
            Pc::Probe { back } => match read {
                Cell::Left => {
                    n.at_left = true;
                    n.pc = match back {
                        Some(b) => walk(true, b - 1, Pc::Ready),
                        None => Pc::Fwd { cur: Cur::Delim, stop: Stop::AtFinal, then: Box::new(Pc::Ready) },
                    };
                    out(n, read, Move::Right)
                }
                Cell::Sym(v) => {
                    n.rv.push_front(v);
                    match back {
                        Some(b) => {
                            n.shape = match s.shape {
                                Fs::Empty => Fs::One,
                                Fs::One => Fs::Two,
                                _ => Fs::Big,
                            };
                            n.pc = walk(true, b - 1, Pc::Ready);
                            out(n, one, Move::Right)
                        }
                        None => {
                            n.pc = self.shift_left(1, Cur::Delim, false, AfterShift::ToAnchor);
                            out(n, read, Move::Right)
                        }
                    }
                }
                Cell::Right => fail(),
            },
            Pc::UpdWalk { u, cur } => {
                let mut u = *u;
                match cur {
                    Cur::Sep => {
                        n.parity = u.p;
                        if u.pending {
                            n.tasks.push_front(Task::Extract);
                        }
                        n.pc = Pc::ToAnchor;
                        out(n, read, Move::Right)
                    }
                    Cur::Hdr(2, _) => {
                        let process = bit != u.p;
                        let mut nc = self.advance(cur, bit, true);
                        if let Cur::Hdr(_, info) = &mut nc {
                            info.process = process;
                        }
                        n.pc = Pc::UpdWalk { u, cur: nc };
                        let w = if process { Cell::Sym(self.bit(u.p)) } else { read };
                        out(n, w, Move::Right)
                    }
                    Cur::PairSecond(_, info) if bit && info.adj.is_some() => {
                        let adj = info.adj.unwrap_or(Adj::Inc);
                        if adj == Adj::Dec && info.md1 == Some(self.sd_d1.len()) {
                            u.pending = true;
                        }
                        n.pc = Pc::CarryBack1 { u, adj, info: RecInfo { adj: None, ..info.clone() } };
                        out(n, read, Move::Left)
                    }
                    _ => {
                        let mut nc = self.advance(cur, bit, true);
                        if let Cur::HStart(0, info) = &mut nc {
                            if info.process {
                                info.adj = adj_for(u.kind, info.sigma);
                            }
                        }
                        n.pc = Pc::UpdWalk { u, cur: nc };
                        out(n, read, Move::Right)
                    }
                }
            }
            Pc::CarryBack1 { u, adj, info } => {
                n.pc = Pc::CarryCheck { u: *u, adj: *adj, info: info.clone() };
                out(n, read, Move::Left)
            }
            Pc::CarryCheck { u, adj, info } => {
                if !bit {
                    n.pc = Pc::CarryBit { u: *u, adj: *adj, info: info.clone() };
                    return out(n, read, Move::Left);
                }
                n.tasks.push_front(Task::UpdateFar(*u));
                n.pc = match adj {
                    Adj::Inc => Pc::ShiftRight {
                        buf: VecDeque::from([self.zero, self.zero]),
                        cur: Cur::PairFirst(info.clone()),
                    },
                    Adj::Dec => {
                        walk(true, 2, self.shift_left(2, Cur::PairFirst(info.clone()), false, AfterShift::ToAnchor))
                    }
                };
                out(n, read, Move::Right)
            }
            Pc::CarryBit { u, adj, info } => {
                let carry = match adj {
                    Adj::Inc => bit,
                    Adj::Dec => !bit,
                };
                if carry {
                    n.pc = Pc::CarryCheck { u: *u, adj: *adj, info: info.clone() };
                    return out(n, Cell::Sym(self.bit(!bit)), Move::Left);
                }
                n.pc = Pc::UpdWalk { u: *u, cur: Cur::PairSecond(!bit, info.clone()) };
                out(n, Cell::Sym(self.bit(!bit)), Move::Right)
            }
            Pc::ExWalk(cur) => {
                if *cur == Cur::Sep {
                    return fail();
                }
                if let Cur::PairSecond(_, info) = cur {
                    if bit && info.md == Some(self.sd_d.len()) {
                        let g = self.code.decode(&info.g).unwrap_or(self.zero);
                        let lim = self.near_limit as i64;
                        n.near.insert(if info.sigma { lim } else { -lim }, g);
                        let len = Record::encoded_len(self.near_limit, &self.code);
                        let (f1, f2) = (info.f1, info.f2);
                        if f1 && f2 {
                            n.has_far = false;
                        }
                        let cur = if f2 { Cur::Sep } else { Cur::Hdr(0, RecInfo::fresh()) };
                        let after = if !f1 && f2 { AfterShift::FixPrevF2 } else { AfterShift::ToAnchor };
                        n.pc = self.shift_left(len, cur, f1 && !f2, after);
                        return out(n, read, Move::Right);
                    }
                }
                n.pc = Pc::ExWalk(self.advance(cur, bit, true));
                out(n, read, Move::Right)
            }
            Pc::AppCount { i, d, g } => {
                if is1 {
                    return vec![Branch::Pruned(Prune::OutOfSpace)];
                }
                let need = Record::encoded_len(d.unsigned_abs(), &self.code);
                n.pc = if i + 1 >= need { Pc::AppGoSep { d: *d, g: *g } } else { Pc::AppCount { i: i + 1, d: *d, g: *g } };
                out(n, read, Move::Left)
            }
            Pc::AppGoSep { d, g } => {
                if !is1 {
                    return out(n, read, Move::Left);
                }
                if !s.has_far {
                    n.has_far = true;
                    let mut bits = self.record_bits(true, true, s.parity, *g, *d);
                    bits.push_back(self.one);
                    n.pc = Pc::WriteRec(bits);
                    return self.micro(&n, read);
                }
                let mut bits = self.record_bits(false, true, s.parity, *g, *d);
                bits.push_back(self.one);
                let fwd = Pc::Fwd {
                    cur: Cur::Hdr(2, RecInfo::with_f2(false)),
                    stop: Stop::AtRecEnd,
                    then: Box::new(Pc::WriteRec(bits)),
                };
                n.pc = Pc::Rev { rs: Rev::Term2, goal: RevGoal::SetF2(false), then: Box::new(fwd) };
                out(n, read, Move::Left)
            }
            Pc::WriteRec(bits) => {
                let mut bits = bits.clone();
                let w = bits.pop_front().unwrap_or(self.one);
                n.pc = if bits.is_empty() { Pc::ToAnchor } else { Pc::WriteRec(bits) };
                out(n, Cell::Sym(w), Move::Right)
            }
        }
    }
}

impl OfControl for EditingToOf {
    type State = EoState;

    fn input_alphabet(&self) -> &Alphabet {
        &self.source.input_alphabet
    }

    fn start(&self) -> EoState {
        EoState {
            q: self.source.start,
            at_left: true,
            near: BTreeMap::new(),
            lv: VecDeque::new(),
            rv: VecDeque::new(),
            shape: Fs::Empty,
            has_far: false,
            parity: false,
            tasks: VecDeque::new(),
            pc: Pc::Init,
        }
    }

    fn is_accepting(&self, s: &EoState) -> bool {
        match s.pc {
            Pc::Accept => true,
            Pc::Init | Pc::Ready => s.tasks.is_empty() && self.source.is_accepting(s.q),
            _ => false,
        }
    }

    fn delta(&self, s: &EoState, read: Cell) -> Out {
        match s.pc {
            Pc::Accept => vec![],
            Pc::Init => {
                let mut n = s.clone();
                n.pc = Pc::Ready;
                out(n, read, Move::Right)
            }
            Pc::Ready => self.ready(s, read),
            _ => self.micro(s, read),
        }
    }
}

impl EditingToOf {
    /// Reads back the simulated configuration from a decision point.
    pub fn decode(&self, cfg: &OfConfig<EoState>) -> std::result::Result<EditConfig<StateId>, String> {
        let s = &cfg.state;
        if !s.is_decision_point() {
            return Err("not at a decision point".into());
        }
        let tape = &cfg.tape;
        let bit = |i: isize| -> std::result::Result<bool, String> {
            match usize::try_from(i).ok().and_then(|i| tape.get(i)) {
                Some(&c) if c == self.one => Ok(true),
                Some(&c) if c == self.zero => Ok(false),
                _ => Err(format!("cell {i} is not a bookkeeping bit")),
            }
        };
        // Tape index of the anchor.
        let a = cfg.head as isize - 1;
        let mut far = Vec::new();
        let fs_start = match s.shape {
            Fs::Empty => a,
            Fs::One => a - 1,
            Fs::Two => a - 2,
            Fs::Big => {
                let mut p = a - 1;
                if !bit(p)? {
                    return Err("missing final marker".into());
                }
                p -= 1;
                while !bit(p)? {
                    p -= 1;
                }
                // p is the separator.
                let mut e = p - 1;
                if s.has_far {
                    loop {
                        if !(bit(e)? && bit(e - 1)?) {
                            return Err(format!("bad terminator ending at {e}"));
                        }
                        let mut j = e - 2;
                        while !bit(j)? {
                            j -= 2;
                        }
                        if !bit(j - 1)? {
                            return Err("bad start marker".into());
                        }
                        let start = j - 2 - (4 + self.k() as isize) + 1;
                        let bits: Vec<bool> = (start..=e).map(&bit).collect::<std::result::Result<_, _>>()?;
                        let (r, used) = Record::decode(&bits, &self.code).map_err(|x| x.to_string())?;
                        if used != bits.len() {
                            return Err("record length mismatch".into());
                        }
                        far.push((r.distance, r.gamma));
                        e = start - 1;
                        if r.f1 {
                            break;
                        }
                    }
                }
                if !bit(e)? {
                    return Err("missing delimiter".into());
                }
                e
            }
        };
        if fs_start < 0 {
            return Err("free space runs off the tape".into());
        }
        let mut left: Vec<Sym> = tape[..fs_start as usize].to_vec();
        left.extend(s.lv.iter().copied());
        let mut right: VecDeque<Sym> = s.rv.clone();
        right.extend(tape.iter().skip(a.max(0) as usize).copied());
        let mut recs: BTreeMap<i64, Sym> = s.near.clone();
        for (d, g) in far {
            if recs.insert(d, g).is_some() {
                return Err(format!("two records at distance {d}"));
            }
        }
        if let Some(x) = left.iter().chain(right.iter()).find(|&&x| !self.is_input(x)) {
            return Err(format!("noninput symbol {x:?} in the free part"));
        }
        let take = |recs: &mut BTreeMap<i64, Sym>, d: i64, seq: Option<Sym>| recs.remove(&d).or(seq);
        let mut lcells = Vec::new();
        if s.at_left {
            if !left.is_empty() || recs.keys().any(|&d| d < 1) {
                return Err("cells left of the left endmarker".into());
            }
        } else {
            let mut d = -1;
            loop {
                let c = if recs.contains_key(&d) { take(&mut recs, d, None) } else { left.pop() };
                match c {
                    Some(c) => lcells.push(c),
                    None => break,
                }
                d -= 1;
            }
            lcells.reverse();
        }
        let mut d = if s.at_left { 1 } else { 0 };
        let mut rcells = Vec::new();
        loop {
            let c = if recs.contains_key(&d) { take(&mut recs, d, None) } else { right.pop_front() };
            match c {
                Some(c) => rcells.push(c),
                None => break,
            }
            d += 1;
        }
        if !recs.is_empty() {
            return Err(format!("records out of range: {recs:?}"));
        }
        let head = if s.at_left { 0 } else { lcells.len() + 1 };
        lcells.extend(rcells);
        Ok(EditConfig { state: s.q, tape: lcells, head })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::editing::{build_palindrome_editing, run_editing, EdBuilder};
    use crate::machine::{Budget, Mode, Verdict};
    use crate::of::run_of;
    use crate::symbol::word;

    /// Accepts 0* 1 (0|1)*: deletes leading zeros, marks the 1 with X, walks
    /// to the right end and back to the mark.
    fn marker_machine() -> EditingTm {
        let mut b = EdBuilder::default();
        b.pass("start", Cell::Left, "del", Move::Right);
        b.rule("del", Cell::Sym('0'), "del", Effect::Delete);
        b.rule("del", Cell::Sym('1'), "go", Effect::Write(Cell::Sym('X'), Move::Right));
        for x in ['0', '1'] {
            b.pass("go", Cell::Sym(x), "go", Move::Right);
            b.pass("back", Cell::Sym(x), "back", Move::Left);
        }
        b.pass("go", Cell::Right, "back", Move::Left);
        b.pass("back", Cell::Sym('X'), "acc", Move::Stay);
        b.accept("acc");
        b.build("start", Alphabet::from_chars("01"), Alphabet::from_chars("01X"))
    }

    fn check_trace(t: &EditingToOf, w: &[Sym]) -> (Verdict, bool) {
        let src = run_editing(&t.source, w, &Mode::Deterministic, Budget::default(), None).unwrap();
        let tgt = run_of(t, w, &Mode::Deterministic, Budget::default(), true).unwrap();
        assert_eq!(src.result.verdict, tgt.verdict, "{w:?}");
        let src_trace: Vec<_> = src.result.trace.unwrap().into_iter().map(|s| s.config).collect();
        let tgt_trace = tgt.trace.unwrap();
        let points: Vec<_> = tgt_trace.iter().map(|s| &s.config).filter(|c| c.state.is_decision_point()).collect();
        let used_far = points.iter().any(|c| c.state.has_far);
        let decoded: Vec<_> = points.iter().map(|c| t.decode(c).unwrap()).collect();
        assert!(decoded.len() + 1 >= src_trace.len(), "{w:?}");
        assert_eq!(decoded[..], src_trace[..decoded.len()], "{w:?}");
        (tgt.verdict, used_far)
    }

    #[test]
    fn palindromes_agree_and_decode() {
        let m = build_palindrome_editing();
        let t = editing_to_of(&m, DEFAULT_SLACK).unwrap();
        for w in m.input_alphabet.words_up_to(8) {
            let src = run_editing(&m, &w, &Mode::Bfs, Budget::default(), None).unwrap();
            let tgt = run_of(&t, &w, &Mode::Bfs, Budget::default(), false).unwrap();
            assert_eq!(src.result.verdict, tgt.verdict, "{w:?}");
            assert_eq!(tgt.pruned.get(Prune::OverheadViolation), 0);
            assert_eq!(tgt.pruned.get(Prune::OutOfSpace), 0);
        }
        for w in ["abba", "abaab", "ababa", "bb", ""] {
            check_trace(&t, &word(w));
        }
    }

    #[test]
    fn near_records_with_default_limit() {
        let m = marker_machine();
        let t = editing_to_of(&m, DEFAULT_SLACK).unwrap();
        for w in m.input_alphabet.words_up_to(7) {
            let (_, far) = check_trace(&t, &w);
            assert!(!far);
        }
    }

    #[test]
    fn far_records_move_out_and_back() {
        let m = marker_machine();
        let t = editing_to_of_with_limit(&m, DEFAULT_SLACK, 1).unwrap();
        // Short inputs leave no room for a far record; the target may reject
        // them, but it must never accept wrongly.
        for w in m.input_alphabet.words_up_to(6) {
            let src = run_editing(&m, &w, &Mode::Deterministic, Budget::default(), None).unwrap();
            let tgt = run_of(&t, &w, &Mode::Deterministic, Budget::default(), false).unwrap();
            assert!(tgt.verdict != Verdict::Accept || src.result.verdict == Verdict::Accept, "{w:?}");
        }
        for w in m.input_alphabet.words_up_to(4) {
            let mut x = word("00000000000000");
            x.push('1');
            x.extend(w);
            let (v, far) = check_trace(&t, &x);
            assert_eq!(v, Verdict::Accept);
            assert!(far || x.len() < 17);
        }
        let (v, _) = check_trace(&t, &word("00000000000000"));
        assert_eq!(v, Verdict::Reject);
    }

    #[test]
    fn rejects_unary_input_alphabet() {
        let mut b = EdBuilder::default();
        b.accept("s");
        let m = b.build("s", Alphabet::from_chars("a"), Alphabet::from_chars("a"));
        assert!(editing_to_of(&m, 4).is_err());
    }
}
