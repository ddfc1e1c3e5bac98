//! The virtual CPU: registers, stacks, heads and the instruction interpreter.
//!
//! One call to [`CpuState::execute`] runs exactly one instruction together
//! with the nops it consumes as arguments. Everything that touches the
//! outside world (inputs, outputs, the navigation maze) goes through the
//! [`CpuIo`] trait; replication bookkeeping is shared with
//! [`crate::organism`].

use std::fmt::Write as _;

use crate::isa::{
    find_label_start, ArgMode, Inst, InstructionSet, Matching, SearchMode, MAX_LABEL_SIZE,
    MAX_NOPS,
};
use crate::organism::{self, DivideRules};

pub const STACK_DEPTH: usize = 10;

pub const IP: usize = 0;
pub const READ: usize = 1;
pub const WRITE: usize = 2;
pub const FLOW: usize = 3;

const BX: u8 = 1;
const CX: u8 = 2;

/// Navigation actions forwarded to the environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NavAction {
    Sense,
    Move,
    RotateLeft,
    RotateRight,
}

/// The organism's window onto its environment.
pub trait CpuIo {
    fn input(&mut self) -> u32;
    fn output(&mut self, value: u32);
    /// Performs a navigation action; `Sense` returns the cue value.
    fn navigate(&mut self, _action: NavAction) -> u32 {
        0
    }
}

/// An environment that supplies zeros and ignores outputs.
#[derive(Debug, Default)]
pub struct NullIo;

impl CpuIo for NullIo {
    fn input(&mut self) -> u32 {
        0
    }
    fn output(&mut self, _value: u32) {}
}

/// Bounded LIFO; pushing onto a full stack drops the bottom value.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stack {
    items: [u32; STACK_DEPTH],
    len: usize,
}

impl Stack {
    pub fn push(&mut self, value: u32) {
        if self.len == STACK_DEPTH {
            self.items.copy_within(1.., 0);
            self.len -= 1;
        }
        self.items[self.len] = value;
        self.len += 1;
    }

    /// Pops the top value; an empty stack yields 0.
    pub fn pop(&mut self) -> u32 {
        if self.len == 0 {
            return 0;
        }
        self.len -= 1;
        self.items[self.len]
    }

    pub fn top(&self) -> Option<u32> {
        self.len.checked_sub(1).map(|i| self.items[i])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn clear(&mut self) {
        self.len = 0;
    }
}

/// Ring of the most recently copied instructions (room for a label marker
/// plus a full label).
#[derive(Debug, Clone)]
pub struct CopyHistory {
    ring: [Inst; MAX_LABEL_SIZE + 1],
    next: usize,
    len: usize,
}

impl Default for CopyHistory {
    fn default() -> Self {
        CopyHistory {
            ring: [Inst::NopA; MAX_LABEL_SIZE + 1],
            next: 0,
            len: 0,
        }
    }
}

impl CopyHistory {
    const CAP: usize = MAX_LABEL_SIZE + 1;

    pub fn push(&mut self, inst: Inst) {
        self.ring[self.next] = inst;
        self.next = (self.next + 1) % Self::CAP;
        self.len = (self.len + 1).min(Self::CAP);
    }

    pub fn clear(&mut self) {
        self.len = 0;
        self.next = 0;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The `k`-th most recent entry (0 = newest).
    pub fn recent(&self, k: usize) -> Option<Inst> {
        (k < self.len).then(|| self.ring[(self.next + Self::CAP - 1 - k) % Self::CAP])
    }

    /// Oldest-to-newest contents.
    pub fn to_vec(&self) -> Vec<Inst> {
        (0..self.len).rev().filter_map(|k| self.recent(k)).collect()
    }
}

/// How the companion operands of a multi-register instruction follow the
/// first one in single-nop mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// Only the first operand is modified; the rest keep their defaults.
    Fixed,
    /// Each further operand is the next register after the first.
    Next,
}

/// What trailing nops mean for an instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Nops are not read.
    Plain,
    /// Register operands with their defaults.
    Regs(&'static [u8], Pairing),
    /// A single head selector.
    Head,
    /// A full label.
    Label,
}

pub fn shape(inst: Inst) -> Shape {
    use Inst::*;
    const B: &[u8] = &[BX];
    const C: &[u8] = &[CX];
    const BBC: &[u8] = &[BX, BX, CX];
    const BC: &[u8] = &[BX, CX];
    match inst {
        Add | Sub | Nand => Shape::Regs(BBC, Pairing::Fixed),
        Inc | Dec | ShiftL | ShiftR | Push | Pop | Io | Input | Output | IfEqu0 | IfNot0
        | IfGtr0 | IfLess0 | SgSense => Shape::Regs(B, Pairing::Fixed),
        SetFlow => Shape::Regs(C, Pairing::Fixed),
        IfNEqu | IfLess | Swap => Shape::Regs(BC, Pairing::Next),
        MovHead | MovHeadIfNEqu | MovHeadIfLess | JmpHead | GetHead => Shape::Head,
        IfGtrX | IfEquX | IfCopiedSeqComp | IfCopiedSeqDirect | IfCopiedLblComp
        | IfCopiedLblDirect | SearchSeqCompS | SearchSeqDirectS | SearchLblCompS
        | SearchLblDirectS | SearchSeqDirectF | SearchSeqDirectB | SearchLblDirectF
        | SearchLblDirectB | Goto | GotoIfNEqu | GotoIfLess => Shape::Label,
        _ => Shape::Plain,
    }
}

/// How many of `run` available trailing nops `inst` consumes.
#[inline]
pub fn nops_consumed(inst: Inst, run: usize, mode: ArgMode) -> usize {
    match shape(inst) {
        Shape::Plain => 0,
        Shape::Regs(defaults, _) => match mode {
            ArgMode::SingleNop => run.min(1),
            ArgMode::FullyAssociative => run.min(defaults.len()),
        },
        Shape::Head => run.min(1),
        Shape::Label => run.min(MAX_LABEL_SIZE),
    }
}

/// Register `reg` moved `by` places. The three base registers cycle among
/// themselves so that added registers are only reachable through their
/// own nops.
#[inline]
fn shift_register(reg: u8, by: u8, register_count: usize) -> u8 {
    if reg < 3 {
        (reg + by) % 3
    } else {
        ((reg as usize + by as usize) % register_count) as u8
    }
}

/// Resolves register operands from the instruction defaults and the nops
/// it consumed.
pub fn resolve_args(
    defaults: &[u8],
    pairing: Pairing,
    nops: &[u8],
    mode: ArgMode,
    register_count: usize,
) -> Vec<u8> {
    let mut out = [0u8; 3];
    let n = resolve_into(&mut out, defaults, pairing, nops, mode, register_count);
    out[..n].to_vec()
}

#[inline]
fn resolve_into(
    out: &mut [u8; 3],
    defaults: &[u8],
    pairing: Pairing,
    nops: &[u8],
    mode: ArgMode,
    register_count: usize,
) -> usize {
    let n = defaults.len();
    out[..n].copy_from_slice(defaults);
    let Some(&first) = nops.first() else {
        return n;
    };
    match mode {
        ArgMode::SingleNop => {
            out[0] = first;
            if pairing == Pairing::Next {
                for (i, slot) in out.iter_mut().enumerate().take(n).skip(1) {
                    *slot = shift_register(first, i as u8, register_count);
                }
            }
        }
        ArgMode::FullyAssociative => {
            for i in 0..n {
                let offset = (defaults[i] + 3 - defaults[0]) % 3;
                out[i] = shift_register(first, offset, register_count);
            }
            for (i, &nop) in nops.iter().enumerate().take(n).skip(1) {
                out[i] = nop;
            }
        }
    }
    n
}

/// Maps a head-selector nop to a head; without a nop the default is used.
pub fn resolve_head(nops: &[u8], default_head: usize) -> usize {
    nops.first().map_or(default_head, |&n| n as usize)
}

/// The constant compared against by `if-gtr-x` and `if-equ-x`.
pub fn ifx_constant(nops: &[u8]) -> u32 {
    nops.iter().fold(1u32, |v, &n| match n {
        0 => v ^ 0x8000_0000,
        1 => v << 1,
        2 => v << 2,
        3 => v << 3,
        _ => v,
    })
}

/// Whether the most recently copied instructions match `pattern`.
///
/// With `require_label` the matched run must be directly preceded by the
/// `label` instruction in the copy history.
pub fn if_copied(
    history: &CopyHistory,
    pattern: &[u8],
    matching: Matching,
    require_label: bool,
    nop_count: usize,
) -> bool {
    if pattern.is_empty() || history.len() < pattern.len() + usize::from(require_label) {
        return false;
    }
    let k = pattern.len();
    let tail_ok = pattern.iter().enumerate().all(|(i, &p)| {
        let want = match matching {
            Matching::Complement => ((p as usize + 1) % nop_count) as u8,
            Matching::Direct => p,
        };
        history.recent(k - 1 - i).and_then(Inst::nop_index) == Some(want)
    });
    tail_ok && (!require_label || history.recent(k) == Some(Inst::Label))
}

/// What one executed instruction did beyond changing CPU state.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepEffects {
    pub cycles: u32,
    pub output: Option<u32>,
    /// Offspring genome extracted by a successful `h-divide`, before
    /// mutation.
    pub offspring: Option<Vec<Inst>>,
    pub fault: bool,
}

/// The executing machine.
#[derive(Debug, Clone)]
pub struct CpuState {
    pub regs: [u32; MAX_NOPS],
    pub stacks: [Stack; 2],
    pub active_stack: usize,
    pub heads: [usize; MAX_NOPS],
    pub memory: Vec<Inst>,
    /// Marks memory sites written by `h-copy` since the last allocation.
    pub copied: Vec<bool>,
    pub copy_history: CopyHistory,
    /// Instructions executed this lifetime.
    pub executed: u64,
    pub faults: u64,
    /// Memory length before the active allocation, if any.
    pub alloc_base: Option<usize>,
}

impl CpuState {
    pub fn new(genome: Vec<Inst>) -> CpuState {
        assert!(!genome.is_empty(), "genome must not be empty");
        let len = genome.len();
        CpuState {
            regs: [0; MAX_NOPS],
            stacks: Default::default(),
            active_stack: 0,
            heads: [0; MAX_NOPS],
            memory: genome,
            copied: vec![false; len],
            copy_history: CopyHistory::default(),
            executed: 0,
            faults: 0,
            alloc_base: None,
        }
    }

    /// Clears all registers, stacks, heads and histories.
    pub fn reset(&mut self) {
        self.regs = [0; MAX_NOPS];
        self.stacks[0].clear();
        self.stacks[1].clear();
        self.active_stack = 0;
        self.heads = [0; MAX_NOPS];
        self.copy_history.clear();
        self.copied.clear();
        self.copied.resize(self.memory.len(), false);
        self.executed = 0;
        self.alloc_base = None;
    }

    pub fn ip(&self) -> usize {
        self.heads[IP]
    }

    pub fn stack(&self) -> &Stack {
        &self.stacks[self.active_stack]
    }

    #[inline(always)]
    fn wrap(&self, pos: usize) -> usize {
        let len = self.memory.len();
        if pos >= len {
            pos % len
        } else {
            pos
        }
    }

    #[inline(always)]
    fn offset(&self, pos: usize, by: u32) -> usize {
        let len = self.memory.len() as i64;
        ((pos as i64 + by as i32 as i64).rem_euclid(len)) as usize
    }

    /// Reads up to `max` nops after `pos` into `buf`.
    #[inline]
    fn read_nops(&self, pos: usize, max: usize, buf: &mut [u8; MAX_LABEL_SIZE]) -> usize {
        let len = self.memory.len();
        let limit = max.min(len).min(MAX_LABEL_SIZE);
        let mut p = self.wrap(pos + 1);
        let mut n = 0;
        while n < limit {
            match self.memory[p].nop_index() {
                Some(v) => buf[n] = v,
                None => break,
            }
            n += 1;
            p += 1;
            if p == len {
                p = 0;
            }
        }
        n
    }

    /// Number of nops the instruction at `pos` would consume.
    #[inline]
    fn span_at(&self, pos: usize, mode: ArgMode) -> usize {
        let inst = self.memory[pos];
        let want = match shape(inst) {
            Shape::Plain => return 0,
            Shape::Regs(d, _) => match mode {
                ArgMode::SingleNop => 1,
                ArgMode::FullyAssociative => d.len(),
            },
            Shape::Head => 1,
            Shape::Label => MAX_LABEL_SIZE,
        };
        crate::isa::nop_run_len(&self.memory, pos + 1, want)
    }

    #[inline]
    fn regs_for(&self, isa: &InstructionSet, ip: usize, defaults: &'static [u8], pairing: Pairing) -> ([u8; 3], usize) {
        let mut buf = [0u8; MAX_LABEL_SIZE];
        let want = match isa.arg_mode {
            ArgMode::SingleNop => 1,
            ArgMode::FullyAssociative => defaults.len(),
        };
        let n = self.read_nops(ip, want, &mut buf);
        let mut out = [0u8; 3];
        resolve_into(&mut out, defaults, pairing, &buf[..n], isa.arg_mode, isa.register_count);
        (out, n)
    }

    #[inline]
    fn head_for(&self, ip: usize, default: usize) -> (usize, usize) {
        let mut buf = [0u8; MAX_LABEL_SIZE];
        let n = self.read_nops(ip, 1, &mut buf);
        (resolve_head(&buf[..n], default), n)
    }

    #[inline(always)]
    fn reg(&self, r: u8) -> u32 {
        self.regs[r as usize]
    }

    /// Position after the instruction at `pos` together with its arguments.
    #[inline]
    fn skip_unit(&self, pos: usize, mode: ArgMode) -> usize {
        let pos = self.wrap(pos);
        self.wrap(pos + 1 + self.span_at(pos, mode))
    }

    /// Executes exactly one instruction.
    pub fn execute(
        &mut self,
        isa: &InstructionSet,
        rules: &DivideRules,
        io: &mut impl CpuIo,
    ) -> StepEffects {
        use Inst::*;
        let mut fx = StepEffects {
            cycles: 1,
            ..Default::default()
        };
        let ip = self.wrap(self.heads[IP]);
        let inst = self.memory[ip];
        self.executed += 1;
        // Next IP after the instruction and consumed nops; `None` when the
        // instruction placed IP itself.
        let mut consumed = 0usize;
        let mut condition = true;
        let mut jump: Option<usize> = None;
        match inst {
            Add | Sub | Nand => {
                let (r, n) = self.regs_for(isa, ip, &[BX, BX, CX], Pairing::Fixed);
                consumed = n;
                let (a, b) = (self.reg(r[1]), self.reg(r[2]));
                self.regs[r[0] as usize] = match inst {
                    Add => a.wrapping_add(b),
                    Sub => a.wrapping_sub(b),
                    _ => !(a & b),
                };
            }
            Inc | Dec | ShiftL | ShiftR => {
                let (r, n) = self.regs_for(isa, ip, &[BX], Pairing::Fixed);
                consumed = n;
                let v = &mut self.regs[r[0] as usize];
                *v = match inst {
                    Inc => v.wrapping_add(1),
                    Dec => v.wrapping_sub(1),
                    ShiftL => *v << 1,
                    _ => *v >> 1,
                };
            }
            Push => {
                let (r, n) = self.regs_for(isa, ip, &[BX], Pairing::Fixed);
                consumed = n;
                let v = self.reg(r[0]);
                self.stacks[self.active_stack].push(v);
            }
            Pop => {
                let (r, n) = self.regs_for(isa, ip, &[BX], Pairing::Fixed);
                consumed = n;
                self.regs[r[0] as usize] = self.stacks[self.active_stack].pop();
            }
            SwapStk => self.active_stack ^= 1,
            Swap => {
                let (r, n) = self.regs_for(isa, ip, &[BX, CX], Pairing::Next);
                consumed = n;
                self.regs.swap(r[0] as usize, r[1] as usize);
            }
            Io | Input | Output => {
                let (r, n) = self.regs_for(isa, ip, &[BX], Pairing::Fixed);
                consumed = n;
                let r = r[0] as usize;
                if inst != Input {
                    let v = self.regs[r];
                    io.output(v);
                    fx.output = Some(v);
                }
                if inst != Output {
                    self.regs[r] = io.input();
                }
            }
            IfNEqu | IfLess => {
                let (r, n) = self.regs_for(isa, ip, &[BX, CX], Pairing::Next);
                consumed = n;
                let (a, b) = (self.reg(r[0]) as i32, self.reg(r[1]) as i32);
                condition = if inst == IfNEqu { a != b } else { a < b };
            }
            IfEqu0 | IfNot0 | IfGtr0 | IfLess0 => {
                let (r, n) = self.regs_for(isa, ip, &[BX], Pairing::Fixed);
                consumed = n;
                let a = self.reg(r[0]) as i32;
                condition = match inst {
                    IfEqu0 => a == 0,
                    IfNot0 => a != 0,
                    IfGtr0 => a > 0,
                    _ => a < 0,
                };
            }
            IfGtrX | IfEquX => {
                let mut buf = [0u8; MAX_LABEL_SIZE];
                consumed = self.read_nops(ip, MAX_LABEL_SIZE, &mut buf);
                let x = ifx_constant(&buf[..consumed]) as i32;
                let b = self.reg(BX) as i32;
                condition = if inst == IfGtrX { b > x } else { b == x };
            }
            IfCopiedSeqComp | IfCopiedSeqDirect | IfCopiedLblComp | IfCopiedLblDirect => {
                let mut buf = [0u8; MAX_LABEL_SIZE];
                consumed = self.read_nops(ip, MAX_LABEL_SIZE, &mut buf);
                let matching = match inst {
                    IfCopiedSeqComp | IfCopiedLblComp => Matching::Complement,
                    _ => Matching::Direct,
                };
                let lbl = matches!(inst, IfCopiedLblComp | IfCopiedLblDirect);
                condition =
                    if_copied(&self.copy_history, &buf[..consumed], matching, lbl, isa.nop_count);
            }
            MovHead | MovHeadIfNEqu | MovHeadIfLess => {
                let (h, n) = self.head_for(ip, IP);
                consumed = n;
                let go = match inst {
                    MovHead => true,
                    MovHeadIfNEqu => self.reg(BX) != self.reg(CX),
                    _ => (self.reg(BX) as i32) < (self.reg(CX) as i32),
                };
                if go {
                    let target = self.heads[FLOW];
                    if h == IP {
                        jump = Some(target);
                    } else {
                        self.heads[h] = target;
                    }
                }
            }
            JmpHead => {
                let default = if isa.jmp_head_default_flow { FLOW } else { IP };
                let (h, n) = self.head_for(ip, default);
                consumed = n;
                let amount = self.reg(CX);
                if h == IP {
                    jump = Some(self.offset(ip + 1 + n, amount));
                } else {
                    self.heads[h] = self.offset(self.heads[h], amount);
                }
            }
            GetHead => {
                let (h, n) = self.head_for(ip, IP);
                consumed = n;
                self.regs[CX as usize] = if h == IP { ip } else { self.heads[h] } as u32;
            }
            SetFlow => {
                let (r, n) = self.regs_for(isa, ip, &[CX], Pairing::Fixed);
                consumed = n;
                self.heads[FLOW] = self.offset(0, self.reg(r[0]));
            }
            SearchSeqCompS | SearchSeqDirectS | SearchLblCompS | SearchLblDirectS
            | SearchSeqDirectF | SearchSeqDirectB | SearchLblDirectF | SearchLblDirectB => {
                let mut buf = [0u8; MAX_LABEL_SIZE];
                consumed = self.read_nops(ip, MAX_LABEL_SIZE, &mut buf);
                let (mode, matching, lbl) = match inst {
                    SearchSeqCompS => (SearchMode::FromStart, Matching::Complement, false),
                    SearchSeqDirectS => (SearchMode::FromStart, Matching::Direct, false),
                    SearchLblCompS => (SearchMode::FromStart, Matching::Complement, true),
                    SearchLblDirectS => (SearchMode::FromStart, Matching::Direct, true),
                    SearchSeqDirectF => (SearchMode::Forward, Matching::Direct, false),
                    SearchSeqDirectB => (SearchMode::Backward, Matching::Direct, false),
                    SearchLblDirectF => (SearchMode::Forward, Matching::Direct, true),
                    _ => (SearchMode::Backward, Matching::Direct, true),
                };
                let found = find_label_start(
                    &self.memory,
                    &buf[..consumed],
                    ip,
                    mode,
                    matching,
                    lbl,
                    isa.nop_count,
                );
                match found {
                    Some((start, after)) => {
                        let len = self.memory.len();
                        self.heads[FLOW] = after;
                        self.regs[BX as usize] = consumed as u32;
                        self.regs[CX as usize] = ((start + len - ip) % len) as u32;
                    }
                    None => {
                        self.heads[FLOW] = self.wrap(ip + 1);
                        self.regs[BX as usize] = 0;
                        self.regs[CX as usize] = 0;
                    }
                }
            }
            Goto | GotoIfNEqu | GotoIfLess => {
                let mut buf = [0u8; MAX_LABEL_SIZE];
                consumed = self.read_nops(ip, MAX_LABEL_SIZE, &mut buf);
                let go = match inst {
                    Goto => true,
                    GotoIfNEqu => self.reg(BX) != self.reg(CX),
                    _ => (self.reg(BX) as i32) < (self.reg(CX) as i32),
                };
                if go {
                    jump = crate::isa::find_label(
                        &self.memory,
                        &buf[..consumed],
                        ip,
                        SearchMode::Forward,
                        Matching::Direct,
                        true,
                        isa.nop_count,
                    );
                }
            }
            HAlloc => {
                if !organism::h_alloc(self, rules) {
                    self.faults += 1;
                    fx.fault = true;
                }
            }
            HCopy => {
                if !organism::h_copy(self) {
                    self.faults += 1;
                    fx.fault = true;
                }
            }
            HDivide => match organism::divide_extract(self, rules) {
                Some(child) => {
                    // Parent state was reset; execution resumes at its start.
                    fx.offspring = Some(child);
                    return fx;
                }
                None => {
                    self.faults += 1;
                    fx.fault = true;
                }
            },
            SgMove => {
                io.navigate(NavAction::Move);
            }
            SgRotateL => {
                io.navigate(NavAction::RotateLeft);
            }
            SgRotateR => {
                io.navigate(NavAction::RotateRight);
            }
            SgSense => {
                let (r, n) = self.regs_for(isa, ip, &[BX], Pairing::Fixed);
                consumed = n;
                self.regs[r[0] as usize] = io.navigate(NavAction::Sense);
            }
            // nops and `label`
            _ => {}
        }
        let mut next = match jump {
            Some(target) => target,
            None => self.wrap(ip + 1 + consumed),
        };
        if !condition {
            next = self.skip_unit(next, isa.arg_mode);
        }
        self.heads[IP] = next;
        fx
    }

    /// Describes the operands the instruction at IP would use.
    pub fn describe_args(&self, isa: &InstructionSet) -> String {
        let ip = self.wrap(self.heads[IP]);
        let inst = self.memory[ip];
        let reg_name = |r: u8| format!("{}X", (b'A' + r) as char);
        match shape(inst) {
            Shape::Plain => String::new(),
            Shape::Regs(d, p) => {
                let (r, n) = self.regs_for(isa, ip, d, p);
                r[..d.len()]
                    .iter()
                    .map(|&x| reg_name(x))
                    .collect::<Vec<_>>()
                    .join(" ")
                    + &format!(" nops={n}")
            }
            Shape::Head => {
                let default = if inst == Inst::JmpHead && isa.jmp_head_default_flow { FLOW } else { IP };
                let (h, _) = self.head_for(ip, default);
                const NAMES: [&str; 4] = ["IP", "READ", "WRITE", "FLOW"];
                NAMES.get(h).map_or_else(|| format!("H{h}"), |s| s.to_string())
            }
            Shape::Label => {
                let mut buf = [0u8; MAX_LABEL_SIZE];
                let n = self.read_nops(ip, MAX_LABEL_SIZE, &mut buf);
                buf[..n].iter().map(|&x| ((b'A' + x) as char).to_string()).collect::<Vec<_>>().join("")
            }
        }
    }

    /// One trace line: cycle, IP, instruction, resolved args, registers and
    /// the active stack top.
    pub fn trace_line(&self, isa: &InstructionSet, cycle: u64) -> String {
        let ip = self.wrap(self.heads[IP]);
        let mut line = format!(
            "{cycle},{ip},{},{},",
            self.memory[ip],
            self.describe_args(isa)
        );
        for (i, r) in self.regs[..isa.register_count].iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            let _ = write!(line, "{}", *r as i32);
        }
        match self.stack().top() {
            Some(t) => {
                let _ = write!(line, ",{}", t as i32);
            }
            None => line.push_str(",-"),
        }
        line
    }
}
