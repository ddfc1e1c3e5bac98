//! Instruction identifiers, instruction-set rosters and label matching.
//!
//! Genomes are stored as plain [`Inst`] values. The roster of an
//! [`InstructionSet`] only restricts which instructions may appear (and
//! which ones mutation draws from); execution semantics are fixed per
//! instruction and live in [`crate::vcpu`].

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest label an instruction will read.
pub const MAX_LABEL_SIZE: usize = 10;
/// Largest memory an organism may hold.
pub const MAX_GENOME_SIZE: usize = 2048;
/// Upper bound on nops (nop-A .. nop-P) and therefore on registers.
pub const MAX_NOPS: usize = 16;

macro_rules! instructions {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Every instruction known to the virtual CPU.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        #[repr(u8)]
        pub enum Inst {
            $($variant),*
        }

        impl Inst {
            pub const ALL: &'static [Inst] = &[$(Inst::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Inst::$variant => $name),*
                }
            }
        }
    };
}

instructions! {
    NopA => "nop-A", NopB => "nop-B", NopC => "nop-C", NopD => "nop-D",
    NopE => "nop-E", NopF => "nop-F", NopG => "nop-G", NopH => "nop-H",
    NopI => "nop-I", NopJ => "nop-J", NopK => "nop-K", NopL => "nop-L",
    NopM => "nop-M", NopN => "nop-N", NopO => "nop-O", NopP => "nop-P",
    Label => "label",
    Add => "add",
    Sub => "sub",
    Inc => "inc",
    Dec => "dec",
    Nand => "nand",
    ShiftL => "shift-l",
    ShiftR => "shift-r",
    Push => "push",
    Pop => "pop",
    SwapStk => "swap-stk",
    Swap => "swap",
    Io => "IO",
    Input => "input",
    Output => "output",
    IfNEqu => "if-n-equ",
    IfLess => "if-less",
    IfEqu0 => "if-equ-0",
    IfNot0 => "if-not-0",
    IfGtr0 => "if-gtr-0",
    IfLess0 => "if-less-0",
    IfGtrX => "if-gtr-x",
    IfEquX => "if-equ-x",
    IfCopiedSeqComp => "if-copied-seq-comp",
    IfCopiedSeqDirect => "if-copied-seq-direct",
    IfCopiedLblComp => "if-copied-lbl-comp",
    IfCopiedLblDirect => "if-copied-lbl-direct",
    MovHead => "mov-head",
    MovHeadIfNEqu => "mov-head-if-n-equ",
    MovHeadIfLess => "mov-head-if-less",
    JmpHead => "jmp-head",
    GetHead => "get-head",
    SetFlow => "set-flow",
    SearchSeqCompS => "search-seq-comp-s",
    SearchSeqDirectS => "search-seq-direct-s",
    SearchLblCompS => "search-lbl-comp-s",
    SearchLblDirectS => "search-lbl-direct-s",
    SearchSeqDirectF => "search-seq-direct-f",
    SearchSeqDirectB => "search-seq-direct-b",
    SearchLblDirectF => "search-lbl-direct-f",
    SearchLblDirectB => "search-lbl-direct-b",
    Goto => "goto",
    GotoIfNEqu => "goto-if-n-equ",
    GotoIfLess => "goto-if-less",
    HAlloc => "h-alloc",
    HCopy => "h-copy",
    HDivide => "h-divide",
    SgMove => "sg-move",
    SgRotateL => "sg-rotate-l",
    SgRotateR => "sg-rotate-r",
    SgSense => "sg-sense",
}

impl Inst {
    /// Index of this instruction as a nop (nop-A = 0), if it is one.
    #[inline(always)]
    pub fn nop_index(self) -> Option<u8> {
        let v = self as u8;
        if v < MAX_NOPS as u8 {
            Some(v)
        } else {
            None
        }
    }

    #[inline(always)]
    pub fn is_nop(self) -> bool {
        (self as u8) < MAX_NOPS as u8
    }

    /// The nop with the given index.
    pub fn nop(index: u8) -> Inst {
        assert!((index as usize) < MAX_NOPS, "nop index {index} out of range");
        Inst::ALL[index as usize]
    }

    /// Parses an instruction name, accepting the historical aliases
    /// `h-search` and `if-label`.
    pub fn from_name(name: &str) -> Option<Inst> {
        match name {
            "h-search" => return Some(Inst::SearchSeqCompS),
            "if-label" => return Some(Inst::IfCopiedSeqComp),
            "io" => return Some(Inst::Io),
            _ => {}
        }
        Inst::ALL.iter().copied().find(|i| i.name() == name)
    }
}

impl fmt::Display for Inst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Inst {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Inst::from_name(s).ok_or_else(|| Error::UnknownInstruction(s.to_string()))
    }
}

/// How multiple trailing nops modify an instruction's operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgMode {
    /// At most one nop modifies the primary operand.
    SingleNop,
    /// The first nop rebases all operands, later nops override positionally.
    FullyAssociative,
}

/// Label matching algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Matching {
    Complement,
    Direct,
}

/// Where a label scan begins and in which direction it proceeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    FromStart,
    Forward,
    Backward,
}

/// The named instruction sets that can be built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetName {
    Heads,
    Fa,
    Registers(u8),
    Label,
    LabelDirect,
    LabelBoth,
    LabelSeq,
    LabelSeqDirect,
    LabelDirectSeq,
    LabelSeqBoth,
    SplitIo,
    SearchDirectional,
    SearchGoto,
    SearchGotoIf,
    FlowIf0,
    FlowIfX,
    FlowMvH,
    FlowIf0MvH,
    FlowIfXMvH,
    FlowIf0IfXMvH,
    HeadsEx,
}

impl SetName {
    /// Every buildable set, in the order the comparisons were run.
    pub const ALL: &'static [SetName] = &[
        SetName::Heads,
        SetName::Fa,
        SetName::Registers(4),
        SetName::Registers(5),
        SetName::Registers(6),
        SetName::Registers(7),
        SetName::Registers(8),
        SetName::Registers(12),
        SetName::Registers(16),
        SetName::Label,
        SetName::LabelDirect,
        SetName::LabelBoth,
        SetName::LabelSeq,
        SetName::LabelSeqDirect,
        SetName::LabelDirectSeq,
        SetName::LabelSeqBoth,
        SetName::SplitIo,
        SetName::SearchDirectional,
        SetName::SearchGoto,
        SetName::SearchGotoIf,
        SetName::FlowIf0,
        SetName::FlowIfX,
        SetName::FlowMvH,
        SetName::FlowIf0MvH,
        SetName::FlowIfXMvH,
        SetName::FlowIf0IfXMvH,
        SetName::HeadsEx,
    ];

    pub fn as_str(&self) -> String {
        match self {
            SetName::Heads => "Heads".into(),
            SetName::Fa => "FA".into(),
            SetName::Registers(n) => format!("R{n}"),
            SetName::Label => "Label".into(),
            SetName::LabelDirect => "Label-Direct".into(),
            SetName::LabelBoth => "Label-Both".into(),
            SetName::LabelSeq => "Label-Seq".into(),
            SetName::LabelSeqDirect => "Label-Seq-Direct".into(),
            SetName::LabelDirectSeq => "Label-Direct-Seq".into(),
            SetName::LabelSeqBoth => "Label-Seq-Both".into(),
            SetName::SplitIo => "Split-IO".into(),
            SetName::SearchDirectional => "Search-Directional".into(),
            SetName::SearchGoto => "Search-Goto".into(),
            SetName::SearchGotoIf => "Search-GotoIf".into(),
            SetName::FlowIf0 => "Flow-If0".into(),
            SetName::FlowIfX => "Flow-IfX".into(),
            SetName::FlowMvH => "Flow-MvH".into(),
            SetName::FlowIf0MvH => "Flow-If0-MvH".into(),
            SetName::FlowIfXMvH => "Flow-IfX-MvH".into(),
            SetName::FlowIf0IfXMvH => "Flow-If0-IfX-MvH".into(),
            SetName::HeadsEx => "Heads-EX".into(),
        }
    }
}

impl fmt::Display for SetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_str())
    }
}

impl FromStr for SetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let name = match s {
            "Heads" => SetName::Heads,
            "FA" | "Fully-Associative" => SetName::Fa,
            "Label" => SetName::Label,
            "Label-Direct" => SetName::LabelDirect,
            "Label-Both" => SetName::LabelBoth,
            "Label-Seq" => SetName::LabelSeq,
            "Label-Seq-Direct" => SetName::LabelSeqDirect,
            "Label-Direct-Seq" => SetName::LabelDirectSeq,
            "Label-Seq-Both" => SetName::LabelSeqBoth,
            "Split-IO" => SetName::SplitIo,
            "Search-Directional" => SetName::SearchDirectional,
            "Search-Goto" => SetName::SearchGoto,
            "Search-GotoIf" => SetName::SearchGotoIf,
            "Flow-If0" => SetName::FlowIf0,
            "Flow-IfX" => SetName::FlowIfX,
            "Flow-MvH" | "Flow-MovHead" => SetName::FlowMvH,
            "Flow-If0-MvH" | "Flow-If0-MovHead" => SetName::FlowIf0MvH,
            "Flow-IfX-MvH" | "Flow-IfX-MovHead" => SetName::FlowIfXMvH,
            "Flow-If0-IfX-MvH" | "Flow-If0-IfX-MovHead" => SetName::FlowIf0IfXMvH,
            "Heads-EX" => SetName::HeadsEx,
            other => match other.strip_prefix('R').and_then(|n| n.parse::<u8>().ok()) {
                Some(n @ (4 | 5 | 6 | 7 | 8 | 12 | 16)) => SetName::Registers(n),
                _ => return Err(Error::UnknownSet(s.to_string())),
            },
        };
        Ok(name)
    }
}

/// A genetic alphabet together with its hardware conventions.
#[derive(Debug, Clone, PartialEq)]
pub struct InstructionSet {
    pub name: String,
    pub roster: Vec<Inst>,
    pub nop_count: usize,
    pub register_count: usize,
    pub arg_mode: ArgMode,
    /// When set, `jmp-head` without a nop moves FLOW instead of IP.
    pub jmp_head_default_flow: bool,
}

const HEADS_ROSTER: [Inst; 26] = [
    Inst::NopA,
    Inst::NopB,
    Inst::NopC,
    Inst::IfNEqu,
    Inst::IfLess,
    Inst::IfCopiedSeqComp,
    Inst::MovHead,
    Inst::JmpHead,
    Inst::GetHead,
    Inst::SetFlow,
    Inst::ShiftR,
    Inst::ShiftL,
    Inst::Inc,
    Inst::Dec,
    Inst::Push,
    Inst::Pop,
    Inst::SwapStk,
    Inst::Swap,
    Inst::Add,
    Inst::Sub,
    Inst::Nand,
    Inst::HCopy,
    Inst::HAlloc,
    Inst::HDivide,
    Inst::Io,
    Inst::SearchSeqCompS,
];

/// The label/search columns that distinguish the label-handling sets.
const LABEL_COLUMNS: [Inst; 9] = [
    Inst::Label,
    Inst::IfCopiedLblComp,
    Inst::IfCopiedLblDirect,
    Inst::IfCopiedSeqComp,
    Inst::IfCopiedSeqDirect,
    Inst::SearchLblCompS,
    Inst::SearchLblDirectS,
    Inst::SearchSeqCompS,
    Inst::SearchSeqDirectS,
];

/// Column marks per label set, in `LABEL_COLUMNS` order.
fn label_marks(name: SetName) -> Option<[bool; 9]> {
    const X: bool = true;
    const O: bool = false;
    Some(match name {
        SetName::Label => [X, X, O, O, O, X, O, O, O],
        SetName::LabelDirect => [X, O, X, O, O, O, X, O, O],
        SetName::LabelBoth => [X, X, X, O, O, X, X, O, O],
        SetName::LabelSeq => [X, X, O, X, O, X, O, X, O],
        SetName::LabelSeqDirect => [X, O, X, O, X, O, X, O, X],
        SetName::LabelDirectSeq => [X, O, X, X, O, O, X, X, O],
        SetName::LabelSeqBoth => [X, X, X, X, X, X, X, X, X],
        _ => return None,
    })
}

const IF0_GROUP: [Inst; 4] = [Inst::IfNot0, Inst::IfEqu0, Inst::IfGtr0, Inst::IfLess0];
const IFX_GROUP: [Inst; 2] = [Inst::IfGtrX, Inst::IfEquX];
const MOVHEAD_GROUP: [Inst; 2] = [Inst::MovHeadIfNEqu, Inst::MovHeadIfLess];
const DIRECTIONAL_SEARCH: [Inst; 4] = [
    Inst::SearchSeqDirectF,
    Inst::SearchSeqDirectB,
    Inst::SearchLblDirectF,
    Inst::SearchLblDirectB,
];
/// Experiment-specific sensors and actuators for the navigation maze.
pub const NAVIGATION_INSTRUCTIONS: [Inst; 4] =
    [Inst::SgMove, Inst::SgRotateL, Inst::SgRotateR, Inst::SgSense];

fn add_nops(roster: &mut Vec<Inst>, from: usize, to: usize) {
    // Nops stay grouped at the front of the roster.
    let pos = roster.iter().position(|i| !i.is_nop()).unwrap_or(roster.len());
    for (k, n) in (from..to).enumerate() {
        roster.insert(pos + k, Inst::nop(n as u8));
    }
}

fn registers_roster(count: usize) -> Vec<Inst> {
    let mut roster = HEADS_ROSTER.to_vec();
    add_nops(&mut roster, 3, count);
    roster
}

fn label_roster(marks: [bool; 9]) -> Vec<Inst> {
    let mut roster: Vec<Inst> = registers_roster(6)
        .into_iter()
        .filter(|i| {
            !matches!(i, Inst::SetFlow | Inst::IfCopiedSeqComp | Inst::SearchSeqCompS)
        })
        .collect();
    roster.extend(
        LABEL_COLUMNS
            .iter()
            .zip(marks)
            .filter(|(_, m)| *m)
            .map(|(i, _)| *i),
    );
    roster
}

fn split_io(mut roster: Vec<Inst>) -> Vec<Inst> {
    let pos = roster.iter().position(|i| *i == Inst::Io).expect("IO in roster");
    roster.splice(pos..=pos, [Inst::Input, Inst::Output]);
    roster
}

impl InstructionSet {
    /// Builds one of the named instruction sets.
    pub fn build(name: SetName) -> InstructionSet {
        let (roster, registers, mode) = match name {
            SetName::Heads => (HEADS_ROSTER.to_vec(), 3, ArgMode::SingleNop),
            SetName::Fa => (HEADS_ROSTER.to_vec(), 3, ArgMode::FullyAssociative),
            SetName::Registers(n) => {
                let n = n as usize;
                (registers_roster(n), n, ArgMode::FullyAssociative)
            }
            SetName::SplitIo => (
                split_io(label_roster(label_marks(SetName::LabelSeqDirect).unwrap())),
                6,
                ArgMode::FullyAssociative,
            ),
            SetName::SearchDirectional => {
                let mut r = InstructionSet::build(SetName::SplitIo).roster;
                r.extend(DIRECTIONAL_SEARCH);
                (r, 6, ArgMode::FullyAssociative)
            }
            SetName::SearchGoto => {
                let mut r = InstructionSet::build(SetName::SplitIo).roster;
                r.push(Inst::Goto);
                (r, 6, ArgMode::FullyAssociative)
            }
            SetName::SearchGotoIf => {
                let mut r = InstructionSet::build(SetName::SearchGoto).roster;
                r.extend([Inst::GotoIfNEqu, Inst::GotoIfLess]);
                (r, 6, ArgMode::FullyAssociative)
            }
            SetName::FlowIf0
            | SetName::FlowIfX
            | SetName::FlowMvH
            | SetName::FlowIf0MvH
            | SetName::FlowIfXMvH
            | SetName::FlowIf0IfXMvH
            | SetName::HeadsEx => {
                let (if0, ifx, mvh) = match name {
                    SetName::FlowIf0 => (true, false, false),
                    SetName::FlowIfX => (false, true, false),
                    SetName::FlowMvH => (false, false, true),
                    SetName::FlowIf0MvH => (true, false, true),
                    SetName::FlowIfXMvH | SetName::HeadsEx => (false, true, true),
                    _ => (true, true, true),
                };
                let mut r = InstructionSet::build(SetName::SearchDirectional).roster;
                if if0 {
                    r.extend(IF0_GROUP);
                }
                if ifx {
                    r.extend(IFX_GROUP);
                }
                if mvh {
                    r.extend(MOVHEAD_GROUP);
                }
                (r, 6, ArgMode::FullyAssociative)
            }
            label => (
                label_roster(label_marks(label).expect("label set")),
                6,
                ArgMode::FullyAssociative,
            ),
        };
        InstructionSet {
            name: name.as_str(),
            nop_count: registers,
            register_count: registers,
            roster,
            arg_mode: mode,
            jmp_head_default_flow: false,
        }
    }

    /// Builds a set from its textual name.
    pub fn by_name(name: &str) -> Result<InstructionSet> {
        Ok(InstructionSet::build(name.parse()?))
    }

    /// Appends the navigation sensors and actuators to the roster.
    pub fn with_navigation(mut self) -> InstructionSet {
        for inst in NAVIGATION_INSTRUCTIONS {
            if !self.roster.contains(&inst) {
                self.roster.push(inst);
            }
        }
        self
    }

    /// Reads a set definition: one instruction name per line, `#` comments.
    /// The set name is the file stem. Nop and register counts follow from
    /// the highest nop present; the argument mode is single-nop only for a
    /// file named `Heads`.
    pub fn from_file(path: &Path) -> Result<InstructionSet> {
        let text = std::fs::read_to_string(path)?;
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("custom")
            .to_string();
        let roster = parse_instruction_lines(&text)?;
        let nop_count = roster.iter().filter_map(|i| i.nop_index()).max().map_or(0, |m| m as usize + 1);
        if !(3..=MAX_NOPS).contains(&nop_count) {
            return Err(Error::InvalidSet(format!(
                "{name}: needs between 3 and 16 nops, found {nop_count}"
            )));
        }
        Ok(InstructionSet {
            arg_mode: if name == "Heads" { ArgMode::SingleNop } else { ArgMode::FullyAssociative },
            name,
            roster,
            nop_count,
            register_count: nop_count,
            jmp_head_default_flow: false,
        })
    }

    /// Writes the roster in the definition-file format.
    pub fn to_definition(&self) -> String {
        let mut out = format!("# instruction set {}\n", self.name);
        for inst in &self.roster {
            out.push_str(inst.name());
            out.push('\n');
        }
        out
    }

    pub fn contains(&self, inst: Inst) -> bool {
        self.roster.contains(&inst)
    }

    /// Number of heads: IP, READ, WRITE, FLOW plus place markers.
    pub fn head_count(&self) -> usize {
        self.register_count.max(4)
    }

    /// Checks a genome against this roster and the size limits.
    pub fn validate(&self, genome: &[Inst]) -> Result<()> {
        if genome.is_empty() || genome.len() > MAX_GENOME_SIZE {
            return Err(Error::InvalidGenome(format!(
                "length {} outside 1..={MAX_GENOME_SIZE}",
                genome.len()
            )));
        }
        if let Some(bad) = genome.iter().find(|i| !self.contains(**i)) {
            return Err(Error::InvalidGenome(format!(
                "{bad} is not part of instruction set {}",
                self.name
            )));
        }
        Ok(())
    }
}

fn parse_instruction_lines(text: &str) -> Result<Vec<Inst>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            // Tolerate trailing columns (weights etc.) after the name.
            let name = l.split_whitespace().next().unwrap_or(l);
            name.parse::<Inst>()
        })
        .collect()
}

/// Parses a genome file: one instruction name per line, `#` comments.
pub fn parse_genome(text: &str) -> Result<Vec<Inst>> {
    parse_instruction_lines(text)
}

pub fn read_genome(path: &Path) -> Result<Vec<Inst>> {
    parse_genome(&std::fs::read_to_string(path)?)
}

pub fn format_genome(genome: &[Inst]) -> String {
    let mut out = String::with_capacity(genome.len() * 8);
    for inst in genome {
        out.push_str(inst.name());
        out.push('\n');
    }
    out
}

/// Maximal run of nops starting at `start`, truncated at `max` and never
/// wrapping past the memory length.
pub fn read_nop_sequence(memory: &[Inst], start: usize, max: usize) -> Vec<u8> {
    let len = memory.len();
    let mut out = Vec::new();
    let limit = max.min(len);
    let mut pos = start % len;
    while out.len() < limit {
        match memory[pos].nop_index() {
            Some(n) => out.push(n),
            None => break,
        }
        pos += 1;
        if pos == len {
            pos = 0;
        }
    }
    out
}

/// Length of the nop run at `start`, without collecting it.
#[inline]
pub fn nop_run_len(memory: &[Inst], start: usize, max: usize) -> usize {
    let len = memory.len();
    let limit = max.min(len);
    let mut pos = if start >= len { start % len } else { start };
    let mut n = 0;
    while n < limit && memory[pos].is_nop() {
        n += 1;
        pos += 1;
        if pos == len {
            pos = 0;
        }
    }
    n
}

/// Maps each nop to its successor, wrapping at `nop_count`.
pub fn cyclic_complement(pattern: &[u8], nop_count: usize) -> Vec<u8> {
    pattern
        .iter()
        .map(|&n| ((n as usize + 1) % nop_count) as u8)
        .collect()
}

fn matches_at(memory: &[Inst], start: usize, target: &[u8], require_label_prefix: bool) -> bool {
    let len = memory.len();
    if require_label_prefix && memory[(start + len - 1) % len] != Inst::Label {
        return false;
    }
    target
        .iter()
        .enumerate()
        .all(|(k, &n)| memory[(start + k) % len].nop_index() == Some(n))
}

/// Finds a label in circular memory.
///
/// `origin` is the position of the searching instruction; its own trailing
/// label (when it equals `pattern`) is never a match. On success returns
/// the position just after the matched nop run.
pub fn find_label(
    memory: &[Inst],
    pattern: &[u8],
    origin: usize,
    mode: SearchMode,
    matching: Matching,
    require_label_prefix: bool,
    nop_count: usize,
) -> Option<usize> {
    let len = memory.len();
    if pattern.is_empty() || pattern.len() > len {
        return None;
    }
    let target = match matching {
        Matching::Complement => cyclic_complement(pattern, nop_count),
        Matching::Direct => pattern.to_vec(),
    };
    let own = if matches_at(memory, (origin + 1) % len, pattern, false) {
        pattern.len()
    } else {
        0
    };
    // Candidate starts inside the instruction's own label are skipped.
    let is_own = |s: usize| own > 0 && (s + len - origin - 1) % len < own;
    let found = |s: usize| !is_own(s) && matches_at(memory, s, &target, require_label_prefix);
    let hit = match mode {
        SearchMode::FromStart => (0..len).find(|&s| found(s)),
        SearchMode::Forward => (0..len)
            .map(|k| (origin + 1 + own + k) % len)
            .find(|&s| found(s)),
        SearchMode::Backward => (1..=len).map(|k| (origin + len * 2 - k) % len).find(|&s| found(s)),
    };
    hit.map(|s| (s + target.len()) % len)
}

/// Like [`find_label`] but also reports where the match begins.
pub fn find_label_start(
    memory: &[Inst],
    pattern: &[u8],
    origin: usize,
    mode: SearchMode,
    matching: Matching,
    require_label_prefix: bool,
    nop_count: usize,
) -> Option<(usize, usize)> {
    find_label(memory, pattern, origin, mode, matching, require_label_prefix, nop_count).map(
        |after| {
            let len = memory.len();
            ((after + len * 2 - pattern.len()) % len, after)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::Inst::*;
    use super::*;

    #[test]
    fn nop_sequence_reading() {
        assert_eq!(read_nop_sequence(&[Inc, NopA, NopC, Add], 1, 3), vec![0, 2]);
        assert!(read_nop_sequence(&[Inc, Add], 1, 3).is_empty());
        assert_eq!(read_nop_sequence(&[NopB, NopB, NopB], 0, 2), vec![1, 1]);
        // Never longer than the memory itself.
        assert_eq!(read_nop_sequence(&[NopB, NopB], 1, 10).len(), 2);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(cyclic_complement(&[0, 0, 1], 3), vec![1, 1, 2]);
        assert!(cyclic_complement(&[], 3).is_empty());
        assert_eq!(cyclic_complement(&[2], 3), vec![0]);
        assert_eq!(cyclic_complement(&[2], 4), vec![3]);
    }

    #[test]
    fn search_example_from_start() {
        let g = [SearchSeqCompS, NopA, NopA, NopB, Inc, NopB, NopB, NopC, Add];
        let r = find_label(&g, &[0, 0, 1], 0, SearchMode::FromStart, Matching::Complement, false, 3);
        assert_eq!(r, Some(8));
    }

    #[test]
    fn missing_label_is_not_found() {
        let g = [SearchSeqCompS, NopA, Inc, Add];
        assert_eq!(
            find_label(&g, &[0], 0, SearchMode::FromStart, Matching::Complement, false, 3),
            None
        );
    }

    #[test]
    fn label_prefix_required() {
        let g = [Label, NopB, Inc, NopB, Goto, NopA];
        assert_eq!(
            find_label(&g, &[0], 4, SearchMode::FromStart, Matching::Direct, true, 3),
            None
        );
        let g = [Label, NopA, Inc];
        assert_eq!(
            find_label(&g, &[0], 2, SearchMode::FromStart, Matching::Direct, true, 3),
            Some(2)
        );
    }

    #[test]
    fn direct_search_skips_its_own_label() {
        let g = [SearchSeqDirectS, NopA, NopB, Inc, NopA, NopB, Add];
        assert_eq!(
            find_label(&g, &[0, 1], 0, SearchMode::FromStart, Matching::Direct, false, 3),
            Some(6)
        );
    }

    #[test]
    fn directional_searches() {
        //            0     1     2    3     4               5     6    7
        let g = [NopA, NopB, Inc, Add, SearchSeqDirectF, NopA, NopB, Dec, NopA, NopB, Sub];
        let f = find_label(&g, &[0, 1], 4, SearchMode::Forward, Matching::Direct, false, 3);
        assert_eq!(f, Some(10));
        let b = find_label(&g, &[0, 1], 4, SearchMode::Backward, Matching::Direct, false, 3);
        assert_eq!(b, Some(2));
    }

    #[test]
    fn heads_roster_size() {
        let s = InstructionSet::build(SetName::Heads);
        assert_eq!(s.roster.len(), 26);
        assert_eq!(s.nop_count, 3);
        assert_eq!(s.arg_mode, ArgMode::SingleNop);
    }

    #[test]
    fn r16_is_half_again_fa() {
        let fa = InstructionSet::build(SetName::Fa).roster.len();
        let r16 = InstructionSet::build(SetName::Registers(16)).roster.len();
        assert_eq!(r16 * 2, fa * 3);
    }

    #[test]
    fn label_seq_both_growth_over_r6() {
        let r6 = InstructionSet::build(SetName::Registers(6)).roster.len();
        let lsb = InstructionSet::build(SetName::LabelSeqBoth).roster.len();
        assert_eq!(lsb, (1.206 * r6 as f64).round() as usize);
    }

    #[test]
    fn unknown_set_is_an_error() {
        assert!(InstructionSet::by_name("R9").is_err());
        assert!(InstructionSet::by_name("Heads-X").is_err());
    }

    #[test]
    fn roster_has_no_duplicates() {
        for name in SetName::ALL {
            let s = InstructionSet::build(*name);
            let mut r = s.roster.clone();
            r.sort();
            r.dedup();
            assert_eq!(r.len(), s.roster.len(), "{name}");
            assert_eq!(s.register_count, s.nop_count);
        }
    }

    #[test]
    fn names_round_trip() {
        for inst in Inst::ALL {
            assert_eq!(Inst::from_name(inst.name()), Some(*inst));
        }
        assert_eq!(Inst::from_name("h-search"), Some(SearchSeqCompS));
    }

    #[test]
    fn definition_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let s = InstructionSet::build(SetName::Registers(5));
        let path = dir.path().join("R5.txt");
        std::fs::write(&path, s.to_definition()).unwrap();
        let back = InstructionSet::from_file(&path).unwrap();
        assert_eq!(back.name, "R5");
        assert_eq!(back.roster, s.roster);
        assert_eq!(back.register_count, 5);
        assert_eq!(back.arg_mode, ArgMode::FullyAssociative);
    }
}
