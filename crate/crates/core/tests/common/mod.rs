#![allow(dead_code)]

use isa_evo::isa::{Inst, InstructionSet, SetName};
use isa_evo::organism::DivideRules;
use isa_evo::vcpu::{CpuIo, CpuState, NavAction, FLOW, IP, READ, WRITE};

use Inst::*;

pub const AX: usize = 0;
pub const BX: usize = 1;
pub const CX: usize = 2;

/// Scripted environment that records everything the CPU does.
#[derive(Debug, Default)]
pub struct Probe {
    pub inputs: Vec<u32>,
    pub cursor: usize,
    pub outputs: Vec<u32>,
    pub actions: Vec<NavAction>,
    pub sense_value: u32,
}

impl Probe {
    pub fn new() -> Probe {
        Probe {
            inputs: vec![11, 22, 33],
            sense_value: 4,
            ..Probe::default()
        }
    }
}

impl CpuIo for Probe {
    fn input(&mut self) -> u32 {
        let v = self.inputs[self.cursor % self.inputs.len()];
        self.cursor += 1;
        v
    }
    fn output(&mut self, value: u32) {
        self.outputs.push(value);
    }
    fn navigate(&mut self, action: NavAction) -> u32 {
        self.actions.push(action);
        if action == NavAction::Sense {
            self.sense_value
        } else {
            0
        }
    }
}

pub struct Golden {
    pub name: &'static str,
    pub inst: Inst,
    pub set: SetName,
    pub genome: Vec<Inst>,
    pub setup: fn(&mut CpuState),
    pub steps: usize,
    pub check: fn(&CpuState, &Probe) -> bool,
}

fn g(
    name: &'static str,
    inst: Inst,
    set: SetName,
    genome: Vec<Inst>,
    setup: fn(&mut CpuState),
    steps: usize,
    check: fn(&CpuState, &Probe) -> bool,
) -> Golden {
    Golden {
        name,
        inst,
        set,
        genome,
        setup,
        steps,
        check,
    }
}

fn none(_: &mut CpuState) {}

fn bx_cx(c: &mut CpuState, b: u32, x: u32) {
    c.regs[BX] = b;
    c.regs[CX] = x;
}

/// Runs a golden case and returns the final state.
pub fn run_golden(case: &Golden) -> (CpuState, Probe) {
    let isa = InstructionSet::build(case.set).with_navigation();
    let mut cpu = CpuState::new(case.genome.clone());
    (case.setup)(&mut cpu);
    let mut probe = Probe::new();
    let rules = DivideRules::default();
    for _ in 0..case.steps {
        cpu.execute(&isa, &rules, &mut probe);
    }
    (cpu, probe)
}

/// One or more executable checks for every instruction.
pub fn golden_cases() -> Vec<Golden> {
    use SetName as S;
    let mut v = vec![
        g("label is inert", Label, S::LabelSeqBoth, vec![Label, Inc], none, 1, |c, _| {
            c.ip() == 1 && c.regs == [0; 16]
        }),
        g("add default", Add, S::Heads, vec![Add], |c| bx_cx(c, 2, 3), 1, |c, _| c.regs[BX] == 5),
        g("add nop-A", Add, S::Heads, vec![Add, NopA, Dec], |c| bx_cx(c, 2, 3), 1, |c, _| {
            c.regs[AX] == 5 && c.ip() == 2
        }),
        g("add FA nop-A", Add, S::Fa, vec![Add, NopA], |c| c.regs[AX] = 7, 1, |c, _| {
            // regA = regA + regB with BX = 0
            c.regs[AX] == 7 && c.regs[BX] == 0
        }),
        g("sub wraps", Sub, S::Heads, vec![Sub], |c| bx_cx(c, 2, 3), 1, |c, _| c.regs[BX] == u32::MAX),
        g("inc nop-A", Inc, S::Heads, vec![Inc, NopA], none, 1, |c, _| c.regs[AX] == 1 && c.ip() == 0),
        g("dec", Dec, S::Heads, vec![Dec, Inc], none, 1, |c, _| c.regs[BX] == u32::MAX),
        g("nand", Nand, S::Heads, vec![Nand, Inc], |c| bx_cx(c, 0xF0F0_F0F0, 0xFF00_FF00), 1, |c, _| {
            c.regs[BX] == !(0xF0F0_F0F0u32 & 0xFF00_FF00)
        }),
        g("shift-l", ShiftL, S::Heads, vec![ShiftL, Inc], |c| c.regs[BX] = 0x8000_0003, 1, |c, _| {
            c.regs[BX] == 6
        }),
        g("shift-r is logical", ShiftR, S::Heads, vec![ShiftR, Inc], |c| c.regs[BX] = 0x8000_0001, 1, |c, _| {
            c.regs[BX] == 0x4000_0000
        }),
        g("push", Push, S::Heads, vec![Push, Inc], |c| c.regs[BX] = 7, 1, |c, _| c.stack().top() == Some(7)),
        g("pop nop-A", Pop, S::Heads, vec![Push, Pop, NopA], |c| c.regs[BX] = 7, 2, |c, _| {
            c.regs[AX] == 7 && c.stack().is_empty()
        }),
        g("swap-stk", SwapStk, S::Heads, vec![Push, SwapStk, Pop], |c| c.regs[BX] = 7, 3, |c, _| {
            c.active_stack == 1 && c.regs[BX] == 0 && c.stacks[0].top() == Some(7)
        }),
        g("swap", Swap, S::Heads, vec![Swap, Inc], |c| bx_cx(c, 1, 2), 1, |c, _| {
            c.regs[BX] == 2 && c.regs[CX] == 1
        }),
        g("swap nop-A", Swap, S::Heads, vec![Swap, NopA, Inc], |c| c.regs[AX] = 9, 1, |c, _| {
            c.regs[AX] == 0 && c.regs[BX] == 9 && c.ip() == 2
        }),
        g("IO", Io, S::Heads, vec![Io, Io], |c| c.regs[BX] = 99, 2, |c, p| {
            p.outputs == vec![99, 11] && c.regs[BX] == 22
        }),
        g("input", Input, S::SplitIo, vec![Input, Input, NopA], none, 2, |c, p| {
            c.regs[BX] == 11 && c.regs[AX] == 22 && p.outputs.is_empty()
        }),
        g("output", Output, S::SplitIo, vec![Output, Inc], |c| c.regs[BX] = 5, 1, |c, p| {
            p.outputs == vec![5] && c.regs[BX] == 5 && p.cursor == 0
        }),
        g("if-n-equ false skips", IfNEqu, S::Heads, vec![IfNEqu, Inc, NopA, Dec], |c| bx_cx(c, 1, 1), 1, |c, _| {
            c.ip() == 3
        }),
        g("if-n-equ true runs", IfNEqu, S::Heads, vec![IfNEqu, Inc, Dec], |c| bx_cx(c, 1, 2), 1, |c, _| c.ip() == 1),
        g("if-less true", IfLess, S::Heads, vec![IfLess, Inc, Dec], |c| bx_cx(c, 3, 5), 1, |c, _| c.ip() == 1),
        g("if-less false", IfLess, S::Heads, vec![IfLess, Inc, Dec], |c| bx_cx(c, 5, 3), 1, |c, _| c.ip() == 2),
        g("if-equ-0", IfEqu0, S::FlowIf0IfXMvH, vec![IfEqu0, Inc, Dec], none, 1, |c, _| c.ip() == 1),
        g("if-not-0", IfNot0, S::FlowIf0IfXMvH, vec![IfNot0, Inc, Dec], none, 1, |c, _| c.ip() == 2),
        g("if-gtr-0", IfGtr0, S::FlowIf0IfXMvH, vec![IfGtr0, Inc, Dec], |c| c.regs[BX] = u32::MAX, 1, |c, _| {
            c.ip() == 2
        }),
        g("if-less-0", IfLess0, S::FlowIf0IfXMvH, vec![IfLess0, Inc, Dec], |c| c.regs[BX] = u32::MAX, 1, |c, _| {
            c.ip() == 1
        }),
        g("if-gtr-x", IfGtrX, S::FlowIf0IfXMvH, vec![IfGtrX, NopB, Inc, Dec], |c| c.regs[BX] = 3, 1, |c, _| {
            c.ip() == 2
        }),
        g("if-equ-x default 1", IfEquX, S::FlowIf0IfXMvH, vec![IfEquX, Inc, Dec], |c| c.regs[BX] = 2, 1, |c, _| {
            c.ip() == 2
        }),
        g("if-copied-seq-comp", IfCopiedSeqComp, S::Heads, vec![IfCopiedSeqComp, NopA, Inc, Dec], |c| {
            c.copy_history.push(NopB)
        }, 1, |c, _| c.ip() == 2),
        g("if-copied-seq-direct", IfCopiedSeqDirect, S::LabelSeqBoth, vec![IfCopiedSeqDirect, NopA, Inc, Dec], |c| {
            c.copy_history.push(NopB)
        }, 1, |c, _| c.ip() == 3),
        g("if-copied-lbl-comp", IfCopiedLblComp, S::LabelSeqBoth, vec![IfCopiedLblComp, NopA, Inc, Dec], |c| {
            c.copy_history.push(Label);
            c.copy_history.push(NopB);
        }, 1, |c, _| c.ip() == 2),
        g("if-copied-lbl-direct", IfCopiedLblDirect, S::LabelSeqBoth, vec![IfCopiedLblDirect, NopA, Inc, Dec], |c| {
            c.copy_history.push(NopA);
        }, 1, |c, _| c.ip() == 3),
        g("mov-head IP", MovHead, S::Heads, vec![MovHead, Inc, Inc, Dec], |c| c.heads[FLOW] = 3, 1, |c, _| {
            c.ip() == 3
        }),
        g("mov-head nop-C", MovHead, S::Heads, vec![MovHead, NopC, Inc, Dec], |c| c.heads[FLOW] = 3, 1, |c, _| {
            c.heads[WRITE] == 3 && c.ip() == 2
        }),
        g("mov-head-if-n-equ", MovHeadIfNEqu, S::FlowIf0IfXMvH, vec![MovHeadIfNEqu, Inc, Inc, Dec], |c| {
            c.heads[FLOW] = 3;
            bx_cx(c, 1, 2);
        }, 1, |c, _| c.ip() == 3),
        g("mov-head-if-less not taken", MovHeadIfLess, S::FlowIf0IfXMvH, vec![MovHeadIfLess, Inc, Inc, Dec], |c| {
            c.heads[FLOW] = 3;
            bx_cx(c, 2, 1);
        }, 1, |c, _| c.ip() == 1),
        g("jmp-head IP", JmpHead, S::Heads, vec![JmpHead, Inc, Inc, Dec], |c| c.regs[CX] = 2, 1, |c, _| c.ip() == 3),
        g("jmp-head nop-B", JmpHead, S::Heads, vec![JmpHead, NopB, Inc, Dec], |c| c.regs[CX] = 3, 1, |c, _| {
            c.heads[READ] == 3 && c.ip() == 2
        }),
        g("jmp-head nop-D", JmpHead, S::Registers(4), vec![JmpHead, NopD, Inc, Dec], |c| c.regs[CX] = 5, 1, |c, _| {
            c.heads[FLOW] == 1 && c.ip() == 2
        }),
        g("get-head", GetHead, S::Heads, vec![Inc, GetHead, Dec], |c| c.heads[IP] = 1, 1, |c, _| c.regs[CX] == 1),
        g("get-head nop-B", GetHead, S::Heads, vec![GetHead, NopB, Dec], |c| c.heads[READ] = 2, 1, |c, _| {
            c.regs[CX] == 2
        }),
        g("set-flow wraps", SetFlow, S::Heads, vec![SetFlow, Inc, Inc, Inc, Dec], |c| c.regs[CX] = 7, 1, |c, _| {
            c.heads[FLOW] == 2
        }),
        g("h-search complement", SearchSeqCompS, S::Heads,
            vec![SearchSeqCompS, NopA, NopA, NopB, Inc, NopB, NopB, NopC, Add], none, 1, |c, _| {
            c.heads[FLOW] == 8 && c.regs[BX] == 3 && c.regs[CX] == 5 && c.ip() == 4
        }),
        g("h-search not found", SearchSeqCompS, S::Heads, vec![SearchSeqCompS, NopA, Inc, Dec], |c| {
            bx_cx(c, 9, 9)
        }, 1, |c, _| c.heads[FLOW] == 1 && c.regs[BX] == 0 && c.regs[CX] == 0),
        g("search-seq-direct-s", SearchSeqDirectS, S::LabelSeqBoth, vec![SearchSeqDirectS, NopB, Inc, NopB, Dec], none, 1, |c, _| {
            c.heads[FLOW] == 4
        }),
        g("search-lbl-comp-s", SearchLblCompS, S::LabelSeqBoth,
            vec![SearchLblCompS, NopA, Inc, NopB, Dec, Label, NopB, Dec], none, 1, |c, _| c.heads[FLOW] == 7),
        g("search-lbl-direct-s", SearchLblDirectS, S::LabelSeqBoth,
            vec![SearchLblDirectS, NopA, Inc, NopA, Dec, Label, NopA, Dec], none, 1, |c, _| c.heads[FLOW] == 7),
        g("search-seq-direct-f", SearchSeqDirectF, S::SearchDirectional,
            vec![NopB, Inc, SearchSeqDirectF, NopB, Inc, NopB, Dec], |c| c.heads[IP] = 2, 1, |c, _| {
            c.heads[FLOW] == 6
        }),
        g("search-seq-direct-b", SearchSeqDirectB, S::SearchDirectional,
            vec![Inc, NopB, Inc, SearchSeqDirectB, NopB, Inc, NopB, Dec], |c| c.heads[IP] = 3, 1, |c, _| {
            c.heads[FLOW] == 2
        }),
        g("search-lbl-direct-f", SearchLblDirectF, S::SearchDirectional,
            vec![Label, NopB, SearchLblDirectF, NopB, Inc, NopB, Dec, Label, NopB, Dec], |c| c.heads[IP] = 2, 1, |c, _| {
            // The bare nop at 5 lacks the label prefix; the match at 7 wins.
            c.heads[FLOW] == 9
        }),
        g("search-lbl-direct-b", SearchLblDirectB, S::SearchDirectional,
            vec![Label, NopB, Inc, NopB, Dec, SearchLblDirectB, NopB, Inc], |c| c.heads[IP] = 5, 1, |c, _| {
            c.heads[FLOW] == 2
        }),
        g("goto", Goto, S::SearchGoto, vec![Goto, NopA, Inc, NopA, Label, NopA, Dec], none, 1, |c, _| c.ip() == 6),
        g("goto not found is ignored", Goto, S::SearchGoto, vec![Goto, NopA, Inc, NopA, Dec], none, 1, |c, _| {
            c.ip() == 2
        }),
        g("goto-if-n-equ", GotoIfNEqu, S::SearchGotoIf, vec![GotoIfNEqu, NopA, Inc, Label, NopA, Dec], |c| {
            bx_cx(c, 1, 1)
        }, 1, |c, _| c.ip() == 2),
        g("goto-if-less", GotoIfLess, S::SearchGotoIf, vec![GotoIfLess, NopA, Inc, Label, NopA, Dec], |c| {
            bx_cx(c, 1, 2)
        }, 1, |c, _| c.ip() == 5),
        g("h-alloc", HAlloc, S::Heads, vec![HAlloc, Inc, Dec], none, 1, |c, _| {
            c.memory.len() == 6 && c.memory[3..].iter().all(|&i| i == NopA)
        }),
        g("h-copy", HCopy, S::Heads, vec![HAlloc, HCopy, Inc, Dec], |c| c.heads[WRITE] = 4, 2, |c, _| {
            c.memory[4] == HAlloc && c.heads[READ] == 1 && c.heads[WRITE] == 5
        }),
        g("h-divide", HDivide, S::Heads,
            vec![HAlloc, HCopy, HCopy, HCopy, HCopy, HDivide], |c| c.heads[WRITE] = 6, 6, |c, _| {
            // Four of six offspring sites copied; the parent keeps its first six.
            c.memory.len() == 6 && c.ip() == 0 && c.alloc_base.is_none()
        }),
        g("sg-move", SgMove, S::Heads, vec![SgMove, Inc], none, 1, |_, p| p.actions == vec![NavAction::Move]),
        g("sg-rotate-l", SgRotateL, S::Heads, vec![SgRotateL, Inc], none, 1, |_, p| {
            p.actions == vec![NavAction::RotateLeft]
        }),
        g("sg-rotate-r", SgRotateR, S::Heads, vec![SgRotateR, Inc], none, 1, |_, p| {
            p.actions == vec![NavAction::RotateRight]
        }),
        g("sg-sense", SgSense, S::Heads, vec![SgSense, NopA], none, 1, |c, p| {
            c.regs[AX] == 4 && p.actions == vec![NavAction::Sense]
        }),
    ];
    for n in 0..16u8 {
        v.push(Golden {
            name: "nop is inert",
            inst: Inst::nop(n),
            set: S::Registers(16),
            genome: vec![Inst::nop(n), Inc],
            setup: none,
            steps: 1,
            check: |c, p| c.ip() == 1 && c.regs == [0; 16] && c.executed == 1 && p.outputs.is_empty(),
        });
    }
    v
}
