mod common;

use std::collections::BTreeSet;

use common::{golden_cases, run_golden, BX, CX};
use isa_evo::isa::{Inst, InstructionSet, SetName};
use isa_evo::organism::DivideRules;
use isa_evo::vcpu::{CpuState, NullIo, FLOW};

#[test]
fn golden_cases_pass() {
    let mut failures = Vec::new();
    for case in golden_cases() {
        let isa = InstructionSet::build(case.set).with_navigation();
        assert!(isa.contains(case.inst), "{}: {:?} not in {:?}", case.name, case.inst, case.set);
        let (cpu, probe) = run_golden(&case);
        if !(case.check)(&cpu, &probe) {
            failures.push(format!("{} ({:?}): regs {:?} heads {:?}", case.name, case.inst, &cpu.regs[..4], &cpu.heads[..4]));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn every_instruction_has_a_golden_case() {
    let covered: BTreeSet<String> = golden_cases().iter().map(|c| format!("{:?}", c.inst)).collect();
    let missing: Vec<_> = Inst::ALL.iter().filter(|i| !covered.contains(&format!("{i:?}"))).collect();
    assert!(missing.is_empty(), "no golden case for {missing:?}");
}

fn fa_step(genome: Vec<Inst>, setup: impl FnOnce(&mut CpuState)) -> CpuState {
    let isa = InstructionSet::build(SetName::Fa);
    let mut cpu = CpuState::new(genome);
    setup(&mut cpu);
    cpu.execute(&isa, &DivideRules::default(), &mut NullIo);
    cpu
}

#[test]
fn fa_argument_examples() {
    use Inst::*;
    // no nops: BX = BX + CX
    let c = fa_step(vec![Add, Inc], |c| {
        c.regs[BX] = 5;
        c.regs[CX] = 6;
    });
    assert_eq!(c.regs[BX], 11);
    assert_eq!(c.ip(), 1);
    // nop-A: AX = AX + BX
    let c = fa_step(vec![Add, NopA, Inc], |c| {
        c.regs[0] = 2;
        c.regs[BX] = 5;
        c.regs[CX] = 100;
    });
    assert_eq!(c.regs[0], 7);
    assert_eq!(c.ip(), 2);
    // nop-A nop-C nop-B: AX = CX + BX
    let c = fa_step(vec![Add, NopA, NopC, NopB, Inc], |c| {
        c.regs[0] = 100;
        c.regs[BX] = 5;
        c.regs[CX] = 6;
    });
    assert_eq!(c.regs[0], 11);
    assert_eq!(c.ip(), 4);
}

#[test]
fn complement_search_example() {
    use Inst::*;
    let isa = InstructionSet::build(SetName::Heads);
    let mut cpu = CpuState::new(vec![SearchSeqCompS, NopA, NopA, NopB, Inc, NopB, NopB, NopC, Add]);
    cpu.execute(&isa, &DivideRules::default(), &mut NullIo);
    assert_eq!(cpu.heads[FLOW], 8);
    assert_eq!(cpu.regs[BX], 3);
}

#[test]
fn trace_line_format() {
    use Inst::*;
    let isa = InstructionSet::build(SetName::Heads);
    let mut cpu = CpuState::new(vec![Add, Inc]);
    cpu.regs[BX] = 2;
    cpu.regs[CX] = 3;
    let before = cpu.trace_line(&isa, 0);
    assert!(before.starts_with("0,0,"), "{before}");
    assert!(!before.contains('\n'));
    cpu.execute(&isa, &DivideRules::default(), &mut NullIo);
    assert_eq!(cpu.regs[BX], 5);
}
