//! Bitwise logic tasks: enumeration of the canonical functions and the
//! output checker.
//!
//! Functions are identified by truth tables. A function of `k` inputs uses
//! rows `x0 + 2*x1 + 4*x2`; for matching, every task is expanded into the
//! truth tables it produces over the organism's three input slots under
//! every injective assignment of its inputs to slots.

/// A canonical logic function of exactly `arity` inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicTask {
    pub name: String,
    pub arity: usize,
    /// Truth table over `arity` inputs (lowest representative under input
    /// permutation).
    pub table: u8,
    /// Truth tables over the three input slots, paired with the slots used.
    pub variants: Vec<(u8, u8)>,
}

impl LogicTask {
    /// Evaluates the task bitwise on the given operands (in order).
    pub fn apply(&self, operands: &[u32]) -> u32 {
        assert_eq!(operands.len(), self.arity);
        let mut out = 0u32;
        for bit in 0..32 {
            let row = operands
                .iter()
                .enumerate()
                .fold(0usize, |r, (i, v)| r | (((v >> bit) & 1) as usize) << i);
            out |= (((self.table >> row) & 1) as u32) << bit;
        }
        out
    }
}

/// Evaluates truth table `table` over `k` inputs with inputs remapped.
fn table_after_map(table: u8, k: usize, map: &[usize], target_vars: usize) -> u8 {
    let mut out = 0u8;
    for row in 0..(1usize << target_vars) {
        let src_row = (0..k).fold(0usize, |r, i| r | ((row >> map[i]) & 1) << i);
        out |= ((table >> src_row) & 1) << row;
    }
    out
}

fn depends_on(table: u8, vars: usize, v: usize) -> bool {
    (0..(1usize << vars)).any(|row| ((table >> row) & 1) != ((table >> (row ^ (1 << v))) & 1))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Injective maps from `k` inputs into `n` slots.
fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in 0..n {
            if !cur.contains(&s) {
                cur.push(s);
                rec(k, n, cur, out);
                cur.pop();
            }
        }
    }
    rec(k, n, &mut cur, &mut out);
    out
}

fn canonical(table: u8, k: usize) -> u8 {
    permutations(k)
        .iter()
        .map(|p| table_after_map(table, k, p, k))
        .min()
        .unwrap()
}

fn traditional_name(arity: usize, table: u8) -> String {
    match (arity, table) {
        (1, 0b01) => "NOT".into(),
        (2, 0b0111) => "NAND".into(),
        (2, 0b1000) => "AND".into(),
        (2, 0b1011) => "ORN".into(),
        (2, 0b1110) => "OR".into(),
        (2, 0b0010) => "ANDN".into(),
        (2, 0b0001) => "NOR".into(),
        (2, 0b0110) => "XOR".into(),
        (2, 0b1001) => "EQU".into(),
        (a, t) => format!("LOGIC{a}_{t:02X}"),
    }
}

/// Order in which the one- and two-input tasks are listed (and grouped
/// into reward levels).
pub const LOGIC9_ORDER: [&str; 9] = ["NOT", "NAND", "AND", "ORN", "OR", "ANDN", "NOR", "XOR", "EQU"];

/// Reward level (1..=5) of a one- or two-input task.
pub fn logic9_level(name: &str) -> Option<u32> {
    Some(match name {
        "NOT" | "NAND" => 1,
        "AND" | "ORN" => 2,
        "OR" | "ANDN" => 3,
        "NOR" | "XOR" => 4,
        "EQU" => 5,
        _ => return None,
    })
}

/// All bitwise functions depending on exactly 1..=`max_arity` inputs,
/// deduplicated under input permutation, without the identity.
pub fn enumerate_logic_tasks(max_arity: usize) -> Vec<LogicTask> {
    assert!((1..=3).contains(&max_arity), "arity must be 1..=3");
    let mut tasks = Vec::new();
    for k in 1..=max_arity {
        let rows = 1usize << k;
        let mut seen = std::collections::BTreeSet::new();
        for t in 0..(1u32 << rows) {
            let table = t as u8;
            if !(0..k).all(|v| depends_on(table, k, v)) {
                continue;
            }
            if k == 1 && table == 0b10 {
                continue; // echo
            }
            seen.insert(canonical(table, k));
        }
        let mut level: Vec<LogicTask> = seen
            .into_iter()
            .map(|table| {
                let mut variants: Vec<(u8, u8)> = injections(k, 3)
                    .iter()
                    .map(|m| {
                        let mask = m.iter().fold(0u8, |acc, s| acc | 1 << s);
                        (table_after_map(table, k, m, 3), mask)
                    })
                    .collect();
                variants.sort_unstable();
                variants.dedup();
                LogicTask {
                    name: traditional_name(k, table),
                    arity: k,
                    table,
                    variants,
                }
            })
            .collect();
        if k <= 2 {
            level.sort_by_key(|t| LOGIC9_ORDER.iter().position(|n| *n == t.name));
        }
        tasks.extend(level);
    }
    tasks
}

/// Rows of the three-input truth table exhibited by `output`, or `None`
/// when the output is not a function of the inputs bit by bit.
pub fn observed_table(inputs: &[u32; 3], output: u32) -> Option<(u8, u8)> {
    let mut present = 0u8;
    let mut table = 0u8;
    for bit in 0..32 {
        let row = ((inputs[0] >> bit) & 1) | ((inputs[1] >> bit) & 1) << 1 | ((inputs[2] >> bit) & 1) << 2;
        let v = ((output >> bit) & 1) as u8;
        let m = 1u8 << row;
        if present & m != 0 {
            if ((table >> row) & 1) != v {
                return None;
            }
        } else {
            present |= m;
            table |= v << row;
        }
    }
    Some((table, present))
}

/// Whether three inputs exhibit every truth-table row in some bit.
pub fn covers_all_rows(inputs: &[u32; 3]) -> bool {
    (0..32).fold(0u8, |acc, bit| {
        let row = ((inputs[0] >> bit) & 1) | ((inputs[1] >> bit) & 1) << 1 | ((inputs[2] >> bit) & 1) << 2;
        acc | 1 << row
    }) == 0xFF
}

/// Indices of tasks computed by `output` from the slots in `seen_slots`.
pub fn matching_tasks(
    tasks: &[LogicTask],
    inputs: &[u32; 3],
    seen_slots: u8,
    output: u32,
) -> Vec<usize> {
    let Some((table, present)) = observed_table(inputs, output) else {
        return Vec::new();
    };
    tasks
        .iter()
        .enumerate()
        .filter(|(_, t)| {
            t.variants
                .iter()
                .any(|&(tt, mask)| mask & !seen_slots == 0 && (tt ^ table) & present == 0)
        })
        .map(|(i, _)| i)
        .collect()
}
