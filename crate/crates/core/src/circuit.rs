//! Gate counting and depth analysis for circuit text.
//!
//! Supports a small circuit-program subset: an optional `OPENQASM` header
//! and `include` lines, `qreg`/`creg` declarations, gate applications on
//! indexed qubits, `measure`, `reset` and `barrier`. Statements end at a
//! newline or semicolon; `//` starts a comment.
//!
//! `measure` and `reset` accept a whole register and count once per qubit;
//! gate applications must index their operands, so each gate statement
//! counts exactly one gate. Depth is the longest per-qubit statement chain;
//! barriers synchronize their operands without counting.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::workload::GateCounts;

/// What to do with a gate name outside the recognized set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownGatePolicy {
    /// Reject the program.
    Error,
    /// Count the gate under the `other` key.
    CountAsOther,
}

const KNOWN_GATES: &[&str] = &[
    "h", "x", "y", "z", "s", "sdg", "t", "tdg", "sx", "sxdg", "rx", "ry", "rz", "p", "u", "u1",
    "u2", "u3", "id", "cx", "cnot", "cy", "cz", "ch", "cp", "crx", "cry", "crz", "cu", "swap",
    "iswap", "ecr", "rxx", "ryy", "rzz", "rzx", "ms", "ccx", "cswap",
];

#[derive(Debug)]
struct Register {
    offset: usize,
    size: u64,
}

struct Counter {
    qregs: BTreeMap<String, Register>,
    cregs: BTreeMap<String, u64>,
    clocks: Vec<u64>,
    counts: BTreeMap<String, u64>,
    policy: UnknownGatePolicy,
}

/// Count gates, qubits and depth in a circuit program.
pub fn count_gates(text: &str, policy: UnknownGatePolicy) -> Result<GateCounts> {
    let mut counter = Counter {
        qregs: BTreeMap::new(),
        cregs: BTreeMap::new(),
        clocks: Vec::new(),
        counts: BTreeMap::new(),
        policy,
    };
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split("//").next().unwrap_or("");
        for stmt in line.split(';') {
            let stmt = stmt.trim();
            if !stmt.is_empty() {
                counter.statement(stmt, line_no)?;
            }
        }
    }
    let qubit_count: u64 = counter.qregs.values().map(|r| r.size).sum();
    let depth = counter.clocks.iter().copied().max().unwrap_or(0);
    let counts = GateCounts {
        counts: counter.counts,
        qubit_count,
        depth,
    };
    counts.validate()?;
    Ok(counts)
}

impl Counter {
    fn statement(&mut self, stmt: &str, line: usize) -> Result<()> {
        let head = stmt.split_whitespace().next().unwrap_or("");
        match head {
            "OPENQASM" | "include" => Ok(()),
            "qreg" | "creg" => self.declaration(stmt, head, line),
            "barrier" => self.barrier(stmt, line),
            "measure" => self.measure(stmt, line),
            "reset" => self.reset(stmt, line),
            _ => self.gate(stmt, line),
        }
    }

    fn declaration(&mut self, stmt: &str, kind: &str, line: usize) -> Result<()> {
        let body = stmt[kind.len()..].trim();
        let (name, size) = parse_sized_register(body)
            .ok_or_else(|| Error::syntax(line, 1, format!("malformed {kind} declaration '{stmt}'")))?;
        if size == 0 {
            return Err(Error::syntax(line, 1, format!("register '{name}' must have size >= 1")));
        }
        if self.qregs.contains_key(&name) || self.cregs.contains_key(&name) {
            return Err(Error::syntax(line, 1, format!("register '{name}' declared twice")));
        }
        if kind == "qreg" {
            let offset = self.clocks.len();
            self.clocks.extend(std::iter::repeat_n(0, size as usize));
            self.qregs.insert(name, Register { offset, size });
        } else {
            self.cregs.insert(name, size);
        }
        Ok(())
    }

    fn barrier(&mut self, stmt: &str, line: usize) -> Result<()> {
        let body = stmt["barrier".len()..].trim();
        let qubits = if body.is_empty() {
            (0..self.clocks.len()).collect()
        } else {
            self.operand_list(body, line)?
        };
        let horizon = qubits.iter().map(|&q| self.clocks[q]).max().unwrap_or(0);
        for q in qubits {
            self.clocks[q] = horizon;
        }
        Ok(())
    }

    fn measure(&mut self, stmt: &str, line: usize) -> Result<()> {
        let body = stmt["measure".len()..].trim();
        let (qarg, carg) = body
            .split_once("->")
            .ok_or_else(|| Error::syntax(line, 1, format!("malformed measure statement '{stmt}'")))?;
        let qubits = self.qubit_operand(qarg.trim(), line)?;
        let width = self.classical_width(carg.trim(), line)?;
        if qubits.len() as u64 != width {
            return Err(Error::syntax(
                line,
                1,
                format!("measure width mismatch: {} qubits into {} bits", qubits.len(), width),
            ));
        }
        for q in qubits {
            self.clocks[q] += 1;
            *self.counts.entry("measure".to_string()).or_insert(0) += 1;
        }
        Ok(())
    }

    fn reset(&mut self, stmt: &str, line: usize) -> Result<()> {
        let body = stmt["reset".len()..].trim();
        for q in self.qubit_operand(body, line)? {
            self.clocks[q] += 1;
            *self.counts.entry("reset".to_string()).or_insert(0) += 1;
        }
        Ok(())
    }

    fn gate(&mut self, stmt: &str, line: usize) -> Result<()> {
        let (head, rest) = stmt
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::syntax(line, 1, format!("malformed statement '{stmt}'")))?;
        // Strip a parameter list: rz(0.5) counts as rz. Parameters may carry
        // spaces, so operands start after the closing parenthesis.
        let name = head.split('(').next().unwrap_or(head);
        let operands_text = match stmt.find('(') {
            Some(_) => {
                let close = stmt
                    .rfind(')')
                    .ok_or_else(|| Error::syntax(line, 1, format!("unbalanced '(' in '{stmt}'")))?;
                stmt[close + 1..].trim()
            }
            None => rest.trim(),
        };
        if name.is_empty() || !name.chars().next().unwrap().is_ascii_alphabetic() {
            return Err(Error::syntax(line, 1, format!("malformed statement '{stmt}'")));
        }
        let key = if KNOWN_GATES.contains(&name) {
            name.to_string()
        } else {
            match self.policy {
                UnknownGatePolicy::Error => {
                    return Err(Error::syntax(line, 1, format!("unknown gate '{name}'")))
                }
                UnknownGatePolicy::CountAsOther => "other".to_string(),
            }
        };
        let qubits = self.operand_list(operands_text, line)?;
        if qubits.is_empty() {
            return Err(Error::syntax(line, 1, format!("gate '{name}' has no operands")));
        }
        let mut seen = qubits.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != qubits.len() {
            return Err(Error::syntax(line, 1, format!("duplicate qubit operand in '{stmt}'")));
        }
        let next = qubits.iter().map(|&q| self.clocks[q]).max().unwrap_or(0) + 1;
        for q in qubits {
            self.clocks[q] = next;
        }
        *self.counts.entry(key).or_insert(0) += 1;
        Ok(())
    }

    /// Comma-separated indexed qubit operands.
    fn operand_list(&self, text: &str, line: usize) -> Result<Vec<usize>> {
        text.split(',')
            .map(|op| self.indexed_qubit(op.trim(), line))
            .collect()
    }

    /// A single `reg[idx]` qubit reference.
    fn indexed_qubit(&self, op: &str, line: usize) -> Result<usize> {
        let (name, idx) = parse_indexed(op)
            .ok_or_else(|| Error::syntax(line, 1, format!("expected an indexed qubit, got '{op}'")))?;
        let reg = self
            .qregs
            .get(&name)
            .ok_or_else(|| Error::syntax(line, 1, format!("undeclared quantum register '{name}'")))?;
        if idx >= reg.size {
            return Err(Error::syntax(
                line,
                1,
                format!("index {idx} out of range for register '{name}[{}]'", reg.size),
            ));
        }
        Ok(reg.offset + idx as usize)
    }

    /// A measure/reset operand: `reg` expands to every qubit, `reg[idx]` to one.
    fn qubit_operand(&self, op: &str, line: usize) -> Result<Vec<usize>> {
        if let Some((name, idx)) = parse_indexed(op) {
            let reg = self
                .qregs
                .get(&name)
                .ok_or_else(|| Error::syntax(line, 1, format!("undeclared quantum register '{name}'")))?;
            if idx >= reg.size {
                return Err(Error::syntax(
                    line,
                    1,
                    format!("index {idx} out of range for register '{name}[{}]'", reg.size),
                ));
            }
            return Ok(vec![reg.offset + idx as usize]);
        }
        let reg = self
            .qregs
            .get(op)
            .ok_or_else(|| Error::syntax(line, 1, format!("undeclared quantum register '{op}'")))?;
        Ok((reg.offset..reg.offset + reg.size as usize).collect())
    }

    fn classical_width(&self, op: &str, line: usize) -> Result<u64> {
        if let Some((name, idx)) = parse_indexed(op) {
            let size = *self
                .cregs
                .get(&name)
                .ok_or_else(|| Error::syntax(line, 1, format!("undeclared classical register '{name}'")))?;
            if idx >= size {
                return Err(Error::syntax(
                    line,
                    1,
                    format!("index {idx} out of range for register '{name}[{size}]'"),
                ));
            }
            return Ok(1);
        }
        self.cregs
            .get(op)
            .copied()
            .ok_or_else(|| Error::syntax(line, 1, format!("undeclared classical register '{op}'")))
    }
}

fn parse_indexed(op: &str) -> Option<(String, u64)> {
    let open = op.find('[')?;
    let close = op.strip_suffix(']')?;
    let name = &close[..open];
    let idx: u64 = close[open + 1..].trim().parse().ok()?;
    if name.is_empty() || !is_identifier(name) {
        return None;
    }
    Some((name.to_string(), idx))
}

fn parse_sized_register(body: &str) -> Option<(String, u64)> {
    parse_indexed(body)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
