//! A register machine with an oracle-query instruction.
//!
//! Registers hold naturals and start at zero except register 1, which holds
//! the input. The output is register 0. A jump to a label at or past the end
//! of the program, like running off the end, halts.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::{OracleError, StagedOracle};
use crate::pairing::{pair, unpair};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Instr {
    Inc(BigUint),
    /// Decrement the register, or jump to the label when it is zero.
    JzDec(BigUint, BigUint),
    /// Replace the register by 1 if its value is in the oracle set, else 0.
    Qry(BigUint),
    Halt,
}

impl Instr {
    /// Position of the instruction in a fixed bijection with the naturals.
    pub fn code(&self) -> BigUint {
        match self {
            Instr::Halt => BigUint::zero(),
            Instr::Inc(r) => r * 3u32 + 1u32,
            Instr::Qry(r) => r * 3u32 + 2u32,
            Instr::JzDec(r, l) => pair(r, l) * 3u32 + 3u32,
        }
    }

    pub fn from_code(c: &BigUint) -> Instr {
        if c.is_zero() {
            return Instr::Halt;
        }
        let m = c - 1u32;
        let q = &m / 3u32;
        match (&m % 3u32).to_u32() {
            Some(0) => Instr::Inc(q),
            Some(1) => Instr::Qry(q),
            _ => {
                let (r, l) = unpair(&q);
                Instr::JzDec(r, l)
            }
        }
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::Inc(r) => write!(f, "INC {r}"),
            Instr::JzDec(r, l) => write!(f, "JZDEC {r} {l}"),
            Instr::Qry(r) => write!(f, "QRY {r}"),
            Instr::Halt => f.write_str("HALT"),
        }
    }
}

/// A finite instruction list. Every natural is the index of exactly one
/// program: 0 is the empty program and `n + 1` is `instr(a) :: prog(b)` for
/// `(a, b) = unpair(n)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Program {
    pub code: Vec<Instr>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunOutcome {
    Halted(u64),
    Timeout,
}

impl Program {
    pub fn new(code: Vec<Instr>) -> Self {
        Program { code }
    }

    pub fn index(&self) -> BigUint {
        self.code.iter().rev().fold(BigUint::zero(), |tail, instr| {
            pair(&instr.code(), &tail) + 1u32
        })
    }

    pub fn from_index(index: &BigUint) -> Program {
        let mut code = Vec::new();
        let mut n = index.clone();
        while !n.is_zero() {
            let (a, b) = unpair(&(n - BigUint::one()));
            code.push(Instr::from_code(&a));
            n = b;
        }
        Program { code }
    }

    pub fn from_u64(index: u64) -> Program {
        Program::from_index(&BigUint::from(index))
    }

    pub fn compile(&self) -> CompiledProgram {
        let mut regs: BTreeMap<BigUint, usize> = BTreeMap::new();
        // registers 0 and 1 are fixed
        slot(&mut regs, &BigUint::zero());
        slot(&mut regs, &BigUint::one());
        let len = self.code.len();
        let mut ops = Vec::with_capacity(len);
        for instr in &self.code {
            let op = match instr {
                Instr::Inc(r) => Op::Inc(slot(&mut regs, r)),
                Instr::Qry(r) => Op::Qry(slot(&mut regs, r)),
                Instr::JzDec(r, l) => {
                    let target = l.to_usize().map_or(len, |t| t.min(len));
                    Op::JzDec(slot(&mut regs, r), target)
                }
                Instr::Halt => Op::Halt,
            };
            ops.push(op);
        }
        CompiledProgram {
            ops,
            registers: regs.len(),
        }
    }

    /// `INC 0` the given number of times.
    pub fn constant(value: u64) -> Program {
        Program::new((0..value).map(|_| Instr::Inc(BigUint::zero())).collect())
    }

    /// Output `input + 1`.
    pub fn successor() -> Program {
        Program::new(alloc::vec![
            jz(1, 3),
            inc(0),
            jz(2, 0),
            inc(0),
            Instr::Halt,
        ])
    }

    /// Loops forever on every input.
    pub fn looping() -> Program {
        Program::new(alloc::vec![jz(2, 0)])
    }

    /// Outputs 1 on even inputs, 0 on odd ones.
    pub fn evens() -> Program {
        Program::new(alloc::vec![
            jz(1, 4),
            jz(1, 5),
            jz(2, 0),
            Instr::Halt,
            inc(0),
            Instr::Halt,
        ])
    }

    /// Decider for a finite set: outputs 1 exactly on members.
    pub fn finite_set(members: &[u64]) -> Program {
        let Some(&max) = members.iter().max() else {
            return Program::new(alloc::vec![Instr::Halt]);
        };
        let reject = max + 1;
        let accept = max + 2;
        let mut code: Vec<Instr> = (0..=max)
            .map(|i| jz(1, if members.contains(&i) { accept } else { reject }))
            .collect();
        code.push(Instr::Halt);
        code.push(inc(0));
        Program::new(code)
    }

    /// Halts (output 0) exactly when the input is in the oracle set.
    pub fn query_input() -> Program {
        Program::new(alloc::vec![
            Instr::Qry(BigUint::one()),
            jz(1, 3),
            Instr::Halt,
            jz(2, 3),
        ])
    }

    pub fn run_bounded(&self, input: u64, steps: u64, oracle: &StagedOracle) -> RunOutcome {
        self.compile().run(input, steps, oracle)
    }

    /// Parses the text form: one instruction per line (`INC r`,
    /// `JZDEC r label`, `QRY r`, `HALT`). A line may start with `name:` to
    /// define a label; labels are numeric instruction positions or names.
    /// Blank lines and text after `#` are ignored.
    pub fn parse(text: &str) -> Result<Program, OracleError> {
        let mut names = BTreeMap::new();
        let mut lines = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let mut line = raw.split('#').next().unwrap_or("").trim();
            if let Some((label, rest)) = line.split_once(':') {
                let label = label.trim();
                if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(parse_err(lineno, "malformed label"));
                }
                if label.chars().all(|c| c.is_ascii_digit()) {
                    return Err(parse_err(lineno, "label names must not be numeric"));
                }
                if names.insert(label.to_string(), lines.len()).is_some() {
                    return Err(parse_err(lineno, "duplicate label"));
                }
                line = rest.trim();
            }
            if line.is_empty() {
                continue;
            }
            lines.push((lineno, line));
        }
        let reg = |lineno: usize, tok: Option<&str>| -> Result<BigUint, OracleError> {
            tok.and_then(|t| t.parse::<BigUint>().ok())
                .ok_or_else(|| parse_err(lineno, "expected a register number"))
        };
        let mut code = Vec::with_capacity(lines.len());
        for (lineno, line) in lines {
            let mut toks = line.split_whitespace();
            let op = toks.next().unwrap_or("");
            let instr = match op {
                "INC" => Instr::Inc(reg(lineno, toks.next())?),
                "QRY" => Instr::Qry(reg(lineno, toks.next())?),
                "HALT" => Instr::Halt,
                "JZDEC" => {
                    let r = reg(lineno, toks.next())?;
                    let label = toks
                        .next()
                        .ok_or_else(|| parse_err(lineno, "JZDEC needs a label"))?;
                    let target = match label.parse::<BigUint>() {
                        Ok(t) => t,
                        Err(_) => BigUint::from(
                            *names
                                .get(label)
                                .ok_or_else(|| parse_err(lineno, "unknown label"))?,
                        ),
                    };
                    Instr::JzDec(r, target)
                }
                other => {
                    return Err(parse_err(
                        lineno,
                        &alloc::format!("unknown mnemonic {other:?}"),
                    ))
                }
            };
            if toks.next().is_some() {
                return Err(parse_err(lineno, "trailing tokens"));
            }
            code.push(instr);
        }
        Ok(Program { code })
    }
}

fn slot(regs: &mut BTreeMap<BigUint, usize>, r: &BigUint) -> usize {
    let next = regs.len();
    *regs.entry(r.clone()).or_insert(next)
}

fn parse_err(lineno: usize, msg: &str) -> OracleError {
    OracleError::Parse {
        line: lineno + 1,
        message: String::from(msg),
    }
}

fn inc(r: u32) -> Instr {
    Instr::Inc(BigUint::from(r))
}

fn jz(r: u32, l: u64) -> Instr {
    Instr::JzDec(BigUint::from(r), BigUint::from(l))
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for instr in &self.code {
            writeln!(f, "{instr}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Inc(usize),
    JzDec(usize, usize),
    Qry(usize),
    Halt,
}

/// A program with dense register slots and resolved jump targets.
#[derive(Debug, Clone)]
pub struct CompiledProgram {
    ops: Vec<Op>,
    registers: usize,
}

impl CompiledProgram {
    /// Number of steps until halting, with the output, if that happens
    /// within `steps` steps. Halting itself costs one step.
    pub fn halting_time(
        &self,
        input: u64,
        steps: u64,
        oracle: &StagedOracle,
    ) -> Option<(u64, u64)> {
        let mut regs = alloc::vec![0u64; self.registers];
        regs[1] = input;
        let mut pc = 0usize;
        let mut used = 0u64;
        while used < steps {
            used += 1;
            match self.ops.get(pc) {
                None | Some(Op::Halt) => return Some((used, regs[0])),
                Some(Op::Inc(r)) => {
                    regs[*r] = regs[*r].saturating_add(1);
                    pc += 1;
                }
                Some(Op::JzDec(r, target)) => {
                    if regs[*r] == 0 {
                        pc = *target;
                    } else {
                        regs[*r] -= 1;
                        pc += 1;
                    }
                }
                Some(Op::Qry(r)) => {
                    regs[*r] = oracle.member(regs[*r]) as u64;
                    pc += 1;
                }
            }
        }
        None
    }

    pub fn run(&self, input: u64, steps: u64, oracle: &StagedOracle) -> RunOutcome {
        match self.halting_time(input, steps, oracle) {
            Some((_, value)) => RunOutcome::Halted(value),
            None => RunOutcome::Timeout,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn empty() -> StagedOracle {
        StagedOracle::empty()
    }

    #[test]
    fn known_indices() {
        assert_eq!(Program::default().index(), BigUint::zero());
        assert_eq!(Program::new(alloc::vec![Instr::Halt]).index(), BigUint::from(1u32));
        assert_eq!(Program::constant(1).index() , BigUint::from(2u32));
        let inc_halt = Program::new(alloc::vec![inc(0), Instr::Halt]);
        assert_eq!(inc_halt.index(), BigUint::from(5u32));
        let k0 = Program::new(alloc::vec![inc(0), inc(0), Instr::Halt]);
        assert_eq!(k0.index(), BigUint::from(27u32));
        assert_eq!(Program::from_u64(27), k0);
    }

    #[test]
    fn empty_program_halts_immediately() {
        for input in [0, 7, 1000] {
            assert_eq!(Program::default().run_bounded(input, 10, &empty()), RunOutcome::Halted(0));
        }
        assert_eq!(Program::default().run_bounded(0, 0, &empty()), RunOutcome::Timeout);
    }

    #[test]
    fn looping_times_out() {
        assert_eq!(Program::looping().run_bounded(3, 1000, &empty()), RunOutcome::Timeout);
    }

    #[test]
    fn successor_hand_trace() {
        // 41 passes through the 3-instruction loop, then INC and HALT
        let p = Program::successor();
        let c = p.compile();
        assert_eq!(c.halting_time(41, 1000, &empty()), Some((41 * 3 + 3, 42)));
        assert_eq!(p.run_bounded(41, 125, &empty()), RunOutcome::Timeout);
        assert_eq!(p.run_bounded(0, 10, &empty()), RunOutcome::Halted(1));
    }

    #[test]
    fn evens_and_finite_sets() {
        let p = Program::evens().compile();
        for k in 0..50u64 {
            let want = (k % 2 == 0) as u64;
            assert_eq!(p.run(k, 1000, &empty()), RunOutcome::Halted(want));
        }
        let s = Program::finite_set(&[0, 3, 5]).compile();
        for k in 0..10u64 {
            let want = [0, 3, 5].contains(&k) as u64;
            assert_eq!(s.run(k, 100, &empty()), RunOutcome::Halted(want));
        }
    }

    #[test]
    fn text_roundtrip() {
        let text = "start: JZDEC 1 done\nINC 0\nJZDEC 2 start\ndone: INC 0 # plus one\nHALT\n";
        let p = Program::parse(text).unwrap();
        assert_eq!(p, Program::successor());
        assert_eq!(Program::parse(&p.to_string()).unwrap(), p);
        assert!(Program::parse("FOO 1").is_err());
        assert!(Program::parse("JZDEC 1 nowhere").is_err());
        assert!(matches!(Program::parse("INC\n"), Err(OracleError::Parse { line: 1, .. })));
    }

    proptest! {
        #[test]
        fn index_roundtrip(index in any::<u64>()) {
            let p = Program::from_u64(index);
            prop_assert_eq!(p.index(), BigUint::from(index));
        }

        #[test]
        fn instr_code_roundtrip(c in any::<u64>()) {
            let c = BigUint::from(c);
            prop_assert_eq!(Instr::from_code(&c).code(), c);
        }

        #[test]
        fn text_roundtrip_random(index in any::<u64>()) {
            let p = Program::from_u64(index);
            prop_assert_eq!(Program::parse(&p.to_string()).unwrap(), p);
        }
    }
}
