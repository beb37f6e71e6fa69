//! Argument parsing and command dispatch. [`run`] returns the exit status
//! and both output streams so commands can be exercised in-process.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};
use stratum_core::chains::{
    counterexample_noncollapse, decode_bits_to_set, encode_set_to_bits, is_admissible_prefix, Chain,
    ChainCode, Decoded, Verdict,
};
use stratum_core::creal::to_decimal;
use stratum_core::dcomp::{self, layer_table, Constructor, DCompError, DCompResult, Ladder, EXCLUDED};
use stratum_core::omega::{trace_csv, PrefixMachine, DEFAULT_MAX_LEN};
use stratum_core::oracle_tower::{specker, witness_real, Program};
use stratum_core::rational::{self, Rational};

use crate::chainfile::{read_chain, write_chain};
use crate::randchain::random_systems;

pub const SCHEMA: &str = "stratum/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

const DEFAULT_DIGITS: u32 = 20;
const DEFAULT_OMEGA_STEPS: u64 = 64;
const DEFAULT_SPECKER_STAGES: u64 = 32;
const DEFAULT_CHAIN_LEVELS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Definability experiments over constructive reals, jump oracles and
/// toy formal systems.
#[derive(Debug, Parser)]
#[command(name = "stratum", version)]
pub struct CommandConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Search budget: witnesses per level for dcomp/layers (default 100000),
    /// description size for chain commands (default 6).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Faithful decimal digits of a catalog constant.
    Digits {
        id: String,
        /// Digits after the point (default 20).
        count: Option<u32>,
        #[arg(long, conflicts_with = "count")]
        digits: Option<u32>,
    },
    /// Least level and witness reproducing a catalog entry.
    Dcomp { id: String },
    /// Catalog grouped by resolved level.
    Layers,
    /// Step-bounded halting-probability approximants for n = 0..=N.
    Omega {
        #[arg(default_value_t = DEFAULT_OMEGA_STEPS)]
        n_max: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: u32,
    },
    /// Chain files and their characteristic-bit codes.
    Chain {
        #[command(subcommand)]
        action: ChainAction,
    },
    /// The two-chain non-collapse counterexample at level 1.
    CollapseDemo,
    /// Specker stage values next to the first jump witness.
    Specker {
        #[arg(default_value_t = DEFAULT_SPECKER_STAGES)]
        stages: u64,
    },
    /// Register-machine program text and enumeration index.
    Program {
        #[command(subcommand)]
        action: ProgramAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum ChainAction {
    /// Characteristic bits of a strictly increasing sequence, given as
    /// values or as the level codes of a chain file.
    Encode {
        values: Vec<u64>,
        #[arg(long, conflicts_with = "values")]
        chain: Option<PathBuf>,
        /// Prefix length.
        #[arg(long, default_value_t = 64)]
        len: usize,
    },
    /// Elements certified by a bit prefix.
    Decode { bits: String },
    /// Admissibility of every step of a chain file.
    Check { file: PathBuf },
    /// A random admissible chain file.
    Random {
        #[arg(long, default_value_t = DEFAULT_CHAIN_LEVELS)]
        levels: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProgramAction {
    /// Program text for an enumeration index.
    Show { index: BigUint },
    /// Enumeration index of a program file.
    Index { file: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Refused(String),
}

type Res = Result<String, Failure>;

fn input(msg: impl ToString) -> Failure {
    Failure::Input(msg.to_string())
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CommandConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            return Output { code, stdout, stderr };
        }
    };
    match execute(&config) {
        Ok(stdout) => Output {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Input(m)) => Output {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
        Err(Failure::Refused(m)) => Output {
            code: EXIT_REFUSED,
            stdout: String::new(),
            stderr: format!("refused: {m}\n"),
        },
    }
}

fn execute(c: &CommandConfig) -> Res {
    let allow_csv = matches!(c.command, Command::Omega { .. } | Command::Specker { .. });
    if c.format == Format::Csv && !allow_csv {
        return Err(input("csv output is only available for omega and specker"));
    }
    match &c.command {
        Command::Digits { id, count, digits } => cmd_digits(c, id, digits.or(*count).unwrap_or(DEFAULT_DIGITS)),
        Command::Dcomp { id } => cmd_dcomp(c, id),
        Command::Layers => Ok(cmd_layers(c)),
        Command::Omega { n_max, max_len } => cmd_omega(c, *n_max, *max_len),
        Command::Chain { action } => cmd_chain(c, action),
        Command::CollapseDemo => cmd_collapse_demo(c),
        Command::Specker { stages } => Ok(cmd_specker(c, *stages)),
        Command::Program { action } => cmd_program(c, action),
    }
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("plain values serialize");
    s.push('\n');
    s
}

fn record(command: &str, mut v: Value) -> String {
    v["schema"] = SCHEMA.into();
    v["command"] = command.into();
    pretty(v)
}

fn dcomp_budget(c: &CommandConfig) -> u64 {
    c.budget.unwrap_or(dcomp::DEFAULT_BUDGET)
}

fn chain_budget(c: &CommandConfig) -> Result<u32, Failure> {
    match c.budget {
        None => Ok(stratum_core::chains::DEFAULT_BUDGET),
        Some(b) => u32::try_from(b).map_err(|_| input("chain budget too large")),
    }
}

fn cmd_digits(c: &CommandConfig, id: &str, k: u32) -> Res {
    if let Some((_, why)) = EXCLUDED.iter().find(|(x, _)| *x == id) {
        return Err(Failure::Refused(format!("{id}: {why}")));
    }
    let entry = dcomp::lookup(id).ok_or_else(|| input(format!("unknown id {id:?}")))?;
    let real = match entry.constructor {
        Constructor::Constructive(f) => f(),
        Constructor::Limit(_) => {
            return Err(Failure::Refused(format!(
                "{id}: no modulus at base level; only stage approximants exist (see `stratum specker` or `stratum dcomp {id}`)"
            )))
        }
    };
    let value = to_decimal(&real, k);
    Ok(match c.format {
        Format::Json => record(
            "digits",
            json!({"id": id, "digits": k, "value": value, "provenance": real.provenance(), "notes": entry.notes}),
        ),
        _ => format!("{value}\n# {}: {}\n", real.provenance(), entry.notes),
    })
}

fn result_json(id: &str, r: &DCompResult) -> Value {
    json!({
        "id": id,
        "level": r.level,
        "status": r.status.as_str(),
        "sigma": r.witness,
        "budget_used": r.search_budget_used,
    })
}

fn cmd_dcomp(c: &CommandConfig, id: &str) -> Res {
    let r = match dcomp::dcomp(id, dcomp_budget(c)) {
        Ok(r) => r,
        Err(e @ (DCompError::UnknownId(_) | DCompError::BadWitness(_))) => return Err(input(e)),
        Err(e) => return Err(Failure::Refused(e.to_string())),
    };
    Ok(match c.format {
        Format::Json => record("dcomp", result_json(id, &r)),
        _ => format!(
            "id: {id}\nlevel: {}\nsigma: {}\nstatus: {}\nbudget_used: {}\n",
            r.level, r.witness, r.status, r.search_budget_used
        ),
    })
}

fn cmd_layers(c: &CommandConfig) -> String {
    let budget = dcomp_budget(c);
    let table = layer_table(Ladder::standard(), budget);
    if c.format == Format::Json {
        let entries: Vec<Value> = table
            .rows
            .iter()
            .map(|row| {
                let mut v = match &row.result {
                    Ok(r) => result_json(row.id, r),
                    Err(e) => json!({"id": row.id, "level": null, "status": "unresolved", "sigma": null, "error": e.to_string()}),
                };
                v["declared_level"] = row.declared_level.into();
                v["flag"] = row.flag.clone().into();
                v
            })
            .collect();
        let excluded: Vec<Value> = table.excluded.iter().map(|(id, why)| json!({"id": id, "reason": why})).collect();
        return record("layers", json!({"budget": budget, "entries": entries, "excluded": excluded}));
    }
    let mut out = format!(
        "{:<18} {:>8} {:>5}  {:<11}  {:<40} {:>11}\n",
        "id", "declared", "level", "status", "sigma", "budget_used"
    );
    for row in &table.rows {
        let line = match &row.result {
            Ok(r) => format!(
                "{:<18} {:>8} {:>5}  {:<11}  {:<40} {:>11}",
                row.id, row.declared_level, r.level, r.status.as_str(), r.witness, r.search_budget_used
            ),
            Err(e) => format!("{:<18} {:>8} {:>5}  {:<11}  {e}", row.id, row.declared_level, "-", "unresolved"),
        };
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out.push('\n');
    for n in 0..=table.max_level().unwrap_or(0) {
        let bucket = table.bucket(n);
        if bucket.is_empty() {
            continue;
        }
        let ids: Vec<&str> = bucket.iter().map(|r| r.id).collect();
        let upper = bucket.iter().any(|r| matches!(&r.result, Ok(d) if d.status == dcomp::Status::UpperBound));
        let note = if upper { " (upper bounds)" } else { "" };
        out.push_str(&format!("Delta_{n}{note}: {}\n", ids.join(", ")));
    }
    for (id, why) in table.excluded {
        out.push_str(&format!("excluded {id}: {why}\n"));
    }
    let flags: Vec<String> = table
        .rows
        .iter()
        .filter_map(|r| r.flag.as_ref().map(|f| format!("{}: {f}", r.id)))
        .collect();
    if flags.is_empty() {
        out.push_str("ladder consistency: ok\n");
    } else {
        for f in flags {
            out.push_str(&format!("ladder consistency: {f}\n"));
        }
    }
    out
}

fn cmd_omega(c: &CommandConfig, n_max: u64, max_len: u32) -> Res {
    if max_len > 24 {
        return Err(input("--max-len above 24 is not supported"));
    }
    let rows = PrefixMachine::new(max_len).omega_trace(n_max);
    Ok(match c.format {
        Format::Csv => trace_csv(&rows),
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "omega_num": r.value.numer().to_string(),
                        "omega_den": r.value.denom().to_string(),
                        "halted_count": r.halted_count,
                    })
                })
                .collect();
            record("omega", json!({"max_len": max_len, "rows": rows}))
        }
        Format::Text => {
            let mut out = String::from("n omega halted_count\n");
            for r in &rows {
                out.push_str(&format!("{} {}/{} {}\n", r.n, r.value.numer(), r.value.denom(), r.halted_count));
            }
            out
        }
    })
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn verdict_json(v: &Verdict) -> Value {
    let witnesses: Vec<&str> = v.witnesses().iter().map(|w| w.text()).collect();
    match v {
        Verdict::Admissible { .. } => json!({"admissible": true, "witnesses": witnesses}),
        Verdict::Fails { step, failure, .. } => {
            json!({"admissible": false, "failed_step": step, "failure": failure.to_string(), "witnesses": witnesses})
        }
    }
}

fn verdict_text(v: &Verdict) -> String {
    let mut out = String::new();
    for (k, w) in v.witnesses().iter().enumerate() {
        out.push_str(&format!("step {k} -> {}: new {}\n", k + 1, w.text()));
    }
    match v {
        Verdict::Admissible { .. } => out.push_str("admissible\n"),
        Verdict::Fails { step, failure, .. } => {
            out.push_str(&format!("step {step} -> {}: {failure}\nnot admissible\n", step + 1))
        }
    }
    out
}

fn cmd_chain(c: &CommandConfig, action: &ChainAction) -> Res {
    match action {
        ChainAction::Encode { values, chain, len } => {
            let values = match chain {
                Some(path) => {
                    let (_, systems) = read_chain(&read_file(path)?).map_err(input)?;
                    systems
                        .iter()
                        .map(|s| u64::try_from(s.code()).map_err(|_| input(format!("code of {s} exceeds 64 bits"))))
                        .collect::<Result<Vec<_>, _>>()?
                }
                None => values.clone(),
            };
            let code = encode_set_to_bits(values, *len).map_err(input)?;
            Ok(match c.format {
                Format::Json => record("chain-encode", json!({"bits": code.to_text(), "len": len})),
                _ => format!("{}\n", code.to_text()),
            })
        }
        ChainAction::Decode { bits } => {
            let code = ChainCode::parse(bits).map_err(input)?;
            let decoded = decode_bits_to_set(&code);
            Ok(match (c.format, decoded) {
                (Format::Json, Decoded::Set(s)) => record("chain-decode", json!({"set": s, "insufficient_evidence": false})),
                (Format::Json, Decoded::InsufficientEvidence) => {
                    record("chain-decode", json!({"set": null, "insufficient_evidence": true}))
                }
                (_, Decoded::Set(s)) => {
                    let s: Vec<String> = s.iter().map(u64::to_string).collect();
                    format!("set: {}\n", s.join(" "))
                }
                (_, Decoded::InsufficientEvidence) => String::from("insufficient evidence: fewer than two ones\n"),
            })
        }
        ChainAction::Check { file } => {
            let budget = chain_budget(c)?;
            let (name, systems) = read_chain(&read_file(file)?).map_err(input)?;
            if systems.len() < 2 {
                return Err(input("a chain file needs at least two levels"));
            }
            let chain = Chain::from_systems(name.clone(), &systems);
            let v = is_admissible_prefix(&chain, systems.len() as u64 - 1, budget);
            let text = match c.format {
                Format::Json => record("chain-check", {
                    let mut j = verdict_json(&v);
                    j["name"] = name.into();
                    j["budget"] = budget.into();
                    j
                }),
                _ => format!("{name} (budget {budget})\n{}", verdict_text(&v)),
            };
            if v.is_admissible() {
                Ok(text)
            } else {
                Err(Failure::Refused(text.trim_end().to_string()))
            }
        }
        ChainAction::Random { levels } => {
            if !(2..=8).contains(levels) {
                return Err(input("--levels must be between 2 and 8"));
            }
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(c.seed);
            let systems = random_systems(&mut rng, *levels, chain_budget(c)?);
            Ok(write_chain(&format!("random-{}", c.seed), &systems))
        }
    }
}

fn cmd_collapse_demo(c: &CommandConfig) -> Res {
    let r = counterexample_noncollapse();
    let names = |ch: &Chain| -> Vec<String> {
        (0..2).filter_map(|k| ch.system_at(k)).map(|s| s.to_string()).collect()
    };
    let rid = r.r.text();
    let text = match c.format {
        Format::Json => record(
            "collapse-demo",
            json!({
                "n": 1,
                "budget": r.budget,
                "r": rid,
                "c1_systems": names(&r.c1),
                "c2_systems": names(&r.c2),
                "r_in_cumulative_c1": r.r_in_cumulative_c1,
                "r_not_in_level": r.r_not_in_level_c1 && r.r_not_in_level_c2,
                "r_in_global_gap": r.r_in_global_gap,
                "c1_verdict": verdict_json(&r.c1_verdict),
                "c2_verdict": verdict_json(&r.c2_verdict),
                "certified": r.certified(),
            }),
        ),
        _ => {
            let mark = |b: bool| if b { "ok  " } else { "FAIL" };
            let mut out = format!("non-collapse at n = 1, budget {}\n", r.budget);
            out.push_str(&format!("C1: {}\nC2: {}\n", names(&r.c1).join(" < "), names(&r.c2).join(" < ")));
            out.push_str(&format!("[{}] {rid} in cumulative(C1, 1)\n", mark(r.r_in_cumulative_c1)));
            out.push_str(&format!(
                "[{}] {rid} not in level(C1, 1) nor level(C2, 1)\n",
                mark(r.r_not_in_level_c1 && r.r_not_in_level_c2)
            ));
            out.push_str(&format!(
                "[{}] {rid} in global cumulative(1) \\ global level(1)\n",
                mark(r.r_in_global_gap)
            ));
            let c1 = match &r.c1_verdict {
                Verdict::Fails { step, failure, .. } => format!("C1 not admissible: step {step} -> {}: {failure}", step + 1),
                Verdict::Admissible { .. } => String::from("C1 admissible"),
            };
            out.push_str(&format!("{c1}\n"));
            out.push_str(if r.c2_verdict.is_admissible() { "C2 admissible\n" } else { "C2 not admissible\n" });
            out.push_str(&format!("certified: {}\n", if r.certified() { "yes" } else { "no" }));
            out
        }
    };
    if r.certified() {
        Ok(text)
    } else {
        Err(Failure::Refused(text.trim_end().to_string()))
    }
}

fn cmd_specker(c: &CommandConfig, stages: u64) -> String {
    let a = specker().trace(stages);
    let w = witness_real(1).expect("level 1 exists").trace(stages);
    let frac = |q: &Rational| rational::to_text(q);
    match c.format {
        Format::Csv => {
            let mut out = String::from("s,specker_num,specker_den,witness_num,witness_den\n");
            for (s, (x, y)) in a.iter().zip(&w).enumerate() {
                out.push_str(&format!("{s},{},{},{},{}\n", x.numer(), x.denom(), y.numer(), y.denom()));
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = a
                .iter()
                .zip(&w)
                .enumerate()
                .map(|(s, (x, y))| json!({"s": s, "specker": frac(x), "witness_real_1": frac(y)}))
                .collect();
            record("specker", json!({"stages": stages, "rows": rows}))
        }
        Format::Text => {
            let mut out = String::from("s specker witness_real_1\n");
            for (s, (x, y)) in a.iter().zip(&w).enumerate() {
                out.push_str(&format!("{s} {} {}\n", frac(x), frac(y)));
            }
            out
        }
    }
}

fn cmd_program(c: &CommandConfig, action: &ProgramAction) -> Res {
    let (index, program) = match action {
        ProgramAction::Show { index } => (index.clone(), Program::from_index(index)),
        ProgramAction::Index { file } => {
            let p = Program::parse(&read_file(file)?).map_err(input)?;
            (p.index(), p)
        }
    };
    Ok(match (c.format, action) {
        (Format::Json, _) => record("program", json!({"index": index.to_string(), "text": program.to_string()})),
        (_, ProgramAction::Show { .. }) => program.to_string(),
        (_, ProgramAction::Index { .. }) => format!("{index}\n"),
    })
}
