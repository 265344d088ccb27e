//! Command-line front end: flag parsing, instance construction and report
//! output.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebras::Algebra;
use crate::bar::{self, Simplex};
use crate::counterexamples::{self, SearchOptions};
use crate::error::{Error, Result};
use crate::monads::{check_monad_laws, MonadInstance, Status};
use crate::monoid::MonoidTable;
use crate::pev::{self, Witness, WitnessView};
use crate::semirings::SemiringId;
use crate::squares::{self, FiniteSquare, SampleMap};
use crate::terms::{count_upper_bound, Atom, Bounds};

#[derive(Debug, Parser)]
#[command(
    name = "pevbar",
    version,
    about = "Partial evaluations and bar constructions on bounded instances"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// identity, cmon, monoid, semigroup, csgrp, distribution, semimodule, m_set
    #[arg(long, global = true, default_value = "cmon")]
    pub monad: String,
    /// nat[:cap], cyclic:k, terminal, free, gset[:file.json], trivial:a,b, max:a,b, semiring[:bound]
    #[arg(long, global = true, default_value = "nat")]
    pub algebra: String,
    /// nat, S, S9 or rat, for semimodule monads.
    #[arg(long, global = true)]
    pub semiring: Option<String>,
    /// Monoid table (JSON) for m_set.
    #[arg(long, global = true)]
    pub monoid_table: Option<PathBuf>,
    /// Maximum node width; each command has its own default.
    #[arg(long, global = true)]
    pub width: Option<usize>,
    /// Comma-separated carrier atoms for enumeration.
    #[arg(long, global = true)]
    pub carrier: Option<String>,
    /// Coefficient components (semirings) or denominators (distributions).
    #[arg(long, global = true)]
    pub coeff_bound: Option<u64>,
    #[arg(long, global = true)]
    pub max_leaves: Option<usize>,
    #[arg(long, global = true, default_value_t = 1_000_000_000)]
    pub max_candidates: u128,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, env = "PEVBAR_JOBS")]
    pub jobs: Option<usize>,
    /// Report every violation instead of the first 16.
    #[arg(long, global = true)]
    pub all_violations: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse, enumerate and count terms.
    #[command(subcommand)]
    Terms(TermsCmd),
    /// Faces, degeneracies, simplicial identities and Segal maps.
    #[command(subcommand)]
    Bar(BarCmd),
    /// Partial evaluations.
    #[command(subcommand)]
    Pev(PevCmd),
    /// Finite squares and the lifting properties of bar constructions.
    #[command(subcommand)]
    Squares(SquaresCmd),
    /// The three counterexamples.
    Verify {
        #[arg(value_enum)]
        which: Which,
        /// Enumerate every candidate of the S9 search without pruning.
        #[arg(long)]
        no_prune: bool,
    },
    /// Monad, algebra and simplicial laws on bounded terms.
    Laws {
        #[arg(long, default_value_t = 2)]
        max_level: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Nontransitivity,
    Nonuniqueness,
    Horns,
    All,
}

#[derive(Debug, Subcommand)]
pub enum TermsCmd {
    Parse {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        term: String,
    },
    Enumerate {
        #[arg(long)]
        level: usize,
    },
    Count {
        #[arg(long)]
        level: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum BarCmd {
    /// d_i of an n-simplex (a term of level n+1).
    Faces {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        index: usize,
        #[arg(long)]
        term: String,
    },
    Degeneracy {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        index: usize,
        #[arg(long)]
        term: String,
    },
    Identities {
        #[arg(long, default_value_t = 2)]
        max_level: usize,
    },
    Segal {
        #[arg(long, default_value_t = 2)]
        level: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum PevCmd {
    Witnesses {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Composites of two witnesses (terms of level 2).
    Compose {
        #[arg(long)]
        t01: String,
        #[arg(long)]
        t12: String,
    },
    Relation {
        #[arg(long, value_parser = ["transitive", "symmetric", "equivalence"])]
        check: String,
    },
    Indiscrete,
    Positivity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Isc,
    Stiff,
    Split,
}

#[derive(Debug, Subcommand)]
pub enum SquaresCmd {
    Classify {
        #[arg(long)]
        file: PathBuf,
    },
    Property {
        #[arg(value_enum)]
        property: Property,
        #[arg(long, default_value_t = 2)]
        max_level: usize,
    },
    /// Fillers for a partial set of faces, given as {"i": "term", ...}.
    Horn {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        faces: PathBuf,
    },
    /// Naturality squares along a map such as "a:*,b:*".
    Bc {
        #[arg(long, default_value = "a:*,b:*")]
        map: String,
    },
}

/// Exit codes: 0 success, 1 a checked property fails, 2 usage or
/// configuration error, 3 search space too large.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::SearchSpaceTooLarge { .. } => 3,
        _ => 2,
    }
}

struct Output {
    value: Value,
    ok: bool,
}

fn out<T: Serialize>(report: &T, ok: bool) -> Result<Output> {
    let value = serde_json::to_value(report).map_err(|e| Error::Config(e.to_string()))?;
    Ok(Output { value, ok })
}

impl RunArgs {
    fn max_report(&self) -> usize {
        if self.all_violations {
            usize::MAX
        } else {
            16
        }
    }

    fn bounds(&self, default_width: usize) -> Result<Bounds> {
        let carrier: Vec<&str> = match &self.carrier {
            Some(c) => c
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect(),
            None => vec![],
        };
        let mut b = Bounds::new(self.width.unwrap_or(default_width), &carrier)
            .with_max_candidates(self.max_candidates);
        if let Some(k) = self.coeff_bound {
            b = b.with_coeff_bound(k);
        } else if self.monad_name() == "distribution" {
            b = b.with_coeff_bound(6);
        }
        if let Some(l) = self.max_leaves {
            b = b.with_max_leaves(l);
        }
        Ok(b)
    }

    fn monad_name(&self) -> &str {
        match self.monad.as_str() {
            "dist" => "distribution",
            m => m,
        }
    }

    fn table(&self) -> Result<Option<MonoidTable>> {
        let path = self
            .monoid_table
            .clone()
            .or_else(|| self.algebra.strip_prefix("gset:").map(PathBuf::from));
        match path {
            Some(p) => {
                let text = std::fs::read_to_string(&p)
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                let name = p
                    .file_stem()
                    .map_or("M".into(), |s| s.to_string_lossy().into_owned());
                Ok(Some(MonoidTable::from_json(&name, &text)?))
            }
            None => Ok(None),
        }
    }

    pub fn monad(&self) -> Result<MonadInstance> {
        let semiring = self
            .semiring
            .as_deref()
            .map(str::parse::<SemiringId>)
            .transpose()?;
        let table = self.table()?;
        // a group-set algebra fixes the monad
        let name = if table.is_some() && self.algebra.starts_with("gset") {
            "m_set"
        } else {
            self.monad.as_str()
        };
        MonadInstance::by_name(name, semiring, table)
    }

    pub fn algebra(&self, m: &MonadInstance, base: &Bounds) -> Result<Algebra> {
        let spec = if self.algebra.starts_with("gset:") {
            "gset"
        } else {
            self.algebra.as_str()
        };
        Algebra::from_spec(m, spec, base)
    }
}

fn parse_map(text: &str) -> Result<SampleMap> {
    let pairs: Vec<(&str, &str)> = text
        .split(',')
        .map(|p| {
            p.trim()
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("bad map entry `{p}`")))
        })
        .collect::<Result<_>>()?;
    Ok(SampleMap::new(text, &pairs))
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let cfg = &cli.config;
    let max = cfg.max_report();
    match &cli.command {
        Command::Verify { which, no_prune } => {
            let opts = SearchOptions {
                jobs: cfg.jobs.unwrap_or(0),
                prune: !no_prune,
            };
            let mut reports = Vec::new();
            if matches!(which, Which::Nontransitivity | Which::All) {
                reports.push(counterexamples::verify_nontransitivity(opts)?);
            }
            if matches!(which, Which::Nonuniqueness | Which::All) {
                reports.push(counterexamples::verify_nonuniqueness()?);
            }
            if matches!(which, Which::Horns | Which::All) {
                reports.push(counterexamples::verify_unfillable_horns()?);
            }
            let ok = reports.iter().all(|r| r.passed());
            if reports.len() == 1 {
                out(&reports[0], ok)
            } else {
                out(&reports, ok)
            }
        }
        Command::Laws { max_level } => {
            let m = cfg.monad()?;
            let b = cfg.bounds(2)?;
            let a = cfg.algebra(&m, &b)?;
            let mut mb = b.clone();
            if mb.carrier.is_empty() {
                mb.carrier = vec![Atom::new("a"), Atom::new("b")];
            }
            let mut reports = check_monad_laws(&m, &mb, *max_level)?;
            reports.extend(a.check_algebra_laws(&b)?);
            reports.extend(bar::check_simplicial_identities(&a, *max_level, &b)?);
            let ok = reports.iter().all(|r| r.passed());
            out(
                &json!({ "monad": m.id.to_string(), "algebra": a.name, "status": Status::from_ok(ok), "reports": reports }),
                ok,
            )
        }
        Command::Terms(cmd) => {
            let m = cfg.monad()?;
            let b = cfg.bounds(3)?;
            match cmd {
                TermsCmd::Parse { level, term } => {
                    let t = m.parse(term, *level)?;
                    out(
                        &json!({ "term": t.print(), "level": t.level(), "leaves": t.leaf_count() }),
                        true,
                    )
                }
                TermsCmd::Enumerate { level } => {
                    let ts: Vec<String> =
                        m.enumerate(*level, &b)?.iter().map(|t| t.print()).collect();
                    out(
                        &json!({ "level": level, "count": ts.len(), "terms": ts }),
                        true,
                    )
                }
                TermsCmd::Count { level } => {
                    let exact = m.enumerate(*level, &b)?.len();
                    let bound = count_upper_bound(&m.flavor, *level, &b);
                    out(
                        &json!({ "level": level, "count": exact, "upper_bound": bound.to_string() }),
                        true,
                    )
                }
            }
        }
        Command::Bar(cmd) => {
            let m = cfg.monad()?;
            let b = cfg.bounds(2)?;
            let a = cfg.algebra(&m, &b)?;
            match cmd {
                BarCmd::Faces { level, index, term } => {
                    let s = Simplex::parse(&a, term, *level)?;
                    let f = bar::face(&a, &s, *index)?;
                    out(
                        &json!({ "simplex": s.print(), "index": index, "face": f.print() }),
                        true,
                    )
                }
                BarCmd::Degeneracy { level, index, term } => {
                    let s = Simplex::parse(&a, term, *level)?;
                    let d = bar::degeneracy(&a, &s, *index)?;
                    out(
                        &json!({ "simplex": s.print(), "index": index, "degeneracy": d.print() }),
                        true,
                    )
                }
                BarCmd::Identities { max_level } => {
                    let reports = bar::check_simplicial_identities(&a, *max_level, &b)?;
                    let ok = reports.iter().all(|r| r.passed());
                    out(&reports, ok)
                }
                BarCmd::Segal { level } => {
                    let r = bar::segal_check(&a, *level, &b, &[], max)?;
                    let ok = r.status == Status::Pass;
                    out(&r, ok)
                }
            }
        }
        Command::Pev(cmd) => {
            let m = cfg.monad()?;
            let b = cfg.bounds(6)?;
            let a = cfg.algebra(&m, &b)?;
            match cmd {
                PevCmd::Witnesses { from, to } => {
                    let t0 = Simplex::parse(&a, from, 0)?.term;
                    let t1 = Simplex::parse(&a, to, 0)?.term;
                    let set = pev::pe_witnesses(&a, &t0, &t1, &b)?;
                    let ws: Vec<WitnessView> =
                        set.witnesses.iter().map(WitnessView::from).collect();
                    let ok = !ws.is_empty();
                    out(
                        &json!({
                            "from": t0.print(), "to": t1.print(), "count": ws.len(), "witnesses": ws,
                            "exhaustive": set.exhaustive, "common_evaluation": set.common_evaluation, "note": set.note,
                        }),
                        ok,
                    )
                }
                PevCmd::Compose { t01, t12 } => {
                    let (w1, w2) = (Witness::parse(&a, t01)?, Witness::parse(&a, t12)?);
                    let (cs, exhaustive) = pev::compose_witnesses(&a, &w1, &w2, &b)?;
                    let list: Vec<Value> = cs
                        .iter()
                        .map(|c| json!({ "theta": c.theta.print(), "composite": WitnessView::from(&c.composite) }))
                        .collect();
                    let ok = !list.is_empty();
                    out(
                        &json!({ "count": list.len(), "exhaustive": exhaustive, "compositions": list }),
                        ok,
                    )
                }
                PevCmd::Relation { check } => {
                    let rel = pev::pe_relation(&a, &cfg.bounds(2)?)?;
                    let r = rel.report(&a, check, max)?;
                    let ok = r.status == Status::Pass;
                    out(&r, ok)
                }
                PevCmd::Indiscrete => {
                    let r = pev::check_indiscrete(&a, &cfg.bounds(2)?, max)?;
                    let ok = r.status == Status::Pass;
                    out(&r, ok)
                }
                PevCmd::Positivity => {
                    let r = pev::check_strict_positivity(&m, &cfg.bounds(2)?, max)?;
                    let ok = r.status == Status::Pass;
                    out(&r, ok)
                }
            }
        }
        Command::Squares(cmd) => match cmd {
            SquaresCmd::Classify { file } => {
                let sq = FiniteSquare::from_json(&read(file)?)?;
                let r = squares::classify_square(&sq, max)?;
                out(&r, true)
            }
            SquaresCmd::Property {
                property,
                max_level,
            } => {
                let m = cfg.monad()?;
                let b = cfg.bounds(2)?;
                let a = cfg.algebra(&m, &b)?;
                let r = match property {
                    Property::Isc => squares::check_inner_span_complete(&a, *max_level, &b, max)?,
                    Property::Stiff => squares::check_stiff(&a, *max_level, &b, max)?,
                    Property::Split => squares::check_split(&a, *max_level, &b, max)?,
                };
                let ok = r.passed();
                out(&r, ok)
            }
            SquaresCmd::Horn { level, faces } => {
                let m = cfg.monad()?;
                let b = cfg.bounds(6)?;
                let a = cfg.algebra(&m, &b)?;
                let given: BTreeMap<String, String> = serde_json::from_str(&read(faces)?)
                    .map_err(|e| Error::Config(format!("faces: {e}")))?;
                let mut fs = BTreeMap::new();
                for (k, t) in &given {
                    let i: usize = k
                        .parse()
                        .map_err(|_| Error::Config(format!("bad face index `{k}`")))?;
                    fs.insert(i, Simplex::parse(&a, t, level.saturating_sub(1))?);
                }
                let found = squares::fillers_for_faces(&a, *level, &fs, &b)?;
                let list: Vec<String> = found.simplices.iter().map(Simplex::print).collect();
                out(
                    &json!({ "count": list.len(), "fillers": list, "exhaustive": found.exhaustive, "note": found.note }),
                    true,
                )
            }
            SquaresCmd::Bc { map } => {
                let m = cfg.monad()?;
                let b = cfg.bounds(2)?;
                let r = squares::check_bc(&m, &[parse_map(map)?], &b, max)?;
                let ok = r.status == Status::Pass;
                out(&r, ok)
            }
        },
    }
}

fn render(v: &Value, indent: usize, buf: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        buf.push_str(&format!("{pad}{k}:\n"));
                        render(x, indent + 1, buf);
                    }
                    _ => buf.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                if is_flat(x) {
                    buf.push_str(&format!("{pad}- {}\n", scalar(x)));
                } else {
                    buf.push_str(&format!("{pad}-\n"));
                    render(x, indent + 1, buf);
                }
            }
        }
        _ => buf.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => {
            xs.iter()
                .all(|x| !matches!(x, Value::Array(_) | Value::Object(_)))
                && xs.len() <= 4
        }
        Value::Object(_) => false,
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

/// Runs a parsed command line, printing the report; returns the exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(j) = cli.config.jobs {
        // only the first call can configure the global pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global();
    }
    match dispatch(&cli) {
        Ok(o) => {
            match cli.config.format {
                Format::Json => match serde_json::to_string_pretty(&o.value) {
                    Ok(s) => println!("{s}"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return 2;
                    }
                },
                Format::Text => {
                    let mut buf = String::new();
                    render(&o.value, 0, &mut buf);
                    print!("{buf}");
                }
            }
            i32::from(!o.ok)
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `argv` (including the program name) and runs it.
pub fn run_from<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}
