//! `rackca`: build and check racks, run automata, verify claims.
//!
//! Exit codes: 0 success, 1 validation error, 2 budget exceeded, 3 bad usage.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rackca::ca::{majority_ca, CellularAutomaton, GlobalMap};
use rackca::compose::{compose_checked, invert_checked};
use rackca::config::{shift, Budget, ConfigSpace, Configuration, DEFAULT_BUDGET};
use rackca::enumerate::{enumerate_racks, EnumerationFilter};
use rackca::equivariance::{eq_set, stab_eq_with};
use rackca::harness::{is_claim, run_suite, CaGenerator, InstanceSpec, SuiteConfig, CLAIM_IDS};
use rackca::io::{resolve_group, resolve_rack, Document};
use rackca::memory::minimal_memory;
use rackca::rack::FiniteRack;
use rackca::verdict::{Mode, Verdict};
use rackca::Error;

#[derive(Parser)]
#[command(name = "rackca", version, about = "Cellular automata over finite racks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Maximum number of configurations (q^n) a command may tabulate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Ambient,
    Restricted,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Trace {
    Csv,
    Pgm,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Rack(RackCmd),
    #[command(subcommand)]
    Group(GroupCmd),
    #[command(subcommand)]
    Action(ActionCmd),
    #[command(subcommand)]
    Config(ConfigCmd),
    #[command(subcommand)]
    Ca(CaCmd),
    /// Run one claim, or `all`, and print the report.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum RackCmd {
    /// Emit the rack document for a spec.
    Build { spec: String },
    /// Validate a rack file or spec.
    Check { spec: String },
    /// The group generated by the inner automorphisms.
    InnerGroup {
        spec: String,
        #[arg(long, default_value_t = 40320)]
        limit: usize,
    },
    /// All racks of order n (at most 4).
    Enumerate {
        n: usize,
        #[arg(long)]
        up_to_iso: bool,
        #[arg(long)]
        quandles: bool,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    Build { spec: String },
    Check { spec: String },
}

#[derive(Subcommand)]
enum ActionCmd {
    /// Validate an action file and print the point stabilizers.
    Check {
        path: PathBuf,
        #[arg(long)]
        rack: Option<String>,
    },
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long)]
    rack: String,
    #[arg(long, default_value_t = 2)]
    q: usize,
    /// Digit string in cell order, or a config file.
    #[arg(long)]
    config: String,
}

#[derive(Subcommand)]
enum ConfigCmd {
    /// `r.x`, or every shift when `--element` is absent.
    Shift {
        #[command(flatten)]
        args: ConfigArgs,
        #[arg(long)]
        element: Option<usize>,
    },
    /// The stabilizer of x, computed both ways.
    Stab {
        #[command(flatten)]
        args: ConfigArgs,
    },
}

#[derive(Args)]
struct CaArgs {
    /// CA file.
    #[arg(long)]
    ca: PathBuf,
    /// Rack for CA files that name none.
    #[arg(long)]
    rack: Option<String>,
    /// Expected alphabet size; checked against the file.
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Subcommand)]
enum CaCmd {
    Apply {
        #[command(flatten)]
        ca: CaArgs,
        #[arg(long)]
        config: String,
    },
    Evolve {
        #[command(flatten)]
        ca: CaArgs,
        #[arg(long)]
        config: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long, value_enum)]
        trace: Option<Trace>,
    },
    /// Eq(tau), and Stab(x, Eq(tau)) when `--config` is given.
    Eqset {
        #[command(flatten)]
        ca: CaArgs,
        #[arg(long)]
        config: Option<String>,
    },
    /// Minimal memory sets of a CA file or a map file (`--map`).
    Minmem {
        #[arg(long, conflicts_with = "map", required_unless_present = "map")]
        ca: Option<PathBuf>,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        rack: Option<String>,
    },
    /// `sigma ▶ tau = sigma ∘ tau` against the claimed composite CA.
    Compose {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        tau: PathBuf,
        #[arg(long)]
        rack: Option<String>,
    },
    Invert {
        #[command(flatten)]
        ca: CaArgs,
    },
    /// Majority automaton on Conj(G) over a subset of G.
    Majority {
        #[arg(long)]
        group: String,
        /// Comma-separated group elements.
        #[arg(long, value_delimiter = ',', required = true)]
        subset: Vec<usize>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// A claim id or `all`.
    claim: String,
    /// Rack to run on; the default suite when absent.
    #[arg(long)]
    rack: Option<String>,
    #[arg(long, default_value_t = 2)]
    q: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Largest memory set in the exhaustive generator.
    #[arg(long, default_value_t = 2)]
    max_memory: usize,
    /// Use this many seeded random automata instead of the exhaustive family.
    #[arg(long)]
    random: Option<usize>,
    /// Seeded random global maps added to the Curtis-Hedlund check.
    #[arg(long, default_value_t = 0)]
    random_maps: usize,
    /// Keep at most this many certificates per record.
    #[arg(long)]
    max_certificates: Option<usize>,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T> = Result<T, Failure>;

/// Text-only output (traces) ignores `--format`.
enum Output {
    Text(String),
    Both { text: String, json: Value },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Core(e)) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(if e.is_budget() { 2 } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> CliResult<ExitCode> {
    let common = &cli.common;
    let budget = Budget::new(common.budget);
    let output = match &cli.command {
        Command::Rack(cmd) => rack_cmd(cmd)?,
        Command::Group(cmd) => group_cmd(cmd)?,
        Command::Action(ActionCmd::Check { path, rack }) => action_check(path, rack.as_deref())?,
        Command::Config(cmd) => config_cmd(cmd, budget)?,
        Command::Ca(cmd) => ca_cmd(cmd, budget)?,
        Command::Verify(args) => return verify(args, common, budget),
    };
    write(common, render(output, common.format))?;
    Ok(ExitCode::SUCCESS)
}

fn render(output: Output, format: Format) -> String {
    match (output, format) {
        (Output::Text(t), _) => t,
        (Output::Both { json, .. }, Format::Json) => format!("{}\n", serde_json::to_string(&json).expect("json")),
        (Output::Both { text, .. }, Format::Text) => text,
    }
}

fn write(common: &Common, text: String) -> CliResult<()> {
    use std::io::Write;
    let bytes = text.as_bytes();
    match &common.out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())).into()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(|e| Error::Invalid(e.to_string()).into())
        }
    }
}

fn table_text(rows: &[Vec<usize>]) -> String {
    rows.iter().map(|r| r.iter().map(usize::to_string).collect::<Vec<_>>().join(" ") + "\n").collect()
}

fn verdict_line(v: &Verdict) -> String {
    let mut line = format!("{} [{}] {}: {}", v.claim, v.facet, v.status.as_str(), v.instance);
    if let Some(w) = &v.witness {
        line.push_str(&format!(" witness={}", serde_json::to_string(w).expect("json")));
    }
    line + "\n"
}

fn rack_cmd(cmd: &RackCmd) -> CliResult<Output> {
    Ok(match cmd {
        RackCmd::Build { spec } => {
            let rack = resolve_rack(spec)?;
            Output::Both { text: table_text(&rack.table()), json: doc_value(&Document::rack(&rack)) }
        }
        RackCmd::Check { spec } => {
            let rack = resolve_rack(spec)?;
            let conj = rack.inner_conjugation_check();
            let json = json!({
                "valid": true,
                "n": rack.order(),
                "quandle": rack.is_quandle(),
                "trivial": rack.is_trivial(),
                "inner_conjugation": conj,
            });
            let text = format!(
                "valid rack, n={}, quandle={}\n{}",
                rack.order(),
                rack.is_quandle(),
                verdict_line(&conj)
            );
            Output::Both { text, json }
        }
        RackCmd::InnerGroup { spec, limit } => {
            let rack = resolve_rack(spec)?;
            let perms: Vec<Vec<usize>> = rack.inner_group(*limit)?.into_iter().map(Vec::from).collect();
            let text = format!("order {}\n{}", perms.len(), table_text(&perms));
            Output::Both { text, json: json!({ "order": perms.len(), "elements": perms }) }
        }
        RackCmd::Enumerate { n, up_to_iso, quandles } => {
            let filter = EnumerationFilter { up_to_iso: *up_to_iso, quandles_only: *quandles };
            let racks = enumerate_racks(*n, filter)?;
            let text = racks
                .iter()
                .enumerate()
                .map(|(i, r)| format!("# {i} quandle={}\n{}", r.is_quandle(), table_text(&r.table())))
                .collect::<String>();
            let json = json!({
                "n": n,
                "count": racks.len(),
                "racks": racks.iter().map(|r| doc_value(&Document::rack(r))).collect::<Vec<_>>(),
            });
            Output::Both { text: format!("{} racks\n{text}", racks.len()), json }
        }
    })
}

fn group_cmd(cmd: &GroupCmd) -> CliResult<Output> {
    Ok(match cmd {
        GroupCmd::Build { spec } => {
            let g = resolve_group(spec)?;
            Output::Both { text: table_text(&g.table()), json: doc_value(&Document::group(&g)) }
        }
        GroupCmd::Check { spec } => {
            let g = resolve_group(spec)?;
            let text = format!("valid group, order {}, identity {}\n", g.order(), g.identity());
            Output::Both { text, json: json!({ "valid": true, "order": g.order(), "identity": g.identity() }) }
        }
    })
}

fn action_check(path: &PathBuf, rack: Option<&str>) -> CliResult<Output> {
    let rack = rack.map(resolve_rack).transpose()?.map(Arc::new);
    let action = Document::read(path)?.into_action(rack.as_ref())?;
    let stabs = (0..action.set_size()).map(|x| action.stabilizer(x)).collect::<rackca::Result<Vec<_>>>()?;
    let text = stabs
        .iter()
        .enumerate()
        .map(|(x, s)| format!("Stab({x}) = {:?} closure {}\n", s.members, s.closure.status.as_str()))
        .collect::<String>();
    let json = json!({
        "valid": true,
        "m": action.set_size(),
        "stabilizers": stabs.iter().map(|s| json!({ "members": s.members, "closure": s.closure })).collect::<Vec<_>>(),
    });
    Ok(Output::Both { text: format!("valid action, m={}\n{text}", action.set_size()), json })
}

/// A digit string when it is all digits, otherwise a config file.
fn load_config(arg: &str, q: usize) -> CliResult<Configuration> {
    if !arg.is_empty() && arg.bytes().all(|b| b.is_ascii_digit()) {
        if q > 10 {
            return Err(Failure::Usage("digit strings need q <= 10; pass a config file".into()));
        }
        return Ok(Configuration::parse_digits(q, arg)?);
    }
    let x = Document::read(arg)?.into_config()?;
    if x.q != q {
        return Err(Error::Mismatch(format!("config file has q = {}, expected {q}", x.q)).into());
    }
    Ok(x)
}

fn check_length(x: &Configuration, rack: &FiniteRack) -> CliResult<()> {
    if x.len() != rack.order() {
        return Err(Error::Mismatch(format!("configuration has {} cells for a rack of order {}", x.len(), rack.order())).into());
    }
    Ok(())
}

fn config_text(x: &Configuration) -> String {
    if x.q <= 10 {
        x.digits()
    } else {
        x.cells.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }
}

fn config_cmd(cmd: &ConfigCmd, budget: Budget) -> CliResult<Output> {
    let args = match cmd {
        ConfigCmd::Shift { args, .. } | ConfigCmd::Stab { args } => args,
    };
    let rack = Arc::new(resolve_rack(&args.rack)?);
    let x = load_config(&args.config, args.q)?;
    check_length(&x, &rack)?;
    Ok(match cmd {
        ConfigCmd::Shift { element, .. } => {
            let elements: Vec<usize> = match element {
                Some(r) => vec![*r],
                None => (0..rack.order()).collect(),
            };
            let shifted = elements.iter().map(|&r| shift(&rack, r, &x)).collect::<rackca::Result<Vec<_>>>()?;
            let text = elements.iter().zip(&shifted).map(|(r, y)| format!("{r}: {}\n", config_text(y))).collect();
            let json = json!({
                "config": x.cells,
                "shifts": elements.iter().zip(&shifted).map(|(r, y)| json!({ "element": r, "cells": y.cells })).collect::<Vec<_>>(),
            });
            Output::Both { text, json }
        }
        ConfigCmd::Stab { .. } => {
            let space = ConfigSpace::new(rack, args.q, budget)?;
            let stab = space.config_stabilizer(space.encode(&x)?);
            let text = format!(
                "Stab({}) = {:?}\n{}{}",
                config_text(&x),
                stab.members,
                verdict_line(&stab.agreement),
                verdict_line(&stab.closure)
            );
            let json = json!({ "members": stab.members, "agreement": stab.agreement, "closure": stab.closure });
            Output::Both { text, json }
        }
    })
}

fn load_ca(path: &PathBuf, rack: Option<&str>, q: Option<usize>) -> CliResult<CellularAutomaton> {
    let rack = rack.map(resolve_rack).transpose()?.map(Arc::new);
    let tau = Document::read(path)?.into_ca(rack.as_ref())?;
    if let Some(r) = &rack {
        if tau.rack().as_ref() != r.as_ref() {
            return Err(Error::Mismatch("CA file names a different rack than --rack".into()).into());
        }
    }
    if q.is_some_and(|q| q != tau.q()) {
        return Err(Error::Mismatch(format!("CA has q = {}, --q says {}", tau.q(), q.unwrap())).into());
    }
    Ok(tau)
}

fn doc_value(doc: &Document) -> Value {
    serde_json::to_value(doc).expect("documents serialize")
}

fn ca_cmd(cmd: &CaCmd, budget: Budget) -> CliResult<Output> {
    Ok(match cmd {
        CaCmd::Apply { ca, config } => {
            let tau = load_ca(&ca.ca, ca.rack.as_deref(), ca.q)?;
            let x = load_config(config, tau.q())?;
            let y = tau.apply(&x)?;
            Output::Both { text: format!("{}\n", config_text(&y)), json: json!({ "cells": y.cells }) }
        }
        CaCmd::Evolve { ca, config, steps, trace } => {
            let tau = load_ca(&ca.ca, ca.rack.as_deref(), ca.q)?;
            let x = load_config(config, tau.q())?;
            let orbit = tau.evolve(&x, *steps)?;
            match trace {
                Some(Trace::Csv) => Output::Text(
                    orbit
                        .iter()
                        .map(|y| y.cells.iter().map(usize::to_string).collect::<Vec<_>>().join(",") + "\n")
                        .collect(),
                ),
                Some(Trace::Pgm) => Output::Text(pgm(&orbit, tau.q())),
                None => Output::Both {
                    text: orbit.iter().map(|y| config_text(y) + "\n").collect(),
                    json: json!({ "trace": orbit.iter().map(|y| &y.cells).collect::<Vec<_>>() }),
                },
            }
        }
        CaCmd::Eqset { ca, config } => {
            let tau = load_ca(&ca.ca, ca.rack.as_deref(), ca.q)?;
            let space = ConfigSpace::new(tau.rack().clone(), tau.q(), budget)?;
            let f = tau.global_map(&space)?;
            let eq = eq_set(&space, &f)?;
            let mut text = format!("Eq = {:?}\n{}", eq.members, verdict_line(&eq.closure));
            let mut json = json!({ "eq": eq.members, "closure": eq.closure });
            if let Some(c) = config {
                let x = load_config(c, tau.q())?;
                check_length(&x, tau.rack())?;
                let se = stab_eq_with(&space, &f, &eq.members, space.encode(&x)?);
                text.push_str(&format!(
                    "Stab({}, Eq) = {:?}\n{}{}",
                    config_text(&x),
                    se.members,
                    verdict_line(&se.closure),
                    verdict_line(&se.inclusion)
                ));
                json["stab_eq"] = json!({ "members": se.members, "closure": se.closure, "inclusion": se.inclusion });
            }
            Output::Both { text, json }
        }
        CaCmd::Minmem { ca, map, rack } => {
            let (space, f) = match (ca, map) {
                (Some(path), _) => {
                    let tau = load_ca(path, rack.as_deref(), None)?;
                    let space = ConfigSpace::new(tau.rack().clone(), tau.q(), budget)?;
                    let f = tau.global_map(&space)?;
                    (space, f)
                }
                (None, Some(path)) => {
                    let rack = rack.as_deref().ok_or_else(|| Failure::Usage("--map needs --rack".into()))?;
                    let f: GlobalMap = Document::read(path)?.into_map()?;
                    let space = ConfigSpace::new(Arc::new(resolve_rack(rack)?), f.q, budget)?;
                    (space, f)
                }
                (None, None) => return Err(Failure::Usage("pass --ca or --map".into())),
            };
            let mm = minimal_memory(&space, &f)?;
            let automaton = mm.automaton(&space)?;
            let text = format!(
                "minimal memory sets {:?}\nintersection {:?}\nrule {:?}\n{}",
                mm.minima,
                mm.intersection,
                automaton.rule(),
                verdict_line(&mm.verdict)
            );
            let mut ca_doc = doc_value(&Document::ca(&automaton));
            if !mm.rule.constrained.iter().all(|&c| c) {
                let free: Vec<usize> = (0..mm.rule.constrained.len()).filter(|&i| !mm.rule.constrained[i]).collect();
                ca_doc["unconstrained"] = json!(free);
            }
            let json = json!({
                "minima": mm.minima,
                "intersection": mm.intersection,
                "ca": ca_doc,
                "verdict": mm.verdict,
            });
            Output::Both { text, json }
        }
        CaCmd::Compose { sigma, tau, rack } => {
            let s = load_ca(sigma, rack.as_deref(), None)?;
            let t = load_ca(tau, rack.as_deref(), None)?;
            if s.rack() != t.rack() || s.q() != t.q() {
                return Err(Error::Mismatch("sigma and tau live on different universes".into()).into());
            }
            let space = ConfigSpace::new(s.rack().clone(), s.q(), budget)?;
            let comp = compose_checked(&space, &s, &t)?;
            let text = format!(
                "claimed memory {:?}\nclaimed rule {:?}\n{}",
                comp.claimed.memory(),
                comp.claimed.rule(),
                verdict_line(&comp.verdict)
            );
            let json = json!({
                "claimed": doc_value(&Document::ca(&comp.claimed)),
                "composite": doc_value(&Document::map(&comp.composite)),
                "verdict": comp.verdict,
            });
            Output::Both { text, json }
        }
        CaCmd::Invert { ca } => {
            let tau = load_ca(&ca.ca, ca.rack.as_deref(), ca.q)?;
            let space = ConfigSpace::new(tau.rack().clone(), tau.q(), budget)?;
            let inv = invert_checked(&space, &tau)?;
            let mut text = format!("bijective {}\n", inv.bijective);
            if let Some(c) = &inv.inverse_ca {
                text.push_str(&format!("inverse memory {:?} rule {:?}\n", c.memory(), c.rule()));
            }
            text.push_str(&verdict_line(&inv.verdict));
            let json = json!({
                "bijective": inv.bijective,
                "inverse": inv.inverse.as_ref().map(|m| doc_value(&Document::map(m))),
                "inverse_ca": inv.inverse_ca.as_ref().map(|c| doc_value(&Document::ca(c))),
                "verdict": inv.verdict,
            });
            Output::Both { text, json }
        }
        CaCmd::Majority { group, subset } => {
            let g = resolve_group(group)?;
            let maj = majority_ca(&g, subset, budget)?;
            let text = format!(
                "memory {:?}\nrule {:?}\n{}",
                maj.ca.memory(),
                maj.ca.rule(),
                verdict_line(&maj.verdict)
            );
            let json = json!({ "ca": doc_value(&Document::ca(&maj.ca)), "verdict": maj.verdict });
            Output::Both { text, json }
        }
    })
}

/// Plain PGM, one row per step, symbols on evenly spaced gray levels.
fn pgm(orbit: &[Configuration], q: usize) -> String {
    let width = orbit.first().map_or(0, Configuration::len);
    let mut out = format!("P2\n{width} {}\n255\n", orbit.len());
    for y in orbit {
        let row: Vec<String> = y.cells.iter().map(|&c| if q > 1 { c * 255 / (q - 1) } else { 0 }.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn verify(args: &VerifyArgs, common: &Common, budget: Budget) -> CliResult<ExitCode> {
    let claims: Vec<String> = if args.claim == "all" {
        CLAIM_IDS.iter().map(|s| s.to_string()).collect()
    } else if is_claim(&args.claim) {
        vec![args.claim.clone()]
    } else {
        return Err(Failure::Usage(format!("unknown claim {:?}; expected one of {} or all", args.claim, CLAIM_IDS.join(", "))));
    };
    let mut config = match &args.rack {
        Some(rack) => {
            let generator = match args.random {
                Some(count) => CaGenerator::Random { count, max_memory: args.max_memory },
                None => CaGenerator::Exhaustive { max_memory: args.max_memory },
            };
            let spec = InstanceSpec::from_spec(rack, args.q)?
                .with_seed(args.seed)
                .with_budget(budget)
                .with_generator(generator)
                .with_random_maps(args.random_maps);
            SuiteConfig::for_specs(vec![spec], args.seed)
        }
        None => SuiteConfig::default_suite(args.seed, budget)?,
    }
    .with_claims(claims);
    config.max_certificates = args.max_certificates;
    config.mode = args.mode.map(|m| match m {
        ModeArg::Ambient => Mode::Ambient,
        ModeArg::Restricted => Mode::Restricted,
    });
    let report = run_suite(&config);
    let text = match common.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    write(common, text)?;
    // FAILS verdicts are findings, not errors
    Ok(if report.errored.is_empty() {
        ExitCode::SUCCESS
    } else if report.errored.iter().all(|e| e.error == "SizeLimitExceeded") {
        ExitCode::from(2)
    } else {
        ExitCode::from(1)
    })
}
