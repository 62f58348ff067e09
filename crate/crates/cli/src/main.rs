//! `crnscope`: structure, steady states, ACR checks and audits from the command line.
//!
//! Exit codes: 0 success, 1 a claim failed or a counterexample was found, 2 the network
//! text did not parse, 3 bad usage (unknown ids or species, unbound rates, bad options).

mod args;

use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crnscope::acr::{acr_check, AcrStatus, AcrVerdict};
use crnscope::atlas::{
    audit, enumerate_networks, verify_family_claims, AuditConfig, AuditResult, TheoremId,
};
use crnscope::dsl::{format_network, parse_network};
use crnscope::families::{family, FamilyId};
use crnscope::massaction::{build_system, MassActionSystem};
use crnscope::network::ReactionNetwork;
use crnscope::par::Exec;
use crnscope::rational::format_q;
use crnscope::steady::{
    anchor_from_totals, anchors_f64, closed_form_family, default_anchors, find_steady_states,
    SolveOptions, SteadyStateReport, DEFAULT_BUDGET,
};
use crnscope::structural::{analyze_structure, arrow_diagram, StructureReport};

use args::{parse_enum_spec, parse_kappa, parse_list, parse_totals, CliError};

#[derive(Parser)]
#[command(
    name = "crnscope",
    version,
    about = "Analysis of mass-action reaction networks"
)]
struct Cli {
    /// Emit JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for rate sampling and Newton seeds.
    #[arg(long, global = true, env = "CRN_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Network file (`-` reads stdin).
    #[arg(required_unless_present = "expr")]
    file: Option<String>,
    /// Network given inline, e.g. "A+B -> 2A; A -> B".
    #[arg(short = 'e', long, conflicts_with = "file")]
    expr: Option<String>,
}

#[derive(Args)]
struct ClassArgs {
    /// Rates as `k1=1,k2=3/2` or positionally as `1,3/2` (label order).
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// A positive point fixing the compatibility class.
    #[arg(long, conflicts_with = "totals")]
    anchor: Option<String>,
    /// Conservation-law values, `T=10` or `10,11` in basis order.
    #[arg(long)]
    totals: Option<String>,
    /// Newton seeds per class.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Stoichiometry, conservation laws and deficiency.
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Also print the arrow diagram of a one-species network.
        #[arg(long)]
        arrow_diagram: bool,
    },
    /// Positive steady states per compatibility class.
    Steady {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Absolute concentration robustness of one species.
    Acr {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        species: String,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Canonical networks up to species relabelling.
    Enumerate {
        /// `n=2,r=3` plus any of `reversible`, `any` (molecularity up to 3), `fulldim`, `nonfulldim`.
        #[arg(long)]
        spec: String,
        /// Print only the number of networks.
        #[arg(long)]
        count: bool,
    },
    /// Search small networks for counterexamples to a registered claim.
    Audit {
        /// A1..A8, or `all`.
        #[arg(long)]
        theorem: String,
        /// Replaces the default enumeration; may be repeated.
        #[arg(long)]
        spec: Vec<String>,
        /// Rate vectors tried per network.
        #[arg(long)]
        kappa_samples: Option<usize>,
        /// Stop after this many networks.
        #[arg(long)]
        max_networks: Option<usize>,
        /// Newton seeds per class.
        #[arg(long)]
        budget: Option<usize>,
        /// Add the known violating network to the search.
        #[arg(long)]
        inject_control: bool,
    },
    /// Closed-form steady states of a parametric family, optionally checked numerically.
    Family {
        /// Gn_fulldim, Gn_conserved or Gnk.
        #[arg(long)]
        id: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        /// Positional rates; all ones by default.
        #[arg(long)]
        kappa: Option<String>,
        #[arg(long)]
        totals: Option<String>,
        /// Check multistationarity, closed forms and ACR values against the numeric search.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
}

struct Ctx {
    json: bool,
    seed: u64,
    exec: Exec,
}

impl Ctx {
    fn opts(&self, budget: usize) -> SolveOptions {
        SolveOptions {
            budget,
            seed: self.seed,
            exec: self.exec,
        }
    }

    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<(), CliError> {
        let out = if self.json {
            serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
        } else {
            text()
        };
        io::stdout().write_all(out.as_bytes())?;
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let exec = match cli.jobs {
        Some(1) => Exec::Sequential,
        Some(j) => {
            std::env::set_var("RAYON_NUM_THREADS", j.max(1).to_string());
            Exec::default()
        }
        None => Exec::default(),
    };
    let ctx = Ctx {
        json: cli.json,
        seed: cli.seed,
        exec,
    };
    match run(cli.command, &ctx) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// `Ok(false)` when a claim failed.
fn run(command: Command, ctx: &Ctx) -> Result<bool, CliError> {
    match command {
        Command::Analyze {
            input,
            arrow_diagram: diagram,
        } => cmd_analyze(&read_network(&input)?, diagram, ctx),
        Command::Steady { input, class } => cmd_steady(&read_network(&input)?, &class, ctx),
        Command::Acr {
            input,
            species,
            class,
        } => cmd_acr(&read_network(&input)?, &species, &class, ctx),
        Command::Enumerate { spec, count } => cmd_enumerate(&spec, count, ctx),
        Command::Audit {
            theorem,
            spec,
            kappa_samples,
            max_networks,
            budget,
            inject_control,
        } => {
            let ids = if theorem.eq_ignore_ascii_case("all") {
                TheoremId::ALL.to_vec()
            } else {
                vec![theorem.parse::<TheoremId>()?]
            };
            let specs = spec
                .iter()
                .map(|s| parse_enum_spec(s))
                .collect::<Result<Vec<_>, _>>()?;
            let mut clean = true;
            for id in ids {
                let mut cfg = AuditConfig::default_for(id);
                if !specs.is_empty() {
                    cfg.specs = specs.clone();
                }
                cfg.kappa_samples = kappa_samples.unwrap_or(cfg.kappa_samples);
                if max_networks.is_some() {
                    cfg.max_networks = max_networks;
                }
                cfg.budget = budget.unwrap_or(cfg.budget);
                cfg.seed = ctx.seed;
                cfg.inject_control = inject_control;
                cfg.exec = ctx.exec;
                let result = audit(id, &cfg)?;
                clean &= result.counterexamples.is_empty();
                ctx.emit(&result, || audit_text(&result))?;
            }
            Ok(clean)
        }
        Command::Family {
            id,
            n,
            k,
            kappa,
            totals,
            verify,
            budget,
        } => cmd_family(
            &id,
            n,
            k,
            kappa.as_deref(),
            totals.as_deref(),
            verify,
            budget,
            ctx,
        ),
    }
}

fn read_network(input: &Input) -> Result<ReactionNetwork, CliError> {
    let text = match (&input.expr, input.file.as_deref()) {
        (Some(e), _) => e.clone(),
        (None, Some("-")) => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?,
        (None, None) => return Err(CliError::Usage("no network given".into())),
    };
    Ok(parse_network(&text)?)
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    species: &'a [String],
    reactions: Vec<String>,
    #[serde(flatten)]
    report: StructureReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    arrow_diagram: Option<String>,
}

fn cmd_analyze(net: &ReactionNetwork, diagram: bool, ctx: &Ctx) -> Result<bool, CliError> {
    let arrow = if diagram {
        Some(
            arrow_diagram(net)
                .map_err(|e| CliError::Usage(e.to_string()))?
                .to_string(),
        )
    } else {
        None
    };
    let out = AnalyzeOutput {
        species: net.species(),
        reactions: reaction_lines(net),
        report: analyze_structure(net),
        arrow_diagram: arrow,
    };
    ctx.emit(&out, || {
        let r = &out.report;
        let mut s = String::new();
        s += &format!("species      {}\n", out.species.join(", "));
        for line in &out.reactions {
            s += &format!("reaction     {line}\n");
        }
        s += &format!("n, r, m      {}, {}, {}\n", r.n, r.r, r.m);
        s += &format!("reactants    {}\n", r.num_reactants);
        s += &format!("linkage      {}\n", r.ell);
        s += &format!("dim S        {}\n", r.dim_s);
        s += &format!("deficiency   {}\n", r.deficiency);
        s += &format!(
            "flags        weakly_reversible={} reversible={} bimolecular={}\n",
            r.weakly_reversible, r.reversible, r.bimolecular
        );
        for w in &r.conservation_basis {
            let v: Vec<String> = w.iter().map(format_q).collect();
            s += &format!("conserved    ({})\n", v.join(", "));
        }
        if let Some(d) = &out.arrow_diagram {
            s += &format!("arrows       {d}\n");
        }
        s
    })?;
    Ok(true)
}

fn reaction_lines(net: &ReactionNetwork) -> Vec<String> {
    net.reactions()
        .iter()
        .map(|r| {
            format!(
                "{} -> {}, {}",
                r.reactant.display_with(net.species()),
                r.product.display_with(net.species()),
                r.rate
            )
        })
        .collect()
}

fn system(net: &ReactionNetwork, kappa: Option<&str>) -> Result<MassActionSystem, CliError> {
    let rates = parse_kappa(net, kappa)?;
    Ok(build_system(net, &rates)?)
}

/// The class from `--anchor`/`--totals`, or the default log-grid of anchors.
fn class_anchors(net: &ReactionNetwork, class: &ClassArgs) -> Result<Vec<Vec<f64>>, CliError> {
    if let Some(a) = &class.anchor {
        let point = parse_list(a)?;
        if point.len() != net.n() || point.iter().any(|v| v.is_nan() || *v <= 0.0) {
            return Err(CliError::Usage(format!(
                "anchor needs {} positive entries",
                net.n()
            )));
        }
        return Ok(vec![point]);
    }
    if let Some(t) = &class.totals {
        let totals = parse_totals(t)?;
        return Ok(vec![anchor_from_totals(net, &totals)?]);
    }
    Ok(anchors_f64(&default_anchors(net)))
}

fn cmd_steady(net: &ReactionNetwork, class: &ClassArgs, ctx: &Ctx) -> Result<bool, CliError> {
    let sys = system(net, class.kappa.as_deref())?;
    let anchors = class_anchors(net, class)?;
    let reports = anchors
        .iter()
        .map(|a| find_steady_states(&sys, a, ctx.opts(class.budget)))
        .collect::<Result<Vec<_>, _>>()?;
    ctx.emit(&reports, || {
        reports
            .iter()
            .map(|r| report_text(net, r))
            .collect::<Vec<_>>()
            .join("\n")
    })?;
    Ok(true)
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn report_text(net: &ReactionNetwork, r: &SteadyStateReport) -> String {
    let method = serde_json::to_value(r.method).expect("method serializes");
    let mut s = format!(
        "class anchor {} totals {}  method {}  seed {}  budget {}\n",
        fmt_vec(&r.class_anchor),
        fmt_vec(&r.totals),
        method.as_str().unwrap_or_default(),
        r.seed,
        r.budget
    );
    let mut header = format!("  {:>3}", "#");
    for name in net.species() {
        header += &format!(" {name:>14}");
    }
    s += &format!("{header} {:>10} nondegenerate\n", "residual");
    for (i, st) in r.states.iter().enumerate() {
        let mut row = format!("  {:>3}", i + 1);
        for x in &st.point {
            row += &format!(" {x:>14.8e}");
        }
        s += &format!("{row} {:>10.2e} {}\n", st.residual, st.nondegenerate);
    }
    s += &format!(
        "  {} positive, {} nondegenerate\n",
        r.count_pos, r.count_nondeg
    );
    s
}

fn cmd_acr(
    net: &ReactionNetwork,
    species: &str,
    class: &ClassArgs,
    ctx: &Ctx,
) -> Result<bool, CliError> {
    let idx = net
        .species_index(species)
        .ok_or_else(|| CliError::Usage(format!("unknown species `{species}`")))?;
    let sys = system(net, class.kappa.as_deref())?;
    let anchors = class_anchors(net, class)?;
    let verdict = acr_check(&sys, idx, &anchors, ctx.opts(class.budget))?;
    ctx.emit(&verdict, || acr_text(species, &verdict))?;
    Ok(true)
}

fn acr_text(species: &str, v: &AcrVerdict) -> String {
    let status = serde_json::to_value(v.status).expect("status serializes");
    let evidence = serde_json::to_value(v.evidence).expect("evidence serializes");
    let mut s = format!("{species}: {}", status.as_str().unwrap_or_default());
    if let Some(value) = v.acr_value {
        s += &format!(", value {value:.9}");
    }
    if let Some(exact) = &v.exact_value {
        s += &format!(" (exact {})", format_q(exact));
    }
    s += &format!("\n  evidence {}", evidence.as_str().unwrap_or_default());
    s += &format!(
        "\n  {} states from {} classes",
        v.states_examined, v.anchors_used
    );
    if let Some(c) = &v.certificate {
        s += &format!("\n  certificate: {c}");
    }
    if v.degenerate_states > 0 && v.status != AcrStatus::NoPositiveStates {
        s += &format!(
            "\n  note: {} of {} examined states are degenerate",
            v.degenerate_states, v.states_examined
        );
    }
    s + "\n"
}

fn cmd_enumerate(spec: &str, count: bool, ctx: &Ctx) -> Result<bool, CliError> {
    let spec = parse_enum_spec(spec)?;
    let mut out = io::stdout().lock();
    if count {
        let n = enumerate_networks(spec)?.count();
        if ctx.json {
            writeln!(out, "{}", serde_json::json!({ "spec": spec, "count": n }))?;
        } else {
            writeln!(out, "{n}")?;
        }
        return Ok(true);
    }
    for net in enumerate_networks(spec)? {
        let line = format_network(&net);
        if ctx.json {
            writeln!(out, "{}", serde_json::Value::String(line))?;
        } else {
            writeln!(out, "{line}")?;
        }
    }
    Ok(true)
}

fn audit_text(r: &AuditResult) -> String {
    let mut s = format!("{}: {}\n", r.theorem_id, r.statement);
    s += &format!(
        "  networks {} enumerated, {} checked, {} rate samples each, seed {}\n",
        r.networks_enumerated, r.networks_checked, r.kappa_samples, r.seed
    );
    s += &format!(
        "  control {} ({})\n",
        if r.control.flagged {
            "flagged"
        } else {
            "NOT flagged"
        },
        r.control.network
    );
    if r.counterexamples.is_empty() {
        s += "  no counterexamples\n";
    }
    for c in &r.counterexamples {
        let rates: Vec<String> = c.rates.iter().map(|(k, v)| format!("{k}={v}")).collect();
        s += &format!(
            "  counterexample{}: {}\n    rates {}\n    {}\n",
            if c.control { " (control)" } else { "" },
            c.network,
            rates.join(","),
            c.detail
        );
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_family(
    id: &str,
    n: usize,
    k: Option<usize>,
    kappa: Option<&str>,
    totals: Option<&str>,
    verify: bool,
    budget: usize,
    ctx: &Ctx,
) -> Result<bool, CliError> {
    let id: FamilyId = id.parse()?;
    let net = family(id, n, k)?;
    let rates = match kappa {
        Some(text) => args::parse_rate_list(text)?,
        None => vec![crnscope::rational::q(1); net.labels().len()],
    };
    let totals = totals.map(parse_totals).transpose()?;
    if verify {
        let anchors = match &totals {
            Some(t) => vec![anchor_from_totals(&net, t)?],
            None => anchors_f64(&default_anchors(&net)),
        };
        let report = verify_family_claims(id, n, k, &rates, &anchors, ctx.opts(budget))?;
        ctx.emit(&report, || {
            let mut s = format!("{} n={} k={}\n", report.family, report.n, report.k);
            for c in &report.clauses {
                s += &format!(
                    "  [{}] {}: {}\n",
                    if c.holds { "ok" } else { "FAIL" },
                    c.claim,
                    c.detail
                );
            }
            s
        })?;
        return Ok(report.holds);
    }
    let report = closed_form_family(id, n, k, &rates, totals.as_deref())?;
    ctx.emit(&report, || report_text(&net, &report))?;
    Ok(true)
}
