mod input;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use surfarith_core::bend::{bend, invariant_form_solver, make_bending_element, zariski_classify, Eigenbasis};
use surfarith_core::cocycle::{compatible_cocycle, hilbert90_solve, Compat};
use surfarith_core::forms::{equiv_quadratic, fuchsian_admissibility, invariants, jnab};
use surfarith_core::json::{matrix_to_json, FixtureFile, FormFile, InvariantsJson};
use surfarith_core::redux::separation_experiment;

use input::{parse_base_elem, parse_field, parse_multipliers, parse_primes, required, Inputs};
use report::Report;
use suites::Suite;

#[derive(Parser)]
#[command(name = "surfarith", version, about = "Exact checks for symmetric-power representations, forms, cocycles and bending")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Seed for every random choice in the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run an invariant battery.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// Quadratic form queries.
    Forms {
        #[command(subcommand)]
        action: FormsCmd,
    },
    /// Galois cocycles.
    Cocycle {
        #[command(subcommand)]
        action: CocycleCmd,
    },
    /// Bending of a surface-group representation.
    Bend {
        #[command(subcommand)]
        action: BendCmd,
    },
    /// Mod-p trace sets of the bent representations.
    Separate {
        #[arg(long)]
        fixture: Option<PathBuf>,
        /// Comma-separated rationals; defaults to the fixture's multipliers.
        #[arg(long)]
        multipliers: Option<String>,
        #[arg(long, default_value = "3,5,7")]
        primes: String,
        #[arg(long, default_value_t = 4)]
        max_power: u32,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
}

#[derive(Subcommand)]
enum FormsCmd {
    Invariants {
        #[arg(long)]
        form: Option<PathBuf>,
    },
    Equiv {
        #[arg(long)]
        lhs: Option<PathBuf>,
        #[arg(long)]
        rhs: Option<PathBuf>,
    },
    /// The diagonal form J_n^{a,b}.
    Jnab {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        n: usize,
        /// `u` or `u,v` for u + v√m.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    Admissible {
        #[arg(long)]
        form: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CocycleCmd {
    /// Split a τ_n-compatible cocycle by Hilbert 90.
    Solve {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Use the outer cocycle over F(√d).
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
    },
}

#[derive(Subcommand)]
enum BendCmd {
    Run {
        #[arg(long)]
        fixture: Option<PathBuf>,
        /// Comma-separated rationals; defaults to the fixture's multipliers.
        #[arg(long)]
        multipliers: Option<String>,
        #[arg(long)]
        no_classify: bool,
    },
}

fn load_fixture(inputs: &mut Inputs, path: &Option<PathBuf>, mult: &Option<String>) -> Result<(surfarith_core::bend::SurfaceRep, Vec<surfarith_core::numfield::FieldElem>)> {
    let file: FixtureFile = inputs.read_json(&required(path, "--fixture")?)?;
    let rep = file.build()?;
    let mu = match mult {
        Some(s) => parse_multipliers(&rep.field, s)?,
        None => file.multipliers(&rep.field)?.ok_or_else(|| surfarith_core::Error::Parse("no multipliers given".into()))?,
    };
    Ok((rep, mu))
}

fn run(cli: Cli) -> Result<bool> {
    let seed = cli.common.seed;
    let mut inputs = Inputs::default();
    let (command, pass, result): (String, bool, Value) = match cli.command {
        Command::Verify { suite } => {
            let items = suites::run(suite, seed)?;
            let pass = items.iter().all(|i| i.pass);
            let failed: Vec<&str> = items.iter().filter(|i| !i.pass).map(|i| i.key.as_str()).collect();
            (format!("verify {}", suite.name()), pass, json!({ "suite": suite.name(), "items": items, "failed": failed }))
        }
        Command::Forms { action } => match action {
            FormsCmd::Invariants { form } => {
                let q = inputs.read_json::<FormFile>(&required(&form, "--form")?)?.build()?;
                let inv = invariants(&q)?;
                ("forms invariants".into(), true, json!({ "invariants": InvariantsJson::of(&inv), "disc_class": inv.disc_class() }))
            }
            FormsCmd::Equiv { lhs, rhs } => {
                let q1 = inputs.read_json::<FormFile>(&required(&lhs, "--lhs")?)?.build()?;
                let q2 = inputs.read_json::<FormFile>(&required(&rhs, "--rhs")?)?.build()?;
                ("forms equiv".into(), true, json!({ "equivalent": equiv_quadratic(&q1, &q2)? }))
            }
            FormsCmd::Jnab { field, n, a, b } => {
                let f = parse_field(&field)?;
                let q = jnab(f, n, &parse_base_elem(f, &a)?, &parse_base_elem(f, &b)?)?;
                let inv = invariants(&q)?;
                ("forms jnab".into(), true, json!({ "form": FormFile::of(&q), "invariants": InvariantsJson::of(&inv) }))
            }
            FormsCmd::Admissible { form } => {
                let q = inputs.read_json::<FormFile>(&required(&form, "--form")?)?.build()?;
                let adm = fuchsian_admissibility(&q)?;
                let target = adm.target().map(|t| t.iter().map(|p| p.to_string()).collect::<Vec<_>>());
                ("forms admissible".into(), true, json!({ "admissibility": adm, "target": target }))
            }
        },
        Command::Cocycle { action: CocycleCmd::Solve { field, n, a, b, d } } => {
            let f = parse_field(&field)?;
            let (a, b) = (parse_base_elem(f, &a)?, parse_base_elem(f, &b)?);
            let d = d.map(|d| parse_base_elem(f, &d)).transpose()?;
            let kind = if d.is_some() { Compat::Outer } else { Compat::Inner };
            let z = compatible_cocycle(f, &a, &b, n, kind, d.as_ref())?;
            let sol = hilbert90_solve(&z, seed)?;
            let ok = z.is_coboundary_of(&sol.s)?;
            ("cocycle solve".into(), ok, json!({ "n": n, "outer": d.is_some(), "s": matrix_to_json(&sol.s), "attempts": sol.attempts, "verified": ok }))
        }
        Command::Bend { action: BendCmd::Run { fixture, multipliers, no_classify } } => {
            let (rep, mu) = load_fixture(&mut inputs, &fixture, &multipliers)?;
            let datum = make_bending_element(&rep, &mu)?;
            let bent = bend(&rep, &datum)?;
            let curve_fixed = bent.gamma() == rep.gamma();
            let mut result = json!({ "curve_image_fixed": curve_fixed, "unchanged": bent == rep, "bent": FixtureFile::of(&bent, Some(&mu)) });
            let mut pass = curve_fixed;
            if !no_classify && matches!(datum.basis, Eigenbasis::Tau(_)) {
                let verdict = zariski_classify(&bent, &datum)?;
                let oracle = invariant_form_solver(&bent.images);
                let consistent = oracle.consistent_with(verdict, bent.n);
                pass &= consistent;
                result["verdict"] = json!(verdict);
                result["invariant_forms"] = json!(oracle);
                result["oracle_consistent"] = json!(consistent);
            }
            ("bend run".into(), pass, result)
        }
        Command::Separate { fixture, multipliers, primes, max_power, budget } => {
            let (rep, mu) = load_fixture(&mut inputs, &fixture, &multipliers)?;
            let primes = parse_primes(&primes)?;
            let datum = make_bending_element(&rep, &mu)?;
            let report = separation_experiment(&rep, &datum, &primes, max_power, budget, seed)?;
            let pass = report.collapse_failures().is_empty();
            let separating = report.separating_rows().len();
            ("separate".into(), pass, json!({ "report": report, "separating_rows": separating }))
        }
    };
    Report::new(command, seed, inputs.digest(), pass, result).emit(cli.common.out.as_deref()).context("emitting report")?;
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let unsupported = e.chain().any(|c| c.downcast_ref::<surfarith_core::Error>().is_some_and(|x| x.is_unsupported()));
            ExitCode::from(if unsupported { 3 } else { 2 })
        }
    }
}
