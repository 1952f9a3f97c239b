//! seifcalc: surgery arithmetic for small Seifert fibred spaces.
//!
//! Exit codes are a contract for shell pipelines:
//!   0  success / verdict "not obstructed"
//!   10 verdict "obstructed"
//!   2  usage, parse or validity error
//!   3  linking equations unsolvable for the requested data

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use seifcalc_core::{
    ball_case_possible, cable_case_possible, contains_klein_bottle, drill,
    integral_surgery_obstruction, lens_d_invariants, prop4_family_check, run_census,
    obstruction_check, torus_case_possible, twist, twist_ordinary, DVector, Error, Int, SearchConfig,
    SeifertForm, Sign, TorqueFilter,
};

const EXIT_OBSTRUCTED: u8 = 10;
const EXIT_USAGE: u8 = 2;
const EXIT_UNSOLVABLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "seifcalc",
    version,
    about = "Surgery arithmetic for small Seifert fibred spaces over S^2",
    after_help = "Form text grammar: '(p,x)' repeated 3-4 times, optional whitespace, \
                  e.g. \"(5,-2)(3,-1)(4,3)\". Exit codes: 0 ok/not obstructed, \
                  10 obstructed, 2 usage error, 3 unsolvable linking data."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the seiferter obstruction for a space
    Check {
        /// Form text, e.g. "(3,-17)(5,17)(7,17)"
        form: String,
        /// Shorthand for --format json
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value = "human", conflicts_with = "json")]
        format: Format,
    },
    /// Drill an exceptional fibre: a knot in a lens space with a surgery
    /// giving the connected sum of the other two fibres
    Drill {
        form: String,
        /// 1-based index of the drilled exceptional fibre
        #[arg(long)]
        fibre: usize,
        /// Linking number of the seiferter with the knot
        #[arg(long)]
        linking: String,
        /// Sign of the surgery slope: + or -
        #[arg(long, allow_hyphen_values = true)]
        sign: String,
        #[arg(long)]
        json: bool,
    },
    /// Twist along a seiferter (exceptional fibre with --fibre/--q, or an
    /// ordinary fibre with --ordinary/--n)
    Twist {
        form: String,
        #[arg(long, requires = "q", conflicts_with = "ordinary")]
        fibre: Option<usize>,
        /// Inverse of the fibre torque modulo its multiplicity
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, requires = "n")]
        ordinary: bool,
        /// Slope parameter of the ordinary fibres around the seiferter
        #[arg(long, allow_hyphen_values = true)]
        n: Option<String>,
        /// Number of twists (sign = direction)
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate canonical spaces and run the obstruction census
    Search {
        /// Bound on every multiplicity of the canonical form
        #[arg(long = "max-p")]
        max_p: u32,
        /// Skip spaces with |H| above this bound
        #[arg(long = "max-h")]
        max_h: Option<u64>,
        /// Skip spaces with |e0| above this bound
        #[arg(long = "max-e0")]
        max_e0: Option<u64>,
        /// Torque profile filter: any, no-pm1, at-most-one-pm1
        #[arg(long, default_value = "any")]
        filter: String,
        /// Keep spaces with non-cyclic first homology too
        #[arg(long)]
        include_noncyclic: bool,
        /// Count each mirror pair once
        #[arg(long)]
        merge_mirrors: bool,
        /// Worker threads (SEIFCALC_WORKERS overrides)
        #[arg(long)]
        workers: Option<usize>,
        /// Write PREFIX.summary.json and PREFIX.records.jsonl
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Lens space d-invariants, or the even-difference surgery test
    Dinv {
        p: Option<String>,
        q: Option<String>,
        /// Comma-separated multiset of exact fractions to test
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["p", "q"], requires = "n")]
        test: Option<String>,
        /// Surgery coefficient for --test
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce the obstructed family S^2((p,-17),(2p-1,17),(2p+1,17))
    /// for p = 3 (mod 17)
    Prop4 {
        #[arg(required = true)]
        p_values: Vec<String>,
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnsolvableLinking => EXIT_UNSOLVABLE,
            Error::Io(_) => 1,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn parse_int(text: &str, what: &str) -> Result<Int, Failure> {
    Int::from_str(text.trim()).map_err(|_| usage(format!("{what}: not an integer: {text:?}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Check { form, json, format } => {
            let format = if json { Format::Json } else { format };
            cmd_check(&form, format)
        }
        Command::Drill {
            form,
            fibre,
            linking,
            sign,
            json,
        } => cmd_drill(&form, fibre, &linking, &sign, json),
        Command::Twist {
            form,
            fibre,
            q,
            ordinary,
            n,
            t,
            json,
        } => cmd_twist(&form, fibre, q.as_deref(), ordinary, n.as_deref(), &t, json),
        Command::Search {
            max_p,
            max_h,
            max_e0,
            filter,
            include_noncyclic,
            merge_mirrors,
            workers,
            out,
            json,
        } => cmd_search(
            max_p,
            max_h,
            max_e0,
            &filter,
            include_noncyclic,
            merge_mirrors,
            workers,
            out,
            json,
        ),
        Command::Dinv {
            p,
            q,
            test,
            n,
            json,
        } => cmd_dinv(p, q, test, n, json),
        Command::Prop4 { p_values, json } => cmd_prop4(&p_values, json),
    }
}

fn cmd_check(form_text: &str, format: Format) -> Result<u8, Failure> {
    let form: SeifertForm = form_text.parse()?;
    let report = obstruction_check(&form)?;
    let factors = form.h1_invariant_factors();
    let factors_joined = |sep: &str| {
        factors
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(sep)
    };

    match format {
        Format::Json => println!("{}", serde_json::to_string(&report).unwrap()),
        Format::Csv => {
            println!("form,canonical,h,h1_factors,torque_profile,obstructed");
            println!(
                "\"{}\",\"{}\",{},\"{}\",{},{}",
                report.form,
                report.canonical,
                report.h,
                factors_joined(";"),
                form.torque_profile(),
                report.obstructed
            );
        }
        Format::Human => {
            println!("form:        {}", report.form);
            println!("canonical:   {}", report.canonical);
            println!("H:           {}", report.h);
            if factors.is_empty() {
                println!("H1:          trivial");
            } else {
                println!("H1 factors:  [{}]", factors_joined(", "));
            }
            println!(
                "torque +-1:  {} of {} fibres",
                form.torque_profile(),
                form.fibre_count()
            );
            let mut line = String::new();
            for c in &report.candidates {
                let hit = report.residue_hits.contains(c);
                let _ = write!(
                    line,
                    "  [{}]{}{}{}",
                    c.label,
                    c.sign,
                    c.value,
                    if hit { "*" } else { "" }
                );
            }
            println!("candidates:{line}   (* = residue hit)");
            println!(
                "verdict:     {}",
                if report.obstructed {
                    "OBSTRUCTED (not obtainable by a surgery with a seiferter)"
                } else {
                    "not obstructed"
                }
            );
        }
    }
    Ok(if report.obstructed {
        EXIT_OBSTRUCTED
    } else {
        0
    })
}

fn cmd_drill(
    form_text: &str,
    fibre: usize,
    linking: &str,
    sign: &str,
    json: bool,
) -> Result<u8, Failure> {
    let form: SeifertForm = form_text.parse()?;
    let l = parse_int(linking, "--linking")?;
    let sign = Sign::from_str(sign)?;
    let result = drill(&form, fibre, &l, sign)?;

    let ambient = result.ambient.reduced();
    let s0 = result.summands.0.reduced();
    let s1 = result.summands.1.reduced();
    let n = ambient.multiplicity();

    let ball = ball_case_possible(
        &result.ambient,
        &[result.summands.0.clone(), result.summands.1.clone()],
    );
    let klein = contains_klein_bottle(&result.ambient);
    let torus = torus_case_possible(&n, &result.summands.0, &result.summands.1).ok();
    let cable = cable_case_possible(
        &n,
        &result.summands.0.multiplicity(),
        &result.summands.1.multiplicity(),
    )
    .ok();
    let opt = |v: Option<bool>| v.map_or("n/a".to_string(), |b| b.to_string());

    if json {
        let doc = serde_json::json!({
            "source": result.source.to_string(),
            "fibre": result.fibre_index,
            "linking": result.linking.to_string(),
            "ambient": ambient.to_string(),
            "summands": [s0.to_string(), s1.to_string()],
            "cases": {
                "ball": ball,
                "klein": klein,
                "torus": torus,
                "cable": cable,
            },
        });
        println!("{doc}");
    } else {
        println!(
            "ambient {}; summands {} # {}; klein:{} torus:{} cable:{} ball:{}",
            ambient,
            s0,
            s1,
            klein,
            opt(torus),
            opt(cable),
            ball
        );
    }
    Ok(0)
}

fn cmd_twist(
    form_text: &str,
    fibre: Option<usize>,
    q: Option<&str>,
    ordinary: bool,
    n: Option<&str>,
    t: &str,
    json: bool,
) -> Result<u8, Failure> {
    let form: SeifertForm = form_text.parse()?;
    let t = parse_int(t, "--t")?;
    let twisted = match (fibre, ordinary) {
        (Some(i), false) => {
            let q = parse_int(q.ok_or_else(|| usage("--fibre needs --q"))?, "--q")?;
            twist(&form, i, &q, &t)?
        }
        (None, true) => {
            let n = parse_int(n.ok_or_else(|| usage("--ordinary needs --n"))?, "--n")?;
            twist_ordinary(&form, &n, &t)?
        }
        _ => {
            return Err(usage(
                "choose exactly one of --fibre <i> --q <q> or --ordinary --n <n>",
            ))
        }
    };
    let h = twisted.h_invariant();
    if json {
        println!(
            "{}",
            serde_json::json!({ "form": twisted.to_string(), "h": h.to_string() })
        );
    } else {
        println!("{twisted}");
        println!("H = {h}");
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    max_p: u32,
    max_h: Option<u64>,
    max_e0: Option<u64>,
    filter: &str,
    include_noncyclic: bool,
    merge_mirrors: bool,
    workers: Option<usize>,
    out: Option<PathBuf>,
    json: bool,
) -> Result<u8, Failure> {
    let worker_count = match std::env::var("SEIFCALC_WORKERS") {
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("SEIFCALC_WORKERS: not a worker count: {text:?}")))?,
        Err(_) => {
            workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |c| c.get()))
        }
    };
    let config = SearchConfig {
        max_multiplicity: max_p,
        max_abs_h: max_h,
        max_abs_e0: max_e0,
        torque_filter: TorqueFilter::from_str(filter)?,
        require_cyclic: !include_noncyclic,
        merge_mirrors,
        worker_count,
    };
    let census = run_census(&config)?;

    if let Some(prefix) = &out {
        let base = prefix.as_os_str().to_string_lossy();
        let summary_path = PathBuf::from(format!("{base}.summary.json"));
        let records_path = PathBuf::from(format!("{base}.records.jsonl"));
        let summary = std::fs::File::create(&summary_path).map_err(Error::from)?;
        census.write_summary(summary)?;
        let records = std::fs::File::create(&records_path).map_err(Error::from)?;
        census.write_records(records)?;
        if !json {
            println!(
                "wrote {} and {}",
                summary_path.display(),
                records_path.display()
            );
        }
    }

    if json {
        println!("{}", census.summary_json());
    } else {
        println!(
            "examined {} spaces, {} obstructed ({} ms, {} workers)",
            census.total_examined,
            census.total_obstructed,
            census.wall_time.as_millis(),
            config.worker_count
        );
    }
    Ok(0)
}

fn cmd_dinv(
    p: Option<String>,
    q: Option<String>,
    test: Option<String>,
    n: Option<String>,
    json: bool,
) -> Result<u8, Failure> {
    if let Some(multiset) = test {
        let d: DVector = multiset.parse()?;
        let n = parse_int(&n.ok_or_else(|| usage("--test needs --n"))?, "--n")?;
        let obstructed = integral_surgery_obstruction(&d, &n)?;
        if json {
            println!(
                "{}",
                serde_json::json!({ "n": n.to_string(), "obstructed": obstructed })
            );
        } else if obstructed {
            println!("obstructed: no even-difference matching with L({n},1) or L({n},-1)");
        } else {
            println!("not obstructed: even-difference matching with L({n},+-1) exists");
        }
        return Ok(if obstructed { EXIT_OBSTRUCTED } else { 0 });
    }

    let (p, q) = match (p, q) {
        (Some(p), Some(q)) => (parse_int(&p, "p")?, parse_int(&q, "q")?),
        _ => {
            return Err(usage(
                "expected `dinv <p> <q>` or `dinv --test <multiset> --n <n>`",
            ))
        }
    };
    let d = lens_d_invariants(&p, &q)?;
    if json {
        let values: Vec<String> = d.values().iter().map(|v| v.to_string()).collect();
        println!(
            "{}",
            serde_json::json!({ "p": p.to_string(), "q": q.to_string(), "d": values })
        );
    } else {
        println!("{d}");
    }
    Ok(0)
}

fn cmd_prop4(p_values: &[String], json: bool) -> Result<u8, Failure> {
    let ps = p_values
        .iter()
        .map(|text| parse_int(text, "p"))
        .collect::<Result<Vec<_>, _>>()?;
    let reports = prop4_family_check(&ps)?;
    let all_hold = reports.iter().all(|r| r.holds);
    if json {
        let docs: Vec<serde_json::Value> = reports
            .iter()
            .map(|r| {
                serde_json::json!({
                    "p": r.p.to_string(),
                    "residues": r.residues.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "h": r.h.to_string(),
                    "obstructed": r.obstructed,
                    "holds": r.holds,
                })
            })
            .collect();
        println!("{}", serde_json::Value::Array(docs));
    } else {
        for r in &reports {
            println!(
                "p={}: residues ({}, {}, {}, {}) = (6, -6, 7, 3) mod 17; H={}; obstructed={}; {}",
                r.p,
                r.residues[0],
                r.residues[1],
                r.residues[2],
                r.residues[3],
                r.h,
                r.obstructed,
                if r.holds { "ok" } else { "MISMATCH" }
            );
        }
    }
    Ok(if all_hold { 0 } else { 1 })
}
