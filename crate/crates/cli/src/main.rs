use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dlal_core::constraints::split;
use dlal_core::corpus::{
    church_nat, church_word, exp_term, monomial_term, monomial_term_plain, parse_bits, poly_term, pred_applied,
    pred_term, rev_applied, rev_term, Polynomial,
};
use dlal_core::datatypes::{DomainSpec, Sort};
use dlal_core::dot::export_dot;
use dlal_core::fsyntax::{parse_term, print_term, FTerm};
use dlal_core::par::{map_items, Strategy};
use dlal_core::param::{dump_pterm, instantiate_term, parse_instantiation, parse_pterm_dump, write_instantiation};
use dlal_core::pipeline::{build, infer, InferOptions, InferenceReport, Verdict};
use dlal_core::pseudo::parse_pseudo;
use dlal_core::solver::{parse_solution, write_lp, RationalSource};
use dlal_core::verify::check_well_structured;

const EXIT_OK: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_ERR: u8 = 2;

#[derive(Parser)]
#[command(name = "dlal", version, about = "Type inference for Dual Light Affine Logic")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Infer a DLAL type for each input term.
    Infer(InferArgs),
    /// Check a pseudo-term, or a decorated term together with an instantiation.
    Check {
        file: PathBuf,
        /// Instantiation file; when given, FILE is a decorated-term dump.
        instantiation: Option<PathBuf>,
    },
    /// Print the constraint system of a term.
    Constraints {
        file: PathBuf,
        #[command(flatten)]
        opts: SolveFlags,
        /// Group the constraints into boolean, linear and mixed sections.
        #[arg(long)]
        split: bool,
    },
    /// Print a term of the built-in corpus.
    Corpus {
        #[command(subcommand)]
        which: CorpusCmd,
    },
    /// Render the inferred pseudo-term as a Graphviz graph.
    Dot {
        file: PathBuf,
        #[command(flatten)]
        opts: SolveFlags,
    },
}

#[derive(Args, Clone)]
struct SolveFlags {
    /// Domain specification, e.g. `n:N,l:W`.
    #[arg(long)]
    domain: Option<String>,
    /// Constrain the type of the whole term to be an integer or word type.
    #[arg(long, value_name = "N|W")]
    result: Option<String>,
    /// Pin the non-standard exponents of domain types to zero.
    #[arg(long = "strict-nat")]
    strict: bool,
    /// Run the generators and the checker on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct InferArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[command(flatten)]
    opts: SolveFlags,
    /// Include phase timings in the report.
    #[arg(long)]
    stats: bool,
    /// Print one JSON object per input.
    #[arg(long)]
    json: bool,
    /// Also report the type of the subterm at this path (e.g. `0.1`).
    #[arg(long, value_name = "PATH")]
    at: Vec<String>,
    /// Write the linear program left after the boolean phase.
    #[arg(long, value_name = "FILE")]
    lp_out: Option<PathBuf>,
    /// Read the rational solution from an external solver instead of running the simplex.
    #[arg(long, value_name = "FILE")]
    lp_in: Option<PathBuf>,
    /// Write the decorated term, for `check`.
    #[arg(long, value_name = "FILE")]
    pterm_out: Option<PathBuf>,
    /// Write the witness instantiation, for `check`.
    #[arg(long, value_name = "FILE")]
    witness_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Church integer.
    Nat {
        k: usize,
    },
    /// Church word, first bit outermost.
    Word {
        bits: String,
    },
    /// Word reversal, applied to a word when one is given.
    Rev {
        bits: Option<String>,
    },
    /// Predecessor, applied to an integer when one is given.
    Pred {
        k: Option<usize>,
    },
    Exp,
    /// Polynomial such as `3X^2+1`.
    Poly {
        poly: String,
    },
    /// Monomial X^e, optionally without coercions.
    Monomial {
        e: u32,
        #[arg(long)]
        plain: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Command::Infer(args) => cmd_infer(&args),
        Command::Check { file, instantiation } => cmd_check(&file, instantiation.as_deref()),
        Command::Constraints { file, opts, split } => cmd_constraints(&file, &opts, split),
        Command::Corpus { which } => cmd_corpus(which),
        Command::Dot { file, opts } => cmd_dot(&file, &opts),
    };
    ExitCode::from(code)
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_term(path: &Path) -> Result<FTerm, String> {
    let text = read(path)?;
    parse_term(&text).map_err(|e| format!("{}: parse error: {e}", path.display()))
}

fn options(flags: &SolveFlags) -> Result<InferOptions, String> {
    let domain: DomainSpec = match &flags.domain {
        Some(d) => d.parse().map_err(|e| format!("{e}"))?,
        None => DomainSpec::default(),
    };
    let result = match &flags.result {
        Some(r) => Some(r.parse::<Sort>().map_err(|e| format!("{e}"))?),
        None => None,
    };
    let strategy = if flags.sequential { Strategy::Sequential } else { Strategy::Parallel };
    Ok(InferOptions { domain, result, strict: flags.strict, strategy, rational: RationalSource::Simplex })
}

fn parse_path(s: &str) -> Result<Vec<u8>, String> {
    if s.is_empty() || s == "root" {
        return Ok(Vec::new());
    }
    s.split('.').map(|p| p.parse::<u8>().map_err(|_| format!("bad subterm path `{s}`"))).collect()
}

struct Job {
    report: InferenceReport,
    diagnostics: Vec<String>,
}

fn run_one(path: &Path, args: &InferArgs, opts: &InferOptions) -> Job {
    let mut diagnostics = Vec::new();
    let term = match load_term(path) {
        Ok(t) => t,
        Err(e) => {
            return Job { report: InferenceReport::error(e.clone()), diagnostics: vec![e] };
        }
    };
    let report = infer(&term, opts);
    if let Some(d) = &report.diagnostic {
        diagnostics.push(format!("{}: {d}", path.display()));
    }
    let mut write = |file: &Option<PathBuf>, text: Option<String>| {
        if let (Some(f), Some(t)) = (file, text) {
            if let Err(e) = fs::write(f, t) {
                diagnostics.push(format!("{}: {e}", f.display()));
            }
        }
    };
    write(&args.lp_out, report.linear.as_ref().map(write_lp));
    write(&args.pterm_out, report.decorated.as_ref().map(dump_pterm));
    write(&args.witness_out, report.witness.as_ref().map(write_instantiation));
    Job { report, diagnostics }
}

fn cmd_infer(args: &InferArgs) -> u8 {
    let mut opts = match options(&args.opts) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_ERR;
        }
    };
    if let Some(f) = &args.lp_in {
        match read(f).and_then(|t| parse_solution(&t).map_err(|e| format!("{}: {e}", f.display()))) {
            Ok(values) => opts.rational = RationalSource::Supplied(values),
            Err(e) => {
                eprintln!("{e}");
                return EXIT_ERR;
            }
        }
    }
    let paths: Vec<Vec<u8>> = match args.at.iter().map(|s| parse_path(s)).collect() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_ERR;
        }
    };
    let jobs = map_items(&args.files, opts.strategy, |f| run_one(f, args, &opts));
    let many = args.files.len() > 1;
    let mut worst = EXIT_OK;
    for (file, job) in args.files.iter().zip(jobs) {
        for d in &job.diagnostics {
            eprintln!("{d}");
        }
        let mut record = job.report.record(args.stats);
        for (s, p) in args.at.iter().zip(&paths) {
            let ty = job.report.type_at(p).map(|t| t.to_string()).unwrap_or_else(|| "-".to_string());
            record.push((format!("at.{s}"), ty));
        }
        if args.json {
            let mut obj = serde_json::Map::new();
            obj.insert("file".into(), file.display().to_string().into());
            for (k, v) in record {
                obj.insert(k, v.into());
            }
            println!("{}", serde_json::Value::Object(obj));
        } else {
            if many {
                println!("== {}", file.display());
            }
            for (k, v) in record {
                println!("{k}: {v}");
            }
        }
        worst = worst.max(job.report.verdict.exit_code() as u8);
    }
    worst
}

fn cmd_check(file: &Path, inst: Option<&Path>) -> u8 {
    let pseudo = match inst {
        Some(inst) => {
            let loaded = read(file).and_then(|t| parse_pterm_dump(&t).map_err(|e| format!("{}: {e}", file.display())));
            let phi = read(inst).and_then(|t| parse_instantiation(&t).map_err(|e| format!("{}: {e}", inst.display())));
            match (loaded, phi) {
                (Ok(d), Ok(phi)) => match instantiate_term(&phi, &d.term) {
                    Ok(p) => p,
                    Err(e) => {
                        eprintln!("{e}");
                        return EXIT_ERR;
                    }
                },
                (Err(e), _) | (_, Err(e)) => {
                    eprintln!("{e}");
                    return EXIT_ERR;
                }
            }
        }
        None => match read(file).and_then(|t| parse_pseudo(&t).map_err(|e| format!("{}: {e}", file.display()))) {
            Ok(p) => p.term,
            Err(e) => {
                eprintln!("{e}");
                return EXIT_ERR;
            }
        },
    };
    let report = check_well_structured(&pseudo);
    print!("{report}");
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_NO
    }
}

fn cmd_constraints(file: &Path, flags: &SolveFlags, split_out: bool) -> u8 {
    let built = options(flags).and_then(|o| load_term(file).and_then(|t| build(&t, &o)));
    let built = match built {
        Ok(b) => b,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_ERR;
        }
    };
    if split_out {
        let (b, l, m) = split(&built.constraints);
        for (name, set) in [("boolean", b), ("linear", l), ("mixed", m)] {
            println!("# {name} ({})", set.len());
            print!("{}", set.dump());
        }
    } else {
        print!("{}", built.constraints.dump());
    }
    EXIT_OK
}

fn cmd_corpus(which: CorpusCmd) -> u8 {
    let term = match which {
        CorpusCmd::Nat { k } => church_nat(k),
        CorpusCmd::Word { bits } => match parse_bits(&bits) {
            Some(b) => church_word(&b),
            None => {
                eprintln!("`{bits}` is not a word over 0 and 1");
                return EXIT_ERR;
            }
        },
        CorpusCmd::Rev { bits: None } => rev_term(),
        CorpusCmd::Rev { bits: Some(bits) } => match parse_bits(&bits) {
            Some(b) => rev_applied(&b),
            None => {
                eprintln!("`{bits}` is not a word over 0 and 1");
                return EXIT_ERR;
            }
        },
        CorpusCmd::Pred { k: None } => pred_term(),
        CorpusCmd::Pred { k: Some(k) } => pred_applied(k),
        CorpusCmd::Exp => exp_term(),
        CorpusCmd::Poly { poly } => match poly.parse::<Polynomial>() {
            Ok(p) => poly_term(&p),
            Err(e) => {
                eprintln!("{e}");
                return EXIT_ERR;
            }
        },
        CorpusCmd::Monomial { e, plain } => {
            if plain {
                monomial_term_plain(e)
            } else {
                monomial_term(e)
            }
        }
    };
    println!("{}", print_term(&term));
    EXIT_OK
}

fn cmd_dot(file: &Path, flags: &SolveFlags) -> u8 {
    let report = match options(flags).and_then(|o| load_term(file).map(|t| infer(&t, &o))) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_ERR;
        }
    };
    match (&report.verdict, &report.pseudo) {
        (Verdict::Typable, Some(p)) => {
            print!("{}", export_dot(p));
            EXIT_OK
        }
        _ => {
            if let Some(d) = &report.diagnostic {
                eprintln!("{}: {d}", file.display());
            }
            report.verdict.exit_code() as u8
        }
    }
}
