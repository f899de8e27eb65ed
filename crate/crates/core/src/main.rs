use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gsi_core::duality::SemigroupContext;
use gsi_core::gsi_format::parse_gsi_structural;
use gsi_core::theorems;
use gsi_core::{
    canonical_ideal, cd_difference, emit_gsi, fiber_dual, maximals, node, numerical, parse_gsi,
    product, random_good, validate, GsiError, RandomBounds, SmallRep,
};

#[derive(Parser)]
#[command(name = "gsi", version, about = "Good semigroup ideals: validation, duals, canonical ideals and duality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of an ideal file.
    Validate {
        file: PathBuf,
        /// Also check that the semigroup in this file acts on the ideal.
        #[arg(long)]
        semigroup: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print minimum, conductor, Frobenius vector and maximal points.
    Info {
        file: PathBuf,
        /// Draw the small elements (dimension 1 or 2 only).
        #[arg(long)]
        plot: bool,
    },
    /// Canonical ideal of a good semigroup.
    Canonical {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The dual `J − I`.
    Dual {
        j: PathBuf,
        i: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Method::Cd)]
        method: Method,
    },
    /// Is J a canonical ideal of the semigroup S?
    IsCanonical { j: PathBuf, s: PathBuf },
    /// Is S equal to its canonical ideal?
    Gorenstein { s: PathBuf },
    /// Run a duality check on the pair (J, I).
    Check {
        #[arg(value_enum)]
        name: CheckName,
        j: PathBuf,
        i: PathBuf,
        #[arg(long)]
        semigroup: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate an ideal file.
    Gen {
        #[command(subcommand)]
        what: Generator,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Cd,
    Fiber,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckName {
    Sum,
    Fibra,
    Duality,
    Length,
    Rho,
    Maxsym,
    All,
}

#[derive(Subcommand)]
enum Generator {
    /// Numerical semigroup from generators.
    Numerical {
        #[arg(required = true, num_args = 1..)]
        generators: Vec<i64>,
    },
    /// `{0} ∪ (e + N^r)`.
    Node { r: usize },
    /// Cartesian product of two ideals.
    Product { a: PathBuf, b: PathBuf },
    /// Seeded random ideal over a good semigroup.
    Random {
        #[arg(long)]
        semigroup: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = RandomBounds::default().max_span)]
        max_span: i64,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input { path: String, source: GsiError },
    #[error(transparent)]
    Gsi(#[from] GsiError),
    #[error("{0}")]
    Usage(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load(path: &Path) -> Result<SmallRep, CliError> {
    parse_gsi(&read(path)?).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

fn write_out(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn exit(passed: bool) -> u8 {
    if passed {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Validate {
            file,
            semigroup,
            json,
        } => {
            let (rep, _) = parse_gsi_structural(&read(&file)?).map_err(|source| CliError::Input {
                path: file.display().to_string(),
                source,
            })?;
            let s = semigroup.as_deref().map(load).transpose()?;
            let report = validate(&rep, s.as_ref());
            if json {
                print_json(&report);
            } else {
                print!("{report}");
            }
            Ok(exit(report.passed))
        }
        Command::Info { file, plot } => {
            let e = load(&file)?;
            info(&e, plot)?;
            Ok(0)
        }
        Command::Canonical { file, output } => {
            let k = canonical_ideal(&load(&file)?)?;
            write_out(output.as_deref(), &emit_gsi(&k))?;
            Ok(0)
        }
        Command::Dual {
            j,
            i,
            output,
            method,
        } => {
            let (ej, ei) = (load(&j)?, load(&i)?);
            let result = match method {
                Method::Cd => cd_difference(&ej, &ei),
                Method::Fiber => {
                    let f = fiber_dual(&ej, &ei)?;
                    f.ideal.ok_or_else(|| {
                        GsiError::NotRepresentable(f.promotion_error.unwrap_or_default())
                    })
                }
            };
            match result {
                Ok(d) => {
                    write_out(output.as_deref(), &emit_gsi(&d))?;
                    Ok(0)
                }
                Err(err @ (GsiError::NotRepresentable(_) | GsiError::Axiom(_))) => {
                    eprintln!("dual is not a good ideal: {err}");
                    Ok(1)
                }
                Err(err) => Err(err.into()),
            }
        }
        Command::IsCanonical { j, s } => {
            let ctx = SemigroupContext::new(&load(&s)?)?;
            let canonical = ctx.is_canonical(&load(&j)?)?;
            println!("canonical: {canonical}");
            Ok(exit(canonical))
        }
        Command::Gorenstein { s } => {
            let ctx = SemigroupContext::new(&load(&s)?)?;
            let gorenstein = ctx.is_gorenstein()?;
            println!("gorenstein: {gorenstein}");
            if let Some(p) = ctx.canonical.region().first_excess(ctx.semigroup.region())? {
                println!("witness: {p} is in the canonical ideal but not in the semigroup");
            }
            Ok(exit(gorenstein))
        }
        Command::Check {
            name,
            j,
            i,
            semigroup,
            json,
            seed,
        } => {
            let (ej, ei) = (load(&j)?, load(&i)?);
            let s = semigroup.as_deref().map(load).transpose()?;
            let ctx = s.as_ref().map(SemigroupContext::new).transpose()?;
            let ctx = ctx.as_ref();
            let report = match name {
                CheckName::Sum => theorems::check_sum(&ej, &ei)?,
                CheckName::Fibra => theorems::check_fibra(&ej, &ei)?,
                CheckName::Duality => theorems::check_duality(&ej, &ei, ctx)?,
                CheckName::Length => match ctx {
                    Some(ctx) => theorems::check_length_pairing_in(&ej, &ei, ctx)?,
                    None => theorems::check_length_pairing(&ej, &ei)?,
                },
                CheckName::Rho => theorems::check_rho(&ei, &ej, ctx)?,
                CheckName::Maxsym => theorems::check_maximal_symmetry(&ei, &ej, ctx)?,
                CheckName::All => {
                    let s = s.ok_or_else(|| {
                        CliError::Usage("`check all` needs --semigroup".into())
                    })?;
                    let mut bundle = theorems::check_all(&s, &ej, &ei, seed)?;
                    for r in &mut bundle.reports {
                        r.universe.seed.get_or_insert(seed);
                    }
                    if json {
                        print_json(&bundle);
                    } else {
                        print!("{bundle}");
                    }
                    return Ok(exit(bundle.passed));
                }
            };
            if json {
                print_json(&report);
            } else {
                print!("{report}");
            }
            Ok(exit(report.passed))
        }
        Command::Gen { what, output } => {
            let e = match what {
                Generator::Numerical { generators } => numerical(&generators)?,
                Generator::Node { r } => node(r)?,
                Generator::Product { a, b } => product(&load(&a)?, &load(&b)?)?,
                Generator::Random {
                    semigroup,
                    seed,
                    max_span,
                } => {
                    let bounds = RandomBounds {
                        max_span,
                        ..RandomBounds::default()
                    };
                    random_good(&load(&semigroup)?, seed, &bounds)?
                }
            };
            write_out(output.as_deref(), &emit_gsi(&e))?;
            Ok(0)
        }
    }
}

fn info(e: &SmallRep, plot: bool) -> Result<(), CliError> {
    let maxes = maximals(e);
    let mut out = String::new();
    use std::fmt::Write as _;
    let _ = writeln!(out, "r: {}", e.dim());
    let _ = writeln!(out, "min: {}", e.min_elem());
    let _ = writeln!(out, "conductor: {}", e.conductor());
    let _ = writeln!(out, "frobenius: {}", e.frobenius());
    let _ = writeln!(out, "small elements: {}", e.small_elements().len());
    let _ = writeln!(out, "semigroup: {}", e.is_semigroup());
    let _ = writeln!(out, "maximals: {}", maxes.len());
    for m in &maxes {
        let kind = serde_json::to_value(m.kind).expect("serializable");
        let _ = writeln!(
            out,
            "  {} type ({},{}) {}",
            m.point,
            m.p,
            m.q,
            kind.as_str().unwrap_or_default()
        );
    }
    if plot {
        out.push_str(&plot_text(e, &maxes)?);
    }
    print!("{out}");
    std::io::stdout().flush().ok();
    Ok(())
}

/// `#` small element, `M` maximal point, `.` otherwise; the second
/// coordinate grows upwards.
fn plot_text(e: &SmallRep, maxes: &[gsi_core::MaximalInfo]) -> Result<String, CliError> {
    let (m, c) = (e.min_elem(), e.conductor());
    let cell = |x: &[i64]| {
        let p = gsi_core::Point::new(x.to_vec());
        if maxes.iter().any(|mx| mx.point == p) {
            'M'
        } else if e.small_elements().binary_search(&p).is_ok() {
            '#'
        } else {
            '.'
        }
    };
    let mut out = String::new();
    match e.dim() {
        1 => {
            out.extend((m.get(0)..=c.get(0)).map(|x| cell(&[x])));
            out.push('\n');
        }
        2 => {
            for y in (m.get(1)..=c.get(1)).rev() {
                out.extend((m.get(0)..=c.get(0)).map(|x| cell(&[x, y])));
                out.push('\n');
            }
        }
        r => return Err(CliError::Usage(format!("--plot supports dimension 1 or 2, not {r}"))),
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
