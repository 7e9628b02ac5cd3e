//! `keller` command-line tool.
//!
//! Exit status: 0 on success, 1 when a yes/no analysis comes out negative
//! (no inverse found, no finite order, `P∘Q ≠ P`), 2 on usage, input or
//! computation errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use keller::census::{
    injectivity_census, integrality_census, reducibility_census, variety_point_count, GrowthSeries,
};
use keller::dynamics::{
    classify_affine, detect_order, fixed_points, pq_check, LocusKind, Mu, PqCheck, DEFAULT_MAX_ORDER,
};
use keller::elim::{annihilator, annihilator_names, annihilator_unchecked};
use keller::inverse::{invert, InverseStatus};
use keller::parse::{parse_expression, parse_map_file, parse_poly_file, MapFile};
use keller::poly::default_names;
use keller::{factor_over_z, BigRat, MultiPoly, UniPoly};

#[derive(Parser)]
#[command(name = "keller", version, about = "Exact tools for polynomial maps with constant Jacobian")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Jacobian determinant and whether it is a nonzero constant
    Jac { map: PathBuf },
    /// Search for a polynomial inverse
    Invert {
        map: PathBuf,
        /// Maximum total degree of the inverse (default: deg(P)^(n-1))
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Annihilating polynomial Φ(u1, u2, z) of one coordinate of a planar map
    Annihilator {
        map: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        coord: u8,
        /// Skip the constant-Jacobian check
        #[arg(long)]
        unchecked: bool,
    },
    /// Integer-grid censuses
    #[command(subcommand)]
    Census(CensusCommand),
    /// Smallest t with Q^t = identity
    Order {
        map: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max: u32,
    },
    /// Fixed points of a planar map
    FixedPoints { map: PathBuf },
    /// Linear part, eigenvalues, fixed point and order of an affine planar map
    ClassifyAffine { map: PathBuf },
    /// Whether P∘Q = P
    PqCheck { p: PathBuf, q: PathBuf },
    /// Factor a univariate polynomial over the integers
    Factor { poly: String },
}

#[derive(Subcommand)]
enum CensusCommand {
    /// Count integer preimages of every point of [-N, N]²
    Preimage {
        map: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        output: Output,
        /// Include the wall-clock time in the report
        #[arg(long)]
        timing: bool,
    },
    /// Count (x0, y0) where A(x0, y0, z) is reducible or drops degree
    Reducible {
        poly: String,
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Count (x0, y0) where num/den is an integer
    Integral {
        #[arg(long)]
        num: String,
        #[arg(long)]
        den: String,
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Count integer points of R(x, y) = 0
    Variety {
        poly: String,
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<u64>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
    /// Write the report to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

type CliResult = Result<u8, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn err(e: keller::Error) -> String {
    e.to_string()
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_map(path: &Path) -> Result<MapFile, String> {
    parse_map_file(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

/// A polynomial given either as a file name or as expression text.
fn load_poly(arg: &str, names: &[String]) -> Result<MultiPoly, String> {
    let path = Path::new(arg);
    if path.is_file() {
        parse_poly_file(&read(path)?, names).map_err(|e| format!("{arg}: {e}"))
    } else {
        parse_expression(arg, names).map_err(err)
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Variables of the inverse map: `u, v` in the plane, `u1..un` otherwise.
fn image_names(n: usize) -> Vec<String> {
    if n == 2 {
        names(&["u", "v"])
    } else {
        (1..=n).map(|i| format!("u{i}")).collect()
    }
}

fn emit(output: &Output, text: &str) -> Result<(), String> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

fn series_text(series: &GrowthSeries) -> String {
    let mut out = String::new();
    for e in &series.entries {
        out.push_str(&format!("N = {}: {}\n", e.n, e.count));
    }
    match series.fitted_exponent {
        Some(x) => out.push_str(&format!("fitted exponent: {x:.4}\n")),
        None => out.push_str("fitted exponent: n/a\n"),
    }
    out
}

fn emit_series(output: &Output, series: &GrowthSeries) -> Result<(), String> {
    let text = if output.json {
        series.to_json() + "\n"
    } else if output.csv {
        series.to_csv()
    } else {
        series_text(series)
    };
    emit(output, &text)
}

fn point(p: &[BigRat]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Jac { map } => {
            let m = load_map(&map)?;
            let j = m.map.jacobian_det().map_err(err)?;
            println!("J = {}", j.display_with(&m.variables));
            println!("keller: {}", m.map.is_keller().map_err(err)?);
            Ok(0)
        }
        Command::Invert { map, bound } => {
            let m = load_map(&map)?;
            let r = invert(&m.map, bound).map_err(err)?;
            let status = match r.status {
                InverseStatus::InverseFound => "inverse_found",
                InverseStatus::NoInverseWithinBound => "no_inverse_within_bound",
                InverseStatus::NotKeller => "not_keller",
            };
            println!("status: {status}");
            if let Some(c) = &r.keller {
                println!("jacobian: {c}");
            }
            match &r.inverse {
                Some(g) => {
                    let vars = image_names(g.arity());
                    println!("inverse: {}", g.display_with(&vars));
                    if let Some(cert) = r.certificate {
                        let cert = match cert {
                            keller::inverse::Certificate::AnnihilatorDegreeOne => "annihilator_degree_one",
                            keller::inverse::Certificate::Ansatz => "ansatz",
                        };
                        println!("certificate: {cert}");
                    }
                    println!("degree: {}", r.degree_bound_used);
                    Ok(0)
                }
                None => {
                    println!("degree bound: {}", r.degree_bound_used);
                    Ok(1)
                }
            }
        }
        Command::Annihilator { map, coord, unchecked } => {
            let m = load_map(&map)?;
            let coord = usize::from(coord);
            let a = if unchecked {
                annihilator_unchecked(&m.map, coord)
            } else {
                annihilator(&m.map, coord)
            }
            .map_err(err)?;
            println!("phi = {}", a.phi.display_with(&annihilator_names()));
            println!("deg_z: {}", a.deg_z);
            println!("verified: {}", a.verified);
            Ok(0)
        }
        Command::Census(c) => run_census(c),
        Command::Order { map, max } => {
            let m = load_map(&map)?;
            let r = detect_order(&m.map, max).map_err(err)?;
            match r.order {
                Some(t) => {
                    println!("order: {t}");
                    Ok(0)
                }
                None => {
                    println!("order: none (checked up to {})", r.iterations_checked);
                    Ok(1)
                }
            }
        }
        Command::FixedPoints { map } => {
            let m = load_map(&map)?;
            let locus = fixed_points(&m.map).map_err(err)?;
            let kind = match locus.kind {
                LocusKind::Empty => "empty",
                LocusKind::Finite => "finite",
                LocusKind::PositiveDimensional => "positive_dimensional",
            };
            println!("kind: {kind}");
            for p in &locus.defining_polynomials {
                println!("defining: {} = 0", p.display_with(&m.variables));
            }
            for p in &locus.rational_points {
                println!("point: {}", point(p));
            }
            if locus.degenerate {
                println!("degenerate: true");
            }
            Ok(0)
        }
        Command::ClassifyAffine { map } => {
            let m = load_map(&map)?;
            let c = classify_affine(&m.map).map_err(err)?;
            println!(
                "L = [[{}, {}], [{}, {}]]",
                c.matrix[0][0], c.matrix[0][1], c.matrix[1][0], c.matrix[1][1]
            );
            println!("b = {}", point(&c.offset));
            println!("trace: {}", c.trace);
            println!("det: {}", c.det);
            println!("det_check: {}", c.det_check);
            if c.eigenvalues.is_empty() {
                println!("eigenvalues: roots of t^2 - ({})*t + ({}), not rational", c.trace, c.det);
            } else {
                println!("eigenvalues: {}", point(&c.eigenvalues));
            }
            let mu = match c.mu {
                Mu::Zero => "0",
                Mu::One => "1",
                Mu::Irrational => "irrational",
            };
            println!("mu: {mu}");
            match &c.fixed_point {
                Some(p) => println!("fixed point: {}", point(p)),
                None => println!("fixed point: none"),
            }
            match c.finite_order {
                Some(t) => println!("finite order: {t}"),
                None => println!("finite order: none"),
            }
            Ok(0)
        }
        Command::PqCheck { p, q } => {
            let pm = load_map(&p)?;
            let qm = load_map(&q)?;
            match pq_check(&pm.map, &qm.map).map_err(err)? {
                PqCheck::Identical => {
                    println!("identical");
                    Ok(0)
                }
                PqCheck::Difference(diffs) => {
                    println!("difference:");
                    for d in diffs {
                        println!("  {} = 0", d.display_with(&pm.variables));
                    }
                    Ok(1)
                }
            }
        }
        Command::Factor { poly } => {
            let var = poly
                .split(|c: char| !(c.is_alphanumeric() || c == '_'))
                .find(|w| w.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_'))
                .unwrap_or("z")
                .to_string();
            let p = parse_expression(&poly, std::slice::from_ref(&var)).map_err(err)?;
            let coeffs: Vec<BigRat> = (0..=p.degree_in(0).unwrap_or(0))
                .map(|k| p.coefficient(&keller::Monomial::new(vec![k])))
                .collect();
            let f = factor_over_z(&UniPoly::new(coeffs)).map_err(err)?;
            let mut line = f.unit.to_string();
            for (q, m) in &f.factors {
                line.push_str(&format!(" * ({})", q.to_rational().display_var(&var)));
                if *m > 1 {
                    line.push_str(&format!("^{m}"));
                }
            }
            println!("{line}");
            println!("irreducible: {}", f.is_irreducible());
            Ok(0)
        }
    }
}

fn run_census(command: CensusCommand) -> CliResult {
    let xy = default_names(2);
    match command {
        CensusCommand::Preimage { map, n, jobs, output, timing } => {
            let m = load_map(&map)?;
            let mut report = injectivity_census(&m.map, n, jobs).map_err(err)?;
            if !timing {
                report = report.without_timing();
            }
            let text = if output.json {
                report.to_json() + "\n"
            } else if output.csv {
                report.to_csv()
            } else {
                let b = &report.bad_pairs;
                let mut t = format!(
                    "N = {}: {} points, {} unique, {} with several preimages\n\
                     bad pairs: degenerate {}, degree_drop {}, reducible {}, multi {}\n",
                    report.n,
                    report.total_points,
                    report.unique_count,
                    report.multi_count,
                    b.degenerate,
                    b.degree_drop,
                    b.reducible,
                    b.multi
                );
                if let Some(ms) = report.elapsed_ms {
                    t.push_str(&format!("elapsed: {ms} ms\n"));
                }
                t
            };
            emit(&output, &text)?;
            Ok(0)
        }
        CensusCommand::Reducible { poly, ns, output } => {
            let a = load_poly(&poly, &names(&["x", "y", "z"]))?;
            emit_series(&output, &reducibility_census(&a, &ns).map_err(err)?)?;
            Ok(0)
        }
        CensusCommand::Integral { num, den, ns, output } => {
            let a = load_poly(&num, &xy)?;
            let b = load_poly(&den, &xy)?;
            let r = integrality_census(&a, &b, &ns).map_err(err)?;
            let text = if output.json {
                r.to_json() + "\n"
            } else if output.csv {
                r.series.to_csv()
            } else {
                let mut t = series_text(&r.series);
                for e in &r.zero_denominator {
                    t.push_str(&format!("N = {}: {} zero denominators\n", e.n, e.count));
                }
                t
            };
            emit(&output, &text)?;
            Ok(0)
        }
        CensusCommand::Variety { poly, ns, output } => {
            let r = load_poly(&poly, &xy)?;
            emit_series(&output, &variety_point_count(&r, &ns).map_err(err)?)?;
            Ok(0)
        }
    }
}
