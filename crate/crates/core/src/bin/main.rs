//! Command-line front end: family enumeration, poset queries, weight
//! evaluation, cumulant solving and the claim-verification suite.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage
//! or input errors.

use std::collections::HashMap;
use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use partition_cumulants::algebra::{Rat, RatMatrix};
use partition_cumulants::checks::{run_all, RunConfig};
use partition_cumulants::cumulants::{
    clt_moments, constants_independence_matrix, constants_independence_poly, AttachSide, CltKind,
    CumulantSolver, GenericFunctional, MatrixCumulants, MomentSource, ProductFunctional,
    ProductKind, TableFunctional, Word,
};
use partition_cumulants::error::Error;
use partition_cumulants::families::{self, FamilyId};
use partition_cumulants::partition::Partition;
use partition_cumulants::poset::{si_check_family, si_check_weight, FamilyPoset};
use partition_cumulants::weights::WeightId;

#[derive(Parser)]
#[command(
    name = "partition-cumulants",
    about = "Exact set-partition lattices, weights and weighted cumulants",
    version
)]
struct Cli {
    /// Enumeration cap on the ground-set size
    #[arg(long, global = true, default_value_t = families::DEFAULT_ENUMERATION_CAP)]
    max_n: usize,
    /// Seed for randomized matrix and functional checks
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate and count partition families
    Families {
        #[command(subcommand)]
        action: FamiliesCmd,
    },
    /// Refinement-order queries: Möbius values, singleton-inductivity,
    /// Hasse diagrams, lattice checks
    Poset {
        #[command(subcommand)]
        action: PosetCmd,
    },
    /// Evaluate and classify partition weights
    Weights {
        #[command(subcommand)]
        action: WeightsCmd,
    },
    /// Weighted moment-cumulant transforms, products and limit theorems
    Cumulants {
        #[command(subcommand)]
        action: CumulantsCmd,
    },
    /// Run the full claim-verification suite and emit a report
    VerifyPaper {
        /// Only run checks whose identifier starts with this prefix
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Subcommand)]
enum FamiliesCmd {
    /// List every member of a family on {1..n}
    Enumerate {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
    },
    /// Count members for a range of n
    Count {
        #[arg(long)]
        family: String,
        /// Single value `6` or inclusive range `1..10`
        #[arg(long)]
        n: String,
        /// Compare against the closed-form count where one is known
        #[arg(long)]
        check_closed_form: bool,
    },
}

#[derive(Subcommand)]
enum PosetCmd {
    /// Möbius values mu(0_n, 1_n) over a range of n
    Moebius {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: String,
    },
    /// Singleton-inductivity scan for a family or a weight
    SiCheck {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        weight: Option<String>,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Hasse diagram of a family poset (Graphviz dot)
    Hasse {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Emit Graphviz dot (same as --format dot; dot is always emitted)
        #[arg(long)]
        dot: bool,
    },
    /// Empirical lattice check: unique joins and meets inside the family
    Lattice {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: String,
    },
}

#[derive(Subcommand)]
enum WeightsCmd {
    /// Evaluate one weight on one partition
    Eval {
        #[arg(long)]
        weight: String,
        /// Partition text such as "1,3/2,4"
        #[arg(long)]
        partition: String,
    },
    /// Tabulate a weight over its summation family on {1..n}
    Table {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        n: usize,
    },
    /// Monic/invertible classification up to an order cap
    Classify {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
}

#[derive(Subcommand)]
enum CumulantsCmd {
    /// Solve the moment problem in a JSON file into a cumulant table
    Solve {
        #[arg(long)]
        input: std::path::PathBuf,
    },
    /// Joint moments of independent marginals
    Product {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        input: std::path::PathBuf,
        /// Evaluate one word instead of the full table
        #[arg(long)]
        word: Option<String>,
    },
    /// Check that constant-containing cumulants vanish for a weight
    VerifyConstants {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        #[arg(long, value_enum, default_value_t = Domain::Poly)]
        domain: Domain,
        #[arg(long, default_value_t = 3)]
        dim: usize,
    },
    /// Moments of the normalized sum of independent copies
    Clt {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        input: std::path::PathBuf,
        #[arg(long)]
        n_copies: u64,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long)]
        allow_non_centered: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Domain {
    Poly,
    Matrix,
}

/// JSON moment-problem input.
#[derive(Deserialize)]
struct MomentProblem {
    domain: DomainSpec,
    alphabet: Vec<char>,
    #[serde(default)]
    weight: Option<String>,
    max_order: usize,
    #[serde(default)]
    moments: Vec<MomentEntry>,
    #[serde(default)]
    assignments: Vec<AssignmentEntry>,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum DomainSpec {
    Rational,
    Poly,
    Matrix(usize),
}

#[derive(Deserialize)]
struct MomentEntry {
    word: String,
    value: Rat,
}

#[derive(Deserialize)]
struct AssignmentEntry {
    symbol: char,
    matrix: RatMatrix,
}

#[derive(Deserialize)]
struct ProductInput {
    marginals: Vec<MarginalInput>,
    max_order: usize,
}

#[derive(Deserialize)]
struct MarginalInput {
    alphabet: Vec<char>,
    moments: Vec<MomentEntry>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Option<std::path::PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::InvalidInput(format!("cannot write stdout: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))
}

fn parse_range(text: &str) -> Result<(usize, usize), Error> {
    let bad = || Error::InvalidInput(format!("expected `N` or `A..B`, got {text:?}"));
    if let Some((a, b)) = text.split_once("..") {
        let lo: usize = a.trim().parse().map_err(|_| bad())?;
        let hi: usize = b.trim().parse().map_err(|_| bad())?;
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        Ok((lo, hi))
    } else {
        let n: usize = text.trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        Ok((n, n))
    }
}

fn load_problem(path: &std::path::Path) -> Result<MomentProblem, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn rational_functional(
    alphabet: &[char],
    moments: &[MomentEntry],
) -> Result<TableFunctional<Rat>, Error> {
    let mut f = TableFunctional::new(alphabet.to_vec(), Rat::one());
    for entry in moments {
        f.set(&Word::parse(&entry.word), entry.value.clone())?;
    }
    Ok(f)
}

fn rand_seed(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let cap = cli.max_n;
    match &cli.command {
        Command::Families { action } => match action {
            FamiliesCmd::Enumerate { family, n } => {
                let family: FamilyId = family.parse()?;
                let members = families::enumerate(family, *n, cap)?;
                match cli.format {
                    Format::Json => emit(&cli.out, &to_json(&members.as_slice())?)?,
                    _ => {
                        let mut text = String::new();
                        for p in members.iter() {
                            text.push_str(&format!("{p}\n"));
                        }
                        emit(&cli.out, &text)?;
                    }
                }
            }
            FamiliesCmd::Count {
                family,
                n,
                check_closed_form,
            } => {
                let family: FamilyId = family.parse()?;
                let (lo, hi) = parse_range(n)?;
                #[derive(Serialize)]
                struct Row {
                    n: usize,
                    count: u64,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    closed_form: Option<u64>,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    matches: Option<bool>,
                }
                let mut rows = Vec::new();
                for n in lo..=hi {
                    let count = families::cardinality(family, n, cap)?;
                    let closed = if *check_closed_form {
                        family.closed_form_count(n)
                    } else {
                        None
                    };
                    rows.push(Row {
                        n,
                        count,
                        matches: closed.map(|c| c == count),
                        closed_form: closed,
                    });
                }
                match cli.format {
                    Format::Json => emit(&cli.out, &to_json(&rows)?)?,
                    _ => {
                        let mut text = String::new();
                        for r in &rows {
                            text.push_str(&format!("{}\t{}", r.n, r.count));
                            if let (Some(cf), Some(m)) = (r.closed_form, r.matches) {
                                text.push_str(&format!(
                                    "\t{cf}\t{}",
                                    if m { "ok" } else { "MISMATCH" }
                                ));
                            }
                            text.push('\n');
                        }
                        emit(&cli.out, &text)?;
                    }
                }
                if *check_closed_form && rows.iter().any(|r| r.matches == Some(false)) {
                    return Ok(ExitCode::from(1));
                }
            }
        },
        Command::Poset { action } => match action {
            PosetCmd::Moebius { family, n } => {
                let family: FamilyId = family.parse()?;
                let (lo, hi) = parse_range(n)?;
                #[derive(Serialize)]
                struct Row {
                    n: usize,
                    moebius: i64,
                }
                let mut rows = Vec::new();
                for n in lo..=hi {
                    let poset = FamilyPoset::new(family, n, cap)?;
                    rows.push(Row {
                        n,
                        moebius: poset.moebius_idx(poset.bottom(), poset.top())?,
                    });
                }
                match cli.format {
                    Format::Json => emit(&cli.out, &to_json(&rows)?)?,
                    _ => {
                        let text: String = rows
                            .iter()
                            .map(|r| format!("{}\t{}\n", r.n, r.moebius))
                            .collect();
                        emit(&cli.out, &text)?;
                    }
                }
            }
            PosetCmd::SiCheck {
                family,
                weight,
                n_max,
            } => {
                let report = match (family, weight) {
                    (Some(f), None) => si_check_family(f.parse()?, *n_max, cap)?,
                    (None, Some(w)) => si_check_weight(&w.parse()?, *n_max, cap)?,
                    _ => {
                        return Err(Error::InvalidInput(
                            "pass exactly one of --family or --weight".into(),
                        ))
                    }
                };
                emit(&cli.out, &to_json(&report)?)?;
            }
            PosetCmd::Hasse { family, n, dot: _ } => {
                let family: FamilyId = family.parse()?;
                let poset = FamilyPoset::new(family, *n, cap)?;
                emit(&cli.out, &poset.to_dot())?;
            }
            PosetCmd::Lattice { family, n } => {
                let family: FamilyId = family.parse()?;
                let (lo, hi) = parse_range(n)?;
                #[derive(Serialize)]
                struct Row {
                    n: usize,
                    lattice: bool,
                }
                let mut rows = Vec::new();
                for n in lo..=hi {
                    let poset = FamilyPoset::new(family, n, cap)?;
                    rows.push(Row {
                        n,
                        lattice: poset.is_lattice(),
                    });
                }
                match cli.format {
                    Format::Json => emit(&cli.out, &to_json(&rows)?)?,
                    _ => {
                        let text: String = rows
                            .iter()
                            .map(|r| format!("{}\t{}\n", r.n, r.lattice))
                            .collect();
                        emit(&cli.out, &text)?;
                    }
                }
            }
        },
        Command::Weights { action } => match action {
            WeightsCmd::Eval { weight, partition } => {
                let weight: WeightId = weight.parse()?;
                let partition = Partition::from_str(partition)?;
                let value = weight.eval(&partition);
                match cli.format {
                    Format::Json => {
                        #[derive(Serialize)]
                        struct Out {
                            weight: String,
                            partition: Partition,
                            value: Rat,
                        }
                        emit(
                            &cli.out,
                            &to_json(&Out {
                                weight: weight.to_string(),
                                partition,
                                value,
                            })?,
                        )?
                    }
                    _ => emit(&cli.out, &format!("{value}\n"))?,
                }
            }
            WeightsCmd::Table { weight, n } => {
                let weight: WeightId = weight.parse()?;
                let members = families::enumerate(weight.summation_family(), *n, cap)?;
                #[derive(Serialize)]
                struct Row {
                    partition: Partition,
                    value: Rat,
                }
                let rows: Vec<Row> = members
                    .iter()
                    .map(|p| Row {
                        partition: p.clone(),
                        value: weight.eval(p),
                    })
                    .collect();
                match cli.format {
                    Format::Json => emit(&cli.out, &to_json(&rows)?)?,
                    _ => {
                        let text: String = rows
                            .iter()
                            .map(|r| format!("{}\t{}\n", r.partition, r.value))
                            .collect();
                        emit(&cli.out, &text)?;
                    }
                }
            }
            WeightsCmd::Classify { weight, n_max } => {
                let weight: WeightId = weight.parse()?;
                emit(&cli.out, &to_json(&weight.classify(*n_max))?)?;
            }
        },
        Command::Cumulants { action } => match action {
            CumulantsCmd::Solve { input } => {
                let problem = load_problem(input)?;
                let weight: WeightId = problem
                    .weight
                    .as_deref()
                    .ok_or_else(|| Error::InvalidInput("missing field `weight`".into()))?
                    .parse()?;
                let text = match problem.domain {
                    DomainSpec::Rational => {
                        let f = rational_functional(&problem.alphabet, &problem.moments)?;
                        let mut solver = CumulantSolver::new(&weight, &f, cap);
                        to_json(&solver.solve_table(problem.max_order)?)?
                    }
                    DomainSpec::Poly => {
                        if !problem.moments.is_empty() {
                            return Err(Error::InvalidInput(
                                "the poly domain uses the generic functional; \
                                 drop the `moments` field"
                                    .into(),
                            ));
                        }
                        let f = GenericFunctional::new(problem.alphabet.clone());
                        let mut solver = CumulantSolver::new(&weight, &f, cap);
                        to_json(&solver.solve_table(problem.max_order)?)?
                    }
                    DomainSpec::Matrix(dim) => {
                        let mut assignments: HashMap<char, RatMatrix> = HashMap::new();
                        for a in &problem.assignments {
                            if a.matrix.dim() != dim {
                                return Err(Error::DimensionMismatch {
                                    left: dim,
                                    right: a.matrix.dim(),
                                });
                            }
                            assignments.insert(a.symbol, a.matrix.clone());
                        }
                        let engine = MatrixCumulants::new(weight.clone(), AttachSide::Right, cap)?;
                        let mut entries = std::collections::BTreeMap::new();
                        for word in partition_cumulants::cumulants::words_up_to(
                            &problem.alphabet,
                            problem.max_order,
                        ) {
                            let args: Vec<RatMatrix> = word
                                .letters()
                                .iter()
                                .map(|c| {
                                    assignments.get(c).cloned().ok_or(Error::UnknownSymbol {
                                        symbol: *c,
                                        alphabet: problem.alphabet.iter().collect(),
                                    })
                                })
                                .collect::<Result<_, _>>()?;
                            entries.insert(word, engine.cumulant(&args)?);
                        }
                        #[derive(Serialize)]
                        struct MatrixTable {
                            weight: String,
                            dim: usize,
                            max_order: usize,
                            entries: std::collections::BTreeMap<Word, RatMatrix>,
                        }
                        to_json(&MatrixTable {
                            weight: weight.to_string(),
                            dim,
                            max_order: problem.max_order,
                            entries,
                        })?
                    }
                };
                emit(&cli.out, &text)?;
            }
            CumulantsCmd::Product { kind, input, word } => {
                let kind: ProductKind = kind.parse()?;
                let text = std::fs::read_to_string(input).map_err(|e| {
                    Error::InvalidInput(format!("cannot read {}: {e}", input.display()))
                })?;
                let spec: ProductInput = serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidInput(format!("{}: {e}", input.display())))?;
                let marginals: Vec<TableFunctional<Rat>> = spec
                    .marginals
                    .iter()
                    .map(|m| rational_functional(&m.alphabet, &m.moments))
                    .collect::<Result<_, _>>()?;
                let sources: Vec<&dyn MomentSource<Rat>> = marginals
                    .iter()
                    .map(|m| m as &dyn MomentSource<Rat>)
                    .collect();
                let product = ProductFunctional::new(kind, sources, spec.max_order, cap)?;
                let words = match word {
                    Some(w) => vec![Word::parse(w)],
                    None => partition_cumulants::cumulants::words_up_to(
                        product.alphabet(),
                        spec.max_order,
                    ),
                };
                let mut entries = std::collections::BTreeMap::new();
                for w in words {
                    let value = product.moment(&w)?;
                    entries.insert(w, value);
                }
                match cli.format {
                    Format::Json => emit(&cli.out, &to_json(&entries)?)?,
                    _ => {
                        let text: String = entries
                            .iter()
                            .map(|(w, v)| format!("{w}\t{v}\n"))
                            .collect();
                        emit(&cli.out, &text)?;
                    }
                }
            }
            CumulantsCmd::VerifyConstants {
                weight,
                max_order,
                domain,
                dim,
            } => {
                let weight: WeightId = weight.parse()?;
                let report = match domain {
                    Domain::Poly => constants_independence_poly(&weight, *max_order, cap)?,
                    Domain::Matrix => {
                        let mut rng = rand_seed(cli.seed);
                        constants_independence_matrix(&weight, *max_order, *dim, &mut rng, cap)?
                    }
                };
                emit(&cli.out, &to_json(&report)?)?;
            }
            CumulantsCmd::Clt {
                kind,
                input,
                n_copies,
                order,
                allow_non_centered,
            } => {
                let kind: CltKind = kind.parse()?;
                let problem = load_problem(input)?;
                let marginal = rational_functional(&problem.alphabet, &problem.moments)?;
                let moments = clt_moments(
                    kind,
                    &marginal,
                    *n_copies,
                    *order,
                    *allow_non_centered,
                    cap,
                )?;
                match cli.format {
                    Format::Json => emit(&cli.out, &to_json(&moments)?)?,
                    _ => {
                        let text: String = moments
                            .iter()
                            .enumerate()
                            .map(|(i, m)| format!("{}\t{m}\n", i + 1))
                            .collect();
                        emit(&cli.out, &text)?;
                    }
                }
            }
        },
        Command::VerifyPaper { only } => {
            let config = RunConfig {
                seed: cli.seed,
                cap,
            };
            let report = run_all(&config, only.as_deref())?;
            match cli.format {
                Format::Tsv => {
                    let mut text = String::new();
                    for o in &report.outcomes {
                        text.push_str(&format!(
                            "{}\t{}\t{}\t{}\n",
                            o.id,
                            if o.pass { "pass" } else { "FAIL" },
                            o.computed,
                            o.expected
                        ));
                    }
                    emit(&cli.out, &text)?;
                }
                _ => emit(&cli.out, &to_json(&report)?)?,
            }
            if !report.pass {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
