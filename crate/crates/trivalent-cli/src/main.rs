//! `trivalent` — exact computations on trivalent-graph spaces, chord
//! diagrams, symplectic invariant tensors, group rings, and the degree-one
//! cocycle, from the command line.
//!
//! Every number is printed as an exact fraction (`p/q`, or `p` for
//! integers); `--json` switches any command to a schema-versioned JSON
//! document. Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use trivalent_core::chordspace::{
    arp_space, enumerate_chords, enumerate_colored_chords, ArpVariant, ChordJson,
    ColoredLinearChordDiagram, LinearChordDiagram,
};
use trivalent_core::exact::Rational;
use trivalent_core::graphspace::aphi_basis;
use trivalent_core::groupring::{magnus, parse_expression, DEFAULT_MAGNUS_TRUNCATION};
use trivalent_core::symplectic::{
    contract_gl, contract_sp, invariant_subspace_dim, tensor_to_wedge3, InvariantSpace,
    LieFamily, SymplecticTensor, TensorJson,
};
use trivalent_core::torelli::{
    build_proper_commutator, label_edges, parse_commutator, proper_commutator_check, properness,
    CocycleC1, EdgeSymbol, LabeledChordDiagram,
};
use trivalent_core::verify::{run_suite, SUITE_NAMES};
use trivalent_core::{Error, Result};

/// Schema version stamped into every JSON document.
const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(
    name = "trivalent",
    version,
    about = "Exact trivalent-graph, chord-diagram, and symplectic computations",
    propagate_version = true
)]
struct Cli {
    /// Emit a schema-versioned JSON document instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions of the graded spaces.
    Dim {
        #[command(subcommand)]
        which: DimCommand,
    },
    /// Dimension of an invariant subspace under a Lie-algebra action.
    Invariants {
        /// Ambient space: h6 (sixth tensor power), l3h2 (square of the third
        /// exterior power), or u2 (square of the kernel quotient).
        #[arg(long)]
        space: String,
        /// Acting family: sp or gl.
        #[arg(long)]
        group: String,
        /// Genus of the symplectic space.
        #[arg(long)]
        genus: usize,
    },
    /// Contract a chord diagram against a tensor (colored diagrams use the
    /// arrow convention; plain ones the omega convention).
    Contract {
        /// Chord-diagram JSON file.
        #[arg(long)]
        diagram: PathBuf,
        /// Tensor JSON file of rank 2×degree.
        #[arg(long)]
        tensor: PathBuf,
    },
    /// Cocycle evaluations.
    Cocycle {
        #[command(subcommand)]
        which: CocycleCommand,
    },
    /// Expansion of a group-ring expression in the truncated free
    /// associative algebra (generator g_i ↦ 1 + X_i).
    Magnus {
        /// Expression over generators g1, g2, …: products, sums, integer or
        /// fractional scalars, powers (g1^-2), and comm(u, v) brackets.
        #[arg(long)]
        expr: String,
        /// Truncation degree (monomials beyond it are dropped).
        #[arg(long, default_value_t = DEFAULT_MAGNUS_TRUNCATION)]
        trunc: usize,
    },
    /// Label a chord diagram's edges; optionally classify vertices under an
    /// edge ordering and certify a bracket word (exit 1 if certification
    /// fails).
    Labeling {
        /// Chord-diagram JSON file.
        #[arg(long)]
        diagram: PathBuf,
        /// Whitespace-separated edge ordering, e.g. "a1 a2 b1 b2 c1 c2".
        #[arg(long)]
        order: Option<String>,
        /// Bracket word over the edges, e.g. "[[a1,b1],c1]", or "auto" to
        /// build one greedily.
        #[arg(long)]
        commutator: Option<String>,
    },
    /// Run the verification suites (all, or one by name); exit 1 on failure.
    Selfcheck {
        /// Single suite name (criterion_1 … criterion_10).
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Subcommand)]
enum DimCommand {
    /// Dimension of the graph space at a degree.
    Aphi {
        #[arg(long)]
        degree: usize,
    },
    /// Number of (colored) linear chord diagrams at a degree.
    Chords {
        #[arg(long)]
        degree: usize,
        /// Count per-chord-oriented diagrams instead.
        #[arg(long)]
        colored: bool,
    },
    /// Dimension of a vertex-ordered quotient space at a degree.
    Arp {
        #[arg(long)]
        degree: usize,
        /// Quotient variant: rp, rp_nl, rp_cl, or rp_nl_cl.
        #[arg(long)]
        variant: String,
    },
}

#[derive(Subcommand)]
enum CocycleCommand {
    /// The degree-one cocycle: reads two rank-3 tensors, antisymmetrizes
    /// them onto the third exterior power, and prints the coefficient of
    /// the theta class in the value.
    C1(C1Args),
}

#[derive(Args)]
struct C1Args {
    /// Genus of the symplectic space.
    #[arg(long)]
    genus: usize,
    /// First argument: rank-3 tensor JSON file.
    #[arg(long)]
    alpha: PathBuf,
    /// Second argument: rank-3 tensor JSON file.
    #[arg(long)]
    beta: PathBuf,
    /// Use the reversed Lagrangian order.
    #[arg(long)]
    swapped: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Verification(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Dim { which } => run_dim(which, cli.json),
        Command::Invariants { space, group, genus } => {
            let space = InvariantSpace::parse(space)?;
            let family = LieFamily::parse(group)?;
            let dim = invariant_subspace_dim(space, family, *genus)?;
            emit_dimension(cli.json, "invariants", &[("genus", *genus)], dim)
        }
        Command::Contract { diagram, tensor } => run_contract(diagram, tensor, cli.json),
        Command::Cocycle { which: CocycleCommand::C1(args) } => run_cocycle_c1(args, cli.json),
        Command::Magnus { expr, trunc } => run_magnus(expr, *trunc, cli.json),
        Command::Labeling { diagram, order, commutator } => {
            run_labeling(diagram, order.as_deref(), commutator.as_deref(), cli.json)
        }
        Command::Selfcheck { suite } => run_selfcheck(suite.as_deref(), cli.json),
    }
}

// ---------------------------------------------------------------------------
// dim
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct DimensionJson {
    schema: u32,
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    genus: Option<usize>,
    dimension: usize,
}

fn emit_dimension(json: bool, command: &str, params: &[(&str, usize)], dim: usize) -> Result<()> {
    if json {
        let mut degree = None;
        let mut genus = None;
        for (k, v) in params {
            match *k {
                "degree" => degree = Some(*v),
                "genus" => genus = Some(*v),
                _ => {}
            }
        }
        let doc =
            DimensionJson { schema: SCHEMA, command: command.to_string(), degree, genus, dimension: dim };
        println!("{}", to_json(&doc)?);
    } else {
        println!("{dim}");
    }
    Ok(())
}

fn run_dim(which: &DimCommand, json: bool) -> Result<()> {
    match which {
        DimCommand::Aphi { degree } => {
            let (_, dim) = aphi_basis(*degree)?;
            emit_dimension(json, "dim.aphi", &[("degree", *degree)], dim)
        }
        DimCommand::Chords { degree, colored } => {
            let count = if *colored {
                enumerate_colored_chords(*degree)?.len()
            } else {
                enumerate_chords(*degree)?.len()
            };
            let command = if *colored { "dim.chords.colored" } else { "dim.chords" };
            emit_dimension(json, command, &[("degree", *degree)], count)
        }
        DimCommand::Arp { degree, variant } => {
            let variant = ArpVariant::parse(variant)?;
            let (_, dim) = arp_space(*degree, variant)?;
            emit_dimension(json, "dim.arp", &[("degree", *degree)], dim)
        }
    }
}

// ---------------------------------------------------------------------------
// contract
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ContractJson {
    schema: u32,
    command: &'static str,
    degree: usize,
    colored: bool,
    value: String,
}

fn run_contract(diagram: &Path, tensor: &Path, json: bool) -> Result<()> {
    let chord_json: ChordJson = read_json(diagram)?;
    let tensor_json: TensorJson = read_json(tensor)?;
    let t = SymplecticTensor::try_from(&tensor_json)?;
    let (value, colored, degree) = if chord_json.colors.is_some() {
        let d = ColoredLinearChordDiagram::try_from(&chord_json)?;
        (contract_gl(&d, &t)?, true, d.degree())
    } else {
        let d = LinearChordDiagram::try_from(&chord_json)?;
        (contract_sp(&d, &t)?, false, d.degree())
    };
    if json {
        let doc = ContractJson {
            schema: SCHEMA,
            command: "contract",
            degree,
            colored,
            value: value.as_fraction(),
        };
        println!("{}", to_json(&doc)?);
    } else {
        println!("{}", value.as_fraction());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// cocycle c1
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CocycleJson {
    schema: u32,
    command: &'static str,
    genus: usize,
    swapped: bool,
    theta_coefficient: String,
}

fn run_cocycle_c1(args: &C1Args, json: bool) -> Result<()> {
    let alpha = wedge_from_file(&args.alpha, args.genus)?;
    let beta = wedge_from_file(&args.beta, args.genus)?;
    let cocycle = CocycleC1::new(args.genus, args.swapped)?;
    let coefficient = cocycle.coefficient(&alpha, &beta)?;
    if json {
        let doc = CocycleJson {
            schema: SCHEMA,
            command: "cocycle.c1",
            genus: args.genus,
            swapped: args.swapped,
            theta_coefficient: coefficient.as_fraction(),
        };
        println!("{}", to_json(&doc)?);
    } else {
        println!("{}", coefficient.as_fraction());
    }
    Ok(())
}

fn wedge_from_file(path: &Path, genus: usize) -> Result<trivalent_core::symplectic::Wedge3Element> {
    let tensor_json: TensorJson = read_json(path)?;
    if tensor_json.genus != genus {
        return Err(Error::invalid(format!(
            "tensor file {} has genus {}, command asked for {genus}",
            path.display(),
            tensor_json.genus
        )));
    }
    let t = SymplecticTensor::try_from(&tensor_json)?;
    tensor_to_wedge3(&t)
}

// ---------------------------------------------------------------------------
// magnus
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct MagnusJson {
    schema: u32,
    command: &'static str,
    truncation: usize,
    terms: Vec<MagnusTermJson>,
}

#[derive(Serialize)]
struct MagnusTermJson {
    /// Generator index per factor, e.g. `[1, 2]` for `X1·X2`.
    monomial: Vec<u16>,
    coefficient: String,
}

fn run_magnus(expr: &str, trunc: usize, json: bool) -> Result<()> {
    let element = parse_expression(expr)?;
    let series = magnus(&element, trunc);
    if json {
        let mut terms: Vec<(&Vec<u16>, &Rational)> = series.terms().collect();
        terms.sort_by_key(|(mono, _)| (mono.len(), (*mono).clone()));
        let doc = MagnusJson {
            schema: SCHEMA,
            command: "magnus",
            truncation: trunc,
            terms: terms
                .into_iter()
                .map(|(mono, c)| MagnusTermJson {
                    monomial: mono.clone(),
                    coefficient: c.as_fraction(),
                })
                .collect(),
        };
        println!("{}", to_json(&doc)?);
    } else {
        println!("{series}");
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// labeling
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct LabelingJson {
    schema: u32,
    command: &'static str,
    degree: usize,
    /// Edge symbols with 1-based endpoint positions.
    edges: Vec<EdgeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    properness: Option<PropernessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertificateJson>,
}

#[derive(Serialize)]
struct EdgeJson {
    symbol: String,
    endpoints: [usize; 2],
}

#[derive(Serialize)]
struct PropernessJson {
    order: Vec<String>,
    proper: Vec<bool>,
    all_proper: bool,
    gamma_vertices: usize,
    gamma_trivalent: usize,
    gamma_univalent: usize,
    gamma_unchanged: bool,
}

#[derive(Serialize)]
struct CertificateJson {
    commutator: String,
    monomials: usize,
    proper_monomials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficient: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    proper_monomial: Option<Vec<String>>,
    ok: bool,
}

fn parse_order(labeled: &LabeledChordDiagram, text: &str) -> Result<Vec<EdgeSymbol>> {
    let _ = labeled;
    text.replace(',', " ")
        .split_whitespace()
        .map(|tok| tok.parse::<EdgeSymbol>())
        .collect()
}

fn run_labeling(
    diagram: &Path,
    order: Option<&str>,
    commutator: Option<&str>,
    json: bool,
) -> Result<()> {
    let chord_json: ChordJson = read_json(diagram)?;
    let d = LinearChordDiagram::try_from(&chord_json)?;
    let labeled = label_edges(&d)?;

    let edges: Vec<EdgeJson> = labeled
        .edges()
        .iter()
        .map(|e| EdgeJson {
            symbol: e.symbol.to_string(),
            endpoints: [e.endpoints.0 + 1, e.endpoints.1 + 1],
        })
        .collect();

    let properness_part = match order {
        Some(text) => {
            let symbols = parse_order(&labeled, text)?;
            let report = properness(&labeled, &symbols)?;
            Some((symbols, report))
        }
        None => None,
    };

    let certificate_part = match commutator {
        Some(text) => {
            let tree = if text == "auto" {
                build_proper_commutator(&labeled)?
            } else {
                parse_commutator(text)?.try_map(&mut |s: &String| s.parse::<EdgeSymbol>())?
            };
            let report = proper_commutator_check(&labeled, &tree)?;
            Some((tree, report))
        }
        None => None,
    };

    if json {
        let doc = LabelingJson {
            schema: SCHEMA,
            command: "labeling",
            degree: labeled.degree(),
            edges,
            properness: properness_part.as_ref().map(|(symbols, report)| PropernessJson {
                order: symbols.iter().map(|s| s.to_string()).collect(),
                proper: report.proper.clone(),
                all_proper: report.all_proper,
                gamma_vertices: report.gamma.vertex_count,
                gamma_trivalent: report.gamma.trivalent_count,
                gamma_univalent: report.gamma.univalent_count,
                gamma_unchanged: report.gamma.unchanged,
            }),
            certificate: certificate_part.as_ref().map(|(tree, report)| CertificateJson {
                commutator: tree.to_string(),
                monomials: report.monomial_count,
                proper_monomials: report.proper_count,
                coefficient: report.proper_coefficient,
                proper_monomial: report
                    .proper_monomial
                    .as_ref()
                    .map(|m| m.iter().map(|s| s.to_string()).collect()),
                ok: report.ok(),
            }),
        };
        println!("{}", to_json(&doc)?);
    } else {
        println!("degree: {}", labeled.degree());
        let edge_list: Vec<String> = edges
            .iter()
            .map(|e| format!("{}({},{})", e.symbol, e.endpoints[0], e.endpoints[1]))
            .collect();
        println!("edges: {}", edge_list.join(" "));
        if let Some((_, report)) = &properness_part {
            for (p, is_proper) in report.proper.iter().enumerate() {
                println!("vertex {}: {}", p + 1, if *is_proper { "proper" } else { "improper" });
            }
            println!("all proper: {}", report.all_proper);
            if report.gamma.unchanged {
                println!(
                    "gamma: unchanged ({} trivalent vertices)",
                    report.gamma.trivalent_count
                );
            } else {
                println!(
                    "gamma: split into {} trivalent + {} univalent vertices",
                    report.gamma.trivalent_count, report.gamma.univalent_count
                );
            }
        }
        if let Some((tree, report)) = &certificate_part {
            println!("commutator: {tree}");
            println!("monomials: {}", report.monomial_count);
            println!("proper monomials: {}", report.proper_count);
            if let Some(c) = report.proper_coefficient {
                println!("coefficient: {c}");
            }
            if let Some(m) = &report.proper_monomial {
                let names: Vec<String> = m.iter().map(|s| s.to_string()).collect();
                println!("proper monomial: {}", names.join(" "));
            }
            println!("certificate: {}", if report.ok() { "ok" } else { "FAILED" });
        }
    }

    if let Some((_, report)) = &certificate_part {
        if !report.ok() {
            return Err(Error::verification(
                "the bracket word does not certify a unique proper ordering",
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// selfcheck
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SelfcheckJson {
    schema: u32,
    command: &'static str,
    results: Vec<SuiteJson>,
    ok: bool,
}

#[derive(Serialize)]
struct SuiteJson {
    suite: String,
    ok: bool,
    detail: String,
}

fn run_selfcheck(suite: Option<&str>, json: bool) -> Result<()> {
    let names: Vec<&str> = match suite {
        Some(name) => {
            if !SUITE_NAMES.contains(&name) {
                return Err(Error::invalid(format!(
                    "unknown suite {name:?}; known suites: {}",
                    SUITE_NAMES.join(", ")
                )));
            }
            vec![name]
        }
        None => SUITE_NAMES.to_vec(),
    };
    let mut results = Vec::with_capacity(names.len());
    let mut failures = 0usize;
    for name in names {
        match run_suite(name) {
            Ok(detail) => results.push(SuiteJson { suite: name.to_string(), ok: true, detail }),
            Err(e) => {
                failures += 1;
                results.push(SuiteJson { suite: name.to_string(), ok: false, detail: e.to_string() });
            }
        }
    }
    if json {
        let doc = SelfcheckJson {
            schema: SCHEMA,
            command: "selfcheck",
            ok: failures == 0,
            results,
        };
        println!("{}", to_json(&doc)?);
    } else {
        for r in &results {
            println!("{} {}: {}", if r.ok { "PASS" } else { "FAIL" }, r.suite, r.detail);
        }
    }
    if failures > 0 {
        return Err(Error::verification(format!("{failures} verification suite(s) failed")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// plumbing
// ---------------------------------------------------------------------------

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::invalid(format!("cannot parse {}: {e}", path.display())))
}

fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    serde_json::to_string_pretty(doc).map_err(|e| Error::invalid(format!("JSON encoding: {e}")))
}
