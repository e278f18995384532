use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bramble_core::congestion::{
    build_reduced_instance, route_via_bramble, RouteOptions, RouteOutcome,
};
use bramble_core::ddp::{dichotomy_check, solve_exact, DdpInstance, Dichotomy, SolveOutcome};
use bramble_core::lll::{
    build_intersection_graph, check_poly_lll_condition, degeneracy, rainbow_independent_set,
    RainbowOutcome,
};
use bramble_core::obstruction::{
    bramble_order_exact, build_path_system, congestion, verify_bramble, OrderOutcome,
};
use bramble_core::pipeline::{
    build_conflict_graphs, classify_case, compute_parameters, ParameterInputs,
};
use bramble_core::toolkit::{
    export_dot, gen_complete, gen_planted_bramble_instance, gen_random_digraph, parse_document,
    reverify, to_canonical_json, CaseDocument, Certificate, CertificateDocument, ConflictDocument,
    FamiliesDocument, GraphDocument, InstanceDocument, Provenance, Terminals, Versioned,
};
use bramble_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;

/// Certificates for digraph obstructions and congestion routing.
///
/// Exit codes: 0 verified success, 1 certified negative, 2 input error,
/// 3 cap or guard exceeded.
#[derive(Parser, Debug)]
#[command(name = "bramble", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Io {
    /// Input document (stdin when omitted).
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Out {
    /// Output file (stdout when omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Complete,
    Random,
    Planted,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the bramble of an instance document.
    VerifyBramble(Io),
    /// Exact bramble order by bounded search.
    Order {
        #[command(flatten)]
        io: Io,
        /// Largest hitting-set size searched.
        #[arg(long, default_value_t = 20)]
        cap: usize,
    },
    /// Build a (k, k)-path system in a 2k²-strong digraph.
    BuildPathSystem {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        skip_precondition_checks: bool,
    },
    /// Congestion-2 reduction of an instance with a bramble and terminals.
    ReduceCongestion(Io),
    /// Route the terminal pairs through the bramble with congestion 2⌈c/2⌉.
    Route {
        #[command(flatten)]
        io: Io,
        /// Search node cap of the exact solver.
        #[arg(long, default_value_t = 2_000_000)]
        cap: u64,
        /// Declared bramble congestion (measured when omitted).
        #[arg(long)]
        c: Option<usize>,
        #[arg(long)]
        skip_precondition_checks: bool,
    },
    /// Exact (k, c) disjoint-paths search.
    SolveDdp {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 2_000_000)]
        cap: u64,
        /// Congestion budget (the document's budget when omitted).
        #[arg(long)]
        c: Option<usize>,
    },
    /// k disjoint paths into and out of the bramble, or a small separator.
    Dichotomy {
        #[command(flatten)]
        io: Io,
        /// Defaults to the number of terminal pairs.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Degeneracy and elimination order of an undirected graph document.
    Degeneracy(Io),
    /// Intersection graph of path families, or conflict graphs with --d1/--d2.
    Intersect {
        #[command(flatten)]
        io: Io,
        #[arg(long, requires = "d2")]
        d1: Option<u64>,
        #[arg(long, requires = "d1")]
        d2: Option<u64>,
    },
    /// Independent transversal of a partitioned conflict graph.
    LllRis {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Resampling cap (100·r·t when omitted).
        #[arg(long)]
        cap: Option<u64>,
        /// Check the LLL condition at this epsilon first.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        skip_precondition_checks: bool,
    },
    /// Evaluate t^(1-ε) >= (e·4b(r-1))^(1+ε).
    LllCheck {
        #[command(flatten)]
        out: Out,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        eps: f64,
    },
    /// Parameter chain of the congestion-8 argument.
    Params {
        #[command(flatten)]
        out: Out,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        c_a: f64,
        #[arg(long, default_value_t = 1.0)]
        c_t: f64,
        /// Logarithm base (natural when omitted).
        #[arg(long)]
        log_base: Option<f64>,
    },
    /// Three-case classification of conflict graphs.
    ClassifyCase(Io),
    /// Generate an instance document.
    Gen {
        #[command(flatten)]
        out: Out,
        #[arg(long, value_enum, default_value_t = GenKind::Planted)]
        kind: GenKind,
        #[arg(long, default_value_t = 9)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        c: usize,
        /// Number of bags (4k² + 2(k-1) when omitted).
        #[arg(long)]
        bags: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Graphviz rendering of an instance document.
    ExportDot(Io),
    /// Re-verify a certificate document.
    VerifyCert(Io),
}

/// Text written to the output and the exit code.
struct Outcome {
    code: u8,
    text: String,
}

impl Outcome {
    fn new(code: u8, text: String) -> Self {
        Outcome { code, text }
    }

    fn json<T: serde::Serialize>(code: u8, value: &T) -> Self {
        Outcome::new(code, to_canonical_json(value))
    }

    /// Emits a certificate; a failing self-check is a bug, not a verdict.
    fn certificate(
        code: u8,
        cert: Certificate,
        command: &str,
        seed: Option<u64>,
    ) -> Result<Self, Error> {
        let doc = CertificateDocument::new(cert, Provenance::new(command, seed));
        if !doc.verified {
            let why = reverify(&doc.certificate).err().unwrap_or_default();
            return Err(Error::Internal(format!(
                "emitted certificate fails verification: {why}"
            )));
        }
        Ok(Outcome::json(code, &doc))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Precondition(_) => EXIT_NEGATIVE,
        Error::GuardExceeded(_) | Error::Precision(_) => EXIT_CAP,
        Error::VertexOutOfRange { .. } | Error::InvalidInput(_) | Error::Internal(_) => EXIT_INPUT,
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Error> {
    match path {
        Some(p) => {
            fs::read_to_string(p).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display())))
        }
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::InvalidInput(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn load<T: DeserializeOwned + Versioned>(io: &Io) -> Result<T, Error> {
    parse_document(&read_input(&io.input)?)
}

fn write_output(path: &Option<PathBuf>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn output_path(cmd: &Command) -> &Option<PathBuf> {
    match cmd {
        Command::VerifyBramble(io)
        | Command::ReduceCongestion(io)
        | Command::Degeneracy(io)
        | Command::ClassifyCase(io)
        | Command::ExportDot(io)
        | Command::VerifyCert(io) => &io.output,
        Command::Order { io, .. }
        | Command::BuildPathSystem { io, .. }
        | Command::Route { io, .. }
        | Command::SolveDdp { io, .. }
        | Command::Dichotomy { io, .. }
        | Command::Intersect { io, .. }
        | Command::LllRis { io, .. } => &io.output,
        Command::LllCheck { out, .. } | Command::Params { out, .. } | Command::Gen { out, .. } => {
            &out.output
        }
    }
}

fn run(cmd: &Command) -> Result<Outcome, Error> {
    match cmd {
        Command::VerifyBramble(io) => {
            let doc: InstanceDocument = load(io)?;
            let bags = doc.bags()?;
            let report = verify_bramble(&doc.digraph, bags)?;
            if report.is_valid() {
                let cert = Certificate::Bramble {
                    digraph: doc.digraph.clone(),
                    bags: bags.to_vec(),
                    congestion: congestion(bags),
                    order: None,
                };
                Outcome::certificate(EXIT_OK, cert, "verify-bramble", None)
            } else {
                Ok(Outcome::json(EXIT_NEGATIVE, &report))
            }
        }
        Command::Order { io, cap } => {
            let doc: InstanceDocument = load(io)?;
            let bags = doc.bags()?;
            let outcome = bramble_order_exact(&doc.digraph, bags, *cap)?;
            let code = match outcome {
                OrderOutcome::Exact { .. } => EXIT_OK,
                OrderOutcome::ExceedsCap { .. } => EXIT_CAP,
            };
            if let Some(v) = verify_bramble(&doc.digraph, bags)?.violation {
                return Err(Error::Precondition(format!("bags are not a bramble: {v}")));
            }
            let cert = Certificate::Bramble {
                digraph: doc.digraph.clone(),
                bags: bags.to_vec(),
                congestion: congestion(bags),
                order: Some(outcome),
            };
            Outcome::certificate(code, cert, "order", None)
        }
        Command::BuildPathSystem {
            io,
            k,
            skip_precondition_checks,
        } => {
            let doc: InstanceDocument = load(io)?;
            let system = build_path_system(&doc.digraph, *k, !skip_precondition_checks)?;
            let cert = Certificate::PathSystem {
                digraph: doc.digraph,
                system,
            };
            Outcome::certificate(EXIT_OK, cert, "build-path-system", None)
        }
        Command::ReduceCongestion(io) => {
            let doc: InstanceDocument = load(io)?;
            let t = doc.terminals()?;
            let reduced = build_reduced_instance(&doc.digraph, doc.bags()?, &t.sources, &t.sinks)?;
            let cert = Certificate::ReducedInstance {
                digraph: doc.digraph.clone(),
                reduced,
            };
            Outcome::certificate(EXIT_OK, cert, "reduce-congestion", None)
        }
        Command::Route {
            io,
            cap,
            c,
            skip_precondition_checks,
        } => {
            let doc: InstanceDocument = load(io)?;
            let t = doc.terminals()?;
            let bags = doc.bags()?;
            let c = c.unwrap_or_else(|| congestion(bags).max(1));
            let checks = !skip_precondition_checks;
            let opts = RouteOptions {
                node_cap: *cap,
                check_strong: checks,
                check_bramble: checks,
                check_size: checks,
            };
            match route_via_bramble(&doc.digraph, bags, &t.sources, &t.sinks, c, opts)? {
                RouteOutcome::Routed {
                    solution, budget, ..
                } => {
                    let instance = DdpInstance::new(
                        doc.digraph.clone(),
                        t.sources.clone(),
                        t.sinks.clone(),
                        budget,
                    )?;
                    Outcome::certificate(
                        EXIT_OK,
                        Certificate::DdpSolution { instance, solution },
                        "route",
                        None,
                    )
                }
                RouteOutcome::Infeasible { dichotomy } => {
                    negative_dichotomy(*dichotomy, None, t.sources.len(), "route")
                }
                RouteOutcome::CapExceeded { nodes } => Ok(Outcome::json(
                    EXIT_CAP,
                    &serde_json::json!({ "outcome": "cap_exceeded", "nodes": nodes }),
                )),
            }
        }
        Command::SolveDdp { io, cap, c } => {
            let doc: InstanceDocument = load(io)?;
            let Terminals {
                sources,
                sinks,
                budget,
            } = doc.terminals()?.clone();
            let instance = DdpInstance::new(doc.digraph, sources, sinks, c.unwrap_or(budget))?;
            match solve_exact(&instance, *cap) {
                SolveOutcome::Solved { solution, .. } => Outcome::certificate(
                    EXIT_OK,
                    Certificate::DdpSolution { instance, solution },
                    "solve-ddp",
                    None,
                ),
                other => {
                    let code = if matches!(other, SolveOutcome::Infeasible { .. }) {
                        EXIT_NEGATIVE
                    } else {
                        EXIT_CAP
                    };
                    Ok(Outcome::json(code, &other))
                }
            }
        }
        Command::Dichotomy { io, k } => {
            let doc: InstanceDocument = load(io)?;
            let t = doc.terminals()?;
            let k = k.unwrap_or(t.sources.len());
            match dichotomy_check(&doc.digraph, doc.bags()?, &t.sources, &t.sinks, k)? {
                linked @ Dichotomy::Linked { .. } => Ok(Outcome::json(EXIT_OK, &linked)),
                separated => negative_dichotomy(separated, Some(&doc), k, "dichotomy"),
            }
        }
        Command::Degeneracy(io) => {
            let doc: GraphDocument = load(io)?;
            let (d, order) = degeneracy(&doc.graph);
            let cert = Certificate::Degeneracy {
                graph: doc.graph,
                degeneracy: d,
                order,
            };
            Outcome::certificate(EXIT_OK, cert, "degeneracy", None)
        }
        Command::Intersect { io, d1, d2 } => {
            let doc: FamiliesDocument = load(io)?;
            match (d1, d2) {
                (Some(d1), Some(d2)) => Ok(Outcome::json(
                    EXIT_OK,
                    &build_conflict_graphs(&doc.families, *d1, *d2)?,
                )),
                _ => {
                    let fams: Vec<Vec<Vec<usize>>> =
                        doc.families.iter().map(|f| f.paths.clone()).collect();
                    Ok(Outcome::json(EXIT_OK, &build_intersection_graph(&fams)))
                }
            }
        }
        Command::LllRis {
            io,
            seed,
            cap,
            eps,
            skip_precondition_checks,
        } => {
            let doc: ConflictDocument = load(io)?;
            let p = doc.conflict;
            let cap = cap.unwrap_or(100 * (p.r() * p.t()) as u64);
            let eps = if *skip_precondition_checks {
                None
            } else {
                *eps
            };
            match rainbow_independent_set(&p, *seed, cap, eps)? {
                RainbowOutcome::Found { selection, .. } => {
                    let cert = Certificate::RainbowSelection {
                        conflict: p,
                        selection,
                    };
                    Outcome::certificate(EXIT_OK, cert, "lll-ris", Some(*seed))
                }
                capped => Ok(Outcome::json(EXIT_CAP, &capped)),
            }
        }
        Command::LllCheck { t, b, r, eps, .. } => {
            let check = check_poly_lll_condition(*t, *b, *r, *eps)?;
            let code = if check.passes { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Outcome::json(code, &check))
        }
        Command::Params {
            k,
            alpha,
            eps,
            c_a,
            c_t,
            log_base,
            ..
        } => {
            let inputs = ParameterInputs {
                k: *k,
                alpha: *alpha,
                epsilon: *eps,
                c_a: *c_a,
                c_t: *c_t,
                log_base: *log_base,
            };
            let params = compute_parameters(inputs)?;
            Outcome::certificate(EXIT_OK, Certificate::Parameters(params), "params", None)
        }
        Command::ClassifyCase(io) => {
            let doc: CaseDocument = load(io)?;
            let report = classify_case(&doc.case)?;
            let cert = Certificate::CaseReport {
                input: doc.case,
                report,
            };
            Outcome::certificate(EXIT_OK, cert, "classify-case", None)
        }
        Command::Gen {
            kind,
            n,
            p,
            k,
            c,
            bags,
            seed,
            ..
        } => {
            let doc = match kind {
                GenKind::Complete => InstanceDocument::new(gen_complete(*n)),
                GenKind::Random => InstanceDocument::new(gen_random_digraph(*n, *p, *seed)),
                GenKind::Planted => {
                    let m = bags
                        .unwrap_or_else(|| bramble_core::congestion::bramble_size_threshold(*k));
                    gen_planted_bramble_instance(*k, *c, m, *seed)?
                }
            };
            Ok(Outcome::json(EXIT_OK, &doc))
        }
        Command::ExportDot(io) => {
            let doc: InstanceDocument = load(io)?;
            Ok(Outcome::new(EXIT_OK, export_dot(&doc)))
        }
        Command::VerifyCert(io) => {
            let doc: CertificateDocument = load(io)?;
            match reverify(&doc.certificate) {
                Ok(()) if doc.verified => Ok(Outcome::json(
                    EXIT_OK,
                    &serde_json::json!({ "kind": doc.certificate.kind(), "verified": true }),
                )),
                Ok(()) => Ok(Outcome::json(
                    EXIT_NEGATIVE,
                    &serde_json::json!({
                        "kind": doc.certificate.kind(),
                        "verified": false,
                        "reason": "certificate passes but was emitted with verified = false",
                    }),
                )),
                Err(reason) => Ok(Outcome::json(
                    EXIT_NEGATIVE,
                    &serde_json::json!({ "kind": doc.certificate.kind(), "verified": false, "reason": reason }),
                )),
            }
        }
    }
}

/// Negative routing or dichotomy verdict: a separator certificate when the
/// Menger check found one, the full dichotomy otherwise.
fn negative_dichotomy(
    dichotomy: Dichotomy,
    doc: Option<&InstanceDocument>,
    k: usize,
    command: &str,
) -> Result<Outcome, Error> {
    match (dichotomy, doc) {
        (Dichotomy::Separated(ev), Some(doc)) => {
            let cert = Certificate::Separator {
                digraph: doc.digraph.clone(),
                certificate: ev.certificate,
                k: Some(k),
                side: Some(ev.side),
            };
            Outcome::certificate(EXIT_NEGATIVE, cert, command, None)
        }
        (other, _) => Ok(Outcome::json(
            EXIT_NEGATIVE,
            &serde_json::json!({
                "outcome": "infeasible",
                "reduced_dichotomy": other,
            }),
        )),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, text) = match run(&cli.command) {
        Ok(o) => (o.code, o.text),
        Err(e) => {
            eprintln!("bramble: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    if let Err(e) = write_output(output_path(&cli.command), &text) {
        eprintln!("bramble: cannot write output: {e}");
        return ExitCode::from(EXIT_INPUT);
    }
    ExitCode::from(code)
}
