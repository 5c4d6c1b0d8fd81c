//! `obd` — command-line workbench for open books, binding sums, Heegaard
//! diagrams and combinatorial Floer computations.
//!
//! Exit codes: 0 success, 1 domain error (invalid input), 2 verification
//! failure (a check that ran and came out false), 64 usage error.

mod render;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use obd_core::data;
use obd_core::floer::enumerate::{complex_from_diagram, enumerate_arrows, enumerate_generators};
use obd_core::floer::{ChainDoc, ChainF2, Complex, Tuple, Vanishing};
use obd_core::heegaard::build::build_diagram;
use obd_core::heegaard::HeegaardDiagram;
use obd_core::openbook::{
    binding_sum, destabilize, positive_stabilize, BindingSumSpec, OpenBook, Sign, StabilizeArc,
    TwistWord,
};
use obd_core::page::twist::{apply_monodromy, dehn_twist};
use obd_core::page::CurveSystem;
use obd_core::spectral::{
    order_upper_bound, verify_filtered_witness, FilteredComplex, FilteredWitness, OrderBound,
    WitnessDoc,
};

#[derive(Parser)]
#[command(name = "obd", version, about = "open book workbench", disable_help_subcommand = true)]
struct Cli {
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Symbolic open books: sums, stabilization, bookkeeping.
    #[command(subcommand)]
    Openbook(OpenbookCmd),
    /// Combinatorial pages: twists, pushoffs, intersections.
    #[command(subcommand)]
    Page(PageCmd),
    /// Heegaard diagrams: construction, validation, homology.
    #[command(subcommand)]
    Diagram(DiagramCmd),
    /// The F2 chain complex: generators, arrows, vanishing.
    #[command(subcommand)]
    Floer(FloerCmd),
    /// Weighted differentials and order bounds.
    #[command(subcommand)]
    Spectral(SpectralCmd),
    /// Bundled datasets.
    #[command(subcommand)]
    Data(DataCmd),
}

#[derive(Subcommand)]
enum OpenbookCmd {
    /// Binding sum of two open books along paired boundary components.
    Sum(SumArgs),
    /// Plumb a positive Hopf band.
    Stabilize(StabArgs),
    /// Remove a declared band and its positive twist.
    Destabilize(StabArgs),
    /// Print page invariants and the monodromy word.
    Show(ShowArgs),
}

#[derive(Args)]
struct SumArgs {
    #[arg(long = "in")]
    input: String,
    #[arg(long = "in2")]
    input2: String,
    /// JSON file: {"pairs": [["bd0","bd0"], ...]}
    #[arg(long)]
    spec: String,
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct StabArgs {
    #[arg(long = "in")]
    input: String,
    /// JSON file: {"feet": ["bd0","bd0"]} or {"curve": "stab0"}
    #[arg(long)]
    spec: String,
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct ShowArgs {
    #[arg(long = "in")]
    input: String,
}

#[derive(Subcommand)]
enum PageCmd {
    /// One Dehn twist applied to selected paths.
    Twist(TwistArgs),
    /// Apply a twist word right to left.
    Apply(ApplyArgs),
    /// Parallel copy of an arc with one marked crossing.
    Pushoff(PushoffArgs),
    /// Transverse crossings of two registered paths.
    Intersect(IntersectArgs),
}

#[derive(Args)]
struct TwistArgs {
    #[arg(long = "in")]
    input: String,
    #[arg(long)]
    curve: String,
    /// "+1" or "-1"
    #[arg(long, default_value = "+1", allow_hyphen_values = true)]
    sign: String,
    /// Comma-separated path ids.
    #[arg(long)]
    targets: String,
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct ApplyArgs {
    #[arg(long = "in")]
    input: String,
    /// Inline word JSON: [["curve", 1, 2], ...]
    #[arg(long, conflicts_with = "openbook")]
    word: Option<String>,
    /// Take the word from an open book file's monodromy.
    #[arg(long)]
    openbook: Option<String>,
    #[arg(long)]
    targets: String,
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct PushoffArgs {
    #[arg(long = "in")]
    input: String,
    #[arg(long)]
    arc: String,
    /// Id for the new path.
    #[arg(long)]
    id: String,
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct IntersectArgs {
    #[arg(long = "in")]
    input: String,
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
}

#[derive(Subcommand)]
enum DiagramCmd {
    /// Build the Heegaard diagram of an open book on a page.
    Build(BuildArgs),
    /// Run every structural invariant; report failures.
    Validate(DiagramArgs),
    /// Niceness: every unmarked region a bigon or square.
    Nice(DiagramArgs),
    /// First homology of the underlying 3-manifold.
    H1(DiagramArgs),
    /// Translate between tuples and point selections.
    Tuples(TuplesArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Curve system file carrying the arcs and twist curves.
    #[arg(long)]
    page: String,
    /// Comma-separated basis arc ids.
    #[arg(long)]
    basis: String,
    #[arg(long, conflicts_with = "openbook")]
    word: Option<String>,
    #[arg(long)]
    openbook: Option<String>,
    #[arg(long)]
    out: String,
    /// Render the doubled curve system for visual cross-checking.
    #[arg(long = "emit-svg")]
    emit_svg: Option<String>,
}

#[derive(Args)]
struct DiagramArgs {
    #[arg(long)]
    diagram: String,
}

#[derive(Args)]
struct TuplesArgs {
    #[arg(long)]
    diagram: String,
    /// Tuple like 1,2,1 to resolve into point ids.
    #[arg(long)]
    tuple: Option<String>,
    /// Comma-separated point ids to express as a tuple.
    #[arg(long)]
    points: Option<String>,
}

#[derive(Subcommand)]
enum FloerCmd {
    /// Generators in lexicographic tuple order.
    Gens(SourceArgs),
    /// Every empty bigon and rectangle.
    Arrows(SourceArgs),
    /// The differential as arrow counts per generator.
    Diff(SourceArgs),
    /// Check the differential squares to zero (exit 2 on failure).
    D2(SourceArgs),
    /// Decide vanishing of a class; print a witness or certificate.
    Vanish(VanishArgs),
    /// Verify d(chain) = target by direct summation (exit 2 on false).
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SourceArgs {
    #[arg(long, conflicts_with = "complex")]
    diagram: Option<String>,
    #[arg(long)]
    complex: Option<String>,
}

#[derive(Args)]
struct VanishArgs {
    #[arg(long, conflicts_with = "complex")]
    diagram: Option<String>,
    #[arg(long)]
    complex: Option<String>,
    /// Target class as a tuple, e.g. 1,1,1,1,1; defaults to the
    /// diagram's contact generator.
    #[arg(long)]
    contact: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    complex: String,
    /// Chain file: {"chain": [[..], ...], "target": [..]?}
    #[arg(long)]
    chain: String,
    /// Overrides the chain file's target.
    #[arg(long)]
    target: Option<String>,
}

#[derive(Subcommand)]
enum SpectralCmd {
    /// Least k admitting a layered witness.
    Bound(BoundArgs),
    /// Verify a layered witness (exit 2 on failure).
    Verify(SpectralVerifyArgs),
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    complex: String,
    /// Target as a tuple, e.g. 1,1,1,1,1.
    #[arg(long)]
    contact: String,
    #[arg(long)]
    kmax: Option<usize>,
}

#[derive(Args)]
struct SpectralVerifyArgs {
    #[arg(long)]
    complex: String,
    #[arg(long)]
    witness: String,
}

#[derive(Subcommand)]
enum DataCmd {
    /// Table of bundled datasets.
    List,
    /// Print one dataset's payload.
    Show {
        #[arg(long)]
        name: String,
    },
}

enum Failure {
    Domain(String),
    Verification(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{path}: {e}")))
}

fn parse_tuple(s: &str) -> Result<Tuple, Failure> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<u32>()
                .map_err(|e| Failure::Domain(format!("bad tuple entry {x:?}: {e}")))
        })
        .collect()
}

fn parse_word(
    args_word: &Option<String>,
    args_openbook: &Option<String>,
) -> Result<TwistWord, Failure> {
    if let Some(w) = args_word {
        let raw: Vec<(String, i32, u32)> =
            serde_json::from_str(w).map_err(|e| Failure::Domain(format!("bad word: {e}")))?;
        Ok(TwistWord(
            raw.into_iter()
                .map(|(curve, sign, mult)| obd_core::openbook::TwistLetter {
                    curve,
                    sign: if sign >= 0 {
                        Sign::Positive
                    } else {
                        Sign::Negative
                    },
                    mult,
                })
                .collect(),
        ))
    } else if let Some(path) = args_openbook {
        let ob = OpenBook::from_json(&read_file(path)?)?;
        Ok(ob.monodromy)
    } else {
        Err(Failure::Domain("need --word or --openbook".into()))
    }
}

fn load_complex(args: &SourceArgs) -> Result<Complex, Failure> {
    match (&args.diagram, &args.complex) {
        (Some(d), _) => {
            let diagram = HeegaardDiagram::from_json(&read_file(d)?)?;
            Ok(complex_from_diagram(&diagram)?)
        }
        (None, Some(c)) => Ok(Complex::from_json(&read_file(c)?)?),
        (None, None) => Err(Failure::Domain("need --diagram or --complex".into())),
    }
}

fn tuple_strings(ts: &[Tuple]) -> Vec<String> {
    ts.iter().map(|t| obd_core::floer::tuple_string(t)).collect()
}

fn run(cli: Cli) -> CmdResult {
    let json = cli.json;
    match cli.command {
        Cmd::Openbook(cmd) => run_openbook(cmd, json),
        Cmd::Page(cmd) => run_page(cmd, json),
        Cmd::Diagram(cmd) => run_diagram(cmd, json),
        Cmd::Floer(cmd) => run_floer(cmd, json),
        Cmd::Spectral(cmd) => run_spectral(cmd, json),
        Cmd::Data(cmd) => run_data(cmd, json),
    }
}

fn run_openbook(cmd: OpenbookCmd, json: bool) -> CmdResult {
    match cmd {
        OpenbookCmd::Sum(args) => {
            let a = OpenBook::from_json(&read_file(&args.input)?)?;
            let b = OpenBook::from_json(&read_file(&args.input2)?)?;
            let spec: BindingSumSpec = serde_json::from_str(&read_file(&args.spec)?)
                .map_err(|e| Failure::Domain(format!("bad sum spec: {e}")))?;
            let sum = binding_sum(&a, &b, &spec)?;
            std::fs::write(&args.out, sum.to_json())
                .map_err(|e| Failure::Domain(e.to_string()))?;
            report_book(&sum, json);
            Ok(())
        }
        OpenbookCmd::Stabilize(args) => {
            let a = OpenBook::from_json(&read_file(&args.input)?)?;
            #[derive(serde::Deserialize)]
            struct FeetSpec {
                feet: (String, String),
            }
            let spec: FeetSpec = serde_json::from_str(&read_file(&args.spec)?)
                .map_err(|e| Failure::Domain(format!("bad stabilize spec: {e}")))?;
            let out = positive_stabilize(&a, &StabilizeArc { feet: spec.feet })?;
            std::fs::write(&args.out, out.to_json())
                .map_err(|e| Failure::Domain(e.to_string()))?;
            report_book(&out, json);
            Ok(())
        }
        OpenbookCmd::Destabilize(args) => {
            let a = OpenBook::from_json(&read_file(&args.input)?)?;
            #[derive(serde::Deserialize)]
            struct CurveSpec {
                curve: String,
            }
            let spec: CurveSpec = serde_json::from_str(&read_file(&args.spec)?)
                .map_err(|e| Failure::Domain(format!("bad destabilize spec: {e}")))?;
            let out = destabilize(&a, &spec.curve)?;
            std::fs::write(&args.out, out.to_json())
                .map_err(|e| Failure::Domain(e.to_string()))?;
            report_book(&out, json);
            Ok(())
        }
        OpenbookCmd::Show(args) => {
            let a = OpenBook::from_json(&read_file(&args.input)?)?;
            report_book(&a, json);
            Ok(())
        }
    }
}

fn report_book(ob: &OpenBook, json: bool) {
    let (g, b, chi, len) = ob.page_invariants();
    if json {
        println!(
            "{}",
            serde_json::json!({
                "schema": obd_core::SCHEMA,
                "genus": g, "boundary": b, "euler": chi, "word_length": len,
                "curves": ob.curves.len(),
                "navels": ob.navels.len(),
            })
        );
    } else {
        println!(
            "page: genus {g}, {b} boundary circles, euler {chi}; monodromy length {len}; {} curves declared",
            ob.curves.len()
        );
    }
}

fn run_page(cmd: PageCmd, json: bool) -> CmdResult {
    match cmd {
        PageCmd::Twist(args) => {
            let sys = CurveSystem::from_json(&read_file(&args.input)?)?;
            let sign = match args.sign.as_str() {
                "+1" | "1" | "+" => Sign::Positive,
                "-1" | "-" => Sign::Negative,
                other => return Err(Failure::Domain(format!("bad sign {other:?}"))),
            };
            let targets: Vec<&str> = args.targets.split(',').map(str::trim).collect();
            let out = dehn_twist(&sys, &args.curve, sign, &targets)?;
            std::fs::write(&args.out, out.to_json())
                .map_err(|e| Failure::Domain(e.to_string()))?;
            if json {
                println!(
                    "{}",
                    serde_json::json!({"schema": obd_core::SCHEMA, "curve": args.curve, "targets": targets})
                );
            } else {
                println!("twisted {} path(s) along {}", targets.len(), args.curve);
            }
            Ok(())
        }
        PageCmd::Apply(args) => {
            let sys = CurveSystem::from_json(&read_file(&args.input)?)?;
            let word = parse_word(&args.word, &args.openbook)?;
            let targets: Vec<&str> = args.targets.split(',').map(str::trim).collect();
            let out = apply_monodromy(&sys, &word, &targets)?;
            std::fs::write(&args.out, out.to_json())
                .map_err(|e| Failure::Domain(e.to_string()))?;
            if json {
                println!(
                    "{}",
                    serde_json::json!({"schema": obd_core::SCHEMA, "word_length": word.len()})
                );
            } else {
                println!("applied word of length {}", word.len());
            }
            Ok(())
        }
        PageCmd::Pushoff(args) => {
            let sys = CurveSystem::from_json(&read_file(&args.input)?)?;
            let out = sys.pushoff(&args.arc, &args.id)?;
            std::fs::write(&args.out, out.to_json())
                .map_err(|e| Failure::Domain(e.to_string()))?;
            if json {
                println!(
                    "{}",
                    serde_json::json!({"schema": obd_core::SCHEMA, "arc": args.arc, "pushoff": args.id})
                );
            } else {
                println!("pushed {} off to {}", args.arc, args.id);
            }
            Ok(())
        }
        PageCmd::Intersect(args) => {
            let sys = CurveSystem::from_json(&read_file(&args.input)?)?;
            let hits = sys.intersections(&args.p, &args.q)?;
            let alg: i64 = hits.iter().map(|h| h.sign as i64).sum();
            if json {
                let list: Vec<_> = hits
                    .iter()
                    .map(|h| serde_json::json!({"on_p": h.on_p, "on_q": h.on_q, "sign": h.sign}))
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({"schema": obd_core::SCHEMA, "count": hits.len(), "algebraic": alg, "crossings": list})
                );
            } else {
                println!("{} crossings, algebraic sum {}", hits.len(), alg);
            }
            Ok(())
        }
    }
}

fn run_diagram(cmd: DiagramCmd, json: bool) -> CmdResult {
    match cmd {
        DiagramCmd::Build(args) => {
            let sys = CurveSystem::from_json(&read_file(&args.page)?)?;
            let word = parse_word(&args.word, &args.openbook)?;
            let basis: Vec<&str> = args.basis.split(',').map(str::trim).collect();
            let built = build_diagram(&sys, &basis, &word)?;
            std::fs::write(&args.out, built.diagram.to_json())
                .map_err(|e| Failure::Domain(e.to_string()))?;
            if let Some(svg) = &args.emit_svg {
                std::fs::write(svg, render::svg_of_system(&built.doubled))
                    .map_err(|e| Failure::Domain(e.to_string()))?;
            }
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "schema": obd_core::SCHEMA,
                        "points": built.diagram.points.len(),
                        "curves": built.diagram.n(),
                        "regions": built.diagram.regions.len(),
                        "basepoints": built.diagram.basepoint_count(),
                        "nice": built.diagram.is_nice(),
                    })
                );
            } else {
                println!(
                    "built diagram: {} curves, {} points, {} regions ({} basepointed), nice: {}",
                    built.diagram.n(),
                    built.diagram.points.len(),
                    built.diagram.regions.len(),
                    built.diagram.basepoint_count(),
                    built.diagram.is_nice()
                );
            }
            Ok(())
        }
        DiagramCmd::Validate(args) => {
            let d = HeegaardDiagram::from_json(&read_file(&args.diagram)?)?;
            let rep = d.validate();
            if json {
                println!(
                    "{}",
                    serde_json::json!({"schema": obd_core::SCHEMA, "ok": rep.ok(), "failures": rep.failures})
                );
            } else if rep.ok() {
                println!("diagram validates");
            } else {
                for f in &rep.failures {
                    println!("FAIL {}: {}", f.rule, f.detail);
                }
            }
            if rep.ok() {
                Ok(())
            } else {
                Err(Failure::Verification("diagram invalid".into()))
            }
        }
        DiagramCmd::Nice(args) => {
            let d = HeegaardDiagram::from_json(&read_file(&args.diagram)?)?;
            let cert = d.nice_certificate();
            if json {
                println!(
                    "{}",
                    serde_json::json!({"schema": obd_core::SCHEMA, "nice": cert.is_nice(), "violations": cert.violations})
                );
            } else if cert.is_nice() {
                println!("nice: every unmarked region is a bigon or square");
            } else {
                println!("not nice; violating regions: {:?}", cert.violations);
            }
            Ok(())
        }
        DiagramCmd::H1(args) => {
            let d = HeegaardDiagram::from_json(&read_file(&args.diagram)?)?;
            let h = d.h1_presentation();
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "schema": obd_core::SCHEMA,
                        "matrix": h.matrix.iter().map(|r| r.iter().map(|x| *x as i64).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "factors": h.smith.factors.iter().map(|d| *d as i64).collect::<Vec<_>>(),
                        "free_rank": h.smith.cokernel_rank(),
                        "group": h.group_string(),
                    })
                );
            } else {
                println!("H1 = {}", h.group_string());
            }
            Ok(())
        }
        DiagramCmd::Tuples(args) => {
            let d = HeegaardDiagram::from_json(&read_file(&args.diagram)?)?;
            match (&args.tuple, &args.points) {
                (Some(t), None) => {
                    let tuple = parse_tuple(t)?;
                    let pts = d.generator_of(&tuple)?;
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({"schema": obd_core::SCHEMA, "points": pts})
                        );
                    } else {
                        println!("points: {pts:?}");
                    }
                }
                (None, Some(p)) => {
                    let pts: Vec<usize> = p
                        .split(',')
                        .map(|x| x.trim().parse::<usize>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| Failure::Domain(e.to_string()))?;
                    let tuple = d.tuple_of(&pts)?;
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({"schema": obd_core::SCHEMA, "tuple": tuple})
                        );
                    } else {
                        println!("tuple: {}", obd_core::floer::tuple_string(&tuple));
                    }
                }
                _ => {
                    return Err(Failure::Domain(
                        "need exactly one of --tuple/--points".into(),
                    ))
                }
            }
            Ok(())
        }
    }
}

fn run_floer(cmd: FloerCmd, json: bool) -> CmdResult {
    match cmd {
        FloerCmd::Gens(args) => {
            if let Some(d) = &args.diagram {
                let diagram = HeegaardDiagram::from_json(&read_file(d)?)?;
                let gens = enumerate_generators(&diagram)?;
                let cx = complex_from_diagram(&diagram)?;
                if json {
                    println!(
                        "{}",
                        serde_json::json!({"schema": obd_core::SCHEMA, "count": gens.len(), "generators": cx.generators()})
                    );
                } else {
                    println!("{} generators", gens.len());
                    for t in cx.generators() {
                        println!("  {}", obd_core::floer::tuple_string(t));
                    }
                }
            } else {
                let cx = load_complex(&args)?;
                if json {
                    println!(
                        "{}",
                        serde_json::json!({"schema": obd_core::SCHEMA, "count": cx.len(), "generators": cx.generators()})
                    );
                } else {
                    println!("{} generators", cx.len());
                }
            }
            Ok(())
        }
        FloerCmd::Arrows(args) => {
            if let Some(d) = &args.diagram {
                let diagram = HeegaardDiagram::from_json(&read_file(d)?)?;
                let arrows = enumerate_arrows(&diagram)?;
                if json {
                    let list: Vec<_> = arrows
                        .iter()
                        .map(|a| {
                            serde_json::json!({
                                "from": a.from, "to": a.to,
                                "shape": a.shape.to_string(), "support": a.support,
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::json!({"schema": obd_core::SCHEMA, "arrows": list})
                    );
                } else {
                    for a in &arrows {
                        println!(
                            "{} -> {}  [{}]",
                            obd_core::floer::tuple_string(&a.from),
                            obd_core::floer::tuple_string(&a.to),
                            a.shape
                        );
                    }
                    println!("{} arrows", arrows.len());
                }
            } else {
                let cx = load_complex(&args)?;
                if json {
                    println!("{}", serde_json::to_string(&cx.to_doc()).unwrap());
                } else {
                    println!("{} arrows", cx.arrows().len());
                }
            }
            Ok(())
        }
        FloerCmd::Diff(args) => {
            let cx = load_complex(&args)?;
            if json {
                let rows: Vec<_> = cx
                    .generators()
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let image = cx.boundary_of(&ChainF2::singleton(i));
                        serde_json::json!({"from": t, "to": cx.chain_tuples(&image)})
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({"schema": obd_core::SCHEMA, "differential": rows})
                );
            } else {
                for (i, t) in cx.generators().iter().enumerate() {
                    let image = cx.boundary_of(&ChainF2::singleton(i));
                    println!(
                        "d{} = {}",
                        obd_core::floer::tuple_string(t),
                        tuple_strings(&cx.chain_tuples(&image)).join(" + ")
                    );
                }
            }
            Ok(())
        }
        FloerCmd::D2(args) => {
            let cx = load_complex(&args)?;
            match cx.d_squared_zero() {
                Ok(()) => {
                    println!("d^2 = 0");
                    Ok(())
                }
                Err((x, z)) => Err(Failure::Verification(format!(
                    "d^2 != 0: {} reaches {}",
                    obd_core::floer::tuple_string(&x),
                    obd_core::floer::tuple_string(&z)
                ))),
            }
        }
        FloerCmd::Vanish(args) => {
            let source = SourceArgs {
                diagram: args.diagram.clone(),
                complex: args.complex.clone(),
            };
            let cx = load_complex(&source)?;
            let target = if let Some(t) = &args.contact {
                cx.chain_from_tuples([&parse_tuple(t)?])?
            } else if let Some(dpath) = &args.diagram {
                let diagram = HeegaardDiagram::from_json(&read_file(dpath)?)?;
                let pts = diagram.contact_generator()?;
                let tuple = diagram.tuple_of(&pts)?;
                cx.chain_from_tuples([&tuple])?
            } else {
                return Err(Failure::Domain("need --contact for a bare complex".into()));
            };
            match cx.decide_vanishing(&target)? {
                Vanishing::Vanishes(b) => {
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({"schema": obd_core::SCHEMA, "vanishes": true, "witness": cx.chain_tuples(&b)})
                        );
                    } else {
                        println!(
                            "class vanishes; witness chain of size {}: {}",
                            b.len(),
                            tuple_strings(&cx.chain_tuples(&b)).join(" + ")
                        );
                    }
                }
                Vanishing::NonVanishing(y) => {
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({"schema": obd_core::SCHEMA, "vanishes": false, "certificate": cx.chain_tuples(&y)})
                        );
                    } else {
                        println!(
                            "class does not vanish; cocycle certificate of size {}",
                            y.len()
                        );
                    }
                }
            }
            Ok(())
        }
        FloerCmd::Verify(args) => {
            let cx = Complex::from_json(&read_file(&args.complex)?)?;
            let doc: ChainDoc = serde_json::from_str(&read_file(&args.chain)?)
                .map_err(|e| Failure::Domain(format!("bad chain file: {e}")))?;
            let chain = cx.chain_from_tuples(doc.chain.iter())?;
            let target = if let Some(t) = &args.target {
                cx.chain_from_tuples([&parse_tuple(t)?])?
            } else if let Some(t) = &doc.target {
                cx.chain_from_tuples([t])?
            } else {
                return Err(Failure::Domain("no target given".into()));
            };
            if cx.verify_chain(&chain, &target) {
                if json {
                    println!(
                        "{}",
                        serde_json::json!({"schema": obd_core::SCHEMA, "verified": true})
                    );
                } else {
                    println!("verified: d(chain) = target");
                }
                Ok(())
            } else {
                Err(Failure::Verification("d(chain) != target".into()))
            }
        }
    }
}

fn run_spectral(cmd: SpectralCmd, json: bool) -> CmdResult {
    match cmd {
        SpectralCmd::Bound(args) => {
            let cx = Complex::from_json(&read_file(&args.complex)?)?;
            let fc = FilteredComplex::attach_weights(cx)?;
            let c = fc
                .complex()
                .chain_from_tuples([&parse_tuple(&args.contact)?])?;
            match order_upper_bound(&fc, &c, args.kmax)? {
                OrderBound::Bounded { k, witness } => {
                    if json {
                        let mut w = serde_json::Map::new();
                        for (i, layer) in witness.layers.iter().enumerate() {
                            w.insert(
                                format!("b{i}"),
                                serde_json::to_value(fc.complex().chain_tuples(layer)).unwrap(),
                            );
                        }
                        println!(
                            "{}",
                            serde_json::json!({"schema": obd_core::SCHEMA, "bound": k, "witness": w})
                        );
                    } else {
                        println!("order bound: {k}");
                        for (i, layer) in witness.layers.iter().enumerate() {
                            println!(
                                "  b{i} = {}",
                                tuple_strings(&fc.complex().chain_tuples(layer)).join(" + ")
                            );
                        }
                    }
                }
                OrderBound::NoBoundUpTo { kmax } => {
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({"schema": obd_core::SCHEMA, "bound": null, "kmax": kmax})
                        );
                    } else {
                        println!("no bound up to kmax = {kmax}");
                    }
                }
            }
            Ok(())
        }
        SpectralCmd::Verify(args) => {
            let cx = Complex::from_json(&read_file(&args.complex)?)?;
            let fc = FilteredComplex::attach_weights(cx)?;
            let doc: WitnessDoc = serde_json::from_str(&read_file(&args.witness)?)
                .map_err(|e| Failure::Domain(format!("bad witness file: {e}")))?;
            let w: FilteredWitness = doc.resolve(fc.complex())?;
            let rep = verify_filtered_witness(&fc, &w);
            if rep.ok() {
                if json {
                    println!(
                        "{}",
                        serde_json::json!({"schema": obd_core::SCHEMA, "verified": true})
                    );
                } else {
                    println!("witness verifies ({} layers)", w.layers.len());
                }
                Ok(())
            } else {
                let layers: Vec<usize> = rep.failures.iter().map(|(n, _)| *n).collect();
                Err(Failure::Verification(format!(
                    "witness fails at layers {layers:?}"
                )))
            }
        }
    }
}

fn run_data(cmd: DataCmd, json: bool) -> CmdResult {
    match cmd {
        DataCmd::List => {
            if json {
                let list: Vec<_> = data::bundled_datasets()
                    .iter()
                    .map(|d| {
                        serde_json::json!({
                            "name": d.name, "kind": d.kind.to_string(),
                            "requires_transcription": d.requires_transcription(),
                            "note": d.note,
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({"schema": obd_core::SCHEMA, "datasets": list})
                );
            } else {
                for d in data::bundled_datasets() {
                    let status = if d.requires_transcription() {
                        "PLACEHOLDER"
                    } else {
                        "bundled"
                    };
                    println!("{:<18} {:<10} {:<12} {}", d.name, d.kind, status, d.note);
                }
            }
            Ok(())
        }
        DataCmd::Show { name } => {
            let payload = data::read(&name)
                .ok_or_else(|| Failure::Domain(format!("dataset {name} has no payload")))?;
            println!("{payload}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(64);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
