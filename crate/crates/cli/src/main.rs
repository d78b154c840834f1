use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use flatknot::based_matrix::{
    algebraic_genus_with_witness, based_matrix, characteristic_polynomials, format_t_poly,
    phi_of_matrix, phi_up_to_symmetry, primitive_reduce,
};
use flatknot::moves::{canonical_key, r3_orbit, reduction_moves, sibling_keys};
use flatknot::polynomials::arrow::{arrow_constant_term, arrow_polynomial, format_arrow};
use flatknot::polynomials::jk::{format_jk, jones_krushkal};
use flatknot::slice::{slice_obstructions, slice_status, SearchBudget, SliceMovie, SliceStatus, SliceStep};
use flatknot::surface::carter_surface;
use flatknot::tabulator::{
    distinguish_lazy, parse_battery, record_for_diagram, tabulate_with_progress, ClassFilter,
    InvariantOptions, Table,
};
use flatknot::{GaussDiagram, OuMatching};

#[derive(Parser)]
#[command(name = "flatknot", version, about = "Tabulate flat knots and compute their invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all flat knots up to a crossing number.
    Tabulate(TabulateArgs),
    /// Compute invariants of a knot (reduced to a minimal diagram first).
    Invariants(InvariantsArgs),
    /// Count records of a table not separated by a battery of invariants.
    Distinguish(DistinguishArgs),
    /// Reduce a diagram monotonically to a minimal one.
    Reduce(ReduceArgs),
    /// Print the canonical key of a knot.
    Canon(DiagramArg),
    /// List the R3 orbit of the minimal diagram of a knot.
    Orbit(DiagramArg),
    /// Print the symmetry type and the keys of the four siblings.
    Symmetry(DiagramArg),
    /// Run the slice obstructions and the bounded slice search.
    Slice(SliceArgs),
    /// Describe the Carter surface of a diagram.
    Surface(DiagramArg),
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    All,
    Cc,
    Ac,
}

impl From<Class> for ClassFilter {
    fn from(c: Class) -> Self {
        match c {
            Class::All => ClassFilter::All,
            Class::Cc => ClassFilter::Checkerboard,
            Class::Ac => ClassFilter::AlmostClassical,
        }
    }
}

#[derive(Args)]
struct TabulateArgs {
    #[arg(long)]
    max_crossings: usize,
    #[arg(long, value_enum, default_value = "all")]
    class: Class,
    /// Output JSONL file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also compute algebraic genus, cable-2 arrow and Jones–Krushkal
    /// polynomials for every record.
    #[arg(long)]
    standard: bool,
    /// Also compute the slice status of every record.
    #[arg(long)]
    slice: bool,
}

#[derive(Args)]
struct DiagramArg {
    /// Gauss code (e.g. `O1O2O3U1U3U2`, empty for the unknot) or OU word
    /// with matching (e.g. `OOOUUU [1 3 2]`).
    diagram: String,
}

#[derive(Args)]
struct InvariantsArgs {
    #[command(flatten)]
    input: DiagramArg,
    #[arg(long)]
    all: bool,
    #[arg(long)]
    based_matrix: bool,
    #[arg(long)]
    phi: bool,
    #[arg(long)]
    charpoly: bool,
    #[arg(long)]
    alg_genus: bool,
    #[arg(long)]
    u: bool,
    #[arg(long)]
    arrow: bool,
    #[arg(long)]
    cable2: bool,
    /// Constant term of the 3-strand cabled arrow polynomial (slow).
    #[arg(long)]
    cable3: bool,
    #[arg(long)]
    jk: bool,
    /// Print a full table record as JSON instead.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DistinguishArgs {
    #[arg(long)]
    table: PathBuf,
    /// Comma-separated invariants: phi, u, charpoly, alg_genus, arrow,
    /// arrow2, arrow3, jk, jk_normalized, jk_en.
    #[arg(long)]
    battery: String,
    /// Print the groups of records sharing all battery values.
    #[arg(long)]
    groups: bool,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    input: DiagramArg,
    /// Print the moves applied.
    #[arg(long)]
    moves: bool,
}

#[derive(Args)]
struct SliceArgs {
    /// The knot; optional with `--replay`, where it must match the movie start.
    diagram: Option<String>,
    /// Search budget `SADDLES[,STATES]`.
    #[arg(long)]
    budget: Option<String>,
    /// Only run the obstructions.
    #[arg(long)]
    obstructions_only: bool,
    /// Check a slice movie file instead of searching.
    #[arg(long)]
    replay: Option<PathBuf>,
}

/// Exit status classes: usage errors exit 1, validation failures 2.
enum Failure {
    Usage(String),
    Validation(String),
}

impl From<flatknot::Error> for Failure {
    fn from(e: flatknot::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Tabulate(a) => tabulate(a),
        Command::Invariants(a) => invariants(a),
        Command::Distinguish(a) => distinguish(a),
        Command::Reduce(a) => reduce(a),
        Command::Canon(a) => canon(a),
        Command::Orbit(a) => orbit(a),
        Command::Symmetry(a) => symmetry(a),
        Command::Slice(a) => slice(a),
        Command::Surface(a) => surface(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("invalid: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_diagram(text: &str) -> Result<GaussDiagram, Failure> {
    if text.contains('[') {
        let m: OuMatching = text.parse()?;
        Ok(GaussDiagram::from_ou_matching(&m)?)
    } else {
        Ok(GaussDiagram::parse(text)?)
    }
}

fn parse_knot(text: &str) -> Result<GaussDiagram, Failure> {
    let d = parse_diagram(text)?;
    d.require_knot()?;
    Ok(d)
}

fn minimal(d: &GaussDiagram) -> GaussDiagram {
    flatknot::moves::reduce_monotone(d)
}

fn tabulate(a: TabulateArgs) -> CliResult {
    let mut opts = if a.standard { InvariantOptions::standard() } else { InvariantOptions::default() };
    if a.slice {
        opts.slice = Some(SearchBudget::default());
    }
    let table = tabulate_with_progress(a.max_crossings, a.class.into(), &opts, |n, k| {
        eprintln!("{n} crossings: {k} knots");
    })?;
    match a.out {
        Some(path) => table.write_jsonl(BufWriter::new(File::create(path)?))?,
        None => table.write_jsonl(io::stdout().lock())?,
    }
    Ok(())
}

fn invariants(a: InvariantsArgs) -> CliResult {
    let d = minimal(&parse_knot(&a.input.diagram)?);
    if a.json {
        let opts = InvariantOptions {
            algebraic_genus: a.all || a.alg_genus,
            cable2: a.all || a.cable2,
            cable3: a.cable3,
            jk: a.all || a.jk,
            slice: None,
        };
        let sym = flatknot::SymmetryType::from_keys(&sibling_keys(&d));
        let rec = record_for_diagram("", &d, sym.letter(), &opts)?;
        println!("{}", serde_json::to_string_pretty(&rec).expect("records serialize"));
        return Ok(());
    }
    let none = !(a.based_matrix || a.phi || a.charpoly || a.alg_genus || a.u || a.arrow || a.cable2 || a.cable3 || a.jk);
    let pick = |flag: bool| a.all || flag || none;
    let mut out = io::stdout().lock();
    writeln!(out, "minimal: {}", d.to_gauss_code())?;
    writeln!(out, "crossings: {}", d.n_arrows())?;
    writeln!(out, "genus: {}", carter_surface(&d).genus)?;
    let t = based_matrix(&d)?;
    let prim = primitive_reduce(&t);
    if pick(a.u) {
        writeln!(out, "u: {}", d.u_polynomial())?;
    }
    if a.all || a.based_matrix {
        writeln!(out, "based matrix:\n{t}")?;
        writeln!(out, "primitive based matrix:\n{prim}")?;
    }
    if pick(a.phi) {
        writeln!(out, "phi: {:?}", phi_of_matrix(&prim))?;
        writeln!(out, "phi up to symmetry: {:?}", phi_up_to_symmetry(&d)?)?;
    }
    if a.all || a.charpoly {
        let cp = characteristic_polynomials(&prim);
        writeln!(out, "inner char: {}", format_t_poly(&cp.inner))?;
        writeln!(out, "outer char: {}", format_t_poly(&cp.outer))?;
    }
    if a.all || a.alg_genus {
        let (g, filling) = algebraic_genus_with_witness(&t);
        writeln!(out, "algebraic genus: {g} (filling {filling:?})")?;
    }
    if pick(a.arrow) {
        writeln!(out, "arrow: {}", format_arrow(&arrow_polynomial(&d, true)))?;
    }
    if a.all || a.cable2 {
        writeln!(out, "arrow cable2: {}", format_arrow(&arrow_polynomial(&d.cable(2), true)))?;
    }
    if a.cable3 {
        writeln!(out, "arrow cable3 constant: {}", arrow_constant_term(&d.cable(3), true))?;
    }
    if a.all || a.jk {
        let r = jones_krushkal(&d)?;
        writeln!(out, "J: {}", format_jk(&r.j))?;
        writeln!(out, "J normalized: {}", format_jk(&r.j_normalized))?;
        writeln!(out, "J enhanced: {}", format_jk(&r.j_enhanced))?;
        writeln!(out, "J enhanced normalized: {}", format_jk(&r.j_enhanced_normalized))?;
    }
    Ok(())
}

fn distinguish(a: DistinguishArgs) -> CliResult {
    let battery = parse_battery(&a.battery).map_err(Failure::Usage)?;
    if battery.is_empty() {
        return Err(Failure::Usage("empty battery".into()));
    }
    let mut table = Table::read_jsonl(BufReader::new(File::open(&a.table)?))?;
    let report = distinguish_lazy(&mut table, &battery)?;
    let mut out = io::stdout().lock();
    for (n, k) in &report.counts {
        writeln!(out, "{n}\t{}\t{k}", table.counts()[n])?;
    }
    if a.groups {
        for g in &report.groups {
            writeln!(out, "{}", g.join(" "))?;
        }
    }
    Ok(())
}

fn reduce(a: ReduceArgs) -> CliResult {
    let d = parse_diagram(&a.input.diagram)?;
    let (m, steps) = reduction_moves(&d);
    let m = if m.is_knot() { minimal(&m) } else { m };
    let mut out = io::stdout().lock();
    if a.moves {
        for s in steps {
            writeln!(out, "{}", SliceStep::Move(s))?;
        }
    }
    writeln!(out, "{}", m.to_gauss_code())?;
    Ok(())
}

fn canon(a: DiagramArg) -> CliResult {
    let d = parse_knot(&a.diagram)?;
    let key = canonical_key(&d)?;
    let siblings = sibling_keys(&key.diagram());
    let class = siblings.iter().min().expect("four siblings");
    let mut out = io::stdout().lock();
    writeln!(out, "key: {key}")?;
    writeln!(out, "gauss: {}", key.diagram().to_gauss_code())?;
    writeln!(out, "class key: {class}")?;
    Ok(())
}

fn orbit(a: DiagramArg) -> CliResult {
    let d = minimal(&parse_knot(&a.diagram)?);
    let mut out = io::stdout().lock();
    for m in r3_orbit(&d) {
        writeln!(out, "{}", m.to_gauss_code())?;
    }
    Ok(())
}

fn symmetry(a: DiagramArg) -> CliResult {
    let d = minimal(&parse_knot(&a.diagram)?);
    let keys = sibling_keys(&d);
    let sym = flatknot::SymmetryType::from_keys(&keys);
    let mut out = io::stdout().lock();
    writeln!(out, "symmetry: {} ({sym})", sym.letter())?;
    for (label, k) in ["alpha", "-alpha", "alpha*", "-alpha*"].iter().zip(&keys) {
        writeln!(out, "{label}: {k}")?;
    }
    Ok(())
}

fn parse_budget(text: &str) -> Result<SearchBudget, Failure> {
    let bad = || Failure::Usage(format!("bad budget `{text}`, expected SADDLES[,STATES]"));
    let mut b = SearchBudget::default();
    let mut parts = text.split(',');
    b.max_saddles = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    if let Some(s) = parts.next() {
        b.max_states = s.trim().parse().map_err(|_| bad())?;
    }
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(b)
}

fn slice(a: SliceArgs) -> CliResult {
    let mut out = io::stdout().lock();
    if let Some(path) = a.replay {
        let text = std::fs::read_to_string(path)?;
        let movie = SliceMovie::from_text(&text)?;
        if let Some(code) = &a.diagram {
            let d = parse_knot(code)?;
            if !flatknot::moves::same_flat_knot(&d, &movie.start)? {
                return Err(Failure::Validation("movie starts at a different flat knot".into()));
            }
        }
        movie.replay()?;
        writeln!(
            out,
            "valid movie: {} saddles, {} births, {} deaths, ribbon: {}",
            movie.saddles(),
            movie.births(),
            movie.deaths(),
            movie.is_ribbon()
        )?;
        return Ok(());
    }
    let code = a.diagram.ok_or_else(|| Failure::Usage("a diagram or --replay is required".into()))?;
    let d = minimal(&parse_knot(&code)?);
    let budget = match &a.budget {
        Some(b) => parse_budget(b)?,
        None => SearchBudget::default(),
    };
    let status = if a.obstructions_only {
        slice_obstructions(&d, flatknot::slice::DEFAULT_COVERING_DEPTH)?
    } else {
        slice_status(&d, budget)?
    };
    writeln!(out, "status: {}", status.tag())?;
    match status {
        SliceStatus::NotSlice(o) => writeln!(out, "obstruction: {o}")?,
        SliceStatus::Slice { movie, .. } => write!(out, "{}", movie.to_text())?,
        SliceStatus::Unknown => {}
    }
    Ok(())
}

fn surface(a: DiagramArg) -> CliResult {
    let d = parse_diagram(&a.diagram)?;
    let s = carter_surface(&d);
    let mut out = io::stdout().lock();
    writeln!(out, "vertices: {}", s.n_vertices)?;
    writeln!(out, "edges: {}", s.n_edges)?;
    writeln!(out, "faces: {}", s.n_faces)?;
    writeln!(out, "pieces: {}", s.n_pieces)?;
    writeln!(out, "euler characteristic: {}", s.euler_characteristic())?;
    writeln!(out, "genus: {}", s.genus)?;
    writeln!(out, "core null-homologous: {}", s.core_class.is_zero())?;
    Ok(())
}
