use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dualcox::coxeter::CoxeterContext;
use dualcox::crystal::{group_interval, ten_groups_report, GroupKind, ReportOptions, TenGroupsReport};
use dualcox::horizontal::{horizontal_roots_direct, horizontal_roots_surgery, predict_lattice};
use dualcox::interval::{
    interval_presentation, is_lattice, to_dot, to_json_lines, verify_witness, BuildOptions, IntervalPoset,
    LatticeOptions, Verdict, WitnessElem,
};
use dualcox::ncp::{nc_a, nc_b, sym_presentation, FinitePoset};
use dualcox::Error;

#[derive(Parser)]
#[command(name = "dualcox", version, about = "Intervals below Coxeter elements of euclidean Coxeter groups")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Log progress to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coarse structure: element counts by row and column.
    Coarse(GroupArgs),
    /// Check the lattice property, printing a bowtie if it fails.
    Lattice(LatticeArgs),
    /// Horizontal root system, computed directly and by diagram surgery.
    Horizontal(HorizontalArgs),
    /// Relations visible in an interval.
    Presentation(PresentationArgs),
    /// Noncrossing partition lattices of types A and B.
    Ncp(NcpArgs),
    /// Generators, intervals and maps of the ten groups attached to a type.
    Report(ReportArgs),
}

#[derive(Args)]
struct TypeArgs {
    /// Euclidean type such as `G~2`, `A~3`, `E~8`.
    #[arg(long = "type")]
    ty: String,
    /// Coxeter element choice `p,q` for type A.
    #[arg(long, value_parser = parse_choice)]
    choice: Option<(usize, usize)>,
}

#[derive(Args)]
struct GroupArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long, default_value = "W", value_parser = GroupKind::from_str)]
    group: GroupKind,
    #[arg(long, value_enum, default_value_t = Rows::All)]
    rows: Rows,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Shift window for vertical reflections at non-invariant elements.
    #[arg(long, default_value_t = 2)]
    window: i64,
    /// Permit runs that take minutes to hours.
    #[arg(long)]
    allow_long: bool,
}

#[derive(Args)]
struct LatticeArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Sampled pairs of periodic families.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct HorizontalArgs {
    /// Type; all table types when omitted.
    #[arg(long = "type")]
    ty: Option<String>,
    #[arg(long, value_parser = parse_choice)]
    choice: Option<(usize, usize)>,
}

#[derive(Args)]
struct PresentationArgs {
    /// Euclidean type, or a spherical letter with `--spherical` (default `A`).
    #[arg(long = "type", required_unless_present = "spherical")]
    ty: Option<String>,
    #[arg(long, value_parser = parse_choice)]
    choice: Option<(usize, usize)>,
    #[arg(long, default_value = "W", value_parser = GroupKind::from_str)]
    group: GroupKind,
    /// Use the symmetric group interval below an `n`-cycle.
    #[arg(long)]
    spherical: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    window: i64,
    #[arg(long)]
    allow_long: bool,
}

#[derive(Args)]
struct NcpArgs {
    /// `A` or `B`.
    #[arg(long = "type")]
    ty: String,
    #[arg(long)]
    n: usize,
    /// Print only the number of elements.
    #[arg(long)]
    count: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Enumerate every interval regardless of rank.
    #[arg(long)]
    allow_long: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rows {
    All,
    Outer,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    JsonLines,
    Dot,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidType(_) | Error::ChoiceNotAllowed | Error::InvalidChoice(_) | Error::Parse(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

const BOWTIE: u8 = 3;

fn parse_choice(s: &str) -> Result<(usize, usize), String> {
    let (p, q) = s.split_once(',').ok_or("expected p,q")?;
    let p = p.trim().parse().map_err(|_| format!("bad p in {s:?}"))?;
    let q = q.trim().parse().map_err(|_| format!("bad q in {s:?}"))?;
    Ok((p, q))
}

fn context(t: &TypeArgs) -> Result<CoxeterContext, Failure> {
    Ok(CoxeterContext::from_name(&t.ty, t.choice)?)
}

/// Runs that take longer than a few minutes on a desktop.
fn is_long(ctx: &CoxeterContext, kind: GroupKind) -> bool {
    match kind {
        GroupKind::W => ctx.rank() >= 8,
        GroupKind::C => ctx.rank() >= 6,
        _ => false,
    }
}

fn build(ctx: &CoxeterContext, kind: GroupKind, window: i64, allow_long: bool) -> Result<IntervalPoset, Failure> {
    if is_long(ctx, kind) && !allow_long {
        return Err(Failure::Usage(format!(
            "the {kind} interval of {} is a long computation; pass --allow-long (or --rows outer for W)",
            ctx.name()
        )));
    }
    let t0 = Instant::now();
    let p = group_interval(ctx, kind, &BuildOptions { window, ..Default::default() })?;
    log::info!("{kind} interval of {}: {} nodes in {:.2?}", ctx.name(), p.len(), t0.elapsed());
    Ok(p)
}

fn cmd_coarse(a: &GroupArgs) -> Outcome {
    let ctx = context(&a.ty)?;
    // the bottom and top rows of W are exactly the D interval
    let outer_via_d = a.rows == Rows::Outer && a.group == GroupKind::W && a.format == Format::Table;
    let kind = if outer_via_d { GroupKind::D } else { a.group };
    let p = build(&ctx, kind, a.window, a.allow_long)?;
    match a.format {
        Format::Table => {
            let g = p.coarse_grid();
            match a.rows {
                Rows::All => println!("{}", g.render()),
                Rows::Outer => println!("{}", g.render_outer()),
            }
            if a.rows == Rows::All && !g.mixed.is_empty() {
                let cells: Vec<String> = g.mixed.iter().map(|(c, n)| format!("{c}:{n}")).collect();
                println!("mixed {}", cells.join(" "));
            }
        }
        Format::JsonLines => print!("{}", to_json_lines(&p)),
        Format::Dot => print!("{}", to_dot(&p)),
    }
    Ok(ExitCode::SUCCESS)
}

fn describe(p: &IntervalPoset, e: WitnessElem) -> String {
    let n = &p.nodes[e.node];
    if n.invariant {
        format!("node {} ({} {})", e.node, n.row.name(), p.column(e.node))
    } else {
        format!("node {} shift {} ({} {})", e.node, e.shift, n.row.name(), p.column(e.node))
    }
}

fn cmd_lattice(a: &LatticeArgs) -> Outcome {
    let ctx = context(&a.group.ty)?;
    let p = build(&ctx, a.group.group, a.group.window, a.group.allow_long)?;
    let opts = LatticeOptions { samples: a.samples, seed: a.seed, ..Default::default() };
    let r = is_lattice(&p, &opts);
    match &r.verdict {
        Verdict::Lattice => {
            println!(
                "{} {}: lattice ({} nodes, {} exact pairs, {} sampled pairs)",
                ctx.name(),
                a.group.group,
                p.len(),
                r.exact_pairs,
                r.sampled_pairs
            );
            Ok(ExitCode::SUCCESS)
        }
        Verdict::Bowtie(w) => {
            println!("{} {}: bowtie ({} nodes)", ctx.name(), a.group.group, p.len());
            println!("  lower {}", describe(&p, w.lower[0]));
            println!("  lower {}", describe(&p, w.lower[1]));
            println!("  upper {}", describe(&p, w.upper[0]));
            println!("  upper {}", describe(&p, w.upper[1]));
            println!("  failed {:?}, witness verified: {}", w.failed, verify_witness(&p, w));
            Ok(ExitCode::from(BOWTIE))
        }
    }
}

fn cmd_horizontal(a: &HorizontalArgs) -> Outcome {
    let types: Vec<(String, Option<(usize, usize)>)> = match &a.ty {
        Some(t) => vec![(t.clone(), a.choice)],
        None => dualcox::coxeter::table_types().into_iter().map(|(t, c)| (t.to_string(), c)).collect(),
    };
    let mut mismatch = false;
    for (t, choice) in types {
        let ctx = CoxeterContext::from_name(&t, choice)?;
        let direct = horizontal_roots_direct(&ctx)?.types();
        let surgery = horizontal_roots_surgery(&ctx.diagram)?;
        mismatch |= direct != surgery;
        let label = match ctx.choice {
            Some((p, q)) if a.ty.is_none() || a.choice.is_some() => format!("{t}({p},{q})"),
            _ => t,
        };
        println!(
            "{label}: {}  (surgery {}, {})",
            direct.pretty(),
            surgery.pretty(),
            if predict_lattice(&ctx)? { "W lattice" } else { "W not a lattice" }
        );
    }
    if mismatch {
        return Err(Failure::Internal("direct and surgery computations disagree".into()));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_presentation(a: &PresentationArgs) -> Outcome {
    if a.spherical {
        if a.ty.as_deref().is_some_and(|t| t != "A") {
            return Err(Failure::Usage("spherical presentations are available for type A".into()));
        }
        let n = a.n.ok_or_else(|| Failure::Usage("--spherical needs --n".into()))?;
        if n < 2 {
            return Err(Failure::Usage("--n must be at least 2".into()));
        }
        println!("{}", sym_presentation(n));
        return Ok(ExitCode::SUCCESS);
    }
    let ty = a.ty.as_deref().expect("clap requires --type without --spherical");
    let ctx = CoxeterContext::from_name(ty, a.choice)?;
    let p = build(&ctx, a.group, a.window.max(1), a.allow_long)?;
    println!("{}", interval_presentation(&p, a.window));
    Ok(ExitCode::SUCCESS)
}

fn poset_dot(p: &FinitePoset) -> String {
    let mut out = String::from("digraph ncp {\n  rankdir=BT;\n");
    for (i, l) in p.labels.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{l}\"];");
    }
    for (i, up) in p.up.iter().enumerate() {
        for j in up {
            let _ = writeln!(out, "  n{i} -> n{j};");
        }
    }
    out.push_str("}\n");
    out
}

fn cmd_ncp(a: &NcpArgs) -> Outcome {
    if a.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let p = match a.ty.as_str() {
        "A" => nc_a(a.n),
        "B" => nc_b(a.n),
        t => return Err(Failure::Usage(format!("unknown noncrossing type {t:?}; use A or B"))),
    };
    if a.count {
        println!("{}", p.len());
        return Ok(ExitCode::SUCCESS);
    }
    match a.format {
        Format::Table => {
            for (i, l) in p.labels.iter().enumerate() {
                println!("{}\t{l}", p.rank[i]);
            }
        }
        Format::JsonLines => {
            for i in 0..p.len() {
                let rec = serde_json::json!({ "id": i, "rank": p.rank[i], "label": p.labels[i], "covers": p.up[i] });
                println!("{rec}");
            }
        }
        Format::Dot => print!("{}", poset_dot(&p)),
    }
    Ok(ExitCode::SUCCESS)
}

fn render_report(r: &TenGroupsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "type {}", r.name);
    let _ = writeln!(out, "horizontal {} ({} components)", r.horizontal, r.components);
    let _ = writeln!(out, "H ≅ {}", r.horizontal_product);
    let _ = writeln!(out, "F interval ≅ {}", r.factorable_product);
    for g in &r.groups {
        let gens: Vec<String> = g.generators.iter().map(|(n, c)| format!("{n} {c}")).collect();
        let weights: Vec<String> = g.weights.iter().map(|(n, w)| format!("{n}={w}")).collect();
        let _ = write!(out, "group {}: {} [weights {}]", g.kind, gens.join(", "), weights.join(", "));
        if let (Some(n), Some(grid)) = (g.nodes, &g.grid) {
            let _ = write!(out, " interval {n} nodes {}", grid.render());
        }
        if let Some(note) = &g.note {
            let _ = write!(out, " ({note})");
        }
        out.push('\n');
    }
    for p in &r.presented {
        let count = |c: Option<usize>| c.map_or("?".to_string(), |c| c.to_string());
        let _ = write!(out, "presented {}: {} generators, {} relations", p.name, count(p.generators), count(p.relations));
        if !p.structure.is_empty() {
            let _ = write!(out, ", ≅ {}", p.structure);
        }
        out.push('\n');
    }
    for m in &r.maps {
        let _ = writeln!(
            out,
            "map {} -> {} {:?}{}",
            m.from,
            m.to,
            m.class,
            if m.evaluable { " (evaluable on generators)" } else { "" }
        );
    }
    out
}

fn cmd_report(a: &ReportArgs) -> Outcome {
    let ctx = context(&a.ty)?;
    let mut opts = ReportOptions::for_rank(ctx.rank());
    if a.allow_long {
        opts.enumerate = vec![GroupKind::D, GroupKind::W, GroupKind::F, GroupKind::C];
    }
    let r = ten_groups_report(&ctx, &opts)?;
    match a.format {
        Format::Table => print!("{}", render_report(&r)),
        Format::JsonLines => {
            println!("{}", serde_json::to_string(&r).map_err(|e| Failure::Internal(e.to_string()))?)
        }
        Format::Dot => return Err(Failure::Usage("report supports table and json-lines".into())),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let long = matches!(
        &cli.command,
        Command::Coarse(GroupArgs { allow_long: true, .. }) | Command::Report(ReportArgs { allow_long: true, .. })
    ) || matches!(&cli.command, Command::Lattice(l) if l.group.allow_long);
    let level = if cli.verbose || long { log::LevelFilter::Info } else { log::LevelFilter::Warn };
    env_logger::Builder::new().filter_level(level).format_timestamp_secs().init();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = match &cli.command {
        Command::Coarse(a) => cmd_coarse(a),
        Command::Lattice(a) => cmd_lattice(a),
        Command::Horizontal(a) => cmd_horizontal(a),
        Command::Presentation(a) => cmd_presentation(a),
        Command::Ncp(a) => cmd_ncp(a),
        Command::Report(a) => cmd_report(a),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
