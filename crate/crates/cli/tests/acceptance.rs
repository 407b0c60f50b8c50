//! Acceptance run: one PASS/FAIL line per criterion, with its time budget.
//! Exits non-zero when any criterion fails.

#[path = "../../core/tests/support/properties.rs"]
#[allow(dead_code)]
mod checks;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use dualcox::coxeter::{table_types, CoxeterContext, TypeLetter, TypeName};
use dualcox::crystal::{
    component_intervals, coxeter_interval, crystallographic_interval, diagonal_interval, factor_ranks,
    factorable_interval, middle_interval, Special,
};
use dualcox::interval::{is_lattice, verify_witness, BuildOptions, LatticeOptions, Verdict};
use dualcox::isometry::Isometry;
use dualcox::ncp::{binomial, catalan, iso_check, nc_a, nc_b, sym_interval, sym_presentation, FinitePoset};
use proptest::prelude::any;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;

/// Number, description, time budget in seconds, and the check itself.
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ctx(name: &str, choice: Option<(usize, usize)>) -> CoxeterContext {
    CoxeterContext::from_name(name, choice).expect("valid type")
}

fn label(ctx: &CoxeterContext) -> String {
    match ctx.choice {
        Some((p, q)) => format!("{}({p},{q})", ctx.name()),
        None => ctx.name().to_string(),
    }
}

fn run_cli(args: &[&str]) -> Result<(String, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_dualcox")).args(args).output().map_err(|e| e.to_string())?;
    Ok((String::from_utf8_lossy(&out.stdout).into_owned(), out.status.code().unwrap_or(-1)))
}

fn coarse_g2() -> Outcome {
    let (out, code) = run_cli(&["coarse", "--type", "G~2", "--group", "W"])?;
    ensure(code == 0 && out.trim() == "[[1,2],[6,6],[2,1]]", || format!("exit {code}, output {:?}", out.trim()))?;
    Ok(out.trim().to_string())
}

fn subscript(n: usize) -> String {
    n.to_string().chars().map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap()).unwrap()).collect()
}

/// Expected horizontal root system, as the ranks of its type-A components.
fn expected_horizontal(t: TypeName, choice: Option<(usize, usize)>) -> String {
    let n = t.rank;
    let mut ranks = match t.letter {
        TypeLetter::A => {
            let (p, q) = choice.expect("type A has a choice");
            vec![p - 1, q - 1]
        }
        TypeLetter::B => vec![1, n - 2],
        TypeLetter::C => vec![n - 1],
        TypeLetter::D => vec![1, 1, n - 3],
        TypeLetter::E => vec![1, 2, n - 4],
        TypeLetter::F => vec![1, 2],
        TypeLetter::G => vec![1],
    };
    ranks.retain(|&r| r > 0);
    ranks.sort_unstable();
    if ranks.is_empty() {
        return "∅".into();
    }
    ranks.iter().map(|&r| format!("A{}", subscript(r))).collect::<Vec<_>>().join(" ∪ ")
}

fn horizontal_table() -> Outcome {
    let (out, code) = run_cli(&["horizontal"])?;
    ensure(code == 0, || format!("exit {code}"))?;
    let lines: Vec<&str> = out.lines().collect();
    let types = table_types();
    ensure(lines.len() == types.len(), || format!("{} rows for {} types", lines.len(), types.len()))?;
    for (line, (t, choice)) in lines.iter().zip(types) {
        let (name, rest) = line.split_once(": ").ok_or_else(|| format!("unparsed row {line:?}"))?;
        let (direct, rest) = rest.split_once("  (surgery ").ok_or_else(|| format!("unparsed row {line:?}"))?;
        let (surgery, _) = rest.split_once(", ").ok_or_else(|| format!("unparsed row {line:?}"))?;
        let want = expected_horizontal(t, choice);
        ensure(direct == want && surgery == want, || format!("{name}: direct {direct}, surgery {surgery}, expected {want}"))?;
    }
    Ok(format!("{} rows agree", lines.len()))
}

fn coxeter_verdicts() -> Outcome {
    let lattices = [("C~2", None), ("C~3", None), ("G~2", None), ("A~3", Some((1, 3)))];
    let bowties = [("B~3", None), ("D~4", None), ("F~4", None), ("A~3", Some((2, 2)))];
    let opts = LatticeOptions::default();
    for (name, choice) in lattices.into_iter().chain(bowties) {
        let c = ctx(name, choice);
        let p = coxeter_interval(&c, &BuildOptions::default()).map_err(|e| e.to_string())?;
        let r = is_lattice(&p, &opts);
        let want_lattice = lattices.contains(&(name, choice));
        match (&r.verdict, want_lattice) {
            (Verdict::Lattice, true) => {}
            (Verdict::Bowtie(w), false) => ensure(verify_witness(&p, w), || format!("{}: witness fails", label(&c)))?,
            (v, _) => return Err(format!("{}: got {v:?}", label(&c))),
        }
    }
    Ok("4 lattices, 4 verified bowties".into())
}

fn crystallographic_lattices() -> Outcome {
    let opts = LatticeOptions::default();
    let mut notes = Vec::new();
    for (name, choice) in [("B~3", None), ("D~4", None), ("F~4", None), ("A~3", Some((2, 2)))] {
        let c = ctx(name, choice);
        let p = crystallographic_interval(&c, &BuildOptions::default()).map_err(|e| e.to_string())?;
        let r = is_lattice(&p, &opts);
        ensure(r.is_lattice(), || format!("{}: {:?}", label(&c), r.verdict))?;
        ensure(r.sampled_pairs == opts.samples, || format!("{}: only {} sampled pairs", label(&c), r.sampled_pairs))?;
        notes.push(format!("{} {}+{}", label(&c), r.exact_pairs, r.sampled_pairs));
    }
    Ok(format!("exact+sampled pairs: {}", notes.join(", ")))
}

fn e8_outer_rows() -> Outcome {
    let p = diagonal_interval(&ctx("E~8", None), &BuildOptions::default()).map_err(|e| e.to_string())?;
    let g = p.coarse_grid();
    let want: Vec<u64> = vec![1, 28, 235, 826, 1345, 1000, 315, 30];
    let reversed: Vec<u64> = want.iter().rev().copied().collect();
    ensure(g.bottom == want && g.top == reversed, || format!("bottom {:?}, top {:?}", g.bottom, g.top))?;
    Ok(format!("bottom {:?}, {} elements", g.bottom, p.len()))
}

fn noncrossing_oracles() -> Outcome {
    for n in 1..=7 {
        let (s, a) = (sym_interval(n).len(), nc_a(n).len());
        ensure(s as u64 == catalan(n) && a as u64 == catalan(n), || format!("n = {n}: {s}, {a}, Catalan {}", catalan(n)))?;
    }
    for n in 1..=5 {
        let ok = iso_check(&sym_interval(n), &nc_a(n)).map_err(|e| e.to_string())?;
        ensure(ok, || format!("n = {n}: permutation interval not isomorphic to NC_A"))?;
    }
    for n in 1..=4 {
        let mid = FinitePoset::from_interval(&middle_interval(n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(mid.len() as u64 == binomial(2 * n, n), || format!("n = {n}: middle interval has {}", mid.len()))?;
    }
    let shown = sym_presentation(3).to_string();
    let compact: String = shown.chars().filter(|c| !c.is_whitespace()).collect();
    ensure(compact == "⟨a,b,c|ab=bc=ca⟩", || format!("presentation {shown}"))?;
    Ok(format!("Catalan through 7, {shown}"))
}

fn properties() -> Outcome {
    for (name, check) in checks::CHECKS {
        let mut runner = TestRunner::new(Config { cases: checks::CASES, failure_persistence: None, ..Config::default() });
        runner.run(&any::<u64>(), check).map_err(|e| format!("{name}: {e}"))?;
    }
    ensure(checks::coxeter_grids_are_symmetric(), || "a Coxeter grid is not symmetric".into())?;
    ensure(checks::reflections_have_length_one(), || "reflection length".into())?;
    Ok(format!("{} properties at {} cases", checks::CHECKS.len(), checks::CASES))
}

fn product_of_nc_b(ranks: &[usize]) -> FinitePoset {
    ranks[1..].iter().fold(nc_b(ranks[0]), |acc, &r| acc.product(&nc_b(r)))
}

fn factorable_structure() -> Outcome {
    let opts = BuildOptions::default();
    for (t, choice) in table_types().into_iter().filter(|(t, _)| t.rank <= 4) {
        let c = CoxeterContext::new(t, choice).map_err(|e| e.to_string())?;
        let ranks = factor_ranks(&Special::new(&c).map_err(|e| e.to_string())?);
        if ranks.is_empty() {
            continue;
        }
        let f = FinitePoset::from_interval(&factorable_interval(&c, &opts).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let ok = iso_check(&f, &product_of_nc_b(&ranks)).map_err(|e| e.to_string())?;
        ensure(ok, || format!("{}: not isomorphic to NC_B{ranks:?}", label(&c)))?;
    }
    let c = ctx("E~8", None);
    let ranks = factor_ranks(&Special::new(&c).map_err(|e| e.to_string())?);
    ensure(ranks == [2, 3, 5], || format!("E~8 factor ranks {ranks:?}"))?;
    let factors = component_intervals(&c, &opts).map_err(|e| e.to_string())?;
    let mut counts = Vec::new();
    for (p, &r) in factors.iter().zip(&ranks) {
        let fp = FinitePoset::from_interval(p).map_err(|e| e.to_string())?;
        ensure(fp.len() as u64 == binomial(2 * r, r), || format!("E~8 factor of rank {r} has {}", fp.len()))?;
        ensure(iso_check(&fp, &nc_b(r)).map_err(|e| e.to_string())?, || format!("E~8 factor of rank {r}"))?;
        counts.push(fp.len());
    }
    let reps: BTreeSet<&Isometry> = factors.iter().flat_map(|p| p.nodes.iter().map(|n| &n.rep)).collect();
    ensure(reps.len() + factors.len() - 1 == counts.iter().sum::<usize>(), || "E~8 factors overlap".into())?;
    Ok(format!("rank ≤ 4 types match; E~8 factors {counts:?}, product {}", counts.iter().product::<usize>()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "coarse grid of G~2", 1, coarse_g2),
        (2, "horizontal root table, direct and surgery", 10, horizontal_table),
        (3, "Coxeter interval lattice verdicts", 300, coxeter_verdicts),
        (4, "crystallographic intervals are lattices", 900, crystallographic_lattices),
        (5, "E~8 outer rows", 1800, e8_outer_rows),
        (6, "noncrossing partition oracles", 60, noncrossing_oracles),
        (7, "property checks", 120, properties),
        (8, "factorable intervals as NC_B products", 300, factorable_structure),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let result = result.and_then(|msg| {
            ensure(took <= Duration::from_secs(budget), || format!("{msg}; over the {budget} s budget"))?;
            Ok(msg)
        });
        match result {
            Ok(msg) => println!("criterion {id}: PASS  {name} ({:.1} s): {msg}", took.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("criterion {id}: FAIL  {name} ({:.1} s): {msg}", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
