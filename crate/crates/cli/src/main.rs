use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use liepres::analysis::{classify, ClassificationReport};
use liepres::document::{table_from_json, table_to_csv, table_to_json, table_to_latex};
use liepres::free_lie::lyndon_words;
use liepres::presentation::{
    closure_structure_table, cross_validate_quotient, g2_named_basis, g2_presentation,
    parse_presentation, quadruple_presentation_text, quotient_closure, rewriter_applicability,
    rewriter_structure_table, NamedBasisMap, Presentation, QuotientBasis, DEFAULT_DEGREE_BOUND,
};
use liepres::table::StructureTable;

// A closed pipe (e.g. `| head`) ends the program quietly instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if std::io::stdout().write_fmt(format_args!($($arg)*)).is_err() {
            std::process::exit(0);
        }
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        out!($($arg)*);
        out!("\n");
    }};
}

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_DISAGREE: u8 = 3;
const EXIT_NOT_STABILIZED: u8 = 4;
const EXIT_JACOBI: u8 = 5;
const EXIT_UNRECOGNIZED: u8 = 6;

#[derive(Parser)]
#[command(
    name = "liepres",
    version,
    about = "Finitely presented Lie algebras over Q"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the quotient of a presentation and its structure table.
    Derive {
        presentation: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEGREE_BOUND, value_parser = clap::value_parser!(usize))]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = Engine::Both)]
        engine: Engine,
        /// Write the table as JSON here instead of listing it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Print how each degree-4 Lyndon monomial is eliminated.
        #[arg(long)]
        show_eliminations: bool,
    },
    /// Compare a table with a golden table.
    Verify {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        golden: PathBuf,
    },
    /// Jacobi check, Killing form, roots and Cartan type of a table.
    Classify {
        #[arg(long)]
        table: PathBuf,
        /// Comma-separated basis names spanning a Cartan subalgebra.
        #[arg(long, value_delimiter = ',')]
        cartan: Option<Vec<String>>,
    },
    /// Re-emit a table as JSON, CSV or LaTeX.
    Export {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lyndon word counts of the free Lie algebra per degree.
    Free {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        alphabet: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_degree: u32,
    },
    /// Print the quadruple-relation presentation in the DSL.
    Presentation {
        /// Coefficients of the three relation families.
        #[arg(long, value_delimiter = ',', default_values_t = [2, 4, 6])]
        coefficients: Vec<i64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Both,
    Rewriter,
    Closure,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Latex,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", p.display())))
        }
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn load_table(path: &Path) -> Result<StructureTable, Failure> {
    table_from_json(&read(path)?).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn print_quotient_report(q: &QuotientBasis) {
    outln!("dim = {}", q.dim());
    let dims: Vec<String> = q.dims_by_degree().iter().map(usize::to_string).collect();
    outln!("dims by degree: {}", dims.join(" "));
    let prev = q
        .previous_dim()
        .map_or("not computed".to_string(), |d| d.to_string());
    let trunc = q.truncation();
    let lowest = trunc
        .lowest_degree
        .map_or("none".to_string(), |d| d.to_string());
    outln!(
        "stabilized: {} (degree bound {}, dim at bound - 1: {prev}, truncated consequences: {}, lowest truncated degree: {lowest})",
        if q.is_stabilized() { "yes" } else { "no" },
        q.degree_bound(),
        trunc.count,
    );
}

fn print_eliminations(q: &QuotientBasis) {
    let names = q.generator_names();
    let elims = q.eliminations_in_degree(4);
    outln!("degree-4 eliminations: {}", elims.len());
    for (m, e) in elims {
        let m_poly = liepres::free_lie::LiePoly::monomial(m.clone());
        let nf = &m_poly - &e;
        outln!("  {} = {}", m.fmt_with(names), nf.fmt_with(names));
    }
}

fn same_relations(a: &Presentation, b: &Presentation) -> bool {
    let set = |p: &Presentation| {
        p.relations()
            .iter()
            .map(|r| r.to_string())
            .collect::<std::collections::BTreeSet<_>>()
    };
    set(a) == set(b)
}

fn derive(
    path: &Path,
    max_degree: usize,
    engine: Engine,
    out: Option<&Path>,
    jobs: usize,
    show_eliminations: bool,
) -> CmdResult {
    let text = read(path)?;
    let pres: Presentation = parse_presentation(&text).map_err(|e| {
        fail(
            EXIT_INPUT,
            format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message),
        )
    })?;
    let q = quotient_closure(&pres, max_degree).map_err(|e| fail(EXIT_INPUT, e.to_string()))?;
    print_quotient_report(&q);
    if show_eliminations {
        print_eliminations(&q);
    }
    if !q.is_stabilized() {
        return Err(fail(
            EXIT_NOT_STABILIZED,
            format!("quotient not stabilized at degree bound {max_degree}; raise --max-degree"),
        ));
    }
    let applicable = rewriter_applicability(&pres);
    let names = if applicable.is_ok() {
        g2_named_basis()
    } else {
        NamedBasisMap::from_quotient(&q)
    };
    let table = match engine {
        Engine::Closure => closure_structure_table(&q, &names, jobs)
            .map_err(|e| fail(EXIT_DISAGREE, e.to_string()))?,
        Engine::Rewriter => {
            applicable
                .map_err(|why| fail(EXIT_INPUT, format!("rewriter not applicable: {why}")))?;
            // The rewriter hard-codes the 2, 4, 6 families.
            if !same_relations(&pres, &g2_presentation()) {
                return Err(fail(
                    EXIT_INPUT,
                    "rewriter not applicable: relations differ from the quadruple families; use --engine both",
                ));
            }
            rewriter_structure_table(&names, jobs)
                .map_err(|e| fail(EXIT_DISAGREE, e.to_string()))?
        }
        Engine::Both => {
            if let Err(why) = &applicable {
                outln!("rewriter not applicable: {why}; using the closure engine only");
                closure_structure_table(&q, &names, jobs)
                    .map_err(|e| fail(EXIT_DISAGREE, e.to_string()))?
            } else {
                let report = cross_validate_quotient(&pres, &q, jobs)
                    .map_err(|e| fail(EXIT_DISAGREE, e.to_string()))?;
                for n in &report.notes {
                    outln!("note: {n}");
                }
                let t = report
                    .closure_table
                    .as_ref()
                    .unwrap_or(&StructureTable::new(vec![]))
                    .clone();
                for m in &report.mismatches {
                    outln!(
                        "mismatch [{}, {}]: rewriter {} vs closure {}",
                        t.names()[m.i],
                        t.names()[m.j],
                        m.rewriter,
                        m.closure
                    );
                }
                if !report.agrees() {
                    return Err(fail(EXIT_DISAGREE, "engines disagree"));
                }
                outln!("engines agree on all {} pairs", t.dim() * (t.dim() - 1) / 2);
                t
            }
        }
    };
    match out {
        Some(p) => {
            write_or_print(Some(p), &table_to_json(&table))?;
            outln!("table written to {}", p.display());
        }
        None => out!("{table}"),
    }
    Ok(())
}

fn verify(table: &Path, golden: &Path) -> CmdResult {
    let t = load_table(table)?;
    let g = load_table(golden)?;
    let diff = t.diff(&g);
    if diff.is_empty() {
        outln!(
            "tables identical ({} pairs)",
            t.dim() * t.dim().saturating_sub(1) / 2
        );
        return Ok(());
    }
    outln!("{} differing entries (table vs golden):", diff.len());
    for line in &diff {
        outln!("  {line}");
    }
    Err(fail(EXIT_MISMATCH, "table differs from golden"))
}

fn classify_cmd(path: &Path, cartan: Option<&[String]>) -> CmdResult {
    let t = load_table(path)?;
    let cartan_idx = match cartan {
        None => None,
        Some(names) => Some(
            names
                .iter()
                .map(|n| {
                    t.index_of(n).ok_or_else(|| {
                        fail(EXIT_INPUT, format!("unknown basis name {n:?} in --cartan"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let c = classify(&t, cartan_idx.as_deref());
    out!(
        "{}",
        ClassificationReport {
            table: &t,
            result: &c
        }
    );
    if let Some(v) = c.jacobi_violations.first() {
        return Err(fail(
            EXIT_JACOBI,
            format!(
                "Jacobi identity fails at ({}, {}, {})",
                t.names()[v.i],
                t.names()[v.j],
                t.names()[v.k]
            ),
        ));
    }
    if !c.identified() {
        return Err(fail(EXIT_UNRECOGNIZED, "type not identified"));
    }
    Ok(())
}

fn export(path: &Path, format: Format, out: Option<&Path>) -> CmdResult {
    let t = load_table(path)?;
    if t.dim() == 0 {
        return Err(fail(EXIT_INPUT, "table has dimension 0"));
    }
    let text = match format {
        Format::Json => table_to_json(&t),
        Format::Csv => table_to_csv(&t).map_err(|e| fail(EXIT_INPUT, e.to_string()))?,
        Format::Latex => table_to_latex(&t),
    };
    write_or_print(out, &text)
}

fn free(alphabet: u32, max_degree: u32) -> CmdResult {
    if (alphabet as f64).powi(max_degree as i32) > 1e8 {
        return Err(fail(EXIT_INPUT, "alphabet^max-degree exceeds 10^8 words"));
    }
    let counts: Vec<usize> = lyndon_words(alphabet as usize, max_degree as usize)
        .iter()
        .map(Vec::len)
        .collect();
    let listed: Vec<String> = counts.iter().map(usize::to_string).collect();
    outln!(
        "{}, total {}",
        listed.join(" "),
        counts.iter().sum::<usize>()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Derive {
            presentation,
            max_degree,
            engine,
            out,
            jobs,
            show_eliminations,
        } => derive(
            &presentation,
            max_degree,
            engine,
            out.as_deref(),
            jobs,
            show_eliminations,
        ),
        Command::Verify { table, golden } => verify(&table, &golden),
        Command::Classify { table, cartan } => classify_cmd(&table, cartan.as_deref()),
        Command::Export { table, format, out } => export(&table, format, out.as_deref()),
        Command::Free {
            alphabet,
            max_degree,
        } => free(alphabet, max_degree),
        Command::Presentation { coefficients } if coefficients.len() != 3 => Err(fail(
            EXIT_INPUT,
            "--coefficients takes exactly three values",
        )),
        Command::Presentation { coefficients } => {
            out!(
                "{}",
                quadruple_presentation_text([coefficients[0], coefficients[1], coefficients[2]])
            );
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
