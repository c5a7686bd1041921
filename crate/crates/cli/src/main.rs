use std::fmt::Write as _;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use triarray::array::{
    direct_construct, triple_criterion, ArrayForm, RowColumnArray, TripleCriterion,
};
use triarray::catalog::{self, builtin_group};
use triarray::designs::{build_youden, develop, four_cycle_blocks};
use triarray::family::{
    family_triple_array, generate_family_member, FamilyError, FamilyOptions, DEFAULT_MAX_U,
};
use triarray::format::{array_to_csv, array_to_grid, parse_array, ArrayJson, GridJson};
use triarray::interchange::{
    load_set_ref, resolve_group, DsJson, GroupJson, GroupRef, InterchangeError, LoadedSet,
};
use triarray::search::{search_difference_sets, SearchOptions, DEFAULT_CANDIDATE_CAP};
use triarray::{
    DiffSetError, DifferenceSet, DsParams, FiniteGroup, MultiplierReport, VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "triarray",
    version,
    about = "Triple arrays from difference sets"
)]
struct Cli {
    /// Worker threads for search and verification (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Largest number of candidate subsets a search may face.
    #[arg(long, global = true, default_value_t = DEFAULT_CANDIDATE_CAP)]
    cap: u128,
    #[arg(long, global = true, value_enum, default_value_t = Format::Grid)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Grid,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a group.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Verify, search and analyse difference sets.
    #[command(subcommand)]
    Ds(DsCmd),
    /// Block designs developed from a difference set.
    #[command(subcommand)]
    Design(DesignCmd),
    /// Youden squares developed from a difference set.
    #[command(subcommand)]
    Youden(YoudenCmd),
    /// Build and verify triple arrays.
    #[command(subcommand)]
    Ta(TaCmd),
    /// The Hadamard family of reversible difference sets.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Shipped difference sets.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Multiplier statistics tables.
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Print the elements, or the Cayley table with --table.
    Show {
        /// Builtin spec (cyclic:N, cyclic:N:<gen>, abelian:N1,N2,..., B, C, D, AII, J) or group JSON file.
        spec: String,
        #[arg(long)]
        table: bool,
    },
}

#[derive(Args)]
struct SetSource {
    /// `catalog:ID` or a difference-set JSON file.
    #[arg(long = "set", conflicts_with_all = ["group", "members"])]
    set: Option<String>,
    /// Builtin spec or group JSON file.
    #[arg(long, requires = "members")]
    group: Option<String>,
    /// Comma-separated element names or words.
    #[arg(long, value_delimiter = ',', requires = "group")]
    members: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum DsCmd {
    /// Check the difference condition.
    Verify {
        #[command(flatten)]
        source: SetSource,
        /// Expected parameters `v,k,λ`.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        params: Option<Vec<usize>>,
        #[arg(long)]
        allow_trivial: bool,
    },
    /// Enumerate all difference sets with the given parameters.
    Search {
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        lambda: usize,
        /// Include sets not containing the identity.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        allow_trivial: bool,
    },
    /// Reversible translates, weak multiplier -1 and left = right counts.
    Report {
        #[command(flatten)]
        source: SetSource,
    },
}

#[derive(Subcommand)]
enum DesignCmd {
    /// The development dev(D) and its design check.
    Dev {
        #[command(flatten)]
        source: SetSource,
    },
    /// Block collections from left, right and two-sided translates.
    Fourcycle {
        #[command(flatten)]
        source: SetSource,
    },
}

#[derive(Subcommand)]
enum YoudenCmd {
    /// Youden square with Y(i,j) = ij.
    Build {
        #[command(flatten)]
        source: SetSource,
        /// Row order, a permutation of the set.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<String>>,
    },
}

#[derive(Subcommand)]
enum TaCmd {
    /// Youden square with one column deleted.
    Build {
        /// `catalog:ID` or a difference-set JSON file.
        #[arg(long)]
        from_ds: String,
        /// Element naming the column to delete.
        #[arg(long, default_value = "1")]
        column: String,
        /// Emit the RL-form instead of the standard form.
        #[arg(long)]
        rl: bool,
    },
    /// The array with rows D, columns G \ D and entries x⁻¹y.
    Direct {
        #[arg(long)]
        from_ds: String,
    },
    /// Count the triple-array conditions of a grid or JSON array file.
    Verify { file: String },
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Generate the reversible (4u², 2u²-u, u²-u) set for `u`.
    Gen {
        #[arg(long)]
        u: usize,
        /// Also build and verify the triple array.
        #[arg(long)]
        emit_array: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_U)]
        max_u: usize,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Show { id: String },
}

#[derive(Subcommand)]
enum ReportCmd {
    /// One row per set: group, set, reversible, weak -1, left = right.
    Tables {
        /// Sets to report (default: the whole catalog).
        #[arg(long = "set")]
        sets: Vec<String>,
    },
}

/// The object checked failed its conditions.
#[derive(Debug)]
struct Rejected(String);

impl std::fmt::Display for Rejected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Rejected {}

struct Output {
    stdout: String,
    rejection: Option<String>,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            rejection: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(2);
        }
        pool = pool.num_threads(n);
    }
    if cli.cap == 0 {
        eprintln!("error: --cap must be positive");
        return ExitCode::from(2);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(out) => {
            print!("{}", out.stdout);
            match out.rejection {
                Some(why) => {
                    eprintln!("rejected: {why}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            if let Some(r) = e.downcast_ref::<Rejected>() {
                eprintln!("rejected: {r}");
                return ExitCode::from(1);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let f = cli.format;
    match &cli.command {
        Command::Group(GroupCmd::Show { spec, table }) => group_show(spec, *table, f),
        Command::Ds(DsCmd::Verify {
            source,
            params,
            allow_trivial,
        }) => ds_verify(source, params.as_deref(), *allow_trivial, f),
        Command::Ds(DsCmd::Search {
            group,
            k,
            lambda,
            all,
            allow_trivial,
        }) => ds_search(group, *k, *lambda, *all, *allow_trivial, cli.cap, f),
        Command::Ds(DsCmd::Report { source }) => {
            let loaded = load_source(source, false)?;
            report_rows(&[loaded], f)
        }
        Command::Design(DesignCmd::Dev { source }) => {
            design_dev(&load_source(source, false)?.set, f)
        }
        Command::Design(DesignCmd::Fourcycle { source }) => {
            design_fourcycle(&load_source(source, false)?.set, f)
        }
        Command::Youden(YoudenCmd::Build { source, order }) => {
            youden(&load_source(source, false)?.set, order.as_deref(), f)
        }
        Command::Ta(TaCmd::Build {
            from_ds,
            column,
            rl,
        }) => ta_build(from_ds, column, *rl, f),
        Command::Ta(TaCmd::Direct { from_ds }) => ta_direct(from_ds, f),
        Command::Ta(TaCmd::Verify { file }) => ta_verify(file, f),
        Command::Family(FamilyCmd::Gen {
            u,
            emit_array,
            max_u,
        }) => family_gen(*u, *emit_array, *max_u, f),
        Command::Catalog(CatalogCmd::List) => catalog_list(f),
        Command::Catalog(CatalogCmd::Show { id }) => catalog_show(id, f),
        Command::Report(ReportCmd::Tables { sets }) => {
            let loaded = if sets.is_empty() {
                catalog::list_entries()
                    .iter()
                    .map(|e| load_set_ref(&format!("catalog:{}", e.id), VerifyOptions::default()))
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                sets.iter()
                    .map(|s| {
                        load_set_ref(s, VerifyOptions::trivial_ok()).map_err(anyhow::Error::from)
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            report_rows(&loaded, f)
        }
    }
}

fn json_line(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

fn csv_line(fields: &[String]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

/// Verification failures of a set become rejections; everything else is a usage error.
fn classify(e: InterchangeError) -> anyhow::Error {
    match e {
        InterchangeError::DiffSet(DiffSetError::Group(g)) => anyhow!(g),
        InterchangeError::DiffSet(d) => Rejected(d.to_string()).into(),
        InterchangeError::Catalog(triarray::catalog::CatalogError::DiffSet(d)) => {
            Rejected(d.to_string()).into()
        }
        other => anyhow!(other),
    }
}

fn load_source(source: &SetSource, allow_trivial: bool) -> Result<LoadedSet> {
    let opts = VerifyOptions { allow_trivial };
    if let Some(r) = &source.set {
        return load_set_ref(r, opts).map_err(classify);
    }
    let (Some(spec), Some(members)) = (&source.group, &source.members) else {
        bail!("give either --set or --group with --members");
    };
    let group = Arc::new(resolve_group(spec, None).map_err(anyhow::Error::from)?);
    let members = members
        .iter()
        .map(|m| group.parse_element(m))
        .collect::<Result<Vec<_>, _>>()?;
    let set = DifferenceSet::verify(&group, &members, opts).map_err(|e| Rejected(e.to_string()))?;
    Ok(LoadedSet {
        set,
        group_label: spec.clone(),
        set_label: "-".into(),
        group: GroupRef::Named(spec.clone()),
    })
}

fn group_show(spec: &str, table: bool, f: Format) -> Result<Output> {
    let g = resolve_group(spec, None)?;
    let out = match f {
        Format::Json => json_line(&serde_json::to_value(GroupJson::from_group(&g))?),
        Format::Csv | Format::Grid if table => {
            let grid = GridJson {
                rows: g.names().to_vec(),
                cols: g.names().to_vec(),
                cells: g
                    .table_rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(|x| g.name(x).to_string()).collect())
                    .collect(),
            };
            if f == Format::Csv {
                grid.to_csv()?
            } else {
                grid.to_grid()
            }
        }
        Format::Csv => {
            let mut s = csv_line(&["element".into(), "order".into(), "inverse".into()]);
            for x in 0..g.order() {
                s += &csv_line(&[
                    g.name(x).into(),
                    g.element_order(x).to_string(),
                    g.name(g.inv(x)).into(),
                ]);
            }
            s
        }
        Format::Grid => {
            let mut s = String::new();
            writeln!(s, "order {}", g.order())?;
            writeln!(s, "abelian {}", if g.is_abelian() { "yes" } else { "no" })?;
            writeln!(s, "generators {}", g.generator_names().join(" "))?;
            writeln!(s, "center {}", names(&g, &g.center()))?;
            writeln!(s, "elements {}", g.names().join(" "))?;
            s
        }
    };
    Ok(Output::ok(out))
}

fn names(g: &FiniteGroup, xs: &[usize]) -> String {
    let v: Vec<&str> = xs.iter().map(|&x| g.name(x)).collect();
    format!("{{{}}}", v.join(","))
}

fn ds_verify(
    source: &SetSource,
    params: Option<&[usize]>,
    allow_trivial: bool,
    f: Format,
) -> Result<Output> {
    let loaded = load_source(source, allow_trivial)?;
    let d = &loaded.set;
    if let Some(p) = params {
        let [v, k, l] = p else {
            bail!("--params takes three values v,k,λ");
        };
        let expected = DsParams::new(*v, *k, *l);
        if d.params() != expected {
            return Err(Rejected(
                DiffSetError::ParameterMismatch {
                    expected,
                    found: d.params(),
                }
                .to_string(),
            )
            .into());
        }
    }
    let out = match f {
        Format::Json => json_line(&serde_json::to_value(DsJson::from_set(
            d,
            loaded.group.clone(),
            None,
        ))?),
        Format::Csv => csv_line(&[
            d.member_names().join(" "),
            d.params().v.to_string(),
            d.params().k.to_string(),
            d.params().lambda.to_string(),
        ]),
        Format::Grid => format!("{d}\n"),
    };
    Ok(Output::ok(out))
}

#[allow(clippy::too_many_arguments)]
fn ds_search(
    spec: &str,
    k: usize,
    lambda: usize,
    all: bool,
    allow_trivial: bool,
    cap: u128,
    f: Format,
) -> Result<Output> {
    let group = Arc::new(resolve_group(spec, None)?);
    let opts = SearchOptions {
        normalize: !all,
        cap,
        allow_trivial,
    };
    let found = search_difference_sets(&group, k, lambda, opts)?;
    let out = match f {
        Format::Json => {
            let sets: Vec<serde_json::Value> = found
                .iter()
                .map(|d| {
                    json!({
                        "members": d.member_names(),
                        "reversible_translate": d.reversible_translate().map(|g| group.name(g).to_string()),
                    })
                })
                .collect();
            json_line(&json!({
                "group": spec,
                "params": [group.order(), k, lambda],
                "normalized": !all,
                "count": found.len(),
                "sets": sets,
            }))
        }
        Format::Csv => {
            let mut s = csv_line(&["members".into(), "reversible_translate".into()]);
            for d in &found {
                s += &csv_line(&[
                    d.member_names().join(" "),
                    d.reversible_translate()
                        .map(|g| group.name(g).to_string())
                        .unwrap_or_default(),
                ]);
            }
            s
        }
        Format::Grid => {
            let mut s = String::new();
            for d in &found {
                writeln!(s, "{d}")?;
            }
            let kind = if all { "" } else { " normalized" };
            writeln!(
                s,
                "# {}{kind} difference sets with parameters ({},{},{}) in {spec}",
                found.len(),
                group.order(),
                k,
                lambda
            )?;
            s
        }
    };
    Ok(Output::ok(out))
}

fn count_cell(n: usize) -> String {
    if n == 0 {
        "--".into()
    } else {
        n.to_string()
    }
}

fn report_rows(sets: &[LoadedSet], f: Format) -> Result<Output> {
    let reports: Vec<MultiplierReport> = sets.iter().map(|l| l.set.multiplier_report()).collect();
    let out = match f {
        Format::Json => {
            let rows: Vec<serde_json::Value> = sets
                .iter()
                .zip(&reports)
                .map(|(l, r)| {
                    json!({
                        "group": l.group_label,
                        "set": l.set_label,
                        "params": l.set.params(),
                        "report": r,
                    })
                })
                .collect();
            json_line(&serde_json::Value::Array(rows))
        }
        Format::Csv => {
            let mut s = csv_line(&[
                "group".into(),
                "set".into(),
                "reversible".into(),
                "weak_minus_one".into(),
                "left_equals_right".into(),
            ]);
            for (l, r) in sets.iter().zip(&reports) {
                let (a, b, c) = r.triple();
                s += &csv_line(&[
                    l.group_label.clone(),
                    l.set_label.clone(),
                    a.to_string(),
                    b.to_string(),
                    c.to_string(),
                ]);
            }
            s
        }
        Format::Grid => {
            let mut s = String::from("# group set reversible weak-1 left=right\n");
            for (l, r) in sets.iter().zip(&reports) {
                let (a, b, c) = r.triple();
                writeln!(
                    s,
                    "{} {} {} {} {}",
                    l.group_label,
                    l.set_label,
                    count_cell(a),
                    count_cell(b),
                    count_cell(c)
                )?;
            }
            s
        }
    };
    Ok(Output::ok(out))
}

fn design_dev(d: &DifferenceSet, f: Format) -> Result<Output> {
    let bd = develop(d);
    let verdict = bd.verify_sbibd();
    let grid = GridJson::from_design(&bd);
    let verdict_text = match &verdict {
        Ok(p) => p.to_string(),
        Err(e) => format!("not a symmetric design: {e}"),
    };
    let stdout = match f {
        Format::Json => json_line(&json!({
            "rows": grid.rows,
            "cols": grid.cols,
            "cells": grid.cells,
            "params": verdict.as_ref().ok(),
        })),
        Format::Csv => grid.to_csv()?,
        Format::Grid => {
            let g = d.group();
            let mut s = String::new();
            for (i, block) in bd.blocks().iter().enumerate() {
                writeln!(s, "D{}: {}", g.name(i), names(g, block))?;
            }
            writeln!(s, "# {verdict_text}")?;
            s
        }
    };
    Ok(Output {
        stdout,
        rejection: verdict.err().map(|e| e.to_string()),
    })
}

fn design_fourcycle(d: &DifferenceSet, f: Format) -> Result<Output> {
    let fc = four_cycle_blocks(d);
    let g = d.group();
    let named = |c: &Vec<Vec<usize>>| -> Vec<Vec<String>> {
        c.iter()
            .map(|b| b.iter().map(|&x| g.name(x).to_string()).collect())
            .collect()
    };
    let stdout = match f {
        Format::Json => json_line(&json!({
            "b1": named(&fc.b1),
            "b2": named(&fc.b2),
            "b3": named(&fc.b3),
            "b4": named(&fc.b4),
            "unions": fc.unions,
            "degenerate": fc.degenerate,
        })),
        Format::Csv => {
            let mut s = csv_line(&["collection".into(), "block".into()]);
            for (i, c) in fc.collections().iter().enumerate() {
                for b in c.iter() {
                    s += &csv_line(&[format!("B{}", i + 1), names(g, b)]);
                }
            }
            s
        }
        Format::Grid => {
            let mut s = String::new();
            for (i, c) in fc.collections().iter().enumerate() {
                writeln!(s, "B{} ({} blocks)", i + 1, c.len())?;
                for b in c.iter() {
                    writeln!(s, "  {}", names(g, b))?;
                }
            }
            for u in &fc.unions {
                match (&u.params, &u.error) {
                    (Some(p), _) => writeln!(s, "{}: {p}", u.name)?,
                    (None, Some(e)) => writeln!(s, "{}: {e}", u.name)?,
                    (None, None) => unreachable!("a union has a verdict"),
                }
            }
            if fc.degenerate {
                writeln!(s, "# degenerate: every left translate is a right translate")?;
            }
            s
        }
    };
    Ok(Output::ok(stdout))
}

fn youden(d: &DifferenceSet, order: Option<&[String]>, f: Format) -> Result<Output> {
    let g = d.group();
    let order = order
        .map(|o| {
            o.iter()
                .map(|w| g.parse_element(w))
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    let y = build_youden(d, order.as_deref())?;
    let verdict = y.verify();
    let grid = GridJson::from_youden(&y);
    let stdout = match f {
        Format::Json => json_line(&serde_json::to_value(&grid)?),
        Format::Csv => grid.to_csv()?,
        Format::Grid => {
            let mut s = grid.to_grid();
            match &verdict {
                Ok(p) => writeln!(s, "# YS1 and YS2 hold; columns form a {p}")?,
                Err(e) => writeln!(s, "# {e}")?,
            }
            s
        }
    };
    Ok(Output {
        stdout,
        rejection: verdict.err().map(|e| e.to_string()),
    })
}

/// Emits an array and its verdict; failing the triple-array check is a rejection.
fn emit_array(a: &RowColumnArray, f: Format) -> Result<Output> {
    let verdict = a.verify()?;
    let summary = verdict.summary();
    let stdout = match f {
        Format::Json => {
            let mut v = serde_json::to_value(ArrayJson::from_array(a))?;
            v["verdict"] = serde_json::to_value(&verdict)?;
            v["summary"] = json!(summary);
            json_line(&v)
        }
        Format::Csv => {
            eprintln!("{summary}");
            array_to_csv(a)?
        }
        Format::Grid => format!("{}# verdict: {summary}\n", array_to_grid(a)),
    };
    let rejection = (!verdict.triple_array).then(|| {
        verdict
            .violations
            .first()
            .map(|v| v.to_string())
            .unwrap_or(summary)
    });
    Ok(Output { stdout, rejection })
}

fn load_ds(reference: &str) -> Result<DifferenceSet> {
    Ok(load_set_ref(reference, VerifyOptions::default())
        .map_err(classify)?
        .set)
}

fn ta_build(reference: &str, column: &str, rl: bool, f: Format) -> Result<Output> {
    let d = load_ds(reference)?;
    let c = d.group().parse_element(column)?;
    let y = build_youden(&d, None)?;
    let rl_form = y.delete_column(c)?;
    let a = if rl {
        rl_form
    } else {
        rl_form.rl_to_standard()?
    };
    emit_array(&a, f)
}

fn ta_direct(reference: &str, f: Format) -> Result<Output> {
    let d = load_ds(reference)?;
    let a = direct_construct(&d, None);
    let mut out = emit_array(&a, f)?;
    if f == Format::Grid {
        let crit = match triple_criterion(&d) {
            TripleCriterion::Constant {
                intersection,
                lambda_rc,
            } => format!("|x⁻¹D ∩ D⁽⁻¹⁾y| = {intersection} for all pairs, so λrc = {lambda_rc}"),
            TripleCriterion::Varies { first, second } => format!(
                "|x⁻¹D ∩ D⁽⁻¹⁾y| is {} at ({},{}) but {} at ({},{})",
                first.2, first.0, first.1, second.2, second.0, second.1
            ),
        };
        writeln!(out.stdout, "# criterion: {crit}")?;
    }
    Ok(out)
}

fn ta_verify(file: &str, f: Format) -> Result<Output> {
    let text = std::fs::read_to_string(file).with_context(|| format!("cannot read `{file}`"))?;
    let a = parse_array(&text)?;
    let verdict = a.verify()?;
    let stdout = match f {
        Format::Json => json_line(&serde_json::to_value(&verdict)?),
        Format::Csv => csv_line(&[
            match verdict.form {
                ArrayForm::Standard => "standard".into(),
                ArrayForm::Rl => "rl".into(),
            },
            verdict.triple_array.to_string(),
            verdict.summary(),
        ]),
        Format::Grid => {
            let mut s = format!("{}\n", verdict.summary());
            for v in &verdict.violations {
                writeln!(s, "{v}")?;
            }
            s
        }
    };
    let rejection = verdict.violations.first().map(|v| v.to_string());
    Ok(Output { stdout, rejection })
}

fn family_error(e: FamilyError) -> anyhow::Error {
    match e {
        FamilyError::TheoremViolation(m) => Rejected(format!("theorem violation: {m}")).into(),
        other => anyhow!(other),
    }
}

fn family_gen(u: usize, emit: bool, max_u: usize, f: Format) -> Result<Output> {
    let opts = FamilyOptions { max_u };
    if emit {
        let fa = family_triple_array(u, opts).map_err(family_error)?;
        let stdout = match f {
            Format::Json => {
                let mut a = serde_json::to_value(ArrayJson::from_array(&fa.array))?;
                a["verdict"] = serde_json::to_value(&fa.verdict)?;
                json_line(&json!({
                    "u": u,
                    "params": fa.set.params(),
                    "members": fa.set.member_names(),
                    "provenance": fa.provenance,
                    "array": a,
                    "summary": fa.params.to_string(),
                }))
            }
            Format::Csv => {
                eprintln!("{}", fa.params);
                array_to_csv(&fa.array)?
            }
            Format::Grid => {
                let mut s = String::new();
                for line in fa.provenance.render().lines() {
                    writeln!(s, "# {line}")?;
                }
                s += &array_to_grid(&fa.array);
                writeln!(s, "# verdict: {}", fa.params)?;
                s
            }
        };
        return Ok(Output::ok(stdout));
    }
    let (d, prov) = generate_family_member(u, opts).map_err(family_error)?;
    let stdout = match f {
        Format::Json => json_line(&json!({
            "u": u,
            "params": d.params(),
            "members": d.member_names(),
            "reversible": d.is_reversible(),
            "provenance": prov,
        })),
        Format::Csv => csv_line(&[
            u.to_string(),
            d.params().to_string(),
            d.member_names().join(" "),
        ]),
        Format::Grid => {
            let mut s = prov.render();
            writeln!(s, "{d}")?;
            s
        }
    };
    Ok(Output::ok(stdout))
}

fn catalog_list(f: Format) -> Result<Output> {
    let entries = catalog::list_entries();
    let out = match f {
        Format::Json => json_line(&serde_json::to_value(entries)?),
        Format::Csv => {
            let mut s = csv_line(&["id".into(), "group".into(), "params".into(), "note".into()]);
            for e in entries {
                s += &csv_line(&[
                    e.id.into(),
                    e.group_spec.into(),
                    e.ds_params().to_string(),
                    e.note.into(),
                ]);
            }
            s
        }
        Format::Grid => {
            let mut s = String::new();
            for e in entries {
                writeln!(
                    s,
                    "{:<7} {:<9} {:<10} {}",
                    e.id,
                    e.group_spec,
                    e.ds_params().to_string(),
                    e.note
                )?;
            }
            s
        }
    };
    Ok(Output::ok(out))
}

fn catalog_show(id: &str, f: Format) -> Result<Output> {
    let e = catalog::entry(id)?;
    let d = e.load()?;
    let out = match f {
        Format::Json => json_line(&serde_json::to_value(DsJson::from_set(
            &d,
            GroupRef::Named(e.group_spec.into()),
            Some(e.id.into()),
        ))?),
        Format::Csv => csv_line(&[
            e.id.into(),
            e.group_spec.into(),
            e.members.join(" "),
            d.params().to_string(),
        ]),
        Format::Grid => {
            let r = d.multiplier_report();
            let g = builtin_group(e.group_spec)?;
            let mut s = String::new();
            writeln!(s, "id {}", e.id)?;
            writeln!(
                s,
                "group {} (order {}, {})",
                e.group_spec,
                g.order(),
                if g.is_abelian() {
                    "abelian"
                } else {
                    "non-abelian"
                }
            )?;
            writeln!(s, "members {}", e.members.join(" "))?;
            writeln!(s, "params {}", d.params())?;
            let (a, b, c) = r.triple();
            writeln!(
                s,
                "reversible translates {a}, weak multiplier -1 {b}, left = right {c}"
            )?;
            if let Some(t) = &r.a_fixed_reversible_translate {
                writeln!(s, "reversible translate D{t}")?;
            }
            writeln!(s, "note {}", e.note)?;
            s
        }
    };
    Ok(Output::ok(out))
}
