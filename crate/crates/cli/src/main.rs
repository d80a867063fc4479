use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use fibrecheck_core::alexander::{full_report_with, AlexanderError, AlexanderReport, DEFAULT_ORDER_CEILING};
use fibrecheck_core::fibring::{emit_report, scan, FibringError, ReportFormat, ScanConfig};
use fibrecheck_core::fixtures::FixtureLibrary;
use fibrecheck_core::foxcalc::FoxJacobian;
use fibrecheck_core::polyalg::CoefficientField;
use fibrecheck_core::quotients::{enumerate_homs, FiniteGroup, FiniteQuotient};
use fibrecheck_core::reidschreier::rewrite_subgroup;
use fibrecheck_core::words::{parse_character_values, parse_presentation, validate_character, Character, Presentation};

#[derive(Parser)]
#[command(name = "fibrecheck", version, about = "Twisted Alexander polynomials and fibring obstructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan finite quotients for a vanishing degree-1 twisted Alexander polynomial.
    Scan(ScanArgs),
    /// Twisted Alexander reports for one quotient.
    Alex(QuotientArgs),
    /// Compare a twisted order with the untwisted order of the kernel.
    UntwistCheck(QuotientArgs),
    /// Count homomorphisms onto a finite group.
    Homs(HomsArgs),
}

#[derive(Args)]
struct GroupArgs {
    /// Presentation file (`gens: ...` / `rels: ...`).
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    pres: Option<PathBuf>,
    /// Built-in group: bs:1:<n>, trefoil, klein, zn:<n>, f:<n>, f2xz, surface:<g>.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args)]
struct CharArgs {
    /// Character values, e.g. "a=0,t=1"; unlisted generators map to 0.
    #[arg(long = "char")]
    character: Option<String>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    character: CharArgs,
    #[arg(long, default_value_t = 12)]
    max_quotient_order: usize,
    /// Comma-separated coefficient fields.
    #[arg(long, default_value = "f2,f3,q", value_delimiter = ',')]
    fields: Vec<String>,
    /// Assert that the group is LERF (not verified).
    #[arg(long)]
    assert_lerf: bool,
    /// Assert that the group is TAP1 (not verified).
    #[arg(long)]
    assert_tap1: bool,
    /// Extra target group given as a multiplication table file.
    #[arg(long)]
    extra_group: Vec<PathBuf>,
    /// Write JSON to this path (`-` for standard output).
    #[arg(long, num_args = 0..=1, default_missing_value = "-")]
    json: Option<String>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Largest |Q| * generators for which orders are computed.
    #[arg(long, default_value_t = DEFAULT_ORDER_CEILING)]
    order_ceiling: usize,
}

#[derive(Args)]
struct QuotientArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    character: CharArgs,
    /// `trivial`, or `<group>:<id>,<id>,...` with one element id per generator
    /// (e.g. `z3:0,1`, `s3:1,3`).
    #[arg(long, default_value = "trivial")]
    quotient: String,
    #[arg(long, default_value = "q", value_delimiter = ',')]
    fields: Vec<String>,
    /// Emit JSON on standard output.
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = DEFAULT_ORDER_CEILING)]
    order_ceiling: usize,
}

#[derive(Args)]
struct HomsArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Target group: trivial, z<m>, s<n>, or a table file.
    #[arg(long)]
    target: String,
    #[arg(long)]
    epi_only: bool,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Input(anyhow::Error),
    Internal(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<AlexanderError> for Failure {
    fn from(e: AlexanderError) -> Self {
        match e {
            AlexanderError::CrossCheck(_) | AlexanderError::ChainCondition | AlexanderError::Poly(_) => {
                Failure::Internal(e.to_string())
            }
            AlexanderError::Fox(_) => Failure::Input(e.into()),
        }
    }
}

impl From<FibringError> for Failure {
    fn from(e: FibringError) -> Self {
        match e {
            FibringError::Alexander(a) => a.into(),
            other => Failure::Input(other.into()),
        }
    }
}

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Input(_) => 2,
        Failure::Internal(_) => 3,
    }
}

struct Group {
    presentation: Presentation,
    default_character: Option<Character>,
    notes: Vec<String>,
}

fn load_group(args: &GroupArgs) -> anyhow::Result<Group> {
    if let Some(spec) = &args.fixture {
        let f = FixtureLibrary::get(spec)?;
        return Ok(Group { presentation: f.presentation, default_character: Some(f.default_character), notes: f.notes });
    }
    let path = args.pres.as_ref().expect("clap requires --pres or --fixture");
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    // an optional `char:` line in the file supplies a default character
    let (char_lines, pres_lines): (Vec<&str>, Vec<&str>) =
        text.lines().partition(|l| l.trim_start().starts_with("char:"));
    if char_lines.len() > 1 {
        bail!("{}: more than one `char:` line", path.display());
    }
    let presentation =
        parse_presentation(&pres_lines.join("\n")).with_context(|| format!("parsing {}", path.display()))?;
    let default_character = match char_lines.first() {
        Some(line) => Some(character_from_text(&presentation, line)?),
        None => None,
    };
    Ok(Group { presentation, default_character, notes: Vec::new() })
}

fn character_from_text(p: &Presentation, text: &str) -> anyhow::Result<Character> {
    let values = parse_character_values(p, text)?;
    Ok(validate_character(p, &values)?)
}

fn resolve_character(group: &Group, args: &CharArgs) -> anyhow::Result<Character> {
    match (&args.character, &group.default_character) {
        (Some(text), _) => character_from_text(&group.presentation, text),
        (None, Some(c)) => Ok(c.clone()),
        (None, None) => bail!("no character given; use --char"),
    }
}

fn parse_fields(list: &[String]) -> anyhow::Result<Vec<CoefficientField>> {
    let fields = list
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<CoefficientField>().map_err(anyhow::Error::from))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if fields.is_empty() {
        bail!("no coefficient fields given");
    }
    Ok(fields)
}

fn load_target(spec: &str) -> anyhow::Result<FiniteGroup> {
    if let Ok(g) = FiniteGroup::from_name(spec) {
        return Ok(g);
    }
    let path = PathBuf::from(spec);
    let text = fs::read_to_string(&path).map_err(|_| anyhow!("unknown group `{spec}` (expected trivial, z<m>, s<n> or a table file)"))?;
    let name = path.file_stem().map_or_else(|| spec.to_string(), |s| s.to_string_lossy().into_owned());
    Ok(FiniteGroup::parse_table(name, &text)?)
}

fn parse_quotient(p: &Presentation, spec: &str) -> anyhow::Result<FiniteQuotient> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("trivial") {
        return Ok(FiniteQuotient::trivial(p));
    }
    let (group, images) = spec.split_once(':').ok_or_else(|| anyhow!("bad quotient `{spec}` (expected <group>:<ids>)"))?;
    let group = FiniteGroup::from_name(group)?;
    let images = images
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| anyhow!("bad element id `{s}` in `{spec}`")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(FiniteQuotient::new(p, Arc::new(group), images)?)
}

fn one_line(p: &Presentation) -> String {
    p.render().trim_end().replace('\n', " | ")
}

fn order_text(r: &AlexanderReport) -> String {
    r.order.as_ref().map_or_else(|| "skipped".into(), ToString::to_string)
}

fn quotient_text(q: &FiniteQuotient) -> String {
    let labels: Vec<String> = q.gen_images().iter().map(|&e| q.group().element_label(e)).collect();
    format!("{} [{}]", q.group().name(), labels.join(", "))
}

fn run_scan(args: &ScanArgs) -> Result<String, Failure> {
    let group = load_group(&args.group)?;
    let character = resolve_character(&group, &args.character)?;
    let mut cfg = ScanConfig::new(group.presentation, character);
    cfg.max_quotient_order = args.max_quotient_order;
    cfg.fields = parse_fields(&args.fields)?;
    cfg.asserted_lerf = args.assert_lerf;
    cfg.asserted_tap1 = args.assert_tap1;
    cfg.order_ceiling = args.order_ceiling;
    cfg.jobs = args.jobs;
    cfg.notes = group.notes;
    for path in &args.extra_group {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let name = path.file_stem().map_or_else(|| "extra".into(), |s| s.to_string_lossy().into_owned());
        cfg.extra_groups.push(FiniteGroup::parse_table(name, &text).map_err(anyhow::Error::from)?);
    }
    let verdict = scan(&cfg)?;
    match args.json.as_deref() {
        Some("-") => Ok(emit_report(&verdict, ReportFormat::Json)),
        Some(path) => {
            fs::write(path, emit_report(&verdict, ReportFormat::Json)).with_context(|| format!("writing {path}"))?;
            Ok(emit_report(&verdict, ReportFormat::Text))
        }
        None => Ok(emit_report(&verdict, ReportFormat::Text)),
    }
}

fn run_alex(args: &QuotientArgs) -> Result<String, Failure> {
    let group = load_group(&args.group)?;
    let phi = resolve_character(&group, &args.character)?;
    let p = &group.presentation;
    let q = parse_quotient(p, &args.quotient)?;
    let fields = parse_fields(&args.fields)?;
    let jac = FoxJacobian::new(p);
    let mut reports = Vec::new();
    for f in fields {
        reports.extend(full_report_with(p, &jac, &phi, &q, f, args.order_ceiling)?);
    }
    if args.json {
        let doc = json!({
            "schema": 1,
            "presentation": one_line(p),
            "character": phi.label(p),
            "reports": reports,
        });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")));
    }
    let mut out = String::new();
    let _ = writeln!(out, "presentation: {}", one_line(p));
    let _ = writeln!(out, "character: {}", phi.label(p));
    let _ = writeln!(out, "quotient: {}", quotient_text(&q));
    let _ = writeln!(out, "convention: {}", fibrecheck_core::alexander::CONVENTION);
    for r in &reports {
        let _ = writeln!(
            out,
            "{} H{}: {} rank {} order {}",
            r.field,
            r.degree,
            if r.vanishing { "vanishing" } else { "non-vanishing" },
            r.rank,
            order_text(r)
        );
    }
    Ok(out)
}

fn run_untwist(args: &QuotientArgs) -> Result<String, Failure> {
    let group = load_group(&args.group)?;
    let phi = resolve_character(&group, &args.character)?;
    let p = &group.presentation;
    let q = parse_quotient(p, &args.quotient)?;
    let fields = parse_fields(&args.fields)?;
    let sub = rewrite_subgroup(p, &q, &phi);
    let k = &sub.presentation;
    let (jac_p, jac_k) = (FoxJacobian::new(p), FoxJacobian::new(k));
    let trivial = FiniteQuotient::trivial(k);
    let mut rows = Vec::new();
    for f in fields {
        let twisted = full_report_with(p, &jac_p, &phi, &q, f, args.order_ceiling)?.remove(1);
        let untwisted =
            full_report_with(k, &jac_k, &sub.restricted_character, &trivial, f, args.order_ceiling)?.remove(1);
        rows.push((f, twisted, untwisted));
    }
    let mismatch = rows.iter().any(|(_, a, b)| a.vanishing != b.vanishing || a.order != b.order);
    let out = if args.json {
        let comparisons: Vec<_> = rows
            .iter()
            .map(|(f, a, b)| json!({ "field": f, "twisted": a, "untwisted": b, "match": a.vanishing == b.vanishing && a.order == b.order }))
            .collect();
        let doc = json!({
            "schema": 1,
            "presentation": one_line(p),
            "character": phi.label(p),
            "subgroup": {
                "index": sub.index,
                "presentation": one_line(k),
                "character": sub.restricted_character.label(k),
            },
            "comparisons": comparisons,
        });
        format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "presentation: {}", one_line(p));
        let _ = writeln!(out, "character: {}", phi.label(p));
        let _ = writeln!(out, "quotient: {}", quotient_text(&q));
        let _ = writeln!(out, "kernel (index {}): {}", sub.index, one_line(k));
        let _ = writeln!(out, "restricted character: {}", sub.restricted_character.label(k));
        for (f, a, b) in &rows {
            let verdict = if a.vanishing == b.vanishing && a.order == b.order { "match" } else { "MISMATCH" };
            let _ = writeln!(out, "{f}: twisted {} | untwisted {} | {verdict}", order_text(a), order_text(b));
        }
        out
    };
    if mismatch {
        return Err(Failure::Internal(format!("twisted and untwisted orders differ\n{out}")));
    }
    Ok(out)
}

fn run_homs(args: &HomsArgs) -> Result<String, Failure> {
    let group = load_group(&args.group)?;
    let p = &group.presentation;
    let target = Arc::new(load_target(&args.target)?);
    let homs = enumerate_homs(p, &target, args.epi_only);
    let kind = if args.epi_only { "epimorphisms" } else { "homomorphisms" };
    if args.json {
        let list: Vec<_> = homs
            .iter()
            .map(|q| json!({ "gen_images": q.gen_images(), "surjective": q.is_surjective() }))
            .collect();
        let doc = json!({
            "schema": 1,
            "presentation": one_line(p),
            "target": { "name": target.name(), "order": target.order() },
            "kind": kind,
            "count": homs.len(),
            "maps": list,
        });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")));
    }
    let mut out = String::new();
    let _ = writeln!(out, "presentation: {}", one_line(p));
    let _ = writeln!(out, "target: {target}");
    let _ = writeln!(out, "{kind}: {}", homs.len());
    for q in &homs {
        let ids: Vec<String> = q.gen_images().iter().map(ToString::to_string).collect();
        let mark = if q.is_surjective() { "" } else { " (not onto)" };
        let _ = writeln!(out, "  {} = {}{mark}", ids.join(","), quotient_text(q));
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Scan(a) => run_scan(a),
        Command::Alex(a) => run_alex(a),
        Command::UntwistCheck(a) => run_untwist(a),
        Command::Homs(a) => run_homs(a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Input(e) => eprintln!("error: {e:#}"),
                Failure::Internal(msg) => eprintln!("internal check failed: {msg}"),
            }
            ExitCode::from(exit_code(&f))
        }
    }
}
