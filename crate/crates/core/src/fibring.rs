//! Bounded scan over finite quotients and coefficient fields looking for a
//! vanishing twisted Alexander polynomial, and the verdict it supports.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::alexander::{
    degree_one_vanishing, full_report_with, AlexanderError, AlexanderReport, QuotientInfo, CONVENTION,
    DEFAULT_ORDER_CEILING,
};
use crate::foxcalc::FoxJacobian;
use crate::polyalg::CoefficientField;
use crate::quotients::{build_catalog, enumerate_homs, same_kernel, FiniteGroup, FiniteQuotient};
use crate::words::{direct_product, validate_character, Character, Presentation};

pub const SCHEMA_VERSION: u32 = 1;

const OBSTRUCTED_TEXT: &str = "not FP₁-semi-fibred; kernel not finitely generated";
const CONDITIONAL_TEXT: &str =
    "consistent with algebraically fibred; certificate complete only under exhaustive quantifier";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FibringError {
    #[error("the character is zero; a non-trivial character is required")]
    ZeroCharacter,
    #[error("no coefficient fields to probe")]
    NoFields,
    #[error("maximum quotient order must be at least 1")]
    InvalidBound,
    #[error("character has {got} values, presentation has {expected} generators")]
    CharacterLength { expected: usize, got: usize },
    #[error(transparent)]
    Alexander(#[from] AlexanderError),
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub presentation: Presentation,
    pub character: Character,
    pub max_quotient_order: usize,
    pub fields: Vec<CoefficientField>,
    pub extra_groups: Vec<FiniteGroup>,
    pub asserted_lerf: bool,
    pub asserted_tap1: bool,
    /// Largest `|Q| * g` for which orders are computed.
    pub order_ceiling: usize,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Facts about the group supplied by the caller, copied into the
    /// interpretation.
    pub notes: Vec<String>,
}

impl ScanConfig {
    pub fn new(presentation: Presentation, character: Character) -> Self {
        ScanConfig {
            presentation,
            character,
            max_quotient_order: 12,
            fields: vec![CoefficientField::Prime(2), CoefficientField::Prime(3), CoefficientField::Rationals],
            extra_groups: Vec::new(),
            asserted_lerf: false,
            asserted_tap1: false,
            order_ceiling: DEFAULT_ORDER_CEILING,
            jobs: None,
            notes: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+phi",
            Sign::Minus => "-phi",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanStatus {
    Obstructed,
    NoObstructionUpTo(usize),
}

impl Serialize for ScanStatus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            ScanStatus::Obstructed => "obstructed",
            ScanStatus::NoObstructionUpTo(_) => "no_obstruction",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TestedQuotient {
    pub index: usize,
    #[serde(flatten)]
    pub info: QuotientInfo,
    /// Generator images in readable form (cycle notation for permutations).
    pub images: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkippedQuotient {
    #[serde(flatten)]
    pub info: QuotientInfo,
    /// Index of the tested quotient with the same kernel.
    pub representative: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub quotient_index: usize,
    pub sign: Sign,
    pub report: AlexanderReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct FibringVerdict {
    pub status: ScanStatus,
    pub bound: usize,
    pub presentation: String,
    pub character: String,
    pub fields: Vec<CoefficientField>,
    pub asserted_lerf: bool,
    pub asserted_tap1: bool,
    pub convention: &'static str,
    pub witness: Option<ScanEntry>,
    pub interpretation: Vec<String>,
    pub warnings: Vec<String>,
    pub quotients: Vec<TestedQuotient>,
    pub skipped: Vec<SkippedQuotient>,
    pub reports: Vec<ScanEntry>,
}

/// Epimorphisms onto the trivial group and every catalog group, in catalog
/// order, with kernel duplicates set aside.
pub fn candidate_quotients(
    p: &Presentation,
    max_order: usize,
    extra: Vec<FiniteGroup>,
) -> (Vec<FiniteQuotient>, Vec<SkippedQuotient>, Vec<String>) {
    let catalog = build_catalog(max_order, extra);
    let mut kept = vec![FiniteQuotient::trivial(p)];
    let mut skipped = Vec::new();
    for group in catalog.groups() {
        for q in enumerate_homs(p, group, true) {
            match kept.iter().position(|k| k.group().order() == q.group().order() && same_kernel(p, k, &q)) {
                Some(rep) => skipped.push(SkippedQuotient { info: QuotientInfo::of(&q), representative: rep }),
                None => kept.push(q),
            }
        }
    }
    (kept, skipped, catalog.names())
}

pub fn scan(cfg: &ScanConfig) -> Result<FibringVerdict, FibringError> {
    let p = &cfg.presentation;
    if cfg.character.values().len() != p.generator_count() {
        return Err(FibringError::CharacterLength { expected: p.generator_count(), got: cfg.character.values().len() });
    }
    if cfg.character.is_zero() {
        return Err(FibringError::ZeroCharacter);
    }
    if cfg.fields.is_empty() {
        return Err(FibringError::NoFields);
    }
    if cfg.max_quotient_order == 0 {
        return Err(FibringError::InvalidBound);
    }

    let (quotients, skipped, catalog) = candidate_quotients(p, cfg.max_quotient_order, cfg.extra_groups.clone());
    let mut warnings = Vec::new();
    if catalog.is_empty() {
        warnings.push("quotient catalog is empty; only the trivial quotient was tested".to_string());
    }
    let jac = FoxJacobian::new(p);
    let negated = cfg.character.negated();
    let jobs: Vec<(usize, usize, Sign)> = (0..quotients.len())
        .flat_map(|qi| (0..cfg.fields.len()).flat_map(move |fi| [(qi, fi, Sign::Plus), (qi, fi, Sign::Minus)]))
        .collect();

    // Smallest quotient index with a vanishing report so far; jobs beyond it
    // are skipped, jobs at or below it always run.
    let cutoff = AtomicUsize::new(usize::MAX);
    let run = |&(qi, fi, sign): &(usize, usize, Sign)| -> Option<Result<Vec<ScanEntry>, AlexanderError>> {
        if qi > cutoff.load(Ordering::Relaxed) {
            return None;
        }
        let phi = if sign == Sign::Plus { &cfg.character } else { &negated };
        let result = full_report_with(p, &jac, phi, &quotients[qi], cfg.fields[fi], cfg.order_ceiling);
        Some(result.map(|reports| {
            if reports.iter().any(|r| r.degree == 1 && r.vanishing) {
                cutoff.fetch_min(qi, Ordering::Relaxed);
            }
            reports.into_iter().map(|report| ScanEntry { quotient_index: qi, sign, report }).collect()
        }))
    };
    let outcomes: Vec<Option<Result<Vec<ScanEntry>, AlexanderError>>> = match cfg.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(|| jobs.par_iter().map(run).collect()),
        None => jobs.par_iter().map(run).collect(),
    };

    let limit = cutoff.load(Ordering::Relaxed);
    let mut reports = Vec::new();
    for ((qi, _, _), outcome) in jobs.iter().zip(outcomes) {
        if *qi > limit {
            continue;
        }
        reports.extend(outcome.expect("jobs up to the cutoff always run")?);
    }
    let witness = reports.iter().find(|e| e.report.degree == 1 && e.report.vanishing).cloned();
    let tested = if limit == usize::MAX { quotients.len() } else { limit + 1 };
    let quotient_list = quotients[..tested]
        .iter()
        .enumerate()
        .map(|(index, q)| TestedQuotient {
            index,
            info: QuotientInfo::of(q),
            images: q.gen_images().iter().map(|&e| q.group().element_label(e)).collect(),
        })
        .collect();
    let skipped = skipped.into_iter().filter(|s| s.representative < tested).collect();

    let status = if witness.is_some() {
        ScanStatus::Obstructed
    } else {
        ScanStatus::NoObstructionUpTo(cfg.max_quotient_order)
    };
    let interpretation = interpret(cfg, status, witness.as_ref());
    Ok(FibringVerdict {
        status,
        bound: cfg.max_quotient_order,
        presentation: p.render().trim_end().replace('\n', " | "),
        character: cfg.character.label(p),
        fields: cfg.fields.clone(),
        asserted_lerf: cfg.asserted_lerf,
        asserted_tap1: cfg.asserted_tap1,
        convention: CONVENTION,
        witness,
        interpretation,
        warnings,
        quotients: quotient_list,
        skipped,
        reports,
    })
}

fn interpret(cfg: &ScanConfig, status: ScanStatus, witness: Option<&ScanEntry>) -> Vec<String> {
    let mut out = Vec::new();
    match (status, witness) {
        (ScanStatus::Obstructed, Some(w)) => {
            out.push(format!(
                "Obstructed: the degree-1 twisted Alexander polynomial of {} vanishes for the quotient {} {:?} over {}.",
                w.sign.symbol(),
                w.report.quotient.name,
                w.report.quotient.gen_images,
                w.report.field
            ));
            out.push(format!("Unconditionally, phi is {OBSTRUCTED_TEXT}."));
        }
        (status, _) => {
            let bound = match status {
                ScanStatus::NoObstructionUpTo(b) => b,
                ScanStatus::Obstructed => cfg.max_quotient_order,
            };
            out.push(format!(
                "No obstruction: every degree-1 twisted Alexander polynomial of +phi and -phi is non-zero for quotients of order at most {bound}."
            ));
            if cfg.asserted_lerf || cfg.asserted_tap1 {
                let hyp = match (cfg.asserted_lerf, cfg.asserted_tap1) {
                    (true, true) => "LERF and TAP1",
                    (true, false) => "LERF",
                    _ => "TAP1",
                };
                out.push(format!(
                    "Under the asserted {hyp} hypothesis the result is {CONDITIONAL_TEXT} (all finite quotients); this scan is a finite truncation."
                ));
            } else {
                out.push(
                    "Inconclusive: without a TAP1 or LERF hypothesis, non-vanishing does not certify fibring."
                        .to_string(),
                );
                out.push(
                    "Caution: BS(1,n) with n >= 2 has non-vanishing twisted polynomials for every finite quotient, \
                     yet its kernel is not finitely generated."
                        .to_string(),
                );
            }
        }
    }
    out.extend(cfg.notes.iter().cloned());
    out
}

/// Degree-1 verdict over `Q` for `G_1 x G_2` with `phi = (phi_1, 0)` and the
/// quotient `G_1 x G_2 -> G_1 -> Q`.
pub fn product_vanishing_test(
    p1: &Presentation,
    phi1: &Character,
    q1: &FiniteQuotient,
    p2: &Presentation,
) -> Result<bool, FibringError> {
    if phi1.is_zero() {
        return Err(FibringError::ZeroCharacter);
    }
    let product = direct_product(p1, p2);
    let mut values = phi1.values().to_vec();
    values.resize(product.generator_count(), 0);
    let phi = validate_character(&product, &values).expect("(phi_1, 0) kills the product relators");
    let q = q1.through_projection(product.generator_count());
    Ok(degree_one_vanishing(&product, &phi, &q, CoefficientField::Rationals)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Serialize)]
struct Document<'a> {
    schema: u32,
    tool: &'static str,
    version: &'static str,
    #[serde(flatten)]
    verdict: &'a FibringVerdict,
}

pub fn emit_report(v: &FibringVerdict, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let doc = Document { schema: SCHEMA_VERSION, tool: "fibrecheck", version: env!("CARGO_PKG_VERSION"), verdict: v };
            let mut s = serde_json::to_string_pretty(&doc).expect("verdict serializes");
            s.push('\n');
            s
        }
        ReportFormat::Text => render_text(v),
    }
}

fn render_order(r: &AlexanderReport) -> String {
    match &r.order {
        Some(o) => o.to_string(),
        None => "skipped".to_string(),
    }
}

fn render_text(v: &FibringVerdict) -> String {
    let mut s = String::new();
    let fields: Vec<String> = v.fields.iter().map(ToString::to_string).collect();
    let _ = writeln!(s, "presentation: {}", v.presentation);
    let _ = writeln!(s, "character: {}", v.character);
    let _ = writeln!(s, "fields: {}", fields.join(", "));
    let _ = writeln!(s, "quotient order bound: {}", v.bound);
    let _ = writeln!(s, "assertions: lerf={} tap1={}", v.asserted_lerf, v.asserted_tap1);
    let _ = writeln!(s, "convention: {}", v.convention);
    let _ = writeln!(s, "quotients tested: {} ({} skipped as kernel duplicates)", v.quotients.len(), v.skipped.len());
    for q in &v.quotients {
        let _ = writeln!(s, "  #{} {} [{}]", q.index, q.info.name, q.images.join(", "));
    }
    let status = match v.status {
        ScanStatus::Obstructed => "obstructed".to_string(),
        ScanStatus::NoObstructionUpTo(b) => format!("no obstruction up to order {b}"),
    };
    let _ = writeln!(s, "status: {status}");
    if let Some(w) = &v.witness {
        let _ = writeln!(
            s,
            "witness: quotient #{} {} {:?}, {}, field {}, degree 1, rank {}",
            w.quotient_index, w.report.quotient.name, w.report.quotient.gen_images, w.sign.symbol(), w.report.field, w.report.rank
        );
    }
    let _ = writeln!(s, "reports:");
    for e in &v.reports {
        let r = &e.report;
        let _ = writeln!(
            s,
            "  #{} {} {} H{}: {} rank {} order {}",
            e.quotient_index,
            e.sign.symbol(),
            r.field,
            r.degree,
            if r.vanishing { "vanishing" } else { "non-vanishing" },
            r.rank,
            render_order(r)
        );
    }
    let _ = writeln!(s, "interpretation:");
    for line in &v.interpretation {
        let _ = writeln!(s, "  {line}");
    }
    if !v.warnings.is_empty() {
        let _ = writeln!(s, "warnings:");
        for w in &v.warnings {
            let _ = writeln!(s, "  {w}");
        }
    }
    s
}
