//! Acceptance suite. Run with
//! `cargo test -p fibrecheck-core --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use fibrecheck_core::alexander::{full_report, AlexanderError, AlexanderReport};
use fibrecheck_core::fibring::{product_vanishing_test, scan, ScanConfig, ScanStatus};
use fibrecheck_core::fixtures::FixtureLibrary;
use fibrecheck_core::polyalg::{CoefficientField, LaurentPoly};
use fibrecheck_core::quotients::{enumerate_homs, image_closure, same_kernel, FiniteGroup, FiniteQuotient};
use fibrecheck_core::reidschreier::rewrite_subgroup;
use fibrecheck_core::words::{
    parse_presentation, tietze_variant, validate_character, Character, Presentation, TietzeMove, Word,
};

const Q: CoefficientField = CoefficientField::Rationals;
const F2: CoefficientField = CoefficientField::Prime(2);
const F3: CoefficientField = CoefficientField::Prime(3);
const F5: CoefficientField = CoefficientField::Prime(5);

/// Every Alexander computation in the suite goes through `reports`, which
/// counts instances; any rank/Smith disagreement surfaces as an error.
static INSTANCES: AtomicUsize = AtomicUsize::new(0);
static CROSS_CHECK_FAILURES: AtomicUsize = AtomicUsize::new(0);

fn reports(p: &Presentation, phi: &Character, q: &FiniteQuotient, f: CoefficientField) -> Vec<AlexanderReport> {
    INSTANCES.fetch_add(1, Ordering::Relaxed);
    match full_report(p, phi, q, f) {
        Ok(r) => r,
        Err(e @ AlexanderError::CrossCheck(_)) => {
            CROSS_CHECK_FAILURES.fetch_add(1, Ordering::Relaxed);
            panic!("{e}")
        }
        Err(e) => panic!("{e}"),
    }
}

fn deg1(p: &Presentation, phi: &Character, q: &FiniteQuotient, f: CoefficientField) -> AlexanderReport {
    reports(p, phi, q, f).remove(1)
}

fn run_scan(cfg: &ScanConfig) -> fibrecheck_core::fibring::FibringVerdict {
    let v = scan(cfg).unwrap_or_else(|e| {
        if matches!(e, fibrecheck_core::fibring::FibringError::Alexander(AlexanderError::CrossCheck(_))) {
            CROSS_CHECK_FAILURES.fetch_add(1, Ordering::Relaxed);
        }
        panic!("{e}")
    });
    INSTANCES.fetch_add(v.reports.len() / 2, Ordering::Relaxed);
    v
}

fn poly(f: CoefficientField, c: &[i64]) -> LaurentPoly {
    LaurentPoly::from_ints(f, 0, c)
}

fn fixture(spec: &str) -> (Presentation, Character) {
    let f = FixtureLibrary::get(spec).unwrap();
    (f.presentation, f.default_character)
}

fn character(p: &Presentation, values: &[i64]) -> Character {
    validate_character(p, values).unwrap()
}

fn scan_config(p: &Presentation, phi: &Character, max: usize) -> ScanConfig {
    let mut cfg = ScanConfig::new(p.clone(), phi.clone());
    cfg.max_quotient_order = max;
    cfg
}

/// Epimorphisms onto the trivial group, Z/2, Z/3, Z/4, Z/5, S3 and Z/6.
fn epimorphisms_up_to_6(p: &Presentation) -> Vec<FiniteQuotient> {
    let mut out = vec![FiniteQuotient::trivial(p)];
    let targets = [
        FiniteGroup::cyclic(2),
        FiniteGroup::cyclic(3),
        FiniteGroup::cyclic(4),
        FiniteGroup::cyclic(5),
        FiniteGroup::symmetric(3),
        FiniteGroup::cyclic(6),
    ];
    for t in targets {
        out.extend(enumerate_homs(p, &Arc::new(t), true));
    }
    out
}

/// One representative per kernel.
fn kernel_classes(p: &Presentation, qs: Vec<FiniteQuotient>) -> Vec<FiniteQuotient> {
    let mut kept: Vec<FiniteQuotient> = Vec::new();
    for q in qs {
        if !kept.iter().any(|k| same_kernel(p, k, &q)) {
            kept.push(q);
        }
    }
    kept
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// ---------------------------------------------------------------------------

/// BS(1,2) = <a, t | t a t^-1 a^-2>, phi(a) = 0, phi(t) = 1, trivial quotient.
///
/// Hand computation: d r/da = t - t a t^-1 a^-1 - t a t^-1 a^-2 evaluates to
/// t - 1 - 1 = t - 2, and d r/dt = 1 - t a t^-1 evaluates to 1 - 1 = 0. So
/// b1 = (0, t - 1)^T and b2 = (t - 2, 0). Cycles are spanned by (1, 0), the
/// boundary is (t - 2)(1, 0), hence H_1 = F[t^{+-1}]/(t - 2): order t - 2 over
/// Q and t + 1 over F_3. H_0 = coker(b1) = F[t^{+-1}]/(t - 1).
fn criterion_1() -> Outcome {
    let (p, phi) = fixture("bs:1:2");
    let start = Instant::now();
    let q = FiniteQuotient::trivial(&p);
    let over_q = reports(&p, &phi, &q, Q);
    let over_f3 = reports(&p, &phi, &q, F3);
    let elapsed = start.elapsed();
    ensure(over_q[1].order == Some(poly(Q, &[-2, 1])), format!("Q order {:?}", over_q[1].order))?;
    ensure(over_f3[1].order == Some(poly(F3, &[1, 1])), format!("F3 order {:?}", over_f3[1].order))?;
    ensure(over_q[0].order == Some(poly(Q, &[-1, 1])), format!("H0 order {:?}", over_q[0].order))?;
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("t - 2 over Q, t + 1 over F3, H0 t - 1, {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let (p, phi) = fixture("bs:1:2");
    let start = Instant::now();
    let v = run_scan(&scan_config(&p, &phi, 12));
    let elapsed = start.elapsed();
    ensure(v.status == ScanStatus::NoObstructionUpTo(12), format!("status {:?}", v.status))?;
    let vanishing = v.reports.iter().filter(|e| e.report.vanishing).count();
    ensure(vanishing == 0, format!("{vanishing} vanishing reports"))?;
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!("{} quotients, {} reports, none vanishing, {elapsed:.2?}", v.quotients.len(), v.reports.len()))
}

fn criterion_3() -> Outcome {
    let (p, phi) = fixture("trefoil");
    let r = deg1(&p, &phi, &FiniteQuotient::trivial(&p), Q);
    ensure(r.order == Some(poly(Q, &[1, -1, 1])), format!("order {:?}", r.order))?;
    let v = run_scan(&scan_config(&p, &phi, 6));
    ensure(v.status == ScanStatus::NoObstructionUpTo(6), format!("status {:?}", v.status))?;
    // x -> (1 2), y -> (2 3)
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let el = |label: &str| (0..6).find(|&e| s3.element_label(e) == label).unwrap();
    let target = FiniteQuotient::new(&p, s3.clone(), vec![el("(1 2)"), el("(2 3)")]).unwrap();
    let tested = v.quotients.iter().any(|t| {
        t.info.name == "S3"
            && same_kernel(&p, &FiniteQuotient::new(&p, s3.clone(), t.info.gen_images.clone()).unwrap(), &target)
    });
    ensure(tested, "S3 epimorphism not among tested quotients")?;
    Ok(format!("t^2 - t + 1; no obstruction to order 6 over {} quotients incl. S3", v.quotients.len()))
}

fn criterion_4() -> Outcome {
    let (p, phi) = fixture("klein");
    let r = deg1(&p, &phi, &FiniteQuotient::trivial(&p), Q);
    ensure(r.order == Some(poly(Q, &[1, 1])), format!("order {:?}", r.order))?;
    let v = run_scan(&scan_config(&p, &phi, 8));
    ensure(v.status == ScanStatus::NoObstructionUpTo(8), format!("status {:?}", v.status))?;
    ensure(v.reports.iter().all(|e| !e.report.vanishing), "a report vanishes")?;
    Ok(format!("t + 1; {} quotients of order <= 8 non-vanishing", v.quotients.len()))
}

fn criterion_5() -> Outcome {
    let (p, phi) = fixture("f2xz");
    let q = FiniteQuotient::trivial(&p);
    for f in [Q, F5] {
        let r = deg1(&p, &phi, &q, f);
        ensure(r.order == Some(poly(f, &[1, -2, 1])), format!("order over {f}: {:?}", r.order))?;
    }
    let v = run_scan(&scan_config(&p, &phi, 8));
    ensure(v.status == ScanStatus::NoObstructionUpTo(8), format!("z-projection status {:?}", v.status))?;

    let psi = character(&p, &[1, 0, 0]);
    let v = run_scan(&scan_config(&p, &psi, 8));
    ensure(v.status == ScanStatus::Obstructed, "phi(a) = 1 not obstructed")?;
    let w = v.witness.as_ref().unwrap();
    ensure(w.quotient_index == 0 && w.report.quotient.order == 1, "witness not at the trivial quotient")?;
    ensure(w.report.rank == 1, format!("rank {}", w.report.rank))?;
    let phrase = "not FP₁-semi-fibred; kernel not finitely generated";
    ensure(v.interpretation.iter().any(|l| l.contains(phrase)), "verdict text missing")?;
    Ok(format!("(t - 1)^2 over Q and F5; a-character obstructed at trivial quotient over {}", w.report.field))
}

fn criterion_6() -> Outcome {
    let mut cases: Vec<(&str, Presentation, Character)> = Vec::new();
    for spec in ["bs:1:2", "trefoil", "klein", "f2xz"] {
        let (p, phi) = fixture(spec);
        cases.push((spec, p, phi));
    }
    let (p, _) = fixture("f2xz");
    let psi = character(&p, &[1, 0, 0]);
    cases.push(("f2xz a=1", p, psi));

    let mut triples = 0;
    for (name, p, phi) in &cases {
        for q in kernel_classes(p, epimorphisms_up_to_6(p)) {
            let sub = rewrite_subgroup(p, &q, phi);
            let k = &sub.presentation;
            let trivial = FiniteQuotient::trivial(k);
            for f in [Q, F3] {
                let twisted = deg1(p, phi, &q, f);
                let untwisted = deg1(k, &sub.restricted_character, &trivial, f);
                ensure(
                    twisted.order == untwisted.order && twisted.vanishing == untwisted.vanishing,
                    format!(
                        "{name} {} {:?} over {f}: twisted {:?} untwisted {:?}",
                        q.group().name(),
                        q.gen_images(),
                        twisted.order,
                        untwisted.order
                    ),
                )?;
            }
            triples += 1;
        }
    }
    ensure(triples >= 20, format!("only {triples} triples"))?;
    Ok(format!("{triples} (group, character, quotient) triples agree exactly over Q and F3"))
}

fn criterion_8() -> Outcome {
    let trefoil = fixture("trefoil");
    let z2 = fixture("zn:2");
    let mut compared = 0;
    for (name, (p, phi)) in [("trefoil", trefoil), ("Z^2", z2)] {
        let new_gen = TietzeMove::NewGenerator { name: "u".into(), definition: Word::new(vec![1, 2, -1]) };
        let redundant = TietzeMove::RedundantRelator(vec![(Word::new(vec![2]), 0, 1), (Word::new(vec![-1, -1]), 0, -2)]);
        let v1 = tietze_variant(&p, &redundant).unwrap();
        let v2 = tietze_variant(&p, &new_gen).unwrap();
        let v3 = tietze_variant(&v2, &redundant).unwrap();
        let defs = [Word::new(vec![1, 2, -1])];
        let variants = [(v1, phi.clone(), 0), (v2, phi.extended(&defs), 1), (v3, phi.extended(&defs), 1)];

        let base_quotients = kernel_classes(&p, epimorphisms_up_to_6(&p));
        for q in &base_quotients {
            for f in [Q, F2] {
                let base = deg1(&p, &phi, q, f);
                for (v, psi, extra) in &variants {
                    let mut images = q.gen_images().to_vec();
                    if *extra == 1 {
                        images.push(q.evaluate(&defs[0]));
                    }
                    let qv = FiniteQuotient::new(v, q.group_arc(), images).unwrap();
                    let other = deg1(v, &character(v, psi.values()), &qv, f);
                    ensure(
                        other.vanishing == base.vanishing && other.order == base.order,
                        format!("{name} variant differs at {} over {f}: {:?} vs {:?}", q.group().name(), other.order, base.order),
                    )?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("3 variants each of trefoil and Z^2 agree on {compared} comparisons"))
}

/// Brute force over every tuple of generator images.
fn brute_force(p: &Presentation, g: &FiniteGroup) -> (usize, usize) {
    let n = p.generator_count();
    let mut homs = 0;
    let mut epis = 0;
    for code in 0..g.order().pow(n as u32) {
        let mut tuple = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            tuple.push(c % g.order());
            c /= g.order();
        }
        let kills = p.relators().iter().all(|r| {
            r.letters().iter().fold(0, |acc, &l| {
                let x = tuple[l.unsigned_abs() as usize - 1];
                g.mul(acc, if l > 0 { x } else { g.inv(x) })
            }) == 0
        });
        if kills {
            homs += 1;
            if image_closure(g, &tuple).len() == g.order() {
                epis += 1;
            }
        }
    }
    (homs, epis)
}

fn criterion_9() -> Outcome {
    let f2 = Presentation::free(&["x", "y"]);
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let homs = enumerate_homs(&f2, &s3, false).len();
    let epis = enumerate_homs(&f2, &s3, true).len();
    ensure((homs, epis) == (36, 18), format!("F2 -> S3: {homs} homs, {epis} epis"))?;
    ensure(brute_force(&f2, &s3) == (36, 18), "brute force disagrees for F2 -> S3")?;
    let (bs, _) = fixture("bs:1:2");
    let z3 = Arc::new(FiniteGroup::cyclic(3));
    let bs_epis = enumerate_homs(&bs, &z3, true).len();
    ensure(bs_epis == 2, format!("BS(1,2) -> Z/3: {bs_epis} epis"))?;
    ensure(brute_force(&bs, &z3).1 == 2, "brute force disagrees for BS(1,2) -> Z/3")?;
    Ok("Hom(F2,S3) = 36, Epi(F2,S3) = 18, Epi(BS(1,2),Z/3) = 2, all matching brute force".into())
}

fn criterion_10() -> Outcome {
    let mut cases: Vec<(String, Presentation, Character)> = Vec::new();
    for spec in ["bs:1:2", "bs:1:3", "trefoil", "klein", "f2xz", "zn:2", "f:2", "surface:2"] {
        let (p, phi) = fixture(spec);
        cases.push((spec.to_string(), p, phi));
    }
    let (p, _) = fixture("f2xz");
    let psi = character(&p, &[1, 0, 0]);
    cases.push(("f2xz a=1".into(), p, psi));

    let mut sign_checks = 0;
    let mut kernel_pairs = 0;
    for (name, p, phi) in &cases {
        let all = epimorphisms_up_to_6(p);
        let mut verdicts = Vec::with_capacity(all.len());
        for q in &all {
            let plus = deg1(p, phi, q, F3);
            let minus = deg1(p, &phi.negated(), q, F3);
            ensure(plus.vanishing == minus.vanishing, format!("{name}: sign flip changes verdict at {}", q.label()))?;
            sign_checks += 1;
            verdicts.push(plus.vanishing);
        }
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if all[i].group().order() == all[j].group().order() && same_kernel(p, &all[i], &all[j]) {
                    ensure(verdicts[i] == verdicts[j], format!("{name}: same kernel, different verdicts"))?;
                    kernel_pairs += 1;
                }
            }
        }
    }
    ensure(kernel_pairs > 0, "no same-kernel pairs exercised")?;
    Ok(format!("{sign_checks} sign checks, {kernel_pairs} same-kernel pairs"))
}

fn criterion_11() -> Outcome {
    let z = Presentation::free(&["s"]);
    let (f2xz, _) = fixture("f2xz");
    let psi = character(&f2xz, &[1, 0, 0]);
    let mut composites = 0;
    for q in kernel_classes(&f2xz, epimorphisms_up_to_6(&f2xz)) {
        if deg1(&f2xz, &psi, &q, Q).vanishing {
            ensure(product_vanishing_test(&f2xz, &psi, &q, &z).unwrap(), format!("composite through {} does not vanish", q.label()))?;
            composites += 1;
        }
    }
    ensure(composites > 0, "no vanishing factor quotient")?;
    let (tr, phi) = fixture("trefoil");
    let nonvanishing = !product_vanishing_test(&tr, &phi, &FiniteQuotient::trivial(&tr), &z).unwrap();
    ensure(nonvanishing, "trefoil x Z vanishes at the trivial quotient")?;
    Ok(format!("(F2 x Z) x Z vanishes through {composites} composite quotients; trefoil x Z non-vanishing"))
}

fn criterion_7() -> Outcome {
    let instances = INSTANCES.load(Ordering::Relaxed);
    let failures = CROSS_CHECK_FAILURES.load(Ordering::Relaxed);
    ensure(failures == 0, format!("{failures} cross-check failures"))?;
    ensure(instances > 0, "no instances computed")?;
    Ok(format!("rank and Smith routes agree on all {instances} instances"))
}

type Criterion = (usize, &'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        (1, "BS(1,2) orders", criterion_1),
        (2, "BS(1,2) scan", criterion_2),
        (3, "trefoil", criterion_3),
        (4, "Klein bottle", criterion_4),
        (5, "F2 x Z", criterion_5),
        (6, "untwisting", criterion_6),
        (8, "Tietze invariance", criterion_8),
        (9, "quotient enumeration", criterion_9),
        (10, "sign and kernel invariance", criterion_10),
        (11, "product propagation", criterion_11),
        // runs last so it covers every instance above
        (7, "rank/Smith cross-check", criterion_7),
    ];
    let mut results = Vec::new();
    for (n, name, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(msg)
        });
        results.push((n, name, outcome));
    }
    results.sort_by_key(|r| r.0);
    let mut failed = Vec::new();
    for (n, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
            Err(why) => {
                println!("criterion {n:>2} FAIL  {name}: {why}");
                failed.push(*n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn parsed_and_fixture_presentations_agree() {
    let parsed = parse_presentation("gens: a t\nrels: t a t^-1 a^-2").unwrap();
    assert_eq!(parsed, fixture("bs:1:2").0);
}
