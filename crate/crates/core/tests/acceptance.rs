//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use desiree_core::model::{load_model_lenient, stats, ElementKind, KindCount, ModelStore, QualityForm};
use desiree_core::operators::{construct_deuniversalize, construct_scale, DeUniversalizeArgs, ScaleFactor};
use desiree_core::query::eval_query;
use desiree_core::reasoner::{admissible, check_consistency, oracle_subsumes_with, value_grid, OracleBounds, OracleOutcome, ReasonerConfig, Tbox};
use desiree_core::syntax::{parse_description_str, parse_model_file, render_model_file};
use desiree_core::{load_model, Description, OperatorKind, Rational, Reasoner, RegionExpr, Strength, Verdict, Verdict3};
use proptest::test_runner::{Config, TestRunner};

const SCALE_BUDGET: Duration = Duration::from_millis(1);
const PCT_BUDGET: Duration = Duration::from_secs(1);
const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const ROUND_TRIP_BUDGET: Duration = Duration::from_secs(10);

const PCT_CASES: usize = 100;
const ORACLE_PAIRS: usize = 500;
const ROUND_TRIP_CASES: usize = 1000;
/// Interpretations per oracle call are capped at 2^ORACLE_BITS.
const ORACLE_BITS: u32 = 18;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn model(text: &str) -> ModelStore {
    load_model(&parse_model_file(text).into_result().expect("parses")).expect("loads")
}

fn runner() -> TestRunner {
    TestRunner::new_with_rng(Config::default(), proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(budget: Duration, elapsed: Duration) -> Result<(), String> {
    ensure(elapsed < budget, || format!("took {elapsed:?}, budget {budget:?}"))
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn scale_reproduction() -> Outcome {
    let m = ModelStore::default();
    let input = QualityForm::new(
        "Processing_time",
        Description::atom("F1"),
        RegionExpr::interval(r(0, 1), r(30, 1), Some("Sec")),
    );
    let start = Instant::now();
    let down = construct_scale(&m, ElementKind::QC, &input, OperatorKind::ScaleDown, &ScaleFactor::Quantitative { lo: r(1, 1), hi: r(6, 5) });
    let up = construct_scale(&m, ElementKind::QC, &input, OperatorKind::ScaleUp, &ScaleFactor::Quantitative { lo: r(1, 1), hi: r(2, 3) });
    let elapsed = start.elapsed();
    let down = down.map_err(|e| format!("scale down: {e}"))?;
    let up = up.map_err(|e| format!("scale up: {e}"))?;
    let want_down = RegionExpr::interval(r(0, 1), r(36, 1), Some("Sec"));
    let want_up = RegionExpr::interval(r(0, 1), r(20, 1), Some("Sec"));
    ensure(down.form.region == want_down, || format!("scale down gave {:?}", down.form.region))?;
    ensure(up.form.region == want_up, || format!("scale up gave {:?}", up.form.region))?;
    ensure(down.strength == Strength::Weaken && up.strength == Strength::Strengthen, || "wrong strengths".into())?;
    within(SCALE_BUDGET, elapsed)?;
    Ok(format!("[0, 36 (Sec)] and [0, 20 (Sec)] in {elapsed:?}"))
}

fn pct_monotonicity() -> Outcome {
    let mut runner = runner();
    let base = (
        proptest::sample::select(&["Processing_time", "Availability", "Usability"][..]),
        proptest::sample::select(&["F1", "Search", "User"][..]),
        0i64..50,
        1i64..100,
        1i64..=100,
        1i64..=100,
    );
    let start = Instant::now();
    let (mut proved, mut refused) = (0, 0);
    for _ in 0..PCT_CASES {
        let (q, subj, lo, width, p1, p2) = common::draw(&mut runner, &base);
        let subject = Description::slot("run_of", desiree_core::CardModifier::ExactlyOne, Description::atom(subj));
        let form = QualityForm::new(q, subject, RegionExpr::interval(r(lo, 1), r(lo + width, 1), Some("Sec")));
        let make = |pct: i64| {
            let args = DeUniversalizeArgs { var: "X".into(), slot_path: vec!["inheres_in".into()], pct: r(pct, 100) };
            construct_deuniversalize(ElementKind::QC, &form, &args).map(|c| c.form)
        };
        let (a, b) = (make(p1).map_err(|e| e.to_string())?, make(p2).map_err(|e| e.to_string())?);
        let v = desiree_core::reasoner::pct_entails(&a, &b);
        if p1 >= p2 {
            ensure(v.is_proved(), || format!("{p1}% vs {p2}%: {v}"))?;
            proved += 1;
        } else {
            ensure(!v.is_proved(), || format!("{p1}% vs {p2}% was proved"))?;
            if let Verdict3::Disproved(w) = &v {
                ensure(w.replays(&Description::atom("Anything"), &Description::atom("Anything"), &Tbox::default()), || {
                    format!("{p1}% vs {p2}%: witness {w} does not replay")
                })?;
            }
            refused += 1;
        }
    }
    let elapsed = start.elapsed();
    within(PCT_BUDGET, elapsed)?;
    Ok(format!("{proved} proved, {refused} refused in {elapsed:?}"))
}

fn oracle_soundness() -> Outcome {
    let mut runner = runner();
    let pairs = common::subsumption_pair();
    let tboxes = common::small_tbox();
    let bounds = OracleBounds { max_bits: ORACLE_BITS, ..OracleBounds::default() };
    let start = Instant::now();
    let (mut checked, mut drawn) = (0usize, 0usize);
    let (mut proved, mut disproved, mut unknown) = (0usize, 0usize, 0usize);
    while checked < ORACLE_PAIRS {
        drawn += 1;
        ensure(drawn <= 20 * ORACLE_PAIRS, || format!("only {checked} pairs fit the oracle bounds"))?;
        let (left, right) = common::draw(&mut runner, &pairs);
        let (axioms, disjoint) = common::draw(&mut runner, &tboxes);
        let tbox = Tbox { axioms, disjoint };
        let mut descs = vec![&left, &right];
        for (l, r) in tbox.axioms.iter().chain(&tbox.disjoint) {
            descs.push(l);
            descs.push(r);
        }
        let grid = value_grid(descs.iter().copied());
        let mut counterexample = None;
        let mut ran = false;
        for k in 1..=3 {
            match oracle_subsumes_with(&left, &right, &tbox, k, &grid, &bounds) {
                Ok(OracleOutcome::Counterexample(w)) => {
                    ran = true;
                    counterexample.get_or_insert((k, w));
                }
                Ok(OracleOutcome::HoldsInAll { .. }) => ran = true,
                Err(_) => {}
            }
        }
        if !ran {
            continue;
        }
        checked += 1;
        let show = || format!("{} :< {}", desiree_core::render_description(&left), desiree_core::render_description(&right));
        let reasoner = Reasoner::with_config(tbox.clone(), ReasonerConfig::default());
        match reasoner.subsumes(&left, &right) {
            Verdict3::Proved => {
                proved += 1;
                if let Some((k, w)) = counterexample {
                    return Err(format!("{} proved, oracle refutes with {k} elements: {w}", show()));
                }
            }
            Verdict3::Disproved(w) => {
                disproved += 1;
                ensure(w.replays(&left, &right, &tbox), || format!("{}: witness does not replay: {w}", show()))?;
            }
            Verdict3::Unknown(_) => unknown += 1,
        }
    }
    let elapsed = start.elapsed();
    within(ORACLE_BUDGET, elapsed)?;
    Ok(format!("{checked} pairs: {proved} proved, {disproved} disproved, {unknown} unknown in {elapsed:?}"))
}

fn inconsistency_scenario() -> Outcome {
    let m = model(&fixture("meeting_scheduler.dsr"));
    let clashes = check_consistency(&m);
    let concepts: BTreeSet<&str> = clashes.iter().map(|c| c.concept.as_str()).collect();
    let want: BTreeSet<&str> = ["Meeting_room", "Room_equipment", "User"].into();
    ensure(clashes.len() == 3 && concepts == want, || format!("clashes on {concepts:?}"))?;
    let clean = check_consistency(&model(&fixture("meeting_scheduler_clean.dsr")));
    ensure(clean.is_empty(), || format!("clean variant has {} clashes", clean.len()))?;

    let s = stats(&m);
    let count = |active, dropped| KindCount { active, dropped };
    let want = [
        (ElementKind::Goal, count(3, 1)),
        (ElementKind::FG, count(1, 0)),
        (ElementKind::QG, count(2, 0)),
        (ElementKind::CTG, count(1, 0)),
        (ElementKind::F, count(6, 0)),
        (ElementKind::FC, count(1, 0)),
        (ElementKind::QC, count(4, 0)),
        (ElementKind::SC, count(1, 0)),
        (ElementKind::DA, count(4, 0)),
    ];
    for (kind, c) in want {
        let got = s.per_kind.get(&kind).copied().unwrap_or_default();
        ensure(got == c, || format!("{kind}: {got:?}, expected {c:?}"))?;
    }
    ensure(s.total == count(23, 1), || format!("total {:?}", s.total))?;
    ensure((s.applications, s.axioms, s.conflicts) == (5, 8, 0), || {
        format!("applications {}, axioms {}, conflicts {}", s.applications, s.axioms, s.conflicts)
    })?;
    Ok("3 clashes (Meeting_room, Room_equipment, User), clean variant 0, stats exact".into())
}

const SIG_PRELUDE: &str = "goal G1 = \"a\".\ngoal G2 = \"b\".\ngoal G9 = \"c\".\nfg FG1 = \"d\".\nctg CTG1 = \"e\".\n\
    f F1 = \"f\".\nfc FC1 = \"g\".\nqc QC0 = \"h\".\nsc SC1 = \"i\".\nda DA1 = \"j\".\n\
    qg QG1 = Security ({the_system}) :: Good.\nqc QC1 = Processing_time (F1) :: [0, 30 (Sec)].\n\
    dimension Integrity of Security.\n";

fn signature_violations(app: &str) -> Result<usize, String> {
    let text = format!("{SIG_PRELUDE}{app}\n");
    let ast = parse_model_file(&text).into_result().map_err(|e| format!("{app}: {e:?}"))?;
    let loaded = load_model_lenient(&ast);
    Ok(loaded.store.applications.iter().flat_map(|a| &a.issues).filter(|i| i.code == "E-SIG").count())
}

fn signature_suite() -> Outcome {
    let rows: [(&str, &str, &str); 12] = [
        ("reduce", "reduce(G1)[s] = {G2, DA1}.", "reduce(G1)[s] = {FG1}."),
        ("interpret", "interpret(G1)[s] = {FG1}.", "interpret(FG1)[s] = {G1}."),
        ("focus", "focus(QG1, {Integrity})[w] = {QG2}.", "focus(G1, {Integrity})[w] = {QG2}."),
        ("scale_up", "scale_up(QC1, (1, 2/3))[s] = {QC2}.", "scale_up(QG1, (1, 2/3))[s] = {QC2}."),
        ("scale_down", "scale_down(QC1, (1, 1.2))[w] = {QC2}.", "scale_down(QC1, (1, 1.2))[w] = {QC2, QC3}."),
        ("deuniversalize", "deuniversalize(?X, QG1, <inheres_in: ?X>, 80%)[w] = {QG2}.", "deuniversalize(?X, G1, <inheres_in: ?X>, 80%)[w] = {QG2}."),
        ("resolve", "resolve(G1, G2)[w] = {G1}.", "resolve(G1)[w] = {G1}."),
        ("operationalize FG", "operationalize(FG1)[s] = {F1, FC1, DA1}.", "operationalize(FG1)[s] = {QC0}."),
        ("operationalize QG", "operationalize(QG1)[s] = {QC0, F1, FC1, DA1}.", "operationalize(QG1)[s] = {SC1}."),
        ("operationalize CTG", "operationalize(CTG1)[s] = {SC1, DA1}.", "operationalize(CTG1)[s] = {F1}."),
        ("operationalize Goal", "operationalize(G1)[w] = {DA1}.", "operationalize(G1)[s] = {F1}."),
        ("observe", "observe(QG1, Surveyed_user)[s] = {QC9}.", "observe(G1, Surveyed_user)[s] = {QC9}."),
    ];
    for (row, pass, violate) in rows {
        let n = signature_violations(pass)?;
        ensure(n == 0, || format!("{row}: `{pass}` has {n} signature violations"))?;
        let n = signature_violations(violate)?;
        ensure(n > 0, || format!("{row}: `{violate}` passes the signature check"))?;
    }
    Ok(format!("{} rows, each with a passing and a violating case", rows.len()))
}

fn verdict_of(text: &str) -> Result<Verdict, String> {
    let m = model(text);
    let a = m.applications.last().ok_or("no application")?;
    Ok(a.verdict)
}

fn strength_admissibility() -> Outcome {
    use OperatorKind::*;
    use Strength::*;
    // Table rows, plus equating for the identity scale factor.
    let allowed: &[(OperatorKind, &[Strength])] = &[
        (Interpret, &[Strengthen, Equate]),
        (Reduce, &[Strengthen, Weaken, Equate]),
        (ScaleUp, &[Strengthen, Equate]),
        (ScaleDown, &[Weaken, Equate]),
        (DeUniversalize, &[Weaken]),
        (Focus, &[Weaken, Equate]),
        (Operationalize, &[Strengthen, Weaken]),
        (Observe, &[Strengthen]),
        (Resolve, &[Weaken]),
    ];
    for (op, tags) in allowed {
        for s in [Strengthen, Weaken, Equate] {
            ensure(admissible(*op, s) == tags.contains(&s), || format!("{op} [{}]", s.tag()))?;
        }
    }

    let qc = "qc QC1 = Processing_time (F1) :: [0, 30 (Sec)].\n";
    let qg = "qg QG1 = Security ({the_system}) :: Good.\ndimension Confidentiality of Security.\ndimension Integrity of Security.\n";
    let airline = "axiom Airline_ticket :< Ticket.\nf F1 = Book <object: Ticket>.\nf F2 = Book <object: Airline_ticket>.\n";
    let cases: Vec<(&str, String, Verdict)> = vec![
        ("interpret [s], disambiguation", "goal G1 = \"notify user\".\nfg FG1 = User :< Notified.\ninterpret(G1)[s] = {FG1}.".into(), Verdict::Asserted),
        ("interpret [e], encoding", "goal G1 = Meeting :< Scheduled.\nfg FG1 = Meeting :< Scheduled.\ninterpret(G1)[e] = {FG1}.".into(), Verdict::Verified),
        ("reduce [s], specialized slot", format!("{airline}reduce(F1)[s] = {{F2}}."), Verdict::Verified),
        ("reduce [s], added slot", "f F1 = Send <object: Invitation>.\nf F2 = Send <object: Invitation> <means: Email>.\nreduce(F1)[s] = {F2}.".into(), Verdict::Verified),
        ("reduce [w], generalized slot", format!("{airline}reduce(F2)[w] = {{F1}}."), Verdict::Verified),
        ("reduce [e], separated concerns", "goal G1 = Booked Paid.\ngoal G2 = Booked.\ngoal G3 = Paid.\nreduce(G1)[e] = {G2, G3}.".into(), Verdict::Verified),
        ("reduce [w] claimed for a strengthening", format!("{airline}reduce(F1)[w] = {{F2}}."), Verdict::Violated),
        ("scale_up [s]", format!("{qc}scale_up(QC1, (1, 2/3))[s] = {{QC2}}."), Verdict::Verified),
        ("scale_down [w]", format!("{qc}scale_down(QC1, (1, 1.2))[w] = {{QC2}}."), Verdict::Verified),
        ("deuniversalize [w]", format!("{qg}deuniversalize(?X, QG1, <inheres_in: ?X>, 80%)[w] = {{QG2}}."), Verdict::Verified),
        ("deuniversalize [s]", format!("{qg}deuniversalize(?X, QG1, <inheres_in: ?X>, 80%)[s] = {{QG2}}."), Verdict::Violated),
        ("focus [w], partial", format!("{qg}focus(QG1, {{Integrity}})[w] = {{QG2}}."), Verdict::Verified),
        ("focus [e], full", format!("{qg}focus(QG1, {{Confidentiality, Integrity}})[e] = {{QG2, QG3}}."), Verdict::Verified),
        ("operationalize [s], goal as F", "fg FG1 = User :< Registered.\nf F1 = Register <actor: User>.\noperationalize(FG1)[s] = {F1}.".into(), Verdict::Asserted),
        ("operationalize [w], goal as DAs", "goal G1 = \"rooms exist\".\nda DA1 = Meeting_room :< Available.\noperationalize(G1)[w] = {DA1}.".into(), Verdict::Asserted),
        ("operationalize [s], goal as DAs", "goal G1 = \"rooms exist\".\nda DA1 = Meeting_room :< Available.\noperationalize(G1)[s] = {DA1}.".into(), Verdict::Violated),
        ("observe [s]", format!("{qg}observe(QG1, Surveyed_user)[s] = {{QC2}}."), Verdict::Verified),
        ("observe [w]", format!("{qg}observe(QG1, Surveyed_user)[w] = {{QC2}}."), Verdict::Violated),
        ("resolve [w]", "goal G1 = \"a\".\ngoal G2 = \"b\".\nresolve(G1, G2)[w] = {G1}.".into(), Verdict::Asserted),
        ("resolve [s]", "goal G1 = \"a\".\ngoal G2 = \"b\".\nresolve(G1, G2)[s] = {G1}.".into(), Verdict::Violated),
    ];
    for (row, text, want) in &cases {
        let got = verdict_of(text)?;
        ensure(got == *want, || format!("{row}: {got}, expected {want}"))?;
    }
    Ok(format!("27 operator/tag pairs and {} rows; Airline_ticket reduce verified", cases.len()))
}

fn round_trip() -> Outcome {
    let mut runner = runner();
    let files = common::model_file();
    let start = Instant::now();
    for case in 0..ROUND_TRIP_CASES {
        let ast = common::draw(&mut runner, &files);
        let text = render_model_file(&ast);
        let back = parse_model_file(&text)
            .into_result()
            .map_err(|e| format!("case {case}: rendered text does not parse: {e:?}\n{text}"))?;
        ensure(back.declarations.len() == ast.declarations.len(), || format!("case {case}: declaration count\n{text}"))?;
        for (a, b) in ast.declarations.iter().zip(&back.declarations) {
            let same = a.item == b.item && a.comments == b.comments;
            ensure(same, || format!("case {case}: {:?}\nbecame {:?}\n{text}", a.item, b.item))?;
        }
        ensure(back.trailing_comments == ast.trailing_comments, || format!("case {case}: trailing comments"))?;
    }
    let elapsed = start.elapsed();
    for name in ["meeting_scheduler.dsr", "meeting_scheduler_clean.dsr", "search.dsr", "search_scaled.dsr"] {
        let once = render_model_file(&parse_model_file(&fixture(name)).into_result().map_err(|e| format!("{name}: {e:?}"))?);
        let twice = render_model_file(&parse_model_file(&once).into_result().map_err(|e| format!("{name}: {e:?}"))?);
        ensure(once == twice, || format!("{name}: formatting is not idempotent"))?;
    }
    within(ROUND_TRIP_BUDGET, elapsed)?;
    Ok(format!("{ROUND_TRIP_CASES} files in {elapsed:?}; fmt idempotent on 4 fixtures"))
}

fn ask(m: &ModelStore, q: &str) -> Result<BTreeSet<String>, String> {
    let d = parse_description_str(q).map_err(|e| format!("{q}: {e}"))?;
    eval_query(m, &d).map_err(|e| format!("{q}: {e}"))
}

fn query_suite() -> Outcome {
    let m = model(&fixture("meeting_scheduler.dsr"));
    let set = |ids: &[&str]| ids.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    let table = [
        ("Q1", "<has_quality: Processing_time>", set(&["F1", "F6"])),
        ("Q2", "<inheres_in: {the_product}>", set(&["Usability@{the_product}"])),
        ("Q3", "<is_actor_of: F2>", set(&["Manager"])),
        ("Q4", "<is_object_of: F3>", set(&["Meeting_room"])),
        ("Q5", "<object: User>", set(&["F2"])),
        ("means", "<means: Email>", set(&["F5"])),
    ];
    for (id, q, want) in &table {
        let got = ask(&m, q)?;
        ensure(&got == want, || format!("{id} {q}: {got:?}, expected {want:?}"))?;
    }
    let q = "<has_quality: Processing_time <has_value_in: <= 5 (Sec)>>";
    let before = ask(&model(&fixture("search.dsr")), q)?;
    ensure(before.is_empty(), || format!("before scaling: {before:?}"))?;
    let after = ask(&model(&fixture("search_scaled.dsr")), q)?;
    ensure(after == set(&["F1"]), || format!("after scaling: {after:?}"))?;
    Ok("Q1-Q5 match; 5-second query empty before, {F1} after scale_up".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("scale reproduction", scale_reproduction),
        ("pct monotonicity", pct_monotonicity),
        ("subsumption soundness against the oracle", oracle_soundness),
        ("inconsistency scenario", inconsistency_scenario),
        ("operator signatures", signature_suite),
        ("strength admissibility", strength_admissibility),
        ("parser round trip", round_trip),
        ("query suite", query_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
