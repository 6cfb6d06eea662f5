//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode, Output};

use lfhh::concrete::{parse_judgment, parse_program, print, HHScope};
use lfhh::erasure::{erase_object, reflect_signature};
use lfhh::generate::laws::LAWS;
use lfhh::harness::{run_campaign, CampaignConfig, Classification};
use lfhh::kernel::{Conversion, Kernel, TypeErrorKind};
use lfhh::prover::{replay_trace, ProofTrace};
use lfhh::syntax::stlc::alpha_equal;
use lfhh::syntax::{Atom, HHClause, LfContext};
use lfhh::{encoding, witness};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

const INSTANCES: u32 = 1000;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> PathBuf {
    root().join("fixtures").join(name)
}

fn lfhh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lfhh")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn kernel_rejection() -> Verdict {
    let collision = fixture("collision.lf");
    let out = lfhh(&["check", collision.to_str().unwrap(), "--judgment", witness::BAD_JUDGMENT]);
    if code(&out) != 1 {
        return Err(format!("check exited {}", code(&out)));
    }
    if !stdout(&out).contains("(`num x` vs `num z`)") {
        return Err(format!("diagnostic does not name the mismatch: {}", stdout(&out)));
    }
    let sig = witness::signature();
    let (m, a) = parse_judgment(witness::BAD_JUDGMENT, &sig).map_err(|e| e.to_string())?;
    for mode in [Conversion::Beta, Conversion::BetaEta] {
        let result = Kernel::with_conversion(&sig, mode).check_object(&LfContext::new(), &m, &a);
        let Some(TypeErrorKind::DomainMismatch { focus: (want, got), .. }) = result.error().map(|e| &e.kind) else {
            return Err(format!("{mode:?}: {:?}", result.error()));
        };
        if (print::family(want), print::family(got)) != ("num x".into(), "num z".into()) {
            return Err(format!("{mode:?}: focus {} vs {}", print::family(want), print::family(got)));
        }
    }
    Ok("not derivable, domain mismatch `num x` vs `num z` under both conversions".into())
}

fn hastype_clauses(text: &str, scope: &HHScope) -> Result<Vec<HHClause>, String> {
    let parsed = parse_program(text, scope).map_err(|e| e.to_string())?;
    Ok(parsed.program.clauses.into_iter().filter(|c| matches!(c.head(), Atom::Hastype(..))).collect())
}

fn golden_encoding() -> Verdict {
    let collision = fixture("collision.lf");
    let out = lfhh(&["encode", collision.to_str().unwrap()]);
    if code(&out) != 0 {
        return Err(format!("encode exited {}", code(&out)));
    }
    let golden = std::fs::read_to_string(fixture("collision_hastype.golden")).map_err(|e| e.to_string())?;
    let scope = HHScope::new(reflect_signature(&witness::signature()).constants().iter().cloned());
    let emitted = hastype_clauses(&stdout(&out), &scope)?;
    let expected = hastype_clauses(&golden, &scope)?;
    if emitted != expected {
        return Err(format!("hastype clauses differ from the golden file:\n{}", stdout(&out)));
    }
    let text: Vec<String> = emitted.iter().map(|c| print::clause(c) + ".").collect();
    if text != golden.lines().collect::<Vec<_>>() {
        return Err(format!("printed text differs: {text:?}"));
    }
    Ok(format!("{} hastype clauses equal the golden transcription", emitted.len()))
}

fn prover_derivation() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let trace_path = dir.path().join("trace.json");
    let collision = fixture("collision.lf");
    let out = lfhh(&[
        "prove",
        collision.to_str().unwrap(),
        "--judgment",
        witness::BAD_JUDGMENT,
        "--depth",
        "5",
        "--trace",
        trace_path.to_str().unwrap(),
    ]);
    if code(&out) != 0 {
        return Err(format!("prove exited {}: {}", code(&out), stdout(&out)));
    }
    let expected = "proved: hastype (c (\\x:tm. \\y:tm. z)) nat";
    if stdout(&out).lines().next() != Some(expected) {
        return Err(format!("unexpected goal: {}", stdout(&out)));
    }
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&trace_path).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let sig = witness::signature();
    let program = encoding::encode_signature(&sig).map_err(|e| e.to_string())?;
    let trace = ProofTrace::from_json(&json, &program.constant_table()).map_err(|e| e.to_string())?;
    let (m, a) = parse_judgment(witness::BAD_JUDGMENT, &sig).map_err(|e| e.to_string())?;
    let goal = encoding::judgment_to_goal(&sig, &m, &a).map_err(|e| e.to_string())?;
    if !replay_trace(&program, &goal, &trace) {
        return Err("the emitted trace does not replay".into());
    }
    Ok(format!("proved at depth 5, {} backchains, trace replays", trace.depth()))
}

fn rediscovery() -> Verdict {
    let collision = fixture("collision.lf");
    let out =
        lfhh(&["difftest", collision.to_str().unwrap(), "--max-size", "7", "--depth-mult", "4", "--format", "json"]);
    if code(&out) != 4 {
        return Err(format!("difftest exited {}", code(&out)));
    }
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).map_err(|e| e.to_string())?;
    let mismatches = report["mismatches"].as_array().ok_or("no mismatch list")?;
    let found = mismatches.iter().any(|v| v["term"] == "c ([x:nat][y:num z] z)" && v["type"] == "nat");
    if !found {
        return Err("the witness judgment is not among the mismatches".into());
    }
    Ok(format!("{} unsound mismatches, witness among them", mismatches.len()))
}

fn soundness_audit() -> Verdict {
    let report = run_campaign(&CampaignConfig::new(witness::signature(), 7));
    if let Some(e) = report.error {
        return Err(e);
    }
    let accepted = report.count(Classification::AgreeYes) + report.audit.len();
    let errors = report.count(Classification::HarnessError);
    if errors != 0 {
        return Err(format!("{errors} cases classified HarnessError"));
    }
    if !report.audit.is_empty() {
        let cases: Vec<String> = report.audit.iter().map(|v| v.judgment()).collect();
        return Err(format!("{} derivable judgments not proved: {cases:?}", cases.len()));
    }
    Ok(format!("{} judgments, {accepted} derivable, all proved", report.cases))
}

fn collision_witness() -> Verdict {
    let sig = witness::signature();
    let reflection = reflect_signature(&sig);
    let bad = erase_object(&witness::bad_term(), &reflection).map_err(|e| e.to_string())?;
    let good = erase_object(&witness::good_term(), &reflection).map_err(|e| e.to_string())?;
    if !alpha_equal(&bad, &good) {
        return Err(format!("erasures differ: {} vs {}", print::sterm(&bad), print::sterm(&good)));
    }
    let kernel = Kernel::new(&sig);
    let nat = witness::nat();
    let verdicts = [witness::bad_term(), witness::good_term()]
        .map(|m| kernel.check_object(&LfContext::new(), &m, &nat).is_derivable());
    if verdicts != [false, true] {
        return Err(format!("kernel verdicts {verdicts:?}"));
    }
    Ok(format!("both erase to {}, kernel accepts only the second", print::sterm(&bad)))
}

fn invariant_suites() -> Verdict {
    let mut failures = Vec::new();
    for (name, law) in LAWS {
        let config = Config { cases: INSTANCES, failure_persistence: None, ..Config::default() };
        let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
        if let Err(e) = runner.run(&any::<u64>(), |seed| law(seed).map_err(TestCaseError::fail)) {
            failures.push(format!("{name}: {e}"));
        }
    }
    if failures.is_empty() {
        Ok(format!("{} laws, {INSTANCES} instances each", LAWS.len()))
    } else {
        Err(failures.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("kernel rejection", kernel_rejection),
        ("golden encoding", golden_encoding),
        ("prover derivation", prover_derivation),
        ("counterexample rediscovery", rediscovery),
        ("soundness-direction audit", soundness_audit),
        ("collision witness", collision_witness),
        ("invariant suites", invariant_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
