use lfhh::concrete::{parse_judgment, print};
use lfhh::encoding::{encode_signature, judgment_to_goal};
use lfhh::harness::{run_campaign, CampaignConfig, CampaignReport, Classification};
use lfhh::kernel::{check_object, TypeErrorKind};
use lfhh::prover::replay_trace;
use lfhh::syntax::LfContext;
use lfhh::witness;

fn default_report() -> CampaignReport {
    run_campaign(&CampaignConfig::new(witness::signature(), 7))
}

#[test]
fn rediscovers_the_collision() {
    let report = default_report();
    assert!(report.count(Classification::UnsoundMismatch) >= 1);
    let judgments: Vec<String> = report.mismatches.iter().map(|v| v.judgment()).collect();
    assert!(judgments.iter().any(|j| j == witness::BAD_JUDGMENT), "{judgments:#?}");
    assert!(!judgments.iter().any(|j| j == witness::GOOD_JUDGMENT));
}

#[test]
fn mismatches_carry_evidence_that_re_verifies() {
    let sig = witness::signature();
    let program = encode_signature(&sig).unwrap();
    let report = default_report();
    assert!(!report.mismatches.is_empty());
    for v in &report.mismatches {
        let reason = v.kernel_error.as_ref().expect("kernel rejection is recorded");
        let again = check_object(&sig, &LfContext::new(), &v.term, &v.ty);
        assert_eq!(again.error(), Some(reason), "{}", v.judgment());
        let goal = judgment_to_goal(&sig, &v.term, &v.ty).unwrap();
        assert!(replay_trace(&program, &goal, v.trace().unwrap()), "{}", v.judgment());
    }
}

#[test]
fn the_witness_mismatch_is_a_domain_mismatch() {
    let sig = witness::signature();
    let report = default_report();
    let (m, a) = parse_judgment(witness::BAD_JUDGMENT, &sig).unwrap();
    let v = report.mismatches.iter().find(|v| v.term == m && v.ty == a).unwrap();
    let TypeErrorKind::DomainMismatch { focus: (want, got), .. } = &v.kernel_error.as_ref().unwrap().kind else {
        panic!("{:?}", v.kernel_error);
    };
    assert_eq!((print::family(want).as_str(), print::family(got).as_str()), ("num x", "num z"));
}

#[test]
fn no_derivable_judgment_is_missed() {
    let report = default_report();
    assert!(report.audit.is_empty(), "{}", report.to_text());
    assert_eq!(report.count(Classification::HarnessError), 0);
    assert_eq!(report.count(Classification::InconclusiveTimeout), 0);
    let total: usize = Classification::ALL.iter().map(|c| report.count(*c)).sum();
    assert_eq!(total, report.cases);
}

#[test]
fn reports_do_not_depend_on_threads() {
    let mut config = CampaignConfig::new(witness::signature(), 6);
    config.parallelism = Some(1);
    let one = run_campaign(&config);
    config.parallelism = Some(4);
    let four = run_campaign(&config);
    assert_eq!(one.to_json(), four.to_json());
    assert_eq!(one.to_text(), four.to_text());
    assert_eq!(run_campaign(&config).to_json(), four.to_json());
}

#[test]
fn wider_annotations_keep_the_audit_clean() {
    let mut config = CampaignConfig::new(witness::signature(), 6);
    config.max_index_size = 2;
    config.max_annotation_pi = 2;
    let report = run_campaign(&config);
    assert!(report.error.is_none());
    assert!(report.audit.is_empty(), "{}", report.to_text());
}

#[test]
fn json_report_shape() {
    let report = run_campaign(&CampaignConfig::new(witness::signature(), 7));
    let json = report.to_json();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["cases"], report.cases);
    assert_eq!(json["totals"]["UnsoundMismatch"].as_u64().map(|n| n as usize), Some(report.mismatches.len()));
    let first = &json["mismatches"][0];
    for key in ["classification", "term", "type", "kernel", "kernel_reason", "prover", "trace"] {
        assert!(!first[key].is_null(), "missing {key}");
    }
}
