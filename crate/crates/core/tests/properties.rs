use lfhh::generate::laws::{self, Law};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

fn check(name: &str) {
    let law: Law = laws::law(name).unwrap();
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    let outcome = runner.run(&any::<u64>(), |seed| law(seed).map_err(TestCaseError::fail));
    if let Err(e) = outcome {
        panic!("{name}: {e}");
    }
}

macro_rules! laws {
    ($($name:ident)*) => {
        $(
            #[test]
            fn $name() {
                check(stringify!($name));
            }
        )*
    };
}

laws! {
    st_substitution
    lf_substitution
    normalization
    lf_normalization
    alpha_equivalence
    unifier
    trace_replay
    depth_monotonicity
    signature_roundtrip
    object_roundtrip
    program_roundtrip
    erasure
    kernel_soundness
    kernel_substitution
    encoding
}

#[test]
fn registry_is_covered() {
    assert_eq!(laws::LAWS.len(), 15);
}
