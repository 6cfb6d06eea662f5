//! Differential testing of the kernel against encode-then-prove.
//!
//! Objects are enumerated exhaustively in order of size, paired with every
//! closed atomic type, and each judgment is decided twice: by the kernel and
//! by searching for a proof of its encoding. A judgment the prover derives
//! but the kernel rejects is an unsound mismatch.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::concrete::print;
use crate::encoding::{encode_signature, judgment_to_goal, EncodingError};
use crate::kernel::{Kernel, TypeError};
use crate::prover::{solve_iterative, ProofTrace, SolveResult};
use crate::syntax::{
    fresh_name, Classifier, HHProgram, LfContext, LfFamily, LfKind, LfObject, LfSignature, Name,
};

/// Bounds on the candidate space besides the object size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest index object inside an atomic family.
    pub max_index_size: usize,
    /// Largest number of Π-binders in a λ-annotation.
    pub max_annotation_pi: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_index_size: 1, max_annotation_pi: 1 }
    }
}

struct Enumerator<'s> {
    sig: &'s LfSignature,
    kernel: Kernel<'s>,
    limits: Limits,
    reserved: BTreeSet<Name>,
}

type Scope = Vec<(Name, LfFamily)>;

impl<'s> Enumerator<'s> {
    fn new(sig: &'s LfSignature, limits: Limits) -> Self {
        Enumerator { sig, kernel: Kernel::new(sig), limits, reserved: sig.names() }
    }

    fn context(scope: &Scope) -> LfContext {
        scope.iter().fold(LfContext::new(), |ctx, (x, a)| ctx.extend(x.clone(), a.clone()))
    }

    fn binder(&self, scope: &Scope) -> Name {
        const STEMS: [&str; 4] = ["x", "y", "u", "v"];
        let mut avoid = self.reserved.clone();
        avoid.extend(scope.iter().map(|(x, _)| x.clone()));
        fresh_name(&Name::new(STEMS[scope.len() % STEMS.len()]), &avoid)
    }

    /// Objects of exactly `size` nodes over the variables in `scope`.
    fn objects(&self, scope: &Scope, size: usize) -> Vec<LfObject> {
        let mut out = Vec::new();
        match size {
            0 => {}
            1 => {
                for d in self.sig.decls() {
                    if let Classifier::Object(_) = d.classifier {
                        out.push(LfObject::Const(d.name.clone()));
                    }
                }
                out.extend(scope.iter().map(|(x, _)| LfObject::Var(x.clone())));
            }
            _ => {
                for fun_size in 1..size - 1 {
                    let args = self.objects(scope, size - 1 - fun_size);
                    for f in self.objects(scope, fun_size) {
                        for a in &args {
                            out.push(LfObject::app(f.clone(), a.clone()));
                        }
                    }
                }
                if size >= 3 {
                    let x = self.binder(scope);
                    for annot in self.annotations(scope, self.limits.max_annotation_pi) {
                        let mut inner = scope.clone();
                        inner.push((x.clone(), annot.clone()));
                        for body in self.objects(&inner, size - 2) {
                            out.push(LfObject::lam(x.clone(), annot.clone(), body));
                        }
                    }
                }
            }
        }
        out
    }

    /// Atomic families of kind `type` with small indices.
    fn atomic(&self, scope: &Scope) -> Vec<LfFamily> {
        let ctx = Self::context(scope);
        let indices: Vec<LfObject> =
            (1..=self.limits.max_index_size).flat_map(|n| self.objects(scope, n)).collect();
        let mut out = Vec::new();
        for d in self.sig.decls() {
            let Classifier::Family(kind) = &d.classifier else { continue };
            let mut partial = vec![LfFamily::Const(d.name.clone())];
            let mut k = kind;
            while let LfKind::Pi(_, _, body) = k {
                partial = partial
                    .iter()
                    .flat_map(|f| indices.iter().map(move |i| LfFamily::app(f.clone(), i.clone())))
                    .collect();
                k = body;
            }
            out.extend(partial.into_iter().filter(|a| {
                matches!(self.kernel.infer_family(&ctx, a), Ok((LfKind::Type, _)))
            }));
        }
        out
    }

    /// Kernel-valid types with at most `pis` Π-binders.
    fn annotations(&self, scope: &Scope, pis: usize) -> Vec<LfFamily> {
        let mut out = self.atomic(scope);
        if pis == 0 {
            return out;
        }
        let x = self.binder(scope);
        for dom_pis in 0..pis {
            for dom in self.annotations(scope, dom_pis) {
                let mut inner = scope.clone();
                inner.push((x.clone(), dom.clone()));
                for body in self.annotations(&inner, pis - 1 - dom_pis) {
                    let pi = LfFamily::pi(x.clone(), dom.clone(), body);
                    if !out.contains(&pi) {
                        out.push(pi);
                    }
                }
            }
        }
        out
    }
}

/// All closed objects of at most `size` nodes, smallest first, under the
/// default [`Limits`].
pub fn enumerate_objects(sig: &LfSignature, size: usize) -> Vec<LfObject> {
    enumerate_objects_with(sig, size, Limits::default())
}

pub fn enumerate_objects_with(sig: &LfSignature, size: usize, limits: Limits) -> Vec<LfObject> {
    let e = Enumerator::new(sig, limits);
    (1..=size).flat_map(|n| e.objects(&Vec::new(), n)).collect()
}

/// Objects of at most `size` nodes over the variables bound in `ctx`.
pub fn enumerate_objects_in(sig: &LfSignature, ctx: &LfContext, size: usize, limits: Limits) -> Vec<LfObject> {
    let e = Enumerator::new(sig, limits);
    let scope: Scope = ctx.bindings().to_vec();
    (1..=size).flat_map(|n| e.objects(&scope, n)).collect()
}

/// Closed atomic families of kind `type`.
pub fn enumerate_types(sig: &LfSignature, limits: Limits) -> Vec<LfFamily> {
    Enumerator::new(sig, limits).atomic(&Vec::new())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classification {
    AgreeYes,
    AgreeNo,
    UnsoundMismatch,
    InconclusiveTimeout,
    InconclusiveNonPattern,
    /// The kernel accepts a judgment whose encoding the prover refutes. The
    /// encoding should make this impossible.
    HarnessError,
}

impl Classification {
    pub const ALL: [Classification; 6] = [
        Classification::AgreeYes,
        Classification::AgreeNo,
        Classification::UnsoundMismatch,
        Classification::InconclusiveTimeout,
        Classification::InconclusiveNonPattern,
        Classification::HarnessError,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Classification::AgreeYes => "AgreeYes",
            Classification::AgreeNo => "AgreeNo",
            Classification::UnsoundMismatch => "UnsoundMismatch",
            Classification::InconclusiveTimeout => "InconclusiveTimeout",
            Classification::InconclusiveNonPattern => "InconclusiveNonPattern",
            Classification::HarnessError => "HarnessError",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// What the encode-then-prove side said.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProverVerdict {
    Proved(ProofTrace),
    FailedNoProof,
    Exhausted { depth: usize },
    Incomplete(String),
    /// The erased subject has no simple type, so no goal exists.
    IllTypedErasure,
}

impl ProverVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            ProverVerdict::Proved(_) => "proved",
            ProverVerdict::FailedNoProof => "no-proof",
            ProverVerdict::Exhausted { .. } => "exhausted",
            ProverVerdict::Incomplete(_) => "non-pattern",
            ProverVerdict::IllTypedErasure => "ill-typed-erasure",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseVerdict {
    pub term: LfObject,
    pub ty: LfFamily,
    /// `None` when the kernel derives the judgment.
    pub kernel_error: Option<TypeError>,
    pub prover: ProverVerdict,
    pub classification: Classification,
}

impl CaseVerdict {
    pub fn kernel(&self) -> bool {
        self.kernel_error.is_none()
    }

    pub fn judgment(&self) -> String {
        print::judgment(&self.term, &self.ty)
    }

    pub fn trace(&self) -> Option<&ProofTrace> {
        match &self.prover {
            ProverVerdict::Proved(t) => Some(t),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "classification": self.classification.label(),
            "term": print::object(&self.term),
            "type": print::family(&self.ty),
            "kernel": self.kernel(),
            "kernel_reason": self.kernel_error.as_ref().map(|e| e.to_string()),
            "prover": self.prover.label(),
            "trace": self.trace().map(ProofTrace::to_json),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    pub signature: LfSignature,
    /// Largest object, in nodes.
    pub max_term_size: usize,
    pub max_index_size: usize,
    pub max_annotation_pi: usize,
    /// The prover may backchain `depth_mult` times the object size.
    pub depth_mult: usize,
    /// Worker threads; `None` uses the global pool.
    pub parallelism: Option<usize>,
}

impl CampaignConfig {
    pub fn new(signature: LfSignature, max_term_size: usize) -> Self {
        let limits = Limits::default();
        CampaignConfig {
            signature,
            max_term_size,
            max_index_size: limits.max_index_size,
            max_annotation_pi: limits.max_annotation_pi,
            depth_mult: 4,
            parallelism: None,
        }
    }

    pub fn limits(&self) -> Limits {
        Limits { max_index_size: self.max_index_size, max_annotation_pi: self.max_annotation_pi }
    }

    /// Every size bound, the depth multiplier and the thread count must be
    /// positive. Annotations may be restricted to atomic families.
    pub fn validate(&self) -> Result<(), String> {
        let bounds = [
            ("max_term_size", self.max_term_size),
            ("max_index_size", self.max_index_size),
            ("depth_mult", self.depth_mult),
            ("parallelism", self.parallelism.unwrap_or(1)),
        ];
        match bounds.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(format!("{name} must be positive")),
            None => Ok(()),
        }
    }
}

/// Both verdicts for one judgment. `program` is the encoded signature.
pub fn run_case(
    sig: &LfSignature,
    program: &HHProgram,
    m: &LfObject,
    a: &LfFamily,
    depth_mult: usize,
) -> CaseVerdict {
    let kernel_error = Kernel::new(sig).check_object(&LfContext::new(), m, a).error().cloned();
    let prover = match judgment_to_goal(sig, m, a) {
        Err(EncodingError::IllTyped(_)) => ProverVerdict::IllTypedErasure,
        Err(e) => ProverVerdict::Incomplete(e.to_string()),
        Ok(goal) => match solve_iterative(program, &goal, depth_mult * m.size()) {
            SolveResult::Proved(t) => ProverVerdict::Proved(t),
            SolveResult::FailedNoProof => ProverVerdict::FailedNoProof,
            SolveResult::Exhausted { depth } => ProverVerdict::Exhausted { depth },
            SolveResult::Incomplete(p) => ProverVerdict::Incomplete(p.to_string()),
        },
    };
    let classification = match (kernel_error.is_none(), &prover) {
        (true, ProverVerdict::Proved(_)) => Classification::AgreeYes,
        (false, ProverVerdict::Proved(_)) => Classification::UnsoundMismatch,
        (false, ProverVerdict::FailedNoProof | ProverVerdict::IllTypedErasure) => Classification::AgreeNo,
        (_, ProverVerdict::Exhausted { .. }) => Classification::InconclusiveTimeout,
        (_, ProverVerdict::Incomplete(_)) => Classification::InconclusiveNonPattern,
        (true, ProverVerdict::FailedNoProof | ProverVerdict::IllTypedErasure) => Classification::HarnessError,
    };
    CaseVerdict { term: m.clone(), ty: a.clone(), kernel_error, prover, classification }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub cases: usize,
    pub totals: BTreeMap<Classification, usize>,
    /// Unsound mismatches in enumeration order, smallest first.
    pub mismatches: Vec<CaseVerdict>,
    /// Cases the kernel accepts but the prover does not prove: harness
    /// errors and timeouts on derivable judgments.
    pub audit: Vec<CaseVerdict>,
    pub error: Option<String>,
}

impl CampaignReport {
    pub fn count(&self, c: Classification) -> usize {
        self.totals.get(&c).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        let totals: serde_json::Map<String, Value> =
            Classification::ALL.iter().map(|c| (c.label().to_string(), json!(self.count(*c)))).collect();
        json!({
            "schema": 1,
            "config": {
                "max_term_size": self.config.max_term_size,
                "max_index_size": self.config.max_index_size,
                "max_annotation_pi": self.config.max_annotation_pi,
                "depth_mult": self.config.depth_mult,
            },
            "ordering": "exhaustive enumeration by object size, then by type; independent of thread count",
            "cases": self.cases,
            "totals": totals,
            "mismatches": self.mismatches.iter().map(CaseVerdict::to_json).collect::<Vec<_>>(),
            "audit": self.audit.iter().map(CaseVerdict::to_json).collect::<Vec<_>>(),
            "error": self.error,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        out.push_str(&format!(
            "cases: {} (max size {}, index size {}, annotation pi {}, depth {}x size)\n",
            self.cases, c.max_term_size, c.max_index_size, c.max_annotation_pi, c.depth_mult
        ));
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        for class in Classification::ALL {
            out.push_str(&format!("{:<24}{}\n", class.label(), self.count(class)));
        }
        for v in &self.mismatches {
            out.push_str(&format!("\nunsound: {}\n", v.judgment()));
            if let Some(e) = &v.kernel_error {
                out.push_str(&format!("  kernel: {e}\n"));
            }
            if let Some(t) = v.trace() {
                out.push_str(&format!("  prover: proof with {} steps, depth {}\n", t.size(), t.depth()));
            }
        }
        for v in &self.audit {
            out.push_str(&format!("\naudit {}: {} ({})\n", v.classification, v.judgment(), v.prover.label()));
        }
        out
    }
}

/// Runs every enumerated judgment. The report does not depend on the
/// number of threads.
pub fn run_campaign(config: &CampaignConfig) -> CampaignReport {
    let mut report = CampaignReport {
        config: config.clone(),
        cases: 0,
        totals: BTreeMap::new(),
        mismatches: Vec::new(),
        audit: Vec::new(),
        error: None,
    };
    if let Err(e) = config.validate() {
        report.error = Some(e);
        return report;
    }
    let sig = &config.signature;
    let program = match encode_signature(sig) {
        Ok(p) => p,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    let limits = config.limits();
    let types = enumerate_types(sig, limits);
    let objects = enumerate_objects_with(sig, config.max_term_size, limits);
    let judgments: Vec<(&LfObject, &LfFamily)> =
        objects.iter().flat_map(|m| types.iter().map(move |a| (m, a))).collect();
    let run = || -> Vec<CaseVerdict> {
        judgments
            .par_iter()
            .map(|(m, a)| run_case(sig, &program, m, a, config.depth_mult))
            .collect()
    };
    let verdicts = match config.parallelism {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(e) => {
                report.error = Some(e.to_string());
                return report;
            }
        },
        None => run(),
    };
    report.cases = verdicts.len();
    for v in verdicts {
        *report.totals.entry(v.classification).or_default() += 1;
        if v.classification == Classification::UnsoundMismatch {
            report.mismatches.push(v);
        } else if v.kernel() && v.classification != Classification::AgreeYes {
            report.audit.push(v);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{LfDecl, LfTerm};
    use crate::witness;

    #[test]
    fn size_one() {
        let objs = enumerate_objects(&witness::signature(), 1);
        let shown: Vec<String> = objs.iter().map(print::object).collect();
        assert_eq!(shown, ["z", "c"]);
    }

    #[test]
    fn witnesses_are_enumerated() {
        let objs = enumerate_objects(&witness::signature(), 7);
        assert!(objs.contains(&witness::bad_term()));
        assert!(objs.contains(&witness::good_term()));
        let distinct: std::collections::HashSet<_> = objs.iter().collect();
        assert_eq!(distinct.len(), objs.len());
        assert!(objs.windows(2).all(|w| w[0].size() <= w[1].size()));
    }

    fn annotations_valid(k: &Kernel, ctx: &LfContext, m: &LfObject) -> bool {
        match m {
            LfObject::App(f, a) => annotations_valid(k, ctx, f) && annotations_valid(k, ctx, a),
            LfObject::Lam(b, annot, body) => {
                let x = Name::internal(b.name());
                k.check_type(ctx, annot).is_ok()
                    && annotations_valid(k, &ctx.extend(x.clone(), (**annot).clone()), &body.open_with(&LfObject::Var(x)))
            }
            _ => true,
        }
    }

    #[test]
    fn annotations_are_kernel_valid() {
        let sig = witness::signature();
        let k = Kernel::new(&sig);
        for m in enumerate_objects(&sig, 6) {
            assert!(annotations_valid(&k, &LfContext::new(), &m), "{}", print::object(&m));
        }
    }

    #[test]
    fn closed_types() {
        let shown: Vec<String> =
            enumerate_types(&witness::signature(), Limits::default()).iter().map(print::family).collect();
        assert_eq!(shown, ["nat", "num z"]);
    }

    #[test]
    fn cases() {
        let sig = witness::signature();
        let p = encode_signature(&sig).unwrap();
        let v = run_case(&sig, &p, &witness::bad_term(), &witness::nat(), 4);
        assert_eq!(v.classification, Classification::UnsoundMismatch);
        let v = run_case(&sig, &p, &witness::z(), &witness::nat(), 4);
        assert_eq!(v.classification, Classification::AgreeYes);
        let v = run_case(&sig, &p, &witness::z(), &witness::num(witness::z()), 4);
        assert_eq!(v.classification, Classification::AgreeNo);
        assert_eq!(v.prover, ProverVerdict::FailedNoProof);
    }

    #[test]
    fn small_campaigns() {
        let report = run_campaign(&CampaignConfig::new(witness::signature(), 1));
        assert_eq!(report.cases, 4);
        assert!(report.mismatches.is_empty());
        let empty = run_campaign(&CampaignConfig::new(LfSignature::default(), 7));
        assert_eq!(empty.cases, 0);
        assert!(empty.mismatches.is_empty());
    }

    #[test]
    fn invalid_configs_are_reported() {
        let mut config = CampaignConfig::new(witness::signature(), 0);
        assert_eq!(run_campaign(&config).error.as_deref(), Some("max_term_size must be positive"));
        config.max_term_size = 3;
        config.parallelism = Some(0);
        assert!(run_campaign(&config).error.is_some());
        let ill_formed = LfSignature::new(vec![LfDecl::object("z", witness::nat())]);
        let report = run_campaign(&CampaignConfig::new(ill_formed, 3));
        assert!(report.error.is_some());
        assert_eq!(report.cases, 0);
    }
}
