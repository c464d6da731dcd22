//! End-to-end runs: analysis, synthesis, assembly and verification.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::assembly::{
    check_prefix_ifa, compose, decompose, filter_consistent, upstream, verify_closed, ClosedVerdict, ComposedSystem,
    DecompositionMode, IfaVerdict, LocalImplementation,
};
use crate::classes::{check_coverage, check_soundness, compute_classes, ClassSet, ClassSummary, DEFAULT_CLASS_CAP};
use crate::distinguishability::{build_rho, Rho, RhoOracle, RhoStats};
use crate::error::{Error, Result};
use crate::obligations::{build_assume_arena, build_class_guarantee, build_full_information, Guarantee, GuaranteeKind, Polarity};
use crate::spec::{ComponentId, ProblemFile, ProblemInstance};
use crate::synthesis::{synthesize_component, HyperImplementation, SynthesisOutcome, UnrealizableDiagnostic};
use crate::vars::{Valuation, VarSet};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct Options {
    pub guarantee: GuaranteeKind,
    pub class_cap: usize,
    /// Length bound for cross-checking the distinguishability automaton
    /// against direct enumeration; 0 skips the check.
    pub oracle_depth: usize,
    pub verify_depth: usize,
    pub ifa_depth: usize,
    pub decomposition: DecompositionMode,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            guarantee: GuaranteeKind::Class,
            class_cap: DEFAULT_CLASS_CAP,
            oracle_depth: 0,
            verify_depth: 1000,
            ifa_depth: 4,
            decomposition: DecompositionMode::KnowledgeSet,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub component: ComponentId,
    pub name: String,
    pub phi_size: usize,
    pub rho: RhoStats,
    pub classes: ClassSummary,
    pub classes_sound: bool,
    pub classes_cover: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_mismatches: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyper_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_states: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Realizability {
    Realizable,
    Unrealizable(UnrealizableDiagnostic),
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub problem: String,
    pub guarantee: GuaranteeKind,
    pub components: Vec<ComponentReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realizability: Option<Realizability>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub composed_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filtered_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<ClosedVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub information_flow: Option<IfaVerdict>,
    pub timings_ms: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Distinguishability and classes of one component.
#[derive(Clone, Debug)]
pub struct ComponentAnalysis {
    pub rho: Rho,
    pub classes: ClassSet,
}

/// State of a run after each completed stage.
#[derive(Clone, Debug)]
pub struct Run {
    pub problem: ProblemInstance,
    pub options: Options,
    pub analysis: Vec<ComponentAnalysis>,
    pub hyper: Option<[HyperImplementation; 2]>,
    pub composed: Option<ComposedSystem>,
    pub filtered: Option<ComposedSystem>,
    pub locals: Option<[LocalImplementation; 2]>,
    pub report: RunReport,
}

impl Run {
    pub fn is_realizable(&self) -> bool {
        matches!(self.report.realizability, Some(Realizability::Realizable))
    }

    pub fn is_verified(&self) -> bool {
        self.report.verification.as_ref().is_some_and(|v| v.is_certified())
            && self.report.information_flow.as_ref().is_some_and(|v| v.holds())
    }

    pub fn hyper(&self, c: ComponentId) -> Option<&HyperImplementation> {
        self.hyper.as_ref().map(|h| &h[c.index()])
    }

    pub fn local(&self, c: ComponentId) -> Option<&LocalImplementation> {
        self.locals.as_ref().map(|l| &l[c.index()])
    }

    /// Problem and local implementations, ready for `verify_artifacts`.
    pub fn artifacts(&self) -> Option<Artifacts> {
        self.locals.as_ref().map(|l| Artifacts {
            schema_version: REPORT_SCHEMA_VERSION,
            problem: self.problem.to_file(),
            locals: l.clone(),
        })
    }
}

/// Serialized result of a successful synthesis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Artifacts {
    pub schema_version: u32,
    pub problem: ProblemFile,
    pub locals: [LocalImplementation; 2],
}

struct Clock(BTreeMap<String, f64>);

impl Clock {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let r = f();
        *self.0.entry(stage.to_string()).or_default() += t.elapsed().as_secs_f64() * 1e3;
        r
    }
}

/// Mismatches between `rho` and direct enumeration over all pairs of
/// environment words of length at most `depth`.
pub fn rho_mismatches(rho: &Rho, problem: &ProblemInstance, depth: usize) -> Result<usize> {
    let phi = problem.spec(rho.component);
    let oracle = RhoOracle::new(phi, &problem.arch)?;
    let env = problem.arch.env;
    let nl = env.num_letters();
    let mut mismatches = 0;
    let mut level: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), Vec::new())];
    for _ in 0..=depth {
        let mut next = Vec::new();
        for (u, w) in level {
            let uv: Vec<Valuation> = u.iter().map(|l| env.decode(*l)).collect();
            let wv: Vec<Valuation> = w.iter().map(|l| env.decode(*l)).collect();
            if rho.accepts(&u, &w) != oracle.distinguished(&uv, &wv)? {
                mismatches += 1;
            }
            if u.len() < depth {
                for a in 0..nl {
                    for b in 0..nl {
                        let (mut u2, mut w2) = (u.clone(), w.clone());
                        u2.push(a);
                        w2.push(b);
                        next.push((u2, w2));
                    }
                }
            }
        }
        level = next;
    }
    Ok(mismatches)
}

fn analyze_into(problem: &ProblemInstance, options: &Options, clock: &mut Clock) -> Result<(Vec<ComponentAnalysis>, Vec<ComponentReport>)> {
    let mut analysis = Vec::new();
    let mut reports = Vec::new();
    for c in ComponentId::BOTH {
        let phi = problem.spec(c);
        let rho = clock.time("rho", || build_rho(phi, &problem.arch))?;
        let classes = clock.time("classes", || compute_classes(&rho, options.class_cap))?;
        let oracle_mismatches = match options.oracle_depth {
            0 => None,
            d => Some(clock.time("oracle", || rho_mismatches(&rho, problem, d))?),
        };
        reports.push(ComponentReport {
            component: c,
            name: problem.component_name(c).to_string(),
            phi_size: phi.size(),
            rho: rho.stats(),
            classes: classes.summary(),
            classes_sound: check_soundness(&classes, &rho),
            classes_cover: check_coverage(&classes),
            oracle_mismatches,
            hyper_states: None,
            local_states: None,
        });
        analysis.push(ComponentAnalysis { rho, classes });
    }
    Ok((analysis, reports))
}

/// Distinguishability automata and information classes of both components.
pub fn analyze(problem: &ProblemInstance, options: &Options) -> Result<Run> {
    let mut clock = Clock(BTreeMap::new());
    let (analysis, components) = analyze_into(problem, options, &mut clock)?;
    Ok(Run {
        problem: problem.clone(),
        options: options.clone(),
        analysis,
        hyper: None,
        composed: None,
        filtered: None,
        locals: None,
        report: RunReport {
            schema_version: REPORT_SCHEMA_VERSION,
            problem: problem.name.clone(),
            guarantee: options.guarantee,
            components,
            realizability: None,
            composed_states: None,
            filtered_states: None,
            verification: None,
            information_flow: None,
            timings_ms: clock.0,
        },
    })
}

/// Guarantee owed by the upstream component, if the components communicate.
pub fn guarantee_for(problem: &ProblemInstance, analysis: &[ComponentAnalysis], kind: GuaranteeKind) -> Result<Option<Guarantee>> {
    let Some(up) = upstream(&problem.arch)? else {
        return Ok(None);
    };
    let down = up.other();
    Ok(Some(match kind {
        GuaranteeKind::Class => build_class_guarantee(&analysis[down.index()].classes, &problem.arch, up, None)?,
        GuaranteeKind::Full => build_full_information(&problem.arch, up, Polarity::Copy)?,
    }))
}

/// Runs every stage: analysis, synthesis of both hyper implementations,
/// composition, filtering, decomposition and closed-loop verification.
/// Stops after synthesis when a component is unrealizable.
pub fn synthesize(problem: &ProblemInstance, options: &Options) -> Result<Run> {
    let mut run = analyze(problem, options)?;
    let mut clock = Clock(std::mem::take(&mut run.report.timings_ms));
    let arch = &problem.arch;
    let guarantee = guarantee_for(problem, &run.analysis, options.guarantee)?;
    let mut hyper = Vec::new();
    for c in ComponentId::BOTH {
        let arena = clock.time("arena", || build_assume_arena(problem.spec(c), arch, &run.analysis[c.index()].classes))?;
        let owed: Vec<&Guarantee> = guarantee.iter().filter(|g| g.provider == c).collect();
        match clock.time("synthesis", || synthesize_component(&arena, &owed))? {
            SynthesisOutcome::Realizable(h) => {
                run.report.components[c.index()].hyper_states = Some(h.num_states());
                hyper.push(h);
            }
            SynthesisOutcome::Unrealizable(d) => {
                run.report.realizability = Some(Realizability::Unrealizable(d));
                run.report.timings_ms = clock.0;
                return Ok(run);
            }
        }
    }
    run.report.realizability = Some(Realizability::Realizable);
    let hyper: [HyperImplementation; 2] = hyper.try_into().expect("two components");
    let composed = clock.time("compose", || compose(&hyper[0], &hyper[1], arch))?;
    let cs = [&run.analysis[0].classes, &run.analysis[1].classes];
    let filtered = clock.time("filter", || filter_consistent(&composed, cs[0], cs[1]))?;
    let locals = clock.time("decompose", || -> Result<[LocalImplementation; 2]> {
        Ok([
            decompose(&filtered, ComponentId::P, arch, options.decomposition)?,
            decompose(&filtered, ComponentId::Q, arch, options.decomposition)?,
        ])
    })?;
    for c in ComponentId::BOTH {
        run.report.components[c.index()].local_states = Some(locals[c.index()].num_states());
    }
    run.report.composed_states = Some(composed.num_states());
    run.report.filtered_states = Some(filtered.num_states());
    let (verdict, ifa) = verify_locals(problem, &locals, options, &mut clock)?;
    run.report.verification = Some(verdict);
    run.report.information_flow = Some(ifa);
    run.report.timings_ms = clock.0;
    run.hyper = Some(hyper);
    run.composed = Some(composed);
    run.filtered = Some(filtered);
    run.locals = Some(locals);
    Ok(run)
}

fn verify_locals(
    problem: &ProblemInstance,
    locals: &[LocalImplementation; 2],
    options: &Options,
    clock: &mut Clock,
) -> Result<(ClosedVerdict, IfaVerdict)> {
    let [tp, tq] = locals;
    let (sp, sq) = (problem.spec(ComponentId::P), problem.spec(ComponentId::Q));
    let verdict = clock.time("verify", || verify_closed(tp, tq, sp, sq, &problem.arch, options.verify_depth))?;
    let mut ifa = IfaVerdict::Holds { depth: options.ifa_depth, pairs: 0 };
    for c in ComponentId::BOTH {
        let v = clock.time("information_flow", || check_prefix_ifa(tp, tq, problem.spec(c), &problem.arch, options.ifa_depth))?;
        match (v, &mut ifa) {
            (v @ IfaVerdict::Violated { .. }, _) => {
                ifa = v;
                break;
            }
            (IfaVerdict::Holds { pairs, .. }, IfaVerdict::Holds { pairs: total, .. }) => *total += pairs,
            _ => {}
        }
    }
    Ok((verdict, ifa))
}

/// Verification of stored local implementations.
pub fn verify_artifacts(artifacts: &Artifacts, options: &Options) -> Result<(ProblemInstance, ClosedVerdict, IfaVerdict)> {
    if artifacts.schema_version != REPORT_SCHEMA_VERSION {
        return Err(Error::Problem(format!("unsupported artifact schema {}", artifacts.schema_version)));
    }
    let problem = artifacts.problem.clone().into_instance()?;
    let mut clock = Clock(BTreeMap::new());
    let (v, ifa) = verify_locals(&problem, &artifacts.locals, options, &mut clock)?;
    Ok((problem, v, ifa))
}

/// Timed valuation table of an environment word and the closed-loop trace.
pub fn render_trace(problem: &ProblemInstance, trace: &[Valuation]) -> String {
    let vars: Vec<u32> = problem.arch.all().iter().collect();
    let names: Vec<String> = vars.iter().map(|v| problem.vars.name(*v)).collect();
    let mut out = format!("{:>4}", "t");
    for n in &names {
        out.push_str(&format!(" {n:>6}"));
    }
    out.push('\n');
    for (t, l) in trace.iter().enumerate() {
        out.push_str(&format!("{t:>4}"));
        for v in &vars {
            out.push_str(&format!(" {:>6}", if l.contains(*v) { 1 } else { 0 }));
        }
        out.push('\n');
    }
    out
}

/// Valuations of `vars` as a compact string.
pub fn show_word(problem: &ProblemInstance, word: &[Valuation], vars: VarSet) -> String {
    word.iter().map(|v| problem.vars.show(v.inter(vars))).collect::<Vec<_>>().join(" ")
}
