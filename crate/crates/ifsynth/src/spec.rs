//! Architectures, component specifications and problem files.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::automata::{ltl_to_monitor, MonitorDfa};
use crate::error::{Error, Result};
use crate::ltl::{check_safety, is_variable_name, parse, Ltl, SafetyVerdict};
use crate::vars::{Valuation, VarSet, VarTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentId {
    P,
    Q,
}

impl ComponentId {
    pub const BOTH: [ComponentId; 2] = [ComponentId::P, ComponentId::Q];

    pub fn other(self) -> ComponentId {
        match self {
            ComponentId::P => ComponentId::Q,
            ComponentId::Q => ComponentId::P,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComponentId::P => "p",
            ComponentId::Q => "q",
        })
    }
}

/// Two-component architecture `(I_p, I_q, O_p, O_q, O_e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Architecture {
    pub inputs: [VarSet; 2],
    pub outputs: [VarSet; 2],
    pub env: VarSet,
}

impl Architecture {
    /// Checks the well-formedness conditions. `all` is the set of declared
    /// variables, which the outputs must partition.
    pub fn new(inputs: [VarSet; 2], outputs: [VarSet; 2], env: VarSet, all: VarSet) -> Result<Self> {
        let a = Architecture { inputs, outputs, env };
        let err = |m: String| Err(Error::Architecture(m));
        if !outputs[0].is_disjoint(outputs[1]) || !outputs[0].is_disjoint(env) || !outputs[1].is_disjoint(env) {
            return err("output sets must be pairwise disjoint".into());
        }
        if outputs[0].union(outputs[1]).union(env) != all {
            return err("output sets must cover every variable".into());
        }
        for c in ComponentId::BOTH {
            let i = inputs[c.index()];
            if !i.is_disjoint(a.outputs(c)) {
                return err(format!("component {c} reads its own outputs"));
            }
            if !i.is_subset(a.outputs(c.other()).union(env)) {
                return err(format!("inputs of {c} must come from the environment or {}", c.other()));
            }
        }
        Ok(a)
    }

    pub fn inputs(&self, c: ComponentId) -> VarSet {
        self.inputs[c.index()]
    }

    pub fn outputs(&self, c: ComponentId) -> VarSet {
        self.outputs[c.index()]
    }

    /// Environment variables observed by `c`.
    pub fn env_inputs(&self, c: ComponentId) -> VarSet {
        self.inputs(c).inter(self.env)
    }

    /// Outputs of the other component read by `c`.
    pub fn comm_inputs(&self, c: ComponentId) -> VarSet {
        self.inputs(c).inter(self.outputs(c.other()))
    }

    pub fn all(&self) -> VarSet {
        self.env.union(self.outputs[0]).union(self.outputs[1])
    }

    pub fn is_bidirectional(&self) -> bool {
        !self.comm_inputs(ComponentId::P).is_empty() && !self.comm_inputs(ComponentId::Q).is_empty()
    }
}

/// Safety LTL specification of one component over `O_c ∪ O_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafetyFormula {
    pub ltl: Ltl,
    pub component: ComponentId,
    pub vocab: VarSet,
}

impl SafetyFormula {
    pub fn new(ltl: Ltl, component: ComponentId, arch: &Architecture) -> Result<Self> {
        let vocab = arch.outputs(component).union(arch.env);
        if !ltl.atoms().is_subset(vocab) {
            return Err(Error::Vocabulary(format!(
                "specification of {component} may only mention its outputs and environment outputs"
            )));
        }
        if let SafetyVerdict::Rejected(why) = check_safety(&ltl) {
            return Err(Error::NotSafety(why));
        }
        Ok(SafetyFormula { ltl, component, vocab })
    }

    pub fn size(&self) -> usize {
        self.ltl.size()
    }

    pub fn monitor(&self) -> Result<MonitorDfa> {
        ltl_to_monitor(&self.ltl, self.vocab)
    }
}

/// Finite sequence of valuations over a vocabulary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTrace {
    pub vocab: VarSet,
    pub letters: Vec<Valuation>,
}

impl FiniteTrace {
    pub fn new(vocab: VarSet, letters: Vec<Valuation>) -> Self {
        FiniteTrace { vocab, letters: letters.into_iter().map(|l| l.inter(vocab)).collect() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Whether `pi` is not yet a bad prefix of `f`.
pub fn eval_prefix(pi: &FiniteTrace, f: &SafetyFormula) -> Result<bool> {
    if !f.vocab.is_subset(pi.vocab) {
        return Err(Error::Vocabulary("trace does not cover the formula vocabulary".into()));
    }
    let m = f.monitor()?;
    let s = pi.letters.iter().fold(m.initial(), |s, l| m.step_val(s, *l));
    Ok(!m.is_dead(s))
}

/// A synthesis problem: variables, architecture and one specification per
/// component.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    pub name: String,
    pub vars: VarTable,
    pub arch: Architecture,
    pub component_names: [String; 2],
    pub specs: [SafetyFormula; 2],
}

impl ProblemInstance {
    pub fn spec(&self, c: ComponentId) -> &SafetyFormula {
        &self.specs[c.index()]
    }

    pub fn component_name(&self, c: ComponentId) -> &str {
        &self.component_names[c.index()]
    }

    pub fn to_file(&self) -> ProblemFile {
        ProblemFile {
            name: Some(self.name.clone()),
            variables: self.vars.names_of(self.vars.all()),
            env_outputs: self.vars.names_of(self.arch.env),
            components: ComponentId::BOTH
                .iter()
                .map(|c| ComponentFile {
                    name: self.component_name(*c).to_string(),
                    inputs: self.vars.names_of(self.arch.inputs(*c)),
                    outputs: self.vars.names_of(self.arch.outputs(*c)),
                    spec: self.spec(*c).ltl.display(&self.vars).to_string(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("problem serializes")
    }
}

/// JSON layout of a problem file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub variables: Vec<String>,
    pub env_outputs: Vec<String>,
    pub components: Vec<ComponentFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentFile {
    pub name: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub spec: String,
}

impl ProblemFile {
    pub fn into_instance(self) -> Result<ProblemInstance> {
        for v in &self.variables {
            if !is_variable_name(v) {
                return Err(Error::Problem(format!("`{v}` cannot be used as a variable name")));
            }
        }
        let vars = VarTable::from_names(&self.variables)?;
        let [p, q]: [ComponentFile; 2] = self
            .components
            .try_into()
            .map_err(|_| Error::Problem("exactly two components are required".into()))?;
        let env = vars.set_of(&self.env_outputs)?;
        let arch = Architecture::new(
            [vars.set_of(&p.inputs)?, vars.set_of(&q.inputs)?],
            [vars.set_of(&p.outputs)?, vars.set_of(&q.outputs)?],
            env,
            vars.all(),
        )?;
        let sp = SafetyFormula::new(parse(&p.spec, &vars)?, ComponentId::P, &arch)?;
        let sq = SafetyFormula::new(parse(&q.spec, &vars)?, ComponentId::Q, &arch)?;
        Ok(ProblemInstance {
            name: self.name.unwrap_or_else(|| "problem".into()),
            vars,
            arch,
            component_names: [p.name, q.name],
            specs: [sp, sq],
        })
    }
}

pub fn parse_problem(json: &str) -> Result<ProblemInstance> {
    serde_json::from_str::<ProblemFile>(json)?.into_instance()
}

pub fn load_problem(path: &Path) -> Result<ProblemInstance> {
    parse_problem(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUNNING: &str = r#"{
        "variables": ["b_in", "c_b", "b_out"],
        "env_outputs": ["b_in"],
        "components": [
            {"name": "r", "inputs": ["c_b"], "outputs": ["b_out"], "spec": "G (b_in <-> X b_out)"},
            {"name": "t", "inputs": ["b_in"], "outputs": ["c_b"], "spec": "true"}
        ]
    }"#;

    #[test]
    fn parses_running_example() {
        let p = parse_problem(RUNNING).unwrap();
        assert_eq!(p.spec(ComponentId::P).size(), 5);
        assert_eq!(p.arch.comm_inputs(ComponentId::P), p.vars.set_of(&["c_b"]).unwrap());
        assert!(!p.arch.is_bidirectional());
        let again = parse_problem(&p.to_json()).unwrap();
        assert_eq!(again.to_file().components, p.to_file().components);
    }

    #[test]
    fn architecture_violations() {
        let bad = RUNNING.replace(r#""inputs": ["c_b"], "outputs": ["b_out"]"#, r#""inputs": ["b_out"], "outputs": ["b_out"]"#);
        assert!(matches!(parse_problem(&bad), Err(Error::Architecture(_))));
        let overlap = RUNNING.replace(r#""outputs": ["c_b"]"#, r#""outputs": ["c_b", "b_in"]"#);
        assert!(matches!(parse_problem(&overlap), Err(Error::Architecture(_))));
    }

    #[test]
    fn spec_vocabulary_and_safety() {
        let foreign = RUNNING.replace("G (b_in <-> X b_out)", "G (c_b <-> X b_out)");
        assert!(matches!(parse_problem(&foreign), Err(Error::Vocabulary(_))));
        let live = RUNNING.replace("G (b_in <-> X b_out)", "!G !b_out");
        assert!(matches!(parse_problem(&live), Err(Error::NotSafety(_))));
        let unknown = RUNNING.replace("G (b_in <-> X b_out)", "G zz");
        assert!(matches!(parse_problem(&unknown), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn eval_prefix_on_running_example() {
        let p = parse_problem(RUNNING).unwrap();
        let f = p.spec(ComponentId::P);
        let v = |names: &[&str]| p.vars.set_of(names).unwrap();
        let ok = FiniteTrace::new(p.vars.all(), vec![v(&["b_in"]), v(&["b_out"]), v(&[])]);
        assert!(eval_prefix(&ok, f).unwrap());
        let bad = FiniteTrace::new(p.vars.all(), vec![v(&["b_in"]), v(&[])]);
        assert!(!eval_prefix(&bad, f).unwrap());
        let narrow = FiniteTrace::new(v(&["b_in"]), vec![]);
        assert!(matches!(eval_prefix(&narrow, f), Err(Error::Vocabulary(_))));
    }
}
