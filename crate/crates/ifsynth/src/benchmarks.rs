//! Parametric benchmark families.
//!
//! Every family has a transmitter `t` that reads all environment inputs and
//! writes one communication variable per input, and a receiver `r` that only
//! reads those variables. The transmitter's own specification is `true`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ltl::Ltl;
use crate::spec::{Architecture, ComponentId, ProblemInstance, SafetyFormula};
use crate::vars::{VarSet, VarTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    SeqTrans,
    Delay,
    Conj,
    Disj,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::SeqTrans, Family::Delay, Family::Conj, Family::Disj];

    pub fn name(self) -> &'static str {
        match self {
            Family::SeqTrans => "seq_trans",
            Family::Delay => "delay",
            Family::Conj => "conj",
            Family::Disj => "disj",
        }
    }

    /// Row label in benchmark tables.
    pub fn title(self) -> &'static str {
        match self {
            Family::SeqTrans => "Sequence Transmission",
            Family::Delay => "Delay",
            Family::Conj => "Conjunctions",
            Family::Disj => "Disjunctions",
        }
    }

    /// Smallest meaningful parameter.
    pub fn min_param(self) -> usize {
        1
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Problem(format!("unknown benchmark family `{s}`")))
    }
}

pub fn generate_benchmark(family: Family, n: usize) -> Result<ProblemInstance> {
    if n < family.min_param() {
        return Err(Error::Problem(format!("{family} needs a parameter of at least {}", family.min_param())));
    }
    let (ins, comms, outs): (Vec<String>, Vec<String>, Vec<String>) = match family {
        Family::SeqTrans if n == 1 => (vec!["b_in".into()], vec!["c_b".into()], vec!["b_out".into()]),
        Family::SeqTrans => (
            (1..=n).map(|k| format!("b_in_{k}")).collect(),
            (1..=n).map(|k| format!("c_b_{k}")).collect(),
            (1..=n).map(|k| format!("b_out_{k}")).collect(),
        ),
        Family::Delay => (vec!["i".into()], vec!["c".into()], vec!["o".into()]),
        Family::Conj | Family::Disj => (
            (1..=n).map(|k| format!("i_{k}")).collect(),
            (1..=n).map(|k| format!("c_{k}")).collect(),
            (1..=n).map(|k| format!("o_{k}")).collect(),
        ),
    };
    let mut vars = VarTable::new();
    let decl = |vars: &mut VarTable, names: &[String]| -> Result<Vec<u32>> {
        names.iter().map(|n| vars.declare(n)).collect()
    };
    let i = decl(&mut vars, &ins)?;
    let c = decl(&mut vars, &comms)?;
    let o = decl(&mut vars, &outs)?;
    let (iset, cset, oset) = (VarSet::from_ids(i.clone()), VarSet::from_ids(c), VarSet::from_ids(o.clone()));
    let arch = Architecture::new([cset, iset], [oset, cset], iset, vars.all())?;
    let var = |v: &u32| Ltl::var(*v);
    let phi = match family {
        Family::SeqTrans => Ltl::conj(
            i.iter().zip(&o).map(|(a, b)| Ltl::globally(Ltl::iff(var(a), Ltl::next(var(b))))),
        ),
        Family::Delay => {
            let delayed = (0..n).fold(var(&o[0]), |f, _| Ltl::next(f));
            Ltl::globally(Ltl::iff(var(&i[0]), delayed))
        }
        Family::Conj => Ltl::globally(Ltl::iff(
            Ltl::conj(i.iter().map(var)),
            Ltl::next(Ltl::conj(o.iter().map(var))),
        )),
        Family::Disj => Ltl::globally(Ltl::iff(
            Ltl::disj(i.iter().map(var)),
            Ltl::next(Ltl::disj(o.iter().map(var))),
        )),
    };
    let specs = [
        SafetyFormula::new(phi, ComponentId::P, &arch)?,
        SafetyFormula::new(Ltl::True, ComponentId::Q, &arch)?,
    ];
    Ok(ProblemInstance {
        name: format!("{family}({n})"),
        vars,
        arch,
        component_names: ["r".into(), "t".into()],
        specs,
    })
}
