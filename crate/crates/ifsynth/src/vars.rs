//! Variables, variable sets and letters.
//!
//! A valuation is the set of variables that are true, so it shares the
//! [`VarSet`] representation. Automata index the letters of a vocabulary
//! densely: bit `j` of a letter is the value of the `j`-th smallest variable
//! of the vocabulary.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of declared variables. Ids `32..64` hold primed copies.
pub const MAX_VARS: usize = 32;
const PRIME_OFFSET: u32 = 32;

pub type VarId = u32;

/// A set of variable ids, also used as a valuation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarSet(pub u64);

pub type Valuation = VarSet;

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn singleton(v: VarId) -> Self {
        VarSet(1u64 << v)
    }

    pub fn from_ids<I: IntoIterator<Item = VarId>>(ids: I) -> Self {
        ids.into_iter().fold(VarSet::EMPTY, |s, v| s.with(v))
    }

    pub fn with(self, v: VarId) -> Self {
        VarSet(self.0 | (1u64 << v))
    }

    pub fn contains(self, v: VarId) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn union(self, o: VarSet) -> Self {
        VarSet(self.0 | o.0)
    }

    pub fn inter(self, o: VarSet) -> Self {
        VarSet(self.0 & o.0)
    }

    pub fn minus(self, o: VarSet) -> Self {
        VarSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: VarSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_disjoint(self, o: VarSet) -> bool {
        self.0 & o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Ids in ascending order.
    pub fn iter(self) -> impl Iterator<Item = VarId> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros();
                rest &= rest - 1;
                Some(v)
            }
        })
    }

    /// Primed copy of an unprimed set.
    pub fn primed(self) -> Self {
        debug_assert!(self.0 >> PRIME_OFFSET == 0);
        VarSet(self.0 << PRIME_OFFSET)
    }

    /// Drops the prime from every primed id; unprimed ids are kept.
    pub fn unprimed(self) -> Self {
        VarSet((self.0 & 0xffff_ffff) | (self.0 >> PRIME_OFFSET))
    }

    pub fn num_letters(self) -> usize {
        1usize << self.len()
    }

    /// Dense letter index of a valuation restricted to this vocabulary.
    pub fn encode(self, val: Valuation) -> usize {
        let mut letter = 0usize;
        for (j, v) in self.iter().enumerate() {
            if val.contains(v) {
                letter |= 1 << j;
            }
        }
        letter
    }

    /// Valuation denoted by a dense letter index.
    pub fn decode(self, letter: usize) -> Valuation {
        let mut val = VarSet::EMPTY;
        for (j, v) in self.iter().enumerate() {
            if letter >> j & 1 == 1 {
                val = val.with(v);
            }
        }
        val
    }

    /// Letter of `to` whose restriction to `self` is `letter` (other bits false).
    pub fn translate(self, letter: usize, to: VarSet) -> usize {
        to.encode(self.decode(letter))
    }

    /// Position of `v` among the vocabulary's variables.
    pub fn position(self, v: VarId) -> Option<usize> {
        self.iter().position(|x| x == v)
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Preference order on the letters of a `k`-variable vocabulary.
///
/// Valuations are compared on their truth vectors in declaration order, with
/// true before false. Every tie-break in the crate uses this order.
pub fn letters_in_order(k: usize) -> Vec<usize> {
    (0..1usize << k)
        .rev()
        .map(|r| (0..k).filter(|j| r >> (k - 1 - j) & 1 == 1).fold(0, |l, j| l | 1 << j))
        .collect()
}

/// Rank of a letter in [`letters_in_order`].
pub fn letter_rank(k: usize, letter: usize) -> usize {
    let r = (0..k).filter(|j| letter >> j & 1 == 1).fold(0usize, |r, j| r | 1 << (k - 1 - j));
    (1usize << k) - 1 - r
}

/// Names of declared variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    index: HashMap<String, VarId>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut t = Self::new();
        for n in names {
            t.declare(n.as_ref())?;
        }
        Ok(t)
    }

    pub fn declare(&mut self, name: &str) -> Result<VarId> {
        if !is_identifier(name) {
            return Err(Error::Problem(format!("invalid variable name `{name}`")));
        }
        if self.index.contains_key(name) {
            return Err(Error::Problem(format!("variable `{name}` declared twice")));
        }
        if self.names.len() >= MAX_VARS {
            return Err(Error::Problem(format!("more than {MAX_VARS} variables")));
        }
        let id = self.names.len() as VarId;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn id(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<VarSet> {
        names.iter().try_fold(VarSet::EMPTY, |s, n| {
            self.id(n.as_ref())
                .map(|v| s.with(v))
                .ok_or_else(|| Error::Problem(format!("unknown variable `{}`", n.as_ref())))
        })
    }

    pub fn name(&self, v: VarId) -> String {
        if v >= PRIME_OFFSET {
            format!("{}'", self.names[(v - PRIME_OFFSET) as usize])
        } else {
            self.names[v as usize].clone()
        }
    }

    pub fn names_of(&self, s: VarSet) -> Vec<String> {
        s.iter().map(|v| self.name(v)).collect()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn all(&self) -> VarSet {
        VarSet::from_ids(0..self.names.len() as VarId)
    }

    /// `{a, b}` style rendering of a valuation.
    pub fn show(&self, val: Valuation) -> String {
        format!("{{{}}}", self.names_of(val).join(", "))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
