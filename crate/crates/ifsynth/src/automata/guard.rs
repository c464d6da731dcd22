//! Boolean guards over a small vocabulary, stored as truth tables.

use crate::vars::{VarId, VarSet, VarTable};

/// Largest vocabulary a guard may range over.
pub const MAX_GUARD_VARS: usize = 20;

/// Set of letters of `vocab`; bit `l` of the table is set iff letter `l`
/// satisfies the guard. Equal guards have equal tables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Guard {
    vocab: VarSet,
    bits: Vec<u64>,
}

fn words_for(vocab: VarSet) -> usize {
    assert!(vocab.len() <= MAX_GUARD_VARS, "guard vocabulary too large");
    vocab.num_letters().div_ceil(64)
}

impl Guard {
    pub fn empty(vocab: VarSet) -> Self {
        Guard { vocab, bits: vec![0; words_for(vocab)] }
    }

    pub fn full(vocab: VarSet) -> Self {
        Guard::empty(vocab).not()
    }

    pub fn letter(vocab: VarSet, l: usize) -> Self {
        let mut g = Guard::empty(vocab);
        g.insert(l);
        g
    }

    pub fn from_fn(vocab: VarSet, f: impl Fn(usize) -> bool) -> Self {
        let mut g = Guard::empty(vocab);
        for l in 0..vocab.num_letters() {
            if f(l) {
                g.insert(l);
            }
        }
        g
    }

    /// Letters where `v` is true (or false when `value` is false).
    pub fn literal(vocab: VarSet, v: VarId, value: bool) -> Self {
        let j = vocab.position(v).expect("literal outside vocabulary");
        Guard::from_fn(vocab, |l| (l >> j & 1 == 1) == value)
    }

    pub fn vocab(&self) -> VarSet {
        self.vocab
    }

    pub fn insert(&mut self, l: usize) {
        self.bits[l / 64] |= 1 << (l % 64);
    }

    pub fn contains(&self, l: usize) -> bool {
        self.bits[l / 64] >> (l % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.not().is_empty()
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn zip(&self, o: &Guard, f: impl Fn(u64, u64) -> u64) -> Guard {
        assert_eq!(self.vocab, o.vocab, "guards over different vocabularies");
        Guard { vocab: self.vocab, bits: self.bits.iter().zip(&o.bits).map(|(a, b)| f(*a, *b)).collect() }
    }

    pub fn and(&self, o: &Guard) -> Guard {
        self.zip(o, |a, b| a & b)
    }

    pub fn or(&self, o: &Guard) -> Guard {
        self.zip(o, |a, b| a | b)
    }

    pub fn not(&self) -> Guard {
        let n = self.vocab.num_letters();
        let mut bits: Vec<u64> = self.bits.iter().map(|w| !w).collect();
        if !n.is_multiple_of(64) {
            bits[n / 64] &= (1u64 << (n % 64)) - 1;
        }
        Guard { vocab: self.vocab, bits }
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vocab.num_letters()).filter(|l| self.contains(*l))
    }

    /// Same guard over a larger vocabulary.
    pub fn lift(&self, to: VarSet) -> Guard {
        assert!(self.vocab.is_subset(to), "lift target must contain the vocabulary");
        if to == self.vocab {
            return self.clone();
        }
        Guard::from_fn(to, |l| self.contains(to.translate(l, self.vocab)))
    }

    /// Existential projection onto `keep ∩ vocab`.
    pub fn exists(&self, keep: VarSet) -> Guard {
        let target = keep.inter(self.vocab);
        let mut g = Guard::empty(target);
        for l in self.letters() {
            g.insert(self.vocab.translate(l, target));
        }
        g
    }

    /// Guard with every variable renamed through `f`, which must be monotone
    /// on the vocabulary.
    pub fn rename(&self, f: impl Fn(VarId) -> VarId) -> Guard {
        let vocab = VarSet::from_ids(self.vocab.iter().map(&f));
        let ids: Vec<VarId> = self.vocab.iter().map(&f).collect();
        assert!(ids.windows(2).all(|w| w[0] < w[1]), "rename must preserve variable order");
        Guard { vocab, bits: self.bits.clone() }
    }

    fn cofactor(&self, v: VarId, value: bool) -> Guard {
        let j = self.vocab.position(v).expect("cofactor variable");
        let rest = self.vocab.minus(VarSet::singleton(v));
        Guard::from_fn(rest, |l| {
            let low = l & ((1 << j) - 1);
            let high = (l >> j) << (j + 1);
            self.contains(low | high | (usize::from(value) << j))
        })
    }

    /// Readable Boolean expression, canonical for a given guard.
    pub fn render(&self, vars: &VarTable) -> String {
        if self.is_empty() {
            return "false".into();
        }
        if self.is_full() {
            return "true".into();
        }
        for v in self.vocab.iter() {
            let hi = self.cofactor(v, true);
            let lo = self.cofactor(v, false);
            if hi == lo {
                continue;
            }
            let n = vars.name(v);
            let wrap = |g: &Guard| {
                let s = g.render(vars);
                if s.contains(' ') {
                    format!("({s})")
                } else {
                    s
                }
            };
            return if lo.is_empty() {
                if hi.is_full() {
                    n
                } else {
                    format!("{n} & {}", wrap(&hi))
                }
            } else if hi.is_empty() {
                if lo.is_full() {
                    format!("!{n}")
                } else {
                    format!("!{n} & {}", wrap(&lo))
                }
            } else if hi.is_full() {
                format!("{n} | {}", wrap(&lo))
            } else if lo.is_full() {
                format!("!{n} | {}", wrap(&hi))
            } else {
                format!("({n} & {}) | (!{n} & {})", wrap(&hi), wrap(&lo))
            };
        }
        unreachable!("non-constant guard depends on some variable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab3() -> VarSet {
        VarSet::from_ids([0, 2, 5])
    }

    #[test]
    fn boolean_ops() {
        let v = vocab3();
        let a = Guard::literal(v, 0, true);
        let c = Guard::literal(v, 5, false);
        assert_eq!(a.and(&c).count(), 2);
        assert_eq!(a.or(&c).count(), 6);
        assert_eq!(a.not(), Guard::literal(v, 0, false));
        assert!(a.and(&a.not()).is_empty());
        assert!(a.or(&a.not()).is_full());
    }

    #[test]
    fn lift_and_project() {
        let v = VarSet::from_ids([0, 5]);
        let g = Guard::literal(v, 5, true);
        let big = g.lift(vocab3());
        assert_eq!(big, Guard::literal(vocab3(), 5, true));
        assert_eq!(big.exists(v), g);
        assert!(g.exists(VarSet::singleton(0)).is_full());
    }

    #[test]
    fn canonical_equality() {
        let v = vocab3();
        let x = Guard::literal(v, 0, true).or(&Guard::literal(v, 2, true));
        let y = Guard::literal(v, 0, false).and(&Guard::literal(v, 2, false)).not();
        assert_eq!(x, y);
    }

    #[test]
    fn render() {
        let t = VarTable::from_names(&["a", "x", "b", "y", "z", "c"]).unwrap();
        let v = vocab3();
        assert_eq!(Guard::literal(v, 2, false).render(&t), "!b");
        let g = Guard::literal(v, 0, true).and(&Guard::literal(v, 5, false));
        assert_eq!(g.render(&t), "a & !c");
        assert_eq!(Guard::full(v).render(&t), "true");
    }

    #[test]
    fn small_tables_stay_canonical() {
        let v = VarSet::singleton(3);
        assert!(Guard::empty(v).not().is_full());
        assert_eq!(Guard::full(v).count(), 2);
        assert_eq!(Guard::full(VarSet::EMPTY).count(), 1);
    }
}
