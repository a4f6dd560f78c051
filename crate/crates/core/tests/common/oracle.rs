//! Brute-force congruence closure used as a reference.
//!
//! Classes are kept as a plain label vector and every rule is re-applied
//! to every pair until nothing changes, so the result is the least
//! fixpoint by construction.

use std::collections::{BTreeSet, HashMap};

use hcc_core::flatten::FlatEntry;
use hcc_core::{Name, Prepared, Term};

pub struct Oracle {
    names: Vec<Name>,
    index: HashMap<Name, usize>,
    apps: Vec<Option<(usize, usize)>>,
    types: Vec<Term>,
    type_node: Vec<Option<usize>>,
    registered: Vec<bool>,
    hyps: Vec<(usize, usize)>,
    class: Vec<usize>,
}

impl Oracle {
    pub fn new(p: &Prepared, subsingleton: bool) -> Oracle {
        let k = &p.kernel;
        let mut o = Oracle {
            names: Vec::new(),
            index: HashMap::new(),
            apps: Vec::new(),
            types: Vec::new(),
            type_node: Vec::new(),
            registered: Vec::new(),
            hyps: Vec::new(),
            class: Vec::new(),
        };
        let mut pending_hyps = Vec::new();
        for entry in &p.flat.entries {
            match entry {
                FlatEntry::Assumption { name, ty, .. } | FlatEntry::LocalDef { name, ty, .. } => {
                    let i = o.names.len();
                    o.index.insert(name.clone(), i);
                    o.names.push(name.clone());
                    o.types.push(k.normalize(ty).unwrap());
                    o.registered.push(subsingleton && p.registry.lookup(k, ty).unwrap().is_some());
                    o.apps.push(match entry {
                        FlatEntry::LocalDef { fun, arg, .. } => Some((o.index[fun], o.index[arg])),
                        _ => None,
                    });
                }
                FlatEntry::EqHyp { proof, .. } => pending_hyps.push((proof.lhs.clone(), proof.rhs.clone())),
            }
        }
        o.hyps = pending_hyps.iter().map(|(l, r)| (o.index[l], o.index[r])).collect();
        o.type_node = o
            .names
            .iter()
            .map(|n| if subsingleton { p.flat.type_nodes.get(n).map(|t| o.index[t]) } else { None })
            .collect();
        o.class = (0..o.names.len()).collect();
        o.saturate();
        o
    }

    fn same(&self, a: usize, b: usize) -> bool {
        self.class[a] == self.class[b]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ca, cb) = (self.class[a], self.class[b]);
        if ca == cb {
            return false;
        }
        for c in &mut self.class {
            if *c == ca {
                *c = cb;
            }
        }
        true
    }

    pub fn congruent(&self, d: usize, e: usize) -> bool {
        let (Some((f, a)), Some((g, b))) = (self.apps[d], self.apps[e]) else {
            return false;
        };
        self.same(a, b) && ((self.same(f, g) && self.types[f] == self.types[g]) || self.congruent(f, g))
    }

    fn saturate(&mut self) {
        let n = self.names.len();
        loop {
            let mut changed = false;
            for (l, r) in self.hyps.clone() {
                changed |= self.union(l, r);
            }
            for d in 0..n {
                for e in d + 1..n {
                    if !self.same(d, e) && self.congruent(d, e) {
                        changed |= self.union(d, e);
                    }
                }
            }
            for a in 0..n {
                if !self.registered[a] {
                    continue;
                }
                let Some(ta) = self.type_node[a] else { continue };
                for x in 0..n {
                    if let Some(tx) = self.type_node[x] {
                        if self.same(tx, ta) {
                            changed |= self.union(x, a);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    pub fn equal(&self, a: &str, b: &str) -> bool {
        self.same(self.index[a], self.index[b])
    }

    pub fn names(&self) -> &[Name] {
        &self.names
    }

    /// Pairs of distinct nodes the oracle considers congruent.
    pub fn congruent_pairs(&self) -> Vec<(Name, Name)> {
        let n = self.names.len();
        let mut out = Vec::new();
        for d in 0..n {
            for e in d + 1..n {
                if self.congruent(d, e) {
                    out.push((self.names[d].clone(), self.names[e].clone()));
                }
            }
        }
        out
    }

    pub fn partition(&self) -> BTreeSet<BTreeSet<Name>> {
        let mut groups: HashMap<usize, BTreeSet<Name>> = HashMap::new();
        for (i, n) in self.names.iter().enumerate() {
            groups.entry(self.class[i]).or_default().insert(n.clone());
        }
        groups.into_values().collect()
    }
}

pub fn normalize_partition(p: Vec<Vec<Name>>) -> BTreeSet<BTreeSet<Name>> {
    p.into_iter().map(|c| c.into_iter().collect()).collect()
}
