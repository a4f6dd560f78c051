//! The congruence closure engine.
//!
//! Nodes are the variables of a [`FlatContext`]. Classes are kept as a
//! union-find with explicit representatives (`repr`), circular member
//! lists (`next`) and a proof forest (`pr`) whose edges carry the proofs
//! that justified each merge.

mod explain;
mod invariants;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::{DefaultHasher, Hash, Hasher};

use crate::equality::{SubsingletonRegistry, TheoryError};
use crate::flatten::{FlatContext, FlatEntry};
use crate::kernel::{name, Declaration, Kernel, KernelError, Name, Term};
use crate::proof::EqProof;

pub type NodeId = usize;

#[derive(Debug, Clone, thiserror::Error)]
pub enum CcError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error("unknown node `{0}`")]
    UnknownNode(Name),
    #[error("node `{0}` used before it was initialized")]
    Uninitialized(Name),
    #[error("`{0}` and `{1}` are not in the same class")]
    NotEqual(Name, Name),
    #[error("`{0}` and `{1}` are not congruent")]
    NotCongruent(Name, Name),
    #[error("cannot instantiate hcongr_{arity} at `{fun}` of type `{ty}`")]
    Unsupported { fun: Name, ty: Term, arity: usize },
}

/// How a congrtable hit is handled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LookupPolicy {
    /// Enqueue an equality with every congruent entry from a different
    /// class, and always insert the new entry.
    #[default]
    AllMatches,
    /// Enqueue an equality with the first congruent entry and leave the new
    /// entry out of the table.
    FirstMatch,
}

#[derive(Clone, Copy, Debug)]
pub struct CcOptions {
    /// Propagate equalities between inhabitants of subsingleton types.
    pub subsingleton: bool,
    /// Check the data-structure invariants after every merge.
    pub debug_invariants: bool,
    /// Record one line per merge.
    pub trace: bool,
    pub lookup: LookupPolicy,
}

impl Default for CcOptions {
    fn default() -> Self {
        CcOptions { subsingleton: true, debug_invariants: false, trace: false, lookup: LookupPolicy::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    Hyp,
    Congr,
    Subsingleton,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::Hyp => "hyp",
            Reason::Congr => "congr",
            Reason::Subsingleton => "subsingleton",
        }
    }
}

#[derive(Clone, Debug)]
struct Fact {
    lhs: NodeId,
    rhs: NodeId,
    proof: Term,
    reason: Reason,
}

#[derive(Clone, Debug)]
enum Pending {
    Init(NodeId),
    Eq(Fact),
}

#[derive(Clone, Debug)]
struct NodeInfo {
    name: Name,
    ty: Term,
    /// Interned normal form of `ty`.
    ty_id: usize,
    app: Option<(NodeId, NodeId)>,
    /// Set for the atoms standing for λ, Π and `Type` subterms.
    value: Option<Term>,
    type_node: Option<NodeId>,
    /// `hsse` axiom for the node's own type, if that type is a registered
    /// subsingleton.
    hsse: Option<Name>,
    name_hash: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub merges: usize,
    pub congruences: usize,
    pub subsingleton_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailureReport {
    /// Classes in order of first member; members in node order.
    pub partition: Vec<Vec<Name>>,
    pub congr_table_size: usize,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Proved(Term),
    Unknown(FailureReport),
}

pub struct Engine {
    kernel: Kernel,
    opts: CcOptions,
    nodes: Vec<NodeInfo>,
    ids: HashMap<Name, NodeId>,
    initialized: Vec<bool>,
    repr: Vec<NodeId>,
    next: Vec<NodeId>,
    size: Vec<usize>,
    pr: Vec<Option<(NodeId, EqProof)>>,
    pending: VecDeque<Pending>,
    congrtable: HashMap<u64, Vec<NodeId>>,
    table_key: Vec<Option<u64>>,
    uselists: Vec<BTreeSet<NodeId>>,
    inhabitants: Vec<Vec<NodeId>>,
    subrep: Vec<Option<NodeId>>,
    fresh: usize,
    generated: Vec<Name>,
    trace: Vec<String>,
    violations: Vec<String>,
    stats: Stats,
}

impl Engine {
    /// Set up the state for `flat` and queue its entries. The kernel must
    /// already hold every flattened definition and the `hcongr_n` axioms up
    /// to `flat.max_arity`.
    pub fn new(
        kernel: Kernel,
        registry: &SubsingletonRegistry,
        flat: &FlatContext,
        opts: CcOptions,
    ) -> Result<Self, CcError> {
        let mut eng = Engine {
            kernel,
            opts,
            nodes: Vec::new(),
            ids: HashMap::new(),
            initialized: Vec::new(),
            repr: Vec::new(),
            next: Vec::new(),
            size: Vec::new(),
            pr: Vec::new(),
            pending: VecDeque::new(),
            congrtable: HashMap::new(),
            table_key: Vec::new(),
            uselists: Vec::new(),
            inhabitants: Vec::new(),
            subrep: Vec::new(),
            fresh: 0,
            generated: Vec::new(),
            trace: Vec::new(),
            violations: Vec::new(),
            stats: Stats::default(),
        };
        let mut ty_ids: HashMap<Term, usize> = HashMap::new();
        for entry in &flat.entries {
            let (n, ty, app, value) = match entry {
                FlatEntry::Assumption { name, ty, value } => (name, ty, None, value.clone()),
                FlatEntry::LocalDef { name, ty, fun, arg } => {
                    (name, ty, Some((eng.id(fun)?, eng.id(arg)?)), None)
                }
                FlatEntry::EqHyp { proof, .. } => {
                    let fact = Fact {
                        lhs: eng.id(&proof.lhs)?,
                        rhs: eng.id(&proof.rhs)?,
                        proof: proof.proof.clone(),
                        reason: Reason::Hyp,
                    };
                    eng.pending.push_back(Pending::Eq(fact));
                    continue;
                }
            };
            let nf = eng.kernel.normalize(ty)?;
            let next_id = ty_ids.len();
            let ty_id = *ty_ids.entry(nf).or_insert(next_id);
            let type_node = match flat.type_nodes.get(n) {
                Some(t) => Some(eng.id(t)?),
                None => None,
            };
            let hsse = if opts.subsingleton {
                registry.lookup(&eng.kernel, ty)?.map(|e| e.hsse.clone())
            } else {
                None
            };
            let id = eng.nodes.len();
            eng.nodes.push(NodeInfo {
                name: n.clone(),
                ty: ty.clone(),
                ty_id,
                app,
                value,
                type_node,
                hsse,
                name_hash: Term::cnst(n.clone()).hash_value(),
            });
            eng.ids.insert(n.clone(), id);
            eng.initialized.push(false);
            eng.repr.push(id);
            eng.next.push(id);
            eng.size.push(1);
            eng.pr.push(None);
            eng.table_key.push(None);
            eng.uselists.push(BTreeSet::new());
            eng.inhabitants.push(Vec::new());
            eng.subrep.push(None);
            eng.pending.push_back(Pending::Init(id));
        }
        Ok(eng)
    }

    fn id(&self, n: &Name) -> Result<NodeId, CcError> {
        self.ids.get(n).copied().ok_or_else(|| CcError::UnknownNode(n.clone()))
    }

    /// Drain the pending queue.
    pub fn run(&mut self) -> Result<(), CcError> {
        while let Some(item) = self.pending.pop_front() {
            match item {
                Pending::Init(c) => self.initialize(c)?,
                Pending::Eq(fact) => {
                    self.process_eq(fact)?;
                    if self.opts.debug_invariants {
                        let found = self.invariant_violations();
                        self.violations.extend(found);
                    }
                }
            }
        }
        Ok(())
    }

    /// A proof of `a == b`, or the final partition if the classes differ.
    pub fn outcome(&mut self, a: &Name, b: &Name) -> Result<Outcome, CcError> {
        let (ia, ib) = (self.id(a)?, self.id(b)?);
        if self.repr[ia] == self.repr[ib] {
            Ok(Outcome::Proved(self.mkpr(ia, ib)?))
        } else {
            Ok(Outcome::Unknown(FailureReport {
                partition: self.partition(),
                congr_table_size: self.congr_table_size(),
            }))
        }
    }

    fn initialize(&mut self, c: NodeId) -> Result<(), CcError> {
        self.initialized[c] = true;
        if let Some((f, a)) = self.nodes[c].app {
            for x in [f, a] {
                if !self.initialized[x] {
                    return Err(CcError::Uninitialized(self.nodes[x].name.clone()));
                }
            }
            self.init_uselist(c, c);
            self.insert_with_lookup(c)?;
        }
        if self.opts.subsingleton {
            self.subsingleton_init(c)?;
        }
        Ok(())
    }

    /// Register `parent` in the uselists of every node `congruent` may
    /// inspect below `e`.
    fn init_uselist(&mut self, e: NodeId, parent: NodeId) {
        let mut cur = e;
        while let Some((f, a)) = self.nodes[cur].app {
            let (rf, ra) = (self.repr[f], self.repr[a]);
            self.uselists[rf].insert(parent);
            self.uselists[ra].insert(parent);
            cur = f;
        }
    }

    fn congr_hash(&self, e: NodeId) -> u64 {
        let (f, a) = self.nodes[e].app.expect("local definition");
        let mut h = DefaultHasher::new();
        self.nodes[self.repr[f]].name_hash.hash(&mut h);
        self.nodes[self.repr[a]].name_hash.hash(&mut h);
        h.finish()
    }

    /// Whether `hcongr_n` for some `n` proves `d == e`.
    pub(crate) fn congruent(&self, d: NodeId, e: NodeId) -> bool {
        let (Some((f, a)), Some((g, b))) = (self.nodes[d].app, self.nodes[e].app) else {
            return false;
        };
        if self.repr[a] != self.repr[b] {
            return false;
        }
        (self.repr[f] == self.repr[g] && self.nodes[f].ty_id == self.nodes[g].ty_id)
            || self.congruent(f, g)
    }

    fn insert_with_lookup(&mut self, e: NodeId) -> Result<(), CcError> {
        let key = self.congr_hash(e);
        let bucket = self.congrtable.get(&key).cloned().unwrap_or_default();
        let mut hit_classes: Vec<NodeId> = Vec::new();
        for d in bucket {
            let rd = self.repr[d];
            if rd == self.repr[e] || hit_classes.contains(&rd) || !self.congruent(d, e) {
                continue;
            }
            hit_classes.push(rd);
            let proof = self.mkcongr(d, e)?;
            self.stats.congruences += 1;
            self.enqueue_generated(d, e, proof, Reason::Congr)?;
            if self.opts.lookup == LookupPolicy::FirstMatch {
                return Ok(());
            }
        }
        self.congrtable.entry(key).or_default().push(e);
        self.table_key[e] = Some(key);
        Ok(())
    }

    fn remove_from_table(&mut self, e: NodeId) {
        if let Some(key) = self.table_key[e].take() {
            if let Some(bucket) = self.congrtable.get_mut(&key) {
                bucket.retain(|&x| x != e);
                if bucket.is_empty() {
                    self.congrtable.remove(&key);
                }
            }
        }
    }

    /// Name `proof : lhs == rhs` by a fresh local definition and queue it.
    fn enqueue_generated(
        &mut self,
        lhs: NodeId,
        rhs: NodeId,
        proof: Term,
        reason: Reason,
    ) -> Result<(), CcError> {
        let e = loop {
            self.fresh += 1;
            let n = name(&format!("e#{}", self.fresh));
            if !self.kernel.is_declared(&n) {
                break n;
            }
        };
        let stmt = EqProof::new(self.nodes[lhs].name.clone(), self.nodes[rhs].name.clone(), proof.clone())
            .statement(self.nodes[lhs].ty.clone(), self.nodes[rhs].ty.clone());
        self.kernel.push_local(Declaration::definition(e.clone(), stmt, proof))?;
        self.generated.push(e.clone());
        self.pending.push_back(Pending::Eq(Fact { lhs, rhs, proof: Term::cnst(e), reason }));
        Ok(())
    }

    fn process_eq(&mut self, fact: Fact) -> Result<(), CcError> {
        let (mut a, mut b) = (fact.lhs, fact.rhs);
        for x in [a, b] {
            if !self.initialized[x] {
                return Err(CcError::Uninitialized(self.nodes[x].name.clone()));
            }
        }
        if self.repr[a] == self.repr[b] {
            return Ok(());
        }
        if self.size[self.repr[a]] > self.size[self.repr[b]] {
            std::mem::swap(&mut a, &mut b);
        }
        let (ra, rb) = (self.repr[a], self.repr[b]);
        if self.opts.trace {
            self.trace.push(format!(
                "merge {} {} reason={}",
                self.nodes[fact.lhs].name,
                self.nodes[fact.rhs].name,
                fact.reason.as_str()
            ));
        }
        self.stats.merges += 1;

        let uses: Vec<NodeId> = self.uselists[ra].iter().copied().collect();
        for &e in &uses {
            self.remove_from_table(e);
        }
        self.flip_proofs(a);
        let mut x = ra;
        loop {
            self.repr[x] = rb;
            x = self.next[x];
            if x == ra {
                break;
            }
        }
        let edge = EqProof::new(
            self.nodes[fact.lhs].name.clone(),
            self.nodes[fact.rhs].name.clone(),
            fact.proof,
        );
        self.pr[a] = Some((b, edge));
        for &e in &uses {
            // entries also in `uselists[rb]` may have been reinserted already
            if self.table_key[e].is_none() {
                self.insert_with_lookup(e)?;
            }
        }
        self.next.swap(ra, rb);
        let moved = std::mem::take(&mut self.uselists[ra]);
        self.uselists[rb].extend(moved);
        self.size[rb] += self.size[ra];

        if self.opts.subsingleton {
            self.subsingleton_merge(ra, rb)?;
        }
        Ok(())
    }

    /// Reverse the proof-forest path from `a` to its root so that `a`
    /// becomes the root.
    fn flip_proofs(&mut self, a: NodeId) {
        let mut prev: Option<(NodeId, EqProof)> = None;
        let mut cur = a;
        loop {
            let up = self.pr[cur].take();
            self.pr[cur] = prev;
            match up {
                Some((target, edge)) => {
                    prev = Some((cur, edge));
                    cur = target;
                }
                None => break,
            }
        }
    }

    fn subsingleton_init(&mut self, c: NodeId) -> Result<(), CcError> {
        let Some(tc) = self.nodes[c].type_node else {
            return Ok(());
        };
        let cls = self.repr[tc];
        self.inhabitants[cls].push(c);
        if let Some(a) = self.subrep[cls] {
            self.enqueue_subsingleton(c, a)?;
        } else if self.nodes[c].hsse.is_some() {
            self.subrep[cls] = Some(c);
            let waiting = self.inhabitants[cls].clone();
            for x in waiting {
                self.enqueue_subsingleton(x, c)?;
            }
        }
        Ok(())
    }

    fn subsingleton_merge(&mut self, ra: NodeId, rb: NodeId) -> Result<(), CcError> {
        let moved = std::mem::take(&mut self.inhabitants[ra]);
        match (self.subrep[ra].take(), self.subrep[rb]) {
            (Some(x), Some(y)) => self.enqueue_subsingleton(x, y)?,
            (Some(x), None) => {
                self.subrep[rb] = Some(x);
                for i in self.inhabitants[rb].clone() {
                    self.enqueue_subsingleton(i, x)?;
                }
            }
            (None, Some(y)) => {
                for &i in &moved {
                    self.enqueue_subsingleton(i, y)?;
                }
            }
            (None, None) => {}
        }
        self.inhabitants[rb].extend(moved);
        Ok(())
    }

    /// Queue `c == a` where `a`'s own type is a registered subsingleton and
    /// the types of `c` and `a` are already in one class.
    fn enqueue_subsingleton(&mut self, c: NodeId, a: NodeId) -> Result<(), CcError> {
        if self.repr[c] == self.repr[a] {
            return Ok(());
        }
        let hsse = self.nodes[a].hsse.clone().expect("subsingleton representative");
        let (tc, ta) = (
            self.nodes[c].type_node.expect("typed inhabitant"),
            self.nodes[a].type_node.expect("typed inhabitant"),
        );
        let p = self.mkpr(tc, ta)?;
        let proof = Term::apps(
            Term::cnst(hsse),
            [
                Term::cnst(self.nodes[tc].name.clone()),
                Term::cnst(self.nodes[c].name.clone()),
                Term::cnst(self.nodes[a].name.clone()),
                p,
            ],
        );
        self.stats.subsingleton_steps += 1;
        self.enqueue_generated(c, a, proof, Reason::Subsingleton)
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn into_kernel(self) -> Kernel {
        self.kernel
    }

    pub fn options(&self) -> &CcOptions {
        &self.opts
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    /// Merge log, when tracing is on.
    pub fn trace(&self) -> &[String] {
        &self.trace
    }

    /// Invariant violations seen after merges, when checking is on.
    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    /// Names of the proof definitions introduced while solving, in order.
    pub fn generated(&self) -> &[Name] {
        &self.generated
    }

    pub fn node_names(&self) -> impl Iterator<Item = &Name> {
        self.nodes.iter().map(|n| &n.name)
    }

    pub fn contains(&self, n: &str) -> bool {
        self.ids.contains_key(n)
    }

    pub fn repr_of(&self, n: &Name) -> Result<&Name, CcError> {
        Ok(&self.nodes[self.repr[self.id(n)?]].name)
    }

    pub fn same_class(&self, a: &Name, b: &Name) -> Result<bool, CcError> {
        Ok(self.repr[self.id(a)?] == self.repr[self.id(b)?])
    }

    pub fn class_size(&self, n: &Name) -> Result<usize, CcError> {
        Ok(self.size[self.repr[self.id(n)?]])
    }

    /// Members of the class of `n`, read off the circular list.
    pub fn class_members(&self, n: &Name) -> Result<Vec<Name>, CcError> {
        let start = self.id(n)?;
        let mut out = vec![self.nodes[start].name.clone()];
        let mut x = self.next[start];
        while x != start {
            out.push(self.nodes[x].name.clone());
            x = self.next[x];
        }
        Ok(out)
    }

    pub fn partition(&self) -> Vec<Vec<Name>> {
        let mut index: HashMap<NodeId, usize> = HashMap::new();
        let mut classes: Vec<Vec<Name>> = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if !self.initialized[i] {
                continue;
            }
            let k = *index.entry(self.repr[i]).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[k].push(node.name.clone());
        }
        classes
    }

    pub fn congr_table_size(&self) -> usize {
        self.congrtable.values().map(Vec::len).sum()
    }

    /// The subterm a node stands for, with every node unfolded.
    pub fn node_term(&self, n: &Name) -> Result<Term, CcError> {
        Ok(self.unfold(self.id(n)?))
    }

    fn unfold(&self, i: NodeId) -> Term {
        let node = &self.nodes[i];
        match (node.app, &node.value) {
            (Some((f, a)), _) => Term::app(self.unfold(f), self.unfold(a)),
            (None, Some(v)) => v.clone(),
            (None, None) => Term::cnst(node.name.clone()),
        }
    }

    /// Queue an extra equality; it is processed by the next [`Engine::run`].
    pub fn assert_eq(&mut self, eq: &EqProof) -> Result<(), CcError> {
        let fact = Fact { lhs: self.id(&eq.lhs)?, rhs: self.id(&eq.rhs)?, proof: eq.proof.clone(), reason: Reason::Hyp };
        self.pending.push_back(Pending::Eq(fact));
        Ok(())
    }
}

/// Build an engine for `flat`, run it to completion and answer the goal.
pub fn solve(
    kernel: Kernel,
    registry: &SubsingletonRegistry,
    flat: &FlatContext,
    opts: CcOptions,
) -> Result<(Outcome, Engine), CcError> {
    let mut engine = Engine::new(kernel, registry, flat, opts)?;
    engine.run()?;
    let outcome = engine.outcome(&flat.goal_lhs, &flat.goal_rhs)?;
    Ok((outcome, engine))
}
