use std::collections::BTreeSet;

use super::{Engine, NodeId};

impl Engine {
    /// Violations of the union-find invariants, as readable messages.
    ///
    /// 1. `repr[next[x]] = repr[repr[x]] = repr[x]`
    /// 2. members of one class are reachable from each other through `next`
    /// 3. following `target` from `x` reaches `repr[x]`, and each edge's
    ///    proof relates its two endpoints
    /// 4. `nextˢ[x] = x` for `s = size[repr[x]]`
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.nodes.len();
        let nm = |i: NodeId| self.nodes[i].name.to_string();
        for x in 0..n {
            let r = self.repr[x];
            if self.repr[self.next[x]] != r || self.repr[r] != r {
                out.push(format!("repr: {}", nm(x)));
            }
            let s = self.size[r];
            let mut y = x;
            let mut members = BTreeSet::new();
            for _ in 0..s {
                members.insert(y);
                y = self.next[y];
            }
            if y != x {
                out.push(format!("next cycle: next^{s}[{}] = {}", nm(x), nm(y)));
            }
            if x == r {
                let class: BTreeSet<NodeId> = (0..n).filter(|&z| self.repr[z] == r).collect();
                if class != members {
                    out.push(format!("class list: class of {} is not one circular list", nm(x)));
                }
            }
            let mut cur = x;
            let mut steps = 0;
            while let Some((t, edge)) = &self.pr[cur] {
                let ends = (edge.lhs.clone(), edge.rhs.clone());
                let (a, b) = (self.nodes[cur].name.clone(), self.nodes[*t].name.clone());
                if ends != (a.clone(), b.clone()) && ends != (b, a) {
                    out.push(format!("proof forest: edge {} -> {} carries a proof of {} == {}", nm(cur), nm(*t), ends.0, ends.1));
                }
                cur = *t;
                steps += 1;
                if steps > n {
                    break;
                }
            }
            if cur != r {
                out.push(format!("proof forest: path from {} ends at {}, not {}", nm(x), nm(cur), nm(r)));
            }
        }
        out
    }
}
