//! Backtrackable congruence closure with explanations.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::ast::Term;
use crate::sat::Lit;

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Var(String),
    App(String, Vec<NodeId>),
}

/// Why two nodes were merged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Just {
    Asserted(Lit),
    Congruence(NodeId, NodeId),
}

#[derive(Clone, Debug)]
enum Undo {
    Union { child: NodeId, root: NodeId },
    Edge,
    Diseq,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EufError {
    #[error("backtrack mark is stale or unknown")]
    StaleMark,
    #[error("term `{0}` is not uninterpreted")]
    NotUninterpreted(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mark {
    depth: usize,
    serial: u64,
}

#[derive(Clone, Debug, Default)]
pub struct EGraph {
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
    parent: Vec<NodeId>,
    size: Vec<usize>,
    /// Merge edges; they form a forest whose paths justify equalities.
    edges: Vec<(NodeId, NodeId, Just)>,
    adj: Vec<Vec<usize>>,
    diseqs: Vec<(NodeId, NodeId, Lit)>,
    trail: Vec<Undo>,
    marks: Vec<(usize, u64)>,
    next_serial: u64,
}

impl EGraph {
    pub fn new() -> EGraph {
        EGraph::default()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        self.parent.push(id);
        self.size.push(1);
        self.adj.push(Vec::new());
        id
    }

    /// Node for a variable or application term, interning subterms.
    pub fn add_term(&mut self, t: &Term) -> Result<NodeId, EufError> {
        match t {
            Term::Var(x) => Ok(self.intern(Node::Var(x.clone()))),
            Term::App(f, args) => {
                let mut ids = Vec::with_capacity(args.len());
                for a in args {
                    ids.push(self.add_term(a)?);
                }
                let before = self.nodes.len();
                let id = self.intern(Node::App(f.clone(), ids));
                if self.nodes.len() > before && !self.edges.is_empty() {
                    self.close(VecDeque::new());
                }
                Ok(id)
            }
            other => Err(EufError::NotUninterpreted(other.to_string())),
        }
    }

    pub fn node_of(&self, t: &Term) -> Option<NodeId> {
        match t {
            Term::Var(x) => self.index.get(&Node::Var(x.clone())).copied(),
            Term::App(f, args) => {
                let ids = args.iter().map(|a| self.node_of(a)).collect::<Option<Vec<_>>>()?;
                self.index.get(&Node::App(f.clone(), ids)).copied()
            }
            _ => None,
        }
    }

    pub fn find(&self, mut n: NodeId) -> NodeId {
        while self.parent[n] != n {
            n = self.parent[n];
        }
        n
    }

    /// Representative of every node, for comparing class structure.
    pub fn representatives(&self) -> Vec<NodeId> {
        (0..self.nodes.len()).map(|n| self.find(n)).collect()
    }

    pub fn mark(&mut self) -> Mark {
        let serial = self.next_serial;
        self.next_serial += 1;
        self.marks.push((self.trail.len(), serial));
        Mark { depth: self.marks.len() - 1, serial }
    }

    pub fn backtrack_to(&mut self, mark: Mark) -> Result<(), EufError> {
        match self.marks.get(mark.depth) {
            Some(&(len, serial)) if serial == mark.serial => {
                while self.trail.len() > len {
                    match self.trail.pop().unwrap() {
                        Undo::Union { child, root } => {
                            self.parent[child] = child;
                            self.size[root] -= self.size[child];
                        }
                        Undo::Edge => {
                            let (a, b, _) = self.edges.pop().unwrap();
                            self.adj[a].pop();
                            self.adj[b].pop();
                        }
                        Undo::Diseq => {
                            self.diseqs.pop();
                        }
                    }
                }
                self.marks.truncate(mark.depth);
                // nodes interned after the mark may be congruent under older merges
                self.close(VecDeque::new());
                Ok(())
            }
            _ => Err(EufError::StaleMark),
        }
    }

    fn union(&mut self, a: NodeId, b: NodeId, why: Just) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let e = self.edges.len();
        self.edges.push((a, b, why));
        self.adj[a].push(e);
        self.adj[b].push(e);
        self.trail.push(Undo::Edge);
        let (child, root) = if self.size[ra] < self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[child] = root;
        self.size[root] += self.size[child];
        self.trail.push(Undo::Union { child, root });
    }

    /// Merges `a` and `b`, then closes under congruence.
    fn merge(&mut self, a: NodeId, b: NodeId, why: Just) {
        self.close(VecDeque::from([(a, b, why)]));
    }

    fn close(&mut self, mut pending: VecDeque<(NodeId, NodeId, Just)>) {
        let mut first = true;
        while first || !pending.is_empty() {
            if let Some((a, b, why)) = pending.pop_front() {
                if self.find(a) == self.find(b) {
                    continue;
                }
                self.union(a, b, why);
            }
            first = false;
            let mut table: HashMap<(&str, Vec<NodeId>), NodeId> = HashMap::new();
            for (n, node) in self.nodes.iter().enumerate() {
                if let Node::App(f, args) = node {
                    let sig = (f.as_str(), args.iter().map(|&x| self.find(x)).collect());
                    match table.get(&sig) {
                        Some(&m) if self.find(m) != self.find(n) => pending.push_back((m, n, Just::Congruence(m, n))),
                        Some(_) => {}
                        None => {
                            table.insert(sig, n);
                        }
                    }
                }
            }
        }
    }

    fn violated_diseq(&self) -> Option<Vec<Lit>> {
        let &(a, b, tag) = self.diseqs.iter().find(|(a, b, _)| self.find(*a) == self.find(*b))?;
        let mut out = self.explain(a, b);
        out.push(tag);
        out.sort();
        out.dedup();
        Some(out)
    }

    pub fn assert_eq(&mut self, a: NodeId, b: NodeId, tag: Lit) -> Result<(), Vec<Lit>> {
        self.merge(a, b, Just::Asserted(tag));
        self.violated_diseq().map_or(Ok(()), Err)
    }

    pub fn assert_diseq(&mut self, a: NodeId, b: NodeId, tag: Lit) -> Result<(), Vec<Lit>> {
        self.diseqs.push((a, b, tag));
        self.trail.push(Undo::Diseq);
        self.violated_diseq().map_or(Ok(()), Err)
    }

    /// Asserts `lhs = rhs` or its negation, interning both sides.
    pub fn assert_terms(&mut self, lhs: &Term, rhs: &Term, positive: bool, tag: Lit) -> Result<Result<(), Vec<Lit>>, EufError> {
        let a = self.add_term(lhs)?;
        let b = self.add_term(rhs)?;
        Ok(if positive { self.assert_eq(a, b, tag) } else { self.assert_diseq(a, b, tag) })
    }

    /// Asserted literals implying `a = b`; empty when they are the same node.
    pub fn explain(&self, a: NodeId, b: NodeId) -> Vec<Lit> {
        let mut out = Vec::new();
        self.explain_into(a, b, &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn explain_into(&self, a: NodeId, b: NodeId, out: &mut Vec<Lit>) {
        if a == b {
            return;
        }
        // the merge edges form a forest, so the path is unique
        let mut via: HashMap<NodeId, usize> = HashMap::new();
        let mut queue = VecDeque::from([a]);
        via.insert(a, usize::MAX);
        while let Some(n) = queue.pop_front() {
            if n == b {
                break;
            }
            for &e in &self.adj[n] {
                let (x, y, _) = self.edges[e];
                let m = if x == n { y } else { x };
                if let std::collections::hash_map::Entry::Vacant(slot) = via.entry(m) {
                    slot.insert(e);
                    queue.push_back(m);
                }
            }
        }
        assert!(via.contains_key(&b), "explain called on nodes in different classes");
        let mut n = b;
        while n != a {
            let e = via[&n];
            let (x, y, why) = self.edges[e];
            match why {
                Just::Asserted(l) => out.push(l),
                Just::Congruence(p, q) => {
                    if let (Node::App(_, pa), Node::App(_, qa)) = (&self.nodes[p], &self.nodes[q]) {
                        for (&u, &v) in pa.iter().zip(qa.iter()) {
                            self.explain_into(u, v, out);
                        }
                    }
                }
            }
            n = if x == n { y } else { x };
        }
    }

    /// Entailed registered equalities with their explanations. Conflicts surface at assertion time.
    pub fn check_and_deduce(&self, registered: &[(NodeId, NodeId, Lit)]) -> Vec<(Lit, Vec<Lit>)> {
        registered
            .iter()
            .filter(|(a, b, _)| self.find(*a) == self.find(*b))
            .map(|&(a, b, l)| (l, self.explain(a, b)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn assert_examples() {
        let mut g = EGraph::new();
        let (a, b, c) = (g.add_term(&v("a")).unwrap(), g.add_term(&v("b")).unwrap(), g.add_term(&v("c")).unwrap());
        g.assert_eq(a, b, Lit::pos(0)).unwrap();
        g.assert_eq(b, c, Lit::pos(1)).unwrap();
        assert_eq!(g.assert_diseq(a, c, Lit::pos(2)), Err(vec![Lit::pos(0), Lit::pos(1), Lit::pos(2)]));

        let mut g = EGraph::new();
        let fa = g.add_term(&Term::app("f", vec![v("a")])).unwrap();
        let fb = g.add_term(&Term::app("f", vec![v("b")])).unwrap();
        let (a, b) = (g.node_of(&v("a")).unwrap(), g.node_of(&v("b")).unwrap());
        g.assert_eq(a, b, Lit::pos(0)).unwrap();
        assert_eq!(g.assert_diseq(fa, fb, Lit::pos(1)), Err(vec![Lit::pos(0), Lit::pos(1)]));

        let mut g = EGraph::new();
        assert_eq!(g.assert_terms(&v("a"), &v("b"), true, Lit::pos(0)).unwrap(), Ok(()));
        assert_eq!(g.assert_terms(&v("c"), &v("d"), true, Lit::pos(1)).unwrap(), Ok(()));
    }

    #[test]
    fn deduce_examples() {
        let mut g = EGraph::new();
        let (x, y, z) = (g.add_term(&v("x")).unwrap(), g.add_term(&v("y")).unwrap(), g.add_term(&v("z")).unwrap());
        let reg = [(x, z, Lit::pos(9))];
        assert!(g.check_and_deduce(&reg).is_empty());
        g.assert_eq(x, y, Lit::pos(0)).unwrap();
        g.assert_eq(y, z, Lit::pos(1)).unwrap();
        assert_eq!(g.check_and_deduce(&reg), vec![(Lit::pos(9), vec![Lit::pos(0), Lit::pos(1)])]);

        let mut g = EGraph::new();
        let fx = g.add_term(&Term::app("f", vec![v("x")])).unwrap();
        let fy = g.add_term(&Term::app("f", vec![v("y")])).unwrap();
        let (a, b) = (g.add_term(&v("a")).unwrap(), g.add_term(&v("b")).unwrap());
        g.assert_eq(fx, a, Lit::pos(0)).unwrap();
        g.assert_eq(fy, b, Lit::pos(1)).unwrap();
        g.assert_diseq(a, b, Lit::pos(2)).unwrap();
        let (x, y) = (g.node_of(&v("x")).unwrap(), g.node_of(&v("y")).unwrap());
        assert!(g.check_and_deduce(&[(x, y, Lit::pos(9))]).is_empty());
    }

    #[test]
    fn backtrack_restores_classes() {
        let mut g = EGraph::new();
        let fa = g.add_term(&Term::app("f", vec![v("a")])).unwrap();
        let fb = g.add_term(&Term::app("f", vec![v("b")])).unwrap();
        let (a, b) = (g.node_of(&v("a")).unwrap(), g.node_of(&v("b")).unwrap());
        let before = g.representatives();
        let m = g.mark();
        g.assert_eq(a, b, Lit::pos(0)).unwrap();
        assert_eq!(g.find(fa), g.find(fb));
        g.backtrack_to(m).unwrap();
        assert_eq!(g.representatives(), before);
        assert_eq!(g.backtrack_to(m), Err(EufError::StaleMark));
    }
}
