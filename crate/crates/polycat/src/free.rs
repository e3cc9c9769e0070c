//! Free polycategories on a poly-signature.
//!
//! A polymap of the free polycategory on a signature is a planar tree:
//! nodes are operation instances, edges are typed wires, and the unused
//! wire ends form the boundary.  Composition grafts one tree's output wire
//! onto another tree's input wire (subject to the same planarity condition
//! as every polycategorical composition), and equality of polymaps is
//! equality of trees — which different grafting orders of the same diagram
//! must not distinguish.  [`canonical_encoding`] therefore serializes a
//! tree from a canonically chosen root so that equal diagrams get equal
//! strings, and everything downstream (enumeration, germ tables, tests of
//! the five laws on trees) compares encodings.
//!
//! When every operation has total boundary size at least 3, a tree with n
//! nodes has boundary size n + 2, so there are finitely many trees within
//! any arity bound and [`free_germ`] can tabulate the whole bounded
//! fragment as a [`TablePolycategory`].

use crate::core::{
    plan_composition, Boundary, Composite, ComposeError, ObjectId, PolyMap, TableError,
    TablePolycategory,
};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// An operation of a poly-signature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Operation {
    pub name: String,
    pub boundary: Boundary,
}

/// A poly-signature: named objects and named typed operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySignature {
    objects: Vec<ObjectId>,
    operations: Vec<Operation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("object {0} appears twice")]
    DuplicateObject(ObjectId),
    #[error("operation {0} appears twice")]
    DuplicateOperation(String),
    #[error("operation {0} mentions unknown object {1}")]
    UnknownObject(String, ObjectId),
}

impl PolySignature {
    pub fn new(
        objects: Vec<ObjectId>,
        operations: Vec<Operation>,
    ) -> Result<Self, SignatureError> {
        let mut seen = BTreeSet::new();
        for o in &objects {
            if !seen.insert(o.clone()) {
                return Err(SignatureError::DuplicateObject(o.clone()));
            }
        }
        let mut names = BTreeSet::new();
        for op in &operations {
            if !names.insert(op.name.clone()) {
                return Err(SignatureError::DuplicateOperation(op.name.clone()));
            }
            for o in op.boundary.domain.iter().chain(&op.boundary.codomain) {
                if !seen.contains(o) {
                    return Err(SignatureError::UnknownObject(op.name.clone(), o.clone()));
                }
            }
        }
        Ok(PolySignature {
            objects,
            operations,
        })
    }

    pub fn objects(&self) -> &[ObjectId] {
        &self.objects
    }

    pub fn operations(&self) -> &[Operation] {
        &self.operations
    }

    pub fn operation(&self, name: &str) -> Option<&Operation> {
        self.operations.iter().find(|op| op.name == name)
    }
}

/// One end of a wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Port {
    /// Boundary input position (wire enters the tree here).
    Dom(usize),
    /// Boundary output position (wire leaves the tree here).
    Cod(usize),
    /// Output slot of a node (wire starts here).
    NodeOut { node: usize, slot: usize },
    /// Input slot of a node (wire ends here).
    NodeIn { node: usize, slot: usize },
}

/// A typed wire; `from` is a `Dom` or `NodeOut` port, `to` a `Cod` or
/// `NodeIn` port.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEdge {
    pub ty: ObjectId,
    pub from: Port,
    pub to: Port,
}

/// An operation instance; `inputs`/`outputs` list edge indices slot by
/// slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub op: String,
    pub op_boundary: Boundary,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

/// A polymap of a free polycategory, as a planar typed tree.
///
/// Values are produced by [`identity_tree`], [`generator_tree`] and
/// [`graft`] (and by [`enumerate`], which only grafts); grafting preserves
/// planarity, so every reachable value is a genuine planar tree.
/// [`validate`] re-checks the structural invariants of a value from
/// scratch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePolymap {
    pub boundary: Boundary,
    pub nodes: Vec<TreeNode>,
    pub edges: Vec<TreeEdge>,
    pub dom_edges: Vec<usize>,
    pub cod_edges: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("malformed tree: {0}")]
    Malformed(String),
}

/// The identity polymap on `ty`: a single wire, no nodes.
pub fn identity_tree(ty: &ObjectId) -> TreePolymap {
    TreePolymap {
        boundary: Boundary::new(vec![ty.clone()], vec![ty.clone()]),
        nodes: Vec::new(),
        edges: vec![TreeEdge {
            ty: ty.clone(),
            from: Port::Dom(0),
            to: Port::Cod(0),
        }],
        dom_edges: vec![0],
        cod_edges: vec![0],
    }
}

/// The one-node tree of a single operation, all wires on the boundary.
pub fn generator_tree(op: &Operation) -> TreePolymap {
    let m = op.boundary.domain.len();
    let n = op.boundary.codomain.len();
    let mut edges = Vec::with_capacity(m + n);
    for (k, ty) in op.boundary.domain.iter().enumerate() {
        edges.push(TreeEdge {
            ty: ty.clone(),
            from: Port::Dom(k),
            to: Port::NodeIn { node: 0, slot: k },
        });
    }
    for (l, ty) in op.boundary.codomain.iter().enumerate() {
        edges.push(TreeEdge {
            ty: ty.clone(),
            from: Port::NodeOut { node: 0, slot: l },
            to: Port::Cod(l),
        });
    }
    TreePolymap {
        boundary: op.boundary.clone(),
        nodes: vec![TreeNode {
            op: op.name.clone(),
            op_boundary: op.boundary.clone(),
            inputs: (0..m).collect(),
            outputs: (m..m + n).collect(),
        }],
        edges,
        dom_edges: (0..m).collect(),
        cod_edges: (m..m + n).collect(),
    }
}

fn is_identity(t: &TreePolymap) -> bool {
    t.nodes.is_empty()
}

/// Graft output `i` of `t1` onto input `j` of `t2` (the planar composite
/// `t2 ∘ t1`).  Fails exactly when the boundary-level composition does.
pub fn graft(
    t1: &TreePolymap,
    i: usize,
    t2: &TreePolymap,
    j: usize,
) -> Result<TreePolymap, ComposeError> {
    let boundary = plan_composition(&t1.boundary, i, &t2.boundary, j)?;
    if is_identity(t1) {
        return Ok(t2.clone());
    }
    if is_identity(t2) {
        return Ok(t1.clone());
    }

    let n1 = t1.nodes.len();
    let d1 = t1.boundary.domain.len();
    let c2 = t2.boundary.codomain.len();
    let cut1 = t1.cod_edges[i]; // survives, fused
    let cut2 = t2.dom_edges[j]; // disappears into cut1

    // Edge index translation: t1 edges keep their index; t2 edges shift by
    // t1's count, except the cut edge which fuses into cut1.
    let e1 = t1.edges.len();
    let map2 = |e: usize| if e == cut2 { cut1 } else if e > cut2 { e1 + e - 1 } else { e1 + e };

    let port1 = |p: &Port| match *p {
        Port::Dom(k) => Port::Dom(j + k),
        Port::Cod(k) => {
            if k < i {
                Port::Cod(k)
            } else {
                // k == i never survives remapping; the fused edge's `to`
                // comes from t2.
                Port::Cod(k - 1 + c2)
            }
        }
        other => other,
    };
    let port2 = |p: &Port| match *p {
        Port::Dom(k) => {
            if k < j {
                Port::Dom(k)
            } else {
                Port::Dom(k - 1 + d1)
            }
        }
        Port::Cod(k) => Port::Cod(i + k),
        Port::NodeIn { node, slot } => Port::NodeIn {
            node: node + n1,
            slot,
        },
        Port::NodeOut { node, slot } => Port::NodeOut {
            node: node + n1,
            slot,
        },
    };

    let mut edges = Vec::with_capacity(e1 + t2.edges.len() - 1);
    for (k, e) in t1.edges.iter().enumerate() {
        if k == cut1 {
            edges.push(TreeEdge {
                ty: e.ty.clone(),
                from: port1(&e.from),
                to: port2(&t2.edges[cut2].to),
            });
        } else {
            edges.push(TreeEdge {
                ty: e.ty.clone(),
                from: port1(&e.from),
                to: port1(&e.to),
            });
        }
    }
    for (k, e) in t2.edges.iter().enumerate() {
        if k == cut2 {
            continue;
        }
        edges.push(TreeEdge {
            ty: e.ty.clone(),
            from: port2(&e.from),
            to: port2(&e.to),
        });
    }

    let mut nodes = Vec::with_capacity(n1 + t2.nodes.len());
    for node in &t1.nodes {
        nodes.push(node.clone());
    }
    for node in &t2.nodes {
        nodes.push(TreeNode {
            op: node.op.clone(),
            op_boundary: node.op_boundary.clone(),
            inputs: node.inputs.iter().map(|&e| map2(e)).collect(),
            outputs: node.outputs.iter().map(|&e| map2(e)).collect(),
        });
    }

    // Boundary edge lists, re-derived from the final ports.
    let mut dom_edges = vec![usize::MAX; boundary.domain.len()];
    let mut cod_edges = vec![usize::MAX; boundary.codomain.len()];
    for (k, e) in edges.iter().enumerate() {
        if let Port::Dom(p) = e.from {
            dom_edges[p] = k;
        }
        if let Port::Cod(p) = e.to {
            cod_edges[p] = k;
        }
    }
    debug_assert!(dom_edges.iter().chain(&cod_edges).all(|&e| e != usize::MAX));

    Ok(TreePolymap {
        boundary,
        nodes,
        edges,
        dom_edges,
        cod_edges,
    })
}

/// Re-check every structural invariant of a tree from scratch: port
/// consistency, typing, saturation, and that the nodes form one connected
/// acyclic component.
pub fn validate(t: &TreePolymap) -> Result<(), TreeError> {
    let fail = |msg: String| Err(TreeError::Malformed(msg));
    if t.dom_edges.len() != t.boundary.domain.len()
        || t.cod_edges.len() != t.boundary.codomain.len()
    {
        return fail("boundary edge lists do not match the boundary".into());
    }
    if t.nodes.is_empty() {
        if t.edges.len() != 1 || t.boundary.domain.len() != 1 || t.boundary.codomain.len() != 1 {
            return fail("a tree without nodes must be a single identity wire".into());
        }
    }
    for (k, e) in t.edges.iter().enumerate() {
        match e.from {
            Port::Dom(p) => {
                if t.dom_edges.get(p) != Some(&k) {
                    return fail(format!("edge {k}: dangling Dom({p}) start"));
                }
                if t.boundary.domain[p] != e.ty {
                    return fail(format!("edge {k}: type mismatch at Dom({p})"));
                }
            }
            Port::NodeOut { node, slot } => {
                let n = t
                    .nodes
                    .get(node)
                    .ok_or_else(|| TreeError::Malformed(format!("edge {k}: bad node {node}")))?;
                if n.outputs.get(slot) != Some(&k) {
                    return fail(format!("edge {k}: node {node} output {slot} disagrees"));
                }
                if n.op_boundary.codomain[slot] != e.ty {
                    return fail(format!("edge {k}: type mismatch at node {node} output"));
                }
            }
            _ => return fail(format!("edge {k}: starts at an end port")),
        }
        match e.to {
            Port::Cod(p) => {
                if t.cod_edges.get(p) != Some(&k) {
                    return fail(format!("edge {k}: dangling Cod({p}) end"));
                }
                if t.boundary.codomain[p] != e.ty {
                    return fail(format!("edge {k}: type mismatch at Cod({p})"));
                }
            }
            Port::NodeIn { node, slot } => {
                let n = t
                    .nodes
                    .get(node)
                    .ok_or_else(|| TreeError::Malformed(format!("edge {k}: bad node {node}")))?;
                if n.inputs.get(slot) != Some(&k) {
                    return fail(format!("edge {k}: node {node} input {slot} disagrees"));
                }
                if n.op_boundary.domain[slot] != e.ty {
                    return fail(format!("edge {k}: type mismatch at node {node} input"));
                }
            }
            _ => return fail(format!("edge {k}: ends at a start port")),
        }
    }
    for (v, node) in t.nodes.iter().enumerate() {
        if node.inputs.len() != node.op_boundary.domain.len()
            || node.outputs.len() != node.op_boundary.codomain.len()
        {
            return fail(format!("node {v}: arity disagrees with its operation"));
        }
        for (s, &e) in node.inputs.iter().enumerate() {
            let edge = t
                .edges
                .get(e)
                .ok_or_else(|| TreeError::Malformed(format!("node {v}: bad edge {e}")))?;
            if edge.to != (Port::NodeIn { node: v, slot: s }) {
                return fail(format!("node {v} input {s}: edge does not point back"));
            }
        }
        for (s, &e) in node.outputs.iter().enumerate() {
            let edge = t
                .edges
                .get(e)
                .ok_or_else(|| TreeError::Malformed(format!("node {v}: bad edge {e}")))?;
            if edge.from != (Port::NodeOut { node: v, slot: s }) {
                return fail(format!("node {v} output {s}: edge does not start here"));
            }
        }
    }
    // Acyclicity and connectivity of the node graph via internal edges.
    if !t.nodes.is_empty() {
        let mut parent: Vec<usize> = (0..t.nodes.len()).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        let mut internal = 0usize;
        for e in &t.edges {
            if let (Port::NodeOut { node: a, .. }, Port::NodeIn { node: b, .. }) = (&e.from, &e.to)
            {
                internal += 1;
                let (ra, rb) = (find(&mut parent, *a), find(&mut parent, *b));
                if ra == rb {
                    return fail("node graph has a cycle".into());
                }
                parent[ra] = rb;
            } else if matches!((&e.from, &e.to), (Port::Dom(_), Port::Cod(_))) {
                return fail("through-wire in a tree with nodes".into());
            }
        }
        if internal + 1 != t.nodes.len() {
            return fail("node graph is not connected".into());
        }
    }
    Ok(())
}

/// Serialize a tree to its canonical encoding.
///
/// The encoding walks the node tree from a canonical root (the node on the
/// first boundary wire; for boundary-free trees, the root minimizing the
/// result) and at each node lists, slot by slot (inputs first), what the
/// slot's wire connects to: `^` for the wire we arrived on, `d<k>`/`c<k>`
/// for boundary positions, or the recursive encoding of the child node.
/// Equal diagrams — however they were grafted together — get equal
/// encodings, and distinct diagrams distinct ones.
pub fn canonical_encoding(t: &TreePolymap) -> String {
    if t.nodes.is_empty() {
        return format!("id[{}]", t.boundary.domain[0]);
    }
    let root_from_edge = |e: usize| -> Option<usize> {
        match (t.edges[e].from, t.edges[e].to) {
            (_, Port::NodeIn { node, .. }) => Some(node),
            (Port::NodeOut { node, .. }, _) => Some(node),
            _ => None,
        }
    };
    let anchor = t.dom_edges.first().or(t.cod_edges.first()).copied();
    match anchor {
        Some(e) => {
            let root = root_from_edge(e).expect("boundary wire of a node tree ends at a node");
            serialize(t, root, Some(e))
        }
        None => (0..t.nodes.len())
            .map(|root| serialize(t, root, None))
            .min()
            .expect("at least one node"),
    }
}

fn serialize(t: &TreePolymap, node: usize, entry: Option<usize>) -> String {
    let n = &t.nodes[node];
    let mut parts = vec![n.op.clone()];
    for (&e, incoming) in n
        .inputs
        .iter()
        .zip(std::iter::repeat(true))
        .chain(n.outputs.iter().zip(std::iter::repeat(false)))
    {
        if Some(e) == entry {
            parts.push("^".into());
            continue;
        }
        let edge = &t.edges[e];
        let token = if incoming {
            match edge.from {
                Port::Dom(k) => format!("d{k}"),
                Port::NodeOut { node: child, .. } => serialize(t, child, Some(e)),
                _ => unreachable!("input wires start at Dom or NodeOut"),
            }
        } else {
            match edge.to {
                Port::Cod(k) => format!("c{k}"),
                Port::NodeIn { node: child, .. } => serialize(t, child, Some(e)),
                _ => unreachable!("output wires end at Cod or NodeIn"),
            }
        };
        parts.push(token);
    }
    format!("({})", parts.join(" "))
}

/// All trees over `sig` with the given boundary and at most `max_nodes`
/// nodes, sorted by canonical encoding.
///
/// Generation is closure under grafting a single generator onto an already
/// generated tree (every tree with n ≥ 2 nodes splits off a leaf node by
/// cutting its one internal wire, and that cut is always planar, so this
/// reaches everything).  Intermediate trees may need boundaries larger
/// than the target when the signature has operations of total boundary
/// size below 2; the slack accounts for that.
pub fn enumerate(sig: &PolySignature, boundary: &Boundary, max_nodes: usize) -> Vec<TreePolymap> {
    let min_t = sig
        .operations
        .iter()
        .map(|op| op.boundary.domain.len() + op.boundary.codomain.len())
        .min()
        .unwrap_or(2);
    let slack = max_nodes.saturating_sub(1) * 2usize.saturating_sub(min_t);
    let cap = boundary.domain.len() + boundary.codomain.len() + slack;
    let keep = |t: &TreePolymap| {
        t.nodes.len() <= max_nodes
            && t.boundary.domain.len() + t.boundary.codomain.len() <= cap.max(2)
    };
    let all = closure(sig, keep);
    let mut out: Vec<TreePolymap> = all
        .into_values()
        .filter(|t| t.boundary == *boundary)
        .collect();
    out.sort_by_key(canonical_encoding);
    out
}

/// Closure of identities and generators under grafting one generator at a
/// time, keyed by canonical encoding, restricted by `keep`.
fn closure(
    sig: &PolySignature,
    keep: impl Fn(&TreePolymap) -> bool,
) -> BTreeMap<String, TreePolymap> {
    let mut seeds: Vec<TreePolymap> = sig.objects.iter().map(identity_tree).collect();
    seeds.extend(sig.operations.iter().map(generator_tree));
    let mut found: BTreeMap<String, TreePolymap> = BTreeMap::new();
    let mut work: Vec<TreePolymap> = Vec::new();
    for s in seeds {
        if keep(&s) {
            let enc = canonical_encoding(&s);
            if found.insert(enc, s.clone()).is_none() {
                work.push(s);
            }
        }
    }
    let gens: Vec<TreePolymap> = sig.operations.iter().map(generator_tree).collect();
    while let Some(t) = work.pop() {
        let mut candidates = Vec::new();
        for g in &gens {
            for i in 0..g.boundary.codomain.len() {
                for j in 0..t.boundary.domain.len() {
                    if let Ok(c) = graft(g, i, &t, j) {
                        candidates.push(c);
                    }
                }
            }
            for i in 0..t.boundary.codomain.len() {
                for j in 0..g.boundary.domain.len() {
                    if let Ok(c) = graft(&t, i, g, j) {
                        candidates.push(c);
                    }
                }
            }
        }
        for c in candidates {
            if keep(&c) {
                let enc = canonical_encoding(&c);
                if !found.contains_key(&enc) {
                    found.insert(enc, c.clone());
                    work.push(c);
                }
            }
        }
    }
    found
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeError {
    #[error(
        "the bounded fragment is infinite: operation {0} has total boundary \
         size {1} < 3, so trees of one shape can grow without bound"
    )]
    InfiniteGerm(String, usize),
    #[error("germ table construction failed: {0}")]
    Table(#[from] TableError),
}

/// The bounded fragment of a free polycategory, tabulated.
#[derive(Debug, Clone)]
pub struct FreeGerm {
    pub polycat: TablePolycategory,
    /// Canonical encoding → tree, for every polymap of the table.
    pub trees: BTreeMap<String, TreePolymap>,
}

/// Tabulate every tree over `sig` whose boundary sides are within `bound`,
/// with the full grafting table.  Polymap identifiers are the canonical
/// encodings.
pub fn free_germ(sig: &PolySignature, bound: usize) -> Result<FreeGerm, FreeError> {
    for op in sig.operations() {
        let total = op.boundary.domain.len() + op.boundary.codomain.len();
        if total < 3 {
            return Err(FreeError::InfiniteGerm(op.name.clone(), total));
        }
    }
    // Every operation has total boundary ≥ 3, so an n-node tree has total
    // boundary ≥ n + 2 and subtrees have strictly smaller totals: closure
    // capped at total 2*bound reaches every tree with sides ≤ bound.
    let max_nodes = (2 * bound).saturating_sub(2);
    let keep = |t: &TreePolymap| {
        t.nodes.len() <= max_nodes
            && t.boundary.domain.len() + t.boundary.codomain.len() <= 2 * bound
    };
    let all = closure(sig, keep);
    let trees: BTreeMap<String, TreePolymap> = all
        .into_iter()
        .filter(|(_, t)| t.boundary.width() <= bound)
        .collect();

    let as_map = |enc: &str, t: &TreePolymap| PolyMap::new(enc.to_string(), t.boundary.clone());
    let polymaps: Vec<PolyMap> = trees.iter().map(|(e, t)| as_map(e, t)).collect();
    let identities: Vec<(ObjectId, PolyMap)> = sig
        .objects
        .iter()
        .map(|o| {
            let t = identity_tree(o);
            let enc = canonical_encoding(&t);
            (o.clone(), as_map(&enc, &t))
        })
        .collect();
    let mut composites = Vec::new();
    for (e1, t1) in &trees {
        for i in 0..t1.boundary.codomain.len() {
            for (e2, t2) in &trees {
                for j in 0..t2.boundary.domain.len() {
                    let planned = match plan_composition(&t1.boundary, i, &t2.boundary, j) {
                        Ok(b) => b,
                        Err(_) => continue,
                    };
                    if planned.width() > bound {
                        continue;
                    }
                    let c = graft(t1, i, t2, j).expect("planned graft");
                    let enc = canonical_encoding(&c);
                    let result = trees
                        .get(&enc)
                        .map(|t| as_map(&enc, t))
                        .expect("closure contains every in-bound graft");
                    composites.push(Composite {
                        f: as_map(e1, t1),
                        i,
                        g: as_map(e2, t2),
                        j,
                        result,
                    });
                }
            }
        }
    }
    let polycat = TablePolycategory::new(
        sig.objects.clone(),
        bound,
        polymaps,
        identities,
        composites,
    )?;
    Ok(FreeGerm { polycat, trees })
}

/// Render a tree as a DOT digraph (wires left-to-right, boundary ports as
/// plain labels).
pub fn to_dot(t: &TreePolymap) -> String {
    let mut lines = vec![
        "digraph tree {".to_string(),
        "  rankdir=LR;".to_string(),
        "  node [shape=box];".to_string(),
    ];
    for (k, ty) in t.boundary.domain.iter().enumerate() {
        lines.push(format!(
            "  dom{k} [shape=plaintext, label=\"{ty}\"];"
        ));
    }
    for (k, ty) in t.boundary.codomain.iter().enumerate() {
        lines.push(format!(
            "  cod{k} [shape=plaintext, label=\"{ty}\"];"
        ));
    }
    for (v, node) in t.nodes.iter().enumerate() {
        lines.push(format!("  n{v} [label=\"{}\"];", node.op));
    }
    let name = |p: &Port| match *p {
        Port::Dom(k) => format!("dom{k}"),
        Port::Cod(k) => format!("cod{k}"),
        Port::NodeIn { node, .. } | Port::NodeOut { node, .. } => format!("n{node}"),
    };
    let mut edge_lines: Vec<String> = t
        .edges
        .iter()
        .map(|e| format!("  {} -> {} [label=\"{}\"];", name(&e.from), name(&e.to), e.ty))
        .collect();
    edge_lines.sort();
    lines.extend(edge_lines);
    lines.push("}".to_string());
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{check_axioms, FinPolycategory};

    fn obj(s: &str) -> ObjectId {
        ObjectId::new(s)
    }

    fn bd(dom: &[&str], cod: &[&str]) -> Boundary {
        Boundary::new(
            dom.iter().map(|s| obj(s)).collect(),
            cod.iter().map(|s| obj(s)).collect(),
        )
    }

    /// f : A,B -> B and g : B -> A,A.
    fn two_op_signature() -> PolySignature {
        PolySignature::new(
            vec![obj("A"), obj("B")],
            vec![
                Operation {
                    name: "f".into(),
                    boundary: bd(&["A", "B"], &["B"]),
                },
                Operation {
                    name: "g".into(),
                    boundary: bd(&["B"], &["A", "A"]),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn generator_and_identity_validate() {
        let sig = two_op_signature();
        for op in sig.operations() {
            validate(&generator_tree(op)).unwrap();
        }
        validate(&identity_tree(&obj("A"))).unwrap();
        assert_eq!(canonical_encoding(&identity_tree(&obj("A"))), "id[A]");
    }

    #[test]
    fn identity_laws_on_trees() {
        let sig = two_op_signature();
        let f = generator_tree(sig.operation("f").unwrap());
        // f ; id = f and id ; f = f.
        let right = graft(&f, 0, &identity_tree(&obj("B")), 0).unwrap();
        assert_eq!(canonical_encoding(&right), canonical_encoding(&f));
        let left = graft(&identity_tree(&obj("A")), 0, &f, 0).unwrap();
        assert_eq!(canonical_encoding(&left), canonical_encoding(&f));
    }

    #[test]
    fn graft_boundary_and_validity() {
        let sig = two_op_signature();
        let f = generator_tree(sig.operation("f").unwrap());
        let g = generator_tree(sig.operation("g").unwrap());
        // g ∘ f : plug f's output B into g's only input.
        let gf = graft(&f, 0, &g, 0).unwrap();
        validate(&gf).unwrap();
        assert_eq!(gf.boundary, bd(&["A", "B"], &["A", "A"]));
        assert_eq!(gf.nodes.len(), 2);
        // Non-planar graft rejected: g's first output into f's first input
        // leaves residue on both right sides.
        assert!(matches!(
            graft(&g, 0, &f, 0),
            Err(ComposeError::NotPlanar { .. })
        ));
        // The planar alternative works and has the other boundary.
        let fg = graft(&g, 1, &f, 0).unwrap();
        validate(&fg).unwrap();
        assert_eq!(fg.boundary, bd(&["B", "B"], &["A", "B"]));
    }

    #[test]
    fn association_orders_agree() {
        // The three-node composite f ∘ (g ∘ f) built in both association
        // orders is the same tree.
        let sig = two_op_signature();
        let f = generator_tree(sig.operation("f").unwrap());
        let g = generator_tree(sig.operation("g").unwrap());
        // Inner first: m = g ∘ f, then f consumes m's output 1 (an A).
        let m = graft(&f, 0, &g, 0).unwrap();
        let lhs = graft(&m, 1, &f, 0).unwrap();
        // Outer first: k = f ∘ g (g's output 1 into f's input 0), then f
        // feeds k's input 0 (its only B comes at position 0 of k's domain).
        let k = graft(&g, 1, &f, 0).unwrap();
        let rhs = graft(&f, 0, &k, 0).unwrap();
        validate(&lhs).unwrap();
        assert_eq!(lhs.boundary, bd(&["A", "B", "B"], &["A", "B"]));
        assert_eq!(canonical_encoding(&lhs), canonical_encoding(&rhs));
    }

    #[test]
    fn enumerate_small_counts() {
        let sig = two_op_signature();
        // Exactly the generator at one node.
        let only_f = enumerate(&sig, &bd(&["A", "B"], &["B"]), 1);
        assert_eq!(only_f.len(), 1);
        assert_eq!(only_f[0].nodes.len(), 1);
        // The unique two-node tree with boundary A,B -> A,A is g ∘ f.
        let gf = enumerate(&sig, &bd(&["A", "B"], &["A", "A"]), 2);
        assert_eq!(gf.len(), 1);
        assert_eq!(gf[0].nodes.len(), 2);
        // No identity tree sneaks into a mismatched boundary.
        assert!(enumerate(&sig, &bd(&["A"], &["B"]), 3).is_empty());
    }

    #[test]
    fn germ_is_a_polycategory() {
        let sig = two_op_signature();
        let germ = free_germ(&sig, 3).unwrap();
        let p = FinPolycategory::Table(germ.polycat.clone());
        let report = check_axioms(&p);
        assert!(report.passed(), "{report}");
        assert!(report.checked.iter().all(|&c| c > 0));
    }

    #[test]
    fn infinite_germ_detected() {
        let sig = PolySignature::new(
            vec![obj("A")],
            vec![Operation {
                name: "u".into(),
                boundary: bd(&["A"], &["A"]),
            }],
        )
        .unwrap();
        assert!(matches!(
            free_germ(&sig, 3),
            Err(FreeError::InfiniteGerm(op, 2)) if op == "u"
        ));
    }

    #[test]
    fn dot_output_is_stable() {
        let sig = two_op_signature();
        let f = generator_tree(sig.operation("f").unwrap());
        let g = generator_tree(sig.operation("g").unwrap());
        let gf = graft(&f, 0, &g, 0).unwrap();
        let dot = to_dot(&gf);
        assert!(dot.contains("rankdir=LR"));
        assert!(dot.contains("label=\"f\""));
        assert!(dot.contains("label=\"g\""));
        assert_eq!(dot, to_dot(&gf));
    }
}
