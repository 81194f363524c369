//! Handlebody extensions certified by singular forests in a ball.
//!
//! A pattern is a forest of singular edges in the 3-ball whose leaves sit on
//! the boundary sphere at the cone points. Internal vertices are trivalent
//! with spherical stabilizers. Each edge carries the image of its meridian,
//! read from tail to head. Conventions:
//!
//! * the boundary value at a leaf is the image if the leaf is the tail of its
//!   edge and the inverse if it is the head;
//! * at a vertex, the inward values (image if the edge ends there, inverse
//!   otherwise) multiply to 1 in rotation order;
//! * the boundary order of a tree is the walk that leaves each vertex by the
//!   edge following the arrival edge in the rotation and turns back at leaves.
//!
//! The pattern's components, concatenated in walk order, must reproduce the
//! boundary generating vector up to braid moves and simultaneous conjugation.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::{
    format_rational, parse_rational, GeneratingVector, Rational, Signature, ORBIT_CAP,
};
use crate::group::{atlas_build, Elem, FiniteGroup, SphericalType};

pub const DEFAULT_MAX_VERTICES: usize = 2;
pub const DEFAULT_MAX_EDGES: usize = 6;

/// Triangle-group actions never extend over a handlebody.
pub fn no_handlebody_rule(s: &Signature) -> Option<&'static str> {
    (s.genus == 0 && s.cones.len() == 3).then_some("triangle-rule")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum End {
    Vertex(usize),
    /// A leaf on the boundary sphere, numbered by its position in the
    /// concatenated component list.
    Boundary(usize),
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            End::Vertex(v) => write!(f, "v{v}"),
            End::Boundary(b) => write!(f, "b{b}"),
        }
    }
}

impl std::str::FromStr for End {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Certificate(format!("malformed edge end `{s}`"));
        let (tag, rest) = s.split_at_checked(1).ok_or_else(bad)?;
        let n: usize = rest.parse().map_err(|_| bad())?;
        match tag {
            "v" => Ok(End::Vertex(n)),
            "b" => Ok(End::Boundary(n)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternEdge {
    pub order: u32,
    pub tail: End,
    pub head: End,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternVertex {
    pub kind: SphericalType,
    /// Incident edges in cyclic order.
    pub rotation: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandlebodyPattern {
    pub vertices: Vec<PatternVertex>,
    pub edges: Vec<PatternEdge>,
    /// Boundary leaves of each tree in walk order; concatenated they are `0..r`.
    pub components: Vec<Vec<usize>>,
}

impl HandlebodyPattern {
    pub fn leaves(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }

    fn internal_ends(&self, e: &PatternEdge) -> i64 {
        [e.tail, e.head]
            .iter()
            .filter(|x| matches!(x, End::Vertex(_)))
            .count() as i64
    }

    fn leaf_edge(&self, slot: usize) -> Option<usize> {
        self.edges
            .iter()
            .position(|e| e.tail == End::Boundary(slot) || e.head == End::Boundary(slot))
    }

    fn other_end(&self, e: usize, from: End) -> End {
        let edge = &self.edges[e];
        if edge.tail == from {
            edge.head
        } else {
            edge.tail
        }
    }

    /// Boundary leaves met by the walk starting at leaf `start`.
    pub fn walk(&self, start: usize) -> Result<Vec<usize>, HandlebodyFailure> {
        let bad = |what: String| HandlebodyFailure::Pattern(what);
        let mut e = self
            .leaf_edge(start)
            .ok_or_else(|| bad(format!("leaf b{start} has no edge")))?;
        let mut at = self.other_end(e, End::Boundary(start));
        let mut seen = vec![start];
        for _ in 0..4 * self.edges.len() + 4 {
            match at {
                End::Boundary(b) if b == start => return Ok(seen),
                End::Boundary(b) => {
                    seen.push(b);
                    at = self.other_end(e, End::Boundary(b));
                }
                End::Vertex(v) => {
                    let rot = self
                        .vertices
                        .get(v)
                        .ok_or_else(|| bad(format!("unknown vertex v{v}")))?
                        .rotation;
                    let k = rot
                        .iter()
                        .position(|&x| x == e)
                        .ok_or_else(|| bad(format!("edge {e} missing from v{v}")))?;
                    e = rot[(k + 1) % 3];
                    at = self.other_end(e, End::Vertex(v));
                }
            }
        }
        Err(bad(format!("walk from b{start} does not close")))
    }
}

/// `1 - sum_v (1 - 1/|G_v|) - sum_e (1 - 1/n_e)(1 - internal endpoints of e)`.
pub fn pattern_euler(p: &HandlebodyPattern) -> Rational {
    let one = Rational::from_integer(1);
    let vertices: Rational = p
        .vertices
        .iter()
        .map(|v| one - Rational::new(1, v.kind.order() as i64))
        .sum();
    let edges: Rational = p
        .edges
        .iter()
        .map(|e| {
            (one - Rational::new(1, e.order as i64))
                * Rational::from_integer(1 - p.internal_ends(e))
        })
        .sum();
    one - vertices - edges
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HandlebodyFailure {
    TriangleRule,
    BoundaryVector(String),
    Pattern(String),
    EdgeOrder {
        edge: usize,
        expected: u32,
        found: u32,
    },
    VertexRelation {
        vertex: usize,
    },
    VertexGroup {
        vertex: usize,
        expected: usize,
        found: usize,
    },
    BlockProduct {
        component: usize,
    },
    BoundaryMismatch,
    Inconclusive {
        visited: usize,
    },
    NotSurjective {
        generated: usize,
        order: usize,
    },
    Euler {
        pattern: Rational,
        expected: Rational,
    },
}

impl fmt::Display for HandlebodyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HandlebodyFailure::TriangleRule => {
                write!(f, "triangle-group actions do not extend to a handlebody")
            }
            HandlebodyFailure::BoundaryVector(e) => write!(f, "boundary vector: {e}"),
            HandlebodyFailure::Pattern(e) => write!(f, "pattern: {e}"),
            HandlebodyFailure::EdgeOrder {
                edge,
                expected,
                found,
            } => {
                write!(
                    f,
                    "edge {edge} image has order {found}, expected {expected}"
                )
            }
            HandlebodyFailure::VertexRelation { vertex } => {
                write!(f, "vertex relation fails at v{vertex}")
            }
            HandlebodyFailure::VertexGroup {
                vertex,
                expected,
                found,
            } => {
                write!(
                    f,
                    "v{vertex} images generate order {found}, expected {expected}"
                )
            }
            HandlebodyFailure::BlockProduct { component } => {
                write!(f, "component {component} boundary product is not 1")
            }
            HandlebodyFailure::BoundaryMismatch => write!(
                f,
                "no braid move and conjugation matches the boundary values"
            ),
            HandlebodyFailure::Inconclusive { visited } => {
                write!(
                    f,
                    "braid orbit search stopped after {visited} states without a match"
                )
            }
            HandlebodyFailure::NotSurjective { generated, order } => {
                write!(f, "edge images generate order {generated} < {order}")
            }
            HandlebodyFailure::Euler { pattern, expected } => write!(
                f,
                "pattern Euler characteristic {} differs from {}",
                format_rational(*pattern),
                format_rational(*expected)
            ),
        }
    }
}

impl std::error::Error for HandlebodyFailure {}

#[derive(Clone, Debug, PartialEq)]
pub struct HandlebodyCert {
    pub boundary: GeneratingVector,
    pub pattern: HandlebodyPattern,
    /// Meridian image of each edge, tail to head.
    pub images: Vec<Elem>,
    pub euler: Rational,
}

fn check_shape(p: &HandlebodyPattern) -> Result<(), HandlebodyFailure> {
    let bad = |what: String| Err(HandlebodyFailure::Pattern(what));
    let r = p.leaves();
    let flat: Vec<usize> = p.components.iter().flatten().copied().collect();
    if flat != (0..r).collect::<Vec<_>>() {
        return bad("components must list the leaves 0..r in order".into());
    }
    let mut leaf_uses = vec![0usize; r];
    let mut degree = vec![0usize; p.vertices.len()];
    for (i, e) in p.edges.iter().enumerate() {
        if e.order < 2 {
            return bad(format!("edge {i} has order {}", e.order));
        }
        if e.tail == e.head {
            return bad(format!("edge {i} is a loop"));
        }
        for end in [e.tail, e.head] {
            match end {
                End::Boundary(b) if b < r => leaf_uses[b] += 1,
                End::Vertex(v) if v < p.vertices.len() => degree[v] += 1,
                other => return bad(format!("edge {i} has unknown end {other}")),
            }
        }
    }
    if leaf_uses.iter().any(|&u| u != 1) {
        return bad("every leaf must end exactly one edge".into());
    }
    for (v, vert) in p.vertices.iter().enumerate() {
        let rot = vert.rotation;
        let distinct = rot[0] != rot[1] && rot[1] != rot[2] && rot[0] != rot[2];
        let incident = rot.iter().all(|&e| {
            e < p.edges.len() && [p.edges[e].tail, p.edges[e].head].contains(&End::Vertex(v))
        });
        if degree[v] != 3 || !distinct || !incident {
            return bad(format!("v{v} is not trivalent with a valid rotation"));
        }
        let Some(mut expected) = vert.kind.edge_triple() else {
            return bad(format!("v{v} has non-vertex type {}", vert.kind));
        };
        let mut found = rot.map(|e| p.edges[e].order);
        expected.sort_unstable();
        found.sort_unstable();
        if expected != found {
            return bad(format!(
                "v{v} of type {} has edge orders {found:?}",
                vert.kind
            ));
        }
    }
    // forest: union-find over vertices and leaves
    let n = p.vertices.len() + r;
    let node = |end: End| match end {
        End::Vertex(v) => v,
        End::Boundary(b) => p.vertices.len() + b,
    };
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, e) in p.edges.iter().enumerate() {
        let (a, b) = (
            find(&mut parent, node(e.tail)),
            find(&mut parent, node(e.head)),
        );
        if a == b {
            return bad(format!("edge {i} closes a cycle"));
        }
        parent[a] = b;
    }
    for (c, comp) in p.components.iter().enumerate() {
        let first = *comp.first().ok_or(HandlebodyFailure::Pattern(format!(
            "component {c} is empty"
        )))?;
        if p.walk(first)? != *comp {
            return bad(format!("component {c} is not listed in walk order"));
        }
        let root = find(&mut parent, node(End::Boundary(first)));
        if comp
            .iter()
            .any(|&b| find(&mut parent, node(End::Boundary(b))) != root)
        {
            return bad(format!("component {c} is not connected"));
        }
    }
    // every tree has a leaf, so the listed components cover every vertex
    for v in 0..p.vertices.len() {
        let root = find(&mut parent, v);
        if !(0..r).any(|b| find(&mut parent, node(End::Boundary(b))) == root) {
            return bad(format!("v{v} lies in a tree without leaves"));
        }
    }
    Ok(())
}

/// Boundary value at each leaf, in leaf order.
fn boundary_values(p: &HandlebodyPattern, g: &FiniteGroup, images: &[Elem]) -> Vec<Elem> {
    (0..p.leaves())
        .map(|b| {
            let e = p.leaf_edge(b).expect("checked shape");
            if p.edges[e].tail == End::Boundary(b) {
                images[e]
            } else {
                g.inv(images[e])
            }
        })
        .collect()
}

/// Breadth-first search of the braid orbit of `start` for a tuple that is
/// simultaneously conjugate to `target`.
fn braid_orbit_match(
    g: &FiniteGroup,
    start: &[Elem],
    target: &[Elem],
    cap: usize,
) -> Result<(), HandlebodyFailure> {
    let conjugate_to = |s: &[Elem]| {
        g.elements()
            .any(|x| s.iter().zip(target).all(|(&a, &b)| g.conj(x, a) == b))
    };
    let mut seen: HashSet<Vec<Elem>> = HashSet::from([start.to_vec()]);
    let mut queue = VecDeque::from([start.to_vec()]);
    while let Some(s) = queue.pop_front() {
        if conjugate_to(&s) {
            return Ok(());
        }
        for i in 0..s.len().saturating_sub(1) {
            let (a, b) = (s[i], s[i + 1]);
            for (x, y) in [(g.conj(a, b), a), (b, g.conj(g.inv(b), a))] {
                let mut t = s.clone();
                t[i] = x;
                t[i + 1] = y;
                if seen.len() >= cap {
                    return Err(HandlebodyFailure::Inconclusive {
                        visited: seen.len(),
                    });
                }
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
    }
    Err(HandlebodyFailure::BoundaryMismatch)
}

/// Checks a pattern with edge images against a boundary vector.
pub fn verify_handlebody_cert(
    v: &GeneratingVector,
    p: &HandlebodyPattern,
    images: &[Elem],
) -> Result<HandlebodyCert, HandlebodyFailure> {
    verify_with_cap(v, p, images, ORBIT_CAP)
}

fn verify_with_cap(
    v: &GeneratingVector,
    p: &HandlebodyPattern,
    images: &[Elem],
    cap: usize,
) -> Result<HandlebodyCert, HandlebodyFailure> {
    if no_handlebody_rule(&v.signature).is_some() {
        return Err(HandlebodyFailure::TriangleRule);
    }
    if v.signature.genus != 0 {
        return Err(HandlebodyFailure::BoundaryVector(
            "only quotient genus 0 is supported".into(),
        ));
    }
    v.is_surface_kernel()
        .map_err(|e| HandlebodyFailure::BoundaryVector(e.to_string()))?;
    check_shape(p)?;
    if p.leaves() != v.cones.len() || images.len() != p.edges.len() {
        return Err(HandlebodyFailure::Pattern(
            "leaf or image count does not match".into(),
        ));
    }
    let g = v.group.as_ref();
    for (i, (e, &x)) in p.edges.iter().zip(images).enumerate() {
        let found = g.element_order(x);
        if found != e.order {
            return Err(HandlebodyFailure::EdgeOrder {
                edge: i,
                expected: e.order,
                found,
            });
        }
    }
    for (k, vert) in p.vertices.iter().enumerate() {
        let inward: Vec<Elem> = vert
            .rotation
            .iter()
            .map(|&e| {
                if p.edges[e].head == End::Vertex(k) {
                    images[e]
                } else {
                    g.inv(images[e])
                }
            })
            .collect();
        if g.product(inward.iter().copied()) != g.identity() {
            return Err(HandlebodyFailure::VertexRelation { vertex: k });
        }
        let found = g.subgroup_generated(&inward).len();
        if found != vert.kind.order() {
            return Err(HandlebodyFailure::VertexGroup {
                vertex: k,
                expected: vert.kind.order(),
                found,
            });
        }
    }
    let values = boundary_values(p, g, images);
    for (c, comp) in p.components.iter().enumerate() {
        if g.product(comp.iter().map(|&b| values[b])) != g.identity() {
            return Err(HandlebodyFailure::BlockProduct { component: c });
        }
    }
    braid_orbit_match(g, &v.cones, &values, cap)?;
    let generated = g.subgroup_generated(images).len();
    if generated != g.order() {
        return Err(HandlebodyFailure::NotSurjective {
            generated,
            order: g.order(),
        });
    }
    let euler = pattern_euler(p);
    let expected = v.signature.orb_euler() / Rational::from_integer(2);
    if euler != expected {
        return Err(HandlebodyFailure::Euler {
            pattern: euler,
            expected,
        });
    }
    Ok(HandlebodyCert {
        boundary: v.clone(),
        pattern: p.clone(),
        images: images.to_vec(),
        euler,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum HandlebodySearch {
    Found(Box<HandlebodyCert>),
    TriangleRule,
    NotFound,
    /// The braid orbit exceeded the cap before a pattern was found.
    Inconclusive {
        visited: usize,
    },
}

/// Component shapes: an arc (2 leaves), a tripod (3), or two vertices joined
/// by an internal edge (4).
fn shape_cost(size: usize) -> (usize, usize) {
    match size {
        2 => (0, 1),
        3 => (1, 3),
        4 => (2, 5),
        _ => unreachable!("component sizes are 2, 3 or 4"),
    }
}

fn compositions(r: usize, max_vertices: usize, max_edges: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, vs: usize, es: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for size in 2..=4.min(left) {
            let (dv, de) = shape_cost(size);
            if dv <= vs && de <= es {
                cur.push(size);
                rec(left - size, vs - dv, es - de, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(r, max_vertices, max_edges, &mut Vec::new(), &mut out);
    out
}

struct Builder<'a> {
    g: &'a FiniteGroup,
    pattern: HandlebodyPattern,
    images: Vec<Elem>,
}

impl Builder<'_> {
    fn edge(&mut self, order: u32, tail: End, head: End, image: Elem) -> usize {
        self.pattern.edges.push(PatternEdge { order, tail, head });
        self.images.push(image);
        self.pattern.edges.len() - 1
    }

    fn vertex(&mut self, orders: [u32; 3]) -> Option<usize> {
        let kind = SphericalType::from_triple(orders)?;
        self.pattern.vertices.push(PatternVertex {
            kind,
            rotation: [0; 3],
        });
        Some(self.pattern.vertices.len() - 1)
    }

    /// Leaves `a..a+xs.len()` carrying `xs` as one component.
    fn block(&mut self, a: usize, xs: &[Elem], split: usize) -> Option<()> {
        let g = self.g;
        let o = |x: Elem| g.element_order(x);
        self.pattern.components.push((a..a + xs.len()).collect());
        match xs.len() {
            2 => {
                if xs[1] != g.inv(xs[0]) {
                    return None;
                }
                self.edge(o(xs[0]), End::Boundary(a), End::Boundary(a + 1), xs[0]);
            }
            3 => {
                if g.product(xs.iter().copied()) != g.identity() {
                    return None;
                }
                let v = self.vertex([o(xs[0]), o(xs[1]), o(xs[2])])?;
                let e: Vec<usize> = (0..3)
                    .map(|k| self.edge(o(xs[k]), End::Boundary(a + k), End::Vertex(v), xs[k]))
                    .collect();
                self.pattern.vertices[v].rotation = [e[0], e[1], e[2]];
            }
            4 => {
                if g.product(xs.iter().copied()) != g.identity() {
                    return None;
                }
                // split 0: u holds leaves 0,1; split 1: u holds leaves 1,2
                let (p, q) = if split == 0 { (0, 1) } else { (1, 2) };
                let y = g.mul(xs[p], xs[q]);
                if y == g.identity() {
                    return None;
                }
                let rest = [(q + 1) % 4, (q + 2) % 4];
                let u = self.vertex([o(xs[p]), o(xs[q]), o(y)])?;
                let w = self.vertex([o(y), o(xs[rest[0]]), o(xs[rest[1]])])?;
                let leaf = |b: &mut Self, k: usize, at: usize| {
                    b.edge(o(xs[k]), End::Boundary(a + k), End::Vertex(at), xs[k])
                };
                let ep = leaf(self, p, u);
                let eq = leaf(self, q, u);
                let f = self.edge(o(y), End::Vertex(u), End::Vertex(w), y);
                let e1 = leaf(self, rest[0], w);
                let e2 = leaf(self, rest[1], w);
                self.pattern.vertices[u].rotation = [ep, eq, f];
                self.pattern.vertices[w].rotation = [f, e1, e2];
            }
            _ => return None,
        }
        Some(())
    }
}

/// Searches braid-equivalent forms of `v` (breadth first) for consecutive
/// blocks realised by arcs, tripods and two-vertex trees, and returns the
/// first verified certificate.
pub fn search_handlebody(
    v: &GeneratingVector,
    max_vertices: usize,
    max_edges: usize,
) -> HandlebodySearch {
    search_with_cap(v, max_vertices, max_edges, ORBIT_CAP)
}

pub fn search_with_cap(
    v: &GeneratingVector,
    max_vertices: usize,
    max_edges: usize,
    cap: usize,
) -> HandlebodySearch {
    if no_handlebody_rule(&v.signature).is_some() {
        return HandlebodySearch::TriangleRule;
    }
    if v.signature.genus != 0 || v.is_surface_kernel().is_err() {
        return HandlebodySearch::NotFound;
    }
    let g = v.group.as_ref();
    let shapes = compositions(v.cones.len(), max_vertices, max_edges);
    let target_euler = v.signature.orb_euler() / Rational::from_integer(2);
    let mut seen: HashSet<Vec<Elem>> = HashSet::from([v.cones.clone()]);
    let mut queue = VecDeque::from([v.cones.clone()]);
    let mut truncated = false;
    while let Some(s) = queue.pop_front() {
        for shape in &shapes {
            let fours = shape.iter().filter(|&&k| k == 4).count();
            for splits in 0u32..1 << fours {
                let mut b = Builder {
                    g,
                    pattern: HandlebodyPattern {
                        vertices: vec![],
                        edges: vec![],
                        components: vec![],
                    },
                    images: vec![],
                };
                let mut a = 0;
                let mut four = 0;
                let ok = shape.iter().all(|&size| {
                    let split = if size == 4 {
                        four += 1;
                        (splits >> (four - 1) & 1) as usize
                    } else {
                        0
                    };
                    let r = b.block(a, &s[a..a + size], split);
                    a += size;
                    r.is_some()
                });
                if !ok || pattern_euler(&b.pattern) != target_euler {
                    continue;
                }
                if let Ok(cert) = verify_with_cap(v, &b.pattern, &b.images, cap) {
                    return HandlebodySearch::Found(Box::new(cert));
                }
            }
        }
        for i in 0..s.len() - 1 {
            let (x, y) = (s[i], s[i + 1]);
            for (p, q) in [(g.conj(x, y), x), (y, g.conj(g.inv(y), x))] {
                let mut t = s.clone();
                t[i] = p;
                t[i + 1] = q;
                if seen.len() >= cap {
                    truncated = true;
                    continue;
                }
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
    }
    if truncated {
        HandlebodySearch::Inconclusive {
            visited: seen.len(),
        }
    } else {
        HandlebodySearch::NotFound
    }
}

impl HandlebodyCert {
    pub fn verify(&self) -> Result<(), HandlebodyFailure> {
        let again = verify_handlebody_cert(&self.boundary, &self.pattern, &self.images)?;
        if again.euler != self.euler {
            return Err(HandlebodyFailure::Euler {
                pattern: self.euler,
                expected: again.euler,
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> HandlebodyCertJson {
        let g = &self.boundary.group;
        HandlebodyCertJson {
            kind: "handlebody".into(),
            atlas: g.name().to_string(),
            signature: self.boundary.signature.clone(),
            boundary: self.boundary.cone_strings(),
            pattern: PatternJson {
                vertices: self
                    .pattern
                    .vertices
                    .iter()
                    .map(|v| VertexJson {
                        kind: v.kind,
                        rotation: v.rotation.to_vec(),
                    })
                    .collect(),
                edges: self
                    .pattern
                    .edges
                    .iter()
                    .map(|e| EdgeJson {
                        order: e.order,
                        tail: e.tail.to_string(),
                        head: e.head.to_string(),
                    })
                    .collect(),
                components: self.pattern.components.clone(),
            },
            assignments: self
                .images
                .iter()
                .enumerate()
                .map(|(i, &x)| (format!("e{i}"), g.format(x)))
                .collect(),
            convention: HandlebodyConventionJson {
                meridian: "edge image is the meridian read from tail to head".into(),
                vertex_relation: "inward values multiply to 1 in rotation order".into(),
                boundary_order: "walk leaving each vertex by the next edge in its rotation".into(),
                composition: "left-to-right".into(),
            },
            euler: format_rational(self.euler),
        }
    }

    pub fn from_json(j: &HandlebodyCertJson) -> Result<Self> {
        if j.kind != "handlebody" {
            return Err(Error::Certificate(format!(
                "expected kind `handlebody`, got `{}`",
                j.kind
            )));
        }
        let group: Arc<FiniteGroup> = atlas_build(&j.atlas)?;
        let cones: Vec<&str> = j.boundary.iter().map(String::as_str).collect();
        let boundary = GeneratingVector::parse_cones(&group, &cones)?;
        if boundary.signature != j.signature {
            return Err(Error::Certificate(format!(
                "boundary has signature {}, recorded {}",
                boundary.signature, j.signature
            )));
        }
        let vertices =
            j.pattern
                .vertices
                .iter()
                .map(|v| {
                    let rotation: [usize; 3] =
                        v.rotation.as_slice().try_into().map_err(|_| {
                            Error::Certificate("a rotation lists three edges".into())
                        })?;
                    Ok(PatternVertex {
                        kind: v.kind,
                        rotation,
                    })
                })
                .collect::<Result<_>>()?;
        let edges = j
            .pattern
            .edges
            .iter()
            .map(|e| {
                Ok(PatternEdge {
                    order: e.order,
                    tail: e.tail.parse()?,
                    head: e.head.parse()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut images = Vec::with_capacity(edges.len());
        for i in 0..edges.len() {
            let text = j
                .assignments
                .get(&format!("e{i}"))
                .ok_or_else(|| Error::Certificate(format!("no image for edge e{i}")))?;
            images.push(group.parse_element(text)?);
        }
        if j.assignments.len() != edges.len() {
            return Err(Error::Certificate("assignments name unknown edges".into()));
        }
        Ok(HandlebodyCert {
            boundary,
            pattern: HandlebodyPattern {
                vertices,
                edges,
                components: j.pattern.components.clone(),
            },
            images,
            euler: parse_rational(&j.euler)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HandlebodyCertJson {
    pub kind: String,
    pub atlas: String,
    pub signature: Signature,
    pub boundary: Vec<String>,
    pub pattern: PatternJson,
    pub assignments: BTreeMap<String, String>,
    pub convention: HandlebodyConventionJson,
    pub euler: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    pub components: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    #[serde(rename = "type")]
    pub kind: SphericalType,
    pub rotation: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub order: u32,
    pub tail: String,
    pub head: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HandlebodyConventionJson {
    pub meridian: String,
    pub vertex_relation: String,
    pub boundary_order: String,
    pub composition: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::search_vectors;

    fn arc(n: u32) -> HandlebodyPattern {
        HandlebodyPattern {
            vertices: vec![],
            edges: vec![PatternEdge {
                order: n,
                tail: End::Boundary(0),
                head: End::Boundary(1),
            }],
            components: vec![vec![0, 1]],
        }
    }

    #[test]
    fn euler_of_small_patterns() {
        assert_eq!(pattern_euler(&arc(5)), Rational::new(1, 5));
        let tripod = HandlebodyPattern {
            vertices: vec![PatternVertex {
                kind: SphericalType::Dihedral(3),
                rotation: [0, 1, 2],
            }],
            edges: [3, 2, 2]
                .iter()
                .enumerate()
                .map(|(k, &n)| PatternEdge {
                    order: n,
                    tail: End::Boundary(k),
                    head: End::Vertex(0),
                })
                .collect(),
            components: vec![vec![0, 1, 2]],
        };
        assert_eq!(pattern_euler(&tripod), Rational::new(1, 6));
        assert_eq!(tripod.walk(1).unwrap(), vec![1, 2, 0]);
    }

    #[test]
    fn triangle_rule() {
        assert!(no_handlebody_rule(&"0:2,4,6".parse().unwrap()).is_some());
        assert!(no_handlebody_rule(&"0:2,2,2,3".parse().unwrap()).is_none());
        assert!(no_handlebody_rule(&"1:2".parse().unwrap()).is_none());
    }

    #[test]
    fn finds_s4_certificate() {
        let g = atlas_build("s4").unwrap();
        let v = &search_vectors(&"0:2,2,2,3".parse().unwrap(), &g, 1)[0];
        let HandlebodySearch::Found(cert) =
            search_handlebody(v, DEFAULT_MAX_VERTICES, DEFAULT_MAX_EDGES)
        else {
            panic!("no certificate")
        };
        assert_eq!(cert.euler, Rational::new(-1, 12));
        assert!(cert.pattern.vertices.len() <= 2);
        cert.verify().unwrap();
    }

    #[test]
    fn cyclic_seven_has_none() {
        let z7 = atlas_build("z7").unwrap();
        let x = z7.generators()[0];
        let v = GeneratingVector::from_cones(z7.clone(), vec![x, z7.pow(x, 2), z7.pow(x, 4)]);
        assert_eq!(search_handlebody(&v, 2, 6), HandlebodySearch::TriangleRule);
    }

    #[test]
    fn pairs_of_arcs() {
        // (x, x^-1, y, y^-1) in Z4 x Z2 style: two arcs
        let g = atlas_build("z4").unwrap();
        let x = g.generators()[0];
        let v = GeneratingVector::from_cones(g.clone(), vec![x, g.inv(x), x, g.inv(x)]);
        let HandlebodySearch::Found(cert) = search_handlebody(&v, 0, 2) else {
            panic!()
        };
        assert_eq!(cert.pattern.edges.len(), 2);
        assert_eq!(cert.euler, Rational::new(-1, 2));
    }

    #[test]
    fn rejects_cycle_and_bad_orders() {
        let g = atlas_build("z4").unwrap();
        let x = g.generators()[0];
        let v = GeneratingVector::from_cones(g.clone(), vec![x, g.inv(x), x, g.inv(x)]);
        let mut p = arc(4);
        p.edges.push(PatternEdge {
            order: 4,
            tail: End::Boundary(2),
            head: End::Boundary(3),
        });
        p.components.push(vec![2, 3]);
        assert!(verify_handlebody_cert(&v, &p, &[x, x]).is_ok());
        assert!(matches!(
            verify_handlebody_cert(&v, &p, &[x, g.mul(x, x)]),
            Err(HandlebodyFailure::EdgeOrder { .. })
        ));
        p.components = vec![vec![0, 1, 2, 3]];
        assert!(matches!(
            verify_handlebody_cert(&v, &p, &[x, x]),
            Err(HandlebodyFailure::Pattern(_))
        ));
    }
}
