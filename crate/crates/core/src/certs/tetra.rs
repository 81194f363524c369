//! Geometric bounding through a truncated hyperbolic tetrahedron.
//!
//! Face `i` is opposite vertex `i`, and `r_i` is the reflection in it. The
//! rotation around edge `(a, b)` is `r_i r_j`, where `i < j` are the two
//! faces containing the edge (the faces opposite the other two vertices).
//! Writing `phi_ij` for its image, `phi_ij phi_jk = phi_ik` holds around every
//! vertex; at the truncated vertex with faces `i < j < k` the triple
//! `(phi_ij, phi_jk, phi_ki)` is the boundary generating vector.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::gram::{gram_check, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::fuchsian::{
    format_rational, parse_rational, GeneratingVector, KernelFailure, Signature,
};
use crate::group::{atlas_build, Elem, FiniteGroup, SphericalType};

/// Vertex pairs in the order used for per-edge arrays.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn edge_index(a: usize, b: usize) -> usize {
    let key = (a.min(b), a.max(b));
    EDGES
        .iter()
        .position(|&e| e == key)
        .expect("distinct vertices below 4")
}

fn edge_label((a, b): (usize, usize)) -> String {
    format!("{a}-{b}")
}

fn parse_edge(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Certificate(format!("malformed edge `{s}`"));
    let (a, b) = s.split_once('-').ok_or_else(bad)?;
    let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    if a >= 4 || b >= 4 || a == b {
        return Err(bad());
    }
    Ok((a.min(b), a.max(b)))
}

/// The face pair `(i, j)`, `i < j`, whose planes meet along edge `(a, b)`.
pub fn faces_of_edge(a: usize, b: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&k| k != a && k != b);
    (
        rest.next().expect("two faces"),
        rest.next().expect("two faces"),
    )
}

fn edge_of_faces(i: usize, j: usize) -> usize {
    let (a, b) = faces_of_edge(i, j);
    edge_index(a, b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedTetrahedron {
    pub truncated: usize,
    /// Edge orders, indexed like [`EDGES`].
    pub orders: [u32; 6],
}

impl TruncatedTetrahedron {
    pub fn new(truncated: usize, orders: [u32; 6]) -> Self {
        TruncatedTetrahedron { truncated, orders }
    }

    /// Truncated vertex 0 with edge orders given by vertex pairs.
    pub fn from_pairs(truncated: usize, pairs: &[((usize, usize), u32)]) -> Result<Self> {
        let mut orders = [0; 6];
        for &((a, b), n) in pairs {
            if a >= 4 || b >= 4 || a == b {
                return Err(Error::Tetrahedron(format!("bad edge ({a},{b})")));
            }
            orders[edge_index(a, b)] = n;
        }
        if orders.contains(&0) {
            return Err(Error::Tetrahedron("every edge needs an order".into()));
        }
        Ok(Self::new(truncated, orders))
    }

    pub fn order(&self, a: usize, b: usize) -> u32 {
        self.orders[edge_index(a, b)]
    }

    /// Orders of the three edges at `v`, by increasing other endpoint.
    pub fn vertex_triple(&self, v: usize) -> [u32; 3] {
        let mut others = (0..4).filter(|&w| w != v);
        std::array::from_fn(|_| self.order(v, others.next().expect("three neighbours")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexTriple {
    pub vertex: usize,
    pub triple: [u32; 3],
    /// `None` at the truncated vertex.
    pub kind: Option<SphericalType>,
}

fn reciprocal_sum(t: [u32; 3]) -> (u64, u64) {
    // compare 1/a + 1/b + 1/c with 1 as (ab + bc + ca) vs abc
    let [a, b, c] = t.map(u64::from);
    (a * b + b * c + c * a, a * b * c)
}

/// Edge-order triples at all four vertices; ordinary vertices must be
/// spherical and the truncated vertex hyperbolic.
pub fn tet_vertex_types(t: &TruncatedTetrahedron) -> Result<Vec<VertexTriple>> {
    if t.truncated >= 4 {
        return Err(Error::Tetrahedron(format!(
            "truncated vertex {} out of range",
            t.truncated
        )));
    }
    if let Some(&n) = t.orders.iter().find(|&&n| n < 2) {
        return Err(Error::Tetrahedron(format!("edge order {n} < 2")));
    }
    (0..4)
        .map(|v| {
            let triple = t.vertex_triple(v);
            let (num, den) = reciprocal_sum(triple);
            if v == t.truncated {
                if num >= den {
                    return Err(Error::Tetrahedron(format!(
                        "truncated vertex {v} has non-hyperbolic triple {triple:?}"
                    )));
                }
                Ok(VertexTriple {
                    vertex: v,
                    triple,
                    kind: None,
                })
            } else {
                let kind = SphericalType::from_triple(triple)
                    .filter(|_| num > den)
                    .ok_or_else(|| {
                        Error::Tetrahedron(format!(
                            "vertex {v} has non-spherical triple {triple:?}"
                        ))
                    })?;
                Ok(VertexTriple {
                    vertex: v,
                    triple,
                    kind: Some(kind),
                })
            }
        })
        .collect()
}

/// Why an edge assignment does not give a certificate. Variants are listed
/// in the order the checks run.
#[derive(Clone, Debug, PartialEq)]
pub enum TetFailure {
    Geometry(String),
    BoundaryVector(String),
    BadDatum(String),
    Underdetermined,
    Inconsistent {
        edge: (usize, usize),
    },
    EdgeOrder {
        edge: (usize, usize),
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
    BoundaryMismatch,
    NotSurjective {
        generated: usize,
        order: usize,
    },
}

impl TetFailure {
    fn stage(&self) -> u8 {
        match self {
            TetFailure::Geometry(_) => 0,
            TetFailure::BoundaryVector(_) => 1,
            TetFailure::BadDatum(_) => 2,
            TetFailure::Underdetermined => 2,
            TetFailure::Inconsistent { .. } => 3,
            TetFailure::EdgeOrder { .. } => 4,
            TetFailure::VertexRelation { .. } => 5,
            TetFailure::VertexGroup { .. } => 6,
            TetFailure::BoundaryMismatch => 7,
            TetFailure::NotSurjective { .. } => 8,
        }
    }
}

impl fmt::Display for TetFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TetFailure::Geometry(e) => write!(f, "tetrahedron: {e}"),
            TetFailure::BoundaryVector(e) => write!(f, "boundary vector: {e}"),
            TetFailure::BadDatum(e) => write!(f, "bad datum: {e}"),
            TetFailure::Underdetermined => write!(f, "given edges do not determine all six images"),
            TetFailure::Inconsistent { edge } => write!(
                f,
                "propagation contradicts the given image on edge {edge:?}"
            ),
            TetFailure::EdgeOrder {
                edge,
                expected,
                found,
            } => {
                write!(
                    f,
                    "edge {edge:?} image has order {found}, expected {expected}"
                )
            }
            TetFailure::VertexRelation { vertex } => {
                write!(f, "vertex relation fails at vertex {vertex}")
            }
            TetFailure::VertexGroup {
                vertex,
                expected,
                found,
            } => {
                write!(
                    f,
                    "vertex {vertex} images generate order {found}, expected {expected}"
                )
            }
            TetFailure::BoundaryMismatch => write!(
                f,
                "truncated-vertex images do not reproduce the boundary vector"
            ),
            TetFailure::NotSurjective { generated, order } => {
                write!(f, "edge images generate order {generated} < {order}")
            }
        }
    }
}

impl std::error::Error for TetFailure {}

/// How the truncated-vertex triple is matched to the boundary vector:
/// rotate cyclically by `rotation`, optionally mirror `(c1,c2,c3) ->
/// (c3^-1,c2^-1,c1^-1)`, then conjugate by `conjugator`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryMatch {
    pub rotation: usize,
    pub mirrored: bool,
    pub conjugator: Elem,
}

/// A prescribed image for the rotation about `edge`.
///
/// Without an anchor the image is that of the edge rotation itself, up to
/// direction. With an anchor vertex `v` (an ordinary endpoint of the edge)
/// it is the image of some rotation about an axis through `v` conjugate to
/// the edge rotation in the stabilizer of `v`, so the edge image is
/// `u x u^-1` with `u` in the vertex group image at `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TetDatum {
    pub edge: (usize, usize),
    pub image: Elem,
    pub anchor: Option<usize>,
}

impl TetDatum {
    pub fn exact(edge: (usize, usize), image: Elem) -> Self {
        TetDatum {
            edge: (edge.0.min(edge.1), edge.0.max(edge.1)),
            image,
            anchor: None,
        }
    }

    pub fn anchored(edge: (usize, usize), image: Elem, vertex: usize) -> Self {
        TetDatum {
            anchor: Some(vertex),
            ..Self::exact(edge, image)
        }
    }
}

/// How one datum was matched: `conjugator * image^(+-1) * conjugator^-1` is
/// the edge image, with `inverted` selecting the sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DatumMatch {
    pub datum: TetDatum,
    pub inverted: bool,
    pub conjugator: Elem,
}

/// Orientation choices that made the given data consistent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TetConvention {
    pub data: Vec<DatumMatch>,
    pub boundary: BoundaryMatch,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TetExtensionCert {
    pub tetrahedron: TruncatedTetrahedron,
    pub boundary: GeneratingVector,
    /// Image of the rotation `r_i r_j` about each edge, indexed like [`EDGES`].
    pub images: [Elem; 6],
    pub convention: TetConvention,
}

fn phi(images: &[Elem; 6], g: &FiniteGroup, i: usize, j: usize) -> Elem {
    let x = images[edge_of_faces(i, j)];
    if i < j {
        x
    } else {
        g.inv(x)
    }
}

/// The triple `(phi_ij, phi_jk, phi_ki)` at the truncated vertex.
pub fn truncated_triple(
    t: &TruncatedTetrahedron,
    g: &FiniteGroup,
    images: &[Elem; 6],
) -> [Elem; 3] {
    let f: Vec<usize> = (0..4).filter(|&k| k != t.truncated).collect();
    [
        phi(images, g, f[0], f[1]),
        phi(images, g, f[1], f[2]),
        phi(images, g, f[2], f[0]),
    ]
}

fn transform_triple(
    g: &FiniteGroup,
    triple: [Elem; 3],
    rotation: usize,
    mirrored: bool,
    by: Elem,
) -> [Elem; 3] {
    let mut t: [Elem; 3] = std::array::from_fn(|l| triple[(l + rotation) % 3]);
    if mirrored {
        t = [g.inv(t[2]), g.inv(t[1]), g.inv(t[0])];
    }
    t.map(|x| g.conj(by, x))
}

fn find_boundary_match(
    g: &FiniteGroup,
    triple: [Elem; 3],
    target: &[Elem],
) -> Option<BoundaryMatch> {
    for mirrored in [false, true] {
        for rotation in 0..3 {
            let base = transform_triple(g, triple, rotation, mirrored, g.identity());
            if let Some(conjugator) = g
                .elements()
                .find(|&x| (0..3).all(|l| g.conj(x, base[l]) == target[l]))
            {
                return Some(BoundaryMatch {
                    rotation,
                    mirrored,
                    conjugator,
                });
            }
        }
    }
    None
}

fn check_geometry(t: &TruncatedTetrahedron) -> Result<Vec<VertexTriple>, TetFailure> {
    let types = tet_vertex_types(t).map_err(|e| TetFailure::Geometry(e.to_string()))?;
    let report = gram_check(t, DEFAULT_TOL).map_err(|e| TetFailure::Geometry(e.to_string()))?;
    if !report.accepted {
        return Err(TetFailure::Geometry(format!(
            "Gram matrix rejected (signature {:?})",
            report.signature
        )));
    }
    Ok(types)
}

fn check_boundary_vector(v: &GeneratingVector) -> Result<(), TetFailure> {
    if v.signature.genus != 0 || v.cones.len() != 3 {
        return Err(TetFailure::BoundaryVector(format!(
            "signature {} is not a triangle",
            v.signature
        )));
    }
    v.is_surface_kernel()
        .map_err(|e: KernelFailure| TetFailure::BoundaryVector(e.to_string()))
}

/// Order, vertex and surjectivity checks on a complete assignment.
fn check_images(
    t: &TruncatedTetrahedron,
    types: &[VertexTriple],
    g: &FiniteGroup,
    images: &[Elem; 6],
) -> Result<(), TetFailure> {
    for (e, &(a, b)) in EDGES.iter().enumerate() {
        let found = g.element_order(images[e]);
        if found != t.orders[e] {
            return Err(TetFailure::EdgeOrder {
                edge: (a, b),
                expected: t.orders[e],
                found,
            });
        }
    }
    for v in 0..4 {
        let f: Vec<usize> = (0..4).filter(|&k| k != v).collect();
        let (x, y, z) = (
            phi(images, g, f[0], f[1]),
            phi(images, g, f[1], f[2]),
            phi(images, g, f[0], f[2]),
        );
        if g.mul(x, y) != z {
            return Err(TetFailure::VertexRelation { vertex: v });
        }
    }
    for vt in types {
        if let Some(kind) = vt.kind {
            let f: Vec<usize> = (0..4).filter(|&k| k != vt.vertex).collect();
            let gens = [phi(images, g, f[0], f[1]), phi(images, g, f[1], f[2])];
            let found = g.subgroup_generated(&gens).len();
            if found != kind.order() {
                return Err(TetFailure::VertexGroup {
                    vertex: vt.vertex,
                    expected: kind.order(),
                    found,
                });
            }
        }
    }
    Ok(())
}

fn check_surjective(g: &FiniteGroup, images: &[Elem; 6]) -> Result<(), TetFailure> {
    let generated = g.subgroup_generated(images).len();
    if generated != g.order() {
        return Err(TetFailure::NotSurjective {
            generated,
            order: g.order(),
        });
    }
    Ok(())
}

/// Extends images given on some edges to all six, trying every choice of
/// rotation direction on the data (and every conjugate for anchored data),
/// and returns the first assignment passing every check. On failure the
/// diagnostic of the choice that got furthest is returned.
pub fn verify_tet_extension(
    t: &TruncatedTetrahedron,
    v: &GeneratingVector,
    data: &[TetDatum],
) -> Result<TetExtensionCert, TetFailure> {
    let types = check_geometry(t)?;
    check_boundary_vector(v)?;
    let g = v.group.as_ref();
    for d in data {
        if let Some(a) = d.anchor {
            if a == t.truncated || (d.edge.0 != a && d.edge.1 != a) {
                return Err(TetFailure::BadDatum(format!(
                    "anchor {a} is not an ordinary end of edge {:?}",
                    d.edge
                )));
            }
        }
    }
    let anchored: Vec<usize> = (0..data.len())
        .filter(|&k| data[k].anchor.is_some())
        .collect();
    if data.len() > 12 || anchored.len() > 2 {
        return Err(TetFailure::BadDatum(
            "at most 12 data with at most 2 anchored".into(),
        ));
    }
    // distinct conjugates of each anchored datum, in order of first conjugator
    let conjugates = |x: Elem| -> Vec<(Elem, Elem)> {
        let mut seen = vec![false; g.order()];
        g.elements()
            .filter_map(|u| {
                let y = g.conj(u, x);
                (!std::mem::replace(&mut seen[y.index()], true)).then_some((u, y))
            })
            .collect()
    };
    let mut best: Option<TetFailure> = None;
    for mask in 0u32..1 << data.len() {
        let signed: Vec<Elem> = (0..data.len())
            .map(|k| {
                if mask >> k & 1 == 1 {
                    g.inv(data[k].image)
                } else {
                    data[k].image
                }
            })
            .collect();
        let choices: Vec<Vec<(Elem, Elem)>> =
            anchored.iter().map(|&k| conjugates(signed[k])).collect();
        let total: usize = choices.iter().map(Vec::len).product();
        for pick in 0..total {
            let mut values = signed.clone();
            let mut rest = pick;
            for (c, &k) in anchored.iter().enumerate() {
                values[k] = choices[c][rest % choices[c].len()].1;
                rest /= choices[c].len();
            }
            let given: Vec<((usize, usize), Elem)> = data
                .iter()
                .zip(&values)
                .map(|(d, &x)| (d.edge, x))
                .collect();
            let attempt = propagate(g, &given).and_then(|images| {
                check_images(t, &types, g, &images)?;
                let matches = (0..data.len())
                    .map(|k| match_datum(t, g, &images, data[k], mask >> k & 1 == 1))
                    .collect::<Result<Vec<_>, _>>()?;
                let triple = truncated_triple(t, g, &images);
                let boundary =
                    find_boundary_match(g, triple, &v.cones).ok_or(TetFailure::BoundaryMismatch)?;
                check_surjective(g, &images)?;
                Ok(TetExtensionCert {
                    tetrahedron: t.clone(),
                    boundary: v.clone(),
                    images,
                    convention: TetConvention {
                        data: matches,
                        boundary,
                    },
                })
            });
            match attempt {
                Ok(cert) => return Ok(cert),
                Err(TetFailure::Underdetermined) => return Err(TetFailure::Underdetermined),
                Err(e) => {
                    if best.as_ref().is_none_or(|b| e.stage() > b.stage()) {
                        best = Some(e);
                    }
                }
            }
        }
    }
    Err(best.unwrap_or(TetFailure::Underdetermined))
}

/// Ordinary vertex group image at `v`, generated by two of its edge images.
fn vertex_group(g: &FiniteGroup, images: &[Elem; 6], v: usize) -> Vec<Elem> {
    let f: Vec<usize> = (0..4).filter(|&k| k != v).collect();
    g.subgroup_generated(&[phi(images, g, f[0], f[1]), phi(images, g, f[1], f[2])])
}

fn match_datum(
    t: &TruncatedTetrahedron,
    g: &FiniteGroup,
    images: &[Elem; 6],
    datum: TetDatum,
    inverted: bool,
) -> Result<DatumMatch, TetFailure> {
    let x = if inverted {
        g.inv(datum.image)
    } else {
        datum.image
    };
    let target = images[edge_index(datum.edge.0, datum.edge.1)];
    let conjugator = match datum.anchor {
        None => (x == target).then_some(g.identity()),
        Some(v) if v != t.truncated => vertex_group(g, images, v)
            .into_iter()
            .find(|&u| g.conj(u, x) == target),
        Some(_) => None,
    };
    conjugator
        .map(|conjugator| DatumMatch {
            datum,
            inverted,
            conjugator,
        })
        .ok_or(TetFailure::Inconsistent { edge: datum.edge })
}

/// Solves `phi_ij = p_i^-1 p_j` for face potentials along the given edges,
/// then reads off all six images and checks the given ones.
fn propagate(g: &FiniteGroup, given: &[((usize, usize), Elem)]) -> Result<[Elem; 6], TetFailure> {
    let mut p: [Option<Elem>; 4] = [Some(g.identity()), None, None, None];
    loop {
        let mut progress = false;
        for &((a, b), x) in given {
            let (i, j) = faces_of_edge(a, b);
            match (p[i], p[j]) {
                (Some(pi), None) => {
                    p[j] = Some(g.mul(pi, x));
                    progress = true;
                }
                (None, Some(pj)) => {
                    p[i] = Some(g.mul(pj, g.inv(x)));
                    progress = true;
                }
                _ => {}
            }
        }
        if !progress {
            break;
        }
    }
    let p: Vec<Elem> = p
        .iter()
        .map(|x| x.ok_or(TetFailure::Underdetermined))
        .collect::<Result<_, _>>()?;
    let images: [Elem; 6] = std::array::from_fn(|e| {
        let (i, j) = faces_of_edge(EDGES[e].0, EDGES[e].1);
        g.mul(g.inv(p[i]), p[j])
    });
    for &((a, b), x) in given {
        if images[edge_index(a, b)] != x {
            return Err(TetFailure::Inconsistent { edge: (a, b) });
        }
    }
    Ok(images)
}

impl TetExtensionCert {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.boundary.group
    }

    /// Re-checks every invariant from the stored data.
    pub fn verify(&self) -> Result<(), TetFailure> {
        let t = &self.tetrahedron;
        let types = check_geometry(t)?;
        check_boundary_vector(&self.boundary)?;
        let g = self.boundary.group.as_ref();
        check_images(t, &types, g, &self.images)?;
        for m in &self.convention.data {
            let again = match_datum(t, g, &self.images, m.datum, m.inverted)?;
            let x = if m.inverted {
                g.inv(m.datum.image)
            } else {
                m.datum.image
            };
            let ok = match m.datum.anchor {
                None => m.conjugator == g.identity(),
                Some(v) => vertex_group(g, &self.images, v).contains(&m.conjugator),
            };
            if !ok
                || g.conj(m.conjugator, x)
                    != self.images[edge_index(m.datum.edge.0, m.datum.edge.1)]
            {
                return Err(TetFailure::Inconsistent {
                    edge: again.datum.edge,
                });
            }
        }
        let b = self.convention.boundary;
        let triple = truncated_triple(t, g, &self.images);
        if b.rotation >= 3
            || transform_triple(g, triple, b.rotation, b.mirrored, b.conjugator)[..]
                != self.boundary.cones[..]
        {
            return Err(TetFailure::BoundaryMismatch);
        }
        check_surjective(g, &self.images)
    }

    /// Spherical types of the three ordinary vertices.
    pub fn vertex_types(&self) -> Vec<SphericalType> {
        tet_vertex_types(&self.tetrahedron)
            .map(|v| v.iter().filter_map(|x| x.kind).collect())
            .unwrap_or_default()
    }

    pub fn to_json(&self) -> TetCertJson {
        let g = &self.boundary.group;
        TetCertJson {
            kind: "tet".into(),
            atlas: g.name().to_string(),
            signature: self.boundary.signature.clone(),
            boundary: self.boundary.cone_strings(),
            tetrahedron: TetrahedronJson {
                truncated: self.tetrahedron.truncated,
                orders: EDGES
                    .iter()
                    .zip(self.tetrahedron.orders)
                    .map(|(&e, n)| (edge_label(e), n))
                    .collect(),
            },
            assignments: EDGES
                .iter()
                .zip(self.images)
                .map(|(&e, x)| (edge_label(e), g.format(x)))
                .collect(),
            convention: TetConventionJson {
                edge_rotation:
                    "edge (a,b) carries r_i r_j for its faces i < j; face i is opposite vertex i"
                        .into(),
                composition: "left-to-right".into(),
                data: self
                    .convention
                    .data
                    .iter()
                    .map(|m| DatumJson {
                        edge: edge_label(m.datum.edge),
                        given: g.format(m.datum.image),
                        anchor: m.datum.anchor,
                        inverted: m.inverted,
                        conjugator: g.format(m.conjugator),
                    })
                    .collect(),
                boundary_rotation: self.convention.boundary.rotation,
                boundary_mirrored: self.convention.boundary.mirrored,
                boundary_conjugator: g.format(self.convention.boundary.conjugator),
            },
            euler: format_rational(self.boundary.signature.orb_euler()),
        }
    }

    /// Rebuilds the certificate from its serialized form; the group comes
    /// from the atlas. Call [`verify`](Self::verify) afterwards.
    pub fn from_json(j: &TetCertJson) -> Result<Self> {
        if j.kind != "tet" {
            return Err(Error::Certificate(format!(
                "expected kind `tet`, got `{}`",
                j.kind
            )));
        }
        let group: Arc<FiniteGroup> = atlas_build(&j.atlas)?;
        let cones: Vec<&str> = j.boundary.iter().map(String::as_str).collect();
        let mut boundary = GeneratingVector::parse_cones(&group, &cones)?;
        if boundary.signature != j.signature {
            return Err(Error::Certificate(format!(
                "boundary has signature {}, recorded {}",
                boundary.signature, j.signature
            )));
        }
        boundary.signature = j.signature.clone();
        if parse_rational(&j.euler)? != j.signature.orb_euler() {
            return Err(Error::Certificate(format!(
                "euler {} does not match {}",
                j.euler, j.signature
            )));
        }
        let mut orders = [0u32; 6];
        let mut images = [group.identity(); 6];
        let mut seen = [false; 6];
        for (label, &n) in &j.tetrahedron.orders {
            let (a, b) = parse_edge(label)?;
            orders[edge_index(a, b)] = n;
        }
        for (label, text) in &j.assignments {
            let (a, b) = parse_edge(label)?;
            images[edge_index(a, b)] = group.parse_element(text)?;
            seen[edge_index(a, b)] = true;
        }
        if orders.contains(&0) || seen.contains(&false) {
            return Err(Error::Certificate(
                "all six edges need an order and an image".into(),
            ));
        }
        let data = j
            .convention
            .data
            .iter()
            .map(|d| {
                Ok(DatumMatch {
                    datum: TetDatum {
                        edge: parse_edge(&d.edge)?,
                        image: group.parse_element(&d.given)?,
                        anchor: d.anchor,
                    },
                    inverted: d.inverted,
                    conjugator: group.parse_element(&d.conjugator)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(TetExtensionCert {
            tetrahedron: TruncatedTetrahedron::new(j.tetrahedron.truncated, orders),
            boundary,
            images,
            convention: TetConvention {
                data,
                boundary: BoundaryMatch {
                    rotation: j.convention.boundary_rotation,
                    mirrored: j.convention.boundary_mirrored,
                    conjugator: group.parse_element(&j.convention.boundary_conjugator)?,
                },
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TetCertJson {
    pub kind: String,
    pub atlas: String,
    pub signature: Signature,
    pub boundary: Vec<String>,
    pub tetrahedron: TetrahedronJson,
    pub assignments: BTreeMap<String, String>,
    pub convention: TetConventionJson,
    pub euler: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TetrahedronJson {
    pub truncated: usize,
    pub orders: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TetConventionJson {
    pub edge_rotation: String,
    pub composition: String,
    pub data: Vec<DatumJson>,
    pub boundary_rotation: usize,
    pub boundary_mirrored: bool,
    pub boundary_conjugator: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatumJson {
    pub edge: String,
    pub given: String,
    pub anchor: Option<usize>,
    pub inverted: bool,
    pub conjugator: String,
}

/// The tetrahedron for `(2,4,6)`: orders 2, 4, 6 at the truncated vertex 0,
/// order 3 opposite the order-6 edge, order 2 elsewhere.
pub fn tetrahedron_246() -> TruncatedTetrahedron {
    TruncatedTetrahedron::from_pairs(
        0,
        &[
            ((0, 1), 2),
            ((0, 2), 4),
            ((0, 3), 6),
            ((1, 2), 3),
            ((1, 3), 2),
            ((2, 3), 2),
        ],
    )
    .expect("valid edge list")
}

/// The tetrahedron for `(2,4,5)`: an order-3 edge joins the order-4 and
/// order-5 edges, every other edge has order 2.
pub fn tetrahedron_245() -> TruncatedTetrahedron {
    TruncatedTetrahedron::from_pairs(
        0,
        &[
            ((0, 1), 2),
            ((0, 2), 4),
            ((0, 3), 5),
            ((1, 2), 2),
            ((1, 3), 2),
            ((2, 3), 3),
        ],
    )
    .expect("valid edge list")
}
