//! End-to-end verdict tables for genus 3 and genus 4.

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounding::{
    axis_closure_check, cone_data, AxisVerdict, BoundingObstruction, ConeDatum, ConeDiagnostic,
    TerminationWitness,
};
use crate::certs::handlebody::{DEFAULT_MAX_EDGES, DEFAULT_MAX_VERTICES};
use crate::certs::{
    no_handlebody_rule, search_handlebody, tetrahedron_245, tetrahedron_246, verify_tet_extension,
    Certificate, CertificateJson, HandlebodyCert, HandlebodySearch, TetDatum, TetExtensionCert,
    TruncatedTetrahedron,
};
use crate::error::{Error, Result};
use crate::fuchsian::{dedupe, search_vectors, GeneratingVector, Signature};
use crate::group::{atlas_build, atlas_names, Elem, FiniteGroup, SphericalType};
use crate::subactions::{
    cyclic_witness, index2_restrictions, induced_action, InducedAction, Inheritance,
    ParentCertificate,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    NonBounding,
    BoundsGeometrically,
    BoundsHandlebody,
    BoundsByRestriction,
    NoHandlebody,
    Inconclusive,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VerdictKind::NonBounding => "non-bounding",
            VerdictKind::BoundsGeometrically => "bounds-geometrically",
            VerdictKind::BoundsHandlebody => "bounds-handlebody",
            VerdictKind::BoundsByRestriction => "bounds-by-restriction",
            VerdictKind::NoHandlebody => "no-handlebody",
            VerdictKind::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    NonBounding(BoundingObstruction),
    BoundsGeometrically(Box<TetExtensionCert>),
    BoundsHandlebody(Box<HandlebodyCert>),
    BoundsByRestriction {
        parent: Box<ParentCertificate>,
        subgroup: Vec<Elem>,
        inherited: Inheritance,
    },
    NoHandlebody(&'static str),
    Inconclusive(String),
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::NonBounding(_) => VerdictKind::NonBounding,
            Verdict::BoundsGeometrically(_) => VerdictKind::BoundsGeometrically,
            Verdict::BoundsHandlebody(_) => VerdictKind::BoundsHandlebody,
            Verdict::BoundsByRestriction { .. } => VerdictKind::BoundsByRestriction,
            Verdict::NoHandlebody(_) => VerdictKind::NoHandlebody,
            Verdict::Inconclusive(_) => VerdictKind::Inconclusive,
        }
    }

    pub fn certificate(&self) -> Option<Certificate> {
        match self {
            Verdict::BoundsGeometrically(c) => Some(Certificate::Tet((**c).clone())),
            Verdict::BoundsHandlebody(c) => Some(Certificate::Handlebody((**c).clone())),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub generator: Elem,
    pub induced: InducedAction,
    pub obstruction: BoundingObstruction,
}

#[derive(Clone, Debug)]
pub struct VerdictRow {
    pub atlas: String,
    pub order: usize,
    pub signature: Signature,
    pub surface_genus: u32,
    pub vector: GeneratingVector,
    pub verdict: Verdict,
    /// Set for bounding rows where a handlebody is ruled out.
    pub handlebody: Option<&'static str>,
    pub witness: Option<Witness>,
    pub restrictions: Vec<(Vec<Elem>, InducedAction)>,
    pub expected: VerdictKind,
    pub annotation: Option<&'static str>,
    /// Disagreements with the expected table; empty when the row reproduces.
    pub mismatches: Vec<String>,
}

/// Edge data for the geometric certificates.
#[derive(Clone, Copy)]
enum TetData {
    Order48,
    Order120,
}

impl TetData {
    fn tetrahedron(self) -> TruncatedTetrahedron {
        match self {
            TetData::Order48 => tetrahedron_246(),
            TetData::Order120 => tetrahedron_245(),
        }
    }

    fn data(self, g: &FiniteGroup) -> Result<Vec<TetDatum>> {
        let e = |s: &str| g.parse_element(s);
        Ok(match self {
            TetData::Order48 => vec![
                TetDatum::exact((0, 2), e("(1234)(56)")?),
                TetDatum::exact((0, 3), e("(143)(56)")?),
                TetDatum::exact((1, 2), e("(142)")?),
            ],
            // the order-3 image is a rotation about an axis through the A5 vertex
            TetData::Order120 => vec![
                TetDatum::exact((0, 2), e("(2345)")?),
                TetDatum::exact((0, 3), e("(12345)")?),
                TetDatum::anchored((2, 3), e("(135)")?, 3),
            ],
        })
    }
}

struct RowSpec {
    atlas: &'static str,
    signature: &'static str,
    expected: VerdictKind,
    witness: Option<(u32, &'static str)>,
    tet: Option<TetData>,
    restrictions: bool,
    /// Parent row whose geometric certificate may be restricted.
    parent: Option<(&'static str, &'static str, TetData)>,
    annotation: Option<&'static str>,
}

const fn row(atlas: &'static str, signature: &'static str, expected: VerdictKind) -> RowSpec {
    RowSpec {
        atlas,
        signature,
        expected,
        witness: None,
        tet: None,
        restrictions: false,
        parent: None,
        annotation: None,
    }
}

const PARENT_48: (&str, &str, TetData) = ("z2xs4", "0:2,4,6", TetData::Order48);

fn genus3_rows() -> Vec<RowSpec> {
    use VerdictKind::*;
    vec![
        RowSpec { witness: Some((7, "0:7,7,7")), ..row("psl27", "0:2,3,7", NonBounding) },
        RowSpec { witness: Some((8, "0:4,8,8")), ..row("g96", "0:2,3,8", NonBounding) },
        RowSpec { witness: Some((4, "0:4,4,4,4")), ..row("g48a", "0:3,3,4", NonBounding) },
        RowSpec {
            tet: Some(TetData::Order48),
            restrictions: true,
            annotation: Some("listed as the largest bounding action in genus 3 (not re-derived)"),
            ..row("z2xs4", "0:2,4,6", BoundsGeometrically)
        },
        RowSpec { witness: Some((8, "0:4,8,8")), ..row("g32a", "0:2,4,8", NonBounding) },
        RowSpec { witness: Some((8, "0:4,8,8")), ..row("z2xd285", "0:2,4,8", NonBounding) },
        RowSpec { witness: Some((6, "0:2,3,3,6")), ..row("sl23", "0:3,3,6", NonBounding) },
        RowSpec { witness: Some((12, "0:2,12,12")), ..row("d_2_12_5", "0:2,4,12", NonBounding) },
        RowSpec { parent: Some(PARENT_48), ..row("z2xa4", "0:2,6,6", BoundsByRestriction) },
        RowSpec { parent: Some(PARENT_48), ..row("s4", "0:3,4,4", BoundsByRestriction) },
        RowSpec {
            parent: Some(PARENT_48),
            annotation: Some("listed as the unique maximal handlebody group in genus 3, order 12(g-1) (not re-derived)"),
            ..row("s4", "0:2,2,2,3", BoundsHandlebody)
        },
    ]
}

fn genus4_rows() -> Vec<RowSpec> {
    use VerdictKind::*;
    vec![
        RowSpec {
            tet: Some(TetData::Order120),
            annotation: Some("listed as the largest action in genus 4"),
            ..row("s5", "0:2,4,5", BoundsGeometrically)
        },
        RowSpec {
            annotation: Some("order 36 = 12(g-1)"),
            ..row("d3xd3", "0:2,2,2,3", BoundsHandlebody)
        },
    ]
}

/// First vector admitting a tetrahedron certificate for the listed data.
pub fn geometric_certificate(atlas: &str, signature: &str) -> Result<Option<TetExtensionCert>> {
    let data = match (atlas, signature) {
        ("z2xs4", "0:2,4,6") => TetData::Order48,
        ("s5", "0:2,4,5") => TetData::Order120,
        _ => return Ok(None),
    };
    let g = atlas_build(atlas)?;
    find_tet(&g, &signature.parse()?, data)
}

fn find_tet(
    g: &Arc<FiniteGroup>,
    sig: &Signature,
    data: TetData,
) -> Result<Option<TetExtensionCert>> {
    let t = data.tetrahedron();
    let d = data.data(g)?;
    Ok(search_vectors(sig, g, usize::MAX)
        .iter()
        .find_map(|v| verify_tet_extension(&t, v, &d).ok()))
}

fn compute_row(spec: &RowSpec, genus: u32) -> Result<VerdictRow> {
    let g = atlas_build(spec.atlas)?;
    let sig: Signature = spec.signature.parse()?;
    let vectors = search_vectors(&sig, &g, usize::MAX);
    let mut mismatches = Vec::new();
    let Some(first) = vectors.first().cloned() else {
        return Err(Error::Restriction(format!(
            "{} has no {} vector",
            spec.atlas, spec.signature
        )));
    };
    let mut vector = first;
    let mut witness = None;
    let mut restrictions = Vec::new();
    let rule = no_handlebody_rule(&sig);

    let verdict = match axis_closure_check(&cone_data(&vector), &g) {
        AxisVerdict::Obstruction(o) => Verdict::NonBounding(o),
        AxisVerdict::NoObstruction(_) => positive_verdict(spec, &g, &sig, &vectors, &mut vector)?,
    };

    if let Some((order, target)) = spec.witness {
        match cyclic_witness(&vector, order, &target.parse()?)? {
            Some(w) => {
                let AxisVerdict::Obstruction(obstruction) = w.verdict else {
                    unreachable!("witnesses are obstructed")
                };
                witness = Some(Witness {
                    generator: w.generator,
                    induced: w.induced,
                    obstruction,
                });
            }
            None => mismatches.push(format!(
                "no obstructed cyclic subgroup of order {order} with signature {target}"
            )),
        }
    }
    if spec.restrictions {
        restrictions = index2_restrictions(&vector)?;
    }
    if verdict.kind() != spec.expected {
        mismatches.push(format!(
            "verdict {}, expected {}",
            verdict.kind(),
            spec.expected
        ));
    }
    let surface_genus = vector.surface_genus()?;
    if surface_genus != genus {
        mismatches.push(format!("surface genus {surface_genus}, expected {genus}"));
    }
    let bounding = matches!(
        verdict.kind(),
        VerdictKind::BoundsGeometrically
            | VerdictKind::BoundsByRestriction
            | VerdictKind::BoundsHandlebody
    );
    Ok(VerdictRow {
        atlas: spec.atlas.to_string(),
        order: g.order(),
        signature: sig,
        surface_genus,
        vector,
        verdict,
        handlebody: rule.filter(|_| bounding),
        witness,
        restrictions,
        expected: spec.expected,
        annotation: spec.annotation,
        mismatches,
    })
}

/// Geometric certificate, then handlebody search, then restriction of a
/// parent certificate. `vector` is replaced by the certificate's boundary.
fn positive_verdict(
    spec: &RowSpec,
    g: &Arc<FiniteGroup>,
    sig: &Signature,
    vectors: &[GeneratingVector],
    vector: &mut GeneratingVector,
) -> Result<Verdict> {
    if let Some(data) = spec.tet {
        if let Some(cert) = find_tet(g, sig, data)? {
            *vector = cert.boundary.clone();
            return Ok(Verdict::BoundsGeometrically(Box::new(cert)));
        }
    }
    let mut note = None;
    match search_handlebody(vector, DEFAULT_MAX_VERTICES, DEFAULT_MAX_EDGES) {
        HandlebodySearch::Found(cert) => return Ok(Verdict::BoundsHandlebody(cert)),
        HandlebodySearch::Inconclusive { visited } => {
            note = Some(format!("handlebody search hit the cap at {visited}"))
        }
        HandlebodySearch::TriangleRule | HandlebodySearch::NotFound => {}
    }
    if let Some((atlas, signature, data)) = spec.parent {
        let pg = atlas_build(atlas)?;
        if let Some(cert) = find_tet(&pg, &signature.parse()?, data)? {
            // the row's action is identified with a restriction by signature
            // and group type, which is only sound when the row has one class
            if dedupe(vectors.to_vec()).len() != 1 {
                return Ok(Verdict::Inconclusive(format!(
                    "{} has several {} classes",
                    spec.atlas, sig
                )));
            }
            let hist = g.order_histogram();
            let parent = ParentCertificate::Geometric(Box::new(cert));
            for (h, induced) in index2_restrictions(parent.boundary())? {
                if induced.signature().normalized() == sig.normalized()
                    && induced.group.order_histogram() == hist
                {
                    let inherited = parent.verify()?;
                    return Ok(Verdict::BoundsByRestriction {
                        parent: Box::new(parent),
                        subgroup: h,
                        inherited,
                    });
                }
            }
        }
    }
    if let Some(rule) = no_handlebody_rule(sig) {
        return Ok(Verdict::NoHandlebody(rule));
    }
    Ok(Verdict::Inconclusive(note.unwrap_or_else(|| {
        "no obstruction and no certificate found".into()
    })))
}

#[derive(Clone, Debug)]
pub struct Report {
    pub genus: u32,
    pub rows: Vec<VerdictRow>,
}

/// Rows for genus 3 or 4, computed in parallel and kept in table order.
pub fn reproduce(genus: u32) -> Result<Report> {
    let specs = match genus {
        3 => genus3_rows(),
        4 => genus4_rows(),
        _ => return Err(Error::Restriction(format!("no table for genus {genus}"))),
    };
    let rows = specs
        .par_iter()
        .map(|s| compute_row(s, genus))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report { genus, rows })
}

pub fn reproduce_genus3() -> Result<Report> {
    reproduce(3)
}

pub fn reproduce_genus4() -> Result<Report> {
    reproduce(4)
}

impl Report {
    pub fn mismatches(&self) -> Vec<String> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| {
                r.mismatches
                    .iter()
                    .map(move |m| format!("row {} ({} {}): {m}", i + 1, r.atlas, r.signature))
            })
            .collect()
    }

    pub fn certificates(&self) -> Vec<(String, Certificate)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                r.verdict.certificate().map(|c| {
                    (
                        format!(
                            "{:02}-{}-{}",
                            i + 1,
                            r.atlas,
                            r.signature.to_string().replace([':', ','], "_")
                        ),
                        c,
                    )
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            genus: self.genus,
            rows: self.rows.iter().map(row_json).collect(),
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "genus {}: {} actions", self.genus, self.rows.len());
        let _ = writeln!(
            out,
            "{:>3}  {:<9} {:>5}  {:<11} {:<22} evidence",
            "#", "group", "order", "signature", "verdict"
        );
        for (i, r) in self.rows.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:>3}  {:<9} {:>5}  {:<11} {:<22} {}",
                i + 1,
                r.atlas,
                r.order,
                r.signature.to_string(),
                r.verdict.kind().to_string(),
                evidence_summary(r)
            );
            if let Some(w) = &r.witness {
                let _ = writeln!(
                    out,
                    "{:>5}- cyclic witness {} -> Z{}, obstructed at cone {}",
                    "",
                    w.induced.signature(),
                    w.induced.subgroup.len(),
                    w.obstruction.blocking_index
                );
            }
            for (h, a) in &r.restrictions {
                let _ = writeln!(
                    out,
                    "{:>5}- index-2 restriction {} to {} = <{}>",
                    "",
                    a.signature(),
                    atlas_type(&a.group),
                    generators_json(&r.vector.group, h).join(", ")
                );
            }
            if let Some(note) = r.annotation {
                let _ = writeln!(out, "{:>5}- note: {note}", "");
            }
            for m in &r.mismatches {
                let _ = writeln!(out, "{:>5}- MISMATCH: {m}", "");
            }
        }
        out
    }
}

fn evidence_summary(r: &VerdictRow) -> String {
    let mut s = match &r.verdict {
        Verdict::NonBounding(o) => {
            let d = &o.diagnostics[o.blocking_index];
            let how = if o.isolated {
                "no ending"
            } else {
                "no complete closure"
            };
            format!(
                "axis of order {} at cone {}: {how}",
                d.order, o.blocking_index
            )
        }
        Verdict::BoundsGeometrically(c) => {
            let types: Vec<String> = c.vertex_types().iter().map(ToString::to_string).collect();
            format!("tetrahedron with vertices {}", types.join(","))
        }
        Verdict::BoundsHandlebody(c) => {
            format!(
                "pattern with {} vertices, euler {}",
                c.pattern.vertices.len(),
                crate::fuchsian::format_rational(c.euler)
            )
        }
        Verdict::BoundsByRestriction {
            parent, subgroup, ..
        } => {
            format!(
                "index-{} restriction of {}",
                parent.boundary().group.order() / subgroup.len(),
                parent.boundary().group.name()
            )
        }
        Verdict::NoHandlebody(rule) => format!("rule {rule}"),
        Verdict::Inconclusive(why) => why.clone(),
    };
    if let Some(rule) = r.handlebody {
        let _ = write!(s, "; no handlebody ({rule})");
    }
    s
}

// ---- JSON ----

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub genus: u32,
    pub rows: Vec<RowJson>,
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowJson {
    pub atlas: String,
    pub order: usize,
    pub signature: Signature,
    pub surface_genus: u32,
    pub vector: Vec<String>,
    pub verdict: VerdictJson,
    pub handlebody: Option<String>,
    pub witness: Option<WitnessJson>,
    pub restrictions: Vec<RestrictionJson>,
    pub annotation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VerdictJson {
    NonBounding {
        obstruction: ObstructionJson,
    },
    BoundsGeometrically {
        certificate: CertificateJson,
    },
    BoundsHandlebody {
        certificate: CertificateJson,
    },
    BoundsByRestriction {
        parent_certificate: CertificateJson,
        subgroup_generators: Vec<String>,
        subgroup_order: usize,
        inherited: Inheritance,
    },
    NoHandlebody {
        rule: String,
    },
    Inconclusive {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionJson {
    pub blocking_index: usize,
    pub isolated: bool,
    pub diagnostics: Vec<DiagnosticJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticJson {
    pub index: usize,
    pub order: u32,
    pub partners: Vec<usize>,
    pub termination: Option<TerminationJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TerminationJson {
    Unconstrained,
    Dihedral {
        involution: String,
    },
    Polyhedral {
        r#type: SphericalType,
        subgroup: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InducedJson {
    pub subgroup_order: usize,
    pub signature: Signature,
    /// Local generators as permutations, one per induced cone point.
    pub cones: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub generator: String,
    pub induced: InducedJson,
    pub obstruction: ObstructionJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictionJson {
    pub subgroup_generators: Vec<String>,
    pub induced: InducedJson,
}

pub fn obstruction_json(o: &BoundingObstruction, g: &FiniteGroup) -> ObstructionJson {
    ObstructionJson {
        blocking_index: o.blocking_index,
        isolated: o.isolated,
        diagnostics: o
            .diagnostics
            .iter()
            .map(|d| DiagnosticJson {
                index: d.index,
                order: d.order,
                partners: d.partners.clone(),
                termination: d.termination.as_ref().map(|t| match t {
                    TerminationWitness::Unconstrained => TerminationJson::Unconstrained,
                    TerminationWitness::Dihedral { involution } => TerminationJson::Dihedral {
                        involution: g.format(*involution),
                    },
                    TerminationWitness::Polyhedral { kind, subgroup } => {
                        TerminationJson::Polyhedral {
                            r#type: *kind,
                            subgroup: subgroup.iter().map(|&x| g.format(x)).collect(),
                        }
                    }
                }),
            })
            .collect(),
    }
}

pub fn obstruction_from_json(j: &ObstructionJson, g: &FiniteGroup) -> Result<BoundingObstruction> {
    let diagnostics = j
        .diagnostics
        .iter()
        .map(|d| {
            let termination = match &d.termination {
                None => None,
                Some(TerminationJson::Unconstrained) => Some(TerminationWitness::Unconstrained),
                Some(TerminationJson::Dihedral { involution }) => {
                    Some(TerminationWitness::Dihedral {
                        involution: g.parse_element(involution)?,
                    })
                }
                Some(TerminationJson::Polyhedral { r#type, subgroup }) => {
                    Some(TerminationWitness::Polyhedral {
                        kind: *r#type,
                        subgroup: subgroup
                            .iter()
                            .map(|s| g.parse_element(s))
                            .collect::<Result<_>>()?,
                    })
                }
            };
            Ok(ConeDiagnostic {
                index: d.index,
                order: d.order,
                partners: d.partners.clone(),
                termination,
            })
        })
        .collect::<Result<_>>()?;
    Ok(BoundingObstruction {
        blocking_index: j.blocking_index,
        isolated: j.isolated,
        diagnostics,
    })
}

fn induced_json(a: &InducedAction) -> InducedJson {
    InducedJson {
        subgroup_order: a.subgroup.len(),
        signature: a.signature(),
        cones: a.generator_strings(),
    }
}

/// The first atlas group with the same order and element-order histogram.
fn atlas_type(h: &FiniteGroup) -> String {
    let hist = h.order_histogram();
    atlas_names()
        .into_iter()
        .filter(|&(_, order)| order == h.order())
        .find(|(name, _)| atlas_build(name).is_ok_and(|a| a.order_histogram() == hist))
        .map_or_else(
            || format!("a group of order {}", h.order()),
            |(name, _)| name.to_string(),
        )
}

fn generators_json(g: &FiniteGroup, h: &[Elem]) -> Vec<String> {
    // smallest-index greedy generating set
    let mut gens = Vec::new();
    let mut have = vec![false; g.order()];
    have[g.identity().index()] = true;
    for &x in h {
        if !have[x.index()] {
            gens.push(x);
            for y in g.subgroup_generated(&gens) {
                have[y.index()] = true;
            }
        }
    }
    gens.iter().map(|&x| g.format(x)).collect()
}

fn row_json(r: &VerdictRow) -> RowJson {
    let g = r.vector.group.as_ref();
    let verdict = match &r.verdict {
        Verdict::NonBounding(o) => VerdictJson::NonBounding {
            obstruction: obstruction_json(o, g),
        },
        Verdict::BoundsGeometrically(c) => VerdictJson::BoundsGeometrically {
            certificate: CertificateJson::Tet(c.to_json()),
        },
        Verdict::BoundsHandlebody(c) => VerdictJson::BoundsHandlebody {
            certificate: CertificateJson::Handlebody(c.to_json()),
        },
        Verdict::BoundsByRestriction {
            parent,
            subgroup,
            inherited,
        } => {
            let pg = parent.boundary().group.as_ref();
            let parent_certificate = match parent.as_ref() {
                ParentCertificate::Geometric(c) => CertificateJson::Tet(c.to_json()),
                ParentCertificate::Handlebody(c) => CertificateJson::Handlebody(c.to_json()),
                ParentCertificate::Trivial(_) => {
                    unreachable!("rows restrict nontrivial certificates")
                }
            };
            VerdictJson::BoundsByRestriction {
                parent_certificate,
                subgroup_generators: generators_json(pg, subgroup),
                subgroup_order: subgroup.len(),
                inherited: *inherited,
            }
        }
        Verdict::NoHandlebody(rule) => VerdictJson::NoHandlebody {
            rule: rule.to_string(),
        },
        Verdict::Inconclusive(reason) => VerdictJson::Inconclusive {
            reason: reason.clone(),
        },
    };
    RowJson {
        atlas: r.atlas.clone(),
        order: r.order,
        signature: r.signature.clone(),
        surface_genus: r.surface_genus,
        vector: r.vector.cone_strings(),
        verdict,
        handlebody: r.handlebody.map(str::to_string),
        witness: r.witness.as_ref().map(|w| WitnessJson {
            generator: g.format(w.generator),
            induced: induced_json(&w.induced),
            obstruction: obstruction_json(&w.obstruction, &w.induced.group),
        }),
        restrictions: r
            .restrictions
            .iter()
            .map(|(h, a)| RestrictionJson {
                subgroup_generators: generators_json(g, h),
                induced: induced_json(a),
            })
            .collect(),
        annotation: r.annotation.map(str::to_string),
    }
}

fn parse_subgroup(g: &FiniteGroup, gens: &[String]) -> Result<Vec<Elem>> {
    let gens = gens
        .iter()
        .map(|s| g.parse_element(s))
        .collect::<Result<Vec<_>>>()?;
    let mut h = g.subgroup_generated(&gens);
    h.sort();
    Ok(h)
}

fn check_induced(a: &InducedAction, j: &InducedJson, what: &str) -> Result<()> {
    if induced_json(a) != *j {
        return Err(Error::Certificate(format!(
            "{what}: recorded induced action does not match the recomputation"
        )));
    }
    Ok(())
}

fn induced_cones(a: &InducedAction, j: &InducedJson) -> Result<Vec<ConeDatum>> {
    j.cones
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let generator = a.group.parse_element(s)?;
            Ok(ConeDatum {
                index,
                order: a.group.element_order(generator),
                generator,
            })
        })
        .collect()
}

/// Re-verifies every evidence object in a serialized report, using only the
/// JSON and the atlas. Returns the number of objects checked.
pub fn reverify_report(j: &ReportJson) -> Result<usize> {
    let mut checked = 0;
    for (i, row) in j.rows.iter().enumerate() {
        let fail = |e: String| Error::Certificate(format!("row {} ({}): {e}", i + 1, row.atlas));
        let g = atlas_build(&row.atlas)?;
        let cones: Vec<&str> = row.vector.iter().map(String::as_str).collect();
        let v = GeneratingVector::parse_cones(&g, &cones)?;
        if v.signature != row.signature {
            return Err(fail(format!("vector has signature {}", v.signature)));
        }
        v.is_surface_kernel().map_err(|e| fail(e.to_string()))?;
        if v.surface_genus()? != row.surface_genus || g.order() != row.order {
            return Err(fail("genus or order does not match".into()));
        }
        checked += 1;
        match &row.verdict {
            VerdictJson::NonBounding { obstruction } => {
                let o = obstruction_from_json(obstruction, &g)?;
                o.recheck(&cone_data(&v), &g).map_err(fail)?;
            }
            VerdictJson::BoundsGeometrically { certificate }
            | VerdictJson::BoundsHandlebody { certificate } => {
                let cert = Certificate::from_json(certificate)?;
                cert.verify()?;
                let boundary = match &cert {
                    Certificate::Tet(c) => &c.boundary,
                    Certificate::Handlebody(c) => &c.boundary,
                };
                if boundary.cone_strings() != row.vector || boundary.group.name() != row.atlas {
                    return Err(fail("certificate boundary is not the row vector".into()));
                }
            }
            VerdictJson::BoundsByRestriction {
                parent_certificate,
                subgroup_generators,
                subgroup_order,
                ..
            } => {
                let parent = match Certificate::from_json(parent_certificate)? {
                    Certificate::Tet(c) => ParentCertificate::Geometric(Box::new(c)),
                    Certificate::Handlebody(c) => ParentCertificate::Handlebody(Box::new(c)),
                };
                parent.verify()?;
                let pg = parent.boundary().group.clone();
                let h = parse_subgroup(&pg, subgroup_generators)?;
                let induced = induced_action(parent.boundary(), &h)?;
                if h.len() != *subgroup_order
                    || induced.signature().normalized() != row.signature.normalized()
                    || induced.group.order_histogram() != g.order_histogram()
                {
                    return Err(fail("restriction does not give the row action".into()));
                }
            }
            VerdictJson::NoHandlebody { rule } | VerdictJson::Inconclusive { reason: rule } => {
                if matches!(row.verdict, VerdictJson::NoHandlebody { .. })
                    && no_handlebody_rule(&v.signature) != Some(rule.as_str())
                {
                    return Err(fail(format!("rule {rule} does not apply")));
                }
            }
        }
        checked += 1;
        if let Some(rule) = &row.handlebody {
            if no_handlebody_rule(&v.signature) != Some(rule.as_str()) {
                return Err(fail(format!("rule {rule} does not apply")));
            }
        }
        if let Some(w) = &row.witness {
            let x = g.parse_element(&w.generator)?;
            let mut h = g.subgroup_generated(&[x]);
            h.sort();
            let induced = induced_action(&v, &h)?;
            check_induced(&induced, &w.induced, "witness")?;
            let o = obstruction_from_json(&w.obstruction, &induced.group)?;
            o.recheck(&induced_cones(&induced, &w.induced)?, &induced.group)
                .map_err(fail)?;
            checked += 1;
        }
        for r in &row.restrictions {
            let h = parse_subgroup(&g, &r.subgroup_generators)?;
            check_induced(&induced_action(&v, &h)?, &r.induced, "restriction")?;
            checked += 1;
        }
    }
    Ok(checked)
}
