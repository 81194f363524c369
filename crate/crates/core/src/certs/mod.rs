//! Certificates for positive results: geometric bounding through a
//! truncated tetrahedron, and handlebody extension through a singular forest.

pub mod gram;
pub mod handlebody;
pub mod tetra;

use serde::{Deserialize, Serialize};

pub use gram::{gram_check, GramReport, DEFAULT_TOL};
pub use handlebody::{
    no_handlebody_rule, pattern_euler, search_handlebody, verify_handlebody_cert, End,
    HandlebodyCert, HandlebodyCertJson, HandlebodyFailure, HandlebodyPattern, HandlebodySearch,
    PatternEdge, PatternVertex,
};
pub use tetra::{
    tet_vertex_types, tetrahedron_245, tetrahedron_246, verify_tet_extension, TetCertJson,
    TetDatum, TetExtensionCert, TetFailure, TruncatedTetrahedron,
};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Tet(TetExtensionCert),
    Handlebody(HandlebodyCert),
}

/// Serialized form, tagged by its `kind` field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CertificateJson {
    Tet(TetCertJson),
    Handlebody(HandlebodyCertJson),
}

impl Certificate {
    pub fn verify(&self) -> Result<()> {
        match self {
            Certificate::Tet(c) => c.verify().map_err(|e| Error::Certificate(e.to_string())),
            Certificate::Handlebody(c) => c.verify().map_err(|e| Error::Certificate(e.to_string())),
        }
    }

    pub fn to_json(&self) -> CertificateJson {
        match self {
            Certificate::Tet(c) => CertificateJson::Tet(c.to_json()),
            Certificate::Handlebody(c) => CertificateJson::Handlebody(c.to_json()),
        }
    }

    pub fn from_json(j: &CertificateJson) -> Result<Self> {
        match j {
            CertificateJson::Tet(t) => TetExtensionCert::from_json(t).map(Certificate::Tet),
            CertificateJson::Handlebody(h) => {
                HandlebodyCert::from_json(h).map(Certificate::Handlebody)
            }
        }
    }

    /// Parses and re-verifies a certificate from JSON text alone.
    pub fn reverify_str(text: &str) -> Result<Self> {
        let j: CertificateJson = serde_json::from_str(text)
            .map_err(|e| Error::Certificate(format!("invalid JSON: {e}")))?;
        let cert = Certificate::from_json(&j)?;
        cert.verify()?;
        Ok(cert)
    }
}
