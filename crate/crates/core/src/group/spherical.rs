use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Finite subgroups of SO(3): the possible stabilizers of points of an
/// orientable 3-orbifold. `Dihedral(2)` is the Klein four-group.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SphericalType {
    Cyclic(u32),
    Dihedral(u32),
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl SphericalType {
    pub fn order(self) -> usize {
        match self {
            SphericalType::Cyclic(n) => n as usize,
            SphericalType::Dihedral(n) => 2 * n as usize,
            SphericalType::Tetrahedral => 12,
            SphericalType::Octahedral => 24,
            SphericalType::Icosahedral => 60,
        }
    }

    /// Orders of the three singular edges meeting at a vertex of this type.
    pub fn edge_triple(self) -> Option<[u32; 3]> {
        match self {
            SphericalType::Cyclic(_) => None,
            SphericalType::Dihedral(n) => Some([n, 2, 2]),
            SphericalType::Tetrahedral => Some([3, 3, 2]),
            SphericalType::Octahedral => Some([4, 3, 2]),
            SphericalType::Icosahedral => Some([5, 3, 2]),
        }
    }

    /// Inverse of [`edge_triple`](Self::edge_triple) for spherical triples.
    pub fn from_triple(triple: [u32; 3]) -> Option<Self> {
        let mut t = triple;
        t.sort_unstable();
        match t {
            [2, 2, n] if n >= 2 => Some(SphericalType::Dihedral(n)),
            [2, 3, 3] => Some(SphericalType::Tetrahedral),
            [2, 3, 4] => Some(SphericalType::Octahedral),
            [2, 3, 5] => Some(SphericalType::Icosahedral),
            _ => None,
        }
    }

    /// Element-order histogram of the polyhedral groups A4, S4, A5.
    pub fn polyhedral_histogram(self) -> Option<BTreeMap<u32, usize>> {
        let pairs: &[(u32, usize)] = match self {
            SphericalType::Tetrahedral => &[(1, 1), (2, 3), (3, 8)],
            SphericalType::Octahedral => &[(1, 1), (2, 9), (3, 8), (4, 6)],
            SphericalType::Icosahedral => &[(1, 1), (2, 15), (3, 20), (5, 24)],
            _ => return None,
        };
        Some(pairs.iter().copied().collect())
    }

    pub fn is_polyhedral(self) -> bool {
        matches!(
            self,
            SphericalType::Tetrahedral | SphericalType::Octahedral | SphericalType::Icosahedral
        )
    }
}

impl fmt::Display for SphericalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphericalType::Cyclic(n) => write!(f, "Z{n}"),
            SphericalType::Dihedral(n) => write!(f, "D{n}"),
            SphericalType::Tetrahedral => write!(f, "A4"),
            SphericalType::Octahedral => write!(f, "S4"),
            SphericalType::Icosahedral => write!(f, "A5"),
        }
    }
}

impl FromStr for SphericalType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Certificate(format!("unknown spherical type `{s}`"));
        match s {
            "A4" => Ok(SphericalType::Tetrahedral),
            "S4" => Ok(SphericalType::Octahedral),
            "A5" => Ok(SphericalType::Icosahedral),
            _ => {
                let (kind, n) = s.split_at(1);
                let n: u32 = n.parse().map_err(|_| bad())?;
                match kind {
                    "Z" => Ok(SphericalType::Cyclic(n)),
                    "D" if n >= 2 => Ok(SphericalType::Dihedral(n)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl Serialize for SphericalType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SphericalType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
