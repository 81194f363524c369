//! Fuchsian signatures, Riemann-Hurwitz arithmetic and surface-kernel
//! generating vectors.
//!
//! A generating vector for a signature `(h; m1, ..., mr)` into a finite group
//! `G` is a tuple `(a1, b1, ..., ah, bh; c1, ..., cr)` with
//! `prod [ai, bi] * prod cj = 1`, `order(cj) = mj` exactly, and the entries
//! generating `G`. It describes an action of `G` on a closed surface of genus
//! `g` with `2 - 2g = |G| * chi`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};

pub type Rational = Ratio<i64>;

/// Default cap on the number of tuples visited by braid-orbit searches.
pub const ORBIT_CAP: usize = 1_000_000;

pub fn format_rational(q: Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Certificate(format!("malformed rational `{s}`"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i64 = n.trim().parse().map_err(|_| bad())?;
    let d: i64 = d.trim().parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Signature {
    pub genus: u32,
    pub cones: Vec<u32>,
}

impl Signature {
    pub fn new(genus: u32, cones: Vec<u32>) -> Self {
        Signature { genus, cones }
    }

    /// `(0; m1, ..., mr)`.
    pub fn sphere(cones: &[u32]) -> Self {
        Signature {
            genus: 0,
            cones: cones.to_vec(),
        }
    }

    /// `2 - 2h - sum (1 - 1/m)`.
    pub fn orb_euler(&self) -> Rational {
        let mut chi = Rational::from_integer(2 - 2 * self.genus as i64);
        for &m in &self.cones {
            chi -= Rational::one() - Rational::new(1, m as i64);
        }
        chi
    }

    pub fn is_triangle(&self) -> bool {
        self.genus == 0 && self.cones.len() == 3
    }

    /// Genus `g` of the covering surface: `2 - 2g = order * chi`.
    pub fn rh_genus(&self, order: u64) -> Result<u32> {
        let value = self.orb_euler() * Rational::from_integer(order as i64);
        let err = || Error::NonIntegralGenus {
            signature: self.to_string(),
            order,
            value: format_rational(value),
        };
        if order == 0 || !value.is_integer() {
            return Err(err());
        }
        let two_minus = 2 - value.to_integer();
        if two_minus < 0 || two_minus % 2 != 0 {
            return Err(err());
        }
        Ok((two_minus / 2) as u32)
    }

    /// Same signature with cone orders sorted ascending.
    pub fn normalized(&self) -> Signature {
        let mut cones = self.cones.clone();
        cones.sort_unstable();
        Signature {
            genus: self.genus,
            cones,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.genus)?;
        for (i, m) in self.cones.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseSignature(s.to_string());
        let (h, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let genus: u32 = h.trim().parse().map_err(|_| bad())?;
        let cones: Vec<u32> = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        if cones.iter().any(|&m| m < 2) {
            return Err(bad());
        }
        Ok(Signature { genus, cones })
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Why a tuple fails to be a surface-kernel generating vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelFailure {
    Shape {
        hyperbolic: usize,
        cones: usize,
    },
    LongRelation {
        product: Elem,
    },
    ConeOrder {
        index: usize,
        expected: u32,
        found: u32,
    },
    NotSurjective {
        generated: usize,
        order: usize,
    },
}

impl fmt::Display for KernelFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelFailure::Shape { hyperbolic, cones } => {
                write!(
                    f,
                    "tuple shape mismatch ({hyperbolic} hyperbolic pairs, {cones} cone elements)"
                )
            }
            KernelFailure::LongRelation { .. } => write!(f, "long relation fails"),
            KernelFailure::ConeOrder {
                index,
                expected,
                found,
            } => {
                write!(f, "cone {index} has order {found}, expected {expected}")
            }
            KernelFailure::NotSurjective { generated, order } => {
                write!(
                    f,
                    "entries generate a subgroup of order {generated} < {order}"
                )
            }
        }
    }
}

#[derive(Clone)]
pub struct GeneratingVector {
    pub group: Arc<FiniteGroup>,
    pub signature: Signature,
    pub hyperbolic: Vec<(Elem, Elem)>,
    pub cones: Vec<Elem>,
}

impl fmt::Debug for GeneratingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}](", self.group.name(), self.signature)?;
        for (a, b) in &self.hyperbolic {
            write!(f, "{}, {}; ", self.group.format(*a), self.group.format(*b))?;
        }
        let cones: Vec<String> = self.cones.iter().map(|&c| self.group.format(c)).collect();
        write!(f, "{})", cones.join(", "))
    }
}

impl PartialEq for GeneratingVector {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group)
            && self.signature == other.signature
            && self.hyperbolic == other.hyperbolic
            && self.cones == other.cones
    }
}

impl GeneratingVector {
    /// Genus-0 vector from cone elements; signature orders read off the elements.
    pub fn from_cones(group: Arc<FiniteGroup>, cones: Vec<Elem>) -> Self {
        let orders = cones.iter().map(|&c| group.element_order(c)).collect();
        GeneratingVector {
            group,
            signature: Signature::new(0, orders),
            hyperbolic: Vec::new(),
            cones,
        }
    }

    /// Parses cone elements in cycle notation.
    pub fn parse_cones(group: &Arc<FiniteGroup>, cones: &[&str]) -> Result<Self> {
        let elems = cones
            .iter()
            .map(|c| group.parse_element(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_cones(group.clone(), elems))
    }

    pub fn entries(&self) -> Vec<Elem> {
        self.hyperbolic
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .chain(self.cones.iter().copied())
            .collect()
    }

    pub fn long_relation(&self) -> Elem {
        let g = &self.group;
        let comm = self.hyperbolic.iter().map(|&(a, b)| g.commutator(a, b));
        g.product(comm.chain(self.cones.iter().copied()))
    }

    /// Checks the long relation, exact cone orders and surjectivity.
    pub fn is_surface_kernel(&self) -> std::result::Result<(), KernelFailure> {
        let g = &self.group;
        if self.hyperbolic.len() != self.signature.genus as usize
            || self.cones.len() != self.signature.cones.len()
        {
            return Err(KernelFailure::Shape {
                hyperbolic: self.hyperbolic.len(),
                cones: self.cones.len(),
            });
        }
        let product = self.long_relation();
        if product != g.identity() {
            return Err(KernelFailure::LongRelation { product });
        }
        for (index, (&c, &m)) in self.cones.iter().zip(&self.signature.cones).enumerate() {
            let found = g.element_order(c);
            if found != m {
                return Err(KernelFailure::ConeOrder {
                    index,
                    expected: m,
                    found,
                });
            }
        }
        let generated = g.subgroup_generated(&self.entries()).len();
        if generated != g.order() {
            return Err(KernelFailure::NotSurjective {
                generated,
                order: g.order(),
            });
        }
        Ok(())
    }

    pub fn surface_genus(&self) -> Result<u32> {
        self.signature.rh_genus(self.group.order() as u64)
    }

    /// Hurwitz move at cone positions `i, i+1` (0-based):
    /// `(ci, ci+1) -> (ci ci+1 ci^-1, ci)`. The two cone orders swap.
    pub fn braid_move(&self, i: usize) -> Result<Self> {
        self.check_braid_index(i)?;
        let g = &self.group;
        let mut out = self.clone();
        let (a, b) = (self.cones[i], self.cones[i + 1]);
        out.cones[i] = g.conj(a, b);
        out.cones[i + 1] = a;
        out.signature.cones.swap(i, i + 1);
        Ok(out)
    }

    /// Inverse of [`braid_move`](Self::braid_move):
    /// `(ci, ci+1) -> (ci+1, ci+1^-1 ci ci+1)`.
    pub fn braid_move_inverse(&self, i: usize) -> Result<Self> {
        self.check_braid_index(i)?;
        let g = &self.group;
        let mut out = self.clone();
        let (a, b) = (self.cones[i], self.cones[i + 1]);
        out.cones[i] = b;
        out.cones[i + 1] = g.conj(g.inv(b), a);
        out.signature.cones.swap(i, i + 1);
        Ok(out)
    }

    fn check_braid_index(&self, i: usize) -> Result<()> {
        if i + 1 >= self.cones.len() {
            return Err(Error::BraidIndex {
                index: i,
                len: self.cones.len(),
            });
        }
        Ok(())
    }

    /// Simultaneous conjugation of every entry by `g`.
    pub fn conjugate(&self, by: Elem) -> Self {
        let g = &self.group;
        let mut out = self.clone();
        out.hyperbolic = self
            .hyperbolic
            .iter()
            .map(|&(a, b)| (g.conj(by, a), g.conj(by, b)))
            .collect();
        out.cones = self.cones.iter().map(|&c| g.conj(by, c)).collect();
        out
    }

    pub fn cone_strings(&self) -> Vec<String> {
        self.cones.iter().map(|&c| self.group.format(c)).collect()
    }
}

/// Whether an action record came out of a search or was entered from a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Searched,
    Tabulated,
}

#[derive(Clone, Debug)]
pub struct ActionRecord {
    pub vector: GeneratingVector,
    pub surface_genus: u32,
    pub provenance: Provenance,
}

impl ActionRecord {
    pub fn new(vector: GeneratingVector, provenance: Provenance) -> Result<Self> {
        let surface_genus = vector.surface_genus()?;
        Ok(ActionRecord {
            vector,
            surface_genus,
            provenance,
        })
    }
}

/// Streams surface-kernel vectors in lexicographic order of element indices.
///
/// For genus-0 signatures the first cone element runs over conjugacy-class
/// representatives only and the last is forced by the long relation, so the
/// stream meets every simultaneous-conjugacy class of vectors. Positive
/// quotient genus is handled by plain enumeration of the hyperbolic pairs.
pub fn for_each_vector<F>(sig: &Signature, group: &Arc<FiniteGroup>, mut visit: F)
where
    F: FnMut(GeneratingVector) -> ControlFlow<()>,
{
    let g = group.as_ref();
    let r = sig.cones.len();
    let h = sig.genus as usize;
    // Nothing to do if a required order is missing from the group.
    let mut by_order: Vec<Vec<Elem>> = Vec::new();
    for &m in &sig.cones {
        let elems: Vec<Elem> = g.elements().filter(|&e| g.element_order(e) == m).collect();
        if elems.is_empty() {
            return;
        }
        by_order.push(elems);
    }
    if h == 0 && r >= 2 {
        let reps: Vec<Elem> = g
            .conjugacy_classes()
            .into_iter()
            .map(|c| c[0])
            .filter(|&e| g.element_order(e) == sig.cones[0])
            .collect();
        by_order[0] = reps;
    }

    let mut search = Search {
        group,
        sig,
        by_order,
        hyperbolic: Vec::with_capacity(h),
        cones: Vec::with_capacity(r),
    };
    let _ = search.hyper(g.identity(), &mut visit);
}

struct Search<'a> {
    group: &'a Arc<FiniteGroup>,
    sig: &'a Signature,
    by_order: Vec<Vec<Elem>>,
    hyperbolic: Vec<(Elem, Elem)>,
    cones: Vec<Elem>,
}

impl Search<'_> {
    fn hyper<F>(&mut self, prefix: Elem, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(GeneratingVector) -> ControlFlow<()>,
    {
        let g = self.group.clone();
        if self.hyperbolic.len() == self.sig.genus as usize {
            return self.cone(prefix, visit);
        }
        for a in g.elements() {
            for b in g.elements() {
                self.hyperbolic.push((a, b));
                let flow = self.hyper(g.mul(prefix, g.commutator(a, b)), visit);
                self.hyperbolic.pop();
                flow?;
            }
        }
        ControlFlow::Continue(())
    }

    fn cone<F>(&mut self, prefix: Elem, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(GeneratingVector) -> ControlFlow<()>,
    {
        let g = self.group.clone();
        let r = self.sig.cones.len();
        let k = self.cones.len();
        if r == 0 || k + 1 == r {
            // last cone element is forced by the long relation
            if r == 0 {
                if prefix != g.identity() {
                    return ControlFlow::Continue(());
                }
            } else {
                let last = g.inv(prefix);
                if g.element_order(last) != self.sig.cones[r - 1] {
                    return ControlFlow::Continue(());
                }
                self.cones.push(last);
            }
            let v = GeneratingVector {
                group: g.clone(),
                signature: self.sig.clone(),
                hyperbolic: self.hyperbolic.clone(),
                cones: self.cones.clone(),
            };
            if r > 0 {
                self.cones.pop();
            }
            if g.generates(&v.entries()) {
                return visit(v);
            }
            return ControlFlow::Continue(());
        }
        for i in 0..self.by_order[k].len() {
            let c = self.by_order[k][i];
            self.cones.push(c);
            let flow = self.cone(g.mul(prefix, c), visit);
            self.cones.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// The first `limit` vectors of [`for_each_vector`].
pub fn search_vectors(
    sig: &Signature,
    group: &Arc<FiniteGroup>,
    limit: usize,
) -> Vec<GeneratingVector> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    for_each_vector(sig, group, |v| {
        out.push(v);
        if out.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    out
}

/// Keeps the first vector of each orbit under simultaneous conjugation and
/// braid moves, preserving stream order. Orbits larger than [`ORBIT_CAP`]
/// are truncated, which can only keep extra representatives.
pub fn dedupe(vectors: Vec<GeneratingVector>) -> Vec<GeneratingVector> {
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut kept = Vec::new();
    for v in vectors {
        let key = v.entries();
        if seen.contains(&key) {
            continue;
        }
        let mut budget = ORBIT_CAP;
        let mut queue = VecDeque::from([v.clone()]);
        seen.insert(key);
        while let Some(u) = queue.pop_front() {
            let mut next: Vec<GeneratingVector> = u
                .group
                .generators()
                .iter()
                .map(|&s| u.conjugate(s))
                .collect();
            for i in 0..u.cones.len().saturating_sub(1) {
                next.push(u.braid_move(i).expect("index in range"));
                next.push(u.braid_move_inverse(i).expect("index in range"));
            }
            for w in next {
                if budget == 0 {
                    break;
                }
                if seen.insert(w.entries()) {
                    budget -= 1;
                    queue.push_back(w);
                }
            }
        }
        kept.push(v);
    }
    kept
}
