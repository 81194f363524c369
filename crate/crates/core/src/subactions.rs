//! Restricting an action to a subgroup.
//!
//! The cone points of `S/H` over a cone point of `S/G` with generator `c`
//! correspond to double cosets `H x <c>`. The stabilizer in `H` of the point
//! `x.p` is `H ∩ x<c>x^-1`, of order `m'`, generated by `(x c x^-1)^(m/m')`.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bounding::{axis_closure_check, AxisVerdict, ConeDatum};
use crate::certs::{HandlebodyCert, TetExtensionCert};
use crate::error::{Error, Result};
use crate::fuchsian::{format_rational, GeneratingVector, Rational, Signature};
use crate::group::{Elem, FiniteGroup};

/// Where an induced cone point comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConeSource {
    /// Cone index in the parent vector.
    pub cone: usize,
    /// Double-coset representative, as an element of the parent group.
    pub representative: Elem,
}

#[derive(Clone, Debug)]
pub struct InducedAction {
    /// Elements of the subgroup in the parent group, sorted.
    pub subgroup: Vec<Elem>,
    /// The subgroup as a group; cone generators live here.
    pub group: Arc<FiniteGroup>,
    /// Cone data ordered by cone order, ties kept in discovery order.
    pub cones: Vec<ConeDatum>,
    pub sources: Vec<ConeSource>,
    pub quotient_genus: u32,
    pub surface_genus: u32,
}

impl InducedAction {
    pub fn signature(&self) -> Signature {
        Signature::new(
            self.quotient_genus,
            self.cones.iter().map(|c| c.order).collect(),
        )
    }

    pub fn axis_check(&self) -> AxisVerdict {
        axis_closure_check(&self.cones, &self.group)
    }

    /// Cone generators written as permutations.
    pub fn generator_strings(&self) -> Vec<String> {
        self.cones
            .iter()
            .map(|c| self.group.format(c.generator))
            .collect()
    }
}

fn subgroup_name(g: &FiniteGroup, h: &[Elem]) -> String {
    if h.len() == g.order() {
        g.name().to_string()
    } else {
        format!("{}<{}>", g.name(), h.len())
    }
}

/// The restricted action of `h` on the surface of `v`.
pub fn induced_action(v: &GeneratingVector, h: &[Elem]) -> Result<InducedAction> {
    let g = v.group.as_ref();
    let mut subgroup = h.to_vec();
    subgroup.sort();
    subgroup.dedup();
    if !g.is_subgroup(&subgroup) {
        return Err(Error::NotSubgroup(format!(
            "{} elements of {}",
            subgroup.len(),
            g.name()
        )));
    }
    let sub = Arc::new(g.subgroup_group(subgroup_name(g, &subgroup), &subgroup)?);
    let in_h = g.membership(&subgroup);
    let surface_genus = v.surface_genus()?;

    let mut found: Vec<(ConeDatum, ConeSource)> = Vec::new();
    for (i, &c) in v.cones.iter().enumerate() {
        let m = g.element_order(c);
        let powers: Vec<Elem> = (0..m).map(|k| g.pow(c, k as i64)).collect();
        let mut covered = vec![false; g.order()];
        let mut upstairs = 0usize;
        for x in g.elements() {
            if covered[x.index()] {
                continue;
            }
            for &y in &subgroup {
                let yx = g.mul(y, x);
                for &p in &powers {
                    covered[g.mul(yx, p).index()] = true;
                }
            }
            let local = g.conj(x, c);
            let stab = (0..m)
                .filter(|&k| in_h[g.pow(local, k as i64).index()])
                .count() as u32;
            upstairs += subgroup.len() / stab as usize;
            if stab > 1 {
                let gen = g.pow(local, (m / stab) as i64);
                let generator = sub
                    .elem_of(g.perm(gen))
                    .expect("stabilizer lies in the subgroup");
                found.push((
                    ConeDatum {
                        index: 0,
                        order: stab,
                        generator,
                    },
                    ConeSource {
                        cone: i,
                        representative: x,
                    },
                ));
            }
        }
        if upstairs * m as usize != g.order() {
            return Err(Error::Restriction(format!(
                "cone {i}: orbits cover {upstairs} points, expected {}",
                g.order() / m as usize
            )));
        }
    }
    found.sort_by_key(|(c, _)| c.order);
    let (mut cones, sources): (Vec<ConeDatum>, Vec<ConeSource>) = found.into_iter().unzip();
    for (k, c) in cones.iter_mut().enumerate() {
        c.index = k;
    }

    // 2 - 2h' - sum(1 - 1/m') = [G:H] chi
    let index = (g.order() / subgroup.len()) as i64;
    let chi = v.signature.orb_euler() * Rational::from_integer(index);
    let mut rest = chi;
    for c in &cones {
        rest += Rational::one() - Rational::new(1, c.order as i64);
    }
    let two_h = Rational::from_integer(2) - rest;
    let bad = || Error::NonIntegralGenus {
        signature: v.signature.to_string(),
        order: subgroup.len() as u64,
        value: format_rational(chi),
    };
    if !two_h.is_integer() || two_h < Rational::zero() || two_h.to_integer() % 2 != 0 {
        return Err(bad());
    }
    Ok(InducedAction {
        subgroup,
        group: sub,
        cones,
        sources,
        quotient_genus: (two_h.to_integer() / 2) as u32,
        surface_genus,
    })
}

/// Induced actions of every index-2 subgroup, in the group's enumeration order.
pub fn index2_restrictions(v: &GeneratingVector) -> Result<Vec<(Vec<Elem>, InducedAction)>> {
    v.group
        .index2_subgroups()
        .into_iter()
        .map(|h| induced_action(v, &h).map(|a| (h, a)))
        .collect()
}

/// Cyclic subgroups of the given order, each as the generator of smallest index.
pub fn cyclic_subgroups(g: &FiniteGroup, order: u32) -> Vec<(Elem, Vec<Elem>)> {
    let mut seen: Vec<Vec<Elem>> = Vec::new();
    let mut out = Vec::new();
    for x in g.elements().filter(|&x| g.element_order(x) == order) {
        let mut h: Vec<Elem> = (0..order).map(|k| g.pow(x, k as i64)).collect();
        h.sort();
        if !seen.contains(&h) {
            seen.push(h.clone());
            out.push((x, h));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct CyclicWitness {
    pub generator: Elem,
    pub induced: InducedAction,
    pub verdict: AxisVerdict,
}

/// The first cyclic subgroup of order `order` whose restricted action has
/// signature `target` (up to cone order) and is obstructed.
pub fn cyclic_witness(
    v: &GeneratingVector,
    order: u32,
    target: &Signature,
) -> Result<Option<CyclicWitness>> {
    let target = target.normalized();
    for (generator, h) in cyclic_subgroups(&v.group, order) {
        let induced = induced_action(v, &h)?;
        if induced.signature().normalized() != target {
            continue;
        }
        let verdict = induced.axis_check();
        if verdict.is_obstruction() {
            return Ok(Some(CyclicWitness {
                generator,
                induced,
                verdict,
            }));
        }
    }
    Ok(None)
}

/// A verified bounding of the parent action.
#[derive(Clone, Debug)]
pub enum ParentCertificate {
    Geometric(Box<TetExtensionCert>),
    Handlebody(Box<HandlebodyCert>),
    /// The parent group is trivial; every surface bounds a handlebody.
    Trivial(GeneratingVector),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inheritance {
    Geometric,
    Handlebody,
    Trivial,
}

#[derive(Clone, Debug)]
pub struct RestrictionBound {
    pub induced: InducedAction,
    pub inherited: Inheritance,
}

impl ParentCertificate {
    pub fn boundary(&self) -> &GeneratingVector {
        match self {
            ParentCertificate::Geometric(c) => &c.boundary,
            ParentCertificate::Handlebody(c) => &c.boundary,
            ParentCertificate::Trivial(v) => v,
        }
    }

    pub fn verify(&self) -> Result<Inheritance> {
        match self {
            ParentCertificate::Geometric(c) => {
                c.verify()
                    .map_err(|e| Error::Restriction(format!("parent certificate: {e}")))?;
                Ok(Inheritance::Geometric)
            }
            ParentCertificate::Handlebody(c) => {
                c.verify()
                    .map_err(|e| Error::Restriction(format!("parent certificate: {e}")))?;
                Ok(Inheritance::Handlebody)
            }
            ParentCertificate::Trivial(v) if v.group.order() == 1 => Ok(Inheritance::Trivial),
            ParentCertificate::Trivial(v) => Err(Error::Restriction(format!(
                "{} is not the trivial group",
                v.group.name()
            ))),
        }
    }
}

/// An equivariant extension for `G` restricts to one for `H`; the parent
/// certificate is re-verified first.
pub fn bounds_by_restriction(parent: &ParentCertificate, h: &[Elem]) -> Result<RestrictionBound> {
    let inherited = parent.verify()?;
    let induced = induced_action(parent.boundary(), h)?;
    Ok(RestrictionBound { induced, inherited })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::search_vectors;
    use crate::group::atlas_build;

    fn first_vector(name: &str, sig: &str) -> GeneratingVector {
        let g = atlas_build(name).unwrap();
        search_vectors(&sig.parse().unwrap(), &g, 1).remove(0)
    }

    #[test]
    fn whole_group_and_trivial_subgroup() {
        let v = first_vector("psl27", "0:2,3,7");
        let g = v.group.clone();
        let all: Vec<Elem> = g.elements().collect();
        let same = induced_action(&v, &all).unwrap();
        assert_eq!(same.signature(), Signature::sphere(&[2, 3, 7]));
        let trivial = induced_action(&v, &[g.identity()]).unwrap();
        assert!(trivial.cones.is_empty());
        assert_eq!(trivial.quotient_genus, 3);
    }

    #[test]
    fn hurwitz_seven_witness() {
        let v = first_vector("psl27", "0:2,3,7");
        let w = cyclic_witness(&v, 7, &Signature::sphere(&[7, 7, 7]))
            .unwrap()
            .unwrap();
        assert_eq!(w.induced.signature(), Signature::sphere(&[7, 7, 7]));
        assert!(w.verdict.is_obstruction());
    }

    #[test]
    fn a5_is_the_only_restriction_of_s5() {
        let v = first_vector("s5", "0:2,4,5");
        let r = index2_restrictions(&v).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].0.len(), 60);
        // (2,4,5) restricted to A5: the order-4 cone splits off an order-2 cone
        assert_eq!(r[0].1.signature(), Signature::sphere(&[2, 5, 5]));
    }

    #[test]
    fn rejects_non_subgroup() {
        let v = first_vector("s4", "0:3,4,4");
        let g = v.group.clone();
        let x = g.elements().find(|&x| g.element_order(x) == 4).unwrap();
        assert!(matches!(
            induced_action(&v, &[g.identity(), x]),
            Err(Error::NotSubgroup(_))
        ));
    }

    #[test]
    fn trivial_parent_must_be_trivial() {
        let v = first_vector("s4", "0:3,4,4");
        let parent = ParentCertificate::Trivial(v.clone());
        assert!(bounds_by_restriction(&parent, &[v.group.identity()]).is_err());
    }
}
