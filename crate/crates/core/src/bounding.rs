//! The axis-closure obstruction.
//!
//! If a surface action extends over a compact 3-orbifold with the surface as
//! its only boundary component, the singular axis leaving a boundary cone
//! point of order `m` either returns to another boundary cone point, whose
//! stabilizer generator is then conjugate to the inverse, or ends at an
//! interior vertex: dihedral `D_m` (an involution inverting the generator), or
//! for `m = 3, 4, 5` a tetrahedral, octahedral or icosahedral vertex.
//!
//! Order-2 axes are never used to obstruct, and polyhedral endings only ask
//! for a subgroup of the right type containing the generator. Both relax the
//! condition, so an [`AxisVerdict::Obstruction`] is a proof of non-bounding.

use std::collections::HashSet;

use crate::fuchsian::GeneratingVector;
use crate::group::{Elem, FiniteGroup, SphericalType};

/// A boundary cone point with its canonical rotation generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDatum {
    pub index: usize,
    pub order: u32,
    pub generator: Elem,
}

pub fn cone_data(v: &GeneratingVector) -> Vec<ConeDatum> {
    v.cones
        .iter()
        .enumerate()
        .map(|(index, &c)| ConeDatum {
            index,
            order: v.group.element_order(c),
            generator: c,
        })
        .collect()
}

/// Smallest `g` with `g ci g^-1 = cj^-1`.
pub fn can_pair(g: &FiniteGroup, ci: Elem, cj: Elem) -> Option<Elem> {
    if g.element_order(ci) != g.element_order(cj) {
        return None;
    }
    let target = g.inv(cj);
    g.elements().find(|&x| g.conj(x, ci) == target)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TerminationWitness {
    /// Order-2 axes are not constrained.
    Unconstrained,
    Dihedral {
        involution: Elem,
    },
    Polyhedral {
        kind: SphericalType,
        subgroup: Vec<Elem>,
    },
}

/// Polyhedral vertex types that have an edge of order `m`.
pub fn admissible_polyhedral(m: u32) -> &'static [SphericalType] {
    match m {
        3 => &[
            SphericalType::Tetrahedral,
            SphericalType::Octahedral,
            SphericalType::Icosahedral,
        ],
        4 => &[SphericalType::Octahedral],
        5 => &[SphericalType::Icosahedral],
        _ => &[],
    }
}

pub fn can_terminate(g: &FiniteGroup, c: Elem) -> Option<TerminationWitness> {
    let m = g.element_order(c);
    match m {
        0 | 1 => None,
        2 => Some(TerminationWitness::Unconstrained),
        _ => {
            if let Some(&t) = g.inverting_involutions(c).first() {
                return Some(TerminationWitness::Dihedral { involution: t });
            }
            admissible_polyhedral(m).iter().find_map(|&kind| {
                g.has_polyhedral_with(kind, c)
                    .expect("admissible type")
                    .map(|subgroup| TerminationWitness::Polyhedral { kind, subgroup })
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairWitness {
    pub first: usize,
    pub second: usize,
    pub conjugator: Elem,
}

/// Every cone index appears once, either in a pair or as a termination.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ClosurePlan {
    pub pairs: Vec<PairWitness>,
    pub terminations: Vec<(usize, TerminationWitness)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDiagnostic {
    pub index: usize,
    pub order: u32,
    /// Cone indices this one can pair with.
    pub partners: Vec<usize>,
    pub termination: Option<TerminationWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundingObstruction {
    /// A cone with no admissible ending, or the first cone of the search when
    /// every cone has options individually but no complete plan exists.
    pub blocking_index: usize,
    /// True when the blocking cone has no partner and no termination at all.
    pub isolated: bool,
    pub diagnostics: Vec<ConeDiagnostic>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxisVerdict {
    NoObstruction(ClosurePlan),
    Obstruction(BoundingObstruction),
}

impl AxisVerdict {
    pub fn is_obstruction(&self) -> bool {
        matches!(self, AxisVerdict::Obstruction(_))
    }
}

/// Looks for a plan pairing or terminating every cone; the lexicographically
/// smallest one (termination before pairing, partners ascending) is returned.
pub fn axis_closure_check(cones: &[ConeDatum], g: &FiniteGroup) -> AxisVerdict {
    let n = cones.len();
    assert!(n <= 64, "at most 64 cone points");
    let diagnostics: Vec<ConeDiagnostic> = cones
        .iter()
        .enumerate()
        .map(|(p, cone)| ConeDiagnostic {
            index: cone.index,
            order: cone.order,
            partners: (0..n)
                .filter(|&q| q != p && can_pair(g, cone.generator, cones[q].generator).is_some())
                .map(|q| cones[q].index)
                .collect(),
            termination: can_terminate(g, cone.generator),
        })
        .collect();
    let options: Vec<Options> = diagnostics
        .iter()
        .map(|d| Options {
            terminate: d.termination.is_some(),
            partners: d.partners.iter().map(|&i| position(cones, i)).collect(),
        })
        .collect();

    let mut dead = HashSet::new();
    let mut choice = vec![Choice::Terminate; n];
    if complete(&options, 0, &mut choice, &mut dead) {
        let mut plan = ClosurePlan::default();
        for p in 0..n {
            match choice[p] {
                Choice::Terminate => plan.terminations.push((
                    cones[p].index,
                    diagnostics[p].termination.clone().expect("terminable"),
                )),
                Choice::Pair(q) if q > p => plan.pairs.push(PairWitness {
                    first: cones[p].index,
                    second: cones[q].index,
                    conjugator: can_pair(g, cones[p].generator, cones[q].generator)
                        .expect("partner"),
                }),
                Choice::Pair(_) => {}
            }
        }
        return AxisVerdict::NoObstruction(plan);
    }
    let lonely = options
        .iter()
        .position(|o| !o.terminate && o.partners.is_empty());
    AxisVerdict::Obstruction(BoundingObstruction {
        blocking_index: cones[lonely.unwrap_or(0)].index,
        isolated: lonely.is_some(),
        diagnostics,
    })
}

fn position(cones: &[ConeDatum], index: usize) -> usize {
    cones
        .iter()
        .position(|c| c.index == index)
        .expect("known cone index")
}

struct Options {
    terminate: bool,
    partners: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
enum Choice {
    Terminate,
    Pair(usize),
}

fn complete(
    options: &[Options],
    used: u64,
    choice: &mut [Choice],
    dead: &mut HashSet<u64>,
) -> bool {
    let n = options.len();
    let Some(p) = (0..n).find(|&p| used >> p & 1 == 0) else {
        return true;
    };
    if dead.contains(&used) {
        return false;
    }
    if options[p].terminate {
        choice[p] = Choice::Terminate;
        if complete(options, used | 1 << p, choice, dead) {
            return true;
        }
    }
    for &q in &options[p].partners {
        if used >> q & 1 == 0 {
            choice[p] = Choice::Pair(q);
            choice[q] = Choice::Pair(p);
            if complete(options, used | 1 << p | 1 << q, choice, dead) {
                return true;
            }
        }
    }
    dead.insert(used);
    false
}

impl ClosurePlan {
    /// Checks every witness directly.
    pub fn verify(&self, cones: &[ConeDatum], g: &FiniteGroup) -> Result<(), String> {
        let mut seen: Vec<usize> = self
            .pairs
            .iter()
            .flat_map(|p| [p.first, p.second])
            .chain(self.terminations.iter().map(|t| t.0))
            .collect();
        seen.sort_unstable();
        let mut expected: Vec<usize> = cones.iter().map(|c| c.index).collect();
        expected.sort_unstable();
        if seen != expected {
            return Err("plan does not cover each cone exactly once".into());
        }
        let cone = |i: usize| cones.iter().find(|c| c.index == i).expect("covered");
        for p in &self.pairs {
            let (a, b) = (cone(p.first), cone(p.second));
            if g.conj(p.conjugator, a.generator) != g.inv(b.generator) {
                return Err(format!(
                    "pair ({}, {}): conjugator does not invert",
                    p.first, p.second
                ));
            }
        }
        for (i, w) in &self.terminations {
            check_termination(g, cone(*i).generator, w).map_err(|e| format!("cone {i}: {e}"))?;
        }
        Ok(())
    }
}

fn check_termination(g: &FiniteGroup, c: Elem, w: &TerminationWitness) -> Result<(), String> {
    let m = g.element_order(c);
    match w {
        TerminationWitness::Unconstrained if m == 2 => Ok(()),
        TerminationWitness::Unconstrained => Err(format!("order {m} axis is constrained")),
        TerminationWitness::Dihedral { involution: t } => {
            if m >= 3 && g.element_order(*t) == 2 && g.conj(*t, c) == g.inv(c) {
                Ok(())
            } else {
                Err("involution does not invert the generator".into())
            }
        }
        TerminationWitness::Polyhedral { kind, subgroup } => {
            let hist = kind.polyhedral_histogram().ok_or("not a polyhedral type")?;
            if !admissible_polyhedral(m).contains(kind) {
                return Err(format!("{kind} has no edge of order {m}"));
            }
            if subgroup.len() != kind.order()
                || !subgroup.contains(&c)
                || !g.is_subgroup(subgroup)
                || g.histogram_of(subgroup) != hist
            {
                return Err(format!("subgroup is not a {kind} containing the generator"));
            }
            Ok(())
        }
    }
}

impl BoundingObstruction {
    /// Re-derives every absence claim by direct search over the group, then
    /// confirms that the recorded options admit no complete plan.
    pub fn recheck(&self, cones: &[ConeDatum], g: &FiniteGroup) -> Result<(), String> {
        if self.diagnostics.len() != cones.len() {
            return Err("diagnostics do not match the cone list".into());
        }
        for (d, cone) in self.diagnostics.iter().zip(cones) {
            if d.index != cone.index || d.order != g.element_order(cone.generator) {
                return Err(format!("diagnostic for cone {} is misaligned", d.index));
            }
            let c = cone.generator;
            let c_inv = g.inv(c);
            for other in cones.iter().filter(|o| o.index != cone.index) {
                let target = g.inv(other.generator);
                let pairs = g.elements().any(|x| g.mul(g.mul(x, c), g.inv(x)) == target);
                if pairs != d.partners.contains(&other.index) {
                    return Err(format!(
                        "partner claim ({}, {}) is wrong",
                        cone.index, other.index
                    ));
                }
            }
            match &d.termination {
                Some(w) => {
                    check_termination(g, c, w).map_err(|e| format!("cone {}: {e}", cone.index))?
                }
                None => {
                    let m = d.order;
                    if m == 2 {
                        return Err(format!(
                            "cone {} has order 2 but is marked unterminable",
                            cone.index
                        ));
                    }
                    let dihedral = g.elements().any(|t| {
                        t != g.identity()
                            && g.mul(t, t) == g.identity()
                            && g.mul(g.mul(t, c), t) == c_inv
                    });
                    if dihedral {
                        return Err(format!("cone {} has an inverting involution", cone.index));
                    }
                    for &kind in admissible_polyhedral(m) {
                        if polyhedral_by_pairs(g, c, kind) {
                            return Err(format!("cone {} lies in a {kind}", cone.index));
                        }
                    }
                }
            }
        }
        let pos = |i: usize| cones.iter().position(|c| c.index == i);
        let options: Vec<(bool, Vec<usize>)> = self
            .diagnostics
            .iter()
            .map(|d| {
                (
                    d.termination.is_some(),
                    d.partners.iter().filter_map(|&i| pos(i)).collect(),
                )
            })
            .collect();
        if any_plan(&options, &mut vec![false; cones.len()]) {
            return Err("a complete plan exists".into());
        }
        let b = pos(self.blocking_index).ok_or("unknown blocking index")?;
        if self.isolated && (options[b].0 || !options[b].1.is_empty()) {
            return Err("blocking cone is not isolated".into());
        }
        Ok(())
    }
}

/// A4, S4 and A5 subgroups containing an element `c` of order 3, 4 or 5 are
/// generated by `c` and one further element, so scanning `<c, d>` decides
/// membership independently of the subgroup tables.
fn polyhedral_by_pairs(g: &FiniteGroup, c: Elem, kind: SphericalType) -> bool {
    let hist = kind.polyhedral_histogram().expect("polyhedral");
    g.elements().any(|d| {
        g.closure_capped(&[c, d], kind.order())
            .is_some_and(|h| h.len() == kind.order() && g.histogram_of(&h) == hist)
    })
}

fn any_plan(options: &[(bool, Vec<usize>)], used: &mut [bool]) -> bool {
    let Some(p) = used.iter().position(|&u| !u) else {
        return true;
    };
    used[p] = true;
    if options[p].0 && any_plan(options, used) {
        used[p] = false;
        return true;
    }
    for &q in &options[p].1 {
        if !used[q] {
            used[q] = true;
            let ok = any_plan(options, used);
            used[q] = false;
            if ok {
                used[p] = false;
                return true;
            }
        }
    }
    used[p] = false;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{search_vectors, Signature};
    use crate::group::atlas_build;

    #[test]
    fn pairing_in_cyclic_groups() {
        let z8 = atlas_build("z8").unwrap();
        let x = z8.generators()[0];
        assert_eq!(can_pair(&z8, x, z8.pow(x, 7)), Some(z8.identity()));
        assert_eq!(can_pair(&z8, x, z8.pow(x, 5)), None);
        let z4 = atlas_build("z4").unwrap();
        let y = z4.generators()[0];
        assert_eq!(can_pair(&z4, y, y), None);
    }

    #[test]
    fn termination_examples() {
        let psl = atlas_build("psl27").unwrap();
        let c7 = psl.generators()[0];
        assert_eq!(can_terminate(&psl, c7), None);

        let g48 = atlas_build("g48a").unwrap();
        let c4 = g48.elements().find(|&e| g48.element_order(e) == 4).unwrap();
        assert_eq!(can_terminate(&g48, c4), None);

        let g = atlas_build("z2xs4").unwrap();
        let c = g.parse_element("(143)(56)").unwrap();
        let t = g.parse_element("(34)").unwrap();
        assert_eq!(
            can_terminate(&g, c),
            Some(TerminationWitness::Dihedral { involution: t })
        );

        // A4 has no involution inverting a 3-cycle, but is itself tetrahedral.
        let a4 = atlas_build("a4").unwrap();
        let c3 = a4.parse_element("(123)").unwrap();
        assert!(matches!(
            can_terminate(&a4, c3),
            Some(TerminationWitness::Polyhedral {
                kind: SphericalType::Tetrahedral,
                ..
            })
        ));
    }

    #[test]
    fn hurwitz_action_is_obstructed() {
        let psl = atlas_build("psl27").unwrap();
        let v = &search_vectors(&"0:2,3,7".parse::<Signature>().unwrap(), &psl, 1)[0];
        let cones = cone_data(v);
        match axis_closure_check(&cones, &psl) {
            AxisVerdict::Obstruction(o) => {
                assert_eq!(o.blocking_index, 2);
                assert!(o.isolated);
                o.recheck(&cones, &psl).unwrap();
            }
            other => panic!("expected obstruction, got {other:?}"),
        }
    }

    #[test]
    fn z7_witness_is_obstructed() {
        let z7 = atlas_build("z7").unwrap();
        let x = z7.generators()[0];
        let v = GeneratingVector::from_cones(z7.clone(), vec![x, z7.pow(x, 2), z7.pow(x, 4)]);
        let cones = cone_data(&v);
        let AxisVerdict::Obstruction(o) = axis_closure_check(&cones, &z7) else {
            panic!()
        };
        assert_eq!(o.blocking_index, 0);
        o.recheck(&cones, &z7).unwrap();
    }

    #[test]
    fn z2xs4_plan() {
        let g = atlas_build("z2xs4").unwrap();
        let v = GeneratingVector::parse_cones(&g, &["(12)", "(1234)(56)", "(143)(56)"]).unwrap();
        let cones = cone_data(&v);
        let AxisVerdict::NoObstruction(plan) = axis_closure_check(&cones, &g) else {
            panic!()
        };
        assert!(plan.pairs.is_empty());
        assert_eq!(plan.terminations[0], (0, TerminationWitness::Unconstrained));
        assert!(matches!(
            plan.terminations[1],
            (1, TerminationWitness::Dihedral { .. })
        ));
        assert!(matches!(
            plan.terminations[2],
            (2, TerminationWitness::Dihedral { .. })
        ));
        plan.verify(&cones, &g).unwrap();
    }

    #[test]
    fn pairing_plan_and_global_failure() {
        // (1, 3, 1, 3) in Z4: cones pair off, nothing terminates.
        let z4 = atlas_build("z4").unwrap();
        let y = z4.generators()[0];
        let y3 = z4.pow(y, 3);
        let v = GeneratingVector::from_cones(z4.clone(), vec![y, y3, y, y3]);
        let cones = cone_data(&v);
        let AxisVerdict::NoObstruction(plan) = axis_closure_check(&cones, &z4) else {
            panic!()
        };
        assert_eq!(plan.pairs.len(), 2);
        assert_eq!((plan.pairs[0].first, plan.pairs[0].second), (0, 1));
        plan.verify(&cones, &z4).unwrap();

        // Three order-4 cones (1, 3, 1) can only pair two of them.
        let odd: Vec<ConeDatum> = cones[..3].to_vec();
        let AxisVerdict::Obstruction(o) = axis_closure_check(&odd, &z4) else {
            panic!()
        };
        assert!(!o.isolated);
        o.recheck(&odd, &z4).unwrap();
    }

    #[test]
    fn tampered_obstruction_fails_recheck() {
        let z2xs4 = atlas_build("z2xs4").unwrap();
        let v =
            GeneratingVector::parse_cones(&z2xs4, &["(12)", "(1234)(56)", "(143)(56)"]).unwrap();
        let cones = cone_data(&v);
        let fake = BoundingObstruction {
            blocking_index: 2,
            isolated: true,
            diagnostics: cones
                .iter()
                .map(|c| ConeDiagnostic {
                    index: c.index,
                    order: c.order,
                    partners: vec![],
                    termination: None,
                })
                .collect(),
        };
        assert!(fake.recheck(&cones, &z2xs4).is_err());
    }
}
