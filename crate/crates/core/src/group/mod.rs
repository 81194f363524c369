//! Explicit finite groups as permutation groups with a full Cayley table.

mod atlas;
mod perm;
mod spherical;
mod subgroups;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

pub use atlas::{atlas_build, atlas_names, g32a_selected_action};
pub use perm::Perm;
pub use spherical::SphericalType;

use crate::error::{Error, Result};

/// Largest group the engine will close.
pub const MAX_ORDER: usize = 1000;

/// An element of one particular [`FiniteGroup`], identified by its position
/// in the group's canonical (lexicographic on images) element list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Elem(u32);

impl Elem {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The element at position `i`; only meaningful for `i < order`.
    #[inline]
    pub fn from_index(i: usize) -> Self {
        Elem(i as u32)
    }
}

pub struct FiniteGroup {
    name: String,
    degree: usize,
    perms: Vec<Perm>,
    lookup: HashMap<Perm, Elem>,
    table: Vec<u32>,
    inverses: Vec<Elem>,
    orders: Vec<u32>,
    generators: Vec<Elem>,
    polyhedral: [OnceLock<Vec<Vec<Elem>>>; 3],
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order())
            .field("degree", &self.degree)
            .finish()
    }
}

impl FiniteGroup {
    /// Closes `gens` under multiplication. Elements are sorted by their image
    /// lists, so the identity is always `Elem(0)`.
    pub fn from_generators(name: impl Into<String>, degree: usize, gens: &[Perm]) -> Result<Self> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::ParsePermutation(g.to_string()));
            }
        }
        let id = Perm::identity(degree);
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x.then(g);
                if !seen.contains_key(&y) {
                    if seen.len() >= MAX_ORDER {
                        return Err(Error::GroupTooLarge(MAX_ORDER));
                    }
                    seen.insert(y.clone(), ());
                    queue.push_back(y);
                }
            }
        }
        let mut perms: Vec<Perm> = seen.into_keys().collect();
        perms.sort();
        let mut group = Self::from_sorted(name.into(), degree, perms);
        group.generators = gens.iter().map(|g| group.lookup[g]).collect();
        Ok(group)
    }

    fn from_sorted(name: String, degree: usize, perms: Vec<Perm>) -> Self {
        let n = perms.len();
        let lookup: HashMap<Perm, Elem> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), Elem(i as u32)))
            .collect();
        let mut table = vec![0u32; n * n];
        for (i, a) in perms.iter().enumerate() {
            for (j, b) in perms.iter().enumerate() {
                table[i * n + j] = lookup[&a.then(b)].0;
            }
        }
        let inverses = perms.iter().map(|p| lookup[&p.inverse()]).collect();
        let mut group = FiniteGroup {
            name,
            degree,
            perms,
            lookup,
            table,
            inverses,
            orders: Vec::new(),
            generators: Vec::new(),
            polyhedral: Default::default(),
        };
        group.orders = (0..n)
            .map(|i| group.compute_order(Elem(i as u32)))
            .collect();
        group
    }

    /// The subgroup `elems` as a group in its own right (same ground set).
    pub fn subgroup_group(&self, name: impl Into<String>, elems: &[Elem]) -> Result<FiniteGroup> {
        if !self.is_subgroup(elems) {
            return Err(Error::NotSubgroup(format!(
                "{} elements of {}",
                elems.len(),
                self.name
            )));
        }
        let mut perms: Vec<Perm> = elems
            .iter()
            .map(|&e| self.perms[e.index()].clone())
            .collect();
        perms.sort();
        let mut sub = Self::from_sorted(name.into(), self.degree, perms);
        sub.generators = sub.greedy_generators();
        Ok(sub)
    }

    fn greedy_generators(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut have = vec![false; self.order()];
        have[0] = true;
        for e in self.elements() {
            if !have[e.index()] {
                gens.push(e);
                for x in self.subgroup_generated(&gens) {
                    have[x.index()] = true;
                }
            }
        }
        gens
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn identity(&self) -> Elem {
        Elem(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.perms.len() as u32).map(Elem)
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.table[a.index() * self.perms.len() + b.index()])
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a.index()]
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn product(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter()
            .fold(self.identity(), |acc, x| self.mul(acc, x))
    }

    /// `a b a^-1 b^-1`.
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.product([a, b, self.inv(a), self.inv(b)])
    }

    pub fn pow(&self, x: Elem, k: i64) -> Elem {
        let m = self.element_order(x) as i64;
        let k = k.rem_euclid(m);
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    fn compute_order(&self, x: Elem) -> u32 {
        let mut k = 1;
        let mut y = x;
        while y != self.identity() {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Smallest `k >= 1` with `x^k = 1`.
    #[inline]
    pub fn element_order(&self, x: Elem) -> u32 {
        self.orders[x.index()]
    }

    pub fn perm(&self, x: Elem) -> &Perm {
        &self.perms[x.index()]
    }

    pub fn elem_of(&self, p: &Perm) -> Option<Elem> {
        self.lookup.get(p).copied()
    }

    /// Parses an element in cycle notation on this group's ground set.
    pub fn parse_element(&self, text: &str) -> Result<Elem> {
        let p = Perm::parse(text, self.degree)?;
        self.elem_of(&p).ok_or_else(|| Error::NotInGroup {
            perm: text.to_string(),
            group: self.name.clone(),
        })
    }

    pub fn format(&self, x: Elem) -> String {
        self.perms[x.index()].to_string()
    }

    /// Closure of `gens`, listed in breadth-first discovery order from the identity.
    pub fn subgroup_generated(&self, gens: &[Elem]) -> Vec<Elem> {
        self.closure_capped(gens, usize::MAX)
            .expect("uncapped closure")
    }

    /// As [`subgroup_generated`](Self::subgroup_generated), giving up with
    /// `None` once more than `cap` elements have been found.
    pub fn closure_capped(&self, gens: &[Elem], cap: usize) -> Option<Vec<Elem>> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![self.identity()];
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    out.push(y);
                    if out.len() > cap {
                        return None;
                    }
                }
            }
        }
        Some(out)
    }

    pub fn generates(&self, gens: &[Elem]) -> bool {
        self.subgroup_generated(gens).len() == self.order()
    }

    pub fn is_subgroup(&self, elems: &[Elem]) -> bool {
        let mut member = vec![false; self.order()];
        for &e in elems {
            if e.index() >= self.order() || member[e.index()] {
                return false;
            }
            member[e.index()] = true;
        }
        if !member[0] {
            return false;
        }
        elems
            .iter()
            .all(|&a| elems.iter().all(|&b| member[self.mul(a, b).index()]))
    }

    pub fn membership(&self, elems: &[Elem]) -> Vec<bool> {
        let mut member = vec![false; self.order()];
        for &e in elems {
            member[e.index()] = true;
        }
        member
    }

    /// Conjugacy classes, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Elem>> {
        let mut class_of = vec![usize::MAX; self.order()];
        let mut classes: Vec<Vec<Elem>> = Vec::new();
        for x in self.elements() {
            if class_of[x.index()] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut class: Vec<Elem> = Vec::new();
            for g in self.elements() {
                let y = self.conj(g, x);
                if class_of[y.index()] == usize::MAX {
                    class_of[y.index()] = id;
                    class.push(y);
                }
            }
            class.sort();
            classes.push(class);
        }
        classes
    }

    pub fn are_conjugate(&self, x: Elem, y: Elem) -> Option<Elem> {
        self.elements().find(|&g| self.conj(g, x) == y)
    }

    /// Multiset of element orders, as order -> count.
    pub fn order_histogram(&self) -> BTreeMap<u32, usize> {
        histogram(self.elements().map(|e| self.element_order(e)))
    }

    pub fn histogram_of(&self, elems: &[Elem]) -> BTreeMap<u32, usize> {
        histogram(elems.iter().map(|&e| self.element_order(e)))
    }

    /// Exhaustive associativity check over the Cayley table.
    pub fn check_associativity(&self) -> bool {
        self.elements().all(|a| {
            self.elements().all(|b| {
                let ab = self.mul(a, b);
                self.elements()
                    .all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }
}

fn histogram(orders: impl Iterator<Item = u32>) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for o in orders {
        *h.entry(o).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4() -> FiniteGroup {
        let a = Perm::parse("(1234)", 4).unwrap();
        let b = Perm::parse("(12)", 4).unwrap();
        FiniteGroup::from_generators("s4", 4, &[a, b]).unwrap()
    }

    #[test]
    fn identity_first_and_table_consistent() {
        let g = s4();
        assert_eq!(g.order(), 24);
        assert!(g.perm(g.identity()).is_identity());
        for x in g.elements() {
            assert_eq!(g.mul(x, g.inv(x)), g.identity());
        }
        assert!(g.check_associativity());
    }

    #[test]
    fn closure_and_orders() {
        let g = s4();
        assert_eq!(g.subgroup_generated(&[]), vec![g.identity()]);
        let c = g.parse_element("(1234)").unwrap();
        assert_eq!(g.element_order(c), 4);
        assert_eq!(g.subgroup_generated(&[c]).len(), 4);
        assert_eq!(g.closure_capped(g.generators(), 10), None);
        assert_eq!(g.conjugacy_classes().len(), 5);
    }

    #[test]
    fn subgroup_group_keeps_ground_set() {
        let g = s4();
        let c = g.parse_element("(1234)").unwrap();
        let h = g.subgroup_group("z4", &g.subgroup_generated(&[c])).unwrap();
        assert_eq!(h.order(), 4);
        assert_eq!(h.degree(), 4);
        assert!(h.generates(h.generators()));
        assert!(g.subgroup_group("bad", &[c]).is_err());
    }
}
