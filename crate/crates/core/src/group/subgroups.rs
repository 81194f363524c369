//! Subgroup-type detection used by the axis-closure obstruction.

use std::collections::BTreeSet;

use super::{Elem, FiniteGroup, SphericalType};
use crate::error::{Error, Result};

impl FiniteGroup {
    /// All involutions `t` with `t s t^-1 = s^-1`, ascending.
    pub fn inverting_involutions(&self, s: Elem) -> Vec<Elem> {
        let s_inv = self.inv(s);
        self.elements()
            .filter(|&t| self.element_order(t) == 2 && self.conj(t, s) == s_inv)
            .filter(|&t| self.element_order(s) != 2 || t != s)
            .collect()
    }

    /// A pair `(s, t)` generating a dihedral subgroup of order `2n`, if any.
    /// For `n = 2` this looks for a Klein four-group.
    pub fn has_dihedral(&self, n: u32) -> Option<(Elem, Elem)> {
        if n < 2 || !self.order().is_multiple_of(2 * n as usize) {
            return None;
        }
        self.elements()
            .filter(|&s| self.element_order(s) == n)
            .find_map(|s| self.inverting_involutions(s).first().map(|&t| (s, t)))
    }

    /// Every subgroup isomorphic to the polyhedral group `kind`, each sorted.
    ///
    /// A4 is generated by two elements of order 3, S4 by elements of orders
    /// 4 and 3, A5 by elements of orders 5 and 3, so enumerating such pairs
    /// finds every copy. Type is recognised by order plus element-order
    /// histogram.
    pub fn polyhedral_subgroups(&self, kind: SphericalType) -> &[Vec<Elem>] {
        let (slot, first, second) = match kind {
            SphericalType::Tetrahedral => (0, 3, 3),
            SphericalType::Octahedral => (1, 4, 3),
            SphericalType::Icosahedral => (2, 5, 3),
            _ => return &[],
        };
        self.polyhedral[slot].get_or_init(|| {
            let target = kind.order();
            let hist = kind.polyhedral_histogram().expect("polyhedral");
            let mut found: BTreeSet<Vec<Elem>> = BTreeSet::new();
            if !self.order().is_multiple_of(target) {
                return Vec::new();
            }
            let of_order = |k: u32| self.elements().filter(move |&e| self.element_order(e) == k);
            for a in of_order(first) {
                for b in of_order(second) {
                    if found
                        .iter()
                        .any(|h| h.binary_search(&a).is_ok() && h.binary_search(&b).is_ok())
                    {
                        continue;
                    }
                    if let Some(mut h) = self.closure_capped(&[a, b], target) {
                        if h.len() == target && self.histogram_of(&h) == hist {
                            h.sort();
                            found.insert(h);
                        }
                    }
                }
            }
            found.into_iter().collect()
        })
    }

    /// The first subgroup of type `kind` containing `c`, if any.
    pub fn has_polyhedral_with(&self, kind: SphericalType, c: Elem) -> Result<Option<Vec<Elem>>> {
        let order = self.element_order(c);
        let admissible =
            kind.is_polyhedral() && kind.edge_triple().is_some_and(|t| t.contains(&order));
        if !admissible {
            return Err(Error::IncompatibleOrder {
                order,
                kind: kind.to_string(),
            });
        }
        Ok(self
            .polyhedral_subgroups(kind)
            .iter()
            .find(|h| h.binary_search(&c).is_ok())
            .cloned())
    }

    /// Kernels of all surjections onto Z2, each sorted; found by trying every
    /// assignment of parities to the designated generators.
    pub fn index2_subgroups(&self) -> Vec<Vec<Elem>> {
        if !self.order().is_multiple_of(2) {
            return Vec::new();
        }
        let gens = self.generators().to_vec();
        let k = gens.len();
        assert!(k < 20, "too many generators for parity enumeration");
        let mut kernels: Vec<Vec<Elem>> = Vec::new();
        for mask in 1u32..(1 << k) {
            if let Some(parity) = self.parity_map(&gens, mask) {
                let kernel: Vec<Elem> = self.elements().filter(|e| !parity[e.index()]).collect();
                if kernel.len() * 2 == self.order() && !kernels.contains(&kernel) {
                    kernels.push(kernel);
                }
            }
        }
        kernels
    }

    /// Propagates generator parities along the Cayley graph; `None` on conflict.
    fn parity_map(&self, gens: &[Elem], mask: u32) -> Option<Vec<bool>> {
        let mut parity: Vec<Option<bool>> = vec![None; self.order()];
        parity[0] = Some(false);
        let mut queue = vec![self.identity()];
        while let Some(x) = queue.pop() {
            let px = parity[x.index()].expect("visited");
            for (i, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                let py = px ^ (mask >> i & 1 == 1);
                match parity[y.index()] {
                    None => {
                        parity[y.index()] = Some(py);
                        queue.push(y);
                    }
                    Some(q) if q != py => return None,
                    Some(_) => {}
                }
            }
        }
        parity.into_iter().collect()
    }
}
