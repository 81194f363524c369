//! Oracles shared by the integration tests and the acceptance gate.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;

use surface_bounding::bounding::{axis_closure_check, cone_data};
use surface_bounding::certs::{pattern_euler, search_handlebody, HandlebodySearch};
use surface_bounding::fuchsian::{search_vectors, GeneratingVector, Rational, Signature};
use surface_bounding::group::{atlas_build, atlas_names, Elem, FiniteGroup};
use surface_bounding::subactions::{cyclic_subgroups, index2_restrictions, induced_action};

/// Smallest index vector over simultaneous conjugates.
pub fn canonical(g: &FiniteGroup, entries: &[Elem]) -> Vec<usize> {
    g.elements()
        .map(|x| {
            entries
                .iter()
                .map(|&e| g.conj(x, e).index())
                .collect::<Vec<_>>()
        })
        .min()
        .expect("nonempty group")
}

/// Every tuple with the right shape, filtered by the surface-kernel test.
/// Cone slots only range over elements of the prescribed order.
pub fn oracle(g: &Arc<FiniteGroup>, sig: &Signature) -> BTreeSet<Vec<usize>> {
    let h = sig.genus as usize;
    let mut slots: Vec<Vec<Elem>> = vec![g.elements().collect(); 2 * h];
    for &m in &sig.cones {
        slots.push(g.elements().filter(|&x| g.element_order(x) == m).collect());
    }
    let mut out = BTreeSet::new();
    let mut tuple = Vec::with_capacity(slots.len());
    fn rec(
        g: &Arc<FiniteGroup>,
        sig: &Signature,
        slots: &[Vec<Elem>],
        tuple: &mut Vec<Elem>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        let Some(choices) = slots.get(tuple.len()) else {
            let h = sig.genus as usize;
            let v = GeneratingVector {
                group: g.clone(),
                signature: sig.clone(),
                hyperbolic: (0..h).map(|i| (tuple[2 * i], tuple[2 * i + 1])).collect(),
                cones: tuple[2 * h..].to_vec(),
            };
            if v.is_surface_kernel().is_ok() {
                out.insert(canonical(g, tuple));
            }
            return;
        };
        for &x in choices {
            tuple.push(x);
            rec(g, sig, slots, tuple, out);
            tuple.pop();
        }
    }
    rec(g, sig, &slots, &mut tuple, &mut out);
    out
}

pub fn searched(g: &Arc<FiniteGroup>, sig: &Signature) -> BTreeSet<Vec<usize>> {
    search_vectors(sig, g, usize::MAX)
        .iter()
        .map(|v| {
            assert!(v.is_surface_kernel().is_ok(), "{v:?}");
            assert_eq!(&v.signature, sig);
            canonical(g, &v.entries())
        })
        .collect()
}

/// Nondecreasing cone tuples of length `r` drawn from `orders`.
pub fn multisets(orders: &[u32], r: usize) -> Vec<Vec<u32>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &m) in orders.iter().enumerate() {
        for mut rest in multisets(&orders[i..], r - 1) {
            rest.insert(0, m);
            out.push(rest);
        }
    }
    out
}

/// Compares search and oracle on every genus-0 signature with 2 to 4 cones
/// drawn from the element orders of each atlas group of order at most 48.
/// Returns (pairs compared, pairs with vectors).
pub fn compare_small_groups() -> Result<(usize, usize), String> {
    let mut pairs = 0;
    let mut nonempty = 0;
    for (name, _) in atlas_names().into_iter().filter(|&(_, n)| n <= 48) {
        let g = atlas_build(name).map_err(|e| e.to_string())?;
        let orders: Vec<u32> = g
            .order_histogram()
            .keys()
            .copied()
            .filter(|&m| m > 1)
            .collect();
        for r in 2..=4 {
            for cones in multisets(&orders, r) {
                let sig = Signature::sphere(&cones);
                let expected = oracle(&g, &sig);
                if searched(&g, &sig) != expected {
                    return Err(format!("{name} {sig}: search and oracle disagree"));
                }
                pairs += 1;
                nonempty += usize::from(!expected.is_empty());
            }
        }
    }
    Ok((pairs, nonempty))
}

pub const ROWS: [(&str, &str); 13] = [
    ("psl27", "0:2,3,7"),
    ("g96", "0:2,3,8"),
    ("g48a", "0:3,3,4"),
    ("z2xs4", "0:2,4,6"),
    ("g32a", "0:2,4,8"),
    ("z2xd285", "0:2,4,8"),
    ("sl23", "0:3,3,6"),
    ("d_2_12_5", "0:2,4,12"),
    ("z2xa4", "0:2,6,6"),
    ("s4", "0:3,4,4"),
    ("s4", "0:2,2,2,3"),
    ("s5", "0:2,4,5"),
    ("d3xd3", "0:2,2,2,3"),
];

/// Every vector of every table row.
pub fn all_vectors() -> &'static [GeneratingVector] {
    static POOL: OnceLock<Vec<GeneratingVector>> = OnceLock::new();
    POOL.get_or_init(|| {
        ROWS.iter()
            .flat_map(|&(name, sig)| {
                search_vectors(
                    &sig.parse().unwrap(),
                    &atlas_build(name).unwrap(),
                    usize::MAX,
                )
            })
            .collect()
    })
}

/// Applies braid moves `(position, forward)` and checks that every
/// intermediate vector is a surface-kernel vector with the same cone orders
/// and the same axis-closure verdict, and that undoing the moves returns the
/// start.
pub fn check_braid_sequence(
    start: &GeneratingVector,
    moves: &[(usize, bool)],
) -> Result<(), String> {
    let g = start.group.as_ref();
    let verdict = axis_closure_check(&cone_data(start), g).is_obstruction();
    let mut v = start.clone();
    let r = v.cones.len();
    let moves: Vec<(usize, bool)> = moves.iter().map(|&(i, f)| (i % (r - 1), f)).collect();
    for &(i, forward) in &moves {
        v = if forward {
            v.braid_move(i)
        } else {
            v.braid_move_inverse(i)
        }
        .map_err(|e| e.to_string())?;
        v.is_surface_kernel().map_err(|e| format!("{v:?}: {e}"))?;
        if v.signature.normalized() != start.signature.normalized() {
            return Err(format!("{v:?}: cone orders changed"));
        }
        if axis_closure_check(&cone_data(&v), g).is_obstruction() != verdict {
            return Err(format!("{v:?}: axis-closure verdict changed"));
        }
    }
    for &(i, forward) in moves.iter().rev() {
        v = if forward {
            v.braid_move_inverse(i)
        } else {
            v.braid_move(i)
        }
        .map_err(|e| e.to_string())?;
    }
    if &v != start {
        return Err(format!("undoing the moves gives {v:?}"));
    }
    Ok(())
}

/// Exact Euler identities over every table vector:
/// chi of an induced action is the index times chi of the original (for all
/// index-2 and cyclic subgroups, plus the whole group and the trivial one),
/// and every handlebody pattern found has euler number chi/2.
/// Returns (induced actions checked, patterns checked).
pub fn check_euler_identities() -> Result<(usize, usize), String> {
    let mut induced = 0;
    let mut patterns = 0;
    for v in all_vectors() {
        let g = v.group.as_ref();
        let chi = v.signature.orb_euler();
        let genus = v.surface_genus().map_err(|e| e.to_string())?;
        let mut subgroups: Vec<Vec<Elem>> = index2_restrictions(v)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|(h, _)| h)
            .collect();
        for m in [2, 3, 4, 6, 7, 8, 12] {
            subgroups.extend(cyclic_subgroups(g, m).into_iter().map(|(_, h)| h));
        }
        subgroups.push(g.elements().collect());
        subgroups.push(vec![g.identity()]);
        for h in subgroups {
            let a = induced_action(v, &h).map_err(|e| format!("{v:?}: {e}"))?;
            let index = (g.order() / h.len()) as i64;
            if a.signature().orb_euler() != chi * Rational::from_integer(index) {
                return Err(format!(
                    "{v:?}: chi not multiplicative for a subgroup of order {}",
                    h.len()
                ));
            }
            if a.surface_genus != genus
                || a.signature().rh_genus(h.len() as u64).ok() != Some(genus)
            {
                return Err(format!("{v:?}: induced action covers a different surface"));
            }
            if a.cones
                .iter()
                .any(|c| a.group.element_order(c.generator) != c.order)
            {
                return Err(format!("{v:?}: local generator of the wrong order"));
            }
            if h.len() == g.order() && a.signature().normalized() != v.signature.normalized() {
                return Err(format!("{v:?}: whole group changes the signature"));
            }
            if h.len() == 1 && (a.quotient_genus != genus || !a.cones.is_empty()) {
                return Err(format!("{v:?}: trivial subgroup does not give the surface"));
            }
            induced += 1;
        }
        if v.signature.cones.len() == 4 {
            if let HandlebodySearch::Found(cert) = search_handlebody(v, 2, 6) {
                let half = chi / Rational::from_integer(2);
                if pattern_euler(&cert.pattern) != half
                    || cert.euler != half
                    || half >= Rational::zero()
                {
                    return Err(format!("{v:?}: pattern euler {} is not chi/2", cert.euler));
                }
                patterns += 1;
            }
        }
    }
    Ok((induced, patterns))
}
