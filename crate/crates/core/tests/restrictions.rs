use std::collections::BTreeMap;

use surface_bounding::fuchsian::{search_vectors, GeneratingVector, Signature};
use surface_bounding::group::{atlas_build, Elem};
use surface_bounding::report::geometric_certificate;
use surface_bounding::subactions::{
    bounds_by_restriction, cyclic_subgroups, cyclic_witness, index2_restrictions, induced_action,
    Inheritance, ParentCertificate,
};

fn vectors(name: &str, sig: &str) -> Vec<GeneratingVector> {
    search_vectors(
        &sig.parse().unwrap(),
        &atlas_build(name).unwrap(),
        usize::MAX,
    )
}

fn sorted_sigs(sigs: impl IntoIterator<Item = Signature>) -> Vec<String> {
    let mut out: Vec<String> = sigs
        .into_iter()
        .map(|s| s.normalized().to_string())
        .collect();
    out.sort();
    out
}

#[test]
fn cyclic_witness_signatures() {
    let cases = [
        ("psl27", "0:2,3,7", 7, "0:7,7,7"),
        ("g96", "0:2,3,8", 8, "0:4,8,8"),
        ("g48a", "0:3,3,4", 4, "0:4,4,4,4"),
        ("g32a", "0:2,4,8", 8, "0:4,8,8"),
        ("z2xd285", "0:2,4,8", 8, "0:4,8,8"),
        ("sl23", "0:3,3,6", 6, "0:2,3,3,6"),
        ("d_2_12_5", "0:2,4,12", 12, "0:2,12,12"),
    ];
    for (name, sig, order, target) in cases {
        // every vector of the row has such a witness, not only the first
        for v in vectors(name, sig) {
            let w = cyclic_witness(&v, order, &target.parse().unwrap()).unwrap();
            let w = w.unwrap_or_else(|| panic!("{name}: no witness for {v:?}"));
            assert_eq!(w.induced.subgroup.len(), order as usize);
            assert_eq!(w.induced.signature().normalized().to_string(), target);
            assert!(w.verdict.is_obstruction());
        }
    }
}

/// A generator `x` of a cyclic subgroup `H` fixes exactly the points whose
/// `H`-orbit is a single point, i.e. the induced cones of order `|H|`. The
/// fixed points are counted independently by the character formula
/// `fix(x) = sum_i |C(x)| / m_i * #{0 < k < m_i : x ~ c_i^k}`.
#[test]
fn cyclic_cones_match_fixed_point_count() {
    let mut compared = 0;
    for (name, sig) in [
        ("psl27", "0:2,3,7"),
        ("g96", "0:2,3,8"),
        ("sl23", "0:3,3,6"),
        ("z2xs4", "0:2,4,6"),
    ] {
        let v = vectors(name, sig).remove(0);
        let g = v.group.as_ref();
        for m in [2, 3, 4, 6, 7, 8] {
            for (x, h) in cyclic_subgroups(g, m) {
                let a = induced_action(&v, &h).unwrap();
                let centralizer = g.elements().filter(|&y| g.mul(y, x) == g.mul(x, y)).count();
                let mut fixed = 0;
                for (&c, &mi) in v.cones.iter().zip(&v.signature.cones) {
                    let conjugate_powers = (1..mi)
                        .filter(|&k| g.are_conjugate(x, g.pow(c, k as i64)).is_some())
                        .count();
                    fixed += centralizer / mi as usize * conjugate_powers;
                }
                let full_orbits = a
                    .cones
                    .iter()
                    .filter(|c| c.order as usize == h.len())
                    .count();
                assert_eq!(full_orbits, fixed, "{name} <{}>", g.format(x));
                compared += 1;
            }
        }
    }
    assert!(compared > 50, "{compared}");
}

#[test]
fn order48_restrictions() {
    let v = vectors("z2xs4", "0:2,4,6").remove(0);
    let r = index2_restrictions(&v).unwrap();
    assert_eq!(r.len(), 3);
    assert_eq!(
        sorted_sigs(r.iter().map(|(_, a)| a.signature())),
        ["0:2,2,2,3", "0:2,6,6", "0:3,4,4"]
    );
    // the subgroup with elements of order 6 is Z2 x A4, the other two are S4
    for (h, a) in &r {
        let hist: BTreeMap<u32, usize> = v.group.histogram_of(h);
        assert_eq!(
            hist.contains_key(&6),
            a.signature().normalized().to_string() == "0:2,6,6"
        );
        assert_eq!(
            hist.contains_key(&4),
            a.signature().normalized().to_string() != "0:2,6,6"
        );
        assert_eq!(a.surface_genus, 3);
    }
}

#[test]
fn cyclic_group_has_no_index2_restrictions() {
    let g = atlas_build("psl27").unwrap();
    let v = vectors("psl27", "0:2,3,7").remove(0);
    let (x, h) = cyclic_subgroups(&g, 7).remove(0);
    let a = induced_action(&v, &h).unwrap();
    assert_eq!(a.signature(), Signature::sphere(&[7, 7, 7]));
    // the Z7 action as a vector in its own right
    let z7 = a.group.clone();
    let w = GeneratingVector::from_cones(z7.clone(), a.cones.iter().map(|c| c.generator).collect());
    assert!(w.is_surface_kernel().is_ok());
    assert!(index2_restrictions(&w).unwrap().is_empty());
    assert_eq!(g.element_order(x), 7);
}

#[test]
fn restriction_of_geometric_certificates() {
    let cert = geometric_certificate("z2xs4", "0:2,4,6").unwrap().unwrap();
    let parent = ParentCertificate::Geometric(Box::new(cert));
    let mut sigs = Vec::new();
    for (h, _) in index2_restrictions(parent.boundary()).unwrap() {
        let b = bounds_by_restriction(&parent, &h).unwrap();
        assert_eq!(b.inherited, Inheritance::Geometric);
        sigs.push(b.induced.signature());
    }
    assert_eq!(sorted_sigs(sigs), ["0:2,2,2,3", "0:2,6,6", "0:3,4,4"]);

    let s5 = geometric_certificate("s5", "0:2,4,5").unwrap().unwrap();
    let parent = ParentCertificate::Geometric(Box::new(s5));
    let (a5, _) = index2_restrictions(parent.boundary()).unwrap().remove(0);
    let b = bounds_by_restriction(&parent, &a5).unwrap();
    assert_eq!(b.induced.group.order(), 60);
    assert_eq!(b.induced.surface_genus, 4);
}

#[test]
fn restriction_refuses_a_broken_parent() {
    let mut cert = geometric_certificate("z2xs4", "0:2,4,6").unwrap().unwrap();
    cert.images[0] = Elem::from_index(0);
    let parent = ParentCertificate::Geometric(Box::new(cert));
    let g = parent.boundary().group.clone();
    assert!(bounds_by_restriction(&parent, &g.elements().collect::<Vec<_>>()).is_err());
}

#[test]
fn trivial_group_bounds_vacuously() {
    let g = atlas_build("a4").unwrap();
    let trivial = std::sync::Arc::new(g.subgroup_group("1", &[g.identity()]).unwrap());
    let v = GeneratingVector {
        group: trivial.clone(),
        signature: "2:".parse().unwrap(),
        hyperbolic: vec![(trivial.identity(), trivial.identity()); 2],
        cones: Vec::new(),
    };
    let b = bounds_by_restriction(&ParentCertificate::Trivial(v), &[trivial.identity()]).unwrap();
    assert_eq!(b.inherited, Inheritance::Trivial);
    assert_eq!(b.induced.quotient_genus, 2);
}
