//! Named groups used by the genus-3 and genus-4 tables.
//!
//! Every group is realised as a permutation group. Semidirect products with
//! abelian kernel `N` act affinely on the points of `N`; the metacyclic
//! groups `D_{m,n,k}` act on `Z_n` (affinely) together with a tag copy of `Z_m`.
//! Extensions of a non-abelian `N` by an involution act on the points of `N`.

use std::sync::Arc;

use super::{Elem, FiniteGroup, Perm};
use crate::error::{Error, Result};
use crate::fuchsian::{search_vectors, Signature};

/// Fixed atlas entries, with orders. `z<n>`, `d<n>` and `d_<m>_<n>_<k>` are
/// also accepted by [`atlas_build`].
pub fn atlas_names() -> Vec<(&'static str, usize)> {
    vec![
        ("psl27", 168),
        ("g96", 96),
        ("g48a", 48),
        ("z2xs4", 48),
        ("g32a", 32),
        ("z2xd285", 32),
        ("sl23", 24),
        ("d_2_12_5", 24),
        ("z2xa4", 24),
        ("s4", 24),
        ("a4", 12),
        ("a5", 60),
        ("s5", 120),
        ("d3xd3", 36),
        ("d_2_8_5", 16),
    ]
}

pub fn atlas_build(name: &str) -> Result<Arc<FiniteGroup>> {
    let unknown = || Error::UnknownAtlas(name.to_string());
    let group = match name {
        "a4" => alternating(name, 4)?,
        "s4" => symmetric(name, 4)?,
        "a5" => alternating(name, 5)?,
        "s5" => symmetric(name, 5)?,
        "psl27" => psl27()?,
        "sl23" => sl23()?,
        "z2xs4" => with_central_z2(name, &symmetric("s4", 4)?)?,
        "z2xa4" => with_central_z2(name, &alternating("a4", 4)?)?,
        "d3xd3" => {
            let d3 = dihedral("d3", 3)?;
            direct_product(name, &d3, &d3)?
        }
        "g96" => validated(
            affine(name, [4, 4], &[[[0, 3], [1, 3]], [[0, 1], [1, 0]]])?,
            "0:2,3,8",
            3,
        )?,
        "g48a" => validated(affine(name, [4, 4], &[[[0, 3], [1, 3]]])?, "0:3,3,4", 3)?,
        "g32a" => g32a()?.1,
        "d_2_8_5" => metacyclic(name, 2, 8, 5)?,
        "z2xd285" => validated(z2xd285()?, "0:2,4,8", 3)?,
        "d_2_12_5" => metacyclic(name, 2, 12, 5)?,
        _ => {
            if let Some(rest) = name.strip_prefix("d_") {
                let parts: Vec<u32> = rest
                    .split('_')
                    .map(|t| t.parse::<u32>().map_err(|_| unknown()))
                    .collect::<Result<_>>()?;
                match parts[..] {
                    [m, n, k] if m >= 1 && n >= 1 => metacyclic(name, m, n, k)?,
                    _ => return Err(unknown()),
                }
            } else if let Some(n) = name.strip_prefix('z').and_then(|t| t.parse::<u32>().ok()) {
                if n == 0 {
                    return Err(unknown());
                }
                cyclic(name, n)?
            } else if let Some(n) = name.strip_prefix('d').and_then(|t| t.parse::<u32>().ok()) {
                if n < 2 {
                    return Err(unknown());
                }
                dihedral(name, n)?
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(Arc::new(group))
}

/// The involutive automorphism of `Z2 x Z8` used for `g32a`, as the matrix
/// `[[p, q], [r, s]]` acting on columns `(x mod 2, y mod 8)`.
pub fn g32a_selected_action() -> Result<[[u32; 2]; 2]> {
    Ok(g32a()?.0)
}

fn cyclic(name: &str, n: u32) -> Result<FiniteGroup> {
    let n = n as usize;
    let cycle: Vec<usize> = (1..=n).collect();
    let g = if n == 1 {
        Perm::identity(1)
    } else {
        Perm::from_cycles(n, &[&cycle])?
    };
    FiniteGroup::from_generators(name, n, &[g])
}

fn dihedral(name: &str, n: u32) -> Result<FiniteGroup> {
    if n == 2 {
        let a = Perm::parse("(12)(34)", 4)?;
        let b = Perm::parse("(13)(24)", 4)?;
        return FiniteGroup::from_generators(name, 4, &[a, b]);
    }
    let n = n as usize;
    let rot = Perm::from_images((0..n).map(|i| (i + 1) % n).collect())?;
    let refl = Perm::from_images((0..n).map(|i| (n - i) % n).collect())?;
    FiniteGroup::from_generators(name, n, &[rot, refl])
}

fn symmetric(name: &str, n: usize) -> Result<FiniteGroup> {
    let cycle: Vec<usize> = (1..=n).collect();
    let a = Perm::from_cycles(n, &[&cycle])?;
    let b = Perm::from_cycles(n, &[&[1, 2]])?;
    FiniteGroup::from_generators(name, n, &[a, b])
}

fn alternating(name: &str, n: usize) -> Result<FiniteGroup> {
    let gens: Vec<Perm> = (3..=n)
        .map(|k| Perm::from_cycles(n, &[&[1, 2, k]]))
        .collect::<Result<_>>()?;
    FiniteGroup::from_generators(name, n, &gens)
}

/// PSL(2,7) acting on the projective line over F7 (points 0..6, then infinity).
fn psl27() -> Result<FiniteGroup> {
    let inf = 7;
    let translate = Perm::from_images(
        (0..8)
            .map(|z| if z == inf { inf } else { (z + 1) % 7 })
            .collect(),
    )?;
    let inv7 = |z: usize| (1..7).find(|w| z * w % 7 == 1).expect("unit");
    let invert = Perm::from_images(
        (0..8)
            .map(|z| match z {
                0 => inf,
                7 => 0,
                _ => (7 - inv7(z)) % 7,
            })
            .collect(),
    )?;
    FiniteGroup::from_generators("psl27", 8, &[translate, invert])
}

/// SL(2,3) acting on the eight non-zero row vectors of F3^2 by `v -> v M`.
fn sl23() -> Result<FiniteGroup> {
    let vectors: Vec<(usize, usize)> = (0..3)
        .flat_map(|a| (0..3).map(move |b| (a, b)))
        .filter(|&v| v != (0, 0))
        .collect();
    let act = |m: [[usize; 2]; 2]| -> Result<Perm> {
        Perm::from_images(
            vectors
                .iter()
                .map(|&(a, b)| {
                    let w = (
                        (a * m[0][0] + b * m[1][0]) % 3,
                        (a * m[0][1] + b * m[1][1]) % 3,
                    );
                    vectors.iter().position(|&v| v == w).expect("nonzero image")
                })
                .collect(),
        )
    };
    let gens = [act([[1, 1], [0, 1]])?, act([[0, 2], [1, 0]])?];
    FiniteGroup::from_generators("sl23", 8, &gens)
}

/// `G x Z2` with the Z2 factor `c = (k+1 k+2)` on two extra points.
fn with_central_z2(name: &str, g: &FiniteGroup) -> Result<FiniteGroup> {
    let z2 = cyclic("z2", 2)?;
    direct_product(name, g, &z2)
}

fn direct_product(name: &str, a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
    let degree = a.degree() + b.degree();
    let mut gens: Vec<Perm> = a
        .generators()
        .iter()
        .map(|&x| a.perm(x).embed(0, degree))
        .collect();
    gens.extend(
        b.generators()
            .iter()
            .map(|&x| b.perm(x).embed(a.degree(), degree)),
    );
    FiniteGroup::from_generators(name, degree, &gens)
}

/// `D_{m,n,k} = <x, y | x^m = y^n = 1, x y x^-1 = y^k>`, generators `[x, y]`.
fn metacyclic(name: &str, m: u32, n: u32, k: u32) -> Result<FiniteGroup> {
    let (mu, nu, ku) = (m as u64, n as u64, k as u64 % n as u64);
    let power = (0..mu).fold(1u64 % nu, |acc, _| acc * ku % nu);
    if power != 1 % nu {
        return Err(Error::InconsistentMetacyclic { m, n, k });
    }
    let (n, m) = (n as usize, m as usize);
    let k_inv = (0..n)
        .find(|&w| (w as u64 * ku) % nu == 1 % nu)
        .expect("k is a unit mod n");
    let degree = n + m;
    let y = Perm::from_images(
        (0..degree)
            .map(|t| if t < n { (t + 1) % n } else { t })
            .collect(),
    )?;
    let x = Perm::from_images(
        (0..degree)
            .map(|t| {
                if t < n {
                    t * k_inv % n
                } else {
                    n + (t - n + 1) % m
                }
            })
            .collect(),
    )?;
    FiniteGroup::from_generators(name, degree, &[x, y])
}

/// `Z2 ⋉ D_{2,8,5}` through the involution `x -> x y^4, y -> x y^3`. The
/// direct product with `Z2` has abelianisation `Z2 x Z2 x Z4`, so it is not
/// 2-generated and carries no `(2,4,8)` action.
fn z2xd285() -> Result<FiniteGroup> {
    let n = metacyclic("d_2_8_5", 2, 8, 5)?;
    let (x, y) = (n.generators()[0], n.generators()[1]);
    let images = [n.mul(x, n.pow(y, 4)), n.mul(x, n.pow(y, 3))];
    extend_by_involution("z2xd285", &n, &images)
}

/// `N ⋊ <s>` for an involutive automorphism `s` of `N`, given by the images of
/// `N`'s generators, acting on the points of `N` by `m -> s^e(m) n`.
fn extend_by_involution(name: &str, n: &FiniteGroup, images: &[Elem]) -> Result<FiniteGroup> {
    let bad = |reason: &str| Error::AtlasValidation {
        name: name.to_string(),
        reason: reason.to_string(),
    };
    let gens = n.generators();
    if images.len() != gens.len() {
        return Err(bad("one image per generator is required"));
    }
    let mut map: Vec<Option<Elem>> = vec![None; n.order()];
    map[0] = Some(n.identity());
    let mut stack = vec![n.identity()];
    while let Some(a) = stack.pop() {
        let fa = map[a.index()].expect("visited");
        for (&g, &im) in gens.iter().zip(images) {
            let (b, fb) = (n.mul(a, g), n.mul(fa, im));
            match map[b.index()] {
                None => {
                    map[b.index()] = Some(fb);
                    stack.push(b);
                }
                Some(old) if old != fb => return Err(bad("images do not define a homomorphism")),
                Some(_) => {}
            }
        }
    }
    let map: Vec<Elem> = map
        .into_iter()
        .map(|e| e.expect("generators generate"))
        .collect();
    let involutive = map
        .iter()
        .enumerate()
        .all(|(i, e)| map[e.index()].index() == i);
    if !involutive || map.iter().enumerate().all(|(i, e)| e.index() == i) {
        return Err(bad("not an involutive automorphism"));
    }
    let k = n.order();
    let right = |g: Elem| {
        Perm::from_images(
            (0..k)
                .map(|t| n.mul(Elem::from_index(t), g).index())
                .collect(),
        )
    };
    let mut perms: Vec<Perm> = gens.iter().map(|&g| right(g)).collect::<Result<_>>()?;
    perms.push(Perm::from_images(map.iter().map(|e| e.index()).collect())?);
    FiniteGroup::from_generators(name, k, &perms)
}

/// `(Z_a x Z_b) ⋊ <matrices>` acting affinely on the `a*b` points of the kernel.
/// Matrices act on column vectors; each must be a well-defined automorphism.
fn affine(name: &str, moduli: [usize; 2], matrices: &[[[usize; 2]; 2]]) -> Result<FiniteGroup> {
    let [a, b] = moduli;
    let point = |x: usize, y: usize| (x % a) * b + (y % b);
    let mut gens = vec![
        Perm::from_images((0..a * b).map(|p| point(p / b + 1, p % b)).collect())?,
        Perm::from_images((0..a * b).map(|p| point(p / b, p % b + 1)).collect())?,
    ];
    for mat in matrices {
        if !is_automorphism(moduli, mat) {
            return Err(Error::AtlasValidation {
                name: name.to_string(),
                reason: format!("{mat:?} is not an automorphism of Z{a} x Z{b}"),
            });
        }
        gens.push(Perm::from_images(
            (0..a * b)
                .map(|p| {
                    let (x, y) = (p / b, p % b);
                    point(mat[0][0] * x + mat[0][1] * y, mat[1][0] * x + mat[1][1] * y)
                })
                .collect(),
        )?);
    }
    FiniteGroup::from_generators(name, a * b, &gens)
}

fn is_automorphism([a, b]: [usize; 2], mat: &[[usize; 2]; 2]) -> bool {
    let image = |x: usize, y: usize| {
        (
            (mat[0][0] * x + mat[0][1] * y) % a,
            (mat[1][0] * x + mat[1][1] * y) % b,
        )
    };
    // well defined on representatives, additive, bijective
    let well_defined = (0..2 * a).all(|x| (0..2 * b).all(|y| image(x, y) == image(x % a, y % b)));
    let mut hit = vec![false; a * b];
    for x in 0..a {
        for y in 0..b {
            let (u, v) = image(x, y);
            hit[u * b + v] = true;
        }
    }
    well_defined && hit.iter().all(|&h| h)
}

fn validated(group: FiniteGroup, signature: &str, genus: u32) -> Result<FiniteGroup> {
    let name = group.name().to_string();
    let sig: Signature = signature.parse()?;
    let arc = Arc::new(group);
    let found = !search_vectors(&sig, &arc, 1).is_empty();
    let ok = found && sig.rh_genus(arc.order() as u64).ok() == Some(genus);
    if !ok {
        return Err(Error::AtlasValidation {
            name,
            reason: format!("no surface-kernel {sig} vector of genus {genus}"),
        });
    }
    Ok(Arc::try_unwrap(arc).expect("sole owner"))
}

/// Scans involutive automorphisms of `Z2 x Z8` in matrix order and keeps the
/// first whose semidirect product admits a genus-3 `(2,4,8)` vector and is
/// not `Z2 x D_{2,8,5}` (compared by element-order histogram).
fn g32a() -> Result<([[u32; 2]; 2], FiniteGroup)> {
    let sig: Signature = "0:2,4,8".parse()?;
    let other = z2xd285()?.order_histogram();
    for p in 0..2 {
        for q in 0..2 {
            for r in [0, 4] {
                for s in 0..8 {
                    let mat = [[p, q], [r, s]];
                    if !is_automorphism([2, 8], &mat) || mat == [[1, 0], [0, 1]] {
                        continue;
                    }
                    let square = [
                        [(p * p + q * r) % 2, (p * q + q * s) % 2],
                        [(r * p + s * r) % 8, (r * q + s * s) % 8],
                    ];
                    if square != [[1, 0], [0, 1]] {
                        continue;
                    }
                    let group = Arc::new(affine("g32a", [2, 8], &[mat])?);
                    if group.order_histogram() == other
                        || search_vectors(&sig, &group, 1).is_empty()
                    {
                        continue;
                    }
                    let mat32 = mat.map(|row| row.map(|x| x as u32));
                    return Ok((mat32, Arc::try_unwrap(group).expect("sole owner")));
                }
            }
        }
    }
    Err(Error::AtlasValidation {
        name: "g32a".into(),
        reason: "no involution of Aut(Z2 x Z8) gives a genus-3 (2,4,8) action".into(),
    })
}
