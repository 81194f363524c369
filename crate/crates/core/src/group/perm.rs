//! Permutations on `{1, ..., n}` (stored 0-based), composed left to right.

use std::fmt;

use crate::error::{Error, Result};

/// A permutation given by its image list. `p.apply(i)` is the image of `i`.
///
/// Products are read left to right: `a.then(&b)` applies `a` first, then `b`.
/// Under this convention `(12345)(12) = (2345)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm(Vec<u16>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u16).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::ParsePermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm(images.into_iter().map(|x| x as u16).collect()))
    }

    /// Builds a permutation from 1-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a == 0 || a > degree || touched[a - 1] {
                    return Err(Error::ParsePermutation(format!("{cycles:?}")));
                }
                touched[a - 1] = true;
                let b = cycle[(i + 1) % cycle.len()];
                if b == 0 || b > degree {
                    return Err(Error::ParsePermutation(format!("{cycles:?}")));
                }
                images[a - 1] = b - 1;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&x| x as usize)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut r = vec![0u16; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            r[x as usize] = i as u16;
        }
        Perm(r)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Places `self` on the points `offset..offset + self.degree()` of a
    /// ground set of size `degree`, fixing everything else.
    pub fn embed(&self, offset: usize, degree: usize) -> Perm {
        assert!(offset + self.degree() <= degree);
        let mut images: Vec<u16> = (0..degree as u16).collect();
        for (i, &x) in self.0.iter().enumerate() {
            images[offset + i] = offset as u16 + x;
        }
        Perm(images)
    }

    /// Non-trivial cycles, 0-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Parses cycle notation on `{1..degree}`: `()`, `(1234)(56)`, or `(1,2,10)`.
    /// Without commas or spaces each character is a single-digit point.
    pub fn parse(text: &str, degree: usize) -> Result<Perm> {
        let bad = || Error::ParsePermutation(text.to_string());
        let s: String = text.trim().to_string();
        if s.is_empty() {
            return Err(bad());
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            if !rest.starts_with('(') {
                return Err(bad());
            }
            let close = rest.find(')').ok_or_else(bad)?;
            let body = rest[1..close].trim();
            rest = &rest[close + 1..];
            if body.is_empty() {
                continue;
            }
            let points: Vec<usize> = if body.contains(',') || body.contains(char::is_whitespace) {
                body.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                    .collect::<Result<_>>()?
            };
            cycles.push(points);
        }
        // Cycles are composed left to right, so overlapping cycles are allowed.
        let mut acc = Perm::identity(degree);
        for c in &cycles {
            let single = Perm::from_cycles(degree, &[c.as_slice()]).map_err(|_| bad())?;
            acc = acc.then(&single);
        }
        Ok(acc)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        let compact = self.degree() <= 9;
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if !compact && i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_to_right_identities() {
        let p = |s| Perm::parse(s, 5).unwrap();
        assert_eq!(p("(12345)").then(&p("(12)")), p("(2345)"));
        assert_eq!(p("(12)(34)").then(&p("(135)")), p("(12345)"));
    }

    #[test]
    fn parse_and_print() {
        let p = Perm::parse("(1234)(56)", 6).unwrap();
        assert_eq!(p.to_string(), "(1234)(56)");
        let q = Perm::parse("(1,2,10)", 12).unwrap();
        assert_eq!(q.to_string(), "(1,2,10)");
        assert_eq!(Perm::parse("()", 3).unwrap(), Perm::identity(3));
        assert!(Perm::parse("(17)", 5).is_err());
        assert!(Perm::parse("12", 5).is_err());
    }

    #[test]
    fn inverse_and_embed() {
        let p = Perm::parse("(1342)", 4).unwrap();
        assert!(p.then(&p.inverse()).is_identity());
        let e = p.embed(2, 6);
        assert_eq!(e.to_string(), "(3564)");
    }
}
