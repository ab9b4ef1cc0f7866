//! Permutations of `{1, …, n}`.
//!
//! Points are 1-based in all text I/O and 0-based internally. Products follow
//! one global convention: `p * q` (and [`Perm::compose`]) applies `q` first,
//! then `p`.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm { images: (0..degree as u32).collect() }
    }

    /// Builds a permutation from 0-based images.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            let i = img as usize;
            if i >= n || seen[i] {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation from 1-based images (`images[i-1]` is the image of `i`).
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let zero: Option<Vec<u32>> =
            images.iter().map(|&p| p.checked_sub(1).map(|p| p as u32)).collect();
        match zero {
            Some(v) => Perm::from_images(v),
            None => Err(Error::NotAPermutation(format!("{images:?}"))),
        }
    }

    /// Product of disjoint cycles given with 1-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for &p in cycle.iter() {
                if p == 0 || p > degree {
                    return Err(Error::PointOutOfRange { point: p, degree });
                }
                if seen[p - 1] {
                    return Err(Error::RepeatedPoint { point: p });
                }
                seen[p - 1] = true;
            }
            for (k, &p) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u32;
            }
        }
        Ok(Perm { images })
    }

    /// Parses cycle notation such as `"(1 2 3)(4,5)"`. Unnamed points are fixed.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let err = |reason: &str| Error::CycleSyntax { text: text.to_string(), reason: reason.to_string() };
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut chars = text.chars().peekable();
        loop {
            while matches!(chars.peek(), Some(c) if c.is_whitespace() || *c == ',') {
                chars.next();
            }
            match chars.next() {
                None => break,
                Some('(') => {}
                Some(_) => return Err(err("expected '('")),
            }
            let mut cycle = Vec::new();
            let mut number = String::new();
            let mut closed = false;
            for c in chars.by_ref() {
                match c {
                    '0'..='9' => number.push(c),
                    ' ' | '\t' | '\n' | '\r' | ',' | ')' => {
                        if !number.is_empty() {
                            cycle.push(number.parse::<usize>().map_err(|_| err("bad point"))?);
                            number.clear();
                        }
                        if c == ')' {
                            closed = true;
                            break;
                        }
                    }
                    _ => return Err(err("unexpected character")),
                }
            }
            if !closed {
                return Err(err("unterminated cycle"));
            }
            cycles.push(cycle);
        }
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Perm::from_cycles(degree, &refs)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based image of a 0-based point.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// "Apply `other` first, then `self`".
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, other: &Perm) -> Perm {
        Perm { images: other.images.iter().map(|&i| self.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.degree()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u32 == img)
    }

    /// Disjoint cycles of length ≥ 2, 0-based, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1, |acc, c| lcm(acc, c.len()))
    }

    pub fn pow(&self, exp: usize) -> Perm {
        let mut result = Perm::identity(self.degree());
        for _ in 0..exp {
            result = self.compose_unchecked(&result);
        }
        result
    }

    /// Whether the 1-based `point` is moved.
    pub fn moves(&self, point: usize) -> bool {
        self.apply(point - 1) != point - 1
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl Mul for &Perm {
    type Output = Perm;

    /// Panics on degree mismatch; use [`Perm::compose`] to get an error instead.
    fn mul(self, rhs: &Perm) -> Perm {
        self.compose(rhs).expect("permutation degrees differ")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]{}", self.degree(), self)
    }
}

/// Parses `"<degree>:<cycles>"`, e.g. `"4:(1 2)(3 4)"`.
impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (deg, cycles) = s.split_once(':').ok_or_else(|| Error::CycleSyntax {
            text: s.to_string(),
            reason: "expected <degree>:<cycles>".to_string(),
        })?;
        let degree = deg.trim().parse::<usize>().map_err(|_| Error::CycleSyntax {
            text: s.to_string(),
            reason: "bad degree".to_string(),
        })?;
        Perm::parse_cycles(cycles, degree)
    }
}
