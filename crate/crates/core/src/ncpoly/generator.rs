use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::Error;

/// Generator families, listed in their global sort order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Quantum matrix entries `a_ij`.
    A,
    /// Free Pfaffian inputs `b_I`.
    B,
    /// Λ_p generators.
    Y,
    /// Λ_q generators.
    X,
}

impl Family {
    fn rank(self) -> u64 {
        self as u64
    }

    fn from_rank(r: u64) -> Family {
        match r {
            0 => Family::A,
            1 => Family::B,
            2 => Family::Y,
            _ => Family::X,
        }
    }

    fn letter(self) -> char {
        match self {
            Family::A => 'a',
            Family::B => 'b',
            Family::Y => 'y',
            Family::X => 'x',
        }
    }
}

pub const MAX_ARITY: usize = 6;

/// A generator packed into a single `u64` whose integer order is the global
/// generator order: family, then copy tag, then index tuple (lex).
///
/// Layout: family in bits 56..64, copy in 48..56, then up to six index bytes
/// from the most significant end, zero-padded. Indices are 1-based, so
/// padding sorts a proper prefix before its extensions.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(u64);

impl Generator {
    pub fn new(family: Family, copy: u8, index: &[usize]) -> Generator {
        assert!(
            !index.is_empty() && index.len() <= MAX_ARITY,
            "generator arity must be 1..={MAX_ARITY}"
        );
        let mut bits = (family.rank() << 56) | ((copy as u64) << 48);
        for (k, &i) in index.iter().enumerate() {
            assert!((1..=255).contains(&i), "generator index {i} out of range");
            bits |= (i as u64) << (40 - 8 * k);
        }
        Generator(bits)
    }

    pub fn a(i: usize, j: usize) -> Generator {
        Generator::new(Family::A, 0, &[i, j])
    }

    /// Entry of the `copy`-th tensor copy of the matrix algebra.
    pub fn a_copy(copy: u8, i: usize, j: usize) -> Generator {
        Generator::new(Family::A, copy, &[i, j])
    }

    pub fn b(index: &[usize]) -> Generator {
        Generator::new(Family::B, 0, index)
    }

    pub fn x(i: usize) -> Generator {
        Generator::new(Family::X, 0, &[i])
    }

    pub fn y(i: usize) -> Generator {
        Generator::new(Family::Y, 0, &[i])
    }

    pub fn family(self) -> Family {
        Family::from_rank(self.0 >> 56)
    }

    pub fn copy(self) -> u8 {
        ((self.0 >> 48) & 0xff) as u8
    }

    pub fn index(self) -> SmallVec<[usize; MAX_ARITY]> {
        (0..MAX_ARITY)
            .map(|k| ((self.0 >> (40 - 8 * k)) & 0xff) as usize)
            .take_while(|&i| i != 0)
            .collect()
    }

    /// The `k`-th index (0-based position).
    pub fn idx(self, k: usize) -> usize {
        ((self.0 >> (40 - 8 * k)) & 0xff) as usize
    }

    pub fn sort_key(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family().letter())?;
        for _ in 0..self.copy() {
            write!(f, "'")?;
        }
        write!(f, "[")?;
        for (k, i) in self.index().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || Error::Parse(format!("bad generator spelling {s:?}"));
        let mut chars = s.chars();
        let family = match chars.next() {
            Some('a') => Family::A,
            Some('b') => Family::B,
            Some('x') => Family::X,
            Some('y') => Family::Y,
            _ => return Err(err()),
        };
        let rest = chars.as_str();
        let copy = rest.chars().take_while(|&c| c == '\'').count();
        let body = rest[copy..]
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(err)?;
        let index: Vec<usize> = body
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| err())?;
        let arity_ok = match family {
            Family::A => index.len() == 2,
            Family::X | Family::Y => index.len() == 1,
            Family::B => (1..=MAX_ARITY).contains(&index.len()),
        };
        if !arity_ok || copy > 255 || index.iter().any(|&i| i == 0 || i > 255) {
            return Err(err());
        }
        Ok(Generator::new(family, copy as u8, &index))
    }
}

/// A monomial: a product of generators, empty for the unit.
pub type Word = SmallVec<[Generator; 8]>;

/// Graded order on words: by length, then lexicographically.
pub fn graded_cmp(a: &[Generator], b: &[Generator]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_a_then_b_then_y_then_x() {
        let a = Generator::a(3, 3);
        let b = Generator::b(&[1, 2]);
        let y = Generator::y(1);
        let x = Generator::x(1);
        assert!(a < b && b < y && y < x);
        assert!(Generator::a(1, 2) < Generator::a(2, 1));
        assert!(Generator::a(1, 2) < Generator::a_copy(1, 1, 1));
        assert!(Generator::b(&[1, 2]) < Generator::b(&[1, 2, 3]));
        assert!(Generator::b(&[1, 2, 3]) < Generator::b(&[1, 3]));
    }

    #[test]
    fn spelling_roundtrip() {
        for s in ["a[1,2]", "a'[3,1]", "b[1,3]", "b[1,2,5]", "x[2]", "y[4]"] {
            let g: Generator = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        for s in ["a[1]", "c[1]", "x[0]", "b[]", "a[1,2", "x[1,2]"] {
            assert!(s.parse::<Generator>().is_err(), "{s}");
        }
    }

    #[test]
    fn accessors() {
        let g = Generator::b(&[2, 4, 6]);
        assert_eq!(g.family(), Family::B);
        assert_eq!(g.index().as_slice(), &[2, 4, 6]);
        assert_eq!(g.idx(1), 4);
        assert_eq!(Generator::a_copy(1, 2, 3).copy(), 1);
    }
}
