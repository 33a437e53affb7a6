use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

pub(crate) type Exps = SmallVec<[u16; 12]>;

/// An exponent vector together with its weighted degree.
///
/// Ordering is graded reverse-lexicographic with respect to the weighted
/// degree: higher degree is larger, ties are broken by the last variable in
/// which the exponents differ (smaller exponent there is larger).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub(crate) deg: u32,
    pub(crate) exps: Exps,
}

impl Monomial {
    pub(crate) fn from_parts(deg: u32, exps: Exps) -> Self {
        Monomial { deg, exps }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    /// Weighted degree.
    pub fn degree(&self) -> u32 {
        self.deg
    }

    /// Ordinary (unweighted) total degree.
    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a + b)
            .collect();
        Monomial { deg: self.deg + other.deg, exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        let exps = other
            .exps
            .iter()
            .zip(self.exps.iter())
            .map(|(a, b)| a - b)
            .collect();
        Monomial { deg: other.deg - self.deg, exps }
    }

    /// Least common multiple; the weighted degree is recomputed from `weights`.
    pub fn lcm(&self, other: &Monomial, weights: &[u32]) -> Monomial {
        let exps: Exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| *a.max(b))
            .collect();
        let deg = exps.iter().zip(weights).map(|(&e, &w)| e as u32 * w).sum();
        Monomial { deg, exps }
    }

    /// True when the two monomials share no variable.
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Bitmask of the variables appearing with positive exponent.
    pub fn support(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |acc, (i, _)| acc | (1 << i))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.deg.cmp(&other.deg) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.exps.iter().rev().zip(other.exps.iter().rev()) {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{i}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}
