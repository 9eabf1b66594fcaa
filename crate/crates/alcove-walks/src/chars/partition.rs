//! Partitions with integer or (uniformly) half-integer parts, stored
//! doubled. Even orthogonal characters allow a negative last part.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    /// doubled parts, non-increasing
    pub parts2: Vec<i64>,
}

impl Partition {
    pub fn new(parts2: Vec<i64>) -> Result<Self> {
        if parts2.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid("partition parts must be non-increasing"));
        }
        let n = parts2.len();
        if n >= 2 && parts2[n - 1] < 0 && parts2[n - 2] < parts2[n - 1].abs() {
            return Err(Error::invalid(
                "negative last part must satisfy |last| <= previous",
            ));
        }
        if parts2
            .iter()
            .any(|p| p.rem_euclid(2) != parts2.first().map(|f| f.rem_euclid(2)).unwrap_or(0))
        {
            return Err(Error::invalid(
                "parts must be uniformly integral or half-integral",
            ));
        }
        Ok(Partition { parts2 })
    }

    pub fn from_ints(parts: &[i64]) -> Self {
        Partition::new(parts.iter().map(|p| 2 * p).collect()).expect("valid integer partition")
    }

    /// `(value^count)` padded with zeros to `len` parts (value doubled).
    pub fn rectangle2(value2: i64, count: usize, len: usize) -> Self {
        let mut parts2 = vec![value2; count];
        parts2.resize(len, 0);
        Partition { parts2 }
    }

    pub fn len(&self) -> usize {
        self.parts2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts2.iter().all(|&p| p == 0)
    }
}

/// All non-increasing sequences of `n` integer doubled values in
/// `[min2, max2]` with a fixed step of 2 (integral parts) — the enumeration
/// oracle behind the branching checks.
pub fn partitions_in_box2(max2: i64, min2: i64, n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(max2: i64, min2: i64, n: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let hi = cur.last().copied().unwrap_or(max2);
        let mut v = hi;
        while v >= min2 {
            cur.push(v);
            rec(max2, min2, n, cur, out);
            cur.pop();
            v -= 2;
        }
    }
    rec(max2, min2, n, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_enumeration_counts() {
        // partitions with 2 parts each in {0,1,2}: C(2+2,2) = 6
        assert_eq!(partitions_in_box2(4, 0, 2).len(), 6);
        // 3 parts in {0,1}: 4
        assert_eq!(partitions_in_box2(2, 0, 3).len(), 4);
    }

    #[test]
    fn validity() {
        assert!(Partition::new(vec![4, 2, 2]).is_ok());
        assert!(Partition::new(vec![2, 4]).is_err());
        assert!(Partition::new(vec![4, 2, -2]).is_ok());
        assert!(Partition::new(vec![4, 2, -4]).is_err());
        assert!(Partition::new(vec![3, 1]).is_ok());
        assert!(Partition::new(vec![3, 2]).is_err());
    }
}
