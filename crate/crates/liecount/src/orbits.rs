//! Nilpotent orbit enumeration for classical types and distinguished-orbit
//! counts per simple type.
//!
//! Classical orbits are indexed by partitions with parity conditions on
//! multiplicities; in type D the very even partitions each carry two orbits.
//! Distinguished orbits are those with no repeated parts (the regular orbit
//! alone in type A); the exceptional counts are fixed smalltable data.

use crate::roots::SimpleType;
use crate::{Error, Result};

/// Weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "parts must be positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn has_repeated_parts(&self) -> bool {
        self.parts.windows(2).any(|w| w[0] == w[1])
    }

    /// All parts even.
    pub fn is_very_even(&self) -> bool {
        !self.parts.is_empty() && self.parts.iter().all(|p| p % 2 == 0)
    }

    fn multiplicity_ok(&self, even_parts_even_mult: bool) -> bool {
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let mut mult = 0;
            while i < self.parts.len() && self.parts[i] == p {
                mult += 1;
                i += 1;
            }
            let constrained = if even_parts_even_mult { p % 2 == 0 } else { p % 2 == 1 };
            if constrained && mult % 2 != 0 {
                return false;
            }
        }
        true
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", self.parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Enumerate all partitions of `n` in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(n: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: current.clone() });
            return;
        }
        for part in (1..=max.min(n)).rev() {
            current.push(part);
            rec(n - part, part, current, out);
            current.pop();
        }
    }
    rec(n, n, &mut current, &mut out);
    out
}

/// One orbit entry; `doubled` marks a type-D very even partition carrying
/// two orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitEntry {
    pub partition: Partition,
    pub doubled: bool,
}

/// Nilpotent orbit list of a classical simple type.
#[derive(Debug, Clone)]
pub struct OrbitList {
    pub entries: Vec<OrbitEntry>,
}

impl OrbitList {
    /// Total orbit count, doubled entries counted twice.
    pub fn total_orbits(&self) -> usize {
        self.entries.iter().map(|e| if e.doubled { 2 } else { 1 }).sum()
    }

    /// Count of distinguished entries (no repeated parts; doubled entries
    /// never qualify since distinct even parts violate the multiplicity
    /// condition).
    pub fn distinguished(&self) -> usize {
        self.entries.iter().filter(|e| !e.partition.has_repeated_parts() && !e.doubled).count()
    }
}

/// Nilpotent orbits of the classical simple type.
pub fn nilpotent_orbits(t: SimpleType) -> Result<OrbitList> {
    let (n, filter_even_mult_even, flag_very_even): (usize, Option<bool>, bool) = match t.family {
        'A' => (t.rank + 1, None, false),
        'B' => (2 * t.rank + 1, Some(true), false),
        'C' => (2 * t.rank, Some(false), false),
        'D' => (2 * t.rank, Some(true), true),
        f => {
            return Err(Error::Precondition(format!(
                "nilpotent orbit enumeration requires a classical type, got {f}{}",
                t.rank
            )))
        }
    };
    let entries = partitions(n)
        .into_iter()
        .filter(|p| match filter_even_mult_even {
            None => true,
            Some(even) => p.multiplicity_ok(even),
        })
        .map(|p| {
            let doubled = flag_very_even && p.is_very_even();
            OrbitEntry { partition: p, doubled }
        })
        .collect();
    Ok(OrbitList { entries })
}

/// Count partitions of `n` into distinct parts, optionally restricted to a
/// parity class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityFilter {
    Any,
    Odd,
    Even,
}

pub fn distinct_part_count(n: usize, filter: ParityFilter) -> u64 {
    fn rec(n: usize, max: usize, filter: ParityFilter) -> u64 {
        if n == 0 {
            return 1;
        }
        let mut total = 0;
        for part in (1..=max.min(n)).rev() {
            let ok = match filter {
                ParityFilter::Any => true,
                ParityFilter::Odd => part % 2 == 1,
                ParityFilter::Even => part % 2 == 0,
            };
            if ok {
                total += rec(n - part, part - 1, filter);
            }
        }
        total
    }
    rec(n, n, filter)
}

/// Number of distinguished nilpotent orbits of a simple type.
///
/// A: 1 (the regular orbit). B_n: partitions of 2n+1 into distinct odd
/// parts. C_n: partitions of n into distinct parts. D_n: partitions of 2n
/// into distinct odd parts. Exceptional types are table data.
pub fn distinguished_count(t: SimpleType) -> u64 {
    match t.family {
        'A' => 1,
        'B' => distinct_part_count(2 * t.rank + 1, ParityFilter::Odd),
        'C' => distinct_part_count(t.rank, ParityFilter::Any),
        'D' => distinct_part_count(2 * t.rank, ParityFilter::Odd),
        'G' => 2,
        'F' => 4,
        'E' => match t.rank {
            6 => 3,
            7 => 6,
            8 => 11,
            _ => unreachable!("invalid E rank"),
        },
        _ => unreachable!("invalid family"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{f_bd, f_c};
    use num_bigint::BigInt;

    fn st(family: char, rank: usize) -> SimpleType {
        SimpleType::new(family, rank).unwrap()
    }

    #[test]
    fn a1_orbits() {
        let orbits = nilpotent_orbits(st('A', 1)).unwrap();
        assert_eq!(orbits.total_orbits(), 2);
        let parts: Vec<_> = orbits.entries.iter().map(|e| e.partition.parts().to_vec()).collect();
        assert!(parts.contains(&vec![2]));
        assert!(parts.contains(&vec![1, 1]));
    }

    #[test]
    fn c2_orbits() {
        let orbits = nilpotent_orbits(st('C', 2)).unwrap();
        assert_eq!(orbits.total_orbits(), 4);
        let parts: Vec<_> = orbits.entries.iter().map(|e| e.partition.parts().to_vec()).collect();
        assert_eq!(parts.len(), 4);
        for expect in [vec![4], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]] {
            assert!(parts.contains(&expect), "missing {expect:?}");
        }
    }

    #[test]
    fn d4_orbits_with_doubling() {
        let orbits = nilpotent_orbits(st('D', 4)).unwrap();
        assert_eq!(orbits.total_orbits(), 12);
        let doubled: Vec<_> = orbits
            .entries
            .iter()
            .filter(|e| e.doubled)
            .map(|e| e.partition.parts().to_vec())
            .collect();
        assert_eq!(doubled.len(), 2);
        assert!(doubled.contains(&vec![4, 4]));
        assert!(doubled.contains(&vec![2, 2, 2, 2]));
    }

    #[test]
    fn distinguished_examples() {
        assert_eq!(distinguished_count(st('A', 7)), 1);
        assert_eq!(distinguished_count(st('E', 8)), 11);
        assert_eq!(distinguished_count(st('C', 3)), 2); // {3},{2,1}
        assert_eq!(distinguished_count(st('G', 2)), 2);
        assert_eq!(distinguished_count(st('F', 4)), 4);
        assert_eq!(distinguished_count(st('E', 6)), 3);
        assert_eq!(distinguished_count(st('E', 7)), 6);
    }

    #[test]
    fn distinct_part_count_examples() {
        assert_eq!(distinct_part_count(0, ParityFilter::Any), 1);
        assert_eq!(distinct_part_count(8, ParityFilter::Odd), 2); // {1,7},{3,5}
        assert_eq!(distinct_part_count(5, ParityFilter::Any), 3); // {5},{4,1},{3,2}
    }

    #[test]
    fn distinguished_matches_orbit_list() {
        for rank in 2..6 {
            for family in ['B', 'C', 'D'] {
                if family == 'D' && rank < 3 {
                    continue;
                }
                let t = st(family, rank);
                let orbits = nilpotent_orbits(t).unwrap();
                assert_eq!(
                    orbits.distinguished() as u64,
                    distinguished_count(t),
                    "family {family} rank {rank}"
                );
            }
        }
    }

    #[test]
    fn distinguished_matches_series_coefficients() {
        let fbd = f_bd(24);
        for n in 2..10 {
            assert_eq!(
                BigInt::from(distinguished_count(st('B', n))),
                fbd.coefficient(2 * n + 1).unwrap(),
                "B_{n} vs f_BD"
            );
        }
        for n in 3..12 {
            assert_eq!(
                BigInt::from(distinguished_count(st('D', n))),
                fbd.coefficient(2 * n).unwrap(),
                "D_{n} vs f_BD"
            );
        }
        let fc = f_c(12);
        for n in 2..12 {
            assert_eq!(
                BigInt::from(distinguished_count(st('C', n))),
                fc.coefficient(n).unwrap(),
                "C_{n} vs f_C"
            );
        }
    }

    #[test]
    fn total_orbit_counts_brute_force() {
        // type A total = p(n)
        assert_eq!(nilpotent_orbits(st('A', 3)).unwrap().total_orbits(), partitions(4).len());
        // B2: partitions of 5 with even parts of even multiplicity
        assert_eq!(nilpotent_orbits(st('B', 2)).unwrap().total_orbits(), 4);
        let non_classical = nilpotent_orbits(st('G', 2));
        assert!(non_classical.is_err());
    }
}
