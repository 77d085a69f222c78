//! Exact integer-matrix and lattice arithmetic.
//!
//! Everything here is arbitrary-precision; fundamental-group computations
//! reduce to Smith normal form of small integer matrices.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix { rows, cols, entries }
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::new(rows, cols, entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, entries: rows.concat() }
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    /// Exact determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.entries.clone();
        let at = |m: &Vec<BigInt>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if at(&m, k, k).is_zero() {
                let swap = (k + 1..n).find(|&i| !at(&m, i, k).is_zero());
                match swap {
                    Some(i) => {
                        for j in 0..n {
                            m.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (at(&m, k, k) * at(&m, i, j) - at(&m, i, k) * at(&m, k, j)) / &prev;
                    m[i * n + j] = v;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = at(&m, k, k);
        }
        sign * at(&m, n - 1, n - 1)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

/// Result of Smith normal form: `u * m * v = s` with `u`, `v` unimodular and
/// `s` diagonal with a nonnegative divisibility chain.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows.min(self.s.cols);
        (0..n).map(|i| self.s[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Invariant factors of a finitely generated abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianInvariants {
    /// Factors > 1 in divisibility order.
    pub factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty() && self.free_rank == 0
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn factors_u64(&self) -> Vec<u64> {
        self.factors.iter().map(|f| u64::try_from(f).expect("factor fits u64")).collect()
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        write!(f, "{}", parts.join(" x "))
    }
}

fn position_of_min_pivot(m: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in from..m.rows {
        for j in from..m.cols {
            let e = &m[(i, j)];
            if e.is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    let b = m[(bi, bj)].abs();
                    let c = e.abs();
                    // minimal absolute value; ties broken by (row, col) order,
                    // which the scan order already guarantees
                    if c < b {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Smith normal form by gcd elimination with minimal-pivot selection.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);

    let swap_rows = |s: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        for j in 0..s.cols {
            let t = s[(a, j)].clone();
            s[(a, j)] = s[(b, j)].clone();
            s[(b, j)] = t;
        }
        for j in 0..u.cols {
            let t = u[(a, j)].clone();
            u[(a, j)] = u[(b, j)].clone();
            u[(b, j)] = t;
        }
    };
    let swap_cols = |s: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        for i in 0..s.rows {
            let t = s[(i, a)].clone();
            s[(i, a)] = s[(i, b)].clone();
            s[(i, b)] = t;
        }
        for i in 0..v.rows {
            let t = v[(i, a)].clone();
            v[(i, a)] = v[(i, b)].clone();
            v[(i, b)] = t;
        }
    };
    // row_i -= q * row_k (also applied to u)
    let row_op = |s: &mut IntMatrix, u: &mut IntMatrix, i: usize, k: usize, q: &BigInt| {
        for j in 0..s.cols {
            let sub = q * &s[(k, j)];
            s[(i, j)] -= sub;
        }
        for j in 0..u.cols {
            let sub = q * &u[(k, j)];
            u[(i, j)] -= sub;
        }
    };
    let col_op = |s: &mut IntMatrix, v: &mut IntMatrix, j: usize, k: usize, q: &BigInt| {
        for i in 0..s.rows {
            let sub = q * &s[(i, k)];
            s[(i, j)] -= sub;
        }
        for i in 0..v.rows {
            let sub = q * &v[(i, k)];
            v[(i, j)] -= sub;
        }
    };

    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = position_of_min_pivot(&s, t) else { break };
        swap_rows(&mut s, &mut u, t, pi);
        swap_cols(&mut s, &mut v, t, pj);

        // clear row and column t; pivot shrinks at each round, so this terminates
        loop {
            let mut dirty = false;
            for i in t + 1..s.rows {
                if !s[(i, t)].is_zero() {
                    let q = s[(i, t)].div_floor(&s[(t, t)]);
                    row_op(&mut s, &mut u, i, t, &q);
                    if !s[(i, t)].is_zero() {
                        swap_rows(&mut s, &mut u, t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..s.cols {
                if !s[(t, j)].is_zero() {
                    let q = s[(t, j)].div_floor(&s[(t, t)]);
                    col_op(&mut s, &mut v, j, t, &q);
                    if !s[(t, j)].is_zero() {
                        swap_cols(&mut s, &mut v, t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        t += 1;
    }

    // normalize signs
    for i in 0..n {
        if s[(i, i)].is_negative() {
            for j in 0..s.cols {
                let neg = -s[(i, j)].clone();
                s[(i, j)] = neg;
            }
            for j in 0..u.cols {
                let neg = -u[(i, j)].clone();
                u[(i, j)] = neg;
            }
        }
    }

    // enforce the divisibility chain d_i | d_{i+1}
    loop {
        let mut fixed = true;
        for i in 0..n.saturating_sub(1) {
            let a = s[(i, i)].clone();
            let b = s[(i + 1, i + 1)].clone();
            if a.is_zero() && !b.is_zero() {
                swap_rows(&mut s, &mut u, i, i + 1);
                swap_cols(&mut s, &mut v, i, i + 1);
                fixed = false;
                continue;
            }
            if !a.is_zero() && !b.is_zero() && !(&b % &a).is_zero() {
                // add column i+1 to column i, then re-eliminate the 2x2 block
                let minus_one = -BigInt::one();
                col_op(&mut s, &mut v, i, i + 1, &minus_one);
                let g = a.gcd(&b);
                // now s[[i,i],[i+1,i]] = [a, b]; standard gcd dance
                loop {
                    if s[(i + 1, i)].is_zero() {
                        break;
                    }
                    let q = s[(i, i)].div_floor(&s[(i + 1, i)]);
                    row_op(&mut s, &mut u, i, i + 1, &q);
                    swap_rows(&mut s, &mut u, i, i + 1);
                }
                // clear the remaining entry in row i
                if !s[(i, i + 1)].is_zero() {
                    let q = s[(i, i + 1)].div_floor(&s[(i, i)]);
                    debug_assert!((&s[(i, i + 1)] - &q * &s[(i, i)]).is_zero());
                    col_op(&mut s, &mut v, i + 1, i, &q);
                }
                debug_assert_eq!(s[(i, i)].abs(), g);
                if s[(i, i)].is_negative() {
                    for j in 0..s.cols {
                        let neg = -s[(i, j)].clone();
                        s[(i, j)] = neg;
                    }
                    for j in 0..u.cols {
                        let neg = -u[(i, j)].clone();
                        u[(i, j)] = neg;
                    }
                }
                if s[(i + 1, i + 1)].is_negative() {
                    for j in 0..s.cols {
                        let neg = -s[(i + 1, j)].clone();
                        s[(i + 1, j)] = neg;
                    }
                    for j in 0..u.cols {
                        let neg = -u[(i + 1, j)].clone();
                        u[(i + 1, j)] = neg;
                    }
                }
                fixed = false;
            }
        }
        if fixed {
            break;
        }
    }

    SmithDecomposition { u, s, v }
}

/// Invariant factors of `Z^ambient_rank / <generators>`.
pub fn quotient_invariants(generators: &[Vec<BigInt>], ambient_rank: usize) -> Result<AbelianInvariants> {
    for g in generators {
        if g.len() != ambient_rank {
            return Err(Error::Precondition(format!(
                "generator length {} != ambient rank {}",
                g.len(),
                ambient_rank
            )));
        }
    }
    if generators.is_empty() {
        return Ok(AbelianInvariants { factors: vec![], free_rank: ambient_rank });
    }
    let m = IntMatrix::from_rows(generators);
    let snf = smith_normal_form(&m);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let factors = diag.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect();
    Ok(AbelianInvariants { factors, free_rank: ambient_rank - rank })
}

/// Is `v` an integer combination of the basis vectors?
pub fn lattice_member(v: &[BigRational], basis: &[Vec<BigInt>]) -> Result<bool> {
    let rank = v.len();
    for b in basis {
        if b.len() != rank {
            return Err(Error::Precondition("basis vector length mismatch".into()));
        }
    }
    if v.iter().all(|x| x.is_zero()) {
        return Ok(true);
    }
    if basis.is_empty() {
        return Ok(false);
    }
    // x * B = v has an integer solution iff, with U B V = S, the vector
    // w = v V satisfies: w_i / s_i integral where s_i != 0, and w_i = 0 beyond.
    let b = IntMatrix::from_rows(basis);
    let snf = smith_normal_form(&b);
    let n = b.cols;
    let mut w = vec![BigRational::zero(); n];
    for (j, wj) in w.iter_mut().enumerate() {
        for (i, vi) in v.iter().enumerate() {
            *wj += vi * BigRational::from(snf.v[(i, j)].clone());
        }
    }
    let diag = snf.diagonal();
    for (j, wj) in w.iter().enumerate() {
        let s = diag.get(j).cloned().unwrap_or_else(BigInt::zero);
        if s.is_zero() {
            if !wj.is_zero() {
                return Ok(false);
            }
        } else {
            let q = wj / BigRational::from(s);
            if !q.is_integer() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_decomposition(m: &IntMatrix) {
        let snf = smith_normal_form(m);
        let prod = snf.u.mul(m).mul(&snf.v);
        assert_eq!(prod, snf.s, "U*M*V must equal S");
        assert_eq!(snf.u.det().abs(), BigInt::one());
        assert_eq!(snf.v.det().abs(), BigInt::one());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_zero() || (&w[1] % &w[0]).is_zero(), "divisibility chain");
            } else {
                assert!(w[1].is_zero(), "zeros trail the chain");
            }
            assert!(!w[0].is_negative() && !w[1].is_negative());
        }
        // off-diagonal entries vanish
        for i in 0..snf.s.rows {
            for j in 0..snf.s.cols {
                if i != j {
                    assert!(snf.s[(i, j)].is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_identity() {
        let m = IntMatrix::identity(2);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.s, IntMatrix::identity(2));
        check_decomposition(&m);
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        check_decomposition(&m);
    }

    #[test]
    fn snf_2468() {
        let m = IntMatrix::from_i64(2, 2, &[2, 4, 6, 8]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        check_decomposition(&m);
    }

    #[test]
    fn quotient_standard_basis_trivial() {
        let gens = vec![vec![BigInt::from(1), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(1)]];
        let inv = quotient_invariants(&gens, 2).unwrap();
        assert!(inv.is_trivial());
    }

    fn cartan_a(n: usize) -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v: i64 = if i == j {
                            2
                        } else if i.abs_diff(j) == 1 {
                            -1
                        } else {
                            0
                        };
                        BigInt::from(v)
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn quotient_coroot_in_coweight_type_a() {
        // P∨/Q∨ of A_{n-1} is cyclic of order n
        for n in 2..7usize {
            let inv = quotient_invariants(&cartan_a(n - 1), n - 1).unwrap();
            assert_eq!(inv.factors, vec![BigInt::from(n)], "A_{} quotient", n - 1);
            assert_eq!(inv.free_rank, 0);
        }
    }

    #[test]
    fn quotient_d4() {
        // D4 Cartan matrix: branch node 2 (0-indexed 1)
        let rows: Vec<Vec<BigInt>> = vec![
            vec![2, -1, 0, 0],
            vec![-1, 2, -1, -1],
            vec![0, -1, 2, 0],
            vec![0, -1, 0, 2],
        ]
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
        let inv = quotient_invariants(&rows, 4).unwrap();
        assert_eq!(inv.factors, vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn member_zero_and_half() {
        let basis = vec![vec![BigInt::from(1), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(1)]];
        let zero = vec![BigRational::zero(), BigRational::zero()];
        assert!(lattice_member(&zero, &basis).unwrap());
        let half = vec![
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(1), BigInt::from(2)),
        ];
        assert!(!lattice_member(&half, &basis).unwrap());
    }

    #[test]
    fn member_a1_fundamental_coweight() {
        // omega∨ = alpha∨/2 is not in the coroot lattice of A1
        let basis = vec![vec![BigInt::from(1)]];
        let w = vec![BigRational::new(BigInt::from(1), BigInt::from(2))];
        assert!(!lattice_member(&w, &basis).unwrap());
    }

    proptest! {
        #[test]
        fn snf_random(entries in proptest::collection::vec(-9i64..10, 9)) {
            let m = IntMatrix::from_i64(3, 3, &entries);
            check_decomposition(&m);
        }

        #[test]
        fn quotient_basis_invariance(entries in proptest::collection::vec(-4i64..5, 6), steps in proptest::collection::vec((0usize..2, 0usize..2, -2i64..3), 4)) {
            // applying unimodular row operations to the generators leaves the quotient unchanged
            let gens: Vec<Vec<BigInt>> = entries.chunks(3).map(|c| c.iter().map(|&e| BigInt::from(e)).collect()).collect();
            let mut tweaked = gens.clone();
            for (i, j, c) in steps {
                if i != j {
                    let add: Vec<BigInt> = tweaked[j].iter().map(|x| x * BigInt::from(c)).collect();
                    for (t, a) in tweaked[i].iter_mut().zip(add) { *t += a; }
                }
            }
            let a = quotient_invariants(&gens, 3).unwrap();
            let b = quotient_invariants(&tweaked, 3).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn torsion_order_matches_det(entries in proptest::collection::vec(-6i64..7, 9)) {
            let m = IntMatrix::from_i64(3, 3, &entries);
            let det = m.det().abs();
            prop_assume!(!det.is_zero());
            let gens: Vec<Vec<BigInt>> = (0..3).map(|i| m.row(i).to_vec()).collect();
            let inv = quotient_invariants(&gens, 3).unwrap();
            prop_assert_eq!(inv.torsion_order(), det);
            prop_assert_eq!(inv.free_rank, 0);
        }
    }
}
