//! Root systems, affine diagrams with marks, bounded Weyl-group
//! enumeration, and graded Weyl traces on flag-variety cohomology.
//!
//! Conventions. Roots are stored by their expansion in the simple roots
//! (`coords`) together with their values on the simple coroots
//! (`pairings`); the Cartan matrix entry `a[i][j]` is `<alpha_j,
//! alpha_i^vee>`. Weyl elements act on coroot coordinates. No irrational
//! normalization appears anywhere: inner products go through the
//! symmetrized Cartan matrix.

use crate::caps::Caps;
use crate::lattice::IntMatrix;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

/// One simple factor: family letter and rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleType {
    pub family: char,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(family: char, rank: usize) -> Result<Self> {
        let ok = match family {
            'A' => rank >= 1,
            'B' => rank >= 2,
            'C' => rank >= 2,
            'D' => rank >= 3,
            'E' => (6..=8).contains(&rank),
            'F' => rank == 4,
            'G' => rank == 2,
            _ => false,
        };
        if !ok {
            return Err(Error::InvalidRank { family, rank });
        }
        Ok(SimpleType { family, rank })
    }

    /// Cartan matrix with `a[i][j] = <alpha_j, alpha_i^vee>`, Bourbaki
    /// numbering.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let link = |a: &mut Vec<Vec<i64>>, i: usize, j: usize, down: i64, up: i64| {
            a[i][j] = down;
            a[j][i] = up;
        };
        match self.family {
            'A' => {
                for i in 0..n.saturating_sub(1) {
                    link(&mut a, i, i + 1, -1, -1);
                }
            }
            'B' => {
                for i in 0..n - 2 {
                    link(&mut a, i, i + 1, -1, -1);
                }
                // alpha_n short: <alpha_n, alpha_{n-1}^vee> = -1,
                // <alpha_{n-1}, alpha_n^vee> = -2
                link(&mut a, n - 2, n - 1, -1, -2);
            }
            'C' => {
                for i in 0..n - 2 {
                    link(&mut a, i, i + 1, -1, -1);
                }
                // alpha_n long
                link(&mut a, n - 2, n - 1, -2, -1);
            }
            'D' => {
                for i in 0..n - 2 {
                    link(&mut a, i, i + 1, -1, -1);
                }
                if n >= 3 {
                    // both tail nodes hang off node n-2
                    a[n - 2][n - 3] = 0;
                    a[n - 3][n - 2] = 0;
                    link(&mut a, n - 3, n - 2, -1, -1);
                    link(&mut a, n - 3, n - 1, -1, -1);
                }
            }
            'E' => {
                // path 1-3-4-5-6(-7)(-8); node 2 attached to node 4
                let path: Vec<usize> = std::iter::once(0).chain(2..n).collect();
                for w in path.windows(2) {
                    link(&mut a, w[0], w[1], -1, -1);
                }
                link(&mut a, 1, 3, -1, -1);
            }
            'F' => {
                link(&mut a, 0, 1, -1, -1);
                // alpha_1, alpha_2 long; alpha_3, alpha_4 short
                link(&mut a, 1, 2, -1, -2);
                link(&mut a, 2, 3, -1, -1);
            }
            'G' => {
                // alpha_1 long, alpha_2 short; theta = 2a1 + 3a2
                link(&mut a, 0, 1, -1, -3);
            }
            _ => unreachable!(),
        }
        // D fix-up above clobbers nothing for n=3: nodes 0-1, 0-2
        a
    }

    /// Fundamental degrees of the Weyl group.
    pub fn degrees(&self) -> Vec<usize> {
        let n = self.rank;
        match self.family {
            'A' => (2..=n + 1).collect(),
            'B' | 'C' => (1..=n).map(|i| 2 * i).collect(),
            'D' => {
                let mut d: Vec<usize> = (1..n).map(|i| 2 * i).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
            'G' => vec![2, 6],
            'F' => vec![2, 6, 8, 12],
            'E' => match n {
                6 => vec![2, 5, 6, 8, 9, 12],
                7 => vec![2, 6, 8, 10, 12, 14, 18],
                8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
                _ => unreachable!(),
            },
            _ => unreachable!(),
        }
    }

    pub fn weyl_order(&self) -> u128 {
        self.degrees().iter().map(|&d| d as u128).product()
    }
}

impl std::fmt::Display for SimpleType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// A root, on the ambient rank: expansion in simple roots plus values on
/// the simple coroots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    pub coords: Vec<i64>,
    pub pairings: Vec<i64>,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.coords.iter().any(|&c| c > 0)
    }

    pub fn negated(&self) -> Root {
        Root {
            coords: self.coords.iter().map(|c| -c).collect(),
            pairings: self.pairings.iter().map(|p| -p).collect(),
        }
    }

    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }
}

/// A (possibly reducible) root system with a fixed base.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub factors: Vec<SimpleType>,
    pub rank: usize,
    /// Block-diagonal Cartan matrix, `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    pub cartan: Vec<Vec<i64>>,
    /// Symmetrizers: `(alpha_i, alpha_i)/2`, normalized to minimal positive
    /// integers per factor.
    pub sym: Vec<i64>,
    pub roots: Vec<Root>,
    /// Node index ranges per factor.
    pub factor_ranges: Vec<std::ops::Range<usize>>,
}

/// Reflection closure from the Cartan matrix.
pub fn build(types: &[SimpleType]) -> Result<RootSystem> {
    for t in types {
        SimpleType::new(t.family, t.rank)?;
    }
    let rank: usize = types.iter().map(|t| t.rank).sum();
    let mut cartan = vec![vec![0i64; rank]; rank];
    let mut ranges = Vec::new();
    let mut offset = 0;
    for t in types {
        let block = t.cartan_matrix();
        for i in 0..t.rank {
            for j in 0..t.rank {
                cartan[offset + i][offset + j] = block[i][j];
            }
        }
        ranges.push(offset..offset + t.rank);
        offset += t.rank;
    }

    // symmetrizers: d_i * a[i][j] = d_j * a[j][i], min 1 per factor
    let mut sym = vec![0i64; rank];
    for range in &ranges {
        let start = range.start;
        let mut d = vec![BigRational::zero(); range.len()];
        d[0] = BigRational::one();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for j in 0..range.len() {
                if i != j && cartan[start + i][start + j] != 0 && d[j].is_zero() {
                    // d_j = d_i * a[i][j] / a[j][i]
                    d[j] = &d[i]
                        * BigRational::new(
                            BigInt::from(cartan[start + i][start + j]),
                            BigInt::from(cartan[start + j][start + i]),
                        );
                    queue.push_back(j);
                }
            }
        }
        let denom_lcm = d
            .iter()
            .map(|x| x.denom().clone())
            .fold(BigInt::one(), |acc, q| num_integer::lcm(acc, q));
        let ints: Vec<BigInt> = d.iter().map(|x| x.numer() * &denom_lcm / x.denom()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| num_integer::gcd(acc, v.clone()));
        for (k, v) in ints.iter().enumerate() {
            sym[start + k] = i64::try_from(&(v / &g)).expect("small symmetrizer");
        }
    }

    // reflection closure
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Root> = VecDeque::new();
    for i in 0..rank {
        let mut coords = vec![0i64; rank];
        coords[i] = 1;
        let pairings = (0..rank).map(|k| cartan[k][i]).collect();
        let root = Root { coords, pairings };
        seen.insert(root.coords.clone());
        queue.push_back(root);
    }
    let mut roots = Vec::new();
    while let Some(r) = queue.pop_front() {
        for i in 0..rank {
            let p = r.pairings[i];
            if p == 0 {
                continue;
            }
            let mut coords = r.coords.clone();
            coords[i] -= p;
            if seen.contains(&coords) {
                continue;
            }
            let pairings = (0..rank).map(|k| r.pairings[k] - p * cartan[k][i]).collect();
            seen.insert(coords.clone());
            queue.push_back(Root { coords, pairings });
        }
        roots.push(r.clone());
        let neg = r.negated();
        if seen.insert(neg.coords.clone()) {
            roots.push(neg);
        }
    }
    roots.sort_by(|a, b| a.coords.cmp(&b.coords));

    Ok(RootSystem { factors: types.to_vec(), rank, cartan, sym, roots, factor_ranges: ranges })
}

impl RootSystem {
    pub fn num_positive_roots(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut coords = vec![0i64; self.rank];
        coords[i] = 1;
        let pairings = (0..self.rank).map(|k| self.cartan[k][i]).collect();
        Root { coords, pairings }
    }

    /// Inner product `(a, b)` through the symmetrized Cartan matrix.
    pub fn inner(&self, a: &Root, b: &Root) -> i64 {
        let mut acc = 0i64;
        for (u, &cu) in a.coords.iter().enumerate() {
            if cu == 0 {
                continue;
            }
            for (v, &cv) in b.coords.iter().enumerate() {
                if cv == 0 {
                    continue;
                }
                acc += cu * self.sym[u] * self.cartan[u][v] * cv;
            }
        }
        acc
    }

    /// `(beta, beta)/2`.
    pub fn half_norm(&self, beta: &Root) -> i64 {
        let n = self.inner(beta, beta);
        debug_assert_eq!(n % 2, 0);
        n / 2
    }

    /// `<gamma, beta^vee>`, always an integer.
    pub fn pair_with_coroot(&self, gamma: &Root, beta: &Root) -> i64 {
        let num = self.inner(gamma, beta);
        let d = self.half_norm(beta);
        debug_assert_eq!(num % d, 0);
        num / d
    }

    /// Coroot coordinates of `beta^vee` in the simple-coroot basis.
    pub fn coroot_coords(&self, beta: &Root) -> Vec<i64> {
        let d = self.half_norm(beta);
        beta.coords
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                let num = c * self.sym[j];
                debug_assert_eq!(num % d, 0);
                num / d
            })
            .collect()
    }

    /// Coweight coordinates (pairings with all simple roots) of a vector
    /// given in coroot coordinates.
    pub fn coroot_to_coweight(&self, y: &[i64]) -> Vec<i64> {
        (0..self.rank)
            .map(|j| (0..self.rank).map(|k| self.cartan[k][j] * y[k]).sum())
            .collect()
    }

    /// Reflection `s_beta` applied to `gamma`.
    pub fn reflect(&self, gamma: &Root, beta: &Root) -> Root {
        let c = self.pair_with_coroot(gamma, beta);
        let coords: Vec<i64> =
            gamma.coords.iter().zip(&beta.coords).map(|(g, b)| g - c * b).collect();
        let pairings =
            gamma.pairings.iter().zip(&beta.pairings).map(|(g, b)| g - c * b).collect();
        Root { coords, pairings }
    }

    /// Highest root of the given factor (unique root of maximal height).
    pub fn highest_root(&self, factor: usize) -> Root {
        let range = &self.factor_ranges[factor];
        self.roots
            .iter()
            .filter(|r| range.clone().any(|i| r.coords[i] != 0))
            .max_by_key(|r| r.height())
            .expect("factor has roots")
            .clone()
    }

    /// Rows of the inverse Cartan matrix: fundamental coweights in coroot
    /// coordinates, `<alpha_i, w_j^vee> = delta_ij`.
    pub fn fundamental_coweights(&self) -> Vec<Vec<BigRational>> {
        let n = self.rank;
        // Gauss-Jordan on [A | I] over the rationals
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            BigRational::from(BigInt::from(self.cartan[i][j]))
                        } else if j - n == i {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero()).expect("Cartan invertible");
            m.swap(col, pivot);
            let inv = m[col][col].clone();
            for j in 0..2 * n {
                m[col][j] = &m[col][j] / &inv;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for j in 0..2 * n {
                        let sub = &f * &m[col][j];
                        m[r][j] -= sub;
                    }
                }
            }
        }
        // A^{-1} rows give the coweights: row j of A^{-1}
        (0..n).map(|j| (0..n).map(|k| m[j][n + k].clone()).collect()).collect()
    }
}

/// Affine diagram of one simple factor: node 0 is the affine node, nodes
/// `1..=rank` are the simple roots; marks are the coefficients of the
/// highest root with the affine mark 1.
#[derive(Debug, Clone)]
pub struct AffineFactorDiagram {
    pub marks: Vec<u64>,
    pub adjacency: Vec<Vec<usize>>,
    /// Coordinates of theta in the factor's simple roots.
    pub theta: Vec<i64>,
}

#[derive(Debug, Clone)]
pub struct AffineDiagram {
    pub factors: Vec<AffineFactorDiagram>,
}

/// Affine diagram with marks for every simple factor.
pub fn affine_diagram(rs: &RootSystem) -> AffineDiagram {
    let mut factors = Vec::new();
    for (f, range) in rs.factor_ranges.iter().enumerate() {
        let theta_root = rs.highest_root(f);
        let theta: Vec<i64> = range.clone().map(|i| theta_root.coords[i]).collect();
        let r = range.len();
        let mut marks = vec![1u64; r + 1];
        for (k, &c) in theta.iter().enumerate() {
            marks[k + 1] = u64::try_from(c).expect("positive marks");
        }
        // adjacency: node 0 is -theta; others are the simple roots
        let mut nodes: Vec<Root> = vec![theta_root.negated()];
        for i in range.clone() {
            nodes.push(rs.simple_root(i));
        }
        let mut adjacency = vec![Vec::new(); r + 1];
        for i in 0..=r {
            for j in 0..=r {
                if i != j && rs.pair_with_coroot(&nodes[i], &nodes[j]) != 0 {
                    adjacency[i].push(j);
                }
            }
        }
        factors.push(AffineFactorDiagram { marks, adjacency, theta });
    }
    AffineDiagram { factors }
}

/// Finite Weyl group given by its full element list: matrices acting on
/// coroot coordinates, sorted for determinism.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    pub rank: usize,
    pub elements: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    pub generators: Vec<usize>,
    pub identity: usize,
}

fn mat_mul(rank: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; rank * rank];
    for i in 0..rank {
        for k in 0..rank {
            let v = a[i * rank + k];
            if v == 0 {
                continue;
            }
            for j in 0..rank {
                out[i * rank + j] += v * b[k * rank + j];
            }
        }
    }
    out
}

/// Weyl group order of a product system.
pub fn weyl_order(rs: &RootSystem) -> u128 {
    rs.factors.iter().map(|t| t.weyl_order()).product()
}

/// Full enumeration of the Weyl group, refused when the order formula
/// exceeds `cap` so callers can fall back to order-only computations.
pub fn enumerate_weyl(rs: &RootSystem, cap: u128) -> Result<WeylGroup> {
    let order = weyl_order(rs);
    if order > cap {
        return Err(Error::OrderExceedsCap { order, cap });
    }
    let rank = rs.rank;
    // simple reflections on coroot coordinates:
    // (s_i y)_k = y_k - delta_{k,i} * sum_j a[j][i] y_j
    let mut gens = Vec::new();
    for i in 0..rank {
        let mut m = vec![0i64; rank * rank];
        for k in 0..rank {
            m[k * rank + k] = 1;
        }
        for j in 0..rank {
            m[i * rank + j] -= rs.cartan[j][i];
        }
        gens.push(m);
    }
    let mut id = vec![0i64; rank * rank];
    for k in 0..rank {
        id[k * rank + k] = 1;
    }
    let mut seen: HashSet<Vec<i64>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    let mut elements = Vec::new();
    while let Some(m) = queue.pop_front() {
        for g in &gens {
            let next = mat_mul(rank, &m, g);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
        elements.push(m);
    }
    debug_assert_eq!(elements.len() as u128, order);
    elements.sort();
    let index: HashMap<Vec<i64>, usize> =
        elements.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let generators = gens.iter().map(|g| index[g]).collect();
    let mut idm = vec![0i64; rank * rank];
    for k in 0..rank {
        idm[k * rank + k] = 1;
    }
    let identity = index[&idm];
    Ok(WeylGroup { rank, elements, index, generators, identity })
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let m = mat_mul(self.rank, &self.elements[a], &self.elements[b]);
        self.index[&m]
    }

    pub fn inverse(&self, a: usize) -> usize {
        // finite group: some power is the identity
        let mut acc = a;
        let mut prev = self.identity;
        while acc != self.identity {
            prev = acc;
            acc = self.mul(acc, a);
        }
        if a == self.identity {
            self.identity
        } else {
            prev
        }
    }

    pub fn apply(&self, w: usize, y: &[BigRational]) -> Vec<BigRational> {
        let m = &self.elements[w];
        (0..self.rank)
            .map(|i| {
                let mut acc = BigRational::zero();
                for (j, yj) in y.iter().enumerate() {
                    if m[i * self.rank + j] != 0 {
                        acc += yj * BigRational::from(BigInt::from(m[i * self.rank + j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sign(&self, w: usize) -> i64 {
        let m = IntMatrix::from_i64(self.rank, self.rank, &self.elements[w]);
        let d = m.det();
        i64::try_from(&d).expect("determinant is +-1")
    }

    /// Subgroup generated by the given element indices.
    pub fn subgroup(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut set = BTreeSet::from([self.identity]);
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    /// Normalizer of a subgroup given as an element set.
    pub fn normalizer(&self, sub: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.order())
            .filter(|&g| {
                let gi = self.inverse(g);
                sub.iter().all(|&s| sub.contains(&self.mul(self.mul(g, s), gi)))
            })
            .collect()
    }
}

/// Polynomial helpers over BigInt (dense, ascending powers).
pub(crate) mod poly {
    use num_bigint::BigInt;
    use num_traits::Zero;

    pub fn trim(p: &mut Vec<BigInt>) {
        while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
            p.pop();
        }
    }

    pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(&mut out);
        out
    }

    /// Exact division, panics if the remainder is nonzero.
    pub fn div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
        let mut rem = num.to_vec();
        trim(&mut rem);
        let mut den = den.to_vec();
        trim(&mut den);
        let dl = den.len();
        assert!(dl >= 1 && !den[dl - 1].is_zero());
        if rem.len() < dl {
            assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
            return vec![BigInt::zero()];
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dl + 1];
        for k in (0..quot.len()).rev() {
            let lead = rem[k + dl - 1].clone();
            let c = &lead / &den[dl - 1];
            assert_eq!(&c * &den[dl - 1], lead, "non-exact polynomial division");
            quot[k] = c.clone();
            for (j, d) in den.iter().enumerate() {
                let sub = &c * d;
                rem[k + j] -= sub;
            }
        }
        assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
        trim(&mut quot);
        quot
    }

    pub fn eval(p: &[BigInt], x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in p.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// `det(I - q*M)` as a polynomial in `q`, by expansion along the first
/// active row with memoization over column subsets.
fn det_one_minus_qm(rank: usize, m: &[i64]) -> Vec<BigInt> {
    // entries of I - qM are degree<=1 polynomials; recursive Laplace
    fn minor(
        rank: usize,
        m: &[i64],
        row: usize,
        cols: u32,
        memo: &mut HashMap<(usize, u32), Vec<BigInt>>,
    ) -> Vec<BigInt> {
        if cols == 0 {
            return vec![BigInt::one()];
        }
        if let Some(p) = memo.get(&(row, cols)) {
            return p.clone();
        }
        let mut acc = vec![BigInt::zero()];
        let mut sign = 1i64;
        for (pos, j) in (0..rank).filter(|j| cols & (1 << j) != 0).enumerate() {
            // entry (row, j) of I - qM
            let constant = if row == j { BigInt::one() } else { BigInt::zero() };
            let linear = BigInt::from(-m[row * rank + j]);
            if !(constant.is_zero() && linear.is_zero()) {
                let entry = vec![constant, linear];
                let sub = minor(rank, m, row + 1, cols & !(1 << j), memo);
                let term = poly::mul(&entry, &sub);
                for (k, c) in term.iter().enumerate() {
                    if acc.len() <= k {
                        acc.resize(k + 1, BigInt::zero());
                    }
                    if sign > 0 {
                        acc[k] += c;
                    } else {
                        acc[k] -= c;
                    }
                }
            }
            let _ = pos;
            sign = -sign;
        }
        poly::trim(&mut acc);
        memo.insert((row, cols), acc.clone());
        acc
    }
    let full: u32 = if rank == 32 { u32::MAX } else { (1u32 << rank) - 1 };
    let mut memo = HashMap::new();
    minor(rank, m, 0, full, &mut memo)
}

/// Graded trace of `w` on the cohomology of the flag variety:
/// `prod_j (1 - q^{d_j}) / det(1 - q w)` as an exact integer polynomial.
///
/// The division is exact; the reflection representation is the span of the
/// coroots of the (semisimple) system.
pub fn graded_trace(rs: &RootSystem, w_matrix: &[i64]) -> Vec<BigInt> {
    let mut num = vec![BigInt::one()];
    for t in &rs.factors {
        for d in t.degrees() {
            let mut f = vec![BigInt::zero(); d + 1];
            f[0] = BigInt::one();
            f[d] = BigInt::from(-1);
            num = poly::mul(&num, &f);
        }
    }
    let den = det_one_minus_qm(rs.rank, w_matrix);
    poly::div_exact(&num, &den)
}

/// Full W-orbit of a rational vector in coroot coordinates.
pub fn weyl_orbit(
    rs: &RootSystem,
    v: &[BigRational],
    cap: usize,
) -> Result<BTreeSet<Vec<BigRational>>> {
    let rank = rs.rank;
    assert_eq!(v.len(), rank);
    let mut orbit: BTreeSet<Vec<BigRational>> = BTreeSet::from([v.to_vec()]);
    let mut queue: VecDeque<Vec<BigRational>> = VecDeque::from([v.to_vec()]);
    while let Some(y) = queue.pop_front() {
        for i in 0..rank {
            // s_i on coroot coordinates
            let mut pair = BigRational::zero();
            for (j, yj) in y.iter().enumerate() {
                if rs.cartan[j][i] != 0 {
                    pair += yj * BigRational::from(BigInt::from(rs.cartan[j][i]));
                }
            }
            let mut next = y.clone();
            next[i] -= pair;
            if !orbit.contains(&next) {
                if orbit.len() >= cap {
                    return Err(Error::OrbitCapExceeded(cap));
                }
                orbit.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(orbit)
}

/// Classified subsystem base: components matched to standard numbering.
#[derive(Debug, Clone)]
pub struct SubsystemBase {
    /// Per component: canonical type and the base roots in standard node
    /// order for that type.
    pub components: Vec<(SimpleType, Vec<Root>)>,
}

impl SubsystemBase {
    pub fn types(&self) -> Vec<SimpleType> {
        self.components.iter().map(|(t, _)| *t).collect()
    }
}

/// Close a seed set of roots under negation and mutual reflection, inside
/// the ambient system.
pub fn subsystem_closure(rs: &RootSystem, seeds: &[Root]) -> Vec<Root> {
    let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: VecDeque<Root> = VecDeque::new();
    for s in seeds {
        if set.insert(s.coords.clone()) {
            queue.push_back(s.clone());
        }
        let n = s.negated();
        if set.insert(n.coords.clone()) {
            queue.push_back(n);
        }
    }
    let mut list: Vec<Root> = queue.iter().cloned().collect();
    let mut i = 0;
    while i < list.len() {
        let mut new_roots = Vec::new();
        for b in &list {
            let r = rs.reflect(&list[i], b);
            if !set.contains(&r.coords) {
                set.insert(r.coords.clone());
                new_roots.push(r);
            }
        }
        list.extend(new_roots);
        i += 1;
    }
    list.sort_by(|a, b| a.coords.cmp(&b.coords));
    list
}

fn is_closed_subsystem(rs: &RootSystem, roots: &[Root]) -> bool {
    let set: HashSet<&Vec<i64>> = roots.iter().map(|r| &r.coords).collect();
    for r in roots {
        if !set.contains(&r.negated().coords) {
            return false;
        }
        for b in roots {
            if !set.contains(&rs.reflect(r, b).coords) {
                return false;
            }
        }
    }
    // all must be ambient roots
    let ambient: HashSet<&Vec<i64>> = rs.roots.iter().map(|r| &r.coords).collect();
    roots.iter().all(|r| ambient.contains(&r.coords))
}

/// Candidate canonical types of a connected diagram of the given rank.
/// Isomorphic duplicates collapse to one name: rank-1 is A1, the rank-2
/// double-bond diagram is C2, the rank-3 fork is A3.
fn candidate_types(rank: usize) -> Vec<SimpleType> {
    let mut out = vec![SimpleType { family: 'A', rank }];
    if rank >= 3 {
        out.push(SimpleType { family: 'B', rank });
        out.push(SimpleType { family: 'C', rank });
    }
    if rank == 2 {
        out.push(SimpleType { family: 'C', rank: 2 });
        out.push(SimpleType { family: 'G', rank: 2 });
    }
    if rank >= 4 {
        out.push(SimpleType { family: 'D', rank });
    }
    if rank == 4 {
        out.push(SimpleType { family: 'F', rank: 4 });
    }
    if (6..=8).contains(&rank) {
        out.push(SimpleType { family: 'E', rank });
    }
    out
}

/// Backtracking diagram isomorphism from component Cartan data to a
/// standard Cartan matrix. Returns, for each standard node, the component
/// node assigned to it.
fn match_diagram(comp_cartan: &[Vec<i64>], standard: &[Vec<i64>]) -> Option<Vec<usize>> {
    let n = comp_cartan.len();
    if standard.len() != n {
        return None;
    }
    let mut assign: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    fn ok(
        assign: &[Option<usize>],
        comp: &[Vec<i64>],
        std_c: &[Vec<i64>],
        pos: usize,
        cand: usize,
    ) -> bool {
        for (other_std, a) in assign.iter().enumerate() {
            if let Some(other_comp) = a {
                if std_c[pos][other_std] != comp[cand][*other_comp]
                    || std_c[other_std][pos] != comp[*other_comp][cand]
                {
                    return false;
                }
            }
        }
        true
    }
    fn rec(
        pos: usize,
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        comp: &[Vec<i64>],
        std_c: &[Vec<i64>],
    ) -> bool {
        let n = comp.len();
        if pos == n {
            return true;
        }
        for cand in 0..n {
            if !used[cand] && ok(assign, comp, std_c, pos, cand) {
                assign[pos] = Some(cand);
                used[cand] = true;
                if rec(pos + 1, assign, used, comp, std_c) {
                    return true;
                }
                assign[pos] = None;
                used[cand] = false;
            }
        }
        false
    }
    if rec(0, &mut assign, &mut used, comp_cartan, standard) {
        Some(assign.into_iter().map(|a| a.unwrap()).collect())
    } else {
        None
    }
}

/// Extract a base for a closed root subsystem and classify each connected
/// component, matching its nodes to the standard numbering of its type.
pub fn extract_base(rs: &RootSystem, roots: &[Root]) -> Result<SubsystemBase> {
    if roots.is_empty() {
        return Ok(SubsystemBase { components: vec![] });
    }
    if !is_closed_subsystem(rs, roots) {
        return Err(Error::NotASubsystem(
            "input not closed under negation and internal reflection".into(),
        ));
    }
    let positives: Vec<&Root> = roots.iter().filter(|r| r.is_positive()).collect();
    let coord_set: HashSet<&Vec<i64>> = positives.iter().map(|r| &r.coords).collect();
    // indecomposables: not a sum of two positive members
    let mut base: Vec<Root> = Vec::new();
    for r in &positives {
        let mut decomposable = false;
        for s in &positives {
            if s.coords == r.coords {
                continue;
            }
            let diff: Vec<i64> = r.coords.iter().zip(&s.coords).map(|(a, b)| a - b).collect();
            if coord_set.contains(&diff) {
                decomposable = true;
                break;
            }
        }
        if !decomposable {
            base.push((*r).clone());
        }
    }
    base.sort_by(|a, b| a.coords.cmp(&b.coords));

    // sub-Cartan on the base
    let m = base.len();
    let mut sub = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in 0..m {
            sub[i][j] = rs.pair_with_coroot(&base[j], &base[i]);
        }
    }
    // connected components
    let mut comp_id = vec![usize::MAX; m];
    let mut ncomp = 0;
    for start in 0..m {
        if comp_id[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp_id[start] = ncomp;
        while let Some(x) = stack.pop() {
            for y in 0..m {
                if comp_id[y] == usize::MAX && sub[x][y] != 0 {
                    comp_id[y] = ncomp;
                    stack.push(y);
                }
            }
        }
        ncomp += 1;
    }

    let mut components = Vec::new();
    for c in 0..ncomp {
        let nodes: Vec<usize> = (0..m).filter(|&i| comp_id[i] == c).collect();
        let k = nodes.len();
        let comp_cartan: Vec<Vec<i64>> =
            nodes.iter().map(|&i| nodes.iter().map(|&j| sub[i][j]).collect()).collect();
        let mut matched = None;
        for t in candidate_types(k) {
            let standard = t.cartan_matrix();
            if let Some(assignment) = match_diagram(&comp_cartan, &standard) {
                let ordered: Vec<Root> =
                    assignment.iter().map(|&local| base[nodes[local]].clone()).collect();
                matched = Some((t, ordered));
                break;
            }
        }
        let Some(found) = matched else {
            return Err(Error::NotASubsystem(format!(
                "component of rank {k} matches no finite type"
            )));
        };
        components.push(found);
    }
    components.sort_by(|a, b| {
        (a.0, a.1.first().map(|r| r.coords.clone()))
            .cmp(&(b.0, b.1.first().map(|r| r.coords.clone())))
    });
    Ok(SubsystemBase { components })
}

/// Isomorphism type of a closed root subsystem, as a sorted multiset.
pub fn classify(rs: &RootSystem, roots: &[Root]) -> Result<Vec<SimpleType>> {
    Ok(extract_base(rs, roots)?.types())
}

/// Convenience: enumerate with default caps.
pub fn enumerate_weyl_default(rs: &RootSystem) -> Result<WeylGroup> {
    enumerate_weyl(rs, Caps::default().weyl_order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple(family: char, rank: usize) -> RootSystem {
        build(&[SimpleType::new(family, rank).unwrap()]).unwrap()
    }

    #[test]
    fn root_counts() {
        assert_eq!(simple('A', 1).roots.len(), 2);
        assert_eq!(simple('A', 2).roots.len(), 6);
        assert_eq!(simple('B', 2).roots.len(), 8);
        assert_eq!(simple('C', 3).roots.len(), 18);
        assert_eq!(simple('D', 4).roots.len(), 24);
        assert_eq!(simple('G', 2).roots.len(), 12);
        assert_eq!(simple('F', 4).roots.len(), 48);
        assert_eq!(simple('E', 6).roots.len(), 72);
        assert_eq!(simple('E', 7).roots.len(), 126);
        assert_eq!(simple('E', 8).roots.len(), 240);
    }

    #[test]
    fn e8_weyl_order_by_degree_product() {
        let t = SimpleType::new('E', 8).unwrap();
        assert_eq!(t.weyl_order(), 696_729_600);
    }

    #[test]
    fn invalid_ranks_rejected() {
        assert!(SimpleType::new('D', 2).is_err());
        assert!(SimpleType::new('E', 5).is_err());
        assert!(SimpleType::new('B', 1).is_err());
        assert!(SimpleType::new('A', 0).is_err());
    }

    #[test]
    fn affine_marks() {
        let a1 = affine_diagram(&simple('A', 1));
        assert_eq!(a1.factors[0].marks, vec![1, 1]);
        let g2 = affine_diagram(&simple('G', 2));
        assert_eq!(g2.factors[0].marks, vec![1, 2, 3]);
        let c2 = affine_diagram(&simple('C', 2));
        assert_eq!(c2.factors[0].marks, vec![1, 2, 1]);
        let c4 = affine_diagram(&simple('C', 4));
        assert_eq!(c4.factors[0].marks, vec![1, 2, 2, 2, 1]);
        let b3 = affine_diagram(&simple('B', 3));
        assert_eq!(b3.factors[0].marks, vec![1, 1, 2, 2]);
        let e8 = affine_diagram(&simple('E', 8));
        assert_eq!(e8.factors[0].marks, vec![1, 2, 3, 4, 6, 5, 4, 3, 2]);
    }

    #[test]
    fn affine_marks_satisfy_theta_relation() {
        // sum_i n_i alpha_i = 0 with alpha_0 = -theta and n_0 = 1
        for (fam, rank) in [('A', 3), ('B', 4), ('C', 3), ('D', 5), ('G', 2), ('F', 4), ('E', 6)] {
            let rs = simple(fam, rank);
            let ad = affine_diagram(&rs);
            let f = &ad.factors[0];
            for (k, &c) in f.theta.iter().enumerate() {
                assert_eq!(c as u64, f.marks[k + 1], "{fam}{rank} node {k}");
            }
        }
    }

    #[test]
    fn weyl_enumeration_small_orders() {
        assert_eq!(enumerate_weyl_default(&simple('A', 2)).unwrap().order(), 6);
        assert_eq!(enumerate_weyl_default(&simple('B', 2)).unwrap().order(), 8);
        assert_eq!(enumerate_weyl_default(&simple('G', 2)).unwrap().order(), 12);
        assert_eq!(enumerate_weyl_default(&simple('F', 4)).unwrap().order(), 1152);
        assert_eq!(enumerate_weyl_default(&simple('D', 4)).unwrap().order(), 192);
    }

    #[test]
    fn e8_exceeds_cap() {
        let rs = simple('E', 8);
        match enumerate_weyl(&rs, 1_000_000) {
            Err(Error::OrderExceedsCap { order, cap }) => {
                assert_eq!(order, 696_729_600);
                assert_eq!(cap, 1_000_000);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn weyl_elements_permute_roots() {
        for (fam, rank) in [('A', 2), ('C', 2), ('G', 2)] {
            let rs = simple(fam, rank);
            let w = enumerate_weyl_default(&rs).unwrap();
            // act on coroots of all roots; the coroot set must be permuted
            let coroots: BTreeSet<Vec<i64>> =
                rs.roots.iter().map(|r| rs.coroot_coords(r)).collect();
            for m in &w.elements {
                let image: BTreeSet<Vec<i64>> = coroots
                    .iter()
                    .map(|y| {
                        (0..rs.rank)
                            .map(|i| (0..rs.rank).map(|j| m[i * rs.rank + j] * y[j]).sum())
                            .collect()
                    })
                    .collect();
                assert_eq!(image, coroots);
                let sign = IntMatrix::from_i64(rs.rank, rs.rank, m).det();
                assert!(sign.clone() * sign == BigInt::one());
            }
        }
    }

    #[test]
    fn graded_trace_a1() {
        let rs = simple('A', 1);
        let w = enumerate_weyl_default(&rs).unwrap();
        let id = w.identity;
        let refl = (0..2).find(|&i| i != id).unwrap();
        assert_eq!(graded_trace(&rs, &w.elements[id]), vec![BigInt::one(), BigInt::one()]);
        assert_eq!(graded_trace(&rs, &w.elements[refl]), vec![BigInt::one(), BigInt::from(-1)]);
    }

    #[test]
    fn graded_trace_identity_is_poincare() {
        for (fam, rank) in [('A', 2), ('C', 2), ('G', 2), ('A', 3)] {
            let rs = simple(fam, rank);
            let w = enumerate_weyl_default(&rs).unwrap();
            let tr = graded_trace(&rs, &w.elements[w.identity]);
            // product of (1 + q + ... + q^{d-1})
            let mut expect = vec![BigInt::one()];
            for t in &rs.factors {
                for d in t.degrees() {
                    let f = vec![BigInt::one(); d];
                    expect = poly::mul(&expect, &f);
                }
            }
            assert_eq!(tr, expect, "{fam}{rank}");
            // value at q=1 is |W|
            assert_eq!(poly::eval(&tr, &BigInt::one()), BigInt::from(w.order()));
        }
    }

    #[test]
    fn trace_averages() {
        // (1/|W|) sum_w trace = 1 and (1/|W|) sum_w sgn(w) trace = q^N
        for (fam, rank) in [('A', 1), ('A', 2), ('A', 3), ('C', 2), ('G', 2)] {
            let rs = simple(fam, rank);
            let w = enumerate_weyl_default(&rs).unwrap();
            let n_pos = rs.num_positive_roots();
            let mut plain = vec![BigInt::zero()];
            let mut signed = vec![BigInt::zero()];
            for i in 0..w.order() {
                let tr = graded_trace(&rs, &w.elements[i]);
                let s = w.sign(i);
                for (k, c) in tr.iter().enumerate() {
                    if plain.len() <= k {
                        plain.resize(k + 1, BigInt::zero());
                        signed.resize(k + 1, BigInt::zero());
                    }
                    plain[k] += c;
                    signed[k] += c * BigInt::from(s);
                }
            }
            let order = BigInt::from(w.order());
            poly::trim(&mut plain);
            assert_eq!(plain, vec![order.clone()], "{fam}{rank} trivial isotypic");
            poly::trim(&mut signed);
            let mut expect = vec![BigInt::zero(); n_pos + 1];
            expect[n_pos] = order;
            assert_eq!(signed, expect, "{fam}{rank} sign isotypic");
        }
    }

    #[test]
    fn fundamental_coweight_values() {
        let a1 = simple('A', 1);
        let fw = a1.fundamental_coweights();
        assert_eq!(fw[0][0], BigRational::new(BigInt::one(), BigInt::from(2)));
        let a2 = simple('A', 2);
        let fw = a2.fundamental_coweights();
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(fw[0], vec![r(2, 3), r(1, 3)]);
        assert_eq!(fw[1], vec![r(1, 3), r(2, 3)]);
        // <alpha_i, w_i^vee> = 1 always
        for (fam, rank) in [('C', 3), ('G', 2), ('F', 4)] {
            let rs = simple(fam, rank);
            let fw = rs.fundamental_coweights();
            for i in 0..rs.rank {
                let mut pair = BigRational::zero();
                for k in 0..rs.rank {
                    pair += BigRational::from(BigInt::from(rs.cartan[k][i])) * &fw[i][k];
                }
                assert_eq!(pair, BigRational::one());
            }
        }
    }

    #[test]
    fn weyl_orbit_sizes() {
        let a2 = simple('A', 2);
        let zero = vec![BigRational::zero(); 2];
        assert_eq!(weyl_orbit(&a2, &zero, 100).unwrap().len(), 1);
        let fw = a2.fundamental_coweights();
        assert_eq!(weyl_orbit(&a2, &fw[0], 100).unwrap().len(), 3);
        let g2 = simple('G', 2);
        let fw = g2.fundamental_coweights();
        assert_eq!(weyl_orbit(&g2, &fw[0], 100).unwrap().len(), 6);
        assert_eq!(weyl_orbit(&g2, &fw[1], 100).unwrap().len(), 6);
    }

    #[test]
    fn classify_full_g2() {
        let rs = simple('G', 2);
        let types = classify(&rs, &rs.roots).unwrap();
        assert_eq!(types, vec![SimpleType::new('G', 2).unwrap()]);
    }

    #[test]
    fn classify_affine_e6_minus_branch() {
        let rs = simple('E', 6);
        let theta = rs.highest_root(0);
        // branch node of E6 is node 4 in Bourbaki numbering (index 3)
        let mut seeds: Vec<Root> = (0..6).filter(|&i| i != 3).map(|i| rs.simple_root(i)).collect();
        seeds.push(theta.negated());
        let closure = subsystem_closure(&rs, &seeds);
        let types = classify(&rs, &closure).unwrap();
        let a2 = SimpleType::new('A', 2).unwrap();
        assert_eq!(types, vec![a2, a2, a2]);
    }

    #[test]
    fn classify_affine_c2_minus_middle() {
        let rs = simple('C', 2);
        let theta = rs.highest_root(0);
        // affine C2 path: node0 - node1 - node2; drop the middle (alpha_1)
        let seeds = vec![rs.simple_root(1), theta.negated()];
        let closure = subsystem_closure(&rs, &seeds);
        let types = classify(&rs, &closure).unwrap();
        let a1 = SimpleType::new('A', 1).unwrap();
        assert_eq!(types, vec![a1, a1]);
    }

    #[test]
    fn classify_rejects_non_subsystem() {
        let rs = simple('A', 2);
        // a single root without its negative is not closed
        let bad = vec![rs.simple_root(0)];
        assert!(classify(&rs, &bad).is_err());
    }

    #[test]
    fn b2_subsystem_canonicalizes_to_c2() {
        // the long-root A1 x A1 plus short-root closure inside B3 contains
        // rank-2 double-bond components; classification must name them C2
        let rs = simple('B', 3);
        // subsystem generated by alpha_2, alpha_3 (a B2 inside B3)
        let seeds = vec![rs.simple_root(1), rs.simple_root(2)];
        let closure = subsystem_closure(&rs, &seeds);
        let types = classify(&rs, &closure).unwrap();
        assert_eq!(types, vec![SimpleType::new('C', 2).unwrap()]);
    }

    #[test]
    fn product_system_blocks() {
        let rs = build(&[SimpleType::new('G', 2).unwrap(), SimpleType::new('A', 1).unwrap()])
            .unwrap();
        assert_eq!(rs.rank, 3);
        assert_eq!(rs.roots.len(), 14);
        assert_eq!(weyl_order(&rs), 24);
        let ad = affine_diagram(&rs);
        assert_eq!(ad.factors.len(), 2);
        assert_eq!(ad.factors[0].marks, vec![1, 2, 3]);
        assert_eq!(ad.factors[1].marks, vec![1, 1]);
    }

    #[test]
    fn symmetrizers() {
        let g2 = simple('G', 2);
        assert_eq!(g2.sym, vec![3, 1]);
        let b3 = simple('B', 3);
        assert_eq!(b3.sym, vec![2, 2, 1]);
        let c3 = simple('C', 3);
        assert_eq!(c3.sym, vec![1, 1, 2]);
        let f4 = simple('F', 4);
        assert_eq!(f4.sym, vec![2, 2, 1, 1]);
    }
}
