//! Exact linear algebra over Q and Z for subspaces and sublattices of a
//! lattice carrying an alternating form.
//!
//! Small integer data coming straight from topology (Gram matrices, twist
//! and deck matrices, homology classes) lives in [`IntMatrix`] / `i64`
//! vectors. Every elimination is done with arbitrary precision integers or
//! rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(n: usize, columns: &[Vec<i64>]) -> Result<Self> {
        let mut m = Self::zeros(n, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.len(),
                });
            }
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Panics on `i64` overflow; entries here are small topological counts.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc = vec![0i128; other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k) as i128;
                if a == 0 {
                    continue;
                }
                for (j, slot) in acc.iter_mut().enumerate() {
                    *slot += a * other.get(k, j) as i128;
                }
            }
            for (j, x) in acc.into_iter().enumerate() {
                out.set(i, j, narrow(x));
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                narrow(
                    self.row(i)
                        .iter()
                        .zip(v)
                        .map(|(&a, &b)| a as i128 * b as i128)
                        .sum(),
                )
            })
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as i64))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_skew(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..=i).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    pub fn pow(&self, k: u64) -> IntMatrix {
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn to_big_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        det_bareiss(self.to_big_rows())
    }

    /// Hex SHA-256 of the shape and entries, used to identify matrices in reports.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.rows as u64).to_le_bytes());
        h.update((self.cols as u64).to_le_bytes());
        for x in &self.data {
            h.update(x.to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("i64 overflow in integer matrix arithmetic")
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Fraction-free determinant.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn make_primitive(v: &mut [BigInt]) {
    let c = content(v);
    if !c.is_zero() && !c.is_one() {
        for x in v.iter_mut() {
            *x /= &c;
        }
    }
}

/// Incremental Q-span of integer vectors, kept as primitive integer rows in
/// row echelon form (not reduced). Insertion reports whether the rank grew.
#[derive(Clone, Debug)]
pub struct SpanAccumulator {
    ambient: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl SpanAccumulator {
    pub fn new(ambient: usize) -> Self {
        SpanAccumulator {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient
    }

    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let g = r[p].gcd(&v[p]);
            let a = &r[p] / &g;
            let b = &v[p] / &g;
            for (x, y) in v.iter_mut().zip(r) {
                if y.is_zero() {
                    if !a.is_one() && !x.is_zero() {
                        *x *= &a;
                    }
                } else {
                    *x = &a * &*x - &b * y;
                }
            }
        }
        make_primitive(&mut v);
        v
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        self.is_full() || self.reduce(to_big(v)).iter().all(Zero::is_zero)
    }

    pub fn insert(&mut self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        self.insert_big(to_big(v))
    }

    pub fn insert_big(&mut self, v: Vec<BigInt>) -> bool {
        if self.is_full() {
            return false;
        }
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if v[p].is_negative() {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Order-independent merge: the result spans the sum of both spaces.
    pub fn merge(&mut self, other: &SpanAccumulator) {
        for r in &other.rows {
            self.insert_big(r.clone());
        }
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn to_subspace(&self) -> RatSubspace {
        RatSubspace::from_echelon_rows(self.ambient, &self.rows, &self.pivots)
    }
}

/// A subspace of `Q^n`, stored by its reduced row echelon basis, which is
/// canonical: equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatSubspace {
    ambient: usize,
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

impl RatSubspace {
    pub fn zero(ambient: usize) -> Self {
        RatSubspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        RatSubspace {
            ambient,
            rows,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span_int(ambient: usize, vectors: &[Vec<i64>]) -> Self {
        let mut acc = SpanAccumulator::new(ambient);
        for v in vectors {
            acc.insert(v);
        }
        acc.to_subspace()
    }

    pub fn span_rat(ambient: usize, vectors: &[Vec<BigRational>]) -> Self {
        let mut acc = SpanAccumulator::new(ambient);
        for v in vectors {
            acc.insert_big(clear_denominators(v));
        }
        acc.to_subspace()
    }

    fn from_echelon_rows(ambient: usize, rows: &[Vec<BigInt>], pivots: &[usize]) -> Self {
        if rows.len() == ambient {
            return Self::full(ambient);
        }
        let mut rr: Vec<Vec<BigRational>> = rows
            .iter()
            .zip(pivots)
            .map(|(r, &p)| {
                let lead = r[p].clone();
                r.iter()
                    .map(|x| BigRational::new(x.clone(), lead.clone()))
                    .collect()
            })
            .collect();
        for i in (0..rr.len()).rev() {
            let p = pivots[i];
            let (above, rest) = rr.split_at_mut(i);
            let pivot_row = &rest[0];
            for row in above.iter_mut() {
                if row[p].is_zero() {
                    continue;
                }
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(pivot_row).skip(p) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        RatSubspace {
            ambient,
            rows: rr,
            pivots: pivots.to_vec(),
        }
    }

    /// `{ h : row . h = 0 for every row }`.
    pub fn nullspace(ambient: usize, constraints: &[Vec<BigRational>]) -> Self {
        let cons = Self::span_rat(ambient, constraints);
        let free: Vec<usize> = (0..ambient).filter(|c| !cons.pivots.contains(c)).collect();
        let basis: Vec<Vec<BigRational>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); ambient];
                v[f] = BigRational::one();
                for (row, &p) in cons.rows.iter().zip(&cons.pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect();
        Self::span_rat(ambient, &basis)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis rows scaled to primitive integer vectors.
    pub fn integer_basis(&self) -> Vec<Vec<BigInt>> {
        self.rows.iter().map(|r| clear_denominators(r)).collect()
    }

    pub fn contains_rat(&self, v: &[BigRational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn contains_int(&self, v: &[i64]) -> bool {
        let v: Vec<BigRational> = v
            .iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect();
        self.contains_rat(&v)
    }

    pub fn is_subspace_of(&self, other: &RatSubspace) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains_rat(r))
    }

    pub fn sum(&self, other: &RatSubspace) -> RatSubspace {
        let mut vs = self.rows.clone();
        vs.extend(other.rows.iter().cloned());
        Self::span_rat(self.ambient, &vs)
    }
}

fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    make_primitive(&mut out);
    out
}

pub fn span_q(ambient: usize, vectors: &[Vec<i64>]) -> RatSubspace {
    RatSubspace::span_int(ambient, vectors)
}

pub fn span_z(ambient: usize, vectors: &[Vec<i64>]) -> IntLattice {
    let mut l = IntLattice::new(ambient);
    for v in vectors {
        l.insert(v);
    }
    l
}

/// `omega`-orthogonal complement of `w` for the form `x^T gram y`.
pub fn perp(w: &RatSubspace, gram: &IntMatrix) -> RatSubspace {
    let n = w.ambient();
    assert_eq!(gram.nrows(), n, "gram dimension mismatch");
    let g: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            gram.row(i)
                .iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let constraints: Vec<Vec<BigRational>> = w
        .basis()
        .iter()
        .map(|b| {
            (0..n)
                .map(|i| {
                    g[i].iter()
                        .zip(b)
                        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                        .fold(BigRational::zero(), |s, (x, y)| s + x * y)
                })
                .collect()
        })
        .collect();
    RatSubspace::nullspace(n, &constraints)
}

/// `B gram B^T` for integer basis rows `B`.
pub fn restricted_gram(basis: &[Vec<BigInt>], gram: &IntMatrix) -> Vec<Vec<BigInt>> {
    let g = gram.to_big_rows();
    let gb: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|b| {
            (0..gram.nrows())
                .map(|i| {
                    g[i].iter()
                        .zip(b)
                        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                        .fold(BigInt::zero(), |s, (x, y)| s + x * y)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    basis
        .iter()
        .map(|u| {
            gb.iter()
                .map(|gv| u.iter().zip(gv).fold(BigInt::zero(), |s, (x, y)| s + x * y))
                .collect()
        })
        .collect()
}

/// Nondegeneracy of the restricted form. Odd dimensions fail immediately;
/// the zero subspace is symplectic.
pub fn is_symplectic_q(w: &RatSubspace, gram: &IntMatrix) -> bool {
    if w.dim() % 2 == 1 {
        return false;
    }
    !det_bareiss(restricted_gram(&w.integer_basis(), gram)).is_zero()
}

/// `H = W (+) W^perp`.
pub fn splits_with_perp(w: &RatSubspace, gram: &IntMatrix) -> bool {
    let p = perp(w, gram);
    w.dim() + p.dim() == w.ambient() && w.sum(&p).dim() == w.ambient()
}

/// Determinant of the restricted Gram matrix on the Hermite basis is a unit.
pub fn is_symplectic_z(l: &IntLattice, gram: &IntMatrix) -> bool {
    det_bareiss(restricted_gram(l.basis(), gram)).abs().is_one()
}

/// A sublattice of `Z^n` in Hermite normal form: pivots strictly increase,
/// are positive, and entries above each pivot lie in `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    ambient: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => f.write_str("infinite"),
        }
    }
}

impl IntLattice {
    pub fn new(ambient: usize) -> Self {
        IntLattice {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let mut l = Self::new(ambient);
        for i in 0..ambient {
            let mut e = vec![0i64; ambient];
            e[i] = 1;
            l.insert(&e);
        }
        l
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn insert(&mut self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        self.insert_big(to_big(v))
    }

    /// Returns whether the lattice changed.
    pub fn insert_big(&mut self, mut v: Vec<BigInt>) -> bool {
        if self.member_big(&v) {
            return false;
        }
        while let Some(c) = v.iter().position(|x| !x.is_zero()) {
            match self.pivots.iter().position(|&p| p == c) {
                Some(i) => {
                    let row = &self.rows[i];
                    let e = row[c].extended_gcd(&v[c]);
                    let (g, s, t) = (e.gcd, e.x, e.y);
                    let rc = &row[c] / &g;
                    let vc = &v[c] / &g;
                    let new_row: Vec<BigInt> =
                        row.iter().zip(&v).map(|(r, x)| &s * r + &t * x).collect();
                    let new_v: Vec<BigInt> =
                        v.iter().zip(row).map(|(x, r)| &rc * x - &vc * r).collect();
                    self.rows[i] = new_row;
                    v = new_v;
                }
                None => {
                    let at = self.pivots.partition_point(|&q| q < c);
                    self.pivots.insert(at, c);
                    self.rows.insert(at, v);
                    break;
                }
            }
        }
        self.normalize();
        true
    }

    fn normalize(&mut self) {
        for i in 0..self.rows.len() {
            let p = self.pivots[i];
            if self.rows[i][p].is_negative() {
                for x in self.rows[i].iter_mut() {
                    *x = -&*x;
                }
            }
            let (above, rest) = self.rows.split_at_mut(i);
            let prow = &rest[0];
            for row in above.iter_mut() {
                let q = row[p].div_floor(&prow[p]);
                if q.is_zero() {
                    continue;
                }
                for (x, y) in row.iter_mut().zip(prow) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
            }
        }
    }

    /// Integer coordinates of `v` in the Hermite basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut v = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let (q, r) = v[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
            }
            coords.push(q);
        }
        v.iter().all(Zero::is_zero).then_some(coords)
    }

    fn member_big(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn member_z(&self, v: &[i64]) -> bool {
        self.member_big(&to_big(v))
    }

    pub fn contains_lattice(&self, other: &IntLattice) -> bool {
        other.rows.iter().all(|r| self.member_big(r))
    }
}

pub fn member_z(l: &IntLattice, v: &[i64]) -> bool {
    l.member_z(v)
}

/// `[sup : sub]`; infinite when the ranks differ. `sub` must lie in `sup`.
pub fn index(sub: &IntLattice, sup: &IntLattice) -> Result<Index> {
    if sub.ambient != sup.ambient {
        return Err(Error::DimensionMismatch {
            expected: sup.ambient,
            got: sub.ambient,
        });
    }
    let coords = sub
        .rows
        .iter()
        .map(|r| sup.coordinates(r))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidParameter("index: lattice is not a sublattice".into()))?;
    if sub.rank() != sup.rank() {
        return Ok(Index::Infinite);
    }
    Ok(Index::Finite(det_bareiss(coords).abs()))
}

/// Nonzero invariant factors of an integer matrix (Smith normal form diagonal).
pub fn smith_invariants(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| to_big(r)).collect();
    let nr = m.len();
    let nc = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..nr {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                let (top, rest) = m.split_at_mut(i);
                for (x, y) in rest[0][t..nc].iter_mut().zip(&top[t][t..nc]) {
                    *x -= &q * y;
                }
                if !m[i][t].is_zero() {
                    m.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..nc {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                if !m[t][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility condition
            let bad = (t + 1..nr)
                .flat_map(|i| (t + 1..nc).map(move |j| (i, j)))
                .find(|&(i, j)| !(&m[i][j] % &m[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    let row_i = m[i].clone();
                    for (x, y) in m[t].iter_mut().zip(&row_i) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}
