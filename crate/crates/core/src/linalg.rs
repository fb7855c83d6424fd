//! Exact rational scalars, dense matrices and row reduction.
//!
//! Everything here works over `BigRational`, so no operation can overflow or
//! lose precision. Dense routines use row-major storage and pick the first
//! nonzero entry (scanning top to bottom within a column, columns left to
//! right) as the pivot, which keeps every output deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact fraction in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `num / den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<Rational>]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row in RatMatrix::from_rows");
            entries.extend(row.iter().cloned());
        }
        RatMatrix {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        Self::from_rows(cols, &rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn trace(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    /// Exact determinant by fraction-free style elimination over the rationals.
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Rational::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pivot = a[(col, col)].clone();
            det *= &pivot;
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] / &pivot;
                for c in col..n {
                    let delta = &f * &a[(col, c)];
                    a[(r, c)] -= delta;
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Reduced row-echelon form and the (strictly increasing) pivot columns.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, row);
        let inv = a[(row, col)].recip();
        for c in col..a.cols {
            a[(row, c)] *= &inv;
        }
        for r in 0..a.rows {
            if r == row || a[(r, col)].is_zero() {
                continue;
            }
            let f = a[(r, col)].clone();
            for c in col..a.cols {
                if a[(row, c)].is_zero() {
                    continue;
                }
                let delta = &f * &a[(row, c)];
                a[(r, c)] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// Basis of the null space `{v : m v = 0}`, one vector per free column.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); m.cols];
            v[free] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, free)].clone();
            }
            v
        })
        .collect()
}

/// Coefficients `c` with `Σ c_i basis_i = target`, or `None` when the target
/// is not in the span. When the basis is dependent, free coefficients are 0.
pub fn solve_in_span(basis: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let n = target.len();
    let k = basis.len();
    // Columns are the basis vectors, augmented with the target.
    let mut aug = RatMatrix::zeros(n, k + 1);
    for (j, b) in basis.iter().enumerate() {
        assert_eq!(b.len(), n, "basis vector length differs from target");
        for i in 0..n {
            aug[(i, j)] = b[i].clone();
        }
    }
    for i in 0..n {
        aug[(i, k)] = target[i].clone();
    }
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut coeffs = vec![Rational::zero(); k];
    for (row, &p) in pivots.iter().enumerate() {
        coeffs[p] = r[(row, k)].clone();
    }
    Some(coeffs)
}

/// Basis of the intersection of two subspaces given by spanning sets.
pub fn intersect_spans(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a[0].len();
    // Solve Σ s_i a_i − Σ t_j b_j = 0 and map the solutions back through a.
    let mut m = RatMatrix::zeros(n, a.len() + b.len());
    for (j, v) in a.iter().enumerate() {
        for i in 0..n {
            m[(i, j)] = v[i].clone();
        }
    }
    for (j, v) in b.iter().enumerate() {
        for i in 0..n {
            m[(i, a.len() + j)] = -v[i].clone();
        }
    }
    let images: Vec<Vec<Rational>> = kernel_basis(&m)
        .into_iter()
        .map(|sol| {
            let mut w = vec![Rational::zero(); n];
            for (s, v) in sol.iter().zip(a) {
                if s.is_zero() {
                    continue;
                }
                for i in 0..n {
                    w[i] += s * &v[i];
                }
            }
            w
        })
        .collect();
    independent_subset(&images)
}

/// Row-space basis (nonzero rows of the rref) of the given vectors.
pub fn independent_subset(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let (r, pivots) = rref(&RatMatrix::from_rows(first.len(), vectors));
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Multiplies a rational vector by the lcm of its denominators.
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Characteristic polynomial `det(tI − M)` by Faddeev–LeVerrier, as
/// coefficients from the constant term up (`out[n] = 1`).
pub fn characteristic_polynomial(m: &RatMatrix) -> Vec<Rational> {
    let n = m.rows();
    assert_eq!(n, m.cols(), "square matrix expected");
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut acc = RatMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&acc);
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        acc = next;
        coeffs[n - k] = -m.mul(&acc).trace() / Rational::from_integer(BigInt::from(k));
    }
    coeffs
}

fn eval_poly(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

fn positive_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    use num_traits::{Signed, ToPrimitive};
    let n = n.abs().to_u64()?;
    if n > 1 << 40 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Distinct rational roots of a polynomial (coefficients from the constant
/// term up), in increasing order. `None` if the coefficients are too large
/// for the divisor search.
pub fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut c: Vec<Rational> = coeffs.to_vec();
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    if c.len() <= 1 {
        return Some(Vec::new());
    }
    let mut roots = Vec::new();
    let zeros = c.iter().take_while(|x| x.is_zero()).count();
    if zeros > 0 {
        roots.push(Rational::zero());
        c.drain(..zeros);
    }
    if c.len() > 1 {
        let ints = clear_denominators(&c);
        let ps = positive_divisors(&ints[0])?;
        let qs = positive_divisors(&ints[ints.len() - 1])?;
        for p in &ps {
            for q in &qs {
                for sign in [1, -1] {
                    let x = Rational::new(p * sign, q.clone());
                    if !roots.contains(&x) && eval_poly(&c, &x).is_zero() {
                        roots.push(x);
                    }
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

/// Sparse vector keyed by an ordered basis label.
pub type SparseVec<K> = BTreeMap<K, Rational>;

/// `acc += scale * v`, dropping entries that cancel.
pub fn axpy<K: Ord + Clone>(acc: &mut SparseVec<K>, scale: &Rational, v: &SparseVec<K>) {
    if scale.is_zero() {
        return;
    }
    for (k, c) in v {
        let delta = scale * c;
        match acc.get_mut(k) {
            Some(e) => {
                *e += delta;
                if e.is_zero() {
                    acc.remove(k);
                }
            }
            None => {
                acc.insert(k.clone(), delta);
            }
        }
    }
}

/// Incrementally built echelon basis of sparse vectors.
///
/// Each stored row is normalised so that its largest key (its pivot) has
/// coefficient 1; pivots are pairwise distinct. Eliminating the largest key
/// first means the keys that never become pivots are the smallest ones, which
/// is what quotient representatives want.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for SparseEchelon<K> {
    fn default() -> Self {
        SparseEchelon {
            rows: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_pivot(&self, key: &K) -> bool {
        self.rows.contains_key(key)
    }

    pub fn row(&self, pivot: &K) -> Option<&SparseVec<K>> {
        self.rows.get(pivot)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&K, &SparseVec<K>)> {
        self.rows.iter()
    }

    /// Eliminates the leading key while it is a pivot. The result is zero or
    /// has a non-pivot leading key.
    pub fn reduce_top(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        while let Some((k, c)) = v.last_key_value() {
            let Some(row) = self.rows.get(k) else { break };
            let s = -c.clone();
            axpy(&mut v, &s, row);
        }
        v
    }

    /// Full reduction: the result contains no pivot key at all.
    pub fn normal_form(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        let mut out = SparseVec::new();
        while let Some((k, c)) = v.pop_last() {
            match self.rows.get(&k) {
                Some(row) => {
                    let s = -c;
                    for (rk, rc) in row.range(..k.clone()) {
                        let delta = &s * rc;
                        match v.get_mut(rk) {
                            Some(e) => {
                                *e += delta;
                                if e.is_zero() {
                                    v.remove(rk);
                                }
                            }
                            None => {
                                v.insert(rk.clone(), delta);
                            }
                        }
                    }
                }
                None => {
                    out.insert(k, c);
                }
            }
        }
        out
    }

    /// Adds `v` to the span. Returns the new pivot, or `None` if `v` was
    /// already in the span.
    pub fn insert(&mut self, v: SparseVec<K>) -> Option<K> {
        let mut v = self.reduce_top(v);
        let (k, c) = v.last_key_value()?;
        let k = k.clone();
        let inv = c.recip();
        for e in v.values_mut() {
            *e *= &inv;
        }
        self.rows.insert(k.clone(), v);
        Some(k)
    }
}
