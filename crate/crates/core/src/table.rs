//! Structure-constant tables of finite-dimensional Lie algebras.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::free_lie::format_term;
use crate::linalg::{RatMatrix, Rational};

/// `[b_i, b_j] = Σ_k c^k_ij b_k`, stored for `i < j` only and only where
/// nonzero; antisymmetry supplies the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTable {
    names: Vec<String>,
    brackets: BTreeMap<(usize, usize), BTreeMap<usize, Rational>>,
}

impl StructureTable {
    /// An abelian table on the given basis names.
    pub fn new(names: Vec<String>) -> Self {
        StructureTable {
            names,
            brackets: BTreeMap::new(),
        }
    }

    /// Table with `[b_i, b_j]` given as dense coordinates for every `i < j`.
    pub fn from_fn(names: Vec<String>, mut f: impl FnMut(usize, usize) -> Vec<Rational>) -> Self {
        let mut t = Self::new(names);
        for i in 0..t.dim() {
            for j in i + 1..t.dim() {
                let v = f(i, j);
                t.set_bracket(i, j, &v);
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Sets `[b_i, b_j]` (and implicitly `[b_j, b_i]`) from dense coordinates.
    pub fn set_bracket(&mut self, i: usize, j: usize, coords: &[Rational]) {
        assert!(i != j, "[b_i, b_i] is always zero");
        assert_eq!(coords.len(), self.dim());
        let (i, j, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let entry: BTreeMap<usize, Rational> = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, if sign == 1 { c.clone() } else { -c.clone() }))
            .collect();
        if entry.is_empty() {
            self.brackets.remove(&(i, j));
        } else {
            self.brackets.insert((i, j), entry);
        }
    }

    /// Sets the single constant `c^k_ij` for `i < j`.
    pub fn set_constant(&mut self, i: usize, j: usize, k: usize, value: Rational) {
        assert!(i < j, "constants are stored for i < j");
        let entry = self.brackets.entry((i, j)).or_default();
        if value.is_zero() {
            entry.remove(&k);
        } else {
            entry.insert(k, value);
        }
        if entry.is_empty() {
            self.brackets.remove(&(i, j));
        }
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> Rational {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Rational::zero(),
            std::cmp::Ordering::Less => self
                .brackets
                .get(&(i, j))
                .and_then(|e| e.get(&k))
                .cloned()
                .unwrap_or_else(Rational::zero),
            std::cmp::Ordering::Greater => -self.constant(j, i, k),
        }
    }

    /// Dense coordinates of `[b_i, b_j]` for any `i, j`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<Rational> {
        (0..self.dim()).map(|k| self.constant(i, j, k)).collect()
    }

    /// Nonzero stored constants `(i, j, k, c^k_ij)` with `i < j`.
    pub fn nonzero_constants(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        self.brackets
            .iter()
            .flat_map(|(&(i, j), e)| e.iter().map(move |(&k, c)| (i, j, k, c)))
    }

    /// Nonzero stored brackets keyed by `(i, j)`, `i < j`.
    pub fn stored_brackets(&self) -> &BTreeMap<(usize, usize), BTreeMap<usize, Rational>> {
        &self.brackets
    }

    /// Bracket of two vectors given in basis coordinates.
    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for (&(i, j), e) in &self.brackets {
            // [u,v] picks up (u_i v_j − u_j v_i) c_ij
            let w = &u[i] * &v[j] - &u[j] * &v[i];
            if w.is_zero() {
                continue;
            }
            for (&k, c) in e {
                out[k] += &w * c;
            }
        }
        out
    }

    /// Matrix of `ad(b_i)`: entry `(k, j)` is `c^k_ij`.
    pub fn ad_matrix(&self, i: usize) -> RatMatrix {
        let n = self.dim();
        let mut m = RatMatrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                m[(k, j)] = self.constant(i, j, k);
            }
        }
        m
    }

    /// Matrix of `ad(v)` for a vector in basis coordinates.
    pub fn ad_vector(&self, v: &[Rational]) -> RatMatrix {
        let n = self.dim();
        let mut m = RatMatrix::zeros(n, n);
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        m[(k, j)] += vi * &c;
                    }
                }
            }
        }
        m
    }

    /// Restriction to a subset of basis elements, assuming it is closed
    /// under the bracket. Returns `None` if some bracket leaves the subset.
    pub fn subtable(&self, indices: &[usize]) -> Option<StructureTable> {
        let names = indices.iter().map(|&i| self.names[i].clone()).collect();
        let mut t = StructureTable::new(names);
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate().skip(a + 1) {
                let full = self.basis_bracket(i, j);
                let mut sub = vec![Rational::zero(); indices.len()];
                for (k, c) in full.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let pos = indices.iter().position(|&x| x == k)?;
                    sub[pos] = c.clone();
                }
                t.set_bracket(a, b, &sub);
            }
        }
        Some(t)
    }

    /// Human-readable combination of basis names, e.g. `2*h1 + h2`.
    pub fn format_vector(&self, v: &[Rational]) -> String {
        let mut s = String::new();
        let mut first = true;
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            s.push_str(&format_term(first, c, &self.names[k]));
            first = false;
        }
        if first {
            s.push('0');
        }
        s
    }

    /// Human-readable differences from `other`, one line per differing
    /// pair; empty iff the tables are equal.
    pub fn diff(&self, other: &StructureTable) -> Vec<String> {
        if self.names != other.names {
            return vec![format!(
                "basis differs: [{}] vs [{}]",
                self.names.join(", "),
                other.names.join(", ")
            )];
        }
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let a = self.basis_bracket(i, j);
                let b = other.basis_bracket(i, j);
                if a != b {
                    out.push(format!(
                        "[{}, {}]: {} vs {}",
                        self.names[i],
                        self.names[j],
                        self.format_vector(&a),
                        other.format_vector(&b)
                    ));
                }
            }
        }
        out
    }
}

impl fmt::Display for StructureTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(i, j) in self.brackets.keys() {
            writeln!(
                f,
                "[{}, {}] = {}",
                self.names[i],
                self.names[j],
                self.format_vector(&self.basis_bracket(i, j))
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn sl2() -> StructureTable {
        // [e,f] = h, [h,e] = 2e, [h,f] = −2f with basis (e, f, h)
        let mut t = StructureTable::new(vec!["e".into(), "f".into(), "h".into()]);
        t.set_bracket(0, 1, &[int(0), int(0), int(1)]);
        t.set_bracket(2, 0, &[int(2), int(0), int(0)]);
        t.set_bracket(2, 1, &[int(0), int(-2), int(0)]);
        t
    }

    #[test]
    fn antisymmetry_is_reconstructed() {
        let t = sl2();
        assert_eq!(t.basis_bracket(0, 2), vec![int(-2), int(0), int(0)]);
        assert_eq!(t.basis_bracket(2, 0), vec![int(2), int(0), int(0)]);
        assert_eq!(t.basis_bracket(1, 1), vec![int(0); 3]);
    }

    #[test]
    fn vector_bracket_is_bilinear() {
        let t = sl2();
        let e = [int(1), int(0), int(0)];
        let f = [int(0), int(1), int(0)];
        assert_eq!(t.bracket(&e, &f), vec![int(0), int(0), int(1)]);
        let ef = [int(1), int(1), int(0)];
        assert_eq!(t.bracket(&ef, &ef), vec![int(0); 3]);
    }

    #[test]
    fn ad_matrix_layout() {
        let t = sl2();
        let ad_h = t.ad_matrix(2);
        assert!(ad_h.is_diagonal());
        assert_eq!(ad_h[(0, 0)], int(2));
        assert_eq!(ad_h[(1, 1)], int(-2));
        assert_eq!(t.ad_vector(&[int(0), int(0), int(1)]), ad_h);
    }

    #[test]
    fn subtable_requires_closure() {
        let t = sl2();
        assert!(t.subtable(&[0, 1]).is_none());
        let h = t.subtable(&[2]).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(t.format_vector(&t.basis_bracket(1, 2)), "2*f");
    }
}
