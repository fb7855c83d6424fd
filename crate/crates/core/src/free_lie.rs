//! The free Lie algebra over the rationals in the Lyndon basis.
//!
//! A Lyndon word `w` of length ≥ 2 has a standard factorization `w = u·v`
//! where `v` is its longest proper Lyndon suffix; the basis element `P(w)` is
//! the bracket `[P(u), P(v)]`. Polynomials are finitely supported maps from
//! Lyndon words to rationals. `expand_to_associative` maps everything into the
//! free associative algebra (`[a, b] ↦ ab − ba`) and is used as an oracle.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{axpy, Rational};

/// Generator index inside an algebra. At most 256 generators.
pub type Letter = u8;

pub const DEFAULT_DEGREE_CAP: usize = 12;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FreeLieError {
    #[error("bracket of degree {degree} exceeds the degree cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("bracket normalization exceeded recursion depth {0}")]
    RecursionDepth(usize),
    #[error("{0:?} is not a Lyndon word")]
    NotLyndon(Vec<Letter>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub index: usize,
    pub name: String,
}

/// Strictly smaller than all proper rotations.
pub fn is_lyndon(w: &[Letter]) -> bool {
    if w.is_empty() {
        return false;
    }
    // Equivalent characterization: strictly smaller than every proper suffix.
    (1..w.len()).all(|i| w < &w[i..])
}

/// A Lyndon word, i.e. a basis element of the free Lie algebra.
///
/// Ordered by degree first, then lexicographically. That order drives pivot
/// choice in the quotient engine; the bracket algorithm compares words with
/// plain lexicographic order via [`LyndonMonomial::word`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LyndonMonomial(Vec<Letter>);

impl LyndonMonomial {
    pub fn new(word: Vec<Letter>) -> Result<Self, FreeLieError> {
        if is_lyndon(&word) {
            Ok(LyndonMonomial(word))
        } else {
            Err(FreeLieError::NotLyndon(word))
        }
    }

    pub fn letter(g: Letter) -> Self {
        LyndonMonomial(vec![g])
    }

    pub fn word(&self) -> &[Letter] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `(u, v)` with `v` the longest proper Lyndon suffix; `None` for letters.
    pub fn standard_factorization(&self) -> Option<(LyndonMonomial, LyndonMonomial)> {
        let w = &self.0;
        let split = (1..w.len()).find(|&i| is_lyndon(&w[i..]))?;
        Some((
            LyndonMonomial(w[..split].to_vec()),
            LyndonMonomial(w[split..].to_vec()),
        ))
    }

    /// Standard bracketing with the given generator names, e.g. `[x1,[x1,x2]]`.
    pub fn fmt_with(&self, names: &[String]) -> String {
        match self.standard_factorization() {
            None => name_of(names, self.0[0]),
            Some((u, v)) => format!("[{},{}]", u.fmt_with(names), v.fmt_with(names)),
        }
    }
}

impl Ord for LyndonMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for LyndonMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn name_of(names: &[String], g: Letter) -> String {
    names
        .get(g as usize)
        .cloned()
        .unwrap_or_else(|| format!("x{}", g as usize + 1))
}

/// Standard factorization of a Lyndon word of degree ≥ 2.
pub fn standard_factorization(w: &LyndonMonomial) -> (LyndonMonomial, LyndonMonomial) {
    w.standard_factorization()
        .expect("standard factorization needs degree >= 2")
}

/// All Lyndon words over `alphabet_size` letters up to `max_degree`, grouped
/// by degree (index 0 holds degree 1) and sorted lexicographically.
pub fn lyndon_words(alphabet_size: usize, max_degree: usize) -> Vec<Vec<LyndonMonomial>> {
    let mut by_degree = vec![Vec::new(); max_degree];
    if alphabet_size == 0 || max_degree == 0 {
        return by_degree;
    }
    assert!(alphabet_size <= 256, "at most 256 generators");
    let top = (alphabet_size - 1) as Letter;
    // Duval's generation, which emits Lyndon words in lexicographic order.
    let mut w: Vec<Letter> = vec![0];
    loop {
        by_degree[w.len() - 1].push(LyndonMonomial(w.clone()));
        let period = w.len();
        while w.len() < max_degree {
            w.push(w[w.len() - period]);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    by_degree
}

/// Finitely supported rational combination of Lyndon monomials.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct LiePoly {
    terms: BTreeMap<LyndonMonomial, Rational>,
}

impl LiePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(g: Letter) -> Self {
        Self::monomial(LyndonMonomial::letter(g))
    }

    pub fn monomial(m: LyndonMonomial) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn term(m: LyndonMonomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LiePoly { terms }
    }

    /// Builds a polynomial, dropping zero coefficients and merging repeats.
    pub fn from_terms(terms: impl IntoIterator<Item = (LyndonMonomial, Rational)>) -> Self {
        let mut p = LiePoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn from_map(terms: BTreeMap<LyndonMonomial, Rational>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        LiePoly { terms }
    }

    pub(crate) fn into_map(self) -> BTreeMap<LyndonMonomial, Rational> {
        self.terms
    }

    pub(crate) fn as_map(&self) -> &BTreeMap<LyndonMonomial, Rational> {
        &self.terms
    }

    pub fn add_term(&mut self, m: LyndonMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_scaled(&mut self, s: &Rational, other: &LiePoly) {
        axpy(&mut self.terms, s, &other.terms);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &LyndonMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&LyndonMonomial, &Rational)> {
        self.terms.iter()
    }

    /// Largest monomial in (degree, lex) order.
    pub fn leading(&self) -> Option<(&LyndonMonomial, &Rational)> {
        self.terms.last_key_value()
    }

    /// Highest degree present; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.last_key_value().map_or(0, |(m, _)| m.degree())
    }

    /// Lowest degree present; 0 for the zero polynomial.
    pub fn min_degree(&self) -> usize {
        self.terms.first_key_value().map_or(0, |(m, _)| m.degree())
    }

    pub fn homogeneous_component(&self, degree: usize) -> LiePoly {
        LiePoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scaled(&self, s: &Rational) -> LiePoly {
        if s.is_zero() {
            return LiePoly::zero();
        }
        LiePoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// Largest generator index used, if any.
    pub fn max_letter(&self) -> Option<Letter> {
        self.terms
            .keys()
            .flat_map(|m| m.word().iter().copied())
            .max()
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        // Highest terms first reads more naturally for relations.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            out.push_str(&format_term(i == 0, c, &m.fmt_with(names)));
        }
        out
    }
}

/// Formats `c * body` as part of a signed sum.
pub(crate) fn format_term(first: bool, c: &Rational, body: &str) -> String {
    let neg = c < &Rational::zero();
    let abs = if neg { -c.clone() } else { c.clone() };
    let mut s = String::new();
    match (first, neg) {
        (true, true) => s.push('-'),
        (true, false) => {}
        (false, true) => s.push_str(" - "),
        (false, false) => s.push_str(" + "),
    }
    if !abs.is_one() {
        s.push_str(&format!("{abs}*"));
    }
    s.push_str(body);
    s
}

impl fmt::Display for LiePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&[]))
    }
}

impl Add<&LiePoly> for &LiePoly {
    type Output = LiePoly;
    fn add(self, rhs: &LiePoly) -> LiePoly {
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), rhs);
        out
    }
}

impl Sub<&LiePoly> for &LiePoly {
    type Output = LiePoly;
    fn sub(self, rhs: &LiePoly) -> LiePoly {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), rhs);
        out
    }
}

impl AddAssign<&LiePoly> for LiePoly {
    fn add_assign(&mut self, rhs: &LiePoly) {
        self.add_scaled(&Rational::one(), rhs);
    }
}

impl Neg for LiePoly {
    type Output = LiePoly;
    fn neg(mut self) -> LiePoly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul<&LiePoly> for &Rational {
    type Output = LiePoly;
    fn mul(self, rhs: &LiePoly) -> LiePoly {
        rhs.scaled(self)
    }
}

/// Left-normed bracket `[x_{i1},[x_{i2},[…,x_{ik}]…]]` (0-based indices).
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Tower(Vec<Letter>);

impl Tower {
    pub fn new(indices: Vec<Letter>) -> Self {
        assert!(!indices.is_empty(), "a tower needs at least one generator");
        Tower(indices)
    }

    /// Builds a tower from 1-based indices as written in `x1, x2, …`.
    pub fn one_based(indices: &[usize]) -> Self {
        Tower::new(
            indices
                .iter()
                .map(|&i| {
                    assert!(i >= 1, "1-based index expected");
                    (i - 1) as Letter
                })
                .collect(),
        )
    }

    pub fn indices(&self) -> &[Letter] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let (last, init) = self.0.split_last().expect("nonempty tower");
        let mut s = name_of(names, *last);
        for &g in init.iter().rev() {
            s = format!("[{},{}]", name_of(names, g), s);
        }
        s
    }
}

/// Polynomial in the free associative algebra on the same generators.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NCPoly {
    terms: BTreeMap<Vec<Letter>, Rational>,
}

impl NCPoly {
    pub fn word(w: Vec<Letter>) -> Self {
        NCPoly {
            terms: [(w, Rational::one())].into_iter().collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &[Letter]) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Letter>, &Rational)> {
        self.terms.iter()
    }

    pub fn add_scaled(&mut self, s: &Rational, other: &NCPoly) {
        axpy(&mut self.terms, s, &other.terms);
    }

    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        let mut out = NCPoly::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                let single = NCPoly {
                    terms: [(w, Rational::one())].into_iter().collect(),
                };
                out.add_scaled(&(ca * cb), &single);
            }
        }
        out
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.mul(other);
        out.add_scaled(&-Rational::one(), &other.mul(self));
        out
    }
}

fn expand_monomial(m: &LyndonMonomial) -> NCPoly {
    match m.standard_factorization() {
        None => NCPoly::word(m.word().to_vec()),
        Some((u, v)) => expand_monomial(&u).commutator(&expand_monomial(&v)),
    }
}

/// Image under the embedding into the free associative algebra.
pub fn expand_to_associative(p: &LiePoly) -> NCPoly {
    let mut out = NCPoly::default();
    for (m, c) in p.terms() {
        out.add_scaled(c, &expand_monomial(m));
    }
    out
}

/// Bracket normalization in the Lyndon basis with a memo table.
///
/// The memo lives inside the value, so each instance is deterministic and
/// independent; the type is deliberately not `Sync`.
#[derive(Debug)]
pub struct FreeLieAlgebra {
    degree_cap: usize,
    cache: RefCell<HashMap<(LyndonMonomial, LyndonMonomial), LiePoly>>,
}

impl Default for FreeLieAlgebra {
    fn default() -> Self {
        Self::new()
    }
}

impl FreeLieAlgebra {
    pub fn new() -> Self {
        Self::with_degree_cap(DEFAULT_DEGREE_CAP)
    }

    pub fn with_degree_cap(degree_cap: usize) -> Self {
        FreeLieAlgebra {
            degree_cap,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    /// Bilinear extension of the monomial bracket.
    pub fn bracket(&self, p: &LiePoly, q: &LiePoly) -> Result<LiePoly, FreeLieError> {
        let mut out = BTreeMap::new();
        for (u, a) in p.terms() {
            for (v, b) in q.terms() {
                let uv = self.bracket_monomials(u, v)?;
                axpy(&mut out, &(a * b), uv.as_map());
            }
        }
        Ok(LiePoly::from_map(out))
    }

    /// `[x_g, p]`.
    pub fn ad_generator(&self, g: Letter, p: &LiePoly) -> Result<LiePoly, FreeLieError> {
        self.bracket(&LiePoly::generator(g), p)
    }

    pub fn bracket_monomials(
        &self,
        u: &LyndonMonomial,
        v: &LyndonMonomial,
    ) -> Result<LiePoly, FreeLieError> {
        let degree = u.degree() + v.degree();
        if degree > self.degree_cap {
            return Err(FreeLieError::DegreeCap {
                degree,
                cap: self.degree_cap,
            });
        }
        self.bracket_rec(u, v, 0)
    }

    // Termination: [u2, v] and [u1, v] have smaller total degree. The outer
    // calls stay at the degree of uv, where only finitely many Lyndon words
    // exist, and triangularity of the basis ([P(u), P(v)] is P(uv) plus words
    // lexicographically above uv) rules out cycles among them. The depth guard
    // turns any breach of that argument into an error, not a stack overflow.
    fn bracket_rec(
        &self,
        u: &LyndonMonomial,
        v: &LyndonMonomial,
        depth: usize,
    ) -> Result<LiePoly, FreeLieError> {
        let limit = 8 * self.degree_cap * self.degree_cap;
        if depth > limit {
            return Err(FreeLieError::RecursionDepth(limit));
        }
        match u.word().cmp(v.word()) {
            Ordering::Equal => return Ok(LiePoly::zero()),
            Ordering::Greater => return Ok(-self.bracket_rec(v, u, depth + 1)?),
            Ordering::Less => {}
        }
        let key = (u.clone(), v.clone());
        if let Some(hit) = self.cache.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let result = match u.standard_factorization() {
            // uv is Lyndon with standard factorization (u, v).
            None => Self::concat(u, v),
            Some((_, ref u2)) if u2.word() >= v.word() => Self::concat(u, v),
            Some((u1, u2)) => {
                // [[u1,u2],v] = [u1,[u2,v]] − [u2,[u1,v]]
                let mut acc = BTreeMap::new();
                let inner = self.bracket_rec(&u2, v, depth + 1)?;
                for (w, c) in inner.terms() {
                    let t = self.bracket_rec(&u1, w, depth + 1)?;
                    axpy(&mut acc, c, t.as_map());
                }
                let inner = self.bracket_rec(&u1, v, depth + 1)?;
                for (w, c) in inner.terms() {
                    let t = self.bracket_rec(&u2, w, depth + 1)?;
                    axpy(&mut acc, &-c.clone(), t.as_map());
                }
                LiePoly::from_map(acc)
            }
        };
        self.cache.borrow_mut().insert(key, result.clone());
        Ok(result)
    }

    fn concat(u: &LyndonMonomial, v: &LyndonMonomial) -> LiePoly {
        let mut w = u.word().to_vec();
        w.extend_from_slice(v.word());
        debug_assert!(is_lyndon(&w));
        LiePoly::monomial(LyndonMonomial(w))
    }

    /// Expands a left-normed bracket in the Lyndon basis.
    pub fn tower_to_poly(&self, t: &Tower) -> Result<LiePoly, FreeLieError> {
        if t.degree() > self.degree_cap {
            return Err(FreeLieError::DegreeCap {
                degree: t.degree(),
                cap: self.degree_cap,
            });
        }
        let (last, init) = t.indices().split_last().expect("nonempty tower");
        let mut p = LiePoly::generator(*last);
        for &g in init.iter().rev() {
            p = self.ad_generator(g, &p)?;
        }
        Ok(p)
    }
}

/// Bracket with a fresh default algebra.
pub fn bracket(p: &LiePoly, q: &LiePoly) -> Result<LiePoly, FreeLieError> {
    FreeLieAlgebra::new().bracket(p, q)
}

pub fn tower_to_poly(t: &Tower) -> Result<LiePoly, FreeLieError> {
    FreeLieAlgebra::new().tower_to_poly(t)
}
