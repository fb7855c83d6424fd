//! Bracket reduction for the 𝔤₂ presentation by hand-proof rules.
//!
//! Elements are combinations of the 14 canonical towers of degree ≤ 3:
//! the generators, `[x_j,x_k]` with `j < k`, and `[x_i,[x_j,x_k]]` with
//! `j < k` except `[x3,[x1,x2]]`, which Jacobi rewrites as
//! `−[x1,[x2,x3]] + [x2,[x1,x3]]`. Any bracket reduces to this form by
//! peeling the outer generator off the left argument,
//!
//! `[[x_a, T], S] = [x_a, [T, S]] − [T, [x_a, S]]`,
//!
//! until only generator-against-tower brackets remain. Those have degree
//! ≤ 4, and degree-4 towers collapse to degree 1 through [`reduce_quadruple`].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::levi_civita;
use crate::free_lie::{FreeLieAlgebra, Letter, LiePoly, Tower};
use crate::linalg::{axpy, int, Rational};

/// Which pattern of repeated indices matched a degree-4 tower `(a,b,c,d)`
/// (after ordering `c < d`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuadrupleCase {
    /// `c = d`: the innermost bracket vanishes.
    InnerRepeat,
    /// `a = b`: second family, `4 ε(a,c,d) x_a`.
    OuterPair,
    /// `a = c`: first family, `2 ε(a,b,d) x_a`.
    FirstThird,
    /// `a = d`: first family after antisymmetry, `−2 ε(a,b,c) x_a`.
    FirstFourth,
    /// `b = c`: third family, `6 ε(a,b,d) x_b`.
    SecondThird,
    /// `b = d`: third family after antisymmetry, `−6 ε(a,b,c) x_b`.
    SecondFourth,
}

fn scaled_generator(one_based: usize, c: i64) -> LiePoly {
    LiePoly::generator((one_based - 1) as Letter).scaled(&int(c))
}

/// Every matching rule for the tower `[x_a,[x_b,[x_c,x_d]]]` (1-based) and
/// the value it assigns.
pub fn quadruple_cases(tuple: [usize; 4]) -> Vec<(QuadrupleCase, LiePoly)> {
    let [a, b, mut c, mut d] = tuple;
    assert!(
        tuple.iter().all(|v| (1..=3).contains(v)),
        "quadruple indices must lie in 1..=3, got {tuple:?}"
    );
    if c == d {
        return vec![(QuadrupleCase::InnerRepeat, LiePoly::zero())];
    }
    let mut sign = 1;
    if c > d {
        std::mem::swap(&mut c, &mut d);
        sign = -1;
    }
    let mut out = Vec::new();
    let mut push = |case, gen, coeff: i64| out.push((case, scaled_generator(gen, sign * coeff)));
    if a == b {
        push(QuadrupleCase::OuterPair, a, 4 * levi_civita(a, c, d));
    }
    if a == c {
        push(QuadrupleCase::FirstThird, a, 2 * levi_civita(a, b, d));
    }
    if a == d {
        push(QuadrupleCase::FirstFourth, a, -2 * levi_civita(a, b, c));
    }
    if b == c {
        push(QuadrupleCase::SecondThird, b, 6 * levi_civita(a, b, d));
    }
    if b == d {
        push(QuadrupleCase::SecondFourth, b, -6 * levi_civita(a, b, c));
    }
    out
}

/// Image of `[x_a,[x_b,[x_c,x_d]]]` (1-based) in the quotient, of degree ≤ 1.
///
/// Panics if no rule matches (impossible with three letters) or if two
/// matching rules disagree.
pub fn reduce_quadruple(a: usize, b: usize, c: usize, d: usize) -> LiePoly {
    let cases = quadruple_cases([a, b, c, d]);
    let Some(((_, first), rest)) = cases.split_first() else {
        panic!(
            "no quadruple rule matches ({a},{b},{c},{d}); four distinct indices over three letters"
        );
    };
    for (case, value) in rest {
        assert_eq!(
            value, first,
            "quadruple rules disagree on ({a},{b},{c},{d}) in case {case:?}"
        );
    }
    first.clone()
}

/// Rational combination of towers. Results of this module only ever use the
/// canonical towers of degree ≤ 3.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TowerElem {
    terms: BTreeMap<Tower, Rational>,
}

impl TowerElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn tower(t: Tower) -> Self {
        TowerElem {
            terms: [(t, int(1))].into_iter().collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tower, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &Tower) -> Rational {
        self.terms.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_scaled(&mut self, s: &Rational, other: &TowerElem) {
        axpy(&mut self.terms, s, &other.terms);
    }

    pub fn scaled(&self, s: &Rational) -> TowerElem {
        let mut out = TowerElem::zero();
        out.add_scaled(s, self);
        out
    }

    /// Coordinates over [`canonical_towers`].
    pub fn coordinates(&self) -> Vec<Rational> {
        canonical_towers()
            .iter()
            .map(|t| self.coefficient(t))
            .collect()
    }

    /// Expansion in the free Lie algebra's Lyndon basis.
    pub fn to_lie_poly(&self) -> LiePoly {
        let alg = FreeLieAlgebra::new();
        let mut out = LiePoly::zero();
        for (t, c) in &self.terms {
            out.add_scaled(c, &alg.tower_to_poly(t).expect("towers of degree <= 3"));
        }
        out
    }
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            f.write_str(&crate::free_lie::format_term(i == 0, c, &t.fmt_with(&[])))?;
        }
        Ok(())
    }
}

/// The 14 canonical towers: degree 1, then degree 2, then degree 3, each in
/// lexicographic order of 0-based indices.
pub fn canonical_towers() -> Vec<Tower> {
    let mut out: Vec<Tower> = (0..3).map(|g| Tower::new(vec![g])).collect();
    for j in 0..3 {
        for k in j + 1..3 {
            out.push(Tower::new(vec![j, k]));
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            for k in j + 1..3 {
                if (i, j, k) != (2, 0, 1) {
                    out.push(Tower::new(vec![i, j, k]));
                }
            }
        }
    }
    out
}

/// Rewrites a tower of degree ≤ 4 (0-based) into canonical form.
pub fn canonical_tower(indices: &[Letter]) -> TowerElem {
    assert!(
        indices.iter().all(|&g| g < 3),
        "the rewriter has three generators"
    );
    match *indices {
        [_] => TowerElem::tower(Tower::new(indices.to_vec())),
        [a, b] => match a.cmp(&b) {
            std::cmp::Ordering::Equal => TowerElem::zero(),
            std::cmp::Ordering::Less => TowerElem::tower(Tower::new(vec![a, b])),
            std::cmp::Ordering::Greater => {
                TowerElem::tower(Tower::new(vec![b, a])).scaled(&int(-1))
            }
        },
        [a, b, c] => {
            if b == c {
                return TowerElem::zero();
            }
            if b > c {
                return canonical_tower(&[a, c, b]).scaled(&int(-1));
            }
            if (a, b, c) == (2, 0, 1) {
                // [x3,[x1,x2]] = −[x1,[x2,x3]] + [x2,[x1,x3]]
                let mut e = TowerElem::tower(Tower::new(vec![0, 1, 2])).scaled(&int(-1));
                e.add_scaled(&int(1), &TowerElem::tower(Tower::new(vec![1, 0, 2])));
                return e;
            }
            TowerElem::tower(Tower::new(vec![a, b, c]))
        }
        [a, b, c, d] => {
            let p = reduce_quadruple(
                a as usize + 1,
                b as usize + 1,
                c as usize + 1,
                d as usize + 1,
            );
            let mut out = TowerElem::zero();
            for (m, coeff) in p.terms() {
                out.add_scaled(coeff, &TowerElem::tower(Tower::new(m.word().to_vec())));
            }
            out
        }
        _ => panic!("canonical_tower takes degree 1 to 4, got {indices:?}"),
    }
}

/// `[x_g, e]` in canonical form.
pub fn ad_generator(g: Letter, e: &TowerElem) -> TowerElem {
    let mut out = TowerElem::zero();
    for (t, c) in e.terms() {
        let mut idx = Vec::with_capacity(t.degree() + 1);
        idx.push(g);
        idx.extend_from_slice(t.indices());
        out.add_scaled(c, &canonical_tower(&idx));
    }
    out
}

/// `[p, q]` for combinations of towers of degree ≤ 3.
pub fn reduce_bracket(p: &TowerElem, q: &TowerElem) -> TowerElem {
    let mut out = TowerElem::zero();
    for (t, c) in p.terms() {
        out.add_scaled(c, &bracket_tower(t.indices(), q));
    }
    out
}

// Induction on the degree of the left tower.
fn bracket_tower(t: &[Letter], q: &TowerElem) -> TowerElem {
    let (&a, inner) = t.split_first().expect("nonempty tower");
    if inner.is_empty() {
        return ad_generator(a, q);
    }
    // [[x_a, T'], q] = [x_a, [T', q]] − [T', [x_a, q]]
    let mut out = ad_generator(a, &bracket_tower(inner, q));
    out.add_scaled(&int(-1), &bracket_tower(inner, &ad_generator(a, q)));
    out
}

/// Converts a free Lie polynomial into canonical tower form by bracketing
/// along each monomial's standard factorization.
pub fn from_lie_poly(p: &LiePoly) -> TowerElem {
    fn monomial(m: &crate::free_lie::LyndonMonomial) -> TowerElem {
        match m.standard_factorization() {
            None => TowerElem::tower(Tower::new(m.word().to_vec())),
            Some((u, v)) => reduce_bracket(&monomial(&u), &monomial(&v)),
        }
    }
    let mut out = TowerElem::zero();
    for (m, c) in p.terms() {
        out.add_scaled(c, &monomial(m));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_lie::tower_to_poly;
    use crate::linalg::rat;

    fn gen(one_based: usize, c: i64) -> LiePoly {
        scaled_generator(one_based, c)
    }

    #[test]
    fn quadruple_examples() {
        assert_eq!(reduce_quadruple(1, 2, 1, 3), gen(1, 2));
        assert_eq!(reduce_quadruple(2, 1, 1, 3), gen(1, -6));
        assert!(reduce_quadruple(1, 2, 3, 3).is_zero());
        let cases = quadruple_cases([1, 2, 1, 2]);
        let kinds: Vec<QuadrupleCase> = cases.iter().map(|(k, _)| *k).collect();
        assert_eq!(
            kinds,
            vec![QuadrupleCase::FirstThird, QuadrupleCase::SecondFourth]
        );
        assert!(cases.iter().all(|(_, v)| v.is_zero()));
    }

    #[test]
    fn relation_families_are_reproduced() {
        for i in 1..=3 {
            for j in 1..=3 {
                for k in 1..=3 {
                    let e = levi_civita(i, j, k);
                    assert_eq!(reduce_quadruple(i, j, i, k), gen(i, 2 * e));
                    assert_eq!(reduce_quadruple(i, i, j, k), gen(i, 4 * e));
                    assert_eq!(reduce_quadruple(i, j, j, k), gen(j, 6 * e));
                }
            }
        }
    }

    #[test]
    fn canonical_set_has_fourteen_towers() {
        let ts = canonical_towers();
        assert_eq!(ts.len(), 14);
        assert!(!ts.contains(&Tower::new(vec![2, 0, 1])));
    }

    #[test]
    fn degree_three_jacobi_in_canonical_coordinates() {
        // T(3,1,2) + T(1,2,3) − T(2,1,3) = 0
        let mut e = canonical_tower(&[2, 0, 1]);
        e.add_scaled(&int(1), &canonical_tower(&[0, 1, 2]));
        e.add_scaled(&int(-1), &canonical_tower(&[1, 0, 2]));
        assert!(e.is_zero(), "{e}");
    }

    #[test]
    fn canonical_towers_agree_with_free_algebra() {
        for a in 0..3u8 {
            for b in 0..3u8 {
                for c in 0..3u8 {
                    let free = tower_to_poly(&Tower::new(vec![a, b, c])).unwrap();
                    assert_eq!(canonical_tower(&[a, b, c]).to_lie_poly(), free);
                }
            }
        }
    }

    #[test]
    fn worked_reductions() {
        let t = |xs: &[Letter]| TowerElem::tower(Tower::new(xs.to_vec()));
        // y1 = ½[x2,x3], y2 = ½[x3,x1], a12 = ⅓[x2,y1], a23 = ⅓[x3,y2], a13 = ⅓[x3,y1]
        let y1 = t(&[1, 2]).scaled(&rat(1, 2));
        let y2 = canonical_tower(&[2, 0]).scaled(&rat(1, 2));
        let a23 = ad_generator(2, &y2).scaled(&rat(1, 3));
        let a12 = ad_generator(1, &y1).scaled(&rat(1, 3));
        let a13 = ad_generator(2, &y1).scaled(&rat(1, 3));
        assert!(reduce_bracket(&y1, &a23).is_zero());
        assert_eq!(reduce_bracket(&a12, &a23), a13);
        let x1 = t(&[0]);
        assert!(reduce_bracket(&x1, &x1).is_zero());
    }

    #[test]
    fn from_lie_poly_inverts_to_lie_poly() {
        for tw in canonical_towers() {
            let e = TowerElem::tower(tw);
            assert_eq!(from_lie_poly(&e.to_lie_poly()), e);
        }
    }
}
