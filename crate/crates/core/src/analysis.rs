//! Certification of a structure table: Jacobi identity, derived algebra and
//! center, Killing form, Cartan subalgebra, roots and Cartan type.

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{
    characteristic_polynomial, dot, independent_subset, int, is_zero_vec, kernel_basis,
    rational_roots, solve_in_span, RatMatrix, Rational,
};
use crate::table::StructureTable;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("not simultaneously diagonalizable over the rationals (ad {0})")]
    NotDiagonalizable(String),
    #[error("invalid Cartan candidate: {0}")]
    BadCartan(String),
    #[error("Killing form is degenerate on the Cartan subalgebra")]
    DegenerateKilling,
    #[error("unrecognized type: {0}")]
    UnrecognizedType(String),
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// A triple `i < j < k` on which the cyclic Jacobi sum is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub sum: Vec<Rational>,
}

/// Checks `[b_i,[b_j,b_k]] + [b_j,[b_k,b_i]] + [b_k,[b_i,b_j]] = 0` on every
/// triple of distinct basis elements. Violations come back in lex order.
pub fn check_jacobi(t: &StructureTable) -> Vec<JacobiViolation> {
    let n = t.dim();
    let units: Vec<Vec<Rational>> = (0..n).map(|i| unit(n, i)).collect();
    let ads: Vec<RatMatrix> = (0..n).map(|i| t.ad_matrix(i)).collect();
    let mut out: Vec<JacobiViolation> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut found = Vec::new();
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = ads[i].mul_vec(&t.bracket(&units[j], &units[k]));
                    let b = ads[j].mul_vec(&t.bracket(&units[k], &units[i]));
                    let c = ads[k].mul_vec(&t.bracket(&units[i], &units[j]));
                    let sum = add(&add(&a, &b), &c);
                    if !is_zero_vec(&sum) {
                        found.push(JacobiViolation { i, j, k, sum });
                    }
                }
            }
            found
        })
        .collect();
    out.sort_by_key(|v| (v.i, v.j, v.k));
    out
}

fn span_rank(vectors: &[Vec<Rational>]) -> usize {
    independent_subset(vectors).len()
}

/// `(dim [g,g], dim z(g))`.
pub fn derived_and_center(t: &StructureTable) -> (usize, usize) {
    let brackets: Vec<Vec<Rational>> = t
        .stored_brackets()
        .keys()
        .map(|&(i, j)| t.basis_bracket(i, j))
        .collect();
    (span_rank(&brackets), center_basis(t).len())
}

/// Basis of `{v : [b_i, v] = 0 for all i}`.
pub fn center_basis(t: &StructureTable) -> Vec<Vec<Rational>> {
    let n = t.dim();
    let rows: Vec<Vec<Rational>> = (0..n).flat_map(|i| t.ad_matrix(i).to_rows()).collect();
    if rows.is_empty() {
        return (0..n).map(|i| unit(n, i)).collect();
    }
    kernel_basis(&RatMatrix::from_rows(n, &rows))
}

/// Dimensions of `g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ …` until the series stops
/// shrinking.
pub fn lower_central_series(t: &StructureTable) -> Vec<usize> {
    let n = t.dim();
    let units: Vec<Vec<Rational>> = (0..n).map(|i| unit(n, i)).collect();
    let mut current = units.clone();
    let mut dims = vec![n];
    loop {
        let next: Vec<Vec<Rational>> = units
            .iter()
            .flat_map(|u| current.iter().map(move |v| (u, v)))
            .map(|(u, v)| t.bracket(u, v))
            .collect();
        let next = independent_subset(&next);
        if next.len() == current.len() {
            return dims;
        }
        dims.push(next.len());
        if next.is_empty() {
            return dims;
        }
        current = next;
    }
}

pub fn is_nilpotent(t: &StructureTable) -> bool {
    lower_central_series(t).last() == Some(&0)
}

/// `K(i, j) = tr(ad b_i · ad b_j)`.
pub fn killing_form(t: &StructureTable) -> RatMatrix {
    let n = t.dim();
    let ads: Vec<RatMatrix> = (0..n).map(|i| t.ad_matrix(i)).collect();
    let mut k = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = Rational::zero();
            for a in 0..n {
                for b in 0..n {
                    let x = &ads[i][(a, b)];
                    if !x.is_zero() {
                        s += x * &ads[j][(b, a)];
                    }
                }
            }
            k[(i, j)] = s.clone();
            k[(j, i)] = s;
        }
    }
    k
}

fn form(k: &RatMatrix, u: &[Rational], v: &[Rational]) -> Rational {
    dot(u, &k.mul_vec(v))
}

/// Triples `(i, j, k)` with `K([b_i,b_j], b_k) ≠ K(b_i, [b_j,b_k])`.
pub fn killing_invariance_violations(
    t: &StructureTable,
    k: &RatMatrix,
) -> Vec<(usize, usize, usize)> {
    let n = t.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let ij = t.basis_bracket(i, j);
            for l in 0..n {
                let lhs = form(k, &ij, &unit(n, l));
                let rhs = form(k, &unit(n, i), &t.basis_bracket(j, l));
                if lhs != rhs {
                    out.push((i, j, l));
                }
            }
        }
    }
    out
}

/// Outcome of testing a set of basis elements as a Cartan subalgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanVerdict {
    pub candidate: Vec<usize>,
    /// Pairs of candidates that do not commute, with their bracket.
    pub non_commuting: Vec<(usize, usize, Vec<Rational>)>,
    pub normalizer_dim: usize,
    /// An element of the normalizer outside the candidate span.
    pub normalizer_witness: Option<Vec<Rational>>,
}

impl CartanVerdict {
    pub fn passes(&self) -> bool {
        self.non_commuting.is_empty() && self.normalizer_witness.is_none()
    }

    pub fn describe(&self, t: &StructureTable) -> String {
        if let Some((i, j, v)) = self.non_commuting.first() {
            return format!(
                "[{}, {}] = {} is not zero",
                t.names()[*i],
                t.names()[*j],
                t.format_vector(v)
            );
        }
        if let Some(w) = &self.normalizer_witness {
            return format!(
                "normalizer has dimension {}; {} normalizes but lies outside",
                self.normalizer_dim,
                t.format_vector(w)
            );
        }
        "abelian and self-normalizing".into()
    }
}

/// Checks that `span{b_i : i ∈ candidate}` is abelian and self-normalizing.
pub fn cartan_check(t: &StructureTable, candidate: &[usize]) -> CartanVerdict {
    let n = t.dim();
    let mut non_commuting = Vec::new();
    for (a, &i) in candidate.iter().enumerate() {
        for &j in &candidate[a + 1..] {
            let v = t.basis_bracket(i, j);
            if !is_zero_vec(&v) {
                non_commuting.push((i, j, v));
            }
        }
    }
    let h: Vec<Vec<Rational>> = candidate.iter().map(|&i| unit(n, i)).collect();
    // Rows of `ann` cut out span(h); v normalizes iff ann·ad(h_i)·v = 0 for all i.
    let ann = if h.is_empty() {
        RatMatrix::identity(n)
    } else {
        let k = kernel_basis(&RatMatrix::from_rows(n, &h));
        RatMatrix::from_rows(n, &k)
    };
    let mut rows = Vec::new();
    for &i in candidate {
        rows.extend(ann.mul(&t.ad_matrix(i)).to_rows());
    }
    let normalizer = if rows.is_empty() {
        (0..n).map(|i| unit(n, i)).collect()
    } else {
        kernel_basis(&RatMatrix::from_rows(n, &rows))
    };
    let normalizer_witness = normalizer
        .iter()
        .find(|v| solve_in_span(&h, v).is_none())
        .cloned();
    CartanVerdict {
        candidate: candidate.to_vec(),
        non_commuting,
        normalizer_dim: normalizer.len(),
        normalizer_witness,
    }
}

/// Looks for a Cartan subalgebra among basis elements with diagonal ad:
/// greedily collects a commuting set of them and accepts it if it passes
/// [`cartan_check`].
pub fn find_split_cartan(t: &StructureTable) -> Option<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..t.dim() {
        if !t.ad_matrix(i).is_diagonal() {
            continue;
        }
        if chosen.iter().all(|&j| is_zero_vec(&t.basis_bracket(i, j))) {
            chosen.push(i);
        }
    }
    (!chosen.is_empty() && cartan_check(t, &chosen).passes()).then_some(chosen)
}

/// A simultaneous eigenspace of the Cartan elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSpace {
    /// Eigenvalues on the Cartan basis elements, in order.
    pub root: Vec<Rational>,
    pub basis: Vec<Vec<Rational>>,
    /// Table basis elements lying in this space.
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    pub cartan_indices: Vec<usize>,
    /// Nonzero roots in increasing lex order.
    pub roots: Vec<Vec<Rational>>,
    /// One entry per root, aligned with `roots`.
    pub root_spaces: Vec<RootSpace>,
    /// Dimension of the zero weight space.
    pub zero_weight_dim: usize,
    /// Killing form restricted to the Cartan basis.
    pub cartan_killing: RatMatrix,
}

impl RootDatum {
    pub fn rank(&self) -> usize {
        self.cartan_indices.len()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.root_spaces.iter().map(|s| s.basis.len()).collect()
    }

    pub fn closed_under_negation(&self) -> bool {
        self.roots.iter().all(|r| {
            let neg: Vec<Rational> = r.iter().map(|x| -x).collect();
            self.roots.contains(&neg)
        })
    }

    /// Root of a table basis element, if it is a root vector.
    pub fn root_of_index(&self, i: usize) -> Option<&[Rational]> {
        self.root_spaces
            .iter()
            .find(|s| s.indices.contains(&i))
            .map(|s| s.root.as_slice())
    }

    /// `(α, β)` through the inverse of the Killing form on the Cartan.
    pub fn inner_product(&self, a: &[Rational], b: &[Rational]) -> Result<Rational, AnalysisError> {
        let inv = self
            .cartan_killing
            .inverse()
            .ok_or(AnalysisError::DegenerateKilling)?;
        Ok(dot(a, &inv.mul_vec(b)))
    }
}

/// Matrix of `m` restricted to the invariant subspace spanned by `basis`.
fn restrict(m: &RatMatrix, basis: &[Vec<Rational>]) -> Option<RatMatrix> {
    let d = basis.len();
    let mut r = RatMatrix::zeros(d, d);
    for (j, v) in basis.iter().enumerate() {
        let c = solve_in_span(basis, &m.mul_vec(v))?;
        for (i, x) in c.into_iter().enumerate() {
            r[(i, j)] = x;
        }
    }
    Some(r)
}

/// Splits the whole space into simultaneous eigenspaces of `ad(b_h)` for
/// `h` in `cartan`.
pub fn root_decomposition(
    t: &StructureTable,
    cartan: &[usize],
) -> Result<RootDatum, AnalysisError> {
    let verdict = cartan_check(t, cartan);
    if !verdict.passes() {
        return Err(AnalysisError::BadCartan(verdict.describe(t)));
    }
    let n = t.dim();
    // (weight so far, basis of the joint eigenspace)
    let mut spaces: Vec<(Vec<Rational>, Vec<Vec<Rational>>)> =
        vec![(Vec::new(), (0..n).map(|i| unit(n, i)).collect())];
    for &h in cartan {
        let ad = t.ad_matrix(h);
        let name = &t.names()[h];
        let mut refined = Vec::new();
        for (weight, basis) in spaces {
            let r = restrict(&ad, &basis)
                .ok_or_else(|| AnalysisError::NotDiagonalizable(name.clone()))?;
            let eigen = rational_roots(&characteristic_polynomial(&r))
                .ok_or_else(|| AnalysisError::NotDiagonalizable(name.clone()))?;
            let mut total = 0;
            for lambda in eigen {
                let mut shifted = r.clone();
                for i in 0..basis.len() {
                    shifted[(i, i)] -= &lambda;
                }
                let ker = kernel_basis(&shifted);
                total += ker.len();
                let vecs: Vec<Vec<Rational>> = ker
                    .iter()
                    .map(|c| {
                        let mut v = vec![Rational::zero(); n];
                        for (ci, b) in c.iter().zip(&basis) {
                            for (vk, bk) in v.iter_mut().zip(b) {
                                *vk += ci * bk;
                            }
                        }
                        v
                    })
                    .collect();
                let mut w = weight.clone();
                w.push(lambda);
                refined.push((w, vecs));
            }
            if total != basis.len() {
                return Err(AnalysisError::NotDiagonalizable(name.clone()));
            }
        }
        spaces = refined;
    }
    let k = killing_form(t);
    let mut cartan_killing = RatMatrix::zeros(cartan.len(), cartan.len());
    for (a, &i) in cartan.iter().enumerate() {
        for (b, &j) in cartan.iter().enumerate() {
            cartan_killing[(a, b)] = k[(i, j)].clone();
        }
    }
    let mut zero_weight_dim = 0;
    let mut root_spaces = Vec::new();
    for (root, basis) in spaces {
        if root.iter().all(Zero::is_zero) {
            zero_weight_dim = basis.len();
            continue;
        }
        let indices = (0..n)
            .filter(|&i| solve_in_span(&basis, &unit(n, i)).is_some())
            .collect();
        root_spaces.push(RootSpace {
            root,
            basis,
            indices,
        });
    }
    root_spaces.sort_by(|a, b| a.root.cmp(&b.root));
    Ok(RootDatum {
        cartan_indices: cartan.to_vec(),
        roots: root_spaces.iter().map(|s| s.root.clone()).collect(),
        root_spaces,
        zero_weight_dim,
        cartan_killing,
    })
}

fn lex_positive(r: &[Rational]) -> bool {
    r.iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x > &Rational::zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanType {
    pub simple_roots: Vec<Vec<Rational>>,
    /// `A_ij = 2(α_i, α_j) / (α_j, α_j)`.
    pub matrix: Vec<Vec<i64>>,
    pub name: String,
}

/// Chooses simple roots (lex-positive and indecomposable), computes the
/// Cartan matrix and matches it against the types of rank at most 2.
pub fn cartan_matrix_and_type(rd: &RootDatum) -> Result<CartanType, AnalysisError> {
    let r = rd.rank();
    if rd.cartan_killing.determinant().is_zero() {
        return Err(AnalysisError::DegenerateKilling);
    }
    if rd.multiplicities().iter().any(|&m| m != 1) {
        return Err(AnalysisError::UnrecognizedType(
            "root space of dimension > 1".into(),
        ));
    }
    if !rd.closed_under_negation() {
        return Err(AnalysisError::UnrecognizedType(
            "roots not closed under negation".into(),
        ));
    }
    if independent_subset(&rd.roots).len() != r {
        return Err(AnalysisError::UnrecognizedType(
            "roots do not span the dual of the Cartan".into(),
        ));
    }
    for a in &rd.roots {
        for b in &rd.roots {
            let ratio = solve_in_span(std::slice::from_ref(a), b);
            if let Some(c) = ratio {
                if c[0] != Rational::one() && c[0] != -Rational::one() {
                    return Err(AnalysisError::UnrecognizedType(
                        "root system is not reduced".into(),
                    ));
                }
            }
        }
    }
    let positive: Vec<&Vec<Rational>> = rd.roots.iter().filter(|x| lex_positive(x)).collect();
    let simple: Vec<Vec<Rational>> = positive
        .iter()
        .filter(|a| {
            !positive.iter().any(|b| {
                let rest: Vec<Rational> = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
                positive.iter().any(|c| **c == rest)
            })
        })
        .map(|a| (*a).clone())
        .collect();
    if simple.len() != r {
        return Err(AnalysisError::UnrecognizedType(format!(
            "{} simple roots for rank {r}",
            simple.len()
        )));
    }
    let mut matrix = vec![vec![0i64; r]; r];
    for i in 0..r {
        for j in 0..r {
            let v = int(2) * rd.inner_product(&simple[i], &simple[j])?
                / rd.inner_product(&simple[j], &simple[j])?;
            if !v.is_integer() {
                return Err(AnalysisError::UnrecognizedType(format!(
                    "non-integral Cartan entry {v}"
                )));
            }
            matrix[i][j] = v.to_integer().to_i64().unwrap_or(i64::MAX);
        }
    }
    let name = catalog_name(&matrix, rd.roots.len())?;
    Ok(CartanType {
        simple_roots: simple,
        matrix,
        name,
    })
}

fn catalog_name(m: &[Vec<i64>], root_count: usize) -> Result<String, AnalysisError> {
    let (name, roots) = match m.len() {
        1 if m[0][0] == 2 => ("A1", 2),
        2 if m[0][0] == 2 && m[1][1] == 2 => match (m[0][1], m[1][0]) {
            (0, 0) => ("A1xA1", 4),
            (-1, -1) => ("A2", 6),
            (-1, -2) | (-2, -1) => ("B2", 8),
            (-1, -3) | (-3, -1) => ("G2", 12),
            _ => {
                return Err(AnalysisError::UnrecognizedType(format!(
                    "Cartan matrix {m:?}"
                )))
            }
        },
        _ => {
            return Err(AnalysisError::UnrecognizedType(format!(
                "rank {} is outside the catalog",
                m.len()
            )))
        }
    };
    if roots != root_count {
        return Err(AnalysisError::UnrecognizedType(format!(
            "{name} has {roots} roots, found {root_count}"
        )));
    }
    Ok(name.to_string())
}

/// Names of the 𝔰𝔩(3) part of the 𝔤₂ basis.
pub const SL3_NAMES: [&str; 8] = ["h1", "h2", "a12", "a13", "a23", "a21", "a31", "a32"];

fn sl3_matrix(name: &str) -> Option<RatMatrix> {
    let mut m = RatMatrix::zeros(3, 3);
    let one = Rational::one();
    match name {
        "h1" | "h2" => {
            let i = if name == "h1" { 0 } else { 1 };
            m[(i, i)] = one.clone();
            m[(i + 1, i + 1)] = -one;
        }
        _ => {
            let b = name.strip_prefix('a')?.as_bytes();
            let i = (b.first()? - b'1') as usize;
            let j = (b.get(1)? - b'1') as usize;
            m[(i, j)] = one;
        }
    }
    Some(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl3Verdict {
    pub missing_names: Vec<String>,
    /// Pairs where the table disagrees with the matrix model.
    pub mismatches: Vec<String>,
    pub x_invariant: bool,
    pub y_invariant: bool,
}

impl Sl3Verdict {
    pub fn passes(&self) -> bool {
        self.missing_names.is_empty()
            && self.mismatches.is_empty()
            && self.x_invariant
            && self.y_invariant
    }
}

/// Checks the `h`, `a` elements against `a_ij ↦ e_ij`,
/// `h_i ↦ e_ii − e_{i+1,i+1}` and that `span{x}` and `span{y}` are invariant
/// under them.
pub fn verify_sl3_subalgebra(t: &StructureTable) -> Sl3Verdict {
    let lookup = |names: &[&str]| -> (Vec<usize>, Vec<String>) {
        let mut found = Vec::new();
        let mut missing = Vec::new();
        for s in names {
            match t.index_of(s) {
                Some(i) => found.push(i),
                None => missing.push(s.to_string()),
            }
        }
        (found, missing)
    };
    let (sub, mut missing_names) = lookup(&SL3_NAMES);
    let (xs, m2) = lookup(&["x1", "x2", "x3"]);
    let (ys, m3) = lookup(&["y1", "y2", "y3"]);
    missing_names.extend(m2);
    missing_names.extend(m3);
    if !missing_names.is_empty() {
        return Sl3Verdict {
            missing_names,
            mismatches: Vec::new(),
            x_invariant: false,
            y_invariant: false,
        };
    }
    let n = t.dim();
    let flat = |m: &RatMatrix| m.to_rows().concat();
    let models: Vec<RatMatrix> = SL3_NAMES
        .iter()
        .map(|s| sl3_matrix(s).expect("valid name"))
        .collect();
    let model_rows: Vec<Vec<Rational>> = models.iter().map(flat).collect();
    let mut mismatches = Vec::new();
    for a in 0..8 {
        for b in a + 1..8 {
            let comm = models[a].mul(&models[b]).sub(&models[b].mul(&models[a]));
            let coeffs = solve_in_span(&model_rows, &flat(&comm)).expect("sl3 is closed");
            let mut expected = vec![Rational::zero(); n];
            for (k, c) in coeffs.into_iter().enumerate() {
                expected[sub[k]] = c;
            }
            let actual = t.basis_bracket(sub[a], sub[b]);
            if actual != expected {
                mismatches.push(format!(
                    "[{}, {}]: table {}, matrix model {}",
                    SL3_NAMES[a],
                    SL3_NAMES[b],
                    t.format_vector(&actual),
                    t.format_vector(&expected)
                ));
            }
        }
    }
    let invariant = |target: &[usize]| {
        sub.iter().all(|&s| {
            target.iter().all(|&v| {
                t.basis_bracket(s, v)
                    .iter()
                    .enumerate()
                    .all(|(k, c)| c.is_zero() || target.contains(&k))
            })
        })
    };
    Sl3Verdict {
        missing_names,
        mismatches,
        x_invariant: invariant(&xs),
        y_invariant: invariant(&ys),
    }
}

/// Everything `classify` reports about a table.
#[derive(Clone, Debug)]
pub struct Classification {
    pub jacobi_violations: Vec<JacobiViolation>,
    pub derived_dim: usize,
    pub center_dim: usize,
    pub killing_determinant: Rational,
    pub nilpotent: bool,
    pub cartan: Option<Vec<usize>>,
    pub roots: Option<RootDatum>,
    pub cartan_type: Result<CartanType, String>,
}

impl Classification {
    pub fn identified(&self) -> bool {
        self.cartan_type.is_ok()
    }

    /// `G2`, `A1`, … or `unrecognized (reason)`.
    pub fn type_line(&self) -> String {
        match &self.cartan_type {
            Ok(c) => c.name.clone(),
            Err(why) => format!("unrecognized ({why})"),
        }
    }
}

/// Runs the whole certification. `cartan` overrides the automatic search
/// for a split Cartan subalgebra among basis elements.
pub fn classify(t: &StructureTable, cartan: Option<&[usize]>) -> Classification {
    let jacobi_violations = check_jacobi(t);
    let (derived_dim, center_dim) = derived_and_center(t);
    let killing_determinant = killing_form(t).determinant();
    let nilpotent = is_nilpotent(t);
    let mut out = Classification {
        jacobi_violations,
        derived_dim,
        center_dim,
        killing_determinant,
        nilpotent,
        cartan: None,
        roots: None,
        cartan_type: Err(String::new()),
    };
    if !out.jacobi_violations.is_empty() {
        out.cartan_type = Err("Jacobi identity fails".into());
        return out;
    }
    if t.dim() == 0 {
        out.cartan_type = Err("zero-dimensional".into());
        return out;
    }
    if out.killing_determinant.is_zero() {
        out.cartan_type = Err(if nilpotent {
            "nilpotent: Killing form degenerate".into()
        } else {
            "Killing form degenerate".into()
        });
        return out;
    }
    let chosen = match cartan {
        Some(c) => Some(c.to_vec()),
        None => find_split_cartan(t),
    };
    let Some(chosen) = chosen else {
        out.cartan_type = Err("no split Cartan subalgebra among basis elements".into());
        return out;
    };
    out.cartan = Some(chosen.clone());
    match root_decomposition(t, &chosen) {
        Ok(rd) => {
            out.cartan_type = cartan_matrix_and_type(&rd).map_err(|e| e.to_string());
            out.roots = Some(rd);
        }
        Err(e) => out.cartan_type = Err(e.to_string()),
    }
    out
}

pub struct ClassificationReport<'a> {
    pub table: &'a StructureTable,
    pub result: &'a Classification,
}

impl fmt::Display for ClassificationReport<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (t, c) = (self.table, self.result);
        let names = t.names();
        match c.jacobi_violations.first() {
            None => writeln!(f, "jacobi: ok ({} triples)", binomial3(t.dim()))?,
            Some(v) => writeln!(
                f,
                "jacobi: FAILED at ({}, {}, {}), {} violating triples",
                names[v.i],
                names[v.j],
                names[v.k],
                c.jacobi_violations.len()
            )?,
        }
        writeln!(
            f,
            "derived dim = {}, center dim = {}",
            c.derived_dim, c.center_dim
        )?;
        writeln!(
            f,
            "killing determinant nonzero: {}",
            if c.killing_determinant.is_zero() {
                "no"
            } else {
                "yes"
            }
        )?;
        if let Some(h) = &c.cartan {
            let hn: Vec<&str> = h.iter().map(|&i| names[i].as_str()).collect();
            writeln!(f, "cartan: {}", hn.join(" "))?;
        }
        if let Some(rd) = &c.roots {
            writeln!(f, "roots: {}", rd.roots.len())?;
        }
        if let Ok(ct) = &c.cartan_type {
            let rows: Vec<String> = ct
                .matrix
                .iter()
                .map(|r| {
                    format!(
                        "[{}]",
                        r.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")
                    )
                })
                .collect();
            writeln!(f, "cartan matrix: [{}]", rows.join(", "))?;
        }
        writeln!(f, "type: {}", c.type_line())
    }
}

fn binomial3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Bracket<'a> = (usize, usize, &'a [(usize, i64)]);

    fn table(names: &[&str], brackets: &[Bracket]) -> StructureTable {
        let mut t = StructureTable::new(names.iter().map(|s| s.to_string()).collect());
        for &(i, j, terms) in brackets {
            let mut v = vec![Rational::zero(); names.len()];
            for &(k, c) in terms {
                v[k] = int(c);
            }
            t.set_bracket(i, j, &v);
        }
        t
    }

    fn sl2() -> StructureTable {
        table(
            &["e", "f", "h"],
            &[(0, 1, &[(2, 1)]), (2, 0, &[(0, 2)]), (2, 1, &[(1, -2)])],
        )
    }

    fn heisenberg() -> StructureTable {
        table(&["p", "q", "z"], &[(0, 1, &[(2, 1)])])
    }

    #[test]
    fn sl2_is_a1() {
        let t = sl2();
        assert!(check_jacobi(&t).is_empty());
        assert_eq!(derived_and_center(&t), (3, 0));
        let k = killing_form(&t);
        assert_eq!(k[(2, 2)], int(8));
        assert_eq!(k[(0, 1)], int(4));
        assert!(killing_invariance_violations(&t, &k).is_empty());
        assert_eq!(find_split_cartan(&t), Some(vec![2]));
        let rd = root_decomposition(&t, &[2]).unwrap();
        assert_eq!(rd.roots, vec![vec![int(-2)], vec![int(2)]]);
        let ct = cartan_matrix_and_type(&rd).unwrap();
        assert_eq!(ct.matrix, vec![vec![2]]);
        assert_eq!(ct.name, "A1");
    }

    #[test]
    fn heisenberg_is_nilpotent() {
        let t = heisenberg();
        assert!(check_jacobi(&t).is_empty());
        assert_eq!(derived_and_center(&t), (1, 1));
        assert_eq!(lower_central_series(&t), vec![3, 1, 0]);
        let c = classify(&t, None);
        assert_eq!(
            c.type_line(),
            "unrecognized (nilpotent: Killing form degenerate)"
        );
        assert!(!c.identified());
    }

    #[test]
    fn abelian_tables() {
        let t = StructureTable::new(vec!["a".into(), "b".into(), "c".into()]);
        assert_eq!(derived_and_center(&t), (0, 3));
        assert!(killing_form(&t).is_zero());
        let two = StructureTable::new(vec!["a".into(), "b".into()]);
        assert!(cartan_check(&two, &[0, 1]).passes());
        assert!(check_jacobi(&two).is_empty());
    }

    #[test]
    fn broken_jacobi_is_reported() {
        // [a,b] = a, [a,c] = b: the cyclic sum is [b,[c,a]] + [c,[a,b]] = −b
        let t = table(&["a", "b", "c"], &[(0, 1, &[(0, 1)]), (0, 2, &[(1, 1)])]);
        let v = check_jacobi(&t);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].i, v[0].j, v[0].k), (0, 1, 2));
        assert_eq!(v[0].sum, vec![int(0), int(-1), int(0)]);
    }

    #[test]
    fn cartan_check_witnesses() {
        let t = sl2();
        let bad = cartan_check(&t, &[0]);
        // span{e} is abelian but normalized by h
        assert!(bad.non_commuting.is_empty());
        assert!(bad.normalizer_witness.is_some());
        let pair = cartan_check(&t, &[0, 2]);
        assert_eq!(pair.non_commuting.len(), 1);
        assert!(root_decomposition(&t, &[0]).is_err());
    }

    #[test]
    fn non_split_rotation_is_rejected() {
        // so(3): [a,b]=c, [b,c]=a, [c,a]=b; no rational eigenvectors for ad(a)
        let t = table(
            &["a", "b", "c"],
            &[(0, 1, &[(2, 1)]), (1, 2, &[(0, 1)]), (2, 0, &[(1, 1)])],
        );
        assert!(check_jacobi(&t).is_empty());
        assert!(matches!(
            root_decomposition(&t, &[0]),
            Err(AnalysisError::NotDiagonalizable(_))
        ));
        assert_eq!(killing_form(&t)[(0, 0)], int(-2));
        assert!(find_split_cartan(&t).is_none());
    }

    #[test]
    fn catalog_lookup() {
        assert_eq!(catalog_name(&[vec![2, -1], vec![-1, 2]], 6).unwrap(), "A2");
        assert_eq!(catalog_name(&[vec![2, -2], vec![-1, 2]], 8).unwrap(), "B2");
        assert_eq!(catalog_name(&[vec![2, -3], vec![-1, 2]], 12).unwrap(), "G2");
        assert!(catalog_name(&[vec![2, -3], vec![-1, 2]], 10).is_err());
        assert!(catalog_name(&vec![vec![2; 3]; 3], 0).is_err());
    }
}
