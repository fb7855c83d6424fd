#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use liepres::document::table_from_json;
use liepres::linalg::{int, Rational};
use liepres::table::StructureTable;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn golden_table() -> StructureTable {
    table_from_json(&read_fixture("g2_golden.json")).expect("golden table parses")
}

/// Number of Lyndon words of length `n` over `k` letters,
/// `(1/n) Σ_{d | n} μ(d) k^{n/d}`.
pub fn witt(k: u64, n: u64) -> u64 {
    fn mobius(mut n: u64) -> i64 {
        let mut m = 1;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    }
    let s: i64 = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| mobius(d) * k.pow((n / d) as u32) as i64)
        .sum();
    (s / n as i64) as u64
}

/// Polynomial in noncommuting letters.
pub type Assoc = BTreeMap<Vec<u8>, Rational>;

pub fn assoc_mul(a: &Assoc, b: &Assoc) -> Assoc {
    let mut out = Assoc::new();
    for (u, x) in a {
        for (v, y) in b {
            let mut w = u.clone();
            w.extend_from_slice(v);
            *out.entry(w).or_insert_with(|| int(0)) += x * y;
        }
    }
    out.retain(|_, c| *c != int(0));
    out
}

pub fn assoc_add(a: &Assoc, b: &Assoc, s: &Rational) -> Assoc {
    let mut out = a.clone();
    for (w, c) in b {
        *out.entry(w.clone()).or_insert_with(|| int(0)) += c * s;
    }
    out.retain(|_, c| *c != int(0));
    out
}

pub fn assoc_commutator(a: &Assoc, b: &Assoc) -> Assoc {
    assoc_add(&assoc_mul(a, b), &assoc_mul(b, a), &int(-1))
}

fn is_lyndon_word(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Associative image of the standard bracketing of a Lyndon word:
/// split off the longest proper Lyndon suffix and take the commutator.
pub fn expand_lyndon(w: &[u8]) -> Assoc {
    if w.len() == 1 {
        return [(w.to_vec(), int(1))].into_iter().collect();
    }
    let split = (1..w.len())
        .find(|&i| is_lyndon_word(&w[i..]))
        .expect("Lyndon words of length > 1 have a proper Lyndon suffix");
    assoc_commutator(&expand_lyndon(&w[..split]), &expand_lyndon(&w[split..]))
}
