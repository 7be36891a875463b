//! Finite permutation groups with a polycyclic generating sequence, used as
//! brute-force oracles for the collector.
#![allow(dead_code)]

use std::collections::HashMap;

use pcaag_core::{GeneratorWord, Group, GroupElement, PcPresentation, RelOrder, Sign};

/// Permutation of `0..n`, acting on the right: `(p * q)[x] = q[p[x]]`.
pub type Perm = Vec<usize>;

pub fn perm_mul(p: &Perm, q: &Perm) -> Perm {
    p.iter().map(|&x| q[x]).collect()
}

pub fn perm_inv(p: &Perm) -> Perm {
    let mut out = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        out[y] = x;
    }
    out
}

pub fn perm_id(n: usize) -> Perm {
    (0..n).collect()
}

pub fn perm_pow(p: &Perm, k: i64) -> Perm {
    let base = if k < 0 { perm_inv(p) } else { p.clone() };
    let mut acc = perm_id(p.len());
    for _ in 0..k.unsigned_abs() {
        acc = perm_mul(&acc, &base);
    }
    acc
}

/// A finite group given by permutations `g_1, ..., g_n` with relative
/// orders `r_i`, together with the table of all normal forms.
pub struct PermPcGroup {
    pub name: &'static str,
    pub gens: Vec<Perm>,
    pub orders: Vec<u64>,
    /// Every normal-form exponent vector with its permutation.
    pub elements: Vec<(Vec<i64>, Perm)>,
    index: HashMap<Perm, usize>,
}

impl PermPcGroup {
    /// Enumerates `g_1^{e_1} ... g_n^{e_n}` for `0 <= e_i < r_i`; panics if
    /// two exponent vectors give the same permutation.
    pub fn new(name: &'static str, gens: Vec<Perm>, orders: Vec<u64>) -> Self {
        let degree = gens[0].len();
        let mut elements: Vec<(Vec<i64>, Perm)> = vec![(vec![], perm_id(degree))];
        for (g, &r) in gens.iter().zip(&orders) {
            let mut next = Vec::new();
            for (exps, p) in &elements {
                let mut cur = p.clone();
                for e in 0..r as i64 {
                    let mut v = exps.clone();
                    v.push(e);
                    next.push((v, cur.clone()));
                    cur = perm_mul(&cur, g);
                }
            }
            elements = next;
        }
        let index: HashMap<Perm, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, (_, p))| (p.clone(), i))
            .collect();
        assert_eq!(index.len(), elements.len(), "{name}: not a polycyclic sequence");
        Self {
            name,
            gens,
            orders,
            elements,
            index,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn normal_form(&self, p: &Perm) -> &[i64] {
        &self.elements[self.index[p]].0
    }

    pub fn perm_of(&self, exps: &[i64]) -> Perm {
        let mut acc = perm_id(self.gens[0].len());
        for (g, &e) in self.gens.iter().zip(exps) {
            acc = perm_mul(&acc, &perm_pow(g, e));
        }
        acc
    }

    fn word(&self, p: &Perm) -> GeneratorWord {
        let pairs: Vec<(usize, i64)> =
            self.normal_form(p).iter().copied().enumerate().collect();
        GeneratorWord::from_pairs(&pairs)
    }

    /// Reads the relations off the permutations. With `with_inverse`, the
    /// optional `g_j^{g_i^{-1}}` relations are included as well.
    pub fn presentation(&self, with_inverse: bool) -> PcPresentation {
        let n = self.gens.len();
        let orders = self.orders.iter().map(|&r| RelOrder::Finite(r)).collect();
        let mut b = PcPresentation::builder(orders);
        for i in 0..n {
            let gi = &self.gens[i];
            let gi_inv = perm_inv(gi);
            for j in i + 1..n {
                let gj = &self.gens[j];
                let pos = perm_mul(&perm_mul(&gi_inv, gj), gi);
                b = b.conj(i, j, Sign::Pos, self.word(&pos));
                if with_inverse {
                    let neg = perm_mul(&perm_mul(gi, gj), &gi_inv);
                    b = b.conj(i, j, Sign::Neg, self.word(&neg));
                }
            }
            b = b.power(i, self.word(&perm_pow(gi, self.orders[i] as i64)));
        }
        b.build().expect("relations of a valid sequence are well formed")
    }

    pub fn element(&self, group: &Group, exps: &[i64]) -> GroupElement {
        group.element_from_i64(exps).unwrap()
    }
}

pub fn to_i64(e: &GroupElement) -> Vec<i64> {
    e.exps().iter().map(|x| x.to_i64().unwrap()).collect()
}

/// Dihedral group of order `2m` acting on `Z/m`; sequence `(s, r)`.
pub fn dihedral(m: usize) -> PermPcGroup {
    let r: Perm = (0..m).map(|x| (x + 1) % m).collect();
    let s: Perm = (0..m).map(|x| (m - x) % m).collect();
    PermPcGroup::new("dihedral", vec![s, r], vec![2, m as u64])
}

/// Row vectors of `F_p^d`, indexed in base `p`.
fn vectors(p: usize, d: usize) -> Vec<Vec<usize>> {
    (0..p.pow(d as u32))
        .map(|mut k| {
            (0..d)
                .map(|_| {
                    let c = k % p;
                    k /= p;
                    c
                })
                .collect()
        })
        .collect()
}

/// Permutation `v ↦ v M` of `F_p^d`.
fn matrix_perm(p: usize, m: &[Vec<usize>]) -> Perm {
    let d = m.len();
    vectors(p, d)
        .iter()
        .map(|v| {
            let w: Vec<usize> = (0..d)
                .map(|j| (0..d).map(|i| v[i] * m[i][j]).sum::<usize>() % p)
                .collect();
            w.iter().rev().fold(0, |acc, &c| acc * p + c)
        })
        .collect()
}

/// Upper unitriangular 3x3 matrices over `F_p`; sequence `(X, Y, Z)` with
/// `Z = [X, Y]` central.
pub fn heisenberg(p: usize) -> PermPcGroup {
    let unit = |i: usize, j: usize| {
        let mut m = vec![vec![0; 3]; 3];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = 1;
        }
        m[i][j] = 1;
        m
    };
    PermPcGroup::new(
        "heisenberg",
        vec![
            matrix_perm(p, &unit(0, 1)),
            matrix_perm(p, &unit(1, 2)),
            matrix_perm(p, &unit(0, 2)),
        ],
        vec![p as u64; 3],
    )
}

/// Quaternion group inside `SL(2, 3)`; sequence `(i, j, -1)`.
pub fn quaternion() -> PermPcGroup {
    let i = matrix_perm(3, &[vec![0, 2], vec![1, 0]]);
    let j = matrix_perm(3, &[vec![1, 1], vec![1, 2]]);
    let minus = matrix_perm(3, &[vec![2, 0], vec![0, 2]]);
    PermPcGroup::new("quaternion", vec![i, j, minus], vec![2, 2, 2])
}

/// Symmetric group on 4 points; sequence `((0 1), (0 1 2), (0 1)(2 3), (0 2)(1 3))`.
pub fn symmetric4() -> PermPcGroup {
    PermPcGroup::new(
        "symmetric4",
        vec![
            vec![1, 0, 2, 3],
            vec![1, 2, 0, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
        ],
        vec![2, 3, 2, 2],
    )
}

/// Compares multiply, invert and small powers against the permutations on
/// every element and every pair. Returns the number of checks.
pub fn exhaustive_check(oracle: &PermPcGroup, group: &Group) -> Result<usize, String> {
    let elems: Vec<GroupElement> = oracle
        .elements
        .iter()
        .map(|(e, _)| oracle.element(group, e))
        .collect();
    let mut checks = 0;
    for (x, (xe, xp)) in elems.iter().zip(&oracle.elements) {
        let inv = to_i64(&group.invert(x));
        if inv != oracle.normal_form(&perm_inv(xp)) {
            return Err(format!("{}: inverse of {xe:?}", oracle.name));
        }
        for k in [-7i64, -2, -1, 0, 1, 2, 3, 5, 13] {
            let pw = to_i64(&group.power(x, &k.into()));
            if pw != oracle.normal_form(&perm_pow(xp, k)) {
                return Err(format!("{}: {xe:?}^{k}", oracle.name));
            }
        }
        for (y, (ye, yp)) in elems.iter().zip(&oracle.elements) {
            let prod = to_i64(&group.multiply(x, y));
            if prod != oracle.normal_form(&perm_mul(xp, yp)) {
                return Err(format!("{}: {xe:?} * {ye:?}", oracle.name));
            }
            checks += 1;
        }
    }
    Ok(checks)
}
