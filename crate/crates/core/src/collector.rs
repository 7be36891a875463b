//! Collection to normal form and group arithmetic on exponent vectors.
//!
//! The engine collects from the left. Multiplying a normal form
//! `g_1^{e_1} ... g_n^{e_n}` on the right by a letter `g_k^c` lifts the tail
//! `T = g_{k+1}^{e_{k+1}} ... g_n^{e_n}` over the letter:
//!
//! ```text
//! P g_k^{e_k} T g_k^c = P g_k^{e_k + c} T^{g_k^c}
//! ```
//!
//! `T^{g_k^c}` lives in `G_{k+1}`, so every recursive call works strictly to
//! the right of `k`. Conjugation by `g_k^{±1}` is stored as the images of
//! `g_{k+1}, ..., g_n` (collected once at construction). When a trailing block
//! of generators is free abelian and `g_k` maps it into itself, the action on
//! that block is applied as an integer matrix.

use serde::{Deserialize, Serialize};

use crate::int::Int;
use crate::presentation::{
    check_consistency, ConsistencyReport, GeneratorWord, PcPresentation, RelOrder, Sign, Violation,
};

/// Default step budget for [`Group::collect`].
pub const DEFAULT_COLLECT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CollectError {
    #[error("collection exceeded its budget of {0} rewriting steps")]
    BudgetExceeded(u64),
    #[error("word mentions generator g{index} but the group has {n} generators")]
    GeneratorOutOfRange { index: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroupError {
    #[error("presentation is inconsistent: {0}")]
    Inconsistent(Violation),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ElementError {
    #[error("expected {expected} exponents, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("exponent {exp} of g{index} outside 0..{order}")]
    OutOfRange { index: usize, exp: Int, order: u64 },
}

/// A group element in normal form `g_1^{e_1} ... g_n^{e_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    exps: Vec<Int>,
}

impl GroupElement {
    pub(crate) fn from_exps(exps: Vec<Int>) -> Self {
        Self { exps }
    }

    pub fn exps(&self) -> &[Int] {
        &self.exps
    }

    pub fn into_exps(self) -> Vec<Int> {
        self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(Int::is_zero)
    }

    /// Sum of the absolute values of the exponents.
    pub fn length(&self) -> Int {
        length(self)
    }
}

/// Sum of the absolute values of the normal-form exponents.
pub fn length(a: &GroupElement) -> Int {
    let mut acc = Int::ZERO;
    for e in &a.exps {
        if e.is_negative() {
            acc -= e;
        } else {
            acc += e;
        }
    }
    acc
}

/// Total length of a tuple of elements.
pub fn tuple_length(tuple: &[GroupElement]) -> Int {
    tuple.iter().map(length).sum()
}

pub(crate) struct Steps {
    used: u64,
    limit: u64,
}

impl Steps {
    pub(crate) fn new(limit: u64) -> Self {
        Self { used: 0, limit }
    }

    pub(crate) fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    #[inline]
    fn tick(&mut self) -> Result<(), CollectError> {
        self.used += 1;
        if self.used > self.limit {
            Err(CollectError::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

/// Integer matrices of the action of one generator on the abelian block.
struct LinearAction {
    fwd: Vec<Vec<Int>>,
    bwd: Vec<Vec<Int>>,
}

/// Repetition count above which a linear action is raised to a power by
/// squaring instead of being applied step by step.
const SQUARING_THRESHOLD: u64 = 16;

pub(crate) struct Engine {
    n: usize,
    orders: Vec<Option<i64>>,
    /// Collected `u_kk`; `None` for infinite generators.
    power_rel: Vec<Option<Vec<Int>>>,
    power_trivial: Vec<bool>,
    /// `fwd[k][j]` is the normal form of `g_j^{g_k}` for `j > k`.
    fwd: Vec<Vec<Vec<Int>>>,
    /// `bwd[k][j]` is the normal form of `g_j^{g_k^{-1}}` for `j > k`.
    bwd: Vec<Vec<Vec<Int>>>,
    commutes: Vec<Vec<bool>>,
    /// Start of the trailing block of pairwise commuting infinite generators.
    abelian_from: usize,
    linear: Vec<Option<LinearAction>>,
}

impl Engine {
    /// Collects all relation words and derives the inverse conjugates that a
    /// file may omit for finite generators. The error carries the index of
    /// the generator whose relations could not be collected in budget.
    pub(crate) fn new(p: &PcPresentation, budget: u64) -> Result<Self, usize> {
        let n = p.n();
        let mut e = Engine {
            n,
            orders: p
                .orders()
                .iter()
                .map(|o| o.finite().map(|r| r as i64))
                .collect(),
            power_rel: vec![None; n],
            power_trivial: vec![true; n],
            fwd: vec![Vec::new(); n],
            bwd: vec![Vec::new(); n],
            commutes: vec![vec![false; n]; n],
            // fast paths stay off until the tables are complete
            abelian_from: n,
            linear: (0..n).map(|_| None).collect(),
        };
        for k in (0..n).rev() {
            let mut steps = Steps::new(budget);
            e.fill_generator(p, k, &mut steps).map_err(|_| k)?;
        }
        e.abelian_from = e.find_abelian_block(p);
        for k in 0..e.abelian_from {
            e.linear[k] = e.linear_action(k);
        }
        Ok(e)
    }

    fn fill_generator(
        &mut self,
        p: &PcPresentation,
        k: usize,
        steps: &mut Steps,
    ) -> Result<(), CollectError> {
        let n = self.n;
        if let RelOrder::Finite(_) = p.orders()[k] {
            let w = p.power_word(k).expect("validated presentation");
            let v = self.collect_word(w, steps)?;
            self.power_trivial[k] = v.iter().all(Int::is_zero);
            self.power_rel[k] = Some(v);
        }
        let mut fwd = vec![Vec::new(); n];
        for j in k + 1..n {
            let w = p.conj(k, j, Sign::Pos).expect("validated presentation");
            fwd[j] = self.collect_word(w, steps)?;
        }
        self.fwd[k] = fwd;
        let mut bwd = vec![Vec::new(); n];
        for j in k + 1..n {
            bwd[j] = match p.conj(k, j, Sign::Neg) {
                Some(w) => self.collect_word(w, steps)?,
                None => self.reconstruct_inverse_image(k, j, steps)?,
            };
        }
        self.bwd[k] = bwd;
        for j in k + 1..n {
            let unit = self.generator_vec(j);
            self.commutes[k][j] = self.fwd[k][j] == unit && self.bwd[k][j] == unit;
        }
        Ok(())
    }

    /// For finite `r = r_k` with `g_k^r = u`: `g_k^{-1} = g_k^{r-1} u^{-1}`, so
    /// `g_j^{g_k^{-1}} = u (g_j^{g_k^{r-1}}) u^{-1}`.
    fn reconstruct_inverse_image(
        &self,
        k: usize,
        j: usize,
        steps: &mut Steps,
    ) -> Result<Vec<Int>, CollectError> {
        let r = self.orders[k].expect("inverse conjugates are only optional for finite generators");
        let mut h = self.generator_vec(j);
        for _ in 0..r - 1 {
            h = self.apply_images(&self.fwd[k], k + 1, self.n, &h, steps)?;
        }
        let u = self.power_rel[k].as_ref().expect("finite generator");
        let mut out = u.clone();
        self.multiply_into(&mut out, &h, steps)?;
        let u_inv = self.invert(u, steps)?;
        self.multiply_into(&mut out, &u_inv, steps)?;
        Ok(out)
    }

    fn find_abelian_block(&self, p: &PcPresentation) -> usize {
        let mut start = self.n;
        while start > 0 {
            let k = start - 1;
            let ok = p.orders()[k].is_infinite() && (k + 1..self.n).all(|j| self.commutes[k][j]);
            if !ok {
                break;
            }
            start = k;
        }
        start
    }

    fn linear_action(&self, k: usize) -> Option<LinearAction> {
        let a = self.abelian_from;
        if a >= self.n {
            return None;
        }
        let block = |table: &Vec<Vec<Int>>| -> Option<Vec<Vec<Int>>> {
            (a..self.n)
                .map(|j| {
                    let img = &table[j];
                    if img[..a].iter().any(|x| !x.is_zero()) {
                        None
                    } else {
                        Some(img[a..].to_vec())
                    }
                })
                .collect()
        };
        Some(LinearAction {
            fwd: block(&self.fwd[k])?,
            bwd: block(&self.bwd[k])?,
        })
    }

    pub(crate) fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn zero_vec(&self) -> Vec<Int> {
        vec![Int::ZERO; self.n]
    }

    pub(crate) fn generator_vec(&self, k: usize) -> Vec<Int> {
        let mut v = self.zero_vec();
        v[k] = Int::ONE;
        v
    }

    pub(crate) fn power_relation(&self, k: usize) -> Option<&[Int]> {
        self.power_rel[k].as_deref()
    }

    pub(crate) fn collect_word(
        &self,
        w: &GeneratorWord,
        steps: &mut Steps,
    ) -> Result<Vec<Int>, CollectError> {
        let mut v = self.zero_vec();
        for l in w.letters() {
            if l.gen >= self.n {
                return Err(CollectError::GeneratorOutOfRange {
                    index: l.gen + 1,
                    n: self.n,
                });
            }
            self.mul_gen_pow(&mut v, l.gen, &l.exp, steps)?;
        }
        Ok(v)
    }

    /// `e <- e * g_k^c`.
    pub(crate) fn mul_gen_pow(
        &self,
        e: &mut [Int],
        k: usize,
        c: &Int,
        steps: &mut Steps,
    ) -> Result<(), CollectError> {
        if c.is_zero() {
            return Ok(());
        }
        steps.tick()?;
        let n = self.n;
        let mut any_tail = false;
        let mut needs_conj = false;
        for j in k + 1..n {
            if !e[j].is_zero() {
                any_tail = true;
                if !self.commutes[k][j] {
                    needs_conj = true;
                    break;
                }
            }
        }
        let mut new_exp = &e[k] + c;
        let mut carry = Int::ZERO;
        if let Some(r) = self.orders[k] {
            let (q, rem) = new_exp.div_mod_floor(r);
            new_exp = rem;
            carry = q;
        }
        let carry_matters = !carry.is_zero() && !self.power_trivial[k];
        if !needs_conj && !carry_matters {
            e[k] = new_exp;
            return Ok(());
        }

        let mut tail = self.zero_vec();
        if any_tail {
            for j in k + 1..n {
                tail[j] = std::mem::take(&mut e[j]);
            }
        }
        let lifted = if needs_conj {
            self.conj_gen_pow(&tail, k, c, steps)?
        } else {
            tail
        };
        e[k] = new_exp;
        let new_tail = if carry_matters {
            let u = self.power_rel[k].as_ref().expect("finite generator");
            let mut p = self.power(u, &carry, steps)?;
            self.multiply_into(&mut p, &lifted, steps)?;
            p
        } else {
            lifted
        };
        e[k + 1..n].clone_from_slice(&new_tail[k + 1..n]);
        Ok(())
    }

    /// `e <- e * b` for a normal form `b`.
    pub(crate) fn multiply_into(
        &self,
        e: &mut [Int],
        b: &[Int],
        steps: &mut Steps,
    ) -> Result<(), CollectError> {
        for (j, x) in b.iter().enumerate() {
            if !x.is_zero() {
                self.mul_gen_pow(e, j, x, steps)?;
            }
        }
        Ok(())
    }

    fn support(a: &[Int]) -> Option<(usize, usize)> {
        let first = a.iter().position(|x| !x.is_zero())?;
        let last = a.iter().rposition(|x| !x.is_zero())?;
        Some((first, last))
    }

    pub(crate) fn invert(&self, a: &[Int], steps: &mut Steps) -> Result<Vec<Int>, CollectError> {
        match Self::support(a) {
            None => Ok(self.zero_vec()),
            Some((first, _)) if first >= self.abelian_from => Ok(a.iter().map(|x| -x).collect()),
            Some(_) => {
                let mut v = self.zero_vec();
                for j in (0..self.n).rev() {
                    if !a[j].is_zero() {
                        self.mul_gen_pow(&mut v, j, &-&a[j], steps)?;
                    }
                }
                Ok(v)
            }
        }
    }

    pub(crate) fn power(
        &self,
        a: &[Int],
        m: &Int,
        steps: &mut Steps,
    ) -> Result<Vec<Int>, CollectError> {
        let Some((first, last)) = Self::support(a) else {
            return Ok(self.zero_vec());
        };
        if m.is_zero() {
            return Ok(self.zero_vec());
        }
        if first >= self.abelian_from {
            return Ok(a.iter().map(|x| x * m).collect());
        }
        if first == last {
            let mut v = self.zero_vec();
            self.mul_gen_pow(&mut v, first, &(&a[first] * m), steps)?;
            return Ok(v);
        }
        if m.is_one() {
            return Ok(a.to_vec());
        }
        let base = if m.is_negative() {
            self.invert(a, steps)?
        } else {
            a.to_vec()
        };
        let k = m.abs().to_big();
        let bits = k.bits();
        let mut result = self.zero_vec();
        let mut sq = base;
        for i in 0..bits {
            if k.bit(i) {
                self.multiply_into(&mut result, &sq, steps)?;
            }
            if i + 1 < bits {
                let copy = sq.clone();
                self.multiply_into(&mut sq, &copy, steps)?;
            }
        }
        Ok(result)
    }

    /// `h^{g_k^c}` for `h` supported strictly right of `k`.
    fn conj_gen_pow(
        &self,
        h: &[Int],
        k: usize,
        c: &Int,
        steps: &mut Steps,
    ) -> Result<Vec<Int>, CollectError> {
        let forward = !c.is_negative();
        let times = c
            .unsigned_abs_u64()
            .ok_or(CollectError::BudgetExceeded(u64::MAX))?;
        let a = self.abelian_from;
        if times > SQUARING_THRESHOLD {
            if let Some(lin) = &self.linear[k] {
                if self.low_part_commutes(h, k) {
                    steps.tick()?;
                    let m = if forward { &lin.fwd } else { &lin.bwd };
                    let mp = matrix_power(m, times);
                    let mut out = h.to_vec();
                    let high = vec_mat(&h[a..], &mp);
                    for (dst, v) in out[a..].iter_mut().zip(high) {
                        *dst = v;
                    }
                    return Ok(out);
                }
            }
        }
        let mut cur = h.to_vec();
        for _ in 0..times {
            cur = self.apply_aut(k, forward, &cur, steps)?;
        }
        Ok(cur)
    }

    fn low_part_commutes(&self, h: &[Int], k: usize) -> bool {
        (k + 1..self.abelian_from.max(k + 1)).all(|j| h[j].is_zero() || self.commutes[k][j])
    }

    /// One application of conjugation by `g_k^{±1}`.
    fn apply_aut(
        &self,
        k: usize,
        forward: bool,
        h: &[Int],
        steps: &mut Steps,
    ) -> Result<Vec<Int>, CollectError> {
        steps.tick()?;
        let a = self.abelian_from.max(k + 1);
        let images = if forward { &self.fwd[k] } else { &self.bwd[k] };
        let mut out = if self.low_part_commutes(h, k) {
            let mut v = h.to_vec();
            for x in &mut v[a..] {
                *x = Int::ZERO;
            }
            v
        } else {
            self.apply_images(images, k + 1, a, h, steps)?
        };
        if h[a..].iter().all(Int::is_zero) {
            return Ok(out);
        }
        let high = match &self.linear[k] {
            Some(lin) => {
                let m = if forward { &lin.fwd } else { &lin.bwd };
                let mut v = self.zero_vec();
                for (dst, x) in v[a..].iter_mut().zip(vec_mat(&h[a..], m)) {
                    *dst = x;
                }
                v
            }
            None => self.apply_images(images, a, self.n, h, steps)?,
        };
        self.multiply_into(&mut out, &high, steps)?;
        Ok(out)
    }

    /// `prod_{j in from..to} images[j]^{h_j}`, in index order.
    fn apply_images(
        &self,
        images: &[Vec<Int>],
        from: usize,
        to: usize,
        h: &[Int],
        steps: &mut Steps,
    ) -> Result<Vec<Int>, CollectError> {
        let mut out = self.zero_vec();
        for j in from..to {
            if h[j].is_zero() {
                continue;
            }
            let p = self.power(&images[j], &h[j], steps)?;
            self.multiply_into(&mut out, &p, steps)?;
        }
        Ok(out)
    }
}

fn vec_mat(v: &[Int], m: &[Vec<Int>]) -> Vec<Int> {
    let d = m.len();
    let mut out = vec![Int::ZERO; d];
    for (row, x) in m.iter().zip(v) {
        if x.is_zero() {
            continue;
        }
        for (dst, y) in out.iter_mut().zip(row) {
            if !y.is_zero() {
                dst.add_mul(x, y);
            }
        }
    }
    out
}

fn mat_mul(a: &[Vec<Int>], b: &[Vec<Int>]) -> Vec<Vec<Int>> {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

fn matrix_power(m: &[Vec<Int>], mut e: u64) -> Vec<Vec<Int>> {
    let d = m.len();
    let mut result: Vec<Vec<Int>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { Int::ONE } else { Int::ZERO }).collect())
        .collect();
    let mut base = m.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }
    result
}

/// A group given by a consistent polycyclic presentation.
///
/// Construction runs the consistency check, so every `Group` has unique
/// normal forms and its arithmetic never fails.
pub struct Group {
    presentation: PcPresentation,
    engine: Engine,
    budget: u64,
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Group")
            .field("n", &self.engine.n)
            .field("hirsch_length", &self.presentation.hirsch_length())
            .finish()
    }
}

impl Group {
    pub fn new(presentation: PcPresentation) -> Result<Self, GroupError> {
        match check_consistency(&presentation) {
            ConsistencyReport::Pass => {}
            ConsistencyReport::Fail(v) => return Err(GroupError::Inconsistent(v)),
        }
        let engine = Engine::new(&presentation, u64::MAX)
            .expect("consistent presentations collect within an unlimited budget");
        Ok(Self {
            presentation,
            engine,
            budget: DEFAULT_COLLECT_BUDGET,
        })
    }

    /// Sets the step budget used by [`Group::collect`].
    pub fn with_collect_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.presentation
    }

    /// Number of polycyclic generators.
    pub fn n(&self) -> usize {
        self.engine.n()
    }

    pub fn hirsch_length(&self) -> usize {
        self.presentation.hirsch_length()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::from_exps(self.engine.zero_vec())
    }

    pub fn generator(&self, k: usize) -> GroupElement {
        GroupElement::from_exps(self.engine.generator_vec(k))
    }

    /// Wraps an exponent vector after checking the normal-form ranges.
    pub fn element(&self, exps: Vec<Int>) -> Result<GroupElement, ElementError> {
        if exps.len() != self.n() {
            return Err(ElementError::WrongLength {
                expected: self.n(),
                got: exps.len(),
            });
        }
        for (index, (e, o)) in exps.iter().zip(self.presentation.orders()).enumerate() {
            if let RelOrder::Finite(r) = o {
                if e.is_negative() || *e >= Int::from(*r) {
                    return Err(ElementError::OutOfRange {
                        index: index + 1,
                        exp: e.clone(),
                        order: *r,
                    });
                }
            }
        }
        Ok(GroupElement::from_exps(exps))
    }

    pub fn element_from_i64(&self, exps: &[i64]) -> Result<GroupElement, ElementError> {
        self.element(exps.iter().map(|&e| Int::from(e)).collect())
    }

    pub fn is_normal_form(&self, a: &GroupElement) -> bool {
        self.element(a.exps.clone()).is_ok()
    }

    pub fn collect(&self, w: &GeneratorWord) -> Result<GroupElement, CollectError> {
        let mut steps = Steps::new(self.budget);
        self.engine
            .collect_word(w, &mut steps)
            .map(GroupElement::from_exps)
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let mut v = a.exps.clone();
        self.engine
            .multiply_into(&mut v, &b.exps, &mut Steps::unlimited())
            .expect("unlimited budget");
        GroupElement::from_exps(v)
    }

    /// `a * g_k^c`.
    pub fn multiply_generator(&self, a: &GroupElement, k: usize, c: i64) -> GroupElement {
        let mut v = a.exps.clone();
        self.engine
            .mul_gen_pow(&mut v, k, &Int::from(c), &mut Steps::unlimited())
            .expect("unlimited budget");
        GroupElement::from_exps(v)
    }

    pub fn invert(&self, a: &GroupElement) -> GroupElement {
        GroupElement::from_exps(
            self.engine
                .invert(&a.exps, &mut Steps::unlimited())
                .expect("unlimited budget"),
        )
    }

    pub fn power(&self, a: &GroupElement, k: &Int) -> GroupElement {
        GroupElement::from_exps(
            self.engine
                .power(&a.exps, k, &mut Steps::unlimited())
                .expect("unlimited budget"),
        )
    }

    /// `g^a = a^{-1} g a`.
    pub fn conjugate(&self, g: &GroupElement, a: &GroupElement) -> GroupElement {
        let a_inv = self.invert(a);
        self.conjugate_with_inverse(g, a, &a_inv)
    }

    /// `g^a` when `a^{-1}` is already known.
    pub fn conjugate_with_inverse(
        &self,
        g: &GroupElement,
        a: &GroupElement,
        a_inv: &GroupElement,
    ) -> GroupElement {
        let mut steps = Steps::unlimited();
        let mut v = a_inv.exps.clone();
        self.engine
            .multiply_into(&mut v, &g.exps, &mut steps)
            .expect("unlimited budget");
        self.engine
            .multiply_into(&mut v, &a.exps, &mut steps)
            .expect("unlimited budget");
        GroupElement::from_exps(v)
    }

    /// Product of a sequence of elements, left to right.
    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a GroupElement>) -> GroupElement {
        let mut steps = Steps::unlimited();
        let mut v = self.engine.zero_vec();
        for x in items {
            self.engine
                .multiply_into(&mut v, &x.exps, &mut steps)
                .expect("unlimited budget");
        }
        GroupElement::from_exps(v)
    }
}
