//! Polycyclic presentations: the relation data, its on-disk form, and the
//! overlap (consistency) test.
//!
//! Generators are indexed from 0 in the API. The file format indexes them
//! from 1, matching the usual `g_1, ..., g_n` notation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::collector::{Engine, Steps};
use crate::int::Int;
use crate::GroupElement;

/// Relative order `[G_i : G_{i+1}]` of a polycyclic generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelOrder {
    Finite(u64),
    Infinite,
}

impl RelOrder {
    pub fn is_infinite(self) -> bool {
        matches!(self, RelOrder::Infinite)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            RelOrder::Finite(r) => Some(r),
            RelOrder::Infinite => None,
        }
    }

    fn encode(self) -> u64 {
        self.finite().unwrap_or(0)
    }
}

/// Which conjugation relation: `g_j^{g_i}` (`Pos`) or `g_j^{g_i^{-1}}` (`Neg`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

/// One letter `g_gen^exp` of a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub exp: Int,
}

/// An unreduced word in the generators. Zero-exponent letters are dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GeneratorWord {
    letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Self {
            letters: letters.into_iter().filter(|l| !l.exp.is_zero()).collect(),
        }
    }

    /// Builds a word from `(generator, exponent)` pairs with small exponents.
    pub fn from_pairs(pairs: &[(usize, i64)]) -> Self {
        Self::from_letters(pairs.iter().map(|&(gen, e)| Letter {
            gen,
            exp: Int::from(e),
        }))
    }

    /// The word `g_1^{e_1} ... g_n^{e_n}` spelled by a normal form.
    pub fn from_normal_form(exps: &[Int]) -> Self {
        Self::from_letters(exps.iter().enumerate().map(|(gen, e)| Letter {
            gen,
            exp: e.clone(),
        }))
    }

    pub fn push(&mut self, gen: usize, exp: Int) {
        if !exp.is_zero() {
            self.letters.push(Letter { gen, exp });
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The formal inverse: letters reversed with negated exponents.
    pub fn inverse(&self) -> Self {
        Self {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen,
                    exp: -&l.exp,
                })
                .collect(),
        }
    }

    fn min_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).min()
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (pos, l) in self.letters.iter().enumerate() {
            if pos > 0 {
                f.write_str("*")?;
            }
            if l.exp.is_one() {
                write!(f, "g{}", l.gen + 1)?;
            } else {
                write!(f, "g{}^{}", l.gen + 1, l.exp)?;
            }
        }
        Ok(())
    }
}

/// Free-form provenance attached to a presentation file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_polynomial: Option<String>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("malformed presentation document: {0}")]
    MalformedDocument(String),
    #[error("generator index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("relation {relation} mentions generator g{index}, which is not after its subject")]
    IndexViolation { relation: String, index: usize },
    #[error("missing relation {0}")]
    MissingRelation(String),
    #[error("relation {0} given twice")]
    DuplicateRelation(String),
    #[error("io error: {0}")]
    Io(String),
}

/// A polycyclic presentation
/// `< g_1..g_n | g_j^{g_i} = w_ij, g_j^{g_i^-1} = v_ij, g_k^{r_k} = u_kk >`.
///
/// Construction checks the structural invariants only; use
/// [`check_consistency`] (or [`crate::Group::new`], which runs it) before
/// trusting normal forms.
#[derive(Debug, Clone, PartialEq)]
pub struct PcPresentation {
    orders: Vec<RelOrder>,
    conj_pos: Vec<Vec<Option<GeneratorWord>>>,
    conj_neg: Vec<Vec<Option<GeneratorWord>>>,
    pow: Vec<Option<GeneratorWord>>,
    meta: Meta,
}

/// Accumulates relations; [`PresentationBuilder::build`] validates them.
#[derive(Debug, Clone)]
pub struct PresentationBuilder {
    inner: PcPresentation,
    duplicate: Option<String>,
    bad_index: Option<(String, usize)>,
}

fn conj_name(i: usize, j: usize, sign: Sign) -> String {
    format!("({}, {}, {:+})", i + 1, j + 1, sign.as_i8())
}

impl PresentationBuilder {
    pub fn new(orders: Vec<RelOrder>) -> Self {
        let n = orders.len();
        Self {
            inner: PcPresentation {
                orders,
                conj_pos: vec![vec![None; n]; n],
                conj_neg: vec![vec![None; n]; n],
                pow: vec![None; n],
                meta: Meta::default(),
            },
            duplicate: None,
            bad_index: None,
        }
    }

    pub fn conj(mut self, i: usize, j: usize, sign: Sign, word: GeneratorWord) -> Self {
        let n = self.inner.orders.len();
        if i >= n || j >= n {
            self.bad_index.get_or_insert((conj_name(i, j, sign), i.max(j)));
            return self;
        }
        let table = match sign {
            Sign::Pos => &mut self.inner.conj_pos,
            Sign::Neg => &mut self.inner.conj_neg,
        };
        if table[i][j].replace(word).is_some() {
            self.duplicate.get_or_insert(conj_name(i, j, sign));
        }
        self
    }

    pub fn power(mut self, k: usize, word: GeneratorWord) -> Self {
        if k >= self.inner.orders.len() {
            self.bad_index.get_or_insert((format!("power {}", k + 1), k));
            return self;
        }
        if self.inner.pow[k].replace(word).is_some() {
            self.duplicate.get_or_insert(format!("power {}", k + 1));
        }
        self
    }

    pub fn meta(mut self, meta: Meta) -> Self {
        self.inner.meta = meta;
        self
    }

    pub fn build(self) -> Result<PcPresentation, PresentationError> {
        if let Some((_, index)) = self.bad_index {
            return Err(PresentationError::IndexOutOfRange {
                index: index + 1,
                n: self.inner.orders.len(),
            });
        }
        if let Some(name) = self.duplicate {
            return Err(PresentationError::DuplicateRelation(name));
        }
        self.inner.validate()?;
        Ok(self.inner)
    }
}

impl PcPresentation {
    pub fn builder(orders: Vec<RelOrder>) -> PresentationBuilder {
        PresentationBuilder::new(orders)
    }

    /// Number of polycyclic generators.
    pub fn n(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[RelOrder] {
        &self.orders
    }

    pub fn meta(&self) -> &Meta {
        &self.meta
    }

    /// The stored word for `g_j^{g_i^{±1}}`, if present.
    pub fn conj(&self, i: usize, j: usize, sign: Sign) -> Option<&GeneratorWord> {
        let table = match sign {
            Sign::Pos => &self.conj_pos,
            Sign::Neg => &self.conj_neg,
        };
        table.get(i)?.get(j)?.as_ref()
    }

    /// The power relation word `u_kk` for a finite-order generator.
    pub fn power_word(&self, k: usize) -> Option<&GeneratorWord> {
        self.pow.get(k)?.as_ref()
    }

    /// Number of infinite relative orders.
    pub fn hirsch_length(&self) -> usize {
        self.orders.iter().filter(|o| o.is_infinite()).count()
    }

    fn validate(&self) -> Result<(), PresentationError> {
        let n = self.n();
        if n == 0 {
            return Err(PresentationError::MalformedDocument(
                "a presentation needs at least one generator".into(),
            ));
        }
        for (k, o) in self.orders.iter().enumerate() {
            if let RelOrder::Finite(r) = o {
                if *r < 2 || *r > i64::MAX as u64 {
                    return Err(PresentationError::MalformedDocument(format!(
                        "relative order of g{} must be at least 2 (or 0 for infinite), got {r}",
                        k + 1
                    )));
                }
            }
        }
        let check_word = |w: &GeneratorWord, subject: usize, name: String| {
            for l in w.letters() {
                if l.gen >= n {
                    return Err(PresentationError::IndexOutOfRange {
                        index: l.gen + 1,
                        n,
                    });
                }
            }
            match w.min_gen() {
                Some(g) if g <= subject => Err(PresentationError::IndexViolation {
                    relation: name,
                    index: g + 1,
                }),
                _ => Ok(()),
            }
        };
        for i in 0..n {
            for j in 0..n {
                for sign in [Sign::Pos, Sign::Neg] {
                    let Some(w) = self.conj(i, j, sign) else {
                        continue;
                    };
                    if i >= j {
                        return Err(PresentationError::IndexViolation {
                            relation: conj_name(i, j, sign),
                            index: i.min(j) + 1,
                        });
                    }
                    check_word(w, i, conj_name(i, j, sign))?;
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.conj(i, j, Sign::Pos).is_none() {
                    return Err(PresentationError::MissingRelation(conj_name(i, j, Sign::Pos)));
                }
                if self.orders[i].is_infinite() && self.conj(i, j, Sign::Neg).is_none() {
                    return Err(PresentationError::MissingRelation(conj_name(i, j, Sign::Neg)));
                }
            }
        }
        for k in 0..n {
            match (self.orders[k], &self.pow[k]) {
                (RelOrder::Finite(_), None) => {
                    return Err(PresentationError::MissingRelation(format!("power {}", k + 1)))
                }
                (RelOrder::Infinite, Some(_)) => {
                    return Err(PresentationError::MalformedDocument(format!(
                        "power relation given for infinite generator g{}",
                        k + 1
                    )))
                }
                (RelOrder::Finite(_), Some(w)) => check_word(w, k, format!("power {}", k + 1))?,
                (RelOrder::Infinite, None) => {}
            }
        }
        Ok(())
    }

    /// Parses the JSON document form.
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let doc: Document = serde_json::from_str(text)
            .map_err(|e| PresentationError::MalformedDocument(e.to_string()))?;
        doc.into_presentation()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Document::from_presentation(self))
            .expect("presentation documents always serialize");
        s.push('\n');
        s
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PresentationError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| PresentationError::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::parse(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), PresentationError> {
        std::fs::write(path.as_ref(), self.to_json())
            .map_err(|e| PresentationError::Io(format!("{}: {e}", path.as_ref().display())))
    }
}

/// Same shape as the file format, so presentations can be embedded in other
/// documents.
impl Serialize for PcPresentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Document::from_presentation(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PcPresentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Document::deserialize(d)?
            .into_presentation()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    n: usize,
    orders: Vec<u64>,
    conj: Vec<ConjEntry>,
    pow: Vec<PowEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Meta>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConjEntry {
    i: usize,
    j: usize,
    sign: i8,
    word: Vec<(usize, Int)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PowEntry {
    k: usize,
    word: Vec<(usize, Int)>,
}

fn encode_word(w: &GeneratorWord) -> Vec<(usize, Int)> {
    w.letters().iter().map(|l| (l.gen + 1, l.exp.clone())).collect()
}

impl Document {
    fn from_presentation(p: &PcPresentation) -> Self {
        let n = p.n();
        let mut conj = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for sign in [Sign::Pos, Sign::Neg] {
                    if let Some(w) = p.conj(i, j, sign) {
                        conj.push(ConjEntry {
                            i: i + 1,
                            j: j + 1,
                            sign: sign.as_i8(),
                            word: encode_word(w),
                        });
                    }
                }
            }
        }
        let pow = (0..n)
            .filter_map(|k| {
                p.power_word(k).map(|w| PowEntry {
                    k: k + 1,
                    word: encode_word(w),
                })
            })
            .collect();
        let meta = (p.meta != Meta::default()).then(|| p.meta.clone());
        Document {
            n,
            orders: p.orders.iter().map(|o| o.encode()).collect(),
            conj,
            pow,
            meta,
        }
    }

    fn into_presentation(self) -> Result<PcPresentation, PresentationError> {
        let n = self.n;
        if self.orders.len() != n {
            return Err(PresentationError::MalformedDocument(format!(
                "n = {n} but {} relative orders given",
                self.orders.len()
            )));
        }
        let decode_index = |idx: usize| {
            if idx == 0 || idx > n {
                Err(PresentationError::IndexOutOfRange { index: idx, n })
            } else {
                Ok(idx - 1)
            }
        };
        let decode_word = |letters: Vec<(usize, Int)>| -> Result<GeneratorWord, PresentationError> {
            let mut w = GeneratorWord::new();
            for (idx, exp) in letters {
                w.push(decode_index(idx)?, exp);
            }
            Ok(w)
        };
        let orders = self
            .orders
            .iter()
            .map(|&r| if r == 0 { RelOrder::Infinite } else { RelOrder::Finite(r) })
            .collect();
        let mut b = PresentationBuilder::new(orders);
        for e in self.conj {
            let sign = match e.sign {
                1 => Sign::Pos,
                -1 => Sign::Neg,
                s => {
                    return Err(PresentationError::MalformedDocument(format!(
                        "conjugation sign must be 1 or -1, got {s}"
                    )))
                }
            };
            let (i, j) = (decode_index(e.i)?, decode_index(e.j)?);
            b = b.conj(i, j, sign, decode_word(e.word)?);
        }
        for e in self.pow {
            let k = decode_index(e.k)?;
            b = b.power(k, decode_word(e.word)?);
        }
        if let Some(meta) = self.meta {
            b = b.meta(meta);
        }
        b.build()
    }
}

/// Which overlap identity a consistency failure came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overlap {
    /// `g_k (g_j g_i) = (g_k g_j) g_i`, k > j > i.
    Triple,
    /// `(g_j^{r_j}) g_i = g_j^{r_j - 1} (g_j g_i)`, j > i, r_j finite.
    PowerLeft,
    /// `g_j (g_i^{r_i}) = (g_j g_i) g_i^{r_i - 1}`, j > i, r_i finite.
    PowerRight,
    /// `g_j^{r_j} g_j = g_j g_j^{r_j}`, r_j finite.
    PowerSelf,
    /// `g_j = (g_j g_i^{-1}) g_i`, j > i.
    Inverse,
    /// Collecting a relation word exceeded the step budget.
    Relation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub overlap: Overlap,
    /// 0-based generator indices involved, largest first.
    pub indices: Vec<usize>,
    /// Both collected sides; `None` when collection blew the step budget.
    pub sides: Option<(GroupElement, GroupElement)>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|i| format!("g{}", i + 1)).collect();
        write!(f, "{:?} overlap on [{}]", self.overlap, idx.join(", "))?;
        match &self.sides {
            Some((l, r)) => write!(f, ": {:?} != {:?}", l.exps(), r.exps()),
            None => write!(f, ": collection budget exceeded"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConsistencyReport {
    Pass,
    Fail(Violation),
}

impl ConsistencyReport {
    pub fn is_pass(&self) -> bool {
        matches!(self, ConsistencyReport::Pass)
    }
}

/// Step budget for each collection inside the overlap test.
pub const CONSISTENCY_STEP_BUDGET: u64 = 10_000_000;

/// Runs the overlap test: every pair of collected sides must agree.
pub fn check_consistency(p: &PcPresentation) -> ConsistencyReport {
    let engine = match Engine::new(p, CONSISTENCY_STEP_BUDGET) {
        Ok(e) => e,
        Err(k) => {
            return ConsistencyReport::Fail(Violation {
                overlap: Overlap::Relation,
                indices: vec![k],
                sides: None,
            })
        }
    };
    match run_overlaps(&engine, p) {
        Ok(()) => ConsistencyReport::Pass,
        Err(v) => ConsistencyReport::Fail(v),
    }
}

fn run_overlaps(e: &Engine, p: &PcPresentation) -> Result<(), Violation> {
    let n = p.n();
    let compare = |overlap: Overlap,
                   indices: Vec<usize>,
                   sides: &dyn Fn(&mut Steps) -> Result<(Vec<Int>, Vec<Int>), ()>|
     -> Result<(), Violation> {
        let mut steps = Steps::new(CONSISTENCY_STEP_BUDGET);
        match sides(&mut steps) {
            Ok((l, r)) if l == r => Ok(()),
            Ok((l, r)) => Err(Violation {
                overlap,
                indices,
                sides: Some((GroupElement::from_exps(l), GroupElement::from_exps(r))),
            }),
            Err(()) => Err(Violation {
                overlap,
                indices,
                sides: None,
            }),
        }
    };
    let gen = |k: usize| e.generator_vec(k);
    let gen_pow = |k: usize, m: u64, s: &mut Steps| -> Result<Vec<Int>, ()> {
        let mut v = e.zero_vec();
        e.mul_gen_pow(&mut v, k, &Int::from(m), s).map_err(|_| ())?;
        Ok(v)
    };
    let mul = |a: &[Int], b: &[Int], s: &mut Steps| -> Result<Vec<Int>, ()> {
        let mut v = a.to_vec();
        e.multiply_into(&mut v, b, s).map_err(|_| ())?;
        Ok(v)
    };
    let pow_rel = |k: usize| e.power_relation(k).expect("finite generator").to_vec();

    for k in 0..n {
        for j in 0..k {
            for i in 0..j {
                compare(Overlap::Triple, vec![k, j, i], &|s| {
                    let kj = mul(&gen(k), &gen(j), s)?;
                    let left = mul(&kj, &gen(i), s)?;
                    let ji = mul(&gen(j), &gen(i), s)?;
                    let right = mul(&gen(k), &ji, s)?;
                    Ok((right, left))
                })?;
            }
        }
    }
    for j in 0..n {
        let Some(rj) = p.orders()[j].finite() else {
            continue;
        };
        for i in 0..j {
            compare(Overlap::PowerLeft, vec![j, i], &|s| {
                let left = mul(&pow_rel(j), &gen(i), s)?;
                let ji = mul(&gen(j), &gen(i), s)?;
                let right = mul(&gen_pow(j, rj - 1, s)?, &ji, s)?;
                Ok((left, right))
            })?;
        }
    }
    for i in 0..n {
        let Some(ri) = p.orders()[i].finite() else {
            continue;
        };
        for j in i + 1..n {
            compare(Overlap::PowerRight, vec![j, i], &|s| {
                let left = mul(&gen(j), &pow_rel(i), s)?;
                let ji = mul(&gen(j), &gen(i), s)?;
                let right = mul(&ji, &gen_pow(i, ri - 1, s)?, s)?;
                Ok((left, right))
            })?;
        }
    }
    for j in 0..n {
        if p.orders()[j].finite().is_none() {
            continue;
        }
        compare(Overlap::PowerSelf, vec![j], &|s| {
            let left = mul(&pow_rel(j), &gen(j), s)?;
            let right = mul(&gen(j), &pow_rel(j), s)?;
            Ok((left, right))
        })?;
    }
    // Run for every i, not only infinite ones: the engine always uses the
    // inverse-conjugation images, reconstructed or not.
    for j in 0..n {
        for i in 0..j {
            compare(Overlap::Inverse, vec![j, i], &|s| {
                let mut inv_i = e.zero_vec();
                e.mul_gen_pow(&mut inv_i, i, &Int::from(-1i64), s).map_err(|_| ())?;
                let left = mul(&mul(&gen(j), &inv_i, s)?, &gen(i), s)?;
                Ok((gen(j), left))
            })?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `< t, x | t^2 = 1, x^t = x^-1 >`
    fn infinite_dihedral_doc() -> &'static str {
        r#"{"n": 2, "orders": [2, 0],
            "conj": [{"i": 1, "j": 2, "sign": 1, "word": [[2, -1]]}],
            "pow": [{"k": 1, "word": []}]}"#
    }

    #[test]
    fn parses_infinite_dihedral() {
        let p = PcPresentation::parse(infinite_dihedral_doc()).unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.orders(), &[RelOrder::Finite(2), RelOrder::Infinite]);
        assert_eq!(
            p.conj(0, 1, Sign::Pos),
            Some(&GeneratorWord::from_pairs(&[(1, -1)]))
        );
        assert_eq!(p.conj(0, 1, Sign::Neg), None);
        assert_eq!(p.power_word(0), Some(&GeneratorWord::new()));
        assert_eq!(p.hirsch_length(), 1);
        assert!(check_consistency(&p).is_pass());
    }

    #[test]
    fn rejects_backwards_conjugation_entry() {
        let doc = r#"{"n": 2, "orders": [2, 0],
            "conj": [{"i": 1, "j": 2, "sign": 1, "word": [[2, -1]]},
                     {"i": 2, "j": 1, "sign": 1, "word": [[1, 1]]}],
            "pow": [{"k": 1, "word": []}]}"#;
        assert!(matches!(
            PcPresentation::parse(doc),
            Err(PresentationError::IndexViolation { .. })
        ));
    }

    #[test]
    fn rejects_relation_word_reaching_backwards() {
        let doc = r#"{"n": 3, "orders": [0, 0, 0],
            "conj": [{"i": 1, "j": 2, "sign": 1, "word": [[2, 1]]},
                     {"i": 1, "j": 2, "sign": -1, "word": [[2, 1]]},
                     {"i": 1, "j": 3, "sign": 1, "word": [[3, 1]]},
                     {"i": 1, "j": 3, "sign": -1, "word": [[3, 1]]},
                     {"i": 2, "j": 3, "sign": 1, "word": [[2, 1], [3, 1]]},
                     {"i": 2, "j": 3, "sign": -1, "word": [[3, 1]]}],
            "pow": []}"#;
        match PcPresentation::parse(doc) {
            Err(PresentationError::IndexViolation { index, .. }) => assert_eq!(index, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_inverse_entry_for_infinite_generator() {
        let doc = r#"{"n": 2, "orders": [0, 0],
            "conj": [{"i": 1, "j": 2, "sign": 1, "word": [[2, 1]]}],
            "pow": []}"#;
        assert!(matches!(
            PcPresentation::parse(doc),
            Err(PresentationError::MissingRelation(_))
        ));
    }

    #[test]
    fn missing_forward_entry_and_power() {
        let doc = r#"{"n": 2, "orders": [2, 0], "conj": [], "pow": [{"k": 1, "word": []}]}"#;
        assert!(matches!(
            PcPresentation::parse(doc),
            Err(PresentationError::MissingRelation(_))
        ));
        let doc = r#"{"n": 2, "orders": [2, 0],
            "conj": [{"i": 1, "j": 2, "sign": 1, "word": [[2, -1]]}], "pow": []}"#;
        assert!(matches!(
            PcPresentation::parse(doc),
            Err(PresentationError::MissingRelation(_))
        ));
    }

    #[test]
    fn malformed_documents() {
        for doc in [
            "not json",
            r#"{"n": 1, "orders": [1], "conj": [], "pow": [{"k": 1, "word": []}]}"#,
            r#"{"n": 2, "orders": [0], "conj": [], "pow": []}"#,
            r#"{"n": 1, "orders": [0], "conj": [], "pow": [], "extra": 1}"#,
            r#"{"n": 1, "orders": [0], "conj": [], "pow": [{"k": 1, "word": []}]}"#,
            r#"{"n": 2, "orders": [0, 0],
                "conj": [{"i": 1, "j": 2, "sign": 2, "word": []}], "pow": []}"#,
        ] {
            assert!(
                matches!(
                    PcPresentation::parse(doc),
                    Err(PresentationError::MalformedDocument(_))
                ),
                "{doc}"
            );
        }
        let doc = r#"{"n": 1, "orders": [2], "conj": [], "pow": [{"k": 3, "word": []}]}"#;
        assert!(matches!(
            PcPresentation::parse(doc),
            Err(PresentationError::IndexOutOfRange { index: 3, n: 1 })
        ));
    }

    #[test]
    fn big_exponents_survive_round_trip() {
        let doc = r#"{"n": 2, "orders": [0, 0],
            "conj": [{"i": 1, "j": 2, "sign": 1, "word": [[2, 1]]},
                     {"i": 1, "j": 2, "sign": -1, "word": [[2, 1]]}],
            "pow": [], "meta": {"source_polynomial": "none", "note": "test"}}"#;
        let p = PcPresentation::parse(doc).unwrap();
        assert_eq!(p.meta().source_polynomial.as_deref(), Some("none"));
        let again = PcPresentation::parse(&p.to_json()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn zero_exponent_letters_are_dropped() {
        let w = GeneratorWord::from_pairs(&[(0, 0), (1, 2), (2, 0)]);
        assert_eq!(w.len(), 1);
        assert_eq!(w.to_string(), "g2^2");
        assert_eq!(w.inverse(), GeneratorWord::from_pairs(&[(1, -2)]));
    }

    #[test]
    fn detects_inconsistent_dihedral_variant() {
        let doc = r#"{"n": 2, "orders": [2, 0],
            "conj": [{"i": 1, "j": 2, "sign": 1, "word": [[2, 2]]}],
            "pow": [{"k": 1, "word": []}]}"#;
        let p = PcPresentation::parse(doc).unwrap();
        match check_consistency(&p) {
            ConsistencyReport::Fail(v) => {
                // x (t t) = x  but  (x t) t = t x^2 t = x^4
                assert_eq!(v.overlap, Overlap::PowerRight);
                assert_eq!(v.indices, vec![1, 0]);
                let (l, r) = v.sides.unwrap();
                assert_eq!(l.exps(), &[Int::ZERO, Int::ONE]);
                assert_eq!(r.exps(), &[Int::ZERO, Int::from(4i64)]);
            }
            ConsistencyReport::Pass => panic!("inconsistent presentation passed"),
        }
    }
}
