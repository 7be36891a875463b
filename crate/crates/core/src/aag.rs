//! The AAG commutator key exchange.
//!
//! Alice publishes `ā = (a_1, ..., a_N1)`, Bob publishes `b̄`. Alice's secret
//! is `A = a_{s_1}^{ε_1} ... a_{s_L}^{ε_L}`, Bob's is built the same way from
//! `b̄`. Alice sends `b̄' = (A^{-1} b_i A)`, Bob sends `ā' = (B^{-1} a_i B)`,
//! and both arrive at `K = A^{-1} B^{-1} A B`.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::presentation::Sign;
use crate::rng::Rng;
use crate::{Group, GroupElement, Int, PcPresentation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AagError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("could not reach an element of length in [{l1}, {l2}] after {attempts} draws")]
    GenerationStalled { l1: u64, l2: u64, attempts: u64 },
    #[error("protocol self-check failed: {0}")]
    ProtocolSelfCheckFailed(&'static str),
}

/// One factor `x_index^sign` of a word over a public set. `index` is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub index: usize,
    pub sign: Sign,
}

impl Factor {
    pub fn new(index: usize, sign: Sign) -> Self {
        Self { index, sign }
    }

    pub fn inverse(self) -> Self {
        let sign = match self.sign {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        };
        Self { sign, ..self }
    }
}

/// Serialised as `[index, ±1]` with a 1-based index.
impl Serialize for Factor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.index + 1, self.sign.as_i8()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Factor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (index, sign) = <(usize, i8)>::deserialize(d)?;
        let sign = match sign {
            1 => Sign::Pos,
            -1 => Sign::Neg,
            _ => return Err(serde::de::Error::custom("factor sign must be 1 or -1")),
        };
        if index == 0 {
            return Err(serde::de::Error::custom("factor indices start at 1"));
        }
        Ok(Factor::new(index - 1, sign))
    }
}

/// Inverse of a word over a public set: reversed, with every sign flipped.
pub fn inverse_word(word: &[Factor]) -> Vec<Factor> {
    word.iter().rev().map(|f| f.inverse()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PublicSet {
    pub elements: Vec<GroupElement>,
}

impl PublicSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Left-to-right product of the word's factors.
    pub fn evaluate(&self, group: &Group, word: &[Factor]) -> GroupElement {
        let mut acc = group.identity();
        for f in word {
            let x = &self.elements[f.index];
            acc = match f.sign {
                Sign::Pos => group.multiply(&acc, x),
                Sign::Neg => group.multiply(&acc, &group.invert(x)),
            };
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrivateKey {
    pub factors: Vec<Factor>,
    pub element: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub alice_key: PrivateKey,
    pub bob_key: PrivateKey,
    pub shared: GroupElement,
}

/// One protocol run as seen on the wire, plus the hidden keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AagInstance {
    pub alice_public: PublicSet,
    pub bob_public: PublicSet,
    /// `b'_i = A^{-1} b_i A`.
    pub bob_conjugated: Vec<GroupElement>,
    /// `a'_i = B^{-1} a_i B`.
    pub alice_conjugated: Vec<GroupElement>,
    ground_truth: GroundTruth,
}

/// What an eavesdropper attacking Alice's key gets to see.
#[derive(Debug, Clone, Copy)]
pub struct PublicView<'a> {
    pub alice_public: &'a PublicSet,
    pub bob_public: &'a PublicSet,
    pub bob_conjugated: &'a [GroupElement],
}

impl AagInstance {
    pub fn public_view(&self) -> PublicView<'_> {
        PublicView {
            alice_public: &self.alice_public,
            bob_public: &self.bob_public,
            bob_conjugated: &self.bob_conjugated,
        }
    }

    /// The private keys and shared key. Only for verification and scoring.
    pub fn ground_truth(&self) -> &GroundTruth {
        &self.ground_truth
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolParams {
    pub n1: usize,
    pub n2: usize,
    pub l1: u64,
    pub l2: u64,
    pub key_factors: usize,
}

impl ProtocolParams {
    pub fn validate(&self) -> Result<(), AagError> {
        if self.n1 == 0 || self.n2 == 0 {
            return Err(AagError::InvalidParameter("public sets must be nonempty".into()));
        }
        check_bounds(self.l1, self.l2)?;
        if self.key_factors == 0 {
            return Err(AagError::InvalidParameter("keys need at least one factor".into()));
        }
        Ok(())
    }
}

fn check_bounds(l1: u64, l2: u64) -> Result<(), AagError> {
    if l1 == 0 || l1 > l2 {
        return Err(AagError::InvalidParameter(format!(
            "length bounds must satisfy 1 <= L1 <= L2, got [{l1}, {l2}]"
        )));
    }
    Ok(())
}

/// Random element with length in `[l1, l2]`.
///
/// Starting from the identity, multiplies on the right by uniformly chosen
/// `g_i^{±1}`. A factor that pushes the length above `l2` is discarded and
/// redrawn. Stops as soon as the length reaches `l1`.
pub fn random_element(
    group: &Group,
    l1: u64,
    l2: u64,
    rng: &mut Rng,
) -> Result<GroupElement, AagError> {
    check_bounds(l1, l2)?;
    let n = group.n();
    if n == 0 {
        return Err(AagError::GenerationStalled { l1, l2, attempts: 0 });
    }
    let (lo, hi) = (Int::from(l1), Int::from(l2));
    let budget = 10_000 + 1_000 * l2;
    let mut cur = group.identity();
    let mut len = Int::ZERO;
    for _ in 0..budget {
        if len >= lo {
            return Ok(cur);
        }
        let k = rng.random_range(0..n);
        let c = if rng.random::<bool>() { 1 } else { -1 };
        let next = group.multiply_generator(&cur, k, c);
        let next_len = next.length();
        if next_len <= hi {
            cur = next;
            len = next_len;
        }
    }
    if len >= lo {
        return Ok(cur);
    }
    Err(AagError::GenerationStalled {
        l1,
        l2,
        attempts: budget,
    })
}

pub fn generate_public_set(
    group: &Group,
    n: usize,
    l1: u64,
    l2: u64,
    rng: &mut Rng,
) -> Result<PublicSet, AagError> {
    if n == 0 {
        return Err(AagError::InvalidParameter("public sets must be nonempty".into()));
    }
    let elements = (0..n)
        .map(|_| random_element(group, l1, l2, rng))
        .collect::<Result<_, _>>()?;
    Ok(PublicSet { elements })
}

/// `l` factors drawn uniformly from the public set with uniform signs.
pub fn generate_private_key(
    group: &Group,
    public: &PublicSet,
    l: usize,
    rng: &mut Rng,
) -> Result<PrivateKey, AagError> {
    if l == 0 {
        return Err(AagError::InvalidParameter("keys need at least one factor".into()));
    }
    if public.is_empty() {
        return Err(AagError::InvalidParameter("public sets must be nonempty".into()));
    }
    let factors: Vec<Factor> = (0..l)
        .map(|_| {
            let index = rng.random_range(0..public.len());
            let sign = if rng.random::<bool>() { Sign::Pos } else { Sign::Neg };
            Factor::new(index, sign)
        })
        .collect();
    let element = public.evaluate(group, &factors);
    Ok(PrivateKey { factors, element })
}

/// Generates both public sets and keys, exchanges the conjugated tuples and
/// checks that both sides derive the same key.
pub fn run_protocol(
    group: &Group,
    params: &ProtocolParams,
    rng: &mut Rng,
) -> Result<AagInstance, AagError> {
    params.validate()?;
    let alice_public = generate_public_set(group, params.n1, params.l1, params.l2, rng)?;
    let bob_public = generate_public_set(group, params.n2, params.l1, params.l2, rng)?;
    let alice_key = generate_private_key(group, &alice_public, params.key_factors, rng)?;
    let bob_key = generate_private_key(group, &bob_public, params.key_factors, rng)?;
    assemble(group, alice_public, bob_public, alice_key, bob_key)
}

/// Builds an instance from explicit public sets and keys.
pub fn assemble(
    group: &Group,
    alice_public: PublicSet,
    bob_public: PublicSet,
    alice_key: PrivateKey,
    bob_key: PrivateKey,
) -> Result<AagInstance, AagError> {
    let a = &alice_key.element;
    let b = &bob_key.element;
    let (a_inv, b_inv) = (group.invert(a), group.invert(b));
    let bob_conjugated: Vec<_> = bob_public
        .elements
        .iter()
        .map(|x| group.conjugate_with_inverse(x, a, &a_inv))
        .collect();
    let alice_conjugated: Vec<_> = alice_public
        .elements
        .iter()
        .map(|x| group.conjugate_with_inverse(x, b, &b_inv))
        .collect();

    // Alice: K_A = A^{-1} (B^{-1} A B), the bracket evaluated from ā'
    let received_a = PublicSet {
        elements: alice_conjugated.clone(),
    };
    let k_a = group.multiply(&a_inv, &received_a.evaluate(group, &alice_key.factors));
    // Bob: K_B = B^{-1} (A^{-1} B A) = K_A^{-1}
    let received_b = PublicSet {
        elements: bob_conjugated.clone(),
    };
    let k_b = group.multiply(&b_inv, &received_b.evaluate(group, &bob_key.factors));

    if !group.multiply(&k_a, &k_b).is_identity() {
        return Err(AagError::ProtocolSelfCheckFailed("K_A * K_B != 1"));
    }
    let commutator = group.product([&a_inv, &b_inv, a, b]);
    if commutator != k_a {
        return Err(AagError::ProtocolSelfCheckFailed("K_A != A^-1 B^-1 A B"));
    }
    Ok(AagInstance {
        alice_public,
        bob_public,
        bob_conjugated,
        alice_conjugated,
        ground_truth: GroundTruth {
            alice_key,
            bob_key,
            shared: k_a,
        },
    })
}

/// Replay document: the group, the parameters and seed, the wire data, and
/// the ground truth in its own block.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub presentation: PcPresentation,
    pub params: ProtocolParams,
    pub seed: Option<u64>,
    pub alice_public: PublicSet,
    pub bob_public: PublicSet,
    pub bob_conjugated: Vec<GroupElement>,
    pub alice_conjugated: Vec<GroupElement>,
    pub ground_truth: GroundTruth,
}

impl InstanceDocument {
    pub fn new(
        group: &Group,
        params: ProtocolParams,
        seed: Option<u64>,
        inst: &AagInstance,
    ) -> Self {
        Self {
            presentation: group.presentation().clone(),
            params,
            seed,
            alice_public: inst.alice_public.clone(),
            bob_public: inst.bob_public.clone(),
            bob_conjugated: inst.bob_conjugated.clone(),
            alice_conjugated: inst.alice_conjugated.clone(),
            ground_truth: inst.ground_truth.clone(),
        }
    }

    pub fn into_instance(self) -> AagInstance {
        AagInstance {
            alice_public: self.alice_public,
            bob_public: self.bob_public,
            bob_conjugated: self.bob_conjugated,
            alice_conjugated: self.alice_conjugated,
            ground_truth: self.ground_truth,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::{build_semidirect_presentation, QuadraticFieldData};
    use crate::rng::rng_from_seed;

    fn golden() -> Group {
        let data = QuadraticFieldData::from_polynomial(&"x^2-x-1".parse().unwrap()).unwrap();
        Group::new(build_semidirect_presentation(&data).unwrap()).unwrap()
    }

    fn params() -> ProtocolParams {
        ProtocolParams {
            n1: 20,
            n2: 20,
            l1: 10,
            l2: 13,
            key_factors: 5,
        }
    }

    #[test]
    fn single_letter_elements() {
        let g = golden();
        let mut rng = rng_from_seed(1);
        for _ in 0..200 {
            let x = random_element(&g, 1, 1, &mut rng).unwrap();
            assert_eq!(x.length(), Int::ONE);
        }
    }

    #[test]
    fn lengths_in_range_and_deterministic() {
        let g = golden();
        let mut rng = rng_from_seed(5);
        for _ in 0..1000 {
            let x = random_element(&g, 10, 13, &mut rng).unwrap();
            assert!(x.length() >= Int::from(10) && x.length() <= Int::from(13));
        }
        let a = random_element(&g, 10, 13, &mut rng_from_seed(9)).unwrap();
        let b = random_element(&g, 10, 13, &mut rng_from_seed(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = golden();
        let mut rng = rng_from_seed(0);
        assert!(matches!(
            random_element(&g, 0, 3, &mut rng),
            Err(AagError::InvalidParameter(_))
        ));
        assert!(matches!(
            random_element(&g, 4, 3, &mut rng),
            Err(AagError::InvalidParameter(_))
        ));
        assert!(matches!(
            generate_public_set(&g, 0, 1, 3, &mut rng),
            Err(AagError::InvalidParameter(_))
        ));
    }

    #[test]
    fn unreachable_window_stalls() {
        // in Z/2 every nonidentity element has length 1
        let p = PcPresentation::builder(vec![crate::RelOrder::Finite(2)])
            .power(0, crate::GeneratorWord::new())
            .build()
            .unwrap();
        let g = Group::new(p).unwrap();
        assert!(matches!(
            random_element(&g, 2, 3, &mut rng_from_seed(0)),
            Err(AagError::GenerationStalled { .. })
        ));
    }

    #[test]
    fn single_factor_key() {
        let g = golden();
        let mut rng = rng_from_seed(3);
        let public = generate_public_set(&g, 4, 10, 13, &mut rng).unwrap();
        let key = generate_private_key(&g, &public, 1, &mut rng).unwrap();
        let x = &public.elements[key.factors[0].index];
        let expected = match key.factors[0].sign {
            Sign::Pos => x.clone(),
            Sign::Neg => g.invert(x),
        };
        assert_eq!(key.element, expected);
    }

    #[test]
    fn protocol_identities() {
        let g = golden();
        let mut rng = rng_from_seed(11);
        let inst = run_protocol(&g, &params(), &mut rng).unwrap();
        let a = &inst.ground_truth().alice_key.element;
        let a_inv = g.invert(a);
        for (b, b2) in inst.bob_public.elements.iter().zip(&inst.bob_conjugated) {
            assert_eq!(&g.conjugate(b, a), b2);
            assert_eq!(&g.conjugate_with_inverse(b2, &a_inv, a), b);
        }
        let again = run_protocol(&g, &params(), &mut rng_from_seed(11)).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn commuting_keys_give_trivial_shared_key() {
        let g = golden();
        let x = g.generator(2);
        let set = PublicSet {
            elements: vec![x.clone()],
        };
        let key = PrivateKey {
            factors: vec![Factor::new(0, Sign::Pos)],
            element: x,
        };
        let inst = assemble(&g, set.clone(), set, key.clone(), key).unwrap();
        assert!(inst.ground_truth().shared.is_identity());
    }

    #[test]
    fn document_round_trip() {
        let g = golden();
        let inst = run_protocol(&g, &params(), &mut rng_from_seed(2)).unwrap();
        let doc = InstanceDocument::new(&g, params(), Some(2), &inst);
        let text = serde_json::to_string(&doc).unwrap();
        let back: InstanceDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.seed, Some(2));
        assert_eq!(back.into_instance(), inst);
    }
}
