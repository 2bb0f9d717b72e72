//! Two-phase encryption on top of a list-source code.
//!
//! Phase I sends the key-independent syndrome `S = H x`. Phase II sends
//! `E = Enc'(D x)` where the rows of `D` complete those of `H` to a basis,
//! so `(S, D x)` determines `x` through the stacked system `[H; D] x = (S, T)`.
//! An eavesdropper holding only phase I is left with the whole coset of `S`.

use std::collections::HashSet;
use std::hash::{DefaultHasher, Hash, Hasher};

use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::Matrix;
use crate::lsc::{self, Syndrome};

/// The 64-bit splitmix64 generator. Not cryptographic.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Words at or above this bound are rejected when drawing a residue mod `q`,
/// so that every residue has exactly `floor(2^64 / q)` accepted preimages.
pub fn rejection_bound(q: u32) -> u128 {
    ((1u128 << 64) / q as u128) * q as u128
}

/// `len` field symbols drawn from splitmix64 seeded with `seed`, with
/// rejection sampling so each symbol is exactly uniform.
pub fn keystream(seed: u64, field: &FieldSpec, len: usize) -> Vec<FieldElement> {
    let q = field.order();
    let bound = rejection_bound(q);
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let w = rng.next_u64();
        if (w as u128) < bound {
            out.push(field.reduce(w % q as u64));
        }
    }
    out
}

/// `x + keystream(seed)`, componentwise.
pub fn prg_randomize(field: &FieldSpec, x: &[FieldElement], seed: u64) -> Vec<FieldElement> {
    let ks = keystream(seed, field, x.len());
    x.iter().zip(ks).map(|(&a, b)| field.add(a, b)).collect()
}

/// Inverse of [`prg_randomize`].
pub fn prg_derandomize(field: &FieldSpec, x: &[FieldElement], seed: u64) -> Vec<FieldElement> {
    let ks = keystream(seed, field, x.len());
    x.iter().zip(ks).map(|(&a, b)| field.sub(a, b)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CipherKind {
    OneTimePad,
    PrgStream,
}

/// The cipher protecting phase II.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InnerCipher {
    /// Adds a uniform key of exactly `k` symbols.
    OneTimePad { key: Vec<FieldElement> },
    /// Adds `keystream(seed)`. The seed travels with phase II in an 8-byte
    /// little-endian envelope, so this is a demonstrator with no secrecy of
    /// its own.
    PrgStream { seed: u64 },
}

impl InnerCipher {
    pub fn kind(&self) -> CipherKind {
        match self {
            InnerCipher::OneTimePad { .. } => CipherKind::OneTimePad,
            InnerCipher::PrgStream { .. } => CipherKind::PrgStream,
        }
    }

    fn pad(&self, field: &FieldSpec, len: usize) -> Result<Vec<FieldElement>> {
        match self {
            InnerCipher::OneTimePad { key } => {
                if key.len() != len {
                    return Err(Error::KeyLengthMismatch {
                        expected: len,
                        got: key.len(),
                    });
                }
                if let Some(bad) = key.iter().find(|e| !field.contains(**e)) {
                    return Err(Error::NonCanonical {
                        value: bad.value() as u64,
                        order: field.order(),
                    });
                }
                Ok(key.clone())
            }
            InnerCipher::PrgStream { seed } => Ok(keystream(*seed, field, len)),
        }
    }

    pub fn encrypt(&self, field: &FieldSpec, plain: &[FieldElement]) -> Result<Vec<FieldElement>> {
        let pad = self.pad(field, plain.len())?;
        Ok(plain
            .iter()
            .zip(pad)
            .map(|(&a, b)| field.add(a, b))
            .collect())
    }

    pub fn decrypt(&self, field: &FieldSpec, cipher: &[FieldElement]) -> Result<Vec<FieldElement>> {
        let pad = self.pad(field, cipher.len())?;
        Ok(cipher
            .iter()
            .zip(pad)
            .map(|(&a, b)| field.sub(a, b))
            .collect())
    }

    fn key_id(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash_key(&mut h);
        h.finish()
    }

    fn hash_key(&self, h: &mut impl Hasher) {
        match self {
            InnerCipher::OneTimePad { key } => {
                0u8.hash(h);
                key.hash(h);
            }
            InnerCipher::PrgStream { seed } => {
                1u8.hash(h);
                seed.hash(h);
            }
        }
    }
}

/// What travels over the wire, in two separate deliveries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoPhaseBundle {
    /// `H x`, sent first.
    pub phase1: Syndrome,
    /// `Enc'(D x)`, `k` symbols.
    pub phase2: Vec<FieldElement>,
    pub cipher: CipherKind,
    /// Keystream seed for [`InnerCipher::PrgStream`], little-endian.
    pub seed_envelope: Option<[u8; 8]>,
}

/// The complement `D` with `rank [H; D] = n`, by greedy standard-basis
/// completion.
pub fn derive_complement(code: &CodeSpec) -> Result<Matrix> {
    code.parity_check().complete_basis()
}

fn check_complement(code: &CodeSpec, d: &Matrix) -> Result<()> {
    if d.field() != code.field() {
        return Err(Error::FieldMismatch);
    }
    if d.cols() != code.n() {
        return Err(Error::DimensionMismatch {
            expected: code.n(),
            got: d.cols(),
        });
    }
    if d.rows() != code.k() {
        return Err(Error::DimensionMismatch {
            expected: code.k(),
            got: d.rows(),
        });
    }
    Ok(())
}

pub fn two_phase_encrypt(
    x: &[FieldElement],
    code: &CodeSpec,
    d: &Matrix,
    cipher: &InnerCipher,
) -> Result<TwoPhaseBundle> {
    check_complement(code, d)?;
    let phase1 = lsc::encode(code, x)?;
    let complement = d.mul_vec(x)?;
    let phase2 = cipher.encrypt(code.field(), &complement)?;
    let seed_envelope = match cipher {
        InnerCipher::PrgStream { seed } => Some(seed.to_le_bytes()),
        InnerCipher::OneTimePad { .. } => None,
    };
    Ok(TwoPhaseBundle {
        phase1,
        phase2,
        cipher: cipher.kind(),
        seed_envelope,
    })
}

/// Recovers `x` by decrypting phase II and solving `[H; D] x = (S, T)`.
///
/// For the PRG stream the seed is taken from the bundle's envelope when one
/// is present. A wrong one-time pad still yields a member of the phase-I
/// coset.
pub fn two_phase_decrypt(
    bundle: &TwoPhaseBundle,
    code: &CodeSpec,
    d: &Matrix,
    cipher: &InnerCipher,
) -> Result<Vec<FieldElement>> {
    check_complement(code, d)?;
    if bundle.cipher != cipher.kind() {
        return Err(Error::InvalidParameters(format!(
            "bundle was encrypted with {:?}, not {:?}",
            bundle.cipher,
            cipher.kind()
        )));
    }
    if bundle.phase1.len() != code.redundancy() {
        return Err(Error::DimensionMismatch {
            expected: code.redundancy(),
            got: bundle.phase1.len(),
        });
    }
    let effective = match (cipher, bundle.seed_envelope) {
        (InnerCipher::PrgStream { .. }, Some(env)) => InnerCipher::PrgStream {
            seed: u64::from_le_bytes(env),
        },
        _ => cipher.clone(),
    };
    let complement = effective.decrypt(code.field(), &bundle.phase2)?;
    let system = code.parity_check().vstack(d)?;
    let mut rhs = bundle.phase1.symbols().to_vec();
    rhs.extend(complement);
    system.solve_square(&rhs)
}

/// Two-phase encryption bound to one code, tracking one-time pad use.
///
/// In debug builds, encrypting twice with the same one-time pad panics.
pub struct TwoPhaseSession {
    code: CodeSpec,
    complement: Matrix,
    used_keys: HashSet<u64>,
}

impl TwoPhaseSession {
    pub fn new(code: CodeSpec) -> Result<Self> {
        let complement = derive_complement(&code)?;
        Ok(Self {
            code,
            complement,
            used_keys: HashSet::new(),
        })
    }

    pub fn code(&self) -> &CodeSpec {
        &self.code
    }

    pub fn complement(&self) -> &Matrix {
        &self.complement
    }

    pub fn encrypt(&mut self, x: &[FieldElement], cipher: &InnerCipher) -> Result<TwoPhaseBundle> {
        if cipher.kind() == CipherKind::OneTimePad {
            let fresh = self.used_keys.insert(cipher.key_id());
            debug_assert!(fresh, "one-time pad key reused");
        }
        two_phase_encrypt(x, &self.code, &self.complement, cipher)
    }

    pub fn decrypt(
        &self,
        bundle: &TwoPhaseBundle,
        cipher: &InnerCipher,
    ) -> Result<Vec<FieldElement>> {
        two_phase_decrypt(bundle, &self.code, &self.complement, cipher)
    }
}

/// Syndromes of overlapping block pairs: output `i` encodes
/// `blocks[i] ++ blocks[i + 1]` with a length-`2n` code.
pub fn overlap_chain_encode(
    blocks: &[Vec<FieldElement>],
    code2n: &CodeSpec,
) -> Result<Vec<Syndrome>> {
    if blocks.len() < 2 {
        return Err(Error::TooFewBlocks(blocks.len()));
    }
    let n = blocks[0].len();
    if code2n.n() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            got: code2n.n(),
        });
    }
    if let Some(bad) = blocks.iter().find(|b| b.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    blocks
        .windows(2)
        .map(|pair| {
            let joined: Vec<_> = pair[0].iter().chain(&pair[1]).copied().collect();
            lsc::encode(code2n, &joined)
        })
        .collect()
}

/// Whether a candidate block sequence is consistent with every chained
/// syndrome. Joint list decoding across shared blocks is not provided.
pub fn overlap_chain_consistent(
    blocks: &[Vec<FieldElement>],
    code2n: &CodeSpec,
    syndromes: &[Syndrome],
) -> Result<bool> {
    Ok(overlap_chain_encode(blocks, code2n)? == syndromes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u32) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn v(f: &FieldSpec, xs: &[u64]) -> Vec<FieldElement> {
        xs.iter().map(|&x| f.element(x).unwrap()).collect()
    }

    fn code5() -> CodeSpec {
        CodeSpec::vandermonde(&gf(5), 4, 2, None).unwrap()
    }

    #[test]
    fn splitmix64_reference_vectors() {
        let mut g = SplitMix64::new(0);
        assert_eq!(g.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(g.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(g.next_u64(), 0x06C4_5D18_8009_454F);
        let mut g = SplitMix64::new(1234567);
        assert_eq!(g.next_u64(), 6457827717110365317);
        assert_eq!(g.next_u64(), 3203168211198807973);
        assert_eq!(g.next_u64(), 9817491932198370423);
    }

    #[test]
    fn keystream_basics() {
        let f = gf(5);
        assert!(keystream(7, &f, 0).is_empty());
        assert_eq!(keystream(7, &f, 32), keystream(7, &f, 32));
        assert_ne!(keystream(7, &f, 32), keystream(8, &f, 32));
        // A longer stream extends a shorter one.
        assert_eq!(keystream(7, &f, 32)[..10], keystream(7, &f, 10)[..]);
        // First word for seed 0, reduced mod 5, after the (never triggered
        // here) rejection check.
        assert_eq!(
            keystream(0, &f, 1)[0].value() as u64,
            0xE220_A839_7B1D_CDAF % 5
        );
        let g = FieldSpec::gf256();
        assert_eq!(keystream(0, &g, 1)[0].value(), 0xAF);
    }

    #[test]
    fn rejection_bound_gives_equal_classes() {
        for q in [2u32, 3, 5, 7] {
            let bound = rejection_bound(q);
            assert_eq!(bound % q as u128, 0);
            assert!((1u128 << 64) - bound < q as u128);
            // Residue r has preimages r, r + q, ..., below bound.
            for r in 0..q as u128 {
                assert_eq!((bound - 1 - r) / q as u128 + 1, (1u128 << 64) / q as u128);
            }
        }
        assert_eq!(rejection_bound(256), 1u128 << 64);
    }

    #[test]
    fn prg_randomize_examples() {
        let f = gf(5);
        let x = v(&f, &[1, 2]);
        let seed = 99;
        let ks = keystream(seed, &f, 2);
        let y = prg_randomize(&f, &x, seed);
        assert_eq!(y, vec![f.add(x[0], ks[0]), f.add(x[1], ks[1])]);
        assert_eq!(prg_derandomize(&f, &y, seed), x);
    }

    #[test]
    fn derive_complement_examples() {
        assert_eq!(
            derive_complement(&code5()).unwrap().to_rows(),
            vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]
        );
        let full = CodeSpec::vandermonde(&gf(5), 4, 0, None).unwrap();
        assert_eq!(derive_complement(&full).unwrap().rows(), 0);
    }

    #[test]
    fn encrypt_example() {
        let c = code5();
        let f = c.field().clone();
        let d = derive_complement(&c).unwrap();
        let otp = InnerCipher::OneTimePad {
            key: v(&f, &[3, 1]),
        };
        let b = two_phase_encrypt(&v(&f, &[1, 2, 3, 4]), &c, &d, &otp).unwrap();
        assert_eq!(b.phase1.symbols(), v(&f, &[0, 0]));
        assert_eq!(b.phase2, v(&f, &[4, 3]));
        assert_eq!(b.seed_envelope, None);
        assert_eq!(
            two_phase_decrypt(&b, &c, &d, &otp).unwrap(),
            v(&f, &[1, 2, 3, 4])
        );

        let zero = InnerCipher::OneTimePad {
            key: v(&f, &[0, 0]),
        };
        let b = two_phase_encrypt(&v(&f, &[1, 2, 3, 4]), &c, &d, &zero).unwrap();
        assert_eq!(b.phase2, v(&f, &[1, 2]));

        let short = InnerCipher::OneTimePad { key: v(&f, &[1]) };
        assert_eq!(
            two_phase_encrypt(&v(&f, &[1, 2, 3, 4]), &c, &d, &short),
            Err(Error::KeyLengthMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn encrypt_with_k_zero() {
        let f = gf(5);
        let c = CodeSpec::vandermonde(&f, 3, 0, None).unwrap();
        let d = derive_complement(&c).unwrap();
        let otp = InnerCipher::OneTimePad { key: vec![] };
        let x = v(&f, &[4, 0, 2]);
        let b = two_phase_encrypt(&x, &c, &d, &otp).unwrap();
        assert!(b.phase2.is_empty());
        assert_eq!(two_phase_decrypt(&b, &c, &d, &otp).unwrap(), x);
    }

    #[test]
    fn prg_bundle_carries_seed() {
        let c = code5();
        let f = c.field().clone();
        let d = derive_complement(&c).unwrap();
        let prg = InnerCipher::PrgStream {
            seed: 0x0102_0304_0506_0708,
        };
        let x = v(&f, &[1, 2, 3, 4]);
        let b = two_phase_encrypt(&x, &c, &d, &prg).unwrap();
        assert_eq!(b.seed_envelope, Some([8, 7, 6, 5, 4, 3, 2, 1]));
        assert_eq!(two_phase_decrypt(&b, &c, &d, &prg).unwrap(), x);
        let otp = InnerCipher::OneTimePad {
            key: v(&f, &[0, 0]),
        };
        assert!(two_phase_decrypt(&b, &c, &d, &otp).is_err());
    }

    #[test]
    fn malformed_complement_is_singular() {
        let c = code5();
        let f = c.field().clone();
        // Rows inside the row space of H.
        let d = Matrix::from_rows(&f, 4, &[[1, 1, 1, 1], [0, 1, 2, 3]]).unwrap();
        let otp = InnerCipher::OneTimePad {
            key: v(&f, &[0, 0]),
        };
        let b = two_phase_encrypt(&v(&f, &[1, 2, 3, 4]), &c, &d, &otp).unwrap();
        assert_eq!(
            two_phase_decrypt(&b, &c, &d, &otp),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    #[cfg(debug_assertions)]
    #[should_panic(expected = "one-time pad key reused")]
    fn session_rejects_pad_reuse() {
        let c = code5();
        let f = c.field().clone();
        let mut s = TwoPhaseSession::new(c).unwrap();
        let otp = InnerCipher::OneTimePad {
            key: v(&f, &[3, 1]),
        };
        let _ = s.encrypt(&v(&f, &[1, 2, 3, 4]), &otp);
        let _ = s.encrypt(&v(&f, &[0, 0, 0, 1]), &otp);
    }

    #[test]
    fn overlap_chain_examples() {
        let f = gf(2);
        let h = Matrix::from_rows(&f, 4, &[[1, 1, 1, 1], [0, 1, 0, 1]]).unwrap();
        let c = CodeSpec::from_parity_check(h).unwrap();
        let blocks = vec![v(&f, &[1, 0]), v(&f, &[0, 1]), v(&f, &[1, 1])];
        let out = overlap_chain_encode(&blocks, &c).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].symbols(), v(&f, &[0, 1]));
        assert_eq!(out[1].symbols(), v(&f, &[1, 0]));
        assert!(overlap_chain_consistent(&blocks, &c, &out).unwrap());
        let other = vec![v(&f, &[0, 0]), v(&f, &[0, 1]), v(&f, &[1, 1])];
        assert!(!overlap_chain_consistent(&other, &c, &out).unwrap());
        assert_eq!(
            overlap_chain_encode(&blocks[..1], &c),
            Err(Error::TooFewBlocks(1))
        );
        let ragged = vec![v(&f, &[1, 0]), v(&f, &[1])];
        assert!(overlap_chain_encode(&ragged, &c).is_err());
    }

    proptest! {
        #[test]
        fn roundtrip_both_ciphers(xs in proptest::collection::vec(0u64..7, 5),
                                  key in proptest::collection::vec(0u64..7, 2),
                                  seed: u64) {
            let f = gf(7);
            let c = CodeSpec::vandermonde(&f, 5, 2, None).unwrap();
            let d = derive_complement(&c).unwrap();
            let x = v(&f, &xs);
            for cipher in [InnerCipher::OneTimePad { key: v(&f, &key) }, InnerCipher::PrgStream { seed }] {
                let b = two_phase_encrypt(&x, &c, &d, &cipher).unwrap();
                prop_assert_eq!(two_phase_decrypt(&b, &c, &d, &cipher).unwrap(), x.clone());
            }
        }

        #[test]
        fn phase1_depends_only_on_coset(xs in proptest::collection::vec(0u64..5, 4), free in proptest::collection::vec(0u64..5, 2)) {
            let c = code5();
            let f = c.field().clone();
            let d = derive_complement(&c).unwrap();
            let x = v(&f, &xs);
            let s = lsc::encode(&c, &x).unwrap();
            let list = lsc::decode_list(&c, &s).unwrap();
            let idx = (free[0] * 5 + free[1]) as usize;
            let other = list.members().unwrap().nth(idx).unwrap();
            let otp = InnerCipher::OneTimePad { key: v(&f, &[1, 1]) };
            let a = two_phase_encrypt(&x, &c, &d, &otp).unwrap();
            let b = two_phase_encrypt(&other, &c, &d, &otp).unwrap();
            prop_assert_eq!(a.phase1, b.phase1);
        }

        #[test]
        fn wrong_pad_stays_in_coset(xs in proptest::collection::vec(0u64..5, 4),
                                    key in proptest::collection::vec(0u64..5, 2),
                                    wrong in proptest::collection::vec(0u64..5, 2)) {
            let c = code5();
            let f = c.field().clone();
            let d = derive_complement(&c).unwrap();
            let x = v(&f, &xs);
            let b = two_phase_encrypt(&x, &c, &d, &InnerCipher::OneTimePad { key: v(&f, &key) }).unwrap();
            let guess = two_phase_decrypt(&b, &c, &d, &InnerCipher::OneTimePad { key: v(&f, &wrong) }).unwrap();
            prop_assert_eq!(lsc::encode(&c, &guess).unwrap(), b.phase1);
            prop_assert_eq!(guess == x, key == wrong);
        }

        #[test]
        fn randomize_roundtrip(xs in proptest::collection::vec(0u64..256, 0..40), seed: u64) {
            let g = FieldSpec::gf256();
            let x = v(&g, &xs);
            prop_assert_eq!(prg_derandomize(&g, &prg_randomize(&g, &x, seed), seed), x);
        }
    }
}
