//! List-source encoding and decoding.
//!
//! [`CodeSpec`] acts as a list-source code through its syndrome map: the
//! codeword of `x` is `H x`, and the decoded list is the coset
//! `{x' : H x' = H x}` of size `q^k`. [`TrivialScheme`] is the insecure
//! baseline that transmits a prefix and discards the rest.
//!
//! Only the identity source coder is supported, so block length and the
//! code length coincide.

use num_bigint::BigUint;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::secrecy::SourceModel;

/// Default bound on how many coset members may be enumerated.
pub const DEFAULT_LIST_CAP: u128 = 1_000_000;

/// A deterministic list-source code over `F_q`: an encoder from `F_q^n` to
/// a finite set of symbol strings, plus membership in the decoded list.
pub trait ListSourceCode {
    fn field(&self) -> &FieldSpec;

    /// Source block length `n`.
    fn block_len(&self) -> usize;

    /// Number of symbols in each codeword.
    fn codeword_len(&self) -> usize;

    /// `log_q` of the decoded list size.
    fn list_symbols(&self) -> usize;

    fn encode(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>>;

    /// Whether `x` is in the list decoded from `codeword`.
    fn list_contains(&self, codeword: &[FieldElement], x: &[FieldElement]) -> Result<bool>;

    /// Normalised list size `L`.
    fn list_exponent(&self) -> Ratio<usize> {
        Ratio::new(self.list_symbols(), self.block_len())
    }
}

/// `H x` for some code.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome(Vec<FieldElement>);

impl Syndrome {
    pub fn new(symbols: Vec<FieldElement>) -> Self {
        Self(symbols)
    }

    pub fn symbols(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<FieldElement> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Scheme 1 encoder: the syndrome `H x`.
pub fn encode(code: &CodeSpec, x: &[FieldElement]) -> Result<Syndrome> {
    check_len(code.n(), x.len())?;
    Ok(Syndrome(code.parity_check().mul_vec(x)?))
}

fn validate_syndrome(code: &CodeSpec, s: &Syndrome) -> Result<()> {
    check_len(code.redundancy(), s.len())?;
    if let Some(bad) = s.0.iter().find(|e| !code.field().contains(**e)) {
        return Err(Error::NonCanonical {
            value: bad.value() as u64,
            order: code.field().order(),
        });
    }
    Ok(())
}

/// Scheme 1 decoder: the coset of `s`, described lazily.
pub fn decode_list<'a>(code: &'a CodeSpec, s: &Syndrome) -> Result<DecodedList<'a>> {
    validate_syndrome(code, s)?;
    let n = code.n();
    let h = code.parity_check();
    let column = crate::linalg::Matrix::from_elements(code.field(), h.rows(), 1, s.0.clone())?;
    let augmented = h.transpose().vstack(&column.transpose())?.transpose();
    let reduced = augmented.rref();
    debug_assert!(reduced.pivots.iter().all(|&p| p < n));

    let mut is_pivot = vec![false; n];
    for &p in &reduced.pivots {
        is_pivot[p] = true;
    }
    let free = (0..n).filter(|&c| !is_pivot[c]).collect();
    Ok(DecodedList {
        code,
        syndrome: s.clone(),
        reduced: reduced.matrix,
        pivots: reduced.pivots,
        free,
    })
}

/// The coset `{x : H x = s}`. Its size `q^k` is always available; the
/// members are produced by [`DecodedList::members`] in lexicographic order
/// of the free (non-pivot) coordinates of `rref(H)`.
#[derive(Clone, Debug)]
pub struct DecodedList<'a> {
    code: &'a CodeSpec,
    syndrome: Syndrome,
    reduced: crate::linalg::Matrix,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl<'a> DecodedList<'a> {
    pub fn syndrome(&self) -> &Syndrome {
        &self.syndrome
    }

    /// `q^k`, or `None` if it does not fit in a `u128`.
    pub fn cardinality(&self) -> Option<u128> {
        (self.code.field().order() as u128).checked_pow(self.code.k() as u32)
    }

    pub fn cardinality_exact(&self) -> BigUint {
        BigUint::from(self.code.field().order()).pow(self.code.k() as u32)
    }

    /// Coordinates that parameterise the coset.
    pub fn free_coordinates(&self) -> &[usize] {
        &self.free
    }

    pub fn contains(&self, x: &[FieldElement]) -> Result<bool> {
        Ok(encode(self.code, x)? == self.syndrome)
    }

    pub fn members(&self) -> Result<CosetMembers<'_, 'a>> {
        self.members_with_cap(DEFAULT_LIST_CAP)
    }

    pub fn members_with_cap(&self, cap: u128) -> Result<CosetMembers<'_, 'a>> {
        match self.cardinality() {
            Some(size) if size <= cap => Ok(CosetMembers {
                list: self,
                counter: vec![0; self.free.len()],
                done: false,
            }),
            _ => Err(Error::ListTooLarge {
                size: self.cardinality_exact().to_string(),
                cap,
            }),
        }
    }

    fn member(&self, free_values: &[u16]) -> Vec<FieldElement> {
        let f = self.code.field();
        let n = self.code.n();
        let mut x = vec![FieldElement::ZERO; n];
        for (&c, &v) in self.free.iter().zip(free_values) {
            x[c] = f.element(v as u64).expect("counter digit below q");
        }
        for (row, &p) in self.pivots.iter().enumerate() {
            let mut acc = self.reduced.get(row, n);
            for &c in &self.free {
                acc = f.sub(acc, f.mul(self.reduced.get(row, c), x[c]));
            }
            x[p] = acc;
        }
        x
    }
}

/// Iterator over coset members; holds its own cursor.
pub struct CosetMembers<'l, 'a> {
    list: &'l DecodedList<'a>,
    counter: Vec<u16>,
    done: bool,
}

impl Iterator for CosetMembers<'_, '_> {
    type Item = Vec<FieldElement>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = self.list.member(&self.counter);
        let q = self.list.code.field().order();
        // Odometer with the first free coordinate most significant.
        self.done = true;
        for digit in self.counter.iter_mut().rev() {
            if (*digit as u32) + 1 < q {
                *digit += 1;
                self.done = false;
                break;
            }
            *digit = 0;
        }
        Some(item)
    }
}

impl ListSourceCode for CodeSpec {
    fn field(&self) -> &FieldSpec {
        CodeSpec::field(self)
    }

    fn block_len(&self) -> usize {
        self.n()
    }

    fn codeword_len(&self) -> usize {
        self.redundancy()
    }

    fn list_symbols(&self) -> usize {
        self.k()
    }

    fn encode(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>> {
        Ok(encode(self, x)?.0)
    }

    fn list_contains(&self, codeword: &[FieldElement], x: &[FieldElement]) -> Result<bool> {
        check_len(self.redundancy(), codeword.len())?;
        Ok(encode(self, x)?.0 == codeword)
    }
}

/// Maps a syndrome to its `ceil((n - k) log2 q)`-bit label (most
/// significant bit first), reading the symbols as a base-q number.
pub fn syndrome_to_bits(code: &CodeSpec, s: &Syndrome) -> Result<Vec<bool>> {
    validate_syndrome(code, s)?;
    let q = BigUint::from(code.field().order());
    let mut value = BigUint::from(0u32);
    for e in &s.0 {
        value = value * &q + BigUint::from(e.value());
    }
    let width = code_rate(code).total_bits as usize;
    Ok((0..width).rev().map(|bit| value.bit(bit as u64)).collect())
}

/// Inverse of [`syndrome_to_bits`].
pub fn bits_to_syndrome(code: &CodeSpec, bits: &[bool]) -> Result<Syndrome> {
    let width = code_rate(code).total_bits as usize;
    check_len(width, bits.len())?;
    let mut value = BigUint::from(0u32);
    for &b in bits {
        value = (value << 1u32) | BigUint::from(b as u8);
    }
    let q = BigUint::from(code.field().order());
    let mut symbols = vec![FieldElement::ZERO; code.redundancy()];
    for slot in symbols.iter_mut().rev() {
        let digit = (&value % &q).to_u64_digits().first().copied().unwrap_or(0);
        *slot = code.field().element(digit)?;
        value /= &q;
    }
    if value != BigUint::from(0u32) {
        return Err(Error::InvalidParameters(
            "bit label out of syndrome range".into(),
        ));
    }
    Ok(Syndrome(symbols))
}

/// Achieved rate of the syndrome map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CodeRate {
    /// `ceil((n - k) log2 q)`.
    pub total_bits: u64,
    /// `total_bits / n`.
    pub bits_per_symbol: f64,
}

/// Computed exactly as the bit length of `q^(n-k) - 1`.
pub fn code_rate(code: &CodeSpec) -> CodeRate {
    let count = BigUint::from(code.field().order()).pow(code.redundancy() as u32);
    let total_bits = (count - 1u32).bits();
    CodeRate {
        total_bits,
        bits_per_symbol: total_bits as f64 / code.n() as f64,
    }
}

/// Lower bound on the rate-list function, `max(0, H(X) - L log2 |X|)`.
pub fn rate_list_lower_bound(entropy_bits: f64, list_exponent: f64, alphabet_size: u32) -> f64 {
    (entropy_bits - list_exponent * (alphabet_size as f64).log2()).max(0.0)
}

/// The baseline that sends the first `n - floor(L n)` symbols and discards
/// the rest. Decodes to the prefix followed by every possible suffix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialScheme {
    field: FieldSpec,
    n: usize,
    discarded: usize,
}

impl TrivialScheme {
    pub fn new(field: &FieldSpec, n: usize, list_exponent: Ratio<usize>) -> Result<Self> {
        if n == 0 || list_exponent > Ratio::from_integer(1) {
            return Err(Error::InvalidParameters(format!(
                "need n >= 1 and 0 <= L <= 1, got n = {n}, L = {list_exponent}"
            )));
        }
        let discarded = (list_exponent * n).floor().to_integer();
        Ok(Self {
            field: field.clone(),
            n,
            discarded,
        })
    }

    pub fn prefix_len(&self) -> usize {
        self.n - self.discarded
    }

    pub fn suffix_len(&self) -> usize {
        self.discarded
    }
}

/// Output of [`trivial_encode`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialEncoding {
    pub prefix: Vec<FieldElement>,
    pub suffix_len: usize,
    /// `q^suffix_len`, if it fits.
    pub list_size: Option<u128>,
}

pub fn trivial_encode(
    field: &FieldSpec,
    n: usize,
    list_exponent: Ratio<usize>,
    x: &[FieldElement],
) -> Result<TrivialEncoding> {
    let scheme = TrivialScheme::new(field, n, list_exponent)?;
    let prefix = scheme.encode(x)?;
    Ok(TrivialEncoding {
        prefix,
        suffix_len: scheme.suffix_len(),
        list_size: (field.order() as u128).checked_pow(scheme.suffix_len() as u32),
    })
}

impl ListSourceCode for TrivialScheme {
    fn field(&self) -> &FieldSpec {
        &self.field
    }

    fn block_len(&self) -> usize {
        self.n
    }

    fn codeword_len(&self) -> usize {
        self.prefix_len()
    }

    fn list_symbols(&self) -> usize {
        self.discarded
    }

    fn encode(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>> {
        check_len(self.n, x.len())?;
        Ok(x[..self.prefix_len()].to_vec())
    }

    fn list_contains(&self, codeword: &[FieldElement], x: &[FieldElement]) -> Result<bool> {
        check_len(self.prefix_len(), codeword.len())?;
        check_len(self.n, x.len())?;
        Ok(&x[..self.prefix_len()] == codeword)
    }
}

/// Monte-Carlo estimate of `Pr(X^n not in g(f(X^n)))` for i.i.d. draws from
/// `source`. Membership is checked directly, never by enumeration.
pub fn error_probability_estimate(
    code: &dyn ListSourceCode,
    source: &SourceModel,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidParameters("need at least one trial".into()));
    }
    if source.field() != code.field() {
        return Err(Error::FieldMismatch);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = source.sampler();
    let mut misses = 0usize;
    for _ in 0..trials {
        let x = sampler.sample_block(&mut rng, code.block_len());
        let y = code.encode(&x)?;
        if !code.list_contains(&y, &x)? {
            misses += 1;
        }
    }
    Ok(misses as f64 / trials as f64)
}
