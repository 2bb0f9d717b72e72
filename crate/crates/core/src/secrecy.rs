//! Exhaustive symbol-secrecy analysis.
//!
//! For a deterministic list-source encoder `Y = f(X^n)` and an i.i.d.
//! source, [`LeakageAnalyzer`] enumerates all of `F_q^n` once and then
//! computes `I(X^J; Y)` exactly for any subset `J` of positions. On top of
//! that sit the ε-symbol secrecy `mu_eps` (largest `t/n` such that every
//! `t`-subset leaks at most `eps` bits per symbol) and the bounds that tie
//! it to the list size and to the total leakage.
//!
//! All quantities are in bits.

use std::collections::HashMap;
use std::fmt::Write as _;

use itertools::Itertools;
use num_rational::Ratio;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::lsc::{rate_list_lower_bound, ListSourceCode};

/// Default bound on `q^n` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

/// Additive slack on `eps` comparisons, absorbing float accumulation error.
pub const EPSILON_TOLERANCE: f64 = 1e-9;

const PMF_TOLERANCE: f64 = 1e-12;

/// An i.i.d. source over the field alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceModel {
    field: FieldSpec,
    pmf: Vec<f64>,
}

impl SourceModel {
    pub fn new(field: &FieldSpec, pmf: Vec<f64>) -> Result<Self> {
        if pmf.len() != field.order() as usize {
            return Err(Error::InvalidSource(format!(
                "pmf has {} entries, field has {}",
                pmf.len(),
                field.order()
            )));
        }
        if pmf.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidSource(
                "probabilities must be finite and nonnegative".into(),
            ));
        }
        let total = neumaier_sum(pmf.iter().copied());
        if (total - 1.0).abs() > PMF_TOLERANCE {
            return Err(Error::InvalidSource(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self {
            field: field.clone(),
            pmf,
        })
    }

    pub fn uniform(field: &FieldSpec) -> Self {
        let q = field.order() as usize;
        Self {
            field: field.clone(),
            pmf: vec![1.0 / q as f64; q],
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn probability(&self, x: FieldElement) -> f64 {
        self.pmf[x.index()]
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.pmf.len() as f64;
        self.pmf.iter().all(|&p| (p - u).abs() <= PMF_TOLERANCE)
    }

    /// `H(X)` in bits per symbol.
    pub fn entropy_bits(&self) -> f64 {
        entropy_bits(self.pmf.iter().copied())
    }

    pub fn sampler(&self) -> SourceSampler {
        SourceSampler {
            field: self.field.clone(),
            dist: WeightedIndex::new(&self.pmf).expect("validated pmf has positive mass"),
        }
    }

    /// Short human-readable identifier.
    pub fn describe(&self) -> String {
        if self.is_uniform() {
            format!("uniform over {}", self.field)
        } else {
            format!(
                "pmf [{}] over {}",
                self.pmf.iter().map(|p| p.to_string()).join(", "),
                self.field
            )
        }
    }
}

/// Draws i.i.d. symbols from a [`SourceModel`].
#[derive(Clone, Debug)]
pub struct SourceSampler {
    field: FieldSpec,
    dist: WeightedIndex<f64>,
}

impl SourceSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.field.reduce(self.dist.sample(rng) as u64)
    }

    pub fn sample_block<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<FieldElement> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}

/// A subset `J` of positions `{0, ..., n - 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetQuery {
    n: usize,
    indices: Vec<usize>,
}

impl SubsetQuery {
    /// `indices` must be strictly increasing and below `n`.
    pub fn new(n: usize, indices: Vec<usize>) -> Result<Self> {
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidSubset(
                "indices must be sorted and distinct".into(),
            ));
        }
        if indices.last().is_some_and(|&i| i >= n) {
            return Err(Error::InvalidSubset(format!(
                "index out of range for n = {n}"
            )));
        }
        Ok(Self { n, indices })
    }

    pub fn all(n: usize) -> Self {
        Self {
            n,
            indices: (0..n).collect(),
        }
    }

    pub fn single(n: usize, i: usize) -> Result<Self> {
        Self::new(n, vec![i])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Compensated (Neumaier) summation.
#[derive(Clone, Copy, Debug, Default)]
struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Accumulator::default();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Shannon entropy in bits of a probability vector; zero entries contribute
/// nothing.
pub fn entropy_bits(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    let h = neumaier_sum(
        probabilities
            .into_iter()
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.log2()),
    );
    h.max(0.0)
}

/// Plug-in mutual information `I(A; B)` in bits of a joint distribution given
/// as `(a, b, weight)` triples. Weights are normalised by their total, so
/// raw counts are accepted.
pub fn mutual_information_from_joint(joint: impl IntoIterator<Item = (u64, u64, f64)>) -> f64 {
    let mut ab: HashMap<(u64, u64), Accumulator> = HashMap::new();
    let mut a: HashMap<u64, Accumulator> = HashMap::new();
    let mut b: HashMap<u64, Accumulator> = HashMap::new();
    let mut total = Accumulator::default();
    for (x, y, w) in joint {
        ab.entry((x, y)).or_default().add(w);
        a.entry(x).or_default().add(w);
        b.entry(y).or_default().add(w);
        total.add(w);
    }
    let total = total.value();
    let h = |m: &mut dyn Iterator<Item = f64>| entropy_bits(m.map(|w| w / total));
    let i = h(&mut a.values().map(Accumulator::value)) + h(&mut b.values().map(Accumulator::value))
        - h(&mut ab.values().map(Accumulator::value));
    i.max(0.0)
}

/// Precomputed joint law of `(X^n, Y)` for one encoder and one source.
pub struct LeakageAnalyzer<'a> {
    code: &'a dyn ListSourceCode,
    source: &'a SourceModel,
    n: usize,
    q: usize,
    /// `Pr(X^n = x)` for the sequence with little-endian base-q index `i`.
    probs: Vec<f64>,
    /// Dense id of `f(x)` for each sequence.
    outputs: Vec<u32>,
    output_count: usize,
    output_entropy: f64,
}

impl<'a> LeakageAnalyzer<'a> {
    pub fn new(code: &'a dyn ListSourceCode, source: &'a SourceModel) -> Result<Self> {
        Self::with_cap(code, source, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(
        code: &'a dyn ListSourceCode,
        source: &'a SourceModel,
        cap: u128,
    ) -> Result<Self> {
        if code.field() != source.field() {
            return Err(Error::FieldMismatch);
        }
        let n = code.block_len();
        let q = source.field().order() as usize;
        let total = (q as u128).checked_pow(n as u32).filter(|&t| t <= cap);
        let Some(total) = total else {
            return Err(Error::TooLarge {
                size: format!("{q}^{n}"),
                cap,
            });
        };
        let total = total as usize;

        let field = source.field();
        let mut probs = Vec::with_capacity(total);
        let mut outputs = Vec::with_capacity(total);
        let mut ids: HashMap<Vec<FieldElement>, u32> = HashMap::new();
        let mut x = vec![FieldElement::ZERO; n];
        for idx in 0..total {
            let mut rem = idx;
            let mut p = 1.0;
            for slot in x.iter_mut() {
                *slot = field.reduce((rem % q) as u64);
                rem /= q;
                p *= source.probability(*slot);
            }
            let y = code.encode(&x)?;
            let next = ids.len() as u32;
            outputs.push(*ids.entry(y).or_insert(next));
            probs.push(p);
        }
        let output_count = ids.len();

        let mut marginal = vec![Accumulator::default(); output_count];
        for (&p, &y) in probs.iter().zip(&outputs) {
            marginal[y as usize].add(p);
        }
        let output_entropy = entropy_bits(marginal.iter().map(Accumulator::value));

        Ok(Self {
            code,
            source,
            n,
            q,
            probs,
            outputs,
            output_count,
            output_entropy,
        })
    }

    pub fn block_len(&self) -> usize {
        self.n
    }

    /// `H(Y)`.
    pub fn output_entropy_bits(&self) -> f64 {
        self.output_entropy
    }

    /// Number of distinct codewords actually produced.
    pub fn output_count(&self) -> usize {
        self.output_count
    }

    /// Exact `I(X^J; Y)` = `H(X^J) + H(Y) - H(X^J, Y)`.
    pub fn mutual_information(&self, subset: &SubsetQuery) -> Result<f64> {
        if subset.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: subset.n(),
            });
        }
        if subset.is_empty() {
            return Ok(0.0);
        }
        let q = self.q;
        let weights: Vec<usize> = (0..self.n)
            .scan(1usize, |w, _| {
                let cur = *w;
                *w *= q;
                Some(cur)
            })
            .collect();
        let projection_count = q.pow(subset.len() as u32);

        let mut projection = vec![Accumulator::default(); projection_count];
        let joint_size = projection_count.saturating_mul(self.output_count);
        let dense = joint_size <= 1 << 22;
        let mut joint_dense = if dense {
            vec![Accumulator::default(); joint_size]
        } else {
            Vec::new()
        };
        let mut joint_sparse: HashMap<usize, Accumulator> = HashMap::new();

        for (idx, (&p, &y)) in self.probs.iter().zip(&self.outputs).enumerate() {
            let mut key = 0usize;
            let mut scale = 1usize;
            for &j in subset.indices() {
                key += (idx / weights[j]) % q * scale;
                scale *= q;
            }
            projection[key].add(p);
            let cell = key * self.output_count + y as usize;
            if dense {
                joint_dense[cell].add(p);
            } else {
                joint_sparse.entry(cell).or_default().add(p);
            }
        }

        let h_projection = entropy_bits(projection.iter().map(Accumulator::value));
        let h_joint = if dense {
            entropy_bits(joint_dense.iter().map(Accumulator::value))
        } else {
            entropy_bits(joint_sparse.values().map(Accumulator::value))
        };
        Ok((h_projection + self.output_entropy - h_joint).max(0.0))
    }

    /// `I(X_i; Y)` for each position.
    pub fn symbol_leak_profile(&self) -> Result<Vec<f64>> {
        (0..self.n)
            .map(|i| self.mutual_information(&SubsetQuery::single(self.n, i)?))
            .collect()
    }

    fn check_epsilon(&self, epsilon: f64) -> Result<f64> {
        let h = self.source.entropy_bits();
        if !(epsilon >= 0.0 && epsilon < h) {
            return Err(Error::EpsilonOutOfRange {
                epsilon,
                entropy: h,
            });
        }
        Ok(h)
    }

    /// Largest `t/n` such that every `t`-subset `J` has
    /// `I(X^J; Y) / t <= epsilon` (up to [`EPSILON_TOLERANCE`]). Every `t`
    /// from `n` down to 1 is tried; no monotonicity in `t` is assumed.
    pub fn mu_epsilon(&self, epsilon: f64) -> Result<Ratio<usize>> {
        self.check_epsilon(epsilon)?;
        for t in (1..=self.n).rev() {
            let mut qualifies = true;
            for indices in (0..self.n).combinations(t) {
                let i = self.mutual_information(&SubsetQuery { n: self.n, indices })?;
                if i / t as f64 > epsilon + EPSILON_TOLERANCE {
                    qualifies = false;
                    break;
                }
            }
            if qualifies {
                return Ok(Ratio::new(t, self.n));
            }
        }
        Ok(Ratio::new(0, self.n))
    }

    /// Computes ε-symbol secrecy, absolute symbol secrecy and the bounds
    /// relating them to list size and total leakage.
    pub fn report(&self, epsilon: f64) -> Result<SecrecyReport> {
        let h = self.check_epsilon(epsilon)?;
        let n = self.n as f64;
        let list_exponent =
            *self.code.list_exponent().numer() as f64 / *self.code.list_exponent().denom() as f64;
        let log_q = (self.q as f64).log2();

        let mu_epsilon = self.mu_epsilon(epsilon)?;
        let mu_zero = self.mu_epsilon(0.0)?;
        let mu = ratio_to_f64(mu_epsilon);
        let secrecy_bound = symbol_secrecy_upper_bound(list_exponent, log_q, h, epsilon);
        let leakage_bound = total_leakage_upper_bound(h, mu, epsilon)?;
        // Y is a deterministic function of X^n, so I(X^n; Y) = H(Y).
        let output_entropy_rate = self.output_entropy / n;
        let rate_bound = rate_list_lower_bound(h, list_exponent, self.q as u32);
        let rate_list_optimal = (mu - secrecy_bound).abs() <= 1e-12
            && (output_entropy_rate - rate_bound).abs() <= EPSILON_TOLERANCE;

        Ok(SecrecyReport {
            field_order: self.q as u32,
            n: self.n,
            list_symbols: self.code.list_symbols(),
            source: self.source.describe(),
            source_entropy: h,
            epsilon,
            mu_epsilon,
            mu_zero,
            per_symbol_leak: self.symbol_leak_profile()?,
            secrecy_bound,
            leakage_bound,
            measured_total_leak: output_entropy_rate,
            rate_list_bound: rate_bound,
            rate_list_optimal,
        })
    }
}

fn ratio_to_f64(r: Ratio<usize>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `min{L log2 q / (H(X) - eps), 1}`: no code with list exponent `L` can
/// hide a larger fraction of symbols at leakage `eps`.
pub fn symbol_secrecy_upper_bound(
    list_exponent: f64,
    log2_alphabet: f64,
    entropy: f64,
    epsilon: f64,
) -> f64 {
    if epsilon >= entropy {
        return 1.0;
    }
    (list_exponent * log2_alphabet / (entropy - epsilon)).min(1.0)
}

/// `H(X) - mu (H(X) - eps)`, an upper bound on `I(X^n; Y) / n`. Unlike
/// [`LeakageAnalyzer::mu_epsilon`], `eps = H(X)` is accepted here.
pub fn total_leakage_upper_bound(entropy: f64, mu: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon >= 0.0 && epsilon <= entropy) {
        return Err(Error::EpsilonOutOfRange { epsilon, entropy });
    }
    Ok(entropy - mu * (entropy - epsilon))
}

/// Exact `I(X^J; Y)` by enumerating all source sequences.
pub fn mutual_information_brute(
    code: &dyn ListSourceCode,
    source: &SourceModel,
    subset: &SubsetQuery,
) -> Result<f64> {
    LeakageAnalyzer::new(code, source)?.mutual_information(subset)
}

pub fn symbol_leak_profile(code: &dyn ListSourceCode, source: &SourceModel) -> Result<Vec<f64>> {
    LeakageAnalyzer::new(code, source)?.symbol_leak_profile()
}

pub fn mu_epsilon(
    code: &dyn ListSourceCode,
    source: &SourceModel,
    epsilon: f64,
) -> Result<Ratio<usize>> {
    LeakageAnalyzer::new(code, source)?.mu_epsilon(epsilon)
}

pub fn secrecy_bounds_report(
    code: &dyn ListSourceCode,
    source: &SourceModel,
    epsilon: f64,
) -> Result<SecrecyReport> {
    LeakageAnalyzer::new(code, source)?.report(epsilon)
}

/// Result of a full secrecy analysis.
#[derive(Clone, Debug, PartialEq)]
pub struct SecrecyReport {
    pub field_order: u32,
    pub n: usize,
    pub list_symbols: usize,
    pub source: String,
    pub source_entropy: f64,
    pub epsilon: f64,
    pub mu_epsilon: Ratio<usize>,
    pub mu_zero: Ratio<usize>,
    /// `I(X_i; Y)` per position.
    pub per_symbol_leak: Vec<f64>,
    /// Upper bound on `mu_epsilon` from the list size.
    pub secrecy_bound: f64,
    /// `H(X) - mu_epsilon (H(X) - eps)`.
    pub leakage_bound: f64,
    /// `I(X^n; Y) / n`.
    pub measured_total_leak: f64,
    /// `H(X) - L log2 q`, floored at zero.
    pub rate_list_bound: f64,
    /// `mu_epsilon` meets its upper bound and `H(Y)/n` meets the rate-list
    /// bound.
    pub rate_list_optimal: bool,
}

fn fmt_f64(x: f64) -> String {
    // Avoid "-0" in the text output.
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

impl SecrecyReport {
    pub fn mu_epsilon_f64(&self) -> f64 {
        ratio_to_f64(self.mu_epsilon)
    }

    pub fn mu_zero_f64(&self) -> f64 {
        ratio_to_f64(self.mu_zero)
    }

    pub fn list_exponent(&self) -> f64 {
        self.list_symbols as f64 / self.n as f64
    }

    /// Line-oriented `key = value` text with stable key names.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("q", self.field_order.to_string());
        line("n", self.n.to_string());
        line("k", self.list_symbols.to_string());
        line("list_exponent", fmt_f64(self.list_exponent()));
        line("source", self.source.clone());
        line("source_entropy", fmt_f64(self.source_entropy));
        line("epsilon", fmt_f64(self.epsilon));
        line("mu_epsilon", fmt_f64(self.mu_epsilon_f64()));
        line("mu_zero", fmt_f64(self.mu_zero_f64()));
        line("prop3_bound", fmt_f64(self.secrecy_bound));
        line("prop4_rhs", fmt_f64(self.leakage_bound));
        line("measured_total_leak", fmt_f64(self.measured_total_leak));
        line("rate_list_bound", fmt_f64(self.rate_list_bound));
        line(
            "per_symbol_leak",
            self.per_symbol_leak.iter().map(|&x| fmt_f64(x)).join(","),
        );
        line("prop5_rate_match", self.rate_list_optimal.to_string());
        out
    }
}

/// Parses `key = value` lines back into a map; used to consume
/// [`SecrecyReport::to_text`] output.
pub fn parse_report_text(text: &str) -> HashMap<String, String> {
    text.lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}
