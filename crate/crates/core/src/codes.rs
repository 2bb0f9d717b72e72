//! Parity-check codes, including generalized Reed-Solomon (Vandermonde)
//! MDS constructions and an exhaustive MDS verifier.

use itertools::Itertools;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::Matrix;

/// Default bound on the number of maximal minors [`CodeSpec::is_mds`] will
/// examine.
pub const DEFAULT_MINOR_CAP: u128 = 1_000_000;

/// A linear code of length `n` given by an `(n - k) x n` parity-check
/// matrix of full row rank. `k` is the list exponent: every syndrome has a
/// coset of `q^k` preimages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    h: Matrix,
    k: usize,
}

impl CodeSpec {
    pub fn from_parity_check(h: Matrix) -> Result<Self> {
        if h.cols() == 0 {
            return Err(Error::InvalidParameters(
                "block length must be positive".into(),
            ));
        }
        let rank = h.rank();
        if rank != h.rows() {
            return Err(Error::RankDeficient {
                rank,
                rows: h.rows(),
            });
        }
        let k = h.cols() - h.rows();
        Ok(Self { h, k })
    }

    /// Parity check `H[i][j] = points[j]^i` for `i < n - k`, with `0^0 = 1`.
    /// Default points are `0, 1, ..., n - 1`.
    pub fn vandermonde(
        field: &FieldSpec,
        n: usize,
        k: usize,
        points: Option<&[FieldElement]>,
    ) -> Result<Self> {
        if n == 0 || k > n {
            return Err(Error::InvalidParameters(format!(
                "need 0 <= k <= n and n >= 1, got n = {n}, k = {k}"
            )));
        }
        if n > field.order() as usize {
            return Err(Error::TooLong {
                n,
                q: field.order(),
            });
        }
        let points: Vec<FieldElement> = match points {
            Some(p) => {
                if p.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: p.len(),
                    });
                }
                if let Some(bad) = p.iter().find(|e| !field.contains(**e)) {
                    return Err(Error::NonCanonical {
                        value: bad.value() as u64,
                        order: field.order(),
                    });
                }
                if !p.iter().all_unique() {
                    return Err(Error::DuplicatePoints);
                }
                p.to_vec()
            }
            None => field.elements().take(n).collect(),
        };
        let mut h = Matrix::zeros(field, n - k, n);
        for i in 0..n - k {
            for (j, &alpha) in points.iter().enumerate() {
                h.set(i, j, field.pow(alpha, i as u64));
            }
        }
        Self::from_parity_check(h)
    }

    /// A uniformly random full-rank parity check, by rejection sampling on
    /// rank. Reproducible from `seed`.
    pub fn random_full_rank(field: &FieldSpec, n: usize, k: usize, seed: u64) -> Result<Self> {
        if n == 0 || k > n {
            return Err(Error::InvalidParameters(format!(
                "need 0 <= k <= n and n >= 1, got n = {n}, k = {k}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = field.order() as u64;
        loop {
            let data = (0..(n - k) * n)
                .map(|_| field.reduce(rng.gen_range(0..q)))
                .collect();
            let h = Matrix::from_elements(field, n - k, n, data)?;
            if h.rank() == n - k {
                return Self::from_parity_check(h);
            }
        }
    }

    pub fn field(&self) -> &FieldSpec {
        self.h.field()
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.h
    }

    /// Block length in symbols.
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// List exponent in symbols.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Syndrome length `n - k`.
    pub fn redundancy(&self) -> usize {
        self.h.rows()
    }

    /// Normalised list size `L = k / n`.
    pub fn list_exponent(&self) -> Ratio<usize> {
        Ratio::new(self.k, self.n())
    }

    /// Singleton bound `n - k + 1`, attained exactly by MDS codes.
    pub fn singleton_bound(&self) -> usize {
        self.n() - self.k + 1
    }

    /// True iff every `(n - k) x (n - k)` column submatrix of `H` is
    /// invertible. Enumerates all minors; refuses when there are more than
    /// `cap` of them.
    pub fn is_mds_with_cap(&self, cap: u128) -> Result<bool> {
        let r = self.redundancy();
        let subsets = binomial(self.n(), r);
        if subsets > cap {
            return Err(Error::TooManySubsets { subsets, cap });
        }
        Ok((0..self.n())
            .combinations(r)
            .all(|cols| self.h.select_columns(&cols).rank() == r))
    }

    pub fn is_mds(&self) -> Result<bool> {
        self.is_mds_with_cap(DEFAULT_MINOR_CAP)
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}
