//! Symbolic dynamics over a 0/1 incidence matrix: admissible words, the shift
//! map, irreducibility, word/periodic-orbit counting, and the
//! dynamics-adapted ultrametric d_f under which the coding map of the
//! repeller is an isometry.

use serde::Serialize;
use thiserror::Error;

use crate::padic::PNorm;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SubshiftError {
    #[error("shift of an empty word")]
    EmptyWord,
    #[error("word lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("symbol {0} outside the alphabet 1..={1}")]
    SymbolRange(usize, usize),
}

/// kappa x kappa matrix with entries in {0,1}; a_{ij} = 1 means symbol j may
/// follow symbol i.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceMatrix {
    pub size: usize,
    pub rows: Vec<Vec<u8>>,
}

impl IncidenceMatrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Self {
        let size = rows.len();
        debug_assert!(rows.iter().all(|r| r.len() == size));
        debug_assert!(rows.iter().flatten().all(|&e| e <= 1));
        IncidenceMatrix { size, rows }
    }

    pub fn all_ones(size: usize) -> Self {
        IncidenceMatrix {
            size,
            rows: vec![vec![1; size]; size],
        }
    }

    pub fn is_all_ones(&self) -> bool {
        self.rows.iter().flatten().all(|&e| e == 1)
    }

    /// entry with 1-based symbols.
    pub fn allows(&self, i: usize, j: usize) -> bool {
        self.rows[i - 1][j - 1] == 1
    }

    fn mul_counts(&self, a: &[Vec<u128>]) -> Vec<Vec<u128>> {
        let n = self.size;
        let mut out = vec![vec![0u128; n]; n];
        for i in 0..n {
            for l in 0..n {
                if a[i][l] == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i][j] += a[i][l] * self.rows[l][j] as u128;
                }
            }
        }
        out
    }

    /// A^n as exact path counts.
    pub fn power_counts(&self, n: u32) -> Vec<Vec<u128>> {
        let size = self.size;
        let mut acc: Vec<Vec<u128>> = (0..size)
            .map(|i| (0..size).map(|j| u128::from(i == j)).collect())
            .collect();
        for _ in 0..n {
            acc = self.mul_counts(&acc);
        }
        acc
    }
}

/// True iff for every (i,j) some power A^m, m <= kappa^2, has a positive
/// (i,j) entry.
pub fn is_irreducible(a: &IncidenceMatrix) -> bool {
    let n = a.size;
    if n == 0 {
        return false;
    }
    let mut reach = vec![vec![false; n]; n];
    let mut frontier: Vec<Vec<u128>> = a
        .rows
        .iter()
        .map(|r| r.iter().map(|&e| e as u128).collect())
        .collect();
    for _ in 0..n * n {
        for i in 0..n {
            for j in 0..n {
                if frontier[i][j] > 0 {
                    reach[i][j] = true;
                }
            }
        }
        if reach.iter().flatten().all(|&b| b) {
            return true;
        }
        frontier = a.mul_counts(&frontier);
        // counts can explode; clamp to keep them boolean-meaningful
        for row in frontier.iter_mut() {
            for e in row.iter_mut() {
                *e = (*e).min(1);
            }
        }
    }
    reach.iter().flatten().all(|&b| b)
}

/// Number of admissible words of length n (n >= 1).
pub fn count_words(a: &IncidenceMatrix, n: u32) -> u128 {
    debug_assert!(n >= 1);
    if n == 1 {
        return a.size as u128;
    }
    a.power_counts(n - 1).iter().flatten().sum()
}

/// trace(A^n): the number of admissible cycles of length n, i.e. of points
/// with f^n(x) = x in the conjugate dynamics.
pub fn count_periodic(a: &IncidenceMatrix, n: u32) -> u128 {
    let pw = a.power_counts(n);
    (0..a.size).map(|i| pw[i][i]).sum()
}

/// A finite word over the alphabet {1..kappa}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SymbolWord {
    pub symbols: Vec<usize>,
}

impl SymbolWord {
    pub fn new(symbols: Vec<usize>) -> Self {
        SymbolWord { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// A[s_m][s_{m+1}] = 1 for every consecutive pair.
    pub fn is_admissible(&self, a: &IncidenceMatrix) -> Result<bool, SubshiftError> {
        for &s in &self.symbols {
            if s == 0 || s > a.size {
                return Err(SubshiftError::SymbolRange(s, a.size));
            }
        }
        Ok(self.symbols.windows(2).all(|w| a.allows(w[0], w[1])))
    }
}

impl std::fmt::Display for SymbolWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Drops the first symbol.
pub fn shift(word: &SymbolWord) -> Result<SymbolWord, SubshiftError> {
    if word.is_empty() {
        return Err(SubshiftError::EmptyWord);
    }
    Ok(SymbolWord::new(word.symbols[1..].to_vec()))
}

/// Exponent data for the dynamical metric: per-symbol expansion exponents
/// tau_i and the pairwise kappa(i,j) with |a_i - a_j|_p = p^{-kappa(i,j)}.
/// The construction guarantees kappa(i,j) < tau_i.
#[derive(Debug, Clone, Serialize)]
pub struct MetricTable {
    pub tau: Vec<i64>,
    pub kappa_table: Vec<Vec<i64>>,
}

impl MetricTable {
    pub fn new(tau: Vec<i64>, kappa_table: Vec<Vec<i64>>) -> Self {
        MetricTable { tau, kappa_table }
    }

    fn tau_of(&self, symbol: usize) -> i64 {
        self.tau[symbol - 1]
    }

    fn kappa_of(&self, i: usize, j: usize) -> i64 {
        self.kappa_table[i - 1][j - 1]
    }
}

/// The metric d_f on equal-length finite words: with n the first
/// disagreement index,
///   n = 0:  p^{-kappa(x_0, y_0)}
///   n >= 1: p^{-tau_{x_0} - ... - tau_{x_{n-1}} - kappa(x_n, y_n)}
/// and 0 for identical words (finite-word convention).
pub fn d_f(x: &SymbolWord, y: &SymbolWord, table: &MetricTable) -> Result<PNorm, SubshiftError> {
    if x.len() != y.len() {
        return Err(SubshiftError::LengthMismatch(x.len(), y.len()));
    }
    let n = match x
        .symbols
        .iter()
        .zip(&y.symbols)
        .position(|(a, b)| a != b)
    {
        Some(n) => n,
        None => return Ok(PNorm::Zero),
    };
    let tau_sum: i64 = x.symbols[..n].iter().map(|&s| table.tau_of(s)).sum();
    let kappa = table.kappa_of(x.symbols[n], y.symbols[n]);
    Ok(PNorm::Power(-(tau_sum + kappa)))
}
