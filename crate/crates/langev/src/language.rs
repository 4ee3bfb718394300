//! Matrix representation of a proto-language and the comprehension metrics
//! derived from it.
//!
//! Each agent carries an M×S association matrix counting how often signal `x`
//! is used for meaning `mu`. Row-normalizing gives the encoding matrix
//! (probability of emitting signal `x` for meaning `mu`); column-normalizing
//! gives the decoding matrix (probability of interpreting signal `x` as
//! meaning `mu`). A signal an agent never uses decodes to an all-zero row and
//! contributes nothing to any comprehension sum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// M×S nonnegative count matrix; the heritable language object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssociationMatrix {
    meanings: usize,
    signals: usize,
    counts: Vec<f64>,
}

impl AssociationMatrix {
    /// All-zero matrix; rows are filled by initialization or learning.
    pub fn zeros(meanings: usize, signals: usize) -> Self {
        assert!(meanings >= 1 && signals >= 1, "dimensions must be positive");
        AssociationMatrix {
            meanings,
            signals,
            counts: vec![0.0; meanings * signals],
        }
    }

    /// Matrix with every count equal to `value`. With `value > 0` this is the
    /// fully uniform language: encoding rows 1/S, decoding rows 1/M.
    pub fn constant(meanings: usize, signals: usize, value: f64) -> Self {
        assert!(value >= 0.0, "counts must be nonnegative");
        let mut a = Self::zeros(meanings, signals);
        a.counts.fill(value);
        a
    }

    /// Builds a matrix from explicit rows. Panics on ragged or negative input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        assert!(!rows.is_empty(), "matrix must have at least one row");
        let signals = rows[0].len();
        assert!(signals >= 1, "matrix must have at least one column");
        let mut counts = Vec::with_capacity(rows.len() * signals);
        for row in rows {
            assert_eq!(row.len(), signals, "rows must have equal length");
            for &v in row {
                assert!(v >= 0.0 && v.is_finite(), "counts must be nonnegative");
                counts.push(v);
            }
        }
        AssociationMatrix {
            meanings: rows.len(),
            signals,
            counts,
        }
    }

    pub fn meanings(&self) -> usize {
        self.meanings
    }

    pub fn signals(&self) -> usize {
        self.signals
    }

    pub fn get(&self, meaning: usize, signal: usize) -> f64 {
        self.counts[meaning * self.signals + signal]
    }

    pub fn add(&mut self, meaning: usize, signal: usize, amount: f64) {
        assert!(amount >= 0.0, "counts must stay nonnegative");
        self.counts[meaning * self.signals + signal] += amount;
    }

    pub fn row(&self, meaning: usize) -> &[f64] {
        &self.counts[meaning * self.signals..(meaning + 1) * self.signals]
    }
}

/// M×S matrix of emission probabilities; every row sums to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodingMatrix {
    meanings: usize,
    signals: usize,
    probs: Vec<f64>,
}

impl EncodingMatrix {
    pub fn meanings(&self) -> usize {
        self.meanings
    }

    pub fn signals(&self) -> usize {
        self.signals
    }

    pub fn get(&self, meaning: usize, signal: usize) -> f64 {
        self.probs[meaning * self.signals + signal]
    }

    pub fn row(&self, meaning: usize) -> &[f64] {
        &self.probs[meaning * self.signals..(meaning + 1) * self.signals]
    }
}

/// S×M matrix of interpretation probabilities; every row sums to 1 or is
/// all-zero for a signal the agent never uses.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodingMatrix {
    signals: usize,
    meanings: usize,
    probs: Vec<f64>,
}

impl DecodingMatrix {
    pub fn signals(&self) -> usize {
        self.signals
    }

    pub fn meanings(&self) -> usize {
        self.meanings
    }

    pub fn get(&self, signal: usize, meaning: usize) -> f64 {
        self.probs[signal * self.meanings + meaning]
    }

    pub fn row(&self, signal: usize) -> &[f64] {
        &self.probs[signal * self.meanings..(signal + 1) * self.meanings]
    }
}

/// Row-normalizes an association matrix into emission probabilities.
///
/// A zero row is rejected: learned and initialized matrices always carry Q
/// samples per meaning, so a zero row signals a caller bug.
pub fn derive_encoding(assoc: &AssociationMatrix) -> Result<EncodingMatrix> {
    let (m, s) = (assoc.meanings, assoc.signals);
    let mut probs = vec![0.0; m * s];
    for mu in 0..m {
        let total: f64 = assoc.row(mu).iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroRow { row: mu });
        }
        for x in 0..s {
            probs[mu * s + x] = assoc.get(mu, x) / total;
        }
    }
    Ok(EncodingMatrix {
        meanings: m,
        signals: s,
        probs,
    })
}

/// Column-normalizes an association matrix into interpretation probabilities.
///
/// A signal whose column sums to zero gets an all-zero decoding row: a signal
/// never sent carries no meaning.
pub fn derive_decoding(assoc: &AssociationMatrix) -> DecodingMatrix {
    let (m, s) = (assoc.meanings, assoc.signals);
    let mut probs = vec![0.0; s * m];
    for x in 0..s {
        let total: f64 = (0..m).map(|mu| assoc.get(mu, x)).sum();
        if total > 0.0 {
            for mu in 0..m {
                probs[x * m + mu] = assoc.get(mu, x) / total;
            }
        }
    }
    DecodingMatrix {
        signals: s,
        meanings: m,
        probs,
    }
}

/// Probability that a meaning sent with encoding `enc` is recovered by a
/// receiver with decoding `dec`, averaged over meanings.
pub fn comprehension(enc: &EncodingMatrix, dec: &DecodingMatrix) -> f64 {
    assert_eq!(enc.signals, dec.signals, "signal counts must match");
    assert_eq!(enc.meanings, dec.meanings, "meaning counts must match");
    let (m, s) = (enc.meanings, enc.signals);
    let mut sum = 0.0;
    for mu in 0..m {
        for x in 0..s {
            sum += enc.get(mu, x) * dec.get(x, mu);
        }
    }
    sum / m as f64
}

/// An agent: an association matrix with its derived codes cached, plus a site
/// on the ring lattice. Immutable once constructed; the model never changes a
/// living agent's language.
#[derive(Clone, Debug)]
pub struct Agent {
    id: usize,
    position: usize,
    assoc: AssociationMatrix,
    enc: EncodingMatrix,
    dec: DecodingMatrix,
    // Decoding transposed to meaning-major order so a directed comprehension
    // is a single contiguous dot product with the encoding.
    dec_by_meaning: Vec<f64>,
}

impl Agent {
    pub fn new(id: usize, position: usize, assoc: AssociationMatrix) -> Result<Self> {
        let enc = derive_encoding(&assoc)?;
        let dec = derive_decoding(&assoc);
        let (m, s) = (assoc.meanings, assoc.signals);
        let mut dec_by_meaning = vec![0.0; m * s];
        for x in 0..s {
            for mu in 0..m {
                dec_by_meaning[mu * s + x] = dec.get(x, mu);
            }
        }
        Ok(Agent {
            id,
            position,
            assoc,
            enc,
            dec,
            dec_by_meaning,
        })
    }

    pub fn id(&self) -> usize {
        self.id
    }

    /// Site on the 1D ring lattice.
    pub fn position(&self) -> usize {
        self.position
    }

    pub fn association(&self) -> &AssociationMatrix {
        &self.assoc
    }

    pub fn encoding(&self) -> &EncodingMatrix {
        &self.enc
    }

    pub fn decoding(&self) -> &DecodingMatrix {
        &self.dec
    }

    pub fn meanings(&self) -> usize {
        self.assoc.meanings
    }

    pub fn signals(&self) -> usize {
        self.assoc.signals
    }

    /// Directed comprehension from this agent to `other`. Same summation
    /// order as [`comprehension`], so the two routes agree exactly.
    pub fn comprehends(&self, other: &Agent) -> f64 {
        assert_eq!(self.assoc.signals, other.assoc.signals);
        assert_eq!(self.assoc.meanings, other.assoc.meanings);
        let dot: f64 = self
            .enc
            .probs
            .iter()
            .zip(other.dec_by_meaning.iter())
            .map(|(e, d)| e * d)
            .sum();
        dot / self.assoc.meanings as f64
    }
}

/// Mutual comprehension between two agents: the two directed comprehensions
/// averaged.
pub fn mutual_comprehension(a: &Agent, b: &Agent) -> f64 {
    (a.comprehends(b) + b.comprehends(a)) / 2.0
}

/// All pairwise comprehensions of one generation, computed once.
#[derive(Clone, Debug)]
pub struct ComprehensionCache {
    n: usize,
    directed: Vec<f64>,
    mutual: Vec<f64>,
}

impl ComprehensionCache {
    /// Computes directed and mutual comprehension for every agent pair,
    /// including the diagonal.
    pub fn build(agents: &[Agent]) -> Self {
        assert!(!agents.is_empty(), "population must be nonempty");
        let n = agents.len();
        let (m, s) = (agents[0].meanings(), agents[0].signals());
        for a in agents {
            assert_eq!((a.meanings(), a.signals()), (m, s), "mixed dimensions");
        }
        let mut directed = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                directed[i * n + j] = agents[i].comprehends(&agents[j]);
            }
        }
        let mut mutual = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let f = (directed[i * n + j] + directed[j * n + i]) / 2.0;
                mutual[i * n + j] = f;
                mutual[j * n + i] = f;
            }
        }
        ComprehensionCache {
            n,
            directed,
            mutual,
        }
    }

    /// Wraps an externally supplied mutual-comprehension matrix (row-major
    /// N×N). Directed values are taken equal to the mutual ones.
    pub fn from_mutual(n: usize, mutual: Vec<f64>) -> Self {
        assert_eq!(mutual.len(), n * n, "matrix must be N x N");
        for i in 0..n {
            for j in 0..i {
                assert_eq!(
                    mutual[i * n + j].to_bits(),
                    mutual[j * n + i].to_bits(),
                    "mutual comprehension must be symmetric"
                );
            }
        }
        ComprehensionCache {
            n,
            directed: mutual.clone(),
            mutual,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// F(i, j).
    pub fn mutual(&self, i: usize, j: usize) -> f64 {
        self.mutual[i * self.n + j]
    }

    /// C(i -> j).
    pub fn directed(&self, i: usize, j: usize) -> f64 {
        self.directed[i * self.n + j]
    }

    pub fn mutual_row(&self, i: usize) -> &[f64] {
        &self.mutual[i * self.n..(i + 1) * self.n]
    }
}

/// Mean mutual comprehension over unordered pairs of `members`.
///
/// A singleton community has no pairs and scores 0 by convention. An empty
/// member set is a contract violation.
pub fn within_community_comprehension(members: &[usize], cache: &ComprehensionCache) -> f64 {
    assert!(!members.is_empty(), "community must be nonempty");
    if members.len() < 2 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            sum += cache.mutual(i, j);
            pairs += 1;
        }
    }
    sum / pairs as f64
}

/// W(P): mean mutual comprehension over all unordered agent pairs.
pub fn overall_comprehension(cache: &ComprehensionCache) -> f64 {
    let n = cache.n();
    if n < 2 {
        return 0.0;
    }
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += cache.mutual(i, j);
        }
    }
    sum / (n * (n - 1) / 2) as f64
}

/// Comprehension level 1/M of a population whose codes are fully uniform;
/// the "barely a language" threshold.
pub fn random_baseline(meanings: usize) -> f64 {
    assert!(meanings >= 1);
    1.0 / meanings as f64
}
