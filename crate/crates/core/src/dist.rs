//! Finite probability distributions, channels, compositions, and
//! sub-probability masses.
//!
//! All types are immutable after construction and cheap to clone: alphabets
//! are shared `Arc` slices, so cloning a distribution never copies labels,
//! and alphabet equality checks are a pointer comparison on the fast path.
//!
//! Construction tolerates text-format rounding: a probability vector is
//! accepted when its sum is within `1e-9` of one and is then renormalized
//! exactly, so downstream invariants hold to machine precision. Support is
//! always "strictly positive entry" with no epsilon — exact zeros are the
//! only source of singularity, which keeps absolute-continuity logic exact.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numeric;

/// Sum tolerance accepted on ingestion, before exact renormalization.
pub const INGEST_SUM_TOLERANCE: f64 = 1e-9;

/// An ordered alphabet of distinct symbol labels, shared by reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet(Arc<[String]>);

impl Alphabet {
    /// Builds an alphabet from symbol labels.
    ///
    /// Labels must be nonempty as a list and pairwise distinct; duplicate
    /// labels would make symbol lookup ambiguous.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidInput("alphabet is empty".to_string()));
        }
        for (i, a) in labels.iter().enumerate() {
            for b in labels.iter().skip(i + 1) {
                if a == b {
                    return Err(Error::InvalidInput(format!(
                        "alphabet has duplicate label {a:?}"
                    )));
                }
            }
        }
        Ok(Self(labels.into()))
    }

    /// Builds the alphabet `"0", "1", …, "<len-1>"`.
    pub fn numbered(len: usize) -> Result<Self> {
        Self::new((0..len).map(|i| i.to_string()))
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True when the alphabet has no symbols (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The symbol labels in order.
    pub fn labels(&self) -> &[String] {
        &self.0
    }

    /// Index of a label, if present.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.iter().position(|l| l == label)
    }

    /// True when both values denote the same alphabet. Pointer equality is
    /// the fast path; distinct allocations with equal labels also match.
    pub fn same_as(&self, other: &Alphabet) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

fn check_alphabets(context: &str, a: &Alphabet, b: &Alphabet) -> Result<()> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{context}: alphabet mismatch ({:?} vs {:?})",
            a.labels(),
            b.labels()
        )))
    }
}

/// Validates a nonnegative mass vector against an alphabet length.
fn check_masses(context: &str, alphabet: &Alphabet, masses: &[f64]) -> Result<()> {
    if masses.len() != alphabet.len() {
        return Err(Error::InvalidInput(format!(
            "{context}: {} masses for {} symbols",
            masses.len(),
            alphabet.len()
        )));
    }
    for (i, &m) in masses.iter().enumerate() {
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{context}: entry {i} ({:?}) is {m}, expected a finite nonnegative value",
                alphabet.labels()[i]
            )));
        }
    }
    Ok(())
}

/// A probability distribution over a named finite alphabet.
///
/// Entries are nonnegative and sum to one within `1e-12`; exact zeros are
/// permitted and define the complement of the support.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    alphabet: Alphabet,
    probs: Vec<f64>,
}

impl Distribution {
    /// Builds a distribution, accepting a sum within [`INGEST_SUM_TOLERANCE`]
    /// of one and renormalizing exactly.
    pub fn new(alphabet: Alphabet, probs: Vec<f64>) -> Result<Self> {
        check_masses("distribution", &alphabet, &probs)?;
        let sum: f64 = probs.iter().sum();
        if numeric::abs(sum - 1.0) > INGEST_SUM_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "distribution sums to {sum:.17e}, expected 1 within {INGEST_SUM_TOLERANCE:e}"
            )));
        }
        let probs = probs.iter().map(|p| p / sum).collect();
        Ok(Self { alphabet, probs })
    }

    /// The uniform distribution over `alphabet`.
    pub fn uniform(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        let probs = alloc::vec![1.0 / k as f64; k];
        Self { alphabet, probs }
    }

    /// The point mass on symbol `index`.
    pub fn point_mass(alphabet: Alphabet, index: usize) -> Result<Self> {
        if index >= alphabet.len() {
            return Err(Error::InvalidInput(format!(
                "point mass index {index} out of range for {} symbols",
                alphabet.len()
            )));
        }
        let mut probs = alloc::vec![0.0; alphabet.len()];
        probs[index] = 1.0;
        Ok(Self { alphabet, probs })
    }

    /// The alphabet this distribution lives on.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The probability vector.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    /// True when the alphabet is empty (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Indices carrying strictly positive mass.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, _)| i)
    }

    /// True when every atom of `self` lies inside the support of `other`
    /// (absolute continuity at finite alphabets).
    pub fn absolutely_continuous_wrt(&self, other: &Distribution) -> bool {
        self.probs
            .iter()
            .zip(other.probs.iter())
            .all(|(&p, &q)| p == 0.0 || q > 0.0)
    }

    /// L1 distance Σ|p − q| to another distribution on the same alphabet.
    pub fn l1_distance(&self, other: &Distribution) -> Result<f64> {
        check_alphabets("l1_distance", &self.alphabet, &other.alphabet)?;
        Ok(self
            .probs
            .iter()
            .zip(other.probs.iter())
            .map(|(&p, &q)| numeric::abs(p - q))
            .sum())
    }

    /// Total variation distance, half the L1 distance.
    pub fn total_variation(&self, other: &Distribution) -> Result<f64> {
        Ok(0.5 * self.l1_distance(other)?)
    }
}

/// The component of a measure that is absolutely continuous with respect to
/// a reference, together with its total mass.
///
/// `total` is the sum of `masses` by construction and lies in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubProbability {
    alphabet: Alphabet,
    masses: Vec<f64>,
    total: f64,
}

impl SubProbability {
    /// Builds a sub-probability vector; the total may not exceed one beyond
    /// rounding slack.
    pub fn new(alphabet: Alphabet, masses: Vec<f64>) -> Result<Self> {
        check_masses("sub-probability", &alphabet, &masses)?;
        let total: f64 = masses.iter().sum();
        if total > 1.0 + 1e-12 {
            return Err(Error::InvalidInput(format!(
                "sub-probability total {total:.17e} exceeds 1"
            )));
        }
        Ok(Self {
            alphabet,
            masses,
            total: total.min(1.0),
        })
    }

    /// The masses of the absolutely continuous component, atom by atom.
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Total mass, in `[0, 1]`.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// The alphabet this component lives on.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Normalizes to a probability distribution; errors when the component
    /// vanishes identically.
    pub fn normalized(&self) -> Result<Distribution> {
        if self.total <= 0.0 {
            return Err(Error::Domain(
                "cannot normalize a vanishing sub-probability component".to_string(),
            ));
        }
        let probs = self.masses.iter().map(|m| m / self.total).collect();
        Ok(Distribution {
            alphabet: self.alphabet.clone(),
            probs,
        })
    }
}

/// Extracts the component of `w` absolutely continuous in `q`: the masses of
/// `w` on the support of `q`.
pub fn absolutely_continuous_component(
    w: &Distribution,
    q: &Distribution,
) -> Result<SubProbability> {
    check_alphabets("absolutely continuous component", &w.alphabet, &q.alphabet)?;
    let masses = w
        .probs
        .iter()
        .zip(q.probs.iter())
        .map(|(&wy, &qy)| if qy > 0.0 { wy } else { 0.0 })
        .collect();
    SubProbability::new(w.alphabet.clone(), masses)
}

/// A discrete memoryless channel: one output distribution per input symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    input_alphabet: Alphabet,
    output_alphabet: Alphabet,
    rows: Vec<Distribution>,
}

impl Channel {
    /// Builds a channel from per-input rows; every row must live on
    /// `output_alphabet`.
    pub fn new(
        input_alphabet: Alphabet,
        output_alphabet: Alphabet,
        rows: Vec<Distribution>,
    ) -> Result<Self> {
        if rows.len() != input_alphabet.len() {
            return Err(Error::InvalidInput(format!(
                "channel has {} rows for {} input symbols",
                rows.len(),
                input_alphabet.len()
            )));
        }
        for (x, row) in rows.iter().enumerate() {
            check_alphabets(
                &format!("channel row {:?}", input_alphabet.labels()[x]),
                row.alphabet(),
                &output_alphabet,
            )?;
        }
        Ok(Self {
            input_alphabet,
            output_alphabet,
            rows,
        })
    }

    /// Builds a channel from a row-major transition matrix.
    pub fn from_matrix(
        input_alphabet: Alphabet,
        output_alphabet: Alphabet,
        matrix: &[Vec<f64>],
    ) -> Result<Self> {
        let rows = matrix
            .iter()
            .map(|r| Distribution::new(output_alphabet.clone(), r.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(input_alphabet, output_alphabet, rows)
    }

    /// The binary symmetric channel with the given crossover probability.
    pub fn binary_symmetric(crossover: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&crossover) {
            return Err(Error::InvalidInput(format!(
                "crossover probability {crossover} outside [0, 1]"
            )));
        }
        let input = Alphabet::numbered(2)?;
        let output = Alphabet::numbered(2)?;
        Self::from_matrix(
            input,
            output,
            &[
                alloc::vec![1.0 - crossover, crossover],
                alloc::vec![crossover, 1.0 - crossover],
            ],
        )
    }

    /// Input alphabet.
    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input_alphabet
    }

    /// Output alphabet.
    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output_alphabet
    }

    /// Number of input symbols.
    pub fn num_inputs(&self) -> usize {
        self.rows.len()
    }

    /// Number of output symbols.
    pub fn num_outputs(&self) -> usize {
        self.output_alphabet.len()
    }

    /// The output distribution of input symbol `x`.
    pub fn row(&self, x: usize) -> &Distribution {
        &self.rows[x]
    }

    /// All rows in input order.
    pub fn rows(&self) -> &[Distribution] {
        &self.rows
    }

    /// The output marginal Σₓ p(x) W(x) of an input distribution.
    pub fn output_marginal(&self, p: &Distribution) -> Result<Distribution> {
        check_alphabets("output marginal", p.alphabet(), &self.input_alphabet)?;
        let mut acc = alloc::vec![0.0; self.num_outputs()];
        for (x, &px) in p.probs().iter().enumerate() {
            if px == 0.0 {
                continue;
            }
            for (y, &wy) in self.rows[x].probs().iter().enumerate() {
                acc[y] += px * wy;
            }
        }
        Distribution::new(self.output_alphabet.clone(), acc)
    }
}

/// Absolute slack allowed when checking that `n·p(x)` is integral.
pub const COMPOSITION_COUNT_TOLERANCE: f64 = 1e-6;

/// A constant composition: an input type `base` that is exactly realizable
/// at blocklength `n`, i.e. `base.probs()[x] = counts[x] / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    base: Distribution,
    n: usize,
    counts: Vec<usize>,
}

impl Composition {
    /// Builds a composition from per-symbol counts; `n` is their sum and the
    /// base distribution is `counts / n` exactly.
    pub fn from_counts(alphabet: Alphabet, counts: Vec<usize>) -> Result<Self> {
        if counts.len() != alphabet.len() {
            return Err(Error::InvalidInput(format!(
                "composition has {} counts for {} symbols",
                counts.len(),
                alphabet.len()
            )));
        }
        let n: usize = counts.iter().sum();
        if n == 0 {
            return Err(Error::InvalidInput(
                "composition blocklength is zero".to_string(),
            ));
        }
        let probs = counts.iter().map(|&c| c as f64 / n as f64).collect();
        let base = Distribution::new(alphabet, probs)?;
        Ok(Self { base, n, counts })
    }

    /// Builds a composition by checking that `n·base(x)` is integral for
    /// every symbol (within [`COMPOSITION_COUNT_TOLERANCE`]) and rebuilding
    /// the base exactly from the rounded counts.
    pub fn new(base: &Distribution, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "composition blocklength is zero".to_string(),
            ));
        }
        let mut counts = Vec::with_capacity(base.len());
        for (x, &px) in base.probs().iter().enumerate() {
            let scaled = px * n as f64;
            let rounded = libm::round(scaled);
            if numeric::abs(scaled - rounded) > COMPOSITION_COUNT_TOLERANCE {
                return Err(Error::InvalidInput(format!(
                    "composition: n·P({:?}) = {scaled} is not an integer",
                    base.alphabet().labels()[x]
                )));
            }
            counts.push(rounded as usize);
        }
        Self::from_counts(base.alphabet().clone(), counts)
    }

    /// The input type, `counts / n`.
    pub fn base(&self) -> &Distribution {
        &self.base
    }

    /// Blocklength.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Per-symbol counts, summing to `n`.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }
}
