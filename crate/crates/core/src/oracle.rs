//! Exact brute-force oracles: the Neyman-Pearson trade-off and the exact
//! list-decoding error.
//!
//! Everything here is computed by finite enumeration with no asymptotic
//! approximation, so these functions are the ground truth the bounds in
//! [`crate::bounds`] are tested against. The only concessions to finite
//! arithmetic are compensated summation for long totals and a log-domain
//! atom pipeline: per-outcome probabilities of long products live as sums
//! of logarithms until the final exponentiation, because the linear values
//! underflow thousands of orders of magnitude before the quantities built
//! from them (tilted probabilities, tail masses) become negligible.
//!
//! Enumerations are guarded by an explicit cap checked *before* any
//! allocation; exceeding it is a [`Error::Capacity`] with the exact
//! required size.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::bounds::{check_tilt_order, HtInstance};
use crate::dist::{Channel, Composition};
use crate::error::{Error, Result};
use crate::numeric::{self, Accumulator};

/// Default ceiling on enumeration sizes (log-likelihood ratio atoms or
/// output sequences): ten million states.
pub const DEFAULT_ATOM_CAP: u64 = 10_000_000;

/// One atom of the log-likelihood ratio distribution of a product
/// hypothesis-testing instance: all outcomes in the `Q`-support sharing
/// one value of `Λ = ln(dW_ac/dQ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LlrAtom {
    /// The shared log-likelihood ratio; `-∞` on the `W`-null part of the
    /// `Q`-support.
    pub lambda: f64,
    /// `W`-mass of the atom (zero for the `-∞` atom).
    pub p_w: f64,
    /// `Q`-mass of the atom.
    pub p_q: f64,
    /// Mass under the order-ρ tilted measure `∝ (dW_ac/dQ)^ρ dQ` (zero
    /// for the `-∞` atom).
    pub p_tilted: f64,
}

/// The full atom distribution of `Λ` for an instance, plus the `W`-mass
/// of the region where `Q` vanishes (which carries no atom: `Λ` is only
/// defined `Q`-a.e.).
#[derive(Debug, Clone)]
pub struct LlrAtomDistribution {
    /// Atoms sorted by ascending `lambda`, each value appearing once;
    /// the `-∞` atom, when it has positive `Q`-mass, comes first.
    pub atoms: Vec<LlrAtom>,
    /// `W(Q = 0)`, the singular mass: part of every test's rejection
    /// region at no cost in `Q`-probability.
    pub singular_mass_w: f64,
}

/// An atom still in the log domain.
#[derive(Debug, Clone, Copy)]
struct LnAtom {
    lambda: f64,
    ln_w: f64,
    ln_q: f64,
}

/// Pipeline output before tilting: finite atoms in the log domain plus
/// the closed-form masses of the two special regions.
struct RawAtomData {
    finite: Vec<LnAtom>,
    neg_inf_q_mass: f64,
    singular_mass_w: f64,
}

/// `C(n, k)` in checked 128-bit arithmetic; `None` on overflow.
fn binom_u128(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut res: u128 = 1;
    for i in 0..k {
        res = res.checked_mul(n - k + 1 + i)?;
        res /= i + 1;
    }
    Some(res)
}

/// Sorts atoms by `lambda` and merges runs of bitwise-equal values,
/// log-adding their masses. Equal `lambda` is exact equality: distinct
/// rounded values stay distinct atoms, which is what exact threshold
/// tests require.
fn merge_equal_lambda(atoms: &mut Vec<LnAtom>) {
    atoms.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let mut merged: Vec<LnAtom> = Vec::with_capacity(atoms.len());
    let mut group_w: Vec<f64> = Vec::new();
    let mut group_q: Vec<f64> = Vec::new();
    let mut i = 0;
    while i < atoms.len() {
        let lambda = atoms[i].lambda;
        group_w.clear();
        group_q.clear();
        let mut j = i;
        while j < atoms.len() && atoms[j].lambda.total_cmp(&lambda).is_eq() {
            group_w.push(atoms[j].ln_w);
            group_q.push(atoms[j].ln_q);
            j += 1;
        }
        merged.push(LnAtom {
            lambda,
            ln_w: numeric::log_sum_exp(&group_w),
            ln_q: numeric::log_sum_exp(&group_q),
        });
        i = j;
    }
    *atoms = merged;
}

/// Emits the type classes of `count` draws from a letter's atom list:
/// one product atom per count vector, weighted by the multinomial
/// coefficient.
fn letter_type_atoms(atoms: &[LnAtom], count: usize) -> Vec<LnAtom> {
    fn recurse(
        atoms: &[LnAtom],
        count: usize,
        remaining: usize,
        pos: usize,
        k: &mut [usize],
        out: &mut Vec<LnAtom>,
    ) {
        if pos + 1 == k.len() {
            k[pos] = remaining;
            let mut ln_multi = numeric::ln_factorial(count);
            let mut lambda = 0.0;
            let mut ln_w = 0.0;
            let mut ln_q = 0.0;
            for (i, &ki) in k.iter().enumerate() {
                if ki == 0 {
                    continue;
                }
                ln_multi -= numeric::ln_factorial(ki);
                lambda += ki as f64 * atoms[i].lambda;
                ln_w += ki as f64 * atoms[i].ln_w;
                ln_q += ki as f64 * atoms[i].ln_q;
            }
            out.push(LnAtom {
                lambda,
                ln_w: ln_multi + ln_w,
                ln_q: ln_multi + ln_q,
            });
            return;
        }
        for v in 0..=remaining {
            k[pos] = v;
            recurse(atoms, count, remaining - v, pos + 1, k, out);
        }
    }

    let mut out = Vec::new();
    let mut k = alloc::vec![0usize; atoms.len()];
    recurse(atoms, count, count, 0, &mut k, &mut out);
    merge_equal_lambda(&mut out);
    out
}

/// Builds the exact atom distribution of an instance in the log domain.
///
/// Per letter, the outcomes split three ways: common support (a finite
/// atom each), `Q`-support where `w = 0` (all land in the product's `-∞`
/// atom), and `W`-mass off the `Q`-support (the singular region). The
/// two special masses are computed in closed form — `1 - Π(·)^count` via
/// `expm1` — rather than by enumeration, so they stay accurate when they
/// are complements of tiny quantities.
fn raw_atoms(instance: &HtInstance, cap: u64) -> Result<RawAtomData> {
    struct LetterData {
        atoms: Vec<LnAtom>,
        ln_common_q: f64,
        ln_ac_w: f64,
        count: usize,
    }

    // Rounding in Σq or Σw must not fabricate special regions that no
    // letter structurally has, so their presence is tracked exactly.
    let mut has_w_null_q_mass = false;
    let mut has_w_singular_mass = false;
    let mut letters: Vec<LetterData> = Vec::with_capacity(instance.letters().len());
    for (i, letter) in instance.letters().iter().enumerate() {
        let w = letter.w.probs();
        let q = letter.q.probs();
        let mut atoms = Vec::new();
        let mut common_q = 0.0;
        let mut ac_w = 0.0;
        for y in 0..q.len() {
            if q[y] > 0.0 {
                ac_w += w[y];
                if w[y] > 0.0 {
                    common_q += q[y];
                    atoms.push(LnAtom {
                        lambda: numeric::ln(w[y]) - numeric::ln(q[y]),
                        ln_w: numeric::ln(w[y]),
                        ln_q: numeric::ln(q[y]),
                    });
                } else {
                    has_w_null_q_mass = true;
                }
            } else if w[y] > 0.0 {
                has_w_singular_mass = true;
            }
        }
        if atoms.is_empty() {
            return Err(Error::MutuallySingular { letter: i });
        }
        merge_equal_lambda(&mut atoms);
        letters.push(LetterData {
            atoms,
            ln_common_q: numeric::ln(common_q),
            ln_ac_w: numeric::ln(ac_w),
            count: letter.count,
        });
    }

    // The enumeration materializes one atom per type class and letter
    // combination; refuse before allocating if that exceeds the cap.
    let mut required: u128 = 1;
    for l in &letters {
        let combos = binom_u128(
            l.count as u128 + l.atoms.len() as u128 - 1,
            l.atoms.len() as u128 - 1,
        )
        .unwrap_or(u128::MAX);
        required = required.checked_mul(combos).unwrap_or(u128::MAX);
    }
    if required > cap as u128 {
        return Err(Error::Capacity { required, cap });
    }

    let mut finite = alloc::vec![LnAtom {
        lambda: 0.0,
        ln_w: 0.0,
        ln_q: 0.0,
    }];
    for l in &letters {
        let types = letter_type_atoms(&l.atoms, l.count);
        let mut next = Vec::with_capacity(finite.len() * types.len());
        for a in &finite {
            for b in &types {
                next.push(LnAtom {
                    lambda: a.lambda + b.lambda,
                    ln_w: a.ln_w + b.ln_w,
                    ln_q: a.ln_q + b.ln_q,
                });
            }
        }
        merge_equal_lambda(&mut next);
        finite = next;
    }

    let ln_keep_q: f64 = letters.iter().map(|l| l.count as f64 * l.ln_common_q).sum();
    let ln_ac: f64 = letters.iter().map(|l| l.count as f64 * l.ln_ac_w).sum();
    Ok(RawAtomData {
        finite,
        neg_inf_q_mass: if has_w_null_q_mass {
            -numeric::expm1(ln_keep_q)
        } else {
            0.0
        },
        singular_mass_w: if has_w_singular_mass {
            -numeric::expm1(ln_ac)
        } else {
            0.0
        },
    })
}

/// Exponentiates raw atoms into the public representation, tilting at
/// `rho` when given.
fn assemble(raw: RawAtomData, rho: Option<f64>) -> LlrAtomDistribution {
    let lse = rho.map(|r| {
        numeric::log_sum_exp_iter(raw.finite.iter().map(|a| a.ln_q + r * a.lambda))
    });
    let mut atoms = Vec::with_capacity(raw.finite.len() + 1);
    if raw.neg_inf_q_mass > 0.0 {
        atoms.push(LlrAtom {
            lambda: f64::NEG_INFINITY,
            p_w: 0.0,
            p_q: raw.neg_inf_q_mass,
            p_tilted: 0.0,
        });
    }
    for a in &raw.finite {
        atoms.push(LlrAtom {
            lambda: a.lambda,
            p_w: numeric::exp(a.ln_w),
            p_q: numeric::exp(a.ln_q),
            p_tilted: match (rho, lse) {
                (Some(r), Some(lse)) => numeric::exp(a.ln_q + r * a.lambda - lse),
                _ => 0.0,
            },
        });
    }
    LlrAtomDistribution {
        atoms,
        singular_mass_w: raw.singular_mass_w,
    }
}

/// Computes the exact distribution of the log-likelihood ratio of an
/// instance together with its order-`rho` tilting, by type-class
/// enumeration within letters and products across letters.
///
/// # Errors
///
/// `Domain` for `rho ∉ (1, ∞)`; `MutuallySingular` when some letter has
/// no common support at all; `Capacity` when the enumeration would
/// exceed [`DEFAULT_ATOM_CAP`].
pub fn llr_atoms(rho: f64, instance: &HtInstance) -> Result<LlrAtomDistribution> {
    llr_atoms_with_cap(rho, instance, DEFAULT_ATOM_CAP)
}

/// [`llr_atoms`] with an explicit enumeration cap.
pub fn llr_atoms_with_cap(
    rho: f64,
    instance: &HtInstance,
    cap: u64,
) -> Result<LlrAtomDistribution> {
    check_tilt_order(rho)?;
    Ok(assemble(raw_atoms(instance, cap)?, Some(rho)))
}

/// The optimal test achieving [`np_tradeoff_exact`]: reject (decide `W`)
/// on the singular region, on every atom with `lambda > lambda_cut`, and
/// on a `boundary_fraction` share of the cut atom's mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdEvent {
    /// The boundary atom's log-likelihood ratio; `-∞` when the whole
    /// space is included.
    pub lambda_cut: f64,
    /// Fraction of the boundary atom's mass inside the rejection region,
    /// in `[0, 1]`; `1.0` when the whole space is included.
    pub boundary_fraction: f64,
    /// Whether the rejection region contains the `Q`-null region (always
    /// true: it costs nothing).
    pub includes_singular: bool,
}

/// The exact Neyman-Pearson trade-off: the minimum of `W(Eᶜ)` over all
/// (randomized) events with `Q(E) ≤ q_budget`, with the optimal
/// threshold test that attains it.
///
/// The minimizer fills the budget greedily by descending likelihood
/// ratio, splitting the boundary atom fractionally; the returned value
/// is the compensated sum of the excluded `W`-masses.
///
/// ```
/// use augustin_core::bounds::HtInstance;
/// use augustin_core::dist::{Alphabet, Distribution};
/// use augustin_core::oracle::np_tradeoff_exact;
///
/// let a = Alphabet::numbered(2)?;
/// let w = Distribution::new(a.clone(), vec![0.75, 0.25])?;
/// let q = Distribution::uniform(a);
/// let inst = HtInstance::iid(&w, &q, 2)?;
/// let (min_w, event) = np_tradeoff_exact(&inst, 0.25)?;
/// assert!((min_w - 0.4375).abs() < 1e-15);
/// assert_eq!(event.boundary_fraction, 0.0);
/// # Ok::<(), augustin_core::Error>(())
/// ```
pub fn np_tradeoff_exact(instance: &HtInstance, q_budget: f64) -> Result<(f64, ThresholdEvent)> {
    np_tradeoff_exact_with_cap(instance, q_budget, DEFAULT_ATOM_CAP)
}

/// [`np_tradeoff_exact`] with an explicit enumeration cap.
pub fn np_tradeoff_exact_with_cap(
    instance: &HtInstance,
    q_budget: f64,
    cap: u64,
) -> Result<(f64, ThresholdEvent)> {
    let atoms = assemble(raw_atoms(instance, cap)?, None);
    np_tradeoff_from_atoms(&atoms, q_budget)
}

/// [`np_tradeoff_exact`] over an already-computed atom distribution,
/// for evaluating many budgets without re-enumerating.
pub fn np_tradeoff_from_atoms(
    atoms: &LlrAtomDistribution,
    q_budget: f64,
) -> Result<(f64, ThresholdEvent)> {
    if !(0.0..=1.0).contains(&q_budget) {
        return Err(Error::InvalidInput(format!(
            "q_budget must lie in [0, 1], got {q_budget}"
        )));
    }
    let all_included = ThresholdEvent {
        lambda_cut: f64::NEG_INFINITY,
        boundary_fraction: 1.0,
        includes_singular: true,
    };
    let mut total_q = Accumulator::new();
    for a in &atoms.atoms {
        total_q.add(a.p_q);
    }
    if q_budget >= total_q.total() {
        return Ok((0.0, all_included));
    }

    let mut remaining = q_budget;
    let mut excluded_w = Accumulator::new();
    let mut event = all_included;
    let mut boundary_found = false;
    for a in atoms.atoms.iter().rev() {
        if boundary_found {
            excluded_w.add(a.p_w);
        } else if remaining >= a.p_q {
            remaining -= a.p_q;
        } else {
            boundary_found = true;
            let fraction = remaining / a.p_q;
            event.lambda_cut = a.lambda;
            event.boundary_fraction = fraction;
            excluded_w.add((1.0 - fraction) * a.p_w);
        }
    }
    Ok((excluded_w.total(), event))
}

/// A deterministic block code with a list-size-`L` decoder, tied to the
/// constant composition all its codewords share.
#[derive(Debug, Clone)]
pub struct CodeSpec {
    codewords: Vec<Vec<usize>>,
    list_size: usize,
    composition: Composition,
}

impl CodeSpec {
    /// Validates that every codeword has the declared composition.
    pub fn new(
        codewords: Vec<Vec<usize>>,
        list_size: usize,
        composition: Composition,
    ) -> Result<Self> {
        if codewords.is_empty() {
            return Err(Error::InvalidInput(
                "a code needs at least one codeword".to_string(),
            ));
        }
        if list_size == 0 {
            return Err(Error::InvalidInput("list size must be positive".to_string()));
        }
        let n = composition.n();
        let num_symbols = composition.counts().len();
        let mut counts = alloc::vec![0usize; num_symbols];
        for (m, cw) in codewords.iter().enumerate() {
            if cw.len() != n {
                return Err(Error::InvalidInput(format!(
                    "codeword {m} has length {}, composition has blocklength {n}",
                    cw.len()
                )));
            }
            counts.fill(0);
            for &x in cw {
                if x >= num_symbols {
                    return Err(Error::InvalidInput(format!(
                        "codeword {m} uses symbol {x} outside the input alphabet"
                    )));
                }
                counts[x] += 1;
            }
            if counts != composition.counts() {
                return Err(Error::InvalidInput(format!(
                    "codeword {m} does not have the declared composition"
                )));
            }
        }
        Ok(Self {
            codewords,
            list_size,
            composition,
        })
    }

    /// The codewords as rows of input-symbol indices.
    pub fn codewords(&self) -> &[Vec<usize>] {
        &self.codewords
    }

    /// Number of messages `M`.
    pub fn num_messages(&self) -> usize {
        self.codewords.len()
    }

    /// Decoder list size `L`.
    pub fn list_size(&self) -> usize {
        self.list_size
    }

    /// The composition shared by all codewords.
    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    /// Blocklength `n`.
    pub fn blocklength(&self) -> usize {
        self.composition.n()
    }
}

/// The exact average error probability of the optimal list decoder:
/// enumerate every output sequence, rank messages by likelihood (ties
/// broken by message index), and sum the probability that the true
/// message falls outside the top `L`.
///
/// # Errors
///
/// `InvalidInput` when the code's composition does not live on the
/// channel's input alphabet; `Capacity` when `|Y|^n` exceeds
/// [`DEFAULT_ATOM_CAP`].
pub fn exact_list_decoding_error(channel: &Channel, code: &CodeSpec) -> Result<f64> {
    exact_list_decoding_error_with_cap(channel, code, DEFAULT_ATOM_CAP)
}

/// [`exact_list_decoding_error`] with an explicit enumeration cap.
pub fn exact_list_decoding_error_with_cap(
    channel: &Channel,
    code: &CodeSpec,
    cap: u64,
) -> Result<f64> {
    if !channel
        .input_alphabet()
        .same_as(code.composition().base().alphabet())
    {
        return Err(Error::InvalidInput(
            "code composition does not live on the channel input alphabet".to_string(),
        ));
    }
    let m_count = code.num_messages();
    if code.list_size() >= m_count {
        return Ok(0.0);
    }
    let n = code.blocklength();
    let num_outputs = channel.num_outputs();
    let required = (num_outputs as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if required > cap as u128 {
        return Err(Error::Capacity { required, cap });
    }

    let ln_w: Vec<Vec<f64>> = channel
        .rows()
        .iter()
        .map(|row| row.probs().iter().map(|&p| numeric::ln(p)).collect())
        .collect();

    let mut y = alloc::vec![0usize; n];
    let mut ranked: Vec<(f64, usize)> = Vec::with_capacity(m_count);
    let mut missed = Accumulator::new();
    'outer: loop {
        ranked.clear();
        for (m, cw) in code.codewords().iter().enumerate() {
            let mut loglik = 0.0;
            for t in 0..n {
                loglik += ln_w[cw[t]][y[t]];
            }
            ranked.push((loglik, m));
        }
        ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(loglik, _) in &ranked[code.list_size()..] {
            if loglik > f64::NEG_INFINITY {
                missed.add(numeric::exp(loglik));
            }
        }

        let mut t = n;
        loop {
            if t == 0 {
                break 'outer;
            }
            t -= 1;
            y[t] += 1;
            if y[t] < num_outputs {
                continue 'outer;
            }
            y[t] = 0;
        }
    }
    Ok(missed.total() / m_count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{Alphabet, Distribution};
    use alloc::vec;
    use proptest::prelude::*;

    fn iid(w: &[f64], q: &[f64], n: usize) -> HtInstance {
        let alphabet = Alphabet::numbered(w.len()).unwrap();
        let w = Distribution::new(alphabet.clone(), w.to_vec()).unwrap();
        let q = Distribution::new(alphabet, q.to_vec()).unwrap();
        HtInstance::iid(&w, &q, n).unwrap()
    }

    #[test]
    fn equal_measures_collapse_to_one_atom() {
        let inst = iid(&[0.5, 0.5], &[0.5, 0.5], 1);
        let atoms = llr_atoms(2.0, &inst).unwrap();
        assert_eq!(atoms.atoms.len(), 1);
        let a = atoms.atoms[0];
        assert_eq!(a.lambda, 0.0);
        assert_eq!(a.p_q, 1.0);
        assert_eq!(a.p_w, 1.0);
        assert!((a.p_tilted - 1.0).abs() < 1e-15);
        assert_eq!(atoms.singular_mass_w, 0.0);
    }

    #[test]
    fn binomial_product_has_three_atoms_with_exact_masses() {
        let inst = iid(&[0.75, 0.25], &[0.5, 0.5], 2);
        let atoms = llr_atoms(2.0, &inst).unwrap();
        assert_eq!(atoms.atoms.len(), 3);
        // Ascending λ: (0.25)², cross term, (0.75)².
        let expect = [
            (2.0 * numeric::ln(0.5), 0.0625, 0.25),
            (numeric::ln(1.5) + numeric::ln(0.5), 0.375, 0.5),
            (2.0 * numeric::ln(1.5), 0.5625, 0.25),
        ];
        for (a, (lambda, p_w, p_q)) in atoms.atoms.iter().zip(expect) {
            assert!((a.lambda - lambda).abs() < 1e-15, "{}", a.lambda);
            assert!((a.p_w - p_w).abs() < 1e-15, "{}", a.p_w);
            assert!((a.p_q - p_q).abs() < 1e-15, "{}", a.p_q);
        }
        let tilted_total: f64 = atoms.atoms.iter().map(|a| a.p_tilted).sum();
        assert!((tilted_total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn np_tradeoff_reference_points() {
        let inst = iid(&[0.75, 0.25], &[0.5, 0.5], 2);
        let (v, e) = np_tradeoff_exact(&inst, 1.0).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(e.boundary_fraction, 1.0);
        let (v, e) = np_tradeoff_exact(&inst, 0.0).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(e.boundary_fraction, 0.0);
        assert!((e.lambda_cut - 2.0 * numeric::ln(1.5)).abs() < 1e-15);
        let (v, e) = np_tradeoff_exact(&inst, 0.25).unwrap();
        assert!((v - 0.4375).abs() < 1e-15, "{v}");
        assert_eq!(e.boundary_fraction, 0.0);
        let (v, e) = np_tradeoff_exact(&inst, 0.3).unwrap();
        assert!((v - 0.4).abs() < 1e-15, "{v}");
        assert!((e.boundary_fraction - 0.1).abs() < 1e-15);
        assert!((e.lambda_cut - (numeric::ln(1.5) + numeric::ln(0.5))).abs() < 1e-15);
    }

    #[test]
    fn np_curve_is_nonincreasing_and_convex() {
        let inst = iid(&[0.8, 0.15, 0.05], &[0.3, 0.3, 0.4], 3);
        let atoms = llr_atoms(2.0, &inst).unwrap();
        let values: Vec<f64> = (0..=40)
            .map(|i| {
                np_tradeoff_from_atoms(&atoms, i as f64 / 40.0)
                    .unwrap()
                    .0
            })
            .collect();
        for pair in values.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-15);
        }
        for triple in values.windows(3) {
            assert!(triple[2] - 2.0 * triple[1] + triple[0] >= -1e-12);
        }
    }

    #[test]
    fn long_binomial_block_stays_normalized() {
        const TILTED_MEAN: f64 = 0.560_991_243_227_287_064;
        let inst = iid(&[0.9, 0.1], &[0.5, 0.5], 1000);
        let atoms = llr_atoms(2.0, &inst).unwrap();
        assert_eq!(atoms.atoms.len(), 1001);
        let total_q: f64 = atoms.atoms.iter().map(|a| a.p_q).sum();
        let total_w: f64 = atoms.atoms.iter().map(|a| a.p_w).sum();
        let total_t: f64 = atoms.atoms.iter().map(|a| a.p_tilted).sum();
        assert!((total_q - 1.0).abs() < 1e-12);
        assert!((total_w - 1.0).abs() < 1e-12);
        assert!((total_t - 1.0).abs() < 1e-12);
        let mean: f64 = atoms.atoms.iter().map(|a| a.p_tilted * a.lambda).sum();
        assert!(
            (mean - 1000.0 * TILTED_MEAN).abs() / (1000.0 * TILTED_MEAN) < 1e-9,
            "{mean}"
        );
    }

    #[test]
    fn singular_w_mass_is_exact() {
        // w puts mass where q has none: that mass never appears as an atom.
        let inst = iid(&[0.5, 0.3, 0.2], &[0.6, 0.4, 0.0], 3);
        let atoms = llr_atoms(2.0, &inst).unwrap();
        let expected = 1.0 - 0.8f64.powi(3);
        assert!((atoms.singular_mass_w - expected).abs() < 1e-15);
        assert!(atoms.atoms.iter().all(|a| a.lambda.is_finite()));
        let total_w: f64 = atoms.atoms.iter().map(|a| a.p_w).sum();
        assert!((total_w + atoms.singular_mass_w - 1.0).abs() < 1e-12);
    }

    #[test]
    fn w_null_q_mass_lands_in_the_bottom_atom() {
        // q puts mass where w has none: a single -∞ atom collects every
        // sequence touching that region.
        let inst = iid(&[0.5, 0.5, 0.0], &[0.25, 0.25, 0.5], 4);
        let atoms = llr_atoms(2.0, &inst).unwrap();
        assert_eq!(atoms.atoms.len(), 2);
        let bottom = atoms.atoms[0];
        assert_eq!(bottom.lambda, f64::NEG_INFINITY);
        assert!((bottom.p_q - (1.0 - 0.0625)).abs() < 1e-15);
        assert_eq!(bottom.p_w, 0.0);
        assert_eq!(bottom.p_tilted, 0.0);
        let top = atoms.atoms[1];
        assert!((top.lambda - 4.0 * numeric::ln(2.0)).abs() < 1e-15);
        assert!((top.p_q - 0.0625).abs() < 1e-16);
        assert!((top.p_w - 1.0).abs() < 1e-15);
        // NP: excluding 52% of the top atom leaves exactly that W-mass.
        let (v, e) = np_tradeoff_exact(&inst, 0.03).unwrap();
        assert!((v - 0.52).abs() < 1e-15, "{v}");
        assert!((e.boundary_fraction - 0.48).abs() < 1e-15);
    }

    #[test]
    fn mutually_singular_letters_are_rejected() {
        let inst = iid(&[1.0, 0.0], &[0.0, 1.0], 2);
        assert!(matches!(
            llr_atoms(2.0, &inst),
            Err(Error::MutuallySingular { letter: 0 })
        ));
        assert!(matches!(
            np_tradeoff_exact(&inst, 0.5),
            Err(Error::MutuallySingular { letter: 0 })
        ));
    }

    #[test]
    fn atom_enumeration_respects_the_cap() {
        let inst = iid(&[0.9, 0.1], &[0.5, 0.5], 10_000_000);
        match llr_atoms(2.0, &inst) {
            Err(Error::Capacity { required, cap }) => {
                assert_eq!(required, 10_000_001);
                assert_eq!(cap, DEFAULT_ATOM_CAP);
            }
            other => panic!("expected Capacity, got {other:?}"),
        }
    }

    #[test]
    fn invalid_budgets_are_rejected() {
        let inst = iid(&[0.75, 0.25], &[0.5, 0.5], 1);
        for budget in [-0.1, 1.1, f64::NAN, f64::INFINITY] {
            assert!(np_tradeoff_exact(&inst, budget).is_err(), "{budget}");
        }
    }

    fn bsc_code(codewords: &[&[usize]], list_size: usize) -> (Channel, CodeSpec) {
        let channel = Channel::binary_symmetric(0.1).unwrap();
        let n = codewords[0].len();
        let p = Distribution::uniform(channel.input_alphabet().clone());
        let composition = Composition::new(&p, n).unwrap();
        let code = CodeSpec::new(
            codewords.iter().map(|c| c.to_vec()).collect(),
            list_size,
            composition,
        )
        .unwrap();
        (channel, code)
    }

    #[test]
    fn list_covering_all_messages_never_errs() {
        let (channel, code) = bsc_code(&[&[0, 1], &[1, 0]], 2);
        assert_eq!(exact_list_decoding_error(&channel, &code).unwrap(), 0.0);
    }

    #[test]
    fn noiseless_distinct_codewords_decode_perfectly() {
        let input = Alphabet::numbered(2).unwrap();
        let output = Alphabet::numbered(2).unwrap();
        let channel = Channel::from_matrix(
            input.clone(),
            output,
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        let p = Distribution::uniform(input);
        let composition = Composition::new(&p, 2).unwrap();
        let code =
            CodeSpec::new(vec![vec![0, 1], vec![1, 0]], 1, composition).unwrap();
        assert_eq!(exact_list_decoding_error(&channel, &code).unwrap(), 0.0);
    }

    #[test]
    fn antipodal_pair_on_a_bsc_matches_the_hand_computation() {
        let (channel, code) = bsc_code(&[&[0, 1], &[1, 0]], 1);
        let pe = exact_list_decoding_error(&channel, &code).unwrap();
        // Ties at 00 and 11 go to message 0; message 1 also loses 01.
        assert!((pe - 0.1).abs() < 1e-15, "{pe}");
    }

    #[test]
    fn identical_rows_make_the_decoder_blind() {
        let input = Alphabet::numbered(2).unwrap();
        let output = Alphabet::numbered(2).unwrap();
        let channel = Channel::from_matrix(
            input.clone(),
            output,
            &[vec![0.4, 0.6], vec![0.4, 0.6]],
        )
        .unwrap();
        let p = Distribution::uniform(input);
        let composition = Composition::new(&p, 4).unwrap();
        let code = CodeSpec::new(
            vec![
                vec![0, 0, 1, 1],
                vec![0, 1, 0, 1],
                vec![0, 1, 1, 0],
                vec![1, 0, 0, 1],
            ],
            1,
            composition,
        )
        .unwrap();
        let pe = exact_list_decoding_error(&channel, &code).unwrap();
        assert!((pe - 0.75).abs() < 1e-12, "{pe}");
    }

    #[test]
    fn output_enumeration_respects_the_cap() {
        let codewords: [&[usize]; 2] = [
            &[0, 0, 0, 0, 0, 1, 1, 1, 1, 1],
            &[1, 1, 1, 1, 1, 0, 0, 0, 0, 0],
        ];
        let (channel, code) = bsc_code(&codewords, 1);
        match exact_list_decoding_error_with_cap(&channel, &code, 1000) {
            Err(Error::Capacity { required, cap }) => {
                assert_eq!(required, 1024);
                assert_eq!(cap, 1000);
            }
            other => panic!("expected Capacity, got {other:?}"),
        }
    }

    #[test]
    fn code_validation_rejects_malformed_inputs() {
        let alphabet = Alphabet::numbered(2).unwrap();
        let p = Distribution::uniform(alphabet);
        let composition = Composition::new(&p, 2).unwrap();
        assert!(CodeSpec::new(vec![], 1, composition.clone()).is_err());
        assert!(CodeSpec::new(vec![vec![0, 1]], 0, composition.clone()).is_err());
        assert!(CodeSpec::new(vec![vec![0, 1, 0]], 1, composition.clone()).is_err());
        assert!(CodeSpec::new(vec![vec![0, 2]], 1, composition.clone()).is_err());
        // Wrong composition: two zeros instead of one of each.
        assert!(CodeSpec::new(vec![vec![0, 0]], 1, composition).is_err());
    }

    /// Brute-force reference: enumerate all 2^n outcomes of a
    /// heterogeneous binary product directly and group by the bitwise
    /// log-likelihood ratio.
    fn direct_binary_atoms(pairs: &[(f64, f64)]) -> Vec<(f64, f64, f64)> {
        let n = pairs.len();
        let mut outcomes: Vec<(f64, f64, f64)> = Vec::with_capacity(1 << n);
        for mask in 0u32..(1u32 << n) {
            let mut lambda = 0.0;
            let mut p_w = 1.0;
            let mut p_q = 1.0;
            for (t, &(a, b)) in pairs.iter().enumerate() {
                let bit = (mask >> t) & 1;
                let (w, q) = if bit == 0 { (a, b) } else { (1.0 - a, 1.0 - b) };
                lambda += numeric::ln(w) - numeric::ln(q);
                p_w *= w;
                p_q *= q;
            }
            outcomes.push((lambda, p_w, p_q));
        }
        outcomes.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut grouped: Vec<(f64, f64, f64)> = Vec::new();
        for (lambda, p_w, p_q) in outcomes {
            match grouped.last_mut() {
                Some(last) if last.0.total_cmp(&lambda).is_eq() => {
                    last.1 += p_w;
                    last.2 += p_q;
                }
                _ => grouped.push((lambda, p_w, p_q)),
            }
        }
        grouped
    }

    proptest! {
        #[test]
        fn atoms_match_direct_enumeration(
            pairs in prop::collection::vec(
                (0.05f64..0.95, 0.05f64..0.95),
                1..=10,
            )
        ) {
            let alphabet = Alphabet::numbered(2).unwrap();
            let letters: Vec<_> = pairs
                .iter()
                .map(|&(a, b)| crate::bounds::HtLetter {
                    w: Distribution::new(alphabet.clone(), vec![a, 1.0 - a]).unwrap(),
                    q: Distribution::new(alphabet.clone(), vec![b, 1.0 - b]).unwrap(),
                    count: 1,
                })
                .collect();
            let inst = HtInstance::new(letters).unwrap();
            let atoms = llr_atoms(2.0, &inst).unwrap();
            let direct = direct_binary_atoms(&pairs);
            prop_assert_eq!(atoms.atoms.len(), direct.len());
            for (a, (lambda, p_w, p_q)) in atoms.atoms.iter().zip(direct) {
                // The pipeline sums per-letter λ in the same order as the
                // direct walk, so the grouping keys agree bitwise.
                prop_assert_eq!(a.lambda, lambda);
                prop_assert!((a.p_w - p_w).abs() < 1e-12);
                prop_assert!((a.p_q - p_q).abs() < 1e-12);
            }
            let tilted: f64 = atoms.atoms.iter().map(|a| a.p_tilted).sum();
            prop_assert!((tilted - 1.0).abs() < 1e-12);
        }
    }
}
