//! Toric-code Z-error channel with Bayes-optimal homology-class decoding.
//!
//! Z errors live on edges of the torus; their syndrome is the set of
//! star operators with negative outcome. The posterior weight of homology
//! class k given the syndrome is the ±J partition function with negative
//! bonds on a class-k reference correction, so optimal decoding compares
//! the four exact log partition functions. Exact enumeration caps the
//! linear size at 4. X errors are the same machinery on the dual lattice
//! and are not duplicated here.

use rand::Rng;
use rand_pcg::Pcg64;
use rayon::prelude::*;

use crate::lattice::{ChainZ2, HomologyClass, TorusLattice};
use crate::rng::task_rng;
use crate::spinglass::log_partition;
use crate::{nishimori_coupling, Error, Result};

/// Independent Z-error channel with the decoder's coupling.
#[derive(Debug, Clone, Copy)]
pub struct ErrorChannel {
    pub p: f64,
    pub k_decode: f64,
}

impl ErrorChannel {
    /// Matched (optimal) decoding: exp(-2 K) = p/(1-p). At p = 0 the
    /// coupling is saturated to a large finite value; every chain is empty
    /// there, so any positive coupling decodes perfectly.
    pub fn matched(p: f64) -> Result<ErrorChannel> {
        if !(0.0..0.5).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "error rate p = {p} outside [0, 1/2)"
            )));
        }
        let k_decode = if p == 0.0 {
            20.0
        } else {
            nishimori_coupling(p)?
        };
        Ok(ErrorChannel { p, k_decode })
    }

    /// Mismatched decoding at an explicit coupling.
    pub fn with_coupling(p: f64, k_decode: f64) -> Result<ErrorChannel> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "error rate p = {p} outside [0, 1]"
            )));
        }
        if !(k_decode > 0.0) {
            return Err(Error::InvalidParameter(
                "decoder coupling must be positive".into(),
            ));
        }
        Ok(ErrorChannel { p, k_decode })
    }
}

/// Each edge independently carries a Z error with probability `p`.
pub fn sample_error_chain(lattice: &TorusLattice, p: f64, rng: &mut Pcg64) -> ChainZ2 {
    let mut chain = ChainZ2::empty(lattice.n_edges());
    for e in 0..lattice.n_edges() {
        if rng.gen_bool(p) {
            chain.toggle(e);
        }
    }
    chain
}

/// Deterministic correction chain with the given boundary: defects are
/// paired in site-index order and joined by a row-then-column walk, each
/// leg taking the shorter way around (ties go forward).
pub fn canonical_correction(syndrome: &[usize], lattice: &TorusLattice) -> Result<ChainZ2> {
    if !syndrome.len().is_multiple_of(2) {
        return Err(Error::InvalidParameter(
            "odd syndrome is impossible on a torus".into(),
        ));
    }
    let l = lattice.size();
    let n = lattice.n_sites();
    let mut defects = syndrome.to_vec();
    defects.sort_unstable();
    let mut chain = ChainZ2::empty(lattice.n_edges());
    for pair in defects.chunks(2) {
        let (a, b) = (pair[0], pair[1]);
        let (ra, ca) = (a / l, a % l);
        let (rb, cb) = (b / l, b % l);
        // horizontal leg along row ra from column ca to cb
        let fwd = (cb + l - ca) % l;
        let bwd = (ca + l - cb) % l;
        if fwd <= bwd {
            for i in 0..fwd {
                chain.toggle(ra * l + (ca + i) % l);
            }
        } else {
            for i in 0..bwd {
                chain.toggle(ra * l + (cb + i) % l);
            }
        }
        // vertical leg along column cb from row ra to rb
        let fwd = (rb + l - ra) % l;
        let bwd = (ra + l - rb) % l;
        if fwd <= bwd {
            for i in 0..fwd {
                chain.toggle(n + ((ra + i) % l) * l + cb);
            }
        } else {
            for i in 0..bwd {
                chain.toggle(n + ((rb + i) % l) * l + cb);
            }
        }
    }
    Ok(chain)
}

/// Bond signs of the class-posterior Ising model: the spins live on
/// plaquettes (chains homologous to the reference differ by boundaries of
/// plaquette sets), so τ = -1 on reference edges is carried to the dual
/// edge connecting the two adjacent plaquettes.
fn dual_tau_from_chain(lattice: &TorusLattice, chain: &ChainZ2) -> Vec<i8> {
    let mut tau = vec![1i8; lattice.n_edges()];
    for e in chain.iter_edges() {
        tau[lattice.dual_edge(e)] = -1;
    }
    tau
}

/// Log partition functions of the four class references E' Δ D_k,
/// D ∈ {∅, L_v, L_t, L_v Δ L_t}, with τ = -1 on reference edges and
/// Ising spins on the plaquettes.
pub fn class_log_partitions(
    lattice: &TorusLattice,
    reference: &ChainZ2,
    k: f64,
) -> Result<[f64; 4]> {
    let (lv, lt) = lattice.logical_representatives();
    let refs = [
        reference.clone(),
        reference.xor(&lv),
        reference.xor(&lt),
        reference.xor(&lv).xor(&lt),
    ];
    let mut out = [0.0; 4];
    for (slot, chain) in out.iter_mut().zip(&refs) {
        *slot = log_partition(lattice, &dual_tau_from_chain(lattice, chain), k)?;
    }
    Ok(out)
}

/// Outcome of one decoding attempt.
#[derive(Debug, Clone)]
pub struct DecodeOutcome {
    pub true_class_offset: HomologyClass,
    pub chosen_class: HomologyClass,
    pub success: bool,
    pub four_log_z: [f64; 4],
}

/// Decode against an explicit reference correction; its boundary must
/// match the error's syndrome.
pub fn decode_with_reference(
    error: &ChainZ2,
    reference: &ChainZ2,
    channel: &ErrorChannel,
    lattice: &TorusLattice,
) -> Result<DecodeOutcome> {
    if lattice.boundary(reference) != lattice.boundary(error) {
        return Err(Error::InvalidParameter(
            "reference does not repair the syndrome".into(),
        ));
    }
    let four_log_z = class_log_partitions(lattice, reference, channel.k_decode)?;
    // argmax with ties broken toward (0,0), (1,0), (0,1), (1,1)
    let mut best = 0usize;
    for k in 1..4 {
        if four_log_z[k] > four_log_z[best] {
            best = k;
        }
    }
    let chosen_class = HomologyClass::from_index(best);
    let true_class_offset = lattice.homology_class(&error.xor(reference))?;
    Ok(DecodeOutcome {
        true_class_offset,
        chosen_class,
        success: chosen_class == true_class_offset,
        four_log_z,
    })
}

/// Bayes-optimal decoding of an error chain: most probable homology class
/// given its syndrome, via the canonical reference correction.
pub fn decode(
    error: &ChainZ2,
    channel: &ErrorChannel,
    lattice: &TorusLattice,
) -> Result<DecodeOutcome> {
    let reference = canonical_correction(&lattice.boundary(error), lattice)?;
    decode_with_reference(error, &reference, channel, lattice)
}

/// One row of a failure-rate table.
#[derive(Debug, Clone, Copy)]
pub struct FailureRateRow {
    pub l: usize,
    pub p: f64,
    pub failures: u64,
    pub trials: u64,
    pub rate: f64,
    pub std_error: f64,
}

/// Monte Carlo logical-failure rates over a grid of sizes and error rates.
pub fn failure_rate_sweep(
    l_list: &[usize],
    p_list: &[f64],
    trials: u64,
    matched: bool,
    k_override: Option<f64>,
    seed: u64,
) -> Result<Vec<FailureRateRow>> {
    let mut rows = Vec::new();
    for (li, &l) in l_list.iter().enumerate() {
        let lattice = TorusLattice::new(l)?;
        if l > 4 {
            return Err(Error::SystemTooLarge {
                what: "lattice size",
                max: 4,
                got: l,
            });
        }
        for (pi, &p) in p_list.iter().enumerate() {
            let channel = match (matched, k_override) {
                (true, _) => ErrorChannel::matched(p)?,
                (false, Some(k)) => ErrorChannel::with_coupling(p, k)?,
                (false, None) => {
                    return Err(Error::InvalidParameter(
                        "unmatched sweep needs an explicit decoder coupling".into(),
                    ))
                }
            };
            let cell = crate::rng::derive_seed(seed, "code-cell", (li * p_list.len() + pi) as u64);
            let failures: u64 = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = task_rng(cell, "trial", t);
                    let error = sample_error_chain(&lattice, p, &mut rng);
                    u64::from(!decode(&error, &channel, &lattice).expect("decode").success)
                })
                .sum();
            let rate = failures as f64 / trials as f64;
            rows.push(FailureRateRow {
                l,
                p,
                failures,
                trials,
                rate,
                std_error: (rate * (1.0 - rate) / trials as f64).sqrt(),
            });
        }
    }
    Ok(rows)
}

/// Exact logical-failure probability on the 2×2 torus by summing the
/// decode outcome over all 2^8 error patterns with channel weights.
pub fn exhaustive_failure_rate_l2(channel: &ErrorChannel) -> Result<f64> {
    let lattice = TorusLattice::new(2)?;
    let nb = lattice.n_edges();
    let mut fail = 0.0;
    for mask in 0..1u32 << nb {
        let members: Vec<usize> = (0..nb).filter(|e| mask >> e & 1 == 1).collect();
        let chain = ChainZ2::from_edges(nb, &members);
        let w = channel.p.powi(members.len() as i32)
            * (1.0 - channel.p).powi((nb - members.len()) as i32);
        if w == 0.0 {
            continue;
        }
        if !decode(&chain, channel, &lattice)?.success {
            fail += w;
        }
    }
    Ok(fail)
}
