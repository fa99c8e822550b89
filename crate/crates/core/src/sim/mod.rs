//! Monte Carlo simulation of the six-state protocol under attack.
//!
//! Each trial is one group of qubits sharing a probe: one qubit for the
//! incoherent attack (two independent qubits when xor pairing is on), two or
//! three for the coherent attacks. Alice picks bases and bits uniformly, Bob
//! picks bases uniformly, and a qubit is sifted when the two bases agree.
//!
//! Random numbers: trials are split into batches of [`BATCH`] consecutive
//! trials; batch `k` draws from `ChaCha8Rng::seed_from_u64(seed)` with stream
//! `k`. Within a trial the draws are, in order: Alice's bases, Alice's bits,
//! Bob's bases (one `random_range` each) and one `f64` for the joint outcome.

mod channel;

pub use channel::{pair_isometry, Channel, EveOutcome};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coherent2::Coherent2Params;
use crate::coherent3::Coherent3Params;
use crate::error::{Error, Result};
use crate::incoherent::{IncoherentAttack, PROBE_DIM};
use crate::postproc;
use crate::qubit::bit_of;

pub const BATCH: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    Incoherent {
        a: f64,
    },
    Coherent2 {
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    Coherent3 {
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
    },
}

impl Strategy {
    pub fn incoherent(a: &IncoherentAttack) -> Self {
        Strategy::Incoherent { a: a.angle() }
    }

    pub fn coherent2(p: &Coherent2Params) -> Self {
        Strategy::Coherent2 {
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
        }
    }

    pub fn coherent3(p: &Coherent3Params) -> Self {
        Strategy::Coherent3 {
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
            delta: p.delta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    None,
    WithinProbeXor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub strategy: Strategy,
    /// Number of qubit groups sent.
    pub trials: u64,
    pub seed: u64,
    pub pairing: Pairing,
}

/// An empirical fraction with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub successes: u64,
    pub n: u64,
    pub value: f64,
    pub std_err: f64,
}

impl Estimate {
    pub fn new(successes: u64, n: u64) -> Self {
        let value = if n == 0 { f64::NAN } else { successes as f64 / n as f64 };
        let std_err = if n == 0 {
            f64::NAN
        } else {
            (value * (1.0 - value) / n as f64).sqrt()
        };
        Self {
            successes,
            n,
            value,
            std_err,
        }
    }

    /// `|value − expected|` in units of the standard error computed at `expected`.
    pub fn sigmas_from(&self, expected: f64) -> f64 {
        let se = (expected * (1.0 - expected) / self.n as f64).sqrt();
        let diff = (self.value - expected).abs();
        if se == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / se
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimStats {
    pub trials: u64,
    pub qubits_sent: u64,
    /// Sifted qubits over qubits sent.
    pub sift_rate: Estimate,
    /// Errors over sifted qubits.
    pub qber: Estimate,
    /// Eve's correct guesses over sifted qubits.
    pub eve_bit_accuracy: Estimate,
    /// Eve's correct guesses over sifted qubits Bob received undisturbed.
    pub eve_undisturbed_accuracy: Estimate,
    /// Eve's correct guesses over sifted qubits Bob received disturbed.
    pub eve_disturbed_accuracy: Estimate,
    /// Eve's correct xor guesses over pairs with both qubits sifted and undisturbed.
    pub eve_xor_accuracy: Option<Estimate>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Counts {
    sent: u64,
    sifted: u64,
    errors: u64,
    eve_correct: u64,
    undisturbed: u64,
    eve_undisturbed_correct: u64,
    eve_disturbed_correct: u64,
    pairs: u64,
    xor_correct: u64,
}

impl Counts {
    fn merge(mut self, o: Counts) -> Counts {
        self.sent += o.sent;
        self.sifted += o.sifted;
        self.errors += o.errors;
        self.eve_correct += o.eve_correct;
        self.undisturbed += o.undisturbed;
        self.eve_undisturbed_correct += o.eve_undisturbed_correct;
        self.eve_disturbed_correct += o.eve_disturbed_correct;
        self.pairs += o.pairs;
        self.xor_correct += o.xor_correct;
        self
    }
}

/// Builds the channel for a strategy. The incoherent attack with xor pairing
/// uses two independent copies.
pub fn build_channel(strategy: &Strategy, pairing: Pairing) -> Result<Channel> {
    match *strategy {
        Strategy::Incoherent { a } => {
            let v = IncoherentAttack::new(a)?.isometry();
            match pairing {
                Pairing::None => Channel::new(&v, PROBE_DIM, 1),
                Pairing::WithinProbeXor => Channel::new(&pair_isometry(&v, PROBE_DIM), PROBE_DIM * PROBE_DIM, 2),
            }
        }
        Strategy::Coherent2 { alpha, beta, gamma } => {
            let r = Coherent2Params::new(alpha, beta, gamma)?.build_probe_states()?;
            Channel::new(&r.isometry, r.probe_dim, 2)
        }
        Strategy::Coherent3 {
            alpha,
            beta,
            gamma,
            delta,
        } => {
            let r = Coherent3Params::new(alpha, beta, gamma, delta)?.build_probe_states()?;
            Channel::new(&r.isometry, r.probe_dim, 3)
        }
    }
}

fn run_batch(channel: &Channel, seed: u64, batch: u64, count: u64, pairing: Pairing) -> Counts {
    let n = channel.qubits();
    let dim = 1usize << n;
    let tuples = 3usize.pow(n as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    let mut c = Counts::default();
    for _ in 0..count {
        let ab = rng.random_range(0..tuples);
        let bits = rng.random_range(0..dim);
        let bb = rng.random_range(0..tuples);
        let u: f64 = rng.random();
        let (bob, eve) = channel.sample(ab, bits, bb, u);
        c.sent += n as u64;
        let mut pair_ok = true;
        for q in 0..n {
            let place = 3usize.pow((n - 1 - q) as u32);
            let sifted = ab / place % 3 == bb / place % 3;
            let alice = bit_of(bits, q, n);
            let eve_bit = bit_of(eve.guess, q, n);
            let bob_bit = bit_of(bob, q, n);
            if q < 2 && !(sifted && bob_bit == alice) {
                pair_ok = false;
            }
            if !sifted {
                continue;
            }
            c.sifted += 1;
            let hit = (eve_bit == alice) as u64;
            c.eve_correct += hit;
            if bob_bit == alice {
                c.undisturbed += 1;
                c.eve_undisturbed_correct += hit;
            } else {
                c.errors += 1;
                c.eve_disturbed_correct += hit;
            }
        }
        if pairing == Pairing::WithinProbeXor && n >= 2 && pair_ok {
            c.pairs += 1;
            let alice_xor = bit_of(bits, 0, n) ^ bit_of(bits, 1, n);
            let eve_xor = bit_of(eve.guess, 0, n) ^ bit_of(eve.guess, 1, n);
            c.xor_correct += (alice_xor == eve_xor) as u64;
        }
    }
    c
}

/// Runs the protocol. Results depend only on the configuration, not on the
/// number of worker threads.
pub fn run_protocol(config: &SimConfig) -> Result<SimStats> {
    if config.trials == 0 {
        return Err(Error::Contract("trials must be at least 1".into()));
    }
    let channel = build_channel(&config.strategy, config.pairing)?;
    let batches = config.trials.div_ceil(BATCH);
    let counts = (0..batches)
        .into_par_iter()
        .map(|k| {
            let count = BATCH.min(config.trials - k * BATCH);
            run_batch(&channel, config.seed, k, count, config.pairing)
        })
        .reduce(Counts::default, Counts::merge);
    Ok(SimStats {
        trials: config.trials,
        qubits_sent: counts.sent,
        sift_rate: Estimate::new(counts.sifted, counts.sent),
        qber: Estimate::new(counts.errors, counts.sifted),
        eve_bit_accuracy: Estimate::new(counts.eve_correct, counts.sifted),
        eve_undisturbed_accuracy: Estimate::new(counts.eve_undisturbed_correct, counts.undisturbed),
        eve_disturbed_accuracy: Estimate::new(counts.eve_disturbed_correct, counts.errors),
        eve_xor_accuracy: (config.pairing == Pairing::WithinProbeXor)
            .then(|| Estimate::new(counts.xor_correct, counts.pairs)),
    })
}

/// [`run_protocol`] with xor pairing forced on.
pub fn run_xor_protocol(config: &SimConfig) -> Result<SimStats> {
    run_protocol(&SimConfig {
        pairing: Pairing::WithinProbeXor,
        ..*config
    })
}

/// Analytic values the simulation estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expected {
    pub sift_rate: f64,
    pub qber: f64,
    pub eve_bit_accuracy: f64,
    pub eve_undisturbed_accuracy: f64,
    pub eve_disturbed_accuracy: f64,
    pub eve_xor_accuracy: f64,
}

pub fn expected(strategy: &Strategy) -> Result<Expected> {
    Ok(match *strategy {
        Strategy::Incoherent { a } => {
            let m = IncoherentAttack::new(a)?.metrics();
            Expected {
                sift_rate: 1.0 / 3.0,
                qber: m.disturbance,
                eve_bit_accuracy: m.pg,
                eve_undisturbed_accuracy: m.ps,
                eve_disturbed_accuracy: 1.0,
                eve_xor_accuracy: postproc::p_xor1(m.disturbance.min(0.5))?,
            }
        }
        Strategy::Coherent2 { alpha, beta, gamma } => {
            let p = Coherent2Params::new(alpha, beta, gamma)?;
            let pr = p.probs();
            Expected {
                sift_rate: 1.0 / 3.0,
                qber: p.disturbance(),
                eve_bit_accuracy: p.per_bit_accuracy(),
                eve_undisturbed_accuracy: p.metrics().pcg_undist,
                eve_disturbed_accuracy: 1.0,
                eve_xor_accuracy: pr.p02 + pr.p00,
            }
        }
        Strategy::Coherent3 {
            alpha,
            beta,
            gamma,
            delta,
        } => {
            let p = Coherent3Params::new(alpha, beta, gamma, delta)?;
            Expected {
                sift_rate: 1.0 / 3.0,
                qber: p.disturbance(),
                eve_bit_accuracy: p.per_bit_accuracy(),
                eve_undisturbed_accuracy: p.metrics().undisturbed_accuracy,
                eve_disturbed_accuracy: 1.0,
                eve_xor_accuracy: p.p_xor(),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(strategy: Strategy, trials: u64, pairing: Pairing) -> SimConfig {
        SimConfig {
            strategy,
            trials,
            seed: 11,
            pairing,
        }
    }

    #[test]
    fn no_attack_has_no_errors() {
        let s = run_protocol(&cfg(Strategy::Incoherent { a: 0.0 }, 100_000, Pairing::None)).unwrap();
        assert_eq!(s.qber.successes, 0);
        assert!(s.eve_bit_accuracy.sigmas_from(0.5) < 4.0);
        assert!(s.sift_rate.sigmas_from(1.0 / 3.0) < 4.0);
    }

    #[test]
    fn deterministic_per_seed() {
        let c = cfg(Strategy::Incoherent { a: 0.9 }, 20_000, Pairing::None);
        assert_eq!(run_protocol(&c).unwrap(), run_protocol(&c).unwrap());
        let other = SimConfig { seed: 12, ..c };
        assert_ne!(run_protocol(&c).unwrap(), run_protocol(&other).unwrap());
    }

    #[test]
    fn disturbed_bits_are_always_guessed() {
        let p = Coherent2Params::from_disturbance(0.2, 0.7).unwrap();
        let s = run_protocol(&cfg(Strategy::coherent2(&p), 30_000, Pairing::None)).unwrap();
        assert!(s.eve_disturbed_accuracy.n > 0);
        assert_eq!(s.eve_disturbed_accuracy.successes, s.eve_disturbed_accuracy.n);
    }

    #[test]
    fn rejects_zero_trials() {
        assert!(run_protocol(&cfg(Strategy::Incoherent { a: 0.5 }, 0, Pairing::None)).is_err());
    }
}
