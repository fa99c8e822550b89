//! Eve's information on `bits` key bits from her guess distribution.
//! `0·log 0` is taken as 0.

/// `bits + Σ p log₂ p`.
pub fn shannon_information(bits: f64, probs: &[f64]) -> f64 {
    bits + probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.log2()).sum::<f64>()
}

/// `bits + log₂ Σ p²`.
pub fn renyi_information(bits: f64, probs: &[f64]) -> f64 {
    bits + probs.iter().map(|p| p * p).sum::<f64>().log2()
}
