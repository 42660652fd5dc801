//! Randomized polynomial identity testing by evaluation at random points.

use std::collections::HashMap;

use rand::Rng;

use crate::circuit::{Circuit, CircuitError, VarId};
use crate::field::{FieldElement, Prime};

/// Smallest prime above `max(10^6, 100 * degree_bound)`.
pub fn default_prime(degree_bound: u64) -> Prime {
    let floor = degree_bound.saturating_mul(100).max(1_000_000);
    Prime::next_above(floor).expect("degree bound below 2^61 / 100")
}

/// Outcome of testing whether a circuit computes the zero polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct PitOutcome {
    /// No trial found a nonzero value.
    pub zero: bool,
    pub trials: usize,
    pub degree_bound: u64,
    pub prime: Prime,
    /// A point where the circuit is nonzero, when one was found.
    pub witness: Option<Vec<(VarId, FieldElement)>>,
    /// Probability bound `(d/p)^trials` that a nonzero polynomial passes.
    pub soundness: f64,
}

/// Samples one value per variable, in variable order.
pub fn random_point<R: Rng + ?Sized>(vars: &[VarId], p: Prime, rng: &mut R) -> HashMap<VarId, FieldElement> {
    vars.iter().map(|&v| (v, p.sample(rng))).collect()
}

pub fn soundness_bound(degree: u64, p: Prime, trials: usize) -> f64 {
    (degree as f64 / p.get() as f64).powi(trials as i32).min(1.0)
}

/// Tests every output of a division-free circuit for identical vanishing.
pub fn pit_is_zero<R: Rng + ?Sized>(
    c: &Circuit,
    p: Prime,
    trials: usize,
    rng: &mut R,
) -> Result<PitOutcome, CircuitError> {
    let degree_bound = c.degree_bound()?;
    let vars = c.variables();
    let mut witness = None;
    let mut done = 0;
    for _ in 0..trials {
        done += 1;
        let pt = random_point(&vars, p, rng);
        let vals = c.evaluate_map(p, &pt)?;
        if vals.iter().any(|v| !v.is_zero()) {
            let mut w: Vec<_> = pt.into_iter().collect();
            w.sort_by_key(|(v, _)| *v);
            witness = Some(w);
            break;
        }
    }
    Ok(PitOutcome {
        zero: witness.is_none(),
        trials: done,
        degree_bound,
        prime: p,
        soundness: if witness.is_none() { soundness_bound(degree_bound, p, trials) } else { 0.0 },
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn detects_nonzero_and_accepts_zero() {
        let p = Prime::new(10007).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // (x+y)^2 - x^2 - 2xy - y^2 == 0
        let zero = Circuit::build(|c| {
            let x = c.x(1);
            let y = c.x(2);
            let s = c.add(x, y);
            let sq = c.mul(vec![s, s]);
            let xx = c.mul(vec![x, x]);
            let xy = c.mul(vec![x, y]);
            let yy = c.mul(vec![y, y]);
            c.lin(vec![(1, sq), (-1, xx), (-2, xy), (-1, yy)])
        });
        let r = pit_is_zero(&zero, p, 20, &mut rng).unwrap();
        assert!(r.zero && r.trials == 20 && r.soundness < 1e-40);
        let nonzero = Circuit::build(|c| {
            let x = c.x(1);
            let y = c.x(2);
            c.mul(vec![x, y])
        });
        let r = pit_is_zero(&nonzero, p, 20, &mut rng).unwrap();
        assert!(!r.zero);
        let w: HashMap<_, _> = r.witness.unwrap().into_iter().collect();
        assert!(!nonzero.evaluate_map(p, &w).unwrap()[0].is_zero());
    }

    #[test]
    fn default_prime_respects_floor() {
        assert_eq!(default_prime(3).get(), 1_000_003);
        assert!(default_prime(20_000).get() > 2_000_000);
    }
}
