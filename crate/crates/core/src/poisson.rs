//! Poisson photon-number statistics, evaluated in log space so that factorials
//! never overflow.

use crate::error::{Error, Result};

/// Probabilities `P(mu, n)` for `n = 0, 1, ...` computed on the fly.
#[derive(Debug, Clone)]
pub struct PoissonPmf {
    ln_mu: f64,
    mu: f64,
    n: usize,
    ln_fact: f64,
}

impl PoissonPmf {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::OutOfRange {
                name: "mu",
                value: mu,
            });
        }
        Ok(Self {
            ln_mu: mu.ln(),
            mu,
            n: 0,
            ln_fact: 0.0,
        })
    }
}

impl Iterator for PoissonPmf {
    /// `(n, ln P(mu, n))`
    type Item = (usize, f64);

    fn next(&mut self) -> Option<(usize, f64)> {
        let n = self.n;
        if n > 0 {
            self.ln_fact += (n as f64).ln();
        }
        self.n += 1;
        Some((n, -self.mu + n as f64 * self.ln_mu - self.ln_fact))
    }
}

fn check_tail(tail_eps: f64) -> Result<()> {
    if !(tail_eps > 0.0 && tail_eps < 1.0) {
        return Err(Error::OutOfRange {
            name: "tail_eps",
            value: tail_eps,
        });
    }
    Ok(())
}

/// Smallest `n` whose cumulative Poisson mass reaches `1 - tail_eps`.
pub fn truncation_level(mu: f64, tail_eps: f64) -> Result<usize> {
    check_tail(tail_eps)?;
    let mut cumulative = 0.0;
    for (n, ln_p) in PoissonPmf::new(mu)? {
        cumulative += ln_p.exp();
        // Past the mode the remaining terms can be bounded by a geometric series;
        // this also stops the loop if round-off keeps `cumulative` just below target.
        if cumulative >= 1.0 - tail_eps
            || (n as f64 > mu
                && ln_p.exp() * (n as f64 + 1.0) / (n as f64 + 1.0 - mu) < tail_eps * 1e-3)
        {
            return Ok(n);
        }
    }
    unreachable!("Poisson iterator is infinite")
}

/// Number of Fock levels in the central interval that holds `1 - tail_eps` of the
/// Poisson mass (`tail_eps / 2` trimmed from each side).
pub fn spread(mu: f64, tail_eps: f64) -> Result<usize> {
    check_tail(tail_eps)?;
    let half = tail_eps / 2.0;
    let mut cumulative = 0.0;
    let mut low = None;
    for (n, ln_p) in PoissonPmf::new(mu)? {
        cumulative += ln_p.exp();
        if low.is_none() && cumulative > half {
            low = Some(n);
        }
        if cumulative >= 1.0 - half {
            return Ok(n - low.unwrap_or(0) + 1);
        }
    }
    unreachable!("Poisson iterator is infinite")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_matches_direct_formula() {
        let mu: f64 = 2.5;
        let mut fact = 1.0;
        for (n, ln_p) in PoissonPmf::new(mu).unwrap().take(20) {
            if n > 0 {
                fact *= n as f64;
            }
            let direct = (-mu).exp() * mu.powi(n as i32) / fact;
            assert!((ln_p.exp() - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn truncation_covers_requested_mass() {
        for &mu in &[0.05, 0.2, 1.0, 4.0, 30.0] {
            let level = truncation_level(mu, 1e-12).unwrap();
            let mass: f64 = PoissonPmf::new(mu)
                .unwrap()
                .take(level + 1)
                .map(|(_, l)| l.exp())
                .sum();
            assert!(mass >= 1.0 - 1e-12 - 1e-15, "mu={mu}");
            let short: f64 = PoissonPmf::new(mu)
                .unwrap()
                .take(level)
                .map(|(_, l)| l.exp())
                .sum();
            assert!(short < 1.0 - 1e-12, "mu={mu} level={level} not minimal");
        }
    }

    #[test]
    fn large_mean_does_not_overflow() {
        let level = truncation_level(200.0, 1e-12).unwrap();
        assert!(level > 200 && level < 400);
    }

    #[test]
    fn spread_for_weak_and_strong_fields() {
        assert_eq!(
            spread(1e-3, 1e-12).unwrap(),
            truncation_level(1e-3, 5e-13).unwrap() + 1
        );
        // for large mu the low tail is trimmed too
        let s = spread(100.0, 1e-12).unwrap();
        assert!(s < truncation_level(100.0, 5e-13).unwrap());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PoissonPmf::new(0.0).is_err());
        assert!(PoissonPmf::new(f64::NAN).is_err());
        assert!(truncation_level(1.0, 0.0).is_err());
        assert!(spread(1.0, 1.0).is_err());
    }
}
