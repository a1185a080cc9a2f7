use rand::distr::{Bernoulli, Distribution};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;

use super::rng::trial_rng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnpConfig {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl GnpConfig {
    pub fn new(n: usize, p: f64, seed: u64) -> Result<Self> {
        let cfg = GnpConfig { n, p, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("G(n, p) needs n >= 1".into()));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "G(n, p) needs 0 < p < 1, got {}",
                self.p
            )));
        }
        Ok(())
    }
}

/// Samples `G(n, p)` on labels `0..n` from stream 0 of the configured seed.
pub fn sample_gnp(cfg: &GnpConfig) -> Result<Graph> {
    sample_gnp_stream(cfg, 0)
}

/// Samples `G(n, p)` from trial stream `stream`.
pub fn sample_gnp_stream(cfg: &GnpConfig, stream: u64) -> Result<Graph> {
    cfg.validate()?;
    Ok(sample_gnp_with(cfg.n, cfg.p, &mut trial_rng(cfg.seed, stream)))
}

/// One Bernoulli(p) draw per pair `i < j`, pairs in lexicographic order.
pub fn sample_gnp_with<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let coin = Bernoulli::new(p).expect("p validated");
    let mut g = Graph::with_sorted_labels(n, (0..n).collect());
    for i in 0..n {
        for j in i + 1..n {
            if coin.sample(rng) {
                g.add_edge_pos(i, j);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_one_gives_complete_graph() {
        let g = sample_gnp(&GnpConfig::new(5, 0.999999999, 1).unwrap()).unwrap();
        assert_eq!(g.size(), 10);
    }

    #[test]
    fn single_vertex() {
        let g = sample_gnp(&GnpConfig::new(1, 0.5, 1).unwrap()).unwrap();
        assert_eq!((g.order(), g.size()), (1, 0));
    }

    #[test]
    fn edge_count_concentrates() {
        let g = sample_gnp(&GnpConfig::new(1000, 0.5, 42).unwrap()).unwrap();
        let pairs = 1000.0 * 999.0 / 2.0;
        let sigma = (pairs * 0.25f64).sqrt();
        assert!((g.size() as f64 - pairs / 2.0).abs() <= 4.0 * sigma);
    }

    #[test]
    fn deterministic_per_seed_and_stream() {
        let cfg = GnpConfig::new(40, 0.3, 9).unwrap();
        assert_eq!(sample_gnp(&cfg).unwrap(), sample_gnp(&cfg).unwrap());
        assert_ne!(sample_gnp_stream(&cfg, 1).unwrap(), sample_gnp_stream(&cfg, 2).unwrap());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GnpConfig::new(0, 0.5, 0).is_err());
        assert!(GnpConfig::new(5, 1.0, 0).is_err());
        assert!(GnpConfig::new(5, 0.0, 0).is_err());
    }
}
