//! Distribution of the stability number of G(64, 1/2) against the
//! threshold 3 log2 n, and the stable-set count bound (n+1)^alpha.

use std::collections::BTreeMap;

use xfc::randgraph::{alpha_tail_experiment, sample_gnp, stable_count_check, GnpConfig};

fn main() -> xfc::Result<()> {
    let rep = alpha_tail_experiment(64, 0.5, 18, 500, 3, true)?;
    let mut hist = BTreeMap::new();
    for &a in &rep.alphas {
        *hist.entry(a).or_insert(0) += 1;
    }
    println!("alpha(G(64, 1/2)) over {} samples:", rep.alphas.len());
    for (a, c) in hist {
        println!("  {a:>2}: {}", "#".repeat(c / 5));
    }
    println!("P(alpha >= 18) estimate {} (tail bound 1/n = 1/64)", rep.estimate.point);

    for seed in 0..3 {
        let g = sample_gnp(&GnpConfig::new(30, 0.5, seed)?)?;
        let c = stable_count_check(&g, None)?;
        println!("G(30, 1/2) #{seed}: {} stable sets, alpha {}, bound {}", c.count, c.alpha, c.bound);
    }
    Ok(())
}
