//! A desk-scale uniform model: one low-alpha graph per k-set, whose shifted
//! slack rows contain a shifted UDISJ(n, k), plus the asymptotic exponent.

use xfc::nnrank::{corollary_rho_max, uniform_model_exponent};
use xfc::problems::{pretty, uniform_model_toy, Rational, ToyFamily};

fn main() -> xfc::Result<()> {
    let toy = uniform_model_toy(5, 3, Rational::from_integer(2), ToyFamily::Random { p: 0.3, seed: 5 })?;
    println!("n = 5, k = 3: {} good sets, bad fraction {:.2}", toy.good_sets.len(), toy.bad_fraction());
    toy.verify_shifted_udisj()?;
    println!("shifted block equals UDISJ(5, 3) + 1 on the good rows");
    let rows: Vec<usize> = (0..toy.good_sets.len().min(3)).collect();
    let cols: Vec<usize> = (0..8).collect();
    println!("{}", pretty(&toy.shifted_udisj_block().submatrix(&rows, &cols)));

    for n in [1e4, 1e6, 1e8] {
        let rho = corollary_rho_max(n, 0.25)?;
        let b = uniform_model_exponent(n, rho)?;
        println!("n = {n:e}: rho = {rho:.1}, shift = {:.1}, exponent {:.2} ({})", b.shift, b.bound.exponent, b.bound.flag);
    }
    Ok(())
}
