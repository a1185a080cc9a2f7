//! Lower-bound exponents across p at n = 10^6, one column per regime, the
//! data behind the comparison plot of the three constructions.

use xfc::randgraph::{check_sweep, default_sweep_grid, select_parameters, sweep, RegimeOptions};

fn main() -> xfc::Result<()> {
    let n = 1e6;
    let opts = RegimeOptions::default();
    let rows = sweep(n, &default_sweep_grid(n, 16), &opts)?;
    let cell = |x: Option<f64>, ok: bool| x.map_or("-".to_string(), |v| format!("{v:.2}{}", if ok { "" } else { "?" }));
    println!("{:>9} {:>7} {:>8} {:>8} {:>8}", "p", "regime", "high", "middle", "low");
    for r in &rows {
        println!(
            "{:>9.5} {:>7} {:>8} {:>8} {:>8}",
            r.p,
            r.regime.to_string(),
            cell(r.high, r.high_certified),
            cell(r.middle, r.middle_certified),
            cell(r.low, r.low_certified)
        );
    }
    println!("(? marks exponents whose c0 g^2 >= 1 at this n)");
    println!("checks: {:?}", check_sweep(n, &rows, &opts));

    let p = select_parameters(1e9, 0.01, &opts)?;
    println!("n = 1e9, p = 0.01: {} regime, t = {}, l = {}, v = {}", p.regime, p.t, p.ell, p.v);
    Ok(())
}
