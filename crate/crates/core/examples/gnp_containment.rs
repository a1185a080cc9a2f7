//! Monte-Carlo frequency of G(n, p) missing an induced gadget, next to the
//! second-moment bound c0 g^2.

use xfc::graphs::{build_gadget, Graph};
use xfc::randgraph::{containment_probability_mc, DegreeChoice, McOptions};

fn main() -> xfc::Result<()> {
    let h = build_gadget(&Graph::complete(3), 0)?;
    let opts = McOptions { degree: DegreeChoice::Gadget { ell: 0 }, ..McOptions::default() };
    println!("{:>5} {:>5} {:>8} {:>10} {:>10}", "n", "p", "missing", "c0g2", "tolerance");
    for (n, p) in [(500, 0.3), (2000, 0.3), (5000, 0.3), (2000, 0.5)] {
        let rep = containment_probability_mc(h.graph(), n, p, 60, 7, &opts)?;
        let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.4}"));
        println!(
            "{n:>5} {p:>5} {:>8.3} {:>10} {:>10}",
            rep.estimate.point,
            fmt(rep.c0g2),
            fmt(rep.tolerance)
        );
    }
    Ok(())
}
