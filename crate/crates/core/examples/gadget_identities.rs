//! Stability number of the subdivision gadget against the closed form
//! alpha(T) + (l+1)|E(T)|, and the canonical extensions S(b).

use xfc::graphs::{build_gadget, stability_number, Graph, VertexSet};

fn main() -> xfc::Result<()> {
    let templates = [
        ("K3", Graph::complete(3)),
        ("K4", Graph::complete(4)),
        ("C5", Graph::cycle(5)?),
        ("P4", Graph::path(4)),
    ];
    println!("{:<4} {:>2} {:>4} {:>4} {:>6} {:>8}", "T", "l", "v", "e", "alpha", "formula");
    for (name, t) in &templates {
        for ell in [0, 2, 4] {
            let gg = build_gadget(t, ell)?;
            let g = gg.graph();
            let formula = stability_number(t)? + (ell + 1) * t.size();
            println!(
                "{name:<4} {ell:>2} {:>4} {:>4} {:>6} {formula:>8}",
                g.order(),
                g.size(),
                stability_number(g)?
            );
        }
    }

    // |S(b)| = |b| + (l+1)|E(T)| - |E(T[b])|, maximal exactly when b is stable.
    let t = Graph::complete(3);
    let gg = build_gadget(&t, 2)?;
    for bits in ["000", "100", "110", "111"] {
        let b = VertexSet::from_bitstring(bits).expect("bitstring");
        let s = gg.extend_stable_set(b)?;
        println!("S({bits}) has {} vertices, stable: {}", s.len(), gg.graph().is_stable(s));
    }
    Ok(())
}
