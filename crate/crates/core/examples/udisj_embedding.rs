//! The gadget slack matrix of K_t contains UDISJ(t): each entry
//! N(a, b) = (1 - |a n b|)^2.

use xfc::graphs::{build_gadget, Graph};
use xfc::problems::{build_udisj, embed_udisj_via_gadget, pretty};

fn main() -> xfc::Result<()> {
    let t = 3;
    let gg = build_gadget(&Graph::complete(t), 2)?;
    let emb = embed_udisj_via_gadget(&gg)?;
    println!("N for K{t} with l = 2 (rows: nonempty a, columns: b)");
    println!("{}", pretty(&emb.matrix));
    println!("restricted to |a n b| <= 1:");
    println!("{}", pretty(&emb.udisj_block()));
    println!("UDISJ({t}) for comparison:");
    println!("{}", pretty(&build_udisj(t, None)?));

    let e = &emb.entries[5];
    println!(
        "entry ({}, {}): alpha(G[a]) = {}, |S(b) in G[a]| = {}, alpha(small) = {}, hits = {}, N = {}",
        e.a, e.b, e.alpha_sub, e.sub_hits, e.alpha_small, e.small_hits, e.value
    );
    Ok(())
}
