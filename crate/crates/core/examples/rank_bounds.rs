//! Nonnegative-rank intervals for small partial matrices, with the
//! rectangle covering bound and the UDISJ lower bound (3/2)^t.

use xfc::nnrank::{corlb_integer_bound, exact_nnegrk_small, rectangle_cover_bound, RankOptions, DEFAULT_RECT_NODE_BUDGET};
use xfc::problems::{build_udisj, PartialMatrix, Rational};

fn main() -> xfc::Result<()> {
    let opts = RankOptions::default();
    for t in 1..=3 {
        let m = build_udisj(t, None)?;
        let rect = rectangle_cover_bound(&m, DEFAULT_RECT_NODE_BUDGET)?;
        let iv = if m.nrows().min(m.ncols()) <= 6 {
            Some(exact_nnegrk_small(&m, &opts)?)
        } else {
            None
        };
        println!(
            "UDISJ({t}): cover {} ({} maximal rectangles), theory >= {}, interval {}",
            rect.lower,
            rect.maximal_rectangles,
            corlb_integer_bound(t as u32),
            iv.map_or("n/a (side > 6)".into(), |iv| format!("[{}, {}] via {:?}/{:?}", iv.lower, iv.upper, iv.lower_method, iv.upper_method))
        );
    }

    // A 4x4 matrix whose nonnegative rank (4) exceeds its rank (3).
    let r = |v: i64| Rational::from_integer(v);
    let m = PartialMatrix::from_rows(vec![
        vec![r(1), r(1), r(0), r(0)],
        vec![r(0), r(1), r(1), r(0)],
        vec![r(0), r(0), r(1), r(1)],
        vec![r(1), r(0), r(0), r(1)],
    ])?;
    let iv = exact_nnegrk_small(&m, &opts)?;
    println!("4-cycle incidence: linear rank {}, rectangle bound {}, interval [{}, {}]", iv.linear_rank_bound, iv.rectangle_bound, iv.lower, iv.upper);
    Ok(())
}
