//! Both directions of the factorization theorem on the stable set problem
//! of a path: an LP becomes a nonnegative factorization of the slack
//! matrix and back, exactly over the rationals.

use xfc::graphs::{Graph, VertexSet};
use xfc::nnrank::{check_conditions, edge_relaxation_lp, factorization_to_lp, lp_to_factorization, verify_factorization};
use xfc::problems::{pretty, slack_matrix, stab_nu_problem, Rational};

fn main() -> xfc::Result<()> {
    let g = Graph::path(4);
    let problem = stab_nu_problem(&g, None, 1 << 16)?;
    let slack = slack_matrix(&problem)?;
    println!("slack matrix: {} objectives x {} stable sets", slack.nrows(), slack.ncols());

    let sets: Vec<VertexSet> = (0u128..16).map(|m| VertexSet::from_bits(m << 1)).collect();
    let lp = edge_relaxation_lp(&g, &problem, &sets);
    let zero = Rational::from_integer(0);
    println!("edge relaxation: {} inequalities, checks {:?}", lp.size(), check_conditions(&lp, &problem, zero)?);

    let f = lp_to_factorization(&lp, &problem)?;
    let check = verify_factorization(&slack, &f, zero)?;
    println!("factorization of inner dimension {}: residual {}", f.rank(), check.max_residual);

    let back = factorization_to_lp(&f, &problem, zero)?;
    println!(
        "LP from the factorization: dimension {}, {} inequalities, passes: {}",
        back.dimension(),
        back.size(),
        check_conditions(&back, &problem, zero)?.passed()
    );
    println!("first rows of the slack matrix:");
    let rows: Vec<usize> = (0..4).collect();
    let cols: Vec<usize> = (0..slack.ncols()).collect();
    println!("{}", pretty(&slack.submatrix(&rows, &cols)));
    Ok(())
}
