use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graphs::{build_gadget, io::GraphJson, stability_number, Graph, VertexSet};
use crate::nnrank::{
    check_conditions, edge_relaxation_lp, exact_nnegrk_small, factorization_to_lp, linear_rank, lp_to_factorization,
    nmf_upper, rectangle_cover_bound, solution_simplex_lp, trivial_factorization, verify_factorization, LpCheck,
    NmfOptions, NonnegFactorization, RankOptions, Scalar, DEFAULT_RECT_NODE_BUDGET,
};
use crate::problems::{
    build_udisj, complete_family_example, embed_udisj_via_gadget, parse_rational, shift_matrix, slack_matrix,
    stab_nu_problem, Entry, PartialMatrix, Rational, DEFAULT_SOLUTION_BUDGET,
};
use crate::randgraph::{
    alpha_tail_experiment, check_sweep, containment_probability_mc, default_sweep_grid, select_parameters, sweep,
    xc_bound_report, DegreeChoice, McOptions, RegimeOptions,
};

use super::output::{Output, Table};
use super::spec::{parse_graph, parse_graph_or_gadget, parse_matrix_float, parse_matrix_rational};
use super::*;

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

fn s<T: ToString>(v: T) -> String {
    v.to_string()
}

fn regime_options(r: &RegimeArgs) -> RegimeOptions {
    RegimeOptions {
        c: r.c,
        delta: r.delta,
        high_margin: r.high_margin,
        force: r.regime,
    }
}

fn nmf_options(a: &NmfArgs, seed: u64, parallel: bool) -> NmfOptions {
    NmfOptions {
        restarts: a.restarts,
        iters: a.iters,
        seed,
        parallel,
    }
}

pub(super) fn dispatch(cfg: &RunConfig, parallel: bool) -> Result<Output> {
    match &cfg.command {
        Command::Gadget(a) => gadget(a, cfg),
        Command::EmbedCheck(a) => embed_check(a),
        Command::Bounds(a) => bounds(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::GnpContain(a) => gnp_contain(a, cfg, parallel),
        Command::AlphaTail(a) => alpha_tail(a, cfg, parallel),
        Command::Nnr(a) => nnr(a, cfg, parallel),
        Command::Slack(a) => slack(a, cfg),
        Command::Factorize(a) => factorize(a, cfg, parallel),
        Command::LpRoundtrip(a) => lp_roundtrip(a, cfg, parallel),
        Command::Replay(_) => Err(Error::InvalidParameter("nested replay".into())),
    }
}

fn gadget(a: &GadgetArgs, cfg: &RunConfig) -> Result<Output> {
    let template = parse_graph(&a.template, cfg.seed)?;
    let gg = build_gadget(&template, a.ell)?;
    let g = gg.graph();
    let alpha = stability_number(g)?;
    let expected_alpha = stability_number(&template)? + (a.ell + 1) * template.size();
    let passed = alpha == expected_alpha && g.order() == gg.expected_order() && g.size() == gg.expected_size();
    let mut table = Table::new(["vertex", "role", "edge_i", "edge_j", "position"]);
    let mut roles = Vec::new();
    for (&label, role) in gg.roles() {
        use crate::graphs::Role::*;
        let (name, edge, pos) = match *role {
            Branch => ("branch", None, None),
            U { edge } => ("u", Some(edge), None),
            V { edge } => ("v", Some(edge), None),
            Internal { edge, position } => ("internal", Some(edge), Some(position)),
        };
        table.push(vec![s(label), s(name), opt(edge.map(|e| e.0)), opt(edge.map(|e| e.1)), opt(pos)]);
        roles.push(json!({"vertex": label, "role": role}));
    }
    Ok(Output {
        result: json!({
            "template": GraphJson::from(&template),
            "ell": a.ell,
            "graph": GraphJson::from(g),
            "roles": roles,
            "v": g.order(),
            "e": g.size(),
            "alpha": alpha,
            "expected": {"v": gg.expected_order(), "e": gg.expected_size(), "alpha": expected_alpha},
        }),
        table,
        passed,
    })
}

fn embed_check(a: &EmbedArgs) -> Result<Output> {
    let gg = build_gadget(&Graph::complete(a.t), a.ell)?;
    let emb = embed_udisj_via_gadget(&gg)?;
    let mut table = Table::new(["a", "b", "alpha_sub", "sub_hits", "alpha_small", "small_hits", "value", "expected"]);
    for e in &emb.entries {
        let inter = e.a.chars().zip(e.b.chars()).filter(|&(x, y)| x == '1' && y == '1').count() as i64;
        table.push(vec![
            e.a.clone(),
            e.b.clone(),
            s(e.alpha_sub),
            s(e.sub_hits),
            s(e.alpha_small),
            s(e.small_hits),
            s(e.value),
            s((1 - inter) * (1 - inter)),
        ]);
    }
    let block = emb.udisj_block();
    let coordinates: Vec<[&String; 2]> = block
        .defined_entries()
        .map(|(i, j, _)| [&block.row_labels()[i], &block.col_labels()[j]])
        .collect();
    Ok(Output {
        result: json!({
            "t": a.t,
            "ell": a.ell,
            "verdict": "pass",
            "matrix": emb.matrix.to_json_value(),
            "entries": emb.entries,
            "udisj_coordinates": coordinates,
        }),
        table,
        passed: true,
    })
}

fn bounds(a: &BoundsArgs) -> Result<Output> {
    let r = xc_bound_report(a.n, a.p, &regime_options(&a.regime))?;
    let p = &r.params;
    let mut table = Table::new([
        "n", "p", "regime", "t", "ell", "gamma", "d", "v", "g", "c0g2", "certified", "predicted_exponent", "upper_exponent",
        "flags",
    ]);
    table.push(vec![
        s(p.n),
        s(p.p),
        s(p.regime),
        s(p.t),
        s(p.ell),
        p.gamma.clone(),
        p.d.clone(),
        s(p.v),
        opt(p.g),
        opt(p.c0g2),
        s(p.certified),
        s(p.predicted_exponent),
        s(r.upper_exponent),
        p.flags.join("; "),
    ]);
    Ok(Output {
        result: to_value(&r)?,
        table,
        passed: true,
    })
}

fn sweep_cmd(a: &SweepArgs) -> Result<Output> {
    let opts = regime_options(&a.regime);
    let mut ps = if a.p.is_empty() { default_sweep_grid(a.n, a.points) } else { a.p.clone() };
    ps.sort_by(f64::total_cmp);
    let rows = sweep(a.n, &ps, &opts)?;
    let check = check_sweep(a.n, &rows, &opts);
    let mut table = Table::new([
        "p",
        "regime",
        "exponent",
        "certified",
        "high",
        "high_certified",
        "middle",
        "middle_certified",
        "low",
        "low_certified",
        "upper_exponent",
    ]);
    for r in &rows {
        table.push(vec![
            s(r.p),
            s(r.regime),
            s(r.exponent),
            s(r.certified),
            opt(r.high),
            s(r.high_certified),
            opt(r.middle),
            s(r.middle_certified),
            opt(r.low),
            s(r.low_certified),
            s(r.upper_exponent),
        ]);
    }
    Ok(Output {
        result: json!({"n": a.n, "rows": rows, "check": check}),
        table,
        passed: check.passed(),
    })
}

fn gnp_contain(a: &ContainArgs, cfg: &RunConfig, parallel: bool) -> Result<Output> {
    let h = parse_graph_or_gadget(&a.pattern, a.ell, cfg.seed)?;
    let degree = match (a.degree, a.ell) {
        (DegreeArg::Measured, _) | (DegreeArg::Auto, None) => DegreeChoice::Measured,
        (DegreeArg::Gadget, Some(ell)) | (DegreeArg::Auto, Some(ell)) => DegreeChoice::Gadget { ell },
        (DegreeArg::Gadget, None) => {
            return Err(Error::InvalidParameter("--degree gadget needs --ell".into()));
        }
    };
    let opts = McOptions {
        node_budget: cfg.budget.unwrap_or(McOptions::default().node_budget),
        degree,
        parallel,
    };
    let r = containment_probability_mc(&h, a.n, a.p, a.trials, cfg.seed, &opts)?;
    let params = select_parameters(a.n as f64, a.p, &RegimeOptions::default()).ok();
    let e = &r.estimate;
    let mut table = Table::new([
        "n",
        "p",
        "seed",
        "trials",
        "successes",
        "undecided",
        "point",
        "ci_low",
        "ci_high",
        "g",
        "c0g2",
        "regime",
        "t",
        "ell",
        "predicted_exponent",
    ]);
    table.push(vec![
        s(a.n),
        s(a.p),
        s(e.seed),
        s(e.trials),
        s(e.successes),
        s(e.undecided),
        s(e.point),
        s(e.ci_low),
        s(e.ci_high),
        opt(r.g),
        opt(r.c0g2),
        opt(params.as_ref().map(|p| p.regime)),
        opt(params.as_ref().map(|p| p.t)),
        opt(params.as_ref().map(|p| p.ell)),
        opt(params.as_ref().map(|p| p.predicted_exponent)),
    ]);
    Ok(Output {
        result: json!({"report": r, "regime_params": params}),
        passed: r.passed(),
        table,
    })
}

fn alpha_tail(a: &AlphaTailArgs, cfg: &RunConfig, parallel: bool) -> Result<Output> {
    let r = alpha_tail_experiment(a.n, a.p, a.threshold, a.trials, cfg.seed, parallel)?;
    let e = &r.estimate;
    let passed = r.rough_bound.is_none_or(|b| e.point <= b);
    let mut table = Table::new([
        "n",
        "p",
        "seed",
        "trials",
        "threshold",
        "successes",
        "point",
        "ci_low",
        "ci_high",
        "analytic_bound",
        "rough_bound",
        "max_alpha",
    ]);
    table.push(vec![
        s(a.n),
        s(a.p),
        s(e.seed),
        s(e.trials),
        s(a.threshold),
        s(e.successes),
        s(e.point),
        s(e.ci_low),
        s(e.ci_high),
        s(r.analytic_bound),
        opt(r.rough_bound),
        opt(r.alphas.iter().max()),
    ]);
    Ok(Output {
        result: to_value(&r)?,
        table,
        passed,
    })
}

fn nnr(a: &NnrArgs, cfg: &RunConfig, parallel: bool) -> Result<Output> {
    let opts = RankOptions {
        rmax: a.rmax,
        nmf: nmf_options(&a.nmf, cfg.seed, parallel),
        rect_budget: cfg.budget.unwrap_or(DEFAULT_RECT_NODE_BUDGET),
    };
    let (iv, rect, side) = match cfg.mode {
        Mode::Rational => {
            let m = parse_matrix_rational(&a.matrix)?;
            (exact_nnegrk_small(&m, &opts)?, rectangle_cover_bound(&m, opts.rect_budget)?, m.nrows().min(m.ncols()))
        }
        Mode::Float => {
            let m = parse_matrix_float(&a.matrix)?;
            (exact_nnegrk_small(&m, &opts)?, rectangle_cover_bound(&m, opts.rect_budget)?, m.nrows().min(m.ncols()))
        }
    };
    let passed = iv.lower <= iv.upper && iv.upper <= side;
    let mut table = Table::new([
        "lower",
        "upper",
        "certified",
        "lower_method",
        "upper_method",
        "linear_rank_bound",
        "rectangle_bound",
        "rectangle_exact",
    ]);
    let name = |v: &dyn erased::Named| v.name();
    table.push(vec![
        s(iv.lower),
        s(iv.upper),
        s(iv.certified()),
        name(&iv.lower_method),
        name(&iv.upper_method),
        s(iv.linear_rank_bound),
        s(iv.rectangle_bound),
        s(iv.rectangle_exact),
    ]);
    Ok(Output {
        result: json!({"interval": iv, "certified": iv.certified(), "rectangles": rect}),
        table,
        passed,
    })
}

mod erased {
    /// Serde name of a unit enum variant.
    pub trait Named {
        fn name(&self) -> String;
    }

    impl<T: serde::Serialize> Named for T {
        fn name(&self) -> String {
            match serde_json::to_value(self) {
                Ok(serde_json::Value::String(s)) => s,
                Ok(v) => v.to_string(),
                Err(_) => String::new(),
            }
        }
    }
}

fn matrix_table<T: Entry>(m: &PartialMatrix<T>) -> Table {
    let mut header = vec![String::new()];
    header.extend(m.col_labels().iter().cloned());
    let mut table = Table { header, rows: Vec::new() };
    for i in 0..m.nrows() {
        let mut row = vec![m.row_labels()[i].clone()];
        row.extend((0..m.ncols()).map(|j| m.get(i, j).map_or_else(|| "NA".to_string(), Entry::format_entry)));
        table.push(row);
    }
    table
}

fn slack(a: &SlackArgs, cfg: &RunConfig) -> Result<Output> {
    let need = |v: Option<usize>, what: &str| v.ok_or_else(|| Error::InvalidParameter(format!("slack needs --{what}")));
    let base = match a.kind {
        SlackKind::StabNu => {
            let spec = a
                .graph
                .as_deref()
                .ok_or_else(|| Error::InvalidParameter("slack stab-nu needs --graph".into()))?;
            let g = parse_graph_or_gadget(spec, a.ell, cfg.seed)?;
            let p = stab_nu_problem(&g, None, cfg.budget.unwrap_or(DEFAULT_SOLUTION_BUDGET))?;
            slack_matrix(&p)?
        }
        SlackKind::Udisj => build_udisj(need(a.n, "n")?, a.k)?,
        SlackKind::CompleteFamily => complete_family_example(need(a.n, "n")?)?,
    };
    let m = match &a.shift {
        Some(rho) => {
            let rho = parse_rational(rho).ok_or_else(|| Error::parse(1, None, format!("bad shift {rho:?}")))?;
            shift_matrix(&base, rho)?
        }
        None => base,
    };
    let (result, table) = match cfg.mode {
        Mode::Rational => (to_value(&m.to_json_value())?, matrix_table(&m)),
        Mode::Float => {
            let f = m.to_f64();
            (to_value(&f.to_json_value())?, matrix_table(&f))
        }
    };
    Ok(Output {
        result: json!({"nrows": m.nrows(), "ncols": m.ncols(), "defined": m.defined_count(), "matrix": result}),
        table,
        passed: true,
    })
}

fn factor_table<T: Scalar>(f: &NonnegFactorization<T>) -> Table {
    let mut table = Table::new(["factor", "row", "col", "value"]);
    for (name, mat) in [("left", f.left()), ("right", f.right())] {
        for (i, row) in mat.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                table.push(vec![s(name), s(i), s(j), v.format_entry()]);
            }
        }
    }
    table
}

fn factor_json<T: Scalar>(f: &NonnegFactorization<T>) -> Value {
    let fmt = |m: &[Vec<T>]| -> Vec<Vec<String>> { m.iter().map(|r| r.iter().map(Entry::format_entry).collect()).collect() };
    json!({"rank": f.rank(), "left": fmt(f.left()), "right": fmt(f.right())})
}

/// Smallest `r` in `from..=side` with an NMF fit.
fn smallest_nmf(m: &PartialMatrix<f64>, from: usize, opts: &NmfOptions) -> Option<(usize, crate::nnrank::NmfFit)> {
    let side = m.nrows().min(m.ncols());
    (from.max(1)..=side).find_map(|r| nmf_upper(m, r, opts).map(|f| (r, f)))
}

fn factorize(a: &FactorizeArgs, cfg: &RunConfig, parallel: bool) -> Result<Output> {
    match cfg.mode {
        Mode::Rational => {
            if a.rank.is_some() {
                return Err(Error::InvalidParameter(
                    "--rank needs --mode float; rational mode gives the trivial factorization".into(),
                ));
            }
            let m = parse_matrix_rational(&a.matrix)?;
            let f = trivial_factorization(&m)?;
            let check = verify_factorization(&m, &f, Rational::from_integer(0))?;
            Ok(Output {
                result: json!({"method": "trivial", "residual": check.max_residual.to_string(), "factorization": factor_json(&f)}),
                table: factor_table(&f),
                passed: check.ok,
            })
        }
        Mode::Float => {
            let m = parse_matrix_float(&a.matrix)?;
            let opts = nmf_options(&a.nmf, cfg.seed, parallel);
            let found = match a.rank {
                Some(r) => nmf_upper(&m, r, &opts).map(|f| (r, f)),
                None => smallest_nmf(&m, 1, &opts),
            };
            match found {
                Some((r, fit)) => Ok(Output {
                    result: json!({
                        "method": "nmf", "rank": r, "residual": fit.residual, "restart": fit.restart,
                        "factorization": factor_json(&fit.factorization),
                    }),
                    table: factor_table(&fit.factorization),
                    passed: true,
                }),
                None => Ok(Output {
                    result: json!({"method": "nmf", "rank": a.rank, "found": false}),
                    table: Table::new(["factor", "row", "col", "value"]),
                    passed: false,
                }),
            }
        }
    }
}

#[derive(Serialize)]
struct RoundtripStep {
    step: &'static str,
    lp_size: Option<usize>,
    rank: Option<usize>,
    passed: bool,
    detail: Value,
}

fn check_step(step: &'static str, lp_size: usize, c: &LpCheck) -> RoundtripStep {
    RoundtripStep {
        step,
        lp_size: Some(lp_size),
        rank: None,
        passed: c.passed(),
        detail: serde_json::to_value(c).unwrap_or(Value::Null),
    }
}

fn lp_roundtrip(a: &RoundtripArgs, cfg: &RunConfig, parallel: bool) -> Result<Output> {
    let g = parse_graph_or_gadget(&a.graph, a.ell, cfg.seed)?;
    let problem = stab_nu_problem(&g, None, cfg.budget.unwrap_or(DEFAULT_SOLUTION_BUDGET))?;
    let slack = slack_matrix(&problem)?;
    let mut steps = Vec::new();
    match cfg.mode {
        Mode::Rational => {
            let use_edge = match a.lp {
                LpKind::Edge => true,
                LpKind::Simplex => false,
                LpKind::Auto => g.is_bipartite(),
            };
            let lp = if use_edge {
                let vs = g.labels();
                let sets = (0u64..1u64 << vs.len())
                    .map(|m| VertexSet::from_labels((0..vs.len()).filter(|k| m >> k & 1 == 1).map(|k| vs[k])))
                    .collect::<Result<Vec<VertexSet>>>()?;
                edge_relaxation_lp(&g, &problem, &sets)
            } else {
                solution_simplex_lp(&problem)
            };
            let zero = Rational::from_integer(0);
            steps.push(check_step(if use_edge { "edge_lp" } else { "simplex_lp" }, lp.size(), &check_conditions(&lp, &problem, zero)?));
            let f1 = lp_to_factorization(&lp, &problem)?;
            let c1 = verify_factorization(&slack, &f1, zero)?;
            steps.push(RoundtripStep {
                step: "lp_to_factorization",
                lp_size: None,
                rank: Some(f1.rank()),
                passed: c1.ok && f1.rank() <= lp.size() + 1,
                detail: json!({"residual": c1.max_residual.to_string()}),
            });
            let lp2 = factorization_to_lp(&f1, &problem, zero)?;
            steps.push(check_step("factorization_to_lp", lp2.size(), &check_conditions(&lp2, &problem, zero)?));
            let f2 = lp_to_factorization(&lp2, &problem)?;
            let c2 = verify_factorization(&slack, &f2, zero)?;
            steps.push(RoundtripStep {
                step: "lp_to_factorization",
                lp_size: None,
                rank: Some(f2.rank()),
                passed: c2.ok && f2.rank() <= lp2.size() + 1 && lp2.size() == f1.rank(),
                detail: json!({"residual": c2.max_residual.to_string()}),
            });
        }
        Mode::Float => {
            let m = slack.to_f64();
            let lower = linear_rank(&slack).unwrap_or(1);
            let opts = nmf_options(&a.nmf, cfg.seed, parallel);
            // Falls back to the exact trivial factorization when no NMF fit
            // below min(m, n) is found.
            let side = m.nrows().min(m.ncols());
            let (f, step, residual) = match (lower.max(1)..side).find_map(|r| nmf_upper(&m, r, &opts)) {
                Some(fit) => (fit.factorization, "nmf", fit.residual),
                None => (trivial_factorization(&m)?, "trivial", 0.0),
            };
            steps.push(RoundtripStep {
                step,
                lp_size: None,
                rank: Some(f.rank()),
                passed: true,
                detail: json!({"residual": residual}),
            });
            let tol = 1e-9;
            let lp = factorization_to_lp(&f, &problem, tol)?;
            steps.push(check_step("factorization_to_lp", lp.size(), &check_conditions(&lp, &problem, tol)?));
        }
    }
    let passed = steps.iter().all(|s| s.passed);
    let mut table = Table::new(["step", "lp_size", "rank", "passed"]);
    for st in &steps {
        table.push(vec![s(st.step), opt(st.lp_size), opt(st.rank), s(st.passed)]);
    }
    Ok(Output {
        result: json!({
            "graph": GraphJson::from(&g),
            "objectives": problem.objectives().len(),
            "solutions": problem.solutions().len(),
            "steps": steps,
        }),
        table,
        passed,
    })
}
