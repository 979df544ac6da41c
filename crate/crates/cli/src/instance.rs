use std::fs;

use mlpr_core::ingest::{
    build_pagerank_tensor, heavy_tailed_v, parse_vector, read_matrix_market, AlphaSpec, Builtin,
};
use mlpr_core::precision::ReferenceMode;
use mlpr_core::{DoubleDouble, Method, Problem, SolverOptions, Start, Tensor3};

use crate::{Failure, InstanceArgs, IterArgs};

pub struct Instance {
    pub problem: Problem,
    pub from_graph: bool,
}

fn alpha_spec(args: &InstanceArgs) -> Result<AlphaSpec, Failure> {
    match (&args.alpha, &args.one_minus_two_alpha) {
        (Some(a), None) => Ok(AlphaSpec::Alpha(*a)),
        (None, Some(s)) => s
            .parse::<DoubleDouble>()
            .map(AlphaSpec::OneMinusTwoAlpha)
            .map_err(|e| Failure::Usage(format!("--one-minus-two-alpha: {e}"))),
        _ => Err(Failure::Usage("give exactly one of --alpha and --one-minus-two-alpha".into())),
    }
}

fn pagerank(v: Vec<f64>, p: Tensor3, alpha: AlphaSpec) -> mlpr_core::Result<Problem> {
    match alpha {
        AlphaSpec::Alpha(a) => Problem::pagerank(v, p, a),
        AlphaSpec::OneMinusTwoAlpha(g) => Problem::pagerank_with_gap(v, p, g),
    }
}

pub fn read_v(path: &std::path::Path) -> Result<Vec<f64>, Failure> {
    let src = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_vector(&src)?)
}

pub fn graph_v(n: usize, v: Option<&std::path::Path>, seed: u64) -> Result<Vec<f64>, Failure> {
    match v {
        Some(p) => read_v(p),
        None => Ok(heavy_tailed_v(n, seed)),
    }
}

pub fn load(args: &InstanceArgs) -> Result<Instance, Failure> {
    let alpha = alpha_spec(args)?;
    let src = &args.source;
    if let Some(name) = &src.builtin {
        let b: Builtin = name.parse()?;
        return Ok(Instance {
            problem: b.problem(alpha, args.delta)?,
            from_graph: false,
        });
    }
    if let Some(path) = &src.tensor {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let p = Tensor3::parse_text(&text)?;
        let v_path = args
            .v
            .as_ref()
            .ok_or_else(|| Failure::Usage("--tensor needs --v".into()))?;
        return Ok(Instance {
            problem: pagerank(read_v(v_path)?, p, alpha)?,
            from_graph: false,
        });
    }
    if let Some(path) = &src.graph {
        if !(0.0..=1.0).contains(&args.nu) {
            return Err(Failure::Usage(format!("--nu {} is not in [0, 1]", args.nu)));
        }
        let a = read_matrix_market(path)?;
        let v = graph_v(a.dim(), args.v.as_deref(), args.v_seed)?;
        let p = build_pagerank_tensor(&a, &v, args.nu)?;
        return Ok(Instance {
            problem: pagerank(v, p, alpha)?,
            from_graph: true,
        });
    }
    Err(Failure::Usage("no instance source given".into()))
}

pub fn parse_method(s: &str) -> Result<Method, Failure> {
    s.parse::<Method>().map_err(|e| Failure::Usage(e.to_string()))
}

pub fn options(method: Method, it: &IterArgs, inst: &Instance) -> Result<SolverOptions, Failure> {
    let start = match it.start.to_ascii_lowercase().as_str() {
        "zero" | "0" => Start::Zero,
        "v" => Start::V,
        other => return Err(Failure::Usage(format!("unknown start '{other}' (zero or v)"))),
    };
    let default_maxit = if inst.from_graph { 100 } else { 500 };
    Ok(SolverOptions {
        method,
        tol: it.tol,
        maxit: it.maxit.unwrap_or(default_maxit),
        block_sizes: it.blocks.clone(),
        start,
        record_history: false,
        reference: None,
    })
}

/// Starting from `v` above `α = 1/2` targets the stochastic solution.
pub fn reference_mode(problem: &Problem, start: &Start) -> ReferenceMode {
    if *start == Start::V && problem.alpha().is_some_and(|a| a > 0.5) {
        ReferenceMode::Stochastic
    } else {
        ReferenceMode::Minimal
    }
}
