use mlpr_core::analysis::{perturbation_experiment, PerturbMode};
use mlpr_core::ingest::{build_pagerank_tensor, read_matrix_market, three_cycle_tensor};
use mlpr_core::precision::{reference_solution, ReferenceSolution};
use mlpr_core::{solve as run_solver, Method, SolveReport, Termination};
use serde_json::{json, Value};

use crate::instance::{graph_v, load, options, parse_method, reference_mode};
use crate::output::{emit, emit_json, fmt17, num, nums, opt_cell, opt_num, Csv};
use crate::{
    CompareArgs, Failure, IngestArgs, PerturbArgs, SolveArgs, EXIT_MAXIT, EXIT_NUMERICAL,
};

const REFERENCE_DIGITS: usize = 34;

fn exit_code(t: Termination) -> u8 {
    match t {
        Termination::TolReached => 0,
        Termination::Maxit => EXIT_MAXIT,
        Termination::SingularPivot | Termination::Diverged => EXIT_NUMERICAL,
    }
}

fn termination_name(t: Termination) -> Value {
    serde_json::to_value(t).expect("enum serializes")
}

fn reference_json(r: &ReferenceSolution) -> Value {
    json!({
        "mode": serde_json::to_value(r.mode).expect("enum serializes"),
        "x": r.decimal_strings(REFERENCE_DIGITS),
        "iterations": r.iterations,
        "residual": num(r.residual),
    })
}

fn last(v: Option<&Vec<f64>>) -> Option<f64> {
    v.and_then(|h| h.last().copied())
}

fn report_json(rep: &SolveReport) -> Value {
    let eh = rep.error_history.as_ref();
    json!({
        "method": rep.method.name(),
        "termination": termination_name(rep.termination),
        "iterations": rep.iterations,
        "x": nums(&rep.x),
        "final_residual": num(rep.final_residual()),
        "final_e_cw": opt_num(last(eh.map(|h| &h.e_cw))),
        "final_e_norm": opt_num(last(eh.map(|h| &h.e_norm))),
        "decrease_steps": rep.decrease_steps,
        "overshoot_steps": rep.overshoot_steps,
    })
}

pub fn solve(a: SolveArgs) -> Result<u8, Failure> {
    let inst = load(&a.instance)?;
    let method = parse_method(&a.method)?;
    let mut opts = options(method, &a.iter, &inst)?;
    let reference = if a.reference {
        let mode = reference_mode(&inst.problem, &opts.start);
        Some(reference_solution(&inst.problem, mode)?)
    } else {
        None
    };
    opts.reference = reference.as_ref().map(|r| r.x_f64.clone());
    let rep = run_solver(&inst.problem, &opts)?;

    let mut out = report_json(&rep);
    let o = out.as_object_mut().expect("object");
    o.insert("command".into(), json!("solve"));
    o.insert("n".into(), json!(inst.problem.dim()));
    o.insert("alpha".into(), opt_num(inst.problem.alpha()));
    o.insert("residual_history".into(), nums(&rep.residual_history));
    o.insert("z_history".into(), nums(&rep.z_history));
    o.insert(
        "reference".into(),
        reference.as_ref().map_or(Value::Null, reference_json),
    );
    emit_json(a.json.as_deref(), &out)?;

    if let Some(path) = &a.csv {
        let mut c = Csv::new("solve", &["k", "residual_inf", "e_cw", "e_norm"]);
        let eh = rep.error_history.as_ref();
        for (k, r) in rep.residual_history.iter().enumerate() {
            c.row([
                k.to_string(),
                fmt17(*r),
                opt_cell(eh.map(|h| h.e_cw[k])),
                opt_cell(eh.map(|h| h.e_norm[k])),
            ]);
        }
        emit(Some(path), &c.finish())?;
    }
    Ok(exit_code(rep.termination))
}

pub fn perturb(a: PerturbArgs) -> Result<u8, Failure> {
    let inst = load(&a.instance)?;
    let mode = match a.mode.to_ascii_lowercase().as_str() {
        "relative" => PerturbMode::Relative,
        "additive" => PerturbMode::Additive,
        other => {
            return Err(Failure::Usage(format!(
                "unknown mode '{other}' (relative or additive)"
            )))
        }
    };
    if let Some(e) = a.eps.iter().find(|e| !(0.0..1.0).contains(*e)) {
        return Err(Failure::Usage(format!("--eps {e} is not in [0, 1)")));
    }
    let s = perturbation_experiment(&inst.problem, &a.eps, a.trials, a.seed, mode)?;

    if let Some(path) = &a.csv {
        let mut c = Csv::new(
            "perturb",
            &[
                "trial",
                "epsilon",
                "epsilon_realized",
                "d_cw_observed",
                "bound_omega",
                "bound_kappa",
                "omega_applicable",
                "kappa_applicable",
            ],
        );
        let bound = |b: Option<f64>| b.map_or("NOT_APPLICABLE".to_string(), fmt17);
        for r in &s.records {
            c.row([
                r.trial.to_string(),
                fmt17(r.epsilon),
                fmt17(r.epsilon_realized),
                fmt17(r.d_cw_observed),
                bound(r.bound_omega),
                bound(r.bound_kappa),
                r.omega_applicable.to_string(),
                r.kappa_applicable.to_string(),
            ]);
        }
        emit(Some(path), &c.finish())?;
    }
    let out = json!({
        "command": "perturb",
        "alpha": opt_num(inst.problem.alpha()),
        "mode": serde_json::to_value(mode).expect("enum serializes"),
        "epsilons": nums(&a.eps),
        "seed": a.seed,
        "trials": s.trials,
        "kappa": num(s.kappa),
        "omega": num(s.omega),
        "max_ratio_omega": opt_num(s.max_ratio_omega),
        "max_ratio_kappa": opt_num(s.max_ratio_kappa),
        "omega_always_applicable": s.omega_always_applicable,
        "all_within_omega": s.all_within_omega,
    });
    emit_json(a.json.as_deref(), &out)?;
    Ok(0)
}

pub fn ingest(a: IngestArgs) -> Result<u8, Failure> {
    if !(0.0..=1.0).contains(&a.nu) {
        return Err(Failure::Usage(format!("--nu {} is not in [0, 1]", a.nu)));
    }
    let g = read_matrix_market(&a.graph)?;
    let cycles = three_cycle_tensor(&g).nnz();
    if cycles == 0 {
        eprintln!("mlpr: warning: the graph has no three-cycles; the cycle tensor is zero");
    }
    let v = graph_v(g.dim(), a.v.as_deref(), a.v_seed)?;
    let p = build_pagerank_tensor(&g, &v, a.nu)?;
    emit(Some(&a.out), &p.to_text())?;
    if let Some(path) = &a.v_out {
        let text: String = v.iter().map(|x| fmt17(*x) + "\n").collect();
        emit(Some(path), &text)?;
    }
    let st = p.check_stochastic(1.0, mlpr_core::solvers::P_SUM_TOL);
    let out = json!({
        "command": "ingest",
        "n": g.dim(),
        "edges": g.num_edges(),
        "three_cycle_entries": cycles,
        "nnz": p.nnz(),
        "nu": num(a.nu),
        "stochasticity": {
            "max_deviation": num(st.max_deviation),
            "worst_column": st.worst_column.map(|(j, k)| [j + 1, k + 1]),
            "passed": st.passed,
        },
    });
    emit_json(a.json.as_deref(), &out)?;
    Ok(if st.passed { 0 } else { EXIT_NUMERICAL })
}

pub fn compare(a: CompareArgs) -> Result<u8, Failure> {
    let inst = load(&a.instance)?;
    let methods = a
        .methods
        .iter()
        .map(|m| parse_method(m))
        .collect::<Result<Vec<Method>, _>>()?;
    if methods.is_empty() {
        return Err(Failure::Usage("--methods is empty".into()));
    }
    let base = options(methods[0], &a.iter, &inst)?;
    let r = reference_solution(&inst.problem, reference_mode(&inst.problem, &base.start))?;

    let mut c = Csv::new("compare", &["method", "k", "e_cw", "e_norm", "residual_inf"]);
    let mut results = Vec::new();
    for m in methods {
        let mut opts = options(m, &a.iter, &inst)?;
        opts.reference = Some(r.x_f64.clone());
        let rep = run_solver(&inst.problem, &opts)?;
        let h = rep.error_history.as_ref().expect("reference was given");
        for k in 0..rep.residual_history.len() {
            c.row([
                m.name().to_string(),
                k.to_string(),
                fmt17(h.e_cw[k]),
                fmt17(h.e_norm[k]),
                fmt17(rep.residual_history[k]),
            ]);
        }
        results.push(report_json(&rep));
    }
    if let Some(path) = &a.csv {
        emit(Some(path), &c.finish())?;
    }
    let out = json!({
        "command": "compare",
        "n": inst.problem.dim(),
        "alpha": opt_num(inst.problem.alpha()),
        "reference": reference_json(&r),
        "results": results,
    });
    emit_json(a.json.as_deref(), &out)?;
    Ok(0)
}
