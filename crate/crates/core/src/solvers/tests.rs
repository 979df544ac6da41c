use super::*;
use crate::analysis::cw_distance;
use crate::ingest::builtin::{ex1, ex1_with_gap, ex2, intro};
use crate::precision::{reference_solution, ReferenceMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Half a unit in the fourth significant digit of `r`.
fn agrees_4(x: f64, r: f64) -> bool {
    let unit = 10f64.powf(r.abs().log10().floor() - 3.0);
    (x - r).abs() <= 0.5 * unit
}

fn opts(method: Method) -> SolverOptions {
    SolverOptions::new(method)
}

fn history(opts: SolverOptions) -> SolverOptions {
    SolverOptions {
        record_history: true,
        ..opts
    }
}

fn zero_b_problem() -> Problem {
    Problem::new(vec![0.25, 0.5, 0.0], Tensor3::zeros(3)).unwrap()
}

#[test]
fn residual_basics() {
    let p = intro(1e-6, 0.3).unwrap();
    let r = residual(&p, &[1.0 - 1e-6, 1e-6]).unwrap();
    assert!(norm_inf(&r) <= 4e-16);
    assert_eq!(residual(&p, &[0.0, 0.0]).unwrap(), p.a());
    assert!(residual(&p, &[0.0]).is_err());
}

#[test]
fn residual_matches_triple_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = ex1(0.3).unwrap();
    let dense = p.b().unfolding();
    for _ in 0..20 {
        let x: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..1.0)).collect();
        let r = residual(&p, &x).unwrap();
        for i in 0..4 {
            let mut s = p.a()[i];
            for j in 0..4 {
                for k in 0..4 {
                    s += dense[(i, j + 4 * k)] * x[j] * x[k];
                }
            }
            assert!((r[i] - (s - x[i])).abs() <= 1e-14);
        }
    }
}

#[test]
fn zero_tensor_takes_one_step() {
    for m in [Method::FixedPoint, Method::Newton] {
        let rep = solve(&zero_b_problem(), &opts(m)).unwrap();
        assert_eq!(rep.iterations, 1, "{m}");
        assert_eq!(rep.x, vec![0.25, 0.5, 0.0]);
        assert_eq!(rep.termination, Termination::TolReached);
        assert_eq!(rep.residual_history.len(), 2);
    }
}

#[test]
fn gth_methods_need_pagerank_and_zero_start() {
    assert!(solve(&zero_b_problem(), &opts(Method::NewtonGth)).is_err());
    let p = ex1(0.3).unwrap();
    let o = SolverOptions {
        start: Start::V,
        ..opts(Method::NewtonGth)
    };
    assert!(solve(&p, &o).is_err());
    let o = SolverOptions {
        block_sizes: Some(vec![3, 2]),
        ..opts(Method::BlockJacobi)
    };
    assert!(solve(&p, &o).is_err());
    let o = SolverOptions {
        tol: 0.0,
        ..opts(Method::Newton)
    };
    assert!(solve(&p, &o).is_err());
}

#[test]
fn method_names_round_trip() {
    for m in Method::ALL {
        assert_eq!(m.name().parse::<Method>().unwrap(), m);
    }
    assert_eq!("BJGV".parse::<Method>().unwrap(), Method::BlockJacobiGthVariant);
    assert!("secant".parse::<Method>().is_err());
}

#[test]
fn block_partition() {
    assert_eq!(block_ranges(5, None).unwrap(), vec![0..2, 2..4, 4..5]);
    assert_eq!(block_ranges(4, Some(&[1, 3])).unwrap(), vec![0..1, 1..4]);
    assert!(block_ranges(4, Some(&[0, 4])).is_err());
}

#[test]
fn intro_example_all_methods() {
    let (d, p) = (1e-6, intro(1e-6, 0.3).unwrap());
    let exact = [1.0 - d, d];
    for m in Method::ALL {
        let blocks = if m == Method::BlockJacobiGthVariant { vec![2] } else { vec![1, 1] };
        let o = SolverOptions {
            block_sizes: Some(blocks),
            ..opts(m)
        };
        let rep = solve(&p, &o).unwrap();
        assert_eq!(rep.termination, Termination::TolReached, "{m}");
        assert!(cw_distance(&rep.x, &exact).unwrap().value <= 1e-12, "{m}: {:?}", rep.x);
    }
}

#[test]
fn variant_can_stall_with_scalar_blocks() {
    let p = intro(1e-6, 0.3).unwrap();
    let o = SolverOptions {
        block_sizes: Some(vec![1, 1]),
        maxit: 40,
        ..opts(Method::BlockJacobiGthVariant)
    };
    let rep = solve(&p, &o).unwrap();
    assert_eq!(rep.termination, Termination::Maxit);
    let h = &rep.residual_history;
    assert!(h[5] < 1e-6 && h[40] > h[5]);
}

#[test]
fn fixed_point_is_monotone() {
    let p = ex1(0.3).unwrap();
    let rep = solve(&p, &history(opts(Method::FixedPoint))).unwrap();
    let it = rep.iterate_history.unwrap();
    for w in it.windows(2) {
        for i in 0..4 {
            assert!(w[1][i] - w[0][i] >= -1e-15);
        }
    }
    let nr = solve(&p, &opts(Method::Newton)).unwrap();
    assert!(cw_distance(&rep.x, &nr.x).unwrap().value <= 1e-13);
}

#[test]
fn newton_reaches_published_stochastic_solution() {
    let p = ex2(0.9951).unwrap();
    let o = SolverOptions {
        start: Start::V,
        ..opts(Method::Newton)
    };
    let rep = solve(&p, &o).unwrap();
    let published = [8.6225e-7, 8.5301e-5, 8.5971e-3, 9.9132e-1];
    for i in 0..4 {
        assert!(agrees_4(rep.x[i], published[i]), "{:?}", rep.x);
    }
    assert!((rep.x.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
}

#[test]
fn newton_gth_reaches_published_minimal_solution() {
    let p = ex1(0.49999).unwrap();
    let rep = solve(&p, &opts(Method::NewtonGth)).unwrap();
    assert_eq!(rep.termination, Termination::TolReached);
    let published = [2.4655e-1, 8.2687e-2, 2.1565e-7, 6.7076e-1];
    for i in 0..4 {
        assert!(agrees_4(rep.x[i], published[i]), "{:?}", rep.x);
    }
    assert!(rep.iterations <= 30);
}

#[test]
fn z_halves_at_one_half() {
    let p = ex1(0.5).unwrap();
    let o = SolverOptions {
        maxit: 45,
        tol: 1e-300,
        ..opts(Method::NewtonGth)
    };
    let rep = solve(&p, &o).unwrap();
    assert_eq!(rep.z_history.len(), 46);
    for (k, z) in rep.z_history.iter().enumerate() {
        assert_eq!(*z, 0.5f64.powi(k as i32));
    }
}

#[test]
fn z_tracks_one_minus_two_alpha_sum() {
    let p = ex1(0.3).unwrap();
    let rep = solve(&p, &history(opts(Method::NewtonGth))).unwrap();
    for (x, z) in rep.iterate_history.unwrap().iter().zip(&rep.z_history) {
        let s: f64 = x.iter().sum();
        assert!((z - (1.0 - 0.6 * s)).abs() <= 1e-12);
    }
}

#[test]
fn newton_gth_beats_newton_near_one_half() {
    let gap = DoubleDouble::from(2e-15);
    let p = ex1_with_gap(gap).unwrap();
    let m = reference_solution(&p, ReferenceMode::Minimal).unwrap().x_f64;
    let ng = solve(&p, &opts(Method::NewtonGth)).unwrap();
    let nt = solve(&p, &opts(Method::Newton)).unwrap();
    let e_ng = cw_distance(&ng.x, &m).unwrap().value;
    let e_nt = cw_distance(&nt.x, &m).unwrap().value;
    assert!(e_ng <= 1e-10, "{e_ng:e}");
    assert!(e_nt >= 1e-8, "{e_nt:e}");
}

#[test]
fn one_block_jacobi_is_newton() {
    let p = ex1(0.3).unwrap();
    let one = |m| SolverOptions {
        block_sizes: Some(vec![4]),
        ..history(opts(m))
    };
    let bj = solve(&p, &one(Method::BlockJacobi)).unwrap();
    let nt = solve(&p, &history(opts(Method::Newton))).unwrap();
    let bi = bj.iterate_history.unwrap();
    let ni = nt.iterate_history.unwrap();
    for (a, b) in bi.iter().zip(&ni) {
        for i in 0..4 {
            assert!((a[i] - b[i]).abs() <= 1e-14);
        }
    }
    let v = solve(&p, &one(Method::BlockJacobiGthVariant)).unwrap();
    let g = solve(&p, &history(opts(Method::NewtonGth))).unwrap();
    assert_eq!(v.iterations, g.iterations);
    for (a, b) in v.iterate_history.unwrap().iter().zip(&g.iterate_history.unwrap()) {
        for i in 0..4 {
            assert!((a[i] - b[i]).abs() <= 1e-14);
        }
    }
    assert_eq!(v.z_history, g.z_history);
}

#[test]
fn block_jacobi_is_slower_and_below_newton() {
    let p = ex1(0.3).unwrap();
    let bj = solve(
        &p,
        &SolverOptions {
            block_sizes: Some(vec![2, 2]),
            ..history(opts(Method::BlockJacobi))
        },
    )
    .unwrap();
    let ng = solve(&p, &history(opts(Method::NewtonGth))).unwrap();
    assert_eq!(bj.termination, Termination::TolReached);
    assert!(cw_distance(&bj.x, &ng.x).unwrap().value <= 1e-12);
    assert!(bj.iterations >= ng.iterations);
    let (bi, ni) = (bj.iterate_history.unwrap(), ng.iterate_history.unwrap());
    for k in 0..ni.len().min(bi.len()) {
        for i in 0..4 {
            assert!(bi[k][i] <= ni[k][i] + 1e-14);
        }
        assert!(bj.z_history[k] >= ng.z_history[k] - 1e-14);
    }
}

#[test]
fn variant_is_faster_than_block_jacobi_near_one_half() {
    let p = ex1_with_gap(DoubleDouble::from(2e-15)).unwrap();
    let m = reference_solution(&p, ReferenceMode::Minimal).unwrap().x_f64;
    let two = |meth| SolverOptions {
        block_sizes: Some(vec![2, 2]),
        ..opts(meth)
    };
    let v = solve(&p, &two(Method::BlockJacobiGthVariant)).unwrap();
    let bj = solve(&p, &two(Method::BlockJacobi)).unwrap();
    assert_eq!(v.termination, Termination::TolReached);
    assert!(v.iterations < bj.iterations, "{} vs {}", v.iterations, bj.iterations);
    let ng = solve(&p, &opts(Method::NewtonGth)).unwrap();
    assert!(cw_distance(&v.x, &ng.x).unwrap().value <= 1e-11);
    assert!(cw_distance(&v.x, &m).unwrap().value <= 1e-10);
}

#[test]
fn maxit_is_honored() {
    let p = ex1(0.3).unwrap();
    for m in Method::ALL {
        let o = SolverOptions {
            maxit: 3,
            ..opts(m)
        };
        let rep = solve(&p, &o).unwrap();
        assert_eq!(rep.iterations, 3, "{m}");
        assert_eq!(rep.termination, Termination::Maxit);
        assert_eq!(rep.residual_history.len(), 4);
    }
}

#[test]
fn reference_errors_are_attached() {
    let p = ex1(0.3).unwrap();
    let m = reference_solution(&p, ReferenceMode::Minimal).unwrap().x_f64;
    let o = SolverOptions {
        reference: Some(m),
        ..opts(Method::NewtonGth)
    };
    let rep = solve(&p, &o).unwrap();
    let h = rep.error_history.unwrap();
    assert_eq!(h.e_cw.len(), rep.iterations + 1);
    assert_eq!(h.e_cw[0], 1.0);
    assert!(*h.e_cw.last().unwrap() <= 1e-13);
    assert_eq!(rep.overshoot_steps, Some(0));
    assert!(rep.iterate_history.is_none());
}

#[test]
fn sum_laws() {
    for (mk, alpha) in [(ex1 as fn(f64) -> Result<Problem>, 0.6), (ex1, 0.75), (ex2, 0.9951), (ex2, 0.6)] {
        let p = mk(alpha).unwrap();
        let rep = solve(&p, &opts(Method::NewtonGth)).unwrap();
        let s: f64 = rep.x.iter().sum();
        assert!((s - (1.0 - alpha) / alpha).abs() <= 1e-12, "{alpha}: {s}");
    }
    for alpha in [0.3, 0.49999] {
        for mk in [ex1 as fn(f64) -> Result<Problem>, ex2] {
            let rep = solve(&mk(alpha).unwrap(), &opts(Method::NewtonGth)).unwrap();
            assert!((rep.x.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn divergence_guard() {
    let b = Tensor3::from_entries(1, &[(0, 0, 0, 1.0)]).unwrap();
    let p = Problem::new(vec![1.0], b).unwrap();
    let rep = solve(&p, &opts(Method::FixedPoint)).unwrap();
    assert_eq!(rep.termination, Termination::Diverged);
}
