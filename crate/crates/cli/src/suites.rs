use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use psimt::operators::{
    apply_d_psi, apply_psi_d, laplacian_check, list_special_cases, mt_residual, special_case_map, two_sided_check,
    DerivativeScheme, Polynomial, SharedField, SpecialCase,
};
use psimt::probes::{fibonacci_shells, random_in_shell};
use psimt::quaternion::algebra_suite;
use psimt::structural::{make_psi_theta, verify_structural};
use psimt::transforms::KernelField;
use psimt::{Point, RealQuaternion, StructuralSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::inputs::{read_grid, BuiltinField};
use crate::report::{optional, point_cells, Report, Table};
use crate::{CliError, Global, MtResidualArgs, OperatorArgs, StructuralArgs};

const NAMED_THETAS: [f64; 4] = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2];

pub fn verify_algebra_suite(g: &Global, samples: usize, mut report: Report) -> Result<Report, CliError> {
    if samples == 0 {
        return Err(CliError::Config("--samples must be positive".into()));
    }
    let tol = g.tol.unwrap_or(1e-12);
    let r = algebra_suite(g.seed, samples);
    let mut table = Table::new(["check", "max_error", "tolerance"]);
    for (name, v) in [
        ("associativity", r.associativity),
        ("conjugation", r.conjugation),
        ("norm", r.norm),
        ("inverse", r.inverse),
    ] {
        report.check(v <= tol, format!("{name}: {v:e} > {tol:e}"));
        table.push(vec![json!(name), json!(v), json!(tol)]);
    }
    report.summary = json!({ "algebra": r, "tolerance": tol });
    report.table = table;
    Ok(report)
}

pub fn verify_structural_suite(g: &Global, theta: f64, args: &StructuralArgs, mut report: Report) -> Result<Report, CliError> {
    let tol = g.tol.unwrap_or(1e-14);
    let lap_tol = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut table = Table::new(["theta", "structural_defect"]);
    let mut worst: f64 = 0.0;
    for _ in 0..args.count {
        let t = rng.gen_range(-10.0..10.0);
        let d = verify_structural(&make_psi_theta(t));
        worst = worst.max(d);
        table.push(vec![json!(t), json!(d)]);
    }
    report.check(worst <= tol, format!("structural defect {worst:e} > {tol:e}"));

    let mut thetas = NAMED_THETAS.to_vec();
    if !thetas.contains(&theta) {
        thetas.push(theta);
    }
    let mut lap = Vec::new();
    for &t in &thetas {
        let psi = make_psi_theta(t);
        let mut w: f64 = 0.0;
        for _ in 0..args.polynomials {
            let p = Polynomial::random(&mut rng, 3);
            let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            w = w.max(laplacian_check(&psi, &p, x, DerivativeScheme::Analytic)?.norm_c());
        }
        report.check(w <= lap_tol, format!("laplacian at θ = {t}: {w:e} > {lap_tol:e}"));
        lap.push(json!({ "theta": t, "max_residual": w }));
    }
    let bad = verify_structural(&StructuralSet::from_triple([
        RealQuaternion::I,
        RealQuaternion::I,
        RealQuaternion::K,
    ]));
    report.check(bad >= 0.1, format!("non-structural triple defect {bad:e} < 0.1"));
    report.summary = json!({
        "max_structural_defect": worst,
        "tolerance": tol,
        "laplacian": lap,
        "laplacian_tolerance": lap_tol,
        "non_structural_defect": bad,
    });
    report.table = table;
    Ok(report)
}

pub fn verify_operators_suite(g: &Global, theta: f64, args: &OperatorArgs, mut report: Report) -> Result<Report, CliError> {
    let tol = g.tol.unwrap_or(1e-6);
    if !(args.step > 0.0) {
        return Err(CliError::Config("--step must be positive".into()));
    }
    let psi = make_psi_theta(theta);
    let a = [0.3, -0.1, 0.2];
    let k = KernelField::new(psi, a);
    let scheme = DerivativeScheme::Central { h: args.step };
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut table = Table::new(["x1", "x2", "x3", "left_residual", "right_residual"]);
    let mut worst: f64 = 0.0;
    let mut probes = Vec::with_capacity(args.count);
    for _ in 0..args.count {
        let x = random_in_shell(&mut rng, a, 0.5, 2.0);
        let l = apply_psi_d(&psi, &k, x, scheme)?.norm_c();
        let r = apply_d_psi(&psi, &k, x, scheme)?.norm_c();
        worst = worst.max(l).max(r);
        let mut row = point_cells(x);
        row.extend([json!(l), json!(r)]);
        table.push(row);
        probes.push(x);
    }
    report.check(worst <= tol, format!("kernel hyperholomorphy {worst:e} > {tol:e}"));

    let two = two_sided_check(theta, &k, &probes, DerivativeScheme::Analytic, 1e-10)?;
    report.check(two.two_sided, "kernel fails the two-sided check");

    // Central differences against the analytic derivative at two steps.
    let x = [a[0] + 0.5, a[1] - 0.4, a[2] + 0.3];
    let exact = apply_psi_d(&psi, &k, x, DerivativeScheme::Analytic)?;
    let err = |h: f64| -> Result<f64, CliError> {
        Ok((apply_psi_d(&psi, &k, x, DerivativeScheme::Central { h })? - exact).norm_c())
    };
    let ratio = err(1e-2)? / err(5e-3)?;
    report.check(
        (3.5..=4.5).contains(&ratio),
        format!("central-difference error ratio {ratio:.3} outside [3.5, 4.5]"),
    );
    report.summary = json!({
        "max_kernel_residual": worst,
        "tolerance": tol,
        "two_sided": two,
        "central_difference_ratio": ratio,
    });
    report.table = table;
    Ok(report)
}

pub fn mt_residual_cmd(g: &Global, theta: f64, args: &MtResidualArgs, mut report: Report) -> Result<Report, CliError> {
    let tol = g.tol.unwrap_or(1e-6);
    if !(args.step > 0.0) {
        return Err(CliError::Config("--step must be positive".into()));
    }
    let (field, default_probes): (SharedField, Vec<Point>) = match args.field.strip_prefix("grid:") {
        Some(path) => {
            let grid = read_grid(path.as_ref())?;
            let hi = grid.upper_corner();
            let c: Point = std::array::from_fn(|k| 0.5 * (grid.origin[k] + hi[k]));
            let r = (0..3).map(|k| hi[k] - grid.origin[k]).fold(f64::INFINITY, f64::min) / 4.0;
            (Arc::new(grid), fibonacci_shells(20, c, &[0.5 * r, r]))
        }
        None => {
            let b: BuiltinField = clap::ValueEnum::from_str(&args.field, true)
                .map_err(|_| CliError::Config(format!("unknown field `{}`", args.field)))?;
            (b.build(theta, [0.0; 3], 1.0), fibonacci_shells(20, [0.0; 3], &[0.5, 1.0]))
        }
    };
    let probes = match &args.probes {
        Some(p) => crate::inputs::read_points(p)?,
        None => default_probes,
    };
    let columns: Vec<String> = ["x1", "x2", "x3"]
        .into_iter()
        .map(String::from)
        .chain((0..4).flat_map(|k| [format!("eq{k}_re"), format!("eq{k}_im")]))
        .chain(["error_estimate".to_string()])
        .collect();
    let mut table = Table::new(columns);
    let mut worst: f64 = 0.0;
    for &x in &probes {
        let r = mt_residual(theta, field.as_ref(), x, DerivativeScheme::Central { h: args.step })?;
        let coarse = mt_residual(theta, field.as_ref(), x, DerivativeScheme::Central { h: 2.0 * args.step }).ok();
        let estimate = coarse.map(|c| (0..4).map(|k| (r[k] - c[k]).norm()).fold(0.0, f64::max));
        worst = r.iter().fold(worst, |m, v| m.max(v.norm()));
        let mut row = point_cells(x);
        row.extend(r.iter().flat_map(|c| [json!(c.re), json!(c.im)]));
        row.push(optional(estimate));
        table.push(row);
    }
    report.check(worst <= tol, format!("system residual {worst:e} > {tol:e}"));
    report.summary = json!({ "max_residual": worst, "tolerance": tol, "probes": probes.len() });
    report.table = table;
    Ok(report)
}

pub fn special_cases(g: &Global, mut report: Report) -> Result<Report, CliError> {
    let tol = g.tol.unwrap_or(1e-8);
    let mut table = Table::new(["name", "theta", "theta_value", "map", "kernel_residual"]);
    let probes = fibonacci_shells(12, [0.0; 3], &[0.5, 1.5]);
    let rows = list_special_cases();
    for (row, case) in rows.iter().zip(SpecialCase::ALL) {
        let psi = make_psi_theta(case.theta());
        let (_, mapped) = special_case_map(case, Arc::new(KernelField::new(psi, [0.2, 0.0, -0.1])));
        let mut worst: f64 = 0.0;
        for &x in &probes {
            let r = case.classical_residuals(&mapped, x, DerivativeScheme::Analytic)?;
            worst = r.iter().fold(worst, |m, v| m.max(v.norm()));
        }
        report.check(worst <= tol, format!("{}: kernel residual {worst:e} > {tol:e}", row.name));
        table.push(vec![
            json!(row.name),
            json!(row.theta),
            json!(row.theta_value),
            json!(row.map),
            json!(worst),
        ]);
    }
    report.summary = json!({ "cases": rows, "tolerance": tol });
    report.table = table;
    Ok(report)
}
