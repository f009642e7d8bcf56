use std::sync::Arc;

use psimt::geometry::TriangulatedSurface;
use psimt::operators::{ConstantField, DerivativeScheme, QuaternionField, SharedField};
use psimt::probes::fibonacci_shells;
use psimt::reconstruction::{decompose_with, verify_decomposition_with, CutoffProfile, DecomposeOptions, VerifyOptions};
use psimt::structural::make_psi_theta;
use psimt::transforms::{
    cauchy_transform_near, default_probes, equivalence_suite, jump_check, m_psi_star_test, m_psi_test, BorelPompeiu,
    BoundaryField, EquivalenceTolerances, KernelField, TeodorescuOptions,
};
use psimt::{ComplexQuaternion, Error, Point};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::inputs::{
    coarser, load_geometry, probes_for, read_boundary_data, read_points, BuiltinField, Geometry, MeshArgs, ProbeSpec,
};
use crate::report::{optional, point_cells, quaternion_cells, quaternion_columns, Report, Table};
use crate::{BpArgs, CliError, DecomposeArgs, Expect, Global, JumpArgs, MpsiArgs};

fn columns(head: &[&str], quaternions: &[&str], tail: &[&str]) -> Vec<String> {
    head.iter()
        .map(|s| s.to_string())
        .chain(quaternions.iter().flat_map(|p| quaternion_columns(p)))
        .chain(tail.iter().map(|s| s.to_string()))
        .collect()
}

/// Boundary values from a CSV file or from a builtin field sampled at the
/// nodes; the field is returned when it can be resampled on other meshes.
fn boundary_data(
    surface: &TriangulatedSurface,
    file: Option<&std::path::Path>,
    field: BuiltinField,
    theta: f64,
) -> Result<(BoundaryField, Option<SharedField>), CliError> {
    match file {
        Some(path) => Ok((read_boundary_data(path, surface)?, None)),
        None => {
            let f = field.for_surface(theta, surface);
            Ok((BoundaryField::sample(surface, f.clone()), Some(f)))
        }
    }
}

fn stride_nodes(n: usize, stride: usize) -> Result<Vec<usize>, CliError> {
    if stride == 0 {
        return Err(CliError::Config("--stride must be positive".into()));
    }
    Ok((0..n).step_by(stride).collect())
}

fn finest(args: &MeshArgs, need_tets: bool) -> Result<(u32, Geometry), CliError> {
    let level = args.mesh.level(args.level);
    Ok((level, load_geometry(&args.mesh, level, args.tets.as_deref(), need_tets)?))
}

pub fn bp_check(g: &Global, theta: f64, args: &BpArgs, mut report: Report) -> Result<Report, CliError> {
    let tol = g.tol.unwrap_or(0.05);
    let psi = make_psi_theta(theta);
    let (top, fine) = finest(&args.mesh, true)?;
    let levels: Vec<u32> = if args.mesh.mesh.is_builtin() {
        let low = args.min_level.unwrap_or(top.saturating_sub(2).max(1)).min(top);
        (low..=top).collect()
    } else {
        vec![top]
    };
    let field = args.field.for_surface(theta, &fine.surface);
    let (inner, outer) = probes_for(&args.probes, &fine.surface, 20)?;
    let probes: Vec<(Point, bool)> = inner
        .iter()
        .map(|&x| (x, true))
        .chain(outer.iter().map(|&x| (x, false)))
        .collect();
    let sup = BoundaryField::sample(&fine.surface, field.clone())
        .max_norm()
        .max(inner.iter().map(|&x| field.eval(x).norm_c()).fold(0.0, f64::max));

    let mut per_level: Vec<Vec<Option<ComplexQuaternion>>> = Vec::new();
    let mut rows = Vec::new();
    for &level in &levels {
        let geo = if level == top {
            None
        } else {
            Some(load_geometry(&args.mesh.mesh, level, None, true)?)
        };
        let geo = geo.as_ref().unwrap_or(&fine);
        let surface = Arc::new(geo.surface.clone());
        let scheme = DerivativeScheme::for_diameter(surface.diameter());
        let bp = BorelPompeiu::new(surface, geo.tets()?, field.clone(), psi, scheme, TeodorescuOptions::default())?;
        let residuals = probes
            .par_iter()
            .map(|&(x, _)| match bp.residual(x) {
                Ok(r) => Ok(Some(r)),
                Err(Error::TooCloseToSurface { .. }) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let worst = |inside: bool| {
            probes
                .iter()
                .zip(&residuals)
                .filter(|(p, _)| p.1 == inside)
                .filter_map(|(_, r)| r.map(|r| r.norm_c()))
                .fold(0.0, f64::max)
        };
        rows.push(json!({
            "level": geo.level,
            "triangles": geo.surface.num_triangles(),
            "max_interior": worst(true),
            "max_exterior": worst(false),
            "skipped_probes": residuals.iter().filter(|r| r.is_none()).count(),
        }));
        per_level.push(residuals);
    }

    let last = per_level.last().expect("at least one level");
    let skipped = last.iter().filter(|r| r.is_none()).count();
    report.check(skipped == 0, format!("{skipped} probes lie too close to the surface"));
    let max_of = |row: &Value, key: &str| row[key].as_f64().unwrap_or(f64::NAN);
    let top_row = rows.last().expect("at least one level");
    for key in ["max_interior", "max_exterior"] {
        let v = max_of(top_row, key);
        report.check(v <= tol * sup, format!("{key} residual {v:e} > {tol} · sup|f| = {:e}", tol * sup));
        let monotone = rows.windows(2).all(|w| max_of(&w[1], key) < max_of(&w[0], key));
        report.check(monotone, format!("{key} residual does not decrease with the level"));
    }

    let mut table = Table::new(columns(&["x1", "x2", "x3", "inside"], &["r"], &["error_estimate"]));
    let previous = (per_level.len() >= 2).then(|| &per_level[per_level.len() - 2]);
    for (k, &(x, inside)) in probes.iter().enumerate() {
        let mut row = point_cells(x);
        row.push(json!(inside));
        match last[k] {
            Some(r) => row.extend(quaternion_cells(r)),
            None => row.extend(std::iter::repeat(Value::Null).take(8)),
        }
        let estimate = match (last[k], previous.and_then(|p| p[k])) {
            (Some(a), Some(b)) => Some((a - b).norm_c()),
            _ => None,
        };
        row.push(optional(estimate));
        table.push(row);
    }
    report.summary = json!({ "levels": rows, "sup_f": sup, "tolerance": tol });
    report.table = table;
    Ok(report)
}

pub fn jump(g: &Global, theta: f64, args: &JumpArgs, mut report: Report) -> Result<Report, CliError> {
    let tol = g.tol.unwrap_or(0.08);
    let psi = make_psi_theta(theta);
    let (top, fine) = finest(&args.mesh, false)?;
    let s = &fine.surface;
    let (f, field) = boundary_data(s, args.boundary_data.as_deref(), args.field, theta)?;
    let nodes = stride_nodes(s.num_triangles(), args.stride)?;
    let r = jump_check(s, &f, &psi, args.eps_factor, Some(&nodes))?;
    let fnorm = r.f_norm.max(f64::MIN_POSITIVE);

    let coarse = match (&field, coarser(&args.mesh.mesh, top, false)?) {
        (Some(field), Some(c)) => {
            let cf = BoundaryField::sample(&c.surface, field.clone());
            let cr = jump_check(&c.surface, &cf, &psi, args.eps_factor, None)?;
            Some((c, cr))
        }
        _ => None,
    };

    report.check(
        r.max_jump_residual <= tol * fnorm,
        format!("jump residual {:e} > {tol} · |f|", r.max_jump_residual),
    );
    report.check(
        r.max_sum_residual <= tol * fnorm,
        format!("sum residual {:e} > {tol} · |f|", r.max_sum_residual),
    );
    if let Some((_, cr)) = &coarse {
        let floor = 1e-12 * fnorm;
        report.check(
            r.max_jump_residual <= cr.max_jump_residual.max(floor),
            "jump residual grows under refinement",
        );
        report.check(
            r.max_sum_residual < cr.max_sum_residual,
            "sum residual does not shrink under refinement",
        );
    }

    let mut table = Table::new(columns(&["node", "x1", "x2", "x3"], &["jump", "sum"], &["error_estimate"]));
    for (k, &node) in r.nodes.iter().enumerate() {
        let t = s.centroids()[node];
        let jump = (r.k_plus[k] - r.k_minus[k]) - f.values[node];
        let sum = (r.k_plus[k] + r.k_minus[k]) - r.s_value[k];
        let estimate = coarse.as_ref().map(|(c, cr)| {
            let near = c.surface.nearest_nodes(t, 1)[0];
            (r.sum_residuals[k] - cr.sum_residuals[near]).abs()
        });
        let mut row = vec![json!(node)];
        row.extend(point_cells(t));
        row.extend(quaternion_cells(jump));
        row.extend(quaternion_cells(sum));
        row.push(optional(estimate));
        table.push(row);
    }
    report.summary = json!({
        "level": fine.level,
        "triangles": s.num_triangles(),
        "nodes": r.nodes.len(),
        "f_norm": r.f_norm,
        "max_jump_residual": r.max_jump_residual,
        "max_sum_residual": r.max_sum_residual,
        "coarse": coarse.as_ref().map(|(c, cr)| json!({
            "level": c.level,
            "max_jump_residual": cr.max_jump_residual,
            "max_sum_residual": cr.max_sum_residual,
        })),
        "eps_factor": args.eps_factor,
        "tolerance": tol,
    });
    report.table = table;
    Ok(report)
}

pub fn mpsi(g: &Global, theta: f64, args: &MpsiArgs, mut report: Report) -> Result<Report, CliError> {
    let tolerances = EquivalenceTolerances {
        scalar: g.tol.unwrap_or(EquivalenceTolerances::default().scalar),
        ..Default::default()
    };
    let psi = make_psi_theta(theta);
    let (top, fine) = finest(&args.mesh, false)?;
    let s = &fine.surface;
    let (f, field) = boundary_data(s, args.boundary_data.as_deref(), args.field, theta)?;
    let probes: Vec<Point> = match &args.probes {
        ProbeSpec::Builtin => default_probes(s),
        ProbeSpec::Fibonacci(n) => {
            let c = s.volume_centroid();
            let r = s.circumradius(c);
            fibonacci_shells(*n, c, &[0.5 * r, 2.0 * r])
        }
        ProbeSpec::File(path) => read_points(path)?,
    };
    let nodes = stride_nodes(s.num_triangles(), args.stride)?;
    let outer = m_psi_test(s, &f, &psi, &probes, tolerances.scalar)?;
    let on = m_psi_star_test(s, &f, &psi, &nodes, args.eps_factor, tolerances.singular)?;
    let eq = equivalence_suite(s, &f, &psi, &probes, &nodes, args.eps_factor, tolerances)?;
    report.check(eq.unanimous, format!("indicators disagree: {:?}", eq.verdicts));
    let member = eq.verdicts[0];
    if let Some(expect) = args.expect {
        let want = expect == Expect::Member;
        report.check(
            member == want,
            format!("expected {}, found {}", verdict(want), verdict(member)),
        );
    }

    let coarse = match (&field, coarser(&args.mesh.mesh, top, false)?) {
        (Some(field), Some(c)) => {
            let cf = BoundaryField::sample(&c.surface, field.clone());
            Some((c, cf))
        }
        _ => None,
    };
    let values: Vec<(ComplexQuaternion, Option<ComplexQuaternion>)> = probes
        .par_iter()
        .map(|&x| {
            let k = cauchy_transform_near(s, &f, &psi, x);
            let kc = coarse.as_ref().map(|(c, cf)| cauchy_transform_near(&c.surface, cf, &psi, x));
            (k, kc)
        })
        .collect();
    let mut table = Table::new(columns(&["x1", "x2", "x3"], &["k"], &["scalar_modulus", "error_estimate"]));
    for (&x, &(k, kc)) in probes.iter().zip(&values) {
        let mut row = point_cells(x);
        row.extend(quaternion_cells(k));
        row.push(json!(k.scalar().norm()));
        row.push(optional(kc.map(|c| (k - c).norm_c())));
        table.push(row);
    }
    report.summary = json!({
        "verdict": verdict(member),
        "equivalence": eq,
        "off_surface": { "relative": outer.relative, "tolerance": outer.tolerance, "member": outer.member },
        "on_surface": { "relative": on.relative, "tolerance": on.tolerance, "member": on.member },
        "triangles": s.num_triangles(),
        "nodes": nodes.len(),
        "eps_factor": args.eps_factor,
    });
    report.table = table;
    Ok(report)
}

fn verdict(member: bool) -> &'static str {
    if member {
        "member"
    } else {
        "non-member"
    }
}

pub fn decompose(g: &Global, theta: f64, args: &DecomposeArgs, mut report: Report) -> Result<Report, CliError> {
    let tol = g.tol.unwrap_or(0.05);
    let (_, geo) = finest(&args.mesh, true)?;
    let s = &geo.surface;
    let (f, _) = boundary_data(s, args.boundary_data.as_deref(), args.field, theta)?;
    let mut options = DecomposeOptions::for_surface(s);
    if let Some(rho) = args.rho {
        options.params = options.params.with_rho(rho);
    }
    options.params.cutoff = CutoffProfile::parse(&args.cutoff)?;

    let d = match decompose_with(s, geo.tets()?, &f, theta, &options) {
        Ok(d) => d,
        Err(Error::MembershipFailed { value, tolerance }) => {
            report.check(
                false,
                format!("boundary data fail the membership test: {value:e} > {tolerance:e}"),
            );
            report.summary = json!({ "params": options.params, "membership": { "relative": value, "tolerance": tolerance } });
            report.table = Table::new(columns(&["node", "x1", "x2", "x3", "trace_residual"], &[], &["error_estimate"]));
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };

    let nodes = stride_nodes(s.num_triangles(), args.stride)?;
    let (interior, exterior) = match &args.probes {
        ProbeSpec::Builtin => (None, None),
        spec => {
            let (i, e) = probes_for(spec, s, 20)?;
            (Some(i), Some(e))
        }
    };
    let verify = VerifyOptions {
        nodes: Some(nodes),
        interior_probes: interior,
        exterior_probes: exterior,
        ..Default::default()
    };
    let r = verify_decomposition_with(&d, &f, &verify)?;
    report.check(
        r.relative_trace_residual <= tol,
        format!("relative trace residual {:e} > {tol}", r.relative_trace_residual),
    );

    let oracle = (args.boundary_data.is_none() && args.field == BuiltinField::KernelPlusC).then(|| {
        let c = s.volume_centroid();
        let kernel = KernelField::new(make_psi_theta(theta), args.field.pole(c, s.circumradius(c)));
        let constant = ConstantField(BuiltinField::constant());
        let worst = |pts: &[Point], got: &dyn QuaternionField, want: &dyn QuaternionField| {
            pts.iter()
                .map(|&x| (got.eval(x) - want.eval(x)).norm_c() / want.eval(x).norm_c())
                .fold(0.0, f64::max)
        };
        let plus = worst(&r.interior_probes, d.f_plus.as_ref(), &constant);
        let minus = worst(&r.exterior_probes, d.f_minus.as_ref(), &kernel);
        (plus, minus)
    });
    if let Some((plus, minus)) = oracle {
        report.check(plus <= tol, format!("F+ differs from the constant by {plus:e} > {tol}"));
        report.check(minus <= tol, format!("F- differs from the kernel by {minus:e} > {tol}"));
    }

    let mut table = Table::new(columns(&["node", "x1", "x2", "x3", "trace_residual"], &[], &["error_estimate"]));
    for (&node, &res) in r.nodes.iter().zip(&r.trace_residuals) {
        let mut row = vec![json!(node)];
        row.extend(point_cells(s.centroids()[node]));
        row.push(json!(res));
        row.push(Value::Null);
        table.push(row);
    }
    report.summary = json!({
        "params": d.params,
        "membership": d.membership,
        "warnings": d.warnings,
        "volume_nodes": d.volume_nodes,
        "triangles": s.num_triangles(),
        "verification": r,
        "oracle": oracle.map(|(plus, minus)| json!({ "f_plus_relative": plus, "f_minus_relative": minus })),
        "tolerance": tol,
    });
    report.table = table;
    Ok(report)
}
