//! One function per subcommand, each returning a [`RunReport`].

use std::f64::consts::PI;

use potentia_core::brownian::{
    default_test_functions, greens_constant_fit, occupation_estimate, MCConfig, TestFunction,
};
use potentia_core::domain::{hansen_threshold, largest_arc, StarDomainSpec};
use potentia_core::greens::{greens_disk_closed, greens_disk_series, removable_singularity_probe};
use potentia_core::hardy::{
    hardy_dichotomy, identity_map, integral_mean, koebe_map, wedge_map, ConformalMapSpec, HardyVerdict, RatioLadder,
};
use potentia_core::pl::{
    boundary_bound, boundary_sup, geometric_radii, growth_fit, pl_verdict, sharpness_check, sharpness_function,
    AnalyticFunctionSpec, PlConclusion, PlDomain, VerdictConfig,
};
use potentia_core::products::{
    cosh_product, mirror_closed_form, mirror_product, sin_cos_products, sinh_product, ProductParams,
};
use potentia_core::{Complex64, DiskPoint, Error, PuncturedDiskPoint, Result};

use crate::args::{
    Command, DomainKind, FunctionArgs, FunctionKind, GreensCommand, HardyCommand, Identity, MapArgs, MapKind, McArgs,
    McCommand, PlCommand, ProductsCommand, RayArgs,
};
use crate::report::{Cell, RunReport, Table};

pub fn execute(command: &Command) -> Result<RunReport> {
    match command {
        Command::Greens(c) => greens(c),
        Command::Hardy(c) => hardy(c),
        Command::Pl(c) => pl(c),
        Command::Products(c) => products(c),
        Command::Mc(c) => mc(c),
    }
}

fn point(report: RunReport, name: &str, z: Complex64) -> RunReport {
    report
        .param(&format!("{name}_re"), z.re)
        .param(&format!("{name}_im"), z.im)
}

fn greens(command: &GreensCommand) -> Result<RunReport> {
    match *command {
        GreensCommand::Closed { a, z } => {
            let value = greens_disk_closed(DiskPoint::from_complex(a)?, DiskPoint::from_complex(z)?)?;
            let mut t = Table::new(&["value"]);
            t.push(vec![value.into()]);
            let report = point(RunReport::new("greens closed", t), "a", a);
            Ok(point(report, "z", z))
        }
        GreensCommand::Series { a, z, terms } => {
            let (pa, pz) = (
                PuncturedDiskPoint::from_complex(a)?,
                PuncturedDiskPoint::from_complex(z)?,
            );
            let series = greens_disk_series(pa, pz, terms)?;
            let closed = greens_disk_closed(DiskPoint::from_complex(a)?, DiskPoint::from_complex(z)?)?;
            let diff = (series.value - closed).abs();
            let mut t = Table::new(&["terms", "value", "tail_bound", "closed_form", "abs_diff"]);
            t.push(vec![
                terms.into(),
                series.value.into(),
                series.tail_bound.into(),
                closed.into(),
                diff.into(),
            ]);
            let report = point(RunReport::new("greens series", t), "a", a);
            Ok(point(report, "z", z).param("terms", terms).verdict(
                diff <= series.tail_bound,
                format!("series within its tail bound ({diff:.3e} <= {:.3e})", series.tail_bound),
            ))
        }
        GreensCommand::Probe {
            a,
            ref radii,
            terms,
            tolerance,
        } => {
            let values = removable_singularity_probe(PuncturedDiskPoint::from_complex(a)?, radii, terms)?;
            let limit = -a.norm().ln();
            let da = DiskPoint::from_complex(a)?;
            let mut t = Table::new(&["r", "value", "closed_form", "limit", "abs_error"]);
            let mut errors = Vec::with_capacity(radii.len());
            let mut worst_series = 0.0f64;
            for (&r, &v) in radii.iter().zip(&values) {
                let closed = greens_disk_closed(da, DiskPoint::new(r, 0.0)?)?;
                let e = (v - limit).abs();
                worst_series = worst_series.max((v - closed).abs());
                errors.push(e);
                t.push(vec![r.into(), v.into(), closed.into(), limit.into(), e.into()]);
            }
            let last = errors.last().copied().unwrap_or(f64::INFINITY);
            let shrinking = errors.windows(2).all(|w| w[1] <= w[0]);
            Ok(point(RunReport::new("greens probe", t), "a", a)
                .param("terms", terms)
                .param("tolerance", tolerance)
                .verdict(
                    worst_series <= tolerance,
                    format!("series matches the closed form at every radius ({worst_series:.3e} <= {tolerance:.1e})"),
                )
                .verdict(
                    shrinking && last <= tolerance,
                    format!(
                        "values approach ln(1/|a|) as r -> 0 ({last:.3e} <= {tolerance:.1e} at the smallest radius)"
                    ),
                ))
        }
    }
}

fn build_map(args: &MapArgs) -> Result<ConformalMapSpec> {
    match args.map {
        MapKind::Identity => Ok(identity_map()),
        MapKind::Koebe => Ok(koebe_map()),
        MapKind::Wedge => wedge_map(args.alpha),
    }
}

fn map_params(report: RunReport, args: &MapArgs, map: &ConformalMapSpec) -> RunReport {
    let report = report.param("map", map.name.as_str());
    let report = if args.map == MapKind::Wedge {
        report.param("alpha", args.alpha)
    } else {
        report
    };
    report.param("p_star", map.known_threshold)
}

fn hardy(command: &HardyCommand) -> Result<RunReport> {
    match command {
        HardyCommand::Mean { map, p, r, nodes } => {
            let spec = build_map(map)?;
            let est = integral_mean(&spec, *p, *r, *nodes)?;
            let mut t = Table::new(&["p", "r", "nodes", "integral_mean", "norm_estimate"]);
            let mean = if est.overflow { f64::INFINITY } else { est.integral_mean };
            let norm = if est.overflow { f64::INFINITY } else { est.norm_estimate };
            t.push(vec![
                est.p.into(),
                est.r.into(),
                est.node_count.into(),
                mean.into(),
                norm.into(),
            ]);
            Ok(map_params(RunReport::new("hardy mean", t), map, &spec).param("nodes_per_arc", *nodes))
        }
        HardyCommand::Threshold { map, p, ladder, nodes } => {
            let spec = build_map(map)?;
            let ladder = RatioLadder {
                exponents: ladder.clone(),
                nodes_per_arc: *nodes,
                ..RatioLadder::default()
            };
            let rep = hardy_dichotomy(&spec, *p, &ladder)?;
            let mut t = Table::new(&["j", "r", "mean", "ratio", "increment_ratio"]);
            for (i, (&j, (&r, &m))) in ladder
                .exponents
                .iter()
                .zip(rep.radii.iter().zip(&rep.means))
                .enumerate()
            {
                let ratio = if i >= 1 {
                    Cell::from(rep.ratios[i - 1])
                } else {
                    Cell::from("-")
                };
                let inc = if i >= 2 {
                    Cell::from(rep.increment_ratios[i - 2])
                } else {
                    Cell::from("-")
                };
                t.push(vec![Cell::Integer(j as i64), r.into(), m.into(), ratio, inc]);
            }
            let p_star = spec.known_threshold;
            let expected = if *p < p_star {
                Some(HardyVerdict::Converging)
            } else if *p > p_star {
                Some(HardyVerdict::Diverging)
            } else {
                None
            };
            let report = map_params(RunReport::new("hardy threshold", t), map, &spec)
                .param("p", *p)
                .param("verdict", rep.verdict.to_string());
            Ok(match expected {
                Some(e) => report.verdict(
                    rep.verdict == e,
                    format!(
                        "ratio test says {} at p = {p} (expected {e} for p* = {p_star})",
                        rep.verdict
                    ),
                ),
                None => report,
            })
        }
        HardyCommand::Arc {
            domain,
            alpha,
            sigma,
            r,
            r_max,
            grid,
        } => {
            let spec = match domain {
                DomainKind::Wedge => {
                    let a = *alpha;
                    if !(a > 0.0 && a <= 2.0 * PI) {
                        return Err(Error::InvalidParameter(format!(
                            "wedge angle must lie in (0, 2π], got {a}"
                        )));
                    }
                    StarDomainSpec::new(
                        format!("wedge of opening {a}"),
                        move |t: f64| if t.abs() < a / 2.0 { f64::INFINITY } else { 0.0 },
                        *sigma,
                    )?
                }
                DomainKind::Plane => StarDomainSpec::new("whole plane", |_| f64::INFINITY, *sigma)?,
                DomainKind::Limacon => {
                    StarDomainSpec::new("limaçon 1 + cos(θ)/2", |t: f64| 1.0 + 0.5 * t.cos(), *sigma)?
                }
            };
            let arc = largest_arc(&spec, *r, *grid)?;
            let threshold = hansen_threshold(&spec, *r_max, *grid)?;
            let mut t = Table::new(&["r", "largest_arc", "threshold"]);
            t.push(vec![(*r).into(), arc.into(), threshold.into()]);
            let report = RunReport::new("hardy arc", t)
                .param("domain", spec.description())
                .param("sigma", *sigma)
                .param("r_max", *r_max)
                .param("grid", *grid);
            Ok(match domain {
                DomainKind::Wedge => {
                    let c = sigma.cos();
                    let expected = PI / (alpha * c * c);
                    let resolution = 2.0 * 2.0 * PI / *grid as f64;
                    let tolerance = expected * resolution / alpha;
                    report.verdict(
                        (threshold - expected).abs() <= tolerance,
                        format!("threshold matches π/(α cos²σ) = {expected:.9} within {tolerance:.1e}"),
                    )
                }
                _ => report,
            })
        }
    }
}

fn build_function(args: &FunctionArgs) -> Result<AnalyticFunctionSpec> {
    let domain = PlDomain::wedge(args.alpha)?;
    Ok(match args.function {
        FunctionKind::ExpPower => sharpness_function(args.alpha)?,
        FunctionKind::Exp => {
            AnalyticFunctionSpec::new("exp(z)", |z: Complex64| z.exp(), domain).with_log_modulus(|z| z.re)
        }
        FunctionKind::Inverse => AnalyticFunctionSpec::new("1/(1+z)", |z: Complex64| 1.0 / (1.0 + z), domain),
        FunctionKind::Identity => AnalyticFunctionSpec::new("z", |z| z, domain),
        FunctionKind::Poly => AnalyticFunctionSpec::new("z^2 + 1", |z: Complex64| z * z + 1.0, domain),
    })
}

fn function_params(report: RunReport, f: &AnalyticFunctionSpec, alpha: f64) -> RunReport {
    report.param("function", f.name.as_str()).param("alpha", alpha)
}

fn ray_radii(ray: &RayArgs) -> Result<Vec<f64>> {
    geometric_radii(ray.r_min, ray.r_max, ray.count)
}

fn pl(command: &PlCommand) -> Result<RunReport> {
    match command {
        PlCommand::Boundary { function, samples, cap } => {
            let f = build_function(function)?;
            let sup = boundary_sup(&f, *samples, *cap)?;
            let mut t = Table::new(&["cap", "boundary_sup"]);
            t.push(vec![(*cap).into(), sup.into()]);
            Ok(function_params(RunReport::new("pl boundary", t), &f, function.alpha).param("samples", *samples))
        }
        PlCommand::Growth { function, ray } => {
            let f = build_function(function)?;
            let fit = growth_fit(&f, ray.ray, &ray_radii(ray)?)?;
            let mut t = Table::new(&["p", "c", "residual", "bounded"]);
            t.push(vec![
                fit.p.into(),
                fit.c.into(),
                fit.residual.into(),
                fit.bounded.into(),
            ]);
            Ok(function_params(RunReport::new("pl growth", t), &f, function.alpha)
                .param("p_star", f.domain.p_star()?)
                .param("ray", ray.ray)
                .param("r_min", ray.r_min)
                .param("r_max", ray.r_max)
                .param("count", ray.count))
        }
        PlCommand::Verdict {
            function,
            ray,
            samples,
            caps,
            margin,
            rel_growth,
            interior_radius,
        } => {
            let f = build_function(function)?;
            let bound = boundary_bound(&f, *samples, caps, *rel_growth)?;
            let fit = growth_fit(&f, ray.ray, &ray_radii(ray)?)?;
            let p_star = f.domain.p_star()?;
            let config = VerdictConfig {
                margin: *margin,
                interior_radius: *interior_radius,
                ..VerdictConfig::default()
            };
            let v = pl_verdict(&f, bound.k, &fit, p_star, ray.ray, &config)?;
            let mut t = Table::new(&["k", "p_fit", "p_star", "interior_max", "corroborated", "conclusion"]);
            t.push(vec![
                v.k.into(),
                v.p_fit.into(),
                v.p_star.into(),
                v.interior_max.into(),
                v.corroborated.into(),
                v.conclusion.to_string().into(),
            ]);
            let report = function_params(RunReport::new("pl verdict", t), &f, function.alpha)
                .param("samples", *samples)
                .param("caps", caps.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
                .param("margin", *margin)
                .param("rel_growth", *rel_growth)
                .param("interior_radius", *interior_radius);
            let consistent = v.conclusion != PlConclusion::BoundedByK || (v.corroborated && v.p_fit < v.p_star);
            Ok(report.verdict(
                consistent,
                format!("conclusion {} is consistent with the samples", v.conclusion),
            ))
        }
        PlCommand::Sharpness { alpha, samples, cap } => {
            let rep = sharpness_check(*alpha, *samples, *cap)?;
            let p_star = rep.verdict.p_star;
            let mut t = Table::new(&[
                "alpha",
                "boundary_sup",
                "p_fit",
                "p_star",
                "conclusion",
                "axis_radius",
                "axis_value",
            ]);
            t.push(vec![
                rep.alpha.into(),
                rep.boundary_sup.into(),
                rep.fit.p.into(),
                p_star.into(),
                rep.verdict.conclusion.to_string().into(),
                rep.axis_radius.into(),
                rep.axis_value.into(),
            ]);
            Ok(RunReport::new("pl sharpness", t)
                .param("alpha", *alpha)
                .param("samples", *samples)
                .param("cap", *cap)
                .verdict(
                    (rep.boundary_sup - 1.0).abs() <= 1e-9,
                    "boundary sup equals 1 within 1e-9",
                )
                .verdict(
                    (rep.fit.p / p_star - 1.0).abs() < 0.05,
                    format!("growth order {:.6} within 5% of π/α", rep.fit.p),
                )
                .verdict(
                    rep.verdict.conclusion == PlConclusion::HypothesisViolated,
                    "verdict is hypothesis-violated",
                )
                .verdict(
                    (rep.axis_value / 1e6 - 1.0).abs() <= 1e-9,
                    "|f| reaches 1e6 on the axis at (ln 1e6)^{α/π}",
                ))
        }
    }
}

fn products(command: &ProductsCommand) -> Result<RunReport> {
    let ProductsCommand::Check {
        identity,
        r,
        c,
        b,
        terms,
    } = *command;
    let n = terms;
    let (name, result, exact) = match identity {
        Identity::Sinh => ("sinh(r)", sinh_product(r, n)?, r.sinh()),
        Identity::Cosh => ("cosh(r)", cosh_product(r, n)?, r.cosh()),
        Identity::Sin => ("sin(r)", sin_cos_products(r, n)?.0, r.sin()),
        Identity::Cos => ("cos(r)", sin_cos_products(r, n)?.1, r.cos()),
        Identity::Mirror => {
            let params = ProductParams::new(b, r, c)?;
            (
                "mirror(b, r, c)",
                mirror_product(params, n)?,
                mirror_closed_form(params),
            )
        }
    };
    let err = (result.value - exact).abs();
    let bound = result.value_error_bound();
    let mut t = Table::new(&[
        "terms",
        "product",
        "uncorrected",
        "exact",
        "abs_error",
        "error_bound",
        "near_zero",
    ]);
    t.push(vec![
        n.into(),
        result.value.into(),
        result.uncorrected().into(),
        exact.into(),
        err.into(),
        bound.into(),
        result.near_zero.into(),
    ]);
    let report = RunReport::new("products check", t)
        .param("identity", name)
        .param("r", r);
    let report = if identity == Identity::Mirror {
        report.param("b", b).param("c", c)
    } else {
        report
    };
    Ok(report.param("terms", n).verdict(
        err <= bound,
        format!("product within its error bound ({err:.3e} <= {bound:.3e})"),
    ))
}

fn parse_test_function(spec: &str) -> Result<TestFunction> {
    match spec {
        "unit" => Ok(TestFunction::unit()),
        "zero" => Ok(TestFunction::zero()),
        _ => {
            let radius = spec
                .strip_prefix("disk:")
                .and_then(|r| r.parse::<f64>().ok())
                .filter(|r| *r > 0.0 && r.is_finite())
                .ok_or_else(|| {
                    Error::InvalidParameter(format!("--f must be unit, zero or disk:<radius>, got `{spec}`"))
                })?;
            Ok(TestFunction::disk_indicator(radius))
        }
    }
}

/// Exact `E ∫₀^τ f(B_s) ds` where a closed form is available, and the
/// default relative tolerance for comparing against it.
fn expected_occupation(spec: &str, start: Complex64) -> Option<(f64, f64)> {
    match spec {
        "unit" => Some(((1.0 - start.norm_sqr()) / 2.0, 0.02)),
        "zero" => Some((0.0, 0.0)),
        _ if start == Complex64::new(0.0, 0.0) => {
            let rho = spec.strip_prefix("disk:")?.parse::<f64>().ok()?.min(1.0);
            let value = if rho >= 1.0 {
                0.5
            } else {
                rho * rho * (1.0 / rho).ln() + rho * rho / 2.0
            };
            Some((value, 0.03))
        }
        _ => None,
    }
}

fn mc_config(args: &McArgs) -> Result<MCConfig> {
    MCConfig::new(args.paths, args.dt, args.seed, DiskPoint::from_complex(args.start)?)
}

fn mc_params(report: RunReport, args: &McArgs) -> RunReport {
    point(report, "start", args.start)
        .param("paths", args.paths)
        .param("dt", args.dt)
        .param("seed", args.seed)
}

fn mc(command: &McCommand) -> Result<RunReport> {
    match command {
        McCommand::Occupation { mc, f, tolerance } => {
            let function = parse_test_function(f)?;
            let est = occupation_estimate(&mc_config(mc)?, &function)?;
            let expected = expected_occupation(f, mc.start);
            let mut t = Table::new(&["function", "mean", "stderr", "expected"]);
            let expected_cell = expected.map_or(Cell::from("-"), |(e, _)| Cell::from(e));
            t.push(vec![
                est.name.as_str().into(),
                est.mean.into(),
                est.stderr.into(),
                expected_cell,
            ]);
            let report = mc_params(RunReport::new("mc occupation", t), mc).param("f", f.as_str());
            Ok(match expected {
                Some((e, default_tol)) => {
                    let rel = tolerance.unwrap_or(default_tol);
                    let allowed = rel * e.abs() + 3.0 * est.stderr;
                    let diff = (est.mean - e).abs();
                    report.param("tolerance", rel).verdict(
                        diff <= allowed,
                        format!("mean within {rel} relative + 3 stderr of {e:.7} ({diff:.3e} <= {allowed:.3e})"),
                    )
                }
                None => report,
            })
        }
        McCommand::Fit { mc, tolerance } => {
            let fit = greens_constant_fit(&mc_config(mc)?, &default_test_functions())?;
            let mut t = Table::new(&["quantity", "value", "stderr", "area_integral"]);
            for (e, i) in fit.estimates.iter().zip(&fit.area_integrals) {
                t.push(vec![
                    e.name.as_str().into(),
                    e.mean.into(),
                    e.stderr.into(),
                    (*i).into(),
                ]);
            }
            t.push(vec!["kappa".into(), fit.kappa.into(), "-".into(), "-".into()]);
            t.push(vec![
                "gram_determinant".into(),
                fit.gram_determinant.into(),
                "-".into(),
                "-".into(),
            ]);
            let rel = (fit.kappa * PI - 1.0).abs();
            let mut report = mc_params(RunReport::new("mc fit", t), mc)
                .param("tolerance", *tolerance)
                .verdict(
                    rel <= *tolerance,
                    format!("kappa = {:.6} within {tolerance} of 1/π", fit.kappa),
                );
            if fit.ill_conditioned {
                report = report.verdict(false, "test functions are nearly linearly dependent");
            }
            Ok(report)
        }
    }
}
