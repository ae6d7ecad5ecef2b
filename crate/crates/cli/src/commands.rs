//! Subcommand implementations. Each returns a [`Report`] rendered by the caller.

use serde_json::{json, Value};

use koornwinder::exact::rational::{format_rational, powi, to_f64};
use koornwinder::exact::{int, ExactMatrix, Rational};
use koornwinder::grassmann::{
    param_map, radial_consistency, spherical_restriction, GrassmannSetup,
};
use koornwinder::operator::{eigenvalue_c, eigenvalue_collision, operator_matrix, ParamSet};
use koornwinder::reflection::{
    build_j, build_r, build_variants, hecke_residual, reflection_residual, yang_baxter_residual,
};
use koornwinder::solver::{verify_eigen, KoornwinderPoly};
use koornwinder::torus::{gram_of, ConvergenceRow, NumericParams, QuadratureConfig};
use koornwinder::weights::{dominant_weights_up_to, DominantWeight};

use crate::args::JobConfig;
use crate::cache::{solve, Cache};
use crate::CliError;

/// Largest relative Gram off-diagonal accepted as orthogonal.
pub const OFFDIAG_TOL: f64 = 1e-8;
/// Largest entry change accepted when `N` and `M` are doubled.
pub const CONVERGENCE_TOL: f64 = 1e-10;
/// Weight size used when no weights are given explicitly.
const DEFAULT_MAX_SIZE: i64 = 3;

pub struct Report {
    pub json: Value,
    /// CSV records, header first.
    pub csv: Vec<Vec<String>>,
    pub pretty: String,
    pub pass: bool,
}

/// Seventeen significant digits.
pub fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn matrix_json(m: &ExactMatrix) -> Value {
    serde_json::to_value(m).expect("matrices serialize")
}

/// The weights of the job and their common length.
fn weights(job: &JobConfig) -> Result<(usize, Vec<DominantWeight>), CliError> {
    if job.lambdas.is_empty() {
        let l = job
            .l
            .ok_or_else(|| usage("give --lambda or --l to choose the weights"))?;
        if l == 0 {
            return Err(usage("--l must be positive"));
        }
        return Ok((l, dominant_weights_up_to(l, DEFAULT_MAX_SIZE)));
    }
    let l = job.lambdas[0].len();
    if let Some(bad) = job.lambdas.iter().find(|w| w.len() != l) {
        return Err(usage(format!(
            "weights {} and {bad} have different lengths",
            job.lambdas[0]
        )));
    }
    if job.l.is_some_and(|given| given != l) {
        return Err(usage(format!(
            "--l {} does not match weight length {l}",
            job.l.unwrap()
        )));
    }
    Ok((l, job.lambdas.clone()))
}

fn setup(job: &JobConfig, l: usize) -> Result<GrassmannSetup, CliError> {
    let n = job.n.ok_or_else(|| usage("--n is required"))?;
    let q = job.q.clone().ok_or_else(|| usage("--q is required"))?;
    let s = job.s.clone().unwrap_or_else(|| int(1));
    let u = job.u.clone().unwrap_or_else(|| int(1));
    Ok(GrassmannSetup::new(n, l, q, s, u)?)
}

/// Parameters from `--q --t --a --b --c --d`, or mapped from `--n --q --s --u`.
fn params(job: &JobConfig, l: usize) -> Result<ParamSet, CliError> {
    if job.n.is_some() {
        if job.t.is_some()
            || job.a.is_some()
            || job.b.is_some()
            || job.c.is_some()
            || job.d.is_some()
        {
            return Err(usage(
                "--n maps (q, s, u) to parameters; drop --t/--a/--b/--c/--d",
            ));
        }
        return Ok(param_map(&setup(job, l)?)?);
    }
    let req = |x: &Option<Rational>, name: &str| {
        x.clone()
            .ok_or_else(|| usage(format!("--{name} is required")))
    };
    let opt = |x: &Option<Rational>| x.clone().unwrap_or_else(|| int(0));
    Ok(ParamSet::new(
        req(&job.q, "q")?,
        req(&job.t, "t")?,
        opt(&job.a),
        opt(&job.b),
        opt(&job.c),
        opt(&job.d),
    )?)
}

fn boundary_warnings(p: &ParamSet) -> Vec<String> {
    if p.is_boundary() {
        let msg = "abcd = -q: parameters sit on the edge of the admissible range".to_string();
        log::warn!("{msg}");
        vec![msg]
    } else {
        Vec::new()
    }
}

fn open_cache(job: &JobConfig) -> Result<Option<Cache>, CliError> {
    job.cache.as_deref().map(Cache::open).transpose()
}

pub fn cmd_poly(job: &JobConfig) -> Result<Report, CliError> {
    let (l, lams) = weights(job)?;
    let p = params(job, l)?;
    let warnings = boundary_warnings(&p);
    let cache = open_cache(job)?;
    let mut polys: Vec<KoornwinderPoly> = Vec::new();
    let mut verified = Vec::new();
    for lam in &lams {
        let poly = solve(lam, &p, cache.as_ref())?;
        verified.push(verify_eigen(&poly)?.is_zero());
        polys.push(poly);
    }
    let pass = verified.iter().all(|&v| v);
    let mut csv = vec![vec!["lambda".into(), "mu".into(), "coefficient".into()]];
    let mut pretty = String::new();
    for (poly, ok) in polys.iter().zip(&verified) {
        for (mu, c) in poly.coeffs.terms().rev() {
            csv.push(vec![
                poly.lam.to_string(),
                mu.to_string(),
                format_rational(c),
            ]);
        }
        pretty.push_str(&format!(
            "P{} = {}\n  eigenvalue {}, eigen-equation {}\n",
            poly.lam,
            poly.coeffs,
            format_rational(&poly.eigenvalue()),
            if *ok { "PASS" } else { "FAIL" }
        ));
    }
    let json = json!({
        "checks": ["eigen-equation"],
        "params": p,
        "polynomials": polys
            .iter()
            .zip(&verified)
            .map(|(poly, ok)| json!({
                "polynomial": poly,
                "eigenvalue": format_rational(&poly.eigenvalue()),
                "eigen_residual_zero": ok,
            }))
            .collect::<Vec<_>>(),
        "warnings": warnings,
        "pass": pass,
    });
    Ok(Report {
        json,
        csv,
        pretty,
        pass,
    })
}

pub fn cmd_spectrum(job: &JobConfig) -> Result<Report, CliError> {
    let (l, lams) = weights(job)?;
    let p = params(job, l)?;
    let mut warnings = boundary_warnings(&p);
    let mut rows = Vec::new();
    let mut csv = vec![vec![
        "lambda".into(),
        "eigenvalue".into(),
        "eigenvalue_float".into(),
        "diagonal_matches".into(),
    ]];
    let mut pretty = String::new();
    let mut pass = true;
    for lam in &lams {
        let e = eigenvalue_c(lam, &p);
        let op = operator_matrix(lam, &p)?;
        let matches = op
            .basis
            .iter()
            .zip(op.diagonal())
            .all(|(mu, d)| d == eigenvalue_c(mu, &p));
        pass &= matches;
        let collision = eigenvalue_collision(lam, &p);
        if let Some(mu) = &collision {
            let msg = format!("eigenvalue of {lam} coincides with that of {mu}");
            log::warn!("{msg}");
            warnings.push(msg);
        }
        csv.push(vec![
            lam.to_string(),
            format_rational(&e),
            f17(to_f64(&e)),
            matches.to_string(),
        ]);
        pretty.push_str(&format!(
            "{lam}: {} ({}) diagonal {}\n",
            format_rational(&e),
            f17(to_f64(&e)),
            if matches { "PASS" } else { "FAIL" }
        ));
        rows.push(json!({
            "lambda": lam,
            "eigenvalue": format_rational(&e),
            "eigenvalue_float": to_f64(&e),
            "diagonal_matches": matches,
            "collision": collision,
        }));
    }
    let json = json!({
        "checks": ["eigenvalue-formula", "triangularity"],
        "params": p,
        "spectrum": rows,
        "warnings": warnings,
        "pass": pass,
    });
    Ok(Report {
        json,
        csv,
        pretty,
        pass,
    })
}

pub fn cmd_gram(job: &JobConfig) -> Result<Report, CliError> {
    let (l, lams) = weights(job)?;
    let p = params(job, l)?;
    let numeric = NumericParams::from_exact(&p)?;
    let defaults = QuadratureConfig::default_for(l);
    let cfg = QuadratureConfig::new(
        job.trunc.unwrap_or(defaults.truncation),
        job.grid.unwrap_or(defaults.grid),
    )?;
    let cache = open_cache(job)?;
    let polys = lams
        .iter()
        .map(|lam| solve(lam, &p, cache.as_ref()).map(|k| k.coeffs))
        .collect::<Result<Vec<_>, _>>()?;
    let g = gram_of(&polys, &numeric, &cfg)?;
    let g2 = gram_of(&polys, &numeric, &cfg.doubled())?;
    let rel = g.max_relative_offdiag();
    let delta = g.max_abs_delta(&g2);
    let pass = g.diagonal_positive() && rel < OFFDIAG_TOL && delta < CONVERGENCE_TOL;
    let convergence: Vec<ConvergenceRow> = [(&cfg, &g), (&cfg.doubled(), &g2)]
        .iter()
        .map(|(c, m)| ConvergenceRow {
            truncation: c.truncation,
            grid: c.grid,
            max_offdiag: m.max_abs_offdiag(),
            skipped_points: m.skipped_points,
        })
        .collect();

    let labels: Vec<String> = lams.iter().map(|w| w.to_string()).collect();
    let mut csv = vec![std::iter::once("lambda".to_string())
        .chain(labels.iter().cloned())
        .collect()];
    for (label, row) in labels.iter().zip(&g.entries) {
        csv.push(
            std::iter::once(label.clone())
                .chain(row.iter().map(|&x| f17(x)))
                .collect(),
        );
    }
    let mut pretty = format!("N = {}, M = {}\n", cfg.truncation, cfg.grid);
    for (label, row) in labels.iter().zip(&g.entries) {
        let cells: Vec<String> = row.iter().map(|&x| format!("{:>24}", f17(x))).collect();
        pretty.push_str(&format!("{label:>10} {}\n", cells.join(" ")));
    }
    pretty.push_str(&format!(
        "max relative off-diagonal {}\nself-convergence delta {}\nskipped points {}\n{}\n",
        f17(rel),
        f17(delta),
        g.skipped_points,
        if pass { "PASS" } else { "FAIL" }
    ));
    let json = json!({
        "checks": ["torus-orthogonality"],
        "params": p,
        "lambdas": lams,
        "N": cfg.truncation,
        "M": cfg.grid,
        "gram": g.entries,
        "max_relative_offdiag": rel,
        "self_convergence_delta": delta,
        "skipped_points": g.skipped_points,
        "convergence": convergence,
        "pass": pass,
    });
    Ok(Report {
        json,
        csv,
        pretty,
        pass,
    })
}

pub fn cmd_reflect(job: &JobConfig) -> Result<Report, CliError> {
    let n = job.n.ok_or_else(|| usage("--n is required"))?;
    let l = job.l.ok_or_else(|| usage("--l is required"))?;
    let q = job.q.clone().ok_or_else(|| usage("--q is required"))?;
    let s = job.s.clone().ok_or_else(|| usage("--s is required"))?;
    let r = build_r(n, &q)?;
    let j = build_j(n, l, &s)?;
    let variants = build_variants(&r)?;
    let refl = reflection_residual(&j.entries, &r)?.max_abs_entry();
    let yb = yang_baxter_residual(&r)?.max_abs_entry();
    let hecke = hecke_residual(&r)?.max_abs_entry();
    let inverse_ok = r.entries.mul(&variants.minus)? == ExactMatrix::identity(n * n);
    let checks = [
        ("reflection-equation", refl.clone()),
        ("yang-baxter", yb.clone()),
        ("hecke", hecke.clone()),
    ];
    let pass = checks.iter().all(|(_, v)| v == &int(0)) && inverse_ok;
    let mut csv = vec![vec![
        "check".into(),
        "residual_max".into(),
        "verdict".into(),
    ]];
    let mut pretty = String::new();
    for (name, v) in &checks {
        let verdict = if v == &int(0) { "PASS" } else { "FAIL" };
        csv.push(vec![name.to_string(), format_rational(v), verdict.into()]);
        pretty.push_str(&format!(
            "{verdict} {name} residual {}\n",
            format_rational(v)
        ));
    }
    let json = json!({
        "checks": ["reflection-equation", "yang-baxter", "hecke"],
        "n": n,
        "l": l,
        "q": format_rational(&q),
        "s": format_rational(&s),
        "J": matrix_json(&j.entries),
        "reflection_residual_max": format_rational(&refl),
        "yang_baxter_residual_max": format_rational(&yb),
        "hecke_residual_max": format_rational(&hecke),
        "inverse_exact": inverse_ok,
        "pass": pass,
    });
    Ok(Report {
        json,
        csv,
        pretty,
        pass,
    })
}

pub fn cmd_grassmann(job: &JobConfig) -> Result<Report, CliError> {
    let l = match (job.l, job.lambdas.first()) {
        (Some(l), _) => l,
        (None, Some(w)) => w.len(),
        (None, None) => return Err(usage("--l is required")),
    };
    let st = setup(job, l)?;
    let mus = if job.lambdas.is_empty() {
        dominant_weights_up_to(l, DEFAULT_MAX_SIZE)
    } else {
        weights(job)?.1
    };
    let p = param_map(&st)?;
    let expected = powi(st.q(), 4 + 2 * (st.n() as i64 - 2 * l as i64));
    let abcd_ok = p.abcd() == expected;
    let report = radial_consistency(&mus, &st)?;
    let pass = abcd_ok && report.pass;
    let polys = if job.polys {
        let cache = open_cache(job)?;
        let list = mus
            .iter()
            .map(|mu| {
                let poly = spherical_restriction(mu, &st)?;
                if let Some(c) = &cache {
                    c.store(&poly)?;
                }
                Ok(poly)
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Some(list)
    } else {
        None
    };

    let mut csv = vec![vec![
        "mu".into(),
        "casimir_shift".into(),
        "eigenvalue".into(),
        "consistent".into(),
    ]];
    let mut pretty = format!(
        "a = {}, b = {}, c = {}, d = {}, t = {}, base {}\nabcd = {} ({})\nkappa = {}\n",
        format_rational(p.a()),
        format_rational(p.b()),
        format_rational(p.c()),
        format_rational(p.d()),
        format_rational(p.t()),
        format_rational(p.q()),
        format_rational(&p.abcd()),
        if abcd_ok { "PASS" } else { "FAIL" },
        format_rational(&report.kappa),
    );
    for row in &report.rows {
        csv.push(vec![
            row.mu.to_string(),
            format_rational(&row.casimir_shift),
            format_rational(&row.eigenvalue),
            row.consistent.to_string(),
        ]);
        pretty.push_str(&format!(
            "{}: shift {} eigenvalue {} {}\n",
            row.mu,
            format_rational(&row.casimir_shift),
            format_rational(&row.eigenvalue),
            if row.consistent { "PASS" } else { "FAIL" }
        ));
    }
    if let Some(list) = &polys {
        for poly in list {
            pretty.push_str(&format!("P{} = {}\n", poly.lam, poly.coeffs));
        }
    }
    let mut json = json!({
        "checks": ["parameter-map", "casimir-correspondence"],
        "setup": st,
        "params": p,
        "abcd": format_rational(&p.abcd()),
        "abcd_expected": format_rational(&expected),
        "kappa": format_rational(&report.kappa),
        "consistency": report,
        "pass": pass,
    });
    if let Some(list) = polys {
        json["polynomials"] = serde_json::to_value(list).expect("polynomials serialize");
    }
    Ok(Report {
        json,
        csv,
        pretty,
        pass,
    })
}
