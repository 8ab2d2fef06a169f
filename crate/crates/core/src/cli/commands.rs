use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alpham::{
    compute_alpha_m, lawson_check, positive_root_count, stability_floor, sturm_sign_table,
    verify_bracket,
};
use crate::calib::{subcalibration_report, GridSpec, Located};
use crate::conepolys::{
    build_p, build_pm, build_q, build_qm, depressed_quartic, q_discriminant, resolvent_cubic,
    theta_pm_identity_check, ConeParams,
};
use crate::error::{Error, Result};
use crate::foliation::{quad_margin, Branch, Foliation, FoliationConfig};
use crate::ratpoly::{fraction_string, int, rat, to_f64, Point, Rational, Sign, SturmChain};

use super::record::{OutputRecord, Row};

/// Which family of exact checks `verify` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    Q,
    Quartic,
    Sturm,
    Identity,
    Bracket,
    Lawson,
    Stability,
}

impl Which {
    pub fn as_str(self) -> &'static str {
        match self {
            Which::Q => "q",
            Which::Quartic => "quartic",
            Which::Sturm => "sturm",
            Which::Identity => "identity",
            Which::Bracket => "bracket",
            Which::Lawson => "lawson",
            Which::Stability => "stability",
        }
    }
}

pub(crate) fn sci(x: f64) -> String {
    format!("{x:e}")
}

fn signs(s: &[Sign]) -> String {
    s.iter()
        .map(|s| match s {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        })
        .collect()
}

pub fn alpha_table(ms: &[u64], digits: u32) -> Result<OutputRecord> {
    let mut rec = OutputRecord::new("alpha-table", &["m", "alpha", "isolator_lo", "isolator_hi"])
        .param("ms", join(ms))
        .param("digits", digits);
    for &m in ms {
        let r = compute_alpha_m(m, digits)?;
        rec.push(Row::new(
            vec![
                m.to_string(),
                r.decimal,
                fraction_string(r.isolator.lo()),
                fraction_string(r.isolator.hi()),
            ],
            true,
        ));
    }
    Ok(rec)
}

fn join(ms: &[u64]) -> String {
    ms.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

/// Positive rational `num/den` with `num` in `1..=4000` and `den` in `1..=97`.
pub fn random_alpha(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(1..=4000), rng.gen_range(1..=97))
}

/// Options shared by the `verify` checks.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub which: Which,
    pub ms: Vec<u64>,
    pub sum_max: u64,
    pub seed: u64,
    pub samples: usize,
    pub digits: u32,
}

pub fn verify(opts: &VerifyOptions) -> Result<OutputRecord> {
    let rec = OutputRecord::new("verify", &[]).param("which", opts.which.as_str());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    match opts.which {
        Which::Lawson => verify_lawson(rec.param("sum_max", opts.sum_max), opts.sum_max),
        Which::Q => verify_q(with_range(rec, opts, true), opts, &mut rng),
        Which::Quartic => verify_quartic(with_range(rec, opts, true), opts, &mut rng),
        Which::Identity => verify_identity(with_range(rec, opts, true), opts, &mut rng),
        Which::Sturm => verify_sturm(with_range(rec, opts, false), &opts.ms),
        Which::Bracket => verify_bracket_rows(with_range(rec, opts, false), &opts.ms),
        Which::Stability => verify_stability(
            with_range(rec, opts, false).param("digits", opts.digits),
            opts,
        ),
    }
}

fn with_range(rec: OutputRecord, opts: &VerifyOptions, random: bool) -> OutputRecord {
    let rec = rec.param("ms", join(&opts.ms));
    if random {
        rec.param("seed", opts.seed).param("samples", opts.samples)
    } else {
        rec
    }
}

fn with_columns(mut rec: OutputRecord, columns: &[&str]) -> OutputRecord {
    rec.columns = columns.iter().map(|c| c.to_string()).collect();
    rec
}

/// Discriminant of `a3 t^3 + a2 t^2 + a1 t + a0` by the general formula.
fn cubic_discriminant(c: &[Rational]) -> Rational {
    let (d, cc, b, a) = (&c[0], &c[1], &c[2], &c[3]);
    int(18) * a * b * cc * d - int(4) * b * b * b * d + b * b * cc * cc
        - int(4) * a * cc * cc * cc
        - int(27) * a * a * d * d
}

fn verify_q(rec: OutputRecord, opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<OutputRecord> {
    let mut rec = with_columns(rec, &["m", "qm_positive_roots", "discriminant_checks"]);
    for &m in &opts.ms {
        let chain = SturmChain::new(&build_qm(m));
        let roots = chain.count_roots(&Point::Finite(Rational::zero()), &Point::PosInf)?;
        let mut bad = None;
        for _ in 0..opts.samples {
            let alpha = random_alpha(rng);
            let params = ConeParams::new(m, alpha.clone())?;
            let disc = q_discriminant(&params);
            let general = cubic_discriminant(build_q(&params).coeffs());
            let sign_ok = Sign::of(&disc) == Sign::of(&build_qm(m).eval(&alpha)).flip();
            if disc != general || !sign_ok {
                bad = Some(alpha);
                break;
            }
        }
        let ok = roots == 1 && bad.is_none();
        let row = Row::new(
            vec![m.to_string(), roots.to_string(), opts.samples.to_string()],
            ok,
        );
        rec.push(match bad {
            Some(a) => row.with_note(format!("m = {m}, alpha = {}", fraction_string(&a))),
            None if !ok => row.with_note(format!("m = {m}: q_m has {roots} positive roots")),
            None => row,
        });
    }
    Ok(rec)
}

/// Sign facts about `P`, its shift to the window edge, the depressed
/// quartic and the resolvent, for one `alpha > 2/m`.
fn quartic_facts(m: u64, alpha: &Rational) -> Result<Vec<(&'static str, bool)>> {
    let params = ConeParams::new(m, alpha.clone())?;
    let p = build_p(&params);
    let a = |i| p.coeff(i);
    let shifted = p.taylor_shift(&params.gamma_limit()).coeffs().to_vec();
    let d = depressed_quartic(&params);
    let res = resolvent_cubic(&d);
    Ok(vec![
        (
            "p_coefficient_signs",
            a(4).is_positive() && a(3).is_negative() && a(1).is_positive() && a(0).is_negative(),
        ),
        (
            "shifted_signs",
            shifted[4].is_positive()
                && shifted[3].is_positive()
                && shifted[2].is_positive()
                && shifted[0].is_negative(),
        ),
        ("p_negative", d.p.is_negative()),
        (
            "p2_minus_4r_positive",
            (&d.p * &d.p - int(4) * &d.r).is_positive(),
        ),
        (
            "resolvent_no_negative_roots",
            res.reflect().descartes_sign_changes() == 0,
        ),
    ])
}

fn verify_quartic(
    rec: OutputRecord,
    opts: &VerifyOptions,
    rng: &mut ChaCha8Rng,
) -> Result<OutputRecord> {
    let mut rec = with_columns(rec, &["m", "samples"]);
    for &m in &opts.ms {
        let floor = rat(2, m as i64);
        let mut failure = None;
        for _ in 0..opts.samples {
            // keep alpha strictly above 2/m
            let alpha = &floor + random_alpha(rng);
            if let Some((name, _)) = quartic_facts(m, &alpha)?.into_iter().find(|f| !f.1) {
                failure = Some(format!(
                    "m = {m}, alpha = {}: {name}",
                    fraction_string(&alpha)
                ));
                break;
            }
        }
        let row = Row::new(
            vec![m.to_string(), opts.samples.to_string()],
            failure.is_none(),
        );
        rec.push(match failure {
            Some(note) => row.with_note(note),
            None => row,
        });
    }
    Ok(rec)
}

fn verify_identity(
    rec: OutputRecord,
    opts: &VerifyOptions,
    rng: &mut ChaCha8Rng,
) -> Result<OutputRecord> {
    let mut rec = with_columns(rec, &["m", "samples"]);
    for &m in &opts.ms {
        let mut failure = None;
        for _ in 0..opts.samples {
            let alpha = random_alpha(rng);
            if !theta_pm_identity_check(&ConeParams::new(m, alpha.clone())?) {
                failure = Some(format!("m = {m}, alpha = {}", fraction_string(&alpha)));
                break;
            }
        }
        let row = Row::new(
            vec![m.to_string(), opts.samples.to_string()],
            failure.is_none(),
        );
        rec.push(match failure {
            Some(note) => row.with_note(note),
            None => row,
        });
    }
    Ok(rec)
}

fn verify_sturm(rec: OutputRecord, ms: &[u64]) -> Result<OutputRecord> {
    let mut rec = with_columns(
        rec,
        &[
            "m",
            "signs_at_zero",
            "signs_at_infinity",
            "changes_at_zero",
            "changes_at_infinity",
            "positive_roots",
        ],
    );
    for &m in ms {
        let t = sturm_sign_table(m)?;
        let roots = positive_root_count(m)?;
        let ok = t.changes_at_zero == 3 && t.changes_at_infinity == 2 && roots == 1;
        let row = Row::new(
            vec![
                m.to_string(),
                signs(&t.at_zero),
                signs(&t.at_infinity),
                t.changes_at_zero.to_string(),
                t.changes_at_infinity.to_string(),
                roots.to_string(),
            ],
            ok,
        );
        rec.push(if ok {
            row
        } else {
            row.with_note(format!("m = {m}: {roots} positive roots"))
        });
    }
    Ok(rec)
}

fn verify_bracket_rows(rec: OutputRecord, ms: &[u64]) -> Result<OutputRecord> {
    let mut rec = with_columns(rec, &["m", "p_at_2_over_m", "p_at_12_over_m"]);
    for &m in ms {
        let pm = build_pm(m);
        let lo = pm.sign_at(&rat(2, m as i64));
        let hi = pm.sign_at(&rat(12, m as i64));
        let ok = verify_bracket(m);
        let row = Row::new(vec![m.to_string(), signs(&[lo]), signs(&[hi])], ok);
        rec.push(if ok {
            row
        } else {
            row.with_note(format!("m = {m}: bracket 2/m < alpha_m < 12/m fails"))
        });
    }
    Ok(rec)
}

/// Known classification of area-minimizing Lawson cones `C_{k,h}`:
/// minimizing iff `k + h >= 9` or `{k, h} = {3, 5}` or `k = h = 4`.
pub fn lawson_known(k: u64, h: u64) -> bool {
    k + h >= 9 || matches!((k, h), (3, 5) | (5, 3) | (4, 4))
}

fn verify_lawson(rec: OutputRecord, sum_max: u64) -> Result<OutputRecord> {
    let mut rec = with_columns(rec, &["k", "h", "minimizing", "known"]);
    for k in 2..=sum_max.saturating_sub(2) {
        for h in 2..=sum_max - k {
            let got = lawson_check(k, h)?;
            let known = lawson_known(k, h);
            let row = Row::new(
                vec![
                    k.to_string(),
                    h.to_string(),
                    got.to_string(),
                    known.to_string(),
                ],
                got == known,
            );
            rec.push(if got == known {
                row
            } else {
                row.with_note(format!("(k, h) = ({k}, {h})"))
            });
        }
    }
    Ok(rec)
}

fn verify_stability(rec: OutputRecord, opts: &VerifyOptions) -> Result<OutputRecord> {
    let mut rec = with_columns(rec, &["m", "floor_ok", "near_floor_ok"]);
    for &m in &opts.ms {
        let s = stability_floor(m, opts.digits)?;
        let near = s.near_floor_ok.map_or(String::new(), |b| b.to_string());
        let row = Row::new(
            vec![m.to_string(), s.floor_ok.to_string(), near],
            s.passed(),
        );
        rec.push(if s.passed() {
            row
        } else {
            row.with_note(format!("m = {m}: m + alpha_m below 4 + sqrt(8)"))
        });
    }
    Ok(rec)
}

/// Options of `foliate`.
#[derive(Debug, Clone)]
pub struct FoliateOptions {
    pub m: u64,
    pub alpha: Rational,
    pub digits: u32,
    pub eps: f64,
    pub tol: f64,
    pub n: usize,
    pub lambdas: Vec<f64>,
    pub force: bool,
}

/// Whether `alpha >= alpha_m`, decided exactly by the sign of `p_m`.
pub fn at_least_alpha_m(m: u64, alpha: &Rational) -> bool {
    alpha.is_positive() && build_pm(m).sign_at(alpha) != Sign::Neg
}

/// Largest `a c - b^2` over a uniform sweep of `gamma` in `(0, 1 - 1/(m + alpha))`.
fn best_margin(m: u64, alpha: f64) -> f64 {
    let limit = 1.0 - 1.0 / (m as f64 + alpha);
    (1..1000)
        .filter_map(|i| quad_margin(m, alpha, limit * i as f64 / 1000.0).ok())
        .map(|q| q.margin)
        .fold(f64::NEG_INFINITY, f64::max)
}

pub const FOLIATE_COLUMNS: [&str; 9] = [
    "branch",
    "gamma",
    "t_hat",
    "containment",
    "ode_residual",
    "el_residual",
    "pole_estimate",
    "pole_error",
    "reciprocal_switch",
];

/// Runs `foliate`; the solved foliation is returned for the curve file.
pub fn foliate(opts: &FoliateOptions) -> Result<(OutputRecord, Option<Foliation>)> {
    let alpha_m = compute_alpha_m(opts.m, opts.digits)?;
    let mut rec = OutputRecord::new("foliate", &FOLIATE_COLUMNS)
        .param("m", opts.m)
        .param("alpha", fraction_string(&opts.alpha))
        .param("alpha_m", &alpha_m.decimal)
        .param("eps", sci(opts.eps))
        .param("tol", sci(opts.tol))
        .param("n", opts.n)
        .param(
            "lambdas",
            opts.lambdas
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        )
        .param("force", opts.force);
    let alpha = to_f64(&opts.alpha);
    let blank = |branch: &str, note: String| {
        let mut cells = vec![String::new(); FOLIATE_COLUMNS.len()];
        cells[0] = branch.to_string();
        Row::new(cells, false).with_note(note)
    };

    if opts.alpha <= rat(2, opts.m as i64) {
        rec.push(blank("none", "alpha <= 2/m: no gamma window".to_string()));
        return Ok((rec, None));
    }
    let cfg = match FoliationConfig::certified(opts.m, &opts.alpha, opts.eps, opts.tol, opts.n)? {
        Some(cfg) => cfg,
        None => {
            let margin = best_margin(opts.m, alpha);
            rec.push(blank(
                "none",
                format!(
                    "margin < 0: no admissible gamma (best sampled margin {})",
                    sci(margin)
                ),
            ));
            return Ok((rec, None));
        }
    };
    let fol = match Foliation::solve(&cfg) {
        Ok(f) => f,
        Err(e @ (Error::BarrierEscape { .. } | Error::StepUnderflow { .. })) => {
            rec.push(blank("none", e.to_string()));
            return Ok((rec, None));
        }
        Err(e) => return Err(e),
    };
    for branch in Branch::BOTH {
        let r = fol.report(branch);
        let ok = r.passed(cfg.tol, 100.0 * cfg.tol, cfg.eps);
        let row = Row::new(
            vec![
                branch.to_string(),
                sci(cfg.gamma),
                sci(cfg.t_hat()),
                sci(r.containment),
                sci(r.ode_residual),
                sci(r.el_residual),
                sci(r.pole_estimate),
                sci(r.pole_error),
                r.stats.switched_to_reciprocal.to_string(),
            ],
            ok,
        );
        rec.push(if ok {
            row
        } else {
            row.with_note(format!("{branch} branch misses the certificate"))
        });
    }
    Ok((rec, Some(fol)))
}

/// Writes `branch,lambda,t,radial,height,w,v` for every branch sample and
/// every `lambda`.
pub fn write_curves(fol: &Foliation, lambdas: &[f64], path: &Path) -> Result<()> {
    let io = |e: std::io::Error| Error::InvalidParams(format!("{}: {e}", path.display()));
    let file = File::create(path).map_err(io)?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let csv_err = |e: csv::Error| Error::InvalidParams(format!("{}: {e}", path.display()));
    w.write_record(["branch", "lambda", "t", "radial", "height", "w", "v"])
        .map_err(csv_err)?;
    for branch in Branch::BOTH {
        let sol = fol.branch(branch);
        for &lambda in lambdas {
            let curve = fol.level_curve(branch, lambda)?;
            for (i, (r, y)) in curve.iter().enumerate() {
                w.write_record([
                    branch.to_string(),
                    lambda.to_string(),
                    sci(sol.t_samples[i]),
                    sci(*r),
                    sci(*y),
                    sci(sol.w_samples[i]),
                    sci(sol.v_samples[i]),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    w.flush().map_err(io)?;
    Ok(())
}

pub fn subcalib(m: u64, alpha: f64, grid: &GridSpec) -> Result<OutputRecord> {
    let mut rec = OutputRecord::new("subcalib", &["check", "value", "radial", "height"])
        .param("m", m)
        .param("alpha", alpha)
        .param(
            "radial_range",
            format!("{}..{}", grid.radial.0, grid.radial.1),
        )
        .param(
            "height_range",
            format!("{}..{}", grid.height.0, grid.height.1),
        )
        .param("n_radial", grid.n_radial)
        .param("n_height", grid.n_height)
        .param("band", grid.band);
    let rep = subcalibration_report(m, alpha, grid)?;
    let located = |name: &str, l: Option<Located>, ok: bool, note: String| {
        let cells = match l {
            Some(l) => vec![
                name.to_string(),
                sci(l.value),
                sci(l.at.radial),
                sci(l.at.height),
            ],
            None => vec![
                name.to_string(),
                String::new(),
                String::new(),
                String::new(),
            ],
        };
        let row = Row::new(cells, ok);
        if ok {
            row
        } else {
            row.with_note(note)
        }
    };
    rec.push(located(
        "max_div_inside",
        rep.max_div_inside,
        rep.inside_ok(),
        rep.max_div_inside.map_or(String::new(), |l| {
            format!(
                "div xi_+ = {} > 0 below the cone at ({}, {})",
                sci(l.value),
                l.at.radial,
                l.at.height
            )
        }),
    ));
    rec.push(located(
        "min_div_outside",
        rep.min_div_outside,
        rep.outside_ok(),
        rep.min_div_outside.map_or(String::new(), |l| {
            format!(
                "div xi_- = {} > 0 above the cone at ({}, {})",
                sci(-l.value),
                l.at.radial,
                l.at.height
            )
        }),
    ));
    let simple = |name: &str, value: f64, ok: bool| {
        Row::new(
            vec![name.to_string(), sci(value), String::new(), String::new()],
            ok,
        )
    };
    rec.push(simple(
        "max_norm_error",
        rep.max_norm_error,
        rep.norm_bound_ok,
    ));
    rec.push(simple(
        "boundary_alignment_err",
        rep.boundary_alignment_err,
        rep.boundary_alignment_err < crate::calib::ALIGNMENT_TOL,
    ));
    rec.push(Row::new(
        vec![
            "points_inside_outside_excluded".to_string(),
            format!(
                "{}/{}/{}",
                rep.inside_points, rep.outside_points, rep.excluded_points
            ),
            String::new(),
            String::new(),
        ],
        true,
    ));
    Ok(rec)
}
