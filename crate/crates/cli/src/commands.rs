use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use threeprimes::arcs::{classify, eta_grid, vin3_condition1_eta, ArcConfig, ArcSetup, Kernel};
use threeprimes::buchstab::{alpha_plus, BuchstabTable};
use threeprimes::sieve::{
    buchstab_identity_check, fundamental_error_scan, majorant_window, short_interval_prime_density, sieve_window,
    Cutoff, SieveParams,
};
use threeprimes::ternary::{
    count_representations, half_width, predicted_count, representation_stats, scan_range, WINDOW_CONVENTION,
};
use threeprimes::transference::{
    bohr_obstruction_demo, decomposition_report, test_doubling4, test_kneser_dense, transfer_decompose,
    DensityFunction,
};
use threeprimes::Rational;

use crate::args::*;
use crate::error::CliError;
use crate::output::Artifact;

/// Result of one command: the primary artifact and a summary for the manifest.
pub struct Report {
    pub artifact: Artifact,
    pub summary: Value,
}

fn report(artifact: Artifact) -> Report {
    Report {
        artifact,
        summary: Value::Null,
    }
}

fn required<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

pub fn run(cmd: &Command, seed: u64) -> Result<Report, CliError> {
    match cmd {
        Command::Buchstab(c) => buchstab(c),
        Command::AlphaPlus(a) => alpha(a),
        Command::Sieve(c) => sieve(c),
        Command::Arcs(c) => arcs(c, seed),
        Command::Transfer(c) => transfer(c, seed),
        Command::Ternary(c) => ternary(c),
    }
}

fn table(t: &TableOpts) -> Result<BuchstabTable<f64>, CliError> {
    Ok(BuchstabTable::build(t.u_max, t.step)?)
}

fn buchstab(c: &BuchstabCmd) -> Result<Report, CliError> {
    match c {
        BuchstabCmd::Eval(a) => {
            let u = required(a.u, "u")?;
            let t = table(&a.table)?;
            Ok(report(Artifact::Json(json!({
                "u": u,
                "value": t.eval(u)?,
                "err_bound": t.err_bound(),
            }))))
        }
        BuchstabCmd::AlphaPlus(a) => alpha(a),
        BuchstabCmd::Table(a) => {
            if a.every == 0 {
                return Err(CliError::Usage("--every must be positive".into()));
            }
            let t = table(&a.table)?;
            let rows = t
                .grid()
                .step_by(a.every)
                .map(|(u, w)| vec![u.to_string(), w.to_string()])
                .collect();
            Ok(Report {
                artifact: Artifact::Csv {
                    comments: vec![],
                    header: vec!["u", "omega"],
                    rows,
                },
                summary: json!({ "err_bound": t.err_bound() }),
            })
        }
    }
}

fn alpha(a: &AlphaPlusArgs) -> Result<Report, CliError> {
    let t = table(&a.table)?;
    let r = alpha_plus(&t, a.tol)?;
    Ok(report(Artifact::Json(json!({
        "value": r.value,
        "error": r.quadrature_error,
        "breakdown": { "term1_4omega4": r.breakdown.term1, "term2_integral": r.breakdown.term2 },
        "below_2_9": r.value < 2.9,
        "tol": a.tol,
        "table_step": t.step(),
        "table_err_bound": t.err_bound(),
    }))))
}

fn cutoff(c: CutoffArg) -> Cutoff {
    match c {
        CutoffArg::Strict => Cutoff::Strict,
        CutoffArg::Inclusive => Cutoff::Inclusive,
    }
}

fn kernel(k: KernelArg) -> Kernel {
    match k {
        KernelArg::Rho => Kernel::Rho,
        KernelArg::RhoPlus => Kernel::RhoPlus,
    }
}

fn sieve_params(p: &ParamOpts) -> Result<SieveParams, CliError> {
    let mut s = SieveParams::new(p.x, p.theta)?;
    if p.z.is_some() || p.y4.is_some() {
        s = s.with_cutoffs(p.z.unwrap_or(s.z), p.y4.unwrap_or(s.y4))?;
    }
    if let Some(w) = p.w {
        s = s.with_w(w)?;
    }
    Ok(s.with_cutoff_convention(cutoff(p.cutoff)))
}

fn arc_config(x: u64, theta: f64, a: &ArcOpts) -> Result<ArcConfig, CliError> {
    let c = ArcConfig::with_a(x, theta, a.a_exp)?;
    Ok(match a.q_threshold {
        Some(q) => c.with_q_threshold(q)?,
        None => c,
    })
}

/// Default window [x, x + x^θ] as a half-open range.
fn short_range(p: &SieveParams, lo: Option<u64>, hi: Option<u64>) -> (u64, u64) {
    let lo = lo.unwrap_or(p.x);
    let hi = hi.unwrap_or(p.x + p.short_length().floor() as u64 + 1);
    (lo, hi)
}

fn sieve(c: &SieveCmd) -> Result<Report, CliError> {
    match c {
        SieveCmd::Majorant(a) => {
            let p = sieve_params(&a.params)?;
            let (lo, hi) = short_range(&p, a.lo, a.hi);
            let rows = majorant_window(&p, lo, hi)?;
            let violations = rows.iter().filter(|r| u32::from(r.rho) > r.rho_plus).count();
            let (s, sp) = rows.iter().fold((0u64, 0u64), |(s, sp), r| {
                (s + u64::from(r.rho), sp + u64::from(r.rho_plus))
            });
            Ok(Report {
                artifact: Artifact::Csv {
                    comments: vec![],
                    header: vec!["n", "rho", "rho_plus"],
                    rows: rows
                        .iter()
                        .map(|r| vec![r.n.to_string(), r.rho.to_string(), r.rho_plus.to_string()])
                        .collect(),
                },
                summary: json!({
                    "params": p,
                    "lo": lo,
                    "hi": hi,
                    "violations": violations,
                    "sum_rho": s,
                    "sum_rho_plus": sp,
                }),
            })
        }
        SieveCmd::IdentityCheck(a) => {
            let w = sieve_window(a.lo, a.hi)?;
            let v = buchstab_identity_check(&w, a.w, a.z, cutoff(a.cutoff))?;
            Ok(report(Artifact::Json(json!({
                "lo": a.lo, "hi": a.hi, "w": a.w, "z": a.z, "cutoff": a.cutoff, "violations": v,
            }))))
        }
        SieveCmd::Density(a) => {
            let w = sieve_window(a.lo, a.hi)?;
            let d = short_interval_prime_density(&w, a.d, a.c)?;
            Ok(report(Artifact::Json(json!({
                "lo": a.lo, "hi": a.hi, "d": a.d, "c": a.c, "density": d,
            }))))
        }
        SieveCmd::FundamentalError(a) => {
            let mut p = sieve_params(&a.params)?;
            if let Some(o) = a.omega {
                p = p.with_omega_cutoff(o)?;
            }
            let (lo, hi) = short_range(&p, a.lo, a.hi);
            let w = sieve_window(lo, hi)?;
            let r = fundamental_error_scan(&w, &p, a.eps)?;
            Ok(report(Artifact::json(&json!({ "lo": lo, "hi": hi, "report": r }))?))
        }
    }
}

fn grid(g: &GridOpts, config: &ArcConfig, seed: u64) -> Result<Vec<f64>, CliError> {
    if g.gamma.is_empty() {
        Ok(eta_grid(config, g.qmax, g.random, seed)?)
    } else {
        Ok(g.gamma.clone())
    }
}

fn arcs(c: &ArcsCmd, seed: u64) -> Result<Report, CliError> {
    match c {
        ArcsCmd::Classify(a) => {
            let config = arc_config(a.x, a.theta, &a.arc)?;
            let point = classify(required(a.gamma, "gamma")?, &config)?;
            Ok(report(Artifact::json(&json!({ "config": config, "arc": point }))?))
        }
        ArcsCmd::Compare(a) => {
            let p = sieve_params(&a.params)?;
            let config = arc_config(p.x, p.theta, &a.arc)?;
            let setup = ArcSetup::with_taper(p, config, a.taper)?;
            let gammas = grid(&a.grid, &config, seed)?;
            let k = kernel(a.kernel);
            let rows = setup.saz_compare_many(k, a.d, a.c, &gammas)?;
            let worst = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
            Ok(Report {
                artifact: Artifact::Csv {
                    comments: vec![],
                    header: vec![
                        "gamma", "a", "q", "lambda", "is_major", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "deviation",
                        "abs_lhs_normalized",
                    ],
                    rows: rows
                        .iter()
                        .map(|r| {
                            vec![
                                r.gamma.to_string(),
                                r.a.to_string(),
                                r.q.to_string(),
                                r.lambda.to_string(),
                                r.is_major.to_string(),
                                r.lhs_re.to_string(),
                                r.lhs_im.to_string(),
                                r.rhs_re.to_string(),
                                r.rhs_im.to_string(),
                                r.deviation.to_string(),
                                (r.lhs().norm() / setup.normalizer()).to_string(),
                            ]
                        })
                        .collect(),
                },
                summary: json!({
                    "params": p,
                    "config": config,
                    "h1": setup.h1,
                    "long_window": setup.long_len,
                    "long_truncated": setup.long_truncated,
                    "long_density": setup.long_density(k)?,
                    "normalizer": setup.normalizer(),
                    "max_deviation": worst,
                }),
            })
        }
        ArcsCmd::Eta(a) => {
            let p = sieve_params(&a.params)?;
            let config = arc_config(p.x, p.theta, &a.arc)?;
            let alpha_value = match a.alpha_plus {
                Some(v) => v,
                None => alpha_plus(&BuchstabTable::build(20.0, 1e-3)?, 1e-6)?.value,
            };
            let gammas = grid(&a.grid, &config, seed)?;
            let r = vin3_condition1_eta(&p, &config, a.b, &gammas, alpha_value)?;
            Ok(Report {
                artifact: Artifact::Csv {
                    comments: vec![],
                    header: vec!["gamma", "q", "is_major", "deviation"],
                    rows: r
                        .rows
                        .iter()
                        .map(|row| {
                            vec![
                                row.gamma.to_string(),
                                row.q.to_string(),
                                row.is_major.to_string(),
                                row.deviation.to_string(),
                            ]
                        })
                        .collect(),
                },
                summary: json!({
                    "params": p,
                    "eta": r.eta,
                    "argmax_gamma": r.argmax_gamma,
                    "alpha_plus": r.alpha_plus,
                    "residue": r.residue,
                    "W": r.big_w,
                }),
            })
        }
    }
}

/// Sparse f under a dense majorant ν, both with small rational values.
fn random_pair(n: usize, density: f64, rng: &mut ChaCha8Rng) -> (DensityFunction<Rational>, DensityFunction<Rational>) {
    let nu: Vec<Rational> = (0..n).map(|_| Rational::new(rng.gen_range(1..=6), 3)).collect();
    let f: Vec<Rational> = nu
        .iter()
        .map(|v| {
            if rng.gen_bool(density) {
                *v * Rational::new(rng.gen_range(1..=2), 2)
            } else {
                Rational::from_integer(0)
            }
        })
        .collect();
    (
        DensityFunction::new(f).expect("nonnegative"),
        DensityFunction::new(nu).expect("positive"),
    )
}

fn ratio_str(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn transfer(c: &TransferCmd, seed: u64) -> Result<Report, CliError> {
    match c {
        TransferCmd::KneserDense(a) => Ok(report(Artifact::json(&test_kneser_dense(a.n, a.trials, a.eps, a.eta, seed)?)?)),
        TransferCmd::Doubling4(a) => Ok(report(Artifact::json(&test_doubling4(a.n, a.instances, a.eta, a.alpha, seed)?)?)),
        TransferCmd::BohrDemo(a) => Ok(report(Artifact::json(&bohr_obstruction_demo(
            a.xi, a.start, a.length, a.lo, a.hi, a.bins,
        )?)?)),
        TransferCmd::Decompose(a) => {
            if !(a.density > 0.0 && a.density <= 1.0) {
                return Err(CliError::Usage("--density must lie in (0, 1]".into()));
            }
            if a.n == 0 {
                return Err(CliError::Usage("--n must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (f, nu) = random_pair(a.n, a.density, &mut rng);
            let dec = transfer_decompose(&f, &nu, a.delta)?;
            let rep = decomposition_report(&dec, &nu, a.ap_eta, a.q_exp)?;
            let rows = (dec.offset..=dec.end())
                .map(|k| vec![k.to_string(), ratio_str(&f.get(k)), ratio_str(&dec.g_at(k)), ratio_str(&dec.h_at(k))])
                .collect();
            Ok(Report {
                artifact: Artifact::Csv {
                    comments: vec![],
                    header: vec!["n", "f", "g", "h"],
                    rows,
                },
                summary: json!({
                    "report": rep,
                    "bohr_set": dec.bohr.elements,
                    "property2_holds": rep.property2_holds(0.01),
                    "property3_holds": rep.property3_holds(),
                    "property4_holds": rep.property4_holds(),
                }),
            })
        }
    }
}

fn ternary(c: &TernaryCmd) -> Result<Report, CliError> {
    match c {
        TernaryCmd::Scan(a) => {
            let r = scan_range(a.lo, a.hi, a.theta)?;
            let rows = r
                .rows
                .iter()
                .map(|row| {
                    vec![
                        row.n.to_string(),
                        row.h.to_string(),
                        row.count_at_theta.to_string(),
                        row.success().to_string(),
                        row.h_min.to_string(),
                        row.theta_min.to_string(),
                    ]
                })
                .collect();
            Ok(Report {
                artifact: Artifact::Csv {
                    comments: vec![
                        WINDOW_CONVENTION.to_string(),
                        format!("theta = {}, H = ceil(n^theta)", a.theta),
                        "a finite scan measures minimal windows; it cannot confirm or refute an asymptotic exponent"
                            .to_string(),
                    ],
                    header: vec!["n", "h", "count", "success", "h_min", "theta_min"],
                    rows,
                },
                summary: json!({
                    "rows": r.rows.len(),
                    "failures": r.failures,
                    "max_theta_min": r.max_theta_min,
                    "argmax": r.argmax,
                    "histogram": r.histogram,
                }),
            })
        }
        TernaryCmd::Predict(a) => {
            let n = required(a.n, "n")?;
            let h = a.h.unwrap_or_else(|| half_width(n, a.theta));
            let count = count_representations(n, h)?;
            let p = predicted_count(n, h)?;
            Ok(report(Artifact::json(&json!({
                "n": n,
                "h": h,
                "count": count,
                "predicted": p.value,
                "ratio": count as f64 / p.value,
                "singular_series": p.singular_series,
                "in_range": p.in_range,
                "window_convention": WINDOW_CONVENTION,
            }))?))
        }
        TernaryCmd::Stats(a) => {
            let n = required(a.n, "n")?;
            let h = a.h.unwrap_or_else(|| half_width(n, a.theta));
            Ok(report(Artifact::json(&representation_stats(n, h)?)?))
        }
    }
}
