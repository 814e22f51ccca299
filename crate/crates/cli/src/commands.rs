use std::collections::BTreeSet;
use std::fs;
use std::io::Write;

use serde_json::json;

use normone_core::{acceptance, export};
use normone_core::context::FieldData;
use normone_core::hilbert90::{
    brute_force_oracle, collision_scan, enumerate_visible, search_box, EnumerateOptions,
    EnumerationReport,
};
use normone_core::lseries::{identity_check, residue_prediction, write_lcheck_csv, IdentityCheck};
use normone_core::torus::{counting_fit, star_discrepancy, weyl_sum, write_weyl_csv, Character};
use normone_core::units::UnitSystem;
use normone_core::Error;

use crate::args::RunArgs;
use crate::config::RunConfig;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;
pub const EXIT_CHECK_FAILED: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Resource { .. } => EXIT_RESOURCE,
            _ => EXIT_CONFIG,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        // A closed stdout (e.g. piped into `head`) ends the run quietly.
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Failure::new(0, String::new());
        }
        Failure::new(EXIT_CONFIG, e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn config(a: &RunArgs) -> Result<RunConfig, Failure> {
    RunConfig::from_args(a).map_err(|m| Failure::new(EXIT_CONFIG, m))
}

fn load(cfg: &RunConfig) -> Result<FieldData, Failure> {
    Ok(FieldData::parse_and_load(&cfg.field, cfg.precision)?)
}

fn say(line: &str) -> CmdResult {
    writeln!(std::io::stdout(), "{line}")?;
    Ok(())
}

/// Writes an artifact into the output directory, or to stdout without one.
fn emit(cfg: &RunConfig, name: &str, bytes: &[u8]) -> CmdResult {
    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), bytes)?;
        }
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

/// Writes a structured summary into the output directory only.
fn emit_json(cfg: &RunConfig, name: &str, value: &serde_json::Value) -> CmdResult {
    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir)?;
        let mut text = serde_json::to_string_pretty(value).map_err(Error::from)?;
        text.push('\n');
        fs::write(dir.join(name), text)?;
    }
    Ok(())
}

fn options(cfg: &RunConfig) -> EnumerateOptions {
    EnumerateOptions {
        workers: cfg.workers,
        max_box_points: cfg.max_box_points,
    }
}

fn reports(cfg: &RunConfig, units: &UnitSystem) -> Result<Vec<EnumerationReport>, Failure> {
    let opts = options(cfg);
    cfg.bounds
        .iter()
        .map(|&r| {
            let rep = enumerate_visible(units, r, &opts)?;
            eprintln!("r = {r}: {} classes ({:.2} s)", rep.count(), rep.wall_clock_secs);
            Ok(rep)
        })
        .collect()
}

fn characters(cfg: &RunConfig, dim: usize, include_trivial: bool) -> Result<Vec<Character>, Failure> {
    let ks = match &cfg.characters {
        Some(ks) => ks.clone(),
        None => {
            let mut ks = Vec::new();
            if include_trivial || dim == 0 {
                ks.push(vec![0; dim]);
            }
            for i in 0..dim {
                let mut k = vec![0; dim];
                k[i] = 1;
                ks.push(k);
            }
            ks
        }
    };
    if let Some(k) = ks.iter().find(|k| k.len() != dim) {
        return Err(Failure::new(
            EXIT_CONFIG,
            format!("character {k:?} has dimension {}, the torus has dimension {dim}", k.len()),
        ));
    }
    Ok(ks.into_iter().map(Character::new).collect())
}

pub fn field_info(a: &RunArgs) -> CmdResult {
    let cfg = config(a)?;
    let fd = load(&cfg)?;
    let f = &fd.field;
    let sig = f.signature();
    let mut lines = vec![
        format!("field            {}", f.label()),
        format!("source           {}", fd.source),
        format!("degree           {}", f.degree()),
        format!(
            "min_poly         [{}]",
            f.min_poly().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        ),
        format!("signature        ({}, {})", sig.real, sig.complex),
        format!("discriminant     {}", f.discriminant()),
        format!("precision        {} bits", f.precision()),
        format!(
            "places           {}",
            f.embedding_summary()
                .iter()
                .map(|(re, im)| if *im == 0.0 { format!("{re}") } else { format!("{re}{im:+}i") })
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ];
    let mut doc = json!({
        "field": f.label(),
        "source": fd.source.to_string(),
        "degree": f.degree(),
        "min_poly": f.min_poly().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "signature": [sig.real, sig.complex],
        "discriminant": f.discriminant().to_string(),
        "precision": f.precision(),
        "places": f.embedding_summary(),
    });
    match fd.units() {
        Ok(us) => {
            let units: Vec<String> = us.fundamental_units().iter().map(|u| u.to_string()).collect();
            let pred = residue_prediction(us)?;
            lines.push(format!("units            {}", if units.is_empty() { "none".into() } else { units.join(", ") }));
            lines.push(format!("roots of unity   {}", us.roots_of_unity()));
            lines.push(format!("regulator        {}", us.regulator()));
            lines.push(format!("class number     {} (hint)", us.class_number_hint()));
            lines.push(format!("residue kappa    {}", pred.kappa));
            lines.push(format!("predicted C      {}", pred.c));
            let flags = us.assumptions();
            lines.push(format!(
                "assumptions      {}",
                if flags.is_empty() { "none".into() } else { flags.join("; ") }
            ));
            doc["units"] = json!(units);
            doc["roots_of_unity"] = json!(us.roots_of_unity());
            doc["regulator"] = json!(us.regulator());
            doc["log_basis"] = json!(us.log_basis());
            doc["residue_prediction"] = serde_json::to_value(&pred).map_err(Error::from)?;
            doc["assumptions"] = json!(flags);
        }
        Err(_) => lines.push("units            not configured".into()),
    }
    say(&lines.join("\n"))?;
    emit_json(&cfg, "field_info.json", &doc)
}

pub fn enumerate(a: &RunArgs) -> CmdResult {
    let cfg = config(a)?;
    let fd = load(&cfg)?;
    for rep in reports(&cfg, fd.units()?)? {
        let mut buf = Vec::new();
        rep.write_csv(&mut buf)?;
        emit(&cfg, &format!("enumerate_r{}.csv", rep.bound), &buf)?;
        if let Some(dir) = &cfg.out {
            fs::write(dir.join(format!("enumerate_r{}.json", rep.bound)), rep.to_json()? + "\n")?;
        }
    }
    Ok(())
}

pub fn weyl(a: &RunArgs) -> CmdResult {
    let cfg = config(a)?;
    let fd = load(&cfg)?;
    let units = fd.units()?;
    let chars = characters(&cfg, units.rank(), false)?;
    let mut rows = Vec::new();
    for rep in reports(&cfg, units)? {
        for k in &chars {
            rows.push(weyl_sum(&rep, k)?);
        }
    }
    let mut buf = Vec::new();
    write_weyl_csv(&rows, &mut buf)?;
    emit(&cfg, "weyl.csv", &buf)?;
    emit_json(&cfg, "weyl.json", &json!({ "field": fd.field.label(), "sums": rows }))
}

pub fn discrepancy(a: &RunArgs) -> CmdResult {
    let cfg = config(a)?;
    let fd = load(&cfg)?;
    let units = fd.units()?;
    let reps = reports(&cfg, units)?;
    let mut out = export::csv_writer(Vec::new());
    out.write_record(["r", "count", "discrepancy", "exact", "grid"]).map_err(Error::from)?;
    let mut rows = Vec::new();
    for rep in &reps {
        if rep.count() == 0 {
            eprintln!("r = {}: no classes, discrepancy undefined", rep.bound);
            continue;
        }
        let d = star_discrepancy(rep, cfg.grid)?;
        out.write_record([
            export::float(rep.bound),
            rep.count().to_string(),
            export::float(d.value),
            d.exact.to_string(),
            d.grid.to_string(),
        ])
        .map_err(Error::from)?;
        rows.push(json!({ "r": rep.bound, "count": rep.count(), "discrepancy": d }));
    }
    let buf = out.into_inner().map_err(|e| Failure::new(EXIT_CONFIG, e.to_string()))?;
    emit(&cfg, "discrepancy.csv", &buf)?;
    let mut doc = json!({ "field": fd.field.label(), "discrepancy": rows });
    if reps.len() >= 3 {
        let data: Vec<(f64, usize)> = reps.iter().map(|r| (r.bound, r.count())).collect();
        let fit = counting_fit(&data)?;
        let pred = residue_prediction(units)?;
        eprintln!(
            "counting fit: C_hat = {} (predicted {}, {:+.3}%), exponent {}",
            fit.c_hat,
            pred.c,
            100.0 * (fit.c_hat / pred.c - 1.0),
            fit.exponent
        );
        doc["counting_fit"] = serde_json::to_value(&fit).map_err(Error::from)?;
        doc["predicted"] = serde_json::to_value(&pred).map_err(Error::from)?;
    } else {
        eprintln!("counting fit skipped: needs at least 3 bounds");
    }
    emit_json(&cfg, "discrepancy.json", &doc)
}

pub fn lcheck(a: &RunArgs) -> CmdResult {
    let cfg = config(a)?;
    if let Some(s) = cfg.s_values.iter().find(|s| !(**s > 1.0)) {
        return Err(Failure::new(EXIT_CONFIG, format!("--s: need s > 1, got {s}")));
    }
    let fd = load(&cfg)?;
    let units = fd.units()?;
    let chars = characters(&cfg, units.rank(), true)?;
    let top = cfg.cutoffs.iter().cloned().fold(1.0, f64::max).floor() + 1.0;
    let rep = enumerate_visible(units, top, &options(&cfg))?;
    eprintln!("r = {top}: {} classes ({:.2} s)", rep.count(), rep.wall_clock_secs);
    let mut checks: Vec<IdentityCheck> = Vec::new();
    for k in &chars {
        for &s in &cfg.s_values {
            for &x in &cfg.cutoffs {
                let c = identity_check(&rep, k, s, x)?;
                eprintln!(
                    "k = {:?}, s = {s}, X = {x}: |ratio - 1| = {:.3e}, |ratio/2 - 1| = {:.3e}, closer to {:?}{}",
                    k.k,
                    c.residual,
                    c.residual2,
                    c.verdict,
                    if c.insufficient_cutoff { " (insufficient cutoff)" } else { "" }
                );
                checks.push(c);
            }
        }
    }
    let mut buf = Vec::new();
    write_lcheck_csv(&checks, &mut buf)?;
    emit(&cfg, "lcheck.csv", &buf)?;
    emit_json(&cfg, "lcheck.json", &json!({ "field": fd.field.label(), "checks": checks }))
}

pub fn oracle(a: &RunArgs) -> CmdResult {
    let cfg = config(a)?;
    let fd = load(&cfg)?;
    let units = fd.units()?;
    let radius = cfg.box_radius as i64;
    let mut summaries = Vec::new();
    let mut mismatch = false;
    for rep in reports(&cfg, units)? {
        let oracle = brute_force_oracle(units, cfg.box_radius, rep.bound)?;
        let fast: BTreeSet<&Vec<i64>> = rep.classes.iter().map(|c| &c.coords).collect();
        let slow: BTreeSet<&Vec<i64>> = oracle.classes.iter().map(|c| &c.coords).collect();
        let extra = slow.difference(&fast).count();
        let missing = fast
            .iter()
            .filter(|c| c.iter().all(|x| x.abs() <= radius) && !slow.contains(*c))
            .count();
        let covers = search_box(units, rep.bound)?.iter().all(|&w| w <= radius);
        let groups = collision_scan(&rep, cfg.tol);
        let ok = extra == 0 && missing == 0 && (!covers || fast == slow);
        mismatch |= !ok;
        eprintln!(
            "r = {}: enumeration {} classes, oracle {} classes, {} missing, {} extra, box {} the search region; {} collision group(s) at tol {:e}",
            rep.bound,
            rep.count(),
            oracle.count(),
            missing,
            extra,
            if covers { "covers" } else { "does not cover" },
            groups.len(),
            cfg.tol
        );
        let mut buf = Vec::new();
        oracle.write_csv(&mut buf)?;
        emit(&cfg, &format!("oracle_r{}.csv", rep.bound), &buf)?;
        summaries.push(json!({
            "r": rep.bound,
            "enumeration_count": rep.count(),
            "oracle_count": oracle.count(),
            "missing_in_oracle": missing,
            "extra_in_oracle": extra,
            "box_covers_search_region": covers,
            "agree": ok,
            "collisions": groups.iter().map(|g| json!({
                "heights": g.heights,
                "torus_point": g.torus_point,
                "alphas": g.members.iter().map(|&i| rep.classes[i].coords.clone()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }));
    }
    emit_json(
        &cfg,
        "oracle.json",
        &json!({ "field": fd.field.label(), "box_radius": cfg.box_radius, "tol": cfg.tol, "runs": summaries }),
    )?;
    if mismatch {
        return Err(Failure::new(EXIT_CHECK_FAILED, "enumeration and oracle disagree"));
    }
    Ok(())
}

pub fn accept(a: &RunArgs) -> CmdResult {
    let cfg = config(a)?;
    let mut lines = Vec::new();
    let mut failed = 0;
    for criterion in acceptance::CRITERIA {
        let r = criterion();
        say(&r.to_string())?;
        if !r.passed {
            failed += 1;
        }
        lines.push(r.to_string());
    }
    let summary = format!("{} of {} criteria passed", lines.len() - failed, lines.len());
    say(&summary)?;
    lines.push(summary.clone());
    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("acceptance.txt"), lines.join("\n") + "\n")?;
    }
    if failed > 0 {
        return Err(Failure::new(EXIT_CHECK_FAILED, summary));
    }
    Ok(())
}
