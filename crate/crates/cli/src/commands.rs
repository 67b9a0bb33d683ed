//! The five subcommands. Each returns the text it prints; files go to the
//! configured output directory.

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

use spectral_flow::cycle::{
    build_condition, check_self_adjoint, condition_at, eval_ramps_with, region_of, CycleKind, CycleParams, Region,
};
use spectral_flow::error::Error;
use spectral_flow::flow::{
    anholonomy_permutation, default_level_count, detect_crossings, sweep, track_branches, AnholonomyReport, BranchSet,
    FlowConfig, FlowTable,
};
use spectral_flow::spectrum::{find_spectrum, SpectrumOptions};
use spectral_flow::web::{convergence_study, sector_midpoint, LevelOrder, WebDescription, WebSource};

use crate::config::RunConfig;
use crate::format::{sig, write_csv};
use crate::plot::{self, Plot, Series};
use crate::{Failure, EXIT_AMBIGUITY, EXIT_USAGE, EXIT_VALIDATION};

/// Self-adjointness tolerance of `validate`.
pub const VALIDATE_TOL: f64 = 1e-12;
/// Gap below which a local minimum counts as a crossing candidate.
pub const CROSSING_GAP_TOL: f64 = 1e-6;

pub const FLOW_HEADER: [&str; 8] = ["theta", "region", "topology", "level_index", "k", "multiplicity", "weight1", "branch_id"];

fn params(cfg: &RunConfig) -> Result<CycleParams<f64>, Failure> {
    CycleParams::new(cfg.cycle, cfg.t, cfg.s).map_err(Failure::from)
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::new(EXIT_USAGE, format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| Failure::new(EXIT_USAGE, format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows).expect("writing to memory");
    buf
}

fn describe(cfg: &RunConfig) -> String {
    format!("{} cycle, t = {}, s = {}, L1/L2 = {}", cfg.cycle, sig(cfg.t), sig(cfg.s), cfg.ratio)
}

pub fn validate(cfg: &RunConfig) -> Result<String, Failure> {
    let p = params(cfg)?;
    let mut violations = Vec::new();
    for i in 0..cfg.samples {
        let theta = TAU * i as f64 / cfg.samples as f64;
        let ramps = eval_ramps_with(cfg.cycle, theta, cfg.b_prime);
        let r = ramps.as_array();
        let values = format!("a={} b={} bp={} c={} d={}", sig(r[0]), sig(r[1]), sig(r[2]), sig(r[3]), sig(r[4]));
        if let Err(e) = ramps.validate() {
            violations.push(format!("theta = {}: {e} ({values})", sig(theta)));
            continue;
        }
        match build_condition(&ramps, &p) {
            Err(e) => violations.push(format!("theta = {}: {e} ({values})", sig(theta))),
            Ok(cond) => {
                let rep = check_self_adjoint(&cond, VALIDATE_TOL);
                if !rep.passed {
                    violations.push(format!(
                        "theta = {}: |A B^T - B A^T| = {}, rank(A|B) = {} of {}",
                        sig(theta),
                        sig(rep.asymmetry),
                        rep.rank,
                        rep.degree
                    ));
                }
            }
        }
    }
    let form = match cfg.b_prime {
        spectral_flow::cycle::BPrimeForm::Corrected => "corrected",
        spectral_flow::cycle::BPrimeForm::Printed => "printed",
    };
    let mut out = format!("validate: {}, b' {form}, {} samples, tol {}\n", describe(cfg), cfg.samples, sig(VALIDATE_TOL));
    const SHOWN: usize = 20;
    for v in violations.iter().take(SHOWN) {
        out += &format!("violation: {v}\n");
    }
    if violations.len() > SHOWN {
        out += &format!("... and {} more\n", violations.len() - SHOWN);
    }
    out += &format!("violations: {}\n", violations.len());
    if violations.is_empty() {
        out += "status: pass\n";
        Ok(out)
    } else {
        out += "status: fail\n";
        Err(Failure::new(EXIT_VALIDATION, out))
    }
}

pub fn spectrum(cfg: &RunConfig) -> Result<String, Failure> {
    let p = params(cfg)?;
    let geom = cfg.geometry().map_err(|m| Failure::new(EXIT_VALIDATION, m))?;
    let k_max = cfg.k_max_resolved().map_err(|m| Failure::new(EXIT_VALIDATION, m))?;
    let theta = cfg.theta.unwrap_or(0.0);
    let cond = condition_at(&p, theta)?;
    let topo = spectral_flow::cycle::classify_topology(&cond, spectral_flow::cycle::DEFAULT_COUPLING_TOL);
    let opts = SpectrumOptions { include_zero_mode: cfg.include_zero_mode, ..SpectrumOptions::default() };
    let found = find_spectrum(&cond, &geom, k_max, &opts)?;
    let region = region_of(cfg.cycle, theta);
    let mut rows = Vec::new();
    for r in &found.levels {
        for _ in 0..r.multiplicity {
            let idx = rows.len();
            rows.push(vec![
                sig(theta),
                region.to_string(),
                topo.name.to_string(),
                idx.to_string(),
                sig(r.k),
                r.multiplicity.to_string(),
                sig(r.weight1),
                String::new(),
            ]);
        }
    }
    let path = write_file(&cfg.out, "spectrum.csv", &csv_bytes(&FLOW_HEADER, &rows))?;
    let mut out = format!("spectrum: {}, theta = {}, region {region}, {}\n", describe(cfg), sig(theta), topo.name);
    for r in &found.levels {
        out += &format!("k = {} (multiplicity {}, weight1 {})\n", sig(r.k), r.multiplicity, sig(r.weight1));
    }
    for w in &found.warnings {
        out += &format!("warning: levels {} and {} closer than the scan resolution\n", sig(w.k_lo), sig(w.k_hi));
    }
    out += &format!("wrote {}\n", path.display());
    Ok(out)
}

fn flow_config(cfg: &RunConfig) -> Result<FlowConfig<f64>, Failure> {
    let geom = cfg.geometry().map_err(|m| Failure::new(EXIT_VALIDATION, m))?;
    let k_max = cfg.k_max_resolved().map_err(|m| Failure::new(EXIT_VALIDATION, m))?;
    let mut fc = FlowConfig::new(params(cfg)?, geom, k_max);
    fc.spectrum.include_zero_mode = cfg.include_zero_mode;
    fc.frozen = cfg.frozen;
    Ok(fc)
}

/// One row per expanded level and sample.
pub fn flow_rows(table: &FlowTable<f64>, branches: Option<&BranchSet<f64>>) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (i, s) in table.samples.iter().enumerate() {
        let mut idx = 0;
        for r in &s.spectrum.levels {
            for _ in 0..r.multiplicity {
                let id = branches.and_then(|b| b.slot_ids.get(i)).and_then(|ids| ids.get(idx)).map_or(String::new(), |id| id.to_string());
                rows.push(vec![
                    sig(s.theta),
                    s.region.to_string(),
                    s.topology.name.to_string(),
                    idx.to_string(),
                    sig(r.k),
                    r.multiplicity.to_string(),
                    sig(r.weight1),
                    id,
                ]);
                idx += 1;
            }
        }
    }
    rows
}

fn segment_labels(kind: CycleKind) -> Vec<String> {
    let regions: &[Region] = match kind {
        CycleKind::Long => &[Region::I, Region::II, Region::III, Region::IV, Region::V, Region::VI],
        CycleKind::Short => &[Region::S1, Region::S2, Region::S3, Region::S4],
    };
    regions.iter().map(|r| r.to_string()).collect()
}

fn flow_plot(cfg: &RunConfig, table: &FlowTable<f64>, branches: Option<&BranchSet<f64>>) -> String {
    let series = match branches {
        Some(b) => b
            .branches
            .iter()
            .map(|br| Series { id: br.id, points: br.points.iter().map(|p| (p.theta, p.k)).collect() })
            .collect(),
        // Untracked: one series per level index.
        None => {
            let depth = table.samples.iter().map(|s| s.slots().len()).max().unwrap_or(0);
            (0..depth)
                .map(|j| Series {
                    id: j,
                    points: table.samples.iter().filter_map(|s| s.slots().get(j).map(|sl| (s.theta, sl.k))).collect(),
                })
                .collect()
        }
    };
    let mut title = describe(cfg);
    if let Some(f) = cfg.frozen {
        title += &format!(", frozen at theta = {}", sig(f));
    }
    plot::render(&Plot {
        title,
        k_max: table.config.k_max,
        boundaries: Region::boundaries(cfg.cycle),
        segment_labels: segment_labels(cfg.cycle),
        tick_denominator: match cfg.cycle {
            CycleKind::Long => 3,
            CycleKind::Short => 2,
        },
        series,
    })
}

pub fn flow(cfg: &RunConfig) -> Result<String, Failure> {
    let fc = flow_config(cfg)?;
    let table = sweep(&fc, cfg.theta_steps)?;
    let tracked = track_branches(&table);
    let branches = tracked.as_ref().ok();
    let crossings = detect_crossings(&table, CROSSING_GAP_TOL)?;

    let flow_path = write_file(&cfg.out, "flow.csv", &csv_bytes(&FLOW_HEADER, &flow_rows(&table, branches)))?;
    let crossing_rows: Vec<Vec<String>> = crossings
        .iter()
        .map(|c| vec![sig(c.theta), sig(c.k), sig(c.min_gap), c.level.to_string(), sig(c.weight_separation), c.kind.as_str().to_string()])
        .collect();
    let cross_path = write_file(
        &cfg.out,
        "crossings.csv",
        &csv_bytes(&["theta", "k", "min_gap", "level_index", "weight_separation", "kind"], &crossing_rows),
    )?;
    let mut out = format!("flow: {}, {} theta steps, k_max = {}\n", describe(cfg), cfg.theta_steps, sig(fc.k_max));
    out += &format!("samples: {}\n", table.samples.len());
    out += &format!("resolution warnings: {}\n", table.warnings().len());
    let n_cross = crossings.iter().filter(|c| c.kind == spectral_flow::flow::CrossingKind::Crossing).count();
    out += &format!("crossings: {n_cross} true, {} avoided\n", crossings.len() - n_cross);
    if let Some(b) = branches {
        out += &format!("branches: {} (refinements {})\n", b.branches.len(), b.refinements);
    }
    out += &format!("wrote {}\nwrote {}\n", flow_path.display(), cross_path.display());
    if cfg.emit_plot {
        let path = write_file(&cfg.out, "flow.svg", flow_plot(cfg, &table, branches).as_bytes())?;
        out += &format!("wrote {}\n", path.display());
    }
    match tracked {
        Ok(_) => Ok(out),
        Err(e) => Err(Failure::new(EXIT_AMBIGUITY, format!("{out}tracking failed: {e}\n"))),
    }
}

/// Permutation report; the discrete lines come first after the settings.
pub fn anholonomy_text(cfg: &RunConfig, fc: &FlowConfig<f64>, table: &FlowTable<f64>, b: &BranchSet<f64>, r: &AnholonomyReport) -> String {
    let mut s = String::new();
    s += &format!("cycle = {}\nt = {}\ns = {}\nratio = {}\n", cfg.cycle, sig(cfg.t), sig(cfg.s), cfg.ratio);
    s += &format!("L1 = {}\nL2 = {}\n", sig(fc.geom.l1), sig(fc.geom.l2));
    s += &format!("theta_steps = {}\nk_max = {}\n", cfg.theta_steps, sig(fc.k_max));
    s += &format!("frozen = {}\n", cfg.frozen.map_or("none".into(), sig));
    s += &format!("include_zero_mode = {}\n", cfg.include_zero_mode);
    s += &format!("levels = {}\n", r.n);
    s += &format!("permutation = {}\n", r.one_line());
    if r.is_bijection() {
        s += &format!("cycles = {}\n", r.cycle_notation());
    } else {
        s += "cycles = undefined\n";
    }
    let fixed: Vec<String> = r.fixed_points().iter().map(|i| i.to_string()).collect();
    s += &format!("fixed = {}\n", if fixed.is_empty() { "none".into() } else { fixed.join(" ") });
    let exited: Vec<String> = r.exited.iter().map(|i| i.to_string()).collect();
    s += &format!("exited = {}\n", if exited.is_empty() { "none".into() } else { exited.join(" ") });
    s += &format!("status = {}\n", if r.nontrivial { "nontrivial" } else { "trivial" });
    for (i, j) in r.mapping.iter().enumerate() {
        s += &format!("{i} -> {j}\n");
    }
    s += &format!("periodicity_defect = {}\n", table.periodicity_defect().map_or("level count differs".into(), sig));
    s += &format!("refinements = {}\n", b.refinements);
    s
}

/// The grid-independent lines of a permutation report, as stored in golden
/// files: settings other than numerics, the permutation and its analysis.
pub fn golden_lines(report: &str) -> String {
    const NUMERIC: [&str; 6] = ["L1 ", "L2 ", "theta_steps ", "k_max ", "periodicity_defect ", "refinements "];
    report
        .lines()
        .filter(|l| !l.starts_with("wrote ") && !NUMERIC.iter().any(|p| l.starts_with(p)))
        .map(|l| format!("{l}\n"))
        .collect()
}

pub fn anholonomy(cfg: &RunConfig) -> Result<String, Failure> {
    let fc = flow_config(cfg)?;
    let table = sweep(&fc, cfg.theta_steps)?;
    let branches = track_branches(&table)?;
    let n = cfg.levels.unwrap_or_else(|| default_level_count(&table));
    let report = anholonomy_permutation(&branches, n)?;
    let text = anholonomy_text(cfg, &fc, &table, &branches, &report);
    let path = write_file(&cfg.out, "anholonomy.txt", text.as_bytes())?;
    let mut out = text;
    if cfg.emit_plot {
        let p = write_file(&cfg.out, "flow.svg", flow_plot(cfg, &table, Some(&branches)).as_bytes())?;
        out += &format!("wrote {}\n", p.display());
    }
    out += &format!("wrote {}\n", path.display());
    Ok(out)
}

pub fn web(cfg: &RunConfig) -> Result<String, Failure> {
    let p = params(cfg)?;
    let geom = cfg.geometry().map_err(|m| Failure::new(EXIT_VALIDATION, m))?;
    let (sector, theta) = match (cfg.sector, cfg.theta) {
        (Some(sec), Some(th)) => (sec, th),
        (Some(sec), None) => (sec, sector_midpoint(sec)?),
        (None, Some(th)) => (region_of(cfg.cycle, th), th),
        (None, None) => return Err(Failure::new(EXIT_USAGE, "web needs --sector or --theta".into())),
    };
    if region_of(cfg.cycle, theta) != sector {
        return Err(Failure::new(EXIT_VALIDATION, format!("theta = {} lies outside sector {sector}", sig(theta))));
    }
    let source = match &cfg.web_geometry {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::new(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
            WebSource::Described(WebDescription::parse(&text)?)
        }
        None => WebSource::Default(cfg.web_links),
    };
    let n = cfg.levels.unwrap_or(5);
    let rep = convergence_study(sector, theta, &p, &geom, &cfg.epsilons, n, &source)?;

    let order_str = |o: &LevelOrder<f64>| match o {
        LevelOrder::Fitted(x) => sig(*x),
        LevelOrder::Exact => "exact".to_string(),
        LevelOrder::Missing => "missing".to_string(),
    };
    let mut rows = Vec::new();
    for row in &rep.rows {
        for lvl in 0..n {
            rows.push(vec![
                sig(row.epsilon),
                lvl.to_string(),
                sig(rep.reference[lvl]),
                row.errors[lvl].map_or("missing".into(), sig),
                row.wavelength_ok[lvl].to_string(),
                order_str(&rep.orders[lvl]),
                rep.non_convergent.to_string(),
            ]);
        }
    }
    let path = write_file(
        &cfg.out,
        "web.csv",
        &csv_bytes(&["epsilon", "level_index", "reference_k", "error", "wavelength_ok", "order", "non_convergent"], &rows),
    )?;
    let geometry = match &cfg.web_geometry {
        Some(p) => p.display().to_string(),
        None => format!("built-in ({} links)", match cfg.web_links {
            spectral_flow::web::LinkLengths::CouplingScaled => "scaled",
            spectral_flow::web::LinkLengths::Uniform => "uniform",
        }),
    };
    let mut out = format!("web: {}, sector {sector}, theta = {}, geometry {geometry}\n", describe(cfg), sig(theta));
    for (lvl, o) in rep.orders.iter().enumerate() {
        out += &format!("level {lvl}: k = {}, order {}\n", sig(rep.reference[lvl]), order_str(o));
    }
    out += &format!("order = {}\n", rep.order.map_or("none".into(), sig));
    out += &format!("monotone = {}\nnon_convergent = {}\n", rep.monotone, rep.non_convergent);
    out += &format!("wrote {}\n", path.display());
    Ok(out)
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotARoot { .. } | Error::TrackingAmbiguity { .. } | Error::IncompleteBranch { .. } => EXIT_AMBIGUITY,
            _ => EXIT_VALIDATION,
        };
        Failure::new(code, e.to_string())
    }
}
