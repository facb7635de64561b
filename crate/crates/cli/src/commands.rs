use crate::{Cli, CliError, Command, Format, OUT_DIR_ENV};
use clap::{Args, ValueEnum};
use latdisp::{cz_decompose, evolve, AdmissiblePair, Grid64, Lattice64, NlsConfig64, PhaseKind, C64};
use latdisp_harness::output::{
    decay_table, knapp_table, metadata, num, pairs_table, scan_table, write_csv, write_json, Table,
};
use latdisp_harness::scan::grid_size;
use latdisp_harness::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

/// Real number, `inf`, or a fraction `a/b`.
pub fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    match t {
        "inf" | "+inf" | "infinity" | "∞" => return Ok(f64::INFINITY),
        _ => {}
    }
    if let Some((a, b)) = t.split_once('/') {
        let a: f64 = a.trim().parse().map_err(|_| format!("bad number '{s}'"))?;
        let b: f64 = b.trim().parse().map_err(|_| format!("bad number '{s}'"))?;
        return Ok(a / b);
    }
    t.parse().map_err(|_| format!("bad number '{s}'"))
}

fn parse_kind(s: &str) -> std::result::Result<PhaseKind, String> {
    s.parse().map_err(|e: latdisp::Error| e.to_string())
}

#[derive(Args, Debug)]
pub struct PairsArgs {
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 5)]
    count: usize,
    /// Finite stand-in for r = ∞ at the excluded endpoint.
    #[arg(long, value_parser = parse_real, default_value = "100")]
    r_max: f64,
}

#[derive(Args, Debug)]
pub struct DecayArgs {
    /// schrodinger | klein-gordon
    #[arg(long, value_parser = parse_kind, default_value = "schrodinger")]
    kind: PhaseKind,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, value_parser = parse_real, default_value = "1")]
    h: f64,
    /// Points per axis; a size suited to the default window when omitted.
    #[arg(long)]
    m: Option<usize>,
    /// Full spectrum (the default).
    #[arg(long, conflicts_with = "n")]
    full: bool,
    /// Localize the data to the dyadic band at scale N.
    #[arg(long, value_parser = parse_real)]
    n: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    t_min: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = 24)]
    points: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    IndexNoise,
    Gaussian,
    PointMass,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, value_enum, default_value_t = Family::IndexNoise)]
    family: Family,
    /// Gaussian width in physical units.
    #[arg(long, value_parser = parse_real, default_value = "2")]
    sigma: f64,
    /// Noise support radius in sites.
    #[arg(long, default_value_t = 8)]
    window: i64,
}

impl FamilyArgs {
    fn family(&self) -> DataFamily {
        match self.family {
            Family::IndexNoise => DataFamily::IndexNoise { window: self.window },
            Family::Gaussian => DataFamily::Gaussian { sigma: self.sigma },
            Family::PointMass => DataFamily::PointMass,
        }
    }
}

#[derive(Args, Debug)]
pub struct StrichartzArgs {
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, value_parser = parse_real, default_value = "1")]
    h: f64,
    /// Physical box length L; M = L/h.
    #[arg(long = "box", value_parser = parse_real, default_value = "512")]
    box_length: f64,
    #[arg(long, value_parser = parse_real)]
    q: f64,
    #[arg(long, value_parser = parse_real)]
    r: f64,
    #[command(flatten)]
    data: FamilyArgs,
    #[arg(long, default_value_t = 512)]
    n_t: usize,
    #[arg(long, value_parser = parse_real, default_value = "0.01")]
    tail_tolerance: f64,
}

#[derive(Args, Debug)]
pub struct UniformityArgs {
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long = "box", value_parser = parse_real, default_value = "512")]
    box_length: f64,
    #[arg(long, value_parser = parse_real, value_delimiter = ',', default_value = "1,1/2,1/4,1/8")]
    h_list: Vec<f64>,
    #[arg(long, value_parser = parse_real)]
    q: f64,
    #[arg(long, value_parser = parse_real)]
    r: f64,
    #[command(flatten)]
    data: FamilyArgs,
    #[arg(long, default_value_t = 512)]
    n_t: usize,
    #[arg(long, value_parser = parse_real, default_value = "0.01")]
    tail_tolerance: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum InequalityName {
    Bernstein,
    GagliardoNirenberg,
    SobolevEndpoint,
    NormEquivalence,
    SquareFunction,
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    #[arg(long, value_enum)]
    inequality: InequalityName,
    #[arg(long, value_parser = parse_real)]
    p: f64,
    #[arg(long, value_parser = parse_real)]
    q: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    s: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    theta: Option<f64>,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long = "box", value_parser = parse_real, default_value = "64")]
    box_length: f64,
    #[arg(long, value_parser = parse_real, value_delimiter = ',', default_value = "1,1/2,1/4,1/8,1/16,1/32,1/64")]
    h_list: Vec<f64>,
    #[arg(long, default_value_t = latdisp_harness::ensemble::DEFAULT_ENSEMBLE_SIZE)]
    ensemble: usize,
}

#[derive(Args, Debug)]
pub struct KnappArgs {
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Fixed h for an epsilon scan.
    #[arg(long, value_parser = parse_real, requires = "eps_list")]
    h: Option<f64>,
    #[arg(long, value_parser = parse_real, value_delimiter = ',')]
    eps_list: Vec<f64>,
    /// h values for a scan at epsilon = kappa h².
    #[arg(long, value_parser = parse_real, value_delimiter = ',', conflicts_with_all = ["h", "eps_list"])]
    h_list: Vec<f64>,
    #[arg(long, value_parser = parse_real, default_value = "0.5")]
    kappa: f64,
    #[arg(long, value_parser = parse_real)]
    q: f64,
    #[arg(long, value_parser = parse_real)]
    r: f64,
    /// Derivative order; 1/q when omitted.
    #[arg(long, value_parser = parse_real)]
    s: Option<f64>,
    #[arg(long)]
    quad_points: Option<usize>,
    #[arg(long)]
    no_tail_correction: bool,
}

#[derive(Args, Debug)]
pub struct CzArgs {
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 64)]
    m: usize,
    #[arg(long, value_parser = parse_real, default_value = "1")]
    h: f64,
    /// Threshold; halfway between the average and the maximum when omitted (1 for zero data).
    #[arg(long, value_parser = parse_real)]
    lambda: Option<f64>,
    /// Probability that a site carries mass.
    #[arg(long, value_parser = parse_real, default_value = "0.1")]
    density: f64,
    /// Site values are integers in 1..=max-value.
    #[arg(long, default_value_t = 16)]
    max_value: u32,
}

#[derive(Args, Debug)]
struct PhysicalData {
    #[arg(long = "box", value_parser = parse_real, default_value = "64")]
    box_length: f64,
    #[arg(long, value_parser = parse_real, default_value = "1")]
    amplitude: f64,
    #[arg(long, value_parser = parse_real, default_value = "3")]
    width: f64,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, value_parser = parse_real)]
    p: f64,
    #[arg(long, value_parser = parse_real, default_value = "0.01")]
    dt: f64,
    #[arg(long = "t", value_parser = parse_real, default_value = "1")]
    t_final: f64,
}

#[derive(Args, Debug)]
pub struct DnlsArgs {
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, value_parser = parse_real, default_value = "1/2")]
    h: f64,
    #[command(flatten)]
    phys: PhysicalData,
    /// Carrier wavenumber along the first axis.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true, default_value = "0")]
    k0: f64,
    /// Keep every n-th step in the snapshot dump.
    #[arg(long, default_value_t = 16)]
    stride: usize,
    /// Binary snapshot dump.
    #[arg(long)]
    snapshots: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct S1Args {
    #[arg(long, value_parser = parse_real, value_delimiter = ',', default_value = "1,1/2,1/4,1/8,1/16")]
    h_list: Vec<f64>,
    #[command(flatten)]
    phys: PhysicalData,
    /// Number of admissible pairs in the supremum.
    #[arg(long, default_value_t = 5)]
    pairs: usize,
    #[arg(long, value_parser = parse_real, default_value = "100")]
    r_max: f64,
}

struct Document {
    command: &'static str,
    config: Value,
    table: Table,
    result: Value,
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> std::result::Result<(), CliError> {
    let seed = cli.common.seed;
    let threads = cli.common.threads;
    if threads == 0 {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    let doc = match &cli.command {
        Command::Pairs(a) => pairs(a)?,
        Command::Decay(a) => decay(a)?,
        Command::Strichartz(a) => strichartz(a, seed)?,
        Command::Uniformity(a) => uniformity(a, seed, threads)?,
        Command::Constants(a) => constants(a, seed, threads)?,
        Command::Knapp(a) => knapp(a)?,
        Command::Czdemo(a) => czdemo(a, seed)?,
        Command::Dnls(a) => dnls(a)?,
        Command::S1(a) => s1(a, threads)?,
    };
    let mut config = doc.config;
    if let Value::Object(map) = &mut config {
        map.insert("seed".into(), json!(seed));
        map.insert("threads".into(), json!(threads));
    }
    let meta = metadata(doc.command, config);
    match &cli.common.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(resolve(path))?);
            write_doc(&mut w, cli.common.format, &meta, &doc.table, &doc.result)?;
            w.flush()?;
        }
        None => write_doc(stdout, cli.common.format, &meta, &doc.table, &doc.result)?,
    }
    Ok(())
}

fn write_doc(
    w: &mut dyn Write,
    format: Format,
    meta: &Value,
    table: &Table,
    result: &Value,
) -> std::result::Result<(), CliError> {
    match format {
        Format::Csv => write_csv(w, meta, table)?,
        Format::Json => write_json(w, meta, result)?,
    }
    Ok(())
}

/// Relative paths land in `$LATDISP_OUT_DIR` when it is set.
pub fn resolve(path: &PathBuf) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => {
            let dir = PathBuf::from(dir);
            let _ = std::fs::create_dir_all(&dir);
            dir.join(path)
        }
        _ => path.clone(),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn exp_value(x: f64) -> Value {
    latdisp_harness::output::exponent(x)
}

fn pairs(a: &PairsArgs) -> std::result::Result<Document, CliError> {
    let list = latdisp::admissible_pairs_capped(a.d, a.count, a.r_max)?;
    let result = json!(list
        .iter()
        .map(|p| json!({ "d": p.d, "q": exp_value(p.q), "r": exp_value(p.r), "defect": p.defect() }))
        .collect::<Vec<_>>());
    Ok(Document {
        command: "pairs",
        config: json!({ "d": a.d, "count": a.count, "r_max": exp_value(a.r_max) }),
        table: pairs_table(&list),
        result,
    })
}

fn decay(a: &DecayArgs) -> std::result::Result<Document, CliError> {
    let band = match a.n {
        Some(n) => Band::Localized(n),
        None => Band::Full,
    };
    let kg = a.kind == PhaseKind::KleinGordon;
    let m = a.m.unwrap_or(match (a.d, kg) {
        (1, false) => 16384,
        (1, true) => 32768,
        (2, _) => 1024,
        _ => 64,
    });
    // Default windows sit inside the boundary band of the default grid at h = 1;
    // the Schrödinger flow is self-similar in t/h².
    let (t0, t1) = match (a.d, kg, band) {
        (1, false, Band::Full) => (5.0, 500.0),
        (1, false, Band::Localized(_)) => (50.0, 5000.0),
        (1, true, _) => (100.0, 10000.0),
        (2, _, _) => (1.5, 150.0),
        _ => (0.5, 8.0),
    };
    let scale = if kg { a.h } else { a.h * a.h };
    let t_min = a.t_min.unwrap_or(t0 * scale);
    let t_max = a.t_max.unwrap_or(t1 * scale);
    if !(t_min > 0.0 && t_max > t_min) {
        return Err(CliError::Config(format!(
            "need 0 < t-min < t-max, got {t_min}, {t_max}"
        )));
    }
    let lat = Lattice64::new(a.h, a.d, m)?;
    let fit = dispersive_decay_scan(
        a.kind,
        &Grid64::point_mass(lat),
        band,
        &log_space(t_min, t_max, a.points),
    )?;
    Ok(Document {
        command: "decay",
        config: json!({ "kind": a.kind.name(), "d": a.d, "h": a.h, "m": m, "band": to_value(&band), "t_min": t_min, "t_max": t_max, "points": a.points, "data": "point_mass" }),
        table: decay_table(&fit),
        result: to_value(&fit),
    })
}

const STRICHARTZ_COLUMNS: [&str; 13] = [
    "d",
    "h",
    "m",
    "q",
    "r",
    "family",
    "value",
    "horizon",
    "n_t",
    "characteristic_time",
    "tail_fraction",
    "tail_exponent",
    "max_boundary_fraction",
];

fn strichartz(a: &StrichartzArgs, seed: u64) -> std::result::Result<Document, CliError> {
    let pair = AdmissiblePair::new(a.q, a.r, a.d)?;
    let m = grid_size(a.box_length, a.h)?;
    let lat = Lattice64::new(a.h, a.d, m)?;
    let family = a.data.family();
    let u0 = family.sample(&lat, seed);
    let s = strichartz_auto(&u0, &pair, a.n_t, a.tail_tolerance)?;
    let family_name = to_value(&family)["family"].as_str().unwrap_or_default().to_string();
    let row = vec![
        a.d.to_string(),
        num(a.h),
        m.to_string(),
        num(a.q),
        num(a.r),
        family_name,
        num(s.value),
        num(s.horizon),
        s.n_t.to_string(),
        num(s.characteristic_time),
        num(s.tail_fraction),
        s.tail_exponent.map(num).unwrap_or_default(),
        num(s.max_boundary_fraction),
    ];
    Ok(Document {
        command: "strichartz",
        config: json!({ "d": a.d, "h": a.h, "box_length": a.box_length, "q": exp_value(a.q), "r": exp_value(a.r), "family": to_value(&family), "n_t": a.n_t, "tail_tolerance": a.tail_tolerance }),
        table: Table {
            header: STRICHARTZ_COLUMNS.to_vec(),
            rows: vec![row],
            comments: Vec::new(),
        },
        result: to_value(&s),
    })
}

fn uniformity(a: &UniformityArgs, seed: u64, threads: usize) -> std::result::Result<Document, CliError> {
    let pair = AdmissiblePair::new(a.q, a.r, a.d)?;
    let mut cfg = UniformityConfig::new(a.d, a.box_length, a.h_list.clone(), pair);
    cfg.family = a.data.family();
    cfg.n_t = a.n_t;
    cfg.tail_tolerance = a.tail_tolerance;
    cfg.seed = seed;
    cfg.threads = threads;
    let scan = uniformity_scan(&cfg)?;
    Ok(Document {
        command: "uniformity",
        config: to_value(&cfg),
        table: scan_table(&scan),
        result: to_value(&scan),
    })
}

fn constants(a: &ConstantsArgs, seed: u64, threads: usize) -> std::result::Result<Document, CliError> {
    let need = |x: Option<f64>, flag: &str| {
        x.ok_or_else(|| CliError::Config(format!("--{flag} is required for this inequality")))
    };
    let p = a.p;
    let inequality = match a.inequality {
        InequalityName::Bernstein => Inequality::Bernstein { p, q: need(a.q, "q")? },
        InequalityName::GagliardoNirenberg => Inequality::GagliardoNirenberg {
            p,
            q: need(a.q, "q")?,
            s: need(a.s, "s")?,
            theta: need(a.theta, "theta")?,
        },
        InequalityName::SobolevEndpoint => Inequality::SobolevEndpoint {
            p,
            q: need(a.q, "q")?,
            s: need(a.s, "s")?,
        },
        InequalityName::NormEquivalence => Inequality::NormEquivalence { p, s: need(a.s, "s")? },
        InequalityName::SquareFunction => Inequality::SquareFunction { p },
    };
    let mut cfg = ConstantScanConfig::new(inequality, a.d, a.box_length, a.h_list.clone());
    cfg.ensemble_size = a.ensemble;
    cfg.seed = seed;
    cfg.threads = threads;
    let scan = inequality_constant_scan(&cfg)?;
    Ok(Document {
        command: "constants",
        config: to_value(&cfg),
        table: scan_table(&scan),
        result: to_value(&scan),
    })
}

fn knapp(a: &KnappArgs) -> std::result::Result<Document, CliError> {
    let pair = AdmissiblePair::new(a.q, a.r, a.d)?;
    let s = a.s.unwrap_or(pair.inv_q());
    let mut cfg = KnappConfig::new(a.d);
    if let Some(n) = a.quad_points {
        cfg.quad_points = n;
    }
    cfg.tail_correction = !a.no_tail_correction;
    let (scan, mode) = match (a.h, a.h_list.is_empty()) {
        (Some(h), true) => (
            knapp_eps_scan(h, &a.eps_list, s, &pair, &cfg)?,
            json!({ "scan": "epsilon", "h": h, "eps_list": a.eps_list }),
        ),
        (None, false) => (
            knapp_h_scan(a.kappa, &a.h_list, s, &pair, &cfg)?,
            json!({ "scan": "h", "kappa": a.kappa, "h_list": a.h_list }),
        ),
        _ => return Err(CliError::Config("give either --h with --eps-list, or --h-list".into())),
    };
    Ok(Document {
        command: "knapp",
        config: json!({ "q": exp_value(a.q), "r": exp_value(a.r), "s": s, "mode": mode, "quadrature": to_value(&cfg) }),
        table: knapp_table(&scan),
        result: to_value(&scan),
    })
}

const CZ_COLUMNS: [&str; 6] = ["cube", "origin", "scale", "side", "average", "sites"];

fn czdemo(a: &CzArgs, seed: u64) -> std::result::Result<Document, CliError> {
    if !(0.0..=1.0).contains(&a.density) || a.max_value == 0 {
        return Err(CliError::Config(
            "density must lie in [0, 1] and max-value must be positive".into(),
        ));
    }
    let lat = Lattice64::new(a.h, a.d, a.m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<C64> = (0..lat.len())
        .map(|_| {
            let v = if rng.random_bool(a.density) {
                rng.random_range(1..=a.max_value) as f64
            } else {
                0.0
            };
            C64::new(v, 0.0)
        })
        .collect();
    let f = Grid64::from_values(lat, values)?;
    let average = f.values().iter().map(|z| z.re).sum::<f64>() / lat.len() as f64;
    let peak = f.max_abs();
    let lambda = a
        .lambda
        .unwrap_or(if peak > 0.0 { 0.5 * (average + peak) } else { 1.0 });
    let cz = cz_decompose(&f, lambda)?;
    let check = cz.check(&f);
    let exact = cz.reconstruct().values() == f.values();
    let bad_mean = cz
        .bads
        .iter()
        .map(|b| b.values().iter().sum::<C64>().norm() * lat.cell_volume())
        .fold(0.0, f64::max);
    let summary = json!({
        "lambda": lambda,
        "cubes": cz.cubes.len(),
        "bounded_off_cubes": check.bounded_off_cubes,
        "measure_bound": check.measure_bound,
        "average_bracket": check.average_bracket,
        "disjoint": check.disjoint,
        "exact_reconstruction": exact,
        "max_bad_mean": bad_mean,
    });
    let d = a.d;
    let cubes: Vec<Value> = cz
        .cubes
        .iter()
        .map(|c| json!({ "origin": &c.origin[..d], "scale": c.scale, "side": c.side, "average": c.average, "sites": c.sites.len() }))
        .collect();
    let rows = cz
        .cubes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let origin = c.origin[..d]
                .iter()
                .map(|o| o.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            vec![
                i.to_string(),
                origin,
                c.scale.to_string(),
                num(c.side),
                num(c.average),
                c.sites.len().to_string(),
            ]
        })
        .collect();
    Ok(Document {
        command: "czdemo",
        config: json!({ "d": a.d, "m": a.m, "h": a.h, "lambda": lambda, "density": a.density, "max_value": a.max_value }),
        table: Table {
            header: CZ_COLUMNS.to_vec(),
            rows,
            comments: vec![("check", summary.clone())],
        },
        result: json!({ "check": summary, "cubes": cubes }),
    })
}

fn gaussian(lat: Lattice64, amplitude: f64, width: f64, k0: f64) -> Grid64 {
    Grid64::from_positions(lat, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        C64::from_polar(amplitude * (-r2 / (2.0 * width * width)).exp(), k0 * x[0])
    })
}

const DNLS_COLUMNS: [&str; 6] = ["t", "mass", "energy", "h1", "hdot1", "boundary_mass"];

fn dnls(a: &DnlsArgs) -> std::result::Result<Document, CliError> {
    let ph = &a.phys;
    let m = grid_size(ph.box_length, a.h)?;
    let lat = Lattice64::new(a.h, a.d, m)?;
    let mut cfg = NlsConfig64::new(ph.lambda, ph.p, ph.dt, ph.t_final);
    cfg.snapshot_stride = a.stride;
    let traj = evolve(&gaussian(lat, ph.amplitude, ph.width, a.k0), &cfg)?;
    if let Some(path) = &a.snapshots {
        let mut w = BufWriter::new(File::create(resolve(path))?);
        traj.write_snapshots(&mut w)?;
        w.flush()?;
    }
    let drift = |v: &[f64]| v.iter().map(|x| (x - v[0]).abs()).fold(0.0, f64::max);
    let summary = json!({
        "steps": traj.times.len() - 1,
        "mass_drift": drift(&traj.mass),
        "energy_drift": drift(&traj.energy),
        "snapshots": traj.snapshots.len(),
    });
    let rows = (0..traj.times.len())
        .map(|k| {
            vec![
                num(traj.times[k]),
                num(traj.mass[k]),
                num(traj.energy[k]),
                num(traj.h1[k]),
                num(traj.hdot1[k]),
                num(traj.boundary_mass[k]),
            ]
        })
        .collect();
    Ok(Document {
        command: "dnls",
        config: json!({
            "d": a.d, "h": a.h, "m": m, "box_length": ph.box_length, "amplitude": ph.amplitude, "width": ph.width, "k0": a.k0,
            "lambda": ph.lambda, "p": ph.p, "dt": ph.dt, "t_final": ph.t_final, "snapshot_stride": a.stride,
        }),
        table: Table {
            header: DNLS_COLUMNS.to_vec(),
            rows,
            comments: vec![("summary", summary.clone())],
        },
        result: json!({
            "summary": summary,
            "t": traj.times, "mass": traj.mass, "energy": traj.energy, "h1": traj.h1, "hdot1": traj.hdot1, "boundary_mass": traj.boundary_mass,
        }),
    })
}

fn s1(a: &S1Args, threads: usize) -> std::result::Result<Document, CliError> {
    let ph = &a.phys;
    let mut cfg = UniformBoundConfig::new(ph.lambda, ph.p, a.h_list.clone());
    cfg.box_length = ph.box_length;
    cfg.amplitude = ph.amplitude;
    cfg.width = ph.width;
    cfg.dt = ph.dt;
    cfg.t_final = ph.t_final;
    cfg.pair_count = a.pairs;
    cfg.r_max = a.r_max;
    cfg.threads = threads;
    let (scan, checks) = uniform_bound_experiment(&cfg)?;
    let mut table = scan_table(&scan);
    table.comments.push(("bounds", to_value(&checks)));
    Ok(Document {
        command: "s1",
        config: to_value(&cfg),
        table,
        result: json!({ "scan": scan, "bounds": checks }),
    })
}
