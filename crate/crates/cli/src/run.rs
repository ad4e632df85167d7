//! Executes a parsed experiment and writes its artifacts plus `manifest.json`.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use symba_core::boolca::{run_gated, BoolWorld};
use symba_core::core1d::{run_1d_logged, seed_world, Spacetime};
use symba_core::dnaca::{run_lattice, DnaLattice, KmerSpacetime, LatticeConfig};
use symba_core::dnasoup::{run_seed_with, SoupConfig};
use symba_core::engine2d::{seed_world_2d, step_2d, World2D};
use symba_core::image::RgbImage;
use symba_core::io::{read_spacetime_bin, read_spacetime_csv, write_spacetime_bin, write_spacetime_csv};
use symba_core::metrics::{
    mi_matrix, population_series, repeated_window_fraction, run_fraction, shannon_entropy, shannon_entropy_with,
    threshold_indicator, value_histogram, wilson_interval, Alphabet, WindowStats,
};

use crate::config::{
    ExperimentConfig, Format, LatticeParams, Params, Run1dParams, Run2dParams, RunBoolParams, SoupParams,
};
use crate::render::{render_angle, render_bool, render_kmer, render_signed, CATEGORICAL, GRAY};
use crate::robustness::robustness_sweep;

pub const TOOL: &str = "symba";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

fn runtime<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: PathBuf,
    pub formats: Vec<Format>,
    /// Worker threads for seed sweeps; 0 lets rayon decide.
    pub jobs: usize,
}

/// Collects written files so the manifest can list them.
struct Sink {
    root: PathBuf,
    formats: Vec<Format>,
    files: Mutex<Vec<String>>,
}

impl Sink {
    fn new(root: &Path, formats: &[Format]) -> Result<Sink, CliError> {
        fs::create_dir_all(root).map_err(|e| runtime(format!("cannot create {}: {e}", root.display())))?;
        Ok(Sink { root: root.to_path_buf(), formats: formats.to_vec(), files: Mutex::new(Vec::new()) })
    }

    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    fn write(&self, rel: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| runtime(format!("cannot create {}: {e}", parent.display())))?;
        }
        fs::write(&path, bytes).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
        self.files.lock().unwrap().push(rel.to_string());
        Ok(())
    }

    fn finish(self, manifest: serde_json::Value) -> Result<serde_json::Value, CliError> {
        let mut files = self.files.into_inner().unwrap();
        files.push("manifest.json".into());
        files.sort();
        let mut manifest = manifest;
        manifest["artifacts"] = json!(files);
        let text = serde_json::to_string_pretty(&manifest).map_err(runtime)? + "\n";
        fs::write(self.root.join("manifest.json"), text).map_err(runtime)?;
        Ok(manifest)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn st_csv(st: &Spacetime) -> Vec<u8> {
    let mut buf = Vec::new();
    write_spacetime_csv(st, &mut buf).expect("writing to memory");
    buf
}

fn st_bin(st: &Spacetime) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_spacetime_bin(st, &mut buf).map_err(runtime)?;
    Ok(buf)
}

fn format_names(formats: &[Format]) -> Vec<&'static str> {
    formats
        .iter()
        .map(|f| match f {
            Format::Csv => "csv",
            Format::Ppm => "ppm",
            Format::Bin => "bin",
        })
        .collect()
}

/// Runs `cfg` and writes everything under `opts.out`. `config_text` is the
/// raw file the manifest hash is taken over.
pub fn execute(cfg: &ExperimentConfig, config_text: &str, opts: &RunOptions) -> Result<serde_json::Value, CliError> {
    let sink = Sink::new(&opts.out, &opts.formats)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build().map_err(runtime)?;
    let seeds = &cfg.seeds;
    let dir = |seed: u64| if seeds.len() > 1 { format!("seed_{seed}/") } else { String::new() };
    let per_seed = |f: &(dyn Fn(u64, &str) -> Result<(), CliError> + Sync)| -> Result<(), CliError> {
        pool.install(|| seeds.par_iter().map(|&s| f(s, &dir(s))).collect::<Result<Vec<()>, _>>()).map(|_| ())
    };
    match &cfg.params {
        Params::Run1d(p) => per_seed(&|seed, d| run1d(&sink, p, seed, d))?,
        Params::Run2d(p) => per_seed(&|seed, d| run2d(&sink, p, seed, d))?,
        Params::RunBool(p) => per_seed(&|seed, d| runbool(&sink, p, seed, d))?,
        Params::DnaCa(p) => per_seed(&|seed, d| dnaca(&sink, p, seed, d))?,
        Params::DnaSoup(p) => {
            let runs = pool.install(|| {
                seeds.par_iter().map(|&s| dnasoup_seed(&sink, p, s, &dir(s))).collect::<Result<Vec<_>, _>>()
            })?;
            dnasoup_summary(&sink, p, &runs)?;
        }
        Params::Robustness(p) => {
            let report = robustness_sweep(p).map_err(CliError::Runtime)?;
            if sink.wants(Format::Csv) {
                sink.write("robustness.csv", report.to_csv().as_bytes())?;
            }
            if sink.wants(Format::Ppm) {
                let mut img = RgbImage::new(p.distances.len(), p.values.len());
                for (i, r) in report.rows.iter().enumerate() {
                    let color = if r.survived { [40, 170, 60] } else { [170, 40, 40] };
                    img.set(i % p.distances.len(), i / p.distances.len(), color);
                }
                sink.write("robustness.ppm", &img.to_ppm())?;
            }
        }
    }
    sink.finish(json!({
        "tool": TOOL,
        "version": VERSION,
        "kind": cfg.kind.name(),
        "config_sha256": sha256_hex(config_text.as_bytes()),
        "seeds": seeds,
        "formats": format_names(&opts.formats),
    }))
}

fn run1d(sink: &Sink, p: &Run1dParams, seed: u64, dir: &str) -> Result<(), CliError> {
    let world = seed_world(p.length, &p.init, seed)
        .and_then(|w| w.with_boundary(p.boundary).with_norm_map(p.norm_map.clone()))
        .map_err(runtime)?;
    let (st, log) = run_1d_logged(&world, p.generations);
    if sink.wants(Format::Csv) {
        sink.write(&format!("{dir}spacetime.csv"), &st_csv(&st))?;
        let pop = population_series(&st, &log).map_err(runtime)?;
        let mut out = String::from("metric,generation,value\n");
        for (name, series) in [
            ("living_cells", &pop.living_cells),
            ("replication_candidates", &pop.replication_candidates),
            ("collisions", &pop.collisions),
        ] {
            for (g, v) in series.iter().enumerate() {
                out.push_str(&format!("{name},{g},{v}\n"));
            }
        }
        sink.write(&format!("{dir}population.csv"), out.as_bytes())?;
    }
    if sink.wants(Format::Bin) {
        sink.write(&format!("{dir}spacetime.bin"), &st_bin(&st)?)?;
    }
    if sink.wants(Format::Ppm) {
        sink.write(&format!("{dir}spacetime.ppm"), &render_signed(st.width(), st.data()).to_ppm())?;
    }
    Ok(())
}

/// `SYMB2`, `u32` width, height and frame count, then per frame and cell the
/// `(dx, dy)` pair as two `i32`, `(0, 0)` for an empty cell. Little-endian.
pub fn field_bin(frames: &[World2D]) -> Vec<u8> {
    let (w, h) = frames.first().map_or((0, 0), |f| (f.width(), f.height()));
    let mut out = b"SYMB2".to_vec();
    for n in [w, h, frames.len()] {
        out.extend_from_slice(&(n as u32).to_le_bytes());
    }
    for f in frames {
        for c in f.cells() {
            let (dx, dy) = c.map_or((0, 0), |g| (g.dx, g.dy));
            out.extend_from_slice(&dx.to_le_bytes());
            out.extend_from_slice(&dy.to_le_bytes());
        }
    }
    out
}

fn run2d(sink: &Sink, p: &Run2dParams, seed: u64, dir: &str) -> Result<(), CliError> {
    let mut world = seed_world_2d(p.width, p.height, p.norm, p.density, p.max_abs, seed).map_err(runtime)?;
    let mut kept = Vec::new();
    let mut rows = String::from("metric,generation,value\n");
    let mut occupied = Vec::with_capacity(p.generations);
    let mut collisions = vec![0usize];
    for g in 0..p.generations {
        if g > 0 {
            let (next, c) = step_2d(&world);
            world = next;
            collisions.push(c);
        }
        occupied.push(world.occupied());
        if g % p.frame_every == 0 {
            if sink.wants(Format::Ppm) {
                sink.write(&format!("{dir}frames/frame_{g:05}.ppm"), &render_angle(&world).to_ppm())?;
            }
            if sink.wants(Format::Bin) {
                kept.push(world.clone());
            }
        }
    }
    if sink.wants(Format::Csv) {
        for (name, series) in [("occupied", &occupied), ("collisions", &collisions)] {
            for (g, v) in series.iter().enumerate() {
                rows.push_str(&format!("{name},{g},{v}\n"));
            }
        }
        sink.write(&format!("{dir}population.csv"), rows.as_bytes())?;
    }
    if sink.wants(Format::Bin) {
        sink.write(&format!("{dir}field.bin"), &field_bin(&kept))?;
    }
    Ok(())
}

fn runbool(sink: &Sink, p: &RunBoolParams, seed: u64, dir: &str) -> Result<(), CliError> {
    let world = BoolWorld::random(p.length, p.density, seed).map_err(runtime)?;
    let run = run_gated(&world, p.gate, p.generations);
    if sink.wants(Format::Bin) {
        sink.write(&format!("{dir}spacetime.pbm"), &run.spacetime.to_pbm())?;
        sink.write(&format!("{dir}decay.pbm"), &run.decay_log.to_pbm())?;
    }
    if sink.wants(Format::Ppm) {
        sink.write(&format!("{dir}spacetime.ppm"), &render_bool(&run.spacetime, Some(&run.decay_log)).to_ppm())?;
    }
    if sink.wants(Format::Csv) {
        let mut out = String::from("metric,generation,value\n");
        for (name, m) in [("active", &run.spacetime), ("decays", &run.decay_log)] {
            for (g, row) in m.rows().enumerate() {
                out.push_str(&format!("{name},{g},{}\n", row.iter().filter(|&&b| b).count()));
            }
        }
        sink.write(&format!("{dir}activity.csv"), out.as_bytes())?;
    }
    Ok(())
}

/// Per-k window statistics of one soup, one entry per cycle.
struct SoupRun {
    stats: Vec<Vec<WindowStats>>,
}

fn dnasoup_seed(sink: &Sink, p: &SoupParams, seed: u64, dir: &str) -> Result<SoupRun, CliError> {
    let cfg = SoupConfig { rng_seed: seed, ..p.soup.clone() };
    let mut stats: Vec<Vec<WindowStats>> = vec![Vec::with_capacity(cfg.cycles + 1); p.ks.len()];
    let mut snapshots = String::from("cycle,strand_id,sequence\n");
    let last = cfg.cycles;
    run_seed_with(&cfg, seed, |soup| {
        let snap = soup.snapshot();
        let seqs = snap.sequences();
        for (i, &k) in p.ks.iter().enumerate() {
            stats[i].push(repeated_window_fraction(&seqs, k));
        }
        if snap.cycle % p.snapshot_every == 0 || snap.cycle == last {
            for (id, s) in &snap.strands {
                snapshots.push_str(&format!("{},{id},{}\n", snap.cycle, String::from_utf8_lossy(s)));
            }
        }
    });
    if sink.wants(Format::Csv) {
        sink.write(&format!("{dir}snapshots.csv"), snapshots.as_bytes())?;
        let mut out = String::from("k,cycle,windows,singletons,repeated_fraction\n");
        for (i, &k) in p.ks.iter().enumerate() {
            for (t, w) in stats[i].iter().enumerate() {
                out.push_str(&format!("{k},{t},{},{},{}\n", w.windows, w.singletons, w.repeated_fraction));
            }
        }
        sink.write(&format!("{dir}repetition.csv"), out.as_bytes())?;
    }
    Ok(SoupRun { stats })
}

fn dnasoup_summary(sink: &Sink, p: &SoupParams, runs: &[SoupRun]) -> Result<(), CliError> {
    if !sink.wants(Format::Csv) {
        return Ok(());
    }
    let mut out = String::from("k,t,P,lower,upper\n");
    for (i, &k) in p.ks.iter().enumerate() {
        let indicators: Vec<Vec<bool>> = runs
            .iter()
            .map(|r| r.stats[i].iter().map(|w| threshold_indicator(w.repeated_fraction, p.tau)).collect())
            .collect();
        let fractions = run_fraction(&indicators).map_err(runtime)?;
        for (t, frac) in fractions.iter().enumerate() {
            let ones = indicators.iter().filter(|r| r[t]).count();
            let (lo, hi) = wilson_interval(ones, indicators.len());
            out.push_str(&format!("{k},{t},{frac},{lo},{hi}\n"));
        }
    }
    sink.write("motifs.csv", out.as_bytes())
}

fn legend_json(st: &KmerSpacetime, p: &LatticeParams) -> String {
    let legend: Vec<serde_json::Value> = st
        .legend
        .iter()
        .enumerate()
        .map(|(rank, &id)| {
            json!({
                "rank": rank,
                "id": id,
                "kmer": st.names[id as usize],
                "color": CATEGORICAL[rank % CATEGORICAL.len()],
            })
        })
        .collect();
    let doc = json!({
        "k": st.k,
        "readout": p.readout.to_string(),
        "unassigned_id": -1,
        "unassigned_color": [0, 0, 0],
        "other_color": GRAY,
        "names": st.names,
        "legend": legend,
    });
    serde_json::to_string_pretty(&doc).expect("json value") + "\n"
}

fn dnaca(sink: &Sink, p: &LatticeParams, seed: u64, dir: &str) -> Result<(), CliError> {
    let cfg = LatticeConfig { rng_seed: seed, ..p.lattice.clone() };
    let initial = DnaLattice::seeded(&cfg).map_err(runtime)?;
    let run = run_lattice(&initial, &cfg, p.cycles, &p.ks, p.top_m, p.readout).map_err(runtime)?;
    for st in &run.spacetimes {
        let k = st.k;
        let ids = Spacetime::from_rows(st.width, st.ids.clone()).map_err(runtime)?;
        if sink.wants(Format::Csv) {
            sink.write(&format!("{dir}dominant_k{k}.csv"), &st_csv(&ids))?;
        }
        if sink.wants(Format::Bin) {
            sink.write(&format!("{dir}dominant_k{k}.bin"), &st_bin(&ids)?)?;
        }
        if sink.wants(Format::Ppm) {
            sink.write(&format!("{dir}dominant_k{k}.ppm"), &render_kmer(st).to_ppm())?;
        }
        sink.write(&format!("{dir}legend_k{k}.json"), legend_json(st, p).as_bytes())?;
    }
    if sink.wants(Format::Csv) {
        let mut out = String::from("cycle,total_budget\n");
        for (t, b) in run.budget_totals.iter().enumerate() {
            out.push_str(&format!("{t},{b}\n"));
        }
        sink.write(&format!("{dir}budget.csv"), out.as_bytes())?;
    }
    Ok(())
}

pub fn load_spacetime(path: &Path) -> Result<Spacetime, CliError> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    if ext != "bin" && ext != "csv" {
        return Err(CliError::Config(format!("{}: expected a .bin or .csv spacetime", path.display())));
    }
    let bytes = fs::read(path).map_err(|e| runtime(format!("cannot read {}: {e}", path.display())))?;
    let st = if ext == "bin" { read_spacetime_bin(bytes.as_slice()) } else { read_spacetime_csv(bytes.as_slice()) };
    st.map_err(|e| runtime(format!("{}: {e}", path.display())))
}

/// Per-generation metrics of a stored spacetime.
pub fn metrics_csv(st: &Spacetime) -> String {
    let mut out = String::from("generation,living_cells,entropy_bits,entropy_occupied_bits\n");
    for (g, row) in st.rows().enumerate() {
        let living = row.iter().filter(|&&v| v != 0).count();
        let h = shannon_entropy(row);
        let h_occ = shannon_entropy_with(row, Alphabet::ExcludeEmpty);
        out.push_str(&format!("{g},{living},{h},{h_occ}\n"));
    }
    out
}

pub fn mi_matrix_csv(st: &Spacetime) -> String {
    let m = mi_matrix(st);
    let mut out = String::new();
    for i in 0..m.size() {
        let line: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn histogram_csv(st: &Spacetime) -> String {
    let mut out = String::from("generation,value,count\n");
    for (g, h) in value_histogram(st).iter().enumerate() {
        for (v, c) in h {
            out.push_str(&format!("{g},{v},{c}\n"));
        }
    }
    out
}

pub fn analyze(input: &Path, opts: &RunOptions) -> Result<serde_json::Value, CliError> {
    let st = load_spacetime(input)?;
    let input_bytes = fs::read(input).map_err(runtime)?;
    let sink = Sink::new(&opts.out, &opts.formats)?;
    if sink.wants(Format::Csv) {
        sink.write("metrics.csv", metrics_csv(&st).as_bytes())?;
        sink.write("mi_matrix.csv", mi_matrix_csv(&st).as_bytes())?;
        sink.write("value_histogram.csv", histogram_csv(&st).as_bytes())?;
    }
    if sink.wants(Format::Ppm) {
        sink.write("spacetime.ppm", &render_signed(st.width(), st.data()).to_ppm())?;
        let m = mi_matrix(&st);
        let max = (0..m.size()).flat_map(|i| m.row(i).iter().copied()).fold(0.0f64, f64::max);
        let mut img = RgbImage::new(m.size(), m.size());
        for i in 0..m.size() {
            for (j, &x) in m.row(i).iter().enumerate() {
                let level = if max > 0.0 { (255.0 * x / max).round().clamp(0.0, 255.0) as u8 } else { 0 };
                img.set(j, i, [level; 3]);
            }
        }
        sink.write("mi_matrix.ppm", &img.to_ppm())?;
    }
    sink.finish(json!({
        "tool": TOOL,
        "version": VERSION,
        "kind": "analyze",
        "input_sha256": sha256_hex(&input_bytes),
        "seeds": [],
        "formats": format_names(&opts.formats),
    }))
}
