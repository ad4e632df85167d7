//! Experiment configuration: a flat TOML subset with one section per run kind.
//!
//! ```toml
//! kind = "run1d"
//! seeds = [1, 2, 3]          # or seed = 7, or master_seed = 0 with seed_count = 20
//! formats = ["csv", "ppm"]   # optional, default all
//!
//! [run1d]
//! length = 256
//! generations = 512
//! norm = "zero"
//! ```
//!
//! Only scalar values and flat arrays are accepted. Nested tables, inline
//! tables, arrays of tables, duplicate keys and unknown keys are errors.

use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;

use toml_edit::{ImDocument, Item, Table, Value};

use symba_core::boolca::GateConfig;
use symba_core::core1d::{centered, Boundary, SeedSpec, ValueRange, TRAVELLER};
use symba_core::dnaca::{KmerReadout, LatticeConfig};
use symba_core::dnasoup::{derive_seed, Condition, SoupConfig};
use symba_core::norms::{make_norm_map, parse_patches, NormId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Run1d,
    Run2d,
    RunBool,
    DnaSoup,
    DnaCa,
    Robustness,
}

impl Kind {
    pub const ALL: [Kind; 6] = [Kind::Run1d, Kind::Run2d, Kind::RunBool, Kind::DnaSoup, Kind::DnaCa, Kind::Robustness];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Run1d => "run1d",
            Kind::Run2d => "run2d",
            Kind::RunBool => "runbool",
            Kind::DnaSoup => "dnasoup",
            Kind::DnaCa => "dnaca",
            Kind::Robustness => "robustness",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            format!("unknown kind `{s}` (expected one of run1d, run2d, runbool, dnasoup, dnaca, robustness)")
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Format {
    Csv,
    Ppm,
    Bin,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Csv, Format::Ppm, Format::Bin];
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "ppm" => Ok(Format::Ppm),
            "bin" => Ok(Format::Bin),
            _ => Err(format!("unknown format `{s}` (expected csv, ppm or bin)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Run1dParams {
    pub length: usize,
    pub generations: usize,
    pub boundary: Boundary,
    pub norm_map: Vec<NormId>,
    pub init: SeedSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Run2dParams {
    pub width: usize,
    pub height: usize,
    pub generations: usize,
    pub norm: NormId,
    pub density: f64,
    pub max_abs: i32,
    pub frame_every: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunBoolParams {
    pub length: usize,
    pub generations: usize,
    pub gate: GateConfig,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoupParams {
    pub soup: SoupConfig,
    pub ks: Vec<usize>,
    pub tau: f64,
    pub snapshot_every: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeParams {
    pub lattice: LatticeConfig,
    pub cycles: usize,
    pub ks: Vec<usize>,
    pub top_m: usize,
    pub readout: KmerReadout,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessParams {
    pub organism: Vec<i32>,
    pub values: Vec<i32>,
    pub distances: Vec<usize>,
    pub length: usize,
    pub generations: usize,
    pub boundary: Boundary,
    pub norm: NormId,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Run1d(Run1dParams),
    Run2d(Run2dParams),
    RunBool(RunBoolParams),
    DnaSoup(SoupParams),
    DnaCa(LatticeParams),
    Robustness(RobustnessParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub seeds: Vec<u64>,
    /// `None` when the file does not choose; callers then use every format.
    pub formats: Option<Vec<Format>>,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

fn line_at(src: &str, offset: usize) -> usize {
    src.as_bytes()[..offset.min(src.len())].iter().filter(|&&b| b == b'\n').count() + 1
}

type Errors = RefCell<Vec<ConfigError>>;

/// Typed access to one table that remembers which keys were read.
struct Section<'a> {
    label: String,
    table: &'a Table,
    src: &'a str,
    seen: RefCell<Vec<String>>,
    errors: &'a Errors,
    /// The root may hold section tables; sections may not.
    top_level: bool,
}

impl<'a> Section<'a> {
    fn new(label: String, table: &'a Table, src: &'a str, errors: &'a Errors) -> Self {
        Section { label, table, src, seen: RefCell::new(Vec::new()), errors, top_level: false }
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.table.key(key).and_then(|k| k.span()).map(|s| line_at(self.src, s.start))
    }

    fn error(&self, key: &str, message: String) {
        self.errors.borrow_mut().push(ConfigError { line: self.line(key), message });
    }

    fn value(&self, key: &str) -> Option<&'a Value> {
        self.seen.borrow_mut().push(key.to_string());
        match self.table.get(key)? {
            Item::Value(v) => Some(v),
            _ => None,
        }
    }

    fn has(&self, key: &str) -> bool {
        self.table.contains_key(key)
    }

    fn required(&self, key: &str) -> bool {
        if !self.has(key) {
            self.errors
                .borrow_mut()
                .push(ConfigError { line: None, message: format!("missing required field `{key}` in {}", self.label) });
            return false;
        }
        true
    }

    fn int(&self, key: &str) -> Option<i64> {
        let v = self.value(key)?;
        v.as_integer().or_else(|| {
            self.error(key, format!("`{key}` must be an integer"));
            None
        })
    }

    fn count(&self, key: &str, default: usize) -> usize {
        match self.int(key) {
            Some(n) if n >= 0 => n as usize,
            Some(n) => {
                self.error(key, format!("`{key}` must be non-negative, got {n}"));
                default
            }
            None => default,
        }
    }

    /// A count that must lie in `lo..=hi`.
    fn count_in(&self, key: &str, default: usize, lo: usize, hi: usize) -> usize {
        let n = self.count(key, default);
        if self.has(key) && !(lo..=hi).contains(&n) {
            self.error(key, format!("`{key}` = {n} is out of range [{lo}, {hi}]"));
            return default;
        }
        n
    }

    fn float(&self, key: &str, default: f64) -> f64 {
        let Some(v) = self.value(key) else { return default };
        match v.as_float().or_else(|| v.as_integer().map(|i| i as f64)) {
            Some(x) if x.is_finite() => x,
            _ => {
                self.error(key, format!("`{key}` must be a finite number"));
                default
            }
        }
    }

    fn float_in(&self, key: &str, default: f64, lo: f64, hi: f64) -> f64 {
        let x = self.float(key, default);
        if !(lo..=hi).contains(&x) {
            self.error(key, format!("`{key}` = {x} is out of range [{lo}, {hi}]"));
            return default;
        }
        x
    }

    fn string(&self, key: &str) -> Option<&'a str> {
        let v = self.value(key)?;
        v.as_str().or_else(|| {
            self.error(key, format!("`{key}` must be a string"));
            None
        })
    }

    fn parsed<T: FromStr>(&self, key: &str, default: T) -> T
    where
        T::Err: fmt::Display,
    {
        match self.string(key).map(str::parse::<T>) {
            Some(Ok(x)) => x,
            Some(Err(e)) => {
                self.error(key, format!("`{key}`: {e}"));
                default
            }
            None => default,
        }
    }

    fn int_list(&self, key: &str) -> Option<Vec<i64>> {
        let v = self.value(key)?;
        let parsed = v.as_array().and_then(|a| a.iter().map(Value::as_integer).collect::<Option<Vec<_>>>());
        if parsed.is_none() {
            self.error(key, format!("`{key}` must be an array of integers"));
        }
        parsed
    }

    fn count_list(&self, key: &str, default: Vec<usize>) -> Vec<usize> {
        match self.int_list(key) {
            Some(xs) if xs.iter().all(|&x| x >= 1) && !xs.is_empty() => xs.into_iter().map(|x| x as usize).collect(),
            Some(_) => {
                self.error(key, format!("`{key}` must be a nonempty list of positive integers"));
                default
            }
            None => default,
        }
    }

    fn string_list(&self, key: &str) -> Option<Vec<&'a str>> {
        let v = self.value(key)?;
        let parsed = v.as_array().and_then(|a| a.iter().map(Value::as_str).collect::<Option<Vec<_>>>());
        if parsed.is_none() {
            self.error(key, format!("`{key}` must be an array of strings"));
        }
        parsed
    }

    /// Reports keys never read and any value that is not flat.
    fn finish(&self) {
        let seen = self.seen.borrow();
        for (key, item) in self.table.iter() {
            let nested = match item {
                Item::Table(_) => !self.top_level,
                Item::ArrayOfTables(_) => !self.top_level,
                Item::Value(Value::InlineTable(_)) => true,
                Item::Value(Value::Array(a)) => a.iter().any(|v| v.is_array() || v.is_inline_table()),
                _ => false,
            };
            if nested {
                self.error(key, format!("`{key}` in {}: nested tables and arrays are not supported", self.label));
            } else if !seen.iter().any(|s| s == key) {
                self.error(key, format!("unknown key `{key}` in {}", self.label));
            }
        }
    }
}

/// Parses and validates a configuration. `kind_hint` is used when the file
/// has no `kind` key; if both are present they must agree.
pub fn parse_config(text: &str, kind_hint: Option<Kind>) -> Result<ExperimentConfig, ConfigErrors> {
    let doc = ImDocument::parse(text).map_err(|e| {
        let line = e.span().map(|s| line_at(text, s.start));
        ConfigErrors(vec![ConfigError { line, message: e.message().trim().to_string() }])
    })?;
    let errors: Errors = RefCell::new(Vec::new());
    let root = doc.as_table();

    let mut section_tables: Vec<(&str, &Table)> = Vec::new();
    for (key, item) in root.iter() {
        match item {
            Item::Table(t) => section_tables.push((key, t)),
            Item::ArrayOfTables(_) => errors.borrow_mut().push(ConfigError {
                line: root.key(key).and_then(|k| k.span()).map(|s| line_at(text, s.start)),
                message: format!("arrays of tables are not supported (`[[{key}]]`)"),
            }),
            _ => {}
        }
    }
    let head = Section { top_level: true, ..Section::new("the top level".into(), root, text, &errors) };
    for (name, item) in root.iter() {
        if item.is_table() || item.is_array_of_tables() {
            head.seen.borrow_mut().push(name.to_string());
        }
    }

    let kind = match head.string("kind").map(str::parse::<Kind>) {
        Some(Ok(k)) => {
            if let Some(hint) = kind_hint.filter(|&h| h != k) {
                head.error("kind", format!("config is for `{k}` but the command is `{hint}`"));
            }
            Some(k)
        }
        Some(Err(e)) => {
            head.error("kind", e);
            kind_hint
        }
        None => kind_hint,
    };
    let seeds = parse_seeds(&head);
    let formats = head.string_list("formats").map(|names| {
        names
            .into_iter()
            .filter_map(|n| match n.parse::<Format>() {
                Ok(f) => Some(f),
                Err(e) => {
                    head.error("formats", e);
                    None
                }
            })
            .collect::<Vec<_>>()
    });
    head.finish();

    let Some(kind) = kind else {
        errors.borrow_mut().push(ConfigError { line: None, message: "missing required field `kind`".into() });
        return Err(ConfigErrors(errors.into_inner()));
    };

    for (name, _) in &section_tables {
        if *name != kind.name() {
            let line = root.key(name).and_then(|k| k.span()).map(|s| line_at(text, s.start));
            let message = match name.parse::<Kind>() {
                Ok(_) => format!("section [{name}] does not apply to kind `{kind}`"),
                Err(_) => format!("unknown section [{name}]"),
            };
            errors.borrow_mut().push(ConfigError { line, message });
        }
    }
    let empty = Table::new();
    let table = section_tables.iter().find(|(n, _)| *n == kind.name()).map_or(&empty, |(_, t)| *t);
    let sec = Section::new(format!("[{kind}]"), table, text, &errors);
    let params = match kind {
        Kind::Run1d => Params::Run1d(parse_run1d(&sec)),
        Kind::Run2d => Params::Run2d(parse_run2d(&sec)),
        Kind::RunBool => Params::RunBool(parse_runbool(&sec)),
        Kind::DnaSoup => Params::DnaSoup(parse_dnasoup(&sec)),
        Kind::DnaCa => Params::DnaCa(parse_dnaca(&sec)),
        Kind::Robustness => Params::Robustness(parse_robustness(&sec)),
    };
    sec.finish();

    let errors = errors.into_inner();
    if errors.is_empty() {
        Ok(ExperimentConfig { kind, seeds, formats, params })
    } else {
        Err(ConfigErrors(errors))
    }
}

fn parse_seeds(head: &Section) -> Vec<u64> {
    let given: Vec<&str> = ["seed", "seeds", "master_seed"].into_iter().filter(|k| head.has(k)).collect();
    if given.len() > 1 {
        head.error(
            given[1],
            format!("only one of `seed`, `seeds` and `master_seed` may be given ({})", given.join(", ")),
        );
    }
    let non_negative = |key: &str, x: i64| -> Option<u64> {
        if x < 0 {
            head.error(key, format!("`{key}` must be non-negative"));
            None
        } else {
            Some(x as u64)
        }
    };
    if head.has("seed_count") && !head.has("master_seed") {
        head.count("seed_count", 0);
        head.error("seed_count", "`seed_count` requires `master_seed`".into());
    }
    if head.has("seed") {
        return head.int("seed").and_then(|x| non_negative("seed", x)).into_iter().collect();
    }
    if head.has("seeds") {
        let seeds: Vec<u64> =
            head.int_list("seeds").unwrap_or_default().into_iter().filter_map(|x| non_negative("seeds", x)).collect();
        if seeds.is_empty() {
            head.error("seeds", "`seeds` must list at least one seed".into());
        }
        return seeds;
    }
    if head.has("master_seed") {
        let master = head.int("master_seed").and_then(|x| non_negative("master_seed", x)).unwrap_or(0);
        if !head.required("seed_count") {
            return vec![];
        }
        let n = head.count_in("seed_count", 1, 1, 100_000);
        return (0..n as u64).map(|i| derive_seed(master, i)).collect();
    }
    vec![0]
}

fn parse_boundary(sec: &Section) -> Boundary {
    sec.parsed("boundary", Boundary::Periodic)
}

fn parse_norm_map(sec: &Section, length: usize) -> Vec<NormId> {
    if sec.has("norm") && sec.has("norm_map") {
        sec.error("norm_map", "give either `norm` or `norm_map`, not both".into());
    }
    if let Some(text) = sec.string("norm_map") {
        match parse_patches(text).and_then(|p| make_norm_map(length, &p)) {
            Ok(map) => return map,
            Err(e) => sec.error("norm_map", format!("`norm_map`: {e}")),
        }
    }
    vec![sec.parsed("norm", NormId::Zero); length]
}

fn parse_explicit(sec: &Section, length: usize) -> Vec<(usize, i32)> {
    let Some(text) = sec.string("cells") else {
        sec.error("init", "`init = \"explicit\"` needs `cells = \"POS:VALUE,...\"`".into());
        return vec![];
    };
    let mut out = Vec::new();
    for entry in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parsed = entry
            .split_once(':')
            .and_then(|(p, v)| Some((p.trim().parse::<usize>().ok()?, v.trim().parse::<i32>().ok()?)));
        match parsed {
            Some((pos, value)) if pos < length && value != 0 && (value.unsigned_abs() as usize) < length => {
                out.push((pos, value))
            }
            Some((pos, value)) => sec.error(
                "cells",
                format!(
                    "cell `{entry}` invalid: need position < {length} and 0 < |value| < {length} (got {pos}, {value})"
                ),
            ),
            None => sec.error("cells", format!("malformed cell `{entry}` (expected POS:VALUE)")),
        }
    }
    out
}

fn parse_run1d(sec: &Section) -> Run1dParams {
    let has_len = sec.required("length");
    sec.required("generations");
    let length = sec.count_in("length", 2, 2, 1 << 24);
    let length = if has_len { length } else { 2 };
    let generations = sec.count_in("generations", 1, 1, 1 << 24);
    let boundary = parse_boundary(sec);
    let norm_map = parse_norm_map(sec, length);

    let init_name = sec.string("init").unwrap_or("sparse");
    let max_default = 8.min(length as i64 - 1).max(1) as usize;
    let min_abs = sec.count("min_abs", 1) as i32;
    let max_abs = sec.count("max_abs", max_default) as i32;
    if min_abs < 1 || max_abs < min_abs {
        sec.error("min_abs", format!("value range ±[{min_abs}, {max_abs}] must satisfy 1 <= min_abs <= max_abs"));
    }
    if max_abs as usize >= length {
        sec.error("max_abs", format!("`max_abs` = {max_abs} must be below the length {length}"));
    }
    let values = ValueRange::symmetric(min_abs, max_abs);
    let init = match init_name {
        "sparse" => {
            let region_width = sec.count_in("region", 16.min(length), 1, length);
            let genes = sec.count("genes", 10.min(region_width));
            if genes > region_width {
                sec.error("genes", format!("{genes} genes do not fit a region of width {region_width}"));
            }
            SeedSpec::Sparse { genes: genes.min(region_width), values, region: centered(length, region_width) }
        }
        "dense" => SeedSpec::Dense { fill: sec.float_in("fill", 0.9, 0.0, 1.0), values },
        "explicit" => SeedSpec::Explicit(parse_explicit(sec, length)),
        other => {
            sec.error("init", format!("unknown init `{other}` (expected sparse, dense or explicit)"));
            SeedSpec::Explicit(vec![])
        }
    };
    for (key, applies) in [
        ("region", init_name == "sparse"),
        ("genes", init_name == "sparse"),
        ("fill", init_name == "dense"),
        ("cells", init_name == "explicit"),
    ] {
        if sec.has(key) && !applies {
            sec.value(key);
            sec.error(key, format!("`{key}` does not apply to init `{init_name}`"));
        }
    }
    Run1dParams { length, generations, boundary, norm_map, init }
}

fn parse_run2d(sec: &Section) -> Run2dParams {
    sec.required("width");
    sec.required("height");
    sec.required("generations");
    let width = sec.count_in("width", 2, 2, 1 << 14);
    let height = sec.count_in("height", 1, 1, 1 << 14);
    let generations = sec.count_in("generations", 1, 1, 1 << 20);
    let max_abs = sec.count_in("max_abs", 4, 1, 1 << 14) as i32;
    Run2dParams {
        width,
        height,
        generations,
        norm: sec.parsed("norm", NormId::Zero),
        density: sec.float_in("density", 0.1, 0.0, 1.0),
        max_abs,
        frame_every: sec.count_in("frame_every", 1, 1, 1 << 20),
    }
}

fn parse_runbool(sec: &Section) -> RunBoolParams {
    sec.required("length");
    sec.required("generations");
    let length = sec.count_in("length", 5, 5, 1 << 24);
    let generations = sec.count_in("generations", 1, 1, 1 << 24);
    let rule = sec.count_in("rule", 110, 0, 255) as u8;
    let threshold = sec.count_in("threshold", 2, 0, 5) as u8;
    let gate = GateConfig::new(rule, threshold).unwrap_or_default();
    RunBoolParams { length, generations, gate, density: sec.float_in("density", 0.5, 0.0, 1.0) }
}

fn parse_condition(sec: &Section) -> Condition {
    sec.parsed("condition", Condition::B)
}

fn parse_dnasoup(sec: &Section) -> SoupParams {
    let base = match sec.string("preset").unwrap_or("default") {
        "default" => SoupConfig::default(),
        "motif_separation" => SoupConfig::motif_separation(),
        other => {
            sec.error("preset", format!("unknown preset `{other}` (expected default or motif_separation)"));
            SoupConfig::default()
        }
    };
    let soup = SoupConfig {
        mutation_rate: sec.float_in("mutation_rate", base.mutation_rate, 0.0, 1.0),
        cycles: sec.count_in("cycles", base.cycles, 0, 1 << 24),
        min_overlap: sec.count_in("min_overlap", base.min_overlap, 1, 1 << 16),
        split_min_len: sec.count("split_min_len", base.split_min_len),
        condition: parse_condition(sec),
        rng_seed: 0,
        pool_per_base: sec.count("pool_per_base", base.pool_per_base as usize) as u64,
        initial_strands: sec.count("initial_strands", base.initial_strands),
        initial_strand_len: sec.count_in("initial_strand_len", base.initial_strand_len, 1, 1 << 16),
        association_pairs: sec.count("association_pairs", base.association_pairs),
    };
    SoupParams {
        soup,
        ks: sec.count_list("ks", vec![4, 6, 8]),
        tau: sec.float_in("tau", 0.10, 0.0, 1.0),
        snapshot_every: sec.count_in("snapshot_every", 50, 1, 1 << 24),
    }
}

fn parse_dnaca(sec: &Section) -> LatticeParams {
    let base = match sec.string("preset").unwrap_or("default") {
        "default" => LatticeConfig::default(),
        "spatial_domains" => LatticeConfig::spatial_domains(),
        other => {
            sec.error("preset", format!("unknown preset `{other}` (expected default or spatial_domains)"));
            LatticeConfig::default()
        }
    };
    let lattice = LatticeConfig {
        sites: sec.count_in("sites", base.sites, 2, 1 << 20),
        condition: parse_condition(sec),
        mutation_rate: sec.float_in("mutation_rate", base.mutation_rate, 0.0, 1.0),
        min_overlap: sec.count_in("min_overlap", base.min_overlap, 1, 1 << 16),
        split_min_len: sec.count("split_min_len", base.split_min_len),
        diffusion_rate: sec.float_in("diffusion_rate", base.diffusion_rate, 0.0, 0.5),
        initial_budget: sec.float_in("initial_budget", base.initial_budget, 0.0, 1e12),
        fragment_prob: sec.float_in("fragment_prob", base.fragment_prob, 0.0, 1.0),
        fragment_len: sec.count_in("fragment_len", base.fragment_len, 1, 1 << 16),
        rng_seed: 0,
    };
    LatticeParams {
        lattice,
        cycles: sec.count_in("cycles", 512, 1, 1 << 24),
        ks: sec.count_list("ks", vec![4, 6, 8]),
        top_m: sec.count_in("top_m", 8, 0, 1 << 16),
        readout: sec.parsed("readout", KmerReadout::Literal),
    }
}

fn parse_robustness(sec: &Section) -> RobustnessParams {
    let length = sec.count_in("length", 128, 4, 1 << 20);
    let generations = sec.count_in("generations", 256, 2, 1 << 20);
    let organism: Vec<i32> = match sec.int_list("organism") {
        Some(xs) => xs.into_iter().map(|x| x as i32).collect(),
        None => TRAVELLER.to_vec(),
    };
    let trimmed_ok = organism.first().is_some_and(|&v| v != 0) && organism.last().is_some_and(|&v| v != 0);
    if !trimmed_ok || organism.iter().any(|v| v.unsigned_abs() as usize >= length) {
        sec.error("organism", format!("`organism` must start and end with a gene and fit |value| < {length}"));
    }
    let values: Vec<i32> = match sec.int_list("values") {
        Some(xs) => xs.into_iter().map(|x| x as i32).collect(),
        None => (1..=8).flat_map(|m| [m, -m]).collect(),
    };
    if values.is_empty() || values.iter().any(|&v| v == 0 || v.unsigned_abs() as usize >= length) {
        sec.error("values", format!("`values` must be nonempty with 0 < |value| < {length}"));
    }
    let distances: Vec<usize> = match sec.int_list("distances") {
        Some(xs) if xs.iter().all(|&d| d >= 0) => xs.into_iter().map(|d| d as usize).collect(),
        Some(_) => {
            sec.error("distances", "`distances` must be non-negative".into());
            vec![]
        }
        None => (4..=32).step_by(4).collect(),
    };
    let room = centered(length, organism.len()).start;
    if distances.is_empty() || distances.iter().any(|&d| d > room) {
        sec.error(
            "distances",
            format!("`distances` must be nonempty and at most {room}, the room left of the organism"),
        );
    }
    RobustnessParams {
        organism,
        values,
        distances,
        length,
        generations,
        boundary: parse_boundary(sec),
        norm: sec.parsed("norm", NormId::Zero),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn errors(text: &str) -> Vec<ConfigError> {
        parse_config(text, None).unwrap_err().0
    }

    #[test]
    fn minimal_run1d() {
        let cfg = parse_config("kind = \"run1d\"\n[run1d]\nlength = 256\nnorm = \"zero\"\ngenerations = 512\n", None)
            .unwrap();
        assert_eq!(cfg.kind, Kind::Run1d);
        assert_eq!(cfg.seeds, vec![0]);
        let Params::Run1d(p) = cfg.params else { panic!() };
        assert_eq!((p.length, p.generations), (256, 512));
        assert!(p.norm_map.iter().all(|&n| n == NormId::Zero));
    }

    #[test]
    fn bad_norm_names_valid_set() {
        let e = errors("kind = \"run1d\"\n[run1d]\nlength = 16\ngenerations = 4\nnorm = \"q\"\n");
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].line, Some(5));
        assert!(e[0].message.contains("zero, a, b, c, d"), "{}", e[0].message);
    }

    #[test]
    fn duplicate_key_has_line() {
        let e = errors("kind = \"run1d\"\n[run1d]\nlength = 16\nlength = 32\ngenerations = 4\n");
        assert_eq!(e[0].line, Some(4));
        assert!(e[0].message.contains("duplicate"), "{}", e[0].message);
    }

    #[test]
    fn unknown_and_missing_keys_collect() {
        let e = errors("kind = \"run1d\"\n[run1d]\nlenght = 16\n");
        let text: Vec<String> = e.iter().map(ToString::to_string).collect();
        assert!(text.iter().any(|m| m.contains("missing required field `length`")));
        assert!(text.iter().any(|m| m.contains("missing required field `generations`")));
        assert!(text.iter().any(|m| m == "line 3: unknown key `lenght` in [run1d]"), "{text:?}");
    }

    #[test]
    fn out_of_range_value() {
        let e = errors("kind = \"runbool\"\n[runbool]\nlength = 16\ngenerations = 4\nthreshold = 9\n");
        assert_eq!(e[0].line, Some(5));
        assert!(e[0].message.contains("out of range"));
    }

    #[test]
    fn nested_tables_rejected() {
        let e = errors("kind = \"run1d\"\n[run1d]\nlength = 16\ngenerations = 4\nx = { a = 1 }\n");
        assert!(e[0].message.contains("nested"));
        let e = errors("kind = \"run1d\"\n[[run1d]]\nlength = 16\n");
        assert!(e[0].message.contains("arrays of tables"));
        let e = errors("kind = \"run1d\"\n[run1d.extra]\n");
        assert!(e.iter().any(|x| x.message.contains("nested")));
    }

    #[test]
    fn foreign_section_rejected() {
        let e = errors("kind = \"run1d\"\n[run1d]\nlength = 16\ngenerations = 4\n[dnaca]\ncycles = 3\n");
        assert_eq!(e[0].line, Some(5));
        assert!(e[0].message.contains("does not apply"));
    }

    #[test]
    fn kind_from_hint_and_conflict() {
        let cfg = parse_config("[robustness]\n", Some(Kind::Robustness)).unwrap();
        assert_eq!(cfg.kind, Kind::Robustness);
        let e = parse_config("kind = \"dnaca\"\n", Some(Kind::Run1d)).unwrap_err();
        assert!(e.to_string().contains("command is `run1d`"));
    }

    #[test]
    fn seed_forms() {
        let one = parse_config("kind = \"dnaca\"\nseed = 7\n", None).unwrap();
        assert_eq!(one.seeds, vec![7]);
        let list = parse_config("kind = \"dnaca\"\nseeds = [3, 1]\n", None).unwrap();
        assert_eq!(list.seeds, vec![3, 1]);
        let derived = parse_config("kind = \"dnaca\"\nmaster_seed = 5\nseed_count = 3\n", None).unwrap();
        assert_eq!(derived.seeds, (0..3).map(|i| derive_seed(5, i)).collect::<Vec<_>>());
        assert!(parse_config("kind = \"dnaca\"\nseed = 1\nseeds = [2]\n", None).is_err());
        assert!(parse_config("kind = \"dnaca\"\nseed = -1\n", None).is_err());
    }

    #[test]
    fn norm_map_and_explicit_cells() {
        let cfg = parse_config(
            "kind = \"run1d\"\n[run1d]\nlength = 8\ngenerations = 2\nnorm_map = \"0..4:a,4..8:d\"\ninit = \"explicit\"\ncells = \"1:3,6:-2\"\n",
            None,
        )
        .unwrap();
        let Params::Run1d(p) = cfg.params else { panic!() };
        assert_eq!(p.norm_map[3], NormId::A);
        assert_eq!(p.norm_map[4], NormId::D);
        assert_eq!(p.init, SeedSpec::Explicit(vec![(1, 3), (6, -2)]));
        let e =
            errors("kind = \"run1d\"\n[run1d]\nlength = 8\ngenerations = 2\ninit = \"explicit\"\ncells = \"9:1\"\n");
        assert_eq!(e[0].line, Some(6));
    }

    #[test]
    fn toml_syntax_error_has_line() {
        let e = errors("kind = \"run1d\"\n[run1d]\nlength = = 3\n");
        assert_eq!(e[0].line, Some(3));
    }
}
