//! Batch front end: run configuration, the disk cache, command payloads and
//! their JSON/TSV/text renderings. The `akm` binary is a thin argument parser
//! over this module.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::affine_roots::{
    affine_cartan_matrix, affine_comarks, affine_marks, fundamental_weight, positive_roots_up_to,
    rho_tilde, simple_root, AffineWeight,
};
use crate::affine_weyl::enumerate;
use crate::characters::{
    denominator_identity_check, freudenthal_character, irreducible_window, partition_fn_brute,
    sufficient_max_len, verma_character, weyl_kac_character, FormalCharacter,
};
use crate::error::{KmError, Result};
use crate::finite_cartan::{CartanType, FiniteCartan};
use crate::highest_weight_modules::{
    build_verma, build_verma_in, irreducible_module, irreducible_quotient, GradedModule,
};
use crate::lattice::RootVec;
use crate::loop_algebra::{bracket, NTilde};
use crate::nilpotent_cohomology::{default_controls, kostant_verify};
use crate::rational::fmt_q;

/// Bumped whenever a payload format or an algorithm changes its output.
pub const CODE_VERSION: &str = concat!("affine-km ", env!("CARGO_PKG_VERSION"), " payload 1");

/// Environment variable overriding the configured cache directory.
pub const CACHE_ENV: &str = "AKM_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Tsv,
    Pretty,
}

impl std::str::FromStr for OutputFormat {
    type Err = KmError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "tsv" => Ok(OutputFormat::Tsv),
            "pretty" => Ok(OutputFormat::Pretty),
            _ => Err(KmError::Parse(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for Threads {
    type Err = KmError;
    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(Threads::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Threads::Fixed(n)),
            _ => Err(KmError::Parse(format!(
                "threads must be a positive integer or `auto`, got `{s}`"
            ))),
        }
    }
}

impl<'de> Deserialize<'de> for Threads {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        let s = match &v {
            Value::Number(n) => n.to_string(),
            Value::String(s) => s.clone(),
            _ => {
                return Err(serde::de::Error::custom(
                    "threads must be a number or \"auto\"",
                ))
            }
        };
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Settings that may come from flags or from a JSON config file. Every field
/// is optional; flags win over the file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub algebra: Option<String>,
    pub hw: Option<Vec<i64>>,
    pub depth: Option<u32>,
    pub max_len: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub output_format: Option<OutputFormat>,
    pub threads: Option<Threads>,
}

impl ConfigLayer {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| KmError::Parse(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| KmError::Parse(format!("{}: {e}", path.display())))
    }

    /// `self` over `base`.
    pub fn over(self, base: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            algebra: self.algebra.or(base.algebra),
            hw: self.hw.or(base.hw),
            depth: self.depth.or(base.depth),
            max_len: self.max_len.or(base.max_len),
            cache_dir: self.cache_dir.or(base.cache_dir),
            output_format: self.output_format.or(base.output_format),
            threads: self.threads.or(base.threads),
        }
    }
}

/// A fully resolved configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algebra: CartanType,
    /// Dynkin labels `[m_0, …, m_l]`.
    pub hw: Vec<i64>,
    pub depth: u32,
    /// `None` lets each command pick a sufficient or customary value.
    pub max_len: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub threads: Threads,
}

impl RunConfig {
    /// Flags over the environment's cache directory over the config file.
    pub fn resolve(
        flags: ConfigLayer,
        file: Option<ConfigLayer>,
        env_cache: Option<PathBuf>,
    ) -> Result<Self> {
        let env = ConfigLayer {
            cache_dir: env_cache,
            ..Default::default()
        };
        let merged = flags.over(env.over(file.unwrap_or_default()));
        let algebra: CartanType = merged
            .algebra
            .as_deref()
            .ok_or_else(|| KmError::Parse("no algebra given (use --algebra, e.g. A1~)".into()))?
            .parse()?;
        let hw = merged.hw.unwrap_or_else(|| {
            let mut v = vec![0; algebra.rank + 1];
            v[0] = 1;
            v
        });
        if hw.len() != algebra.rank + 1 {
            return Err(KmError::Parse(format!(
                "{} needs {} Dynkin labels [m0..m{}], got {}",
                algebra,
                algebra.rank + 1,
                algebra.rank,
                hw.len()
            )));
        }
        Ok(RunConfig {
            algebra,
            hw,
            depth: merged.depth.unwrap_or(4),
            max_len: merged.max_len,
            cache_dir: merged.cache_dir,
            output_format: merged.output_format.unwrap_or(OutputFormat::Json),
            threads: merged.threads.unwrap_or(Threads::Auto),
        })
    }

    pub fn algebra_name(&self) -> String {
        format!("{}~", self.algebra)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharKind {
    Verma,
    Irrep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharMethod {
    Freudenthal,
    WeylKac,
}

impl std::str::FromStr for CharMethod {
    type Err = KmError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "freudenthal" => Ok(CharMethod::Freudenthal),
            "weyl-kac" => Ok(CharMethod::WeylKac),
            _ => Err(KmError::Parse(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexChoice {
    L,
    S,
    Both,
}

impl std::str::FromStr for IndexChoice {
    type Err = KmError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l" => Ok(IndexChoice::L),
            "s" => Ok(IndexChoice::S),
            "both" => Ok(IndexChoice::Both),
            _ => Err(KmError::Parse(format!("unknown index `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Describe,
    WeylEnum,
    Char {
        kind: CharKind,
        method: CharMethod,
        verify: bool,
        realize: bool,
    },
    CheckDenominator,
    VerifyKostant {
        extra: Vec<String>,
        controls: usize,
        index: IndexChoice,
    },
    BracketTable,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Describe => "describe",
            Command::WeylEnum => "weyl-enum",
            Command::Char { .. } => "char",
            Command::CheckDenominator => "check-denominator",
            Command::VerifyKostant { .. } => "verify-kostant",
            Command::BracketTable => "bracket-table",
        }
    }

    fn cacheable(&self) -> bool {
        matches!(
            self,
            Command::Char { .. } | Command::CheckDenominator | Command::VerifyKostant { .. }
        )
    }
}

/// Rendered output of one run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub payload: Value,
    pub text: String,
    /// 0 success, 1 verification mismatch.
    pub exit_code: i32,
    pub cached: bool,
}

/// Exit code for errors: every error is a precondition or resource failure.
pub const EXIT_ERROR: i32 = 2;

/// A one-line hint on how to get past an error, when there is one.
pub fn remediation(err: &KmError) -> Option<String> {
    match err {
        KmError::FrontierTooShallow { max_len, .. } => Some(format!(
            "rerun with a larger --max-len (more than {max_len}) or a smaller --depth"
        )),
        KmError::DepthInsufficient { required, .. } => {
            Some(format!("the module must be realized to depth {required}"))
        }
        KmError::NotDominant(_) => {
            Some("irreducible characters need non-negative integer Dynkin labels".into())
        }
        KmError::NotRegularDominant(_) => {
            Some("choose integral labels with λ + ρ̃ regular dominant".into())
        }
        KmError::InvalidType(_) => Some("algebras are named like A1~, A2~, B2~, G2~".into()),
        _ => None,
    }
}

/// Deterministic JSON text: sorted keys (the default map is ordered),
/// two-space indentation, trailing newline.
pub fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn sha256_hex(data: &str) -> String {
    Sha256::digest(data.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn algebra_data(fc: &FiniteCartan) -> Value {
    json!({
        "type": fc.ty.to_string(),
        "gcm": affine_cartan_matrix(fc),
        "marks": affine_marks(fc),
    })
}

/// Cache key over algebra data, run parameters and the code version.
pub fn cache_key(cfg: &RunConfig, cmd: &Command, fc: &FiniteCartan) -> String {
    let key = json!({
        "algebra": algebra_data(fc),
        "command": format!("{cmd:?}"),
        "hw": cfg.hw,
        "depth": cfg.depth,
        "max_len": cfg.max_len,
        "code_version": CODE_VERSION,
    });
    sha256_hex(&key.to_string())
}

fn cache_path(dir: &Path, cfg: &RunConfig, hash: &str) -> PathBuf {
    dir.join(cfg.algebra_name()).join(format!("{hash}.json"))
}

fn cache_read(path: &Path, hash: &str) -> Option<Value> {
    let text = fs::read_to_string(path).ok()?;
    let v: Value = serde_json::from_str(&text).ok()?;
    if v.get("hash")?.as_str()? != hash || v.get("code_version")?.as_str()? != CODE_VERSION {
        return None;
    }
    let payload = v.get("payload")?.clone();
    let payload_hash = v.get("payload_sha256")?.as_str()?;
    (sha256_hex(&canonical_json(&payload)) == payload_hash).then_some(payload)
}

fn cache_write(path: &Path, hash: &str, payload: &Value) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let entry = json!({
        "hash": hash,
        "code_version": CODE_VERSION,
        "payload_sha256": sha256_hex(&canonical_json(payload)),
        "payload": payload,
    });
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, canonical_json(&entry))?;
    fs::rename(tmp, path)
}

/// Runs one command: consults the cache, computes inside a worker pool of
/// the configured size, and renders the payload.
pub fn run(cfg: &RunConfig, cmd: &Command) -> Result<Outcome> {
    let fc = FiniteCartan::new(cfg.algebra);
    let mut cached = false;
    let mut payload = None;
    let mut cache_slot = None;
    if cmd.cacheable() {
        if let Some(dir) = &cfg.cache_dir {
            let hash = cache_key(cfg, cmd, &fc);
            let path = cache_path(dir, cfg, &hash);
            if let Some(p) = cache_read(&path, &hash) {
                payload = Some(p);
                cached = true;
            }
            cache_slot = Some((path, hash));
        }
    }
    let payload = match payload {
        Some(p) => p,
        None => {
            let p = with_threads(cfg.threads, || compute(cfg, cmd, &fc))?;
            if let Some((path, hash)) = &cache_slot {
                cache_write(path, hash, &p).map_err(|e| {
                    KmError::Parse(format!("cannot write cache {}: {e}", path.display()))
                })?;
            }
            p
        }
    };
    let exit_code = exit_code(cmd, &payload);
    let text = render(cmd, &payload, cfg.output_format);
    Ok(Outcome {
        payload,
        text,
        exit_code,
        cached,
    })
}

fn with_threads<T: Send>(threads: Threads, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Threads::Fixed(n) = threads {
        b = b.num_threads(n);
    }
    let pool = b
        .build()
        .map_err(|e| KmError::Parse(format!("cannot start worker pool: {e}")))?;
    pool.install(f)
}

fn compute(cfg: &RunConfig, cmd: &Command, fc: &FiniteCartan) -> Result<Value> {
    let mut v = match cmd {
        Command::Describe => describe(fc),
        Command::WeylEnum => weyl_enum(cfg, fc)?,
        Command::Char {
            kind,
            method,
            verify,
            realize,
        } => char_payload(cfg, fc, *kind, *method, *verify, *realize)?,
        Command::CheckDenominator => {
            let zero = AffineWeight::zero(fc.rank());
            let max_len = cfg
                .max_len
                .unwrap_or_else(|| sufficient_max_len(fc, &zero, cfg.depth));
            denominator_identity_check(fc, cfg.depth, max_len)?.to_json()
        }
        Command::VerifyKostant {
            extra,
            controls,
            index,
        } => kostant_payload(cfg, fc, extra, *controls, *index)?,
        Command::BracketTable => bracket_table(fc, cfg.depth),
    };
    v["algebra"] = json!(cfg.algebra_name());
    v["command"] = json!(cmd.name());
    Ok(v)
}

fn hw_weight(cfg: &RunConfig, fc: &FiniteCartan) -> Result<AffineWeight> {
    AffineWeight::from_dynkin_ints(fc, &cfg.hw)
}

fn describe(fc: &FiniteCartan) -> Value {
    let l = fc.rank();
    let theta_co = fc.coroot_coords(&fc.theta);
    let coroots: Vec<Value> = (0..=l)
        .map(|i| {
            if i == 0 {
                json!({"finite": theta_co.iter().map(|x| -x).collect::<Vec<_>>(), "c": 1})
            } else {
                let mut v = vec![0i64; l];
                v[i - 1] = 1;
                json!({"finite": v, "c": 0})
            }
        })
        .collect();
    let sym: Vec<Vec<String>> = (0..l)
        .map(|i| (0..l).map(|j| fmt_q(fc.sym_form.get(i, j))).collect())
        .collect();
    let roots1: Vec<Value> = positive_roots_up_to(fc, 1)
        .iter()
        .map(|r| json!({"coords": r.coords(fc).0, "multiplicity": r.multiplicity}))
        .collect();
    json!({
        "finite_type": fc.ty.to_string(),
        "rank": l,
        "dim_finite": fc.dim(),
        "gcm": affine_cartan_matrix(fc),
        "marks": affine_marks(fc),
        "comarks": affine_comarks(fc),
        "coxeter_g": fc.coxeter_g,
        "delta_multiplicity": l,
        "rho_tilde": rho_tilde(fc).to_string(),
        "simple_roots": (0..=l).map(|i| simple_root(fc, i).to_string()).collect::<Vec<_>>(),
        "simple_coroots": coroots,
        "fundamental_weights": (0..=l)
            .map(|i| fundamental_weight(fc, i).map(|w| w.to_string()).unwrap())
            .collect::<Vec<_>>(),
        "finite": {
            "cartan": fc.cartan,
            "positive_roots": fc.positive_roots.iter().map(|r| r.0.clone()).collect::<Vec<_>>(),
            "theta": fc.theta.0,
            "sym_form": sym,
        },
        "positive_roots_degree_le_1": roots1,
    })
}

fn weyl_enum(cfg: &RunConfig, fc: &FiniteCartan) -> Result<Value> {
    let max_len = cfg.max_len.unwrap_or(3);
    let hw = hw_weight(cfg, fc)?;
    let rho = rho_tilde(fc);
    let words = enumerate(fc, max_len);
    let mut counts = vec![0usize; max_len + 1];
    let elems: Vec<Value> = words
        .iter()
        .map(|w| {
            counts[w.length()] += 1;
            json!({
                "word": w.letters,
                "display": w.to_string(),
                "l": w.length(),
                "s": w.s_index(fc),
                "negates_alpha0": w.negates_alpha0(fc),
                "rho_image": w.apply(fc, &rho).to_string(),
                "dot_hw": w.dot(fc, &hw).to_string(),
            })
        })
        .collect();
    Ok(json!({
        "hw": hw.to_string(),
        "max_len": max_len,
        "counts_by_length": counts,
        "elements": elems,
    }))
}

fn dims_rows(m: &GradedModule, fc: &FiniteCartan) -> Vec<Value> {
    m.sorted_spaces()
        .into_iter()
        .map(|(b, s)| json!([b.to_string(), m.hw.sub_root(fc, b).to_string(), s.dim]))
        .collect()
}

fn compare(
    name_a: &str,
    a: &FormalCharacter,
    name_b: &str,
    b: &FormalCharacter,
    fc: &FiniteCartan,
) -> Vec<Value> {
    let mut keys: Vec<&RootVec> = a.coeffs.keys().chain(b.coeffs.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter(|k| a.mult(k) != b.mult(k))
        .take(20)
        .map(|k| {
            json!({
                "weight": a.base.sub_root(fc, k).to_string(),
                name_a: a.mult(k),
                name_b: b.mult(k),
            })
        })
        .collect()
}

fn module_character(m: &GradedModule) -> FormalCharacter {
    FormalCharacter {
        base: m.hw.clone(),
        depth: m.depth,
        coeffs: m
            .spaces
            .iter()
            .filter(|(b, s)| s.dim > 0 && b.degree() <= i64::from(m.depth))
            .map(|(b, s)| (b.clone(), s.dim as u64))
            .collect(),
    }
}

fn char_payload(
    cfg: &RunConfig,
    fc: &FiniteCartan,
    kind: CharKind,
    method: CharMethod,
    verify: bool,
    realize: bool,
) -> Result<Value> {
    let hw = hw_weight(cfg, fc)?;
    let depth = cfg.depth;
    let (ch, method_name) = match kind {
        CharKind::Verma => (verma_character(fc, &hw, depth), "partition-function"),
        CharKind::Irrep => match method {
            CharMethod::Freudenthal => (freudenthal_character(fc, &hw, depth)?, "freudenthal"),
            CharMethod::WeylKac => {
                let ml = cfg
                    .max_len
                    .unwrap_or_else(|| sufficient_max_len(fc, &hw, depth));
                (weyl_kac_character(fc, &hw, depth, ml)?, "weyl-kac")
            }
        },
    };
    let mut v = ch.to_json(fc);
    v["kind"] = json!(match kind {
        CharKind::Verma => "verma",
        CharKind::Irrep => "irrep",
    });
    v["method"] = json!(method_name);
    v["delta_string"] = json!(ch.delta_string(fc));
    let mut module = None;
    if verify {
        let mut mismatches = Vec::new();
        let mut oracles = Vec::new();
        match kind {
            CharKind::Verma => {
                let m = build_verma(fc, &hw, depth)?;
                let mc = module_character(&m);
                oracles.push("pbw-module");
                mismatches.extend(compare("partition_fn", &ch, "pbw_module", &mc, fc));
                if depth <= 3 {
                    oracles.push("brute-force-multisets");
                    for (b, mult) in &ch.coeffs {
                        let brute = partition_fn_brute(fc, b);
                        if brute != *mult {
                            mismatches.push(json!({
                                "weight": hw.sub_root(fc, b).to_string(),
                                "partition_fn": mult,
                                "brute_force": brute,
                            }));
                        }
                    }
                }
                module = Some(m);
            }
            CharKind::Irrep => {
                let f = freudenthal_character(fc, &hw, depth)?;
                let ml = cfg
                    .max_len
                    .unwrap_or_else(|| sufficient_max_len(fc, &hw, depth));
                let wk = weyl_kac_character(fc, &hw, depth, ml)?;
                let window = irreducible_window(fc, &hw, depth);
                let m = irreducible_quotient(fc, &build_verma_in(fc, &hw, &window)?)?;
                let sc = module_character(&m);
                oracles.extend(["freudenthal", "weyl-kac", "shapovalov-quotient"]);
                mismatches.extend(compare("freudenthal", &f, "weyl_kac", &wk, fc));
                mismatches.extend(compare("freudenthal", &f, "shapovalov_quotient", &sc, fc));
                mismatches.extend(compare("freudenthal", &f, "reported", &ch, fc));
                module = Some(m);
            }
        }
        v["verify"] = json!({
            "oracles": oracles,
            "agree": mismatches.is_empty(),
            "mismatches": mismatches,
        });
    }
    if realize {
        let m = match module {
            Some(m) => m,
            None => match kind {
                CharKind::Verma => build_verma(fc, &hw, depth)?,
                CharKind::Irrep => irreducible_module(fc, &hw, depth)?,
            },
        };
        v["realized"] = json!(dims_rows(&m, fc));
    }
    Ok(v)
}

fn parse_weight(fc: &FiniteCartan, s: &str) -> Result<AffineWeight> {
    let w: AffineWeight = s.parse()?;
    if w.rank() != fc.rank() {
        return Err(KmError::Parse(format!(
            "weight {s} has the wrong number of labels"
        )));
    }
    Ok(w)
}

fn kostant_payload(
    cfg: &RunConfig,
    fc: &FiniteCartan,
    extra: &[String],
    controls: usize,
    index: IndexChoice,
) -> Result<Value> {
    let hw = hw_weight(cfg, fc)?;
    let max_len = cfg.max_len.unwrap_or(2);
    let mut weights = extra
        .iter()
        .map(|s| parse_weight(fc, s))
        .collect::<Result<Vec<_>>>()?;
    weights.extend(default_controls(fc, &hw, controls)?);
    let report = kostant_verify(fc, &hw, max_len, &weights)?;
    let pass = report.structural_ok()
        && match index {
            IndexChoice::L => report.all_l(),
            IndexChoice::S => report.all_s(),
            IndexChoice::Both => report.all_l() || report.all_s(),
        };
    let mut v = report.to_json();
    v["index"] = json!(match index {
        IndexChoice::L => "l",
        IndexChoice::S => "s",
        IndexChoice::Both => "both",
    });
    v["pass"] = json!(pass);
    Ok(v)
}

fn bracket_table(fc: &FiniteCartan, depth: u32) -> Value {
    let finite: Vec<Value> = (0..fc.dim())
        .flat_map(|a| (a + 1..fc.dim()).map(move |b| (a, b)))
        .filter_map(|(a, b)| {
            let r = fc.bracket(a, b);
            (!r.is_empty()).then(|| {
                json!({
                    "x": fc.basis_label(a),
                    "y": fc.basis_label(b),
                    "bracket": r.iter().map(|(k, c)| json!([fc.basis_label(*k), c])).collect::<Vec<_>>(),
                })
            })
        })
        .collect();
    let nt = NTilde::new(fc, depth);
    let mut loop_rows = Vec::new();
    for a in 0..nt.len() {
        for b in a + 1..nt.len() {
            let (x, y) = (&nt.elems[a], &nt.elems[b]);
            if x.z_exp + y.z_exp > i64::from(depth) {
                continue;
            }
            let coords = nt.coords(&bracket(fc, &x.element(), &y.element())).unwrap();
            if coords.is_empty() {
                continue;
            }
            loop_rows.push(json!({
                "x": x.label(fc),
                "y": y.label(fc),
                "bracket": coords
                    .iter()
                    .map(|(k, c)| json!([nt.elems[*k].label(fc), fmt_q(c)]))
                    .collect::<Vec<_>>(),
            }));
        }
    }
    json!({
        "depth": depth,
        "finite": {
            "basis": (0..fc.dim()).map(|a| fc.basis_label(a)).collect::<Vec<_>>(),
            "brackets": finite,
        },
        "ntilde": {
            "basis": nt.elems.iter().map(|e| e.label(fc)).collect::<Vec<_>>(),
            "weights": nt.elems.iter().map(|e| e.weight.0.clone()).collect::<Vec<_>>(),
            "brackets": loop_rows,
        },
    })
}

fn exit_code(cmd: &Command, payload: &Value) -> i32 {
    let ok = match cmd {
        Command::Char { verify: true, .. } => payload["verify"]["agree"].as_bool().unwrap_or(false),
        Command::CheckDenominator => payload["ok"].as_bool().unwrap_or(false),
        Command::VerifyKostant { .. } => payload["pass"].as_bool().unwrap_or(false),
        _ => true,
    };
    if ok {
        0
    } else {
        1
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

/// Renders a payload. JSON is canonical; TSV and text are derived from the
/// payload alone, so cached and fresh runs print the same bytes.
pub fn render(cmd: &Command, payload: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => canonical_json(payload),
        OutputFormat::Tsv => render_tsv(cmd, payload),
        OutputFormat::Pretty => render_pretty(cmd, payload),
    }
}

fn render_tsv(cmd: &Command, p: &Value) -> String {
    let mut out = String::new();
    match cmd {
        Command::Describe => {
            out.push_str("key\tvalue\n");
            for key in [
                "finite_type",
                "rank",
                "coxeter_g",
                "delta_multiplicity",
                "rho_tilde",
            ] {
                let _ = writeln!(out, "{key}\t{}", cell(&p[key]));
            }
            for (i, row) in p["gcm"].as_array().into_iter().flatten().enumerate() {
                let _ = writeln!(out, "gcm_row_{i}\t{}", cell(row));
            }
            let _ = writeln!(out, "marks\t{}", cell(&p["marks"]));
            let _ = writeln!(out, "comarks\t{}", cell(&p["comarks"]));
        }
        Command::WeylEnum => {
            out.push_str("word\tl\ts\tnegates_alpha0\trho_image\tdot_hw\n");
            for e in p["elements"].as_array().into_iter().flatten() {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    cell(&e["display"]),
                    e["l"],
                    e["s"],
                    e["negates_alpha0"],
                    cell(&e["rho_image"]),
                    cell(&e["dot_hw"])
                );
            }
        }
        Command::Char { .. } => {
            if let Some(rows) = p["realized"].as_array() {
                out.push_str("beta\tweight\tdim\n");
                for r in rows {
                    let _ = writeln!(out, "{}\t{}\t{}", cell(&r[0]), cell(&r[1]), r[2]);
                }
            } else {
                out.push_str("weight\tmult\n");
                for r in p["coeffs"].as_array().into_iter().flatten() {
                    let _ = writeln!(out, "{}\t{}", cell(&r[0]), r[1]);
                }
            }
        }
        Command::CheckDenominator => {
            out.push_str("depth\tmax_len\tterms\tweyl_terms\tok\n");
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                p["depth"], p["max_len"], p["terms"], p["weyl_terms"], p["ok"]
            );
        }
        Command::VerifyKostant { .. } => {
            out.push_str("weight\tword\tl\ts\tdims\tverdict_l\tverdict_s\n");
            for r in p["records"].as_array().into_iter().flatten() {
                let c = &r["classify"];
                let dims: Vec<String> = r["dims"]
                    .as_object()
                    .map(|m| {
                        let mut v: Vec<(usize, String)> = m
                            .iter()
                            .map(|(k, d)| (k.parse().unwrap_or(0), d.to_string()))
                            .collect();
                        v.sort();
                        v.into_iter().map(|x| x.1).collect()
                    })
                    .unwrap_or_default();
                let word = if c.is_null() {
                    "-".to_string()
                } else {
                    word_display(&c["word"])
                };
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    cell(&r["weight"]),
                    word,
                    cell(&c["l"]),
                    cell(&c["s"]),
                    dims.join(","),
                    r["verdict_l"],
                    r["verdict_s"]
                );
            }
        }
        Command::BracketTable => {
            out.push_str("part\tx\ty\tbracket\n");
            for part in ["finite", "ntilde"] {
                for r in p[part]["brackets"].as_array().into_iter().flatten() {
                    let terms: Vec<String> = r["bracket"]
                        .as_array()
                        .into_iter()
                        .flatten()
                        .map(|t| format!("{}*{}", cell(&t[1]), cell(&t[0])))
                        .collect();
                    let _ = writeln!(
                        out,
                        "{part}\t{}\t{}\t{}",
                        cell(&r["x"]),
                        cell(&r["y"]),
                        terms.join(" + ")
                    );
                }
            }
        }
    }
    out
}

fn word_display(w: &Value) -> String {
    let letters: Vec<String> = w
        .as_array()
        .into_iter()
        .flatten()
        .map(|x| format!("r{x}"))
        .collect();
    if letters.is_empty() {
        "e".into()
    } else {
        letters.join(" ")
    }
}

fn render_pretty(cmd: &Command, p: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", cell(&p["command"]), cell(&p["algebra"]));
    match cmd {
        Command::Describe => {
            let _ = writeln!(out, "  GCM:");
            for row in p["gcm"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "    [{}]", cell(row));
            }
            let _ = writeln!(out, "  marks a_i:      {}", cell(&p["marks"]));
            let _ = writeln!(out, "  comarks ǎ_i:    {}", cell(&p["comarks"]));
            let _ = writeln!(out, "  Coxeter number: {}", p["coxeter_g"]);
            let _ = writeln!(out, "  mult(δ):        {}", p["delta_multiplicity"]);
            let _ = writeln!(out, "  ρ̃:              {}", cell(&p["rho_tilde"]));
            for (i, r) in p["simple_roots"]
                .as_array()
                .into_iter()
                .flatten()
                .enumerate()
            {
                let _ = writeln!(out, "  α_{i} = {}", cell(r));
            }
        }
        Command::WeylEnum => {
            let _ = writeln!(
                out,
                "  elements by length: {}",
                cell(&p["counts_by_length"])
            );
            for e in p["elements"].as_array().into_iter().flatten() {
                let _ = writeln!(
                    out,
                    "  {:<16} l={} s={}  w·λ = {}",
                    cell(&e["display"]),
                    e["l"],
                    e["s"],
                    cell(&e["dot_hw"])
                );
            }
        }
        Command::Char { .. } => {
            let _ = writeln!(
                out,
                "  {} character of {} to depth {} ({})",
                cell(&p["kind"]),
                cell(&p["hw"]),
                p["depth"],
                cell(&p["method"])
            );
            let _ = writeln!(out, "  along λ − nδ: {}", cell(&p["delta_string"]));
            for r in p["coeffs"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "  {:<24} {}", cell(&r[0]), r[1]);
            }
            if !p["verify"].is_null() {
                let _ = writeln!(
                    out,
                    "  oracles {}: {}",
                    cell(&p["verify"]["oracles"]),
                    if p["verify"]["agree"] == json!(true) {
                        "agree"
                    } else {
                        "DISAGREE"
                    }
                );
            }
            if let Some(rows) = p["realized"].as_array() {
                let _ = writeln!(out, "  realized weight spaces: {}", rows.len());
            }
        }
        Command::CheckDenominator => {
            let _ = writeln!(
                out,
                "  depth {} with words up to length {}: {} product terms, {} Weyl terms, {}",
                p["depth"],
                p["max_len"],
                p["terms"],
                p["weyl_terms"],
                if p["ok"] == json!(true) {
                    "identity holds"
                } else {
                    "MISMATCH"
                }
            );
        }
        Command::VerifyKostant { .. } => {
            out.push_str(&render_tsv(cmd, p));
            let _ = writeln!(
                out,
                "  uniform indexing: {} (requested {}); structural checks {}; {}",
                cell(&p["matching_index"]),
                cell(&p["index"]),
                if p["structural_ok"] == json!(true) {
                    "ok"
                } else {
                    "FAILED"
                },
                if p["pass"] == json!(true) {
                    "PASS"
                } else {
                    "FAIL"
                }
            );
        }
        Command::BracketTable => out.push_str(&render_tsv(cmd, p)),
    }
    out
}
