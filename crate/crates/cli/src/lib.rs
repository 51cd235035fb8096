//! Pipeline driver behind the `molpea` binary.
//!
//! A run is described by flat `key = value` settings (from a config file,
//! command-line flags, or both) and produces a distribution CSV plus a
//! key-value metadata sidecar.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use molpea::chem::{self, Molecule, MoleculeSpec, OverlapParams};
use molpea::fermion::jw_transform;
use molpea::lcu::{self, LcuConfig};
use molpea::pauli::{parse_complex, PauliSum};
use molpea::pea::{self, InitialState, PeaConfig, PhaseDistribution};
use molpea::statevec::{self, EvolutionOperator};
use molpea::{CVector, Complex64};
use thiserror::Error;

pub const TOOL_VERSION: &str = concat!("molpea ", env!("CARGO_PKG_VERSION"));

pub const DEFAULT_TIME: f64 = 1.0;
pub const DEFAULT_REGISTERS: usize = 100;
/// Taylor order for Hamiltonians read from a file.
pub const DEFAULT_FILE_ORDER: usize = 2;

/// Every key accepted in a config file or as a `--key` flag.
pub const KEYS: &[&str] = &[
    "molecule",
    "hamiltonian-file",
    "h-matrix",
    "overlap-file",
    "S",
    "S1",
    "S2",
    "order",
    "segments",
    "time",
    "registers",
    "initial-state",
    "out",
    "metadata-out",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{key}: {message}")]
    Config { key: String, message: String },

    #[error("{key}: {}: {source}", path.display())]
    Io {
        key: String,
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{key}: {source}")]
    Input { key: String, source: molpea::Error },

    #[error("{0}")]
    Pipeline(molpea::Error),
}

impl CliError {
    fn config(key: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            key: key.to_string(),
            message: message.into(),
        }
    }

    fn input(key: &str) -> impl FnOnce(molpea::Error) -> CliError + '_ {
        move |source| match source {
            molpea::Error::InvalidConfig { key, message } => CliError::Config { key, message },
            other => CliError::Input {
                key: key.to_string(),
                source: other,
            },
        }
    }
}

impl From<molpea::Error> for CliError {
    fn from(e: molpea::Error) -> Self {
        match e {
            molpea::Error::InvalidConfig { key, message } => CliError::Config { key, message },
            other => CliError::Pipeline(other),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianSource {
    Fixture(Molecule),
    File(PathBuf),
    /// Overlap → Gram-Schmidt → one-body `h` → Jordan-Wigner.
    Constructed {
        molecule: Molecule,
        overlap: OverlapParams,
        overlap_file: Option<PathBuf>,
        h_matrix: PathBuf,
    },
}

impl HamiltonianSource {
    fn label(&self) -> String {
        match self {
            HamiltonianSource::Fixture(m) => m.name().to_string(),
            HamiltonianSource::File(p) => p.display().to_string(),
            HamiltonianSource::Constructed { molecule, .. } => molecule.name().to_string(),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            HamiltonianSource::Fixture(_) => "fixture",
            HamiltonianSource::File(_) => "file",
            HamiltonianSource::Constructed { .. } => "constructed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Taylor(usize),
    /// Exact `e^{-iHt}` from the eigendecomposition.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialStateSpec {
    Uniform,
    Eigenstate(usize),
    Basis(usize),
    VectorFile(PathBuf),
}

impl InitialStateSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || {
            CliError::config(
                "initial-state",
                format!("expected uniform, eigenstate:<i>, basis:<i> or vector:<path>, got `{s}`"),
            )
        };
        let index = |v: &str| v.trim().parse::<usize>().map_err(|_| bad());
        match s.trim().split_once(':') {
            None if s.trim() == "uniform" => Ok(InitialStateSpec::Uniform),
            Some(("eigenstate", v)) => Ok(InitialStateSpec::Eigenstate(index(v)?)),
            Some(("basis", v)) => Ok(InitialStateSpec::Basis(index(v)?)),
            Some(("vector", v)) if !v.trim().is_empty() => {
                Ok(InitialStateSpec::VectorFile(PathBuf::from(v.trim())))
            }
            _ => Err(bad()),
        }
    }

    fn describe(&self) -> String {
        match self {
            InitialStateSpec::Uniform => "uniform".into(),
            InitialStateSpec::Eigenstate(i) => format!("eigenstate:{i}"),
            InitialStateSpec::Basis(i) => format!("basis:{i}"),
            InitialStateSpec::VectorFile(p) => format!("vector:{}", p.display()),
        }
    }

    fn resolve(&self) -> Result<InitialState> {
        Ok(match self {
            InitialStateSpec::Uniform => InitialState::Uniform,
            InitialStateSpec::Eigenstate(i) => InitialState::Eigenstate(*i),
            InitialStateSpec::Basis(i) => InitialState::Basis(*i),
            InitialStateSpec::VectorFile(p) => InitialState::Vector(
                parse_vector(&read("initial-state", p)?)
                    .map_err(CliError::input("initial-state"))?,
            ),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: HamiltonianSource,
    /// `None` picks the molecule's default order.
    pub order: Option<Order>,
    /// `None` picks `max(1, ⌈‖H‖₁|t|⌉)`.
    pub segments: Option<usize>,
    pub time: f64,
    pub registers: usize,
    pub initial_state: InitialStateSpec,
    pub out: PathBuf,
    /// Defaults to `<out>.meta`.
    pub metadata_out: Option<PathBuf>,
}

impl RunConfig {
    /// Builds a config from flat settings, rejecting unknown keys.
    pub fn from_settings(settings: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(k) = settings.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::config(k, "unknown key"));
        }
        let get = |k: &str| settings.get(k).map(|v| v.trim()).filter(|v| !v.is_empty());
        let path = |k: &str| get(k).map(PathBuf::from);

        let params = OverlapParams {
            s: parse_num(get("S"), "S")?.unwrap_or(0.0),
            s1: parse_num(get("S1"), "S1")?.unwrap_or(0.0),
            s2: parse_num(get("S2"), "S2")?.unwrap_or(0.0),
        };
        let molecule = get("molecule")
            .map(|m| {
                m.parse::<Molecule>()
                    .map_err(|e| CliError::config("molecule", e.to_string()))
            })
            .transpose()?;

        let source = match (molecule, path("hamiltonian-file"), path("h-matrix")) {
            (_, Some(_), Some(_)) => {
                return Err(CliError::config(
                    "h-matrix",
                    "cannot be combined with hamiltonian-file",
                ))
            }
            (Some(_), Some(_), None) => {
                return Err(CliError::config(
                    "hamiltonian-file",
                    "cannot be combined with molecule; give exactly one Hamiltonian source",
                ))
            }
            (None, Some(file), None) => HamiltonianSource::File(file),
            (None, None, Some(_)) => {
                return Err(CliError::config(
                    "molecule",
                    "h-matrix needs a molecule (named or custom)",
                ))
            }
            (Some(molecule), None, Some(h_matrix)) => {
                if molecule == Molecule::Custom && get("overlap-file").is_none() {
                    return Err(CliError::config(
                        "overlap-file",
                        "custom molecule needs an overlap matrix file",
                    ));
                }
                HamiltonianSource::Constructed {
                    molecule,
                    overlap: params,
                    overlap_file: path("overlap-file"),
                    h_matrix,
                }
            }
            (Some(Molecule::Custom), None, None) => {
                return Err(CliError::config(
                    "molecule",
                    "custom molecule needs h-matrix",
                ))
            }
            (Some(m), None, None) => HamiltonianSource::Fixture(m),
            (None, None, None) => {
                return Err(CliError::config(
                    "molecule",
                    "no Hamiltonian source; set molecule or hamiltonian-file",
                ))
            }
        };
        if !matches!(source, HamiltonianSource::Constructed { .. }) {
            if let Some(k) = ["S", "S1", "S2", "overlap-file"]
                .into_iter()
                .find(|k| get(k).is_some())
            {
                return Err(CliError::config(k, "only used together with h-matrix"));
            }
        }

        let order = match get("order") {
            None => None,
            Some("exact") => Some(Order::Exact),
            Some(v) => Some(Order::Taylor(v.parse().map_err(|_| {
                CliError::config(
                    "order",
                    format!("expected a non-negative integer or `exact`, got `{v}`"),
                )
            })?)),
        };
        let segments = parse_num::<usize>(get("segments"), "segments")?;
        if segments == Some(0) {
            return Err(CliError::config("segments", "must be at least 1"));
        }
        if segments.is_some() && order == Some(Order::Exact) {
            return Err(CliError::config("segments", "not used with order = exact"));
        }
        let time = parse_num(get("time"), "time")?.unwrap_or(DEFAULT_TIME);
        if time == 0.0 || !time.is_finite() {
            return Err(CliError::config("time", "must be finite and nonzero"));
        }
        let registers = parse_num(get("registers"), "registers")?.unwrap_or(DEFAULT_REGISTERS);
        if registers < 2 {
            return Err(CliError::config("registers", "must be at least 2"));
        }
        let initial_state = get("initial-state")
            .map(InitialStateSpec::parse)
            .transpose()?
            .unwrap_or(InitialStateSpec::Uniform);
        let out = path("out").ok_or_else(|| CliError::config("out", "output path is required"))?;

        Ok(RunConfig {
            source,
            order,
            segments,
            time,
            registers,
            initial_state,
            out,
            metadata_out: path("metadata-out"),
        })
    }

    pub fn metadata_path(&self) -> PathBuf {
        self.metadata_out.clone().unwrap_or_else(|| {
            let mut s = self.out.clone().into_os_string();
            s.push(".meta");
            PathBuf::from(s)
        })
    }

    fn resolved_order(&self) -> Order {
        self.order.unwrap_or(match &self.source {
            HamiltonianSource::Fixture(m) | HamiltonianSource::Constructed { molecule: m, .. } => {
                Order::Taylor(m.default_order())
            }
            HamiltonianSource::File(_) => Order::Taylor(DEFAULT_FILE_ORDER),
        })
    }
}

/// Reads `key = value` lines; `#` starts a comment line.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::config(
                "config",
                format!("line {}: expected `key = value`", idx + 1),
            )
        })?;
        let key = k.trim().to_string();
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::config(
                &key,
                format!("duplicate key on line {}", idx + 1),
            ));
        }
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    parse_config(&read("config", path)?)
}

/// Complex amplitudes, one per line.
pub fn parse_vector(text: &str) -> molpea::Result<CVector> {
    let mut v: Vec<Complex64> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        v.push(parse_complex(line).map_err(|message| molpea::Error::Parse {
            line: idx + 1,
            message,
        })?);
    }
    if v.is_empty() {
        return Err(molpea::Error::Parse {
            line: 0,
            message: "no amplitudes".into(),
        });
    }
    Ok(CVector::from_vec(v))
}

fn parse_num<T: std::str::FromStr>(v: Option<&str>, key: &str) -> Result<Option<T>> {
    v.map(|s| {
        s.parse::<T>()
            .map_err(|_| CliError::config(key, format!("cannot parse `{s}`")))
    })
    .transpose()
}

fn read(key: &str, path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        key: key.to_string(),
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_hamiltonian(source: &HamiltonianSource) -> Result<PauliSum> {
    match source {
        HamiltonianSource::Fixture(m) => {
            Ok(chem::load_fixture(m.name()).map_err(CliError::input("molecule"))?)
        }
        HamiltonianSource::File(path) => PauliSum::parse(&read("hamiltonian-file", path)?)
            .map_err(CliError::input("hamiltonian-file")),
        HamiltonianSource::Constructed {
            molecule,
            overlap,
            overlap_file,
            h_matrix,
        } => {
            let h = chem::parse_matrix(&read("h-matrix", h_matrix)?)
                .map_err(CliError::input("h-matrix"))?;
            let mut spec = match overlap_file {
                Some(p) if *molecule == Molecule::Custom => MoleculeSpec::custom(
                    chem::parse_matrix(&read("overlap-file", p)?)
                        .map_err(CliError::input("overlap-file"))?,
                ),
                _ => MoleculeSpec::named(*molecule, *overlap),
            };
            spec = spec.with_one_body(h.map(|x| Complex64::new(x, 0.0)));
            let s = chem::build_overlap(&spec).map_err(CliError::input("S"))?;
            if s.dim() != h.nrows() {
                return Err(CliError::config(
                    "h-matrix",
                    format!(
                        "is {0}x{0} but the overlap matrix is {1}x{1}",
                        h.nrows(),
                        s.dim()
                    ),
                ));
            }
            let basis = chem::gram_schmidt(&s).map_err(CliError::input("S"))?;
            let fermions =
                chem::build_hamiltonian(&spec, &basis).map_err(CliError::input("h-matrix"))?;
            Ok(jw_transform(&fermions)?)
        }
    }
}

/// Outputs of a run, rendered but not yet written.
#[derive(Debug, Clone)]
pub struct Run {
    pub hamiltonian: PauliSum,
    pub distribution: PhaseDistribution,
    pub csv: String,
    pub metadata: String,
}

/// Runs the full pipeline in memory.
pub fn execute(cfg: &RunConfig) -> Result<Run> {
    let h = load_hamiltonian(&cfg.source)?;
    let (eigenvalues, _) = statevec::eig_hermitian(&statevec::hermitian_dense(&h)?)?;
    let system = cfg
        .initial_state
        .resolve()?
        .prepare(&h)
        .map_err(CliError::input("initial-state"))?;
    let pea_cfg = PeaConfig::new(cfg.registers, cfg.time)?;

    let mut meta: Vec<(&str, String)> = vec![
        ("molecule", cfg.source.label()),
        ("source", cfg.source.kind().into()),
        ("n_qubits", h.num_qubits().to_string()),
        ("n_terms", h.len().to_string()),
    ];
    let u: EvolutionOperator = match cfg.resolved_order() {
        Order::Exact => {
            meta.push(("order", "exact".into()));
            meta.push(("segments", "0".into()));
            statevec::exact_exponential(&h, cfg.time)?
        }
        Order::Taylor(k) => {
            let segments = cfg
                .segments
                .unwrap_or_else(|| lcu::default_segments(&h, cfg.time));
            let lcu_cfg = LcuConfig::new(k, segments, cfg.time)?;
            let op = lcu::build_taylor(&h, lcu_cfg)?;
            let u = op.evolution_operator()?;
            let exact = statevec::exact_exponential(&h, cfg.time)?;
            let eps = (u.matrix() - exact.matrix()).singular_values().max();
            meta.push(("order", k.to_string()));
            meta.push(("segments", segments.to_string()));
            meta.push(("truncation_error", format!("{eps:.16e}")));
            meta.push(("error_bound", format!("{:.16e}", op.error_bound)));
            u
        }
    };
    let dist = pea::run_pea(&u, pea_cfg, &system)?;

    meta.push(("time", format!("{:.16e}", cfg.time)));
    meta.push(("registers", cfg.registers.to_string()));
    meta.push(("initial_state", cfg.initial_state.describe()));
    meta.push((
        "success_probability",
        format!("{:.16e}", dist.success_probability),
    ));
    let eig: Vec<String> = eigenvalues.iter().map(|e| format!("{e:.16e}")).collect();
    meta.push(("eigenvalues", eig.join(",")));
    if let Some(w) = dist.metadata.get("warning") {
        meta.push(("warning", w.clone()));
    }
    meta.push(("tool_version", TOOL_VERSION.into()));

    let mut metadata = String::new();
    for (k, v) in &meta {
        writeln!(metadata, "{k}={v}").unwrap();
    }
    let csv = render_csv(&dist);
    Ok(Run {
        hamiltonian: h,
        distribution: dist,
        csv,
        metadata,
    })
}

/// `K,phase,probability` with 17 significant digits.
pub fn render_csv(d: &PhaseDistribution) -> String {
    let mut out = String::from("K,phase,probability\n");
    for (k, (phase, p)) in d.phases().iter().zip(&d.probabilities).enumerate() {
        writeln!(out, "{k},{phase:.16e},{p:.16e}").unwrap();
    }
    out
}

/// Runs the pipeline and writes the CSV and metadata files.
pub fn run_pipeline(cfg: &RunConfig) -> Result<Run> {
    let run = execute(cfg)?;
    write("out", &cfg.out, &run.csv)?;
    write("metadata-out", &cfg.metadata_path(), &run.metadata)?;
    Ok(run)
}

fn write(key: &str, path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        key: key.to_string(),
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    fn key_of(e: CliError) -> String {
        match e {
            CliError::Config { key, .. }
            | CliError::Io { key, .. }
            | CliError::Input { key, .. } => key,
            CliError::Pipeline(e) => panic!("no key: {e}"),
        }
    }

    #[test]
    fn config_text() {
        let m = parse_config("# run\nmolecule = H2-nospin\n\norder=2\n").unwrap();
        assert_eq!(m["molecule"], "H2-nospin");
        assert_eq!(m["order"], "2");
        assert_eq!(
            key_of(parse_config("order = 1\norder = 2").unwrap_err()),
            "order"
        );
        assert_eq!(key_of(parse_config("order 2").unwrap_err()), "config");
    }

    #[test]
    fn defaults_and_sources() {
        let cfg =
            RunConfig::from_settings(&settings(&[("molecule", "he2-nospin"), ("out", "x.csv")]))
                .unwrap();
        assert_eq!(cfg.source, HamiltonianSource::Fixture(Molecule::He2NoSpin));
        assert_eq!(cfg.resolved_order(), Order::Taylor(1));
        assert_eq!(cfg.initial_state, InitialStateSpec::Uniform);
        assert_eq!(cfg.registers, DEFAULT_REGISTERS);
        assert_eq!(cfg.metadata_path(), PathBuf::from("x.csv.meta"));

        let cfg = RunConfig::from_settings(&settings(&[
            ("hamiltonian-file", "h.txt"),
            ("out", "x.csv"),
            ("order", "exact"),
        ]))
        .unwrap();
        assert_eq!(cfg.source, HamiltonianSource::File("h.txt".into()));
        assert_eq!(cfg.order, Some(Order::Exact));
    }

    #[test]
    fn invalid_settings_name_their_key() {
        let cases: &[(&[(&str, &str)], &str)] = &[
            (&[("out", "x")], "molecule"),
            (&[("molecule", "H2-nospin")], "out"),
            (&[("molecule", "Li2"), ("out", "x")], "molecule"),
            (
                &[
                    ("molecule", "H2-nospin"),
                    ("hamiltonian-file", "h"),
                    ("out", "x"),
                ],
                "hamiltonian-file",
            ),
            (
                &[("molecule", "H2-nospin"), ("order", "two"), ("out", "x")],
                "order",
            ),
            (
                &[("molecule", "H2-nospin"), ("segments", "0"), ("out", "x")],
                "segments",
            ),
            (
                &[("molecule", "H2-nospin"), ("time", "0"), ("out", "x")],
                "time",
            ),
            (
                &[("molecule", "H2-nospin"), ("registers", "1"), ("out", "x")],
                "registers",
            ),
            (
                &[
                    ("molecule", "H2-nospin"),
                    ("initial-state", "ground"),
                    ("out", "x"),
                ],
                "initial-state",
            ),
            (
                &[("molecule", "H2-nospin"), ("S", "0.3"), ("out", "x")],
                "S",
            ),
            (
                &[("molecule", "custom"), ("h-matrix", "h"), ("out", "x")],
                "overlap-file",
            ),
            (
                &[("molecule", "H2-nospin"), ("colour", "red"), ("out", "x")],
                "colour",
            ),
        ];
        for (pairs, key) in cases {
            let err = RunConfig::from_settings(&settings(pairs)).unwrap_err();
            assert!(!err.to_string().contains('\n'));
            assert_eq!(&key_of(err), key, "{pairs:?}");
        }
    }

    #[test]
    fn initial_state_descriptors() {
        assert_eq!(
            InitialStateSpec::parse("eigenstate:3").unwrap(),
            InitialStateSpec::Eigenstate(3)
        );
        assert_eq!(
            InitialStateSpec::parse("basis:1").unwrap(),
            InitialStateSpec::Basis(1)
        );
        assert_eq!(
            InitialStateSpec::parse("vector:a.txt").unwrap(),
            InitialStateSpec::VectorFile("a.txt".into())
        );
        assert!(InitialStateSpec::parse("basis:-1").is_err());
        assert!(InitialStateSpec::parse("vector:").is_err());
    }

    #[test]
    fn vector_text() {
        let v = parse_vector("# amplitudes\n0.6\n0+0.8i\n").unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[1], Complex64::new(0.0, 0.8));
        assert!(matches!(
            parse_vector("1\nx\n"),
            Err(molpea::Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn csv_layout() {
        let cfg = RunConfig::from_settings(&settings(&[
            ("molecule", "H2-nospin"),
            ("registers", "4"),
            ("out", "x"),
        ]))
        .unwrap();
        let run = execute(&cfg).unwrap();
        let lines: Vec<&str> = run.csv.lines().collect();
        assert_eq!(lines[0], "K,phase,probability");
        assert_eq!(lines.len(), 5);
        let fields: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(fields[0], "1");
        assert_eq!(
            fields[1].parse::<f64>().unwrap(),
            std::f64::consts::FRAC_PI_2
        );
    }
}
