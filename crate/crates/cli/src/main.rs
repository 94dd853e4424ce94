use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qexp::expcheck::{is_exponentiable, partial_product, slice_exponential, ExpError, PartialProduct};
use qexp::instance::{Instance, InstanceError};
use qexp::oracle::{
    brute_force_exponentiable, check_adjunction_bijection, preorder_equivalence, slice_probes,
    verify_universal_property, BruteForceVerdict, Budget, OracleVerdict, Outcome, ProbeFamily, SearchOptions,
};
use qexp::order::FiniteLattice;
use qexp::quantaloid::{
    boolean_quantale, chain_quantale, endo_quantale, free_quantaloid_on_graph, powerset_monoid_quantale, DiGraph,
    FiniteMonoid, Quantaloid,
};

const OK: u8 = 0;
const FALSE: u8 = 1;
const MALFORMED: u8 = 2;
const INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "qexp", version, about = "Exponentiability of functors between finite quantaloid-enriched categories")]
struct Cli {
    /// Work budget for oracle runs.
    #[arg(long, global = true, env = "QEXP_BUDGET")]
    budget: Option<u64>,
    /// Seed for sampled targets and distributors.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every verifier on an instance file.
    Validate { path: PathBuf },
    /// Decide exponentiability of a functor and print both conditions with witnesses.
    Check {
        path: PathBuf,
        #[arg(long)]
        functor: String,
    },
    /// Build the partial product of a category along a functor.
    Pp {
        path: PathBuf,
        #[arg(long)]
        functor: String,
        /// Name of the category C.
        #[arg(long)]
        target: String,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Check the universal property with the brute-force oracle.
        #[arg(long)]
        verify: bool,
        /// Add every category with at most this many objects to the probe family.
        #[arg(long)]
        max_probe_objects: Option<usize>,
    },
    /// Build the slice exponential of G along F.
    Exp {
        path: PathBuf,
        #[arg(long)]
        functor: String,
        /// Name of the functor G: C -> B.
        #[arg(long)]
        target: String,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Check the adjunction bijection against probes X -> B.
        #[arg(long)]
        verify: bool,
        /// Largest probe category X.
        #[arg(long, default_value_t = 2)]
        max_probe_objects: usize,
    },
    /// Run an oracle suite.
    Oracle {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Instance file, for the brute-force suite.
        path: Option<PathBuf>,
        #[arg(long)]
        functor: Option<String>,
        /// Largest preorder in the equivalence corpus.
        #[arg(long, default_value_t = 3)]
        max_objects: usize,
        /// Random distributors per pair of fibers added to the target corpus.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Add every category with at most this many objects to the probe family.
        #[arg(long)]
        max_probe_objects: Option<usize>,
    },
    /// Write a builder's quantaloid as an instance file.
    Gen {
        #[arg(long, value_enum)]
        builder: Builder,
        /// Size parameter: chain length, cyclic monoid order, graph vertex count.
        #[arg(long)]
        n: Option<usize>,
        /// Lattice for the endomorphism builder: chain:N, m3, n5 or powerset:K.
        #[arg(long)]
        lattice: Option<String>,
        /// Graph edges for the free builder, as "0-1,1-2".
        #[arg(long)]
        edges: Option<String>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    PreorderEquivalence,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builder {
    Boolean,
    Chain,
    Endo,
    Free,
    PowersetMonoid,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        Self::new(MALFORMED, e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.budget.map(Budget::new).unwrap_or_default();
    let result = match cli.command {
        Command::Validate { path } => validate(&path),
        Command::Check { path, functor } => check(&path, &functor),
        Command::Pp { path, functor, target, output, verify, max_probe_objects } => {
            pp(&path, &functor, &target, output.as_deref(), verify, max_probe_objects, budget)
        }
        Command::Exp { path, functor, target, output, verify, max_probe_objects } => {
            exp(&path, &functor, &target, output.as_deref(), verify, max_probe_objects, budget)
        }
        Command::Oracle { suite, path, functor, max_objects, samples, max_probe_objects } => {
            let options = |q: &Arc<Quantaloid>| SearchOptions {
                budget,
                probes: max_probe_objects.map(|k| ProbeFamily::standard(q).extend(ProbeFamily::all_up_to(q, k))),
                samples,
                seed: cli.seed,
                max_target_objects: None,
            };
            match suite {
                Suite::PreorderEquivalence => equivalence(max_objects, &options(&Arc::new(boolean_quantale()))),
                Suite::Brute => match (path, functor) {
                    (Some(path), Some(functor)) => brute(&path, &functor, options),
                    _ => Err(Failure::new(MALFORMED, "the brute suite needs an instance path and --functor")),
                },
            }
        }
        Command::Gen { builder, n, lattice, edges, output } => {
            gen(builder, n, lattice.as_deref(), edges.as_deref(), output.as_deref())
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("qexp: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn print_json(value: &impl serde::Serialize) {
    print_out(&format!("{}\n", serde_json::to_string_pretty(value).expect("reports serialize")));
}

/// Writes to stdout, ignoring a closed pipe.
fn print_out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

/// Writes through a temporary file in the target directory, then renames it into place.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let io = |e: std::io::Error| Failure::new(MALFORMED, format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn emit(instance: &Instance, output: Option<&Path>) -> Result<(), Failure> {
    let text = instance.to_json_string();
    match output {
        Some(path) => write_atomic(path, &text),
        None => {
            print_out(&text);
            Ok(())
        }
    }
}

/// Loads a file and refuses to go on unless every structure passes its verifier.
fn load_valid(path: &Path) -> Result<Instance, Failure> {
    let instance = Instance::load(path)?;
    let report = instance.validate();
    if let Some(bad) = report.invalid().next() {
        let msg = format!("{} {:?} violates its axioms (run `qexp validate` for details)", bad.kind, bad.name);
        return Err(Failure::new(MALFORMED, msg));
    }
    Ok(instance)
}

fn validate(path: &Path) -> CmdResult {
    let instance = Instance::load(path)?;
    let report = instance.validate();
    print_json(&report);
    Ok(if report.valid { OK } else { FALSE })
}

fn exp_failure(e: ExpError) -> Failure {
    match e {
        ExpError::ConditionViolated(report) => {
            print_json(&report);
            Failure::new(FALSE, "the functor is not exponentiable")
        }
        other => Failure::new(MALFORMED, other.to_string()),
    }
}

fn check(path: &Path, functor: &str) -> CmdResult {
    let instance = load_valid(path)?;
    let f = &instance.functor(functor)?.functor;
    let report = is_exponentiable(f).map_err(exp_failure)?;
    print_json(&report);
    Ok(if report.verdict { OK } else { FALSE })
}

fn oracle_code(verdict: &OracleVerdict) -> u8 {
    match verdict.outcome {
        Outcome::Passed => OK,
        Outcome::Failed => FALSE,
        Outcome::Inconclusive => INCONCLUSIVE,
    }
}

/// An instance holding `F`, its domain and codomain, the target category `C`, the
/// constructed category under `name` with its pullback `name_x_A`, and `proj` and `eval`.
fn constructed(
    instance: &Instance,
    f_name: &str,
    target: &str,
    extra_functor: Option<&str>,
    pp: &PartialProduct,
    name: &str,
) -> Result<Instance, Failure> {
    let entry = instance.functor(f_name)?;
    let mut out = Instance::new(instance.quantaloid.clone());
    for cat in [entry.dom.as_str(), entry.cod.as_str(), target] {
        out.add_category(cat, instance.category(cat)?);
    }
    let pb_name = format!("{name}_x_{}", entry.dom);
    out.add_category(name, pp.category.clone());
    out.add_category(&pb_name, pp.pullback.category.clone());
    out.add_functor(f_name, &entry.dom, &entry.cod, entry.functor.clone())?;
    out.add_functor("proj", name, &entry.cod, pp.proj.clone())?;
    out.add_functor("eval", &pb_name, target, pp.eval.clone())?;
    if let Some(g_name) = extra_functor {
        let g = instance.functor(g_name)?;
        out.add_functor(g_name, &g.dom, &g.cod, g.functor.clone())?;
    }
    Ok(out)
}

fn pp(
    path: &Path,
    functor: &str,
    target: &str,
    output: Option<&Path>,
    verify: bool,
    max_probe_objects: Option<usize>,
    budget: Budget,
) -> CmdResult {
    let instance = load_valid(path)?;
    let f = &instance.functor(functor)?.functor;
    let c = instance.category(target)?;
    let product = partial_product(f, &c).map_err(exp_failure)?;
    emit(&constructed(&instance, functor, target, None, &product, "pp")?, output)?;
    if !verify {
        return Ok(OK);
    }
    let q = instance.quantaloid.clone();
    let mut probes = ProbeFamily::standard(&q);
    if let Some(k) = max_probe_objects {
        probes = probes.extend(ProbeFamily::all_up_to(&q, k));
    }
    let verdict = verify_universal_property(&product, &probes, budget);
    report_verdict(&verdict, output.is_some());
    Ok(oracle_code(&verdict))
}

fn report_verdict(verdict: &OracleVerdict, to_stdout: bool) {
    let text = serde_json::to_string_pretty(verdict).expect("verdicts serialize");
    if to_stdout {
        print_out(&format!("{text}\n"));
    } else {
        eprintln!("{text}");
    }
}

fn exp(
    path: &Path,
    functor: &str,
    target: &str,
    output: Option<&Path>,
    verify: bool,
    max_probe_objects: usize,
    budget: Budget,
) -> CmdResult {
    let instance = load_valid(path)?;
    let f = &instance.functor(functor)?.functor;
    let g_entry = instance.functor(target)?;
    let e = slice_exponential(f, &g_entry.functor).map_err(exp_failure)?;
    emit(&constructed(&instance, functor, &g_entry.dom, Some(target), &e.exponential, "exp")?, output)?;
    if !verify {
        return Ok(OK);
    }
    let probes = slice_probes(f.cod(), max_probe_objects);
    let verdict = check_adjunction_bijection(f, &g_entry.functor, &e, &probes, budget);
    report_verdict(&verdict, output.is_some());
    Ok(oracle_code(&verdict))
}

fn equivalence(max_objects: usize, options: &SearchOptions) -> CmdResult {
    let matrix = preorder_equivalence(max_objects, options);
    print_json(&matrix);
    Ok(if matrix.is_perfect() {
        OK
    } else if matrix.checker_only + matrix.oracle_only == 0 {
        INCONCLUSIVE
    } else {
        FALSE
    })
}

fn brute(path: &Path, functor: &str, options: impl Fn(&Arc<Quantaloid>) -> SearchOptions) -> CmdResult {
    let instance = load_valid(path)?;
    let f = &instance.functor(functor)?.functor;
    let checker = is_exponentiable(f).map_err(exp_failure)?.verdict;
    let verdict = brute_force_exponentiable(f, &options(&instance.quantaloid));
    print_json(&json!({ "checker": checker, "oracle": verdict }));
    Ok(match verdict {
        BruteForceVerdict::Exponentiable { .. } => OK,
        BruteForceVerdict::NotExponentiable(_) => FALSE,
        BruteForceVerdict::Inconclusive { .. } => INCONCLUSIVE,
    })
}

fn parse_lattice(spec: &str) -> Result<FiniteLattice, Failure> {
    let bad = || Failure::new(MALFORMED, format!("unknown lattice {spec:?}; use chain:N, m3, n5 or powerset:K"));
    let sized = |prefix: &str| spec.strip_prefix(prefix).map(|n| n.parse::<usize>().map_err(|_| bad()));
    match spec {
        "m3" => Ok(FiniteLattice::m3()),
        "n5" => Ok(FiniteLattice::n5()),
        _ => {
            if let Some(n) = sized("chain:") {
                let n = n?;
                if n == 0 {
                    return Err(bad());
                }
                Ok(FiniteLattice::chain(n))
            } else if let Some(k) = sized("powerset:") {
                Ok(FiniteLattice::powerset(k?))
            } else {
                Err(bad())
            }
        }
    }
}

fn parse_edges(spec: &str) -> Result<Vec<(usize, usize)>, Failure> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|e| {
            let (a, b) = e.split_once('-').ok_or_else(|| Failure::new(MALFORMED, format!("bad edge {e:?}")))?;
            let num =
                |s: &str| s.trim().parse::<usize>().map_err(|_| Failure::new(MALFORMED, format!("bad edge {e:?}")));
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

fn gen(
    builder: Builder,
    n: Option<usize>,
    lattice: Option<&str>,
    edges: Option<&str>,
    output: Option<&Path>,
) -> CmdResult {
    let need = |what: &str| Failure::new(MALFORMED, format!("this builder needs --{what}"));
    let built = match builder {
        Builder::Boolean => Ok(boolean_quantale()),
        Builder::Chain => chain_quantale(n.ok_or_else(|| need("n"))?),
        Builder::Endo => endo_quantale(&parse_lattice(lattice.ok_or_else(|| need("lattice"))?)?),
        Builder::Free => {
            let g = DiGraph::new(n.ok_or_else(|| need("n"))?, parse_edges(edges.unwrap_or(""))?);
            free_quantaloid_on_graph(&g)
        }
        Builder::PowersetMonoid => {
            let monoid = match n {
                Some(k) => FiniteMonoid::cyclic(k),
                None => Ok(FiniteMonoid::idempotent()),
            };
            monoid.and_then(|m| powerset_monoid_quantale(&m))
        }
    };
    let q = built.map_err(|e| Failure::new(MALFORMED, e.to_string()))?;
    emit(&Instance::new(Arc::new(q)), output)?;
    Ok(OK)
}
