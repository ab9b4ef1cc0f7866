use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use bicrossed::census::{
    census, census_limits, latin_square_census_oracle, sn_factorization, sn_matched_pair, SymmetricFactorization, CENSUS_CAP,
    SN_PAIR_CAP,
};
use bicrossed::complement::{alternating_double_factorization, find_complements, AlternatingReport, CandidateCheck, ALTERNATING_K_CAP};
use bicrossed::deformation::{classify, deform_group, enumerate_deformation_maps, psi_isomorphism, validate_deformation_map, DeformationMap};
use bicrossed::io::{
    read_json, render_action_tables, render_cayley, render_grid, CensusReport, ClassificationReport, ComplementReport, DeformationMapFile,
    DeformedReport, ExampleFile, FactorizationFile, MatchedPairFile, OracleReport, PairSource, ValidationReport,
};
use bicrossed::matched_pair::{canonical_matched_pair, check_factorization, validate_matched_pair, Factorization, MatchedPair};
use bicrossed::worked::{c3_c6, s4_index, s4_over_s3};
use bicrossed::{Budget, Error, Limits, DEFAULT_BUDGET};

const EXIT_INVALID: u8 = 1;
const EXIT_LIMIT: u8 = 2;
const EXIT_MALFORMED: u8 = 3;

const PRIMEXEM: &str = include_str!("../../../fixtures/primexem.json");
const C3C6: &str = include_str!("../../../fixtures/c3c6.json");

#[derive(Parser)]
#[command(name = "bicrossed", version, about = "Complements of exact factorizations G = AH via deformation maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Work units allowed for enumeration and search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, value_parser = positive)]
    workers: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, env = "BICROSSED_MAX_ORDER", default_value_t = Limits::default().max_order, value_parser = positive)]
    max_order: usize,
    /// Largest order with a dense Cayley table; the census defaults to 720.
    #[arg(long, global = true, env = "BICROSSED_TABLE_CAP", value_parser = positive)]
    table_cap: Option<usize>,
    #[arg(long, global = true, env = "BICROSSED_CENSUS_CAP", default_value_t = CENSUS_CAP, value_parser = positive)]
    census_cap: usize,
    #[arg(long, global = true, env = "BICROSSED_SN_CAP", default_value_t = SN_PAIR_CAP, value_parser = positive)]
    sn_cap: usize,
    #[arg(long, global = true, env = "BICROSSED_ALTERNATING_CAP", default_value_t = ALTERNATING_K_CAP, value_parser = positive)]
    alternating_cap: usize,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check that G = AH is an exact factorization.
    Factorize(FactorizationArg),
    /// Emit the canonical matched pair of a factorization.
    MatchedPair(FactorizationArg),
    /// Check the matched-pair axioms.
    ValidatePair(PairArgs),
    /// Check a deformation map against its pair.
    ValidateDeformation(MapArg),
    /// Build the r-deformation H_r and verify ψ.
    Deform(MapArg),
    /// List every deformation map of a pair.
    Enumerate(PairArgs),
    /// Factorization index with one class per isomorphism type.
    Classify(PairArgs),
    /// All A-complements by direct search.
    Complements(FactorizationArg),
    /// Factorization index by direct search.
    Index(FactorizationArg),
    /// Groups of order n as deformations of C_n.
    Census { n: usize },
    /// Groups of order n by completing group tables.
    OracleCensus { n: usize },
    /// Canonical pair of S_n = S_{n−1}C_n checked against the generator closed forms.
    SnPair { n: usize },
    /// Candidate complements of A_{4k−1} in A_{4k}.
    Alternating { k: usize },
    /// Rerun a shipped worked example.
    Reproduce {
        #[arg(value_enum)]
        example: Example,
    },
}

#[derive(Args)]
struct FactorizationArg {
    /// Factorization file: a group with generators of A and H.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PairArgs {
    /// Matched pair file.
    #[arg(long)]
    pair: Option<PathBuf>,
    /// Factorization file; its canonical pair is used.
    #[arg(long)]
    factorization: Option<PathBuf>,
}

#[derive(Args)]
struct MapArg {
    /// Deformation map file; a relative pair path is resolved against its directory.
    #[arg(long)]
    map: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Example {
    Primexem,
    Doiexemp,
    Treiexemp,
    Neunic,
    S4Index,
}

struct Report {
    json: Value,
    text: String,
    code: u8,
}

impl Report {
    fn new<T: Serialize>(value: &T, text: String, ok: bool) -> Result<Self, Error> {
        Ok(Report { json: serde_json::to_value(value)?, text, code: if ok { 0 } else { EXIT_INVALID } })
    }

    /// Text form listing the top-level fields.
    fn plain<T: Serialize>(value: &T, ok: bool) -> Result<Self, Error> {
        let json = serde_json::to_value(value)?;
        let text = summary(&json);
        Ok(Report { json, text, code: if ok { 0 } else { EXIT_INVALID } })
    }
}

fn summary(v: &Value) -> String {
    match v {
        Value::Object(map) => map.iter().map(|(k, v)| format!("{k}: {}\n", compact(v))).collect(),
        other => format!("{}\n", compact(other)),
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

struct Context {
    limits: Limits,
    census_limits: Limits,
    budget: u64,
    census_cap: usize,
    sn_cap: usize,
    alternating_cap: usize,
}

impl Context {
    fn budget(&self) -> Budget {
        Budget::new(self.budget)
    }
}

fn load_factorization(path: &Path, limits: &Limits) -> Result<Option<Factorization>, Error> {
    let file: FactorizationFile = read_json(path)?;
    let resolved = file.resolve(limits)?;
    let h = resolved.h.ok_or_else(|| Error::Input("factorization file has no H".into()))?;
    check_factorization(&resolved.a, &h, limits)
}

fn require_factorization(path: &Path, limits: &Limits) -> Result<Factorization, Error> {
    load_factorization(path, limits)?.ok_or_else(|| Error::NotAFactorization(path.display().to_string()))
}

fn load_pair(args: &PairArgs, limits: &Limits) -> Result<MatchedPair, Error> {
    match (&args.pair, &args.factorization) {
        (Some(p), _) => read_json::<MatchedPairFile>(p)?.build(limits),
        (None, Some(f)) => Ok(canonical_matched_pair(&require_factorization(f, limits)?)),
        (None, None) => Err(Error::Input("give --pair or --factorization".into())),
    }
}

fn load_map(path: &Path, limits: &Limits) -> Result<(MatchedPair, Vec<usize>), Error> {
    let file: DeformationMapFile = read_json(path)?;
    let pair = match &file.pair {
        PairSource::Path(rel) => {
            let base = path.parent().unwrap_or(Path::new("."));
            read_json::<MatchedPairFile>(&base.join(rel))?
        }
        PairSource::Inline(inline) => (**inline).clone(),
    };
    Ok((pair.build(limits)?, file.r))
}

fn candidate_json(c: &CandidateCheck, k: usize) -> Value {
    json!({
        "generators": c.generators,
        "order": c.order,
        "all_even": c.all_even,
        "abelian": c.abelian,
        "semiregular_at_last_point": c.semiregular_at_last_point,
        "complements": c.complements(k),
    })
}

fn alternating_json(r: &AlternatingReport) -> Value {
    json!({
        "k": r.k,
        "degree": r.degree,
        "degenerate": r.degenerate(),
        "sigma": r.sigma.to_string(),
        "tau": r.tau.to_string(),
        "sigma_prime": r.sigma_prime.to_string(),
        "tau_prime": r.tau_prime.to_string(),
        "rho": r.rho.to_string(),
        "sigma_tau": candidate_json(&r.dihedral, r.k),
        "sigma_tau_dihedral_relations": r.dihedral_relations,
        "sigma_prime_tau_prime": candidate_json(&r.abelian, r.k),
        "primes_commute": r.primes_commute,
        "cardinality_ok": r.cardinality_ok,
        "sigma_tau_isomorphic_to_primes": r.complements_isomorphic,
        "sigma_rho": candidate_json(&r.reflected, r.k),
        "sigma_rho_dihedral_relations": r.reflected_relations,
        "sigma_rho_isomorphic_to_primes": r.reflected_isomorphic_to_abelian,
        "tau_certifies": r.tau_certifies(),
        "rho_certifies": r.rho_certifies(),
    })
}

fn example(text: &str) -> Result<ExampleFile, Error> {
    Ok(serde_json::from_str(text)?)
}

fn reproduce(which: Example, cx: &Context) -> Result<Report, Error> {
    let limits = &cx.limits;
    match which {
        Example::Primexem => {
            let ex = example(PRIMEXEM)?;
            let r = s4_over_s3(&ex, limits, &cx.budget())?;
            let pair = ex.pair.as_ref().expect("shipped pair").build(limits)?;
            let text = format!("{}{}", render_action_tables(&pair), summary(&serde_json::to_value(&r)?));
            Report::new(&r, text, r.passes())
        }
        Example::S4Index => {
            let r = s4_index(&example(PRIMEXEM)?, limits, &cx.budget())?;
            Report::plain(&r, r.agrees())
        }
        Example::Doiexemp | Example::Treiexemp => {
            let (_, r) = c3_c6(&example(C3C6)?, limits, &cx.budget())?;
            let first = which == Example::Doiexemp;
            let value = if first {
                json!({
                    "pair_valid": r.pair_valid,
                    "r_valid": r.r_valid,
                    "deformed_order": r.r_deformed_order,
                    "deformed_abelian": r.r_deformed_abelian,
                    "phi_is_isomorphism": r.phi_is_isomorphism,
                    "phi_images": r.phi_images,
                })
            } else {
                json!({
                    "pair_valid": r.pair_valid,
                    "big_r_valid": r.big_r_valid,
                    "deformed_cyclic": r.big_r_deformed_cyclic,
                    "witness_to_trivial": r.big_r_trivial_witness,
                    "r_and_big_r_equivalent": r.r_big_r_equivalent,
                    "maps_found": r.maps_found,
                    "index": r.index,
                })
            };
            Report::plain(&value, if first { r.first_passes() } else { r.second_passes() })
        }
        Example::Neunic => {
            let mut reports = Vec::new();
            for k in 2..=cx.alternating_cap.min(3) {
                reports.push(alternating_double_factorization(k, cx.alternating_cap)?);
            }
            if reports.is_empty() {
                return Err(Error::OrderCapExceeded { cap: cx.alternating_cap });
            }
            let ok = reports.iter().all(AlternatingReport::rho_certifies);
            let tau = reports.iter().all(AlternatingReport::tau_certifies);
            let value = json!({
                "certified": ok,
                "tau_certifies": tau,
                "note": if tau { "" } else { "τ commutes with σ, so ⟨σ, τ⟩ is abelian; ρ is used as the reflection instead" },
                "cases": reports.iter().map(alternating_json).collect::<Vec<_>>(),
            });
            Report::plain(&value, ok)
        }
    }
}

fn run(cli: &Cli, cx: &Context) -> Result<Report, Error> {
    let limits = &cx.limits;
    match &cli.command {
        Command::Factorize(arg) => {
            let f = load_factorization(&arg.input, limits)?;
            let value = match &f {
                Some(f) => json!({"exact": true, "g_order": f.g().order(), "a_order": f.a().order(), "h_order": f.h().order()}),
                None => json!({"exact": false}),
            };
            Report::plain(&value, f.is_some())
        }
        Command::MatchedPair(arg) => {
            let mp = canonical_matched_pair(&require_factorization(&arg.input, limits)?);
            Report::new(&MatchedPairFile::from_pair(&mp), render_action_tables(&mp), true)
        }
        Command::ValidatePair(args) => {
            let mp = load_pair(args, limits)?;
            let report = ValidationReport::from(&validate_matched_pair(&mp));
            let ok = report.valid;
            Report::plain(&report, ok)
        }
        Command::ValidateDeformation(arg) => {
            let (mp, r) = load_map(&arg.map, limits)?;
            let report = validate_deformation_map(&mp, &r)?;
            let value = json!({
                "r": r,
                "valid": report.is_valid(),
                "violations": report.violations.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>(),
            });
            Report::plain(&value, report.is_valid())
        }
        Command::Deform(arg) => {
            let (mp, r) = load_map(&arg.map, limits)?;
            let r = DeformationMap::new(&mp, r)?;
            let d = deform_group(&mp, &r)?;
            psi_isomorphism(&mp, &r, limits)?;
            let report = DeformedReport::of(&d);
            let value = json!({"deformed": report, "psi_verified": true});
            Report::new(&value, render_cayley(&d.group), true)
        }
        Command::Enumerate(args) => {
            let mp = load_pair(args, limits)?;
            let budget = cx.budget();
            let maps = enumerate_deformation_maps(&mp, &budget).into_complete(&budget)?;
            let values: Vec<&[usize]> = maps.iter().map(DeformationMap::values).collect();
            Report::plain(&json!({"count": maps.len(), "maps": values}), true)
        }
        Command::Classify(args) => {
            let mp = load_pair(args, limits)?;
            let c = classify(&mp, &cx.budget())?;
            let report = ClassificationReport::of(&c);
            let mut text = format!("index: {}\nmaps: {}\n", report.index, report.raw_count);
            for (i, class) in c.classes.iter().enumerate() {
                text.push_str(&format!("class {i}: r = {:?}, {} members\n", c.all_maps[class.representative].values(), class.members.len()));
                text.push_str(&render_cayley(&class.deformed.group));
            }
            Report::new(&report, text, true)
        }
        Command::Complements(arg) | Command::Index(arg) => {
            let file: FactorizationFile = read_json(&arg.input)?;
            let resolved = file.resolve(limits)?;
            let set = find_complements(&resolved.a, limits, &cx.budget())?;
            if matches!(cli.command, Command::Index(_)) {
                Report::plain(&json!({"index": set.index(), "complements": set.complements.len()}), true)
            } else {
                Report::plain(&ComplementReport::of(&set, limits), true)
            }
        }
        Command::Census { n } => {
            if *n > cx.census_cap {
                return Err(Error::OrderCapExceeded { cap: cx.census_cap });
            }
            let c = census(*n, &cx.census_limits, &cx.budget())?;
            let mut text = format!("n: {}\ncount: {}\n", c.n, c.count);
            for (g, r) in c.representatives.iter().zip(&c.provenance) {
                text.push_str(&format!("r = {:?}\n{}", r.values(), render_cayley(g)));
            }
            Report::new(&CensusReport::of(&c), text, true)
        }
        Command::OracleCensus { n } => {
            if *n > cx.census_cap {
                return Err(Error::OrderCapExceeded { cap: cx.census_cap });
            }
            let o = latin_square_census_oracle(*n, &cx.budget())?;
            Report::plain(&OracleReport::of(&o), true)
        }
        Command::SnPair { n } => {
            let mp = sn_matched_pair(*n, cx.sn_cap, &cx.census_limits)?;
            let sf = sn_factorization(*n, &cx.census_limits)?;
            Report::new(&MatchedPairFile::from_pair(&mp), render_by_powers(&mp, &sf), true)
        }
        Command::Alternating { k } => {
            let r = alternating_double_factorization(*k, cx.alternating_cap)?;
            Report::plain(&alternating_json(&r), true)
        }
        Command::Reproduce { example } => reproduce(*example, cx),
    }
}

/// Action tables with rows `1, x, x^2, …` and cells of `◁` written as powers of `x`.
fn render_by_powers(mp: &MatchedPair, sf: &SymmetricFactorization) -> String {
    let (a, nh) = (mp.a(), mp.h().order());
    let rows: Vec<usize> = (0..nh).map(|k| sf.x_power_index(k)).collect();
    let mut power = vec![0; nh];
    for (k, &y) in rows.iter().enumerate() {
        power[y] = k;
    }
    let name = |k: usize| match k {
        0 => "1".to_string(),
        1 => "x".to_string(),
        k => format!("x^{k}"),
    };
    let mut out = String::new();
    for (title, right) in [("▷", false), ("◁", true)] {
        let mut grid = vec![std::iter::once(title.to_string()).chain(a.labels().iter().cloned()).collect::<Vec<_>>()];
        for (k, &y) in rows.iter().enumerate() {
            let cells = (0..a.order()).map(|x| if right { name(power[mp.right(y, x)]) } else { a.label(mp.left(y, x)).to_string() });
            grid.push(std::iter::once(name(k)).chain(cells).collect());
        }
        out.push_str(&render_grid(&grid));
        out.push('\n');
    }
    out
}

fn exit_code(e: &Error) -> u8 {
    if e.is_resource_limit() {
        EXIT_LIMIT
    } else if e.is_malformed_input() || matches!(e, Error::Json(_) | Error::Io(_)) {
        EXIT_MALFORMED
    } else {
        EXIT_INVALID
    }
}

#[cfg(feature = "parallel")]
fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, String> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| e.to_string())?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn with_workers<T: Send>(_workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, String> {
    Ok(f())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let limits = Limits { max_order: cli.max_order, table_cap: cli.table_cap.unwrap_or(Limits::default().table_cap), ..Limits::default() };
    let census = census_limits();
    let cx = Context {
        limits,
        census_limits: Limits { max_order: cli.max_order, table_cap: cli.table_cap.unwrap_or(census.table_cap), ..census },
        budget: cli.budget,
        census_cap: cli.census_cap,
        sn_cap: cli.sn_cap,
        alternating_cap: cli.alternating_cap,
    };
    let result = match with_workers(cli.workers, || run(&cli, &cx)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_LIMIT);
        }
    };
    let report = match result {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report.json).expect("serializable") + "\n",
        Format::Text => report.text,
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_MALFORMED);
    }
    ExitCode::from(report.code)
}
