//! Command-line dispatch.
//!
//! Exit code `0` means every check passed and `1` that some check failed;
//! input or usage errors exit with `2`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use corrkit_core::corr::detect_bimodule;
use corrkit_core::fock::{build_fock_with_cap, fock_dims};
use corrkit_core::graph::{check_ck_family, ck_relations, render_relations, Graph};
use corrkit_core::hmod::theta;
use corrkit_core::linalg::{self, DEFAULT_TOL};
use corrkit_core::random::Sampler;
use corrkit_core::rep::{check_relative_covariance, rep_injectivity, verify_representation, PsiMap};
use corrkit_core::{Correspondence, Error, Ideal, Representation};
use serde::Serialize;

use crate::report::{list, sci, AnalysisReport, DefectTable, TextReport};
use crate::schema::{CorrespondenceFile, FamilyFile, GraphFile, InputError, RepresentationFile};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "corrkit",
    version,
    about = "Analyze C*-correspondences over finite-dimensional C*-algebras"
)]
pub struct Cli {
    /// Tolerance for numerical verdicts, scaled by operand norms above 1.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for randomized cross-checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ideal structure of a correspondence.
    Analyze { corr: PathBuf },
    /// Inspect a directed graph.
    Graph {
        graph: PathBuf,
        /// Print the Cuntz-Krieger relations.
        #[arg(long)]
        relations: bool,
        /// Report the graph ideals as vertex sets.
        #[arg(long)]
        ideals: bool,
        /// Report the vertex classification.
        #[arg(long)]
        classify: bool,
        /// Write the graph correspondence to a file.
        #[arg(long, value_name = "OUT")]
        to_corr: Option<PathBuf>,
    },
    /// Truncated Fock representation and its defect profile.
    Fock {
        corr: PathBuf,
        #[arg(long)]
        depth: usize,
        /// Write the representation matrices to a file.
        #[arg(long, value_name = "OUT")]
        dump_rep: Option<PathBuf>,
        /// Largest admissible total dimension.
        #[arg(long, default_value_t = 4096)]
        max_dim: usize,
    },
    /// Check a representation against the axioms and relative covariance.
    CheckRep {
        corr: PathBuf,
        rep: PathBuf,
        /// `jx`, `none`, or comma-separated block indices.
        #[arg(long, default_value = "jx")]
        ideal: String,
    },
    /// Check a candidate Cuntz-Krieger family.
    CheckCk { graph: PathBuf, family: PathBuf },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Errors from the core after inputs were accepted.
fn core_failure(context: &str, e: Error) -> Failure {
    match e {
        Error::Numerical(_) | Error::Inconsistent(_) | Error::IllDefinedPsi { .. } => {
            Failure::Internal(format!("{context}: {e}"))
        }
        _ => Failure::Input(format!("{context}: {e}")),
    }
}

struct Output {
    text: String,
    passed: bool,
}

fn emit<R: Serialize + TextReport>(format: Format, report: AnalysisReport<R>) -> Output {
    let passed = report.passed;
    let text = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    Output { text, passed }
}

/// Parse `args` and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        let _ = writeln!(err, "error: --tol must be a positive finite number, got {}", cli.tol);
        return EXIT_INPUT;
    }
    match dispatch(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            if o.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAIL
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Analyze { corr } => analyze(cli, corr),
        Command::Graph {
            graph,
            relations,
            ideals,
            classify,
            to_corr,
        } => graph_cmd(cli, graph, *relations, *ideals, *classify, to_corr.as_deref()),
        Command::Fock {
            corr,
            depth,
            dump_rep,
            max_dim,
        } => fock(cli, corr, *depth, dump_rep.as_deref(), *max_dim),
        Command::CheckRep { corr, rep, ideal } => check_rep(cli, corr, rep, ideal),
        Command::CheckCk { graph, family } => check_ck(cli, graph, family),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("files serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: cannot write file: {e}", path.display())))
}

#[derive(Serialize)]
struct Flags {
    faithful: bool,
    nondegenerate: bool,
    full: bool,
}

impl From<corrkit_core::CorrespondenceFlags> for Flags {
    fn from(f: corrkit_core::CorrespondenceFlags) -> Self {
        Self {
            faithful: f.faithful,
            nondegenerate: f.nondegenerate,
            full: f.full,
        }
    }
}

impl Flags {
    fn write_text(&self, out: &mut String) {
        let _ = writeln!(
            out,
            "flags: faithful={} nondegenerate={} full={}",
            self.faithful, self.nondegenerate, self.full
        );
    }
}

// analyze

#[derive(Serialize)]
struct AnalyzeResults {
    blocks: Vec<usize>,
    fibers: Vec<usize>,
    multiplicity: Vec<Vec<usize>>,
    ker_phi: Vec<usize>,
    compact_preimage: Vec<usize>,
    jx: Vec<usize>,
    inner_product_ideal: Vec<usize>,
    flags: Flags,
    bimodule: Bimodule,
}

#[derive(Serialize)]
struct Bimodule {
    detected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    left_inner_ideal: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample: Option<LeftInnerSample>,
}

/// `‖φ_X(_X⟨ξ, η⟩) − θ_{ξ,η}‖` for random `ξ, η`.
#[derive(Serialize)]
struct LeftInnerSample {
    seed: u64,
    left_inner_norm: f64,
    residual: f64,
    passed: bool,
}

impl TextReport for AnalyzeResults {
    fn write_text(&self, out: &mut String) {
        let _ = writeln!(out, "blocks: {:?}", self.blocks);
        let _ = writeln!(out, "fibers: {:?}", self.fibers);
        let _ = writeln!(out, "multiplicity: {:?}", self.multiplicity);
        let _ = writeln!(out, "ker phi: {}", list(&self.ker_phi));
        let _ = writeln!(out, "compact preimage: {}", list(&self.compact_preimage));
        let _ = writeln!(out, "J_X: {}", list(&self.jx));
        let _ = writeln!(out, "span of inner products: {}", list(&self.inner_product_ideal));
        self.flags.write_text(out);
        match (&self.bimodule.left_inner_ideal, &self.bimodule.sample) {
            (Some(ideal), Some(s)) => {
                let _ = writeln!(out, "bimodule: yes, left inner products span {}", list(ideal));
                let _ = writeln!(
                    out,
                    "left inner product sample (seed {}): |<xi,eta>| = {}, residual {} {}",
                    s.seed,
                    sci(s.left_inner_norm),
                    sci(s.residual),
                    if s.passed { "ok" } else { "FAIL" }
                );
            }
            _ => {
                let _ = writeln!(out, "bimodule: no");
            }
        }
    }
}

fn analyze(cli: &Cli, path: &Path) -> Result<Output, Failure> {
    let (x, bytes) = CorrespondenceFile::load(path)?;
    let ctx = path.display().to_string();
    let fail = |e| core_failure(&ctx, e);
    let (_, inner_ideal) = x.module().is_full();
    let mut passed = true;
    let bimodule = match detect_bimodule(&x).map_err(fail)? {
        None => Bimodule {
            detected: false,
            left_inner_ideal: None,
            sample: None,
        },
        Some(lip) => {
            let lip = lip.with_tolerance(f64::INFINITY);
            let mut sampler = Sampler::seeded(cli.seed);
            let xi = sampler.module_element(x.module());
            let eta = sampler.module_element(x.module());
            let a = lip.left_inner(&xi, &eta).map_err(fail)?;
            let rank_one = theta(&xi, &eta).map_err(fail)?;
            let residual = x.left_act(&a).map_err(fail)?.sub(&rank_one).map_err(fail)?.norm();
            let ok = residual <= cli.tol * linalg::tol_scale([xi.norm() * eta.norm()]);
            let ideal = lip.ideal();
            passed &= ok && ideal == x.jx();
            Bimodule {
                detected: true,
                left_inner_ideal: Some(ideal.to_vec()),
                sample: Some(LeftInnerSample {
                    seed: cli.seed,
                    left_inner_norm: a.norm(),
                    residual,
                    passed: ok,
                }),
            }
        }
    };
    let results = AnalyzeResults {
        blocks: x.algebra().blocks().to_vec(),
        fibers: x.module().fibers().to_vec(),
        multiplicity: x.multiplicity().to_vec(),
        ker_phi: x.ker_phi().to_vec(),
        compact_preimage: x.compact_preimage().to_vec(),
        jx: x.jx().to_vec(),
        inner_product_ideal: inner_ideal.to_vec(),
        flags: x.flags().into(),
        bimodule,
    };
    Ok(emit(
        cli.format,
        AnalysisReport::new("analyze", &[&bytes], cli.tol, passed, results),
    ))
}

// graph

#[derive(Serialize)]
struct GraphResults {
    vertices: usize,
    edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    classification: Option<Classification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ideals: Option<GraphIdealNames>,
    #[serde(skip_serializing_if = "Option::is_none")]
    correspondence: Option<GraphCorr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relations: Option<Vec<String>>,
    #[serde(skip)]
    relations_only: bool,
}

#[derive(Serialize)]
struct Classification {
    sinks: Vec<String>,
    sources: Vec<String>,
    regular: Vec<String>,
    infinite_emitters: Vec<String>,
}

#[derive(Serialize)]
struct GraphIdealNames {
    jx: Vec<String>,
    ker_phi: Vec<String>,
    compact_preimage: Vec<String>,
    /// Present when the graph has a finite correspondence.
    #[serde(skip_serializing_if = "Option::is_none")]
    flags: Option<Flags>,
}

#[derive(Serialize)]
struct GraphCorr {
    written: String,
    fibers: Vec<usize>,
    multiplicity: Vec<Vec<usize>>,
    /// Edge names spanning each fiber, in row order.
    fiber_edges: Vec<Vec<String>>,
}

impl TextReport for GraphResults {
    fn write_text(&self, out: &mut String) {
        if !self.relations_only {
            let _ = writeln!(out, "vertices: {}, edges: {}", self.vertices, self.edges);
        }
        if let Some(c) = &self.classification {
            let _ = writeln!(out, "sinks: {}", list(&c.sinks));
            let _ = writeln!(out, "sources: {}", list(&c.sources));
            let _ = writeln!(out, "regular: {}", list(&c.regular));
            let _ = writeln!(out, "infinite emitters: {}", list(&c.infinite_emitters));
        }
        if let Some(i) = &self.ideals {
            let _ = writeln!(out, "J_X: {}", list(&i.jx));
            let _ = writeln!(out, "ker phi: {}", list(&i.ker_phi));
            let _ = writeln!(out, "compact preimage: {}", list(&i.compact_preimage));
            if let Some(f) = &i.flags {
                f.write_text(out);
            }
        }
        if let Some(c) = &self.correspondence {
            let _ = writeln!(out, "correspondence written to {}", c.written);
            let _ = writeln!(out, "fibers: {:?}", c.fibers);
            let _ = writeln!(out, "multiplicity: {:?}", c.multiplicity);
        }
        if let Some(r) = &self.relations {
            for line in r {
                out.push_str(line);
                out.push('\n');
            }
        }
    }

    fn bare(&self) -> bool {
        self.relations_only
    }
}

fn graph_cmd(
    cli: &Cli,
    path: &Path,
    relations: bool,
    ideals: bool,
    classify: bool,
    to_corr: Option<&Path>,
) -> Result<Output, Failure> {
    let (g, bytes) = GraphFile::load(path)?;
    let (classify, ideals) = if !(relations || ideals || classify || to_corr.is_some()) {
        (true, true)
    } else {
        (classify, ideals)
    };
    let names = |set: &std::collections::BTreeSet<usize>| g.names(set);
    let mut results = GraphResults {
        vertices: g.vertices().len(),
        edges: g.edges().len(),
        classification: None,
        ideals: None,
        correspondence: None,
        relations: None,
        relations_only: relations && !ideals && !classify && to_corr.is_none(),
    };
    if classify {
        let c = g.classify();
        results.classification = Some(Classification {
            sinks: names(&c.sinks),
            sources: names(&c.sources),
            regular: names(&c.regular),
            infinite_emitters: names(&c.infinite),
        });
    }
    if ideals {
        let i = g.ideals();
        let flags = g.correspondence().ok().map(|gc| gc.correspondence.flags().into());
        results.ideals = Some(GraphIdealNames {
            jx: names(&i.jx),
            ker_phi: names(&i.ker_phi),
            compact_preimage: names(&i.compact_preimage),
            flags,
        });
    }
    if let Some(out) = to_corr {
        let gc = g
            .correspondence()
            .map_err(|e| core_failure(&path.display().to_string(), e))?;
        write_json(out, &CorrespondenceFile::from_correspondence(&gc.correspondence))?;
        results.correspondence = Some(GraphCorr {
            written: out.display().to_string(),
            fibers: gc.correspondence.module().fibers().to_vec(),
            multiplicity: gc.correspondence.multiplicity().to_vec(),
            fiber_edges: gc
                .fiber_edges
                .iter()
                .map(|row| row.iter().map(|&e| g.edges()[e].name.clone()).collect())
                .collect(),
        });
    }
    if relations {
        let text = render_relations(&ck_relations(&g));
        results.relations = Some(text.lines().map(str::to_string).collect());
    }
    Ok(emit(
        cli.format,
        AnalysisReport::new("graph", &[&bytes], cli.tol, true, results),
    ))
}

/// The relation text for a graph, exactly as `graph --relations` prints it.
pub fn relations_text(g: &Graph) -> String {
    render_relations(&ck_relations(g))
}

// fock

#[derive(Serialize)]
struct FockResults {
    depth: usize,
    dims: Vec<usize>,
    total_dim: usize,
    levels: Vec<LevelRow>,
    profile: Vec<ProfileRow>,
    contract: Contract,
    /// The table `check-rep --ideal jx` reports for the dumped matrices.
    rep_checks: DefectTable,
    #[serde(skip_serializing_if = "Option::is_none")]
    dump: Option<String>,
}

#[derive(Serialize)]
struct LevelRow {
    level: usize,
    /// Not judged at the top level, where creation is truncated.
    axiom_i: Option<f64>,
    axiom_ii: f64,
}

#[derive(Serialize)]
struct ProfileRow {
    generator: String,
    vacuum_norm: f64,
    levels: Vec<f64>,
}

#[derive(Serialize)]
struct Contract {
    axioms_below_cut: bool,
    vacuum_localized: bool,
}

impl TextReport for FockResults {
    fn write_text(&self, out: &mut String) {
        let _ = writeln!(out, "depth: {}", self.depth);
        let _ = writeln!(out, "level dimensions: {:?} (total {})", self.dims, self.total_dim);
        let _ = writeln!(out, "axiom defects by level:");
        for row in &self.levels {
            let i = row.axiom_i.map_or_else(|| "cut".to_string(), sci);
            let _ = writeln!(out, "  level {}: (i) {}  (ii) {}", row.level, i, sci(row.axiom_ii));
        }
        if self.profile.is_empty() {
            let _ = writeln!(out, "covariance profile: J_X = 0, no generators");
        } else {
            let _ = writeln!(out, "covariance profile (generator, vacuum norm, defect per level):");
            for row in &self.profile {
                let levels: Vec<String> = row.levels.iter().map(|&v| sci(v)).collect();
                let _ = writeln!(
                    out,
                    "  {}  {}  [{}]",
                    row.generator,
                    sci(row.vacuum_norm),
                    levels.join(", ")
                );
            }
        }
        let _ = writeln!(
            out,
            "contract: axioms below cut {}, defect localized at vacuum {}",
            self.contract.axioms_below_cut, self.contract.vacuum_localized
        );
        let _ = writeln!(out, "representation checks (as check-rep --ideal jx):");
        self.rep_checks.write_text(out);
        if let Some(d) = &self.dump {
            let _ = writeln!(out, "representation written to {d}");
        }
    }
}

fn fock(cli: &Cli, path: &Path, depth: usize, dump: Option<&Path>, max_dim: usize) -> Result<Output, Failure> {
    let (x, bytes) = CorrespondenceFile::load(path)?;
    let ctx = path.display().to_string();
    let fail = |e| core_failure(&ctx, e);
    let dims = fock_dims(&x, depth, max_dim).map_err(fail)?;
    let total: usize = dims.iter().sum();
    if total > max_dim {
        return Err(Failure::Input(format!(
            "{ctx}: Fock space of depth {depth} has total dimension {total}, above --max-dim {max_dim}"
        )));
    }
    let f = build_fock_with_cap(&x, depth, max_dim).map_err(fail)?;
    let contract = f.check_contract(cli.tol).map_err(fail)?;
    let levels = f
        .axiom_defects_by_level()
        .map_err(fail)?
        .into_iter()
        .map(|d| LevelRow {
            level: d.level,
            axiom_i: (d.level < depth).then_some(d.axiom_i),
            axiom_ii: d.axiom_ii,
        })
        .collect();
    let profile = f
        .defect_profile()
        .map_err(fail)?
        .into_iter()
        .map(|r| ProfileRow {
            generator: r.generator.to_string(),
            vacuum_norm: r.vacuum_norm,
            levels: r.levels,
        })
        .collect();
    let rep_checks = rep_table(f.representation(), Some(&x.jx()), cli.tol, &ctx)?;
    if let Some(out) = dump {
        write_json(out, &RepresentationFile::from_representation(f.representation()))?;
    }
    let results = FockResults {
        depth,
        total_dim: f.space().total_dim(),
        dims: f.dims().to_vec(),
        levels,
        profile,
        contract: Contract {
            axioms_below_cut: contract.axioms_below_cut,
            vacuum_localized: contract.vacuum_localized,
        },
        rep_checks,
        dump: dump.map(|p| p.display().to_string()),
    };
    let passed = contract.holds();
    Ok(emit(
        cli.format,
        AnalysisReport::new("fock", &[&bytes], cli.tol, passed, results),
    ))
}

/// Axiom checks plus covariance relative to `ideal`, with the support of
/// each failing generator's defect.
fn rep_table(r: &Representation, ideal: Option<&Ideal>, tol: f64, ctx: &str) -> Result<DefectTable, Failure> {
    let fail = |e| core_failure(ctx, e);
    let mut report = verify_representation(r, tol).map_err(fail)?;
    if let Some(j0) = ideal {
        report.absorb("", check_relative_covariance(r, j0, tol).map_err(fail)?);
    }
    let mut table = DefectTable::from(&report);
    if let Some(j0) = ideal {
        let x = r.correspondence();
        let map = PsiMap::new(r).map_err(fail)?;
        let units = x.algebra().ideal_basis(j0);
        for (row, u) in table.generators.iter_mut().zip(units) {
            if row.passed {
                continue;
            }
            let a = x.algebra().unit(u).map_err(fail)?;
            let diff = r.pi(&a).map_err(fail)? - map.apply(&x.left_act(&a).map_err(fail)?).map_err(fail)?;
            let limit = tol * linalg::tol_scale([linalg::spectral_norm(&diff)]);
            let support = (0..diff.ncols())
                .filter(|&c| diff.column(c).norm() > limit || diff.row(c).norm() > limit)
                .collect();
            row.support = Some(support);
        }
    }
    Ok(table)
}

// check-rep

#[derive(Serialize)]
struct CheckRepResults {
    dim: usize,
    ideal: Option<Vec<usize>>,
    table: DefectTable,
    injective: bool,
    isometric_defect: f64,
    block_norms: Vec<f64>,
}

impl TextReport for CheckRepResults {
    fn write_text(&self, out: &mut String) {
        let _ = writeln!(out, "dimension: {}", self.dim);
        match &self.ideal {
            Some(i) => {
                let _ = writeln!(out, "covariance ideal: {}", list(i));
            }
            None => {
                let _ = writeln!(out, "covariance ideal: none");
            }
        }
        self.table.write_text(out);
        let norms: Vec<String> = self.block_norms.iter().map(|&v| sci(v)).collect();
        let _ = writeln!(
            out,
            "injective: {} (block norms [{}]), isometric defect {}",
            self.injective,
            norms.join(", "),
            sci(self.isometric_defect)
        );
    }
}

fn parse_ideal(spec: &str, x: &Correspondence) -> Result<Option<Ideal>, String> {
    match spec.trim() {
        "jx" => Ok(Some(x.jx())),
        "none" => Ok(None),
        "" => Ok(Some(x.algebra().zero_ideal())),
        list => {
            let blocks = list
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .map_err(|_| format!("--ideal: \"{p}\" is not a block index"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            x.algebra().ideal(blocks).map(Some).map_err(|e| format!("--ideal: {e}"))
        }
    }
}

fn check_rep(cli: &Cli, corr: &Path, rep: &Path, ideal: &str) -> Result<Output, Failure> {
    let (x, corr_bytes) = CorrespondenceFile::load(corr)?;
    let (r, rep_bytes) = RepresentationFile::load(rep, &x)?;
    let ideal = parse_ideal(ideal, &x).map_err(Failure::Input)?;
    let ctx = rep.display().to_string();
    let table = rep_table(&r, ideal.as_ref(), cli.tol, &ctx)?;
    let inj = rep_injectivity(&r, cli.tol).map_err(|e| core_failure(&ctx, e))?;
    let passed = table.passed();
    let results = CheckRepResults {
        dim: r.dim(),
        ideal: ideal.map(|i| i.to_vec()),
        table,
        injective: inj.injective,
        isometric_defect: inj.isometric_defect,
        block_norms: inj.block_norms,
    };
    Ok(emit(
        cli.format,
        AnalysisReport::new("check-rep", &[&corr_bytes, &rep_bytes], cli.tol, passed, results),
    ))
}

// check-ck

#[derive(Serialize)]
struct CheckCkResults {
    dim: usize,
    table: DefectTable,
}

impl TextReport for CheckCkResults {
    fn write_text(&self, out: &mut String) {
        let _ = writeln!(out, "dimension: {}", self.dim);
        self.table.write_text(out);
    }
}

fn check_ck(cli: &Cli, graph: &Path, family: &Path) -> Result<Output, Failure> {
    let (g, graph_bytes) = GraphFile::load(graph)?;
    let (fam, family_bytes) = FamilyFile::load(family)?;
    let report = check_ck_family(&g, &fam, cli.tol).map_err(|e| core_failure(&family.display().to_string(), e))?;
    let table = DefectTable::from(&report);
    let passed = table.passed();
    let results = CheckCkResults { dim: fam.dim, table };
    Ok(emit(
        cli.format,
        AnalysisReport::new("check-ck", &[&graph_bytes, &family_bytes], cli.tol, passed, results),
    ))
}
