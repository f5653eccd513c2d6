//! The `wedgelab` command line: exact and sampled checks for Euler
//! elements, wedge couples, covariance certificates, standard
//! subspaces, and the label-level net calculus, all reported as
//! reproducible JSON.
//!
//! Exit codes: 0 = success; 1 = a check failed or a claim was refuted;
//! 2 = malformed input or an unknown name; 3 = unknown setup or net
//! context. Reports are deterministic: identical seeds and flags
//! produce byte-identical JSON. The seed is taken from `--seed`, then
//! from the `WEDGELAB_SEED` environment variable, then defaults to 42.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use wedgelab::euler::{catalog_crosscheck, check_euler, hj_element, is_symmetric};
use wedgelab::exact::rat;
use wedgelab::gl2::{embed_gl2, verify_embedding};
use wedgelab::modcov::{
    bw_control_setup, catalog_setups, negcond_certificate, verify_certificate,
    CertificateReport, NetSetup,
};
use wedgelab::net::{
    check_duality, mink_noncov_chain, verify_identity_text, CosetNet, DualityVerdict,
    MinkChainReport, NetError, RuleSet,
};
use wedgelab::suite::{run_suite, SuiteConfig, SuiteReport};
use wedgelab::wedge::{GradedGroupElement, WedgeCouple};
use wedgelab::{LieAlgebra, LieElement, Rat, RatMatrix};

const OK: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;
const BAD_SETUP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "wedgelab",
    version,
    about = "Exact and sampled checks for Euler elements, wedge couples, standard subspaces, and one-particle nets",
    long_about = "Reproducible JSON reports over the wedgelab library.\n\n\
        Exit codes: 0 success; 1 failed check or refuted claim; 2 malformed \
        input or unknown name; 3 unknown setup or net context.\n\
        Seed precedence: --seed, then WEDGELAB_SEED, then 42."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// RNG seed for all sampled batteries.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Scale factor applied to every tolerance (1.0 = documented defaults).
    #[arg(long, global = true, default_value_t = 1.0)]
    tol_scale: f64,

    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the Euler property and 3-grading of a diagonal element.
    Euler {
        #[command(subcommand)]
        action: EulerAction,
    },
    /// Split an Euler element as h = h_c − h₁ and verify the embedded copy.
    Embed {
        #[command(flatten)]
        element: ElementArgs,
    },
    /// Sampled two-dimensional de Sitter geometry battery.
    Ds2 {
        #[command(subcommand)]
        action: CheckAction,
    },
    /// Wedge couples (x, σ): validation, duality, stabilizer dimension.
    Wedge {
        #[command(subcommand)]
        action: WedgeAction,
    },
    /// Covariance certificates for two-generator net setups.
    Modcov {
        #[command(subcommand)]
        action: ModcovAction,
    },
    /// Standard-subspace batteries: round-trips and tensor flows.
    Stdspace {
        #[command(subcommand)]
        action: CheckAction,
    },
    /// Label-level net calculus: prove identities, check duality.
    Net {
        #[command(subcommand)]
        action: NetAction,
    },
    /// Run the named check suite and print its JSON report.
    ///
    /// The human-readable pass/fail table goes to stderr; the JSON
    /// report goes to stdout (or --output).
    Suite {
        /// Run only checks matching this exact name or prefix.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Subcommand)]
enum EulerAction {
    /// Check one element and report grading dimensions and symmetry.
    Check {
        #[command(flatten)]
        element: ElementArgs,
        /// Exit 1 instead of 0 when the element is not Euler.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Subcommand)]
enum CheckAction {
    /// Run this module's sampled battery with the configured seed.
    Check,
}

#[derive(Subcommand)]
enum WedgeAction {
    /// Build the canonical couple for a catalog element and describe it.
    Info {
        /// Catalog element h_j of sl(n), written "n,j" (e.g. "3,1").
        #[arg(long, value_parser = parse_hj)]
        hj: (usize, usize),
    },
}

#[derive(Subcommand)]
enum ModcovAction {
    /// Produce and re-verify the full covariance certificate of a setup.
    Certify {
        /// Setup selector: sl3, gl2, sl2xi, dual, or the control bw.
        #[arg(long)]
        setup: String,
    },
}

#[derive(Subcommand)]
enum NetAction {
    /// Prove or refute a net identity in a fixed context.
    Verify {
        /// Net context: ds2-twisted (doubled, with twist) or ds2-dual.
        #[arg(long)]
        context: String,
        /// The identity, e.g. "Htilde(W') = Z·Htilde(W)'".
        #[arg(long)]
        identity: String,
    },
    /// Check (twisted) Haag duality across the wedge orbit.
    Duality {
        /// Net context: ds2-twisted or ds2-dual.
        #[arg(long)]
        context: String,
        /// Allow the twist on the complement side.
        #[arg(long)]
        twisted: bool,
    },
}

/// One element, given either as a catalog index or as a diagonal.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct ElementArgs {
    /// Catalog element h_j of sl(n), written "n,j" (e.g. "3,1").
    #[arg(long, value_parser = parse_hj)]
    hj: Option<(usize, usize)>,
    /// Diagonal traceless element: comma-separated rationals, e.g. "-1/3,2/3,-1/3".
    #[arg(long, value_parser = parse_diag, allow_hyphen_values = true)]
    diag: Option<DiagEntries>,
}

#[derive(Clone)]
struct DiagEntries(Vec<Rat>);

fn parse_hj(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"n,j\", got `{s}`"));
    }
    let n = parts[0].trim().parse::<usize>().map_err(|e| format!("bad n: {e}"))?;
    let j = parts[1].trim().parse::<usize>().map_err(|e| format!("bad j: {e}"))?;
    Ok((n, j))
}

fn parse_diag(s: &str) -> Result<DiagEntries, String> {
    let entries: Result<Vec<Rat>, String> = s
        .split(',')
        .map(|part| {
            Rat::from_str(part.trim()).map_err(|e| format!("bad rational `{}`: {e}", part.trim()))
        })
        .collect();
    let entries = entries?;
    if entries.len() < 2 {
        return Err("need at least two diagonal entries".to_string());
    }
    Ok(DiagEntries(entries))
}

fn build_element(args: &ElementArgs) -> Result<LieElement, String> {
    if let Some((n, j)) = args.hj {
        hj_element(n, j).map_err(|e| e.to_string())
    } else if let Some(DiagEntries(entries)) = &args.diag {
        let alg = LieAlgebra::sl(entries.len());
        alg.element_from_matrix(&RatMatrix::diagonal(entries.clone()))
            .map_err(|e| e.to_string())
    } else {
        unreachable!("clap requires exactly one of --hj/--diag")
    }
}

fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].to_string()).collect())
        .collect()
}

fn diagonal_strings(m: &RatMatrix) -> Vec<String> {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)].to_string()).collect()
}

/// Where reports go: a file when `--output` was given, stdout otherwise.
struct Output(Option<PathBuf>);

impl Output {
    fn emit<T: Serialize>(&self, value: &T) -> u8 {
        let json = serde_json::to_string_pretty(value).expect("reports serialize");
        match &self.0 {
            Some(path) => match std::fs::write(path, json + "\n") {
                Ok(()) => OK,
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    FAIL
                }
            },
            None => {
                println!("{json}");
                OK
            }
        }
    }
}

fn usage_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    USAGE
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("WEDGELAB_SEED") {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map_err(|_| format!("WEDGELAB_SEED must be an unsigned integer, got `{raw}`")),
        Err(std::env::VarError::NotPresent) => Ok(42),
        Err(e) => Err(format!("WEDGELAB_SEED unreadable: {e}")),
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct GradingDims {
    pos: usize,
    zero: usize,
    neg: usize,
}

#[derive(Serialize)]
struct EulerReport {
    algebra: String,
    element: Vec<Vec<String>>,
    euler: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    grading_dims: Option<GradingDims>,
    symmetric: Option<bool>,
    catalog_crosscheck: Option<bool>,
}

#[derive(Serialize)]
struct EmbedReport {
    algebra: String,
    h: Vec<Vec<String>>,
    h_center: Vec<Vec<String>>,
    h_inner: Vec<Vec<String>>,
    e: Vec<Vec<String>>,
    f: Vec<Vec<String>>,
    verified: bool,
}

#[derive(Serialize)]
struct WedgeReport {
    algebra: String,
    generator: Vec<String>,
    involution: Vec<String>,
    euler_couple: bool,
    stabilizer_dim: usize,
    dual_generator: Vec<String>,
    bidual_is_self: bool,
}

#[derive(Serialize)]
struct CertifyReport {
    certificate: CertificateReport,
    chain: MinkChainReport,
    reverified: bool,
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_euler(element: &ElementArgs, strict: bool, out: &Output) -> u8 {
    let x = match build_element(element) {
        Ok(x) => x,
        Err(e) => return usage_error(&e),
    };
    let algebra = x.algebra().name().to_string();
    let element_strings = matrix_strings(&x.matrix());
    let report = match check_euler(&x) {
        Ok(e) => {
            let (pos, zero, neg) = e.grading().dims();
            EulerReport {
                algebra,
                element: element_strings,
                euler: true,
                reason: None,
                grading_dims: Some(GradingDims { pos, zero, neg }),
                symmetric: is_symmetric(&e).ok(),
                catalog_crosscheck: catalog_crosscheck(&e),
            }
        }
        Err(err) => EulerReport {
            algebra,
            element: element_strings,
            euler: false,
            reason: Some(err.to_string()),
            grading_dims: None,
            symmetric: None,
            catalog_crosscheck: None,
        },
    };
    let not_euler = !report.euler;
    let code = out.emit(&report);
    if code != OK {
        code
    } else if not_euler && strict {
        FAIL
    } else {
        OK
    }
}

fn cmd_embed(element: &ElementArgs, out: &Output) -> u8 {
    let x = match build_element(element) {
        Ok(x) => x,
        Err(e) => return usage_error(&e),
    };
    let euler = match check_euler(&x) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: not an Euler element: {e}");
            return FAIL;
        }
    };
    let emb = match embed_gl2(&euler) {
        Ok(emb) => emb,
        Err(e) => {
            eprintln!("error: {e}");
            return FAIL;
        }
    };
    let verified = match verify_embedding(&emb) {
        Ok(()) => true,
        Err(e) => {
            eprintln!("error: embedding failed verification: {e}");
            false
        }
    };
    let report = EmbedReport {
        algebra: emb.h.algebra().name().to_string(),
        h: matrix_strings(&emb.h.matrix()),
        h_center: matrix_strings(&emb.h_center.matrix()),
        h_inner: matrix_strings(&emb.h_inner.matrix()),
        e: matrix_strings(&emb.e.matrix()),
        f: matrix_strings(&emb.f.matrix()),
        verified,
    };
    let code = out.emit(&report);
    if code != OK {
        code
    } else if verified {
        OK
    } else {
        FAIL
    }
}

fn cmd_wedge(n: usize, j: usize, out: &Output) -> u8 {
    let x = match hj_element(n, j) {
        Ok(x) => x,
        Err(e) => return usage_error(&e.to_string()),
    };
    let diag: Vec<Rat> = (0..n).map(|i| if i < j { rat(1) } else { rat(-1) }).collect();
    let sigma = match GradedGroupElement::odd(RatMatrix::diagonal(diag)) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: canonical involution rejected: {e}");
            return FAIL;
        }
    };
    let couple = match WedgeCouple::new(x.clone(), sigma) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: couple construction failed: {e}");
            return FAIL;
        }
    };
    let dual = couple.dual();
    let report = WedgeReport {
        algebra: x.algebra().name().to_string(),
        generator: diagonal_strings(&x.matrix()),
        involution: diagonal_strings(couple.involution().matrix()),
        euler_couple: couple.is_euler(),
        stabilizer_dim: couple.stabilizer_algebra().len(),
        dual_generator: diagonal_strings(&dual.generator().matrix()),
        bidual_is_self: dual.dual() == couple,
    };
    out.emit(&report)
}

fn setup_by_name(name: &str) -> Option<NetSetup> {
    if name == "bw" {
        return Some(bw_control_setup());
    }
    catalog_setups().into_iter().find(|s| s.name() == name)
}

fn cmd_certify(setup_name: &str, out: &Output) -> u8 {
    let Some(setup) = setup_by_name(setup_name) else {
        eprintln!(
            "error: unknown setup `{setup_name}`; known setups: sl3, gl2, sl2xi, dual, bw"
        );
        return BAD_SETUP;
    };
    let cert = negcond_certificate(&setup);
    let chain = match mink_noncov_chain(&cert, 1.0) {
        Ok(chain) => chain,
        Err(e) => {
            eprintln!("error: chain construction failed: {e}");
            return FAIL;
        }
    };
    let reverified = verify_certificate(&setup, &cert);
    let report = CertifyReport { certificate: cert.report(&setup), chain, reverified };
    let code = out.emit(&report);
    if code != OK {
        code
    } else if reverified {
        OK
    } else {
        eprintln!("error: certificate failed re-verification");
        FAIL
    }
}

fn net_context(name: &str) -> Option<CosetNet> {
    match name {
        "ds2-twisted" => Some(CosetNet::ds2_twisted()),
        "ds2-dual" => Some(CosetNet::ds2_haag_dual()),
        _ => None,
    }
}

fn net_error_code(e: &NetError) -> u8 {
    match e {
        NetError::Syntax { .. } | NetError::UnknownSymbol { .. } => USAGE,
        NetError::InvalidContext(_) => BAD_SETUP,
        _ => FAIL,
    }
}

fn cmd_net_verify(context: &str, identity: &str, out: &Output) -> u8 {
    let Some(ctx) = net_context(context) else {
        eprintln!("error: unknown context `{context}`; known: ds2-twisted, ds2-dual");
        return BAD_SETUP;
    };
    match verify_identity_text(identity, &RuleSet::standard(), &ctx) {
        Ok(verdict) => {
            let proved = verdict.proved();
            let code = out.emit(&verdict);
            if code != OK {
                code
            } else if proved {
                OK
            } else {
                FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            net_error_code(&e)
        }
    }
}

fn cmd_net_duality(context: &str, twisted: bool, out: &Output) -> u8 {
    let Some(ctx) = net_context(context) else {
        eprintln!("error: unknown context `{context}`; known: ds2-twisted, ds2-dual");
        return BAD_SETUP;
    };
    match check_duality(&ctx, &RuleSet::standard(), twisted) {
        Ok(report) => {
            let wanted =
                if twisted { DualityVerdict::TwistedHaagDual } else { DualityVerdict::HaagDual };
            let holds = report.verdict == wanted;
            let code = out.emit(&report);
            if code != OK {
                code
            } else if holds {
                OK
            } else {
                FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            net_error_code(&e)
        }
    }
}

/// Run a fixed set of suite checks and emit just those results.
fn cmd_module_checks(names: &[&str], cfg: &SuiteConfig, out: &Output) -> u8 {
    let mut checks = Vec::new();
    for name in names {
        match run_suite(cfg, Some(name)) {
            Ok(mut report) => checks.append(&mut report.checks),
            Err(e) => return usage_error(&e.to_string()),
        }
    }
    let report = SuiteReport {
        seed: cfg.seed,
        tol_scale: cfg.tol_scale,
        all_passed: checks.iter().all(|c| c.passed),
        checks,
    };
    let code = out.emit(&report);
    if code != OK {
        code
    } else if report.all_passed {
        OK
    } else {
        FAIL
    }
}

fn print_table(report: &SuiteReport) {
    for check in &report.checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        let lead = check.details.first().map(String::as_str).unwrap_or("");
        eprintln!("{status}  {:<22} {lead}", check.name);
        for failure in &check.failures {
            eprintln!("      - {failure}");
        }
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    eprintln!("{passed}/{} checks passed (seed {})", report.checks.len(), report.seed);
}

fn cmd_suite(only: Option<&str>, cfg: &SuiteConfig, out: &Output) -> u8 {
    match run_suite(cfg, only) {
        Ok(report) => {
            print_table(&report);
            let first_failure = report
                .checks
                .iter()
                .find(|c| !c.passed)
                .map(|c| (c.name.clone(), c.failures.first().cloned().unwrap_or_default()));
            let code = out.emit(&report);
            if code != OK {
                return code;
            }
            match first_failure {
                None => OK,
                Some((name, detail)) => {
                    eprintln!("first failure: {name}: {detail}");
                    FAIL
                }
            }
        }
        Err(e) => usage_error(&e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = match resolve_seed(cli.seed) {
        Ok(seed) => seed,
        Err(e) => return ExitCode::from(usage_error(&e)),
    };
    let cfg = SuiteConfig { seed, tol_scale: cli.tol_scale };
    let out = Output(cli.output.clone());
    let code = match &cli.command {
        Command::Euler { action: EulerAction::Check { element, strict } } => {
            cmd_euler(element, *strict, &out)
        }
        Command::Embed { element } => cmd_embed(element, &out),
        Command::Ds2 { action: CheckAction::Check } => {
            cmd_module_checks(&["ds2-geometry"], &cfg, &out)
        }
        Command::Wedge { action: WedgeAction::Info { hj: (n, j) } } => cmd_wedge(*n, *j, &out),
        Command::Modcov { action: ModcovAction::Certify { setup } } => cmd_certify(setup, &out),
        Command::Stdspace { action: CheckAction::Check } => {
            cmd_module_checks(&["stdspace-roundtrip", "tensor-flow"], &cfg, &out)
        }
        Command::Net { action } => match action {
            NetAction::Verify { context, identity } => cmd_net_verify(context, identity, &out),
            NetAction::Duality { context, twisted } => cmd_net_duality(context, *twisted, &out),
        },
        Command::Suite { only } => cmd_suite(only.as_deref(), &cfg, &out),
    };
    ExitCode::from(code)
}
