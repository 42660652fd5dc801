//! The `ipskit` command line.
//!
//! Exit codes: 0 accepted or success, 1 checked and rejected, 2 input
//! error, 3 resource cap. Every command ends its report with
//! `RESULT accepted=<bool> mode=<m> trials=<t> soundness=<q>`.
//!
//! A command that produces an object (a system, certificate, proof or
//! formula) writes it to `-o` when given and otherwise to stdout; the
//! report then goes to stdout or, when stdout carries the object, to
//! stderr. Certificate outputs are bundles: the system, an optional
//! `target v1` block, then the certificate, so they can be piped straight
//! into `verify`.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{parse_circuit, write_circuit, Circuit, Domain, VarId};
use crate::cnf::{parse_dimacs, parse_system, translate, write_dimacs, write_system, CnfError, CnfFormula, PolySystem};
use crate::field::{FieldElement, Prime};
use crate::frege::{check_frege, compile_frege_to_ips, parse_frege, FregeRefutation};
use crate::grobner;
use crate::ips::{self, pit, Certificate, IpsError, ModeKind, Target, Verdict, VerifyMode};
use crate::pc::{self, PcError};
use crate::poly::{expand_in, parse_poly, parse_poly_in, Caps, MonomialOrder, Poly, PolyError};
use crate::propenc::{self, BitEncoding, BruteForceK, EncodeError, KInstance, Layout, PitAxiom, VarPool};
use crate::vnp::{self, VnpError, VnpMode, VnpOptions};

/// Largest grid `(D+1)^v` the bundled brute-force tester is built for.
const GRID_LIMIT: u64 = 1 << 12;

#[derive(Debug, Parser)]
#[command(
    name = "ipskit",
    version,
    about = "Ideal Proof System certificates: construction, transformation and verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Io {
    /// Output file for the produced object.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    /// Prime modulus overriding the default field.
    #[arg(long)]
    pub modulus: Option<u64>,
    /// Expansion limits, e.g. `terms=100000,degree=40`.
    #[arg(long, value_parser = parse_caps)]
    pub caps: Option<Caps>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; only independent inputs run in parallel.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckMode {
    Exact,
    Randomized,
}

#[derive(Debug, Clone, Args)]
pub struct Check {
    #[arg(long, value_enum, default_value_t = CheckMode::Randomized)]
    pub mode: CheckMode,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args)]
pub struct TargetArgs {
    /// Derivation target as polynomial text, e.g. `2*x1 - x1^2`.
    #[arg(long, conflicts_with = "target_file")]
    pub target: Option<String>,
    /// Derivation target as an algcircuit file.
    #[arg(long)]
    pub target_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    /// The certificate itself.
    Explicit,
    /// The summand over `x` and `e = x_{n+1..2n}`; summing it over
    /// `e in {0,1}^n` gives the certificate, so it is not checkable as is.
    Summand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Grevlex,
    Lex,
    EliminateX,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// DIMACS CNF to a polynomial system.
    Translate {
        input: Option<PathBuf>,
        /// Append `x_i^2 - x_i` for every variable.
        #[arg(long)]
        boolean_axioms: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Hilbert-like certificate for an unsatisfiable CNF.
    ConstructVnp {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Construction::Explicit)]
        mode: Construction,
        /// Cover the Boolean-axiom placeholders too.
        #[arg(long)]
        pad_boolean_axioms: bool,
        /// Clause visiting order (1-based, comma separated).
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Write only the certificate, without the system.
        #[arg(long)]
        cert_only: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Verify certificates against a system.
    Verify {
        /// System, certificate or bundle files; stdin when absent.
        inputs: Vec<PathBuf>,
        #[arg(long)]
        system: Option<PathBuf>,
        /// Translate this CNF to obtain the system.
        #[arg(long, conflicts_with = "system")]
        cnf: Option<PathBuf>,
        #[arg(long, requires = "cnf")]
        boolean_axioms: bool,
        /// Also report whether each certificate is Hilbert-like.
        #[arg(long)]
        structure: bool,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        check: Check,
        #[command(flatten)]
        io: Io,
    },
    /// Test circuits for computing the zero polynomial.
    Pit {
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        check: Check,
        #[command(flatten)]
        io: Io,
    },
    /// Polynomial Calculus proofs.
    Pc {
        #[command(subcommand)]
        cmd: PcCmd,
    },
    /// Tree-like AC0[2]-Frege refutations.
    Frege {
        #[command(subcommand)]
        cmd: FregeCmd,
    },
    /// Rewrite a certificate into Hilbert-like form.
    Hilbertize {
        inputs: Vec<PathBuf>,
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long)]
        cert_only: bool,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        io: Io,
    },
    /// Division-free certificate from a rational one and an inverse certificate.
    RipsToIps {
        #[arg(long)]
        system: PathBuf,
        /// Numerator `C'` (algcircuit).
        #[arg(long)]
        num: PathBuf,
        /// Denominator `D` (algcircuit over x and f).
        #[arg(long)]
        den: PathBuf,
        /// Refutation `E(x, f, d)` of the system plus `D(x, F(x))`, with `d = f_{m+1}`.
        #[arg(long)]
        inverse: PathBuf,
        #[arg(long)]
        cert_only: bool,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        io: Io,
    },
    /// Groebner-basis computations over F_p.
    Grobner {
        #[command(subcommand)]
        cmd: GrobnerCmd,
    },
    /// Propositional encodings.
    Encode {
        #[command(subcommand)]
        cmd: EncodeCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum PcCmd {
    /// Check proofs and report lines, monomials and degree.
    Check {
        inputs: Vec<PathBuf>,
        #[arg(long)]
        system: Option<PathBuf>,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        io: Io,
    },
    /// Compile a proof into a Hilbert-like weakly skew certificate.
    Compile {
        input: Option<PathBuf>,
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long)]
        cert_only: bool,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        io: Io,
    },
    /// Compile a Hilbert-like certificate back into a proof.
    Decompile {
        input: Option<PathBuf>,
        /// System path recorded in the proof header.
        #[arg(long)]
        system: Option<String>,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Debug, Subcommand)]
pub enum FregeCmd {
    Check {
        inputs: Vec<PathBuf>,
        /// CNF overriding the one named in the proof header.
        #[arg(long)]
        cnf: Option<PathBuf>,
        #[command(flatten)]
        io: Io,
    },
    /// Compile a refutation into a certificate over F_2.
    Compile {
        input: Option<PathBuf>,
        #[arg(long)]
        cnf: Option<PathBuf>,
        #[arg(long)]
        cert_only: bool,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Debug, Subcommand)]
pub enum GrobnerCmd {
    /// Reduced Groebner basis of the system.
    Basis {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Order::Grevlex)]
        order: Order,
        #[command(flatten)]
        io: Io,
    },
    /// Ideal membership of a polynomial, with cofactors.
    Member {
        input: Option<PathBuf>,
        #[arg(long)]
        poly: String,
        /// Emit the cofactor certificate as a bundle instead of a listing.
        #[arg(long)]
        cert: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Radical membership, with the least exponent found.
    Radical {
        input: Option<PathBuf>,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 8)]
        max_exponent: u32,
        #[command(flatten)]
        io: Io,
    },
    /// Generators of the syzygy module of the equations.
    Syzygies {
        input: Option<PathBuf>,
        #[command(flatten)]
        io: Io,
    },
    /// Placeholder-only relations and a geometric certificate.
    Geomcert {
        input: Option<PathBuf>,
        /// Emit the refutation `1 - C` as a bundle instead of a listing.
        #[arg(long)]
        cert: bool,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Debug, Subcommand)]
pub enum EncodeCmd {
    /// `Truth_bool` for a fixed CNF, or over free clause bits with `--free n,m`.
    Truthbool {
        input: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        free: Option<Vec<usize>>,
        #[arg(long)]
        simplify: bool,
        /// Tseitin CNF of the formula instead of the S-expression.
        #[arg(long)]
        dimacs: bool,
        #[command(flatten)]
        io: Io,
    },
    /// `Proof_IPS` for a CNF and a certificate, with the brute-force tester.
    Proofips {
        cnf: PathBuf,
        cert: PathBuf,
        /// Grid bound of the tester; defaults to the degree of `C(x, Q)`.
        #[arg(long)]
        degree: Option<u64>,
        /// Tseitin CNF of the negated formula (unsatisfiable iff valid).
        #[arg(long)]
        dimacs: bool,
        #[command(flatten)]
        io: Io,
    },
    /// One PIT axiom over fresh circuit bits, checked exhaustively.
    Axiom {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        number: u8,
        #[arg(long, default_value_t = 2)]
        gates: usize,
        #[arg(long, default_value_t = 2)]
        vars: usize,
        /// Axiom 3: gates of `G`; the rest belong to `C`.
        #[arg(long, default_value_t = 1)]
        g_gates: usize,
        /// Axiom 3: substituted variable (0-based).
        #[arg(long, default_value_t = 0)]
        position: usize,
        /// Axiom 4: the permutation (0-based, comma separated).
        #[arg(long, value_delimiter = ',')]
        perm: Option<Vec<usize>>,
        #[arg(long, default_value_t = 2)]
        degree: u64,
        /// Skip the exhaustive tautology check.
        #[arg(long)]
        no_check: bool,
        #[arg(long)]
        dimacs: bool,
        #[command(flatten)]
        io: Io,
    },
}

fn parse_caps(s: &str) -> Result<Caps, String> {
    let mut caps = Caps::default();
    for part in s.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("expected key=value, got `{part}`"))?;
        let v: u64 = v.trim().parse().map_err(|_| format!("bad number in `{part}`"))?;
        match k.trim() {
            "terms" => caps.max_terms = v as usize,
            "degree" => caps.max_degree = v,
            other => return Err(format!("unknown cap `{other}`")),
        }
    }
    Ok(caps)
}

/// Why a command stopped without a verdict.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Cap(_) => 3,
        }
    }
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::TermBlowup { .. } | PolyError::DegreeBlowup { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<IpsError> for Failure {
    fn from(e: IpsError) -> Self {
        match e {
            IpsError::Poly(p) | IpsError::SplitBlowup(p) => p.into(),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<EncodeError> for Failure {
    fn from(e: EncodeError) -> Self {
        match e {
            EncodeError::TooManyVariables { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<CnfError> for Failure {
    fn from(e: CnfError) -> Self {
        match e {
            CnfError::CubeTooLarge(..) => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<VnpError> for Failure {
    fn from(e: VnpError) -> Self {
        match e {
            VnpError::CubeTooLarge { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// What a command produced.
#[derive(Debug, Default)]
struct Outcome {
    report: Vec<String>,
    object: Option<String>,
    accepted: bool,
    mode: Option<ModeKind>,
    trials: usize,
    soundness: f64,
}

impl Outcome {
    fn new(accepted: bool) -> Self {
        Outcome { accepted, ..Default::default() }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.report.push(s.into());
    }

    fn summary(&self) -> String {
        let mode = match self.mode {
            Some(ModeKind::Randomized) => "randomized",
            _ => "exact",
        };
        let q = if self.soundness == 0.0 { "0".to_string() } else { format!("{:.3e}", self.soundness) };
        format!("RESULT accepted={} mode={mode} trials={} soundness={q}", self.accepted, self.trials)
    }
}

/// Runs the command line; returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let mut stdin_text = None;
    let mut ctx = Ctx { stdin, stdin_text: &mut stdin_text };
    let output = output_path(&cli.command);
    match dispatch(&cli.command, &mut ctx) {
        Ok(out) => {
            let report_to_stderr = out.object.is_some() && output.is_none();
            if let Some(obj) = &out.object {
                match &output {
                    Some(path) => {
                        if let Err(e) = std::fs::write(path, obj) {
                            let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                            return 2;
                        }
                    }
                    None => {
                        let _ = stdout.write_all(obj.as_bytes());
                    }
                }
            }
            let sink: &mut dyn Write = if report_to_stderr { stderr } else { stdout };
            for l in &out.report {
                let _ = writeln!(sink, "{l}");
            }
            let _ = writeln!(sink, "{}", out.summary());
            if out.accepted {
                0
            } else {
                1
            }
        }
        Err(f) => {
            let (kind, msg) = match &f {
                Failure::Input(m) => ("input error", m),
                Failure::Cap(m) => ("resource cap", m),
            };
            let _ = writeln!(stderr, "error ({kind}): {msg}");
            f.code()
        }
    }
}

fn output_path(cmd: &Command) -> Option<PathBuf> {
    let io = match cmd {
        Command::Translate { io, .. }
        | Command::ConstructVnp { io, .. }
        | Command::Verify { io, .. }
        | Command::Pit { io, .. }
        | Command::Hilbertize { io, .. }
        | Command::RipsToIps { io, .. } => io,
        Command::Pc { cmd } => match cmd {
            PcCmd::Check { io, .. } | PcCmd::Compile { io, .. } | PcCmd::Decompile { io, .. } => io,
        },
        Command::Frege { cmd } => match cmd {
            FregeCmd::Check { io, .. } | FregeCmd::Compile { io, .. } => io,
        },
        Command::Grobner { cmd } => match cmd {
            GrobnerCmd::Basis { io, .. }
            | GrobnerCmd::Member { io, .. }
            | GrobnerCmd::Radical { io, .. }
            | GrobnerCmd::Syzygies { io, .. }
            | GrobnerCmd::Geomcert { io, .. } => io,
        },
        Command::Encode { cmd } => match cmd {
            EncodeCmd::Truthbool { io, .. } | EncodeCmd::Proofips { io, .. } | EncodeCmd::Axiom { io, .. } => io,
        },
    };
    io.output.clone()
}

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    stdin_text: &'a mut Option<String>,
}

impl Ctx<'_> {
    /// Reads a file, or stdin for `None` and `-`.
    fn read(&mut self, path: Option<&Path>) -> Result<String, Failure> {
        match path {
            Some(p) if p != Path::new("-") => {
                std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("cannot read {}: {e}", p.display())))
            }
            _ => {
                if self.stdin_text.is_none() {
                    let mut s = String::new();
                    self.stdin.read_to_string(&mut s).map_err(|e| input(format!("cannot read stdin: {e}")))?;
                    *self.stdin_text = Some(s);
                }
                Ok(self.stdin_text.clone().unwrap_or_default())
            }
        }
    }

    fn read_all(&mut self, paths: &[PathBuf]) -> Result<Vec<(Option<PathBuf>, String)>, Failure> {
        if paths.is_empty() {
            return Ok(vec![(None, self.read(None)?)]);
        }
        paths.iter().map(|p| Ok((Some(p.clone()), self.read(Some(p))?))).collect()
    }
}

// ---------------------------------------------------------------------------
// Documents and bundles

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DocKind {
    System,
    Target,
    Circuit,
    Pc,
    Frege,
}

#[derive(Debug, Clone)]
struct Doc {
    kind: DocKind,
    text: String,
}

/// Splits a stream into its documents. `algcircuit v1` starts a new
/// document unless it opens an equation of a system or the body of a
/// `target v1` block.
fn split_documents(text: &str) -> Vec<Doc> {
    let mut docs: Vec<Doc> = Vec::new();
    let mut prev = String::new();
    let mut target_open = false;
    for raw in text.lines() {
        let t = raw.split(';').next().unwrap_or("").trim();
        let start = match t {
            "system v1" => Some(DocKind::System),
            "target v1" => Some(DocKind::Target),
            "pcproof v1" => Some(DocKind::Pc),
            "fregeproof v1" => Some(DocKind::Frege),
            "algcircuit v1" => {
                let in_system = docs.last().is_some_and(|d| d.kind == DocKind::System) && prev.starts_with("eq ");
                if in_system || std::mem::take(&mut target_open) {
                    None
                } else {
                    Some(DocKind::Circuit)
                }
            }
            _ => None,
        };
        if let Some(kind) = start {
            target_open = kind == DocKind::Target;
            docs.push(Doc { kind, text: String::new() });
        }
        if let Some(d) = docs.last_mut() {
            if d.kind != DocKind::Target || !t.starts_with("target") {
                d.text.push_str(raw);
                d.text.push('\n');
            }
        }
        if !t.is_empty() {
            prev = t.to_string();
        }
    }
    docs
}

fn bundle(sys: Option<&PolySystem>, target: &Target, cert: &Circuit) -> String {
    let mut s = String::new();
    if let Some(sys) = sys {
        s.push_str(&write_system(sys));
    }
    if let Target::Poly(g) = target {
        s.push_str("target v1\n");
        s.push_str(&write_circuit(g));
    }
    s.push_str(&write_circuit(cert));
    s
}

fn load_system(ctx: &mut Ctx, path: &Path) -> Result<PolySystem, Failure> {
    let text = ctx.read(Some(path))?;
    let doc = split_documents(&text).into_iter().find(|d| d.kind == DocKind::System);
    let doc = doc.ok_or_else(|| input(format!("{} holds no system", path.display())))?;
    parse_system(&doc.text).map_err(input)
}

fn load_cnf(ctx: &mut Ctx, path: Option<&Path>) -> Result<CnfFormula, Failure> {
    parse_dimacs(&ctx.read(path)?).map_err(Failure::from)
}

fn load_circuit(ctx: &mut Ctx, path: &Path) -> Result<Circuit, Failure> {
    let text = ctx.read(Some(path))?;
    let doc = split_documents(&text).into_iter().rfind(|d| d.kind == DocKind::Circuit);
    let doc = doc.ok_or_else(|| input(format!("{} holds no circuit", path.display())))?;
    parse_circuit(&doc.text).map_err(input)
}

fn parse_target_text(s: &str) -> Result<Circuit, Failure> {
    let p = parse_poly_in::<BigInt>(s, ()).map_err(input)?;
    p.try_to_circuit().map_err(Failure::from)
}

/// Target from flags, else from a `target v1` document, else 1.
fn resolve_target(ctx: &mut Ctx, t: &TargetArgs, docs: &[Doc]) -> Result<Target, Failure> {
    if let Some(s) = &t.target {
        return Ok(Target::Poly(parse_target_text(s)?));
    }
    if let Some(p) = &t.target_file {
        return Ok(Target::Poly(load_circuit(ctx, p)?));
    }
    match docs.iter().find(|d| d.kind == DocKind::Target) {
        Some(d) => Ok(Target::Poly(parse_circuit(&d.text).map_err(input)?)),
        None => Ok(Target::One),
    }
}

fn prime_opt(m: Option<u64>) -> Result<Option<Prime>, Failure> {
    m.map(|p| Prime::new(p).map_err(input)).transpose()
}

/// Path named inside a proof header, resolved next to the proof file first.
fn resolve_relative(named: &str, base: Option<&Path>) -> PathBuf {
    let p = PathBuf::from(named);
    if p.is_relative() {
        if let Some(dir) = base.and_then(Path::parent) {
            let cand = dir.join(&p);
            if cand.exists() {
                return cand;
            }
        }
    }
    p
}

/// Runs `f` on every item with up to `jobs` threads; results keep input order.
fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(usize, &T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().enumerate().map(|(i, t)| f(i, t)).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .enumerate()
            .map(|(c, part)| {
                let f = &f;
                s.spawn(move || part.iter().enumerate().map(|(i, t)| f(c * chunk + i, t)).collect::<Vec<R>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn caps_of(io: &Io) -> Caps {
    io.caps.unwrap_or_default()
}

// ---------------------------------------------------------------------------
// Commands

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<Outcome, Failure> {
    match cmd {
        Command::Translate { input, boolean_axioms, .. } => {
            let cnf = load_cnf(ctx, input.as_deref())?;
            let sys = translate(&cnf, *boolean_axioms);
            let mut out = Outcome::new(true);
            out.line(format!("variables={} equations={}", sys.n_vars, sys.len()));
            out.object = Some(write_system(&sys));
            Ok(out)
        }
        Command::ConstructVnp { input, mode, pad_boolean_axioms, order, cert_only, .. } => {
            let cnf = load_cnf(ctx, input.as_deref())?;
            let opts = VnpOptions { order: order.clone(), pad_boolean_axioms: *pad_boolean_axioms };
            let vmode = match mode {
                Construction::Explicit => VnpMode::Explicit,
                Construction::Summand => VnpMode::Summand,
            };
            let cert = vnp::build_certificate(&cnf, vmode, &opts)?;
            let sys = translate(&cnf, *pad_boolean_axioms);
            let m = cert.metrics();
            let mut out = Outcome::new(true);
            out.line(format!("size={} depth={} constant_free={}", m.size, m.depth, m.constant_free));
            out.object = Some(bundle((!cert_only).then_some(&sys), &Target::One, &cert));
            Ok(out)
        }
        Command::Verify { inputs, system, cnf, boolean_axioms, structure, target, check, io } => {
            let texts = ctx.read_all(inputs)?;
            let docs: Vec<Doc> = texts.iter().flat_map(|(_, t)| split_documents(t)).collect();
            let sys = match (system, cnf) {
                (Some(p), _) => load_system(ctx, p)?,
                (None, Some(c)) => translate(&load_cnf(ctx, Some(c))?, *boolean_axioms),
                (None, None) => {
                    let d = docs.iter().find(|d| d.kind == DocKind::System).ok_or_else(|| input("no system given"))?;
                    parse_system(&d.text).map_err(input)?
                }
            };
            let tgt = resolve_target(ctx, target, &docs)?;
            let certs: Vec<Circuit> = docs
                .iter()
                .filter(|d| d.kind == DocKind::Circuit)
                .map(|d| parse_circuit(&d.text).map_err(input))
                .collect::<Result<_, _>>()?;
            if certs.is_empty() {
                return Err(input("no certificate given"));
            }
            let mode = match check.mode {
                CheckMode::Exact => VerifyMode::Exact { caps: caps_of(io), field: prime_opt(io.modulus)? },
                CheckMode::Randomized => VerifyMode::Randomized { trials: check.trials, prime: prime_opt(io.modulus)? },
            };
            let seed = io.seed;
            let caps = caps_of(io);
            let results = par_map(&certs, io.jobs, |i, c| -> Result<(Verdict, Option<bool>), Failure> {
                let cert = Certificate { circuit: c.clone(), target: tgt.clone() };
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
                let v = ips::verify(&cert, &sys, mode, &mut rng)?;
                let hl = if *structure { Some(ips::is_hilbert_like(&cert, caps)?) } else { None };
                Ok((v, hl))
            });
            let mut out = Outcome::new(true);
            out.mode = Some(match check.mode {
                CheckMode::Exact => ModeKind::Exact,
                CheckMode::Randomized => ModeKind::Randomized,
            });
            for (i, r) in results.into_iter().enumerate() {
                let (v, hl) = r?;
                let mut l = format!(
                    "certificate {} accepted={} failure_condition={}",
                    i + 1,
                    v.accepted,
                    v.failure_condition.map_or("none".to_string(), |k| k.to_string())
                );
                if let Some(p) = v.prime {
                    let _ = write!(l, " prime={p}");
                }
                if let Some(h) = hl {
                    let _ = write!(l, " hilbert_like={h}");
                }
                out.line(l);
                out.accepted &= v.accepted;
                out.trials = out.trials.max(v.trials);
                out.soundness = out.soundness.max(v.soundness_bound);
            }
            Ok(out)
        }
        Command::Pit { inputs, check, io } => pit_cmd(ctx, inputs, check, io),
        Command::Pc { cmd } => pc_cmd(ctx, cmd),
        Command::Frege { cmd } => frege_cmd(ctx, cmd),
        Command::Hilbertize { inputs, system, cert_only, target, io } => {
            let texts = ctx.read_all(inputs)?;
            let docs: Vec<Doc> = texts.iter().flat_map(|(_, t)| split_documents(t)).collect();
            let sys = match system {
                Some(p) => load_system(ctx, p)?,
                None => {
                    let d = docs.iter().find(|d| d.kind == DocKind::System).ok_or_else(|| input("no system given"))?;
                    parse_system(&d.text).map_err(input)?
                }
            };
            let tgt = resolve_target(ctx, target, &docs)?;
            let d = docs.iter().rfind(|d| d.kind == DocKind::Circuit).ok_or_else(|| input("no certificate given"))?;
            let cert = Certificate { circuit: parse_circuit(&d.text).map_err(input)?, target: tgt };
            let caps = caps_of(io);
            let h = ips::hilbertize(&cert, &sys, caps)?;
            let hl = ips::is_hilbert_like(&h, caps)?;
            let mut out = Outcome::new(hl);
            out.line(format!("hilbert_like={hl} size={}", h.circuit.len()));
            out.object = Some(bundle((!cert_only).then_some(&sys), &h.target, &h.circuit));
            Ok(out)
        }
        Command::RipsToIps { system, num, den, inverse, cert_only, target, io } => {
            let sys = load_system(ctx, system)?;
            let num = load_circuit(ctx, num)?;
            let den = load_circuit(ctx, den)?;
            let inv = load_circuit(ctx, inverse)?;
            let g = match resolve_target(ctx, target, &[])? {
                Target::Poly(g) => g,
                Target::One => Circuit::build(|c| c.constant(1)),
            };
            match ips::rips_to_ips(&num, &den, &inv, &g, &sys, caps_of(io)) {
                Ok(cert) => {
                    let mut out = Outcome::new(true);
                    out.line(format!("division_free={} size={}", cert.circuit.is_division_free(), cert.circuit.len()));
                    out.object = Some(bundle((!cert_only).then_some(&sys), &cert.target, &cert.circuit));
                    Ok(out)
                }
                Err(e @ (IpsError::InverseCertInvalid(_) | IpsError::ConstructionFailed(_))) => {
                    let mut out = Outcome::new(false);
                    out.line(format!("rejected: {e}"));
                    Ok(out)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Grobner { cmd } => grobner_cmd(ctx, cmd),
        Command::Encode { cmd } => encode_cmd(ctx, cmd),
    }
}

fn pit_cmd(ctx: &mut Ctx, inputs: &[PathBuf], check: &Check, io: &Io) -> Result<Outcome, Failure> {
    let texts = ctx.read_all(inputs)?;
    let circuits: Vec<Circuit> = texts
        .iter()
        .flat_map(|(_, t)| split_documents(t))
        .filter(|d| d.kind == DocKind::Circuit)
        .map(|d| parse_circuit(&d.text).map_err(input))
        .collect::<Result<_, _>>()?;
    if circuits.is_empty() {
        return Err(input("no circuit given"));
    }
    let modulus = prime_opt(io.modulus)?;
    let caps = caps_of(io);
    let seed = io.seed;
    let results = par_map(&circuits, io.jobs, |i, c| -> Result<(bool, usize, f64, Option<Prime>), Failure> {
        match check.mode {
            CheckMode::Exact => {
                let zero = match modulus.or(match c.domain() {
                    Domain::Prime(p) => Some(p),
                    Domain::Integer => None,
                }) {
                    Some(p) => expand_in::<FieldElement>(c, p, caps)?.is_zero(),
                    None => expand_in::<BigInt>(c, (), caps)?.is_zero(),
                };
                Ok((zero, 0, 0.0, modulus))
            }
            CheckMode::Randomized => {
                let deg = c.degree_bound().map_err(input)?;
                let p = modulus
                    .or(match c.domain() {
                        Domain::Prime(p) => Some(p),
                        Domain::Integer => None,
                    })
                    .unwrap_or_else(|| pit::default_prime(deg));
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
                let o = pit::pit_is_zero(c, p, check.trials, &mut rng).map_err(input)?;
                Ok((o.zero, o.trials, o.soundness, Some(p)))
            }
        }
    });
    let mut out = Outcome::new(true);
    out.mode = Some(match check.mode {
        CheckMode::Exact => ModeKind::Exact,
        CheckMode::Randomized => ModeKind::Randomized,
    });
    for (i, r) in results.into_iter().enumerate() {
        let (zero, trials, q, p) = r?;
        let mut l = format!("circuit {} zero={zero}", i + 1);
        if let Some(p) = p {
            let _ = write!(l, " prime={p}");
        }
        out.line(l);
        out.accepted &= zero;
        out.trials = out.trials.max(trials);
        out.soundness = out.soundness.max(q);
    }
    Ok(out)
}

fn pc_failure(e: PcError) -> Result<Option<String>, Failure> {
    match e {
        PcError::InvalidRule { .. } | PcError::FinalNotOne | PcError::FinalMismatch => Ok(Some(e.to_string())),
        PcError::Poly(p) => Err(p.into()),
        PcError::Ips(i) => Err(i.into()),
        other => Err(input(other)),
    }
}

/// The proof's system: the flag, else the header path, else a system
/// document next to the proof in the same stream.
fn pc_system(
    ctx: &mut Ctx,
    flag: Option<&Path>,
    proof: &pc::PcProof,
    base: Option<&Path>,
    docs: &[Doc],
) -> Result<PolySystem, Failure> {
    if let Some(p) = flag {
        return load_system(ctx, p);
    }
    if let Some(d) = docs.iter().find(|d| d.kind == DocKind::System) {
        return parse_system(&d.text).map_err(input);
    }
    match &proof.system {
        Some(named) => load_system(ctx, &resolve_relative(named, base)),
        None => Err(input("proof names no system; pass --system")),
    }
}

fn domain_of(io: &Io) -> Result<Domain, Failure> {
    Ok(match prime_opt(io.modulus)? {
        Some(p) => Domain::Prime(p),
        None => Domain::Integer,
    })
}

fn pc_cmd(ctx: &mut Ctx, cmd: &PcCmd) -> Result<Outcome, Failure> {
    match cmd {
        PcCmd::Check { inputs, system, target, io } => {
            let texts = ctx.read_all(inputs)?;
            let caps = caps_of(io);
            let domain = domain_of(io)?;
            let mut jobs = Vec::new();
            for (path, text) in &texts {
                let docs = split_documents(text);
                let d = docs.iter().find(|d| d.kind == DocKind::Pc).ok_or_else(|| input("no pcproof document"))?;
                let proof = pc::parse_pc(&d.text).map_err(input)?;
                let sys = pc_system(ctx, system.as_deref(), &proof, path.as_deref(), &docs)?;
                let tgt = resolve_target(ctx, target, &docs)?;
                jobs.push((proof, sys, tgt));
            }
            let results = par_map(&jobs, io.jobs, |_, (proof, sys, tgt)| match tgt {
                Target::One => pc::check_pc(proof, sys, domain, caps),
                Target::Poly(g) => pc::check_pc_derivation(proof, sys, domain, caps, g),
            });
            let mut out = Outcome::new(true);
            for (i, r) in results.into_iter().enumerate() {
                match r {
                    Ok(m) => out.line(format!(
                        "proof {} valid=true lines={} monomials={} degree={}",
                        i + 1,
                        m.lines,
                        m.monomials,
                        m.degree
                    )),
                    Err(e) => {
                        let why = pc_failure(e)?.unwrap_or_default();
                        out.line(format!("proof {} valid=false reason={why}", i + 1));
                        out.accepted = false;
                    }
                }
            }
            Ok(out)
        }
        PcCmd::Compile { input: path, system, cert_only, target, io } => {
            let text = ctx.read(path.as_deref())?;
            let docs = split_documents(&text);
            let d = docs.iter().find(|d| d.kind == DocKind::Pc).ok_or_else(|| input("no pcproof document"))?;
            let proof = pc::parse_pc(&d.text).map_err(input)?;
            let sys = pc_system(ctx, system.as_deref(), &proof, path.as_deref(), &docs)?;
            let tgt = resolve_target(ctx, target, &docs)?;
            let domain = domain_of(io)?;
            let caps = caps_of(io);
            if let Target::Poly(g) = &tgt {
                if let Err(e) = pc::check_pc_derivation(&proof, &sys, domain, caps, g) {
                    let mut out = Outcome::new(false);
                    out.line(format!("rejected: {}", pc_failure(e)?.unwrap_or_default()));
                    return Ok(out);
                }
            }
            match pc::compile_pc_to_ips(&proof, &sys, domain, caps) {
                Ok(mut cert) => {
                    cert.target = tgt;
                    let skew = cert.circuit.is_weakly_skew().is_ok();
                    let mut out = Outcome::new(true);
                    out.line(format!("size={} lines={} weakly_skew={skew}", cert.circuit.len(), proof.lines.len()));
                    out.object = Some(bundle((!cert_only).then_some(&sys), &cert.target, &cert.circuit));
                    Ok(out)
                }
                Err(e) => {
                    let mut out = Outcome::new(false);
                    out.line(format!("rejected: {}", pc_failure(e)?.unwrap_or_default()));
                    Ok(out)
                }
            }
        }
        PcCmd::Decompile { input: path, system, target, io } => {
            let text = ctx.read(path.as_deref())?;
            let docs = split_documents(&text);
            let d = docs.iter().rfind(|d| d.kind == DocKind::Circuit).ok_or_else(|| input("no certificate given"))?;
            let tgt = resolve_target(ctx, target, &docs)?;
            let cert = Certificate { circuit: parse_circuit(&d.text).map_err(input)?, target: tgt };
            match pc::compile_ips_to_pc(&cert, caps_of(io)) {
                Ok(mut proof) => {
                    proof.system = system.clone();
                    let mut out = Outcome::new(true);
                    out.line(format!("lines={}", proof.lines.len()));
                    out.object = Some(pc::write_pc(&proof));
                    Ok(out)
                }
                Err(e @ (PcError::NotHilbertLike | PcError::NotWeaklySkew(_))) => {
                    let mut out = Outcome::new(false);
                    out.line(format!("rejected: {e}"));
                    Ok(out)
                }
                Err(e) => {
                    let why = pc_failure(e)?.unwrap_or_default();
                    let mut out = Outcome::new(false);
                    out.line(format!("rejected: {why}"));
                    Ok(out)
                }
            }
        }
    }
}

fn load_refutation(ctx: &mut Ctx, path: Option<&Path>, cnf: Option<&Path>) -> Result<FregeRefutation, Failure> {
    let text = ctx.read(path)?;
    let file = parse_frege(&text).map_err(input)?;
    let cnf = match (cnf, &file.cnf_path) {
        (Some(c), _) => load_cnf(ctx, Some(c))?,
        (None, Some(named)) => load_cnf(ctx, Some(&resolve_relative(named, path)))?,
        (None, None) => return Err(input("proof names no CNF; pass --cnf")),
    };
    Ok(FregeRefutation { cnf, cedents: file.cedents })
}

fn frege_cmd(ctx: &mut Ctx, cmd: &FregeCmd) -> Result<Outcome, Failure> {
    match cmd {
        FregeCmd::Check { inputs, cnf, io } => {
            let refs: Vec<FregeRefutation> = if inputs.is_empty() {
                vec![load_refutation(ctx, None, cnf.as_deref())?]
            } else {
                inputs.iter().map(|p| load_refutation(ctx, Some(p), cnf.as_deref())).collect::<Result<_, _>>()?
            };
            let results = par_map(&refs, io.jobs, |_, r| check_frege(r));
            let mut out = Outcome::new(true);
            for (i, r) in results.into_iter().enumerate() {
                match r {
                    Ok(rep) => {
                        out.line(format!("proof {} valid=true cedents={} depth={}", i + 1, rep.cedents, rep.depth))
                    }
                    Err(e) => {
                        out.line(format!("proof {} valid=false reason={e}", i + 1));
                        out.accepted = false;
                    }
                }
            }
            Ok(out)
        }
        FregeCmd::Compile { input: path, cnf, cert_only, .. } => {
            let r = load_refutation(ctx, path.as_deref(), cnf.as_deref())?;
            match compile_frege_to_ips(&r) {
                Ok(cert) => {
                    let sys = translate(&r.cnf, true);
                    let m = cert.circuit.metrics();
                    let mut out = Outcome::new(true);
                    out.line(format!("size={} depth={}", m.size, m.depth));
                    out.object = Some(bundle((!cert_only).then_some(&sys), &cert.target, &cert.circuit));
                    Ok(out)
                }
                Err(e) => {
                    let mut out = Outcome::new(false);
                    out.line(format!("rejected: {e}"));
                    Ok(out)
                }
            }
        }
    }
}

fn grobner_input(ctx: &mut Ctx, path: Option<&Path>, io: &Io) -> Result<(PolySystem, Vec<Poly>, Prime), Failure> {
    let text = ctx.read(path)?;
    let d = split_documents(&text)
        .into_iter()
        .find(|d| d.kind == DocKind::System)
        .ok_or_else(|| input("no system given"))?;
    let sys = parse_system(&d.text).map_err(input)?;
    let p = prime_opt(io.modulus)?.unwrap_or_else(grobner::default_prime);
    let polys = sys.expand(p, caps_of(io))?;
    Ok((sys, polys, p))
}

fn list_polys(label: &str, ps: &[Poly]) -> String {
    let mut s = String::new();
    for (i, p) in ps.iter().enumerate() {
        let _ = writeln!(s, "{label}{} = {p}", i + 1);
    }
    s
}

fn grobner_cmd(ctx: &mut Ctx, cmd: &GrobnerCmd) -> Result<Outcome, Failure> {
    match cmd {
        GrobnerCmd::Basis { input: path, order, io } => {
            let (_, polys, p) = grobner_input(ctx, path.as_deref(), io)?;
            let order = match order {
                Order::Grevlex => MonomialOrder::GrevLex,
                Order::Lex => MonomialOrder::Lex,
                Order::EliminateX => MonomialOrder::EliminateX,
            };
            let gb = grobner::buchberger(&polys, order, false, caps_of(io))?;
            let mut out = Outcome::new(true);
            out.line(format!("prime={p} generators={} contains_one={}", gb.generators.len(), gb.contains_one()));
            out.object = Some(list_polys("g", &gb.generators));
            Ok(out)
        }
        GrobnerCmd::Member { input: path, poly, cert, io } => {
            let (sys, polys, p) = grobner_input(ctx, path.as_deref(), io)?;
            let g = parse_poly(poly, p)?;
            let caps = caps_of(io);
            let gb = grobner::buchberger(&polys, MonomialOrder::GrevLex, true, caps)?;
            let mem = grobner::ideal_membership(&g, &gb, caps)?;
            let mut out = Outcome::new(mem.member);
            out.line(format!("member={} remainder={}", mem.member, mem.remainder));
            if let Some(cof) = &mem.cofactors {
                out.object = Some(if *cert {
                    let mut gc = g.to_circuit();
                    gc.set_domain(Domain::Prime(p));
                    let mut c = grobner::cofactor_certificate(cof);
                    c.set_fvars(sys.len() as u32);
                    bundle(Some(&sys), &Target::Poly(gc), &c)
                } else {
                    list_polys("c", cof)
                });
            }
            Ok(out)
        }
        GrobnerCmd::Radical { input: path, poly, max_exponent, io } => {
            let (_, polys, p) = grobner_input(ctx, path.as_deref(), io)?;
            let g = parse_poly(poly, p)?;
            let caps = caps_of(io);
            let rad = grobner::radical_membership(&g, &polys, caps)?;
            let mut out = Outcome::new(rad);
            if !rad {
                out.line("radical=false");
                return Ok(out);
            }
            match grobner::radical_exponent(&g, &polys, *max_exponent, caps)? {
                Some((k, cof)) => {
                    out.line(format!("radical=true exponent={k}"));
                    out.object = Some(list_polys("c", &cof));
                }
                None => out.line(format!("radical=true exponent>{max_exponent}")),
            }
            Ok(out)
        }
        GrobnerCmd::Syzygies { input: path, io } => {
            let (_, polys, _) = grobner_input(ctx, path.as_deref(), io)?;
            let syz = grobner::syzygy_generators(&polys, caps_of(io))?;
            let all_zero = syz.generators.iter().all(|v| grobner::syzygy_residual(v, &polys).is_zero());
            let mut out = Outcome::new(all_zero);
            out.line(format!("generators={} residuals_zero={all_zero}", syz.generators.len()));
            let mut s = String::new();
            for (i, v) in syz.generators.iter().enumerate() {
                let parts: Vec<String> = v.iter().map(|q| q.to_string()).collect();
                let _ = writeln!(s, "s{} = ({})", i + 1, parts.join(", "));
            }
            out.object = Some(s);
            Ok(out)
        }
        GrobnerCmd::Geomcert { input: path, cert, io } => {
            let (sys, polys, _) = grobner_input(ctx, path.as_deref(), io)?;
            let geo = grobner::geometric_zero_certificates(&polys, caps_of(io))?;
            let found = geo.certificate.is_some();
            let mut out = Outcome::new(found);
            out.line(format!("relations={} certificate={found}", geo.relations.generators.len()));
            out.object = Some(match (&geo.certificate, cert) {
                (Some(c), true) => {
                    let mut r = grobner::geometric_refutation(c);
                    r.set_fvars(sys.len() as u32);
                    bundle(Some(&sys), &Target::One, &r)
                }
                _ => {
                    let mut s = list_polys("r", &geo.relations.generators);
                    if let Some(c) = &geo.certificate {
                        let _ = writeln!(s, "certificate = {c}");
                    }
                    s
                }
            });
            Ok(out)
        }
    }
}

fn formula_text(f: &crate::frege::BoolFormula, pool: Option<&VarPool>, dimacs: bool, top: u32) -> String {
    if dimacs {
        return write_dimacs(&propenc::tseitin(f, top));
    }
    let mut s = String::new();
    if let Some(pool) = pool {
        for id in 1..=pool.len() as u32 {
            if let Some(n) = pool.name(id) {
                let _ = writeln!(s, "; x{id} = {n}");
            }
        }
    }
    let _ = writeln!(s, "{f}");
    s
}

fn check_grid(layout: Layout, degree: u64) -> Result<(), Failure> {
    let side = degree.max(1) + 1;
    match side.checked_pow(layout.vars as u32) {
        Some(n) if n <= GRID_LIMIT => Ok(()),
        _ => Err(Failure::Cap(format!("tester grid {side}^{} exceeds {GRID_LIMIT} points", layout.vars))),
    }
}

fn instance_outcome(
    inst: &KInstance,
    k: &propenc::KCircuit,
    pool: &VarPool,
    check: bool,
    dimacs: bool,
) -> Result<Outcome, Failure> {
    let mut out = Outcome::new(true);
    out.line(format!("free={} k_gates={} copies={}", inst.free.len(), k.gate_count(), inst.copies.len()));
    if check {
        match propenc::check_instance(inst, k, pool.len())? {
            None => out.line("tautology=true"),
            Some(a) => {
                out.accepted = false;
                let bits: Vec<String> = a.iter().map(|(v, b)| format!(" x{v}={}", u8::from(*b))).collect();
                out.line(format!("tautology=false{}", bits.concat()));
            }
        }
    }
    let negated = crate::frege::BoolFormula::not(inst.formula.clone());
    out.object = Some(if dimacs {
        formula_text(&negated, None, true, pool.len() as u32)
    } else {
        formula_text(&inst.formula, Some(pool), false, 0)
    });
    Ok(out)
}

fn encode_cmd(ctx: &mut Ctx, cmd: &EncodeCmd) -> Result<Outcome, Failure> {
    match cmd {
        EncodeCmd::Truthbool { input: path, free, simplify, dimacs, .. } => {
            let (f, pool, bits, top) = match free {
                Some(nm) if nm.len() != 2 => return Err(input("--free takes n,m")),
                Some(nm) => {
                    let tb = propenc::build_truth_bool(nm[0], nm[1]);
                    let bits = tb.encoding.bits.len();
                    let top = tb.pool.len() as u32;
                    (tb.formula, Some(tb.pool), bits, top)
                }
                None => {
                    let cnf = propenc::pad_to_width3(&load_cnf(ctx, path.as_deref())?);
                    let bits = propenc::encode_clause_bits(&cnf)?.bits.len();
                    (propenc::truth_bool_fixed(&cnf)?, None, bits, cnf.n_vars)
                }
            };
            let f = if *simplify { propenc::simplify_constants(&f) } else { f };
            let mut out = Outcome::new(true);
            out.line(format!("bits={bits} size={}", propenc::formula_size(&f)));
            out.object = Some(formula_text(&f, pool.as_ref(), *dimacs, top));
            Ok(out)
        }
        EncodeCmd::Proofips { cnf, cert, degree, dimacs, .. } => {
            let phi = propenc::pad_to_width3(&load_cnf(ctx, Some(cnf))?);
            let c = load_circuit(ctx, cert)?;
            let (n, m) = (phi.n_vars as usize, phi.clauses.len());
            if c.variables()
                .iter()
                .any(|v| matches!(v, VarId::F(j) if *j as usize > m) || matches!(v, VarId::X(i) if *i as usize > n))
            {
                return Err(input("certificate variables exceed the CNF's"));
            }
            let recs = propenc::encode_circuit(&c, n)?;
            let w = propenc::ceil_log2((8 * m + recs.len() + 1).max(n + m));
            let c_enc = BitEncoding::from_records(&recs, Layout::with_index_bits(recs.len(), n + m, w)?)?;
            let phi_enc = propenc::encode_clause_bits(&phi)?;
            let (_, full) = propenc::proof_ips_inputs(&c_enc, &phi_enc)?;
            let layout = full.layout().expect("circuit encoding");
            let d = match degree {
                Some(d) => *d,
                None => c.degree_bound_weighted(|v| if v.is_placeholder() { 3 } else { 1 }).map_err(input)?,
            };
            check_grid(layout, d)?;
            let k = BruteForceK::new(layout, d)?.circuit();
            let mut pool = VarPool::new();
            for i in 1..=n {
                pool.fresh(format!("x{i}"));
            }
            let inst = propenc::build_proof_ips(&k, &c_enc, &phi_enc, &mut pool)?;
            let mut out = instance_outcome(&inst, &k, &pool, true, *dimacs)?;
            out.line(format!("layout={layout} degree={d}"));
            Ok(out)
        }
        EncodeCmd::Axiom { number, gates, vars, g_gates, position, perm, degree, no_check, dimacs, .. } => {
            let layout = Layout::new(*gates, *vars);
            layout.check()?;
            check_grid(layout, *degree)?;
            let k = BruteForceK::new(layout, *degree)?.circuit();
            let mut pool = VarPool::new();
            let (axiom, circuits) = match number {
                1 => (PitAxiom::Boolean, vec![BitEncoding::fresh(layout, &mut pool, "c")?]),
                2 => {
                    if *gates < 2 {
                        return Err(input("axiom 2 needs at least two gates"));
                    }
                    (
                        PitAxiom::OneMinus,
                        vec![BitEncoding::fresh(Layout { gates: gates - 1, ..layout }, &mut pool, "c")?],
                    )
                }
                3 => {
                    if *g_gates == 0 || *g_gates >= *gates || *position >= *vars {
                        return Err(input("axiom 3 needs 0 < g-gates < gates and position < vars"));
                    }
                    let g = BitEncoding::fresh(Layout { gates: *g_gates, ..layout }, &mut pool, "g")?;
                    let c = BitEncoding::fresh(Layout { gates: gates - g_gates, ..layout }, &mut pool, "c")?;
                    (PitAxiom::SubZero { position: *position }, vec![g, c])
                }
                _ => {
                    let pi = perm.clone().unwrap_or_else(|| (0..*vars).rev().collect());
                    if pi.len() != *vars {
                        return Err(input("permutation length must equal --vars"));
                    }
                    (PitAxiom::Permutation(pi), vec![BitEncoding::fresh(layout, &mut pool, "c")?])
                }
            };
            let inst = propenc::build_pit_axiom(&axiom, &k, layout, &circuits, &mut pool)?;
            let mut out = instance_outcome(&inst, &k, &pool, !no_check, *dimacs)?;
            out.line(format!("axiom={} layout={layout} degree={degree}", axiom.number()));
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = stdin.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["ipskit"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut input, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn caps_parse() {
        let c = parse_caps("terms=10,degree=3").unwrap();
        assert_eq!((c.max_terms, c.max_degree), (10, 3));
        assert!(parse_caps("bogus=1").is_err());
        assert!(parse_caps("terms").is_err());
    }

    #[test]
    fn documents_split_at_top_level_headers() {
        let sys = translate(&CnfFormula::new(1, vec![vec![1], vec![-1]]), false);
        let cert = Circuit::build(|c| {
            let (a, b) = (c.f(1), c.f(2));
            c.add(a, b)
        });
        let g = Circuit::build(|c| c.x(1));
        let text = bundle(Some(&sys), &Target::Poly(g.clone()), &cert);
        let docs = split_documents(&text);
        let kinds: Vec<DocKind> = docs.iter().map(|d| d.kind).collect();
        assert_eq!(kinds, vec![DocKind::System, DocKind::Target, DocKind::Circuit]);
        assert_eq!(parse_system(&docs[0].text).unwrap(), sys);
        assert_eq!(parse_circuit(&docs[1].text).unwrap(), g);
        assert_eq!(parse_circuit(&docs[2].text).unwrap(), cert);
    }

    #[test]
    fn construct_then_verify_through_stdin() {
        let cnf = "p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n";
        let (code, bundle_text, _) = run_str(&["construct-vnp"], cnf);
        assert_eq!(code, 0);
        let (code, out, _) = run_str(&["verify", "--mode", "exact"], &bundle_text);
        assert_eq!(code, 0, "{out}");
        assert!(out.ends_with("RESULT accepted=true mode=exact trials=0 soundness=0\n"));
    }

    #[test]
    fn exit_codes_distinguish_rejection_input_and_caps() {
        let (code, _, _) = run_str(&["verify"], "garbage");
        assert_eq!(code, 2);
        let (code, _, _) = run_str(&["no-such-command"], "");
        assert_eq!(code, 2);
        let sys = write_system(&translate(&CnfFormula::new(1, vec![vec![1], vec![-1]]), false));
        let bad = write_circuit(&Circuit::build(|c| c.f(1)));
        let (code, out, _) = run_str(&["verify", "--mode", "exact"], &format!("{sys}{bad}"));
        assert_eq!(code, 1);
        assert!(out.contains("failure_condition=2"));
        let big = write_circuit(&Circuit::build(|c| {
            let xs: Vec<_> = (1..=12)
                .map(|i| {
                    let x = c.x(i);
                    let one = c.constant(1);
                    c.add(x, one)
                })
                .collect();
            c.mul(xs)
        }));
        let (code, _, err) = run_str(&["pit", "--mode", "exact", "--caps", "terms=100"], &big);
        assert_eq!(code, 3, "{err}");
    }
}
