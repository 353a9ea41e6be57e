//! Library half of the `ahibe` command-line tool.

mod error;
pub mod hybrid;
pub mod identity;

use std::fs;
use std::path::{Path, PathBuf};

use ahibe::backend::{BackendTag, Bls12Backend, MockBackend};
use ahibe::bench::{self, BenchConfig};
use ahibe::codec::peek_backend;
use ahibe::cost::Algorithm;
use ahibe::scheme;
use ahibe::{GroupSuite, MasterKey, PairingBackend, PrivateKey, PublicParams};
use clap::{Args, Parser, Subcommand};
use ggm_check::{builtin, check_assumption, AssumptionInstance, ChallengeGroup};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub use error::CliError;
pub use hybrid::HybridCiphertext;
pub use identity::{hash_identity, IdentityPath};

#[derive(Debug, Parser)]
#[command(name = "ahibe", version, about = "Anonymous HIBE with constant-size ciphertexts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RngArgs {
    /// Deterministic RNG seed (testing only).
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate public parameters and a master key.
    Setup {
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value = "pp.bin")]
        pp: PathBuf,
        #[arg(long, default_value = "mk.bin")]
        mk: PathBuf,
        /// Use the insecure discrete-log mock group of this prime order.
        #[arg(long)]
        mock: Option<u64>,
        #[command(flatten)]
        rng: RngArgs,
    },
    /// Derive a private key for an identity from the master key.
    Keygen {
        #[arg(long, default_value = "pp.bin")]
        pp: PathBuf,
        #[arg(long, default_value = "mk.bin")]
        mk: PathBuf,
        #[arg(long)]
        id: IdentityPath,
        #[arg(long, default_value = "sk.bin")]
        out: PathBuf,
        #[command(flatten)]
        rng: RngArgs,
    },
    /// Derive a key for a descendant identity from an ancestor's key.
    Delegate {
        #[arg(long, default_value = "pp.bin")]
        pp: PathBuf,
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        id: IdentityPath,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        rng: RngArgs,
    },
    /// Encrypt a file to an identity.
    Encrypt {
        #[arg(long, default_value = "pp.bin")]
        pp: PathBuf,
        #[arg(long)]
        id: IdentityPath,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        rng: RngArgs,
    },
    /// Decrypt a file; writes nothing unless authentication succeeds.
    Decrypt {
        #[arg(long, default_value = "pp.bin")]
        pp: PathBuf,
        #[arg(long)]
        sk: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time one algorithm over a grid of identity depths on BLS12-381.
    Bench {
        #[arg(long)]
        alg: Algorithm,
        #[arg(long)]
        depth: usize,
        /// Comma-separated depths; defaults to every valid depth.
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<usize>>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        mock: Option<u64>,
        #[command(flatten)]
        rng: RngArgs,
    },
    /// Check a decisional assumption in the generic group model.
    GgmCheck {
        #[arg(long, conflicts_with = "instance", required_unless_present = "instance")]
        builtin: Option<usize>,
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Evaluate the bound for this many adversary instructions...
        #[arg(long, requires = "order")]
        q: Option<u64>,
        /// ...and this group order (decimal).
        #[arg(long, requires = "q")]
        order: Option<BigInt>,
    },
}

fn rng(args: &RngArgs) -> ChaCha20Rng {
    match args.seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Calls `$f::<Backend>(pp_bytes, ...)` for the backend recorded in the
/// public parameters.
macro_rules! dispatch {
    ($pp:expr, $f:ident($($arg:expr),*)) => {{
        let bytes = read($pp)?;
        match peek_backend(&bytes)? {
            BackendTag::Mock => $f::<MockBackend>(&bytes, $($arg),*),
            BackendTag::Bls12_381 => $f::<Bls12Backend>(&bytes, $($arg),*),
        }
    }};
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Setup { depth, pp, mk, mock, rng: r } => match mock {
            Some(p) => setup(&GroupSuite::mock(p, r.seed.unwrap_or(0))?, depth, &pp, &mk, &r),
            None => setup(&GroupSuite::bls12_381(), depth, &pp, &mk, &r),
        },
        Command::Keygen { pp, mk, id, out, rng: r } => dispatch!(&pp, keygen(&mk, &id, &out, &r)),
        Command::Delegate { pp, sk, id, out, rng: r } => dispatch!(&pp, delegate(&sk, &id, &out, &r)),
        Command::Encrypt { pp, id, input, out, rng: r } => dispatch!(&pp, encrypt(&id, &input, &out, &r)),
        Command::Decrypt { pp, sk, input, out } => dispatch!(&pp, decrypt(&sk, &input, out.as_deref())),
        Command::Bench { alg, depth, d, reps, csv, parallel, mock, rng: r } => {
            let cfg = BenchConfig { reps, parallel, seed: r.seed.unwrap_or(0) };
            let report = match mock {
                Some(p) => bench::run_bench(alg, &GroupSuite::mock(p, 0)?, depth, &[0], &cfg)?,
                None => {
                    let grid = d.unwrap_or_else(|| default_grid(alg, depth));
                    bench::run_bench(alg, &GroupSuite::bls12_381(), depth, &grid, &cfg)?
                }
            };
            if csv {
                print!("{}", report.to_csv());
            } else {
                print!("{}", report.to_ndjson());
                eprint!("{}", report.summary_table());
            }
            Ok(())
        }
        Command::GgmCheck { builtin: n, instance, q, order } => {
            let inst = match (n, instance) {
                (Some(n), _) => builtin(n)?,
                (None, Some(path)) => {
                    let text = String::from_utf8(read(&path)?)
                        .map_err(|_| CliError::Usage(format!("{}: not UTF-8", path.display())))?;
                    text.parse()?
                }
                (None, None) => return Err(CliError::Usage("--builtin or --instance is required".into())),
            };
            print!("{}", ggm_report(&inst, q.zip(order))?);
            Ok(())
        }
    }
}

fn default_grid(alg: Algorithm, l: usize) -> Vec<usize> {
    match alg {
        Algorithm::Setup => vec![0],
        Algorithm::Delegate => (0..l).collect(),
        _ => (0..=l).collect(),
    }
}

fn setup<B: PairingBackend>(
    suite: &GroupSuite<B>,
    depth: usize,
    pp_path: &Path,
    mk_path: &Path,
    r: &RngArgs,
) -> Result<(), CliError> {
    let (mk, pp) = scheme::setup(suite, depth, &mut rng(r))?;
    write(pp_path, &pp.to_bytes())?;
    write(mk_path, &mk.to_bytes(&pp))?;
    println!("wrote {} and {} (max depth {depth})", pp_path.display(), mk_path.display());
    Ok(())
}

fn keygen<B: PairingBackend>(
    pp_bytes: &[u8],
    mk_path: &Path,
    id: &IdentityPath,
    out: &Path,
    r: &RngArgs,
) -> Result<(), CliError> {
    let pp = PublicParams::<B>::from_bytes(pp_bytes)?;
    let mk = MasterKey::from_bytes(&read(mk_path)?, &pp)?;
    let sk = scheme::keygen(&hash_identity(id, &pp.suite), &mk, &pp, &mut rng(r))?;
    write(out, &sk.to_bytes(&pp))?;
    println!("wrote key for {id} to {}", out.display());
    Ok(())
}

/// Extends the key one level at a time until it reaches `id`.
fn delegate<B: PairingBackend>(
    pp_bytes: &[u8],
    sk_path: &Path,
    id: &IdentityPath,
    out: &Path,
    r: &RngArgs,
) -> Result<(), CliError> {
    let pp = PublicParams::<B>::from_bytes(pp_bytes)?;
    let mut sk = PrivateKey::from_bytes(&read(sk_path)?, &pp)?;
    let target = hash_identity(id, &pp.suite);
    if target.depth() <= sk.depth() {
        return Err(scheme_err(sk.depth(), target.depth()));
    }
    let mut rng = rng(r);
    for depth in sk.depth() + 1..=target.depth() {
        sk = scheme::delegate(&target.prefix(depth), &sk, &pp, &mut rng)?;
    }
    write(out, &sk.to_bytes(&pp))?;
    println!("wrote key for {id} to {}", out.display());
    Ok(())
}

fn scheme_err(from: usize, to: usize) -> CliError {
    ahibe::SchemeError::NotOneStepExtension { from, to }.into()
}

fn encrypt<B: PairingBackend>(
    pp_bytes: &[u8],
    id: &IdentityPath,
    input: &Path,
    out: &Path,
    r: &RngArgs,
) -> Result<(), CliError> {
    let pp = PublicParams::<B>::from_bytes(pp_bytes)?;
    let msg = read(input)?;
    let hct = hybrid::seal(&hash_identity(id, &pp.suite), &msg, &pp, &mut rng(r))?;
    write(out, &hct.to_bytes())
}

fn decrypt<B: PairingBackend>(pp_bytes: &[u8], sk_path: &Path, input: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let pp = PublicParams::<B>::from_bytes(pp_bytes)?;
    let sk = PrivateKey::from_bytes(&read(sk_path)?, &pp)?;
    let hct = HybridCiphertext::from_bytes(&read(input)?)?;
    let msg = hybrid::open(&hct, &sk, &pp)?;
    match out {
        Some(path) => write(path, &msg),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&msg)
                .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// The text printed by `ggm-check`.
pub fn ggm_report(inst: &AssumptionInstance, eval: Option<(u64, BigInt)>) -> Result<String, CliError> {
    use std::fmt::Write;
    let v = check_assumption(inst)?;
    let mut out = String::new();
    writeln!(out, "assumption: {} (challenge in {})", inst.name, inst.challenge).unwrap();
    for b in 0..2 {
        write!(out, "T{b} = {}: dependent: {}", inst.t[b], yes_no(v.t_dependent_on_p[b])).unwrap();
        if inst.challenge != ChallengeGroup::Gt {
            let prods: Vec<String> = v.pairing_products[b].iter().map(ToString::to_string).collect();
            write!(out, ", pairing-dependent: {} [{}]", yes_no(v.pairing_dependent[b]), prods.join(", ")).unwrap();
        }
        writeln!(out).unwrap();
    }
    writeln!(out, "generic-secure: {}, bound {}", yes_no(v.generic_secure), v.bound).unwrap();
    if let Some((q, p)) = eval {
        let x = v.bound.evaluate(q, &p);
        writeln!(out, "bound at q={q}: {}/{}", x.numer(), x.denom()).unwrap();
    }
    Ok(out)
}
