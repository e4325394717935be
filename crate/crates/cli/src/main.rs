//! Command-line front end: exact diagram counts, sphere sizes, image-set
//! densities, generation certificates, Monte Carlo experiments, tuple
//! injection plans, and the built-in verification suite.
//!
//! Every subcommand is deterministic: identical invocations produce
//! byte-identical output, except for the `meta.timestamp` field on JSON
//! reports, which `--no-meta` removes.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde_json::{json, Value};

use thompson_f::count::{decimal_string, mu_interval};
use thompson_f::verification;
use thompson_f::{
    certify_generates_f, density_envelope, density_s, invert_nat_map, nat_map, nat_plan,
    ordered_count, parse_element_list, r_count, sample_element, sphere_count, Element,
    KTuple, Model, Verdict,
};

/// Decimal places for rendered rationals.
const DIGITS: usize = 12;

#[derive(Parser)]
#[command(
    name = "thompson-f",
    version,
    about = "Tree-diagram calculus for Thompson's group F",
    propagate_version = true
)]
struct Cli {
    /// Omit the run metadata (timestamp) from JSON reports.
    #[arg(long, global = true)]
    no_meta: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate exact reduced-diagram counts by size, as CSV.
    ///
    /// Columns: size n, the exact count r_n, the ratio r_{n-1}/r_n, and the
    /// absolute gap between that ratio and the reciprocal growth constant.
    /// Undefined entries (n = 0, or a zero count) render as "-".
    Count {
        /// Largest size to tabulate.
        #[arg(long, value_name = "N")]
        max_n: usize,
    },

    /// Exact sphere sizes for k-tuples under a size model.
    Sphere {
        /// Tuple arity.
        #[arg(long)]
        k: usize,
        /// Sphere radius (tuple size under the chosen model).
        #[arg(long)]
        n: usize,
        /// Size model: "sum" or "max".
        #[arg(long, default_value = "sum")]
        model: String,
    },

    /// Exact density of the always-generating image set inside a sphere.
    ///
    /// The image set consists of the k-tuples obtained by injecting a
    /// (k-1)-tuple through the two subtree-copy maps; its members generate
    /// the group. The density is exact; the report also carries the proven
    /// envelope around it when the radius is large enough.
    DensityS {
        /// Tuple arity.
        #[arg(long)]
        k: usize,
        /// Sphere radius.
        #[arg(long)]
        n: usize,
        /// Size model: "sum" or "max".
        #[arg(long, default_value = "sum")]
        model: String,
    },

    /// Decide whether the given elements generate the whole group.
    ///
    /// Prints a verdict with either five branch-pair witnesses (each carried
    /// by an explicit word in the generators) or a slope-vector obstruction.
    Certify {
        /// Generators: a file path, or an inline list. Entries are tree
        /// diagrams ("11000,10100") or words in the standard generators
        /// ("x0 x1^-1"), separated by ";" or newlines; "#" starts a comment.
        #[arg(long, value_name = "FILE|LIST")]
        gens: String,
        /// Witness search depth (products of at most this many factors).
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },

    /// Monte Carlo estimate of the generating fraction of a sphere.
    Experiment {
        /// Tuple arity.
        #[arg(long)]
        k: usize,
        /// Sphere radius.
        #[arg(long)]
        n: usize,
        /// Size model: "sum" or "max".
        #[arg(long, default_value = "sum")]
        model: String,
        /// Number of tuples to draw.
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        /// Certificate search depth per tuple.
        #[arg(long, default_value_t = 2)]
        depth: u32,
        /// RNG seed; the estimate is reproducible across thread counts.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Plan the injection of k-tuples over a dyadic interval and check its
    /// identities on seeded random tuples.
    Nat {
        /// Generators of the acting subgroup (file path or inline list).
        #[arg(long, value_name = "FILE|LIST")]
        gens: String,
        /// Root of the target interval, as a binary word (empty for the
        /// whole interval).
        #[arg(long, default_value = "")]
        u: String,
        /// Arity of the tuples to inject.
        #[arg(long)]
        k: usize,
    },

    /// Run the built-in verification suite; exit 0 only if every check
    /// passes.
    VerifyPaper {
        /// Run a single check by id (1-12).
        #[arg(long, value_name = "ID")]
        only: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Count { max_n } => {
            count_csv(*max_n);
            Ok(ExitCode::SUCCESS)
        }
        Command::Sphere { k, n, model } => {
            let model = parse_model(model)?;
            let report = json!({
                "k": k,
                "n": n,
                "model": model.to_string(),
                "unordered": sphere_count(*k, *n, model).to_string(),
                "ordered": ordered_count(*k, *n, model).to_string(),
            });
            emit(report, cli.no_meta);
            Ok(ExitCode::SUCCESS)
        }
        Command::DensityS { k, n, model } => {
            let model = parse_model(model)?;
            let report = density_report(*k, *n, model)?;
            emit(report, cli.no_meta);
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { gens, depth } => {
            let elements = load_elements(gens)?;
            let report = certify_report(&elements, *depth);
            emit(report, cli.no_meta);
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment { k, n, model, samples, depth, seed } => {
            let model = parse_model(model)?;
            let report = thompson_f::estimate_generating_fraction(
                *k, *n, model, *samples, *depth, *seed,
            )?;
            emit(serde_json::to_value(&report)?, cli.no_meta);
            Ok(ExitCode::SUCCESS)
        }
        Command::Nat { gens, u, k } => {
            let elements = load_elements(gens)?;
            let root = u.parse().context("--u must be a binary word")?;
            nat_report(&elements, &root, *k)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyPaper { only } => verify(*only),
    }
}

fn parse_model(text: &str) -> Result<Model> {
    text.parse::<Model>().map_err(anyhow::Error::msg)
}

/// Read generators from a file when the argument names one, otherwise parse
/// it as an inline list.
fn load_elements(arg: &str) -> Result<Vec<Element>> {
    let text = if Path::new(arg).is_file() {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    } else {
        arg.to_string()
    };
    let elements = parse_element_list(&text)?;
    anyhow::ensure!(!elements.is_empty(), "no generators given");
    Ok(elements)
}

fn unix_timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .expect("clock after the epoch")
        .as_secs()
}

/// Print a JSON report, attaching `meta.timestamp` unless suppressed. Keys
/// serialize in sorted order, so identical runs are byte-identical.
fn emit(mut value: Value, no_meta: bool) {
    if !no_meta {
        if let Value::Object(ref mut map) = value {
            map.insert("meta".into(), json!({ "timestamp": unix_timestamp() }));
        }
    }
    println!("{}", serde_json::to_string_pretty(&value).expect("report serializes"));
}

fn count_csv(max_n: usize) {
    let inv = mu_interval().recip();
    let inv_mid = (inv.lo() + inv.hi()) / BigRational::from_integer(2.into());
    println!("n,r_n,ratio,mu_inv_gap");
    for n in 0..=max_n {
        let r = r_count(n);
        if n == 0 || r.is_zero() {
            println!("{n},{r},-,-");
            continue;
        }
        let ratio = BigRational::new(r_count(n - 1).into(), r.clone().into());
        let gap = (&ratio - &inv_mid).abs();
        println!(
            "{n},{r},{},{}",
            decimal_string(&ratio, DIGITS),
            decimal_string(&gap, DIGITS)
        );
    }
}

fn density_report(k: usize, n: usize, model: Model) -> Result<Value> {
    let density = density_s(k, n, model)?;
    let envelope = density_envelope(k, n, model);
    let positive = density > BigRational::zero();
    let within = envelope
        .as_ref()
        .map(|(lo, hi)| *lo <= density && density <= *hi);
    Ok(json!({
        "k": k,
        "n": n,
        "model": model.to_string(),
        "density": decimal_string(&density, DIGITS + 6),
        "numerator": density.numer().to_string(),
        "denominator": density.denom().to_string(),
        "envelope": envelope.map(|(lo, hi)| json!({
            "lo": decimal_string(&lo, DIGITS + 6),
            "hi": decimal_string(&hi, DIGITS + 6),
        })),
        "positive": positive,
        "within_envelope": within,
    }))
}

fn certify_report(elements: &[Element], depth: u32) -> Value {
    let gens: Vec<String> = elements.iter().map(|e| e.to_string()).collect();
    match certify_generates_f(elements, depth) {
        Verdict::Generates(witnesses) => {
            let items: Vec<Value> = witnesses
                .items
                .iter()
                .map(|w| {
                    json!({
                        "pair": format!("{} -> {}", w.pair.0, w.pair.1),
                        "word": w.word.to_string_with("g"),
                        "element": w.element.to_string(),
                    })
                })
                .collect();
            json!({
                "gens": gens,
                "depth": depth,
                "verdict": "generates",
                "witnesses": items,
            })
        }
        Verdict::NotGenerating(failure) => json!({
            "gens": gens,
            "depth": depth,
            "verdict": "not-generating",
            "slope_images": failure.images,
            "outside": failure.outside,
        }),
        Verdict::Unknown { depth } => json!({
            "gens": gens,
            "depth": depth,
            "verdict": "unknown",
        }),
    }
}

/// Print the injection plan and exercise its identities on seeded tuples.
fn nat_report(gens: &[Element], u: &thompson_f::BinaryWord, k: usize) -> Result<()> {
    let plan = nat_plan(gens, u, k)?;
    println!("{plan}");

    const TUPLES: usize = 20;
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let mut checked = 0usize;
    for _ in 0..TUPLES {
        let members: Vec<Element> = (0..k)
            .map(|_| {
                // nontrivial members: the size laws below are sharp for them
                let size = 2 + (checked + 2) % 7;
                sample_element(size, &mut rng).expect("size class nonempty")
            })
            .collect();
        let tuple = KTuple::new(members);
        let image = nat_map(&plan, &tuple);
        anyhow::ensure!(
            image.sum_size() == tuple.sum_size() + plan.c1,
            "sum size must shift by {}",
            plan.c1
        );
        anyhow::ensure!(
            image.max_size() == tuple.members()[0].size() + plan.c2,
            "max size must land on |f1| + {}",
            plan.c2
        );
        let back = invert_nat_map(&plan, &image)?;
        anyhow::ensure!(back == tuple, "recovery must return the original tuple");
        checked += 1;
    }
    println!(
        "checks over {TUPLES} seeded random {k}-tuples (nontrivial members): \
         sum sizes shift by {}, max sizes land on |f1| + {}, recovery returns \
         every original tuple",
        plan.c1, plan.c2
    );
    Ok(())
}

fn verify(only: Option<usize>) -> Result<ExitCode> {
    let ids: Vec<usize> = match only {
        Some(id) => {
            anyhow::ensure!((1..=12).contains(&id), "check ids run from 1 to 12");
            vec![id]
        }
        None => (1..=12).collect(),
    };
    let mut failed = 0usize;
    for id in &ids {
        let report = verification::criterion(*id);
        println!(
            "[{:>2}] {:<45} {}",
            report.id,
            report.label,
            if report.passed { "PASS" } else { "FAIL" }
        );
        println!("     {}", report.detail);
        if !report.passed {
            failed += 1;
        }
    }
    println!(
        "{} checks: {} passed, {} failed",
        ids.len(),
        ids.len() - failed,
        failed
    );
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
