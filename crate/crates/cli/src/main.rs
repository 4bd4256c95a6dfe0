use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use fibhash::approx::{build_pseudogroup, load_pseudogroup, save_pseudogroup, SearchMode};
use fibhash::bench::histogram::{histogram, histogram_csv};
use fibhash::bench::{bf_baseline, run_trials, wigner_dyson_test};
use fibhash::groups::GroupKind;
use fibhash::hash::{HashConfig, Hasher, Mesh};
use fibhash::su2::{fmt_f64, named_gate, Gate};
use fibhash::weave::{count_weaves, count_weaves_closed_form, count_weaves_upto};

#[derive(Parser)]
#[command(name = "fibhash", version, about = "Compile SU(2) gates into Fibonacci-anyon weaves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number of canonical weaves of length exactly L and up to L.
    CountWeaves {
        #[arg(long = "L")]
        len: u32,
    },
    /// Approximate every element of a finite group by weaves of length ≤ L.
    BuildPseudogroup {
        #[arg(long)]
        group: GroupKind,
        #[arg(long = "L")]
        len: u32,
        #[arg(long, default_value = "exhaustive")]
        mode: SearchMode,
        #[arg(long)]
        out: PathBuf,
    },
    /// Hash one target gate.
    Hash {
        /// Eight floats (row-major re/im pairs) or `named:<I|X|Y|Z|iY|H>`.
        #[arg(long, num_args = 1..=8, allow_negative_numbers = true)]
        target: Vec<String>,
        #[arg(long)]
        config: PathBuf,
    },
    /// Hash Haar-random targets and write statistics.
    Trials {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Distance statistics of the mesh S(L, n) of a pseudogroup.
    MeshStats {
        #[arg(long)]
        pseudogroup: PathBuf,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate the brute-force baseline model for length L.
    BfBaseline {
        #[arg(long = "L")]
        len: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_target(parts: &[String]) -> Result<Gate> {
    let joined = parts.join(" ");
    if let Some(name) = joined.strip_prefix("named:") {
        return named_gate(name.trim()).ok_or_else(|| anyhow!("unknown gate `{name}`"));
    }
    Ok(joined.replace(',', " ").parse()?)
}

/// Every 1/k-th item, so that about `target` remain.
fn subsample(xs: &[f64], target: usize) -> Vec<f64> {
    let stride = (xs.len() / target).max(1);
    xs.iter().step_by(stride).copied().collect()
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::CountWeaves { len } => {
            println!("L={len}");
            println!("exact={}", count_weaves(len)?);
            println!("upto={}", count_weaves_upto(len)?);
            if len >= 2 {
                println!("closed_form={}", fmt_f64(count_weaves_closed_form(len)));
            }
        }
        Command::BuildPseudogroup { group, len, mode, out } => {
            let g = group.build()?;
            let p = build_pseudogroup(&g, len, mode)?;
            save_pseudogroup(&p, &out).with_context(|| format!("writing {}", out.display()))?;
            println!("group={}", p.group_name());
            println!("L={}", p.length());
            println!("mean_error={}", fmt_f64(p.mean_error()));
            println!("min_error={}", fmt_f64(p.min_error()));
            println!("max_error={}", fmt_f64(p.max_error()));
            println!("complete={}", p.is_complete());
        }
        Command::Hash { target, config } => {
            let t = parse_target(&target)?;
            let cfg = HashConfig::load(&config).with_context(|| format!("reading {}", config.display()))?;
            let r = Hasher::new(&cfg)?.hash(&t);
            print!("{}", r.to_text());
            println!();
            print!("{}", r.to_key_values());
        }
        Command::Trials {
            config,
            count,
            seed,
            out,
        } => {
            let cfg = HashConfig::load(&config).with_context(|| format!("reading {}", config.display()))?;
            let hasher = Hasher::new(&cfg)?;
            let report = run_trials(&hasher, count, seed)?;
            report.write_dir(&out)?;
            print!("{}", report.summary_text());
        }
        Command::MeshStats { pseudogroup, n, out } => {
            let p = load_pseudogroup(&pseudogroup).with_context(|| format!("reading {}", pseudogroup.display()))?;
            let g = p.group().build()?;
            let mesh = Mesh::build(&p, &g, n)?;
            let d = mesh.distances();
            std::fs::write(&out, histogram_csv(&histogram(&d)))?;
            let wd = wigner_dyson_test(&subsample(&d, 10_000))?;
            let mut s = String::new();
            writeln!(s, "items={}", mesh.len())?;
            writeln!(s, "s0={}", fmt_f64(mesh.s0()))?;
            writeln!(s, "pseudogroup_mean={}", fmt_f64(p.mean_error()))?;
            writeln!(s, "wd_s0={}", fmt_f64(wd.s0))?;
            writeln!(s, "wd_ks={}", fmt_f64(wd.ks))?;
            writeln!(s, "wd_p_value={}", fmt_f64(wd.p_value))?;
            writeln!(s, "wd_pass={}", wd.pass)?;
            print!("{s}");
        }
        Command::BfBaseline { len, out } => {
            let m = bf_baseline(len)?;
            let mean = m.mean();
            let hi = (mean * 20.0).min(std::f64::consts::SQRT_2);
            let lo = mean / 100.0;
            if !(lo > 0.0 && hi > lo) {
                bail!("degenerate baseline range");
            }
            let points = 200;
            let mut csv = String::from("t,p,cdf,survival,q\n");
            for k in 0..=points {
                let t = lo * (hi / lo).powf(k as f64 / points as f64);
                writeln!(
                    csv,
                    "{},{},{},{},{}",
                    fmt_f64(t),
                    fmt_f64(m.p(t)),
                    fmt_f64(m.cdf(t)),
                    fmt_f64(m.survival(t)),
                    fmt_f64(m.q(t))
                )?;
            }
            std::fs::write(&out, csv)?;
            println!("L={len}");
            println!("N={}", m.n);
            println!("mean={}", fmt_f64(mean));
            println!("asymptotic_mean={}", fmt_f64(m.asymptotic_mean()));
        }
    }
    Ok(())
}
