mod spec;

use clap::{Args, Parser, Subcommand};
use macpolar::channels::{DiscreteBimc, DEFAULT_BINS};
use macpolar::compound::{compound_rate_table, table_csv};
use macpolar::construction::{genie_error_estimates, region_sweep, select_frozen_sets, simulate_fer, DEFAULT_SPLITS};
use macpolar::mac_polar::{block_rates, enumerate_monotone_orders, MacPolarCode, User};
use macpolar::report::fmt_sig;
use macpolar::verification::{
    verify_chain_rules, verify_channel_split, verify_recursion_split, verify_sty_identities, LemmaReport,
};
use macpolar::{Error, Result};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use spec::{parse_order, parse_orders, ChannelSpec};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "macpolar", version, about = "Polar codes for two-user binary-input MACs")]
struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, env = "MACPOLAR_SEED", default_value_t = 1)]
    seed: u64,

    /// Worker threads for trial loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity region and building-block rates as JSON.
    Info(InfoArgs),
    /// Build a code by genie-aided simulation.
    Construct(ConstructArgs),
    /// Frame error rates of a code file.
    Simulate(SimulateArgs),
    /// Achievable rate pairs over orders and budget splits.
    Region(RegionArgs),
    /// Compound and separate single-user rates.
    Compound(CompoundArgs),
    /// Exact checks of the polarization identities.
    Verify(VerifyArgs),
}

#[derive(Args, Serialize)]
struct InfoArgs {
    #[arg(long)]
    channel: String,
    /// Quantizer bins for Gaussian channels.
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    /// Building-block size.
    #[arg(long = "L", default_value_t = 2)]
    l: usize,
}

#[derive(Args, Serialize)]
struct ConstructArgs {
    #[arg(long)]
    channel: String,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, default_value = "U1,U2,V1,V2")]
    order: String,
    #[arg(long, default_value_t = 5e-3)]
    budget1: f64,
    #[arg(long, default_value_t = 5e-3)]
    budget2: f64,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Code JSON; stdout when absent.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
    /// Slot-estimate CSV.
    #[arg(long)]
    #[serde(skip)]
    slots: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    #[arg(long)]
    channel: String,
    #[arg(long)]
    #[serde(skip)]
    code: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    frames: u64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
    /// Hash of the code file contents, filled in after reading.
    #[arg(skip)]
    code_sha: String,
}

#[derive(Args, Serialize)]
struct RegionArgs {
    #[arg(long)]
    channel: String,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, default_value = "all-monotone:2")]
    orders: String,
    /// Total budget, split between the users.
    #[arg(long, default_value_t = 1e-2)]
    budget: f64,
    #[arg(long, default_value_t = DEFAULT_SPLITS)]
    splits: usize,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CompoundArgs {
    #[arg(long)]
    channel: String,
    /// Per-user block lengths.
    #[arg(long = "N", value_delimiter = ',', default_value = "512")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 5e-3)]
    budget: f64,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    channel: String,
    /// Comma-separated subset of split, chain, sty; or all.
    #[arg(long, default_value = "all")]
    lemmas: String,
    #[arg(long, default_value_t = 3)]
    n_max: u32,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Quantizer bins for Gaussian channels.
    #[arg(long, default_value_t = 8)]
    bins: usize,
}

/// Seed and config hash stamped on every output.
struct Stamp {
    seed: u64,
    config: String,
}

impl Stamp {
    fn new(command: &str, args: &impl Serialize, seed: u64) -> Self {
        let text = serde_json::to_string(&json!({ "command": command, "args": args, "seed": seed }))
            .expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        Stamp { seed, config: hex::encode(&digest[..8]) }
    }

    fn line(&self) -> String {
        format!("# macpolar {VERSION} seed={} config={}", self.seed, self.config)
    }

    fn json(&self) -> serde_json::Value {
        json!({ "tool": "macpolar", "version": VERSION, "seed": self.seed, "config": self.config })
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_len(n: usize, l: usize) -> Result<()> {
    if !n.is_power_of_two() || n < l {
        return Err(Error::InvalidArgument(format!("N = {n} must be a power of two at least L = {l}")));
    }
    Ok(())
}

fn check_budget(b: f64) -> Result<()> {
    if !(b >= 0.0 && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("budget {b} must be nonnegative")));
    }
    Ok(())
}

fn check_trials(t: u64) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    Ok(())
}

fn info(a: &InfoArgs, stamp: &Stamp) -> Result<()> {
    let ch = ChannelSpec::parse(&a.channel)?;
    let w = ch.discrete(a.bins)?;
    let verts = w.region_vertices();
    let blocks = (1..=a.l + 1).map(|i| block_rates(&w, a.l, i)).collect::<Result<Vec<_>>>()?;
    let doc = json!({
        "provenance": stamp.json(),
        "channel": a.channel,
        "bins": a.bins,
        "sum_rate": verts.sum_rate,
        "i_u_given_v": w.user1_information(),
        "i_v_given_u": w.user2_information(),
        "i_u": verts.a_point.r1,
        "i_v": verts.b_point.r2,
        "region": verts,
        "block_rates": blocks,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn construct(a: &ConstructArgs, stamp: &Stamp) -> Result<()> {
    let ch = ChannelSpec::parse(&a.channel)?;
    let order = parse_order(&a.order)?;
    check_len(a.n, order.l())?;
    check_budget(a.budget1)?;
    check_budget(a.budget2)?;
    check_trials(a.trials)?;
    let est = genie_error_estimates(a.n, &order, &ch.model(), a.trials, stamp.seed)?;
    let sel = select_frozen_sets(&est, a.budget1, a.budget2)?;
    let mut doc: serde_json::Value = serde_json::from_str(&sel.code.to_json()?)?;
    doc["provenance"] = stamp.json();
    doc["union_bound"] = json!([sel.p1, sel.p2]);
    emit(a.out.as_deref(), &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    if let Some(p) = &a.slots {
        std::fs::write(p, format!("{}\n{}", stamp.line(), est.to_csv()))?;
    }
    let (r1, r2) = sel.rates();
    eprintln!("R1={} R2={} P1<={} P2<={}", fmt_sig(r1, 6), fmt_sig(r2, 6), fmt_sig(sel.p1, 6), fmt_sig(sel.p2, 6));
    Ok(())
}

fn simulate(a: &SimulateArgs, stamp: &Stamp) -> Result<()> {
    let ch = ChannelSpec::parse(&a.channel)?;
    let code = MacPolarCode::read(&a.code)?;
    check_trials(a.frames)?;
    let rep = simulate_fer(&code, &ch.model(), a.frames, stamp.seed)?;
    let mut out = format!("{}\nuser,rate,frames,errors,fer,ci_low,ci_high\n", stamp.line());
    for (name, user, errors) in [
        ("1", Some(User::One), rep.errors1),
        ("2", Some(User::Two), rep.errors2),
        ("any", None, rep.errors_any),
    ] {
        let rate = user.map_or(code.rate(User::One) + code.rate(User::Two), |u| code.rate(u));
        let (lo, hi) = rep.interval(user);
        out += &format!(
            "{name},{},{},{errors},{},{},{}\n",
            fmt_sig(rate, 6),
            rep.frames,
            fmt_sig(rep.fer(user), 6),
            fmt_sig(lo, 6),
            fmt_sig(hi, 6)
        );
    }
    emit(a.out.as_deref(), &out)
}

fn region(a: &RegionArgs, stamp: &Stamp) -> Result<()> {
    let ch = ChannelSpec::parse(&a.channel)?;
    let orders = parse_orders(&a.orders)?;
    for o in &orders {
        check_len(a.n, o.l())?;
    }
    check_budget(a.budget)?;
    check_trials(a.trials)?;
    if a.splits < 1 {
        return Err(Error::InvalidArgument("splits must be at least 1".into()));
    }
    let rep = region_sweep(a.n, &ch.model(), &orders, a.budget, a.splits, a.trials, stamp.seed)?;
    let names: Vec<String> = orders.iter().enumerate().map(|(k, o)| format!("{k}={o}")).collect();
    let text = format!("{} orders={}\n{}", stamp.line(), names.join(";"), rep.to_csv());
    emit(a.out.as_deref(), &text)
}

fn compound(a: &CompoundArgs, stamp: &Stamp) -> Result<()> {
    let ch = ChannelSpec::parse(&a.channel)?;
    for &n in &a.n {
        check_len(n, 1)?;
    }
    check_budget(a.budget)?;
    check_trials(a.trials)?;
    let rows = compound_rate_table(&a.n, &ch.model(), a.budget, a.trials, stamp.seed)?;
    emit(a.out.as_deref(), &format!("{}\n{}", stamp.line(), table_csv(&rows)))
}

#[derive(Clone, Copy, PartialEq)]
enum Lemma {
    Split,
    Chain,
    Sty,
}

fn parse_lemmas(s: &str) -> Result<Vec<Lemma>> {
    let mut v = Vec::new();
    for part in s.split(',') {
        match part.trim() {
            "all" => v.extend([Lemma::Split, Lemma::Chain, Lemma::Sty]),
            "split" => v.push(Lemma::Split),
            "chain" => v.push(Lemma::Chain),
            "sty" => v.push(Lemma::Sty),
            other => return Err(Error::InvalidArgument(format!("unknown lemma `{other}`"))),
        }
    }
    v.dedup();
    Ok(v)
}

fn verify(a: &VerifyArgs, stamp: &Stamp) -> Result<bool> {
    let ch = ChannelSpec::parse(&a.channel)?;
    let lemmas = parse_lemmas(&a.lemmas)?;
    if a.tol.is_nan() || a.tol < 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance {} must be nonnegative", a.tol)));
    }
    let w = ch.discrete(a.bins)?;
    let mut reports: Vec<LemmaReport> = Vec::new();
    if lemmas.contains(&Lemma::Split) {
        let mut split = LemmaReport::new("channel-split", a.tol);
        let mut rec = LemmaReport::new("recursion-split", a.tol);
        for order in enumerate_monotone_orders(2)? {
            split.merge(&verify_channel_split(&w, &order, a.n_max, a.tol)?);
            rec.merge(&verify_recursion_split(&w, &order, a.n_max, a.tol)?);
        }
        reports.extend([split, rec]);
    }
    if lemmas.contains(&Lemma::Chain) {
        for l in [2, 4] {
            for mut r in verify_chain_rules(&w, l, a.tol)? {
                r.id = format!("{}/L={l}", r.id);
                reports.push(r);
            }
        }
    }
    if lemmas.contains(&Lemma::Sty) {
        let singles: Vec<(String, DiscreteBimc)> = match &ch {
            ChannelSpec::Sty(wp) => vec![(a.channel.clone(), wp.clone())],
            _ => vec![("bec=0.5".into(), DiscreteBimc::bec(0.5)?), ("bsc=0.11".into(), DiscreteBimc::bsc(0.11)?)],
        };
        for (name, wp) in singles {
            let mut r = verify_sty_identities(&wp, a.n_max, a.tol)?;
            r.id = format!("{}/{}", r.id, name.trim_start_matches("sty:"));
            reports.push(r);
        }
    }
    println!("{}", stamp.line());
    for r in &reports {
        println!("{r}");
    }
    Ok(reports.iter().all(|r| r.pass))
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Error::InvalidArgument("threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let seed = cli.seed;
    match cli.command {
        Command::Info(a) => info(&a, &Stamp::new("info", &a, seed)).map(|_| true),
        Command::Construct(a) => construct(&a, &Stamp::new("construct", &a, seed)).map(|_| true),
        Command::Simulate(mut a) => {
            a.code_sha = hex::encode(Sha256::digest(std::fs::read(&a.code)?));
            simulate(&a, &Stamp::new("simulate", &a, seed)).map(|_| true)
        }
        Command::Region(a) => region(&a, &Stamp::new("region", &a, seed)).map(|_| true),
        Command::Compound(a) => compound(&a, &Stamp::new("compound", &a, seed)).map(|_| true),
        Command::Verify(a) => verify(&a, &Stamp::new("verify", &a, seed)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
