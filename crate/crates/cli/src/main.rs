//! `stratrep`: solve games, export strategies as datasets, learn and check
//! decision trees, and compare the three learners.
//!
//! Exit codes: 0 success, 2 invalid input, 3 a tree misclassifies a sample,
//! 4 the objective cannot be won from the initial state.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use stratrep::game::{solve, two_channel_game, verify_strategy_from, ObjectiveKind};
use stratrep::split::SplitProcedure;
use stratrep::tree::{learn, path_bound};
use stratrep::{dataset, Algorithm, Dataset, DecisionTree, Game, Player, VariableSchema};

const EXIT_INVALID: u8 = 2;
const EXIT_COUNTEREXAMPLE: u8 = 3;
const EXIT_LOSING: u8 = 4;

#[derive(Parser)]
#[command(name = "stratrep", version, about = "Exact decision-tree representations of game strategies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a game file or a random dataset.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Solve a game and export the winning strategy as a dataset CSV.
    Solve {
        game: PathBuf,
        /// Defaults to the objective stored in the game file.
        objective: Option<ObjectiveArg>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        player: u8,
        #[arg(long)]
        out: PathBuf,
    },
    /// Learn a decision tree that classifies every sample correctly.
    Learn {
        dataset: PathBuf,
        #[arg(long, value_enum)]
        algorithm: AlgorithmArg,
        /// Must agree with the algorithm; accepted for explicitness.
        #[arg(long, value_enum)]
        split: Option<SplitArg>,
        /// Discount AUC scores of variables already tested on the path.
        #[arg(long)]
        penalize_repeats: bool,
        #[arg(long)]
        out: PathBuf,
        /// Also write a Graphviz rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check that a tree classifies every sample of a dataset correctly.
    Verify { tree: PathBuf, dataset: PathBuf },
    /// Learn with all three algorithms and tabulate tree sizes.
    Compare {
        /// A dataset CSV or a directory of them.
        path: PathBuf,
        #[arg(long)]
        penalize_repeats: bool,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// The two-channel request/response controller game.
    TwoChannel {
        cap_a: u64,
        cap_b: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// A reproducible random labelled dataset.
    RandomDataset {
        #[arg(long, default_value_t = 3)]
        arity: usize,
        #[arg(long, default_value_t = 50)]
        size: usize,
        #[arg(long, default_value_t = 9)]
        max_value: u64,
        /// Probability that a vector is labelled Good.
        #[arg(long, default_value_t = 0.5)]
        good: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Safety,
    Reachability,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Basic,
    LcEntropy,
    LcAuc,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Basic => Algorithm::Basic,
            AlgorithmArg::LcEntropy => Algorithm::LcEntropy,
            AlgorithmArg::LcAuc => Algorithm::LcAuc,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitArg {
    Entropy,
    Auc,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Gen(GenCommand::TwoChannel { cap_a, cap_b, out }) => {
            let (game, objective) = two_channel_game(cap_a, cap_b)?;
            game.save(Some(&objective), &out).with_context(|| format!("writing {}", out.display()))?;
            Ok(0)
        }
        Command::Gen(GenCommand::RandomDataset { arity, size, max_value, good, seed, out }) => {
            if arity == 0 || size == 0 {
                bail!("arity and size must be positive");
            }
            if !(0.0..=1.0).contains(&good) {
                bail!("--good must lie in [0, 1]");
            }
            let d = Dataset::random(VariableSchema::anonymous(arity), size, max_value, good, seed);
            d.save(&out).with_context(|| format!("writing {}", out.display()))?;
            Ok(0)
        }
        Command::Solve { game, objective, player, out } => cmd_solve(&game, objective, player, &out),
        Command::Learn { dataset, algorithm, split, penalize_repeats, out, dot } => {
            cmd_learn(&dataset, algorithm.into(), split, penalize_repeats, &out, dot.as_deref())
        }
        Command::Verify { tree, dataset } => cmd_verify(&tree, &dataset),
        Command::Compare { path, penalize_repeats, out } => cmd_compare(&path, penalize_repeats, out.as_deref()),
    }
}

fn cmd_solve(path: &Path, requested: Option<ObjectiveArg>, player: u8, out: &Path) -> Result<u8> {
    let (game, stored) = Game::load(path).with_context(|| format!("loading {}", path.display()))?;
    let Some(objective) = stored else {
        bail!("{} declares no objective", path.display());
    };
    if let Some(r) = requested {
        let kind = match r {
            ObjectiveArg::Safety => ObjectiveKind::Safety,
            ObjectiveArg::Reachability => ObjectiveKind::Reachability,
        };
        if kind != objective.kind {
            bail!("requested {} but {} declares a {} objective", kind.as_str(), path.display(), objective.kind.as_str());
        }
    }
    let player = Player::from_number(player).expect("clap restricts --player to 1 or 2");
    let solution = solve(&game, &objective, player)?;
    let winning: Vec<usize> = solution.winning.iter().copied().collect();
    if !verify_strategy_from(&game, &objective, &solution.strategy, &winning) {
        bail!("internal error: solver strategy failed verification");
    }

    // Losing states get an arbitrary (lowest-index) action so the exported
    // strategy covers all of the player's states; nothing is exported when
    // the player wins nowhere.
    let strategy = if winning.is_empty() {
        solution.strategy.clone()
    } else {
        solution.strategy.completed(&game)
    };
    let data = dataset::from_strategy(&game, &strategy, player)?;
    data.save(out).with_context(|| format!("writing {}", out.display()))?;

    let ids: Vec<&str> = winning.iter().map(|&s| game.states()[s].id.as_str()).collect();
    println!("winning ({}): {}", ids.len(), ids.join(" "));
    println!("dataset: {} rows, {} good -> {}", data.len(), data.n_good(), out.display());
    if winning.is_empty() {
        eprintln!("warning: winning set is empty; wrote an empty dataset");
    }
    let losing = match game.initial() {
        Some(i) => !solution.winning.contains(&i),
        None => winning.is_empty(),
    };
    if losing {
        eprintln!("objective cannot be won from the initial state");
        return Ok(EXIT_LOSING);
    }
    Ok(0)
}

fn check_split(algorithm: Algorithm, split: Option<SplitArg>) -> Result<()> {
    let expected = algorithm.split_procedure();
    let given = match split {
        None => return Ok(()),
        Some(SplitArg::Entropy) => SplitProcedure::InfoGain,
        Some(SplitArg::Auc) => SplitProcedure::Auc,
    };
    if given != expected {
        bail!("--split does not match --algorithm {algorithm} (basic and lc-entropy use entropy, lc-auc uses auc)");
    }
    Ok(())
}

fn cmd_learn(
    path: &Path,
    algorithm: Algorithm,
    split: Option<SplitArg>,
    penalize_repeats: bool,
    out: &Path,
    dot: Option<&Path>,
) -> Result<u8> {
    check_split(algorithm, split)?;
    let data = Dataset::load(path).with_context(|| format!("loading {}", path.display()))?;
    let (tree, report) = learn(&data, algorithm, penalize_repeats)?;
    if let Some((x, good)) = tree.first_counterexample(&data) {
        eprintln!("internal error: learned tree misclassifies {x:?} (expected {})", if good { "yes" } else { "no" });
        return Ok(EXIT_COUNTEREXAMPLE);
    }
    tree.save(out).with_context(|| format!("writing {}", out.display()))?;
    if let Some(dot) = dot {
        fs::write(dot, tree.to_dot()).with_context(|| format!("writing {}", dot.display()))?;
    }
    println!(
        "algorithm={} tag={} nonpure={} depth={} samples={} time_ms={:.3}",
        algorithm,
        report.tag.map_or("none", |t| t.as_str()),
        report.nonpure_nodes,
        report.depth,
        data.len(),
        report.elapsed.as_secs_f64() * 1e3,
    );
    Ok(0)
}

fn cmd_verify(tree_path: &Path, data_path: &Path) -> Result<u8> {
    let tree = DecisionTree::load(tree_path).with_context(|| format!("loading {}", tree_path.display()))?;
    let data = Dataset::load(data_path).with_context(|| format!("loading {}", data_path.display()))?;
    if tree.arity() != data.arity() {
        bail!("tree has arity {} but the dataset has arity {}", tree.arity(), data.arity());
    }
    match tree.first_counterexample(&data) {
        None => {
            println!("exact: {} samples ({} good)", data.len(), data.n_good());
            Ok(0)
        }
        Some((x, good)) => {
            let row: Vec<String> = x.iter().map(u64::to_string).collect();
            let (want, got) = if good { ("yes", "no") } else { ("no", "yes") };
            println!("counterexample: {} expected {want} got {got}", row.join(","));
            Ok(EXIT_COUNTEREXAMPLE)
        }
    }
}

/// Dataset files to compare, sorted by path.
fn collect_inputs(path: &Path) -> Result<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files = Vec::new();
    for entry in fs::read_dir(path).with_context(|| format!("reading {}", path.display()))? {
        let p = entry?.path();
        if p.is_file() && p.extension().is_some_and(|e| e == "csv") {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

struct Row {
    name: String,
    samples: usize,
    sizes: [usize; 3],
}

fn compare_one(path: &Path, penalize_repeats: bool) -> Result<Row> {
    let data = Dataset::load(path)?;
    let bound = path_bound(&data);
    let mut sizes = [0; 3];
    for (k, algorithm) in Algorithm::ALL.into_iter().enumerate() {
        let (tree, report) = learn(&data, algorithm, penalize_repeats)?;
        if !tree.verify_exact(&data) {
            bail!("{algorithm} tree is not exact");
        }
        if let Err(e) = tree.check_structure(bound) {
            bail!("{algorithm} tree: {e}");
        }
        sizes[k] = report.nonpure_nodes;
    }
    Ok(Row { name: path.display().to_string(), samples: data.len(), sizes })
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |r| format!("{r:.4}"))
}

/// Arithmetic, geometric and harmonic mean; the latter two need positive values.
fn means(values: &[f64]) -> [Option<f64>; 3] {
    if values.is_empty() {
        return [None; 3];
    }
    let n = values.len() as f64;
    let arith = values.iter().sum::<f64>() / n;
    let positive = values.iter().all(|&v| v > 0.0);
    let geo = positive.then(|| (values.iter().map(|v| v.ln()).sum::<f64>() / n).exp());
    let harm = positive.then(|| n / values.iter().map(|v| 1.0 / v).sum::<f64>());
    [Some(arith), geo, harm]
}

fn cmd_compare(path: &Path, penalize_repeats: bool, out: Option<&Path>) -> Result<u8> {
    let inputs = collect_inputs(path)?;
    let mut table = String::from("dataset,samples,star,dagger,ddagger,dagger/star,ddagger/star\n");
    let (mut r_dagger, mut r_ddagger) = (Vec::new(), Vec::new());
    let mut failed = false;
    for input in &inputs {
        match compare_one(input, penalize_repeats) {
            Ok(row) => {
                let [star, dagger, ddagger] = row.sizes;
                let (a, b) = (ratio(dagger, star), ratio(ddagger, star));
                r_dagger.extend(a);
                r_ddagger.extend(b);
                table.push_str(&format!(
                    "{},{},{star},{dagger},{ddagger},{},{}\n",
                    row.name,
                    row.samples,
                    fmt_opt(a),
                    fmt_opt(b)
                ));
            }
            Err(e) => {
                eprintln!("error: {}: {e:#}", input.display());
                failed = true;
            }
        }
    }
    let [da, dg, dh] = means(&r_dagger);
    let [ma, mg, mh] = means(&r_ddagger);
    table.push_str(&format!("# dagger/star mean: arithmetic={} geometric={} harmonic={}\n", fmt_opt(da), fmt_opt(dg), fmt_opt(dh)));
    table.push_str(&format!("# ddagger/star mean: arithmetic={} geometric={} harmonic={}\n", fmt_opt(ma), fmt_opt(mg), fmt_opt(mh)));
    match out {
        Some(p) => fs::write(p, &table).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{table}"),
    }
    Ok(if failed { EXIT_INVALID } else { 0 })
}
