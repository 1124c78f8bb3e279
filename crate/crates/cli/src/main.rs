use clap::{Parser, Subcommand};
use fanmaj::alignment_lp::{alignment_table, alignment_term, staggered_bound, u_k};
use fanmaj::majorization::s_k;
use fanmaj::spectral::eigh;
use fanmaj::tensor::{check_one_sided_counterexample, check_separable_fan, indefinite_counterexample};
use fanmaj_cli::campaign::{run_campaign, CampaignConfig, Task};
use fanmaj_cli::io::{load_matrix, Json};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fanmaj",
    about = "Eigenvalue-sum majorization bounds: LP refinements, diagonal tightness, tensor-product checks"
)]
struct Cli {
    /// Numerical tolerance for verdicts
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,

    /// Seed for randomized commands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sum of the k largest eigenvalues of a Hermitian matrix
    Sk {
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// LP upper bound u_k on s_k(A1 + A2), with the classical sandwich
    Ukbound {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        k: usize,
        /// Write the alignment table to this path as JSON
        #[arg(long)]
        table_out: Option<PathBuf>,
    },
    /// The d x d alignment-term table for a pair at a fixed k
    Alignment {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Closed-form staggered bound from the alignment term at (l1, l2)
    Staggered {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l1: usize,
        #[arg(long)]
        l2: usize,
    },
    /// Random diagonal pairs: check the LP bound is exactly s_k(D1 + D2)
    DiagTight {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![3, 4, 5, 6, 7, 8])]
        dims: Vec<usize>,
    },
    /// Aligned sum of two PSD tensor products majorizes the original sum
    SepFan {
        b1: PathBuf,
        c1: PathBuf,
        b2: PathBuf,
        c2: PathBuf,
    },
    /// Random two-letter spin alignment checks
    SpinAlign2 {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        dim: usize,
    },
    /// Print the two fixed counterexamples and verify their numbers
    Counterexamples,
    /// Run a batch verification campaign from a JSON config
    Campaign {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

const PASS: ExitCode = ExitCode::SUCCESS;

fn violation_code() -> ExitCode {
    ExitCode::from(1)
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.cmd {
        Cmd::Sk { file, k } => cmd_sk(cli, file, *k),
        Cmd::Ukbound {
            file1,
            file2,
            k,
            table_out,
        } => cmd_ukbound(cli, file1, file2, *k, table_out.as_deref()),
        Cmd::Alignment { file1, file2, k } => cmd_alignment(cli, file1, file2, *k),
        Cmd::Staggered {
            file1,
            file2,
            k,
            l1,
            l2,
        } => cmd_staggered(cli, file1, file2, *k, *l1, *l2),
        Cmd::DiagTight { trials, dims } => campaign_cmd(cli, Task::DiagTight, *trials, dims.clone()),
        Cmd::SepFan { b1, c1, b2, c2 } => cmd_sep_fan(cli, b1, c1, b2, c2),
        Cmd::SpinAlign2 { trials, dim } => campaign_cmd(cli, Task::SpinAlign2, *trials, vec![*dim]),
        Cmd::Counterexamples => cmd_counterexamples(cli),
        Cmd::Campaign { config } => cmd_campaign(config),
    }
}

fn cmd_sk(cli: &Cli, file: &std::path::Path, k: usize) -> Result<ExitCode, String> {
    let h = load_matrix(file)?;
    let dec = eigh(&h).map_err(|e| e.to_string())?;
    let value = s_k(dec.eigenvalues(), k).map_err(|e| e.to_string())?;
    if cli.json {
        let out = Json::Object(vec![
            ("d".into(), Json::Int(h.dim() as i64)),
            ("k".into(), Json::Int(k as i64)),
            ("s_k".into(), Json::Float(value)),
            ("spectrum".into(), Json::floats(dec.eigenvalues())),
        ]);
        println!("{}", out.render());
    } else {
        println!("s_{k} = {value}");
    }
    Ok(PASS)
}

fn cmd_ukbound(
    cli: &Cli,
    file1: &std::path::Path,
    file2: &std::path::Path,
    k: usize,
    table_out: Option<&std::path::Path>,
) -> Result<ExitCode, String> {
    let a1 = load_matrix(file1)?;
    let a2 = load_matrix(file2)?;
    let sol = u_k(&a1, &a2, k).map_err(|e| e.to_string())?;
    let dec1 = eigh(&a1).map_err(|e| e.to_string())?;
    let dec2 = eigh(&a2).map_err(|e| e.to_string())?;
    let sum_dec = eigh(&a1.add(&a2)).map_err(|e| e.to_string())?;
    let lower = s_k(sum_dec.eigenvalues(), k).map_err(|e| e.to_string())?;
    let upper = s_k(dec1.eigenvalues(), k).map_err(|e| e.to_string())?
        + s_k(dec2.eigenvalues(), k).map_err(|e| e.to_string())?;
    if let Some(path) = table_out {
        let table = alignment_table(&dec1, &dec2, k).map_err(|e| e.to_string())?;
        std::fs::write(path, render_table(&table))
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    let sandwich_ok = sol.value >= lower - cli.tol && sol.value <= upper + cli.tol;
    if cli.json {
        let out = Json::Object(vec![
            ("k".into(), Json::Int(k as i64)),
            ("u_k".into(), Json::Float(sol.value)),
            ("s_k_sum".into(), Json::Float(lower)),
            ("fan_bound".into(), Json::Float(upper)),
            ("lp_gap".into(), Json::Float(sol.value - lower)),
            ("vertex_is_integral".into(), Json::Bool(sol.vertex_is_integral)),
            ("point".into(), Json::floats(&sol.point)),
            ("sandwich_ok".into(), Json::Bool(sandwich_ok)),
        ]);
        println!("{}", out.render());
    } else {
        println!("u_{k} = {}", sol.value);
        println!("s_{k}(A1+A2) = {lower}");
        println!("s_{k}(A1)+s_{k}(A2) = {upper}");
        println!("lp gap = {}", sol.value - lower);
        println!("integral vertex: {}", sol.vertex_is_integral);
    }
    Ok(if sandwich_ok { PASS } else { violation_code() })
}

fn render_table(table: &fanmaj::AlignmentTable) -> String {
    let d = table.d();
    let rows: Vec<Json> = (1..=d)
        .map(|l1| Json::floats(&(1..=d).map(|l2| table.get(l1, l2)).collect::<Vec<_>>()))
        .collect();
    let mut s = Json::Object(vec![
        ("d".into(), Json::Int(d as i64)),
        ("k".into(), Json::Int(table.k() as i64)),
        ("alpha".into(), Json::Array(rows)),
    ])
    .render();
    s.push('\n');
    s
}

fn cmd_alignment(
    cli: &Cli,
    file1: &std::path::Path,
    file2: &std::path::Path,
    k: usize,
) -> Result<ExitCode, String> {
    let a1 = load_matrix(file1)?;
    let a2 = load_matrix(file2)?;
    let dec1 = eigh(&a1).map_err(|e| e.to_string())?;
    let dec2 = eigh(&a2).map_err(|e| e.to_string())?;
    let table = alignment_table(&dec1, &dec2, k).map_err(|e| e.to_string())?;
    if cli.json {
        print!("{}", render_table(&table));
    } else {
        let d = table.d();
        println!("alignment terms, k = {k}:");
        for l1 in 1..=d {
            let row: Vec<String> = (1..=d)
                .map(|l2| format!("{:8.4}", table.get(l1, l2)))
                .collect();
            println!("  {}", row.join(" "));
        }
    }
    Ok(PASS)
}

fn cmd_staggered(
    cli: &Cli,
    file1: &std::path::Path,
    file2: &std::path::Path,
    k: usize,
    l1: usize,
    l2: usize,
) -> Result<ExitCode, String> {
    let a1 = load_matrix(file1)?;
    let a2 = load_matrix(file2)?;
    let dec1 = eigh(&a1).map_err(|e| e.to_string())?;
    let dec2 = eigh(&a2).map_err(|e| e.to_string())?;
    let alpha = alignment_term(&dec1, &dec2, k, l1, l2).map_err(|e| e.to_string())?;
    let bound = staggered_bound(dec1.eigenvalues(), dec2.eigenvalues(), k, l1, l2, alpha)
        .map_err(|e| e.to_string())?;
    let m = (alpha - 1e-9).ceil() as i64 - k as i64;
    if cli.json {
        let out = Json::Object(vec![
            ("k".into(), Json::Int(k as i64)),
            ("l1".into(), Json::Int(l1 as i64)),
            ("l2".into(), Json::Int(l2 as i64)),
            ("alpha".into(), Json::Float(alpha)),
            ("m".into(), Json::Int(m)),
            ("bound".into(), Json::Float(bound)),
        ]);
        println!("{}", out.render());
    } else {
        println!("alpha = {alpha} (m = {m})");
        println!("staggered bound on s_{k}(A1+A2) = {bound}");
    }
    Ok(PASS)
}

fn campaign_cmd(cli: &Cli, task: Task, trials: usize, dims: Vec<usize>) -> Result<ExitCode, String> {
    let cfg = CampaignConfig {
        seed: cli.seed,
        trials,
        dims,
        tol: cli.tol,
        task,
    };
    let report = run_campaign(&cfg)?;
    if cli.json {
        print!("{}", report.render());
    } else {
        println!(
            "{}: {} trials, {} violations, max gap {:.3e} -> {}",
            report.task,
            report.trials,
            report.violations.len(),
            report.max_gap,
            if report.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(if report.pass { PASS } else { violation_code() })
}

fn cmd_sep_fan(
    cli: &Cli,
    b1: &std::path::Path,
    c1: &std::path::Path,
    b2: &std::path::Path,
    c2: &std::path::Path,
) -> Result<ExitCode, String> {
    let b1 = load_matrix(b1)?;
    let c1 = load_matrix(c1)?;
    let b2 = load_matrix(b2)?;
    let c2 = load_matrix(c2)?;
    let v = check_separable_fan(&b1, &c1, &b2, &c2, cli.tol).map_err(|e| e.to_string())?;
    if cli.json {
        let out = Json::Object(vec![
            ("holds".into(), Json::Bool(v.holds)),
            ("gaps".into(), Json::floats(&v.gaps)),
            ("trace_gap".into(), Json::Float(v.trace_gap)),
            (
                "first_violation".into(),
                v.first_violation.map_or(Json::Null, |k| Json::Int(k as i64)),
            ),
        ]);
        println!("{}", out.render());
    } else if v.holds {
        println!("aligned sum majorizes the original sum (all {} partial sums)", v.gaps.len());
    } else {
        println!("majorization FAILS at k = {}", v.first_violation.unwrap());
    }
    Ok(if v.holds { PASS } else { violation_code() })
}

fn cmd_counterexamples(cli: &Cli) -> Result<ExitCode, String> {
    let (sum_spec, aligned_spec, verdict) = indefinite_counterexample();
    let one_sided = check_one_sided_counterexample();
    let indefinite_ok = !verdict.holds && verdict.first_violation == Some(1);
    let one_sided_ok = one_sided.difference < -0.05;
    if cli.json {
        let out = Json::Object(vec![
            (
                "indefinite".into(),
                Json::Object(vec![
                    ("sum_spectrum".into(), Json::floats(&sum_spec)),
                    ("aligned_spectrum".into(), Json::floats(&aligned_spec)),
                    ("majorization_holds".into(), Json::Bool(verdict.holds)),
                    (
                        "first_violation".into(),
                        verdict
                            .first_violation
                            .map_or(Json::Null, |k| Json::Int(k as i64)),
                    ),
                ]),
            ),
            (
                "one_sided".into(),
                Json::Object(vec![
                    ("s2_original".into(), Json::Float(one_sided.s2_original)),
                    ("s2_aligned".into(), Json::Float(one_sided.s2_aligned)),
                    ("difference".into(), Json::Float(one_sided.difference)),
                ]),
            ),
            ("as_expected".into(), Json::Bool(indefinite_ok && one_sided_ok)),
        ]);
        println!("{}", out.render());
    } else {
        println!("indefinite factors:");
        println!("  sum spectrum      {sum_spec:?}");
        println!("  aligned spectrum  {aligned_spec:?}");
        println!(
            "  majorization fails at k = {}",
            verdict.first_violation.map_or(0, |k| k)
        );
        println!("one-sided alignment:");
        println!("  s_2(original) = {}", one_sided.s2_original);
        println!("  s_2(aligned)  = {}", one_sided.s2_aligned);
        println!("  difference    = {}", one_sided.difference);
    }
    Ok(if indefinite_ok && one_sided_ok { PASS } else { violation_code() })
}

fn cmd_campaign(config: &std::path::Path) -> Result<ExitCode, String> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| format!("cannot read {}: {e}", config.display()))?;
    let cfg: CampaignConfig =
        serde_json::from_str(&text).map_err(|e| format!("bad config: {e}"))?;
    let report = run_campaign(&cfg)?;
    // campaign reports are always emitted as deterministic JSON bytes
    print!("{}", report.render());
    Ok(if report.pass { PASS } else { violation_code() })
}
