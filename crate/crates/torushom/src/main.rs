//! `torushom`: exact homology tables of two-strand torus knots, the
//! stable limit, closed-geodesic catalogs and loop homology of complex
//! Grassmannians, the grading-comparison verifier, and operator
//! self-tests.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.
//! Data goes to stdout, logs to stderr. `TORUSHOM_THREADS` caps the
//! worker pool used for per-partition assembly.

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use torushom::{
    colored_homology_par, relation_reports_to_json, render_bigraded, render_geodesics,
    render_loop_homology, stable_homology_par, OutputFormat,
};
use torushom_core::grassmannian::{
    enumerate_partitions, geodesic_component, loop_homology, GeodesicComponent,
};
use torushom_core::knotinv::{verify_theorem, Window};
use torushom_core::nilhecke::check_relations;

#[derive(Parser)]
#[command(
    name = "torushom",
    about = "Exact torus-knot homology and Grassmannian loop homology",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology table of T(2,2m+1) in the two-variable sl(2) conventions
    Kh {
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Colored sl(N) homology of T(2,2m+1)
    Colored {
        #[arg(long)]
        k: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        m: u32,
        #[arg(long = "q-cap")]
        q_cap: Option<i64>,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Stable homology of T(2,infinity) on a window
    Stable {
        #[arg(long)]
        k: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long = "q-max")]
        q_max: i64,
        #[arg(long = "t-min", allow_hyphen_values = true)]
        t_min: i64,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Loop homology of Gr(k,N) assembled from closed-geodesic components
    Loop {
        #[arg(long)]
        k: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long = "index-max")]
        index_max: i64,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Catalog of closed-geodesic components with index data
    Geodesics {
        #[arg(long)]
        k: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long = "max-part")]
        max_part: u32,
        #[arg(long = "max-parts")]
        max_parts: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Verify the link-side/loop-side grading comparison on a window
    Verify {
        #[arg(long)]
        k: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long = "q-max")]
        q_max: i64,
        #[arg(long = "t-min", allow_hyphen_values = true)]
        t_min: i64,
    },
    /// Run the operator relation suite on seeded random polynomials
    Selftest {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
}

fn init_threads() {
    if let Ok(v) = std::env::var("TORUSHOM_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring invalid TORUSHOM_THREADS={}", v),
        }
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(2)
}

fn max_q_entry(g: &torushom_core::homology::BigradedAbelianGroup) -> i64 {
    g.entries().map(|(&(_, q), _)| q).max().unwrap_or(0)
}

fn run_colored(k: usize, n: usize, m: u32, q_cap: Option<i64>, format: OutputFormat) -> ExitCode {
    let g = match colored_homology_par(k, n, m, q_cap) {
        Ok(g) => g,
        Err(e) => return usage_error(&e.to_string()),
    };
    let cap = q_cap.unwrap_or_else(|| max_q_entry(&g));
    let knot = format!("T(2,{})", 2 * m as i64 + 1);
    let meta = [
        ("knot", json!(knot)),
        ("k", json!(k)),
        ("N", json!(n)),
        ("m", json!(m)),
        ("complete", json!(q_cap.is_none())),
    ];
    print!("{}", render_bigraded(&g, cap, &meta, format));
    ExitCode::SUCCESS
}

fn run_stable(k: usize, n: usize, q_max: i64, t_min: i64, format: OutputFormat) -> ExitCode {
    let window = Window { q_max, t_min };
    let g = match stable_homology_par(k, n, window) {
        Ok(g) => g,
        Err(e) => return usage_error(&e.to_string()),
    };
    let meta = [
        ("knot", json!("T(2,infinity)")),
        ("k", json!(k)),
        ("N", json!(n)),
        ("m", json!("infinity")),
        ("window", json!({ "q_max": q_max, "t_min": t_min })),
    ];
    print!("{}", render_bigraded(&g, q_max, &meta, format));
    ExitCode::SUCCESS
}

fn run_loop(k: usize, n: usize, index_max: i64, format: OutputFormat) -> ExitCode {
    match loop_homology(k, n, index_max, None) {
        Ok(lh) => {
            print!("{}", render_loop_homology(&lh, k, n, format));
            ExitCode::SUCCESS
        }
        Err(e) => usage_error(&e.to_string()),
    }
}

fn run_geodesics(
    k: usize,
    n: usize,
    max_part: u32,
    max_parts: usize,
    format: OutputFormat,
) -> ExitCode {
    if k == 0 || k >= n {
        return usage_error("need 0 < k < N");
    }
    if max_parts > k.min(n - k) {
        return usage_error("max-parts exceeds min(k, N-k)");
    }
    let rows: Result<Vec<GeodesicComponent>, _> = enumerate_partitions(max_parts, max_part)
        .iter()
        .map(|lambda| geodesic_component(lambda, k, n))
        .collect();
    match rows {
        Ok(rows) => {
            print!("{}", render_geodesics(&rows, format));
            ExitCode::SUCCESS
        }
        Err(e) => usage_error(&e.to_string()),
    }
}

fn run_verify(k: usize, n: usize, q_max: i64, t_min: i64) -> ExitCode {
    let window = Window { q_max, t_min };
    let report = match verify_theorem(k, n, window) {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };
    for check in &report.checks {
        eprintln!(
            "lambda {} : summand {} gap {} cyclic {}",
            check.lambda,
            if check.summand_ok { "ok" } else { "MISMATCH" },
            if check.gap_ok { "ok" } else { "MISMATCH" },
            if check.cyclic_ok { "ok" } else { "MISMATCH" },
        );
    }
    eprintln!(
        "assembly: {}",
        if report.assembly_ok { "ok" } else { "MISMATCH" }
    );
    if report.passed() {
        println!("PASS");
        ExitCode::SUCCESS
    } else {
        println!(
            "FAIL {}",
            report.first_discrepancy().unwrap_or_default()
        );
        ExitCode::from(1)
    }
}

fn run_selftest(r: usize, samples: usize, seed: u64) -> ExitCode {
    let reports = check_relations(r, samples, seed);
    println!(
        "{}",
        serde_json::to_string_pretty(&relation_reports_to_json(&reports)).unwrap()
    );
    if reports.iter().all(|rep| rep.passed()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match cli.command {
        Command::Kh { m, format } => run_colored(1, 2, m, None, format),
        Command::Colored {
            k,
            n,
            m,
            q_cap,
            format,
        } => run_colored(k, n, m, q_cap, format),
        Command::Stable {
            k,
            n,
            q_max,
            t_min,
            format,
        } => run_stable(k, n, q_max, t_min, format),
        Command::Loop {
            k,
            n,
            index_max,
            format,
        } => run_loop(k, n, index_max, format),
        Command::Geodesics {
            k,
            n,
            max_part,
            max_parts,
            format,
        } => run_geodesics(k, n, max_part, max_parts, format),
        Command::Verify { k, n, q_max, t_min } => run_verify(k, n, q_max, t_min),
        Command::Selftest { r, samples, seed } => run_selftest(r, samples, seed),
    }
}
