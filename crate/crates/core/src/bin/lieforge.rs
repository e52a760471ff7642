use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use lieforge::catalog::{self, CatalogEntry};
use lieforge::dsl::{self, catalog_ident, catalog_json, emit_catalog_dsl, RunOptions};
use lieforge::lie::{check_representation, check_torsion_free, Connection, LieAlgebra};
use lieforge::structures::{generated_rank, levi_civita, tower};
use lieforge::suite;

#[derive(Parser)]
#[command(
    name = "lieforge",
    version,
    about = "Exact certification of Lie algebra structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a .lie file and run its checks.
    Check {
        file: PathBuf,
        /// Also write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Worker threads for independent checks.
        #[arg(long)]
        parallel: Option<usize>,
    },
    /// Print a catalog entry.
    Catalog {
        name: String,
        params: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Emit::Dsl)]
        emit: Emit,
    },
    /// Build the Clifford tower over a base with a flat torsion-free connection.
    Tower {
        /// Catalog name with parameters after colons (`gl:2`), or `abelian:N`.
        #[arg(long)]
        base: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the acceptance suite.
    Acceptance {
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Dsl,
    Json,
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn check(file: &Path, json: Option<&Path>, parallel: Option<usize>) -> Result<u8, String> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    let ws = match dsl::parse(&text) {
        Ok(ws) => ws,
        Err(e) => {
            eprintln!("{}:{e}", file.display());
            return Ok(2);
        }
    };
    let report = dsl::run(&ws, &RunOptions { threads: parallel });
    print!("{}", report.to_text());
    if let Some(path) = json {
        report.emit_json(path).map_err(|e| e.to_string())?;
    }
    Ok(report.exit_code() as u8)
}

fn catalog_cmd(name: &str, params: &[usize], emit: Emit) -> Result<u8, String> {
    let entry = catalog::lookup(name, params).map_err(|e| e.to_string())?;
    match emit {
        Emit::Dsl => print!("{}", emit_catalog_dsl(&entry, &catalog_ident(name, params))),
        Emit::Json => println!(
            "{}",
            serde_json::to_string_pretty(&catalog_json(&entry)).expect("serializable")
        ),
    }
    Ok(0)
}

fn affine(g: &LieAlgebra, c: &Connection) -> bool {
    check_representation(g, c).pass && check_torsion_free(g, c).pass
}

/// The base algebra and its first flat torsion-free connection.
fn tower_base(base_arg: &str) -> Result<(LieAlgebra, Connection), String> {
    let mut parts = base_arg.split(':');
    let name = parts.next().unwrap_or_default();
    let params = parts
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| format!("bad parameter `{p}` in `{base_arg}`"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if name == "abelian" {
        let n = *params
            .first()
            .ok_or("abelian needs a dimension, e.g. abelian:2")?;
        let labels = (1..=n).map(|i| format!("x{i}")).collect();
        let g = LieAlgebra::abelian(format!("R{n}"), labels).map_err(|e| e.to_string())?;
        return Ok((g, Connection::zero(n, n)));
    }
    let entry: CatalogEntry =
        catalog::lookup(name, params.as_slice()).map_err(|e| e.to_string())?;
    let g = entry.algebra.clone();
    if let Some(c) = entry.connections.values().find(|c| affine(&g, c)) {
        return Ok((g, c.clone()));
    }
    for b in entry.forms.values() {
        if let Ok(c) = levi_civita(&g, b) {
            if affine(&g, &c) {
                return Ok((g, c));
            }
        }
    }
    Err(format!("`{base_arg}` has no flat torsion-free connection"))
}

fn tower_cmd(base: &str, m: usize, json: Option<&Path>) -> Result<u8, String> {
    let (g, nabla) = tower_base(base)?;
    let tw = tower(&g, &nabla, m).map_err(|e| e.to_string())?;
    let cert = tw.certify();
    let dims: Vec<usize> = tw.levels.iter().map(|l| l.algebra.dim()).collect();
    let rank = generated_rank(&tw.family.maps);
    let verdict = if cert.pass { "PASS" } else { "FAIL" };
    println!(
        "{verdict} tower {} m={m} dims={dims:?} structures={} generated_rank={rank}",
        g.name(),
        tw.family.len()
    );
    if let Some(path) = json {
        write_json(
            path,
            &json!({ "dims": dims, "generated_rank": rank, "certificate": cert }),
        )?;
    }
    Ok(if cert.pass { 0 } else { 1 })
}

fn acceptance(json: Option<&Path>) -> Result<u8, String> {
    let results = suite::run_all();
    for r in &results {
        println!("{}", r.line());
    }
    if let Some(path) = json {
        write_json(path, &serde_json::to_value(&results).expect("serializable"))?;
    }
    Ok(if results.iter().all(|r| r.pass) { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Check {
            file,
            json,
            parallel,
        } => check(file, json.as_deref(), *parallel),
        Command::Catalog { name, params, emit } => catalog_cmd(name, params, *emit),
        Command::Tower { base, m, json } => tower_cmd(base, *m, json.as_deref()),
        Command::Acceptance { json } => acceptance(json.as_deref()),
    };
    match out {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
