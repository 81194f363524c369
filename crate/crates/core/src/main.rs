use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use surface_bounding::bounding::{axis_closure_check, cone_data, AxisVerdict};
use surface_bounding::certs::handlebody::{DEFAULT_MAX_EDGES, DEFAULT_MAX_VERTICES};
use surface_bounding::certs::{
    gram_check, search_handlebody, Certificate, CertificateJson, HandlebodySearch, DEFAULT_TOL,
};
use surface_bounding::fuchsian::{dedupe, search_vectors, Signature};
use surface_bounding::group::{atlas_build, atlas_names, g32a_selected_action};
use surface_bounding::report::reproduce;
use surface_bounding::Error;

#[derive(Parser)]
#[command(
    name = "surface-bounding",
    version,
    about = "Bounding finite group actions on closed surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Named groups available to the other commands.
    Atlas {
        #[command(subcommand)]
        action: AtlasAction,
    },
    /// Surface genus from a signature and a group order.
    Rh {
        #[arg(long)]
        signature: Signature,
        #[arg(long)]
        order: u64,
    },
    /// Surface-kernel generating vectors.
    Search {
        #[arg(long)]
        atlas: String,
        #[arg(long)]
        signature: Signature,
        /// Keep one vector per braid/conjugation class.
        #[arg(long)]
        dedupe: bool,
    },
    /// Axis-closure check for each class of vectors.
    CheckBounding {
        #[arg(long)]
        atlas: String,
        #[arg(long)]
        signature: Signature,
    },
    /// Re-verify a certificate file.
    VerifyTet {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Look for a handlebody certificate.
    SearchHandlebody {
        #[arg(long)]
        atlas: String,
        #[arg(long)]
        signature: Signature,
    },
    /// Recompute the verdict table for genus 3 or 4.
    Reproduce {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Also write each certificate to this directory.
        #[arg(long)]
        certs: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AtlasAction {
    List,
}

/// Exit status 1: a check failed. Status 2: the input was malformed.
enum Failure {
    Mismatch(String),
    Malformed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Malformed(e.to_string())
    }
}

fn io_error(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure::Malformed(format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Atlas {
            action: AtlasAction::List,
        } => {
            for (name, order) in atlas_names() {
                if name == "g32a" {
                    let [[p, q], [r, s]] = g32a_selected_action()?;
                    println!(
                        "{name:<10} {order:<4} Z2 acting on Z2 x Z8 by [[{p}, {q}], [{r}, {s}]]"
                    );
                } else {
                    println!("{name:<10} {order}");
                }
            }
        }
        Command::Rh { signature, order } => {
            println!("genus {}", signature.rh_genus(order)?);
        }
        Command::Search {
            atlas,
            signature,
            dedupe: merge,
        } => {
            let g = atlas_build(&atlas)?;
            let mut vectors = search_vectors(&signature, &g, usize::MAX);
            if merge {
                vectors = dedupe(vectors);
            }
            println!("{} vectors for {signature} in {atlas}", vectors.len());
            for v in &vectors {
                println!("{}", v.cone_strings().join(" "));
            }
        }
        Command::CheckBounding { atlas, signature } => {
            let g = atlas_build(&atlas)?;
            let classes = dedupe(search_vectors(&signature, &g, usize::MAX));
            if classes.is_empty() {
                return Err(Failure::Mismatch(format!(
                    "no {signature} vector in {atlas}"
                )));
            }
            for v in &classes {
                let verdict = match axis_closure_check(&cone_data(v), &g) {
                    AxisVerdict::Obstruction(o) => {
                        let kind = if o.isolated {
                            "isolated"
                        } else {
                            "no complete closure"
                        };
                        format!("obstruction at cone {} ({kind})", o.blocking_index)
                    }
                    AxisVerdict::NoObstruction(plan) => {
                        format!(
                            "no obstruction ({} pairs, {} endings)",
                            plan.pairs.len(),
                            plan.terminations.len()
                        )
                    }
                };
                println!("{}: {verdict}", v.cone_strings().join(" "));
            }
        }
        Command::VerifyTet { cert } => {
            let text = std::fs::read_to_string(&cert).map_err(|e| io_error(&cert, e))?;
            let j: CertificateJson = serde_json::from_str(&text)
                .map_err(|e| Failure::Malformed(format!("{}: {e}", cert.display())))?;
            let c = Certificate::from_json(&j)?;
            c.verify().map_err(|e| Failure::Mismatch(e.to_string()))?;
            if let Certificate::Tet(t) = &c {
                let gram = gram_check(&t.tetrahedron, DEFAULT_TOL)?;
                let types: Vec<String> = t.vertex_types().iter().map(ToString::to_string).collect();
                println!(
                    "gram signature {:?}, vertex types {}",
                    gram.signature,
                    types.join(",")
                );
            }
            println!("certificate verified");
        }
        Command::SearchHandlebody { atlas, signature } => {
            let g = atlas_build(&atlas)?;
            let classes = dedupe(search_vectors(&signature, &g, usize::MAX));
            if classes.is_empty() {
                return Err(Failure::Mismatch(format!(
                    "no {signature} vector in {atlas}"
                )));
            }
            for v in &classes {
                match search_handlebody(v, DEFAULT_MAX_VERTICES, DEFAULT_MAX_EDGES) {
                    HandlebodySearch::Found(c) => {
                        let json =
                            serde_json::to_string_pretty(&c.to_json()).expect("serializable");
                        println!("{json}");
                        return Ok(());
                    }
                    HandlebodySearch::TriangleRule => {
                        println!("no handlebody: triangle-rule");
                        return Ok(());
                    }
                    HandlebodySearch::NotFound => {
                        println!("{}: no pattern within bounds", v.cone_strings().join(" "))
                    }
                    HandlebodySearch::Inconclusive { visited } => {
                        println!(
                            "{}: inconclusive after {visited} states",
                            v.cone_strings().join(" ")
                        )
                    }
                }
            }
            return Err(Failure::Mismatch("no handlebody certificate found".into()));
        }
        Command::Reproduce { genus, json, certs } => {
            let report = reproduce(genus)?;
            print!("{}", report.table());
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&report.to_json()).expect("serializable");
                std::fs::write(&path, text + "\n").map_err(|e| io_error(&path, e))?;
            }
            if let Some(dir) = certs {
                std::fs::create_dir_all(&dir).map_err(|e| io_error(&dir, e))?;
                for (name, c) in report.certificates() {
                    let path = dir.join(format!("{name}.json"));
                    let text = serde_json::to_string_pretty(&c.to_json()).expect("serializable");
                    std::fs::write(&path, text + "\n").map_err(|e| io_error(&path, e))?;
                }
            }
            let mismatches = report.mismatches();
            if !mismatches.is_empty() {
                return Err(Failure::Mismatch(mismatches.join("\n")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Malformed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
