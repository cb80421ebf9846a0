use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use planar_cvc::generators::{gen_exception_graph, gen_random_planar, gen_tightness};
use planar_cvc::io::{parse_graph, read_journal, read_solution, serialize_graph, write_journal, write_solution};
use planar_cvc::pipeline::{
    kernelize, lemma2_check, lift_solution, partition_stats, replay, Instance, KernelOutcome, Partition,
    ReductionJournal, Trace,
};
use planar_cvc::{minimum_cvc, verify_cvc, Graph, VertexId};

#[derive(Parser)]
#[command(
    name = "planar-cvc",
    version,
    about = "Connected Vertex Cover kernelization for planar graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce (G, k) to a kernel, or answer NO.
    Kernelize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Write the reduction journal (JSON lines) here.
        #[arg(long)]
        journal: Option<PathBuf>,
        /// Print phase statistics and partition sizes to stderr.
        #[arg(long)]
        stats: bool,
        /// With --stats, use an exact minimum cover and report the partition bound check.
        #[arg(long)]
        with_oracle: bool,
    },
    /// Find a minimum connected vertex cover exactly.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Map a kernel solution back to the input graph.
    Lift {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        journal: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Emit a generated graph.
    Generate {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Check that a solution is a connected vertex cover.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Tightness {
        #[arg(long)]
        l: usize,
    },
    Exception,
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        density: f64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Input(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.into(),
        source,
    })
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = read(path)?;
    parse_graph(&text)
        .map(|p| p.graph)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn yes_no(yes: bool) -> ExitCode {
    ExitCode::from(if yes { 0 } else { 1 })
}

fn print_partition(label: &str, p: &Partition) {
    eprintln!(
        "c partition ({label}): |S| {} |S1| {} |S>=3| {} |I1| {} |I3| {} |I>=4| {} |I other| {}",
        p.cover_size(),
        p.s1.len(),
        p.s_ge3.len(),
        p.i1.len(),
        p.i3.len(),
        p.i_ge4.len(),
        p.i_other.len()
    );
}

fn print_stats(input: &Graph, trace: &Trace, with_oracle: bool) -> Result<(), CliError> {
    eprintln!("c input |V| {} |E| {}", input.vertex_count(), input.edge_count());
    eprintln!("c phase 1 steps {}", trace.phase1_steps);
    let Some(g1) = &trace.g1 else {
        return Ok(());
    };
    eprintln!(
        "c phase 1 result |V| {} |E| {} k {}",
        g1.graph.vertex_count(),
        g1.graph.edge_count(),
        g1.k
    );
    eprintln!("c phase 2 identifications {}", trace.m_star);
    if g1.graph.is_empty() {
        return Ok(());
    }
    if with_oracle {
        let cover = minimum_cvc(&g1.graph, g1.graph.vertex_count())
            .map_err(input_err)?
            .expect("a connected graph has a connected vertex cover")
            .vertices;
        let p = partition_stats(&g1.graph, &cover).map_err(input_err)?;
        print_partition("minimum cover", &p);
        let rep = lemma2_check(&g1.graph, &cover, trace.m_star).map_err(input_err)?;
        eprintln!(
            "c partition bound: |S>=3|+|I>=4|+|M*| = {} ; |S|/3 = {}/3 ; holds {} ; equals (|S|+4)/3 {}",
            rep.lhs, rep.cover_size, rep.holds, rep.tight
        );
    } else {
        let mut cover: BTreeSet<VertexId> = g1.graph.vertices().filter(|&v| g1.graph.degree(v) >= 2).collect();
        if cover.is_empty() {
            cover.extend(g1.graph.vertices().next());
        }
        let p = partition_stats(&g1.graph, &cover).map_err(input_err)?;
        print_partition("non-leaf cover", &p);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Kernelize {
            input,
            k,
            journal,
            stats,
            with_oracle,
        } => {
            let g = load_graph(&input)?;
            let out = kernelize(&Instance::new(g.clone(), k)).map_err(input_err)?;
            if let Some(path) = &journal {
                fs::write(path, write_journal(&out.journal().steps)).map_err(|source| CliError::Write {
                    path: path.clone(),
                    source,
                })?;
            }
            if stats {
                print_stats(&g, out.trace(), with_oracle)?;
            }
            match out {
                KernelOutcome::Kernel { instance, .. } => {
                    print!("{}", serialize_graph(&instance.graph));
                    println!("c kernel-k {}", instance.k);
                    Ok(ExitCode::SUCCESS)
                }
                KernelOutcome::No { reason, .. } => {
                    println!("c no {reason:?}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Solve { input, limit } => {
            let g = load_graph(&input)?;
            let limit = limit.unwrap_or(g.vertex_count());
            match minimum_cvc(&g, limit).map_err(input_err)? {
                Some(c) => {
                    println!("c size {}", c.size());
                    print!("{}", write_solution(&c.vertices, &g));
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("c no cover within {limit}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Lift {
            input,
            journal,
            solution,
        } => {
            let g = load_graph(&input)?;
            let steps = read_journal(&read(&journal)?).map_err(input_err)?;
            let journal = ReductionJournal {
                input: g.clone(),
                steps,
            };
            let kernel = replay(&journal).map_err(input_err)?;
            let s = read_solution(&read(&solution)?, &kernel).map_err(input_err)?;
            let lifted = lift_solution(&journal, &s).map_err(input_err)?;
            print!("{}", write_solution(&lifted, &g));
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate { kind } => {
            let g = match kind {
                GenKind::Tightness { l } => gen_tightness(l).map_err(input_err)?,
                GenKind::Exception => gen_exception_graph(),
                GenKind::Random { n, density, seed } => {
                    if n == 0 {
                        return Err(CliError::Input("--n must be at least 1".into()));
                    }
                    gen_random_planar(n, density, seed)
                }
            };
            print!("{}", serialize_graph(&g));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { input, solution } => {
            let g = load_graph(&input)?;
            let s = read_solution(&read(&solution)?, &g).map_err(input_err)?;
            let ok = verify_cvc(&g, &s).map_err(input_err)?;
            println!("{}", if ok { "c valid" } else { "c invalid" });
            Ok(yes_no(ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
