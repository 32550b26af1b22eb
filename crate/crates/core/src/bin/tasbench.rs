use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tasbench::atam::{explore, sample_sequence, Direction, Tas};
use tasbench::consistency::verify_locally_consistent;
use tasbench::encode::{compile, BitString, CompileParams, CompiledSystem, EncodeError};
use tasbench::format::parse_tas;
use tasbench::lookup::{trace_lookup, LookupError};
use tasbench::macrosim::{r_star, MacroSim};
use tasbench::svg::render_svg;
use tasbench::verify::full_report;

/// Temperature-2 tile assembly workbench.
#[derive(Parser)]
#[command(name = "tasbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one random assembly sequence.
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
    },
    /// Enumerate producible assemblies up to a size bound.
    Explore {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        bound: usize,
    },
    /// Check the locally consistent conditions up to a size bound.
    CheckLc {
        file: PathBuf,
        #[arg(long, default_value_t = 25)]
        bound: usize,
    },
    /// Compile the lookup table and write the artifact.
    Compile {
        file: PathBuf,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Spacer length between the table and the pad field on each edge.
        #[arg(long)]
        cprime: Option<usize>,
        /// Random-bit width.
        #[arg(long)]
        bits: Option<usize>,
        /// Compile even if the local-consistency check fails.
        #[arg(long)]
        force: bool,
    },
    /// Look up an address in the compiled table.
    Lookup {
        file: PathBuf,
        #[arg(long)]
        addr: u64,
        /// Random bits, most significant first; all zeros when omitted.
        #[arg(long)]
        bits: Option<String>,
        /// Print one line per table column.
        #[arg(long)]
        trace: bool,
    },
    /// Run the block-level simulation once.
    Simulate {
        file: PathBuf,
        /// Maximum number of committed blocks.
        #[arg(long, default_value_t = 25)]
        bound: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the represented assembly as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check the three simulation conditions up to a bound.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        bound: usize,
        /// Also write the report to this path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Render a sampled assembly as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        /// Pixels per cell.
        #[arg(long, default_value_t = 40)]
        scale: u32,
    },
}

enum Failure {
    /// A check ran and failed.
    Check(String),
    /// Bad input or I/O.
    Usage(String),
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn load(path: &Path) -> Result<Tas, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_tas(&text).map(|d| d.tas).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn compile_checked(tas: &Tas, params: &CompileParams) -> Result<CompiledSystem, Failure> {
    compile(tas, params).map_err(|e| match e {
        EncodeError::NotLocallyConsistent(_) => Failure::Check(e.to_string()),
        other => usage(other),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { file, seed, max_steps } => cmd_run(&file, seed, max_steps),
        Command::Explore { file, bound } => cmd_explore(&file, bound),
        Command::CheckLc { file, bound } => cmd_check_lc(&file, bound),
        Command::Compile { file, out, cprime, bits, force } => cmd_compile(&file, out.as_deref(), cprime, bits, force),
        Command::Lookup { file, addr, bits, trace } => cmd_lookup(&file, addr, bits.as_deref(), trace),
        Command::Simulate { file, bound, seed, svg } => cmd_simulate(&file, bound, seed, svg.as_deref()),
        Command::Verify { file, bound, report } => cmd_verify(&file, bound, report.as_deref()),
        Command::Render { file, svg, seed, max_steps, scale } => cmd_render(&file, &svg, seed, max_steps, scale),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_run(file: &Path, seed: u64, max_steps: usize) -> CmdResult {
    let tas = load(file)?;
    let seq = sample_sequence(&tas, seed, max_steps);
    for &(pos, tile) in seq.steps() {
        println!("{pos} {}", tas.tiles()[tile].name());
    }
    let a = seq.replay(&tas).map_err(usage)?;
    println!("tiles {}", a.len());
    println!("terminal {}", tasbench::atam::is_terminal(&tas, &a));
    Ok(())
}

fn cmd_explore(file: &Path, bound: usize) -> CmdResult {
    let tas = load(file)?;
    let ex = explore(&tas, bound);
    println!("assemblies {}", ex.len());
    println!("transitions {}", ex.edges().len());
    println!("truncated {}", ex.is_truncated());
    let terminal = ex.sinks().into_iter().filter(|&i| tasbench::atam::is_terminal(&tas, ex.state(i))).count();
    println!("terminal {terminal}");
    Ok(())
}

fn cmd_check_lc(file: &Path, bound: usize) -> CmdResult {
    let tas = load(file)?;
    let report = verify_locally_consistent(&tas, bound);
    println!("assemblies {}", report.assemblies_checked);
    println!("placements {}", report.placements_checked);
    println!("{}", report.coverage_note());
    match report.verdict.witness() {
        None => {
            println!("locally consistent");
            Ok(())
        }
        Some(w) => {
            println!("not locally consistent");
            println!("witness {w}");
            if let Some(seq) = &w.sequence {
                for &(pos, tile) in seq.steps() {
                    println!("step {pos} {}", tas.tiles()[tile].name());
                }
            }
            Err(Failure::Check(format!("{}: {} violated", file.display(), w.condition)))
        }
    }
}

fn cmd_compile(file: &Path, out: Option<&Path>, cprime: Option<usize>, bits: Option<usize>, force: bool) -> CmdResult {
    let tas = load(file)?;
    let params = CompileParams { spacer: cprime, random_bits: bits, force, ..CompileParams::default() };
    let cs = compile_checked(&tas, &params)?;
    let text = cs.to_text();
    match out {
        Some(path) => {
            write_file(path, &text)?;
            println!("entries {}", cs.entry_count);
            println!("table-length {}", cs.table.len());
            println!("scale {}", cs.scale);
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_lookup(file: &Path, addr: u64, bits: Option<&str>, trace: bool) -> CmdResult {
    let tas = load(file)?;
    let cs = compile_checked(&tas, &CompileParams::default())?;
    let b: BitString = match bits {
        Some(s) => s.parse().map_err(usage)?,
        None => BitString::zeros(cs.random_bits),
    };
    match trace_lookup(&cs.table, &cs.glues, addr, &b, trace) {
        Ok((sel, t)) => {
            if trace {
                print!("{}", t.render_columns());
            }
            println!("n {}", t.n);
            println!("m {}", t.m);
            println!("p {}", t.p.unwrap_or(0));
            println!("selected {}", sel.selected_index);
            if let Some(e) = cs.addresses.get(&addr) {
                if let Some(&tile) = e.tiles.get(sel.selected_index as usize) {
                    println!("tile {}", tas.tiles()[tile].name());
                }
            }
            for d in Direction::ALL {
                match sel.sub_entry.get(d) {
                    Some(p) => println!("{d} {}:{}", p.glue(), p.strength()),
                    None => println!("{d} -"),
                }
            }
            Ok(())
        }
        Err(LookupError::EmptyEntry { addr, trace: t }) => {
            if let (true, Some(t)) = (trace, t) {
                print!("{}", t.render_columns());
            }
            println!("n 0");
            Err(Failure::Check(format!("entry {addr} is empty")))
        }
        Err(e) => Err(usage(e)),
    }
}

fn cmd_simulate(file: &Path, bound: usize, seed: u64, svg: Option<&Path>) -> CmdResult {
    let tas = load(file)?;
    let cs = compile_checked(&tas, &CompileParams::default())?;
    let sim = MacroSim::new(&cs);
    let run = sim.simulate(seed, bound).map_err(|e| Failure::Check(e.to_string()))?;
    for t in &run.transitions {
        println!("{}", t.line(&tas));
    }
    let image = r_star(&run.assembly, &cs).map_err(|e| Failure::Check(e.to_string()))?;
    println!("blocks {}", image.len());
    println!("truncated {}", run.truncated);
    if let Some(path) = svg {
        write_file(path, &render_svg(&tas, &image, 40))?;
    }
    Ok(())
}

fn cmd_verify(file: &Path, bound: usize, report: Option<&Path>) -> CmdResult {
    let tas = load(file)?;
    let cs = compile_checked(&tas, &CompileParams::default())?;
    let r = full_report(&cs, bound);
    let text = r.to_text();
    print!("{text}");
    if let Some(path) = report {
        write_file(path, &text)?;
    }
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{}: simulation check failed", file.display())))
    }
}

fn cmd_render(file: &Path, svg: &Path, seed: u64, max_steps: usize, scale: u32) -> CmdResult {
    let tas = load(file)?;
    let a = sample_sequence(&tas, seed, max_steps).replay(&tas).map_err(usage)?;
    write_file(svg, &render_svg(&tas, &a, scale))
}
