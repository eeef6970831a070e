mod corpus;

use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use iltransfer::chart::{extract_semantics, tokenize, ChartConfig, InterlanguageSource, Parser as ChartParser, TargetSource};
use iltransfer::diagnose::{Diagnoser, Renderers, Report, Status};
use iltransfer::repair::RepairConfig;
use iltransfer::signs::{load_lexicon, Lexicon, Stage};

use corpus::parse_corpus;

const OK: u8 = 0;
const DIAGNOSED: u8 = 1;
const NO_ANALYSIS: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "iltransfer", version, about = "Parse learner sentences and diagnose lexical transfer errors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse one sentence and print its trees and meanings.
    Parse {
        #[command(flatten)]
        common: Common,
        /// Parse with the learner lexicon at this stage instead of strictly.
        #[arg(long, value_enum)]
        stage: Option<StageArg>,
        sentence: String,
    },
    /// Diagnose one sentence.
    Diagnose {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        repair: RepairArgs,
        sentence: String,
    },
    /// Diagnose every sentence of a corpus file.
    Batch {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        repair: RepairArgs,
        corpus: PathBuf,
    },
    /// Load and validate a lexicon.
    Lexcheck {
        #[command(flatten)]
        common: Common,
        /// Print the lexicon in canonical form.
        #[arg(long)]
        print: bool,
    },
    /// Diagnose sentences read from standard input.
    Repl {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        repair: RepairArgs,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long, value_enum, default_value = "machine")]
    format: Format,
}

#[derive(Args)]
struct RepairArgs {
    #[arg(long, default_value_t = RepairConfig::default().beam)]
    beam: usize,
    #[arg(long, default_value_t = RepairConfig::default().max_repairs)]
    max_repairs: u32,
    #[arg(long, default_value_t = RepairConfig::default().edge_cap)]
    edge_cap: usize,
    /// Report failures without trying transferred frames.
    #[arg(long)]
    strict: bool,
}

impl RepairArgs {
    fn config(&self) -> Result<RepairConfig, String> {
        let config = RepairConfig {
            max_repairs: if self.strict { 0 } else { self.max_repairs },
            beam: self.beam,
            edge_cap: self.edge_cap,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Machine => "machine",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Transfer,
    Distinct,
    Variable,
}

impl From<StageArg> for Stage {
    fn from(s: StageArg) -> Self {
        match s {
            StageArg::Transfer => Stage::Transfer,
            StageArg::Distinct => Stage::Distinct,
            StageArg::Variable => Stage::Variable,
        }
    }
}

fn load(common: &Common) -> Result<Lexicon, String> {
    let text = std::fs::read_to_string(&common.lexicon).map_err(|e| format!("{}: {e}", common.lexicon.display()))?;
    load_lexicon(&text).map_err(|e| format!("{}: {e}", common.lexicon.display()))
}

fn exit_for(status: Status) -> u8 {
    match status {
        Status::Grammatical => OK,
        Status::Diagnosed => DIAGNOSED,
        Status::NoAnalysis | Status::EdgeCapExceeded | Status::UnknownWord => NO_ANALYSIS,
    }
}

fn render(format: Format, report: &Report) -> String {
    Renderers::default().get(format.name()).expect("built-in renderer").render(report)
}

fn cmd_parse(common: &Common, stage: Option<StageArg>, sentence: &str) -> Result<u8, String> {
    let lexicon = load(common)?;
    let parser = match stage {
        None => ChartParser::new(&lexicon, &TargetSource),
        Some(s) => ChartParser::new(&lexicon, &InterlanguageSource::new(Some(s.into()))),
    }
    .map_err(|e| e.to_string())?;
    let tokens = tokenize(sentence);
    let result = match parser.parse(&tokens, &ChartConfig::default()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return Ok(NO_ANALYSIS);
        }
    };
    let trees: Vec<(String, String)> = result
        .tree_edges()
        .map(|e| (result.chart.bracketed(e.id), extract_semantics(e).to_string()))
        .collect();
    let mut out = io::stdout().lock();
    match common.format {
        Format::Text => {
            if trees.is_empty() {
                let _ = writeln!(out, "{}: {}", sentence, result.status.as_str());
            }
            for (tree, sem) in &trees {
                let _ = writeln!(out, "{tree}\n  {sem}");
            }
        }
        Format::Machine => {
            let trees: Vec<serde_json::Value> =
                trees.iter().map(|(t, s)| serde_json::json!({ "tree": t, "semantics": s })).collect();
            let record = serde_json::json!({
                "sentence": sentence,
                "status": result.status.as_str().to_lowercase(),
                "trees": trees,
                "edges": result.stats.edges,
            });
            let _ = writeln!(out, "{record}");
        }
    }
    eprintln!(
        "edges: {}, lexical: {}, attempts: {}, duplicates: {}, fragments: {}",
        result.stats.edges, result.stats.lexical, result.stats.attempts, result.stats.duplicates, result.stats.fragments
    );
    Ok(if result.parsed() { OK } else { NO_ANALYSIS })
}

fn cmd_diagnose(common: &Common, repair: &RepairArgs, sentence: &str) -> Result<u8, String> {
    let lexicon = load(common)?;
    let diagnoser = Diagnoser::new(&lexicon, repair.config()?).map_err(|e| e.to_string())?;
    let report = diagnoser.report(sentence);
    print!("{}", render(common.format, &report));
    if let Some(e) = &report.error {
        eprintln!("{e}");
    }
    Ok(exit_for(report.status))
}

fn cmd_batch(common: &Common, repair: &RepairArgs, corpus: &PathBuf) -> Result<u8, String> {
    let lexicon = load(common)?;
    let diagnoser = Diagnoser::new(&lexicon, repair.config()?).map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(corpus).map_err(|e| format!("{}: {e}", corpus.display()))?;
    let lines = parse_corpus(&text).map_err(|e| format!("{}: {e}", corpus.display()))?;
    let reports: Vec<Report> = lines.par_iter().map(|l| diagnoser.report(&l.text)).collect();

    let mut out = io::stdout().lock();
    let mut counts = [0usize; 5];
    let (mut checked, mut mismatches) = (0, 0);
    for (line, report) in lines.iter().zip(&reports) {
        let _ = out.write_all(render(common.format, report).as_bytes());
        counts[report.status as usize] += 1;
        if let Some(e) = &report.error {
            eprintln!("line {}: {e}", line.line);
        }
        if let Some(exp) = &line.expected {
            checked += 1;
            if !exp.met_by(report) {
                mismatches += 1;
                eprintln!(
                    "line {}: expected {}{}, got {}",
                    line.line,
                    exp.classification.as_str(),
                    exp.lemma.as_ref().map(|l| format!(" {l}")).unwrap_or_default(),
                    report.status.as_str()
                );
            }
        }
    }
    eprintln!(
        "{} sentences: {} grammatical, {} diagnosed, {} without analysis, {} over the edge cap, {} with unknown words; \
         expectations met: {}/{}",
        reports.len(),
        counts[Status::Grammatical as usize],
        counts[Status::Diagnosed as usize],
        counts[Status::NoAnalysis as usize],
        counts[Status::EdgeCapExceeded as usize],
        counts[Status::UnknownWord as usize],
        checked - mismatches,
        checked
    );
    let worst = reports.iter().map(|r| exit_for(r.status)).max().unwrap_or(OK);
    Ok(if mismatches > 0 { worst.max(DIAGNOSED) } else { worst })
}

fn cmd_lexcheck(common: &Common, print: bool) -> Result<u8, String> {
    let lexicon = load(common)?;
    for w in lexicon.warnings() {
        eprintln!("warning: {w}");
    }
    if print {
        print!("{lexicon}");
    } else {
        println!("{}", lexicon.counts());
    }
    Ok(OK)
}

fn cmd_repl(common: &Common, repair: &RepairArgs) -> Result<u8, String> {
    let lexicon = load(common)?;
    let diagnoser = Diagnoser::new(&lexicon, repair.config()?).map_err(|e| e.to_string())?;
    let mut stats = false;
    eprintln!("one sentence per line; :stats toggles chart statistics, :quit leaves");
    for line in io::stdin().lock().lines() {
        let line = line.map_err(|e| e.to_string())?;
        let line = line.trim();
        match line {
            "" => continue,
            ":quit" | ":q" => break,
            ":stats" => {
                stats = !stats;
                eprintln!("statistics {}", if stats { "on" } else { "off" });
                continue;
            }
            _ => {}
        }
        let report = diagnoser.report(line);
        print!("{}", render(common.format, &report));
        if stats {
            if let Some(a) = &report.analyses {
                let repaired = a.repaired.as_ref().map(|r| r.stats.edges).unwrap_or(0);
                eprintln!(
                    "strict edges: {}, repaired edges: {repaired}, tokens with transferred frames: {}",
                    a.strict.stats.edges, a.bilingual_tokens
                );
            }
        }
        let _ = io::stdout().flush();
    }
    Ok(OK)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    let result = match &cli.command {
        Command::Parse { common, stage, sentence } => cmd_parse(common, *stage, sentence),
        Command::Diagnose { common, repair, sentence } => cmd_diagnose(common, repair, sentence),
        Command::Batch { common, repair, corpus } => cmd_batch(common, repair, corpus),
        Command::Lexcheck { common, print } => cmd_lexcheck(common, *print),
        Command::Repl { common, repair } => cmd_repl(common, repair),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
    }
}
