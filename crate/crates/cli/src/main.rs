use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use derivqa::depgraph::{load_depbank, save_depbank};
use derivqa::derivfilter::{audit_precision, load_audit_gold, write_resource};
use derivqa::pipeline::load_sentences;
use derivqa::qaengine::{load_questions, ratio_to_f64, write_report, AnswerOptions};
use derivqa::wsd::coverage;
use derivqa::{Error, Pipeline, PipelineConfig};

#[derive(Parser)]
#[command(
    name = "derivqa",
    version,
    about = "Derivation-enriched question answering over a sentence bank"
)]
struct Cli {
    /// Pipeline configuration (TOML).
    #[arg(long, global = true, default_value = "derivqa.toml")]
    config: PathBuf,
    /// Enrichment level: baseline, base, deriv or all.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Number of answers returned per question (1 to 5).
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Only admit sentences matching every question dependency.
    #[arg(long, global = true)]
    require_full_match: bool,
    /// Copy verbal instructions onto derived nouns before building.
    #[arg(long, global = true)]
    symmetrize: bool,
    /// Seed for sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the derivational resource and print its counters.
    BuildResource {
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Parse, disambiguate and enrich a sentence file into a bank.
    Preprocess {
        sentences: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        /// Print sense-annotation coverage of the bank.
        #[arg(long)]
        wsd_report: bool,
    },
    /// Answer one question against a bank.
    Ask { bank: PathBuf, question: String },
    /// Score a question file against a bank.
    Evaluate {
        bank: PathBuf,
        questions: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Print lexicon, model and resource counters.
    Stats,
    /// Estimate resource precision on a seeded sample.
    Audit {
        gold: PathBuf,
        #[arg(long, default_value_t = 100)]
        sample: usize,
    },
}

fn load_config(cli: &Cli) -> derivqa::Result<PipelineConfig> {
    let mut config = PipelineConfig::load(&cli.config)?;
    if let Some(m) = &cli.mode {
        config.run.mode = m.clone();
    }
    if let Some(k) = cli.k {
        config.run.k = k;
    }
    if let Some(seed) = cli.seed {
        config.run.seed = seed;
    }
    config.run.require_full_match |= cli.require_full_match;
    config.run.symmetrize |= cli.symmetrize;
    if cli.sequential {
        config.run.parallel = false;
    }
    config.validate_options()?;
    Ok(config)
}

fn write_or_print(out: Option<&Path>, text: &str) -> derivqa::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> derivqa::Result<()> {
    let config = load_config(cli)?;
    let mode = config.mode()?;
    let opts = AnswerOptions {
        k: config.run.k,
        require_full_match: config.run.require_full_match,
    };
    let pipeline = Pipeline::load(&config)?;

    match &cli.command {
        Command::BuildResource { out } => {
            let s = &pipeline.resource.stats;
            write_or_print(out.as_deref(), &write_resource(&pipeline.resource))?;
            eprintln!(
                "entries\t{}\ncandidates\t{}\naccepted\t{}\ninstructions\t{}\nunmatched_instructions\t{}",
                s.entries_processed,
                s.candidates_generated,
                s.derivatives_accepted,
                s.instructions_total,
                s.instructions_unmatched
            );
        }
        Command::Preprocess {
            sentences,
            out,
            wsd_report,
        } => {
            let sentences = load_sentences(sentences)?;
            let (bank, skipped) = pipeline.preprocess(&sentences, mode);
            save_depbank(&bank, out)?;
            eprintln!(
                "{} graphs written, {} sentences skipped",
                bank.len(),
                skipped.len()
            );
            if *wsd_report {
                let c = coverage(&bank);
                println!(
                    "wsd_coverage\t{:.2}%\t{}/{}",
                    c.percent(),
                    c.annotated,
                    c.significant
                );
            }
        }
        Command::Ask { bank, question } => {
            let bank = load_depbank(bank)?;
            let answers = pipeline.ask(&bank, question, mode, opts)?;
            if answers.is_empty() {
                println!("no answer");
            }
            for (rank, a) in answers.iter().enumerate() {
                let text = bank.get(a.order).map_or("", |g| g.text.as_str());
                println!(
                    "{}\t{}\t{:.3}\t{text}",
                    rank + 1,
                    a.sentence_id,
                    ratio_to_f64(a.coverage)
                );
            }
        }
        Command::Evaluate {
            bank,
            questions,
            out,
        } => {
            let bank = load_depbank(bank)?;
            let questions = load_questions(questions)?;
            let report = pipeline.evaluate(&bank, &questions, mode, opts)?;
            write_or_print(out.as_deref(), &write_report(&report, mode))?;
        }
        Command::Stats => {
            let s = &pipeline.resource.stats;
            println!("senses\t{}", pipeline.dictionary.records().len());
            println!("lemmas\t{}", pipeline.dictionary.lemmas().count());
            println!("suffixes\t{}", pipeline.model.suffixes.len());
            println!("stems\t{}", pipeline.model.stems.len());
            println!("wsd_rules\t{}", pipeline.rules.len());
            println!("patterns\t{}", pipeline.patterns.len());
            println!("entries\t{}", s.entries_processed);
            println!("candidates\t{}", s.candidates_generated);
            println!("accepted\t{}", s.derivatives_accepted);
            println!("instructions\t{}", s.instructions_total);
            println!("unmatched_instructions\t{}", s.instructions_unmatched);
            if let Some(r) = &pipeline.symmetrized {
                println!("back_instructions\t{}", r.added.len());
                println!("unencodable\t{}", r.unencodable.len());
            }
        }
        Command::Audit { gold, sample } => {
            let gold = load_audit_gold(gold)?;
            let audit = audit_precision(&pipeline.resource, *sample, &gold, config.run.seed)?;
            println!(
                "precision\t{}/{}\t{:.4}",
                audit.correct,
                audit.sampled,
                ratio_to_f64(audit.precision())
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
