use std::process;

use clap::Parser;

use opsrec::args::{CatalogueCommand, Cli, Command, RulesCommand};
use opsrec::config::RunConfig;
use opsrec::pipeline;

fn main() {
    let cli = Cli::parse();
    let cfg = match RunConfig::resolve(&cli) {
        Ok(cfg) => cfg,
        Err(err) => {
            eprintln!("error: {err}");
            process::exit(err.exit_code());
        }
    };
    eprintln!("{}", cfg.banner());

    let result = match cli.command {
        Command::Synth { spec, n, out } => pipeline::cmd_synth(&cfg, &spec, n, &out),
        Command::Train { approach } => pipeline::cmd_train(&cfg, approach),
        Command::Evaluate => pipeline::cmd_evaluate(&cfg),
        Command::Recommend {
            nature,
            data_type,
            approach,
        } => pipeline::cmd_recommend(
            &cfg,
            opsrec_core::DataContext { nature, data_type },
            approach,
        ),
        Command::Rules {
            command: RulesCommand::Extract { out },
        } => pipeline::cmd_rules_extract(&cfg, &out),
        Command::Catalogue {
            command: CatalogueCommand::Validate { path },
        } => pipeline::cmd_catalogue_validate(&cfg, path.as_deref()),
    };

    if let Err(err) = result {
        eprintln!("error: {err}");
        process::exit(err.exit_code());
    }
}
