use std::process::ExitCode;

use clap::Parser;
use hypermatch_cli::args::Cli;
use hypermatch_cli::run;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli
        .experiment()
        .and_then(|cfg| run(&cfg, cli.workers, &cli.out).map(|o| (cfg.job.name(), o)));
    match result {
        Ok((name, outcome)) => {
            println!("{name}: {}", outcome.summary);
            println!("wrote {}", cli.out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("hypermatch: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
