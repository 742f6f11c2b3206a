use clap::Parser;

fn main() {
    let cli = match coverhom::cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // exit code 2 is reserved for inconclusive verdicts
            std::process::exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    std::process::exit(coverhom::cli::run(cli));
}
