use clap::Parser;

fn main() -> std::process::ExitCode {
    let cli = stabcover_cli::Cli::parse();
    match stabcover_cli::run(&cli) {
        Ok(code) => std::process::ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::ExitCode::from(1)
        }
    }
}
