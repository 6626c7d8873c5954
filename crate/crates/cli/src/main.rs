use clap::Parser;

fn main() {
    let cli = radvol_cli::Cli::parse();
    if let Err(e) = radvol_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
