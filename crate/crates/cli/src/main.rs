use clap::Parser;

fn main() {
    let cli = pnc_cli::Cli::parse();
    if let Err(e) = pnc_cli::execute(&cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
