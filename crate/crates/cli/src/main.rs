use clap::Parser;

fn main() {
    let cli = qimseg_cli::Cli::parse();
    if let Err(e) = qimseg_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
