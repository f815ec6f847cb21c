use clap::Parser;
use ribbon_moduli::cli::{run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("RIBBON_LOG")).init();
    match run(Cli::parse()) {
        Ok(out) => print!("{out}"),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            std::process::exit(failure.code);
        }
    }
}
