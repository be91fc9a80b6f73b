use clap::Parser;

use dmulti_mads_cli::{dispatch, exit_code, Cli};

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code(&err));
        }
    }
}
