use clap::Parser;
use slnh_cli::{run, write_file, Cli};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors are input errors; --help and --version are not
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            match &cli.out {
                Some(path) => {
                    if let Err(e) = write_file(path, &outcome.report) {
                        eprintln!("slnh: {e}");
                        return ExitCode::from(1);
                    }
                }
                None => print!("{}", outcome.report),
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("slnh: {e}");
            ExitCode::from(1)
        }
    }
}
