use std::io::Write;

fn main() {
    let exit = packing_cli::run(std::env::args());
    print!("{}", exit.stdout);
    eprint!("{}", exit.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(exit.code);
}
