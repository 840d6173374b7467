use clap::Parser;

fn main() {
    let cli = cfermat::commands::Cli::parse();
    let (text, exit) = cfermat::execute(&cli);
    println!("{text}");
    std::process::exit(exit);
}
