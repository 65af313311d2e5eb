fn main() {
    std::process::exit(dihedral_isotopy::cli::run(std::env::args_os()));
}
