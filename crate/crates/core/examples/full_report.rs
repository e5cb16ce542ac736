use bmhad_core::report::{run, ReportConfig, Suite};

fn main() {
    let suite = std::env::args().nth(1).map(|s| s.parse().expect("suite")).unwrap_or(Suite::All);
    let r = run(suite, &ReportConfig::default());
    print!("{}", r.to_pretty());
}
