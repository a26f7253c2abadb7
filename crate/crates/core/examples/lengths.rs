//! Reads Schottky data (a JSON file, or the built-in pants surface), checks
//! the Schottky conditions and lists primitive geodesic lengths.
//!
//! cargo run --example lengths -- data/pants.json 3

use schottky_zeta::schottky::{self, SchottkyFile};
use schottky_zeta::SchottkyData;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let data = match args.next() {
        Some(path) => serde_json::from_str::<SchottkyFile>(&std::fs::read_to_string(path)?)?.into_data()?,
        None => SchottkyData::standard_pants(),
    };
    let m_max: usize = args.next().map(|m| m.parse()).transpose()?.unwrap_or(3);

    let violations = data.validate();
    if !violations.is_empty() {
        for v in violations {
            eprintln!("{v}");
        }
        std::process::exit(2);
    }
    println!("rank {}, euler characteristic {}", data.rank(), data.euler_characteristic());
    for c in schottky::primitive_classes(&data, m_max) {
        println!("{:>3}  {:<14} {:.12}", c.word_length, c.representative.to_string(), c.length);
    }
    Ok(())
}
