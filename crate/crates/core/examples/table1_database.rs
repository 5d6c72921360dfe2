//! Writes the ten solved HDTV optimal spectra as a wide-format database.
//!
//! cargo run -p chromatest --example table1_database -- data/db/table1_optimal_wide.csv

use std::fs::File;
use std::io::BufWriter;

use chromatest::optimal::{synthesize, table1_suite};
use chromatest::spectra_db::{write_wide_csv, SpectraRecord};
use chromatest::{Colorimeter, SolveOptions, WORKING_GRID};

fn main() -> chromatest::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "table1_optimal_wide.csv".into());
    let colorimeter = Colorimeter::standard();
    let records = table1_suite(&colorimeter, &SolveOptions::default())?
        .into_iter()
        .map(|entry| {
            let spectrum = synthesize(&entry.report.params, WORKING_GRID)?;
            SpectraRecord::new(entry.name, spectrum, &colorimeter)
        })
        .collect::<chromatest::Result<Vec<_>>>()?;
    write_wide_csv(&records, BufWriter::new(File::create(&path)?))?;
    eprintln!("wrote {} records to {path}", records.len());
    Ok(())
}
