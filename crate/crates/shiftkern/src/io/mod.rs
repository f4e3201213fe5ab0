//! File formats: PGM images, CSV matrices and JSON reports.

mod pgm;
mod report;

pub use pgm::{read_pgm, write_pgm, PgmError, PgmImage, PgmMagic};
pub use report::{
    csv_matrix_string, expansion_csv_string, json_report_string, write_csv_matrix,
    write_expansion_csv, write_json_report, FitReport, ReportError,
};
