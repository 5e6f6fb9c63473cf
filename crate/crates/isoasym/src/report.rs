//! Report serializers. Both formats carry the same columns; JSON field
//! order is fixed by the struct layout, CSV rows repeat the family id
//! and overall verdict so each row stands alone.

use std::fmt::Write as _;

use crate::verify::VerificationReport;

pub fn report_to_json(r: &VerificationReport) -> String {
    serde_json::to_string_pretty(r).expect("report serialization is infallible")
}

fn csv_float(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x.is_infinite() {
        "inf".to_string()
    } else {
        format!("{x}")
    }
}

pub fn report_to_csv(r: &VerificationReport) -> String {
    let mut out =
        String::from("family_id,name,max_residual,tolerance,passed,sample_count,worst_u,worst_v,overall\n");
    for c in &r.checks {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.family_id,
            c.name,
            csv_float(c.max_residual),
            csv_float(c.tolerance),
            c.passed,
            c.sample_count,
            csv_float(c.worst_u),
            c.worst_v.map(csv_float).unwrap_or_default(),
            r.overall,
        )
        .unwrap();
    }
    out
}
