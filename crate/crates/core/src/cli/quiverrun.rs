//! The `quiver` command: arbitrary acyclic quivers read from JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{emit, engine_error, Format, EXIT_INPUT, EXIT_OK, EXIT_PROPERTY, EXIT_SYMMETRY};
use crate::error::Result;
use crate::exactalg::QCoeff;
use crate::quiver::{check_slope_symmetry, parse_quiver_json, DimVector, QuiverFile, Slope, SymmetryReport};
use crate::skewseries::SeriesContext;
use crate::wallcross::{
    dt_properties, dt_table_from_series, hn_semistable_series, verify_wall_crossing, DtRecord, IdentityCheck,
    PropertyResult,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub d: DimVector,
    pub coeff: QCoeff,
}

/// Nonconstant part of one semistable series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeSeries {
    pub slope: Slope,
    pub terms: Vec<SeriesTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverReport {
    pub quiver: QuiverFile,
    pub degree: u32,
    pub symmetry: SymmetryReport,
    /// Decreasing slope.
    pub semistable: Vec<SlopeSeries>,
    pub identities: Vec<IdentityCheck>,
    /// Present only when slope symmetry holds.
    pub dt: Option<Vec<DtRecord>>,
    pub properties: BTreeMap<String, PropertyResult>,
}

impl QuiverReport {
    pub fn all_pass(&self) -> bool {
        self.identities.iter().all(|c| c.pass) && self.properties.values().all(|p| p.pass)
    }
}

pub fn quiver_report(text: &str, degree: u32) -> Result<QuiverReport> {
    let (q, st) = parse_quiver_json(text)?;
    let file = QuiverFile::from_parts(&q, &st);
    let symmetry = check_slope_symmetry(&q, &st, degree);
    let ctx = SeriesContext::new(q, st, degree)?;
    let series = hn_semistable_series(&ctx)?;
    let identities = verify_wall_crossing(&ctx)?;
    let semistable = series
        .iter()
        .rev()
        .map(|(a, s)| SlopeSeries {
            slope: *a,
            terms: s
                .terms()
                .iter()
                .filter(|(d, _)| !d.is_zero())
                .map(|(d, c)| SeriesTerm { d: d.clone(), coeff: c.clone() })
                .collect(),
        })
        .collect();
    let (dt, properties) = if symmetry.holds {
        let table = dt_table_from_series(&ctx, &series, &symmetry)?;
        let props = dt_properties(ctx.quiver(), &table)?;
        (Some(table), props)
    } else {
        (None, BTreeMap::new())
    };
    Ok(QuiverReport { quiver: file, degree, symmetry, semistable, identities, dt, properties })
}

fn pretty(r: &QuiverReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "quiver with {} vertices, arrows {:?}, theta {:?}, kappa {:?}, up to weight {}",
        r.quiver.vertices, r.quiver.arrows, r.quiver.theta, r.quiver.kappa, r.degree
    );
    match (&r.symmetry.holds, &r.symmetry.witness) {
        (true, _) => {
            let _ = writeln!(out, "slope symmetry holds up to weight {}", r.symmetry.bound);
        }
        (false, Some((d, e))) => {
            let _ = writeln!(out, "slope symmetry FAILS: <{d},{e}> != <{e},{d}> at equal slope");
        }
        (false, None) => {
            let _ = writeln!(out, "slope symmetry FAILS");
        }
    }
    for c in &r.identities {
        let _ = writeln!(out, "{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
        if let Some(w) = &c.witness {
            let _ = writeln!(out, "     first difference at t^{}: {} vs {}", w.monomial, w.left, w.right);
        }
    }
    let _ = writeln!(out, "\nsemistable series:");
    for s in &r.semistable {
        let _ = writeln!(out, "  slope {}:", s.slope);
        for t in &s.terms {
            let _ = writeln!(out, "    t^{}  {}", t.d, t.coeff);
        }
    }
    if let Some(dt) = &r.dt {
        let _ = writeln!(out, "\nDT invariants (nonzero):");
        for rec in dt.iter().filter(|x| !x.dt.is_zero()) {
            let p = match (&rec.p, &rec.violation) {
                (_, Some(v)) => v.clone(),
                (Some(p), None) => p.to_descending_string(),
                (None, None) => "0".into(),
            };
            let _ = writeln!(out, "  {}  slope {}  DT = {}  P = {}", rec.d, rec.slope, rec.dt, p);
        }
        let _ = writeln!(out);
        for (name, p) in &r.properties {
            let _ = writeln!(out, "{} {name} ({} checked)", if p.pass { "PASS" } else { "FAIL" }, p.checked);
            for w in &p.witnesses {
                let _ = writeln!(out, "     {w}");
            }
        }
    }
    out
}

fn csv(r: &QuiverReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    match &r.dt {
        Some(dt) => {
            let _ = w.write_record(["d", "slope", "P", "dt_min_exp_s", "dt_coeffs", "stable", "violation"]);
            for rec in dt {
                let v = serde_json::to_value(&rec.dt).unwrap_or_default();
                let _ = w.write_record([
                    rec.d.to_string(),
                    rec.slope.to_string(),
                    serde_json::to_string(&rec.p.clone().unwrap_or_default()).unwrap_or_default(),
                    v["min_exp_s"].to_string(),
                    v["coeffs"].to_string(),
                    rec.stable.to_string(),
                    rec.violation.clone().unwrap_or_default(),
                ]);
            }
        }
        None => {
            let _ = w.write_record(["slope", "d", "coefficient"]);
            for s in &r.semistable {
                for t in &s.terms {
                    let _ = w.write_record([s.slope.to_string(), t.d.to_string(), t.coeff.to_string()]);
                }
            }
        }
    }
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

pub(super) fn cmd_quiver(
    file: &Path,
    degree: u32,
    format: Format,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let text = match fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot read {}: {e}", file.display());
            return EXIT_INPUT;
        }
    };
    let report = match quiver_report(&text, degree) {
        Ok(r) => r,
        Err(e) => return engine_error(stderr, &e),
    };
    let body = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Csv => csv(&report),
        Format::Pretty => pretty(&report),
    };
    if let Err(code) = emit(&body, out, stdout, stderr) {
        return code;
    }
    if !report.all_pass() {
        let _ = writeln!(stderr, "property or identity check failed");
        return EXIT_PROPERTY;
    }
    if !report.symmetry.holds {
        let _ = writeln!(stderr, "slope symmetry fails; DT table omitted");
        return EXIT_SYMMETRY;
    }
    EXIT_OK
}
