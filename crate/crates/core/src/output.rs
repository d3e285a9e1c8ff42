//! CSV rows for every emitted record. Floats print in shortest round-trip
//! form, so equal values always give equal bytes.

use std::fmt::Write as _;

use crate::agentsim::{SwitchEvent, Trajectory};
use crate::equilibrium::{BifurcationReport, Equilibrium, SweepRow, SWEEP_CSV_HEADER};
use crate::fixedpoint::FixedPoint;
use crate::hjb::HjbSolution;

/// A record with a fixed CSV column layout.
pub trait CsvRecord {
    fn csv_header() -> &'static str;
    fn csv_row(&self) -> String;
}

/// Header line followed by one line per record, each newline-terminated.
pub fn to_csv<T: CsvRecord>(records: &[T]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(T::csv_header());
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn join<I: IntoIterator<Item = String>>(fields: I) -> String {
    fields.into_iter().collect::<Vec<_>>().join(",")
}

fn floats<const N: usize>(v: [f64; N]) -> impl Iterator<Item = String> {
    v.into_iter().map(|f| f.to_string())
}

impl CsvRecord for HjbSolution {
    fn csv_header() -> &'static str {
        "case,mu,g_DI,g_DS,g_UI,g_US,valid,degenerate,slack1,slack2"
    }

    fn csv_row(&self) -> String {
        join(
            [self.case.label().to_string(), self.mu.to_string()]
                .into_iter()
                .chain(floats(self.g))
                .chain([self.valid.to_string(), self.degenerate.to_string()])
                .chain(floats(self.slack)),
        )
    }
}

fn eigen_fields(e: &[num_complex::Complex64; 3]) -> impl Iterator<Item = String> + '_ {
    e.iter().flat_map(|z| [z.re.to_string(), z.im.to_string()])
}

impl CsvRecord for FixedPoint {
    fn csv_header() -> &'static str {
        "case,x_DI,x_DS,x_UI,x_US,eig1_re,eig1_im,eig2_re,eig2_im,eig3_re,eig3_im,stable,method"
    }

    fn csv_row(&self) -> String {
        join(
            std::iter::once(self.case.label().to_string())
                .chain(floats(self.x.as_array()))
                .chain(eigen_fields(&self.eigenvalues))
                .chain([self.stable.to_string(), self.method.label().to_string()]),
        )
    }
}

impl CsvRecord for Equilibrium {
    fn csv_header() -> &'static str {
        "case,x_DI,x_DS,x_UI,x_US,u,g_DI,g_DS,g_UI,g_US,mu,\
         eig1_re,eig1_im,eig2_re,eig2_im,eig3_re,eig3_im,stable,efficient"
    }

    fn csv_row(&self) -> String {
        // The control is written as four digits, u_DI first, to stay one field.
        let u: String = self.u.as_array().iter().map(|v| char::from(b'0' + v)).collect();
        join(
            std::iter::once(self.case.label().to_string())
                .chain(floats(self.x.as_array()))
                .chain(std::iter::once(u))
                .chain(floats(self.g))
                .chain(std::iter::once(self.mu.to_string()))
                .chain(eigen_fields(&self.eigenvalues))
                .chain([self.stable.to_string(), self.efficient.to_string()]),
        )
    }
}

impl CsvRecord for SweepRow {
    fn csv_header() -> &'static str {
        SWEEP_CSV_HEADER
    }

    fn csv_row(&self) -> String {
        self.csv_line()
    }
}

impl CsvRecord for BifurcationReport {
    fn csv_header() -> &'static str {
        "x_star_ui,x_star_di,x_bar_star_ui,kappa_star,kappa_bar_star,kappa_1,kappa_2,kappa_3,kappa_4,\
         domain_i,domain_ii,domain_iii,kappa_increasing,equal_recovery"
    }

    fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|f| f.to_string()).unwrap_or_default();
        join(
            floats([self.x_star_ui, self.x_star_di, self.x_bar_star_ui])
                .chain([opt(self.kappa_star), opt(self.kappa_bar_star)])
                .chain(floats([self.kappa_1, self.kappa_2, self.kappa_3, self.kappa_4]))
                .chain(self.domains.iter().cloned())
                .chain([self.kappa_increasing.to_string(), self.equal_recovery.to_string()]),
        )
    }
}

impl CsvRecord for SwitchEvent {
    fn csv_header() -> &'static str {
        "t,old_case,new_case,mu"
    }

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.t,
            self.old_case.map(|c| c.label()).unwrap_or_default(),
            self.new_case.label(),
            self.mu
        )
    }
}

/// Trajectory samples as `t,x_DI,x_DS,x_UI,x_US,case`. With more than one
/// trajectory a leading `replica` column holds the index into `runs`.
pub fn trajectories_csv(runs: &[Trajectory]) -> String {
    let tagged = runs.len() > 1;
    let mut out = String::new();
    if tagged {
        out.push_str("replica,");
    }
    out.push_str("t,x_DI,x_DS,x_UI,x_US,case\n");
    for (i, run) in runs.iter().enumerate() {
        for s in &run.samples {
            if tagged {
                let _ = write!(out, "{i},");
            }
            let [a, b, c, d] = s.x().as_array();
            let case = s.case.map(|c| c.label()).unwrap_or_default();
            let _ = writeln!(out, "{},{a},{b},{c},{d},{case}", s.t);
        }
    }
    out
}
