//! Convergence table assembly and serialization: CSV data files with full
//! double precision, gnuplot-ready log-log plot data, and a console
//! rendering rounded to two significant digits.

use std::fmt::Write as _;

/// One refinement row; `linf`/`sup_l2` are `None` when the run failed and
/// `error` carries the diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub cells: usize,
    pub dx: f64,
    pub linf: Option<f64>,
    pub sup_l2: Option<f64>,
    pub wall_ms: f64,
    pub error: Option<String>,
    /// True when the failure was a numerical blow-up (drives exit code 2).
    pub unstable: bool,
}

#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    /// TOML echo of the config that produced the table (metadata, kept out
    /// of the data files).
    pub config_echo: String,
    pub rows: Vec<TableRow>,
    pub total_wall_ms: f64,
}

/// Observed order between two rows: `ln(e_prev / e_next) / ln(J_next / J_prev)`.
fn order_between(prev: &TableRow, next: &TableRow) -> Option<(f64, f64)> {
    let (e0_inf, e0_l2) = (prev.linf?, prev.sup_l2?);
    let (e1_inf, e1_l2) = (next.linf?, next.sup_l2?);
    if e0_inf <= 0.0 || e1_inf <= 0.0 || e0_l2 <= 0.0 || e1_l2 <= 0.0 {
        return None;
    }
    let ratio = (next.cells as f64 / prev.cells as f64).ln();
    Some((
        (e0_inf / e1_inf).ln() / ratio,
        (e0_l2 / e1_l2).ln() / ratio,
    ))
}

impl ConvergenceTable {
    /// Orders against the previous successful row, indexed like `rows`.
    pub fn orders(&self) -> Vec<Option<(f64, f64)>> {
        let mut out = vec![None; self.rows.len()];
        let mut prev: Option<&TableRow> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(p) = prev {
                out[i] = order_between(p, row);
            }
            if row.linf.is_some() {
                prev = Some(row);
            }
        }
        out
    }

    /// Data CSV: header plus one line per successful row, full double
    /// precision (17 significant digits). Only `wall_ms` varies between
    /// identical runs; everything else is byte-deterministic.
    pub fn csv(&self) -> String {
        let mut out = String::from("J,dx,linf_nj,sup_l2,order_linf,order_l2,wall_ms\n");
        let orders = self.orders();
        for (row, order) in self.rows.iter().zip(orders) {
            let (Some(linf), Some(sup_l2)) = (row.linf, row.sup_l2) else {
                continue;
            };
            let (o_inf, o_l2) = match order {
                Some((a, b)) => (format!("{a:.16e}"), format!("{b:.16e}")),
                None => (String::new(), String::new()),
            };
            let _ = writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{},{},{:.3}",
                row.cells, row.dx, linf, sup_l2, o_inf, o_l2, row.wall_ms
            );
        }
        out
    }

    /// Gnuplot-ready whitespace columns `dx linf sup_l2` for log-log plots.
    pub fn plot_data(&self) -> String {
        let mut out = String::from("# dx linf_nj sup_l2\n");
        for row in &self.rows {
            let (Some(linf), Some(sup_l2)) = (row.linf, row.sup_l2) else {
                continue;
            };
            let _ = writeln!(out, "{:.16e} {:.16e} {:.16e}", row.dx, linf, sup_l2);
        }
        out
    }

    /// Console table rounded to two significant digits.
    pub fn console(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>8}  {:>10}  {:>10}  {:>10}  {:>10}",
            "J", "linf_nj", "order", "sup_l2", "order"
        );
        let orders = self.orders();
        for (row, order) in self.rows.iter().zip(orders) {
            match (row.linf, row.sup_l2) {
                (Some(linf), Some(sup_l2)) => {
                    let (o_inf, o_l2) = match order {
                        Some((a, b)) => (format!("{a:.2}"), format!("{b:.2}")),
                        None => ("--".to_string(), "--".to_string()),
                    };
                    let _ = writeln!(
                        out,
                        "{:>8}  {:>10}  {:>10}  {:>10}  {:>10}",
                        row.cells,
                        format!("{linf:.1e}"),
                        o_inf,
                        format!("{sup_l2:.1e}"),
                        o_l2
                    );
                }
                _ => {
                    let _ = writeln!(
                        out,
                        "{:>8}  FAILED: {}",
                        row.cells,
                        row.error.as_deref().unwrap_or("unknown")
                    );
                }
            }
        }
        out
    }

    /// Metadata file contents: config echo plus wall-clock timing.
    pub fn meta(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# experiment metadata (config echo + timing)");
        out.push_str(&self.config_echo);
        let _ = writeln!(out, "\n[timing]");
        let _ = writeln!(out, "total_ms = {:.3}", self.total_wall_ms);
        out
    }
}
