//! CSV result rows, the aligned text table, and the summary JSON.

use serde::Serialize;

pub const CSV_HEADER: &str =
    "N,scheme,error_l2,iterations,residual,cond_estimate,sigma2,sigmaNm2,wall_ms";

/// One measurement: a `(N, scheme)` cell of an experiment. Quantities that
/// were not computed (or whose solve failed) are NaN.
#[derive(Debug, Clone)]
pub struct Row {
    pub n: usize,
    pub scheme: String,
    pub error_l2: f64,
    pub iterations: usize,
    pub residual: f64,
    pub cond_estimate: f64,
    pub sigma2: f64,
    pub sigma_nm2: f64,
    pub wall_ms: u64,
}

fn fmt(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.6e}")
    }
}

impl Row {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.scheme,
            fmt(self.error_l2),
            self.iterations,
            fmt(self.residual),
            fmt(self.cond_estimate),
            fmt(self.sigma2),
            fmt(self.sigma_nm2),
            self.wall_ms
        )
    }
}

fn field<T: std::str::FromStr>(s: &str, line: usize, name: &str) -> Result<T, String> {
    s.parse()
        .map_err(|_| format!("line {line}: cannot parse {name} from '{s}'"))
}

/// Parses a result CSV (header required) back into rows.
pub fn parse_csv(text: &str) -> Result<Vec<Row>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        Some(h) => return Err(format!("unexpected header '{h}'")),
        None => return Err("empty input".to_string()),
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(format!("line {}: expected 9 fields, got {}", k + 2, f.len()));
        }
        rows.push(Row {
            n: field(f[0], k + 2, "N")?,
            scheme: f[1].to_string(),
            error_l2: field(f[2], k + 2, "error_l2")?,
            iterations: field(f[3], k + 2, "iterations")?,
            residual: field(f[4], k + 2, "residual")?,
            cond_estimate: field(f[5], k + 2, "cond_estimate")?,
            sigma2: field(f[6], k + 2, "sigma2")?,
            sigma_nm2: field(f[7], k + 2, "sigmaNm2")?,
            wall_ms: field(f[8], k + 2, "wall_ms")?,
        });
    }
    Ok(rows)
}

const TABLE_HEADER: &str = "     N  scheme     |sigma2|  |sigmaN-2|  Iters        Errors";

/// Formats a result CSV as an aligned text table (columns: N, eigenvalue
/// moduli, iteration count, error).
pub fn emit_table(csv: &str) -> Result<String, String> {
    let rows = parse_csv(csv)?;
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for r in &rows {
        out.push_str(&format!(
            "{:>6}  {:<8} {:>9} {:>11} {:>6} {:>13}\n",
            r.n,
            r.scheme,
            fmt_table(r.sigma2),
            fmt_table(r.sigma_nm2),
            r.iterations,
            fmt(r.error_l2),
        ));
    }
    Ok(out)
}

fn fmt_table(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.6}")
    }
}

/// Parses the output of [`emit_table`] back into
/// `(N, scheme, sigma2, sigmaNm2, iterations, error)` tuples.
#[allow(dead_code)] // round-trip oracle for the table formatter
pub fn parse_table(text: &str) -> Result<Vec<(usize, String, f64, f64, usize, f64)>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == TABLE_HEADER => {}
        _ => return Err("missing table header".to_string()),
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 6 {
            return Err(format!("table line {}: expected 6 columns", k + 2));
        }
        rows.push((
            field(f[0], k + 2, "N")?,
            f[1].to_string(),
            field(f[2], k + 2, "sigma2")?,
            field(f[3], k + 2, "sigmaN-2")?,
            field(f[4], k + 2, "iterations")?,
            field(f[5], k + 2, "error")?,
        ));
    }
    Ok(rows)
}

/// Per-row verdict in the summary JSON.
#[derive(Debug, Serialize)]
pub struct RowSummary {
    pub n: usize,
    pub scheme: String,
    pub error_l2: Option<f64>,
    pub iterations: usize,
    pub pass: bool,
    pub note: String,
}

/// Overall experiment summary emitted after the CSV.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub preset: String,
    pub mu: f64,
    pub nu: Option<f64>,
    pub pass: bool,
    pub rows: Vec<RowSummary>,
}
