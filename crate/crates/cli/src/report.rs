//! Output records and their renderers. Renderers only format values they
//! are handed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Orbital letters, skipping J.
const LETTERS: &[u8] = b"SPDFGHIKLMNOQRTUVWXYZ";

/// Shown under text tables that contain spin-corrected labels.
pub const LABEL_FOOTNOTE: &str =
    "* labels use the Dirac convention: l = kappa for kappa > 0, l = -kappa - 1 for kappa < 0, j = |kappa| - 1/2";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("kappa must be nonzero")]
    ZeroKappa,
    #[error("no orbital letter for l = {0}")]
    NoLetter(i64),
}

fn letter(l: i64) -> Result<char, LabelError> {
    usize::try_from(l)
        .ok()
        .and_then(|i| LETTERS.get(i))
        .map(|&b| b as char)
        .ok_or(LabelError::NoLetter(l))
}

/// Spectroscopic label such as "2P3/2" for a spin-corrected state.
pub fn spectroscopic_label(n: u32, kappa: i32) -> Result<String, LabelError> {
    if kappa == 0 {
        return Err(LabelError::ZeroKappa);
    }
    let kappa = i64::from(kappa);
    let l = if kappa > 0 { kappa } else { -kappa - 1 };
    Ok(format!("{n}{}{}/2", letter(l)?, 2 * kappa.abs() - 1))
}

/// "2P" style label for a spinless state.
pub fn orbital_label(n: u32, l: i32) -> Result<String, LabelError> {
    Ok(format!("{n}{}", letter(i64::from(l))?))
}

/// Scientific notation with 17 significant digits, enough to parse back
/// to the same f64.
pub fn machine_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn optional(x: Option<f64>) -> String {
    x.map(machine_float).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    ClosedForm,
    Shooting,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::ClosedForm => "closed-form",
            Source::Shooting => "shooting",
        }
    }
}

/// Anything that renders as one table row.
pub trait Record: Serialize {
    fn headers() -> &'static [&'static str];
    fn cells(&self) -> Vec<String>;
    /// Cells for human-readable output; defaults to the machine cells.
    fn text_cells(&self) -> Vec<String> {
        self.cells()
    }
    /// True when the row needs the label footnote in text output.
    fn footnote(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub mode: String,
    pub branch: String,
    pub n_principal: u32,
    pub angular: i32,
    pub label: String,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "E_ratio")]
    pub e_ratio: f64,
    #[serde(rename = "binding_eV")]
    pub binding_ev: f64,
    pub source: Source,
    /// kappa > 0 with no radial nodes; only present without strict validity
    pub non_dirac: bool,
}

impl Record for ReportRow {
    fn headers() -> &'static [&'static str] {
        &[
            "mode",
            "branch",
            "n",
            "angular",
            "D",
            "E_ratio",
            "binding_eV",
            "label",
            "source",
            "validity",
        ]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.mode.clone(),
            self.branch.clone(),
            self.n_principal.to_string(),
            self.angular.to_string(),
            machine_float(self.d),
            machine_float(self.e_ratio),
            machine_float(self.binding_ev),
            self.label.clone(),
            self.source.name().to_string(),
            if self.non_dirac { "non-Dirac" } else { "dirac" }.to_string(),
        ]
    }

    fn text_cells(&self) -> Vec<String> {
        let mut cells = self.cells();
        cells[4] = format!("{:.12}", self.d);
        cells[6] = format!("{:.10e}", self.binding_ev);
        if self.mode == "kg1" {
            cells[7].push('*');
        }
        cells
    }

    fn footnote(&self) -> bool {
        self.mode == "kg1"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaRecord {
    pub mode: String,
    pub branch: String,
    pub angular: i32,
    pub alpha: f64,
    pub eta: f64,
    pub root: f64,
    pub identity_residual: f64,
    pub tolerance: f64,
}

impl Record for EtaRecord {
    fn headers() -> &'static [&'static str] {
        &[
            "mode",
            "branch",
            "angular",
            "alpha",
            "eta",
            "root",
            "identity_residual",
            "tolerance",
        ]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.mode.clone(),
            self.branch.clone(),
            self.angular.to_string(),
            machine_float(self.alpha),
            machine_float(self.eta),
            machine_float(self.root),
            machine_float(self.identity_residual),
            machine_float(self.tolerance),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineRecord {
    pub mode: String,
    pub branch: String,
    pub upper: String,
    pub lower: String,
    #[serde(rename = "delta_eV")]
    pub delta_ev: f64,
    /// None for degenerate pairs
    pub nm: Option<f64>,
    #[serde(rename = "GHz")]
    pub ghz: Option<f64>,
    pub degenerate: bool,
}

impl Record for LineRecord {
    fn headers() -> &'static [&'static str] {
        &[
            "mode",
            "branch",
            "upper",
            "lower",
            "delta_eV",
            "nm",
            "GHz",
            "degenerate",
        ]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.mode.clone(),
            self.branch.clone(),
            self.upper.clone(),
            self.lower.clone(),
            machine_float(self.delta_ev),
            optional(self.nm),
            optional(self.ghz),
            self.degenerate.to_string(),
        ]
    }

    fn text_cells(&self) -> Vec<String> {
        let mut cells = self.cells();
        cells[4] = format!("{:.10e}", self.delta_ev);
        cells[5] = self
            .nm
            .map(|x| format!("{x:.6}"))
            .unwrap_or_else(|| "-".into());
        cells[6] = self
            .ghz
            .map(|x| format!("{x:.6}"))
            .unwrap_or_else(|| "-".into());
        cells
    }

    fn footnote(&self) -> bool {
        self.mode == "kg1"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveRecord {
    pub r: f64,
    #[serde(rename = "R")]
    pub radial: f64,
    #[serde(rename = "r2R2")]
    pub density: f64,
    pub residual: f64,
}

impl Record for WaveRecord {
    fn headers() -> &'static [&'static str] {
        &["r", "R", "r2R2", "residual"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            machine_float(self.r),
            machine_float(self.radial),
            machine_float(self.density),
            machine_float(self.residual),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRecord {
    pub mode: String,
    pub label: String,
    pub radial_degree: u32,
    pub angular: i32,
    pub e_closed: Option<f64>,
    pub e_shoot: Option<f64>,
    pub rel_err: Option<f64>,
    pub residual_max: Option<f64>,
    pub node_count_ok: bool,
    pub passed: bool,
    pub error: Option<String>,
}

impl Record for VerifyRecord {
    fn headers() -> &'static [&'static str] {
        &[
            "result",
            "mode",
            "label",
            "n_r",
            "angular",
            "e_closed",
            "e_shoot",
            "rel_err",
            "residual_max",
            "nodes_ok",
            "error",
        ]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            if self.passed { "PASS" } else { "FAIL" }.to_string(),
            self.mode.clone(),
            self.label.clone(),
            self.radial_degree.to_string(),
            self.angular.to_string(),
            optional(self.e_closed),
            optional(self.e_shoot),
            optional(self.rel_err),
            optional(self.residual_max),
            self.node_count_ok.to_string(),
            self.error.clone().unwrap_or_default(),
        ]
    }

    fn text_cells(&self) -> Vec<String> {
        let mut cells = self.cells();
        for i in [7, 8] {
            cells[i] = [self.rel_err, self.residual_max][i - 7]
                .map(|x| format!("{x:.2e}"))
                .unwrap_or_else(|| "-".into());
        }
        cells
    }

    fn footnote(&self) -> bool {
        self.mode == "kg1"
    }
}

pub fn render_csv<R: Record>(rows: &[R]) -> String {
    let mut out = R::headers().join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.cells().join(","));
        out.push('\n');
    }
    out
}

/// JSON array of objects, one per row.
pub fn render_json<R: Record>(rows: &[R]) -> String {
    let mut out = serde_json::to_string_pretty(rows).expect("records serialize");
    out.push('\n');
    out
}

/// One JSON object per line.
pub fn render_json_lines<R: Record>(rows: &[R]) -> String {
    rows.iter()
        .map(|r| serde_json::to_string(r).expect("records serialize") + "\n")
        .collect()
}

/// Aligned columns, with the label footnote when any row needs it.
pub fn render_text<R: Record>(rows: &[R]) -> String {
    let headers = R::headers();
    let body: Vec<Vec<String>> = rows.iter().map(Record::text_cells).collect();
    let widths: Vec<usize> = (0..headers.len())
        .map(|i| {
            body.iter()
                .map(|r| r[i].chars().count())
                .chain([headers[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    for r in &body {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    if rows.iter().any(Record::footnote) {
        out.push_str(LABEL_FOOTNOTE);
        out.push('\n');
    }
    out
}
