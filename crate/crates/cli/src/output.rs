//! Sweep tables (CSV) and heatmaps (SVG).

use std::fmt::Write as _;
use std::io::{Read, Write};

use parrondo_core::{CellStatus, SweepCell};

use crate::format::sig;

pub const CSV_HEADER: [&str; 7] = ["eps", "r", "p1", "p2", "pmix", "effect", "qgap"];

/// One CSV row as read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub eps: f64,
    pub r: f64,
    pub p1: f64,
    pub p2: f64,
    pub pmix: f64,
    pub effect: bool,
    pub qgap: Option<f64>,
}

impl From<&SweepCell> for CsvRow {
    fn from(c: &SweepCell) -> Self {
        Self {
            eps: c.eps,
            r: c.r,
            p1: c.p_gain_1,
            p2: c.p_gain_2,
            pmix: c.p_gain_mix,
            effect: c.effect,
            qgap: c.quantum_gap,
        }
    }
}

pub fn write_csv<W: Write>(out: W, cells: &[SweepCell]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for c in cells {
        w.write_record([
            sig(c.eps),
            sig(c.r),
            sig(c.p_gain_1),
            sig(c.p_gain_2),
            sig(c.p_gain_mix),
            c.effect.to_string(),
            c.quantum_gap.map(sig).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn bad(msg: String) -> csv::Error {
    csv::Error::from(std::io::Error::new(std::io::ErrorKind::InvalidData, msg))
}

pub fn read_csv<R: Read>(input: R) -> csv::Result<Vec<CsvRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("bad number {s:?}: {e}")));
    rd.records()
        .map(|rec| {
            let rec = rec?;
            let effect = match &rec[5] {
                "true" => true,
                "false" => false,
                other => return Err(bad(format!("bad effect flag {other:?}"))),
            };
            Ok(CsvRow {
                eps: num(&rec[0])?,
                r: num(&rec[1])?,
                p1: num(&rec[2])?,
                p2: num(&rec[3])?,
                pmix: num(&rec[4])?,
                effect,
                qgap: if rec[6].is_empty() { None } else { Some(num(&rec[6])?) },
            })
        })
        .collect()
}

const CELL: usize = 24;
const MARGIN_LEFT: usize = 80;
const MARGIN_TOP: usize = 30;
const MARGIN_BOTTOM: usize = 50;

fn lerp(a: u8, b: u8, t: f64) -> u8 {
    (a as f64 + (b as f64 - a as f64) * t).round() as u8
}

fn ramp(lo: [u8; 3], hi: [u8; 3], t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    format!("#{:02x}{:02x}{:02x}", lerp(lo[0], hi[0], t), lerp(lo[1], hi[1], t), lerp(lo[2], hi[2], t))
}

/// Heatmap with `r` across and `eps` upward, one `<rect>` per cell. Cells
/// showing the effect use a warm ramp, the rest a grey ramp, both scaled by
/// the mixed game's gain probability. Degenerate cells are left white.
pub fn render_svg(cells: &[SweepCell]) -> String {
    let n_eps = cells.iter().map(|c| c.eps_index + 1).max().unwrap_or(0);
    let n_r = cells.iter().map(|c| c.r_index + 1).max().unwrap_or(0);
    let finite = cells.iter().map(|c| c.p_gain_mix).filter(|p| p.is_finite());
    let lo = finite.clone().fold(f64::INFINITY, f64::min);
    let hi = finite.fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };

    let width = MARGIN_LEFT + n_r * CELL + 20;
    let height = MARGIN_TOP + n_eps * CELL + MARGIN_BOTTOM;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        svg,
        r#"<title>mixed-game gain probability over (r, eps); range {} to {}</title>"#,
        sig(lo),
        sig(hi)
    );
    for c in cells {
        let x = MARGIN_LEFT + c.r_index * CELL;
        let y = MARGIN_TOP + (n_eps - 1 - c.eps_index) * CELL;
        let (fill, class) = match (&c.status, c.effect) {
            (CellStatus::Degenerate(_), _) => ("#ffffff".to_string(), "degenerate"),
            (CellStatus::Ok, true) => (ramp([0xfe, 0xe0, 0x8b], [0xd7, 0x30, 0x27], (c.p_gain_mix - lo) / span), "effect"),
            (CellStatus::Ok, false) => (ramp([0xf0, 0xf0, 0xf0], [0x40, 0x40, 0x40], (c.p_gain_mix - lo) / span), "plain"),
        };
        let _ = writeln!(
            svg,
            r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="#999999" stroke-width="0.5" class="{class}"><title>eps={} r={} pmix={}</title></rect>"##,
            sig(c.eps),
            sig(c.r),
            sig(c.p_gain_mix)
        );
    }
    let axis_y = MARGIN_TOP + n_eps * CELL;
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">r</text>"#,
        MARGIN_LEFT + n_r * CELL / 2,
        axis_y + 35
    );
    let _ = writeln!(
        svg,
        r#"<text x="12" y="{}" font-family="sans-serif" font-size="12">eps</text>"#,
        MARGIN_TOP + n_eps * CELL / 2
    );
    for c in cells.iter().filter(|c| c.eps_index == 0) {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="9" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + c.r_index * CELL + CELL / 2,
            axis_y + 14,
            sig(c.r)
        );
    }
    for c in cells.iter().filter(|c| c.r_index == 0) {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="9" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 4,
            MARGIN_TOP + (n_eps - 1 - c.eps_index) * CELL + CELL / 2 + 3,
            sig(c.eps)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
