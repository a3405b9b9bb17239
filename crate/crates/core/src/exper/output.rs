use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use super::{Aggregate, CellSummary, Experiment, ExperimentRecord};
use crate::error::Result;

pub const CSV_HEADER: [&str; 11] = [
    "experiment",
    "seed",
    "d",
    "t",
    "rank_spec",
    "mean_rank",
    "final_loss",
    "converged",
    "risk",
    "bound",
    "structure_ok",
];

/// Writes the header even for an empty record list.
pub fn write_csv<W: Write>(records: &[ExperimentRecord], w: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(CSV_HEADER)?;
    for rec in records {
        wtr.serialize(rec)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn parse_csv<R: Read>(r: R) -> Result<Vec<ExperimentRecord>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

pub fn emit_csv(records: &[ExperimentRecord], path: &Path) -> Result<()> {
    write_csv(records, std::fs::File::create(path)?)
}

pub fn read_csv(path: &Path) -> Result<Vec<ExperimentRecord>> {
    parse_csv(std::fs::File::open(path)?)
}

const WIDTH: f64 = 680.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 52.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn series_label(exp: Experiment, rank: Option<usize>) -> String {
    match (exp, rank) {
        (Experiment::VaryingRank, Some(r)) => format!("r̄ = {r}"),
        (_, Some(r)) => format!("r = {r}"),
        (_, None) => "r = d/t".to_string(),
    }
}

/// Series key: the varying-rank experiment draws one line per `r̄`; the others
/// draw one line per experiment (one per rank when the rank is held fixed).
fn series(cells: &[CellSummary]) -> BTreeMap<(Experiment, Option<usize>), Vec<&CellSummary>> {
    let mut by_exp: BTreeMap<Experiment, Vec<&CellSummary>> = BTreeMap::new();
    for c in cells {
        by_exp.entry(c.experiment).or_default().push(c);
    }
    let mut out: BTreeMap<_, Vec<&CellSummary>> = BTreeMap::new();
    for (exp, cs) in by_exp {
        let ranks_follow_t =
            exp != Experiment::VaryingRank && cs.iter().any(|c| c.rank_spec != cs[0].rank_spec);
        for c in cs {
            let key = if ranks_follow_t {
                None
            } else {
                Some(c.rank_spec)
            };
            out.entry((exp, key)).or_default().push(c);
        }
    }
    for v in out.values_mut() {
        v.sort_by_key(|c| c.t);
    }
    out
}

/// Static SVG of mean risk (markers, ±1 standard error) and the analytic
/// bound (lines) against `t` on a log₂ axis.
pub fn render_svg(agg: &Aggregate, title: &str, description: Option<&str>) -> String {
    let ts: Vec<usize> = agg.cells.iter().map(|c| c.t.max(1)).collect();
    let (lo, hi) = ts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| {
            let l = (t as f64).log2();
            (lo.min(l), hi.max(l))
        });
    let (lo, hi) = if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-9 {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    };
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let x = |t: usize| LEFT + ((t.max(1) as f64).log2() - lo) / (hi - lo) * pw;
    let y = |v: f64| TOP + (1.0 - v.clamp(0.0, 1.0)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    if let Some(desc) = description {
        let _ = writeln!(s, "<desc>{}</desc>", escape(desc));
    }
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        escape(title)
    );

    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let yy = y(v);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            yy + 4.0
        );
    }
    let mut tick_ts = ts.clone();
    tick_ts.sort_unstable();
    tick_ts.dedup();
    for &t in &tick_ts {
        let xx = x(t);
        let _ = writeln!(
            s,
            r##"<line x1="{xx:.2}" y1="{TOP}" x2="{xx:.2}" y2="{:.2}" stroke="#eee"/><text x="{xx:.2}" y="{:.2}" text-anchor="middle">{t}</text>"##,
            TOP + ph,
            TOP + ph + 16.0
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">training set size t (log scale)</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">risk</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    for (i, ((exp, rank), cells)) in series(&agg.cells).into_iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = cells
            .iter()
            .map(|c| format!("{:.2},{:.2}", x(c.t), y(c.bound)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            points.join(" ")
        );
        for c in &cells {
            let (cx, cy) = (x(c.t), y(c.mean_risk));
            let se = c.std_error();
            let _ = writeln!(
                s,
                r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="{color}"/><circle cx="{cx:.2}" cy="{cy:.2}" r="4" fill="{color}"/>"#,
                y(c.mean_risk - se),
                y(c.mean_risk + se)
            );
        }
        let ly = TOP + 14.0 + 20.0 * i as f64;
        let lx = LEFT + pw + 14.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.5"/><circle cx="{:.2}" cy="{ly:.2}" r="4" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 24.0,
            lx + 12.0,
            lx + 30.0,
            ly + 4.0,
            escape(&series_label(exp, rank))
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_plot(
    agg: &Aggregate,
    path: &Path,
    title: &str,
    description: Option<&str>,
) -> Result<()> {
    std::fs::write(path, render_svg(agg, title, description))?;
    Ok(())
}
