//! Static scatter plot of exact intersection-rank sums against bounds.

use std::fmt::Write;

use stallings_core::bounds::BoundReport;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 50.0;

type Series<'a> = (&'a str, &'a str, Vec<(i64, i64)>);

pub fn scatter(reports: &[&BoundReport]) -> String {
    let series: [Series; 2] = [
        (
            "spine bound (best i)",
            "#1f77b4",
            reports.iter().map(|r| (r.paper_bound_best, r.exact_sum)).collect(),
        ),
        (
            "Neumann total",
            "#d62728",
            reports
                .iter()
                .map(|r| {
                    let base = (r.inv1.rank as i64 - 1) * (r.inv2.rank as i64 - 1);
                    (base + r.eps_neumann, r.exact_sum)
                })
                .collect(),
        ),
    ];
    let max = series
        .iter()
        .flat_map(|(_, _, pts)| pts.iter().flat_map(|&(x, y)| [x, y]))
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let span = SIZE - 2.0 * MARGIN;
    let px = |v: i64| MARGIN + span * v as f64 / max;
    let py = |v: i64| SIZE - MARGIN - span * v as f64 / max;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, y0, x1, y1) = (px(0), py(0), px(max as i64), py(max as i64));
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="gray" stroke-dasharray="4 4"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">bound</text>"#,
        SIZE / 2.0,
        SIZE - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="15" y="{}" font-size="12" transform="rotate(-90 15 {})" text-anchor="middle">exact sum</text>"#,
        SIZE / 2.0,
        SIZE / 2.0
    );
    let _ = writeln!(out, r#"<text x="{x0}" y="{}" font-size="10">0</text>"#, y0 + 14.0);
    let _ = writeln!(out, r#"<text x="{x1}" y="{}" font-size="10">{max}</text>"#, y0 + 14.0);
    for (k, (name, color, pts)) in series.iter().enumerate() {
        for &(x, y) in pts {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}" fill-opacity="0.5"/>"#,
                px(x),
                py(y)
            );
        }
        let ly = MARGIN / 2.0 + 14.0 * k as f64;
        let _ = writeln!(out, r#"<circle cx="{}" cy="{ly}" r="4" fill="{color}"/>"#, MARGIN);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12">{name}</text>"#,
            MARGIN + 10.0,
            ly + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use stallings_core::bounds::compare;
    use stallings_core::core::core_from_words;
    use stallings_core::word::parse_words;

    #[test]
    fn one_point_per_report_and_series() {
        let c = core_from_words(&parse_words("a,baB", 2).unwrap(), 2).unwrap();
        let r = compare(&c, &c).unwrap();
        let text = scatter(&[&r, &r]);
        assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
        // two series of two points plus two legend markers
        assert_eq!(text.matches("<circle").count(), 6);
    }

    #[test]
    fn empty_plot() {
        assert_eq!(scatter(&[]).matches("<circle").count(), 2);
    }
}
