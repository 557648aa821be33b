use std::path::Path;

use anyhow::{anyhow, Result};
use plotters::prelude::*;

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Default)]
pub struct Figure {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Labelled single points drawn as circles.
    pub markers: Vec<(String, (f64, f64))>,
    /// Shade the region above this series.
    pub shade_above: Option<usize>,
}

impl Figure {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Figure {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            ..Default::default()
        }
    }

    pub fn line(&mut self, name: impl Into<String>, points: Vec<(f64, f64)>) {
        self.series.push(Series {
            name: name.into(),
            points,
        });
    }

    fn bounds(&self) -> Option<((f64, f64), (f64, f64))> {
        let pts = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .chain(self.markers.iter().map(|(_, p)| p))
            .filter(|(x, y)| x.is_finite() && y.is_finite());
        let mut b: Option<((f64, f64), (f64, f64))> = None;
        for &(x, y) in pts {
            b = Some(match b {
                None => ((x, x), (y, y)),
                Some(((x0, x1), (y0, y1))) => ((x0.min(x), x1.max(x)), (y0.min(y), y1.max(y))),
            });
        }
        b.map(|((x0, x1), (y0, y1))| (pad(x0, x1), pad(y0, y1)))
    }
}

fn pad(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let m = 0.05 * (hi - lo);
        (lo - m, hi + m)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn tick(v: &f64) -> String {
    if v.abs() >= 1e5 || (v.abs() < 1e-3 && *v != 0.0) {
        format!("{v:.2e}")
    } else {
        format!("{v}")
    }
}

pub fn render_svg(path: &Path, fig: &Figure) -> Result<()> {
    let ((x0, x1), (y0, y1)) = fig.bounds().ok_or_else(|| anyhow!("nothing to plot"))?;
    let root = SVGBackend::new(path, (900, 600)).into_drawing_area();
    root.fill(&WHITE)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(&fig.title, ("sans-serif", 22))
        .margin(16)
        .x_label_area_size(44)
        .y_label_area_size(80)
        .build_cartesian_2d(x0..x1, y0..y1)?;
    chart
        .configure_mesh()
        .x_desc(fig.x_label.as_str())
        .y_desc(fig.y_label.as_str())
        .y_label_formatter(&tick)
        .draw()?;
    if let Some(i) = fig.shade_above {
        let s = &fig.series[i];
        let upper: Vec<(f64, f64)> = s.points.iter().map(|&(x, _)| (x, y1)).collect();
        let poly: Vec<(f64, f64)> = s.points.iter().copied().chain(upper.into_iter().rev()).collect();
        chart.draw_series(std::iter::once(Polygon::new(poly, BLUE.mix(0.12).filled())))?;
    }
    for (i, s) in fig.series.iter().enumerate() {
        let color = Palette99::pick(i).to_rgba();
        let pts: Vec<(f64, f64)> = s
            .points
            .iter()
            .copied()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .collect();
        chart
            .draw_series(LineSeries::new(pts, color.stroke_width(2)))?
            .label(s.name.as_str())
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 18, y)], color.stroke_width(2)));
    }
    for (label, (x, y)) in &fig.markers {
        chart.draw_series(std::iter::once(Circle::new((*x, *y), 5, RED.filled())))?;
        chart.draw_series(std::iter::once(Text::new(
            label.clone(),
            (*x, *y),
            ("sans-serif", 14).into_font(),
        )))?;
    }
    if !fig.series.is_empty() {
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.85))
            .border_style(BLACK)
            .draw()?;
    }
    root.present()?;
    Ok(())
}
