//! Static SVG of a domain, one metric sphere and one tangent unit ball.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use hilbert_core::measure::unit_ball;
use hilbert_core::{metric, Domain, Error, Point, Vector};

const SIZE: f64 = 512.0;

fn path(points: &[Point], to_px: impl Fn(Point) -> (f64, f64)) -> String {
    let mut s = String::new();
    for (k, p) in points.iter().enumerate() {
        let (x, y) = to_px(*p);
        let _ = write!(s, "{}{x:.3},{y:.3} ", if k == 0 { 'M' } else { 'L' });
    }
    s.push('Z');
    s
}

pub fn render(d: &Domain, r: f64, p: Point, samples: usize, ball_scale: f64) -> Result<String, Error> {
    if samples < 3 {
        return Err(Error::InvalidArgument("need at least 3 samples".into()));
    }
    let (lo, hi) = d.bounding_box();
    let half = (hi.x - lo.x).max(hi.y - lo.y) * 0.55;
    let c = (lo + hi) * 0.5;
    let k = SIZE / (2.0 * half);
    let to_px = |q: Point| ((q.x - c.x) * k + SIZE / 2.0, SIZE / 2.0 - (q.y - c.y) * k);

    let boundary: Vec<Point> = if d.is_polygonal() {
        (0..d.vertex_count()).map(|i| d.vertex(i)).collect()
    } else {
        (0..samples).map(|i| Vector::polar(TAU * i as f64 / samples as f64)).collect()
    };
    let angles: Vec<f64> = (0..samples).map(|i| TAU * i as f64 / samples as f64).collect();
    let sphere = metric::metric_sphere_polyline(d, Vector::zero(), r, &angles)?;
    let ball: Vec<Vector> = if d.is_polygonal() {
        unit_ball(d, p)?.vertices
    } else {
        angles
            .iter()
            .map(|&a| {
                let u = Vector::polar(a);
                metric::finsler_norm(d, p, u).map(|f| u / f)
            })
            .collect::<Result<_, _>>()?
    };
    let ball: Vec<Point> = ball.iter().map(|v| p + *v * ball_scale).collect();

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(s, r##"<path d="{}" fill="#f2f2f2" stroke="#000000" stroke-width="1"/>"##, path(&boundary, to_px));
    let _ = writeln!(s, r##"<path d="{}" fill="none" stroke="#1f5fbf" stroke-width="1"/>"##, path(&sphere, to_px));
    let _ = writeln!(s, r##"<path d="{}" fill="#d95f02" fill-opacity="0.3" stroke="#d95f02" stroke-width="1"/>"##, path(&ball, to_px));
    let (x0, y0) = to_px(Vector::zero());
    let (px, py) = to_px(p);
    let _ = writeln!(s, r##"<circle cx="{x0:.3}" cy="{y0:.3}" r="2" fill="#000000"/>"##);
    let _ = writeln!(s, r##"<circle cx="{px:.3}" cy="{py:.3}" r="2" fill="#d95f02"/>"##);
    let _ = writeln!(
        s,
        r#"<text x="8" y="{}" font-family="sans-serif" font-size="12">S(0, {r}) and {ball_scale}·B(p) at p = ({}, {})</text>"#,
        SIZE - 8.0,
        p.x,
        p.y
    );
    s.push_str("</svg>\n");
    Ok(s)
}
