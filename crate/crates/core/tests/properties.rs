use std::f64::consts::{PI, TAU};

use hilbert_core::constructions::{disk, no_limit_domain, regular_polygon, square, zero_entropy_domain, TowerSequenceSpec};
use hilbert_core::measure::{unit_ball_area, MeasureContext, QuadratureSpec};
use hilbert_core::metric::{finsler_norm, hilbert_distance};
use hilbert_core::{convex_hull, Domain, Matrix, Point, Vector};
use proptest::prelude::*;

fn domains() -> Vec<Domain> {
    let tower = TowerSequenceSpec::parse("3,20,500").unwrap();
    vec![
        disk(),
        square(),
        regular_polygon(5).unwrap(),
        regular_polygon(64).unwrap(),
        zero_entropy_domain(12).unwrap(),
        no_limit_domain(&tower).unwrap().0,
        Domain::from_vertices(vec![Vector::new(-0.3, -1.0), Vector::new(2.0, -0.5), Vector::new(0.4, 1.5), Vector::new(-1.2, 0.2)]).unwrap(),
    ]
}

/// Interior point at fraction `f` of the way from 0 to the boundary.
fn point(d: &Domain, angle: f64, f: f64) -> Point {
    let u = Vector::polar(angle);
    u * (d.t_plus(Vector::zero(), u).unwrap() * f)
}

fn pt() -> impl Strategy<Value = (f64, f64)> {
    (0.0..TAU, 0.0..0.97f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn metric_axioms(k in 0usize..7, a in pt(), b in pt(), c in pt()) {
        let d = &domains()[k];
        let (p, q, r) = (point(d, a.0, a.1), point(d, b.0, b.1), point(d, c.0, c.1));
        let pq = hilbert_distance(d, p, q).unwrap();
        let qp = hilbert_distance(d, q, p).unwrap();
        let pr = hilbert_distance(d, p, r).unwrap();
        let qr = hilbert_distance(d, q, r).unwrap();
        prop_assert!(pq >= 0.0);
        prop_assert_eq!(hilbert_distance(d, p, p).unwrap(), 0.0);
        prop_assert!((pq - qp).abs() <= 1e-12 * (1.0 + pq), "{} vs {}", pq, qp);
        prop_assert!(pr <= pq + qr + 1e-12 * (1.0 + pr), "{} > {} + {}", pr, pq, qr);
    }

    #[test]
    fn collinear_additivity(k in 0usize..7, a in pt(), b in pt(), s in 0.0..1.0f64) {
        let d = &domains()[k];
        let (p, r) = (point(d, a.0, a.1), point(d, b.0, b.1));
        let q = p + (r - p) * s;
        let whole = hilbert_distance(d, p, r).unwrap();
        let parts = hilbert_distance(d, p, q).unwrap() + hilbert_distance(d, q, r).unwrap();
        prop_assert!((whole - parts).abs() <= 1e-10 * (1.0 + whole), "{} vs {}", whole, parts);
    }

    #[test]
    fn linear_invariance(k in 1usize..7, a in pt(), b in pt(), m in prop::array::uniform4(-2.0..2.0f64)) {
        let mat = Matrix::new(m[0], m[1], m[2], m[3]);
        prop_assume!(mat.det().abs() > 0.1);
        let d = &domains()[k];
        let img = d.linear_image(&mat).unwrap();
        let (p, q) = (point(d, a.0, a.1), point(d, b.0, b.1));
        let before = hilbert_distance(d, p, q).unwrap();
        let after = hilbert_distance(&img, mat.apply(p), mat.apply(q)).unwrap();
        prop_assert!((before - after).abs() <= 1e-9 * (1.0 + before), "{} vs {}", before, after);
    }

    #[test]
    fn chord_consistency(k in 0usize..7, a in pt(), angle in 0.0..TAU) {
        let d = &domains()[k];
        let p = point(d, a.0, a.1);
        let v = Vector::polar(angle);
        let c = d.chord(p, v).unwrap();
        prop_assert!(d.contains(p + v * (c.t_plus * (1.0 - 1e-9))));
        prop_assert!(!d.contains(p + v * (c.t_plus * (1.0 + 1e-9))));
        prop_assert!(d.contains(p - v * (c.t_minus * (1.0 - 1e-9))));
        prop_assert!(!d.contains(p - v * (c.t_minus * (1.0 + 1e-9))));
        let f = finsler_norm(d, p, v).unwrap();
        prop_assert!((f - 0.5 * (1.0 / c.t_minus + 1.0 / c.t_plus)).abs() <= 1e-15 * f);
        // F is the derivative of the distance along the chord
        let h = 1e-6 * c.t_plus.min(c.t_minus);
        let fd = hilbert_distance(d, p, p + v * h).unwrap() / h;
        prop_assert!((fd - f).abs() <= 1e-5 * f, "{} vs {}", fd, f);
    }

    #[test]
    fn rings_agree_with_explicit_polygon(a in pt(), angle in 0.0..TAU) {
        let d = &domains()[5];
        let explicit = Domain::Polygon(d.materialize().unwrap());
        let p = point(d, a.0, a.1);
        let v = Vector::polar(angle);
        let (c, e) = (d.chord(p, v).unwrap(), explicit.chord(p, v).unwrap());
        prop_assert!((c.t_plus - e.t_plus).abs() <= 1e-12 * e.t_plus);
        prop_assert!((c.t_minus - e.t_minus).abs() <= 1e-12 * e.t_minus);
    }

    #[test]
    fn hull_is_idempotent(pts in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 3..60)) {
        let pts: Vec<Point> = pts.into_iter().map(|(x, y)| Vector::new(x, y)).collect();
        if let Ok(h) = convex_hull(&pts) {
            let verts: Vec<Point> = (0..h.vertex_count()).map(|k| h.vertex(k)).collect();
            let again = convex_hull(&verts).unwrap();
            prop_assert_eq!(again.vertex_count(), h.vertex_count());
            for k in 0..h.vertex_count() {
                prop_assert_eq!(again.vertex(k), h.vertex(k));
            }
            for p in &pts {
                prop_assert!(!h.contains(*p) || verts.iter().all(|v| v != p));
            }
        }
    }

    #[test]
    fn inclusion_monotonicity(n in 3usize..40, a in pt(), b in pt()) {
        // the inscribed n-gon sits inside the 2n-gon, which sits inside the disk
        let (small, big, outer) = (regular_polygon(n).unwrap(), regular_polygon(2 * n).unwrap(), disk());
        let (p, q) = (point(&small, a.0, a.1), point(&small, b.0, b.1));
        let ds = hilbert_distance(&small, p, q).unwrap();
        let db = hilbert_distance(&big, p, q).unwrap();
        let dd = hilbert_distance(&outer, p, q).unwrap();
        prop_assert!(ds >= db * (1.0 - 1e-12) && db >= dd * (1.0 - 1e-12));
        let (as_, ab, ad) = (unit_ball_area(&small, p).unwrap(), unit_ball_area(&big, p).unwrap(), unit_ball_area(&outer, p).unwrap());
        prop_assert!(as_ <= ab * (1.0 + 1e-12) && ab <= ad * (1.0 + 1e-12));
    }
}

#[test]
fn sector_partitions_add_up() {
    let q = QuadratureSpec { rel_tol: 1e-10, ..Default::default() };
    for d in [disk(), square(), regular_polygon(7).unwrap(), zero_entropy_domain(6).unwrap()] {
        let ctx = MeasureContext::new(&d).unwrap();
        for r in [0.5, 2.0, 5.0] {
            let whole = ctx.ball_volume(r, &q).unwrap().value;
            let cuts = [0.0, 0.3, 1.7, 2.2, PI, 4.0, 5.9, TAU];
            let sum: f64 = cuts.windows(2).map(|w| ctx.sector_ball_volume(r, w[0], w[1], None, &q).unwrap().value).sum();
            assert!((sum - whole).abs() <= 1e-8 * whole, "R={r}: {sum} vs {whole}");
            let full = ctx.sector_ball_volume(r, 0.0, TAU, None, &q).unwrap().value;
            assert!((full - whole).abs() <= 1e-9 * whole);
        }
    }
}

#[test]
fn disk_sectors_scale_with_angle() {
    let ctx = MeasureContext::new(&disk()).unwrap();
    let q = QuadratureSpec::default();
    let whole = ctx.ball_volume(3.0, &q).unwrap().value;
    for phi in [0.1, 1.0, 2.5] {
        let s = ctx.sector_ball_volume(3.0, 0.7, 0.7 + phi, None, &q).unwrap().value;
        assert!((s - phi / TAU * whole).abs() <= 1e-9 * whole);
    }
}

#[test]
fn unit_ball_vertices_lie_on_the_unit_sphere() {
    let d = regular_polygon(9).unwrap();
    let ctx = MeasureContext::new(&d).unwrap();
    for p in [Vector::new(0.1, 0.2), Vector::new(-0.6, 0.3), Vector::new(0.0, -0.85)] {
        let ub = ctx.unit_ball(p).unwrap();
        assert!(ub.vertices.len() <= 18);
        let n = ub.vertices.len();
        let shoelace = 0.5 * (0..n).map(|k| ub.vertices[k].cross(ub.vertices[(k + 1) % n])).sum::<f64>();
        assert!((shoelace - ub.area).abs() <= 1e-12 * ub.area);
        for v in &ub.vertices {
            assert!((finsler_norm(&d, p, *v).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
