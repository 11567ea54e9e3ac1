//! Smallest enclosing circle of a planar point set.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: (f64, f64),
    pub radius: f64,
}

impl Circle {
    fn contains(&self, p: (f64, f64)) -> bool {
        let d = (p.0 - self.center.0).hypot(p.1 - self.center.1);
        d <= self.radius * (1.0 + 1e-12) + 1e-14
    }

    fn from_pair(a: (f64, f64), b: (f64, f64)) -> Self {
        let center = (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
        Self { center, radius: 0.5 * (a.0 - b.0).hypot(a.1 - b.1) }
    }

    /// Circumcircle; `None` when the points are (nearly) collinear.
    fn circumscribed(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Option<Self> {
        let (bx, by) = (b.0 - a.0, b.1 - a.1);
        let (cx, cy) = (c.0 - a.0, c.1 - a.1);
        let det = 2.0 * (bx * cy - by * cx);
        let scale = (bx * bx + by * by).max(cx * cx + cy * cy);
        if det.abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            return None;
        }
        let b2 = bx * bx + by * by;
        let c2 = cx * cx + cy * cy;
        let ux = (cy * b2 - by * c2) / det;
        let uy = (bx * c2 - cx * b2) / det;
        Some(Self { center: (a.0 + ux, a.1 + uy), radius: ux.hypot(uy) })
    }

    fn through_three(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Self {
        Self::circumscribed(a, b, c).unwrap_or_else(|| {
            [Self::from_pair(a, b), Self::from_pair(a, c), Self::from_pair(b, c)]
                .into_iter()
                .max_by(|x, y| x.radius.total_cmp(&y.radius))
                .expect("three candidates")
        })
    }
}

/// Minimal circle containing every point, or `None` for an empty slice.
///
/// Incremental construction in input order: `O(n)` typical, `O(n³)` worst
/// case, deterministic.
pub fn smallest_enclosing_circle(points: &[(f64, f64)]) -> Option<Circle> {
    let first = *points.first()?;
    let mut c = Circle { center: first, radius: 0.0 };
    for i in 1..points.len() {
        let p = points[i];
        if c.contains(p) {
            continue;
        }
        c = Circle { center: p, radius: 0.0 };
        for j in 0..i {
            let q = points[j];
            if c.contains(q) {
                continue;
            }
            c = Circle::from_pair(p, q);
            for &r in &points[..j] {
                if !c.contains(r) {
                    c = Circle::through_three(p, q, r);
                }
            }
        }
    }
    Some(c)
}
